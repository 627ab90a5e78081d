//! Arithmetic in the dihedral group D_n and three-reflection generating sets.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::residue::{gcd, ResidueSet};

/// The element `r^rot f^refl` of D_n. Ordered by [`DihedralElement::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElement {
    n: usize,
    refl: bool,
    rot: usize,
}

impl DihedralElement {
    pub fn new(n: usize, rot: usize, refl: bool) -> Self {
        assert!(n > 0, "modulus must be positive");
        DihedralElement {
            n,
            rot: rot % n,
            refl,
        }
    }

    pub fn identity(n: usize) -> Self {
        DihedralElement::new(n, 0, false)
    }

    pub fn rotation(n: usize, i: usize) -> Self {
        DihedralElement::new(n, i, false)
    }

    pub fn reflection(n: usize, i: usize) -> Self {
        DihedralElement::new(n, i, true)
    }

    /// Rotations take indices `0..n`, reflections `n..2n`.
    pub fn from_index(n: usize, index: usize) -> Self {
        DihedralElement::new(n, index % n, index >= n)
    }

    pub fn index(&self) -> usize {
        self.rot + if self.refl { self.n } else { 0 }
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn rot(&self) -> usize {
        self.rot
    }

    pub fn is_reflection(&self) -> bool {
        self.refl
    }

    pub fn is_identity(&self) -> bool {
        !self.refl && self.rot == 0
    }

    /// `(r^i f^j)(r^k f^m) = r^(i + (-1)^j k) f^(j xor m)`.
    pub fn multiply(&self, other: &DihedralElement) -> Result<DihedralElement> {
        if self.n != other.n {
            return Err(Error::invalid(format!(
                "cannot multiply elements of D_{} and D_{}",
                self.n, other.n
            )));
        }
        let n = self.n;
        let k = if self.refl { n - other.rot } else { other.rot };
        Ok(DihedralElement::new(
            n,
            self.rot + k,
            self.refl ^ other.refl,
        ))
    }

    pub fn inverse(&self) -> DihedralElement {
        if self.refl {
            *self
        } else {
            DihedralElement::new(self.n, self.n - self.rot, false)
        }
    }

    /// `self · s · self⁻¹`.
    pub fn conjugate(&self, s: &DihedralElement) -> Result<DihedralElement> {
        self.multiply(s)?.multiply(&self.inverse())
    }

    /// The projection `r^i f^k ↦ i` onto Z_n.
    pub fn project(&self) -> usize {
        self.rot
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rot, self.refl) {
            (0, false) => write!(f, "e"),
            (0, true) => write!(f, "f"),
            (i, false) => write!(f, "r^{i}"),
            (i, true) => write!(f, "r^{i} f"),
        }
    }
}

impl Serialize for DihedralElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A three-reflection set `{f, r^a f, r^b f}`, kept as its projected
/// offsets `{0, a, b}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSet")]
pub struct GeneratingSet {
    n: usize,
    a: usize,
    b: usize,
}

#[derive(Deserialize)]
struct RawSet {
    n: usize,
    a: i64,
    b: i64,
}

impl TryFrom<RawSet> for GeneratingSet {
    type Error = Error;

    fn try_from(raw: RawSet) -> Result<Self> {
        GeneratingSet::from_signed(raw.n, raw.a, raw.b)
    }
}

impl GeneratingSet {
    /// Builds `{f, r^a f, r^b f}` in D_n.
    ///
    /// Three distinct reflections need three distinct offsets, so `n >= 3`,
    /// `a, b != 0 (mod n)` and `a != b (mod n)`. Sets that fail to generate
    /// D_n are accepted here; the word-length engines reject them.
    pub fn new(n: usize, a: usize, b: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!(
                "D_{n} has no three distinct reflections; need n >= 3"
            )));
        }
        let (a, b) = (a % n, b % n);
        if a == 0 || b == 0 || a == b {
            return Err(Error::invalid(format!(
                "offsets {{0, {a}, {b}}} are not distinct mod {n}"
            )));
        }
        Ok(GeneratingSet { n, a, b })
    }

    pub fn from_signed(n: usize, a: i64, b: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        let m = n as i64;
        GeneratingSet::new(n, a.rem_euclid(m) as usize, b.rem_euclid(m) as usize)
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// `S' = {0, a, b}`.
    pub fn offsets(&self) -> ResidueSet {
        ResidueSet::from_members(self.n, [0, self.a, self.b])
    }

    /// `[f, r^a f, r^b f]`.
    pub fn reflections(&self) -> [DihedralElement; 3] {
        [0, self.a, self.b].map(|i| DihedralElement::reflection(self.n, i))
    }

    pub fn gcd(&self) -> usize {
        gcd(gcd(self.a, self.b), self.n)
    }

    pub fn is_generating(&self) -> bool {
        self.gcd() == 1
    }

    pub(crate) fn require_generating(&self) -> Result<()> {
        if self.is_generating() {
            Ok(())
        } else {
            Err(Error::NotGenerating {
                n: self.n,
                a: self.a,
                b: self.b,
                gcd: self.gcd(),
            })
        }
    }

    /// The six offset pairs obtained by re-basing at each reflection and
    /// swapping the other two.
    pub fn orbit(&self) -> [(usize, usize); 6] {
        let n = self.n;
        let (a, b) = (self.a, self.b);
        let neg = |x: usize| (n - x) % n;
        let sub = |x: usize, y: usize| (x + n - y) % n;
        [
            (a, b),
            (b, a),
            (neg(a), sub(b, a)),
            (sub(b, a), neg(a)),
            (neg(b), sub(a, b)),
            (sub(a, b), neg(b)),
        ]
    }

    /// Lexicographically smallest `(a, b)` in the relabeling orbit.
    pub fn canonical_form(&self) -> GeneratingSet {
        let (a, b) = self.orbit().into_iter().min().expect("orbit is nonempty");
        GeneratingSet { n: self.n, a, b }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_form() == *self
    }

    /// Canonical form of the image under `r ↦ r⁻¹`, i.e. offsets `(-a, -b)`.
    /// Reported alongside the canonical form but never identified with it.
    pub fn mirror_canonical(&self) -> GeneratingSet {
        let n = self.n;
        GeneratingSet {
            n,
            a: n - self.a,
            b: n - self.b,
        }
        .canonical_form()
    }

    /// All canonical sets `a < b` for `n`, ascending.
    pub fn canonical_sets(n: usize) -> impl Iterator<Item = GeneratingSet> {
        (1..n)
            .flat_map(move |a| (a + 1..n).map(move |b| GeneratingSet { n, a, b }))
            .filter(GeneratingSet::is_canonical)
    }

    /// Every valid ordered pair `(a, b)` with `1 <= a != b <= n - 1`.
    pub fn all_sets(n: usize) -> impl Iterator<Item = GeneratingSet> {
        (1..n).flat_map(move |a| {
            (1..n)
                .filter(move |&b| b != a)
                .map(move |b| GeneratingSet { n, a, b })
        })
    }
}

impl fmt::Display for GeneratingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{f, r^{} f, r^{} f}} in D_{}", self.a, self.b, self.n)
    }
}
