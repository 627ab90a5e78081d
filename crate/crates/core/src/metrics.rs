//! The stability metric λ₁ and the closed-form bounds it is checked against.

use std::fmt::Write as _;

use serde::Serialize;

use crate::additive::is_prime;
use crate::dihedral::{DihedralElement, GeneratingSet};
use crate::error::{Error, Result};
use crate::residue::ResidueSet;
use crate::wordlength::{bfs_lengths, lengths, Engine, WordLengthTable};

/// `⌊n/2⌋ + 1`, the upper bound on λ₁ for every three-reflection set.
pub fn bound_n_half(n: usize) -> u32 {
    (n / 2 + 1) as u32
}

/// `⌊p/3⌋ + 1`, the claimed bound for prime `p` when the seven differences
/// of `{0, a, b}` are distinct.
pub fn bound_prime_third(p: usize) -> u32 {
    (p / 3 + 1) as u32
}

/// `n` is prime and `0, ±a, ±b, ±(a-b)` are pairwise distinct mod `n`.
pub fn prime_condition(set: &GeneratingSet) -> bool {
    let n = set.modulus();
    if !is_prime(n) {
        return false;
    }
    let (a, b) = (set.a() as i64, set.b() as i64);
    ResidueSet::from_signed(n, [0, a, b, -a, -b, a - b, b - a]).len() == 7
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub g: DihedralElement,
    pub s: DihedralElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaReport {
    pub n: usize,
    pub given: GeneratingSet,
    pub canonical: GeneratingSet,
    /// Canonical form of `(-a, -b)`; shares every statistic but is kept apart.
    pub mirror: GeneratingSet,
    pub lambda1: u32,
    /// First `(g, s)` in index order with `l_S(g s g⁻¹) = lambda1`.
    pub witness: Witness,
    pub max_reflection_length: u32,
    pub bound_n_half: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_prime_third: Option<u32>,
    pub prime_condition_met: bool,
    pub engine: Engine,
    /// Set when both engines ran; false means their tables differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engines_agree: Option<bool>,
}

impl LambdaReport {
    pub fn tight(&self) -> bool {
        self.lambda1 == self.bound_n_half
    }

    pub const CSV_HEADER: &'static str = "n,a,b,lambda1,max_refl_len,bound,tight";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.given.a(),
            self.given.b(),
            self.lambda1,
            self.max_reflection_length,
            self.bound_n_half,
            self.tight()
        )
    }
}

/// λ₁ read off a finished word-length table.
pub fn lambda1_from_table(table: &WordLengthTable) -> LambdaReport {
    let set = table.set;
    let n = set.modulus();
    let gens = set.reflections();
    let mut best: Option<(u32, Witness)> = None;
    for g in (0..2 * n).map(|i| DihedralElement::from_index(n, i)) {
        for s in &gens {
            let c = g.conjugate(s).expect("same modulus");
            let len = table.length(&c);
            if best.is_none_or(|(max, _)| len > max) {
                best = Some((len, Witness { g, s: *s }));
            }
        }
    }
    let (lambda1, witness) = best.expect("D_n is nonempty");
    let prime_condition_met = prime_condition(&set);
    LambdaReport {
        n,
        given: set,
        canonical: set.canonical_form(),
        mirror: set.mirror_canonical(),
        lambda1,
        witness,
        max_reflection_length: table.max_reflection_length(),
        bound_n_half: bound_n_half(n),
        bound_prime_third: prime_condition_met.then(|| bound_prime_third(n)),
        prime_condition_met,
        engine: table.engine,
        engines_agree: None,
    }
}

pub fn lambda1(set: &GeneratingSet, engine: Engine) -> Result<LambdaReport> {
    Ok(lambda1_from_table(&lengths(set, engine)?))
}

/// λ₁ from the sumset engine, with the BFS table compared against it.
pub fn lambda1_cross_checked(set: &GeneratingSet) -> Result<LambdaReport> {
    let table = lengths(set, Engine::Sumset)?;
    let oracle = bfs_lengths(set)?;
    let mut report = lambda1_from_table(&table);
    report.engines_agree = Some(table.same_lengths(&oracle));
    Ok(report)
}

pub fn max_reflection_length(table: &WordLengthTable) -> u32 {
    table.max_reflection_length()
}

/// Max reflection length for `S' = {0, 1, n-1}` as a function of `n mod 4`.
pub fn predicted_interval_max(n: usize) -> u32 {
    match n % 4 {
        0 | 1 => (n / 2 + 1) as u32,
        _ => (n / 2) as u32,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharpnessReport {
    pub n: usize,
    pub measured_max_reflection_length: u32,
    pub predicted: u32,
    #[serde(rename = "match")]
    pub matched: bool,
}

impl SharpnessReport {
    pub const CSV_HEADER: &'static str = "n,a,b,max_refl_len,predicted,match";

    pub fn csv_row(&self) -> String {
        format!(
            "{},1,{},{},{},{}",
            self.n,
            self.n - 1,
            self.measured_max_reflection_length,
            self.predicted,
            self.matched
        )
    }
}

/// Measures the max reflection length under `{f, r f, r^(n-1) f}` and
/// compares it with [`predicted_interval_max`].
pub fn check_sharpness(n: usize, engine: Engine) -> Result<SharpnessReport> {
    if n < 3 {
        return Err(Error::invalid(format!(
            "sharpness check needs n >= 3, got {n}"
        )));
    }
    let set = GeneratingSet::new(n, 1, n - 1)?;
    let measured = lengths(&set, engine)?.max_reflection_length();
    let predicted = predicted_interval_max(n);
    Ok(SharpnessReport {
        n,
        measured_max_reflection_length: measured,
        predicted,
        matched: measured == predicted,
    })
}

/// `{f, r f, r^⌊√n⌋ f}`.
pub fn sqrt_presentation(n: usize) -> Result<GeneratingSet> {
    if n < 5 {
        return Err(Error::invalid(format!(
            "square-root presentation needs n >= 5, got {n}"
        )));
    }
    GeneratingSet::new(n, 1, n.isqrt())
}

/// Upper bound on every word length under [`sqrt_presentation`]: `b` blocks
/// of two letters for the coarse step, `s` two-letter blocks for the fine
/// step, one closing reflection.
pub fn sqrt_length_bound(n: usize) -> u32 {
    let root = n.isqrt();
    (2 * (root - 1) + 2 * n.div_ceil(root) + 1) as u32
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SqrtBoundReport {
    pub n: usize,
    pub set: GeneratingSet,
    pub max_length: u32,
    pub bound: u32,
    pub holds: bool,
    /// `max_length / √n`.
    pub ratio: f64,
}

impl SqrtBoundReport {
    pub const CSV_HEADER: &'static str = "n,a,b,max_length,bound,holds,ratio";

    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        let _ = write!(
            row,
            "{},{},{},{},{},{},{:.6}",
            self.n,
            self.set.a(),
            self.set.b(),
            self.max_length,
            self.bound,
            self.holds,
            self.ratio
        );
        row
    }
}

pub fn check_sqrt_bound(n: usize, engine: Engine) -> Result<SqrtBoundReport> {
    let set = sqrt_presentation(n)?;
    let max_length = lengths(&set, engine)?.max_length();
    let bound = sqrt_length_bound(n);
    Ok(SqrtBoundReport {
        n,
        set,
        max_length,
        bound,
        holds: max_length <= bound,
        ratio: max_length as f64 / (n as f64).sqrt(),
    })
}
