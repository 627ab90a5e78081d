//! Dense subsets of the cyclic group Z_n and the set algebra on them.
//!
//! A [`ResidueSet`] is a bit table of length `n`, packed into 64-bit words.
//! Translation by `k` is a cyclic rotation of that table, so a sumset
//! `A + B` costs `|B|` rotations of `A`, each `O(n / 64)` word operations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD_BITS: usize = u64::BITS as usize;

fn word_count(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// `dst |= src << k`, discarding bits shifted past the end of `dst`.
fn or_shifted_up(dst: &mut [u64], src: &[u64], k: usize) {
    let (skip, bits) = (k / WORD_BITS, k % WORD_BITS);
    for (j, slot) in dst.iter_mut().skip(skip).enumerate() {
        let mut v = src[j] << bits;
        if bits != 0 && j > 0 {
            v |= src[j - 1] >> (WORD_BITS - bits);
        }
        *slot |= v;
    }
}

/// `dst |= src >> k`.
fn or_shifted_down(dst: &mut [u64], src: &[u64], k: usize) {
    let (skip, bits) = (k / WORD_BITS, k % WORD_BITS);
    for (i, slot) in dst.iter_mut().enumerate() {
        let j = i + skip;
        if j >= src.len() {
            break;
        }
        let mut v = src[j] >> bits;
        if bits != 0 && j + 1 < src.len() {
            v |= src[j + 1] << (WORD_BITS - bits);
        }
        *slot |= v;
    }
}

/// A subset of Z_n. Members are always kept in `[0, n)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ResidueSetRepr", try_from = "ResidueSetRepr")]
pub struct ResidueSet {
    n: usize,
    words: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct ResidueSetRepr {
    n: usize,
    members: Vec<usize>,
}

impl From<ResidueSet> for ResidueSetRepr {
    fn from(set: ResidueSet) -> Self {
        ResidueSetRepr {
            n: set.n,
            members: set.members(),
        }
    }
}

impl TryFrom<ResidueSetRepr> for ResidueSet {
    type Error = Error;

    fn try_from(repr: ResidueSetRepr) -> Result<Self> {
        if repr.n == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        if let Some(&m) = repr.members.iter().find(|&&m| m >= repr.n) {
            return Err(Error::invalid(format!(
                "member {m} out of range for modulus {}",
                repr.n
            )));
        }
        Ok(ResidueSet::from_members(repr.n, repr.members))
    }
}

impl ResidueSet {
    /// The empty subset of Z_n.
    ///
    /// Panics if `n == 0`.
    pub fn empty(n: usize) -> Self {
        assert!(n > 0, "modulus must be positive");
        ResidueSet {
            n,
            words: vec![0; word_count(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut set = ResidueSet::empty(n);
        set.words.iter_mut().for_each(|w| *w = u64::MAX);
        set.clear_tail();
        set
    }

    pub fn singleton(n: usize, x: usize) -> Self {
        let mut set = ResidueSet::empty(n);
        set.insert(x);
        set
    }

    /// Builds a set from residues, reducing each one mod `n`.
    pub fn from_members(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut set = ResidueSet::empty(n);
        for m in members {
            set.insert(m);
        }
        set
    }

    /// Like [`ResidueSet::from_members`] but accepts negative residues.
    pub fn from_signed(n: usize, members: impl IntoIterator<Item = i64>) -> Self {
        let modulus = n as i64;
        ResidueSet::from_members(
            n,
            members.into_iter().map(|m| m.rem_euclid(modulus) as usize),
        )
    }

    /// Builds a subset of Z_n (n <= 64) from a bit mask; bit `i` is residue `i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= WORD_BITS, "mask constructor needs n <= 64");
        let mut set = ResidueSet::empty(n);
        set.words[0] = mask;
        set.clear_tail();
        set
    }

    fn clear_tail(&mut self) {
        let rem = self.n % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, x: usize) {
        let x = x % self.n;
        self.words[x / WORD_BITS] |= 1 << (x % WORD_BITS);
    }

    pub fn contains(&self, x: usize) -> bool {
        let x = x % self.n;
        self.words[x / WORD_BITS] & (1 << (x % WORD_BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Members<'_> {
        Members {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn is_subset_of(&self, other: &ResidueSet) -> bool {
        self.n == other.n
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &ResidueSet) -> Result<ResidueSet> {
        check_same_modulus(self, other)?;
        let mut out = self.clone();
        out.words
            .iter_mut()
            .zip(&other.words)
            .for_each(|(a, b)| *a |= b);
        Ok(out)
    }

    /// The translate `k + A`.
    pub fn translate(&self, k: usize) -> ResidueSet {
        let k = k % self.n;
        if k == 0 {
            return self.clone();
        }
        let mut out = ResidueSet::empty(self.n);
        self.or_translate_into(&mut out.words, k);
        out
    }

    /// ORs `k + A` into `dst`; `k` must already be reduced.
    fn or_translate_into(&self, dst: &mut [u64], k: usize) {
        if k == 0 {
            dst.iter_mut().zip(&self.words).for_each(|(d, s)| *d |= s);
            return;
        }
        or_shifted_up(dst, &self.words, k);
        or_shifted_down(dst, &self.words, self.n - k);
        let rem = self.n % WORD_BITS;
        if rem != 0 {
            if let Some(last) = dst.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// `{-a mod n : a in A}`.
    pub fn negate(&self) -> ResidueSet {
        ResidueSet::from_members(self.n, self.iter().map(|a| (self.n - a) % self.n))
    }

    /// `A + B = {a + b mod n}`.
    pub fn sumset(&self, other: &ResidueSet) -> Result<ResidueSet> {
        check_same_modulus(self, other)?;
        // rotate the larger set once per member of the smaller one
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = ResidueSet::empty(self.n);
        for k in small.iter() {
            big.or_translate_into(&mut out.words, k);
        }
        Ok(out)
    }

    /// `A - B = {a - b mod n}`.
    pub fn diffset(&self, other: &ResidueSet) -> Result<ResidueSet> {
        check_same_modulus(self, other)?;
        self.sumset(&other.negate())
    }

    /// `Stab(A) = {g : g + A = A}`.
    ///
    /// The stabilizer is a subgroup of Z_n, hence `<d>` for some divisor `d`
    /// of `n`; it is found by testing divisors in increasing order. The
    /// stabilizer of the empty set is all of Z_n.
    pub fn stabilizer(&self) -> ResidueSet {
        let n = self.n;
        for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
            if self.translate(d) == *self {
                return cyclic_subgroup(d, n);
            }
        }
        ResidueSet::singleton(n, 0)
    }

    /// Stabilizer computed straight from the definition, element by element
    /// and without the rotation kernel. Quadratic; used to re-verify results
    /// of [`ResidueSet::stabilizer`].
    pub fn stabilizer_exhaustive(&self) -> ResidueSet {
        let n = self.n;
        // g + A ⊆ A with |g + A| = |A| already forces equality
        ResidueSet::from_members(
            n,
            (0..n).filter(|&g| self.iter().all(|a| self.contains((a + g) % n))),
        )
    }

    /// True if the set contains 0 and is closed under addition.
    pub fn is_subgroup(&self) -> bool {
        self.contains(0) && self.sumset(self).map(|s| s == *self).unwrap_or(false)
    }

    /// Cosets of the subgroup `h` that meet this set.
    ///
    /// Each entry carries the smallest element of its coset and whether the
    /// whole coset lies inside the set. Entries are sorted by representative.
    pub fn coset_decomposition(&self, h: &ResidueSet) -> Result<Vec<CosetEntry>> {
        check_same_modulus(self, h)?;
        if !h.is_subgroup() {
            return Err(Error::invalid(format!(
                "{h} is not a subgroup of Z_{}",
                self.n
            )));
        }
        // a subgroup of Z_n is <d>, d its least positive element (or n)
        let step = h.iter().find(|&x| x > 0).unwrap_or(self.n);
        let mut reps: Vec<usize> = self.iter().map(|a| a % step).collect();
        reps.sort_unstable();
        reps.dedup();
        Ok(reps
            .into_iter()
            .map(|rep| CosetEntry {
                representative: rep,
                complete: h.translate(rep).is_subset_of(self),
            })
            .collect())
    }
}

/// One coset `representative + H` meeting a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetEntry {
    pub representative: usize,
    pub complete: bool,
}

/// The subgroup `<c>` of Z_n, i.e. the multiples of `gcd(c, n)`.
pub fn cyclic_subgroup(c: usize, n: usize) -> ResidueSet {
    let step = gcd(c % n, n);
    ResidueSet::from_members(n, (0..n).step_by(step))
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_same_modulus(a: &ResidueSet, b: &ResidueSet) -> Result<()> {
    if a.n != b.n {
        return Err(Error::invalid(format!(
            "modulus mismatch: Z_{} vs Z_{}",
            a.n, b.n
        )));
    }
    Ok(())
}

pub struct Members<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.index * WORD_BITS + bit)
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}} in Z_{}", self.n)
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(n: usize, m: &[usize]) -> ResidueSet {
        ResidueSet::from_members(n, m.iter().copied())
    }

    /// Pairwise enumeration, independent of the rotation kernel.
    fn sumset_pairs(a: &ResidueSet, b: &ResidueSet) -> Vec<usize> {
        let n = a.modulus();
        let mut out: Vec<usize> = a
            .members()
            .iter()
            .flat_map(|&x| b.members().into_iter().map(move |y| (x + y) % n))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(
            set(7, &[0]).sumset(&set(7, &[0, 2, 5])).unwrap().members(),
            [0, 2, 5]
        );
        assert_eq!(
            set(5, &[0, 1]).sumset(&set(5, &[0, 1])).unwrap().members(),
            [0, 1, 2]
        );
        assert_eq!(
            set(6, &[0, 3]).sumset(&set(6, &[0, 3])).unwrap().members(),
            [0, 3]
        );
        assert!(ResidueSet::empty(4)
            .sumset(&set(4, &[1]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn modulus_mismatch_is_rejected() {
        assert!(matches!(
            set(5, &[0]).sumset(&set(6, &[0])),
            Err(Error::InvalidArgument(_))
        ));
        assert!(set(5, &[0]).diffset(&set(6, &[0])).is_err());
        assert!(set(5, &[0]).coset_decomposition(&set(6, &[0])).is_err());
    }

    #[test]
    fn diffset_examples() {
        assert_eq!(set(9, &[0]).diffset(&set(9, &[0])).unwrap().members(), [0]);
        let s = set(7, &[0, 1, 3]);
        assert_eq!(s.diffset(&s).unwrap(), ResidueSet::full(7));
        // {0, a, b} - {0, a, b} = {0, ±a, ±b, ±(a-b)}
        let (n, a, b) = (20i64, 3i64, 7i64);
        let s = ResidueSet::from_signed(n as usize, [0, a, b]);
        let expected = ResidueSet::from_signed(n as usize, [0, a, b, -a, -b, a - b, b - a]);
        assert_eq!(s.diffset(&s).unwrap(), expected);
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(ResidueSet::full(8).stabilizer(), ResidueSet::full(8));
        assert_eq!(set(6, &[0]).stabilizer().members(), [0]);
        assert_eq!(set(6, &[0, 2, 4]).stabilizer().members(), [0, 2, 4]);
        assert_eq!(ResidueSet::empty(5).stabilizer(), ResidueSet::full(5));
    }

    #[test]
    fn cyclic_subgroup_examples() {
        assert_eq!(cyclic_subgroup(0, 5).members(), [0]);
        assert_eq!(cyclic_subgroup(2, 6).members(), [0, 2, 4]);
        assert_eq!(cyclic_subgroup(3, 7), ResidueSet::full(7));
    }

    #[test]
    fn coset_decomposition_examples() {
        let entry = |representative, complete| CosetEntry {
            representative,
            complete,
        };
        assert_eq!(
            set(6, &[0, 2, 4])
                .coset_decomposition(&set(6, &[0, 2, 4]))
                .unwrap(),
            [entry(0, true)]
        );
        assert_eq!(
            set(6, &[0, 1, 2])
                .coset_decomposition(&set(6, &[0, 3]))
                .unwrap(),
            [entry(0, false), entry(1, false), entry(2, false)]
        );
        assert!(ResidueSet::empty(4)
            .coset_decomposition(&set(4, &[0]))
            .unwrap()
            .is_empty());
        assert!(matches!(
            set(6, &[0, 1]).coset_decomposition(&set(6, &[0, 1])),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn negative_residues_are_normalized() {
        assert_eq!(ResidueSet::from_signed(5, [-1, -6, 7]).members(), [2, 4]);
    }

    #[test]
    fn json_shape() {
        let s = set(7, &[5, 0, 2]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"n":7,"members":[0,2,5]}"#);
        let back: ResidueSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<ResidueSet>(r#"{"n":3,"members":[3]}"#).is_err());
        assert!(serde_json::from_str::<ResidueSet>(r#"{"n":0,"members":[]}"#).is_err());
    }

    #[test]
    fn stabilizer_is_subgroup_exhaustive() {
        for n in 1..=12 {
            for mask in 0u64..(1 << n) {
                let a = ResidueSet::from_mask(n, mask);
                let h = a.stabilizer();
                assert!(h.contains(0));
                assert_eq!(h.sumset(&h).unwrap(), h, "not closed: {a}");
                assert_eq!(h.negate(), h);
                assert_eq!(h, a.stabilizer_exhaustive(), "{a}");
                if !a.is_empty() {
                    assert_eq!(a.sumset(&h).unwrap(), a);
                }
            }
        }
    }

    fn arb_pair() -> impl Strategy<Value = (ResidueSet, ResidueSet)> {
        (1usize..200).prop_flat_map(|n| {
            let members = proptest::collection::vec(0..n, 0..12);
            (members.clone(), members).prop_map(move |(a, b)| {
                (
                    ResidueSet::from_members(n, a),
                    ResidueSet::from_members(n, b),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn sumset_matches_pair_enumeration((a, b) in arb_pair()) {
            let s = a.sumset(&b).unwrap();
            prop_assert_eq!(s.members(), sumset_pairs(&a, &b));
            prop_assert_eq!(&s, &b.sumset(&a).unwrap());
            prop_assert_eq!(a.diffset(&b).unwrap(), a.sumset(&b.negate()).unwrap());
            if !a.is_empty() && !b.is_empty() {
                prop_assert!(s.len() >= a.len().max(b.len()));
                prop_assert!(s.len() <= (a.len() * b.len()).min(a.modulus()));
            }
            prop_assert_eq!(a.sumset(&ResidueSet::singleton(a.modulus(), 0)).unwrap(), a.clone());
        }

        #[test]
        fn sumset_is_associative((a, b) in arb_pair(), c in proptest::collection::vec(0usize..1000, 0..5)) {
            let c = ResidueSet::from_members(a.modulus(), c);
            let left = a.sumset(&b).unwrap().sumset(&c).unwrap();
            let right = a.sumset(&b.sumset(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn translate_is_cyclic_shift((a, _b) in arb_pair(), k in 0usize..1000) {
            let n = a.modulus();
            let t = a.translate(k);
            let expected = ResidueSet::from_members(n, a.iter().map(|x| x + k));
            prop_assert_eq!(t, expected);
        }

        #[test]
        fn cosets_partition_the_set((a, _b) in arb_pair(), c in 0usize..1000) {
            let n = a.modulus();
            let h = cyclic_subgroup(c % n, n);
            let entries = a.coset_decomposition(&h).unwrap();
            let mut union = ResidueSet::empty(n);
            for e in &entries {
                let coset = h.translate(e.representative);
                prop_assert_eq!(coset.min(), Some(e.representative));
                let hit: Vec<usize> = coset.iter().filter(|&x| a.contains(x)).collect();
                prop_assert!(!hit.is_empty());
                prop_assert_eq!(e.complete, hit.len() == coset.len());
                union = union.union(&ResidueSet::from_members(n, hit)).unwrap();
            }
            prop_assert_eq!(union, a);
        }
    }
}
