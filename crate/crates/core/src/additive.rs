//! Checkers for the Cauchy-Davenport and Kneser theorems.
//!
//! Both theorems are established facts, so a failing check points at a
//! defect in the [`ResidueSet`] kernel rather than at mathematics.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::ResidueSet;

/// Deterministic trial division.
pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    (2..)
        .take_while(|d| d * d <= p)
        .all(|d| !p.is_multiple_of(d))
}

/// `|A + B| >= min(p, |A| + |B| - 1)` in Z_p.
pub fn check_cauchy_davenport(a: &ResidueSet, b: &ResidueSet, p: usize) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if a.modulus() != p || b.modulus() != p {
        return Err(Error::invalid(format!("sets must live in Z_{p}")));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("Cauchy-Davenport needs nonempty sets"));
    }
    let sum = a.sumset(b)?;
    Ok(sum.len() >= p.min(a.len() + b.len() - 1))
}

/// Both sides of Kneser's identity for one pair of sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KneserReport {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: ResidueSet,
    #[serde(rename = "B")]
    pub b: ResidueSet,
    /// Stabilizer of `A + B`.
    #[serde(rename = "H")]
    pub h: ResidueSet,
    pub lhs: usize,
    pub rhs: usize,
    pub hypothesis_met: bool,
    /// Only meaningful when `hypothesis_met`.
    pub identity_holds: bool,
}

pub fn check_kneser(a: &ResidueSet, b: &ResidueSet) -> Result<KneserReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("Kneser check needs nonempty sets"));
    }
    let sum = a.sumset(b)?;
    let h = sum.stabilizer();
    let lhs = sum.len();
    let rhs = a.sumset(&h)?.len() + b.sumset(&h)?.len() - h.len();
    Ok(KneserReport {
        n: a.modulus(),
        a: a.clone(),
        b: b.clone(),
        h,
        lhs,
        rhs,
        hypothesis_met: lhs < a.len() + b.len(),
        identity_holds: lhs == rhs,
    })
}

/// Random nonempty subset of Z_n: each residue kept with probability 1/2,
/// redrawing on the empty set.
pub fn random_subset<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ResidueSet {
    loop {
        let set = ResidueSet::from_members(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        if !set.is_empty() {
            return set;
        }
    }
}
