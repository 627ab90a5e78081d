//! Sweeps that check each stated bound or identity over a range of moduli
//! and summarize the outcome in a [`VerificationReport`].

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::additive::{check_cauchy_davenport, check_kneser, is_prime, random_subset};
use crate::dihedral::GeneratingSet;
use crate::error::{Error, Result};
use crate::metrics::{
    bound_n_half, bound_prime_third, check_sharpness, check_sqrt_bound, lambda1, prime_condition,
    SharpnessReport, SqrtBoundReport,
};
use crate::residue::ResidueSet;
use crate::wordlength::{levels_to_saturation, Engine};

/// Random pairs drawn per prime in the Cauchy-Davenport check.
pub const CAUCHY_DAVENPORT_PAIRS: usize = 1000;

/// Ceiling on `max_length / √n` for the square-root presentation.
pub const SQRT_RATIO_CEILING: f64 = 4.5;

/// Largest modulus the exhaustive Kneser sweep accepts (4^n pairs).
pub const KNESER_MAX_N: usize = 14;

const MAX_WITNESSES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    CauchyDavenport,
    Kneser,
    Growth,
    PrimeGrowth,
    LambdaBound,
    PrimeLambdaBound,
    Sharpness,
    Sqrt,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::CauchyDavenport,
        Claim::Kneser,
        Claim::Growth,
        Claim::PrimeGrowth,
        Claim::LambdaBound,
        Claim::PrimeLambdaBound,
        Claim::Sharpness,
        Claim::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::CauchyDavenport => "cauchy-davenport",
            Claim::Kneser => "kneser",
            Claim::Growth => "growth",
            Claim::PrimeGrowth => "prime-growth",
            Claim::LambdaBound => "lambda-bound",
            Claim::PrimeLambdaBound => "prime-lambda-bound",
            Claim::Sharpness => "sharpness",
            Claim::Sqrt => "sqrt",
        }
    }

    /// Inclusive range of moduli swept when none is given.
    pub fn default_range(self) -> (usize, usize) {
        match self {
            Claim::CauchyDavenport => (5, 23),
            Claim::Kneser => (1, 12),
            Claim::Growth | Claim::LambdaBound => (3, 100),
            Claim::PrimeGrowth | Claim::PrimeLambdaBound => (3, 97),
            Claim::Sharpness => (3, 200),
            Claim::Sqrt => (5, 400),
        }
    }

    fn min_n(self) -> usize {
        match self {
            Claim::CauchyDavenport | Claim::Kneser => 1,
            Claim::Sqrt => 5,
            _ => 3,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Claim> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown claim '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub claim: Claim,
    pub n_min: usize,
    pub n_max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cases_checked: u64,
    pub failure_count: u64,
    /// The first failures, in sweep order.
    pub witnesses: Vec<Value>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Details>,
}

/// Per-case output for sweeps that produce more than pass/fail.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Details {
    Sharpness(Vec<SharpnessReport>),
    Sqrt(Vec<SqrtBoundReport>),
    BoundAttained(Vec<BoundAttained>),
}

/// Whether some generating set of D_n reaches `⌊n/2⌋+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundAttained {
    pub n: usize,
    pub bound_attained: bool,
}

impl VerificationReport {
    pub const CSV_HEADER: &'static str = "claim,n_min,n_max,cases_checked,failure_count,passed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.claim, self.n_min, self.n_max, self.cases_checked, self.failure_count, self.passed
        )
    }
}

/// Options shared by every sweep.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub n_min: usize,
    pub n_max: usize,
    pub engine: Engine,
    pub seed: u64,
}

/// Tally of one sweep: cases seen, failures with the first few witnesses.
#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    witnesses: Vec<Value>,
}

impl Tally {
    fn case(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses
            .extend(other.witnesses.into_iter().take(room));
        self
    }
}

/// Per-item tallies merged in input order, so witnesses are deterministic.
fn tally_par<T, F>(items: &[T], f: F) -> Result<Tally>
where
    T: Sync,
    F: Fn(&T) -> Result<Tally> + Sync,
{
    let parts = items.par_iter().map(&f).collect::<Result<Vec<Tally>>>()?;
    Ok(parts.into_iter().fold(Tally::default(), Tally::merge))
}

fn generating_sets(n_min: usize, n_max: usize) -> Vec<GeneratingSet> {
    (n_min..=n_max)
        .flat_map(GeneratingSet::all_sets)
        .filter(GeneratingSet::is_generating)
        .collect()
}

fn prime_condition_sets(n_min: usize, n_max: usize) -> Vec<GeneratingSet> {
    (n_min..=n_max)
        .filter(|&p| is_prime(p))
        .flat_map(GeneratingSet::all_sets)
        .filter(prime_condition)
        .collect()
}

pub fn verify(claim: Claim, opts: &VerifyOptions) -> Result<VerificationReport> {
    let VerifyOptions {
        n_min,
        n_max,
        engine,
        seed,
    } = *opts;
    if n_min > n_max || n_min < claim.min_n() {
        return Err(Error::invalid(format!(
            "claim {claim} needs {} <= n_min <= n_max, got {n_min}..{n_max}",
            claim.min_n()
        )));
    }
    if claim == Claim::Kneser && n_max > KNESER_MAX_N {
        return Err(Error::invalid(format!(
            "exhaustive Kneser sweep is limited to n <= {KNESER_MAX_N}"
        )));
    }
    let mut details = None;
    let mut report_seed = None;
    let tally = match claim {
        Claim::CauchyDavenport => {
            report_seed = Some(seed);
            let primes: Vec<usize> = (n_min..=n_max).filter(|&p| is_prime(p)).collect();
            tally_par(&primes, |&p| {
                cauchy_davenport_sweep(p, seed, CAUCHY_DAVENPORT_PAIRS)
            })?
        }
        Claim::Kneser => {
            let ns: Vec<usize> = (n_min..=n_max).collect();
            ns.iter()
                .map(|&n| kneser_sweep(n))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(Tally::default(), Tally::merge)
        }
        Claim::Growth => tally_par(&generating_sets(n_min, n_max), |s| {
            Ok(growth_sweep(s, |l, n| (2 * l + 1).min(n)))
        })?,
        Claim::PrimeGrowth => tally_par(&prime_condition_sets(n_min, n_max), |s| {
            Ok(growth_sweep(s, |l, p| (3 * l).min(p)))
        })?,
        Claim::LambdaBound => {
            let sets = generating_sets(n_min, n_max);
            let lambdas = sets
                .par_iter()
                .map(|s| lambda1(s, engine).map(|r| r.lambda1))
                .collect::<Result<Vec<u32>>>()?;
            let mut tally = Tally::default();
            let mut attained: Vec<(usize, bool)> = Vec::new();
            for (s, &l1) in sets.iter().zip(&lambdas) {
                let n = s.modulus();
                let bound = bound_n_half(n);
                tally.case(
                    l1 <= bound,
                    || json!({"n": n, "a": s.a(), "b": s.b(), "lambda1": l1, "bound": bound}),
                );
                match attained.last_mut() {
                    Some((m, hit)) if *m == n => *hit |= l1 == bound,
                    _ => attained.push((n, l1 == bound)),
                }
            }
            details = Some(Details::BoundAttained(
                attained
                    .into_iter()
                    .map(|(n, bound_attained)| BoundAttained { n, bound_attained })
                    .collect(),
            ));
            tally
        }
        Claim::PrimeLambdaBound => tally_par(&prime_condition_sets(n_min, n_max), |s| {
            let l1 = lambda1(s, engine)?.lambda1;
            let bound = bound_prime_third(s.modulus());
            let mut t = Tally::default();
            t.case(
                l1 <= bound,
                || json!({"p": s.modulus(), "a": s.a(), "b": s.b(), "lambda1": l1, "bound": bound}),
            );
            Ok(t)
        })?,
        Claim::Sharpness => {
            let reports = (n_min..=n_max)
                .into_par_iter()
                .map(|n| check_sharpness(n, engine))
                .collect::<Result<Vec<SharpnessReport>>>()?;
            let mut t = Tally::default();
            for r in &reports {
                t.case(r.matched, || json!(r));
            }
            details = Some(Details::Sharpness(reports));
            t
        }
        Claim::Sqrt => {
            let reports = (n_min..=n_max)
                .into_par_iter()
                .map(|n| check_sqrt_bound(n, engine))
                .collect::<Result<Vec<SqrtBoundReport>>>()?;
            let mut t = Tally::default();
            for r in &reports {
                t.case(r.holds && r.ratio <= SQRT_RATIO_CEILING, || json!(r));
            }
            details = Some(Details::Sqrt(reports));
            t
        }
    };
    Ok(VerificationReport {
        claim,
        n_min,
        n_max,
        seed: report_seed,
        cases_checked: tally.cases,
        failure_count: tally.failures,
        passed: tally.failures == 0,
        witnesses: tally.witnesses,
        details,
    })
}

/// Generator for one prime, derived from the recorded seed.
pub fn prime_rng(seed: u64, p: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (p as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn cauchy_davenport_sweep(p: usize, seed: u64, pairs: usize) -> Result<Tally> {
    let mut rng = prime_rng(seed, p);
    let mut tally = Tally::default();
    for _ in 0..pairs {
        let a = random_subset(p, &mut rng);
        let b = random_subset(p, &mut rng);
        let ok = check_cauchy_davenport(&a, &b, p)?;
        tally.case(ok, || json!({"p": p, "A": a, "B": b}));
    }
    Ok(tally)
}

/// Every ordered pair of nonempty subsets of Z_n meeting Kneser's hypothesis.
fn kneser_sweep(n: usize) -> Result<Tally> {
    let sets: Vec<ResidueSet> = (1u64..1 << n)
        .map(|m| ResidueSet::from_mask(n, m))
        .collect();
    tally_par(&sets, |a| {
        let mut tally = Tally::default();
        for b in &sets {
            let r = check_kneser(a, b)?;
            if r.hypothesis_met {
                tally.case(r.identity_holds, || json!(r));
            }
        }
        Ok(tally)
    })
}

/// `|W'_l| >= floor(l, n)` for every level through saturation.
fn growth_sweep(set: &GeneratingSet, floor: impl Fn(usize, usize) -> usize) -> Tally {
    let n = set.modulus();
    let mut tally = Tally::default();
    for (l, level) in levels_to_saturation(set).iter().enumerate().skip(1) {
        let need = floor(l, n);
        tally.case(level.len() >= need, || {
            json!({"n": n, "a": set.a(), "b": set.b(), "l": l, "size": level.len(), "floor": need})
        });
    }
    tally
}
