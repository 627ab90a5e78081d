//! Exhaustive scans over all canonical generating sets in a range of `n`.
//!
//! [`scan_stabilizers`] looks for a level `W'_l` whose stabilizer is neither
//! trivial nor all of Z_n. [`survey_lambda`] tabulates λ₁ per canonical
//! orbit. Both work through `(n, a, b)` items in chunks, run each chunk in
//! parallel, append finished items to an optional checkpoint and sort the
//! merged output, so results do not depend on scheduling.

use std::path::Path;

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::checkpoint::{Checkpoint, Keyed};
use crate::dihedral::GeneratingSet;
use crate::error::{Error, Result};
use crate::metrics::{bound_n_half, lambda1, prime_condition};
use crate::residue::ResidueSet;
use crate::wordlength::{w_prime_sequence, Engine, Levels};

/// Work items between checkpoint flushes.
pub const CHECKPOINT_INTERVAL: usize = 100;

/// Default upper end of a conjecture scan.
pub const DEFAULT_SCAN_MAX: usize = 200;

fn check_range(n_min: usize, n_max: usize) -> Result<()> {
    if n_min < 3 || n_min > n_max {
        return Err(Error::invalid(format!(
            "need 3 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    Ok(())
}

/// Canonical sets in the range, split into generating and non-generating.
fn canonical_work(n_min: usize, n_max: usize) -> (Vec<GeneratingSet>, usize) {
    let mut work = Vec::new();
    let mut skipped = 0;
    for n in n_min..=n_max {
        for set in GeneratingSet::canonical_sets(n) {
            if set.is_generating() {
                work.push(set);
            } else {
                skipped += 1;
            }
        }
    }
    (work, skipped)
}

/// Runs `f` over `work`, resuming from and appending to `checkpoint`.
fn run_chunked<T, F>(
    work: &[GeneratingSet],
    checkpoint: Option<&Path>,
    kind: &str,
    f: F,
) -> Result<Vec<T>>
where
    T: Keyed + Serialize + DeserializeOwned + Send,
    F: Fn(&GeneratingSet) -> Result<T> + Sync,
{
    let key = |s: &GeneratingSet| (s.modulus(), s.a(), s.b());
    let (mut writer, mut done) = match checkpoint {
        Some(path) => {
            let (ck, records) = Checkpoint::open::<T>(path, kind)?;
            (Some(ck), records)
        }
        None => (None, Vec::new()),
    };
    let wanted: std::collections::HashSet<_> = work.iter().map(key).collect();
    done.retain(|r| wanted.contains(&r.key()));
    done.sort_by_key(Keyed::key);
    done.dedup_by_key(|r| r.key());
    let finished: std::collections::HashSet<_> = done.iter().map(Keyed::key).collect();
    let todo: Vec<&GeneratingSet> = work
        .iter()
        .filter(|s| !finished.contains(&key(s)))
        .collect();

    let mut results = done;
    for chunk in todo.chunks(CHECKPOINT_INTERVAL) {
        let out = chunk.par_iter().map(|s| f(s)).collect::<Result<Vec<T>>>()?;
        if let Some(w) = writer.as_mut() {
            w.append(&out)?;
        }
        results.extend(out);
    }
    results.sort_by_key(Keyed::key);
    Ok(results)
}

/// A level whose stabilizer is a proper nontrivial subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub l: usize,
    pub stabilizer: ResidueSet,
}

impl Counterexample {
    /// Recomputes `W'_l` and its stabilizer from the definition and checks
    /// the entry against them.
    pub fn reproduces(&self) -> bool {
        let Ok(set) = GeneratingSet::new(self.n, self.a, self.b) else {
            return false;
        };
        let level = &w_prime_sequence(&set, self.l).levels[self.l];
        let stab = level.stabilizer_exhaustive();
        stab == self.stabilizer && stab.len() != 1 && !stab.is_full()
    }
}

/// Per-set outcome of a stabilizer scan; also the checkpoint record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetScan {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub levels_checked: usize,
    pub candidates: Vec<Counterexample>,
}

impl Keyed for SetScan {
    fn key(&self) -> (usize, usize, usize) {
        (self.n, self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureScanResult {
    pub n_min: usize,
    pub n_max: usize,
    pub sets_scanned: usize,
    pub non_generating_skipped: usize,
    pub levels_checked: usize,
    /// Candidates that survived re-verification.
    pub counterexamples: Vec<Counterexample>,
    /// Candidates that did not reproduce: evidence of a kernel defect.
    pub rejected: Vec<Counterexample>,
    pub confirmed: bool,
}

/// Checks every level of one set, from `l = 1` through the first level at
/// which both parities are saturated.
pub fn scan_set<F>(set: &GeneratingSet, stabilizer: &F) -> SetScan
where
    F: Fn(&ResidueSet) -> ResidueSet,
{
    let n = set.modulus();
    let mut candidates = Vec::new();
    let mut levels_checked = 0;
    let mut full_run = 0;
    for (l, level) in Levels::new(set).enumerate().skip(1) {
        let stab = stabilizer(&level);
        levels_checked += 1;
        if stab.len() != 1 && !stab.is_full() {
            candidates.push(Counterexample {
                n,
                a: set.a(),
                b: set.b(),
                l,
                stabilizer: stab,
            });
        }
        full_run = if level.is_full() { full_run + 1 } else { 0 };
        // W'_l full forces W'_{l+1} full; stop once both parities are
        if full_run == 2 || l > 2 * n + 2 {
            break;
        }
    }
    SetScan {
        n,
        a: set.a(),
        b: set.b(),
        levels_checked,
        candidates,
    }
}

pub fn scan_stabilizers(
    n_min: usize,
    n_max: usize,
    checkpoint: Option<&Path>,
) -> Result<ConjectureScanResult> {
    scan_stabilizers_with(n_min, n_max, checkpoint, ResidueSet::stabilizer)
}

/// [`scan_stabilizers`] with a caller-supplied stabilizer routine; each
/// candidate it produces is re-verified independently before being
/// reported as a counterexample.
pub fn scan_stabilizers_with<F>(
    n_min: usize,
    n_max: usize,
    checkpoint: Option<&Path>,
    stabilizer: F,
) -> Result<ConjectureScanResult>
where
    F: Fn(&ResidueSet) -> ResidueSet + Sync,
{
    check_range(n_min, n_max)?;
    let (work, non_generating_skipped) = canonical_work(n_min, n_max);
    let scans = run_chunked(&work, checkpoint, "stabilizer-scan", |s| {
        Ok(scan_set(s, &stabilizer))
    })?;
    let mut counterexamples = Vec::new();
    let mut rejected = Vec::new();
    for candidate in scans.iter().flat_map(|s| s.candidates.iter().cloned()) {
        if candidate.reproduces() {
            counterexamples.push(candidate);
        } else {
            rejected.push(candidate);
        }
    }
    Ok(ConjectureScanResult {
        n_min,
        n_max,
        sets_scanned: scans.len(),
        non_generating_skipped,
        levels_checked: scans.iter().map(|s| s.levels_checked).sum(),
        confirmed: counterexamples.is_empty() && rejected.is_empty(),
        counterexamples,
        rejected,
    })
}

/// One canonical orbit's λ₁ statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub lambda1: u32,
    pub max_reflection_length: u32,
    pub bound: u32,
    pub tight: bool,
    pub prime_condition_met: bool,
    /// Canonical form of the mirrored set `(-a, -b)`.
    pub mirror_a: usize,
    pub mirror_b: usize,
}

impl Keyed for SurveyRow {
    fn key(&self) -> (usize, usize, usize) {
        (self.n, self.a, self.b)
    }
}

impl SurveyRow {
    pub const CSV_HEADER: &'static str =
        "n,a,b,lambda1,max_refl_len,bound,tight,prime_condition_met,mirror_a,mirror_b";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.a,
            self.b,
            self.lambda1,
            self.max_reflection_length,
            self.bound,
            self.tight,
            self.prime_condition_met,
            self.mirror_a,
            self.mirror_b
        )
    }
}

fn survey_row(set: &GeneratingSet, engine: Engine) -> Result<SurveyRow> {
    let report = lambda1(set, engine)?;
    let n = set.modulus();
    let bound = bound_n_half(n);
    if report.lambda1 > bound {
        return Err(Error::VerificationFailure(format!(
            "lambda1 = {} exceeds floor(n/2)+1 = {bound} for {set}",
            report.lambda1
        )));
    }
    Ok(SurveyRow {
        n,
        a: set.a(),
        b: set.b(),
        lambda1: report.lambda1,
        max_reflection_length: report.max_reflection_length,
        bound,
        tight: report.lambda1 == bound,
        prime_condition_met: prime_condition(set),
        mirror_a: report.mirror.a(),
        mirror_b: report.mirror.b(),
    })
}

/// λ₁ for every canonical generating set with `n_min <= n <= n_max`, sorted
/// by `(n, a, b)`. A row above `⌊n/2⌋+1` aborts the survey.
pub fn survey_lambda(
    n_min: usize,
    n_max: usize,
    engine: Engine,
    checkpoint: Option<&Path>,
) -> Result<Vec<SurveyRow>> {
    check_range(n_min, n_max)?;
    let (work, _) = canonical_work(n_min, n_max);
    run_chunked(&work, checkpoint, "lambda-survey", |s| {
        survey_row(s, engine)
    })
}

/// For each `n` in the rows, whether some set attains `⌊n/2⌋+1`.
pub fn bound_attained_by_n(rows: &[SurveyRow]) -> Vec<(usize, bool)> {
    let mut out: Vec<(usize, bool)> = Vec::new();
    for row in rows {
        match out.last_mut() {
            Some((n, tight)) if *n == row.n => *tight |= row.tight,
            _ => out.push((row.n, row.tight)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gs(n: usize, a: usize, b: usize) -> GeneratingSet {
        GeneratingSet::new(n, a, b).unwrap()
    }

    #[test]
    fn interval_levels_have_trivial_stabilizers() {
        for n in 5..40 {
            let set = gs(n, 1, n - 1);
            let scan = scan_set(&set, &ResidueSet::stabilizer);
            assert!(scan.candidates.is_empty());
            for (l, level) in Levels::new(&set).enumerate().skip(1).take(n) {
                if 2 * l + 1 < n {
                    assert_eq!(level.stabilizer().members(), [0]);
                } else {
                    assert_eq!(level.stabilizer(), ResidueSet::full(n));
                }
            }
        }
    }

    #[test]
    fn scan_levels_include_saturation() {
        // {0,1,4} in Z_5: W'_1 has 3 elements, W'_2 is already full
        let scan = scan_set(&gs(5, 1, 4), &ResidueSet::stabilizer);
        assert_eq!(scan.levels_checked, 3);
    }

    #[test]
    fn small_scan_finds_period_two_levels() {
        let r = scan_stabilizers(3, 40, None).unwrap();
        assert!(r.rejected.is_empty());
        assert!(r.non_generating_skipped > 0);
        let expected: usize = (3..=40)
            .map(|n| {
                GeneratingSet::canonical_sets(n)
                    .filter(GeneratingSet::is_generating)
                    .count()
            })
            .sum();
        assert_eq!(r.sets_scanned, expected);
        // {0,1,4} - {0,1,4} = {0,1,3,4,5,7} in Z_8 is fixed by +4
        let known = Counterexample {
            n: 8,
            a: 1,
            b: 4,
            l: 2,
            stabilizer: ResidueSet::from_members(8, [0, 4]),
        };
        assert!(r.counterexamples.contains(&known));
        assert!(!r.confirmed);
        for c in &r.counterexamples {
            assert!(c.reproduces());
            assert!(c.stabilizer.len() > 1 && !c.stabilizer.is_full());
        }
        // no odd prime modulus has a proper nontrivial subgroup
        assert!(r
            .counterexamples
            .iter()
            .all(|c| !crate::additive::is_prime(c.n)));
    }

    #[test]
    fn planted_stabilizer_bug_is_rejected() {
        // report {0, n/2} for every even modulus
        let broken = |a: &ResidueSet| {
            let n = a.modulus();
            if n.is_multiple_of(2) && !a.is_full() {
                ResidueSet::from_members(n, [0, n / 2])
            } else {
                a.stabilizer()
            }
        };
        let honest = scan_stabilizers(3, 12, None).unwrap();
        let r = scan_stabilizers_with(3, 12, None, broken).unwrap();
        assert!(!r.rejected.is_empty());
        assert!(r.rejected.iter().all(|c| !c.reproduces()));
        assert!(!r.confirmed);
        // genuine entries the broken routine happens to agree on survive
        assert!(r
            .counterexamples
            .iter()
            .all(|c| honest.counterexamples.contains(c)));
    }

    #[test]
    fn bad_ranges() {
        assert!(scan_stabilizers(2, 10, None).is_err());
        assert!(scan_stabilizers(10, 9, None).is_err());
        assert!(survey_lambda(0, 5, Engine::Sumset, None).is_err());
    }

    #[test]
    fn survey_small_n() {
        let rows = survey_lambda(3, 5, Engine::Bfs, None).unwrap();
        let at = |n| rows.iter().filter(move |r| r.n == n).collect::<Vec<_>>();
        assert_eq!(at(3).len(), 1);
        assert_eq!((at(3)[0].a, at(3)[0].b), (1, 2));
        assert!(at(3)[0].lambda1 <= 2);
        // re-basing {0,1,4} at 4 gives {0,1,2}: one orbit, not two
        let five: Vec<(usize, usize)> = at(5).iter().map(|r| (r.a, r.b)).collect();
        assert_eq!(five, [(1, 2), (1, 3)]);
        assert_eq!(gs(5, 1, 4).canonical_form(), gs(5, 1, 2));
        assert!(at(5).iter().all(|r| r.lambda1 <= 3));
        assert!(at(5)[0].tight);
    }

    #[test]
    fn survey_tightness() {
        let rows = survey_lambda(3, 30, Engine::Sumset, None).unwrap();
        for w in rows.windows(2) {
            assert!(w[0].key() < w[1].key());
        }
        for (n, attained) in bound_attained_by_n(&rows) {
            if n % 4 <= 1 {
                assert!(attained, "n = {n}");
                let interval = gs(n, 1, n - 1).canonical_form();
                let row = rows
                    .iter()
                    .find(|r| (r.n, r.a, r.b) == (n, interval.a(), interval.b()));
                assert!(row.unwrap().tight);
            }
        }
    }

    #[test]
    fn survey_is_scheduling_independent() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| survey_lambda(3, 25, Engine::Sumset, None).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn checkpoint_resume_matches_fresh_run() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("survey.jsonl");
        let partial = survey_lambda(3, 20, Engine::Sumset, Some(&path)).unwrap();
        let full = survey_lambda(3, 30, Engine::Sumset, Some(&path)).unwrap();
        assert_eq!(full, survey_lambda(3, 30, Engine::Sumset, None).unwrap());
        assert_eq!(&full[..partial.len()], &partial[..]);
        let lines = std::fs::read_to_string(&path).unwrap().lines().count();
        assert_eq!(lines, full.len());
        // a stabilizer-scan checkpoint cannot be fed to the survey
        assert!(scan_stabilizers(3, 5, Some(&path)).is_err());
    }

    #[test]
    fn scan_checkpoint_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.jsonl");
        let first = scan_stabilizers(3, 15, Some(&path)).unwrap();
        let again = scan_stabilizers(3, 15, Some(&path)).unwrap();
        assert_eq!(first, again);
        assert_eq!(
            std::fs::read_to_string(&path).unwrap().lines().count(),
            first.sets_scanned
        );
    }
}
