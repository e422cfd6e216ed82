//! Checks for the correctness claims: exact-strength binding, local
//! determinism away from decision points, sparse decision sets, and the
//! safety, liveness and fairness conditions against the oracle.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::atam::{attachable_at, replay, run, Configuration, Loc, RunError, Side, StopPolicy, Tileset, Trace, TEMPERATURE};
use crate::oracle::{stage_grid, OracleGrid};
use crate::prefix::CodingPrefix;

/// Chi-square significance level for the fairness test.
pub const DEFAULT_ALPHA: f64 = 0.001;

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("corrupt trace: {0}")]
    Corrupt(RunError),
    #[error("trace is not stage-complete: {placed} of {needed} cells of the stage-{stage} square")]
    NotStageComplete { stage: u32, placed: usize, needed: usize },
    #[error("run failed: {0}")]
    Run(RunError),
    #[error("runs must be positive")]
    NoRuns,
    #[error("zeta exponent must be nonnegative, got {0}")]
    NegativeExponent(f64),
}

/// ON/OFF colouring of the stage-n square of a replayed trace.
pub fn coloring(trace: &Trace, ts: &Tileset, n: u32) -> Result<OracleGrid, VerifyError> {
    let c = replay(trace, ts).map_err(VerifyError::Corrupt)?;
    grid_of(&c, ts, n)
}

pub fn grid_of(c: &Configuration, ts: &Tileset, n: u32) -> Result<OracleGrid, VerifyError> {
    let side = 1u64 << n;
    let mut placed = 0;
    let grid = OracleGrid::from_fn(n, |x, y| match c.get((x as u32, y as u32)) {
        Some(t) => {
            placed += 1;
            ts.tile(t).color.is_on()
        }
        None => false,
    });
    let needed = (side * side) as usize;
    if placed < needed {
        return Err(VerifyError::NotStageComplete { stage: n, placed, needed });
    }
    Ok(grid)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetyReport {
    pub stage: u32,
    pub decisions: CodingPrefix,
    /// First cell whose colour disagrees with the oracle: (x, y, expected ON).
    pub mismatch: Option<(u64, u64, bool)>,
}

impl SafetyReport {
    pub fn pass(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for SafetyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mismatch {
            None => write!(f, "safety: pass (stage {}, decisions {})", self.stage, self.decisions),
            Some((x, y, on)) => write!(
                f,
                "safety: FAIL at ({x},{y}): expected {} under decisions {}",
                if on { "ON" } else { "OFF" },
                self.decisions
            ),
        }
    }
}

/// Compare a finished colouring with the oracle grid of its decisions.
pub fn safety_check_grid(grid: &OracleGrid, decisions: &CodingPrefix) -> SafetyReport {
    let want = stage_grid(decisions);
    let mismatch = want.first_difference(grid).map(|(x, y)| {
        let expected = if want.stage() == grid.stage() { want.get(x, y) } else { true };
        (x, y, expected)
    });
    SafetyReport { stage: decisions.len() as u32, decisions: decisions.clone(), mismatch }
}

/// Safety for a stage-complete trace: the stage is the number of decisions.
pub fn safety_check(trace: &Trace, ts: &Tileset) -> Result<SafetyReport, VerifyError> {
    let d = trace.realized();
    let grid = coloring(trace, ts, d.len() as u32)?;
    Ok(safety_check_grid(&grid, &d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    MinStrength,
    UniqueFill,
    NonTerminal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub loc: Loc,
    pub condition: Condition,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminismReport {
    pub violations: Vec<Violation>,
    pub excluded: Vec<Loc>,
    pub audited: usize,
    /// Terminality cannot be shown for a finite prefix of an infinite
    /// assembly, so it is reported rather than checked.
    pub terminal_condition: &'static str,
}

impl DeterminismReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for DeterminismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "determinism: {} ({} sites audited, {} excluded, {} violations, terminal condition {})",
            if self.pass() { "pass" } else { "FAIL" },
            self.audited,
            self.excluded.len(),
            self.violations.len(),
            self.terminal_condition
        )?;
        for v in self.violations.iter().take(5) {
            write!(f, "\n  {:?} at {:?}: {}", v.condition, v.loc, v.detail)?;
        }
        Ok(())
    }
}

/// Local determinism audit. Each non-excluded tile must bind with exactly
/// the temperature, and once it and its OUT-neighbours (tiles that bound
/// using its glues) are removed, no other tile type may fit its site.
pub fn check_local_determinism(trace: &Trace, ts: &Tileset, excluded: &[Loc]) -> Result<DeterminismReport, VerifyError> {
    let mut c = replay(trace, ts).map_err(VerifyError::Corrupt)?;
    let by_loc: HashMap<Loc, usize> = trace.events.iter().enumerate().map(|(i, e)| (e.loc, i)).collect();
    let mut violations = Vec::new();
    let mut audited = 0;
    for e in &trace.events {
        if excluded.contains(&e.loc) {
            continue;
        }
        audited += 1;
        if e.total_strength != TEMPERATURE {
            violations.push(Violation {
                loc: e.loc,
                condition: Condition::MinStrength,
                detail: format!("{} bound with strength {}", e.tile, e.total_strength),
            });
        }
        let original = c.get(e.loc).expect("replayed");
        let mut removed = vec![(e.loc, original)];
        for side in Side::ALL {
            let Some(n) = side.step(e.loc) else { continue };
            let Some(&j) = by_loc.get(&n) else { continue };
            if trace.events[j].bound(side.opposite()) > 0 {
                removed.push((n, c.get(n).expect("replayed")));
            }
        }
        for &(l, _) in &removed {
            c.remove(l);
        }
        let fits = attachable_at(&c, ts, e.loc);
        for (l, t) in removed {
            c.place(l, t).expect("restoring");
        }
        let others: Vec<&str> = fits.iter().filter(|&&t| t != original).map(|&t| ts.tile(t).name.as_str()).collect();
        if !others.is_empty() {
            violations.push(Violation {
                loc: e.loc,
                condition: Condition::UniqueFill,
                detail: format!("{} could be replaced by {}", e.tile, others.join(", ")),
            });
        }
    }
    Ok(DeterminismReport { violations, excluded: excluded.to_vec(), audited, terminal_condition: "truncated" })
}

/// Decision sites with their stage index, in stage order.
pub fn decision_locations(trace: &Trace) -> Vec<(Loc, usize)> {
    trace.decisions.iter().map(|d| (d.loc, d.index)).collect()
}

/// Whether the stage-k decision sits at sup-norm distance in
/// [2^(k-1), 2^k + 2] from the origin.
pub fn placement_ok(loc: Loc, k: usize) -> bool {
    let d = loc.0.max(loc.1) as u64;
    let lo = 1u64 << (k - 1);
    (lo..=(1u64 << k) + 2).contains(&d)
}

/// Sum of |p|^(-s) over points of `d` within Euclidean `radius`, skipping
/// the origin.
pub fn zeta_partial_sum(d: &[Loc], s: f64, radius: f64) -> Result<f64, VerifyError> {
    if s < 0.0 || s.is_nan() {
        return Err(VerifyError::NegativeExponent(s));
    }
    Ok(d.iter()
        .map(|&(x, y)| ((x as f64).powi(2) + (y as f64).powi(2)).sqrt())
        .filter(|&r| r > 0.0 && r <= radius)
        .map(|r| r.powf(-s))
        .sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaReport {
    pub locations: Vec<Loc>,
    /// (s, radius, partial sum)
    pub partial_sums: Vec<(f64, f64, f64)>,
    /// (k, |D within radius 2^k|)
    pub counts: Vec<(u32, usize)>,
}

impl ZetaReport {
    /// The logarithmic growth surrogate: at most k + 2 points within 2^k.
    pub fn count_bound_holds(&self) -> bool {
        self.counts.iter().all(|&(k, n)| n <= k as usize + 2)
    }
}

impl fmt::Display for ZetaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "decision set: {:?}", self.locations)?;
        for &(s, r, v) in &self.partial_sums {
            writeln!(f, "zeta s={s} radius={r}: {v:.6}")?;
        }
        for &(k, n) in &self.counts {
            writeln!(f, "count within 2^{k}: {n} (bound {})", k + 2)?;
        }
        write!(f, "count bound: {}", if self.count_bound_holds() { "holds" } else { "VIOLATED" })
    }
}

pub fn zeta_report(d: &[Loc], exponents: &[f64], max_k: u32) -> Result<ZetaReport, VerifyError> {
    let mut partial_sums = Vec::new();
    for &s in exponents {
        for k in 0..=max_k {
            let r = (1u64 << k) as f64;
            partial_sums.push((s, r, zeta_partial_sum(d, s, r)?));
        }
    }
    let counts = (0..=max_k)
        .map(|k| {
            let r = (1u64 << k) as f64;
            (k, d.iter().filter(|&&(x, y)| ((x as f64).powi(2) + (y as f64).powi(2)).sqrt() <= r).count())
        })
        .collect();
    Ok(ZetaReport { locations: d.to_vec(), partial_sums, counts })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FairnessReport {
    pub runs: usize,
    pub prefix_len: usize,
    pub counts: Vec<usize>,
    pub chi_square: f64,
    pub df: usize,
    pub p_value: f64,
    /// Frequency of each trit at decision 1.
    pub first_trit: [f64; 3],
    pub alpha: f64,
}

impl FairnessReport {
    pub fn pass(&self) -> bool {
        self.p_value > self.alpha
    }
}

impl fmt::Display for FairnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fairness: {} runs, prefix length {}, chi-square {:.3} (df {}), p = {:.4}, stage-1 trit frequencies {:.3}/{:.3}/{:.3} -> {}",
            self.runs,
            self.prefix_len,
            self.chi_square,
            self.df,
            self.p_value,
            self.first_trit[0],
            self.first_trit[1],
            self.first_trit[2],
            if self.pass() { "pass" } else { "FAIL" }
        )
    }
}

/// Tally the realized prefixes of `runs` unforced runs (seeds
/// base_seed, base_seed+1, ...) and test them against the uniform law.
pub fn fairness_test(ts: &Tileset, runs: usize, prefix_len: usize, base_seed: u64) -> Result<FairnessReport, VerifyError> {
    fairness_test_at(ts, runs, prefix_len, base_seed, DEFAULT_ALPHA)
}

pub fn fairness_test_at(
    ts: &Tileset,
    runs: usize,
    prefix_len: usize,
    base_seed: u64,
    alpha: f64,
) -> Result<FairnessReport, VerifyError> {
    if runs == 0 {
        return Err(VerifyError::NoRuns);
    }
    let realized: Vec<CodingPrefix> = (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            run(ts, StopPolicy::StageComplete(prefix_len as u32), base_seed.wrapping_add(i), None)
                .map(|t| t.realized())
                .map_err(VerifyError::Run)
        })
        .collect::<Result<_, _>>()?;
    let cells = 3usize.pow(prefix_len as u32);
    let mut counts = vec![0usize; cells];
    let mut first = [0usize; 3];
    for p in &realized {
        counts[p.rank()] += 1;
        if let Some(t) = p.get(1) {
            first[t as usize - 1] += 1;
        }
    }
    let expected = runs as f64 / cells as f64;
    let chi_square: f64 = counts.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    let df = cells - 1;
    let p_value = if df == 0 { 1.0 } else { ChiSquared::new(df as f64).expect("df > 0").sf(chi_square) };
    let first_trit = first.map(|c| c as f64 / runs as f64);
    Ok(FairnessReport { runs, prefix_len, counts, chi_square, df, p_value, first_trit, alpha })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LivenessReport {
    pub prefix_len: usize,
    pub realized: usize,
    pub failures: Vec<(CodingPrefix, String)>,
}

impl LivenessReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Forced run + safety check for one prefix.
pub fn realize(ts: &Tileset, prefix: &CodingPrefix, seed: u64) -> Result<Trace, String> {
    let t = run(ts, StopPolicy::StageComplete(prefix.len() as u32), seed, Some(prefix)).map_err(|e| e.to_string())?;
    if t.realized() != *prefix {
        return Err(format!("realized {} instead", t.realized()));
    }
    let s = safety_check(&t, ts).map_err(|e| e.to_string())?;
    if !s.pass() {
        return Err(s.to_string());
    }
    Ok(t)
}

pub fn liveness_for(ts: &Tileset, prefixes: &[CodingPrefix], seed: u64) -> LivenessReport {
    let results: Vec<_> = prefixes.par_iter().map(|p| (p.clone(), realize(ts, p, seed))).collect();
    let prefix_len = prefixes.iter().map(|p| p.len()).max().unwrap_or(0);
    let realized = results.iter().filter(|(_, r)| r.is_ok()).count();
    let failures = results.into_iter().filter_map(|(p, r)| r.err().map(|e| (p, e))).collect();
    LivenessReport { prefix_len, realized, failures }
}

/// Every prefix of the given length is realized by a forced run whose
/// colouring passes safety.
pub fn liveness_check(ts: &Tileset, prefix_len: usize) -> LivenessReport {
    liveness_for(ts, &CodingPrefix::all(prefix_len), 0)
}

/// Runs with the same forced decisions but different seeds must agree on
/// the colouring. Returns the first seed pair that disagrees or fails.
pub fn uniqueness_check(ts: &Tileset, prefix: &CodingPrefix, seed_pairs: &[(u64, u64)]) -> Result<(), String> {
    for &(a, b) in seed_pairs {
        let ga = realize(ts, prefix, a).and_then(|t| coloring(&t, ts, prefix.len() as u32).map_err(|e| e.to_string()))?;
        let gb = realize(ts, prefix, b).and_then(|t| coloring(&t, ts, prefix.len() as u32).map_err(|e| e.to_string()))?;
        if let Some(at) = ga.first_difference(&gb) {
            return Err(format!("seeds {a} and {b} differ at {at:?} under {prefix}"));
        }
    }
    Ok(())
}
