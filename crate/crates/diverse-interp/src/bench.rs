//! Benchmark harness: random instance generation, per-trial drivers for
//! every algorithm variant, machine-readable records, and report
//! aggregation.
//!
//! Records serialize to one JSON object per line. A suite run is
//! deterministic given its base seed: per-trial seeds derive from
//! `(base, cell index, trial index)`, and only the wall-time field varies
//! between repeated runs of the same suite.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apinterp::{approx_interpolate, ApproxConfig};
use crate::blackbox::{noisy_complex_backend, sparse_backend, RemainderBlackBox};
use crate::ffinterp::{
    gs_interpolate_mc, interpolate_adaptive, interpolate_lv_capped, interpolate_mc, InterpConfig,
    InterpResult,
};
use crate::numt::{Fq, PrimeField};
use crate::poly::SparsePoly;

/// Default 61-bit field: the Mersenne prime `2^61 - 1`, large enough that
/// `q >= T(T-1)D + 1` holds across the whole benchmark grid.
pub const DEFAULT_Q: u64 = (1 << 61) - 1;

/// Which driver a benchmark cell exercises.
///
/// `verify` is the Las Vegas mode (Monte Carlo interpolation accepted only
/// after the deterministic zero-test verifies it); `alg1` is the same
/// interpolation without the verification step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Alg1,
    Alg1pp,
    GsMc,
    Verify,
    Approx,
}

impl Algorithm {
    pub fn parse(s: &str) -> Option<Algorithm> {
        match s {
            "alg1" => Some(Algorithm::Alg1),
            "alg1pp" => Some(Algorithm::Alg1pp),
            "gsmc" => Some(Algorithm::GsMc),
            "verify" => Some(Algorithm::Verify),
            "approx" => Some(Algorithm::Approx),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg1pp => "alg1pp",
            Algorithm::GsMc => "gsmc",
            Algorithm::Verify => "verify",
            Algorithm::Approx => "approx",
        }
    }
}

/// One trial's outcome; serializes to a single JSON line.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BenchRecord {
    pub alg: Algorithm,
    pub t_bound: u32,
    pub log2_d: u32,
    pub q: Option<u64>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub seed: u64,
    pub success: bool,
    pub probes: u64,
    pub max_p: u64,
    pub evals: u64,
    pub wall_ms: f64,
    /// Per-coefficient relative errors of this trial (approx only):
    /// mean / median / max over the true terms.
    pub mean_err: Option<f64>,
    pub median_err: Option<f64>,
    pub max_err: Option<f64>,
    pub failure: Option<String>,
}

/// One grid cell of a suite: algorithm, bounds, and trial count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchCell {
    pub alg: Algorithm,
    pub t_bound: u32,
    pub log2_d: u32,
    pub trials: u32,
}

/// Shared knobs for a suite run.
#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub seed: u64,
    pub q: u64,
    pub mu: f64,
    /// Noise level for approx cells.
    pub eps: f64,
    /// Magnitude floor used by the approx instance generator (before
    /// normalization).
    pub delta_gen: f64,
    /// Round cap for Las Vegas cells.
    pub lv_round_cap: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            seed: 1,
            q: DEFAULT_Q,
            mu: 0.05,
            eps: 1e-9,
            delta_gen: 0.1,
            lv_round_cap: 256,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("cannot place {terms} distinct exponents below degree bound {bound}")]
    TooManyTerms { terms: u32, bound: BigUint },
}

fn random_biguint_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let top_mask = if bits.is_multiple_of(8) { 0xFF } else { (1u8 << (bits % 8)) - 1 };
    loop {
        let mut buf = vec![0u8; bytes];
        rng.fill(&mut buf[..]);
        buf[bytes - 1] &= top_mask;
        let x = BigUint::from_bytes_le(&buf);
        if x < *bound {
            return x;
        }
    }
}

fn distinct_exponents<R: Rng + ?Sized>(
    count: u32,
    bound: &BigUint,
    rng: &mut R,
) -> Result<Vec<BigUint>, GenError> {
    if BigUint::from(count) > *bound {
        return Err(GenError::TooManyTerms { terms: count, bound: bound.clone() });
    }
    let mut exps = HashSet::new();
    while exps.len() < count as usize {
        exps.insert(random_biguint_below(bound, rng));
    }
    // Sorted so the coefficient draw that follows is seed-deterministic
    // (set iteration order is not).
    let mut exps: Vec<BigUint> = exps.into_iter().collect();
    exps.sort();
    Ok(exps)
}

/// A random instance over `F_q`: exactly `terms` terms, exponents uniform
/// and distinct in `[0, D)`, coefficients uniform nonzero. Deterministic
/// per seed.
pub fn gen_ff_instance(
    terms: u32,
    degree_bound: &BigUint,
    q: u64,
    seed: u64,
) -> Result<SparsePoly<Fq>, GenError> {
    let field = PrimeField::new(q);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let exps = distinct_exponents(terms, degree_bound, &mut rng)?;
    Ok(SparsePoly::new(
        exps.into_iter().map(|e| (field.random_nonzero(&mut rng), e)),
    ))
}

/// A random complex instance: exactly `terms` terms, exponents uniform and
/// distinct in `[0, D)`, coefficient magnitudes uniform in
/// `[delta_gen, 1]` with uniform phase, then the whole polynomial is scaled
/// to unit norm. Deterministic per seed.
pub fn gen_approx_instance(
    terms: u32,
    degree_bound: &BigUint,
    delta_gen: f64,
    seed: u64,
) -> Result<SparsePoly<Complex64>, GenError> {
    assert!((0.0..1.0).contains(&delta_gen), "magnitude floor must lie in [0, 1)");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let exps = distinct_exponents(terms, degree_bound, &mut rng)?;
    let raw: Vec<(Complex64, BigUint)> = exps
        .into_iter()
        .map(|e| {
            let mag = delta_gen + (1.0 - delta_gen) * rng.random::<f64>();
            let phase = std::f64::consts::TAU * rng.random::<f64>();
            (Complex64::from_polar(mag, phase), e)
        })
        .collect();
    let norm = raw.iter().map(|(c, _)| c.norm_sqr()).sum::<f64>().sqrt();
    Ok(SparsePoly::new(raw.into_iter().map(|(c, e)| (c / norm, e))))
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_seed(base: u64, cell: usize, trial: u32) -> u64 {
    mix(base ^ mix((cell as u64) << 32 | trial as u64))
}

/// Run every cell of a suite, fanning trials across the rayon pool. The
/// record order is stable: by cell index, then trial index.
pub fn run_bench(cells: &[BenchCell], opts: &BenchOptions) -> Vec<BenchRecord> {
    let jobs: Vec<(usize, u32)> = cells
        .iter()
        .enumerate()
        .flat_map(|(ci, cell)| (0..cell.trials).map(move |ti| (ci, ti)))
        .collect();
    jobs.into_par_iter()
        .map(|(ci, ti)| run_trial(&cells[ci], opts, trial_seed(opts.seed, ci, ti)))
        .collect()
}

/// The bench exit criterion: every Las Vegas run exact and every approx
/// run within its error bound. Monte Carlo cells (alg1, alg1pp, gsmc) are
/// allowed their stated failure probability; their per-trial outcomes are
/// recorded but do not gate the run.
pub fn all_passed(records: &[BenchRecord]) -> bool {
    records
        .iter()
        .filter(|r| matches!(r.alg, Algorithm::Verify | Algorithm::Approx))
        .all(|r| r.success)
}

fn run_trial(cell: &BenchCell, opts: &BenchOptions, seed: u64) -> BenchRecord {
    match cell.alg {
        Algorithm::Approx => run_approx_trial(cell, opts, seed),
        _ => run_ff_trial(cell, opts, seed),
    }
}

fn run_ff_trial(cell: &BenchCell, opts: &BenchOptions, seed: u64) -> BenchRecord {
    let degree_bound = BigUint::one() << cell.log2_d;
    let hidden = gen_ff_instance(cell.t_bound, &degree_bound, opts.q, seed)
        .expect("bench grid keeps T <= D");
    let bx = sparse_backend(hidden.clone(), PrimeField::new(opts.q), cell.t_bound, degree_bound.clone());
    let cfg = InterpConfig::new(cell.t_bound, degree_bound, opts.mu);
    let mut rng = ChaCha12Rng::seed_from_u64(mix(seed));

    let started = Instant::now();
    let outcome: Result<InterpResult, _> = match cell.alg {
        Algorithm::Alg1 => interpolate_mc(&bx, &cfg, &mut rng),
        Algorithm::Alg1pp => interpolate_adaptive(&bx, &cfg, &mut rng),
        Algorithm::GsMc => gs_interpolate_mc(&bx, &cfg, &mut rng),
        Algorithm::Verify => interpolate_lv_capped(&bx, &cfg, &mut rng, opts.lv_round_cap),
        Algorithm::Approx => unreachable!("handled by run_approx_trial"),
    };
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let stats = bx.stats();
    let (success, failure) = match &outcome {
        Ok(res) => (res.poly == hidden, (res.poly != hidden).then(|| "wrong answer".into())),
        Err(e) => (false, Some(e.to_string())),
    };
    BenchRecord {
        alg: cell.alg,
        t_bound: cell.t_bound,
        log2_d: cell.log2_d,
        q: Some(opts.q),
        eps: None,
        delta: None,
        seed,
        success,
        probes: stats.probes,
        max_p: stats.max_p,
        evals: stats.evals,
        wall_ms,
        mean_err: None,
        median_err: None,
        max_err: None,
        failure,
    }
}

/// Per-coefficient relative errors of a recovered complex polynomial
/// against the truth: `|c_rec - c_true| / |c_true|` per true term, with a
/// missing term counting as error 1.
pub fn coefficient_errors(
    recovered: &SparsePoly<Complex64>,
    truth: &SparsePoly<Complex64>,
) -> Vec<f64> {
    truth
        .terms()
        .iter()
        .map(|t| {
            match recovered.terms().iter().find(|r| r.exp == t.exp) {
                Some(r) => (r.coeff - t.coeff).norm() / t.coeff.norm(),
                None => 1.0,
            }
        })
        .collect()
}

fn run_approx_trial(cell: &BenchCell, opts: &BenchOptions, seed: u64) -> BenchRecord {
    let degree_bound = BigUint::one() << cell.log2_d;
    let hidden = gen_approx_instance(cell.t_bound, &degree_bound, opts.delta_gen, seed)
        .expect("bench grid keeps T <= D");
    let norm = hidden.norm2();
    // The generator guarantees this floor; the algorithm gets it as the
    // promised delta rather than estimating it.
    let floor = hidden
        .terms()
        .iter()
        .map(|t| t.coeff.norm())
        .fold(f64::INFINITY, f64::min)
        / norm;
    let bx = noisy_complex_backend(
        hidden.clone(),
        cell.t_bound,
        degree_bound.clone(),
        opts.eps,
        mix(seed ^ 0xA5A5_A5A5),
    );
    let cfg = ApproxConfig::new(cell.t_bound, degree_bound, opts.eps, 0.99 * floor, opts.mu);
    let mut rng = ChaCha12Rng::seed_from_u64(mix(seed));

    let started = Instant::now();
    let outcome = approx_interpolate(&bx, &cfg, &mut rng);
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let stats = bx.stats();
    let (success, errs, failure) = match &outcome {
        Ok(res) => {
            let errs = coefficient_errors(&res.poly, &hidden);
            let norm_err = res.poly.sub(&hidden).norm2();
            // The recovery contract: within 2 eps ||f|| (machine-level for
            // a noiseless oracle).
            let bound = if opts.eps == 0.0 { 1e-10 * norm } else { 2.0 * opts.eps * norm };
            let ok = norm_err <= bound;
            (ok, Some(errs), (!ok).then(|| format!("error {norm_err:.3e} above bound {bound:.3e}")))
        }
        Err(e) => (false, None, Some(e.to_string())),
    };
    let (mean_err, median_err, max_err) = match errs {
        Some(mut errs) if !errs.is_empty() => {
            errs.sort_by(|a, b| a.partial_cmp(b).expect("finite errors"));
            let mean = errs.iter().sum::<f64>() / errs.len() as f64;
            let median = if errs.len() % 2 == 1 {
                errs[errs.len() / 2]
            } else {
                0.5 * (errs[errs.len() / 2 - 1] + errs[errs.len() / 2])
            };
            (Some(mean), Some(median), Some(*errs.last().unwrap()))
        }
        _ => (None, None, None),
    };
    BenchRecord {
        alg: cell.alg,
        t_bound: cell.t_bound,
        log2_d: cell.log2_d,
        q: None,
        eps: Some(opts.eps),
        delta: Some(0.99 * floor),
        seed,
        success,
        probes: stats.probes,
        max_p: stats.max_p,
        evals: stats.evals,
        wall_ms,
        mean_err,
        median_err,
        max_err,
        failure,
    }
}

/// A summary row: records grouped by `(alg, T, log2 D, eps)`, with error
/// statistics taken over each record's max coefficient error (one number
/// per trial, as in a stability table).
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub alg: Algorithm,
    pub t_bound: u32,
    pub log2_d: u32,
    pub eps: Option<f64>,
    pub trials: usize,
    pub successes: usize,
    pub median_probes: u64,
    pub max_probe_degree: u64,
    pub median_wall_ms: f64,
    pub mean_err: Option<f64>,
    pub median_err: Option<f64>,
    pub max_err: Option<f64>,
}

fn median_u64(xs: &mut [u64]) -> u64 {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

fn median_f64(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Aggregate a record stream into summary rows, grouped and ordered by
/// `(alg, T, log2 D, eps)` first appearance.
pub fn summarize(records: &[BenchRecord]) -> Vec<ReportRow> {
    let mut order: Vec<(Algorithm, u32, u32, Option<u64>)> = Vec::new();
    let mut groups: std::collections::HashMap<
        (Algorithm, u32, u32, Option<u64>),
        Vec<&BenchRecord>,
    > = std::collections::HashMap::new();
    for r in records {
        let key = (r.alg, r.t_bound, r.log2_d, r.eps.map(f64::to_bits));
        if !groups.contains_key(&key) {
            order.push(key);
        }
        groups.entry(key).or_default().push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let rs = &groups[&key];
            let mut probes: Vec<u64> = rs.iter().map(|r| r.probes).collect();
            let mut walls: Vec<f64> = rs.iter().map(|r| r.wall_ms).collect();
            let mut errs: Vec<f64> = rs.iter().filter_map(|r| r.max_err).collect();
            let (mean_err, median_err, max_err) = if errs.is_empty() {
                (None, None, None)
            } else {
                let mean = errs.iter().sum::<f64>() / errs.len() as f64;
                let max = errs.iter().cloned().fold(0.0, f64::max);
                (Some(mean), Some(median_f64(&mut errs)), Some(max))
            };
            ReportRow {
                alg: key.0,
                t_bound: key.1,
                log2_d: key.2,
                eps: key.3.map(f64::from_bits),
                trials: rs.len(),
                successes: rs.iter().filter(|r| r.success).count(),
                median_probes: median_u64(&mut probes),
                max_probe_degree: rs.iter().map(|r| r.max_p).max().unwrap_or(0),
                median_wall_ms: median_f64(&mut walls),
                mean_err,
                median_err,
                max_err,
            }
        })
        .collect()
}

/// Render summary rows as an aligned text table.
pub fn render_table(rows: &[ReportRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<7} {:>4} {:>6} {:>9} {:>7} {:>5} {:>8} {:>7} {:>10} {:>11} {:>11} {:>11}\n",
        "alg", "T", "log2D", "noise", "trials", "ok", "probes", "max_p", "wall_ms", "mean_err",
        "median_err", "max_err"
    ));
    for r in rows {
        let fmt_err = |e: Option<f64>| e.map_or("-".into(), |v| format!("{v:.3e}"));
        out.push_str(&format!(
            "{:<7} {:>4} {:>6} {:>9} {:>7} {:>5} {:>8} {:>7} {:>10.3} {:>11} {:>11} {:>11}\n",
            r.alg.name(),
            r.t_bound,
            r.log2_d,
            r.eps.map_or("-".into(), |e| format!("{e:.0e}")),
            r.trials,
            r.successes,
            r.median_probes,
            r.max_probe_degree,
            r.median_wall_ms,
            fmt_err(r.mean_err),
            fmt_err(r.median_err),
            fmt_err(r.max_err),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ff_instance_shape_and_determinism() {
        let d = BigUint::one() << 20;
        let a = gen_ff_instance(10, &d, DEFAULT_Q, 7).unwrap();
        let b = gen_ff_instance(10, &d, DEFAULT_Q, 7).unwrap();
        let c = gen_ff_instance(10, &d, DEFAULT_Q, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.sparsity(), 10);
        assert!(a.degree().unwrap() < &d);

        // T = 1, D = 2 pins the exponent to {0, 1}.
        let tiny = gen_ff_instance(1, &BigUint::from(2u32), 11, 3).unwrap();
        assert!(tiny.terms()[0].exp <= BigUint::one());

        assert_eq!(
            gen_ff_instance(5, &BigUint::from(3u32), 11, 0),
            Err(GenError::TooManyTerms { terms: 5, bound: BigUint::from(3u32) })
        );
    }

    #[test]
    fn approx_instance_normalized_with_floor() {
        let d = BigUint::one() << 20;
        let f = gen_approx_instance(50, &d, 0.1, 9).unwrap();
        assert_eq!(f.sparsity(), 50);
        assert!((f.norm2() - 1.0).abs() < 1e-12);
        let floor = f.terms().iter().map(|t| t.coeff.norm()).fold(f64::INFINITY, f64::min);
        // The pre-normalization floor 0.1 shrinks by at most ||f||_pre <= sqrt(50).
        assert!(floor >= 0.1 / 50f64.sqrt() - 1e-12);
    }

    #[test]
    fn records_roundtrip_and_determinism() {
        let cells = vec![
            BenchCell { alg: Algorithm::Verify, t_bound: 4, log2_d: 12, trials: 3 },
            BenchCell { alg: Algorithm::Alg1pp, t_bound: 4, log2_d: 12, trials: 2 },
        ];
        let opts = BenchOptions { seed: 42, ..Default::default() };
        let run1 = run_bench(&cells, &opts);
        let run2 = run_bench(&cells, &opts);
        assert_eq!(run1.len(), 5);
        assert!(all_passed(&run1), "{:?}", run1.iter().find(|r| !r.success));

        // Byte-identical modulo the wall-time field.
        let strip = |rs: &[BenchRecord]| {
            rs.iter()
                .map(|r| {
                    let mut r = r.clone();
                    r.wall_ms = 0.0;
                    serde_json::to_string(&r).unwrap()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&run1), strip(&run2));

        // Lossless JSON round-trip.
        for r in &run1 {
            let line = serde_json::to_string(r).unwrap();
            let back: BenchRecord = serde_json::from_str(&line).unwrap();
            assert_eq!(&back, r);
        }
    }

    #[test]
    fn exit_gate_ignores_monte_carlo_failures() {
        let mk = |alg, success| BenchRecord {
            alg,
            t_bound: 10,
            log2_d: 16,
            q: Some(DEFAULT_Q),
            eps: None,
            delta: None,
            seed: 0,
            success,
            probes: 0,
            max_p: 0,
            evals: 0,
            wall_ms: 0.0,
            mean_err: None,
            median_err: None,
            max_err: None,
            failure: None,
        };
        // Monte Carlo rows may fail without gating the run.
        assert!(all_passed(&[mk(Algorithm::Alg1pp, false), mk(Algorithm::Verify, true)]));
        assert!(all_passed(&[mk(Algorithm::Alg1, false), mk(Algorithm::GsMc, false)]));
        // Las Vegas and approx rows do gate it.
        assert!(!all_passed(&[mk(Algorithm::Verify, false)]));
        assert!(!all_passed(&[mk(Algorithm::Approx, false), mk(Algorithm::Alg1, true)]));
    }

    #[test]
    fn empty_suite_is_trivially_green() {
        let records = run_bench(&[], &BenchOptions::default());
        assert!(records.is_empty());
        assert!(all_passed(&records));
        assert!(summarize(&records).is_empty());
    }

    #[test]
    fn summary_groups_by_alg_and_noise() {
        let cells = vec![
            BenchCell { alg: Algorithm::Alg1, t_bound: 3, log2_d: 12, trials: 2 },
            BenchCell { alg: Algorithm::GsMc, t_bound: 3, log2_d: 12, trials: 2 },
        ];
        let records = run_bench(&cells, &BenchOptions { seed: 5, ..Default::default() });
        let rows = summarize(&records);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].alg, Algorithm::Alg1);
        assert_eq!(rows[1].alg, Algorithm::GsMc);
        assert_eq!(rows[0].trials, 2);
        let table = render_table(&rows);
        assert!(table.contains("alg1") && table.contains("gsmc"));

        // A single record echoes as a single row.
        let one = summarize(&records[..1]);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].trials, 1);
    }

    #[test]
    fn approx_cell_reports_errors() {
        let cells =
            vec![BenchCell { alg: Algorithm::Approx, t_bound: 10, log2_d: 12, trials: 2 }];
        let opts = BenchOptions { seed: 11, eps: 1e-9, mu: 1e-3, ..Default::default() };
        let records = run_bench(&cells, &opts);
        assert!(all_passed(&records), "{:?}", records.iter().find(|r| !r.success));
        for r in &records {
            assert!(r.max_err.unwrap() <= 1e-6, "max err {:?}", r.max_err);
            assert!(r.mean_err.unwrap() <= r.max_err.unwrap());
            assert_eq!(r.eps, Some(1e-9));
        }
    }
}
