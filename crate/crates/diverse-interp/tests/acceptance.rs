//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its measurements (visible under `--nocapture`).
//!
//! Criteria cover Las Vegas exactness, Monte Carlo success rates, exact
//! probe budgets, good-prime density, diversification frequency,
//! verification soundness, approximate stability (with the wall-time
//! ordering of the adaptive variant against the Garg-Schost baseline),
//! transform unitarity, oracle equivalence against a brute-force dense
//! reduction, and the Kronecker round trip.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use diverse_interp::apinterp::{
    approx_interpolate, coeffs_from_unit_values, values_at_unit_roots, ApproxConfig,
};
use diverse_interp::bench::{
    gen_approx_instance, gen_ff_instance, run_bench, summarize, Algorithm, BenchCell,
    BenchOptions,
};
use diverse_interp::ffinterp::{
    interpolate_lv, interpolate_mc, main_loop_budget, sparsity_probe_budget, verify_probe_budget,
    verify_zero, InterpConfig, ZeroTest,
};
use diverse_interp::numt::{lambda_bound, primes_from, PrimeField};
use diverse_interp::poly::{
    eval_mod_cyclic, kronecker_pack, kronecker_unpack, DenseImage, MultiSparsePoly, RootOfUnity,
};
use diverse_interp::{noisy_complex_backend, sparse_backend, Fq, RemainderBlackBox, SparsePoly};

const Q61: u64 = (1 << 61) - 1;

fn ff_instance(t: u32, log2_d: u32, seed: u64) -> (SparsePoly<Fq>, BigUint) {
    let d = BigUint::one() << log2_d;
    (gen_ff_instance(t, &d, Q61, seed).expect("grid keeps T <= D"), d)
}

/// Criterion 1: 200 random instances across T in {1,5,10,20} and
/// log2 D in {12,16,20,32} — the Las Vegas driver returns the hidden
/// polynomial every single time.
#[test]
fn criterion_01_las_vegas_exactness() {
    let ts = [1u32, 5, 10, 20];
    let bits = [12u32, 16, 20, 32];
    let jobs: Vec<(u32, u32, u64)> = (0..200)
        .map(|i| (ts[i % 4], bits[(i / 4) % 4], 9000 + i as u64))
        .collect();
    let exact = jobs
        .par_iter()
        .map(|&(t, b, seed)| {
            let (hidden, d) = ff_instance(t, b, seed);
            let bx = sparse_backend(hidden.clone(), PrimeField::new(Q61), t, d.clone());
            let cfg = InterpConfig::new(t, d, 0.5);
            let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xFACE);
            let got = interpolate_lv(&bx, &cfg, &mut rng);
            got.poly == hidden
        })
        .filter(|&ok| ok)
        .count();
    assert_eq!(exact, 200, "Las Vegas must be exact on every trial");
    println!("acceptance 1 (las vegas exactness): PASS — 200/200 exact");
}

/// Criterion 2: at mu = 0.05 the Monte Carlo driver is exact in at least
/// 90 of 100 trials (T = 10, D = 2^16, q = 2^61 - 1).
#[test]
fn criterion_02_monte_carlo_success_rate() {
    let exact = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let (hidden, d) = ff_instance(10, 16, 20_000 + i);
            let bx = sparse_backend(hidden.clone(), PrimeField::new(Q61), 10, d.clone());
            let cfg = InterpConfig::new(10, d, 0.05);
            let mut rng = ChaCha12Rng::seed_from_u64(i ^ 0xBEEF);
            matches!(interpolate_mc(&bx, &cfg, &mut rng), Ok(res) if res.poly == hidden)
        })
        .filter(|&ok| ok)
        .count();
    assert!(exact >= 90, "only {exact}/100 Monte Carlo trials were exact");
    println!("acceptance 2 (monte carlo success rate): PASS — {exact}/100 exact");
}

/// Criterion 3: the Monte Carlo probe count equals its closed form
/// ceil(log2(3/mu)) + diversify attempts + ceil(2 ln(3/mu) + 4 ln D/ln lambda)
/// on every trial; at T = 10, D = 2^20, mu = 0.1 the main loop is 15 probes.
#[test]
fn criterion_03_probe_count_closed_form() {
    let d = BigUint::one() << 20;
    let lambda = lambda_bound(10, &d);
    assert_eq!(lambda, 2080);
    let main = main_loop_budget(0.1, &d, lambda);
    assert_eq!(main, 15, "pinned main-loop budget for T=10, D=2^20, mu=0.1");
    let m = sparsity_probe_budget(0.1);
    assert_eq!(m, 5);

    let mut checked = 0;
    for i in 0..100u64 {
        let (hidden, d) = ff_instance(10, 20, 30_000 + i);
        let bx = sparse_backend(hidden, PrimeField::new(Q61), 10, d.clone());
        let cfg = InterpConfig::new(10, d, 0.1);
        let mut rng = ChaCha12Rng::seed_from_u64(i ^ 0xC0DE);
        match interpolate_mc(&bx, &cfg, &mut rng) {
            Ok(res) => {
                assert_eq!(
                    res.stats.probes,
                    m + res.diversify_attempts as u64 + main,
                    "trial {i}: probe count off its closed form"
                );
                checked += 1;
            }
            Err(e) => panic!("trial {i} failed outright: {e}"),
        }
    }
    println!(
        "acceptance 3 (probe count closed form): PASS — {checked}/100 trials matched \
         {m} + attempts + {main}"
    );
}

/// Criterion 4: over 100 random exponent sets (T = 10, D = 2^20), at least
/// 45% of the primes in {lambda..2 lambda} are good, measured against an
/// exhaustive pairwise-gap divisibility oracle.
#[test]
fn criterion_04_good_prime_density() {
    let mut rng = ChaCha12Rng::seed_from_u64(404);
    let lambda = lambda_bound(10, &(BigUint::one() << 20));
    let primes: Vec<u64> = primes_from(lambda).take_while(|&p| p <= 2 * lambda).collect();
    let mut total_fraction = 0.0;
    let mut worst: f64 = 1.0;
    for _ in 0..100 {
        let mut exps = HashSet::new();
        while exps.len() < 10 {
            exps.insert(rng.random_range(0..1u64 << 20));
        }
        let exps: Vec<u64> = exps.into_iter().collect();
        let good = primes
            .iter()
            .filter(|&&p| {
                exps.iter().enumerate().all(|(i, &a)| {
                    exps[..i].iter().all(|&b| (a.abs_diff(b)) % p != 0)
                })
            })
            .count();
        let fraction = good as f64 / primes.len() as f64;
        total_fraction += fraction;
        worst = worst.min(fraction);
    }
    let mean = total_fraction / 100.0;
    assert!(mean >= 0.45, "mean good-prime fraction {mean} below 0.45");
    println!(
        "acceptance 4 (good prime density): PASS — mean fraction {mean:.3}, worst {worst:.3} \
         over {} primes in the range",
        primes.len()
    );
}

/// Criterion 5: over 1000 draws of (f, alpha) with repeated-coefficient f
/// and q >= T(T-1)D + 1, a random alpha makes f(alpha x) diverse at least
/// 45% of the time.
#[test]
fn criterion_05_diversification_frequency() {
    let field = PrimeField::new(Q61);
    let mut rng = ChaCha12Rng::seed_from_u64(505);
    let mut diverse = 0u32;
    for _ in 0..100 {
        // All coefficients equal: as non-diverse as it gets.
        let c = field.random_nonzero(&mut rng);
        let mut exps = HashSet::new();
        while exps.len() < 10 {
            exps.insert(rng.random_range(0..1u64 << 16));
        }
        let exps: Vec<u64> = exps.into_iter().collect();
        for _ in 0..10 {
            let alpha = field.random_nonzero(&mut rng);
            let shifted: HashSet<Fq> =
                exps.iter().map(|&e| c * alpha.pow(e)).collect();
            if shifted.len() == exps.len() {
                diverse += 1;
            }
        }
    }
    let freq = diverse as f64 / 1000.0;
    assert!(freq >= 0.45, "diversification frequency {freq} below 0.45");
    println!("acceptance 5 (diversification frequency): PASS — {diverse}/1000 diverse");
}

/// Criterion 6: the zero test is sound on 1000 adversarial nonzero
/// polynomials whose gaps are saturated with small prime factors and whose
/// coefficients cancel wherever those primes fold terms together; the zero
/// polynomial is certified in exactly ceil((T-1) log2 D) probes.
#[test]
fn criterion_06_verification_soundness() {
    let field = PrimeField::new(Q61);
    // 2*3*5*7*11*13*17*19*23: every prime up to 23 divides every gap.
    let primorial: u64 = 223_092_870;
    let mut rng = ChaCha12Rng::seed_from_u64(606);
    let d: BigUint = BigUint::one() << 40;
    for trial in 0..1000 {
        // Paired (+c, -c) coefficients make the image vanish at every bad
        // prime: all terms fold onto one residue and cancel.
        let t = 2 * rng.random_range(1..=3u32);
        let base = rng.random_range(0..1u64 << 30);
        let mut terms = Vec::new();
        let mut offset = 0u64;
        for i in 0..t {
            let c = field.random_nonzero(&mut rng);
            terms.push((if i % 2 == 0 { c } else { -c }, BigUint::from(base + offset)));
            offset += primorial * rng.random_range(1..=4u64);
        }
        let f = SparsePoly::new(terms);
        assert!(!f.is_zero());
        let bx = sparse_backend(f, field, t, d.clone());
        assert_eq!(
            verify_zero(&bx, t, &d),
            ZeroTest::Nonzero,
            "adversarial trial {trial} wrongly certified ZERO"
        );
    }

    let zero_bx = sparse_backend(SparsePoly::zero(), field, 3, BigUint::from(16u32));
    assert_eq!(verify_zero(&zero_bx, 3, &BigUint::from(16u32)), ZeroTest::Zero);
    let budget = verify_probe_budget(3, &BigUint::from(16u32));
    assert_eq!(zero_bx.stats().probes, budget);
    assert_eq!(budget, 8);
    println!(
        "acceptance 6 (verification soundness): PASS — 1000/1000 NONZERO, zero certified \
         in exactly {budget} probes"
    );
}

/// Criterion 7: approximate stability at noise levels {0, 1e-12, 1e-9,
/// 1e-6} (degree <= 2^20, 50 terms, 10 trials each): every successful trial
/// satisfies ||g - f|| <= 2 eps ||f|| and max coefficient error <= 10 eps;
/// plus the wall-time ordering median(alg1pp) <= median(gsmc) on cells with
/// T >= 20, log2 D >= 24.
#[test]
fn criterion_07_approx_stability_and_timing() {
    let degree_bound = BigUint::one() << 20;
    let levels = [0.0f64, 1e-12, 1e-9, 1e-6];
    for &eps in &levels {
        let errs: Vec<(f64, f64)> = (0..10u64)
            .into_par_iter()
            .map(|i| {
                let hidden = gen_approx_instance(50, &degree_bound, 0.1, 70_000 + i)
                    .expect("valid instance");
                let floor = hidden
                    .terms()
                    .iter()
                    .map(|t| t.coeff.norm())
                    .fold(f64::INFINITY, f64::min);
                let bx = noisy_complex_backend(
                    hidden.clone(),
                    50,
                    degree_bound.clone(),
                    eps,
                    81_000 + i,
                );
                let cfg =
                    ApproxConfig::new(50, degree_bound.clone(), eps, 0.99 * floor, 1e-3);
                let mut rng = ChaCha12Rng::seed_from_u64(i ^ 0xD1CE);
                let got = approx_interpolate(&bx, &cfg, &mut rng)
                    .unwrap_or_else(|e| panic!("trial {i} at eps={eps:e} failed: {e}"));
                // Support must be exact: every true coefficient clears the
                // delta floor by construction.
                let support_ok = got.poly.sparsity() == 50
                    && got
                        .poly
                        .terms()
                        .iter()
                        .zip(hidden.terms())
                        .all(|(a, b)| a.exp == b.exp);
                assert!(support_ok, "support mismatch at eps={eps:e}, trial {i}");
                let norm_err = got.poly.sub(&hidden).norm2();
                let max_coeff_err = got
                    .poly
                    .terms()
                    .iter()
                    .zip(hidden.terms())
                    .map(|(a, b)| (a.coeff - b.coeff).norm())
                    .fold(0.0, f64::max);
                (norm_err, max_coeff_err)
            })
            .collect();
        let mut norm_errs: Vec<f64> = errs.iter().map(|e| e.0).collect();
        norm_errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let max_norm = *norm_errs.last().unwrap();
        let mean = norm_errs.iter().sum::<f64>() / norm_errs.len() as f64;
        let median = 0.5 * (norm_errs[4] + norm_errs[5]);
        let max_coeff = errs.iter().map(|e| e.1).fold(0.0, f64::max);
        // ||f|| = 1 by construction of the generator.
        if eps == 0.0 {
            assert!(max_norm <= 1e-10, "noiseless error {max_norm} above 1e-10");
        } else {
            assert!(max_norm <= 2.0 * eps, "norm error {max_norm} above 2 eps = {}", 2.0 * eps);
            assert!(max_coeff <= 10.0 * eps, "coeff error {max_coeff} above 10 eps");
        }
        println!(
            "acceptance 7 stability at noise {eps:>6.0e}: mean {mean:.3e} median {median:.3e} \
             max {max_norm:.3e} (coeff max {max_coeff:.3e})"
        );
    }

    // Wall-time ordering on large cells, >= 5 trials per cell per
    // algorithm. Individual Monte Carlo trials may fail (the adaptive
    // variant scouts the sparsity with a single probe); the criterion is
    // the median ordering, with a success-rate sanity floor.
    for (t, bits) in [(20u32, 24u32), (20, 32), (30, 28)] {
        let cells = vec![
            BenchCell { alg: Algorithm::Alg1pp, t_bound: t, log2_d: bits, trials: 9 },
            BenchCell { alg: Algorithm::GsMc, t_bound: t, log2_d: bits, trials: 9 },
        ];
        let records = run_bench(&cells, &BenchOptions { seed: 777, mu: 0.1, ..Default::default() });
        let successes = records.iter().filter(|r| r.success).count();
        assert!(
            successes >= 14,
            "only {successes}/18 timing trials succeeded at T={t}, log2D={bits}"
        );
        let rows = summarize(&records);
        let adaptive = rows.iter().find(|r| r.alg == Algorithm::Alg1pp).unwrap();
        let baseline = rows.iter().find(|r| r.alg == Algorithm::GsMc).unwrap();
        assert!(
            adaptive.median_wall_ms <= baseline.median_wall_ms,
            "alg1pp median {} ms above gsmc median {} ms at T={t}, log2D={bits}",
            adaptive.median_wall_ms,
            baseline.median_wall_ms
        );
        println!(
            "acceptance 7 timing T={t} log2D={bits}: alg1pp {:.2} ms <= gsmc {:.2} ms \
             ({} vs {} median probes)",
            adaptive.median_wall_ms,
            baseline.median_wall_ms,
            adaptive.median_probes,
            baseline.median_probes
        );
    }
    println!("acceptance 7 (approx stability + timing ordering): PASS");
}

/// Criterion 8: the unit-root transforms round-trip to 1e-12 relative at
/// prime lengths including 65537-sized ones, and the norm identity
/// (1/p) sum |f(omega^i)|^2 = ||f||^2 holds to 1e-10 at a good prime.
#[test]
fn criterion_08_fft_unitarity_and_parseval() {
    let mut rng = ChaCha12Rng::seed_from_u64(808);
    for p in [23usize, 1009, 65521, 65537, 65539] {
        let v: Vec<Complex64> = (0..p)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let back = coeffs_from_unit_values(values_at_unit_roots(v.clone()));
        let err: f64 =
            v.iter().zip(&back).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!(err <= 1e-12 * norm, "roundtrip error {err} at p={p}");
    }

    // Parseval at a good prime, with honest pointwise evaluation.
    let d = BigUint::one() << 16;
    let f = gen_approx_instance(10, &d, 0.1, 321).expect("valid instance");
    let lambda = lambda_bound(10, &d);
    let p = primes_from(lambda)
        .find(|&p| {
            let mut seen = HashSet::new();
            f.terms().iter().all(|t| seen.insert((&t.exp % p).to_u64().unwrap()))
        })
        .unwrap();
    let bx = noisy_complex_backend(f.clone(), 10, d, 0.0, 1);
    let sum: f64 = (0..p)
        .map(|j| bx.eval_point(RootOfUnity::new(j, p)).norm_sqr())
        .sum();
    let lhs = sum / p as f64;
    let rhs = f.norm2() * f.norm2();
    assert!(
        (lhs - rhs).abs() <= 1e-10 * rhs,
        "Parseval identity off: {lhs} vs {rhs}"
    );
    println!("acceptance 8 (fft unitarity + parseval): PASS — identity error {:.2e}", (lhs - rhs).abs());
}

/// Criterion 9: on 50 small instances every probe image from the sparse
/// backend matches an independent brute-force dense reduction.
#[test]
fn criterion_09_oracle_equivalence() {
    let field = PrimeField::new(65521);
    let mut rng = ChaCha12Rng::seed_from_u64(909);
    for trial in 0..50 {
        let t = rng.random_range(1..=5usize);
        let mut exps = HashSet::new();
        while exps.len() < t {
            exps.insert(rng.random_range(0..512u64));
        }
        let f = SparsePoly::new(
            exps.iter().map(|&e| (field.random_nonzero(&mut rng), BigUint::from(e))),
        );
        let bx = sparse_backend(f.clone(), field, t as u32, BigUint::from(512u32));

        // Brute force: expand densely, then fold residues with a running
        // power of alpha (no modular exponentiation involved).
        let deg = f.degree().map(|d| d.to_u64().unwrap()).unwrap_or(0);
        let mut dense = vec![field.zero(); deg as usize + 1];
        for term in f.terms() {
            dense[term.exp.to_u64().unwrap() as usize] = term.coeff;
        }
        for _ in 0..4 {
            let p = primes_from(rng.random_range(2..100u64)).next().unwrap();
            let alpha = field.random_nonzero(&mut rng);
            let mut expect = vec![field.zero(); p as usize];
            let mut apow = field.one();
            for (e, &c) in dense.iter().enumerate() {
                let slot = e % p as usize;
                expect[slot] = expect[slot] + c * apow;
                apow = apow * alpha;
            }
            let got = bx.probe(p, alpha);
            assert_eq!(
                got,
                DenseImage::from_coeffs(expect),
                "probe mismatch on trial {trial} at p={p}"
            );
        }
    }
    println!("acceptance 9 (oracle equivalence): PASS — 50 instances x 4 probes each");
}

/// Criterion 10: 100 random multivariate polynomials (n <= 4, d <= 32)
/// survive pack -> Las Vegas interpolation -> unpack exactly.
#[test]
fn criterion_10_kronecker_roundtrip() {
    let field = PrimeField::new(Q61);
    let ok = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha12Rng::seed_from_u64(100_000 + i);
            let n = rng.random_range(1..=4usize);
            let d = rng.random_range(2..=32u64);
            // No more terms than the tuple space can hold (n = 1, d = 2
            // leaves only two monomials).
            let space = d.saturating_pow(n as u32).min(6);
            let t = rng.random_range(1..=space as usize);
            let mut tuples = HashSet::new();
            while tuples.len() < t {
                let tuple: Vec<u64> = (0..n).map(|_| rng.random_range(0..d)).collect();
                tuples.insert(tuple);
            }
            let hidden = MultiSparsePoly::new(
                n,
                tuples.into_iter().map(|tu| {
                    (
                        field.random_nonzero(&mut rng),
                        tu.into_iter().map(BigUint::from).collect::<Vec<_>>(),
                    )
                }),
            );
            let d = BigUint::from(d);
            let packed = kronecker_pack(&hidden, &d).expect("degrees in bounds");
            let degree_bound = d.pow(n as u32).max(BigUint::from(2u32));
            let bx = sparse_backend(packed, field, t as u32, degree_bound.clone());
            let cfg = InterpConfig::new(t as u32, degree_bound, 0.5);
            let res = interpolate_lv(&bx, &cfg, &mut rng);
            kronecker_unpack(&res.poly, &d, n).expect("exponents in bounds") == hidden
        })
        .filter(|&ok| ok)
        .count();
    assert_eq!(ok, 100);
    println!("acceptance 10 (kronecker roundtrip): PASS — 100/100 exact through the substitution");
}

/// The probe images of the Fq backend double as a cross-check here: the
/// eval-sum identity ties eval_mod_cyclic to direct evaluation at 1.
#[test]
fn image_sum_crosscheck() {
    let field = PrimeField::new(Q61);
    let mut rng = ChaCha12Rng::seed_from_u64(42);
    for _ in 0..20 {
        let (hidden, _) = ff_instance(8, 16, rng.random());
        let img = eval_mod_cyclic(&hidden, 13, field.one());
        let total = img.coeffs().iter().fold(field.zero(), |a, &b| a + b);
        let direct = hidden.terms().iter().fold(field.zero(), |a, t| a + t.coeff);
        assert_eq!(total, direct);
    }
}
