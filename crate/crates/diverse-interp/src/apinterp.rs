//! Approximate sparse interpolation over complex coefficients.
//!
//! The oracle is an [`EpsApproxBox`]: every point evaluation carries relative
//! error at most `eps`. All evaluation points sit on the unit circle at
//! exactly specified angles — a polynomial of huge degree amplifies any
//! angle error exponentially, so angles are always integer-reduced turn
//! fractions, never floats.
//!
//! The pipeline mirrors the finite-field skeleton with numerical stand-ins:
//! * [`approx_norm`] estimates `||f||` from one evaluation sweep per draw
//!   (median of `ceil(log2(3/mu))` draws);
//! * [`approx_remainder`] recovers `f(alpha x) rem (x^p - 1)` from `p`
//!   evaluations by the scaled inverse transform, whose unitarity turns the
//!   per-point error bound into `||image error|| <= eps ||f||`;
//! * [`diversify_approx`] adaptively picks a prime-order root of unity
//!   `zeta^k` so that all above-noise coefficients of `f(zeta^k x)` are
//!   pairwise separated (eps-diversity);
//! * [`approx_interpolate`] combines them: coefficients above the term
//!   threshold `tau = (delta/2) sigma` identify terms across good-prime
//!   images by nearest-key matching, exponents come from per-slot Chinese
//!   remaindering, and the final output satisfies
//!   `||f - g|| <= 2 eps ||f||` on success.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::One;
use rand::Rng;
use thiserror::Error;

use crate::blackbox::{EpsApproxBox, ProbeStats};
use crate::ffinterp::{main_loop_budget, sparsity_probe_budget};
use crate::numt::{lambda_bound, PrimeSampler};
use crate::poly::{DenseImage, RootOfUnity, SparsePoly};

pub use crate::fft::{coeffs_from_unit_values, values_at_unit_roots};

/// Stands in for `eps` in separation thresholds when `eps = 0`, so the
/// noiseless case still tolerates transform-level floating-point fuzz.
const EPS_FLOOR: f64 = 1e-12;

/// Bounds and error model for the approximate problem.
#[derive(Debug, Clone)]
pub struct ApproxConfig {
    /// Sparsity bound `T >= 1`.
    pub term_bound: u32,
    /// Degree bound `D >= 2`.
    pub degree_bound: BigUint,
    /// Relative error of every black-box evaluation; `0 <= eps <= delta`.
    pub eps: f64,
    /// Promised coefficient floor: every true `|c_i| >= delta ||f||`.
    pub delta: f64,
    /// Failure probability in (0, 1).
    pub failure_prob: f64,
    /// Multiplier on the `s <= t^2` stopping rule of the adaptive
    /// diversification search.
    pub diversify_guard: u32,
}

impl ApproxConfig {
    /// Validates the problem hypotheses, including the combined-algorithm
    /// requirement `eps < 1.5 delta / (T(T-1))` for `T >= 2`.
    pub fn new(
        term_bound: u32,
        degree_bound: BigUint,
        eps: f64,
        delta: f64,
        failure_prob: f64,
    ) -> Self {
        assert!(term_bound >= 1, "term bound must be at least 1");
        assert!(degree_bound >= BigUint::from(2u32), "degree bound must be at least 2");
        assert!(delta > 0.0, "coefficient floor must be positive");
        assert!((0.0..=1.0).contains(&eps) && eps <= delta, "need 0 <= eps <= delta");
        assert!(
            failure_prob > 0.0 && failure_prob < 1.0,
            "failure probability must lie in (0, 1)"
        );
        if term_bound >= 2 {
            let pairs = term_bound as f64 * (term_bound - 1) as f64;
            assert!(
                eps < 1.5 * delta / pairs,
                "need eps < 1.5 delta / (T(T-1)) for reliable term separation"
            );
        }
        ApproxConfig {
            term_bound,
            degree_bound,
            eps,
            delta,
            failure_prob,
            diversify_guard: 4,
        }
    }

    fn lambda(&self) -> u64 {
        lambda_bound(self.term_bound, &self.degree_bound)
    }

    fn eps_effective(&self) -> f64 {
        self.eps.max(EPS_FLOOR)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApproxError {
    #[error("the polynomial could not be made eps-diverse at this precision")]
    NotDiversifiable,
    #[error("the diversified key image did not isolate the expected term count")]
    KeyImageMismatch,
    #[error("good primes covered a modulus product below the degree bound")]
    InsufficientGoodPrimes,
    #[error("a combined exponent fell outside [0, D)")]
    ExponentOutOfRange,
}

/// A successful approximate interpolation.
#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub poly: SparsePoly<Complex64>,
    pub stats: ProbeStats,
    /// The norm estimate all thresholds were scaled by.
    pub sigma: f64,
}

/// The diversifier chosen by [`diversify_approx`].
#[derive(Debug, Clone)]
pub struct Diversifier {
    /// `zeta^k`, a power of a prime-order root of unity.
    pub zeta: RootOfUnity,
    /// The accepted image of `f(zeta^k x) rem (x^p - 1)`.
    pub image: DenseImage<Complex64>,
    /// Magnitude of the first coefficient excluded from the separated
    /// prefix (the measured noise ceiling for this image).
    pub sep_floor: f64,
}

/// One evaluation sweep at a random prime `p` in `{lambda..2 lambda}`:
/// `sigma = ||(f(omega^0), ..., f(omega^(p-1)))|| / sqrt(p)`. When `p` is
/// good for `f`, `(1 - 2 eps) ||f|| < sigma < (1 + eps) ||f||`, which
/// happens with probability at least 1/2 per draw.
pub fn approx_norm_once<R: Rng + ?Sized>(
    box_: &EpsApproxBox,
    cfg: &ApproxConfig,
    rng: &mut R,
) -> f64 {
    let range = crate::numt::PrimeRange::from_lambda(cfg.lambda());
    let p = crate::numt::random_prime(&range, rng);
    norm_from_sweep(box_, p)
}

fn norm_from_sweep(box_: &EpsApproxBox, p: u64) -> f64 {
    let w = box_.eval_row(p, RootOfUnity::one());
    (w.iter().map(|v| v.norm_sqr()).sum::<f64>() / p as f64).sqrt()
}

/// Median of `ceil(log2(3/mu))` independent norm draws; the estimate used
/// to scale every threshold in the combined algorithm.
pub fn approx_norm<R: Rng + ?Sized>(
    box_: &EpsApproxBox,
    cfg: &ApproxConfig,
    rng: &mut R,
) -> f64 {
    let draws = sparsity_probe_budget(cfg.failure_prob);
    let mut sigmas: Vec<f64> = (0..draws).map(|_| approx_norm_once(box_, cfg, rng)).collect();
    median(&mut sigmas)
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("norm estimates are finite"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// `f(alpha x) rem (x^p - 1)` from `p` noisy evaluations and one inverse
/// transform. When `p` is good for `f`, the result `h` satisfies
/// `||(f(alpha x) rem (x^p - 1)) - h|| <= eps ||f||`.
pub fn approx_remainder(box_: &EpsApproxBox, p: u64, alpha: RootOfUnity) -> DenseImage<Complex64> {
    let w = box_.eval_row(p, alpha);
    DenseImage::from_coeffs(coeffs_from_unit_values(w))
}

/// Largest `k` such that the `k` largest-magnitude coefficients are pairwise
/// at least `min_gap` apart, plus the magnitude of the first excluded
/// coefficient (`0` when nothing is excluded).
///
/// That excluded magnitude is the measured separation floor: thresholding
/// anywhere above it keeps only pairwise-distinguishable coefficients.
fn separation_prefix(coeffs: &[Complex64], min_gap: f64) -> (usize, f64) {
    let mut by_mag: Vec<Complex64> = coeffs.to_vec();
    by_mag.sort_by(|a, b| b.norm_sqr().partial_cmp(&a.norm_sqr()).expect("finite"));
    let mut k = 0;
    'grow: while k < by_mag.len() {
        for i in 0..k {
            if (by_mag[i] - by_mag[k]).norm() < min_gap {
                break 'grow;
            }
        }
        k += 1;
    }
    let floor = if k < by_mag.len() { by_mag[k].norm() } else { 0.0 };
    (k, floor)
}

/// Adaptive diversification: double `s` through primes (2, 5, 11, 23, ...),
/// draw `k` uniform in `{0..s}` up to `draws_per_s` times per `s`, and
/// accept `zeta^k` as soon as `t` coefficients of `f(zeta^k x) rem x^p - 1`
/// separate pairwise by `eps sigma` above the measured floor. Fails once
/// `s` passes `guard * t^2` — the polynomial has coefficients too close
/// together at this precision.
pub fn diversify_approx<R: Rng + ?Sized>(
    box_: &EpsApproxBox,
    p: u64,
    t: usize,
    cfg: &ApproxConfig,
    sigma: f64,
    rng: &mut R,
) -> Result<Diversifier, ApproxError> {
    let sep = cfg.eps_effective() * sigma;
    let fail_gate = 2.0 * sep;
    let draws_per_s = sparsity_probe_budget(cfg.failure_prob);
    let cap = (t as u64 * t as u64).saturating_mul(cfg.diversify_guard.max(1) as u64);
    let mut s = 1u64;
    loop {
        s = crate::numt::least_prime_geq(2 * s);
        for _ in 0..draws_per_s {
            let k = rng.random_range(0..s);
            let zeta = RootOfUnity::new(k, s);
            let image = approx_remainder(box_, p, zeta);
            let (count, floor) = separation_prefix(image.coeffs(), sep);
            if count >= t && floor <= fail_gate {
                return Ok(Diversifier { zeta, image, sep_floor: floor });
            }
        }
        if s > cap {
            return Err(ApproxError::NotDiversifiable);
        }
    }
}

/// Combined approximate interpolation: norm estimate, sparsity scan,
/// adaptive diversification, then per-slot CRT exponent recovery with
/// nearest-key coefficient matching. On success the output `g` has at most
/// `T` terms and satisfies `||f - g|| <= 2 eps ||f||`.
pub fn approx_interpolate<R: Rng + ?Sized>(
    box_: &EpsApproxBox,
    cfg: &ApproxConfig,
    rng: &mut R,
) -> Result<ApproxResult, ApproxError> {
    let lambda = cfg.lambda();
    let m = sparsity_probe_budget(cfg.failure_prob);
    let n = main_loop_budget(cfg.failure_prob, &cfg.degree_bound, lambda);
    let mut sampler = PrimeSampler::with_capacity(lambda, 2 * m + n);

    // Norm first: every later threshold is relative to sigma.
    let mut sigmas: Vec<f64> =
        (0..m).map(|_| norm_from_sweep(box_, sampler.next(rng))).collect();
    let sigma = median(&mut sigmas);
    if sigma == 0.0 {
        return Ok(ApproxResult { poly: SparsePoly::zero(), stats: box_.stats(), sigma });
    }
    let tau = 0.5 * cfg.delta * sigma;

    // Sparsity scan, counting coefficients above the term threshold.
    let mut best: Option<(usize, u64)> = None;
    for _ in 0..m {
        let p = sampler.next(rng);
        let image = approx_remainder(box_, p, RootOfUnity::one());
        let count = image.sparsity(tau);
        if best.is_none_or(|(bt, _)| count > bt) {
            best = Some((count, p));
        }
    }
    let (t, rho) = best.expect("at least one sparsity probe");
    if t == 0 {
        return Ok(ApproxResult { poly: SparsePoly::zero(), stats: box_.stats(), sigma });
    }

    let chosen = diversify_approx(box_, rho, t, cfg, sigma, rng)?;
    let zeta = chosen.zeta;
    let key: Vec<(u64, Complex64)> = chosen.image.above(tau).collect();
    if key.len() != t {
        return Err(ApproxError::KeyImageMismatch);
    }

    // Exponent loop: accept an image when its above-threshold terms match
    // the key bijectively and unambiguously; a discarded image only costs
    // one prime, a wrong residue would poison the CRT.
    let ambiguity_radius = cfg.eps * sigma;
    let mut accepted: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut modulus = BigUint::one();
    for _ in 0..n {
        let p = sampler.next(rng);
        let image = approx_remainder(box_, p, zeta);
        let terms: Vec<(u64, Complex64)> = image.above(tau).collect();
        if terms.len() != t {
            continue;
        }
        if let Some(residues) = match_terms(&terms, &key, ambiguity_radius) {
            accepted.push((p, residues));
            modulus *= p;
        }
    }
    if modulus < cfg.degree_bound {
        return Err(ApproxError::InsufficientGoodPrimes);
    }

    let mut terms = Vec::with_capacity(t);
    for (slot, &(_, coeff)) in key.iter().enumerate() {
        let residues: Vec<(u64, u64)> =
            accepted.iter().map(|(p, res)| (res[slot], *p)).collect();
        let (e, _) = crate::numt::crt_combine(&residues).expect("distinct primes");
        if e >= cfg.degree_bound {
            return Err(ApproxError::ExponentOutOfRange);
        }
        // c_i <- c_i zeta^(-k e_i), the inverse shift with an exact angle.
        let unshift = zeta.pow_big(&e).inv().value();
        terms.push((coeff * unshift, e));
    }
    Ok(ApproxResult { poly: SparsePoly::new(terms), stats: box_.stats(), sigma })
}

/// Match each image term to its nearest key coefficient; reject the image
/// if any term sits within the ambiguity radius of two keys or two terms
/// claim one key. Returns the exponent residue for each key slot.
fn match_terms(
    terms: &[(u64, Complex64)],
    key: &[(u64, Complex64)],
    ambiguity_radius: f64,
) -> Option<Vec<u64>> {
    let mut residues = vec![u64::MAX; key.len()];
    for &(j, c) in terms {
        let mut nearest = (f64::INFINITY, usize::MAX);
        let mut within = 0u32;
        for (i, &(_, kc)) in key.iter().enumerate() {
            let d = (c - kc).norm();
            if d < nearest.0 {
                nearest = (d, i);
            }
            if d <= ambiguity_radius {
                within += 1;
            }
        }
        if within >= 2 || residues[nearest.1] != u64::MAX {
            return None;
        }
        residues[nearest.1] = j;
    }
    Some(residues)
}
