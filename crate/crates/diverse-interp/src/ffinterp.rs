//! Sparse interpolation over word-sized prime fields.
//!
//! The Monte Carlo driver ([`interpolate_mc`]) probes at random primes from
//! `{lambda, ..., 2 lambda}` to learn the sparsity, finds a random `alpha`
//! making `f(alpha x)` diverse, then correlates terms across good-prime
//! images by their (pairwise distinct) coefficients and rebuilds each
//! exponent by Chinese remaindering. A deterministic zero test
//! ([`verify_zero`]) turns it into a Las Vegas algorithm
//! ([`interpolate_lv`]) whose output is always the hidden polynomial.
//!
//! Two more drivers share the skeleton: [`interpolate_adaptive`] replaces
//! the big-prime exponent loop with a search over consecutive primes
//! starting near `t^2` (the birthday-problem lower bound), and
//! [`gs_interpolate_mc`] is the randomized Garg-Schost baseline that skips
//! diversification and instead reconstructs the integer symmetric
//! polynomial of the exponents, at a factor-`t` cost in probes.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use thiserror::Error;

use crate::blackbox::{difference, diversified, ProbeStats, RemainderBlackBox};
use crate::numt::{
    self, crt_combine, lambda_bound, ln_big, log2_big, random_prime, Fq, PrimeRange,
    PrimeSampler,
};
use crate::poly::{DenseImage, SparsePoly};

/// Bounds handed to every interpolation driver.
#[derive(Debug, Clone)]
pub struct InterpConfig {
    /// Sparsity bound `T >= 1`.
    pub term_bound: u32,
    /// Degree bound `D >= 2` (exponents lie in `[0, D)`).
    pub degree_bound: BigUint,
    /// Failure probability `mu` in (0, 1) for the Monte Carlo drivers.
    pub failure_prob: f64,
}

impl InterpConfig {
    pub fn new(term_bound: u32, degree_bound: BigUint, failure_prob: f64) -> Self {
        assert!(term_bound >= 1, "term bound must be at least 1");
        assert!(degree_bound >= BigUint::from(2u32), "degree bound must be at least 2");
        assert!(
            failure_prob > 0.0 && failure_prob < 1.0,
            "failure probability must lie in (0, 1)"
        );
        InterpConfig { term_bound, degree_bound, failure_prob }
    }

    fn lambda(&self) -> u64 {
        lambda_bound(self.term_bound, &self.degree_bound)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("no diversifying alpha passed the test within the attempt budget")]
    NotDiversified,
    #[error("good primes covered a modulus product below the required bound")]
    InsufficientGoodPrimes,
    #[error("a combined exponent fell outside [0, D)")]
    ExponentOutOfRange,
    #[error("the symmetric polynomial did not split into distinct integer roots in [0, D)")]
    RootFindingFailed,
    #[error("degree bound too large for the Garg-Schost baseline (needs D < 2^62)")]
    DegreeTooLargeForGs,
    #[error("Las Vegas round cap exceeded")]
    RoundCapExceeded,
}

/// A successful interpolation: the recovered polynomial plus accounting.
#[derive(Debug, Clone)]
pub struct InterpResult {
    pub poly: SparsePoly<Fq>,
    /// Snapshot of the box's counters when the run finished.
    pub stats: ProbeStats,
    /// Probes spent testing diversifier candidates (0 for the zero result
    /// and for the Garg-Schost baseline, which never diversifies).
    pub diversify_attempts: u32,
    /// Largest prime probed in the adaptive small-prime search; `None` for
    /// the drivers that draw every exponent prime from `{lambda..2 lambda}`.
    pub small_prime_max: Option<u64>,
}

/// `ZERO` / `NONZERO` verdict of the deterministic identity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    Nonzero,
}

/// Number of probes spent learning the sparsity: `ceil(log2(3/mu))`.
pub fn sparsity_probe_budget(failure_prob: f64) -> u64 {
    ((3.0 / failure_prob).log2()).ceil() as u64
}

/// Probes in the exponent-recovery loop:
/// `ceil(2 ln(3/mu) + 4 ln(D) / ln(lambda))`.
pub fn main_loop_budget(failure_prob: f64, degree_bound: &BigUint, lambda: u64) -> u64 {
    let x = 2.0 * (3.0 / failure_prob).ln() + 4.0 * ln_big(degree_bound) / (lambda as f64).ln();
    x.ceil() as u64
}

/// Probes used by the deterministic zero test: the least
/// `ceil((T-1) log2 D)` primes (at least one; the closed form degenerates to
/// zero at `T = 1` where a single probe at any prime already decides).
pub fn verify_probe_budget(term_bound: u32, degree_bound: &BigUint) -> u64 {
    (((term_bound.saturating_sub(1)) as f64 * log2_big(degree_bound)).ceil() as u64).max(1)
}

fn zero_result<B: RemainderBlackBox>(box_: &B) -> InterpResult {
    InterpResult {
        poly: SparsePoly::zero(),
        stats: box_.stats(),
        diversify_attempts: 0,
        small_prime_max: None,
    }
}

/// Probe `budget` fresh random primes at `alpha = 1` and keep the largest
/// term count seen, a prime attaining it, and that prime's image.
fn scan_sparsity<B: RemainderBlackBox, R: Rng + ?Sized>(
    box_: &B,
    budget: u64,
    sampler: &mut PrimeSampler,
    rng: &mut R,
) -> (usize, u64, DenseImage<Fq>) {
    let one = box_.field().one();
    let mut best: Option<(usize, u64, DenseImage<Fq>)> = None;
    for _ in 0..budget {
        let p = sampler.next(rng);
        let img = box_.probe(p, one);
        let t = img.sparsity();
        if best.as_ref().is_none_or(|(bt, _, _)| t > *bt) {
            best = Some((t, p, img));
        }
    }
    best.expect("budget is at least one probe")
}

/// The sparsity scan: returns the observed sparsity `t` and a prime
/// `rho` attaining it, from `ceil(log2(3/mu))` random primes in
/// `{lambda..2 lambda}`. A result of `t = 0` means the zero polynomial.
pub fn find_sparsity<B: RemainderBlackBox, R: Rng + ?Sized>(
    box_: &B,
    cfg: &InterpConfig,
    rng: &mut R,
) -> (usize, u64) {
    let budget = sparsity_probe_budget(cfg.failure_prob);
    let mut sampler = PrimeSampler::with_capacity(cfg.lambda(), budget);
    let (t, rho, _) = scan_sparsity(box_, budget, &mut sampler, rng);
    (t, rho)
}

/// Search for `alpha` making `f(alpha x)` diverse: sample `alpha` uniform in
/// `F_q^*`, probe at the good prime `rho`, and accept when the image keeps
/// `t` pairwise-distinct coefficients. At most `ceil(log2(3/mu))` attempts.
///
/// On success returns the accepted diversified image alongside `alpha` (it
/// is exactly the key image the exponent loop needs, so the caller spends no
/// extra probe) and the number of attempts used.
pub fn diversify_ff<B: RemainderBlackBox, R: Rng + ?Sized>(
    box_: &B,
    t: usize,
    rho: u64,
    failure_prob: f64,
    rng: &mut R,
) -> Result<(Fq, DenseImage<Fq>, u32), InterpError> {
    let field = box_.field();
    let budget = sparsity_probe_budget(failure_prob);
    for attempt in 1..=budget {
        let alpha = field.random_nonzero(rng);
        let img = box_.probe(rho, alpha);
        if img.sparsity() == t && img.is_diverse() {
            return Ok((alpha, img, attempt as u32));
        }
    }
    Err(InterpError::NotDiversified)
}

/// Slot map from a diverse key: coefficient value -> key position.
fn key_slots(key: &[Fq]) -> HashMap<Fq, usize> {
    let map: HashMap<Fq, usize> = key.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    assert_eq!(map.len(), key.len(), "key coefficients must be pairwise distinct");
    map
}

/// Accept an image only if it has exactly `t` terms whose coefficient
/// multiset equals the key's; returns the exponent residue for each key
/// slot. Demanding the full multiset, not just the count, rules out
/// corrupt CRT updates from a bad prime that kept `t` terms.
fn match_image_to_key(img: &DenseImage<Fq>, slots: &HashMap<Fq, usize>) -> Option<Vec<u64>> {
    let t = slots.len();
    if img.sparsity() != t {
        return None;
    }
    let mut residues = vec![u64::MAX; t];
    for (j, c) in img.nonzero() {
        let &slot = slots.get(&c)?;
        if residues[slot] != u64::MAX {
            return None;
        }
        residues[slot] = j;
    }
    Some(residues)
}

/// Combine per-slot residues into exponents; the moduli must multiply past
/// `D` for the lift to be unique and every exponent must land in `[0, D)`.
fn combine_exponents(
    accepted: &[(u64, Vec<u64>)],
    t: usize,
    degree_bound: &BigUint,
) -> Result<Vec<BigUint>, InterpError> {
    let mut modulus = BigUint::one();
    for (p, _) in accepted {
        modulus *= *p;
    }
    if modulus < *degree_bound {
        return Err(InterpError::InsufficientGoodPrimes);
    }
    let mut exponents = Vec::with_capacity(t);
    for slot in 0..t {
        let residues: Vec<(u64, u64)> =
            accepted.iter().map(|(p, res)| (res[slot], *p)).collect();
        let (e, _) = crt_combine(&residues).expect("sampler never repeats a prime");
        if e >= *degree_bound {
            return Err(InterpError::ExponentOutOfRange);
        }
        exponents.push(e);
    }
    Ok(exponents)
}

/// `c_i <- c_i alpha^(-e_i)`: map the coefficients of `f(alpha x)` back to
/// the coefficients of `f`.
fn undiversify(key: &[Fq], exponents: Vec<BigUint>, alpha: Fq) -> SparsePoly<Fq> {
    let alpha_inv = alpha.inv();
    SparsePoly::new(
        key.iter()
            .zip(exponents)
            .map(|(&c, e)| (c * alpha_inv.pow_big(&e), e)),
    )
}

/// The exponent-recovery loop, standalone: probe
/// `ceil(2 ln(3/mu) + 4 ln D/ln lambda)` fresh primes through the already
/// diversified box, keep images matching the coefficient key, and CRT each
/// slot's residues into its exponent.
pub fn recover_exponents<B: RemainderBlackBox, R: Rng + ?Sized>(
    box_div: &B,
    coeff_key: &[Fq],
    cfg: &InterpConfig,
    rng: &mut R,
) -> Result<Vec<BigUint>, InterpError> {
    let lambda = cfg.lambda();
    let budget = main_loop_budget(cfg.failure_prob, &cfg.degree_bound, lambda);
    let mut sampler = PrimeSampler::with_capacity(lambda, budget);
    recover_exponents_inner(box_div, coeff_key, cfg, &mut sampler, rng)
}

fn recover_exponents_inner<B: RemainderBlackBox, R: Rng + ?Sized>(
    box_div: &B,
    coeff_key: &[Fq],
    cfg: &InterpConfig,
    sampler: &mut PrimeSampler,
    rng: &mut R,
) -> Result<Vec<BigUint>, InterpError> {
    let slots = key_slots(coeff_key);
    let one = box_div.field().one();
    let budget = main_loop_budget(cfg.failure_prob, &cfg.degree_bound, cfg.lambda());
    let mut accepted: Vec<(u64, Vec<u64>)> = Vec::new();
    for _ in 0..budget {
        let p = sampler.next(rng);
        let img = box_div.probe(p, one);
        if let Some(residues) = match_image_to_key(&img, &slots) {
            accepted.push((p, residues));
        }
    }
    combine_exponents(&accepted, coeff_key.len(), &cfg.degree_bound)
}

/// Monte Carlo sparse interpolation (the `alg1` driver): correct with probability
/// at least `1 - mu` whenever `q >= T(T-1)D + 1`.
///
/// Probe count is exactly `ceil(log2(3/mu)) + diversify_attempts +
/// ceil(2 ln(3/mu) + 4 ln D/ln lambda)` — the accepting diversification
/// probe doubles as the key image.
pub fn interpolate_mc<B: RemainderBlackBox, R: Rng + ?Sized>(
    box_: &B,
    cfg: &InterpConfig,
    rng: &mut R,
) -> Result<InterpResult, InterpError> {
    let lambda = cfg.lambda();
    let m = sparsity_probe_budget(cfg.failure_prob);
    let n = main_loop_budget(cfg.failure_prob, &cfg.degree_bound, lambda);
    let mut sampler = PrimeSampler::with_capacity(lambda, m + n);
    let (t, rho, _) = scan_sparsity(box_, m, &mut sampler, rng);
    if t == 0 {
        return Ok(zero_result(box_));
    }
    let (alpha, key_img, attempts) = diversify_ff(box_, t, rho, cfg.failure_prob, rng)?;
    let key: Vec<Fq> = key_img.nonzero().map(|(_, c)| c).collect();
    let div = diversified(box_, alpha);
    let exponents = recover_exponents_inner(&div, &key, cfg, &mut sampler, rng)?;
    Ok(InterpResult {
        poly: undiversify(&key, exponents, alpha),
        stats: box_.stats(),
        diversify_attempts: attempts,
        small_prime_max: None,
    })
}

/// Deterministic sparse zero test: probe `x^p - 1` at the least
/// `ceil((T-1) log2 D)` primes and report `NONZERO` at the first nonzero
/// image. Never wrong: some probed prime isolates a term of any nonzero
/// `T`-sparse polynomial of degree at most `D`.
pub fn verify_zero<B: RemainderBlackBox>(
    box_: &B,
    term_bound: u32,
    degree_bound: &BigUint,
) -> ZeroTest {
    let budget = verify_probe_budget(term_bound, degree_bound);
    let one = box_.field().one();
    for p in numt::primes_from(2).take(budget as usize) {
        if box_.probe(p, one).sparsity() > 0 {
            return ZeroTest::Nonzero;
        }
    }
    ZeroTest::Zero
}

/// Las Vegas interpolation: run [`interpolate_mc`] at `mu = 1/2` and accept
/// a candidate `g` only when the deterministic zero test certifies
/// `f - g = 0`. The output is always the hidden polynomial; only the probe
/// count is random (expected rounds at most 2). A failed round — including a
/// failed diversification — triggers a full restart.
pub fn interpolate_lv<B: RemainderBlackBox, R: Rng + ?Sized>(
    box_: &B,
    cfg: &InterpConfig,
    rng: &mut R,
) -> InterpResult {
    interpolate_lv_capped(box_, cfg, rng, u64::MAX).expect("uncapped Las Vegas loop")
}

/// [`interpolate_lv`] with a round cap, for harnesses that must terminate.
pub fn interpolate_lv_capped<B: RemainderBlackBox, R: Rng + ?Sized>(
    box_: &B,
    cfg: &InterpConfig,
    rng: &mut R,
    max_rounds: u64,
) -> Result<InterpResult, InterpError> {
    let mc_cfg = InterpConfig { failure_prob: 0.5, ..cfg.clone() };
    for _ in 0..max_rounds {
        let Ok(candidate) = interpolate_mc(box_, &mc_cfg, rng) else {
            continue;
        };
        let diff = difference(box_, candidate.poly.clone());
        if verify_zero(&diff, 2 * cfg.term_bound, &cfg.degree_bound) == ZeroTest::Zero {
            return Ok(InterpResult { stats: box_.stats(), ..candidate });
        }
    }
    Err(InterpError::RoundCapExceeded)
}

/// Adaptive interpolation (the `alg1pp` driver): one probe at a random prime in
/// `{lambda..2 lambda}` fixes `t`, the coefficient key, and `alpha`; the
/// exponent residues then come from consecutive primes starting near `t^2`
/// (the birthday-problem lower bound), taken until the product of good
/// moduli reaches `D`. Probe degrees in that phase are `O(t^2 + log D)`,
/// typically far below `lambda`.
pub fn interpolate_adaptive<B: RemainderBlackBox, R: Rng + ?Sized>(
    box_: &B,
    cfg: &InterpConfig,
    rng: &mut R,
) -> Result<InterpResult, InterpError> {
    let field = box_.field();
    let range = PrimeRange::from_lambda(cfg.lambda());
    let rho = random_prime(&range, rng);
    let t = box_.probe(rho, field.one()).sparsity();
    if t == 0 {
        return Ok(zero_result(box_));
    }
    let (alpha, key_img, attempts) = diversify_ff(box_, t, rho, cfg.failure_prob, rng)?;
    let key: Vec<Fq> = key_img.nonzero().map(|(_, c)| c).collect();
    let slots = key_slots(&key);
    let div = diversified(box_, alpha);

    let start = ((t as u64) * (t as u64)).max(2);
    let cap = (4.0 * ln_big(&cfg.degree_bound) / (t.max(2) as f64).ln()).ceil() as u64 + 64;
    let mut accepted: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut modulus = BigUint::one();
    let mut largest = 0u64;
    for (tried, p) in numt::primes_from(start).enumerate() {
        if modulus >= cfg.degree_bound {
            break;
        }
        if tried as u64 == cap {
            return Err(InterpError::InsufficientGoodPrimes);
        }
        largest = p;
        let img = div.probe(p, field.one());
        if let Some(residues) = match_image_to_key(&img, &slots) {
            accepted.push((p, residues));
            modulus *= p;
        }
    }
    let exponents = combine_exponents(&accepted, t, &cfg.degree_bound)?;
    Ok(InterpResult {
        poly: undiversify(&key, exponents, alpha),
        stats: box_.stats(),
        diversify_attempts: attempts,
        small_prime_max: Some(largest),
    })
}

/// Elementary symmetric functions `sigma_1..sigma_t` of the residues, mod p.
fn elementary_symmetric_mod(residues: &[u64], p: u64) -> Vec<u64> {
    let t = residues.len();
    let mut sig = vec![0u64; t + 1];
    sig[0] = 1;
    for (i, &r) in residues.iter().enumerate() {
        let r = r % p;
        for k in (1..=i + 1).rev() {
            sig[k] = (sig[k] + numt::mulmod(r, sig[k - 1], p)) % p;
        }
    }
    sig.remove(0);
    sig
}

/// Randomized Garg-Schost baseline: no diversification. Good-prime images
/// give the exponent multiset mod `p`; the integer symmetric polynomial
/// `prod (y - e_i)` is rebuilt coefficient-wise by CRT (its coefficients are
/// bounded by `(2D)^t`, hence the factor-`t` extra probes), its roots are
/// extracted by equal-degree splitting modulo a fresh prime `P > D`, and
/// each exponent is matched to its coefficient through any one good image.
pub fn gs_interpolate_mc<B: RemainderBlackBox, R: Rng + ?Sized>(
    box_: &B,
    cfg: &InterpConfig,
    rng: &mut R,
) -> Result<InterpResult, InterpError> {
    if cfg.degree_bound.bits() > 62 {
        return Err(InterpError::DegreeTooLargeForGs);
    }
    let lambda = cfg.lambda();
    let m = sparsity_probe_budget(cfg.failure_prob);
    // The term bound caps the eventual sparsity, so the symmetric-coefficient
    // budget can be sized (and the sampler capacity fixed) before probing.
    let worst_bound = (cfg.degree_bound.clone() << 1u32).pow(cfg.term_bound);
    let worst_needed = (ln_big(&worst_bound) / (lambda as f64).ln()).ceil() as u64;
    let worst_budget =
        (2.0 * (3.0 / cfg.failure_prob).ln() + 4.0 * worst_needed as f64).ceil() as u64;
    let mut sampler = PrimeSampler::with_capacity(lambda, m + worst_budget);
    let (t, rho, rho_img) = scan_sparsity(box_, m, &mut sampler, rng);
    if t == 0 {
        return Ok(zero_result(box_));
    }
    let mut key_multiset: Vec<Fq> = rho_img.nonzero().map(|(_, c)| c).collect();
    key_multiset.sort_unstable();

    // sigma_k <= binom(t,k) D^k, so (2D)^t dominates every coefficient.
    let coeff_bound = (cfg.degree_bound.clone() << 1u32).pow(t as u32);
    let needed = (ln_big(&coeff_bound) / (lambda as f64).ln()).ceil() as u64;
    let budget = (2.0 * (3.0 / cfg.failure_prob).ln() + 4.0 * needed as f64).ceil() as u64;

    let one = box_.field().one();
    let mut accepted: Vec<(u64, Vec<u64>)> = Vec::new(); // (p, sigma_1.. mod p)
    let mut modulus = BigUint::one();
    for _ in 0..budget {
        let p = sampler.next(rng);
        let img = box_.probe(p, one);
        if img.sparsity() != t {
            continue;
        }
        let mut vals: Vec<Fq> = img.nonzero().map(|(_, c)| c).collect();
        vals.sort_unstable();
        if vals != key_multiset {
            continue;
        }
        let residues: Vec<u64> = img.nonzero().map(|(j, _)| j).collect();
        accepted.push((p, elementary_symmetric_mod(&residues, p)));
        modulus *= p;
    }
    if modulus < coeff_bound {
        return Err(InterpError::InsufficientGoodPrimes);
    }

    let sigmas: Vec<BigUint> = (0..t)
        .map(|k| {
            let residues: Vec<(u64, u64)> =
                accepted.iter().map(|(p, sig)| (sig[k], *p)).collect();
            crt_combine(&residues).expect("sampler never repeats a prime").0
        })
        .collect();

    // chi(y) = y^t + sum (-1)^k sigma_k y^(t-k), root-found mod P > D so the
    // roots (distinct integers below D) read back exactly.
    let d_u64 = cfg.degree_bound.to_u64().expect("degree bound fits u64 after bits check");
    let big_p = numt::least_prime_geq(d_u64.saturating_add(1));
    let mut chi = vec![0u64; t + 1];
    chi[t] = 1;
    for k in 1..=t {
        let s = numt::big_mod_u64(&sigmas[k - 1], big_p);
        chi[t - k] = if k % 2 == 1 { (big_p - s) % big_p } else { s };
    }
    let mut roots =
        czroots::distinct_roots(&chi, big_p, rng).ok_or(InterpError::RootFindingFailed)?;
    roots.sort_unstable();
    if roots.len() != t || roots.iter().any(|&r| r >= d_u64) {
        return Err(InterpError::RootFindingFailed);
    }

    let coeffs = rho_img.coeffs();
    let mut terms = Vec::with_capacity(t);
    for e in roots {
        let c = coeffs[(e % rho) as usize];
        if c.is_zero() {
            return Err(InterpError::RootFindingFailed);
        }
        terms.push((c, BigUint::from(e)));
    }
    let poly = SparsePoly::new(terms);
    if poly.sparsity() != t {
        return Err(InterpError::RootFindingFailed);
    }
    Ok(InterpResult { poly, stats: box_.stats(), diversify_attempts: 0, small_prime_max: None })
}

/// Root extraction for a monic polynomial over `F_P` that is expected to be
/// a product of distinct linear factors (Cantor-Zassenhaus equal-degree
/// splitting at degree 1). Returns `None` when the expectation fails.
mod czroots {
    use rand::Rng;

    use crate::numt::{inv_mod, mulmod};

    /// Little-endian dense coefficients, no trailing zeros.
    type Poly = Vec<u64>;

    fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn deg(a: &Poly) -> usize {
        a.len().saturating_sub(1)
    }

    fn make_monic(a: Poly, p: u64) -> Poly {
        let Some(&lead) = a.last() else { return a };
        if lead == 1 {
            return a;
        }
        let inv = inv_mod(lead, p).expect("leading coefficient invertible mod prime");
        a.into_iter().map(|c| mulmod(c, inv, p)).collect()
    }

    /// Remainder of `a` by monic `m`.
    fn rem(mut a: Poly, m: &Poly, p: u64) -> Poly {
        debug_assert_eq!(*m.last().unwrap(), 1);
        while a.len() >= m.len() && !a.is_empty() {
            let lead = *a.last().unwrap();
            let shift = a.len() - m.len();
            if lead != 0 {
                for (i, &mc) in m.iter().enumerate() {
                    let sub = mulmod(lead, mc, p);
                    a[shift + i] = (a[shift + i] + p - sub) % p;
                }
            }
            a.pop();
        }
        trim(a)
    }

    fn mulrem(a: &Poly, b: &Poly, m: &Poly, p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
            }
        }
        rem(out, m, p)
    }

    fn powrem(base: &Poly, mut e: u64, m: &Poly, p: u64) -> Poly {
        let mut acc = vec![1u64];
        let mut base = rem(base.clone(), m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulrem(&acc, &base, m, p);
            }
            base = mulrem(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(mut a: Poly, mut b: Poly, p: u64) -> Poly {
        a = trim(a);
        b = trim(b);
        while !b.is_empty() {
            let monic_b = make_monic(b.clone(), p);
            let r = rem(a, &monic_b, p);
            a = monic_b;
            b = r;
        }
        make_monic(a, p)
    }

    fn sub_one(mut a: Poly, p: u64) -> Poly {
        if a.is_empty() {
            return vec![p - 1];
        }
        a[0] = (a[0] + p - 1) % p;
        trim(a)
    }

    /// Exact quotient of monic `g` by a monic divisor `d`.
    fn divide_exact(g: &Poly, d: &Poly, p: u64) -> Poly {
        let mut rest = g.clone();
        let mut quot = vec![0u64; g.len() - d.len() + 1];
        while rest.len() >= d.len() && !rest.is_empty() {
            let lead = *rest.last().unwrap();
            let shift = rest.len() - d.len();
            quot[shift] = lead;
            if lead != 0 {
                for (i, &dc) in d.iter().enumerate() {
                    let sub = mulmod(lead, dc, p);
                    rest[shift + i] = (rest[shift + i] + p - sub) % p;
                }
            }
            rest.pop();
        }
        quot
    }

    fn split<R: Rng + ?Sized>(g: Poly, p: u64, rng: &mut R, out: &mut Vec<u64>) -> bool {
        match deg(&g) {
            0 => true,
            1 => {
                // monic y + c has root -c
                out.push((p - g[0]) % p);
                true
            }
            _ => {
                for _ in 0..64 {
                    let a = rng.random_range(0..p);
                    // gcd((y+a)^((p-1)/2) - 1, g) separates the roots by the
                    // quadratic-residue character of root + a.
                    let h = sub_one(powrem(&vec![a, 1], (p - 1) / 2, &g, p), p);
                    let d = gcd(h, g.clone(), p);
                    if deg(&d) > 0 && deg(&d) < deg(&g) {
                        let quot = divide_exact(&g, &d, p);
                        return split(d, p, rng, out) && split(quot, p, rng, out);
                    }
                }
                false
            }
        }
    }

    /// All roots of `chi` (monic, little-endian) over `F_p`, provided `chi`
    /// is a product of `deg chi` distinct linear factors; `None` otherwise.
    pub(super) fn distinct_roots<R: Rng + ?Sized>(
        chi: &[u64],
        p: u64,
        rng: &mut R,
    ) -> Option<Vec<u64>> {
        let chi: Poly = make_monic(trim(chi.to_vec()), p);
        if chi.is_empty() {
            return None;
        }
        // The product of the distinct linear factors of chi is
        // gcd(chi, y^p - y); demanding full degree certifies the shape.
        let ypow = powrem(&vec![0, 1], p, &chi, p);
        let y_minus = {
            let mut v = ypow;
            if v.len() < 2 {
                v.resize(2, 0);
            }
            v[1] = (v[1] + p - 1) % p;
            trim(v)
        };
        let lin = gcd(y_minus, chi.clone(), p);
        if deg(&lin) != deg(&chi) {
            return None;
        }
        let mut out = Vec::with_capacity(deg(&chi));
        if split(chi, p, rng, &mut out) {
            Some(out)
        } else {
            None
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha12Rng;

        #[test]
        fn splits_products_of_linears() {
            let mut rng = ChaCha12Rng::seed_from_u64(5);
            let p = 1_000_003u64;
            // (y-1)(y-3) = y^2 - 4y + 3
            let chi = vec![3, p - 4, 1];
            let mut roots = distinct_roots(&chi, p, &mut rng).unwrap();
            roots.sort_unstable();
            assert_eq!(roots, [1, 3]);

            // Random root sets round-trip through expansion.
            for _ in 0..20 {
                let t = rng.random_range(1..=12usize);
                let mut roots: Vec<u64> = Vec::new();
                while roots.len() < t {
                    let r = rng.random_range(0..1000u64);
                    if !roots.contains(&r) {
                        roots.push(r);
                    }
                }
                let mut chi = vec![1u64];
                for &r in &roots {
                    // multiply by (y - r)
                    let mut next = vec![0u64; chi.len() + 1];
                    for (i, &c) in chi.iter().enumerate() {
                        next[i + 1] = (next[i + 1] + c) % p;
                        next[i] = (next[i] + p - mulmod(r, c, p)) % p;
                    }
                    chi = next;
                }
                let mut found = distinct_roots(&chi, p, &mut rng).unwrap();
                found.sort_unstable();
                roots.sort_unstable();
                assert_eq!(found, roots);
            }
        }

        #[test]
        fn rejects_repeated_and_irreducible() {
            let mut rng = ChaCha12Rng::seed_from_u64(6);
            let p = 10_007u64;
            // (y-2)^2 has a repeated root.
            let sq = vec![4, p - 4, 1];
            assert_eq!(distinct_roots(&sq, p, &mut rng), None);
            // y^2 + 1 is irreducible mod 10007 (10007 = 3 mod 4).
            let irr = vec![1, 0, 1];
            assert_eq!(distinct_roots(&irr, p, &mut rng), None);
        }
    }
}
