//! Number-theoretic primitives: word-sized prime fields, prime generation and
//! sampling, the probe-degree bound, and Chinese remaindering over
//! arbitrary-precision integers.
//!
//! Probe moduli never exceed twice the bound returned by [`lambda_bound`], so
//! they always fit comfortably in a `u64` and primality of every candidate is
//! decided by a deterministic Miller-Rabin witness set that is exact for all
//! 64-bit integers. Exponents and CRT products, by contrast, can be
//! astronomically large (Kronecker substitution inflates a degree bound `d`
//! to `d^n`), so those live in [`BigUint`].

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// Multiply two residues modulo `m` without overflow. Requires `m < 2^64`.
#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by binary exponentiation.
pub(crate) fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm, if it exists.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Reduce an arbitrary-precision value modulo a word-sized modulus.
pub(crate) fn big_mod_u64(x: &BigUint, m: u64) -> u64 {
    (x % m).to_u64().expect("residue below a u64 modulus")
}

/// Deterministic primality test, exact for all `u64` inputs.
///
/// Uses the Miller-Rabin witness set {2,3,...,37}, which is known to be
/// deterministic below 3.3 * 10^24 (Sorenson & Webster), far beyond 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The least prime `>= n`. Panics if none fits in a `u64` (never at probe scale).
pub fn least_prime_geq(n: u64) -> u64 {
    let mut c = n.max(2);
    loop {
        if is_prime_u64(c) {
            return c;
        }
        c = c.checked_add(1).expect("prime search overflowed u64");
    }
}

/// Iterator over consecutive primes `>= start`, none skipped.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    assert!(start >= 2, "primes_from requires start >= 2");
    let mut next = start;
    std::iter::from_fn(move || {
        let p = least_prime_geq(next);
        next = p + 1;
        Some(p)
    })
}

/// Natural log of an arbitrary-precision integer, accurate to a few ulps.
///
/// Large inputs are split as `ln(top 53 bits) + (shift)·ln 2` so values far
/// beyond `f64` range (Kronecker-packed degree bounds) still work.
pub(crate) fn ln_big(d: &BigUint) -> f64 {
    assert!(!d.is_zero(), "ln of zero");
    let bits = d.bits();
    if bits <= 53 {
        d.to_f64().expect("small BigUint fits f64").ln()
    } else {
        let top = (d >> (bits - 53)).to_f64().expect("53-bit mantissa fits f64");
        top.ln() + (bits - 53) as f64 * std::f64::consts::LN_2
    }
}

/// Base-2 log of an arbitrary-precision integer, exact on powers of two.
pub(crate) fn log2_big(d: &BigUint) -> f64 {
    if d.count_ones() == 1 {
        (d.bits() - 1) as f64
    } else {
        ln_big(d) / std::f64::consts::LN_2
    }
}

/// Ceiling with a 1-ulp guard so the result is never under the exact value.
pub(crate) fn ceil_guarded(x: f64) -> u64 {
    (x * (1.0 + 4.0 * f64::EPSILON)).ceil() as u64
}

/// The probe-degree bound `lambda = max(21, ceil((5/3)·T·(T-1)·ln D))`.
///
/// A random prime in `{lambda, ..., 2·lambda}` is good for any `T`-sparse
/// polynomial of degree `< D` with probability at least 1/2. The log is
/// computed in double precision with a 1-ulp guard before the ceiling; an
/// overestimate only enlarges the prime range and preserves every bound.
pub fn lambda_bound(term_bound: u32, degree_bound: &BigUint) -> u64 {
    assert!(term_bound >= 1, "term bound must be at least 1");
    assert!(*degree_bound >= BigUint::from(2u32), "degree bound must be at least 2");
    let pairs = term_bound as f64 * (term_bound - 1) as f64;
    let x = (5.0 / 3.0) * pairs * ln_big(degree_bound);
    ceil_guarded(x).max(21)
}

/// The interval `{lo, ..., 2·lo}` from which probe primes are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRange {
    lo: u64,
    hi: u64,
}

impl PrimeRange {
    /// The range `{lambda, ..., 2·lambda}`. Requires `lambda >= 21` so the
    /// interval is guaranteed to contain primes with room to spare.
    pub fn from_lambda(lambda: u64) -> Self {
        assert!(lambda >= 21, "prime range lower bound must be at least 21");
        PrimeRange { lo: lambda, hi: 2 * lambda }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn contains(&self, p: u64) -> bool {
        self.lo <= p && p <= self.hi
    }
}

/// A prime drawn uniformly from the range, by rejection sampling of odd
/// integers. Bertrand's postulate guarantees the range contains a prime.
pub fn random_prime<R: Rng + ?Sized>(range: &PrimeRange, rng: &mut R) -> u64 {
    let first_odd = range.lo | 1;
    let odds = (range.hi - first_odd) / 2 + 1;
    // Expected tries ~ ln(hi)/2; the cap exists only to surface an impossible
    // state as a panic instead of a hang.
    for _ in 0..100_000 {
        let c = first_odd + 2 * rng.random_range(0..odds);
        if is_prime_u64(c) {
            return c;
        }
    }
    unreachable!("no prime found in {{{}, ..., {}}}", range.lo, range.hi);
}

/// Draws distinct primes uniformly from a [`PrimeRange`]; reusing a modulus
/// would waste a probe and break CRT coprimality.
///
/// The range starts at `{lambda..2 lambda}` and doubles `lambda` while the
/// pool provably cannot supply `capacity` distinct primes. That only fires
/// in degenerate small-`T` cases (e.g. `T = 1` pins `lambda = 21`, whose
/// five primes can neither fill a typical budget nor multiply past a large
/// `D`); a larger `lambda` keeps every good-prime bound valid.
pub(crate) struct PrimeSampler {
    mode: SamplerMode,
}

enum SamplerMode {
    Rejection { range: PrimeRange, seen: std::collections::HashSet<u64> },
    Pool { remaining: Vec<u64> },
}

/// Primes in `{lambda..2 lambda}` number at least `3 lambda/(5 ln lambda)`
/// for `lambda >= 21` (Rosser-Schoenfeld).
fn pool_lower_bound(lambda: u64) -> u64 {
    (3.0 * lambda as f64 / (5.0 * (lambda as f64).ln())) as u64
}

impl PrimeSampler {
    pub(crate) fn with_capacity(lambda: u64, capacity: u64) -> Self {
        let mut lambda = lambda;
        loop {
            if pool_lower_bound(lambda) >= capacity {
                return PrimeSampler {
                    mode: SamplerMode::Rejection {
                        range: PrimeRange::from_lambda(lambda),
                        seen: std::collections::HashSet::new(),
                    },
                };
            }
            let pool: Vec<u64> = primes_from(lambda).take_while(|&p| p <= 2 * lambda).collect();
            if pool.len() as u64 >= capacity {
                return PrimeSampler { mode: SamplerMode::Pool { remaining: pool } };
            }
            lambda = lambda.checked_mul(2).expect("prime range overflowed u64");
        }
    }

    /// A fresh prime, uniform over those not yet drawn. Must not be called
    /// more than `capacity` times.
    pub(crate) fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> u64 {
        match &mut self.mode {
            SamplerMode::Rejection { range, seen } => loop {
                let p = random_prime(range, rng);
                if seen.insert(p) {
                    return p;
                }
            },
            SamplerMode::Pool { remaining } => {
                assert!(!remaining.is_empty(), "prime pool exhausted beyond capacity");
                let i = rng.random_range(0..remaining.len());
                remaining.swap_remove(i)
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrtError {
    /// Two moduli share a factor; with prime probe moduli this signals that
    /// the same prime was fed in twice, which is a harness bug.
    #[error("modulus {modulus} is not coprime to the accumulated product")]
    NotCoprime { modulus: u64 },
}

/// Combine residues `(r_i, p_i)` with pairwise-coprime moduli into the unique
/// `x` with `0 <= x < M = prod p_i` and `x = r_i (mod p_i)`. Returns `(x, M)`.
pub fn crt_combine(residues: &[(u64, u64)]) -> Result<(BigUint, BigUint), CrtError> {
    let mut x = BigUint::zero();
    let mut m = BigUint::one();
    for &(r, p) in residues {
        assert!(p > 0 && r < p, "residue {r} out of range for modulus {p}");
        let m_mod_p = big_mod_u64(&m, p);
        let inv = inv_mod(m_mod_p, p).ok_or(CrtError::NotCoprime { modulus: p })?;
        let x_mod_p = big_mod_u64(&x, p);
        // x += M * ((r - x) * M^{-1} mod p) lands on the unique lift mod M*p.
        let delta = (r + p - x_mod_p) % p;
        let step = mulmod(delta, inv, p);
        x += &m * step;
        m *= p;
    }
    Ok((x, m))
}

/// An element of the prime field `F_q`, `q < 2^63`.
///
/// Elements carry their modulus so that images and polynomials are
/// self-contained values; all arithmetic panics on mismatched moduli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    value: u64,
    q: u64,
}

impl Fq {
    /// Construct `value mod q`, checking that `q` is prime and below `2^63`.
    pub fn new(value: u64, q: u64) -> Self {
        PrimeField::new(q).elem(value)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { q: self.q }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn checked_inv(&self) -> Option<Fq> {
        if self.value == 0 {
            None
        } else {
            // q is prime, so Fermat gives the inverse.
            Some(self.pow(self.q - 2))
        }
    }

    /// Multiplicative inverse. Panics on zero; use [`Fq::checked_inv`] to test.
    pub fn inv(&self) -> Fq {
        self.checked_inv().expect("inverse of zero in F_q")
    }

    pub fn pow(&self, e: u64) -> Fq {
        Fq { value: powmod(self.value, e, self.q), q: self.q }
    }

    /// `self^e` for an arbitrary-precision exponent, reducing `e mod (q-1)`
    /// before binary exponentiation (zero stays zero).
    pub fn pow_big(&self, e: &BigUint) -> Fq {
        if self.value == 0 {
            return if e.is_zero() { Fq { value: 1, q: self.q } } else { *self };
        }
        self.pow(big_mod_u64(e, self.q - 1))
    }
}

impl std::ops::Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        assert_eq!(self.q, rhs.q, "mixed moduli");
        let mut v = self.value + rhs.value; // q < 2^63 keeps the sum in range
        if v >= self.q {
            v -= self.q;
        }
        Fq { value: v, q: self.q }
    }
}

impl std::ops::Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        assert_eq!(self.q, rhs.q, "mixed moduli");
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.q - rhs.value
        };
        Fq { value: v, q: self.q }
    }
}

impl std::ops::Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        assert_eq!(self.q, rhs.q, "mixed moduli");
        Fq { value: mulmod(self.value, rhs.value, self.q), q: self.q }
    }
}

impl std::ops::Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        Fq { value: if self.value == 0 { 0 } else { self.q - self.value }, q: self.q }
    }
}

impl std::fmt::Display for Fq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A handle on `F_q` that validates `q` once and mints elements cheaply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Self {
        assert!(q < (1 << 63), "field modulus must be below 2^63");
        assert!(is_prime_u64(q), "field modulus {q} is not prime");
        PrimeField { q }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn elem(&self, value: u64) -> Fq {
        Fq { value: value % self.q, q: self.q }
    }

    pub fn zero(&self) -> Fq {
        Fq { value: 0, q: self.q }
    }

    pub fn one(&self) -> Fq {
        Fq { value: 1 % self.q, q: self.q }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        Fq { value: rng.random_range(0..self.q), q: self.q }
    }

    /// Uniform over `F_q^*`.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fq {
        Fq { value: rng.random_range(1..self.q), q: self.q }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn primality_small_and_carmichael() {
        let primes = [2u64, 3, 5, 7, 11, 13, 65521, 1_000_003, (1 << 61) - 1];
        for p in primes {
            assert!(is_prime_u64(p), "{p} should be prime");
        }
        // Carmichael numbers and other classic pseudoprime traps.
        for n in [1u64, 561, 1105, 1729, 25326001, 3215031751, 3825123056546413051] {
            assert!(!is_prime_u64(n), "{n} should be composite");
        }
    }

    #[test]
    fn consecutive_primes() {
        let first: Vec<u64> = primes_from(2).take(5).collect();
        assert_eq!(first, [2, 3, 5, 7, 11]);
        let from_90: Vec<u64> = primes_from(90).take(3).collect();
        assert_eq!(from_90, [97, 101, 103]);
        assert_eq!(primes_from(1_000_000).next(), Some(1_000_003));
    }

    #[test]
    fn lambda_bound_examples() {
        assert_eq!(lambda_bound(1, &BigUint::from(1_000_000u64)), 21);
        assert_eq!(lambda_bound(10, &BigUint::from(4096u64)), 1248);
        assert_eq!(lambda_bound(5, &BigUint::from(1000u64)), 231);
    }

    #[test]
    fn lambda_bound_monotone() {
        let mut prev = 0;
        for t in 1..40 {
            let l = lambda_bound(t, &BigUint::from(1u64 << 20));
            assert!(l >= prev, "not monotone in T at {t}");
            prev = l;
        }
        let mut prev = 0;
        for bits in [2u64, 8, 12, 16, 20, 32, 64, 128] {
            let l = lambda_bound(10, &(BigUint::one() << bits));
            assert!(l >= prev, "not monotone in D at 2^{bits}");
            prev = l;
        }
    }

    #[test]
    fn lambda_bound_huge_degree() {
        // Kronecker-packed degree far beyond f64 range still works.
        let d = BigUint::one() << 4096;
        let l = lambda_bound(10, &d);
        // (5/3)*90*4096*ln2 = 425984*ln2... check against the closed form.
        let expect = ((5.0 / 3.0) * 90.0 * 4096.0 * std::f64::consts::LN_2).ceil() as u64;
        assert!(l == expect || l == expect + 1);
    }

    #[test]
    fn random_prime_hits_only_range_primes() {
        let range = PrimeRange::from_lambda(21);
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_prime(&range, &mut rng);
            assert!([23, 29, 31, 37, 41].contains(&p), "unexpected prime {p}");
        }
        let big = PrimeRange::from_lambda(1248);
        for _ in 0..50 {
            let p = random_prime(&big, &mut rng);
            assert!(big.contains(p));
            assert!(is_prime_u64(p));
        }
    }

    #[test]
    fn random_prime_deterministic_per_seed() {
        let range = PrimeRange::from_lambda(1248);
        let a = random_prime(&range, &mut ChaCha12Rng::seed_from_u64(1));
        let b = random_prime(&range, &mut ChaCha12Rng::seed_from_u64(1));
        let c = random_prime(&range, &mut ChaCha12Rng::seed_from_u64(2));
        assert_eq!(a, b);
        // Different seeds *can* collide; these particular ones should not.
        assert_ne!(a, c);
    }

    #[test]
    fn random_prime_roughly_uniform() {
        let range = PrimeRange::from_lambda(21);
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let mut counts = std::collections::HashMap::new();
        let draws = 10_000;
        for _ in 0..draws {
            *counts.entry(random_prime(&range, &mut rng)).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 5);
        for (&p, &c) in &counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 0.2).abs() < 0.05, "prime {p} frequency {freq}");
        }
    }

    #[test]
    fn crt_examples() {
        let (x, m) = crt_combine(&[(1, 2), (2, 3)]).unwrap();
        assert_eq!((x, m), (BigUint::from(5u32), BigUint::from(6u32)));

        let (x, m) = crt_combine(&[(3, 5), (4, 7), (2, 11)]).unwrap();
        assert_eq!((x, m), (BigUint::from(123u32), BigUint::from(385u32)));

        let (x, m) = crt_combine(&[(0, 97)]).unwrap();
        assert_eq!((x, m), (BigUint::zero(), BigUint::from(97u32)));

        assert_eq!(
            crt_combine(&[(1, 6), (2, 9)]),
            Err(CrtError::NotCoprime { modulus: 9 })
        );
    }

    #[test]
    fn crt_brute_force_cross_check() {
        // Exhaustive comparison against a scan of 0..M for small moduli sets.
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..50 {
            let moduli = [2u64, 3, 5, 7, 11, 13, 17, 19, 23];
            let take = rng.random_range(1..=4usize);
            let mut choice: Vec<u64> = Vec::new();
            while choice.len() < take {
                let m = moduli[rng.random_range(0..moduli.len())];
                if !choice.contains(&m) {
                    choice.push(m);
                }
            }
            let residues: Vec<(u64, u64)> =
                choice.iter().map(|&m| (rng.random_range(0..m), m)).collect();
            let (x, m) = crt_combine(&residues).unwrap();
            let m_u64 = m.to_u64().unwrap();
            let x_u64 = x.to_u64().unwrap();
            assert!(x_u64 < m_u64);
            let brute = (0..m_u64)
                .find(|&c| residues.iter().all(|&(r, p)| c % p == r))
                .unwrap();
            assert_eq!(x_u64, brute);
        }
    }

    #[test]
    fn fq_ops() {
        assert_eq!(Fq::new(3, 7).pow(6).value(), 1); // Fermat
        assert_eq!(Fq::new(5, 13).inv().value(), 8); // 5*8 = 40 = 1 mod 13

        // pow reduces the exponent mod q-1 before exponentiation.
        let e = BigUint::from(1_000_000_006u64);
        let reduced = Fq::new(3, 7).pow(1_000_000_006 % 6);
        assert_eq!(Fq::new(3, 7).pow_big(&e), reduced);

        let a = Fq::new(5, 7);
        let b = Fq::new(4, 7);
        assert_eq!((a + b).value(), 2);
        assert_eq!((a - b).value(), 1);
        assert_eq!((a * b).value(), 6);
        assert_eq!((-a).value(), 2);
        assert_eq!(Fq::new(0, 7).checked_inv(), None);
    }

    #[test]
    fn fq_inverse_roundtrip_random() {
        for q in [(1u64 << 61) - 1, 65521, 101] {
            let field = PrimeField::new(q);
            let mut rng = ChaCha12Rng::seed_from_u64(q);
            for _ in 0..1000 {
                let a = field.random_nonzero(&mut rng);
                assert_eq!((a * a.inv()).value(), 1);
            }
        }
    }

    #[test]
    fn fq_zero_pow_big() {
        let z = Fq::new(0, 13);
        assert_eq!(z.pow_big(&BigUint::zero()).value(), 1);
        assert_eq!(z.pow_big(&BigUint::from(5u32)).value(), 0);
    }
}
