//! The remainder-black-box contract and its concrete backends.
//!
//! A remainder black box is the only access any interpolation algorithm has
//! to the unknown polynomial: a probe at `(p, alpha)` returns the dense image
//! `f(alpha x) rem (x^p - 1)`. Every probe bumps a shared counter and records
//! the largest modulus seen, so probe accounting needs no bookkeeping inside
//! the algorithms themselves.
//!
//! Backends:
//! * [`SparseBackend`] wraps an explicit sparse polynomial (the test oracle).
//! * [`ExprBackend`] evaluates a straight-line program in the quotient ring
//!   `F_q[x]/(x^p - 1)`, for demos where no term list exists.
//! * [`Diversified`] shifts any box from `f(x)` to `f(alpha x)`.
//! * [`Difference`] turns a box for `f` plus an explicit `g` into a box for
//!   `f - g`, the input to verification.
//! * [`EpsApproxBox`] is the complex-coefficient oracle with a hard relative
//!   error bound on every point evaluation.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigUint;
use num_complex::Complex64;

use crate::fft;
use crate::numt::{Fq, PrimeField};
use crate::poly::{eval_mod_cyclic, eval_mod_cyclic_unit, DenseImage, RootOfUnity, SparsePoly};

/// Snapshot of a box's probe accounting: probe calls, largest probe modulus,
/// and (complex case) point evaluations. Monotone over a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProbeStats {
    pub probes: u64,
    pub max_p: u64,
    pub evals: u64,
}

#[derive(Debug, Default)]
pub(crate) struct ProbeCounter {
    probes: AtomicU64,
    max_p: AtomicU64,
    evals: AtomicU64,
}

impl ProbeCounter {
    pub(crate) fn record_probe(&self, p: u64) {
        self.probes.fetch_add(1, Ordering::Relaxed);
        self.max_p.fetch_max(p, Ordering::Relaxed);
    }

    pub(crate) fn add_evals(&self, n: u64) {
        self.evals.fetch_add(n, Ordering::Relaxed);
    }

    pub(crate) fn snapshot(&self) -> ProbeStats {
        ProbeStats {
            probes: self.probes.load(Ordering::Relaxed),
            max_p: self.max_p.load(Ordering::Relaxed),
            evals: self.evals.load(Ordering::Relaxed),
        }
    }
}

/// Oracle access to an unknown `T`-sparse polynomial over `F_q` of degree
/// below `D`, restricted to cyclic moduli `g = x^p - 1`.
pub trait RemainderBlackBox {
    /// `f(alpha x) rem (x^p - 1)`, counted against the shared probe counter.
    fn probe(&self, p: u64, alpha: Fq) -> DenseImage<Fq>;

    /// The promised sparsity bound `T`.
    fn term_bound(&self) -> u32;

    /// The promised degree bound `D` (exclusive).
    fn degree_bound(&self) -> &BigUint;

    fn field(&self) -> PrimeField;

    fn stats(&self) -> ProbeStats;
}

impl<B: RemainderBlackBox + ?Sized> RemainderBlackBox for &B {
    fn probe(&self, p: u64, alpha: Fq) -> DenseImage<Fq> {
        (**self).probe(p, alpha)
    }
    fn term_bound(&self) -> u32 {
        (**self).term_bound()
    }
    fn degree_bound(&self) -> &BigUint {
        (**self).degree_bound()
    }
    fn field(&self) -> PrimeField {
        (**self).field()
    }
    fn stats(&self) -> ProbeStats {
        (**self).stats()
    }
}

/// Black box backed by an explicit sparse polynomial; probes are exact
/// cyclic reductions. Probe cost corresponds to black-box size 1.
#[derive(Debug, Clone)]
pub struct SparseBackend {
    f: SparsePoly<Fq>,
    field: PrimeField,
    term_bound: u32,
    degree_bound: BigUint,
    counter: Arc<ProbeCounter>,
}

/// Wrap an explicit polynomial as a remainder black box with the stated
/// bounds. The bounds must actually hold for `f`.
pub fn sparse_backend(
    f: SparsePoly<Fq>,
    field: PrimeField,
    term_bound: u32,
    degree_bound: BigUint,
) -> SparseBackend {
    assert!(f.sparsity() <= term_bound as usize, "backend polynomial exceeds term bound");
    if let Some(d) = f.degree() {
        assert!(*d < degree_bound, "backend polynomial exceeds degree bound");
    }
    for t in f.terms() {
        assert_eq!(t.coeff.modulus(), field.modulus(), "coefficient outside the stated field");
    }
    SparseBackend { f, field, term_bound, degree_bound, counter: Arc::default() }
}

impl SparseBackend {
    /// The hidden polynomial, for harness-side comparison only.
    pub fn hidden(&self) -> &SparsePoly<Fq> {
        &self.f
    }
}

impl RemainderBlackBox for SparseBackend {
    fn probe(&self, p: u64, alpha: Fq) -> DenseImage<Fq> {
        self.counter.record_probe(p);
        eval_mod_cyclic(&self.f, p, alpha)
    }
    fn term_bound(&self) -> u32 {
        self.term_bound
    }
    fn degree_bound(&self) -> &BigUint {
        &self.degree_bound
    }
    fn field(&self) -> PrimeField {
        self.field
    }
    fn stats(&self) -> ProbeStats {
        self.counter.snapshot()
    }
}

/// The box for `f(alpha x)` given a box for `f`: probing the wrapper at
/// `(p, beta)` probes the inner box at `(p, alpha * beta)`.
#[derive(Debug, Clone)]
pub struct Diversified<B> {
    inner: B,
    alpha: Fq,
}

/// Shift a black box from `f(x)` to `f(alpha x)`, `alpha` nonzero.
pub fn diversified<B: RemainderBlackBox>(inner: B, alpha: Fq) -> Diversified<B> {
    assert!(!alpha.is_zero(), "diversifier must be nonzero");
    Diversified { inner, alpha }
}

impl<B: RemainderBlackBox> RemainderBlackBox for Diversified<B> {
    fn probe(&self, p: u64, beta: Fq) -> DenseImage<Fq> {
        self.inner.probe(p, self.alpha * beta)
    }
    fn term_bound(&self) -> u32 {
        self.inner.term_bound()
    }
    fn degree_bound(&self) -> &BigUint {
        self.inner.degree_bound()
    }
    fn field(&self) -> PrimeField {
        self.inner.field()
    }
    fn stats(&self) -> ProbeStats {
        self.inner.stats()
    }
}

/// The box for `f - g` given a box for `f` and an explicit `g`; at most
/// `2T`-sparse. Probes count once, against the inner box's counter.
#[derive(Debug, Clone)]
pub struct Difference<B> {
    inner: B,
    explicit: SparsePoly<Fq>,
    term_bound: u32,
}

pub fn difference<B: RemainderBlackBox>(inner: B, explicit: SparsePoly<Fq>) -> Difference<B> {
    let term_bound = inner.term_bound() + explicit.sparsity() as u32;
    Difference { inner, explicit, term_bound }
}

impl<B: RemainderBlackBox> RemainderBlackBox for Difference<B> {
    fn probe(&self, p: u64, alpha: Fq) -> DenseImage<Fq> {
        let lhs = self.inner.probe(p, alpha);
        lhs.sub(&eval_mod_cyclic(&self.explicit, p, alpha))
    }
    fn term_bound(&self) -> u32 {
        self.term_bound
    }
    fn degree_bound(&self) -> &BigUint {
        self.inner.degree_bound()
    }
    fn field(&self) -> PrimeField {
        self.inner.field()
    }
    fn stats(&self) -> ProbeStats {
        self.inner.stats()
    }
}

/// One step of a division-free straight-line program. Operands index earlier
/// steps' results.
#[derive(Debug, Clone, Copy)]
pub enum Instr {
    Const(u64),
    /// The indeterminate `x`.
    Var,
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
}

/// Black box evaluating a straight-line program in `F_q[x]/(x^p - 1)` by
/// dense arithmetic; the program's value is its last step. Probe cost
/// corresponds to black-box size `len(program)`.
#[derive(Debug, Clone)]
pub struct ExprBackend {
    program: Vec<Instr>,
    field: PrimeField,
    term_bound: u32,
    degree_bound: BigUint,
    counter: Arc<ProbeCounter>,
}

pub fn expr_backend(
    program: Vec<Instr>,
    field: PrimeField,
    term_bound: u32,
    degree_bound: BigUint,
) -> ExprBackend {
    assert!(!program.is_empty(), "empty program");
    for (i, instr) in program.iter().enumerate() {
        if let Instr::Add(a, b) | Instr::Sub(a, b) | Instr::Mul(a, b) = instr {
            assert!(*a < i && *b < i, "instruction {i} references a later step");
        }
    }
    ExprBackend { program, field, term_bound, degree_bound, counter: Arc::default() }
}

impl RemainderBlackBox for ExprBackend {
    fn probe(&self, p: u64, alpha: Fq) -> DenseImage<Fq> {
        self.counter.record_probe(p);
        let n = p as usize;
        let zero = vec![self.field.zero(); n];
        let mut regs: Vec<Vec<Fq>> = Vec::with_capacity(self.program.len());
        for instr in &self.program {
            let value = match *instr {
                Instr::Const(c) => {
                    let mut v = zero.clone();
                    v[0] = self.field.elem(c);
                    v
                }
                Instr::Var => {
                    // x evaluated at alpha*x, reduced mod x^p - 1.
                    let mut v = zero.clone();
                    v[1 % n] = alpha;
                    v
                }
                Instr::Add(a, b) => {
                    regs[a].iter().zip(&regs[b]).map(|(&x, &y)| x + y).collect()
                }
                Instr::Sub(a, b) => {
                    regs[a].iter().zip(&regs[b]).map(|(&x, &y)| x - y).collect()
                }
                Instr::Mul(a, b) => {
                    // Cyclic convolution; p stays small so quadratic is fine.
                    let mut v = zero.clone();
                    for (i, &x) in regs[a].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (j, &y) in regs[b].iter().enumerate() {
                            let k = (i + j) % n;
                            v[k] = v[k] + x * y;
                        }
                    }
                    v
                }
            };
            regs.push(value);
        }
        DenseImage::from_coeffs(regs.pop().expect("nonempty program"))
    }
    fn term_bound(&self) -> u32 {
        self.term_bound
    }
    fn degree_bound(&self) -> &BigUint {
        &self.degree_bound
    }
    fn field(&self) -> PrimeField {
        self.field
    }
    fn stats(&self) -> ProbeStats {
        self.counter.snapshot()
    }
}

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(SPLITMIX_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// An eps-approximate black box for a complex sparse polynomial: every point
/// evaluation `gamma` satisfies `|gamma - f(xi)| <= eps |f(xi)|`, a hard
/// bound, with the perturbation uniform in that disk.
///
/// Evaluation points are unit-circle angles given exactly as turn fractions;
/// the noise for a point is a pure function of `(seed, point)`, so repeated
/// or reordered evaluations reproduce bit-identical values.
#[derive(Debug, Clone)]
pub struct EpsApproxBox {
    f: SparsePoly<Complex64>,
    eps: f64,
    seed: u64,
    term_bound: u32,
    degree_bound: BigUint,
    counter: Arc<ProbeCounter>,
}

/// Wrap an explicit complex polynomial as an eps-approximate box.
pub fn noisy_complex_backend(
    f: SparsePoly<Complex64>,
    term_bound: u32,
    degree_bound: BigUint,
    eps: f64,
    seed: u64,
) -> EpsApproxBox {
    assert!((0.0..0.5).contains(&eps), "relative evaluation error must be in [0, 1/2)");
    assert!(f.sparsity() <= term_bound as usize, "backend polynomial exceeds term bound");
    if let Some(d) = f.degree() {
        assert!(*d < degree_bound, "backend polynomial exceeds degree bound");
    }
    EpsApproxBox { f, eps, seed, term_bound, degree_bound, counter: Arc::default() }
}

impl EpsApproxBox {
    pub fn term_bound(&self) -> u32 {
        self.term_bound
    }

    pub fn degree_bound(&self) -> &BigUint {
        &self.degree_bound
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn stats(&self) -> ProbeStats {
        self.counter.snapshot()
    }

    /// The hidden polynomial, for harness-side comparison only.
    pub fn hidden(&self) -> &SparsePoly<Complex64> {
        &self.f
    }

    fn perturb(&self, point: RootOfUnity, value: Complex64) -> Complex64 {
        if self.eps == 0.0 {
            return value;
        }
        let h = splitmix64(self.seed ^ splitmix64(point.index() ^ splitmix64(point.order())));
        let h2 = splitmix64(h);
        let angle = std::f64::consts::TAU * unit_f64(h);
        // sqrt for a uniform draw from the disk of radius eps|value|.
        let radius = self.eps * value.norm() * unit_f64(h2).sqrt();
        value + Complex64::from_polar(radius, angle)
    }

    /// One noisy evaluation `f(xi)` at an exactly specified unit-circle point.
    pub fn eval_point(&self, xi: RootOfUnity) -> Complex64 {
        self.counter.add_evals(1);
        let exact: Complex64 = self
            .f
            .terms()
            .iter()
            .map(|t| t.coeff * xi.pow_big(&t.exp).value())
            .sum();
        self.perturb(xi, exact)
    }

    /// The full evaluation row `[f(alpha omega^j)]` for `omega = e^(2 pi i/p)`,
    /// `j = 0..p`, with per-point noise. Counted as one probe of degree `p`
    /// and `p` point evaluations.
    ///
    /// The row is produced as the exact cyclic image of `f(alpha x)` followed
    /// by a length-`p` transform, which equals the pointwise sum to machine
    /// precision at `O(t + p log p)` cost instead of `O(t p)`.
    pub fn eval_row(&self, p: u64, alpha: RootOfUnity) -> Vec<Complex64> {
        self.counter.record_probe(p);
        self.counter.add_evals(p);
        let image = eval_mod_cyclic_unit(&self.f, p, alpha);
        let mut row = fft::values_at_unit_roots(image.into_coeffs());
        if self.eps > 0.0 {
            for (j, w) in row.iter_mut().enumerate() {
                let point = alpha.mul(&RootOfUnity::new(j as u64, p));
                *w = self.perturb(point, *w);
            }
        }
        row
    }
}
