//! Sparse polynomial values: exact and approximate term lists, dense cyclic
//! images (the unit of every probe), unit-circle points with exactly
//! specified angles, norms, and the Kronecker substitution.
//!
//! Exponents are arbitrary-precision throughout: a sparse polynomial may have
//! a handful of terms and a degree near `2^128`. Dense images stay small by
//! design (their length is a probe prime, at most twice the lambda bound).

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::numt::{self, Fq};

/// Coefficient behavior shared by the exact and approximate domains.
///
/// Zero detection is exact in both: a complex coefficient is "zero" only when
/// both parts are literally `0.0` (thresholded counting on images takes an
/// explicit tolerance instead).
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

impl Coeff for Fq {
    fn is_zero(&self) -> bool {
        Fq::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn neg(&self) -> Self {
        -*self
    }
}

impl Coeff for Complex64 {
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// One nonzero term `coeff * x^exp`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<C> {
    pub coeff: C,
    pub exp: BigUint,
}

/// A sparse polynomial: nonzero terms with strictly increasing exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly<C> {
    terms: Vec<Term<C>>,
}

impl<C: Coeff> SparsePoly<C> {
    /// Normalizing constructor: sorts by exponent, merges duplicates, and
    /// drops terms whose coefficient cancels to zero.
    pub fn new(terms: impl IntoIterator<Item = (C, BigUint)>) -> Self {
        let mut terms: Vec<Term<C>> =
            terms.into_iter().map(|(coeff, exp)| Term { coeff, exp }).collect();
        terms.sort_by(|a, b| a.exp.cmp(&b.exp));
        let mut merged: Vec<Term<C>> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exp == t.exp => last.coeff = last.coeff.add(&t.coeff),
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        SparsePoly { terms: merged }
    }

    pub fn zero() -> Self {
        SparsePoly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    /// Number of nonzero terms (the sparsity `t`).
    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    /// Largest exponent, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<&BigUint> {
        self.terms.last().map(|t| &t.exp)
    }

    /// Termwise difference `self - rhs`, cancellation removed.
    pub fn sub(&self, rhs: &Self) -> Self {
        let lhs = self.terms.iter().map(|t| (t.coeff.clone(), t.exp.clone()));
        let neg = rhs.terms.iter().map(|t| (t.coeff.neg(), t.exp.clone()));
        SparsePoly::new(lhs.chain(neg))
    }
}

impl SparsePoly<Complex64> {
    /// Coefficient 2-norm `sqrt(sum |c_i|^2)`.
    pub fn norm2(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// A polynomial residue modulo `x^p - 1`: a dense length-`p` coefficient
/// vector, the value returned by every probe.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseImage<C> {
    coeffs: Vec<C>,
}

impl<C> DenseImage<C> {
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "image modulus degree must be positive");
        DenseImage { coeffs }
    }

    /// The modulus degree `p` (always the vector length).
    pub fn p(&self) -> u64 {
        self.coeffs.len() as u64
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }
}

impl<C: Coeff> DenseImage<C> {
    /// Termwise difference of two images with the same modulus degree.
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.p(), rhs.p(), "mismatched image lengths");
        DenseImage {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }
}

impl DenseImage<Fq> {
    /// Exact nonzero count.
    pub fn sparsity(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Nonzero residues in increasing residue order.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, Fq)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u64, *c))
    }

    /// True iff all nonzero coefficients are pairwise distinct, so they can
    /// serve as term identifiers across modular images.
    pub fn is_diverse(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.nonzero().all(|(_, c)| seen.insert(c))
    }
}

impl DenseImage<Complex64> {
    /// Count of coefficients with magnitude above `tau`.
    pub fn sparsity(&self, tau: f64) -> usize {
        self.coeffs.iter().filter(|c| c.norm() > tau).count()
    }

    /// Residues whose coefficient magnitude exceeds `tau`.
    pub fn above(&self, tau: f64) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.norm() > tau)
            .map(|(j, c)| (j as u64, *c))
    }

    /// True iff every pair of coefficients above `tau` is at least `min_gap`
    /// apart, the approximate analogue of [`DenseImage::is_diverse`].
    pub fn is_eps_diverse(&self, tau: f64, min_gap: f64) -> bool {
        let big: Vec<Complex64> = self.above(tau).map(|(_, c)| c).collect();
        for i in 0..big.len() {
            for j in i + 1..big.len() {
                if (big[i] - big[j]).norm() < min_gap {
                    return false;
                }
            }
        }
        true
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `f(alpha x) rem (x^p - 1)` over `F_q`, computed exactly from the term list.
///
/// Coefficient `j` of the image is the sum of `c_i * alpha^{e_i}` over all
/// terms with `e_i = j (mod p)`.
pub fn eval_mod_cyclic(f: &SparsePoly<Fq>, p: u64, alpha: Fq) -> DenseImage<Fq> {
    assert!(p >= 1, "modulus degree must be positive");
    assert!(!alpha.is_zero(), "diversifier must be nonzero");
    let field = alpha.field();
    let mut coeffs = vec![field.zero(); p as usize];
    for t in f.terms() {
        let j = numt::big_mod_u64(&t.exp, p) as usize;
        coeffs[j] = coeffs[j] + t.coeff * alpha.pow_big(&t.exp);
    }
    DenseImage { coeffs }
}

/// `f(alpha x) rem (x^p - 1)` over the complexes with `alpha` on the unit
/// circle.
///
/// The angle of `alpha^{e}` is found by reducing `e * index mod order` in
/// integer arithmetic before any trig call; a floating-point angle would have
/// its error magnified exponentially by the degree.
pub fn eval_mod_cyclic_unit(
    f: &SparsePoly<Complex64>,
    p: u64,
    alpha: RootOfUnity,
) -> DenseImage<Complex64> {
    assert!(p >= 1, "modulus degree must be positive");
    let mut coeffs = vec![Complex64::ZERO; p as usize];
    for t in f.terms() {
        let j = numt::big_mod_u64(&t.exp, p) as usize;
        coeffs[j] += t.coeff * alpha.pow_big(&t.exp).value();
    }
    DenseImage { coeffs }
}

/// A point `e^(2 pi i k/s)` on the unit circle, held as the exact fraction
/// `k/s` of a full turn and kept in lowest terms.
///
/// Powers reduce the exponent times `k` modulo `s` in integer arithmetic, so
/// the computed angle is exact even for exponents near `2^64` and beyond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    index: u64,
    order: u64,
}

impl RootOfUnity {
    pub fn new(index: u64, order: u64) -> Self {
        assert!(order >= 1, "root of unity needs positive order");
        let index = index % order;
        if index == 0 {
            return RootOfUnity { index: 0, order: 1 };
        }
        let g = numt::gcd_u64(index, order);
        RootOfUnity { index: index / g, order: order / g }
    }

    /// The point 1 (zero angle).
    pub fn one() -> Self {
        RootOfUnity { index: 0, order: 1 }
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_one(&self) -> bool {
        self.index == 0
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(
            1.0,
            std::f64::consts::TAU * self.index as f64 / self.order as f64,
        )
    }

    pub fn pow(&self, e: u64) -> Self {
        RootOfUnity::new(numt::mulmod(self.index, e % self.order, self.order), self.order)
    }

    /// `self^e` with the index product reduced modulo the order first.
    pub fn pow_big(&self, e: &BigUint) -> Self {
        self.pow(numt::big_mod_u64(e, self.order))
    }

    pub fn inv(&self) -> Self {
        if self.index == 0 {
            *self
        } else {
            RootOfUnity { index: self.order - self.index, order: self.order }
        }
    }

    /// Product of two unit-circle points: exact addition of turn fractions.
    /// The combined denominator must fit in a `u64` (probe-scale products do).
    pub fn mul(&self, rhs: &RootOfUnity) -> Self {
        let den = self
            .order
            .checked_mul(rhs.order)
            .expect("combined root-of-unity order overflowed u64");
        let num = (self.index as u128 * rhs.order as u128
            + rhs.index as u128 * self.order as u128)
            % den as u128;
        RootOfUnity::new(num as u64, den)
    }
}

/// A multivariate sparse polynomial: distinct exponent tuples, one per term.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSparsePoly<C> {
    vars: usize,
    terms: Vec<(C, Vec<BigUint>)>,
}

impl<C: Coeff> MultiSparsePoly<C> {
    /// Normalizing constructor; panics if a tuple has the wrong arity.
    pub fn new(vars: usize, terms: impl IntoIterator<Item = (C, Vec<BigUint>)>) -> Self {
        let mut terms: Vec<(C, Vec<BigUint>)> = terms.into_iter().collect();
        for (_, exps) in &terms {
            assert_eq!(exps.len(), vars, "exponent tuple arity mismatch");
        }
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut merged: Vec<(C, Vec<BigUint>)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            match merged.last_mut() {
                Some((lc, le)) if *le == e => *lc = lc.add(&c),
                _ => merged.push((c, e)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        MultiSparsePoly { vars, terms: merged }
    }

    pub fn zero(vars: usize) -> Self {
        MultiSparsePoly { vars, terms: Vec::new() }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &[(C, Vec<BigUint>)] {
        &self.terms
    }

    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KroneckerError {
    #[error("partial degree {found} is not below the bound {bound}")]
    PartialDegreeTooLarge { found: BigUint, bound: BigUint },
    #[error("exponent {found} is not below d^n = {bound}")]
    ExponentOutOfRange { found: BigUint, bound: BigUint },
}

/// Kronecker substitution `x_j -> x^(d^(j-1))`: packs an `n`-variate
/// polynomial with partial degrees `< d` into a univariate one of degree
/// `< d^n`, term for term.
pub fn kronecker_pack<C: Coeff>(
    f: &MultiSparsePoly<C>,
    d: &BigUint,
) -> Result<SparsePoly<C>, KroneckerError> {
    let mut packed = Vec::with_capacity(f.sparsity());
    for (c, exps) in f.terms() {
        let mut e = BigUint::zero();
        let mut weight = BigUint::from(1u32);
        for ej in exps {
            if ej >= d {
                return Err(KroneckerError::PartialDegreeTooLarge {
                    found: ej.clone(),
                    bound: d.clone(),
                });
            }
            e += ej * &weight;
            weight *= d;
        }
        packed.push((c.clone(), e));
    }
    Ok(SparsePoly::new(packed))
}

/// Inverse of [`kronecker_pack`]: base-`d` digits of each exponent become the
/// exponent tuple. Every exponent of `g` must be below `d^n`.
pub fn kronecker_unpack<C: Coeff>(
    g: &SparsePoly<C>,
    d: &BigUint,
    vars: usize,
) -> Result<MultiSparsePoly<C>, KroneckerError> {
    let bound = d.pow(vars as u32);
    let mut terms = Vec::with_capacity(g.sparsity());
    for t in g.terms() {
        if t.exp >= bound {
            return Err(KroneckerError::ExponentOutOfRange {
                found: t.exp.clone(),
                bound: bound.clone(),
            });
        }
        let mut rest = t.exp.clone();
        let mut exps = Vec::with_capacity(vars);
        for _ in 0..vars {
            exps.push(&rest % d);
            rest /= d;
        }
        terms.push((t.coeff.clone(), exps));
    }
    Ok(MultiSparsePoly::new(vars, terms))
}
