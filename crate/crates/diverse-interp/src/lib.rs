//! Sparse interpolation of black-box polynomials by diversification.
//!
//! An unknown polynomial is reachable only through a *remainder black box*:
//! a probe at `(p, alpha)` returns the dense image `f(alpha x) rem (x^p - 1)`
//! for a small prime `p`. Replacing `f(x)` by `f(alpha x)` for a random
//! `alpha` makes all coefficients pairwise distinct with good probability
//! (a *diverse* polynomial), after which the coefficients themselves identify
//! terms across modular images and each exponent is rebuilt by Chinese
//! remaindering from `O(log d)` probes. No root finding is involved.
//!
//! Two coefficient domains are supported:
//! * large word-sized prime fields `F_q` — Monte Carlo interpolation, a
//!   deterministic zero-test verifier, and a Las Vegas wrapper whose output
//!   is always exact ([`ffinterp`]);
//! * complex coefficients known only through evaluations with bounded
//!   relative error — a provably stable recovery built on unitary transforms
//!   at prime lengths ([`apinterp`]).
//!
//! The `examples/` directory has one runnable program per capability; the
//! `diverse-interp` binary exposes instance generation, interpolation,
//! verification, benchmarking, and report aggregation for scripted use.

pub mod apinterp;
pub mod bench;
pub mod blackbox;
pub mod ffinterp;
pub mod numt;
pub mod poly;
pub mod textfmt;

mod fft;

pub use blackbox::{
    diversified, difference, expr_backend, noisy_complex_backend, sparse_backend, EpsApproxBox,
    ProbeStats, RemainderBlackBox,
};
pub use numt::{Fq, PrimeField};
pub use poly::{DenseImage, MultiSparsePoly, RootOfUnity, SparsePoly};
