//! Approximate recovery: a 50-term complex polynomial of degree up to 2^20
//! is interpolated from unit-circle evaluations carrying relative error,
//! at several noise levels. The recovered coefficients are typically more
//! accurate than the evaluations themselves.
//!
//! Usage: cargo run --release --example approx_recover

use num_bigint::BigUint;
use num_traits::One;

use diverse_interp::apinterp::{approx_interpolate, ApproxConfig};
use diverse_interp::bench::gen_approx_instance;
use diverse_interp::noisy_complex_backend;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn main() {
    let degree_bound = BigUint::one() << 20;
    let hidden = gen_approx_instance(50, &degree_bound, 0.1, 99).expect("valid instance");
    let floor = hidden
        .terms()
        .iter()
        .map(|t| t.coeff.norm())
        .fold(f64::INFINITY, f64::min);
    println!("hidden: 50 terms, unit norm, smallest coefficient {floor:.4}");
    println!("{:>10}  {:>12}  {:>12}  {:>7}", "noise", "norm error", "max coeff", "probes");

    for eps in [0.0, 1e-12, 1e-9, 1e-6] {
        let oracle =
            noisy_complex_backend(hidden.clone(), 50, degree_bound.clone(), eps, 1234);
        let cfg = ApproxConfig::new(50, degree_bound.clone(), eps, 0.99 * floor, 1e-3);
        let mut rng = ChaCha12Rng::seed_from_u64(5 + (eps * 1e15) as u64);
        let got = approx_interpolate(&oracle, &cfg, &mut rng).expect("recovery");

        let norm_err = got.poly.sub(&hidden).norm2();
        let max_coeff_err = hidden
            .terms()
            .iter()
            .map(|t| {
                got.poly
                    .terms()
                    .iter()
                    .find(|r| r.exp == t.exp)
                    .map_or(1.0, |r| (r.coeff - t.coeff).norm())
            })
            .fold(0.0, f64::max);
        println!(
            "{eps:>10.0e}  {norm_err:>12.3e}  {max_coeff_err:>12.3e}  {:>7}",
            got.stats.probes
        );
        assert!(norm_err <= 2.0 * eps.max(1e-11), "within the 2 eps ||f|| contract");
    }
}
