//! Multivariate interpolation by Kronecker substitution: pack the variables
//! into one, interpolate the univariate image (Las Vegas, so exactly), and
//! unpack the exponent tuples back out.
//!
//! Usage: cargo run --release --example kronecker_multivariate

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use diverse_interp::ffinterp::{interpolate_lv, InterpConfig};
use diverse_interp::poly::{kronecker_pack, kronecker_unpack};
use diverse_interp::{sparse_backend, MultiSparsePoly, PrimeField};

fn main() {
    let field = PrimeField::new((1u64 << 61) - 1);
    let mut rng = ChaCha12Rng::seed_from_u64(31);

    // 8 terms in 3 variables, partial degrees below 32.
    let vars = 3;
    let d = BigUint::from(32u32);
    let hidden = MultiSparsePoly::new(
        vars,
        (0..8).map(|_| {
            (
                field.random_nonzero(&mut rng),
                (0..vars).map(|_| BigUint::from(rng.random_range(0..32u64))).collect(),
            )
        }),
    );
    println!("hidden: {} terms in {} variables", hidden.sparsity(), vars);

    // x_j -> x^(32^(j-1)) turns it into a univariate of degree < 32^3.
    let packed = kronecker_pack(&hidden, &d).expect("partial degrees in bounds");
    let degree_bound = d.pow(vars as u32);
    println!("packed degree bound: {degree_bound}");

    let oracle = sparse_backend(
        packed,
        field,
        hidden.sparsity() as u32,
        degree_bound.clone(),
    );
    let cfg = InterpConfig::new(hidden.sparsity() as u32, degree_bound, 0.5);
    let recovered = interpolate_lv(&oracle, &cfg, &mut rng);

    let unpacked = kronecker_unpack(&recovered.poly, &d, vars).expect("exponents in bounds");
    assert_eq!(unpacked, hidden);
    println!(
        "recovered exactly through the substitution with {} probes",
        recovered.stats.probes
    );
    for (c, exps) in unpacked.terms().iter().take(3) {
        let monomial: Vec<String> =
            exps.iter().enumerate().map(|(i, e)| format!("x{}^{}", i + 1, e)).collect();
        println!("  {} {}", c, monomial.join(" "));
    }
    println!("  ...");
}
