//! Las Vegas interpolation over a large prime field: hide a random sparse
//! polynomial behind a remainder black box and recover it exactly.
//!
//! Usage: cargo run --release --example ff_las_vegas

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use diverse_interp::ffinterp::{interpolate_lv, InterpConfig};
use diverse_interp::{sparse_backend, PrimeField, SparsePoly};

fn main() {
    let q = (1u64 << 61) - 1;
    let field = PrimeField::new(q);
    let mut rng = ChaCha12Rng::seed_from_u64(2024);

    // A hidden 12-term polynomial of degree below 2^30.
    let degree_bound = BigUint::from(1u64 << 30);
    let mut exponents = std::collections::BTreeSet::new();
    while exponents.len() < 12 {
        exponents.insert(rng.random_range(0..1u64 << 30));
    }
    let hidden = SparsePoly::new(
        exponents
            .into_iter()
            .map(|e| (field.random_nonzero(&mut rng), BigUint::from(e))),
    );
    println!("hidden: {}-sparse, degree {}", hidden.sparsity(), hidden.degree().unwrap());

    // The algorithm sees only the black box.
    let oracle = sparse_backend(hidden.clone(), field, 12, degree_bound.clone());
    let cfg = InterpConfig::new(12, degree_bound, 0.5);
    let result = interpolate_lv(&oracle, &cfg, &mut rng);

    assert_eq!(result.poly, hidden, "Las Vegas output is always exact");
    println!(
        "recovered exactly with {} probes (largest modulus {})",
        result.stats.probes, result.stats.max_p
    );
    for term in result.poly.terms().iter().take(4) {
        println!("  {} x^{}", term.coeff, term.exp);
    }
    println!("  ...");
}
