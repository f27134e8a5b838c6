//! The randomized Garg-Schost baseline reconstructs the integer symmetric
//! polynomial of the exponents and factors it, paying roughly a factor t
//! more probes than diversification-based interpolation.
//!
//! Usage: cargo run --release --example garg_schost

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use diverse_interp::ffinterp::{gs_interpolate_mc, interpolate_mc, InterpConfig};
use diverse_interp::{sparse_backend, PrimeField, SparsePoly};

fn main() {
    let field = PrimeField::new((1u64 << 61) - 1);
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    let degree_bound = BigUint::from(1u64 << 16);
    let t = 10u32;

    let mut exponents = std::collections::BTreeSet::new();
    while exponents.len() < t as usize {
        exponents.insert(rng.random_range(0..1u64 << 16));
    }
    let hidden = SparsePoly::new(
        exponents
            .into_iter()
            .map(|e| (field.random_nonzero(&mut rng), BigUint::from(e))),
    );
    let cfg = InterpConfig::new(t, degree_bound.clone(), 0.05);

    let oracle = sparse_backend(hidden.clone(), field, t, degree_bound.clone());
    let ours = interpolate_mc(&oracle, &cfg, &mut rng).expect("diversified run");

    let oracle = sparse_backend(hidden.clone(), field, t, degree_bound);
    let baseline = gs_interpolate_mc(&oracle, &cfg, &mut rng).expect("baseline run");

    assert_eq!(ours.poly, hidden);
    assert_eq!(baseline.poly, hidden);
    println!("diversified interpolation: {:>4} probes", ours.stats.probes);
    println!("Garg-Schost baseline:      {:>4} probes", baseline.stats.probes);
    println!(
        "probe ratio {:.1} (the symmetric polynomial's coefficients are t times longer\nthan the exponents, so the baseline needs about t times more good primes)",
        baseline.stats.probes as f64 / ours.stats.probes as f64
    );
}
