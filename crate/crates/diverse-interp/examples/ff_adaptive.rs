//! The adaptive variant searches for good primes starting near t^2 instead
//! of drawing everything from {lambda..2 lambda}, trading a worse formal
//! bound for much smaller probe degrees in practice.
//!
//! Usage: cargo run --release --example ff_adaptive

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use diverse_interp::ffinterp::{interpolate_adaptive, interpolate_mc, InterpConfig};
use diverse_interp::{sparse_backend, PrimeField, SparsePoly};

fn main() {
    let field = PrimeField::new((1u64 << 61) - 1);
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let degree_bound = BigUint::from(1u64 << 24);

    let mut exponents = std::collections::BTreeSet::new();
    while exponents.len() < 20 {
        exponents.insert(rng.random_range(0..1u64 << 24));
    }
    let hidden = SparsePoly::new(
        exponents
            .into_iter()
            .map(|e| (field.random_nonzero(&mut rng), BigUint::from(e))),
    );
    let cfg = InterpConfig::new(20, degree_bound.clone(), 0.1);

    let oracle = sparse_backend(hidden.clone(), field, 20, degree_bound.clone());
    let classic = interpolate_mc(&oracle, &cfg, &mut rng).expect("Monte Carlo run");
    println!(
        "alg1   (one-shot): {:>4} probes, largest modulus {:>6}",
        classic.stats.probes, classic.stats.max_p
    );

    let oracle = sparse_backend(hidden.clone(), field, 20, degree_bound);
    let adaptive = interpolate_adaptive(&oracle, &cfg, &mut rng).expect("adaptive run");
    println!(
        "alg1pp (adaptive): {:>4} probes, largest modulus {:>6}, largest search prime {}",
        adaptive.stats.probes,
        adaptive.stats.max_p,
        adaptive.small_prime_max.unwrap()
    );

    assert_eq!(classic.poly, hidden);
    assert_eq!(adaptive.poly, hidden);
    println!("both recovered the hidden polynomial exactly");
}
