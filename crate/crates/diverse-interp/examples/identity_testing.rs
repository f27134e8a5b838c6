//! Deterministic polynomial identity testing through the expression
//! backend: an arithmetic circuit is probed modulo x^p - 1 at consecutive
//! small primes, and ZERO is certified without expanding anything.
//!
//! Usage: cargo run --release --example identity_testing

use num_bigint::BigUint;

use diverse_interp::blackbox::Instr;
use diverse_interp::expr_backend;
use diverse_interp::ffinterp::{verify_zero, ZeroTest};
use diverse_interp::{PrimeField, RemainderBlackBox};

fn main() {
    let field = PrimeField::new(65521);
    let degree_bound = BigUint::from(1u64 << 10);

    // (x + 1)(x - 1) - (x*x - 1), written as a straight-line program.
    let identity = vec![
        Instr::Var,       // 0: x
        Instr::Const(1),  // 1: 1
        Instr::Add(0, 1), // 2: x + 1
        Instr::Sub(0, 1), // 3: x - 1
        Instr::Mul(2, 3), // 4: (x+1)(x-1)
        Instr::Mul(0, 0), // 5: x^2
        Instr::Sub(5, 1), // 6: x^2 - 1
        Instr::Sub(4, 6), // 7: the difference
    ];
    // The difference is at most 4-sparse before cancellation.
    let oracle = expr_backend(identity, field, 4, degree_bound.clone());
    let verdict = verify_zero(&oracle, 4, &degree_bound);
    println!("(x+1)(x-1) - (x^2 - 1): {:?} after {} probes", verdict, oracle.stats().probes);
    assert_eq!(verdict, ZeroTest::Zero);

    // Perturb one constant and the first probe already catches it.
    let off_by_one = vec![
        Instr::Var,
        Instr::Const(2),
        Instr::Add(0, 1),
        Instr::Sub(0, 1),
        Instr::Mul(2, 3),
        Instr::Mul(0, 0),
        Instr::Sub(5, 1),
        Instr::Sub(4, 6),
    ];
    let oracle = expr_backend(off_by_one, field, 4, degree_bound.clone());
    let verdict = verify_zero(&oracle, 4, &degree_bound);
    println!("(x+2)(x-2) - (x^2 - 2): {:?} after {} probes", verdict, oracle.stats().probes);
    assert_eq!(verdict, ZeroTest::Nonzero);
}
