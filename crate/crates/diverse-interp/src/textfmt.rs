//! The polynomial text format used by the command-line tools.
//!
//! Header line `field q <q>` (prime field) or `field c` (complex), followed
//! by one term per line: `<coeff> <exp>` over `F_q`, `<re> <im> <exp>` over
//! the complexes. Exponents are decimal and may be arbitrarily large.
//! Multivariate polynomials add a second header `vars <n> <d>` and replace
//! the exponent column with `n` space-separated entries.
//!
//! ```text
//! field q 65521
//! 3 7
//! 2 1
//! ```

use std::io::{BufRead, Write};

use num_bigint::BigUint;
use num_complex::Complex64;
use thiserror::Error;

use crate::numt::{is_prime_u64, Fq, PrimeField};
use crate::poly::{MultiSparsePoly, SparsePoly};

/// Any polynomial the text format can carry.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyFile {
    Fq { q: u64, poly: SparsePoly<Fq> },
    Complex { poly: SparsePoly<Complex64> },
    MultiFq { q: u64, per_var_bound: BigUint, poly: MultiSparsePoly<Fq> },
    MultiComplex { per_var_bound: BigUint, poly: MultiSparsePoly<Complex64> },
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

pub fn write_poly(out: &mut impl Write, file: &PolyFile) -> std::io::Result<()> {
    match file {
        PolyFile::Fq { q, poly } => {
            writeln!(out, "field q {q}")?;
            for t in poly.terms() {
                writeln!(out, "{} {}", t.coeff.value(), t.exp)?;
            }
        }
        PolyFile::Complex { poly } => {
            writeln!(out, "field c")?;
            for t in poly.terms() {
                writeln!(out, "{} {} {}", t.coeff.re, t.coeff.im, t.exp)?;
            }
        }
        PolyFile::MultiFq { q, per_var_bound, poly } => {
            writeln!(out, "field q {q}")?;
            writeln!(out, "vars {} {}", poly.vars(), per_var_bound)?;
            for (c, exps) in poly.terms() {
                write!(out, "{}", c.value())?;
                for e in exps {
                    write!(out, " {e}")?;
                }
                writeln!(out)?;
            }
        }
        PolyFile::MultiComplex { per_var_bound, poly } => {
            writeln!(out, "field c")?;
            writeln!(out, "vars {} {}", poly.vars(), per_var_bound)?;
            for (c, exps) in poly.terms() {
                write!(out, "{} {}", c.re, c.im)?;
                for e in exps {
                    write!(out, " {e}")?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

pub fn read_poly(input: impl BufRead) -> Result<PolyFile, FormatError> {
    let mut lines = Vec::new();
    for (i, l) in input.lines().enumerate() {
        let l = l?;
        let trimmed = l.trim().to_string();
        if !trimmed.is_empty() {
            lines.push((i + 1, trimmed));
        }
    }
    let Some((first_no, header)) = lines.first() else {
        return Err(parse_err(1, "empty file: missing `field` header"));
    };
    let head: Vec<&str> = header.split_whitespace().collect();
    let complex = match head.as_slice() {
        ["field", "q", _] => false,
        ["field", "c"] => true,
        _ => return Err(parse_err(*first_no, "expected `field q <q>` or `field c`")),
    };
    let field = if complex {
        None
    } else {
        let q: u64 = head[2]
            .parse()
            .map_err(|e| parse_err(*first_no, format!("bad modulus: {e}")))?;
        if q >= (1 << 63) || !is_prime_u64(q) {
            return Err(parse_err(*first_no, format!("modulus {q} is not a prime below 2^63")));
        }
        Some(PrimeField::new(q))
    };

    // Optional multivariate header.
    let mut body_start = 1;
    let mut vars: Option<(usize, BigUint)> = None;
    if let Some((no, l)) = lines.get(1) {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.first() == Some(&"vars") {
            if parts.len() != 3 {
                return Err(parse_err(*no, "expected `vars <n> <d>`"));
            }
            let n: usize =
                parts[1].parse().map_err(|e| parse_err(*no, format!("bad var count: {e}")))?;
            let d: BigUint = parts[2]
                .parse()
                .map_err(|e| parse_err(*no, format!("bad per-variable bound: {e}")))?;
            if n == 0 {
                return Err(parse_err(*no, "variable count must be positive"));
            }
            vars = Some((n, d));
            body_start = 2;
        }
    }

    let coeff_cols = if complex { 2 } else { 1 };
    let exp_cols = vars.as_ref().map_or(1, |(n, _)| *n);
    let mut fq_terms: Vec<(Fq, Vec<BigUint>)> = Vec::new();
    let mut c_terms: Vec<(Complex64, Vec<BigUint>)> = Vec::new();
    for (no, l) in &lines[body_start..] {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != coeff_cols + exp_cols {
            return Err(parse_err(
                *no,
                format!("expected {} fields, found {}", coeff_cols + exp_cols, parts.len()),
            ));
        }
        let exps: Vec<BigUint> = parts[coeff_cols..]
            .iter()
            .map(|s| s.parse().map_err(|e| parse_err(*no, format!("bad exponent: {e}"))))
            .collect::<Result<_, _>>()?;
        if complex {
            let re: f64 =
                parts[0].parse().map_err(|e| parse_err(*no, format!("bad real part: {e}")))?;
            let im: f64 =
                parts[1].parse().map_err(|e| parse_err(*no, format!("bad imag part: {e}")))?;
            c_terms.push((Complex64::new(re, im), exps));
        } else {
            let c: u64 =
                parts[0].parse().map_err(|e| parse_err(*no, format!("bad coefficient: {e}")))?;
            fq_terms.push((field.expect("prime field header").elem(c), exps));
        }
    }

    Ok(match (complex, vars) {
        (false, None) => PolyFile::Fq {
            q: field.unwrap().modulus(),
            poly: SparsePoly::new(fq_terms.into_iter().map(|(c, mut e)| (c, e.pop().unwrap()))),
        },
        (true, None) => PolyFile::Complex {
            poly: SparsePoly::new(c_terms.into_iter().map(|(c, mut e)| (c, e.pop().unwrap()))),
        },
        (false, Some((n, d))) => PolyFile::MultiFq {
            q: field.unwrap().modulus(),
            per_var_bound: d,
            poly: MultiSparsePoly::new(n, fq_terms),
        },
        (true, Some((n, d))) => {
            PolyFile::MultiComplex { per_var_bound: d, poly: MultiSparsePoly::new(n, c_terms) }
        }
    })
}

pub fn write_poly_to_string(file: &PolyFile) -> String {
    let mut buf = Vec::new();
    write_poly(&mut buf, file).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("format output is ASCII")
}

pub fn read_poly_from_str(s: &str) -> Result<PolyFile, FormatError> {
    read_poly(s.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn fq_roundtrip_and_layout() {
        let field = PrimeField::new(65521);
        let poly = SparsePoly::new(vec![
            (field.elem(3), BigUint::from(7u32)),
            (field.elem(2), BigUint::one()),
        ]);
        let file = PolyFile::Fq { q: 65521, poly };
        let text = write_poly_to_string(&file);
        assert_eq!(text, "field q 65521\n2 1\n3 7\n");
        assert_eq!(read_poly_from_str(&text).unwrap(), file);
    }

    #[test]
    fn complex_roundtrip_with_huge_exponent() {
        let poly = SparsePoly::new(vec![
            (
                Complex64::new(1.5, -0.25),
                BigUint::parse_bytes(b"123456789012345678901234567890", 10).unwrap(),
            ),
            (Complex64::new(-0.125, 0.0), BigUint::one()),
        ]);
        let file = PolyFile::Complex { poly };
        let text = write_poly_to_string(&file);
        assert_eq!(read_poly_from_str(&text).unwrap(), file);
    }

    #[test]
    fn multivariate_roundtrip() {
        let field = PrimeField::new(101);
        let poly = MultiSparsePoly::new(
            3,
            vec![
                (field.elem(7), vec![BigUint::one(), BigUint::from(2u32), BigUint::from(3u32)]),
                (field.elem(9), vec![BigUint::from(0u32), BigUint::from(0u32), BigUint::one()]),
            ],
        );
        let file = PolyFile::MultiFq { q: 101, per_var_bound: BigUint::from(32u32), poly };
        let text = write_poly_to_string(&file);
        assert!(text.starts_with("field q 101\nvars 3 32\n"));
        assert_eq!(read_poly_from_str(&text).unwrap(), file);
    }

    #[test]
    fn complex_coefficients_roundtrip_losslessly() {
        // Shortest-roundtrip float printing preserves every bit pattern.
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let poly = SparsePoly::new((0..50).map(|e| {
            (
                Complex64::new(rng.random::<f64>() * 2e3 - 1e3, rng.random::<f64>() * 2e-7),
                BigUint::from(e as u32),
            )
        }));
        let file = PolyFile::Complex { poly };
        let twice =
            write_poly_to_string(&read_poly_from_str(&write_poly_to_string(&file)).unwrap());
        assert_eq!(twice, write_poly_to_string(&file));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        for bad in [
            "",
            "field z 5\n",
            "field q 6\n",      // composite modulus
            "field q 7\n3\n",   // missing exponent
            "field c\n1.0 2\n", // missing imaginary part
            "field q 7\nvars 2 4\n1 0\n", // wrong tuple arity
            "field q 7\nvars 0 4\n",
        ] {
            assert!(read_poly_from_str(bad).is_err(), "accepted {bad:?}");
        }
    }
}
