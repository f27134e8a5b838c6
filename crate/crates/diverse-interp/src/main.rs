//! Command-line front end: instance generation, interpolation drivers,
//! identity testing, benchmark suites, and report aggregation. All real
//! work lives in the library; this binary parses arguments and moves bytes.

use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use diverse_interp::bench::{
    all_passed, gen_approx_instance, gen_ff_instance, render_table, run_bench, summarize,
    Algorithm, BenchCell, BenchOptions, BenchRecord, DEFAULT_Q,
};
use diverse_interp::ffinterp::{
    gs_interpolate_mc, interpolate_adaptive, interpolate_lv_capped, interpolate_mc, verify_zero,
    InterpConfig, InterpResult, ZeroTest,
};
use diverse_interp::poly::{kronecker_pack, kronecker_unpack};
use diverse_interp::textfmt::{read_poly, write_poly, PolyFile};
use diverse_interp::{
    apinterp::{approx_interpolate, ApproxConfig},
    difference, noisy_complex_backend, sparse_backend, PrimeField, RemainderBlackBox,
};

#[derive(Parser)]
#[command(
    name = "diverse-interp",
    version,
    about = "Sparse interpolation of black-box polynomials by diversification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance and write it in the polynomial text format.
    Gen {
        /// Instance kind: `ff` (prime field) or `approx` (complex).
        #[arg(long, default_value = "ff")]
        kind: String,
        #[arg(long, default_value_t = 10)]
        terms: u32,
        /// Degree bound D = 2^degbits.
        #[arg(long, default_value_t = 16)]
        degbits: u32,
        /// Field modulus for `ff` instances.
        #[arg(long, default_value_t = DEFAULT_Q)]
        q: u64,
        /// Pre-normalization coefficient magnitude floor for `approx`.
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Allow q below the T(T-1)D + 1 diversification threshold.
        #[arg(long)]
        unsafe_q: bool,
        /// Output file (stdout if omitted).
        #[arg(long = "out")]
        out: Option<String>,
    },
    /// Hide a polynomial file behind a black box and interpolate it back.
    Interp {
        #[arg(long = "in")]
        input: String,
        /// alg1 | alg1pp | gsmc | verify (Las Vegas) | approx.
        #[arg(long, default_value = "verify")]
        alg: String,
        #[arg(long, default_value_t = 0.1)]
        mu: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sparsity bound override (defaults to the hidden polynomial's).
        #[arg(long)]
        terms: Option<u32>,
        /// Degree bound override, as D = 2^degbits.
        #[arg(long)]
        degbits: Option<u32>,
        /// Black-box relative evaluation error (approx only).
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Promised coefficient floor |c_i| >= delta ||f|| (approx only;
        /// estimated from the instance when omitted).
        #[arg(long)]
        delta: Option<f64>,
        /// Write the recovered polynomial here (stdout if omitted).
        #[arg(long = "out")]
        out: Option<String>,
        /// Emit a JSON stats record on stdout instead of the polynomial.
        #[arg(long)]
        json: bool,
    },
    /// Deterministic zero test of a file, or equality test against another.
    /// Exits 0 exactly when the verdict is ZERO.
    Verify {
        #[arg(long = "in")]
        input: String,
        /// When given, test `in - against = 0` instead of `in = 0`.
        #[arg(long)]
        against: Option<String>,
        #[arg(long)]
        terms: Option<u32>,
        #[arg(long)]
        degbits: Option<u32>,
    },
    /// Run a benchmark suite: records as JSON lines on stdout, summary
    /// table on stderr (or --out). Exits 0 only if every trial passed.
    Bench {
        /// Comma-separated list: alg1,alg1pp,gsmc,verify,approx.
        #[arg(long, default_value = "alg1pp")]
        alg: String,
        /// Comma-separated sparsity bounds.
        #[arg(long, default_value = "10")]
        terms: String,
        /// Comma-separated degree bits.
        #[arg(long, default_value = "16")]
        degbits: String,
        #[arg(long, default_value_t = 5)]
        trials: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        mu: f64,
        #[arg(long, default_value_t = DEFAULT_Q)]
        q: u64,
        /// Comma-separated noise levels for approx cells.
        #[arg(long, default_value = "1e-9")]
        eps: String,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Summary as JSON instead of an aligned table.
        #[arg(long)]
        json: bool,
        #[arg(long = "out")]
        out: Option<String>,
    },
    /// Aggregate a JSON-lines record stream into a summary.
    Report {
        /// Record file (stdin if omitted).
        #[arg(long = "in")]
        input: Option<String>,
        /// Summary as JSON instead of an aligned table.
        #[arg(long)]
        json: bool,
        #[arg(long = "out")]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn open_out(path: &Option<String>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout()),
    })
}

fn read_poly_file(path: &str) -> Result<PolyFile, Box<dyn std::error::Error>> {
    Ok(read_poly(BufReader::new(File::open(path)?))?)
}

/// Smallest power of two strictly above the degree (and at least 2), the
/// default degree bound when none is given.
fn default_degree_bound(degree: Option<&BigUint>) -> BigUint {
    match degree {
        None => BigUint::from(2u32),
        Some(d) => BigUint::one() << d.bits().max(1),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.cmd {
        Cmd::Gen { kind, terms, degbits, q, delta, seed, unsafe_q, out } => {
            let degree_bound = BigUint::one() << degbits;
            let file = match kind.as_str() {
                "ff" => {
                    let threshold = BigUint::from(terms)
                        * BigUint::from(terms.saturating_sub(1))
                        * &degree_bound
                        + 1u32;
                    if !unsafe_q && BigUint::from(q) < threshold {
                        return Err(format!(
                            "q = {q} is below T(T-1)D + 1 = {threshold}; diversification \
                             guarantees need a larger field (pass --unsafe-q to proceed anyway)"
                        )
                        .into());
                    }
                    PolyFile::Fq { q, poly: gen_ff_instance(terms, &degree_bound, q, seed)? }
                }
                "approx" => PolyFile::Complex {
                    poly: gen_approx_instance(terms, &degree_bound, delta, seed)?,
                },
                other => return Err(format!("unknown instance kind {other:?}").into()),
            };
            write_poly(&mut open_out(&out)?, &file)?;
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Interp { input, alg, mu, seed, terms, degbits, eps, delta, out, json } => {
            let alg =
                Algorithm::parse(&alg).ok_or_else(|| format!("unknown algorithm {alg:?}"))?;
            let file = read_poly_file(&input)?;
            interp_command(file, alg, mu, seed, terms, degbits, eps, delta, out, json)
        }

        Cmd::Verify { input, against, terms, degbits } => {
            let PolyFile::Fq { q, poly: f } = read_poly_file(&input)? else {
                return Err("verify operates on prime-field univariate files".into());
            };
            let g = match &against {
                None => diverse_interp::SparsePoly::zero(),
                Some(path) => {
                    let PolyFile::Fq { q: q2, poly } = read_poly_file(path)? else {
                        return Err("--against must be a prime-field univariate file".into());
                    };
                    if q2 != q {
                        return Err(format!("field mismatch: {q} vs {q2}").into());
                    }
                    poly
                }
            };
            let t_bound = terms.unwrap_or((f.sparsity() + g.sparsity()).max(1) as u32);
            let degree_bound = match degbits {
                Some(b) => BigUint::one() << b,
                None => default_degree_bound(f.degree().max(g.degree())),
            };
            let bx = sparse_backend(
                f.clone(),
                PrimeField::new(q),
                f.sparsity().max(1) as u32,
                degree_bound.clone(),
            );
            let diff = difference(&bx, g);
            let verdict = verify_zero(&diff, t_bound, &degree_bound);
            let stats = diff.stats();
            eprintln!("probes: {} max_p: {}", stats.probes, stats.max_p);
            match verdict {
                ZeroTest::Zero => {
                    println!("ZERO");
                    Ok(ExitCode::SUCCESS)
                }
                ZeroTest::Nonzero => {
                    println!("NONZERO");
                    Ok(ExitCode::FAILURE)
                }
            }
        }

        Cmd::Bench { alg, terms, degbits, trials, seed, mu, q, eps, delta, json, out } => {
            let algs: Vec<Algorithm> = alg
                .split(',')
                .map(|s| {
                    Algorithm::parse(s.trim()).ok_or_else(|| format!("unknown algorithm {s:?}"))
                })
                .collect::<Result<_, _>>()?;
            let terms: Vec<u32> =
                terms.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
            let degbits: Vec<u32> =
                degbits.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
            let eps_levels: Vec<f64> =
                eps.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;

            let grid = |alg: Algorithm| -> Vec<BenchCell> {
                terms
                    .iter()
                    .flat_map(|&t_bound| {
                        degbits
                            .iter()
                            .map(move |&log2_d| BenchCell { alg, t_bound, log2_d, trials })
                    })
                    .collect()
            };
            // Exact cells run once; approx cells sweep the noise levels.
            let mut batches: Vec<(f64, Vec<BenchCell>)> = Vec::new();
            let exact: Vec<BenchCell> = algs
                .iter()
                .filter(|a| **a != Algorithm::Approx)
                .flat_map(|&a| grid(a))
                .collect();
            if !exact.is_empty() {
                batches.push((eps_levels[0], exact));
            }
            if algs.contains(&Algorithm::Approx) {
                for &noise in &eps_levels {
                    batches.push((noise, grid(Algorithm::Approx)));
                }
            }

            let stdout = io::stdout();
            let mut records: Vec<BenchRecord> = Vec::new();
            for (noise, cells) in batches {
                let opts = BenchOptions {
                    seed,
                    q,
                    mu,
                    eps: noise,
                    delta_gen: delta,
                    lv_round_cap: 256,
                };
                let batch = run_bench(&cells, &opts);
                let mut lock = stdout.lock();
                for r in &batch {
                    writeln!(lock, "{}", serde_json::to_string(r)?)?;
                }
                records.extend(batch);
            }

            let rows = summarize(&records);
            let summary =
                if json { serde_json::to_string_pretty(&rows)? } else { render_table(&rows) };
            match &out {
                Some(path) => write!(File::create(path)?, "{summary}")?,
                None => eprint!("{summary}"),
            }
            Ok(if all_passed(&records) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }

        Cmd::Report { input, json, out } => {
            let mut text = String::new();
            match &input {
                Some(path) => {
                    File::open(path)?.read_to_string(&mut text)?;
                }
                None => {
                    io::stdin().read_to_string(&mut text)?;
                }
            }
            let records: Vec<BenchRecord> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(serde_json::from_str)
                .collect::<Result<_, _>>()?;
            let rows = summarize(&records);
            let summary =
                if json { serde_json::to_string_pretty(&rows)? } else { render_table(&rows) };
            match &out {
                Some(path) => write!(File::create(path)?, "{summary}")?,
                None => print!("{summary}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn interp_command(
    file: PolyFile,
    alg: Algorithm,
    mu: f64,
    seed: u64,
    terms: Option<u32>,
    degbits: Option<u32>,
    eps: f64,
    delta: Option<f64>,
    out: Option<String>,
    json: bool,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    match file {
        PolyFile::Fq { q, poly } => {
            let t_bound = terms.unwrap_or(poly.sparsity().max(1) as u32);
            let degree_bound = match degbits {
                Some(b) => BigUint::one() << b,
                None => default_degree_bound(poly.degree()),
            };
            let bx = sparse_backend(poly, PrimeField::new(q), t_bound, degree_bound.clone());
            let cfg = InterpConfig::new(t_bound, degree_bound, mu);
            let res = run_ff_alg(alg, &bx, &cfg, &mut rng)?;
            emit_stats(json, res.stats.probes, res.stats.max_p, res.stats.evals);
            if !json || out.is_some() {
                write_poly(&mut open_out(&out)?, &PolyFile::Fq { q, poly: res.poly })?;
            }
            Ok(ExitCode::SUCCESS)
        }
        PolyFile::MultiFq { q, per_var_bound, poly } => {
            // Kronecker substitution collapses the variables; the packed box
            // is interpolated and the result unpacked term for term.
            let vars = poly.vars();
            let packed = kronecker_pack(&poly, &per_var_bound)?;
            let t_bound = terms.unwrap_or(packed.sparsity().max(1) as u32);
            let degree_bound = per_var_bound.pow(vars as u32).max(BigUint::from(2u32));
            let bx = sparse_backend(packed, PrimeField::new(q), t_bound, degree_bound.clone());
            let cfg = InterpConfig::new(t_bound, degree_bound, mu);
            let res = run_ff_alg(alg, &bx, &cfg, &mut rng)?;
            emit_stats(json, res.stats.probes, res.stats.max_p, res.stats.evals);
            let unpacked = kronecker_unpack(&res.poly, &per_var_bound, vars)?;
            if !json || out.is_some() {
                write_poly(
                    &mut open_out(&out)?,
                    &PolyFile::MultiFq { q, per_var_bound, poly: unpacked },
                )?;
            }
            Ok(ExitCode::SUCCESS)
        }
        PolyFile::Complex { poly } => {
            if alg != Algorithm::Approx {
                return Err("complex instances use --alg approx".into());
            }
            let t_bound = terms.unwrap_or(poly.sparsity().max(1) as u32);
            let degree_bound = match degbits {
                Some(b) => BigUint::one() << b,
                None => default_degree_bound(poly.degree()),
            };
            let norm = poly.norm2();
            let delta = delta.unwrap_or_else(|| {
                // Heuristic stand-in when the caller has no promised floor:
                // the smallest true coefficient magnitude, relative to ||f||.
                0.99 * poly.terms().iter().map(|t| t.coeff.norm()).fold(f64::INFINITY, f64::min)
                    / norm.max(f64::MIN_POSITIVE)
            });
            let bx =
                noisy_complex_backend(poly, t_bound, degree_bound.clone(), eps, seed ^ 0x5eed);
            let cfg =
                ApproxConfig::new(t_bound, degree_bound, eps, delta.max(f64::MIN_POSITIVE), mu);
            let res = approx_interpolate(&bx, &cfg, &mut rng)?;
            emit_stats(json, res.stats.probes, res.stats.max_p, res.stats.evals);
            if !json || out.is_some() {
                write_poly(&mut open_out(&out)?, &PolyFile::Complex { poly: res.poly })?;
            }
            Ok(ExitCode::SUCCESS)
        }
        PolyFile::MultiComplex { .. } => {
            Err("multivariate approximate interpolation is not supported".into())
        }
    }
}

fn run_ff_alg<B: RemainderBlackBox>(
    alg: Algorithm,
    bx: &B,
    cfg: &InterpConfig,
    rng: &mut ChaCha12Rng,
) -> Result<InterpResult, Box<dyn std::error::Error>> {
    Ok(match alg {
        Algorithm::Alg1 => interpolate_mc(bx, cfg, rng)?,
        Algorithm::Alg1pp => interpolate_adaptive(bx, cfg, rng)?,
        Algorithm::GsMc => gs_interpolate_mc(bx, cfg, rng)?,
        Algorithm::Verify => interpolate_lv_capped(bx, cfg, rng, 256)?,
        Algorithm::Approx => return Err("--alg approx needs a complex instance".into()),
    })
}

fn emit_stats(json: bool, probes: u64, max_p: u64, evals: u64) {
    let line = serde_json::json!({ "probes": probes, "max_p": max_p, "evals": evals });
    if json {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}
