//! Batch command-line front end.
//!
//! Subcommands: `gen` (write a frame CSV), `check` (frame bounds and
//! Parseval test), `partition` (the four theorem pipelines), `pave`
//! (paving search / paving-to-spanning pipeline), `witness` (Rado-Horn
//! infeasibility witness).
//!
//! Exit codes: 0 theorem success, 1 input error, 2 verified infeasibility
//! or witness, 3 search exhausted / paving not found. All randomness comes
//! from an explicit `--seed`; identical invocations write identical bytes.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::frames::csv::{frame_to_string, read_frame};
use crate::frames::{
    gram, harmonic_frame, is_parseval, random_parseval, scaled_union_of_bases, validate_frame,
};
use crate::linalg::exact::{parse_q, Q};
use crate::linalg::{Ctx, ScalarMode, Tolerance};
use crate::matroids::{matroid_partition, subspace_witness, MatroidOracle, PartitionOutcome};
use crate::partitioners::{
    equal_norm_independent_partition, independent_spanning_partition,
    spanning_complement_partition, spanning_partition, verify_partition, PartitionCertificate,
    TheoremClaim,
};
use crate::paving::{hollow_gram, pave, paving_spanning_pipeline, AnnealConfig, PaveMethod};

#[derive(Parser, Debug)]
#[command(
    name = "frameforge",
    about = "Partition finite frames into spanning and/or independent subsets, with certificates",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a frame and write it as CSV.
    Gen(GenArgs),
    /// Validate a frame: bounds, Parseval test, norms.
    Check(CheckArgs),
    /// Run one of the partition theorems and emit a certificate.
    Partition(PartitionArgs),
    /// Paving search on the hollow Gram, optionally chained into spanning
    /// certificates.
    Pave(PaveArgs),
    /// Construct the infeasibility witness for partitioning into --m
    /// independent sets.
    Witness(WitnessArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Harmonic frame: N M.
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    harmonic: Option<Vec<usize>>,
    /// Seeded random Parseval frame: N M (requires --seed).
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    random: Option<Vec<usize>>,
    /// Union of R scaled orthonormal bases: N R.
    #[arg(long = "scaled-union", num_args = 2, value_names = ["N", "R"])]
    scaled_union: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write entries as exact rationals (p/q).
    #[arg(long)]
    exact: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    frame: PathBuf,
    #[arg(long = "tol-rank")]
    tol_rank: Option<f64>,
    #[arg(long = "tol-eig")]
    tol_eig: Option<f64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Theorem {
    T1,
    P5,
    P6,
    Cor5,
}

#[derive(Args, Debug)]
struct PartitionArgs {
    #[arg(long)]
    theorem: Theorem,
    /// Norm-gap parameter for t1 (float or p/q).
    #[arg(long)]
    delta: Option<String>,
    /// Part count override (t1) or spanning-part count (cor5).
    #[arg(long)]
    r: Option<usize>,
    #[arg(long = "tol-rank")]
    tol_rank: Option<f64>,
    #[arg(long = "tol-eig")]
    tol_eig: Option<f64>,
    /// Decide ranks in exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    frame: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exhaustive,
    Annealing,
}

#[derive(Args, Debug)]
struct PaveArgs {
    /// Run the full pipeline at this delta (float or p/q): pave the hollow
    /// Gram at delta/2 and certify spanning complements.
    #[arg(long)]
    delta: Option<String>,
    /// Raw paving search at relative bound s (float or p/q).
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    r: Option<usize>,
    /// Try r = 1..=MAX until the pipeline succeeds.
    #[arg(long = "sweep-r", value_name = "MAX")]
    sweep_r: Option<usize>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    method: MethodArg,
    /// Annealing iteration budget.
    #[arg(long, default_value_t = 20_000)]
    budget: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "tol-rank")]
    tol_rank: Option<f64>,
    #[arg(long = "tol-eig")]
    tol_eig: Option<f64>,
    #[arg(long)]
    exact: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    frame: PathBuf,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    /// Number of independent parts the witness refutes.
    #[arg(long)]
    m: usize,
    #[arg(long = "tol-rank")]
    tol_rank: Option<f64>,
    #[arg(long = "tol-eig")]
    tol_eig: Option<f64>,
    #[arg(long)]
    exact: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    frame: PathBuf,
}

/// Parses CLI args and runs; returns the process exit code.
pub fn run_from_args() -> i32 {
    let cli = Cli::parse();
    run(cli)
}

/// Entry point used by tests: parse explicit args.
pub fn try_run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            eprint!("{e}");
            1
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::HypothesisFailed { .. } | Error::FeasibleInput { .. } => 2,
                Error::SearchExhausted(_) | Error::PavingNotFound { .. } => 3,
                _ => 1,
            }
        }
    }
}

fn tolerance(rank: Option<f64>, eig: Option<f64>) -> Result<Tolerance> {
    let d = Tolerance::default();
    Tolerance::new(rank.unwrap_or(d.rank_rel), eig.unwrap_or(d.eig_abs))
}

fn context(rank: Option<f64>, eig: Option<f64>, exact: bool) -> Result<Ctx> {
    let tol = tolerance(rank, eig)?;
    Ok(if exact { Ctx::exact(tol) } else { Ctx::float(tol) })
}

fn emit(output: Option<&Path>, payload: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, payload)?,
        None => print!("{payload}"),
    }
    Ok(())
}

/// A delta/s value that keeps its exact form when given as p/q.
struct Scalar {
    value: f64,
    exact: Option<Q>,
}

fn parse_scalar(text: &str) -> Result<Scalar> {
    let q = parse_q(text)?;
    Ok(Scalar {
        value: crate::linalg::exact::q_to_f64(&q),
        exact: text.contains('/').then_some(q),
    })
}

/// Part count for t1: exact ceil(1/delta) when delta came in as a rational,
/// fuzzed against decimal round-off otherwise.
fn part_count_for(delta: &Scalar) -> usize {
    match &delta.exact {
        Some(q) => {
            let num = q.numer();
            let den = q.denom();
            // ceil(den / num) for a positive rational num/den.
            ((den + num - num::BigInt::from(1)) / num)
                .to_usize()
                .unwrap_or(usize::MAX)
        }
        None => crate::partitioners::default_part_count(delta.value),
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Check(args) => cmd_check(args),
        Command::Partition(args) => cmd_partition(args),
        Command::Pave(args) => cmd_pave(args),
        Command::Witness(args) => cmd_witness(args),
    }
}

fn cmd_gen(args: GenArgs) -> Result<i32> {
    let chosen = [
        args.harmonic.is_some(),
        args.random.is_some(),
        args.scaled_union.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if chosen != 1 {
        return Err(Error::Parse(
            "choose exactly one of --harmonic, --random, --scaled-union".into(),
        ));
    }
    let frame = if let Some(hm) = args.harmonic {
        harmonic_frame(hm[0], hm[1])?
    } else if let Some(rm) = args.random {
        let seed = args.seed.ok_or_else(|| {
            Error::Parse("--random requires an explicit --seed".into())
        })?;
        random_parseval(rm[0], rm[1], seed)?
    } else {
        let su = args.scaled_union.expect("one generator chosen");
        if su[0] == 0 || su[1] == 0 {
            return Err(Error::Parse("--scaled-union needs N >= 1 and R >= 1".into()));
        }
        scaled_union_of_bases(su[0], su[1])
    };
    let mode = if args.exact {
        ScalarMode::Exact
    } else {
        ScalarMode::Float
    };
    let frame = if args.exact {
        frame.with_dyadic_exact()
    } else {
        frame
    };
    emit(args.output.as_deref(), &frame_to_string(&frame, mode)?)?;
    Ok(0)
}

fn cmd_check(args: CheckArgs) -> Result<i32> {
    let tol = tolerance(args.tol_rank, args.tol_eig)?;
    let frame = read_frame(&args.frame)?;
    let bounds = validate_frame(&frame, tol);
    let parseval = is_parseval(&frame, tol);
    let norms = frame.norms_sq();
    let spread = norms.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - norms.iter().cloned().fold(f64::INFINITY, f64::min);

    let mut doc = Map::new();
    doc.insert("schema_version".into(), Value::from("1"));
    doc.insert("kind".into(), Value::from("check"));
    doc.insert("dim".into(), Value::from(frame.dim()));
    doc.insert("vectors".into(), Value::from(frame.len()));
    doc.insert("parseval".into(), Value::from(parseval));
    doc.insert("max_norm_sq".into(), Value::from(frame.max_norm_sq()));
    doc.insert("equal_norm".into(), Value::from(spread <= tol.eig_abs));
    doc.insert(
        "gram_projection_deviation".into(),
        Value::from(gram(&frame).projection_deviation()),
    );
    let code = match &bounds {
        Ok(b) => {
            doc.insert("lower_bound".into(), Value::from(b.lower));
            doc.insert("upper_bound".into(), Value::from(b.upper));
            doc.insert("is_frame".into(), Value::from(true));
            0
        }
        Err(Error::NotAFrame { lambda_min }) => {
            doc.insert("lower_bound".into(), Value::from(*lambda_min));
            doc.insert("is_frame".into(), Value::from(false));
            2
        }
        Err(_) => 1,
    };
    let mut payload = serde_json::to_string_pretty(&Value::Object(doc)).expect("check serializes");
    payload.push('\n');
    emit(args.output.as_deref(), &payload)?;
    Ok(code)
}

fn write_certificate(
    output: Option<&Path>,
    cert: &PartitionCertificate,
    extra_params: Map<String, Value>,
) -> Result<()> {
    let mut cert = cert.clone();
    for (k, v) in extra_params {
        cert.params.insert(k, v);
    }
    emit(output, &cert.to_json())
}

fn cmd_partition(args: PartitionArgs) -> Result<i32> {
    let ctx = context(args.tol_rank, args.tol_eig, args.exact)?;
    let frame = read_frame(&args.frame)?;
    let (_, cert) = match args.theorem {
        Theorem::T1 => {
            let delta_text = args
                .delta
                .as_deref()
                .ok_or_else(|| Error::Parse("--theorem t1 requires --delta".into()))?;
            let delta = parse_scalar(delta_text)?;
            let r = args.r.unwrap_or_else(|| part_count_for(&delta));
            spanning_complement_partition(&frame, delta.value, Some(r), ctx)?
        }
        Theorem::P5 => equal_norm_independent_partition(&frame, ctx)?,
        Theorem::P6 => spanning_partition(&frame, ctx)?,
        Theorem::Cor5 => {
            let r = match args.r {
                Some(r) => r,
                None => {
                    let r = frame.len() / frame.dim();
                    if r == 0 {
                        return Err(Error::Parse(
                            "cor5 needs at least N vectors (or pass --r)".into(),
                        ));
                    }
                    r
                }
            };
            independent_spanning_partition(&frame, r, ctx)?
        }
    };
    write_certificate(args.output.as_deref(), &cert, Map::new())?;
    Ok(0)
}

fn cmd_pave(args: PaveArgs) -> Result<i32> {
    let ctx = context(args.tol_rank, args.tol_eig, args.exact)?;
    let frame = read_frame(&args.frame)?;
    let method = match args.method {
        MethodArg::Exhaustive => PaveMethod::Exhaustive,
        MethodArg::Annealing => PaveMethod::Annealing,
    };
    if method == PaveMethod::Annealing && args.seed.is_none() {
        return Err(Error::Parse(
            "--method annealing requires an explicit --seed".into(),
        ));
    }
    let anneal = AnnealConfig {
        seed: args.seed.unwrap_or(0),
        budget: args.budget,
        ..AnnealConfig::default()
    };

    match (&args.delta, &args.s) {
        (Some(dtext), None) => {
            let delta = parse_scalar(dtext)?;
            let rs: Vec<usize> = match (args.r, args.sweep_r) {
                (Some(r), None) => vec![r],
                (None, Some(max)) => (1..=max).collect(),
                (Some(r), Some(max)) => (r..=max.max(r)).collect(),
                (None, None) => {
                    return Err(Error::Parse("pipeline needs --r or --sweep-r".into()))
                }
            };
            let mut last_err = None;
            for r in rs {
                match paving_spanning_pipeline(&frame, delta.value, r, method, &anneal, ctx) {
                    Ok((result, cert)) => {
                        let mut extra = Map::new();
                        extra.insert("achieved".into(), Value::from(result.achieved));
                        extra.insert("target_abs".into(), Value::from(result.target_abs));
                        extra.insert(
                            "method".into(),
                            Value::from(match result.method {
                                PaveMethod::Exhaustive => "exhaustive",
                                PaveMethod::Annealing => "annealing",
                            }),
                        );
                        extra.insert("input_norm".into(), Value::from(result.input_norm));
                        write_certificate(args.output.as_deref(), &cert, extra)?;
                        return Ok(0);
                    }
                    Err(e @ Error::PavingNotFound { .. }) => last_err = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(last_err.expect("at least one r attempted"))
        }
        (None, Some(stext)) => {
            let s = parse_scalar(stext)?;
            let r = args
                .r
                .ok_or_else(|| Error::Parse("raw paving needs --r".into()))?;
            let h = hollow_gram(&frame, ctx.tol)?;
            let result = pave(&h, r, s.value, method, &anneal, ctx.tol)?;
            let cert = verify_partition(
                &frame,
                &result.partition,
                TheoremClaim::Paving {
                    r,
                    delta: f64::NAN,
                },
                ctx,
            )?;
            let mut extra = Map::new();
            extra.insert("s".into(), Value::from(result.target_s));
            extra.insert("achieved".into(), Value::from(result.achieved));
            extra.insert("target_abs".into(), Value::from(result.target_abs));
            extra.insert("input_norm".into(), Value::from(result.input_norm));
            extra.insert("success".into(), Value::from(result.success));
            let mut cert = cert.clone();
            cert.params.remove("delta");
            write_certificate(args.output.as_deref(), &cert, extra)?;
            Ok(if result.success { 0 } else { 3 })
        }
        _ => Err(Error::Parse(
            "pass exactly one of --delta (pipeline) or --s (raw search)".into(),
        )),
    }
}

fn cmd_witness(args: WitnessArgs) -> Result<i32> {
    let ctx = context(args.tol_rank, args.tol_eig, args.exact)?;
    let frame = read_frame(&args.frame)?;
    if args.m == 0 {
        return Err(Error::Parse("--m must be at least 1".into()));
    }
    match subspace_witness(&frame, args.m, ctx) {
        Ok(w) => {
            let mut doc = Map::new();
            doc.insert("schema_version".into(), Value::from("1"));
            doc.insert("kind".into(), Value::from("witness"));
            doc.insert("m".into(), Value::from(args.m));
            doc.insert(
                "witness".into(),
                serde_json::to_value(&w).expect("witness serializes"),
            );
            let mut payload =
                serde_json::to_string_pretty(&Value::Object(doc)).expect("witness serializes");
            payload.push('\n');
            emit(args.output.as_deref(), &payload)?;
            Ok(2)
        }
        Err(Error::FeasibleInput { .. }) => {
            // Feasible after all: emit the partition certificate instead.
            let oracle = MatroidOracle::linear(&frame, ctx)?;
            let PartitionOutcome::Partitioned(p) = matroid_partition(&oracle, args.m)? else {
                return Err(Error::InternalContractViolation(
                    "feasibility flipped between calls".into(),
                ));
            };
            let cert = verify_partition(
                &frame,
                &p,
                TheoremClaim::IndependentParts { r: args.m, k: 0 },
                ctx,
            )?;
            let mut extra = Map::new();
            extra.insert("note".into(), Value::from("input is feasible; no witness exists"));
            write_certificate(args.output.as_deref(), &cert, extra)?;
            Ok(0)
        }
        Err(e) => Err(e),
    }
}
