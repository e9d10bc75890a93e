mod instance;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pilp_core::config::Config;
use pilp_core::decide::{bell_scarf_decide, decide_forall_exists, ForAllExistsInstance, Verdict};
use pilp_core::gap::{gap_exceeds, max_gap, GapInstance, GapWitness};
use pilp_core::io::{int_vec_json, rat_vec_json};
use pilp_core::lattice::lattice_width;
use pilp_core::milp::mixed_integer_feasible;
use pilp_core::numkernel::rational::{parse_rational, Rational};
use pilp_core::oracle::{brute_forall_exists, brute_gap, brute_has_int_point, brute_lattice_width, Grid, GridOutcome, IntBox};
use pilp_core::paramwidth::width_partition;
use pilp_core::polyhedron::rhs_feasibility_region;
use pilp_core::structural::structural_partition;
use pilp_core::{Error, Result};
use serde_json::{json, Value};

use instance::{read_json, Instance};

#[derive(Parser)]
#[command(name = "pilp", version, about = "Exact parametric integer linear programming in fixed dimension")]
struct Cli {
    /// JSON file with flatness table, bounds and caps; replaces the instance's own `config`.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Byte-stable output. Execution is sequential, so this is always the case.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    /// Instance file, or `-` for standard input.
    file: PathBuf,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    lo: String,
    #[arg(long, allow_hyphen_values = true)]
    hi: String,
    #[arg(long)]
    step: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lattice width and a width direction of `P` (or of `A x <= b`).
    Width(Input),
    /// Regions of right-hand sides with an affine width formula.
    Partition(Input),
    /// Candidate schemes deciding integer feasibility of `A x <= b`.
    Structure(Input),
    /// Mixed-integer feasibility; exit 1 when infeasible.
    Feasible(Input),
    /// Decides "every b in Q/Z^p has an integral x with A x <= b"; exit 1 when it fails.
    Decide {
        #[command(flatten)]
        input: Input,
        /// Use the small-subsystem reduction.
        #[arg(long)]
        bell_scarf: bool,
    },
    /// Integer programming gap of `max {c x : A x <= b}`.
    Gap {
        #[command(flatten)]
        input: Input,
        /// Test whether the gap exceeds this value; exit 1 when it does.
        #[arg(long, conflicts_with_all = ["max", "denom"])]
        gamma: Option<String>,
        /// Compute the gap.
        #[arg(long, required_unless_present = "gamma")]
        max: bool,
        /// Bound on the denominator of the gap.
        #[arg(long, requires = "max")]
        denom: Option<String>,
    },
    /// Brute-force cross-checks.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum OracleCmd {
    /// An integral point of a bounded `P` by enumeration; exit 1 when there is none.
    Points(Input),
    /// Width by trying every direction with entries in `[-norm, norm]`.
    Width {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        norm: u32,
    },
    /// The sentence on a uniform grid of b; exit 1 on a counterexample.
    ForallExists {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        grid: GridArgs,
        /// Range of every coordinate of z.
        #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
        zlo: i64,
        #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
        zhi: i64,
    },
    /// Largest gap on a uniform grid of b.
    Gap {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        grid: GridArgs,
    },
}

struct Outcome {
    json: Value,
    code: u8,
}

fn ok(json: Value) -> Outcome {
    Outcome { json, code: 0 }
}

fn flag_rational(v: &str, flag: &str) -> Result<Rational> {
    parse_rational(v).map_err(|_| Error::Parse(format!("--{flag}: not a rational: {v:?}")))
}

fn load(input: &Input, cfg_file: Option<&Value>) -> Result<(Instance, Config)> {
    let inst = Instance::from_value(read_json(&input.file)?)?;
    let cfg = inst.config(cfg_file)?;
    Ok((inst, cfg))
}

fn region_or_default(inst: &Instance, a: &pilp_core::RatMatrix) -> Result<pilp_core::polyhedron::PartiallyOpenPolyhedron> {
    Ok(inst.q(a.nrows())?.unwrap_or_else(|| rhs_feasibility_region(a)))
}

fn sentence(inst: &Instance) -> Result<ForAllExistsInstance> {
    let a = inst.a()?;
    let p = inst.p()?;
    let q = inst.q(a.nrows() + p)?.ok_or_else(|| Error::Parse("Q: missing".into()))?;
    ForAllExistsInstance::new(a, q, p)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg_file = cli.config.as_deref().map(read_json).transpose()?;
    let cfg_file = cfg_file.as_ref();
    match &cli.cmd {
        Cmd::Width(input) => {
            let (inst, _) = load(input, cfg_file)?;
            let w = lattice_width(&inst.polyhedron()?)?;
            Ok(ok(json!({"width": w.width.to_json(), "direction": w.direction.as_deref().map(int_vec_json)})))
        }
        Cmd::Partition(input) => {
            let (inst, _) = load(input, cfg_file)?;
            let a = inst.a()?;
            let part = width_partition(&a, &region_or_default(&inst, &a)?)?;
            Ok(ok(json!({"regions": part.to_json()})))
        }
        Cmd::Structure(input) => {
            let (inst, cfg) = load(input, cfg_file)?;
            let a = inst.a()?;
            let sp = structural_partition(&a, &region_or_default(&inst, &a)?, &cfg)?;
            Ok(ok(json!({"schemes": sp.to_json()})))
        }
        Cmd::Feasible(input) => {
            let (inst, cfg) = load(input, cfg_file)?;
            let r = mixed_integer_feasible(&inst.mip()?, &cfg)?;
            Ok(Outcome { code: if r.is_feasible() { 0 } else { 1 }, json: r.to_json() })
        }
        Cmd::Decide { input, bell_scarf } => {
            let (inst, cfg) = load(input, cfg_file)?;
            let s = sentence(&inst)?;
            let r = if *bell_scarf { bell_scarf_decide(&s, &cfg)? } else { decide_forall_exists(&s, &cfg)? };
            Ok(Outcome { code: if r.verdict == Verdict::Holds { 0 } else { 1 }, json: r.to_json() })
        }
        Cmd::Gap { input, gamma, denom, .. } => {
            let (inst, cfg) = load(input, cfg_file)?;
            let a = inst.a()?;
            let g = GapInstance::new(a.clone(), inst.c(a.ncols())?)?;
            if let Some(gamma) = gamma {
                let gamma = flag_rational(gamma, "gamma")?;
                let w = gap_exceeds(&g, &gamma, &cfg)?;
                let json = json!({
                    "gamma": pilp_core::io::rat_json(&gamma),
                    "exceeds": w.is_some(),
                    "certificate": w.as_ref().map(GapWitness::to_json),
                });
                return Ok(Outcome { code: if w.is_some() { 1 } else { 0 }, json });
            }
            let d = match denom {
                Some(d) => {
                    let d = flag_rational(d, "denom")?;
                    if !d.is_integer() {
                        return Err(Error::Parse("--denom: expected an integer".into()));
                    }
                    Some(d.to_integer())
                }
                None => None,
            };
            Ok(ok(max_gap(&g, d.as_ref(), &cfg)?.to_json()))
        }
        Cmd::Oracle(o) => run_oracle(o, cfg_file),
    }
}

fn uniform(dim: usize, g: &GridArgs) -> Result<Grid> {
    Grid::uniform(dim, &flag_rational(&g.lo, "lo")?, &flag_rational(&g.hi, "hi")?, &flag_rational(&g.step, "step")?)
}

fn run_oracle(o: &OracleCmd, cfg_file: Option<&Value>) -> Result<Outcome> {
    match o {
        OracleCmd::Points(input) => {
            let (inst, _) = load(input, cfg_file)?;
            match brute_has_int_point(&inst.polyhedron()?) {
                None => Err(Error::Parse("P: unbounded, cannot enumerate".into())),
                Some(Some(x)) => Ok(ok(json!({"point": int_vec_json(&x)}))),
                Some(None) => Ok(Outcome { code: 1, json: json!({"point": null}) }),
            }
        }
        OracleCmd::Width { input, norm } => {
            let (inst, _) = load(input, cfg_file)?;
            let w = brute_lattice_width(&inst.polyhedron()?, *norm)?;
            Ok(ok(json!({"width": w.width.to_json(), "direction": w.direction.as_deref().map(int_vec_json)})))
        }
        OracleCmd::ForallExists { input, grid, zlo, zhi } => {
            let (inst, _) = load(input, cfg_file)?;
            let s = sentence(&inst)?;
            let zbox = IntBox::cube(s.p, *zlo, *zhi);
            match brute_forall_exists(&s.a, &s.q, &uniform(s.m(), grid)?, &zbox)? {
                GridOutcome::HoldsOnGrid => Ok(ok(json!({"outcome": "HoldsOnGrid"}))),
                GridOutcome::Counterexample { b, z } => Ok(Outcome {
                    code: 1,
                    json: json!({"outcome": "Counterexample", "b": rat_vec_json(&b), "z": int_vec_json(&z)}),
                }),
            }
        }
        OracleCmd::Gap { input, grid } => {
            let (inst, _) = load(input, cfg_file)?;
            let a = inst.a()?;
            let c = inst.c(a.ncols())?;
            let g = brute_gap(&a, &c, &uniform(a.nrows(), grid)?)?;
            Ok(ok(json!({"gap": pilp_core::io::rat_json(&g)})))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{}", out.json);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("pilp: {e}");
            let limit = e.is_limit() || e == Error::DenominatorBoundTooSmall;
            ExitCode::from(if limit { 3 } else { 2 })
        }
    }
}
