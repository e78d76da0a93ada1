use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nhf::equal_rank::classify_equal_rank_with;
use nhf::exact_arith::Rational;
use nhf::explicit_models::{condition_r_report, default_t_samples, ModelName};
use nhf::finsler_lab::{self, load_metric, FdConfig};
use nhf::par::Exec;
use nhf::root_systems::{RootSystem, SimpleType, TypeLabel};
use nhf::verify::{self, RankCaps, RunOptions, Theorem1Report};

#[derive(Parser)]
#[command(name = "nhf", version, about = "Classification checks for positively curved normal homogeneous Finsler spaces")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include rule-by-rule traces in corank-one output.
    #[arg(long, global = true)]
    trace: bool,
    /// Seed ordering; only `deterministic` is supported.
    #[arg(long, global = true, value_enum, default_value_t = SeedOrder::Deterministic)]
    seed_order: SeedOrder,
    /// Run single-threaded.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedOrder {
    Deterministic,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the roots of a simple type.
    Roots(TypeArgs),
    #[command(subcommand)]
    Classify(Classify),
    #[command(subcommand)]
    Verify(Verify),
    /// Eigenvalue-sequence survey of a catalog model.
    ConditionR {
        #[arg(long)]
        space: String,
        /// Family parameters, e.g. `1/10`; repeatable.
        #[arg(long)]
        t: Vec<String>,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 0x5eed)]
        rng_seed: u64,
    },
    #[command(subcommand)]
    Finsler(Finsler),
    /// Rule-by-rule trace of a corank-one seed such as `B2#3`.
    Explain { seed: String },
    /// Write the theorem report as JSON or Markdown.
    Export {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Re-export a saved JSON report instead of running the pipeline.
        #[arg(long)]
        from: Option<PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Args)]
struct TypeArgs {
    #[arg(long = "type")]
    ty: String,
    #[arg(long, default_value_t = 0)]
    rank: usize,
}

#[derive(Subcommand)]
enum Classify {
    /// Filter every full-rank subalgebra of a simple `g`.
    EqualRank(TypeArgs),
    /// Run every corank-one seed of `g` (or `g ⊕ A1` with `--with-a1`).
    Corank1 {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        with_a1: bool,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Full pipeline diffed against the expected tables.
    Theorem1(CapArgs),
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    #[arg(long, default_value_t = 4)]
    a: usize,
    #[arg(long, default_value_t = 4)]
    b: usize,
    #[arg(long, default_value_t = 4)]
    c: usize,
    #[arg(long, default_value_t = 4)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    e: usize,
    #[arg(long)]
    no_g2: bool,
    #[arg(long)]
    no_f4: bool,
}

impl CapArgs {
    fn caps(self) -> RankCaps {
        RankCaps {
            a: self.a,
            b: self.b,
            c: self.c,
            d: self.d,
            g2: !self.no_g2,
            f4: !self.no_f4,
            e: self.e,
        }
    }
}

#[derive(Subcommand)]
enum Finsler {
    /// Flag curvature at `(x; y, v)`, or the curvature operator without `--v`.
    Curvature {
        /// Catalog name, JSON file or inline JSON.
        #[arg(long)]
        metric: String,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        v: Option<Vec<f64>>,
        /// Also report the S-curvature at `(x, y)`.
        #[arg(long)]
        s_curvature: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

type Res<T> = Result<T, Box<dyn std::error::Error>>;

fn simple_type(a: &TypeArgs) -> Res<SimpleType> {
    let label = TypeLabel::parse(&a.ty).ok_or_else(|| format!("unknown type {}", a.ty))?;
    let rank = label.fixed_rank().unwrap_or(a.rank);
    if rank == 0 {
        return Err("--rank is required for classical types".into());
    }
    Ok(SimpleType::new(label, rank))
}

fn print_json<T: Serialize>(v: &T) -> Res<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> Res<i32> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let opts = RunOptions {
        exec,
        traces: cli.trace,
        ..RunOptions::default()
    };
    match cli.cmd {
        Cmd::Roots(a) => {
            let t = simple_type(&a)?;
            let rs = RootSystem::build(t.label, t.rank)?;
            if cli.json {
                print_json(&rs.to_document())?;
            } else {
                println!("{t}: {} roots in ℝ^{}", rs.len(), rs.to_document().ambient_dim);
                for i in (0..rs.len()).filter(|&i| rs.is_positive(i)) {
                    println!("  ±{}", rs.root(i));
                }
            }
        }
        Cmd::Classify(Classify::EqualRank(a)) => {
            let t = simple_type(&a)?;
            let rep = classify_equal_rank_with(t.label, t.rank, nhf::equal_rank::DEFAULT_CAP, exec)?;
            if cli.json {
                print_json(&rep)?;
            } else {
                println!("{t}: {} proper full-rank candidates", rep.candidates.len());
                for c in &rep.candidates {
                    match c.failing_rule {
                        None => println!(
                            "  {:<12} survivor  {}",
                            c.h_type,
                            c.space.as_deref().unwrap_or("")
                        ),
                        Some(r) => println!("  {:<12} excluded  {r:?}", c.h_type),
                    }
                }
            }
        }
        Cmd::Classify(Classify::Corank1 { ty, with_a1 }) => {
            let t = simple_type(&ty)?;
            let mut types = vec![t];
            if with_a1 {
                types.push(SimpleType::new(TypeLabel::A, 1));
            }
            let (rows, diffs) = verify::corank_section(&types, opts)?;
            if cli.json {
                print_json(&serde_json::json!({ "rows": rows, "diffs": diffs }))?;
            } else {
                for r in &rows {
                    let outcome = match (&r.rule, &r.h) {
                        (Some(rule), _) => format!("contradiction ({rule})"),
                        (None, Some(h)) => format!("saturated, h = {h}"),
                        _ => format!("{:?}", r.status),
                    };
                    print!("{:<10} {:<34} {outcome}", r.id, r.seed);
                    if let Some(k) = &r.k_bound {
                        print!(", k ⊂ {k}");
                    }
                    if let Some(o) = &r.oracle {
                        print!(", matrix check {:?}", o.outcome);
                    }
                    if let Some(s) = &r.space {
                        print!(" → {s}");
                    }
                    println!();
                    if let Some(tr) = &r.trace {
                        for step in tr {
                            println!("    [{}] {}", step.rule, step.conclusion);
                        }
                    }
                }
                for d in &diffs {
                    println!("DIFF {d}");
                }
            }
            return Ok(if diffs.is_empty() { 0 } else { 2 });
        }
        Cmd::Verify(Verify::Theorem1(c)) => {
            let start = std::time::Instant::now();
            let rep = verify::verify_theorem1(c.caps(), opts)?;
            if cli.json {
                print_json(&rep)?;
            } else {
                print!("{}", rep.to_markdown());
                eprintln!("elapsed {:.2?}", start.elapsed());
            }
            return Ok(rep.exit_code());
        }
        Cmd::ConditionR { space, t, pairs, rng_seed } => {
            let name = ModelName::parse(&space).ok_or_else(|| format!("unknown model {space}"))?;
            let ts: Vec<Rational> = if t.is_empty() {
                default_t_samples()
            } else {
                t.iter()
                    .map(|s| s.parse::<Rational>().map_err(|e| format!("bad t {s}: {e}")))
                    .collect::<Result<_, _>>()?
            };
            let rep = condition_r_report(name, &ts, pairs, rng_seed)?;
            if cli.json {
                print_json(&rep)?;
            } else {
                println!("{}: {}", rep.space, rep.verdict);
                println!(
                    "  {} of {} sampled pairs have dependent eigenvalue sequences",
                    rep.dependent_pairs,
                    rep.pairs.len()
                );
                println!("  fails Condition (R): {}", rep.fails_condition_r);
            }
        }
        Cmd::Finsler(Finsler::Curvature {
            metric,
            x,
            y,
            v,
            s_curvature,
        }) => {
            let m = load_metric(&metric)?;
            let cfg = FdConfig::default();
            let sample = match &v {
                Some(v) => finsler_lab::curvature::flag_curvature_with(m.as_ref(), &x, &y, v, cfg)?,
                None => finsler_lab::curvature::riemann_curvature_with(m.as_ref(), &x, &y, cfg)?,
            };
            let s = if s_curvature {
                Some(finsler_lab::s_curvature(m.as_ref(), &x, &y)?)
            } else {
                None
            };
            if cli.json {
                print_json(&serde_json::json!({
                    "x": sample.x,
                    "y": sample.y,
                    "v": sample.v,
                    "K": sample.k,
                    "R": sample.r,
                    "S": s.as_ref().map(|s| s.s),
                    "diagnostics": sample.diagnostics,
                }))?;
            } else {
                if let Some(k) = sample.k {
                    println!("K = {k:.10}");
                }
                println!("R^i_k = {:?}", sample.r);
                if let Some(s) = &s {
                    println!("S = {:.10} (half step {:.10})", s.s, s.s_half_step);
                }
                println!(
                    "|R_y y| residual {:.2e}, self-adjointness residual {:.2e}",
                    sample.diagnostics.pole_residual, sample.diagnostics.self_adjoint_residual
                );
            }
        }
        Cmd::Explain { seed } => {
            print!("{}", verify::explain(&seed)?);
        }
        Cmd::Export { format, out, from, caps } => {
            let rep: Theorem1Report = match from {
                Some(p) => serde_json::from_str(&std::fs::read_to_string(&p)?)?,
                None => verify::verify_theorem1(caps.caps(), opts)?,
            };
            std::fs::create_dir_all(&out)?;
            let (file, body) = match format {
                Format::Json => ("theorem1.json", serde_json::to_string_pretty(&rep)? + "\n"),
                Format::Markdown => ("theorem1.md", rep.to_markdown()),
            };
            let path = out.join(file);
            std::fs::write(&path, body)?;
            println!("{}", path.display());
            return Ok(rep.exit_code());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
