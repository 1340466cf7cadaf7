//! `bunmot` — exact calculator for point counts and formal classes of
//! moduli of bundles on curves.
//!
//! Exit codes: 0 success (or all checks pass), 1 verification failure,
//! 2 usage error, 3 data error (unreadable or invalid curve profiles).

use bunmot_core::bun;
use bunmot_core::expr;
use bunmot_core::hn;
use bunmot_core::laurent::format_rational;
use bunmot_core::motring::Window;
use bunmot_core::quot;
use bunmot_core::verify::{self, Grid};
use bunmot_core::{validate_curve, BigRational, CurveData, ValidatedCurve};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::fmt;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "bunmot",
    about = "Exact point-count and class calculator for moduli of bundles on curves",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Curve profile operations
    Curve {
        #[command(subcommand)]
        sub: CurveCmd,
    },
    /// Point counts derived from a curve profile
    Count {
        #[command(subcommand)]
        sub: CountCmd,
    },
    /// Quot schemes of matrix divisors
    Quot {
        #[command(subcommand)]
        sub: QuotCmd,
    },
    /// Formulas for the stack of bundles
    Bun {
        #[command(subcommand)]
        sub: BunCmd,
    },
    /// Harder-Narasimhan types
    Hn {
        #[command(subcommand)]
        sub: HnCmd,
    },
    /// Evaluate a class expression
    Eval(EvalArgs),
    /// Run the verification suite
    Verify {
        #[command(subcommand)]
        sub: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum CurveCmd {
    /// Validate a curve profile file
    Validate {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Points of the j-th symmetric power
    Sym {
        #[arg(long)]
        j: u64,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum QuotCmd {
    /// Point count of the Quot scheme (strata sum; --oracle for the
    /// symmetric-power route)
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        total: u64,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        json: bool,
    },
    /// Per-stratum report (JSON lines with --json)
    Strata {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        total: u64,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum BunCmd {
    /// Stacky point count in closed form (independent of the degree)
    Harder {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        json: bool,
    },
    /// Compact-support class, truncated
    Bd {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, default_value_t = 20)]
        trunc: i64,
        #[arg(long)]
        json: bool,
    },
    /// Homological-side class, truncated
    Conjecture {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, default_value_t = 20)]
        trunc: i64,
        #[arg(long)]
        json: bool,
    },
    /// Normalized Quot counts approaching the closed-form count
    Convergence {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        d0: u64,
        #[arg(long)]
        lmax: u64,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum HnCmd {
    /// Enumerate HN types below a maximal-slope bound
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: i64,
        #[arg(long = "mu-max")]
        mu_max: String,
        #[arg(long)]
        json: bool,
    },
    /// Codimension / cohomology-bound audit of every enumerated type
    Audit {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: i64,
        #[arg(long = "mu-max")]
        mu_max: String,
        #[arg(long)]
        g: i64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct EvalArgs {
    /// Expression, e.g. "Jac*BGm*Z(1)" or "dual(Z(1)){2}"
    expr: String,
    /// Realize against the curve as a Laurent series in 1/q
    #[arg(long)]
    realize: bool,
    /// Genus binding for Jac and dual
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    curve: Option<String>,
    #[arg(long, default_value_t = 20)]
    trunc: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run every check
    All {
        #[arg(long, default_value = "small")]
        grid: String,
        #[arg(long)]
        json: bool,
    },
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

fn load_curve(path: &str) -> Result<ValidatedCurve, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {}", path, e)))?;
    let raw: CurveData = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: invalid profile: {}", path, e)))?;
    let curve =
        validate_curve(&raw).map_err(|e| CliError::Data(format!("{}: {}", path, e)))?;
    for w in curve.warnings() {
        eprintln!("warning: {}: {}", path, w);
    }
    Ok(curve)
}

fn main() -> ExitCode {
    // Die quietly when a pipe downstream closes (e.g. `bunmot ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version and 2 for usage errors
            e.exit();
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.cmd {
        Cmd::Curve { sub } => match sub {
            CurveCmd::Validate { curve, json } => {
                let c = load_curve(&curve)?;
                let jac = c.jac_count().map(|j| j.to_string()).ok();
                if json {
                    println!(
                        "{}",
                        json!({
                            "valid": true,
                            "name": c.name(),
                            "genus": c.genus(),
                            "q": c.q(),
                            "jac_count": jac,
                            "warnings": c.warnings(),
                        })
                    );
                } else {
                    println!(
                        "ok: name={} genus={} q={} |Jac|={}",
                        c.name(),
                        c.genus(),
                        c.q(),
                        jac.unwrap_or_else(|| "undefined".into())
                    );
                }
                Ok(0)
            }
        },
        Cmd::Count { sub } => match sub {
            CountCmd::Sym { j, curve, json } => {
                let c = load_curve(&curve)?;
                let value = c.sym_count(j);
                if json {
                    println!("{}", json!({"j": j, "count": value.to_string()}));
                } else {
                    println!("{}", value);
                }
                Ok(0)
            }
        },
        Cmd::Quot { sub } => match sub {
            QuotCmd::Count {
                n,
                total,
                oracle,
                curve,
                json,
            } => {
                if n == 0 {
                    return Err(CliError::Usage("--n must be at least 1".into()));
                }
                let c = load_curve(&curve)?;
                let value = if oracle {
                    quot::quot_count_oracle(n, total, &c)
                } else {
                    quot::quot_count(n, total, &c)
                };
                if json {
                    println!(
                        "{}",
                        json!({"n": n, "N": total, "oracle": oracle, "count": value.to_string()})
                    );
                } else {
                    println!("{}", value);
                }
                Ok(0)
            }
            QuotCmd::Strata {
                n,
                total,
                curve,
                json,
            } => {
                if n == 0 {
                    return Err(CliError::Usage("--n must be at least 1".into()));
                }
                let c = load_curve(&curve)?;
                let rows = quot::strata_report(n, total, &c);
                if json {
                    for row in &rows {
                        println!("{}", serde_json::to_string(row).unwrap());
                    }
                } else {
                    println!("{:<16} {:>6} {:>6}  {:<20} cell_count", "comp", "codim", "fixed", "sym_counts");
                    for r in &rows {
                        println!(
                            "{:<16} {:>6} {:>6}  {:<20} {}",
                            format!("{:?}", r.comp),
                            r.codim_plus,
                            r.fixed_dim,
                            format!("{:?}", r.sym_counts),
                            r.cell_count
                        );
                    }
                }
                Ok(0)
            }
        },
        Cmd::Bun { sub } => match sub {
            BunCmd::Harder { n, curve, json } => {
                if n == 0 {
                    return Err(CliError::Usage("--n must be at least 1".into()));
                }
                let c = load_curve(&curve)?;
                let value = bun::harder_count(n, &c)
                    .map_err(|e| CliError::Data(e.to_string()))?;
                if json {
                    println!("{}", json!({"n": n, "count": format_rational(&value)}));
                } else {
                    println!("{}", format_rational(&value));
                }
                Ok(0)
            }
            BunCmd::Bd { n, g, trunc, json } => {
                if n == 0 {
                    return Err(CliError::Usage("--n must be at least 1".into()));
                }
                let top = ((n as i64) * (n as i64) - 1) * (g as i64 - 1) + g as i64;
                let w = Window::upper(top - trunc.max(1), top);
                let class = bun::bd_class(n, g, w)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                print_class(&class, json, Some("theorem"));
                Ok(0)
            }
            BunCmd::Conjecture { n, g, trunc, json } => {
                if n == 0 {
                    return Err(CliError::Usage("--n must be at least 1".into()));
                }
                let class = bun::conj_motive(n, g, Window::lower(0, trunc.max(1)))
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                print_class(&class, json, Some("conjectural"));
                Ok(0)
            }
            BunCmd::Convergence {
                n,
                d,
                d0,
                lmax,
                curve,
                json,
            } => {
                if n == 0 || d0 == 0 || lmax == 0 {
                    return Err(CliError::Usage(
                        "--n, --d0 and --lmax must be at least 1".into(),
                    ));
                }
                let c = load_curve(&curve)?;
                let data = bun::convergence_audit(n, d, d0, &c, lmax)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                let table = data.to_table();
                if json {
                    println!("{}", serde_json::to_string_pretty(&table).unwrap());
                } else {
                    println!("limit: {}", table.limit);
                    println!(
                        "{:>4} {:>6} {:>6}  {:<24} {:<24} valuation",
                        "l", "N", "rank", "ratio", "delta"
                    );
                    for r in &table.rows {
                        println!(
                            "{:>4} {:>6} {:>6}  {:<24} {:<24} {}",
                            r.l,
                            r.torsion_degree,
                            r.rank,
                            r.ratio,
                            r.delta,
                            r.valuation.clone().unwrap_or_else(|| "-".into())
                        );
                    }
                }
                Ok(0)
            }
        },
        Cmd::Hn { sub } => match sub {
            HnCmd::Enumerate { n, d, mu_max, json } => {
                if n == 0 {
                    return Err(CliError::Usage("--n must be at least 1".into()));
                }
                let bound = parse_rational(&mu_max)?;
                let types = hn::enumerate_hn(n, d, &bound);
                if json {
                    let blocks: Vec<_> = types.iter().map(|t| t.blocks().to_vec()).collect();
                    println!("{}", json!({"count": types.len(), "types": blocks}));
                } else {
                    for t in &types {
                        println!("{:?}", t.blocks());
                    }
                    println!("{} types", types.len());
                }
                Ok(0)
            }
            HnCmd::Audit {
                n,
                d,
                mu_max,
                g,
                json,
            } => {
                if n == 0 {
                    return Err(CliError::Usage("--n must be at least 1".into()));
                }
                let bound = parse_rational(&mu_max)?;
                let rows = hn::hn_audit(n, d, &bound, g);
                if json {
                    println!("{}", serde_json::to_string_pretty(&rows).unwrap());
                } else {
                    println!(
                        "{:<28} {:>6} {:>9} {:>8} {:>10}",
                        "blocks", "codim", "h1_upper", "defect", "residual"
                    );
                    for r in &rows {
                        println!(
                            "{:<28} {:>6} {:>9} {:>8} {:>10}",
                            format!("{:?}", r.blocks),
                            r.codim,
                            r.h1_upper,
                            r.defect,
                            r.key_inequality_residual
                        );
                    }
                }
                Ok(0)
            }
        },
        Cmd::Eval(args) => {
            let ast = expr::parse(&args.expr).map_err(|e| CliError::Usage(e.to_string()))?;
            if args.realize {
                let curve_path = args.curve.as_deref().ok_or_else(|| {
                    CliError::Usage("--realize needs --curve FILE".into())
                })?;
                let c = load_curve(curve_path)?;
                let series = expr::realize(&ast, &c, args.trunc)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                if args.json {
                    let coeffs: serde_json::Map<String, serde_json::Value> = series
                        .terms()
                        .map(|(e, r)| (e.to_string(), json!(format_rational(r))))
                        .collect();
                    println!(
                        "{}",
                        json!({"truncation": series.truncation(), "coeffs": coeffs})
                    );
                } else {
                    println!("{}", series);
                }
            } else {
                let genus = match (args.g, &args.curve) {
                    (Some(g), _) => Some(g),
                    (None, Some(path)) => Some(load_curve(path)?.genus()),
                    (None, None) => None,
                };
                let ctx = expr::EvalCtx::new(genus, -args.trunc, args.trunc);
                let class =
                    expr::eval(&ast, &ctx).map_err(|e| CliError::Usage(e.to_string()))?;
                print_class(&class, args.json, None);
            }
            Ok(0)
        }
        Cmd::Verify { sub } => match sub {
            VerifyCmd::All { grid, json } => {
                let grid = match grid.as_str() {
                    "small" => Grid::Small,
                    "full" => Grid::Full,
                    other => {
                        return Err(CliError::Usage(format!(
                            "unknown grid '{}'; use small or full",
                            other
                        )))
                    }
                };
                let verdict = verify::run_all(grid);
                if json {
                    println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
                } else {
                    for c in &verdict.checks {
                        if c.status == "pass" {
                            println!("PASS {}", c.name);
                        } else {
                            println!("FAIL {} {}", c.name, c.witnesses);
                        }
                    }
                    println!(
                        "{}/{} checks passed on the {} grid",
                        verdict.checks.iter().filter(|c| c.status == "pass").count(),
                        verdict.checks.len(),
                        verdict.grid
                    );
                }
                Ok(if verdict.all_pass { 0 } else { 1 })
            }
        },
    }
}

fn print_class(class: &bunmot_core::MotClass, json: bool, status: Option<&str>) {
    if json {
        let vd = class.vd_window();
        println!(
            "{}",
            json!({
                "class": class.canonical_text(),
                "terms": class.term_count(),
                "window": {"lo": vd.lo, "hi": vd.hi,
                            "zero_below": vd.zero_below, "zero_above": vd.zero_above},
                "status": status,
            })
        );
    } else {
        println!("{}", class.canonical_text());
        if let Some(s) = status {
            println!("status: {}", s);
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(s)
        .map_err(|e| CliError::Usage(format!("invalid rational '{}': {}", s, e)))
}
