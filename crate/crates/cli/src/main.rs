use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use conforma::lca::{emit_spec, ParamValue, SpecAlgebra};
use conforma::par::set_thread_cap;
use conforma::report::Report;
use conforma::suites::{
    annihilation_report, axioms_report, builtin_algebra, classify_suite, derivations_suite, module_solver_check,
    nilpotent_suite, ClassifyConfig, DerivationConfig, NilpotentConfig,
};
use conforma::cmodules::{hv_ab_module, module_failures};
use conforma::lca::HvAb;
use conforma::{Check, ConformalAlgebra, Exec, Poly, Q, Status};

#[derive(Parser)]
#[command(name = "conforma", version, about = "Exact verification for graded Lie conformal algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format on stdout.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Params {
    /// α of HV(α,β): a rational or `symbolic`.
    #[arg(long, default_value = "symbolic")]
    alpha: String,
    /// β of HV(α,β): a rational or `symbolic`.
    #[arg(long, default_value = "symbolic")]
    beta: String,
    /// Keep every parameter symbolic.
    #[arg(long)]
    symbolic: bool,
}

impl Params {
    fn values(&self) -> anyhow::Result<(ParamValue, ParamValue)> {
        if self.symbolic {
            return Ok((ParamValue::Symbolic, ParamValue::Symbolic));
        }
        Ok((param(&self.alpha)?, param(&self.beta)?))
    }

    fn rationals(&self) -> anyhow::Result<(Q, Q)> {
        match self.values()? {
            (ParamValue::Value(a), ParamValue::Value(b)) => Ok((a, b)),
            _ => bail!("this command needs rational --alpha and --beta"),
        }
    }
}

fn param(s: &str) -> anyhow::Result<ParamValue> {
    if s == "symbolic" {
        return Ok(ParamValue::Symbolic);
    }
    let q: Q = s.parse().with_context(|| format!("`{s}` is neither a rational nor `symbolic`"))?;
    Ok(ParamValue::Value(q))
}

fn range(s: &str) -> anyhow::Result<(i64, i64)> {
    let parsed = match s.split_once("..") {
        Some((a, b)) => (a.parse::<i64>(), b.parse::<i64>()),
        None => (s.parse::<i64>(), s.parse::<i64>()),
    };
    match parsed {
        (Ok(a), Ok(b)) if a <= b => Ok((a, b)),
        _ => bail!("`{s}` is not a range `lo..hi`"),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Skew-symmetry and Jacobi on a generator window.
    VerifyAxioms {
        /// Builtin algebra: vir, cur_sl2, vir_cur_sl2, hv, hv_ab, gc<N>.
        #[arg(long, conflicts_with = "spec")]
        algebra: Option<String>,
        /// Algebra spec file (JSON).
        #[arg(long)]
        spec: Option<PathBuf>,
        #[command(flatten)]
        params: Params,
        /// Highest grade of the window.
        #[arg(long, default_value_t = 4)]
        window: i64,
        /// Lowest grade of the window.
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        lo: i64,
    },
    /// Annihilation algebra of HV(α,β) against its closed-form table.
    Annihilation {
        #[arg(long, default_value = "hv_ab")]
        algebra: String,
        /// Highest grade.
        #[arg(long, default_value_t = 5)]
        window: i64,
        /// Highest mode (defaults to the window).
        #[arg(long)]
        modes: Option<i64>,
        /// Include the structure-constant table.
        #[arg(long)]
        table: bool,
    },
    /// Rank-one modules of HV(α,β).
    Modules {
        #[arg(long, default_value = "hv_ab")]
        algebra: String,
        #[command(flatten)]
        params: Params,
        /// Solve for all rank-one actions.
        #[arg(long)]
        solve: bool,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, default_value_t = 5)]
        window: i64,
    },
    /// Graded conformal derivations of HV(α,β) against the inner ones.
    Derivations {
        #[arg(long, default_value = "hv_ab")]
        algebra: String,
        #[command(flatten)]
        params: Params,
        /// Shifts `lo..hi`.
        #[arg(long, default_value = "-1..4", allow_hyphen_values = true)]
        shift: String,
        #[arg(long, default_value_t = 6)]
        window: i64,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Re-solve on this larger window and compare.
        #[arg(long)]
        growth: Option<i64>,
        /// Largest admissible fraction of skipped pairs.
        #[arg(long, default_value_t = 0.2)]
        max_skipped: f64,
        /// Random inner maps checked with symbolic α, β.
        #[arg(long, default_value_t = 0)]
        inner_samples: usize,
        /// Check the outer derivation of Cur(sl2) up to this witness degree.
        #[arg(long)]
        outer_bound: Option<u32>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Closed-form structure constants, exact inverse solves and the rescaling onto HV(α,β).
    Classify {
        #[arg(long, default_value_t = 4)]
        window: i64,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        forward_window: i64,
        #[arg(long, default_value_t = 3)]
        specializations: usize,
        /// Also solve with the constant term of f_(-1,2) unconstrained.
        #[arg(long)]
        drop_nonvanishing: bool,
        #[arg(long, default_value_t = 6)]
        replay_window: i64,
    },
    /// Local nilpotency of ad x on HV(α,β).
    Nilpotent {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// Highest grade of the test generators.
        #[arg(long, default_value_t = 6)]
        window: i64,
        #[arg(long, default_value_t = 12)]
        bound: usize,
        /// Highest top grade of the random non-nilpotent elements.
        #[arg(long, default_value_t = 3)]
        top: i64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Dump a builtin algebra as a spec file.
    EmitSpec {
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 4)]
        window: i64,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        lo: i64,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn hv_only(algebra: &str) -> anyhow::Result<()> {
    if algebra != "hv_ab" {
        bail!("only `hv_ab` is supported here, got `{algebra}`");
    }
    Ok(())
}

fn window_ok(window: i64) -> anyhow::Result<()> {
    if window < 1 {
        bail!("window must be at least 1");
    }
    Ok(())
}

/// Runs a command; `None` for commands that emit no report.
fn run(cli: &Cli, exec: Exec) -> anyhow::Result<Option<Report>> {
    Ok(Some(match &cli.command {
        Command::VerifyAxioms { algebra, spec, params, window, lo } => {
            let a: Box<dyn ConformalAlgebra> = match (algebra, spec) {
                (_, Some(path)) => {
                    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    Box::new(SpecAlgebra::from_json(&text)?)
                }
                (Some(name), None) => {
                    let (a, b) = params.values()?;
                    builtin_algebra(name, a, b)?
                }
                (None, None) => bail!("give --algebra or --spec"),
            };
            if window < lo {
                bail!("window {window} is below the lowest grade {lo}");
            }
            axioms_report(a.as_ref(), *lo, *window, exec)
        }
        Command::Annihilation { algebra, window, modes, table } => {
            hv_only(algebra)?;
            window_ok(*window)?;
            annihilation_report(modes.unwrap_or(*window), *window, *table, exec)?
        }
        Command::Modules { algebra, params, solve, degree, window } => {
            hv_only(algebra)?;
            window_ok(*window)?;
            let (a, b) = params.values()?;
            let hv = HvAb::new(a, b);
            let mut r = Report::new(
                "modules",
                json!({"alpha": hv.alpha().to_string(), "beta": hv.beta().to_string(), "solve": solve, "degree": degree, "window": [-1, window]}),
            );
            let m = hv_ab_module(Poly::param("a"), Poly::param("b"));
            let bad = module_failures(&hv, &m, &hv.window(-1, *window), exec)?;
            r.push(Check::new(
                "modules.axioms.hv_ab",
                Status::from_bool(bad.is_empty()),
                json!({"residual_samples": bad.iter().take(3).map(|(x, y, p)| json!([x.to_string(), y.to_string(), p.to_string()])).collect::<Vec<_>>()}),
            ));
            if *solve {
                let (a, b) = params.rationals()?;
                r.push(module_solver_check(&a, &b, *degree, *window, exec)?);
            }
            r
        }
        Command::Derivations {
            algebra,
            params,
            shift,
            window,
            degree,
            growth,
            max_skipped,
            inner_samples,
            outer_bound,
            seed,
        } => {
            hv_only(algebra)?;
            window_ok(*window)?;
            let cfg = DerivationConfig {
                specializations: vec![params.rationals()?],
                shifts: range(shift)?,
                window: *window,
                growth_window: *growth,
                degree: *degree,
                max_skipped: *max_skipped,
                inner_samples: *inner_samples,
                outer_bound: *outer_bound,
                seed: *seed,
            };
            derivations_suite(&cfg, exec)?
        }
        Command::Classify { window, degree, seed, forward_window, specializations, drop_nonvanishing, replay_window } => {
            window_ok(*window)?;
            let cfg = ClassifyConfig {
                window: *window,
                degree: *degree,
                forward_window: *forward_window,
                specializations: *specializations,
                drop_nonvanishing: *drop_nonvanishing,
                replay_window: *replay_window,
                seed: *seed,
            };
            classify_suite(&cfg, exec)?
        }
        Command::Nilpotent { count, degree, window, bound, top, seed } => {
            window_ok(*window)?;
            let cfg = NilpotentConfig { count: *count, degree: *degree, level: *window, bound: *bound, top: *top, seed: *seed };
            nilpotent_suite(&cfg, exec)?
        }
        Command::EmitSpec { algebra, params, window, lo, output } => {
            let (a, b) = params.values()?;
            let spec = emit_spec(builtin_algebra(algebra, a, b)?.as_ref(), *lo, *window)?.to_json();
            match output {
                Some(path) => std::fs::write(path, spec + "\n").with_context(|| format!("writing {}", path.display()))?,
                None => println!("{spec}"),
            }
            return Ok(None);
        }
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("CONFORMA_THREADS") {
        match v.parse::<usize>().map_err(|e| e.to_string()).and_then(|n| set_thread_cap(n).map_err(|e| e.to_string())) {
            Ok(()) => {}
            Err(e) => {
                eprintln!("error: CONFORMA_THREADS={v}: {e}");
                return ExitCode::from(2);
            }
        }
    }
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let start = Instant::now();
    let mut report = match run(&cli, exec) {
        Ok(Some(r)) => r,
        Ok(None) => return ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    report.wall_time_ms = start.elapsed().as_millis();
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, report.to_json_string() + "\n") {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    match cli.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json_string()),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
