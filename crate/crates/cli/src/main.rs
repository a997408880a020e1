use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qtunnel::bounce::Regime;
use qtunnel::spectral::Method;
use qtunnel::{Asymmetry, ModelParams};
use qtunnel_cli::config::Settings;
use qtunnel_cli::error::{CliError, CliResult};
use qtunnel_cli::eval::{evaluate, EvalOptions, Row};
use qtunnel_cli::figures::{run_figure, FIGURES};
use qtunnel_cli::format::{g12, opt};
use qtunnel_cli::output::{emit, metadata};
use qtunnel_cli::selftest;
use qtunnel_cli::sweep::{run_sweep, Scale, SweepParam, SweepSpec};

#[derive(Parser)]
#[command(name = "qtunnel", version, about = "Dissipative tunneling rates with Ohmic position and momentum baths")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a single parameter point and print a report.
    #[command(allow_negative_numbers = true)]
    Solve(Common),
    /// Sweep one parameter and write a CSV.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        common: Common,
        /// gamma, tau_p, sigma or cutoff
        #[arg(long)]
        param: SweepParam,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// linear or log
        #[arg(long, default_value = "linear")]
        scale: Scale,
        /// Hold tau_p = ratio * gamma while sweeping gamma.
        #[arg(long)]
        ratio: Option<f64>,
    },
    /// Write the datasets of a figure into a directory.
    Figure {
        /// One of: fig1b, fig3b, fig3c, fig3d, fig4b, appC-K, appD-a, appD-b, appE-b, appE-d
        name: String,
        /// Output directory (default: the figure name).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run built-in closed-form checks.
    Selftest {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    v0: Option<f64>,
    /// Asymmetry ratio sigma/V0, or `inf` for the sharp wall.
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "tau-p")]
    tau_p: Option<f64>,
    #[arg(long)]
    cutoff: Option<f64>,
    /// Also compute the fluctuation prefactor.
    #[arg(long)]
    prefactor: bool,
    /// Use direct quadrature for the kernel sums.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

fn method(oracle: bool) -> Method {
    if oracle {
        Method::Quadrature
    } else {
        Method::Expansion
    }
}

fn load(config: &Option<PathBuf>) -> CliResult<Settings> {
    config.as_deref().map_or(Ok(Settings::default()), Settings::load)
}

impl Common {
    fn settings(&self) -> CliResult<Settings> {
        let sigma = match &self.sigma {
            Some(s) => Some(
                s.parse::<Asymmetry>()
                    .map_err(|e| CliError::Usage(e.to_string()))?,
            ),
            None => None,
        };
        let flags = Settings {
            v0: self.v0,
            sigma,
            gamma: self.gamma,
            tau_p: self.tau_p,
            cutoff: self.cutoff,
            ..Settings::default()
        };
        Ok(load(&self.config)?.overlay(&flags))
    }

    fn resolve(&self) -> CliResult<(ModelParams, EvalOptions)> {
        let s = self.settings()?;
        let opts = EvalOptions {
            quadrature: s.quadrature()?,
            method: method(self.oracle),
            prefactor: self.prefactor,
        };
        Ok((s.model()?, opts))
    }
}

fn solve(c: &Common) -> CliResult<()> {
    let (p, opts) = c.resolve()?;
    let row = evaluate(None, &p, &opts);
    if row.failed() {
        return Err(CliError::Numerical(row.error));
    }
    let mut fields: Vec<(&str, String)> = vec![
        ("regime", Regime::of(&p).label().to_string()),
        ("xi_b", opt(row.xi_b)),
        ("s_cl", opt(row.s_cl)),
        ("s_cl_bare", opt(row.s_cl_bare)),
        ("enhancement", opt(row.enhancement)),
        ("ln_enhancement", opt(row.enhancement.map(f64::ln))),
        ("x_esc", opt(row.x_esc)),
        ("delta_e", opt(row.delta_e)),
    ];
    if opts.prefactor {
        fields.extend([("ln_r", opt(row.ln_r)), ("lambda1", opt(row.lambda1)), ("k_ratio", opt(row.k_ratio))]);
    }
    let mut out = io::stdout().lock();
    let io_err = |e: io::Error| CliError::Unwritable(e.to_string());
    for (k, v) in &fields {
        let v = if v.is_empty() { "n/a" } else { v };
        writeln!(out, "{k:<15} {v}").map_err(io_err)?;
    }
    for w in &row.warnings {
        writeln!(out, "{:<15} {w}", "warning").map_err(io_err)?;
    }
    if let Some(path) = &c.out {
        let meta = metadata("solve", &p, &opts.quadrature, opts.method);
        emit(Some(path), &meta, std::slice::from_ref(&row), opts.prefactor)?;
    }
    Ok(())
}

fn warning_summary(rows: &[Row]) {
    let failed = rows.iter().filter(|r| r.failed()).count();
    if failed > 0 {
        eprintln!("warning: {failed} of {} points failed; see the error column", rows.len());
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for w in rows.iter().flat_map(|r| &r.warnings) {
        *counts.entry(w.as_str()).or_default() += 1;
    }
    for (w, n) in counts {
        eprintln!("warning ({n} points): {w}");
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Cmd::Solve(c) => solve(&c),
        Cmd::Sweep {
            common,
            param,
            from,
            to,
            points,
            scale,
            ratio,
        } => {
            let (base, opts) = common.resolve()?;
            let spec = SweepSpec {
                param,
                from,
                to,
                points,
                scale,
                ratio,
                base,
            };
            let rows = run_sweep(&spec, &opts, common.jobs)?;
            let mut meta = metadata("sweep", &base, &opts.quadrature, opts.method);
            meta.insert(
                3,
                format!(
                    "sweep: {param:?} from {} to {} points={points} scale={scale:?}{}",
                    g12(from),
                    g12(to),
                    ratio.map_or(String::new(), |r| format!(" tau_p={}*gamma", g12(r)))
                ),
            );
            emit(common.out.as_deref(), &meta, &rows, opts.prefactor)?;
            warning_summary(&rows);
            if rows.iter().all(Row::failed) {
                return Err(CliError::Numerical("every sweep point failed".into()));
            }
            Ok(())
        }
        Cmd::Figure {
            name,
            out,
            config,
            oracle,
            jobs,
        } => {
            if !FIGURES.contains(&name.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown figure '{name}'; valid names: {}",
                    FIGURES.join(", ")
                )));
            }
            let opts = EvalOptions {
                quadrature: load(&config)?.quadrature()?,
                method: method(oracle),
                prefactor: false,
            };
            let dir = out.unwrap_or_else(|| PathBuf::from(&name));
            for path in run_figure(&name, &dir, &opts, jobs)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Cmd::Selftest { config } => selftest::run(&mut io::stdout().lock(), &load(&config)?.quadrature()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qtunnel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
