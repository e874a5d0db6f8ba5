use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use striplab::config::{OutputFormat, RunConfig};
use striplab::curves;
use striplab::error::Error;
use striplab::exec::Exec;
use striplab::export;
use striplab::gfunc::{self, Method};
use striplab::intops::{self, OpKind, Scheme};
use striplab::opconv::{self, MatrixFunctionPlan, TransformPair};
use striplab::verify::{self, Suite, VerifyOptions};
use striplab::zerofind;

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "striplab",
    version,
    about = "G(z) = Gamma(z) eta(z): evaluation, operator ranges, curves, zeros"
)]
struct Cli {
    /// JSON config file (default: $STRIPLAB_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fourier,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Trapezoid,
    Sinc,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate G at one point, e.g. `--z 0.5+14.1347i`.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_enum, default_value = "fourier")]
        method: MethodArg,
    },
    /// Sample the curves C, C_sigma, C', C'_sigma on a uniform s grid.
    Curves {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Trace the field-of-values boundary of a discretised J.
    Fov {
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 360)]
        angles: usize,
        #[arg(long, value_enum, default_value = "plus")]
        kind: KindArg,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate, refine and check all zeros with 0 < t <= t_max.
    Zeros {
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Operator versus direct convolution, and Fourier inversion, on the built-in kernels.
    ConvolveDemo {
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Run a verification suite and write the JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Record wall-clock time per check (reports then differ between runs).
        #[arg(long)]
        timings: bool,
    },
}

enum Fail {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::Precondition(_) | Error::OnRealAxis(_) => {
                Fail::Usage(e.to_string())
            }
            _ => Fail::Numeric(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn load_config(path: Option<PathBuf>) -> Res<RunConfig> {
    let path = path.or_else(|| std::env::var_os("STRIPLAB_CONFIG").map(PathBuf::from));
    match path {
        Some(p) => Ok(RunConfig::load(&p)?),
        None => Ok(RunConfig::default()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Res<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn out_path(flag: Option<PathBuf>, cfg: &RunConfig) -> Option<PathBuf> {
    flag.or_else(|| cfg.output.path.as_ref().map(PathBuf::from))
}

fn format_of(flag: Option<FormatArg>, cfg: &RunConfig, default: OutputFormat) -> OutputFormat {
    match flag {
        Some(FormatArg::Json) => OutputFormat::Json,
        Some(FormatArg::Csv) => OutputFormat::Csv,
        None if cfg.output.path.is_some() || cfg.output.format != OutputFormat::default() => {
            cfg.output.format
        }
        None => default,
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn cmd_eval(z: &str, method: MethodArg, cfg: &RunConfig) -> Res<()> {
    let z: Complex64 = z
        .trim()
        .parse()
        .map_err(|_| Fail::Usage(format!("cannot parse {z:?} as a complex number a+bi")))?;
    let m = match method {
        MethodArg::Fourier => Method::Fourier,
        MethodArg::Direct => Method::Direct,
    };
    let v = gfunc::g(z, m, &cfg.quad)?;
    let line = json!({
        "z": z,
        "G": v.value,
        "abs_G": v.value.norm(),
        "method": m,
        "err": v.error,
    });
    println!("{line}");
    Ok(())
}

fn cmd_curves(
    sigma: f64,
    samples: Option<usize>,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
    cfg: &RunConfig,
    exec: Exec,
) -> Res<()> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Fail::Usage(format!("sigma = {sigma} is outside (0, 1)")));
    }
    let n = samples.unwrap_or(cfg.curves.s_samples);
    if n < 2 {
        return Err(Fail::Usage("--samples must be at least 2".into()));
    }
    let r = curves::curve_eval(sigma, &curves::s_grid(n), None, exec)?;
    eprintln!(
        "{}",
        json!({ "sigma": sigma, "sign_summary": r.sign_summary })
    );
    let text = match format_of(format, cfg, OutputFormat::Csv) {
        OutputFormat::Csv => export::curves_csv(&r)?,
        OutputFormat::Json => pretty(&r),
    };
    emit(&text, out_path(out, cfg).as_deref())
}

#[allow(clippy::too_many_arguments)]
fn cmd_fov(
    beta: Option<f64>,
    n: Option<usize>,
    angles: usize,
    kind: KindArg,
    scheme: Option<SchemeArg>,
    out: Option<PathBuf>,
    cfg: &RunConfig,
    exec: Exec,
) -> Res<()> {
    let beta = beta.unwrap_or(cfg.operator.beta);
    let n = n.unwrap_or(cfg.operator.n);
    let scheme = match scheme {
        Some(SchemeArg::Trapezoid) => Scheme::Trapezoid,
        Some(SchemeArg::Sinc) => Scheme::Sinc,
        None => cfg.operator.scheme,
    };
    let kind = match kind {
        KindArg::Plus => OpKind::Jplus,
        KindArg::Minus => OpKind::Jminus,
    };
    let op = intops::build_j(kind, scheme, beta, n)?;
    let fov = intops::operator_field_of_values(&op, angles, exec)?;
    eprintln!(
        "{}",
        json!({ "n": n, "beta": beta, "min_re": fov.min_re(), "max_re": fov.max_re() })
    );
    emit(&export::fov_csv(&fov)?, out_path(out, cfg).as_deref())
}

fn cmd_zeros(
    t_max: Option<f64>,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
    cfg: &RunConfig,
    exec: Exec,
) -> Res<()> {
    let t_max = t_max.unwrap_or(cfg.zeros.t_max);
    let tol = &cfg.zeros.tolerances;
    let s = zerofind::theorem510_suite(t_max, &cfg.quad, exec)?;
    let accepted = s
        .records
        .iter()
        .filter(|r| r.abs_g < tol.zero_abs && (r.z.sigma - 0.5).abs() < tol.on_line)
        .count();
    eprintln!(
        "{}",
        json!({
            "t_max": t_max,
            "winding_total": s.total_count,
            "records": s.records.len(),
            "accepted": accepted,
            "discrepancies": s.discrepancies,
        })
    );
    let text = match format_of(format, cfg, OutputFormat::Json) {
        OutputFormat::Csv => export::zeros_csv(&s.records)?,
        OutputFormat::Json => pretty(&s.records),
    };
    emit(&text, out_path(out, cfg).as_deref())
}

type Input = (&'static str, fn(f64) -> f64);

fn cmd_convolve_demo(n: usize, exec: Exec) -> Res<()> {
    let plan = MatrixFunctionPlan::new(intops::build_j(OpKind::Jplus, Scheme::Sinc, 1.0, n)?)?;
    let inputs: [Input; 3] = [
        ("one", |_| 1.0),
        ("t", |t| t),
        ("sin_pi_t", |t| (std::f64::consts::PI * t).sin()),
    ];
    let kernels = opconv::builtin_kernels();
    let mut cases = Vec::new();
    for k in &kernels {
        for i in &inputs {
            cases.push((k, *i));
        }
    }
    let conv = exec
        .map(
            &cases,
            |(k, (name, g))| -> striplab::error::Result<serde_json::Value> {
                let q = opconv::convolve_operator(k, g, &plan)?;
                let d = opconv::convolve_direct(k, g, &plan.op.grid, 1.0)?;
                Ok(json!({
                    "kernel": k.id,
                    "input": name,
                    "rel_l2": opconv::rel_l2(&q.values, &d, &plan.op.weights),
                }))
            },
        )
        .into_iter()
        .collect::<striplab::error::Result<Vec<_>>>()?;
    let mut inv_kernels = kernels.clone();
    inv_kernels.push(TransformPair::kappa_plus(0.5));
    let mut inv = Vec::new();
    for k in &inv_kernels {
        let r = opconv::fourier_invert(k, &plan)?;
        let exact: Vec<f64> = plan.op.grid.iter().map(|&t| k.k(t)).collect();
        inv.push(json!({
            "kernel": k.id,
            "rel_l2": opconv::rel_l2(&r.values, &exact, &plan.op.weights),
        }));
    }
    let doc = json!({
        "n": n,
        "condition_estimate": plan.condition_estimate,
        "reconstruction_residual": plan.reconstruction_residual,
        "ill_conditioned": plan.ill_conditioned(),
        "convolution": conv,
        "inversion": inv,
    });
    print!("{}", pretty(&doc));
    Ok(())
}

fn cmd_verify(
    suite: &str,
    report: Option<PathBuf>,
    timings: bool,
    cfg: &RunConfig,
    exec: Exec,
) -> Res<bool> {
    let suite = Suite::parse(suite)?;
    let opts = VerifyOptions {
        quad: cfg.quad,
        exec,
        timings,
    };
    let r = verify::run_suite(suite, &opts);
    for e in r.checks.values() {
        println!("{}", verify::summary_line(e));
    }
    println!(
        "{} pass, {} diagnostic, {} fail",
        r.tally.pass, r.tally.diagnostic, r.tally.fail
    );
    if let Some(p) = report {
        emit(&r.to_json(), Some(&p))?;
    }
    Ok(!r.has_failures())
}

fn run(cli: Cli) -> Res<u8> {
    let cfg = load_config(cli.config)?;
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match cli.cmd {
        Cmd::Eval { z, method } => cmd_eval(&z, method, &cfg)?,
        Cmd::Curves {
            sigma,
            samples,
            out,
            format,
        } => cmd_curves(sigma, samples, out, format, &cfg, exec)?,
        Cmd::Fov {
            beta,
            n,
            angles,
            kind,
            scheme,
            out,
        } => cmd_fov(beta, n, angles, kind, scheme, out, &cfg, exec)?,
        Cmd::Zeros { t_max, out, format } => cmd_zeros(t_max, out, format, &cfg, exec)?,
        Cmd::ConvolveDemo { n } => cmd_convolve_demo(n, exec)?,
        Cmd::Verify {
            suite,
            report,
            timings,
        } => {
            if !cmd_verify(&suite, report, timings, &cfg, exec)? {
                return Ok(EXIT_VERIFY);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Fail::Numeric(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(Fail::Io(m)) => {
            eprintln!("i/o error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
