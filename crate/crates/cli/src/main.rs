//! `herglotz`: evaluate, check and invert Herglotz-Nevanlinna and
//! Cauchy-type functions on the poly cut-plane.
//!
//! Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 usage or evaluation error.

mod config;
mod descriptor;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use herglotz::analysis::{
    characterize, check_positivity, check_symmetry, nondependence_test, stieltjes_cauchy_type,
    stieltjes_classic, InversionReport, TestFunction, Verdict,
};
use herglotz::complex_fmt::{format_complex, parse_complex_list};
use herglotz::functions::FunctionDescriptor;
use herglotz::kernels::{kernel_k, kernel_symmetry_residual, poisson};
use herglotz::sampling::DEFAULT_SEED;
use herglotz::tables::{table1, table2};
use herglotz::CutPlanePoint;
use serde::Serialize;
use serde_json::{json, Map, Value};

use config::CliConfig;
use descriptor::{parse_function, parse_measure, relaxed_json, with_measure, RunManifest};

const ERROR_EXIT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "herglotz", version, about)]
struct Cli {
    /// JSON file with `quad`, `characterize` and `stieltjes` sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized sampling (default is fixed and echoed in reports).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report destination (a directory for `reproduce-tables`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a function at one point.
    Eval {
        #[command(flatten)]
        func: FnArgs,
        /// Comma-separated `a+bi` coordinates, e.g. `4i,-1+2i`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Absolute quadrature tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a sampled check; the exit code is the verdict.
    Check {
        #[command(flatten)]
        func: FnArgs,
        which: Which,
        /// Residual tolerance of the symmetry and non-dependence checks.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Stieltjes inversion with a convergence table in CSV.
    Invert {
        #[command(flatten)]
        func: FnArgs,
        /// `cauchy<n>d`, `gauss<n>d` or a JSON test function.
        #[arg(long)]
        phi: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Required agreement of the last two extrapolants.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Regenerate the catalogue formula table and the condition matrix.
    ReproduceTables,
    /// Kernel, Poisson kernel and kernel symmetry residual at `(z, t)`.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Comma-separated reals.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
}

#[derive(clap::Args, Debug)]
struct FnArgs {
    /// `catalogue:f2`, `cauchy:lebesgue2`, `herglotz:{a:1,b:[2],mu:zero}`,
    /// inline JSON or a descriptor file. Plain `cauchy` takes `--measure`.
    #[arg(long = "fn")]
    function: String,
    /// Measure for a `cauchy`/`herglotz` descriptor: built-in name, inline
    /// JSON or file.
    #[arg(long)]
    measure: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Which {
    Symmetry,
    Nondep,
    Positivity,
    Characterize,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Classic,
    Alternating,
}

impl FnArgs {
    fn descriptor(&self) -> Result<FunctionDescriptor> {
        match (&self.measure, self.function.trim()) {
            (Some(m), "cauchy") => Ok(FunctionDescriptor::Cauchy {
                measure: parse_measure(m)?,
            }),
            (Some(m), f) => with_measure(parse_function(f)?, parse_measure(m)?),
            (None, f) => parse_function(f),
        }
    }

    fn inputs(&self, d: &FunctionDescriptor) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("fn".into(), json!(self.function));
        if let Some(measure) = &self.measure {
            m.insert("measure".into(), json!(measure));
        }
        m.insert("descriptor".into(), json!(d));
        m
    }
}

fn manifest(
    cli: &Cli,
    command: &str,
    inputs: Map<String, Value>,
    config: Value,
    seed: Option<u64>,
) -> RunManifest {
    RunManifest {
        command: command.into(),
        inputs,
        config,
        seed,
        output: cli.out.as_ref().map(|p| p.display().to_string()),
        version: env!("CARGO_PKG_VERSION"),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text).with_context(|| format!("cannot write `{}`", p.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn parse_point(text: &str) -> Result<CutPlanePoint> {
    let coords = parse_complex_list(text).with_context(|| format!("bad --point `{text}`"))?;
    CutPlanePoint::new(coords).with_context(|| format!("bad --point `{text}`"))
}

fn cmd_eval(cli: &Cli, func: &FnArgs, point: &str, tol: Option<f64>, cfg: CliConfig) -> Result<u8> {
    let mut quad = cfg.quad;
    if let Some(t) = tol {
        quad.abs_tol = t;
    }
    let d = func.descriptor()?;
    let f = d.build(&quad)?;
    let z = parse_point(point)?;
    let e = f.evaluate(&z)?;
    println!("value      {}", format_complex(e.value));
    println!("error      {:e}", e.error);
    println!("component  {}", z.signature());
    if let Some(out) = &cli.out {
        let mut inputs = func.inputs(&d);
        inputs.insert("point".into(), json!(point));
        let record = json!({
            "manifest": manifest(cli, "eval", inputs, json!({ "quad": quad }), None),
            "point": z,
            "value": format_complex(e.value),
            "error": e.error,
            "component": z.signature().to_string(),
        });
        write_out(Some(out), &to_json(&record)?)?;
    }
    Ok(0)
}

fn cmd_check(
    cli: &Cli,
    func: &FnArgs,
    which: Which,
    tol: Option<f64>,
    mut cfg: CliConfig,
) -> Result<u8> {
    let samples = &mut cfg.characterize.samples;
    if let Some(seed) = cli.seed {
        samples.seed = seed;
    }
    if let Some(t) = tol {
        samples.symmetry_tol = t;
        samples.nondependence_tol = t;
    }
    let d = func.descriptor()?;
    let f = d.build(&cfg.quad)?;
    let (verdict, report, summary) = match which {
        Which::Characterize => {
            let r = characterize(f.as_ref(), &cfg.characterize)?;
            let d: Vec<String> = r.d.iter().map(|x| x.to_string()).collect();
            let summary = format!(
                "conditions (i) {:?} (ii) {:?} (iii) {:?}, d = ({})",
                r.positivity.verdict,
                r.symmetry.verdict,
                r.nondependence.verdict,
                d.join(", ")
            );
            (r.verdict, serde_json::to_value(&r)?, summary)
        }
        other => {
            let s = &cfg.characterize.samples;
            let r = match other {
                Which::Symmetry => check_symmetry(f.as_ref(), s)?,
                Which::Nondep => nondependence_test(f.as_ref(), s)?,
                _ => check_positivity(f.as_ref(), s)?,
            };
            let summary = match r.witnesses.first() {
                Some(w) => format!("max residual {:e}, witness {}", r.max_residual, w.point),
                None => format!("max residual {:e}", r.max_residual),
            };
            (r.verdict, serde_json::to_value(&r)?, summary)
        }
    };
    let seed = cfg.characterize.samples.seed;
    let record = json!({
        "manifest": manifest(
            cli,
            "check",
            {
                let mut m = func.inputs(&d);
                m.insert("which".into(), json!(which));
                m
            },
            json!({ "quad": cfg.quad, "characterize": cfg.characterize }),
            Some(seed),
        ),
        "verdict": verdict,
        "report": report,
    });
    write_out(cli.out.as_deref(), &to_json(&record)?)?;
    eprintln!("{}: {summary}", verdict_word(verdict));
    Ok(verdict.exit_code() as u8)
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn parse_phi(text: &str) -> Result<TestFunction> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(&relaxed_json(text)).context("cannot parse --phi");
    }
    Ok(TestFunction::from_name(text)?)
}

fn inversion_csv(r: &InversionReport, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str("y,raw_integral,extrapolant\n");
    for row in &r.rows {
        let ex = row.extrapolant.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", row.y, row.raw_integral, ex);
    }
    out
}

fn cmd_invert(
    cli: &Cli,
    func: &FnArgs,
    phi_text: &str,
    mode: Mode,
    tol: Option<f64>,
    mut cfg: CliConfig,
) -> Result<u8> {
    if let Some(t) = tol {
        cfg.stieltjes.limits.tol = t;
    }
    let d = func.descriptor()?;
    let f = d.build(&cfg.quad)?;
    let phi = parse_phi(phi_text)?;
    let r = match mode {
        Mode::Classic => stieltjes_classic(f.as_ref(), &phi, &cfg.stieltjes)?,
        Mode::Alternating => stieltjes_cauchy_type(f.as_ref(), &phi, &cfg.stieltjes)?,
    };
    let mut inputs = func.inputs(&d);
    inputs.insert("phi".into(), json!(phi));
    inputs.insert("mode".into(), json!(mode));
    let m = manifest(
        cli,
        "invert",
        inputs,
        json!({ "quad": cfg.quad, "stieltjes": cfg.stieltjes }),
        None,
    );
    let order = r
        .order
        .map(|p| p.to_string())
        .unwrap_or_else(|| "none".into());
    let summary = vec![
        format!("estimate {}", r.estimate),
        format!("verdict {}", verdict_word(r.verdict)),
        format!("delta {:e}", r.delta),
        format!("order {order}"),
        format!("radius {:e}", r.radius),
        format!("max_imag {:e}", r.max_imag),
        format!("max_quadrature_error {:e}", r.max_quadrature_error),
    ];
    let mut header = vec![format!("manifest {}", serde_json::to_string(&m)?)];
    header.extend(summary.iter().cloned());
    let csv = inversion_csv(&r, &header);
    match &cli.out {
        Some(p) => {
            write_out(Some(p), &csv)?;
            for line in &summary {
                println!("{line}");
            }
        }
        None => print!("{csv}"),
    }
    Ok(r.verdict.exit_code() as u8)
}

fn cmd_reproduce_tables(cli: &Cli, cfg: CliConfig) -> Result<u8> {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let mut characterize_cfg = cfg.characterize.clone();
    characterize_cfg.samples.seed = seed;
    let t1 = table1(seed, &cfg.quad)?;
    let t2 = table2(&characterize_cfg)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("cannot create `{}`", dir.display()))?;
    let m = manifest(
        cli,
        "reproduce-tables",
        Map::new(),
        json!({ "quad": cfg.quad, "characterize": characterize_cfg }),
        Some(seed),
    );
    write_out(
        Some(&dir.join("table1.json")),
        &to_json(&json!({ "manifest": m, "table": t1 }))?,
    )?;
    write_out(
        Some(&dir.join("table2.json")),
        &to_json(&json!({ "manifest": m, "table": t2 }))?,
    )?;
    println!("{}", t1.to_markdown());
    println!("{}", t2.to_markdown());
    let mismatches = t2.mismatches();
    if mismatches.is_empty() {
        return Ok(0);
    }
    for (id, k, computed, expected) in mismatches {
        let names = ["(i)", "(ii)", "(iii)"];
        eprintln!(
            "{id} {}: computed {computed:?}, expected {expected}",
            names[k]
        );
    }
    Ok(1)
}

fn cmd_kernel(point: &str, t: &str) -> Result<u8> {
    let z = parse_point(point)?;
    let t: Vec<f64> = t
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("bad --t entry `{s}`"))
        })
        .collect::<Result<_>>()?;
    if t.len() != z.dim() {
        bail!(
            "--t has {} entries for a point of dimension {}",
            t.len(),
            z.dim()
        );
    }
    println!("kernel     {}", format_complex(kernel_k(&z, &t)?));
    if z.is_upper() {
        println!("poisson    {}", poisson(&z, &t)?);
    }
    println!("symmetry   {:e}", kernel_symmetry_residual(&z, &t)?);
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    let cfg = CliConfig::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Eval { func, point, tol } => cmd_eval(cli, func, point, *tol, cfg),
        Command::Check { func, which, tol } => cmd_check(cli, func, *which, *tol, cfg),
        Command::Invert {
            func,
            phi,
            mode,
            tol,
        } => cmd_invert(cli, func, phi, *mode, *tol, cfg),
        Command::ReproduceTables => cmd_reproduce_tables(cli, cfg),
        Command::Kernel { point, t } => cmd_kernel(point, t),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ERROR_EXIT } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR_EXIT)
        }
    }
}
