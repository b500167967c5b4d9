//! `hspline` command line: bound constants, bound evaluation, scattered-data
//! interpolation, convergence experiments, and the verification suites.

mod json17;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hspline::bounds::{
    bound_constants, error_bound, sci_string_from_ln, BoundConstants, SpacingForm,
};
use hspline::harness::{self, verify, HarnessConfig, TargetSpec};
use hspline::{io, KernelParams};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "hspline",
    version,
    about = "Shifted surface spline interpolation and its exponential error-bound constants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every bound constant for a kernel/cube configuration as JSON.
    Constants(ConstantsArgs),
    /// Evaluate the certified error bound at a spacing.
    Bound(BoundArgs),
    /// Fit scattered data and evaluate the interpolant at given points.
    Interpolate(InterpolateArgs),
    /// Run a jittered-refinement convergence experiment.
    Convergence(ConvergenceArgs),
    /// Run a verification suite; exit status 0 iff it passes.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct KernelArgs {
    /// Space dimension (even, >= 2)
    #[arg(long)]
    n: usize,
    /// Kernel exponent lambda (even, >= 2)
    #[arg(long)]
    lambda: u32,
    /// Shift parameter c (> 0)
    #[arg(long)]
    c: f64,
    /// Fourier-transform constant l(lambda, n); bounds scale by its sqrt
    #[arg(long, default_value_t = 1.0)]
    l_const: f64,
}

impl KernelArgs {
    fn params(&self) -> anyhow::Result<KernelParams> {
        Ok(KernelParams::new(self.n, self.lambda, self.c)?.with_l_const(self.l_const)?)
    }
}

#[derive(Args)]
struct ConstantsArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    /// Cube-side floor b0
    #[arg(long)]
    b0: f64,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    kernel: KernelArgs,
    #[arg(long)]
    b0: f64,
    /// Subcube spacing delta (hypothesis: delta <= delta_0)
    #[arg(long, conflicts_with = "fill", required_unless_present = "fill")]
    delta: Option<f64>,
    /// Fill distance d (hypothesis: d <= d_0)
    #[arg(long)]
    fill: Option<f64>,
    /// Native-space semi-norm of the target function
    #[arg(long)]
    fnorm: f64,
    /// Evaluate even when the spacing hypothesis fails (recorded in output)
    #[arg(long)]
    force_hypothesis: bool,
}

#[derive(Args)]
struct InterpolateArgs {
    /// Interpolation sites CSV (header x1,...,xn)
    #[arg(long)]
    points: PathBuf,
    /// Data values CSV (single column `value`)
    #[arg(long)]
    values: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    lambda: u32,
    #[arg(long)]
    c: f64,
    /// Evaluation points CSV (header x1,...,xn)
    #[arg(long)]
    eval: PathBuf,
    /// Output CSV (evaluation coordinates plus `s` column)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConvergenceArgs {
    /// Experiment configuration JSON; flags below override file values
    #[arg(long)]
    config: PathBuf,
    /// Also write the report JSON here (levels.csv lands next to it)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    lambda: Option<u32>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    l_const: Option<f64>,
    #[arg(long)]
    b0: Option<f64>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    delta1: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    eval_resolution: Option<usize>,
    #[arg(long)]
    fill_resolution: Option<usize>,
    /// Target kind: native-combination | gaussian-bump | polynomial
    /// (built-in defaults: 12 centers / centered bump / coeffs 1,2,-1)
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    force_hypothesis: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// moments | polybound | lemma23 | all
    #[arg(long, value_parser = ["moments", "polybound", "lemma23", "all"])]
    suite: String,
    /// Verification grid preset (only `default` is defined)
    #[arg(long, default_value = "default", value_parser = ["default"])]
    grid: String,
}

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Constants(args) => {
            let params = args.kernel.params()?;
            let bc = bound_constants(&params, args.b0)?;
            print_json(&constants_json(&bc)?);
            Ok(0)
        }
        Command::Bound(args) => {
            let params = args.kernel.params()?;
            let bc = bound_constants(&params, args.b0)?;
            let (spacing, form) = match (args.delta, args.fill) {
                (Some(d), None) => (d, SpacingForm::Delta),
                (None, Some(d)) => (d, SpacingForm::Fill),
                _ => bail!("exactly one of --delta or --fill is required"),
            };
            let ev = error_bound(&bc, spacing, form, args.fnorm, args.force_hypothesis)?;
            let mut doc = serde_json::to_value(&ev)?;
            doc.as_object_mut().expect("object").insert(
                "bound_str".into(),
                Value::String(if ev.f_norm == 0.0 {
                    "0".into()
                } else {
                    sci_string_from_ln(ev.ln_bound)
                }),
            );
            let out = json!({
                "constants": constants_json(&bc)?,
                "evaluation": doc,
            });
            print_json(&out);
            Ok(0)
        }
        Command::Interpolate(args) => {
            let params = KernelParams::new(args.n, args.lambda, args.c)?;
            let points = io::read_points_csv(&args.points)
                .with_context(|| format!("reading {}", args.points.display()))?;
            if points.dim() != args.n {
                bail!(
                    "--n is {} but {} has dimension {}",
                    args.n,
                    args.points.display(),
                    points.dim()
                );
            }
            let values = io::read_values_csv(&args.values)
                .with_context(|| format!("reading {}", args.values.display()))?;
            let eval = io::read_points_csv(&args.eval)
                .with_context(|| format!("reading {}", args.eval.display()))?;
            let model = hspline::interpolator::fit(&params, &points, &values)?;
            let s = model.evaluate(&eval)?;
            io::write_eval_csv(&args.out, &eval, &s)
                .with_context(|| format!("writing {}", args.out.display()))?;
            let d = model.diagnostics().expect("fit always records diagnostics");
            print_json(&json!({
                "n_points": points.len(),
                "n_eval": eval.len(),
                "condition": d.condition,
                "max_node_residual": d.max_node_residual,
                "moment_residual": d.moment_residual,
                "out": args.out.display().to_string(),
            }));
            Ok(0)
        }
        Command::Convergence(args) => {
            let text = std::fs::read_to_string(&args.config)
                .with_context(|| format!("reading {}", args.config.display()))?;
            let mut config: HarnessConfig =
                serde_json::from_str(&text).context("parsing config JSON")?;
            apply_overrides(&mut config, &args)?;
            let report = harness::run_convergence(&config)?;
            let doc = serde_json::to_value(&report)?;
            print_json(&doc);
            let levels_path = match &args.out {
                Some(out) => {
                    std::fs::write(out, json17::to_string_pretty(&doc))
                        .with_context(|| format!("writing {}", out.display()))?;
                    out.parent()
                        .filter(|p| !p.as_os_str().is_empty())
                        .map(Path::to_path_buf)
                        .unwrap_or_else(|| PathBuf::from("."))
                        .join("levels.csv")
                }
                None => PathBuf::from("levels.csv"),
            };
            io::write_levels_csv(&levels_path, &report.levels)
                .with_context(|| format!("writing {}", levels_path.display()))?;
            Ok(0)
        }
        Command::Verify(args) => {
            debug_assert_eq!(args.grid, "default");
            let suites = match args.suite.as_str() {
                "moments" => vec![verify::moments()?],
                "polybound" => vec![verify::polybound(200, 2024)?],
                "lemma23" => vec![verify::lemma23(40)?],
                "all" => verify::all()?,
                other => bail!("unknown suite {other}"),
            };
            let pass = suites.iter().all(|s| s.pass);
            print_json(&json!({ "pass": pass, "suites": suites }));
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn apply_overrides(config: &mut HarnessConfig, args: &ConvergenceArgs) -> anyhow::Result<()> {
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(lambda) = args.lambda {
        config.lambda = lambda;
    }
    if let Some(c) = args.c {
        config.c = c;
    }
    if let Some(l) = args.l_const {
        config.l_const = l;
    }
    if let Some(b0) = args.b0 {
        config.b0 = b0;
    }
    if let Some(levels) = args.levels {
        config.levels = levels;
    }
    if let Some(d1) = args.delta1 {
        config.delta1 = d1;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(r) = args.eval_resolution {
        config.eval_resolution = r;
    }
    if let Some(r) = args.fill_resolution {
        config.fill_resolution = r;
    }
    if args.force_hypothesis {
        config.force_hypothesis = true;
    }
    if let Some(kind) = &args.target {
        config.target = match kind.as_str() {
            "native-combination" => TargetSpec::NativeCombination { centers: 12 },
            "gaussian-bump" => TargetSpec::GaussianBump {
                center: None,
                width: None,
            },
            "polynomial" => TargetSpec::Polynomial {
                coeffs: vec![1.0, 2.0, -1.0],
            },
            other => bail!("unknown target kind {other}"),
        };
    }
    Ok(())
}

/// Constants document: the raw log-space fields plus human-readable
/// scientific-notation strings rendered from log space.
fn constants_json(bc: &BoundConstants) -> anyhow::Result<Value> {
    let mut doc = serde_json::to_value(bc)?;
    let obj = doc.as_object_mut().expect("constants serialize to object");
    obj.insert("m".into(), json!(bc.params.order()));
    obj.insert(
        "readable".into(),
        json!({
            "b": sci_string_from_ln(bc.ln_b_const),
            "c_const": sci_string_from_ln(bc.ln_c_const),
            "delta_0": sci_string_from_ln(bc.ln_delta_0),
            "d_0": sci_string_from_ln(bc.ln_d0),
            "ln_inv_omega": sci_string_from_ln(bc.ln_ln_inv_omega),
            "ln_inv_omega_prime": sci_string_from_ln(bc.ln_ln_inv_omega_prime),
            "amplitude": sci_string_from_ln(bc.ln_amplitude),
            "omega_note": "omega = exp(-ln_inv_omega) rounds to exactly 1.0 in floating point; only its log is ever used",
        }),
    );
    Ok(doc)
}

fn print_json(value: &Value) {
    print!("{}", json17::to_string_pretty(value));
}
