//! The `riesz` command line: kernel evaluation, optimisation runs and
//! analysis tables driven by JSON experiment files.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, unreadable or
//! malformed spec files), 2 for domain and numerical errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::json;

use crate::analysis::{
    aligned_circle_distance, default_level_grids, delta_level_surface, empirical_cdf_distance, energy_scaling_estimate,
    marching_squares, model_coordinates, DensityModel, Grid,
};
use crate::error::Error;
use crate::geometry::Curve;
use crate::io::{fmt15, Table};
use crate::kernel::{expansion_terms, HalfPlanePoint, KernelConfig, KernelSpec, KernelVariant};
use crate::optimize::{minimize_energy, OptimizeOptions};

/// Environment variable that overrides the seed of every spec file.
pub const SEED_VAR: &str = "RIESZ_SEED";

#[derive(Debug, Parser)]
#[command(name = "riesz", version, about = "Reduced Riesz kernels and minimal-energy points on curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a kernel value with 15 significant digits.
    Eval {
        #[arg(long, value_parser = parse_variant)]
        variant: KernelVariant,
        #[arg(long)]
        s: Option<f64>,
        /// Translation for the `ksr` kernel.
        #[arg(long = "R")]
        r: Option<f64>,
        /// First point as `x,y`.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        z: (f64, f64),
        /// Second point as `x,y`.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        w: (f64, f64),
    },
    /// Minimise the discrete energy; writes a points CSV and a report JSON.
    Minimize { spec: PathBuf },
    /// Contours of `K(·, w)` at fixed levels.
    Levelset { spec: PathBuf },
    /// Sign table of the three-point quantity over an `(x, 1/γ, s)` grid.
    DeltaSurface { spec: PathBuf },
    /// Normalised minimal energies over doubling `N` with extrapolation.
    Scaling { spec: PathBuf },
    /// Distance between an optimised configuration and a limit density.
    Density { spec: PathBuf },
    /// Large-translation expansion of the kernel and its residual.
    Expansion { spec: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn parse_variant(s: &str) -> std::result::Result<KernelVariant, String> {
    serde_json::from_value(json!(s)).map_err(|_| format!("unknown kernel variant {s:?}"))
}

fn parse_point(s: &str) -> std::result::Result<(f64, f64), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((num(x)?, num(y)?))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            1
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(command: Command) -> Outcome<()> {
    match command {
        Command::Eval { variant, s, r, z, w } => {
            let spec = KernelSpec::new(variant, s, r)?;
            let z = HalfPlanePoint::new(z.0, z.1)?;
            let w = HalfPlanePoint::new(w.0, w.1)?;
            println!("{}", fmt15(spec.eval(z, w)?));
            Ok(())
        }
        Command::Minimize { spec } => minimize(&load(&spec)?),
        Command::Levelset { spec } => levelset(&load(&spec)?),
        Command::DeltaSurface { spec } => delta_surface(&load(&spec)?),
        Command::Scaling { spec } => scaling(&load(&spec)?),
        Command::Density { spec } => density(&load(&spec)?),
        Command::Expansion { spec } => expansion(&load(&spec)?),
    }
}

fn load<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Spec options with the seed taken from the environment when set.
fn options(opts: &OptimizeOptions) -> Outcome<OptimizeOptions> {
    let mut opts = *opts;
    if let Ok(seed) = std::env::var(SEED_VAR) {
        opts.seed = seed.trim().parse().map_err(|e| Failure::Usage(format!("{SEED_VAR}={seed:?}: {e}")))?;
    }
    opts.validate()?;
    Ok(opts)
}

fn curve(c: &Curve) -> Outcome<Curve> {
    c.validate()?;
    Ok(c.clone())
}

/// Writes every output or none: files already written are removed when a
/// later write fails.
fn write_all(outputs: &[(PathBuf, String)]) -> Outcome<()> {
    for (k, (path, text)) in outputs.iter().enumerate() {
        if let Err(e) = std::fs::write(path, text) {
            for (done, _) in &outputs[..k] {
                let _ = std::fs::remove_file(done);
            }
            return Err(Error::Io(format!("{}: {e}", path.display())).into());
        }
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum Sweep {
    /// Move the curve right by each amount.
    Translate(Vec<f64>),
    /// Replace the kernel exponent.
    S(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MinimizeSpec {
    kernel: KernelConfig,
    curve: Curve,
    n: usize,
    #[serde(default)]
    options: OptimizeOptions,
    #[serde(default)]
    sweep: Option<Sweep>,
    /// Points CSV; with a sweep it must contain `{i}`, replaced by the run index.
    points: PathBuf,
    report: PathBuf,
}

/// Sweep label and value, kernel, curve.
type Run<'a> = (Option<(&'a str, f64)>, KernelSpec, Curve);

fn minimize(spec: &MinimizeSpec) -> Outcome<()> {
    let opts = options(&spec.options)?;
    let base_kernel = KernelSpec::try_from(spec.kernel)?;
    let base_curve = curve(&spec.curve)?;
    let runs: Vec<Run> = match &spec.sweep {
        None => vec![(None, base_kernel, base_curve)],
        Some(Sweep::Translate(shifts)) => shifts
            .iter()
            .map(|&dx| Ok((Some(("translate", dx)), base_kernel, base_curve.translated(dx)?)))
            .collect::<std::result::Result<_, Error>>()?,
        Some(Sweep::S(values)) => values
            .iter()
            .map(|&s| Ok((Some(("s", s)), KernelSpec::new(spec.kernel.variant, Some(s), spec.kernel.r)?, base_curve.clone())))
            .collect::<std::result::Result<_, Error>>()?,
    };
    let template = spec.points.to_string_lossy().to_string();
    if spec.sweep.is_some() && !template.contains("{i}") {
        return Err(Failure::Usage("a sweep needs `{i}` in the points path".into()));
    }
    let mut outputs = Vec::new();
    let mut reports = Vec::new();
    for (i, (param, kernel, curve)) in runs.iter().enumerate() {
        let (config, report) = minimize_energy(kernel, curve, spec.n, &opts)?;
        let mut table = Table::new(&["index", "t", "x", "y"]);
        for (k, (t, p)) in config.params().iter().zip(config.points()).enumerate() {
            table.push(&[k as f64, *t, p.x(), p.y()]);
        }
        outputs.push((PathBuf::from(template.replace("{i}", &i.to_string())), table.to_csv()?));
        let mut entry = serde_json::to_value(report).map_err(|e| Error::Io(e.to_string()))?;
        entry["kernel"] = serde_json::to_value(kernel).map_err(|e| Error::Io(e.to_string()))?;
        if let Some((name, value)) = param {
            entry[*name] = json!(value);
        }
        println!(
            "run {i}: energy {} separation {} iterations {}",
            fmt15(report.energy),
            fmt15(report.separation),
            report.iterations
        );
        reports.push(entry);
    }
    let report = if spec.sweep.is_some() { json!(reports) } else { reports.remove(0) };
    let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
    outputs.push((spec.report.clone(), text + "\n"));
    write_all(&outputs)
}

fn default_grid() -> Grid {
    Grid { x_min: 0.0, x_max: 3.0, y_min: -1.5, y_max: 1.5, nx: 241, ny: 241 }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelsetSpec {
    kernel: KernelConfig,
    w: HalfPlanePoint,
    levels: Vec<f64>,
    #[serde(default = "default_grid")]
    grid: Grid,
    output: PathBuf,
}

fn levelset(spec: &LevelsetSpec) -> Outcome<()> {
    let kernel = KernelSpec::try_from(spec.kernel)?;
    let segments = marching_squares(&spec.grid, &spec.levels, |x, y| match kernel.eval(HalfPlanePoint::new(x, y)?, spec.w) {
        Err(Error::Singularity(_)) => Ok(f64::NAN),
        other => other,
    })?;
    let mut table = Table::new(&["level", "x0", "y0", "x1", "y1"]);
    for s in &segments {
        table.push(&[s.level, s.x0, s.y0, s.x1, s.y1]);
    }
    println!("{} segments", segments.len());
    write_all(&[(spec.output.clone(), table.to_csv()?)])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaSurfaceSpec {
    #[serde(default)]
    x_grid: Option<Vec<f64>>,
    #[serde(default)]
    inv_gamma_grid: Option<Vec<f64>>,
    #[serde(default)]
    s_grid: Option<Vec<f64>>,
    output: PathBuf,
}

fn delta_surface(spec: &DeltaSurfaceSpec) -> Outcome<()> {
    let (x, ig, s) = default_level_grids();
    let surface = delta_level_surface(
        spec.x_grid.as_deref().unwrap_or(&x),
        spec.inv_gamma_grid.as_deref().unwrap_or(&ig),
        spec.s_grid.as_deref().unwrap_or(&s),
    )?;
    let mut table = Table::new(&["x", "inv_gamma", "s", "delta", "sign"]);
    for c in &surface.cells {
        table.push(&[c.x, c.inv_gamma, c.s, c.delta, c.sign as f64]);
    }
    match surface.max_positive_s {
        Some(s) => println!("max_positive_s {}", fmt15(s)),
        None => println!("max_positive_s none"),
    }
    write_all(&[(spec.output.clone(), table.to_csv()?)])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalingSpec {
    kernel: KernelConfig,
    curve: Curve,
    n_list: Vec<usize>,
    #[serde(default)]
    options: OptimizeOptions,
    output: PathBuf,
}

fn scaling(spec: &ScalingSpec) -> Outcome<()> {
    let opts = options(&spec.options)?;
    let kernel = KernelSpec::try_from(spec.kernel)?;
    let estimate = energy_scaling_estimate(&kernel, &curve(&spec.curve)?, &spec.n_list, &opts)?;
    let mut table = Table::new(&[
        "n",
        "energy",
        "normalized",
        "extrapolated",
        "separation",
        "separation_times_n",
        "iterations",
        "converged",
    ]);
    for r in &estimate.rows {
        table.push_raw(vec![
            r.n.to_string(),
            fmt15(r.energy),
            fmt15(r.normalized),
            r.extrapolated.map(fmt15).unwrap_or_default(),
            fmt15(r.separation),
            fmt15(r.separation_times_n),
            r.iterations.to_string(),
            r.converged.to_string(),
        ]);
    }
    println!("limit {}", fmt15(estimate.limit));
    write_all(&[(spec.output.clone(), table.to_csv()?)])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensitySpec {
    kernel: KernelConfig,
    curve: Curve,
    n: usize,
    model: DensityModel,
    /// Report the distance after the best rotation (uniform circle only).
    #[serde(default)]
    align_rotation: bool,
    #[serde(default)]
    options: OptimizeOptions,
    output: PathBuf,
}

fn density(spec: &DensitySpec) -> Outcome<()> {
    let opts = options(&spec.options)?;
    let kernel = KernelSpec::try_from(spec.kernel)?;
    let (config, _) = minimize_energy(&kernel, &curve(&spec.curve)?, spec.n, &opts)?;
    let d = if spec.align_rotation {
        if spec.model != DensityModel::UniformCircle {
            return Err(Failure::Usage("align_rotation applies to the uniform_circle model only".into()));
        }
        aligned_circle_distance(&config)?
    } else {
        empirical_cdf_distance(&config, &spec.model)?
    };
    let mut rows: Vec<(f64, f64)> = config.params().iter().copied().zip(model_coordinates(&config, &spec.model)?).collect();
    rows.sort_by(|a, b| a.1.total_cmp(&b.1));
    let n = rows.len() as f64;
    let mut table = Table::new(&["index", "t", "coordinate", "model_cdf", "empirical_lower", "empirical_upper"]);
    for (i, (t, u)) in rows.into_iter().enumerate() {
        let i = i as f64;
        table.push(&[i, t, u, spec.model.cdf(u)?, i / n, (i + 1.0) / n]);
    }
    println!("D {}", fmt15(d));
    write_all(&[(spec.output.clone(), table.to_csv()?)])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpansionSpec {
    s: f64,
    z: HalfPlanePoint,
    w: HalfPlanePoint,
    radii: Vec<f64>,
    output: PathBuf,
}

fn expansion(spec: &ExpansionSpec) -> Outcome<()> {
    let kernel = KernelSpec::ks(spec.s)?;
    let mut table =
        Table::new(&["R", "kernel", "leading", "infinity_term", "drift_term", "residual", "residual_ratio"]);
    let mut prev: Option<f64> = None;
    for &r in &spec.radii {
        let value = kernel.eval(spec.z.shifted(r)?, spec.w.shifted(r)?)?;
        let terms = expansion_terms(spec.s, spec.z, spec.w, r)?;
        let residual = 2.0 * r * (value - terms.sum()).abs();
        let ratio = prev.map(|p| residual / p);
        table.push_raw(vec![
            fmt15(r),
            fmt15(value),
            fmt15(terms.leading),
            fmt15(terms.infinity_term),
            fmt15(terms.drift_term),
            fmt15(residual),
            ratio.map(fmt15).unwrap_or_default(),
        ]);
        prev = Some(residual);
    }
    write_all(&[(spec.output.clone(), table.to_csv()?)])
}

/// Flushes stdout; used by the binary before exiting.
pub fn flush() {
    let _ = std::io::stdout().flush();
}
