//! Batch front end for the `sinc-core` library: data ingestion, estimation,
//! bandwidth selection, MISE tables, superkernel comparisons and bounds.
//!
//! Every subcommand writes CSV (header row, comma separator, floats with 17
//! significant digits). Free-text context such as diagnostics is emitted as
//! `#` comment lines, which [`ingest`] skips.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sinc_core::bandwidth::{ecf_rule_with, normal_rule, solve_opt_bandwidth_known_cf, BandwidthSelection, EcfRuleOptions};
use sinc_core::bounds::{bound_bandlimited, bound_exponential, bound_smooth, bound_variation, BoundReport};
use sinc_core::charfn::{roughness, weighted_exponential_energy, CharModel};
use sinc_core::ecf::Sample;
use sinc_core::estimator::{correct_to_density, estimate_mode, evaluate_on_grid, SincEstimate};
use sinc_core::mise::{
    conventional_mise, mc_ise_oracle, minimize_mise_on_grid, minimize_mise_over_h, sinc_mise,
    superkernel_comparison_for, KernelSpectrum, MiseBreakdown,
};

/// Default sample sizes of `mise-table`.
pub const DEFAULT_N_LIST: [u64; 5] = [40, 45, 50, 100, 1000];

/// Failures, grouped by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("data: {0}")]
    Data(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) | CliError::Io(_) => 3,
            CliError::Infeasible(_) => 4,
        }
    }

    /// `error: <kind>: <message>` on one line.
    pub fn one_line(&self) -> String {
        format!("error: {self}").replace(['\n', '\r'], " ")
    }
}

impl From<sinc_core::Error> for CliError {
    fn from(e: sinc_core::Error) -> Self {
        use sinc_core::Error as E;
        match e {
            E::Domain(m) | E::Unsupported(m) => CliError::Usage(m),
            E::Degenerate(m) => CliError::Data(m),
            E::Infeasible(m) => CliError::Infeasible(m),
            E::OutOfValidity(m) => CliError::Infeasible(format!("out of validity region: {m}")),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "sincdens", version, about = "Sinc-kernel density estimation and exact MISE analysis")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the estimate (or its r-th derivative) on a grid.
    Estimate(EstimateArgs),
    /// Locate the mode of the estimate.
    Mode(ModeArgs),
    /// Select a bandwidth from data or from a known characteristic function.
    Bandwidth(BandwidthArgs),
    /// Minimised sinc and conventional MISE for normal or Cauchy targets.
    MiseTable(MiseTableArgs),
    /// Sinc versus trapezoidal superkernel on a power-tail spectrum.
    CompareSuperkernel(CompareArgs),
    /// Upper bounds on the sinc MISE.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Normal,
    Ecf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Normal,
    Cauchy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Smooth,
    Variation,
    Exponential,
    Bandlimited,
}

/// `lo:hi:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, points] = parts[..] else {
            return Err(format!("expected lo:hi:points, got '{s}'"));
        };
        let lo: f64 = lo.trim().parse().map_err(|_| format!("bad grid lower end '{lo}'"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| format!("bad grid upper end '{hi}'"))?;
        let points: usize = points.trim().parse().map_err(|_| format!("bad grid point count '{points}'"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("grid range {lo}:{hi} is empty or inverted"));
        }
        if points < 2 {
            return Err(format!("grid needs at least 2 points, got {points}"));
        }
        Ok(GridSpec { lo, hi, points })
    }
}

/// A characteristic-function model written as `kind:params`, e.g.
/// `normal:1`, `cauchy:2`, `uniform-power:3`, `power-tail:a:c:m`, `fejer:T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec(pub CharModel);

impl std::str::FromStr for ModelSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default().trim().to_ascii_lowercase();
        let params = parts
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad model parameter '{p}'")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let model = match (kind.as_str(), params.as_slice()) {
            ("normal", []) => CharModel::normal(1.0),
            ("normal", [s]) => CharModel::normal(*s),
            ("cauchy", []) => CharModel::cauchy(1.0),
            ("cauchy", [s]) => CharModel::cauchy(*s),
            ("uniform-power", [k]) if k.fract() == 0.0 && *k >= 1.0 => CharModel::uniform_power(*k as u32),
            ("power-tail", [a, c, m]) => CharModel::power_tail(*a, *c, *m),
            ("fejer", [t]) => CharModel::fejer(*t),
            _ => {
                return Err(format!(
                    "unknown model '{s}'; expected normal[:σ], cauchy[:s], uniform-power:k, power-tail:a:c:m or fejer:T"
                ))
            }
        };
        model.map(ModelSpec).map_err(|e| e.to_string())
    }
}

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {v}"))
    }
}

fn nonnegative_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a nonnegative number, got {v}"))
    }
}

fn positive_u64(s: &str) -> std::result::Result<u64, String> {
    let v: u64 = s.parse().map_err(|_| format!("'{s}' is not a positive integer"))?;
    if v == 0 {
        Err("expected a positive integer, got 0".into())
    } else {
        Ok(v)
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Bandwidth; chosen by --rule when omitted.
    #[arg(long, value_parser = positive_f64)]
    pub h: Option<f64>,
    #[arg(long, value_enum, default_value = "normal")]
    pub rule: RuleArg,
    /// Derivative order.
    #[arg(long, default_value_t = 0)]
    pub r: u32,
    /// Evaluation grid; defaults to the sample range padded by 3h, 512 points.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// Clip negative values and renormalise (density only).
    #[arg(long)]
    pub correct: bool,
}

#[derive(Debug, Args)]
pub struct ModeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = positive_f64)]
    pub h: Option<f64>,
    #[arg(long, value_enum, default_value = "normal")]
    pub rule: RuleArg,
}

#[derive(Debug, Args)]
pub struct BandwidthArgs {
    /// Data file; selects the --rule.
    #[arg(long, conflicts_with = "model")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ecf")]
    pub rule: RuleArg,
    /// Known characteristic function; solves for the exact optimum at --n.
    #[arg(long, requires = "n")]
    pub model: Option<ModelSpec>,
    #[arg(long, value_parser = positive_u64)]
    pub n: Option<u64>,
    /// Upper end of the ECF search interval (default √n).
    #[arg(long = "t-max", value_parser = positive_f64)]
    pub t_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MiseTableArgs {
    /// Target family, as a positional argument or via --family.
    #[arg(value_enum, required_unless_present = "family")]
    pub family_name: Option<Family>,
    #[arg(long, value_enum, conflicts_with = "family_name")]
    pub family: Option<Family>,
    /// Sample sizes (repeatable); defaults to 40, 45, 50, 100, 1000.
    #[arg(long, value_parser = positive_u64)]
    pub n: Vec<u64>,
    /// Spacing of the bandwidth grid on [0.01, 10]; 0 minimises continuously.
    #[arg(long = "h-step", default_value_t = 0.01, value_parser = nonnegative_f64)]
    pub h_step: f64,
    /// Adds a Monte Carlo ISE column at the sinc optimum (requires --seed).
    #[arg(long, value_parser = positive_u64, requires = "seed")]
    pub reps: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Tail exponent of |φ(t)|² = a/|t|^m.
    #[arg(long)]
    pub m: f64,
    #[arg(long, default_value_t = 0.75)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    pub c: f64,
    #[arg(long, default_value_t = 100, value_parser = positive_u64)]
    pub n: u64,
    /// Bandwidths (repeatable); defaults to 20 points inside (0, Δ/c).
    #[arg(long, value_parser = positive_f64, conflicts_with = "grid")]
    pub h: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    #[arg(long, default_value_t = 0)]
    pub r: u32,
    #[arg(long)]
    pub m: Option<u32>,
    /// R(f^(r+m)); computed from --model when omitted.
    #[arg(long = "R", value_parser = positive_f64)]
    pub roughness: Option<f64>,
    /// Total variation of f^(m).
    #[arg(long = "V", value_parser = positive_f64)]
    pub variation: Option<f64>,
    /// Weighted exponential energy; computed from --model when omitted.
    #[arg(long = "C", value_parser = positive_f64)]
    pub c: Option<f64>,
    #[arg(long, value_parser = positive_f64)]
    pub rho: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long = "T", value_parser = positive_f64)]
    pub t: Option<f64>,
    /// Sample sizes (repeatable).
    #[arg(long, value_parser = positive_u64, required = true)]
    pub n: Vec<u64>,
    /// Bandwidth; the bound's recommended h when omitted.
    #[arg(long, value_parser = positive_f64)]
    pub h: Option<f64>,
    #[arg(long)]
    pub model: Option<ModelSpec>,
    /// Report the looser (ln n)^(1/α)/n form of the exponential bound.
    #[arg(long)]
    pub weakened: bool,
}

/// Reads one number per line; blank lines and `#` comments are skipped.
pub fn ingest(path: &Path) -> Result<Sample> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| CliError::Data(format!("{}: line {}: cannot parse '{line}'", path.display(), i + 1)))?;
        if !v.is_finite() {
            return Err(CliError::Data(format!("{}: line {}: value is not finite", path.display(), i + 1)));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::Data(format!("{}: no data", path.display())));
    }
    Ok(Sample::new(values)?)
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_row(out: &mut dyn Write, cells: &[String]) -> Result<()> {
    writeln!(out, "{}", cells.join(","))?;
    Ok(())
}

fn write_comment(out: &mut dyn Write, text: impl Display) -> Result<()> {
    for line in text.to_string().lines() {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

fn select(sample: &Sample, rule: RuleArg, t_max: Option<f64>) -> Result<BandwidthSelection> {
    Ok(match rule {
        RuleArg::Normal => normal_rule(sample)?,
        RuleArg::Ecf => ecf_rule_with(sample, EcfRuleOptions { t_max, step: None })?,
    })
}

fn bandwidth_for(sample: &Sample, h: Option<f64>, rule: RuleArg) -> Result<f64> {
    match h {
        Some(h) => Ok(h),
        None => Ok(select(sample, rule, None)?.chosen_h),
    }
}

pub fn run_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Result<()> {
    let sample = ingest(&args.input)?;
    let h = bandwidth_for(&sample, args.h, args.rule)?;
    if args.correct && args.r != 0 {
        return Err(CliError::Usage("--correct applies to the density (r = 0) only".into()));
    }
    let grid = args.grid.unwrap_or(GridSpec {
        lo: sample.min() - 3.0 * h,
        hi: sample.max() + 3.0 * h,
        points: 512,
    });
    let est = SincEstimate::new(&sample, h, args.r)?;
    let mut values = evaluate_on_grid(&est, grid.lo, grid.hi, grid.points)?;
    if args.correct {
        values = correct_to_density(&values)?;
    }
    let column = if args.r == 0 { "f".to_string() } else { format!("d{}f", args.r) };
    write_row(out, &["x".into(), column])?;
    for (x, y) in values.x_values.iter().zip(&values.y_values) {
        write_row(out, &[fmt_f64(*x), fmt_f64(*y)])?;
    }
    Ok(())
}

pub fn run_mode(args: &ModeArgs, out: &mut dyn Write) -> Result<()> {
    let sample = ingest(&args.input)?;
    let h = bandwidth_for(&sample, args.h, args.rule)?;
    let mode = estimate_mode(&sample, h)?;
    write_row(out, &["mode".into(), "h".into()])?;
    write_row(out, &[fmt_f64(mode), fmt_f64(h)])
}

pub fn run_bandwidth(args: &BandwidthArgs, out: &mut dyn Write) -> Result<()> {
    let selection = match (&args.input, &args.model) {
        (Some(path), None) => select(&ingest(path)?, args.rule, args.t_max)?,
        (None, Some(ModelSpec(model))) => solve_opt_bandwidth_known_cf(model, args.n.expect("clap requires --n"))?,
        _ => return Err(CliError::Usage("give exactly one of --input or --model".into())),
    };
    write_comment(out, format_args!("rule: {:?}", selection.rule))?;
    write_comment(out, format_args!("chosen_h: {}", fmt_f64(selection.chosen_h)))?;
    write_comment(out, format_args!("diagnostics: {}", selection.diagnostics))?;
    write_row(out, &["delta".into(), "h".into(), "mise_offset".into(), "chosen".into()])?;
    for c in &selection.candidates {
        let chosen = (1.0 / c.delta - selection.chosen_h).abs() <= 1e-15 * selection.chosen_h;
        write_row(
            out,
            &[fmt_f64(c.delta), fmt_f64(1.0 / c.delta), fmt_f64(c.plug_in_mise_offset), chosen.to_string()],
        )?;
    }
    Ok(())
}

/// One row of a MISE table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub n: u64,
    pub sinc: MiseBreakdown,
    pub conventional: MiseBreakdown,
    pub ratio: f64,
    /// Monte Carlo ISE mean and standard error at the sinc optimum.
    pub mc: Option<(f64, Option<f64>)>,
}

/// Bandwidth range of [`run_mise_table`].
pub const TABLE_H_RANGE: (f64, f64) = (0.01, 10.0);

/// Minimised sinc and conventional (same-family kernel) MISE for each `n`.
///
/// `h_step > 0` searches the grid `0.01, 0.01 + h_step, …, 10`; `h_step = 0`
/// minimises continuously over `[1e-3, 10]`.
pub fn run_mise_table(family: Family, n_list: &[u64], h_step: f64, mc: Option<(u64, u64)>) -> Result<Vec<TableRow>> {
    let (model, kernel) = match family {
        Family::Normal => (CharModel::normal(1.0)?, KernelSpectrum::NormalKernel),
        Family::Cauchy => (CharModel::cauchy(1.0)?, KernelSpectrum::CauchyKernel),
    };
    let minimise = |f: &dyn Fn(f64) -> sinc_core::Result<MiseBreakdown>| {
        if h_step > 0.0 {
            minimize_mise_on_grid(f, TABLE_H_RANGE.0, TABLE_H_RANGE.1, h_step)
        } else {
            minimize_mise_over_h(f, 1e-3, TABLE_H_RANGE.1)
        }
    };
    n_list
        .iter()
        .map(|&n| {
            let (_, sinc) = minimise(&|h| sinc_mise(&model, n, h, 0))?;
            let (_, conventional) = minimise(&|h| conventional_mise(&kernel, &model, n, h))?;
            let mc = match mc {
                Some((reps, seed)) => {
                    let r = mc_ise_oracle(&model, n, sinc.h, 0, reps as usize, seed)?;
                    Some((r.mean_ise, r.std_error))
                }
                None => None,
            };
            Ok(TableRow {
                n,
                ratio: sinc.total / conventional.total,
                sinc,
                conventional,
                mc,
            })
        })
        .collect()
}

pub fn run_mise_table_cmd(args: &MiseTableArgs, out: &mut dyn Write) -> Result<()> {
    let n_list = if args.n.is_empty() { DEFAULT_N_LIST.to_vec() } else { args.n.clone() };
    let mc = args.reps.map(|reps| (reps, args.seed.expect("clap requires --seed")));
    let family = args.family.or(args.family_name).expect("clap requires a family");
    let rows = run_mise_table(family, &n_list, args.h_step, mc)?;
    let conventional = match family {
        Family::Normal => "normal",
        Family::Cauchy => "cauchy",
    };
    let mut header: Vec<String> = ["n", "sinc", conventional, "ratio", "h_sinc", "h_conventional"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if mc.is_some() {
        header.extend(["mc_ise".into(), "mc_std_error".into()]);
    }
    write_row(out, &header)?;
    for row in rows {
        let mut cells = vec![
            row.n.to_string(),
            fmt_f64(row.sinc.total),
            fmt_f64(row.conventional.total),
            fmt_f64(row.ratio),
            fmt_f64(row.sinc.h),
            fmt_f64(row.conventional.h),
        ];
        if let Some((mean, se)) = row.mc {
            cells.push(fmt_f64(mean));
            cells.push(se.map(fmt_f64).unwrap_or_else(|| "NA".into()));
        }
        write_row(out, &cells)?;
    }
    Ok(())
}

pub fn run_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<()> {
    let model = CharModel::power_tail(args.a, args.c, args.m)?;
    let limit = args.delta / args.c;
    let hs: Vec<f64> = if !args.h.is_empty() {
        args.h.clone()
    } else {
        let g = args.grid.unwrap_or(GridSpec {
            lo: limit / 21.0,
            hi: 20.0 * limit / 21.0,
            points: 20,
        });
        (0..g.points)
            .map(|i| g.lo + (g.hi - g.lo) * i as f64 / (g.points - 1) as f64)
            .collect()
    };
    let header = [
        "h",
        "sinc_bias_sq",
        "trapezoid_bias_sq",
        "sinc_variance",
        "trapezoid_variance",
        "variance_gap",
        "bias_ratio",
    ];
    write_row(out, &header.map(String::from))?;
    for h in hs {
        let cmp = superkernel_comparison_for(&model, args.delta, h, args.n)?;
        write_row(
            out,
            &[
                fmt_f64(h),
                fmt_f64(cmp.sinc.bias_sq),
                fmt_f64(cmp.trapezoid.bias_sq),
                fmt_f64(cmp.sinc.variance),
                fmt_f64(cmp.trapezoid.variance),
                fmt_f64(cmp.variance_gap),
                fmt_f64(cmp.bias_ratio()),
            ],
        )?;
    }
    Ok(())
}

fn need<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Usage(format!("this regime needs {what}")))
}

/// Computes the bound of `args.regime` at one sample size.
pub fn bound_for(args: &BoundsArgs, n: u64) -> Result<BoundReport> {
    let model = args.model.map(|m| m.0);
    let report = match args.regime {
        RegimeArg::Smooth => {
            let m = need(args.m, "--m")?;
            let rf = match (args.roughness, model) {
                (Some(rf), _) => rf,
                (None, Some(model)) => roughness(&model, args.r + m)?.value,
                (None, None) => return Err(CliError::Usage("smooth bounds need --R or --model".into())),
            };
            bound_smooth(args.r, m, rf, n, args.h)?
        }
        RegimeArg::Variation => {
            if args.r != 0 {
                return Err(CliError::Usage("the bounded-variation bound is for r = 0".into()));
            }
            bound_variation(need(args.m, "--m")?, need(args.variation, "--V")?, n, args.h)?
        }
        RegimeArg::Exponential => {
            let rho = need(args.rho, "--rho")?;
            let c = match (args.c, model) {
                (Some(c), _) => c,
                (None, Some(model)) => weighted_exponential_energy(&model, rho, args.alpha, args.r)?.value,
                (None, None) => return Err(CliError::Usage("exponential bounds need --C or --model".into())),
            };
            bound_exponential(args.r, c, rho, args.alpha, n, args.h, args.weakened)?
        }
        RegimeArg::Bandlimited => {
            let t = need(args.t, "--T")?;
            bound_bandlimited(args.r, t, n, args.h.unwrap_or(1.0 / t))?
        }
    };
    Ok(report)
}

pub fn run_bounds(args: &BoundsArgs, out: &mut dyn Write) -> Result<()> {
    write_row(out, &["regime", "r", "n", "h_used", "optimized", "bound"].map(String::from))?;
    for &n in &args.n {
        let rep = bound_for(args, n)?;
        write_row(
            out,
            &[
                format!("{:?}", rep.regime).to_lowercase(),
                rep.r.to_string(),
                n.to_string(),
                fmt_f64(rep.h_used),
                rep.optimized.to_string(),
                fmt_f64(rep.bound),
            ],
        )?;
    }
    Ok(())
}

/// Runs the configured subcommand, writing to `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    match &config.command {
        Command::Estimate(a) => run_estimate(a, out),
        Command::Mode(a) => run_mode(a, out),
        Command::Bandwidth(a) => run_bandwidth(a, out),
        Command::MiseTable(a) => run_mise_table_cmd(a, out),
        Command::CompareSuperkernel(a) => run_compare(a, out),
        Command::Bounds(a) => run_bounds(a, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn ingest_examples() {
        let f = temp_file("0\n");
        assert_eq!(ingest(f.path()).unwrap().values(), &[0.0]);
        let f = temp_file("# header\n1.5\n-2e0\n");
        assert_eq!(ingest(f.path()).unwrap().values(), &[1.5, -2.0]);
        let f = temp_file("1\n\n2\nabc\n");
        let err = ingest(f.path()).unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");
        let f = temp_file("1\n2\nabc\n");
        assert!(ingest(f.path()).unwrap_err().to_string().contains("line 3"));
        assert_eq!(ingest(temp_file("# only\n\n").path()).unwrap_err().exit_code(), 3);
        assert_eq!(ingest(Path::new("/nonexistent/file")).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn grid_and_model_parsing() {
        assert_eq!(
            "-4:4:801".parse::<GridSpec>().unwrap(),
            GridSpec {
                lo: -4.0,
                hi: 4.0,
                points: 801
            }
        );
        assert!("4:-4:10".parse::<GridSpec>().is_err());
        assert!("0:1".parse::<GridSpec>().is_err());
        assert_eq!("normal:2".parse::<ModelSpec>().unwrap().0, CharModel::normal(2.0).unwrap());
        assert_eq!(
            "power-tail:1:1:4".parse::<ModelSpec>().unwrap().0,
            CharModel::power_tail(1.0, 1.0, 4.0).unwrap()
        );
        assert!("uniform-power:2.5".parse::<ModelSpec>().is_err());
        assert!("normal:-1".parse::<ModelSpec>().is_err());
    }

    #[test]
    fn table_examples() {
        let rows = run_mise_table(Family::Normal, &[40, 100], 0.01, None).unwrap();
        // one unit in the last printed digit
        assert!((rows[1].sinc.total - 0.004699).abs() < 1e-6);
        assert!((rows[1].conventional.total - 0.005411).abs() < 1e-6);
        assert!((rows[1].ratio - 0.868).abs() < 1e-3);
        assert!(rows[0].ratio > 1.0);
        let rows = run_mise_table(Family::Cauchy, &[1000], 0.01, None).unwrap();
        assert!((rows[0].sinc.total - 0.0011).abs() < 1e-4);
        assert!((rows[0].conventional.total - 0.002126).abs() < 1e-6);
        assert!((rows[0].ratio - 0.517).abs() < 1e-3);
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn error_mapping() {
        assert_eq!(CliError::from(sinc_core::Error::Domain("x".into())).exit_code(), 2);
        assert_eq!(CliError::from(sinc_core::Error::Degenerate("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(sinc_core::Error::Infeasible("x".into())).exit_code(), 4);
        assert_eq!(CliError::from(sinc_core::Error::OutOfValidity("x".into())).exit_code(), 4);
        assert!(!CliError::Usage("a\nb".into()).one_line().contains('\n'));
    }
}
