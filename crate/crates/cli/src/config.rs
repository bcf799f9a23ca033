//! Command-line and config-file parsing into a validated [`RunConfig`].

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use serde::{Deserialize, Deserializer};
use su11_core::{Complex64, Model, Spin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Commutation relations.
    Check,
    /// Casimir operator against its closed form.
    Casimir,
    /// Momentum shift under powers of the phase exponential.
    Transfo,
    /// Two coupled oscillators reduced to a free particle.
    Reduce,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Casimir => "casimir",
            Command::Transfo => "transfo",
            Command::Reduce => "reduce",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepSelector {
    Mp,
    Hp,
    Villain,
    Saf,
    Perelomov,
    Bose1,
    Bose2,
    #[value(name = "two_mode", alias = "two-mode")]
    #[serde(alias = "two-mode")]
    TwoMode,
    All,
}

impl RepSelector {
    pub fn name(self) -> &'static str {
        match self {
            RepSelector::Mp => "mp",
            RepSelector::Hp => "hp",
            RepSelector::Villain => "villain",
            RepSelector::Saf => "saf",
            RepSelector::Perelomov => "perelomov",
            RepSelector::Bose1 => "bose1",
            RepSelector::Bose2 => "bose2",
            RepSelector::TwoMode => "two_mode",
            RepSelector::All => "all",
        }
    }

    /// Every concrete representation, in report order.
    pub const CONCRETE: [RepSelector; 8] = [
        RepSelector::Mp,
        RepSelector::Hp,
        RepSelector::Villain,
        RepSelector::Saf,
        RepSelector::Perelomov,
        RepSelector::Bose1,
        RepSelector::Bose2,
        RepSelector::TwoMode,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityChoice {
    #[value(name = "as_printed", alias = "as-printed")]
    #[serde(alias = "as-printed")]
    AsPrinted,
    Corrected,
    Both,
}

impl FidelityChoice {
    pub fn name(self) -> &'static str {
        match self {
            FidelityChoice::AsPrinted => "as_printed",
            FidelityChoice::Corrected => "corrected",
            FidelityChoice::Both => "both",
        }
    }
}

/// Parses `"a"`, `"bi"`, `"a+bi"` or `"a-bi"`; exponents such as `1e-3` are
/// not mistaken for the sign between the parts.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("expected a complex number like 0.5, 2i or 0.5+1i, got {text:?}");
    if s.is_empty() {
        return Err(bad());
    }
    let number = |t: &str| -> Result<f64, String> {
        let v = match t {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => t.parse::<f64>().map_err(|_| bad())?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(number(&s)?, 0.0));
    };
    // The split point is the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    match split {
        Some(j) => Ok(Complex64::new(number(&body[..j])?, number(&body[j..])?)),
        None => Ok(Complex64::new(0.0, number(body)?)),
    }
}

fn deserialize_complex<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Option::<Raw>::deserialize(d)? {
        None => Ok(None),
        Some(Raw::Number(x)) => Ok(Some(Complex64::new(x, 0.0))),
        Some(Raw::Text(t)) => parse_complex(&t).map(Some).map_err(serde::de::Error::custom),
    }
}

/// Flags shared by every command. All optional so a config file can fill
/// the gaps; the same names (without dashes) are accepted as JSON keys.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// Representation to check.
    #[arg(long, value_enum)]
    pub rep: Option<RepSelector>,
    /// Bargmann index of the single-boson realization.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Spin S (integer or half-integer).
    #[arg(long, allow_hyphen_values = true)]
    pub spin: Option<f64>,
    /// Complex P0 as "a", "a+bi" or "a-bi".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "deserialize_complex")]
    pub p0: Option<Complex64>,
    /// Perelomov parameter (positive).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Fock dimension, Circle grid size, or per-mode dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Second-mode dimension for two-mode checks (defaults to --dim).
    #[arg(long)]
    #[serde(alias = "dim_b")]
    pub dim_b: Option<usize>,
    /// Lowest momentum of the Circle grid.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(alias = "p_min")]
    pub p_min: Option<f64>,
    /// Basis states excluded at each truncated edge.
    #[arg(long)]
    pub margin: Option<usize>,
    /// Residual tolerance (default depends on the check).
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Oscillator energy of the coupled-oscillator model.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Self-interaction; 2*phi1 + phi2 must be nonzero.
    #[arg(long, allow_hyphen_values = true)]
    pub phi1: Option<f64>,
    /// Cross-interaction between the two modes.
    #[arg(long, allow_hyphen_values = true)]
    pub phi2: Option<f64>,
    /// Number of pair levels compared by `reduce`.
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Power of the phase exponential in `transfo`.
    #[arg(long)]
    pub beta: Option<u32>,
    /// Power of the momentum in `transfo` (1, 2 or 3).
    #[arg(long)]
    pub n: Option<u32>,
    /// Output format (default text).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Spin realizations as typeset, sign-corrected, or both (default corrected).
    #[arg(long, value_enum)]
    pub fidelity: Option<FidelityChoice>,
}

impl Options {
    /// Field-wise `self` over `base`.
    fn over(self, base: Options) -> Options {
        Options {
            rep: self.rep.or(base.rep),
            k: self.k.or(base.k),
            spin: self.spin.or(base.spin),
            p0: self.p0.or(base.p0),
            lambda: self.lambda.or(base.lambda),
            dim: self.dim.or(base.dim),
            dim_b: self.dim_b.or(base.dim_b),
            p_min: self.p_min.or(base.p_min),
            margin: self.margin.or(base.margin),
            tol: self.tol.or(base.tol),
            epsilon: self.epsilon.or(base.epsilon),
            phi1: self.phi1.or(base.phi1),
            phi2: self.phi2.or(base.phi2),
            pairs: self.pairs.or(base.pairs),
            beta: self.beta.or(base.beta),
            n: self.n.or(base.n),
            format: self.format.or(base.format),
            fidelity: self.fidelity.or(base.fidelity),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "su11check",
    version,
    about = "Numerical checks of SU(1,1) and spin realizations"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON file with default values for any of the flags.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(flatten)]
    options: Options,
}

/// Validated settings for one invocation. Sizes left as `None` take the
/// per-representation defaults at run time.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub rep: RepSelector,
    pub k: f64,
    pub spin: Spin,
    pub p0: Complex64,
    pub lambda: f64,
    pub dim: Option<usize>,
    pub dim_b: Option<usize>,
    pub p_min: Option<f64>,
    pub margin: Option<usize>,
    pub tolerance: Option<f64>,
    pub model: Model,
    pub pairs: usize,
    pub beta: u32,
    pub power: u32,
    pub format: Format,
    pub fidelity: FidelityChoice,
}

pub const DEFAULT_K: f64 = 1.0;
pub const DEFAULT_SPIN: f64 = 1.0;
pub const DEFAULT_P0: Complex64 = Complex64::new(0.7, 0.4);
pub const DEFAULT_LAMBDA: f64 = 1.0;
pub const DEFAULT_MODEL: (f64, f64, f64) = (1.0, 0.1, 0.3);

#[derive(Debug)]
pub enum CliError {
    /// Rejected by the argument parser, or a help/version request.
    Parse(clap::Error),
    /// A value that parsed but violates a precondition.
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(e) => e.exit_code(),
            CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{}", e.render()),
            CliError::Usage(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses the arguments after the program name.
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("su11check")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(CliError::Parse)?;
    let options = match &cli.config {
        Some(path) => cli.options.over(read_config(path)?),
        None => cli.options,
    };
    resolve(cli.command, options)
}

fn read_config(path: &Path) -> Result<Options, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("--config: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("--config: {}: {e}", path.display())))
}

fn positive(flag: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(usage(format!("--{flag} must be a positive number, got {value}")))
    }
}

fn finite(flag: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(usage(format!("--{flag} must be finite, got {value}")))
    }
}

fn resolve(command: Command, o: Options) -> Result<RunConfig, CliError> {
    let k = positive("k", o.k.unwrap_or(DEFAULT_K))?;
    let spin_value = o.spin.unwrap_or(DEFAULT_SPIN);
    let spin = Spin::new(spin_value).map_err(|e| usage(format!("--spin: {e}")))?;
    let lambda = positive("lambda", o.lambda.unwrap_or(DEFAULT_LAMBDA))?;
    let tolerance = o.tol.map(|t| positive("tol", t)).transpose()?;
    let p_min = o.p_min.map(|p| finite("p-min", p)).transpose()?;
    for (flag, value) in [("dim", o.dim), ("dim-b", o.dim_b)] {
        if value == Some(0) {
            return Err(usage(format!("--{flag} must be at least 1")));
        }
    }
    let pairs = o.pairs.unwrap_or(su11_core::defaults::PAIRS);
    if pairs < 2 {
        return Err(usage(format!("--pairs must be at least 2, got {pairs}")));
    }
    let beta = o.beta.unwrap_or(1);
    if beta == 0 {
        return Err(usage("--beta must be a positive integer"));
    }
    let power = o.n.unwrap_or(1);
    if !(1..=3).contains(&power) {
        return Err(usage(format!("--n must be 1, 2 or 3, got {power}")));
    }
    let (e0, f10, f20) = DEFAULT_MODEL;
    let (epsilon, phi1, phi2) = (o.epsilon.unwrap_or(e0), o.phi1.unwrap_or(f10), o.phi2.unwrap_or(f20));
    let model = Model::new(epsilon, phi1, phi2).map_err(|e| usage(format!("--epsilon/--phi1/--phi2: {e}")))?;
    Ok(RunConfig {
        command,
        rep: o.rep.unwrap_or(RepSelector::All),
        k,
        spin,
        p0: o.p0.unwrap_or(DEFAULT_P0),
        lambda,
        dim: o.dim,
        dim_b: o.dim_b,
        p_min,
        margin: o.margin,
        tolerance,
        model,
        pairs,
        beta,
        power,
        format: o.format.unwrap_or(Format::Text),
        fidelity: o.fidelity.unwrap_or(FidelityChoice::Corrected),
    })
}
