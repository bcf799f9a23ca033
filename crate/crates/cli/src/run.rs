//! Dispatch of a [`RunConfig`] to the checks and rendering of the report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use su11_core::algebra::{check_casimir, check_commutators, check_transfo, CheckSpec};
use su11_core::reduction::{check_free_particle_operator, check_k_form, verify_reduction_with_dim};
use su11_core::reps::{
    hp_spin, mp_realization, perelomov_realization, saf_bose_form, saf_realization, two_mode, villain_spin,
};
use su11_core::{defaults, Basis, BoseForm, Check, CheckReport, Complex64, Fidelity, Triple};

use crate::config::{Command, FidelityChoice, Format, RepSelector, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// What the binary prints and the status it exits with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

/// Runs the configured command. Check failures exit 1; errors raised by the
/// numerical modules exit 2 with the message on `stderr`.
pub fn run(config: &RunConfig) -> Outcome {
    match execute(config) {
        Ok(doc) => Outcome {
            stdout: render(&doc, config.format),
            stderr: String::new(),
            exit_code: if doc.overall_passed { 0 } else { 1 },
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            exit_code: 2,
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub metadata: BTreeMap<String, String>,
}

impl From<&Check> for CheckRow {
    fn from(c: &Check) -> Self {
        Self {
            name: c.name.clone(),
            residual: c.residual,
            tolerance: c.tolerance,
            passed: c.passed,
            metadata: c.metadata.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Spectra {
    pub direct: Vec<f64>,
    pub predicted: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionFields {
    pub p0: f64,
    pub h0: f64,
    pub mass: f64,
    pub condensate: bool,
    pub spectra: Spectra,
    pub max_deviation: f64,
}

/// A relation as typeset against what its matrices actually do.
#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    pub name: &'static str,
    pub printed: String,
    pub residual: f64,
    pub tolerance: f64,
    pub consistent: bool,
    pub note: String,
}

/// The serialized report.
#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub version: u32,
    pub command: &'static str,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<CheckRow>,
    pub overall_passed: bool,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionFields>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub discrepancies: Vec<Discrepancy>,
}

/// Builds the report without rendering it.
pub fn execute(config: &RunConfig) -> su11_core::Result<Document> {
    match config.command {
        Command::Check | Command::Casimir => representation_suite(config),
        Command::Transfo => transfo(config),
        Command::Reduce => reduce(config),
    }
}

fn document(command: Command, params: BTreeMap<String, Value>, report: &CheckReport) -> Document {
    Document {
        version: SCHEMA_VERSION,
        command: command.name(),
        params,
        checks: report.checks().iter().map(CheckRow::from).collect(),
        overall_passed: report.overall_passed(),
        reduction: None,
        discrepancies: Vec::new(),
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Default Circle grid: `count` momenta centred on zero.
fn circle(config: &RunConfig) -> su11_core::Result<Basis> {
    let count = config.dim.unwrap_or(defaults::CIRCLE_COUNT);
    let p_min = config.p_min.unwrap_or(-((count / 2) as f64));
    Basis::circle(p_min, count)
}

fn spec(config: &RunConfig, margin: usize, tolerance: f64) -> su11_core::Result<CheckSpec> {
    CheckSpec::new(config.margin.unwrap_or(margin), config.tolerance.unwrap_or(tolerance))
}

/// One representation at its resolved size, with the check settings for it.
fn build(config: &RunConfig, rep: RepSelector, fidelity: Fidelity) -> su11_core::Result<(Triple, CheckSpec)> {
    let plain = || spec(config, defaults::MARGIN, defaults::TOLERANCE);
    Ok(match rep {
        RepSelector::Mp => (
            mp_realization(config.k, config.dim.unwrap_or(defaults::FOCK_DIM))?,
            plain()?,
        ),
        RepSelector::Hp => (hp_spin(config.spin, fidelity)?, plain()?),
        RepSelector::Villain => {
            // Two spare momenta either side of the spin block.
            let s = config.spin.value::<f64>();
            let count = config.dim.unwrap_or(config.spin.multiplicity() + 4);
            let basis = Basis::circle(config.p_min.unwrap_or(-s - 2.0), count)?;
            (villain_spin(config.spin, &basis, fidelity)?, plain()?)
        }
        RepSelector::Saf => (saf_realization(config.p0, &circle(config)?)?, plain()?),
        RepSelector::Perelomov => (perelomov_realization(config.lambda, &circle(config)?)?, plain()?),
        RepSelector::Bose1 | RepSelector::Bose2 => {
            let form = if rep == RepSelector::Bose1 {
                BoseForm::Form1
            } else {
                BoseForm::Form2
            };
            let dim = config.dim.unwrap_or(defaults::BOSE_FORM_DIM);
            let triple = saf_bose_form(config.p0, dim, form)?;
            (triple, spec(config, dim / 4, defaults::BOSE_FORM_TOLERANCE)?)
        }
        RepSelector::TwoMode => {
            let da = config.dim.unwrap_or(defaults::TWO_MODE_DIM);
            (two_mode(da, config.dim_b.unwrap_or(da))?, plain()?)
        }
        RepSelector::All => unreachable!("expanded by the caller"),
    })
}

fn fidelities(rep: RepSelector, choice: FidelityChoice) -> &'static [Fidelity] {
    let has_variants = matches!(rep, RepSelector::Hp | RepSelector::Villain);
    match choice {
        _ if !has_variants => &[Fidelity::Corrected],
        FidelityChoice::Corrected => &[Fidelity::Corrected],
        FidelityChoice::AsPrinted => &[Fidelity::AsPrinted],
        FidelityChoice::Both => &[Fidelity::Corrected, Fidelity::AsPrinted],
    }
}

fn suite_params(config: &RunConfig) -> BTreeMap<String, Value> {
    let mut params = BTreeMap::new();
    params.insert("rep".into(), json!(config.rep.name()));
    params.insert("fidelity".into(), json!(config.fidelity.name()));
    params.insert("k".into(), json!(config.k));
    params.insert("spin".into(), json!(config.spin.value::<f64>()));
    params.insert("p0".into(), json!(fmt_complex(config.p0)));
    params.insert("lambda".into(), json!(config.lambda));
    // `null` means the per-representation default; each check records its basis.
    params.insert("dim".into(), json!(config.dim));
    params.insert("dim_b".into(), json!(config.dim_b));
    params.insert("p_min".into(), json!(config.p_min));
    params.insert("margin".into(), json!(config.margin));
    params.insert("tolerance".into(), json!(config.tolerance));
    params
}

fn representation_suite(config: &RunConfig) -> su11_core::Result<Document> {
    let all = config.rep == RepSelector::All;
    let reps: &[RepSelector] = if all {
        &RepSelector::CONCRETE
    } else {
        std::slice::from_ref(&config.rep)
    };
    let mut report = CheckReport::new();
    for &rep in reps {
        // The full suite gates on the corrected forms; the printed forms go to the ledger.
        let variants = if all {
            &[Fidelity::Corrected][..]
        } else {
            fidelities(rep, config.fidelity)
        };
        for &fidelity in variants {
            let (triple, spec) = build(config, rep, fidelity)?;
            let spec = if all || variants.len() > 1 {
                spec.labelled(triple.params.label())
            } else {
                spec
            };
            let checks = match config.command {
                Command::Check => check_commutators(&triple, &spec)?,
                _ => check_casimir(&triple, &spec)?,
            };
            let basis = triple.basis().to_string();
            report.extend(
                checks
                    .checks()
                    .iter()
                    .map(|c| c.clone().with_meta("basis", basis.clone()))
                    .collect(),
            );
        }
    }
    let mut doc = document(config.command, suite_params(config), &report);
    if all && config.command == Command::Check {
        doc.discrepancies = discrepancy_ledger(config)?;
    }
    Ok(doc)
}

/// The three relations whose typeset form disagrees with its own algebra.
fn discrepancy_ledger(config: &RunConfig) -> su11_core::Result<Vec<Discrepancy>> {
    let tol = config.tolerance.unwrap_or(defaults::TOLERANCE);
    let entry = |name, printed: &str, residual: f64, note: String| Discrepancy {
        name,
        printed: printed.to_string(),
        residual,
        tolerance: tol,
        consistent: residual <= tol,
        note,
    };

    let (hp, _) = build(config, RepSelector::Hp, Fidelity::AsPrinted)?;
    let hp_note = if config.spin.twice() == 1 {
        "at S=1/2 the only nonzero entry is the same in both forms, so the defect is invisible".to_string()
    } else {
        format!("max|S+ - (S-)^dagger| at S={}", config.spin)
    };
    let hp_entry = entry(
        "hp_as_printed_adjointness",
        "S+ = sqrt(2S+n) a with S- = a^dagger sqrt(2S-n)",
        hp.adjointness_residual(),
        hp_note,
    );

    let (villain, spec) = build(config, RepSelector::Villain, Fidelity::AsPrinted)?;
    let closing = check_commutators(&villain, &spec)?;
    let closing = closing.checks().last().expect("three commutator checks");
    let villain_entry = entry(
        "villain_as_printed_closure",
        "S_z = P with S+- built on the shifted momentum",
        closing.residual,
        format!("{} on the supported block of {}", closing.name, villain.basis()),
    );

    let (perelomov, spec) = build(config, RepSelector::Perelomov, Fidelity::Corrected)?;
    let casimir = check_casimir(&perelomov, &spec)?;
    let casimir = &casimir.checks()[0];
    let meta = |key: &str| casimir.metadata.get(key).cloned().unwrap_or_default();
    let alt_residual = meta("alternative_residual").parse::<f64>().unwrap_or(f64::NAN);
    let perelomov_entry = entry(
        "perelomov_printed_casimir",
        "C = -1/4 - lambda^2/4",
        alt_residual,
        format!("matrices give {}; printed {}", meta("candidate"), meta("alternative")),
    );

    Ok(vec![hp_entry, villain_entry, perelomov_entry])
}

fn transfo(config: &RunConfig) -> su11_core::Result<Document> {
    let basis = circle(config)?;
    let spec = spec(config, defaults::MARGIN, defaults::TOLERANCE)?;
    let report = check_transfo(&basis, config.beta, config.power, &spec)?;
    let momenta = basis.momenta().expect("circle basis");
    let mut params = BTreeMap::new();
    params.insert("p_min".into(), json!(momenta[0]));
    params.insert("count".into(), json!(momenta.len()));
    params.insert("beta".into(), json!(config.beta));
    params.insert("n".into(), json!(config.power));
    params.insert("margin".into(), json!(spec.margin));
    params.insert("tolerance".into(), json!(spec.tolerance));
    Ok(document(Command::Transfo, params, &report))
}

fn reduce(config: &RunConfig) -> su11_core::Result<Document> {
    let model = &config.model;
    let tol = config.tolerance.unwrap_or(defaults::REDUCTION_TOLERANCE);
    let dim = config.dim.unwrap_or(config.pairs + 2);
    let result = verify_reduction_with_dim(model, config.pairs, dim, tol)?;
    let spec = spec(config, defaults::MARGIN, tol)?;

    let mut report = CheckReport::new();
    report.push(
        Check::new("pair_spectrum", result.max_deviation, tol)
            .with_meta("levels", config.pairs.to_string())
            .with_meta("truncation", format!("{dim}x{dim}")),
    );
    report.extend(check_k_form(model, dim, dim, &spec)?);
    report.extend(check_free_particle_operator(
        model,
        config.pairs + 2 * spec.margin,
        &spec,
    )?);

    let mut params = BTreeMap::new();
    params.insert("epsilon".into(), json!(model.epsilon()));
    params.insert("phi1".into(), json!(model.phi1()));
    params.insert("phi2".into(), json!(model.phi2()));
    params.insert("pairs".into(), json!(config.pairs));
    params.insert("dim".into(), json!(dim));
    params.insert("margin".into(), json!(spec.margin));
    params.insert("tolerance".into(), json!(tol));

    let mut doc = document(Command::Reduce, params, &report);
    doc.reduction = Some(ReductionFields {
        p0: result.p0,
        h0: result.h0,
        mass: result.mass,
        condensate: result.condensate,
        spectra: Spectra {
            direct: result.direct_spectrum,
            predicted: result.predicted_spectrum,
        },
        max_deviation: result.max_deviation,
    });
    Ok(doc)
}

/// Serializes a report. Identical documents render to identical bytes.
pub fn render(doc: &Document, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => render_csv(doc),
        Format::Text => render_text(doc),
    }
}

fn render_csv(doc: &Document) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["name", "residual", "tolerance", "passed"])
        .expect("in-memory write");
    for c in &doc.checks {
        writer
            .write_record([
                c.name.clone(),
                c.residual.to_string(),
                c.tolerance.to_string(),
                c.passed.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn render_text(doc: &Document) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "su11check {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "command: {}", doc.command);
    let params: Vec<String> = doc.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(out, "params: {}", params.join(" "));
    if let Some(r) = &doc.reduction {
        let _ = writeln!(out, "p0: {}", r.p0);
        let _ = writeln!(out, "h0: {}", r.h0);
        let _ = writeln!(out, "mass: {}", r.mass);
        let _ = writeln!(out, "condensate: {}", r.condensate);
        let _ = writeln!(out, "{:>4}  {:>22}  {:>22}", "n", "direct", "predicted");
        for (n, (d, p)) in r.spectra.direct.iter().zip(&r.spectra.predicted).enumerate() {
            let _ = writeln!(out, "{n:>4}  {d:>22.15e}  {p:>22.15e}");
        }
        let _ = writeln!(out, "max_deviation: {:e}", r.max_deviation);
    }
    for c in &doc.checks {
        let _ = writeln!(
            out,
            "{}  {:>10.3e}  (tol {:e})  {}",
            verdict(c.passed),
            c.residual,
            c.tolerance,
            c.name
        );
    }
    if !doc.discrepancies.is_empty() {
        let _ = writeln!(out, "discrepancies in the printed relations:");
        for d in &doc.discrepancies {
            let status = if d.consistent { "consistent" } else { "INCONSISTENT" };
            let _ = writeln!(out, "  {status}  {:>10.3e}  {}: {}", d.residual, d.name, d.printed);
            let _ = writeln!(out, "      {}", d.note);
        }
    }
    let passed = doc.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(
        out,
        "overall: {} ({passed}/{} checks)",
        verdict(doc.overall_passed),
        doc.checks.len()
    );
    out
}
