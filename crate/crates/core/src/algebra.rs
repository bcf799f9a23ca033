//! Commutator, Casimir and equivalence checks on algebra triples.
//!
//! Residuals are max-abs norms of `Π(X − expected)Π`, where `Π` keeps the
//! states on which the finite matrices are meant to reproduce the algebra:
//! an interior margin for truncated realizations, the support block for
//! closed ones.

use crate::error::{domain, Error, Result};
use crate::linops::{commutator, interior_projector, mask_projector, BasisSpec, OperatorMatrix};
use crate::report::{Check, CheckReport};
use crate::reps::{
    circle_momentum, hp_spin, villain_spin, AlgebraTriple, Boundary, Fidelity, RepParams, Spin, TripleKind,
};
use crate::scalar::{re, Real, C};

/// Margin, tolerance and label for one verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSpec {
    pub margin: usize,
    pub tolerance: f64,
    /// Prefixed to check names when non-empty.
    pub label: String,
}

impl Default for CheckSpec {
    fn default() -> Self {
        Self {
            margin: 2,
            tolerance: 1e-10,
            label: String::new(),
        }
    }
}

impl CheckSpec {
    pub fn new(margin: usize, tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(domain(format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(Self {
            margin,
            tolerance,
            label: String::new(),
        })
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    fn name(&self, what: &str) -> String {
        if self.label.is_empty() {
            what.to_string()
        } else {
            format!("{} {}", self.label, what)
        }
    }
}

/// Projector onto the states a triple is checked on.
pub fn check_projector<T: Real>(triple: &AlgebraTriple<T>, margin: usize) -> Result<OperatorMatrix<T>> {
    match &triple.boundary {
        Boundary::Truncated => interior_projector(triple.basis(), margin),
        Boundary::Closed { support } => {
            if !support.iter().any(|&s| s) {
                return Err(domain(format!(
                    "{} has no unclamped states on {}",
                    triple.params.label(),
                    triple.basis()
                )));
            }
            mask_projector(triple.basis(), support)
        }
    }
}

fn region_note<T: Real>(triple: &AlgebraTriple<T>, margin: usize) -> String {
    match &triple.boundary {
        Boundary::Truncated => format!("interior margin {margin}"),
        Boundary::Closed { support } => format!("closed support of {} states", support.iter().filter(|&&s| s).count()),
    }
}

fn require_kind<T: Real>(triple: &AlgebraTriple<T>, kind: TripleKind) -> Result<()> {
    if triple.kind != kind {
        return Err(Error::Kind {
            expected: kind.name(),
            found: triple.kind.name(),
        });
    }
    Ok(())
}

fn half<T: Real>() -> T {
    T::lit(0.5)
}

/// `K₀² − (K₊K₋ + K₋K₊)/2`.
pub fn casimir_su11<T: Real>(triple: &AlgebraTriple<T>) -> Result<OperatorMatrix<T>> {
    require_kind(triple, TripleKind::Hyperbolic)?;
    let sym = triple
        .kplus
        .matmul(&triple.kminus)?
        .plus(&triple.kminus.matmul(&triple.kplus)?)?;
    triple.k0.matmul(&triple.k0)?.minus(&sym.scale_real(half()))
}

/// `S_z² + (S₊S₋ + S₋S₊)/2`.
pub fn casimir_spin<T: Real>(triple: &AlgebraTriple<T>) -> Result<OperatorMatrix<T>> {
    require_kind(triple, TripleKind::Spin)?;
    let sym = triple
        .kplus
        .matmul(&triple.kminus)?
        .plus(&triple.kminus.matmul(&triple.kplus)?)?;
    triple.k0.matmul(&triple.k0)?.plus(&sym.scale_real(half()))
}

fn casimir_of<T: Real>(triple: &AlgebraTriple<T>) -> Result<OperatorMatrix<T>> {
    match triple.kind {
        TripleKind::Hyperbolic => casimir_su11(triple),
        TripleKind::Spin => casimir_spin(triple),
    }
}

fn projected_residual<T: Real>(x: &OperatorMatrix<T>, projector: &OperatorMatrix<T>) -> Result<f64> {
    Ok(x.sandwich(projector)?.maxabs().to_f64_lossy())
}

/// The three defining commutators, interior-projected.
///
/// Hyperbolic: `[K₀,K₊]−K₊`, `[K₀,K₋]+K₋`, `[K₊,K₋]+2K₀`.
/// Spin: `[S_z,S₊]−S₊`, `[S_z,S₋]+S₋`, `[S₊,S₋]−2S_z`.
pub fn check_commutators<T: Real>(triple: &AlgebraTriple<T>, spec: &CheckSpec) -> Result<CheckReport> {
    let projector = check_projector(triple, spec.margin)?;
    let t = triple;
    let raise = commutator(&t.k0, &t.kplus)?.minus(&t.kplus)?;
    let lower = commutator(&t.k0, &t.kminus)?.plus(&t.kminus)?;
    let two_k0 = t.k0.scale_real(T::lit(2.0));
    let (names, closing) = match t.kind {
        TripleKind::Hyperbolic => (
            ["[K0,K+]-K+", "[K0,K-]+K-", "[K+,K-]+2K0"],
            commutator(&t.kplus, &t.kminus)?.plus(&two_k0)?,
        ),
        TripleKind::Spin => (
            ["[Sz,S+]-S+", "[Sz,S-]+S-", "[S+,S-]-2Sz"],
            commutator(&t.kplus, &t.kminus)?.minus(&two_k0)?,
        ),
    };
    let note = region_note(t, spec.margin);
    let rep = t.params.label();
    [raise, lower, closing]
        .iter()
        .zip(names)
        .map(|(residual, name)| {
            Ok(Check::new(
                spec.name(name),
                projected_residual(residual, &projector)?,
                spec.tolerance,
            )
            .with_meta("rep", rep.clone())
            .with_meta("region", note.clone()))
        })
        .collect()
}

/// Closed-form Casimir a triple's parameters predict.
#[derive(Debug, Clone)]
pub struct ExpectedCasimir<T: Real> {
    pub operator: OperatorMatrix<T>,
    pub formula: &'static str,
    /// Second candidate, when the literature states a different closed form
    /// for the same realization.
    pub alternative: Option<(OperatorMatrix<T>, &'static str)>,
}

pub fn expected_casimir<T: Real>(triple: &AlgebraTriple<T>) -> Result<ExpectedCasimir<T>> {
    let basis = triple.basis();
    let id = OperatorMatrix::identity(basis);
    let quarter = T::lit(0.25);
    let scalar = |v: T| id.scale_real(v);
    let expected = match &triple.params {
        RepParams::MlodinovPapanicolaou { k } => ExpectedCasimir {
            operator: scalar(*k * (*k - T::one())),
            formula: "k(k-1)",
            alternative: None,
        },
        RepParams::PhaseMomentum { p0 } | RepParams::Bosonic { p0, .. } => {
            // (P0 - P0*)^2 / 4 = -(Im P0)^2
            ExpectedCasimir {
                operator: scalar(-quarter - p0.im * p0.im),
                formula: "-1/4 + (P0 - P0*)^2/4",
                alternative: None,
            }
        }
        RepParams::Perelomov { lambda } => {
            let l2 = *lambda * *lambda;
            ExpectedCasimir {
                operator: scalar(-quarter - l2),
                formula: "-1/4 - lambda^2",
                alternative: Some((scalar(-quarter - l2 * quarter), "-1/4 - lambda^2/4")),
            }
        }
        RepParams::TwoMode => ExpectedCasimir {
            operator: OperatorMatrix::from_diagonal_fn(basis, |i| {
                let (na, nb) = basis.split_index(i).expect("two-mode basis");
                let d = T::from_usize_lossy(na) - T::from_usize_lossy(nb);
                re(-quarter + d * d * quarter)
            }),
            formula: "-1/4 + (n_a - n_b)^2/4",
            alternative: None,
        },
        RepParams::HolsteinPrimakoff { spin, .. } | RepParams::Villain { spin, .. } => {
            let s = spin.value::<T>();
            ExpectedCasimir {
                operator: scalar(s * (s + T::one())),
                formula: "S(S+1)",
                alternative: None,
            }
        }
    };
    Ok(expected)
}

/// Projected residual of the computed Casimir against its closed form.
///
/// For realizations with a competing closed form, both values are recorded
/// in the check metadata together with which one the matrices match.
pub fn check_casimir<T: Real>(triple: &AlgebraTriple<T>, spec: &CheckSpec) -> Result<CheckReport> {
    let projector = check_projector(triple, spec.margin)?;
    let computed = casimir_of(triple)?;
    let expected = expected_casimir(triple)?;
    let residual = projected_residual(&computed.minus(&expected.operator)?, &projector)?;
    let mut check = Check::new(spec.name("casimir"), residual, spec.tolerance)
        .with_meta("rep", triple.params.label())
        .with_meta("formula", expected.formula)
        .with_meta("region", region_note(triple, spec.margin));
    if let Some((alt, alt_formula)) = &expected.alternative {
        let alt_residual = projected_residual(&computed.minus(alt)?, &projector)?;
        let scalar_of = |m: &OperatorMatrix<T>| m.get(0, 0).re.to_f64_lossy();
        let matches = match (residual <= spec.tolerance, alt_residual <= spec.tolerance) {
            (true, false) => expected.formula,
            (false, true) => alt_formula,
            (true, true) => "both",
            (false, false) => "neither",
        };
        check = check
            .with_meta(
                "candidate",
                format!("{} = {}", expected.formula, fmt_f64(scalar_of(&expected.operator))),
            )
            .with_meta("alternative", format!("{} = {}", alt_formula, fmt_f64(scalar_of(alt))))
            .with_meta("alternative_residual", fmt_f64(alt_residual))
            .with_meta("matches", matches);
    }
    Ok(std::iter::once(check).collect())
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// `‖[ΠCΠ, K₀]‖`: the projected Casimir commutes with the diagonal generator.
pub fn check_casimir_centrality<T: Real>(triple: &AlgebraTriple<T>, spec: &CheckSpec) -> Result<CheckReport> {
    let projector = check_projector(triple, spec.margin)?;
    let c = casimir_of(triple)?.sandwich(&projector)?;
    let residual = commutator(&c, &triple.k0)?.maxabs().to_f64_lossy();
    Ok(std::iter::once(
        Check::new(spec.name("[C,K0]"), residual, spec.tolerance).with_meta("rep", triple.params.label()),
    )
    .collect())
}

/// Shift identity `e^{iβX} Pⁿ e^{−iβX} = (P − β)ⁿ` for integer `β` on a
/// Circle basis.
///
/// A margin below `β` is allowed; the edge states then show up as a failing
/// residual.
pub fn check_transfo<T: Real>(basis: &BasisSpec<T>, beta: u32, power: u32, spec: &CheckSpec) -> Result<CheckReport> {
    if beta == 0 {
        return Err(domain("shift beta must be a positive integer"));
    }
    if !(1..=3).contains(&power) {
        return Err(domain(format!("power n must be 1, 2 or 3, got {power}")));
    }
    let (p, raise, lower) = circle_momentum(basis)?;
    let projector = interior_projector(basis, spec.margin)?;
    let conjugated = raise.pow(beta).matmul(&p.pow(power))?.matmul(&lower.pow(beta))?;
    let shifted = p.shift(re(-T::lit(beta as f64))).pow(power);
    let residual = projected_residual(&conjugated.minus(&shifted)?, &projector)?;
    let mut check = Check::new(
        spec.name(&format!("shift beta={beta} n={power}")),
        residual,
        spec.tolerance,
    )
    .with_meta("margin", spec.margin.to_string());
    if (spec.margin as u32) < beta {
        check = check.with_meta("note", "margin below beta keeps states the shift pushes off the grid");
    }
    Ok(std::iter::once(check).collect())
}

/// Entrywise differences of two triples on the same basis.
pub fn compare_triples<T: Real>(a: &AlgebraTriple<T>, b: &AlgebraTriple<T>, spec: &CheckSpec) -> Result<CheckReport> {
    if a.basis() != b.basis() {
        return Err(Error::Dimension(format!(
            "cannot compare triples on {} and {}",
            a.basis(),
            b.basis()
        )));
    }
    let pairs = [
        ("k0", &a.k0, &b.k0),
        ("k+", &a.kplus, &b.kplus),
        ("k-", &a.kminus, &b.kminus),
    ];
    let versus = format!("{} vs {}", a.params.label(), b.params.label());
    pairs
        .into_iter()
        .map(|(name, x, y)| {
            Ok(
                Check::new(spec.name(name), x.minus(y)?.maxabs().to_f64_lossy(), spec.tolerance)
                    .with_meta("compared", versus.clone()),
            )
        })
        .collect()
}

/// Holstein–Primakoff and Villain spin-`S` matrices agree once occupation `n`
/// is read as momentum `p = n − S`.
pub fn compare_hp_villain<T: Real>(spin: Spin, spec: &CheckSpec) -> Result<CheckReport> {
    let hp = hp_spin::<T>(spin, Fidelity::Corrected)?;
    let s = spin.value::<T>();
    let circle = BasisSpec::circle(-s, spin.multiplicity())?;
    let villain = villain_spin(spin, &circle, Fidelity::Corrected)?;
    compare_triples(&hp.relabel(&circle)?, &villain, spec)
}

/// `(P₀ − P₀*)²/4` for reporting.
pub fn saf_casimir_value<T: Real>(p0: C<T>) -> T {
    -T::lit(0.25) - p0.im * p0.im
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::{mp_realization, perelomov_realization, saf_realization, two_mode};
    use num_complex::Complex;

    fn circle(p_min: f64, count: usize) -> BasisSpec<f64> {
        BasisSpec::circle(p_min, count).unwrap()
    }

    #[test]
    fn mp_casimir_values() {
        let t = mp_realization(1.0, 16).unwrap();
        let c = casimir_su11(&t).unwrap();
        for i in 1..14 {
            assert!(c.get(i, i).norm() < 1e-12);
        }
        let t = mp_realization(1.75f64, 32).unwrap();
        let r = check_casimir(&t, &CheckSpec::default()).unwrap();
        assert!(r.overall_passed(), "{r:?}");
        let expected = expected_casimir(&t).unwrap();
        assert!((expected.operator.get(0, 0).re - 1.3125).abs() < 1e-15);
    }

    #[test]
    fn saf_casimir_real_p0_is_minus_quarter() {
        let t = saf_realization(Complex::new(0.8, 0.0), &circle(0.0, 16)).unwrap();
        let c = casimir_su11(&t).unwrap();
        for i in 2..14 {
            assert!((c.get(i, i).re + 0.25).abs() < 1e-12);
        }
        let t = saf_realization(Complex::new(0.5, 1.0), &circle(0.0, 16)).unwrap();
        assert!((saf_casimir_value(Complex::new(0.5f64, 1.0)) + 1.25).abs() < 1e-15);
        assert!(check_casimir(&t, &CheckSpec::default()).unwrap().overall_passed());
    }

    #[test]
    fn two_mode_casimir_diagonal() {
        let t = two_mode::<f64>(8, 8).unwrap();
        let c = casimir_su11(&t).unwrap();
        let basis = t.basis().clone();
        for i in 0..64 {
            let (na, nb) = basis.split_index(i).unwrap();
            if na == 7 || nb == 7 {
                continue;
            }
            let d = na as f64 - nb as f64;
            assert!((c.get(i, i).re - (-0.25 + d * d / 4.0)).abs() < 1e-12);
        }
        // |2,0> = index 16
        assert!((c.get(16, 16).re - 0.75).abs() < 1e-12);
    }

    #[test]
    fn casimir_kind_errors() {
        let spin = hp_spin::<f64>(Spin::new(1.0).unwrap(), Fidelity::Corrected).unwrap();
        assert!(matches!(casimir_su11(&spin), Err(Error::Kind { .. })));
        let hyper = mp_realization(1.0, 8).unwrap();
        assert!(matches!(casimir_spin(&hyper), Err(Error::Kind { .. })));
    }

    #[test]
    fn spin_casimirs() {
        let t = hp_spin::<f64>(Spin::new(0.5).unwrap(), Fidelity::Corrected).unwrap();
        let c = casimir_spin(&t).unwrap();
        assert_eq!(
            c.minus(&OperatorMatrix::identity(t.basis()).scale_real(0.75))
                .unwrap()
                .maxabs(),
            0.0
        );

        let s1 = Spin::new(1.0).unwrap();
        let t = villain_spin(s1, &circle(-1.0, 3), Fidelity::Corrected).unwrap();
        let c = casimir_spin(&t).unwrap();
        assert!(
            c.minus(&OperatorMatrix::identity(t.basis()).scale_real(2.0))
                .unwrap()
                .maxabs()
                < 1e-14
        );

        let printed = villain_spin(s1, &circle(-3.0, 8), Fidelity::AsPrinted).unwrap();
        let r = check_casimir(&printed, &CheckSpec::default()).unwrap();
        assert!(!r.overall_passed());
        assert!(r.checks()[0].residual > 0.5);
    }

    #[test]
    fn saf_commutators_exact_in_interior() {
        let t = saf_realization(Complex::new(0.7, 0.4), &circle(-10.0, 24)).unwrap();
        let r = check_commutators(&t, &CheckSpec::default()).unwrap();
        assert!(r.overall_passed());
        assert!(r.max_residual() <= 1e-12);
    }

    #[test]
    fn margin_zero_exposes_truncation_edges() {
        let t = saf_realization(Complex::new(0.7, 0.4), &circle(0.0, 24)).unwrap();
        let spec = CheckSpec::new(0, 1e-10).unwrap();
        let r = check_commutators(&t, &spec).unwrap();
        assert!(!r.overall_passed());
        assert!(r.max_residual() > 10.0);
    }

    #[test]
    fn villain_as_printed_offset() {
        let t = villain_spin(Spin::new(1.0).unwrap(), &circle(-4.0, 10), Fidelity::AsPrinted).unwrap();
        let r = check_commutators(&t, &CheckSpec::default()).unwrap();
        let closing = r.get("[S+,S-]-2Sz").unwrap();
        assert!((closing.residual - 2.0).abs() < 1e-10);
        assert!(!closing.passed);
        assert!(r.get("[Sz,S+]-S+").unwrap().passed);
    }

    #[test]
    fn perelomov_casimir_reports_both_candidates() {
        let t = perelomov_realization(1.0, &circle(-12.0, 24)).unwrap();
        let r = check_casimir(&t, &CheckSpec::default()).unwrap();
        let c = &r.checks()[0];
        assert!(c.passed);
        assert_eq!(c.metadata["matches"], "-1/4 - lambda^2");
        assert_eq!(c.metadata["candidate"], "-1/4 - lambda^2 = -1.25");
        assert_eq!(c.metadata["alternative"], "-1/4 - lambda^2/4 = -0.5");
        assert!((c.metadata["alternative_residual"].parse::<f64>().unwrap() - 0.75).abs() < 1e-10);
    }

    #[test]
    fn shift_identity() {
        let basis = circle(-5.0, 16);
        for (beta, n) in [(1, 1), (2, 3)] {
            let r = check_transfo(&basis, beta, n, &CheckSpec::new(2, 1e-12).unwrap()).unwrap();
            assert!(r.overall_passed(), "{r:?}");
        }
        let r = check_transfo(&basis, 1, 1, &CheckSpec::new(0, 1e-12).unwrap()).unwrap();
        assert!(!r.overall_passed());
        assert!(check_transfo(&basis, 0, 1, &CheckSpec::default()).is_err());
        assert!(check_transfo(&basis, 1, 4, &CheckSpec::default()).is_err());
        assert!(check_transfo(&BasisSpec::<f64>::fock(8).unwrap(), 1, 1, &CheckSpec::default()).is_err());
    }

    #[test]
    fn triple_comparisons() {
        let basis = circle(-4.0, 12);
        let a = saf_realization(Complex::new(0.0, 0.0), &basis).unwrap();
        let b = saf_realization(Complex::new(1.0, 0.0), &basis).unwrap();
        let same = compare_triples(&a, &a, &CheckSpec::default()).unwrap();
        assert_eq!(same.max_residual(), 0.0);
        let r = compare_triples(&a, &b, &CheckSpec::default()).unwrap();
        assert!((r.get("k0").unwrap().residual - 1.0).abs() < 1e-15);

        let other = saf_realization(Complex::new(0.0, 0.0), &circle(-4.0, 13)).unwrap();
        assert!(matches!(
            compare_triples(&a, &other, &CheckSpec::default()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn hp_matches_villain() {
        for twice in 1..=5 {
            let r = compare_hp_villain::<f64>(Spin::from_twice(twice).unwrap(), &CheckSpec::new(0, 1e-12).unwrap())
                .unwrap();
            assert!(r.overall_passed(), "2S={twice}: {r:?}");
        }
    }

    #[test]
    fn empty_support_is_an_error() {
        // As printed at S=1/2 on exactly [-1/2, 1/2] every state touches a clamp or the grid edge.
        let t = villain_spin(Spin::new(0.5).unwrap(), &circle(-0.5, 2), Fidelity::AsPrinted).unwrap();
        assert!(check_commutators(&t, &CheckSpec::default()).is_err());
    }

    #[test]
    fn invalid_tolerance() {
        assert!(CheckSpec::new(2, 0.0).is_err());
        assert!(CheckSpec::new(2, f64::NAN).is_err());
    }
}
