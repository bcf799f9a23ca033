//! Two nonlinear coupled oscillators and their free-particle form in the
//! pair sector.
//!
//! The Hamiltonian
//!
//! ```text
//! H = ε(a†a + b†b) + Φ₂ a†b†ba + Φ₁(a†a†aa + b†b†bb)
//! ```
//!
//! is rewritten through the pair generators `K₋ = ab`, `K₊ = a†b†`,
//! `K₀ = (a†a + b†b + 1)/2`. On states with equal occupations the
//! phase-momentum realization with real
//! `P₀ = (3Φ₁ + Φ₂ − ε)/(2Φ₁ + Φ₂)` turns it into `H₀ + P²/2m`.

use nalgebra::DMatrix;

use crate::algebra::CheckSpec;
use crate::error::{domain, Error, Result};
use crate::linops::{hermitian_eigensystem, interior_projector, tensor, BasisSpec, OperatorMatrix};
use crate::report::{Check, CheckReport};
use crate::reps::{bose_ladder, saf_realization, two_mode, AlgebraTriple, TripleKind};
use crate::scalar::{Real, C};

/// `|2Φ₁ + Φ₂|` below this is treated as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-8;

/// Oscillator energy `ε`, self-interaction `Φ₁`, cross-interaction `Φ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T: Real> {
    epsilon: T,
    phi1: T,
    phi2: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(epsilon: T, phi1: T, phi2: T) -> Result<Self> {
        if !(epsilon.is_finite() && phi1.is_finite() && phi2.is_finite()) {
            return Err(domain("model parameters must be finite"));
        }
        let denom = phi1 + phi1 + phi2;
        if denom.abs().to_f64_lossy() < SINGULAR_THRESHOLD {
            return Err(domain(format!(
                "2*phi1 + phi2 = {denom} is singular (|value| < {SINGULAR_THRESHOLD:e})"
            )));
        }
        Ok(Self { epsilon, phi1, phi2 })
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn phi1(&self) -> T {
        self.phi1
    }

    pub fn phi2(&self) -> T {
        self.phi2
    }

    /// `2Φ₁ + Φ₂`, the curvature of the pair-sector dispersion.
    pub fn curvature(&self) -> T {
        self.phi1 + self.phi1 + self.phi2
    }

    /// A bounded-below pair spectrum with a condensate ground state.
    pub fn has_condensate(&self) -> bool {
        self.curvature() > T::zero()
    }
}

fn number<T: Real>(dim: usize) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>, OperatorMatrix<T>)> {
    let (a, adag) = bose_ladder::<T>(dim)?;
    let n = adag.matmul(&a)?;
    Ok((a, adag, n))
}

/// The coupled-oscillator Hamiltonian assembled from ladder operators on
/// the two-mode Fock basis.
pub fn build_direct_hamiltonian<T: Real>(
    params: &ModelParams<T>,
    dim_a: usize,
    dim_b: usize,
) -> Result<OperatorMatrix<T>> {
    if dim_a < 4 || dim_b < 4 {
        return Err(domain(format!("Hamiltonian needs dims >= 4, got {dim_a}x{dim_b}")));
    }
    let (a, adag, na) = number::<T>(dim_a)?;
    let (b, bdag, nb) = number::<T>(dim_b)?;
    let ia = OperatorMatrix::identity(a.basis());
    let ib = OperatorMatrix::identity(b.basis());

    let occupation = tensor(&na, &ib)?.plus(&tensor(&ia, &nb)?)?;
    // a†b†ba = (a†a) ⊗ (b†b)
    let cross = tensor(&adag, &bdag)?.matmul(&tensor(&a, &b)?)?;
    let pair_a = adag.matmul(&adag)?.matmul(&a)?.matmul(&a)?;
    let pair_b = bdag.matmul(&bdag)?.matmul(&b)?.matmul(&b)?;
    let self_int = tensor(&pair_a, &ib)?.plus(&tensor(&ia, &pair_b)?)?;

    occupation
        .scale_real(params.epsilon)
        .plus(&cross.scale_real(params.phi2))?
        .plus(&self_int.scale_real(params.phi1))
}

/// `(2Φ₁ − ε) + (2ε − 6Φ₁)K₀ + 4Φ₁K₀² + (Φ₂ − 2Φ₁)K₊K₋`.
pub fn build_k_form<T: Real>(params: &ModelParams<T>, triple: &AlgebraTriple<T>) -> Result<OperatorMatrix<T>> {
    if triple.kind != TripleKind::Hyperbolic {
        return Err(Error::Kind {
            expected: TripleKind::Hyperbolic.name(),
            found: triple.kind.name(),
        });
    }
    let (eps, f1, f2) = (params.epsilon, params.phi1, params.phi2);
    let two = T::lit(2.0);
    let k0 = &triple.k0;
    let id = OperatorMatrix::identity(k0.basis());
    id.scale_real(two * f1 - eps)
        .plus(&k0.scale_real(two * eps - T::lit(6.0) * f1))?
        .plus(&k0.matmul(k0)?.scale_real(T::lit(4.0) * f1))?
        .plus(&triple.kplus.matmul(&triple.kminus)?.scale_real(f2 - two * f1))
}

/// Isometry with columns `|n, n⟩`, `n = 0..dim`, in two-mode indexing.
pub fn pair_subspace<T: Real>(dim_a: usize, dim_b: usize) -> Result<DMatrix<C<T>>> {
    if dim_a != dim_b {
        return Err(domain(format!(
            "pair subspace needs equal mode dimensions, got {dim_a}x{dim_b}"
        )));
    }
    let dim = dim_a;
    Ok(DMatrix::from_fn(dim * dim, dim, |r, c| {
        if r == c * dim + c {
            C::new(T::one(), T::zero())
        } else {
            C::new(T::zero(), T::zero())
        }
    }))
}

/// `P₀ = (3Φ₁ + Φ₂ − ε)/(2Φ₁ + Φ₂)`, the offset that removes the linear
/// momentum term.
pub fn p0_of<T: Real>(params: &ModelParams<T>) -> T {
    (T::lit(3.0) * params.phi1 + params.phi2 - params.epsilon) / params.curvature()
}

/// Band bottom and mass of the reduced free particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeParticle<T> {
    /// `−(Φ₁ − ε)²/(2Φ₁ + Φ₂)`
    pub h0: T,
    /// `1/(4Φ₁ + 2Φ₂)`
    pub mass: T,
    /// `2Φ₁ + Φ₂ > 0`: the pair sector has a condensate ground state.
    pub condensate: bool,
}

impl<T: Real> FreeParticle<T> {
    /// `H₀ + p²/2m`.
    pub fn energy(&self, momentum: T) -> T {
        self.h0 + momentum * momentum / (self.mass + self.mass)
    }
}

pub fn free_params<T: Real>(params: &ModelParams<T>) -> FreeParticle<T> {
    let d = params.curvature();
    let gap = params.phi1 - params.epsilon;
    FreeParticle {
        h0: -gap * gap / d,
        mass: T::one() / (d + d),
        condensate: params.has_condensate(),
    }
}

/// Momentum of pair level `n`: `K₀ = n + 1/2` matched to `p + P₀ − 1/2`.
pub fn pair_momentum<T: Real>(params: &ModelParams<T>, n: usize) -> T {
    T::from_usize_lossy(n) + T::one() - p0_of(params)
}

/// `(2Φ₁ + Φ₂)n² + 2(ε − Φ₁)n`: diagonal of the Hamiltonian at `n_a = n_b = n`.
pub fn pair_energy_closed_form<T: Real>(params: &ModelParams<T>, n: usize) -> T {
    let n = T::from_usize_lossy(n);
    params.curvature() * n * n + T::lit(2.0) * (params.epsilon - params.phi1) * n
}

/// Pair-sector spectrum computed two ways.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionResult<T> {
    pub p0: T,
    pub h0: T,
    pub mass: T,
    pub condensate: bool,
    /// Ascending eigenvalues of the Hamiltonian restricted to `|n, n⟩`, `n < n_pairs`.
    pub direct_spectrum: Vec<T>,
    /// Ascending `H₀ + p_n²/2m` for the same levels.
    pub predicted_spectrum: Vec<T>,
    pub max_deviation: T,
    pub tolerance: T,
    pub passed: bool,
}

/// Diagonalizes the pair block of the direct Hamiltonian and compares it with
/// the free-particle levels, on two-mode dims of `n_pairs + 2`.
pub fn verify_reduction<T: Real>(params: &ModelParams<T>, n_pairs: usize, tol: T) -> Result<ReductionResult<T>> {
    verify_reduction_with_dim(params, n_pairs, n_pairs + 2, tol)
}

pub fn verify_reduction_with_dim<T: Real>(
    params: &ModelParams<T>,
    n_pairs: usize,
    dim: usize,
    tol: T,
) -> Result<ReductionResult<T>> {
    if n_pairs < 2 {
        return Err(domain(format!("need at least 2 pair levels, got {n_pairs}")));
    }
    if dim < n_pairs + 2 {
        return Err(domain(format!(
            "truncation dim {dim} too small for {n_pairs} pair levels (need >= {})",
            n_pairs + 2
        )));
    }
    if !(tol.is_finite() && tol > T::zero()) {
        return Err(domain("tolerance must be positive"));
    }
    let h = build_direct_hamiltonian(params, dim, dim)?;
    let full = pair_subspace::<T>(dim, dim)?;
    let isometry = full.columns(0, n_pairs).into_owned();
    let block = h.restrict(&isometry, &BasisSpec::fock(n_pairs)?)?;
    let direct_spectrum = hermitian_eigensystem(&block)?.values;

    let free = free_params(params);
    let mut predicted_spectrum: Vec<T> = (0..n_pairs).map(|n| free.energy(pair_momentum(params, n))).collect();
    predicted_spectrum.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));

    let max_deviation = direct_spectrum
        .iter()
        .zip(&predicted_spectrum)
        .map(|(d, p)| (*d - *p).abs())
        .fold(T::zero(), |m, x| if x > m { x } else { m });

    Ok(ReductionResult {
        p0: p0_of(params),
        h0: free.h0,
        mass: free.mass,
        condensate: free.condensate,
        direct_spectrum,
        predicted_spectrum,
        max_deviation,
        tolerance: tol,
        passed: max_deviation <= tol,
    })
}

/// K-form built from the pair triple against the direct Hamiltonian, over the
/// whole two-mode space.
pub fn check_k_form<T: Real>(
    params: &ModelParams<T>,
    dim_a: usize,
    dim_b: usize,
    spec: &CheckSpec,
) -> Result<CheckReport> {
    let direct = build_direct_hamiltonian(params, dim_a, dim_b)?;
    let k_form = build_k_form(params, &two_mode::<T>(dim_a, dim_b)?)?;
    let residual = k_form.minus(&direct)?.maxabs().to_f64_lossy();
    Ok(std::iter::once(Check::new("k_form_vs_direct", residual, spec.tolerance)).collect())
}

/// K-form built from the phase-momentum triple at the reducing `P₀`, against
/// `H₀ + P²/2m`, on a Circle basis starting at `p = 1 − P₀` so that basis
/// index `n` is pair level `n`.
pub fn check_free_particle_operator<T: Real>(
    params: &ModelParams<T>,
    count: usize,
    spec: &CheckSpec,
) -> Result<CheckReport> {
    let p0 = p0_of(params);
    let basis = BasisSpec::circle(T::one() - p0, count)?;
    let triple = saf_realization(C::new(p0, T::zero()), &basis)?;
    let k_form = build_k_form(params, &triple)?;
    let free = free_params(params);
    let momenta = basis.momenta().expect("circle basis");
    let target =
        OperatorMatrix::from_real_diagonal(&basis, &momenta.iter().map(|&p| free.energy(p)).collect::<Vec<_>>())?;
    let projector = interior_projector(&basis, spec.margin)?;
    let residual = k_form.minus(&target)?.sandwich(&projector)?.maxabs().to_f64_lossy();
    Ok(std::iter::once(
        Check::new("k_form_saf_vs_free_particle", residual, spec.tolerance)
            .with_meta("p0", format!("{p0}"))
            .with_meta("margin", spec.margin.to_string()),
    )
    .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::casimir_su11;
    use crate::linops::BasisSpec;

    fn model(e: f64, f1: f64, f2: f64) -> ModelParams<f64> {
        ModelParams::new(e, f1, f2).unwrap()
    }

    fn diag_formula(m: &ModelParams<f64>, na: usize, nb: usize) -> f64 {
        let (na, nb) = (na as f64, nb as f64);
        m.epsilon() * (na + nb) + m.phi2() * na * nb + m.phi1() * (na * (na - 1.0) + nb * (nb - 1.0))
    }

    #[test]
    fn direct_hamiltonian_entries() {
        let m = model(1.0, 0.1, 0.3);
        let h = build_direct_hamiltonian(&m, 5, 5).unwrap();
        assert_eq!(h.get(0, 0).re, 0.0);
        // |1,1> = index 6, |2,2> = index 12
        assert!((h.get(6, 6).re - 2.3).abs() < 1e-14);
        assert!((h.get(12, 12).re - 5.6).abs() < 1e-13);
        let basis = h.basis().clone();
        for i in 0..25 {
            let (na, nb) = basis.split_index(i).unwrap();
            assert!((h.get(i, i).re - diag_formula(&m, na, nb)).abs() < 1e-12);
        }
        assert!(h.hermiticity_residual() == 0.0);
        let off: f64 = (0..25)
            .flat_map(|i| (0..25).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| h.get(i, j).norm())
            .fold(0.0, f64::max);
        assert_eq!(off, 0.0);
    }

    #[test]
    fn k_form_matches_direct() {
        let m = model(1.0, 0.1, 0.3);
        let r = check_k_form(&m, 6, 7, &CheckSpec::default()).unwrap();
        assert!(r.overall_passed(), "{r:?}");
    }

    #[test]
    fn free_oscillators_k_form() {
        let m = ModelParams::new(1.5, 0.0, 1e-3).unwrap();
        let free = ModelParams {
            epsilon: 1.5,
            phi1: 0.0,
            phi2: 0.0,
        };
        let t = two_mode::<f64>(5, 5).unwrap();
        let h = build_k_form(&free, &t).unwrap();
        for i in 0..25 {
            let (na, nb) = t.basis().split_index(i).unwrap();
            assert!((h.get(i, i).re - 1.5 * (na + nb) as f64).abs() < 1e-13);
        }
        assert!(build_k_form(&m, &t).is_ok());
    }

    #[test]
    fn k_form_rejects_spin_triples() {
        let spin = crate::reps::hp_spin::<f64>(crate::reps::Spin::new(1.0).unwrap(), crate::reps::Fidelity::Corrected)
            .unwrap();
        assert!(matches!(
            build_k_form(&model(1.0, 0.1, 0.3), &spin),
            Err(Error::Kind { .. })
        ));
    }

    #[test]
    fn p0_examples() {
        assert!((p0_of(&model(1.0, 0.1, 0.3)) + 0.8).abs() < 1e-15);
        assert!(p0_of(&model(0.6, 0.1, 0.3)).abs() < 1e-15);
        assert!((p0_of(&model(0.0, 0.5, 0.0)) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn free_particle_examples() {
        let f = free_params(&model(1.0, 0.1, 0.3));
        assert!((f.h0 + 1.62).abs() < 1e-14);
        assert!((f.mass - 1.0).abs() < 1e-15);
        assert!(f.condensate);
        assert_eq!(free_params(&model(0.4, 0.4, 0.1)).h0, 0.0);
        assert!(!free_params(&model(1.0, -0.4, 0.1)).condensate);
    }

    #[test]
    fn singular_curvature_is_rejected() {
        assert!(ModelParams::new(1.0, 0.5, -1.0).is_err());
        assert!(ModelParams::new(1.0, 0.5, -1.0 + 1e-9).is_err());
        assert!(ModelParams::new(1.0, 0.5, -1.0 + 1e-6).is_ok());
        assert!(ModelParams::new(f64::NAN, 0.1, 0.3).is_err());
    }

    #[test]
    fn closed_form_pair_energies() {
        let m = model(1.0, 0.1, 0.3);
        assert_eq!(pair_energy_closed_form(&m, 0), 0.0);
        assert!((pair_energy_closed_form(&m, 2) - 5.6).abs() < 1e-14);
        assert!((pair_energy_closed_form(&model(1.0, 0.0, 1e-3), 3) - (6.0 + 9e-3)).abs() < 1e-14);
    }

    #[test]
    fn pair_subspace_layout() {
        let v = pair_subspace::<f64>(3, 3).unwrap();
        assert_eq!((v.nrows(), v.ncols()), (9, 3));
        for (col, row) in [0usize, 4, 8].into_iter().enumerate() {
            assert_eq!(v[(row, col)].re, 1.0);
        }
        assert_eq!(v.iter().filter(|z| z.norm() > 0.0).count(), 3);
        assert!(pair_subspace::<f64>(3, 4).is_err());
    }

    #[test]
    fn pair_block_of_generators() {
        let dim = 8;
        let t = two_mode::<f64>(dim, dim).unwrap();
        let v = pair_subspace::<f64>(dim, dim).unwrap();
        let target = BasisSpec::fock(dim).unwrap();
        let k0 = t.k0.restrict(&v, &target).unwrap();
        for n in 0..dim {
            assert!((k0.get(n, n).re - (n as f64 + 0.5)).abs() < 1e-15);
        }
        let c = casimir_su11(&t).unwrap().restrict(&v, &target).unwrap();
        for n in 0..dim - 1 {
            assert!((c.get(n, n).re + 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn reduction_reference_point() {
        let r = verify_reduction(&model(1.0, 0.1, 0.3), 16, 1e-9).unwrap();
        assert!((r.direct_spectrum[0]).abs() < 1e-12);
        assert!((r.predicted_spectrum[0]).abs() < 1e-12);
        assert!((r.direct_spectrum[1] - 2.3).abs() < 1e-12);
        assert!((r.predicted_spectrum[1] - 2.3).abs() < 1e-12);
        assert!(r.passed);
        assert!(r.predicted_spectrum.iter().all(|&e| e >= r.h0));
    }

    #[test]
    fn reduction_domain_errors() {
        let m = model(1.0, 0.1, 0.3);
        assert!(verify_reduction(&m, 1, 1e-9).is_err());
        assert!(verify_reduction_with_dim(&m, 8, 9, 1e-9).is_err());
        assert!(verify_reduction(&m, 8, 0.0).is_err());
    }

    #[test]
    fn operator_level_free_particle() {
        let m = model(1.0, 0.1, 0.3);
        let r = check_free_particle_operator(&m, 24, &CheckSpec::new(1, 1e-10).unwrap()).unwrap();
        assert!(r.overall_passed(), "{r:?}");
    }
}
