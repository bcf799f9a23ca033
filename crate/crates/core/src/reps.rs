//! Matrix realizations of the SU(1,1) and spin algebras.
//!
//! Fock-space realizations are built from the truncated ladder operator;
//! phase-momentum realizations live on a [`BasisSpec::Circle`] basis, where
//! `e^{±iX}` act as unit momentum shifts and `P` is diagonal.

use std::fmt;

use num_complex::Complex;

use crate::error::{domain, Result};
use crate::linops::{tensor, unitary_exp, BasisSpec, OperatorMatrix, Sign};
use crate::scalar::{re, Real, C};

/// Which algebra a triple claims to realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleKind {
    /// `[K₀,K±] = ±K±`, `[K₊,K₋] = −2K₀`.
    Hyperbolic,
    /// `[S_z,S±] = ±S±`, `[S₊,S₋] = 2S_z`.
    Spin,
}

impl TripleKind {
    pub fn name(self) -> &'static str {
        match self {
            TripleKind::Hyperbolic => "hyperbolic",
            TripleKind::Spin => "spin",
        }
    }
}

/// Build a realization exactly as typeset, or with the sign fix that makes
/// the spin algebra close.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fidelity {
    AsPrinted,
    Corrected,
}

impl fmt::Display for Fidelity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fidelity::AsPrinted => "as_printed",
            Fidelity::Corrected => "corrected",
        })
    }
}

/// Which quadrature plays the phase in the bosonic exponential forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoseForm {
    /// Phase `Q̂`, momentum `P̂`.
    Form1,
    /// Phase `−P̂`, momentum `Q̂`.
    Form2,
}

impl fmt::Display for BoseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoseForm::Form1 => "form1",
            BoseForm::Form2 => "form2",
        })
    }
}

/// A spin quantum number `S ∈ {1/2, 1, 3/2, …}`, stored as `2S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(domain("spin must be a positive half-integer"));
        }
        Ok(Spin(twice))
    }

    pub fn new(s: f64) -> Result<Self> {
        let twice = 2.0 * s;
        if !twice.is_finite() || twice < 1.0 || (twice - twice.round()).abs() > 1e-12 {
            return Err(domain(format!("spin {s} is not a positive half-integer")));
        }
        Self::from_twice(twice.round() as u32)
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    /// Dimension `2S + 1` of the spin multiplet.
    pub fn multiplicity(self) -> usize {
        self.0 as usize + 1
    }

    pub fn value<T: Real>(self) -> T {
        T::lit(self.0 as f64 / 2.0)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Parameters a triple was generated from.
#[derive(Debug, Clone, PartialEq)]
pub enum RepParams<T: Real> {
    /// Single-boson discrete-series realization with Bargmann index `k`.
    MlodinovPapanicolaou {
        k: T,
    },
    HolsteinPrimakoff {
        spin: Spin,
        fidelity: Fidelity,
    },
    Villain {
        spin: Spin,
        fidelity: Fidelity,
    },
    /// Single-mode phase-momentum realization with complex `P₀`.
    PhaseMomentum {
        p0: C<T>,
    },
    Perelomov {
        lambda: T,
    },
    /// Phase-momentum realization rewritten with bosonic quadratures.
    Bosonic {
        p0: C<T>,
        form: BoseForm,
    },
    /// `K₋ = ab`, `K₊ = a†b†`.
    TwoMode,
}

impl<T: Real> RepParams<T> {
    pub fn label(&self) -> String {
        match self {
            RepParams::MlodinovPapanicolaou { k } => format!("mp(k={k})"),
            RepParams::HolsteinPrimakoff { spin, fidelity } => format!("hp(S={spin}, {fidelity})"),
            RepParams::Villain { spin, fidelity } => format!("villain(S={spin}, {fidelity})"),
            RepParams::PhaseMomentum { p0 } => format!("saf(P0={})", fmt_complex(*p0)),
            RepParams::Perelomov { lambda } => format!("perelomov(lambda={lambda})"),
            RepParams::Bosonic { p0, form } => format!("saf_bose(P0={}, {form})", fmt_complex(*p0)),
            RepParams::TwoMode => "two_mode".to_string(),
        }
    }
}

pub(crate) fn fmt_complex<T: Real>(z: C<T>) -> String {
    if z.im < T::zero() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// How the finite matrices relate to the infinite-dimensional operators.
#[derive(Debug, Clone, PartialEq)]
pub enum Boundary {
    /// An infinite representation cut off at the basis edges; relations only
    /// hold away from the edges, so checks apply an interior margin.
    Truncated,
    /// A finite block that is exactly invariant; relations hold on the
    /// flagged states and the margin does not apply.
    Closed { support: Vec<bool> },
}

/// `(K₀, K₊, K₋)` or `(S_z, S₊, S₋)` on a common basis.
#[derive(Debug, Clone)]
pub struct AlgebraTriple<T: Real> {
    pub kind: TripleKind,
    pub k0: OperatorMatrix<T>,
    pub kplus: OperatorMatrix<T>,
    pub kminus: OperatorMatrix<T>,
    pub params: RepParams<T>,
    pub boundary: Boundary,
}

impl<T: Real> AlgebraTriple<T> {
    fn new(
        kind: TripleKind,
        k0: OperatorMatrix<T>,
        kplus: OperatorMatrix<T>,
        kminus: OperatorMatrix<T>,
        params: RepParams<T>,
        boundary: Boundary,
    ) -> Self {
        debug_assert!(k0.basis() == kplus.basis() && k0.basis() == kminus.basis());
        Self {
            kind,
            k0,
            kplus,
            kminus,
            params,
            boundary,
        }
    }

    pub fn basis(&self) -> &BasisSpec<T> {
        self.k0.basis()
    }

    /// `max |K₊ − K₋†|`; zero for realizations where adjointness holds.
    pub fn adjointness_residual(&self) -> T {
        self.kplus
            .minus(&self.kminus.adjoint())
            .expect("triple shares one basis")
            .maxabs()
    }

    /// Same matrices read on another basis of equal dimension.
    pub fn relabel(&self, basis: &BasisSpec<T>) -> Result<Self> {
        Ok(Self {
            kind: self.kind,
            k0: self.k0.relabel(basis)?,
            kplus: self.kplus.relabel(basis)?,
            kminus: self.kminus.relabel(basis)?,
            params: self.params.clone(),
            boundary: self.boundary.clone(),
        })
    }
}

fn require_positive<T: Real>(name: &str, x: T) -> Result<()> {
    if !(x.is_finite() && x > T::zero()) {
        return Err(domain(format!("{name} must be a finite positive number, got {x}")));
    }
    Ok(())
}

fn require_finite_complex<T: Real>(name: &str, z: C<T>) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain(format!("{name} must be finite")));
    }
    Ok(())
}

/// Truncated annihilation and creation operators on a Fock basis of `dim` states.
pub fn bose_ladder<T: Real>(dim: usize) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>)> {
    if dim < 2 {
        return Err(domain(format!("ladder operators need dim >= 2, got {dim}")));
    }
    let basis = BasisSpec::fock(dim)?;
    let a = OperatorMatrix::from_fn(&basis, |r, c| {
        if c == r + 1 {
            re(T::from_usize_lossy(c).sqrt())
        } else {
            C::new(T::zero(), T::zero())
        }
    });
    let adag = a.adjoint();
    Ok((a, adag))
}

/// Diagonal `f(n)` on a single-mode Fock basis.
fn number_fn<T: Real>(basis: &BasisSpec<T>, f: impl Fn(T) -> T) -> OperatorMatrix<T> {
    OperatorMatrix::from_diagonal_fn(basis, |n| re(f(T::from_usize_lossy(n))))
}

/// Bosonic discrete-series realization `K₀ = k + a†a`,
/// `K₋ = (2k + a†a)^{1/2} a`, `K₊ = K₋†`.
pub fn mp_realization<T: Real>(k: T, dim: usize) -> Result<AlgebraTriple<T>> {
    require_positive("Bargmann index k", k)?;
    let (a, adag) = bose_ladder::<T>(dim)?;
    let basis = a.basis().clone();
    let two_k = k + k;
    let root = number_fn(&basis, |n| (two_k + n).sqrt());
    let kminus = root.matmul(&a)?;
    let kplus = adag.matmul(&root)?;
    let k0 = number_fn(&basis, |n| k + n);
    Ok(AlgebraTriple::new(
        TripleKind::Hyperbolic,
        k0,
        kplus,
        kminus,
        RepParams::MlodinovPapanicolaou { k },
        Boundary::Truncated,
    ))
}

/// Holstein–Primakoff spin realization on the `2S + 1` occupation states.
///
/// `AsPrinted` uses `(2S + a†a)^{1/2}` in `S₊`, which breaks `S₊ = S₋†`.
pub fn hp_spin<T: Real>(spin: Spin, fidelity: Fidelity) -> Result<AlgebraTriple<T>> {
    let dim = spin.multiplicity();
    let (a, adag) = bose_ladder::<T>(dim)?;
    let basis = a.basis().clone();
    let s = spin.value::<T>();
    let two_s = s + s;
    // 2S - n >= 0 for every retained occupation n <= 2S.
    let lower_root = number_fn(&basis, |n| (two_s - n).max(T::zero()).sqrt());
    let raise_root = match fidelity {
        Fidelity::Corrected => lower_root.clone(),
        Fidelity::AsPrinted => number_fn(&basis, |n| (two_s + n).sqrt()),
    };
    let sminus = lower_root.matmul(&a)?;
    let splus = adag.matmul(&raise_root)?;
    let sz = number_fn(&basis, |n| n - s);
    Ok(AlgebraTriple::new(
        TripleKind::Spin,
        sz,
        splus,
        sminus,
        RepParams::HolsteinPrimakoff { spin, fidelity },
        Boundary::Closed {
            support: vec![true; dim],
        },
    ))
}

/// `(P, e^{iX}, e^{−iX})` on a Circle basis; `e^{iX}|p⟩ = |p+1⟩` with the top
/// state mapped to zero.
pub fn circle_momentum<T: Real>(
    basis: &BasisSpec<T>,
) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>, OperatorMatrix<T>)> {
    let momenta = basis
        .momenta()
        .ok_or_else(|| domain(format!("momentum operators need a Circle basis, got {basis}")))?;
    let p = OperatorMatrix::from_real_diagonal(basis, &momenta)?;
    let raise = OperatorMatrix::from_fn(basis, |r, c| {
        if r == c + 1 {
            C::new(T::one(), T::zero())
        } else {
            C::new(T::zero(), T::zero())
        }
    });
    let lower = raise.adjoint();
    Ok((p, raise, lower))
}

/// Squared Villain amplitude `f(p)²`.
fn villain_amplitude_sq<T: Real>(s: T, p: T, fidelity: Fidelity) -> T {
    let half = T::lit(0.5);
    let shifted = match fidelity {
        Fidelity::AsPrinted => p - half,
        Fidelity::Corrected => p + half,
    };
    (s + half) * (s + half) - shifted * shifted
}

/// Villain phase-momentum spin realization on a Circle basis.
///
/// `S_z = P`, `S₋ = f(P)e^{−iX}`, `S₊ = e^{iX}f(P)`. Negative `f(P)²` is
/// clamped to zero; the states where neither neighbouring amplitude is
/// clamped form the triple's support.
pub fn villain_spin<T: Real>(spin: Spin, basis: &BasisSpec<T>, fidelity: Fidelity) -> Result<AlgebraTriple<T>> {
    let (p, raise, lower) = circle_momentum(basis)?;
    let momenta = basis.momenta().expect("circle basis");
    let s = spin.value::<T>();
    let p_min = momenta[0];
    let p_max = momenta[momenta.len() - 1];
    let offset = p_min + s;
    if (offset - offset.round()).abs() > T::lit(1e-9) {
        return Err(domain(format!("p_min {p_min} is not congruent to S = {spin} modulo 1")));
    }
    let tiny = T::lit(1e-9);
    if p_min > -s + tiny || p_max < s - tiny {
        return Err(domain(format!(
            "momentum range [{p_min}, {p_max}] does not cover [-{spin}, {spin}]"
        )));
    }

    let amp_sq = |p: T| villain_amplitude_sq(s, p, fidelity);
    let amp = OperatorMatrix::from_diagonal_fn(basis, |j| re(amp_sq(momenta[j]).max(T::zero()).sqrt()));
    let sminus = amp.matmul(&lower)?;
    let splus = raise.matmul(&amp)?;

    let last = momenta.len() - 1;
    let support = momenta
        .iter()
        .enumerate()
        .map(|(j, &pj)| {
            let here = amp_sq(pj);
            let below = amp_sq(pj - T::one());
            let unclamped = here >= T::zero() && below >= T::zero();
            // The grid edge cuts e^{±iX}; it is harmless only where the amplitude vanishes.
            let top_ok = j < last || here <= T::zero();
            let bottom_ok = j > 0 || below <= T::zero();
            unclamped && top_ok && bottom_ok
        })
        .collect();

    Ok(AlgebraTriple::new(
        TripleKind::Spin,
        p,
        splus,
        sminus,
        RepParams::Villain { spin, fidelity },
        Boundary::Closed { support },
    ))
}

/// Single-mode phase-momentum realization with complex `P₀`:
/// `K₋ = (P + P₀)e^{−iX}`, `K₊ = e^{iX}(P + P₀*)`, `K₀ = P + Re P₀ − 1/2`.
pub fn saf_realization<T: Real>(p0: C<T>, basis: &BasisSpec<T>) -> Result<AlgebraTriple<T>> {
    require_finite_complex("P0", p0)?;
    let (p, raise, lower) = circle_momentum(basis)?;
    let kminus = p.shift(p0).matmul(&lower)?;
    let kplus = raise.matmul(&p.shift(p0.conj()))?;
    let k0 = p.shift(re(p0.re - T::lit(0.5)));
    Ok(AlgebraTriple::new(
        TripleKind::Hyperbolic,
        k0,
        kplus,
        kminus,
        RepParams::PhaseMomentum { p0 },
        Boundary::Truncated,
    ))
}

/// Angle-derivative realization `K₀ = −i d/dθ`,
/// `K± = −i e^{±iθ} d/dθ ∓ (−1/2 + iλ) e^{±iθ}`, transcribed with
/// `−i d/dθ → P` and `e^{±iθ} → e^{±iX}`.
pub fn perelomov_realization<T: Real>(lambda: T, basis: &BasisSpec<T>) -> Result<AlgebraTriple<T>> {
    require_positive("lambda", lambda)?;
    let (p, raise, lower) = circle_momentum(basis)?;
    let c = Complex::new(T::lit(-0.5), lambda);
    let kplus = raise.matmul(&p)?.minus(&raise.scale(c))?;
    let kminus = lower.matmul(&p)?.plus(&lower.scale(c))?;
    Ok(AlgebraTriple::new(
        TripleKind::Hyperbolic,
        p,
        kplus,
        kminus,
        RepParams::Perelomov { lambda },
        Boundary::Truncated,
    ))
}

/// `Q = (α + α†)/√2`, `P = (α − α†)/(i√2)` on a Fock basis.
pub fn quadratures<T: Real>(dim: usize) -> Result<(OperatorMatrix<T>, OperatorMatrix<T>)> {
    if dim < 4 {
        return Err(domain(format!("quadratures need dim >= 4, got {dim}")));
    }
    let (a, adag) = bose_ladder::<T>(dim)?;
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    let q = a.plus(&adag)?.scale_real(inv_sqrt2);
    // 1/(i√2) = −i/√2
    let p = a.minus(&adag)?.scale(Complex::new(T::zero(), -inv_sqrt2));
    Ok((q, p))
}

/// Phase-momentum realization expressed through bosonic quadratures.
///
/// `Form1`: `K₋ = (P̂ + P₀)e^{−iQ̂}`, `K₊ = e^{iQ̂}(P̂ + P₀*)`, `K₀ = P̂ + Re P₀ − 1/2`.
/// `Form2` substitutes phase `−P̂` and momentum `Q̂`:
/// `K₋ = (Q̂ + P₀)e^{iP̂}`, `K₊ = e^{−iP̂}(Q̂ + P₀*)`, `K₀ = Q̂ + Re P₀ − 1/2`.
pub fn saf_bose_form<T: Real>(p0: C<T>, dim: usize, form: BoseForm) -> Result<AlgebraTriple<T>> {
    require_finite_complex("P0", p0)?;
    if dim < 16 {
        return Err(domain(format!("bosonic exponential forms need dim >= 16, got {dim}")));
    }
    let (q, p) = quadratures::<T>(dim)?;
    let (momentum, phase) = match form {
        BoseForm::Form1 => (p, q),
        BoseForm::Form2 => (q, -p),
    };
    let raise = unitary_exp(&phase, Sign::Plus)?;
    let lower = unitary_exp(&phase, Sign::Minus)?;
    let kminus = momentum.shift(p0).matmul(&lower)?;
    let kplus = raise.matmul(&momentum.shift(p0.conj()))?;
    let k0 = momentum.shift(re(p0.re - T::lit(0.5)));
    Ok(AlgebraTriple::new(
        TripleKind::Hyperbolic,
        k0,
        kplus,
        kminus,
        RepParams::Bosonic { p0, form },
        Boundary::Truncated,
    ))
}

/// Pair realization `K₋ = a⊗b`, `K₊ = a†⊗b†`, `K₀ = (n_a + n_b + 1)/2`.
pub fn two_mode<T: Real>(dim_a: usize, dim_b: usize) -> Result<AlgebraTriple<T>> {
    if dim_a < 4 || dim_b < 4 {
        return Err(domain(format!(
            "two-mode realization needs dims >= 4, got {dim_a}x{dim_b}"
        )));
    }
    let (a, adag) = bose_ladder::<T>(dim_a)?;
    let (b, bdag) = bose_ladder::<T>(dim_b)?;
    let kminus = tensor(&a, &b)?;
    let kplus = tensor(&adag, &bdag)?;
    let basis = kminus.basis().clone();
    let half = T::lit(0.5);
    let k0 = OperatorMatrix::from_diagonal_fn(&basis, |i| {
        let (na, nb) = basis.split_index(i).expect("two-mode basis");
        re((T::from_usize_lossy(na) + T::from_usize_lossy(nb) + T::one()) * half)
    });
    Ok(AlgebraTriple::new(
        TripleKind::Hyperbolic,
        k0,
        kplus,
        kminus,
        RepParams::TwoMode,
        Boundary::Truncated,
    ))
}
