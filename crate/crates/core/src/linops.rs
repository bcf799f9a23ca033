//! Dense complex matrices tagged with the basis they act on.
//!
//! Every operator in the crate is an [`OperatorMatrix`]: a square complex
//! matrix plus the [`BasisSpec`] describing what its rows and columns label.
//! Binary operations refuse operands on different bases, which catches most
//! index-convention mistakes at the point where they happen.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::scalar::{cis, modulus, re, Real, C};

/// Labels the states a matrix acts on.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisSpec<T> {
    /// Truncated occupation-number basis of one or two bosonic modes.
    ///
    /// For two modes the flat index is `n_a * dim_b + n_b`.
    Fock { dims: Vec<usize> },
    /// Momentum eigenbasis of a periodic coordinate; state `j` carries
    /// momentum `p_min + j`.
    Circle { p_min: T, count: usize },
}

impl<T: Real> BasisSpec<T> {
    pub fn fock(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(domain("Fock dimension must be positive"));
        }
        Ok(BasisSpec::Fock { dims: vec![dim] })
    }

    pub fn fock2(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(domain("Fock dimensions must be positive"));
        }
        Ok(BasisSpec::Fock {
            dims: vec![dim_a, dim_b],
        })
    }

    pub fn circle(p_min: T, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(domain("circle basis needs at least one momentum state"));
        }
        if !p_min.is_finite() {
            return Err(domain("circle basis offset must be finite"));
        }
        Ok(BasisSpec::Circle { p_min, count })
    }

    /// Total number of basis states.
    pub fn dim(&self) -> usize {
        match self {
            BasisSpec::Fock { dims } => dims.iter().product(),
            BasisSpec::Circle { count, .. } => *count,
        }
    }

    pub fn is_fock(&self) -> bool {
        matches!(self, BasisSpec::Fock { .. })
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, BasisSpec::Circle { .. })
    }

    /// Number of bosonic modes (Circle bases count as one).
    pub fn modes(&self) -> usize {
        match self {
            BasisSpec::Fock { dims } => dims.len(),
            BasisSpec::Circle { .. } => 1,
        }
    }

    /// Momentum eigenvalues of a Circle basis, ascending.
    pub fn momenta(&self) -> Option<Vec<T>> {
        match self {
            BasisSpec::Circle { p_min, count } => Some((0..*count).map(|j| *p_min + T::from_usize_lossy(j)).collect()),
            BasisSpec::Fock { .. } => None,
        }
    }

    /// Splits a two-mode flat index into `(n_a, n_b)`.
    pub fn split_index(&self, idx: usize) -> Option<(usize, usize)> {
        match self {
            BasisSpec::Fock { dims } if dims.len() == 2 => Some((idx / dims[1], idx % dims[1])),
            _ => None,
        }
    }
}

impl<T: Real> fmt::Display for BasisSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSpec::Fock { dims } => {
                let dims: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                write!(f, "Fock[{}]", dims.join("x"))
            }
            BasisSpec::Circle { p_min, count } => {
                write!(f, "Circle[p_min={}, count={}]", p_min, count)
            }
        }
    }
}

/// Square complex matrix acting on a [`BasisSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<T: Real> {
    basis: BasisSpec<T>,
    entries: DMatrix<C<T>>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn from_entries(basis: BasisSpec<T>, entries: DMatrix<C<T>>) -> Result<Self> {
        let d = basis.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::Dimension(format!(
                "{}x{} entries on basis {} of dimension {}",
                entries.nrows(),
                entries.ncols(),
                basis,
                d
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(domain("operator entries must be finite"));
        }
        Ok(Self { basis, entries })
    }

    pub fn zeros(basis: &BasisSpec<T>) -> Self {
        let d = basis.dim();
        Self {
            basis: basis.clone(),
            entries: DMatrix::zeros(d, d),
        }
    }

    pub fn identity(basis: &BasisSpec<T>) -> Self {
        let d = basis.dim();
        Self {
            basis: basis.clone(),
            entries: DMatrix::identity(d, d),
        }
    }

    /// Diagonal operator with entries `f(i)` for basis index `i`.
    pub fn from_diagonal_fn(basis: &BasisSpec<T>, f: impl Fn(usize) -> C<T>) -> Self {
        let d = basis.dim();
        let diag = DVector::from_fn(d, |i, _| f(i));
        Self {
            basis: basis.clone(),
            entries: DMatrix::from_diagonal(&diag),
        }
    }

    pub fn from_real_diagonal(basis: &BasisSpec<T>, values: &[T]) -> Result<Self> {
        if values.len() != basis.dim() {
            return Err(Error::Dimension(format!(
                "{} diagonal values for basis {}",
                values.len(),
                basis
            )));
        }
        Ok(Self::from_diagonal_fn(basis, |i| re(values[i])))
    }

    pub(crate) fn from_fn(basis: &BasisSpec<T>, f: impl Fn(usize, usize) -> C<T>) -> Self {
        let d = basis.dim();
        Self {
            basis: basis.clone(),
            entries: DMatrix::from_fn(d, d, f),
        }
    }

    pub fn basis(&self) -> &BasisSpec<T> {
        &self.basis
    }

    pub fn entries(&self) -> &DMatrix<C<T>> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C<T>> {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.entries[(row, col)]
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        self.entries.diagonal().iter().copied().collect()
    }

    fn same_basis(&self, other: &Self, op: &str) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::Dimension(format!(
                "{op}: operands on {} and {}",
                self.basis, other.basis
            )));
        }
        Ok(())
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_basis(other, "product")?;
        Ok(Self {
            basis: self.basis.clone(),
            entries: sparse_aware_product(&self.entries, &other.entries),
        })
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.same_basis(other, "sum")?;
        Ok(Self {
            basis: self.basis.clone(),
            entries: &self.entries + &other.entries,
        })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.same_basis(other, "difference")?;
        Ok(Self {
            basis: self.basis.clone(),
            entries: &self.entries - &other.entries,
        })
    }

    pub fn scale(&self, factor: C<T>) -> Self {
        Self {
            basis: self.basis.clone(),
            entries: self.entries.map(|z| z * factor),
        }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(re(factor))
    }

    /// `self + c·I`.
    pub fn shift(&self, c: C<T>) -> Self {
        let mut entries = self.entries.clone();
        for i in 0..entries.nrows() {
            entries[(i, i)] += c;
        }
        Self {
            basis: self.basis.clone(),
            entries,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            basis: self.basis.clone(),
            entries: self.entries.map(|z| z.conj()).transpose(),
        }
    }

    /// `self^n` by repeated multiplication (`n = 0` gives the identity).
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity(&self.basis);
        for _ in 0..n {
            acc.entries = &acc.entries * &self.entries;
        }
        acc
    }

    /// Same entries, read on another basis of equal dimension.
    pub fn relabel(&self, basis: &BasisSpec<T>) -> Result<Self> {
        Self::from_entries(basis.clone(), self.entries.clone())
    }

    /// Restriction `V† · self · V` onto the span of the isometry's columns.
    ///
    /// `isometry` is `dim × m`; the result lives on `target`, which must have
    /// dimension `m`.
    pub fn restrict(&self, isometry: &DMatrix<C<T>>, target: &BasisSpec<T>) -> Result<Self> {
        if isometry.nrows() != self.dim() || isometry.ncols() != target.dim() {
            return Err(Error::Dimension(format!(
                "isometry is {}x{}, operator dimension {}, target {}",
                isometry.nrows(),
                isometry.ncols(),
                self.dim(),
                target
            )));
        }
        let v_dag = isometry.map(|z| z.conj()).transpose();
        Ok(Self {
            basis: target.clone(),
            entries: v_dag * &self.entries * isometry,
        })
    }

    /// Largest absolute entry.
    pub fn maxabs(&self) -> T {
        self.entries
            .iter()
            .map(|z| modulus(*z))
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }

    /// `‖self − self†‖` in the max-abs norm.
    pub fn hermiticity_residual(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in i..d {
                let r = modulus(self.entries[(i, j)] - self.entries[(j, i)].conj());
                if r > worst {
                    worst = r;
                }
            }
        }
        worst
    }

    /// Projects both sides: `Π · self · Π`.
    pub fn sandwich(&self, projector: &Self) -> Result<Self> {
        self.same_basis(projector, "projection")?;
        let p = &projector.entries;
        let n = p.nrows();
        let diagonal = (0..n).all(|c| (0..n).all(|r| r == c || p[(r, c)] == C::new(T::zero(), T::zero())));
        if !diagonal {
            return projector.matmul(self)?.matmul(projector);
        }
        // Diagonal projectors (all the ones built here) scale rows and columns.
        Ok(Self {
            basis: self.basis.clone(),
            entries: DMatrix::from_fn(n, n, |r, c| p[(r, r)] * self.entries[(r, c)] * p[(c, c)]),
        })
    }
}

/// `a · b` one column at a time, skipping zero entries of `b`. The ladder
/// and projector matrices are mostly zeros and nalgebra has no fast path for
/// complex scalars.
fn sparse_aware_product<T: Real>(a: &DMatrix<C<T>>, b: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let zero = C::new(T::zero(), T::zero());
    let mut out = DMatrix::from_element(a.nrows(), b.ncols(), zero);
    for j in 0..b.ncols() {
        for k in 0..b.nrows() {
            let factor = b[(k, j)];
            if factor != zero {
                out.column_mut(j)
                    .axpy(factor, &a.column(k), C::new(T::one(), T::zero()));
            }
        }
    }
    out
}

impl<T: Real> std::ops::Neg for OperatorMatrix<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            basis: self.basis,
            entries: -self.entries,
        }
    }
}

/// `AB − BA`.
pub fn commutator<T: Real>(a: &OperatorMatrix<T>, b: &OperatorMatrix<T>) -> Result<OperatorMatrix<T>> {
    a.matmul(b)?.minus(&b.matmul(a)?)
}

/// Max-abs entry norm; the residual norm used throughout.
pub fn maxabs_norm<T: Real>(a: &OperatorMatrix<T>) -> T {
    a.maxabs()
}

/// Spectrum of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Eigensystem<T: Real> {
    /// Ascending.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: DMatrix<C<T>>,
}

impl<T: Real> Eigensystem<T> {
    /// `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> C<T>) -> DMatrix<C<T>> {
        let mut scaled = self.vectors.clone();
        for (j, lambda) in self.values.iter().enumerate() {
            let w = f(*lambda);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= w);
        }
        scaled * self.vectors.map(|z| z.conj()).transpose()
    }
}

fn require_hermitian<T: Real>(a: &OperatorMatrix<T>) -> Result<()> {
    let residual = a.hermiticity_residual();
    if residual.to_f64_lossy() > T::HERMITICITY_TOL {
        return Err(domain(format!(
            "operator is not Hermitian: max |A - A^dagger| = {:e} exceeds {:e}",
            residual.to_f64_lossy(),
            T::HERMITICITY_TOL
        )));
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian operator, eigenvalues ascending.
pub fn hermitian_eigensystem<T: Real>(a: &OperatorMatrix<T>) -> Result<Eigensystem<T>> {
    require_hermitian(a)?;
    // Symmetrize exactly so the solver sees a Hermitian input.
    let half = T::lit(0.5);
    let sym = (a.entries() + a.entries().map(|z| z.conj()).transpose()).map(|z| z * half);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let d = a.dim();
    let vectors = DMatrix::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigensystem { values, vectors })
}

/// Which exponential [`unitary_exp`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `e^{+iH}`
    Plus,
    /// `e^{-iH}`
    Minus,
}

/// `e^{±iH}` for Hermitian `H`, via its eigen-decomposition.
pub fn unitary_exp<T: Real>(h: &OperatorMatrix<T>, sign: Sign) -> Result<OperatorMatrix<T>> {
    let eig = hermitian_eigensystem(h)?;
    let s = match sign {
        Sign::Plus => T::one(),
        Sign::Minus => -T::one(),
    };
    let entries = eig.map_spectrum(|lambda| cis(s * lambda));
    OperatorMatrix::from_entries(h.basis().clone(), entries)
}

/// Kronecker product of two single-mode Fock operators onto the two-mode basis.
pub fn tensor<T: Real>(a: &OperatorMatrix<T>, b: &OperatorMatrix<T>) -> Result<OperatorMatrix<T>> {
    let single = |m: &OperatorMatrix<T>| match m.basis() {
        BasisSpec::Fock { dims } if dims.len() == 1 => Ok(dims[0]),
        other => Err(domain(format!("tensor needs single-mode Fock operators, got {other}"))),
    };
    let da = single(a)?;
    let db = single(b)?;
    OperatorMatrix::from_entries(BasisSpec::fock2(da, db)?, a.entries().kronecker(b.entries()))
}

/// Diagonal 0/1 operator keeping states at least `margin` away from every
/// truncation edge (per mode for two-mode bases).
pub fn interior_projector<T: Real>(basis: &BasisSpec<T>, margin: usize) -> Result<OperatorMatrix<T>> {
    let per_mode: Vec<usize> = match basis {
        BasisSpec::Fock { dims } => dims.clone(),
        BasisSpec::Circle { count, .. } => vec![*count],
    };
    if let Some(d) = per_mode.iter().find(|&&d| 2 * margin >= d) {
        return Err(domain(format!(
            "margin {margin} leaves no interior in a mode of dimension {d}"
        )));
    }
    let inside = |n: usize, d: usize| n >= margin && n + margin < d;
    let keep = |i: usize| match per_mode.as_slice() {
        [d] => inside(i, *d),
        [da, db] => inside(i / db, *da) && inside(i % db, *db),
        _ => unreachable!("bases have one or two modes"),
    };
    Ok(OperatorMatrix::from_diagonal_fn(basis, |i| {
        if keep(i) {
            C::new(T::one(), T::zero())
        } else {
            C::new(T::zero(), T::zero())
        }
    }))
}

/// Diagonal 0/1 operator keeping the states flagged in `mask`.
pub fn mask_projector<T: Real>(basis: &BasisSpec<T>, mask: &[bool]) -> Result<OperatorMatrix<T>> {
    if mask.len() != basis.dim() {
        return Err(Error::Dimension(format!(
            "mask of length {} for basis {}",
            mask.len(),
            basis
        )));
    }
    Ok(OperatorMatrix::from_diagonal_fn(basis, |i| {
        if mask[i] {
            C::new(T::one(), T::zero())
        } else {
            C::new(T::zero(), T::zero())
        }
    }))
}
