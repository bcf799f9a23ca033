//! Finite-matrix realizations of the SU(1,1) and spin algebras.
//!
//! Operators are dense complex matrices on truncated Fock or circle-momentum
//! bases. The crate builds the bosonic, phase-momentum and pair realizations,
//! checks their commutators and Casimir invariants away from the truncation
//! edges, and verifies the reduction of two coupled nonlinear oscillators in
//! the pair sector to a free particle.
//!
//! Everything is generic over the real scalar ([`Real`]); the aliases at the
//! crate root fix it to `f64`, which is what the tolerances are calibrated for.

pub mod algebra;
pub mod error;
pub mod linops;
pub mod reduction;
pub mod report;
pub mod reps;
pub mod scalar;

pub use error::{Error, Result};
pub use linops::{
    commutator, hermitian_eigensystem, interior_projector, mask_projector, maxabs_norm, tensor, unitary_exp, BasisSpec,
    Eigensystem, OperatorMatrix, Sign,
};
pub use report::{Check, CheckReport};
pub use reps::{AlgebraTriple, BoseForm, Boundary, Fidelity, RepParams, Spin, TripleKind};
pub use scalar::Real;

/// Complex entry type at double precision.
pub type Complex64 = num_complex::Complex<f64>;
pub type Basis = BasisSpec<f64>;
pub type Operator = OperatorMatrix<f64>;
pub type Triple = AlgebraTriple<f64>;
pub type Params = RepParams<f64>;
pub type Model = reduction::ModelParams<f64>;
pub type Reduction = reduction::ReductionResult<f64>;

/// Truncation sizes and tolerances used when a caller does not choose.
pub mod defaults {
    /// Single-mode Fock dimension.
    pub const FOCK_DIM: usize = 64;
    /// Per-mode dimension for two-mode checks.
    pub const TWO_MODE_DIM: usize = 24;
    pub const CIRCLE_COUNT: usize = 64;
    pub const MARGIN: usize = 2;
    pub const TOLERANCE: f64 = 1e-10;
    /// Tolerance on pair-spectrum deviations.
    pub const REDUCTION_TOLERANCE: f64 = 1e-9;
    pub const PAIRS: usize = 16;
    /// The bosonic exponential forms only close up to truncation error; at
    /// this dimension with margin `dim/4` the residuals sit at roundoff
    /// (~3e-13), bounded by [`BOSE_FORM_TOLERANCE`].
    pub const BOSE_FORM_DIM: usize = 128;
    pub const BOSE_FORM_TOLERANCE: f64 = 1e-11;
}
