//! Scalar abstraction shared by every operator constructor.

use nalgebra as na;
use num_complex::Complex;
use num_traits as nt;

/// Real scalar the matrices are built over (`f64` by default, `f32` supported).
///
/// Tolerances in this crate are calibrated for `f64`. The `f32` instance
/// carries looser structural tolerances so the same constructors remain usable.
pub trait Real: Copy + nt::FloatConst + nt::FromPrimitive + nt::ToPrimitive + na::RealField {
    /// Largest `‖A − A†‖` accepted as Hermitian by the eigensolver.
    const HERMITICITY_TOL: f64;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as nt::FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::lit(n as f64)
    }

    fn to_f64_lossy(self) -> f64 {
        nt::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const HERMITICITY_TOL: f64 = 1e-10;
}

impl Real for f32 {
    const HERMITICITY_TOL: f64 = 1e-4;
}

/// Complex entry type of every operator matrix.
pub type C<T> = Complex<T>;

pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `|z|`.
pub fn modulus<T: Real>(z: C<T>) -> T {
    z.re.hypot(z.im)
}

/// `e^{iθ}`.
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}
