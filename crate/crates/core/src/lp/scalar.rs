use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Arithmetic used by the simplex engine.
///
/// `f64` runs with tolerances; `BigRational` runs exactly (all tolerances
/// are zero) and is meant for certifying small instances.
pub trait Scalar: Clone + Debug + PartialOrd + Signed + Send + Sync {
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Primal feasibility tolerance on bounds.
    fn feas_tol() -> Self;
    /// Smallest tableau entry accepted as a pivot.
    fn pivot_tol() -> Self;
    /// Reduced-cost tolerance for dual feasibility and degeneracy.
    fn dual_tol() -> Self;

    /// `row[s] -= f * pivot[s]` for every `s`, flushing to zero what falls
    /// below the noise floor.
    fn eliminate(row: &mut [Self], f: &Self, pivot: &[Self]) {
        for (v, p) in row.iter_mut().zip(pivot) {
            if !p.is_zero() {
                *v = clean(v.clone() - f.clone() * p.clone());
            }
        }
    }
}

/// Zeroes values below `pivot_tol * 1e-4`; the identity in exact mode.
pub fn clean<T: Scalar>(v: T) -> T {
    if v.abs() < T::pivot_tol() * T::from_f64(1e-4) {
        T::zero()
    } else {
        v
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn feas_tol() -> Self {
        1e-9
    }
    fn pivot_tol() -> Self {
        1e-9
    }
    fn dual_tol() -> Self {
        1e-11
    }

    fn eliminate(row: &mut [f64], f: &f64, pivot: &[f64]) {
        let f = *f;
        for (v, p) in row.iter_mut().zip(pivot) {
            let x = *v - f * p;
            *v = if x.abs() < 1e-13 { 0.0 } else { x };
        }
    }
}

impl Scalar for BigRational {
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite coefficient")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn feas_tol() -> Self {
        BigRational::zero()
    }
    fn pivot_tol() -> Self {
        BigRational::zero()
    }
    fn dual_tol() -> Self {
        BigRational::zero()
    }
}

/// Exact rational from a small fraction, handy in tests and oracles.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
