//! Coulomb potential averaged over an anisotropic Gaussian.
//!
//! For transverse variance `a2_perp`, longitudinal variance `a2_par` and
//! anchor `(rho0, z0)` the smeared potential `<-1/|x + x0|>` reduces to the
//! one-dimensional integral
//!
//! ```text
//! -sqrt(2 a2_par / pi) * int_0^1 dxi / D(xi) * exp(-xi^2/2 [rho0^2/D(xi) + z0^2/a2_par])
//! D(xi) = a2_par + xi^2 (a2_perp - a2_par)
//! ```
//!
//! which is evaluated with the adaptive Gauss-Kronrod rule of
//! [`crate::quadrature`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadOptions};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmearingInput<T> {
    pub a2_perp: T,
    pub a2_par: T,
    pub rho0: T,
    pub z0: T,
}

/// Default tolerance for the smearing integral.
pub const SMEARING_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-13,
    rel_tol: 1e-12,
    max_intervals: 2000,
};

/// Smeared Coulomb energy (strictly negative).
pub fn coulomb_expectation<T: Real>(input: &SmearingInput<T>) -> Result<T> {
    coulomb_expectation_with(input, SMEARING_QUAD)
}

pub fn coulomb_expectation_with<T: Real>(input: &SmearingInput<T>, opts: QuadOptions) -> Result<T> {
    let SmearingInput { a2_perp, a2_par, rho0, z0 } = *input;
    if !(a2_perp > T::zero() && a2_par > T::zero()) || !(a2_perp.is_finite() && a2_par.is_finite()) {
        return Err(Error::domain(format!(
            "widths must be positive and finite, got a2_perp = {a2_perp}, a2_par = {a2_par}"
        )));
    }
    if !(rho0.is_finite() && z0.is_finite()) {
        return Err(Error::domain("anchor position must be finite"));
    }
    let rho2 = rho0 * rho0;
    let zeta = z0 * z0 / a2_par;
    let diff = a2_perp - a2_par;
    let integrand = |xi: T| {
        let x2 = xi * xi;
        let d = a2_par + x2 * diff;
        (-(x2 * T::half()) * (rho2 / d + zeta)).exp() / d
    };
    // The integrand decays like exp(-xi^2 / (2 s^2)); resolve that scale
    // with geometric breakpoints when it is much narrower than [0, 1].
    let inv_s2 = rho2 / a2_perp.max(a2_par) + zeta;
    let mut points = vec![T::zero()];
    if inv_s2 > T::one() {
        let mut x = inv_s2.sqrt().recip();
        while x < T::one() {
            points.push(x);
            x = x * T::two();
        }
    }
    points.push(T::one());
    let r = integrate_with_breaks(integrand, &points, opts)?;
    let pref = (T::two() * a2_par / T::PI()).sqrt();
    Ok(-pref * r.value)
}

/// `K(eta) = int_0^1 dxi / (1 + (eta - 1) xi^2)` in its three real forms.
fn origin_kernel<T: Real>(eta: T) -> T {
    let w = T::one() - eta;
    if w.abs() < T::lit(0.1) {
        // sum_k w^k / (2k + 1); 0.1^k shrinks past any working precision by k = 40.
        let mut sum = T::zero();
        let mut p = T::one();
        for k in 0..40 {
            sum = sum + p / T::from_usize(2 * k + 1).unwrap();
            p = p * w;
        }
        sum
    } else if eta > T::one() {
        let v = (eta - T::one()).sqrt();
        v.atan() / v
    } else {
        let u = w.sqrt();
        u.atanh() / u
    }
}

/// `<1/|x|>` at the origin in the zero-temperature limit, where the widths
/// are `a2_perp = 1/omega_perp2` and `a2_par = 1/(2 omega_par)`.
///
/// With `eta = 2 omega_par / omega_perp2` the three branches are
///
/// ```text
/// eta > 1:  (2/sqrt(pi)) sqrt(op w2 / (2 op - w2)) arctan sqrt(eta - 1)
/// eta = 1:  (2/sqrt(pi)) sqrt(op)
/// eta < 1:  (2/sqrt(pi)) sqrt(op w2 / (w2 - 2 op)) artanh sqrt(1 - eta)
/// ```
pub fn coulomb_expectation_origin_t0<T: Real>(omega_par: T, omega_perp2: T) -> Result<T> {
    check_positive(omega_par, omega_perp2)?;
    let eta = T::two() * omega_par / omega_perp2;
    Ok(T::two() / T::PI().sqrt() * omega_par.sqrt() * origin_kernel(eta))
}

/// First branch with the prefactor `sqrt(op w2 / (op - w2))` as it is often
/// quoted.  It is real only for `omega_par > omega_perp2` and disagrees with
/// the smearing integral; kept for comparison.
pub fn coulomb_expectation_origin_t0_quoted<T: Real>(omega_par: T, omega_perp2: T) -> Result<T> {
    check_positive(omega_par, omega_perp2)?;
    if omega_par <= omega_perp2 {
        return Err(Error::domain("quoted prefactor is imaginary for omega_par <= omega_perp2"));
    }
    let v = (T::two() * omega_par / omega_perp2 - T::one()).sqrt();
    let pref = (omega_par * omega_perp2 / (omega_par - omega_perp2)).sqrt();
    Ok(T::two() / T::PI().sqrt() * pref * v.atan())
}

fn check_positive<T: Real>(omega_par: T, omega_perp2: T) -> Result<()> {
    if omega_par > T::zero() && omega_perp2 > T::zero() && omega_par.is_finite() && omega_perp2.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "frequencies must be positive, got omega_par = {omega_par}, omega_perp2 = {omega_perp2}"
        )))
    }
}
