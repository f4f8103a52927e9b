//! Thermodynamics of the anisotropic harmonic trial system.
//!
//! The trial action couples the two transverse coordinates through an
//! angular-momentum term, which splits them into normal modes
//! `Omega_pm = |Omega_perp1 +- Omega_perp2| / 2`.  With the path average
//! pinned, each mode contributes a factor `(b Omega/2) / sinh(b Omega/2)` to
//! the restricted partition function.
//!
//! The fluctuation widths are obtained as derivatives of the restricted free
//! energy `F = -(1/beta) ln Z`:
//!
//! ```text
//! b2_perp = dF/dOmega_perp1,  a2_perp = 4 dF/d(Omega_perp2^2),  a2_par = 2 dF/d(Omega_par^2)
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

/// Variational trial frequencies in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyTriple<T> {
    pub omega_perp1: T,
    pub omega_perp2: T,
    pub omega_par: T,
}

impl<T: Real> FrequencyTriple<T> {
    pub fn new(omega_perp1: T, omega_perp2: T, omega_par: T) -> Result<Self> {
        let f = Self { omega_perp1, omega_perp2, omega_par };
        f.validate()?;
        Ok(f)
    }

    /// The far-field optimum `(omega_c, omega_c, 0)`.
    pub fn far_field(omega_c: T) -> Self {
        Self { omega_perp1: omega_c, omega_perp2: omega_c, omega_par: T::zero() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega_perp1", self.omega_perp1),
            ("omega_perp2", self.omega_perp2),
            ("omega_par", self.omega_par),
        ] {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::domain(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(())
    }

    pub fn map<U>(self, f: impl Fn(T) -> U) -> FrequencyTriple<U> {
        FrequencyTriple {
            omega_perp1: f(self.omega_perp1),
            omega_perp2: f(self.omega_perp2),
            omega_par: f(self.omega_par),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluctuationWidths<T> {
    pub a2_perp: T,
    pub a2_par: T,
    pub b2_perp: T,
}

/// Bernoulli numbers `B_2 .. B_24`.
const BERNOULLI: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const TAYLOR_THRESHOLD: f64 = 1e-4;
const SERIES_THRESHOLD: f64 = 1.0;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Coefficients `c_n` of `ln(sinh(y/2)/(y/2)) = sum c_n y^(2n)`.
fn phi_coeff<T: Real>(n: usize) -> T {
    let m = 2 * n;
    T::lit(BERNOULLI[n - 1] / (m as f64 * factorial(m)))
}

/// Coefficients `d_n` of `g(y)/y = sum d_n y^(2n-2)`.
fn g_coeff<T: Real>(n: usize) -> T {
    T::lit(BERNOULLI[n - 1] / factorial(2 * n))
}

/// Horner evaluation of `sum_{n=1}^{terms} c_n x^(n-1)`.
fn horner<T: Real>(x: T, terms: usize, coeff: fn(usize) -> T) -> T {
    (1..=terms).rev().fold(T::zero(), |acc, n| acc * x + coeff(n))
}

/// `ln(sinh(y/2)/(y/2))` for `y >= 0`.
fn phi<T: Real>(y: T) -> T {
    if y < T::lit(TAYLOR_THRESHOLD) {
        let y2 = y * y;
        y2 * horner(y2, 4, phi_coeff::<T>)
    } else if y < T::lit(SERIES_THRESHOLD) {
        let y2 = y * y;
        y2 * horner(y2, BERNOULLI.len(), phi_coeff::<T>)
    } else {
        y * T::half() + (-(-y).exp()).ln_1p() - y.ln()
    }
}

/// `g(y)/y` with `g(y) = coth(y/2)/2 - 1/y`, for `y >= 0`; tends to 1/12.
fn g_over_y<T: Real>(y: T) -> T {
    if y < T::lit(TAYLOR_THRESHOLD) {
        horner(y * y, 4, g_coeff::<T>)
    } else if y < T::lit(SERIES_THRESHOLD) {
        horner(y * y, BERNOULLI.len(), g_coeff::<T>)
    } else {
        g_closed(y) / y
    }
}

fn g_closed<T: Real>(y: T) -> T {
    let e = (-y).exp();
    T::half() * (T::one() + e) / (T::one() - e) - y.recip()
}

/// Odd extension of the dimensionless width function.
fn g_signed<T: Real>(y: T) -> T {
    let a = y.abs();
    let v = if a < T::lit(SERIES_THRESHOLD) { a * g_over_y(a) } else { g_closed(a) };
    if y < T::zero() {
        -v
    } else {
        v
    }
}

fn check_beta<T: Real>(beta: T) -> Result<()> {
    if beta > T::zero() && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("beta must be positive and finite, got {beta}")))
    }
}

fn check_omega<T: Real>(omega: T) -> Result<()> {
    if omega >= T::zero() && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("frequency must be finite and non-negative, got {omega}")))
    }
}

/// Normal-mode frequencies `(Omega_+, Omega_-)`.
pub fn mode_frequencies<T: Real>(f: &FrequencyTriple<T>) -> (T, T) {
    let plus = (f.omega_perp1 + f.omega_perp2) * T::half();
    let minus = (f.omega_perp1 - f.omega_perp2).abs() * T::half();
    (plus, minus)
}

/// `f(Omega) = (1/beta) ln[sinh(beta Omega/2) / (beta Omega/2)]`.
pub fn single_mode_free_energy<T: Real>(beta: T, omega: T) -> Result<T> {
    check_beta(beta)?;
    check_omega(omega)?;
    Ok(phi(beta * omega) / beta)
}

/// `g(Omega) = coth(beta Omega/2)/2 - 1/(beta Omega)`, the derivative of
/// [`single_mode_free_energy`] with respect to `Omega`.
pub fn width_function_g<T: Real>(beta: T, omega: T) -> Result<T> {
    check_beta(beta)?;
    check_omega(omega)?;
    Ok(g_signed(beta * omega))
}

/// Restricted free energy `F = f(Omega_+) + f(Omega_-) + f(Omega_par)`.
pub fn restricted_free_energy<T: Real>(beta: T, f: &FrequencyTriple<T>) -> Result<T> {
    check_beta(beta)?;
    f.validate()?;
    let (plus, minus) = mode_frequencies(f);
    Ok((phi(beta * plus) + phi(beta * minus) + phi(beta * f.omega_par)) / beta)
}

/// `ln Z = -beta F`; finite for arbitrarily large `beta Omega`.
pub fn log_restricted_partition<T: Real>(beta: T, f: &FrequencyTriple<T>) -> Result<T> {
    Ok(-beta * restricted_free_energy(beta, f)?)
}

pub fn restricted_partition<T: Real>(beta: T, f: &FrequencyTriple<T>) -> Result<T> {
    Ok(log_restricted_partition(beta, f)?.exp())
}

/// Closed-form fluctuation widths.
///
/// Returns [`Error::Singular`] when `Omega_perp2 = 0` but `Omega_perp1 > 0`,
/// where `a2_perp` has no finite value.  When both transverse frequencies
/// vanish the classical limit `beta/12` is returned.
pub fn fluctuation_widths<T: Real>(beta: T, f: &FrequencyTriple<T>) -> Result<FluctuationWidths<T>> {
    check_beta(beta)?;
    f.validate()?;
    if f.omega_perp2 == T::zero() && f.omega_perp1 > T::zero() {
        return Err(Error::Singular(format!(
            "a2_perp undefined for omega_perp2 = 0, omega_perp1 = {}",
            f.omega_perp1
        )));
    }
    let yp = beta * (f.omega_perp1 + f.omega_perp2) * T::half();
    let yd = beta * (f.omega_perp2 - f.omega_perp1) * T::half();
    let gp = g_signed(yp);
    let gd = g_signed(yd);

    // In the small-argument regime the sum g(yp) + g(yd) is a divided
    // difference of the odd series, evaluated termwise to avoid 0/0.
    let a2_perp = if yp < T::lit(SERIES_THRESHOLD) {
        beta * divided_sum(yp, yd)
    } else {
        (gp + gd) / f.omega_perp2
    };
    let b2_perp = (gp - gd) * T::half();
    let a2_par = beta * g_over_y(beta * f.omega_par);
    Ok(FluctuationWidths { a2_perp, a2_par, b2_perp })
}

/// `[g(a) + g(c)] / (a + c)` for `|c| <= a < 1`.
fn divided_sum<T: Real>(a: T, c: T) -> T {
    // g(y) = sum_n d_n y^(2n-1); (a^m + c^m)/(a + c) for odd m is the
    // alternating sum a^(m-1) - a^(m-2) c + ... + c^(m-1).
    let mut total = T::zero();
    for n in 1..=BERNOULLI.len() {
        let m = 2 * n - 1;
        let mut h = T::zero();
        let mut term = a.powi(m as i32 - 1);
        let ratio = if a == T::zero() { T::zero() } else { -c / a };
        for _ in 0..m {
            h = h + term;
            term = term * ratio;
        }
        if a == T::zero() {
            h = if m == 1 { T::one() } else { T::zero() };
        }
        total = total + g_coeff::<T>(n) * h;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tri(a: f64, b: f64, c: f64) -> FrequencyTriple<f64> {
        FrequencyTriple::new(a, b, c).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    }

    #[test]
    fn mode_examples() {
        assert_eq!(mode_frequencies(&tri(2.0, 2.0, 0.0)), (2.0, 0.0));
        assert_eq!(mode_frequencies(&tri(1.0, 3.0, 0.0)), (2.0, 1.0));
        assert_eq!(mode_frequencies(&tri(0.0, 5.0, 0.0)), (2.5, 2.5));
    }

    #[test]
    fn free_energy_oracles() {
        // ln(sinh(0.5)/0.5) from a 30-digit evaluation.
        assert!(rel(single_mode_free_energy(1.0, 1.0).unwrap(), 0.041_324_854_612_918_1) < 1e-14);
        assert_eq!(single_mode_free_energy(3.0, 0.0).unwrap(), 0.0);
        // Omega/2 - ln(beta Omega)/beta + O(e^-beta Omega).
        let hi = single_mode_free_energy(1e6f64, 2.0).unwrap();
        assert!((hi - (1.0 - 2e6f64.ln() / 1e6)).abs() < 1e-15);
        assert!(single_mode_free_energy(0.0, 1.0).is_err());
        assert!(single_mode_free_energy(-1.0, 1.0).is_err());
    }

    #[test]
    fn g_oracles() {
        // coth(0.5)/2 - 1 from a 30-digit evaluation.
        assert!(rel(width_function_g(1.0, 1.0).unwrap(), 0.081_976_706_869_326_4) < 1e-14);
        assert_eq!(width_function_g(1.0, 0.0).unwrap(), 0.0);
        // coth -> 1 leaves g = 1/2 - 1/(beta Omega).
        assert!((width_function_g(1e6f64, 1.0).unwrap() - (0.5 - 1e-6)).abs() < 1e-12);
        assert!(width_function_g(0.0, 1.0).is_err());
    }

    #[test]
    fn branch_agreement() {
        for &y in &[TAYLOR_THRESHOLD, SERIES_THRESHOLD] {
            let lo = y * (1.0 - 1e-12);
            let hi = y * (1.0 + 1e-12);
            assert!(rel(phi(lo), phi(hi)) < 1e-10, "phi at {y}");
            assert!(rel(g_over_y(lo), g_over_y(hi)) < 1e-10, "g at {y}");
        }
        // Taylor branch against the extended series at the threshold.
        let y = TAYLOR_THRESHOLD;
        let four = y * y * horner(y * y, 4, phi_coeff::<f64>);
        let full = y * y * horner(y * y, BERNOULLI.len(), phi_coeff::<f64>);
        assert!((four - full).abs() < 1e-13);
    }

    #[test]
    fn partition_examples() {
        assert_eq!(restricted_partition(2.0, &tri(0.0, 0.0, 0.0)).unwrap(), 1.0);
        let z = restricted_partition(1.0, &tri(1.0, 1.0, 1.0)).unwrap();
        assert!(rel(z, 0.920_673_594_207_792) < 1e-13);
        assert!((restricted_partition(1e-12, &tri(3.0, 1.0, 2.0)).unwrap() - 1.0).abs() < 1e-15);
        let ln = log_restricted_partition(1e4, &tri(1.0, 1.0, 1.0)).unwrap();
        // -beta F = -beta Omega + 2 ln(beta Omega) for two modes at Omega = 1.
        assert!((ln - (-1e4 + 2.0 * 1e4f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn widths_zero_temperature() {
        let w = fluctuation_widths(1e8, &tri(0.5, 2.0, 3.0)).unwrap();
        assert!(rel(w.a2_perp, 0.5) < 1e-7);
        assert!(w.b2_perp.abs() < 1e-7);
        assert!(rel(w.a2_par, 1.0 / 6.0) < 1e-7);
    }

    #[test]
    fn widths_degenerate() {
        let beta = 2.0;
        let wc = 1.5;
        let w = fluctuation_widths(beta, &tri(wc, wc, 0.0)).unwrap();
        let g = width_function_g(beta, wc).unwrap();
        assert!(rel(w.a2_perp, g / wc) < 1e-14);
        assert!(rel(w.b2_perp, g / 2.0) < 1e-14);
        assert!(rel(w.a2_par, beta / 12.0) < 1e-15);
        let w0 = fluctuation_widths(beta, &tri(0.0, 0.0, 0.0)).unwrap();
        assert!(rel(w0.a2_perp, beta / 12.0) < 1e-15);
        assert!(matches!(fluctuation_widths(1.0, &tri(1.0, 0.0, 1.0)), Err(Error::Singular(_))));
    }

    /// Restricted free energy in 60-digit arithmetic straight from the
    /// sinh form, used as a finite-difference oracle.
    mod hp {
        use dashu_float::DBig;
        use std::str::FromStr;

        const DIGITS: usize = 60;

        pub fn num(x: f64) -> DBig {
            DBig::from_str(&format!("{x:e}")).unwrap().with_precision(DIGITS).value()
        }

        fn phi(y: DBig) -> DBig {
            if y == DBig::ZERO {
                return DBig::ZERO;
            }
            let h = y / DBig::from(2u8);
            let e = h.clone().exp();
            let sinh = (e.clone() - DBig::ONE / e) / DBig::from(2u8);
            (sinh / h).ln()
        }

        pub fn free_energy(beta: &DBig, o1: &DBig, o2: &DBig, op: &DBig) -> DBig {
            let two = DBig::from(2u8);
            let plus = (o1.clone() + o2) / &two;
            // phi is even, so the sign of the difference does not matter.
            let minus = (o1.clone() - o2) / &two;
            (phi(beta.clone() * plus) + phi(beta.clone() * minus) + phi(beta.clone() * op)) / beta
        }

        /// Five-point derivative of `f` at `x` with step `h`.
        pub fn derivative(f: impl Fn(DBig) -> DBig, x: &DBig, h: &DBig) -> f64 {
            let two = DBig::from(2u8);
            let fp1 = f(x.clone() + h);
            let fm1 = f(x.clone() - h);
            let fp2 = f(x.clone() + h.clone() * &two);
            let fm2 = f(x.clone() - h.clone() * &two);
            let num = (fp1 - fm1) * DBig::from(8u8) - fp2 + fm2;
            (num / (h.clone() * DBig::from(12u8))).to_f64().value()
        }
    }

    /// `(a2_perp, a2_par, b2_perp)` from derivatives of the oracle free energy.
    fn fd_widths(beta: f64, f: FrequencyTriple<f64>) -> (f64, f64, f64) {
        let b = hp::num(beta);
        let (o1, o2, op) = (hp::num(f.omega_perp1), hp::num(f.omega_perp2), hp::num(f.omega_par));
        let rel = hp::num(1e-8);
        let h1 = o1.clone() * &rel;
        let b2 = hp::derivative(|x| hp::free_energy(&b, &x, &o2, &op), &o1, &h1);
        let s2 = o2.clone() * &o2;
        let a2p = 4.0 * hp::derivative(|s| hp::free_energy(&b, &o1, &s.sqrt(), &op), &s2, &(s2.clone() * &rel));
        let p2 = op.clone() * &op;
        let a2z = 2.0 * hp::derivative(|s| hp::free_energy(&b, &o1, &o2, &s.sqrt()), &p2, &(p2.clone() * &rel));
        (a2p, a2z, b2)
    }

    #[test]
    fn widths_match_finite_differences() {
        let w = fluctuation_widths(1.0, &tri(1.0, 3.0, 2.0)).unwrap();
        let (a2p, a2z, b2) = fd_widths(1.0, tri(1.0, 3.0, 2.0));
        assert!(rel(w.a2_perp, a2p) < 1e-6);
        assert!(rel(w.a2_par, a2z) < 1e-6);
        assert!(rel(w.b2_perp, b2) < 1e-6);
    }

    #[test]
    fn generic_over_f32() {
        let f = FrequencyTriple::<f32>::new(1.0, 3.0, 2.0).unwrap();
        let w32 = fluctuation_widths(1.0f32, &f).unwrap();
        let w64 = fluctuation_widths(1.0, &tri(1.0, 3.0, 2.0)).unwrap();
        assert!((w32.a2_perp as f64 - w64.a2_perp).abs() < 1e-6);
        assert!((single_mode_free_energy(1.0f32, 1.0).unwrap() as f64 - 0.041_324_854_6).abs() < 1e-7);
    }

    proptest! {
        #[test]
        fn classical_limit(o1 in 0.0f64..5.0, o2 in 0.01f64..5.0, op in 0.0f64..5.0) {
            let beta = 1e-3;
            let w = fluctuation_widths(beta, &tri(o1, o2, op)).unwrap();
            prop_assert!((w.a2_perp - beta / 12.0).abs() < 1e-3 * beta);
            prop_assert!((w.a2_par - beta / 12.0).abs() < 1e-3 * beta);
        }

        #[test]
        fn g_monotone(beta in 0.01f64..100.0, a in 1e-6f64..50.0, d in 1e-6f64..5.0) {
            let lo = width_function_g(beta, a).unwrap();
            let hi = width_function_g(beta, a + d).unwrap();
            prop_assert!(hi > lo);
        }

        #[test]
        fn swap_symmetry(beta in 0.01f64..100.0, o1 in 0.0f64..10.0, o2 in 0.0f64..10.0, op in 0.0f64..10.0) {
            let a = restricted_partition(beta, &tri(o1, o2, op)).unwrap();
            let b = restricted_partition(beta, &tri(o2, o1, op)).unwrap();
            prop_assert!(rel(a, b) < 1e-14 || a == b);
        }

        #[test]
        fn continuity_at_equal_frequencies(beta in 0.05f64..50.0, o in 0.05f64..5.0, op in 0.0f64..5.0) {
            let eps = 1e-9;
            let w0 = fluctuation_widths(beta, &tri(o, o, op)).unwrap();
            let wl = fluctuation_widths(beta, &tri(o + eps, o, op)).unwrap();
            let wr = fluctuation_widths(beta, &tri(o - eps, o, op)).unwrap();
            for w in [wl, wr] {
                prop_assert!(rel(w.a2_perp, w0.a2_perp) < 1e-7);
                prop_assert!(rel(w.b2_perp, w0.b2_perp) < 1e-7);
            }
        }

        #[test]
        fn b2_nonnegative(beta in 0.01f64..100.0, o1 in 0.0f64..10.0, extra in 0.0f64..10.0, op in 0.0f64..10.0) {
            let w = fluctuation_widths(beta, &tri(o1, o1 + extra, op)).unwrap();
            prop_assert!(w.b2_perp >= 0.0);
            prop_assert!(w.a2_perp > 0.0 && w.a2_par > 0.0);
        }

        #[test]
        fn width_identities(beta in 0.1f64..100.0, o1 in 0.1f64..100.0, o2 in 0.1f64..100.0, op in 0.1f64..100.0) {
            let f = tri(o1, o2, op);
            let w = fluctuation_widths(beta, &f).unwrap();
            let (a2p, a2z, b2) = fd_widths(beta, f);
            prop_assert!(rel(w.a2_perp, a2p) < 1e-6, "a2_perp {} vs {}", w.a2_perp, a2p);
            prop_assert!(rel(w.a2_par, a2z) < 1e-6, "a2_par {} vs {}", w.a2_par, a2z);
            prop_assert!(rel(w.b2_perp, b2) < 1e-6, "b2 {} vs {}", w.b2_perp, b2);
        }
    }
}
