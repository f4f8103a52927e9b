//! Zero-temperature limit: ground-state and binding energies.
//!
//! As `beta -> oo` the first-order potential at the origin no longer depends
//! on `Omega_perp1` and becomes
//!
//! ```text
//! E(Omega_perp2, Omega_par) = (Omega_perp2^2 + B^2) / (4 Omega_perp2) + Omega_par / 4 - <1/r>
//! ```
//!
//! The binding energy is `epsilon = B/2 - E`.

use dashu_float::DBig;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::minimize::{brent, nelder_mead, NelderMeadOptions};
use crate::real::Real;
use crate::smearing::coulomb_expectation_origin_t0;
use crate::strong_field::omega_par_expansion;
use crate::weak_field::{odd_log_kernel_taylor, Coefficient, Digits};

/// Whether the Coulomb attraction is included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Coulomb {
    #[default]
    On,
    /// Free electron in the field; the minimum is the lowest Landau level.
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundStateResult<T> {
    pub field: T,
    pub energy: T,
    pub binding: T,
    pub omega_perp2: T,
    pub omega_par: T,
}

impl<T: Real> GroundStateResult<T> {
    fn from_excess(field: T, excess: T, omega_perp2: T, omega_par: T) -> Self {
        let energy = field * T::half() + excess;
        Self { field, energy, binding: field * T::half() - energy, omega_perp2, omega_par }
    }
}

/// `E - B/2`, arranged so that nothing cancels at large `B`.
pub fn energy_excess_t0<T: Real>(omega_perp2: T, omega_par: T, field: T, coulomb: Coulomb) -> Result<T> {
    if !(field >= T::zero() && field.is_finite()) {
        return Err(Error::domain(format!("field must be non-negative, got {field}")));
    }
    if !(omega_perp2 > T::zero() && omega_perp2.is_finite()) {
        return Err(Error::domain(format!("omega_perp2 must be positive, got {omega_perp2}")));
    }
    let four = T::lit(4.0);
    let d = omega_perp2 - field;
    let free = d * d / (four * omega_perp2);
    match coulomb {
        Coulomb::On => {
            let c = coulomb_expectation_origin_t0(omega_par, omega_perp2)?;
            Ok(free + omega_par / four - c)
        }
        Coulomb::Off => {
            if !(omega_par >= T::zero() && omega_par.is_finite()) {
                return Err(Error::domain(format!("omega_par must be non-negative, got {omega_par}")));
            }
            Ok(free + omega_par / four)
        }
    }
}

pub fn energy_t0<T: Real>(omega_perp2: T, omega_par: T, field: T) -> Result<T> {
    energy_t0_with(omega_perp2, omega_par, field, Coulomb::On)
}

pub fn energy_t0_with<T: Real>(omega_perp2: T, omega_par: T, field: T, coulomb: Coulomb) -> Result<T> {
    Ok(field * T::half() + energy_excess_t0(omega_perp2, omega_par, field, coulomb)?)
}

/// Zero-field optimum `(32/(9 pi), 16/(9 pi))`.
pub fn weak_field_seed<T: Real>() -> (T, T) {
    let w = T::lit(32.0) / (T::lit(9.0) * T::PI());
    (w, w * T::half())
}

/// `(B, Omega_par)` from the strong-field expansion when it applies.
pub fn strong_field_seed<T: Real>(field: T) -> Option<(T, T)> {
    omega_par_expansion(field).ok().map(|p| (field, p))
}

pub fn optimize_t0<T: Real>(field: T) -> Result<GroundStateResult<T>> {
    optimize_t0_with(field, Coulomb::On, &[])
}

/// Minimizes over `(Omega_perp2, Omega_par)` in log coordinates from the
/// weak- and strong-field seeds plus any `extra` starting points.
pub fn optimize_t0_with<T: Real>(field: T, coulomb: Coulomb, extra: &[(T, T)]) -> Result<GroundStateResult<T>> {
    if !(field >= T::zero() && field.is_finite()) {
        return Err(Error::domain(format!("field must be non-negative, got {field}")));
    }
    match coulomb {
        Coulomb::Off => landau_minimum(field),
        Coulomb::On => coulomb_minimum(field, extra),
    }
}

fn landau_minimum<T: Real>(field: T) -> Result<GroundStateResult<T>> {
    if field <= T::zero() {
        return Err(Error::domain("without the Coulomb term there is no minimum at B = 0"));
    }
    let f = |u: T| energy_excess_t0(u.exp(), T::zero(), field, Coulomb::Off).unwrap_or(T::infinity());
    let l = field.ln();
    let (u, _, _) = brent(f, l - T::lit(5.0), l + T::lit(5.0), T::lit(1e-12), 200);
    let w = u.exp();
    let excess = energy_excess_t0(w, T::zero(), field, Coulomb::Off)?;
    Ok(GroundStateResult::from_excess(field, excess, w, T::zero()))
}

fn coulomb_minimum<T: Real>(field: T, extra: &[(T, T)]) -> Result<GroundStateResult<T>> {
    let objective = |x: &[T]| energy_excess_t0(x[0].exp(), x[1].exp(), field, Coulomb::On).unwrap_or(T::infinity());
    let mut seeds = vec![weak_field_seed::<T>()];
    seeds.extend(strong_field_seed(field));
    if field > T::zero() {
        let (_, p) = weak_field_seed::<T>();
        seeds.push((field.max(p), p));
    }
    seeds.extend_from_slice(extra);

    let opts = NelderMeadOptions { max_evals: 3000, f_tol: 1e-15, x_tol: 1e-10 };
    let step = [T::lit(0.3), T::lit(0.3)];
    let mut best: Option<(Vec<T>, T)> = None;
    let mut evaluations = 0;
    for &(w, p) in &seeds {
        if !(w > T::zero() && p > T::zero()) {
            continue;
        }
        let m = nelder_mead(objective, &[w.ln(), p.ln()], &step, opts);
        let m = nelder_mead(objective, &m.x, &[T::lit(0.02), T::lit(0.02)], opts);
        evaluations += m.evaluations;
        if best.as_ref().map_or(true, |b| m.value < b.1) {
            best = Some((m.x, m.value));
        }
    }
    let (mut x, mut value) = best.ok_or_else(|| Error::InvalidInput("no admissible seed".into()))?;
    if !value.is_finite() {
        return Err(Error::numerical(
            "ground-state optimization failed",
            format!("B = {field}, seeds = {seeds:?}, evaluations = {evaluations}"),
        ));
    }
    newton_polish(&objective, &mut x, &mut value);
    Ok(GroundStateResult::from_excess(field, value, x[0].exp(), x[1].exp()))
}

/// A few damped Newton steps on a 2-D objective with finite differences.
fn newton_polish<T: Real>(f: &impl Fn(&[T]) -> T, x: &mut Vec<T>, value: &mut T) {
    let h = T::lit(2e-4);
    let eval = |a: T, b: T| f(&[a, b]);
    for _ in 0..8 {
        let (u, v) = (x[0], x[1]);
        let f0 = *value;
        let fpu = eval(u + h, v);
        let fmu = eval(u - h, v);
        let fpv = eval(u, v + h);
        let fmv = eval(u, v - h);
        let gu = (fpu - fmu) / (T::two() * h);
        let gv = (fpv - fmv) / (T::two() * h);
        let huu = (fpu - T::two() * f0 + fmu) / (h * h);
        let hvv = (fpv - T::two() * f0 + fmv) / (h * h);
        let huv = (eval(u + h, v + h) - eval(u + h, v - h) - eval(u - h, v + h) + eval(u - h, v - h))
            / (T::lit(4.0) * h * h);
        let det = huu * hvv - huv * huv;
        if !(det > T::zero() && huu > T::zero()) {
            return;
        }
        let du = -(hvv * gu - huv * gv) / det;
        let dv = -(huu * gv - huv * gu) / det;
        let mut t = T::one();
        let mut improved = false;
        for _ in 0..10 {
            let cand = [u + t * du, v + t * dv];
            let fc = f(&cand);
            if fc <= f0 {
                *x = cand.to_vec();
                *value = fc;
                improved = true;
                break;
            }
            t = t * T::half();
        }
        if !improved || (du.abs() + dv.abs()) < T::lit(1e-12) {
            return;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow<T> {
    pub field: T,
    pub result: Option<GroundStateResult<T>>,
    pub error: Option<String>,
    /// `0.5 ln^2 B`, for `B > 0`.
    pub landau_estimate: Option<T>,
}

/// Optimizes each field in turn, feeding the previous optimum forward as an
/// extra seed.  A failing point is recorded and the scan moves on.
pub fn binding_scan<T: Real>(fields: &[T]) -> Result<Vec<ScanRow<T>>> {
    if fields.is_empty() {
        return Err(Error::InvalidInput("field list is empty".into()));
    }
    if fields.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("field list must be strictly ascending".into()));
    }
    let mut prev: Option<(T, T)> = None;
    let mut rows = Vec::with_capacity(fields.len());
    for &b in fields {
        let extra: Vec<(T, T)> = prev.into_iter().collect();
        let landau = (b > T::zero()).then(|| T::half() * b.ln() * b.ln());
        match optimize_t0_with(b, Coulomb::On, &extra) {
            Ok(r) => {
                prev = Some((r.omega_perp2, r.omega_par));
                rows.push(ScanRow { field: b, result: Some(r), error: None, landau_estimate: landau });
            }
            Err(e) => rows.push(ScanRow { field: b, result: None, error: Some(e.to_string()), landau_estimate: landau }),
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Extended precision

fn kernel_pair<C: Coefficient>(w: &C, ctx: &C::Ctx, tol: f64) -> Result<(C, C)> {
    if w.to_f64().abs() < 0.05 {
        // L = 2 sum w^k/(2k+1), L' = 2 sum k w^(k-1)/(2k+1).
        let mut l = C::from_ratio(2, 1, ctx);
        let mut lp = C::zero(ctx);
        let mut pow_prev = C::one(ctx);
        for k in 1..400i64 {
            let pow = pow_prev.clone() * w.clone();
            let dl = C::from_ratio(2, 2 * k + 1, ctx) * pow.clone();
            l = l + dl.clone();
            lp = lp + C::from_ratio(2 * k, 2 * k + 1, ctx) * pow_prev.clone();
            if dl.to_f64().abs() < tol && pow_prev.to_f64().abs() < tol {
                break;
            }
            pow_prev = pow;
        }
        Ok((l, lp))
    } else {
        let c = odd_log_kernel_taylor(w, 2, ctx)?;
        Ok((c[0].clone(), c[1].clone()))
    }
}

/// Gradient of `pi E` in `(eta, q)` with `q = pi Omega_perp2`,
/// `eta = 2 Omega_par / Omega_perp2` and `tau = pi^2 B^2`.
fn scaled_gradient<C: Coefficient>(eta: &C, q: &C, tau: &C, ctx: &C::Ctx, tol: f64) -> Result<[C; 2]> {
    let r = |n, d| C::from_ratio(n, d, ctx);
    let s = (eta.clone() * q.clone() * r(1, 2)).sqrt()?;
    let (l, lp) = kernel_pair(&(C::one(ctx) - eta.clone()), ctx, tol)?;
    let sl = s.clone() * l;
    let d_eta = q.clone() * r(1, 8) - sl.clone() / (eta.clone() * r(2, 1)) + s * lp;
    let d_q = r(1, 4) + eta.clone() * r(1, 8) - tau.clone() / (q.clone() * q.clone() * r(4, 1)) - sl / (q.clone() * r(2, 1));
    Ok([d_eta, d_q])
}

fn scaled_energy<C: Coefficient>(eta: &C, q: &C, tau: &C, ctx: &C::Ctx, tol: f64) -> Result<C> {
    let r = |n, d| C::from_ratio(n, d, ctx);
    let s = (eta.clone() * q.clone() * r(1, 2)).sqrt()?;
    let (l, _) = kernel_pair(&(C::one(ctx) - eta.clone()), ctx, tol)?;
    Ok(q.clone() * (eta.clone() + r(2, 1)) * r(1, 8) + tau.clone() / (q.clone() * r(4, 1)) - s * l)
}

/// Stationary point of the scaled energy by Newton iteration with a
/// finite-difference Jacobian of the analytic gradient.
///
/// Returns `(eta, q, pi E)`.
pub fn refine_scaled<C: Coefficient>(
    tau: &C,
    start: (C, C),
    ctx: &C::Ctx,
    decimal_digits: usize,
) -> Result<(C, C, C)> {
    let tol = 10f64.powi(-(decimal_digits as i32 + 5));
    let goal = 10f64.powi(-(decimal_digits as i32 - 8));
    let h = C::from_f64(10f64.powi(-(decimal_digits as i32) / 3), ctx)?;
    let two_h = h.clone() + h.clone();
    let (mut eta, mut q) = start;
    for _ in 0..60 {
        let g = scaled_gradient(&eta, &q, tau, ctx, tol)?;
        let norm = g[0].to_f64().abs().max(g[1].to_f64().abs());
        if norm < goal {
            let e = scaled_energy(&eta, &q, tau, ctx, tol)?;
            return Ok((eta, q, e));
        }
        let ge_p = scaled_gradient(&(eta.clone() + h.clone()), &q, tau, ctx, tol)?;
        let ge_m = scaled_gradient(&(eta.clone() - h.clone()), &q, tau, ctx, tol)?;
        let gq_p = scaled_gradient(&eta, &(q.clone() + h.clone()), tau, ctx, tol)?;
        let gq_m = scaled_gradient(&eta, &(q.clone() - h.clone()), tau, ctx, tol)?;
        let j00 = (ge_p[0].clone() - ge_m[0].clone()) / two_h.clone();
        let j10 = (ge_p[1].clone() - ge_m[1].clone()) / two_h.clone();
        let j01 = (gq_p[0].clone() - gq_m[0].clone()) / two_h.clone();
        let j11 = (gq_p[1].clone() - gq_m[1].clone()) / two_h.clone();
        let det = j00.clone() * j11.clone() - j01.clone() * j10.clone();
        if det.is_zero() {
            return Err(Error::Singular("Hessian of the ground-state energy".into()));
        }
        let de = (g[0].clone() * j11 - j01 * g[1].clone()) / det.clone();
        let dq = (j00 * g[1].clone() - j10 * g[0].clone()) / det;
        eta = eta - de;
        q = q - dq;
    }
    Err(Error::numerical(
        "extended-precision refinement did not converge",
        format!("tau = {}, eta = {}, q = {}", tau.render(), eta.render(), q.render()),
    ))
}

/// Ground state to `digits` significant digits.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedGroundState {
    pub field: DBig,
    pub energy: DBig,
    pub binding: DBig,
    pub omega_perp2: DBig,
    pub omega_par: DBig,
    pub digits: Digits,
}

/// Refines the double-precision optimum in decimal arithmetic.  The field
/// is read as its shortest decimal representation.
pub fn optimize_t0_extended(field: f64, digits: Digits) -> Result<ExtendedGroundState> {
    let start = optimize_t0(field)?;
    let work = digits + 10;
    let ctx = &work;
    let pi = DBig::pi(work);
    let b = DBig::from_f64(field, ctx)?;
    let tau = pi.clone() * pi.clone() * b.clone() * b.clone();
    let eta0 = DBig::from_f64(2.0 * start.omega_par / start.omega_perp2, ctx)?;
    let q0 = DBig::from_f64(std::f64::consts::PI * start.omega_perp2, ctx)?;
    let (eta, q, scaled) = refine_scaled(&tau, (eta0, q0), ctx, work)?;
    let energy = scaled / pi.clone();
    let half = DBig::from_ratio(1, 2, ctx);
    let omega_perp2 = q / pi;
    let omega_par = eta * omega_perp2.clone() * half.clone();
    let binding = b.clone() * half - energy.clone();
    Ok(ExtendedGroundState { field: b, energy, binding, omega_perp2, omega_par, digits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective_potential::{w1, ThermoPoint};
    use crate::trial_oscillator::FrequencyTriple;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_field() {
        let r = optimize_t0(0.0f64).unwrap();
        assert!((r.energy + 4.0 / (3.0 * PI)).abs() < 1e-10, "{r:?}");
        assert!((r.omega_perp2 - 32.0 / (9.0 * PI)).abs() < 1e-5);
        assert!((r.omega_par - 16.0 / (9.0 * PI)).abs() < 1e-5);
        // Above the exact hydrogen value -1/2.
        assert!(r.energy > -0.5);
        assert_eq!(r.binding, -r.energy);
    }

    #[test]
    fn reference_fields() {
        let r = optimize_t0(1.0f64).unwrap();
        assert!((r.energy + 0.2619328216).abs() < 1e-9, "{r:?}");
        let r = optimize_t0(10.0f64).unwrap();
        assert!((r.energy - 3.33436148777).abs() < 1e-9, "{r:?}");
        let r = optimize_t0(1e5f64).unwrap();
        assert!((r.binding - 20.60).abs() < 0.05, "{r:?}");
        assert!((r.omega_perp2 / 1e5 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn landau_level_without_coulomb() {
        for b in [0.1f64, 1.0, 100.0] {
            let r = optimize_t0_with(b, Coulomb::Off, &[]).unwrap();
            assert!((r.energy - b / 2.0).abs() < 1e-10, "{r:?}");
        }
        assert_eq!(energy_t0_with(3.0f64, 0.0, 3.0, Coulomb::Off).unwrap(), 1.5);
        assert!(optimize_t0_with(0.0f64, Coulomb::Off, &[]).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(energy_t0(-1.0f64, 1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(energy_t0(1.0f64, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(optimize_t0(-1.0f64), Err(Error::Domain(_))));
        assert!(binding_scan::<f64>(&[]).is_err());
        assert!(binding_scan(&[1.0f64, 0.5]).is_err());
    }

    #[test]
    fn finite_beta_limit() {
        // W1 approaches E as beta grows.  At beta = 1e4 the gap is dominated by
        // -sum ln(beta w)/beta over the three mode frequencies.
        for &(w2, p, b) in &[(1.2f64, 0.6, 0.0), (2.0, 0.4, 1.0), (10.5, 1.1, 10.0)] {
            let e = energy_t0(w2, p, b).unwrap();
            let mut at_1e4 = Vec::new();
            for w1f in [0.5, 0.9] {
                let freq = FrequencyTriple::new(w1f * w2, w2, p).unwrap();
                let (plus, minus) = crate::trial_oscillator::mode_frequencies(&freq);
                let at = |beta: f64| w1(&ThermoPoint::origin(beta, b).unwrap(), &freq).unwrap().value;
                let logs = |beta: f64| [plus, minus, p].iter().map(|w| (beta * w).ln()).sum::<f64>() / beta;
                let v = at(1e4);
                assert!((v - e + logs(1e4)).abs() < 1e-3, "{v} vs {e}");
                assert!((at(1e7) - e).abs() < 1e-5);
                at_1e4.push(v);
            }
            // Omega_perp1 drops out in the limit.
            assert!((at_1e4[0] - at_1e4[1]).abs() < 1e-3);
        }
    }

    #[test]
    fn scan_monotone_with_landau_column() {
        let fields = [0.0f64, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1e3, 1e4, 1e5];
        let rows = binding_scan(&fields).unwrap();
        let b: Vec<f64> = rows.iter().map(|r| r.result.unwrap().binding).collect();
        assert!((b[0] - 4.0 / (3.0 * PI)).abs() < 1e-10);
        assert!(b.windows(2).all(|w| w[1] > w[0]), "{b:?}");
        assert!(rows[0].landau_estimate.is_none());
        assert!((rows[10].landau_estimate.unwrap() - 0.5 * 1e5f64.ln().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn tiny_field_matches_series() {
        let b = 1e-6f64;
        let r = optimize_t0(b).unwrap();
        let series = b / 2.0 - crate::weak_field::solve_weak_field::<f64>(3, &()).unwrap().energy_at(b);
        assert!((r.binding - series).abs() < 1e-8);
    }

    #[test]
    fn extended_refinement_zero_field() {
        let r = optimize_t0_extended(0.0, 40).unwrap();
        let expect = DBig::from_ratio(-4, 3, &50) / DBig::pi(50);
        let diff = (r.energy - expect).to_f64().value();
        assert!(diff.abs() < 1e-40, "{diff:e}");
    }

    #[test]
    fn extended_and_double_agree() {
        for b in [0.05, 1.0, 30.0] {
            let x = optimize_t0_extended(b, 30).unwrap();
            let d = optimize_t0(b).unwrap();
            assert!((x.energy.to_f64().value() - d.energy).abs() < 1e-11, "B = {b}");
            let (eta, q, e) = refine_scaled(
                &(PI * PI * b * b),
                (2.0 * d.omega_par / d.omega_perp2, PI * d.omega_perp2),
                &(),
                12,
            )
            .unwrap();
            assert!((e / PI - d.energy).abs() < 1e-11 && eta > 0.0 && q > 0.0);
        }
    }

    proptest! {
        #[test]
        fn energy_quadratic_excess(w2 in 0.1f64..50.0, b in 0.0f64..50.0) {
            let e = energy_t0_with(w2, 0.0, b, Coulomb::Off).unwrap();
            prop_assert!(e >= b / 2.0 - 1e-12 * b);
            prop_assert!((e - (w2 * w2 + b * b) / (4.0 * w2)).abs() < 1e-10 * (1.0 + e));
        }
    }
}
