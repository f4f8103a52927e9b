//! Weak-field expansion of the zero-temperature binding energy.
//!
//! With `eta = 2 Omega_par / Omega` and `t = B^2`, the energy functional is
//!
//! ```text
//! E(eta, Omega; B) = Omega/4 (1 + eta/2) + B^2/(4 Omega) - sqrt(eta Omega / (2 pi)) L(1 - eta)
//! ```
//!
//! where `L` is the odd-log kernel.  The solver works in the scaled variables
//! `q = pi Omega` and `tau = pi^2 B^2`, where every expansion coefficient is
//! rational; physical coefficients carry a power of `pi`.

mod coefficient;
mod series;

pub use coefficient::{Coefficient, Digits};
pub use series::{
    odd_log_kernel_taylor, series_arithmetic, series_compose_analytic, Analytic, SeriesOp,
    TruncatedSeries,
};

use dashu_float::DBig;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default working precision for the extended-precision mode.
pub const DEFAULT_DIGITS: Digits = 50;

/// Known exact energy coefficients `E = sum e_n B^(2n)`, n = 0..3.
pub const EXACT_ENERGY_COEFFICIENTS: [(i64, i64); 4] = [(-1, 2), (1, 4), (-53, 192), (5581, 4608)];

pub fn exact_energy_coefficient(n: usize) -> Option<f64> {
    EXACT_ENERGY_COEFFICIENTS.get(n).map(|&(a, b)| a as f64 / b as f64)
}

fn r<C: Coefficient>(n: i64, d: i64, ctx: &C::Ctx) -> C {
    C::from_ratio(n, d, ctx)
}

struct Pieces<C: Coefficient> {
    s: TruncatedSeries<C>,
    l: TruncatedSeries<C>,
    lp: TruncatedSeries<C>,
}

fn pieces<C: Coefficient>(eta: &TruncatedSeries<C>, q: &TruncatedSeries<C>) -> Result<Pieces<C>> {
    let ctx = eta.ctx().clone();
    let s = (eta * q).scale(&r(1, 2, &ctx)).sqrt()?;
    let w = (-eta).add_constant(&C::one(&ctx));
    let l = w.compose(Analytic::OddLogKernel)?;
    let lp = w.compose(Analytic::OddLogKernelDerivative)?;
    Ok(Pieces { s, l, lp })
}

fn tau<C: Coefficient>(order: usize, ctx: &C::Ctx) -> TruncatedSeries<C> {
    TruncatedSeries::variable(order, ctx)
}

/// `pi E` in scaled variables, as a series in `tau`.
pub fn scaled_energy_series<C: Coefficient>(
    eta: &TruncatedSeries<C>,
    q: &TruncatedSeries<C>,
) -> Result<TruncatedSeries<C>> {
    let ctx = eta.ctx().clone();
    let n = eta.order().min(q.order());
    let p = pieces(eta, q)?;
    let kinetic = (q * &eta.add_constant(&r(2, 1, &ctx))).scale(&r(1, 8, &ctx));
    let magnetic = tau(n, &ctx).try_div(q)?.scale(&r(1, 4, &ctx));
    Ok(&(&kinetic + &magnetic) - &(&p.s * &p.l))
}

/// `(d piE / d eta, d piE / d q)` along the given series.
pub fn scaled_stationarity_series<C: Coefficient>(
    eta: &TruncatedSeries<C>,
    q: &TruncatedSeries<C>,
) -> Result<(TruncatedSeries<C>, TruncatedSeries<C>)> {
    let ctx = eta.ctx().clone();
    let n = eta.order().min(q.order());
    let p = pieces(eta, q)?;
    let sl = &p.s * &p.l;
    let d_eta = &(&q.scale(&r(1, 8, &ctx)) - &sl.try_div(&eta.scale(&r(2, 1, &ctx)))?) + &(&p.s * &p.lp);
    let d_q = &(&(eta.scale(&r(1, 8, &ctx)).add_constant(&r(1, 4, &ctx))) - &tau(n, &ctx).try_div(&(q * q).scale(&r(4, 1, &ctx)))?)
        - &sl.try_div(&q.scale(&r(2, 1, &ctx)))?;
    Ok((d_eta, d_q))
}

/// `epsilon - B/2 = -E` as a series in `t = B^2`, with physical `Omega`.
pub fn binding_functional_series<C: Coefficient>(
    eta: &TruncatedSeries<C>,
    omega: &TruncatedSeries<C>,
) -> Result<TruncatedSeries<C>> {
    let ctx = eta.ctx().clone();
    let n = eta.order().min(omega.order());
    let pi = C::pi(&ctx)?;
    let s = (eta * omega).scale(&(C::one(&ctx) / (pi.clone() + pi))).sqrt()?;
    let l = (-eta).add_constant(&C::one(&ctx)).compose(Analytic::OddLogKernel)?;
    let kinetic = (omega * &eta.add_constant(&r(2, 1, &ctx))).scale(&r(1, 8, &ctx));
    let magnetic = TruncatedSeries::variable(n, &ctx).try_div(omega)?.scale(&r(1, 4, &ctx));
    Ok(&(&s * &l) - &(&kinetic + &magnetic))
}

/// Scalar form of the same functional, `epsilon - B/2` at one field strength.
pub fn binding_functional<C: Coefficient>(eta: &C, omega: &C, field: &C, ctx: &C::Ctx) -> Result<C> {
    let pi = C::pi(ctx)?;
    let one = C::one(ctx);
    let s = (eta.clone() * omega.clone() / (pi.clone() + pi)).sqrt()?;
    let l = C::odd_log_kernel(&(one - eta.clone()), ctx)?;
    let kinetic = omega.clone() * (eta.clone() + r(2, 1, ctx)) * r(1, 8, ctx);
    let magnetic = field.clone() * field.clone() / (omega.clone() * r(4, 1, ctx));
    Ok(s * l - kinetic - magnetic)
}

/// Scaled coefficients: `eta = sum eta_n tau^n`, `q = sum q_n tau^n`,
/// `pi E = sum e_n tau^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakFieldSolution<C: Coefficient> {
    pub eta: TruncatedSeries<C>,
    pub q: TruncatedSeries<C>,
    pub energy: TruncatedSeries<C>,
}

fn solve_2x2<C: Coefficient>(m: [[C; 2]; 2], rhs: [C; 2]) -> Result<[C; 2]> {
    let det = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone();
    if det.is_zero() {
        return Err(Error::Singular("order-0 Jacobian of the stationarity conditions".into()));
    }
    let x = (rhs[0].clone() * m[1][1].clone() - m[0][1].clone() * rhs[1].clone()) / det.clone();
    let y = (m[0][0].clone() * rhs[1].clone() - m[1][0].clone() * rhs[0].clone()) / det;
    Ok([x, y])
}

/// Determines the expansion order by order up to `tau^order`.
///
/// Order 0 is the zero-field optimum `eta = 1`, `q = 32/9`.  At each higher
/// order the `tau^n` coefficients of both stationarity conditions are affine
/// in `(eta_n, q_n)`, so probing with unit values gives the linear system.
pub fn solve_weak_field<C: Coefficient>(order: usize, ctx: &C::Ctx) -> Result<WeakFieldSolution<C>> {
    let mut eta = TruncatedSeries::constant(C::one(ctx), order, ctx);
    let mut q = TruncatedSeries::constant(r(32, 9, ctx), order, ctx);
    for n in 1..=order {
        let et = eta.truncate(n);
        let qt = q.truncate(n);
        let probe = |e: &TruncatedSeries<C>, qq: &TruncatedSeries<C>| -> Result<[C; 2]> {
            let (ge, gq) = scaled_stationarity_series(e, qq)?;
            Ok([ge.coeff(n).clone(), gq.coeff(n).clone()])
        };
        let base = probe(&et, &qt)?;
        let mut e1 = et.clone();
        e1.set_coeff(n, C::one(ctx));
        let col_eta = probe(&e1, &qt)?;
        let mut q1 = qt.clone();
        q1.set_coeff(n, C::one(ctx));
        let col_q = probe(&et, &q1)?;
        let m = [
            [col_eta[0].clone() - base[0].clone(), col_q[0].clone() - base[0].clone()],
            [col_eta[1].clone() - base[1].clone(), col_q[1].clone() - base[1].clone()],
        ];
        let [de, dq] = solve_2x2(m, [-base[0].clone(), -base[1].clone()])?;
        eta.set_coeff(n, de);
        q.set_coeff(n, dq);
    }
    let energy = scaled_energy_series(&eta, &q)?;
    Ok(WeakFieldSolution { eta, q, energy })
}

impl<C: Coefficient> WeakFieldSolution<C> {
    pub fn order(&self) -> usize {
        self.eta.order()
    }

    /// Power of pi multiplying each scaled coefficient of order `n`:
    /// `(eta, Omega, epsilon)`.
    pub fn pi_powers(n: usize) -> (i32, i32, i32) {
        let n = n as i32;
        (2 * n, 2 * n - 1, 2 * n - 1)
    }

    /// Physical coefficients computed in `C` itself.
    pub fn physical(&self) -> Result<Vec<[C; 3]>> {
        let ctx = self.eta.ctx();
        let pi = C::pi(ctx)?;
        let pow = |k: i32| -> C {
            let base = if k >= 0 { pi.clone() } else { C::one(ctx) / pi.clone() };
            (0..k.unsigned_abs()).fold(C::one(ctx), |acc, _| acc * base.clone())
        };
        Ok((0..=self.order())
            .map(|n| {
                let (a, b, c) = Self::pi_powers(n);
                [
                    self.eta.coeff(n).clone() * pow(a),
                    self.q.coeff(n).clone() * pow(b),
                    self.energy.coeff(n).clone() * pow(c),
                ]
            })
            .collect())
    }

    /// Evaluates the truncated energy series at a field strength, in f64.
    pub fn energy_at(&self, field: f64) -> f64 {
        let tau = std::f64::consts::PI.powi(2) * field * field;
        let e: f64 = self.energy.coefficients().iter().rev().fold(0.0, |acc, c| acc * tau + c.to_f64());
        e / std::f64::consts::PI
    }
}

/// Arithmetic used for the coefficient solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMode {
    /// Decimal floating point at the given number of significant digits.
    Extended(Digits),
    /// Exact rationals; coefficients are reported as `rational*pi^k`.
    Exact,
    /// Native double precision.
    Double,
}

impl Default for SolverMode {
    fn default() -> Self {
        SolverMode::Extended(DEFAULT_DIGITS)
    }
}

/// One row of the coefficient table.  `*_text` carries the full-precision
/// value (or the closed form in exact mode).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub eta: f64,
    pub omega: f64,
    pub epsilon: f64,
    pub eta_text: String,
    pub omega_text: String,
    pub epsilon_text: String,
    pub epsilon_exact: Option<f64>,
}

fn closed_form(c: &BigRational, pi_power: i32) -> String {
    if Coefficient::is_zero(c) {
        return "0".into();
    }
    let numer = c.numer().to_string();
    let frac = |num: &str| {
        if c.denom() == &num_bigint::BigInt::from(1) {
            num.to_string()
        } else {
            format!("{num}/{}", c.denom())
        }
    };
    match pi_power {
        0 => frac(&numer),
        1 => format!("{}*pi", frac(&numer)),
        -1 => {
            if c.denom() == &num_bigint::BigInt::from(1) {
                format!("{numer}/pi")
            } else {
                format!("{numer}/({}*pi)", c.denom())
            }
        }
        k => format!("{}*pi^{k}", frac(&numer)),
    }
}

fn pi_power_f64(k: i32) -> f64 {
    std::f64::consts::PI.powi(k)
}

/// Solves to `order` and tabulates `(eta_n, Omega_n, epsilon_n)`.
pub fn weak_field_table(order: usize, mode: SolverMode) -> Result<Vec<CoefficientRow>> {
    type Sol<C> = WeakFieldSolution<C>;
    let rows = match mode {
        SolverMode::Exact => {
            let sol: Sol<BigRational> = solve_weak_field(order, &())?;
            (0..=order)
                .map(|n| {
                    let (a, b, c) = Sol::<BigRational>::pi_powers(n);
                    let (e, q, en) = (sol.eta.coeff(n), sol.q.coeff(n), sol.energy.coeff(n));
                    CoefficientRow {
                        n,
                        eta: Coefficient::to_f64(e) * pi_power_f64(a),
                        omega: Coefficient::to_f64(q) * pi_power_f64(b),
                        epsilon: Coefficient::to_f64(en) * pi_power_f64(c),
                        eta_text: closed_form(e, a),
                        omega_text: closed_form(q, b),
                        epsilon_text: closed_form(en, c),
                        epsilon_exact: exact_energy_coefficient(n),
                    }
                })
                .collect()
        }
        SolverMode::Extended(digits) => {
            if digits < 20 {
                return Err(Error::InvalidInput(format!("precision {digits} below 20 digits")));
            }
            let sol: Sol<DBig> = solve_weak_field(order, &(digits + 10))?;
            rows_from(&sol.physical()?, |c: &DBig| c.clone().with_precision(digits).value().to_string())
        }
        SolverMode::Double => {
            let sol: Sol<f64> = solve_weak_field(order, &())?;
            rows_from(&sol.physical()?, |c: &f64| format!("{c:.16e}"))
        }
    };
    Ok(rows)
}

fn rows_from<C: Coefficient>(phys: &[[C; 3]], text: impl Fn(&C) -> String) -> Vec<CoefficientRow> {
    phys.iter()
        .enumerate()
        .map(|(n, [e, q, en])| CoefficientRow {
            n,
            eta: e.to_f64(),
            omega: q.to_f64(),
            epsilon: en.to_f64(),
            eta_text: text(e),
            omega_text: text(q),
            epsilon_text: text(en),
            epsilon_exact: exact_energy_coefficient(n),
        })
        .collect()
}
