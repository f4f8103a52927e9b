//! Variational optimization of the first-order potential over the trial
//! frequencies, and profile/grid scans built on it.
//!
//! `W1` is minimized over `(Omega_perp2, Omega_par)` and made stationary in
//! `Omega_perp1`.  At finite temperature `W1` has a sharp ridge along
//! `Omega_perp1 ~ Omega_perp2` (width of order `1/beta`) and falls off on
//! both sides, so the stationary point in `Omega_perp1` is a maximum.  The
//! search is a min-max: Nelder-Mead over `(ln Omega_perp2, Omega_par)` on the
//! profile `max_{Omega_perp1} W1`, where the inner maximum is located by a
//! scan that always includes the ridge and `omega_c`, refined by Brent's
//! method.  Newton steps on the numerically differentiated `W1` then polish
//! all three frequencies together, and the full gradient norm is reported as
//! the stationarity residual.  `W1` is even in `Omega_par`, which is how the
//! `Omega_par = 0` boundary is handled.

use std::cell::Cell;

use rayon::prelude::*;
use serde::Serialize;

use crate::effective_potential::{w1, PotentialGrid, ThermoPoint};
use crate::error::{Error, Result};
use crate::minimize::{brent, nelder_mead, NelderMeadOptions};
use crate::real::Real;
use crate::trial_oscillator::FrequencyTriple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Stationary, and the Hessian in `(Omega_perp2, Omega_par)` is positive definite.
    Minimum,
    /// Stationary, but the positivity probe failed.
    Stationary,
    /// Stationary in the free coordinates with `Omega_par` at zero or
    /// `Omega_perp2` at its floor.
    Boundary,
    Failed,
}

impl Status {
    pub fn is_stationary(self) -> bool {
        self != Status::Failed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult<T> {
    pub frequencies: FrequencyTriple<T>,
    pub value: T,
    pub stationarity_residual: T,
    pub status: Status,
    pub evaluations: usize,
    pub diagnostics: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    /// Bound on the gradient norm for a stationary result.
    pub tol: f64,
    /// Budget for the outer search, in units of 40 potential evaluations
    /// (one inner maximization) per step.
    pub max_evals: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_evals: 12000 }
    }
}

/// Ground-state frequencies of the field-free atom, `(0, 32/9pi, 16/9pi)`.
pub fn hydrogen_seed<T: Real>() -> FrequencyTriple<T> {
    let w2 = T::lit(32.0) / (T::lit(9.0) * T::PI());
    FrequencyTriple { omega_perp1: T::zero(), omega_perp2: w2, omega_par: w2 * T::half() }
}

/// `(omega_c, omega_c, 0)`, with the transverse frequency kept positive at zero field.
pub fn far_field_seed<T: Real>(field: T) -> FrequencyTriple<T> {
    FrequencyTriple { omega_perp1: field, omega_perp2: field.max(T::lit(0.05)), omega_par: T::zero() }
}

/// Optimizes from the caller's `init` plus the far-field and hydrogen seeds,
/// returning the lowest stationary value (ties go to the smaller `Omega_par`).
///
/// At zero field no axis is preferred, so the trial system's axis is turned
/// along `x0`: the potential is evaluated at `(rho0, z0) = (0, |x0|)`.
pub fn optimize_frequencies<T: Real>(
    point: &ThermoPoint<T>,
    init: &FrequencyTriple<T>,
    tol: T,
) -> Result<OptimizationResult<T>> {
    let seeds = [*init, far_field_seed(point.field), hydrogen_seed()];
    let opts = OptimizerOptions { tol: tol.as_f64(), ..Default::default() };
    optimize_from_seeds(point, &seeds, &opts)
}

pub fn optimize_from_seeds<T: Real>(
    point: &ThermoPoint<T>,
    seeds: &[FrequencyTriple<T>],
    opts: &OptimizerOptions,
) -> Result<OptimizationResult<T>> {
    point.validate()?;
    if !(opts.tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    if seeds.is_empty() {
        return Err(Error::InvalidInput("at least one seed is required".into()));
    }
    for s in seeds {
        s.validate()?;
    }
    let point = aligned(point);
    let mut results: Vec<OptimizationResult<T>> = seeds.iter().map(|s| optimize_single(&point, s, opts)).collect();
    let evaluations = results.iter().map(|r| r.evaluations).sum();
    let tie = T::lit(opts.tol.max(1e-12));
    let mut best = select_best(&mut results, tie);
    best.evaluations = evaluations;
    Ok(best)
}

fn aligned<T: Real>(point: &ThermoPoint<T>) -> ThermoPoint<T> {
    if point.field == T::zero() {
        point.with_anchor(T::zero(), point.rho0.hypot(point.z0))
    } else {
        *point
    }
}

fn select_best<T: Real>(results: &mut Vec<OptimizationResult<T>>, tie: T) -> OptimizationResult<T> {
    let stationary: Vec<usize> = (0..results.len()).filter(|&i| results[i].status.is_stationary()).collect();
    if stationary.is_empty() {
        let i = (0..results.len())
            .min_by(|&a, &b| {
                results[a]
                    .stationarity_residual
                    .partial_cmp(&results[b].stationarity_residual)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        return results.swap_remove(i);
    }
    let lowest = stationary.iter().map(|&i| results[i].value).fold(T::infinity(), T::min);
    let scale = T::one() + lowest.abs();
    let i = stationary
        .into_iter()
        .filter(|&i| results[i].value <= lowest + tie * scale)
        .min_by(|&a, &b| {
            results[a]
                .frequencies
                .omega_par
                .partial_cmp(&results[b].frequencies.omega_par)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    results.swap_remove(i)
}

struct Objective<'a, T> {
    point: &'a ThermoPoint<T>,
    evals: Cell<usize>,
}

impl<T: Real> Objective<'_, T> {
    /// `W1` at `(o1, o2, |op|)`; NaN outside the domain.
    fn value(&self, o1: T, o2: T, op: T) -> T {
        self.evals.set(self.evals.get() + 1);
        if !(o2 > T::zero()) || o1 < T::zero() {
            return T::nan();
        }
        let f = FrequencyTriple { omega_perp1: o1, omega_perp2: o2, omega_par: op.abs() };
        w1(self.point, &f).map(|e| e.value).unwrap_or(T::nan())
    }

    fn at(&self, x: &[T; 3]) -> T {
        self.value(x[0], x[1], x[2])
    }

    /// `max_{Omega_perp1} W1(Omega_perp1, o2, op)` over `[0, 2 o2 + omega_c]`.
    fn inner_max(&self, o2: T, op: T) -> (T, T) {
        if !(o2 > T::zero()) {
            return (T::zero(), T::nan());
        }
        let wc = self.point.field;
        let hi = T::two() * o2 + wc;
        let n = 16;
        let mut cand: Vec<T> = (0..=n).map(|k| hi * T::from_usize(k).unwrap() / T::from_usize(n).unwrap()).collect();
        cand.push(o2);
        cand.push(wc);
        cand.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        cand.dedup();
        let vals: Vec<T> = cand.iter().map(|&o1| self.value(o1, o2, op)).collect();
        let (i, _) = vals
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_nan())
            .fold((0, T::neg_infinity()), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let lo = cand[i.saturating_sub(1)];
        let up = cand[(i + 1).min(cand.len() - 1)];
        let tol = T::lit(1e-12) * (T::one() + hi);
        let (x, fx, _) = brent(|o1| { let v = self.value(o1, o2, op); if v.is_nan() { T::infinity() } else { -v } }, lo, up, tol, 200);
        if -fx >= vals[i] {
            (x, -fx)
        } else {
            (cand[i], vals[i])
        }
    }
}

fn fd_step<T: Real>(x: T) -> T {
    T::lit(1e-6).max(T::lit(1e-6) * x.abs())
}

/// Smallest `Omega_perp2` visited.  `W1` has a finite limit as
/// `Omega_perp2 -> 0`, and at high temperature off the nucleus the outer
/// minimum runs into it; the widths themselves are singular there.
fn omega2_floor<T: Real>(point: &ThermoPoint<T>) -> T {
    T::lit(1e-8) * (T::one() + point.field)
}

/// Which coordinates take part in the polish.  At zero field `W1` is even
/// in `Omega_perp1`, so `Omega_perp1 = 0` is stationary there; `Omega_par = 0`
/// is stationary for the same reason.
fn free_mask<T: Real>(point: &ThermoPoint<T>, x: &[T; 3]) -> [bool; 3] {
    [x[0] > T::zero() || point.field > T::zero(), x[1] > omega2_floor(point), x[2] > T::zero()]
}

fn gradient<T: Real>(obj: &Objective<T>, x: &[T; 3], mask: &[bool; 3]) -> [T; 3] {
    let mut g = [T::zero(); 3];
    for i in 0..3 {
        if !mask[i] {
            continue;
        }
        let h = fd_step(x[i]);
        let (mut xp, mut xm) = (*x, *x);
        xp[i] = xp[i] + h;
        let near_edge = match i {
            0 => x[0] < h,
            1 => x[1] - h < omega2_floor(obj.point),
            _ => false,
        };
        if near_edge {
            // Forward difference next to a lower bound.
            g[i] = (obj.at(&xp) - obj.at(x)) / h;
            continue;
        }
        xm[i] = xm[i] - h;
        g[i] = (obj.at(&xp) - obj.at(&xm)) / (T::two() * h);
    }
    g
}

fn hessian<T: Real>(obj: &Objective<T>, x: &[T; 3], mask: &[bool; 3]) -> [[T; 3]; 3] {
    let mut hm = [[T::zero(); 3]; 3];
    // Resolve the O(1/beta) ridge without drowning in rounding noise.
    let beta = obj.point.beta;
    let step = |i: usize| {
        let scale = T::one().max(x[i].abs());
        let h = (T::lit(1e-4) * scale).min(T::lit(1e-2) / beta).max(T::lit(1e-6) * scale);
        if (i == 0 || i == 1) && x[i] > T::zero() {
            h.min(x[i] * T::half())
        } else {
            h
        }
    };
    let f0 = obj.at(x);
    for i in 0..3 {
        if !mask[i] {
            continue;
        }
        let hi = step(i);
        let (mut xp, mut xm) = (*x, *x);
        xp[i] = xp[i] + hi;
        xm[i] = xm[i] - hi;
        hm[i][i] = (obj.at(&xp) - T::two() * f0 + obj.at(&xm)) / (hi * hi);
        for j in (i + 1)..3 {
            if !mask[j] {
                continue;
            }
            let hj = step(j);
            let mut v = [T::zero(); 4];
            for (k, (si, sj)) in [(1, 1), (1, -1), (-1, 1), (-1, -1)].into_iter().enumerate() {
                let mut y = *x;
                y[i] = y[i] + T::lit(si as f64) * hi;
                y[j] = y[j] + T::lit(sj as f64) * hj;
                v[k] = obj.at(&y);
            }
            let c = (v[0] - v[1] - v[2] + v[3]) / (T::lit(4.0) * hi * hj);
            hm[i][j] = c;
            hm[j][i] = c;
        }
    }
    hm
}

/// Solves `H d = g` on the masked subspace by Gaussian elimination.
fn solve<T: Real>(h: &[[T; 3]; 3], g: &[T; 3], mask: &[bool; 3]) -> Option<[T; 3]> {
    let idx: Vec<usize> = (0..3).filter(|&i| mask[i]).collect();
    let n = idx.len();
    let mut a: Vec<Vec<T>> = idx
        .iter()
        .map(|&i| {
            let mut row: Vec<T> = idx.iter().map(|&j| h[i][j]).collect();
            row.push(g[i]);
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&r, &s| a[r][c].abs().partial_cmp(&a[s][c].abs()).unwrap_or(std::cmp::Ordering::Equal))?;
        if !(a[p][c].abs() > T::zero()) {
            return None;
        }
        a.swap(c, p);
        for r in 0..n {
            if r != c {
                let m = a[r][c] / a[c][c];
                for k in c..=n {
                    let v = a[c][k];
                    a[r][k] = a[r][k] - m * v;
                }
            }
        }
    }
    let mut d = [T::zero(); 3];
    for (k, &i) in idx.iter().enumerate() {
        d[i] = a[k][n] / a[k][k];
    }
    Some(d)
}

fn norm<T: Real>(g: &[T; 3]) -> T {
    g.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt()
}

fn optimize_single<T: Real>(point: &ThermoPoint<T>, seed: &FrequencyTriple<T>, opts: &OptimizerOptions) -> OptimizationResult<T> {
    let obj = Objective { point, evals: Cell::new(0) };
    let tol = T::lit(opts.tol);

    // Stage 1: derivative-free min-max search.
    let o2 = seed.omega_perp2.max(T::lit(1e-3));
    let op = seed.omega_par;
    let start = [o2.ln(), op];
    let step = [T::lit(0.3), T::lit(0.3) * op.max(T::lit(0.1) * o2)];
    let outer_budget = (opts.max_evals / 40).max(4);
    let floor = omega2_floor(point);
    let nm = nelder_mead(
        |x: &[T]| obj.inner_max(x[0].exp().max(floor), x[1].abs()).1,
        &start,
        &step,
        NelderMeadOptions { max_evals: outer_budget, f_tol: 1e-15, x_tol: 1e-9 },
    );
    let (mut o2, op) = (nm.x[0].exp(), nm.x[1].abs());
    if o2 <= floor * T::lit(1.001) {
        o2 = floor;
    }
    let (o1, _) = obj.inner_max(o2, op);
    let mut x = [o1, o2, op];
    // W is even in Omega_par; snap to the boundary when the search ends there.
    if x[2] <= T::lit(1e-7) * (T::one() + x[1]) {
        x[2] = T::zero();
    }

    // Stage 2: Newton polish on the numerical gradient.
    let mut mask = free_mask(point, &x);
    let mut g = gradient(&obj, &x, &mask);
    let mut gn = norm(&g);
    for _ in 0..30 {
        if gn <= tol * T::lit(1e-3) || obj.evals.get() > opts.max_evals * 50 {
            break;
        }
        let h = hessian(&obj, &x, &mask);
        let Some(d) = solve(&h, &g, &mask) else { break };
        let mut t = T::one();
        let mut improved = false;
        for _ in 0..8 {
            let mut y = [x[0] - t * d[0], x[1] - t * d[1], (x[2] - t * d[2]).abs()];
            y[0] = y[0].max(T::zero());
            if !mask[1] || y[1] < floor {
                y[1] = floor;
            }
            if y[1] > T::zero() {
                let my = free_mask(point, &y);
                let gy = gradient(&obj, &y, &my);
                let ny = norm(&gy);
                if ny < gn {
                    x = y;
                    g = gy;
                    gn = ny;
                    mask = my;
                    improved = true;
                    break;
                }
            }
            t = t * T::half();
        }
        if !improved {
            break;
        }
    }

    let value = obj.at(&x);
    let frequencies = FrequencyTriple { omega_perp1: x[0], omega_perp2: x[1], omega_par: x[2] };
    let (status, diagnostics) = if !value.is_finite() {
        (Status::Failed, Some("potential not finite at the final point".to_string()))
    } else if !(gn <= tol) {
        (
            Status::Failed,
            Some(format!("gradient norm {gn} above tolerance {tol} after {} evaluations", obj.evals.get())),
        )
    } else if x[2] == T::zero() || x[1] <= floor {
        (Status::Boundary, None)
    } else {
        let h = hessian(&obj, &x, &mask);
        let pd = h[1][1] > T::zero() && h[2][2] > T::zero() && h[1][1] * h[2][2] - h[1][2] * h[2][1] > T::zero();
        (if pd { Status::Minimum } else { Status::Stationary }, None)
    };
    OptimizationResult {
        frequencies,
        value,
        stationarity_residual: gn,
        status,
        evaluations: obj.evals.get(),
        diagnostics,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Along `rho0` at `z0 = 0`.
    Transverse,
    /// Along `z0` at `rho0 = 0`.
    Longitudinal,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transverse" => Ok(Direction::Transverse),
            "longitudinal" => Ok(Direction::Longitudinal),
            other => Err(Error::InvalidInput(format!("unknown direction `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow<T> {
    pub distance: T,
    pub result: OptimizationResult<T>,
}

/// Optimized potential along one direction.  Each point is warm-started from
/// its predecessor; a failed point is recorded and the scan continues.
pub fn potential_profile<T: Real>(
    beta: T,
    field: T,
    direction: Direction,
    grid: &[T],
    tol: T,
) -> Result<Vec<ProfileRow<T>>> {
    ThermoPoint::origin(beta, field)?;
    if grid.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::InvalidInput("profile grid must be sorted ascending".into()));
    }
    if grid.iter().any(|d| !(d.is_finite() && *d >= T::zero())) {
        return Err(Error::InvalidInput("profile distances must be finite and non-negative".into()));
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut warm = hydrogen_seed();
    for &d in grid {
        let (rho0, z0) = match direction {
            Direction::Transverse => (d, T::zero()),
            Direction::Longitudinal => (T::zero(), d),
        };
        let point = ThermoPoint { beta, field, rho0, z0 };
        let result = match optimize_frequencies(&point, &warm, tol) {
            Ok(r) => r,
            Err(e) => failed_row(e),
        };
        if result.status.is_stationary() {
            warm = result.frequencies;
        }
        rows.push(ProfileRow { distance: d, result });
    }
    Ok(rows)
}

fn failed_row<T: Real>(e: Error) -> OptimizationResult<T> {
    OptimizationResult {
        frequencies: FrequencyTriple { omega_perp1: T::nan(), omega_perp2: T::nan(), omega_par: T::nan() },
        value: T::nan(),
        stationarity_residual: T::nan(),
        status: Status::Failed,
        evaluations: 0,
        diagnostics: Some(e.to_string()),
    }
}

/// Optimized potential on a `(rho, z)` grid for the partition integral.
///
/// Rows of constant `rho` are processed in parallel, each warm-started
/// along `z`, so the result does not depend on scheduling.  Any failed
/// point aborts with a numerical error.
pub fn potential_grid<T: Real>(beta: T, field: T, rho: &[T], z: &[T], tol: T) -> Result<PotentialGrid<T>> {
    ThermoPoint::origin(beta, field)?;
    let rows: Vec<Result<Vec<T>>> = rho
        .par_iter()
        .map(|&r| {
            let mut warm = hydrogen_seed();
            let mut out = Vec::with_capacity(z.len());
            for &zz in z {
                let point = ThermoPoint::new(beta, field, r, zz)?;
                let res = optimize_frequencies(&point, &warm, tol)?;
                if !res.status.is_stationary() {
                    return Err(Error::numerical(
                        format!("optimization failed at rho = {r}, z = {zz}"),
                        res.diagnostics.unwrap_or_default(),
                    ));
                }
                warm = res.frequencies;
                out.push(res.value);
            }
            Ok(out)
        })
        .collect();
    let mut values = Vec::with_capacity(rho.len() * z.len());
    for row in rows {
        values.extend(row?);
    }
    Ok(PotentialGrid { rho: rho.to_vec(), z: z.to_vec(), values })
}
