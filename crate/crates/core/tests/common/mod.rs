//! Oracles shared by the integration tests.
#![allow(dead_code)]

use dashu_float::DBig;
use magvpt::trial_oscillator::FrequencyTriple;
use std::str::FromStr;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite rule: `panels` equal panels on [a, b], `n` points each.
pub fn composite(a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * rule.len());
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for &(x, w) in rule {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

/// `-<1/|x0 + u|>` for a centred Gaussian `u` with variances
/// `(a_perp, a_perp, a_par)`, by direct integration over `d^3 y / |y|` in
/// spherical coordinates about the singularity at `y = 0`.
pub fn smeared_coulomb_3d(a_perp: f64, a_par: f64, rho0: f64, z0: f64) -> f64 {
    let rule = gauss_legendre(12);
    let sigma = a_perp.max(a_par).sqrt();
    let r_max = (rho0 * rho0 + z0 * z0).sqrt() + 10.0 * sigma;
    let rs = composite(0.0, r_max, 40, &rule);
    let thetas = composite(0.0, std::f64::consts::PI, 24, &rule);
    // Mirror symmetry in phi.
    let phis = composite(0.0, std::f64::consts::PI, 16, &rule);
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).powf(1.5) * a_perp * a_par.sqrt());
    let angular: Vec<(f64, f64, f64, f64)> = thetas
        .iter()
        .flat_map(|&(t, wt)| {
            phis.iter().map(move |&(p, wp)| (t.sin() * p.cos(), t.sin() * p.sin(), t.cos(), wt * wp * t.sin()))
        })
        .collect();
    let mut total = 0.0;
    for &(r, wr) in &rs {
        let mut shell = 0.0;
        for &(nx, ny, nz, w) in &angular {
            let dx = r * nx - rho0;
            let dy = r * ny;
            let dz = r * nz - z0;
            shell += w * (-(dx * dx + dy * dy) / (2.0 * a_perp) - dz * dz / (2.0 * a_par)).exp();
        }
        total += wr * r * shell;
    }
    -2.0 * norm * total
}

pub const DIGITS: usize = 60;

pub fn num(x: f64) -> DBig {
    DBig::from_str(&format!("{x:e}")).unwrap().with_precision(DIGITS).value()
}

fn phi(y: DBig) -> DBig {
    if y == DBig::ZERO {
        return DBig::ZERO;
    }
    let two = num(2.0);
    let h = y / &two;
    let e = h.clone().exp();
    let sinh = (e.clone() - num(1.0) / e) / two;
    (sinh / h).ln()
}

/// Restricted free energy in 60-digit arithmetic.
pub fn free_energy(beta: &DBig, o1: &DBig, o2: &DBig, op: &DBig) -> DBig {
    let two = num(2.0);
    let plus = (o1.clone() + o2) / &two;
    let minus = (o1.clone() - o2) / &two;
    (phi(beta.clone() * plus) + phi(beta.clone() * minus) + phi(beta.clone() * op)) / beta
}

fn derivative(f: impl Fn(DBig) -> DBig, x: &DBig, h: &DBig) -> f64 {
    let two = num(2.0);
    let fp1 = f(x.clone() + h);
    let fm1 = f(x.clone() - h);
    let fp2 = f(x.clone() + h.clone() * &two);
    let fm2 = f(x.clone() - h.clone() * &two);
    let n = (fp1 - fm1) * num(8.0) - fp2 + fm2;
    (n / (h.clone() * num(12.0))).to_f64().value()
}

/// `(a2_perp, a2_par, b2_perp)` from
/// `b2 = dF/dO1`, `a2_perp = 4 dF/d(O2^2)`, `a2_par = 2 dF/d(Opar^2)`.
pub fn fd_widths(beta: f64, f: &FrequencyTriple<f64>) -> (f64, f64, f64) {
    let b = num(beta);
    let (o1, o2, op) = (num(f.omega_perp1), num(f.omega_perp2), num(f.omega_par));
    let rel = num(1e-8);
    let b2 = derivative(|x| free_energy(&b, &x, &o2, &op), &o1, &(o1.clone() * &rel));
    let s2 = o2.clone() * &o2;
    let a2p = 4.0 * derivative(|s| free_energy(&b, &o1, &s.sqrt(), &op), &s2, &(s2.clone() * &rel));
    let p2 = op.clone() * &op;
    let a2z = 2.0 * derivative(|s| free_energy(&b, &o1, &o2, &s.sqrt()), &p2, &(p2.clone() * &rel));
    (a2p, a2z, b2)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
