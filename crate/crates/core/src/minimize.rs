//! Derivative-free local minimizers: Nelder-Mead in n dimensions and Brent's
//! parabolic/golden-section method on an interval.

use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when the simplex spread in function value falls below this.
    pub f_tol: f64,
    /// ... and its diameter falls below this.
    pub x_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_evals: 2000, f_tol: 1e-13, x_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0` using an initial simplex with edge lengths `step`.
pub fn nelder_mead<T: Real>(
    mut f: impl FnMut(&[T]) -> T,
    x0: &[T],
    step: &[T],
    opts: NelderMeadOptions,
) -> Minimum<T> {
    let n = x0.len();
    let (alpha, gamma, rho, sigma) = (T::one(), T::two(), T::half(), T::half());
    let mut evals = 0;
    let mut eval = |x: &[T], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evals)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] = x[i] + step[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    let mut converged = false;
    while evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let spread = (worst - best).abs();
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (*a - *b).abs()))
            .fold(T::zero(), T::max);
        if spread <= T::lit(opts.f_tol) * (T::one() + best.abs()) && diameter <= T::lit(opts.x_tol) {
            converged = true;
            break;
        }

        let mut centroid = vec![T::zero(); n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c = *c + *xi;
            }
        }
        let inv = T::from_usize(n).unwrap().recip();
        centroid.iter_mut().for_each(|c| *c = *c * inv);
        let along = |t: T, worst: &[T]| -> Vec<T> {
            centroid.iter().zip(worst).map(|(c, w)| *c + t * (*c - *w)).collect()
        };

        let xw = simplex[n].0.clone();
        let xr = along(alpha, &xw);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = along(gamma, &xw);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst {
                let xc = along(rho, &xw);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = along(-rho, &xw);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < worst.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, bi) in x.iter_mut().zip(&x0) {
                        *xi = *bi + sigma * (*xi - *bi);
                    }
                    *v = eval(x, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evaluations: evals, converged }
}

/// Brent's method for a minimum of `f` on `[a, b]`, to abscissa tolerance
/// `tol` (relative plus absolute).
pub fn brent<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, tol: T, max_iter: usize) -> (T, T, usize) {
    let golden = T::lit(0.381_966_011_250_105_1);
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut x = a + golden * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d = T::zero();
    let mut e = T::zero();
    let mut evals = 1;
    let eps = T::epsilon().sqrt();
    for _ in 0..max_iter {
        let m = T::half() * (a + b);
        let tol1 = eps * x.abs() + tol;
        let tol2 = T::two() * tol1;
        if (x - m).abs() <= tol2 - T::half() * (b - a) {
            break;
        }
        let mut golden_step = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = T::two() * (q - r);
            if q > T::zero() {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (T::half() * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden_step = false;
            }
        }
        if golden_step {
            e = if x < m { b - x } else { a - x };
            d = golden * e;
        }
        let u = if d.abs() >= tol1 { x + d } else if d > T::zero() { x + tol1 } else { x - tol1 };
        let fu = f(u);
        evals += 1;
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx, evals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions { max_evals: 5000, f_tol: 1e-15, x_tol: 1e-10 };
        let m = nelder_mead(f, &[-1.2, 1.0], &[0.1, 0.1], opts);
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-7 && (m.x[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn budget_is_respected() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let m = nelder_mead(f, &[5.0, 5.0, 5.0], &[1.0; 3], NelderMeadOptions { max_evals: 20, ..Default::default() });
        assert!(!m.converged);
        assert!(m.evaluations <= 25);
    }

    #[test]
    fn nan_treated_as_worse() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 2.0).powi(2) };
        let m = nelder_mead(f, &[0.5], &[0.5], NelderMeadOptions::default());
        assert!((m.x[0] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn brent_quadratic_and_cosine() {
        let (x, fx, _) = brent(|x: f64| (x - 0.3).powi(2) + 1.0, -2.0, 4.0, 1e-12, 200);
        assert!((x - 0.3).abs() < 1e-7 && (fx - 1.0).abs() < 1e-14);
        let (x, _, _) = brent(|x: f64| x.cos(), 2.0, 4.0, 1e-12, 200);
        assert!((x - std::f64::consts::PI).abs() < 1e-7);
        let (x, _, _) = brent(|x: f32| (x - 1.5) * (x - 1.5), 0.0, 3.0, 1e-6, 200);
        assert!((x - 1.5).abs() < 1e-3);
    }

    #[test]
    fn brent_boundary_minimum() {
        let (x, _, _) = brent(|x: f64| x, 1.0, 2.0, 1e-12, 200);
        assert!((x - 1.0).abs() < 1e-6);
    }
}
