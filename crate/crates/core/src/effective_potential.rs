//! First-order effective classical potential.
//!
//! ```text
//! W1 = F(Omega) + (omega_c - Omega_perp1) b2_perp
//!      - (Omega_perp2^2 - omega_c^2) a2_perp / 4 - Omega_par^2 a2_par / 2
//!      + <-1/|x + x0|>_smeared
//! ```
//!
//! with `F` the restricted trial free energy and the widths from
//! [`crate::trial_oscillator`].  In ordinary units the two harmonic
//! corrections read `-(M/4)(Omega_perp2^2 - omega_c^2) a2_perp` and
//! `-(M/2) Omega_par^2 a2_par`; the mass is one here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::smearing::{coulomb_expectation, SmearingInput};
use crate::trial_oscillator::{
    fluctuation_widths, restricted_free_energy, single_mode_free_energy, FluctuationWidths, FrequencyTriple,
};

/// Temperature, field and anchor position.  The potential is cylindrically
/// symmetric about the field axis, so only `(rho0, z0)` enter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoPoint<T> {
    pub beta: T,
    /// Field strength, equal to the cyclotron frequency.
    pub field: T,
    pub rho0: T,
    pub z0: T,
}

impl<T: Real> ThermoPoint<T> {
    pub fn new(beta: T, field: T, rho0: T, z0: T) -> Result<Self> {
        let p = Self { beta, field, rho0, z0 };
        p.validate()?;
        Ok(p)
    }

    pub fn origin(beta: T, field: T) -> Result<Self> {
        Self::new(beta, field, T::zero(), T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > T::zero() && self.beta.is_finite()) {
            return Err(Error::domain(format!("beta must be positive and finite, got {}", self.beta)));
        }
        if !(self.field >= T::zero() && self.field.is_finite()) {
            return Err(Error::domain(format!("field must be finite and non-negative, got {}", self.field)));
        }
        if !(self.rho0 >= T::zero() && self.rho0.is_finite() && self.z0.is_finite()) {
            return Err(Error::domain("anchor needs finite rho0 >= 0 and finite z0"));
        }
        Ok(())
    }

    pub fn with_anchor(self, rho0: T, z0: T) -> Self {
        Self { rho0, z0, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialEvaluation<T> {
    pub value: T,
    pub widths: FluctuationWidths<T>,
    pub frequencies: FrequencyTriple<T>,
    pub point: ThermoPoint<T>,
}

/// Evaluates the first-order potential for given trial frequencies.
pub fn w1<T: Real>(point: &ThermoPoint<T>, f: &FrequencyTriple<T>) -> Result<PotentialEvaluation<T>> {
    point.validate()?;
    let widths = fluctuation_widths(point.beta, f)?;
    let wc = point.field;
    let quarter = T::lit(0.25);
    let harmonic = restricted_free_energy(point.beta, f)? + (wc - f.omega_perp1) * widths.b2_perp
        - quarter * (f.omega_perp2 * f.omega_perp2 - wc * wc) * widths.a2_perp
        - T::half() * f.omega_par * f.omega_par * widths.a2_par;
    let coulomb = coulomb_expectation(&SmearingInput {
        a2_perp: widths.a2_perp,
        a2_par: widths.a2_par,
        rho0: point.rho0,
        z0: point.z0,
    })?;
    Ok(PotentialEvaluation {
        value: harmonic + coulomb,
        widths,
        frequencies: *f,
        point: *point,
    })
}

/// Plateau approached far from the nucleus, where the optimal trial system
/// is the free cyclotron motion: the free energy of one mode at `omega_c`.
pub fn w1_far_field<T: Real>(point: &ThermoPoint<T>) -> Result<T> {
    point.validate()?;
    single_mode_free_energy(point.beta, point.field)
}

/// Values of the optimized potential on a rectangular `(rho0, z0)` grid.
///
/// `values[i * z.len() + j]` belongs to `(rho[i], z[j])`.  Both axes must be
/// uniformly spaced with an odd number of points so that the half-resolution
/// subgrid exists; `4k + 1` points also enable the quarter-resolution error
/// estimate.  If `z[0] >= 0` the grid is taken to cover the half space
/// `z0 >= 0` and the mirror image is added.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialGrid<T> {
    pub rho: Vec<T>,
    pub z: Vec<T>,
    pub values: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionResult<T> {
    /// Richardson-extrapolated relative partition integral.
    pub value: T,
    pub error_estimate: T,
    /// Far-field value subtracted from the potential.
    pub plateau: T,
    pub mirrored: bool,
}

/// Description of the subtraction convention, for output metadata.
pub const PARTITION_CONVENTION: &str = "Z_rel = lambda^-3 * int 2 pi rho drho dz (exp(-beta (W - W_far)) - 1), \
lambda = sqrt(2 pi beta), over the supplied box";

/// Relative configuration-space partition integral.
///
/// The integrand `exp(-beta (W - W_far)) - 1` vanishes where the potential
/// has reached its plateau, which makes the result finite.  The Coulomb tail
/// `-1/r` of the potential is not integrable in three dimensions, so the
/// value depends on the box; it is the contribution of the supplied region.
pub fn partition_integral<T: Real>(beta: T, field: T, grid: &PotentialGrid<T>, tol: T) -> Result<PartitionResult<T>> {
    let point = ThermoPoint::origin(beta, field)?;
    let plateau = w1_far_field(&point)?;
    let (nr, nz) = (grid.rho.len(), grid.z.len());
    if grid.values.len() != nr * nz {
        return Err(Error::InvalidInput(format!(
            "grid has {} values for {nr} x {nz} nodes",
            grid.values.len()
        )));
    }
    check_axis(&grid.rho, "rho")?;
    check_axis(&grid.z, "z")?;
    if grid.rho[0] < T::zero() {
        return Err(Error::InvalidInput("rho axis must be non-negative".into()));
    }
    if grid.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("grid contains non-finite potential values".into()));
    }
    let lambda = (T::two() * T::PI() * beta).sqrt();
    let norm = T::two() * T::PI() / (lambda * lambda * lambda);
    let integrand = |i: usize, j: usize| grid.rho[i] * ((-beta * (grid.values[i * nz + j] - plateau)).exp() - T::one());

    let t1 = trapezoid_2d(&grid.rho, &grid.z, 1, &integrand);
    let t2 = trapezoid_2d(&grid.rho, &grid.z, 2, &integrand);
    let three = T::lit(3.0);
    let r1 = t1 + (t1 - t2) / three;
    // With a quarter-resolution subgrid the extrapolated values of two levels
    // can be compared; otherwise fall back to the plain trapezoid estimate.
    let raw_error = if (nr - 1) % 4 == 0 && (nz - 1) % 4 == 0 {
        let t4 = trapezoid_2d(&grid.rho, &grid.z, 4, &integrand);
        r1 - (t2 + (t2 - t4) / three)
    } else {
        (t1 - t2) / three
    };
    let mirrored = grid.z[0] >= T::zero();
    let factor = if mirrored { T::two() * norm } else { norm };
    let value = factor * r1;
    let error_estimate = (factor * raw_error).abs();
    if !value.is_finite() {
        return Err(Error::numerical("partition integral overflowed", format!("beta = {beta}")));
    }
    if error_estimate > tol.max(tol * value.abs()) {
        return Err(Error::numerical(
            "grid too coarse for partition integral",
            format!("value {value}, error estimate {error_estimate}, tolerance {tol}"),
        ));
    }
    Ok(PartitionResult { value, error_estimate, plateau, mirrored })
}

fn check_axis<T: Real>(axis: &[T], name: &str) -> Result<()> {
    if axis.len() < 3 || axis.len() % 2 == 0 {
        return Err(Error::InvalidInput(format!("{name} axis needs an odd number (>= 3) of points")));
    }
    let h = axis[1] - axis[0];
    if !(h > T::zero()) {
        return Err(Error::InvalidInput(format!("{name} axis must be ascending")));
    }
    let slack = T::lit(1e-9) * h;
    for w in axis.windows(2) {
        if ((w[1] - w[0]) - h).abs() > slack.max(T::lit(1e3) * T::epsilon() * w[1].abs()) {
            return Err(Error::InvalidInput(format!("{name} axis must be uniformly spaced")));
        }
    }
    Ok(())
}

fn trapezoid_2d<T: Real>(rho: &[T], z: &[T], stride: usize, f: &impl Fn(usize, usize) -> T) -> T {
    let weights = |n: usize| -> Vec<(usize, T)> {
        let idx: Vec<usize> = (0..n).step_by(stride).collect();
        let last = idx.len() - 1;
        idx.into_iter()
            .enumerate()
            .map(|(k, i)| (i, if k == 0 || k == last { T::half() } else { T::one() }))
            .collect()
    };
    let hr = (rho[1] - rho[0]) * T::from_usize(stride).unwrap();
    let hz = (z[1] - z[0]) * T::from_usize(stride).unwrap();
    let wz = weights(z.len());
    let mut total = T::zero();
    for (i, wi) in weights(rho.len()) {
        for &(j, wj) in &wz {
            total = total + wi * wj * f(i, j);
        }
    }
    total * hr * hz
}
