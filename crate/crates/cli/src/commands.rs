//! One function per subcommand, each producing a table.

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use magvpt::effective_potential::{partition_integral, w1_far_field, ThermoPoint, PARTITION_CONVENTION};
use magvpt::ground_state::{binding_scan, optimize_t0_with, Coulomb};
use magvpt::optimizer::{potential_grid, potential_profile, Direction};
use magvpt::strong_field::{binding_ln_b_expansion, optimize_reduced};
use magvpt::units::{natural_to_physical, parse_quantity, Kind, ParsedValue};
use magvpt::weak_field::{weak_field_table, SolverMode};

use crate::grid::{parse_grid, parse_value, parse_values};
use crate::output::{Cell, Table};
use crate::Failure;

/// Parameters as recorded in the output metadata.
pub trait Describe {
    fn describe(&self) -> Value;
}

fn field(s: &str) -> Result<f64, Failure> {
    parse_value(s, Kind::Field).map_err(Failure::usage)
}

fn inverse_temperature(s: &str) -> Result<f64, Failure> {
    // A temperature suffix is converted to beta = 1/T.
    match parse_quantity(s).map_err(|e| Failure::usage(e.to_string()))? {
        ParsedValue::Natural(beta) => Ok(beta),
        q @ ParsedValue::Physical(_) => {
            let t = q.to_natural(Kind::Temperature).map_err(|e| Failure::usage(e.to_string()))?;
            Ok(1.0 / t)
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Transverse,
    Longitudinal,
}

#[derive(Args, Debug)]
pub struct PotentialArgs {
    /// Inverse temperature (natural units, or a temperature such as `3.16e4K`).
    #[arg(long)]
    pub beta: String,
    /// Field strength (natural units, or with a `T`/`G` suffix).
    #[arg(long = "B", id = "B")]
    pub field: String,
    #[arg(long, value_enum, default_value_t = DirectionArg::Transverse)]
    pub direction: DirectionArg,
    /// Distances from the nucleus, `start:stop:count[:log]`.
    #[arg(long, default_value = "0:10:41")]
    pub grid: String,
    /// Stationarity tolerance.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

impl Describe for PotentialArgs {
    fn describe(&self) -> Value {
        json!({ "beta": self.beta, "B": self.field, "direction": format!("{:?}", self.direction).to_lowercase(),
                "grid": self.grid, "tol": self.tol })
    }
}

pub fn potential(a: &PotentialArgs) -> Result<Table, Failure> {
    let beta = inverse_temperature(&a.beta)?;
    let b = field(&a.field)?;
    let grid = parse_grid(&a.grid).map_err(Failure::usage)?;
    let dir = match a.direction {
        DirectionArg::Transverse => Direction::Transverse,
        DirectionArg::Longitudinal => Direction::Longitudinal,
    };
    let plateau = w1_far_field(&ThermoPoint::origin(beta, b)?)?;
    let rows = potential_profile(beta, b, dir, &grid, a.tol)?;
    let mut t = Table::new(&[
        "distance", "W", "W_far", "omega_perp1", "omega_perp2", "omega_par", "residual", "status",
    ]);
    for r in rows {
        let o = &r.result;
        t.push(vec![
            r.distance.into(),
            o.value.into(),
            plateau.into(),
            o.frequencies.omega_perp1.into(),
            o.frequencies.omega_perp2.into(),
            o.frequencies.omega_par.into(),
            o.stationarity_residual.into(),
            format!("{:?}", o.status).to_lowercase().into(),
        ]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct GroundStateArgs {
    /// Field strengths: comma list or `start:stop:count[:log]`, ascending.
    #[arg(long = "B-list", id = "B-list")]
    pub fields: String,
    /// Drop the Coulomb term (free electron, lowest Landau level).
    #[arg(long)]
    pub no_coulomb: bool,
}

impl Describe for GroundStateArgs {
    fn describe(&self) -> Value {
        json!({ "B-list": self.fields, "coulomb": !self.no_coulomb })
    }
}

pub fn ground_state(a: &GroundStateArgs) -> Result<Table, Failure> {
    let fields = parse_values(&a.fields, Kind::Field).map_err(Failure::usage)?;
    let mut t = Table::new(&["B", "energy", "binding", "omega_perp2", "omega_par", "landau_estimate", "error"]);
    let landau = |b: f64| (b > 0.0).then(|| 0.5 * b.ln() * b.ln());
    if a.no_coulomb {
        for &b in &fields {
            match optimize_t0_with(b, Coulomb::Off, &[]) {
                Ok(r) => t.push(vec![b.into(), r.energy.into(), r.binding.into(), r.omega_perp2.into(),
                                     r.omega_par.into(), landau(b).into(), Cell::Empty]),
                Err(e) => t.push(failed_row(b, landau(b), e.to_string())),
            }
        }
        return Ok(t);
    }
    for row in binding_scan(&fields)? {
        match row.result {
            Some(r) => t.push(vec![
                row.field.into(), r.energy.into(), r.binding.into(), r.omega_perp2.into(),
                r.omega_par.into(), row.landau_estimate.into(), Cell::Empty,
            ]),
            None => t.push(failed_row(row.field, row.landau_estimate, row.error.unwrap_or_default())),
        }
    }
    Ok(t)
}

fn failed_row(b: f64, landau: Option<f64>, msg: String) -> Vec<Cell> {
    vec![b.into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, landau.into(), msg.into()]
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Decimal arithmetic at `--precision` digits.
    Extended,
    /// Exact rationals with closed forms.
    Exact,
    /// Double precision.
    Double,
}

#[derive(Args, Debug)]
pub struct WeakFieldArgs {
    /// Highest order n (coefficient of B^(2n)).
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Extended)]
    pub mode: ModeArg,
}

impl Describe for WeakFieldArgs {
    fn describe(&self) -> Value {
        json!({ "order": self.order, "mode": format!("{:?}", self.mode).to_lowercase() })
    }
}

pub fn weak_field(a: &WeakFieldArgs, precision: usize) -> Result<Table, Failure> {
    let mode = match a.mode {
        ModeArg::Extended => SolverMode::Extended(precision),
        ModeArg::Exact => SolverMode::Exact,
        ModeArg::Double => SolverMode::Double,
    };
    let rows = weak_field_table(a.order, mode)?;
    let mut t = Table::new(&[
        "n", "eta", "omega", "epsilon", "epsilon_exact", "eta_full", "omega_full", "epsilon_full",
    ]);
    t.note("convention", "epsilon(B) = B/2 - sum_n epsilon_n B^(2n); eta = 2 omega_par / omega_perp2");
    for r in rows {
        t.push(vec![
            r.n.into(), r.eta.into(), r.omega.into(), r.epsilon.into(), r.epsilon_exact.into(),
            r.eta_text.into(), r.omega_text.into(), r.epsilon_text.into(),
        ]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct StrongFieldArgs {
    /// Field strengths (ln B > 1): comma list or grid.
    #[arg(long = "B", id = "B")]
    pub fields: String,
    /// Also run the full and reduced optimizers for comparison.
    #[arg(long)]
    pub compare: bool,
}

impl Describe for StrongFieldArgs {
    fn describe(&self) -> Value {
        json!({ "B": self.fields, "compare": self.compare })
    }
}

pub fn strong_field(a: &StrongFieldArgs) -> Result<Table, Failure> {
    let fields = parse_values(&a.fields, Kind::Field).map_err(Failure::usage)?;
    let mut cols = vec!["B"];
    cols.extend(magvpt::strong_field::TERM_LABELS);
    cols.extend(["partial_sum", "correction", "total", "landau_estimate"]);
    if a.compare {
        cols.extend(["binding_optimized", "binding_reduced"]);
    }
    let mut t = Table::new(&cols);
    t.note("b", "ln(pi/2) - 2");
    for &b in &fields {
        let br = binding_ln_b_expansion(b)?;
        let mut row: Vec<Cell> = vec![b.into()];
        row.extend(br.terms.iter().map(|&x| Cell::from(x)));
        row.extend([br.partial_sum.into(), br.correction_1_over_ln_b.into(), br.total().into(), br.landau_estimate.into()]);
        if a.compare {
            let full = optimize_t0_with(b, Coulomb::On, &[])?;
            row.push(full.binding.into());
            row.push(optimize_reduced(b)?.binding.into());
        }
        t.push(row);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    /// Inverse temperature, or a temperature with a `K` suffix.
    #[arg(long)]
    pub beta: String,
    /// Field strength.
    #[arg(long = "B", id = "B")]
    pub field: String,
    /// `RHO_GRID,Z_GRID`, each `start:stop:count`; odd counts, 4k+1 for an
    /// error estimate.  A z grid starting at 0 is mirrored.
    #[arg(long, default_value = "0:8:33,0:8:33")]
    pub grid_spec: String,
    /// Accepted error of the integral.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

impl Describe for PartitionArgs {
    fn describe(&self) -> Value {
        json!({ "beta": self.beta, "B": self.field, "grid-spec": self.grid_spec, "tol": self.tol })
    }
}

pub fn partition(a: &PartitionArgs) -> Result<Table, Failure> {
    let beta = inverse_temperature(&a.beta)?;
    let b = field(&a.field)?;
    let (rs, zs) = a
        .grid_spec
        .split_once(',')
        .ok_or_else(|| Failure::usage(format!("grid spec `{}` is not RHO_GRID,Z_GRID", a.grid_spec)))?;
    let rho = parse_grid(rs).map_err(Failure::usage)?;
    let z = parse_grid(zs).map_err(Failure::usage)?;
    let grid = potential_grid(beta, b, &rho, &z, 1e-7)?;
    let r = partition_integral(beta, b, &grid, a.tol)?;
    let mut t = Table::new(&["beta", "B", "value", "error_estimate", "plateau", "mirrored", "n_rho", "n_z"]);
    t.note("convention", PARTITION_CONVENTION);
    t.push(vec![
        beta.into(), b.into(), r.value.into(), r.error_estimate.into(), r.plateau.into(),
        (if r.mirrored { "true" } else { "false" }).into(), rho.len().into(), z.len().into(),
    ]);
    Ok(t)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Energy,
    Temperature,
    Length,
    Field,
}

#[derive(Args, Debug)]
pub struct UnitsArgs {
    /// Values: with a unit suffix they are converted to natural units;
    /// bare numbers are converted to physical units of `--kind`.
    #[arg(required = true)]
    pub values: Vec<String>,
    #[arg(long, value_enum, default_value_t = KindArg::Energy)]
    pub kind: KindArg,
}

impl Describe for UnitsArgs {
    fn describe(&self) -> Value {
        json!({ "values": self.values, "kind": format!("{:?}", self.kind).to_lowercase() })
    }
}

pub fn units(a: &UnitsArgs) -> Result<Table, Failure> {
    let kind = match a.kind {
        KindArg::Energy => Kind::Energy,
        KindArg::Temperature => Kind::Temperature,
        KindArg::Length => Kind::Length,
        KindArg::Field => Kind::Field,
    };
    let mut t = Table::new(&["input", "kind", "natural", "physical", "unit"]);
    for v in &a.values {
        match parse_quantity(v).map_err(|e| Failure::usage(e.to_string()))? {
            ParsedValue::Natural(x) => {
                let q = natural_to_physical(x, kind);
                t.push(vec![v.as_str().into(), kind.to_string().into(), x.into(), q.value.into(), q.unit.to_string().into()]);
            }
            p @ ParsedValue::Physical(q) => {
                let k = q.unit.kind();
                let x = p.to_natural(k)?;
                t.push(vec![v.as_str().into(), k.to_string().into(), x.into(), q.value.into(), q.unit.to_string().into()]);
            }
        }
    }
    Ok(t)
}
