//! Conversions between natural atomic units (hbar = e^2 = k_B = c = M = 1)
//! and laboratory units.
//!
//! Energies are measured in 2 Ryd, temperatures in that energy over k_B,
//! lengths in Bohr radii and field strengths in the atomic field unit B_0.
//! The constants carry four significant digits and no more.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Physical size of one natural unit for each supported dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitConstants {
    pub energy_unit_ev: f64,
    pub temperature_unit_k: f64,
    pub length_unit_cm: f64,
    pub field_unit_t: f64,
    pub field_unit_g: f64,
}

pub const ATOMIC_UNITS: UnitConstants = UnitConstants {
    energy_unit_ev: 27.21,
    temperature_unit_k: 3.16e5,
    length_unit_cm: 0.53e-8,
    field_unit_t: 2.35e5,
    field_unit_g: 2.35e5 * 1.0e4,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Energy,
    Temperature,
    Length,
    Field,
}

impl Kind {
    /// Default laboratory unit for this dimension.
    pub fn default_unit(self) -> Unit {
        match self {
            Kind::Energy => Unit::ElectronVolt,
            Kind::Temperature => Unit::Kelvin,
            Kind::Length => Unit::Centimetre,
            Kind::Field => Unit::Tesla,
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "energy" => Ok(Kind::Energy),
            "temperature" => Ok(Kind::Temperature),
            "length" => Ok(Kind::Length),
            "field" => Ok(Kind::Field),
            other => Err(Error::InvalidInput(format!("unknown quantity kind `{other}`"))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Energy => "energy",
            Kind::Temperature => "temperature",
            Kind::Length => "length",
            Kind::Field => "field",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Unit {
    #[serde(rename = "eV")]
    ElectronVolt,
    #[serde(rename = "K")]
    Kelvin,
    #[serde(rename = "cm")]
    Centimetre,
    #[serde(rename = "T")]
    Tesla,
    #[serde(rename = "G")]
    Gauss,
}

impl Unit {
    pub fn kind(self) -> Kind {
        match self {
            Unit::ElectronVolt => Kind::Energy,
            Unit::Kelvin => Kind::Temperature,
            Unit::Centimetre => Kind::Length,
            Unit::Tesla | Unit::Gauss => Kind::Field,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::ElectronVolt => "eV",
            Unit::Kelvin => "K",
            Unit::Centimetre => "cm",
            Unit::Tesla => "T",
            Unit::Gauss => "G",
        }
    }

    /// Size of one natural unit expressed in this unit.
    pub fn scale(self) -> f64 {
        let c = ATOMIC_UNITS;
        match self {
            Unit::ElectronVolt => c.energy_unit_ev,
            Unit::Kelvin => c.temperature_unit_k,
            Unit::Centimetre => c.length_unit_cm,
            Unit::Tesla => c.field_unit_t,
            Unit::Gauss => c.field_unit_g,
        }
    }

    fn from_symbol(s: &str) -> Option<Unit> {
        [
            Unit::ElectronVolt,
            Unit::Kelvin,
            Unit::Centimetre,
            Unit::Tesla,
            Unit::Gauss,
        ]
        .into_iter()
        .find(|u| u.symbol() == s)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalQuantity {
    pub value: f64,
    pub unit: Unit,
}

impl fmt::Display for PhysicalQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

pub fn natural_to_physical(value: f64, kind: Kind) -> PhysicalQuantity {
    natural_to_unit(value, kind.default_unit())
}

pub fn natural_to_unit(value: f64, unit: Unit) -> PhysicalQuantity {
    PhysicalQuantity {
        value: value * unit.scale(),
        unit,
    }
}

/// Inverse of [`natural_to_unit`]; rejects non-finite input.
pub fn physical_to_natural(quantity: PhysicalQuantity) -> Result<f64> {
    if !quantity.value.is_finite() {
        return Err(Error::InvalidInput(format!(
            "non-finite physical value {}",
            quantity.value
        )));
    }
    Ok(quantity.value / quantity.unit.scale())
}

/// Result of parsing a command-line value with an optional unit suffix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParsedValue {
    Natural(f64),
    Physical(PhysicalQuantity),
}

impl ParsedValue {
    /// Natural-unit value, checking that any suffix matches `expected`.
    pub fn to_natural(self, expected: Kind) -> Result<f64> {
        match self {
            ParsedValue::Natural(v) => Ok(v),
            ParsedValue::Physical(q) if q.unit.kind() == expected => physical_to_natural(q),
            ParsedValue::Physical(q) => Err(Error::InvalidInput(format!(
                "unit `{}` is a {}, expected a {expected}",
                q.unit,
                q.unit.kind()
            ))),
        }
    }
}

/// Parses `"2.35e14G"`, `"27.21 eV"` or a bare number.
pub fn parse_quantity(text: &str) -> Result<ParsedValue> {
    let text = text.trim();
    let split = text
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_alphabetic())
        .last()
        .map(|(i, _)| i);
    let (number, suffix) = match split {
        // A trailing `e`/`E` belongs to the number only when followed by digits,
        // which cannot happen at the end of the string, so any alphabetic tail is a suffix.
        Some(i) => (text[..i].trim_end(), &text[i..]),
        None => (text, ""),
    };
    let value: f64 = number
        .parse()
        .map_err(|_| Error::InvalidInput(format!("cannot parse number in `{text}`")))?;
    if suffix.is_empty() {
        return Ok(ParsedValue::Natural(value));
    }
    let unit = Unit::from_symbol(suffix)
        .ok_or_else(|| Error::InvalidInput(format!("unknown unit suffix `{suffix}`")))?;
    Ok(ParsedValue::Physical(PhysicalQuantity { value, unit }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn unit_values() {
        let e = natural_to_physical(1.0, Kind::Energy);
        assert_eq!(e.unit, Unit::ElectronVolt);
        assert!(rel(e.value, 27.21) < 1e-15);
        let b = natural_to_physical(1.0, Kind::Field);
        assert!(rel(b.value, 2.35e5) < 1e-15);
        assert_eq!(natural_to_physical(0.0, Kind::Energy).value, 0.0);
    }

    #[test]
    fn inverse_values() {
        let b = physical_to_natural(PhysicalQuantity { value: 2.35e14, unit: Unit::Gauss }).unwrap();
        assert!(rel(b, 1e5) < 1e-12);
        let t = physical_to_natural(PhysicalQuantity { value: 3.16e5, unit: Unit::Kelvin }).unwrap();
        assert!(rel(t, 1.0) < 1e-12);
        let e = physical_to_natural(PhysicalQuantity { value: 27.21, unit: Unit::ElectronVolt }).unwrap();
        assert!(rel(e, 1.0) < 1e-12);
    }

    #[test]
    fn constants_consistent() {
        let c = ATOMIC_UNITS;
        assert_eq!(c.field_unit_g, c.field_unit_t * 1e4);
        for v in [c.energy_unit_ev, c.temperature_unit_k, c.length_unit_cm, c.field_unit_t] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn unknown_kind_rejected() {
        assert!(matches!("mass".parse::<Kind>(), Err(Error::InvalidInput(_))));
        assert!(matches!(parse_quantity("3kg"), Err(Error::InvalidInput(_))));
        assert!(physical_to_natural(PhysicalQuantity { value: f64::NAN, unit: Unit::Kelvin }).is_err());
    }

    #[test]
    fn suffix_parsing() {
        assert_eq!(parse_quantity("1e5").unwrap(), ParsedValue::Natural(1e5));
        let q = parse_quantity("2.35e14G").unwrap();
        assert!(rel(q.to_natural(Kind::Field).unwrap(), 1e5) < 1e-12);
        let q = parse_quantity("27.21 eV").unwrap();
        assert!(rel(q.to_natural(Kind::Energy).unwrap(), 1.0) < 1e-12);
        assert!(parse_quantity("2.35e5T").unwrap().to_natural(Kind::Energy).is_err());
    }

    proptest::proptest! {
        #[test]
        fn round_trip(v in -1e20f64..1e20, k in 0usize..5) {
            let unit = [Unit::ElectronVolt, Unit::Kelvin, Unit::Centimetre, Unit::Tesla, Unit::Gauss][k];
            let back = physical_to_natural(natural_to_unit(v, unit)).unwrap();
            let phys = natural_to_unit(back, unit).value;
            let orig = natural_to_unit(v, unit).value;
            proptest::prop_assert!((phys - orig).abs() <= 1e-12 * orig.abs().max(f64::MIN_POSITIVE));
        }
    }
}
