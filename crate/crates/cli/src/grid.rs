//! Grid and list arguments: `start:stop:count[:log]` or `a,b,c`.

use magvpt::units::{parse_quantity, Kind};

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(format!("grid `{spec}` is not start:stop:count[:log]"));
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("bad number `{s}` in grid `{spec}`"));
    let (start, stop) = (num(parts[0])?, num(parts[1])?);
    let count: usize = parts[2].trim().parse().map_err(|_| format!("bad count `{}` in grid `{spec}`", parts[2]))?;
    let log = match parts.get(3).map(|s| s.trim()) {
        None | Some("lin") => false,
        Some("log") => true,
        Some(other) => return Err(format!("unknown spacing `{other}` in grid `{spec}`")),
    };
    if count == 0 {
        return Err(format!("grid `{spec}` has no points"));
    }
    if !(start.is_finite() && stop.is_finite()) {
        return Err(format!("grid `{spec}` has non-finite bounds"));
    }
    if log && !(start > 0.0 && stop > 0.0) {
        return Err(format!("log grid `{spec}` needs positive bounds"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let n = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / n;
            if i + 1 == count {
                stop
            } else if log {
                (start.ln() + t * (stop.ln() - start.ln())).exp()
            } else {
                start + t * (stop - start)
            }
        })
        .collect())
}

/// Either a grid spec or a comma-separated list of values, each with an
/// optional unit suffix of the given kind.
pub fn parse_values(spec: &str, kind: Kind) -> Result<Vec<f64>, String> {
    if spec.contains(':') {
        return parse_grid(spec);
    }
    spec.split(',')
        .map(|s| parse_value(s, kind))
        .collect()
}

pub fn parse_value(s: &str, kind: Kind) -> Result<f64, String> {
    parse_quantity(s)
        .and_then(|q| q.to_natural(kind))
        .map_err(|e| e.to_string())
}
