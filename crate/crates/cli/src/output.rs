//! Tables with metadata, written as CSV or JSON.

use std::io::Write;

use serde_json::{json, Map, Value};

/// Significant digits in emitted numbers.
pub const DIGITS: usize = 10;

/// 10 significant digits; scientific notation outside `[1e-3, 1e6)`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-3..6).contains(&exp) {
        format!("{:.*}", (DIGITS as i32 - 1 - exp) as usize, x)
    } else {
        sci
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // Same rounding as the CSV form.
            Cell::Num(x) => format_number(*x).parse::<f64>().ok().filter(|v| v.is_finite()).map_or(Value::Null, Value::from),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `key: value` notes written after the run configuration.
    pub notes: Vec<(&'static str, String)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &'static str, value: impl Into<String>) {
        self.notes.push((key, value.into()));
    }

    pub fn write_csv(&self, config: &Value, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "# config: {config}")?;
        for (k, v) in &self.notes {
            writeln!(out, "# {k}: {v}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, config: &Value, out: &mut impl Write) -> std::io::Result<()> {
        let mut meta = Map::new();
        meta.insert("config".into(), config.clone());
        for (k, v) in &self.notes {
            meta.insert((*k).into(), Value::from(v.clone()));
        }
        meta.insert("columns".into(), json!(self.columns));
        let data: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| ((*c).to_string(), v.json())).collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "meta": meta, "data": data });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}
