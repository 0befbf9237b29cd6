//! Tabular results and their CSV / JSON renderings.

use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Uint(u64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Uint(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Uint(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Uint(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Uint(v) => Value::from(*v),
            // non-finite values have no JSON number form
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or_else(|| Value::String(v.to_string()), Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    fn objects(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (k, c) in self.header.iter().zip(row) {
                    m.insert((*k).to_string(), c.json());
                }
                Value::Object(m)
            })
            .collect()
    }

    /// An array of row objects.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Value::Array(self.objects())).expect("plain values serialise");
        s.push('\n');
        s
    }

    /// The single row as an object, for one-record outputs.
    pub fn to_json_object(&self) -> String {
        let mut objs = self.objects();
        let v = if objs.len() == 1 { objs.pop().unwrap() } else { Value::Array(objs) };
        let mut s = serde_json::to_string_pretty(&v).expect("plain values serialise");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json() {
        let mut t = Table::new(&["n", "x", "ok"]);
        t.push(vec![3usize.into(), 0.1.into(), true.into()]);
        assert_eq!(t.to_csv(), "n,x,ok\n3,1.0000000000000001e-1,true\n");
        assert_eq!(fmt_float(0.1).parse::<f64>().unwrap(), 0.1);
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v[0]["n"], 3);
        assert_eq!(v[0]["x"], 0.1);
        let v: Value = serde_json::from_str(&t.to_json_object()).unwrap();
        assert_eq!(v["ok"], true);
    }

    #[test]
    fn text_quoting_and_non_finite() {
        let mut t = Table::new(&["s", "v"]);
        t.push(vec!["a,b".into(), f64::NAN.into()]);
        assert_eq!(t.to_csv(), "s,v\n\"a,b\",NaN\n");
        assert!(t.to_json().contains("\"NaN\""));
    }
}
