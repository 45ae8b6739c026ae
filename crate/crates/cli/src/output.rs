use std::fmt::Write as _;

use serde_json::Value;

/// Largest magnitude printed as a bare integer.
const INTEGER_LIMIT: f64 = 1e15;

/// Integral values print as integers, everything else in scientific notation
/// with 17 significant digits (or `digits` when rounding was requested).
pub fn number(x: f64, digits: Option<u32>) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x.fract() == 0.0 && x.abs() < INTEGER_LIMIT {
        return format!("{}", x as i64);
    }
    let precision = digits.unwrap_or(17).saturating_sub(1) as usize;
    format!("{x:.precision$e}")
}

pub fn json(value: &Value, digits: Option<u32>) -> String {
    let mut out = String::new();
    write_value(value, digits, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &Value, digits: Option<u32>, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => write!(out, "{i}").unwrap(),
            (_, Some(u), _) => write!(out, "{u}").unwrap(),
            (_, _, Some(f)) if f.is_finite() => out.push_str(&number(f, digits)),
            _ => out.push_str("null"),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_value(item, digits, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).unwrap());
                out.push(':');
                write_value(item, digits, out);
            }
            out.push('}');
        }
    }
}

pub enum Field {
    Num(f64),
    Text(String),
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<usize> for Field {
    fn from(x: usize) -> Self {
        Field::Text(x.to_string())
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Text(b.to_string())
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        self.rows.push(row);
    }

    pub fn render(&self, digits: Option<u32>) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            let cells = row.iter().map(|f| match f {
                Field::Num(x) => number(*x, digits),
                Field::Text(s) => s.clone(),
            });
            w.write_record(cells).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}
