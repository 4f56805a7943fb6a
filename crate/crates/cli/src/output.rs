//! Deterministic CSV/JSON emitters. Floats are written with 17 significant
//! digits in both formats so identical runs produce byte-identical files.

use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// JSON value tree with exact float formatting.
#[derive(Clone, Debug)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    /// Ordered key/value pairs; insertion order is emission order.
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn object() -> Json {
        Json::Object(Vec::new())
    }

    pub fn push(&mut self, key: &str, value: Json) -> &mut Json {
        match self {
            Json::Object(pairs) => pairs.push((key.to_string(), value)),
            _ => panic!("push on non-object"),
        }
        self
    }

    pub fn floats(values: impl IntoIterator<Item = f64>) -> Json {
        Json::Array(values.into_iter().map(Json::Float).collect())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0);
        s.push('\n');
        s
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::UInt(u) => {
                let _ = write!(out, "{u}");
            }
            Json::Float(x) => out.push_str(&fmt_float(*x)),
            Json::Str(s) => write_escaped(out, s),
            Json::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out, indent);
                }
                out.push(']');
            }
            Json::Object(pairs) => {
                if pairs.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push_str("{\n");
                let pad = "  ".repeat(indent + 1);
                for (i, (k, v)) in pairs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(",\n");
                    }
                    out.push_str(&pad);
                    write_escaped(out, k);
                    out.push_str(": ");
                    v.write(out, indent + 1);
                }
                out.push('\n');
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
        }
    }
}

/// 17 significant digits, round-trip safe.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "null".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "1e999".into() } else { "-1e999".into() };
    }
    format!("{x:.16e}")
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// CSV table: one header row, comma delimiter, floats at 17 significant
/// digits, '.' decimal point.
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        Csv {
            out: header.join(",") + "\n",
        }
    }

    pub fn row(&mut self, fields: &[CsvField]) {
        let line: Vec<String> = fields.iter().map(|f| f.render()).collect();
        self.out.push_str(&line.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub enum CsvField {
    Str(&'static str),
    Text(String),
    UInt(u64),
    Float(f64),
}

impl CsvField {
    fn render(&self) -> String {
        match self {
            CsvField::Str(s) => s.to_string(),
            CsvField::Text(s) => s.clone(),
            CsvField::UInt(u) => u.to_string(),
            CsvField::Float(x) => fmt_float(*x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_has_17_significant_digits() {
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_float(-1.0 / 3.0), "-3.3333333333333331e-1");
    }

    #[test]
    fn json_renders_deterministically() {
        let mut j = Json::object();
        j.push("a", Json::Float(1.5));
        j.push("b", Json::Array(vec![Json::Int(1), Json::Null]));
        assert_eq!(
            j.render(),
            "{\n  \"a\": 1.5000000000000000e0,\n  \"b\": [1,null]\n}\n"
        );
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["x", "y"]);
        c.row(&[CsvField::Float(1.0), CsvField::UInt(2)]);
        assert_eq!(c.finish(), "x,y\n1.0000000000000000e0,2\n");
    }
}
