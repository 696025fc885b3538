//! Flat result records and their CSV / JSON encodings.
//!
//! Every record carries the same ordered key set ([`KEYS`]); values that do
//! not apply to a run are empty in CSV and `null` in JSON. CSV floats are
//! written with 17 significant digits so they round-trip exactly.

use std::fmt::Write as _;

use serde::Deserialize;

/// Column order shared by every output.
pub const KEYS: [&str; 43] = [
    "parameter",
    "value",
    "p_alpha",
    "p_beta",
    "p_gamma",
    "p_delta",
    "p_ag",
    "p_ad",
    "p_bg",
    "p_bd",
    "s_ag",
    "s_ad",
    "s_bg",
    "s_bd",
    "visibility",
    "distinguishability",
    "sum_of_squares",
    "source",
    "shots",
    "n_ag",
    "n_ad",
    "n_bg",
    "n_bd",
    "phat_alpha",
    "phat_beta",
    "phat_gamma",
    "phat_delta",
    "phat_ag",
    "phat_ad",
    "phat_bg",
    "phat_bd",
    "se_ag",
    "se_ad",
    "se_bg",
    "se_bd",
    "shat_ag",
    "shat_ad",
    "shat_bg",
    "shat_bd",
    "se_shat_ag",
    "se_shat_ad",
    "se_shat_bg",
    "se_shat_bd",
];

const TEXT_KEYS: [&str; 2] = ["parameter", "source"];
const INT_KEYS: [&str; 5] = ["shots", "n_ag", "n_ad", "n_bg", "n_bd"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum Field {
    #[default]
    Missing,
    Float(f64),
    Int(u64),
    Text(String),
}

/// One output row.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    fields: Vec<Field>,
}

impl Default for OutputRecord {
    fn default() -> Self {
        Self {
            fields: vec![Field::Missing; KEYS.len()],
        }
    }
}

fn slot(key: &str) -> usize {
    KEYS.iter()
        .position(|k| *k == key)
        .unwrap_or_else(|| panic!("unknown output key `{key}`"))
}

impl OutputRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &str) -> &Field {
        &self.fields[slot(key)]
    }

    pub fn float(&self, key: &str) -> Option<f64> {
        match self.get(key) {
            Field::Float(v) => Some(*v),
            _ => None,
        }
    }

    pub fn set(&mut self, key: &str, field: Field) -> &mut Self {
        self.fields[slot(key)] = field;
        self
    }

    pub fn set_float(&mut self, key: &str, value: f64) -> &mut Self {
        self.set(key, Field::Float(value))
    }

    pub fn set_int(&mut self, key: &str, value: u64) -> &mut Self {
        self.set(key, Field::Int(value))
    }

    pub fn set_text(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.set(key, Field::Text(value.into()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Field)> {
        KEYS.iter().copied().zip(self.fields.iter())
    }
}

fn csv_cell(field: &Field) -> String {
    match field {
        Field::Missing => String::new(),
        Field::Float(v) => {
            let mut s = String::new();
            write!(s, "{v:.16e}").expect("write to string");
            s
        }
        Field::Int(v) => v.to_string(),
        Field::Text(t) => t.clone(),
    }
}

fn json_value(field: &Field) -> serde_json::Value {
    match field {
        Field::Missing => serde_json::Value::Null,
        Field::Float(v) => serde_json::Number::from_f64(*v)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null),
        Field::Int(v) => serde_json::Value::from(*v),
        Field::Text(t) => serde_json::Value::String(t.clone()),
    }
}

/// Encode `records` in `format`.
pub fn emit(records: &[OutputRecord], format: Format) -> Vec<u8> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(KEYS).expect("in-memory write");
            for r in records {
                w.write_record(r.fields.iter().map(csv_cell))
                    .expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = records
                .iter()
                .map(|r| {
                    let map: serde_json::Map<String, serde_json::Value> = r
                        .iter()
                        .map(|(k, f)| (k.to_string(), json_value(f)))
                        .collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            let mut out = serde_json::to_vec_pretty(&rows).expect("serializable");
            out.push(b'\n');
            out
        }
    }
}

/// Decode records previously written with [`emit`] in JSON format.
pub fn parse_json_records(bytes: &[u8]) -> Result<Vec<OutputRecord>, serde_json::Error> {
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_slice(bytes)?;
    Ok(rows
        .into_iter()
        .map(|row| {
            let mut rec = OutputRecord::new();
            for (k, v) in row {
                let Some(idx) = KEYS.iter().position(|key| *key == k) else {
                    continue;
                };
                let key = KEYS[idx];
                let field = match v {
                    serde_json::Value::Null => Field::Missing,
                    serde_json::Value::String(s) => Field::Text(s),
                    serde_json::Value::Number(n) if INT_KEYS.contains(&key) => {
                        n.as_u64().map(Field::Int).unwrap_or(Field::Missing)
                    }
                    serde_json::Value::Number(n) if !TEXT_KEYS.contains(&key) => {
                        n.as_f64().map(Field::Float).unwrap_or(Field::Missing)
                    }
                    _ => Field::Missing,
                };
                rec.fields[idx] = field;
            }
            rec
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_record() -> OutputRecord {
        let mut r = OutputRecord::new();
        r.set_float("p_alpha", 0.1 + 0.2)
            .set_float("p_beta", 1.0 - (0.1 + 0.2))
            .set_float("s_ag", -1.234_567_890_123_456_7e-11)
            .set_text("source", "analytic")
            .set_int("shots", 1000);
        r
    }

    #[test]
    fn csv_layout() {
        let out = String::from_utf8(emit(&[sample_record()], Format::Csv)).unwrap();
        let lines: Vec<&str> = out.split_terminator('\n').collect();
        assert_eq!(lines.len(), 2);
        assert!(out.ends_with('\n') && !out.contains('\r'));
        assert_eq!(lines[0].split(',').count(), KEYS.len());
        let cells: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(cells[0], "");
        assert_eq!(cells[2], "3.0000000000000004e-1");
        assert_eq!(cells[2].parse::<f64>().unwrap(), 0.1 + 0.2);
        assert_eq!(cells[17], "analytic");
        assert_eq!(cells[18], "1000");
    }

    #[test]
    fn json_layout() {
        let out = emit(&[sample_record()], Format::Json);
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 1);
        let obj = arr[0].as_object().unwrap();
        assert_eq!(
            obj.keys().map(String::as_str).collect::<Vec<_>>(),
            KEYS.to_vec()
        );
        assert!(obj["visibility"].is_null());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let mut recs = vec![sample_record()];
        let mut r = OutputRecord::new();
        r.set_text("parameter", "phi")
            .set_float("value", std::f64::consts::PI)
            .set_float("visibility", 5e-324)
            .set_float("distinguishability", 0.999_999_999_999_999_9);
        recs.push(r);
        let back = parse_json_records(&emit(&recs, Format::Json)).unwrap();
        assert_eq!(back, recs);
        for (a, b) in back.iter().zip(&recs) {
            for ((_, fa), (_, fb)) in a.iter().zip(b.iter()) {
                if let (Field::Float(x), Field::Float(y)) = (fa, fb) {
                    assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
    }
}
