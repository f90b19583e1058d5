//! Output rows for the CLI, as CSV or newline-delimited JSON.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), so a parsed
//! record re-emits byte-identically.

use std::io::{self, Write};

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::dispatch::{Evaluation, Problem};
use crate::volume::Method;

pub const CSV_COLUMNS: [&str; 9] = [
    "problem",
    "k",
    "alpha_rad",
    "method",
    "volume",
    "error_estimate",
    "evaluations",
    "seed",
    "n_terms",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: Problem,
    #[serde(serialize_with = "sci")]
    pub k: f64,
    #[serde(serialize_with = "sci")]
    pub alpha_rad: f64,
    pub method: Method,
    #[serde(serialize_with = "sci")]
    pub volume: f64,
    #[serde(serialize_with = "sci")]
    pub error_estimate: f64,
    pub evaluations: u64,
    pub seed: Option<u64>,
    pub n_terms: Option<u64>,
}

pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn sci<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !v.is_finite() {
        // JSON has no spelling for inf/NaN
        return s.serialize_none();
    }
    let raw = RawValue::from_string(format_f64(*v)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunRecord {
    pub fn new(problem: Problem, k: f64, alpha_rad: f64, eval: &Evaluation) -> Self {
        Self {
            problem,
            k,
            alpha_rad,
            method: eval.result.method,
            volume: eval.result.volume,
            error_estimate: eval.result.error_estimate,
            evaluations: eval.result.evaluations,
            seed: eval.seed,
            n_terms: eval.n_terms.map(|n| n as u64),
        }
    }

    pub fn csv_fields(&self) -> [String; 9] {
        [
            self.problem.tag().to_string(),
            format_f64(self.k),
            format_f64(self.alpha_rad),
            self.method.tag().to_string(),
            format_f64(self.volume),
            format_f64(self.error_estimate),
            self.evaluations.to_string(),
            opt(self.seed),
            opt(self.n_terms),
        ]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record fields are always serializable")
    }

    pub fn from_json(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }

    pub fn from_csv_fields(fields: &csv::StringRecord) -> Result<Self, String> {
        if fields.len() != CSV_COLUMNS.len() {
            return Err(format!("expected {} columns, got {}", CSV_COLUMNS.len(), fields.len()));
        }
        let f = |i: usize| fields.get(i).unwrap_or_default();
        let num = |i: usize| f(i).parse::<f64>().map_err(|e| format!("{}: {e}", CSV_COLUMNS[i]));
        let opt_int = |i: usize| -> Result<Option<u64>, String> {
            match f(i) {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|e| format!("{}: {e}", CSV_COLUMNS[i])),
            }
        };
        Ok(Self {
            problem: f(0).parse().map_err(|e| format!("{e}"))?,
            k: num(1)?,
            alpha_rad: num(2)?,
            method: f(3).parse().map_err(|e| format!("{e}"))?,
            volume: num(4)?,
            error_estimate: num(5)?,
            evaluations: f(6).parse().map_err(|e| format!("evaluations: {e}"))?,
            seed: opt_int(7)?,
            n_terms: opt_int(8)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Writes a header (CSV only) followed by one line per record.
pub fn write_records<W: Write>(out: W, records: &[RunRecord], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for r in records {
                w.write_record(r.csv_fields())?;
            }
            w.flush()
        }
        Format::Json => {
            let mut out = out;
            for r in records {
                writeln!(out, "{}", r.to_json())?;
            }
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(volume: f64, seed: Option<u64>, n_terms: Option<u64>) -> RunRecord {
        RunRecord {
            problem: Problem::ConeSphere,
            k: 0.4,
            alpha_rad: std::f64::consts::FRAC_PI_3,
            method: Method::Series,
            volume,
            error_estimate: 1e-13,
            evaluations: 1234,
            seed,
            n_terms,
        }
    }

    #[test]
    fn json_field_names_match_csv_columns() {
        let v: serde_json::Value = serde_json::from_str(&sample(1.0, None, Some(3)).to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = CSV_COLUMNS.to_vec();
        expected.sort_unstable();
        let mut keys_sorted = keys.clone();
        keys_sorted.sort_unstable();
        assert_eq!(keys_sorted, expected);
        assert_eq!(v["seed"], serde_json::Value::Null);
        assert_eq!(v["method"], "series");
    }

    #[test]
    fn csv_empty_optional_columns() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[sample(2.0, None, None)], Format::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert!(lines.next().unwrap().ends_with(",1234,,"));
    }

    proptest! {
        #[test]
        fn records_round_trip(volume in 0.0f64..10.0, seed in proptest::option::of(any::<u64>()),
                              n in proptest::option::of(0u64..100)) {
            let r = sample(volume, seed, n);
            let json = r.to_json();
            let back = RunRecord::from_json(&json).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(back.to_json(), json);

            let mut buf = Vec::new();
            write_records(&mut buf, &[r.clone()], Format::Csv).unwrap();
            let mut rd = csv::Reader::from_reader(buf.as_slice());
            let row = rd.records().next().unwrap().unwrap();
            let parsed = RunRecord::from_csv_fields(&row).unwrap();
            let mut buf2 = Vec::new();
            write_records(&mut buf2, &[parsed], Format::Csv).unwrap();
            prop_assert_eq!(buf, buf2);
        }
    }
}
