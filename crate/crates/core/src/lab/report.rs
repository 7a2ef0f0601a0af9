use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::ConfigInvalid(format!("unknown format {s:?}"))),
        }
    }
}

/// How `measured` must compare with `allowed` for a case to pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One checked bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub id: String,
    pub bound: String,
    pub relation: Relation,
    pub measured: f64,
    pub allowed: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    /// A reported quantity other than the checked one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Case {
    pub fn new(id: impl Into<String>, bound: impl Into<String>, relation: Relation, measured: f64, allowed: f64) -> Self {
        let passed = match relation {
            Relation::AtMost => measured <= allowed,
            Relation::AtLeast => measured >= allowed,
        };
        let bound = bound.into();
        let message = (!passed).then(|| {
            let op = if relation == Relation::AtMost { "<=" } else { ">=" };
            format!("{bound} violated: measured {} but need {op} {}", fmt12(measured), fmt12(allowed))
        });
        Case {
            id: id.into(),
            bound,
            relation,
            measured,
            allowed,
            passed,
            n: None,
            eps: None,
            r: None,
            t: None,
            value: None,
            message,
        }
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn eps(mut self, eps: f64) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn r(mut self, r: u32) -> Self {
        self.r = Some(r);
        self
    }

    pub fn t(mut self, t: usize) -> Self {
        self.t = Some(t);
        self
    }

    pub fn value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    /// Replaces the message, keeping the bound name in front.
    pub fn note(mut self, note: impl AsRef<str>) -> Self {
        let base = self.message.take().unwrap_or_else(|| self.bound.clone());
        self.message = Some(format!("{base}; {}", note.as_ref()));
        self
    }

    fn rounded(&self) -> Case {
        Case {
            measured: sig12(self.measured),
            allowed: sig12(self.allowed),
            eps: self.eps.map(sig12),
            value: self.value.map(sig12),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub cases: Vec<Case>,
}

impl Report {
    /// Cases sorted by id.
    pub fn new(suite: impl Into<String>, seed: u64, mut cases: Vec<Case>) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        Report { suite: suite.into(), seed, cases }
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn max_measured(&self, bound: &str) -> Option<f64> {
        self.cases.iter().filter(|c| c.bound == bound).map(|c| c.measured).reduce(f64::max)
    }
}

fn sig12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().expect("formatted float parses")
    } else {
        x
    }
}

fn fmt12(x: f64) -> String {
    format!("{}", sig12(x))
}

#[derive(Serialize)]
struct Meta<'a> {
    suite: &'a str,
    seed: u64,
    cases: usize,
    failures: usize,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    meta: Meta<'a>,
    cases: Vec<Case>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    id: &'a str,
    bound: &'a str,
    relation: &'a str,
    n: Option<usize>,
    eps: Option<f64>,
    r: Option<u32>,
    t: Option<usize>,
    value: Option<f64>,
    measured: f64,
    allowed: f64,
    passed: bool,
    message: &'a str,
}

/// The report as text: JSON with a `meta` header, or CSV preceded by
/// `# key=value` comment lines. Floats carry 12 significant digits.
pub fn render(report: &Report, format: Format) -> Result<String> {
    let meta = Meta { suite: &report.suite, seed: report.seed, cases: report.cases.len(), failures: report.failures() };
    let cases: Vec<Case> = report.cases.iter().map(Case::rounded).collect();
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&JsonReport { meta, cases })? + "\n"),
        Format::Csv => {
            let mut out =
                format!("# suite={}\n# seed={}\n# cases={}\n# failures={}\n", meta.suite, meta.seed, meta.cases, meta.failures);
            let mut w = csv::Writer::from_writer(Vec::new());
            if cases.is_empty() {
                w.write_record([
                    "id", "bound", "relation", "n", "eps", "r", "t", "value", "measured", "allowed", "passed", "message",
                ])
                .map_err(csv_err)?;
            }
            for c in &cases {
                w.serialize(CsvRow {
                    id: &c.id,
                    bound: &c.bound,
                    relation: if c.relation == Relation::AtMost { "<=" } else { ">=" },
                    n: c.n,
                    eps: c.eps,
                    r: c.r,
                    t: c.t,
                    value: c.value,
                    measured: c.measured,
                    allowed: c.allowed,
                    passed: c.passed,
                    message: c.message.as_deref().unwrap_or(""),
                })
                .map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::IoFailure(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
            Ok(out)
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::IoFailure(e.to_string())
}

/// Writes the rendered report to `path`, or stdout when absent.
pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    write_text(&render(report, format)?, path)
}

pub(crate) fn write_text(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::IoFailure(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::IoFailure(e.to_string()))
        }
    }
}

/// Any serializable result as pretty JSON, or as CSV with one column per
/// top-level field (nested values JSON-encoded).
pub fn render_value<T: Serialize>(value: &T, format: Format) -> Result<String> {
    let v = serde_json::to_value(value)?;
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&v)? + "\n"),
        Format::Csv => {
            let fields: Vec<(String, serde_json::Value)> = match v {
                serde_json::Value::Object(map) => map.into_iter().collect(),
                other => vec![("value".into(), other)],
            };
            let cell = |v: &serde_json::Value| match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => String::new(),
                other => other.to_string(),
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(fields.iter().map(|(k, _)| k.as_str())).map_err(csv_err)?;
            w.write_record(fields.iter().map(|(_, v)| cell(v))).map_err(csv_err)?;
            let bytes = w.into_inner().map_err(|e| Error::IoFailure(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report() {
        let r = Report::new("none", 1, vec![]);
        let json = render(&r, Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["cases"], serde_json::json!([]));
        assert_eq!(v["meta"]["suite"], "none");
        assert!(render(&r, Format::Csv).unwrap().lines().any(|l| l.starts_with("id,bound")));
    }

    #[test]
    fn rendering_is_deterministic_and_rounded() {
        let cases = vec![
            Case::new("b", "x", Relation::AtMost, 1.0 / 3.0, 0.5).eps(0.1),
            Case::new("a", "y", Relation::AtLeast, 0.2, 0.5),
        ];
        let r = Report::new("s", 3, cases);
        assert_eq!(r.cases[0].id, "a");
        assert_eq!(r.failures(), 1);
        assert!(r.cases[0].message.as_ref().unwrap().starts_with("y violated: measured 0.2"));
        for f in [Format::Json, Format::Csv] {
            let a = render(&r, f).unwrap();
            assert_eq!(a, render(&r.clone(), f).unwrap());
            assert!(a.contains("0.333333333333") && !a.contains("0.3333333333333"));
        }
        let csv = render(&r, Format::Csv).unwrap();
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 3);
    }

    #[test]
    fn value_csv_flattens_fields() {
        let text = render_value(&serde_json::json!({"a": 1, "b": "x", "c": [1, 2]}), Format::Csv).unwrap();
        assert_eq!(text, "a,b,c\n1,x,\"[1,2]\"\n");
    }
}
