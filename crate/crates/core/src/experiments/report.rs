//! Report rows and their CSV serialization.

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;

pub const HEADER: [&str; 8] = [
    "scenario",
    "study",
    "degree",
    "epsilon",
    "value",
    "fitted_exponent",
    "slack",
    "status",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    Violation,
    Excluded,
}

impl RowStatus {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            RowStatus::Ok
        } else {
            RowStatus::Violation
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Violation => "violation",
            RowStatus::Excluded => "excluded",
        }
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub scenario: String,
    pub study: String,
    pub degree: Option<u32>,
    pub epsilon: Option<f64>,
    pub value: f64,
    pub fitted_exponent: Option<f64>,
    pub slack: Option<f64>,
    pub status: RowStatus,
}

impl ReportRow {
    pub fn new(scenario: &str, study: impl Into<String>, value: f64) -> Self {
        Self {
            scenario: scenario.to_string(),
            study: study.into(),
            degree: None,
            epsilon: None,
            value,
            fitted_exponent: None,
            slack: None,
            status: RowStatus::Ok,
        }
    }

    pub fn degree(mut self, degree: u32) -> Self {
        self.degree = Some(degree);
        self
    }

    pub fn epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn fitted(mut self, exponent: f64) -> Self {
        self.fitted_exponent = Some(exponent);
        self
    }

    pub fn slack(mut self, slack: f64) -> Self {
        self.slack = Some(slack);
        self
    }

    pub fn status(mut self, status: RowStatus) -> Self {
        self.status = status;
        self
    }

    pub fn pass(self, pass: bool) -> Self {
        self.status(RowStatus::from_pass(pass))
    }
}

/// `printf("%.17g")`: 17 significant digits, trailing zeros removed,
/// exponent form outside `1e-5 ≤ |x| < 1e17`.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exponent) = sci.split_once('e').expect("exponent form");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..17).contains(&exponent) {
        let decimals = (16 - exponent).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa.to_string()), exponent.abs())
    }
}

fn optional(x: Option<f64>) -> String {
    x.map_or(String::new(), format_g17)
}

fn compare(a: &ReportRow, b: &ReportRow) -> Ordering {
    let eps = |x: Option<f64>, y: Option<f64>| match (x, y) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (x, y) => x.is_some().cmp(&y.is_some()),
    };
    a.scenario
        .cmp(&b.scenario)
        .then(a.degree.cmp(&b.degree))
        .then(eps(a.epsilon, b.epsilon))
}

/// Stable sort by `(scenario, degree, epsilon)`; missing values sort first.
pub fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(compare);
}

fn write_rows<W: std::io::Write>(rows: &[ReportRow], sink: W) -> Result<W, csv::Error> {
    let mut sorted = rows.to_vec();
    sort_rows(&mut sorted);
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(sink);
    writer.write_record(HEADER)?;
    for row in &sorted {
        writer.write_record([
            row.scenario.clone(),
            row.study.clone(),
            row.degree.map_or(String::new(), |d| d.to_string()),
            optional(row.epsilon),
            format_g17(row.value),
            optional(row.fitted_exponent),
            optional(row.slack),
            row.status.to_string(),
        ])?;
    }
    writer.into_inner().map_err(|e| csv::Error::from(e.into_error()))
}

/// The CSV document [`emit_csv`] would write.
pub fn csv_bytes(rows: &[ReportRow]) -> Vec<u8> {
    write_rows(rows, Vec::new()).expect("writing to memory cannot fail")
}

/// Writes the header and the sorted rows as RFC 4180 CSV (CRLF line ends,
/// quotes only where needed).
pub fn emit_csv(rows: &[ReportRow], path: &Path) -> Result<(), csv::Error> {
    let file = std::fs::File::create(path)?;
    let mut file = write_rows(rows, std::io::BufWriter::new(file))?;
    std::io::Write::flush(&mut file)?;
    Ok(())
}
