use std::io::Write;
use std::time::Duration;

use serde::Serialize;

/// One checked quantity. `expected`/`residual` are absent for raw values.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub label: String,
    pub computed: f64,
    pub expected: Option<f64>,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
}

impl Row {
    pub fn check(label: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        Row {
            label: label.into(),
            computed,
            expected: Some(expected),
            residual: Some(computed - expected),
            tolerance: Some(tolerance),
        }
    }

    /// A residual that is computed directly (expected value 0).
    pub fn residual(label: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Row::check(label, residual, 0.0, tolerance)
    }

    pub fn raw(label: impl Into<String>, computed: f64) -> Self {
        Row {
            label: label.into(),
            computed,
            expected: None,
            residual: None,
            tolerance: None,
        }
    }

    pub fn passes(&self) -> bool {
        match (self.residual, self.tolerance) {
            (Some(r), Some(t)) => r.abs() <= t,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub pass: bool,
    pub rows: Vec<Row>,
    #[serde(serialize_with = "secs")]
    pub wall_time: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl RunReport {
    pub fn new(command: impl Into<String>, rows: Vec<Row>, wall_time: Duration) -> Self {
        let pass = rows.iter().all(Row::passes);
        RunReport {
            command: command.into(),
            pass,
            rows,
            wall_time,
        }
    }

    /// CSV body only; wall time goes to stderr so reruns diff cleanly.
    pub fn write_csv<W: Write>(&self, out: W) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["label", "computed", "expected", "residual", "tolerance", "pass"])?;
        for r in &self.rows {
            w.write_record([
                r.label.clone(),
                num(r.computed),
                opt(r.expected),
                opt(r.residual),
                opt(r.tolerance),
                r.passes().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> anyhow::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }
}

/// 17 significant digits, so values round-trip exactly.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 12345.678901234567, 0.0] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
        assert_eq!(num(f64::NAN), "NaN");
    }

    #[test]
    fn pass_requires_every_checked_row() {
        let ok = RunReport::new("t", vec![Row::check("a", 1.0, 1.0 + 1e-9, 1e-8), Row::raw("b", 3.0)], Duration::ZERO);
        assert!(ok.pass);
        let bad = RunReport::new("t", vec![Row::residual("a", 2e-8, 1e-8)], Duration::ZERO);
        assert!(!bad.pass);
        let nan = RunReport::new("t", vec![Row::residual("a", f64::NAN, 1.0)], Duration::ZERO);
        assert!(!nan.pass);
    }
}
