use serde::{Deserialize, Serialize};

/// One measured quantity inside a check, with its own tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartReport {
    pub name: String,
    pub count: u64,
    pub max_abs: f64,
    pub max_rel: f64,
    pub tol: f64,
    pub pass: bool,
    pub constant: Option<f64>,
}

/// Result of one named check. The top-level residuals and tolerance are
/// those of the binding part (largest `max_rel / tol`), so
/// `pass ⇔ max_rel ≤ tol` holds whenever no sample failed outright.
/// Residuals of failed samples are infinite and serialize as `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub samples: usize,
    pub seed: u64,
    pub max_abs: Option<f64>,
    pub max_rel: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub constant: Option<f64>,
    pub worst: serde_json::Value,
    pub ms: u64,
    pub retries: u64,
    pub failed_samples: u64,
    pub parts: Vec<PartReport>,
}

impl CheckReport {
    /// Flat CSV header matching [`CheckReport::csv_row`].
    pub const CSV_HEADER: [&'static str; 16] = [
        "check",
        "n",
        "m",
        "A",
        "B",
        "samples",
        "seed",
        "max_abs",
        "max_rel",
        "tol",
        "pass",
        "constant",
        "ms",
        "retries",
        "failed_samples",
        "worst",
    ];

    pub fn csv_row(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(fmt15).unwrap_or_default();
        vec![
            self.check.clone(),
            self.n.to_string(),
            self.m.to_string(),
            fmt15(self.a),
            fmt15(self.b),
            self.samples.to_string(),
            self.seed.to_string(),
            opt(self.max_abs),
            opt(self.max_rel),
            fmt15(self.tol),
            self.pass.to_string(),
            opt(self.constant),
            self.ms.to_string(),
            self.retries.to_string(),
            self.failed_samples.to_string(),
            self.worst.to_string(),
        ]
    }

    /// The report with the timing field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        Self { ms: 0, ..self.clone() }
    }
}

/// 15 significant digits, shortest form; scientific outside `[1e-4, 1e15)`.
pub fn fmt15(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let parsed: f64 = format!("{v:.14e}").parse().unwrap_or(v);
    if (1e-4..1e15).contains(&parsed.abs()) {
        format!("{parsed}")
    } else {
        format!("{parsed:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt15(4.0), "4");
        assert_eq!(fmt15(0.1 + 0.2), "0.3");
        assert_eq!(fmt15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt15(4.129864411028533e-16), "4.12986441102853e-16");
        assert_eq!(fmt15(-2.5e20), "-2.5e20");
    }
}
