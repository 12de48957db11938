//! Study reports and their byte-stable renderings.
//!
//! Numbers in text files are written with 17 significant digits
//! (`{:.16e}`), columns in a fixed order, lines ending in `\n`. Wall-clock
//! timings are kept out of every file except `timings.json`.

use std::collections::BTreeMap;

use fracheat_core::lab::FittedRate;
use fracheat_core::RateFit;
use serde::{Deserialize, Serialize};

/// One asserted quantity with its target and tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// `"<= 1e-10"`, `"1 +- 0.1"`, ...
    pub target: String,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// `|measured - want| <= tol`
    pub fn near(name: impl Into<String>, measured: f64, want: f64, tol: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            target: format!("{want} +- {tol}"),
            tolerance: tol,
            passed: (measured - want).abs() <= tol,
        }
    }

    /// `measured <= bound`
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            target: format!("<= {bound:e}"),
            tolerance: bound,
            passed: measured <= bound,
        }
    }

    /// `measured >= bound`
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Check {
        Check {
            name: name.into(),
            measured,
            target: format!(">= {bound}"),
            tolerance: bound,
            passed: measured >= bound,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Check {
        Check {
            name: name.into(),
            measured: if ok { 1.0 } else { 0.0 },
            target: "true".into(),
            tolerance: 0.0,
            passed: ok,
        }
    }
}

/// A fitted rate next to its predicted exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub norm_id: String,
    pub predicted: f64,
    pub slope: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub intercept: f64,
    pub r_squared: f64,
    pub abscissae: Vec<f64>,
    pub errors: Vec<f64>,
    pub excluded: Vec<(f64, f64)>,
}

impl FitSummary {
    pub fn new(fit: &RateFit, predicted: f64, tolerance: f64) -> FitSummary {
        FitSummary {
            norm_id: fit.norm_id.clone(),
            predicted,
            slope: fit.slope,
            tolerance,
            passed: (fit.slope - predicted).abs() <= tolerance,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            abscissae: fit.abscissae.clone(),
            errors: fit.errors.clone(),
            excluded: fit.excluded.clone(),
        }
    }

    pub fn from_study(rate: &FittedRate, tolerance: f64) -> FitSummary {
        FitSummary::new(&rate.fit, rate.predicted, tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub study: String,
    pub config_hash: String,
    pub tables: Vec<Table>,
    pub fits: Vec<FitSummary>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    /// Warnings count as failures.
    pub strict: bool,
    pub passed: bool,
}

impl StudyReport {
    pub fn new(study: &str, config_hash: String, strict: bool) -> StudyReport {
        StudyReport {
            study: study.into(),
            config_hash,
            tables: Vec::new(),
            fits: Vec::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
            strict,
            passed: false,
        }
    }

    pub fn finish(&mut self) {
        self.passed = self.fits.iter().all(|f| f.passed)
            && self.checks.iter().all(|c| c.passed)
            && !(self.strict && !self.warnings.is_empty());
    }

    /// One line per asserted quantity, for the terminal.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let tag = |ok: bool| if ok { "PASS" } else { "FAIL" };
        for f in &self.fits {
            out += &format!(
                "[{}] {}: slope {:.4} (predicted {} +- {}), R^2 {:.6}\n",
                tag(f.passed),
                f.norm_id,
                f.slope,
                f.predicted,
                f.tolerance,
                f.r_squared
            );
        }
        for c in &self.checks {
            out += &format!(
                "[{}] {}: {:.6e} (want {})\n",
                tag(c.passed),
                c.name,
                c.measured,
                c.target
            );
        }
        for w in &self.warnings {
            out += &format!("[{}] warning: {w}\n", if self.strict { "FAIL" } else { "WARN" });
        }
        out += &format!(
            "{}: {}\n",
            self.study,
            if self.passed { "all tolerances pass" } else { "FAILED" }
        );
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub config_hash: String,
    pub total_seconds: f64,
    pub phases: Vec<(String, f64)>,
}

/// 17 significant digits.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn render_table(table: &Table, hash: &str) -> String {
    let mut out = format!("# {}\n# config_hash {hash}\n", table.name);
    out += &table.columns.join("\t");
    out.push('\n');
    for row in &table.rows {
        out += &row.iter().map(|v| fmt17(*v)).collect::<Vec<_>>().join("\t");
        out.push('\n');
    }
    out
}

/// Two blocks of two columns, `ln(2 - alpha)` against `ln(error)`: the
/// measured pairs, then the fitted line at the same abscissae.
pub fn render_plot(fit: &FitSummary, hash: &str) -> String {
    let mut out = format!(
        "# rate fit {}\n# config_hash {hash}\n# slope {} intercept {} r_squared {} predicted {}\n",
        fit.norm_id,
        fmt17(fit.slope),
        fmt17(fit.intercept),
        fmt17(fit.r_squared),
        fmt17(fit.predicted)
    );
    out += "# measured: ln(2-alpha) ln(error)\n";
    for (x, e) in fit.abscissae.iter().zip(&fit.errors) {
        out += &format!("{}\t{}\n", fmt17(x.ln()), fmt17(e.ln()));
    }
    out += "\n\n# fitted: ln(2-alpha) intercept+slope*ln(2-alpha)\n";
    for x in &fit.abscissae {
        out += &format!("{}\t{}\n", fmt17(x.ln()), fmt17(fit.intercept + fit.slope * x.ln()));
    }
    out
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Every output file of a finished study, by file name.
pub fn render_all(report: &StudyReport, timings: &Timings, echo: &str) -> BTreeMap<String, String> {
    let mut files = BTreeMap::new();
    for table in &report.tables {
        files.insert(
            format!("{}.tsv", file_stem(&table.name)),
            render_table(table, &report.config_hash),
        );
    }
    for fit in &report.fits {
        files.insert(
            format!("plot_{}.dat", file_stem(&fit.norm_id)),
            render_plot(fit, &report.config_hash),
        );
    }
    files.insert("report.json".into(), json(report));
    files.insert("timings.json".into(), json(timings));
    files.insert(
        "config.toml".into(),
        format!("# resolved configuration, config_hash {}\n{echo}", report.config_hash),
    );
    files
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt17(f64::INFINITY), "inf");
        let v = 1.0 / 3.0;
        assert_eq!(fmt17(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn table_layout() {
        let t = Table {
            name: "errors".into(),
            columns: vec!["alpha".into(), "2-alpha".into()],
            rows: vec![vec![1.5, 0.5]],
        };
        let s = render_table(&t, "abc");
        assert_eq!(
            s,
            "# errors\n# config_hash abc\nalpha\t2-alpha\n1.5000000000000000e0\t5.0000000000000000e-1\n"
        );
    }

    #[test]
    fn strict_promotes_warnings() {
        let mut r = StudyReport::new("x", "h".into(), false);
        r.checks.push(Check::at_most("a", 1.0, 2.0));
        r.warnings.push("w".into());
        r.finish();
        assert!(r.passed);
        r.strict = true;
        r.finish();
        assert!(!r.passed);
    }

    #[test]
    fn check_constructors() {
        assert!(Check::near("s", 1.05, 1.0, 0.1).passed);
        assert!(!Check::near("s", 1.2, 1.0, 0.1).passed);
        assert!(Check::at_least("o", 2.0, 1.9).passed);
        assert!(!Check::holds("d", false).passed);
    }
}
