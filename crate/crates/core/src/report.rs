//! Human-readable regression tables and plot-ready comparison rows.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::econometrics::{significance_stars, OlsFit, INTERCEPT};
use crate::study::{
    column_label, ModelSpec, Regressor, StructuralChangeReport, Suite, AFTER_LABEL, BEFORE_LABEL,
};

/// `"***"` etc.; p-values outside `[0, 1]` (never produced by a fit) get none.
pub fn stars_str(p: f64) -> &'static str {
    match significance_stars(p) {
        Ok(3) => "***",
        Ok(2) => "**",
        Ok(1) => "*",
        _ => "",
    }
}

const LABEL_WIDTH: usize = 28;
const CELL_WIDTH: usize = 16;

/// One window's four models side by side: coefficient with stars, the
/// standard error in parentheses underneath, then fit statistics.
pub fn window_table(suite: &Suite, window: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Dependent Variable: log(USD Price) — window {window}");
    let mut header = format!("{:<LABEL_WIDTH$}", "");
    for m in ModelSpec::ALL {
        let _ = write!(header, "{:>CELL_WIDTH$}", m.label());
    }
    let rule = "-".repeat(header.len());
    let _ = writeln!(out, "{rule}\n{header}\n{rule}");

    let fits: Vec<Option<&OlsFit>> = ModelSpec::ALL.iter().map(|m| suite.fit(window, *m)).collect();
    let names = std::iter::once(INTERCEPT).chain(Regressor::ALL.iter().map(|r| r.name()));
    for name in names {
        let mut coef_line = format!("{:<LABEL_WIDTH$}", column_label(name));
        let mut se_line = format!("{:<LABEL_WIDTH$}", "");
        for fit in &fits {
            let cell = fit.and_then(|f| f.index_of(name).map(|i| (f, i)));
            let (c, s) = match cell {
                Some((f, i)) => (
                    format!("{:.4}{}", f.coefficients[i], stars_str(f.p_values[i])),
                    format!("({:.4})", f.standard_errors[i]),
                ),
                None => (String::new(), String::new()),
            };
            let _ = write!(coef_line, "{c:>CELL_WIDTH$}");
            let _ = write!(se_line, "{s:>CELL_WIDTH$}");
        }
        let _ = writeln!(out, "{}", coef_line.trim_end());
        let _ = writeln!(out, "{}", se_line.trim_end());
    }
    let _ = writeln!(out, "{rule}");
    type Cell = fn(&OlsFit) -> String;
    let stat_rows: [(&str, Cell); 3] = [
        ("Observations", |f| f.n_obs.to_string()),
        ("R2", |f| format!("{:.4}", f.r2)),
        ("Adjusted R2", |f| format!("{:.4}", f.adj_r2)),
    ];
    for (label, cell) in stat_rows {
        let mut line = format!("{label:<LABEL_WIDTH$}");
        for fit in &fits {
            let _ = write!(line, "{:>CELL_WIDTH$}", fit.map(cell).unwrap_or_default());
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let _ = writeln!(out, "{rule}");
    for (m, outcome) in ModelSpec::ALL.iter().filter_map(|m| suite.get(window, *m).map(|o| (m, o))) {
        if let crate::study::FitOutcome::Skipped { reason } = outcome {
            let _ = writeln!(out, "{} skipped: {reason}", m.label());
        }
    }
    let _ = writeln!(out, "Note: *p<0.1; **p<0.05; ***p<0.01");
    out
}

/// Tables for every window in suite order, separated by blank lines.
pub fn suite_tables(suite: &Suite) -> String {
    let mut windows: Vec<&str> = Vec::new();
    for e in &suite.entries {
        if !windows.contains(&e.window.as_str()) {
            windows.push(&e.window);
        }
    }
    windows
        .iter()
        .map(|w| window_table(suite, w))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Before/after coefficients with stars and the change flags.
pub fn structural_change_table(report: &StructuralChangeReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Structural change: Model 4, {BEFORE_LABEL} vs {AFTER_LABEL}");
    let header = format!(
        "{:<LABEL_WIDTH$}{:>CELL_WIDTH$}{:>CELL_WIDTH$}{:>12}{:>20}",
        "", "Before", "After", "Sign flip", "Significance lost"
    );
    let rule = "-".repeat(header.len());
    let _ = writeln!(out, "{rule}\n{header}\n{rule}");
    let stars = |n: u8| "*".repeat(n as usize);
    for r in &report.rows {
        let line = format!(
            "{:<LABEL_WIDTH$}{:>CELL_WIDTH$}{:>CELL_WIDTH$}{:>12}{:>20}",
            column_label(&r.name),
            format!("{:.4}{}", r.coef_before, stars(r.stars_before)),
            format!("{:.4}{}", r.coef_after, stars(r.stars_after)),
            if r.sign_flipped { "yes" } else { "no" },
            if r.significance_lost { "yes" } else { "no" },
        );
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(out, "{rule}");
    out
}

/// One point of a coefficient comparison plot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LollipopRow {
    pub regressor: String,
    pub coefficient: f64,
    pub stars: u8,
    pub model_tag: &'static str,
}

pub const TAG_WITHOUT_SENTIMENT: &str = "without_sentiment";
pub const TAG_WITH_SENTIMENT: &str = "with_sentiment";
pub const TAG_BEFORE: &str = "before_2021";
pub const TAG_AFTER: &str = "after_2021";

fn lollipop_from<'a>(fit: &'a OlsFit, tag: &'static str) -> impl Iterator<Item = LollipopRow> + 'a {
    fit.names
        .iter()
        .enumerate()
        .filter(|(_, n)| n.as_str() != INTERCEPT)
        .map(move |(i, n)| LollipopRow {
            regressor: n.clone(),
            coefficient: fit.coefficients[i],
            stars: significance_stars(fit.p_values[i]).unwrap_or(0),
            model_tag: tag,
        })
}

/// Model 3 vs Model 4 in the before window, then Model 4 before vs after.
/// Missing fits contribute no rows.
pub fn lollipop_rows(suite: &Suite) -> Vec<LollipopRow> {
    let plan = [
        (BEFORE_LABEL, ModelSpec::M3, TAG_WITHOUT_SENTIMENT),
        (BEFORE_LABEL, ModelSpec::M4, TAG_WITH_SENTIMENT),
        (BEFORE_LABEL, ModelSpec::M4, TAG_BEFORE),
        (AFTER_LABEL, ModelSpec::M4, TAG_AFTER),
    ];
    plan.iter()
        .filter_map(|(w, m, tag)| suite.fit(w, *m).map(|f| (f, *tag)))
        .flat_map(|(f, tag)| lollipop_from(f, tag))
        .collect()
}

pub fn write_lollipop_csv<W: Write>(writer: W, rows: &[LollipopRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["regressor", "coefficient", "stars", "model_tag"])?;
    for r in rows {
        w.write_record([
            r.regressor.clone(),
            r.coefficient.to_string(),
            r.stars.to_string(),
            r.model_tag.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::study::{FitOutcome, SuiteEntry};

    fn fit_for(model: ModelSpec, coef: f64, p: f64) -> OlsFit {
        let names: Vec<String> = std::iter::once(INTERCEPT.to_string())
            .chain(model.regressors().iter().map(|r| r.name().to_string()))
            .collect();
        let k = names.len();
        OlsFit {
            names,
            coefficients: vec![coef; k],
            standard_errors: vec![0.5; k],
            t_stats: vec![coef / 0.5; k],
            p_values: vec![p; k],
            r2: 0.25,
            adj_r2: 0.2,
            n_obs: 50,
            n_params: k,
            rss: 3.0,
        }
    }

    fn suite() -> Suite {
        let mut entries = Vec::new();
        for (w, p) in [(BEFORE_LABEL, 0.001), (AFTER_LABEL, 0.3)] {
            for m in ModelSpec::ALL {
                entries.push(SuiteEntry {
                    window: w.to_string(),
                    model: m,
                    outcome: FitOutcome::Fit(fit_for(m, 1.5, p)),
                });
            }
        }
        entries[0].outcome = FitOutcome::Skipped { reason: "too few rows".into() };
        Suite { entries }
    }

    #[test]
    fn structural_table_marks_flips() {
        use crate::study::structural_change;
        let s = suite();
        let before = s.fit(BEFORE_LABEL, ModelSpec::M4).unwrap();
        let mut after = s.fit(AFTER_LABEL, ModelSpec::M4).unwrap().clone();
        after.coefficients[6] = -1.0;
        let table = structural_change_table(&structural_change(before, &after).unwrap());
        assert!(table.contains("Gender: Male"));
        assert_eq!(table.matches(" yes").count(), 1 + 12);
    }

    #[test]
    fn star_strings() {
        assert_eq!(stars_str(0.001), "***");
        assert_eq!(stars_str(0.02), "**");
        assert_eq!(stars_str(0.09), "*");
        assert_eq!(stars_str(0.2), "");
    }

    #[test]
    fn table_layout() {
        let t = window_table(&suite(), BEFORE_LABEL);
        assert!(t.contains("1.5000***"));
        assert!(t.contains("(0.5000)"));
        assert!(t.contains("Sentiment Score"));
        assert!(t.contains("Model 1 skipped: too few rows"));
        let after = window_table(&suite(), AFTER_LABEL);
        assert!(after.contains("1.5000 ") || after.contains("1.5000\n"));
        assert!(!after.contains("1.5000*"));
    }

    #[test]
    fn lollipop_tags_and_counts() {
        let rows = lollipop_rows(&suite());
        let count = |tag| rows.iter().filter(|r| r.model_tag == tag).count();
        assert_eq!(count(TAG_WITHOUT_SENTIMENT), 10);
        assert_eq!(count(TAG_WITH_SENTIMENT), 11);
        assert_eq!(count(TAG_BEFORE), 11);
        assert_eq!(count(TAG_AFTER), 11);
        assert!(rows.iter().all(|r| r.regressor != INTERCEPT));
        assert!(rows.iter().filter(|r| r.model_tag == TAG_AFTER).all(|r| r.stars == 0));
    }
}
