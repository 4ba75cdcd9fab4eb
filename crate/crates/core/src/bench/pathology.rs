//! Hand-built case where error metrics and distribution metrics disagree.
//!
//! The target has two isolated spikes. A flat forecast at the mean beats a
//! temporally shifted copy of the truth on MAPE even though the shift has
//! the right marginal distribution, and MSTD and V-F1 rank the plausible
//! forecast above the flat one.

use std::fmt::Write as _;

use crate::metrics::{evaluate_all, ForecastSet, MetricParams, MetricReport};

pub const PATHOLOGY_TARGET: [f64; 6] = [0.0, 0.0, 6.0, 0.0, 0.0, 6.0];

#[derive(Debug, Clone)]
pub struct PathologyVariant {
    pub name: &'static str,
    pub forecast: Vec<f64>,
    pub metrics: MetricReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathologyCheck {
    pub claim: String,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct PathologyReport {
    pub target: Vec<f64>,
    pub variants: Vec<PathologyVariant>,
    pub checks: Vec<PathologyCheck>,
}

impl PathologyReport {
    pub fn variant(&self, name: &str) -> &PathologyVariant {
        self.variants.iter().find(|v| v.name == name).expect("known variant")
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let fmt_vec = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ");
        let _ = writeln!(s, "# Metric pathology\n\nTarget: [{}]\n", fmt_vec(&self.target));
        s.push_str("| Variant | Forecast | MAPE | MSTD | V-Recall | V-F1 | RMSE | SPEC |\n");
        s.push_str("|---|---|---|---|---|---|---|---|\n");
        for v in &self.variants {
            let m = &v.metrics;
            let _ = writeln!(
                s,
                "| {} | [{}] | {} | {} | {:.3} | {:.3} | {:.3} | {:.3} |",
                v.name,
                fmt_vec(&v.forecast),
                m.mape,
                m.mstd,
                m.v_recall,
                m.v_f1,
                m.rmse,
                m.spec
            );
        }
        s.push_str("\n| Check | Result |\n|---|---|\n");
        for c in &self.checks {
            let _ = writeln!(s, "| {} | {} |", c.claim, if c.passed { "pass" } else { "FAIL" });
        }
        s
    }
}

/// Scores the truth, a flat mean forecast, a one-step early shift of the
/// truth and a plausible under-sized forecast, then checks the expected
/// ranking pattern.
pub fn run_pathology_suite(params: &MetricParams) -> PathologyReport {
    let target = PATHOLOGY_TARGET.to_vec();
    let variants: Vec<PathologyVariant> = [
        ("truth", target.clone()),
        ("flat", vec![2.0; 6]),
        ("shift", vec![0.0, 6.0, 0.0, 0.0, 6.0, 0.0]),
        ("plausible", vec![0.0, 0.0, 5.0, 0.0, 0.0, 5.0]),
    ]
    .into_iter()
    .map(|(name, forecast)| {
        let fs = ForecastSet::single(&target, &forecast).expect("valid hand-built case");
        PathologyVariant {
            name,
            metrics: evaluate_all(&fs, params),
            forecast,
        }
    })
    .collect();

    let m = |name: &str| &variants.iter().find(|v| v.name == name).unwrap().metrics;
    let (flat, shift, plaus) = (m("flat"), m("shift"), m("plausible"));
    let val = |s: &crate::metrics::Score| s.value().unwrap_or(f64::NAN);
    let check = |claim: &str, passed: bool| PathologyCheck {
        claim: claim.to_string(),
        passed,
    };
    let checks = vec![
        check("MSTD(plausible) < MSTD(flat)", val(&plaus.mstd) < val(&flat.mstd)),
        check("V-F1(flat) = 0", flat.v_f1 == 0.0),
        check("V-F1(flat) < V-F1(plausible)", flat.v_f1 < plaus.v_f1),
        check("V-Recall(flat) = 0", flat.v_recall == 0.0),
        check("MSTD(shift) = 0", val(&shift.mstd) == 0.0),
        check("V-F1(shift) < 1", shift.v_f1 < 1.0),
        check(
            "MAPE(shift) is the worst of flat, shift, plausible",
            val(&shift.mape) > val(&flat.mape) && val(&shift.mape) > val(&plaus.mape),
        ),
    ];
    PathologyReport {
        target,
        variants,
        checks,
    }
}
