use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{BenchReport, MethodRow};
use crate::data::{save_forecasts, DatasetStats};
use crate::error::{Error, Result};
use crate::metrics::{ForecastSet, MetricReport, CSV_COLUMNS};

/// Files whose bytes depend only on configuration and seed.
pub const REPORT_FILES: [&str; 3] = ["report.csv", "report.md", "stats.md"];

/// Wall-clock seconds per method. Kept apart from the report files so those
/// stay reproducible byte for byte.
pub const TIMING_FILE: &str = "timing.csv";

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn report_csv(report: &BenchReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["method", "status"];
    header.extend(CSV_COLUMNS);
    header.push("detail");
    let csv_io = |e: csv::Error| Error::Config(format!("csv encoding: {e}"));
    w.write_record(&header).map_err(csv_io)?;
    for row in &report.rows {
        let mut rec = vec![row.name.clone()];
        match &row.outcome {
            Ok(r) => {
                rec.push("ok".into());
                rec.extend(r.metrics.csv_row().split(',').map(String::from));
                rec.push(r.output.note.clone().unwrap_or_default());
            }
            Err(why) => {
                rec.push("failed".into());
                rec.extend(CSV_COLUMNS.iter().map(|_| "NA".to_string()));
                rec.push(why.clone());
            }
        }
        w.write_record(&rec).map_err(csv_io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Config(format!("csv encoding: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn metric_cells(m: &MetricReport) -> [String; 8] {
    [
        m.mstd.to_string(),
        format!("{:.3}", m.v_recall),
        format!("{:.3}", m.v_precision),
        format!("{:.3}", m.v_f1),
        m.mape.to_string(),
        m.smape.to_string(),
        format!("{:.3}", m.rmse),
        format!("{:.3}", m.spec),
    ]
}

fn report_md(report: &BenchReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {}\n", report.dataset);
    let _ = writeln!(
        s,
        "P = {}, L = {}, {} series evaluated.\n",
        report.p,
        report.l,
        report.ids.len()
    );
    s.push_str("| Method | MSTD ↓ | V-Recall ↑ | V-Precision ↑ | V-F1 ↑ | MAPE ↓ | sMAPE ↓ | RMSE ↓ | SPEC ↓ |\n");
    s.push_str("|---|---|---|---|---|---|---|---|---|\n");
    let ok: Vec<&MethodRow> = report.rows.iter().filter(|r| r.outcome.is_ok()).collect();
    for row in &ok {
        let m = &row.outcome.as_ref().unwrap().metrics;
        let _ = writeln!(s, "| {} | {} |", row.name, metric_cells(m).join(" | "));
    }
    let failed: Vec<&MethodRow> = report.rows.iter().filter(|r| r.outcome.is_err()).collect();
    if !failed.is_empty() {
        s.push_str("\nFailed methods:\n\n");
        for row in failed {
            let _ = writeln!(s, "- {}: {}", row.name, row.outcome.as_ref().unwrap_err());
        }
    }
    let notes: Vec<String> = ok
        .iter()
        .filter_map(|r| {
            r.outcome
                .as_ref()
                .unwrap()
                .output
                .note
                .as_ref()
                .map(|n| format!("- {}: {n}", r.name))
        })
        .collect();
    if !notes.is_empty() {
        s.push_str("\nTraining notes:\n\n");
        s.push_str(&notes.join("\n"));
        s.push('\n');
    }
    s
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.3}"))
}

fn stats_row(label: &str, st: &DatasetStats) -> String {
    format!(
        "| {label} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
        st.m,
        st.t,
        opt(st.mean_adi),
        opt(st.mean_cv2),
        opt(st.pooled_cv2),
        st.counts.intermittent,
        st.counts.lumpy,
        st.counts.smooth,
        st.counts.erratic
    )
}

fn stats_md(report: &BenchReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {} statistics\n", report.dataset);
    s.push_str("| Subset | M | T | mean ADI | mean CV² | pooled CV² | Intermittent | Lumpy | Smooth | Erratic |\n");
    s.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
    s.push_str(&stats_row("input", &report.input));
    s.push('\n');
    if report.filtered {
        s.push_str(&stats_row("irregular", &report.used));
        s.push('\n');
    }
    s.push_str(
        "\nMean ADI and mean CV² average the per-series values where defined; \
         pooled CV² uses every non-zero entry of every series.\n",
    );
    s
}

/// Per-method forecasts in long format, named `forecasts_<method>.csv`.
pub fn write_forecasts(report: &BenchReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for row in &report.rows {
        let Ok(r) = &row.outcome else { continue };
        let fs = ForecastSet::new(report.actuals.clone(), r.output.forecasts.clone())?;
        let path = dir.join(format!("forecasts_{}.csv", row.name));
        save_forecasts(&report.ids, &fs, &path)?;
        written.push(path);
    }
    Ok(written)
}

/// Writes the report files, the forecast CSVs and the timing file into
/// `dir`, creating it if needed. Returns every path written.
pub fn emit_report(report: &BenchReport, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for (name, text) in REPORT_FILES
        .iter()
        .zip([report_csv(report)?, report_md(report), stats_md(report)])
    {
        let path = dir.join(name);
        write_file(&path, &text)?;
        written.push(path);
    }
    written.extend(write_forecasts(report, dir)?);
    let mut timing = String::from("method,seconds\n");
    for row in &report.rows {
        let _ = writeln!(timing, "{},{:.3}", row.name, row.seconds);
    }
    let path = dir.join(TIMING_FILE);
    write_file(&path, &timing)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::super::{run_bench, BenchConfig, DataSource};
    use super::*;
    use crate::data::{load_forecasts, GenSpec, SizeDist};
    use crate::metrics::evaluate_all;

    #[test]
    fn report_files_round_trip_through_evaluate() {
        let mut c = BenchConfig::new(DataSource::Generated(GenSpec {
            m: 30,
            t: 50,
            q: 0.3,
            size: SizeDist::UniformInt(1, 6),
            seed: 2,
        }));
        c.p = 6;
        c.l = 4;
        c.methods = vec!["croston".into(), "adida".into(), "arima".into()];
        let report = run_bench(&c).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_report(&report, dir.path()).unwrap();
        assert_eq!(files.len(), 3 + 3 + 1);

        let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
        for row in &report.rows {
            let (ids, fs) = load_forecasts(dir.path().join(format!("forecasts_{}.csv", row.name))).unwrap();
            assert_eq!(ids, report.ids);
            let line = format!("{},ok,{},", row.name, evaluate_all(&fs, &c.metrics).csv_row());
            assert!(csv.contains(&line), "{line}\n{csv}");
        }
        let md = std::fs::read_to_string(dir.path().join("report.md")).unwrap();
        assert_eq!(md.matches("| croston |").count(), 1);
        let stats = std::fs::read_to_string(dir.path().join("stats.md")).unwrap();
        assert!(stats.contains("| input | 30 | 50 |"));
    }
}
