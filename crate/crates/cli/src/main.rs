//! `irregcast` command-line harness.
//!
//! Exit codes: 0 on success, 1 on usage or configuration errors, 2 on data
//! errors (unreadable or malformed input, failed fits, failed checks).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use irregcast::bench::{emit_report, metric_params, run_bench, run_pathology_suite, write_forecasts, BenchConfig};
use irregcast::config::{apply_gen_flag, Config};
use irregcast::data::{load_forecasts, save_csv};
use irregcast::metrics::{evaluate_all, MetricReport};
use irregcast::nn::save_params;
use irregcast::series::classify_sbc;
use irregcast::Error;

#[derive(Parser, Debug)]
#[command(
    name = "irregcast",
    version,
    about = "Forecasting and evaluation for intermittent demand series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Syntetos-Boylan class counts and dataset statistics.
    Classify(Common),
    /// Write a synthetic dataset as wide CSV to --out.
    GenSynthetic(Common),
    /// Train/fit the selected methods and write forecasts and checkpoints to --out.
    Forecast(Common),
    /// Score long-format forecast files.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Files with header series_id,step,actual,forecast.
        #[arg(required = true)]
        forecasts: Vec<PathBuf>,
    },
    /// Run the benchmark and write report.csv, report.md, stats.md and forecasts to --out.
    Bench(Common),
    /// Score the hand-built metric pathology case.
    Pathology(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Flat `section.key = value` file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Wide CSV dataset (header id,t1,...,tT).
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Generator spec, e.g. q=0.2,size=lognormal:1:1.2,M=500,T=96.
    #[arg(long)]
    gen: Option<String>,
    /// Comma-separated method names.
    #[arg(long)]
    methods: Option<String>,
    /// History length.
    #[arg(long)]
    p: Option<usize>,
    /// Horizon length.
    #[arg(long)]
    l: Option<usize>,
    /// SPEC understock weight.
    #[arg(long)]
    alpha1: Option<f64>,
    /// SPEC overstock weight.
    #[arg(long)]
    alpha2: Option<f64>,
    /// Forecasts below tau count as predicted voids.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file or directory, depending on the subcommand.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<Config, Error> {
        let mut c = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        if let Some(path) = &self.dataset {
            c.remove_section("gen");
            c.set("dataset.path", path.to_string_lossy());
        }
        if let Some(spec) = &self.gen {
            c.remove("dataset.path");
            apply_gen_flag(&mut c, spec)?;
        }
        let mut put = |key: &str, v: Option<String>| {
            if let Some(v) = v {
                c.set(key, v);
            }
        };
        put("bench.methods", self.methods.clone());
        put("dataset.p", self.p.map(|v| v.to_string()));
        put("dataset.l", self.l.map(|v| v.to_string()));
        put("metrics.alpha1", self.alpha1.map(|v| v.to_string()));
        put("metrics.alpha2", self.alpha2.map(|v| v.to_string()));
        put("metrics.tau", self.tau.map(|v| v.to_string()));
        put("bench.seed", self.seed.map(|v| v.to_string()));
        put("bench.out", self.out.as_ref().map(|p| p.to_string_lossy().into_owned()));
        Ok(c)
    }

    fn bench(&self) -> Result<BenchConfig, Error> {
        BenchConfig::from_config(&self.config()?)
    }
}

fn require_out(config: &BenchConfig) -> Result<&Path, Error> {
    config
        .out
        .as_deref()
        .ok_or_else(|| Error::Config("--out is required".into()))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.3}"))
}

fn classify(common: &Common) -> Result<(), Error> {
    let config = common.bench()?;
    let dataset = config.load_dataset()?;
    let st = dataset.stats();
    let mut s = String::new();
    let _ = writeln!(s, "dataset      {}", dataset.name);
    let _ = writeln!(s, "series       {}", st.m);
    for kind in irregcast::SbcKind::ALL {
        let _ = writeln!(s, "{:<12} {}", kind.name(), st.counts.get(kind));
    }
    let _ = writeln!(s, "mean ADI     {}", opt(st.mean_adi));
    let _ = writeln!(s, "mean CV²     {}", opt(st.mean_cv2));
    let _ = writeln!(s, "pooled CV²   {}", opt(st.pooled_cv2));
    print!("{s}");
    if let Some(out) = &config.out {
        let mut csv = String::from("id,class,adi,cv2\n");
        for series in &dataset.series {
            let c = classify_sbc(series);
            let cell = |v: Option<f64>| v.map_or_else(|| "NA".into(), |v| v.to_string());
            let _ = writeln!(csv, "{},{},{},{}", series.id(), c.kind.name(), cell(c.adi), cell(c.cv2));
        }
        std::fs::write(out, csv).map_err(|e| Error::Io {
            path: out.clone(),
            source: e,
        })?;
    }
    Ok(())
}

fn gen_synthetic(common: &Common) -> Result<(), Error> {
    let config = common.bench()?;
    if !matches!(config.source, irregcast::bench::DataSource::Generated(_)) {
        return Err(Error::Config("gen-synthetic needs --gen or gen.* keys".into()));
    }
    let out = require_out(&config)?;
    let dataset = config.load_dataset()?;
    save_csv(&dataset, out)?;
    let st = dataset.stats();
    println!(
        "wrote {} series of length {} to {}\nmean ADI {}, mean CV² {}, pooled CV² {}, irregular {}",
        st.m,
        st.t,
        out.display(),
        opt(st.mean_adi),
        opt(st.mean_cv2),
        opt(st.pooled_cv2),
        st.counts.irregular()
    );
    Ok(())
}

fn forecast(common: &Common) -> Result<(), Error> {
    let config = common.bench()?;
    let out = require_out(&config)?.to_path_buf();
    let report = run_bench(&config)?;
    std::fs::create_dir_all(&out).map_err(|e| Error::Io {
        path: out.clone(),
        source: e,
    })?;
    for path in write_forecasts(&report, &out)? {
        println!("wrote {}", path.display());
    }
    let mut failed = false;
    for row in &report.rows {
        match &row.outcome {
            Ok(r) => {
                if let Some(params) = &r.output.params {
                    let path = out.join(format!("{}.ckpt", row.name));
                    save_params(params, &path)?;
                    println!("wrote {}", path.display());
                }
            }
            Err(why) => {
                eprintln!("{} failed: {why}", row.name);
                failed = true;
            }
        }
    }
    if failed {
        return Err(Error::Fit("one or more methods failed".into()));
    }
    Ok(())
}

fn evaluate(common: &Common, files: &[PathBuf]) -> Result<(), Error> {
    let params = metric_params(&common.config()?)?;
    let mut csv = format!("file,{}\n", MetricReport::csv_header());
    for file in files {
        let (_, fs) = load_forecasts(file)?;
        let report = evaluate_all(&fs, &params);
        println!("{}\n{}", file.display(), report.table());
        let _ = writeln!(csv, "{},{}", file.display(), report.csv_row());
    }
    if let Some(out) = common.out.as_ref() {
        std::fs::write(out, csv).map_err(|e| Error::Io {
            path: out.clone(),
            source: e,
        })?;
    }
    Ok(())
}

fn bench(common: &Common) -> Result<(), Error> {
    let config = common.bench()?;
    let out = require_out(&config)?.to_path_buf();
    let report = run_bench(&config)?;
    let counts = report.input.counts;
    for path in emit_report(&report, &out)? {
        println!("wrote {}", path.display());
    }
    println!(
        "{} of {} series irregular, {} evaluated",
        counts.irregular(),
        counts.total(),
        report.ids.len()
    );
    for row in &report.rows {
        if let Err(why) = &row.outcome {
            eprintln!("{} failed: {why}", row.name);
        }
    }
    Ok(())
}

fn pathology(common: &Common) -> Result<(), Error> {
    let config = common.config()?;
    let report = run_pathology_suite(&metric_params(&config)?);
    let md = report.to_markdown();
    print!("{md}");
    if let Some(out) = &common.out {
        std::fs::write(out, &md).map_err(|e| Error::Io {
            path: out.clone(),
            source: e,
        })?;
    }
    if !report.passed() {
        return Err(Error::UndefinedMetric("pathology pattern not reproduced".into()));
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Classify(c) => classify(c),
        Command::GenSynthetic(c) => gen_synthetic(c),
        Command::Forecast(c) => forecast(c),
        Command::Evaluate { common, forecasts } => evaluate(common, forecasts),
        Command::Bench(c) => bench(c),
        Command::Pathology(c) => pathology(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
