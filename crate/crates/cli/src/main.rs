//! `gkernel`: compute kernel matrices, run timing sweeps, print dataset
//! statistics and write synthetic datasets.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 resource error.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use graphkernels::experiment::{run_sweep, SweepAxis, SweepConfig, SweepRow};
use graphkernels::generate::{generate_synthetic_alphabet, generate_synthetic_attributed, generate_synthetic_labeled};
use graphkernels::{
    compute, load_tu_dataset, write_tu_dataset, Dataset, ErrorClass, ExportFormat, GramMatrix, KernelKind, KernelSpec,
    Regime,
};

use config::Settings;

#[derive(Parser)]
#[command(
    name = "gkernel",
    version,
    about = "Graph kernels by implicit and explicit computation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a kernel matrix with one or both schemes
    Compute {
        #[command(flatten)]
        settings: Settings,
        /// TOML file with the same keys as the flags; flags take precedence
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Normalize to unit diagonal before writing
        #[arg(long)]
        normalize: bool,
        /// Evaluate pairs / feature maps on all cores
        #[arg(long)]
        parallel: bool,
    },
    /// Time both schemes over a parameter grid and write CSV
    Sweep {
        #[command(flatten)]
        settings: Settings,
        #[arg(long)]
        config: Option<PathBuf>,
        /// CSV output file; standard output if absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print dataset statistics
    Stats {
        #[command(flatten)]
        settings: Settings,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write a synthetic dataset in TU format
    Generate {
        #[command(flatten)]
        settings: Settings,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svm,
}

enum Failure {
    Usage(String),
    Lib(graphkernels::Error),
}

impl From<graphkernels::Error> for Failure {
    fn from(e: graphkernels::Error) -> Self {
        Failure::Lib(e)
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Failure::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute {
            settings,
            config,
            out,
            format,
            normalize,
            parallel,
        } => merged(settings, config).and_then(|s| cmd_compute(&s, &out, format, normalize, parallel)),
        Command::Sweep { settings, config, out } => {
            merged(settings, config).and_then(|s| cmd_sweep(&s, out.as_deref()))
        }
        Command::Stats { settings, config } => merged(settings, config).and_then(|s| cmd_stats(&s)),
        Command::Generate { settings, config, out } => merged(settings, config).and_then(|s| cmd_generate(&s, &out)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Usage => 2,
                ErrorClass::Data => 3,
                ErrorClass::Resource => 4,
            })
        }
    }
}

fn merged(flags: Settings, config: Option<PathBuf>) -> Result<Settings> {
    match config {
        Some(path) => Ok(flags.over(Settings::load(&path).map_err(Failure::Usage)?)),
        None => Ok(flags),
    }
}

fn dataset(s: &Settings) -> Result<Dataset> {
    match (&s.dataset, &s.generate) {
        (Some(_), Some(_)) => usage("give either --dataset or --generate, not both"),
        (Some(dir), None) => load(dir, s.name.as_deref()),
        (None, Some(kind)) => generated(s, kind),
        (None, None) => usage("no input: give --dataset <dir> or --generate <labeled|alphabet|attributed>"),
    }
}

fn load(dir: &Path, name: Option<&str>) -> Result<Dataset> {
    if let Some(name) = name {
        return Ok(load_tu_dataset(dir, name)?);
    }
    let entries = fs::read_dir(dir).map_err(|source| graphkernels::Error::Load {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter_map(|f| f.strip_suffix("_A.txt").map(str::to_string))
        .collect();
    names.sort();
    match names.as_slice() {
        [name] => Ok(load_tu_dataset(dir, name)?),
        [] if dir_is_empty(dir) => {
            let name = dir
                .file_name()
                .map_or("dataset".into(), |n| n.to_string_lossy().into_owned());
            Ok(Dataset::new(name, Vec::new(), Vec::new())?)
        }
        [] => usage(format!("no *_A.txt file in {}; give --name", dir.display())),
        _ => usage(format!(
            "several datasets in {} ({}); give --name",
            dir.display(),
            names.join(", ")
        )),
    }
}

fn dir_is_empty(dir: &Path) -> bool {
    fs::read_dir(dir).is_ok_and(|mut d| d.next().is_none())
}

fn generated(s: &Settings, kind: &str) -> Result<Dataset> {
    let seed = s.seed.unwrap_or(0);
    let count = s.count.unwrap_or(100);
    Ok(match kind {
        "labeled" => generate_synthetic_labeled(
            count,
            s.mean.unwrap_or(20.0),
            s.edge_prob.unwrap_or(0.1),
            s.pv.unwrap_or(0.5),
            seed,
        )?,
        "alphabet" => generate_synthetic_alphabet(
            count,
            s.mean.unwrap_or(60.0),
            s.edge_prob.unwrap_or(0.5),
            s.alphabet.unwrap_or(10),
            seed,
        )?,
        "attributed" => generate_synthetic_attributed(
            count,
            s.mean.unwrap_or(20.0),
            s.edge_prob.unwrap_or(0.1),
            s.dim.unwrap_or(2),
            seed,
        )?,
        other => {
            return usage(format!(
                "unknown generator {other:?}; valid: labeled, alphabet, attributed"
            ))
        }
    })
}

fn kernel_spec(s: &Settings) -> Result<KernelSpec> {
    let Some(name) = &s.kernel else {
        return usage(format!("no kernel given; valid kernels: {}", KernelKind::names()));
    };
    let mut spec = KernelSpec::new(name.parse()?);
    if let Some(l) = s.length {
        spec.length = l;
    }
    spec.lambda = s.lambda.clone();
    if let Some(h) = s.wl_iters {
        spec.wl_iterations = h;
    }
    spec.delta = s.delta;
    spec.sigma = s.sigma;
    if let Some(p) = s.binning {
        spec.binning = p;
    }
    if let Some(k) = s.max_size {
        spec.max_size = k;
    }
    spec.connected_only = !s.all_subgraphs;
    if let Some(seed) = s.seed {
        spec.seed = seed;
    }
    spec.budget = s.budget;
    Ok(spec)
}

fn cmd_compute(s: &Settings, out: &Path, format: Format, normalize: bool, parallel: bool) -> Result<()> {
    let spec = kernel_spec(s)?;
    let regime: Regime = s.regime.as_deref().unwrap_or("implicit").parse()?;
    let ds = dataset(s)?;
    fs::create_dir_all(out).map_err(|source| graphkernels::Error::Write {
        path: out.to_path_buf(),
        source,
    })?;
    let result = compute(&ds, &spec, regime, parallel)?;
    let (export, ext) = match format {
        Format::Csv => (ExportFormat::Csv, "csv"),
        Format::Svm => (ExportFormat::SvmPrecomputed, "svm"),
    };
    let write = |k: &GramMatrix, scheme: &str| -> Result<()> {
        let k = if normalize { k.normalize() } else { k.clone() };
        let path = out.join(format!("gram-{scheme}.{ext}"));
        k.write(export, &path)?;
        k.write_timing(&out.join(format!("timing-{scheme}.json")))?;
        let t = k.timing();
        println!(
            "{scheme}: {} graphs, {:.6}s (map {:.6}s, pairs {:.6}s) -> {}",
            k.order(),
            t.total_seconds,
            t.map_seconds,
            t.pair_seconds,
            path.display()
        );
        Ok(())
    };
    if let Some(k) = &result.implicit {
        write(k, "implicit")?;
    }
    if let Some(k) = &result.explicit {
        write(k, "explicit")?;
    }
    if let Some(d) = result.discrepancy {
        let path = out.join("discrepancy.txt");
        fs::write(&path, format!("{d}\n")).map_err(|source| graphkernels::Error::Write { path, source })?;
        println!("max absolute discrepancy: {d}");
    }
    Ok(())
}

fn cmd_sweep(s: &Settings, out: Option<&Path>) -> Result<()> {
    let axis: SweepAxis = s.axis.as_deref().unwrap_or("pv").parse()?;
    let mut cfg = if s.full_scale {
        SweepConfig::full_scale(axis)
    } else {
        SweepConfig::desk(axis)
    };
    if let Some(v) = &s.values {
        cfg.values = v.clone();
    }
    if let Some(v) = &s.sizes {
        cfg.sizes = v.clone();
    }
    if let Some(r) = s.reps {
        cfg.reps = r;
    }
    if let Some(seed) = s.seed {
        cfg.seed = seed;
    }
    if let Some(m) = s.mean {
        cfg.mean_vertices = m;
    }
    if let Some(p) = s.edge_prob {
        cfg.edge_prob = p;
    }
    if let Some(l) = s.length {
        cfg.length = l;
    }
    if let Some(pv) = s.pv {
        cfg.label_diversity = pv;
    }
    if s.dataset.is_some() || s.generate.is_some() {
        if axis != SweepAxis::WalkLength {
            return usage("an input dataset is only used by the walk-length sweep");
        }
        cfg.dataset = Some(dataset(s)?);
    }

    let mut csv = String::new();
    csv.push_str(SweepRow::CSV_HEADER);
    csv.push('\n');
    if out.is_none() {
        print!("{csv}");
    }
    let rows = run_sweep(&cfg, |row| {
        eprintln!(
            "{}={} size={}: implicit {:.4}s explicit {:.4}s",
            row.axis.name(),
            row.value,
            row.size,
            row.implicit_seconds,
            row.explicit_seconds
        );
        if out.is_none() {
            println!("{}", row.to_csv());
            let _ = std::io::stdout().flush();
        }
    })?;
    if let Some(path) = out {
        for row in &rows {
            csv.push_str(&row.to_csv());
            csv.push('\n');
        }
        fs::write(path, csv).map_err(|source| graphkernels::Error::Write {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(())
}

fn cmd_stats(s: &Settings) -> Result<()> {
    let ds = dataset(s)?;
    let st = ds.stats();
    if st.graphs == 0 {
        println!("{}: 0 graphs", ds.name);
        return Ok(());
    }
    let flag = |b: bool| if b { "+" } else { "-" };
    let attrs = st.attribute_dim.map_or("-".into(), |d| format!("+ ({d})"));
    println!(
        "{:<24} {:>7} {:>7} {:>8} {:>8} {:>8} {:>8} {:>10}",
        "dataset", "graphs", "classes", "avg |V|", "avg |E|", "v-labels", "e-labels", "attributes"
    );
    println!(
        "{:<24} {:>7} {:>7} {:>8.1} {:>8.1} {:>8} {:>8} {:>10}",
        ds.name,
        st.graphs,
        st.classes,
        st.avg_vertices,
        st.avg_edges,
        flag(st.vertex_labels),
        flag(st.edge_labels),
        attrs
    );
    Ok(())
}

fn cmd_generate(s: &Settings, out: &Path) -> Result<()> {
    let Some(kind) = &s.generate else {
        return usage("give --generate <labeled|alphabet|attributed>");
    };
    let ds = generated(s, kind)?;
    let name = s.name.as_deref().unwrap_or("SYNTHETIC");
    fs::create_dir_all(out).map_err(|source| graphkernels::Error::Write {
        path: out.to_path_buf(),
        source,
    })?;
    write_tu_dataset(&ds, out, name)?;
    println!("wrote {} graphs to {}/{name}_*.txt", ds.len(), out.display());
    Ok(())
}
