//! `marc`: rate regions, class checks, frontiers and simulation for
//! discrete multiple-access relay channels.
//!
//! Exit status: 0 when every requested check passes, 1 on a validation
//! failure (bad file contents, a failed check), 2 on a usage error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{info, warn};

use marc_core::channel::{validate_class, validate_marco_any, ClassTag, DiscreteMarc};
use marc_core::error::MarcError;
use marc_core::io::{self, fmt_num, Distribution};
use marc_core::region::RateRegion;
use marc_core::models;
use marc_core::search::{self, SearchConfig};
use marc_core::sim;

/// Max bound gap accepted by `check`.
const CHECK_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "marc", version, about = "Decode-and-forward rate regions for multiple-access relay channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Alphabet sizes, normalization residual and class membership.
    Info {
        #[arg(long)]
        channel: PathBuf,
    },
    /// Constraints and vertices of one region at one input law.
    Region {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        dist: PathBuf,
        /// general, mac, kw, madrc, mardrc, masdrc or marco.
        #[arg(long)]
        model: String,
        /// With `--model general`: substitute this class's auxiliaries into
        /// a relay-conditioned law.
        #[arg(long)]
        class: Option<String>,
        /// Region JSON path; vertices go next to it with a `.vertices.csv` suffix.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compares the general region under a class substitution with the
    /// class region on random input laws.
    Check {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Optional CSV with one row per input law.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frontier of the general region over a fan of weight directions.
    Frontier {
        #[arg(long)]
        channel: PathBuf,
        /// Random initial candidates per restart.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = search::DEFAULT_DIRECTIONS)]
        directions: usize,
        /// Also maximize the common rate alone.
        #[arg(long)]
        with_common: bool,
        #[arg(long)]
        out: PathBuf,
        /// Directory for the achieving input laws, one JSON file per point.
        #[arg(long)]
        dists: Option<PathBuf>,
    },
    /// Whether region A contains region B.
    Include { region_a: PathBuf, region_b: PathBuf },
    /// Monte Carlo run of the coding scheme.
    Simulate {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Overrides the typicality slack in the config.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A failed command with its exit status.
struct Failure {
    status: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            status: 2,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>) -> Self {
        Self {
            status: 1,
            message: message.into(),
        }
    }
}

impl From<MarcError> for Failure {
    fn from(e: MarcError) -> Self {
        let status = match e {
            MarcError::Domain(_) | MarcError::Config(_) => 2,
            _ => 1,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

fn load_channel(path: &Path) -> Result<DiscreteMarc, Failure> {
    io::channel_from_json(&read(path)?).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

fn load_dist(path: &Path) -> Result<Distribution, Failure> {
    io::distribution_from_json(&read(path)?).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
fn write_atomic(path: &Path, contents: &str) -> Outcome {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::validation(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn class_tag(name: &str, marc: &DiscreteMarc) -> Result<ClassTag, Failure> {
    models::class_tag(name, marc).map_err(|e| Failure::usage(e.to_string()))
}

fn cmd_info(channel: &Path) -> Outcome {
    let marc = load_channel(channel)?;
    let s = marc.sizes();
    println!("sizes: x1={} x2={} xr={} yr={} yd={}", s.x1, s.x2, s.xr, s.yr, s.yd);
    println!("normalization_residual: {}", fmt_num(marc.normalization_residual()));
    for tag in [ClassTag::Madrc, ClassTag::Mardrc, ClassTag::Masdrc] {
        let c = validate_class(&marc, &tag);
        println!("{tag}: {} (residual {})", verdict(c.accepted), fmt_num(c.residual));
    }
    let (split, c) = validate_marco_any(&marc);
    let split = split.map_or("none".to_string(), |s| {
        format!("xr1={} xd1={} xr2={} xd2={}", s.xr1, s.xd1, s.xr2, s.xd2)
    });
    println!("marco: {} (residual {}, split {split})", verdict(c.accepted), fmt_num(c.residual));
    Ok(())
}

fn verdict(accepted: bool) -> &'static str {
    if accepted {
        "accepted"
    } else {
        "rejected"
    }
}

fn mismatch(model: &str, dist: &Distribution) -> Failure {
    Failure::usage(format!("model {model} cannot use a {} distribution", dist.kind()))
}

fn vertices_path(out: &Path) -> PathBuf {
    out.with_extension("vertices.csv")
}

fn cmd_region(channel: &Path, dist: &Path, model: &str, class: Option<&str>, out: Option<&Path>) -> Outcome {
    let marc = load_channel(channel)?;
    let dist = load_dist(dist)?;
    let region = models::evaluate(&marc, &dist, model, class)?;
    for t in region.terms() {
        info!("{} = {}", t.label, fmt_num(t.value));
        eprintln!("term {} = {}", t.label, fmt_num(t.value));
    }
    let json = io::region_to_json(&region, Some(model));
    let csv = io::vertices_csv(&region.vertices());
    match out {
        Some(p) => {
            write_atomic(p, &json)?;
            write_atomic(&vertices_path(p), &csv)?;
        }
        None => {
            print!("{json}");
            print!("{csv}");
        }
    }
    for c in region.constraints() {
        println!("{} <= {}", c.subset, fmt_num(c.bound));
    }
    Ok(())
}

fn cmd_check(channel: &Path, class: &str, trials: usize, seed: u64, out: Option<&Path>) -> Outcome {
    let marc = load_channel(channel)?;
    let tag = class_tag(class, &marc)?;
    if tag == ClassTag::General {
        return Err(Failure::usage("check needs a special class"));
    }
    if trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    let membership = validate_class(&marc, &tag);
    if !membership.accepted {
        warn!("channel is not {tag} (residual {})", fmt_num(membership.residual));
        eprintln!("warning: channel is not {tag} (residual {})", fmt_num(membership.residual));
    }
    let gaps = models::specialization_gaps(&marc, &tag, trials, seed)?;
    let mut csv = String::from("trial,max_diff\n");
    for (t, g) in gaps.iter().enumerate() {
        let _ = writeln!(csv, "{t},{}", fmt_num(*g));
    }
    let worst = gaps.iter().copied().fold(0.0f64, f64::max);
    if let Some(p) = out {
        write_atomic(p, &csv)?;
    }
    println!("class: {tag}");
    println!("trials: {trials}");
    println!("max_diff: {}", fmt_num(worst));
    let passed = worst <= CHECK_TOL;
    if tag == ClassTag::Masdrc {
        println!("result: {} (informational)", if passed { "match" } else { "mismatch" });
        return Ok(());
    }
    println!("result: {}", if passed { "match" } else { "mismatch" });
    if passed {
        Ok(())
    } else {
        Err(Failure::validation(format!(
            "general region differs from the {tag} region by {} > {CHECK_TOL:e}",
            fmt_num(worst)
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_frontier(
    channel: &Path,
    samples: usize,
    seed: u64,
    restarts: usize,
    directions: usize,
    with_common: bool,
    out: &Path,
    dists: Option<&Path>,
) -> Outcome {
    let marc = load_channel(channel)?;
    let cfg = SearchConfig {
        samples,
        restarts,
        seed,
        ..SearchConfig::default()
    };
    cfg.validate()?;
    let points = search::frontier_along(&marc, &cfg, &search::fan(directions, with_common))?;
    write_atomic(out, &io::frontier_csv(&points))?;
    if let Some(dir) = dists {
        fs::create_dir_all(dir).map_err(|e| Failure::validation(format!("{}: {e}", dir.display())))?;
        for (i, p) in points.iter().enumerate() {
            write_atomic(&dir.join(format!("point_{i:03}.json")), &io::factorized_to_json(&p.input))?;
        }
    }
    println!("points: {}", points.len());
    for p in &points {
        println!(
            "{} {} {} -> {}",
            fmt_num(p.point.r0),
            fmt_num(p.point.r1),
            fmt_num(p.point.r2),
            fmt_num(p.value)
        );
    }
    Ok(())
}

fn cmd_include(a: &Path, b: &Path) -> Outcome {
    let load = |p: &Path| -> Result<RateRegion, Failure> {
        io::region_from_json(&read(p)?).map_err(|e| Failure::validation(format!("{}: {e}", p.display())))
    };
    let (ra, rb) = (load(a)?, load(b)?);
    match ra.inclusion_witness(&rb) {
        None => {
            println!("included: yes");
            Ok(())
        }
        Some(w) => {
            println!("included: no");
            println!("witness: {} {} {}", fmt_num(w.r0), fmt_num(w.r1), fmt_num(w.r2));
            Err(Failure::validation("second region is not contained in the first"))
        }
    }
}

fn cmd_simulate(channel: &Path, dist: &Path, config: &Path, eps: Option<f64>, out: &Path) -> Outcome {
    let marc = load_channel(channel)?;
    let dist = load_dist(dist)?;
    let input = dist.factorized().ok_or_else(|| mismatch("simulate", &dist))?;
    let (mut cfg, rates) =
        io::sim_config_from_json(&read(config)?).map_err(|e| Failure::usage(format!("{}: {e}", config.display())))?;
    if let Some(e) = eps {
        cfg.eps = e;
    }
    let report = sim::run_trials(&marc, &input, &rates, &cfg)?;
    write_atomic(out, &io::report_csv(&report))?;
    println!("trials: {}", report.trials.len());
    println!("sink_block_error_rate: {}", fmt_num(report.sink_block_error_rate()));
    println!("relay_block_error_rate: {}", fmt_num(report.relay_block_error_rate()));
    println!("trial_error_rate: {}", fmt_num(report.trial_error_rate()));
    let parts = report.part_error_rates();
    for (name, r) in ["w0", "w1'", "w1''", "w2'", "w2''"].iter().zip(parts) {
        println!("error_rate {name}: {}", fmt_num(r));
    }
    println!("ambiguities: {}", report.ambiguities());
    println!("failures: {}", report.failures());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Info { channel } => cmd_info(channel),
        Command::Region {
            channel,
            dist,
            model,
            class,
            out,
        } => cmd_region(channel, dist, model, class.as_deref(), out.as_deref()),
        Command::Check {
            channel,
            class,
            trials,
            seed,
            out,
        } => cmd_check(channel, class, *trials, *seed, out.as_deref()),
        Command::Frontier {
            channel,
            samples,
            seed,
            restarts,
            directions,
            with_common,
            out,
            dists,
        } => cmd_frontier(channel, *samples, *seed, *restarts, *directions, *with_common, out, dists.as_deref()),
        Command::Include { region_a, region_b } => cmd_include(region_a, region_b),
        Command::Simulate {
            channel,
            dist,
            config,
            eps,
            out,
        } => cmd_simulate(channel, dist, config, *eps, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}
