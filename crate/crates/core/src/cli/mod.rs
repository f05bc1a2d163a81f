//! Command-line front end: config loading, experiment runs, output files and
//! inspection commands.

mod config;
mod output;

pub use config::{build_config, load_config, parse_entries, parse_override, serialize_config, KEYS};
pub use output::{format_number, render_svg, write_results, write_summary, RESULTS_HEADER, SUMMARY_HEADER};

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use crate::clustering::hierarchical_cluster;
use crate::evaluation::{compare_with_oracle, run_experiment, ExperimentConfig, ExperimentOutput};
use crate::network::generate_network;

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const PLOT_FILE: &str = "sumrate_vs_v.svg";

#[derive(Debug, Parser)]
#[command(name = "vcell", version, about = "Virtual-cell clustering and uplink power allocation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment grid and write results.csv, summary.csv and the plot.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Output directory, created if missing.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Significant digits in CSV numbers; 0 prints full precision.
        #[arg(long, default_value_t = 6)]
        precision: usize,
    },
    /// Print the BS merge list for the instance generated from `seed`.
    Dendrogram {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare each scheme against a brute-force grid search on a tiny instance.
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        /// Power levels per user in the grid.
        #[arg(long, default_value_t = 50)]
        levels: usize,
        #[arg(long, default_value_t = 6)]
        precision: usize,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Config file (`key = value` lines); defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a config key, e.g. `--set trials=10`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl CommonArgs {
    pub fn load(&self) -> anyhow::Result<ExperimentConfig> {
        let text = match &self.config {
            Some(path) => fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
            None => String::new(),
        };
        let overrides = self.overrides.iter().map(|s| parse_override(s)).collect::<crate::Result<Vec<_>>>()?;
        Ok(load_config(&text, &overrides)?)
    }
}

/// Executes a parsed command line, printing to stdout.
pub fn execute(cli: Cli) -> anyhow::Result<()> {
    let common = match &cli.command {
        Command::Run { common, .. } | Command::Dendrogram { common } | Command::Oracle { common, .. } => common,
    };
    let cfg = common.load()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = common.jobs {
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().context("building worker pool")?;
    pool.install(|| match &cli.command {
        Command::Run { out, precision, .. } => {
            let res = cmd_run(&cfg, out, *precision)?;
            println!(
                "{} rows, {} cells solved, {} not converged, {} partitions evaluated -> {}",
                res.rows.len(),
                res.audit.cells_solved,
                res.audit.nonconverged_cells,
                res.audit.partitions_evaluated,
                out.display()
            );
            Ok(())
        }
        Command::Dendrogram { .. } => {
            print!("{}", cmd_dendrogram(&cfg)?);
            Ok(())
        }
        Command::Oracle { levels, precision, .. } => {
            print!("{}", cmd_oracle(&cfg, *levels, *precision)?);
            Ok(())
        }
    })
}

/// Runs the experiment and writes the three output files into `out_dir`.
pub fn cmd_run(cfg: &ExperimentConfig, out_dir: &Path, precision: usize) -> anyhow::Result<ExperimentOutput> {
    let res = run_experiment(cfg)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut buf = Vec::new();
    write_results(&mut buf, &res.rows, precision)?;
    fs::write(out_dir.join(RESULTS_FILE), &buf)?;
    buf.clear();
    write_summary(&mut buf, &res.summary, precision)?;
    fs::write(out_dir.join(SUMMARY_FILE), &buf)?;
    fs::write(out_dir.join(PLOT_FILE), render_svg(&res.summary, precision))?;
    Ok(res)
}

/// Merge list for the BSs of the instance drawn with the config's seed.
pub fn cmd_dendrogram(cfg: &ExperimentConfig) -> anyhow::Result<String> {
    let inst = generate_network(&cfg.params, cfg.n_bs, cfg.n_users, cfg.base_seed)?;
    Ok(hierarchical_cluster(&inst.bs_positions).to_string())
}

/// Scheme-vs-oracle report for the instance drawn with the config's seed.
pub fn cmd_oracle(cfg: &ExperimentConfig, levels: usize, precision: usize) -> anyhow::Result<String> {
    let inst = generate_network(&cfg.params, cfg.n_bs, cfg.n_users, cfg.base_seed)?;
    let cmp = compare_with_oracle(&inst, levels, &cfg.schemes, cfg.delta, &cfg.solver)?;
    let mut s = String::new();
    writeln!(
        s,
        "oracle rate_bps={} serving={:?} levels={levels}",
        format_number(cmp.oracle.rate, precision),
        cmp.oracle.serving
    )?;
    for (scheme, rate, ratio) in &cmp.schemes {
        writeln!(
            s,
            "{scheme} rate_bps={} ratio={}",
            format_number(*rate, precision),
            format_number(*ratio, precision)
        )?;
    }
    Ok(s)
}
