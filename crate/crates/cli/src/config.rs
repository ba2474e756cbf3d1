use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "selfsim-ot",
    version,
    about = "Moments and Wasserstein distances of self-similar measures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First and second moments of the self-similar coupling at one r, checked against the oracle.
    Moments(Params),
    /// Exact W1 with the duality lower bound and the monotone-transport oracle.
    W1(Params),
    /// Lower and upper bounds on W2 with the oracle value between them.
    W2Bounds(Params),
    /// phi1 and phi2 over a uniform grid of the closed coupling region.
    SweepR(Params),
    /// W1 and W2 bounds as functions of c for three translation regimes.
    SweepC(Params),
    /// Full cross-check suite on seeded random configurations.
    Verify(Params),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Moments(_) => "moments",
            Command::W1(_) => "w1",
            Command::W2Bounds(_) => "w2-bounds",
            Command::SweepR(_) => "sweep-r",
            Command::SweepC(_) => "sweep-c",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Shared flags. The JSON config file uses the same field names; flags win.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Contraction ratio, 0 < c <= 1/2.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Translation of the first map.
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    /// Translation of the second map.
    #[arg(long, allow_hyphen_values = true)]
    pub t2: Option<f64>,
    /// Weight of the first map in the first measure.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    /// Weight of the first map in the second measure.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    /// Coupling parameter in [max(0, p+q-1), min(p, q)].
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Discretization depth.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Number of grid points for sweeps.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Smallest c of sweep-c.
    #[arg(long, allow_hyphen_values = true)]
    pub c_min: Option<f64>,
    /// Largest c of sweep-c.
    #[arg(long, allow_hyphen_values = true)]
    pub c_max: Option<f64>,
    /// Number of random configurations for verify.
    #[arg(long)]
    pub configs: Option<usize>,
    /// Seed of the random configurations for verify.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output format (csv by default, json for verify).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the above fields.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Params {
    /// Fills unset flags from the `--config` file, if any.
    pub fn resolve(self) -> anyhow::Result<Params> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load(&path)?;
        Ok(Params {
            c: self.c.or(file.c),
            t1: self.t1.or(file.t1),
            t2: self.t2.or(file.t2),
            p: self.p.or(file.p),
            q: self.q.or(file.q),
            r: self.r.or(file.r),
            depth: self.depth.or(file.depth),
            grid: self.grid.or(file.grid),
            c_min: self.c_min.or(file.c_min),
            c_max: self.c_max.or(file.c_max),
            configs: self.configs.or(file.configs),
            seed: self.seed.or(file.seed),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            config: Some(path),
        })
    }

    /// Rejects flags that the command ignores.
    pub fn reject(&self, command: &str, unused: &[(&str, bool)]) -> anyhow::Result<()> {
        for (name, set) in unused {
            if *set {
                bail!("parameter `{name}` is not used by {command}");
            }
        }
        Ok(())
    }
}

fn load(path: &Path) -> anyhow::Result<Params> {
    let text = std::fs::read_to_string(path).with_context(|| format!("config `{}`", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("config `{}`", path.display()))
}
