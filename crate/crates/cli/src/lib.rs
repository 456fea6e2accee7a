//! Library side of the `punk-hedonics` command: configuration, the
//! pipeline subcommands and the synthetic-fixture generator.

pub mod commands;
pub mod config;

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use punk_hedonics::synthetic::{synthetic_world, WorldConfig, WORLD_FILES};

pub use commands::{run, Command, Outcome, ALL_OUTPUTS};
pub use config::RunConfig;

/// Name of the config file written next to a synthetic world.
pub const SYNTH_CONFIG: &str = "punk-hedonics.conf";

/// Writes a seeded synthetic world into `dir` together with a config file
/// that points at it with absolute paths. Returns the config path.
pub fn write_synthetic_fixture(dir: &Path, seed: u64) -> Result<PathBuf> {
    let world = synthetic_world(&WorldConfig {
        seed,
        ..WorldConfig::default()
    });
    world
        .write_to(dir)
        .with_context(|| format!("writing synthetic data to {}", dir.display()))?;
    let dir = dir
        .canonicalize()
        .with_context(|| format!("resolving {}", dir.display()))?;
    let keys = ["tweets", "keyword_tweets", "sales", "gas", "fx"];
    let mut text = format!("# Synthetic fixture, seed {seed}\n");
    for (key, file) in keys.iter().zip(WORLD_FILES) {
        text.push_str(&format!("{key} = {}\n", dir.join(file).display()));
    }
    text.push_str(&format!("out_dir = {}\n", dir.join("out").display()));
    let path = dir.join(SYNTH_CONFIG);
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
