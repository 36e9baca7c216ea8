use std::path::PathBuf;

use crate::args::Cli;

pub const CACHE_ENV: &str = "CMCYCLES_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub precision: u32,
    /// None when caching is disabled.
    pub cache_dir: Option<PathBuf>,
    pub jobs: usize,
    pub output: Output,
    pub conjugate: bool,
}

impl Config {
    pub fn from_cli(cli: &Cli) -> Self {
        let cache_dir = if cli.no_cache {
            None
        } else {
            cli.cache_dir
                .clone()
                .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
                .or_else(default_cache_dir)
        };
        let jobs = cli
            .jobs
            .map(|j| j as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        Config {
            precision: cli.precision,
            cache_dir,
            jobs,
            output: if cli.json { Output::Json } else { Output::Text },
            conjugate: cli.conjugate,
        }
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(x).join("cmcycles"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("cmcycles"))
}
