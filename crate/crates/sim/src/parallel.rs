//! Thread-parallel sweeps.
//!
//! Grid points run as independent rayon tasks and are collected back in grid
//! order. Each point samples from its own stream, so the table is identical
//! to [`eraser_core::sweep::sweep`] for any thread count.

use eraser_core::sweep::{SweepSpec, SweepTable};
use rayon::prelude::*;

use crate::error::ConfigError;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "ERASER_SIM_THREADS";

/// Parse a thread cap; `None` leaves the choice to rayon.
pub fn parse_thread_cap(value: Option<&str>) -> Result<Option<usize>, ConfigError> {
    match value {
        None => Ok(None),
        Some(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(ConfigError::Range {
                path: THREADS_ENV.into(),
                message: format!("expected an integer >= 1, got `{raw}`"),
            }),
        },
    }
}

pub fn thread_cap_from_env() -> Result<Option<usize>, ConfigError> {
    parse_thread_cap(std::env::var(THREADS_ENV).ok().as_deref())
}

pub fn par_sweep(spec: &SweepSpec, threads: Option<usize>) -> eraser_core::Result<SweepTable> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .expect("thread pool");
    let rows = pool.install(|| {
        (0..spec.grid.len())
            .into_par_iter()
            .map(|i| spec.evaluate_point(i))
            .collect::<eraser_core::Result<Vec<_>>>()
    })?;
    Ok(SweepTable {
        parameter: spec.parameter,
        rows,
    })
}
