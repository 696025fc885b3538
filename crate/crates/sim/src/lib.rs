//! Front end for the quantum eraser simulator: JSON run configurations,
//! CSV/JSON result tables, thread-parallel sweeps and the oracle self-check.

pub mod config;
pub mod error;
pub mod oracle;
pub mod output;
pub mod parallel;
pub mod run;

pub use config::{parse_config, Mode, RunConfig};
pub use error::{ConfigError, SimError};
pub use output::{emit, Format, OutputRecord};
pub use run::execute;
