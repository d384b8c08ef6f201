pub mod cli;
pub mod config;
pub mod construct;
pub mod error;
pub mod gf;
pub mod grp;
pub mod matfq;
pub mod modstruct;
pub mod structure;
pub mod verify;

pub use config::Config;
pub use error::{Error, Result};
