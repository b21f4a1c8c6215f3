pub mod audit;
pub mod beckmod;
pub mod cohomology;
pub mod comonad;
pub mod error;
pub mod fincat;
pub mod fixtures;
pub mod io;
pub mod jobs;
pub mod multifold;
pub mod trackcat;

pub use error::{Error, Result};
