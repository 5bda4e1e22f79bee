pub mod approx_lik;
pub mod error;
pub mod estimators;
pub mod ghdist;
pub mod inference;
pub mod normal;
pub mod optim;
pub mod sample;
pub mod simharness;
pub mod special;

pub use error::{GhError, Result};
pub use ghdist::GhParams;
pub use sample::Sample;
