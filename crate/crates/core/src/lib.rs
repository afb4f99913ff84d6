pub mod admissibility;
pub mod bt_tree;
pub mod cli;
pub mod error;
#[cfg(test)]
mod fixtures;
pub mod gallery;
pub mod matrix;
pub mod padic;
pub mod pgl2;
pub mod realization;
pub mod tree_of_groups;

pub use error::{Error, Result};
