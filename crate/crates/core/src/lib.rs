pub mod error;
pub mod ring;

pub use error::{Error, Result};
pub mod root_datum;
pub mod metaplectic;
pub mod cg_action;
pub mod whittaker;
pub mod numeric;
pub mod checks;
pub mod cli;
