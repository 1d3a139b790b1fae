pub mod automata;
pub mod error;
pub mod exactnum;
pub mod linalg;
pub mod powersum;
pub mod surface;
pub mod transcendence;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
