pub mod approx;
pub mod powers;
pub mod surf;
pub mod words;
