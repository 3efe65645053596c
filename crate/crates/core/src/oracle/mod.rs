//! Reference automata and independent checks: run sampling and exhaustive
//! lasso enumeration, plus random instance generators for differential
//! tests.

pub mod fixtures;
pub mod lassos;
pub mod random;
pub mod sampling;

pub use fixtures::{fixture, Fixture, FixtureName};
pub use lassos::enumerate_lassos;
pub use sampling::{monte_carlo, SampleReport};
