//! Exact q-series engine for Atkin–Swinnerton-Dyer style congruences among the
//! coefficients of modular forms expanded in a modular function.

pub mod character;
pub mod data;
pub mod eisenstein;
pub mod engine;
pub mod error;
pub mod eta;
pub mod linalg;
pub mod rational;
pub mod series;
pub mod spaces;

pub use error::{Error, Result};
pub use rational::Rational;
pub use series::QSeries;
