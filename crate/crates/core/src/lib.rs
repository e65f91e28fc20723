//! Quantum sl3 link polynomial via A2-web state sums.

pub mod analysis;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod homfly;
pub mod laurent;
pub mod report;
pub mod seifert;
pub mod statesum;
pub mod table;
pub mod web;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
