//! Graded polynomial identities and central polynomials of matrix algebras
//! with elementary gradings over cyclotomic fields.

pub mod checker;
pub mod error;
pub mod exec;
pub mod freealg;
pub mod grassmann;
pub mod groups;
pub mod linalg;
pub mod matalg;
pub mod parse;
pub mod regular;
pub mod scalars;
pub mod spec;

pub use error::{Error, Result};
