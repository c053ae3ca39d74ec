//! Exact arithmetic over small cyclotomic rings and exact gate synthesis for
//! single-qubit Clifford+T and single-qutrit Clifford+R / Clifford+D.

pub mod cli;
pub mod enumerate;
pub mod error;
pub mod gates;
pub mod json;
pub mod loc;
pub mod monomial;
pub mod ring;
pub mod synth;
pub mod taylor;

pub use error::{Error, Result};
