pub mod dissociation;
pub mod energy;
pub mod expsum;
pub mod rational;
pub mod realcore;

pub use rug::{Integer, Rational};
