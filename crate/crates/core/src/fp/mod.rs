//! Arithmetic in characteristic p: finite fields, polynomials, Laurent germs,
//! rational functions on P^1 and differential forms.

pub mod differential;
pub mod field;
pub mod point;
pub mod poly;
pub mod rational;
pub mod series;

pub use differential::{Differential, RationalDifferential};
pub use field::{FieldEmbedding, FiniteField, Fq};
pub use point::P1Point;
pub use rational::RationalFunction;
pub use series::{LaurentSeries, Window, EXACT};
