//! Mixed characteristic: the base ring containing `zeta_p` and the annulus
//! ring over it.

pub mod annulus;
pub mod tower;
pub mod witt;

pub use annulus::AnnulusElement;
pub use tower::{LocalFieldTower, TowerElement, TowerEmbedding, DEFAULT_PRECISION};
