//! Rank-p torsors in characteristic p and their local invariants.

pub mod mixed;
pub mod torsor;

pub use mixed::{kummerian_check, Component, KummerianReport, MixedTorsor, NodeEnd, NodeReport, SemiStableConfig};
pub use torsor::{
    artin_schreier_reduce, cartier_class_check, conductor_residue, etale_germ_is_trivial, AttachedForm,
    CartierVerdict, CharPTorsor, GroupSchemeKind, TorsorDatum, TorsorLocalData,
};
