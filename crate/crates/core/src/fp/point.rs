use std::fmt;

use super::field::{FiniteField, Fq};

/// A point of the projective line, rational over the field it carries.
///
/// A finite point may live in an extension of the field of the functions
/// evaluated at it; those functions are then extended to the point's field.
#[derive(Clone, PartialEq, Eq)]
pub enum P1Point {
    Finite { field: FiniteField, value: Fq },
    Infinity,
}

impl P1Point {
    pub fn finite(field: &FiniteField, value: Fq) -> Self {
        P1Point::Finite { field: field.clone(), value }
    }

    pub fn origin(field: &FiniteField) -> Self {
        Self::finite(field, Fq::ZERO)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, P1Point::Infinity)
    }

    /// Image under c -> c^(p^j).
    pub fn frobenius(&self, j: i64) -> Self {
        match self {
            P1Point::Infinity => P1Point::Infinity,
            P1Point::Finite { field, value } => P1Point::finite(field, field.frobenius(*value, j)),
        }
    }
}

impl fmt::Debug for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Infinity => write!(f, "inf"),
            P1Point::Finite { field, value } => write!(f, "{}", field.format(*value)),
        }
    }
}
