use serde::Serialize;

use crate::group::GroupElement;
use crate::vector::{serialize_rational, serialize_rationals, Rational, Vector};

/// Outcome of an order decision together with evidence that can be checked
/// without trusting the procedure that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub holds: bool,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `y = Σ λ_g (g·x)` with `λ ≥ 0`, `Σ λ = 1`.
    ConvexCoefficients { terms: Vec<ConvexTerm> },
    /// `v = Σ ε_j a_j` with `ε ≥ 0`, one coefficient per generator.
    ConicCoefficients {
        #[serde(serialize_with = "serialize_rationals")]
        coefficients: Vec<Rational>,
    },
    /// Every inequality of a closed-form system holds; `slacks[j] = rhs_j - lhs_j ≥ 0`.
    InequalitySlacks {
        #[serde(serialize_with = "serialize_rationals")]
        slacks: Vec<Rational>,
    },
    /// Inequality `index` (1-based) fails: `lhs > rhs`.
    ViolatedInequality {
        index: usize,
        label: String,
        #[serde(serialize_with = "serialize_rational")]
        lhs: Rational,
        #[serde(serialize_with = "serialize_rational")]
        rhs: Rational,
    },
    /// `z` with `m(z, y) > m(z, x)`.
    SeparatingFunctional {
        z: Vector,
        #[serde(serialize_with = "serialize_rational")]
        m_zy: Rational,
        #[serde(serialize_with = "serialize_rational")]
        m_zx: Rational,
    },
    /// `w` in the primal cone with `⟨w, v⟩ < 0`, refuting dual-cone membership.
    SeparatingVector { w: Vector },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexTerm {
    pub element: GroupElement,
    pub point: Vector,
    #[serde(serialize_with = "serialize_rational")]
    pub weight: Rational,
}

impl OrderVerdict {
    pub fn holds(certificate: Certificate) -> Self {
        OrderVerdict { holds: true, certificate }
    }

    pub fn fails(certificate: Certificate) -> Self {
        OrderVerdict { holds: false, certificate }
    }
}
