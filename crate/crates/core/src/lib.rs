//! G-majorization for finite reflection groups.
//!
//! `y ≺_G x` holds when `y` lies in the convex hull of the `G`-orbit of `x`.
//! This crate decides it two ways: through each family's closed-form cone
//! inequalities on canonical representatives, and through an exact rational
//! feasibility oracle over the enumerated orbit. Both routes return
//! certificates that can be checked independently.

pub mod cone;
pub mod error;
pub mod group;
pub mod hull;
pub mod linalg;
pub mod lp;
pub mod opf;
pub mod sample;
pub mod structure;
pub mod vector;
pub mod verdict;

pub use cone::{
    complete_a_matrix, cone_contains, cone_interior_contains, cone_order_check, dual_cone_membership,
    essential_decomposition, essential_order, fundamental_roots, representative, ConeSystem, Representative,
};
pub use error::{Error, Result};
pub use group::{
    enumerate_group, m_value, m_value_by_enumeration, orbit, Family, GroupElement, GroupSpec, SignedPermutation,
    DEFAULT_GROUP_GUARD,
};
pub use hull::hull_membership;
pub use opf::{
    family_region_check, gradient_root_condition, inclusion_gap_demo, invariance_check, invariant_polynomial,
    lookup_function, monotonicity_oracle, product_polynomial, InvariantFamilyParams, ScalarFunction, SuiteOptions,
};
pub use structure::{
    dual_sum_check, union_convexity_gap, verify_refinement, verify_region_intersection, ExtensionTriple,
    QuotientVariant,
};
pub use vector::{Rational, Vector};
pub use verdict::{Certificate, OrderVerdict};
