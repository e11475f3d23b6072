//! Fundamental cones, their duals, canonical representatives and the
//! closed-form inequality systems that decide each family's order.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Family, GroupElement, GroupSpec, SignedPermutation, DEFAULT_GROUP_GUARD};
use crate::hull::hull_membership_with_guard;
use crate::linalg::{complement_projector, Matrix};
use crate::lp::{nonnegative_combination, Feasibility};
use crate::vector::{Rational, Vector};
use crate::verdict::{Certificate, OrderVerdict};

/// Roots `a_j` (rows of `A`) of a family's fundamental cone `{x : Ax ≥ 0}`
/// together with the derived generator sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeSystem {
    pub spec: GroupSpec,
    pub roots: Vec<Vector>,
    /// Generators of the primal cone. For an invertible `A` these are the
    /// columns of `A^{-1}`; otherwise the dual basis inside the row space
    /// followed by `±` each inessential basis vector.
    pub generators: Vec<Vector>,
    /// Generators of the dual cone: the roots themselves.
    pub dual_generators: Vec<Vector>,
    pub inessential_basis: Vec<Vector>,
}

/// Fundamental root system of `spec`, in a fixed order.
pub fn fundamental_roots(spec: &GroupSpec) -> Result<ConeSystem> {
    let n = spec.dim();
    let e = |i: usize| Vector::unit(n, i);
    let chain = || (0..n.saturating_sub(1)).map(move |i| &e(i) - &e(i + 1));
    let roots: Vec<Vector> = match spec.family() {
        Family::SymmetricA => chain().collect(),
        Family::HyperoctahedralB => chain().chain([e(n - 1)]).collect(),
        Family::DemihyperoctahedralD => chain().chain([&e(n - 2) + &e(n - 1)]).collect(),
        Family::SignChangeZ2n => (0..n).map(e).collect(),
        Family::Z2CoordQuotient => vec![e(n - 1)],
        Family::Z2SumQuotient => vec![Vector::ones(n)],
        Family::Trivial => vec![],
    };
    let a = Matrix::from_rows(roots.clone(), n);
    let inessential_basis = a.null_space();
    let generators = match a.inverse() {
        Some(inv) => inv.columns(),
        None => {
            let mut gens = if roots.is_empty() {
                vec![]
            } else {
                let gram_inv = a.mul(&a.transpose()).inverse().expect("fundamental roots are independent");
                a.transpose().mul(&gram_inv).columns()
            };
            for b in &inessential_basis {
                gens.push(b.clone());
                gens.push(-b);
            }
            gens
        }
    };
    Ok(ConeSystem { spec: *spec, dual_generators: roots.clone(), roots, generators, inessential_basis })
}

impl ConeSystem {
    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// The matrix whose rows are the roots.
    pub fn a_matrix(&self) -> Matrix {
        Matrix::from_rows(self.roots.clone(), self.dim())
    }

    pub fn is_essential(&self) -> bool {
        self.inessential_basis.is_empty()
    }

    /// `⟨a_j, x⟩` for every root, in root order.
    pub fn root_values(&self, x: &Vector) -> Result<Vec<Rational>> {
        x.check_dim(self.dim())?;
        Ok(self.roots.iter().map(|a| a.dot(x)).collect())
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.root_values(x)?.iter().all(|v| !v.is_negative()))
    }

    /// Strict side of every wall. For an inessential cone this is the open
    /// region between the walls, not an interior in R^n.
    pub fn interior_contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.root_values(x)?.iter().all(|v| v.is_positive()))
    }
}

pub fn cone_contains(cs: &ConeSystem, x: &Vector) -> Result<bool> {
    cs.contains(x)
}

pub fn cone_interior_contains(cs: &ConeSystem, x: &Vector) -> Result<bool> {
    cs.interior_contains(x)
}

/// Canonical orbit point in the closed fundamental cone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Representative {
    pub tilde_x: Vector,
    pub witness: GroupElement,
}

pub fn representative(spec: &GroupSpec, x: &Vector) -> Result<Representative> {
    x.check_dim(spec.dim())?;
    let n = spec.dim();
    let sign_of = |v: &Rational| if v.is_negative() { -1 } else { 1 };
    let by_magnitude = || {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| x[j].abs().cmp(&x[i].abs()).then(i.cmp(&j)));
        idx
    };
    let witness = match spec.family() {
        Family::Trivial => GroupElement::identity(n),
        Family::SymmetricA => {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&i, &j| x[j].cmp(&x[i]).then(i.cmp(&j)));
            GroupElement::signed(idx, vec![1; n])?
        }
        Family::HyperoctahedralB => {
            let idx = by_magnitude();
            let signs = idx.iter().map(|&i| sign_of(&x[i])).collect();
            GroupElement::signed(idx, signs)?
        }
        Family::DemihyperoctahedralD => {
            let idx = by_magnitude();
            let mut signs: Vec<i8> = idx.iter().map(|&i| sign_of(&x[i])).collect();
            if signs.iter().filter(|&&s| s < 0).count() % 2 == 1 {
                signs[n - 1] = -signs[n - 1];
            }
            GroupElement::signed(idx, signs)?
        }
        Family::SignChangeZ2n => GroupElement::signed((0..n).collect(), x.coords().iter().map(sign_of).collect())?,
        Family::Z2CoordQuotient => {
            let mut signs = vec![1; n];
            signs[n - 1] = sign_of(&x[n - 1]);
            GroupElement::signed((0..n).collect(), signs)?
        }
        Family::Z2SumQuotient => {
            if x.sum().is_negative() {
                GroupElement::SumReflection { dim: n }
            } else {
                GroupElement::identity(n)
            }
        }
    };
    let tilde_x = witness.apply(x)?;
    Ok(Representative { tilde_x, witness })
}

/// Decides whether `v` lies in the dual cone, i.e. is a nonnegative
/// combination of the roots.
pub fn dual_cone_membership(cs: &ConeSystem, v: &Vector) -> Result<OrderVerdict> {
    v.check_dim(cs.dim())?;
    Ok(match nonnegative_combination(&cs.dual_generators, v) {
        Feasibility::Feasible(coefficients) => OrderVerdict::holds(Certificate::ConicCoefficients { coefficients }),
        // -u pairs nonnegatively with every root, so it lies in the primal cone.
        Feasibility::Infeasible(u) => OrderVerdict::fails(Certificate::SeparatingVector { w: -&u }),
    })
}

/// One linear functional of an order's inequality system, applied to
/// representatives: `⟨coeffs, ỹ⟩ ≤ ⟨coeffs, x̃⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderInequality {
    pub label: String,
    pub coeffs: Vector,
}

/// The closed-form inequality system of a family.
///
/// Essential square families (B, D, Z2^n) use the rows of `(A^T)^{-1}`,
/// each scaled to clear denominators; for these the system is exactly the
/// dual-cone test `x̃ - ỹ ∈ cone(roots)`. The quotients use the
/// single-root reading, and S_n uses plain partial sums including the total.
pub fn order_inequalities(spec: &GroupSpec) -> Result<Vec<OrderInequality>> {
    let n = spec.dim();
    let prefix =
        |j: usize| Vector::new((0..n).map(|i| if i < j { Rational::one() } else { Rational::zero() }).collect());
    let rows: Vec<OrderInequality> = match spec.family() {
        Family::SymmetricA => {
            (1..=n).map(|j| OrderInequality { label: format!("sum_{{i<=j}} .[i], j={j}"), coeffs: prefix(j) }).collect()
        }
        Family::HyperoctahedralB | Family::DemihyperoctahedralD | Family::SignChangeZ2n => {
            let cs = fundamental_roots(spec)?;
            let rows = cs.a_matrix().transpose().inverse().expect("essential root matrix is invertible");
            rows.rows()
                .iter()
                .enumerate()
                .map(|(j, r)| OrderInequality { label: inequality_label(spec, j + 1), coeffs: clear_denominators(r) })
                .collect()
        }
        Family::Z2CoordQuotient => vec![OrderInequality { label: "|.[n]|".into(), coeffs: Vector::unit(n, n - 1) }],
        Family::Z2SumQuotient => vec![OrderInequality { label: "|sum_i .i|".into(), coeffs: Vector::ones(n) }],
        Family::Trivial => {
            return Err(Error::UnsupportedFamily { family: Family::Trivial, operation: "order_inequalities" })
        }
    };
    Ok(rows)
}

fn inequality_label(spec: &GroupSpec, j: usize) -> String {
    let n = spec.dim();
    match spec.family() {
        Family::HyperoctahedralB => format!("sum_{{i<=j}} |.[i]|, j={j}"),
        Family::DemihyperoctahedralD if j + 1 < n => format!("sum_{{i<=j}} |.[i]|, j={j}"),
        Family::DemihyperoctahedralD if j + 1 == n => "sum_{i<n} |.[i]| - .[n]".into(),
        Family::DemihyperoctahedralD => "sum_{i<n} |.[i]| + .[n]".into(),
        _ => format!("|.{j}|, j={j}"),
    }
}

/// Positive rescaling of a rational vector to integer entries.
fn clear_denominators(v: &Vector) -> Vector {
    let lcm = v.coords().iter().fold(num_bigint::BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    v.scale(&Rational::from_integer(lcm))
}

/// Decides the family's order through representatives and its inequality system.
pub fn cone_order_check(spec: &GroupSpec, x: &Vector, y: &Vector) -> Result<OrderVerdict> {
    x.check_dim(spec.dim())?;
    y.check_dim(spec.dim())?;
    let system = order_inequalities(spec)?;
    let tx = representative(spec, x)?.tilde_x;
    let ty = representative(spec, y)?.tilde_x;
    let mut slacks = Vec::with_capacity(system.len());
    for (j, ineq) in system.iter().enumerate() {
        let lhs = ineq.coeffs.dot(&ty);
        let rhs = ineq.coeffs.dot(&tx);
        if lhs > rhs {
            return Ok(OrderVerdict::fails(Certificate::ViolatedInequality {
                index: j + 1,
                label: ineq.label.clone(),
                lhs,
                rhs,
            }));
        }
        slacks.push(rhs - lhs);
    }
    Ok(OrderVerdict::holds(Certificate::InequalitySlacks { slacks }))
}

/// Inessential subspace and the orthogonal projector onto its complement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EssentialDecomposition {
    pub inessential_basis: Vec<Vector>,
    pub projector: Matrix,
}

pub fn essential_decomposition(cs: &ConeSystem) -> EssentialDecomposition {
    EssentialDecomposition {
        inessential_basis: cs.inessential_basis.clone(),
        projector: complement_projector(cs.dim(), &cs.inessential_basis),
    }
}

/// `y ≺⁺ x`: hull membership after projecting both onto the essential part.
pub fn essential_order(spec: &GroupSpec, x: &Vector, y: &Vector) -> Result<OrderVerdict> {
    essential_order_with_guard(spec, x, y, DEFAULT_GROUP_GUARD)
}

pub fn essential_order_with_guard(spec: &GroupSpec, x: &Vector, y: &Vector, guard: u64) -> Result<OrderVerdict> {
    x.check_dim(spec.dim())?;
    y.check_dim(spec.dim())?;
    let p = essential_decomposition(&fundamental_roots(spec)?).projector;
    hull_membership_with_guard(spec, &p.apply(x), &p.apply(y), guard)
}

/// `A_1`: the S_n root matrix completed by the all-ones row, with `(A_1^T)^{-1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletedAMatrix {
    pub a1: Matrix,
    pub inverse_transpose: Matrix,
}

pub fn complete_a_matrix(spec: &GroupSpec) -> Result<CompletedAMatrix> {
    if spec.family() != Family::SymmetricA {
        return Err(Error::UnsupportedFamily { family: spec.family(), operation: "complete_a_matrix" });
    }
    let mut rows = fundamental_roots(spec)?.roots;
    rows.push(Vector::ones(spec.dim()));
    let a1 = Matrix::from_rows(rows, spec.dim());
    let inverse_transpose = a1.transpose().inverse().expect("completed matrix is invertible");
    Ok(CompletedAMatrix { a1, inverse_transpose })
}

/// Signed permutation taking `x` to its representative, when one exists.
pub fn witness_permutation(rep: &Representative) -> Option<&SignedPermutation> {
    match &rep.witness {
        GroupElement::Signed(p) => Some(p),
        GroupElement::SumReflection { .. } => None,
    }
}
