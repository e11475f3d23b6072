//! Subgroup and extension structure: refinement of orders, intersection of
//! fundamental regions, sums of dual cones and the convexity gap of their union.
//!
//! Only the concrete triples below are supported:
//! `(B_n, D_n, Z2 quotient)` with either quotient reflection,
//! `(B_n, Z2^n, S_n)`, and the degenerate `(G, G, trivial)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::cone::{cone_order_check, fundamental_roots, representative, ConeSystem};
use crate::error::{Error, Result};
use crate::group::{orbit_with_witnesses, Family, GroupSpec, DEFAULT_GROUP_GUARD};
use crate::hull::hull_membership;
use crate::lp::{nonnegative_combination, Feasibility};
use crate::sample::{convex_weights, rng, RationalDist};
use crate::vector::{serialize_rationals, Rational, Vector};
use crate::verdict::OrderVerdict;

/// Which reflection realizes the `Z2` quotient of `B_n` by `D_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientVariant {
    /// Reflection in `x_n = 0`.
    Coordinate,
    /// Reflection in `Σ x_i = 0`.
    Sum,
}

/// `G` as an extension of the normal subgroup `N` by `H ≅ G/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionTriple {
    pub g: GroupSpec,
    pub n: GroupSpec,
    pub h: GroupSpec,
    pub phi_variant: Option<QuotientVariant>,
}

impl ExtensionTriple {
    pub fn new(g: GroupSpec, n: GroupSpec, h: GroupSpec) -> Result<Self> {
        let dim = g.dim();
        if n.dim() != dim || h.dim() != dim {
            return Err(Error::UnsupportedTriple(format!("{g}:{n}:{h} mixes dimensions")));
        }
        if g.order() != n.order() * h.order() {
            return Err(Error::UnsupportedTriple(format!("|{g}| != |{n}|·|{h}|")));
        }
        use Family::*;
        let phi_variant = match (g.family(), n.family(), h.family()) {
            (HyperoctahedralB, DemihyperoctahedralD, Z2CoordQuotient) => Some(QuotientVariant::Coordinate),
            (HyperoctahedralB, DemihyperoctahedralD, Z2SumQuotient) => Some(QuotientVariant::Sum),
            (HyperoctahedralB, SignChangeZ2n, SymmetricA) => None,
            (gf, nf, Trivial) if gf == nf => None,
            _ => return Err(Error::UnsupportedTriple(format!("{g}:{n}:{h}"))),
        };
        Ok(ExtensionTriple { g, n, h, phi_variant })
    }

    /// `(B_n, D_n, Z2)` with the chosen quotient reflection.
    pub fn b_d_z2(dim: usize, variant: QuotientVariant) -> Result<Self> {
        let h = match variant {
            QuotientVariant::Coordinate => Family::Z2CoordQuotient,
            QuotientVariant::Sum => Family::Z2SumQuotient,
        };
        Self::new(
            GroupSpec::new(Family::HyperoctahedralB, dim)?,
            GroupSpec::new(Family::DemihyperoctahedralD, dim)?,
            GroupSpec::new(h, dim)?,
        )
    }

    /// `(B_n, Z2^n, S_n)`.
    pub fn b_z2n_s(dim: usize) -> Result<Self> {
        Self::new(
            GroupSpec::new(Family::HyperoctahedralB, dim)?,
            GroupSpec::new(Family::SignChangeZ2n, dim)?,
            GroupSpec::new(Family::SymmetricA, dim)?,
        )
    }

    fn cones(&self) -> Result<[ConeSystem; 3]> {
        Ok([fundamental_roots(&self.g)?, fundamental_roots(&self.n)?, fundamental_roots(&self.h)?])
    }
}

impl fmt::Display for ExtensionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.g, self.n, self.h)
    }
}

impl FromStr for ExtensionTriple {
    type Err = Error;

    /// `G:N:H`, e.g. `B3:D3:Z2coord` or `B3:Z2^3:S3`; `N` and `H` inherit `G`'s dimension when omitted.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [g, n, h] = parts.as_slice() else {
            return Err(Error::Parse(format!("triple `{s}` must have the form G:N:H")));
        };
        let g = GroupSpec::from_str(g)?;
        let n = GroupSpec::parse_with_default(n, Some(g.dim()))?;
        let h = GroupSpec::parse_with_default(h, Some(g.dim()))?;
        ExtensionTriple::new(g, n, h)
    }
}

impl Serialize for ExtensionTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Nonnegative coefficients expressing one root through another generator set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootExpression {
    pub root: Vector,
    /// `None` when the root is not in the cone spanned by the generators.
    #[serde(serialize_with = "serialize_opt_coeffs")]
    pub coefficients: Option<Vec<Rational>>,
}

fn serialize_opt_coeffs<S: serde::Serializer>(c: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match c {
        Some(c) => serialize_rationals(c, s),
        None => s.serialize_none(),
    }
}

fn express_all(roots: &[Vector], generators: &[Vector]) -> Vec<RootExpression> {
    roots
        .iter()
        .map(|r| RootExpression {
            root: r.clone(),
            coefficients: match nonnegative_combination(generators, r) {
                Feasibility::Feasible(c) => Some(c),
                Feasibility::Infeasible(_) => None,
            },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionProof {
    /// Each `G`-root through the combined `N ∪ H` roots (gives `C_N ∩ C_H ⊆ C_G`).
    pub g_roots_from_nh: Vec<RootExpression>,
    /// Each `N`- and `H`-root through the `G`-roots (gives `C_G ⊆ C_N ∩ C_H`).
    pub nh_roots_from_g: Vec<RootExpression>,
    /// Both directions certified, so the open regions coincide.
    pub proves_equality: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionIntersectionReport {
    pub triple: ExtensionTriple,
    pub samples: usize,
    pub seed: u64,
    /// Points strictly inside exactly one of `C°_G` and `C°_N ∩ C°_H`.
    pub violations: Vec<Vector>,
    pub witnesses: Vec<Vector>,
    pub points_tested: usize,
    pub interior_g: usize,
    pub interior_n_and_h: usize,
    pub symbolic: InclusionProof,
}

impl RegionIntersectionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `C°_G = C°_N ∩ C°_H` on sampled points and by conic certificates.
///
/// Each sample contributes the raw point and its `G`-representative, so
/// both the generic and the in-cone cases are exercised.
pub fn verify_region_intersection(t: &ExtensionTriple, samples: usize, seed: u64) -> Result<RegionIntersectionReport> {
    let [cg, cn, ch] = t.cones()?;
    let dist = RationalDist::default();
    let mut r = rng(seed);
    let mut violations = Vec::new();
    let (mut points_tested, mut interior_g, mut interior_n_and_h) = (0, 0, 0);
    for _ in 0..samples {
        let x = dist.vector(&mut r, t.g.dim());
        let tilde = representative(&t.g, &x)?.tilde_x;
        for p in [x, tilde] {
            points_tested += 1;
            let in_g = cg.interior_contains(&p)?;
            let in_nh = cn.interior_contains(&p)? && ch.interior_contains(&p)?;
            interior_g += usize::from(in_g);
            interior_n_and_h += usize::from(in_nh);
            if in_g != in_nh {
                violations.push(p);
            }
        }
    }

    let combined: Vec<Vector> = cn.roots.iter().chain(&ch.roots).cloned().collect();
    let g_roots_from_nh = express_all(&cg.roots, &combined);
    let nh_roots_from_g = express_all(&combined, &cg.roots);
    let proves_equality = g_roots_from_nh.iter().chain(&nh_roots_from_g).all(|e| e.coefficients.is_some());

    Ok(RegionIntersectionReport {
        triple: *t,
        samples,
        seed,
        violations,
        witnesses: vec![],
        points_tested,
        interior_g,
        interior_n_and_h,
        symbolic: InclusionProof { g_roots_from_nh, nh_roots_from_g, proves_equality },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementPair {
    pub x: Vector,
    pub y: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgroupRefinement {
    pub subgroup: GroupSpec,
    pub trials: usize,
    pub failures: Vec<RefinementPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementReport {
    pub triple: ExtensionTriple,
    pub samples: usize,
    pub seed: u64,
    pub subgroups: Vec<SubgroupRefinement>,
    /// `y` values built as `≺_K` for a subgroup `K` but not `≺_G`.
    pub violations: Vec<RefinementPair>,
    pub witnesses: Vec<Vector>,
}

impl RefinementReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A random convex combination of a few orbit points of `x` under `spec`.
pub fn random_orbit_combination(spec: &GroupSpec, x: &Vector, r: &mut impl Rng) -> Result<Vector> {
    let orbit = orbit_with_witnesses(spec, x, DEFAULT_GROUP_GUARD)?;
    let k = r.gen_range(1..=spec.dim() + 1).min(orbit.len());
    let weights = convex_weights(r, k);
    let mut y = Vector::zeros(spec.dim());
    for w in &weights {
        let (p, _) = &orbit[r.gen_range(0..orbit.len())];
        y = &y + &p.scale(w);
    }
    Ok(y)
}

/// Builds `y ≺_K x` for `K ∈ {N, H}` by explicit convex combination and
/// checks `y ≺_G x` with the hull oracle.
pub fn verify_refinement(t: &ExtensionTriple, trials: usize, seed: u64) -> Result<RefinementReport> {
    let dist = RationalDist::default();
    let mut subgroups = Vec::new();
    let mut violations = Vec::new();
    for (i, k) in [t.n, t.h].into_iter().enumerate() {
        let mut r = crate::sample::substream(seed, i as u64);
        let mut failures = Vec::new();
        for _ in 0..trials {
            let x = dist.vector(&mut r, t.g.dim());
            let y = random_orbit_combination(&k, &x, &mut r)?;
            if !hull_membership(&t.g, &x, &y)?.holds {
                failures.push(RefinementPair { x, y });
            }
        }
        violations.extend(failures.iter().cloned());
        subgroups.push(SubgroupRefinement { subgroup: k, trials, failures });
    }
    Ok(RefinementReport { triple: *t, samples: trials, seed, subgroups, violations, witnesses: vec![] })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualSumReport {
    pub triple: ExtensionTriple,
    pub samples: usize,
    pub seed: u64,
    /// Part (a): every `G`-dual generator through `N ∪ H` dual generators.
    pub generator_certificates: Vec<RootExpression>,
    pub generators_certified: bool,
    /// Part (b): sampled `v` where `C*_G` and `C*_N + C*_H` membership disagree.
    pub violations: Vec<Vector>,
    pub witnesses: Vec<Vector>,
    pub members_tested: usize,
}

impl DualSumReport {
    pub fn passed(&self) -> bool {
        self.generators_certified && self.violations.is_empty()
    }
}

/// Checks `C*_G = C*_N + C*_H`.
pub fn dual_sum_check(t: &ExtensionTriple, samples: usize, seed: u64) -> Result<DualSumReport> {
    let [cg, cn, ch] = t.cones()?;
    let combined: Vec<Vector> = cn.dual_generators.iter().chain(&ch.dual_generators).cloned().collect();
    let generator_certificates = express_all(&cg.dual_generators, &combined);
    let generators_certified = generator_certificates.iter().all(|e| e.coefficients.is_some());

    let dist = RationalDist::default();
    let mut r = rng(seed);
    let mut violations = Vec::new();
    let mut members_tested = 0;
    for i in 0..samples {
        // Alternate arbitrary vectors with members of C*_G.
        let v = if i % 2 == 0 {
            dist.vector(&mut r, t.g.dim())
        } else {
            cg.dual_generators.iter().fold(Vector::zeros(t.g.dim()), |acc, a| {
                let c = Rational::from_integer(r.gen_range(0..=6).into());
                &acc + &a.scale(&c)
            })
        };
        let in_g = nonnegative_combination(&cg.dual_generators, &v).is_feasible();
        let in_sum = nonnegative_combination(&combined, &v).is_feasible();
        members_tested += usize::from(in_g);
        if in_g != in_sum {
            violations.push(v);
        }
    }
    Ok(DualSumReport {
        triple: *t,
        samples,
        seed,
        generator_certificates,
        generators_certified,
        violations,
        witnesses: vec![],
        members_tested,
    })
}

/// `v ∈ C*_G` with `v ∉ C*_N` and `v ∉ C*_H`, each claim certified.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapWitness {
    pub v: Vector,
    #[serde(serialize_with = "serialize_rationals")]
    pub g_coefficients: Vec<Rational>,
    /// In `C_N` and pairs negatively with `v`.
    pub n_separator: Vector,
    /// In `C_H` and pairs negatively with `v`.
    pub h_separator: Vector,
}

impl GapWitness {
    /// Re-checks all three certificates from scratch.
    pub fn is_valid(&self, t: &ExtensionTriple) -> Result<bool> {
        let [cg, cn, ch] = t.cones()?;
        let in_g = crate::lp::is_nonnegative_solution(&cg.dual_generators, &self.v, &self.g_coefficients);
        let sep = |cs: &ConeSystem, w: &Vector| -> Result<bool> {
            Ok(cs.contains(w)? && w.dot(&self.v) < Rational::from_integer(0.into()))
        };
        Ok(in_g && sep(&cn, &self.n_separator)? && sep(&ch, &self.h_separator)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionGapReport {
    pub triple: ExtensionTriple,
    pub samples: usize,
    pub violations: Vec<Vector>,
    pub witnesses: Vec<GapWitness>,
}

const GAP_SEARCH_ATTEMPTS: usize = 2000;
const GAP_SEARCH_SEED: u64 = 0;

fn certify_gap(cg: &ConeSystem, cn: &ConeSystem, ch: &ConeSystem, v: &Vector) -> Option<GapWitness> {
    let Feasibility::Feasible(g_coefficients) = nonnegative_combination(&cg.dual_generators, v) else {
        return None;
    };
    let Feasibility::Infeasible(un) = nonnegative_combination(&cn.dual_generators, v) else {
        return None;
    };
    let Feasibility::Infeasible(uh) = nonnegative_combination(&ch.dual_generators, v) else {
        return None;
    };
    Some(GapWitness { v: v.clone(), g_coefficients, n_separator: -&un, h_separator: -&uh })
}

/// Searches for a point of `C*_G` outside `C*_N ∪ C*_H`, which shows the
/// union is not convex. Tries `e_1 + 2e_n` first, then random integer
/// combinations of the `G`-roots from a fixed seed.
pub fn union_convexity_gap(t: &ExtensionTriple) -> Result<Option<GapWitness>> {
    let [cg, cn, ch] = t.cones()?;
    let dim = t.g.dim();
    let mut named = Vector::unit(dim, 0);
    named = &named + &Vector::unit(dim, dim - 1).scale(&Rational::from_integer(2.into()));
    if let Some(w) = certify_gap(&cg, &cn, &ch, &named) {
        return Ok(Some(w));
    }
    let mut r = rng(GAP_SEARCH_SEED);
    for _ in 0..GAP_SEARCH_ATTEMPTS {
        let v = cg.dual_generators.iter().fold(Vector::zeros(dim), |acc, a| {
            let c = Rational::from_integer(r.gen_range(0..=4).into());
            &acc + &a.scale(&c)
        });
        if let Some(w) = certify_gap(&cg, &cn, &ch, &v) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub fn union_gap_report(t: &ExtensionTriple) -> Result<UnionGapReport> {
    let witness = union_convexity_gap(t)?;
    Ok(UnionGapReport {
        triple: *t,
        samples: GAP_SEARCH_ATTEMPTS,
        violations: vec![],
        witnesses: witness.into_iter().collect(),
    })
}

/// The `Z2` quotient's order, selected by the triple's quotient variant.
pub fn quotient_order(t: &ExtensionTriple, x: &Vector, y: &Vector) -> Result<OrderVerdict> {
    let family = match t.phi_variant {
        Some(QuotientVariant::Coordinate) => Family::Z2CoordQuotient,
        Some(QuotientVariant::Sum) => Family::Z2SumQuotient,
        None => return Err(Error::UnsupportedTriple(format!("{t} has no Z2 quotient variant"))),
    };
    cone_order_check(&GroupSpec::new(family, t.g.dim())?, x, y)
}
