//! Finite reflection groups acting on R^n by signed permutations, plus the
//! reflection through the sum-zero hyperplane.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::vector::{Rational, Vector};

pub const DEFAULT_GROUP_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    SymmetricA,
    HyperoctahedralB,
    DemihyperoctahedralD,
    SignChangeZ2n,
    Z2CoordQuotient,
    Z2SumQuotient,
    Trivial,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::SymmetricA,
        Family::HyperoctahedralB,
        Family::DemihyperoctahedralD,
        Family::SignChangeZ2n,
        Family::Z2CoordQuotient,
        Family::Z2SumQuotient,
        Family::Trivial,
    ];
}

/// Family tag plus ambient dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    family: Family,
    dim: usize,
}

impl GroupSpec {
    pub fn new(family: Family, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("dimension must be positive".into()));
        }
        if family == Family::DemihyperoctahedralD && dim < 2 {
            return Err(Error::InvalidSpec("type D needs n >= 2".into()));
        }
        Ok(GroupSpec { family, dim })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u128 {
        let n = self.dim as u32;
        let fact = (1..=self.dim as u128).product::<u128>();
        match self.family {
            Family::SymmetricA => fact,
            Family::HyperoctahedralB => (1u128 << n) * fact,
            Family::DemihyperoctahedralD => (1u128 << (n - 1)) * fact,
            Family::SignChangeZ2n => 1u128 << n,
            Family::Z2CoordQuotient | Family::Z2SumQuotient => 2,
            Family::Trivial => 1,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::Signed(SignedPermutation::identity(self.dim))
    }

    /// Whether `g` belongs to this group.
    pub fn contains(&self, g: &GroupElement) -> bool {
        if g.dim() != self.dim {
            return false;
        }
        match (self.family, g) {
            (Family::Z2SumQuotient, GroupElement::SumReflection { .. }) => true,
            (_, GroupElement::SumReflection { .. }) => false,
            (family, GroupElement::Signed(p)) => {
                let id_perm = p.perm.iter().enumerate().all(|(i, &j)| i == j);
                let flips = p.negative_count();
                match family {
                    Family::SymmetricA => flips == 0,
                    Family::HyperoctahedralB => true,
                    Family::DemihyperoctahedralD => flips % 2 == 0,
                    Family::SignChangeZ2n => id_perm,
                    Family::Z2CoordQuotient => id_perm && p.signs[..self.dim - 1].iter().all(|&s| s > 0),
                    Family::Z2SumQuotient | Family::Trivial => id_perm && flips == 0,
                }
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim;
        match self.family {
            Family::SymmetricA => write!(f, "S{n}"),
            Family::HyperoctahedralB => write!(f, "B{n}"),
            Family::DemihyperoctahedralD => write!(f, "D{n}"),
            Family::SignChangeZ2n => write!(f, "Z2^{n}"),
            Family::Z2CoordQuotient => write!(f, "Z2coord{n}"),
            Family::Z2SumQuotient => write!(f, "Z2sum{n}"),
            Family::Trivial => write!(f, "trivial{n}"),
        }
    }
}

impl GroupSpec {
    /// Parses a group name whose dimension may be omitted, filling it from `default_dim`.
    pub fn parse_with_default(text: &str, default_dim: Option<usize>) -> Result<Self> {
        let text = text.trim();
        let prefixes: [(&str, Family); 7] = [
            ("Z2coord", Family::Z2CoordQuotient),
            ("Z2sum", Family::Z2SumQuotient),
            ("Z2^", Family::SignChangeZ2n),
            ("trivial", Family::Trivial),
            ("S", Family::SymmetricA),
            ("B", Family::HyperoctahedralB),
            ("D", Family::DemihyperoctahedralD),
        ];
        for (prefix, family) in prefixes {
            if let Some(rest) = text.strip_prefix(prefix) {
                let dim = if rest.is_empty() {
                    default_dim.ok_or_else(|| Error::Parse(format!("group `{text}` needs a dimension")))?
                } else {
                    rest.parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension in group `{text}`")))?
                };
                return GroupSpec::new(family, dim);
            }
        }
        Err(Error::Parse(format!("unknown group `{text}`")))
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupSpec::parse_with_default(s, None)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `x ↦ y` with `y_i = signs_i · x_{perm(i)}`; indices are 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::InvalidElement(format!("{} signs for {} positions", signs.len(), n)));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidElement(format!("{perm:?} is not a permutation")));
            }
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidElement(format!("signs must be ±1, got {signs:?}")));
        }
        Ok(SignedPermutation { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation { perm: (0..n).collect(), signs: vec![1; n] }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn negative_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.perm.iter().zip(&self.signs).map(|(&p, &s)| if s > 0 { x[p].clone() } else { -x[p].clone() }).collect()
    }

    fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        self.perm.iter().zip(&self.signs).map(|(&p, &s)| f64::from(s) * x[p]).collect()
    }

    /// `self ∘ other`: apply `other` first.
    fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let perm = self.perm.iter().map(|&p| other.perm[p]).collect();
        let signs = self.perm.iter().zip(&self.signs).map(|(&p, &s)| s * other.signs[p]).collect();
        SignedPermutation { perm, signs }
    }

    fn inverse(&self) -> SignedPermutation {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p] = i;
            signs[p] = self.signs[i];
        }
        SignedPermutation { perm, signs }
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SignedPermutation {
    /// 1-based perm with signs, e.g. `[3,1,2]/[+,-,+]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm = self.perm.iter().map(|p| (p + 1).to_string()).join(",");
        let signs = self.signs.iter().map(|&s| if s > 0 { "+" } else { "-" }).join(",");
        write!(f, "[{perm}]/[{signs}]")
    }
}

/// An element of one of the supported groups.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Signed(SignedPermutation),
    /// `x ↦ x - (2⟨x,1⟩/n)·1`, the reflection through `Σx_i = 0`.
    SumReflection {
        dim: usize,
    },
}

impl GroupElement {
    pub fn signed(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        SignedPermutation::new(perm, signs).map(GroupElement::Signed)
    }

    pub fn identity(dim: usize) -> Self {
        GroupElement::Signed(SignedPermutation::identity(dim))
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupElement::Signed(p) => p.dim(),
            GroupElement::SumReflection { dim } => *dim,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, GroupElement::Signed(p) if p.is_identity())
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.dim())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Vector) -> Vector {
        match self {
            GroupElement::Signed(p) => Vector::new(p.apply(x.coords())),
            GroupElement::SumReflection { dim } => {
                let shift = x.sum() * Rational::from_integer(2.into()) / Rational::from_integer((*dim).into());
                Vector::new(x.coords().iter().map(|v| v - &shift).collect())
            }
        }
    }

    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        match self {
            GroupElement::Signed(p) => p.apply_f64(x),
            GroupElement::SumReflection { dim } => {
                let shift = 2.0 * x.iter().sum::<f64>() / *dim as f64;
                x.iter().map(|v| v - shift).collect()
            }
        }
    }

    /// `g ∘ h`, i.e. `apply(compose(g, h), x) = apply(g, apply(h, x))`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        match (self, other) {
            (GroupElement::Signed(g), GroupElement::Signed(h)) => Ok(GroupElement::Signed(g.compose(h))),
            (GroupElement::SumReflection { dim }, GroupElement::SumReflection { .. }) => {
                Ok(GroupElement::identity(*dim))
            }
            (g, h) if h.is_identity() => Ok(g.clone()),
            (g, h) if g.is_identity() => Ok(h.clone()),
            (g, h) => Err(Error::NotRepresentable(format!("{g} ∘ {h}"))),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Signed(p) => GroupElement::Signed(p.inverse()),
            GroupElement::SumReflection { dim } => GroupElement::SumReflection { dim: *dim },
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Signed(p) => write!(f, "{p}"),
            GroupElement::SumReflection { dim } => write!(f, "sum-reflection({dim})"),
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn check_guard(spec: &GroupSpec, guard: u64) -> Result<()> {
    let order = spec.order();
    if order > u128::from(guard) {
        Err(Error::GroupTooLarge { order, guard })
    } else {
        Ok(())
    }
}

pub fn enumerate_group(spec: &GroupSpec) -> Result<Vec<GroupElement>> {
    enumerate_group_with_guard(spec, DEFAULT_GROUP_GUARD)
}

/// All elements of the group, identity first.
pub fn enumerate_group_with_guard(spec: &GroupSpec, guard: u64) -> Result<Vec<GroupElement>> {
    check_guard(spec, guard)?;
    let n = spec.dim;
    let sign_patterns = |free: usize| -> Vec<Vec<i8>> {
        (0..1usize << free).map(|mask| (0..free).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
    };
    let signed = |perm: Vec<usize>, signs: Vec<i8>| GroupElement::Signed(SignedPermutation { perm, signs });

    let elements = match spec.family {
        Family::Trivial => vec![spec.identity()],
        Family::Z2SumQuotient => vec![spec.identity(), GroupElement::SumReflection { dim: n }],
        Family::Z2CoordQuotient => {
            let mut flip = vec![1; n];
            flip[n - 1] = -1;
            vec![spec.identity(), signed((0..n).collect(), flip)]
        }
        Family::SignChangeZ2n => sign_patterns(n).into_iter().map(|s| signed((0..n).collect(), s)).collect(),
        Family::SymmetricA => (0..n).permutations(n).map(|p| signed(p, vec![1; n])).collect(),
        Family::HyperoctahedralB | Family::DemihyperoctahedralD => {
            let even_only = spec.family == Family::DemihyperoctahedralD;
            let patterns: Vec<Vec<i8>> = sign_patterns(n)
                .into_iter()
                .filter(|s| !even_only || s.iter().filter(|&&v| v < 0).count() % 2 == 0)
                .collect();
            (0..n).permutations(n).flat_map(|p| patterns.iter().map(move |s| signed(p.clone(), s.clone()))).collect()
        }
    };
    debug_assert_eq!(elements.len() as u128, spec.order());
    Ok(elements)
}

/// Orbit points with one witness element each, deduplicated by exact equality.
pub fn orbit_with_witnesses(spec: &GroupSpec, x: &Vector, guard: u64) -> Result<Vec<(Vector, GroupElement)>> {
    x.check_dim(spec.dim)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in enumerate_group_with_guard(spec, guard)? {
        let gx = g.apply_unchecked(x);
        if seen.insert(gx.clone()) {
            out.push((gx, g));
        }
    }
    Ok(out)
}

pub fn orbit(spec: &GroupSpec, x: &Vector) -> Result<BTreeSet<Vector>> {
    orbit_with_guard(spec, x, DEFAULT_GROUP_GUARD)
}

pub fn orbit_with_guard(spec: &GroupSpec, x: &Vector, guard: u64) -> Result<BTreeSet<Vector>> {
    Ok(orbit_with_witnesses(spec, x, guard)?.into_iter().map(|(v, _)| v).collect())
}

/// Support value m(z, x) = max over g of ⟨z, g·x⟩, in closed form where one exists.
pub fn m_value(spec: &GroupSpec, z: &Vector, x: &Vector) -> Result<Rational> {
    z.check_dim(spec.dim)?;
    x.check_dim(spec.dim)?;
    match spec.family {
        Family::SymmetricA => Ok(sorted_dot(z.coords().to_vec(), x.coords().to_vec())),
        Family::HyperoctahedralB => Ok(sorted_dot(z.abs().into_coords(), x.abs().into_coords())),
        Family::DemihyperoctahedralD => {
            let best = sorted_dot(z.abs().into_coords(), x.abs().into_coords());
            // With no zero coordinates the sign parity is forced; the cheapest
            // fix-up negates the product of the two smallest magnitudes.
            let parity = |v: &Vector| v.coords().iter().filter(|c| c.is_negative()).count() % 2;
            let has_zero = |v: &Vector| v.coords().iter().any(Zero::is_zero);
            if has_zero(z) || has_zero(x) || parity(z) == parity(x) {
                Ok(best)
            } else {
                let min = |v: &Vector| v.coords().iter().map(|c| c.abs()).min().expect("n >= 2");
                let two = Rational::from_integer(2.into());
                Ok(best - two * min(z) * min(x))
            }
        }
        Family::SignChangeZ2n => Ok(z.coords().iter().zip(x.coords()).map(|(a, b)| a.abs() * b.abs()).sum()),
        Family::Z2CoordQuotient => {
            let n = spec.dim - 1;
            let head: Rational = z.coords()[..n].iter().zip(&x.coords()[..n]).map(|(a, b)| a * b).sum();
            Ok(head + z[n].abs() * x[n].abs())
        }
        Family::Z2SumQuotient | Family::Trivial => m_value_by_enumeration(spec, z, x, DEFAULT_GROUP_GUARD),
    }
}

/// m(z, x) by scanning every group element.
pub fn m_value_by_enumeration(spec: &GroupSpec, z: &Vector, x: &Vector, guard: u64) -> Result<Rational> {
    z.check_dim(spec.dim)?;
    x.check_dim(spec.dim)?;
    Ok(enumerate_group_with_guard(spec, guard)?
        .iter()
        .map(|g| z.dot(&g.apply_unchecked(x)))
        .max()
        .expect("groups are non-empty"))
}

fn sorted_dot(mut a: Vec<Rational>, mut b: Vec<Rational>) -> Rational {
    a.sort_unstable_by(|p, q| q.cmp(p));
    b.sort_unstable_by(|p, q| q.cmp(p));
    a.iter().zip(&b).map(|(p, q)| p * q).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::int;

    fn spec(family: Family, n: usize) -> GroupSpec {
        GroupSpec::new(family, n).unwrap()
    }

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    /// Generators of B_3 as in the worked example: swap(1,2), swap(2,3), negate 3.
    fn m1() -> GroupElement {
        GroupElement::signed(vec![1, 0, 2], vec![1, 1, 1]).unwrap()
    }
    fn m2() -> GroupElement {
        GroupElement::signed(vec![0, 2, 1], vec![1, 1, 1]).unwrap()
    }
    fn m3() -> GroupElement {
        GroupElement::signed(vec![0, 1, 2], vec![1, 1, -1]).unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(GroupElement::identity(3).apply(&v(&[1, 2, 3])).unwrap(), v(&[1, 2, 3]));
        assert_eq!(m3().apply(&v(&[1, 2, 3])).unwrap(), v(&[1, 2, -3]));
        assert_eq!(m1().apply(&v(&[5, 7, 0])).unwrap(), v(&[7, 5, 0]));
        assert!(matches!(m1().apply(&v(&[1, 2])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn compose_examples() {
        let id = GroupElement::identity(3);
        assert_eq!(m1().compose(&id).unwrap(), m1());
        assert!(m3().compose(&m3()).unwrap().is_identity());
        // M3 M2 M3 has rows (1,0,0), (0,0,-1), (0,-1,0).
        let m3p = m3().compose(&m2().compose(&m3()).unwrap()).unwrap();
        let rows = [[1, 0, 0], [0, 0, -1], [0, -1, 0]];
        for j in 0..3 {
            // The image of e_j is column j.
            let column = Vector::new(rows.iter().map(|r| int(r[j])).collect());
            assert_eq!(m3p.apply(&Vector::unit(3, j)).unwrap(), column);
        }
        assert!(GroupElement::identity(2).compose(&GroupElement::identity(3)).is_err());
    }

    #[test]
    fn element_validation() {
        assert!(GroupElement::signed(vec![0, 0], vec![1, 1]).is_err());
        assert!(GroupElement::signed(vec![0, 1], vec![1, 2]).is_err());
        assert!(GroupElement::signed(vec![0, 1], vec![1]).is_err());
    }

    #[test]
    fn orders_and_enumeration() {
        assert_eq!(enumerate_group(&spec(Family::SymmetricA, 3)).unwrap().len(), 6);
        assert_eq!(enumerate_group(&spec(Family::HyperoctahedralB, 3)).unwrap().len(), 48);
        let d3 = enumerate_group(&spec(Family::DemihyperoctahedralD, 3)).unwrap();
        assert_eq!(d3.len(), 24);
        assert!(d3.iter().all(|g| matches!(g, GroupElement::Signed(p) if p.negative_count() % 2 == 0)));
        for family in Family::ALL {
            for n in 2..=4 {
                let s = spec(family, n);
                let els = enumerate_group(&s).unwrap();
                assert_eq!(els.len() as u128, s.order(), "{s}");
                assert!(els.iter().all(|g| s.contains(g)), "{s}");
                assert_eq!(els.iter().collect::<BTreeSet<_>>().len(), els.len(), "{s}");
            }
        }
    }

    #[test]
    fn guard_rejects_large_groups() {
        let b8 = spec(Family::HyperoctahedralB, 8);
        assert!(matches!(enumerate_group(&b8), Err(Error::GroupTooLarge { .. })));
        assert!(matches!(
            enumerate_group_with_guard(&spec(Family::SymmetricA, 4), 10),
            Err(Error::GroupTooLarge { order: 24, guard: 10 })
        ));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit(&spec(Family::SymmetricA, 3), &v(&[1, 1, 1])).unwrap().len(), 1);
        let z2 = orbit(&spec(Family::SignChangeZ2n, 2), &v(&[1, 2])).unwrap();
        let expected: BTreeSet<_> = [v(&[1, 2]), v(&[-1, 2]), v(&[1, -2]), v(&[-1, -2])].into_iter().collect();
        assert_eq!(z2, expected);
        let b2 = orbit(&spec(Family::HyperoctahedralB, 2), &v(&[1, 0])).unwrap();
        let expected: BTreeSet<_> = [v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])].into_iter().collect();
        assert_eq!(b2, expected);
    }

    #[test]
    fn m_value_examples() {
        let b2 = spec(Family::HyperoctahedralB, 2);
        assert_eq!(m_value(&b2, &v(&[1, 2]), &v(&[3, -1])).unwrap(), int(7));
        assert_eq!(m_value_by_enumeration(&b2, &v(&[1, 2]), &v(&[3, -1]), 100).unwrap(), int(7));
        let t = spec(Family::Trivial, 3);
        assert_eq!(m_value(&t, &v(&[1, 2, 3]), &v(&[4, 5, -6])).unwrap(), int(-4));
        let x = v(&[2, -1, 5]);
        for family in Family::ALL {
            assert_eq!(m_value(&spec(family, 3), &x, &x).unwrap(), x.norm_squared(), "{family:?}");
        }
    }

    #[test]
    fn sum_reflection_is_orthogonal_involution() {
        let r = GroupElement::SumReflection { dim: 3 };
        let x = v(&[1, 1, 1]);
        assert_eq!(r.apply(&x).unwrap(), v(&[-1, -1, -1]));
        let y = v(&[3, 0, 0]);
        assert_eq!(r.apply(&y).unwrap().norm_squared(), y.norm_squared());
        assert!(r.compose(&r).unwrap().is_identity());
        assert!(r.compose(&m1()).is_err());
    }

    #[test]
    fn parses_group_names() {
        for name in ["S3", "B4", "D3", "Z2^3", "Z2coord3", "Z2sum3", "trivial2"] {
            let s: GroupSpec = name.parse().unwrap();
            assert_eq!(s.to_string(), name);
        }
        assert!("Q3".parse::<GroupSpec>().is_err());
        assert!("B0".parse::<GroupSpec>().is_err());
        assert!("D1".parse::<GroupSpec>().is_err());
        assert_eq!(GroupSpec::parse_with_default("Z2coord", Some(3)).unwrap().to_string(), "Z2coord3");
    }
}
