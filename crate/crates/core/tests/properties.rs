use gmajor::cone::{essential_decomposition, witness_permutation};
use gmajor::hull::{certificate_is_valid, reference_order};
use gmajor::structure::random_orbit_combination;
use gmajor::vector::rat;
use gmajor::{
    cone_order_check, enumerate_group, essential_order, fundamental_roots, hull_membership, m_value,
    m_value_by_enumeration, representative, Certificate, ExtensionTriple, Family, GroupSpec, QuotientVariant, Rational,
    Vector, DEFAULT_GROUP_GUARD,
};
use proptest::prelude::*;
use rand::SeedableRng;

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn vector(n: usize) -> impl Strategy<Value = Vector> {
    proptest::collection::vec(rational(), n).prop_map(Vector::new)
}

fn group(max_dim: usize) -> impl Strategy<Value = GroupSpec> {
    (0..Family::ALL.len(), 1..=max_dim)
        .prop_filter_map("D needs n >= 2", |(f, n)| GroupSpec::new(Family::ALL[f], n).ok())
}

fn group_and_vectors(max_dim: usize, count: usize) -> impl Strategy<Value = (GroupSpec, Vec<Vector>)> {
    group(max_dim).prop_flat_map(move |g| (Just(g), proptest::collection::vec(vector(g.dim()), count)))
}

/// Families whose closed-form order agrees with the hull order on raw vectors.
fn square_family(max_dim: usize) -> impl Strategy<Value = GroupSpec> {
    (0..3usize, 2..=max_dim).prop_map(|(f, n)| {
        let family = [Family::HyperoctahedralB, Family::DemihyperoctahedralD, Family::SignChangeZ2n][f];
        GroupSpec::new(family, n).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn elements_are_orthogonal((g, vs) in group_and_vectors(4, 2)) {
        for el in enumerate_group(&g).unwrap() {
            let (a, b) = (el.apply(&vs[0]).unwrap(), el.apply(&vs[1]).unwrap());
            prop_assert_eq!(a.dot(&b), vs[0].dot(&vs[1]));
        }
    }

    #[test]
    fn m_value_matches_enumeration((g, vs) in group_and_vectors(4, 2)) {
        prop_assert_eq!(
            m_value(&g, &vs[0], &vs[1]).unwrap(),
            m_value_by_enumeration(&g, &vs[0], &vs[1], DEFAULT_GROUP_GUARD).unwrap()
        );
    }

    #[test]
    fn representative_is_canonical((g, vs) in group_and_vectors(4, 1), pick in any::<prop::sample::Index>()) {
        let cs = fundamental_roots(&g).unwrap();
        let rep = representative(&g, &vs[0]).unwrap();
        prop_assert!(cs.contains(&rep.tilde_x).unwrap());
        prop_assert!(g.contains(&rep.witness));
        prop_assert_eq!(rep.witness.apply(&vs[0]).unwrap(), rep.tilde_x.clone());
        // Every orbit point has the same representative.
        let elements = enumerate_group(&g).unwrap();
        let other = elements[pick.index(elements.len())].apply(&vs[0]).unwrap();
        prop_assert_eq!(representative(&g, &other).unwrap().tilde_x, rep.tilde_x);
    }

    #[test]
    fn witness_is_a_signed_permutation_for_signed_families((g, vs) in group_and_vectors(4, 1)) {
        let rep = representative(&g, &vs[0]).unwrap();
        let reflected = g.family() == Family::Z2SumQuotient && vs[0].sum() < Rational::from_integer(0.into());
        prop_assert_eq!(witness_permutation(&rep).is_some(), !reflected);
    }

    #[test]
    fn hull_certificates_verify((g, vs) in group_and_vectors(3, 2)) {
        let (x, y) = (&vs[0], &vs[1]);
        let verdict = hull_membership(&g, x, y).unwrap();
        prop_assert!(certificate_is_valid(&g, x, y, &verdict).unwrap());
    }

    #[test]
    fn orbit_combinations_are_below(g in group(3), seed in any::<u64>(), x in vector(3)) {
        let x = Vector::new(x.coords()[..g.dim()].to_vec());
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let y = random_orbit_combination(&g, &x, &mut r).unwrap();
        prop_assert!(hull_membership(&g, &x, &y).unwrap().holds);
    }

    #[test]
    fn cone_check_matches_hull(g in square_family(4), seed in any::<u64>(), x in vector(4), y in vector(4)) {
        let n = g.dim();
        let x = Vector::new(x.coords()[..n].to_vec());
        let y = if seed % 2 == 0 {
            let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            random_orbit_combination(&g, &x, &mut r).unwrap()
        } else {
            Vector::new(y.coords()[..n].to_vec())
        };
        prop_assert_eq!(cone_order_check(&g, &x, &y).unwrap().holds, hull_membership(&g, &x, &y).unwrap().holds);
    }

    #[test]
    fn symmetric_order_through_projection(n in 2usize..=4, x in vector(4), y in vector(4)) {
        let g = GroupSpec::new(Family::SymmetricA, n).unwrap();
        let p = essential_decomposition(&fundamental_roots(&g).unwrap()).projector;
        let (x, y) = (Vector::new(x.coords()[..n].to_vec()), Vector::new(y.coords()[..n].to_vec()));
        prop_assert_eq!(
            cone_order_check(&g, &p.apply(&x), &p.apply(&y)).unwrap().holds,
            essential_order(&g, &x, &y).unwrap().holds
        );
    }

    #[test]
    fn closed_form_matches_reference_oracle((g, vs) in group_and_vectors(3, 2), seed in any::<u64>()) {
        prop_assume!(g.family() != Family::Trivial);
        let x = &vs[0];
        let y = if seed % 2 == 0 {
            random_orbit_combination(&g, x, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed)).unwrap()
        } else {
            vs[1].clone()
        };
        prop_assert_eq!(
            cone_order_check(&g, x, &y).unwrap().holds,
            reference_order(&g, x, &y, DEFAULT_GROUP_GUARD).unwrap()
        );
    }

    #[test]
    fn order_is_reflexive_and_transitive(g in square_family(3), x in vector(3), s1 in any::<u64>(), s2 in any::<u64>()) {
        let x = Vector::new(x.coords()[..g.dim()].to_vec());
        prop_assert!(cone_order_check(&g, &x, &x).unwrap().holds);
        let y = random_orbit_combination(&g, &x, &mut rand_chacha::ChaCha8Rng::seed_from_u64(s1)).unwrap();
        let z = random_orbit_combination(&g, &y, &mut rand_chacha::ChaCha8Rng::seed_from_u64(s2)).unwrap();
        prop_assert!(cone_order_check(&g, &x, &z).unwrap().holds);
    }

    #[test]
    fn mutual_order_means_same_orbit(g in square_family(3), x in vector(3), y in vector(3)) {
        let (x, y) = (Vector::new(x.coords()[..g.dim()].to_vec()), Vector::new(y.coords()[..g.dim()].to_vec()));
        if cone_order_check(&g, &x, &y).unwrap().holds && cone_order_check(&g, &y, &x).unwrap().holds {
            prop_assert_eq!(representative(&g, &x).unwrap().tilde_x, representative(&g, &y).unwrap().tilde_x);
        }
    }

    #[test]
    fn duality_is_sound((g, vs) in group_and_vectors(3, 3), seed in any::<u64>()) {
        let (x, z) = (&vs[0], &vs[2]);
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let y = if seed % 2 == 0 { random_orbit_combination(&g, x, &mut r).unwrap() } else { vs[1].clone() };
        let verdict = hull_membership(&g, x, &y).unwrap();
        if verdict.holds {
            prop_assert!(m_value(&g, z, &y).unwrap() <= m_value(&g, z, x).unwrap());
        } else if let Certificate::SeparatingFunctional { z, m_zy, m_zx } = &verdict.certificate {
            prop_assert!(m_zy > m_zx);
            prop_assert_eq!(m_value(&g, z, &y).unwrap(), m_zy.clone());
        } else {
            prop_assert!(false, "fail verdict without a separating functional");
        }
    }

    #[test]
    fn cone_order_bounds_support_values(g in square_family(3), x in vector(3), y in vector(3), z in vector(3)) {
        let n = g.dim();
        let rep = |v: &Vector| representative(&g, &Vector::new(v.coords()[..n].to_vec())).unwrap().tilde_x;
        let (x, y, z) = (rep(&x), rep(&y), rep(&z));
        let cs = fundamental_roots(&g).unwrap();
        if gmajor::dual_cone_membership(&cs, &(&x - &y)).unwrap().holds {
            prop_assert!(m_value(&g, &z, &y).unwrap() <= m_value(&g, &z, &x).unwrap());
        }
    }

    #[test]
    fn projector_is_idempotent_and_kills_lineality(g in group(4)) {
        let cs = fundamental_roots(&g).unwrap();
        let d = essential_decomposition(&cs);
        prop_assert_eq!(d.projector.mul(&d.projector), d.projector.clone());
        prop_assert_eq!(d.projector.transpose(), d.projector.clone());
        for b in &d.inessential_basis {
            prop_assert!(d.projector.apply(b).is_zero());
        }
        for a in &cs.roots {
            prop_assert_eq!(d.projector.apply(a), a.clone());
        }
    }

    #[test]
    fn refinement_through_subgroups(seed in any::<u64>(), x in vector(3), k in 0usize..3) {
        let t = match k {
            0 => ExtensionTriple::b_d_z2(3, QuotientVariant::Coordinate).unwrap(),
            1 => ExtensionTriple::b_z2n_s(3).unwrap(),
            _ => ExtensionTriple::new(
                GroupSpec::new(Family::DemihyperoctahedralD, 3).unwrap(),
                GroupSpec::new(Family::DemihyperoctahedralD, 3).unwrap(),
                GroupSpec::new(Family::Trivial, 3).unwrap(),
            ).unwrap(),
        };
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for sub in [t.n, t.h] {
            let y = random_orbit_combination(&sub, &x, &mut r).unwrap();
            prop_assert!(hull_membership(&t.g, &x, &y).unwrap().holds);
        }
    }
}

#[test]
fn group_axioms() {
    for g in Family::ALL.iter().flat_map(|&f| (1..=4).filter_map(move |n| GroupSpec::new(f, n).ok())) {
        let elements = enumerate_group(&g).unwrap();
        assert_eq!(elements.len() as u128, g.order(), "{g}");
        assert!(elements.iter().any(|e| e.is_identity()), "{g}");
        let set: std::collections::BTreeSet<String> = elements.iter().map(|e| e.to_string()).collect();
        assert_eq!(set.len(), elements.len(), "{g}: duplicates");
        for a in &elements {
            assert!(set.contains(&a.inverse().to_string()), "{g}");
            for b in elements.iter().take(24) {
                assert!(set.contains(&a.compose(b).unwrap().to_string()), "{g}");
            }
        }
    }
}
