//! Property tests for the group kernel, signature arithmetic, and the
//! abelianization machinery.

use proptest::prelude::*;

use genus_core::{
    bundled_catalogs, rh_genus, signature_abelianization, FiniteGroup, Permutation, Rational,
    Signature,
};

fn arb_perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just(())
        .prop_perturb(move |_, mut rng| {
            let mut images: Vec<u16> = (0..degree as u16).collect();
            for i in (1..degree).rev() {
                let j = (rng.next_u32() as usize) % (i + 1);
                images.swap(i, j);
            }
            Permutation::from_images(images).unwrap()
        })
        .no_shrink()
}

proptest! {
    #[test]
    fn composition_associative(
        p in arb_perm(9), q in arb_perm(9), r in arb_perm(9)
    ) {
        let left = p.compose(&q).unwrap().compose(&r).unwrap();
        let right = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_law(p in arb_perm(11)) {
        prop_assert!(p.inverse().compose(&p).unwrap().is_identity());
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn order_annihilates(p in arb_perm(8)) {
        let k = p.order();
        let mut acc = Permutation::identity(8);
        for _ in 0..k {
            acc = acc.compose(&p).unwrap();
        }
        prop_assert!(acc.is_identity());
        prop_assert!(k >= 1);
    }

    #[test]
    fn cycle_string_round_trips(p in arb_perm(12)) {
        let s = p.to_cycle_string();
        prop_assert_eq!(Permutation::parse_cycles(&s, 12).unwrap(), p);
    }

    #[test]
    fn signature_torsion_order_matches_snf_free_formula(
        periods in proptest::collection::vec(2u64..=13, 3..=6)
    ) {
        // for g0 = 0 the torsion order of the signature abelianization
        // is (Π m_i) / lcm(m_i)
        let sig = Signature::new(0, periods.clone()).unwrap();
        let ab = signature_abelianization(&sig);
        let prod: u64 = periods.iter().product();
        let lcm = periods.iter().fold(1u64, |l, &p| num_integer::lcm(l, p));
        prop_assert_eq!(ab.torsion.torsion_order(), prod / lcm);
        // divisibility chain
        for w in ab.torsion.factors.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn rh_genus_scales_linearly_in_order(
        periods in proptest::collection::vec(2u64..=12, 3..=5),
        n in 1u64..=200,
    ) {
        // g(X) - 1 is linear in |G| for a fixed signature
        let sig = Signature::new(0, periods).unwrap();
        let one = Rational::from_integer(1);
        let g1 = rh_genus(&sig, n) - one;
        let g2 = rh_genus(&sig, 2 * n) - one;
        prop_assert_eq!(g2, g1 * Rational::from_integer(2));
    }
}

#[test]
fn catalog_groups_satisfy_group_invariants() {
    let catalog = bundled_catalogs::genus2();
    for rec in catalog.records.iter().filter(|r| r.id.order <= 24) {
        let g = rec.realize().unwrap();
        // class partition and Lagrange
        let total: usize = g.classes().iter().map(|c| c.members.len()).sum();
        assert_eq!(total, g.order(), "{}", rec.id);
        for c in g.classes() {
            assert_eq!(g.order() % c.members.len(), 0, "{}", rec.id);
            for &m in &c.members {
                assert_eq!(g.element_order(m), c.element_order, "{}", rec.id);
            }
        }
        assert_eq!(g.class_of(FiniteGroup::IDENTITY).members.len(), 1);
        // order_index partitions and keys divide |G|
        let mut seen = 0usize;
        for (&o, &count) in g.element_order_multiset().iter() {
            assert_eq!(g.order() as u64 % o, 0, "{}", rec.id);
            seen += count;
        }
        assert_eq!(seen, g.order());
        // abelianization consistency
        let inv = g.abelian_invariants();
        let derived = g.derived_subgroup_ids();
        assert_eq!(
            inv.torsion_order() as usize * derived.len(),
            g.order(),
            "{}",
            rec.id
        );
        for w in inv.factors.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }
}

#[test]
fn normal_closure_is_normal_and_contains_seed() {
    let catalog = bundled_catalogs::genus2();
    for rec in catalog.records.iter().filter(|r| r.id.order <= 20) {
        let g = rec.realize().unwrap();
        // seed: one representative of each order-2 class, if any
        let seed = g.class_representatives_of_order(2);
        if seed.is_empty() {
            continue;
        }
        let closure = g.normal_closure_ids(&seed);
        let member: Vec<bool> = {
            let mut m = vec![false; g.order()];
            for &x in &closure {
                m[x as usize] = true;
            }
            m
        };
        for &s in &seed {
            assert!(member[s as usize]);
        }
        for &x in &closure {
            for c in 0..g.order() as u32 {
                assert!(member[g.conjugate(x, c) as usize], "{}", rec.id);
            }
        }
    }
}

#[test]
fn genus_zero_family_against_catalog_names() {
    // every C_n and D_2n representation up to order 42 is recognized
    let catalog = bundled_catalogs::genus2();
    for rec in &catalog.records {
        if rec.id.order > 42 {
            continue;
        }
        let name = rec.name.as_str();
        let structural = name.starts_with('C') && !name.contains('x')
            || name.starts_with('D') && !name.contains("ic")
            || name == "C2xC2"
            || matches!(name, "A4" | "S4" | "A5");
        let g = rec.realize().unwrap();
        assert_eq!(
            g.recognize_genus_zero(),
            structural,
            "{} ({})",
            rec.id,
            rec.name
        );
    }
}
