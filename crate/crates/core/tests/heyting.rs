mod common;

use freeha_core::heyting::{build_heyting_tower_with, reference_next_layer};
use freeha_core::poset::MonotoneMap;
use freeha_core::rooted::{build_rooted_powerset, root_characterization_check};
use freeha_core::{build_heyting_tower, g_condition, GradedTower, HeytingOptions};

#[test]
fn sizes_match_reference_snapshot() {
    for rec in common::layer_sizes()
        .into_iter()
        .filter(|r| r.variety == "ha")
    {
        let depth = rec.sizes.len() - 1;
        let t = build_heyting_tower(rec.gens, depth).unwrap();
        assert_eq!(t.sizes(), rec.sizes);
        for k in 1..depth {
            let reference = reference_next_layer(&t.layers()[k], 1 << 20).unwrap();
            assert_eq!(t.layers()[k + 1].rooted_sets().unwrap(), &reference[..]);
        }
    }
}

#[test]
fn next_layer_of_two_generators_is_over_cap() {
    let t = build_heyting_tower(2, 3);
    assert!(matches!(t, Err(freeha_core::Error::SizeBound { .. })));
}

#[test]
fn structural_validators() {
    for (n, depth) in [(1, 6), (2, 2)] {
        let t = build_heyting_tower(n, depth).unwrap();
        for level in 1..=depth {
            assert!(t.star_check(level).unwrap());
            assert!(t.root_surjective(level).unwrap());
            let l = t.layers();
            MonotoneMap::new(
                &l[level].poset,
                &l[level - 1].poset,
                t.roots(level).unwrap().to_vec(),
            )
            .unwrap();
            let x = &l[level];
            for u in 0..x.size() {
                assert!(g_condition(x, &x.poset.principal_down(u)).unwrap());
            }
        }
    }
}

#[test]
fn layer_one_is_the_full_rooted_powerset() {
    for n in 0..=2 {
        let t = build_heyting_tower(n, 1).unwrap();
        let pr = build_rooted_powerset(&t.layers()[0].poset, 1 << 10).unwrap();
        assert_eq!(t.layers()[1].rooted_sets().unwrap(), pr.sets());
        for s in 0..pr.size() {
            for x in 0..t.layers()[0].size() {
                assert!(root_characterization_check(&pr, s, x));
            }
        }
    }
}

#[test]
fn heyting_laws_exhaustive_n1() {
    let t = build_heyting_tower(1, 3).unwrap();
    for k in 0..=2 {
        let x = &t.layers()[k].poset;
        let ds = x.downsets(1 << 12).unwrap();
        let one = x.carrier();
        let lifted: Vec<_> = ds.iter().map(|u| t.lift_h(k, u).unwrap()).collect();
        for (i, a) in ds.iter().enumerate() {
            assert_eq!(lifted[i], t.imp_h(k, &one, a).unwrap());
            for (j, b) in ds.iter().enumerate() {
                assert_eq!(lifted[i] == lifted[j], i == j);
                let ab = t.imp_h(k, a, b).unwrap();
                assert!(lifted[j].is_subset(&ab));
                assert!(lifted[i].intersection(&ab).is_subset(&lifted[j]));
            }
        }
    }
}

#[test]
fn axiom9_at_every_inner_layer() {
    let t = build_heyting_tower(1, 6).unwrap();
    for k in 1..6 {
        assert!(t.axiom9_check(k).unwrap());
    }
    let t = build_heyting_tower(2, 2).unwrap();
    assert!(t.axiom9_check(1).unwrap());
}

#[test]
fn unfiltered_layer_breaks_axiom9() {
    let opts = HeytingOptions {
        g_filter: false,
        ..HeytingOptions::default()
    };
    let t = build_heyting_tower_with(1, 2, opts).unwrap();
    assert_eq!(t.sizes(), vec![2, 3, 6]);
    assert!(!t.axiom9_check(1).unwrap());
    // u = the generator (middle of the three-element lattice), b = 0
    let u = t.generator(0, 0).unwrap();
    let zero = t.bottom(0).unwrap();
    let lhs = t.lift_h(1, &t.imp_h(0, &u, &zero).unwrap()).unwrap();
    let rhs = t
        .imp_h(1, &t.lift_h(0, &u).unwrap(), &t.lift_h(0, &zero).unwrap())
        .unwrap();
    assert_ne!(lhs, rhs);
}
