use freeha_core::birkhoff::{
    birkhoff_roundtrip_check, join_irreducibles, kappa, kappa_downset, meet_irreducibles,
    to_explicit, DualLattice,
};
use freeha_core::poset::{all_labeled_posets, naturally_labeled_posets, Poset};
use freeha_core::powerset::{ji_formula_check, nucleus_from_set, set_from_nucleus, Nucleus};
use freeha_core::rooted::{
    build_rooted_powerset, root_characterization_check, rooted_count, rooted_ji_formula_check,
};
use freeha_core::ElemSet;

#[test]
fn roundtrip_on_small_posets() {
    for n in 0..=4 {
        for x in all_labeled_posets(n) {
            assert!(birkhoff_roundtrip_check(&x));
        }
    }
}

#[test]
fn kappa_contract() {
    for n in 1..=4 {
        for x in all_labeled_posets(n) {
            let (l, d) = to_explicit(&x).unwrap();
            let mi = meet_irreducibles(&l);
            for &p in &join_irreducibles(&l).elements {
                let k = kappa(&l, p).unwrap();
                assert!(!l.leq(p, k));
                assert!(mi.position(k).is_some());
                for a in 0..l.size() {
                    assert!(l.leq(p, a) || l.leq(a, k));
                }
                let point = (0..n).find(|&q| d.principal(q) == p).unwrap();
                assert_eq!(d.element(k), &kappa_downset(&x, point));
            }
        }
    }
}

/// Every decreasing self-map of `O(X)`, filtered by the nucleus laws.
fn all_nuclei(d: &DualLattice) -> Vec<Nucleus> {
    let n = d.len();
    let below: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| d.element(b).is_subset(d.element(a)))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let f = Nucleus::from_values((0..n).map(|a| below[a][choice[a]]).collect());
        if f.is_valid(d) {
            out.push(f);
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            choice[i] += 1;
            if choice[i] < below[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn nuclei_correspond_to_subsets() {
    for n in 0..=3 {
        for x in all_labeled_posets(n) {
            let d = DualLattice::new(x.clone()).unwrap();
            let nuclei = all_nuclei(&d);
            assert_eq!(nuclei.len(), 1 << n);
            let subsets: Vec<ElemSet> = (0..1u64 << n).map(|m| ElemSet::from_mask(n, m)).collect();
            for t in &subsets {
                let f = nucleus_from_set(&d, t).unwrap();
                assert!(nuclei.contains(&f));
                assert_eq!(&set_from_nucleus(&d, &f).unwrap(), t);
                assert!(ji_formula_check(&x, t).unwrap());
                for s in &subsets {
                    let g = nucleus_from_set(&d, s).unwrap();
                    assert_eq!(g.leq(&f, &d), s.is_subset(t));
                }
            }
            for f in &nuclei {
                assert_eq!(
                    &nucleus_from_set(&d, &set_from_nucleus(&d, f).unwrap()).unwrap(),
                    f
                );
            }
        }
    }
}

#[test]
fn rooted_counts_and_characterization() {
    for n in 0..=5 {
        // the count is invariant under relabeling
        for x in naturally_labeled_posets(n) {
            let brute = (0u64..1 << n)
                .filter(|&m| x.is_rooted(&ElemSet::from_mask(n, m)))
                .count();
            assert_eq!(rooted_count(&x), brute as u128);
        }
    }
    for n in 1..=3 {
        for x in all_labeled_posets(n) {
            let pr = build_rooted_powerset(&x, 1 << 10).unwrap();
            for t in 0..pr.size() {
                assert!(rooted_ji_formula_check(&pr, t));
                for p in 0..n {
                    assert!(root_characterization_check(&pr, t, p));
                }
            }
        }
    }
}

#[test]
fn chain_example() {
    let c = Poset::chain(2);
    assert_eq!(build_rooted_powerset(&c, 10).unwrap().size(), 3);
}
