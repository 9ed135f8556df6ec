//! Finite Birkhoff duality.
//!
//! A finite distributive lattice is carried in one of two ways:
//!
//! * [`DualLattice`]: elements are the downsets of a finite poset `X`, with
//!   meet and join as intersection and union. This is the only form that
//!   scales and the one every tower layer uses.
//! * [`ExplicitLattice`]: a full order table over all elements. It exists to
//!   cross-check the dual form on tiny instances.

use std::collections::HashMap;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::{MonotoneMap, Poset, PosetJson, SubPoset};

/// Upper bound on the number of downsets [`DualLattice::new`] will list.
pub const DEFAULT_ELEMENT_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone)]
pub struct ExplicitLattice {
    order: Poset,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl ExplicitLattice {
    /// Validates that `order` is a bounded distributive lattice and caches
    /// its join and meet tables.
    pub fn from_order(order: Poset) -> Result<ExplicitLattice> {
        let n = order.size();
        if n == 0 {
            return Err(Error::NotLattice("empty carrier".into()));
        }
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let ub = order.up_row(a).intersection(order.up_row(b));
                join[a * n + b] = ub
                    .iter()
                    .find(|&u| ub.is_subset(order.up_row(u)))
                    .ok_or_else(|| Error::NotLattice(format!("no join of {a} and {b}")))?;
                let lb = order.down_row(a).intersection(order.down_row(b));
                meet[a * n + b] = lb
                    .iter()
                    .find(|&l| lb.is_subset(order.down_row(l)))
                    .ok_or_else(|| Error::NotLattice(format!("no meet of {a} and {b}")))?;
            }
        }
        let bottom = (0..n)
            .find(|&x| order.up_row(x).is_full())
            .ok_or_else(|| Error::NotLattice("no bottom".into()))?;
        let top = (0..n)
            .find(|&x| order.down_row(x).is_full())
            .ok_or_else(|| Error::NotLattice("no top".into()))?;
        let lattice = ExplicitLattice {
            order,
            join,
            meet,
            bottom,
            top,
        };
        if !lattice.is_distributive() {
            return Err(Error::NotDistributive);
        }
        Ok(lattice)
    }

    pub fn from_pairs(size: usize, strict_pairs: &[(usize, usize)]) -> Result<ExplicitLattice> {
        Self::from_order(Poset::from_pairs(size, strict_pairs)?)
    }

    pub fn from_json(json: &PosetJson) -> Result<ExplicitLattice> {
        Self::from_order(Poset::from_json(json)?)
    }

    pub fn to_json(&self) -> PosetJson {
        self.order.to_json()
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> ExplicitLattice {
        Self::from_order(Poset::chain(n)).expect("chains are distributive")
    }

    fn is_distributive(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c))
                })
            })
        })
    }

    pub fn size(&self) -> usize {
        self.order.size()
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq(a, b)
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn is_join_irreducible(&self, x: usize) -> bool {
        x != self.bottom && self.join_all((0..self.size()).filter(|&y| self.order.lt(y, x))) != x
    }

    pub fn is_meet_irreducible(&self, x: usize) -> bool {
        x != self.top && self.meet_all((0..self.size()).filter(|&y| self.order.lt(x, y))) != x
    }
}

/// A subset of a lattice's elements together with the order they inherit.
#[derive(Debug, Clone)]
pub struct Irreducibles {
    pub elements: Vec<usize>,
    pub poset: Poset,
}

impl Irreducibles {
    fn new(lattice: &ExplicitLattice, elements: Vec<usize>) -> Irreducibles {
        let set = ElemSet::from_indices(lattice.size(), elements.iter().copied());
        let SubPoset { poset, embedding } = lattice.order.subposet(&set);
        debug_assert_eq!(embedding, elements);
        Irreducibles { elements, poset }
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.elements.iter().position(|&e| e == x)
    }
}

/// `J(L)` as a poset under the lattice order.
pub fn join_irreducibles(lattice: &ExplicitLattice) -> Irreducibles {
    let elems = (0..lattice.size())
        .filter(|&x| lattice.is_join_irreducible(x))
        .collect();
    Irreducibles::new(lattice, elems)
}

/// `M(L)` as a poset under the lattice order.
pub fn meet_irreducibles(lattice: &ExplicitLattice) -> Irreducibles {
    let elems = (0..lattice.size())
        .filter(|&x| lattice.is_meet_irreducible(x))
        .collect();
    Irreducibles::new(lattice, elems)
}

/// The co-splitting partner of a join-irreducible: `⋁{a | p ≰ a}`.
pub fn kappa(lattice: &ExplicitLattice, p: usize) -> Result<usize> {
    if p >= lattice.size() {
        return Err(Error::IndexRange {
            index: p,
            size: lattice.size(),
        });
    }
    if !lattice.is_join_irreducible(p) {
        return Err(Error::NotJoinIrreducible(p));
    }
    Ok(lattice.join_all((0..lattice.size()).filter(|&a| !lattice.leq(p, a))))
}

/// `κ(↓p)` in `O(X)`: the complement of `↑p`.
pub fn kappa_downset(x: &Poset, p: usize) -> ElemSet {
    x.up_row(p).complement()
}

/// Dual of the least quotient forcing `a ≤ b`: the subposet of points that
/// do not lie in `a` without lying in `b`.
pub fn quotient_by_inequality(x: &Poset, a: &ElemSet, b: &ElemSet) -> SubPoset {
    x.subposet(&a.difference(b).complement())
}

/// Dual poset of the free distributive lattice on `n` generators.
#[derive(Debug, Clone)]
pub struct FreeDlDual {
    /// Points are subsets `S ⊆ {0..n-1}`, indexed by bit encoding and ordered
    /// by reverse inclusion. Point `S` stands for the meet `⋀S`.
    pub poset: Poset,
    /// `generators[i]` is the downset `{S | i ∈ S}` of generator `i`.
    pub generators: Vec<ElemSet>,
}

pub fn free_dl_dual(n: usize) -> Result<FreeDlDual> {
    if n >= 63 || (1usize << n) > crate::poset::MAX_TABLE_POINTS {
        return Err(Error::size_bound(
            "free distributive lattice dual",
            1u128 << n.min(127),
            crate::poset::MAX_TABLE_POINTS as u128,
        ));
    }
    let size = 1usize << n;
    let down = (0..size)
        .map(|t| ElemSet::from_indices(size, (0..size).filter(|&s| s & t == t)))
        .collect();
    let poset = Poset::from_down_rows(down);
    let generators = (0..n)
        .map(|i| ElemSet::from_indices(size, (0..size).filter(|&s| s >> i & 1 == 1)))
        .collect();
    Ok(FreeDlDual { poset, generators })
}

/// The dual of a lattice homomorphism, as a map between join-irreducibles.
#[derive(Debug, Clone)]
pub struct HomDual {
    /// `J(E)` of the codomain lattice.
    pub source: Irreducibles,
    /// `J(D)` of the domain lattice.
    pub target: Irreducibles,
    /// Positions in `source.poset` to positions in `target.poset`.
    pub map: MonotoneMap,
}

/// Checks that `h` is a bounded lattice homomorphism.
pub fn check_hom(d: &ExplicitLattice, e: &ExplicitLattice, h: &[usize]) -> Result<()> {
    if h.len() != d.size() || h.iter().any(|&y| y >= e.size()) {
        return Err(Error::NotHomomorphism("map has the wrong shape".into()));
    }
    if h[d.bottom()] != e.bottom() || h[d.top()] != e.top() {
        return Err(Error::NotHomomorphism("bounds not preserved".into()));
    }
    for a in 0..d.size() {
        for b in 0..d.size() {
            if h[d.join(a, b)] != e.join(h[a], h[b]) {
                return Err(Error::NotHomomorphism(format!("join of {a},{b}")));
            }
            if h[d.meet(a, b)] != e.meet(h[a], h[b]) {
                return Err(Error::NotHomomorphism(format!("meet of {a},{b}")));
            }
        }
    }
    Ok(())
}

/// Restricts the lower adjoint `h♭(q) = ⋀{a | q ≤ h(a)}` to `J(E) → J(D)`.
pub fn dual_of_hom(d: &ExplicitLattice, e: &ExplicitLattice, h: &[usize]) -> Result<HomDual> {
    check_hom(d, e, h)?;
    let source = join_irreducibles(e);
    let target = join_irreducibles(d);
    let images = source
        .elements
        .iter()
        .map(|&q| {
            let adj = d.meet_all((0..d.size()).filter(|&a| e.leq(q, h[a])));
            target
                .position(adj)
                .expect("lower adjoint of a lattice homomorphism keeps join-irreducibles")
        })
        .collect();
    let map = MonotoneMap::new(&source.poset, &target.poset, images)?;
    Ok(HomDual {
        source,
        target,
        map,
    })
}

/// The lattice `O(X)` of downsets of a finite poset, listed in canonical
/// ascending order, with an index from downset to position.
#[derive(Debug, Clone)]
pub struct DualLattice {
    dual: Poset,
    elements: Vec<ElemSet>,
    index: HashMap<ElemSet, usize>,
}

impl DualLattice {
    pub fn new(dual: Poset) -> Result<DualLattice> {
        Self::with_limit(dual, DEFAULT_ELEMENT_LIMIT)
    }

    pub fn with_limit(dual: Poset, limit: usize) -> Result<DualLattice> {
        let elements = dual.downsets(limit)?;
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(DualLattice {
            dual,
            elements,
            index,
        })
    }

    pub fn dual(&self) -> &Poset {
        &self.dual
    }

    pub fn elements(&self) -> &[ElemSet] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, s: &ElemSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn element(&self, i: usize) -> &ElemSet {
        &self.elements[i]
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].union(&self.elements[b])]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].intersection(&self.elements[b])]
    }

    /// Position of `↓x`.
    pub fn principal(&self, x: usize) -> usize {
        self.index[self.dual.down_row(x)]
    }

    pub fn to_explicit(&self) -> ExplicitLattice {
        let order = Poset::inclusion(&self.elements).expect("downset family fits the table");
        let n = self.len();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] = self.join(a, b);
                meet[a * n + b] = self.meet(a, b);
            }
        }
        ExplicitLattice {
            order,
            join,
            meet,
            bottom: self.bottom(),
            top: self.top(),
        }
    }
}

/// The downset lattice of `x` in explicit form, element `i` being the
/// `i`-th downset in canonical order.
pub fn to_explicit(x: &Poset) -> Result<(ExplicitLattice, DualLattice)> {
    let dual = DualLattice::new(x.clone())?;
    Ok((dual.to_explicit(), dual))
}

/// Checks `J(O(X)) ≅ X` via `x ↦ ↓x`: the join-irreducibles of the downset
/// lattice are exactly the principal downsets, ordered as `X` is.
pub fn birkhoff_roundtrip_check(x: &Poset) -> bool {
    let Ok((lattice, dual)) = to_explicit(x) else {
        return false;
    };
    let ji = join_irreducibles(&lattice);
    let principal: Vec<usize> = (0..x.size()).map(|p| dual.principal(p)).collect();
    let mut sorted = principal.clone();
    sorted.sort_unstable();
    if sorted != ji.elements {
        return false;
    }
    (0..x.size())
        .all(|p| (0..x.size()).all(|q| lattice.leq(principal[p], principal[q]) == x.leq(p, q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{all_labeled_posets, naturally_labeled_posets};

    fn diamond() -> ExplicitLattice {
        // 0 < a=1, b=2 < 3
        ExplicitLattice::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn rejects_non_distributive() {
        // M3
        let m3 = ExplicitLattice::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]);
        assert!(matches!(m3, Err(Error::NotDistributive)));
        // N5
        let n5 = ExplicitLattice::from_pairs(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]);
        assert!(matches!(n5, Err(Error::NotDistributive)));
        let not_lattice = ExplicitLattice::from_pairs(2, &[]);
        assert!(matches!(not_lattice, Err(Error::NotLattice(_))));
    }

    #[test]
    fn join_irreducible_examples() {
        let c3 = ExplicitLattice::chain(3);
        let ji = join_irreducibles(&c3);
        assert_eq!(ji.elements, vec![1, 2]);
        assert_eq!(ji.poset, Poset::chain(2));
        assert_eq!(
            join_irreducibles(&ExplicitLattice::chain(2)).elements,
            vec![1]
        );
        let d = join_irreducibles(&diamond());
        assert_eq!(d.elements, vec![1, 2]);
        assert_eq!(d.poset, Poset::antichain(2));
    }

    #[test]
    fn meet_irreducible_examples() {
        assert_eq!(
            meet_irreducibles(&ExplicitLattice::chain(3)).elements,
            vec![0, 1]
        );
        assert_eq!(
            meet_irreducibles(&ExplicitLattice::chain(2)).elements,
            vec![0]
        );
        assert_eq!(meet_irreducibles(&diamond()).elements, vec![1, 2]);
    }

    #[test]
    fn kappa_examples() {
        let c3 = ExplicitLattice::chain(3);
        assert_eq!(kappa(&c3, 1), Ok(0));
        assert_eq!(kappa(&c3, 2), Ok(1));
        assert_eq!(kappa(&ExplicitLattice::chain(2), 1), Ok(0));
        assert_eq!(kappa(&c3, 0), Err(Error::NotJoinIrreducible(0)));
        assert_eq!(kappa(&diamond(), 1), Ok(2));
    }

    #[test]
    fn kappa_downset_examples() {
        let c = Poset::chain(2);
        assert_eq!(kappa_downset(&c, 1), ElemSet::from_indices(2, [0]));
        let a = Poset::antichain(2);
        assert_eq!(kappa_downset(&a, 0), ElemSet::from_indices(2, [1]));
        assert!(kappa_downset(&Poset::chain(1), 0).is_empty());
    }

    #[test]
    fn quotient_examples() {
        let c = Poset::chain(2);
        let lo = c.principal_down(0);
        let hi = c.principal_down(1);
        assert_eq!(quotient_by_inequality(&c, &lo, &hi).poset, c);
        let q = quotient_by_inequality(&c, &hi, &lo);
        assert_eq!(q.embedding, vec![0]);
        let collapse = quotient_by_inequality(&c, &c.carrier(), &c.empty_set());
        assert_eq!(collapse.poset.size(), 0);
    }

    #[test]
    fn quotient_is_largest_subposet_forcing_inequality() {
        for x in all_labeled_posets(3) {
            let downs = x.downsets(usize::MAX).unwrap();
            for a in &downs {
                for b in &downs {
                    let q = quotient_by_inequality(&x, a, b);
                    let y = ElemSet::from_indices(x.size(), q.embedding.iter().copied());
                    assert!(a.intersection(&y).is_subset(&b.intersection(&y)));
                    for mask in 0u64..(1 << x.size()) {
                        let z = ElemSet::from_mask(x.size(), mask);
                        if a.intersection(&z).is_subset(&b.intersection(&z)) {
                            assert!(z.is_subset(&y));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn free_dl_dual_examples() {
        let f1 = free_dl_dual(1).unwrap();
        // point 1 = {x} sits below point 0 = ∅
        assert_eq!(f1.poset, Poset::from_pairs(2, &[(1, 0)]).unwrap());
        assert_eq!(f1.generators, vec![ElemSet::from_indices(2, [1])]);

        let f0 = free_dl_dual(0).unwrap();
        assert_eq!(f0.poset.size(), 1);
        assert_eq!(DualLattice::new(f0.poset).unwrap().len(), 2);

        let f2 = free_dl_dual(2).unwrap();
        let p = &f2.poset;
        assert_eq!(p.size(), 4);
        assert!(p.up_row(0b11).is_full());
        assert!(p.down_row(0b00).is_full());
        assert!(!p.leq(0b01, 0b10) && !p.leq(0b10, 0b01));
    }

    #[test]
    fn free_dl_dual_matches_meets_of_generators() {
        // ⋀S ≤ x_i iff i ∈ S, in the explicit lattice O(X)
        for n in 0..=3 {
            let f = free_dl_dual(n).unwrap();
            let dual = DualLattice::new(f.poset.clone()).unwrap();
            for s in 0..(1usize << n) {
                for i in 0..n {
                    let below = dual.element(dual.principal(s)).is_subset(&f.generators[i]);
                    assert_eq!(below, s >> i & 1 == 1);
                }
            }
        }
    }

    #[test]
    fn dual_of_hom_examples() {
        let d = ExplicitLattice::chain(3);
        let id: Vec<usize> = (0..3).collect();
        let dual = dual_of_hom(&d, &d, &id).unwrap();
        assert_eq!(dual.map.images(), &[0, 1]);

        let two = ExplicitLattice::chain(2);
        let dual = dual_of_hom(&two, &d, &[0, 2]).unwrap();
        // both join-irreducibles of the 3-chain go to the top of {0,1}
        assert_eq!(dual.map.images(), &[0, 0]);
        assert_eq!(dual.target.elements, vec![1]);

        assert!(matches!(
            dual_of_hom(&two, &d, &[0, 1]),
            Err(Error::NotHomomorphism(_))
        ));
    }

    fn all_homs(d: &ExplicitLattice, e: &ExplicitLattice) -> Vec<Vec<usize>> {
        let n = d.size();
        let m = e.size();
        let mut out = Vec::new();
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut h = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                h.push(c % m);
                c /= m;
            }
            if check_hom(d, e, &h).is_ok() {
                out.push(h);
            }
        }
        out
    }

    #[test]
    fn injective_and_surjective_homs_dualize() {
        let lattices: Vec<ExplicitLattice> = (0..=4)
            .flat_map(naturally_labeled_posets)
            .filter_map(|x| to_explicit(&x).ok().map(|(l, _)| l))
            .filter(|l| l.size() <= 5)
            .collect();
        let mut checked = 0;
        for d in &lattices {
            for e in &lattices {
                for h in all_homs(d, e) {
                    let dual = dual_of_hom(d, e, &h).unwrap();
                    let injective = {
                        let mut v = h.clone();
                        v.sort_unstable();
                        v.dedup();
                        v.len() == h.len()
                    };
                    let surjective = (0..e.size()).all(|y| h.contains(&y));
                    assert_eq!(injective, dual.map.is_surjective());
                    let emb = dual.map.is_injective()
                        && (0..dual.source.poset.size()).all(|p| {
                            (0..dual.source.poset.size()).all(|q| {
                                dual.source.poset.leq(p, q)
                                    == dual.target.poset.leq(dual.map.apply(p), dual.map.apply(q))
                            })
                        });
                    assert_eq!(surjective, emb);
                    checked += 1;
                }
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn to_explicit_examples() {
        let (l, _) = to_explicit(&Poset::chain(2)).unwrap();
        assert_eq!(l.size(), 3);
        assert_eq!(join_irreducibles(&l).poset, Poset::chain(2));
        let (l, _) = to_explicit(&Poset::antichain(2)).unwrap();
        assert_eq!(l.size(), 4);
        assert_eq!(meet_irreducibles(&l).elements.len(), 2);
        let (l, _) = to_explicit(&Poset::antichain(0)).unwrap();
        assert_eq!(l.size(), 1);
        for x in [Poset::chain(2), Poset::antichain(2), Poset::antichain(0)] {
            assert!(birkhoff_roundtrip_check(&x));
        }
    }

    #[test]
    fn lattice_json() {
        let json: PosetJson = serde_json::from_str(r#"{"size":3,"leq":[[0,1],[1,2]]}"#).unwrap();
        let l = ExplicitLattice::from_json(&json).unwrap();
        assert_eq!(l.top(), 2);
        assert_eq!(l.join(0, 1), 1);
    }
}
