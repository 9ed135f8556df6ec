//! Rooted subsets `(P_r(X), ⊆)` and the root map `P_r(X) → X`.

use std::collections::HashMap;

use crate::birkhoff::kappa_downset;
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::{MonotoneMap, Poset};

/// Default cap on the number of points of a rooted powerset.
pub const DEFAULT_ROOTED_CAP: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct RootedPowersetPoset {
    pub base: Poset,
    pub poset: Poset,
    sets: Vec<ElemSet>,
    roots: Vec<usize>,
    index: HashMap<ElemSet, usize>,
}

/// `Σ_x 2^(|↓x|-1)`, saturating.
pub fn rooted_count(x: &Poset) -> u128 {
    (0..x.size())
        .map(|p| {
            let k = x.down_row(p).len() - 1;
            if k >= 127 {
                u128::MAX
            } else {
                1u128 << k
            }
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

impl RootedPowersetPoset {
    /// Builds the inclusion order on a family of rooted subsets of `base`.
    /// The family is sorted into canonical order first.
    pub fn from_sets(base: &Poset, mut sets: Vec<ElemSet>) -> Result<RootedPowersetPoset> {
        sets.sort();
        sets.dedup();
        let roots = sets
            .iter()
            .map(|s| base.root_of(s))
            .collect::<Result<Vec<_>>>()?;
        let poset = Poset::inclusion(&sets)?;
        let index = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(RootedPowersetPoset {
            base: base.clone(),
            poset,
            sets,
            roots,
            index,
        })
    }

    pub fn size(&self) -> usize {
        self.sets.len()
    }

    pub fn decode(&self, point: usize) -> &ElemSet {
        &self.sets[point]
    }

    pub fn sets(&self) -> &[ElemSet] {
        &self.sets
    }

    pub fn root(&self, point: usize) -> usize {
        self.roots[point]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn index_of(&self, s: &ElemSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// The root map as a monotone map `P_r(X) → X`.
    pub fn root_map(&self) -> MonotoneMap {
        MonotoneMap::from_images_unchecked(self.roots.clone(), self.base.size())
    }
}

/// All rooted subsets with root `x`: `{x} ∪ S` for `S ⊆ ↓x ∖ {x}`.
pub(crate) fn rooted_at(x: &Poset, root: usize) -> Vec<ElemSet> {
    let mut below = x.down_row(root).clone();
    below.remove(root);
    let below = below.to_vec();
    let k = below.len();
    assert!(k < 64, "rooted enumeration below a point of height {k}");
    (0u64..(1u64 << k))
        .map(|mask| {
            let mut s = ElemSet::singleton(x.size(), root);
            for (bit, &p) in below.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    s.insert(p);
                }
            }
            s
        })
        .collect()
}

pub fn build_rooted_powerset(x: &Poset, cap: usize) -> Result<RootedPowersetPoset> {
    let count = rooted_count(x);
    if count > cap as u128 {
        return Err(Error::size_bound("rooted powerset", count, cap as u128));
    }
    let sets = (0..x.size()).flat_map(|r| rooted_at(x, r)).collect();
    RootedPowersetPoset::from_sets(x, sets)
}

/// `{T rooted | T ∩ a ⊆ b}` as a downset of `P_r(X)`.
pub fn arrow_downset_r(pr: &RootedPowersetPoset, a: &ElemSet, b: &ElemSet) -> ElemSet {
    let bad = a.difference(b);
    ElemSet::from_indices(
        pr.size(),
        (0..pr.size()).filter(|&i| !pr.sets[i].intersects(&bad)),
    )
}

/// The rooted-powerset functor on maps: `T ↦ f[T]`.
pub fn k_on_map(
    f: &MonotoneMap,
    from: &RootedPowersetPoset,
    to: &RootedPowersetPoset,
) -> Result<MonotoneMap> {
    if f.domain_size() != from.base.size() || f.codomain_size() != to.base.size() {
        return Err(Error::InvalidInput(
            "map does not match the rooted powersets".into(),
        ));
    }
    let images = from
        .sets
        .iter()
        .map(|t| {
            let img = f.forward_image(t);
            to.index_of(&img)
                .ok_or_else(|| Error::InvalidInput("image of a rooted set is not listed".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonotoneMap::from_images_unchecked(images, to.size()))
}

/// `root(T) = x` iff `T ⊆ ↓x` and `T ⊄ κ(x)`; returns whether both sides agree.
pub fn root_characterization_check(pr: &RootedPowersetPoset, t: usize, x: usize) -> bool {
    let set = &pr.sets[t];
    let lhs = pr.roots[t] == x;
    let rhs = set.is_subset(pr.base.down_row(x)) && !set.is_subset(&kappa_downset(&pr.base, x));
    lhs == rhs
}

/// For `T` rooted at `x` with `T' = T ∖ {x}`, checks
/// `↓T = (1 → ↓x) ∩ ⋂_{q < x, q ∉ T'} (↓q → κ(q))` inside `O(P_r(X))`.
pub fn rooted_ji_formula_check(pr: &RootedPowersetPoset, t: usize) -> bool {
    let x = &pr.base;
    let root = pr.roots[t];
    let set = &pr.sets[t];
    let mut acc = arrow_downset_r(pr, &x.carrier(), x.down_row(root));
    for q in x
        .down_row(root)
        .iter()
        .filter(|&q| q != root && !set.contains(q))
    {
        acc.intersect_with(&arrow_downset_r(pr, x.down_row(q), &kappa_downset(x, q)));
    }
    acc == *pr.poset.down_row(t)
}
