//! The full powerset `(P(X), ⊆)`: the dual of the free weak-implication
//! functor applied to `O(X)`.
//!
//! A point of the powerset poset is the bit encoding of the subset it
//! stands for, so `T ⊆ S` is a mask test. The arrow element `a → b` lives
//! in `O(P(X))` as `{T | T ∩ a ⊆ b}`.

use crate::birkhoff::{kappa_downset, DualLattice};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::{MonotoneMap, Poset};

pub const DEFAULT_POWERSET_BOUND: usize = 20;

#[derive(Debug, Clone)]
pub struct PowersetPoset {
    pub base: Poset,
    pub poset: Poset,
}

impl PowersetPoset {
    pub fn decode(&self, point: usize) -> ElemSet {
        ElemSet::from_mask(self.base.size(), point as u64)
    }

    pub fn encode(&self, s: &ElemSet) -> usize {
        s.to_mask().expect("powerset base fits a mask") as usize
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }
}

fn mask_of(s: &ElemSet) -> Result<u64> {
    s.to_mask()
        .ok_or_else(|| Error::size_bound("powerset mask", s.arity() as u128, 64))
}

pub fn build_powerset(x: &Poset, bound: usize) -> Result<PowersetPoset> {
    let n = x.size();
    if n > bound || n >= 63 {
        return Err(Error::size_bound("powerset base", n as u128, bound as u128));
    }
    let size = 1usize << n;
    if size > crate::poset::MAX_TABLE_POINTS {
        return Err(Error::size_bound(
            "powerset poset",
            size as u128,
            crate::poset::MAX_TABLE_POINTS as u128,
        ));
    }
    let down = (0..size)
        .map(|t| {
            // all submasks of t
            let mut row = ElemSet::empty(size);
            let mut s = t;
            loop {
                row.insert(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & t;
            }
            row
        })
        .collect();
    Ok(PowersetPoset {
        base: x.clone(),
        poset: Poset::from_down_rows(down),
    })
}

/// `{T ⊆ X | T ∩ a ⊆ b}` as a downset of `(P(X), ⊆)`.
pub fn arrow_downset(x: &Poset, a: &ElemSet, b: &ElemSet) -> Result<ElemSet> {
    let n = x.size();
    if n >= 63 || (1usize << n) > crate::poset::MAX_TABLE_POINTS {
        return Err(Error::size_bound("powerset base", n as u128, 20));
    }
    let bad = mask_of(a)? & !mask_of(b)?;
    let size = 1usize << n;
    Ok(ElemSet::from_indices(
        size,
        (0..size).filter(|&t| t as u64 & bad == 0),
    ))
}

/// A self-map of `O(X)`, given by the position of each image in the
/// lattice's canonical element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Nucleus {
    values: Vec<usize>,
}

impl Nucleus {
    pub fn from_values(values: Vec<usize>) -> Nucleus {
        Nucleus { values }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.values[a]
    }

    /// Join-preserving (with `f(0) = 0`), idempotent and decreasing.
    pub fn validate(&self, d: &DualLattice) -> Result<()> {
        let n = d.len();
        if self.values.len() != n || self.values.iter().any(|&v| v >= n) {
            return Err(Error::NotNucleus("table does not match the lattice".into()));
        }
        if self.apply(d.bottom()) != d.bottom() {
            return Err(Error::NotNucleus("f(0) != 0".into()));
        }
        for a in 0..n {
            if !d.element(self.apply(a)).is_subset(d.element(a)) {
                return Err(Error::NotNucleus(format!("f(a) not below a at {a}")));
            }
            if self.apply(self.apply(a)) != self.apply(a) {
                return Err(Error::NotNucleus(format!("not idempotent at {a}")));
            }
            for b in 0..n {
                if self.apply(d.join(a, b)) != d.join(self.apply(a), self.apply(b)) {
                    return Err(Error::NotNucleus(format!("join of {a},{b} not preserved")));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, d: &DualLattice) -> bool {
        self.validate(d).is_ok()
    }

    /// Pointwise order.
    pub fn leq(&self, other: &Nucleus, d: &DualLattice) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(&a, &b)| d.element(a).is_subset(d.element(b)))
    }
}

/// `f_T(a) = ⋁{p ∈ T | p ≤ a}`, which in `O(X)` is `↓(T ∩ a)`.
pub fn nucleus_from_set(d: &DualLattice, t: &ElemSet) -> Result<Nucleus> {
    d.dual().check_set(t)?;
    let values = d
        .elements()
        .iter()
        .map(|a| {
            let img = d.dual().down_closure(&t.intersection(a));
            d.index_of(&img).expect("down-closure is a downset")
        })
        .collect();
    Ok(Nucleus { values })
}

/// The join-irreducible fixpoints `{p | f(↓p) = ↓p}`.
pub fn set_from_nucleus(d: &DualLattice, f: &Nucleus) -> Result<ElemSet> {
    f.validate(d)?;
    let x = d.dual();
    Ok(ElemSet::from_indices(
        x.size(),
        (0..x.size()).filter(|&p| {
            let i = d.principal(p);
            f.apply(i) == i
        }),
    ))
}

/// The powerset functor on maps: `T ↦ f[T]`, as a map of encoded points.
pub fn h_on_map(f: &MonotoneMap) -> Result<MonotoneMap> {
    let (n, m) = (f.domain_size(), f.codomain_size());
    if n >= 63
        || m >= 63
        || (1usize << n) > crate::poset::MAX_TABLE_POINTS
        || (1usize << m) > crate::poset::MAX_TABLE_POINTS
    {
        return Err(Error::size_bound("powerset map", n.max(m) as u128, 20));
    }
    let images = (0..1usize << n)
        .map(|t| {
            (0..n)
                .filter(|&x| t >> x & 1 == 1)
                .fold(0usize, |acc, x| acc | 1 << f.apply(x))
        })
        .collect();
    Ok(MonotoneMap::from_images_unchecked(images, 1 << m))
}

/// Checks that `⋂_{q ∉ T} (↓q → κ(q))` is the principal downset `↓T` of
/// `(P(X), ⊆)`.
pub fn ji_formula_check(x: &Poset, t: &ElemSet) -> Result<bool> {
    let n = x.size();
    let size = 1usize << n;
    let mut acc = ElemSet::full(size);
    for q in (0..n).filter(|&q| !t.contains(q)) {
        acc.intersect_with(&arrow_downset(x, x.down_row(q), &kappa_downset(x, q))?);
    }
    let tm = mask_of(t)? as usize;
    let principal = ElemSet::from_indices(size, (0..size).filter(|&s| s & !tm == 0));
    Ok(acc == principal)
}
