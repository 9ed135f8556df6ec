//! Layered dual towers and graded evaluation.
//!
//! Layer 0 of every tower is the dual of the free distributive lattice on
//! the generators. For the weak-Heyting variety layer `k+1` is
//! `X0 × P(Xk)`, for pre-Heyting it is `X0 × P_r(Xk)`; the Heyting tower
//! lives in [`crate::heyting`]. Lattice elements at layer `k` are downsets
//! of `Xk`, and `a → b` for `a, b` at layer `k` is a downset of `X(k+1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::birkhoff::free_dl_dual;
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::poset::{MonotoneMap, Poset};
use crate::powerset::{arrow_downset, build_powerset, PowersetPoset};
use crate::rooted::{arrow_downset_r, build_rooted_powerset, rooted_count, RootedPowersetPoset};

/// Default cap on the number of points in a single layer.
pub const DEFAULT_LAYER_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variety {
    Wha,
    Pha,
    Ha,
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variety::Wha => "wha",
            Variety::Pha => "pha",
            Variety::Ha => "ha",
        })
    }
}

impl FromStr for Variety {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variety> {
        match s {
            "wha" => Ok(Variety::Wha),
            "pha" => Ok(Variety::Pha),
            "ha" => Ok(Variety::Ha),
            _ => Err(Error::InvalidInput(format!("unknown variety {s:?}"))),
        }
    }
}

/// The second factor of a product layer.
#[derive(Debug, Clone)]
pub enum Family {
    Powerset(PowersetPoset),
    Rooted(RootedPowersetPoset),
}

impl Family {
    pub fn size(&self) -> usize {
        match self {
            Family::Powerset(p) => p.size(),
            Family::Rooted(r) => r.size(),
        }
    }

    pub fn decode(&self, j: usize) -> ElemSet {
        match self {
            Family::Powerset(p) => p.decode(j),
            Family::Rooted(r) => r.decode(j).clone(),
        }
    }

    pub fn index_of(&self, s: &ElemSet) -> Option<usize> {
        match self {
            Family::Powerset(p) => s.to_mask().map(|m| m as usize).filter(|&m| m < p.size()),
            Family::Rooted(r) => r.index_of(s),
        }
    }

    fn arrow(&self, a: &ElemSet, b: &ElemSet) -> Result<ElemSet> {
        match self {
            Family::Powerset(p) => arrow_downset(&p.base, a, b),
            Family::Rooted(r) => Ok(arrow_downset_r(r, a, b)),
        }
    }
}

#[derive(Debug, Clone)]
pub enum LayerKind {
    /// Point `S` is the bit encoding of a set of generators.
    Generators { gens: usize },
    /// Point `x0 * |family| + j` is the pair `(x0, family[j])`.
    Product { base_size: usize, family: Family },
    /// Point `i` is the rooted set `sets[i]` over the previous layer.
    Rooted {
        sets: Vec<ElemSet>,
        roots: Vec<usize>,
    },
}

/// Where a point of a layer comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointDecode {
    /// The meet of these generators.
    Meet(Vec<usize>),
    /// A base point of layer 0 and a set of points of the previous layer.
    Pair { base: usize, set: Vec<usize> },
    /// A rooted set of points of the previous layer.
    Rooted { set: Vec<usize>, root: usize },
}

#[derive(Debug, Clone)]
pub struct TowerLayer {
    pub poset: Poset,
    pub kind: LayerKind,
}

impl TowerLayer {
    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn decode(&self, p: usize) -> PointDecode {
        match &self.kind {
            LayerKind::Generators { gens } => {
                PointDecode::Meet((0..*gens).filter(|&i| p >> i & 1 == 1).collect())
            }
            LayerKind::Product { family, .. } => {
                let m = family.size();
                PointDecode::Pair {
                    base: p / m,
                    set: family.decode(p % m).to_vec(),
                }
            }
            LayerKind::Rooted { sets, roots } => PointDecode::Rooted {
                set: sets[p].to_vec(),
                root: roots[p],
            },
        }
    }

    /// Root map of a rooted layer.
    pub fn roots(&self) -> Option<&[usize]> {
        match &self.kind {
            LayerKind::Rooted { roots, .. } => Some(roots),
            _ => None,
        }
    }

    pub fn rooted_sets(&self) -> Option<&[ElemSet]> {
        match &self.kind {
            LayerKind::Rooted { sets, .. } => Some(sets),
            _ => None,
        }
    }
}

pub(crate) fn generators_layer(gens: usize) -> Result<TowerLayer> {
    let d = free_dl_dual(gens)?;
    Ok(TowerLayer {
        poset: d.poset,
        kind: LayerKind::Generators { gens },
    })
}

fn check_arity(layer: &TowerLayer, s: &ElemSet) -> Result<()> {
    if s.arity() != layer.size() {
        return Err(Error::InvalidInput(format!(
            "set of arity {} used at a layer of {} points",
            s.arity(),
            layer.size()
        )));
    }
    Ok(())
}

/// A tower with graded implication `imp: O(Xk) × O(Xk) → O(X(k+1))` and
/// embeddings `lift: O(Xk) → O(X(k+1))`.
pub trait GradedTower {
    fn gens(&self) -> usize;

    fn layers(&self) -> &[TowerLayer];

    /// `i_k`, dual to the connecting map `X(k+1) → Xk`.
    fn lift(&self, k: usize, u: &ElemSet) -> Result<ElemSet>;

    fn imp(&self, k: usize, a: &ElemSet, b: &ElemSet) -> Result<ElemSet>;

    /// Index of the top built layer.
    fn depth(&self) -> usize {
        self.layers().len() - 1
    }

    fn layer(&self, k: usize) -> Result<&TowerLayer> {
        self.layers().get(k).ok_or(Error::LayerRange {
            layer: k,
            built: self.depth(),
        })
    }

    fn sizes(&self) -> Vec<usize> {
        self.layers().iter().map(TowerLayer::size).collect()
    }

    fn top(&self, k: usize) -> Result<ElemSet> {
        Ok(self.layer(k)?.poset.carrier())
    }

    fn bottom(&self, k: usize) -> Result<ElemSet> {
        Ok(self.layer(k)?.poset.empty_set())
    }

    fn lift_to(&self, from: usize, to: usize, u: &ElemSet) -> Result<ElemSet> {
        if to < from {
            return Err(Error::InvalidInput(format!(
                "cannot lift from layer {from} down to {to}"
            )));
        }
        self.layer(to)?;
        let mut cur = u.clone();
        for k in from..to {
            cur = self.lift(k, &cur)?;
        }
        Ok(cur)
    }

    fn generator(&self, i: usize, k: usize) -> Result<ElemSet> {
        let n = self.gens();
        if i >= n {
            return Err(Error::IndexRange { index: i, size: n });
        }
        let base = ElemSet::from_indices(1 << n, (0..1usize << n).filter(|&s| s >> i & 1 == 1));
        self.lift_to(0, k, &base)
    }

    /// The downset of `φ` at layer `k`.
    fn eval(&self, phi: &Formula, k: usize) -> Result<ElemSet> {
        let rank = phi.rank();
        if k < rank {
            return Err(Error::RankTooDeep { rank, layer: k });
        }
        self.layer(k)?;
        if phi.var_bound() > self.gens() {
            return Err(Error::UnboundVariable {
                var: phi.var_bound() - 1,
                bound: self.gens(),
            });
        }
        let (at, set) = eval_at_rank(self, phi)?;
        self.lift_to(at, k, &set)
    }
}

/// Evaluates at layer `rank(φ)`.
fn eval_at_rank<T: GradedTower + ?Sized>(t: &T, phi: &Formula) -> Result<(usize, ElemSet)> {
    Ok(match phi {
        Formula::Var(i) => (0, t.generator(*i, 0)?),
        Formula::Bot => (0, t.bottom(0)?),
        Formula::Top => (0, t.top(0)?),
        Formula::And(l, r) | Formula::Or(l, r) => {
            let (kl, sl) = eval_at_rank(t, l)?;
            let (kr, sr) = eval_at_rank(t, r)?;
            let k = kl.max(kr);
            let (sl, sr) = (t.lift_to(kl, k, &sl)?, t.lift_to(kr, k, &sr)?);
            let s = if matches!(phi, Formula::And(..)) {
                sl.intersection(&sr)
            } else {
                sl.union(&sr)
            };
            (k, s)
        }
        Formula::Imp(l, r) => {
            let (kl, sl) = eval_at_rank(t, l)?;
            let (kr, sr) = eval_at_rank(t, r)?;
            let k = kl.max(kr);
            let (sl, sr) = (t.lift_to(kl, k, &sl)?, t.lift_to(kr, k, &sr)?);
            (k + 1, t.imp(k, &sl, &sr)?)
        }
    })
}

/// Weak-Heyting or pre-Heyting tower.
#[derive(Debug, Clone)]
pub struct Rank1Tower {
    variety: Variety,
    gens: usize,
    cap: usize,
    layers: Vec<TowerLayer>,
    /// `projections[k]: X(k+1) → Xk`.
    projections: Vec<MonotoneMap>,
}

pub fn build_tower(variety: Variety, gens: usize, depth: usize) -> Result<Rank1Tower> {
    build_tower_with_cap(variety, gens, depth, DEFAULT_LAYER_CAP)
}

pub fn build_tower_with_cap(
    variety: Variety,
    gens: usize,
    depth: usize,
    cap: usize,
) -> Result<Rank1Tower> {
    if variety == Variety::Ha {
        return Err(Error::InvalidInput(
            "the Heyting tower is built by build_heyting_tower".into(),
        ));
    }
    let mut t = Rank1Tower {
        variety,
        gens,
        cap,
        layers: vec![generators_layer(gens)?],
        projections: Vec::new(),
    };
    t.extend_to(depth)?;
    Ok(t)
}

impl Rank1Tower {
    pub fn variety(&self) -> Variety {
        self.variety
    }

    pub fn projection(&self, k: usize) -> Result<&MonotoneMap> {
        self.projections.get(k).ok_or(Error::LayerRange {
            layer: k + 1,
            built: self.depth(),
        })
    }

    pub fn extend_to(&mut self, depth: usize) -> Result<()> {
        while self.depth() < depth {
            self.push_layer()?;
        }
        Ok(())
    }

    fn push_layer(&mut self) -> Result<()> {
        let k = self.depth();
        let xk = &self.layers[k].poset;
        let base = self.layers[0].poset.clone();
        let family_size = match self.variety {
            Variety::Wha if xk.size() >= 127 => u128::MAX,
            Variety::Wha => 1u128 << xk.size(),
            _ => rooted_count(xk),
        };
        let count = family_size.saturating_mul(base.size() as u128);
        if count > self.cap as u128 {
            return Err(Error::size_bound(
                format!("layer {}", k + 1),
                count,
                self.cap as u128,
            ));
        }
        let family = match self.variety {
            Variety::Wha => Family::Powerset(build_powerset(xk, 62)?),
            _ => Family::Rooted(build_rooted_powerset(xk, self.cap)?),
        };
        let product = base.product(match &family {
            Family::Powerset(p) => &p.poset,
            Family::Rooted(r) => &r.poset,
        })?;
        let m = family.size();
        let images: Vec<usize> = (0..product.poset.size())
            .map(|p| {
                let (x0, j) = (p / m, p % m);
                if k == 0 {
                    return x0;
                }
                let prev = &self.projections[k - 1];
                let img = prev.forward_image(&family.decode(j));
                let LayerKind::Product { family: pf, .. } = &self.layers[k].kind else {
                    unreachable!("layers above 0 are products")
                };
                x0 * pf.size() + pf.index_of(&img).expect("image stays in the family")
            })
            .collect();
        let proj = MonotoneMap::from_images_unchecked(images, xk.size());
        self.layers.push(TowerLayer {
            poset: product.poset,
            kind: LayerKind::Product {
                base_size: base.size(),
                family,
            },
        });
        self.projections.push(proj);
        Ok(())
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

impl GradedTower for Rank1Tower {
    fn gens(&self) -> usize {
        self.gens
    }

    fn layers(&self) -> &[TowerLayer] {
        &self.layers
    }

    fn lift(&self, k: usize, u: &ElemSet) -> Result<ElemSet> {
        check_arity(self.layer(k)?, u)?;
        Ok(self.projection(k)?.preimage(u))
    }

    fn imp(&self, k: usize, a: &ElemSet, b: &ElemSet) -> Result<ElemSet> {
        let layer = self.layer(k)?;
        check_arity(layer, a)?;
        check_arity(layer, b)?;
        let next = self.layer(k + 1)?;
        let LayerKind::Product { base_size, family } = &next.kind else {
            unreachable!("layers above 0 are products")
        };
        let arr = family.arrow(a, b)?;
        let m = family.size();
        Ok(ElemSet::from_indices(
            next.size(),
            (0..*base_size).flat_map(|x0| arr.iter().map(move |j| x0 * m + j)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(build_tower(Variety::Wha, 1, 1).unwrap().sizes(), vec![2, 8]);
        assert_eq!(build_tower(Variety::Wha, 0, 1).unwrap().sizes(), vec![1, 2]);
        assert_eq!(build_tower(Variety::Pha, 1, 1).unwrap().sizes(), vec![2, 6]);
        assert_eq!(build_tower(Variety::Pha, 0, 1).unwrap().sizes(), vec![1, 1]);
        assert_eq!(
            build_tower(Variety::Wha, 1, 2).unwrap().sizes(),
            vec![2, 8, 512]
        );
        assert!(matches!(
            build_tower(Variety::Wha, 1, 3),
            Err(Error::SizeBound { .. })
        ));
    }

    #[test]
    fn projections_are_surjective_and_monotone() {
        for v in [Variety::Wha, Variety::Pha] {
            let t = build_tower(v, 1, 2).unwrap();
            for k in 0..t.depth() {
                let p = t.projection(k).unwrap();
                assert!(p.is_surjective());
                MonotoneMap::new(
                    &t.layers[k + 1].poset,
                    &t.layers[k].poset,
                    p.images().to_vec(),
                )
                .unwrap();
            }
        }
    }

    #[test]
    fn imp_examples() {
        let t = build_tower(Variety::Wha, 0, 1).unwrap();
        let one = t.top(0).unwrap();
        let zero = t.bottom(0).unwrap();
        // only (x, ∅) survives
        assert_eq!(
            t.imp(0, &one, &zero).unwrap(),
            ElemSet::from_indices(2, [0])
        );
        assert!(t.imp(0, &one, &one).unwrap().is_full());
        for n in 0..=2 {
            let p = build_tower(Variety::Pha, n, 1).unwrap();
            assert!(p
                .imp(0, &p.top(0).unwrap(), &p.bottom(0).unwrap())
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn generator_examples() {
        let t = build_tower(Variety::Wha, 1, 1).unwrap();
        assert_eq!(t.generator(0, 0).unwrap(), ElemSet::from_indices(2, [1]));
        let g1 = t.generator(0, 1).unwrap();
        assert_eq!(g1, ElemSet::from_indices(8, 4..8));
        assert!(t.layers[1].poset.is_downset(&g1));
        let t0 = build_tower(Variety::Wha, 0, 1).unwrap();
        assert!(matches!(t0.generator(0, 0), Err(Error::IndexRange { .. })));
    }

    #[test]
    fn eval_examples() {
        let t = build_tower(Variety::Wha, 1, 2).unwrap();
        assert!(t.eval(&f("x->x"), 1).unwrap().is_full());
        assert_ne!(t.eval(&f("1->x"), 1).unwrap(), t.generator(0, 1).unwrap());
        assert_eq!(
            t.eval(&f("x->(x&x)"), 1).unwrap(),
            t.eval(&f("x->x"), 1).unwrap()
        );
        assert!(matches!(
            t.eval(&f("x->x"), 0),
            Err(Error::RankTooDeep { .. })
        ));
        assert!(matches!(
            t.eval(&f("x&y"), 0),
            Err(Error::UnboundVariable { .. })
        ));
        let phi = f("(x->0) | x");
        assert_eq!(
            t.eval(&phi, 2).unwrap(),
            t.lift(1, &t.eval(&phi, 1).unwrap()).unwrap()
        );
    }

    #[test]
    fn decode_points() {
        let t = build_tower(Variety::Pha, 1, 1).unwrap();
        assert_eq!(t.layers[0].decode(1), PointDecode::Meet(vec![0]));
        assert_eq!(
            t.layers[1].decode(4),
            PointDecode::Pair {
                base: 1,
                set: vec![1]
            }
        );
    }
}
