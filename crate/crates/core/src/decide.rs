//! Equality and validity in the free algebras, decided by evaluating both
//! sides at layer `max(rank)` of the matching tower.

use std::collections::HashMap;

use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::heyting::{build_heyting_tower_with, HeytingOptions, HeytingTower};
use crate::tower::{
    build_tower_with_cap, GradedTower, PointDecode, Rank1Tower, TowerLayer, Variety,
    DEFAULT_LAYER_CAP,
};

/// Either kind of tower, behind one interface.
#[derive(Debug, Clone)]
pub enum AnyTower {
    Rank1(Rank1Tower),
    Heyting(HeytingTower),
}

impl AnyTower {
    pub fn build(
        variety: Variety,
        gens: usize,
        depth: usize,
        opts: HeytingOptions,
    ) -> Result<AnyTower> {
        Ok(match variety {
            Variety::Ha => AnyTower::Heyting(build_heyting_tower_with(gens, depth, opts)?),
            v => AnyTower::Rank1(build_tower_with_cap(v, gens, depth, opts.cap)?),
        })
    }

    pub fn variety(&self) -> Variety {
        match self {
            AnyTower::Rank1(t) => t.variety(),
            AnyTower::Heyting(_) => Variety::Ha,
        }
    }

    pub fn extend_to(&mut self, depth: usize) -> Result<()> {
        match self {
            AnyTower::Rank1(t) => t.extend_to(depth),
            AnyTower::Heyting(t) => t.extend_to(depth),
        }
    }
}

impl GradedTower for AnyTower {
    fn gens(&self) -> usize {
        match self {
            AnyTower::Rank1(t) => t.gens(),
            AnyTower::Heyting(t) => t.gens(),
        }
    }

    fn layers(&self) -> &[TowerLayer] {
        match self {
            AnyTower::Rank1(t) => t.layers(),
            AnyTower::Heyting(t) => t.layers(),
        }
    }

    fn lift(&self, k: usize, u: &ElemSet) -> Result<ElemSet> {
        match self {
            AnyTower::Rank1(t) => t.lift(k, u),
            AnyTower::Heyting(t) => t.lift(k, u),
        }
    }

    fn imp(&self, k: usize, a: &ElemSet, b: &ElemSet) -> Result<ElemSet> {
        match self {
            AnyTower::Rank1(t) => t.imp(k, a, b),
            AnyTower::Heyting(t) => t.imp(k, a, b),
        }
    }
}

/// A point of the working layer lying in exactly one of the two downsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub point: usize,
    pub decode: PointDecode,
    pub in_left: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub variety: Variety,
    pub gens: usize,
    pub layer: usize,
    pub layer_size: usize,
    pub separation: Option<Separation>,
}

/// Caches one tower per (variety, generator count) and deepens it on demand.
#[derive(Debug)]
pub struct Decider {
    opts: HeytingOptions,
    towers: HashMap<(Variety, usize), AnyTower>,
}

impl Default for Decider {
    fn default() -> Self {
        Decider::new(DEFAULT_LAYER_CAP)
    }
}

impl Decider {
    pub fn new(cap: usize) -> Decider {
        Decider {
            opts: HeytingOptions {
                cap,
                g_filter: true,
            },
            towers: HashMap::new(),
        }
    }

    pub fn tower(&mut self, variety: Variety, gens: usize, depth: usize) -> Result<&AnyTower> {
        let key = (variety, gens);
        if !self.towers.contains_key(&key) {
            let t = AnyTower::build(variety, gens, 0, self.opts)?;
            self.towers.insert(key, t);
        }
        let t = self.towers.get_mut(&key).expect("inserted above");
        t.extend_to(depth)?;
        Ok(t)
    }

    /// Whether `φ = ψ` in the free algebra on `gens` generators.
    pub fn decide_equal(
        &mut self,
        variety: Variety,
        phi: &Formula,
        psi: &Formula,
        gens: usize,
    ) -> Result<Verdict> {
        let bound = phi.var_bound().max(psi.var_bound());
        if bound > gens {
            return Err(Error::UnboundVariable {
                var: bound - 1,
                bound: gens,
            });
        }
        let k = phi.rank().max(psi.rank());
        let t = self.tower(variety, gens, k)?;
        let a = t.eval(phi, k)?;
        let b = t.eval(psi, k)?;
        let layer = t.layer(k)?;
        let separation = a
            .union(&b)
            .difference(&a.intersection(&b))
            .first()
            .map(|p| Separation {
                point: p,
                decode: layer.decode(p),
                in_left: a.contains(p),
            });
        Ok(Verdict {
            holds: separation.is_none(),
            variety,
            gens,
            layer: k,
            layer_size: layer.size(),
            separation,
        })
    }

    /// Whether `φ = 1`, using as many generators as `φ` mentions.
    pub fn decide_valid(&mut self, variety: Variety, phi: &Formula) -> Result<Verdict> {
        self.decide_equal(variety, phi, &Formula::Top, phi.var_bound())
    }
}

/// One-shot equality in the free Heyting algebra.
pub fn decide_equal(phi: &Formula, psi: &Formula, gens: usize) -> Result<bool> {
    Ok(Decider::default()
        .decide_equal(Variety::Ha, phi, psi, gens)?
        .holds)
}

/// One-shot validity in intuitionistic propositional logic.
pub fn decide_valid(phi: &Formula) -> Result<bool> {
    Ok(Decider::default().decide_valid(Variety::Ha, phi)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn examples() {
        assert!(decide_valid(&f("x->x")).unwrap());
        assert!(!decide_valid(&f("((x->0)->x)->x")).unwrap());
        assert!(decide_equal(&f("~~~x"), &f("~x"), 1).unwrap());
        assert!(!decide_equal(&f("x"), &f("~~x"), 1).unwrap());
    }

    #[test]
    fn separation_and_cache() {
        let mut d = Decider::default();
        let v = d
            .decide_equal(Variety::Wha, &f("1->x"), &f("x"), 1)
            .unwrap();
        assert!(!v.holds);
        assert_eq!(v.layer, 1);
        assert_eq!(v.layer_size, 8);
        assert!(v.separation.is_some());
        let v = d.decide_valid(Variety::Ha, &f("x | ~x")).unwrap();
        assert!(!v.holds);
        let depth = d.tower(Variety::Ha, 1, 0).unwrap().depth();
        assert_eq!(depth, 1);
        assert!(d.decide_valid(Variety::Ha, &f("0 -> x")).unwrap().holds);
    }
}
