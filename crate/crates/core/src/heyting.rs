//! The Heyting tower: `X0 = P(n)`, `X1 = P_r(X0)`, and for `k ≥ 1`
//! `X(k+1)` is the set of rooted subsets of `Xk` satisfying the
//! admissibility condition (G). Connecting maps are the root maps.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::birkhoff::kappa_downset;
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::rooted::{build_rooted_powerset, rooted_count};
use crate::tower::{generators_layer, GradedTower, LayerKind, TowerLayer, DEFAULT_LAYER_CAP};

/// DFS nodes allowed per accepted point before enumeration gives up.
const WORK_FACTOR: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeytingOptions {
    pub cap: usize,
    /// Apply (G) from layer 2 on. Turning this off builds full rooted
    /// powersets and is only useful as a negative control.
    pub g_filter: bool,
}

impl Default for HeytingOptions {
    fn default() -> Self {
        HeytingOptions {
            cap: DEFAULT_LAYER_CAP,
            g_filter: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HeytingTower {
    gens: usize,
    opts: HeytingOptions,
    layers: Vec<TowerLayer>,
    /// Point lookup by decoded set, for layers `1..`.
    index: Vec<HashMap<ElemSet, usize>>,
}

pub fn build_heyting_tower(gens: usize, depth: usize) -> Result<HeytingTower> {
    build_heyting_tower_with(gens, depth, HeytingOptions::default())
}

pub fn build_heyting_tower_with(
    gens: usize,
    depth: usize,
    opts: HeytingOptions,
) -> Result<HeytingTower> {
    let mut t = HeytingTower {
        gens,
        opts,
        layers: vec![generators_layer(gens)?],
        index: vec![HashMap::new()],
    };
    t.extend_to(depth)?;
    Ok(t)
}

/// Condition (G) for `τ ⊆ Xn`: every `S ≤ T ∈ τ` has some `T' ∈ τ` with
/// `T' ≤ T` and `root(T') = root(S)`.
pub fn g_condition(xn: &TowerLayer, tau: &ElemSet) -> Result<bool> {
    let roots = xn.roots().ok_or(Error::LayerRange { layer: 0, built: 0 })?;
    xn.poset.check_set(tau)?;
    let p = &xn.poset;
    Ok(tau.iter().all(|t| {
        let below = p.down_row(t);
        let have: Vec<usize> = tau.intersection(below).iter().map(|s| roots[s]).collect();
        below.iter().all(|s| have.contains(&roots[s]))
    }))
}

/// Roots of `↓T` for every point `T`.
fn needs(xn: &TowerLayer, roots: &[usize], width: usize) -> Vec<ElemSet> {
    (0..xn.size())
        .map(|t| ElemSet::from_indices(width, xn.poset.down_row(t).iter().map(|s| roots[s])))
        .collect()
}

struct Search<'a> {
    poset: &'a Poset,
    roots: &'a [usize],
    need: &'a [ElemSet],
    root: usize,
    cands: Vec<usize>,
    suffix: Vec<ElemSet>,
    out: Vec<ElemSet>,
    nodes: &'a AtomicUsize,
    budget: usize,
    cap: usize,
}

impl Search<'_> {
    fn run(&mut self, i: usize, tau: &mut ElemSet, have: &mut ElemSet) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) > self.budget {
            return Err(Error::size_bound(
                "layer enumeration work",
                self.budget as u128 + 1,
                self.budget as u128,
            ));
        }
        let target = &self.need[self.root];
        if i == self.cands.len() {
            if target.is_subset(have) {
                let mut s = tau.clone();
                s.insert(self.root);
                self.out.push(s);
                if self.out.len() > self.cap {
                    return Err(Error::size_bound(
                        "layer points",
                        self.out.len() as u128,
                        self.cap as u128,
                    ));
                }
            }
            return Ok(());
        }
        if !target.is_subset(&have.union(&self.suffix[i])) {
            return Ok(());
        }
        self.run(i + 1, tau, have)?;

        let c = self.cands[i];
        let mut local = ElemSet::singleton(have.arity(), self.roots[c]);
        for s in tau.intersection(self.poset.down_row(c)).iter() {
            local.insert(self.roots[s]);
        }
        if self.need[c].is_subset(&local) {
            let added = !have.contains(self.roots[c]);
            tau.insert(c);
            have.insert(self.roots[c]);
            self.run(i + 1, tau, have)?;
            tau.remove(c);
            if added {
                have.remove(self.roots[c]);
            }
        }
        Ok(())
    }
}

/// All rooted subsets of `xn` satisfying (G), in canonical order.
fn enumerate_g_filtered(xn: &TowerLayer, cap: usize) -> Result<Vec<ElemSet>> {
    let roots = xn.roots().ok_or(Error::LayerRange { layer: 0, built: 0 })?;
    let width = roots.iter().copied().max().map_or(0, |m| m + 1);
    let need = needs(xn, roots, width);
    let order = xn.poset.linear_extension();
    let nodes = AtomicUsize::new(0);
    let budget = cap.saturating_mul(WORK_FACTOR);
    let per_root: Vec<Vec<ElemSet>> = (0..xn.size())
        .into_par_iter()
        .map(|r| {
            let below = xn.poset.down_row(r);
            let cands: Vec<usize> = order
                .iter()
                .copied()
                .filter(|&c| c != r && below.contains(c))
                .collect();
            let mut suffix = vec![ElemSet::empty(width); cands.len() + 1];
            for i in (0..cands.len()).rev() {
                suffix[i] = suffix[i + 1].clone();
                suffix[i].insert(roots[cands[i]]);
            }
            let mut search = Search {
                poset: &xn.poset,
                roots,
                need: &need,
                root: r,
                cands,
                suffix,
                out: Vec::new(),
                nodes: &nodes,
                budget,
                cap,
            };
            let mut tau = ElemSet::empty(xn.size());
            let mut have = ElemSet::singleton(width, roots[r]);
            search.run(0, &mut tau, &mut have)?;
            Ok(search.out)
        })
        .collect::<Result<_>>()?;
    let total: usize = per_root.iter().map(Vec::len).sum();
    if total > cap {
        return Err(Error::size_bound(
            "layer points",
            total as u128,
            cap as u128,
        ));
    }
    let mut sets: Vec<ElemSet> = per_root.into_iter().flatten().collect();
    sets.sort();
    Ok(sets)
}

/// Unoptimized reference: every rooted subset of `xn`, filtered by (G).
pub fn reference_next_layer(xn: &TowerLayer, cap: usize) -> Result<Vec<ElemSet>> {
    let pr = build_rooted_powerset(&xn.poset, cap)?;
    let mut out = Vec::new();
    for s in pr.sets() {
        if g_condition(xn, s)? {
            out.push(s.clone());
        }
    }
    Ok(out)
}

fn rooted_layer(prev: &Poset, sets: Vec<ElemSet>) -> Result<(TowerLayer, HashMap<ElemSet, usize>)> {
    let roots = sets
        .iter()
        .map(|s| prev.root_of(s))
        .collect::<Result<Vec<_>>>()?;
    let poset = Poset::inclusion(&sets)?;
    let index = sets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    Ok((
        TowerLayer {
            poset,
            kind: LayerKind::Rooted { sets, roots },
        },
        index,
    ))
}

impl HeytingTower {
    pub fn options(&self) -> HeytingOptions {
        self.opts
    }

    pub fn extend_to(&mut self, depth: usize) -> Result<()> {
        while self.depth() < depth {
            self.push_layer()?;
        }
        Ok(())
    }

    fn push_layer(&mut self) -> Result<()> {
        let k = self.depth();
        let xk = &self.layers[k];
        let cap = self.opts.cap;
        let sets = if k == 0 || !self.opts.g_filter {
            let count = rooted_count(&xk.poset);
            if count > cap as u128 {
                return Err(Error::size_bound(
                    format!("layer {}", k + 1),
                    count,
                    cap as u128,
                ));
            }
            build_rooted_powerset(&xk.poset, cap)?.sets().to_vec()
        } else {
            enumerate_g_filtered(xk, cap).map_err(|e| match e {
                Error::SizeBound {
                    what,
                    requested,
                    cap,
                } => Error::SizeBound {
                    what: format!("layer {} ({what})", k + 1),
                    requested,
                    cap,
                },
                e => e,
            })?
        };
        let (layer, index) = rooted_layer(&xk.poset, sets)?;
        self.layers.push(layer);
        self.index.push(index);
        Ok(())
    }

    /// Point of layer `k ≥ 1` with the given decoded set.
    pub fn index_of(&self, k: usize, s: &ElemSet) -> Option<usize> {
        self.index.get(k)?.get(s).copied()
    }

    pub fn roots(&self, k: usize) -> Result<&[usize]> {
        self.layer(k)?.roots().ok_or(Error::LayerRange {
            layer: 0,
            built: self.depth(),
        })
    }

    /// `(★)`: for every `T ∈ Xk` and `x ∈ T`, `↓x ∩ T` is again a point.
    pub fn star_check(&self, level: usize) -> Result<bool> {
        let layer = self.layer(level)?;
        let sets = layer.rooted_sets().ok_or(Error::LayerRange {
            layer: level,
            built: self.depth(),
        })?;
        let below = &self.layers[level - 1].poset;
        Ok(sets.par_iter().all(|t| {
            t.iter()
                .all(|x| self.index[level].contains_key(&below.down_row(x).intersection(t)))
        }))
    }

    pub fn root_surjective(&self, level: usize) -> Result<bool> {
        let roots = self.roots(level)?;
        let mut hit = ElemSet::empty(self.layers[level - 1].size());
        for &r in roots {
            hit.insert(r);
        }
        Ok(hit.is_full())
    }

    /// `root⁻¹(U)`.
    pub fn lift_h(&self, k: usize, u: &ElemSet) -> Result<ElemSet> {
        let roots = self.roots(k + 1)?;
        check_arity(&self.layers[k], u)?;
        Ok(ElemSet::from_indices(
            roots.len(),
            (0..roots.len()).filter(|&t| u.contains(roots[t])),
        ))
    }

    /// `{τ ∈ X(k+1) | τ ∩ a ⊆ b}`.
    pub fn imp_h(&self, k: usize, a: &ElemSet, b: &ElemSet) -> Result<ElemSet> {
        let next = self.layer(k + 1)?;
        check_arity(&self.layers[k], a)?;
        check_arity(&self.layers[k], b)?;
        let sets = next.rooted_sets().expect("layers above 0 are rooted");
        let bad = a.difference(b);
        Ok(ElemSet::from_indices(
            sets.len(),
            (0..sets.len()).filter(|&t| !sets[t].intersects(&bad)),
        ))
    }

    /// `lift(a → b) = lift a → lift b` on the pairs `(↓x, κ(y))` of layer
    /// `k-1`. Returns the first failing pair.
    pub fn axiom9_failure(&self, k: usize) -> Result<Option<(usize, usize)>> {
        if k == 0 {
            return Err(Error::LayerRange {
                layer: 0,
                built: self.depth(),
            });
        }
        self.layer(k + 1)?;
        let x = &self.layers[k - 1].poset;
        let pairs: Vec<(usize, usize)> = (0..x.size())
            .flat_map(|p| (0..x.size()).map(move |q| (p, q)))
            .collect();
        let found = pairs
            .par_iter()
            .map(|&(p, q)| -> Result<Option<(usize, usize)>> {
                let a = x.principal_down(p);
                let b = kappa_downset(x, q);
                let lhs = self.lift_h(k, &self.imp_h(k - 1, &a, &b)?)?;
                let rhs = self.imp_h(k, &self.lift_h(k - 1, &a)?, &self.lift_h(k - 1, &b)?)?;
                Ok((lhs != rhs).then_some((p, q)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(found.into_iter().flatten().next())
    }

    pub fn axiom9_check(&self, k: usize) -> Result<bool> {
        Ok(self.axiom9_failure(k)?.is_none())
    }
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

impl GradedTower for HeytingTower {
    fn gens(&self) -> usize {
        self.gens
    }

    fn layers(&self) -> &[TowerLayer] {
        &self.layers
    }

    fn lift(&self, k: usize, u: &ElemSet) -> Result<ElemSet> {
        self.lift_h(k, u)
    }

    fn imp(&self, k: usize, a: &ElemSet, b: &ElemSet) -> Result<ElemSet> {
        self.imp_h(k, a, b)
    }
}
