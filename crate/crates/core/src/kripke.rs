//! Intuitionistic Kripke semantics on finite frames, used as an independent
//! check of the tower decision procedure.
//!
//! Convention: the successors of a world `w` are the worlds *below* it, and
//! valuations are downsets. So `w ⊩ φ → ψ` iff every `v ≤ w` forcing `φ`
//! also forces `ψ`. This is the mirror image of the usual textbook setup
//! and matches the downset encoding of lattice elements used elsewhere.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::poset::{naturally_labeled_posets, Poset, PosetJson};

/// Default bound on the frame size in countermodel searches.
pub const DEFAULT_MAX_FRAME: usize = 6;

#[derive(Debug, Clone)]
pub struct KripkeModel {
    pub frame: Poset,
    /// `valuation[i]` is the downset of worlds where variable `i` holds.
    pub valuation: Vec<ElemSet>,
}

impl KripkeModel {
    pub fn new(frame: Poset, valuation: Vec<ElemSet>) -> Result<KripkeModel> {
        for v in &valuation {
            frame.check_set(v)?;
            if !frame.is_downset(v) {
                return Err(Error::InvalidInput("valuation is not persistent".into()));
            }
        }
        Ok(KripkeModel { frame, valuation })
    }

    /// The set of worlds forcing `φ`.
    pub fn truth_set(&self, phi: &Formula) -> Result<ElemSet> {
        let f = &self.frame;
        Ok(match phi {
            Formula::Var(i) => self
                .valuation
                .get(*i)
                .cloned()
                .ok_or(Error::UnboundVariable {
                    var: *i,
                    bound: self.valuation.len(),
                })?,
            Formula::Bot => f.empty_set(),
            Formula::Top => f.carrier(),
            Formula::And(l, r) => self.truth_set(l)?.intersection(&self.truth_set(r)?),
            Formula::Or(l, r) => self.truth_set(l)?.union(&self.truth_set(r)?),
            Formula::Imp(l, r) => {
                let bad = self.truth_set(l)?.difference(&self.truth_set(r)?);
                ElemSet::from_indices(
                    f.size(),
                    (0..f.size()).filter(|&w| !f.down_row(w).intersects(&bad)),
                )
            }
        })
    }

    pub fn forces(&self, w: usize, phi: &Formula) -> Result<bool> {
        if w >= self.frame.size() {
            return Err(Error::IndexRange {
                index: w,
                size: self.frame.size(),
            });
        }
        Ok(self.truth_set(phi)?.contains(w))
    }
}

/// A countermodel in serializable form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    pub frame: PosetJson,
    /// Worlds where each variable holds.
    pub valuation: Vec<Vec<usize>>,
    /// A world that does not force the formula.
    pub world: usize,
}

impl Countermodel {
    pub fn model(&self) -> Result<KripkeModel> {
        let frame = Poset::from_json(&self.frame)?;
        let n = frame.size();
        let val = self
            .valuation
            .iter()
            .map(|v| ElemSet::from_indices(n, v.iter().copied()))
            .collect();
        KripkeModel::new(frame, val)
    }
}

/// Truth set on a frame given by down masks.
fn eval_mask(phi: &Formula, down: &[u64], val: &[u64], full: u64) -> u64 {
    match phi {
        Formula::Var(i) => val[*i],
        Formula::Bot => 0,
        Formula::Top => full,
        Formula::And(l, r) => eval_mask(l, down, val, full) & eval_mask(r, down, val, full),
        Formula::Or(l, r) => eval_mask(l, down, val, full) | eval_mask(r, down, val, full),
        Formula::Imp(l, r) => {
            let bad = eval_mask(l, down, val, full) & !eval_mask(r, down, val, full);
            let mut out = 0;
            for (w, d) in down.iter().enumerate() {
                if d & bad == 0 {
                    out |= 1 << w;
                }
            }
            out
        }
    }
}

fn search_frame(phi: &Formula, frame: &Poset, vars: usize) -> Option<Countermodel> {
    let n = frame.size();
    let down: Vec<u64> = (0..n)
        .map(|w| frame.down_row(w).to_mask().expect("small frame"))
        .collect();
    let downsets: Vec<u64> = frame
        .downsets(usize::MAX)
        .expect("no limit")
        .iter()
        .map(|d| d.to_mask().expect("small frame"))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut choice = vec![0usize; vars];
    let mut val = vec![0u64; vars];
    loop {
        for (v, &c) in val.iter_mut().zip(&choice) {
            *v = downsets[c];
        }
        let truth = eval_mask(phi, &down, &val, full);
        if truth != full {
            let world = (!truth & full).trailing_zeros() as usize;
            return Some(Countermodel {
                frame: frame.to_json(),
                valuation: val
                    .iter()
                    .map(|&m| (0..n).filter(|&w| m >> w & 1 == 1).collect())
                    .collect(),
                world,
            });
        }
        // odometer, last variable fastest
        let mut i = vars;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < downsets.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Searches frames of size `1..=max_size` (every finite poset up to
/// isomorphism, in a fixed order) and every valuation for a world where
/// `φ` fails. The first witness in that order is returned.
pub fn countermodel_search(phi: &Formula, max_size: usize) -> Result<Option<Countermodel>> {
    if max_size > 8 {
        return Err(Error::size_bound("Kripke frame size", max_size as u128, 8));
    }
    let vars = phi.var_bound();
    for n in 1..=max_size {
        let frames = naturally_labeled_posets(n);
        let found = frames
            .par_iter()
            .find_map_first(|frame| search_frame(phi, frame, vars));
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
