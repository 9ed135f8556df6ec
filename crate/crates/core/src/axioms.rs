//! Equational checks of the implication laws on a built tower.
//!
//! Each law is checked at every layer `k` whose implication target `k+1`
//! (or `k+2` for nested laws) is built. Elements are all downsets of `Xk`
//! when there are few enough tuples, otherwise a seeded random sample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decide::AnyTower;
use crate::elemset::ElemSet;
use crate::error::Result;
use crate::poset::Poset;
use crate::tower::{GradedTower, Variety};

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    /// Largest number of tuples checked exhaustively for one law.
    pub exhaustive_limit: usize,
    /// Tuples drawn when the exhaustive count is over the limit.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            exhaustive_limit: 1 << 15,
            samples: 600,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub law: String,
    pub layer: usize,
    pub checked: usize,
    pub exhaustive: bool,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub variety: Variety,
    pub gens: usize,
    pub depth: usize,
    pub results: Vec<LawResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.violations == 0)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawResult> {
        self.results.iter().filter(|r| r.violations > 0)
    }
}

fn random_downset(p: &Poset, rng: &mut ChaCha8Rng) -> ElemSet {
    let n = p.size();
    let m = rng.gen_range(0..=n.min(4));
    let mut s = p.empty_set();
    for _ in 0..m {
        s.insert(rng.gen_range(0..n));
    }
    if rng.gen_bool(0.5) {
        p.down_closure(&s)
    } else {
        p.up_closure(&s).complement()
    }
}

struct Elements {
    sets: Vec<ElemSet>,
    all: bool,
}

fn elements(p: &Poset, rng: &mut ChaCha8Rng) -> Elements {
    match p.downsets(4096) {
        Ok(sets) => Elements { sets, all: true },
        Err(_) => {
            let mut sets = vec![p.empty_set(), p.carrier()];
            sets.extend((0..254).map(|_| random_downset(p, rng)));
            sets.sort();
            sets.dedup();
            Elements { sets, all: false }
        }
    }
}

fn tuples(
    count: usize,
    arity: usize,
    opts: &SuiteOptions,
    rng: &mut ChaCha8Rng,
) -> (Vec<[usize; 3]>, bool) {
    let total = (count as u128).pow(arity as u32);
    if total <= opts.exhaustive_limit as u128 {
        let mut out = Vec::with_capacity(total as usize);
        for i in 0..total as usize {
            let mut t = [0; 3];
            let mut r = i;
            for slot in t.iter_mut().take(arity) {
                *slot = r % count;
                r /= count;
            }
            out.push(t);
        }
        (out, true)
    } else {
        let out = (0..opts.samples)
            .map(|_| {
                let mut t = [0; 3];
                for slot in t.iter_mut().take(arity) {
                    *slot = rng.gen_range(0..count);
                }
                t
            })
            .collect();
        (out, false)
    }
}

type Law<'a> = dyn Fn(&ElemSet, &ElemSet, &ElemSet) -> Result<bool> + Sync + 'a;

struct Runner<'a> {
    opts: SuiteOptions,
    rng: ChaCha8Rng,
    results: Vec<LawResult>,
    elems: &'a Elements,
    layer: usize,
}

impl Runner<'_> {
    fn check(&mut self, law: &str, arity: usize, f: &Law<'_>) -> Result<()> {
        let (ts, exhaustive) = tuples(self.elems.sets.len(), arity, &self.opts, &mut self.rng);
        let e = &self.elems.sets;
        let outcomes = ts
            .par_iter()
            .map(|t| f(&e[t[0]], &e[t[1]], &e[t[2]]))
            .collect::<Result<Vec<bool>>>()?;
        self.results.push(LawResult {
            law: law.to_string(),
            layer: self.layer,
            checked: ts.len(),
            exhaustive: exhaustive && self.elems.all,
            violations: outcomes.iter().filter(|ok| !**ok).count(),
        });
        Ok(())
    }
}

/// Runs the laws of the tower's variety on every layer where they make sense.
pub fn run_suite(t: &AnyTower, opts: SuiteOptions) -> Result<SuiteReport> {
    let variety = t.variety();
    let depth = t.depth();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut results = Vec::new();
    for k in 0..depth {
        let x = &t.layer(k)?.poset;
        let elems = elements(x, &mut rng);
        let one = x.carrier();
        let zero = x.empty_set();
        let mut r = Runner {
            opts,
            rng: ChaCha8Rng::seed_from_u64(opts.seed ^ k as u64),
            results: Vec::new(),
            elems: &elems,
            layer: k,
        };
        let imp = |a: &ElemSet, b: &ElemSet| t.imp(k, a, b);

        r.check("a->a = 1", 1, &|a, _, _| Ok(imp(a, a)?.is_full()))?;
        r.check("a->(b&c) = (a->b)&(a->c)", 3, &|a, b, c| {
            Ok(imp(a, &b.intersection(c))? == imp(a, b)?.intersection(&imp(a, c)?))
        })?;
        r.check("(a|b)->c = (a->c)&(b->c)", 3, &|a, b, c| {
            Ok(imp(&a.union(b), c)? == imp(a, c)?.intersection(&imp(b, c)?))
        })?;
        r.check("(a->b)&(b->c) <= a->c", 3, &|a, b, c| {
            Ok(imp(a, b)?.intersection(&imp(b, c)?).is_subset(&imp(a, c)?))
        })?;
        r.check("a->b = a->(a&b)", 2, &|a, b, _| {
            Ok(imp(a, b)? == imp(a, &a.intersection(b))?)
        })?;
        if k + 2 <= depth {
            let one1 = t.top(k + 1)?;
            r.check("1->(a->b) <= (1->a)->(1->b)", 2, &|a, b, _| {
                let lhs = t.imp(k + 1, &one1, &imp(a, b)?)?;
                let rhs = t.imp(k + 1, &imp(&one, a)?, &imp(&one, b)?)?;
                Ok(lhs.is_subset(&rhs))
            })?;
            r.check("lift(a->b) = lift(a)->lift(b)", 2, &|a, b, _| {
                let lhs = t.lift(k + 1, &imp(a, b)?)?;
                let rhs = t.imp(k + 1, &t.lift(k, a)?, &t.lift(k, b)?)?;
                Ok(lhs == rhs)
            })?;
        }
        if variety != Variety::Wha {
            r.check("1->0 = 0", 1, &|_, _, _| Ok(imp(&one, &zero)?.is_empty()))?;
            r.check("(1->a)|(1->b) = 1->(a|b)", 2, &|a, b, _| {
                Ok(imp(&one, a)?.union(&imp(&one, b)?) == imp(&one, &a.union(b))?)
            })?;
        }
        if variety == Variety::Ha {
            r.check("b <= a->b", 2, &|a, b, _| {
                Ok(t.lift(k, b)?.is_subset(&imp(a, b)?))
            })?;
            r.check("a&(a->b) <= b", 2, &|a, b, _| {
                Ok(t.lift(k, a)?
                    .intersection(&imp(a, b)?)
                    .is_subset(&t.lift(k, b)?))
            })?;
            r.check("1->a = a", 1, &|a, _, _| Ok(imp(&one, a)? == t.lift(k, a)?))?;
        }
        results.extend(r.results);
    }
    if let AnyTower::Heyting(h) = t {
        for k in 1..depth {
            let x = &h.layer(k - 1)?.poset;
            let ok = h.axiom9_check(k)?;
            results.push(LawResult {
                law: "1->(x->k(y)) = (1->x)->(1->k(y))".into(),
                layer: k - 1,
                checked: x.size() * x.size(),
                exhaustive: true,
                violations: usize::from(!ok),
            });
        }
    }
    Ok(SuiteReport {
        variety,
        gens: t.gens(),
        depth,
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heyting::HeytingOptions;

    #[test]
    fn small_suites_pass() {
        for (v, depth) in [(Variety::Wha, 2), (Variety::Pha, 2), (Variety::Ha, 3)] {
            let t = AnyTower::build(v, 1, depth, HeytingOptions::default()).unwrap();
            let rep = run_suite(&t, SuiteOptions::default()).unwrap();
            assert!(
                rep.passed(),
                "{v}: {:?}",
                rep.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn unfiltered_tower_breaks_nested_law() {
        let opts = HeytingOptions {
            g_filter: false,
            ..HeytingOptions::default()
        };
        let t = AnyTower::build(Variety::Ha, 1, 2, opts).unwrap();
        let rep = run_suite(&t, SuiteOptions::default()).unwrap();
        assert!(rep.failures().any(|r| r.law.starts_with("1->(x->k(y))")));
    }
}
