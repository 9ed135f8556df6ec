//! Finite labeled posets over dense indices `0..size`, with the set-level
//! machinery (closures, rooted subsets, images) used by every later module.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::error::{Error, Result};

/// Largest carrier for which a full order table is materialized. Each table
/// row is a bitset, so a poset costs `2 * size^2` bits.
pub const MAX_TABLE_POINTS: usize = 1 << 15;

/// A finite partial order. Row `j` of `down` is the principal downset `↓j`,
/// row `j` of `up` is `↑j`; together they are the full order table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    down: Vec<ElemSet>,
    up: Vec<ElemSet>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Poset")
            .field("size", &self.size())
            .field("covers", &self.covers())
            .finish()
    }
}

fn check_table(size: usize) -> Result<()> {
    if size > MAX_TABLE_POINTS {
        return Err(Error::size_bound(
            "poset order table",
            size as u128,
            MAX_TABLE_POINTS as u128,
        ));
    }
    Ok(())
}

fn transpose(rows: &[ElemSet]) -> Vec<ElemSet> {
    let n = rows.len();
    let mut cols = vec![ElemSet::empty(n); n];
    for (j, row) in rows.iter().enumerate() {
        for i in row {
            cols[i].insert(j);
        }
    }
    cols
}

impl Poset {
    /// Reflexive-transitive closure of `strict_pairs`, each `(below, above)`.
    pub fn from_pairs(size: usize, strict_pairs: &[(usize, usize)]) -> Result<Poset> {
        check_table(size)?;
        let mut down: Vec<ElemSet> = (0..size).map(|j| ElemSet::singleton(size, j)).collect();
        for &(lo, hi) in strict_pairs {
            for idx in [lo, hi] {
                if idx >= size {
                    return Err(Error::IndexRange { index: idx, size });
                }
            }
            down[hi].insert(lo);
        }
        // Warshall on bit rows.
        for k in 0..size {
            let row_k = down[k].clone();
            for row in down.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for (j, row) in down.iter().enumerate() {
            for i in row {
                if i != j && down[i].contains(j) {
                    return Err(Error::Cycle(i.min(j), i.max(j)));
                }
            }
        }
        let up = transpose(&down);
        Ok(Poset { down, up })
    }

    /// Builds a poset from an explicit relation, rejecting anything that is
    /// not reflexive, antisymmetric and transitive.
    pub fn from_leq(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        check_table(size)?;
        let down: Vec<ElemSet> = (0..size)
            .map(|j| ElemSet::from_indices(size, (0..size).filter(|&i| leq(i, j))))
            .collect();
        for (j, row) in down.iter().enumerate() {
            if !row.contains(j) {
                return Err(Error::InvalidInput(format!(
                    "relation is not reflexive at {j}"
                )));
            }
            for i in row {
                if i != j && down[i].contains(j) {
                    return Err(Error::Cycle(i.min(j), i.max(j)));
                }
                if !down[i].is_subset(row) {
                    return Err(Error::InvalidInput(format!(
                        "relation is not transitive through {i} <= {j}"
                    )));
                }
            }
        }
        let up = transpose(&down);
        Ok(Poset { down, up })
    }

    /// Trusted constructor for orders known to be partial (inclusion orders
    /// on distinct sets, products, restrictions).
    pub(crate) fn from_down_rows(down: Vec<ElemSet>) -> Poset {
        debug_assert!(down.iter().enumerate().all(|(j, r)| r.contains(j)));
        let up = transpose(&down);
        Poset { down, up }
    }

    /// Inclusion order on a family of pairwise distinct sets.
    pub fn inclusion(sets: &[ElemSet]) -> Result<Poset> {
        let n = sets.len();
        check_table(n)?;
        let down: Vec<ElemSet> = sets
            .par_iter()
            .map(|t| ElemSet::from_indices(n, (0..n).filter(|&i| sets[i].is_subset(t))))
            .collect();
        let up: Vec<ElemSet> = sets
            .par_iter()
            .map(|s| ElemSet::from_indices(n, (0..n).filter(|&j| s.is_subset(&sets[j]))))
            .collect();
        debug_assert!(down.iter().all(|r| !r.is_empty()));
        Ok(Poset { down, up })
    }

    pub fn chain(n: usize) -> Poset {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_pairs(n, &pairs).expect("chain is a poset")
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_pairs(n, &[]).expect("antichain is a poset")
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.down.len()
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.down[j].contains(i)
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// `↓x` as a borrowed row of the order table.
    #[inline]
    pub fn down_row(&self, x: usize) -> &ElemSet {
        &self.down[x]
    }

    #[inline]
    pub fn up_row(&self, x: usize) -> &ElemSet {
        &self.up[x]
    }

    pub fn principal_down(&self, x: usize) -> ElemSet {
        self.down[x].clone()
    }

    pub fn up_set(&self, x: usize) -> ElemSet {
        self.up[x].clone()
    }

    pub fn empty_set(&self) -> ElemSet {
        ElemSet::empty(self.size())
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    pub fn check_set(&self, s: &ElemSet) -> Result<()> {
        if s.arity() != self.size() {
            return Err(Error::InvalidInput(format!(
                "set of arity {} used with poset of size {}",
                s.arity(),
                self.size()
            )));
        }
        Ok(())
    }

    pub fn down_closure(&self, s: &ElemSet) -> ElemSet {
        let mut out = self.empty_set();
        for x in s {
            out.union_with(&self.down[x]);
        }
        out
    }

    pub fn up_closure(&self, s: &ElemSet) -> ElemSet {
        let mut out = self.empty_set();
        for x in s {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn is_downset(&self, s: &ElemSet) -> bool {
        s.iter().all(|x| self.down[x].is_subset(s))
    }

    pub fn is_upset(&self, s: &ElemSet) -> bool {
        s.iter().all(|x| self.up[x].is_subset(s))
    }

    /// True iff `s` is nonempty and has a maximum.
    pub fn is_rooted(&self, s: &ElemSet) -> bool {
        self.root_candidate(s).is_some()
    }

    fn root_candidate(&self, s: &ElemSet) -> Option<usize> {
        // The maximum, if any, is the unique member whose downset covers s.
        s.iter().find(|&x| s.is_subset(&self.down[x]))
    }

    pub fn root_of(&self, s: &ElemSet) -> Result<usize> {
        self.root_candidate(s).ok_or(Error::NotRooted)
    }

    pub fn maximal_elements(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_indices(
            self.size(),
            s.iter()
                .filter(|&x| !self.up[x].iter().any(|y| y != x && s.contains(y))),
        )
    }

    pub fn minimal_elements(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_indices(
            self.size(),
            s.iter()
                .filter(|&x| !self.down[x].iter().any(|y| y != x && s.contains(y))),
        )
    }

    /// Covering pairs `(lower, upper)` in ascending order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.size() {
            let mut strict = self.down[j].clone();
            strict.remove(j);
            for i in self.maximal_elements(&strict).iter() {
                out.push((i, j));
            }
        }
        out.sort_unstable();
        out
    }

    /// A linear extension: every element appears after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.size()).collect();
        idx.sort_by_key(|&x| (self.down[x].len(), x));
        idx
    }

    /// Componentwise order on `P × Q`; point `(i, j)` has index `i * |Q| + j`.
    pub fn product(&self, other: &Poset) -> Result<ProductPoset> {
        let (n, m) = (self.size(), other.size());
        let total = n as u128 * m as u128;
        if total > MAX_TABLE_POINTS as u128 {
            return Err(Error::size_bound(
                "product poset",
                total,
                MAX_TABLE_POINTS as u128,
            ));
        }
        let total = n * m;
        let down: Vec<ElemSet> = (0..total)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / m, k % m);
                let mut row = ElemSet::empty(total);
                for a in self.down_row(i) {
                    for b in other.down_row(j) {
                        row.insert(a * m + b);
                    }
                }
                row
            })
            .collect();
        Ok(ProductPoset {
            poset: Poset::from_down_rows(down),
            left_size: n,
            right_size: m,
        })
    }

    /// The induced order on `s`, points renumbered in ascending order.
    pub fn subposet(&self, s: &ElemSet) -> SubPoset {
        let embedding = s.to_vec();
        let k = embedding.len();
        let down = embedding
            .iter()
            .map(|&y| {
                ElemSet::from_indices(
                    k,
                    embedding
                        .iter()
                        .enumerate()
                        .filter(|&(_, &x)| self.leq(x, y))
                        .map(|(i, _)| i),
                )
            })
            .collect();
        SubPoset {
            poset: Poset::from_down_rows(down),
            embedding,
        }
    }

    /// All downsets, in ascending encoding order. Fails once more than
    /// `limit` have been found.
    pub fn downsets(&self, limit: usize) -> Result<Vec<ElemSet>> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        let mut current = self.empty_set();
        self.downsets_rec(&order, 0, &mut current, &mut out, limit)?;
        out.sort();
        Ok(out)
    }

    fn downsets_rec(
        &self,
        order: &[usize],
        pos: usize,
        current: &mut ElemSet,
        out: &mut Vec<ElemSet>,
        limit: usize,
    ) -> Result<()> {
        if pos == order.len() {
            if out.len() >= limit {
                return Err(Error::size_bound(
                    "downset enumeration",
                    limit as u128 + 1,
                    limit as u128,
                ));
            }
            out.push(current.clone());
            return Ok(());
        }
        let x = order[pos];
        self.downsets_rec(order, pos + 1, current, out, limit)?;
        let mut below = self.down[x].clone();
        below.remove(x);
        if below.is_subset(current) {
            current.insert(x);
            self.downsets_rec(order, pos + 1, current, out, limit)?;
            current.remove(x);
        }
        Ok(())
    }

    pub fn to_json(&self) -> PosetJson {
        let mut leq = Vec::new();
        for j in 0..self.size() {
            for i in self.down_row(j) {
                leq.push([i, j]);
            }
        }
        leq.sort_unstable();
        PosetJson {
            size: self.size(),
            leq,
        }
    }

    /// Accepts either the full relation or just covers; pairs are closed.
    pub fn from_json(json: &PosetJson) -> Result<Poset> {
        let pairs: Vec<(usize, usize)> = json
            .leq
            .iter()
            .filter(|p| p[0] != p[1])
            .map(|p| (p[0], p[1]))
            .collect();
        for p in &json.leq {
            for &idx in p {
                if idx >= json.size {
                    return Err(Error::IndexRange {
                        index: idx,
                        size: json.size,
                    });
                }
            }
        }
        Poset::from_pairs(json.size, &pairs)
    }

    /// Hasse diagram in DOT: nodes `0..size`, one edge per covering pair
    /// drawn from the lower to the upper element.
    pub fn to_dot(&self, name: &str, labels: Option<&[String]>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{name}\" {{");
        let _ = writeln!(s, "  rankdir=BT;");
        for i in 0..self.size() {
            match labels.and_then(|l| l.get(i)) {
                Some(label) => {
                    let _ = writeln!(s, "  {i} [label=\"{}\"];", label.replace('"', "\\\""));
                }
                None => {
                    let _ = writeln!(s, "  {i};");
                }
            }
        }
        for (a, b) in self.covers() {
            let _ = writeln!(s, "  {a} -> {b};");
        }
        s.push_str("}\n");
        s
    }
}

/// JSON form of a poset: `{"size": n, "leq": [[i, j], ...]}` with `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub size: usize,
    pub leq: Vec<[usize; 2]>,
}

#[derive(Debug, Clone)]
pub struct ProductPoset {
    pub poset: Poset,
    pub left_size: usize,
    pub right_size: usize,
}

impl ProductPoset {
    #[inline]
    pub fn pair(&self, i: usize, j: usize) -> usize {
        i * self.right_size + j
    }

    #[inline]
    pub fn unpair(&self, k: usize) -> (usize, usize) {
        (k / self.right_size, k % self.right_size)
    }
}

#[derive(Debug, Clone)]
pub struct SubPoset {
    pub poset: Poset,
    /// `embedding[i]` is the index in the parent poset of sub-point `i`.
    pub embedding: Vec<usize>,
}

/// An index map between two posets, validated to be order-preserving.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    images: Vec<usize>,
    codomain_size: usize,
}

impl MonotoneMap {
    pub fn new(domain: &Poset, codomain: &Poset, images: Vec<usize>) -> Result<MonotoneMap> {
        if images.len() != domain.size() {
            return Err(Error::InvalidInput(format!(
                "map has {} images for a domain of size {}",
                images.len(),
                domain.size()
            )));
        }
        for &y in &images {
            if y >= codomain.size() {
                return Err(Error::IndexRange {
                    index: y,
                    size: codomain.size(),
                });
            }
        }
        for j in 0..domain.size() {
            for i in domain.down_row(j) {
                if !codomain.leq(images[i], images[j]) {
                    return Err(Error::NotMonotone(i, j));
                }
            }
        }
        Ok(MonotoneMap {
            images,
            codomain_size: codomain.size(),
        })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>, codomain_size: usize) -> MonotoneMap {
        debug_assert!(images.iter().all(|&y| y < codomain_size));
        MonotoneMap {
            images,
            codomain_size,
        }
    }

    pub fn identity(p: &Poset) -> MonotoneMap {
        MonotoneMap {
            images: (0..p.size()).collect(),
            codomain_size: p.size(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain_size
    }

    pub fn forward_image(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_indices(self.codomain_size, s.iter().map(|x| self.images[x]))
    }

    pub fn preimage(&self, u: &ElemSet) -> ElemSet {
        ElemSet::from_indices(
            self.images.len(),
            (0..self.images.len()).filter(|&x| u.contains(self.images[x])),
        )
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = ElemSet::empty(self.codomain_size);
        for &y in &self.images {
            if seen.contains(y) {
                return false;
            }
            seen.insert(y);
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        ElemSet::from_indices(self.codomain_size, self.images.iter().copied()).is_full()
    }
}

/// Forward image of `s` under `f`, after checking that `f` is monotone.
pub fn forward_image(
    domain: &Poset,
    codomain: &Poset,
    f: &[usize],
    s: &ElemSet,
) -> Result<ElemSet> {
    let map = MonotoneMap::new(domain, codomain, f.to_vec())?;
    domain.check_set(s)?;
    Ok(map.forward_image(s))
}

/// Every labeled poset on `0..n`, by brute force over strict relations.
/// Practical for `n <= 4`.
pub fn all_labeled_posets(n: usize) -> Vec<Poset> {
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    assert!(slots.len() < 32, "labeled poset enumeration is for tiny n");
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let rel = |i: usize, j: usize| {
            i == j
                || slots
                    .iter()
                    .position(|&p| p == (i, j))
                    .is_some_and(|b| mask >> b & 1 == 1)
        };
        if let Ok(p) = Poset::from_leq(n, rel) {
            out.push(p);
        }
    }
    out
}

/// Posets on `0..n` where `i <= j` implies `i <= j` as integers. Every finite
/// poset is isomorphic to at least one of them.
pub fn naturally_labeled_posets(n: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    let mut rows: Vec<ElemSet> = Vec::new();
    grow_natural(n, &mut rows, &mut out);
    out
}

fn grow_natural(n: usize, rows: &mut Vec<ElemSet>, out: &mut Vec<Poset>) {
    let k = rows.len();
    if k == n {
        let down = rows
            .iter()
            .map(|r| ElemSet::from_indices(n, r.iter()))
            .collect();
        out.push(Poset::from_down_rows(down));
        return;
    }
    // The new top element k sits above exactly one downset of the current poset.
    let current = Poset::from_down_rows(rows.clone());
    let choices = current.downsets(usize::MAX).expect("unbounded");
    for d in choices {
        let mut row = ElemSet::from_indices(k + 1, d.iter());
        row.insert(k);
        let mut next: Vec<ElemSet> = rows
            .iter()
            .map(|r| ElemSet::from_indices(k + 1, r.iter()))
            .collect();
        next.push(row);
        std::mem::swap(rows, &mut next);
        grow_natural(n, rows, out);
        std::mem::swap(rows, &mut next);
    }
}

/// All order-preserving maps `p -> q`, images listed per domain point.
pub fn monotone_maps(p: &Poset, q: &Poset) -> Vec<MonotoneMap> {
    let n = p.size();
    let m = q.size();
    let mut out = Vec::new();
    if n == 0 {
        out.push(MonotoneMap {
            images: vec![],
            codomain_size: m,
        });
        return out;
    }
    if m == 0 {
        return out;
    }
    let mut images = vec![0usize; n];
    loop {
        if let Ok(f) = MonotoneMap::new(p, q, images.clone()) {
            out.push(f);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            images[pos] += 1;
            if images[pos] < m {
                break;
            }
            images[pos] = 0;
            pos += 1;
        }
    }
}
