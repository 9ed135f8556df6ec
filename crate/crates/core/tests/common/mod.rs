#![allow(dead_code)]

use freeha_core::formula::{parse, Formula, VarTable};
use serde::Deserialize;

pub struct Entry {
    pub line: usize,
    pub text: String,
    pub lhs: Formula,
    /// `None` for a validity entry.
    pub rhs: Option<Formula>,
    pub gens: usize,
    pub holds: bool,
}

impl Entry {
    pub fn right(&self) -> Formula {
        self.rhs.clone().unwrap_or(Formula::Top)
    }

    /// Formulas that are all intuitionistically valid iff the entry holds.
    pub fn obligations(&self) -> Vec<Formula> {
        match &self.rhs {
            None => vec![self.lhs.clone()],
            Some(r) => vec![
                Formula::imp(self.lhs.clone(), r.clone()),
                Formula::imp(r.clone(), self.lhs.clone()),
            ],
        }
    }

    pub fn rank(&self) -> usize {
        self.lhs.rank().max(self.right().rank())
    }
}

pub fn corpus() -> Vec<Entry> {
    let src = include_str!("../fixtures/corpus.txt");
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (kind, rest) = line
            .split_once(char::is_whitespace)
            .expect("kind and formula");
        let rest = rest.trim();
        let mut table = VarTable::default();
        let (lhs, rhs, holds) = match kind {
            "valid" | "invalid" => (parse(rest, &mut table).unwrap(), None, kind == "valid"),
            "equal" | "unequal" => {
                let (l, r) = rest.split_once(";;").expect("two sides");
                let l = parse(l, &mut table).unwrap();
                let r = parse(r, &mut table).unwrap();
                (l, Some(r), kind == "equal")
            }
            other => panic!("unknown corpus kind {other:?}"),
        };
        out.push(Entry {
            line: i + 1,
            text: rest.to_string(),
            lhs,
            rhs,
            gens: table.len(),
            holds,
        });
    }
    out
}

#[derive(Deserialize)]
pub struct SizeRecord {
    pub variety: String,
    pub gens: usize,
    pub sizes: Vec<usize>,
}

pub fn layer_sizes() -> Vec<SizeRecord> {
    serde_json::from_str(include_str!("../fixtures/layer_sizes.json")).unwrap()
}
