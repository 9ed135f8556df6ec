//! JSON and DOT renderings of tower layers.

use serde::Serialize;

use crate::poset::PosetJson;
use crate::tower::{PointDecode, TowerLayer};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerJson {
    pub layer: usize,
    pub size: usize,
    /// Cover pairs `[below, above]`.
    pub covers: Vec<[usize; 2]>,
    pub points: Vec<PointDecode>,
}

pub fn layer_json(k: usize, layer: &TowerLayer) -> LayerJson {
    LayerJson {
        layer: k,
        size: layer.size(),
        covers: layer
            .poset
            .covers()
            .into_iter()
            .map(|(a, b)| [a, b])
            .collect(),
        points: (0..layer.size()).map(|p| layer.decode(p)).collect(),
    }
}

pub fn layer_poset_json(layer: &TowerLayer) -> PosetJson {
    layer.poset.to_json()
}

/// Short human label of a point.
pub fn point_label(d: &PointDecode) -> String {
    fn list(xs: &[usize]) -> String {
        let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
        format!("{{{}}}", parts.join(","))
    }
    match d {
        PointDecode::Meet(gs) => {
            if gs.is_empty() {
                "1".into()
            } else {
                let parts: Vec<String> = gs.iter().map(|g| format!("g{g}")).collect();
                parts.join("&")
            }
        }
        PointDecode::Pair { base, set } => format!("({base},{})", list(set)),
        PointDecode::Rooted { set, root } => format!("{}@{root}", list(set)),
    }
}

pub fn layer_dot(k: usize, layer: &TowerLayer) -> String {
    let labels: Vec<String> = (0..layer.size())
        .map(|p| point_label(&layer.decode(p)))
        .collect();
    layer.poset.to_dot(&format!("X{k}"), Some(&labels))
}
