//! JSON file formats. Everything that names elements uses ids, never
//! indices, and maps are emitted in id order so output is byte-stable.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value as Json};

use crate::cofree::{ColorSet, Cofree, Coloring};
use crate::covariety::Pattern;
use crate::error::{Error, Result};
use crate::functor::{FunctorSpec, FunctorValue, Value};
use crate::graph::{FGraph, RawGraph};
use crate::hom::{Hom, HomMaps};
use crate::id::ElementId;
use crate::partition::EquivPair;
use crate::relations::{GraphRelation, RelationPair};
use crate::subgraph::SubgraphHandle;

pub fn value_to_json(w: &Value) -> Json {
    match w {
        FunctorValue::Atom(a) => Json::String(a.to_string()),
        FunctorValue::Tuple(xs) => Json::Array(xs.iter().map(value_to_json).collect()),
        FunctorValue::SetOf(xs) => json!({ "set": xs.iter().map(value_to_json).collect::<Vec<_>>() }),
        FunctorValue::Tagged(i, x) => json!({ "part": i, "value": value_to_json(x) }),
        FunctorValue::Colored(c, x) => json!({ "color": c.as_str(), "value": value_to_json(x) }),
    }
}

pub fn value_from_json(j: &Json) -> Result<Value> {
    let bad = || Error::Format(format!("not a functor value: {j}"));
    Ok(match j {
        Json::String(s) => FunctorValue::Atom(s.as_str().into()),
        Json::Array(xs) => FunctorValue::Tuple(xs.iter().map(value_from_json).collect::<Result<_>>()?),
        Json::Object(m) => match (m.get("set"), m.get("part"), m.get("color"), m.get("value")) {
            (Some(Json::Array(xs)), None, None, None) if m.len() == 1 => {
                FunctorValue::set(xs.iter().map(value_from_json).collect::<Result<Vec<_>>>()?)
            }
            (None, Some(p), None, Some(x)) if m.len() == 2 => {
                let i = p.as_u64().ok_or_else(bad)? as usize;
                FunctorValue::Tagged(i, Box::new(value_from_json(x)?))
            }
            (None, None, Some(Json::String(c)), Some(x)) if m.len() == 2 => {
                FunctorValue::Colored(c.as_str().into(), Box::new(value_from_json(x)?))
            }
            _ => return Err(bad()),
        },
        _ => return Err(bad()),
    })
}

/// Serde adapter for [`Value`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueJson(pub Value);

impl Serialize for ValueJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        value_to_json(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ValueJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = Json::deserialize(d)?;
        value_from_json(&j).map(ValueJson).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: ElementId,
    pub value: ValueJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub functor: FunctorSpec,
    pub vertices: Vec<ElementId>,
    pub edges: Vec<EdgeJson>,
}

impl GraphJson {
    pub fn from_graph(g: &FGraph) -> GraphJson {
        GraphJson {
            functor: g.spec().clone(),
            vertices: g.vertices().iter().cloned().collect(),
            edges: (0..g.edge_count())
                .map(|e| EdgeJson { id: g.edge_id(e).clone(), value: ValueJson(g.named_value(e)) })
                .collect(),
        }
    }

    pub fn into_raw(self) -> RawGraph {
        RawGraph {
            spec: self.functor,
            vertices: self.vertices,
            edges: self.edges.into_iter().map(|e| (e.id, e.value.0)).collect(),
        }
    }

    pub fn into_graph(self) -> Result<FGraph> {
        FGraph::from_raw(self.into_raw())
    }
}

pub fn graph_to_json(g: &FGraph) -> Json {
    serde_json::to_value(GraphJson::from_graph(g)).expect("graph serializes")
}

pub fn graph_from_json(j: &Json) -> Result<FGraph> {
    let gj: GraphJson = serde_json::from_value(j.clone()).map_err(|e| Error::Format(e.to_string()))?;
    gj.into_graph()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomJson {
    pub edge_map: BTreeMap<ElementId, ElementId>,
    pub vertex_map: BTreeMap<ElementId, ElementId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<GraphJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<GraphJson>,
}

impl HomJson {
    pub fn maps(&self) -> HomMaps {
        HomMaps { edge_map: self.edge_map.clone(), vertex_map: self.vertex_map.clone() }
    }

    pub fn from_hom(phi: &Hom, inline: bool) -> HomJson {
        let m = phi.maps();
        HomJson {
            edge_map: m.edge_map,
            vertex_map: m.vertex_map,
            source: inline.then(|| GraphJson::from_graph(phi.source())),
            target: inline.then(|| GraphJson::from_graph(phi.target())),
        }
    }

    /// Resolves against the inline graphs, or the given ones when absent.
    pub fn into_hom(self, source: Option<Arc<FGraph>>, target: Option<Arc<FGraph>>) -> Result<Hom> {
        let pick = |inline: Option<GraphJson>, given: Option<Arc<FGraph>>, side: &str| match (inline, given) {
            (_, Some(g)) => Ok(g),
            (Some(j), None) => Ok(Arc::new(j.into_graph()?)),
            (None, None) => Err(Error::Format(format!("hom has no {side} graph"))),
        };
        let maps = self.maps();
        let s = pick(self.source, source, "source")?;
        let t = pick(self.target, target, "target")?;
        Hom::new(s, t, &maps)
    }
}

pub fn hom_to_json(phi: &Hom) -> Json {
    serde_json::to_value(HomJson::from_hom(phi, false)).expect("hom serializes")
}

/// Maps of a coloring, keyed like a hom.
pub fn coloring_to_json(g: &FGraph, c: &Coloring, colors: &ColorSet) -> Json {
    let m = c.to_maps(g, colors);
    json!({ "edge_map": m.edge_map, "vertex_map": m.vertex_map })
}

pub fn coloring_from_json(j: &Json, g: &FGraph, colors: &ColorSet) -> Result<Coloring> {
    let hj: HomJson = serde_json::from_value(j.clone()).map_err(|e| Error::Format(e.to_string()))?;
    Coloring::from_maps(g, colors, &hj.maps())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub edge_pairs: Vec<(ElementId, ElementId)>,
    pub vertex_pairs: Vec<(ElementId, ElementId)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, ValueJson>>,
}

impl RelationJson {
    pub fn to_pairs(&self, g1: &FGraph, g2: &FGraph) -> Result<RelationPair> {
        let look = |ids: &[(ElementId, ElementId)], a: &dyn Fn(&str) -> Option<usize>, b: &dyn Fn(&str) -> Option<usize>| {
            ids.iter()
                .map(|(x, y)| match (a(x.as_str()), b(y.as_str())) {
                    (Some(i), Some(j)) => Ok((i, j)),
                    _ => Err(Error::DomainMismatch(format!("unknown pair ({x},{y})"))),
                })
                .collect::<Result<_>>()
        };
        Ok(RelationPair {
            edge_pairs: look(&self.edge_pairs, &|e| g1.edge_index(e), &|e| g2.edge_index(e))?,
            vertex_pairs: look(&self.vertex_pairs, &|v| g1.vertex_index(v), &|v| g2.vertex_index(v))?,
        })
    }
}

pub fn relation_pair_to_json(r: &RelationPair, g1: &FGraph, g2: &FGraph) -> Json {
    let rj = RelationJson {
        edge_pairs: r.edge_pairs.iter().map(|&(a, b)| (g1.edge_id(a).clone(), g2.edge_id(b).clone())).collect(),
        vertex_pairs: r.vertex_pairs.iter().map(|&(a, b)| (g1.vertex_id(a).clone(), g2.vertex_id(b).clone())).collect(),
        witness: None,
    };
    serde_json::to_value(rj).expect("relation serializes")
}

pub fn relation_to_json(r: &GraphRelation) -> Json {
    let (l, rt) = (r.left(), r.right());
    let witness = (0..r.edge_pairs().len())
        .map(|i| {
            let (a, b) = r.edge_pairs()[i];
            (format!("{}|{}", l.edge_id(a), rt.edge_id(b)), ValueJson(r.named_witness(i)))
        })
        .collect();
    let rj = RelationJson {
        edge_pairs: r.edge_pairs().iter().map(|&(a, b)| (l.edge_id(a).clone(), rt.edge_id(b).clone())).collect(),
        vertex_pairs: r.vertex_pairs().iter().map(|&(a, b)| (l.vertex_id(a).clone(), rt.vertex_id(b).clone())).collect(),
        witness: Some(witness),
    };
    serde_json::to_value(rj).expect("relation serializes")
}

/// Equivalence classes by id.
pub fn equiv_to_json(theta: &EquivPair, g: &FGraph) -> Json {
    let classes = |p: &crate::partition::Partition, name: &dyn Fn(usize) -> String| {
        p.classes().iter().map(|c| c.iter().map(|&i| name(i)).collect::<Vec<_>>()).collect::<Vec<_>>()
    };
    json!({
        "edges": classes(&theta.edges, &|e| g.edge_id(e).to_string()),
        "vertices": classes(&theta.vertices, &|v| g.vertex_id(v).to_string()),
    })
}

pub fn equiv_from_json(j: &Json, g: &FGraph) -> Result<EquivPair> {
    fn classes(j: Option<&Json>, n: usize, look: &dyn Fn(&str) -> Option<usize>) -> Result<crate::partition::Partition> {
        let arr: Vec<Vec<String>> = match j {
            Some(x) => serde_json::from_value(x.clone()).map_err(|e| Error::Format(e.to_string()))?,
            None => Vec::new(),
        };
        let mut pairs = Vec::new();
        for class in &arr {
            let ids = class
                .iter()
                .map(|s| look(s).ok_or_else(|| Error::DomainMismatch(format!("unknown element {s}"))))
                .collect::<Result<Vec<_>>>()?;
            pairs.extend(ids.windows(2).map(|w| (w[0], w[1])));
        }
        Ok(crate::partition::Partition::generated(n, pairs))
    }
    Ok(EquivPair {
        edges: classes(j.get("edges"), g.edge_count(), &|e| g.edge_index(e))?,
        vertices: classes(j.get("vertices"), g.vertex_count(), &|v| g.vertex_index(v))?,
    })
}

pub fn subgraph_to_json(h: &SubgraphHandle) -> Json {
    json!({ "edges": h.edge_ids(), "vertices": h.vertex_ids() })
}

/// `{"edges": [...], "vertices": [...]}` as id lists.
pub fn id_lists(j: &Json) -> Result<(Vec<String>, Vec<String>)> {
    let list = |k: &str| -> Result<Vec<String>> {
        match j.get(k) {
            Some(x) => serde_json::from_value(x.clone()).map_err(|e| Error::Format(e.to_string())),
            None => Ok(Vec::new()),
        }
    };
    Ok((list("edges")?, list("vertices")?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub colors: ColorSet,
    pub edge_subset: Vec<String>,
    pub vertex_subset: Vec<String>,
}

impl PatternJson {
    pub fn from_pattern(p: &Pattern) -> PatternJson {
        let c = p.cofree().graph();
        PatternJson {
            colors: p.cofree().colors().clone(),
            edge_subset: p.edges().iter().map(|&e| c.edge_id(e).to_string()).collect(),
            vertex_subset: p.vertices().iter().map(|&v| c.vertex_id(v).to_string()).collect(),
        }
    }

    pub fn into_pattern(self, spec: &FunctorSpec, cap: u128) -> Result<Pattern> {
        let cofree = Arc::new(Cofree::new(spec, &self.colors, cap)?);
        Pattern::from_names(cofree, &self.edge_subset, &self.vertex_subset)
    }
}

/// `{"e1": "v1", ...}` to vertex indices per edge.
pub fn orientation_from_json(j: &Json, g: &FGraph) -> Result<Vec<usize>> {
    let m: BTreeMap<String, String> = serde_json::from_value(j.clone()).map_err(|e| Error::Format(e.to_string()))?;
    (0..g.edge_count())
        .map(|e| {
            let v = m
                .get(g.edge_id(e).as_str())
                .ok_or_else(|| Error::DomainMismatch(format!("edge {} has no orientation", g.edge_id(e))))?;
            g.vertex_index(v).ok_or_else(|| Error::DomainMismatch(format!("unknown vertex {v}")))
        })
        .collect()
}

pub fn orientation_to_json(omega: &[usize], g: &FGraph) -> Json {
    let m: Map<String, Json> =
        omega.iter().enumerate().map(|(e, &v)| (g.edge_id(e).to_string(), Json::String(g.vertex_id(v).to_string()))).collect();
    Json::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph;

    #[test]
    fn value_round_trip() {
        let w = FunctorValue::Colored(
            "red".into(),
            Box::new(FunctorValue::Tagged(1, Box::new(FunctorValue::Tuple(vec![
                Value::atom("a"),
                FunctorValue::set(Value::atoms(["b", "c"])),
            ])))),
        );
        let j = value_to_json(&w);
        assert_eq!(j.to_string(), r#"{"color":"red","value":{"part":1,"value":["a",{"set":["b","c"]}]}}"#);
        assert_eq!(value_from_json(&j).unwrap(), w);
        assert!(value_from_json(&json!({"set": [], "part": 0})).is_err());
        assert!(value_from_json(&json!(3)).is_err());
    }

    #[test]
    fn graph_round_trip() {
        let g = graph(FunctorSpec::UPair, ["b", "a"], [("e", Value::upair("b", "a"))]).unwrap();
        let j = graph_to_json(&g);
        assert_eq!(
            j.to_string(),
            r#"{"edges":[{"id":"e","value":{"set":["a","b"]}}],"functor":{"kind":"upair"},"vertices":["a","b"]}"#
        );
        assert_eq!(graph_from_json(&j).unwrap(), g);
    }

    #[test]
    fn hom_inline() {
        let g = Arc::new(graph(FunctorSpec::DPair, ["a"], [("l", Value::dpair("a", "a"))]).unwrap());
        let id = Hom::identity(g.clone());
        let hj: HomJson = serde_json::from_value(serde_json::to_value(HomJson::from_hom(&id, true)).unwrap()).unwrap();
        assert_eq!(hj.into_hom(None, None).unwrap(), id);
    }
}
