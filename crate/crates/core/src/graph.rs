use std::collections::HashMap;

use crate::error::{Error, Result, Violation};
use crate::functor::{FunctorSpec, IxValue, Value};
use crate::id::{ElementId, FiniteSet};

/// Unvalidated graph data, as read from input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGraph {
    pub spec: FunctorSpec,
    pub vertices: Vec<ElementId>,
    pub edges: Vec<(ElementId, Value)>,
}

/// An F-graph: edges, vertices and a structure map `E -> F(V)`.
///
/// Edges and vertices are addressed by their index in the sorted id sets.
/// Structure values carry vertex indices as atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FGraph {
    spec: FunctorSpec,
    edges: FiniteSet,
    vertices: FiniteSet,
    structure: Vec<IxValue>,
}

pub fn validate_graph(raw: &RawGraph) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if let Err(e) = raw.spec.check() {
        out.push(Violation { edge: None, message: e.to_string() });
    }
    if let Err(dup) = FiniteSet::distinct(raw.vertices.iter()) {
        out.push(Violation { edge: None, message: format!("duplicate vertex {dup}") });
    }
    if let Err(dup) = FiniteSet::distinct(raw.edges.iter().map(|(e, _)| e)) {
        out.push(Violation { edge: Some(dup.clone()), message: format!("duplicate edge {dup}") });
    }
    let vs = FiniteSet::new(raw.vertices.iter());
    for (e, w) in &raw.edges {
        let mut w = w.clone();
        w.canonicalize();
        if let Err(err) = raw.spec.validate_over(&w, &vs) {
            out.push(Violation { edge: Some(e.clone()), message: format!("edge {e}: {err}") });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

impl FGraph {
    pub fn new<V, E>(spec: FunctorSpec, vertices: V, edges: E) -> Result<FGraph>
    where
        V: IntoIterator,
        V::Item: Into<ElementId>,
        E: IntoIterator<Item = (ElementId, Value)>,
    {
        FGraph::from_raw(RawGraph {
            spec,
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: edges.into_iter().collect(),
        })
    }

    pub fn from_raw(raw: RawGraph) -> Result<FGraph> {
        validate_graph(&raw).map_err(Error::InvalidGraph)?;
        let vertices = FiniteSet::new(raw.vertices);
        let mut edges: Vec<(ElementId, Value)> = raw.edges;
        edges.sort_by(|a, b| a.0.cmp(&b.0));
        let structure = edges
            .iter()
            .map(|(_, w)| w.map_atoms(&mut |a| vertices.index_of(a.as_str()).expect("validated")))
            .collect();
        Ok(FGraph { spec: raw.spec, edges: FiniteSet::new(edges.into_iter().map(|(e, _)| e)), vertices, structure })
    }

    /// Builds from sorted sets and index-valued structure. Callers guarantee
    /// validity; debug builds re-check it.
    pub(crate) fn from_indexed(spec: FunctorSpec, edges: FiniteSet, vertices: FiniteSet, structure: Vec<IxValue>) -> FGraph {
        debug_assert_eq!(edges.len(), structure.len());
        debug_assert!(structure.iter().all(|w| w.is_canonical()
            && w.all_atoms(|&a| a < vertices.len())
            && spec.validate_shape(w).is_ok()));
        FGraph { spec, edges, vertices, structure }
    }

    /// Builds from unsorted named parts whose structure uses positions in
    /// `vertices` as atoms. Ids must be distinct.
    pub(crate) fn from_unsorted(spec: FunctorSpec, edges: Vec<(ElementId, IxValue)>, vertices: Vec<ElementId>) -> Result<FGraph> {
        let vset = FiniteSet::distinct(vertices.iter())
            .map_err(|d| Error::PreconditionViolated(format!("generated vertex id {d} collides")))?;
        let remap: Vec<usize> = vertices.iter().map(|v| vset.index_of(v.as_str()).unwrap()).collect();
        let mut named: Vec<(ElementId, IxValue)> =
            edges.into_iter().map(|(e, w)| (e, w.map_atoms(&mut |&a| remap[a]))).collect();
        named.sort_by(|a, b| a.0.cmp(&b.0));
        let eset = FiniteSet::distinct(named.iter().map(|(e, _)| e))
            .map_err(|d| Error::PreconditionViolated(format!("generated edge id {d} collides")))?;
        let structure = named.into_iter().map(|(_, w)| w).collect();
        Ok(FGraph::from_indexed(spec, eset, vset, structure))
    }

    pub fn empty(spec: FunctorSpec) -> FGraph {
        FGraph { spec, edges: FiniteSet::default(), vertices: FiniteSet::default(), structure: Vec::new() }
    }

    pub fn spec(&self) -> &FunctorSpec {
        &self.spec
    }

    pub fn edges(&self) -> &FiniteSet {
        &self.edges
    }

    pub fn vertices(&self) -> &FiniteSet {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn value(&self, e: usize) -> &IxValue {
        &self.structure[e]
    }

    pub fn structure(&self) -> &[IxValue] {
        &self.structure
    }

    pub fn edge_index(&self, e: &str) -> Option<usize> {
        self.edges.index_of(e)
    }

    pub fn vertex_index(&self, v: &str) -> Option<usize> {
        self.vertices.index_of(v)
    }

    pub fn edge_id(&self, e: usize) -> &ElementId {
        self.edges.get(e)
    }

    pub fn vertex_id(&self, v: usize) -> &ElementId {
        self.vertices.get(v)
    }

    /// Structure value with vertex ids as atoms.
    pub fn named_value(&self, e: usize) -> Value {
        self.name_value(&self.structure[e])
    }

    pub fn name_value(&self, w: &IxValue) -> Value {
        w.map_atoms(&mut |&a| self.vertices.get(a).clone())
    }

    /// Converts a named value to indices; `None` if an atom is not a vertex.
    pub fn index_value(&self, w: &Value) -> Option<IxValue> {
        let mut ok = true;
        let out = w.map_atoms(&mut |a| match self.vertices.index_of(a.as_str()) {
            Some(i) => i,
            None => {
                ok = false;
                0
            }
        });
        ok.then_some(out)
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            spec: self.spec.clone(),
            vertices: self.vertices.iter().cloned().collect(),
            edges: (0..self.edge_count()).map(|e| (self.edge_id(e).clone(), self.named_value(e))).collect(),
        }
    }

    /// Edges grouped by structure value.
    pub fn value_index(&self) -> HashMap<&IxValue, Vec<usize>> {
        let mut m: HashMap<&IxValue, Vec<usize>> = HashMap::new();
        for (e, w) in self.structure.iter().enumerate() {
            m.entry(w).or_default().push(e);
        }
        m
    }

    /// No two edges share a structure value.
    pub fn is_simple(&self) -> bool {
        let mut ws: Vec<&IxValue> = self.structure.iter().collect();
        ws.sort();
        ws.windows(2).all(|p| p[0] != p[1])
    }

    pub fn support(&self, e: usize) -> Vec<usize> {
        self.structure[e].support()
    }

    /// Vertices lying in no edge's support.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        let mut used = vec![false; self.vertex_count()];
        for w in &self.structure {
            w.for_each_atom(&mut |&a| used[a] = true);
        }
        (0..self.vertex_count()).filter(|&v| !used[v]).collect()
    }
}

/// Shorthand for building graphs in code: `graph(spec, ["v1"], [("e1", w)])`.
pub fn graph<V, E, S>(spec: FunctorSpec, vertices: V, edges: E) -> Result<FGraph>
where
    V: IntoIterator,
    V::Item: Into<ElementId>,
    E: IntoIterator<Item = (S, Value)>,
    S: Into<ElementId>,
{
    FGraph::new(spec, vertices, edges.into_iter().map(|(e, w)| (e.into(), w)))
}

#[cfg(test)]
pub(crate) fn atom(i: usize) -> IxValue {
    crate::functor::FunctorValue::Atom(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::FunctorValue;

    #[test]
    fn builds_and_validates() {
        let g = graph(
            FunctorSpec::UPair,
            ["v1", "v2", "v3"],
            [("e1", Value::upair("v1", "v2")), ("e0", Value::upair("v3", "v3"))],
        )
        .unwrap();
        assert_eq!(g.edge_id(0).as_str(), "e0");
        assert_eq!(g.value(0), &FunctorValue::SetOf(vec![atom(2)]));
        assert_eq!(g.named_value(1), Value::upair("v1", "v2"));
        assert!(g.isolated_vertices().is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        let raw = RawGraph {
            spec: FunctorSpec::DPair,
            vertices: vec!["a".into(), "a".into()],
            edges: vec![("e".into(), Value::dpair("a", "zz")), ("e".into(), Value::upair("a", "a"))],
        };
        let v = validate_graph(&raw).unwrap_err();
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn isolated_vertices_allowed() {
        let g = graph(FunctorSpec::UPair, ["a", "b"], [("e", Value::upair("a", "a"))]).unwrap();
        assert_eq!(g.isolated_vertices(), vec![1]);
    }
}
