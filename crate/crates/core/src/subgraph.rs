use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::FGraph;
use crate::hom::Hom;
use crate::id::FiniteSet;

/// A subgraph of a fixed parent, as sorted index lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphHandle {
    parent: Arc<FGraph>,
    edges: Vec<usize>,
    vertices: Vec<usize>,
}

fn sorted(xs: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = xs.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Accepts `(E_sub, V_sub)` when every edge's support lies in `V_sub`;
/// otherwise returns the first offending edge.
pub fn subgraph_check(
    parent: &Arc<FGraph>,
    edges: impl IntoIterator<Item = usize>,
    vertices: impl IntoIterator<Item = usize>,
) -> Result<SubgraphHandle, usize> {
    let edges = sorted(edges);
    let vertices = sorted(vertices);
    let mut inside = vec![false; parent.vertex_count()];
    vertices.iter().for_each(|&v| inside[v] = true);
    if let Some(&e) = edges.iter().find(|&&e| !parent.value(e).all_atoms(|&a| inside[a])) {
        return Err(e);
    }
    Ok(SubgraphHandle { parent: parent.clone(), edges, vertices })
}

/// Named variant; unknown ids are a domain error.
pub fn subgraph_check_named(parent: &Arc<FGraph>, edges: &[impl AsRef<str>], vertices: &[impl AsRef<str>]) -> Result<Result<SubgraphHandle, usize>> {
    let es = edges
        .iter()
        .map(|e| parent.edge_index(e.as_ref()).ok_or_else(|| Error::DomainMismatch(format!("unknown edge {}", e.as_ref()))))
        .collect::<Result<Vec<_>>>()?;
    let vs = vertices
        .iter()
        .map(|v| parent.vertex_index(v.as_ref()).ok_or_else(|| Error::DomainMismatch(format!("unknown vertex {}", v.as_ref()))))
        .collect::<Result<Vec<_>>>()?;
    Ok(subgraph_check(parent, es, vs))
}

impl SubgraphHandle {
    pub fn whole(parent: &Arc<FGraph>) -> SubgraphHandle {
        SubgraphHandle {
            parent: parent.clone(),
            edges: (0..parent.edge_count()).collect(),
            vertices: (0..parent.vertex_count()).collect(),
        }
    }

    pub fn empty(parent: &Arc<FGraph>) -> SubgraphHandle {
        SubgraphHandle { parent: parent.clone(), edges: Vec::new(), vertices: Vec::new() }
    }

    pub(crate) fn trusted(parent: &Arc<FGraph>, edges: impl IntoIterator<Item = usize>, vertices: impl IntoIterator<Item = usize>) -> SubgraphHandle {
        let h = SubgraphHandle { parent: parent.clone(), edges: sorted(edges), vertices: sorted(vertices) };
        debug_assert!(subgraph_check(parent, h.edges.iter().copied(), h.vertices.iter().copied()).is_ok());
        h
    }

    pub fn parent(&self) -> &Arc<FGraph> {
        &self.parent
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_whole(&self) -> bool {
        self.edges.len() == self.parent.edge_count() && self.vertices.len() == self.parent.vertex_count()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.vertices.is_empty()
    }

    pub fn same_parent(&self, other: &SubgraphHandle) -> Result<()> {
        if Arc::ptr_eq(&self.parent, &other.parent) || *self.parent == *other.parent {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    /// Carrier containment.
    pub fn is_within(&self, other: &SubgraphHandle) -> bool {
        self.edges.iter().all(|&e| other.contains_edge(e)) && self.vertices.iter().all(|&v| other.contains_vertex(v))
    }

    pub fn edge_ids(&self) -> FiniteSet {
        FiniteSet::new(self.edges.iter().map(|&e| self.parent.edge_id(e).clone()))
    }

    pub fn vertex_ids(&self) -> FiniteSet {
        FiniteSet::new(self.vertices.iter().map(|&v| self.parent.vertex_id(v).clone()))
    }

    /// The subgraph as a graph of its own, keeping ids.
    pub fn to_graph(&self) -> FGraph {
        let mut pos = vec![usize::MAX; self.parent.vertex_count()];
        for (i, &v) in self.vertices.iter().enumerate() {
            pos[v] = i;
        }
        let structure = self.edges.iter().map(|&e| self.parent.value(e).map_atoms(&mut |&a| pos[a])).collect();
        FGraph::from_indexed(self.parent.spec().clone(), self.edge_ids(), self.vertex_ids(), structure)
    }

    /// Inclusion of `to_graph()` into the parent.
    pub fn inclusion(&self) -> Hom {
        Hom::trusted(Arc::new(self.to_graph()), self.parent.clone(), self.edges.clone(), self.vertices.clone())
    }

    /// Inclusion with a caller-supplied copy of `to_graph()`.
    pub fn inclusion_from(&self, sub: Arc<FGraph>) -> Hom {
        Hom::trusted(sub, self.parent.clone(), self.edges.clone(), self.vertices.clone())
    }
}
