//! Graph relations: pairs `(R_E, R_V)` of relations together with a witness
//! `R_E -> F(R_V)` whose projections recover both structure maps.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functor::IxValue;
use crate::graph::FGraph;
use crate::hom::Hom;
use crate::partition::EquivPair;

/// Plain pair of relations between two graphs, by index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationPair {
    pub edge_pairs: BTreeSet<(usize, usize)>,
    pub vertex_pairs: BTreeSet<(usize, usize)>,
}

impl RelationPair {
    pub fn full(g1: &FGraph, g2: &FGraph) -> RelationPair {
        let mut r = RelationPair::default();
        for a in 0..g1.edge_count() {
            for b in 0..g2.edge_count() {
                r.edge_pairs.insert((a, b));
            }
        }
        for a in 0..g1.vertex_count() {
            for b in 0..g2.vertex_count() {
                r.vertex_pairs.insert((a, b));
            }
        }
        r
    }

    pub fn from_equiv(theta: &EquivPair) -> RelationPair {
        RelationPair {
            edge_pairs: theta.edges.pairs().into_iter().collect(),
            vertex_pairs: theta.vertices.pairs().into_iter().collect(),
        }
    }

    pub fn diagonal(g: &FGraph) -> RelationPair {
        RelationPair {
            edge_pairs: (0..g.edge_count()).map(|e| (e, e)).collect(),
            vertex_pairs: (0..g.vertex_count()).map(|v| (v, v)).collect(),
        }
    }

    pub fn is_within(&self, other: &RelationPair) -> bool {
        self.edge_pairs.is_subset(&other.edge_pairs) && self.vertex_pairs.is_subset(&other.vertex_pairs)
    }
}

/// A witnessed graph relation. Witness atoms index `vertex_pairs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphRelation {
    left: Arc<FGraph>,
    right: Arc<FGraph>,
    edge_pairs: Vec<(usize, usize)>,
    vertex_pairs: Vec<(usize, usize)>,
    witness: Vec<IxValue>,
}

impl GraphRelation {
    pub fn left(&self) -> &Arc<FGraph> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FGraph> {
        &self.right
    }

    pub fn edge_pairs(&self) -> &[(usize, usize)] {
        &self.edge_pairs
    }

    pub fn vertex_pairs(&self) -> &[(usize, usize)] {
        &self.vertex_pairs
    }

    pub fn witness(&self) -> &[IxValue] {
        &self.witness
    }

    pub fn pairs(&self) -> RelationPair {
        RelationPair {
            edge_pairs: self.edge_pairs.iter().copied().collect(),
            vertex_pairs: self.vertex_pairs.iter().copied().collect(),
        }
    }

    pub fn edge_pair_id(&self, i: usize) -> String {
        let (a, b) = self.edge_pairs[i];
        format!("({},{})", self.left.edge_id(a), self.right.edge_id(b))
    }

    pub fn vertex_pair_id(&self, i: usize) -> String {
        let (a, b) = self.vertex_pairs[i];
        format!("({},{})", self.left.vertex_id(a), self.right.vertex_id(b))
    }

    /// Witness of the `i`-th edge pair with `(v,w)` ids as atoms.
    pub fn named_witness(&self, i: usize) -> crate::functor::Value {
        self.witness[i].map_atoms(&mut |&p| self.vertex_pair_id(p).into())
    }

    /// The relation as a graph, with edges `(e1,e2)` and vertices `(v,w)`,
    /// and its two projections.
    pub fn span(&self) -> Result<(Arc<FGraph>, Hom, Hom)> {
        let vertices: Vec<_> = (0..self.vertex_pairs.len()).map(|i| self.vertex_pair_id(i).into()).collect();
        let edges = (0..self.edge_pairs.len()).map(|i| (self.edge_pair_id(i).into(), self.witness[i].clone())).collect();
        let g = Arc::new(FGraph::from_unsorted(self.left.spec().clone(), edges, vertices)?);
        let mut em1 = Vec::new();
        let mut em2 = Vec::new();
        for e in g.edges() {
            let i = (0..self.edge_pairs.len()).find(|&i| self.edge_pair_id(i) == e.as_str()).unwrap();
            em1.push(self.edge_pairs[i].0);
            em2.push(self.edge_pairs[i].1);
        }
        let mut vm1 = Vec::new();
        let mut vm2 = Vec::new();
        for v in g.vertices() {
            let i = (0..self.vertex_pairs.len()).find(|&i| self.vertex_pair_id(i) == v.as_str()).unwrap();
            vm1.push(self.vertex_pairs[i].0);
            vm2.push(self.vertex_pairs[i].1);
        }
        let p1 = Hom::from_indices(g.clone(), self.left.clone(), em1, vm1)?;
        let p2 = Hom::from_indices(g.clone(), self.right.clone(), em2, vm2)?;
        Ok((g, p1, p2))
    }

    /// Re-checks that every witness projects correctly.
    pub fn is_consistent(&self) -> bool {
        self.edge_pairs.iter().zip(&self.witness).all(|(&(a, b), w)| {
            w.map_atoms(&mut |&p| self.vertex_pairs[p].0) == *self.left.value(a)
                && w.map_atoms(&mut |&p| self.vertex_pairs[p].1) == *self.right.value(b)
        })
    }
}

/// Finds witnesses `w ∈ F(R_V)` with `F(π1)w = u`, `F(π2)w = u'`, memoized
/// on `(u, u')`. Only pairs inside `supp u × supp u'` can occur in a witness,
/// so the search enumerates `F` over that slice of `R_V` alone.
struct WitnessFinder<'a> {
    g1: &'a FGraph,
    g2: &'a FGraph,
    vertex_pairs: &'a [(usize, usize)],
    lookup: HashMap<(usize, usize), usize>,
    memo: HashMap<(IxValue, IxValue), Option<IxValue>>,
    cap: u128,
}

impl<'a> WitnessFinder<'a> {
    fn new(g1: &'a FGraph, g2: &'a FGraph, vertex_pairs: &'a [(usize, usize)], cap: u128) -> Self {
        let lookup = vertex_pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        WitnessFinder { g1, g2, vertex_pairs, lookup, memo: HashMap::new(), cap }
    }

    fn find(&mut self, e1: usize, e2: usize) -> Result<Option<IxValue>> {
        let (u1, u2) = (self.g1.value(e1), self.g2.value(e2));
        let key = (u1.clone(), u2.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let mut local = Vec::new();
        for &a in &u1.support() {
            for &b in &u2.support() {
                if let Some(&i) = self.lookup.get(&(a, b)) {
                    local.push(i);
                }
            }
        }
        let pairs = self.vertex_pairs;
        let found = self
            .g1
            .spec()
            .enumerate_atoms(&local, self.cap)?
            .into_iter()
            .find(|w| w.map_atoms(&mut |&p| pairs[p].0) == *u1 && w.map_atoms(&mut |&p| pairs[p].1) == *u2);
        self.memo.insert(key, found.clone());
        Ok(found)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationCheck {
    Witnessed(GraphRelation),
    /// First edge pair, in order, with no witness.
    Unwitnessed(usize, usize),
}

fn check_bounds(g1: &FGraph, g2: &FGraph, r: &RelationPair) -> Result<()> {
    if g1.spec() != g2.spec() {
        return Err(Error::SpecMismatch);
    }
    let bad_e = r.edge_pairs.iter().any(|&(a, b)| a >= g1.edge_count() || b >= g2.edge_count());
    let bad_v = r.vertex_pairs.iter().any(|&(a, b)| a >= g1.vertex_count() || b >= g2.vertex_count());
    if bad_e || bad_v {
        return Err(Error::DomainMismatch("relation mentions unknown elements".into()));
    }
    Ok(())
}

pub fn is_graph_relation(g1: &Arc<FGraph>, g2: &Arc<FGraph>, r: &RelationPair, cap: u128) -> Result<RelationCheck> {
    check_bounds(g1, g2, r)?;
    let vertex_pairs: Vec<_> = r.vertex_pairs.iter().copied().collect();
    let mut finder = WitnessFinder::new(g1, g2, &vertex_pairs, cap);
    let mut witness = Vec::new();
    for &(a, b) in &r.edge_pairs {
        match finder.find(a, b)? {
            Some(w) => witness.push(w),
            None => return Ok(RelationCheck::Unwitnessed(a, b)),
        }
    }
    Ok(RelationCheck::Witnessed(GraphRelation {
        left: g1.clone(),
        right: g2.clone(),
        edge_pairs: r.edge_pairs.iter().copied().collect(),
        vertex_pairs,
        witness,
    }))
}

/// Largest graph relation inside `bounds`: keep `R_V`, keep the edge pairs
/// that admit a witness over it.
pub fn largest_graph_relation_within(g1: &Arc<FGraph>, g2: &Arc<FGraph>, bounds: &RelationPair, cap: u128) -> Result<GraphRelation> {
    check_bounds(g1, g2, bounds)?;
    let vertex_pairs: Vec<_> = bounds.vertex_pairs.iter().copied().collect();
    let mut finder = WitnessFinder::new(g1, g2, &vertex_pairs, cap);
    let mut edge_pairs = Vec::new();
    let mut witness = Vec::new();
    for &(a, b) in &bounds.edge_pairs {
        if let Some(w) = finder.find(a, b)? {
            edge_pairs.push((a, b));
            witness.push(w);
        }
    }
    Ok(GraphRelation { left: g1.clone(), right: g2.clone(), edge_pairs, vertex_pairs, witness })
}

pub fn largest_graph_relation(g1: &Arc<FGraph>, g2: &Arc<FGraph>, cap: u128) -> Result<GraphRelation> {
    largest_graph_relation_within(g1, g2, &RelationPair::full(g1, g2), cap)
}

/// `G(φ)`: pairs `(x, φ(x))`, witnessed by `F(⟨id, φV⟩)∘g1`.
pub fn graph_of_hom(phi: &Hom) -> GraphRelation {
    let vertex_pairs: Vec<_> = phi.vertex_map().iter().enumerate().map(|(v, &w)| (v, w)).collect();
    let edge_pairs = phi.edge_map().iter().enumerate().map(|(e, &f)| (e, f)).collect();
    let witness = (0..phi.source().edge_count()).map(|e| phi.source().value(e).clone()).collect();
    GraphRelation { left: phi.source().clone(), right: phi.target().clone(), edge_pairs, vertex_pairs, witness }
}

/// Image of `⟨φ1, φ2⟩`. Each edge pair is witnessed through its first
/// preimage edge.
pub fn relation_from_hom_pair(phi1: &Hom, phi2: &Hom) -> Result<GraphRelation> {
    if phi1.source() != phi2.source() {
        return Err(Error::DomainMismatch("homs have different sources".into()));
    }
    let g = phi1.source();
    let vertex_pairs: BTreeSet<(usize, usize)> =
        (0..g.vertex_count()).map(|v| (phi1.vertex_map()[v], phi2.vertex_map()[v])).collect();
    let vertex_pairs: Vec<_> = vertex_pairs.into_iter().collect();
    let pos = |p: (usize, usize)| vertex_pairs.binary_search(&p).unwrap();
    let mut first: std::collections::BTreeMap<(usize, usize), IxValue> = Default::default();
    for e in 0..g.edge_count() {
        let key = (phi1.edge_map()[e], phi2.edge_map()[e]);
        first.entry(key).or_insert_with(|| {
            g.value(e).map_atoms(&mut |&v| pos((phi1.vertex_map()[v], phi2.vertex_map()[v])))
        });
    }
    let (edge_pairs, witness) = first.into_iter().unzip();
    Ok(GraphRelation { left: phi1.target().clone(), right: phi2.target().clone(), edge_pairs, vertex_pairs, witness })
}

/// A single-edge graph mapping onto both edges, when they are related.
#[derive(Debug, Clone)]
pub struct EdgeSpan {
    pub graph: Arc<FGraph>,
    pub left: Hom,
    pub right: Hom,
}

pub fn edges_related(g1: &Arc<FGraph>, e1: usize, g2: &Arc<FGraph>, e2: usize, cap: u128) -> Result<Option<EdgeSpan>> {
    if g1.spec() != g2.spec() {
        return Err(Error::SpecMismatch);
    }
    if e1 >= g1.edge_count() || e2 >= g2.edge_count() {
        return Err(Error::DomainMismatch("unknown edge".into()));
    }
    let s1 = g1.support(e1);
    let s2 = g2.support(e2);
    let mut bounds = RelationPair::default();
    bounds.edge_pairs.insert((e1, e2));
    for &a in &s1 {
        for &b in &s2 {
            bounds.vertex_pairs.insert((a, b));
        }
    }
    let rel = largest_graph_relation_within(g1, g2, &bounds, cap)?;
    if rel.edge_pairs.is_empty() {
        return Ok(None);
    }
    // Keep only the vertex pairs the witness actually uses.
    let used = rel.witness[0].support();
    let vertex_pairs: Vec<_> = used.iter().map(|&p| rel.vertex_pairs[p]).collect();
    let witness = rel.witness[0].map_atoms(&mut |p| used.binary_search(p).unwrap());
    let trimmed = GraphRelation { vertex_pairs, witness: vec![witness], ..rel };
    let (graph, left, right) = trimmed.span()?;
    Ok(Some(EdgeSpan { graph, left, right }))
}

/// `K(φ)` with its diagonal section and first-projection retraction.
#[derive(Debug, Clone)]
pub struct KernelRelation {
    pub relation: GraphRelation,
    pub graph: Arc<FGraph>,
    /// `G1 -> K(φ)`, `x ↦ (x, x)`.
    pub section: Hom,
    /// `K(φ) -> G1`, first projection.
    pub retraction: Hom,
}

pub fn kernel_relation(phi: &Hom, cap: u128) -> Result<KernelRelation> {
    let g = phi.source();
    if !g.spec().weakly_preserves_kernels() {
        return Err(Error::Unsupported(format!(
            "{} does not weakly preserve kernel pairs",
            g.spec().kind_name()
        )));
    }
    let theta = crate::morphism::kernel(phi);
    let bounds = RelationPair::from_equiv(&theta);
    let mut rel = match is_graph_relation(g, g, &bounds, cap)? {
        RelationCheck::Witnessed(r) => r,
        RelationCheck::Unwitnessed(a, b) => {
            return Err(Error::Unsupported(format!(
                "kernel pair ({},{}) has no witness",
                g.edge_id(a),
                g.edge_id(b)
            )))
        }
    };
    // Diagonal pairs get the diagonal witness so the section is a hom.
    for (i, &(a, b)) in rel.edge_pairs.iter().enumerate() {
        if a == b {
            rel.witness[i] = g.value(a).map_atoms(&mut |&v| rel.vertex_pairs.binary_search(&(v, v)).unwrap());
        }
    }
    let (graph, p1, _) = rel.span()?;
    let mut section_e = vec![0; g.edge_count()];
    for (k, e) in graph.edges().iter().enumerate() {
        let i = (0..rel.edge_pairs.len()).find(|&i| rel.edge_pair_id(i) == e.as_str()).unwrap();
        let (a, b) = rel.edge_pairs[i];
        if a == b {
            section_e[a] = k;
        }
    }
    let section_v = (0..g.vertex_count())
        .map(|v| graph.vertex_index(&format!("({},{})", g.vertex_id(v), g.vertex_id(v))).unwrap())
        .collect();
    let section = Hom::from_indices(g.clone(), graph.clone(), section_e, section_v)?;
    Ok(KernelRelation { relation: rel, graph, section, retraction: p1 })
}

/// Related edges of two graphs as a plain index pair.
pub fn related_edge_pairs(g1: &Arc<FGraph>, g2: &Arc<FGraph>, cap: u128) -> Result<Vec<(usize, usize)>> {
    Ok(largest_graph_relation(g1, g2, cap)?.edge_pairs)
}

pub(crate) fn diagonal_only(rel: &GraphRelation) -> bool {
    rel.edge_pairs.iter().all(|&(a, b)| a == b) && rel.vertex_pairs.iter().all(|&(a, b)| a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::{FunctorSpec, FunctorValue, Value};
    use crate::graph::graph;

    fn ktuple_pair() -> (Arc<FGraph>, Arc<FGraph>) {
        let spec = FunctorSpec::ktuple(3, 2);
        let t = |a: &str, b: &str, c: &str| FunctorValue::Tuple(Value::atoms([a, b, c]));
        let g = graph(spec.clone(), ["v1", "v2"], [("e", t("v1", "v1", "v2"))]).unwrap();
        let h = graph(spec, ["w1", "w2"], [("f", t("w1", "w2", "w2"))]).unwrap();
        (Arc::new(g), Arc::new(h))
    }

    #[test]
    fn ktuple_edges_unrelated() {
        let (g, h) = ktuple_pair();
        assert!(edges_related(&g, 0, &h, 0, 1000).unwrap().is_none());
        assert!(edges_related(&g, 0, &g, 0, 1000).unwrap().is_some());
    }

    #[test]
    fn upair_edges_related_with_span() {
        let g = Arc::new(graph(FunctorSpec::UPair, ["a", "b"], [("e", Value::upair("a", "b"))]).unwrap());
        let h = Arc::new(graph(FunctorSpec::UPair, ["x"], [("l", Value::upair("x", "x"))]).unwrap());
        let span = edges_related(&g, 0, &h, 0, 1000).unwrap().unwrap();
        assert_eq!(span.graph.edge_count(), 1);
        assert_eq!(span.graph.vertex_count(), 2);
        assert!(span.left.is_surjective());
    }

    #[test]
    fn kernel_relation_unsupported_for_ktuple() {
        let (g, _) = ktuple_pair();
        let id = Hom::identity(g);
        assert!(matches!(kernel_relation(&id, 1000), Err(Error::Unsupported(_))));
    }

    #[test]
    fn graph_of_hom_is_consistent() {
        let g = Arc::new(graph(FunctorSpec::DPair, ["a", "b"], [("e", Value::dpair("a", "b"))]).unwrap());
        let rel = graph_of_hom(&Hom::identity(g.clone()));
        assert!(rel.is_consistent());
        assert_eq!(rel.named_witness(0), Value::dpair("(a,a)", "(b,b)"));
    }
}
