//! Finite limits and colimits, and the subgraph lattice.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cofree::{ColorSet, Cofree};
use crate::error::{Error, Result};
use crate::functor::{FunctorSpec, IxValue};
use crate::graph::FGraph;
use crate::hom::Hom;
use crate::id::ElementId;
use crate::morphism::{quotient, Quotient};
use crate::partition::{EquivPair, Partition};
use crate::subgraph::SubgraphHandle;

#[derive(Debug, Clone)]
pub struct Coproduct {
    pub graph: Arc<FGraph>,
    pub injections: Vec<Hom>,
}

fn same_spec(gs: &[Arc<FGraph>]) -> Result<&FunctorSpec> {
    let first = gs.first().ok_or_else(|| Error::PreconditionViolated("empty family".into()))?;
    if gs.iter().any(|g| g.spec() != first.spec()) {
        return Err(Error::SpecMismatch);
    }
    Ok(first.spec())
}

/// Disjoint union; summand `i`'s elements are renamed `i:x`.
pub fn coproduct(gs: &[Arc<FGraph>]) -> Result<Coproduct> {
    let spec = same_spec(gs)?.clone();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        let off = vertices.len();
        vertices.extend(g.vertices().iter().map(|v| ElementId::from(format!("{i}:{v}"))));
        for e in 0..g.edge_count() {
            edges.push((format!("{i}:{}", g.edge_id(e)).into(), g.value(e).map_atoms(&mut |&v| v + off)));
        }
    }
    let graph = Arc::new(FGraph::from_unsorted(spec, edges, vertices)?);
    let injections = gs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let em = g.edges().iter().map(|e| graph.edge_index(&format!("{i}:{e}")).unwrap()).collect();
            let vm = g.vertices().iter().map(|v| graph.vertex_index(&format!("{i}:{v}")).unwrap()).collect();
            Hom::trusted(g.clone(), graph.clone(), em, vm)
        })
        .collect();
    Ok(Coproduct { graph, injections })
}

/// The copairing `[φ_1, ..., φ_n]: ΣG_i -> H`.
pub fn copair(sum: &Coproduct, homs: &[Hom], target: &Arc<FGraph>) -> Result<Hom> {
    if homs.len() != sum.injections.len() {
        return Err(Error::DomainMismatch("one hom per summand needed".into()));
    }
    let mut em = vec![0; sum.graph.edge_count()];
    let mut vm = vec![0; sum.graph.vertex_count()];
    for (inj, h) in sum.injections.iter().zip(homs) {
        if h.source() != inj.source() || h.target() != target {
            return Err(Error::DomainMismatch("hom does not fit its summand".into()));
        }
        for (e, &f) in inj.edge_map().iter().enumerate() {
            em[f] = h.edge_map()[e];
        }
        for (v, &w) in inj.vertex_map().iter().enumerate() {
            vm[w] = h.vertex_map()[v];
        }
    }
    Ok(Hom::trusted(sum.graph.clone(), target.clone(), em, vm))
}

/// Quotient of the common target by the equivalence generated by
/// `φ(x) ~ ψ(x)`; that equivalence is always a congruence.
pub fn coequalize(phi: &Hom, psi: &Hom) -> Result<Quotient> {
    if phi.source() != psi.source() || phi.target() != psi.target() {
        return Err(Error::DomainMismatch("maps are not parallel".into()));
    }
    let t = phi.target();
    let theta = EquivPair {
        edges: Partition::generated(t.edge_count(), phi.edge_map().iter().copied().zip(psi.edge_map().iter().copied())),
        vertices: Partition::generated(
            t.vertex_count(),
            phi.vertex_map().iter().copied().zip(psi.vertex_map().iter().copied()),
        ),
    };
    quotient(t, &theta)
}

#[derive(Debug, Clone)]
pub struct Pushout {
    pub graph: Arc<FGraph>,
    pub left: Hom,
    pub right: Hom,
}

/// Pushout of `G1 <-φ- G0 -ψ-> G2`.
pub fn pushout(phi: &Hom, psi: &Hom) -> Result<Pushout> {
    if phi.source() != psi.source() {
        return Err(Error::DomainMismatch("maps have different sources".into()));
    }
    let sum = coproduct(&[phi.target().clone(), psi.target().clone()])?;
    let a = sum.injections[0].compose(phi)?;
    let b = sum.injections[1].compose(psi)?;
    let q = coequalize(&a, &b)?;
    let left = q.projection.compose(&sum.injections[0])?;
    let right = q.projection.compose(&sum.injections[1])?;
    Ok(Pushout { graph: q.graph, left, right })
}

pub fn union_of_subgraphs(hs: &[SubgraphHandle]) -> Result<SubgraphHandle> {
    let first = hs.first().ok_or_else(|| Error::PreconditionViolated("empty family".into()))?;
    hs.iter().try_for_each(|h| first.same_parent(h))?;
    Ok(SubgraphHandle::trusted(
        first.parent(),
        hs.iter().flat_map(|h| h.edges().iter().copied()),
        hs.iter().flat_map(|h| h.vertices().iter().copied()),
    ))
}

/// Largest subgraph inside `(E_sub, V_sub)`.
pub fn cogenerated_subgraph(
    g: &Arc<FGraph>,
    edges: impl IntoIterator<Item = usize>,
    vertices: impl IntoIterator<Item = usize>,
) -> SubgraphHandle {
    let mut inside = vec![false; g.vertex_count()];
    let vertices: Vec<usize> = vertices.into_iter().collect();
    vertices.iter().for_each(|&v| inside[v] = true);
    let edges: Vec<usize> = edges.into_iter().filter(|&e| g.value(e).all_atoms(|&a| inside[a])).collect();
    SubgraphHandle::trusted(g, edges, vertices)
}

/// Smallest subgraph containing `(E_sub, V_sub)`.
pub fn generated_subgraph(
    g: &Arc<FGraph>,
    edges: impl IntoIterator<Item = usize>,
    vertices: impl IntoIterator<Item = usize>,
) -> SubgraphHandle {
    let edges: Vec<usize> = edges.into_iter().collect();
    let mut vs: Vec<usize> = vertices.into_iter().collect();
    for &e in &edges {
        vs.extend(g.support(e));
    }
    SubgraphHandle::trusted(g, edges, vs)
}

pub fn edge_induced(g: &Arc<FGraph>, e: usize) -> SubgraphHandle {
    generated_subgraph(g, [e], [])
}

pub fn intersection(hs: &[SubgraphHandle]) -> Result<SubgraphHandle> {
    let first = hs.first().ok_or_else(|| Error::PreconditionViolated("empty family".into()))?;
    hs.iter().try_for_each(|h| first.same_parent(h))?;
    let edges = first.edges().iter().copied().filter(|&e| hs.iter().all(|h| h.contains_edge(e)));
    let vertices = first.vertices().iter().copied().filter(|&v| hs.iter().all(|h| h.contains_vertex(v)));
    Ok(cogenerated_subgraph(first.parent(), edges, vertices))
}

/// Every subgraph, ordered by vertex subset then edge subset (as bitmasks).
pub fn subgraph_lattice(g: &Arc<FGraph>, cap: u128) -> Result<Vec<SubgraphHandle>> {
    let n = g.vertex_count();
    if n >= 64 || g.edge_count() >= 64 {
        return Err(Error::EnumerationCapExceeded { what: "subgraphs".into(), cap });
    }
    let supports: Vec<u64> =
        (0..g.edge_count()).map(|e| g.support(e).iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    let mut total: u128 = 0;
    for vmask in 0u64..(1u64 << n) {
        let allowed = supports.iter().filter(|&&s| s & !vmask == 0).count();
        total += 1u128 << allowed;
        if total > cap {
            return Err(Error::EnumerationCapExceeded { what: "subgraphs".into(), cap });
        }
    }
    let mut out = Vec::with_capacity(total as usize);
    for vmask in 0u64..(1u64 << n) {
        let vertices: Vec<usize> = (0..n).filter(|&v| vmask >> v & 1 == 1).collect();
        let allowed: Vec<usize> = (0..g.edge_count()).filter(|&e| supports[e] & !vmask == 0).collect();
        for emask in 0u64..(1u64 << allowed.len()) {
            let edges = (0..allowed.len()).filter(|&i| emask >> i & 1 == 1).map(|i| allowed[i]);
            out.push(SubgraphHandle::trusted(g, edges, vertices.iter().copied()));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Product {
    pub graph: Arc<FGraph>,
    pub projections: Vec<Hom>,
}

fn odometer(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if sizes.iter().any(|&s| s == 0) {
        return out;
    }
    let mut cur = vec![0; sizes.len()];
    loop {
        out.push(cur.clone());
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < sizes[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

fn tuple_id(parts: impl IntoIterator<Item = String>) -> String {
    format!("({})", parts.into_iter().collect::<Vec<_>>().join(","))
}

/// Vertices are tuples `(a,b,..)`; edges are `(ē, w)` with `w ∈ F(∏V)`
/// projecting onto every `g_i(e_i)`, named `(e1,e2,..|w)`.
pub fn product(gs: &[Arc<FGraph>], cap: u128) -> Result<Product> {
    let spec = same_spec(gs)?.clone();
    let combos = odometer(&gs.iter().map(|g| g.vertex_count()).collect::<Vec<_>>());
    let vertex_ids: Vec<String> =
        combos.iter().map(|t| tuple_id(t.iter().enumerate().map(|(i, &v)| gs[i].vertex_id(v).to_string()))).collect();
    let atoms: Vec<usize> = (0..combos.len()).collect();
    let mut witnesses: HashMap<Vec<IxValue>, Vec<IxValue>> = HashMap::new();
    for w in spec.enumerate_atoms(&atoms, cap)? {
        let key: Vec<IxValue> = (0..gs.len()).map(|i| w.map_atoms(&mut |&t| combos[t][i])).collect();
        witnesses.entry(key).or_default().push(w);
    }
    let edge_combos = odometer(&gs.iter().map(|g| g.edge_count()).collect::<Vec<_>>());
    let mut edges = Vec::new();
    let mut edge_parts = HashMap::new();
    for ebar in &edge_combos {
        let key: Vec<IxValue> = ebar.iter().enumerate().map(|(i, &e)| gs[i].value(e).clone()).collect();
        for w in witnesses.get(&key).into_iter().flatten() {
            let name = w.map_atoms(&mut |&t| vertex_ids[t].clone());
            let parts: Vec<String> = ebar.iter().enumerate().map(|(i, &e)| gs[i].edge_id(e).to_string()).collect();
            let id = format!("({}|{name})", parts.join(","));
            edge_parts.insert(id.clone(), ebar.clone());
            edges.push((id.into(), w.clone()));
            if edges.len() as u128 > cap {
                return Err(Error::EnumerationCapExceeded { what: "product edges".into(), cap });
            }
        }
    }
    let graph = Arc::new(FGraph::from_unsorted(spec, edges, vertex_ids.iter().map(|s| s.as_str().into()).collect())?);
    let vertex_pos: HashMap<&str, usize> = vertex_ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let projections = gs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let em = graph.edges().iter().map(|e| edge_parts[e.as_str()][i]).collect();
            let vm = graph.vertices().iter().map(|v| combos[vertex_pos[v.as_str()]][i]).collect();
            Hom::trusted(graph.clone(), g.clone(), em, vm)
        })
        .collect();
    Ok(Product { graph, projections })
}

/// Largest subgraph on which `φ` and `ψ` agree, with its inclusion.
pub fn equalize(phi: &Hom, psi: &Hom) -> Result<(SubgraphHandle, Hom)> {
    if phi.source() != psi.source() || phi.target() != psi.target() {
        return Err(Error::DomainMismatch("maps are not parallel".into()));
    }
    let g = phi.source();
    let edges = (0..g.edge_count()).filter(|&e| phi.edge_map()[e] == psi.edge_map()[e]);
    let vertices = (0..g.vertex_count()).filter(|&v| phi.vertex_map()[v] == psi.vertex_map()[v]);
    let h = cogenerated_subgraph(g, edges, vertices);
    let incl = h.inclusion();
    Ok((h, incl))
}

/// Pullback of a subgraph inclusion along `φ`: the elements mapping into the
/// subgraph whose structure stays inside the preimage vertex set.
pub fn preimage(phi: &Hom, sub: &SubgraphHandle) -> Result<SubgraphHandle> {
    if sub.parent() != phi.target() {
        return Err(Error::ParentMismatch);
    }
    let g = phi.source();
    let edges = (0..g.edge_count()).filter(|&e| sub.contains_edge(phi.edge_map()[e]));
    let vertices = (0..g.vertex_count()).filter(|&v| sub.contains_vertex(phi.vertex_map()[v]));
    Ok(cogenerated_subgraph(g, edges, vertices))
}

#[derive(Debug, Clone)]
pub struct Pullback {
    pub graph: Arc<FGraph>,
    pub left: Hom,
    pub right: Hom,
}

/// Pullback of `G1 -φ-> H <-ψ- G2` as an equalizer inside the product.
pub fn pullback(phi: &Hom, psi: &Hom, cap: u128) -> Result<Pullback> {
    if phi.target() != psi.target() {
        return Err(Error::DomainMismatch("maps have different targets".into()));
    }
    let prod = product(&[phi.source().clone(), psi.source().clone()], cap)?;
    let a = phi.compose(&prod.projections[0])?;
    let b = psi.compose(&prod.projections[1])?;
    let (_, incl) = equalize(&a, &b)?;
    let left = prod.projections[0].compose(&incl)?;
    let right = prod.projections[1].compose(&incl)?;
    Ok(Pullback { graph: incl.source().clone(), left, right })
}

/// `C({*}, {*})`.
pub fn terminal_graph(spec: &FunctorSpec, cap: u128) -> Result<Arc<FGraph>> {
    Ok(Cofree::new(spec, &ColorSet::terminal(), cap)?.graph().clone())
}

/// The unique hom into the terminal graph.
pub fn hom_to_terminal(g: &Arc<FGraph>, terminal: &Arc<FGraph>) -> Result<Hom> {
    if terminal.vertex_count() != 1 {
        return Err(Error::PreconditionViolated("target is not terminal".into()));
    }
    let index = terminal.value_index();
    let em = (0..g.edge_count())
        .map(|e| {
            let w = g.value(e).map_atoms(&mut |_| 0usize);
            index.get(&w).and_then(|es| es.first().copied())
        })
        .collect::<Option<Vec<usize>>>()
        .ok_or_else(|| Error::PreconditionViolated("target is not terminal".into()))?;
    Hom::from_indices(g.clone(), terminal.clone(), em, vec![0; g.vertex_count()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::Value;
    use crate::graph::graph;

    fn edge(a: &str, b: &str) -> Arc<FGraph> {
        Arc::new(graph(FunctorSpec::UPair, [a, b], [(format!("e{a}{b}"), Value::upair(a, b))]).unwrap())
    }

    #[test]
    fn upair_product_has_two_edges() {
        let p = product(&[edge("v", "w"), edge("x", "y")], 10_000).unwrap();
        assert_eq!(p.graph.vertex_count(), 4);
        assert_eq!(p.graph.edge_count(), 2);
        let shown: Vec<String> = (0..2).map(|e| p.graph.named_value(e).to_string()).collect();
        assert!(shown.contains(&"{(v,x),(w,y)}".to_string()));
        assert!(shown.contains(&"{(v,y),(w,x)}".to_string()));
    }

    #[test]
    fn terminal_graphs() {
        let t = terminal_graph(&FunctorSpec::UPair, 100).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (1, 1));
        let t = terminal_graph(&FunctorSpec::FinPowerset, 100).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (1, 2));
    }

    #[test]
    fn pushout_glues_a_vertex() {
        let a = edge("a", "b");
        let pt = Arc::new(graph(FunctorSpec::UPair, ["p"], Vec::<(String, Value)>::new()).unwrap());
        let f = Hom::from_indices(pt.clone(), a.clone(), vec![], vec![1]).unwrap();
        let g = Hom::from_indices(pt, a.clone(), vec![], vec![0]).unwrap();
        let po = pushout(&f, &g).unwrap();
        assert_eq!((po.graph.vertex_count(), po.graph.edge_count()), (3, 2));
    }

    #[test]
    fn lattice_of_single_edge() {
        let l = subgraph_lattice(&edge("a", "b"), 100).unwrap();
        assert_eq!(l.len(), 5);
    }

    #[test]
    fn coproduct_mismatch() {
        let d = Arc::new(graph(FunctorSpec::DPair, ["a"], Vec::<(String, Value)>::new()).unwrap());
        assert!(matches!(coproduct(&[edge("a", "b"), d]), Err(Error::SpecMismatch)));
    }
}
