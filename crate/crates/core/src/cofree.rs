//! Cofree graphs `C(X) = (X_E × F X_V, X_V, π2)` and the colorings they classify.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functor::{FunctorSpec, IxValue};
use crate::graph::FGraph;
use crate::hom::{Hom, HomMaps};
use crate::id::FiniteSet;
use crate::search::HomSearch;
use crate::subgraph::SubgraphHandle;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorSet {
    pub edge_colors: FiniteSet,
    pub vertex_colors: FiniteSet,
}

impl ColorSet {
    pub fn new(edge_colors: FiniteSet, vertex_colors: FiniteSet) -> Self {
        ColorSet { edge_colors, vertex_colors }
    }

    /// `({*}, {*})`.
    pub fn terminal() -> Self {
        ColorSet::new(FiniteSet::singleton("*"), FiniteSet::singleton("*"))
    }
}

/// A pair of maps `E -> X_E`, `V -> X_V`, as color indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl Coloring {
    /// Reads a coloring from id tables (`edge_map`: edge → edge color, ...).
    pub fn from_maps(g: &FGraph, colors: &ColorSet, maps: &HomMaps) -> Result<Coloring> {
        let look = |kind: &str, dom: &FiniteSet, map: &std::collections::BTreeMap<_, _>, cod: &FiniteSet| {
            dom.iter()
                .map(|x| {
                    let c: &crate::id::ElementId =
                        map.get(x).ok_or_else(|| Error::DomainMismatch(format!("{kind} {x} has no color")))?;
                    cod.index_of(c.as_str()).ok_or_else(|| Error::DomainMismatch(format!("unknown {kind} color {c}")))
                })
                .collect::<Result<Vec<usize>>>()
        };
        Ok(Coloring {
            edges: look("edge", g.edges(), &maps.edge_map, &colors.edge_colors)?,
            vertices: look("vertex", g.vertices(), &maps.vertex_map, &colors.vertex_colors)?,
        })
    }

    pub fn to_maps(&self, g: &FGraph, colors: &ColorSet) -> HomMaps {
        HomMaps {
            edge_map: self
                .edges
                .iter()
                .enumerate()
                .map(|(e, &c)| (g.edge_id(e).clone(), colors.edge_colors.get(c).clone()))
                .collect(),
            vertex_map: self
                .vertices
                .iter()
                .enumerate()
                .map(|(v, &c)| (g.vertex_id(v).clone(), colors.vertex_colors.get(c).clone()))
                .collect(),
        }
    }
}

/// `C(X)`; vertex `i` is vertex color `i`, edge ids are `(c|w)`.
#[derive(Debug, Clone)]
pub struct Cofree {
    colors: ColorSet,
    graph: Arc<FGraph>,
    parts: Vec<(usize, IxValue)>,
    lookup: HashMap<(usize, IxValue), usize>,
}

impl Cofree {
    pub fn new(spec: &FunctorSpec, colors: &ColorSet, cap: u128) -> Result<Cofree> {
        let nv = colors.vertex_colors.len();
        let atoms: Vec<usize> = (0..nv).collect();
        let ws = spec.enumerate_atoms(&atoms, cap)?;
        let total = (ws.len() as u128).saturating_mul(colors.edge_colors.len() as u128);
        if total > cap {
            return Err(Error::EnumerationCapExceeded { what: "cofree edges".into(), cap });
        }
        let mut named = Vec::new();
        let mut by_id = HashMap::new();
        for (c, cid) in colors.edge_colors.iter().enumerate() {
            for w in &ws {
                let name = w.map_atoms(&mut |&v| colors.vertex_colors.get(v).clone());
                let id = format!("({cid}|{name})");
                by_id.insert(id.clone(), (c, w.clone()));
                named.push((id.into(), w.clone()));
            }
        }
        let graph = FGraph::from_unsorted(spec.clone(), named, colors.vertex_colors.iter().cloned().collect())?;
        let parts: Vec<(usize, IxValue)> = graph.edges().iter().map(|e| by_id[e.as_str()].clone()).collect();
        let lookup = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(Cofree { colors: colors.clone(), graph: Arc::new(graph), parts, lookup })
    }

    pub fn colors(&self) -> &ColorSet {
        &self.colors
    }

    pub fn graph(&self) -> &Arc<FGraph> {
        &self.graph
    }

    /// Edge color of a cofree edge (the counit on edges).
    pub fn edge_color(&self, e: usize) -> usize {
        self.parts[e].0
    }

    pub fn edge_for(&self, color: usize, w: &IxValue) -> Option<usize> {
        self.lookup.get(&(color, w.clone())).copied()
    }

    /// The coloring of `C(X)` itself that `id` induces: the counit.
    pub fn counit(&self) -> Coloring {
        Coloring {
            edges: self.parts.iter().map(|p| p.0).collect(),
            vertices: (0..self.graph.vertex_count()).collect(),
        }
    }
}

pub fn cofree_graph(spec: &FunctorSpec, colors: &ColorSet, cap: u128) -> Result<Cofree> {
    Cofree::new(spec, colors, cap)
}

fn check_coloring(g: &FGraph, c: &Coloring, colors: &ColorSet) -> Result<()> {
    let ok = c.edges.len() == g.edge_count()
        && c.vertices.len() == g.vertex_count()
        && c.edges.iter().all(|&x| x < colors.edge_colors.len())
        && c.vertices.iter().all(|&x| x < colors.vertex_colors.len());
    if ok {
        Ok(())
    } else {
        Err(Error::DomainMismatch("coloring does not fit the graph and color set".into()))
    }
}

/// `γ̄: G -> C(X)`, `e ↦ (γE(e), F(γV)(g(e)))`.
pub fn induced_hom(g: &Arc<FGraph>, coloring: &Coloring, cofree: &Cofree) -> Result<Hom> {
    if g.spec() != cofree.graph.spec() {
        return Err(Error::SpecMismatch);
    }
    check_coloring(g, coloring, &cofree.colors)?;
    let em = (0..g.edge_count())
        .map(|e| {
            let w = g.value(e).map_atoms(&mut |&v| coloring.vertices[v]);
            cofree.edge_for(coloring.edges[e], &w).expect("cofree graph holds every colored value")
        })
        .collect();
    Ok(Hom::trusted(g.clone(), cofree.graph.clone(), em, coloring.vertices.clone()))
}

/// Reads back the coloring of a hom into `C(X)`: `ε∘φ`.
pub fn coloring_of(phi: &Hom, cofree: &Cofree) -> Result<Coloring> {
    if phi.target() != cofree.graph() {
        return Err(Error::DomainMismatch("hom does not land in this cofree graph".into()));
    }
    Ok(Coloring {
        edges: phi.edge_map().iter().map(|&e| cofree.edge_color(e)).collect(),
        vertices: phi.vertex_map().to_vec(),
    })
}

/// `C(γE, γV): C(X) -> C(Y)`, `(c, w) ↦ (γE c, F(γV) w)`.
pub fn cofree_on_morphisms(from: &Cofree, to: &Cofree, edge_colors: &[usize], vertex_colors: &[usize]) -> Result<Hom> {
    if from.graph.spec() != to.graph.spec() {
        return Err(Error::SpecMismatch);
    }
    let fits = edge_colors.len() == from.colors.edge_colors.len()
        && vertex_colors.len() == from.colors.vertex_colors.len()
        && edge_colors.iter().all(|&c| c < to.colors.edge_colors.len())
        && vertex_colors.iter().all(|&c| c < to.colors.vertex_colors.len());
    if !fits {
        return Err(Error::DomainMismatch("color maps do not fit the color sets".into()));
    }
    let em = from
        .parts
        .iter()
        .map(|(c, w)| to.edge_for(edge_colors[*c], &w.map_atoms(&mut |&v| vertex_colors[v])).unwrap())
        .collect();
    Ok(Hom::trusted(from.graph.clone(), to.graph.clone(), em, vertex_colors.to_vec()))
}

/// `η: G -> C(E, V)`, `e ↦ (e, g(e))`.
pub fn unit_embedding(g: &Arc<FGraph>, cap: u128) -> Result<(Cofree, Hom)> {
    let colors = ColorSet::new(g.edges().clone(), g.vertices().clone());
    let cofree = Cofree::new(g.spec(), &colors, cap)?;
    let identity = Coloring { edges: (0..g.edge_count()).collect(), vertices: (0..g.vertex_count()).collect() };
    let eta = induced_hom(g, &identity, &cofree)?;
    Ok((cofree, eta))
}

/// Extends `φ: U -> C(X)` from a subgraph to its parent. Elements outside
/// `U` take the smallest color.
pub fn extend_to_cofree(handle: &SubgraphHandle, phi: &Hom, cofree: &Cofree) -> Result<Hom> {
    if **phi.source() != handle.to_graph() {
        return Err(Error::DomainMismatch("hom is not defined on this subgraph".into()));
    }
    let partial = coloring_of(phi, cofree)?;
    let g = handle.parent();
    let mut edges = Vec::with_capacity(g.edge_count());
    for e in 0..g.edge_count() {
        match handle.edges().binary_search(&e) {
            Ok(i) => edges.push(partial.edges[i]),
            Err(_) if cofree.colors.edge_colors.is_empty() => {
                return Err(Error::EmptyColorSet(format!("no edge color for {}", g.edge_id(e))))
            }
            Err(_) => edges.push(0),
        }
    }
    let mut vertices = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        match handle.vertices().binary_search(&v) {
            Ok(i) => vertices.push(partial.vertices[i]),
            Err(_) if cofree.colors.vertex_colors.is_empty() => {
                return Err(Error::EmptyColorSet(format!("no vertex color for {}", g.vertex_id(v))))
            }
            Err(_) => vertices.push(0),
        }
    }
    induced_hom(g, &Coloring { edges, vertices }, cofree)
}

/// A retraction `r: C(E, V) -> G` with `r∘η = id`, if one exists.
pub fn is_regular_injective(g: &Arc<FGraph>, cap: u128) -> Result<Option<Hom>> {
    let (cofree, eta) = unit_embedding(g, cap)?;
    let c = cofree.graph();
    let mut search = HomSearch::new(c, g);
    for v in 0..g.vertex_count() {
        search = search.fix_vertex(eta.vertex_map()[v], v);
    }
    for e in 0..g.edge_count() {
        search = search.fix_edge(eta.edge_map()[e], e);
    }
    let found = search.first(cap)?;
    Ok(found.map(|(em, vm)| Hom::trusted(c.clone(), g.clone(), em, vm)))
}

/// Builds `C(X_E, {*}) × C({*}, X_V)` and the explicit iso onto `C(X)`.
pub fn cofree_decomposition_check(spec: &FunctorSpec, colors: &ColorSet, cap: u128) -> Result<Hom> {
    let star = FiniteSet::singleton("*");
    let left = Cofree::new(spec, &ColorSet::new(colors.edge_colors.clone(), star.clone()), cap)?;
    let right = Cofree::new(spec, &ColorSet::new(star, colors.vertex_colors.clone()), cap)?;
    let whole = Cofree::new(spec, colors, cap)?;
    let prod = crate::limits::product(&[left.graph().clone(), right.graph().clone()], cap)?;
    let (p1, p2) = (&prod.projections[0], &prod.projections[1]);
    let em = (0..prod.graph.edge_count())
        .map(|e| {
            let color = left.edge_color(p1.edge_map()[e]);
            let w = right.graph().value(p2.edge_map()[e]);
            whole.edge_for(color, w).unwrap()
        })
        .collect();
    let iso = Hom::from_indices(prod.graph.clone(), whole.graph().clone(), em, p2.vertex_map().to_vec())?;
    if !iso.is_bijective() {
        return Err(Error::PreconditionViolated("decomposition map is not bijective".into()));
    }
    Ok(iso)
}

/// Every coloring of `g` into `colors`, vertices before edges, each in
/// lexicographic order. Stops early on `Break`.
pub fn for_each_coloring(
    g: &FGraph,
    colors: &ColorSet,
    budget: u128,
    mut f: impl FnMut(&Coloring) -> ControlFlow<()>,
) -> Result<()> {
    let (ne, nv) = (colors.edge_colors.len(), colors.vertex_colors.len());
    let total = (nv as u128)
        .checked_pow(g.vertex_count() as u32)
        .and_then(|a| (ne as u128).checked_pow(g.edge_count() as u32).and_then(|b| a.checked_mul(b)));
    match total {
        Some(t) if t <= budget => {}
        _ => return Err(Error::BudgetExceeded { what: "colorings", cap: budget }),
    }
    if total == Some(0) {
        return Ok(());
    }
    let mut c = Coloring { edges: vec![0; g.edge_count()], vertices: vec![0; g.vertex_count()] };
    loop {
        if f(&c).is_break() {
            return Ok(());
        }
        let mut advanced = false;
        for i in (0..c.edges.len()).rev() {
            c.edges[i] += 1;
            if c.edges[i] < ne {
                advanced = true;
                break;
            }
            c.edges[i] = 0;
        }
        if advanced {
            continue;
        }
        for i in (0..c.vertices.len()).rev() {
            c.vertices[i] += 1;
            if c.vertices[i] < nv {
                advanced = true;
                break;
            }
            c.vertices[i] = 0;
        }
        if !advanced {
            return Ok(());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::Value;
    use crate::graph::graph;

    fn x123() -> ColorSet {
        ColorSet::new(FiniteSet::new(["1", "2", "3"]), FiniteSet::new(["r", "g", "b"]))
    }

    #[test]
    fn upair_cofree_size() {
        let c = Cofree::new(&FunctorSpec::UPair, &x123(), 1000).unwrap();
        let g = c.graph();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 18));
        let loops = g.structure().iter().filter(|w| w.support().len() == 1).count();
        assert_eq!(loops, 9);
        assert!(g.edge_index("(1|{b,g})").is_some());
    }

    #[test]
    fn induced_hom_and_counit() {
        let c = Cofree::new(&FunctorSpec::UPair, &x123(), 1000).unwrap();
        let g = Arc::new(graph(FunctorSpec::UPair, ["a", "b"], [("e", Value::upair("a", "b"))]).unwrap());
        let col = Coloring { edges: vec![2], vertices: vec![0, 0] };
        let h = induced_hom(&g, &col, &c).unwrap();
        assert_eq!(c.graph().edge_id(h.edge_map()[0]).as_str(), "(3|{b})");
        assert_eq!(coloring_of(&h, &c).unwrap(), col);
    }

    #[test]
    fn regular_injective_needs_all_values() {
        let k2 = Arc::new(graph(FunctorSpec::UPair, ["a", "b"], [("e", Value::upair("a", "b"))]).unwrap());
        assert!(is_regular_injective(&k2, 1000).unwrap().is_none());
        let full = Arc::new(
            graph(
                FunctorSpec::UPair,
                ["a", "b"],
                [("e", Value::upair("a", "b")), ("la", Value::upair("a", "a")), ("lb", Value::upair("b", "b"))],
            )
            .unwrap(),
        );
        let r = is_regular_injective(&full, 10_000).unwrap().unwrap();
        let (_, eta) = unit_embedding(&full, 1000).unwrap();
        assert_eq!(r.compose(&eta).unwrap(), Hom::identity(full));
    }

    #[test]
    fn coloring_order_vertices_first() {
        let g = graph(FunctorSpec::UPair, ["a"], [("e", Value::upair("a", "a"))]).unwrap();
        let colors = ColorSet::new(FiniteSet::new(["1", "2"]), FiniteSet::new(["r", "s"]));
        let mut seen = Vec::new();
        for_each_coloring(&g, &colors, 100, |c| {
            seen.push((c.vertices[0], c.edges[0]));
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    }
}
