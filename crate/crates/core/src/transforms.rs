//! Natural transformations between functors and the graph constructions
//! built on them: simplification, minimization, orientation lifting and
//! conjunct decomposition.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cofree::{ColorSet, Coloring};
use crate::error::{Error, Result};
use crate::functor::{FunctorSpec, FunctorValue, Value};
use crate::graph::FGraph;
use crate::hom::Hom;
use crate::id::{ElementId, FiniteSet};
use crate::limits::{edge_induced, hom_to_terminal, terminal_graph};
use crate::morphism::{kernel, quotient, Quotient};
use crate::subgraph::SubgraphHandle;

pub type Component = Arc<dyn Fn(&FiniteSet, &Value) -> Value + Send + Sync>;

/// A family `τ_V: F(V) -> G(V)`, given by its component function.
#[derive(Clone)]
pub struct NaturalTransformation {
    pub name: String,
    pub source: FunctorSpec,
    pub target: FunctorSpec,
    component: Component,
}

impl fmt::Debug for NaturalTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NaturalTransformation({}: {:?} -> {:?})", self.name, self.source, self.target)
    }
}

/// Applies `f` to every leaf of `w`, following the grammar of `spec`.
fn map_leaves(spec: &FunctorSpec, w: &Value, f: &dyn Fn(&Value) -> Value) -> Value {
    use FunctorValue as V;
    let mut out = match (spec, w) {
        (FunctorSpec::Identity, x) => f(x),
        (FunctorSpec::UPair | FunctorSpec::FinPowerset, V::SetOf(xs)) => V::SetOf(xs.iter().map(f).collect()),
        (FunctorSpec::DPair | FunctorSpec::KTuple { .. }, V::Tuple(xs)) => V::Tuple(xs.iter().map(f).collect()),
        (FunctorSpec::DirectedHyper, V::Tuple(xs)) => match xs.as_slice() {
            [h, V::SetOf(t)] => V::Tuple(vec![f(h), V::SetOf(t.iter().map(f).collect())]),
            _ => w.clone(),
        },
        (FunctorSpec::Colored { inner, .. }, V::Colored(c, x)) => {
            let g = |leaf: &Value| match leaf {
                V::Colored(xv, l) => V::Colored(xv.clone(), Box::new(f(l))),
                other => other.clone(),
            };
            V::Colored(c.clone(), Box::new(map_leaves(inner, x, &g)))
        }
        (FunctorSpec::Sum { parts }, V::Tagged(i, x)) => V::Tagged(*i, Box::new(map_leaves(&parts[*i], x, f))),
        _ => w.clone(),
    };
    out.canonicalize();
    out
}

impl NaturalTransformation {
    pub fn new(
        name: impl Into<String>,
        source: FunctorSpec,
        target: FunctorSpec,
        component: impl Fn(&FiniteSet, &Value) -> Value + Send + Sync + 'static,
    ) -> Self {
        NaturalTransformation { name: name.into(), source, target, component: Arc::new(component) }
    }

    pub fn apply(&self, set: &FiniteSet, w: &Value) -> Value {
        (self.component)(set, w)
    }

    pub fn identity(spec: FunctorSpec) -> Self {
        NaturalTransformation::new("identity", spec.clone(), spec, |_, w| w.clone())
    }

    /// `(v1, v2) ↦ {v1, v2}`.
    pub fn deorient() -> Self {
        NaturalTransformation::new("deorient", FunctorSpec::DPair, FunctorSpec::UPair, |_, w| match w {
            FunctorValue::Tuple(xs) => FunctorValue::set(xs.iter().cloned()),
            other => other.clone(),
        })
    }

    /// `(v, S) ↦ {v} ∪ S`.
    pub fn underlying_hyper() -> Self {
        NaturalTransformation::new("underlying-hyper", FunctorSpec::DirectedHyper, FunctorSpec::FinPowerset, |_, w| {
            match w {
                FunctorValue::Tuple(xs) => match xs.as_slice() {
                    [h, FunctorValue::SetOf(t)] => FunctorValue::set(t.iter().cloned().chain([h.clone()])),
                    _ => w.clone(),
                },
                other => other.clone(),
            }
        })
    }

    /// Drops edge and vertex colors: `F(π_V)∘π`.
    pub fn uncolor(colored: &FunctorSpec) -> Result<Self> {
        let FunctorSpec::Colored { inner, .. } = colored else {
            return Err(Error::PreconditionViolated("uncolor needs a colored functor".into()));
        };
        let inner_spec = (**inner).clone();
        let walk = inner_spec.clone();
        Ok(NaturalTransformation::new("uncolor", colored.clone(), inner_spec, move |_, w| match w {
            FunctorValue::Colored(_, x) => map_leaves(&walk, x, &|leaf| match leaf {
                FunctorValue::Colored(_, l) => (**l).clone(),
                other => other.clone(),
            }),
            other => other.clone(),
        }))
    }
}

/// Result of a bounded naturality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Naturality {
    Natural,
    /// The component leaves `G(V)`.
    IllTyped { domain: FiniteSet, value: Value, output: Value },
    /// `τ(F(f) w) != G(f)(τ w)`.
    NotNatural {
        domain: FiniteSet,
        codomain: FiniteSet,
        map: BTreeMap<ElementId, ElementId>,
        value: Value,
        left: Value,
        right: Value,
    },
}

fn sample_set(n: usize) -> FiniteSet {
    FiniteSet::new((0..n).map(|i| format!("x{i}")))
}

/// Exhaustive check over all maps between sets of size `<= size_bound`.
pub fn check_naturality(tau: &NaturalTransformation, size_bound: usize, cap: u128) -> Result<Naturality> {
    for a in 0..=size_bound {
        let dom = sample_set(a);
        let values = tau.source.enumerate(&dom, cap)?;
        for w in &values {
            let out = tau.apply(&dom, w);
            if tau.target.validate_over(&out, &dom).is_err() {
                return Ok(Naturality::IllTyped { domain: dom, value: w.clone(), output: out });
            }
        }
        for b in 0..=size_bound {
            let cod: FiniteSet = FiniteSet::new((0..b).map(|i| format!("y{i}")));
            if a > 0 && b == 0 {
                continue;
            }
            let maps = (b as u128).pow(a as u32);
            if maps.saturating_mul(values.len() as u128) > cap {
                return Err(Error::EnumerationCapExceeded { what: "naturality squares".into(), cap });
            }
            for code in 0..maps.max(1) {
                let f: BTreeMap<ElementId, ElementId> = (0..a)
                    .map(|i| {
                        let j = (code / (b as u128).pow(i as u32) % b.max(1) as u128) as usize;
                        (dom.get(i).clone(), cod.get(j).clone())
                    })
                    .collect();
                for w in &values {
                    let left = tau.apply(&cod, &w.map_atoms(&mut |x| f[x].clone()));
                    let right = tau.apply(&dom, w).map_atoms(&mut |x| f[x].clone());
                    if left != right {
                        return Ok(Naturality::NotNatural {
                            domain: dom.clone(),
                            codomain: cod,
                            map: f,
                            value: w.clone(),
                            left,
                            right,
                        });
                    }
                }
            }
        }
    }
    Ok(Naturality::Natural)
}

/// `(E, V, τ_V∘g)`.
pub fn apply_transformation(tau: &NaturalTransformation, g: &FGraph) -> Result<FGraph> {
    if g.spec() != &tau.source {
        return Err(Error::SpecMismatch);
    }
    let edges = (0..g.edge_count()).map(|e| (g.edge_id(e).clone(), tau.apply(g.vertices(), &g.named_value(e))));
    FGraph::new(tau.target.clone(), g.vertices().iter().cloned(), edges.collect::<Vec<_>>())
}

/// The same maps, now between transformed graphs.
pub fn apply_transformation_hom(tau: &NaturalTransformation, phi: &Hom) -> Result<Hom> {
    let s = Arc::new(apply_transformation(tau, phi.source())?);
    let t = Arc::new(apply_transformation(tau, phi.target())?);
    Hom::from_indices(s, t, phi.edge_map().to_vec(), phi.vertex_map().to_vec())
}

/// A graph over the source functor that `τ` sends onto `g`, found by
/// searching each edge's preimage; `None` if some value has none.
pub fn object_preimage(tau: &NaturalTransformation, g: &FGraph, cap: u128) -> Result<Option<FGraph>> {
    if g.spec() != &tau.target {
        return Err(Error::SpecMismatch);
    }
    let candidates = tau.source.enumerate(g.vertices(), cap)?;
    let mut edges = Vec::new();
    for e in 0..g.edge_count() {
        let w = g.named_value(e);
        match candidates.iter().find(|u| tau.apply(g.vertices(), u) == w) {
            Some(u) => edges.push((g.edge_id(e).clone(), u.clone())),
            None => return Ok(None),
        }
    }
    Ok(Some(FGraph::new(tau.source.clone(), g.vertices().iter().cloned(), edges)?))
}

/// General transformation along carrier functors `T_E`, `T_V` and a map
/// `τ: T_E(F1 V) -> F2(T_V V)`. New edges are `T_E(E)`, new vertices `T_V(V)`,
/// both named by their printed form.
pub fn apply_general_transformation(
    carrier_e: &FunctorSpec,
    carrier_v: &FunctorSpec,
    target: &FunctorSpec,
    tau: &dyn Fn(&FunctorValue<Value>) -> FunctorValue<Value>,
    g: &FGraph,
    cap: u128,
) -> Result<FGraph> {
    let new_edges = carrier_e.enumerate(g.edges(), cap)?;
    let new_vertices = carrier_v.enumerate(g.vertices(), cap)?;
    let vertex_ids: FiniteSet = FiniteSet::new(new_vertices.iter().map(|v| v.to_string()));
    let mut edges = Vec::with_capacity(new_edges.len());
    for t in &new_edges {
        let lifted: FunctorValue<Value> =
            t.map_atoms(&mut |e| g.named_value(g.edge_index(e.as_str()).unwrap()));
        let out = tau(&lifted);
        let named: Value = out.map_atoms(&mut |v| ElementId::from(v.to_string()));
        edges.push((ElementId::from(t.to_string()), named));
    }
    FGraph::new(target.clone(), vertex_ids.iter().cloned(), edges)
}

/// Wraps a colored graph: edge `e` becomes `Colored(γE e, g(e)` with each
/// vertex leaf paired with its color`)`.
pub fn color_graph(g: &FGraph, coloring: &Coloring, colors: &ColorSet) -> Result<FGraph> {
    if coloring.edges.len() != g.edge_count() || coloring.vertices.len() != g.vertex_count() {
        return Err(Error::DomainMismatch("coloring does not fit the graph".into()));
    }
    let spec = FunctorSpec::colored(colors.edge_colors.clone(), colors.vertex_colors.clone(), g.spec().clone());
    let edges: Vec<(ElementId, Value)> = (0..g.edge_count())
        .map(|e| {
            let inner = map_leaves(g.spec(), &g.named_value(e), &|leaf| match leaf {
                FunctorValue::Atom(v) => {
                    let c = coloring.vertices[g.vertex_index(v.as_str()).unwrap()];
                    FunctorValue::Colored(colors.vertex_colors.get(c).clone(), Box::new(leaf.clone()))
                }
                other => other.clone(),
            });
            let c = colors.edge_colors.get(coloring.edges[e]).clone();
            (g.edge_id(e).clone(), FunctorValue::Colored(c, Box::new(inner)))
        })
        .collect();
    FGraph::new(spec, g.vertices().iter().cloned(), edges)
}

/// Identifies parallel edges; edges of the result are named by their value.
pub fn simplify(g: &Arc<FGraph>) -> Result<(Arc<FGraph>, Hom)> {
    let mut by_name: BTreeMap<String, Value> = BTreeMap::new();
    for e in 0..g.edge_count() {
        let w = g.named_value(e);
        by_name.insert(w.to_string(), w);
    }
    let s = Arc::new(FGraph::new(
        g.spec().clone(),
        g.vertices().iter().cloned(),
        by_name.into_iter().map(|(k, w)| (ElementId::from(k), w)).collect::<Vec<_>>(),
    )?);
    let em = (0..g.edge_count()).map(|e| s.edge_index(&g.named_value(e).to_string()).unwrap()).collect();
    let vm = (0..g.vertex_count()).collect();
    let hom = Hom::from_indices(g.clone(), s.clone(), em, vm)?;
    Ok((s, hom))
}

/// `φ` between the simplified graphs: `w ↦ F(φV)(w)`.
pub fn simplify_hom(phi: &Hom) -> Result<Hom> {
    let (s1, _) = simplify(phi.source())?;
    let (s2, _) = simplify(phi.target())?;
    let t = phi.target();
    let em = (0..s1.edge_count())
        .map(|e| {
            let w = s1.value(e).map_atoms(&mut |&v| phi.vertex_map()[v]);
            s2.edge_index(&t.name_value(&w).to_string())
                .ok_or_else(|| Error::NotAHomomorphism(s1.edge_id(e).clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Hom::from_indices(s1, s2, em, phi.vertex_map().to_vec())
}

/// Quotient by the kernel of the hom into the terminal graph.
pub fn minimize(g: &Arc<FGraph>, cap: u128) -> Result<Quotient> {
    let t = terminal_graph(g.spec(), cap)?;
    let bang = hom_to_terminal(g, &t)?;
    quotient(g, &kernel(&bang))
}

#[derive(Debug, Clone)]
pub struct LiftedOrientation {
    /// Chosen vertex per source edge.
    pub orientation: Vec<usize>,
    /// Both endpoints as directed hypergraphs, and `φ` between them.
    pub hom: Hom,
}

fn directed(g: &FGraph, omega: &[usize]) -> FGraph {
    let structure = (0..g.edge_count())
        .map(|e| FunctorValue::Tuple(vec![FunctorValue::Atom(omega[e]), g.value(e).clone()]))
        .collect();
    FGraph::from_indexed(FunctorSpec::DirectedHyper, g.edges().clone(), g.vertices().clone(), structure)
}

/// Lifts an orientation `ω2` of the target of a powerset hom to its source:
/// `ω1(e)` is the smallest `v ∈ g1(e)` with `φV(v) = ω2(φE(e))`.
pub fn lift_orientation(phi: &Hom, omega2: &[usize]) -> Result<LiftedOrientation> {
    let (g1, g2) = (phi.source(), phi.target());
    if g1.spec() != &FunctorSpec::FinPowerset {
        return Err(Error::PreconditionViolated("orientation lifting needs powerset graphs".into()));
    }
    if omega2.len() != g2.edge_count() {
        return Err(Error::DomainMismatch("orientation must cover every target edge".into()));
    }
    for (f, &v) in omega2.iter().enumerate() {
        if !g2.support(f).contains(&v) {
            return Err(Error::NotAnOrientation(g2.edge_id(f).clone()));
        }
    }
    let mut omega1 = Vec::with_capacity(g1.edge_count());
    for e in 0..g1.edge_count() {
        let want = omega2[phi.edge_map()[e]];
        let v = g1
            .support(e)
            .into_iter()
            .find(|&v| phi.vertex_map()[v] == want)
            .ok_or_else(|| Error::NotAHomomorphism(g1.edge_id(e).clone()))?;
        omega1.push(v);
    }
    let d1 = Arc::new(directed(g1, &omega1));
    let d2 = Arc::new(directed(g2, omega2));
    let hom = Hom::from_indices(d1, d2, phi.edge_map().to_vec(), phi.vertex_map().to_vec())?;
    Ok(LiftedOrientation { orientation: omega1, hom })
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// One edge-induced subgraph per edge, in edge order.
    pub conjuncts: Vec<SubgraphHandle>,
    /// Vertices in no edge's support.
    pub isolated: Vec<usize>,
}

pub fn conjunct_decomposition(g: &Arc<FGraph>) -> Decomposition {
    Decomposition {
        conjuncts: (0..g.edge_count()).map(|e| edge_induced(g, e)).collect(),
        isolated: g.isolated_vertices(),
    }
}

/// Some edge generates the whole graph.
pub fn is_one_generated(g: &Arc<FGraph>) -> bool {
    (0..g.edge_count()).any(|e| edge_induced(g, e).is_whole())
}

/// Not a conjunct sum of proper subgraphs: some edge lies in no proper
/// subgraph. An edge lies in a proper subgraph exactly when the subgraph it
/// generates is proper, so this coincides with [`is_one_generated`].
pub fn is_conjunctly_irreducible(g: &Arc<FGraph>) -> bool {
    is_one_generated(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph;

    #[test]
    fn builtins_are_natural() {
        let colored = FunctorSpec::colored(FiniteSet::new(["1", "2"]), FiniteSet::new(["r"]), FunctorSpec::UPair);
        for tau in [
            NaturalTransformation::deorient(),
            NaturalTransformation::underlying_hyper(),
            NaturalTransformation::uncolor(&colored).unwrap(),
            NaturalTransformation::identity(FunctorSpec::ktuple(3, 2)),
        ] {
            assert_eq!(check_naturality(&tau, 3, 1 << 20).unwrap(), Naturality::Natural, "{}", tau.name);
        }
    }

    #[test]
    fn broken_component_caught() {
        let tau = NaturalTransformation::new("swap-x0", FunctorSpec::DPair, FunctorSpec::DPair, |_, w| match w {
            FunctorValue::Tuple(xs) if xs[0] == Value::atom("x0") => FunctorValue::Tuple(vec![xs[1].clone(), xs[0].clone()]),
            other => other.clone(),
        });
        assert!(matches!(check_naturality(&tau, 2, 1 << 20).unwrap(), Naturality::NotNatural { .. }));
    }

    #[test]
    fn deorient_graph() {
        let g = graph(FunctorSpec::DPair, ["a", "b"], [("e", Value::dpair("b", "a"))]).unwrap();
        let h = apply_transformation(&NaturalTransformation::deorient(), &g).unwrap();
        assert_eq!(h.named_value(0), Value::upair("a", "b"));
        let back = object_preimage(&NaturalTransformation::deorient(), &h, 100).unwrap().unwrap();
        assert_eq!(apply_transformation(&NaturalTransformation::deorient(), &back).unwrap(), h);
    }

    #[test]
    fn minimize_upair_to_loop() {
        let g = Arc::new(
            graph(FunctorSpec::UPair, ["a", "b", "c"], [("e", Value::upair("a", "b")), ("f", Value::upair("b", "c"))])
                .unwrap(),
        );
        let m = minimize(&g, 100).unwrap();
        assert_eq!((m.graph.vertex_count(), m.graph.edge_count()), (1, 1));
        let (s, _) = simplify(&g).unwrap();
        assert_eq!(s.edge_count(), 2);
    }

    #[test]
    fn orientation_lifts() {
        let g1 = Arc::new(
            graph(
                FunctorSpec::FinPowerset,
                ["a", "b", "c"],
                [("e", FunctorValue::set(Value::atoms(["a", "b", "c"])))],
            )
            .unwrap(),
        );
        let g2 = Arc::new(
            graph(FunctorSpec::FinPowerset, ["x", "y"], [("f", FunctorValue::set(Value::atoms(["x", "y"])))]).unwrap(),
        );
        let phi = Hom::from_indices(g1, g2, vec![0], vec![0, 1, 1]).unwrap();
        let lifted = lift_orientation(&phi, &[1]).unwrap();
        assert_eq!(lifted.orientation, vec![1]);
        let bad = Arc::new(
            graph(FunctorSpec::FinPowerset, ["x", "y"], [("f", FunctorValue::set(Value::atoms(["x"])))]).unwrap(),
        );
        let phi2 = Hom::from_indices(bad.clone(), bad, vec![0], vec![0, 1]).unwrap();
        assert!(matches!(lift_orientation(&phi2, &[1]), Err(Error::NotAnOrientation(_))));
    }

    #[test]
    fn general_with_identity_carriers() {
        let g = graph(FunctorSpec::DPair, ["a", "b"], [("e", Value::dpair("a", "b"))]).unwrap();
        let tau = |w: &FunctorValue<Value>| match w {
            FunctorValue::Atom(FunctorValue::Tuple(xs)) => {
                FunctorValue::set(xs.iter().map(|x| FunctorValue::Atom(x.clone())))
            }
            other => panic!("unexpected {other:?}"),
        };
        let h = apply_general_transformation(&FunctorSpec::Identity, &FunctorSpec::Identity, &FunctorSpec::UPair, &tau, &g, 100)
            .unwrap();
        assert_eq!(h, apply_transformation(&NaturalTransformation::deorient(), &g).unwrap());
    }
}
