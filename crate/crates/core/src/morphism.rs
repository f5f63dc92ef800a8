//! Images, kernels, congruences, quotients, the two diagram lemmas,
//! morphism classes and the isomorphism theorems.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::FGraph;
use crate::hom::Hom;
use crate::id::{ElementId, FiniteSet};
use crate::partition::{EquivPair, Partition};
use crate::relations::{diagonal_only, largest_graph_relation_within, RelationPair};
use crate::subgraph::{subgraph_check, SubgraphHandle};

/// `φ[G1]` as a subgraph of the target, and `φ` corestricted to it.
pub fn image(phi: &Hom) -> (SubgraphHandle, Hom) {
    let target = phi.target();
    let handle = SubgraphHandle::trusted(target, phi.edge_map().iter().copied(), phi.vertex_map().iter().copied());
    let mid = Arc::new(handle.to_graph());
    let restriction = corestrict(phi, &handle, &mid);
    (handle, restriction)
}

/// `φ` viewed as a map into the subgraph `handle` (whose graph is `mid`).
pub(crate) fn corestrict(phi: &Hom, handle: &SubgraphHandle, mid: &Arc<FGraph>) -> Hom {
    let em = phi.edge_map().iter().map(|e| handle.edges().binary_search(e).unwrap()).collect();
    let vm = phi.vertex_map().iter().map(|v| handle.vertices().binary_search(v).unwrap()).collect();
    Hom::trusted(phi.source().clone(), mid.clone(), em, vm)
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub epi: Hom,
    pub mono: Hom,
    pub mid: Arc<FGraph>,
}

/// `φ = mono ∘ epi` through the image.
pub fn factorize(phi: &Hom) -> Factorization {
    let (handle, epi) = image(phi);
    let mid = epi.target().clone();
    let mono = handle.inclusion_from(mid.clone());
    Factorization { epi, mono, mid }
}

pub fn kernel(phi: &Hom) -> EquivPair {
    EquivPair { edges: Partition::from_labels(phi.edge_map()), vertices: Partition::from_labels(phi.vertex_map()) }
}

fn check_fits(g: &FGraph, theta: &EquivPair) -> Result<()> {
    if theta.fits(g) {
        Ok(())
    } else {
        Err(Error::DomainMismatch("equivalence does not match the graph's carriers".into()))
    }
}

/// Whether `θ` is a congruence: identified edges have the same value after
/// collapsing vertex classes. Returns the first violating pair otherwise.
pub fn is_congruence(g: &FGraph, theta: &EquivPair) -> Result<Result<(), (usize, usize)>> {
    check_fits(g, theta)?;
    let projected: Vec<_> =
        g.structure().iter().map(|w| w.map_atoms(&mut |&v| theta.vertices.class_of(v))).collect();
    for e1 in 0..g.edge_count() {
        for e2 in e1 + 1..g.edge_count() {
            if theta.edges.same(e1, e2) && projected[e1] != projected[e2] {
                return Ok(Err((e1, e2)));
            }
        }
    }
    Ok(Ok(()))
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub graph: Arc<FGraph>,
    pub projection: Hom,
}

/// `G/θ`. Each class is named by its smallest member.
pub fn quotient(g: &Arc<FGraph>, theta: &EquivPair) -> Result<Quotient> {
    if let Err((a, b)) = is_congruence(g, theta)? {
        return Err(Error::NotACongruence(g.edge_id(a).clone(), g.edge_id(b).clone()));
    }
    let edge_reps = theta.edges.representatives();
    let vertex_reps = theta.vertices.representatives();
    // Representatives increase with class number, so class numbers are indices.
    let edges = FiniteSet::new(edge_reps.iter().map(|&e| g.edge_id(e).clone()));
    let vertices = FiniteSet::new(vertex_reps.iter().map(|&v| g.vertex_id(v).clone()));
    let structure = edge_reps
        .iter()
        .map(|&e| g.value(e).map_atoms(&mut |&v| theta.vertices.class_of(v)))
        .collect();
    let q = Arc::new(FGraph::from_indexed(g.spec().clone(), edges, vertices, structure));
    let projection = Hom::trusted(g.clone(), q.clone(), theta.edges.labels().to_vec(), theta.vertices.labels().to_vec());
    Ok(Quotient { graph: q, projection })
}

/// Why a mediating hom does not exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refusal {
    /// Identified by the epi but not by the other map.
    EdgePair(ElementId, ElementId),
    VertexPair(ElementId, ElementId),
    /// Not in the image of the mono.
    EdgeOutside(ElementId),
    VertexOutside(ElementId),
    EmptyTarget,
}

fn first_split(a: &[usize], b: &[usize]) -> Option<(usize, usize)> {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] == a[j] && b[i] != b[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Given a surjective `φ: G1 -> G2` and `ψ: G1 -> G3`, the unique `χ` with
/// `χ∘φ = ψ`, or the pair that prevents it.
pub fn mediate_through_epi(phi: &Hom, psi: &Hom) -> Result<Result<Hom, Refusal>> {
    if phi.source() != psi.source() {
        return Err(Error::DomainMismatch("maps have different sources".into()));
    }
    if !phi.is_surjective() {
        return Err(Error::PreconditionViolated("first map is not surjective".into()));
    }
    let g1 = phi.source();
    let (g2, g3) = (phi.target(), psi.target());
    if (g3.edge_count() == 0 && g2.edge_count() > 0) || (g3.vertex_count() == 0 && g2.vertex_count() > 0) {
        return Ok(Err(Refusal::EmptyTarget));
    }
    if let Some((a, b)) = first_split(phi.edge_map(), psi.edge_map()) {
        return Ok(Err(Refusal::EdgePair(g1.edge_id(a).clone(), g1.edge_id(b).clone())));
    }
    if let Some((a, b)) = first_split(phi.vertex_map(), psi.vertex_map()) {
        return Ok(Err(Refusal::VertexPair(g1.vertex_id(a).clone(), g1.vertex_id(b).clone())));
    }
    let mut em = vec![0; g2.edge_count()];
    for (e, &f) in phi.edge_map().iter().enumerate() {
        em[f] = psi.edge_map()[e];
    }
    let mut vm = vec![0; g2.vertex_count()];
    for (v, &w) in phi.vertex_map().iter().enumerate() {
        vm[w] = psi.vertex_map()[v];
    }
    Ok(Ok(Hom::from_indices(g2.clone(), g3.clone(), em, vm)?))
}

/// Given an injective `φ: G2 -> G3` and `ψ: G1 -> G3`, the unique `χ` with
/// `φ∘χ = ψ`, or the first element of `ψ`'s image outside `φ`'s.
pub fn mediate_through_mono(phi: &Hom, psi: &Hom) -> Result<Result<Hom, Refusal>> {
    if phi.target() != psi.target() {
        return Err(Error::DomainMismatch("maps have different targets".into()));
    }
    if !phi.is_injective() {
        return Err(Error::PreconditionViolated("first map is not injective".into()));
    }
    let g3 = phi.target();
    let mut inv_e = vec![None; g3.edge_count()];
    for (e, &f) in phi.edge_map().iter().enumerate() {
        inv_e[f] = Some(e);
    }
    let mut inv_v = vec![None; g3.vertex_count()];
    for (v, &w) in phi.vertex_map().iter().enumerate() {
        inv_v[w] = Some(v);
    }
    let mut em = Vec::new();
    for &f in psi.edge_map() {
        match inv_e[f] {
            Some(e) => em.push(e),
            None => return Ok(Err(Refusal::EdgeOutside(g3.edge_id(f).clone()))),
        }
    }
    let mut vm = Vec::new();
    for &w in psi.vertex_map() {
        match inv_v[w] {
            Some(v) => vm.push(v),
            None => return Ok(Err(Refusal::VertexOutside(g3.vertex_id(w).clone()))),
        }
    }
    Ok(Ok(Hom::from_indices(psi.source().clone(), phi.source().clone(), em, vm)?))
}

/// The inverse, when `φ` is bijective.
pub fn is_iso(phi: &Hom) -> Option<Hom> {
    if !phi.is_bijective() {
        return None;
    }
    let mut em = vec![0; phi.target().edge_count()];
    for (e, &f) in phi.edge_map().iter().enumerate() {
        em[f] = e;
    }
    let mut vm = vec![0; phi.target().vertex_count()];
    for (v, &w) in phi.vertex_map().iter().enumerate() {
        vm[w] = v;
    }
    Some(Hom::trusted(phi.target().clone(), phi.source().clone(), em, vm))
}

pub fn is_epi(phi: &Hom) -> bool {
    phi.is_surjective()
}

pub fn is_regular_mono(phi: &Hom) -> bool {
    phi.is_injective()
}

/// Mono iff the largest graph relation inside `ker φ` is the diagonal.
pub fn is_mono(phi: &Hom, cap: u128) -> Result<bool> {
    let g = phi.source();
    let bounds = RelationPair::from_equiv(&kernel(phi));
    Ok(diagonal_only(&largest_graph_relation_within(g, g, &bounds, cap)?))
}

/// Regular epi iff surjective and the largest graph relation inside
/// `ker φ` generates `ker φ`.
pub fn is_regular_epi(phi: &Hom, cap: u128) -> Result<bool> {
    if !phi.is_surjective() {
        return Ok(false);
    }
    let g = phi.source();
    let ker = kernel(phi);
    let rel = largest_graph_relation_within(g, g, &RelationPair::from_equiv(&ker), cap)?;
    let gen = EquivPair {
        edges: Partition::generated(g.edge_count(), rel.edge_pairs().iter().copied()),
        vertices: Partition::generated(g.vertex_count(), rel.vertex_pairs().iter().copied()),
    };
    Ok(gen == ker)
}

/// `G1/ker φ ≅ φ[G1]`.
pub fn first_iso(phi: &Hom) -> Result<Hom> {
    let q = quotient(phi.source(), &kernel(phi))?;
    let (_, restriction) = image(phi);
    match mediate_through_epi(&q.projection, &restriction)? {
        Ok(chi) => Ok(chi),
        Err(r) => Err(Error::PreconditionViolated(format!("kernel quotient failed to mediate: {r:?}"))),
    }
}

fn mediate_or_fail(phi: &Hom, psi: &Hom) -> Result<Hom> {
    mediate_through_epi(phi, psi)?
        .map_err(|r| Error::PreconditionViolated(format!("kernel containment fails: {r:?}")))
}

#[derive(Debug, Clone)]
pub struct SecondIso {
    /// `χ: G/θ1 -> G/θ2` with `χ∘π_θ1 = π_θ2`.
    pub chi: Hom,
    pub chi_kernel: EquivPair,
    /// `(G/θ1)/ker χ -> G/θ2`.
    pub iso: Hom,
}

pub fn iso_theorem_2(g: &Arc<FGraph>, theta1: &EquivPair, theta2: &EquivPair) -> Result<SecondIso> {
    check_fits(g, theta1)?;
    check_fits(g, theta2)?;
    if !theta1.refines(theta2) {
        return Err(Error::PreconditionViolated("first congruence is not contained in the second".into()));
    }
    let q1 = quotient(g, theta1)?;
    let q2 = quotient(g, theta2)?;
    let chi = mediate_or_fail(&q1.projection, &q2.projection)?;
    let chi_kernel = kernel(&chi);
    let q3 = quotient(&q1.graph, &chi_kernel)?;
    let iso = mediate_or_fail(&q3.projection, &chi)?;
    if !iso.is_bijective() {
        return Err(Error::PreconditionViolated("induced map is not bijective".into()));
    }
    Ok(SecondIso { chi, chi_kernel, iso })
}

#[derive(Debug, Clone)]
pub struct ThirdIso {
    /// `G_U^θ`: everything `θ`-related to the subgraph.
    pub saturation: SubgraphHandle,
    /// `θ` restricted to the subgraph's own carriers.
    pub restricted: EquivPair,
    /// `G_U/(θ ∩ U²) -> G_U^θ/θ`.
    pub iso: Hom,
}

fn restrict(p: &Partition, members: &[usize]) -> Partition {
    let labels: Vec<usize> = members.iter().map(|&i| p.class_of(i)).collect();
    Partition::from_labels(&labels)
}

pub fn iso_theorem_3(g: &Arc<FGraph>, theta: &EquivPair, u: &SubgraphHandle) -> Result<ThirdIso> {
    check_fits(g, theta)?;
    if u.parent() != g {
        return Err(Error::ParentMismatch);
    }
    if let Err((a, b)) = is_congruence(g, theta)? {
        return Err(Error::NotACongruence(g.edge_id(a).clone(), g.edge_id(b).clone()));
    }
    let hit = |p: &Partition, members: &[usize], n: usize| -> Vec<usize> {
        let mut classes = vec![false; p.class_count()];
        members.iter().for_each(|&i| classes[p.class_of(i)] = true);
        (0..n).filter(|&i| classes[p.class_of(i)]).collect()
    };
    let sat_e = hit(&theta.edges, u.edges(), g.edge_count());
    let sat_v = hit(&theta.vertices, u.vertices(), g.vertex_count());
    let saturation = subgraph_check(g, sat_e, sat_v)
        .map_err(|e| Error::PreconditionViolated(format!("saturation is not a subgraph at edge {}", g.edge_id(e))))?;

    let gu = Arc::new(u.to_graph());
    let gs = Arc::new(saturation.to_graph());
    let restricted =
        EquivPair { edges: restrict(&theta.edges, u.edges()), vertices: restrict(&theta.vertices, u.vertices()) };
    let on_sat = EquivPair {
        edges: restrict(&theta.edges, saturation.edges()),
        vertices: restrict(&theta.vertices, saturation.vertices()),
    };
    let qu = quotient(&gu, &restricted)?;
    let qs = quotient(&gs, &on_sat)?;
    let incl_e = u.edges().iter().map(|e| saturation.edges().binary_search(e).unwrap()).collect();
    let incl_v = u.vertices().iter().map(|v| saturation.vertices().binary_search(v).unwrap()).collect();
    let incl = Hom::from_indices(gu.clone(), gs.clone(), incl_e, incl_v)?;
    let down = qs.projection.compose(&incl)?;
    let iso = mediate_or_fail(&qu.projection, &down)?;
    if !iso.is_bijective() {
        return Err(Error::PreconditionViolated("induced map is not bijective".into()));
    }
    Ok(ThirdIso { saturation, restricted, iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::{FunctorSpec, Value};
    use crate::graph::graph;
    use crate::hom::HomMaps;

    pub(crate) fn c4_to_k3() -> Hom {
        let c4 = graph(
            FunctorSpec::UPair,
            ["v1", "v2", "v3", "v4"],
            [
                ("e1", Value::upair("v1", "v2")),
                ("e2", Value::upair("v2", "v3")),
                ("e3", Value::upair("v3", "v4")),
                ("e4", Value::upair("v4", "v1")),
            ],
        )
        .unwrap();
        let k3 = graph(
            FunctorSpec::UPair,
            ["u1", "u2", "u3"],
            [("f1", Value::upair("u1", "u2")), ("f2", Value::upair("u2", "u3")), ("f3", Value::upair("u3", "u1"))],
        )
        .unwrap();
        let pairs = |xs: &[(&str, &str)]| xs.iter().map(|(a, b)| (ElementId::from(*a), ElementId::from(*b))).collect();
        let maps = HomMaps {
            edge_map: pairs(&[("e1", "f1"), ("e2", "f2"), ("e3", "f2"), ("e4", "f1")]),
            vertex_map: pairs(&[("v1", "u1"), ("v2", "u2"), ("v3", "u3"), ("v4", "u2")]),
        };
        Hom::new(Arc::new(c4), Arc::new(k3), &maps).unwrap()
    }

    #[test]
    fn c4_kernel_and_quotient() {
        let phi = c4_to_k3();
        let ker = kernel(&phi);
        assert_eq!(ker.edges.classes(), vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(ker.vertices.classes(), vec![vec![0], vec![1, 3], vec![2]]);
        let q = quotient(phi.source(), &ker).unwrap();
        let names: Vec<&str> = q.graph.edges().iter().map(|e| e.as_str()).collect();
        assert_eq!(names, ["e1", "e2"]);
        assert!(first_iso(&phi).unwrap().is_bijective());
        let f = factorize(&phi);
        assert_eq!(f.mono.compose(&f.epi).unwrap(), phi);
        assert_eq!(f.mid.edge_count(), 2);
        assert!(!is_epi(&phi));
    }

    #[test]
    fn non_congruence_reported() {
        let phi = c4_to_k3();
        let g = phi.source();
        let theta = EquivPair { edges: Partition::generated(4, [(0, 1)]), vertices: Partition::discrete(4) };
        assert_eq!(is_congruence(g, &theta).unwrap(), Err((0, 1)));
        assert!(matches!(quotient(g, &theta), Err(Error::NotACongruence(..))));
    }

    #[test]
    fn noninjective_mono_case() {
        let g = Arc::new(graph(FunctorSpec::DPair, ["v1", "v2"], [("e", Value::dpair("v1", "v2"))]).unwrap());
        let h = Arc::new(graph(FunctorSpec::DPair, ["x"], [("l", Value::dpair("x", "x"))]).unwrap());
        let phi = Hom::from_indices(g, h, vec![0], vec![0, 0]).unwrap();
        assert!(!is_mono(&phi, 1000).unwrap());
        assert!(is_regular_epi(&phi, 1000).unwrap());
    }

    #[test]
    fn ktuple_surjection_not_regular() {
        let spec = FunctorSpec::ktuple(3, 2);
        let t = |a: &str, b: &str, c: &str| crate::functor::FunctorValue::Tuple(Value::atoms([a, b, c]));
        let g = Arc::new(
            graph(spec.clone(), ["a1", "a2", "b1", "b2"], [("e", t("a1", "a1", "a2")), ("f", t("b1", "b2", "b2"))])
                .unwrap(),
        );
        let h = Arc::new(graph(spec, ["x"], [("l", t("x", "x", "x"))]).unwrap());
        let phi = Hom::from_indices(g, h, vec![0, 0], vec![0; 4]).unwrap();
        assert!(phi.is_surjective());
        assert!(!is_regular_epi(&phi, 10_000).unwrap());
    }

    #[test]
    fn mediation_refusals() {
        let phi = c4_to_k3();
        let q = quotient(phi.source(), &kernel(&phi)).unwrap();
        let id = Hom::identity(phi.source().clone());
        let r = mediate_through_epi(&q.projection, &id).unwrap();
        assert_eq!(r, Err(Refusal::EdgePair("e1".into(), "e4".into())));
        let (h, _) = image(&phi);
        let incl = h.inclusion();
        assert!(mediate_through_mono(&incl, &phi).unwrap().is_ok());
        let id_k3 = Hom::identity(phi.target().clone());
        assert_eq!(mediate_through_mono(&incl, &id_k3).unwrap(), Err(Refusal::EdgeOutside("f3".into())));
    }
}
