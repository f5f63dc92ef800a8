use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::FGraph;
use crate::id::ElementId;

/// Edge and vertex maps by id, as given on input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HomMaps {
    pub edge_map: BTreeMap<ElementId, ElementId>,
    pub vertex_map: BTreeMap<ElementId, ElementId>,
}

/// Why a candidate pair of maps is not a homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomViolation {
    DomainMismatch(String),
    /// `g2(φE(e)) != F(φV)(g1(e))`.
    NotCommuting(ElementId),
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomViolation::DomainMismatch(m) => write!(f, "domain mismatch: {m}"),
            HomViolation::NotCommuting(e) => write!(f, "square fails at edge {e}"),
        }
    }
}

impl From<HomViolation> for Error {
    fn from(v: HomViolation) -> Error {
        match v {
            HomViolation::DomainMismatch(m) => Error::DomainMismatch(m),
            HomViolation::NotCommuting(e) => Error::NotAHomomorphism(e),
        }
    }
}

/// A validated homomorphism together with its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    source: Arc<FGraph>,
    target: Arc<FGraph>,
    edge_map: Vec<usize>,
    vertex_map: Vec<usize>,
}

fn to_indices(
    kind: &str,
    map: &BTreeMap<ElementId, ElementId>,
    dom: &crate::id::FiniteSet,
    cod: &crate::id::FiniteSet,
) -> Result<Vec<usize>, HomViolation> {
    let mut out = Vec::with_capacity(dom.len());
    for x in dom {
        let y = map
            .get(x)
            .ok_or_else(|| HomViolation::DomainMismatch(format!("{kind} map is undefined at {x}")))?;
        let j = cod
            .index_of(y.as_str())
            .ok_or_else(|| HomViolation::DomainMismatch(format!("{kind} {x} maps to unknown {y}")))?;
        out.push(j);
    }
    if let Some(extra) = map.keys().find(|k| !dom.contains(k.as_str())) {
        return Err(HomViolation::DomainMismatch(format!("{kind} map has unknown key {extra}")));
    }
    Ok(out)
}

/// First edge at which the square fails, if any.
pub(crate) fn first_noncommuting(source: &FGraph, target: &FGraph, edge_map: &[usize], vertex_map: &[usize]) -> Option<usize> {
    (0..source.edge_count()).find(|&e| {
        let mapped = source.value(e).map_atoms(&mut |&v| vertex_map[v]);
        target.value(edge_map[e]) != &mapped
    })
}

/// Checks totality, codomain membership and the commuting square.
pub fn validate_hom(source: &FGraph, target: &FGraph, maps: &HomMaps) -> Result<(), HomViolation> {
    if source.spec() != target.spec() {
        return Err(HomViolation::DomainMismatch("functor specs differ".into()));
    }
    let em = to_indices("edge", &maps.edge_map, source.edges(), target.edges())?;
    let vm = to_indices("vertex", &maps.vertex_map, source.vertices(), target.vertices())?;
    match first_noncommuting(source, target, &em, &vm) {
        Some(e) => Err(HomViolation::NotCommuting(source.edge_id(e).clone())),
        None => Ok(()),
    }
}

impl Hom {
    pub fn new(source: Arc<FGraph>, target: Arc<FGraph>, maps: &HomMaps) -> Result<Hom> {
        validate_hom(&source, &target, maps)?;
        let edge_map = to_indices("edge", &maps.edge_map, source.edges(), target.edges())?;
        let vertex_map = to_indices("vertex", &maps.vertex_map, source.vertices(), target.vertices())?;
        Ok(Hom { source, target, edge_map, vertex_map })
    }

    /// Index-based constructor with full validation.
    pub fn from_indices(source: Arc<FGraph>, target: Arc<FGraph>, edge_map: Vec<usize>, vertex_map: Vec<usize>) -> Result<Hom> {
        if source.spec() != target.spec() {
            return Err(Error::SpecMismatch);
        }
        if edge_map.len() != source.edge_count()
            || vertex_map.len() != source.vertex_count()
            || edge_map.iter().any(|&e| e >= target.edge_count())
            || vertex_map.iter().any(|&v| v >= target.vertex_count())
        {
            return Err(Error::DomainMismatch("map sizes do not fit the endpoints".into()));
        }
        if let Some(e) = first_noncommuting(&source, &target, &edge_map, &vertex_map) {
            return Err(Error::NotAHomomorphism(source.edge_id(e).clone()));
        }
        Ok(Hom { source, target, edge_map, vertex_map })
    }

    /// For maps the caller has already verified; checked again in debug builds.
    pub(crate) fn trusted(source: Arc<FGraph>, target: Arc<FGraph>, edge_map: Vec<usize>, vertex_map: Vec<usize>) -> Hom {
        debug_assert!(first_noncommuting(&source, &target, &edge_map, &vertex_map).is_none());
        Hom { source, target, edge_map, vertex_map }
    }

    pub fn identity(g: Arc<FGraph>) -> Hom {
        let edge_map = (0..g.edge_count()).collect();
        let vertex_map = (0..g.vertex_count()).collect();
        Hom { source: g.clone(), target: g, edge_map, vertex_map }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Hom) -> Result<Hom> {
        if *first.target != *self.source {
            return Err(Error::DomainMismatch("codomain of the first map is not the domain of the second".into()));
        }
        Ok(Hom {
            source: first.source.clone(),
            target: self.target.clone(),
            edge_map: first.edge_map.iter().map(|&e| self.edge_map[e]).collect(),
            vertex_map: first.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
        })
    }

    pub fn source(&self) -> &Arc<FGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FGraph> {
        &self.target
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn maps(&self) -> HomMaps {
        HomMaps {
            edge_map: self
                .edge_map
                .iter()
                .enumerate()
                .map(|(e, &f)| (self.source.edge_id(e).clone(), self.target.edge_id(f).clone()))
                .collect(),
            vertex_map: self
                .vertex_map
                .iter()
                .enumerate()
                .map(|(v, &w)| (self.source.vertex_id(v).clone(), self.target.vertex_id(w).clone()))
                .collect(),
        }
    }

    pub fn is_edge_injective(&self) -> bool {
        injective(&self.edge_map, self.target.edge_count())
    }

    pub fn is_vertex_injective(&self) -> bool {
        injective(&self.vertex_map, self.target.vertex_count())
    }

    pub fn is_injective(&self) -> bool {
        self.is_edge_injective() && self.is_vertex_injective()
    }

    pub fn is_surjective(&self) -> bool {
        surjective(&self.edge_map, self.target.edge_count()) && surjective(&self.vertex_map, self.target.vertex_count())
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Same endpoints and maps, ignoring `Arc` identity.
    pub fn same_as(&self, other: &Hom) -> bool {
        self == other
    }
}

fn injective(m: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    m.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
}

fn surjective(m: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    m.iter().for_each(|&x| seen[x] = true);
    seen.into_iter().all(|b| b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::{FunctorSpec, Value};
    use crate::graph::graph;

    fn maps(e: &[(&str, &str)], v: &[(&str, &str)]) -> HomMaps {
        let conv = |xs: &[(&str, &str)]| xs.iter().map(|(a, b)| (ElementId::from(*a), ElementId::from(*b))).collect();
        HomMaps { edge_map: conv(e), vertex_map: conv(v) }
    }

    #[test]
    fn square_checked() {
        let g = Arc::new(graph(FunctorSpec::DPair, ["a", "b"], [("e", Value::dpair("a", "b"))]).unwrap());
        let h = Arc::new(graph(FunctorSpec::DPair, ["x"], [("l", Value::dpair("x", "x"))]).unwrap());
        let ok = maps(&[("e", "l")], &[("a", "x"), ("b", "x")]);
        let phi = Hom::new(g.clone(), h.clone(), &ok).unwrap();
        assert!(phi.is_surjective() && !phi.is_injective());
        let id = Hom::identity(g.clone());
        assert_eq!(phi.compose(&id).unwrap(), phi);

        let rev = maps(&[("l", "e")], &[("x", "a")]);
        assert_eq!(validate_hom(&h, &g, &rev), Err(HomViolation::NotCommuting("l".into())));
        let partial = maps(&[("e", "l")], &[("a", "x")]);
        assert!(matches!(validate_hom(&g, &h, &partial), Err(HomViolation::DomainMismatch(_))));
    }
}
