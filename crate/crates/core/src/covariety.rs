//! Patterns over cofree graphs, satisfaction, conditional patterns,
//! implications, and closure audits comparing generated classes against
//! the pattern classes that should define them.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cofree::{for_each_coloring, unit_embedding, ColorSet, Cofree, Coloring};
use crate::error::{Caps, Error, Result};
use crate::functor::FunctorSpec;
use crate::graph::FGraph;
use crate::hom::Hom;
use crate::limits::{cogenerated_subgraph, copair, coproduct, edge_induced, pushout};
use crate::morphism::{is_congruence, quotient};
use crate::partition::{all_partitions, EquivPair};
use crate::search::{all_homs, HomSearch};
use crate::subgraph::SubgraphHandle;
use crate::transforms::minimize;

fn sorted(xs: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let set: BTreeSet<usize> = xs.into_iter().collect();
    set.into_iter().collect()
}

fn mask(n: usize, xs: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    xs.iter().for_each(|&x| m[x] = true);
    m
}

/// A subset of the carrier of `C(X)`.
#[derive(Debug, Clone)]
pub struct Pattern {
    cofree: Arc<Cofree>,
    edges: Vec<usize>,
    vertices: Vec<usize>,
}

impl Pattern {
    pub fn new(
        cofree: Arc<Cofree>,
        edges: impl IntoIterator<Item = usize>,
        vertices: impl IntoIterator<Item = usize>,
    ) -> Result<Pattern> {
        let (edges, vertices) = (sorted(edges), sorted(vertices));
        let c = cofree.graph();
        if edges.last().is_some_and(|&e| e >= c.edge_count()) || vertices.last().is_some_and(|&v| v >= c.vertex_count()) {
            return Err(Error::DomainMismatch("pattern element outside the cofree graph".into()));
        }
        Ok(Pattern { cofree, edges, vertices })
    }

    pub fn full(cofree: Arc<Cofree>) -> Pattern {
        let (ne, nv) = (cofree.graph().edge_count(), cofree.graph().vertex_count());
        Pattern { cofree, edges: (0..ne).collect(), vertices: (0..nv).collect() }
    }

    pub fn from_subgraph(cofree: Arc<Cofree>, h: &SubgraphHandle) -> Result<Pattern> {
        if h.parent() != cofree.graph() {
            return Err(Error::ParentMismatch);
        }
        Pattern::new(cofree, h.edges().iter().copied(), h.vertices().iter().copied())
    }

    pub fn from_names(cofree: Arc<Cofree>, edges: &[impl AsRef<str>], vertices: &[impl AsRef<str>]) -> Result<Pattern> {
        let c = cofree.graph().clone();
        let es = edges
            .iter()
            .map(|e| c.edge_index(e.as_ref()).ok_or_else(|| Error::DomainMismatch(format!("unknown cofree edge {}", e.as_ref()))))
            .collect::<Result<Vec<_>>>()?;
        let vs = vertices
            .iter()
            .map(|v| c.vertex_index(v.as_ref()).ok_or_else(|| Error::DomainMismatch(format!("unknown vertex color {}", v.as_ref()))))
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(cofree, es, vs)
    }

    pub fn cofree(&self) -> &Arc<Cofree> {
        &self.cofree
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// `P̂`: the largest subgraph of `C(X)` inside `P`.
    pub fn hat(&self) -> SubgraphHandle {
        cogenerated_subgraph(self.cofree.graph(), self.edges.iter().copied(), self.vertices.iter().copied())
    }
}

pub fn pattern_hat(p: &Pattern) -> SubgraphHandle {
    p.hat()
}

/// `γ̄[G]` as sorted edge and vertex lists of `C(X)`.
pub fn coloring_image(g: &FGraph, gamma: &Coloring, cofree: &Cofree) -> (Vec<usize>, Vec<usize>) {
    let edges = (0..g.edge_count()).map(|e| induced_edge(g, gamma, cofree, e));
    (sorted(edges), sorted(gamma.vertices.iter().copied()))
}

fn induced_edge(g: &FGraph, gamma: &Coloring, cofree: &Cofree, e: usize) -> usize {
    let w = g.value(e).map_atoms(&mut |&v| gamma.vertices[v]);
    cofree.edge_for(gamma.edges[e], &w).expect("cofree graph holds every colored value")
}

fn within(g: &FGraph, gamma: &Coloring, cofree: &Cofree, edges: &[bool], vertices: &[bool]) -> bool {
    gamma.vertices.iter().all(|&c| vertices[c]) && (0..g.edge_count()).all(|e| edges[induced_edge(g, gamma, cofree, e)])
}

fn check_spec(g: &FGraph, cofree: &Cofree) -> Result<()> {
    if g.spec() != cofree.graph().spec() {
        return Err(Error::SpecMismatch);
    }
    Ok(())
}

/// `G ⊨ P`: every induced hom lands in `P̂`. On failure, the first
/// offending coloring in enumeration order.
pub fn satisfies_pattern(g: &FGraph, p: &Pattern, budget: u128) -> Result<Result<(), Coloring>> {
    let cofree = p.cofree();
    check_spec(g, cofree)?;
    let hat = p.hat();
    let c = cofree.graph();
    let (em, vm) = (mask(c.edge_count(), hat.edges()), mask(c.vertex_count(), hat.vertices()));
    let mut failing = None;
    for_each_coloring(g, cofree.colors(), budget, |gamma| {
        if within(g, gamma, cofree, &em, &vm) {
            ControlFlow::Continue(())
        } else {
            failing = Some(gamma.clone());
            ControlFlow::Break(())
        }
    })?;
    Ok(failing.map_or(Ok(()), Err))
}

/// Every endomorphism of the parent maps `h` into itself. On failure, an
/// endomorphism that moves part of `h` outside.
pub fn is_invariant_subgraph(h: &SubgraphHandle, budget: u128) -> Result<Result<(), Hom>> {
    let g = h.parent();
    let (em, vm) = (mask(g.edge_count(), h.edges()), mask(g.vertex_count(), h.vertices()));
    let mut witness = None;
    HomSearch::new(g, g).for_each_assignment(budget, |vmap, cands| {
        let vertex_out = h.vertices().iter().any(|&v| !vm[vmap[v]]);
        let edge_out = h.edges().iter().find_map(|&e| cands[e].iter().find(|&&f| !em[f]).map(|&f| (e, f)));
        if !vertex_out && edge_out.is_none() {
            return ControlFlow::Continue(());
        }
        let mut emap: Vec<usize> = cands.iter().map(|c| c[0]).collect();
        if let Some((e, f)) = edge_out {
            emap[e] = f;
        }
        witness = Some(Hom::trusted(g.clone(), g.clone(), emap, vmap.to_vec()));
        ControlFlow::Break(())
    })?;
    Ok(witness.map_or(Ok(()), Err))
}

/// The union of `γ̄[K]` over all members `K` and colorings `γ`.
pub fn pat_of_class(ks: &[Arc<FGraph>], cofree: &Cofree, budget: u128) -> Result<SubgraphHandle> {
    let c = cofree.graph();
    let mut em = vec![false; c.edge_count()];
    let mut vm = vec![false; c.vertex_count()];
    for k in ks {
        check_spec(k, cofree)?;
        for_each_coloring(k, cofree.colors(), budget, |gamma| {
            gamma.vertices.iter().for_each(|&v| vm[v] = true);
            (0..k.edge_count()).for_each(|e| em[induced_edge(k, gamma, cofree, e)] = true);
            ControlFlow::Continue(())
        })?;
    }
    let pick = |m: &[bool]| m.iter().enumerate().filter(|p| *p.1).map(|p| p.0).collect::<Vec<_>>();
    Ok(cogenerated_subgraph(c, pick(&em), pick(&vm)))
}

/// A subset `R` of the carrier of a host graph.
#[derive(Debug, Clone)]
pub struct ConditionalPattern {
    host: Arc<FGraph>,
    edges: Vec<usize>,
    vertices: Vec<usize>,
}

impl ConditionalPattern {
    pub fn new(
        host: Arc<FGraph>,
        edges: impl IntoIterator<Item = usize>,
        vertices: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let (edges, vertices) = (sorted(edges), sorted(vertices));
        if edges.last().is_some_and(|&e| e >= host.edge_count()) || vertices.last().is_some_and(|&v| v >= host.vertex_count()) {
            return Err(Error::DomainMismatch("conditional pattern element outside the host".into()));
        }
        Ok(ConditionalPattern { host, edges, vertices })
    }

    pub fn host(&self) -> &Arc<FGraph> {
        &self.host
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn hat(&self) -> SubgraphHandle {
        cogenerated_subgraph(&self.host, self.edges.iter().copied(), self.vertices.iter().copied())
    }
}

/// Every hom `G -> host` lands in `R̂`. On failure, an offending hom.
pub fn satisfies_conditional(g: &Arc<FGraph>, r: &ConditionalPattern, budget: u128) -> Result<Result<(), Hom>> {
    let host = r.host();
    let hat = r.hat();
    let (em, vm) = (mask(host.edge_count(), hat.edges()), mask(host.vertex_count(), hat.vertices()));
    let mut witness = None;
    HomSearch::new(g, host).for_each_assignment(budget, |vmap, cands| {
        let vertex_out = vmap.iter().any(|&w| !vm[w]);
        let edge_out = cands.iter().enumerate().find_map(|(e, c)| c.iter().find(|&&f| !em[f]).map(|&f| (e, f)));
        if !vertex_out && edge_out.is_none() {
            return ControlFlow::Continue(());
        }
        let mut emap: Vec<usize> = cands.iter().map(|c| c[0]).collect();
        if let Some((e, f)) = edge_out {
            emap[e] = f;
        }
        witness = Some(Hom::trusted(g.clone(), host.clone(), emap, vmap.to_vec()));
        ControlFlow::Break(())
    })?;
    Ok(witness.map_or(Ok(()), Err))
}

/// `P ⇒ Q` over one cofree graph.
#[derive(Debug, Clone)]
pub struct Implication {
    pub premise: Pattern,
    pub conclusion: Pattern,
}

impl Implication {
    pub fn new(premise: Pattern, conclusion: Pattern) -> Result<Self> {
        let (a, b) = (premise.cofree(), conclusion.cofree());
        if !Arc::ptr_eq(a, b) && (a.colors() != b.colors() || a.graph().spec() != b.graph().spec()) {
            return Err(Error::DomainMismatch("implication patterns live over different cofree graphs".into()));
        }
        Ok(Implication { premise, conclusion })
    }
}

/// `G ⊨ P` implies `G ⊨ Q`, read as a statement about whole graphs.
pub fn satisfies_implication(g: &FGraph, imp: &Implication, budget: u128) -> Result<bool> {
    if satisfies_pattern(g, &imp.premise, budget)?.is_err() {
        return Ok(true);
    }
    Ok(satisfies_pattern(g, &imp.conclusion, budget)?.is_ok())
}

/// For every coloring `γ`: `γ̄[G] ≤ P̂` implies `γ̄[G] ≤ Q̂`. This is the
/// reading under which implications and conditional patterns correspond.
pub fn satisfies_implication_pointwise(g: &FGraph, imp: &Implication, budget: u128) -> Result<Result<(), Coloring>> {
    let cofree = imp.premise.cofree();
    check_spec(g, cofree)?;
    let c = cofree.graph();
    let (p, q) = (imp.premise.hat(), imp.conclusion.hat());
    let (pe, pv) = (mask(c.edge_count(), p.edges()), mask(c.vertex_count(), p.vertices()));
    let (qe, qv) = (mask(c.edge_count(), q.edges()), mask(c.vertex_count(), q.vertices()));
    let mut failing = None;
    for_each_coloring(g, cofree.colors(), budget, |gamma| {
        if within(g, gamma, cofree, &pe, &pv) && !within(g, gamma, cofree, &qe, &qv) {
            failing = Some(gamma.clone());
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    Ok(failing.map_or(Ok(()), Err))
}

/// Host `P̂`, condition `U P̂ ∩ Q`.
pub fn conditional_from_implication(imp: &Implication) -> Result<ConditionalPattern> {
    let hat = imp.premise.hat();
    let host = Arc::new(hat.to_graph());
    let q = &imp.conclusion;
    let edges = hat.edges().iter().enumerate().filter(|(_, e)| q.edges().binary_search(e).is_ok()).map(|p| p.0);
    let vertices = hat.vertices().iter().enumerate().filter(|(_, v)| q.vertices().binary_search(v).is_ok()).map(|p| p.0);
    ConditionalPattern::new(host, edges.collect::<Vec<_>>(), vertices.collect::<Vec<_>>())
}

/// `P = η[host]`, `Q = η[R]` over `C(U host)`.
pub fn implication_from_conditional(r: &ConditionalPattern, cap: u128) -> Result<Implication> {
    let (cofree, eta) = unit_embedding(r.host(), cap)?;
    let cofree = Arc::new(cofree);
    let premise = Pattern::new(cofree.clone(), eta.edge_map().iter().copied(), eta.vertex_map().iter().copied())?;
    let conclusion = Pattern::new(
        cofree,
        r.edges().iter().map(|&e| eta.edge_map()[e]),
        r.vertices().iter().map(|&v| eta.vertex_map()[v]),
    )?;
    Implication::new(premise, conclusion)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMode {
    /// Subgraphs of images of sums.
    Covariety,
    /// Images of sums.
    Quasi,
    /// Preimages of the covariety.
    Complete,
}

impl FromStr for AuditMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "covariety" => Ok(AuditMode::Covariety),
            "quasi" => Ok(AuditMode::Quasi),
            "complete" => Ok(AuditMode::Complete),
            _ => Err(Error::Format(format!("unknown audit mode {s}"))),
        }
    }
}

/// `ΣK_i -> image`, surjective, with the probe sitting inside `image`.
#[derive(Debug, Clone)]
pub struct ClosureChain {
    /// Generator index of each summand.
    pub summands: Vec<usize>,
    pub surjection: Hom,
    /// Injective into the image; the identity in quasi mode.
    pub embedding: Hom,
    /// Complete mode: probe onto its minimization, which is what embeds.
    pub reduction: Option<Hom>,
}

#[derive(Debug, Clone)]
pub struct AuditRow {
    pub lhs: bool,
    pub rhs: bool,
    pub chain: Option<ClosureChain>,
    pub failing: Option<Coloring>,
}

impl AuditRow {
    pub fn agrees(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub mode: AuditMode,
    pub cofree: Arc<Cofree>,
    /// `pat_of_class`; absent in quasi mode.
    pub pattern: Option<SubgraphHandle>,
    pub rows: Vec<AuditRow>,
    pub warnings: Vec<String>,
}

impl AuditReport {
    pub fn agrees(&self) -> bool {
        self.rows.iter().all(AuditRow::agrees)
    }

    pub fn members(&self) -> Vec<usize> {
        self.rows.iter().enumerate().filter(|(_, r)| r.lhs).map(|p| p.0).collect()
    }
}

fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap().saturating_add(*x);
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// Projections of every generator onto each of its quotients.
fn generator_quotients(ks: &[Arc<FGraph>], cap: u128) -> Result<Vec<(usize, Hom)>> {
    let mut out = Vec::new();
    for (i, k) in ks.iter().enumerate() {
        if bell(k.edge_count()).saturating_mul(bell(k.vertex_count())) > cap {
            return Err(Error::EnumerationCapExceeded { what: format!("equivalence pairs of generator {i}"), cap });
        }
        let vparts = all_partitions(k.vertex_count());
        for edges in all_partitions(k.edge_count()) {
            for vertices in &vparts {
                let theta = EquivPair { edges: edges.clone(), vertices: vertices.clone() };
                if is_congruence(k, &theta)?.is_ok() {
                    out.push((i, quotient(k, &theta)?.projection));
                }
            }
        }
    }
    Ok(out)
}

/// `G ∈ S H Σ(K)`: each one-generated piece embeds in some quotient of a
/// generator; the pieces are then glued into one chain by a pushout.
fn covariety_chain(
    g: &Arc<FGraph>,
    ks: &[Arc<FGraph>],
    quotients: &[(usize, Hom)],
    caps: &Caps,
) -> Result<Option<ClosureChain>> {
    let mut pieces: Vec<SubgraphHandle> = (0..g.edge_count()).map(|e| edge_induced(g, e)).collect();
    pieces.extend(g.isolated_vertices().into_iter().map(|v| cogenerated_subgraph(g, [], [v])));
    if pieces.is_empty() {
        let empty = Arc::new(FGraph::empty(g.spec().clone()));
        let id = Hom::identity(empty);
        return Ok(Some(ClosureChain { summands: vec![], surjection: id.clone(), embedding: id, reduction: None }));
    }
    let mut found = Vec::with_capacity(pieces.len());
    for piece in &pieces {
        let sub = Arc::new(piece.to_graph());
        let mut hit = None;
        for (i, proj) in quotients {
            if let Some((em, vm)) = HomSearch::new(&sub, proj.target()).injective().first(caps.homs)? {
                hit = Some((*i, proj.clone(), Hom::trusted(sub.clone(), proj.target().clone(), em, vm)));
                break;
            }
        }
        match hit {
            Some((i, proj, iota)) => found.push((piece.inclusion_from(sub), i, proj, iota)),
            None => return Ok(None),
        }
    }
    let sum_k = coproduct(&found.iter().map(|f| ks[f.1].clone()).collect::<Vec<_>>())?;
    let sum_h = coproduct(&found.iter().map(|f| f.2.target().clone()).collect::<Vec<_>>())?;
    let sum_a = coproduct(&found.iter().map(|f| f.0.source().clone()).collect::<Vec<_>>())?;
    let to_h = found
        .iter()
        .zip(&sum_h.injections)
        .map(|(f, inj)| inj.compose(&f.2))
        .collect::<Result<Vec<_>>>()?;
    let project = copair(&sum_k, &to_h, &sum_h.graph)?;
    let glue = found
        .iter()
        .zip(&sum_h.injections)
        .map(|(f, inj)| inj.compose(&f.3))
        .collect::<Result<Vec<_>>>()?;
    let sigma = copair(&sum_a, &glue, &sum_h.graph)?;
    let tau = copair(&sum_a, &found.iter().map(|f| f.0.clone()).collect::<Vec<_>>(), g)?;
    let po = pushout(&sigma, &tau)?;
    let surjection = po.left.compose(&project)?;
    let embedding = po.right;
    if !surjection.is_surjective() || !embedding.is_injective() {
        return Err(Error::PreconditionViolated("closure chain failed to verify".into()));
    }
    Ok(Some(ClosureChain { summands: found.iter().map(|f| f.1).collect(), surjection, embedding, reduction: None }))
}

/// `G ∈ H Σ(K)`: the images of all homs from generators cover `G`.
fn quasi_chain(g: &Arc<FGraph>, ks: &[Arc<FGraph>], caps: &Caps) -> Result<Option<ClosureChain>> {
    let mut homs = Vec::new();
    let mut summands = Vec::new();
    let mut em = vec![false; g.edge_count()];
    let mut vm = vec![false; g.vertex_count()];
    for (i, k) in ks.iter().enumerate() {
        for h in all_homs(k, g, caps.homs)? {
            h.edge_map().iter().for_each(|&f| em[f] = true);
            h.vertex_map().iter().for_each(|&w| vm[w] = true);
            summands.push(i);
            homs.push(h);
        }
    }
    if em.contains(&false) || vm.contains(&false) {
        return Ok(None);
    }
    let id = Hom::identity(g.clone());
    if homs.is_empty() {
        return Ok(Some(ClosureChain { summands, surjection: id.clone(), embedding: id, reduction: None }));
    }
    let sum = coproduct(&homs.iter().map(|h| h.source().clone()).collect::<Vec<_>>())?;
    let surjection = copair(&sum, &homs, g)?;
    Ok(Some(ClosureChain { summands, surjection, embedding: id, reduction: None }))
}

/// For every coloring of `G`, its image is covered by generator images
/// lying inside it.
fn quasi_rhs(g: &FGraph, images: &[(Vec<usize>, Vec<usize>)], cofree: &Cofree, budget: u128) -> Result<Option<Coloring>> {
    let c = cofree.graph();
    let mut failing = None;
    for_each_coloring(g, cofree.colors(), budget, |gamma| {
        let (se, sv) = coloring_image(g, gamma, cofree);
        let (me, mv) = (mask(c.edge_count(), &se), mask(c.vertex_count(), &sv));
        let mut ce = vec![false; c.edge_count()];
        let mut cv = vec![false; c.vertex_count()];
        for (ke, kv) in images {
            if ke.iter().all(|&e| me[e]) && kv.iter().all(|&v| mv[v]) {
                ke.iter().for_each(|&e| ce[e] = true);
                kv.iter().for_each(|&v| cv[v] = true);
            }
        }
        if se.iter().all(|&e| ce[e]) && sv.iter().all(|&v| cv[v]) {
            ControlFlow::Continue(())
        } else {
            failing = Some(gamma.clone());
            ControlFlow::Break(())
        }
    })?;
    Ok(failing)
}

/// Warnings for graphs with an edge generating more vertices than there
/// are vertex colors; the bounded correspondence needs that many colors.
pub fn boundedness_warnings(label: &str, gs: &[Arc<FGraph>], colors: &ColorSet) -> Vec<String> {
    let nv = colors.vertex_colors.len();
    let mut out = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        if let Some(e) = (0..g.edge_count()).find(|&e| g.support(e).len() > nv) {
            out.push(format!(
                "{label} {i}: edge {} spans {} vertices but only {nv} vertex colors are available",
                g.edge_id(e),
                g.support(e).len()
            ));
        }
    }
    out
}

/// Decides membership of each probe in the class generated by `ks` twice:
/// by an explicit closure chain, and by the pattern or implication side.
pub fn closure_audit(
    spec: &FunctorSpec,
    ks: &[Arc<FGraph>],
    universe: &[Arc<FGraph>],
    colors: &ColorSet,
    mode: AuditMode,
    caps: &Caps,
) -> Result<AuditReport> {
    if ks.iter().chain(universe).any(|g| g.spec() != spec) {
        return Err(Error::SpecMismatch);
    }
    if mode == AuditMode::Complete && (colors.edge_colors.len() != 1 || colors.vertex_colors.len() != 1) {
        return Err(Error::PreconditionViolated("complete mode needs singleton color sets".into()));
    }
    let cofree = Arc::new(Cofree::new(spec, colors, caps.enumeration)?);
    let mut warnings = Vec::new();
    let mut rows = Vec::with_capacity(universe.len());
    match mode {
        AuditMode::Covariety | AuditMode::Complete => {
            if mode == AuditMode::Covariety {
                warnings.extend(boundedness_warnings("generator", ks, colors));
                warnings.extend(boundedness_warnings("probe", universe, colors));
            }
            let hat = pat_of_class(ks, &cofree, caps.colorings)?;
            let pattern = Pattern::from_subgraph(cofree.clone(), &hat)?;
            let quotients = generator_quotients(ks, caps.enumeration)?;
            for g in universe {
                let chain = if mode == AuditMode::Covariety {
                    covariety_chain(g, ks, &quotients, caps)?
                } else {
                    let q = minimize(g, caps.enumeration)?;
                    covariety_chain(&q.graph, ks, &quotients, caps)?
                        .map(|c| ClosureChain { reduction: Some(q.projection), ..c })
                };
                let failing = satisfies_pattern(g, &pattern, caps.colorings)?.err();
                rows.push(AuditRow { lhs: chain.is_some(), rhs: failing.is_none(), chain, failing });
            }
            Ok(AuditReport { mode, cofree, pattern: Some(hat), rows, warnings })
        }
        AuditMode::Quasi => {
            let mut images = BTreeSet::new();
            for k in ks {
                for_each_coloring(k, colors, caps.colorings, |gamma| {
                    images.insert(coloring_image(k, gamma, &cofree));
                    ControlFlow::Continue(())
                })?;
            }
            let images: Vec<_> = images.into_iter().collect();
            for (i, g) in universe.iter().enumerate() {
                if g.edge_count() > colors.edge_colors.len() || g.vertex_count() > colors.vertex_colors.len() {
                    warnings.push(format!("probe {i}: color sets are smaller than the probe, so colorings cannot be injective"));
                }
                let chain = quasi_chain(g, ks, caps)?;
                let failing = quasi_rhs(g, &images, &cofree, caps.colorings)?;
                rows.push(AuditRow { lhs: chain.is_some(), rhs: failing.is_none(), chain, failing });
            }
            Ok(AuditReport { mode, cofree, pattern: None, rows, warnings })
        }
    }
}
