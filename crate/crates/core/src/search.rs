//! Backtracking enumeration of homomorphisms.
//!
//! Vertex images are chosen first; an edge is checked as soon as its whole
//! support is assigned, which leaves a list of admissible target edges for it.
//! Edge images are then independent, so counts are products of list lengths.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functor::IxValue;
use crate::graph::FGraph;
use crate::hom::Hom;

pub struct HomSearch<'a> {
    source: &'a FGraph,
    target: &'a FGraph,
    injective: bool,
    fixed_vertices: Vec<Option<usize>>,
    fixed_edges: Vec<Option<usize>>,
}

struct Plan {
    order: Vec<usize>,
    /// `ready[k]`: edges whose support is assigned once `order[..=k]` is.
    ready: Vec<Vec<usize>>,
    empty_support: Vec<usize>,
}

impl<'a> HomSearch<'a> {
    pub fn new(source: &'a FGraph, target: &'a FGraph) -> Self {
        HomSearch {
            source,
            target,
            injective: false,
            fixed_vertices: vec![None; source.vertex_count()],
            fixed_edges: vec![None; source.edge_count()],
        }
    }

    /// Only injective maps on both edges and vertices.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn fix_vertex(mut self, v: usize, w: usize) -> Self {
        self.fixed_vertices[v] = Some(w);
        self
    }

    pub fn fix_edge(mut self, e: usize, f: usize) -> Self {
        self.fixed_edges[e] = Some(f);
        self
    }

    fn plan(&self) -> Plan {
        let n = self.source.vertex_count();
        let mut pos = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        for w in self.source.structure() {
            w.for_each_atom(&mut |&v| {
                if pos[v] == usize::MAX {
                    pos[v] = order.len();
                    order.push(v);
                }
            });
        }
        for v in 0..n {
            if pos[v] == usize::MAX {
                pos[v] = order.len();
                order.push(v);
            }
        }
        let mut ready = vec![Vec::new(); n];
        let mut empty_support = Vec::new();
        for (e, w) in self.source.structure().iter().enumerate() {
            let mut last = None;
            w.for_each_atom(&mut |&v| last = last.max(Some(pos[v])));
            match last {
                Some(k) => ready[k].push(e),
                None => empty_support.push(e),
            }
        }
        Plan { order, ready, empty_support }
    }

    /// Calls `f(vertex_map, edge_candidates)` for every vertex map that
    /// extends to at least one hom. Candidate lists are never empty.
    pub fn for_each_assignment(
        &self,
        budget: u128,
        mut f: impl FnMut(&[usize], &[Vec<usize>]) -> ControlFlow<()>,
    ) -> Result<()> {
        if self.source.spec() != self.target.spec() {
            return Err(Error::SpecMismatch);
        }
        let index = self.target.value_index();
        let plan = self.plan();
        let mut st = State {
            vmap: vec![usize::MAX; self.source.vertex_count()],
            used: vec![false; self.target.vertex_count()],
            cands: vec![Vec::new(); self.source.edge_count()],
            spent: 0,
        };
        for &e in &plan.empty_support {
            match self.candidates(&index, e, &st.vmap) {
                Some(c) => st.cands[e] = c,
                None => return Ok(()),
            }
        }
        match self.descend(&plan, &index, 0, &mut st, budget, &mut f) {
            Err(e) => Err(e),
            Ok(_) => Ok(()),
        }
    }

    fn candidates(&self, index: &HashMap<&IxValue, Vec<usize>>, e: usize, vmap: &[usize]) -> Option<Vec<usize>> {
        let mapped = self.source.value(e).map_atoms(&mut |&v| vmap[v]);
        let all = index.get(&mapped)?;
        let c: Vec<usize> = match self.fixed_edges[e] {
            Some(f) => all.iter().copied().filter(|&x| x == f).collect(),
            None => all.clone(),
        };
        (!c.is_empty()).then_some(c)
    }

    fn descend(
        &self,
        plan: &Plan,
        index: &HashMap<&IxValue, Vec<usize>>,
        k: usize,
        st: &mut State,
        budget: u128,
        f: &mut impl FnMut(&[usize], &[Vec<usize>]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        if k == plan.order.len() {
            st.spent += 1;
            if st.spent > budget {
                return Err(Error::BudgetExceeded { what: "hom search", cap: budget });
            }
            return Ok(f(&st.vmap, &st.cands));
        }
        let v = plan.order[k];
        let range: Vec<usize> = match self.fixed_vertices[v] {
            Some(w) => vec![w],
            None => (0..self.target.vertex_count()).collect(),
        };
        'outer: for w in range {
            if self.injective && st.used[w] {
                continue;
            }
            st.vmap[v] = w;
            for &e in &plan.ready[k] {
                match self.candidates(index, e, &st.vmap) {
                    Some(c) => st.cands[e] = c,
                    None => continue 'outer,
                }
            }
            st.used[w] = true;
            let flow = self.descend(plan, index, k + 1, st, budget, f)?;
            st.used[w] = false;
            if flow.is_break() {
                return Ok(flow);
            }
        }
        st.vmap[v] = usize::MAX;
        Ok(ControlFlow::Continue(()))
    }

    /// Calls `f(edge_map, vertex_map)` for every hom.
    pub fn for_each(&self, budget: u128, mut f: impl FnMut(&[usize], &[usize]) -> ControlFlow<()>) -> Result<()> {
        let injective = self.injective;
        let mut emitted: u128 = 0;
        let mut over = false;
        let mut used = vec![false; self.target.edge_count()];
        self.for_each_assignment(budget, |vmap, cands| {
            let mut emap = vec![0; cands.len()];
            let flow = edge_combos(0, cands, &mut emap, injective, &mut used, &mut |em| {
                emitted += 1;
                if emitted > budget {
                    over = true;
                    return ControlFlow::Break(());
                }
                f(em, vmap)
            });
            flow
        })?;
        if over {
            return Err(Error::BudgetExceeded { what: "hom search", cap: budget });
        }
        Ok(())
    }

    /// Number of homs. Counts without listing edge choices unless injective.
    pub fn count(&self, budget: u128) -> Result<u128> {
        let mut total: u128 = 0;
        if self.injective {
            self.for_each(budget, |_, _| {
                total += 1;
                ControlFlow::Continue(())
            })?;
        } else {
            self.for_each_assignment(budget, |_, cands| {
                total += cands.iter().map(|c| c.len() as u128).product::<u128>();
                ControlFlow::Continue(())
            })?;
        }
        Ok(total)
    }

    pub fn first(&self, budget: u128) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
        let mut out = None;
        self.for_each(budget, |em, vm| {
            out = Some((em.to_vec(), vm.to_vec()));
            ControlFlow::Break(())
        })?;
        Ok(out)
    }
}

struct State {
    vmap: Vec<usize>,
    used: Vec<bool>,
    cands: Vec<Vec<usize>>,
    spent: u128,
}

fn edge_combos(
    i: usize,
    cands: &[Vec<usize>],
    emap: &mut Vec<usize>,
    injective: bool,
    used: &mut Vec<bool>,
    f: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if i == cands.len() {
        return f(emap);
    }
    for &c in &cands[i] {
        if injective && used[c] {
            continue;
        }
        emap[i] = c;
        used[c] = true;
        let flow = edge_combos(i + 1, cands, emap, injective, used, f);
        used[c] = false;
        flow?;
    }
    ControlFlow::Continue(())
}

/// Every hom `source -> target`, in search order.
pub fn all_homs(source: &Arc<FGraph>, target: &Arc<FGraph>, budget: u128) -> Result<Vec<Hom>> {
    let mut out = Vec::new();
    HomSearch::new(source, target).for_each(budget, |em, vm| {
        out.push(Hom::trusted(source.clone(), target.clone(), em.to_vec(), vm.to_vec()));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn count_homs(source: &FGraph, target: &FGraph, budget: u128) -> Result<u128> {
    HomSearch::new(source, target).count(budget)
}

/// An isomorphism `g -> h`, if one exists.
pub fn find_isomorphism(g: &Arc<FGraph>, h: &Arc<FGraph>, budget: u128) -> Result<Option<Hom>> {
    if g.spec() != h.spec() || g.edge_count() != h.edge_count() || g.vertex_count() != h.vertex_count() {
        return Ok(None);
    }
    let found = HomSearch::new(g, h).injective().first(budget)?;
    Ok(found.map(|(em, vm)| Hom::trusted(g.clone(), h.clone(), em, vm)))
}

pub fn are_isomorphic(g: &Arc<FGraph>, h: &Arc<FGraph>, budget: u128) -> Result<bool> {
    Ok(find_isomorphism(g, h, budget)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::{FunctorSpec, Value};
    use crate::graph::graph;

    fn cycle(spec: FunctorSpec, n: usize) -> Arc<FGraph> {
        let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let upair = spec == FunctorSpec::UPair;
        let es = (0..n).map(|i| {
            let (a, b) = (vs[i].clone(), vs[(i + 1) % n].clone());
            let w = if upair { Value::upair(a, b) } else { Value::dpair(a, b) };
            (format!("e{i}"), w)
        });
        Arc::new(graph(spec, vs.clone(), es).unwrap())
    }

    /// Direct enumeration over every pair of maps.
    fn brute_count(g: &FGraph, h: &FGraph) -> u128 {
        let (n, m) = (g.vertex_count(), h.vertex_count());
        let (ne, me) = (g.edge_count(), h.edge_count());
        let mut total = 0;
        let vmaps = (m as u128).pow(n as u32);
        let emaps = (me as u128).pow(ne as u32);
        for vc in 0..vmaps {
            let vm: Vec<usize> = (0..n).map(|i| (vc / (m as u128).pow(i as u32) % m as u128) as usize).collect();
            for ec in 0..emaps {
                let em: Vec<usize> = (0..ne).map(|i| (ec / (me as u128).pow(i as u32) % me as u128) as usize).collect();
                if crate::hom::first_noncommuting(g, h, &em, &vm).is_none() {
                    total += 1;
                }
            }
        }
        total
    }

    #[test]
    fn counts_agree_with_brute_force() {
        for spec in [FunctorSpec::UPair, FunctorSpec::DPair] {
            for (a, b) in [(3, 3), (4, 2), (2, 4), (3, 1)] {
                let (g, h) = (cycle(spec.clone(), a), cycle(spec.clone(), b));
                let fast = count_homs(&g, &h, 1 << 20).unwrap();
                assert_eq!(fast, brute_count(&g, &h), "{spec:?} C{a} -> C{b}");
                assert_eq!(all_homs(&g, &h, 1 << 20).unwrap().len() as u128, fast);
            }
        }
    }

    #[test]
    fn iso_search() {
        let g = cycle(FunctorSpec::DPair, 3);
        let iso = find_isomorphism(&g, &g, 1000).unwrap().unwrap();
        assert!(iso.is_bijective());
        assert_eq!(HomSearch::new(&g, &g).injective().count(1000).unwrap(), 3);
        assert!(!are_isomorphic(&g, &cycle(FunctorSpec::DPair, 4), 1000).unwrap());
    }

    #[test]
    fn budget_exceeded() {
        let vs: Vec<String> = (0..8).map(|i| format!("x{i}")).collect();
        let g = graph(FunctorSpec::UPair, vs.clone(), Vec::<(String, Value)>::new()).unwrap();
        let r = count_homs(&g, &g, 1000);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }
}
