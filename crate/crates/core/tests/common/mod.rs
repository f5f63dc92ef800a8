//! Helpers shared by the integration suites: small-graph enumeration up to
//! isomorphism, seeded random graphs and homs.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use fgraph::{ElementId, FGraph, FunctorSpec, Hom, IxValue};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const BIG: u128 = 10_000_000;

pub fn vid(i: usize) -> ElementId {
    ElementId::from(format!("v{i}"))
}

/// Graph on `v0..v{n-1}` with edges `e0, e1, ..` carrying `values` in order.
pub fn from_values(spec: &FunctorSpec, n: usize, values: &[IxValue]) -> Arc<FGraph> {
    assert!(n <= 10 && values.len() <= 10, "ids must sort numerically");
    let edges: Vec<(ElementId, _)> = values
        .iter()
        .enumerate()
        .map(|(i, w)| (ElementId::from(format!("e{i}")), w.map_atoms(&mut |&a| vid(a))))
        .collect();
    Arc::new(FGraph::new(spec.clone(), (0..n).map(vid), edges).expect("valid by construction"))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest sorted structure list over all vertex relabelings.
pub fn canonical_key(g: &FGraph) -> (usize, Vec<IxValue>) {
    let n = g.vertex_count();
    let best = permutations(n)
        .into_iter()
        .map(|p| {
            let mut ws: Vec<IxValue> = g.structure().iter().map(|w| w.map_atoms(&mut |&a| p[a])).collect();
            ws.sort();
            ws
        })
        .min()
        .unwrap();
    (n, best)
}

fn multisets(pool: &[IxValue], size: usize, from: usize, cur: &mut Vec<IxValue>, out: &mut Vec<Vec<IxValue>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in from..pool.len() {
        cur.push(pool[i].clone());
        multisets(pool, size, i, cur, out);
        cur.pop();
    }
}

/// One representative per isomorphism class of graphs with at most
/// `max_edges` edges and `max_vertices` vertices.
pub fn small_graphs(spec: &FunctorSpec, max_edges: usize, max_vertices: usize) -> Vec<Arc<FGraph>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 0..=max_vertices {
        let atoms: Vec<usize> = (0..n).collect();
        let pool = spec.enumerate_atoms(&atoms, BIG).unwrap();
        for m in 0..=max_edges {
            let mut lists = Vec::new();
            multisets(&pool, m, 0, &mut Vec::new(), &mut lists);
            for ws in lists {
                let g = from_values(spec, n, &ws);
                if seen.insert(canonical_key(&g)) {
                    out.push(g);
                }
            }
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Random graph with 1..=`max_vertices` vertices and 0..=`max_edges` edges,
/// values drawn from those passing `keep`.
pub fn random_graph(
    rng: &mut ChaCha8Rng,
    spec: &FunctorSpec,
    max_vertices: usize,
    max_edges: usize,
    keep: impl Fn(&IxValue) -> bool,
) -> Arc<FGraph> {
    let n = rng.gen_range(1..=max_vertices);
    let atoms: Vec<usize> = (0..n).collect();
    let pool: Vec<IxValue> = spec.enumerate_atoms(&atoms, BIG).unwrap().into_iter().filter(|w| keep(w)).collect();
    let m = if pool.is_empty() { 0 } else { rng.gen_range(0..=max_edges) };
    let ws: Vec<IxValue> = (0..m).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
    from_values(spec, n, &ws)
}

/// Random hom out of `g`: a random vertex map into a fresh vertex set, the
/// images of `g`'s edges (shared or duplicated at random), and up to
/// `extra` unrelated edges.
pub fn random_hom(rng: &mut ChaCha8Rng, g: &Arc<FGraph>, extra: usize, keep: impl Fn(&IxValue) -> bool) -> Hom {
    let spec = g.spec();
    let n2 = rng.gen_range(1..=g.vertex_count() + 1);
    let vm: Vec<usize> = (0..g.vertex_count()).map(|_| rng.gen_range(0..n2)).collect();
    let mut values: Vec<IxValue> = Vec::new();
    let mut em = Vec::new();
    for e in 0..g.edge_count() {
        let w = g.value(e).map_atoms(&mut |&a| vm[a]);
        let existing: Vec<usize> = (0..values.len()).filter(|&i| values[i] == w).collect();
        if !existing.is_empty() && rng.gen_bool(0.7) {
            em.push(existing[rng.gen_range(0..existing.len())]);
        } else {
            values.push(w);
            em.push(values.len() - 1);
        }
    }
    let atoms: Vec<usize> = (0..n2).collect();
    let pool: Vec<IxValue> = spec.enumerate_atoms(&atoms, BIG).unwrap().into_iter().filter(|w| keep(w)).collect();
    for _ in 0..rng.gen_range(0..=extra) {
        if !pool.is_empty() && values.len() < 10 {
            values.push(pool[rng.gen_range(0..pool.len())].clone());
        }
    }
    let h = from_values(spec, n2, &values);
    Hom::from_indices(g.clone(), h, em, vm).expect("image edges commute")
}

pub fn any(_: &IxValue) -> bool {
    true
}

pub fn nonempty(w: &IxValue) -> bool {
    !w.support().is_empty()
}
