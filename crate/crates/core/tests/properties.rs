//! Laws and invariants, checked exhaustively on tiny inputs and with
//! proptest on seeded random ones.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::{nonempty, random_graph, random_hom, rng, small_graphs, BIG};
use fgraph::cofree::{
    cofree_on_morphisms, coloring_of, extend_to_cofree, induced_hom, unit_embedding, ColorSet, Cofree, Coloring,
};
use fgraph::covariety::{
    conditional_from_implication, implication_from_conditional, is_invariant_subgraph, satisfies_conditional,
    satisfies_implication_pointwise, satisfies_pattern, ConditionalPattern, Implication, Pattern,
};
use fgraph::limits::{cogenerated_subgraph, coequalize, coproduct, generated_subgraph, preimage, product, subgraph_lattice};
use fgraph::morphism::{factorize, image, is_congruence, kernel, mediate_through_epi, mediate_through_mono, quotient};
use fgraph::partition::all_partitions;
use fgraph::relations::{
    graph_of_hom, is_graph_relation, largest_graph_relation, largest_graph_relation_within, relation_from_hom_pair,
    RelationCheck, RelationPair,
};
use fgraph::search::all_homs;
use fgraph::transforms::{
    apply_transformation, apply_transformation_hom, conjunct_decomposition, is_conjunctly_irreducible,
    is_one_generated, minimize, object_preimage, simplify, NaturalTransformation,
};
use fgraph::{EquivPair, FGraph, FiniteSet, FunctorSpec, Hom, IxValue, Partition, SubgraphHandle};
use proptest::prelude::{prop_assert, prop_assert_eq, proptest, ProptestConfig};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn concrete_specs() -> Vec<FunctorSpec> {
    vec![
        FunctorSpec::Identity,
        FunctorSpec::UPair,
        FunctorSpec::DPair,
        FunctorSpec::FinPowerset,
        FunctorSpec::DirectedHyper,
        FunctorSpec::ktuple(3, 2),
        FunctorSpec::ktuple(2, 0),
        FunctorSpec::colored(FiniteSet::new(["a", "b"]), FiniteSet::new(["x"]), FunctorSpec::UPair),
        FunctorSpec::Sum { parts: vec![FunctorSpec::Identity, FunctorSpec::DPair] },
    ]
}

/// Every map `{0..n} -> {0..m}`.
fn maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|f| (0..m).map(move |y| [f.clone(), vec![y]].concat())).collect();
    }
    out
}

fn act(f: &[usize], w: &IxValue) -> IxValue {
    w.map_atoms(&mut |&a| f[a])
}

#[test]
fn functor_laws_on_small_sets() {
    for spec in concrete_specs() {
        for n in 0..=3 {
            let atoms: Vec<usize> = (0..n).collect();
            let values = spec.enumerate_atoms(&atoms, BIG).unwrap();
            let id: Vec<usize> = atoms.clone();
            assert!(values.iter().all(|w| act(&id, w) == *w), "{spec:?} identity");
            for m in 0..=3 {
                for k in [1, 3] {
                    for f in maps(n, m) {
                        for g in maps(m, k) {
                            let gf: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                            for w in &values {
                                assert_eq!(act(&g, &act(&f, w)), act(&gf, w), "{spec:?} composition");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn enumeration_is_standard() {
    for spec in concrete_specs() {
        let all = spec.enumerate_atoms(&[0, 1, 2], BIG).unwrap();
        for mask in 0u8..8 {
            let u: Vec<usize> = (0..3).filter(|&i| mask >> i & 1 == 1).collect();
            let inside: BTreeSet<IxValue> =
                all.iter().filter(|w| w.support().iter().all(|a| u.contains(a))).cloned().collect();
            let direct: BTreeSet<IxValue> = spec.enumerate_atoms(&u, BIG).unwrap().into_iter().collect();
            assert_eq!(inside, direct, "{spec:?} over {u:?}");
        }
    }
}

#[test]
fn support_is_natural_and_canonical_form_is_stable() {
    for spec in concrete_specs() {
        let values = spec.enumerate_atoms(&[0, 1, 2], BIG).unwrap();
        for f in maps(3, 3) {
            for w in &values {
                let image: BTreeSet<usize> = w.support().iter().map(|&a| f[a]).collect();
                let moved: BTreeSet<usize> = act(&f, w).support().into_iter().collect();
                assert_eq!(image, moved);
            }
        }
        for w in &values {
            let mut again = w.clone();
            again.canonicalize();
            assert!(w.is_canonical() && again == *w);
        }
    }
}

fn specs_for_graphs() -> [FunctorSpec; 3] {
    [FunctorSpec::UPair, FunctorSpec::DPair, FunctorSpec::FinPowerset]
}

fn seeded(seed: u64) -> (ChaCha8Rng, FunctorSpec) {
    let mut r = rng(seed);
    let spec = specs_for_graphs()[r.gen_range(0..3)].clone();
    (r, spec)
}

fn same_maps(a: &Hom, b: &Hom) -> bool {
    a.edge_map() == b.edge_map() && a.vertex_map() == b.vertex_map()
}

fn random_subgraph(r: &mut ChaCha8Rng, g: &Arc<FGraph>) -> SubgraphHandle {
    let es: Vec<usize> = (0..g.edge_count()).filter(|_| r.gen_bool(0.5)).collect();
    let vs: Vec<usize> = (0..g.vertex_count()).filter(|_| r.gen_bool(0.4)).collect();
    generated_subgraph(g, es, vs)
}

fn random_homs_from(r: &mut ChaCha8Rng, g: &Arc<FGraph>, target: &Arc<FGraph>) -> Option<Hom> {
    all_homs(g, target, BIG).unwrap().choose(r).cloned()
}

#[test]
fn category_laws_on_small_graphs() {
    let gs = small_graphs(&FunctorSpec::UPair, 2, 2);
    for a in &gs {
        for b in &gs {
            for f in all_homs(a, b, BIG).unwrap() {
                assert!(same_maps(&f.compose(&Hom::identity(a.clone())).unwrap(), &f));
                assert!(same_maps(&Hom::identity(b.clone()).compose(&f).unwrap(), &f));
                for c in &gs {
                    for g in all_homs(b, c, BIG).unwrap().into_iter().take(4) {
                        for h in all_homs(c, a, BIG).unwrap().into_iter().take(4) {
                            let left = h.compose(&g).unwrap().compose(&f).unwrap();
                            let right = h.compose(&g.compose(&f).unwrap()).unwrap();
                            assert!(same_maps(&left, &right));
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn quotient_then_kernel_is_identity(seed in proptest::prelude::any::<u64>()) {
        let (mut r, spec) = seeded(seed);
        let g = random_graph(&mut r, &spec, 4, 4, common::any);
        let theta = kernel(&random_hom(&mut r, &g, 1, common::any));
        let q = quotient(&g, &theta).unwrap();
        prop_assert_eq!(kernel(&q.projection), theta);
    }

    #[test]
    fn factorization_and_mediation(seed in proptest::prelude::any::<u64>()) {
        let (mut r, spec) = seeded(seed);
        let g = random_graph(&mut r, &spec, 4, 4, common::any);
        let phi = random_hom(&mut r, &g, 1, common::any);
        let f = factorize(&phi);
        prop_assert!(f.epi.is_surjective() && f.mono.is_injective());
        prop_assert!(same_maps(&f.mono.compose(&f.epi).unwrap(), &phi));

        // ψ = χ∘epi must give back χ, and χ must be the only such hom.
        let chi = random_hom(&mut r, &f.mid, 1, common::any);
        let psi = chi.compose(&f.epi).unwrap();
        let got = mediate_through_epi(&f.epi, &psi).unwrap().unwrap();
        prop_assert!(same_maps(&got, &chi));
        let all = all_homs(&f.mid, chi.target(), BIG).unwrap();
        let matching = all.iter().filter(|x| same_maps(&x.compose(&f.epi).unwrap(), &psi)).count();
        prop_assert_eq!(matching, 1);

        // and through the mono: mono∘α comes back as α.
        let alpha = random_homs_from(&mut r, &g, &f.mid);
        if let Some(alpha) = alpha {
            let through = f.mono.compose(&alpha).unwrap();
            let back = mediate_through_mono(&f.mono, &through).unwrap().unwrap();
            prop_assert!(same_maps(&back, &alpha));
        }
    }

    #[test]
    fn colimits_match_set_level(seed in proptest::prelude::any::<u64>()) {
        let (mut r, spec) = seeded(seed);
        let g = random_graph(&mut r, &spec, 3, 3, common::any);
        let h = random_graph(&mut r, &spec, 3, 3, common::any);
        let sum = coproduct(&[g.clone(), h.clone()]).unwrap();
        prop_assert_eq!(sum.graph.edge_count(), g.edge_count() + h.edge_count());
        prop_assert_eq!(sum.graph.vertex_count(), g.vertex_count() + h.vertex_count());

        let phi = random_hom(&mut r, &g, 1, common::any);
        if let Some(psi) = random_homs_from(&mut r, &g, phi.target()) {
            let q = coequalize(&phi, &psi).unwrap();
            let t = phi.target();
            let ker = kernel(&q.projection);
            let edges = Partition::generated(t.edge_count(), (0..g.edge_count()).map(|e| (phi.edge_map()[e], psi.edge_map()[e])));
            let vertices = Partition::generated(t.vertex_count(), (0..g.vertex_count()).map(|v| (phi.vertex_map()[v], psi.vertex_map()[v])));
            // Vertices are exactly the set-level coequalizer; edges are at least it.
            prop_assert_eq!(ker.vertices, vertices);
            prop_assert!(edges.refines(&ker.edges));
        }
    }

    #[test]
    fn cogenerated_is_union_of_subgraphs_within(seed in proptest::prelude::any::<u64>()) {
        let (mut r, spec) = seeded(seed);
        let g = random_graph(&mut r, &spec, 3, 4, common::any);
        let es: Vec<usize> = (0..g.edge_count()).filter(|_| r.gen_bool(0.6)).collect();
        let vs: Vec<usize> = (0..g.vertex_count()).filter(|_| r.gen_bool(0.6)).collect();
        let within = |h: &SubgraphHandle| h.edges().iter().all(|e| es.contains(e)) && h.vertices().iter().all(|v| vs.contains(v));
        let mut ue = BTreeSet::new();
        let mut uv = BTreeSet::new();
        for h in subgraph_lattice(&g, BIG).unwrap().iter().filter(|h| within(h)) {
            ue.extend(h.edges().iter().copied());
            uv.extend(h.vertices().iter().copied());
        }
        let c = cogenerated_subgraph(&g, es.clone(), vs.clone());
        prop_assert_eq!(c.edges().to_vec(), ue.into_iter().collect::<Vec<_>>());
        prop_assert_eq!(c.vertices().to_vec(), uv.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn product_edges_are_separated_and_preimages_are_set_level(seed in proptest::prelude::any::<u64>()) {
        let (mut r, spec) = seeded(seed);
        let g = random_graph(&mut r, &spec, 2, 2, common::any);
        let h = random_graph(&mut r, &spec, 2, 2, common::any);
        let p = product(&[g.clone(), h.clone()], BIG).unwrap();
        let mut seen = BTreeSet::new();
        for e in 0..p.graph.edge_count() {
            let key = (p.projections[0].edge_map()[e], p.projections[1].edge_map()[e], p.graph.value(e).clone());
            prop_assert!(seen.insert(key));
        }

        let phi = random_hom(&mut r, &g, 2, common::any);
        let sub = random_subgraph(&mut r, phi.target());
        let pre = preimage(&phi, &sub).unwrap();
        let es: Vec<usize> = (0..g.edge_count()).filter(|&e| sub.contains_edge(phi.edge_map()[e])).collect();
        let vs: Vec<usize> = (0..g.vertex_count()).filter(|&v| sub.contains_vertex(phi.vertex_map()[v])).collect();
        prop_assert_eq!(pre.edges(), &es[..]);
        prop_assert_eq!(pre.vertices(), &vs[..]);
    }

    #[test]
    fn relations_union_monotonicity_and_graphs_of_homs(seed in proptest::prelude::any::<u64>()) {
        let (mut r, spec) = seeded(seed);
        let g1 = random_graph(&mut r, &spec, 3, 2, common::any);
        let g2 = random_graph(&mut r, &spec, 3, 2, common::any);
        let mut spans = Vec::new();
        for _ in 0..2 {
            let s = random_graph(&mut r, &spec, 2, 2, common::any);
            if let (Some(a), Some(b)) = (random_homs_from(&mut r, &s, &g1), random_homs_from(&mut r, &s, &g2)) {
                spans.push(relation_from_hom_pair(&a, &b).unwrap().pairs());
            }
        }
        if spans.len() == 2 {
            let mut union = spans[0].clone();
            union.edge_pairs.extend(spans[1].edge_pairs.iter().copied());
            union.vertex_pairs.extend(spans[1].vertex_pairs.iter().copied());
            let witnessed = matches!(is_graph_relation(&g1, &g2, &union, BIG).unwrap(), RelationCheck::Witnessed(_));
            prop_assert!(witnessed);
        }

        let full = RelationPair::full(&g1, &g2);
        let mut small = RelationPair::default();
        small.edge_pairs = full.edge_pairs.iter().copied().filter(|_| r.gen_bool(0.6)).collect();
        small.vertex_pairs = full.vertex_pairs.iter().copied().filter(|_| r.gen_bool(0.6)).collect();
        let a = largest_graph_relation_within(&g1, &g2, &small, BIG).unwrap();
        let b = largest_graph_relation_within(&g1, &g2, &full, BIG).unwrap();
        prop_assert!(a.pairs().is_within(&b.pairs()));
        let again = largest_graph_relation_within(&g1, &g2, &a.pairs(), BIG).unwrap();
        prop_assert_eq!(again.pairs(), a.pairs());

        if let Some(phi) = random_homs_from(&mut r, &g1, &g2) {
            let gphi = graph_of_hom(&phi);
            prop_assert!(gphi.is_consistent());
            prop_assert!(gphi.pairs().is_within(&largest_graph_relation(&g1, &g2, BIG).unwrap().pairs()));
        }
    }

    #[test]
    fn cofree_adjunction_data(seed in proptest::prelude::any::<u64>()) {
        let (mut r, spec) = seeded(seed);
        let g = random_graph(&mut r, &spec, 3, 3, common::any);
        let (cofree, eta) = unit_embedding(&g, BIG).unwrap();
        prop_assert!(eta.is_injective());
        // ε_{UG} ∘ U(η_G) = id
        let back = coloring_of(&eta, &cofree).unwrap();
        prop_assert_eq!(back.edges, (0..g.edge_count()).collect::<Vec<_>>());
        prop_assert_eq!(back.vertices, (0..g.vertex_count()).collect::<Vec<_>>());

        let colors = ColorSet::new(FiniteSet::new(["1", "2"]), FiniteSet::new(["r", "g"]));
        let cx = Arc::new(Cofree::new(&spec, &colors, BIG).unwrap());
        // C(ε_X) ∘ η_{C(X)} = id
        let (ccx, eta_c) = unit_embedding(cx.graph(), BIG).unwrap();
        let counit = cx.counit();
        let c_eps = cofree_on_morphisms(&ccx, &cx, &counit.edges, &counit.vertices).unwrap();
        prop_assert!(same_maps(&c_eps.compose(&eta_c).unwrap(), &Hom::identity(cx.graph().clone())));

        // Extending from a subgraph restricts back to the input.
        let u = random_subgraph(&mut r, &g);
        let ug = Arc::new(u.to_graph());
        let gamma = Coloring {
            edges: (0..ug.edge_count()).map(|_| r.gen_range(0..2)).collect(),
            vertices: (0..ug.vertex_count()).map(|_| r.gen_range(0..2)).collect(),
        };
        let phi = induced_hom(&ug, &gamma, &cx).unwrap();
        let ext = extend_to_cofree(&u, &phi, &cx).unwrap();
        prop_assert!(same_maps(&ext.compose(&u.inclusion_from(ug.clone())).unwrap(), &phi));
    }

    #[test]
    fn transformations_are_functorial(seed in proptest::prelude::any::<u64>()) {
        let mut r = rng(seed);
        let colored = FunctorSpec::colored(FiniteSet::new(["a", "b"]), FiniteSet::new(["x", "y"]), FunctorSpec::DPair);
        let cases = [
            (NaturalTransformation::deorient(), FunctorSpec::DPair),
            (NaturalTransformation::underlying_hyper(), FunctorSpec::DirectedHyper),
            (NaturalTransformation::uncolor(&colored).unwrap(), colored.clone()),
            (NaturalTransformation::identity(FunctorSpec::UPair), FunctorSpec::UPair),
        ];
        for (tau, spec) in &cases {
            let g = random_graph(&mut r, spec, 3, 3, common::any);
            let phi = random_hom(&mut r, &g, 1, common::any);
            prop_assert!(apply_transformation_hom(tau, &phi).is_ok(), "{} breaks a hom", tau.name);
        }
        // De-orientation is onto objects.
        let u = random_graph(&mut r, &FunctorSpec::UPair, 3, 3, common::any);
        let tau = NaturalTransformation::deorient();
        let pre = object_preimage(&tau, &u, BIG).unwrap().expect("every unordered pair has an orientation");
        prop_assert_eq!(apply_transformation(&tau, &pre).unwrap(), (*u).clone());
    }

    #[test]
    fn simplify_and_minimize_shapes(seed in proptest::prelude::any::<u64>()) {
        let (mut r, spec) = seeded(seed);
        let g = random_graph(&mut r, &spec, 4, 5, common::any);
        let (s, _) = simplify(&g).unwrap();
        prop_assert!(s.is_simple());
        let m = minimize(&g, BIG).unwrap().graph;
        prop_assert!(m.edge_count() <= 3);
        for pe in all_partitions(m.edge_count()) {
            for pv in all_partitions(m.vertex_count()) {
                let theta = EquivPair { edges: pe.clone(), vertices: pv };
                let congruent = is_congruence(&m, &theta).unwrap().is_ok();
                prop_assert!(!congruent || (theta.edges.is_discrete() && theta.vertices.is_discrete()));
            }
        }
    }

    #[test]
    fn conjunct_parts_and_irreducibility(seed in proptest::prelude::any::<u64>()) {
        let (mut r, spec) = seeded(seed);
        let g = random_graph(&mut r, &spec, 3, 3, common::any);
        let d = conjunct_decomposition(&g);
        for (i, part) in d.conjuncts.iter().enumerate() {
            prop_assert!(part.contains_edge(i));
            prop_assert!(is_one_generated(&Arc::new(part.to_graph())));
        }
        prop_assert_eq!(d.isolated, g.isolated_vertices());

        // Irreducible iff some edge lies in no proper subgraph.
        let lattice = subgraph_lattice(&g, BIG).unwrap();
        let oracle = (0..g.edge_count()).any(|e| lattice.iter().all(|h| h.is_whole() || !h.contains_edge(e)));
        prop_assert_eq!(is_conjunctly_irreducible(&g), oracle);
    }
}

fn loop_colors() -> Arc<Cofree> {
    let colors = ColorSet::new(FiniteSet::new(["1"]), FiniteSet::new(["r", "g"]));
    Arc::new(Cofree::new(&FunctorSpec::UPair, &colors, BIG).unwrap())
}

fn random_pattern(r: &mut ChaCha8Rng, c: &Arc<Cofree>) -> Pattern {
    let g = c.graph();
    let es: Vec<usize> = (0..g.edge_count()).filter(|_| r.gen_bool(0.6)).collect();
    let vs: Vec<usize> = (0..g.vertex_count()).filter(|_| r.gen_bool(0.8)).collect();
    Pattern::new(c.clone(), es, vs).unwrap()
}

fn sat(g: &FGraph, p: &Pattern) -> bool {
    satisfies_pattern(g, p, BIG).unwrap().is_ok()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn satisfaction_is_closed_under_class_operations(seed in proptest::prelude::any::<u64>()) {
        let mut r = rng(seed);
        let c = loop_colors();
        let p = random_pattern(&mut r, &c);
        let g = random_graph(&mut r, &FunctorSpec::UPair, 3, 3, common::any);
        let h = random_graph(&mut r, &FunctorSpec::UPair, 3, 3, common::any);
        if sat(&g, &p) {
            prop_assert!(sat(&random_subgraph(&mut r, &g).to_graph(), &p));
            let phi = random_hom(&mut r, &g, 0, common::any);
            prop_assert!(sat(&image(&phi).0.to_graph(), &p));
            if sat(&h, &p) {
                prop_assert!(sat(&coproduct(&[g.clone(), h.clone()]).unwrap().graph, &p));
            }
            // Enlarging the pattern keeps satisfaction.
            let bigger = Pattern::new(c.clone(), (0..c.graph().edge_count()).filter(|e| p.edges().contains(e) || r.gen_bool(0.5)), p.vertices().to_vec()).unwrap();
            prop_assert!(sat(&g, &bigger));
        }
    }

    #[test]
    fn invariance_lemma(seed in proptest::prelude::any::<u64>()) {
        let mut r = rng(seed);
        let c = loop_colors();
        let p = random_pattern(&mut r, &c);
        let hat = p.hat();
        prop_assert_eq!(sat(&hat.to_graph(), &p), is_invariant_subgraph(&hat, BIG).unwrap().is_ok());
    }

    #[test]
    fn implications_and_conditionals_correspond(seed in proptest::prelude::any::<u64>()) {
        let mut r = rng(seed);
        let c = loop_colors();
        let imp = Implication::new(random_pattern(&mut r, &c), random_pattern(&mut r, &c)).unwrap();
        let cond = conditional_from_implication(&imp).unwrap();
        let g = Arc::new((*random_graph(&mut r, &FunctorSpec::UPair, 3, 3, common::any)).clone());
        prop_assert_eq!(
            satisfies_implication_pointwise(&g, &imp, BIG).unwrap().is_ok(),
            satisfies_conditional(&g, &cond, BIG).unwrap().is_ok()
        );

        let host = random_graph(&mut r, &FunctorSpec::UPair, 2, 2, common::any);
        let es: Vec<usize> = (0..host.edge_count()).filter(|_| r.gen_bool(0.5)).collect();
        let vs: Vec<usize> = (0..host.vertex_count()).filter(|_| r.gen_bool(0.7)).collect();
        let rc = ConditionalPattern::new(host, es, vs).unwrap();
        let back = implication_from_conditional(&rc, BIG).unwrap();
        let small = random_graph(&mut r, &FunctorSpec::UPair, 2, 2, common::any);
        prop_assert_eq!(
            satisfies_conditional(&small, &rc, BIG).unwrap().is_ok(),
            satisfies_implication_pointwise(&small, &back, BIG).unwrap().is_ok()
        );
    }
}

#[test]
fn nonempty_filter_keeps_powerset_orientable() {
    let mut r = rng(3);
    for _ in 0..20 {
        let g = random_graph(&mut r, &FunctorSpec::FinPowerset, 3, 3, nonempty);
        assert!((0..g.edge_count()).all(|e| !g.support(e).is_empty()));
    }
}
