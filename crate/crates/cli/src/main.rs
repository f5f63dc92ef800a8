//! `fgraph`: command-line access to F-graph operations. Every command
//! prints one JSON object with a top-level `"ok"` field.
//!
//! Exit codes: 0 success or true verdict, 1 false verdict, 2 usage or
//! validation error, 3 budget exceeded.

mod io;

use std::io::Write;
use std::ops::ControlFlow;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use fgraph::cofree::{self, Cofree};
use fgraph::covariety::{self, AuditMode, Pattern};
use fgraph::json::{self as fj, PatternJson};
use fgraph::limits;
use fgraph::morphism::{self, Refusal};
use fgraph::relations::{self, RelationCheck, RelationPair};
use fgraph::search::HomSearch;
use fgraph::transforms::{self, NaturalTransformation};
use fgraph::{subgraph_check, validate_graph, Caps, Error, FGraph, Hom};
use serde_json::{json, Map, Value as Json};

use io::{edge_index, graph_json, hom_json, load_colors, load_graph, load_hom, load_json, load_spec, CliError, CliResult, Outcome};

#[derive(Parser)]
#[command(name = "fgraph", version, about = "Operations on graphs over set functors")]
struct Cli {
    /// Indented output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Most values or graphs to enumerate.
    #[arg(long, global = true, value_name = "N")]
    cap_enumeration: Option<u128>,
    /// Most colorings to try.
    #[arg(long, global = true, value_name = "N")]
    cap_colorings: Option<u128>,
    /// Most homs to search through.
    #[arg(long, global = true, value_name = "N")]
    cap_homs: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

// A hom file, with optional endpoint overrides.
#[derive(clap::Args)]
struct HomArg {
    hom: String,
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    target: Option<String>,
}

impl HomArg {
    fn load(&self) -> CliResult<Hom> {
        let s = self.source.as_deref().map(load_graph).transpose()?;
        let t = self.target.as_deref().map(load_graph).transpose()?;
        load_hom(&self.hom, s, t)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    Deorient,
    Uncolor,
    UnderlyingHyper,
    Simplify,
    Minimize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Covariety,
    Quasi,
    Complete,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph file.
    Validate { graph: String },
    /// Check that maps form a homomorphism.
    CheckHom(HomArg),
    /// Image factorization of a hom.
    Factorize(HomArg),
    /// Kernel classes of a hom.
    Kernel(HomArg),
    /// Quotient by an equivalence given as classes.
    Quotient { graph: String, classes: String },
    /// Mediate `psi` through the epi `phi`.
    MediateEpi { phi: String, psi: String },
    /// Mediate `psi` through the mono `phi`.
    MediateMono { phi: String, psi: String },
    /// Disjoint union with its injections.
    Coproduct {
        #[arg(required = true)]
        graphs: Vec<String>,
    },
    /// Coequalizer of two parallel homs.
    Coequalize { phi: String, psi: String },
    /// Pushout of a span sharing its source.
    Pushout { phi: String, psi: String },
    /// Product with its projections.
    Product {
        #[arg(required = true)]
        graphs: Vec<String>,
    },
    /// Equalizer of two parallel homs, as a subgraph of the source.
    Equalize { phi: String, psi: String },
    /// Largest subgraph inside `{"edges": [...], "vertices": [...]}`.
    Cogenerate { graph: String, subset: String },
    /// Smallest subgraph containing `{"edges": [...], "vertices": [...]}`.
    Generate { graph: String, subset: String },
    /// Every subgraph.
    Lattice { graph: String },
    /// The terminal graph of a functor.
    Terminal { functor: String },
    /// Is a relation pair a graph relation? Prints a witness when it is.
    RelationCheck { left: String, right: String, relation: String },
    /// Largest graph relation, optionally inside a given relation pair.
    LargestRelation {
        left: String,
        right: String,
        #[arg(long)]
        within: Option<String>,
    },
    /// Are two edges related?
    Related { left: String, left_edge: String, right: String, right_edge: String },
    /// Kernel of a hom as a graph relation, with section and retraction.
    KernelRelation(HomArg),
    /// The cofree graph over a color set.
    Cofree { functor: String, colors: String },
    /// The hom into the cofree graph induced by a coloring.
    ColorInduce { graph: String, colors: String, coloring: String },
    /// Embedding of a graph into the cofree graph over its own carriers.
    UnitEmbed { graph: String },
    /// Extend a hom from a subgraph into `C(X)` to the whole graph.
    Extend { graph: String, subset: String, colors: String, hom: String },
    /// Is the graph a retract of a cofree graph?
    RegularInjective { graph: String },
    /// Apply a graph transformation.
    Transform {
        graph: String,
        #[arg(long)]
        kind: TransformKind,
    },
    /// Lift a target orientation back along a powerset hom.
    LiftOrientation {
        #[command(flatten)]
        hom: HomArg,
        #[arg(long)]
        orientation: String,
    },
    /// Conjunct decomposition into one-generated parts.
    Decompose { graph: String },
    /// Quotient by the kernel of the hom to the terminal graph.
    Minimize { graph: String },
    /// Merge edges carrying equal values.
    Simplify { graph: String },
    /// Cogenerated subgraph of a pattern.
    PatternHat {
        pattern: String,
        #[arg(long)]
        functor: String,
    },
    /// Does a graph satisfy a pattern? Prints a failing coloring if not.
    Satisfies { graph: String, pattern: String },
    /// Is the pattern's subset an invariant subgraph of `C(X)`?
    Invariant {
        pattern: String,
        #[arg(long)]
        functor: String,
    },
    /// Pattern defined by a class of graphs.
    PatOfClass {
        colors: String,
        #[arg(required = true)]
        graphs: Vec<String>,
    },
    /// Compare closure search with pattern satisfaction over probes.
    ClosureAudit {
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        colors: String,
        #[arg(long, num_args = 0.., required = true)]
        generators: Vec<String>,
        #[arg(long, num_args = 0.., required = true)]
        probes: Vec<String>,
    },
    /// Enumerate or count homs between two graphs.
    HomSearch {
        source: String,
        target: String,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        injective: bool,
    },
}

fn caps(cli: &Cli) -> CliResult<Caps> {
    let mut caps = match std::env::var("FGRAPH_CAPS") {
        Ok(s) => Caps::parse(&s)?,
        Err(_) => Caps::default(),
    };
    caps.enumeration = cli.cap_enumeration.unwrap_or(caps.enumeration);
    caps.colorings = cli.cap_colorings.unwrap_or(caps.colorings);
    caps.homs = cli.cap_homs.unwrap_or(caps.homs);
    Ok(caps)
}

fn ids<'a>(xs: impl IntoIterator<Item = &'a fgraph::ElementId>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn refusal_json(r: &Refusal) -> Json {
    match r {
        Refusal::EdgePair(a, b) => json!({ "reason": "edge_pair", "elements": [a, b] }),
        Refusal::VertexPair(a, b) => json!({ "reason": "vertex_pair", "elements": [a, b] }),
        Refusal::EdgeOutside(e) => json!({ "reason": "edge_outside_image", "elements": [e] }),
        Refusal::VertexOutside(v) => json!({ "reason": "vertex_outside_image", "elements": [v] }),
        Refusal::EmptyTarget => json!({ "reason": "empty_target", "elements": [] }),
    }
}

fn subset_indices(g: &FGraph, arg: &str) -> CliResult<(Vec<usize>, Vec<usize>)> {
    let (es, vs) = fj::id_lists(&load_json(arg)?)?;
    let es = es.iter().map(|e| edge_index(g, e)).collect::<CliResult<Vec<_>>>()?;
    let vs = vs
        .iter()
        .map(|v| g.vertex_index(v).ok_or_else(|| CliError::Lib(Error::DomainMismatch(format!("unknown vertex {v}")))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok((es, vs))
}

fn load_pattern(arg: &str, spec: &fgraph::FunctorSpec, caps: &Caps) -> CliResult<Pattern> {
    let pj: PatternJson = serde_json::from_value(load_json(arg)?).map_err(|e| Error::Format(format!("pattern: {e}")))?;
    Ok(pj.into_pattern(spec, caps.enumeration)?)
}

fn quotient_json(q: &morphism::Quotient) -> Json {
    json!({ "graph": graph_json(&q.graph), "projection": hom_json(&q.projection) })
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let caps = caps(cli)?;
    use Outcome::{Done, Verdict};
    Ok(match &cli.command {
        Command::Validate { graph } => {
            let gj: fj::GraphJson = serde_json::from_value(load_json(graph)?).map_err(|e| Error::Format(e.to_string()))?;
            let raw = gj.into_raw();
            match validate_graph(&raw) {
                Ok(()) => Done(json!({ "valid": true, "edges": raw.edges.len(), "vertices": raw.vertices.len() })),
                Err(vs) => Verdict(false, json!({ "valid": false, "violations": vs })),
            }
        }
        Command::CheckHom(h) => {
            match h.load() {
                Ok(phi) => Done(json!({ "valid": true, "injective": phi.is_injective(), "surjective": phi.is_surjective() })),
                Err(CliError::Lib(e @ (Error::NotAHomomorphism(_) | Error::DomainMismatch(_)))) => {
                    Verdict(false, json!({ "valid": false, "violation": e.to_string() }))
                }
                Err(e) => return Err(e),
            }
        }
        Command::Factorize(h) => {
            let f = morphism::factorize(&h.load()?);
            Done(json!({ "image": graph_json(&f.mid), "epi": hom_json(&f.epi), "mono": hom_json(&f.mono) }))
        }
        Command::Kernel(h) => {
            let phi = h.load()?;
            Done(json!({ "kernel": fj::equiv_to_json(&morphism::kernel(&phi), phi.source()) }))
        }
        Command::Quotient { graph, classes } => {
            let g = load_graph(graph)?;
            let theta = fj::equiv_from_json(&load_json(classes)?, &g)?;
            match morphism::is_congruence(&g, &theta)? {
                Ok(()) => Done(quotient_json(&morphism::quotient(&g, &theta)?)),
                Err((a, b)) => Verdict(
                    false,
                    json!({ "congruence": false, "edges": [g.edge_id(a), g.edge_id(b)] }),
                ),
            }
        }
        Command::MediateEpi { phi, psi } | Command::MediateMono { phi, psi } => {
            let (phi, psi) = (load_hom(phi, None, None)?, load_hom(psi, None, None)?);
            let r = if matches!(cli.command, Command::MediateEpi { .. }) {
                morphism::mediate_through_epi(&phi, &psi)?
            } else {
                morphism::mediate_through_mono(&phi, &psi)?
            };
            match r {
                Ok(m) => Done(json!({ "mediator": hom_json(&m) })),
                Err(r) => Verdict(false, json!({ "refusal": refusal_json(&r) })),
            }
        }
        Command::Coproduct { graphs } => {
            let gs = graphs.iter().map(|g| load_graph(g)).collect::<CliResult<Vec<_>>>()?;
            let c = limits::coproduct(&gs)?;
            Done(json!({ "graph": graph_json(&c.graph), "injections": c.injections.iter().map(hom_json).collect::<Vec<_>>() }))
        }
        Command::Coequalize { phi, psi } => {
            let q = limits::coequalize(&load_hom(phi, None, None)?, &load_hom(psi, None, None)?)?;
            Done(quotient_json(&q))
        }
        Command::Pushout { phi, psi } => {
            let p = limits::pushout(&load_hom(phi, None, None)?, &load_hom(psi, None, None)?)?;
            Done(json!({ "graph": graph_json(&p.graph), "left": hom_json(&p.left), "right": hom_json(&p.right) }))
        }
        Command::Product { graphs } => {
            let gs = graphs.iter().map(|g| load_graph(g)).collect::<CliResult<Vec<_>>>()?;
            let p = limits::product(&gs, caps.enumeration)?;
            Done(json!({ "graph": graph_json(&p.graph), "projections": p.projections.iter().map(hom_json).collect::<Vec<_>>() }))
        }
        Command::Equalize { phi, psi } => {
            let (h, incl) = limits::equalize(&load_hom(phi, None, None)?, &load_hom(psi, None, None)?)?;
            Done(json!({ "subgraph": fj::subgraph_to_json(&h), "graph": graph_json(incl.source()), "inclusion": hom_json(&incl) }))
        }
        Command::Cogenerate { graph, subset } | Command::Generate { graph, subset } => {
            let g = load_graph(graph)?;
            let (es, vs) = subset_indices(&g, subset)?;
            let h = if matches!(cli.command, Command::Cogenerate { .. }) {
                limits::cogenerated_subgraph(&g, es, vs)
            } else {
                limits::generated_subgraph(&g, es, vs)
            };
            Done(json!({ "subgraph": fj::subgraph_to_json(&h), "graph": graph_json(&h.to_graph()) }))
        }
        Command::Lattice { graph } => {
            let g = load_graph(graph)?;
            let l = limits::subgraph_lattice(&g, caps.enumeration)?;
            Done(json!({ "count": l.len(), "subgraphs": l.iter().map(fj::subgraph_to_json).collect::<Vec<_>>() }))
        }
        Command::Terminal { functor } => {
            let t = limits::terminal_graph(&load_spec(functor)?, caps.enumeration)?;
            Done(json!({ "graph": graph_json(&t) }))
        }
        Command::RelationCheck { left, right, relation } => {
            let (g1, g2) = (load_graph(left)?, load_graph(right)?);
            let rj: fj::RelationJson = serde_json::from_value(load_json(relation)?).map_err(|e| Error::Format(e.to_string()))?;
            match relations::is_graph_relation(&g1, &g2, &rj.to_pairs(&g1, &g2)?, caps.enumeration)? {
                RelationCheck::Witnessed(r) => Done(json!({ "relation": fj::relation_to_json(&r) })),
                RelationCheck::Unwitnessed(a, b) => {
                    Verdict(false, json!({ "unwitnessed": [g1.edge_id(a), g2.edge_id(b)] }))
                }
            }
        }
        Command::LargestRelation { left, right, within } => {
            let (g1, g2) = (load_graph(left)?, load_graph(right)?);
            let bounds = match within {
                Some(w) => {
                    let rj: fj::RelationJson = serde_json::from_value(load_json(w)?).map_err(|e| Error::Format(e.to_string()))?;
                    rj.to_pairs(&g1, &g2)?
                }
                None => RelationPair::full(&g1, &g2),
            };
            let r = relations::largest_graph_relation_within(&g1, &g2, &bounds, caps.enumeration)?;
            Done(json!({ "relation": fj::relation_to_json(&r) }))
        }
        Command::Related { left, left_edge, right, right_edge } => {
            let (g1, g2) = (load_graph(left)?, load_graph(right)?);
            let (e1, e2) = (edge_index(&g1, left_edge)?, edge_index(&g2, right_edge)?);
            match relations::edges_related(&g1, e1, &g2, e2, caps.enumeration)? {
                Some(s) => Done(json!({
                    "related": true,
                    "span": { "graph": graph_json(&s.graph), "left": hom_json(&s.left), "right": hom_json(&s.right) },
                })),
                None => Verdict(false, json!({ "related": false })),
            }
        }
        Command::KernelRelation(h) => {
            let k = relations::kernel_relation(&h.load()?, caps.enumeration)?;
            Done(json!({
                "relation": fj::relation_to_json(&k.relation),
                "graph": graph_json(&k.graph),
                "section": hom_json(&k.section),
                "retraction": hom_json(&k.retraction),
            }))
        }
        Command::Cofree { functor, colors } => {
            let c = Cofree::new(&load_spec(functor)?, &load_colors(colors)?, caps.enumeration)?;
            Done(json!({ "graph": graph_json(c.graph()) }))
        }
        Command::ColorInduce { graph, colors, coloring } => {
            let g = load_graph(graph)?;
            let colors = load_colors(colors)?;
            let gamma = fj::coloring_from_json(&load_json(coloring)?, &g, &colors)?;
            let c = Cofree::new(g.spec(), &colors, caps.enumeration)?;
            Done(json!({ "hom": hom_json(&cofree::induced_hom(&g, &gamma, &c)?) }))
        }
        Command::UnitEmbed { graph } => {
            let (_, eta) = cofree::unit_embedding(&load_graph(graph)?, caps.enumeration)?;
            Done(json!({ "hom": hom_json(&eta) }))
        }
        Command::Extend { graph, subset, colors, hom } => {
            let g = load_graph(graph)?;
            let (es, vs) = subset_indices(&g, subset)?;
            let handle = match subgraph_check(&g, es, vs) {
                Ok(h) => h,
                Err(e) => return Err(CliError::Usage(format!("subset is not a subgraph at edge {}", g.edge_id(e)))),
            };
            let c = Cofree::new(g.spec(), &load_colors(colors)?, caps.enumeration)?;
            let phi = load_hom(hom, Some(Arc::new(handle.to_graph())), Some(c.graph().clone()))?;
            Done(json!({ "hom": hom_json(&cofree::extend_to_cofree(&handle, &phi, &c)?) }))
        }
        Command::RegularInjective { graph } => match cofree::is_regular_injective(&load_graph(graph)?, caps.homs)? {
            Some(r) => Done(json!({ "regular_injective": true, "retraction": hom_json(&r) })),
            None => Verdict(false, json!({ "regular_injective": false })),
        },
        Command::Transform { graph, kind } => {
            let g = load_graph(graph)?;
            let tau = match kind {
                TransformKind::Deorient => NaturalTransformation::deorient(),
                TransformKind::Uncolor => NaturalTransformation::uncolor(g.spec())?,
                TransformKind::UnderlyingHyper => NaturalTransformation::underlying_hyper(),
                TransformKind::Simplify => {
                    let (s, h) = transforms::simplify(&g)?;
                    return Ok(Done(json!({ "graph": graph_json(&s), "projection": hom_json(&h) })));
                }
                TransformKind::Minimize => return Ok(Done(quotient_json(&transforms::minimize(&g, caps.enumeration)?))),
            };
            Done(json!({ "graph": graph_json(&transforms::apply_transformation(&tau, &g)?) }))
        }
        Command::LiftOrientation { hom, orientation } => {
            let phi = hom.load()?;
            let omega2 = fj::orientation_from_json(&load_json(orientation)?, phi.target())?;
            let l = transforms::lift_orientation(&phi, &omega2)?;
            Done(json!({ "orientation": fj::orientation_to_json(&l.orientation, phi.source()), "hom": hom_json(&l.hom) }))
        }
        Command::Decompose { graph } => {
            let g = load_graph(graph)?;
            let d = transforms::conjunct_decomposition(&g);
            let parts: Vec<Json> = d
                .conjuncts
                .iter()
                .map(|h| {
                    let sub = Arc::new(h.to_graph());
                    json!({ "subgraph": fj::subgraph_to_json(h), "one_generated": transforms::is_one_generated(&sub) })
                })
                .collect();
            Done(json!({
                "parts": parts,
                "isolated": ids(d.isolated.iter().map(|&v| g.vertex_id(v))),
                "one_generated": transforms::is_one_generated(&g),
            }))
        }
        Command::Minimize { graph } => Done(quotient_json(&transforms::minimize(&load_graph(graph)?, caps.enumeration)?)),
        Command::Simplify { graph } => {
            let (s, h) = transforms::simplify(&load_graph(graph)?)?;
            Done(json!({ "graph": graph_json(&s), "projection": hom_json(&h) }))
        }
        Command::PatternHat { pattern, functor } => {
            let p = load_pattern(pattern, &load_spec(functor)?, &caps)?;
            let hat = p.hat();
            Done(json!({ "subgraph": fj::subgraph_to_json(&hat), "graph": graph_json(&hat.to_graph()) }))
        }
        Command::Satisfies { graph, pattern } => {
            let g = load_graph(graph)?;
            let p = load_pattern(pattern, g.spec(), &caps)?;
            match covariety::satisfies_pattern(&g, &p, caps.colorings)? {
                Ok(()) => Done(json!({ "satisfies": true })),
                Err(gamma) => Verdict(
                    false,
                    json!({ "satisfies": false, "coloring": fj::coloring_to_json(&g, &gamma, p.cofree().colors()) }),
                ),
            }
        }
        Command::Invariant { pattern, functor } => {
            let p = load_pattern(pattern, &load_spec(functor)?, &caps)?;
            let c = p.cofree().graph();
            let handle = subgraph_check(c, p.edges().iter().copied(), p.vertices().iter().copied())
                .map_err(|e| CliError::Usage(format!("pattern is not a subgraph at edge {}", c.edge_id(e))))?;
            match covariety::is_invariant_subgraph(&handle, caps.homs)? {
                Ok(()) => Done(json!({ "invariant": true })),
                Err(phi) => Verdict(false, json!({ "invariant": false, "endomorphism": hom_json(&phi) })),
            }
        }
        Command::PatOfClass { colors, graphs } => {
            let gs = graphs.iter().map(|g| load_graph(g)).collect::<CliResult<Vec<_>>>()?;
            let spec = gs[0].spec().clone();
            let c = Arc::new(Cofree::new(&spec, &load_colors(colors)?, caps.enumeration)?);
            let hat = covariety::pat_of_class(&gs, &c, caps.colorings)?;
            let p = Pattern::from_subgraph(c, &hat)?;
            Done(json!({ "pattern": PatternJson::from_pattern(&p), "subgraph": fj::subgraph_to_json(&hat) }))
        }
        Command::ClosureAudit { mode, colors, generators, probes } => {
            let ks = generators.iter().map(|g| load_graph(g)).collect::<CliResult<Vec<_>>>()?;
            let us = probes.iter().map(|g| load_graph(g)).collect::<CliResult<Vec<_>>>()?;
            let spec = ks.first().or(us.first()).map(|g| g.spec().clone()).ok_or_else(|| CliError::Usage("no graphs given".into()))?;
            let mode = match mode {
                Mode::Covariety => AuditMode::Covariety,
                Mode::Quasi => AuditMode::Quasi,
                Mode::Complete => AuditMode::Complete,
            };
            let colors = load_colors(colors)?;
            let r = covariety::closure_audit(&spec, &ks, &us, &colors, mode, &caps)?;
            let rows: Vec<Json> = r
                .rows
                .iter()
                .zip(probes)
                .map(|(row, name)| json!({ "probe": name, "lhs": row.lhs, "rhs": row.rhs, "agrees": row.agrees() }))
                .collect();
            let body = json!({ "mode": mode, "agrees": r.agrees(), "rows": rows, "warnings": r.warnings });
            if r.agrees() {
                Done(body)
            } else {
                Verdict(false, body)
            }
        }
        Command::HomSearch { source, target, count, injective } => {
            let (g1, g2) = (load_graph(source)?, load_graph(target)?);
            let mut search = HomSearch::new(&g1, &g2);
            if *injective {
                search = search.injective();
            }
            if *count {
                Done(json!({ "count": search.count(caps.homs)?.to_string() }))
            } else {
                let mut homs = Vec::new();
                search.for_each(caps.homs, |em, vm| {
                    let h = Hom::from_indices(g1.clone(), g2.clone(), em.to_vec(), vm.to_vec()).expect("search yields homs");
                    let m = h.maps();
                    homs.push(json!({ "edge_map": m.edge_map, "vertex_map": m.vertex_map }));
                    ControlFlow::Continue(())
                })?;
                Done(json!({ "count": homs.len().to_string(), "homs": homs }))
            }
        }
    })
}

fn emit(mut body: Json, ok: bool, pretty: bool) {
    let obj = body.as_object_mut().map(std::mem::take).unwrap_or_else(Map::new);
    let mut out = Map::new();
    out.insert("ok".into(), Json::Bool(ok));
    out.extend(obj);
    let j = Json::Object(out);
    let s = if pretty { serde_json::to_string_pretty(&j) } else { serde_json::to_string(&j) };
    let _ = writeln!(std::io::stdout().lock(), "{}", s.expect("json prints"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Done(j)) => {
            emit(j, true, cli.pretty);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Verdict(v, j)) => {
            emit(j, v, cli.pretty);
            ExitCode::from(if v { 0 } else { 1 })
        }
        Err(e) => {
            emit(json!({ "error": e.to_json() }), false, cli.pretty);
            ExitCode::from(e.exit_code())
        }
    }
}
