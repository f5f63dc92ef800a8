//! Reading inputs and shaping outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use fgraph::cofree::ColorSet;
use fgraph::json::{GraphJson, HomJson};
use fgraph::{Error, FGraph, FunctorSpec, Hom};
use serde_json::{json, Value as Json};

/// What a command produced: a plain result or a yes/no verdict.
pub enum Outcome {
    Done(Json),
    Verdict(bool, Json),
}

pub enum CliError {
    Lib(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_budget() => 3,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            CliError::Lib(Error::InvalidGraph(vs)) => json!({
                "kind": "invalid_graph",
                "message": Error::InvalidGraph(vs.clone()).to_string(),
                "violations": vs,
            }),
            CliError::Lib(e) => json!({ "kind": e.kind(), "message": e.to_string() }),
            CliError::Usage(m) => json!({ "kind": "usage", "message": m }),
        }
    }
}

/// Literal JSON when the argument looks like it, otherwise a file path.
pub fn load_json(arg: &str) -> CliResult<Json> {
    let text = match arg.trim_start().chars().next() {
        Some('{') | Some('[') => arg.to_string(),
        _ => fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| CliError::Lib(Error::Format(format!("{arg}: {e}"))))
}

fn parse<T: serde::de::DeserializeOwned>(j: Json, what: &str) -> CliResult<T> {
    serde_json::from_value(j).map_err(|e| CliError::Lib(Error::Format(format!("{what}: {e}"))))
}

pub fn graph_from(j: Json) -> CliResult<Arc<FGraph>> {
    let gj: GraphJson = parse(j, "graph")?;
    Ok(Arc::new(gj.into_graph()?))
}

pub fn load_graph(arg: &str) -> CliResult<Arc<FGraph>> {
    graph_from(load_json(arg)?)
}

pub fn load_spec(arg: &str) -> CliResult<FunctorSpec> {
    let spec: FunctorSpec = parse(load_json(arg)?, "functor")?;
    spec.check()?;
    Ok(spec)
}

pub fn load_colors(arg: &str) -> CliResult<ColorSet> {
    parse(load_json(arg)?, "color set")
}

/// A hom file. `source` and `target` may be inline graphs or paths
/// relative to the file; explicit overrides win.
pub fn load_hom(arg: &str, source: Option<Arc<FGraph>>, target: Option<Arc<FGraph>>) -> CliResult<Hom> {
    let mut j = load_json(arg)?;
    let base: PathBuf = Path::new(arg).parent().map(Path::to_path_buf).unwrap_or_default();
    let mut resolved = [source, target];
    for (slot, key) in resolved.iter_mut().zip(["source", "target"]) {
        let Some(obj) = j.as_object_mut() else { break };
        match obj.remove(key) {
            Some(Json::String(p)) if slot.is_none() => *slot = Some(load_graph(&base.join(p).to_string_lossy())?),
            Some(g @ Json::Object(_)) if slot.is_none() => *slot = Some(graph_from(g)?),
            _ => {}
        }
    }
    let [s, t] = resolved;
    let hj: HomJson = parse(j, "hom")?;
    Ok(hj.into_hom(s, t)?)
}

pub fn graph_json(g: &FGraph) -> Json {
    fgraph::json::graph_to_json(g)
}

/// A hom with both endpoints inline, so it can be fed back in.
pub fn hom_json(phi: &Hom) -> Json {
    serde_json::to_value(HomJson::from_hom(phi, true)).expect("hom serializes")
}

pub fn edge_index(g: &FGraph, id: &str) -> CliResult<usize> {
    g.edge_index(id).ok_or_else(|| CliError::Lib(Error::DomainMismatch(format!("unknown edge {id}"))))
}
