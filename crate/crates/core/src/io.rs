//! Network file ingestion: whitespace edge lists and a Pajek subset.
//!
//! Edge-list lines read `tail head mu0 [sigma] [varsigma0]`, where `mu0` is the
//! prior mean of the edge weight, `sigma` the known observation noise and
//! `varsigma0` the prior standard deviation. `#` starts a comment. Vertices are
//! either all non-negative integers (used as ids directly) or arbitrary tokens
//! interned to dense ids in order of first appearance.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path as FsPath;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: self-loop on vertex `{vertex}`")]
    SelfLoop { line: usize, vertex: String },
    #[error("line {line}: vertex `{name}` is ambiguous with `{other}`")]
    AmbiguousVertex { line: usize, name: String, other: String },
    #[error("missing `*Vertices` header")]
    MissingVerticesHeader,
    #[error("line {line}: vertex id {id} out of range 1..={count}")]
    VertexOutOfRange { line: usize, id: i64, count: usize },
    #[error("line {line}: non-numeric weight `{token}`")]
    InvalidWeight { line: usize, token: String },
    #[error("line {line}: unsupported section `{section}`")]
    UnsupportedSection { line: usize, section: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamDefaults {
    pub noise_sd: f64,
    pub prior_sd: f64,
}

impl Default for ParamDefaults {
    fn default() -> Self {
        Self { noise_sd: 1.0, prior_sd: 1.0 }
    }
}

/// Per-edge model parameters, indexed by edge.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdgeParams {
    /// Prior mean of the edge weight.
    pub prior_mean: Vec<f64>,
    /// Known observation noise standard deviation.
    pub noise_sd: Vec<f64>,
    /// Prior standard deviation of the unknown mean.
    pub prior_sd: Vec<f64>,
}

impl EdgeParams {
    fn push(&mut self, mean: f64, noise_sd: f64, prior_sd: f64) {
        self.prior_mean.push(mean);
        self.noise_sd.push(noise_sd);
        self.prior_sd.push(prior_sd);
    }

    pub fn len(&self) -> usize {
        self.prior_mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prior_mean.is_empty()
    }
}

/// A loaded graph with its parameter table and vertex names.
#[derive(Debug, Clone)]
pub struct Network {
    pub graph: Graph,
    pub params: EdgeParams,
    /// Original vertex token for each dense vertex id.
    pub vertex_names: Vec<String>,
}

impl Network {
    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn vertex_name(&self, id: usize) -> &str {
        &self.vertex_names[id]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Pajek,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" | "edges" => Ok(Self::EdgeList),
            "pajek" | "net" => Ok(Self::Pajek),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

impl Format {
    /// Guesses the format from a file extension (`.net` means Pajek).
    pub fn from_path(path: &FsPath) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("net") => Self::Pajek,
            _ => Self::EdgeList,
        }
    }
}

/// Loads a network file. `directed` only applies to edge lists; Pajek files
/// carry their own directedness.
pub fn load_network(
    path: &FsPath,
    format: Format,
    directed: bool,
    defaults: ParamDefaults,
) -> Result<Network, LoadError> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        Format::EdgeList => load_edge_list(reader, directed, defaults),
        Format::Pajek => load_pajek(reader, defaults),
    }
}

fn parse_real(token: &str, line: usize, what: &str) -> Result<f64, LoadError> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(LoadError::Malformed { line, reason: format!("invalid {what} `{token}`") }),
    }
}

fn parse_positive(token: &str, line: usize, what: &str) -> Result<f64, LoadError> {
    let v = parse_real(token, line, what)?;
    if v <= 0.0 {
        return Err(LoadError::Malformed { line, reason: format!("{what} must be positive, got {v}") });
    }
    Ok(v)
}

struct RawEdge<'a> {
    line: usize,
    tail: &'a str,
    head: &'a str,
}

pub fn load_edge_list<R: BufRead>(reader: R, directed: bool, defaults: ParamDefaults) -> Result<Network, LoadError> {
    let lines: Vec<String> = reader.lines().collect::<Result<_, _>>()?;
    let mut raw = Vec::new();
    let mut params = EdgeParams::default();
    for (i, text) in lines.iter().enumerate() {
        let line = i + 1;
        let content = text.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if !(3..=5).contains(&tokens.len()) {
            return Err(LoadError::Malformed {
                line,
                reason: format!("expected `tail head mu0 [sigma] [varsigma0]`, got {} fields", tokens.len()),
            });
        }
        let mean = parse_real(tokens[2], line, "prior mean")?;
        let noise = match tokens.get(3) {
            Some(t) => parse_positive(t, line, "noise sd")?,
            None => defaults.noise_sd,
        };
        let prior_sd = match tokens.get(4) {
            Some(t) => parse_positive(t, line, "prior sd")?,
            None => defaults.prior_sd,
        };
        if tokens[0] == tokens[1] {
            return Err(LoadError::SelfLoop { line, vertex: tokens[0].to_string() });
        }
        raw.push(RawEdge { line, tail: tokens[0], head: tokens[1] });
        params.push(mean, noise, prior_sd);
    }

    // Distinct tokens naming the same integer (`1` vs `01`) cannot be resolved.
    let mut by_value: HashMap<u64, &str> = HashMap::new();
    let mut numeric = true;
    for e in &raw {
        for token in [e.tail, e.head] {
            match token.parse::<u64>() {
                Ok(value) => {
                    let prev = *by_value.entry(value).or_insert(token);
                    if prev != token {
                        return Err(LoadError::AmbiguousVertex {
                            line: e.line,
                            name: token.to_string(),
                            other: prev.to_string(),
                        });
                    }
                }
                Err(_) => numeric = false,
            }
        }
    }

    let mut vertex_names: Vec<String> = Vec::new();
    let mut ids: HashMap<&str, usize> = HashMap::new();
    if numeric {
        let count = by_value.keys().max().map_or(0, |&m| m as usize + 1);
        vertex_names = (0..count).map(|i| i.to_string()).collect();
        for (&value, &token) in &by_value {
            ids.insert(token, value as usize);
        }
    } else {
        for e in &raw {
            for token in [e.tail, e.head] {
                ids.entry(token).or_insert_with(|| {
                    vertex_names.push(token.to_string());
                    vertex_names.len() - 1
                });
            }
        }
    }

    let mut graph = Graph::new(directed, vertex_names.len());
    for e in &raw {
        graph
            .add_edge(ids[e.tail], ids[e.head])
            .map_err(|err| LoadError::Malformed { line: e.line, reason: err.to_string() })?;
    }
    Ok(Network { graph, params, vertex_names })
}

/// Writes a network back in edge-list form; loading the output reproduces it.
pub fn write_edge_list<W: Write>(network: &Network, mut out: W) -> io::Result<()> {
    let kind = if network.graph.is_directed() { "directed" } else { "undirected" };
    writeln!(out, "# {kind} edge list: tail head mu0 sigma varsigma0")?;
    for (i, e) in network.graph.edges().iter().enumerate() {
        writeln!(
            out,
            "{} {} {} {} {}",
            network.vertex_names[e.tail],
            network.vertex_names[e.head],
            network.params.prior_mean[i],
            network.params.noise_sd[i],
            network.params.prior_sd[i],
        )?;
    }
    Ok(())
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    Vertices,
    Edges,
    Arcs,
}

/// Pulls the first label token, honouring double quotes.
fn pajek_label(rest: &str) -> Option<String> {
    let rest = rest.trim_start();
    if let Some(quoted) = rest.strip_prefix('"') {
        let end = quoted.find('"').unwrap_or(quoted.len());
        Some(quoted[..end].to_string())
    } else {
        rest.split_whitespace().next().map(str::to_string)
    }
}

/// Loads the `*Vertices` / `*Edges` / `*Arcs` subset of Pajek `.net` files.
///
/// Edge weights count collaborations, so the prior mean of each edge is the
/// negated weight: minimising the bottleneck then favours strong ties.
pub fn load_pajek<R: BufRead>(reader: R, defaults: ParamDefaults) -> Result<Network, LoadError> {
    let mut section = Section::Preamble;
    let mut vertex_names: Option<Vec<String>> = None;
    let mut directed: Option<bool> = None;
    let mut edges = Vec::new();
    let mut params = EdgeParams::default();

    for (i, text) in reader.lines().enumerate() {
        let line = i + 1;
        let text = text?;
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix('*') {
            let mut parts = header.split_whitespace();
            let keyword = parts.next().unwrap_or("").to_ascii_lowercase();
            match keyword.as_str() {
                "vertices" => {
                    let count: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(|| {
                        LoadError::Malformed { line, reason: "`*Vertices` needs a vertex count".into() }
                    })?;
                    vertex_names = Some((1..=count).map(|i| i.to_string()).collect());
                    section = Section::Vertices;
                }
                "edges" | "arcs" => {
                    if vertex_names.is_none() {
                        return Err(LoadError::MissingVerticesHeader);
                    }
                    let is_arcs = keyword == "arcs";
                    if directed.is_some_and(|d| d != is_arcs) {
                        return Err(LoadError::UnsupportedSection { line, section: "mixed *Edges and *Arcs".into() });
                    }
                    directed = Some(is_arcs);
                    section = if is_arcs { Section::Arcs } else { Section::Edges };
                }
                "network" if section == Section::Preamble => {}
                _ => {
                    return Err(LoadError::UnsupportedSection { line, section: format!("*{keyword}") });
                }
            }
            continue;
        }
        match section {
            Section::Preamble => return Err(LoadError::MissingVerticesHeader),
            Section::Vertices => {
                let names = vertex_names.as_mut().expect("set with the section");
                let (id_token, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
                let id: i64 = id_token
                    .parse()
                    .map_err(|_| LoadError::Malformed { line, reason: format!("invalid vertex id `{id_token}`") })?;
                if id < 1 || id as usize > names.len() {
                    return Err(LoadError::VertexOutOfRange { line, id, count: names.len() });
                }
                if let Some(label) = pajek_label(rest) {
                    names[id as usize - 1] = label;
                }
            }
            Section::Edges | Section::Arcs => {
                let count = vertex_names.as_ref().map_or(0, Vec::len);
                let tokens: Vec<&str> = trimmed.split_whitespace().collect();
                if tokens.len() < 2 {
                    return Err(LoadError::Malformed { line, reason: "expected `u v [w]`".into() });
                }
                let endpoint = |t: &str| -> Result<usize, LoadError> {
                    let id: i64 = t
                        .parse()
                        .map_err(|_| LoadError::Malformed { line, reason: format!("invalid vertex id `{t}`") })?;
                    if id < 1 || id as usize > count {
                        return Err(LoadError::VertexOutOfRange { line, id, count });
                    }
                    Ok(id as usize - 1)
                };
                let u = endpoint(tokens[0])?;
                let v = endpoint(tokens[1])?;
                let weight = match tokens.get(2) {
                    Some(t) => t
                        .parse::<f64>()
                        .ok()
                        .filter(|w| w.is_finite())
                        .ok_or_else(|| LoadError::InvalidWeight { line, token: t.to_string() })?,
                    None => 1.0,
                };
                if u == v {
                    return Err(LoadError::SelfLoop { line, vertex: tokens[0].to_string() });
                }
                edges.push((u, v));
                params.push(-weight, defaults.noise_sd, defaults.prior_sd);
            }
        }
    }

    let vertex_names = vertex_names.ok_or(LoadError::MissingVerticesHeader)?;
    let graph = Graph::from_edges(directed.unwrap_or(false), vertex_names.len(), edges)
        .map_err(|err: GraphError| LoadError::Malformed { line: 0, reason: err.to_string() })?;
    Ok(Network { graph, params, vertex_names })
}
