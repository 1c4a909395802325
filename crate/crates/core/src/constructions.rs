//! Named hypergraphs, extremal families and derived constructions.
//!
//! Families can be described by a small nested syntax,
//! `name(key=value, ...)`, where a value is a number, a word or another
//! family: `corona(base=complete(n=3,k=3),k=3,pendant=2)`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError, VertexId};
use crate::strategies::{CoronaLabels, EdgeLabel, LabelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("unknown family {0:?}")]
    UnknownName(String),
    #[error("bad parameters for {family}: {reason}")]
    BadParams { family: String, reason: String },
    #[error("syntax error at byte {pos}: {reason}")]
    Syntax { pos: usize, reason: String },
    #[error("vertex {0} is isolated, so its open neighborhood is empty")]
    IsolatedVertex(VertexId),
    #[error("expected a simple graph (2-uniform)")]
    NotAGraph,
    #[error("figure2 instance failed validation: {0}")]
    Figure2(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Labels(#[from] LabelError),
}

/// A hypergraph together with how it was built.
#[derive(Debug, Clone)]
pub struct LabeledHypergraph {
    pub hypergraph: Hypergraph,
    pub labels: Option<CoronaLabels>,
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub vertex_names: Vec<String>,
}

impl LabeledHypergraph {
    fn plain(hypergraph: Hypergraph, family: FamilySpec) -> Self {
        let vertex_names = (0..hypergraph.n()).map(|v| format!("v{v}")).collect();
        LabeledHypergraph {
            hypergraph,
            labels: None,
            params: family.param_strings(),
            family: family.to_string(),
            vertex_names,
        }
    }
}

fn check(family: &str, ok: bool, reason: &str) -> Result<(), ConstructionError> {
    if ok {
        Ok(())
    } else {
        Err(ConstructionError::BadParams {
            family: family.into(),
            reason: reason.into(),
        })
    }
}

/// `k` disjoint copies of H₁: two 3-edges `{x1,x2,x3}`, `{y1,y2,y3}` joined by
/// the matching `{x1,y1}`, `{x2,y2}`, `{x3,y3}`.
pub fn family_hk(k: usize) -> Result<LabeledHypergraph, ConstructionError> {
    check("Hk", k >= 1, "k must be at least 1")?;
    let mut edges: Vec<Vec<VertexId>> = Vec::with_capacity(5 * k);
    let mut names = Vec::with_capacity(6 * k);
    for c in 0..k {
        let b = 6 * c;
        edges.push(vec![b, b + 1, b + 2]);
        edges.push(vec![b + 3, b + 4, b + 5]);
        for i in 0..3 {
            edges.push(vec![b + i, b + 3 + i]);
        }
        for side in ["x", "y"] {
            for i in 1..=3 {
                names.push(if k == 1 {
                    format!("{side}{i}")
                } else {
                    format!("{side}{i}.{}", c + 1)
                });
            }
        }
    }
    let hypergraph = Hypergraph::new(6 * k, edges)?;
    Ok(LabeledHypergraph {
        hypergraph,
        labels: None,
        family: format!("Hk(k={k})"),
        params: BTreeMap::from([("k".into(), k.to_string())]),
        vertex_names: names,
    })
}

/// Attaches `k` pendant edges of size `pendant_size` at every base vertex.
///
/// Base vertex and edge ids are kept. Pendant edge `e(j, i)` is appended in
/// order of `i` then `j`, and its fresh vertices follow the base vertices.
pub fn k_corona(
    base: &Hypergraph,
    k: usize,
    pendant_size: usize,
) -> Result<LabeledHypergraph, ConstructionError> {
    check("corona", k >= 1, "k must be at least 1")?;
    check("corona", pendant_size >= 2, "pendant size must be at least 2")?;
    let mut edges: Vec<Vec<VertexId>> = base.edges().to_vec();
    let mut labels = vec![EdgeLabel::Base; base.m()];
    let mut names: Vec<String> = (0..base.n()).map(|v| format!("v{v}")).collect();
    let mut next = base.n();
    for i in 0..base.n() {
        for j in 1..=k {
            let mut e = vec![i];
            for t in 1..pendant_size {
                e.push(next);
                names.push(format!("p{i}.{j}.{t}"));
                next += 1;
            }
            edges.push(e);
            labels.push(EdgeLabel::Attached { j, i });
        }
    }
    let hypergraph = Hypergraph::new(next, edges)?;
    let labels = CoronaLabels::new(&hypergraph, labels)?;
    Ok(LabeledHypergraph {
        hypergraph,
        labels: Some(labels),
        family: format!("corona(k={k},pendant={pendant_size})"),
        params: BTreeMap::from([
            ("k".into(), k.to_string()),
            ("pendant".into(), pendant_size.to_string()),
            ("n_base".into(), base.n().to_string()),
        ]),
        vertex_names: names,
    })
}

/// The 4-cycle, the one graph excluded from the 4/11 bound.
pub fn c4() -> Hypergraph {
    cycle(4).expect("C4 is valid")
}

/// `C_n` as a 2-uniform hypergraph.
pub fn cycle(n: usize) -> Result<Hypergraph, ConstructionError> {
    check("cycle", n >= 3, "n must be at least 3")?;
    Ok(Hypergraph::new(n, (0..n).map(|i| [i, (i + 1) % n]))?)
}

/// Vertex names of the `figure2` instance, in order.
pub const FIGURE2_NAMES: [&str; 6] = ["x1", "x2", "x3", "y1", "y2", "y3"];

/// The 3-uniform example with `n = 6`, `m = 4` and `τ_g = 3`.
///
/// Edges are read off the drawing: `{x1,x2,x3}`, `{y1,y2,y3}`,
/// `{x1,x2,y1}`, `{x3,y2,y3}`. The structural part of the caption is checked
/// here; the game value is checked by tests.
pub fn figure2() -> Result<Hypergraph, ConstructionError> {
    let h = Hypergraph::new(6, [[0, 1, 2], [3, 4, 5], [0, 1, 3], [2, 4, 5]])?;
    let fail = |why: &str| Err(ConstructionError::Figure2(why.into()));
    if h.uniformity() != Some(3) || h.n() != 6 || h.m() != 4 {
        return fail("expected a 3-uniform hypergraph with n = 6, m = 4");
    }
    if (0..6).any(|v| h.degree(v) != 2) {
        return fail("expected every vertex to have degree 2");
    }
    Ok(h)
}

/// All `k`-subsets of `n` vertices.
pub fn complete(n: usize, k: usize) -> Result<Hypergraph, ConstructionError> {
    check("complete", k >= 1 && k <= n, "need 1 <= k <= n")?;
    Ok(Hypergraph::new(n, (0..n).combinations(k))?)
}

/// `t` disjoint `k`-edges.
pub fn isolated_edges(t: usize, k: usize) -> Result<Hypergraph, ConstructionError> {
    check("isolated_edges", k >= 1, "k must be at least 1")?;
    Ok(Hypergraph::new(
        t * k,
        (0..t).map(|i| (i * k..(i + 1) * k).collect::<Vec<_>>()),
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighborhoodMode {
    Open,
    Closed,
}

/// One edge per vertex: its open or closed neighborhood in the graph `g`.
///
/// Transversals of the result are exactly the total dominating sets (open)
/// or dominating sets (closed) of `g`. Equal neighborhoods collapse to one
/// edge under normalization.
pub fn neighborhood_hypergraph(
    g: &Hypergraph,
    mode: NeighborhoodMode,
) -> Result<Hypergraph, ConstructionError> {
    if g.m() > 0 && g.uniformity() != Some(2) {
        return Err(ConstructionError::NotAGraph);
    }
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); g.n()];
    for e in g.edges() {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    let mut edges = Vec::with_capacity(g.n());
    for (v, nbrs) in adj.iter_mut().enumerate() {
        if mode == NeighborhoodMode::Closed {
            nbrs.push(v);
        } else if nbrs.is_empty() {
            return Err(ConstructionError::IsolatedVertex(v));
        }
        edges.push(nbrs.clone());
    }
    Ok(Hypergraph::new(g.n(), edges)?)
}

/// Parsed `name(key=value, ...)` expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub name: String,
    pub args: Vec<(String, FamilySpec)>,
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            let args = self.args.iter().map(|(k, v)| format!("{k}={v}")).join(",");
            write!(f, "({args})")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, reason: &str) -> Result<T, ConstructionError> {
        Err(ConstructionError::Syntax {
            pos: self.pos,
            reason: reason.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<String, ConstructionError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.'))
            .unwrap_or(rest.len());
        if len == 0 {
            return self.err("expected a name or value");
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn spec(&mut self) -> Result<FamilySpec, ConstructionError> {
        let name = self.word()?;
        let mut args = Vec::new();
        if self.eat('(') && !self.eat(')') {
            loop {
                let key = self.word()?;
                if !self.eat('=') {
                    return self.err("expected '='");
                }
                args.push((key, self.spec()?));
                if self.eat(')') {
                    break;
                }
                if !self.eat(',') {
                    return self.err("expected ',' or ')'");
                }
            }
        }
        Ok(FamilySpec { name, args })
    }
}

impl FamilySpec {
    pub fn parse(src: &str) -> Result<Self, ConstructionError> {
        let mut p = Parser { src, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != src.len() {
            return p.err("trailing input");
        }
        Ok(spec)
    }

    /// Builds from a family name and a separate `key=value,...` list, the
    /// shape used on the command line.
    pub fn from_parts(family: &str, params: &str) -> Result<Self, ConstructionError> {
        if params.trim().is_empty() {
            Self::parse(family)
        } else {
            Self::parse(&format!("{family}({params})"))
        }
    }

    fn get(&self, key: &str) -> Option<&FamilySpec> {
        self.args.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn bad(&self, reason: impl Into<String>) -> ConstructionError {
        ConstructionError::BadParams {
            family: self.name.clone(),
            reason: reason.into(),
        }
    }

    fn usize_arg(&self, key: &str) -> Result<usize, ConstructionError> {
        let v = self.get(key).ok_or_else(|| self.bad(format!("missing {key}")))?;
        if !v.args.is_empty() {
            return Err(self.bad(format!("{key} must be a number")));
        }
        v.name
            .parse()
            .map_err(|_| self.bad(format!("{key}={} is not a number", v.name)))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize, ConstructionError> {
        match self.get(key) {
            Some(_) => self.usize_arg(key),
            None => Ok(default),
        }
    }

    fn only(&self, keys: &[&str]) -> Result<(), ConstructionError> {
        match self.args.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
            Some((k, _)) => Err(self.bad(format!("unexpected parameter {k}"))),
            None => Ok(()),
        }
    }

    fn param_strings(&self) -> BTreeMap<String, String> {
        self.args
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect()
    }

    pub fn build(&self) -> Result<LabeledHypergraph, ConstructionError> {
        let plain = |h: Hypergraph| Ok(LabeledHypergraph::plain(h, self.clone()));
        match self.name.as_str() {
            "C4" | "c4" => {
                self.only(&[])?;
                plain(c4())
            }
            "figure2" => {
                self.only(&[])?;
                let mut out = LabeledHypergraph::plain(figure2()?, self.clone());
                out.vertex_names = FIGURE2_NAMES.iter().map(|s| s.to_string()).collect();
                Ok(out)
            }
            "H1" | "h1" => {
                self.only(&[])?;
                family_hk(1)
            }
            "Hk" | "hk" => {
                self.only(&["k"])?;
                family_hk(self.usize_arg("k")?)
            }
            "cycle" => {
                self.only(&["n"])?;
                plain(cycle(self.usize_arg("n")?)?)
            }
            "complete" => {
                self.only(&["n", "k"])?;
                plain(complete(self.usize_arg("n")?, self.usize_arg("k")?)?)
            }
            "isolated_edges" => {
                self.only(&["t", "k"])?;
                plain(isolated_edges(self.usize_arg("t")?, self.usize_arg("k")?)?)
            }
            "empty" => {
                self.only(&["n"])?;
                plain(Hypergraph::empty(self.usize_or("n", 0)?))
            }
            "corona" => {
                self.only(&["base", "k", "pendant"])?;
                let base = self.get("base").ok_or_else(|| self.bad("missing base"))?.build()?;
                let mut out = k_corona(
                    &base.hypergraph,
                    self.usize_arg("k")?,
                    self.usize_or("pendant", 2)?,
                )?;
                out.family = self.to_string();
                out.params = self.param_strings();
                Ok(out)
            }
            "neighborhood" => {
                self.only(&["graph", "mode"])?;
                let g = self.get("graph").ok_or_else(|| self.bad("missing graph"))?.build()?;
                let mode = match self.get("mode").map(|m| m.name.as_str()) {
                    Some("open") => NeighborhoodMode::Open,
                    Some("closed") | None => NeighborhoodMode::Closed,
                    Some(other) => return Err(self.bad(format!("unknown mode {other}"))),
                };
                plain(neighborhood_hypergraph(&g.hypergraph, mode)?)
            }
            other => Err(ConstructionError::UnknownName(other.to_string())),
        }
    }
}

/// Parses and builds a family expression.
pub fn construct(spec: &str) -> Result<LabeledHypergraph, ConstructionError> {
    FamilySpec::parse(spec)?.build()
}

/// Shorthand for the named small instances.
pub fn named_small(name: &str) -> Result<Hypergraph, ConstructionError> {
    construct(name).map(|l| l.hypergraph)
}
