//! Weighted networks: construction, validation, the graph Laplacian and the
//! reversible random walk.
//!
//! Vertices are opaque string identifiers kept in a canonical order (see
//! [`natural_cmp`]); every vertex function in this crate is a `Vec<f64>`
//! indexed by that order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance of the reversibility test in [`conductance_from_walk`].
pub const REVERSIBILITY_TOL: f64 = 1e-12;

/// Compares identifiers with digit runs ordered numerically, so `"2" < "10"`.
/// Ties (`"01"` vs `"1"`) fall back to byte order, which keeps the order total.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    while !x.is_empty() && !y.is_empty() {
        let (run_x, rest_x) = split_run(x);
        let (run_y, rest_y) = split_run(y);
        let ord = match (run_x[0].is_ascii_digit(), run_y[0].is_ascii_digit()) {
            (true, true) => {
                let tx = trim_leading_zeros(run_x);
                let ty = trim_leading_zeros(run_y);
                tx.len().cmp(&ty.len()).then_with(|| tx.cmp(ty))
            }
            _ => run_x.cmp(run_y),
        };
        if ord != Ordering::Equal {
            return ord;
        }
        x = rest_x;
        y = rest_y;
    }
    x.len().cmp(&y.len()).then_with(|| a.cmp(b))
}

fn split_run(s: &[u8]) -> (&[u8], &[u8]) {
    let digit = s[0].is_ascii_digit();
    let end = s
        .iter()
        .position(|c| c.is_ascii_digit() != digit)
        .unwrap_or(s.len());
    s.split_at(end)
}

fn trim_leading_zeros(s: &[u8]) -> &[u8] {
    let start = s.iter().position(|&c| c != b'0').unwrap_or(s.len());
    &s[start..]
}

/// One edge record of the network file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub c: f64,
}

/// The on-disk network document: `{vertices, base, edges: [{u, v, c}]}`.
///
/// A document is a candidate; [`NetworkDocument::validate`] reports every
/// violated condition and [`Network::try_from`] accepts only clean ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub vertices: Vec<String>,
    pub base: String,
    pub edges: Vec<EdgeRecord>,
}

/// A single violated network condition.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NoVertices,
    DuplicateVertex(String),
    MissingBase(String),
    UnknownEndpoint { edge: usize, vertex: String },
    SelfLoop(String),
    NonPositiveConductance { u: String, v: String, c: f64 },
    DuplicateEdge { u: String, v: String },
    IsolatedVertex(String),
    NotConnected { unreachable: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "no vertices"),
            Violation::DuplicateVertex(x) => write!(f, "duplicate vertex `{x}`"),
            Violation::MissingBase(x) => write!(f, "base vertex `{x}` is not a vertex"),
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge #{edge} references unknown vertex `{vertex}`")
            }
            Violation::SelfLoop(x) => write!(f, "self-loop at `{x}`"),
            Violation::NonPositiveConductance { u, v, c } => {
                write!(f, "nonpositive conductance on edge {{{u},{v}}}: {c}")
            }
            Violation::DuplicateEdge { u, v } => write!(f, "duplicate edge {{{u},{v}}}"),
            Violation::IsolatedVertex(x) => write!(f, "vertex `{x}` has no incident edge"),
            Violation::NotConnected { unreachable } => write!(
                f,
                "not connected: {} vertex(es) unreachable from the base, first `{}`",
                unreachable.len(),
                unreachable[0]
            ),
        }
    }
}

/// Every violation found in a candidate network; empty means usable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl NetworkDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    /// Checks the four network conditions: symmetric positive conductances,
    /// no self-loops, at least one incident edge per vertex, connectedness
    /// (breadth-first from the base).
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.vertices.is_empty() {
            violations.push(Violation::NoVertices);
            return ValidationReport { violations };
        }

        let mut index: HashMap<&str, usize> = HashMap::new();
        for name in &self.vertices {
            let next = index.len();
            if index.insert(name.as_str(), next).is_some() {
                violations.push(Violation::DuplicateVertex(name.clone()));
            }
        }
        let base = index.get(self.base.as_str()).copied();
        if base.is_none() {
            violations.push(Violation::MissingBase(self.base.clone()));
        }

        let n = index.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            let (a, b) = match (index.get(e.u.as_str()), index.get(e.v.as_str())) {
                (Some(&a), Some(&b)) => (a, b),
                (a, _) => {
                    let vertex = if a.is_none() { &e.u } else { &e.v };
                    violations.push(Violation::UnknownEndpoint {
                        edge: i,
                        vertex: vertex.clone(),
                    });
                    continue;
                }
            };
            if a == b {
                violations.push(Violation::SelfLoop(e.u.clone()));
                continue;
            }
            // NaN fails this test as well.
            if !(e.c > 0.0 && e.c.is_finite()) {
                violations.push(Violation::NonPositiveConductance {
                    u: e.u.clone(),
                    v: e.v.clone(),
                    c: e.c,
                });
                continue;
            }
            if seen.insert((a.min(b), a.max(b)), i).is_some() {
                violations.push(Violation::DuplicateEdge {
                    u: e.u.clone(),
                    v: e.v.clone(),
                });
                continue;
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }

        let names: Vec<&str> = {
            let mut names = vec![""; n];
            for (&name, &i) in &index {
                names[i] = name;
            }
            names
        };
        for (i, nbrs) in adjacency.iter().enumerate() {
            if nbrs.is_empty() {
                violations.push(Violation::IsolatedVertex(names[i].to_owned()));
            }
        }

        if let Some(base) = base {
            let mut reached = vec![false; n];
            reached[base] = true;
            let mut queue = VecDeque::from([base]);
            while let Some(x) = queue.pop_front() {
                for &y in &adjacency[x] {
                    if !reached[y] {
                        reached[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            let mut unreachable: Vec<String> = (0..n)
                .filter(|&i| !reached[i])
                .map(|i| names[i].to_owned())
                .collect();
            if !unreachable.is_empty() {
                unreachable.sort_by(|a, b| natural_cmp(a, b));
                violations.push(Violation::NotConnected { unreachable });
            }
        }
        ValidationReport { violations }
    }
}

/// An undirected edge between vertex indices `a < b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub c: f64,
}

/// A validated finite connected network with a base vertex `o`.
///
/// Immutable after construction. Vertex indices follow the canonical
/// [`natural_cmp`] order of the identifiers.
#[derive(Clone, Debug)]
pub struct Network {
    names: Vec<String>,
    index: HashMap<String, usize>,
    base: usize,
    edges: Vec<Edge>,
    // (neighbour, edge index)
    adjacency: Vec<Vec<(usize, usize)>>,
    edge_lookup: HashMap<(usize, usize), usize>,
}

impl TryFrom<NetworkDocument> for Network {
    type Error = Error;

    fn try_from(doc: NetworkDocument) -> Result<Self> {
        let report = doc.validate();
        if !report.is_empty() {
            return Err(Error::InvalidNetwork(report));
        }
        let mut names = doc.vertices;
        names.sort_by(|a, b| natural_cmp(a, b));
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut edges: Vec<Edge> = doc
            .edges
            .iter()
            .map(|e| {
                let (x, y) = (index[&e.u], index[&e.v]);
                Edge {
                    a: x.min(y),
                    b: x.max(y),
                    c: e.c,
                }
            })
            .collect();
        edges.sort_by_key(|e| (e.a, e.b));

        let mut adjacency = vec![Vec::new(); names.len()];
        let mut edge_lookup = HashMap::with_capacity(edges.len());
        for (k, e) in edges.iter().enumerate() {
            adjacency[e.a].push((e.b, k));
            adjacency[e.b].push((e.a, k));
            edge_lookup.insert((e.a, e.b), k);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(Network {
            base: index[&doc.base],
            names,
            index,
            edges,
            adjacency,
            edge_lookup,
        })
    }
}

impl Network {
    /// Builds and validates a network from identifiers and `(u, v, c)` edges.
    pub fn new<S: Into<String>>(
        vertices: impl IntoIterator<Item = S>,
        base: impl Into<String>,
        edges: impl IntoIterator<Item = (S, S, f64)>,
    ) -> Result<Self> {
        let doc = NetworkDocument {
            vertices: vertices.into_iter().map(Into::into).collect(),
            base: base.into(),
            edges: edges
                .into_iter()
                .map(|(u, v, c)| EdgeRecord {
                    u: u.into(),
                    v: v.into(),
                    c,
                })
                .collect(),
        };
        Network::try_from(doc)
    }

    /// Network on vertices `"0".."n-1"` from index-based edges.
    pub fn from_indexed(n: usize, base: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Network::new(
            (0..n).map(|i| i.to_string()),
            base.to_string(),
            edges
                .iter()
                .map(|&(a, b, c)| (a.to_string(), b.to_string(), c)),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Network::try_from(NetworkDocument::from_json(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Network::try_from(NetworkDocument::read(path)?)
    }

    pub fn to_document(&self) -> NetworkDocument {
        NetworkDocument {
            vertices: self.names.clone(),
            base: self.names[self.base].clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    u: self.names[e.a].clone(),
                    v: self.names[e.b].clone(),
                    c: e.c,
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours of `x` with the index of the connecting edge.
    pub fn neighbors(&self, x: usize) -> &[(usize, usize)] {
        &self.adjacency[x]
    }

    pub fn edge_between(&self, x: usize, y: usize) -> Option<usize> {
        self.edge_lookup.get(&(x.min(y), x.max(y))).copied()
    }

    /// `c_xy`, zero when `x` and `y` are not adjacent.
    pub fn conductance(&self, x: usize, y: usize) -> f64 {
        self.edge_between(x, y).map_or(0.0, |k| self.edges[k].c)
    }

    /// `c(x) = Σ_{y~x} c_xy`.
    pub fn total_conductance(&self, x: usize) -> f64 {
        self.adjacency[x]
            .iter()
            .map(|&(_, k)| self.edges[k].c)
            .sum()
    }

    /// Vertex indices other than the base, in canonical order.
    pub fn non_base(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(move |&x| x != self.base)
    }

    /// Indicator function of a single vertex.
    pub fn delta(&self, x: usize) -> Vec<f64> {
        let mut d = vec![0.0; self.vertex_count()];
        d[x] = 1.0;
        d
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertex_count()
    }

    /// Hop distance from the base vertex.
    pub fn hop_distances(&self) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[self.base] = 0;
        let mut queue = VecDeque::from([self.base]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adjacency[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}

/// Total conductances `c(x)` and transition probabilities `p_xy = c_xy / c(x)`.
#[derive(Clone, Debug)]
pub struct WalkData {
    pub total_conductance: Vec<f64>,
    /// Row `x` lists `(y, p_xy)` over the neighbours of `x`.
    pub transition: Vec<Vec<(usize, f64)>>,
}

impl WalkData {
    pub fn probability(&self, x: usize, y: usize) -> f64 {
        self.transition[x]
            .iter()
            .find(|&&(z, _)| z == y)
            .map_or(0.0, |&(_, p)| p)
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.total_conductance.len();
        let mut p = DMatrix::zeros(n, n);
        for (x, row) in self.transition.iter().enumerate() {
            for &(y, pxy) in row {
                p[(x, y)] = pxy;
            }
        }
        p
    }

    /// `(Pu)(x) = Σ_y p_xy u(y)`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.transition
            .iter()
            .map(|row| row.iter().map(|&(y, p)| p * u[y]).sum())
            .collect()
    }

    /// Name-keyed transition map, the input shape of [`conductance_from_walk`].
    pub fn to_transition_map(&self, net: &Network) -> TransitionMap {
        let mut map = TransitionMap::new();
        for (x, row) in self.transition.iter().enumerate() {
            for &(y, p) in row {
                map.insert((net.name(x).to_owned(), net.name(y).to_owned()), p);
            }
        }
        map
    }
}

pub fn walk_data(net: &Network) -> WalkData {
    let total: Vec<f64> = (0..net.vertex_count())
        .map(|x| net.total_conductance(x))
        .collect();
    let transition = (0..net.vertex_count())
        .map(|x| {
            net.neighbors(x)
                .iter()
                .map(|&(y, k)| (y, net.edges()[k].c / total[x]))
                .collect()
        })
        .collect();
    WalkData {
        total_conductance: total,
        transition,
    }
}

/// `(x, y) -> p_xy` keyed by vertex identifiers.
pub type TransitionMap = BTreeMap<(String, String), f64>;

/// Rebuilds conductances `c_xy = c̃(x) p_xy` from a walk that is reversible
/// with respect to the vertex weights `c̃`.
///
/// Every pair with a positive transition in either direction becomes an edge;
/// the first pair (in canonical order) violating `c̃(x)p_xy = c̃(y)p_yx` beyond
/// [`REVERSIBILITY_TOL`] relative is reported.
pub fn conductance_from_walk(
    vertices: &[String],
    base: &str,
    p: &TransitionMap,
    c_tilde: &BTreeMap<String, f64>,
) -> Result<Network> {
    let weight = |x: &str| -> Result<f64> {
        match c_tilde.get(x) {
            Some(&w) if w > 0.0 && w.is_finite() => Ok(w),
            Some(&w) => Err(Error::InvalidParameter(format!(
                "vertex weight of `{x}` must be positive, got {w}"
            ))),
            None => Err(Error::UnknownVertex(x.to_owned())),
        }
    };

    let mut pairs: Vec<(&str, &str)> = p
        .keys()
        .map(|(x, y)| {
            if natural_cmp(x, y) == Ordering::Greater {
                (y.as_str(), x.as_str())
            } else {
                (x.as_str(), y.as_str())
            }
        })
        .collect();
    pairs.sort_by(|a, b| natural_cmp(a.0, b.0).then_with(|| natural_cmp(a.1, b.1)));
    pairs.dedup();

    let mut edges = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        let pxy = p.get(&(x.to_owned(), y.to_owned())).copied().unwrap_or(0.0);
        let pyx = p.get(&(y.to_owned(), x.to_owned())).copied().unwrap_or(0.0);
        let forward = weight(x)? * pxy;
        let backward = weight(y)? * pyx;
        let scale = forward.abs().max(backward.abs());
        if (forward - backward).abs() > REVERSIBILITY_TOL * scale || scale == 0.0 {
            return Err(Error::NotReversible {
                x: x.to_owned(),
                y: y.to_owned(),
                forward,
                backward,
            });
        }
        edges.push((x.to_owned(), y.to_owned(), forward));
    }
    Network::new(vertices.iter().cloned(), base, edges)
}

/// `(Δu)(x) = Σ_{y~x} c_xy (u(x) - u(y))`.
pub fn laplacian_apply(net: &Network, u: &[f64]) -> Vec<f64> {
    assert_eq!(u.len(), net.vertex_count(), "vertex function length");
    (0..net.vertex_count())
        .map(|x| {
            net.neighbors(x)
                .iter()
                .map(|&(y, k)| net.edges()[k].c * (u[x] - u[y]))
                .sum()
        })
        .collect()
}

/// Laplacian matrix in the given vertex ordering: `c(x)` on the diagonal,
/// `-c_xy` for edges.
pub fn laplacian_matrix(net: &Network, ordering: &[&str]) -> Result<DMatrix<f64>> {
    let n = net.vertex_count();
    if ordering.len() != n {
        return Err(Error::BadOrdering);
    }
    let mut pos = vec![usize::MAX; n];
    for (i, name) in ordering.iter().enumerate() {
        let x = net.index_of(name).map_err(|_| Error::BadOrdering)?;
        if pos[x] != usize::MAX {
            return Err(Error::BadOrdering);
        }
        pos[x] = i;
    }
    let mut m = DMatrix::zeros(n, n);
    for e in net.edges() {
        let (i, j) = (pos[e.a], pos[e.b]);
        m[(i, i)] += e.c;
        m[(j, j)] += e.c;
        m[(i, j)] -= e.c;
        m[(j, i)] -= e.c;
    }
    Ok(m)
}

/// Laplacian matrix in canonical vertex order.
pub fn canonical_laplacian(net: &Network) -> DMatrix<f64> {
    let order: Vec<&str> = net.names().iter().map(String::as_str).collect();
    laplacian_matrix(net, &order).expect("canonical order is a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Network {
        Network::from_indexed(3, 2, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap()
    }

    fn doc(vertices: &[&str], edges: &[(&str, &str, f64)]) -> NetworkDocument {
        NetworkDocument {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            base: vertices[0].to_string(),
            edges: edges
                .iter()
                .map(|&(u, v, c)| EdgeRecord {
                    u: u.into(),
                    v: v.into(),
                    c,
                })
                .collect(),
        }
    }

    #[test]
    fn natural_order() {
        let mut v = vec!["10", "2", "o", "01", "1", "0", "a10", "a9"];
        v.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(v, ["0", "01", "1", "2", "10", "a9", "a10", "o"]);
    }

    #[test]
    fn validate_reports() {
        let tri = doc(
            &["0", "1", "2"],
            &[("0", "1", 1.0), ("0", "2", 1.0), ("1", "2", 1.0)],
        );
        assert!(tri.validate().is_empty());

        let split = doc(&["0", "1", "2", "3"], &[("0", "1", 1.0), ("2", "3", 1.0)]);
        let report = split.validate();
        assert_eq!(report.violations.len(), 1);
        assert!(report.to_string().starts_with("not connected"));

        let zero = doc(&["0", "1"], &[("0", "1", 0.0)]);
        let report = zero.validate();
        assert!(report.to_string().contains("nonpositive conductance"));

        let lonely = doc(&["0"], &[]);
        assert_eq!(
            lonely.validate().violations,
            vec![Violation::IsolatedVertex("0".into())]
        );

        let dup = doc(&["0", "1"], &[("0", "1", 1.0), ("1", "0", 2.0)]);
        assert!(matches!(
            dup.validate().violations[0],
            Violation::DuplicateEdge { .. }
        ));

        let looped = doc(&["0", "1"], &[("0", "1", 1.0), ("1", "1", 2.0)]);
        assert_eq!(
            looped.validate().violations,
            vec![Violation::SelfLoop("1".into())]
        );
        assert!(matches!(
            Network::try_from(looped),
            Err(Error::InvalidNetwork(_))
        ));
    }

    #[test]
    fn walk_data_examples() {
        let path = Network::from_indexed(3, 0, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let w = walk_data(&path);
        assert_eq!(w.total_conductance[1], 2.0);
        assert_eq!(w.probability(1, 0), 0.5);
        assert_eq!(w.probability(1, 2), 0.5);

        let w = walk_data(&triangle());
        for x in 0..3 {
            for &(_, p) in &w.transition[x] {
                assert_eq!(p, 0.5);
            }
        }

        let q: f64 = 3.0;
        let geo =
            Network::from_indexed(4, 0, &[(0, 1, q), (1, 2, q * q), (2, 3, q * q * q)]).unwrap();
        let w = walk_data(&geo);
        assert!((w.probability(2, 3) - q / (1.0 + q)).abs() < 1e-15);
        assert!((w.probability(2, 1) - 1.0 / (1.0 + q)).abs() < 1e-15);
    }

    #[test]
    fn walk_round_trip() {
        let net = triangle();
        let w = walk_data(&net);
        let c: BTreeMap<String, f64> = net
            .names()
            .iter()
            .zip(&w.total_conductance)
            .map(|(n, &c)| (n.clone(), c))
            .collect();
        let back = conductance_from_walk(net.names(), "2", &w.to_transition_map(&net), &c).unwrap();
        for e in back.edges() {
            assert!((e.c - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn non_reversible_walk_rejected() {
        let names = vec!["x".to_string(), "y".to_string()];
        let mut p = TransitionMap::new();
        p.insert(("x".into(), "y".into()), 0.7);
        p.insert(("y".into(), "x".into()), 0.2);
        let c: BTreeMap<String, f64> = [("x".into(), 1.0), ("y".into(), 1.0)].into();
        match conductance_from_walk(&names, "x", &p, &c) {
            Err(Error::NotReversible { x, y, .. }) => {
                assert_eq!((x.as_str(), y.as_str()), ("x", "y"))
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn laplacian_examples() {
        let tri = triangle();
        assert_eq!(
            laplacian_apply(&tri, &[1.0, 0.0, 0.0]),
            vec![2.0, -1.0, -1.0]
        );
        assert_eq!(laplacian_apply(&tri, &[1.0; 3]), vec![0.0; 3]);

        let path = Network::from_indexed(3, 0, &[(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        assert_eq!(
            laplacian_apply(&path, &[0.0, 1.0, 3.0]),
            vec![-1.0, -3.0, 4.0]
        );
        let m = laplacian_matrix(&path, &["0", "1", "2"]).unwrap();
        let expected =
            DMatrix::from_row_slice(3, 3, &[1.0, -1.0, 0.0, -1.0, 3.0, -2.0, 0.0, -2.0, 2.0]);
        assert_eq!(m, expected);

        let (c01, c02, c12) = (1.5, 2.0, 3.5);
        let tri = Network::from_indexed(3, 0, &[(0, 1, c01), (0, 2, c02), (1, 2, c12)]).unwrap();
        let m = canonical_laplacian(&tri);
        let expected = DMatrix::from_row_slice(
            3,
            3,
            &[
                c01 + c02,
                -c01,
                -c02,
                -c01,
                c01 + c12,
                -c12,
                -c02,
                -c12,
                c02 + c12,
            ],
        );
        assert_eq!(m, expected);
        assert!(laplacian_matrix(&tri, &["0", "1", "1"]).is_err());
        assert!(laplacian_matrix(&tri, &["0", "1"]).is_err());
    }
}
