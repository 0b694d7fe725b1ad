//! Weighted graphs, bisections and cut evaluation.
//!
//! Vertices are numbered `1..=n`. Every edge carries a `k`-tuple of positive
//! [`Weight`]s. The weight of a cut is the minimum over the `k` coordinates
//! of the per-coordinate sums across the cut edges.
//!
//! # File format
//!
//! ```text
//! n m k
//! u v w_1 ... w_k      (m lines, u < v, sorted by (u, v))
//! ```
//!
//! Weights are printed with exactly three fraction digits. [`Instance::to_text`]
//! emits this form and [`Instance::parse`] reads it back byte-for-byte.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::weight::{Weight, WeightParseError};

/// Vertex identifier, 1-based.
pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("vertex count {0} must be positive and even")]
    OddVertexCount(usize),
    #[error("weight dimension must be at least 1")]
    ZeroDimension,
    #[error("edge ({u}, {v}) must satisfy u < v")]
    EdgeOrder { u: Vertex, v: Vertex },
    #[error("edge ({u}, {v}) references a vertex outside 1..={n}")]
    VertexOutOfRange { u: Vertex, v: Vertex, n: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: Vertex, v: Vertex },
    #[error("edge ({u}, {v}) has a non-positive weight")]
    NonPositiveWeight { u: Vertex, v: Vertex },
    #[error("edge ({u}, {v}) carries {found} weights, expected {expected}")]
    WeightCount {
        u: Vertex,
        v: Vertex,
        expected: usize,
        found: usize,
    },
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("prefix dimension {requested} outside 1..={dim}")]
    PrefixOutOfRange { requested: usize, dim: usize },
    #[error("malformed number `{0}`")]
    MalformedNumber(String),
    #[error(transparent)]
    Weight(#[from] WeightParseError),
    #[error("{0}")]
    Malformed(String),
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<InstanceError>,
    },
}

impl InstanceError {
    fn at(self, line: usize) -> Self {
        InstanceError::AtLine {
            line,
            source: Box::new(self),
        }
    }

    /// The underlying error with any line annotation removed.
    pub fn kind(&self) -> &InstanceError {
        match self {
            InstanceError::AtLine { source, .. } => source.kind(),
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisectionError {
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("vertex {0} listed twice")]
    DuplicateVertex(Vertex),
    #[error("bisection of {n} vertices needs {expected} members, got {found}")]
    Unbalanced {
        n: usize,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
}

/// An undirected graph with `k`-dimensional positive edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    vertex_count: usize,
    dim: usize,
    edges: Vec<Edge>,
    // row-major, `dim` entries per edge
    weights: Vec<Weight>,
}

impl Instance {
    /// Validates and builds an instance. Edges may be given in any order;
    /// they are stored sorted by `(u, v)`.
    pub fn new(
        vertex_count: usize,
        dim: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex, Vec<Weight>)>,
    ) -> Result<Instance, InstanceError> {
        if vertex_count == 0 || !vertex_count.is_multiple_of(2) {
            return Err(InstanceError::OddVertexCount(vertex_count));
        }
        if dim == 0 {
            return Err(InstanceError::ZeroDimension);
        }
        let mut rows = Vec::new();
        for (u, v, w) in edges {
            check_edge(vertex_count, dim, u, v, &w)?;
            rows.push((Edge { u, v }, w));
        }
        rows.sort_by_key(|(e, _)| *e);
        if let Some(pair) = rows.windows(2).find(|p| p[0].0 == p[1].0) {
            let e = pair[0].0;
            return Err(InstanceError::DuplicateEdge { u: e.u, v: e.v });
        }
        let mut edges = Vec::with_capacity(rows.len());
        let mut weights = Vec::with_capacity(rows.len() * dim);
        for (e, w) in rows {
            edges.push(e);
            weights.extend(w);
        }
        Ok(Instance {
            vertex_count,
            dim,
            edges,
            weights,
        })
    }

    /// Parses the native text format. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Instance, InstanceError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines
            .next()
            .ok_or_else(|| InstanceError::Malformed("empty instance file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(InstanceError::Malformed(format!(
                "header must be `n m k`, found `{header}`"
            ))
            .at(hline));
        }
        let n = parse_count(fields[0]).map_err(|e| e.at(hline))?;
        let m = parse_count(fields[1]).map_err(|e| e.at(hline))?;
        let k = parse_count(fields[2]).map_err(|e| e.at(hline))?;
        if n == 0 || n % 2 != 0 {
            return Err(InstanceError::OddVertexCount(n).at(hline));
        }
        if k == 0 {
            return Err(InstanceError::ZeroDimension.at(hline));
        }

        let mut edges = Vec::with_capacity(m);
        let mut seen = HashSet::with_capacity(m);
        for (lineno, line) in lines {
            let mut tokens = line.split_whitespace();
            let (u, v) = match (tokens.next(), tokens.next()) {
                (Some(u), Some(v)) => (
                    parse_vertex(u).map_err(|e| e.at(lineno))?,
                    parse_vertex(v).map_err(|e| e.at(lineno))?,
                ),
                _ => {
                    return Err(InstanceError::Malformed(format!(
                        "edge line `{line}` needs `u v w_1 .. w_k`"
                    ))
                    .at(lineno))
                }
            };
            let weights = tokens
                .map(Weight::from_str)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| match e {
                    WeightParseError::Negative(_) => InstanceError::NonPositiveWeight { u, v },
                    other => InstanceError::from(other),
                })
                .map_err(|e| e.at(lineno))?;
            check_edge(n, k, u, v, &weights).map_err(|e| e.at(lineno))?;
            if !seen.insert((u, v)) {
                return Err(InstanceError::DuplicateEdge { u, v }.at(lineno));
            }
            edges.push((u, v, weights));
        }
        if edges.len() != m {
            return Err(InstanceError::EdgeCountMismatch {
                declared: m,
                found: edges.len(),
            });
        }
        Instance::new(n, k, edges)
    }

    /// Canonical text form; see the module docs.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge_weights(&self, edge: usize) -> &[Weight] {
        &self.weights[edge * self.dim..(edge + 1) * self.dim]
    }

    /// Per-coordinate sums over all edges.
    pub fn total_sums(&self) -> Vec<Weight> {
        let mut sums = vec![Weight::ZERO; self.dim];
        for w in self.weights.chunks_exact(self.dim) {
            for (s, x) in sums.iter_mut().zip(w) {
                *s += *x;
            }
        }
        sums
    }

    /// The same graph keeping only the first `k_prime` weight coordinates.
    pub fn prefix(&self, k_prime: usize) -> Result<Instance, InstanceError> {
        if k_prime == 0 || k_prime > self.dim {
            return Err(InstanceError::PrefixOutOfRange {
                requested: k_prime,
                dim: self.dim,
            });
        }
        let weights = self
            .weights
            .chunks_exact(self.dim)
            .flat_map(|w| w[..k_prime].iter().copied())
            .collect();
        Ok(Instance {
            vertex_count: self.vertex_count,
            dim: k_prime,
            edges: self.edges.clone(),
            weights,
        })
    }

    /// Indices of the edges with exactly one endpoint in the subset.
    ///
    /// `in_s[i]` tells whether vertex `i + 1` belongs to the subset; the
    /// subset need not be balanced.
    pub fn cut_edges_of(&self, in_s: &[bool]) -> Vec<usize> {
        assert_eq!(in_s.len(), self.vertex_count, "membership vector length");
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| in_s[e.u as usize - 1] != in_s[e.v as usize - 1])
            .map(|(i, _)| i)
            .collect()
    }

    /// Cut report for an arbitrary vertex subset.
    pub fn cut_report_of(&self, in_s: &[bool]) -> CutReport {
        let cut_edges = self.cut_edges_of(in_s);
        let mut coordinate_sums = vec![Weight::ZERO; self.dim];
        for &e in &cut_edges {
            for (s, w) in coordinate_sums.iter_mut().zip(self.edge_weights(e)) {
                *s += *w;
            }
        }
        let weight = min_coordinate(&coordinate_sums);
        CutReport {
            cut_edges,
            coordinate_sums,
            weight,
        }
    }

    pub fn cut_edges(&self, s: &Bisection) -> Vec<usize> {
        self.cut_edges_of(&self.membership_checked(s))
    }

    pub fn cut_weight(&self, s: &Bisection) -> CutReport {
        self.cut_report_of(&self.membership_checked(s))
    }

    fn membership_checked(&self, s: &Bisection) -> Vec<bool> {
        assert_eq!(
            s.vertex_count(),
            self.vertex_count,
            "bisection built for a different vertex count"
        );
        s.membership()
    }

    /// Incidence lists for every vertex.
    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self)
    }
}

fn check_edge(
    n: usize,
    k: usize,
    u: Vertex,
    v: Vertex,
    weights: &[Weight],
) -> Result<(), InstanceError> {
    if u >= v {
        return Err(InstanceError::EdgeOrder { u, v });
    }
    if u == 0 || v as usize > n {
        return Err(InstanceError::VertexOutOfRange { u, v, n });
    }
    if weights.len() != k {
        return Err(InstanceError::WeightCount {
            u,
            v,
            expected: k,
            found: weights.len(),
        });
    }
    if weights.iter().any(|w| w.is_zero()) {
        return Err(InstanceError::NonPositiveWeight { u, v });
    }
    Ok(())
}

fn parse_count(token: &str) -> Result<usize, InstanceError> {
    token
        .parse()
        .map_err(|_| InstanceError::MalformedNumber(token.to_owned()))
}

fn parse_vertex(token: &str) -> Result<Vertex, InstanceError> {
    token
        .parse()
        .map_err(|_| InstanceError::MalformedNumber(token.to_owned()))
}

pub(crate) fn min_coordinate(sums: &[Weight]) -> Weight {
    sums.iter().copied().min().unwrap_or(Weight::ZERO)
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.vertex_count, self.edges.len(), self.dim)?;
        for (i, e) in self.edges.iter().enumerate() {
            write!(f, "{} {}", e.u, e.v)?;
            for w in self.edge_weights(i) {
                write!(f, " {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Instance {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Instance::parse(s)
    }
}

/// A balanced vertex subset `S` with `|S| = n / 2`.
///
/// Stored in canonical form: since `S` and its complement induce the same
/// cut, the representative containing vertex 1 is kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Bisection {
    vertex_count: usize,
    members: Vec<Vertex>,
}

impl Bisection {
    /// Builds a bisection from either side of the partition.
    pub fn new(
        vertex_count: usize,
        members: impl IntoIterator<Item = Vertex>,
    ) -> Result<Bisection, BisectionError> {
        let mut in_s = vec![false; vertex_count];
        let mut found = 0;
        for v in members {
            if v == 0 || v as usize > vertex_count {
                return Err(BisectionError::VertexOutOfRange {
                    vertex: v,
                    n: vertex_count,
                });
            }
            if std::mem::replace(&mut in_s[v as usize - 1], true) {
                return Err(BisectionError::DuplicateVertex(v));
            }
            found += 1;
        }
        Bisection::from_membership(&in_s).map_err(|e| match e {
            BisectionError::Unbalanced { n, expected, .. } => {
                BisectionError::Unbalanced { n, expected, found }
            }
            other => other,
        })
    }

    /// Builds a bisection from a membership vector (`in_s[i]` for vertex `i + 1`).
    pub fn from_membership(in_s: &[bool]) -> Result<Bisection, BisectionError> {
        let n = in_s.len();
        let found = in_s.iter().filter(|&&b| b).count();
        if !n.is_multiple_of(2) || found * 2 != n {
            return Err(BisectionError::Unbalanced {
                n,
                expected: n / 2,
                found,
            });
        }
        let keep = in_s.first().copied().unwrap_or(true);
        let members = (1..=n as Vertex)
            .filter(|&v| in_s[v as usize - 1] == keep)
            .collect();
        Ok(Bisection {
            vertex_count: n,
            members,
        })
    }

    /// `members` must be sorted, canonical and of size `n / 2`.
    pub(crate) fn from_canonical(vertex_count: usize, members: Vec<Vertex>) -> Bisection {
        debug_assert_eq!(members.len() * 2, vertex_count);
        debug_assert!(members.first() == Some(&1) || vertex_count == 0);
        debug_assert!(members.windows(2).all(|p| p[0] < p[1]));
        Bisection {
            vertex_count,
            members,
        }
    }

    /// Sorted members of the side containing vertex 1.
    #[inline]
    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn membership(&self) -> Vec<bool> {
        let mut in_s = vec![false; self.vertex_count];
        for &v in &self.members {
            in_s[v as usize - 1] = true;
        }
        in_s
    }

    /// Sorted members of the other side.
    pub fn complement(&self) -> Vec<Vertex> {
        (1..=self.vertex_count as Vertex)
            .filter(|v| !self.contains(*v))
            .collect()
    }
}

impl fmt::Display for Bisection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.members {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// The edges crossing a bisection and their summed weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub cut_edges: Vec<usize>,
    pub coordinate_sums: Vec<Weight>,
    /// Minimum of `coordinate_sums`.
    pub weight: Weight,
}

/// Compressed incidence lists: for each vertex, `(neighbour, edge index)` pairs.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    entries: Vec<(u32, u32)>,
}

impl Adjacency {
    fn new(instance: &Instance) -> Adjacency {
        let n = instance.vertex_count();
        let mut degree = vec![0usize; n + 1];
        for e in instance.edges() {
            degree[e.u as usize - 1] += 1;
            degree[e.v as usize - 1] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for d in &degree[..n] {
            offsets.push(acc);
            acc += d;
        }
        offsets.push(acc);
        let mut fill = offsets.clone();
        let mut entries = vec![(0, 0); acc];
        for (i, e) in instance.edges().iter().enumerate() {
            let (a, b) = (e.u as usize - 1, e.v as usize - 1);
            entries[fill[a]] = (b as u32, i as u32);
            fill[a] += 1;
            entries[fill[b]] = (a as u32, i as u32);
            fill[b] += 1;
        }
        Adjacency { offsets, entries }
    }

    /// Incident `(neighbour index, edge index)` pairs of the 0-based vertex.
    #[inline]
    pub fn incident(&self, vertex: usize) -> &[(u32, u32)] {
        &self.entries[self.offsets[vertex]..self.offsets[vertex + 1]]
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    /// K4 with two-dimensional weights whose optimum is S = {1, 4} at 8.000.
    pub fn k4() -> Instance {
        Instance::parse(
            "4 6 2\n\
             1 2 3.000 1.000\n\
             1 3 1.000 3.000\n\
             1 4 2.000 2.000\n\
             2 3 2.000 2.000\n\
             2 4 1.000 3.000\n\
             3 4 3.000 1.000\n",
        )
        .unwrap()
    }
}
