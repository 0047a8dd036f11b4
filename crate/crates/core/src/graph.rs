//! Simple undirected graphs stored as one adjacency bit mask per vertex.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported order; adjacency rows are single `u64` words and graph6
/// uses a one-byte size header.
pub const MAX_ORDER: usize = 62;

/// A simple undirected graph on vertices `0..n`.
///
/// `adj[v]` has bit `u` set iff `{u, v}` is an edge. Values are immutable
/// once built; use [`GraphBuilder`] to assemble one edge at a time.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

/// Derived structural quantities of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralStats {
    pub order: usize,
    pub size: usize,
    pub max_degree: usize,
    pub triangles: usize,
    pub cut_vertices: usize,
    /// Order of a smallest vertex cut, `None` for complete graphs.
    pub min_vertex_cut: Option<usize>,
    pub leaves: usize,
    /// Leaves whose neighbour has degree 2.
    pub leaves_next_to_degree_two: usize,
    /// Degrees in nonincreasing order.
    pub degree_sequence: Vec<usize>,
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterate over the indices of set bits, lowest first.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        Err(Error::OrderOutOfRange(n))
    } else {
        Ok(())
    }
}

/// Incremental graph construction.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    adj: Vec<u64>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Self { n, adj: vec![0; n] })
    }

    /// Add edge `{u, v}`; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<&mut Self> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    order: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(self)
    }

    pub fn build(self) -> Graph {
        Graph {
            n: self.n,
            adj: self.adj,
        }
    }
}

impl Graph {
    /// Graph with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Ok(GraphBuilder::new(n)?.build())
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut b = GraphBuilder::new(n)?;
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    /// Build from raw adjacency masks, validating symmetry, loops and range.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self> {
        let n = adj.len();
        check_order(n)?;
        let full = full_mask(n);
        for (v, &row) in adj.iter().enumerate() {
            if row & !full != 0 {
                return Err(Error::VertexOutOfRange {
                    vertex: 63 - (row & !full).leading_zeros() as usize,
                    order: n,
                });
            }
            if row >> v & 1 == 1 {
                return Err(Error::SelfLoop(v));
            }
            for u in bits(row) {
                if adj[u] >> v & 1 == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "adjacency not symmetric for edge {{{u}, {v}}}"
                    )));
                }
            }
        }
        Ok(Self { n, adj })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn size(&self) -> usize {
        self.adj
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |v| bits(self.adj[v] & full_mask(v)).map(move |u| (u, v)))
    }

    pub fn is_complete(&self) -> bool {
        self.size() == self.n * (self.n - 1) / 2
    }

    /// Whether the vertices in `mask` induce a connected subgraph.
    /// The empty set is not connected.
    pub fn is_connected_set(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        let start = mask & mask.wrapping_neg();
        self.reach(start, mask) == mask
    }

    /// Vertices reachable from `seed` inside `within`.
    fn reach(&self, seed: u64, within: u64) -> u64 {
        let mut seen = seed;
        let mut frontier = seed;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    fn components_within(&self, mut within: u64) -> usize {
        let mut count = 0;
        while within != 0 {
            let seed = within & within.wrapping_neg();
            within &= !self.reach(seed, within);
            count += 1;
        }
        count
    }

    pub fn component_count(&self) -> usize {
        self.components_within(self.vertex_mask())
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_set(self.vertex_mask())
    }

    /// Vertices whose removal increases the number of components.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let full = self.vertex_mask();
        let base = self.component_count();
        (0..self.n)
            .filter(|&v| self.components_within(full & !(1 << v)) > base)
            .collect()
    }

    pub fn is_two_connected(&self) -> bool {
        self.n >= 3 && self.is_connected() && self.cut_vertices().is_empty()
    }

    /// Order of a smallest vertex set whose removal leaves a disconnected
    /// graph (on at least two vertices). `None` for complete graphs.
    ///
    /// Computed as the minimum over non-adjacent pairs of the number of
    /// internally disjoint paths between them.
    pub fn min_vertex_cut(&self) -> Option<usize> {
        if self.is_complete() {
            return None;
        }
        if !self.is_connected() {
            return Some(0);
        }
        let mut best = self.n - 2;
        for v in 0..self.n {
            for u in bits(!self.adj[v] & full_mask(v)) {
                best = best.min(self.local_vertex_connectivity(u, v, best));
                if best == 1 {
                    return Some(1);
                }
            }
        }
        Some(best)
    }

    /// Same quantity as [`Graph::min_vertex_cut`], by trying vertex subsets
    /// in increasing size. Exponential; meant for small orders.
    pub fn min_vertex_cut_brute_force(&self) -> Option<usize> {
        if self.is_complete() {
            return None;
        }
        let full = self.vertex_mask();
        for k in 0..=self.n.saturating_sub(2) {
            let mut found = false;
            for_each_subset_of_size(self.n, k, |removed| {
                if !found {
                    let rest = full & !removed;
                    if rest.count_ones() >= 2 && !self.is_connected_set(rest) {
                        found = true;
                    }
                }
            });
            if found {
                return Some(k);
            }
        }
        None
    }

    /// Max number of internally vertex-disjoint `s`-`t` paths, stopping once
    /// `cap` is reached. `s` and `t` must be non-adjacent.
    fn local_vertex_connectivity(&self, s: usize, t: usize, cap: usize) -> usize {
        // Split every vertex v into v_in = 2v and v_out = 2v + 1.
        let nodes = 2 * self.n;
        let big = self.n as i32 + 1;
        let mut cap_m = vec![vec![0i32; nodes]; nodes];
        for v in 0..self.n {
            cap_m[2 * v][2 * v + 1] = if v == s || v == t { big } else { 1 };
            for u in bits(self.adj[v]) {
                cap_m[2 * v + 1][2 * u] = big;
            }
        }
        let (src, sink) = (2 * s + 1, 2 * t);
        let mut flow = 0;
        let mut parent = vec![usize::MAX; nodes];
        while flow < cap {
            parent.iter_mut().for_each(|p| *p = usize::MAX);
            parent[src] = src;
            let mut queue = VecDeque::from([src]);
            while let Some(x) = queue.pop_front() {
                if x == sink {
                    break;
                }
                for y in 0..nodes {
                    if parent[y] == usize::MAX && cap_m[x][y] > 0 {
                        parent[y] = x;
                        queue.push_back(y);
                    }
                }
            }
            if parent[sink] == usize::MAX {
                break;
            }
            let mut y = sink;
            while y != src {
                let x = parent[y];
                cap_m[x][y] -= 1;
                cap_m[y][x] += 1;
                y = x;
            }
            flow += 1;
        }
        flow
    }

    pub fn triangle_count(&self) -> usize {
        self.edges()
            .map(|(u, v)| (self.adj[u] & self.adj[v]).count_ones() as usize)
            .sum::<usize>()
            / 3
    }

    pub fn structural_stats(&self) -> StructuralStats {
        let degrees: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let leaves: Vec<usize> = (0..self.n).filter(|&v| degrees[v] == 1).collect();
        let leaves_next_to_degree_two = leaves
            .iter()
            .filter(|&&v| degrees[self.adj[v].trailing_zeros() as usize] == 2)
            .count();
        let mut degree_sequence = degrees;
        degree_sequence.sort_unstable_by(|a, b| b.cmp(a));
        StructuralStats {
            order: self.n,
            size: self.size(),
            max_degree: self.max_degree(),
            triangles: self.triangle_count(),
            cut_vertices: self.cut_vertices().len(),
            min_vertex_cut: self.min_vertex_cut(),
            leaves: leaves.len(),
            leaves_next_to_degree_two,
            degree_sequence,
        }
    }

    /// Image of the graph under the vertex map `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.n
            )));
        }
        let mut seen = 0u64;
        for &p in perm {
            if p >= self.n || seen >> p & 1 == 1 {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen |= 1 << p;
        }
        let mut adj = vec![0u64; self.n];
        for (u, v) in self.edges() {
            adj[perm[u]] |= 1 << perm[v];
            adj[perm[v]] |= 1 << perm[u];
        }
        Ok(Self { n: self.n, adj })
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Self> {
        let n = self.n + other.n;
        check_order(n)?;
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|&a| a << self.n));
        Ok(Self { n, adj })
    }

    /// Copy with one extra vertex adjacent to `neighbors`.
    pub fn with_new_vertex(&self, neighbors: u64) -> Result<Self> {
        let n = self.n + 1;
        check_order(n)?;
        let neighbors = neighbors & self.vertex_mask();
        let mut adj = self.adj.clone();
        for u in bits(neighbors) {
            adj[u] |= 1 << self.n;
        }
        adj.push(neighbors);
        Ok(Self { n, adj })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().collect();
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &edges)
            .finish()
    }
}

/// Call `f` with every `k`-subset of `0..n` as a bit mask.
pub(crate) fn for_each_subset_of_size(n: usize, k: usize, mut f: impl FnMut(u64)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    // Gosper's hack.
    let limit = 1u128 << n;
    let mut s: u64 = (1u64 << k) - 1;
    while (s as u128) < limit {
        f(s);
        let c = s & s.wrapping_neg();
        let r = s + c;
        if r == 0 {
            break;
        }
        s = (((r ^ s) >> 2) / c) | r;
    }
}

/// Parse the plain-text edge list format: the order `n`, then pairs `u v`.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut tokens = text.split_whitespace().enumerate();
    let parse = |(i, tok): (usize, &str)| -> Result<usize> {
        tok.parse::<usize>().map_err(|_| Error::EdgeList {
            token: i,
            message: format!("expected a nonnegative integer, found {tok:?}"),
        })
    };
    let n = match tokens.next() {
        Some(t) => parse(t)?,
        None => {
            return Err(Error::EdgeList {
                token: 0,
                message: "missing vertex count".into(),
            })
        }
    };
    let mut b = GraphBuilder::new(n)?;
    while let Some(first) = tokens.next() {
        let idx = first.0;
        let u = parse(first)?;
        let v = match tokens.next() {
            Some(t) => parse(t)?,
            None => {
                return Err(Error::EdgeList {
                    token: idx,
                    message: "dangling vertex without a partner".into(),
                })
            }
        };
        b.add_edge(u, v).map_err(|e| Error::EdgeList {
            token: idx,
            message: e.to_string(),
        })?;
    }
    Ok(b.build())
}

/// Serialize as an edge list accepted by [`parse_edge_list`].
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = g.order().to_string();
    for (u, v) in g.edges() {
        out.push_str(&format!(" {u} {v}"));
    }
    out
}
