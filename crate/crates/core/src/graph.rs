//! Immutable undirected simple graph with sorted adjacency, set-restricted
//! degrees, ordered-pair edge counting and girth.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Undirected simple graph on nodes `0..n` in compressed sparse row form.
///
/// Neighbor lists are sorted ascending. The graph never changes after
/// construction; transformations build new graphs.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    m: usize,
    min_degree: usize,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Endpoints may appear in either order;
    /// self-loops, duplicate edges and out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange { node: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {{{}, {}}}",
                    v.min(w[0]),
                    v.max(w[0])
                )));
            }
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Ok(Self::from_csr(offsets, neighbors))
    }

    fn from_csr(offsets: Vec<usize>, neighbors: Vec<usize>) -> Self {
        let n = offsets.len() - 1;
        let degs = (0..n).map(|v| offsets[v + 1] - offsets[v]);
        let min_degree = degs.clone().min().unwrap_or(0);
        let max_degree = degs.max().unwrap_or(0);
        let m = neighbors.len() / 2;
        Graph {
            offsets,
            neighbors,
            m,
            min_degree,
            max_degree,
        }
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_csr(vec![0; n + 1], Vec::new())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// δ(G); zero for the empty graph.
    #[inline]
    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    /// Δ(G).
    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `Some(d)` when every node has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        (self.min_degree == self.max_degree).then_some(self.min_degree)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn first_isolated(&self) -> Option<usize> {
        (0..self.n()).find(|&v| self.degree(v) == 0)
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::NodeOutOfRange { node: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// d_S(v): the number of neighbors of `v` inside `s`.
    pub fn degree_in(&self, v: usize, s: &NodeSet) -> Result<usize> {
        self.check_node(v)?;
        Ok(self.degree_in_unchecked(v, s))
    }

    #[inline]
    pub(crate) fn degree_in_unchecked(&self, v: usize, s: &NodeSet) -> usize {
        self.neighbors(v).iter().filter(|&&u| s.contains(u)).count()
    }

    /// e(A, B): ordered pairs `(v, u)` with `v ∈ A`, `u ∈ B` and `{v, u} ∈ E`.
    /// Edges inside `A ∩ B` are counted in both orientations.
    pub fn edge_boundary_count(&self, a: &NodeSet, b: &NodeSet) -> usize {
        a.iter()
            .filter(|&v| v < self.n())
            .map(|v| self.degree_in_unchecked(v, b))
            .sum()
    }

    /// BFS distances from `source`; `usize::MAX` marks unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<usize>> {
        self.check_node(source)?;
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Nodes within distance `radius` of `center`.
    pub fn ball(&self, center: usize, radius: usize) -> Result<NodeSet> {
        let dist = self.bfs_distances(center)?;
        NodeSet::from_nodes(
            self.n(),
            dist.iter().enumerate().filter(|(_, &d)| d <= radius).map(|(v, _)| v),
        )
    }

    pub fn connected_components(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components() <= 1
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.n();
        let mut side = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Length of the shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        self.shortest_cycle().map(|c| c.len())
    }

    /// Node set of one shortest cycle, or `None` for a forest.
    ///
    /// BFS from every root; a non-tree edge `{u, w}` closes a walk of length
    /// `dist[u] + dist[w] + 1`. At a root lying on a shortest cycle the two
    /// tree paths are disjoint, so the minimum walk is a simple cycle.
    pub fn shortest_cycle(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut best: Option<(usize, usize, usize, usize)> = None; // (len, root, u, w)
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                if let Some((len, ..)) = best {
                    // Any cycle closed from here has length ≥ 2·dist[u] + 1.
                    if 2 * dist[u] + 1 >= len {
                        break 'bfs;
                    }
                }
                for &w in self.neighbors(u) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        if best.is_none_or(|(b, ..)| len < b) {
                            best = Some((len, root, u, w));
                        }
                    }
                }
            }
        }
        let (len, root, u, w) = best?;
        // Rebuild the two tree paths from the recorded root.
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[root] = 0;
        queue.clear();
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            for &y in self.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let path = |mut x: usize| {
            let mut p = vec![x];
            while x != root {
                x = parent[x];
                p.push(x);
            }
            p
        };
        let mut nodes = path(u);
        nodes.extend(path(w));
        nodes.sort_unstable();
        nodes.dedup();
        debug_assert_eq!(nodes.len(), len);
        Some(nodes)
    }

    /// Adjacency rows as bitmasks; requires n ≤ 64.
    pub fn adjacency_masks(&self) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(Error::TooLarge { n: self.n(), cap: 64 });
        }
        Ok((0..self.n())
            .map(|v| self.neighbors(v).iter().fold(0u64, |acc, &u| acc | 1 << u))
            .collect())
    }

    /// Subgraph induced by `s`, relabelled to `0..|s|` in ascending id order.
    pub fn induced_subgraph(&self, s: &NodeSet) -> Graph {
        let ids: Vec<usize> = s.iter().collect();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in ids.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| s.contains(u) && s.contains(v))
            .map(|(u, v)| (index[u], index[v]))
            .collect();
        Graph::from_edges(ids.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Parses the edge-list text format: a `n m` header, then `m` lines `u v`
    /// with `u < v`. Blank lines and `#` comments are skipped.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut fields = content.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                let tok = tok.ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: "expected two integers".into(),
                })?;
                tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("not a non-negative integer: {tok:?}"),
                })
            };
            let a = parse(fields.next())?;
            let b = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "trailing tokens".into(),
                });
            }
            match header {
                None => header = Some((a, b)),
                Some((n, _)) => {
                    if a >= b || b >= n {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("edge ({a}, {b}) must satisfy 0 <= u < v < {n}"),
                        });
                    }
                    if !seen.insert((a, b)) {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("duplicate edge ({a}, {b})"),
                        });
                    }
                    edges.push((a, b));
                }
            }
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing 'n m' header".into(),
        })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, edges)
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        Self::read_edge_list(text.as_bytes())
    }

    /// Canonical edge-list text: header then edges sorted lexicographically.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(8 * (self.m + 1));
        let _ = writeln!(out, "{} {}", self.n(), self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_edge_list().as_bytes())?;
        Ok(())
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m)
            .field("min_degree", &self.min_degree)
            .field("max_degree", &self.max_degree)
            .finish()
    }
}
