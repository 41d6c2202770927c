//! Simple undirected graphs on dense vertex indices, vertex orders and the
//! combinatorial predicates used by the variety and splitting code.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// An edge stored as `(lo, hi)` with `lo < hi`.
pub type Edge = (Vertex, Vertex);

/// Simple undirected graph on the vertices `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, repeated edges (in either
    /// orientation) and endpoints outside `0..order`.
    pub fn new(order: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= order {
                    return Err(Error::VertexOutOfRange { vertex: x, order });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
        }
        let mut adj = vec![Vec::new(); order];
        for &(u, v) in &seen {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            adj,
            edges: seen.into_iter().collect(),
        })
    }

    pub fn empty(order: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); order],
            edges: Vec::new(),
        }
    }

    pub fn path(order: usize) -> Self {
        Graph::new(order, (1..order).map(|i| (i - 1, i))).expect("path is simple")
    }

    /// Cycle `0 - 1 - ... - (k-1) - 0`; needs `k >= 3`.
    pub fn cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::PreconditionViolated(format!("cycle length {k} < 3")));
        }
        Graph::new(k, (0..k).map(|i| (i, (i + 1) % k)))
    }

    pub fn complete(order: usize) -> Self {
        let edges = (0..order).flat_map(|u| (u + 1..order).map(move |v| (u, v)));
        Graph::new(order, edges).expect("complete graph is simple")
    }

    /// Complete bipartite graph with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Graph::new(a + b, edges).expect("complete bipartite graph is simple")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star is simple")
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.order();
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::new(shift + other.order(), edges).expect("union of simple graphs is simple")
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(lo, hi)` pairs in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.order() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for s in 0..self.order() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_forest(&self) -> bool {
        self.size() + self.components().len() == self.order()
    }

    /// Induced subgraph on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.order() {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    order: self.order(),
                });
            }
            if index[v] != usize::MAX {
                return Err(Error::PreconditionViolated(format!(
                    "vertex {v} listed twice"
                )));
            }
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        Graph::new(vertices.len(), edges)
    }

    /// Greedy minimum-degree elimination. Vertices removed earlier are
    /// smaller in the returned order; ties go to the smallest index. The
    /// second component is the degeneracy.
    pub fn degeneracy_order(&self) -> (OrderedGraph, usize) {
        let n = self.order();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut d = 0;
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .expect("a vertex remains");
            d = d.max(deg[v]);
            removed[v] = true;
            order.push(v);
            for &u in &self.adj[v] {
                if !removed[u] {
                    deg[u] -= 1;
                }
            }
        }
        let og =
            OrderedGraph::new(self.clone(), order).expect("elimination order is a permutation");
        (og, d)
    }

    /// Distance layers from `root`. Errors on disconnected graphs.
    pub fn bfs_layers(&self, root: Vertex) -> Result<BfsLayering> {
        if root >= self.order() {
            return Err(Error::VertexOutOfRange {
                vertex: root,
                order: self.order(),
            });
        }
        let mut level = vec![usize::MAX; self.order()];
        level[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut levels: Vec<Vec<Vertex>> = vec![];
        while let Some(x) = queue.pop_front() {
            if levels.len() <= level[x] {
                levels.push(Vec::new());
            }
            levels[level[x]].push(x);
            for &y in &self.adj[x] {
                if level[y] == usize::MAX {
                    level[y] = level[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if level.contains(&usize::MAX) {
            return Err(Error::DisconnectedGraph);
        }
        for l in &mut levels {
            l.sort_unstable();
        }
        Ok(BfsLayering {
            root,
            levels,
            level_of: level,
        })
    }

    /// First-fit numbering in increasing vertex order with numbers in
    /// `1..=bound`; adjacent vertices get different numbers. Always succeeds
    /// when `max_degree() < bound`.
    pub fn proper_vertex_numbering(&self, bound: usize) -> Result<Vec<usize>> {
        let mut num = vec![0usize; self.order()];
        for v in 0..self.order() {
            let taken: BTreeSet<usize> = self.adj[v].iter().map(|&u| num[u]).collect();
            let k = (1..)
                .find(|k| !taken.contains(k))
                .expect("unbounded search");
            if k > bound {
                return Err(Error::BoundTooSmall { bound });
            }
            num[v] = k;
        }
        Ok(num)
    }

    /// Whether some (not necessarily induced) cycle has even length.
    ///
    /// A block without an even cycle is a bridge or an odd cycle: any other
    /// 2-connected graph contains a theta subgraph, and one of the three
    /// cycles of a theta is even.
    pub fn has_even_cycle(&self) -> bool {
        self.blocks().iter().any(|block| {
            let vertices: BTreeSet<Vertex> = block.iter().flat_map(|&(u, v)| [u, v]).collect();
            block.len() > 1 && (block.len() != vertices.len() || block.len() % 2 == 0)
        })
    }

    /// Biconnected components as edge lists (Hopcroft–Tarjan).
    fn blocks(&self) -> Vec<Vec<Edge>> {
        let n = self.order();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut time = 0;
        let mut edge_stack: Vec<Edge> = Vec::new();
        let mut out = Vec::new();
        for s in 0..n {
            if disc[s] != usize::MAX {
                continue;
            }
            disc[s] = time;
            low[s] = time;
            time += 1;
            // (vertex, parent, next neighbor index)
            let mut stack: Vec<(Vertex, usize, usize)> = vec![(s, usize::MAX, 0)];
            while let Some(&mut (x, parent, ref mut next)) = stack.last_mut() {
                if *next < self.adj[x].len() {
                    let y = self.adj[x][*next];
                    *next += 1;
                    if disc[y] == usize::MAX {
                        edge_stack.push((x.min(y), x.max(y)));
                        disc[y] = time;
                        low[y] = time;
                        time += 1;
                        stack.push((y, x, 0));
                    } else if y != parent && disc[y] < disc[x] {
                        edge_stack.push((x.min(y), x.max(y)));
                        low[x] = low[x].min(disc[y]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[x]);
                        if low[x] >= disc[parent] {
                            let e = (parent.min(x), parent.max(x));
                            let mut block = Vec::new();
                            while let Some(f) = edge_stack.pop() {
                                block.push(f);
                                if f == e {
                                    break;
                                }
                            }
                            out.push(block);
                        }
                    }
                }
            }
        }
        out
    }

    /// Parses the edge-list format: one `u v` pair per line, `#` starts a
    /// comment. A line holding a single index declares an isolated vertex.
    /// The vertex count is one more than the largest index mentioned.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut order = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ids: Vec<usize> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| {
                        Error::Parse(format!("line {}: bad vertex {tok:?}", lineno + 1))
                    })
                })
                .collect::<Result<_>>()?;
            match ids.as_slice() {
                [v] => order = order.max(v + 1),
                [u, v] => {
                    order = order.max(u + 1).max(v + 1);
                    edges.push((*u, *v));
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected `u v`, got {line:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Graph::new(order, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for v in 0..self.order() {
            if self.degree(v) == 0 {
                out.push_str(&format!("{v}\n"));
            }
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph({} vertices, edges {:?})",
            self.order(),
            self.edges
        )
    }
}

/// A graph together with a linear order `order[0] < order[1] < ...` on its
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedGraph {
    graph: Graph,
    order: Vec<Vertex>,
    position: Vec<usize>,
}

impl OrderedGraph {
    pub fn new(graph: Graph, order: Vec<Vertex>) -> Result<Self> {
        let n = graph.order();
        if order.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: order.len(),
            });
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    order: n,
                });
            }
            if position[v] != usize::MAX {
                return Err(Error::PreconditionViolated(format!(
                    "vertex {v} repeated in order"
                )));
            }
            position[v] = i;
        }
        Ok(OrderedGraph {
            graph,
            order,
            position,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Vertices from smallest to largest.
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    /// Rank of `v` in the order (0 = smallest).
    pub fn position(&self, v: Vertex) -> usize {
        self.position[v]
    }

    /// Neighbors of `v` that are larger than `v`, in increasing order.
    pub fn older_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| self.position[u] > self.position[v])
            .collect();
        out.sort_by_key(|&u| self.position[u]);
        out
    }

    /// Neighbors of `v` that are smaller than `v`.
    pub fn younger_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| self.position[u] < self.position[v])
            .collect();
        out.sort_by_key(|&u| self.position[u]);
        out
    }

    /// `max_v |N_>(v)|` for this particular order.
    pub fn degeneracy(&self) -> usize {
        (0..self.graph.order())
            .map(|v| self.older_neighbors(v).len())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsLayering {
    pub root: Vertex,
    pub levels: Vec<Vec<Vertex>>,
    level_of: Vec<usize>,
}

impl BfsLayering {
    pub fn level_of(&self, v: Vertex) -> usize {
        self.level_of[v]
    }
}
