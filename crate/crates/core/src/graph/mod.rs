//! Simple undirected graphs with optional bipartition and tree annotations.

mod generate;
mod io;
mod metric;
mod vertex_set;

pub use generate::{
    complete_bipartite, complete_graph, cycle, gen_random_bipartite_regular, gen_random_regular,
    gen_tree, hypercube, path, petersen, RandomRegularOptions,
};
pub use io::{parse_graph, read_graph, write_graph, format_graph};
pub use metric::{
    ball, boundary, component_in_square, count_connected_sets, square_adjacency, Boundary,
};
pub use vertex_set::VertexSet;

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Two-colouring of a bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<u8>,
    classes: [VertexSet; 2],
}

impl Bipartition {
    fn from_sides(side: Vec<u8>) -> Self {
        let n = side.len();
        let mut classes = [VertexSet::new(n), VertexSet::new(n)];
        for (v, &s) in side.iter().enumerate() {
            classes[s as usize].insert(v);
        }
        Bipartition { side, classes }
    }

    /// Colour class (0 or 1) of `v`.
    pub fn side(&self, v: usize) -> usize {
        self.side[v] as usize
    }

    pub fn class(&self, i: usize) -> &VertexSet {
        &self.classes[i]
    }

    /// `Some(n0)` when `V0 = {0..n0-1}`.
    pub fn prefix_size(&self) -> Option<usize> {
        let n0 = self.classes[0].len();
        (0..n0).all(|v| self.side[v] == 0).then_some(n0)
    }
}

/// Shape of a complete `(d-1)`-ary tree, possibly with its leaves glued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeShape {
    pub arity: usize,
    pub height: usize,
    pub glued: bool,
}

impl TreeShape {
    /// Number of leaves of the un-glued tree, `d(d-1)^(h-1)`.
    pub fn leaf_count(&self) -> usize {
        self.arity * (self.arity - 1).pow(self.height as u32 - 1)
    }

    /// Number of children of a vertex at `depth` (`depth < height`).
    pub fn children_at(&self, depth: usize) -> usize {
        if depth == 0 {
            self.arity
        } else {
            self.arity - 1
        }
    }

    /// Number of vertices at `depth` in the un-glued tree.
    pub fn width(&self, depth: usize) -> usize {
        if depth == 0 {
            1
        } else {
            self.arity * (self.arity - 1).pow(depth as u32 - 1)
        }
    }

    /// First vertex id at `depth` under breadth-first numbering.
    pub fn first_at(&self, depth: usize) -> usize {
        (0..depth).map(|j| self.width(j)).sum()
    }

    /// Depth of vertex `v` under breadth-first numbering (glue vertex has
    /// depth `height`).
    pub fn depth_of(&self, v: usize) -> usize {
        let mut start = 0;
        for depth in 0..=self.height {
            let w = self.width(depth);
            if v < start + w || (self.glued && depth == self.height) {
                return depth;
            }
            start += w;
        }
        self.height
    }
}

/// Options for [`Graph::build`].
#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Compute a bipartition by 2-colouring; fails on odd cycles.
    pub bipartite: bool,
    /// Declare `V0 = {0..n0-1}` explicitly (implies `bipartite`).
    pub class0_size: Option<usize>,
    pub root: Option<usize>,
    pub leaves: Option<Vec<usize>>,
    pub glue: Option<usize>,
    pub tree: Option<TreeShape>,
}

/// Immutable simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    n_edges: usize,
    degree: Option<usize>,
    bipartition: Option<Bipartition>,
    root: Option<usize>,
    leaves: Option<VertexSet>,
    glue: Option<usize>,
    tree: Option<TreeShape>,
}

impl Graph {
    /// Validates an edge list and builds the graph.
    pub fn build(n: usize, edges: &[(usize, usize)], options: BuildOptions) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = if u < w[0] { (u, w[0]) } else { (w[0], u) };
                return Err(Error::DuplicateEdge(a, b));
            }
        }
        let degree = match adj.first() {
            Some(first) if adj.iter().all(|l| l.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        let bipartition = if let Some(n0) = options.class0_size {
            if n0 > n {
                return Err(Error::InvalidParameters(format!("class size {n0} > n = {n}")));
            }
            let side: Vec<u8> = (0..n).map(|v| u8::from(v >= n0)).collect();
            for &(u, v) in edges {
                if side[u] == side[v] {
                    return Err(Error::NotBipartite(u));
                }
            }
            Some(Bipartition::from_sides(side))
        } else if options.bipartite {
            Some(Bipartition::from_sides(two_colour(&adj)?))
        } else {
            None
        };
        for v in [options.root, options.glue].into_iter().flatten() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        let leaves = match options.leaves {
            Some(list) => {
                if let Some(&v) = list.iter().find(|&&v| v >= n) {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                Some(VertexSet::from_iter(n, list))
            }
            None => None,
        };
        Ok(Graph {
            n_edges: edges.len(),
            adj,
            degree,
            bipartition,
            root: options.root,
            leaves,
            glue: options.glue,
            tree: options.tree,
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.n_edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    /// Common degree if the graph is regular.
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn degree_of(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn bipartition(&self) -> Option<&Bipartition> {
        self.bipartition.as_ref()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn leaves(&self) -> Option<&VertexSet> {
        self.leaves.as_ref()
    }

    pub fn glue_vertex(&self) -> Option<usize> {
        self.glue
    }

    pub fn tree_shape(&self) -> Option<TreeShape> {
        self.tree
    }

    /// Returns a copy carrying a 2-colouring.
    pub fn with_bipartition(&self) -> Result<Graph> {
        let mut g = self.clone();
        if g.bipartition.is_none() {
            g.bipartition = Some(Bipartition::from_sides(two_colour(&g.adj)?));
        }
        Ok(g)
    }

    /// BFS distances from `v`; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, v: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        dist[v] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices in BFS order from `v` (only the component of `v`).
    pub fn bfs_order(&self, v: usize) -> Vec<usize> {
        let dist = self.distances_from(v);
        let mut order: Vec<usize> = (0..self.n()).filter(|&u| dist[u] != usize::MAX).collect();
        order.sort_by_key(|&u| (dist[u], u));
        order
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }

    /// Diameter, or `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let ecc = crate::par::map_range(self.n(), |v| {
            self.distances_from(v).into_iter().max().unwrap_or(0)
        });
        let d = ecc.into_iter().max().unwrap_or(0);
        (d != usize::MAX).then_some(d)
    }
}

fn two_colour(adj: &[Vec<usize>]) -> Result<Vec<u8>> {
    let n = adj.len();
    let mut side = vec![u8::MAX; n];
    for s in 0..n {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    queue.push_back(w);
                } else if side[w] == side[u] {
                    return Err(Error::NotBipartite(w));
                }
            }
        }
    }
    Ok(side)
}
