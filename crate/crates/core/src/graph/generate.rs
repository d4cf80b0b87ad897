use std::collections::{HashSet, VecDeque};

use rand::Rng as _;

use super::{BuildOptions, Graph, TreeShape};
use crate::error::{Error, Result};
use crate::rng;

/// Options for the random regular generators.
#[derive(Debug, Clone, Copy)]
pub struct RandomRegularOptions {
    /// Reject disconnected samples.
    pub connected: bool,
    /// Total number of pairing attempts before giving up.
    pub max_attempts: usize,
}

impl Default for RandomRegularOptions {
    fn default() -> Self {
        RandomRegularOptions { connected: true, max_attempts: 1000 }
    }
}

/// Pairs random free points one edge at a time, refusing loops and repeated
/// edges; a dead end (no admissible pair left) restarts the attempt.
struct Pairing {
    left: Vec<usize>,
    right: Option<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    present: HashSet<(usize, usize)>,
}

impl Pairing {
    fn admissible(&self, u: usize, v: usize) -> bool {
        u != v && !self.present.contains(&(u.min(v), u.max(v)))
    }

    fn add(&mut self, u: usize, v: usize) {
        let e = (u.min(v), u.max(v));
        self.present.insert(e);
        self.edges.push(e);
    }

    /// Returns `false` on a dead end.
    fn step(&mut self, rng: &mut rng::Rng) -> bool {
        let tries = 64 + 4 * self.left.len();
        for _ in 0..tries {
            match &self.right {
                None => {
                    let len = self.left.len();
                    let i = rng.random_range(0..len);
                    let j = rng.random_range(0..len);
                    let (u, v) = (self.left[i], self.left[j]);
                    if i != j && self.admissible(u, v) {
                        let (hi, lo) = (i.max(j), i.min(j));
                        self.left.swap_remove(hi);
                        self.left.swap_remove(lo);
                        self.add(u, v);
                        return true;
                    }
                }
                Some(right) => {
                    let i = rng.random_range(0..self.left.len());
                    let j = rng.random_range(0..right.len());
                    let (u, v) = (self.left[i], right[j]);
                    if self.admissible(u, v) {
                        self.left.swap_remove(i);
                        self.right.as_mut().unwrap().swap_remove(j);
                        self.add(u, v);
                        return true;
                    }
                }
            }
        }
        // Rejection kept failing: choose uniformly among admissible pairs.
        let mut candidates = Vec::new();
        match &self.right {
            None => {
                for i in 0..self.left.len() {
                    for j in i + 1..self.left.len() {
                        if self.admissible(self.left[i], self.left[j]) {
                            candidates.push((i, j));
                        }
                    }
                }
            }
            Some(right) => {
                for i in 0..self.left.len() {
                    for j in 0..right.len() {
                        if self.admissible(self.left[i], right[j]) {
                            candidates.push((i, j));
                        }
                    }
                }
            }
        }
        if candidates.is_empty() {
            return false;
        }
        let (i, j) = candidates[rng.random_range(0..candidates.len())];
        match self.right.as_mut() {
            None => {
                let (u, v) = (self.left[i], self.left[j]);
                self.left.swap_remove(j);
                self.left.swap_remove(i);
                self.add(u, v);
            }
            Some(right) => {
                let (u, v) = (self.left[i], right[j]);
                self.left.swap_remove(i);
                right.swap_remove(j);
                self.add(u, v);
            }
        }
        true
    }

    fn run(mut self, rng: &mut rng::Rng) -> Option<Vec<(usize, usize)>> {
        while !self.left.is_empty() {
            if !self.step(rng) {
                return None;
            }
        }
        self.edges.sort_unstable();
        Some(self.edges)
    }
}

fn points(vertices: std::ops::Range<usize>, d: usize) -> Vec<usize> {
    vertices.flat_map(|v| std::iter::repeat_n(v, d)).collect()
}

/// Random simple `d`-regular graph on `n` vertices.
pub fn gen_random_regular(
    n: usize,
    d: usize,
    seed: u64,
    options: RandomRegularOptions,
) -> Result<Graph> {
    if !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("n*d = {} is odd", n * d)));
    }
    if d >= n {
        return Err(Error::InvalidParameters(format!("degree {d} >= n = {n}")));
    }
    let mut rng = rng::seeded(seed);
    for _ in 0..options.max_attempts {
        let pairing = Pairing {
            left: points(0..n, d),
            right: None,
            edges: Vec::with_capacity(n * d / 2),
            present: HashSet::with_capacity(n * d / 2),
        };
        let Some(edges) = pairing.run(&mut rng) else { continue };
        let g = Graph::build(n, &edges, BuildOptions::default())?;
        if !options.connected || g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::RetryBudgetExhausted(options.max_attempts))
}

/// Random simple `d`-regular bipartite graph with classes `V0 = {0..n-1}`
/// and `V1 = {n..2n-1}`.
pub fn gen_random_bipartite_regular(
    n: usize,
    d: usize,
    seed: u64,
    options: RandomRegularOptions,
) -> Result<Graph> {
    if d > n {
        return Err(Error::InvalidParameters(format!("degree {d} > class size {n}")));
    }
    let mut rng = rng::seeded(seed);
    for _ in 0..options.max_attempts {
        let pairing = Pairing {
            left: points(0..n, d),
            right: Some(points(n..2 * n, d)),
            edges: Vec::with_capacity(n * d),
            present: HashSet::with_capacity(n * d),
        };
        let Some(edges) = pairing.run(&mut rng) else { continue };
        let opts = BuildOptions { class0_size: Some(n), ..Default::default() };
        let g = Graph::build(2 * n, &edges, opts)?;
        if !options.connected || g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::RetryBudgetExhausted(options.max_attempts))
}

/// Complete `(d-1)`-ary tree of height `h` whose root has degree `d`,
/// numbered breadth-first from the root.
///
/// With `glued`, all leaves are identified into one extra vertex (the last
/// id). Parallel edges created by the identification are kept once, so the
/// glue vertex is adjacent to each parent of leaves exactly once;
/// [`TreeShape::leaf_count`] still reports the number of identified leaves.
pub fn gen_tree(d: usize, h: usize, glued: bool) -> Result<Graph> {
    if d < 3 || h < 1 {
        return Err(Error::InvalidParameters(format!("tree needs d >= 3 and h >= 1, got d={d}, h={h}")));
    }
    let shape = TreeShape { arity: d, height: h, glued };
    let mut edges = Vec::new();
    let mut depth = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    let mut next = 1;
    let internal = shape.first_at(h);
    let glue = glued.then_some(internal);
    while let Some(u) = queue.pop_front() {
        if depth[u] == h {
            continue;
        }
        let kids = shape.children_at(depth[u]);
        if glued && depth[u] + 1 == h {
            edges.push((u, internal));
            continue;
        }
        for _ in 0..kids {
            edges.push((u, next));
            depth.push(depth[u] + 1);
            queue.push_back(next);
            next += 1;
        }
    }
    let n = if glued { internal + 1 } else { next };
    let leaves: Vec<usize> = match glue {
        Some(g) => vec![g],
        None => (internal..n).collect(),
    };
    let opts = BuildOptions {
        bipartite: true,
        root: Some(0),
        leaves: Some(leaves),
        glue,
        tree: Some(shape),
        ..Default::default()
    };
    Graph::build(n, &edges, opts)
}

pub fn complete_graph(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::build(n, &edges, BuildOptions::default()).expect("complete graph")
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|u| (u.min((u + 1) % n), u.max((u + 1) % n))).collect();
    Graph::build(n, &edges, BuildOptions { bipartite: n.is_multiple_of(2), ..Default::default() })
        .expect("cycle")
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|u| (u - 1, u)).collect();
    Graph::build(n, &edges, BuildOptions { bipartite: true, ..Default::default() }).expect("path")
}

/// `K_{m,m}` with `V0 = {0..m-1}`.
pub fn complete_bipartite(m: usize) -> Graph {
    let edges: Vec<_> = (0..m).flat_map(|u| (m..2 * m).map(move |v| (u, v))).collect();
    Graph::build(2 * m, &edges, BuildOptions { class0_size: Some(m), ..Default::default() })
        .expect("complete bipartite")
}

/// The `dim`-dimensional hypercube `Q_dim`.
pub fn hypercube(dim: usize) -> Graph {
    let n = 1usize << dim;
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (0..dim).map(move |b| (u, u ^ (1 << b))).filter(|&(u, v)| u < v))
        .collect();
    Graph::build(n, &edges, BuildOptions { bipartite: true, ..Default::default() })
        .expect("hypercube")
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    let edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    Graph::build(10, &edges, BuildOptions::default()).expect("petersen")
}
