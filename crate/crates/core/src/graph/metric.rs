use std::collections::VecDeque;

use super::{Graph, VertexSet};
use crate::error::{Error, Result};

/// Closed ball `B(v, t)` in the graph metric.
pub fn ball(g: &Graph, v: usize, t: usize) -> VertexSet {
    let mut seen = VertexSet::new(g.n());
    let mut frontier = vec![v];
    seen.insert(v);
    for _ in 0..t {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if !seen.contains(w) {
                    seen.insert(w);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// `N(A)`, the outer boundary `N(A) \ A` and the 2-outer boundary
/// `N(N(A)) \ (A ∪ N(A))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    pub neighborhood: VertexSet,
    pub outer: VertexSet,
    pub outer2: VertexSet,
}

fn neighborhood(g: &Graph, a: &VertexSet) -> VertexSet {
    let mut out = VertexSet::new(g.n());
    for u in a.iter() {
        for &w in g.neighbors(u) {
            out.insert(w);
        }
    }
    out
}

pub fn boundary(g: &Graph, a: &VertexSet) -> Boundary {
    let na = neighborhood(g, a);
    let outer = na.difference(a);
    let nna = neighborhood(g, &na);
    let outer2 = nna.difference(&a.union(&na));
    Boundary { neighborhood: na, outer, outer2 }
}

/// Adjacency lists of `G^{≤2}` (vertices at distance 1 or 2).
pub fn square_adjacency(g: &Graph) -> Vec<Vec<usize>> {
    crate::par::map_range(g.n(), |u| {
        let mut out: Vec<usize> = g
            .neighbors(u)
            .iter()
            .flat_map(|&w| std::iter::once(w).chain(g.neighbors(w).iter().copied()))
            .filter(|&w| w != u)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    })
}

/// Component of `v` in the subgraph of `G^{≤2}` induced by `s`.
pub fn component_in_square(g: &Graph, v: usize, s: &VertexSet) -> Result<VertexSet> {
    if !s.contains(v) {
        return Err(Error::Precondition(format!("vertex {v} is not in the inducing set")));
    }
    let mut comp = VertexSet::new(g.n());
    comp.insert(v);
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            for x in std::iter::once(w).chain(g.neighbors(w).iter().copied()) {
                if s.contains(x) && !comp.contains(x) {
                    comp.insert(x);
                    queue.push_back(x);
                }
            }
        }
    }
    Ok(comp)
}

/// Number of connected vertex sets of size `a` containing `v`, in `G` or in
/// `G^{≤2}` when `square` is set. `budget` caps the number of search nodes.
pub fn count_connected_sets(
    g: &Graph,
    v: usize,
    a: usize,
    square: bool,
    budget: u64,
) -> Result<u64> {
    if a == 0 {
        return Err(Error::InvalidParameters("set size must be at least 1".into()));
    }
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let adj: Vec<Vec<usize>> = if square { square_adjacency(g) } else { g.adjacency().to_vec() };
    let mut search = ConnectedSetSearch {
        adj: &adj,
        target: a,
        blocked: vec![false; g.n()],
        count: 0,
        nodes: 0,
        budget,
    };
    search.blocked[v] = true;
    let mut ext = Vec::new();
    for &w in &adj[v] {
        search.blocked[w] = true;
        ext.push(w);
    }
    search.grow(1, ext)?;
    Ok(search.count)
}

/// Each connected set is produced once: a candidate that has been branched
/// on stays excluded from every later sibling branch.
struct ConnectedSetSearch<'a> {
    adj: &'a [Vec<usize>],
    target: usize,
    // In the set, in a pending extension list, or already branched on.
    blocked: Vec<bool>,
    count: u64,
    nodes: u64,
    budget: u64,
}

impl ConnectedSetSearch<'_> {
    fn grow(&mut self, size: usize, ext: Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(format!("{} search nodes", self.budget)));
        }
        if size == self.target {
            self.count += 1;
            return Ok(());
        }
        for i in 0..ext.len() {
            let u = ext[i];
            let mut next: Vec<usize> = ext[i + 1..].to_vec();
            let mut added = Vec::new();
            for &w in &self.adj[u] {
                if !self.blocked[w] {
                    self.blocked[w] = true;
                    added.push(w);
                    next.push(w);
                }
            }
            self.grow(size + 1, next)?;
            for w in added {
                self.blocked[w] = false;
            }
        }
        Ok(())
    }
}
