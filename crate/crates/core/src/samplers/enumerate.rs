use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::height::{HeightFunction, Mode};
use crate::par;

/// Number of DFS prefixes to aim for before handing branches to workers.
const SPLIT_TARGET: usize = 256;

/// Every member of a family, sorted lexicographically by value vector.
#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub functions: Vec<HeightFunction>,
    pub count: usize,
}

struct Plan {
    order: Vec<usize>,
    /// `radius[i]`: bound `slope·dist(v0, order[i])` on `|f|`.
    radius: Vec<i32>,
    /// Neighbours of `order[i]` appearing earlier in `order`.
    earlier: Vec<Vec<usize>>,
    mode: Mode,
}

impl Plan {
    fn new(g: &Graph, v0: usize, mode: Mode) -> Self {
        let order = g.bfs_order(v0);
        let dist = g.distances_from(v0);
        let mut pos = vec![usize::MAX; g.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let earlier = order
            .iter()
            .enumerate()
            .map(|(i, &v)| g.neighbors(v).iter().copied().filter(|&u| pos[u] < i).collect())
            .collect();
        let radius = order.iter().map(|&v| mode.slope() * dist[v] as i32).collect();
        Plan { order, radius, earlier, mode }
    }

    /// Values admissible at position `i` given the assigned prefix.
    fn candidates(&self, i: usize, vals: &[i32], out: &mut Vec<i32>) {
        out.clear();
        let r = self.radius[i];
        let nb = &self.earlier[i];
        match self.mode {
            Mode::Lipschitz(m) => {
                let m = m as i32;
                let lo = nb.iter().map(|&u| vals[u] - m).max().unwrap_or(-r).max(-r);
                let hi = nb.iter().map(|&u| vals[u] + m).min().unwrap_or(r).min(r);
                out.extend(lo..=hi);
            }
            Mode::Homomorphism => {
                let a = vals[nb[0]];
                for x in [a - 1, a + 1] {
                    if x.abs() <= r && nb.iter().all(|&u| (vals[u] - x).abs() == 1) {
                        out.push(x);
                    }
                }
            }
        }
    }
}

struct Search<'a> {
    plan: &'a Plan,
    cap: usize,
    found: &'a AtomicUsize,
    abort: &'a AtomicBool,
    out: Vec<Vec<i32>>,
    scratch: Vec<Vec<i32>>,
}

impl Search<'_> {
    fn dfs(&mut self, i: usize, vals: &mut [i32]) {
        if self.abort.load(Ordering::Relaxed) {
            return;
        }
        if i == self.plan.order.len() {
            if self.found.fetch_add(1, Ordering::Relaxed) >= self.cap {
                self.abort.store(true, Ordering::Relaxed);
                return;
            }
            self.out.push(vals.to_vec());
            return;
        }
        let mut cands = self.scratch.pop().unwrap_or_default();
        self.plan.candidates(i, vals, &mut cands);
        let v = self.plan.order[i];
        for &x in &cands {
            vals[v] = x;
            self.dfs(i + 1, vals);
        }
        vals[v] = 0;
        self.scratch.push(cands);
    }
}

/// Lists `Lip_{v0}(G; M)` or `Hom_{v0}(G)`.
///
/// Depth-first assignment in BFS order from `v0`, each vertex confined by its
/// already assigned neighbours and by `|f(w)| <= slope·dist(v0, w)`. Branches
/// are split across workers; the output is sorted, so it does not depend on
/// the worker count. Fails with [`Error::CapExceeded`] once more than `cap`
/// functions exist.
pub fn enumerate(g: &Graph, v0: usize, mode: Mode, cap: usize) -> Result<EnumerationResult> {
    if v0 >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v0, n: g.n() });
    }
    if cap == 0 {
        return Err(Error::InvalidParameters("cap must be positive".into()));
    }
    if mode == Mode::Homomorphism && g.bipartition().is_none() {
        g.with_bipartition()?;
    }
    if !g.is_connected() {
        return Err(Error::Precondition("enumeration needs a connected graph".into()));
    }
    let plan = Plan::new(g, v0, mode);
    let n = g.n();

    // Breadth-first expansion of prefixes until there is enough to split.
    let mut prefixes = vec![vec![0i32; n]];
    let mut depth = 1;
    let mut cands = Vec::new();
    while depth < n && prefixes.len() < SPLIT_TARGET {
        let v = plan.order[depth];
        let mut next = Vec::new();
        for p in &prefixes {
            plan.candidates(depth, p, &mut cands);
            for &x in &cands {
                let mut q = p.clone();
                q[v] = x;
                next.push(q);
            }
        }
        if next.len() > cap {
            return Err(Error::CapExceeded(cap));
        }
        prefixes = next;
        depth += 1;
    }

    let found = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let parts = par::map(&prefixes, |p| {
        let mut search = Search {
            plan: &plan,
            cap,
            found: &found,
            abort: &abort,
            out: Vec::new(),
            scratch: Vec::new(),
        };
        let mut vals = p.clone();
        search.dfs(depth, &mut vals);
        search.out
    });
    if abort.load(Ordering::Relaxed) {
        return Err(Error::CapExceeded(cap));
    }
    let mut all: Vec<Vec<i32>> = parts.into_iter().flatten().collect();
    all.sort_unstable();
    let functions: Vec<_> = all.into_iter().map(|v| HeightFunction::new(v, v0, mode)).collect();
    Ok(EnumerationResult { count: functions.len(), functions })
}
