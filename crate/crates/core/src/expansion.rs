//! Expansion parameter of regular graphs and the inequalities it implies.
//!
//! `λ` is the smallest value with `|e(S,T) - (d/n)|S||T|| <= λ sqrt(|S||T|)`
//! for all admissible `S, T`. In general mode `S, T` range over all vertex
//! subsets and `n = |V|`; in bipartite mode `S ⊆ V0`, `T ⊆ V1` and `n` is the
//! class size.

use std::collections::BTreeMap;

use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::{par, rng};

/// Largest number of set-membership bits the exhaustive search enumerates
/// (`|S| + |T|` ground-set sizes combined).
pub const EXHAUSTIVE_BITS: usize = 24;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 100_000;

// Slack for floating-point comparisons in the inequality checks.
const CMP_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpansionMode {
    General,
    Bipartite,
}

/// Number of ordered pairs `(a, b) ∈ S × T` with `{a, b}` an edge.
pub fn edge_count(g: &Graph, s: &VertexSet, t: &VertexSet) -> u64 {
    s.iter()
        .map(|a| g.neighbors(a).iter().filter(|&&b| t.contains(b)).count() as u64)
        .sum()
}

fn regular_degree(g: &Graph) -> Result<usize> {
    g.degree().ok_or(Error::NotRegular)
}

/// `(d, n, S-side vertices, T-side vertices)` for a mode.
fn sides(g: &Graph, mode: ExpansionMode) -> Result<(usize, usize, Vec<usize>, Vec<usize>)> {
    let d = regular_degree(g)?;
    match mode {
        ExpansionMode::General => {
            let all: Vec<usize> = (0..g.n()).collect();
            Ok((d, g.n(), all.clone(), all))
        }
        ExpansionMode::Bipartite => {
            let bp = g.bipartition().ok_or(Error::MissingBipartition)?;
            let v0 = bp.class(0).to_vec();
            let v1 = bp.class(1).to_vec();
            if v0.len() != v1.len() {
                return Err(Error::InvalidParameters("colour classes differ in size".into()));
            }
            Ok((d, v0.len(), v0, v1))
        }
    }
}

/// Maximising pair found by [`exhaustive_lambda`].
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaWitness {
    pub lambda: f64,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

/// Exact `λ` by enumerating every admissible nonempty pair `(S, T)`.
///
/// For each `S` the `T` side walks a Gray code so `e(S, T)` is updated with a
/// single popcount per step.
pub fn exhaustive_lambda(g: &Graph, mode: ExpansionMode) -> Result<LambdaWitness> {
    let (d, n, s_side, t_side) = sides(g, mode)?;
    let bits = s_side.len() + t_side.len();
    if bits > EXHAUSTIVE_BITS {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive lambda needs {bits} membership bits, limit is {EXHAUSTIVE_BITS}"
        )));
    }
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in s_side.iter().enumerate() {
        pos[v] = i;
    }
    // Neighbourhood of each T-side vertex as a mask over S-side positions.
    let t_adj: Vec<u32> = t_side
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| pos[w] != usize::MAX)
                .fold(0u32, |m, &w| m | (1 << pos[w]))
        })
        .collect();
    let density = d as f64 / n as f64;
    let ns = s_side.len();
    let nt = t_side.len();
    let best = par::map_range(1usize << ns, |s_mask| {
        if s_mask == 0 {
            return (f64::NEG_INFINITY, 0u32, 0u32);
        }
        let s_mask = s_mask as u32;
        let s_size = s_mask.count_ones() as f64;
        let mut e = 0i64;
        let mut t_size = 0i64;
        let mut t_mask = 0u32;
        let mut best = (f64::NEG_INFINITY, 0u32, 0u32);
        for k in 1u32..(1u32 << nt) {
            let flip = k.trailing_zeros() as usize;
            let delta = (t_adj[flip] & s_mask).count_ones() as i64;
            if t_mask & (1 << flip) == 0 {
                t_mask |= 1 << flip;
                e += delta;
                t_size += 1;
            } else {
                t_mask &= !(1 << flip);
                e -= delta;
                t_size -= 1;
            }
            if t_size == 0 {
                continue;
            }
            let st = s_size * t_size as f64;
            let value = (e as f64 - density * st).abs() / st.sqrt();
            if value > best.0 {
                best = (value, s_mask, t_mask);
            }
        }
        best
    });
    let (lambda, s_mask, t_mask) = best
        .into_iter()
        .fold((f64::NEG_INFINITY, 0, 0), |acc, b| if b.0 > acc.0 { b } else { acc });
    let unmask = |mask: u32, side: &[usize]| -> Vec<usize> {
        (0..side.len()).filter(|&i| mask & (1 << i) != 0).map(|i| side[i]).collect()
    };
    Ok(LambdaWitness { lambda, s: unmask(s_mask, &s_side), t: unmask(t_mask, &t_side) })
}

/// The two lower bounds every general-mode `λ` must satisfy:
/// `max(d/n, sqrt(d)(1 - d/n))`.
pub fn forced_lower_bound(d: usize, n: usize) -> f64 {
    let ratio = d as f64 / n as f64;
    ratio.max((d as f64).sqrt() * (1.0 - ratio))
}

/// Deterministic start vector for power iteration.
fn start_vector(len: usize) -> Vec<f64> {
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    (0..len)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

/// Second-largest absolute adjacency eigenvalue (general mode) or second
/// singular value of the biadjacency matrix (bipartite mode).
///
/// Runs power iteration on `A²` restricted to the orthogonal complement of
/// the all-ones vector (on `V0` in bipartite mode), so `±λ` pairs cannot
/// cause oscillation. Stops when the residual `‖Bx - μx‖` or the Rayleigh
/// increment drops below `tol · max(μ, 1)`.
pub fn spectral_lambda(g: &Graph, mode: ExpansionMode, tol: f64, max_iter: usize) -> Result<f64> {
    let (_, _, support, _) = sides(g, mode)?;
    let n = g.n();
    let mut on_support = vec![false; n];
    for &v in &support {
        on_support[v] = true;
    }
    let deflate = |x: &mut [f64]| {
        let mean = support.iter().map(|&v| x[v]).sum::<f64>() / support.len() as f64;
        for &v in &support {
            x[v] -= mean;
        }
    };
    let normalize = |x: &mut [f64]| -> f64 {
        let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.0 {
            x.iter_mut().for_each(|a| *a /= norm);
        }
        norm
    };
    let mut x = vec![0.0; n];
    for (&v, r) in support.iter().zip(start_vector(support.len())) {
        x[v] = r;
    }
    deflate(&mut x);
    if normalize(&mut x) == 0.0 {
        return Ok(0.0);
    }
    let adj = g.adjacency();
    let mut mid = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut previous = 0.0f64;
    for iter in 0..max_iter {
        for (u, out) in mid.iter_mut().enumerate() {
            *out = adj[u].iter().map(|&w| x[w]).sum();
        }
        for (u, out) in y.iter_mut().enumerate() {
            *out = if on_support[u] { adj[u].iter().map(|&w| mid[w]).sum() } else { 0.0 };
        }
        deflate(&mut y);
        let mu: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let residual = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - mu * a).powi(2))
            .sum::<f64>()
            .sqrt();
        let scale = mu.max(1.0);
        let converged = residual <= tol * scale
            || (iter >= 100 && (mu - previous).abs() <= 1e-3 * tol * scale);
        if converged {
            return Ok(mu.max(0.0).sqrt());
        }
        previous = mu;
        std::mem::swap(&mut x, &mut y);
        if normalize(&mut x) == 0.0 {
            return Ok(0.0);
        }
    }
    Err(Error::NonConvergence(max_iter))
}

/// `d / (32 (M+1) ln(9 M d²))`.
pub fn m_good_threshold(d: usize, m: u32) -> f64 {
    let (d, m) = (d as f64, m as f64);
    d / (32.0 * (m + 1.0) * (9.0 * m * d * d).ln())
}

/// `d / (300 ln d)`; infinite for `d = 1`.
pub fn good_bi_threshold(d: usize) -> f64 {
    let d = d as f64;
    if d <= 1.0 {
        f64::INFINITY
    } else {
        d / (300.0 * d.ln())
    }
}

/// Goodness predicates for a degree and expansion parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Goodness {
    pub m: Option<u32>,
    pub m_good: Option<bool>,
    pub m_good_threshold: Option<f64>,
    pub good_bi: bool,
    pub good_bi_threshold: f64,
}

impl Goodness {
    pub fn to_map(&self) -> BTreeMap<String, bool> {
        let mut out = BTreeMap::new();
        if let (Some(m), Some(ok)) = (self.m, self.m_good) {
            out.insert(format!("M-good({m})"), ok);
        }
        out.insert("good-bi".to_string(), self.good_bi);
        out
    }
}

pub fn goodness(d: usize, lambda: f64, m: Option<u32>) -> Goodness {
    let m_good_threshold = m.map(|m| m_good_threshold(d, m));
    let good_bi_threshold = good_bi_threshold(d);
    Goodness {
        m,
        m_good: m_good_threshold.map(|th| lambda <= th),
        m_good_threshold,
        good_bi: lambda <= good_bi_threshold,
        good_bi_threshold,
    }
}

/// Full report for the `certify` command.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionReport {
    pub mode: ExpansionMode,
    pub d: usize,
    pub n: usize,
    pub lambda_spectral: f64,
    pub lambda_exhaustive: Option<f64>,
    pub predicates: BTreeMap<String, bool>,
}

/// Spectral certificate plus, when small enough, the exhaustive value.
pub fn certify(g: &Graph, mode: ExpansionMode, m: Option<u32>, tol: f64) -> Result<ExpansionReport> {
    let (d, n, s_side, t_side) = sides(g, mode)?;
    let lambda_spectral = spectral_lambda(g, mode, tol, DEFAULT_MAX_ITER)?;
    let lambda_exhaustive = if s_side.len() + t_side.len() <= EXHAUSTIVE_BITS {
        Some(exhaustive_lambda(g, mode)?.lambda)
    } else {
        None
    };
    let certified = lambda_spectral + tol * lambda_spectral.max(1.0);
    let best = lambda_exhaustive.map_or(certified, |e| e.min(certified));
    Ok(ExpansionReport {
        mode,
        d,
        n,
        lambda_spectral,
        lambda_exhaustive,
        predicates: goodness(d, best, m).to_map(),
    })
}

/// How many sets [`check_expansion_props`] examines.
#[derive(Debug, Clone, Copy)]
pub enum Scope {
    /// Every subset (and every pair of subsets for the connectivity check).
    Exhaustive,
    /// Uniformly random subsets.
    Sampled { samples: usize, seed: u64 },
}

/// Outcome of one inequality family.
#[derive(Debug, Clone, Serialize)]
pub struct PropCheck {
    pub name: &'static str,
    pub evaluated: u64,
    pub passed: bool,
    /// Set when the hypotheses of the statement do not hold for this `λ`.
    pub not_applicable: Option<String>,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropsReport {
    pub mode: ExpansionMode,
    pub lambda: f64,
    pub checks: Vec<PropCheck>,
}

impl PropsReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Checks the connectivity, vertex-expansion, large-boundary, volume-growth
/// and diameter inequalities for a given valid `λ`.
///
/// The diameter bound in bipartite mode is floored at 2, the diameter of any
/// connected bipartite graph with both classes of size at least 2.
pub fn check_expansion_props(
    g: &Graph,
    lambda: f64,
    mode: ExpansionMode,
    scope: Scope,
) -> Result<PropsReport> {
    let (d, n, s_side, t_side) = sides(g, mode)?;
    if mode == ExpansionMode::General && lambda <= 0.0 {
        return Err(Error::InvalidParameters("lambda must be positive in general mode".into()));
    }
    let nv = g.n();
    let (d_f, n_f) = (d as f64, n as f64);
    // d²/(4λ²), infinite when λ = 0.
    let growth = if lambda > 0.0 { d_f * d_f / (4.0 * lambda * lambda) } else { f64::INFINITY };
    let threshold = lambda * n_f / d_f;
    let adj_mask: Vec<u64> = (0..nv)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w.min(63))))
        .collect();
    let neighbourhood = |mask: u64| -> u64 {
        mask_to_vec(mask).into_iter().fold(0u64, |m, v| m | adj_mask[v])
    };

    // Subsets to examine: (A ⊆ V) for expansion and boundary, pairs for
    // connectivity.
    let samples_seed = match scope {
        Scope::Exhaustive => None,
        Scope::Sampled { samples, seed } => Some((samples, seed)),
    };
    if let Some((samples, seed)) = samples_seed {
        return sampled(g, lambda, mode, samples, seed);
    }
    if nv > EXHAUSTIVE_BITS {
        return Err(Error::BudgetExceeded(format!("exhaustive property check over 2^{nv} subsets")));
    }
    let subsets: Vec<u64> = (0..(1u64 << nv)).collect();
    let side_mask = |side: &[usize]| side.iter().fold(0u64, |m, &v| m | (1 << v));
    let (s_mask, t_mask) = (side_mask(&s_side), side_mask(&t_side));

    let mut checks = Vec::new();

    // Connectivity: min(|A|, |B|) > λn/d forces an edge between A and B.
    let s_sets: Vec<u64> = subsets.iter().copied().filter(|m| m & !s_mask == 0).collect();
    let t_sets: Vec<u64> = subsets.iter().copied().filter(|m| m & !t_mask == 0).collect();
    let big_s: Vec<u64> =
        s_sets.iter().copied().filter(|m| m.count_ones() as f64 > threshold).collect();
    let big_t: Vec<u64> =
        t_sets.iter().copied().filter(|m| m.count_ones() as f64 > threshold).collect();
    let conn = par::map(&big_s, |&a| {
        let na = neighbourhood(a);
        big_t.iter().find(|&&b| na & b == 0).map(|&b| (a, b))
    });
    let failure = conn.into_iter().flatten().next();
    checks.push(PropCheck {
        name: "connectivity",
        evaluated: (big_s.len() * big_t.len()) as u64,
        passed: failure.is_none(),
        not_applicable: None,
        witness: failure.map(|(a, b)| format!("A={:?} B={:?}", mask_to_vec(a), mask_to_vec(b))),
    });

    // Vertex expansion and large boundary over every examined A ⊆ V.
    let results = par::map(&subsets, |&a| {
        let size = a.count_ones() as f64;
        if size == 0.0 {
            return (true, true);
        }
        let na = neighbourhood(a);
        let n_size = na.count_ones() as f64;
        let expansion_ok = n_size + CMP_EPS >= (n_f / 2.0).min(growth * size);
        let boundary_ok = if size <= n_f / 4.0 {
            let outer = (na & !a).count_ones() as f64;
            outer + CMP_EPS >= (n_f / 4.0).min((growth - 1.0) * size)
        } else {
            true
        };
        (expansion_ok, boundary_ok)
    });
    let expansion_fail = results.iter().position(|r| !r.0).map(|i| subsets[i]);
    let boundary_fail = results.iter().position(|r| !r.1).map(|i| subsets[i]);
    checks.push(PropCheck {
        name: "vertex-expansion",
        evaluated: subsets.len() as u64,
        passed: expansion_fail.is_none(),
        not_applicable: None,
        witness: expansion_fail.map(|a| format!("A={:?}", mask_to_vec(a))),
    });
    checks.push(PropCheck {
        name: "large-boundary",
        evaluated: subsets.len() as u64,
        passed: boundary_fail.is_none(),
        not_applicable: None,
        witness: boundary_fail.map(|a| format!("A={:?}", mask_to_vec(a))),
    });

    checks.push(volume_growth(g, lambda, d_f, n_f));
    checks.push(diameter_check(g, lambda, mode, d_f, n_f));
    Ok(PropsReport { mode, lambda, checks })
}

fn volume_growth(g: &Graph, lambda: f64, d: f64, n: f64) -> PropCheck {
    let ratio = if lambda > 0.0 { d / (2.0 * lambda) } else { f64::INFINITY };
    let t_max = g.diameter().unwrap_or(g.n()) + 1;
    let fails = par::map_range(g.n(), |v| {
        let dist = g.distances_from(v);
        (0..=t_max).find_map(|t| {
            let size = dist.iter().filter(|&&x| x <= t).count() as f64;
            let bound = (n / 2.0).min(ratio.powi(2 * t as i32));
            (size + CMP_EPS < bound).then_some((v, t))
        })
    });
    let fail = fails.into_iter().flatten().next();
    PropCheck {
        name: "volume-growth",
        evaluated: (g.n() * (t_max + 1)) as u64,
        passed: fail.is_none(),
        not_applicable: None,
        witness: fail.map(|(v, t)| format!("v={v} t={t}")),
    }
}

/// Diameter upper bound implied by `λ`, if the hypotheses hold.
pub fn diameter_bound(lambda: f64, mode: ExpansionMode, d: usize, n: usize) -> Option<f64> {
    let (d, n) = (d as f64, n as f64);
    match mode {
        ExpansionMode::General if lambda < d / 2.0 => Some(n.ln() / (d / (2.0 * lambda)).ln()),
        ExpansionMode::Bipartite if lambda <= d / 8.0 => {
            let core = if lambda > 0.0 { n.ln() / (d / (2.0 * lambda)).ln() } else { 0.0 };
            Some((core + 1.0).max(2.0))
        }
        _ => None,
    }
}

fn diameter_check(g: &Graph, lambda: f64, mode: ExpansionMode, d: f64, n: f64) -> PropCheck {
    let bound = diameter_bound(lambda, mode, d as usize, n as usize);
    match (bound, g.diameter()) {
        (None, _) => PropCheck {
            name: "diameter",
            evaluated: 0,
            passed: true,
            not_applicable: Some(format!("lambda = {lambda} outside the range where the bound applies")),
            witness: None,
        },
        (Some(b), Some(diam)) => PropCheck {
            name: "diameter",
            evaluated: 1,
            passed: diam as f64 <= b + CMP_EPS,
            not_applicable: None,
            witness: (diam as f64 > b + CMP_EPS).then(|| format!("diam={diam} bound={b}")),
        },
        (Some(b), None) => PropCheck {
            name: "diameter",
            evaluated: 1,
            passed: false,
            not_applicable: None,
            witness: Some(format!("disconnected graph, bound={b}")),
        },
    }
}

/// Random-subset version of the property check; works at any size.
fn sampled(
    g: &Graph,
    lambda: f64,
    mode: ExpansionMode,
    samples: usize,
    seed: u64,
) -> Result<PropsReport> {
    let (d, n, s_side, t_side) = sides(g, mode)?;
    let (d_f, n_f) = (d as f64, n as f64);
    let growth = if lambda > 0.0 { d_f * d_f / (4.0 * lambda * lambda) } else { f64::INFINITY };
    let threshold = lambda * n_f / d_f;
    let nv = g.n();
    let results = par::map_range(samples, |i| {
        let mut r = rng::stream(seed, i as u64);
        let p: f64 = r.random_range(0.0..1.0);
        let a = VertexSet::from_iter(nv, (0..nv).filter(|_| r.random_bool(p)));
        let s = VertexSet::from_iter(nv, s_side.iter().copied().filter(|_| r.random_bool(p)));
        let t = VertexSet::from_iter(nv, t_side.iter().copied().filter(|_| r.random_bool(p)));
        let b = crate::graph::boundary(g, &a);
        let size = a.len() as f64;
        let expansion_ok =
            size == 0.0 || b.neighborhood.len() as f64 + CMP_EPS >= (n_f / 2.0).min(growth * size);
        let boundary_ok = size == 0.0
            || size > n_f / 4.0
            || b.outer.len() as f64 + CMP_EPS >= (n_f / 4.0).min((growth - 1.0) * size);
        let conn_ok = (s.len().min(t.len()) as f64) <= threshold || edge_count(g, &s, &t) > 0;
        (conn_ok, expansion_ok, boundary_ok)
    });
    let mk = |name, idx: usize| {
        let fail = results.iter().position(|r| !(if idx == 0 { r.0 } else if idx == 1 { r.1 } else { r.2 }));
        PropCheck {
            name,
            evaluated: samples as u64,
            passed: fail.is_none(),
            not_applicable: None,
            witness: fail.map(|i| format!("sample {i}")),
        }
    };
    let mut checks = vec![mk("connectivity", 0), mk("vertex-expansion", 1), mk("large-boundary", 2)];
    let sample_vertices: Vec<usize> = (0..nv).step_by((nv / 64).max(1)).collect();
    let ratio = if lambda > 0.0 { d_f / (2.0 * lambda) } else { f64::INFINITY };
    let fails = par::map(&sample_vertices, |&v| {
        let dist = g.distances_from(v);
        let ecc = dist.iter().copied().filter(|&x| x != usize::MAX).max().unwrap_or(0);
        (0..=ecc + 1).find_map(|t| {
            let size = dist.iter().filter(|&&x| x <= t).count() as f64;
            (size + CMP_EPS < (n_f / 2.0).min(ratio.powi(2 * t as i32))).then_some((v, t))
        })
    });
    let fail = fails.into_iter().flatten().next();
    checks.push(PropCheck {
        name: "volume-growth",
        evaluated: sample_vertices.len() as u64,
        passed: fail.is_none(),
        not_applicable: None,
        witness: fail.map(|(v, t)| format!("v={v} t={t}")),
    });
    checks.push(diameter_check(g, lambda, mode, d_f, n_f));
    Ok(PropsReport { mode, lambda, checks })
}
