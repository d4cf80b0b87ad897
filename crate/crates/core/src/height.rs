//! Height functions and their phases.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Relative slack applied to `λ` in the excluded-count bounds, absorbing
/// floating-point error in a computed `λ`.
pub const LAMBDA_SLACK: f64 = 1e-9;

/// Constraint along edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    /// `|f(u) - f(v)| <= M`.
    Lipschitz(u32),
    /// `|f(u) - f(v)| = 1`.
    Homomorphism,
}

impl Mode {
    /// Largest allowed step along an edge.
    pub fn slope(self) -> i32 {
        match self {
            Mode::Lipschitz(m) => m as i32,
            Mode::Homomorphism => 1,
        }
    }

    pub fn edge_ok(self, a: i32, b: i32) -> bool {
        match self {
            Mode::Lipschitz(m) => (a - b).unsigned_abs() <= m,
            Mode::Homomorphism => (a - b).abs() == 1,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Lipschitz(m) => write!(f, "lipschitz(M={m})"),
            Mode::Homomorphism => write!(f, "hom"),
        }
    }
}

/// Integer labelling of the vertices, pinned to 0 at `root`.
///
/// Ordering is lexicographic over the values in vertex-id order; the phase
/// construction uses it to pick between `f` and `-f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeightFunction {
    values: Vec<i32>,
    root: usize,
    mode: Mode,
}

impl HeightFunction {
    pub fn new(values: Vec<i32>, root: usize, mode: Mode) -> Self {
        HeightFunction { values, root, mode }
    }

    pub fn zero(n: usize, root: usize, mode: Mode) -> Self {
        HeightFunction { values: vec![0; n], root, mode }
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i32> {
        self.values
    }

    pub fn value(&self, v: usize) -> i32 {
        self.values[v]
    }

    pub fn set(&mut self, v: usize, value: i32) {
        self.values[v] = value;
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    pub fn negated(&self) -> Self {
        HeightFunction {
            values: self.values.iter().map(|&x| -x).collect(),
            root: self.root,
            mode: self.mode,
        }
    }

    pub fn max(&self) -> i32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> i32 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    pub fn max_abs(&self) -> i32 {
        self.values.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

/// Reason a labelling is not in the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Length { expected: usize, got: usize },
    Root { root: usize, value: i32 },
    Edge { u: usize, v: usize, fu: i32, fv: i32 },
}

/// Lists every violated constraint; empty iff `f` belongs to the family.
pub fn validate(g: &Graph, f: &HeightFunction) -> Vec<Violation> {
    if f.len() != g.n() {
        return vec![Violation::Length { expected: g.n(), got: f.len() }];
    }
    let mut out = Vec::new();
    if f.value(f.root()) != 0 {
        out.push(Violation::Root { root: f.root(), value: f.value(f.root()) });
    }
    for (u, v) in g.edges() {
        if !f.mode().edge_ok(f.value(u), f.value(v)) {
            out.push(Violation::Edge { u, v, fu: f.value(u), fv: f.value(v) });
        }
    }
    out
}

/// Phase of a height function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Phase {
    /// Lipschitz phase `{lo, ..., hi}` (`hi = lo + M`, or `{0}` for the zero
    /// function).
    Interval { lo: i32, hi: i32 },
    /// Homomorphism phase: level `k` attained by most of class `class`.
    Level { k: i32, class: usize },
}

impl Phase {
    /// `k` in the text: the interval's minimum or the level.
    pub fn base(&self) -> i32 {
        match *self {
            Phase::Interval { lo, .. } => lo,
            Phase::Level { k, .. } => k,
        }
    }

    pub fn top(&self) -> i32 {
        match *self {
            Phase::Interval { hi, .. } => hi,
            Phase::Level { k, .. } => k,
        }
    }

    pub fn negated(&self) -> Phase {
        match *self {
            Phase::Interval { lo, hi } => Phase::Interval { lo: -hi, hi: -lo },
            Phase::Level { k, class } => Phase::Level { k: -k, class },
        }
    }

    pub fn contains(&self, b: i32) -> bool {
        self.base() <= b && b <= self.top()
    }

    /// `min_{a ∈ phase} |b - a|`.
    pub fn distance(&self, b: i32) -> u32 {
        if b < self.base() {
            (self.base() - b) as u32
        } else if b > self.top() {
            (b - self.top()) as u32
        } else {
            0
        }
    }
}

/// `count <= factor·λ·n/d`, with [`LAMBDA_SLACK`].
pub fn within_bound(count: usize, factor: f64, lambda: f64, n: usize, d: usize) -> bool {
    count as f64 * d as f64 <= factor * lambda * n as f64 * (1.0 + LAMBDA_SLACK)
}

/// Minimal interval base `k` with at most `2λn/d` values outside
/// `{k..k+M}`, scanning `k ∈ [min f - M, max f]`.
fn minimal_base(values: &[i32], m: i32, lambda: f64, d: usize) -> Option<i32> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    let (lo, hi) = (sorted[0], sorted[n - 1]);
    (lo - m..=hi).find(|&k| {
        let below = sorted.partition_point(|&x| x < k);
        let above = n - sorted.partition_point(|&x| x <= k + m);
        within_bound(below + above, 2.0, lambda, n, d)
    })
}

/// Phase of an `M`-Lipschitz function on a `d`-regular graph with expansion
/// parameter `lambda`.
///
/// The larger of `f` and `-f` in lexicographic order gets the interval with
/// minimal base satisfying the excluded-count bound; the smaller gets its
/// negation, so `phase(-f) = -phase(f)` holds exactly.
pub fn phase_lipschitz(g: &Graph, f: &HeightFunction, lambda: f64) -> Result<Phase> {
    let Mode::Lipschitz(m) = f.mode() else {
        return Err(Error::Precondition("phase_lipschitz needs a Lipschitz function".into()));
    };
    let d = g.degree().ok_or(Error::NotRegular)?;
    if f.len() != g.n() {
        return Err(Error::Precondition("function length differs from vertex count".into()));
    }
    if f.is_zero() {
        return Ok(Phase::Interval { lo: 0, hi: 0 });
    }
    let neg = f.negated();
    let f_is_larger = f.values() > neg.values();
    let big = if f_is_larger { f } else { &neg };
    let k = minimal_base(big.values(), m as i32, lambda, d).ok_or(Error::InvalidLambda(lambda))?;
    let phase = Phase::Interval { lo: k, hi: k + m as i32 };
    Ok(if f_is_larger { phase } else { phase.negated() })
}

/// Number of vertices with `|f(v) - k| >= 2`.
pub fn far_count(f: &HeightFunction, k: i32) -> usize {
    f.values().iter().filter(|&&x| (x - k).abs() >= 2).count()
}

/// Phase of a homomorphism on a `d`-regular bipartite graph with classes of
/// size `n` and bi-expansion parameter `lambda`.
///
/// `class` is the smallest `i` for which some level `k` is missed by at most
/// `2λn/d` vertices of `V_i`; `k` is the smallest such level, scanning the
/// values `f` takes on `V_i`. When `λ < d/3` the refinement
/// `|{v : |f(v) - k| >= 2}| <= 3λn/d` is checked as well.
pub fn phase_hom(g: &Graph, f: &HeightFunction, lambda: f64) -> Result<Phase> {
    if f.mode() != Mode::Homomorphism {
        return Err(Error::Precondition("phase_hom needs a homomorphism".into()));
    }
    let d = g.degree().ok_or(Error::NotRegular)?;
    let bp = g.bipartition().ok_or(Error::MissingBipartition)?;
    let n = bp.class(0).len();
    if bp.class(1).len() != n {
        return Err(Error::InvalidParameters("colour classes differ in size".into()));
    }
    let mut found = None;
    for class in 0..2 {
        let mut vals: Vec<i32> = bp.class(class).iter().map(|v| f.value(v)).collect();
        vals.sort_unstable();
        let mut i = 0;
        while i < vals.len() {
            let k = vals[i];
            let j = vals.partition_point(|&x| x <= k);
            if within_bound(vals.len() - (j - i), 2.0, lambda, n, d) {
                found = Some(Phase::Level { k, class });
                break;
            }
            i = j;
        }
        if found.is_some() {
            break;
        }
    }
    let phase = found.ok_or(Error::InvalidLambda(lambda))?;
    let Phase::Level { k, class } = phase else { unreachable!() };
    let root_side = bp.side(f.root());
    if (k.rem_euclid(2) as usize) ^ root_side != class {
        return Err(Error::Invariant(format!("phase {k} has parity inconsistent with class {class}")));
    }
    if 3.0 * lambda < d as f64 && !within_bound(far_count(f, k), 3.0, lambda, n, d) {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(phase)
}

/// Phase according to the function's mode.
pub fn phase(g: &Graph, f: &HeightFunction, lambda: f64) -> Result<Phase> {
    match f.mode() {
        Mode::Lipschitz(_) => phase_lipschitz(g, f, lambda),
        Mode::Homomorphism => phase_hom(g, f, lambda),
    }
}

/// `dist(f(v), phase)`.
pub fn deviation(f: &HeightFunction, v: usize, phase: &Phase) -> u32 {
    phase.distance(f.value(v))
}

/// One value per line.
pub fn format_function(f: &HeightFunction) -> String {
    f.values().iter().map(|x| format!("{x}\n")).collect()
}

/// Parses a function file; blank and `#` lines are skipped.
pub fn parse_function(text: &str) -> Result<Vec<i32>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| l.parse::<i32>().map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() }))
        .collect()
}
