//! The flattening map `T` and exhaustive checks of its counting properties.
//!
//! For `f` with `f(v)` above the threshold `k + M` (Lipschitz) or `k + 1`
//! (homomorphism), `A` is the component of `v` in the part of `G^{≤2}` above
//! the threshold, `X = ∂A` and `Y = ∂²A`. `T(f)` flattens `f` on `A`, frees
//! the values on `X` and shifts the result back to `f(v0) = 0`.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ball, boundary, component_in_square, Graph, VertexSet};
use crate::height::{self, validate, HeightFunction, Mode, Phase};
use crate::par;
use crate::rng;
use crate::samplers::enumerate;

/// Largest image materialised by [`apply_t`].
pub const IMAGE_GUARD: u64 = 1 << 20;
/// Random members validated when an image is too large to materialise.
pub const SPOT_CHECKS: usize = 1000;

/// How the threshold level `k(f)` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "rule")]
pub enum KRule {
    /// `k = min phase(f)` (Lipschitz) or `k = phase(f)` (homomorphism).
    Phase { lambda: f64 },
    /// `k ≡ 0`, for grounded functions on a glued tree.
    Zero,
}

impl KRule {
    pub fn level(&self, g: &Graph, f: &HeightFunction) -> Result<i32> {
        match *self {
            KRule::Zero => Ok(0),
            KRule::Phase { lambda } => Ok(height::phase(g, f, lambda)?.base()),
        }
    }
}

/// Sets and bounds attached to one `f` above the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformContext {
    pub mode: Mode,
    pub v: usize,
    pub k: i32,
    pub a: VertexSet,
    pub x: VertexSet,
    pub y: VertexSet,
    /// `ℓ_x` per `x ∈ X` (Lipschitz only).
    pub ell: BTreeMap<usize, i32>,
    /// `u_x` per `x ∈ X` (Lipschitz only).
    pub u: BTreeMap<usize, i32>,
    /// `|S| = ∏(u_x + 1)`, or `2^|X|` for homomorphisms.
    pub s_size: BigUint,
    /// `|S_-| = ∏ u_x` (Lipschitz only; 1 otherwise).
    pub s_minus_size: BigUint,
}

impl TransformContext {
    /// Threshold above which vertices may join `A`.
    pub fn threshold(&self) -> i32 {
        threshold(self.mode, self.k)
    }
}

fn threshold(mode: Mode, k: i32) -> i32 {
    k + mode.slope()
}

fn invariant(msg: String) -> Error {
    Error::Invariant(msg)
}

/// Builds `A`, `X`, `Y` and (Lipschitz) `ℓ`, `u` for `f` at `v` and level
/// `k`, checking the value constraints on `A`, `X`, `Y` and the chain
/// `1 <= ℓ_x <= f(x) - k <= u_x <= M`.
pub fn build_context(g: &Graph, f: &HeightFunction, v: usize, k: i32) -> Result<TransformContext> {
    let mode = f.mode();
    let th = threshold(mode, k);
    if f.value(v) <= th {
        return Err(Error::Precondition(format!("f({v}) = {} is not above {th}", f.value(v))));
    }
    let above = VertexSet::from_iter(g.n(), (0..g.n()).filter(|&w| f.value(w) > th));
    let a = component_in_square(g, v, &above)?;
    if a.len() == g.n() {
        return Err(Error::Precondition("A is the whole vertex set".into()));
    }
    let b = boundary(g, &a);
    let (x, y) = (b.outer, b.outer2);

    if let Some(w) = a.iter().find(|&w| f.value(w) <= th) {
        return Err(invariant(format!("f({w}) = {} on A is not above {th}", f.value(w))));
    }
    let mut ell = BTreeMap::new();
    let mut u = BTreeMap::new();
    let mut s_size = BigUint::one();
    let mut s_minus_size = BigUint::one();
    match mode {
        Mode::Lipschitz(m) => {
            let m = m as i32;
            for w in x.iter() {
                let fx = f.value(w);
                if !(k + 1..=k + m).contains(&fx) {
                    return Err(invariant(format!("f({w}) = {fx} on X outside [{}, {}]", k + 1, k + m)));
                }
            }
            if let Some(w) = y.iter().find(|&w| f.value(w) > k + m) {
                return Err(invariant(format!("f({w}) = {} on ∂²A exceeds {}", f.value(w), k + m)));
            }
            for xv in x.iter() {
                let nb = g.neighbors(xv);
                let ux = nb
                    .iter()
                    .filter(|&&w| !a.contains(w) && !x.contains(w))
                    .map(|&w| f.value(w) + m - k)
                    .fold(m, i32::min);
                let lx = nb
                    .iter()
                    .filter(|&&w| a.contains(w))
                    .map(|&w| f.value(w) - m - k)
                    .max()
                    .ok_or_else(|| invariant(format!("boundary vertex {xv} has no neighbour in A")))?;
                let fx = f.value(xv) - k;
                if !(1 <= lx && lx <= fx && fx <= ux && ux <= m) {
                    return Err(invariant(format!("at {xv}: need 1 <= {lx} <= {fx} <= {ux} <= {m}")));
                }
                ell.insert(xv, lx);
                u.insert(xv, ux);
                s_size *= BigUint::from((ux + 1) as u32);
                s_minus_size *= BigUint::from(ux as u32);
            }
        }
        Mode::Homomorphism => {
            if let Some(w) = x.iter().find(|&w| f.value(w) != k + 1) {
                return Err(invariant(format!("f({w}) = {} on X is not {}", f.value(w), k + 1)));
            }
            if let Some(w) = y.iter().find(|&w| f.value(w) != k) {
                return Err(invariant(format!("f({w}) = {} on ∂²A is not {k}", f.value(w))));
            }
            s_size = BigUint::one() << x.len();
        }
    }
    Ok(TransformContext { mode, v, k, a, x, y, ell, u, s_size, s_minus_size })
}

/// `h_s` for the choice vector `s` (indexed like `ctx.x.iter()`), before the
/// shift.
fn h_s(f: &HeightFunction, ctx: &TransformContext, s: &[i32]) -> Vec<i32> {
    let mut h = f.values().to_vec();
    let m = ctx.mode.slope();
    for w in ctx.a.iter() {
        h[w] = match ctx.mode {
            Mode::Lipschitz(_) => ctx.k + m,
            Mode::Homomorphism => f.value(w) - 2,
        };
    }
    for (i, xv) in ctx.x.iter().enumerate() {
        h[xv] = ctx.k + s[i];
    }
    h
}

fn shifted(h: Vec<i32>, root: usize, mode: Mode) -> HeightFunction {
    let base = h[root];
    HeightFunction::new(h.into_iter().map(|x| x - base).collect(), root, mode)
}

/// Choice set for each vertex of `X`, in `ctx.x.iter()` order.
fn choices(ctx: &TransformContext) -> Vec<Vec<i32>> {
    match ctx.mode {
        Mode::Lipschitz(_) => ctx.u.values().map(|&ux| (0..=ux).collect()).collect(),
        Mode::Homomorphism => vec![vec![-1, 1]; ctx.x.len()],
    }
}

fn check_member(g: &Graph, h: &HeightFunction) -> Result<()> {
    let bad = validate(g, h);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(invariant(format!("image member violates {:?}", bad[0])))
    }
}

/// Materialises `T(f)`, validating every member and its cardinality.
pub fn apply_t(g: &Graph, f: &HeightFunction, ctx: &TransformContext) -> Result<Vec<HeightFunction>> {
    let size = ctx.s_size.to_u64().filter(|&s| s <= IMAGE_GUARD);
    let Some(size) = size else {
        return Err(Error::BudgetExceeded(format!("|T(f)| = {} exceeds {IMAGE_GUARD}", ctx.s_size)));
    };
    let opts = choices(ctx);
    let mut digits = vec![0usize; opts.len()];
    let mut out = Vec::with_capacity(size as usize);
    loop {
        let s: Vec<i32> = digits.iter().zip(&opts).map(|(&d, o)| o[d]).collect();
        let h = shifted(h_s(f, ctx, &s), f.root(), f.mode());
        check_member(g, &h)?;
        out.push(h);
        // Mixed-radix increment.
        let mut i = 0;
        while i < digits.len() {
            digits[i] += 1;
            if digits[i] < opts[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
    }
    let distinct: HashSet<&[i32]> = out.iter().map(|h| h.values()).collect();
    if distinct.len() as u64 != size {
        return Err(invariant(format!("shift not one-to-one: {} distinct of {size}", distinct.len())));
    }
    Ok(out)
}

/// Validates [`SPOT_CHECKS`] uniformly random members of `T(f)` without
/// materialising it.
pub fn spot_check_t(g: &Graph, f: &HeightFunction, ctx: &TransformContext, seed: u64) -> Result<()> {
    let opts = choices(ctx);
    let mut rng = rng::seeded(seed);
    for _ in 0..SPOT_CHECKS {
        let s: Vec<i32> = opts.iter().map(|o| o[rng.random_range(0..o.len())]).collect();
        check_member(g, &shifted(h_s(f, ctx, &s), f.root(), f.mode()))?;
    }
    Ok(())
}

/// Recovers `(u_x)` from an image member `h` using only `A`, `X` and `v`.
pub fn recover_u(g: &Graph, h: &HeightFunction, a: &VertexSet, x: &VertexSet, v: usize, m: u32) -> Vec<i32> {
    let m = m as i32;
    x.iter()
        .map(|xv| {
            g.neighbors(xv)
                .iter()
                .filter(|&&w| !a.contains(w) && !x.contains(w))
                .map(|&w| h.value(w) - h.value(v) + 2 * m)
                .fold(m, i32::min)
        })
        .collect()
}

/// Rebuilds `f` from an image member `h`, the level `k` and the values of
/// `f` on `A ∪ X` (only needed for Lipschitz functions).
pub fn reconstruct(g: &Graph, h: &HeightFunction, ctx: &TransformContext, f_on_ax: &[i32]) -> Vec<i32> {
    let n = g.n();
    match ctx.mode {
        Mode::Lipschitz(m) => {
            // h_s(v0) = h_s(v) - h(v) = k + M - h(v)
            let hs_root = ctx.k + m as i32 - h.value(ctx.v);
            (0..n)
                .map(|w| {
                    if ctx.a.contains(w) || ctx.x.contains(w) {
                        f_on_ax[w]
                    } else {
                        h.value(w) + hs_root
                    }
                })
                .collect()
        }
        Mode::Homomorphism => {
            let w = ctx
                .x
                .iter()
                .flat_map(|xv| g.neighbors(xv).iter().copied())
                .find(|&w| ctx.a.contains(w))
                .expect("X has a neighbour in A");
            let hs_root = ctx.k - h.value(w);
            (0..n)
                .map(|u| {
                    if ctx.a.contains(u) {
                        h.value(u) + hs_root + 2
                    } else if ctx.x.contains(u) {
                        ctx.k + 1
                    } else {
                        h.value(u) + hs_root
                    }
                })
                .collect()
        }
    }
}

/// Outcome of one named family of checks.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub evaluated: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check { name: name.into(), evaluated: 0, failures: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.evaluated += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Result of [`verify_counting`].
#[derive(Debug, Clone, Serialize)]
pub struct CountingReport {
    pub mode: String,
    pub v0: usize,
    pub v: usize,
    pub t: u32,
    pub k_rule: KRule,
    pub family_size: usize,
    pub omega_plus: usize,
    pub groups: usize,
    pub checks: Vec<Check>,
}

impl CountingReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Member {
    f: HeightFunction,
    ctx: TransformContext,
    image: Vec<HeightFunction>,
}

fn set_key(s: &VertexSet) -> Vec<usize> {
    s.to_vec()
}

/// Preimage bound `α` for a group.
fn preimage_bound(mode: Mode, ctx: &TransformContext) -> BigUint {
    match mode {
        Mode::Lipschitz(m) => {
            let a = ctx.a.len();
            BigUint::from(m) * BigUint::from(2 * a + 1) * num_traits::pow(BigUint::from(2 * m + 1), a) * &ctx.s_minus_size
        }
        Mode::Homomorphism => BigUint::from(2u32),
    }
}

/// `num/den ≤ bound` for the per-`A` probability bound, as an exact
/// comparison `num·den_b ≤ num_b·den`.
fn omega_bound(mode: Mode, a: usize, x: usize) -> (BigUint, BigUint) {
    match mode {
        Mode::Lipschitz(m) => {
            let num = BigUint::from(m)
                * BigUint::from(2 * a + 1)
                * num_traits::pow(BigUint::from(2 * m + 1), a)
                * num_traits::pow(BigUint::from(m), x);
            (num, num_traits::pow(BigUint::from(m + 1), x))
        }
        Mode::Homomorphism => {
            if x == 0 {
                (BigUint::from(2u32), BigUint::one())
            } else {
                (BigUint::one(), BigUint::one() << (x - 1))
            }
        }
    }
}

/// Enumerates the family, builds `T` on every `f` with `f(v) > k(f) + t·M`
/// and checks its counting properties exactly.
///
/// Checks: `context` (value constraints on `A`, `X`, `∂²A` and the `ℓ/u`
/// chain), `ball_in_a` (`B(v, t-1) ⊆ A`), `a_size` (`|A|` against the phase
/// count bound, when a phase rule is used), `tree_expansion` (glued trees only),
/// `image` (validity and `|T(f)|`), `u_recovery`, `reconstruction`,
/// `preimage`, `disjoint` (Lipschitz images across `S`), `ratio` (per-group
/// and per-`A` bounds) and `double_counting`.
pub fn verify_counting(g: &Graph, v0: usize, v: usize, t: u32, mode: Mode, rule: KRule, cap: usize) -> Result<CountingReport> {
    if t == 0 {
        return Err(Error::InvalidParameters("t must be positive".into()));
    }
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let family = enumerate(g, v0, mode, cap)?.functions;
    let slope = mode.slope();
    let mut check_ctx = Check::new("context");
    let mut check_ball = Check::new("ball_in_a");
    let mut check_size = Check::new("a_size");
    let mut check_tree = Check::new("tree_expansion");
    let mut check_image = Check::new("image");
    let mut check_u = Check::new("u_recovery");
    let mut check_rec = Check::new("reconstruction");
    let mut check_pre = Check::new("preimage");
    let mut check_disjoint = Check::new("disjoint");
    let mut check_ratio = Check::new("ratio");
    let mut check_dc = Check::new("double_counting");

    let levels = par::map(&family, |f| rule.level(g, f));
    let mut omega = Vec::new();
    for (f, k) in family.iter().zip(levels) {
        let k = k?;
        if f.value(v) > k + t as i32 * slope {
            omega.push((f, k));
        }
    }
    let built = par::map(&omega, |&(f, k)| {
        let ctx = build_context(g, f, v, k)?;
        let image = apply_t(g, f, &ctx)?;
        Ok::<_, Error>(Member { f: f.clone(), ctx, image })
    });

    let ball_set = ball(g, v, t as usize - 1);
    let family_index: HashSet<&[i32]> = family.iter().map(|f| f.values()).collect();
    let d = g.degree();
    let shape = g.tree_shape();
    let mut members = Vec::new();
    for (res, &(f, _)) in built.into_iter().zip(&omega) {
        match res {
            Ok(m) => {
                check_ctx.record(true, String::new);
                members.push(m);
            }
            Err(Error::Invariant(msg)) => check_ctx.record(false, || format!("{:?}: {msg}", f.values())),
            Err(e) => return Err(e),
        }
    }

    for m in &members {
        let ctx = &m.ctx;
        let fv = || format!("{:?}", m.f.values());
        check_ball.record(ball_set.is_subset(&ctx.a), fv);
        if let (KRule::Phase { lambda }, Some(d)) = (rule, d) {
            let n = match mode {
                Mode::Lipschitz(_) => Some((g.n(), 2.0)),
                Mode::Homomorphism => (3.0 * lambda < d as f64)
                    .then(|| (g.bipartition().map_or(g.n() / 2, |b| b.class(0).len()), 3.0)),
            };
            if let Some((n, factor)) = n {
                check_size.record(height::within_bound(ctx.a.len(), factor, lambda, n, d), fv);
            }
        }
        if let (Some(shape), Some(glue)) = (shape, g.glue_vertex()) {
            let clear = !ctx.a.contains(glue) && !ctx.x.contains(glue);
            let expands = ctx.x.len() > (shape.arity - 2) * ctx.a.len();
            check_tree.record(clear && expands, || format!("{:?}: |A|={} |X|={}", m.f.values(), ctx.a.len(), ctx.x.len()));
        }
        let all_in = m.image.iter().all(|h| family_index.contains(h.values()));
        check_image.record(all_in && BigUint::from(m.image.len()) == ctx.s_size, fv);
        for h in &m.image {
            if let Mode::Lipschitz(mm) = mode {
                let want: Vec<i32> = ctx.u.values().copied().collect();
                check_u.record(recover_u(g, h, &ctx.a, &ctx.x, v, mm) == want, fv);
            }
            check_rec.record(reconstruct(g, h, ctx, m.f.values()) == m.f.values(), fv);
        }
    }

    // Group by A, and by S within A for Lipschitz functions.
    let mut by_a: BTreeMap<Vec<usize>, BTreeMap<Vec<i32>, Vec<&Member>>> = BTreeMap::new();
    for m in &members {
        let s_key: Vec<i32> = m.ctx.u.values().copied().collect();
        by_a.entry(set_key(&m.ctx.a)).or_default().entry(s_key).or_default().push(m);
    }
    let family_size = BigUint::from(family.len());
    let mut groups = 0;
    for (a_key, by_s) in &by_a {
        let mut images_by_s: Vec<HashSet<&[i32]>> = Vec::new();
        let mut omega_a = 0usize;
        let first = by_s.values().next().expect("nonempty")[0];
        let (xa, aa) = (first.ctx.x.len(), first.ctx.a.len());
        // Homomorphism groups are whole `Ω⁺_A`.
        let subgroups: Vec<Vec<&Member>> = match mode {
            Mode::Lipschitz(_) => by_s.values().cloned().collect(),
            Mode::Homomorphism => vec![by_s.values().flatten().copied().collect()],
        };
        for group in &subgroups {
            groups += 1;
            omega_a += group.len();
            let mut pre: HashMap<&[i32], usize> = HashMap::new();
            for m in group {
                for h in &m.image {
                    *pre.entry(h.values()).or_default() += 1;
                }
            }
            let alpha_obs = pre.values().copied().max().unwrap_or(0);
            let beta_obs = group.iter().map(|m| m.image.len()).min().unwrap_or(0);
            let q = pre.len();
            let ctx = &group[0].ctx;
            let alpha = preimage_bound(mode, ctx);
            let w = || format!("A={a_key:?}, |P|={}, |Q|={q}, max preimage={alpha_obs}", group.len());
            check_pre.record(BigUint::from(alpha_obs) <= alpha, w);
            // |P|·β <= α·|Q|, with observed and with stated constants.
            let p = group.len();
            check_dc.record(p * beta_obs <= alpha_obs * q, w);
            let beta = match mode {
                Mode::Lipschitz(_) => ctx.s_size.clone(),
                Mode::Homomorphism => BigUint::one() << xa,
            };
            check_dc.record(BigUint::from(p) * beta <= &alpha * BigUint::from(q), w);
            if let Mode::Lipschitz(_) = mode {
                let (num, den) = omega_bound(mode, aa, xa);
                check_ratio.record(BigUint::from(p) * den <= num * BigUint::from(q), w);
            }
            images_by_s.push(pre.into_keys().collect());
        }
        if let Mode::Lipschitz(_) = mode {
            for i in 0..images_by_s.len() {
                for j in i + 1..images_by_s.len() {
                    let clash = images_by_s[i].intersection(&images_by_s[j]).next();
                    check_disjoint.record(clash.is_none(), || format!("A={a_key:?}: shared image {clash:?}"));
                }
            }
        }
        let (num, den) = omega_bound(mode, aa, xa);
        check_ratio.record(BigUint::from(omega_a) * den <= num * &family_size, || {
            format!("A={a_key:?}: P(Ω⁺_A) = {omega_a}/{}", family.len())
        });
    }

    let mut checks = vec![check_ctx, check_ball];
    if check_size.evaluated > 0 || matches!(rule, KRule::Phase { .. }) {
        checks.push(check_size);
    }
    if shape.is_some() && g.glue_vertex().is_some() {
        checks.push(check_tree);
    }
    checks.extend([check_image]);
    if matches!(mode, Mode::Lipschitz(_)) {
        checks.push(check_u);
    }
    checks.push(check_rec);
    checks.push(check_pre);
    if matches!(mode, Mode::Lipschitz(_)) {
        checks.push(check_disjoint);
    }
    checks.extend([check_ratio, check_dc]);
    Ok(CountingReport {
        mode: mode.to_string(),
        v0,
        v,
        t,
        k_rule: rule,
        family_size: family.len(),
        omega_plus: omega.len(),
        groups,
        checks,
    })
}

/// Phase used by a rule, for reporting.
pub fn rule_phase(g: &Graph, f: &HeightFunction, rule: KRule) -> Result<Option<Phase>> {
    match rule {
        KRule::Zero => Ok(None),
        KRule::Phase { lambda } => height::phase(g, f, lambda).map(Some),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle, gen_tree};

    #[test]
    fn tree_context_example() {
        // T_2^3 glued: root 0, children 1..=3, glue 4.
        let g = gen_tree(3, 2, true).unwrap();
        let glue = g.glue_vertex().unwrap();
        let f = HeightFunction::new(vec![2, 1, 1, 1, 0], glue, Mode::Lipschitz(1));
        let ctx = build_context(&g, &f, 0, 0).unwrap();
        assert_eq!(ctx.a.to_vec(), vec![0]);
        assert_eq!(ctx.x.len(), 3);
        assert!(ctx.ell.values().all(|&l| l == 1));
        assert!(ctx.u.values().all(|&u| u == 1));
        assert_eq!(ctx.s_size, BigUint::from(8u32));
        let image = apply_t(&g, &f, &ctx).unwrap();
        assert_eq!(image.len(), 8);
        // s = 0 flattens A to k + M and X to k.
        assert!(image.iter().any(|h| h.values() == [1, 0, 0, 0, 0]));
    }

    #[test]
    fn precondition() {
        let g = gen_tree(3, 2, true).unwrap();
        let f = HeightFunction::new(vec![1, 1, 1, 0, 0], 4, Mode::Lipschitz(1));
        assert!(matches!(build_context(&g, &f, 0, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn hom_image_size() {
        let g = cycle(8);
        let f = HeightFunction::new(vec![0, 1, 2, 3, 2, 1, 0, -1], 0, Mode::Homomorphism);
        let ctx = build_context(&g, &f, 3, 0).unwrap();
        assert_eq!(ctx.a.to_vec(), vec![2, 3, 4]);
        assert_eq!(ctx.x.to_vec(), vec![1, 5]);
        let image = apply_t(&g, &f, &ctx).unwrap();
        assert_eq!(image.len(), 4);
        for h in &image {
            assert_eq!(reconstruct(&g, h, &ctx, &[]), f.values());
        }
    }

    #[test]
    fn counting_on_small_graphs() {
        let k4 = complete_graph(4);
        for v in 0..4 {
            let r = verify_counting(&k4, 0, v, 1, Mode::Lipschitz(1), KRule::Phase { lambda: 0.75 }, 1000).unwrap();
            assert!(r.all_passed(), "{r:#?}");
        }
        let c4 = cycle(4);
        for v in 0..4 {
            let r = verify_counting(&c4, 0, v, 1, Mode::Homomorphism, KRule::Phase { lambda: 0.0 }, 1000).unwrap();
            assert!(r.all_passed(), "{r:#?}");
            assert!(r.omega_plus <= 1);
        }
        let t = gen_tree(3, 3, true).unwrap();
        let glue = t.glue_vertex().unwrap();
        for v in 0..4 {
            let r = verify_counting(&t, glue, v, 1, Mode::Lipschitz(1), KRule::Zero, 100_000).unwrap();
            assert!(r.all_passed(), "{r:#?}");
            assert!(r.omega_plus > 0);
        }
    }

    #[test]
    fn empty_event_is_vacuous() {
        let k4 = complete_graph(4);
        let r = verify_counting(&k4, 0, 1, 5, Mode::Lipschitz(1), KRule::Phase { lambda: 0.75 }, 1000).unwrap();
        assert_eq!(r.omega_plus, 0);
        assert!(r.all_passed());
    }
}
