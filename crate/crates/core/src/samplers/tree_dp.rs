use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::graph::TreeShape;
use crate::height::{HeightFunction, Mode};
use crate::rng::{self, Rng};

/// Natural logarithm of a big integer; `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Uniform draw from `0..bound` by rejection over random bits.
pub fn uniform_below(rng: &mut Rng, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let extra = (words as u64 * 32 - bits) as u32;
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(top) = digits.last_mut() {
            *top >>= extra;
        }
        let x = BigUint::from_slice(&digits);
        if &x < bound {
            return x;
        }
    }
}

fn pick_weighted(rng: &mut Rng, weights: &[BigUint]) -> usize {
    let total: BigUint = weights.iter().sum();
    let mut r = uniform_below(rng, &total);
    for (i, w) in weights.iter().enumerate() {
        if &r < w {
            return i;
        }
        r -= w;
    }
    unreachable!("draw below total")
}

/// Exact counts of grounded functions on the complete tree `T_h^d`.
///
/// Counts only depend on depth, so each table is indexed by depth and value:
/// `down[j][x]` counts extensions into the subtree below a depth-`j` vertex
/// holding `x`, and `up[j][x]` counts extensions into everything else. A
/// floating-point log mirror of every table is always kept; the exact
/// tables can be skipped for very large trees.
#[derive(Debug, Clone)]
pub struct TreeDp {
    shape: TreeShape,
    mode: Mode,
    down: Option<Vec<Vec<BigUint>>>,
    up: Option<Vec<Vec<BigUint>>>,
    total: Option<BigUint>,
    ln_down: Vec<Vec<f64>>,
    ln_up: Vec<Vec<f64>>,
    ln_total: f64,
}

impl TreeDp {
    pub fn new(d: usize, h: usize, mode: Mode) -> Result<Self> {
        Self::build(d, h, mode, true)
    }

    /// Log-domain tables only.
    pub fn log_only(d: usize, h: usize, mode: Mode) -> Result<Self> {
        Self::build(d, h, mode, false)
    }

    fn build(d: usize, h: usize, mode: Mode, exact: bool) -> Result<Self> {
        if d < 3 || h < 1 {
            return Err(Error::InvalidParameters(format!("tree needs d >= 3 and h >= 1, got d={d}, h={h}")));
        }
        let shape = TreeShape { arity: d, height: h, glued: false };
        let radius = |j: usize| mode.slope() * (h - j) as i32;
        let width = |j: usize| 2 * radius(j) as usize + 1;

        // Weight of one child at depth j+1 below a parent holding x, i.e. the
        // sum of down[j+1][y] over admissible y.
        let child_sum = |below: &[BigUint], j: usize, x: i32| -> BigUint {
            let rb = radius(j + 1);
            (-rb..=rb)
                .filter(|&y| mode.edge_ok(x, y))
                .map(|y| &below[(y + rb) as usize])
                .sum()
        };
        let ln_child_sum = |below: &[f64], j: usize, x: i32| -> f64 {
            let rb = radius(j + 1);
            log_sum_exp((-rb..=rb).filter(move |&y| mode.edge_ok(x, y)).map(move |y| below[(y + rb) as usize]))
        };

        let mut ln_down = vec![Vec::new(); h + 1];
        ln_down[h] = vec![0.0];
        for j in (0..h).rev() {
            let c = shape.children_at(j) as f64;
            let r = radius(j);
            ln_down[j] = (-r..=r).map(|x| c * ln_child_sum(&ln_down[j + 1], j, x)).collect();
        }
        let ln_total = log_sum_exp(ln_down[0].iter().copied());
        let mut ln_up = vec![Vec::new(); h + 1];
        ln_up[0] = vec![0.0; width(0)];
        for j in 1..=h {
            let (r, rp) = (radius(j), radius(j - 1));
            let sib = shape.children_at(j - 1) as f64 - 1.0;
            ln_up[j] = (-r..=r)
                .map(|y| {
                    log_sum_exp((-rp..=rp).filter(move |&x| mode.edge_ok(x, y)).map(|x| {
                        ln_up[j - 1][(x + rp) as usize] + sib * ln_child_sum(&ln_down[j], j - 1, x)
                    }))
                })
                .collect();
        }

        let (down, up, total) = if exact {
            let mut down = vec![Vec::new(); h + 1];
            down[h] = vec![BigUint::one()];
            for j in (0..h).rev() {
                let c = shape.children_at(j) as u32;
                let r = radius(j);
                down[j] = (-r..=r).map(|x| num_traits::pow(child_sum(&down[j + 1], j, x), c as usize)).collect();
            }
            let total: BigUint = down[0].iter().sum();
            let mut up = vec![Vec::new(); h + 1];
            up[0] = vec![BigUint::one(); width(0)];
            for j in 1..=h {
                let (r, rp) = (radius(j), radius(j - 1));
                let sib = shape.children_at(j - 1) - 1;
                let factor: Vec<BigUint> = (-rp..=rp)
                    .map(|x| &up[j - 1][(x + rp) as usize] * num_traits::pow(child_sum(&down[j], j - 1, x), sib))
                    .collect();
                up[j] = (-r..=r)
                    .map(|y| {
                        (-rp..=rp)
                            .filter(|&x| mode.edge_ok(x, y))
                            .map(|x| &factor[(x + rp) as usize])
                            .sum()
                    })
                    .collect();
            }
            debug_assert!(down.iter().enumerate().all(|(j, t)| t.len() == width(j)));
            (Some(down), Some(up), Some(total))
        } else {
            (None, None, None)
        };
        Ok(TreeDp { shape, mode, down, up, total, ln_down, ln_up, ln_total })
    }

    pub fn shape(&self) -> TreeShape {
        self.shape
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn height(&self) -> usize {
        self.shape.height
    }

    pub fn is_exact(&self) -> bool {
        self.total.is_some()
    }

    fn radius(&self, depth: usize) -> i32 {
        self.mode.slope() * (self.shape.height - depth) as i32
    }

    /// Values a depth-`depth` vertex can possibly take.
    pub fn support(&self, depth: usize) -> RangeInclusive<i32> {
        let r = self.radius(depth);
        -r..=r
    }

    fn index(&self, depth: usize, x: i32) -> Option<usize> {
        let r = self.radius(depth);
        (x.abs() <= r).then(|| (x + r) as usize)
    }

    /// Number of grounded functions on the tree.
    pub fn total(&self) -> Option<&BigUint> {
        self.total.as_ref()
    }

    pub fn ln_total(&self) -> f64 {
        self.ln_total
    }

    /// Grounded extensions of the subtree below a depth-`depth` vertex with
    /// value `x`.
    pub fn subtree_count(&self, depth: usize, x: i32) -> Option<BigUint> {
        let down = self.down.as_ref()?;
        Some(self.index(depth, x).map_or_else(BigUint::zero, |i| down[depth][i].clone()))
    }

    /// Number of grounded functions with `f(w) = x` for a fixed `w` at
    /// `depth`.
    pub fn weight(&self, depth: usize, x: i32) -> Option<BigUint> {
        let (down, up) = (self.down.as_ref()?, self.up.as_ref()?);
        Some(self.index(depth, x).map_or_else(BigUint::zero, |i| &down[depth][i] * &up[depth][i]))
    }

    pub fn ln_weight(&self, depth: usize, x: i32) -> f64 {
        self.index(depth, x)
            .map_or(f64::NEG_INFINITY, |i| self.ln_down[depth][i] + self.ln_up[depth][i])
    }

    /// `P(f(w) = x)` for `w` at `depth`.
    pub fn marginal(&self, depth: usize, x: i32) -> Option<BigRational> {
        let w = self.weight(depth, x)?;
        Some(BigRational::new(w.into(), self.total.clone()?.into()))
    }

    pub fn root_marginal(&self, x: i32) -> Option<BigRational> {
        self.marginal(0, x)
    }

    pub fn ln_marginal(&self, depth: usize, x: i32) -> f64 {
        self.ln_weight(depth, x) - self.ln_total
    }

    /// Number of grounded functions with `|f(w)| > threshold`, `w` at `depth`.
    pub fn tail_count(&self, depth: usize, threshold: i32) -> Option<BigUint> {
        let mut acc = BigUint::zero();
        for x in self.support(depth).filter(|x| x.abs() > threshold) {
            acc += self.weight(depth, x)?;
        }
        Some(acc)
    }

    /// `P(|f(w)| > threshold)` for `w` at `depth`.
    pub fn tail(&self, depth: usize, threshold: i32) -> Option<BigRational> {
        let c = self.tail_count(depth, threshold)?;
        Some(BigRational::new(c.into(), self.total.clone()?.into()))
    }

    pub fn ln_tail(&self, depth: usize, threshold: i32) -> f64 {
        log_sum_exp(
            self.support(depth)
                .filter(move |x| x.abs() > threshold)
                .map(|x| self.ln_weight(depth, x)),
        ) - self.ln_total
    }

    /// Largest relative gap between the log mirror and the exact tables.
    pub fn log_mirror_error(&self) -> Option<f64> {
        let down = self.down.as_ref()?;
        let up = self.up.as_ref()?;
        let mut worst: f64 = 0.0;
        let mut cmp = |exact: &BigUint, ln: f64| {
            let e = ln_big(exact);
            if e.is_finite() || ln.is_finite() {
                worst = worst.max((e - ln).abs() / e.abs().max(1.0));
            }
        };
        for j in 0..=self.shape.height {
            for i in 0..down[j].len() {
                cmp(&down[j][i], self.ln_down[j][i]);
                cmp(&up[j][i], self.ln_up[j][i]);
            }
        }
        cmp(self.total.as_ref()?, self.ln_total);
        Some(worst)
    }
}

/// Exact uniform draw of a grounded function.
///
/// The root value is drawn proportionally to subtree counts, then each child
/// in turn given its parent. Vertices follow the breadth-first numbering of
/// `gen_tree(d, h, glued)`; the returned function is pinned at the first
/// leaf (the glue vertex when `glued`).
pub fn tree_sample(dp: &TreeDp, seed: u64, glued: bool) -> Result<HeightFunction> {
    tree_sample_with(dp, &mut rng::seeded(seed), glued)
}

/// [`tree_sample`] drawing from a caller-supplied stream.
pub fn tree_sample_with(dp: &TreeDp, rng: &mut Rng, glued: bool) -> Result<HeightFunction> {
    let down = dp
        .down
        .as_ref()
        .ok_or_else(|| Error::Precondition("sampling needs the exact tables".into()))?;
    let shape = dp.shape;
    let h = shape.height;
    let leaves_start = shape.first_at(h);
    let n = if glued { leaves_start + 1 } else { leaves_start + shape.leaf_count() };
    let mut values = vec![0i32; n];

    let r0 = dp.radius(0);
    values[0] = pick_weighted(rng, &down[0]) as i32 - r0;
    for j in 0..h - 1 {
        let c = shape.children_at(j);
        let rb = dp.radius(j + 1);
        let (start, next) = (shape.first_at(j), shape.first_at(j + 1));
        for i in 0..shape.width(j) {
            let x = values[start + i];
            let ys: Vec<i32> = (-rb..=rb).filter(|&y| dp.mode.edge_ok(x, y)).collect();
            let ws: Vec<BigUint> = ys.iter().map(|&y| down[j + 1][(y + rb) as usize].clone()).collect();
            for r in 0..c {
                values[next + i * c + r] = ys[pick_weighted(rng, &ws)];
            }
        }
    }
    Ok(HeightFunction::new(values, leaves_start, dp.mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_tree;
    use crate::height::validate;

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn small_trees() {
        let dp = TreeDp::new(3, 1, Mode::Lipschitz(1)).unwrap();
        assert_eq!(dp.total().unwrap(), &BigUint::from(3u32));
        assert_eq!(dp.root_marginal(0).unwrap(), ratio(1, 3));

        let dp = TreeDp::new(3, 2, Mode::Lipschitz(1)).unwrap();
        assert_eq!(dp.total().unwrap(), &BigUint::from(45u32));
        assert_eq!(dp.root_marginal(0).unwrap(), ratio(27, 45));
        assert_eq!(dp.root_marginal(2).unwrap(), ratio(1, 45));

        let dp = TreeDp::new(3, 1, Mode::Homomorphism).unwrap();
        assert_eq!(dp.total().unwrap(), &BigUint::from(2u32));
        assert_eq!(dp.root_marginal(1).unwrap(), ratio(1, 2));
        assert_eq!(dp.root_marginal(0).unwrap(), ratio(0, 1));
    }

    #[test]
    fn marginals_sum_to_one_at_every_depth() {
        for mode in [Mode::Lipschitz(2), Mode::Homomorphism] {
            let dp = TreeDp::new(4, 3, mode).unwrap();
            for j in 0..=3 {
                let s: BigRational = dp.support(j).map(|x| dp.marginal(j, x).unwrap()).sum();
                assert_eq!(s, ratio(1, 1), "mode {mode} depth {j}");
            }
        }
    }

    #[test]
    fn hom_parity_support() {
        let dp = TreeDp::new(3, 4, Mode::Homomorphism).unwrap();
        for j in 0..=4 {
            for x in dp.support(j) {
                let nonzero = !dp.weight(j, x).unwrap().is_zero();
                if nonzero {
                    assert_eq!((x - (4 - j) as i32).rem_euclid(2), 0);
                }
            }
        }
    }

    #[test]
    fn log_mirror_matches() {
        let dp = TreeDp::new(56, 2, Mode::Lipschitz(1)).unwrap();
        assert!(dp.log_mirror_error().unwrap() < 1e-9);
        let lo = TreeDp::log_only(56, 2, Mode::Lipschitz(1)).unwrap();
        assert!(lo.total().is_none());
        assert_eq!(lo.ln_total(), dp.ln_total());
    }

    #[test]
    fn ln_big_large() {
        let x = num_traits::pow(BigUint::from(3u32), 5000);
        let want = 5000.0 * 3f64.ln();
        assert!((ln_big(&x) - want).abs() / want < 1e-12);
    }

    #[test]
    fn samples_are_grounded_and_valid() {
        let dp = TreeDp::new(3, 3, Mode::Lipschitz(1)).unwrap();
        for glued in [false, true] {
            let g = gen_tree(3, 3, glued).unwrap();
            for seed in 0..20 {
                let f = tree_sample(&dp, seed, glued).unwrap();
                assert!(validate(&g, &f).is_empty());
                for v in g.leaves().unwrap().iter() {
                    assert_eq!(f.value(v), 0);
                }
            }
        }
        let a = tree_sample(&dp, 7, false).unwrap();
        assert_eq!(a, tree_sample(&dp, 7, false).unwrap());
    }

    #[test]
    fn uniform_below_stays_in_range() {
        let mut rng = rng::seeded(1);
        let b = BigUint::from(5u32);
        let mut seen = [0; 5];
        for _ in 0..1000 {
            seen[uniform_below(&mut rng, &b).to_usize().unwrap()] += 1;
        }
        assert!(seen.iter().all(|&c| c > 150));
    }
}
