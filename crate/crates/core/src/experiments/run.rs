use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::bounds::{format_ratio, ln_ratio, ratio_le_exp_neg, ratio_to_f64};
use super::config::{ExperimentConfig, Kind, LambdaSource, SamplerKind};
use super::report::{Bound, ExperimentResult, Row};
use crate::error::{Error, Result};
use crate::expansion::{self, ExpansionMode, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::graph::{ball, Graph, TreeShape};
use crate::height::{self, deviation, HeightFunction, Mode};
use crate::par;
use crate::samplers::{enumerate, run_chains, split_rhat, McmcParams, TreeDp};

/// Largest tree (in leaves) for which exact big-integer tables are kept.
const EXACT_TREE_LEAVES: usize = 2_000_000;
/// Targets picked by default on graphs too large to report every vertex.
const DEFAULT_TARGETS: usize = 16;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let g = cfg.graph.load(cfg.graph_seed.unwrap_or(cfg.seed))?;
    if cfg.v0 >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: cfg.v0, n: g.n() });
    }
    let mut meta = BTreeMap::new();
    meta.insert("n".to_string(), g.n().to_string());
    let rows = match cfg.kind {
        Kind::Deviation | Kind::HomExact => deviation_rows(cfg, &g, &mut meta)?,
        Kind::Max => max_rows(cfg, &g, &mut meta)?,
        Kind::Tree => tree_rows(cfg, &mut meta)?,
    };
    check_monotone(&rows)?;
    meta.insert("monotone".to_string(), "true".to_string());
    Ok(ExperimentResult { config_hash: cfg.hash(), rows, meta })
}

/// The tail at a fixed vertex must not increase with `t`: the events are
/// nested.
fn check_monotone(rows: &[Row]) -> Result<()> {
    let mut last: BTreeMap<&str, (i64, f64)> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.vertex.parse::<usize>().is_ok()) {
        if let Some(&(t, est)) = last.get(r.vertex.as_str()) {
            if r.t > t && r.estimate > est {
                return Err(Error::Invariant(format!(
                    "tail at vertex {} increases from {est} (t={t}) to {} (t={})",
                    r.vertex, r.estimate, r.t
                )));
            }
        }
        last.insert(&r.vertex, (r.t, r.estimate));
    }
    Ok(())
}

fn resolve_lambda(source: LambdaSource, g: &Graph, mode: ExpansionMode) -> Result<f64> {
    match source {
        LambdaSource::Spectral => {
            let l = expansion::spectral_lambda(g, mode, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
            Ok(l + DEFAULT_TOL * l.max(1.0))
        }
        LambdaSource::Exhaustive => Ok(expansion::exhaustive_lambda(g, mode)?.lambda),
        LambdaSource::Explicit(x) => Ok(x),
    }
}

fn targets(cfg: &ExperimentConfig, g: &Graph) -> Result<Vec<usize>> {
    let vs = match &cfg.vertices {
        Some(v) => v.clone(),
        None if g.n() <= 4 * DEFAULT_TARGETS => (0..g.n()).collect(),
        None => (0..DEFAULT_TARGETS).collect(),
    };
    if let Some(&v) = vs.iter().find(|&&v| v >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(vs)
}

/// Per-sample work shared by the exact and MCMC paths: deviation of each
/// target from the phase.
fn deviations(g: &Graph, f: &HeightFunction, lambda: f64, targets: &[usize]) -> Result<Vec<u32>> {
    let p = height::phase(g, f, lambda)?;
    Ok(targets.iter().map(|&v| deviation(f, v, &p)).collect())
}

struct Tally {
    /// `hist[i][x]`: samples with deviation `x` at target `i`.
    hist: Vec<Vec<u64>>,
    dev_series: Vec<f64>,
    max_series: Vec<f64>,
    error: Option<Error>,
}

impl Tally {
    fn new(k: usize) -> Self {
        Tally { hist: vec![Vec::new(); k], dev_series: Vec::new(), max_series: Vec::new(), error: None }
    }

    fn add(&mut self, devs: &[u32]) {
        for (h, &x) in self.hist.iter_mut().zip(devs) {
            if h.len() <= x as usize {
                h.resize(x as usize + 1, 0);
            }
            h[x as usize] += 1;
        }
    }

    fn tail(&self, i: usize, above: u32) -> u64 {
        self.hist[i].iter().skip(above as usize + 1).sum()
    }

    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.hist.iter_mut().zip(&other.hist) {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }
}

fn mcmc_params(cfg: &ExperimentConfig, n: usize) -> McmcParams {
    McmcParams { burnin: cfg.burnin.resolve(n), thin: cfg.thin.resolve(n), n_samples: cfg.samples }
}

fn deviation_rows(cfg: &ExperimentConfig, g: &Graph, meta: &mut BTreeMap<String, String>) -> Result<Vec<Row>> {
    let d = g.degree().ok_or(Error::NotRegular)?;
    let emode = cfg.expansion_mode();
    let n_norm = match cfg.mode {
        Mode::Lipschitz(_) => g.n(),
        Mode::Homomorphism => g.bipartition().ok_or(Error::MissingBipartition)?.class(0).len(),
    };
    let lambda = resolve_lambda(cfg.lambda_source(), g, emode)?;
    let good = expansion::goodness(d, lambda, Some(cfg.mode.slope() as u32));
    let (pred_name, pred) = match cfg.mode {
        Mode::Lipschitz(m) => (format!("M-good({m})"), good.m_good.unwrap_or(false)),
        Mode::Homomorphism => ("good-bi".to_string(), good.good_bi),
    };
    meta.insert("lambda".into(), format!("{lambda:?}"));
    meta.insert("lambda_source".into(), cfg.lambda_source().to_string());
    meta.insert(pred_name.clone(), pred.to_string());
    if let Some(th) = good.m_good_threshold.filter(|_| matches!(cfg.mode, Mode::Lipschitz(_))) {
        meta.insert("M-good_threshold".into(), format!("{th:?}"));
    }
    meta.insert("good-bi_threshold".into(), format!("{:?}", good.good_bi_threshold));
    if !pred && (cfg.assert_hypotheses || cfg.kind == Kind::HomExact) {
        return Err(Error::HypothesesNotMet(format!("{pred_name} fails for lambda = {lambda}")));
    }

    let targets = targets(cfg, g)?;
    let ts: Vec<u32> = match &cfg.t {
        Some(t) => t.clone(),
        None => {
            let diam = expansion::diameter_bound(lambda, emode, d, n_norm)
                .map(|b| b.ceil() as u32)
                .or_else(|| g.diameter().map(|x| x as u32))
                .unwrap_or(1);
            (1..=diam.max(1)).collect()
        }
    };
    meta.insert("t".into(), ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","));
    let slope = cfg.mode.slope() as u32;
    // Deviation strictly above this is the event at `t`.
    let above = |t: u32| match cfg.mode {
        Mode::Lipschitz(_) => (t - 1) * slope,
        Mode::Homomorphism => t,
    };

    let sampler = if cfg.kind == Kind::HomExact { SamplerKind::Exact } else { cfg.sampler };
    let (tally, total) = match sampler {
        SamplerKind::Exact => {
            let family = enumerate(g, cfg.v0, cfg.mode, cfg.cap)?.functions;
            let devs = par::map(&family, |f| deviations(g, f, lambda, &targets));
            let mut tally = Tally::new(targets.len());
            for d in devs {
                tally.add(&d?);
            }
            (tally, family.len() as u64)
        }
        SamplerKind::Mcmc => {
            let params = mcmc_params(cfg, g.n());
            let mut chains = run_chains(
                g,
                cfg.v0,
                cfg.mode,
                params,
                cfg.seed,
                cfg.chains,
                |_| Tally::new(targets.len()),
                |acc: &mut Tally, f| {
                    if acc.error.is_some() {
                        return;
                    }
                    match deviations(g, f, lambda, &targets) {
                        Ok(devs) => {
                            acc.dev_series.push(devs[0] as f64);
                            acc.max_series.push(f.max_abs() as f64);
                            acc.add(&devs);
                        }
                        Err(e) => acc.error = Some(e),
                    }
                },
            )?;
            let mut tally = Tally::new(targets.len());
            for c in &mut chains {
                if let Some(e) = c.error.take() {
                    return Err(e);
                }
                tally.merge(c);
            }
            let dev: Vec<Vec<f64>> = chains.iter().map(|c| c.dev_series.clone()).collect();
            let mx: Vec<Vec<f64>> = chains.iter().map(|c| c.max_series.clone()).collect();
            meta.insert("rhat_deviation".into(), format!("{:?}", split_rhat(&dev)));
            meta.insert("rhat_max_abs".into(), format!("{:?}", split_rhat(&mx)));
            meta.insert("burnin_steps".into(), params.burnin.to_string());
            meta.insert("thin_steps".into(), params.thin.to_string());
            (tally, (cfg.chains * cfg.samples) as u64)
        }
    };

    let mut rows = Vec::new();
    let bound_den: u32 = match cfg.mode {
        Mode::Lipschitz(m) => 5 * (m + 1),
        Mode::Homomorphism => 3,
    };
    for (i, &v) in targets.iter().enumerate() {
        for &t in &ts {
            let count = tally.tail(i, above(t));
            let ball_size = ball(g, v, t as usize).len();
            let ln_bound = -(ball_size as f64) / bound_den as f64;
            let (p, q) = (BigUint::from(count), BigUint::from(total));
            let estimate = ratio_to_f64(&p, &q);
            let exact = (sampler == SamplerKind::Exact).then(|| format_ratio(&p, &q));
            let (bound, holds) = if pred {
                let holds = if sampler == SamplerKind::Exact {
                    ratio_le_exp_neg(&p, &q, &BigUint::from(ball_size), bound_den)
                        .unwrap_or(ln_ratio(&p, &q) <= ln_bound)
                } else {
                    estimate <= ln_bound.exp()
                };
                (Bound::Value(ln_bound.exp()), Some(holds))
            } else {
                (Bound::NotMet, None)
            };
            let note = if cfg.mode == Mode::Homomorphism && t == 1 { "t=1" } else { "" };
            rows.push(Row {
                vertex: v.to_string(),
                t: t as i64,
                estimate,
                exact,
                bound,
                ball_size: Some(ball_size),
                n_samples: total,
                seed: cfg.seed,
                ln_estimate: ln_ratio(&p, &q),
                ln_bound: pred.then_some(ln_bound),
                holds,
                note: note.into(),
            });
        }
    }
    Ok(rows)
}

fn quantile(sorted: &[i32], q: f64) -> i32 {
    let idx = ((sorted.len() as f64 - 1.0) * q).round() as usize;
    sorted[idx.min(sorted.len() - 1)]
}

fn max_rows(cfg: &ExperimentConfig, g: &Graph, meta: &mut BTreeMap<String, String>) -> Result<Vec<Row>> {
    let (max_f, max_abs, exact): (Vec<i32>, Vec<i32>, bool) = match cfg.sampler {
        SamplerKind::Exact => {
            let family = enumerate(g, cfg.v0, cfg.mode, cfg.cap)?.functions;
            (family.iter().map(|f| f.max()).collect(), family.iter().map(|f| f.max_abs()).collect(), true)
        }
        SamplerKind::Mcmc => {
            let params = mcmc_params(cfg, g.n());
            let chains = run_chains(
                g,
                cfg.v0,
                cfg.mode,
                params,
                cfg.seed,
                cfg.chains,
                |_| (Vec::new(), Vec::new()),
                |acc: &mut (Vec<i32>, Vec<i32>), f| {
                    acc.0.push(f.max());
                    acc.1.push(f.max_abs());
                },
            )?;
            let series: Vec<Vec<f64>> = chains.iter().map(|c| c.1.iter().map(|&x| x as f64).collect()).collect();
            meta.insert("rhat_max_abs".into(), format!("{:?}", split_rhat(&series)));
            let (a, b): (Vec<_>, Vec<_>) = chains.into_iter().unzip();
            (a.concat(), b.concat(), false)
        }
    };
    let total = max_f.len() as u64;
    let loglog = (g.n() as f64).ln().ln();
    meta.insert("loglog_n".into(), format!("{loglog:?}"));
    let mut rows = Vec::new();
    for (name, values) in [("max_f", max_f), ("max_abs_f", max_abs)] {
        let mut sorted = values.clone();
        sorted.sort_unstable();
        let mean = sorted.iter().map(|&x| x as f64).sum::<f64>() / sorted.len().max(1) as f64;
        let note = if sorted.is_empty() {
            String::new()
        } else {
            format!(
                "loglog_n={loglog:?};mean={mean:?};q50={};q90={};q99={};ratio={:?}",
                quantile(&sorted, 0.5),
                quantile(&sorted, 0.9),
                quantile(&sorted, 0.99),
                mean / (cfg.mode.slope() as f64 * loglog)
            )
        };
        let mut counts: BTreeMap<i32, u64> = BTreeMap::new();
        for x in &sorted {
            *counts.entry(*x).or_default() += 1;
        }
        for (i, (x, c)) in counts.into_iter().enumerate() {
            let (p, q) = (BigUint::from(c), BigUint::from(total));
            rows.push(Row {
                vertex: name.into(),
                t: x as i64,
                estimate: ratio_to_f64(&p, &q),
                exact: exact.then(|| format_ratio(&p, &q)),
                bound: Bound::None,
                ball_size: None,
                n_samples: total,
                seed: cfg.seed,
                ln_estimate: ln_ratio(&p, &q),
                ln_bound: None,
                holds: None,
                note: if i == 0 { note.clone() } else { String::new() },
            });
        }
    }
    Ok(rows)
}

/// `|B(w, t)|` in the un-glued tree for `w` at `depth`.
pub fn tree_ball_size(shape: TreeShape, depth: usize, t: usize) -> u128 {
    let h = shape.height;
    let branch = (shape.arity - 1) as u128;
    let down = |from_depth: usize, first: u128, steps: usize| -> u128 {
        if steps == 0 {
            1
        } else if from_depth + steps > h {
            0
        } else {
            first * branch.pow(steps as u32 - 1)
        }
    };
    let mut total = 0u128;
    for r in 0..=t {
        total += down(depth, shape.children_at(depth.min(h.saturating_sub(1))) as u128, r);
        for i in 1..=r.min(depth) {
            let anc = depth - i;
            let others = shape.children_at(anc) as u128 - 1;
            total += if r == i { 1 } else { down(anc, others, r - i) };
        }
    }
    total
}

fn tree_rows(cfg: &ExperimentConfig, meta: &mut BTreeMap<String, String>) -> Result<Vec<Row>> {
    let super::config::GraphSource::Tree { d, h } = cfg.graph else {
        return Err(Error::InvalidParameters("kind tree needs graph = tree:d:h".into()));
    };
    let shape = TreeShape { arity: d, height: h, glued: false };
    let dp = if shape.leaf_count() <= EXACT_TREE_LEAVES {
        TreeDp::new(d, h, cfg.mode)?
    } else {
        TreeDp::log_only(d, h, cfg.mode)?
    };
    meta.insert("exact".into(), dp.is_exact().to_string());
    if let Some(err) = dp.log_mirror_error() {
        meta.insert("log_mirror_error".into(), format!("{err:?}"));
    }
    let m = cfg.mode.slope() as u32;
    let hyp = match cfg.mode {
        Mode::Lipschitz(m) => d as f64 > 40.0 * (m + 1) as f64 * ((m + 1) as f64).ln(),
        Mode::Homomorphism => false,
    };
    meta.insert("tree_hypothesis".into(), hyp.to_string());
    if !hyp && cfg.assert_hypotheses {
        return Err(Error::HypothesesNotMet(format!("d = {d} does not exceed 40(M+1)log(M+1)")));
    }
    let depths: Vec<usize> = match &cfg.vertices {
        None => (0..h).collect(),
        Some(vs) => {
            let glued = TreeShape { glued: true, ..shape };
            vs.iter().map(|&v| glued.depth_of(v)).filter(|&j| j < h).collect()
        }
    };
    let ts: Vec<u32> = cfg.t.clone().unwrap_or_else(|| (1..=h as u32).collect());
    let b = 5 * (m + 1);
    let mut rows = Vec::new();
    for &j in &depths {
        let dist = (h - j) as u32;
        for &t in &ts {
            if dist < t {
                continue;
            }
            let above = ((t - 1) * m) as i32;
            let (estimate, exact, ln_estimate, counts) = match (dp.tail_count(j, above), dp.total()) {
                (Some(p), Some(q)) => (ratio_to_f64(&p, q), Some(format_ratio(&p, q)), ln_ratio(&p, q), Some((p, q.clone()))),
                _ => {
                    let ln = dp.ln_tail(j, above);
                    (ln.exp(), None, ln, None)
                }
            };
            let a = BigUint::from(d) * num_traits::pow(BigUint::from(d - 1), t as usize - 1);
            let ln_bound = -(d as f64) * ((d - 1) as f64).powi(t as i32 - 1) / b as f64;
            let (bound, holds, note) = if dist == t {
                (Bound::None, None, "dist(v,V_L)=t: not checked".to_string())
            } else if !hyp {
                (Bound::NotMet, None, String::new())
            } else {
                let holds = match &counts {
                    Some((p, q)) => ratio_le_exp_neg(p, q, &a, b).unwrap_or(ln_estimate <= ln_bound),
                    None => ln_estimate + 1e-9 * ln_estimate.abs() <= ln_bound,
                };
                (Bound::Value(ln_bound.exp()), Some(holds), String::new())
            };
            rows.push(Row {
                vertex: shape.first_at(j).to_string(),
                t: t as i64,
                estimate,
                exact,
                bound,
                ball_size: usize::try_from(tree_ball_size(shape, j, t as usize)).ok(),
                n_samples: 0,
                seed: cfg.seed,
                ln_estimate,
                ln_bound: matches!(bound, Bound::Value(_)).then_some(ln_bound),
                holds,
                note,
            });
        }
    }
    Ok(rows)
}
