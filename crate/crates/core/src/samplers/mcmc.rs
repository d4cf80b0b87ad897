use std::collections::HashMap;

use num_rational::Ratio;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::height::{HeightFunction, Mode};
use crate::par;
use crate::rng::{self, Rng};

/// Current state of one Glauber chain.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub f: HeightFunction,
    pub steps: u64,
    pub seed: u64,
    pub stream: u64,
    rng: Rng,
}

impl ChainState {
    pub fn new(f: HeightFunction, seed: u64, stream: u64) -> Self {
        ChainState { f, steps: 0, seed, stream, rng: rng::stream(seed, stream) }
    }

    /// Position within the RNG stream, in 32-bit words.
    pub fn rng_position(&self) -> u128 {
        self.rng.get_word_pos()
    }
}

/// Minimal-oscillation state: zero for Lipschitz, `0/1` by colour class for
/// homomorphisms.
pub fn initial_state(g: &Graph, v0: usize, mode: Mode) -> Result<HeightFunction> {
    let n = g.n();
    match mode {
        Mode::Lipschitz(_) => Ok(HeightFunction::zero(n, v0, mode)),
        Mode::Homomorphism => {
            let coloured;
            let bp = match g.bipartition() {
                Some(bp) => bp,
                None => {
                    coloured = g.with_bipartition()?;
                    coloured.bipartition().expect("just coloured")
                }
            };
            let s0 = bp.side(v0);
            Ok(HeightFunction::new((0..n).map(|v| (bp.side(v) ^ s0) as i32).collect(), v0, mode))
        }
    }
}

/// Values `v` may take given its neighbours, in increasing order.
pub fn allowed_values(g: &Graph, f: &HeightFunction, v: usize) -> Vec<i32> {
    let nb = g.neighbors(v);
    match f.mode() {
        Mode::Lipschitz(m) => {
            let m = m as i32;
            let lo = nb.iter().map(|&u| f.value(u) - m).max().unwrap_or(i32::MIN);
            let hi = nb.iter().map(|&u| f.value(u) + m).min().unwrap_or(i32::MAX);
            (lo..=hi).collect()
        }
        Mode::Homomorphism => {
            let Some(&first) = nb.first() else { return Vec::new() };
            let a = f.value(first);
            [a - 1, a + 1]
                .into_iter()
                .filter(|&x| nb.iter().all(|&u| (f.value(u) - x).abs() == 1))
                .collect()
        }
    }
}

/// One heat-bath update: a uniform vertex other than the root is resampled
/// uniformly from its allowed set.
pub fn glauber_step(g: &Graph, state: &mut ChainState) -> Result<()> {
    let n = g.n();
    let v0 = state.f.root();
    state.steps += 1;
    if n < 2 {
        return Ok(());
    }
    let r = state.rng.random_range(0..n - 1);
    let v = if r >= v0 { r + 1 } else { r };
    let f = &mut state.f;
    let nb = g.neighbors(v);
    let x = match f.mode() {
        Mode::Lipschitz(m) => {
            let m = m as i32;
            let lo = nb.iter().map(|&u| f.value(u) - m).max().unwrap_or(i32::MIN);
            let hi = nb.iter().map(|&u| f.value(u) + m).min().unwrap_or(i32::MAX);
            if lo > hi {
                return Err(Error::Invariant(format!("empty allowed set at vertex {v}")));
            }
            state.rng.random_range(lo..=hi)
        }
        Mode::Homomorphism => {
            let allowed = allowed_values(g, f, v);
            match allowed.len() {
                0 => return Err(Error::Invariant(format!("empty allowed set at vertex {v}"))),
                1 => allowed[0],
                _ => allowed[state.rng.random_range(0..allowed.len())],
            }
        }
    };
    f.set(v, x);
    Ok(())
}

/// Burn-in, thinning and sample count, all in single-site steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McmcParams {
    pub burnin: u64,
    pub thin: u64,
    pub n_samples: usize,
}

impl Default for McmcParams {
    fn default() -> Self {
        McmcParams { burnin: 10_000, thin: 10, n_samples: 1000 }
    }
}

/// Runs one chain on stream `stream` of `seed`, handing each recorded state
/// to `observe`.
pub fn run_chain<F>(g: &Graph, v0: usize, mode: Mode, params: McmcParams, seed: u64, stream: u64, mut observe: F) -> Result<()>
where
    F: FnMut(&HeightFunction),
{
    if params.thin == 0 {
        return Err(Error::InvalidParameters("thin must be positive".into()));
    }
    if v0 >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v0, n: g.n() });
    }
    let mut state = ChainState::new(initial_state(g, v0, mode)?, seed, stream);
    for _ in 0..params.burnin {
        glauber_step(g, &mut state)?;
    }
    for _ in 0..params.n_samples {
        for _ in 0..params.thin {
            glauber_step(g, &mut state)?;
        }
        observe(&state.f);
    }
    Ok(())
}

/// Samples from a single chain (stream 0).
pub fn mcmc_sample(g: &Graph, v0: usize, mode: Mode, params: McmcParams, seed: u64) -> Result<Vec<HeightFunction>> {
    let mut out = Vec::with_capacity(params.n_samples);
    run_chain(g, v0, mode, params, seed, 0, |f| out.push(f.clone()))?;
    Ok(out)
}

/// Runs `chains` independent chains (streams `0..chains`), possibly in
/// parallel, reducing each with its own observer. Results are in chain order.
#[allow(clippy::too_many_arguments)]
pub fn run_chains<T, I, F>(
    g: &Graph,
    v0: usize,
    mode: Mode,
    params: McmcParams,
    seed: u64,
    chains: usize,
    init: I,
    observe: F,
) -> Result<Vec<T>>
where
    T: Send,
    I: Fn(usize) -> T + Sync + Send,
    F: Fn(&mut T, &HeightFunction) + Sync + Send,
{
    par::map_range(chains, |c| {
        let mut acc = init(c);
        run_chain(g, v0, mode, params, seed, c as u64, |f| observe(&mut acc, f))?;
        Ok(acc)
    })
    .into_iter()
    .collect()
}

/// Exact one-step probability of moving from `from` to `to`, or `None` if
/// `to` is unreachable in one step. Self-transitions are not summarised.
pub fn transition_probability(g: &Graph, from: &HeightFunction, to: &HeightFunction) -> Option<Ratio<u64>> {
    let diff: Vec<usize> = (0..g.n()).filter(|&v| from.value(v) != to.value(v)).collect();
    let [v] = diff[..] else { return None };
    if v == from.root() {
        return None;
    }
    let allowed = allowed_values(g, from, v);
    allowed
        .contains(&to.value(v))
        .then(|| Ratio::new(1, (g.n() as u64 - 1) * allowed.len() as u64))
}

/// Whether the single-site move graph on `family` is connected.
pub fn transition_graph_connected(g: &Graph, family: &[HeightFunction]) -> bool {
    if family.is_empty() {
        return true;
    }
    let index: HashMap<&[i32], usize> = family.iter().enumerate().map(|(i, f)| (f.values(), i)).collect();
    let mut seen = vec![false; family.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        let f = &family[i];
        for v in (0..g.n()).filter(|&v| v != f.root()) {
            for x in allowed_values(g, f, v) {
                let mut h = f.values().to_vec();
                h[v] = x;
                if let Some(&j) = index.get(h.as_slice()) {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}
