use std::collections::BTreeMap;

/// Empirical distribution of a sequence of observations.
pub fn empirical<K: Ord, I: IntoIterator<Item = K>>(items: I) -> BTreeMap<K, f64> {
    let mut counts: BTreeMap<K, u64> = BTreeMap::new();
    let mut n = 0u64;
    for k in items {
        *counts.entry(k).or_default() += 1;
        n += 1;
    }
    counts.into_iter().map(|(k, c)| (k, c as f64 / n as f64)).collect()
}

/// Total-variation distance between two distributions on the same keys.
pub fn tv_distance<K: Ord>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> f64 {
    let mut s: f64 = p.iter().map(|(k, a)| (a - q.get(k).copied().unwrap_or(0.0)).abs()).sum();
    s += q.iter().filter(|(k, _)| !p.contains_key(k)).map(|(_, b)| b.abs()).sum::<f64>();
    s / 2.0
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, v)
}

/// Split potential scale reduction factor over several chains of one scalar
/// statistic. Values near 1 indicate agreement between chain halves; `NaN`
/// if the halves hold fewer than two draws.
pub fn split_rhat(chains: &[Vec<f64>]) -> f64 {
    let half = chains.iter().map(|c| c.len() / 2).min().unwrap_or(0);
    if half < 2 || chains.is_empty() {
        return f64::NAN;
    }
    let parts: Vec<(f64, f64)> = chains
        .iter()
        .flat_map(|c| [mean_var(&c[..half]), mean_var(&c[c.len() - half..])])
        .collect();
    let m = parts.len() as f64;
    let n = half as f64;
    let grand = parts.iter().map(|p| p.0).sum::<f64>() / m;
    let b = n / (m - 1.0) * parts.iter().map(|p| (p.0 - grand).powi(2)).sum::<f64>();
    let w = parts.iter().map(|p| p.1).sum::<f64>() / m;
    if w == 0.0 {
        return if b == 0.0 { 1.0 } else { f64::INFINITY };
    }
    (((n - 1.0) / n * w + b / n) / w).sqrt()
}
