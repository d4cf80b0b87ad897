use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::expansion::ExpansionMode;
use crate::graph::{self, Graph, RandomRegularOptions};
use crate::height::Mode;

fn bad(key: &str, value: &str) -> Error {
    Error::InvalidParameters(format!("invalid value for {key}: {value:?}"))
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| bad(key, value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Deviation,
    Max,
    Tree,
    HomExact,
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deviation" => Ok(Kind::Deviation),
            "max" => Ok(Kind::Max),
            "tree" => Ok(Kind::Tree),
            "hom-exact" => Ok(Kind::HomExact),
            _ => Err(bad("kind", s)),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Deviation => "deviation",
            Kind::Max => "max",
            Kind::Tree => "tree",
            Kind::HomExact => "hom-exact",
        })
    }
}

/// Where the graph comes from: `random-regular:n:d`,
/// `random-bipartite:n:d`, `complete:n`, `complete-bipartite:m`,
/// `cycle:n`, `hypercube:dim`, `petersen`, `tree:d:h` or `file:path`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    RandomRegular { n: usize, d: usize },
    RandomBipartite { n: usize, d: usize },
    Complete(usize),
    CompleteBipartite(usize),
    Cycle(usize),
    Hypercube(usize),
    Petersen,
    /// Glued complete tree `T_h^d`, pinned at the glue vertex.
    Tree { d: usize, h: usize },
    File(PathBuf),
}

impl FromStr for GraphSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let n = |i: usize| -> Result<usize> { parts.get(i).ok_or_else(|| bad("graph", s)).and_then(|p| num("graph", p)) };
        match (parts[0], parts.len()) {
            ("random-regular", 3) => Ok(GraphSource::RandomRegular { n: n(1)?, d: n(2)? }),
            ("random-bipartite", 3) => Ok(GraphSource::RandomBipartite { n: n(1)?, d: n(2)? }),
            ("complete", 2) => Ok(GraphSource::Complete(n(1)?)),
            ("complete-bipartite", 2) => Ok(GraphSource::CompleteBipartite(n(1)?)),
            ("cycle", 2) => Ok(GraphSource::Cycle(n(1)?)),
            ("hypercube", 2) => Ok(GraphSource::Hypercube(n(1)?)),
            ("petersen", 1) => Ok(GraphSource::Petersen),
            ("tree", 3) => Ok(GraphSource::Tree { d: n(1)?, h: n(2)? }),
            ("file", _) => Ok(GraphSource::File(PathBuf::from(&s[5..]))),
            _ => Err(bad("graph", s)),
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::RandomRegular { n, d } => write!(f, "random-regular:{n}:{d}"),
            GraphSource::RandomBipartite { n, d } => write!(f, "random-bipartite:{n}:{d}"),
            GraphSource::Complete(n) => write!(f, "complete:{n}"),
            GraphSource::CompleteBipartite(m) => write!(f, "complete-bipartite:{m}"),
            GraphSource::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSource::Hypercube(k) => write!(f, "hypercube:{k}"),
            GraphSource::Petersen => write!(f, "petersen"),
            GraphSource::Tree { d, h } => write!(f, "tree:{d}:{h}"),
            GraphSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl GraphSource {
    pub fn load(&self, seed: u64) -> Result<Graph> {
        let opts = RandomRegularOptions::default();
        match self {
            GraphSource::RandomRegular { n, d } => graph::gen_random_regular(*n, *d, seed, opts),
            GraphSource::RandomBipartite { n, d } => graph::gen_random_bipartite_regular(*n, *d, seed, opts),
            GraphSource::Complete(n) => Ok(graph::complete_graph(*n)),
            GraphSource::CompleteBipartite(m) => Ok(graph::complete_bipartite(*m)),
            GraphSource::Cycle(n) => Ok(graph::cycle(*n)),
            GraphSource::Hypercube(k) => Ok(graph::hypercube(*k)),
            GraphSource::Petersen => Ok(graph::petersen()),
            GraphSource::Tree { d, h } => graph::gen_tree(*d, *h, true),
            GraphSource::File(p) => graph::read_graph(p),
        }
    }
}

/// Step count, either absolute or in sweeps of `n` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Steps {
    Steps(u64),
    Sweeps(u64),
}

impl Steps {
    pub fn resolve(self, n: usize) -> u64 {
        match self {
            Steps::Steps(s) => s,
            Steps::Sweeps(s) => s * n as u64,
        }
    }

    fn parse(key: &str, s: &str) -> Result<Self> {
        match s.strip_suffix("sweeps") {
            Some(k) => Ok(Steps::Sweeps(num(key, k)?)),
            None => Ok(Steps::Steps(num(key, s)?)),
        }
    }
}

impl fmt::Display for Steps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Steps::Steps(s) => write!(f, "{s}"),
            Steps::Sweeps(s) => write!(f, "{s}sweeps"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    Exact,
    Mcmc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaSource {
    /// Spectral value plus its tolerance.
    Spectral,
    Exhaustive,
    Explicit(f64),
}

impl fmt::Display for LambdaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSource::Spectral => f.write_str("spectral"),
            LambdaSource::Exhaustive => f.write_str("exhaustive"),
            LambdaSource::Explicit(x) => write!(f, "{x}"),
        }
    }
}

/// Comma-separated list, `a..b` range (inclusive), or `auto`.
fn parse_list<T: FromStr + Copy + std::ops::Add<Output = T> + PartialOrd + From<u8>>(
    key: &str,
    s: &str,
) -> Result<Option<Vec<T>>> {
    if s == "auto" || s == "all" {
        return Ok(None);
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let (mut a, b): (T, T) = (num(key, a)?, num(key, b)?);
            while a <= b {
                out.push(a);
                a = a + T::from(1);
            }
        } else {
            out.push(num(key, part)?);
        }
    }
    if out.is_empty() {
        return Err(bad(key, s));
    }
    Ok(Some(out))
}

fn format_list<T: fmt::Display>(xs: &Option<Vec<T>>) -> String {
    match xs {
        None => "auto".into(),
        Some(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
    }
}

/// Report format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" => Ok(Format::Jsonl),
            _ => Err(bad("format", s)),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        })
    }
}

/// Experiment description, parsed from `key = value` lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub graph: GraphSource,
    /// Seed for random graph generators; defaults to `seed`.
    pub graph_seed: Option<u64>,
    pub mode: Mode,
    pub v0: usize,
    /// Target vertices; `None` picks a default per kind.
    pub vertices: Option<Vec<usize>>,
    /// Values of `t`; `None` picks a default per kind.
    pub t: Option<Vec<u32>>,
    pub sampler: SamplerKind,
    pub burnin: Steps,
    pub thin: Steps,
    /// Recorded samples per chain.
    pub samples: usize,
    pub chains: usize,
    /// `None` picks a default per kind.
    pub lambda: Option<LambdaSource>,
    pub seed: u64,
    pub cap: usize,
    /// Fail instead of reporting when the goodness hypotheses do not hold.
    pub assert_hypotheses: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: Kind::Deviation,
            graph: GraphSource::Complete(4),
            graph_seed: None,
            mode: Mode::Lipschitz(1),
            v0: 0,
            vertices: None,
            t: None,
            sampler: SamplerKind::Exact,
            burnin: Steps::Steps(10_000),
            thin: Steps::Steps(10),
            samples: 1000,
            chains: 4,
            lambda: None,
            seed: 0,
            cap: 1_000_000,
            assert_hypotheses: false,
            out: None,
            format: Format::Csv,
        }
    }
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut m_value: Option<u32> = None;
        let mut hom = false;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key = value, got {line:?}") })?;
            cfg.set(key.trim(), value.trim(), &mut m_value, &mut hom)?;
        }
        if hom {
            cfg.mode = Mode::Homomorphism;
        } else if let Some(m) = m_value {
            cfg.mode = Mode::Lipschitz(m);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str, m: &mut Option<u32>, hom: &mut bool) -> Result<()> {
        match key {
            "kind" => self.kind = value.parse()?,
            "graph" => self.graph = value.parse()?,
            "graph_seed" => self.graph_seed = Some(num(key, value)?),
            "mode" => match value {
                "lipschitz" => *hom = false,
                "hom" | "homomorphism" => *hom = true,
                _ => return Err(bad(key, value)),
            },
            "m" | "M" => *m = Some(num(key, value)?),
            "v0" => self.v0 = num(key, value)?,
            "vertices" => self.vertices = parse_list(key, value)?,
            "t" => self.t = parse_list(key, value)?,
            "sampler" => {
                self.sampler = match value {
                    "exact" => SamplerKind::Exact,
                    "mcmc" => SamplerKind::Mcmc,
                    _ => return Err(bad(key, value)),
                }
            }
            "burnin" => self.burnin = Steps::parse(key, value)?,
            "thin" => self.thin = Steps::parse(key, value)?,
            "samples" => self.samples = num(key, value)?,
            "chains" => self.chains = num(key, value)?,
            "lambda" => {
                self.lambda = Some(match value {
                    "auto" => return Ok(()),
                    "spectral" => LambdaSource::Spectral,
                    "exhaustive" => LambdaSource::Exhaustive,
                    x => LambdaSource::Explicit(num(key, x)?),
                })
            }
            "seed" => self.seed = num(key, value)?,
            "cap" => self.cap = num(key, value)?,
            "assert" | "assert_hypotheses" => self.assert_hypotheses = num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            _ => return Err(Error::InvalidParameters(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if let Mode::Lipschitz(0) = self.mode {
            return Err(bad("m", "0"));
        }
        if self.sampler == SamplerKind::Mcmc && matches!(self.kind, Kind::Tree | Kind::HomExact) {
            return Err(Error::InvalidParameters(format!("sampler mcmc does not apply to kind {}", self.kind)));
        }
        if self.kind == Kind::Tree && !matches!(self.graph, GraphSource::Tree { .. }) {
            return Err(Error::InvalidParameters("kind tree needs graph = tree:d:h".into()));
        }
        if self.kind == Kind::HomExact && self.mode != Mode::Homomorphism {
            return Err(Error::InvalidParameters("kind hom-exact needs mode = hom".into()));
        }
        if self.sampler == SamplerKind::Mcmc && (self.samples == 0 || self.chains == 0) {
            return Err(Error::InvalidParameters("samples and chains must be positive".into()));
        }
        if matches!(self.thin, Steps::Steps(0) | Steps::Sweeps(0)) {
            return Err(bad("thin", "0"));
        }
        if self.t.as_ref().is_some_and(|t| t.contains(&0)) {
            return Err(bad("t", "0"));
        }
        Ok(())
    }

    /// `λ` source after per-kind defaults.
    pub fn lambda_source(&self) -> LambdaSource {
        self.lambda.unwrap_or(match self.kind {
            Kind::HomExact => LambdaSource::Exhaustive,
            _ => LambdaSource::Spectral,
        })
    }

    pub fn expansion_mode(&self) -> ExpansionMode {
        match self.mode {
            Mode::Lipschitz(_) => ExpansionMode::General,
            Mode::Homomorphism => ExpansionMode::Bipartite,
        }
    }

    fn fields(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("kind", self.kind.to_string());
        m.insert("graph", self.graph.to_string());
        m.insert("graph_seed", self.graph_seed.unwrap_or(self.seed).to_string());
        match self.mode {
            Mode::Lipschitz(k) => {
                m.insert("mode", "lipschitz".into());
                m.insert("m", k.to_string());
            }
            Mode::Homomorphism => {
                m.insert("mode", "hom".into());
            }
        }
        m.insert("v0", self.v0.to_string());
        m.insert("vertices", format_list(&self.vertices));
        m.insert("t", format_list(&self.t));
        m.insert("sampler", if self.sampler == SamplerKind::Exact { "exact" } else { "mcmc" }.into());
        if self.sampler == SamplerKind::Mcmc {
            m.insert("burnin", self.burnin.to_string());
            m.insert("thin", self.thin.to_string());
            m.insert("samples", self.samples.to_string());
            m.insert("chains", self.chains.to_string());
        }
        m.insert("lambda", self.lambda_source().to_string());
        m.insert("seed", self.seed.to_string());
        m.insert("cap", self.cap.to_string());
        m.insert("assert", self.assert_hypotheses.to_string());
        m
    }

    /// Canonical `key = value` text of everything that affects results.
    pub fn resolved(&self) -> String {
        self.fields().into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// Resolved text plus output settings, as written beside a report.
    pub fn resolved_with_output(&self) -> String {
        let mut s = self.resolved();
        if let Some(out) = &self.out {
            s.push_str(&format!("out = {}\n", out.display()));
        }
        s.push_str(&format!("format = {}\n", self.format));
        s
    }

    /// First 16 hex digits of the SHA-256 of [`resolved`](Self::resolved).
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.resolved().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
