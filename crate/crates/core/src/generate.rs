//! Seeded graph generators. Output is always simple and its edges are
//! listed as `(u, v)` with `u < v` in lexicographic order.
//!
//! Specs are written `family:key=value,...`, e.g. `gnm:n=100,m=500,seed=7`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, VertexId};

pub const DEFAULT_GENERATOR_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Gnp {
        n: usize,
        p: f64,
    },
    Gnm {
        n: usize,
        m: usize,
    },
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    Complete {
        n: usize,
    },
    /// Two `clique`-cliques joined by a path through `path` extra vertices.
    Barbell {
        clique: usize,
        path: usize,
    },
    /// Two `clique`-cliques joined by a single edge.
    TwoCliquesBridge {
        clique: usize,
    },
    RandomRegular {
        n: usize,
        d: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        GeneratorSpec { family, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match self.family {
            Family::Gnp { p, .. } if !(0.0..=1.0).contains(&p) => {
                bad(format!("p = {p} not in [0, 1]"))
            }
            Family::Gnm { n, m } if m > n * n.saturating_sub(1) / 2 => {
                bad(format!("m = {m} exceeds n(n-1)/2 for n = {n}"))
            }
            Family::Cycle { n } if n < 3 => bad("cycle needs n >= 3".into()),
            Family::Barbell { clique, .. } | Family::TwoCliquesBridge { clique } if clique < 2 => {
                bad("clique size must be at least 2".into())
            }
            Family::RandomRegular { n, d } if d >= n.max(1) || (n * d) % 2 == 1 => {
                bad(format!("no simple {d}-regular graph on {n} vertices"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Gnp { n, p } => write!(f, "gnp:n={n},p={p}")?,
            Family::Gnm { n, m } => write!(f, "gnm:n={n},m={m}")?,
            Family::Cycle { n } => write!(f, "cycle:n={n}")?,
            Family::Path { n } => write!(f, "path:n={n}")?,
            Family::Complete { n } => write!(f, "complete:n={n}")?,
            Family::Barbell { clique, path } => write!(f, "barbell:k={clique},path={path}")?,
            Family::TwoCliquesBridge { clique } => write!(f, "two-cliques-bridge:k={clique}")?,
            Family::RandomRegular { n, d } => write!(f, "random-regular:n={n},d={d}")?,
        }
        write!(f, ",seed={}", self.seed)
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params: Vec<(&str, &str)> = Vec::new();
        for kv in rest.split(',').filter(|kv| !kv.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidSpec(format!("expected key=value, got `{kv}`")))?;
            params.push((k.trim(), v.trim()));
        }
        let lookup = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let int = |key: &str| -> Result<usize> {
            let v = lookup(key)
                .ok_or_else(|| Error::InvalidSpec(format!("{name}: missing `{key}`")))?;
            v.parse()
                .map_err(|_| Error::InvalidSpec(format!("{name}: `{key}={v}` is not an integer")))
        };
        let seed = match lookup("seed") {
            Some(v) => v
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad seed `{v}`")))?,
            None => DEFAULT_GENERATOR_SEED,
        };
        let family = match name {
            "gnp" => {
                let p = lookup("p").ok_or_else(|| Error::InvalidSpec("gnp: missing `p`".into()))?;
                Family::Gnp {
                    n: int("n")?,
                    p: p.parse()
                        .map_err(|_| Error::InvalidSpec(format!("gnp: bad p `{p}`")))?,
                }
            }
            "gnm" => Family::Gnm {
                n: int("n")?,
                m: int("m")?,
            },
            "cycle" => Family::Cycle { n: int("n")? },
            "path" => Family::Path { n: int("n")? },
            "complete" => Family::Complete { n: int("n")? },
            "barbell" => Family::Barbell {
                clique: int("k")?,
                path: lookup("path").map_or(Ok(0), |_| int("path"))?,
            },
            "two-cliques-bridge" => Family::TwoCliquesBridge { clique: int("k")? },
            "random-regular" => Family::RandomRegular {
                n: int("n")?,
                d: int("d")?,
            },
            other => return Err(Error::InvalidSpec(format!("unknown family `{other}`"))),
        };
        let spec = GeneratorSpec { family, seed };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Multigraph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, mut edges) = match spec.family {
        Family::Gnp { n, p } => (n, gnp(n, p, &mut rng)),
        Family::Gnm { n, m } => (n, gnm(n, m, &mut rng)),
        Family::Cycle { n } => (n, (0..n).map(|v| (v, (v + 1) % n)).collect()),
        Family::Path { n } => (n, (1..n).map(|v| (v - 1, v)).collect()),
        Family::Complete { n } => (n, clique_edges(0, n)),
        Family::Barbell { clique, path } => {
            let n = 2 * clique + path;
            let mut edges = clique_edges(0, clique);
            edges.extend(clique_edges(clique + path, clique));
            // chain: last vertex of the first clique, the path vertices, first of the second
            let chain: Vec<VertexId> = std::iter::once(clique - 1)
                .chain(clique..clique + path)
                .chain(std::iter::once(clique + path))
                .collect();
            edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
            (n, edges)
        }
        Family::TwoCliquesBridge { clique } => {
            let mut edges = clique_edges(0, clique);
            edges.extend(clique_edges(clique, clique));
            edges.push((clique - 1, clique));
            (2 * clique, edges)
        }
        Family::RandomRegular { n, d } => (n, random_regular(n, d, &mut rng)?),
    };
    for e in edges.iter_mut() {
        if e.0 > e.1 {
            *e = (e.1, e.0);
        }
    }
    edges.sort_unstable();
    Multigraph::new(n, edges)
}

fn clique_edges(base: VertexId, k: usize) -> Vec<(VertexId, VertexId)> {
    let mut edges = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for u in 0..k {
        for v in u + 1..k {
            edges.push((base + u, base + v));
        }
    }
    edges
}

/// Geometric skipping over the `n(n-1)/2` candidate pairs, `O(n + m)`.
fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(VertexId, VertexId)> {
    let mut edges = Vec::new();
    if p <= 0.0 || n < 2 {
        return edges;
    }
    if p >= 1.0 {
        return clique_edges(0, n);
    }
    let log_q = (1.0 - p).ln();
    let (mut v, mut w) = (1usize, -1i64);
    while v < n {
        let r: f64 = 1.0 - rng.random::<f64>();
        w += 1 + (r.ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    edges
}

fn gnm<R: Rng>(n: usize, m: usize, rng: &mut R) -> Vec<(VertexId, VertexId)> {
    let total = n * n.saturating_sub(1) / 2;
    if 2 * m > total {
        let mut all = clique_edges(0, n);
        let (chosen, _) = all.partial_shuffle(rng, m);
        return chosen.to_vec();
    }
    let mut seen = HashSet::with_capacity(m * 2);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            edges.push(e);
        }
    }
    edges
}

/// Pairs random free half-edges, rejecting loops and repeats; restarts when stuck.
fn random_regular<R: Rng>(n: usize, d: usize, rng: &mut R) -> Result<Vec<(VertexId, VertexId)>> {
    const ATTEMPTS: usize = 200;
    for _ in 0..ATTEMPTS {
        let mut points: Vec<VertexId> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut seen = HashSet::with_capacity(n * d);
        let mut edges = Vec::with_capacity(n * d / 2);
        let mut stuck = false;
        while !points.is_empty() {
            let mut found = false;
            for _ in 0..(100 + 10 * points.len()) {
                let i = rng.random_range(0..points.len());
                let j = rng.random_range(0..points.len());
                let (u, v) = (points[i], points[j]);
                if i == j || u == v || seen.contains(&(u.min(v), u.max(v))) {
                    continue;
                }
                seen.insert((u.min(v), u.max(v)));
                edges.push((u, v));
                let (hi, lo) = (i.max(j), i.min(j));
                points.swap_remove(hi);
                points.swap_remove(lo);
                found = true;
                break;
            }
            if !found {
                stuck = true;
                break;
            }
        }
        if !stuck {
            return Ok(edges);
        }
    }
    Err(Error::InvalidSpec(format!(
        "random-regular n={n} d={d}: pairing failed after {ATTEMPTS} attempts"
    )))
}
