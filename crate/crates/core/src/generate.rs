//! Seeded random drawings: uniform points in a square, uniform random edges.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::model::Digraph;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomConfig {
    pub n: usize,
    pub density: f64,
    pub seed: u64,
    pub min_sep: f64,
    /// Rejection attempts per point before giving up.
    pub max_tries: usize,
}

impl RandomConfig {
    pub fn new(n: usize, density: f64, seed: u64) -> Self {
        RandomConfig {
            n,
            density,
            seed,
            min_sep: 10.0,
            max_tries: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomLayout {
    pub graph: Digraph,
    pub pos: Vec<Point>,
    /// Set when fewer edges than requested exist on `n` vertices.
    pub warning: Option<String>,
}

/// Side of the square that holds `n` points.
pub fn square_side(n: usize) -> f64 {
    40.0 * (n as f64).sqrt()
}

/// `n` points uniform in a square of side `40 * sqrt(n)` with pairwise
/// distance at least `min_sep`, and `floor(density * n)` distinct vertex
/// pairs, each oriented at random.
pub fn random_layout(cfg: &RandomConfig) -> Result<RandomLayout> {
    if cfg.n < 2 {
        return Err(Error::Generate(format!("need n >= 2, got {}", cfg.n)));
    }
    if !(cfg.density.is_finite() && cfg.density >= 1.0) {
        return Err(Error::Generate(format!("need density >= 1, got {}", cfg.density)));
    }
    if !(cfg.min_sep.is_finite() && cfg.min_sep >= 0.0) {
        return Err(Error::Generate(format!("min_sep must be >= 0, got {}", cfg.min_sep)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let side = square_side(cfg.n);

    let mut pos: Vec<Point> = Vec::with_capacity(cfg.n);
    while pos.len() < cfg.n {
        let placed = (0..cfg.max_tries).find_map(|_| {
            let p = Point::new(rng.gen_range(0.0..side), rng.gen_range(0.0..side));
            pos.iter().all(|q| q.dist(p) >= cfg.min_sep).then_some(p)
        });
        match placed {
            Some(p) => pos.push(p),
            None => {
                return Err(Error::Generate(format!(
                    "could not place point {} of {} with separation {} after {} tries; try a smaller min_sep",
                    pos.len() + 1,
                    cfg.n,
                    cfg.min_sep,
                    cfg.max_tries
                )))
            }
        }
    }

    let pairs = cfg.n * (cfg.n - 1) / 2;
    let wanted = (cfg.density * cfg.n as f64).floor() as usize;
    let warning = (wanted > pairs).then(|| {
        format!("{wanted} edges requested but only {pairs} vertex pairs exist; emitting {pairs}")
    });
    let m = wanted.min(pairs);

    // Unordered pairs indexed 0..pairs, decoded row by row.
    let decode = |mut k: usize| {
        let mut a = 0;
        while k >= cfg.n - 1 - a {
            k -= cfg.n - 1 - a;
            a += 1;
        }
        (a, a + 1 + k)
    };
    let mut chosen: Vec<usize> = sample(&mut rng, pairs, m).into_vec();
    chosen.sort_unstable();
    let mut edges = Vec::with_capacity(m);
    for k in chosen {
        let (a, b) = decode(k);
        edges.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
    }
    Ok(RandomLayout {
        graph: Digraph::new(cfg.n, edges)?,
        pos,
        warning,
    })
}
