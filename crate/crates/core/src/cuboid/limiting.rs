//! Limiting distribution of the rescaled nodal volume.
//!
//! At high energy `sigma` is distributed like `sum |e_l| / pi` for `e`
//! uniform on the unit sphere, with support `[1/pi, sqrt(s)/pi]`. Closed
//! forms exist for `s = 2` and `s = 3`; every dimension can be sampled.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::par::map_indexed;
use crate::quad::gk21;
use crate::stats::{fit_power_law, DensityHistogram, PowerLawFit};

const CHUNK: usize = 1 << 16;

/// Closed-form density for `s = 2` or `s = 3`; zero outside the support.
pub fn limiting_pdf_closed(s: usize, sigma: f64) -> Result<f64> {
    match s {
        2 => Ok(pdf2(sigma)),
        3 => Ok(pdf3(sigma)),
        _ => Err(Error::UnsupportedDimension(s)),
    }
}

fn pdf2(sigma: f64) -> f64 {
    let x = PI * sigma;
    if !(1.0..=2f64.sqrt()).contains(&x) {
        return 0.0;
    }
    4.0 / (2.0 - x * x).max(0.0).sqrt()
}

fn pdf3(sigma: f64) -> f64 {
    let x = PI * sigma;
    if !(1.0..=3f64.sqrt()).contains(&x) {
        return 0.0;
    }
    if x >= 2f64.sqrt() {
        return 4.0 * PI / 3f64.sqrt();
    }
    let r = (2.0 - x * x).max(0.0).sqrt();
    let t1 = (x / (6.0 - 3.0 * x * x).sqrt()).atan();
    let t2 = ((x - 3.0 * r) / (6.0 + 6.0 * x * r).sqrt()).atan();
    // the denominator vanishes at the lower edge, where the angle is pi/2
    let t3 = ((x + 3.0 * r) / (6.0 - 6.0 * x * r).max(0.0).sqrt()).atan();
    4.0 / 3f64.sqrt() * (FRAC_PI_2 + t1 + t2 - t3)
}

/// Cumulative distribution of the closed-form limiting density.
#[derive(Debug, Clone)]
pub struct LimitingCdf {
    s: usize,
    // s = 3: cubic Hermite table of the CDF on the curved branch
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl LimitingCdf {
    const TABLE: usize = 1024;

    pub fn new(s: usize) -> Result<Self> {
        match s {
            2 => Ok(Self {
                s,
                nodes: Vec::new(),
                values: Vec::new(),
                slopes: Vec::new(),
            }),
            3 => {
                let (lo, hi) = (1.0 / PI, 2f64.sqrt() / PI);
                let h = (hi - lo) / Self::TABLE as f64;
                let nodes: Vec<f64> = (0..=Self::TABLE).map(|i| lo + i as f64 * h).collect();
                let mut values = vec![0.0; nodes.len()];
                for i in 0..Self::TABLE {
                    values[i + 1] = values[i] + gk21(&pdf3, nodes[i], nodes[i + 1]).0;
                }
                let slopes = nodes.iter().map(|&x| pdf3(x)).collect();
                Ok(Self {
                    s,
                    nodes,
                    values,
                    slopes,
                })
            }
            _ => Err(Error::UnsupportedDimension(s)),
        }
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn eval(&self, sigma: f64) -> f64 {
        let x = PI * sigma;
        if x <= 1.0 {
            return 0.0;
        }
        if x >= (self.s as f64).sqrt() {
            return 1.0;
        }
        if self.s == 2 {
            return 4.0 / PI * ((x / 2f64.sqrt()).asin() - FRAC_PI_4);
        }
        let top = 3f64.sqrt() / PI;
        if x >= 2f64.sqrt() {
            return 1.0 - 4.0 * PI / 3f64.sqrt() * (top - sigma);
        }
        let h = self.nodes[1] - self.nodes[0];
        let i = (((sigma - self.nodes[0]) / h) as usize).min(Self::TABLE - 1);
        let t = (sigma - self.nodes[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.values[i]
            + (t3 - 2.0 * t2 + t) * h * self.slopes[i]
            + (-2.0 * t3 + 3.0 * t2) * self.values[i + 1]
            + (t3 - t2) * h * self.slopes[i + 1]
    }
}

fn sample_chunk(s: usize, seed: u64, chunk: usize, len: usize, mut f: impl FnMut(f64)) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let mut e = vec![0.0f64; s];
    for _ in 0..len {
        for v in e.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let norm = e.iter().map(|v| v * v).sum::<f64>().sqrt();
        let l1: f64 = e.iter().map(|v| v.abs()).sum();
        f(l1 / (norm * PI));
    }
}

fn chunks(samples: usize) -> impl Fn(usize) -> usize {
    move |c| CHUNK.min(samples - c * CHUNK)
}

/// Draws `samples` values of `sum |e_l| / pi` for `e` uniform on the unit
/// sphere in dimension `s`. Chunk `c` of the output always comes from RNG
/// stream `c` of `seed`.
pub fn sample_limiting_sigma(s: usize, samples: usize, seed: u64) -> Result<Vec<f64>> {
    if s < 2 {
        return Err(Error::UnsupportedDimension(s));
    }
    let len = chunks(samples);
    let parts = map_indexed(samples.div_ceil(CHUNK), |c| {
        let mut v = Vec::with_capacity(len(c));
        sample_chunk(s, seed, c, len(c), |x| v.push(x));
        v
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Histogram estimate of the limiting density, binned with the edges of
/// `template` (whose counts are ignored).
pub fn limiting_pdf_mc(
    s: usize,
    samples: usize,
    template: &DensityHistogram,
    seed: u64,
) -> Result<DensityHistogram> {
    if s < 2 {
        return Err(Error::UnsupportedDimension(s));
    }
    if samples == 0 {
        return Err(domain("at least one sample is required"));
    }
    let empty = DensityHistogram::new(template.edges().to_vec())?;
    let len = chunks(samples);
    let parts = map_indexed(samples.div_ceil(CHUNK), |c| {
        let mut h = empty.clone();
        sample_chunk(s, seed, c, len(c), |x| h.add(x));
        h
    });
    let mut total = empty;
    for p in &parts {
        total.merge(p)?;
    }
    Ok(total)
}

/// Edge of the support `[1/pi, sqrt(s)/pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Edge {
    Min,
    Max,
}

/// Fits `P ~ d^p` near an edge of the support, where `d` is the distance to
/// the edge. The density is histogrammed over `d` in `[0.02 w, 0.2 w]` with
/// `w` the support width, using `bins` uniform bins.
pub fn edge_exponent(
    s: usize,
    edge: Edge,
    samples: usize,
    bins: usize,
    seed: u64,
) -> Result<PowerLawFit> {
    if s < 2 {
        return Err(Error::UnsupportedDimension(s));
    }
    let (lo, hi) = (1.0 / PI, (s as f64).sqrt() / PI);
    let w = hi - lo;
    let (d0, d1) = (0.02 * w, 0.2 * w);
    // bin sigma directly, mirrored so the histogram runs over the distance
    let (a, b) = match edge {
        Edge::Min => (lo + d0, lo + d1),
        Edge::Max => (hi - d1, hi - d0),
    };
    let template = DensityHistogram::uniform(a, b, bins)?;
    let hist = limiting_pdf_mc(s, samples, &template, seed)?;
    let n = samples as f64;
    let width = (b - a) / bins as f64;
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (c, &k) in hist.centers().iter().zip(hist.counts()) {
        if k == 0 {
            continue;
        }
        x.push(match edge {
            Edge::Min => c - lo,
            Edge::Max => hi - c,
        });
        // normalized by all samples, not only the in-range ones
        y.push(k as f64 / (n * width));
    }
    fit_power_law(&x, &y, None)
}
