//! Histograms, running moments, Kolmogorov–Smirnov distances and
//! least-squares fits.

use serde::Serialize;

use crate::error::{domain, Result};

/// Streaming mean and population variance (Welford), mergeable with Chan's
/// pairwise update.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let (na, nb) = (self.count as f64, other.count as f64);
        let delta = other.mean - self.mean;
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
    }

    /// Population variance (divides by the count).
    pub fn variance(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        self.m2 / self.count as f64
    }

    /// Sample variance (divides by count - 1).
    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        self.m2 / (self.count - 1) as f64
    }

    /// Standard error of the mean, from the sample standard deviation.
    pub fn stderr(&self) -> f64 {
        (self.sample_variance() / self.count as f64).sqrt()
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::new();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// Histogram with left-closed bins `[e_i, e_{i+1})`.
///
/// Densities are normalized by bin width times the number of in-range
/// samples, so they integrate to one over the edges. Samples outside the
/// edges (and NaNs) are counted separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityHistogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    out_of_range: u64,
}

impl DensityHistogram {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(domain("a histogram needs at least two edges"));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(domain(
                "histogram edges must be finite and strictly ascending",
            ));
        }
        let bins = edges.len() - 1;
        Ok(Self {
            edges,
            counts: vec![0; bins],
            out_of_range: 0,
        })
    }

    pub fn uniform(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(domain("bin count must be positive"));
        }
        let width = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|i| lo + i as f64 * width).collect();
        edges.push(hi);
        Self::new(edges)
    }

    /// Default binning for rescaled nodal volumes in dimension `s`:
    /// 200 bins over `[1/pi - 0.02, sqrt(s)/pi + 0.02]`.
    pub fn for_sigma(s: usize) -> Result<Self> {
        use std::f64::consts::PI;
        Self::uniform(1.0 / PI - 0.02, (s as f64).sqrt() / PI + 0.02, 200)
    }

    pub fn add(&mut self, x: f64) {
        let lo = self.edges[0];
        let hi = self.edges[self.edges.len() - 1];
        if !(x >= lo && x < hi) {
            self.out_of_range += 1;
            return;
        }
        let i = self.edges.partition_point(|&e| e <= x) - 1;
        self.counts[i] += 1;
    }

    /// Adds the counts of a histogram with identical edges.
    pub fn merge(&mut self, other: &DensityHistogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(domain("cannot merge histograms with different edges"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.out_of_range += other.out_of_range;
        Ok(())
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Number of in-range samples.
    pub fn count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn out_of_range(&self) -> u64 {
        self.out_of_range
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn densities(&self) -> Result<Vec<f64>> {
        let total = self.count();
        if total == 0 {
            return Err(domain("histogram holds no in-range samples"));
        }
        Ok(self
            .edges
            .windows(2)
            .zip(&self.counts)
            .map(|(w, &c)| c as f64 / ((w[1] - w[0]) * total as f64))
            .collect())
    }
}

/// Bins `values` into a histogram with the given edges.
pub fn build_histogram<I>(values: I, edges: &[f64]) -> Result<DensityHistogram>
where
    I: IntoIterator<Item = f64>,
{
    let mut h = DensityHistogram::new(edges.to_vec())?;
    for x in values {
        h.add(x);
    }
    if h.count() == 0 {
        return Err(domain("no samples fell inside the histogram edges"));
    }
    Ok(h)
}

/// Supremum distance between the empirical CDF of `samples` and `cdf`,
/// evaluated on both sides of every jump.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(domain("KS distance of an empty sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(domain("KS distance of a sample containing NaN"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(ks_distance_sorted(&sorted, cdf))
}

/// As [`ks_distance`] for input that is already sorted ascending.
pub fn ks_distance_sorted<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d.clamp(0.0, 1.0)
}

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(domain("x and y lengths differ"));
    }
    if x.len() < 2 {
        return Err(domain("a line fit needs at least two points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(domain("all abscissae are equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    Ok(LinearFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
    })
}

/// Least-squares slope of `y = slope * x` (no intercept).
pub fn fit_through_origin(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(domain("x and y must be non-empty and of equal length"));
    }
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    if sxx == 0.0 {
        return Err(domain("all abscissae are zero"));
    }
    Ok(x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / sxx)
}

/// Power law `y = amplitude * x^exponent` fitted in log–log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub amplitude: f64,
    /// RMS residual of `ln y`.
    pub residual: f64,
}

/// Fits a power law to the points with `x` inside `window` (all points when
/// `None`). Every point used must have positive `x` and `y`.
pub fn fit_power_law(x: &[f64], y: &[f64], window: Option<(f64, f64)>) -> Result<PowerLawFit> {
    if x.len() != y.len() {
        return Err(domain("x and y lengths differ"));
    }
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, _)| window.is_none_or(|(lo, hi)| **a >= lo && **a <= hi))
        .map(|(&a, &b)| {
            if a > 0.0 && b > 0.0 {
                Ok((a.ln(), b.ln()))
            } else {
                Err(domain(format!(
                    "power-law fit needs positive data, got ({a}, {b})"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let line = linear_fit(&lx, &ly)?;
    Ok(PowerLawFit {
        exponent: line.slope,
        amplitude: line.intercept.exp(),
        residual: line.residual,
    })
}
