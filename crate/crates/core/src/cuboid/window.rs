//! Statistics of the rescaled nodal volume over a spectral window.
//!
//! The window is split by the leading mode number `n_1`; each slice is
//! enumerated independently and the partial moments are merged in slice
//! order, so the result does not depend on the number of worker threads.

use serde::Serialize;

use super::enumerate::{leading_bound, WindowModes};
use super::{CuboidSpec, SpectralWindow};
use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::stats::Moments;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowStats {
    pub count: u64,
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    /// Standard error of the mean.
    pub stderr: f64,
}

fn per_slice<T, F>(spec: &CuboidSpec, window: &SpectralWindow, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(WindowModes<'_>) -> T + Sync + Send,
{
    let (lo, hi) = window.bounds();
    let top = leading_bound(spec, hi);
    map_indexed(top as usize, |i| {
        let k = i as u64 + 1;
        f(WindowModes::with_leading(spec, lo, hi, k, k))
    })
}

pub fn window_stats(spec: &CuboidSpec, window: &SpectralWindow) -> Result<WindowStats> {
    let parts = per_slice(spec, window, |modes| {
        let mut m = Moments::new();
        modes.visit(|_, _, sigma| m.push(sigma));
        m
    });
    let mut total = Moments::new();
    for p in &parts {
        total.merge(p);
    }
    if total.count == 0 {
        let (lo, hi) = window.bounds();
        return Err(Error::EmptyWindow { lo, hi });
    }
    let stderr = if total.count > 1 { total.stderr() } else { 0.0 };
    Ok(WindowStats {
        count: total.count,
        mean: total.mean,
        variance: total.variance(),
        stderr,
    })
}

/// Mean rescaled nodal volume and number of modes in the window.
pub fn window_mean_sigma(spec: &CuboidSpec, window: &SpectralWindow) -> Result<(f64, u64)> {
    let st = window_stats(spec, window)?;
    Ok((st.mean, st.count))
}

/// Population variance of the rescaled nodal volume in the window.
pub fn window_var_sigma(spec: &CuboidSpec, window: &SpectralWindow) -> Result<f64> {
    Ok(window_stats(spec, window)?.variance)
}

/// Rescaled nodal volumes of every mode in the window, in lexicographic
/// mode order.
pub fn window_sigmas(spec: &CuboidSpec, window: &SpectralWindow) -> Result<Vec<f64>> {
    let parts = per_slice(spec, window, |modes| {
        let mut v = Vec::new();
        modes.visit(|_, _, sigma| v.push(sigma));
        v
    });
    let all: Vec<f64> = parts.into_iter().flatten().collect();
    if all.is_empty() {
        let (lo, hi) = window.bounds();
        return Err(Error::EmptyWindow { lo, hi });
    }
    Ok(all)
}
