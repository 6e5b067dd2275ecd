//! Streaming enumeration of the modes inside an energy shell.
//!
//! The leading `s - 1` mode numbers run through an odometer in lexicographic
//! order. For each such prefix the admissible range of the last mode number
//! is solved with a square root and then corrected by exact membership tests,
//! so nothing is ever materialized and window membership matches
//! [`mode_energy`](super::mode_energy) bit for bit.

use super::{CuboidSpec, NodalSample, SpectralWindow, PI2};

/// One prefix `n_1..n_{s-1}` together with the admissible last mode numbers
/// `first..=last` (empty when `first > last`).
struct Row {
    q: f64,
    lin: f64,
    first: u64,
    last: u64,
}

struct Rows<'a> {
    sides: &'a [f64],
    lo: f64,
    hi: f64,
    lead: (u64, u64),
    n: Vec<u64>,
    // partial sums of (n_l/a_l)^2 and (n_l - 1)/a_l over the first l entries
    q: Vec<f64>,
    lin: Vec<f64>,
    // sum of 1/a_m^2 over the levels after l
    min_rest: Vec<f64>,
    started: bool,
}

impl<'a> Rows<'a> {
    fn new(sides: &'a [f64], lo: f64, hi: f64, lead: (u64, u64)) -> Self {
        let s = sides.len();
        let mut min_rest = vec![0.0; s];
        for l in (0..s - 1).rev() {
            min_rest[l] = min_rest[l + 1] + 1.0 / (sides[l + 1] * sides[l + 1]);
        }
        Self {
            sides,
            lo,
            hi,
            lead,
            n: vec![1; s],
            q: vec![0.0; s],
            lin: vec![0.0; s],
            min_rest,
            started: false,
        }
    }

    fn prefix_len(&self) -> usize {
        self.sides.len() - 1
    }

    // Loose upper bound on n_l given the levels before it; one too large at
    // worst, which only ever produces an empty row.
    fn bound(&self, l: usize) -> u64 {
        let room = self.hi / PI2 - self.q[l] - self.min_rest[l];
        let b = if room < 0.0 || room.is_nan() {
            0
        } else {
            (self.sides[l] * room.sqrt()).floor() as u64 + 1
        };
        if l == 0 {
            b.min(self.lead.1)
        } else {
            b
        }
    }

    fn refresh_from(&mut self, l: usize) {
        for m in l..self.prefix_len() {
            let k = self.n[m];
            let a = self.sides[m];
            self.q[m + 1] = self.q[m] + (k as f64 / a).powi(2);
            self.lin[m + 1] = self.lin[m] + (k - 1) as f64 / a;
        }
    }

    fn advance(&mut self) -> bool {
        let p = self.prefix_len();
        if !self.started {
            self.started = true;
            self.n[0] = self.lead.0.max(1);
            if self.n[0] > self.bound(0) {
                return false;
            }
            self.refresh_from(0);
            return true;
        }
        let mut l = p - 1;
        loop {
            self.n[l] += 1;
            if self.n[l] <= self.bound(l) {
                for m in l + 1..p {
                    self.n[m] = 1;
                }
                self.refresh_from(l);
                return true;
            }
            if l == 0 {
                return false;
            }
            l -= 1;
        }
    }

    fn next_row(&mut self) -> Option<Row> {
        if !self.advance() {
            return None;
        }
        let p = self.prefix_len();
        let q = self.q[p];
        let a = self.sides[p];
        let energy = |k: u64| PI2 * (q + (k as f64 / a).powi(2));

        let r = self.lo / PI2 - q;
        let mut first = if r > 0.0 {
            ((a * r.sqrt()).ceil() as u64).max(1)
        } else {
            1
        };
        while first > 1 && energy(first - 1) >= self.lo {
            first -= 1;
        }
        while energy(first) < self.lo {
            first += 1;
        }

        let r = self.hi / PI2 - q;
        let mut last = if r > 0.0 {
            (a * r.sqrt()).floor() as u64
        } else {
            0
        };
        while energy(last + 1) <= self.hi {
            last += 1;
        }
        while last >= 1 && energy(last) > self.hi {
            last -= 1;
        }
        Some(Row {
            q,
            lin: self.lin[p],
            first,
            last,
        })
    }
}

/// Iterator over the modes with energy in a closed interval, in
/// lexicographic order of the mode vector.
pub struct WindowModes<'a> {
    rows: Rows<'a>,
    row: Option<Row>,
    next_last: u64,
}

impl<'a> WindowModes<'a> {
    /// Modes with `lo <= E_n <= hi`.
    pub fn between(spec: &'a CuboidSpec, lo: f64, hi: f64) -> Self {
        Self::with_leading(spec, lo, hi, 1, u64::MAX)
    }

    /// As [`WindowModes::between`], restricted to `n_1` in `lead_lo..=lead_hi`.
    pub fn with_leading(
        spec: &'a CuboidSpec,
        lo: f64,
        hi: f64,
        lead_lo: u64,
        lead_hi: u64,
    ) -> Self {
        Self {
            rows: Rows::new(spec.sides(), lo, hi, (lead_lo, lead_hi)),
            row: None,
            next_last: 1,
        }
    }

    /// Calls `f(n, energy, sigma)` for every remaining mode without
    /// allocating per mode.
    pub fn visit<F: FnMut(&[u64], f64, f64)>(mut self, mut f: F) {
        let p = self.rows.prefix_len();
        let a = self.rows.sides[p];
        while let Some(row) = self.rows.next_row() {
            let mut n = self.rows.n.clone();
            for k in row.first..=row.last {
                let e = PI2 * (row.q + (k as f64 / a).powi(2));
                let sigma = (row.lin + (k - 1) as f64 / a) / e.sqrt();
                n[p] = k;
                f(&n, e, sigma);
            }
        }
    }
}

impl Iterator for WindowModes<'_> {
    type Item = NodalSample;

    fn next(&mut self) -> Option<NodalSample> {
        loop {
            if let Some(row) = &self.row {
                if self.next_last <= row.last {
                    let k = self.next_last;
                    self.next_last += 1;
                    let p = self.rows.prefix_len();
                    let a = self.rows.sides[p];
                    let energy = PI2 * (row.q + (k as f64 / a).powi(2));
                    let sigma = (row.lin + (k - 1) as f64 / a) / energy.sqrt();
                    let mut n = self.rows.n.clone();
                    n[p] = k;
                    return Some(NodalSample { n, energy, sigma });
                }
            }
            let row = self.rows.next_row()?;
            self.next_last = row.first;
            self.row = Some(row);
        }
    }
}

/// Streams the modes of `spec` inside `window`.
pub fn enumerate_window<'a>(spec: &'a CuboidSpec, window: &SpectralWindow) -> WindowModes<'a> {
    let (lo, hi) = window.bounds();
    WindowModes::between(spec, lo, hi)
}

/// Number of modes with `lo <= E_n <= hi`, counted row by row.
pub(crate) fn count_between(spec: &CuboidSpec, lo: f64, hi: f64) -> u64 {
    let mut rows = Rows::new(spec.sides(), lo, hi, (1, u64::MAX));
    let mut total = 0;
    while let Some(row) = rows.next_row() {
        if row.last >= row.first {
            total += row.last - row.first + 1;
        }
    }
    total
}

/// Exact number of modes with `E_n <= energy`.
pub fn counting_function(spec: &CuboidSpec, energy: f64) -> u64 {
    count_between(spec, f64::NEG_INFINITY, energy)
}

/// Upper bound on `n_1` for modes with energy at most `hi`.
pub(crate) fn leading_bound(spec: &CuboidSpec, hi: f64) -> u64 {
    Rows::new(spec.sides(), f64::NEG_INFINITY, hi, (1, u64::MAX)).bound(0)
}

#[cfg(test)]
mod tests {
    use super::super::{mode_energy, mode_sigma};
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn brute(spec: &CuboidSpec, lo: f64, hi: f64, cap: u64) -> Vec<Vec<u64>> {
        let s = spec.dim();
        let mut out = Vec::new();
        let mut n = vec![1u64; s];
        loop {
            let e = mode_energy(spec, &n).unwrap();
            if e >= lo && e <= hi {
                out.push(n.clone());
            }
            let mut l = s;
            loop {
                if l == 0 {
                    return out;
                }
                l -= 1;
                n[l] += 1;
                if n[l] <= cap {
                    break;
                }
                n[l] = 1;
            }
        }
    }

    fn listed(spec: &CuboidSpec, lo: f64, hi: f64) -> Vec<Vec<u64>> {
        WindowModes::between(spec, lo, hi).map(|m| m.n).collect()
    }

    #[test]
    fn ground_state_window() {
        let sq = CuboidSpec::new(vec![1.0, 1.0]).unwrap();
        let w = SpectralWindow::new(2.0 * PI2, 1.0).unwrap();
        let modes: Vec<_> = enumerate_window(&sq, &w).map(|m| m.n).collect();
        assert_eq!(modes, vec![vec![1, 1]]);
        let w = SpectralWindow::new(0.1, 0.1 / 0.1f64.powf(0.25)).unwrap();
        assert_eq!(enumerate_window(&sq, &w).count(), 0);
    }

    #[test]
    fn small_window_matches_brute_force() {
        let sq = CuboidSpec::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(listed(&sq, 100.0, 130.0), brute(&sq, 100.0, 130.0, 4));
        assert!(!listed(&sq, 100.0, 130.0).is_empty());
    }

    #[test]
    fn degenerate_shell_endpoints_are_closed() {
        let sq = CuboidSpec::new(vec![1.0, 1.0]).unwrap();
        let e = mode_energy(&sq, &[2, 1]).unwrap();
        assert_eq!(listed(&sq, e, e), vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn counting_examples() {
        let sq = CuboidSpec::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(counting_function(&sq, 2.0 * PI2), 1);
        assert_eq!(counting_function(&sq, 10.0), 0);
        let n = brute(&sq, 0.0, 1e4, 32).len() as u64;
        assert_eq!(counting_function(&sq, 1e4), n);
    }

    #[test]
    fn visit_and_iterator_agree() {
        let c = CuboidSpec::incommensurate(3).unwrap();
        let mut seen = Vec::new();
        WindowModes::between(&c, 3000.0, 3400.0).visit(|n, e, s| seen.push((n.to_vec(), e, s)));
        let it: Vec<_> = WindowModes::between(&c, 3000.0, 3400.0)
            .map(|m| (m.n, m.energy, m.sigma))
            .collect();
        assert_eq!(seen, it);
        for (n, e, s) in &it {
            assert_eq!(*e, mode_energy(&c, n).unwrap());
            assert_eq!(*s, mode_sigma(&c, n).unwrap());
        }
    }

    #[test]
    fn leading_split_partitions_the_window() {
        let c = CuboidSpec::incommensurate(3).unwrap();
        let whole: Vec<_> = listed(&c, 5000.0, 5600.0);
        let top = leading_bound(&c, 5600.0);
        let mut parts = Vec::new();
        for k in 1..=top {
            parts.extend(WindowModes::with_leading(&c, 5000.0, 5600.0, k, k).map(|m| m.n));
        }
        assert_eq!(whole, parts);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn shells_match_brute_force(
            sides in prop::collection::vec(0.5f64..2.0, 2..=4),
            lo in 0.0f64..600.0,
            width in 0.0f64..200.0,
        ) {
            let c = CuboidSpec::new(sides.clone()).unwrap();
            let hi = lo + width;
            // n_l <= a_l sqrt(hi)/pi bounds every admissible mode
            let cap = sides.iter().map(|a| (a * hi.sqrt() / PI).floor() as u64 + 1).max().unwrap();
            prop_assert_eq!(listed(&c, lo, hi), brute(&c, lo, hi, cap));
            prop_assert_eq!(count_between(&c, lo, hi), brute(&c, lo, hi, cap).len() as u64);
        }

        #[test]
        fn sigma_below_hard_bound(sides in prop::collection::vec(0.3f64..3.0, 2..=5), e in 50.0f64..3000.0) {
            let c = CuboidSpec::new(sides).unwrap();
            let top = (c.dim() as f64).sqrt() / PI;
            for m in WindowModes::between(&c, e, e * 1.05) {
                prop_assert!(m.sigma >= 0.0 && m.sigma < top);
            }
        }
    }
}
