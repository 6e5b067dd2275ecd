//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Pass criterion numbers as arguments to run a subset:
//! `cargo test -p nodalvol --test acceptance -- 3 4`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use nodalvol::cuboid::{
    asymptotic_mean, asymptotic_variance, boundary_slope, counting_function, edge_exponent,
    limiting_pdf_closed, mean_prefactor, weyl_counting, window_sigmas, window_stats, CuboidSpec,
    Edge, LimitingCdf, SpectralWindow,
};
use nodalvol::mcwave::{
    empirical_covariances, nodal_length_2d, sigma_variance_trend, two_point_function,
    ContourWindow, WaveEnsembleConfig,
};
use nodalvol::quad::{integrate, integrate_sqrt_edge};
use nodalvol::rwave::{
    boundary_ratio, compute_is, density_asymptote, density_ratio, nodal_density, rho_bulk,
    ConstantOptions,
};
use nodalvol::stats::{fit_through_origin, ks_distance};
use nodalvol::Result;

type Check = fn() -> Result<(bool, String)>;

fn pass_if(ok: bool, detail: String) -> Result<(bool, String)> {
    Ok((ok, detail))
}

fn boundary_constants() -> Result<(bool, String)> {
    let opts = ConstantOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, want) in [(3, 0.758), (4, 0.645)] {
        let t = Instant::now();
        let c = compute_is(s, &opts)?;
        let secs = t.elapsed().as_secs_f64();
        ok &= (c.value - want).abs() <= 0.005 && secs < 60.0;
        parts.push(format!(
            "I_{s} = {:.5} ± {:.1e} (want {want} ± 0.005, {secs:.1} s)",
            c.value, c.uncertainty
        ));
    }
    pass_if(ok, parts.join("; "))
}

fn bulk_densities() -> Result<(bool, String)> {
    let d2 = (rho_bulk(2)? - 1.0 / (2.0 * 2f64.sqrt())).abs();
    let d3 = (rho_bulk(3)? - 2.0 / (PI * 3f64.sqrt())).abs();
    pass_if(
        d2 <= 1e-12 && d3 <= 1e-12,
        format!(
            "|rho_bulk(2) - 1/(2 sqrt 2)| = {d2:.1e}, |rho_bulk(3) - 2/(pi sqrt 3)| = {d3:.1e}"
        ),
    )
}

fn boundary_suppression() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for s in 2..=6 {
        let diff = (nodal_density(s, 0.0)? - rho_bulk(s)? * boundary_ratio(s)?).abs();
        worst = worst.max(diff);
    }
    let planar = (nodal_density(2, 0.0)? - 1.0 / (2.0 * PI)).abs();
    pass_if(worst <= 1e-6 && planar <= 1e-6, format!("max |rho(0) - rho_bulk * ratio| = {worst:.1e} over s = 2..6; |rho_2(0) - 1/(2 pi)| = {planar:.1e}"))
}

fn asymptote_match() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for s in 2..=4 {
        let mut worst: f64 = 0.0;
        for i in 0..=3200 {
            let r = 20.0 + 0.025 * i as f64;
            let diff = (density_ratio(s, r)? - density_asymptote(s, r)?).abs();
            worst = worst.max(diff / (5.0 * r.powf(-(s as f64 - 1.0))));
        }
        ok &= worst <= 1.0;
        parts.push(format!("s={s}: {worst:.3}"));
    }
    pass_if(
        ok,
        format!(
            "max |ratio - asymptote| / (5 R^-(s-1)) on R in [20, 100]: {}",
            parts.join(", ")
        ),
    )
}

fn cuboid_distribution() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, target) in [(2, 0.01), (3, 0.015)] {
        let spec = CuboidSpec::incommensurate(s)?;
        let w = SpectralWindow::with_min_modes(&spec, 1e6, 100_000)?;
        let sigmas = window_sigmas(&spec, &w)?;
        let cdf = LimitingCdf::new(s)?;
        let ks = ks_distance(&sigmas, |x| cdf.eval(x))?;
        ok &= ks < target;
        parts.push(format!(
            "s={s}: KS = {ks:.4} over {} modes (want < {target})",
            sigmas.len()
        ));
    }
    let (lo, mid) = (1.0 / PI, 2f64.sqrt() / PI);
    let n2 = integrate_sqrt_edge(
        |x| limiting_pdf_closed(2, x).unwrap_or(f64::NAN),
        lo,
        mid,
        1e-12,
        400,
    )?
    .value;
    let n3 = integrate(
        |x| limiting_pdf_closed(3, x).unwrap_or(f64::NAN),
        lo,
        mid,
        1e-12,
        400,
    )?
    .value
        + integrate(
            |x| limiting_pdf_closed(3, x).unwrap_or(f64::NAN),
            mid,
            3f64.sqrt() / PI,
            1e-12,
            400,
        )?
        .value;
    let norm = (n2 - 1.0).abs().max((n3 - 1.0).abs());
    ok &= norm <= 1e-8;
    parts.push(format!("max |int P_s - 1| = {norm:.1e}"));
    pass_if(ok, parts.join("; "))
}

fn cuboid_mean_variance() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, g, quoted) in [(2, 1000.0, 0.001604), (3, 100.0, 0.002354)] {
        let spec = CuboidSpec::incommensurate(s)?;
        let w = SpectralWindow::new(1e6, g)?;
        let st = window_stats(&spec, &w)?;
        let (lo, hi) = w.bounds();
        let want = asymptotic_mean(&spec, 0.5 * (lo + hi));
        let mean_err = (st.mean / want - 1.0).abs();
        let formula = asymptotic_variance(s)?;
        let var_err = (st.variance / formula - 1.0).abs();
        let quoted_err = (st.variance / quoted - 1.0).abs();
        ok &= mean_err <= 0.005 && var_err <= 0.05 && quoted_err <= 0.05;
        parts.push(format!(
            "s={s}: mean off by {:.3}%, variance {:.6} vs {formula:.6} ({:.1}%) and quoted {quoted} ({:.1}%), {} modes",
            100.0 * mean_err,
            st.variance,
            100.0 * var_err,
            100.0 * quoted_err,
            st.count
        ));
    }
    pass_if(ok, parts.join("; "))
}

fn boundary_fit() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for s in [2, 3] {
        let spec = CuboidSpec::incommensurate(s)?;
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for i in 0..=12 {
            let e = 1e4 * 10f64.powf(0.25 * i as f64);
            let w = SpectralWindow::new(e, 200.0)?;
            let st = window_stats(&spec, &w)?;
            x.push((e + 0.5 * w.width()).powf(-0.5));
            y.push(mean_prefactor(s)? - st.mean);
        }
        let slope = fit_through_origin(&x, &y)?;
        let want = boundary_slope(&spec);
        let err = (slope / want - 1.0).abs();
        ok &= err <= 0.10;
        parts.push(format!(
            "s={s}: slope {slope:.4} vs {want:.4} ({:.1}%)",
            100.0 * err
        ));
    }
    pass_if(ok, parts.join("; "))
}

fn weyl_check() -> Result<(bool, String)> {
    let spec = CuboidSpec::new(vec![1.0, 2f64.sqrt()])?;
    let mut worst: f64 = 0.0;
    for e in [1e3, 1e4, 1e5, 1e6] {
        let diff = (counting_function(&spec, e) as f64 - weyl_counting(&spec, e)).abs();
        worst = worst.max(diff / (5.0 * e.powf(0.25)));
    }
    pass_if(
        worst <= 1.0,
        format!("max |N - N_weyl| / (5 E^(1/4)) = {worst:.3}"),
    )
}

fn monte_carlo() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for s in [2, 3] {
        let cfg = WaveEnsembleConfig {
            dim: s,
            n_waves: 512,
            n_real: 10_000,
            seed: 2024 + s as u64,
            step: 0.1,
        };
        let seps: Vec<f64> = (0..20).map(|i| 0.1 + i as f64 * 9.9 / 19.0).collect();
        let tp = two_point_function(&cfg, &seps)?;
        let z_tp = tp
            .iter()
            .map(|c| c.estimate.z_score(c.predicted).abs())
            .fold(0.0, f64::max);
        let grid: Vec<f64> = (0..20).map(|i| 0.1 + 0.5 * i as f64).collect();
        let cov = empirical_covariances(&cfg, &grid)?;
        let z_cov = cov.iter().map(|c| c.max_z()).fold(0.0, f64::max);
        worst = worst.max(z_tp).max(z_cov);
        parts.push(format!(
            "s={s}: two-point max |z| {z_tp:.2}, covariances max |z| {z_cov:.2}"
        ));
    }
    let cfg = WaveEnsembleConfig {
        dim: 2,
        n_waves: 512,
        n_real: 1000,
        seed: 2030,
        step: 0.1,
    };
    let prof = nodal_length_2d(
        &cfg,
        &ContourWindow {
            r1: (0.0, 40.0),
            r2: (0.0, 20.0),
            strip: 0.5,
        },
    )?;
    let z_prof = prof
        .iter()
        .map(|p| p.estimate.z_score(p.predicted).abs())
        .fold(0.0, f64::max);
    worst = worst.max(z_prof);
    parts.push(format!(
        "nodal-length profile max |z| {z_prof:.2} over {} strips",
        prof.len()
    ));
    pass_if(worst <= 3.0, parts.join("; "))
}

fn fluctuation_contrast() -> Result<(bool, String)> {
    let spec = CuboidSpec::incommensurate(2)?;
    let cuboid = window_stats(&spec, &SpectralWindow::new(1e6, 1000.0)?)?.variance;
    let cfg = WaveEnsembleConfig {
        dim: 2,
        n_waves: 512,
        n_real: 64,
        seed: 2040,
        step: 0.3,
    };
    let trend = sigma_variance_trend(&cfg, &[50.0, 100.0, 200.0, 400.0], 1000.0)?;
    let decreasing = trend.windows(2).all(|w| w[1].variance < w[0].variance);
    let last = trend.last().expect("four sizes").variance;
    let vars: Vec<String> = trend
        .iter()
        .map(|p| format!("{:.2e}", p.variance))
        .collect();
    pass_if(
        cuboid > 10.0 * last && decreasing,
        format!("cuboid variance {cuboid:.3e} vs 10 x {last:.3e}; random-wave variances at ka = 50..400: {}", vars.join(", ")),
    )
}

fn tail_exponents() -> Result<(bool, String)> {
    const SAMPLES: usize = 40_000_000;
    let mut ok = true;
    let mut parts = Vec::new();
    for s in [3, 4, 5] {
        let sf = s as f64;
        let lo = edge_exponent(s, Edge::Min, SAMPLES, 12, 3000 + s as u64)?.exponent;
        let hi = edge_exponent(s, Edge::Max, SAMPLES, 12, 4000 + s as u64)?.exponent;
        ok &= (lo - (sf - 2.0)).abs() <= 0.3 && (hi - 0.5 * (sf - 3.0)).abs() <= 0.3;
        parts.push(format!(
            "s={s}: {lo:.3} (want {}), {hi:.3} (want {})",
            sf - 2.0,
            0.5 * (sf - 3.0)
        ));
    }
    pass_if(ok, parts.join("; "))
}

fn mean_ordering() -> Result<(bool, String)> {
    let mut worst = f64::INFINITY;
    for s in 2..=10 {
        worst = worst.min(mean_prefactor(s)? - rho_bulk(s)?);
    }
    pass_if(
        worst > 0.0,
        format!("min over s = 2..10 of 2 xi_(s-1)/(pi xi_s) - rho_bulk = {worst:.4}"),
    )
}

fn main() -> ExitCode {
    let checks: [(u32, &str, Check); 12] = [
        (1, "boundary constants", boundary_constants),
        (2, "bulk densities", bulk_densities),
        (3, "boundary suppression", boundary_suppression),
        (4, "asymptote match", asymptote_match),
        (5, "cuboid distribution", cuboid_distribution),
        (6, "cuboid mean and variance", cuboid_mean_variance),
        (7, "boundary-coefficient fit", boundary_fit),
        (8, "Weyl check", weyl_check),
        (9, "Monte Carlo vs analytic", monte_carlo),
        (10, "fluctuation contrast", fluctuation_contrast),
        (11, "tail exponents", tail_exponents),
        (12, "mean ordering", mean_ordering),
    ];
    let wanted: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (id, name, check) in checks {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "{verdict} [{id:>2}] {name}: {detail} ({:.1} s)",
            t.elapsed().as_secs_f64()
        );
        failed += usize::from(!ok);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
