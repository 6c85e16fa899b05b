use std::f64::consts::PI;

use crate::cluster::{gap_rows, gap_spectra, sandwich_spectra};
use crate::density::{empirical_vs_limit, geodesic_average, rho_curve, weinstein_comparison};
use crate::error::{Error, Result};
use crate::galerkin::{odd_eigenspace_construction, robin_kernel_dimension, robin_spectrum};
use crate::report::{fmt17, RunManifest, Sink, Table};
use crate::sl1d::{eigenvalue_table, Sl1dProblem, Sl1dRow};
use crate::verify::{run_timed, VerifyOptions};

use super::{RunConfig, EXIT_CRITERION, EXIT_OK};

fn sink(cfg: &RunConfig) -> Result<Sink> {
    Sink::new(cfg.out.as_deref())
}

/// Writes manifest.json when an output directory is set.
fn manifest(cfg: &RunConfig, sink: &Sink, command: &str, files: &[&str]) -> Result<()> {
    if let Sink::Dir(_) = sink {
        let m = RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters: cfg.echo.clone(),
            files: files.iter().map(|s| s.to_string()).collect(),
        };
        let text = serde_json::to_string_pretty(&m).map_err(|e| Error::numerical(e.to_string()))?;
        sink.emit_text("manifest.json", &text)?;
    }
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::numerical(e.to_string()))
}

/// CSV `gaps.csv` with columns (ell, k, gap).
pub fn cmd_cluster_spectrum(cfg: &RunConfig) -> Result<i32> {
    let sigma = cfg.sigma()?;
    let ells = cfg.ells()?;
    let spectra = gap_spectra(sigma, &ells)?;
    let mut t = Table::new(&["ell", "k", "gap"]);
    for (ell, k, g) in gap_rows(&spectra) {
        t.push(vec![ell.to_string(), k.to_string(), fmt17(g)]);
    }
    let s = sink(cfg)?;
    s.emit_table("gaps.csv", &t)?;
    manifest(cfg, &s, "cluster-spectrum", &["gaps.csv"])?;
    Ok(EXIT_OK)
}

fn default_y_range(cfg: &RunConfig) -> Result<(f64, f64)> {
    let even = cfg.sigma()?.even_part();
    let top = 4.0 * even.sup_on_grid(1024) / PI;
    let r = 2.0 * top.max(0.25) + 1.0;
    Ok((cfg.y_min.unwrap_or(-r), cfg.y_max.unwrap_or(r)))
}

fn rho_table(cfg: &RunConfig) -> Result<Table> {
    let (y0, y1) = default_y_range(cfg)?;
    let n = cfg.points.unwrap_or(201);
    let mut t = Table::new(&["y", "rho"]);
    for (y, r) in rho_curve(cfg.sigma()?, y0, y1, n)? {
        t.push(vec![fmt17(y), fmt17(r)]);
    }
    Ok(t)
}

/// `density.csv` (ell, empirical, limit, deviation) and `rho.csv` (y, rho).
pub fn cmd_density(cfg: &RunConfig) -> Result<i32> {
    let sigma = cfg.sigma()?;
    let f = cfg.f()?;
    let ladder = cfg
        .ladder
        .clone()
        .ok_or_else(|| Error::input("--ladder is required"))?;
    let r = empirical_vs_limit(sigma, f, &ladder)?;
    let mut t = Table::new(&["ell", "empirical", "limit", "deviation"]);
    for i in 0..r.ells.len() {
        t.push(vec![
            r.ells[i].to_string(),
            fmt17(r.empirical[i]),
            fmt17(r.limit),
            fmt17(r.deviations[i]),
        ]);
    }
    let s = sink(cfg)?;
    s.emit_table("density.csv", &t)?;
    s.emit_table("rho.csv", &rho_table(cfg)?)?;
    manifest(cfg, &s, "density", &["density.csv", "rho.csv"])?;
    Ok(EXIT_OK)
}

/// `rho.csv` (y, rho).
pub fn cmd_rho(cfg: &RunConfig) -> Result<i32> {
    let s = sink(cfg)?;
    s.emit_table("rho.csv", &rho_table(cfg)?)?;
    manifest(cfg, &s, "rho", &["rho.csv"])?;
    Ok(EXIT_OK)
}

/// `weinstein.csv` (naive, correct, ratio, substitution_check) and
/// `geodesic.csv` (theta, phi, average, limit) at strip width --epsilon.
pub fn cmd_weinstein(cfg: &RunConfig) -> Result<i32> {
    let sigma = cfg.sigma()?;
    let f = cfg.f()?;
    let w = weinstein_comparison(sigma, f)?;
    let mut t = Table::new(&["naive", "correct", "ratio", "substitution_check"]);
    let ratio = if w.correct != 0.0 {
        w.naive / w.correct
    } else {
        f64::NAN
    };
    t.push(vec![
        fmt17(w.naive),
        fmt17(w.correct),
        fmt17(ratio),
        fmt17(w.substitution_check),
    ]);

    let eps = cfg.epsilon.unwrap_or(1e-3);
    let even = sigma.even_part();
    let mut g = Table::new(&["theta", "phi", "average", "limit"]);
    for theta in [PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0] {
        for phi in [0.0, PI / 4.0, PI / 2.0] {
            let avg = geodesic_average(theta, phi, sigma, eps)?;
            let lim = 2.0 * even.value(phi + PI / 2.0) / (PI * theta.sin());
            g.push(vec![fmt17(theta), fmt17(phi), fmt17(avg), fmt17(lim)]);
        }
    }
    let s = sink(cfg)?;
    s.emit_table("weinstein.csv", &t)?;
    s.emit_table("geodesic.csv", &g)?;
    manifest(cfg, &s, "weinstein", &["weinstein.csv", "geodesic.csv"])?;
    Ok(EXIT_OK)
}

/// `spectrum.csv` (index, eigenvalue, cluster, gap, trusted); with --ell and
/// --epsilon also `sandwich.csv` (k, galerkin_gap, lower, upper).
pub fn cmd_galerkin(cfg: &RunConfig) -> Result<i32> {
    let sigma = cfg.sigma()?;
    let spec = robin_spectrum(sigma, cfg.lmax()?)?;
    let mut t = Table::new(&["index", "eigenvalue", "cluster", "gap", "trusted"]);
    let mut cluster = 0usize;
    let mut start = 0usize;
    for (i, &v) in spec.eigenvalues.iter().enumerate() {
        if i >= start + cluster + 1 {
            start += cluster + 1;
            cluster += 1;
        }
        let c = (cluster * (cluster + 1)) as f64;
        t.push(vec![
            i.to_string(),
            fmt17(v),
            cluster.to_string(),
            fmt17(v - c),
            (cluster <= spec.trusted_ell).to_string(),
        ]);
    }
    let s = sink(cfg)?;
    s.emit_table("spectrum.csv", &t)?;
    let mut files = vec!["spectrum.csv"];
    if let (Some(ell), Some(eps)) = (cfg.ell, cfg.epsilon) {
        let gaps = spec.cluster_gaps(ell)?;
        let (lo, hi) = sandwich_spectra(sigma, ell, eps)?;
        let mut st = Table::new(&["k", "galerkin_gap", "lower", "upper"]);
        for k in 0..gaps.len() {
            st.push(vec![
                (k + 1).to_string(),
                fmt17(gaps[k]),
                fmt17(lo.gaps[k]),
                fmt17(hi.gaps[k]),
            ]);
        }
        s.emit_table("sandwich.csv", &st)?;
        files.push("sandwich.csv");
    }
    manifest(cfg, &s, "galerkin", &files)?;
    Ok(EXIT_OK)
}

fn sl1d_table(rows: &[Sl1dRow]) -> Table {
    let mut t = Table::new(&["n", "lambda", "gap"]);
    for r in rows {
        t.push(vec![r.n.to_string(), fmt17(r.lambda), fmt17(r.gap)]);
    }
    t
}

/// `sl1d_robin.csv` and `sl1d_step.csv`, columns (n, lambda, gap). Modes
/// from --ladder (default 1:20:1); σ must be constant.
pub fn cmd_sl1d(cfg: &RunConfig) -> Result<i32> {
    let sigma = cfg.sigma()?;
    if sigma.degree() != 0 {
        return Err(Error::input("sl1d needs a constant σ"));
    }
    let s0 = sigma.mean();
    let modes = cfg.ladder.clone().unwrap_or_else(|| (1..=20).collect());
    if modes.contains(&0) {
        return Err(Error::input("ladder: modes are numbered from 1"));
    }
    let eps = cfg.epsilon.unwrap_or(0.1);
    if eps >= 1.0 {
        return Err(Error::input("epsilon must lie in (0, 1)"));
    }
    let robin = eigenvalue_table(&Sl1dProblem::robin(s0), &modes)?;
    let step = eigenvalue_table(&Sl1dProblem::step(s0, eps), &modes)?;
    let s = sink(cfg)?;
    s.emit_table("sl1d_robin.csv", &sl1d_table(&robin))?;
    s.emit_table("sl1d_step.csv", &sl1d_table(&step))?;
    manifest(cfg, &s, "sl1d", &["sl1d_robin.csv", "sl1d_step.csv"])?;
    Ok(EXIT_OK)
}

/// `odd.json`: the construction plus the kernel dimension of the
/// boundary-condition map as an independent count.
pub fn cmd_odd_construct(cfg: &RunConfig) -> Result<i32> {
    let sigma = cfg.sigma()?;
    let ell = cfg.ell()?;
    let c = odd_eigenspace_construction(sigma, ell)?;
    let kernel = robin_kernel_dimension(sigma, ell)?;
    let out = serde_json::json!({
        "construction": c,
        "kernel_dimension": kernel,
    });
    let s = sink(cfg)?;
    s.emit_text("odd.json", &json(&out)?)?;
    manifest(cfg, &s, "odd-construct", &["odd.json"])?;
    Ok(EXIT_OK)
}

/// `verdict.json`; one line per criterion on stderr. Exit 1 if any fails.
pub fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let mut opts = VerifyOptions {
        only: cfg.only.clone(),
        ..VerifyOptions::default()
    };
    if let Some(seed) = cfg.seed {
        opts.seed = seed;
    }
    let report = run_timed(&opts, |v, secs| eprintln!("{} [{secs:.2} s]", v.line()));
    let s = sink(cfg)?;
    s.emit_text("verdict.json", &report.to_json()?)?;
    manifest(cfg, &s, "verify", &["verdict.json"])?;
    Ok(if report.all_pass {
        EXIT_OK
    } else {
        EXIT_CRITERION
    })
}
