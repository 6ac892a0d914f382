//! Subcommand implementations. Each returns a [`Report`]; pass/fail of the
//! report decides the exit status.

use std::path::Path;

use nctorus::gauge::{chern2, cs_action, gauge_variation_defect, variation_scale, winding_unchecked, GaugePotential};
use nctorus::io::{load_element, load_potential, save_element, save_potential};
use nctorus::powers_rieffel::{build_projection, build_unitary, projection_defect};
use nctorus::random::{random_hermitian, random_monomial_unitary, seeded};
use nctorus::selftest::{run_all, SuiteConfig};
use nctorus::spectral::{expected_residue, LaplaceSpectrum};
use nctorus::{Complex64, Result, TorusElement};

use crate::config::RunConfig;
use crate::report::Report;

const POTENTIAL_RADIUS: i64 = 2;
const POTENTIAL_TERMS: usize = 6;

fn pr_fields(r: &mut Report, cfg: &RunConfig) {
    r.field("alpha", cfg.pr.alpha);
    r.field("eps", cfg.pr.eps);
    r.field("trunc", cfg.pr.trunc);
    r.field("samples", cfg.pr.samples);
}

pub fn winding(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new("winding");
    pr_fields(&mut r, cfg);
    let e = build_projection(&cfg.pr)?;
    r.field("projection_defect", projection_defect(&e)?);
    let u = build_unitary(&e, cfg.tol.projection)?;
    r.columns(&["n", "winding_re", "winding_im", "error", "defect_unitary"]);
    let mut worst: f64 = 0.0;
    let mut un = u.clone();
    for n in 1..=cfg.max_power {
        if n > 1 {
            un = un.mul(&u)?;
        }
        let w = winding_unchecked(&un)? / (24.0 * std::f64::consts::PI.powi(2));
        let err = (w - Complex64::new(n as f64, 0.0)).norm();
        worst = worst.max(err);
        r.row(vec![
            n.into(),
            w.re.into(),
            w.im.into(),
            err.into(),
            un.defect_unitary().into(),
        ]);
    }
    r.check("max |winding(U^n) - n|", worst, cfg.tol.winding);
    Ok(r)
}

pub fn projection(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new("projection");
    pr_fields(&mut r, cfg);
    let e = build_projection(&cfg.pr)?;
    let tr = e.trace();
    let ch = chern2(&e)?;
    r.field("trace_re", tr.re);
    r.field("trace_im", tr.im);
    r.field("projection_defect", projection_defect(&e)?);
    r.field("hermitian_defect", e.hermitian_defect());
    r.field("chern2_re", ch.re);
    r.field("chern2_im", ch.im);
    r.check(
        "|trace(e) - alpha|",
        (tr - Complex64::new(cfg.pr.alpha, 0.0)).norm(),
        cfg.tol.trace,
    );
    r.check("|chern2(e) - 1|", (ch - Complex64::new(1.0, 0.0)).norm(), cfg.tol.chern);
    Ok(r)
}

pub fn gauge_check(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new("gauge-check");
    let theta = cfg.deformation()?;
    let k = cfg.coupling()?;
    r.field("theta12", cfg.theta[0]);
    r.field("theta13", cfg.theta[1]);
    r.field("theta23", cfg.theta[2]);
    r.field("n", cfg.n);
    r.field("k", cfg.k);
    r.field("seed", cfg.seed);
    r.field("cases", cfg.cases);
    let mut rng = seeded(cfg.seed);
    let (mut max_defect, mut max_ratio): (f64, f64) = (0.0, 0.0);
    for _ in 0..cfg.cases {
        let comps =
            std::array::from_fn(|_| random_hermitian(&mut rng, theta, cfg.n, POTENTIAL_RADIUS, POTENTIAL_TERMS));
        let a = GaugePotential::new(comps)?;
        let u = random_monomial_unitary(&mut rng, theta, cfg.n, POTENTIAL_RADIUS);
        let d = gauge_variation_defect(&a, &u, k, cfg.tol.unitary)?;
        max_defect = max_defect.max(d);
        max_ratio = max_ratio.max(d / variation_scale(&a, &u, k)?);
    }
    r.field("max_defect", max_defect);
    r.check("max defect / scale", max_ratio, cfg.tol.gauge);
    Ok(r)
}

pub fn residue(cfg: &RunConfig, csv: Option<&Path>, csv_points: usize) -> Result<Report> {
    let mut r = Report::new("residue");
    let spectrum = LaplaceSpectrum::scaled(cfg.scale)?;
    let estimate = spectrum.residue_estimate(&cfg.grid)?;
    let expected = expected_residue() * cfg.scale.powf(-1.5);
    let (slope, _) = spectrum.loglog_fit(&cfg.grid)?;
    let grid: Vec<String> = cfg.grid.iter().map(|t| format!("{t:?}")).collect();
    r.field("scale", cfg.scale);
    r.field("grid", grid.join(","));
    r.field("estimate", estimate);
    r.field("expected", expected);
    r.field("fit_slope", slope);
    if let Some(path) = csv {
        let ts: Vec<f64> = if csv_points >= 2 {
            let lo = cfg.grid.iter().cloned().fold(f64::INFINITY, f64::min).ln();
            let hi = cfg.grid.iter().cloned().fold(0.0, f64::max).ln();
            (0..csv_points)
                .map(|j| (lo + (hi - lo) * j as f64 / (csv_points - 1) as f64).exp())
                .collect()
        } else {
            cfg.grid.clone()
        };
        let mut text = String::from("t,heat_trace\n");
        for t in ts {
            text += &format!("{t:?},{:?}\n", spectrum.heat_trace(t)?);
        }
        std::fs::write(path, text)?;
        r.field("csv", path.display().to_string());
    }
    r.check(
        "relative error",
        ((estimate - expected) / expected).abs(),
        cfg.tol.residue,
    );
    Ok(r)
}

pub fn selftest(cfg: &RunConfig) -> Result<Report> {
    let mut r = Report::new("selftest");
    r.field("seed", cfg.seed);
    let suite = SuiteConfig {
        seed: cfg.seed,
        ..SuiteConfig::default()
    };
    r.field("cases", suite.cases);
    r.field("oracle_cases", suite.oracle_cases);
    r.field("n_rep", suite.n_rep);
    for c in run_all(&suite)? {
        r.check(&c.name, c.value, c.tol);
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportKind {
    Projection,
    Unitary,
    Potential,
}

fn element_fields(r: &mut Report, a: &TorusElement) {
    let (l1, linf) = a.norms();
    let tr = a.trace();
    r.field("n", a.n());
    r.field("theta12", a.theta().theta12());
    r.field("theta13", a.theta().theta13());
    r.field("theta23", a.theta().theta23());
    r.field("support", a.support_len());
    r.field("radius", a.radius());
    r.field("l1", l1);
    r.field("linf", linf);
    r.field("trace_re", tr.re);
    r.field("trace_im", tr.im);
    r.field("hermitian_defect", a.hermitian_defect());
    r.field("unitary_defect", a.defect_unitary());
}

pub fn export(cfg: &RunConfig, kind: ExportKind, out: &Path) -> Result<Report> {
    let mut r = Report::new("export");
    r.field("path", out.display().to_string());
    match kind {
        ExportKind::Projection | ExportKind::Unitary => {
            pr_fields(&mut r, cfg);
            let e = build_projection(&cfg.pr)?;
            let a = if kind == ExportKind::Unitary {
                build_unitary(&e, cfg.tol.projection)?
            } else {
                e
            };
            save_element(out, &a)?;
            element_fields(&mut r, &a);
        }
        ExportKind::Potential => {
            let theta = cfg.deformation()?;
            let k = cfg.coupling()?;
            let mut rng = seeded(cfg.seed);
            let comps =
                std::array::from_fn(|_| random_hermitian(&mut rng, theta, cfg.n, POTENTIAL_RADIUS, POTENTIAL_TERMS));
            let a = GaugePotential::new(comps)?;
            save_potential(out, &a, k)?;
            r.field("seed", cfg.seed);
            r.field("k", cfg.k);
            r.field("l1", a.l1());
        }
    }
    Ok(r)
}

pub fn import(path: &Path, with: Option<&Path>, potential: bool) -> Result<Report> {
    let mut r = Report::new("import");
    r.field("path", path.display().to_string());
    if potential {
        let (a, k) = load_potential(path)?;
        let s = cs_action(&a, k)?;
        r.field("k", k.value());
        r.field("l1", a.l1());
        r.field("cs_action_re", s.re);
        r.field("cs_action_im", s.im);
        return Ok(r);
    }
    let mut a = load_element(path)?;
    if let Some(other) = with {
        r.field("with", other.display().to_string());
        a = a.mul(&load_element(other)?)?;
    }
    element_fields(&mut r, &a);
    Ok(r)
}
