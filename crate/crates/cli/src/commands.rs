use std::f64::consts::PI;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use phasespace::numerics::{Grid1D, Grid2D};
use phasespace::spin::{self, SpinState, TChoice};
use phasespace::tomography::{
    find_violated_direction, half_circle, marginal_of_quasi, projection_grid, quantum_marginal, reconstruct_with,
    rectangle_modification, smooth_modification, ReconstructionOptions,
};
use phasespace::verify::{run_suite, Tolerances};
use phasespace::weyl::{moyal_expectation_check, weyl_quantize_auto, PhaseSpaceFunction};
use phasespace::wigner::{
    characteristic_function, characteristic_grid, negative_volume, wigner_from_characteristic, wigner_transform,
    QuasiDistribution,
};
use phasespace::{DirectionAB, Marginal, StateSpec, WaveFunction};
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::output::{write_heatmap, write_marginal_csv, write_quasi_csv, Sink};

pub struct RunContext {
    pub hbar: f64,
    pub tol: Tolerances,
    pub sink: Sink,
}

pub fn parse_tolerances(raw: &[String]) -> Result<Tolerances> {
    let mut t = Tolerances::default();
    for item in raw {
        match item.split_once('=') {
            Some((name, v)) => {
                let v: f64 = v.trim().parse().with_context(|| format!("--tol {item}"))?;
                t.named.insert(name.trim().to_string(), v);
            }
            None => t.global = Some(item.trim().parse().with_context(|| format!("--tol {item}"))?),
        }
    }
    Ok(t)
}

fn state(spec: &StateArg, hbar: f64) -> Result<(String, WaveFunction)> {
    let parsed: StateSpec = spec.state.parse()?;
    Ok((spec.state.clone(), parsed.build(hbar)?))
}

fn phase_grid(g: &GridArgs, psi: &WaveFunction) -> Result<Grid2D> {
    let axis = |lo: Option<f64>, hi: Option<f64>, what: &str| -> Result<Option<Grid1D>> {
        match (lo, hi) {
            (Some(a), Some(b)) => Ok(Some(Grid1D::new(a, b, g.n)?)),
            (None, None) => Ok(None),
            _ => bail!("--{what}min and --{what}max must be given together"),
        }
    };
    let gx = axis(g.xmin, g.xmax, "x")?;
    let gp = axis(g.pmin, g.pmax, "p")?;
    Ok(match (gx, gp) {
        (Some(x), Some(p)) => Grid2D::new(x, p),
        (Some(x), None) => Grid2D::new(x, x),
        (None, Some(_)) => bail!("a p range needs an x range"),
        (None, None) => psi.phase_space_grid(g.n)?,
    })
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number '{t}'"))).collect()
}

fn grid_json(g: &Grid2D) -> serde_json::Value {
    json!({ "x": g.gx, "p": g.gp })
}

pub fn dispatch(cx: &RunContext, command: Command) -> Result<bool> {
    match command {
        Command::Wigner(a) => wigner(cx, a),
        Command::Charfn(a) => charfn(cx, a),
        Command::Marginal(a) => marginal(cx, a),
        Command::Tomo(a) => tomo(cx, a),
        Command::Tamper(a) => tamper(cx, a),
        Command::WeylCheck(a) => weyl_check(cx, a),
        Command::Spin(a) => spin_cmd(cx, a),
        Command::Negativity(a) => negativity(cx, a),
        Command::Verify(_) => verify(cx),
    }
}

fn quasi_files(cx: &RunContext, stem: &str, f: &QuasiDistribution) -> Result<Vec<String>> {
    let mut files = Vec::new();
    files.extend(cx.sink.with_file(&format!("{stem}.csv"), |p| write_quasi_csv(p, f))?);
    files.extend(cx.sink.with_file(&format!("{stem}.dat"), |p| write_heatmap(p, f))?);
    Ok(files)
}

fn wigner(cx: &RunContext, a: WignerArgs) -> Result<bool> {
    let (name, psi) = state(&a.state, cx.hbar)?;
    let grid = phase_grid(&a.grid, &psi)?;
    let start = Instant::now();
    let f = match a.route {
        Route::Direct => wigner_transform(&psi, &grid)?,
        Route::Charfn => wigner_from_characteristic(&characteristic_grid(&psi, &grid)?)?,
    };
    let seconds = start.elapsed().as_secs_f64();
    let inv = f.invariants();
    let files = quasi_files(cx, "wigner", &f)?;
    let min = f.values.iter().cloned().fold(f64::INFINITY, f64::min);
    cx.sink.report(
        "wigner.json",
        &json!({
            "state": name,
            "hbar": cx.hbar,
            "route": format!("{:?}", a.route).to_lowercase(),
            "grid": grid_json(&grid),
            "integral": inv.integral,
            "max_abs": f.max_abs(),
            "min": min,
            "bound": 1.0 / (PI * cx.hbar),
            "bound_excess": inv.bound_excess,
            "negative_volume": inv.negative_volume,
            "files": files,
        }),
    )?;
    log::info!("wigner transform took {seconds:.3} s");
    Ok(true)
}

fn charfn(cx: &RunContext, a: CharfnArgs) -> Result<bool> {
    let (name, psi) = state(&a.state, cx.hbar)?;
    let (alphas, betas) = (parse_list(&a.alpha)?, parse_list(&a.beta)?);
    let mut points = Vec::new();
    for &al in &alphas {
        for &be in &betas {
            let v = characteristic_function(&psi, al, be)?;
            points.push((al, be, v.re, v.im));
        }
    }
    let files = cx
        .sink
        .with_file("charfn.csv", |p| {
            let mut text = String::from("alpha,beta,re,im\n");
            for (al, be, re, im) in &points {
                text += &format!("{al},{be},{re},{im}\n");
            }
            Ok(std::fs::write(p, text)?)
        })?
        .into_iter()
        .collect::<Vec<_>>();
    let rows: Vec<_> =
        points.iter().map(|(al, be, re, im)| json!({"alpha": al, "beta": be, "re": re, "im": im})).collect();
    cx.sink.report("charfn.json", &json!({ "state": name, "hbar": cx.hbar, "points": rows, "files": files }))?;
    Ok(true)
}

fn marginal(cx: &RunContext, a: MarginalArgs) -> Result<bool> {
    let (name, psi) = state(&a.state, cx.hbar)?;
    let grid = phase_grid(&a.grid, &psi)?;
    let d = DirectionAB::from_angle(a.theta);
    let zgrid = projection_grid(&grid, d)?;
    let m = match a.source {
        Source::Quantum => quantum_marginal(&psi, d, &zgrid)?,
        Source::Wigner => marginal_of_quasi(&wigner_transform(&psi, &grid)?, d, &zgrid)?,
    };
    let files: Vec<String> = cx.sink.with_file("marginal.csv", |p| write_marginal_csv(p, &m))?.into_iter().collect();
    cx.sink.report(
        "marginal.json",
        &json!({
            "state": name,
            "hbar": cx.hbar,
            "theta": a.theta,
            "direction": d,
            "source": format!("{:?}", a.source).to_lowercase(),
            "grid": m.grid,
            "normalization": m.normalization(),
            "files": files,
        }),
    )?;
    Ok(true)
}

#[derive(Serialize)]
struct TomoReport {
    state: String,
    hbar: f64,
    ndirs: usize,
    l2_error: f64,
    worst_theta: f64,
    worst_residual: f64,
    gaps: Vec<(f64, f64)>,
    grid: serde_json::Value,
    files: Vec<String>,
}

fn tomo(cx: &RunContext, a: TomoArgs) -> Result<bool> {
    let (name, psi) = state(&a.state, cx.hbar)?;
    let grid = phase_grid(&a.grid, &psi)?;
    let thetas = half_circle(a.ndirs);
    let marginals = thetas
        .iter()
        .map(|&t| {
            let d = DirectionAB::from_angle(t);
            Ok(quantum_marginal(&psi, d, &projection_grid(&grid, d)?)?)
        })
        .collect::<Result<Vec<Marginal>>>()?;
    let opts = ReconstructionOptions { allow_gaps: a.allow_gaps, ..Default::default() };
    let rec = reconstruct_with(&marginals, &grid, cx.hbar, opts)?;
    let direct = wigner_transform(&psi, &grid)?;
    let (mut worst_theta, mut worst_residual) = (thetas[0], f64::NEG_INFINITY);
    for (t, m) in thetas.iter().zip(&marginals) {
        let r = marginal_of_quasi(&rec.quasi, m.direction, &m.grid)
            .and_then(|back| back.max_abs_diff(m))
            .unwrap_or(f64::INFINITY);
        if r > worst_residual {
            (worst_theta, worst_residual) = (*t, r);
        }
    }
    let files = quasi_files(cx, "reconstruction", &rec.quasi)?;
    cx.sink.report(
        "tomo.json",
        &TomoReport {
            state: name,
            hbar: cx.hbar,
            ndirs: a.ndirs,
            l2_error: rec.quasi.l2_distance(&direct)?,
            worst_theta,
            worst_residual,
            gaps: rec.gaps,
            grid: grid_json(&grid),
            files,
        },
    )?;
    Ok(true)
}

fn tamper(cx: &RunContext, a: TamperArgs) -> Result<bool> {
    let (name, psi) = state(&a.state, cx.hbar)?;
    let grid = phase_grid(&a.grid, &psi)?;
    let f = wigner_transform(&psi, &grid)?;
    let g = match a.kind {
        TamperKind::Rect => rectangle_modification(&f, a.a, a.b, a.c)?,
        TamperKind::Smooth => smooth_modification(&f, a.a, a.b, a.c)?,
    };
    let axes = find_violated_direction(&g, &psi, &[0.0, PI / 2.0])?;
    let scan = find_violated_direction(&g, &psi, &half_circle(a.ndirs))?;
    let detect = cx.tol.named.get("tamper.detect").copied().unwrap_or(1e-3);
    let axis_tol = cx.tol.resolve("tamper.axis", phasespace::verify::Bound::Below, 1e-9);
    let files = quasi_files(cx, "tampered", &g)?;
    cx.sink.report(
        "tamper.json",
        &json!({
            "state": name,
            "hbar": cx.hbar,
            "kind": format!("{:?}", a.kind).to_lowercase(),
            "c": a.c, "a": a.a, "b": a.b,
            "axis_residual": axes.residual,
            "axis_marginals_preserved": axes.residual < axis_tol,
            "theta": scan.theta,
            "residual": scan.residual,
            "detected": scan.residual > detect,
            "residuals": scan.residuals,
            "files": files,
        }),
    )?;
    Ok(true)
}

fn weyl_check(cx: &RunContext, a: WeylArgs) -> Result<bool> {
    let (name, psi) = state(&a.state, cx.hbar)?;
    let g = PhaseSpaceFunction::named(&a.g, a.epsilon)?;
    let check = moyal_expectation_check(&g, &psi, a.dim)?;
    let tol = cx.tol.resolve("weyl.moyal", phasespace::verify::Bound::Below, 1e-4);
    let mut files = Vec::new();
    if a.matrix {
        let op = weyl_quantize_auto(&g, a.dim, cx.hbar)?;
        files.extend(cx.sink.with_file("weyl_matrix.csv", |p| Ok(op.write_csv(p)?))?);
        if files.is_empty() {
            log::warn!("--matrix needs --out DIR; matrix not written");
        }
    }
    cx.sink.report(
        "weyl.json",
        &json!({
            "g": a.g, "state": name, "hbar": cx.hbar, "dim": a.dim, "epsilon": a.epsilon,
            "lhs": check.lhs, "rhs": check.rhs, "diff": check.diff,
            "tolerance": tol, "passed": check.diff < tol, "files": files,
        }),
    )?;
    Ok(true)
}

fn spin_cmd(cx: &RunContext, a: SpinArgs) -> Result<bool> {
    let st: SpinState = a.state.parse()?;
    let choice: TChoice = a.t.parse()?;
    let e = spin::expectations(&st)?;
    let f = spin::feynman_choice_with(&st, choice)?;
    let window = spin::nonneg_window(e.z, e.x)?;
    cx.sink.report(
        "spin.json",
        &json!({
            "state": { "c0": [st.c0.re, st.c0.im], "c1": [st.c1.re, st.c1.im] },
            "expectations": e,
            "t": f.t,
            "choice": a.t,
            "f": { "fpp": f.fpp, "fpm": f.fpm, "fmp": f.fmp, "fmm": f.fmm },
            "window": [window.0, window.1],
            "nonnegative": f.is_nonnegative(),
            "marginal_residuals": spin::marginal_residuals(&f, e.z, e.x),
            "zx_report": spin::zx_sum_spectrum_report(&f),
        }),
    )?;
    Ok(true)
}

fn negativity(cx: &RunContext, a: NegativityArgs) -> Result<bool> {
    let report = match (&a.values, &a.state) {
        (Some(v), None) => {
            let w = parse_list(v)?;
            json!({ "source": "values", "values": w, "negative_volume": negative_volume(&w[..]) })
        }
        (None, spec) => {
            let spec = StateArg { state: spec.clone().unwrap_or_else(|| "hermite:1".into()) };
            let (name, psi) = state(&spec, cx.hbar)?;
            let grid = phase_grid(&a.grid, &psi)?;
            let f = wigner_transform(&psi, &grid)?;
            json!({ "source": "wigner", "state": name, "hbar": cx.hbar, "grid": grid_json(&grid), "negative_volume": negative_volume(&f) })
        }
        _ => bail!("give either --values or --state"),
    };
    cx.sink.report("negativity.json", &report)?;
    Ok(true)
}

fn verify(cx: &RunContext) -> Result<bool> {
    let start = Instant::now();
    let checks = run_suite(cx.hbar, &cx.tol);
    let passed = checks.iter().all(|c| c.passed);
    for c in &checks {
        let op = match c.bound {
            phasespace::verify::Bound::Below => "<",
            phasespace::verify::Bound::Above => ">",
        };
        let mark = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("{mark} {:<40} {:>12.4e} {op} {:.1e}  {:.2} s", c.name, c.value, c.threshold, c.seconds);
    }
    eprintln!("{} checks in {:.2} s", checks.len(), start.elapsed().as_secs_f64());
    cx.sink.report("verify.json", &json!({ "hbar": cx.hbar, "passed": passed, "checks": checks }))?;
    Ok(passed)
}
