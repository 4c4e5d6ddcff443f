//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines are never captured.

use std::f64::consts::PI;
use std::fs;
use std::panic;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasicircle::analysis::{carleson_density, carleson_norm, lemma1_row_integral, CarlesonGeometry};
use quasicircle::beltrami::{neumann_solve, solve_beltrami, solve_inhomogeneous, BeltramiCoefficient};
use quasicircle::cli::{compare_theorem1, Theorem1Config};
use quasicircle::field::{bandlimited_noise, indicator_ball, ComplexField, Grid, Weight};
use quasicircle::geometry::{
    ba_extension, ba_extension_with_factor, bilipschitz_profile, chord_arc_constant, curve_cauchy_operator,
    trace_curve, Identity, MapEvaluator, Prop2Map, Sector,
};
use quasicircle::transforms::{
    cauchy_line_extension, cauchy_plane_direct, dq_kernel_transform, fit_kernel_constant, hilbert,
    plemelj_boundary, wirtinger, LineFunction, SpectralPlan,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn z(x: f64, y: f64) -> C64 {
    C64::new(x, y)
}

fn grid(l: f64, n: usize) -> Grid {
    Grid::new(l, n).unwrap()
}

fn rel(a: &ComplexField, b: &ComplexField) -> f64 {
    a.sub(b).norm(Weight::Unweighted) / b.norm(Weight::Unweighted)
}

fn ball_error(n: usize) -> f64 {
    let g = grid(8.0, n);
    let plan = SpectralPlan::new(g, 2).unwrap();
    let s = plan.beurling(&indicator_ball(&g, z(0.0, 0.0), 1.0, 0.0).unwrap()).unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for (i, p) in g.points() {
        if (2.0..=4.0).contains(&p.norm()) {
            // kernel -1/(pi (w - z)^2) on the unit disc: -r^2 / z^2 outside
            let exact = -(p * p).inv();
            num += (s.values()[i] - exact).norm_sqr();
            den += exact.norm_sqr();
        }
    }
    (num / den).sqrt()
}

fn c01_beurling_ball() -> Outcome {
    let (e512, e1024) = (ball_error(512), ball_error(1024));
    ensure!(e1024 <= 0.02, "error at n=1024 is {e1024:.3e}");
    ensure!(e1024 <= 0.6 * e512, "no refinement gain: {e512:.3e} -> {e1024:.3e}");
    Ok(format!("rel L2 error {e512:.3e} (n=512) -> {e1024:.3e} (n=1024)"))
}

fn c02_isometry() -> Outcome {
    let g = grid(8.0, 256);
    let plan = SpectralPlan::new(g, 2).unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let f = bandlimited_noise(&g, seed, 0.35).unwrap();
        ensure!(f.values().iter().sum::<C64>().norm() < 1e-9 * f.max_abs() * g.len() as f64, "seed {seed} not mean-zero");
        let ratio = plan.beurling_extended(&f).unwrap().norm(Weight::Unweighted) / f.norm(Weight::Unweighted);
        worst = worst.max((ratio - 1.0).abs());
    }
    ensure!(worst <= 1e-12, "worst defect {worst:.3e}");
    Ok(format!("worst |ratio - 1| = {worst:.3e} over 20 seeds"))
}

fn c03_t_contract() -> Outcome {
    let g = grid(8.0, 256);
    let plan = SpectralPlan::periodic(g);
    let (mut wd, mut wdbar): (f64, f64) = (0.0, 0.0);
    for seed in 0..4 {
        let f = bandlimited_noise(&g, 100 + seed, 0.1).unwrap();
        let (d, dbar) = wirtinger(&plan.cauchy_plane(&f).unwrap());
        wdbar = wdbar.max(rel(&dbar, &f));
        wd = wd.max(rel(&d, &plan.beurling(&f).unwrap()));
    }
    ensure!(wdbar <= 1e-4 && wd <= 1e-4, "dbar {wdbar:.3e}, d {wd:.3e}");
    Ok(format!("dbar T f = f: {wdbar:.3e}; d T f = S f: {wd:.3e}"))
}

fn c04_lemma1() -> Outcome {
    let g = grid(8.0, 256);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = z(rng.gen_range(-7.5..7.5), rng.gen_range(0.05..7.5));
        let v = lemma1_row_integral(p, &g).map_err(|e| e.to_string())?;
        ensure!(v >= 0.0, "negative row integral at {p}");
        worst = worst.max(v);
    }
    ensure!(worst <= 4.0 * PI * 1.001, "row integral {worst}");
    Ok(format!("max row integral {worst:.4} (bound {:.4}, whole half-plane value pi)", 4.0 * PI))
}

fn c05_theorem1() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Theorem1Config { out: dir.path().to_path_buf(), ..Default::default() };
    let table = compare_theorem1(&cfg).map_err(|e| e.to_string())?;
    ensure!(table.rows.len() == 12, "family has {} members", table.rows.len());
    ensure!(table.converged, "power iteration did not converge");
    let c = table.bracket_constant;
    ensure!(c <= 100.0, "bracket constant {c}");
    let base = table.rows[cfg.sweep_member].operator_norm;
    let mut worst: f64 = 0.0;
    for s in &table.sweep {
        worst = worst.max((s.operator_norm - s.t * base).abs() / (s.t * base));
    }
    ensure!(worst <= 1e-9, "homogeneity defect {worst:.3e}");
    Ok(format!(
        "ratios in [{:.3}, {:.3}], C = {c:.3}; homogeneity defect {worst:.1e}; norm^2 slope {:.6}",
        table.ratio_min, table.ratio_max, table.sweep_slope
    ))
}

fn c06_neumann() -> Outcome {
    let g = grid(8.0, 128);
    let plan = SpectralPlan::new(g, 2).unwrap();
    let mut notes = Vec::new();
    for c in [0.2, 0.5, 0.8] {
        let mu = BeltramiCoefficient::ball(&g, z(c, 0.0), z(0.0, 2.0), 1.0, 0.5).unwrap();
        let map = solve_beltrami(&plan, &mu, 1e-8, 100).map_err(|e| e.to_string())?;
        let r = map.report();
        ensure!(r.converged && r.last_residual() <= 1e-8, "c={c}: residual {:.3e}", r.last_residual());
        ensure!(r.iterations <= 100, "c={c}: {} iterations", r.iterations);
        let ratio = r.contraction_ratios().into_iter().fold(0.0, f64::max);
        ensure!(ratio <= c + 0.05, "c={c}: contraction ratio {ratio:.3}");
        notes.push(format!("c={c}: {} its, ratio {ratio:.3}", r.iterations));
    }
    let phi = bandlimited_noise(&g, 9, 0.3).unwrap();
    let r = neumann_solve(&plan, &BeltramiCoefficient::zero(g), &phi, 1e-10, 10).map_err(|e| e.to_string())?;
    ensure!(r.solution.values() == phi.values(), "mu = 0 did not return phi");
    notes.push("mu=0 returns phi exactly".into());
    Ok(notes.join("; "))
}

fn smooth_bump(p: C64, center: C64, r: f64) -> f64 {
    let s = (p - center).norm_sqr() / (r * r);
    if s < 1.0 {
        (-1.0 / (1.0 - s)).exp()
    } else {
        0.0
    }
}

/// Relative gap between `∫ (Tg) h dx` and `2i ∫ g C_h dm`. The left side
/// averages direct-quadrature `Tg` over the two grid rows next to the axis;
/// the right side uses a fine line quadrature for `C_h`.
fn lemma4_gap(n: usize, g_fn: &dyn Fn(C64) -> C64, h_fn: &dyn Fn(f64) -> C64) -> f64 {
    let gr = grid(8.0, n);
    let g = ComplexField::from_fn(gr, g_fn);
    let line = LineFunction::from_fn(8.0, 16384, h_fn).unwrap();
    let support: Vec<(usize, C64)> = gr.points().filter(|&(i, _)| g.values()[i] != C64::new(0.0, 0.0)).collect();
    let pts: Vec<C64> = support.iter().map(|p| p.1).collect();
    let ch = cauchy_line_extension(&line, &pts).unwrap();
    let rhs = support.iter().zip(&ch).map(|(&(i, _), c)| g.values()[i] * c).sum::<C64>() * gr.cell_area() * z(0.0, 2.0);
    let h = gr.spacing();
    let rows: Vec<C64> = (0..n).flat_map(|j| [z(gr.x(j), -0.5 * h), z(gr.x(j), 0.5 * h)]).collect();
    let tg = cauchy_plane_direct(&g, &rows);
    let lhs = (0..n).map(|j| 0.5 * (tg[2 * j] + tg[2 * j + 1]) * h_fn(gr.x(j))).sum::<C64>() * h;
    (lhs - rhs).norm() / rhs.norm()
}

fn c07_lemma4() -> Outcome {
    let poly = |a: f64, w: f64| move |x: f64| if (x - a).abs() < w { (1.0 - ((x - a) / w).powi(2)).powi(4) } else { 0.0 };
    let pairs: Vec<(Box<dyn Fn(C64) -> C64>, Box<dyn Fn(f64) -> C64>)> = vec![
        (Box::new(|p| C64::from(smooth_bump(p, z(0.0, 2.0), 1.0))), Box::new(move |x| C64::from(poly(0.0, 3.0)(x)))),
        (
            Box::new(|p| z(0.5, 0.2) * smooth_bump(p, z(0.5, 2.0), 1.2) + smooth_bump(p, z(-1.0, -1.5), 1.0)),
            Box::new(move |x| C64::from(poly(0.0, 3.0)(x) * (1.0 + 0.3 * x))),
        ),
        (
            Box::new(|p| C64::from(smooth_bump(p, z(-2.0, -2.5), 1.5))),
            Box::new(move |x| z(1.0, -0.5) * poly(-1.0, 2.0)(x)),
        ),
        (
            Box::new(|p| z(0.0, 1.0) * smooth_bump(p, z(1.5, 1.5), 0.8) * (p.re - 1.5)),
            Box::new(move |x| C64::from(poly(1.0, 2.5)(x) * (2.0 * x).cos())),
        ),
        (
            Box::new(|p| C64::from(smooth_bump(p, z(3.0, 3.0), 2.0) - smooth_bump(p, z(-3.0, 1.5), 1.0))),
            Box::new(move |x| C64::from(poly(0.5, 3.5)(x))),
        ),
    ];
    let mut gaps = Vec::new();
    for (k, (g, h)) in pairs.iter().enumerate() {
        let (a, b) = (lemma4_gap(512, g, h), lemma4_gap(1024, g, h));
        ensure!(a <= 1e-3, "pair {k}: gap {a:.3e} at n=512");
        ensure!(b < a, "pair {k}: no improvement {a:.3e} -> {b:.3e}");
        gaps.push(format!("{a:.1e}->{b:.1e}"));
    }
    Ok(format!("relative gaps n=512->1024: {}", gaps.join(", ")))
}

fn prop1_ratio(n: usize, c: f64) -> Result<f64, String> {
    let g = grid(8.0, n);
    let plan = SpectralPlan::new(g, 2).unwrap();
    let mu = if c == 0.0 {
        BeltramiCoefficient::zero(g)
    } else {
        BeltramiCoefficient::ball(&g, z(c, 0.0), z(0.0, 2.0), 1.0, 0.5).unwrap()
    };
    let f = LineFunction::compact_real(8.0, 2048, |x| (1.0 - (x / 2.0).powi(2)).max(0.0).powi(3)).unwrap();
    let sol = solve_inhomogeneous(&plan, &mu, &f, 1e-10, 200).map_err(|e| e.to_string())?;
    if c == 0.0 && sol.boundary.values().iter().any(|v| *v != C64::new(0.0, 0.0)) {
        return Err("mu = 0 gave nonzero boundary values".into());
    }
    Ok(sol.boundary.l2_norm() / f.l2_norm())
}

fn c08_prop1() -> Outcome {
    let ratios: Vec<f64> = [128, 256, 512].iter().map(|&n| prop1_ratio(n, 0.4)).collect::<Result<_, _>>()?;
    ensure!(ratios.iter().all(|r| r.is_finite() && *r > 0.0), "ratios {ratios:?}");
    for w in ratios.windows(2) {
        ensure!((w[1] / w[0] - 1.0).abs() <= 0.15, "unstable ratios {ratios:?}");
    }
    let zero = prop1_ratio(128, 0.0)?;
    ensure!(zero == 0.0, "mu = 0 ratio {zero}");
    Ok(format!("|H|/|f| over n=128,256,512: {:.4}, {:.4}, {:.4}; mu=0 gives 0", ratios[0], ratios[1], ratios[2]))
}

fn c09_prop2() -> Outcome {
    let k = 1.5;
    let map = Prop2Map::new(k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut modulus_err: f64 = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut conformal: f64 = 0.0;
    for _ in 0..10_000 {
        let p = z(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0));
        if p.norm() < 1e-3 {
            continue;
        }
        let w = map.eval(p).map_err(|e| e.to_string())?;
        modulus_err = modulus_err.max((w.norm() / p.norm().powf(1.0 / k) - 1.0).abs());
        let mu = map.mu_fd(p, 1e-3).map_err(|e| e.to_string())?.norm();
        if Sector::of(p).is_conformal() {
            conformal = conformal.max(mu);
        } else {
            lo = lo.min(mu);
            hi = hi.max(mu);
        }
    }
    ensure!(modulus_err <= 1e-12, "|rho| defect {modulus_err:.3e}");
    ensure!(hi - lo <= 1e-6, "|mu| spread {:.3e}", hi - lo);
    ensure!((hi - (1.0 - 1.0 / k)).abs() <= 1e-6, "|mu| = {hi}, expected {}", 1.0 - 1.0 / k);
    ensure!(conformal <= 1e-6, "|mu| = {conformal:.3e} on the conformal sectors");
    let pairs: Vec<(C64, C64)> = (1..=14)
        .flat_map(|j| {
            let x = 0.5f64.powi(j);
            [(z(x, 0.0), z(0.0, 0.0)), (z(-x, 0.0), z(0.0, 0.0))]
        })
        .collect();
    let profile = bilipschitz_profile(&map, &pairs, z(0.0, 0.0)).map_err(|e| e.to_string())?;
    let slope = profile.blowup_exponent.ok_or("no significant blowup")?;
    ensure!((slope - (1.0 / k - 1.0)).abs() <= 0.05, "blowup exponent {slope}");
    let trace = trace_curve(&map, 8.0, 2048).map_err(|e| e.to_string())?;
    let ca = chord_arc_constant(&trace).map_err(|e| e.to_string())?.constant;
    ensure!((ca - 1.0).abs() <= 1e-9, "chord-arc {ca}");
    Ok(format!(
        "|rho| defect {modulus_err:.1e}; |mu| in [{lo:.9}, {hi:.9}]; conformal |mu| <= {conformal:.1e}; exponent {slope:.4}; chord-arc {ca:.12}"
    ))
}

fn c10_curve_cauchy() -> Outcome {
    let trace = trace_curve(&Identity, 8.0, 4096).map_err(|e| e.to_string())?;
    let line = curve_cauchy_operator(&trace, 1e-6, 2000).map_err(|e| e.to_string())?;
    ensure!((line.norm - 0.5).abs() <= 0.025, "line norm {}", line.norm);
    let g = grid(8.0, 128);
    let plan = SpectralPlan::new(g, 2).unwrap();
    let mu = BeltramiCoefficient::ball(&g, z(0.3, 0.0), z(0.0, 2.0), 1.0, 0.5).unwrap();
    let map = solve_beltrami(&plan, &mu, 1e-10, 200).map_err(|e| e.to_string())?;
    let norm = |m: usize| -> Result<f64, String> {
        let t = trace_curve(&map, 8.0, m).map_err(|e| e.to_string())?;
        Ok(curve_cauchy_operator(&t, 1e-6, 2000).map_err(|e| e.to_string())?.norm)
    };
    let (a, b) = (norm(1024)?, norm(2048)?);
    ensure!((b / a - 1.0).abs() <= 0.1, "unstable under doubling: {a} -> {b}");
    Ok(format!("line norm {:.4}; ball trace {a:.4} -> {b:.4} (1024 -> 2048 samples)", line.norm))
}

fn c11_theorem3() -> Outcome {
    let length = |n: usize| -> Result<f64, String> {
        let g = grid(8.0, n);
        let plan = SpectralPlan::new(g, 2).unwrap();
        let mu = BeltramiCoefficient::ball(&g, z(0.3, 0.0), z(0.0, 2.0), 1.0, 0.5).unwrap();
        let map = solve_beltrami(&plan, &mu, 1e-10, 200).map_err(|e| e.to_string())?;
        Ok(trace_curve(&map, 8.0, 2048).map_err(|e| e.to_string())?.total_length())
    };
    let lengths: Vec<f64> = [64, 128, 256].iter().map(|&n| length(n)).collect::<Result<_, _>>()?;
    for w in lengths.windows(2) {
        ensure!((w[1] / w[0] - 1.0).abs() <= 1e-3, "length change {:?}", lengths);
    }
    let freqs: Vec<f64> = (-800..800).map(|k| (k as f64 + 0.5) * 0.005).collect();
    let mut sups = Vec::new();
    let mut worst_fit: f64 = 0.0;
    let mut constants = Vec::new();
    for h in [1.0, 0.5, 0.25] {
        let vals = dq_kernel_transform(h, &freqs).map_err(|e| e.to_string())?;
        sups.push(vals.iter().map(|v| v.norm()).fold(0.0, f64::max));
        let scaled: Vec<f64> = freqs.iter().map(|x| h * x).collect();
        let fit = fit_kernel_constant(&scaled, &vals, 0.01).map_err(|e| e.to_string())?;
        worst_fit = worst_fit.max(fit.max_relative_deviation);
        constants.push(fit.constant);
    }
    let smax = sups.iter().cloned().fold(0.0, f64::max);
    let smin = sups.iter().cloned().fold(f64::INFINITY, f64::min);
    ensure!(smax.is_finite() && smax / smin - 1.0 <= 0.02, "sup |K_h| not h-independent: {sups:?}");
    ensure!(worst_fit <= 0.02, "shape deviation {worst_fit:.3e}");
    Ok(format!(
        "lengths {:.6}, {:.6}, {:.6}; sup |K_h| {:.5} (2 pi = {:.5}); fitted c = {:.6}; shape deviation {worst_fit:.1e}",
        lengths[0], lengths[1], lengths[2], smax, 2.0 * PI, constants[0].re
    ))
}

fn c12_plemelj() -> Outcome {
    let f = LineFunction::compact_real(200.0, 8192, |x| 1.0 / (1.0 + x * x)).unwrap();
    let (plus, minus) = plemelj_boundary(&f);
    let jump = plus.sub(&minus).sub(&f).values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    ensure!(jump <= 1e-12, "jump defect {jump:.3e}");
    let h = hilbert(&f);
    let (mut num, mut den) = (0.0, 0.0);
    for (i, x) in f.xs().into_iter().enumerate() {
        let exact = x / (1.0 + x * x);
        num += (h.values()[i].re - exact).powi(2);
        den += exact * exact;
    }
    let err = (num / den).sqrt();
    ensure!(err <= 1e-3, "Hilbert error {err:.3e}");
    Ok(format!("jump defect {jump:.1e}; Lorentzian Hilbert rel error {err:.3e}"))
}

fn c13_ba_extension() -> Outcome {
    let g = grid(8.0, 64);
    let id = LineFunction::from_fn(16.0, 2048, |x| C64::new(x, 0.0)).unwrap();
    let mut worst_affine: f64 = 0.0;
    let mut worst_mu: f64 = 0.0;
    for (kappa, expected) in [(1.0, 0.0), (0.5, 1.0 / 3.0)] {
        let rho = ba_extension_with_factor(&id, kappa).map_err(|e| e.to_string())?;
        for (_, p) in g.points() {
            let w = rho.eval(p).map_err(|e| e.to_string())?;
            worst_affine = worst_affine.max((w - z(p.re, kappa * p.im)).norm());
        }
        let mu = rho.beltrami_field(&g).map_err(|e| e.to_string())?;
        for v in mu.values() {
            worst_mu = worst_mu.max((v - C64::new(expected, 0.0)).norm());
        }
    }
    ensure!(worst_affine <= 1e-12 && worst_mu <= 1e-12, "affine {worst_affine:.1e}, mu {worst_mu:.1e}");
    let k = 1.5;
    let carleson = |n: usize| -> Result<(f64, f64), String> {
        let g = grid(8.0, n);
        let f = LineFunction::from_fn(16.0, 8 * n, |x| C64::new(x.signum() * x.abs().powf(1.0 / k), 0.0)).unwrap();
        let rho = ba_extension(&f).map_err(|e| e.to_string())?;
        let mu = BeltramiCoefficient::new(rho.beltrami_field(&g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let norm = carleson_norm(&carleson_density(&mu), CarlesonGeometry::Line).map_err(|e| e.to_string())?.norm;
        Ok((mu.sup_bound(), norm))
    };
    let (s1, n1) = carleson(128)?;
    let (s2, n2) = carleson(256)?;
    ensure!(s1 < 1.0 && s2 < 1.0, "sup |mu| {s1}, {s2}");
    ensure!((n2 / n1 - 1.0).abs() <= 0.1, "Carleson {n1} -> {n2}");
    Ok(format!(
        "identity: affine defect {worst_affine:.1e}, mu defect {worst_mu:.1e}; power map sup|mu| {s2:.4}, Carleson {n1:.4} -> {n2:.4}"
    ))
}

fn run_cli(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qcircle")).args(args).arg("--out").arg(out).output().unwrap()
}

fn validate(schema: &str, doc: &Path) -> Result<(), String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas");
    let schema: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join(schema)).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).map_err(|e| e.to_string())?;
    let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(doc).map_err(|e| e.to_string())?).unwrap();
    let result = compiled.validate(&value).map_err(|errs| {
        errs.map(|e| format!("{} at {}", e, e.instance_path)).collect::<Vec<_>>().join("; ")
    });
    result.map_err(|e| format!("{}: {e}", doc.display()))
}

fn c14_cli() -> Outcome {
    let cases: [(&[&str], &[(&str, &str)]); 6] = [
        (&["run", "--grid-n", "64"], &[("report.json", "run.schema.json"), ("trace.csv", "")]),
        (&["run", "--scenario", "prop2", "--grid-n", "64", "--k", "1.5"], &[("report.json", "run.schema.json"), ("trace.csv", "")]),
        (&["run", "--scenario", "ba-extension", "--grid-n", "64"], &[("report.json", "run.schema.json"), ("trace.csv", "")]),
        (&["theorem2", "--grid-n", "64", "--c", "0.3"], &[("theorem2.json", "theorem2.schema.json")]),
        (
            &["theorem1", "--grid-n", "64", "--grid-l", "8", "--radii", "0.5,1", "--amplitudes", "0.2,0.5"],
            &[("theorem1.json", "theorem1.schema.json"), ("theorem1.csv", "")],
        ),
        (&["transform-selftest", "--grid-n", "64"], &[("selftest.json", "selftest.schema.json")]),
    ];
    let root = tempfile::tempdir().unwrap();
    let mut files = 0;
    for (i, (args, outputs)) in cases.iter().enumerate() {
        let (a, b) = (root.path().join(format!("{i}a")), root.path().join(format!("{i}b")));
        for dir in [&a, &b] {
            let out = run_cli(args, dir);
            ensure!(out.status.success(), "{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
        }
        for (name, schema) in outputs.iter() {
            let (x, y) = (fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
            ensure!(x == y, "{args:?}: {name} differs between identical runs");
            if !schema.is_empty() {
                validate(schema, &a.join(name))?;
            }
            files += 1;
        }
    }
    let bad = root.path().join("bad");
    let out = run_cli(&["run", "--scenario", "prop2", "--k", "3"], &bad);
    ensure!(out.status.code() == Some(2), "invalid K exited {:?}", out.status.code());
    ensure!(!bad.exists(), "invalid config wrote files");
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).map_err(|e| e.to_string())?;
    ensure!(err["error"] == "config", "error payload {err}");
    Ok(format!("{files} outputs byte-identical across reruns, all JSON schema-valid; bad config exits 2"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("beurling ball oracle", c01_beurling_ball),
        ("beurling isometry", c02_isometry),
        ("cauchy transform contract", c03_t_contract),
        ("half-plane kernel row bound", c04_lemma1),
        ("carleson / operator norm equivalence", c05_theorem1),
        ("neumann solver", c06_neumann),
        ("line duality identity", c07_lemma4),
        ("inhomogeneous boundary bound", c08_prop1),
        ("power-law sector map", c09_prop2),
        ("curve cauchy operator", c10_curve_cauchy),
        ("rectifiability diagnostic", c11_theorem3),
        ("plemelj formula", c12_plemelj),
        ("beurling-ahlfors extension", c13_ba_extension),
        ("cli determinism and schemas", c14_cli),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("{:02}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id == *f || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id} {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
