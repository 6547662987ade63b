use crate::config::RunConfig;
use crate::Failure;
use quotient_levels::distfield::{Metric, QuotientMap};
use quotient_levels::error::CheckError;
use quotient_levels::geom::Point;
use quotient_levels::invariants::{
    angle_bounds, check_euler, check_main, check_region_boundaries, sweep_to_csv, verify_zigzag_omega, CheckReport,
    ClauseResult, SweepResult, OMEGA_RADII,
};
use quotient_levels::levelset::export::{mesh_to_csv, mesh_to_svg};
use quotient_levels::levelset::{
    bottleneck_probe, end_census, end_separation, extract as extract_mesh, local_components, shipped_windows, Window,
};
use quotient_levels::scene::{builtin_scene, validate as validate_scene, Scene};
use serde::Serialize;
use std::path::{Path, PathBuf};

fn check_err(e: CheckError) -> Failure {
    match e {
        CheckError::NotStabilized(_) => Failure::Check(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf, Failure> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn write(dir: &Path, name: &str, body: &str) -> Result<PathBuf, Failure> {
    let p = dir.join(name);
    std::fs::write(&p, body).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    Ok(p)
}

fn write_json<T: Serialize>(cfg: &RunConfig, name: &str, v: &T) -> Result<(), Failure> {
    if cfg.out.is_some() {
        let dir = out_dir(cfg)?;
        let body = serde_json::to_string_pretty(v).map_err(|e| Failure::Input(e.to_string()))?;
        let p = write(&dir, name, &(body + "\n"))?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn print_clauses(rep: &CheckReport) {
    for c in &rep.clauses {
        let tag = match (c.asserted, c.pass) {
            (false, _) => "INFO",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        println!("[{tag}] {}: {}", c.clause, c.detail);
    }
}

fn load(cfg: &RunConfig) -> Result<Scene, Failure> {
    Ok(cfg.scene()?)
}

pub fn validate(cfg: &RunConfig) -> Result<bool, Failure> {
    let scene = load(cfg)?;
    let rep = validate_scene(&scene);
    println!("scene: {} ({} edges)", scene.name, scene.edges.len());
    for v in &rep.violations {
        let at = v.witness.map(|p| format!(" at ({}, {})", p.x, p.y)).unwrap_or_default();
        println!("violation {} edges {:?}{at}{}", v.rule, v.edges, v.detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default());
    }
    println!("{}", if rep.ok { "valid" } else { "invalid" });
    write_json(cfg, "validation.json", &rep)?;
    Ok(rep.ok)
}

pub fn eval(cfg: &RunConfig) -> Result<bool, Failure> {
    if cfg.points.is_empty() {
        return Err(Failure::Input("eval needs at least one --point x,y".into()));
    }
    let map = cfg.map(load(cfg)?);
    for p in &cfg.points {
        println!("{} {} {:.16e}", p.x, p.y, map.eval(*p));
    }
    Ok(true)
}

fn first_window(cfg: &RunConfig, scene: &Scene) -> Result<Window, Failure> {
    Ok(cfg.windows(scene)?[0])
}

pub fn extract(cfg: &RunConfig) -> Result<bool, Failure> {
    let scene = load(cfg)?;
    let w = first_window(cfg, &scene)?;
    let t = cfg.t.unwrap_or(0.0);
    let map = cfg.map(scene);
    let mesh = extract_mesh(&map, t, w).map_err(|e| Failure::Input(e.to_string()))?;
    let ends: usize = mesh.components.iter().map(|c| c.ends).sum();
    println!("t: {t}");
    println!("window: R = {}, h = {}", w.half_width, w.pitch);
    println!("components: {}, complement: {}, ends: {ends}", mesh.components.len(), mesh.n_complement);
    let dir = out_dir(cfg)?;
    for (name, body) in [("level.csv", mesh_to_csv(&mesh)), ("level.svg", mesh_to_svg(&mesh))] {
        println!("wrote {}", write(&dir, name, &body)?.display());
    }
    Ok(true)
}

/// Default sweep range for a scene.
fn default_range(name: Option<&str>) -> (f64, f64, usize) {
    match name {
        Some("fig3_n2" | "fig3_n3") => (-1.0, 2.0, 64),
        Some("fig3_n4") => (-1.0, 3.0, 64),
        _ => (-1.0, 1.0, 64),
    }
}

fn short(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    format!("{}", if r == 0.0 { 0.0 } else { r })
}

pub fn sweep_summary(s: &SweepResult) -> String {
    if s.t_f_intervals.is_empty() {
        format!("n={}, T_f=∅", s.n_modal)
    } else {
        let vals: Vec<String> = s.exceptional_values().into_iter().map(short).collect();
        format!("n={}, |T_f|={}, T_f≈{{{}}}", s.n_modal, vals.len(), vals.join(", "))
    }
}

fn run_sweep(cfg: &RunConfig, map: &QuotientMap, windows: &[Window]) -> Result<SweepResult, Failure> {
    let (lo, hi, steps) = match cfg.t_range {
        Some(r) => (r.lo, r.hi, r.steps),
        None => default_range(cfg.builtin_name()),
    };
    quotient_levels::invariants::sweep(map, lo, hi, steps, cfg.tol, windows).map_err(check_err)
}

pub fn sweep(cfg: &RunConfig) -> Result<bool, Failure> {
    let scene = load(cfg)?;
    let windows = cfg.windows(&scene)?;
    let map = cfg.map(scene);
    let s = run_sweep(cfg, &map, &windows)?;
    println!("range: [{}, {}]{}", s.t_min, s.t_max, if s.widened { " (widened)" } else { "" });
    println!("{}", sweep_summary(&s));
    for iv in &s.t_f_intervals {
        let r = &iv.representative;
        println!("  [{:.16e}, {:.16e}] #c={} #cc={} #e={}", iv.lo, iv.hi, r.n_components, r.n_complement, r.n_ends);
    }
    println!("{}", s.m_bound_note);
    let rep = check_main(&s);
    print_clauses(&rep);
    let dir = out_dir(cfg)?;
    println!("wrote {}", write(&dir, "sweep.csv", &sweep_to_csv(&s))?.display());
    write_json(cfg, "sweep.json", &rep)?;
    Ok(rep.ok)
}

fn clause(name: &str, pass: bool, detail: String) -> ClauseResult {
    ClauseResult { clause: name.into(), asserted: true, pass, detail }
}

fn zigzag_clauses(n: usize) -> Result<Vec<ClauseResult>, Failure> {
    let mut out = Vec::new();
    let bad: Vec<i64> = (2..=n.max(2) as i64)
        .flat_map(|m| [m, -m])
        .filter(|&m| angle_bounds(m).map(|a| !(a.alpha_within && a.beta_within)).unwrap_or(true))
        .collect();
    out.push(clause("angle-bounds", bad.is_empty(), format!("2 <= |n| <= {n}, outside: {bad:?}")));
    let rep = verify_zigzag_omega(n, None, &OMEGA_RADII).map_err(check_err)?;
    let failed = rep.probes.iter().filter(|p| !p.pass).count();
    out.push(clause(
        "omega",
        rep.pass,
        format!("{} probes, {failed} failed, min raw margin {:.16e}", rep.probes.len(), rep.min_margin),
    ));
    let map = QuotientMap::new(builtin_scene("zigzag", Some(n as i64)).map_err(|e| Failure::Input(e.to_string()))?, Metric::L2);
    let k = local_components(&map, 0.0, Point::new(0.0, 0.5), 0.3, 0.005).map_err(|e| Failure::Input(e.to_string()))?;
    let need = n.saturating_sub(10).max(1);
    out.push(clause("local-components", k >= need, format!("{k} components of K near (0, 0.5), radius 0.3; need {need}")));
    Ok(out)
}

fn structure_clauses(cfg: &RunConfig, map: &QuotientMap, windows: &[Window]) -> Result<Vec<ClauseResult>, Failure> {
    let mut out = Vec::new();
    let s = run_sweep(cfg, map, windows)?;
    out.push(ClauseResult { clause: "sweep".into(), asserted: false, pass: true, detail: sweep_summary(&s) });
    let main = check_main(&s);
    out.extend(main.clauses.into_iter().map(|mut c| {
        c.clause = format!("main {}", c.clause);
        c
    }));
    let reps: Vec<_> = s.reports.iter().chain(s.t_f_intervals.iter().map(|iv| &iv.representative)).collect();
    let bad: Vec<f64> = reps.iter().filter(|r| !check_euler(r)).map(|r| r.t).collect();
    out.push(clause("euler", bad.is_empty(), format!("{} levels, failing at {bad:?}", reps.len())));

    let t = cfg.t.unwrap_or(0.0);
    let regions = check_region_boundaries(map, t, windows).map_err(check_err)?;
    let bad: Vec<String> =
        regions.iter().filter(|r| !r.pass).map(|r| format!("{}≠2×{}", r.boundary_ends, r.adjacent_components)).collect();
    out.push(clause("region-boundaries", bad.is_empty(), format!("{} regions at t={t}, failing {bad:?}", regions.len())));

    let w = windows[0];
    let report = end_census(map, t, windows).map_err(|e| Failure::Input(e.to_string()))?;
    if report.n_components >= 2 {
        let mut worst = Vec::new();
        let mut pass = true;
        for alpha in [0.25, 0.5, 1.0] {
            for (a, b) in [(0, 1), (1, 0)] {
                let r = bottleneck_probe(map, w, a, b, t, alpha, 1000, cfg.seed).map_err(|e| Failure::Input(e.to_string()))?;
                pass &= !r.violation;
                worst.push(if r.vacuous { "vacuous".to_string() } else { format!("{:.3}/{:.3}", r.max_distance, r.bound + r.tolerance) });
            }
        }
        out.push(clause("bottleneck", pass, format!("alpha 0.25, 0.5, 1 (max/bound): {}", worst.join(" "))));
    } else {
        out.push(ClauseResult {
            clause: "bottleneck".into(),
            asserted: false,
            pass: true,
            detail: format!("one component at t={t}; nothing to compare"),
        });
    }

    let big = *windows.last().expect("two windows");
    let radii: Vec<f64> = [16.0, 8.0, 4.0, 2.0].iter().map(|d| big.half_width / d).collect();
    let sep = end_separation(map, t, &radii, big).map_err(|e| Failure::Input(e.to_string()))?;
    let mins: Vec<f64> = sep.min_separation.iter().flatten().copied().collect();
    let monotone = mins.windows(2).all(|p| p[1] >= p[0] - 2.0 * big.pitch);
    let shown: Vec<String> = mins.iter().map(|d| format!("{d:.3}")).collect();
    out.push(clause("end-separation", monotone, format!("R = {radii:?}: {}", shown.join(", "))));
    Ok(out)
}

pub fn verify(cfg: &RunConfig) -> Result<bool, Failure> {
    let scene = load(cfg)?;
    println!("scene: {}", scene.name);
    println!("seed: {}", cfg.seed);
    let rep = validate_scene(&scene);
    let mut clauses = vec![clause(
        "validate",
        rep.ok,
        rep.violations.iter().map(|v| v.rule.clone()).collect::<Vec<_>>().join(", "),
    )];
    if rep.ok {
        let zigzag = cfg.builtin_name() == Some("zigzag");
        if zigzag {
            let n = cfg.n.unwrap_or(50);
            if n < 10 {
                return Err(Failure::Input(format!("zigzag verification needs N >= 10, got {n}")));
            }
            clauses.extend(zigzag_clauses(n as usize)?);
        }
        let shipped = cfg.builtin_name().and_then(shipped_windows).is_some();
        if shipped || cfg.user_window() {
            let windows = cfg.windows(&scene)?;
            let map = cfg.map(scene);
            clauses.extend(structure_clauses(cfg, &map, &windows)?);
        } else if !zigzag {
            return Err(Failure::Input("verify needs --window and --pitch for this scene".into()));
        }
    }
    let rep = CheckReport::from_clauses(clauses);
    print_clauses(&rep);
    if let Some(f) = rep.first_failure() {
        println!("first failure: {} ({})", f.clause, f.detail);
    }
    write_json(cfg, "verify.json", &rep)?;
    Ok(rep.ok)
}

pub fn paper_checks(cfg: &RunConfig) -> Result<bool, Failure> {
    let mut clauses = Vec::new();
    let l1 = |name: &str| QuotientMap::new(builtin_scene(name, None).expect("built-in"), Metric::L1);
    for (name, want) in [("fig1_left", (1, 6)), ("fig1_right", (2, 3))] {
        let r = end_census(&l1(name), 0.0, &shipped_windows(name).expect("shipped")).map_err(|e| Failure::Input(e.to_string()))?;
        let got = (r.n_components, r.n_complement);
        clauses.push(clause(
            &format!("{name} counts"),
            r.stabilized && got == want,
            format!("#c={} #cc={} (expected {} and {})", got.0, got.1, want.0, want.1),
        ));
    }
    for (name, n, lo, hi) in [("fig3_n2", 2, -1.0, 2.0), ("fig3_n3", 3, -1.0, 2.0), ("fig3_n4", 4, -1.0, 3.0)] {
        let s = quotient_levels::invariants::sweep(&l1(name), lo, hi, 64, cfg.tol, &shipped_windows(name).expect("shipped"))
            .map_err(check_err)?;
        let expect: Vec<f64> = (0..n - 1).map(|k| k as f64).collect();
        let located = s.t_f_intervals.len() == expect.len()
            && s.t_f_intervals.iter().zip(&expect).all(|(iv, &v)| iv.lo <= v && v <= iv.hi);
        clauses.push(clause(&format!("{name} sweep"), s.n_modal == n && located, sweep_summary(&s)));
    }
    clauses.extend(zigzag_clauses(cfg.n.map_or(50, |n| n.max(10) as usize))?);
    let rep = CheckReport::from_clauses(clauses);
    print_clauses(&rep);
    write_json(cfg, "paper-checks.json", &rep)?;
    Ok(rep.ok)
}
