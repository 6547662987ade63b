use crate::distfield::QuotientMap;
use crate::error::{CheckError, LevelSetError};
use crate::levelset::{Band, Census, TopoReport, Window};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt::Write;

/// A bracket `[lo, hi]` around one exceptional level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalInterval {
    pub lo: f64,
    pub hi: f64,
    /// Report of the band `f^{-1}([lo, hi])`.
    pub representative: TopoReport,
}

impl ExceptionalInterval {
    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Range actually swept, after widening.
    pub t_min: f64,
    pub t_max: f64,
    pub widened: bool,
    pub tol_t: f64,
    pub t_grid: Vec<f64>,
    pub reports: Vec<TopoReport>,
    pub n_modal: usize,
    pub t_f_intervals: Vec<ExceptionalInterval>,
    pub m_bound_note: String,
}

impl SweepResult {
    pub fn in_interval(&self, t: f64) -> bool {
        self.t_f_intervals.iter().any(|iv| iv.contains(t))
    }

    /// Centers of the exceptional brackets.
    pub fn exceptional_values(&self) -> Vec<f64> {
        self.t_f_intervals.iter().map(|iv| 0.5 * (iv.lo + iv.hi)).collect()
    }
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Component labels of the ends in angular order, renumbered by first
/// appearance.
fn partition(ends: &[(f64, usize)], shift: usize) -> Vec<usize> {
    let n = ends.len();
    let mut seen: Vec<(usize, usize)> = Vec::new();
    (0..n)
        .map(|i| {
            let c = ends[(i + shift) % n].1;
            match seen.iter().find(|s| s.0 == c) {
                Some(s) => s.1,
                None => {
                    seen.push((c, seen.len()));
                    seen.len() - 1
                }
            }
        })
        .collect()
}

/// Whether two reports have the same counts and group their ends into
/// components the same way, after matching ends by angle.
fn same_signature(a: &TopoReport, b: &TopoReport) -> bool {
    if a.counts() != b.counts() {
        return false;
    }
    let (ea, eb) = (a.ends_by_angle(), b.ends_by_angle());
    let n = ea.len();
    if n == 0 {
        return true;
    }
    let cost = |k: usize| -> f64 { (0..n).map(|i| angle_gap(ea[i].0, eb[(i + k) % n].0)).sum() };
    let shift = (0..n).min_by(|&p, &q| cost(p).total_cmp(&cost(q))).expect("n > 0");
    partition(&ea, 0) == partition(&eb, shift)
}

struct Sweeper<'a> {
    census: Census<'a>,
    tol: f64,
}

impl Sweeper<'_> {
    fn level(&self, t: f64) -> Result<TopoReport, CheckError> {
        let r = self.census.report(Band::level(t));
        if !r.stabilized {
            return Err(CheckError::NotStabilized(t));
        }
        Ok(r)
    }

    fn refine(
        &self,
        (a, ra): (f64, &TopoReport),
        (b, rb): (f64, &TopoReport),
        out: &mut Vec<(f64, f64)>,
    ) -> Result<(), CheckError> {
        if b - a <= self.tol {
            out.push((a, b));
            return Ok(());
        }
        let m = 0.5 * (a + b);
        let rm = self.level(m)?;
        if !same_signature(ra, &rm) {
            self.refine((a, ra), (m, &rm), out)?;
        }
        if !same_signature(&rm, rb) {
            self.refine((m, &rm), (b, rb), out)?;
        }
        Ok(())
    }
}

/// Sweeps `t` over a uniform grid, takes the most frequent component count
/// as `n(f)`, and brackets every level where the count or the grouping of
/// ends changes.
///
/// The range is widened to cover `[-s/2, s/2]`, with `s` the critical scale
/// of the scene.
pub fn sweep(
    map: &QuotientMap,
    t_min: f64,
    t_max: f64,
    steps: usize,
    tol_t: f64,
    windows: &[Window],
) -> Result<SweepResult, CheckError> {
    if steps < 8 {
        return Err(CheckError::TooFewSteps(steps));
    }
    if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max && tol_t > 0.0) {
        return Err(CheckError::BadRange(t_min, t_max));
    }
    let half = 0.5 * map.critical_scale();
    let (lo, hi) = (t_min.min(-half), t_max.max(half));
    let widened = lo < t_min || hi > t_max;
    let sw = Sweeper { census: Census::new(map, windows.to_vec())?, tol: tol_t };
    sw.census.warm();

    let t_grid: Vec<f64> = (0..=steps).map(|k| lo + (hi - lo) * k as f64 / steps as f64).collect();
    let reports: Vec<TopoReport> = t_grid.par_iter().map(|&t| sw.census.report(Band::level(t))).collect();
    if let Some(r) = reports.iter().find(|r| !r.stabilized) {
        return Err(CheckError::NotStabilized(r.t));
    }

    let mut freq: Vec<(usize, usize)> = Vec::new();
    for r in &reports {
        match freq.iter_mut().find(|f| f.0 == r.n_components) {
            Some(f) => f.1 += 1,
            None => freq.push((r.n_components, 1)),
        }
    }
    let n_modal = freq.iter().max_by_key(|f| (f.1, f.0)).map(|f| f.0).expect("grid is not empty");

    let mut raw = Vec::new();
    for (k, r) in reports.iter().enumerate() {
        if r.n_components != n_modal {
            raw.push((t_grid[k], t_grid[k]));
        }
    }
    for k in 0..steps {
        let (ra, rb) = (&reports[k], &reports[k + 1]);
        // A grid point already off the modal count is its own bracket.
        let hit = ra.n_components != n_modal || rb.n_components != n_modal;
        if !hit && !same_signature(ra, rb) {
            sw.refine((t_grid[k], ra), (t_grid[k + 1], rb), &mut raw)?;
        }
    }
    raw.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, b) in raw {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    let t_f_intervals = merged
        .into_iter()
        .map(|(a, b)| {
            let representative = sw.census.report(Band { lo: a, hi: b });
            if !representative.stabilized {
                return Err(CheckError::NotStabilized(0.5 * (a + b)));
            }
            Ok(ExceptionalInterval { lo: a, hi: b, representative })
        })
        .collect::<Result<Vec<_>, CheckError>>()?;

    let m_bound_note = format!(
        "n(f) = {n_modal} measured; the uniform bound M(c, Omega) over all maps with given moduli is existential and not computed"
    );
    Ok(SweepResult { t_min: lo, t_max: hi, widened, tol_t, t_grid, reports, n_modal, t_f_intervals, m_bound_note })
}

pub const SWEEP_CSV_HEADER: &str = "t,n_components,n_complement,n_ends,stabilized";

pub fn sweep_to_csv(s: &SweepResult) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in &s.reports {
        writeln!(out, "{},{},{},{},{}", r.t, r.n_components, r.n_complement, r.n_ends, r.stabilized).expect("writing to a String");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub n_components: usize,
    pub n_complement: usize,
    pub n_ends: usize,
    pub stabilized: bool,
}

pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepRow>, LevelSetError> {
    let err = |line: usize, message: &str| LevelSetError::Format { line, message: message.to_string() };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == SWEEP_CSV_HEADER => {}
        _ => return Err(err(1, "expected sweep header")),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let ln = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(err(ln, "expected 5 fields"));
        }
        let t: f64 = f[0].parse().map_err(|_| err(ln, "bad t"))?;
        if !t.is_finite() {
            return Err(err(ln, "non-finite t"));
        }
        out.push(SweepRow {
            t,
            n_components: f[1].parse().map_err(|_| err(ln, "bad n_components"))?,
            n_complement: f[2].parse().map_err(|_| err(ln, "bad n_complement"))?,
            n_ends: f[3].parse().map_err(|_| err(ln, "bad n_ends"))?,
            stabilized: f[4].parse().map_err(|_| err(ln, "bad stabilized"))?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distfield::Metric;
    use crate::levelset::shipped_windows;
    use crate::scene::builtin_scene;

    fn run(name: &str, lo: f64, hi: f64, steps: usize) -> SweepResult {
        let f = QuotientMap::new(builtin_scene(name, None).unwrap(), Metric::L1);
        sweep(&f, lo, hi, steps, 1e-3, &shipped_windows(name).unwrap()).unwrap()
    }

    #[test]
    fn line_has_no_exceptional_levels() {
        let s = run("line", -1.0, 1.0, 16);
        assert_eq!(s.n_modal, 1);
        assert!(s.t_f_intervals.is_empty());
        assert!(!s.widened);
    }

    #[test]
    fn diagonals_have_one_exceptional_level() {
        let s = run("fig3_n2", -1.0, 2.0, 16);
        assert_eq!(s.n_modal, 2);
        assert_eq!(s.t_f_intervals.len(), 1);
        let iv = &s.t_f_intervals[0];
        assert!(iv.contains(0.0) && iv.width() <= 1e-3, "{iv:?}");
        assert_eq!(iv.representative.n_components, 1);
    }

    #[test]
    fn exact_grid_hits_become_degenerate_brackets() {
        let s = run("fig3_n2", -1.0, 1.0, 8);
        let iv = &s.t_f_intervals[0];
        assert_eq!((iv.lo, iv.hi), (0.0, 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        let f = QuotientMap::new(builtin_scene("line", None).unwrap(), Metric::L2);
        let w = shipped_windows("line").unwrap();
        assert!(matches!(sweep(&f, 0.0, 1.0, 4, 1e-3, &w), Err(CheckError::TooFewSteps(4))));
        assert!(matches!(sweep(&f, 1.0, 0.0, 8, 1e-3, &w), Err(CheckError::BadRange(..))));
    }

    #[test]
    fn signature_sees_regrouped_ends() {
        let s = run("fig3_n2", -1.0, 2.0, 16);
        let before = s.reports.iter().find(|r| r.t < -0.1).unwrap();
        let after = s.reports.iter().find(|r| r.t > 0.1).unwrap();
        assert_eq!(before.counts(), after.counts());
        assert!(!same_signature(before, after));
        let later = s.reports.iter().rev().find(|r| r.t > 0.1).unwrap();
        assert!(same_signature(after, later));
    }

    #[test]
    fn sweep_csv_round_trip() {
        let s = run("line", -1.0, 1.0, 8);
        let rows = read_sweep_csv(&sweep_to_csv(&s)).unwrap();
        assert_eq!(rows.len(), s.reports.len());
        for (row, r) in rows.iter().zip(&s.reports) {
            assert_eq!(row.t, r.t);
            assert_eq!((row.n_components, row.n_complement, row.n_ends), r.counts());
        }
        assert!(read_sweep_csv("t,n\n").is_err());
        assert!(read_sweep_csv(&format!("{SWEEP_CSV_HEADER}\n0,1,2\n")).is_err());
    }
}
