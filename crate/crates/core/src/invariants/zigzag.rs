//! Checks on the zigzag example: the angle bounds at its vertices and the
//! cubic co-modulus `omega(r) = r^3 / 16000`.

use crate::distfield::{ball_image_interval, Metric, QuotientMap};
use crate::error::CheckError;
use crate::geom::Point;
use crate::scene::{builtin_scene, zigzag_vertex};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Sines of the angles at `B_n = (1/n, (-1)^n)` between the vertical
/// through `B_n` and the two zigzag segments meeting there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleBound {
    pub n: i64,
    pub sin_alpha: f64,
    pub sin_beta: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub beta_lo: f64,
    pub beta_hi: f64,
    /// Decided in exact integer arithmetic on the squared quantities.
    pub alpha_within: bool,
    pub beta_within: bool,
}

/// `1/(9q^2) <= 1/(4q^2 + 1) <= 1/(4q^2)` checked as integer inequalities.
fn within(q: u128) -> bool {
    let q2 = q * q;
    4 * q2 + 1 <= 9 * q2 && 4 * q2 < 4 * q2 + 1
}

pub fn angle_bounds(n: i64) -> Result<AngleBound, CheckError> {
    let m = n.unsigned_abs();
    if m < 2 || m > 1 << 30 {
        return Err(CheckError::AngleIndex(n));
    }
    let (qa, qb) = (m as u128 * (m as u128 - 1), m as u128 * (m as u128 + 1));
    let sin = |q: u128| 1.0 / (4.0 * (q as f64).powi(2) + 1.0).sqrt();
    Ok(AngleBound {
        n,
        sin_alpha: sin(qa),
        sin_beta: sin(qb),
        alpha_lo: 1.0 / (3.0 * qa as f64),
        alpha_hi: 1.0 / (2.0 * qa as f64),
        beta_lo: 1.0 / (3.0 * qb as f64),
        beta_hi: 1.0 / (2.0 * qb as f64),
        alpha_within: within(qa),
        beta_within: within(qb),
    })
}

/// Which part of the argument a probe exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// On the vertical segment.
    I0,
    /// On a slanted segment, at distance at least `r/3` from its vertex.
    SegmentFar,
    /// On a slanted segment, closer than `r/3` to its vertex.
    SegmentNear,
    /// On the zigzag, placed by the caller.
    OnK,
    /// Off the zigzag with `d(x, K) < r`.
    OffNear,
    /// Off the zigzag with `d(x, K) >= r`.
    OffFar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaProbe {
    pub x: Point,
    pub r: f64,
    pub regime: Regime,
    /// `r^3 / 16000`, or `r^3 / 2000` on the vertical segment.
    pub required: f64,
    /// Sampled reach of `f(B(x, r))` below and above `f(x)`.
    pub achieved_lo: f64,
    pub achieved_hi: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub n: usize,
    pub probes: Vec<OmegaProbe>,
    /// Smallest `min(achieved_lo, achieved_hi) - required` over all probes,
    /// slack not included.
    pub min_margin: f64,
    pub pass: bool,
}

pub const OMEGA_RADII: [f64; 4] = [0.01, 0.02, 0.05, 0.1];

/// Sample pitch inside each probe ball, as a fraction of its radius.
pub const PITCH_DIVISOR: f64 = 256.0;

pub fn omega(r: f64) -> f64 {
    if r < 0.1 {
        r.powi(3) / 16000.0
    } else {
        1.0 / 16.0e6
    }
}

/// Probe centers for one radius: five points on the vertical segment, five
/// on each side of the `r/3` split along `I_m` for `2 <= m <= min(N, 20)`,
/// and points pushed off the segments by `r/2` and `2r`.
pub fn default_probes(n: usize, r: f64) -> Vec<(Point, Regime)> {
    let mut out: Vec<(Point, Regime)> = [-0.9, -0.5, 0.0, 0.5, 0.9].iter().map(|&y| (Point::new(0.0, y), Regime::I0)).collect();
    let top = n.min(20) as i64;
    for m in 2..=top {
        let a = zigzag_vertex(m);
        let b = zigzag_vertex(m + 1);
        let len = a.dist(b);
        let dir = (b - a) * (1.0 / len);
        for k in 0..5 {
            let near = r / 3.0 * k as f64 / 5.0;
            out.push((a + dir * near, Regime::SegmentNear));
            let far = r / 3.0 + (0.5 * len - r / 3.0) * k as f64 / 4.0;
            out.push((a + dir * far, Regime::SegmentFar));
        }
    }
    for m in [2, 5, 10, top] {
        let a = zigzag_vertex(m);
        let b = zigzag_vertex(m + 1);
        let mid = (a + b) * 0.5;
        let normal = Point::new(a.y - b.y, b.x - a.x) * (1.0 / a.dist(b));
        for side in [1.0, -1.0] {
            for d in [0.5 * r, 2.0 * r] {
                out.push((mid + normal * (side * d), Regime::OffNear));
            }
        }
    }
    out
}

fn classify(map: &QuotientMap, x: Point, r: f64, hint: Option<Regime>) -> Regime {
    let d = map.eval(x).abs();
    if d == 0.0 {
        return match hint {
            Some(h @ (Regime::SegmentFar | Regime::SegmentNear | Regime::I0)) => h,
            _ if x.x == 0.0 => Regime::I0,
            _ => Regime::OnK,
        };
    }
    if d < r {
        Regime::OffNear
    } else {
        Regime::OffFar
    }
}

/// Certifies `f(B(x, r)) ⊇ B(f(x), omega(r))` on the truncated zigzag at
/// every probe, up to the slack `h sqrt(2)/2 + 1/N` with `h = r/256`.
/// `centers` replaces the default probes when given.
pub fn verify_zigzag_omega(n: usize, centers: Option<&[Point]>, radii: &[f64]) -> Result<OmegaReport, CheckError> {
    if n < 10 {
        return Err(CheckError::TruncationTooSmall(n));
    }
    if let Some(&r) = radii.iter().find(|&&r| !(r > 0.0 && r <= 0.1)) {
        return Err(CheckError::RadiusOutOfRange(r));
    }
    let scene = builtin_scene("zigzag", Some(n as i64)).expect("n >= 10 is a valid truncation");
    let map = QuotientMap::new(scene, Metric::L2);
    let mut jobs = Vec::new();
    for &r in radii {
        match centers {
            Some(cs) => jobs.extend(cs.iter().map(|&x| (x, r, classify(&map, x, r, None)))),
            None => jobs.extend(default_probes(n, r).into_iter().map(|(x, g)| (x, r, classify(&map, x, r, Some(g))))),
        }
    }
    let probes = jobs
        .par_iter()
        .map(|&(x, r, regime)| {
            let h = r / PITCH_DIVISOR;
            let iv = ball_image_interval(&map, x, r, h)?;
            let required = if regime == Regime::I0 { r.powi(3) / 2000.0 } else { omega(r) };
            let slack = h * std::f64::consts::SQRT_2 / 2.0 + 1.0 / n as f64;
            let achieved_lo = iv.center_value - iv.lo_achieved;
            let achieved_hi = iv.hi_achieved - iv.center_value;
            let pass = achieved_lo >= required - slack && achieved_hi >= required - slack;
            Ok(OmegaProbe { x, r, regime, required, achieved_lo, achieved_hi, slack, pass })
        })
        .collect::<Result<Vec<_>, CheckError>>()?;
    let min_margin = probes
        .iter()
        .map(|p| p.achieved_lo.min(p.achieved_hi) - p.required)
        .fold(f64::INFINITY, f64::min);
    let pass = probes.iter().all(|p| p.pass);
    Ok(OmegaReport { n, probes, min_margin, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sines recomputed from the vertex coordinates.
    fn oracle(n: i64) -> (f64, f64) {
        let pt = |k: i64| zigzag_vertex(k);
        let a = Point::new(1.0 / n as f64, 0.0);
        let b = pt(n);
        let (c, d) = if n > 0 { (pt(n - 1), pt(n + 1)) } else { (pt(n + 1), pt(n - 1)) };
        let sin_at = |u: Point, v: Point| (u.cross(v) / (u.norm() * v.norm())).abs();
        (sin_at(a - b, c - b), sin_at(a - b, d - b))
    }

    #[test]
    fn angles_match_coordinates() {
        for n in [2i64, 3, 7, 10, 50, -2, -3, -9] {
            let ab = angle_bounds(n).unwrap();
            let (sa, sb) = oracle(n);
            assert!((ab.sin_alpha - sa).abs() <= 1e-9 * sa, "n={n}: {} vs {sa}", ab.sin_alpha);
            assert!((ab.sin_beta - sb).abs() <= 1e-9 * sb, "n={n}");
            assert!(ab.alpha_within && ab.beta_within);
        }
        let ab = angle_bounds(2).unwrap();
        assert!((ab.sin_alpha - 1.0 / 17f64.sqrt()).abs() < 1e-15);
        assert_eq!((ab.alpha_lo, ab.alpha_hi), (1.0 / 6.0, 0.25));
        let ab = angle_bounds(10).unwrap();
        assert!((ab.sin_alpha - 1.0 / 32401f64.sqrt()).abs() < 1e-18);
        assert_eq!(angle_bounds(-3).unwrap().sin_alpha, angle_bounds(3).unwrap().sin_alpha);
    }

    #[test]
    fn angle_index_is_checked() {
        assert!(matches!(angle_bounds(1), Err(CheckError::AngleIndex(1))));
        assert!(matches!(angle_bounds(0), Err(CheckError::AngleIndex(0))));
        assert!(angle_bounds(-1).is_err());
    }

    #[test]
    fn omega_rejects_bad_input() {
        assert!(matches!(verify_zigzag_omega(50, None, &[0.2]), Err(CheckError::RadiusOutOfRange(_))));
        assert!(matches!(verify_zigzag_omega(50, None, &[0.0]), Err(CheckError::RadiusOutOfRange(_))));
        assert!(matches!(verify_zigzag_omega(5, None, &[0.1]), Err(CheckError::TruncationTooSmall(5))));
    }

    #[test]
    fn omega_on_named_probes() {
        let centers = [Point::new(0.0, 0.5), Point::new(0.3, 0.04)];
        let rep = verify_zigzag_omega(50, Some(&centers), &[0.1, 0.02]).unwrap();
        assert!(rep.pass, "{rep:?}");
        let i0 = &rep.probes[0];
        assert_eq!(i0.regime, Regime::I0);
        assert!(i0.achieved_lo.min(i0.achieved_hi) >= 1e-4 / 2000.0);
        // Off the zigzag the ball reaches all the way down to d - r.
        let off = rep.probes.iter().find(|p| p.r == 0.02 && p.x == centers[1]).unwrap();
        let d = QuotientMap::new(builtin_scene("zigzag", Some(50)).unwrap(), Metric::L2).eval(centers[1]);
        assert!(d > 0.0);
        let expect_lo = if d >= 0.02 { 0.02 } else { d };
        assert!(off.achieved_lo >= expect_lo - 0.02 / 256.0 * 2.0, "{off:?}");
        assert!(off.achieved_hi >= 0.02f64.powi(3) / 480.0);
    }

    #[test]
    fn default_probes_cover_regimes() {
        let rep = verify_zigzag_omega(12, None, &[0.05]).unwrap();
        for g in [Regime::I0, Regime::SegmentNear, Regime::SegmentFar, Regime::OffNear, Regime::OffFar] {
            assert!(rep.probes.iter().any(|p| p.regime == g), "{g:?} missing");
        }
        assert!(rep.pass);
    }
}
