//! Sampled images of balls and empirical moduli of `f`.

use super::{Metric, QuotientMap};
use crate::error::FieldError;
use crate::geom::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Sampled extremes of `f` over a ball. The true infimum lies in
/// `[lo_achieved - slack, lo_achieved]` and the true supremum in
/// `[hi_achieved, hi_achieved + slack]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedInterval {
    pub lo_achieved: f64,
    pub hi_achieved: f64,
    pub slack: f64,
    pub center_value: f64,
    pub samples: usize,
}

impl CertifiedInterval {
    /// Largest `w` with `(f(x) - w, f(x) + w)` covered by achieved values.
    pub fn achieved_deviation(&self) -> f64 {
        (self.hi_achieved - self.center_value).min(self.center_value - self.lo_achieved)
    }
}

/// Every point of a ball lies within `covering_factor * h` of a sample
/// taken at pitch `h` strictly inside the ball (for `r >= 4h`).
pub fn covering_factor(m: Metric) -> f64 {
    match m {
        Metric::L2 => std::f64::consts::SQRT_2,
        Metric::L1 => 2.0,
    }
}

fn check_ball(r: f64, h: f64) -> Result<(), FieldError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(FieldError::NonPositiveRadius(r));
    }
    if !(h > 0.0) || h > r / 4.0 {
        return Err(FieldError::BadPitch { pitch: h, limit: r / 4.0 });
    }
    Ok(())
}

/// Grid points `x + h (i, j)` strictly inside the metric ball `B(x, r)`,
/// row by row.
pub fn ball_samples(m: Metric, x: Point, r: f64, h: f64) -> Vec<Point> {
    let k = (r / h).ceil() as i64;
    let mut out = Vec::new();
    for j in -k..=k {
        for i in -k..=k {
            let off = Point::new(i as f64 * h, j as f64 * h);
            if m.norm(off) < r {
                out.push(x + off);
            }
        }
    }
    out
}

pub fn ball_image_interval(map: &QuotientMap, x: Point, r: f64, h: f64) -> Result<CertifiedInterval, FieldError> {
    check_ball(r, h)?;
    let m = map.metric();
    let k = (r / h).ceil() as i64;
    let (lo, hi, n) = (-k..=k)
        .into_par_iter()
        .map(|j| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut n = 0usize;
            for i in -k..=k {
                let off = Point::new(i as f64 * h, j as f64 * h);
                if m.norm(off) < r {
                    let v = map.eval(x + off);
                    lo = lo.min(v);
                    hi = hi.max(v);
                    n += 1;
                }
            }
            (lo, hi, n)
        })
        .reduce(
            || (f64::INFINITY, f64::NEG_INFINITY, 0),
            |a, b| (a.0.min(b.0), a.1.max(b.1), a.2 + b.2),
        );
    Ok(CertifiedInterval {
        lo_achieved: lo,
        hi_achieved: hi,
        slack: covering_factor(m) * h + map.scene().truncation_error,
        center_value: map.eval(x),
        samples: n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusProfile {
    pub radii: Vec<f64>,
    /// Per radius, the smallest achieved deviation over all centers.
    pub omega_lower: Vec<f64>,
    /// Running maximum of `omega_lower` over smaller radii.
    pub omega_monotone: Vec<f64>,
    pub lipschitz_upper: f64,
    pub samples_used: usize,
    pub seed: u64,
}

/// Random point pairs in a square around the centers, for Lipschitz probes.
pub fn random_pairs(centers: &[Point], spread: f64, count: usize, seed: u64) -> Vec<(Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count && !centers.is_empty() {
        let c = centers[rng.gen_range(0..centers.len())];
        let a = c + Point::new(rng.gen_range(-spread..spread), rng.gen_range(-spread..spread));
        let b = c + Point::new(rng.gen_range(-spread..spread), rng.gen_range(-spread..spread));
        if a != b {
            out.push((a, b));
        }
    }
    out
}

pub fn co_modulus_profile(
    map: &QuotientMap,
    centers: &[Point],
    radii: &[f64],
    h: f64,
    seed: u64,
) -> Result<ModulusProfile, FieldError> {
    if centers.is_empty() {
        return Err(FieldError::NoCenters);
    }
    let mut omega = Vec::with_capacity(radii.len());
    let mut samples = 0;
    for &r in radii {
        check_ball(r, h)?;
        let mut w = f64::INFINITY;
        for &c in centers {
            let iv = ball_image_interval(map, c, r, h)?;
            samples += iv.samples;
            w = w.min(iv.achieved_deviation());
        }
        omega.push(w);
    }
    let mut mono = omega.clone();
    for k in 1..mono.len() {
        mono[k] = mono[k].max(mono[k - 1]);
    }
    let spread = radii.iter().copied().fold(0.0, f64::max).max(h);
    let pairs = random_pairs(centers, spread, 1000, seed);
    samples += 2 * pairs.len();
    let lip = lipschitz_probe(map, &pairs)?;
    Ok(ModulusProfile {
        radii: radii.to_vec(),
        omega_lower: omega,
        omega_monotone: mono,
        lipschitz_upper: lip,
        samples_used: samples,
        seed,
    })
}

/// Largest observed ratio `|f(x) - f(y)| / d(x, y)`.
pub fn lipschitz_probe(map: &QuotientMap, pairs: &[(Point, Point)]) -> Result<f64, FieldError> {
    let m = map.metric();
    let mut best: f64 = 0.0;
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let d = m.dist(a, b);
        if d == 0.0 {
            return Err(FieldError::CoincidentPair(i));
        }
        best = best.max((map.eval(a) - map.eval(b)).abs() / d);
    }
    Ok(best)
}
