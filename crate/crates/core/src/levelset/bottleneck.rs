use super::grid::Window;
use super::{extract, LevelSetMesh};
use crate::distfield::{ball_image_interval, lipschitz_probe, random_pairs, QuotientMap};
use crate::error::LevelSetError;
use crate::geom::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Reference radius for the measured co-Lipschitz constant.
const R0: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BottleneckReport {
    pub t: f64,
    pub alpha: f64,
    pub comp_a: usize,
    pub comp_b: usize,
    /// Points of the first component within `alpha` of the second.
    pub matched_points: usize,
    pub pairs_sampled: usize,
    pub max_distance: f64,
    /// Measured co-Lipschitz constant near the level set; `f` is divided by it.
    pub co_lipschitz: f64,
    pub lipschitz: f64,
    /// `2 * Omega(alpha / 2) + 4 * alpha` for the rescaled map.
    pub bound: f64,
    pub tolerance: f64,
    pub vacuous: bool,
    pub violation: bool,
    pub seed: u64,
}

fn component_points(mesh: &LevelSetMesh, c: usize) -> Vec<Point> {
    mesh.polylines
        .iter()
        .zip(&mesh.component_id)
        .filter(|(_, &id)| id == c)
        .flat_map(|(pl, _)| pl.iter().copied())
        .collect()
}

/// Co-Lipschitz constant `omega(R0) / R0` measured at up to `limit` points.
fn measured_co_lipschitz(map: &QuotientMap, pts: &[Point], limit: usize) -> f64 {
    let step = (pts.len() / limit).max(1);
    let mut c = f64::INFINITY;
    for p in pts.iter().step_by(step) {
        if let Ok(iv) = ball_image_interval(map, *p, R0, R0 / 16.0) {
            c = c.min(iv.achieved_deviation() / R0);
        }
    }
    c
}

#[allow(clippy::too_many_arguments)]
pub fn bottleneck_probe(
    map: &QuotientMap,
    w: Window,
    comp_a: usize,
    comp_b: usize,
    t: f64,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> Result<BottleneckReport, LevelSetError> {
    if comp_a == comp_b {
        return Err(LevelSetError::SameComponent(comp_a));
    }
    let mesh = extract(map, t, w)?;
    let count = mesh.components.len();
    for id in [comp_a, comp_b] {
        if id >= count {
            return Err(LevelSetError::NoSuchComponent { id, count });
        }
    }
    let m = map.metric();
    let a = component_points(&mesh, comp_a);
    let b = component_points(&mesh, comp_b);
    let matched: Vec<Point> = a
        .iter()
        .copied()
        .filter(|x| b.iter().any(|y| m.dist(*x, *y) <= alpha))
        .collect();

    let all: Vec<Point> = mesh.polylines.iter().flat_map(|p| p.iter().copied()).filter(|p| p.norm_inf() < 0.5 * w.half_width).collect();
    let c = measured_co_lipschitz(map, &all, 200);
    let pairs = random_pairs(&all, 1.0, 2000, seed);
    let lip = lipschitz_probe(map, &pairs).unwrap_or(1.0);
    let ratio = if c > 0.0 { lip / c } else { f64::INFINITY };
    let bound = 2.0 * ratio * (alpha / 2.0) + 4.0 * alpha;
    let tolerance = 4.0 * w.pitch;

    let mut max_distance: f64 = 0.0;
    let mut pairs_sampled = 0;
    if !matched.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = matched[rng.gen_range(0..matched.len())];
            let y = matched[rng.gen_range(0..matched.len())];
            max_distance = max_distance.max(m.dist(x, y));
        }
        pairs_sampled = samples;
        if matched.len() <= 4000 {
            for (i, x) in matched.iter().enumerate() {
                for y in &matched[i + 1..] {
                    max_distance = max_distance.max(m.dist(*x, *y));
                }
            }
        }
    }
    let vacuous = matched.is_empty();
    Ok(BottleneckReport {
        t,
        alpha,
        comp_a,
        comp_b,
        matched_points: matched.len(),
        pairs_sampled,
        max_distance,
        co_lipschitz: c,
        lipschitz: lip,
        bound,
        tolerance,
        vacuous,
        violation: !vacuous && max_distance > bound + tolerance,
        seed,
    })
}
