use super::grid::{SampledField, Window};
use super::raster::{analyse, Band};
use crate::distfield::QuotientMap;
use crate::error::LevelSetError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndSeparation {
    pub t: f64,
    pub r_values: Vec<f64>,
    /// Per radius, the symmetric matrix of smallest distances between the
    /// unbounded pieces of the level set outside `B(0, R)`.
    pub pairwise_min_distance: Vec<Vec<Vec<f64>>>,
    /// Per radius, the smallest off-diagonal entry (`None` with fewer than
    /// two pieces).
    pub min_separation: Vec<Option<f64>>,
    /// Least-squares slope of `min_separation` against `R`; a diagnostic only.
    pub growth_rate: Option<f64>,
}

pub fn end_separation(map: &QuotientMap, t: f64, r_values: &[f64], w: Window) -> Result<EndSeparation, LevelSetError> {
    let max_r = r_values.iter().copied().fold(0.0, f64::max);
    if w.half_width < 2.0 * max_r {
        return Err(LevelSetError::WindowTooSmall { half_width: w.half_width, max_r });
    }
    let field = SampledField::sample(map, w.grid()?);
    let a = analyse(map, &field, Band::level(t));
    let mut matrices = Vec::new();
    let mut mins = Vec::new();
    for &r in r_values {
        let keep: Vec<bool> = a.atoms.iter().map(|at| at.pos.norm() > r).collect();
        let (label, count) = a.restricted_classes(&keep);
        let mut unbounded = vec![false; count];
        for (i, at) in a.atoms.iter().enumerate() {
            if at.frame && label[i] != usize::MAX {
                unbounded[label[i]] = true;
            }
        }
        let ids: Vec<usize> = (0..count).filter(|&l| unbounded[l]).collect();
        let mut pts = vec![Vec::new(); ids.len()];
        for (i, at) in a.atoms.iter().enumerate() {
            if label[i] != usize::MAX {
                if let Ok(k) = ids.binary_search(&label[i]) {
                    pts[k].push(at.pos);
                }
            }
        }
        let k = ids.len();
        let mut m = vec![vec![0.0; k]; k];
        let mut best: Option<f64> = None;
        for p in 0..k {
            for q in p + 1..k {
                let mut d = f64::INFINITY;
                for a in &pts[p] {
                    for b in &pts[q] {
                        d = d.min(a.dist(*b));
                    }
                }
                m[p][q] = d;
                m[q][p] = d;
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
        }
        matrices.push(m);
        mins.push(best);
    }
    let pts: Vec<(f64, f64)> = r_values.iter().zip(&mins).filter_map(|(&r, m)| m.map(|d| (r, d))).collect();
    let growth_rate = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    } else {
        None
    };
    Ok(EndSeparation { t, r_values: r_values.to_vec(), pairwise_min_distance: matrices, min_separation: mins, growth_rate })
}
