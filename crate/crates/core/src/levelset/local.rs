use super::grid::{Grid, SampledField};
use super::raster::{analyse, Band};
use crate::distfield::{point_edge_distance, QuotientMap};
use crate::dsu::Dsu;
use crate::error::LevelSetError;
use crate::geom::Point;

/// Number of components of `f^{-1}(t)` inside the open metric ball
/// `B(center, radius)`.
///
/// The zero level is `K` itself, so it is counted exactly from the scene:
/// each edge meets the ball in one piece, and pieces join only at vertices
/// inside the ball. Other levels are rasterised at pitch `h`.
pub fn local_components(map: &QuotientMap, t: f64, center: Point, radius: f64, h: f64) -> Result<usize, LevelSetError> {
    if !(h > 0.0) || !(radius > 4.0 * h) {
        return Err(LevelSetError::ProbeTooSmall { radius, pitch: h });
    }
    let m = map.metric();
    if t == 0.0 {
        let edges = &map.scene().edges;
        let inside: Vec<bool> = edges.iter().map(|e| point_edge_distance(center, e, m) < radius).collect();
        let mut d = Dsu::new(edges.len());
        let mut first_at: std::collections::HashMap<(u64, u64), usize> = std::collections::HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            for v in e.endpoints() {
                if m.dist(center, v) < radius {
                    let key = crate::scene::vertex_key(v);
                    match first_at.get(&key) {
                        Some(&j) => {
                            d.union(i, j);
                        }
                        None => {
                            first_at.insert(key, i);
                        }
                    }
                }
            }
        }
        let mut roots: Vec<usize> = (0..edges.len()).filter(|&i| inside[i]).map(|i| d.find(i)).collect();
        roots.sort_unstable();
        roots.dedup();
        return Ok(roots.len());
    }
    let half = h * (radius / h).ceil();
    let grid = Grid::square(center, half, h)?;
    let field = SampledField::sample(map, grid);
    let a = analyse(map, &field, Band::level(t));
    let keep: Vec<bool> = a.atoms.iter().map(|at| m.dist(center, at.pos) < radius).collect();
    Ok(a.restricted_classes(&keep).1)
}
