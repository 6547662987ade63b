//! Signed distance to a scene, `f(x) = sign(x) * d(x, K)`, in the l1 or l2
//! metric.

mod index;
mod moduli;

pub use moduli::{
    ball_image_interval, ball_samples, co_modulus_profile, covering_factor, lipschitz_probe, random_pairs,
    CertifiedInterval, ModulusProfile,
};

use crate::geom::Point;
use crate::scene::{vertex_key, Edge, Scene, Side, Sign, VertexStar};
use index::GridIndex;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    L1,
    L2,
}

impl Metric {
    pub fn norm(self, v: Point) -> f64 {
        match self {
            Metric::L1 => v.norm_l1(),
            Metric::L2 => v.norm(),
        }
    }

    pub fn dist(self, a: Point, b: Point) -> f64 {
        self.norm(a - b)
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::L1 => "l1",
            Metric::L2 => "l2",
        }
    }
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Metric::L1),
            "l2" => Ok(Metric::L2),
            other => Err(format!("unknown metric `{other}` (expected l1 or l2)")),
        }
    }
}

/// Distance from `p` to the edge, and a parameter of a closest point.
/// Interior parameters are preferred when the minimiser is not unique.
pub fn closest_on_edge(p: Point, e: &Edge, m: Metric) -> (f64, f64) {
    let par = e.param();
    let a = par.origin;
    let d = par.dir;
    let w = p - a;
    // Points exactly on the carrier line need no rounding-prone projection.
    if d.cross(w) == 0.0 {
        let s = w.dot(d) / d.dot(d);
        if s >= 0.0 && s <= par.s_max {
            return (0.0, s);
        }
    }
    match m {
        Metric::L2 => {
            let s = (w.dot(d) / d.dot(d)).clamp(0.0, par.s_max);
            ((p - par.at(s)).norm(), s)
        }
        Metric::L1 => {
            let g = |s: f64| (a.x + s * d.x - p.x).abs() + (a.y + s * d.y - p.y).abs();
            let mut cands = [0.0, f64::NAN, f64::NAN, f64::NAN];
            if par.s_max.is_finite() {
                cands[1] = par.s_max;
            }
            if d.x != 0.0 {
                cands[2] = (w.x / d.x).clamp(0.0, par.s_max);
            }
            if d.y != 0.0 {
                cands[3] = (w.y / d.y).clamp(0.0, par.s_max);
            }
            let mut best = (f64::INFINITY, 0.0);
            for &s in cands.iter().filter(|s| !s.is_nan()) {
                let v = g(s);
                let interior = s > 0.0 && s < par.s_max;
                let best_interior = best.1 > 0.0 && best.1 < par.s_max;
                if v < best.0 || (v == best.0 && interior && !best_interior) {
                    best = (v, s);
                }
            }
            best
        }
    }
}

/// Exact distance from a point to an edge under the metric.
pub fn point_edge_distance(p: Point, e: &Edge, m: Metric) -> f64 {
    closest_on_edge(p, e, m).0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearestResult {
    pub distance: f64,
    pub edge_id: usize,
    pub side: Side,
    /// Set when several edges are equally near and disagree on the sign.
    pub tie_conflict: bool,
}

/// A scene together with a metric: the map `f`.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    scene: Scene,
    metric: Metric,
    stars: HashMap<(u64, u64), VertexStar>,
    index: Option<GridIndex>,
}

impl QuotientMap {
    pub fn new(scene: Scene, metric: Metric) -> QuotientMap {
        let stars = scene.stars();
        let index = GridIndex::build(&scene);
        QuotientMap { scene, metric, stars, index }
    }

    /// Same map without the spatial index; results are bit-identical.
    pub fn brute_force(scene: Scene, metric: Metric) -> QuotientMap {
        let stars = scene.stars();
        QuotientMap { scene, metric, stars, index: None }
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn has_index(&self) -> bool {
        self.index.is_some()
    }

    /// Smallest distance and every edge attaining it, ids ascending.
    fn candidates(&self, p: Point) -> (f64, Vec<(usize, f64)>) {
        let mut best = f64::INFINITY;
        let mut tied: Vec<(usize, f64)> = Vec::new();
        let consider = |id: usize, best: &mut f64, tied: &mut Vec<(usize, f64)>| {
            let (d, s) = closest_on_edge(p, &self.scene.edges[id], self.metric);
            if d < *best {
                *best = d;
                tied.clear();
                tied.push((id, s));
            } else if d == *best && !tied.iter().any(|t| t.0 == id) {
                tied.push((id, s));
            }
        };
        match &self.index {
            None => {
                for id in 0..self.scene.edges.len() {
                    consider(id, &mut best, &mut tied);
                }
            }
            Some(idx) => {
                for &id in &idx.rays {
                    consider(id as usize, &mut best, &mut tied);
                }
                idx.walk(p.x, p.y, |bucket| {
                    for &id in bucket {
                        consider(id as usize, &mut best, &mut tied);
                    }
                    best
                });
            }
        }
        tied.sort_by_key(|t| t.0);
        (best, tied)
    }

    /// Sign the edge assigns to `p`, given the parameter of its closest point.
    fn edge_sign(&self, id: usize, s: f64, p: Point) -> Sign {
        let e = &self.scene.edges[id];
        let par = e.param();
        let at_vertex = if s == 0.0 {
            Some(e.a)
        } else if s == par.s_max {
            Some(e.b)
        } else {
            None
        };
        if let Some(v) = at_vertex {
            if let Some(star) = self.stars.get(&vertex_key(v)) {
                return star.sector_sign(p - v).2;
            }
        }
        if par.dir.cross(p - par.origin) > 0.0 {
            e.left
        } else {
            e.right
        }
    }

    pub fn nearest(&self, p: Point) -> NearestResult {
        let (dist, tied) = self.candidates(p);
        let (id, s) = tied[0];
        if dist == 0.0 {
            return NearestResult { distance: 0.0, edge_id: id, side: Side::On, tie_conflict: false };
        }
        let sign = self.edge_sign(id, s, p);
        let conflict = tied[1..].iter().any(|&(j, u)| self.edge_sign(j, u, p) != sign);
        let e = &self.scene.edges[id];
        let side = if conflict {
            Side::On
        } else if e.left == sign {
            Side::Left
        } else {
            Side::Right
        };
        NearestResult { distance: dist, edge_id: id, side, tie_conflict: conflict }
    }

    /// `f(p)`. On a sign conflict between equally near edges the lowest id
    /// decides.
    pub fn eval(&self, p: Point) -> f64 {
        let (dist, tied) = self.candidates(p);
        if dist == 0.0 {
            return 0.0;
        }
        let (id, s) = tied[0];
        self.edge_sign(id, s, p).value() * dist
    }

    /// Largest distance between a vertex and an edge not incident to it.
    /// Every critical level of `f` lies within half of this of zero.
    pub fn critical_scale(&self) -> f64 {
        let verts = self.scene.vertices();
        let mut best: f64 = 0.0;
        for v in &verts {
            let d = self
                .scene
                .edges
                .iter()
                .filter(|e| !e.endpoints().contains(v))
                .map(|e| point_edge_distance(*v, e, self.metric))
                .fold(f64::INFINITY, f64::min);
            if d.is_finite() {
                best = best.max(d);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::builtin_scene;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    /// Oracle: dense parameter grid refined around the best sample.
    fn brute_edge_distance(q: Point, e: &Edge, m: Metric) -> f64 {
        let par = e.param();
        let hi = if par.s_max.is_finite() { par.s_max } else { 1e4 };
        let (mut lo, mut top) = (0.0, hi);
        let mut best = f64::INFINITY;
        let mut arg = 0.0;
        for _ in 0..60 {
            let n = 200;
            for k in 0..=n {
                let s = lo + (top - lo) * k as f64 / n as f64;
                let v = m.dist(q, par.at(s));
                if v < best {
                    best = v;
                    arg = s;
                }
            }
            let w = (top - lo) / n as f64;
            lo = (arg - w).max(0.0);
            top = (arg + w).min(hi);
        }
        best
    }

    #[test]
    fn spec_distances() {
        let seg = Edge::segment(p(-1.0, 0.0), p(1.0, 0.0), Sign::Plus, Sign::Minus);
        assert_eq!(point_edge_distance(p(0.0, 1.0), &seg, Metric::L2), 1.0);
        assert_eq!(point_edge_distance(p(0.0, 1.0), &seg, Metric::L1), 1.0);
        let unit = Edge::segment(p(0.0, 0.0), p(1.0, 0.0), Sign::Plus, Sign::Minus);
        let q = p(2.0, 2.0);
        for m in [Metric::L1, Metric::L2] {
            let d = point_edge_distance(q, &unit, m);
            assert!((d - brute_edge_distance(q, &unit, m)).abs() < 1e-9);
        }
        assert_eq!(point_edge_distance(q, &unit, Metric::L1), 3.0);
        assert_eq!(point_edge_distance(q, &unit, Metric::L2), 5f64.sqrt());
    }

    #[test]
    fn line_values() {
        let f = QuotientMap::new(builtin_scene("line", None).unwrap(), Metric::L2);
        assert_eq!(f.eval(p(0.0, 1.0)), 1.0);
        let n = f.nearest(p(0.0, -2.0));
        assert_eq!(n.distance, 2.0);
        assert_eq!(n.side, Side::Right);
        assert_eq!(f.eval(p(3.5, 0.0)), 0.0);
        assert_eq!(f.nearest(p(3.5, 0.0)).side, Side::On);
    }

    fn brute_eval_magnitude(s: &Scene, q: Point, m: Metric) -> f64 {
        s.edges.iter().map(|e| brute_edge_distance(q, e, m)).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn zigzag_probe_below_third_vertex() {
        let s = builtin_scene("zigzag", Some(50)).unwrap();
        let f = QuotientMap::new(s.clone(), Metric::L2);
        let q = p(1.0 / 3.0, 0.0);
        let v = f.eval(q);
        assert!((v.abs() - brute_eval_magnitude(&s, q, Metric::L2)).abs() < 1e-9);
        // The wedge above z_3 = (1/3, -1) opens upwards into the "+" side.
        assert!(v > 0.0, "{v}");
        assert!(f.eval(p(1.0 / 3.0, -1.5)) < 0.0);
    }

    #[test]
    fn zigzag_nearest_near_quarter() {
        let s = builtin_scene("zigzag", Some(10)).unwrap();
        let f = QuotientMap::new(s.clone(), Metric::L2);
        let q = p(0.25 + 1e-9, 0.5);
        let n = f.nearest(q);
        let i3 = crate::scene::zigzag_edge_id(10, 3).unwrap();
        let i4 = crate::scene::zigzag_edge_id(10, 4).unwrap();
        let d3 = point_edge_distance(q, &s.edges[i3], Metric::L2);
        let d4 = point_edge_distance(q, &s.edges[i4], Metric::L2);
        let expect = if d3 <= d4 { i3 } else { i4 };
        assert_eq!(n.edge_id, expect);
        assert_eq!(n.distance, d3.min(d4));
    }

    #[test]
    fn equidistant_same_sign_uses_lowest_id() {
        // Two rays from the origin with a "+" wedge between them.
        let s = Scene::new(
            "wedge",
            vec![
                Edge::ray(p(0.0, 0.0), p(1.0, 1.0), Sign::Minus, Sign::Plus),
                Edge::ray(p(0.0, 0.0), p(1.0, -1.0), Sign::Plus, Sign::Minus),
            ],
        );
        let f = QuotientMap::new(s, Metric::L2);
        let n = f.nearest(p(3.0, 0.0));
        assert_eq!(n.edge_id, 0);
        assert!(!n.tie_conflict);
        assert!(f.eval(p(3.0, 0.0)) > 0.0);
    }

    #[test]
    fn index_matches_brute_force_bitwise() {
        let s = builtin_scene("zigzag", Some(40)).unwrap();
        let fast = QuotientMap::new(s.clone(), Metric::L2);
        assert!(fast.has_index());
        let slow = QuotientMap::brute_force(s.clone(), Metric::L2);
        let fast1 = QuotientMap::new(s.clone(), Metric::L1);
        let slow1 = QuotientMap::brute_force(s, Metric::L1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20_000 {
            let q = p(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            assert_eq!(fast.eval(q).to_bits(), slow.eval(q).to_bits(), "{q:?}");
            assert_eq!(fast.nearest(q), slow.nearest(q));
            assert_eq!(fast1.eval(q).to_bits(), slow1.eval(q).to_bits(), "{q:?}");
        }
    }

    /// Signs from the sector table match the sign read off a point displaced
    /// a hair to either side of each edge's midpoint.
    #[test]
    fn displaced_midpoints_take_side_signs() {
        for name in crate::scene::BUILTIN_NAMES {
            let n = if *name == "zigzag" { Some(12) } else { None };
            let s = builtin_scene(name, n).unwrap();
            for m in [Metric::L1, Metric::L2] {
                let f = QuotientMap::new(s.clone(), m);
                for (i, e) in s.edges.iter().enumerate() {
                    let d = e.direction();
                    let len = if e.length().is_finite() { e.length() } else { 1.0 };
                    let normal = Point::new(-d.y, d.x) * (1.0 / d.norm());
                    let eps = 1e-7 * len;
                    let mid = e.midpoint();
                    assert_eq!(f.eval(mid + normal * eps).signum(), e.left.value(), "{name} edge {i} left");
                    assert_eq!(f.eval(mid - normal * eps).signum(), e.right.value(), "{name} edge {i} right");
                }
            }
        }
    }

    #[test]
    fn l1_and_l2_signs_agree_on_builtins() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for name in crate::scene::BUILTIN_NAMES {
            let n = if *name == "zigzag" { Some(20) } else { None };
            let s = builtin_scene(name, n).unwrap();
            let f1 = QuotientMap::new(s.clone(), Metric::L1);
            let f2 = QuotientMap::new(s, Metric::L2);
            for _ in 0..5000 {
                let q = p(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
                assert_eq!(f1.eval(q).signum(), f2.eval(q).signum(), "{name} {q:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn l1_kernel_matches_oracle(ax in -5.0f64..5.0, ay in -5.0f64..5.0, bx in -5.0f64..5.0, by in -5.0f64..5.0,
                                    qx in -8.0f64..8.0, qy in -8.0f64..8.0) {
            prop_assume!((ax - bx).abs() + (ay - by).abs() > 1e-3);
            let e = Edge::segment(p(ax, ay), p(bx, by), Sign::Plus, Sign::Minus);
            let q = p(qx, qy);
            for m in [Metric::L1, Metric::L2] {
                let d = point_edge_distance(q, &e, m);
                let o = brute_edge_distance(q, &e, m);
                prop_assert!((d - o).abs() < 1e-9, "{:?} {} vs {}", m, d, o);
            }
        }

        #[test]
        fn one_lipschitz_on_zigzag(x1 in -2.0f64..2.0, y1 in -2.0f64..2.0, x2 in -2.0f64..2.0, y2 in -2.0f64..2.0) {
            let f = QuotientMap::new(builtin_scene("zigzag", Some(20)).unwrap(), Metric::L2);
            let (a, b) = (p(x1, y1), p(x2, y2));
            prop_assert!((f.eval(a) - f.eval(b)).abs() <= a.dist(b) * (1.0 + 1e-12) + 1e-15);
        }
    }
}
