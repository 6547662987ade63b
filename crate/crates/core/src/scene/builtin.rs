//! Built-in scenes. Coordinates are chosen so that every saddle of the
//! distance field is reached along an axis-parallel direction, which makes
//! the critical levels exact small integers in both metrics.

use super::{Edge, Scene, Sign};
use crate::error::SceneError;
use crate::geom::Point;
use Sign::{Minus, Plus};

pub const BUILTIN_NAMES: &[&str] = &["line", "fig1_left", "fig1_right", "fig3_n2", "fig3_n3", "fig3_n4", "zigzag"];

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn ray(o: Point, d: Point, left: Sign, right: Sign) -> Edge {
    Edge::ray(o, d, left, right)
}

/// Looks up a built-in scene. `n` is the truncation for `zigzag` and must
/// be absent for the others.
pub fn builtin_scene(name: &str, n: Option<i64>) -> Result<Scene, SceneError> {
    if name != "zigzag" && n.is_some() {
        return Err(SceneError::BadParameter(format!("scene `{name}` takes no parameter")));
    }
    let scene = match name {
        "line" => Scene::new("line", line()),
        "fig1_left" => Scene::new("fig1_left", fig1_left()),
        "fig1_right" => Scene::new("fig1_right", fig1_right()),
        "fig3_n2" => Scene::new("fig3_n2", fig3_n2()),
        "fig3_n3" => Scene::new("fig3_n3", fig3_n3()),
        "fig3_n4" => Scene::new("fig3_n4", fig3_n4()),
        "zigzag" => {
            let n = n.ok_or_else(|| SceneError::BadParameter("zigzag needs N".into()))?;
            if n < 2 {
                return Err(SceneError::BadParameter(format!("zigzag needs N >= 2, got {n}")));
            }
            if n > 100_000 {
                return Err(SceneError::BadParameter(format!("zigzag N = {n} is too large")));
            }
            zigzag(n as usize)
        }
        other => return Err(SceneError::UnknownBuiltin(other.to_string())),
    };
    Ok(scene)
}

/// The x-axis, "+" above.
fn line() -> Vec<Edge> {
    vec![
        ray(p(0.0, 0.0), p(1.0, 0.0), Plus, Minus),
        ray(p(0.0, 0.0), p(-1.0, 0.0), Minus, Plus),
    ]
}

/// The x-axis split at (+-1/2, 0), with a V of rays opening outwards from
/// each split point. Top row of sectors reads -,+,- and bottom row +,-,+.
fn fig1_left() -> Vec<Edge> {
    let (l, r) = (p(-0.5, 0.0), p(0.5, 0.0));
    vec![
        ray(l, p(-1.0, 0.0), Plus, Minus),
        Edge::segment(l, r, Plus, Minus),
        ray(r, p(1.0, 0.0), Minus, Plus),
        ray(r, p(1.0, 1.0), Plus, Minus),
        ray(r, p(1.0, -1.0), Plus, Minus),
        ray(l, p(-1.0, 1.0), Minus, Plus),
        ray(l, p(-1.0, -1.0), Minus, Plus),
    ]
}

/// Two chevrons opening outwards with apexes at (+-1/2, 0); "-" inside each.
fn fig1_right() -> Vec<Edge> {
    let (l, r) = (p(-0.5, 0.0), p(0.5, 0.0));
    vec![
        ray(l, p(-1.0, 1.0), Minus, Plus),
        ray(l, p(-1.0, -1.0), Plus, Minus),
        ray(r, p(1.0, 1.0), Plus, Minus),
        ray(r, p(1.0, -1.0), Minus, Plus),
    ]
}

/// The diagonals through the origin; "+" in the top and bottom sectors.
fn fig3_n2() -> Vec<Edge> {
    let o = p(0.0, 0.0);
    vec![
        ray(o, p(1.0, 1.0), Plus, Minus),
        ray(o, p(-1.0, 1.0), Minus, Plus),
        ray(o, p(-1.0, -1.0), Plus, Minus),
        ray(o, p(1.0, -1.0), Minus, Plus),
    ]
}

/// The line x = -1 with two arms leaving (-1, 0) to the left, plus a chevron
/// with apex (1, 0) opening to the right.
fn fig3_n3() -> Vec<Edge> {
    let v = p(-1.0, 0.0);
    let c = p(1.0, 0.0);
    vec![
        ray(v, p(0.0, 1.0), Minus, Plus),
        ray(v, p(-1.0, 1.0), Plus, Minus),
        ray(v, p(-1.0, -1.0), Minus, Plus),
        ray(v, p(0.0, -1.0), Plus, Minus),
        ray(c, p(1.0, 1.0), Plus, Minus),
        ray(c, p(1.0, -1.0), Minus, Plus),
    ]
}

/// A chevron with apex (-4, 0) opening left, the y-axis with two steep arms
/// leaving the origin up-left and down-left, and a chevron with apex (2, 0)
/// opening right.
fn fig3_n4() -> Vec<Edge> {
    let a = p(-4.0, 0.0);
    let o = p(0.0, 0.0);
    let c = p(2.0, 0.0);
    vec![
        ray(a, p(-2.0, 1.0), Minus, Plus),
        ray(a, p(-2.0, -1.0), Plus, Minus),
        ray(o, p(0.0, 1.0), Minus, Plus),
        ray(o, p(-1.0, 3.0), Plus, Minus),
        ray(o, p(-1.0, -3.0), Minus, Plus),
        ray(o, p(0.0, -1.0), Plus, Minus),
        ray(c, p(1.0, 1.0), Plus, Minus),
        ray(c, p(1.0, -1.0), Minus, Plus),
    ]
}

/// `z_n = (1/n, (-1)^n)` for nonzero n.
pub fn zigzag_vertex(n: i64) -> Point {
    let y = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    p(1.0 / n as f64, y)
}

/// Truncated zigzag. Edge order: I_1..I_N (I_n joins z_n and z_{n+1}),
/// I_{-1}..I_{-(N+1)}, I_0 from (0,1) to (0,-1), the two horizontal
/// connectors closing the truncation onto I_0, then the rays I_+ and I_-.
///
/// The left side carries one more segment than the right so that the two
/// connectors land on opposite ends of I_0; otherwise one end of I_0 would
/// have three incident edges and no consistent sign.
fn zigzag(n: usize) -> Scene {
    let ni = n as i64;
    let mut edges = Vec::with_capacity(2 * n + 6);
    // Walking K from x = -inf to x = +inf keeps "+" on the left. Right-side
    // segments are stored against that walk, left-side segments along it.
    for k in 1..=ni {
        edges.push(Edge::segment(zigzag_vertex(k), zigzag_vertex(k + 1), Minus, Plus));
    }
    for k in 1..=ni + 1 {
        edges.push(Edge::segment(zigzag_vertex(-k), zigzag_vertex(-k - 1), Plus, Minus));
    }
    let left_end = zigzag_vertex(-ni - 2);
    let right_end = zigzag_vertex(ni + 1);
    let top = p(0.0, 1.0);
    let bottom = p(0.0, -1.0);
    // The walk enters I_0 at the end the left connector reaches.
    let (i0_left, i0_right) = if left_end.y > 0.0 { (Plus, Minus) } else { (Minus, Plus) };
    edges.push(Edge::segment(top, bottom, i0_left, i0_right));
    edges.push(Edge::segment(left_end, p(0.0, left_end.y), Plus, Minus));
    edges.push(Edge::segment(p(0.0, right_end.y), right_end, Plus, Minus));
    edges.push(ray(zigzag_vertex(1), p(1.0, 0.0), Plus, Minus));
    edges.push(ray(zigzag_vertex(-1), p(-1.0, 0.0), Minus, Plus));
    Scene { name: format!("zigzag({n})"), truncation_error: 1.0 / n as f64, edges }
}

/// Edge id of I_m in a truncated zigzag, for 1 <= |m| <= N (and m = -(N+1)).
pub fn zigzag_edge_id(n: usize, m: i64) -> Option<usize> {
    let ni = n as i64;
    if (1..=ni).contains(&m) {
        Some((m - 1) as usize)
    } else if (-(ni + 1)..=-1).contains(&m) {
        Some(n + (-m - 1) as usize)
    } else if m == 0 {
        Some(2 * n + 1)
    } else {
        None
    }
}

/// Window half-width and pitch at which the built-in scene's counts are
/// golden.
pub fn shipped_window(name: &str) -> Option<(f64, f64)> {
    match name {
        "line" | "fig1_left" | "fig1_right" | "fig3_n2" | "fig3_n3" => Some((12.0, 1.0 / 16.0)),
        // Wider sweep range, so the level sets' compact cores reach farther out.
        "fig3_n4" => Some((32.0, 1.0 / 16.0)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{angular_sign_check, validate};

    #[test]
    fn every_builtin_validates() {
        for name in BUILTIN_NAMES {
            let ns: Vec<Option<i64>> = if *name == "zigzag" { vec![Some(2), Some(3), Some(10), Some(51)] } else { vec![None] };
            for n in ns {
                let s = builtin_scene(name, n).unwrap();
                let rep = validate(&s);
                assert!(rep.ok, "{name} {n:?}: {:?}", rep.violations);
            }
        }
    }

    #[test]
    fn zigzag_three_has_expected_pieces() {
        let s = builtin_scene("zigzag", Some(3)).unwrap();
        let shared = p(0.5, 1.0);
        let on: Vec<usize> = (0..s.edges.len()).filter(|&i| s.edges[i].endpoints().contains(&shared)).collect();
        assert_eq!(on, vec![zigzag_edge_id(3, 1).unwrap(), zigzag_edge_id(3, 2).unwrap()]);
        assert!(angular_sign_check(&s, shared).unwrap());
        assert_eq!(s.truncation_error, 1.0 / 3.0);
        let i0 = s.edges[zigzag_edge_id(3, 0).unwrap()];
        assert_eq!((i0.a, i0.b), (p(0.0, 1.0), p(0.0, -1.0)));
    }

    #[test]
    fn rejects_bad_names_and_parameters() {
        assert!(matches!(builtin_scene("fig9", None), Err(SceneError::UnknownBuiltin(_))));
        assert!(matches!(builtin_scene("zigzag", Some(1)), Err(SceneError::BadParameter(_))));
        assert!(matches!(builtin_scene("zigzag", None), Err(SceneError::BadParameter(_))));
        assert!(matches!(builtin_scene("line", Some(3)), Err(SceneError::BadParameter(_))));
    }

    fn seg_dist(q: Point, a: Point, b: Point) -> f64 {
        let d = b - a;
        let s = ((q - a).dot(d) / d.dot(d)).clamp(0.0, 1.0);
        q.dist(a + d * s)
    }

    /// Every extra segment of zigzag(2N) lies within 1/N of zigzag(N), and
    /// conversely, checked on a dense sample.
    #[test]
    fn zigzag_refinement_is_within_truncation() {
        for n in [2usize, 5, 8] {
            let a = builtin_scene("zigzag", Some(n as i64)).unwrap();
            let b = builtin_scene("zigzag", Some(2 * n as i64)).unwrap();
            let finite = |s: &Scene| -> Vec<(Point, Point)> {
                s.edges.iter().filter(|e| e.kind == super::super::EdgeKind::Segment).map(|e| (e.a, e.b)).collect()
            };
            let (sa, sb) = (finite(&a), finite(&b));
            let spacing = 1e-3;
            for (from, to) in [(&sa, &sb), (&sb, &sa)] {
                for &(x, y) in from.iter() {
                    let steps = (x.dist(y) / spacing).ceil() as usize;
                    for k in 0..=steps {
                        let q = x + (y - x) * (k as f64 / steps as f64);
                        let d = to.iter().map(|&(u, v)| seg_dist(q, u, v)).fold(f64::INFINITY, f64::min);
                        assert!(d <= 1.0 / n as f64 + 1e-9 + spacing, "n={n} q={q:?} d={d}");
                    }
                }
            }
        }
    }
}
