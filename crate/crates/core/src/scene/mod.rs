//! Piecewise-linear planar scenes: a closed set `K` built from segments and
//! rays, with a sign attached to each side of every edge.

mod builtin;
mod io;

pub use builtin::{builtin_scene, shipped_window, zigzag_edge_id, zigzag_vertex, BUILTIN_NAMES};
pub use io::{parse_scene, serialize_scene};

use crate::dsu::Dsu;
use crate::error::SceneError;
use crate::geom::{contact, Contact, Param, Point};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Ray directions closer than this to unit length are kept as authored.
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_int(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    Segment,
    Ray,
}

/// A segment `a -> b`, or a ray from `a` along the unit direction `b`.
/// Sides are taken relative to the direction of travel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub a: Point,
    pub b: Point,
    pub left: Sign,
    pub right: Sign,
}

impl Edge {
    pub fn segment(a: Point, b: Point, left: Sign, right: Sign) -> Edge {
        Edge { kind: EdgeKind::Segment, a, b, left, right }
    }

    /// Builds a ray, normalising the direction.
    pub fn ray(origin: Point, dir: Point, left: Sign, right: Sign) -> Edge {
        Edge { kind: EdgeKind::Ray, a: origin, b: normalize(dir), left, right }
    }

    pub fn param(&self) -> Param {
        match self.kind {
            EdgeKind::Segment => Param { origin: self.a, dir: self.b - self.a, s_max: 1.0 },
            EdgeKind::Ray => Param { origin: self.a, dir: self.b, s_max: f64::INFINITY },
        }
    }

    /// Finite endpoints: both ends of a segment, the origin of a ray.
    pub fn endpoints(&self) -> Vec<Point> {
        match self.kind {
            EdgeKind::Segment => vec![self.a, self.b],
            EdgeKind::Ray => vec![self.a],
        }
    }

    pub fn length(&self) -> f64 {
        match self.kind {
            EdgeKind::Segment => self.a.dist(self.b),
            EdgeKind::Ray => f64::INFINITY,
        }
    }

    /// A representative interior point.
    pub fn midpoint(&self) -> Point {
        match self.kind {
            EdgeKind::Segment => (self.a + self.b) * 0.5,
            EdgeKind::Ray => self.a + self.b,
        }
    }

    pub fn direction(&self) -> Point {
        self.param().dir
    }

    pub fn sign_of_side(&self, side: Side) -> Option<Sign> {
        match side {
            Side::Left => Some(self.left),
            Side::Right => Some(self.right),
            Side::On => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
    On,
}

pub(crate) fn normalize(d: Point) -> Point {
    let n = d.norm();
    if n == 0.0 || !n.is_finite() || (n - 1.0).abs() <= UNIT_TOLERANCE {
        d
    } else {
        d * (1.0 / n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub name: String,
    pub truncation_error: f64,
    pub edges: Vec<Edge>,
}

impl Scene {
    pub fn new(name: impl Into<String>, edges: Vec<Edge>) -> Scene {
        Scene { name: name.into(), truncation_error: 0.0, edges }
    }

    /// Distinct finite vertices, in order of first appearance.
    pub fn vertices(&self) -> Vec<Point> {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for e in &self.edges {
            for p in e.endpoints() {
                if seen.insert(vertex_key(p), ()).is_none() {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Largest Euclidean norm of any vertex (0 for a scene of rays through
    /// the origin).
    pub fn vertex_radius(&self) -> f64 {
        self.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn stars(&self) -> HashMap<(u64, u64), VertexStar> {
        let mut stars: HashMap<(u64, u64), VertexStar> = HashMap::new();
        for (id, e) in self.edges.iter().enumerate() {
            for inc in incidences(id, e) {
                stars
                    .entry(vertex_key(inc.at))
                    .or_insert_with(|| VertexStar { at: inc.at, spokes: Vec::new() })
                    .spokes
                    .push(inc.spoke);
            }
        }
        for s in stars.values_mut() {
            s.spokes.sort_by(|a, b| a.angle.total_cmp(&b.angle).then(a.edge.cmp(&b.edge)));
        }
        stars
    }
}

pub(crate) fn vertex_key(p: Point) -> (u64, u64) {
    // -0.0 and 0.0 name the same vertex.
    ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits())
}

/// An edge leaving a vertex, with the side labels as seen walking away from it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Spoke {
    pub edge: usize,
    pub angle: f64,
    pub left: Sign,
    pub right: Sign,
}

struct Incidence {
    at: Point,
    spoke: Spoke,
}

fn incidences(id: usize, e: &Edge) -> Vec<Incidence> {
    let dir = e.direction();
    let mut out = vec![Incidence {
        at: e.a,
        spoke: Spoke { edge: id, angle: dir.angle(), left: e.left, right: e.right },
    }];
    if e.kind == EdgeKind::Segment {
        out.push(Incidence {
            at: e.b,
            spoke: Spoke { edge: id, angle: (dir * -1.0).angle(), left: e.right, right: e.left },
        });
    }
    out
}

/// Edges around a vertex sorted counter-clockwise.
#[derive(Debug, Clone)]
pub(crate) struct VertexStar {
    pub at: Point,
    pub spokes: Vec<Spoke>,
}

impl VertexStar {
    /// True when every angular sector gets the same sign from both of the
    /// edges bounding it.
    pub fn consistent(&self) -> bool {
        let m = self.spokes.len();
        (0..m).all(|k| self.spokes[k].left == self.spokes[(k + 1) % m].right)
    }

    /// Sign of the sector containing direction `d` (taken from the spoke
    /// that starts the sector, counter-clockwise).
    pub fn sector_sign(&self, d: Point) -> (usize, Side, Sign) {
        let a = d.angle();
        let m = self.spokes.len();
        // Last spoke with angle <= a; wrap to the last spoke otherwise.
        let idx = match self.spokes.iter().rposition(|s| s.angle <= a) {
            Some(i) => i,
            None => m - 1,
        };
        let sp = self.spokes[idx];
        (sp.edge, Side::Left, sp.left)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub edges: Vec<usize>,
    pub witness: Option<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Violation {
    pub fn new(rule: &str, edges: Vec<usize>, witness: Option<Point>) -> Violation {
        Violation { rule: rule.to_string(), edges, witness, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Violation {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> ValidationReport {
        ValidationReport { ok: violations.is_empty(), violations }
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

/// Checks every structural rule a scene must satisfy to carry a signed
/// distance map. Violations are reported, never raised.
pub fn validate(scene: &Scene) -> ValidationReport {
    let mut out = Vec::new();
    if !(scene.truncation_error >= 0.0 && scene.truncation_error.is_finite()) {
        out.push(Violation::new("truncation-error", vec![], None));
    }

    let mut usable = vec![true; scene.edges.len()];
    for (i, e) in scene.edges.iter().enumerate() {
        if !e.a.is_finite() || !e.b.is_finite() {
            out.push(Violation::new("non-finite", vec![i], None));
            usable[i] = false;
            continue;
        }
        let degenerate = match e.kind {
            EdgeKind::Segment => e.a == e.b,
            EdgeKind::Ray => e.b.norm() == 0.0,
        };
        if degenerate {
            out.push(Violation::new("degenerate", vec![i], Some(e.a)));
            usable[i] = false;
            continue;
        }
        if e.left == e.right {
            out.push(Violation::new("sign-flip", vec![i], Some(e.midpoint())));
        }
    }

    for i in 0..scene.edges.len() {
        if !usable[i] {
            continue;
        }
        for j in i + 1..scene.edges.len() {
            if !usable[j] {
                continue;
            }
            if let Some(v) = pair_violation(i, &scene.edges[i], j, &scene.edges[j]) {
                out.push(v);
            }
        }
    }

    let stars = scene.stars();
    let mut keys: Vec<_> = stars.keys().copied().collect();
    keys.sort_by(|a, b| {
        let (pa, pb) = (stars[a].at, stars[b].at);
        pa.x.total_cmp(&pb.x).then(pa.y.total_cmp(&pb.y))
    });
    for k in &keys {
        let star = &stars[k];
        if star.spokes.iter().any(|s| !usable[s.edge]) {
            continue;
        }
        if !star.consistent() {
            let edges = star.spokes.iter().map(|s| s.edge).collect();
            let rule = if star.spokes.len() == 1 { "dangling-endpoint" } else { "sign-consistency" };
            out.push(Violation::new(rule, edges, Some(star.at)));
        }
    }

    // Every connected piece of K must be unbounded.
    let mut dsu = Dsu::new(scene.edges.len());
    let mut first_at: HashMap<(u64, u64), usize> = HashMap::new();
    for (i, e) in scene.edges.iter().enumerate() {
        for p in e.endpoints() {
            match first_at.get(&vertex_key(p)) {
                Some(&j) => {
                    dsu.union(i, j);
                }
                None => {
                    first_at.insert(vertex_key(p), i);
                }
            }
        }
    }
    let (labels, count) = dsu.labels();
    for c in 0..count {
        let members: Vec<usize> = (0..scene.edges.len()).filter(|&i| labels[i] == c).collect();
        if !members.iter().any(|&i| scene.edges[i].kind == EdgeKind::Ray) {
            out.push(Violation::new("bounded-component", members.clone(), Some(scene.edges[members[0]].a)));
        }
    }

    ValidationReport::from_violations(out)
}

fn pair_violation(i: usize, e: &Edge, j: usize, f: &Edge) -> Option<Violation> {
    match contact(&e.param(), &f.param()) {
        Contact::Disjoint => None,
        Contact::Overlap { at } => Some(Violation::new("overlap", vec![i, j], Some(at))),
        Contact::Point { at, s, u } => {
            let pe = e.param();
            let pf = f.param();
            let e_end = if s == 0.0 {
                Some(e.a)
            } else if s == pe.s_max {
                Some(e.b)
            } else {
                None
            };
            let f_end = if u == 0.0 {
                Some(f.a)
            } else if u == pf.s_max {
                Some(f.b)
            } else {
                None
            };
            match (e_end, f_end) {
                (Some(p), Some(q)) if p == q => None,
                _ => Some(Violation::new("crossing", vec![i, j], Some(at))),
            }
        }
    }
}

/// Whether the edges meeting at `vertex` induce a consistent sign on every
/// sector between them.
pub fn angular_sign_check(scene: &Scene, vertex: Point) -> Result<bool, SceneError> {
    let stars = scene.stars();
    let star = stars
        .get(&vertex_key(vertex))
        .ok_or(SceneError::NotAVertex { x: vertex.x, y: vertex.y })?;
    Ok(star.consistent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Minus, Plus};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    /// Independent crossing oracle: strict orientation tests on both pairs.
    fn properly_cross(a: Point, b: Point, c: Point, d: Point) -> Option<Point> {
        let o1 = (b - a).cross(c - a);
        let o2 = (b - a).cross(d - a);
        let o3 = (d - c).cross(a - c);
        let o4 = (d - c).cross(b - c);
        if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
            let t = o1 / (o1 - o2);
            Some(c + (d - c) * t)
        } else {
            None
        }
    }

    #[test]
    fn crossing_segments_are_reported_with_the_intersection() {
        let (a, b, c, d) = (p(-1.0, -1.0), p(1.0, 1.0), p(-1.0, 0.5), p(1.0, -0.5));
        let oracle = properly_cross(a, b, c, d).unwrap();
        let scene = Scene::new(
            "x",
            vec![Edge::segment(a, b, Plus, Minus), Edge::segment(c, d, Plus, Minus)],
        );
        let rep = validate(&scene);
        let v = rep.violations.iter().find(|v| v.rule == "crossing").unwrap();
        assert_eq!(v.edges, vec![0, 1]);
        let w = v.witness.unwrap();
        assert!(w.dist(oracle) < 1e-12, "{w:?} vs {oracle:?}");
    }

    #[test]
    fn equal_side_signs_are_a_sign_flip_violation() {
        let scene = Scene::new(
            "bad",
            vec![
                Edge::ray(p(0.0, 0.0), p(1.0, 0.0), Plus, Plus),
                Edge::ray(p(0.0, 0.0), p(-1.0, 0.0), Minus, Plus),
            ],
        );
        let rep = validate(&scene);
        assert!(!rep.ok);
        assert!(rep.has_rule("sign-flip"));
    }

    #[test]
    fn split_line_is_consistent() {
        let scene = Scene::new(
            "split",
            vec![
                Edge::ray(p(-1.0, 0.0), p(-1.0, 0.0), Minus, Plus),
                Edge::segment(p(-1.0, 0.0), p(1.0, 0.0), Plus, Minus),
                Edge::ray(p(1.0, 0.0), p(1.0, 0.0), Plus, Minus),
            ],
        );
        assert!(validate(&scene).ok, "{:?}", validate(&scene));
        assert!(angular_sign_check(&scene, p(1.0, 0.0)).unwrap());
        assert!(angular_sign_check(&scene, p(-1.0, 0.0)).unwrap());
        assert!(angular_sign_check(&scene, p(0.0, 0.0)).is_err());
    }

    /// Three spokes can never alternate: enumerate every labelling and
    /// confirm that none is consistent.
    #[test]
    fn odd_star_has_no_consistent_labelling() {
        let dirs = [p(1.0, 0.0), p(-0.5, 0.8), p(-0.5, -0.8)];
        let mut any = false;
        for mask in 0..8u8 {
            let edges = dirs
                .iter()
                .enumerate()
                .map(|(k, &d)| {
                    let left = if mask >> k & 1 == 1 { Plus } else { Minus };
                    Edge::ray(p(0.0, 0.0), d, left, left.flip())
                })
                .collect();
            let scene = Scene::new("star", edges);
            any |= angular_sign_check(&scene, p(0.0, 0.0)).unwrap();
        }
        assert!(!any);
    }

    #[test]
    fn dangling_segment_end_is_flagged() {
        let scene = Scene::new(
            "dangle",
            vec![
                Edge::ray(p(0.0, 0.0), p(-1.0, 0.0), Minus, Plus),
                Edge::segment(p(0.0, 0.0), p(1.0, 0.0), Plus, Minus),
            ],
        );
        let rep = validate(&scene);
        assert!(rep.has_rule("dangling-endpoint"));
    }

    #[test]
    fn bounded_piece_is_flagged() {
        let mut scene = builtin_scene("line", None).unwrap();
        let tri = [p(5.0, 5.0), p(6.0, 5.0), p(5.0, 6.0)];
        for k in 0..3 {
            scene.edges.push(Edge::segment(tri[k], tri[(k + 1) % 3], Plus, Minus));
        }
        let rep = validate(&scene);
        assert!(rep.has_rule("bounded-component"));
    }

    #[test]
    fn t_junction_is_a_crossing() {
        let scene = Scene::new(
            "t",
            vec![
                Edge::ray(p(-1.0, 0.0), p(-1.0, 0.0), Minus, Plus),
                Edge::segment(p(-1.0, 0.0), p(1.0, 0.0), Plus, Minus),
                Edge::ray(p(1.0, 0.0), p(1.0, 0.0), Plus, Minus),
                Edge::ray(p(0.0, 0.0), p(0.0, 1.0), Plus, Minus),
            ],
        );
        assert!(validate(&scene).has_rule("crossing"));
    }
}
