//! JSON scene files.

use super::{normalize, Edge, EdgeKind, Scene, Sign};
use crate::error::SceneError;
use crate::geom::Point;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    name: String,
    #[serde(default)]
    truncation_error: f64,
    edges: Vec<RawEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    kind: RawKind,
    a: [f64; 2],
    b: [f64; 2],
    left: f64,
    right: f64,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum RawKind {
    Segment,
    Ray,
}

fn sign(v: f64, edge: usize, side: &str) -> Result<Sign, SceneError> {
    if v == 1.0 {
        Ok(Sign::Plus)
    } else if v == -1.0 {
        Ok(Sign::Minus)
    } else {
        Err(SceneError::Semantic { edge, message: format!("{side} sign must be 1 or -1, got {v}") })
    }
}

/// Parses a scene file. Structural rules that involve more than one edge
/// are left to [`super::validate`].
pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let raw: RawScene = serde_json::from_str(text).map_err(|e| SceneError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if !(raw.truncation_error >= 0.0 && raw.truncation_error.is_finite()) {
        return Err(SceneError::Semantic {
            edge: 0,
            message: format!("truncation_error must be finite and nonnegative, got {}", raw.truncation_error),
        });
    }
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (i, e) in raw.edges.iter().enumerate() {
        let a = Point::new(e.a[0], e.a[1]);
        let b = Point::new(e.b[0], e.b[1]);
        let left = sign(e.left, i, "left")?;
        let right = sign(e.right, i, "right")?;
        let edge = match e.kind {
            RawKind::Segment => {
                if a == b {
                    return Err(SceneError::Semantic { edge: i, message: "zero-length segment".into() });
                }
                Edge::segment(a, b, left, right)
            }
            RawKind::Ray => {
                let n = b.norm();
                if n == 0.0 || !n.is_finite() {
                    return Err(SceneError::Semantic { edge: i, message: "ray direction must be nonzero and finite".into() });
                }
                Edge { kind: EdgeKind::Ray, a, b: normalize(b), left, right }
            }
        };
        edges.push(edge);
    }
    Ok(Scene { name: raw.name, truncation_error: raw.truncation_error, edges })
}

/// Writes a scene in the file format read by [`parse_scene`]; the output
/// parses back to an identical scene.
pub fn serialize_scene(scene: &Scene) -> String {
    let raw = RawScene {
        name: scene.name.clone(),
        truncation_error: scene.truncation_error,
        edges: scene
            .edges
            .iter()
            .map(|e| RawEdge {
                kind: match e.kind {
                    EdgeKind::Segment => RawKind::Segment,
                    EdgeKind::Ray => RawKind::Ray,
                },
                a: [e.a.x, e.a.y],
                b: [e.b.x, e.b.y],
                left: e.left.value(),
                right: e.right.value(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("scene serialisation cannot fail")
}
