//! CSV and SVG encodings of level-set meshes, with readers for both.
//!
//! CSV rows are `component_id,seq,x,y`; `seq` restarts at 0 for every
//! polyline. The SVG holds one `<path>` per component (one subpath per
//! polyline) in screen coordinates `(x + R, R - y)`, with the level and the
//! counts as `data-*` attributes on the root element.

use super::LevelSetMesh;
use crate::error::LevelSetError;
use crate::geom::Point;
use std::fmt::Write;

fn fmt_err(line: usize, message: impl Into<String>) -> LevelSetError {
    LevelSetError::Format { line, message: message.into() }
}

pub const MESH_CSV_HEADER: &str = "component_id,seq,x,y";

pub fn mesh_to_csv(mesh: &LevelSetMesh) -> String {
    let mut out = String::from(MESH_CSV_HEADER);
    out.push('\n');
    for (pl, &c) in mesh.polylines.iter().zip(&mesh.component_id) {
        for (k, p) in pl.iter().enumerate() {
            writeln!(out, "{c},{k},{},{}", p.x, p.y).expect("writing to a String");
        }
    }
    out
}

/// Polylines with their component ids, in file order.
pub fn read_mesh_csv(text: &str) -> Result<Vec<(usize, Vec<Point>)>, LevelSetError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == MESH_CSV_HEADER => {}
        _ => return Err(fmt_err(1, format!("expected header `{MESH_CSV_HEADER}`"))),
    }
    let mut out: Vec<(usize, Vec<Point>)> = Vec::new();
    for (i, line) in lines {
        let ln = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 4 {
            return Err(fmt_err(ln, "expected 4 fields"));
        }
        let c: usize = f[0].parse().map_err(|_| fmt_err(ln, "bad component_id"))?;
        let seq: usize = f[1].parse().map_err(|_| fmt_err(ln, "bad seq"))?;
        let x: f64 = f[2].parse().map_err(|_| fmt_err(ln, "bad x"))?;
        let y: f64 = f[3].parse().map_err(|_| fmt_err(ln, "bad y"))?;
        if !(x.is_finite() && y.is_finite()) {
            return Err(fmt_err(ln, "non-finite coordinate"));
        }
        if seq == 0 {
            out.push((c, vec![Point::new(x, y)]));
        } else {
            match out.last_mut() {
                Some((pc, pts)) if *pc == c && pts.len() == seq => pts.push(Point::new(x, y)),
                _ => return Err(fmt_err(ln, "seq does not continue the previous polyline")),
            }
        }
    }
    Ok(out)
}

/// Counts written into the SVG root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgCounts {
    pub components: usize,
    pub complement: usize,
    pub ends: usize,
}

pub fn mesh_to_svg(mesh: &LevelSetMesh) -> String {
    let r = mesh.window.half_width;
    let counts = SvgCounts {
        components: mesh.components.len(),
        complement: mesh.n_complement,
        ends: mesh.components.iter().map(|c| c.ends).sum(),
    };
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {w}" data-half-width="{r}" data-level="{t}" data-components="{c}" data-complement="{cc}" data-ends="{e}">"#,
        w = 2.0 * r,
        t = mesh.t,
        c = counts.components,
        cc = counts.complement,
        e = counts.ends,
    )
    .expect("writing to a String");
    for c in 0..counts.components {
        let mut d = String::new();
        for (pl, _) in mesh.polylines.iter().zip(&mesh.component_id).filter(|(_, &id)| id == c) {
            for (k, p) in pl.iter().enumerate() {
                if !d.is_empty() {
                    d.push(' ');
                }
                write!(d, "{} {} {}", if k == 0 { 'M' } else { 'L' }, p.x + r, r - p.y).expect("writing to a String");
            }
        }
        writeln!(
            out,
            r#"  <path data-component="{c}" d="{d}" fill="none" stroke="black" stroke-width="{sw}"/>"#,
            sw = mesh.window.pitch
        )
        .expect("writing to a String");
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgMesh {
    pub half_width: f64,
    pub level: f64,
    pub counts: SvgCounts,
    /// Per path: component id and its polylines in scene coordinates.
    pub paths: Vec<(usize, Vec<Vec<Point>>)>,
}

/// Attributes of every element named `tag`, with the line it starts on.
fn elements<'a>(text: &'a str, tag: &str) -> Result<Vec<(usize, Vec<(&'a str, &'a str)>)>, LevelSetError> {
    let open = format!("<{tag}");
    let mut out = Vec::new();
    let mut rest = text;
    let mut offset = 0;
    while let Some(pos) = rest.find(&open) {
        let start = pos + open.len();
        let line = text[..offset + pos].matches('\n').count() + 1;
        let after = &rest[start..];
        if !after.starts_with(|c: char| c.is_whitespace() || c == '>' || c == '/') {
            offset += start;
            rest = after;
            continue;
        }
        let end = after.find('>').ok_or_else(|| fmt_err(line, format!("unterminated <{tag}>")))?;
        let body = after[..end].trim_end_matches('/');
        let mut attrs = Vec::new();
        let mut s = body.trim_start();
        while !s.is_empty() {
            let eq = s.find('=').ok_or_else(|| fmt_err(line, "attribute without value"))?;
            let name = s[..eq].trim();
            let v = s[eq + 1..].trim_start();
            let v = v.strip_prefix('"').ok_or_else(|| fmt_err(line, "attribute value must be quoted"))?;
            let close = v.find('"').ok_or_else(|| fmt_err(line, "unterminated attribute value"))?;
            attrs.push((name, &v[..close]));
            s = v[close + 1..].trim_start();
        }
        out.push((line, attrs));
        offset += start + end;
        rest = &after[end..];
    }
    Ok(out)
}

fn attr<'a>(attrs: &[(&str, &'a str)], name: &str, line: usize) -> Result<&'a str, LevelSetError> {
    attrs
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, v)| *v)
        .ok_or_else(|| fmt_err(line, format!("missing attribute `{name}`")))
}

fn num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, LevelSetError> {
    s.trim().parse().map_err(|_| fmt_err(line, format!("bad {what} `{s}`")))
}

pub fn read_mesh_svg(text: &str) -> Result<SvgMesh, LevelSetError> {
    let roots = elements(text, "svg")?;
    let (line, root) = roots.first().ok_or_else(|| fmt_err(1, "no <svg> element"))?;
    let r: f64 = num(attr(root, "data-half-width", *line)?, *line, "half-width")?;
    if !(r.is_finite() && r > 0.0) {
        return Err(fmt_err(*line, "half-width must be positive"));
    }
    let level: f64 = num(attr(root, "data-level", *line)?, *line, "level")?;
    let counts = SvgCounts {
        components: num(attr(root, "data-components", *line)?, *line, "count")?,
        complement: num(attr(root, "data-complement", *line)?, *line, "count")?,
        ends: num(attr(root, "data-ends", *line)?, *line, "count")?,
    };
    let mut paths = Vec::new();
    for (line, attrs) in elements(text, "path")? {
        let c: usize = num(attr(&attrs, "data-component", line)?, line, "component")?;
        let d = attr(&attrs, "d", line)?;
        let toks: Vec<&str> = d.split_whitespace().collect();
        if toks.len() % 3 != 0 {
            return Err(fmt_err(line, "path data must be command x y triples"));
        }
        let mut lines: Vec<Vec<Point>> = Vec::new();
        for tr in toks.chunks(3) {
            let x: f64 = num(tr[1], line, "coordinate")?;
            let y: f64 = num(tr[2], line, "coordinate")?;
            if !(x.is_finite() && y.is_finite()) {
                return Err(fmt_err(line, "non-finite coordinate"));
            }
            let p = Point::new(x - r, r - y);
            match tr[0] {
                "M" => lines.push(vec![p]),
                "L" => lines.last_mut().ok_or_else(|| fmt_err(line, "L before M"))?.push(p),
                other => return Err(fmt_err(line, format!("unsupported path command `{other}`"))),
            }
        }
        paths.push((c, lines));
    }
    Ok(SvgMesh { half_width: r, level, counts, paths })
}
