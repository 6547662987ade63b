//! Level sets `f^{-1}(t)` on square windows: extraction, component and end
//! counts, classification.

mod bottleneck;
pub mod export;
mod grid;
mod local;
pub(crate) mod raster;
mod separation;

pub use bottleneck::{bottleneck_probe, BottleneckReport};
pub use grid::{FieldCache, Grid, SampledField, Window};
pub use local::local_components;
pub use raster::Band;
pub use separation::{end_separation, EndSeparation};

use crate::distfield::QuotientMap;
use crate::error::LevelSetError;
use crate::geom::Point;
use raster::{analyse, Analysis};
use serde::{Deserialize, Serialize};

/// Windows at which a built-in scene's counts are golden: the shipped
/// window and its doubling.
pub fn shipped_windows(name: &str) -> Option<Vec<Window>> {
    let (r, h) = crate::scene::shipped_window(name)?;
    let w = Window::new(r, h);
    Some(vec![w, w.doubled()])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub ends: usize,
    pub has_branch: bool,
    pub bounded: bool,
    pub line_like: bool,
    /// Direction angle of each end, taken where it leaves the window.
    pub end_angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopoReport {
    pub t: f64,
    /// The band actually analysed; `lo == hi == t` for a plain level.
    pub band: (f64, f64),
    pub n_components: usize,
    pub n_complement: usize,
    pub n_ends: usize,
    pub per_component: Vec<ComponentInfo>,
    /// Complement regions not reaching the window frame (anomalies).
    pub bounded_regions: usize,
    pub saddle_cells: usize,
    pub stabilized: bool,
    /// `(half_width, n_components, n_complement, n_ends)` per window tried.
    pub per_window: Vec<(f64, usize, usize, usize)>,
}

impl TopoReport {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.n_components, self.n_complement, self.n_ends)
    }

    /// Ends in angular order, each tagged with its component.
    pub fn ends_by_angle(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = self
            .per_component
            .iter()
            .enumerate()
            .flat_map(|(c, info)| info.end_angles.iter().map(move |&a| (a, c)))
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }
}

/// Ends of each component: classes of atoms outside the central box of
/// half-width `inner`, joined only outside it, that reach the frame.
fn component_ends(a: &Analysis, inner: f64) -> Vec<Vec<f64>> {
    let c = a.grid.center();
    let keep: Vec<bool> = a.atoms.iter().map(|at| (at.pos - c).norm_inf() > inner).collect();
    let (label, count) = a.restricted_classes(&keep);
    let mut sum = vec![(0.0, 0.0, 0usize); count];
    for (i, at) in a.atoms.iter().enumerate() {
        if at.frame && label[i] != usize::MAX {
            let s = &mut sum[label[i]];
            s.0 += at.pos.x - c.x;
            s.1 += at.pos.y - c.y;
            s.2 += 1;
        }
    }
    let mut owner = vec![usize::MAX; count];
    for (i, &l) in label.iter().enumerate() {
        if l != usize::MAX && owner[l] == usize::MAX {
            owner[l] = a.comp[i];
        }
    }
    let mut out = vec![Vec::new(); a.n_comp];
    for l in 0..count {
        let (x, y, k) = sum[l];
        if k > 0 {
            out[owner[l]].push(Point::new(x / k as f64, y / k as f64).angle());
        }
    }
    out
}

fn topo(a: &Analysis, t: f64) -> TopoReport {
    let inner = 0.5 * a.grid.half_width();
    let ends = component_ends(a, inner);
    let mut junction = vec![false; a.n_comp];
    for &atom in &a.junction_atoms {
        junction[a.comp[atom as usize]] = true;
    }
    let mut on_frame = vec![false; a.n_comp];
    for (i, at) in a.atoms.iter().enumerate() {
        if at.frame {
            on_frame[a.comp[i]] = true;
        }
    }
    let per_component: Vec<ComponentInfo> = (0..a.n_comp)
        .map(|c| {
            let e = ends[c].len();
            let has_branch = junction[c] || e > 2;
            ComponentInfo {
                ends: e,
                has_branch,
                bounded: !on_frame[c],
                line_like: e == 2 && !has_branch,
                end_angles: ends[c].clone(),
            }
        })
        .collect();
    let n_complement = a.frame_regions().len();
    let n_ends = per_component.iter().map(|c| c.ends).sum();
    TopoReport {
        t,
        band: (a.band.lo, a.band.hi),
        n_components: a.n_comp,
        n_complement,
        n_ends,
        per_component,
        bounded_regions: a.n_regions - n_complement,
        saddle_cells: a.saddle_cells.len(),
        stabilized: false,
        per_window: vec![(a.grid.half_width(), a.n_comp, n_complement, n_ends)],
    }
}

/// Polyline mesh of a level set on one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetMesh {
    pub t: f64,
    pub window: Window,
    pub polylines: Vec<Vec<Point>>,
    pub component_id: Vec<usize>,
    /// Per component, where it meets the window frame.
    pub boundary_hits: Vec<Vec<Point>>,
    pub saddle_cells: Vec<(usize, usize)>,
    pub components: Vec<ComponentInfo>,
    pub n_complement: usize,
}

fn polylines(a: &Analysis) -> (Vec<Vec<Point>>, Vec<usize>) {
    let total = a.atoms.len() + a.centers.len();
    let mut segs: Vec<(u32, u32)> = a.segments.iter().map(|&(x, y)| (x.min(y), x.max(y))).filter(|s| s.0 != s.1).collect();
    segs.sort_unstable();
    segs.dedup();
    let mut start = vec![0usize; total + 1];
    for &(x, y) in &segs {
        start[x as usize + 1] += 1;
        start[y as usize + 1] += 1;
    }
    for k in 0..total {
        start[k + 1] += start[k];
    }
    let mut fill = start.clone();
    let mut adj = vec![(0u32, 0usize); 2 * segs.len()];
    for (s, &(x, y)) in segs.iter().enumerate() {
        adj[fill[x as usize]] = (y, s);
        fill[x as usize] += 1;
        adj[fill[y as usize]] = (x, s);
        fill[y as usize] += 1;
    }
    let degree = |v: usize| start[v + 1] - start[v];
    let node_comp = |v: usize| -> usize {
        if v < a.atoms.len() {
            a.comp[v]
        } else {
            a.comp[adj[start[v]].0 as usize]
        }
    };
    let mut used = vec![false; segs.len()];
    let mut lines = Vec::new();
    let mut ids = Vec::new();
    let walk = |from: usize, first: usize, used: &mut Vec<bool>| -> Vec<Point> {
        let mut pts = vec![a.node_pos(from as u32)];
        let mut k = first;
        loop {
            let (next, s) = adj[k];
            used[s] = true;
            let cur = next as usize;
            pts.push(a.node_pos(cur as u32));
            if degree(cur) != 2 || cur == from {
                break;
            }
            match (start[cur]..start[cur + 1]).find(|&q| !used[adj[q].1]) {
                Some(q) => k = q,
                None => break,
            }
        }
        pts
    };
    for v in 0..total {
        if degree(v) == 2 || degree(v) == 0 {
            continue;
        }
        for k in start[v]..start[v + 1] {
            if !used[adj[k].1] {
                lines.push(walk(v, k, &mut used));
                ids.push(node_comp(v));
            }
        }
    }
    for v in 0..total {
        for k in start[v]..start[v + 1] {
            if !used[adj[k].1] {
                lines.push(walk(v, k, &mut used));
                ids.push(node_comp(v));
            }
        }
    }
    (lines, ids)
}

fn mesh_from(a: &Analysis, t: f64, window: Window) -> LevelSetMesh {
    let report = topo(a, t);
    let (polylines, component_id) = polylines(a);
    let mut boundary_hits = vec![Vec::new(); a.n_comp];
    for (i, at) in a.atoms.iter().enumerate() {
        if at.frame {
            boundary_hits[a.comp[i]].push(at.pos);
        }
    }
    LevelSetMesh {
        t,
        window,
        polylines,
        component_id,
        boundary_hits,
        saddle_cells: a.saddle_cells.clone(),
        components: report.per_component,
        n_complement: report.n_complement,
    }
}

/// Extracts `f^{-1}(t)` on a window.
pub fn extract(map: &QuotientMap, t: f64, w: Window) -> Result<LevelSetMesh, LevelSetError> {
    let cache = FieldCache::new(map);
    extract_band(&cache, Band::level(t), w)
}

/// Extracts `f^{-1}([lo, hi])`, reusing cached samples.
pub fn extract_band(cache: &FieldCache, band: Band, w: Window) -> Result<LevelSetMesh, LevelSetError> {
    let field = cache.field(w.grid()?);
    let a = analyse(cache.map(), &field, band);
    Ok(mesh_from(&a, band.mid(), w))
}

pub fn count_components(mesh: &LevelSetMesh) -> usize {
    mesh.components.len()
}

/// Complement regions of `f^{-1}(t)` reaching the window frame.
pub fn count_complement(map: &QuotientMap, t: f64, w: Window) -> Result<usize, LevelSetError> {
    let field = SampledField::sample(map, w.grid()?);
    Ok(analyse(map, &field, Band::level(t)).frame_regions().len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentClass {
    pub ends: usize,
    pub has_branch: bool,
    pub line_like: bool,
}

pub fn classify(mesh: &LevelSetMesh) -> Vec<ComponentClass> {
    mesh.components
        .iter()
        .map(|c| ComponentClass { ends: c.ends, has_branch: c.has_branch, line_like: c.line_like })
        .collect()
}

/// Topology of one band across a fixed ascending list of windows.
pub struct Census<'a> {
    cache: FieldCache<'a>,
    windows: Vec<Window>,
}

impl<'a> Census<'a> {
    pub fn new(map: &'a QuotientMap, windows: Vec<Window>) -> Result<Census<'a>, LevelSetError> {
        if windows.len() < 2 {
            return Err(LevelSetError::TooFewWindows);
        }
        for w in &windows {
            w.grid()?;
        }
        Ok(Census { cache: FieldCache::new(map), windows })
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }

    pub fn cache(&self) -> &FieldCache<'a> {
        &self.cache
    }

    /// Samples every window up front (in parallel internally).
    pub fn warm(&self) {
        for w in &self.windows {
            self.cache.field(w.grid().expect("checked in new"));
        }
    }

    /// Report of the largest window, stabilized when the last two windows
    /// agree on all three counts.
    pub fn report(&self, band: Band) -> TopoReport {
        let mut per_window = Vec::with_capacity(self.windows.len());
        let mut last = None;
        for w in &self.windows {
            let field = self.cache.field(w.grid().expect("checked in new"));
            let a = analyse(self.cache.map(), &field, band);
            let r = topo(&a, band.mid());
            per_window.push(r.per_window[0]);
            last = Some(r);
        }
        let mut r = last.expect("at least two windows");
        let k = per_window.len();
        let (p, q) = (per_window[k - 2], per_window[k - 1]);
        r.stabilized = (p.1, p.2, p.3) == (q.1, q.2, q.3);
        r.per_window = per_window;
        r
    }

    /// Per-region check that each complement region's boundary has twice as
    /// many ends as it meets components, on the largest window.
    pub fn region_boundaries(&self, band: Band) -> Vec<RegionCheck> {
        let w = *self.windows.last().expect("at least two windows");
        let field = self.cache.field(w.grid().expect("checked in new"));
        let a = analyse(self.cache.map(), &field, band);
        region_checks(&a)
    }
}

/// Outcome of the boundary-ends check for one complement region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCheck {
    pub region: usize,
    /// A node of the region, for locating it.
    pub witness: Point,
    pub boundary_ends: usize,
    pub adjacent_components: usize,
    pub pass: bool,
}

fn region_checks(a: &Analysis) -> Vec<RegionCheck> {
    let inner = 0.5 * a.grid.half_width();
    let c = a.grid.center();
    let outer: Vec<bool> = a.atoms.iter().map(|at| (at.pos - c).norm_inf() > inner).collect();
    let adj: Vec<Vec<u32>> = (0..a.atoms.len()).map(|i| a.atom_regions(i)).collect();
    let side = a.grid.side();
    let mut out = Vec::new();
    for r in a.frame_regions() {
        let touches: Vec<bool> = adj.iter().map(|rs| rs.contains(&(r as u32))).collect();
        let keep: Vec<bool> = touches.iter().zip(&outer).map(|(&t, &o)| t && o).collect();
        let (label, count) = a.restricted_classes(&keep);
        let mut hit = vec![false; count];
        for (i, at) in a.atoms.iter().enumerate() {
            if at.frame && label[i] != usize::MAX {
                hit[label[i]] = true;
            }
        }
        let boundary_ends = hit.iter().filter(|&&h| h).count();
        let mut comps: Vec<usize> = (0..a.atoms.len()).filter(|&i| touches[i]).map(|i| a.comp[i]).collect();
        comps.sort_unstable();
        comps.dedup();
        let k = a.region.iter().position(|&x| x == r as u32).expect("region has a node");
        let witness = a.grid.node(k % side, k / side);
        out.push(RegionCheck {
            region: r,
            witness,
            boundary_ends,
            adjacent_components: comps.len(),
            pass: boundary_ends == 2 * comps.len(),
        });
    }
    out
}

/// Two-window census of a single level.
pub fn end_census(map: &QuotientMap, t: f64, windows: &[Window]) -> Result<TopoReport, LevelSetError> {
    let census = Census::new(map, windows.to_vec())?;
    Ok(census.report(Band::level(t)))
}
