//! Raster topology of `f^{-1}([lo, hi])` on a grid.
//!
//! Grid nodes are classed low (`f < lo`), mid (`lo <= f <= hi`) or high
//! (`f > hi`). The level set is represented by atoms: mid nodes and grid
//! edges joining a low node to a high node. Atoms are joined cell by cell;
//! four-crossing cells are resolved by the field value at the cell center.
//! Complement regions are 4-connected classes of low or high nodes, plus the
//! diagonal a resolved saddle cell opens and the corners of one class in a
//! cell whose other corners are all mid.

use super::grid::{Grid, SampledField};
use crate::distfield::QuotientMap;
use crate::dsu::Dsu;
use crate::geom::Point;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Low,
    Mid,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn level(t: f64) -> Band {
        Band { lo: t, hi: t }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    fn class(&self, v: f64) -> Class {
        if v < self.lo {
            Class::Low
        } else if v > self.hi {
            Class::High
        } else {
            Class::Mid
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Node(usize, usize),
    /// Edge from `(i, j)` to `(i + 1, j)`.
    HEdge(usize, usize),
    /// Edge from `(i, j)` to `(i, j + 1)`.
    VEdge(usize, usize),
}

#[derive(Debug, Clone, Copy)]
pub struct Atom {
    pub kind: AtomKind,
    pub pos: Point,
    pub frame: bool,
}

/// Everything derived from one band on one grid.
pub struct Analysis {
    pub grid: Grid,
    pub band: Band,
    pub atoms: Vec<Atom>,
    pub joins: Vec<(u32, u32)>,
    /// Segments of the drawn level set; ids past `atoms.len()` are cell
    /// centers listed in `centers`.
    pub segments: Vec<(u32, u32)>,
    pub centers: Vec<Point>,
    pub saddle_cells: Vec<(usize, usize)>,
    /// Atom id of a representative atom of each junction cell.
    pub junction_atoms: Vec<u32>,
    pub comp: Vec<usize>,
    pub n_comp: usize,
    /// Region label per node (`NONE` for mid nodes).
    pub region: Vec<u32>,
    pub n_regions: usize,
    pub region_on_frame: Vec<bool>,
}

struct AtomIndex {
    node: Vec<u32>,
    hedge: Vec<u32>,
    vedge: Vec<u32>,
    n: usize,
}

impl AtomIndex {
    fn node(&self, i: usize, j: usize) -> u32 {
        self.node[j * (self.n + 1) + i]
    }
    fn hedge(&self, i: usize, j: usize) -> u32 {
        self.hedge[j * self.n + i]
    }
    fn vedge(&self, i: usize, j: usize) -> u32 {
        self.vedge[j * (self.n + 1) + i]
    }
}

fn crossing(a: Point, b: Point, va: f64, vb: f64, level: f64) -> Point {
    let s = ((level - va) / (vb - va)).clamp(0.0, 1.0);
    a + (b - a) * s
}

pub fn analyse(map: &QuotientMap, field: &SampledField, band: Band) -> Analysis {
    let g = field.grid;
    let n = g.n;
    let side = n + 1;
    let level = band.mid();
    let classes: Vec<Class> = field.values.iter().map(|&v| band.class(v)).collect();
    let cls = |i: usize, j: usize| classes[j * side + i];
    let is_cross = |a: Class, b: Class| matches!((a, b), (Class::Low, Class::High) | (Class::High, Class::Low));

    let mut ix = AtomIndex { node: vec![NONE; side * side], hedge: vec![NONE; n * side], vedge: vec![NONE; side * n], n };
    let mut atoms = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let on_frame_node = i == 0 || j == 0 || i == n || j == n;
            if cls(i, j) == Class::Mid {
                ix.node[j * side + i] = atoms.len() as u32;
                atoms.push(Atom { kind: AtomKind::Node(i, j), pos: g.node(i, j), frame: on_frame_node });
            }
            if i < n && is_cross(cls(i, j), cls(i + 1, j)) {
                ix.hedge[j * n + i] = atoms.len() as u32;
                let pos = crossing(g.node(i, j), g.node(i + 1, j), field.at(i, j), field.at(i + 1, j), level);
                atoms.push(Atom { kind: AtomKind::HEdge(i, j), pos, frame: j == 0 || j == n });
            }
            if j < n && is_cross(cls(i, j), cls(i, j + 1)) {
                ix.vedge[j * side + i] = atoms.len() as u32;
                let pos = crossing(g.node(i, j), g.node(i, j + 1), field.at(i, j), field.at(i, j + 1), level);
                atoms.push(Atom { kind: AtomKind::VEdge(i, j), pos, frame: i == 0 || i == n });
            }
        }
    }

    let mut joins = Vec::new();
    let mut segments = Vec::new();
    let mut centers = Vec::new();
    let mut saddle_cells = Vec::new();
    let mut junction_atoms = Vec::new();
    let mut regions = Dsu::new(side * side);

    for j in 0..=n {
        for i in 0..=n {
            let c = cls(i, j);
            if c == Class::Mid {
                continue;
            }
            if i < n && cls(i + 1, j) == c {
                regions.union(j * side + i, j * side + i + 1);
            }
            if j < n && cls(i, j + 1) == c {
                regions.union(j * side + i, (j + 1) * side + i);
            }
        }
    }

    for j in 0..n {
        for i in 0..n {
            // Corners counter-clockwise from (i, j); side k joins corner k to k + 1.
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let cc = corners.map(|(a, b)| cls(a, b));
            let sides = [ix.hedge(i, j), ix.vedge(i + 1, j), ix.hedge(i, j + 1), ix.vedge(i, j)];
            let has_mid = cc.contains(&Class::Mid);
            if has_mid {
                let mut here: Vec<u32> = Vec::with_capacity(8);
                for k in 0..4 {
                    let (a, b) = corners[k];
                    if cc[k] == Class::Mid {
                        here.push(ix.node(a, b));
                    }
                    if sides[k] != NONE {
                        here.push(sides[k]);
                    }
                }
                for w in here.windows(2) {
                    joins.push((w[0], w[1]));
                }
                // Two diagonal corners of one class with mid corners between
                // them: the cell center decides whether they touch.
                for k in 0..2 {
                    if cc[k] != Class::Mid && cc[k] == cc[k + 2] && cc[k + 1] == Class::Mid && cc[(k + 3) % 4] == Class::Mid {
                        let v = map.eval(g.node(i, j) + Point::new(0.5 * g.h, 0.5 * g.h));
                        if band.class(v) == cc[k] {
                            let ((a, b), (p, q)) = (corners[k], corners[k + 2]);
                            regions.union(b * side + a, q * side + p);
                        }
                    }
                }
                if here.len() == 2 {
                    segments.push((here[0], here[1]));
                } else if here.len() > 2 {
                    let center = (atoms.len() + centers.len()) as u32;
                    centers.push(g.node(i, j) + Point::new(0.5 * g.h, 0.5 * g.h));
                    for &a in &here {
                        segments.push((a, center));
                    }
                }
                continue;
            }
            let crossing_sides: Vec<usize> = (0..4).filter(|&k| sides[k] != NONE).collect();
            match crossing_sides.len() {
                2 => {
                    let (a, b) = (sides[crossing_sides[0]], sides[crossing_sides[1]]);
                    joins.push((a, b));
                    segments.push((a, b));
                }
                4 => {
                    saddle_cells.push((i, j));
                    let v = map.eval(g.node(i, j) + Point::new(0.5 * g.h, 0.5 * g.h));
                    let cv = band.class(v);
                    if cv == Class::Mid {
                        for k in 1..4 {
                            joins.push((sides[0], sides[k]));
                        }
                        let center = (atoms.len() + centers.len()) as u32;
                        centers.push(g.node(i, j) + Point::new(0.5 * g.h, 0.5 * g.h));
                        for &s in &sides {
                            segments.push((s, center));
                        }
                        junction_atoms.push(sides[0]);
                    } else {
                        // The center's class owns the diagonal; arcs cut off
                        // the two corners of the other class.
                        for k in 0..4 {
                            if cc[k] != cv {
                                let (a, b) = (sides[(k + 3) % 4], sides[k]);
                                joins.push((a, b));
                                segments.push((a, b));
                            } else if k < 2 {
                                let (a, b) = corners[k];
                                let (c, d) = corners[k + 2];
                                regions.union(b * side + a, d * side + c);
                            }
                        }
                    }
                }
                _ => {}
            }
        }
    }

    let mut comps = Dsu::new(atoms.len());
    for &(a, b) in &joins {
        comps.union(a as usize, b as usize);
    }
    let (comp, n_comp) = comps.labels();

    let mut region = vec![NONE; side * side];
    let mut region_on_frame = Vec::new();
    let mut root_label: Vec<u32> = vec![NONE; side * side];
    for j in 0..=n {
        for i in 0..=n {
            let k = j * side + i;
            if classes[k] == Class::Mid {
                continue;
            }
            let r = regions.find(k);
            if root_label[r] == NONE {
                root_label[r] = region_on_frame.len() as u32;
                region_on_frame.push(false);
            }
            let l = root_label[r];
            region[k] = l;
            if i == 0 || j == 0 || i == n || j == n {
                region_on_frame[l as usize] = true;
            }
        }
    }
    let n_regions = region_on_frame.len();

    Analysis {
        grid: g,
        band,
        atoms,
        joins,
        segments,
        centers,
        saddle_cells,
        junction_atoms,
        comp,
        n_comp,
        region,
        n_regions,
        region_on_frame,
    }
}

impl Analysis {
    /// Regions that reach the grid frame; the others are bounded.
    pub fn frame_regions(&self) -> Vec<usize> {
        (0..self.n_regions).filter(|&r| self.region_on_frame[r]).collect()
    }

    /// Regions touching an atom: the neighbours of a mid node, the two ends
    /// of a crossing edge.
    pub fn atom_regions(&self, a: usize) -> Vec<u32> {
        let side = self.grid.side();
        let n = self.grid.n;
        let mut out = Vec::with_capacity(4);
        let mut push = |i: usize, j: usize| {
            let r = self.region[j * side + i];
            if r != NONE && !out.contains(&r) {
                out.push(r);
            }
        };
        match self.atoms[a].kind {
            AtomKind::Node(i, j) => {
                if i > 0 {
                    push(i - 1, j);
                }
                if i < n {
                    push(i + 1, j);
                }
                if j > 0 {
                    push(i, j - 1);
                }
                if j < n {
                    push(i, j + 1);
                }
            }
            AtomKind::HEdge(i, j) => {
                push(i, j);
                push(i + 1, j);
            }
            AtomKind::VEdge(i, j) => {
                push(i, j);
                push(i, j + 1);
            }
        }
        out
    }

    /// Classes of the atoms accepted by `keep`, joined only through joins
    /// with both ends kept. Returns one label per atom (`usize::MAX` when
    /// not kept) and the number of classes.
    pub fn restricted_classes(&self, keep: &[bool]) -> (Vec<usize>, usize) {
        let mut d = Dsu::new(self.atoms.len());
        for &(a, b) in &self.joins {
            if keep[a as usize] && keep[b as usize] {
                d.union(a as usize, b as usize);
            }
        }
        let mut label = vec![usize::MAX; self.atoms.len()];
        let mut root_label = vec![usize::MAX; self.atoms.len()];
        let mut next = 0;
        for a in 0..self.atoms.len() {
            if !keep[a] {
                continue;
            }
            let r = d.find(a);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            label[a] = root_label[r];
        }
        (label, next)
    }

    /// Position of a segment-graph node.
    pub fn node_pos(&self, id: u32) -> Point {
        let id = id as usize;
        if id < self.atoms.len() {
            self.atoms[id].pos
        } else {
            self.centers[id - self.atoms.len()]
        }
    }
}
