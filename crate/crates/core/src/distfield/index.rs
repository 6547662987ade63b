//! Uniform bucket grid over the finite edges of a scene.

use crate::scene::{EdgeKind, Scene};

#[derive(Debug, Clone)]
pub(crate) struct GridIndex {
    x0: f64,
    y0: f64,
    cell: f64,
    nx: i64,
    ny: i64,
    buckets: Vec<Vec<u32>>,
    pub rays: Vec<u32>,
}

impl GridIndex {
    /// Returns `None` when the scene has no finite edges worth bucketing.
    pub fn build(scene: &Scene) -> Option<GridIndex> {
        let mut lengths: Vec<f64> = scene
            .edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Segment)
            .map(|e| e.length())
            .collect();
        if lengths.len() < 8 {
            return None;
        }
        lengths.sort_by(f64::total_cmp);
        let cell = lengths[lengths.len() / 2];
        if !(cell > 0.0 && cell.is_finite()) {
            return None;
        }
        let (mut xmin, mut ymin, mut xmax, mut ymax) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for e in scene.edges.iter().filter(|e| e.kind == EdgeKind::Segment) {
            for p in [e.a, e.b] {
                xmin = xmin.min(p.x);
                ymin = ymin.min(p.y);
                xmax = xmax.max(p.x);
                ymax = ymax.max(p.y);
            }
        }
        let nx = ((xmax - xmin) / cell).floor() as i64 + 1;
        let ny = ((ymax - ymin) / cell).floor() as i64 + 1;
        if nx * ny > 4_000_000 {
            return None;
        }
        let mut idx = GridIndex {
            x0: xmin,
            y0: ymin,
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); (nx * ny) as usize],
            rays: Vec::new(),
        };
        for (id, e) in scene.edges.iter().enumerate() {
            if e.kind == EdgeKind::Ray {
                idx.rays.push(id as u32);
                continue;
            }
            let (i0, j0) = idx.cell_of(e.a.x.min(e.b.x), e.a.y.min(e.b.y));
            let (i1, j1) = idx.cell_of(e.a.x.max(e.b.x), e.a.y.max(e.b.y));
            for j in j0.max(0)..=j1.min(ny - 1) {
                for i in i0.max(0)..=i1.min(nx - 1) {
                    idx.buckets[(j * nx + i) as usize].push(id as u32);
                }
            }
        }
        Some(idx)
    }

    fn cell_of(&self, x: f64, y: f64) -> (i64, i64) {
        let i = ((x - self.x0) / self.cell).floor();
        let j = ((y - self.y0) / self.cell).floor();
        (i.clamp(-1e15, 1e15) as i64, j.clamp(-1e15, 1e15) as i64)
    }

    /// Visits buckets ring by ring around `(x, y)`. `visit` receives the edge
    /// ids of a ring and returns the best distance found so far; the walk
    /// stops once every unvisited bucket is provably farther than that.
    pub fn walk(&self, x: f64, y: f64, mut visit: impl FnMut(&[u32]) -> f64) {
        let (ci, cj) = self.cell_of(x, y);
        let dx = if ci < 0 { -ci } else if ci >= self.nx { ci - self.nx + 1 } else { 0 };
        let dy = if cj < 0 { -cj } else if cj >= self.ny { cj - self.ny + 1 } else { 0 };
        let k0 = dx.max(dy);
        let far = (ci.abs().max((ci - self.nx).abs())).max(cj.abs().max((cj - self.ny).abs()));
        let mut best = f64::INFINITY;
        let mut k = k0;
        loop {
            // Buckets in ring k + 1 and beyond are at least k cells away.
            if k >= 1 && best < (k - 1) as f64 * self.cell {
                return;
            }
            if k > far {
                return;
            }
            for j in (cj - k).max(0)..=(cj + k).min(self.ny - 1) {
                let edge_row = j == cj - k || j == cj + k;
                if edge_row {
                    for i in (ci - k).max(0)..=(ci + k).min(self.nx - 1) {
                        best = visit(&self.buckets[(j * self.nx + i) as usize]);
                    }
                } else {
                    for i in [ci - k, ci + k] {
                        if i >= 0 && i < self.nx {
                            best = visit(&self.buckets[(j * self.nx + i) as usize]);
                        }
                    }
                }
            }
            k += 1;
        }
    }
}
