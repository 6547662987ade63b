//! Sampling grids and cached field values.

use crate::distfield::QuotientMap;
use crate::error::LevelSetError;
use crate::geom::Point;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// The square `[-R, R]^2` sampled at pitch `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub half_width: f64,
    pub pitch: f64,
}

impl Window {
    pub fn new(half_width: f64, pitch: f64) -> Window {
        Window { half_width, pitch }
    }

    pub fn grid(&self) -> Result<Grid, LevelSetError> {
        Grid::square(Point::new(0.0, 0.0), self.half_width, self.pitch)
    }

    /// The same window with twice the half-width.
    pub fn doubled(&self) -> Window {
        Window { half_width: 2.0 * self.half_width, pitch: self.pitch }
    }
}

/// Nodes `(x0 + i h, y0 + j h)` for `0 <= i, j <= n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub n: usize,
}

impl Grid {
    /// Grid over the square of half-width `r` around `c`; `2r/h` must be a
    /// whole number of cells.
    pub fn square(c: Point, r: f64, h: f64) -> Result<Grid, LevelSetError> {
        let bad = LevelSetError::BadWindow { half_width: r, pitch: h };
        if !(r > 0.0 && h > 0.0 && r.is_finite() && h.is_finite()) || r / h > 1e7 {
            return Err(bad);
        }
        let cells = 2.0 * r / h;
        let n = cells.round();
        if (cells - n).abs() > 1e-9 * n.max(1.0) || n < 4.0 || n > 20_000.0 {
            return Err(bad);
        }
        Ok(Grid { x0: c.x - r, y0: c.y - r, h, n: n as usize })
    }

    pub fn side(&self) -> usize {
        self.n + 1
    }

    pub fn node_count(&self) -> usize {
        self.side() * self.side()
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.side() + i
    }

    pub fn node(&self, i: usize, j: usize) -> Point {
        Point::new(self.x0 + i as f64 * self.h, self.y0 + j as f64 * self.h)
    }

    pub fn center(&self) -> Point {
        self.node(self.n / 2, self.n / 2)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.n as f64 * self.h
    }

    fn key(&self) -> (u64, u64, u64, usize) {
        (self.x0.to_bits(), self.y0.to_bits(), self.h.to_bits(), self.n)
    }
}

/// Field values at every node of a grid, row-major.
#[derive(Debug)]
pub struct SampledField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl SampledField {
    pub fn sample(map: &QuotientMap, grid: Grid) -> SampledField {
        let side = grid.side();
        let values: Vec<f64> = (0..side)
            .into_par_iter()
            .flat_map_iter(|j| (0..side).map(move |i| map.eval(grid.node(i, j))))
            .collect();
        SampledField { grid, values }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }
}

/// Field samples shared across the levels analysed for one map.
pub struct FieldCache<'a> {
    map: &'a QuotientMap,
    fields: Mutex<HashMap<(u64, u64, u64, usize), Arc<SampledField>>>,
}

impl<'a> FieldCache<'a> {
    pub fn new(map: &'a QuotientMap) -> FieldCache<'a> {
        FieldCache { map, fields: Mutex::new(HashMap::new()) }
    }

    pub fn map(&self) -> &'a QuotientMap {
        self.map
    }

    pub fn field(&self, grid: Grid) -> Arc<SampledField> {
        if let Some(f) = self.fields.lock().expect("field cache poisoned").get(&grid.key()) {
            return f.clone();
        }
        let f = Arc::new(SampledField::sample(self.map, grid));
        self.fields.lock().expect("field cache poisoned").entry(grid.key()).or_insert(f).clone()
    }
}
