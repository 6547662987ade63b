//! Signed distance fields over piecewise-linear planar scenes, raster
//! extraction of their level sets, and checks of the topological structure
//! those level sets must have when the field is a quotient map.

pub mod distfield;
pub mod dsu;
pub mod error;
pub mod geom;
pub mod invariants;
pub mod levelset;
pub mod scene;
pub mod textio;
