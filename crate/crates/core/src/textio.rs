//! Small text formats used on the command line.

use crate::error::ParseError;
use crate::geom::Point;

/// `"x,y"` with optional surrounding spaces.
pub fn parse_point(s: &str) -> Result<Point, ParseError> {
    let bad = || ParseError::Point(s.to_string());
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    let p = Point::new(x, y);
    if !p.is_finite() {
        return Err(bad());
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

/// `"LO:HI:STEPS"` with `LO < HI` and `STEPS >= 1`.
pub fn parse_t_range(s: &str) -> Result<TRange, ParseError> {
    let bad = |reason: &str| ParseError::Range { input: s.to_string(), reason: reason.to_string() };
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad("expected LO:HI:STEPS"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad("LO is not a number"))?;
    let hi: f64 = parts[1].parse().map_err(|_| bad("HI is not a number"))?;
    let steps: usize = parts[2].parse().map_err(|_| bad("STEPS is not a count"))?;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(bad("need finite LO < HI"));
    }
    if steps == 0 {
        return Err(bad("STEPS must be positive"));
    }
    Ok(TRange { lo, hi, steps })
}
