use clap::Args;
use quotient_levels::distfield::{Metric, QuotientMap};
use quotient_levels::geom::Point;
use quotient_levels::levelset::{shipped_windows, Window};
use quotient_levels::scene::{builtin_scene, parse_scene, Scene};
use quotient_levels::textio::{parse_point, parse_t_range, TRange};
use serde::Deserialize;
use std::path::PathBuf;

/// Flags shared by every command.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Built-in scene name
    #[arg(long, global = true, conflicts_with = "scene")]
    pub builtin: Option<String>,
    /// Scene file (JSON)
    #[arg(long, global = true)]
    pub scene: Option<PathBuf>,
    /// Truncation of the zigzag scene
    #[arg(long = "N", global = true)]
    pub n: Option<i64>,
    /// l1 or l2
    #[arg(long, global = true)]
    pub metric: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// LO:HI:STEPS
    #[arg(long = "t-range", global = true, allow_hyphen_values = true)]
    pub t_range: Option<String>,
    /// Window half-width R
    #[arg(long, global = true)]
    pub window: Option<f64>,
    /// Grid pitch h
    #[arg(long, global = true)]
    pub pitch: Option<f64>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Point `x,y`; repeatable
    #[arg(long = "point", global = true, allow_hyphen_values = true)]
    pub points: Vec<String>,
    /// Bracket width for exceptional levels
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// JSON file of defaults, overridden by flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Defaults file: the same keys as the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    builtin: Option<String>,
    scene: Option<PathBuf>,
    #[serde(rename = "N")]
    n: Option<i64>,
    metric: Option<String>,
    t: Option<f64>,
    t_range: Option<String>,
    window: Option<f64>,
    pitch: Option<f64>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
    #[serde(default)]
    points: Vec<String>,
    tol: Option<f64>,
}

/// An input problem; exits with status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

pub enum Source {
    Builtin(String),
    File(PathBuf),
}

pub struct RunConfig {
    pub source: Option<Source>,
    pub n: Option<i64>,
    pub metric: Metric,
    pub t: Option<f64>,
    pub t_range: Option<TRange>,
    pub window: Option<f64>,
    pub pitch: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub points: Vec<Point>,
    pub tol: f64,
}

impl RunConfig {
    pub fn resolve(flags: &Common) -> Result<RunConfig, InputError> {
        let file = match &flags.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| InputError(format!("{}: {e}", p.display())))?
            }
            None => FileConfig::default(),
        };
        let source = match (&flags.builtin, &flags.scene) {
            (Some(b), _) => Some(Source::Builtin(b.clone())),
            (None, Some(s)) => Some(Source::File(s.clone())),
            (None, None) => match (file.builtin, file.scene) {
                (Some(_), Some(_)) => return Err(InputError("config sets both builtin and scene".into())),
                (Some(b), None) => Some(Source::Builtin(b)),
                (None, Some(s)) => Some(Source::File(s)),
                (None, None) => None,
            },
        };
        let metric: Metric = flags.metric.clone().or(file.metric).as_deref().unwrap_or("l2").parse()?;
        let t_range = flags.t_range.clone().or(file.t_range).map(|s| parse_t_range(&s)).transpose()?;
        let raw_points = if flags.points.is_empty() { file.points } else { flags.points.clone() };
        let points = raw_points.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>, _>>()?;
        let tol = flags.tol.or(file.tol).unwrap_or(1e-3);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(InputError(format!("--tol must be positive, got {tol}")));
        }
        if let Some(0) = flags.threads.or(file.threads) {
            return Err(InputError("--threads must be positive".into()));
        }
        Ok(RunConfig {
            source,
            n: flags.n.or(file.n),
            metric,
            t: flags.t.or(file.t),
            t_range,
            window: flags.window.or(file.window),
            pitch: flags.pitch.or(file.pitch),
            out: flags.out.clone().or(file.out),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            threads: flags.threads.or(file.threads),
            points,
            tol,
        })
    }

    pub fn builtin_name(&self) -> Option<&str> {
        match &self.source {
            Some(Source::Builtin(b)) => Some(b),
            _ => None,
        }
    }

    pub fn scene(&self) -> Result<Scene, InputError> {
        match &self.source {
            None => Err(InputError("need --builtin NAME or --scene FILE".into())),
            Some(Source::Builtin(name)) => Ok(builtin_scene(name, self.n)?),
            Some(Source::File(p)) => {
                if self.n.is_some() {
                    return Err(InputError("--N only applies to the zigzag built-in".into()));
                }
                let text = std::fs::read_to_string(p).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
                Ok(parse_scene(&text)?)
            }
        }
    }

    pub fn map(&self, scene: Scene) -> QuotientMap {
        QuotientMap::new(scene, self.metric)
    }

    /// Window pair: flags first, then the scene's shipped windows, then a
    /// window sized to the scene's vertices.
    pub fn windows(&self, scene: &Scene) -> Result<Vec<Window>, InputError> {
        let shipped = self.builtin_name().and_then(shipped_windows);
        let w = match (self.window, self.pitch, &shipped) {
            (None, None, Some(ws)) => return Ok(ws.clone()),
            (r, h, shipped) => {
                let base = shipped.as_ref().map(|ws| ws[0]);
                let r = r.or(base.map(|w| w.half_width)).unwrap_or_else(|| (2.0 * scene.vertex_radius()).max(4.0).ceil());
                let h = h.or(base.map(|w| w.pitch)).unwrap_or(r / 256.0);
                Window::new(r, h)
            }
        };
        w.grid()?;
        w.doubled().grid()?;
        Ok(vec![w, w.doubled()])
    }

    pub fn user_window(&self) -> bool {
        self.window.is_some() && self.pitch.is_some()
    }
}
