//! Orbit clouds for phase portraits, written as CSV or as a scatter SVG.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{PlanarMap, PlanePoint};

pub const DEFAULT_ESCAPE_RADIUS: f64 = 10.0;
pub const DEFAULT_ITERATIONS: usize = 2000;

/// Seeds as an explicit list or as a rectangular grid with inclusive endpoints.
#[derive(Debug, Clone, PartialEq)]
pub enum Seeds {
    List(Vec<PlanePoint>),
    Grid { x: (f64, f64), y: (f64, f64), nx: usize, ny: usize },
}

impl Seeds {
    /// Seed points, row by row for a grid (`y` outer, `x` inner).
    pub fn points(&self) -> Vec<PlanePoint> {
        match self {
            Seeds::List(v) => v.clone(),
            Seeds::Grid { x, y, nx, ny } => {
                let t = |(a, b): (f64, f64), n: usize, i: usize| {
                    if n <= 1 {
                        0.5 * (a + b)
                    } else {
                        a + (b - a) * i as f64 / (n - 1) as f64
                    }
                };
                (0..*ny).flat_map(|j| (0..*nx).map(move |i| PlanePoint::new(t(*x, *nx, i), t(*y, *ny, j)))).collect()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct PortraitSpec<M> {
    pub map: M,
    pub seeds: Seeds,
    pub iterations: usize,
    pub escape_radius: f64,
}

impl<M> PortraitSpec<M> {
    pub fn new(map: M, seeds: Seeds) -> Self {
        Self { map, seeds, iterations: DEFAULT_ITERATIONS, escape_radius: DEFAULT_ESCAPE_RADIUS }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::domain("iterations must be at least 1"));
        }
        if !(self.escape_radius > 0.0) {
            return Err(Error::domain("escape radius must be positive"));
        }
        Ok(())
    }
}

/// Iterates of one seed. `points[i]` is the `(i+1)`-th iterate; an escaping iterate is not stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedOrbit {
    pub seed: PlanePoint,
    pub points: Vec<PlanePoint>,
    pub escaped: bool,
}

/// Per-seed orbits, in seed order.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Portrait {
    pub orbits: Vec<SeedOrbit>,
}

fn orbit_of<M: PlanarMap + ?Sized>(map: &M, seed: PlanePoint, n: usize, radius: f64) -> SeedOrbit {
    let mut points = Vec::with_capacity(n);
    let mut p = seed;
    let mut escaped = false;
    for _ in 0..n {
        p = map.apply(p);
        if !p.is_finite() || p.norm() > radius {
            escaped = true;
            break;
        }
        points.push(p);
    }
    SeedOrbit { seed, points, escaped }
}

pub fn sample<M: PlanarMap + Sync>(spec: &PortraitSpec<M>) -> Result<Portrait> {
    spec.validate()?;
    let orbits = spec
        .seeds
        .points()
        .par_iter()
        .map(|&s| orbit_of(&spec.map, s, spec.iterations, spec.escape_radius))
        .collect();
    Ok(Portrait { orbits })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

/// Writes the CSV form to any writer: `seed_id,iter,x,y,escaped`, one row per stored iterate.
/// `escaped` repeats the seed's flag on every row.
pub fn write_csv<W: std::io::Write>(portrait: &Portrait, w: W) -> std::result::Result<(), csv::Error> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["seed_id", "iter", "x", "y", "escaped"])?;
    for (id, o) in portrait.orbits.iter().enumerate() {
        for (i, p) in o.points.iter().enumerate() {
            wr.write_record([
                id.to_string(),
                (i + 1).to_string(),
                format!("{:.16e}", p.x),
                format!("{:.16e}", p.y),
                o.escaped.to_string(),
            ])?;
        }
    }
    wr.flush()?;
    Ok(())
}

pub fn export_csv(portrait: &Portrait, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    write_csv(portrait, file).map_err(|source| Error::Csv { path: path.to_path_buf(), source })
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// Scatter SVG with one group per seed and a view box fitted to the points.
pub fn render_svg(portrait: &Portrait) -> String {
    let all = portrait.orbits.iter().flat_map(|o| o.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = 0.02 * span;
    let (vx, vy, vw, vh) = (x0 - pad, -(y1 + pad), x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let dot = 0.002 * span;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vx:.9} {vy:.9} {vw:.9} {vh:.9}" width="800" height="{:.0}">"#,
        800.0 * vh / vw
    );
    let _ = writeln!(s, r#"<rect x="{vx:.9}" y="{vy:.9}" width="{vw:.9}" height="{vh:.9}" fill="white"/>"#);
    for (id, o) in portrait.orbits.iter().enumerate() {
        let _ = writeln!(s, r#"<g id="seed{id}" fill="{}">"#, PALETTE[id % PALETTE.len()]);
        for p in &o.points {
            // y is flipped so that it grows upwards
            let _ = writeln!(s, r#"<circle cx="{:.9}" cy="{:.9}" r="{dot:.9}"/>"#, p.x, -p.y);
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

pub fn export_svg(portrait: &Portrait, path: &Path) -> Result<()> {
    let mut f = File::create(path).map_err(io_err(path))?;
    f.write_all(render_svg(portrait).as_bytes()).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{CubicHenonMap, Sign};
    use crate::orbit::fixed_points;

    #[test]
    fn elliptic_fixed_point_stays() {
        let m = CubicHenonMap::new(Sign::Plus, 0.0, -0.5);
        let fp = fixed_points(&m).into_iter().find(|o| o.stability == crate::orbit::Stability::Elliptic).unwrap();
        let spec = PortraitSpec { map: m, seeds: Seeds::List(vec![fp.points[0]]), iterations: 100, escape_radius: 10.0 };
        let port = sample(&spec).unwrap();
        assert_eq!(port.orbits[0].points.len(), 100);
        assert!(port.orbits[0].points.iter().all(|p| p.dist(&fp.points[0]) < 1e-14));
    }

    #[test]
    fn far_seed_escapes() {
        let m = CubicHenonMap::new(Sign::Plus, 0.7, -0.5);
        let spec = PortraitSpec::new(m, Seeds::List(vec![PlanePoint::new(30.0, 40.0)]));
        let port = sample(&spec).unwrap();
        assert!(port.orbits[0].escaped);
        assert!(port.orbits[0].points.len() < 5);
    }

    #[test]
    fn csv_rows() {
        let m = CubicHenonMap::new(Sign::Plus, 0.0, 0.0);
        let spec = PortraitSpec {
            map: m,
            seeds: Seeds::List(vec![PlanePoint::new(0.1, 0.0), PlanePoint::new(0.0, 0.1)]),
            iterations: 1,
            escape_radius: 10.0,
        };
        let mut buf = Vec::new();
        write_csv(&sample(&spec).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        let mut empty = Vec::new();
        write_csv(&Portrait::default(), &mut empty).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap(), "seed_id,iter,x,y,escaped\n");
    }

    #[test]
    fn invalid_specs() {
        let m = CubicHenonMap::new(Sign::Plus, 0.0, 0.0);
        let mut spec = PortraitSpec::new(m, Seeds::List(vec![]));
        spec.iterations = 0;
        assert!(sample(&spec).is_err());
        spec.iterations = 1;
        spec.escape_radius = 0.0;
        assert!(sample(&spec).is_err());
    }

    #[test]
    fn grid_order() {
        let g = Seeds::Grid { x: (0.0, 1.0), y: (0.0, 2.0), nx: 2, ny: 3 };
        let p = g.points();
        assert_eq!(p.len(), 6);
        assert_eq!(p[1], PlanePoint::new(1.0, 0.0));
        assert_eq!(p[5], PlanePoint::new(1.0, 2.0));
    }
}
