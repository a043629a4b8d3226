use rayon::prelude::*;
use serde::Serialize;

use super::{minimal_period, PeriodicOrbit};
use crate::error::{Error, Result};
use crate::maps::{iterate, iterate_with_jacobian, CubicHenonMap, PlanePoint};
use crate::poly::bisect;

const GRID_POINTS: usize = 10_000;

/// A line of fixed points of a reversor of the conservative cubic Hénon map.
///
/// `Diagonal` is `x = y`, the fixed line of `L(x, y) = (y, x)`. `FixFL` is the fixed line
/// `2y = M1 + M2 x + nu x^3` of the second reversor `f o L`. A reversible orbit of even period
/// has either two points on the diagonal or two points on the second line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SymmetryLine {
    Diagonal,
    FixFL,
}

impl SymmetryLine {
    pub const ALL: [SymmetryLine; 2] = [SymmetryLine::Diagonal, SymmetryLine::FixFL];

    pub fn point(self, map: &CubicHenonMap, t: f64) -> PlanePoint {
        match self {
            SymmetryLine::Diagonal => PlanePoint::new(t, t),
            SymmetryLine::FixFL => PlanePoint::new(t, 0.5 * cubic_part(map, t)),
        }
    }

    fn tangent(self, map: &CubicHenonMap, t: f64) -> [f64; 2] {
        match self {
            SymmetryLine::Diagonal => [1.0, 1.0],
            SymmetryLine::FixFL => [1.0, 0.5 * cubic_slope(map, t)],
        }
    }

    /// Signed distance-like defect of `q` from the line and its gradient.
    fn defect(self, map: &CubicHenonMap, q: PlanePoint) -> (f64, [f64; 2]) {
        match self {
            SymmetryLine::Diagonal => (q.x - q.y, [1.0, -1.0]),
            SymmetryLine::FixFL => (q.y - 0.5 * cubic_part(map, q.x), [-0.5 * cubic_slope(map, q.x), 1.0]),
        }
    }

    /// Parameter of `p` along the line, if `p` lies on it within `tol`.
    pub fn coordinate(self, map: &CubicHenonMap, p: PlanePoint, tol: f64) -> Option<f64> {
        let (r, _) = self.defect(map, p);
        (r.abs() <= tol * (1.0 + p.norm().powi(3))).then_some(p.x)
    }

    pub fn name(self) -> &'static str {
        match self {
            SymmetryLine::Diagonal => "diagonal",
            SymmetryLine::FixFL => "fix-fL",
        }
    }
}

fn cubic_part(map: &CubicHenonMap, x: f64) -> f64 {
    map.m1() + map.m2() * x + map.nu().value() * x * x * x
}

fn cubic_slope(map: &CubicHenonMap, x: f64) -> f64 {
    map.m2() + 3.0 * map.nu().value() * x * x
}

/// Defect of `f^half(line(t))` from the line, with its derivative in `t`.
pub(crate) fn line_defect(map: &CubicHenonMap, line: SymmetryLine, half: usize, t: f64) -> (f64, f64) {
    let p = line.point(map, t);
    let v = line.tangent(map, t);
    let (q, jac) = iterate_with_jacobian(map, p, half);
    let dq = [jac[(0, 0)] * v[0] + jac[(0, 1)] * v[1], jac[(1, 0)] * v[0] + jac[(1, 1)] * v[1]];
    let (r, g) = line.defect(map, q);
    (r, g[0] * dq[0] + g[1] * dq[1])
}

/// One-dimensional Newton iteration for a reversible orbit through `line(t)`.
pub(crate) fn newton_on_line(map: &CubicHenonMap, line: SymmetryLine, half: usize, t0: f64) -> Option<f64> {
    let mut t = t0;
    for _ in 0..50 {
        let (r, dr) = line_defect(map, line, half, t);
        if !r.is_finite() || !dr.is_finite() {
            return None;
        }
        if r == 0.0 {
            return Some(t);
        }
        if dr == 0.0 {
            return None;
        }
        let dt = r / dr;
        t -= dt;
        if !t.is_finite() || t.abs() > 1e6 {
            return None;
        }
        if dt.abs() <= 1e-14 * (1.0 + t.abs()) {
            return Some(t);
        }
    }
    None
}

/// Closure defect `|f^n(p) - p|` relative to the size of `p`.
pub(crate) fn closes(map: &CubicHenonMap, p: PlanePoint, period: usize) -> bool {
    iterate(map, p, period).dist(&p) <= 1e-10 * (1.0 + p.norm())
}

fn check_reversible(map: &CubicHenonMap, period: usize) -> Result<()> {
    if !map.is_conservative() {
        return Err(Error::domain("reversible orbits need Jacobian 1"));
    }
    if period == 0 || !period.is_multiple_of(2) {
        return Err(Error::domain(format!("symmetric orbit search needs an even period, got {period}")));
    }
    Ok(())
}

/// Reversible orbits of period dividing `period` with points on `line`, from sign changes of the
/// half-period defect over a uniform grid in `interval`, refined by bisection and Newton.
pub fn find_reversible_orbits(
    map: &CubicHenonMap,
    period: usize,
    interval: (f64, f64),
    line: SymmetryLine,
) -> Result<Vec<PeriodicOrbit>> {
    check_reversible(map, period)?;
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::domain(format!("invalid search interval [{a}, {b}]")));
    }
    let half = period / 2;
    let g = |t: f64| line_defect(map, line, half, t).0;
    let ts: Vec<f64> = (0..GRID_POINTS).map(|i| a + (b - a) * i as f64 / (GRID_POINTS - 1) as f64).collect();
    let gs: Vec<f64> = ts.par_iter().map(|&t| g(t)).collect();

    let roots: Vec<f64> = (0..GRID_POINTS - 1)
        .into_par_iter()
        .filter_map(|i| {
            let (g0, g1) = (gs[i], gs[i + 1]);
            if !(g0.is_finite() && g1.is_finite()) {
                return None;
            }
            if g0 == 0.0 {
                return Some(ts[i]);
            }
            if g0.signum() == g1.signum() || g1 == 0.0 {
                return None;
            }
            let t = bisect(g, ts[i], ts[i + 1], g0);
            // Newton may sharpen the bisection result but must stay in the bracket.
            let polished = newton_on_line(map, line, half, t)
                .filter(|&u| u >= ts[i] && u <= ts[i + 1] && g(u).abs() <= g(t).abs());
            Some(polished.unwrap_or(t))
        })
        .collect();

    let mut out: Vec<PeriodicOrbit> = Vec::new();
    for t in roots {
        let p = line.point(map, t);
        if !closes(map, p, period) {
            continue;
        }
        let d = minimal_period(map, p, period);
        let mut orbit = PeriodicOrbit::from_start(map, p, d);
        orbit.reversible = true;
        if line == SymmetryLine::Diagonal {
            orbit.symmetric = true;
        }
        if !out.iter().any(|o| o.same_as(&orbit, 1e-8 * (1.0 + p.norm()))) {
            out.push(orbit);
        }
    }
    Ok(out)
}

/// Orbits with two points on the line `x = y`; see [`find_reversible_orbits`].
pub fn find_symmetric_orbits(map: &CubicHenonMap, period: usize, interval: (f64, f64)) -> Result<Vec<PeriodicOrbit>> {
    find_reversible_orbits(map, period, interval, SymmetryLine::Diagonal)
}
