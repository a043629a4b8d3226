//! Periodic orbits of planar maps: classification, Newton solving, reversible
//! (symmetric) orbits and one-parameter bifurcation scans.

mod newton;
mod scan;
mod symmetric;

pub use newton::{find_orbits_in_box, find_periodic_orbit, minimal_period, SeedBox};
pub use scan::{
    scan_bifurcations, scan_map_family, BifurcationEvent, EventKind, ScanConfig, ScanReport, Tracking,
};
pub use symmetric::{find_reversible_orbits, find_symmetric_orbits, SymmetryLine};

use serde::Serialize;

use crate::maps::{iterate_with_jacobian, CubicHenonMap, Mat2, PlanarMap, PlanePoint};
use crate::poly::depressed_cubic_roots;

/// Half-width of the band around a parabolic multiplier in which an orbit is called parabolic.
pub const PARABOLIC_TOL: f64 = 1e-6;

/// Distance from the line `x = y` below which an orbit point counts as lying on it.
pub const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Stability {
    SaddlePlus,
    SaddleMinus,
    Elliptic,
    ParabolicPlus,
    ParabolicMinus,
}

impl Stability {
    /// Classifies a monodromy matrix through its characteristic polynomial at `+1` and `-1`.
    ///
    /// For unit determinant this is the usual trace rule: `|tr| < 2` elliptic, `tr > 2` saddle
    /// plus, `tr < -2` saddle minus, `tr = +-2` parabolic within [`PARABOLIC_TOL`].
    pub fn classify(trace: f64, det: f64) -> Stability {
        let at_plus = 1.0 - trace + det;
        let at_minus = 1.0 + trace + det;
        if at_plus.abs() < PARABOLIC_TOL {
            Stability::ParabolicPlus
        } else if at_minus.abs() < PARABOLIC_TOL {
            Stability::ParabolicMinus
        } else if trace * trace < 4.0 * det {
            Stability::Elliptic
        } else if trace > 0.0 {
            Stability::SaddlePlus
        } else {
            Stability::SaddleMinus
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stability::SaddlePlus => "saddle+",
            Stability::SaddleMinus => "saddle-",
            Stability::Elliptic => "elliptic",
            Stability::ParabolicPlus => "parabolic+",
            Stability::ParabolicMinus => "parabolic-",
        }
    }
}

/// A periodic orbit with its monodromy data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicOrbit {
    pub points: Vec<PlanePoint>,
    pub trace: f64,
    pub determinant: f64,
    pub stability: Stability,
    /// `phi` in `(0, pi)` with `2 cos(phi) = trace / sqrt(det)`; present iff elliptic.
    pub rotation_angle: Option<f64>,
    /// Some point lies on the line `x = y`.
    pub symmetric: bool,
    /// The point set is invariant under `(x, y) -> (y, x)`.
    pub reversible: bool,
}

impl PeriodicOrbit {
    /// Builds the orbit generated by `start` under `map`, taking `period` points.
    pub fn from_start<M: PlanarMap + ?Sized>(map: &M, start: PlanePoint, period: usize) -> Self {
        let mut points = Vec::with_capacity(period);
        let mut p = start;
        for _ in 0..period {
            points.push(p);
            p = map.apply(p);
        }
        let (_, monodromy) = iterate_with_jacobian(map, start, period);
        Self::with_monodromy(points, monodromy)
    }

    fn with_monodromy(points: Vec<PlanePoint>, monodromy: Mat2) -> Self {
        let trace = monodromy.trace();
        let determinant = monodromy.determinant();
        let stability = Stability::classify(trace, determinant);
        let rotation_angle = (stability == Stability::Elliptic)
            .then(|| (trace / (2.0 * determinant.sqrt())).clamp(-1.0, 1.0).acos());
        let symmetric = points.iter().any(|p| on_diagonal(*p));
        let reversible = points.iter().all(|p| {
            let r = PlanePoint::new(p.y, p.x);
            points.iter().any(|q| q.dist(&r) <= 1e-8 * (1.0 + q.norm()))
        });
        Self { points, trace, determinant, stability, rotation_angle, symmetric, reversible }
    }

    pub fn period(&self) -> usize {
        self.points.len()
    }

    /// Largest link residual `|f(p_i) - p_{i+1}|` around the orbit.
    pub fn residual<M: PlanarMap + ?Sized>(&self, map: &M) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| map.apply(self.points[i]).dist(&self.points[(i + 1) % n]))
            .fold(0.0, f64::max)
    }

    /// True when both orbits visit the same points (up to cyclic order) within `tol`.
    pub fn same_as(&self, other: &PeriodicOrbit, tol: f64) -> bool {
        self.period() == other.period()
            && self.points.iter().all(|p| other.points.iter().any(|q| q.dist(p) <= tol))
    }

    /// Orbit point with the smallest `x`, then `y`; a canonical representative for sorting.
    pub fn anchor(&self) -> PlanePoint {
        *self
            .points
            .iter()
            .min_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)))
            .expect("orbit has at least one point")
    }
}

fn on_diagonal(p: PlanePoint) -> bool {
    (p.x - p.y).abs() <= SYMMETRY_TOL * (1.0 + p.x.abs().max(p.y.abs()))
}

/// All fixed points of `map`, sorted by their coordinate. A double root of the fixed-point cubic
/// is reported once and classified parabolic.
pub fn fixed_points(map: &CubicHenonMap) -> Vec<PeriodicOrbit> {
    let nu = map.nu().value();
    let p = (map.m2() - 1.0 - map.jacobian()) / nu;
    let q = map.m1() / nu;
    depressed_cubic_roots(p, q)
        .into_iter()
        .map(|r| {
            let pt = PlanePoint::new(r.value, r.value);
            let mut orbit = PeriodicOrbit::from_start(map, pt, 1);
            if r.repeated {
                orbit.stability = Stability::ParabolicPlus;
                orbit.rotation_angle = None;
            }
            orbit
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::Sign;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn fixed_points_at_fold() {
        let m = CubicHenonMap::new(Sign::Plus, 2.0, -1.0);
        let fps = fixed_points(&m);
        assert_eq!(fps.len(), 2);
        assert_abs_diff_eq!(fps[0].points[0].y, -2.0, epsilon = 1e-14);
        assert_eq!(fps[0].stability, Stability::SaddlePlus);
        assert_abs_diff_eq!(fps[0].trace, 11.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fps[1].points[0].y, 1.0, epsilon = 1e-14);
        assert_eq!(fps[1].stability, Stability::ParabolicPlus);
        assert_abs_diff_eq!(fps[1].trace, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn fixed_points_at_origin() {
        let m = CubicHenonMap::new(Sign::Plus, 0.0, 0.0);
        let fps = fixed_points(&m);
        let ys: Vec<f64> = fps.iter().map(|o| o.points[0].y).collect();
        assert_abs_diff_eq!(ys[0], -2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(ys[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ys[2], 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(fps[1].stability, Stability::Elliptic);
        assert_abs_diff_eq!(fps[1].rotation_angle.unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(fps[0].stability, Stability::SaddlePlus);
        assert_abs_diff_eq!(fps[2].trace, 6.0, epsilon = 1e-14);
    }

    #[test]
    fn two_elliptic_fixed_points() {
        let m = CubicHenonMap::new(Sign::Minus, 0.0, 3.0);
        let fps = fixed_points(&m);
        assert_eq!(fps.len(), 3);
        for i in [0, 2] {
            assert_eq!(fps[i].stability, Stability::Elliptic);
            assert_abs_diff_eq!(fps[i].rotation_angle.unwrap(), FRAC_PI_2, epsilon = 1e-12);
        }
        assert_eq!(fps[1].stability, Stability::SaddlePlus);
        assert_abs_diff_eq!(fps[1].trace, 3.0, epsilon = 1e-15);
    }

    #[test]
    fn classification_bands() {
        assert_eq!(Stability::classify(2.0 + 1e-7, 1.0), Stability::ParabolicPlus);
        assert_eq!(Stability::classify(-2.0 - 1e-7, 1.0), Stability::ParabolicMinus);
        assert_eq!(Stability::classify(2.1, 1.0), Stability::SaddlePlus);
        assert_eq!(Stability::classify(-2.1, 1.0), Stability::SaddleMinus);
        assert_eq!(Stability::classify(0.3, 1.0), Stability::Elliptic);
    }

    #[test]
    fn dissipative_fixed_points_solve_map() {
        let m = CubicHenonMap::with_jacobian(Sign::Minus, 0.1, 1.7, 0.5).unwrap();
        for o in fixed_points(&m) {
            assert!(o.residual(&m) < 1e-13);
            assert_abs_diff_eq!(o.determinant, 0.5, epsilon = 1e-14);
        }
    }
}
