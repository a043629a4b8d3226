use rayon::prelude::*;

use super::PeriodicOrbit;
use crate::maps::{iterate, iterate_with_jacobian, Mat2, PlanarMap, PlanePoint};

pub const MAX_PERIOD: usize = 64;
const MAX_ITER: usize = 50;
const RESIDUAL_TOL: f64 = 1e-12;
const ESCAPE: f64 = 1e6;

/// Newton iteration on `F(p) = f^n(p) - p`.
///
/// Returns the orbit through the converged point, reported at its minimal period. A singular
/// Newton matrix gets one Levenberg-damped step; a second one ends the search.
pub fn find_periodic_orbit<M: PlanarMap + ?Sized>(map: &M, period: usize, seed: PlanePoint) -> Option<PeriodicOrbit> {
    let p = newton_point(map, period, seed)?;
    let d = minimal_period(map, p, period);
    Some(PeriodicOrbit::from_start(map, p, d))
}

pub(crate) fn newton_point<M: PlanarMap + ?Sized>(map: &M, period: usize, seed: PlanePoint) -> Option<PlanePoint> {
    if period == 0 || period > MAX_PERIOD || !seed.is_finite() {
        return None;
    }
    let mut p = seed;
    let mut damped_used = false;
    for _ in 0..=MAX_ITER {
        let (q, jac) = iterate_with_jacobian(map, p, period);
        let f = q - p;
        if !f.is_finite() {
            return None;
        }
        let fnorm = f.norm();
        if fnorm < RESIDUAL_TOL {
            return Some(p);
        }
        let a = jac - Mat2::identity();
        let det = a.determinant();
        let scale = a.norm_squared().max(f64::MIN_POSITIVE);
        let step = if det.abs() > 1e-14 * scale {
            let inv = Mat2::new(a[(1, 1)], -a[(0, 1)], -a[(1, 0)], a[(0, 0)]) / det;
            inv * nalgebra::Vector2::new(-f.x, -f.y)
        } else {
            if damped_used {
                return None;
            }
            damped_used = true;
            let reg = 1e-6 * scale + 1e-12;
            let lhs = a.transpose() * a + Mat2::identity() * reg;
            let rhs = -(a.transpose() * nalgebra::Vector2::new(f.x, f.y));
            lhs.try_inverse()? * rhs
        };
        p = PlanePoint::new(p.x + step[0], p.y + step[1]);
        if !p.is_finite() || p.norm() > ESCAPE {
            return None;
        }
    }
    None
}

/// Smallest divisor `d` of `period` with `f^d(p) = p` to a tolerance scaled by `|p|`.
pub fn minimal_period<M: PlanarMap + ?Sized>(map: &M, p: PlanePoint, period: usize) -> usize {
    for d in 1..period {
        if period.is_multiple_of(d) && iterate(map, p, d).dist(&p) <= 1e-9 * (1.0 + p.norm()) {
            return d;
        }
    }
    period
}

/// Rectangle of Newton seeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedBox {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl SeedBox {
    pub fn square(radius: f64, n: usize) -> Self {
        Self { x: (-radius, radius), y: (-radius, radius), nx: n, ny: n }
    }

    pub fn seeds(&self) -> Vec<PlanePoint> {
        let coord = |(a, b): (f64, f64), n: usize, i: usize| {
            if n <= 1 {
                0.5 * (a + b)
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        };
        (0..self.nx)
            .flat_map(|i| (0..self.ny).map(move |j| (i, j)))
            .map(|(i, j)| PlanePoint::new(coord(self.x, self.nx, i), coord(self.y, self.ny, j)))
            .collect()
    }
}

/// Distinct orbits of minimal period exactly `period` reached by Newton from a seed grid,
/// sorted by their anchor point.
pub fn find_orbits_in_box<M: PlanarMap + Sync + ?Sized>(map: &M, period: usize, seeds: &SeedBox) -> Vec<PeriodicOrbit> {
    let found: Vec<PeriodicOrbit> = seeds
        .seeds()
        .par_iter()
        .filter_map(|&s| find_periodic_orbit(map, period, s))
        .filter(|o| o.period() == period)
        .collect();
    let mut out: Vec<PeriodicOrbit> = Vec::new();
    for o in found {
        if !out.iter().any(|u| u.same_as(&o, 1e-8 * (1.0 + o.anchor().norm()))) {
            out.push(o);
        }
    }
    out.sort_by(|a, b| {
        let (p, q) = (a.anchor(), b.anchor());
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{CubicHenonMap, Sign};
    use approx::assert_abs_diff_eq;

    #[test]
    fn converges_to_origin() {
        let m = CubicHenonMap::new(Sign::Plus, 0.0, 0.0);
        let o = find_periodic_orbit(&m, 1, PlanePoint::new(0.1, 0.1)).unwrap();
        assert_eq!(o.period(), 1);
        assert_abs_diff_eq!(o.points[0].x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(o.points[0].y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn parabolic_two_orbit_on_l2() {
        let m = CubicHenonMap::new(Sign::Plus, 0.0, -4.0);
        let orbits = find_orbits_in_box(&m, 2, &SeedBox::square(4.0, 41));
        assert!(!orbits.is_empty());
        assert!(orbits.iter().any(|o| (o.trace - 2.0).abs() < 1e-6), "{orbits:?}");
        for o in &orbits {
            assert!(o.residual(&m) < 1e-10);
        }
    }

    #[test]
    fn elliptic_four_orbit_from_diagonal_seeds() {
        let m = CubicHenonMap::new(Sign::Plus, 0.7, -0.5);
        let found = (0..=200)
            .map(|i| -2.0 + 4.0 * i as f64 / 200.0)
            .filter_map(|t| find_periodic_orbit(&m, 4, PlanePoint::new(t, t)))
            .find(|o| o.period() == 4 && o.stability == super::super::Stability::Elliptic && o.symmetric);
        let o = found.expect("symmetric elliptic 4-orbit");
        let on_line = o.points.iter().filter(|p| (p.x - p.y).abs() < 1e-9).count();
        assert_eq!(on_line, 2);
    }

    #[test]
    fn minimal_period_reported() {
        let m = CubicHenonMap::new(Sign::Plus, 0.0, 0.5);
        let o = find_periodic_orbit(&m, 2, PlanePoint::new(0.05, -0.02)).unwrap();
        assert_eq!(o.period(), 1);
    }

    #[test]
    fn escape_is_not_found() {
        let m = CubicHenonMap::new(Sign::Plus, 0.0, 0.0);
        assert!(newton_point(&m, 3, PlanePoint::new(1e5, -1e5)).is_none());
    }
}
