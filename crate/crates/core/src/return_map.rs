//! A concrete unfolding of a cubic homoclinic tangency: the exact Moser-form saddle map `T0`,
//! a symplectic cubic global map `T1`, the first-return maps `T1 o T0^k` and their rescaling to
//! the cubic Hénon family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{CubicHenonMap, Mat2, PlanarMap, PlanePoint, Sign};

/// `x' = lambda x M(xy)`, `y' = y / (lambda M(xy))` with `M(s) = 1 + beta1 s`.
///
/// The product `xy` is invariant, so `k` steps have the closed form
/// `x_k = lambda^k x M^k`, `y_k = lambda^-k y M^-k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalSaddleMap {
    lambda: f64,
    beta1: f64,
}

impl LocalSaddleMap {
    pub fn new(lambda: f64, beta1: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda != 0.0 && lambda.abs() < 1.0) {
            return Err(Error::domain(format!("lambda must satisfy 0 < |lambda| < 1, got {lambda}")));
        }
        if !beta1.is_finite() {
            return Err(Error::domain("beta1 must be finite"));
        }
        Ok(Self { lambda, beta1 })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    fn multiplier(&self, s: f64) -> Result<f64> {
        let m = 1.0 + self.beta1 * s;
        if m > 0.0 {
            Ok(m)
        } else {
            Err(Error::domain(format!("1 + beta1*xy = {m} is not positive at xy = {s}")))
        }
    }

    /// `M(s)^k` and `M(s)^k - 1`, the latter without cancellation for small `beta1 s`.
    fn power(&self, s: f64, k: u32) -> Result<(f64, f64)> {
        self.multiplier(s)?;
        let log = k as f64 * (self.beta1 * s).ln_1p();
        Ok((log.exp(), log.exp_m1()))
    }

    /// Exact `k`-step image.
    pub fn iterate(&self, p: PlanePoint, k: u32) -> Result<PlanePoint> {
        let (mk, _) = self.power(p.x * p.y, k)?;
        let lk = self.lambda.powi(k as i32);
        Ok(PlanePoint::new(lk * p.x * mk, p.y / (lk * mk)))
    }

    /// Differential of the exact `k`-step map.
    pub fn iterate_differential(&self, p: PlanePoint, k: u32) -> Result<Mat2> {
        let s = p.x * p.y;
        let m = self.multiplier(s)?;
        let (mk, _) = self.power(s, k)?;
        let lk = self.lambda.powi(k as i32);
        let kb = k as f64 * self.beta1;
        Ok(Mat2::new(
            lk * mk / m * (m + kb * s),
            lk * mk / m * kb * p.x * p.x,
            -kb * p.y * p.y / (lk * mk * m),
            (m - kb * s) / (lk * mk * m),
        ))
    }
}

impl PlanarMap for LocalSaddleMap {
    /// Points where `M(xy) <= 0` map to NaN.
    fn apply(&self, p: PlanePoint) -> PlanePoint {
        self.iterate(p, 1).unwrap_or(PlanePoint::new(f64::NAN, f64::NAN))
    }

    fn differential(&self, p: PlanePoint) -> Mat2 {
        self.iterate_differential(p, 1).unwrap_or(Mat2::from_element(f64::NAN))
    }
}

/// Local saddle map plus global map
/// `x' = x+ + a x + b (y - y-)`, `y' = mu1 + c x + mu2 (y - y-) + d (y - y-)^3`, `bc = -1`.
///
/// `a`, `f11` and `f12` are carried for the coordinate shift of the rescaling but are always zero:
/// with nonzero values the global map is no longer symplectic in this polynomial form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelFamily {
    pub local: LocalSaddleMap,
    pub mu1: f64,
    pub mu2: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    f11: f64,
    f12: f64,
    x_plus: f64,
    y_minus: f64,
}

impl ModelFamily {
    /// The symplectic model with `a = f11 = f12 = 0` and `c = -1/b`.
    #[allow(clippy::too_many_arguments)]
    pub fn simplified(lambda: f64, beta1: f64, mu1: f64, mu2: f64, b: f64, d: f64, x_plus: f64, y_minus: f64) -> Result<Self> {
        let local = LocalSaddleMap::new(lambda, beta1)?;
        if !(b.is_finite() && b != 0.0) {
            return Err(Error::domain(format!("b must be finite and nonzero, got {b}")));
        }
        if !(d.is_finite() && d != 0.0) {
            return Err(Error::domain(format!("d must be finite and nonzero, got {d}")));
        }
        if !(x_plus.is_finite() && x_plus > 0.0) {
            return Err(Error::domain(format!("x_plus must be positive, got {x_plus}")));
        }
        if !(y_minus.is_finite() && y_minus > 0.0) {
            return Err(Error::domain(format!("y_minus must be positive, got {y_minus}")));
        }
        if !(mu1.is_finite() && mu2.is_finite()) {
            return Err(Error::domain("mu1 and mu2 must be finite"));
        }
        Ok(Self { local, mu1, mu2, a: 0.0, b, c: -1.0 / b, d, f11: 0.0, f12: 0.0, x_plus, y_minus })
    }

    pub fn lambda(&self) -> f64 {
        self.local.lambda
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn f11(&self) -> f64 {
        self.f11
    }
    pub fn f12(&self) -> f64 {
        self.f12
    }
    pub fn x_plus(&self) -> f64 {
        self.x_plus
    }
    pub fn y_minus(&self) -> f64 {
        self.y_minus
    }

    pub fn with_mu(&self, mu1: f64, mu2: f64) -> Self {
        Self { mu1, mu2, ..*self }
    }

    /// The model whose `k`-th rescaled parameters are `(m1, m2)`.
    pub fn with_rescaled(&self, k: u32, m1: f64, m2: f64) -> Self {
        let (mu1, mu2) = unfold_params(self, k, m1, m2);
        self.with_mu(mu1, mu2)
    }

    /// The global map `T1`.
    pub fn global(&self) -> GlobalMap {
        GlobalMap { model: *self }
    }

    /// `nu = sign(d lambda^k)`.
    pub fn nu(&self, k: u32) -> Sign {
        let lk = self.lambda().powi(k as i32);
        if self.d * lk > 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Length scale `|lambda|^(k/2) / sqrt|d|` of the rescaling.
    fn scale(&self, k: u32) -> f64 {
        self.lambda().abs().powf(0.5 * k as f64) / self.d.abs().sqrt()
    }

    /// `(mu1 - lambda^k (y- - c x+)) / lambda^k`, the shifted first parameter in units of `lambda^k`.
    fn shifted_mu1(&self, k: u32) -> f64 {
        let lk = self.lambda().powi(k as i32);
        (self.mu1 - lk * (self.y_minus - self.c * self.x_plus)) / lk
    }
}

/// The global map `T1` of a model as a planar map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalMap {
    model: ModelFamily,
}

impl PlanarMap for GlobalMap {
    fn apply(&self, p: PlanePoint) -> PlanePoint {
        let m = &self.model;
        let v = p.y - m.y_minus;
        PlanePoint::new(m.x_plus + m.a * p.x + m.b * v, m.mu1 + m.c * p.x + m.mu2 * v + m.d * v * v * v)
    }

    fn differential(&self, p: PlanePoint) -> Mat2 {
        let m = &self.model;
        let v = p.y - m.y_minus;
        Mat2::new(m.a, m.b, m.c, m.mu2 + 3.0 * m.d * v * v)
    }
}

/// Exact `k`-step image under the local saddle map.
pub fn local_iterate(local: &LocalSaddleMap, p: PlanePoint, k: u32) -> Result<PlanePoint> {
    local.iterate(p, k)
}

/// `T1(T0^k(p))`.
pub fn first_return(model: &ModelFamily, k: u32, p: PlanePoint) -> Result<PlanePoint> {
    let q = model.local.iterate(p, k)?;
    Ok(model.global().apply(q))
}

/// The first-return map `T1 o T0^k` as a planar map; points outside the local map's domain go to NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstReturn {
    pub model: ModelFamily,
    pub k: u32,
}

impl PlanarMap for FirstReturn {
    fn apply(&self, p: PlanePoint) -> PlanePoint {
        first_return(&self.model, self.k, p).unwrap_or(PlanePoint::new(f64::NAN, f64::NAN))
    }

    fn differential(&self, p: PlanePoint) -> Mat2 {
        match (self.model.local.iterate(p, self.k), self.model.local.iterate_differential(p, self.k)) {
            (Ok(q), Ok(d0)) => self.model.global().differential(q) * d0,
            _ => Mat2::from_element(f64::NAN),
        }
    }
}

/// Leading-order rescaled parameters of the `k`-th return map:
/// `M1 = sqrt|d| |lambda|^(-k/2) lambda^-k (mu1 - lambda^k (y- - c x+))`,
/// `M2 = lambda^-k mu2 + f11 x+`, `nu = sign(d lambda^k)`.
pub fn rescale_params(model: &ModelFamily, k: u32) -> (f64, f64, Sign) {
    let lk = model.lambda().powi(k as i32);
    let m1 = model.shifted_mu1(k) / model.scale(k);
    let m2 = model.mu2 / lk + model.f11 * model.x_plus;
    (m1, m2, model.nu(k))
}

/// Inverse of [`rescale_params`]: the unfolding parameters `(mu1, mu2)` at which the `k`-th
/// return map has rescaled parameters `(m1, m2)`.
pub fn unfold_params(model: &ModelFamily, k: u32, m1: f64, m2: f64) -> (f64, f64) {
    let lk = model.lambda().powi(k as i32);
    let mu2 = lk * (m2 - model.f11 * model.x_plus);
    let mu1 = lk * (model.y_minus - model.c * model.x_plus) + model.scale(k) * lk * m1;
    (mu1, mu2)
}

/// The `k`-th return map in the rescaled coordinates `(X, Y)`, where
/// `x = x+ + alpha1 + b s X` and `y = lambda^k (y- + alpha2 + s Y)` with `s = |lambda|^(k/2)/sqrt|d|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaledReturn {
    pub k: u32,
    pub m1: f64,
    pub m2: f64,
    pub nu: Sign,
    model: ModelFamily,
    scale: f64,
    alpha: (f64, f64),
}

impl RescaledReturn {
    /// The cubic Hénon map with the same rescaled parameters; equal to `self` when `beta1 = 0`.
    pub fn henon_limit(&self) -> CubicHenonMap {
        CubicHenonMap::new(self.nu, self.m1, self.m2)
    }

    /// Return map in rescaled coordinates.
    ///
    /// Evaluated through deviations from the homoclinic point (`u = x - x+`, `w = y/lambda^k - y-`)
    /// so that no large quantity is subtracted from another; this keeps the result exact to
    /// rounding for `beta1 = 0` even when `lambda^-k` is large.
    pub fn eval(&self, p: PlanePoint) -> Result<PlanePoint> {
        let m = &self.model;
        let k = self.k;
        let lk = m.lambda().powi(k as i32);
        let s = self.scale;
        let u = self.alpha.0 + m.b * s * p.x;
        let w = self.alpha.1 + s * p.y;
        let x0 = m.x_plus + u;
        let y0 = lk * (m.y_minus + w);
        let (mk, mk1) = m.local.power(x0 * y0, k)?;

        let xk = lk * x0 * mk;
        let v = w / mk - m.y_minus * (mk1 / mk);
        let u_new = m.a * xk + m.b * v;
        let w_new = m.shifted_mu1(k) + m.c * (u * mk + m.x_plus * mk1) + (m.mu2 * v + m.d * v * v * v) / lk;
        Ok(PlanePoint::new((u_new - self.alpha.0) / (m.b * s), (w_new - self.alpha.1) / s))
    }

    /// Largest coordinate difference from [`Self::henon_limit`] over an `n x n` grid on `|X|, |Y| <= half_width`.
    pub fn sup_error(&self, half_width: f64, n: usize) -> Result<f64> {
        let h = self.henon_limit();
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let t = |i: usize| if n == 1 { 0.0 } else { -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64 };
                let p = PlanePoint::new(t(i), t(j));
                let a = self.eval(p)?;
                let b = h.apply(p);
                err = err.max((a.x - b.x).abs()).max((a.y - b.y).abs());
            }
        }
        Ok(err)
    }
}

impl PlanarMap for RescaledReturn {
    fn apply(&self, p: PlanePoint) -> PlanePoint {
        self.eval(p).unwrap_or(PlanePoint::new(f64::NAN, f64::NAN))
    }

    fn differential(&self, p: PlanePoint) -> Mat2 {
        let h = 1e-6 * (1.0 + p.norm());
        let dx = (self.apply(PlanePoint::new(p.x + h, p.y)) - self.apply(PlanePoint::new(p.x - h, p.y))).scaled(0.5 / h);
        let dy = (self.apply(PlanePoint::new(p.x, p.y + h)) - self.apply(PlanePoint::new(p.x, p.y - h))).scaled(0.5 / h);
        Mat2::new(dx.x, dy.x, dx.y, dy.y)
    }
}

/// The `k`-th return map conjugated to rescaled coordinates.
pub fn conjugated_return(model: &ModelFamily, k: u32) -> Result<RescaledReturn> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let (m1, m2, nu) = rescale_params(model, k);
    let lk = model.lambda().powi(k as i32);
    let scale = model.scale(k);
    // Leading-order shifts; both vanish when a = f12 = 0.
    let alpha1 = -model.a * lk * model.x_plus;
    let alpha2 = -(model.f12 / (3.0 * model.d)) * lk * model.x_plus;
    Ok(RescaledReturn { k, m1, m2, nu, model: *model, scale, alpha: (alpha1, alpha2) })
}

/// Values of `mu1` at which the unstable-manifold image
/// `l_u: y = mu1 + (mu2/b)(x - x+) + (d/b^3)(x - x+)^3` is quadratically tangent to `y = 0`.
///
/// Solved by Newton on the slope condition, then read off from the curve value; the cusp
/// `mu2 = 0` returns the single value `0` (a cubic tangency). Empty when `-mu2/(3d) < 0`.
pub fn h0_detect(model: &ModelFamily) -> Vec<f64> {
    let (b, d, mu2) = (model.b, model.d, model.mu2);
    if -mu2 / (3.0 * d) < 0.0 {
        return Vec::new();
    }
    if mu2 == 0.0 {
        return vec![0.0];
    }
    let slope = |u: f64| mu2 / b + 3.0 * d / (b * b * b) * u * u;
    let curvature = |u: f64| 6.0 * d / (b * b * b) * u;
    let seed = b.abs() * (1.0 + (mu2 / d).abs().sqrt());
    let mut out = Vec::new();
    for sgn in [-1.0, 1.0] {
        let mut u = sgn * seed;
        for _ in 0..100 {
            let du = slope(u) / curvature(u);
            u -= du;
            if du.abs() <= 1e-16 * u.abs() {
                break;
            }
        }
        // l_u at the tangency with mu1 removed; the tangency needs l_u = 0.
        let rest = (mu2 / b) * u + (d / (b * b * b)) * u * u * u;
        out.push(-rest);
    }
    out.sort_by(f64::total_cmp);
    out
}
