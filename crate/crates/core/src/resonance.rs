//! The 1:4 resonance: normal-form coefficients on the resonance curves and the equilibria of the
//! two truncated Hamiltonian flows that describe the nearby bifurcations.

use nalgebra::Complex;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{Mat2, PlanePoint, Sign};

/// Tolerance for `B03 = 0` and `A = 1`.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Default search radius for flow equilibria.
pub const DEFAULT_FLOW_RADIUS: f64 = 1.5;

type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Degeneracy {
    None,
    B03Zero,
    AEqualsOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResonantType {
    EllipticType,
    SaddleEightSeparatrices,
    Degenerate,
}

/// Normal-form coefficients of a fixed point with multipliers `+-i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceData {
    pub b1: f64,
    pub b03: f64,
    /// `|B1| / |B03|`, infinite when `B03 = 0`.
    pub a_ratio: f64,
    pub degeneracy: Degeneracy,
}

/// `8 B1 = 3 - 3 M2`, `8 B03 = 1 + 3 M2` for `nu = +1`; both negated for `nu = -1`.
pub fn resonance_coefficients(nu: Sign, m2: f64) -> ResonanceData {
    let s = nu.value();
    let b1 = s * (3.0 - 3.0 * m2) / 8.0;
    let b03 = s * (1.0 + 3.0 * m2) / 8.0;
    let a_ratio = if b03 == 0.0 { f64::INFINITY } else { b1.abs() / b03.abs() };
    let degeneracy = if b03.abs() < DEGENERACY_TOL {
        Degeneracy::B03Zero
    } else if (b1.abs() - b03.abs()).abs() < DEGENERACY_TOL * b03.abs().max(1.0) {
        Degeneracy::AEqualsOne
    } else {
        Degeneracy::None
    };
    ResonanceData { b1, b03, a_ratio, degeneracy }
}

/// Exact coefficients for a rational `M2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactResonanceData {
    pub b1: Rational64,
    pub b03: Rational64,
    /// `None` when `B03 = 0`.
    pub a_ratio: Option<Rational64>,
    pub degeneracy: Degeneracy,
}

pub fn resonance_coefficients_exact(nu: Sign, m2: Rational64) -> ExactResonanceData {
    let s = Rational64::from_integer(nu.as_i32() as i64);
    let eight = Rational64::from_integer(8);
    let three = Rational64::from_integer(3);
    let one = Rational64::from_integer(1);
    let b1 = s * (three - three * m2) / eight;
    let b03 = s * (one + three * m2) / eight;
    let zero = Rational64::from_integer(0);
    let abs = |r: Rational64| if r < zero { -r } else { r };
    let a_ratio = (b03 != zero).then(|| abs(b1) / abs(b03));
    let degeneracy = match a_ratio {
        None => Degeneracy::B03Zero,
        Some(a) if a == one => Degeneracy::AEqualsOne,
        _ => Degeneracy::None,
    };
    ExactResonanceData { b1, b03, a_ratio, degeneracy }
}

/// Type of the resonant fixed point: `A > 1` elliptic, `A < 1` a saddle with eight separatrices.
pub fn classify_resonant_point(nu: Sign, m2: f64) -> ResonantType {
    let data = resonance_coefficients(nu, m2);
    match data.degeneracy {
        Degeneracy::B03Zero | Degeneracy::AEqualsOne => ResonantType::Degenerate,
        Degeneracy::None if data.a_ratio > 1.0 => ResonantType::EllipticType,
        Degeneracy::None => ResonantType::SaddleEightSeparatrices,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FlowVariant {
    /// `-4i (beta z + B1 z|z|^2 + mu z*^3 + A z^5 + B2 |z|^4 z + C |z|^2 z*^3)` with `5A = C`.
    Eq11,
    /// `i beta z + i(1+mu) z|z|^2 + i z*^3 + i B2 |z|^4 z + i C |z|^2 z*^3`.
    Eq12,
}

/// A truncated pi/2-equivariant flow normal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowNF {
    variant: FlowVariant,
    pub beta: f64,
    pub mu: f64,
    b1: f64,
    b2: f64,
    c_hat: f64,
}

/// One monomial `coef z^p conj(z)^q`.
#[derive(Debug, Clone, Copy)]
struct Term {
    coef: C64,
    p: i32,
    q: i32,
}

impl FlowNF {
    /// The rotation-invariant family near a non-degenerate 1:4 resonance. The `z^5` coefficient
    /// is `c_hat / 5`, which makes the field divergence free.
    pub fn eq11(beta: f64, mu: f64, b1: f64, b2: f64, c_hat: f64) -> Result<Self> {
        for (name, v) in [("beta", beta), ("mu", mu), ("B1", b1), ("B2", b2), ("C", c_hat)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite")));
            }
        }
        Ok(Self { variant: FlowVariant::Eq11, beta, mu, b1, b2, c_hat })
    }

    /// The two-parameter family at `A = 1`. Requires `B2 != C`.
    pub fn eq12(beta: f64, mu: f64, b2: f64, c: f64) -> Result<Self> {
        for (name, v) in [("beta", beta), ("mu", mu), ("B2", b2), ("C", c)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite")));
            }
        }
        if b2 == c {
            return Err(Error::domain("the A = 1 family needs B2 != C"));
        }
        Ok(Self { variant: FlowVariant::Eq12, beta, mu, b1: 0.0, b2, c_hat: c })
    }

    pub fn variant(&self) -> FlowVariant {
        self.variant
    }
    pub fn b1(&self) -> f64 {
        self.b1
    }
    pub fn b2(&self) -> f64 {
        self.b2
    }
    /// Coefficient of `|z|^2 z*^3`.
    pub fn c_hat(&self) -> f64 {
        self.c_hat
    }
    /// Coefficient of `z^5` (zero for the `A = 1` family).
    pub fn a_hat(&self) -> f64 {
        match self.variant {
            FlowVariant::Eq11 => self.c_hat / 5.0,
            FlowVariant::Eq12 => 0.0,
        }
    }

    pub fn with_params(&self, beta: f64, mu: f64) -> Self {
        Self { beta, mu, ..*self }
    }

    fn terms(&self) -> Vec<Term> {
        let re = |x: f64| C64::new(x, 0.0);
        match self.variant {
            FlowVariant::Eq11 => {
                let k = C64::new(0.0, -4.0);
                [
                    (self.beta, 1, 0),
                    (self.b1, 2, 1),
                    (self.mu, 0, 3),
                    (self.a_hat(), 5, 0),
                    (self.b2, 3, 2),
                    (self.c_hat, 1, 4),
                ]
                .into_iter()
                .map(|(c, p, q)| Term { coef: k * re(c), p, q })
                .collect()
            }
            FlowVariant::Eq12 => {
                let i = C64::new(0.0, 1.0);
                [(self.beta, 1, 0), (1.0 + self.mu, 2, 1), (1.0, 0, 3), (self.b2, 3, 2), (self.c_hat, 1, 4)]
                    .into_iter()
                    .map(|(c, p, q)| Term { coef: i * re(c), p, q })
                    .collect()
            }
        }
    }

    /// Cubic part `a z|z|^2 + b z*^3` of the field inside the common prefactor, as `(a, b)`.
    fn cubic_part(&self) -> (f64, f64) {
        match self.variant {
            FlowVariant::Eq11 => (self.b1, self.mu),
            FlowVariant::Eq12 => (1.0 + self.mu, 1.0),
        }
    }
}

fn monomial(z: C64, p: i32, q: i32) -> C64 {
    if p < 0 || q < 0 {
        return C64::new(0.0, 0.0);
    }
    z.powi(p) * z.conj().powi(q)
}

fn to_c(p: PlanePoint) -> C64 {
    C64::new(p.x, p.y)
}

/// Value of the truncated field at `p`, identified with `x + iy`.
pub fn flow_field(nf: &FlowNF, p: PlanePoint) -> PlanePoint {
    let z = to_c(p);
    let v: C64 = nf.terms().iter().map(|t| t.coef * monomial(z, t.p, t.q)).sum();
    PlanePoint::new(v.re, v.im)
}

/// Real Jacobian of the truncated field, built from the Wirtinger derivatives.
pub fn flow_jacobian(nf: &FlowNF, p: PlanePoint) -> Mat2 {
    let z = to_c(p);
    let mut a = C64::new(0.0, 0.0);
    let mut b = C64::new(0.0, 0.0);
    for t in nf.terms() {
        a += t.coef * (t.p as f64) * monomial(z, t.p - 1, t.q);
        b += t.coef * (t.q as f64) * monomial(z, t.p, t.q - 1);
    }
    let s = a + b;
    let d = a - b;
    Mat2::new(s.re, -d.im, s.im, d.re)
}

/// Divergence of the truncated field at `p`.
pub fn flow_divergence(nf: &FlowNF, p: PlanePoint) -> f64 {
    flow_jacobian(nf, p).trace()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquilibriumKind {
    Center,
    Saddle,
    Parabolic,
}

/// The fixed-point lines of the four reflections commuting with rotation by pi/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FlowSymmetryLine {
    /// `x = y`
    Diagonal,
    /// `x = -y`
    AntiDiagonal,
    /// `x = 0`
    VerticalAxis,
    /// `y = 0`
    HorizontalAxis,
}

impl FlowSymmetryLine {
    pub const ALL: [FlowSymmetryLine; 4] = [
        FlowSymmetryLine::Diagonal,
        FlowSymmetryLine::AntiDiagonal,
        FlowSymmetryLine::VerticalAxis,
        FlowSymmetryLine::HorizontalAxis,
    ];

    pub fn distance(self, p: PlanePoint) -> f64 {
        match self {
            FlowSymmetryLine::Diagonal => (p.x - p.y).abs() / 2f64.sqrt(),
            FlowSymmetryLine::AntiDiagonal => (p.x + p.y).abs() / 2f64.sqrt(),
            FlowSymmetryLine::VerticalAxis => p.x.abs(),
            FlowSymmetryLine::HorizontalAxis => p.y.abs(),
        }
    }

    /// The reflection whose fixed set is this line.
    pub fn reflect(self, p: PlanePoint) -> PlanePoint {
        match self {
            FlowSymmetryLine::Diagonal => PlanePoint::new(p.y, p.x),
            FlowSymmetryLine::AntiDiagonal => PlanePoint::new(-p.y, -p.x),
            FlowSymmetryLine::VerticalAxis => PlanePoint::new(-p.x, p.y),
            FlowSymmetryLine::HorizontalAxis => PlanePoint::new(p.x, -p.y),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowEquilibrium {
    pub position: PlanePoint,
    pub kind: EquilibriumKind,
    /// `None` for the origin, which lies on all four lines, and for points off every line.
    pub on_symmetry_line: Option<FlowSymmetryLine>,
}

fn classify_equilibrium(jac: &Mat2) -> EquilibriumKind {
    let tr = jac.trace();
    let det = jac.determinant();
    let disc = tr * tr - 4.0 * det;
    let largest = if disc >= 0.0 { (tr.abs() + disc.sqrt()) / 2.0 } else { det.abs().sqrt() };
    if largest <= 1e-6 {
        EquilibriumKind::Parabolic
    } else if det < 0.0 {
        EquilibriumKind::Saddle
    } else {
        EquilibriumKind::Center
    }
}

fn newton_equilibrium(nf: &FlowNF, seed: PlanePoint) -> Option<PlanePoint> {
    let mut p = seed;
    for _ in 0..100 {
        let f = flow_field(nf, p);
        if f.x == 0.0 && f.y == 0.0 {
            return Some(p);
        }
        let j = flow_jacobian(nf, p);
        let det = j.determinant();
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (j[(1, 1)] * f.x - j[(0, 1)] * f.y) / det;
        let dy = (-j[(1, 0)] * f.x + j[(0, 0)] * f.y) / det;
        p = PlanePoint::new(p.x - dx, p.y - dy);
        if !p.is_finite() || p.norm() > 1e3 {
            return None;
        }
        if dx.hypot(dy) <= 1e-15 * (1.0 + p.norm()) {
            break;
        }
    }
    (flow_field(nf, p).norm() < 1e-12).then_some(p)
}

fn make_equilibrium(nf: &FlowNF, position: PlanePoint) -> FlowEquilibrium {
    let on_symmetry_line = if position.norm() == 0.0 {
        None
    } else {
        FlowSymmetryLine::ALL.into_iter().find(|l| l.distance(position) < 1e-9)
    };
    FlowEquilibrium { position, kind: classify_equilibrium(&flow_jacobian(nf, position)), on_symmetry_line }
}

/// All equilibria with `|z| <= radius`, found by Newton from a 64 x 64 grid and deduplicated at
/// distance `1e-8`. The origin is always an equilibrium and is listed first; the rest are sorted
/// by angle then modulus.
pub fn flow_equilibria(nf: &FlowNF, radius: f64) -> Result<Vec<FlowEquilibrium>> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::domain("search radius must be positive"));
    }
    const N: usize = 64;
    let seeds: Vec<PlanePoint> = (0..N * N)
        .map(|k| {
            let (i, j) = (k / N, k % N);
            let t = |i: usize| -radius + 2.0 * radius * i as f64 / (N - 1) as f64;
            PlanePoint::new(t(i), t(j))
        })
        .collect();
    let mut found: Vec<PlanePoint> = seeds
        .par_iter()
        .filter_map(|&s| newton_equilibrium(nf, s))
        .filter(|p| p.norm() <= radius && p.norm() > 1e-8)
        .collect();
    found.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let mut unique: Vec<PlanePoint> = Vec::new();
    for p in found {
        if !unique.iter().any(|u| u.dist(&p) < 1e-8) {
            unique.push(p);
        }
    }
    unique.sort_by(|a, b| {
        let ang = |p: &PlanePoint| p.y.atan2(p.x).rem_euclid(std::f64::consts::TAU);
        ang(a).total_cmp(&ang(b)).then(a.norm().total_cmp(&b.norm()))
    });
    let mut out = vec![make_equilibrium(nf, PlanePoint::new(0.0, 0.0))];
    out.extend(unique.into_iter().map(|p| make_equilibrium(nf, p)));
    Ok(out)
}

/// Phase portrait type of the trivial equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OriginKind {
    /// Linear part is a rotation (`beta != 0`).
    NondegenerateCenter,
    /// Zero linear part, cubic Hamiltonian definite.
    DegenerateCenter,
    /// Zero linear part, cubic Hamiltonian with eight zero directions.
    SaddleEightSeparatrices,
    /// Neither of the above can be decided from the cubic terms.
    Degenerate,
}

/// Classifies the origin. With `beta = 0` the cubic part `a z|z|^2 + b z*^3` is the Hamiltonian
/// flow of `r^4 (a + b cos 4 theta) / 4`, definite iff `|a| > |b|`.
pub fn origin_kind(nf: &FlowNF) -> OriginKind {
    if nf.beta != 0.0 {
        return OriginKind::NondegenerateCenter;
    }
    let (a, b) = nf.cubic_part();
    let gap = a.abs() - b.abs();
    if gap.abs() <= DEGENERACY_TOL * a.abs().max(b.abs()).max(1.0) {
        OriginKind::Degenerate
    } else if gap > 0.0 {
        OriginKind::DegenerateCenter
    } else {
        OriginKind::SaddleEightSeparatrices
    }
}

/// Values of `mu` in `[mu_lo, mu_hi]` where four parabolic equilibria appear in the `A = 1`
/// family at the given `beta`.
///
/// On the rays `z^4 = s |z|^4`, `s = +-1`, equilibria solve
/// `h_s(rho) = beta + (1 + mu + s) rho + (B2 + s C) rho^2 = 0` with `rho = |z|^2`. A parabolic
/// equilibrium is a positive double root, so `(1 + mu + s)^2 = 4 beta (B2 + s C)`, solved in
/// closed form.
pub fn flow_l3_locator(nf: &FlowNF, beta: f64, mu_range: (f64, f64)) -> Result<Vec<f64>> {
    if nf.variant != FlowVariant::Eq12 {
        return Err(Error::domain("the parabolic-equilibrium locator applies to the A = 1 family"));
    }
    let (lo, hi) = mu_range;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::domain("mu range must be finite and ordered"));
    }
    let mut out = Vec::new();
    for s in [1.0, -1.0] {
        let q = nf.b2 + s * nf.c_hat;
        let prod = beta * q;
        if q == 0.0 || prod < 0.0 {
            continue;
        }
        let r = 2.0 * prod.sqrt();
        for mu in [-1.0 - s - r, -1.0 - s + r] {
            let rho = -(1.0 + mu + s) / (2.0 * q);
            if rho > 0.0 && mu >= lo && mu <= hi && !out.iter().any(|m: &f64| (m - mu).abs() < 1e-14) {
                out.push(mu);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}
