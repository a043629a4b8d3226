//! Closed-form bifurcation curves of the cubic Hénon maps in the `(M1, M2)` plane and their
//! images in the unfolding plane `(mu1, mu2)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::Sign;
use crate::poly::Poly;
use crate::return_map::ModelFamily;

/// Identifies one analytic curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CurveId {
    /// Fixed point with double multiplier `+1`.
    LPlus { nu: Sign },
    /// Fixed point with double multiplier `-1`.
    LMinus { nu: Sign },
    /// 2-periodic orbit with double multiplier `+1`, `nu = +1`.
    L2Plus,
    /// The two branches `i = 1, 2` of 2-periodic folds for `nu = -1`.
    L2PlusI { i: u8 },
    /// The two branches `i = 1, 2` of 2-periodic orbits with double multiplier `-1`.
    L2MinusI { nu: Sign, i: u8 },
    /// Fixed point with multipliers `exp(+-i phi)`.
    LPhi { nu: Sign, phi: f64 },
    /// Fixed point with multipliers `+-i` (the 1:4 resonance).
    LPiHalf { nu: Sign },
    /// Elliptic fixed point with vanishing first Birkhoff coefficient.
    NonTwist { nu: Sign },
    /// Parabolic bifurcations of reversible 4-periodic orbits of the `nu = -1` map, `index` 1 to 3.
    L4 { index: u8 },
    /// Quadratic homoclinic tangencies in the unfolding plane, for the cubic tangency coefficient `d`.
    H0 { d: f64 },
}

impl CurveId {
    /// Checks the combination of tag, sign and index.
    pub fn validate(&self) -> Result<()> {
        match *self {
            CurveId::L2PlusI { i } | CurveId::L2MinusI { i, .. } if !(1..=2).contains(&i) => {
                Err(Error::domain(format!("branch index must be 1 or 2, got {i}")))
            }
            CurveId::L4 { index } if !(1..=3).contains(&index) => {
                Err(Error::domain(format!("L4 index must be 1, 2 or 3, got {index}")))
            }
            CurveId::LPhi { phi, .. } if !(phi > 0.0 && phi < PI) => {
                Err(Error::domain(format!("phi must lie in (0, pi), got {phi}")))
            }
            CurveId::H0 { d } if !(d.is_finite() && d != 0.0) => Err(Error::domain("H0 needs a nonzero d")),
            _ => Ok(()),
        }
    }

    /// Builds a curve from a textual tag. `nu` is required by tags whose equation depends on the
    /// map sign; `index` selects a branch; `phi` is the rotation angle of `Lphi`.
    pub fn parse(tag: &str, nu: Option<Sign>, index: Option<u8>, phi: Option<f64>) -> Result<Self> {
        let need_nu = || nu.ok_or_else(|| Error::domain(format!("curve '{tag}' needs a sign (--nu)")));
        let need_index = || index.ok_or_else(|| Error::domain(format!("curve '{tag}' needs a branch index")));
        let fixed_nu = |want: Sign| -> Result<()> {
            match nu {
                Some(s) if s != want => Err(Error::unsupported(format!("curve '{tag}' exists only for nu = {want}"))),
                _ => Ok(()),
            }
        };
        let id = match tag.to_ascii_lowercase().as_str() {
            "lplus" => CurveId::LPlus { nu: need_nu()? },
            "lminus" => CurveId::LMinus { nu: need_nu()? },
            "l2plus" => {
                fixed_nu(Sign::Plus)?;
                CurveId::L2Plus
            }
            "l2plusi" => {
                fixed_nu(Sign::Minus)?;
                CurveId::L2PlusI { i: need_index()? }
            }
            "l2minusi" => CurveId::L2MinusI { nu: need_nu()?, i: need_index()? },
            "lphi" => CurveId::LPhi {
                nu: need_nu()?,
                phi: phi.ok_or_else(|| Error::domain("curve 'Lphi' needs an angle (--phi)"))?,
            },
            "lpihalf" => CurveId::LPiHalf { nu: need_nu()? },
            "nontwist" => CurveId::NonTwist { nu: need_nu()? },
            "l4" | "l4_1" | "l4_2" | "l4_3" => {
                fixed_nu(Sign::Minus)?;
                let from_tag = tag.rsplit('_').next().and_then(|s| s.parse::<u8>().ok());
                CurveId::L4 { index: if tag.contains('_') { from_tag.unwrap_or(0) } else { need_index()? } }
            }
            "h0" => CurveId::H0 { d: 1.0 },
            other => return Err(Error::domain(format!("unknown curve '{other}'"))),
        };
        id.validate()?;
        Ok(id)
    }

    /// Map sign the curve belongs to, if it lives in the `(M1, M2)` plane.
    pub fn nu(&self) -> Option<Sign> {
        match *self {
            CurveId::LPlus { nu }
            | CurveId::LMinus { nu }
            | CurveId::L2MinusI { nu, .. }
            | CurveId::LPhi { nu, .. }
            | CurveId::LPiHalf { nu }
            | CurveId::NonTwist { nu } => Some(nu),
            CurveId::L2Plus => Some(Sign::Plus),
            CurveId::L2PlusI { .. } | CurveId::L4 { .. } => Some(Sign::Minus),
            CurveId::H0 { .. } => None,
        }
    }

    /// Short tag used in CSV output.
    pub fn tag(&self) -> String {
        match *self {
            CurveId::LPlus { .. } => "Lplus".into(),
            CurveId::LMinus { .. } => "Lminus".into(),
            CurveId::L2Plus => "L2plus".into(),
            CurveId::L2PlusI { i } => format!("L2plus{i}"),
            CurveId::L2MinusI { i, .. } => format!("L2minus{i}"),
            CurveId::LPhi { phi, .. } => format!("Lphi({phi})"),
            CurveId::LPiHalf { .. } => "Lpihalf".into(),
            CurveId::NonTwist { .. } => "nontwist".into(),
            CurveId::L4 { index } => format!("L4_{index}"),
            CurveId::H0 { .. } => "H0".into(),
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.nu() {
            Some(nu) => write!(f, "{} (nu = {nu})", self.tag()),
            None => f.write_str(&self.tag()),
        }
    }
}

/// A sample of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub m1: f64,
    pub m2: f64,
    pub curve: CurveId,
}

/// `cos(phi)`, exact at the angles of the strong resonances (to a few ulps in `phi`).
pub fn cos_exact(phi: f64) -> f64 {
    let near = |a: f64| (phi - a).abs() <= 4.0 * f64::EPSILON;
    if near(FRAC_PI_2) {
        0.0
    } else if near(2.0 * FRAC_PI_3) {
        -0.5
    } else if near(FRAC_PI_3) {
        0.5
    } else {
        phi.cos()
    }
}

/// `+-sqrt(rhs)` for a right-hand side of `M1^2 = rhs`, ascending; empty when negative.
fn pm_sqrt(rhs: f64) -> Vec<f64> {
    if rhs > 0.0 {
        let r = rhs.sqrt();
        vec![-r, r]
    } else if rhs == 0.0 {
        vec![0.0]
    } else {
        Vec::new()
    }
}

fn l2_minus_rhs(nu: Sign, i: u8, m2: f64) -> Option<f64> {
    let disc = 9.0 * m2 * m2 + 24.0 * m2;
    if disc < 0.0 {
        return None;
    }
    let sgn = if i == 1 { -1.0 } else { 1.0 };
    let root = disc.sqrt();
    let first = 12.0 + m2 + sgn * root;
    let second = -5.0 * m2 - 12.0 + sgn * root;
    Some(first * first * second / (216.0 * nu.value()))
}

fn phi_rhs(nu: Sign, cos_phi: f64, m2: f64) -> f64 {
    let t = m2 + cos_phi - 3.0;
    nu.value() * 4.0 / 27.0 * t * t * (2.0 * cos_phi - m2)
}

/// Coefficients `(B, C)` of the non-twist condition `729 X^2 + s B X - C = 0` in `X = M1^2`.
fn nontwist_parts(m2: f64) -> (f64, f64) {
    let b = 8.0 * m2.powi(3) - 108.0 * m2 * m2 - 63.0 * m2 + 837.0;
    let t = 5.0 * m2 - 16.0;
    let c = 16.0 / 27.0 * (m2 + 1.0) * t * t * (m2 - 2.0).powi(3);
    (b, c)
}

/// All real `M1` on the curve at the given `M2`, ascending. Empty outside the curve's domain.
pub fn curve_m1(curve: CurveId, m2: f64) -> Result<Vec<f64>> {
    curve.validate()?;
    if !m2.is_finite() {
        return Err(Error::domain("M2 must be finite"));
    }
    let k = 2.0 / (3.0 * 3f64.sqrt());
    let values = match curve {
        CurveId::LPlus { nu } => pm_sqrt(4.0 / (27.0 * nu.value()) * (2.0 - m2).powi(3)),
        CurveId::LMinus { nu } => pm_sqrt(-4.0 / (27.0 * nu.value()) * (2.0 + m2) * (4.0 - m2).powi(2)),
        CurveId::L2Plus => pm_sqrt(-4.0 / 27.0 * (m2 + 4.0).powi(3)),
        CurveId::L2PlusI { i } => {
            if m2 > -4.0 / 3.0 {
                let sgn = if i == 1 { -1.0 } else { 1.0 };
                vec![sgn * 2.0 * ((m2 + 4.0) / 3.0).powf(1.5)]
            } else {
                Vec::new()
            }
        }
        CurveId::L2MinusI { nu, i } => l2_minus_rhs(nu, i, m2).map(pm_sqrt).unwrap_or_default(),
        CurveId::LPhi { nu, phi } => pm_sqrt(phi_rhs(nu, cos_exact(phi), m2)),
        CurveId::LPiHalf { nu } => pm_sqrt(phi_rhs(nu, 0.0, m2)),
        CurveId::NonTwist { nu } => {
            let (b, c) = nontwist_parts(m2);
            let sb = nu.value() * b;
            // 729 X^2 + sb X - c = 0, solved without cancellation.
            let disc = sb * sb + 4.0 * 729.0 * c;
            let mut xs = Vec::new();
            if disc >= 0.0 {
                let q = -0.5 * (sb + sb.signum() * disc.sqrt());
                if q != 0.0 {
                    xs.push(q / 729.0);
                    xs.push(-c / q);
                } else {
                    xs.push(0.0);
                }
            }
            let mut out: Vec<f64> = xs.into_iter().filter(|x| *x >= 0.0).flat_map(pm_sqrt).collect();
            out.sort_by(f64::total_cmp);
            out.dedup();
            out
        }
        CurveId::L4 { index: 1 } => if m2 >= 1.0 / 3.0 { vec![k * (1.0 + m2).powf(1.5)] } else { Default::default() },
        CurveId::L4 { index: 2 } => if m2 >= 1.0 / 3.0 { vec![-k * (1.0 + m2).powf(1.5)] } else { Default::default() },
        CurveId::L4 { .. } => {
            if m2 >= 1.0 {
                let v = k * (2.0 + m2) * (m2 - 1.0).sqrt();
                if v == 0.0 {
                    vec![0.0]
                } else {
                    vec![-v.abs(), v.abs()]
                }
            } else {
                Vec::new()
            }
        }
        CurveId::H0 { .. } => {
            return Err(Error::unsupported("H0 lives in the (mu1, mu2) plane; use h0_mu1"));
        }
    };
    Ok(values)
}

/// Curve samples over a list of `M2` values, in input order.
pub fn sample_curve(curve: CurveId, m2_samples: &[f64]) -> Result<Vec<CurvePoint>> {
    let mut out = Vec::new();
    for &m2 in m2_samples {
        for m1 in curve_m1(curve, m2)? {
            out.push(CurvePoint { m1, m2, curve });
        }
    }
    Ok(out)
}

/// Residual of the curve's defining equation at `(m1, m2)`, divided by the sum of the magnitudes
/// of its terms.
pub fn curve_residual(curve: CurveId, m1: f64, m2: f64) -> Result<f64> {
    curve.validate()?;
    let k = 2.0 / (3.0 * 3f64.sqrt());
    let rel = |lhs: f64, rhs: f64| (lhs - rhs).abs() / (lhs.abs() + rhs.abs()).max(f64::MIN_POSITIVE);
    Ok(match curve {
        CurveId::LPlus { nu } => rel(m1 * m1, 4.0 / (27.0 * nu.value()) * (2.0 - m2).powi(3)),
        CurveId::LMinus { nu } => rel(m1 * m1, -4.0 / (27.0 * nu.value()) * (2.0 + m2) * (4.0 - m2).powi(2)),
        CurveId::L2Plus => rel(m1 * m1, -4.0 / 27.0 * (m2 + 4.0).powi(3)),
        CurveId::L2PlusI { i } => {
            let sgn = if i == 1 { -1.0 } else { 1.0 };
            rel(m1, sgn * 2.0 * ((m2 + 4.0) / 3.0).powf(1.5))
        }
        CurveId::L2MinusI { nu, i } => {
            rel(m1 * m1, l2_minus_rhs(nu, i, m2).ok_or_else(|| Error::domain("M2 outside the curve's domain"))?)
        }
        CurveId::LPhi { nu, phi } => rel(m1 * m1, phi_rhs(nu, cos_exact(phi), m2)),
        CurveId::LPiHalf { nu } => rel(m1 * m1, phi_rhs(nu, 0.0, m2)),
        CurveId::NonTwist { nu } => {
            let (b, c) = nontwist_parts(m2);
            let x = m1 * m1;
            let terms = [729.0 * x * x, nu.value() * b * x, -c];
            terms.iter().sum::<f64>().abs() / terms.iter().map(|t| t.abs()).sum::<f64>().max(f64::MIN_POSITIVE)
        }
        CurveId::L4 { index: 1 } => rel(m1, k * (1.0 + m2).powf(1.5)),
        CurveId::L4 { index: 2 } => rel(m1, -k * (1.0 + m2).powf(1.5)),
        CurveId::L4 { .. } => rel(m1 * m1, (k * (2.0 + m2)).powi(2) * (m2 - 1.0)),
        CurveId::H0 { .. } => return Err(Error::unsupported("H0 lives in the (mu1, mu2) plane")),
    })
}

/// `M2` at which the elliptic fixed point with multipliers `exp(+-i phi)` has zero first
/// Birkhoff coefficient: `(6 cos^2 + 3 cos + 1) / (1 + 4 cos)`.
pub fn b1_zero_m2(phi: f64) -> Result<f64> {
    if !(phi > 0.0 && phi < PI) {
        return Err(Error::domain(format!("phi must lie in (0, pi), got {phi}")));
    }
    b1_zero_m2_from_cos(cos_exact(phi))
}

/// [`b1_zero_m2`] in terms of `cos(phi)` directly.
pub fn b1_zero_m2_from_cos(c: f64) -> Result<f64> {
    let den = 1.0 + 4.0 * c;
    if den.abs() < 1e-14 {
        return Err(Error::domain("cos(phi) = -1/4 is a pole of the vanishing-twist condition"));
    }
    Ok((6.0 * c * c + 3.0 * c + 1.0) / den)
}

/// Residual `729 M1^4 + s (8 M2^3 - 108 M2^2 - 63 M2 + 837) M1^2 - (16/27)(M2+1)(5 M2-16)^2 (M2-2)^3`
/// of the non-twist condition, with `s = +1` for the `nu = +1` map and `s = -1` for `nu = -1`.
pub fn nontwist_residual(sign: Sign, m1: f64, m2: f64) -> f64 {
    let (b, c) = nontwist_parts(m2);
    let x = m1 * m1;
    729.0 * x * x + sign.value() * b * x - c
}

/// Real `M2` roots of the non-twist condition at fixed `M1`, ascending.
///
/// At `M1 = 0` the roots come from the factors: `{-1, 2, 16/5}`. Otherwise the sextic in `M2` is
/// solved numerically.
pub fn nontwist_m2_roots(sign: Sign, m1: f64) -> Vec<f64> {
    if m1 == 0.0 {
        return vec![-1.0, 2.0, 3.2];
    }
    let x = m1 * m1;
    let s = sign.value();
    // 729 x^2 + s x (8 M2^3 - 108 M2^2 - 63 M2 + 837) - (16/27)(M2+1)(5 M2-16)^2 (M2-2)^3
    let lin = |a: f64, b: f64| Poly::new(vec![a, b]);
    let c = lin(1.0, 1.0)
        .mul(&lin(-16.0, 5.0))
        .mul(&lin(-16.0, 5.0))
        .mul(&lin(-2.0, 1.0))
        .mul(&lin(-2.0, 1.0))
        .mul(&lin(-2.0, 1.0))
        .scale(-16.0 / 27.0);
    let b = Poly::new(vec![837.0, -63.0, -108.0, 8.0]).scale(s * x);
    let p = c.add(&b).add(&Poly::new(vec![729.0 * x * x]));
    p.real_roots(1e-12)
}

/// Leading-order branches `mu1 = +-2d (-mu2/(3d))^(3/2)` of the quadratic-tangency curve,
/// ascending; a single value at the cusp and none when `-mu2/(3d) < 0`.
pub fn h0_mu1(mu2: f64, d: f64) -> Result<Vec<f64>> {
    if !(d.is_finite() && d != 0.0) {
        return Err(Error::domain("d must be finite and nonzero"));
    }
    let t = -mu2 / (3.0 * d);
    if t < 0.0 {
        return Ok(Vec::new());
    }
    let v = 2.0 * d * t.powf(1.5);
    let mut out = if v == 0.0 { vec![0.0] } else { vec![-v, v] };
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Curve samples mapped to the unfolding plane of `model` for the `k`-th return map:
/// `mu2 = lambda^k M2 - f11 lambda^k x+`, `mu1 = lambda^k (y- - c x+) + |lambda|^(k/2) lambda^k M1 / sqrt|d|`.
///
/// Samples outside the curve's domain are skipped. The curve's sign must match `sign(d lambda^k)`.
pub fn pullback_curve(curve: CurveId, model: &ModelFamily, k: u32, m2_samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    if let Some(nu) = curve.nu() {
        if nu != model.nu(k) {
            return Err(Error::unsupported(format!(
                "curve {curve} does not appear for this model at k = {k} (sign(d lambda^k) = {})",
                model.nu(k)
            )));
        }
    }
    let mut out = Vec::new();
    for p in sample_curve(curve, m2_samples)? {
        out.push(crate::return_map::unfold_params(model, k, p.m1, p.m2));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_values(got: Vec<f64>, want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert_abs_diff_eq!(*g, *w, epsilon = tol);
        }
    }

    #[test]
    fn l_plus_example() {
        assert_values(curve_m1(CurveId::LPlus { nu: Sign::Plus }, -1.0).unwrap(), &[-2.0, 2.0], 1e-15);
    }

    #[test]
    fn resonance_curve_points() {
        let p = 16.0 / 27.0;
        assert_values(curve_m1(CurveId::LPiHalf { nu: Sign::Minus }, 1.0 / 3.0).unwrap(), &[-p, p], 1e-15);
        let q = 20.0 / 27.0;
        assert_values(curve_m1(CurveId::LPiHalf { nu: Sign::Plus }, -1.0 / 3.0).unwrap(), &[-q, q], 1e-15);
    }

    #[test]
    fn l4_through_degenerate_points() {
        let p = 16.0 / 27.0;
        assert_values(curve_m1(CurveId::L4 { index: 1 }, 1.0 / 3.0).unwrap(), &[p], 1e-15);
        assert_values(curve_m1(CurveId::L4 { index: 2 }, 1.0 / 3.0).unwrap(), &[-p], 1e-15);
        assert!(curve_m1(CurveId::L4 { index: 1 }, 0.2).unwrap().is_empty());
        assert_values(curve_m1(CurveId::L4 { index: 3 }, 1.0).unwrap(), &[0.0], 0.0);
    }

    #[test]
    fn lphi_specialisations() {
        for m2 in [-2.0, -1.0, -0.3, 0.0] {
            assert_eq!(
                curve_m1(CurveId::LPhi { nu: Sign::Plus, phi: FRAC_PI_2 }, m2).unwrap(),
                curve_m1(CurveId::LPiHalf { nu: Sign::Plus }, m2).unwrap()
            );
        }
        assert_eq!(cos_exact(2.0 * FRAC_PI_3), -0.5);
    }

    #[test]
    fn absent_curves_are_empty() {
        assert!(curve_m1(CurveId::LPlus { nu: Sign::Plus }, 3.0).unwrap().is_empty());
        assert!(curve_m1(CurveId::L2Plus, -3.0).unwrap().is_empty());
        assert!(curve_m1(CurveId::L2PlusI { i: 1 }, -2.0).unwrap().is_empty());
        assert!(curve_m1(CurveId::L2MinusI { nu: Sign::Plus, i: 1 }, -1.0).unwrap().is_empty());
    }

    #[test]
    fn unsupported_combinations() {
        assert!(CurveId::parse("L2plus", Some(Sign::Minus), None, None).unwrap_err().is_usage());
        assert!(CurveId::parse("L2plusI", Some(Sign::Plus), Some(1), None).is_err());
        assert!(CurveId::parse("L2plusI", None, Some(3), None).is_err());
        assert!(CurveId::parse("Lplus", None, None, None).is_err());
        assert!(curve_m1(CurveId::H0 { d: 1.0 }, 0.0).is_err());
        assert_eq!(CurveId::parse("L4_3", None, None, None).unwrap(), CurveId::L4 { index: 3 });
    }

    #[test]
    fn vanishing_twist_m2() {
        assert_abs_diff_eq!(b1_zero_m2(FRAC_PI_2).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b1_zero_m2_from_cos(-0.2).unwrap(), 3.2, epsilon = 1e-14);
        assert_abs_diff_eq!(b1_zero_m2(2.0 * FRAC_PI_3).unwrap(), -1.0, epsilon = 1e-15);
        assert!(b1_zero_m2_from_cos(-0.25).is_err());
    }

    #[test]
    fn nontwist_identity_on_resonance_curve() {
        assert!(nontwist_residual(Sign::Minus, (16.0f64 / 27.0).sqrt(), 1.0).abs() < 1e-12);
        for m2 in [-1.0, 2.0, 3.2] {
            assert!(nontwist_residual(Sign::Plus, 0.0, m2).abs() < 1e-12);
            assert!(nontwist_residual(Sign::Minus, 0.0, m2).abs() < 1e-12);
        }
        assert!(nontwist_residual(Sign::Plus, 0.0, 0.0).abs() > 1.0);
    }

    #[test]
    fn nontwist_roots_general() {
        for (sign, m1) in [(Sign::Plus, 0.3), (Sign::Minus, 0.5), (Sign::Plus, 1.7)] {
            for m2 in nontwist_m2_roots(sign, m1) {
                let (b, c) = nontwist_parts(m2);
                let scale = 729.0 * m1.powi(4) + (b * m1 * m1).abs() + c.abs();
                assert!(nontwist_residual(sign, m1, m2).abs() < 1e-8 * scale, "{m2}");
            }
        }
    }

    #[test]
    fn nontwist_m1_solves_condition() {
        for nu in [Sign::Plus, Sign::Minus] {
            for m2 in [-0.8, 0.5, 1.0, 2.5, 3.0, 4.0] {
                for m1 in curve_m1(CurveId::NonTwist { nu }, m2).unwrap() {
                    assert!(curve_residual(CurveId::NonTwist { nu }, m1, m2).unwrap() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn h0_leading_order() {
        assert_values(h0_mu1(-3.0, 1.0).unwrap(), &[-2.0, 2.0], 1e-15);
        assert_values(h0_mu1(0.0, 1.0).unwrap(), &[0.0], 0.0);
        assert!(h0_mu1(-3.0, -1.0).unwrap().is_empty());
        assert!(h0_mu1(1.0, 0.0).is_err());
    }

    #[test]
    fn pullback_reference_example() {
        let model = ModelFamily::simplified(0.5, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let pts = pullback_curve(CurveId::LPlus { nu: Sign::Plus }, &model, 4, &[-1.0]).unwrap();
        assert_eq!(pts.len(), 2);
        assert_abs_diff_eq!(pts[0].0, 0.125 - 0.03125, epsilon = 1e-15);
        assert_abs_diff_eq!(pts[1].0, 0.125 + 0.03125, epsilon = 1e-15);
        assert_abs_diff_eq!(pts[0].1, -0.0625, epsilon = 1e-16);
        assert!(pullback_curve(CurveId::LPlus { nu: Sign::Minus }, &model, 4, &[-1.0]).is_err());
    }
}
