//! Real roots of polynomials: a closed-form depressed cubic solver and a
//! derivative-based isolator for arbitrary degree.

use std::f64::consts::PI;

/// Relative discriminant threshold below which a cubic is treated as having a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-10;

/// Relative spacing below which real roots of a general polynomial are merged into one.
pub const CLUSTER_TOL: f64 = 1e-5;

/// A real root of a cubic, flagged when it is (numerically) a repeated root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoot {
    pub value: f64,
    pub repeated: bool,
}

/// Real roots of `t^3 + p t + q = 0`, ascending, repeated roots reported once.
pub fn depressed_cubic_roots(p: f64, q: f64) -> Vec<CubicRoot> {
    let disc = 4.0 * p * p * p + 27.0 * q * q;
    let scale = 4.0 * p.abs().powi(3) + 27.0 * q * q;

    if scale == 0.0 {
        return vec![CubicRoot { value: 0.0, repeated: true }];
    }

    let mut roots = if disc.abs() <= DOUBLE_ROOT_TOL * scale {
        if p == 0.0 {
            // only reachable when q is tiny relative to nothing; treat as triple root
            vec![CubicRoot { value: -q.cbrt(), repeated: true }]
        } else {
            let simple = 3.0 * q / p;
            let double = -1.5 * q / p;
            vec![
                CubicRoot { value: polish(p, q, simple), repeated: false },
                CubicRoot { value: double, repeated: true },
            ]
        }
    } else if disc > 0.0 {
        let d = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        let a = -q.signum() * (q.abs() / 2.0 + d).cbrt();
        let t = if a == 0.0 { 0.0 } else { a - p / (3.0 * a) };
        vec![CubicRoot { value: polish(p, q, t), repeated: false }]
    } else {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| {
                let t = r * (theta - 2.0 * PI * k as f64 / 3.0).cos();
                CubicRoot { value: polish(p, q, t), repeated: false }
            })
            .collect()
    };
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    roots
}

fn polish(p: f64, q: f64, t: f64) -> f64 {
    let mut best = t;
    let mut best_res = (t * t * t + p * t + q).abs();
    let mut cur = t;
    for _ in 0..3 {
        let d = 3.0 * cur * cur + p;
        if d == 0.0 {
            break;
        }
        cur -= (cur * cur * cur + p * cur + q) / d;
        let res = (cur * cur * cur + p * cur + q).abs();
        if res < best_res {
            best = cur;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

/// Dense polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeffs.get(i).copied().unwrap_or(0.0) + other.coeffs.get(i).copied().unwrap_or(0.0))
            .collect();
        Poly::new(c)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Sum of absolute values of the terms at `x`, used to judge residuals relatively.
    pub fn magnitude(&self, x: f64) -> f64 {
        let mut xp = 1.0;
        let mut s = 0.0;
        for &c in &self.coeffs {
            s += (c * xp).abs();
            xp *= x;
        }
        s
    }

    /// Cauchy bound on the modulus of every root.
    fn root_bound(&self) -> f64 {
        let lead = *self.coeffs.last().unwrap();
        1.0 + self.coeffs[..self.coeffs.len() - 1].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max)
    }

    /// All distinct real roots, ascending.
    ///
    /// Critical points (roots of the derivative) split the line into monotone pieces; each piece
    /// with a sign change holds exactly one root, found by bisection. A critical point where the
    /// value vanishes relative to `rel_tol` is reported as a repeated root. Roots closer than
    /// [`CLUSTER_TOL`] are reported once.
    pub fn real_roots(&self, rel_tol: f64) -> Vec<f64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        if n == 1 {
            return vec![-self.coeffs[0] / self.coeffs[1]];
        }
        let bound = self.root_bound();
        let crit: Vec<f64> = self
            .derivative()
            .real_roots(rel_tol)
            .into_iter()
            .filter(|c| c.abs() < bound)
            .collect();

        let mut knots = vec![-bound];
        knots.extend(crit.iter().copied());
        knots.push(bound);

        let mut roots: Vec<f64> = Vec::new();
        for &c in &crit {
            if self.eval(c).abs() <= rel_tol * self.magnitude(c).max(f64::MIN_POSITIVE) {
                roots.push(c);
            }
        }
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            if fa == 0.0 || fb == 0.0 || fa.signum() == fb.signum() {
                continue;
            }
            let r = bisect(|x| self.eval(x), a, b, fa);
            roots.push(r);
        }
        roots.sort_by(f64::total_cmp);
        // A root of multiplicity m is only resolvable to about eps^(1/m); its numerical images
        // form a tight cluster, collapsed here to the member with the smallest residual.
        let mut out: Vec<f64> = Vec::new();
        for r in roots {
            match out.last_mut() {
                Some(last) if (r - *last).abs() <= CLUSTER_TOL * (1.0 + last.abs()) => {
                    if self.eval(r).abs() < self.eval(*last).abs() {
                        *last = r;
                    }
                }
                _ => out.push(r),
            }
        }
        out
    }
}

/// Bisection on a bracket `[a, b]` with `f(a) = fa` of opposite sign to `f(b)`, to machine precision.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
