//! Dense complex determinants, truncated power series, and a damped Newton
//! solver.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Relative pivot threshold below which a matrix is treated as singular.
pub const SINGULAR_RTOL: f64 = 1e-13;
/// Relative threshold for treating two rapidities as equal.
pub const COINCIDENCE_RTOL: f64 = 1e-12;

/// The crossing parameter `i`.
pub const ETA: Complex = Complex::new(0.0, 1.0);
/// The common quantum rapidity `i/2`.
pub const Z0: Complex = Complex::new(0.0, 0.5);

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `true` when `a` and `b` are closer than the coincidence threshold.
pub fn coincident(a: Complex, b: Complex) -> bool {
    (a - b).norm() < COINCIDENCE_RTOL * (1.0 + a.norm() + b.norm())
}

/// Returns `a - b`, or `CoincidentRapidities` when the two are too close.
pub fn checked_diff(a: Complex, b: Complex, what: &str) -> Result<Complex> {
    if coincident(a, b) {
        return Err(Error::CoincidentRapidities(format!("{what}: {a} and {b}")));
    }
    Ok(a - b)
}

pub fn ensure_finite(z: Complex, what: &str) -> Result<Complex> {
    if is_finite(z) {
        Ok(z)
    } else {
        Err(Error::InvalidInput(format!("{what} is not finite")))
    }
}

/// Relative distance `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_err(a: Complex, b: Complex) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<Complex>,
}

impl SquareMatrix {
    pub fn new(n: usize, entries: Vec<Complex>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(SquareMatrix { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            entries: vec![Complex::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        SquareMatrix { n, entries }
    }

    pub fn try_from_fn(
        n: usize,
        mut f: impl FnMut(usize, usize) -> Result<Complex>,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j)?);
            }
        }
        Ok(SquareMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, s: Complex) -> SquareMatrix {
        SquareMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    fn max_row_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|x| x.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.entries[i * self.n + j]
    }
}

struct Lu {
    a: Vec<Complex>,
    perm: Vec<usize>,
    sign: f64,
}

/// In-place LU with partial pivoting. `None` when some pivot column is
/// entirely below the singularity threshold.
fn lu(m: &SquareMatrix) -> Result<Option<Lu>> {
    if m.entries.iter().any(|x| !is_finite(*x)) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = m.n;
    let thresh = SINGULAR_RTOL * m.max_row_norm();
    let mut a = m.entries.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, a[i * n + k].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= thresh {
            return Ok(None);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let piv = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            a[i * n + k] = f;
            for j in k + 1..n {
                let t = a[k * n + j];
                a[i * n + j] -= f * t;
            }
        }
    }
    Ok(Some(Lu { a, perm, sign }))
}

/// Determinant by LU factorization with partial pivoting.
///
/// The empty matrix has determinant 1. A matrix whose pivot column falls
/// entirely below `1e-13 * max row norm` has determinant exactly 0.
pub fn det(m: &SquareMatrix) -> Result<Complex> {
    let n = m.n;
    match lu(m)? {
        None => Ok(Complex::new(0.0, 0.0)),
        Some(f) => {
            let mut d = Complex::new(f.sign, 0.0);
            for k in 0..n {
                d *= f.a[k * n + k];
            }
            ensure_finite(d, "determinant")
        }
    }
}

/// Solves `m x = b`; singular systems give `SingularJacobian`.
pub fn solve(m: &SquareMatrix, b: &[Complex]) -> Result<Vec<Complex>> {
    let n = m.n;
    if b.len() != n {
        return Err(Error::InvalidInput(
            "right-hand side length mismatch".into(),
        ));
    }
    let f = lu(m)?.ok_or(Error::SingularJacobian)?;
    let mut x: Vec<Complex> = f.perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            let t = f.a[i * n + j] * x[j];
            x[i] -= t;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let t = f.a[i * n + j] * x[j];
            x[i] -= t;
        }
        x[i] /= f.a[i * n + i];
    }
    Ok(x)
}

/// Truncated power series `c_0 + c_1 e + ... + c_order e^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "a power series needs at least c0".into(),
            ));
        }
        Ok(PowerSeries { coeffs })
    }

    /// The constant series `s`.
    pub fn constant(s: Complex, order: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); order + 1];
        coeffs[0] = s;
        PowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn scale(&self, s: Complex) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|x| x * s).collect(),
        }
    }
}

/// Taylor coefficients of `e -> 1/(c - e)`: coefficient `m` is `c^-(m+1)`.
pub fn pole_series(c: Complex, order: usize) -> Result<PowerSeries> {
    if !is_finite(c) {
        return Err(Error::InvalidInput("pole location is not finite".into()));
    }
    if c.norm() < COINCIDENCE_RTOL {
        return Err(Error::PoleAtExpansionPoint(c.norm()));
    }
    let inv = c.inv();
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut p = inv;
    for _ in 0..=order {
        coeffs.push(p);
        p *= inv;
    }
    Ok(PowerSeries { coeffs })
}

/// Cauchy product truncated at the common order.
pub fn series_mul(a: &PowerSeries, b: &PowerSeries) -> Result<PowerSeries> {
    if a.order() != b.order() {
        return Err(Error::InvalidInput(format!(
            "series orders differ: {} vs {}",
            a.order(),
            b.order()
        )));
    }
    let n = a.coeffs.len();
    let coeffs = (0..n)
        .map(|m| (0..=m).map(|k| a.coeffs[k] * b.coeffs[m - k]).sum())
        .collect();
    Ok(PowerSeries { coeffs })
}

pub type ResidualFn<'a> = &'a dyn Fn(&[Complex]) -> Result<Vec<Complex>>;
pub type JacobianFn<'a> = &'a dyn Fn(&[Complex]) -> Result<SquareMatrix>;

fn max_norm(v: &[Complex]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Central-difference Jacobian with step `1e-7 * (1 + |x_k|)`.
pub fn finite_difference_jacobian(residual: ResidualFn, x: &[Complex]) -> Result<SquareMatrix> {
    let n = x.len();
    let mut jac = SquareMatrix::zeros(n);
    let mut xp = x.to_vec();
    for k in 0..n {
        let h = 1e-7 * (1.0 + x[k].norm());
        xp[k] = x[k] + h;
        let fp = residual(&xp)?;
        xp[k] = x[k] - h;
        let fm = residual(&xp)?;
        xp[k] = x[k];
        for i in 0..n {
            jac[(i, k)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Damped Newton iteration for a square complex system.
///
/// Without an analytic `jacobian` the finite-difference fallback is used.
/// A full step that does not lower `max |residual|` is halved up to 30
/// times. The returned point always satisfies `max |residual| <= tol`.
pub fn newton_solve(
    residual: ResidualFn,
    jacobian: Option<JacobianFn>,
    x0: &[Complex],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<Complex>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let mut x = x0.to_vec();
    let mut r = residual(&x)?;
    if r.len() != x.len() {
        return Err(Error::InvalidInput("system is not square".into()));
    }
    let mut norm = max_norm(&r);
    for _ in 0..max_iter {
        if norm <= tol {
            return Ok(x);
        }
        let jac = match jacobian {
            Some(j) => j(&x)?,
            None => finite_difference_jacobian(residual, &x)?,
        };
        let step = solve(&jac, &r)?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=30 {
            let trial: Vec<Complex> = x.iter().zip(&step).map(|(a, s)| a - s * lambda).collect();
            if let Ok(rt) = residual(&trial) {
                let nt = max_norm(&rt);
                if nt.is_finite() && nt < norm {
                    accepted = Some((trial, rt, nt));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((xt, rt, nt)) => {
                x = xt;
                r = rt;
                norm = nt;
            }
            None => break,
        }
    }
    if norm <= tol {
        return Ok(x);
    }
    Err(Error::NoConvergence {
        best: x,
        residual: norm,
        iterations: max_iter,
    })
}
