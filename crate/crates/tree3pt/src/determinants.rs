//! Closed-form determinant evaluations: the domain-wall partition function,
//! the restricted scalar product, their homogeneous limits, and the norm of
//! a Bethe state.

use crate::algebraic_bethe::{bethe_residual, max_residual, VERIFY_TOL};
use crate::error::{Error, Result};
use crate::numerics::{
    checked_diff, det, ensure_finite, pole_series, series_mul, Complex, PowerSeries, SquareMatrix,
};

/// Quantum rapidities of a scalar product.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumRapidities {
    Inhomogeneous(Vec<Complex>),
    Homogeneous(Complex),
}

/// Arguments of the restricted scalar product `S[L, N1, N2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlavnovInput {
    pub l: usize,
    pub n1: usize,
    pub n2: usize,
    pub u: Vec<Complex>,
    pub v: Vec<Complex>,
    pub z: QuantumRapidities,
    pub eta: Complex,
}

impl SlavnovInput {
    pub fn n3(&self) -> usize {
        self.n1 - self.n2
    }

    fn validate(&self) -> Result<()> {
        if !(self.n2 <= self.n1 && self.n1 <= self.l) {
            return Err(Error::InvalidGeometry(format!(
                "need 0 <= N2 <= N1 <= L, got L={}, N1={}, N2={}",
                self.l, self.n1, self.n2
            )));
        }
        if self.u.len() != self.n1 || self.v.len() != self.n2 {
            return Err(Error::InvalidGeometry(format!(
                "expected {} u and {} v rapidities, got {} and {}",
                self.n1,
                self.n2,
                self.u.len(),
                self.v.len()
            )));
        }
        if let QuantumRapidities::Inhomogeneous(z) = &self.z {
            if z.len() != self.l {
                return Err(Error::InvalidGeometry(format!(
                    "expected {} quantum rapidities, got {}",
                    self.l,
                    z.len()
                )));
            }
        }
        Ok(())
    }
}

/// Arguments of the norm formula.
#[derive(Debug, Clone, PartialEq)]
pub struct GaudinInput {
    pub l: usize,
    pub u: Vec<Complex>,
    pub z: Complex,
    pub eta: Complex,
}

fn vandermonde(x: &[Complex], ascending: bool, what: &str) -> Result<Complex> {
    let mut p = Complex::new(1.0, 0.0);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            p *= if ascending {
                checked_diff(x[j], x[i], what)?
            } else {
                checked_diff(x[i], x[j], what)?
            };
        }
    }
    Ok(p)
}

fn sign(parity: usize) -> f64 {
    if parity % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `eta / ((w - z + eta)(w - z))`.
fn dw_entry(w: Complex, z: Complex, eta: Complex) -> Result<Complex> {
    let d = checked_diff(w, z, "auxiliary and quantum rapidity")?;
    let e = checked_diff(w + eta, z, "auxiliary rapidity shifted by eta")?;
    Ok(eta / (e * d))
}

/// Domain-wall partition function
/// `prod_{i,j} (w_i - z_j + eta) / [prod_{i<j} (w_i - w_j)(z_j - z_i)] * det[eta / ((w_i - z_j + eta)(w_i - z_j))]`.
pub fn izergin(w_list: &[Complex], z_list: &[Complex], eta: Complex) -> Result<Complex> {
    let n = w_list.len();
    if z_list.len() != n {
        return Err(Error::InvalidInput(
            "izergin needs equally many w and z".into(),
        ));
    }
    let m = SquareMatrix::try_from_fn(n, |i, j| dw_entry(w_list[i], z_list[j], eta))?;
    let mut num = Complex::new(1.0, 0.0);
    for &w in w_list {
        for &z in z_list {
            num *= w - z + eta;
        }
    }
    let den = vandermonde(w_list, false, "auxiliary rapidities")?
        * vandermonde(z_list, true, "quantum rapidities")?;
    ensure_finite(num / den * det(&m)?, "izergin")
}

/// Homogeneous limit `z_j -> z` of [`izergin`], with derivative columns
/// `phi_j(w) = (w-z)^-(j+1) - (w-z+eta)^-(j+1)` for `j = 0..N-1`.
pub fn izergin_hom(w_list: &[Complex], z: Complex, eta: Complex) -> Result<Complex> {
    let n = w_list.len();
    if n == 0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    let mut rows = Vec::with_capacity(n);
    for &w in w_list {
        let d = checked_diff(w, z, "auxiliary and quantum rapidity")?;
        let e = checked_diff(w + eta, z, "auxiliary rapidity shifted by eta")?;
        let p = pole_series(d, n - 1)?;
        let q = pole_series(e, n - 1)?;
        rows.push(
            p.coeffs()
                .iter()
                .zip(q.coeffs())
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        );
    }
    let m = SquareMatrix::from_fn(n, |i, j| rows[i][j]);
    let mut num = Complex::new(1.0, 0.0);
    for &w in w_list {
        num *= (w - z + eta).powu(n as u32);
    }
    let den = vandermonde(w_list, false, "auxiliary rapidities")?;
    ensure_finite(num / den * det(&m)?, "izergin_hom")
}

/// `eta/(u_i - v) * [a(v)^L prod_{k != i}(u_k - v + eta) - prod_{k != i}(u_k - v - eta)]`
/// where `a_l` is the product of `a(v, z_l)` over the chain.
fn g_entry(u: &[Complex], i: usize, v: Complex, a_l: Complex, eta: Complex) -> Result<Complex> {
    let d = checked_diff(u[i], v, "u and v rapidities")?;
    let mut p1 = a_l;
    let mut p2 = Complex::new(1.0, 0.0);
    for (k, &uk) in u.iter().enumerate() {
        if k != i {
            p1 *= uk - v + eta;
            p2 *= uk - v - eta;
        }
    }
    Ok(eta / d * (p1 - p2))
}

/// Restricted scalar product for distinct quantum rapidities.
///
/// The first `N3` columns hold `f_i(z_j) = eta/((u_i-z_j+eta)(u_i-z_j)) prod_k 1/(v_k-z_j)`,
/// the remaining `N2` columns `g_i(v_j)`. Bethe residuals of `u` are not
/// checked, so the function can be used along a continuation path.
pub fn slavnov_restricted(input: &SlavnovInput) -> Result<Complex> {
    input.validate()?;
    let z = match &input.z {
        QuantumRapidities::Inhomogeneous(z) => z,
        QuantumRapidities::Homogeneous(_) => {
            return Err(Error::InvalidInput(
                "slavnov_restricted needs distinct quantum rapidities; use slavnov_hom".into(),
            ))
        }
    };
    let (u, v, eta) = (&input.u, &input.v, input.eta);
    let (n1, n2, n3) = (input.n1, input.n2, input.n3());
    let mut a_of_v = Vec::with_capacity(n2);
    for &vj in v {
        let mut a = Complex::new(1.0, 0.0);
        for &zl in z {
            let d = checked_diff(vj, zl, "v and quantum rapidity")?;
            a *= (d + eta) / d;
        }
        a_of_v.push(a);
    }
    let m = SquareMatrix::try_from_fn(n1, |i, j| {
        if j < n3 {
            let mut f = dw_entry(u[i], z[j], eta)?;
            for &vk in v {
                f /= checked_diff(vk, z[j], "v and quantum rapidity")?;
            }
            Ok(f)
        } else {
            g_entry(u, i, v[j - n3], a_of_v[j - n3], eta)
        }
    })?;
    let mut num = Complex::new(1.0, 0.0);
    for &ui in u {
        for &zj in &z[..n3] {
            num *= ui - zj + eta;
        }
    }
    let den = vandermonde(u, true, "u rapidities")?
        * vandermonde(v, false, "v rapidities")?
        * vandermonde(&z[..n3], false, "quantum rapidities")?;
    let value = num / den * det(&m)? * sign(n2 * n3);
    ensure_finite(value, "slavnov_restricted")
}

/// Taylor coefficients of `e -> f_i(z + e)` up to order `order`.
fn f_series(
    ui: Complex,
    v: &[Complex],
    z: Complex,
    eta: Complex,
    order: usize,
) -> Result<PowerSeries> {
    let d = checked_diff(ui, z, "u and quantum rapidity")?;
    let e = checked_diff(ui + eta, z, "u shifted by eta")?;
    let mut s = series_mul(&pole_series(e, order)?, &pole_series(d, order)?)?;
    for &vk in v {
        let dv = checked_diff(vk, z, "v and quantum rapidity")?;
        s = series_mul(&s, &pole_series(dv, order)?)?;
    }
    Ok(s.scale(eta))
}

/// Homogeneous restricted scalar product without checking that `u` solves
/// the Bethe equations.
pub fn slavnov_hom_unchecked(input: &SlavnovInput) -> Result<Complex> {
    input.validate()?;
    let z = match input.z {
        QuantumRapidities::Homogeneous(z) => z,
        QuantumRapidities::Inhomogeneous(_) => {
            return Err(Error::InvalidInput(
                "slavnov_hom needs a homogeneous chain".into(),
            ))
        }
    };
    let (u, v, eta) = (&input.u, &input.v, input.eta);
    let (n1, n3) = (input.n1, input.n3());
    let mut rows: Vec<Vec<Complex>> = Vec::with_capacity(n1);
    for i in 0..n1 {
        let mut row = Vec::with_capacity(n1);
        if n3 > 0 {
            row.extend_from_slice(f_series(u[i], v, z, eta, n3 - 1)?.coeffs());
        }
        // derivative columns first, then g at v_{N2}, ..., v_1
        for &vj in v.iter().rev() {
            let d = checked_diff(vj, z, "v and quantum rapidity")?;
            let a_l = ((d + eta) / d).powu(input.l as u32);
            row.push(g_entry(u, i, vj, a_l, eta)?);
        }
        rows.push(row);
    }
    let m = SquareMatrix::from_fn(n1, |i, j| rows[i][j]);
    let mut num = Complex::new(1.0, 0.0);
    for &ui in u {
        num *= (ui - z + eta).powu(n3 as u32);
    }
    let den = vandermonde(u, true, "u rapidities")? * vandermonde(v, false, "v rapidities")?;
    let value = num / den * det(&m)? * sign(n1 * (n1.saturating_sub(1)) / 2);
    ensure_finite(value, "slavnov_hom")
}

fn require_on_shell(u: &[Complex], l: usize, z: Complex, eta: Complex) -> Result<()> {
    let r = max_residual(&bethe_residual(u, l, z, eta)?);
    if !(r <= VERIFY_TOL) {
        return Err(Error::UnverifiedRoots(r));
    }
    Ok(())
}

/// Homogeneous restricted scalar product. The `u` rapidities must solve
/// the Bethe equations to `1e-8`.
pub fn slavnov_hom(input: &SlavnovInput) -> Result<Complex> {
    if let QuantumRapidities::Homogeneous(z) = input.z {
        input.validate()?;
        require_on_shell(&input.u, input.l, z, input.eta)?;
    }
    slavnov_hom_unchecked(input)
}

/// The matrix `Phi'_{ij} = -d/du_j log[a(u_i)^L prod_{k != i} (u_k-u_i+eta)/(u_k-u_i-eta)]`.
pub fn gaudin_matrix(input: &GaudinInput) -> Result<SquareMatrix> {
    let (u, z, eta) = (&input.u, input.z, input.eta);
    let n = u.len();
    let l = input.l as f64;
    let kernel = |x: Complex| -> Result<Complex> {
        let p = checked_diff(x, -eta, "rapidities differing by eta")?;
        let m = checked_diff(x, eta, "rapidities differing by eta")?;
        Ok(p.inv() - m.inv())
    };
    SquareMatrix::try_from_fn(n, |i, j| {
        if i == j {
            let d = checked_diff(u[i], z, "u and quantum rapidity")?;
            let e = checked_diff(u[i] + eta, z, "u shifted by eta")?;
            let mut s = (d.inv() - e.inv()) * l;
            for k in 0..n {
                if k != i {
                    s += kernel(checked_diff(u[k], u[i], "u rapidities")?)?;
                }
            }
            Ok(s)
        } else {
            Ok(-kernel(checked_diff(u[j], u[i], "u rapidities")?)?)
        }
    })
}

/// Squared norm of a Bethe state,
/// `eta^N prod_{i != j} (u_i-u_j+eta)/(u_i-u_j) det Phi'`.
pub fn gaudin_norm(input: &GaudinInput) -> Result<Complex> {
    require_on_shell(&input.u, input.l, input.z, input.eta)?;
    let u = &input.u;
    let n = u.len();
    let mut pre = input.eta.powu(n as u32);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pre *= (u[i] - u[j] + input.eta) / checked_diff(u[i], u[j], "u rapidities")?;
            }
        }
    }
    ensure_finite(pre * det(&gaudin_matrix(input)?)?, "gaudin_norm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic_bethe::{explicit_norm, solve_bethe, Seed};
    use crate::numerics::{c, rel_err, ETA, Z0};
    use crate::vertex_model::{brute_dwpf, brute_restricted, VertexWeights};
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn rc(rng: &mut StdRng) -> Complex {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    fn hom(l: usize, u: &[Complex], v: &[Complex]) -> SlavnovInput {
        SlavnovInput {
            l,
            n1: u.len(),
            n2: v.len(),
            u: u.to_vec(),
            v: v.to_vec(),
            z: QuantumRapidities::Homogeneous(Z0),
            eta: ETA,
        }
    }

    fn roots(l: usize, modes: &[i64]) -> Vec<Complex> {
        solve_bethe(l, modes.len(), &Seed::Modes(modes.to_vec()), 1e-12)
            .unwrap()
            .roots()
            .to_vec()
    }

    #[test]
    fn izergin_small_cases() {
        assert_eq!(izergin(&[], &[], ETA).unwrap(), c(1.0, 0.0));
        let (w, z) = (c(0.3, 0.0), c(0.0, 0.1));
        assert!(rel_err(izergin(&[w], &[z], ETA).unwrap(), ETA / (w - z)) < 1e-15);
        assert!(rel_err(izergin_hom(&[w], z, ETA).unwrap(), ETA / (w - z)) < 1e-15);
        assert_eq!(izergin_hom(&[], z, ETA).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn izergin_matches_lattice() {
        let wt = VertexWeights::default();
        let w = [c(0.3, 0.0), c(-0.7, 0.0)];
        let z = [c(0.0, 0.1), c(0.0, -0.2)];
        assert!(
            rel_err(
                izergin(&w, &z, ETA).unwrap(),
                brute_dwpf(&w, &z, &wt).unwrap()
            ) < 1e-11
        );
        let mut rng = StdRng::seed_from_u64(42);
        let w: Vec<Complex> = (0..3).map(|_| rc(&mut rng)).collect();
        let z: Vec<Complex> = (0..3).map(|_| rc(&mut rng)).collect();
        assert!(
            rel_err(
                izergin(&w, &z, ETA).unwrap(),
                brute_dwpf(&w, &z, &wt).unwrap()
            ) < 1e-10
        );
    }

    #[test]
    fn izergin_rejects_coincidences() {
        let w = [c(0.3, 0.0), c(0.3, 0.0)];
        let z = [c(0.0, 0.1), c(0.0, -0.2)];
        assert!(matches!(
            izergin(&w, &z, ETA),
            Err(Error::CoincidentRapidities(_))
        ));
        assert!(matches!(
            izergin(&z, &z, ETA),
            Err(Error::CoincidentRapidities(_))
        ));
    }

    #[test]
    fn izergin_hom_is_limit_and_symmetric() {
        let w = [c(0.31, 0.2), c(-0.4, -0.1), c(0.8, 0.05)];
        let exact = izergin_hom(&w, Z0, ETA).unwrap();
        let mut errs = vec![];
        for delta in [1e-3, 1e-4, 1e-5] {
            let z: Vec<Complex> = (1..=3).map(|j| Z0 + delta * j as f64).collect();
            errs.push(rel_err(izergin(&w, &z, ETA).unwrap(), exact));
        }
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        let s = [c(0.4, 0.0), c(-0.4, 0.0)];
        let t = [c(-0.4, 0.0), c(0.4, 0.0)];
        assert!(
            rel_err(
                izergin_hom(&s, Z0, ETA).unwrap(),
                izergin_hom(&t, Z0, ETA).unwrap()
            ) < 1e-14
        );
    }

    #[test]
    fn slavnov_empty_and_dwpf_case() {
        let e = SlavnovInput {
            l: 3,
            n1: 0,
            n2: 0,
            u: vec![],
            v: vec![],
            z: QuantumRapidities::Inhomogeneous(vec![c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0)]),
            eta: ETA,
        };
        assert_eq!(slavnov_restricted(&e).unwrap(), c(1.0, 0.0));
        assert_eq!(slavnov_hom(&hom(3, &[], &[])).unwrap(), c(1.0, 0.0));
        let mut rng = StdRng::seed_from_u64(3);
        let u: Vec<Complex> = (0..3).map(|_| rc(&mut rng)).collect();
        let z: Vec<Complex> = (0..3).map(|_| rc(&mut rng)).collect();
        let input = SlavnovInput {
            l: 3,
            n1: 3,
            n2: 0,
            u: u.clone(),
            v: vec![],
            z: QuantumRapidities::Inhomogeneous(z.clone()),
            eta: ETA,
        };
        assert!(
            rel_err(
                slavnov_restricted(&input).unwrap(),
                izergin(&u, &z, ETA).unwrap()
            ) < 1e-12
        );
    }

    #[test]
    fn zero_down_spins_reduce_to_dwpf_on_first_columns() {
        // S[L, N1, 0] equals the partition function on the first N1 columns.
        let wt = VertexWeights::default();
        for (l, modes) in [(4usize, vec![1i64, 3]), (6, vec![1, 3, 5]), (5, vec![2])] {
            let u = roots(l, &modes);
            let zs = vec![Z0; u.len()];
            let s = slavnov_hom(&hom(l, &u, &[])).unwrap();
            let z = izergin_hom(&u, Z0, ETA).unwrap();
            assert!(rel_err(s, z) < 1e-10, "L={l}: {s} vs {z}");
            let b = brute_restricted(l, u.len(), 0, &u, &[], &vec![Z0; l], &wt).unwrap();
            assert!(rel_err(b, brute_dwpf(&u, &zs, &wt).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn slavnov_hom_matches_lattice() {
        let wt = VertexWeights::default();
        let s = 1.0 / (2.0 * 3f64.sqrt());
        let u = [c(s, 0.0), c(-s, 0.0)];
        let v = [c(0.37, -0.21)];
        let a = slavnov_hom(&hom(4, &u, &v)).unwrap();
        let b = brute_restricted(4, 2, 1, &u, &v, &[Z0; 4], &wt).unwrap();
        assert!(rel_err(a, b) < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn slavnov_restricted_matches_lattice_with_continued_roots() {
        use crate::algebraic_bethe::continue_roots;
        let wt = VertexWeights::default();
        let start = solve_bethe(4, 2, &Seed::Modes(vec![1, 3]), 1e-12).unwrap();
        let z: Vec<Complex> = (1..=4).map(|j| Z0 + 1e-2 * j as f64).collect();
        let u = continue_roots(&start, &z, 1e-12).unwrap();
        let mut rng = StdRng::seed_from_u64(77);
        for n2 in 0..=2 {
            let v: Vec<Complex> = (0..n2).map(|_| rc(&mut rng)).collect();
            let input = SlavnovInput {
                l: 4,
                n1: 2,
                n2,
                u: u.clone(),
                v: v.clone(),
                z: QuantumRapidities::Inhomogeneous(z.clone()),
                eta: ETA,
            };
            let a = slavnov_restricted(&input).unwrap();
            let b = brute_restricted(4, 2, n2, &u, &v, &z, &wt).unwrap();
            assert!(rel_err(a, b) < 1e-9, "N2={n2}: {a} vs {b}");
        }
    }

    #[test]
    fn gaudin_norm_matches_explicit_vectors() {
        let wt = VertexWeights::default();
        assert_eq!(
            gaudin_norm(&GaudinInput {
                l: 4,
                u: vec![],
                z: Z0,
                eta: ETA
            })
            .unwrap(),
            c(1.0, 0.0)
        );
        let cases: [(usize, Vec<i64>, Option<f64>); 5] = [
            (4, vec![1], Some(-8.0)),
            (4, vec![1, 3], Some(432.0)),
            (6, vec![1], Some(-6.0)),
            (6, vec![2], Some(-18.0)),
            (6, vec![1, 5], None),
        ];
        for (l, modes, frozen) in cases {
            let u = roots(l, &modes);
            let g = gaudin_norm(&GaudinInput {
                l,
                u: u.clone(),
                z: Z0,
                eta: ETA,
            })
            .unwrap();
            let e = explicit_norm(&u, &vec![Z0; l], &wt).unwrap();
            assert!(rel_err(g, e) < 1e-9, "L={l} {modes:?}: {g} vs {e}");
            if let Some(f) = frozen {
                assert!(rel_err(g, c(f, 0.0)) < 1e-9, "{g}");
            }
        }
    }

    #[test]
    fn gaudin_rejects_off_shell() {
        let r = gaudin_norm(&GaudinInput {
            l: 4,
            u: vec![c(0.3, 0.1)],
            z: Z0,
            eta: ETA,
        });
        assert!(matches!(r, Err(Error::UnverifiedRoots(_))));
        let r = slavnov_hom(&hom(4, &[c(0.3, 0.1)], &[]));
        assert!(matches!(r, Err(Error::UnverifiedRoots(_))));
    }

    #[test]
    fn gaudin_matrix_is_minus_log_jacobian() {
        let u = roots(6, &[1, 3, 5]);
        let (l, z, eta) = (6usize, Z0, ETA);
        let logf = |x: &[Complex], i: usize| -> Complex {
            let mut s = ((x[i] - z + eta).ln() - (x[i] - z).ln()) * l as f64;
            for k in 0..x.len() {
                if k != i {
                    s += (x[k] - x[i] + eta).ln() - (x[k] - x[i] - eta).ln();
                }
            }
            s
        };
        let m = gaudin_matrix(&GaudinInput {
            l,
            u: u.clone(),
            z,
            eta,
        })
        .unwrap();
        let h = 1e-6;
        for i in 0..3 {
            for j in 0..3 {
                let mut p = u.clone();
                let mut q = u.clone();
                p[j] += h;
                q[j] -= h;
                let fd = -(logf(&p, i) - logf(&q, i)) / (2.0 * h);
                assert!(
                    rel_err(fd, m[(i, j)]) < 1e-6,
                    "({i},{j}) {fd} vs {}",
                    m[(i, j)]
                );
            }
        }
    }

    #[test]
    fn permutation_invariance() {
        let mut rng = StdRng::seed_from_u64(12);
        let w: Vec<Complex> = (0..3).map(|_| rc(&mut rng)).collect();
        let z: Vec<Complex> = (0..3).map(|_| rc(&mut rng)).collect();
        let wp = vec![w[2], w[0], w[1]];
        let zp = vec![z[1], z[2], z[0]];
        assert!(
            rel_err(
                izergin(&w, &z, ETA).unwrap(),
                izergin(&wp, &zp, ETA).unwrap()
            ) < 1e-11
        );
        assert!(
            rel_err(
                izergin_hom(&w, Z0, ETA).unwrap(),
                izergin_hom(&wp, Z0, ETA).unwrap()
            ) < 1e-11
        );
        let u = roots(6, &[1, 3, 5]);
        let up = vec![u[1], u[2], u[0]];
        let v = vec![c(0.9, 0.3), c(-0.2, 0.5)];
        let vp = vec![v[1], v[0]];
        let a = slavnov_hom(&hom(6, &u, &v)).unwrap();
        let b = slavnov_hom(&hom(6, &up, &vp)).unwrap();
        assert!(rel_err(a, b) < 1e-11);
        let g1 = gaudin_norm(&GaudinInput {
            l: 6,
            u: u.clone(),
            z: Z0,
            eta: ETA,
        })
        .unwrap();
        let g2 = gaudin_norm(&GaudinInput {
            l: 6,
            u: up,
            z: Z0,
            eta: ETA,
        })
        .unwrap();
        assert!(rel_err(g1, g2) < 1e-11);
    }

    #[test]
    fn geometry_is_validated() {
        let bad = SlavnovInput {
            l: 2,
            n1: 1,
            n2: 2,
            u: vec![c(0.1, 0.0)],
            v: vec![c(0.2, 0.0), c(0.3, 0.0)],
            z: QuantumRapidities::Homogeneous(Z0),
            eta: ETA,
        };
        assert!(matches!(
            slavnov_hom_unchecked(&bad),
            Err(Error::InvalidGeometry(_))
        ));
    }
}
