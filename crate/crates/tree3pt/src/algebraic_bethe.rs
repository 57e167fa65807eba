//! Monodromy matrices, Bethe equations, Bethe states and eigenchecks.

use std::f64::consts::PI;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::numerics::{checked_diff, newton_solve, Complex, SquareMatrix, ETA, Z0};
use crate::vertex_model::{apply_b_line, apply_line, LatticeStateVector, LineKind, VertexWeights};

/// Largest chain for which dense monodromy blocks are built.
pub const MAX_MATRIX_SITES: usize = 10;
/// Largest chain for which Bethe states are built.
pub const MAX_STATE_SITES: usize = 16;
/// Bethe residual below which roots count as verified.
pub const VERIFY_TOL: f64 = 1e-8;
/// Minimum separation between distinct roots.
pub const MIN_ROOT_SEPARATION: f64 = 1e-10;

/// The four `2^L x 2^L` blocks of the monodromy matrix at spectral parameter `x`.
#[derive(Debug, Clone)]
pub struct MonodromyBlocks {
    pub l: usize,
    pub x: Complex,
    pub a: SquareMatrix,
    pub b: SquareMatrix,
    pub c: SquareMatrix,
    pub d: SquareMatrix,
}

impl MonodromyBlocks {
    pub fn block(&self, kind: LineKind) -> &SquareMatrix {
        match kind {
            LineKind::A => &self.a,
            LineKind::B => &self.b,
            LineKind::C => &self.c,
            LineKind::D => &self.d,
        }
    }
}

// R-matrix on aux (x) site, basis index 2 * aux + site, 0 = up.
fn r_entry(a: Complex, b: Complex, c: Complex, row: usize, col: usize) -> Complex {
    match (row, col) {
        (0, 0) | (3, 3) => a,
        (1, 1) | (2, 2) => b,
        (1, 2) | (2, 1) => c,
        _ => Complex::new(0.0, 0.0),
    }
}

/// Ordered product `R_{a1} R_{a2} ... R_{aL}` of R-matrices, one per site,
/// split into its auxiliary-space blocks `[[A, B], [C, D]]`.
pub fn build_monodromy(
    x: Complex,
    z_list: &[Complex],
    w: &VertexWeights,
) -> Result<MonodromyBlocks> {
    let l = z_list.len();
    if l > MAX_MATRIX_SITES {
        return Err(Error::TooLarge(format!(
            "dense monodromy blocks are limited to {MAX_MATRIX_SITES} sites"
        )));
    }
    let dim = 1usize << l;
    let mut m = [
        [SquareMatrix::identity(dim), SquareMatrix::zeros(dim)],
        [SquareMatrix::zeros(dim), SquareMatrix::identity(dim)],
    ];
    for (k, &z) in z_list.iter().enumerate() {
        let (a, b, c) = w.abc(x, z)?;
        let bit = 1usize << k;
        let mut next = [
            [SquareMatrix::zeros(dim), SquareMatrix::zeros(dim)],
            [SquareMatrix::zeros(dim), SquareMatrix::zeros(dim)],
        ];
        for alpha in 0..2 {
            for gamma in 0..2 {
                let out = &mut next[alpha][gamma];
                for beta in 0..2 {
                    let left = &m[alpha][beta];
                    for col in 0..dim {
                        let s = usize::from(col & bit != 0);
                        for s_out in 0..2 {
                            let r = r_entry(a, b, c, 2 * beta + s_out, 2 * gamma + s);
                            if r == Complex::new(0.0, 0.0) {
                                continue;
                            }
                            let mid = if s_out == 1 { col | bit } else { col & !bit };
                            for row in 0..dim {
                                out[(row, col)] += left[(row, mid)] * r;
                            }
                        }
                    }
                }
            }
        }
        m = next;
    }
    let [[a, b], [c, d]] = m;
    Ok(MonodromyBlocks { l, x, a, b, c, d })
}

/// Multiplicative Bethe residuals
/// `|prod_j a(u_i, z_j) * prod_{k != i} (u_i-u_k-eta)/(u_i-u_k+eta) - 1|`
/// for arbitrary quantum rapidities.
pub fn bethe_residual_inhom(
    u_list: &[Complex],
    z_list: &[Complex],
    eta: Complex,
) -> Result<Vec<f64>> {
    let n = u_list.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let ui = u_list[i];
        let mut lhs = Complex::new(1.0, 0.0);
        for &z in z_list {
            let d = checked_diff(ui, z, "Bethe root and quantum rapidity")?;
            lhs *= (d + eta) / d;
        }
        for k in 0..n {
            if k == i {
                continue;
            }
            let d = checked_diff(ui, u_list[k], "Bethe roots")?;
            let den = checked_diff(d, -eta, "Bethe roots differing by eta")?;
            lhs *= (d - eta) / den;
        }
        out.push((lhs - 1.0).norm());
    }
    Ok(out)
}

/// Bethe residuals on a homogeneous chain of length `l`.
pub fn bethe_residual(u_list: &[Complex], l: usize, z: Complex, eta: Complex) -> Result<Vec<f64>> {
    bethe_residual_inhom(u_list, &vec![z; l], eta)
}

pub fn max_residual(r: &[f64]) -> f64 {
    r.iter().copied().fold(0.0, f64::max)
}

/// How the solver is seeded.
#[derive(Debug, Clone, PartialEq)]
pub enum Seed {
    /// Mode numbers `m`; only `m mod L` matters.
    Modes(Vec<i64>),
    /// Explicit starting rapidities.
    Guesses(Vec<Complex>),
}

/// A set of magnon rapidities for a homogeneous chain.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheRoots {
    l: usize,
    eta: Complex,
    z: Complex,
    roots: Vec<Complex>,
    residual: f64,
    mode_numbers: Option<Vec<i64>>,
}

impl BetheRoots {
    /// Wraps rapidities and records their Bethe residual.
    pub fn new(l: usize, z: Complex, eta: Complex, roots: Vec<Complex>) -> Result<Self> {
        let residual = max_residual(&bethe_residual(&roots, l, z, eta)?);
        Ok(BetheRoots {
            l,
            eta,
            z,
            roots,
            residual,
            mode_numbers: None,
        })
    }

    /// Roots at the default point `z = i/2`, `eta = i`.
    pub fn at_default(l: usize, roots: Vec<Complex>) -> Result<Self> {
        Self::new(l, Z0, ETA, roots)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.roots.len()
    }

    pub fn eta(&self) -> Complex {
        self.eta
    }

    pub fn z(&self) -> Complex {
        self.z
    }

    pub fn roots(&self) -> &[Complex] {
        &self.roots
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn mode_numbers(&self) -> Option<&[i64]> {
        self.mode_numbers.as_deref()
    }

    pub fn is_verified(&self) -> bool {
        self.residual <= VERIFY_TOL && min_separation(&self.roots) > MIN_ROOT_SEPARATION
    }

    /// The same roots in a different order.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        BetheRoots {
            roots: perm.iter().map(|&p| self.roots[p]).collect(),
            ..self.clone()
        }
    }
}

fn min_separation(roots: &[Complex]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            best = best.min((roots[i] - roots[j]).norm());
        }
    }
    best
}

/// Momentum `-i [Log(u-z+eta) - Log(u-z)]` summed over sites, and its derivative.
fn momentum(u: Complex, z_list: &[Complex], eta: Complex) -> (Complex, Complex) {
    let i = Complex::new(0.0, 1.0);
    let mut p = Complex::new(0.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for &z in z_list {
        let d = u - z;
        p += -i * ((d + eta).ln() - d.ln());
        dp += -i * ((d + eta).inv() - d.inv());
    }
    (p, dp)
}

/// Scattering phase `-i [Log(x+eta) - Log(x-eta)]` and its derivative.
fn scattering(x: Complex, eta: Complex) -> (Complex, Complex) {
    let i = Complex::new(0.0, 1.0);
    (
        -i * ((x + eta).ln() - (x - eta).ln()),
        -i * ((x + eta).inv() - (x - eta).inv()),
    )
}

struct LogSystem<'a> {
    z_list: &'a [Complex],
    eta: Complex,
    branches: Vec<f64>,
}

impl LogSystem<'_> {
    fn phases(&self, u: &[Complex]) -> Vec<Complex> {
        let n = u.len();
        (0..n)
            .map(|i| {
                let mut f = momentum(u[i], self.z_list, self.eta).0;
                for j in 0..n {
                    if j != i {
                        f -= scattering(u[i] - u[j], self.eta).0;
                    }
                }
                f
            })
            .collect()
    }

    fn residual(&self, u: &[Complex]) -> Result<Vec<Complex>> {
        let r: Vec<Complex> = self
            .phases(u)
            .into_iter()
            .zip(&self.branches)
            .map(|(f, b)| f - 2.0 * PI * b)
            .collect();
        if r.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::InvalidInput("Bethe phase is not finite".into()));
        }
        Ok(r)
    }

    fn jacobian(&self, u: &[Complex]) -> Result<SquareMatrix> {
        let n = u.len();
        let mut jac = SquareMatrix::zeros(n);
        for i in 0..n {
            jac[(i, i)] = momentum(u[i], self.z_list, self.eta).1;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let dth = scattering(u[i] - u[j], self.eta).1;
                jac[(i, i)] -= dth;
                jac[(i, j)] += dth;
            }
        }
        Ok(jac)
    }
}

const LOG_TOL: f64 = 1e-13;
const MAX_ITER: usize = 100;

fn newton_log(system: &LogSystem, x0: &[Complex]) -> Result<Vec<Complex>> {
    let res = |u: &[Complex]| system.residual(u);
    let jac = |u: &[Complex]| system.jacobian(u);
    match newton_solve(&res, Some(&jac), x0, LOG_TOL, MAX_ITER) {
        Ok(u) => Ok(u),
        // Stagnation right at the rounding floor still yields usable roots;
        // the multiplicative check afterwards decides.
        Err(Error::NoConvergence { best, residual, .. }) if residual < 1e-10 => Ok(best),
        Err(e) => Err(e),
    }
}

fn check_roots(
    roots: &[Complex],
    z_list: &[Complex],
    eta: Complex,
    tol: f64,
    iterations: usize,
) -> Result<f64> {
    let sep = min_separation(roots);
    if sep <= MIN_ROOT_SEPARATION {
        return Err(Error::CollidingRoots(sep));
    }
    let residual = max_residual(&bethe_residual_inhom(roots, z_list, eta)?);
    if !(residual <= tol) {
        return Err(Error::NoConvergence {
            best: roots.to_vec(),
            residual,
            iterations,
        });
    }
    Ok(residual)
}

/// Solves the Bethe equations on a homogeneous chain in logarithmic form.
///
/// Mode numbers `m` seed `u = z + eta / (exp(2 pi i m / L) - 1)`, which is
/// `cot(pi m / L) / 2` at the default point, and fix the branch integers
/// `I_k = m_k - #{j : m_j < m_k}` (with `m` reduced mod `L`).
pub fn solve_bethe_at(
    l: usize,
    n: usize,
    seed: &Seed,
    tol: f64,
    z: Complex,
    eta: Complex,
) -> Result<BetheRoots> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if l == 0 || n > l {
        return Err(Error::InvalidInput(format!(
            "need 0 <= N <= L and L >= 1, got L={l}, N={n}"
        )));
    }
    let z_list = vec![z; l];
    let (x0, branches, modes) = match seed {
        Seed::Modes(ms) => {
            if ms.len() != n {
                return Err(Error::InvalidInput(format!(
                    "{} mode numbers for N = {n}",
                    ms.len()
                )));
            }
            let reduced: Vec<i64> = ms.iter().map(|m| m.rem_euclid(l as i64)).collect();
            if let Some(m) = ms.iter().find(|m| m.rem_euclid(l as i64) == 0) {
                return Err(Error::InvalidInput(format!(
                    "mode number {m} is 0 mod L and puts a root at infinity"
                )));
            }
            for i in 0..n {
                for j in i + 1..n {
                    if reduced[i] == reduced[j] {
                        return Err(Error::CollidingRoots(0.0));
                    }
                }
            }
            let x0: Vec<Complex> = reduced
                .iter()
                .map(|&m| {
                    let phase = Complex::from_polar(1.0, 2.0 * PI * m as f64 / l as f64);
                    z + eta / (phase - 1.0)
                })
                .collect();
            let branches: Vec<f64> = reduced
                .iter()
                .map(|&m| (m - reduced.iter().filter(|&&k| k < m).count() as i64) as f64)
                .collect();
            for i in 0..n {
                for j in i + 1..n {
                    if branches[i] == branches[j] {
                        // Equal branch integers with a symmetric system pin
                        // both rapidities to the same point.
                        return Err(Error::CollidingRoots(0.0));
                    }
                }
            }
            (x0, branches, Some(ms.clone()))
        }
        Seed::Guesses(g) => {
            if g.len() != n {
                return Err(Error::InvalidInput(format!(
                    "{} guesses for N = {n}",
                    g.len()
                )));
            }
            let probe = LogSystem {
                z_list: &z_list,
                eta,
                branches: vec![0.0; n],
            };
            let branches = probe
                .phases(g)
                .iter()
                .map(|f| (f.re / (2.0 * PI)).round())
                .collect();
            (g.clone(), branches, None)
        }
    };
    let system = LogSystem {
        z_list: &z_list,
        eta,
        branches,
    };
    let roots = newton_log(&system, &x0)?;
    let residual = check_roots(&roots, &z_list, eta, tol, MAX_ITER)?;
    Ok(BetheRoots {
        l,
        eta,
        z,
        roots,
        residual,
        mode_numbers: modes,
    })
}

/// [`solve_bethe_at`] at `z = i/2`, `eta = i`.
pub fn solve_bethe(l: usize, n: usize, seed: &Seed, tol: f64) -> Result<BetheRoots> {
    solve_bethe_at(l, n, seed, tol, Z0, ETA)
}

/// Every solution reachable from a set of `n` distinct mode numbers in
/// `1..L`, in lexicographic order of the modes. Seeds that fail to converge
/// or collapse onto coincident roots are skipped.
pub fn solutions_from_modes(l: usize, n: usize, tol: f64) -> Vec<BetheRoots> {
    if n == 0 {
        return vec![BetheRoots {
            l,
            eta: ETA,
            z: Z0,
            roots: vec![],
            residual: 0.0,
            mode_numbers: Some(vec![]),
        }];
    }
    (1..l as i64)
        .combinations(n)
        .filter_map(|modes| solve_bethe(l, n, &Seed::Modes(modes), tol).ok())
        .collect()
}

/// Follows solved roots to new quantum rapidities `z_list` by Newton
/// iteration on the logarithmic equations, keeping the branch integers of
/// the starting point.
pub fn continue_roots(start: &BetheRoots, z_list: &[Complex], tol: f64) -> Result<Vec<Complex>> {
    if z_list.len() != start.l {
        return Err(Error::InvalidInput(
            "continuation must keep the chain length".into(),
        ));
    }
    let hom = vec![start.z; start.l];
    let probe = LogSystem {
        z_list: &hom,
        eta: start.eta,
        branches: vec![0.0; start.n()],
    };
    let branches = probe
        .phases(&start.roots)
        .iter()
        .map(|f| (f.re / (2.0 * PI)).round())
        .collect();
    let system = LogSystem {
        z_list,
        eta: start.eta,
        branches,
    };
    let roots = newton_log(&system, &start.roots)?;
    check_roots(&roots, z_list, start.eta, tol, MAX_ITER)?;
    Ok(roots)
}

/// `B(u_N) ... B(u_1)` applied to the all-up state.
#[derive(Debug, Clone)]
pub struct BetheState {
    pub roots: Vec<Complex>,
    pub z_list: Vec<Complex>,
    pub vector: LatticeStateVector,
}

pub fn build_bethe_state(
    u_list: &[Complex],
    z_list: &[Complex],
    w: &VertexWeights,
) -> Result<BetheState> {
    let l = z_list.len();
    if l > MAX_STATE_SITES {
        return Err(Error::TooLarge(format!(
            "Bethe states are limited to {MAX_STATE_SITES} sites"
        )));
    }
    if u_list.len() > l {
        return Err(Error::InvalidInput(format!(
            "{} magnons on {l} sites",
            u_list.len()
        )));
    }
    let mut v = LatticeStateVector::reference(l)?;
    for &u in u_list {
        v = apply_b_line(u, z_list, &v, w)?;
    }
    Ok(BetheState {
        roots: u_list.to_vec(),
        z_list: z_list.to_vec(),
        vector: v,
    })
}

/// Bethe state for verified roots on their homogeneous chain.
pub fn bethe_state_of(roots: &BetheRoots) -> Result<BetheState> {
    let w = VertexWeights::new(roots.eta)?;
    build_bethe_state(&roots.roots, &vec![roots.z; roots.l], &w)
}

/// Transfer-matrix eigencheck with `T(x) = A(x) + D(x)`.
///
/// The eigenvalue is the Rayleigh quotient `psi^H T psi / psi^H psi`; the
/// residual is `max |T psi - lambda psi| / max |psi|`.
pub fn eigencheck(state: &BetheState, x: Complex, w: &VertexWeights) -> Result<(Complex, f64)> {
    let psi = state.vector.amps();
    let scale = psi.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::InvalidInput("eigencheck of the zero vector".into()));
    }
    let a = apply_line(LineKind::A, x, &state.z_list, &state.vector, w)?;
    let d = apply_line(LineKind::D, x, &state.z_list, &state.vector, w)?;
    let t: Vec<Complex> = a.amps().iter().zip(d.amps()).map(|(p, q)| p + q).collect();
    let num: Complex = psi.iter().zip(&t).map(|(p, q)| p.conj() * q).sum();
    let den: f64 = psi.iter().map(|p| p.norm_sqr()).sum();
    let lambda = num / den;
    let resid = t
        .iter()
        .zip(psi)
        .map(|(q, p)| (q - lambda * p).norm())
        .fold(0.0, f64::max);
    Ok((lambda, resid / scale))
}

/// `B(u_N) ... B(u_1)|0>` from explicit monodromy blocks.
pub fn monodromy_state(
    u_list: &[Complex],
    z_list: &[Complex],
    w: &VertexWeights,
) -> Result<Vec<Complex>> {
    let mut v = LatticeStateVector::reference(z_list.len())?.into_amps();
    for &u in u_list {
        v = build_monodromy(u, z_list, w)?.b.mul_vec(&v);
    }
    Ok(v)
}

/// `<0| C(u_1) ... C(u_N) B(u_N) ... B(u_1) |0>` from explicit monodromy
/// blocks, without complex conjugation.
pub fn explicit_norm(u_list: &[Complex], z_list: &[Complex], w: &VertexWeights) -> Result<Complex> {
    let mut v = monodromy_state(u_list, z_list, w)?;
    for &u in u_list.iter().rev() {
        v = build_monodromy(u, z_list, w)?.c.mul_vec(&v);
    }
    Ok(v[0])
}
