//! Six-vertex weights and brute-force lattice partition functions.
//!
//! A state of a length-`L` row is a bitmask: bit `j` set means column `j`
//! (counted from the left) carries a down arrow. A horizontal line is
//! transferred across the row by sweeping the columns from right to left
//! with the horizontal arrow as a two-state carry, which costs `O(L 2^L)`.

use crate::error::{Error, Result};
use crate::numerics::{checked_diff, Complex};

/// Largest row handled by the line-transfer oracle.
pub const MAX_SITES: usize = 24;

/// Rational six-vertex weights with crossing parameter `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexWeights {
    eta: Complex,
}

impl VertexWeights {
    pub fn new(eta: Complex) -> Result<Self> {
        if !(eta.norm() > 0.0) || !eta.re.is_finite() || !eta.im.is_finite() {
            return Err(Error::InvalidInput("eta must be finite and nonzero".into()));
        }
        Ok(VertexWeights { eta })
    }

    pub fn eta(&self) -> Complex {
        self.eta
    }

    /// `(a, b, c)` at spectral parameters `u`, `z`.
    pub fn abc(&self, u: Complex, z: Complex) -> Result<(Complex, Complex, Complex)> {
        let d = checked_diff(u, z, "vertex weight")?;
        Ok(((d + self.eta) / d, Complex::new(1.0, 0.0), self.eta / d))
    }
}

impl Default for VertexWeights {
    fn default() -> Self {
        VertexWeights {
            eta: crate::numerics::ETA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    A,
    B,
    C,
}

/// `a = (u-z+eta)/(u-z)`, `b = 1`, `c = eta/(u-z)`.
pub fn weight(kind: WeightKind, u: Complex, z: Complex, w: &VertexWeights) -> Result<Complex> {
    match kind {
        WeightKind::B => Ok(Complex::new(1.0, 0.0)),
        WeightKind::A => Ok(w.abc(u, z)?.0),
        WeightKind::C => Ok(w.abc(u, z)?.2),
    }
}

/// A basis state of a length-`l` row; bit `j` of `mask` set means a down
/// arrow in column `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinBasisIndex {
    l: usize,
    mask: usize,
}

impl SpinBasisIndex {
    pub fn new(l: usize, mask: usize) -> Result<Self> {
        check_size(l)?;
        if mask >= 1 << l {
            return Err(Error::InvalidInput(format!(
                "mask {mask} out of range for L = {l}"
            )));
        }
        Ok(SpinBasisIndex { l, mask })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn mask(&self) -> usize {
        self.mask
    }

    /// Number of down arrows.
    pub fn magnons(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Twice the net spin: up arrows minus down arrows.
    pub fn net_spin(&self) -> i64 {
        self.l as i64 - 2 * self.magnons() as i64
    }
}

/// Amplitudes over the `2^L` basis states of a row.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeStateVector {
    l: usize,
    amps: Vec<Complex>,
}

impl LatticeStateVector {
    pub fn new(l: usize, amps: Vec<Complex>) -> Result<Self> {
        check_size(l)?;
        if amps.len() != 1 << l {
            return Err(Error::InvalidInput(format!(
                "expected {} amplitudes for L = {l}, got {}",
                1usize << l,
                amps.len()
            )));
        }
        Ok(LatticeStateVector { l, amps })
    }

    pub fn zeros(l: usize) -> Result<Self> {
        check_size(l)?;
        Ok(LatticeStateVector {
            l,
            amps: vec![Complex::new(0.0, 0.0); 1 << l],
        })
    }

    /// Unit amplitude on a single basis mask.
    pub fn basis(l: usize, mask: usize) -> Result<Self> {
        let mut v = Self::zeros(l)?;
        if mask >= v.amps.len() {
            return Err(Error::InvalidInput(format!(
                "mask {mask} out of range for L = {l}"
            )));
        }
        v.amps[mask] = Complex::new(1.0, 0.0);
        Ok(v)
    }

    /// All arrows up.
    pub fn reference(l: usize) -> Result<Self> {
        Self::basis(l, 0)
    }

    /// All arrows down.
    pub fn dual_reference(l: usize) -> Result<Self> {
        Self::basis(l, (1 << l) - 1)
    }

    pub fn len_sites(&self) -> usize {
        self.l
    }

    pub fn amps(&self) -> &[Complex] {
        &self.amps
    }

    pub fn amp(&self, mask: usize) -> Complex {
        self.amps[mask]
    }

    pub fn into_amps(self) -> Vec<Complex> {
        self.amps
    }
}

fn check_size(l: usize) -> Result<()> {
    if l > MAX_SITES {
        return Err(Error::TooLarge(format!(
            "L = {l} exceeds {MAX_SITES} sites"
        )));
    }
    Ok(())
}

/// The four line types, named after the monodromy entries they realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    A,
    B,
    C,
    D,
}

impl LineKind {
    /// Carry entering at the right boundary and required at the left one
    /// (0 = up, 1 = down in the auxiliary space).
    fn boundary(self) -> (usize, usize) {
        match self {
            LineKind::A => (0, 0),
            LineKind::B => (1, 0),
            LineKind::C => (0, 1),
            LineKind::D => (1, 1),
        }
    }
}

/// Transfers one horizontal line with rapidity `u` across the row.
pub fn apply_line(
    kind: LineKind,
    u: Complex,
    z_list: &[Complex],
    v: &LatticeStateVector,
    w: &VertexWeights,
) -> Result<LatticeStateVector> {
    if z_list.len() != v.l {
        return Err(Error::InvalidInput(format!(
            "{} quantum rapidities for a row of {} sites",
            z_list.len(),
            v.l
        )));
    }
    let weights = z_list
        .iter()
        .map(|&z| w.abc(u, z))
        .collect::<Result<Vec<_>>>()?;
    let (enter, leave) = kind.boundary();
    let zero = Complex::new(0.0, 0.0);
    let size = v.amps.len();
    let mut cur = [vec![zero; size], vec![zero; size]];
    cur[enter].copy_from_slice(&v.amps);
    for j in (0..v.l).rev() {
        let (a, b, c) = weights[j];
        let mut next = [vec![zero; size], vec![zero; size]];
        for carry in 0..2 {
            for (mask, &amp) in cur[carry].iter().enumerate() {
                if amp == zero {
                    continue;
                }
                let q = (mask >> j) & 1;
                if q == carry {
                    next[carry][mask] += a * amp;
                } else {
                    next[carry][mask] += b * amp;
                    next[q][mask ^ (1 << j)] += c * amp;
                }
            }
        }
        cur = next;
    }
    let [up, down] = cur;
    let amps = if leave == 0 { up } else { down };
    Ok(LatticeStateVector { l: v.l, amps })
}

/// One B-line: adds a down arrow.
pub fn apply_b_line(
    u: Complex,
    z_list: &[Complex],
    v: &LatticeStateVector,
    w: &VertexWeights,
) -> Result<LatticeStateVector> {
    apply_line(LineKind::B, u, z_list, v, w)
}

/// One C-line: removes a down arrow.
pub fn apply_c_line(
    u: Complex,
    z_list: &[Complex],
    v: &LatticeStateVector,
    w: &VertexWeights,
) -> Result<LatticeStateVector> {
    apply_line(LineKind::C, u, z_list, v, w)
}

/// Domain-wall partition function from `N` B-lines on the all-up row.
pub fn brute_dwpf(w_list: &[Complex], z_list: &[Complex], wt: &VertexWeights) -> Result<Complex> {
    let n = w_list.len();
    if z_list.len() != n {
        return Err(Error::InvalidInput(
            "DWPF needs as many lines as columns".into(),
        ));
    }
    let mut v = LatticeStateVector::reference(n)?;
    for &u in w_list.iter().rev() {
        v = apply_b_line(u, z_list, &v, wt)?;
    }
    Ok(v.amp((1 << n) - 1))
}

/// The same partition function with every arrow reversed: `N` C-lines on
/// the all-down row, projected on the all-up row.
pub fn brute_dwpf_dual(
    w_list: &[Complex],
    z_list: &[Complex],
    wt: &VertexWeights,
) -> Result<Complex> {
    let n = w_list.len();
    if z_list.len() != n {
        return Err(Error::InvalidInput(
            "DWPF needs as many lines as columns".into(),
        ));
    }
    let mut v = LatticeStateVector::dual_reference(n)?;
    for &u in w_list.iter().rev() {
        v = apply_c_line(u, z_list, &v, wt)?;
    }
    Ok(v.amp(0))
}

/// Mask with the lowest `n3` bits set: down arrows in the first `n3` columns.
pub fn low_mask(n3: usize) -> usize {
    (1usize << n3) - 1
}

/// Restricted scalar product by line transfer: `N1` B-lines on the all-up
/// row, then `N2` C-lines, read off on the state with down arrows in the
/// first `N1 - N2` columns.
pub fn brute_restricted(
    l: usize,
    n1: usize,
    n2: usize,
    u_list: &[Complex],
    v_list: &[Complex],
    z_list: &[Complex],
    wt: &VertexWeights,
) -> Result<Complex> {
    if !(n2 <= n1 && n1 <= l) || u_list.len() != n1 || v_list.len() != n2 || z_list.len() != l {
        return Err(Error::InvalidGeometry(format!(
            "need 0 <= N2 <= N1 <= L with matching lists; got L={l}, N1={n1}, N2={n2}, |u|={}, |v|={}, |z|={}",
            u_list.len(),
            v_list.len(),
            z_list.len()
        )));
    }
    let mut x = LatticeStateVector::reference(l)?;
    for &u in u_list.iter().rev() {
        x = apply_b_line(u, z_list, &x, wt)?;
    }
    for &v in v_list.iter().rev() {
        x = apply_c_line(v, z_list, &x, wt)?;
    }
    Ok(x.amp(low_mask(n1 - n2)))
}
