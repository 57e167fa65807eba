//! From single-trace operators to spin chains, and the assembly of the
//! tree-level structure constant.
//!
//! Operators `O1`, `O2`, `O3` of lengths `L1`, `L2`, `L3` carry `N1`, `N2`,
//! `N3` magnons. `l_ij` counts the propagators between `O_i` and `O_j`.

use std::fmt;

use serde::Serialize;

use crate::algebraic_bethe::{build_bethe_state, BetheRoots, MAX_STATE_SITES};
use crate::determinants::{
    gaudin_norm, izergin_hom, slavnov_hom, GaudinInput, QuantumRapidities, SlavnovInput,
};
use crate::error::{Error, Result};
use crate::numerics::{ensure_finite, Complex};
use crate::vertex_model::{LatticeStateVector, SpinBasisIndex, VertexWeights};

/// Largest `O1` chain handled by [`oracle_contraction`].
pub const MAX_ORACLE_SITES: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    Z,
    X,
    Zbar,
    Xbar,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Field::Z => "Z",
            Field::X => "X",
            Field::Zbar => "Zb",
            Field::Xbar => "Xb",
        };
        f.write_str(s)
    }
}

/// The fields inside one trace, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperatorWord {
    fields: Vec<Field>,
}

impl OperatorWord {
    pub fn new(fields: Vec<Field>) -> Result<Self> {
        if fields.is_empty() {
            return Err(Error::InvalidInput(
                "an operator needs at least one field".into(),
            ));
        }
        Ok(OperatorWord { fields })
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Tr(")?;
        for x in &self.fields {
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Parses `Tr(...)` over the tokens `Z`, `X`, `Zb`, `Xb`.
pub fn parse_trace(text: &str) -> Result<OperatorWord> {
    let err = |offset: usize, message: &str| Error::ParseError {
        offset,
        message: message.to_string(),
    };
    let bytes = text.as_bytes();
    if !text.starts_with("Tr(") {
        let offset = "Tr("
            .bytes()
            .zip(bytes)
            .take_while(|(a, b)| a == *b)
            .count();
        return Err(err(offset, "expected 'Tr('"));
    }
    let mut pos = 3;
    let mut fields = Vec::new();
    loop {
        match bytes.get(pos) {
            None => return Err(err(pos, "missing ')'")),
            Some(b')') => {
                if pos + 1 != bytes.len() {
                    return Err(err(pos + 1, "trailing characters after ')'"));
                }
                break;
            }
            Some(&c @ (b'Z' | b'X')) => {
                let bar = bytes.get(pos + 1) == Some(&b'b');
                fields.push(match (c, bar) {
                    (b'Z', false) => Field::Z,
                    (b'Z', true) => Field::Zbar,
                    (b'X', false) => Field::X,
                    _ => Field::Xbar,
                });
                pos += if bar { 2 } else { 1 };
            }
            Some(_) => return Err(err(pos, "expected one of Z, X, Zb, Xb")),
        }
    }
    if fields.is_empty() {
        return Err(err(3, "empty trace"));
    }
    Ok(OperatorWord { fields })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    O1,
    O2,
    O3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Initial,
    Final,
}

/// The (up, down) fields of an operator on one side of the lattice.
pub fn sector_fields(role: Role, side: Side) -> (Field, Field) {
    use Field::*;
    match (role, side) {
        (Role::O1, Side::Initial) => (Z, X),
        (Role::O1, Side::Final) => (Zbar, Xbar),
        (Role::O2, Side::Initial) => (Zbar, Xbar),
        (Role::O2, Side::Final) => (Z, X),
        (Role::O3, Side::Initial) => (Z, Xbar),
        (Role::O3, Side::Final) => (Zbar, X),
    }
}

/// Spin basis state of a word: the down-field positions become set bits.
pub fn word_to_basis(word: &OperatorWord, role: Role, side: Side) -> Result<SpinBasisIndex> {
    let (up, down) = sector_fields(role, side);
    let mut mask = 0usize;
    for (j, &f) in word.fields.iter().enumerate() {
        if f == down {
            mask |= 1 << j;
        } else if f != up {
            return Err(Error::WrongSector(format!(
                "field {f} at site {j} is neither {up} nor {down} ({role:?}, {side:?})"
            )));
        }
    }
    SpinBasisIndex::new(word.len(), mask)
}

/// Reverses the site order of every basis state, keeping amplitudes as they are.
pub fn flip(state: &LatticeStateVector) -> LatticeStateVector {
    let l = state.len_sites();
    let mut out = vec![Complex::new(0.0, 0.0); 1 << l];
    for (m, &a) in state.amps().iter().enumerate() {
        out[reverse_bits(m, l)] = a;
    }
    LatticeStateVector::new(l, out).expect("same size as the input")
}

fn reverse_bits(m: usize, l: usize) -> usize {
    if l == 0 {
        0
    } else {
        m.reverse_bits() >> (usize::BITS as usize - l)
    }
}

/// Lengths, magnon numbers and propagator counts of a three-point function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ThreePointGeometry {
    pub l1: usize,
    pub l2: usize,
    pub l3: usize,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub l12: usize,
    pub l13: usize,
    pub l23: usize,
}

impl ThreePointGeometry {
    pub fn lengths(&self) -> [usize; 3] {
        [self.l1, self.l2, self.l3]
    }

    pub fn magnons(&self) -> [usize; 3] {
        [self.n1, self.n2, self.n3]
    }

    pub fn is_bps(&self) -> bool {
        self.n1 == 0 && self.n2 == 0 && self.n3 == 0
    }
}

fn propagators(l1: usize, l2: usize, l3: usize) -> Result<(usize, usize, usize)> {
    let (a, b, c) = (l1 as i64, l2 as i64, l3 as i64);
    if (a + b + c) % 2 != 0 {
        return Err(Error::InvalidGeometry(format!(
            "L1 + L2 + L3 = {} is odd, so propagators cannot pair all fields",
            a + b + c
        )));
    }
    let l12 = (a + b - c) / 2;
    let l13 = (a + c - b) / 2;
    let l23 = (b + c - a) / 2;
    for (name, x) in [("l12", l12), ("l13", l13), ("l23", l23)] {
        if x < 1 {
            return Err(Error::InvalidGeometry(format!(
                "{name} = {x}: extremal or impossible, all propagator counts must be positive"
            )));
        }
    }
    Ok((l12 as usize, l13 as usize, l23 as usize))
}

/// Validates a three-point geometry.
///
/// Checks, in order: `N_i <= L_i`, `N1 = N2 + N3`, integrality and
/// positivity of `l_ij = (L_i + L_j - L_k)/2`, and the sector relations
/// `l13 = N3`, `l23 = L3 - N3`, `l12 = L1 - N3`.
pub fn make_geometry(
    l1: usize,
    l2: usize,
    l3: usize,
    n1: usize,
    n2: usize,
    n3: usize,
) -> Result<ThreePointGeometry> {
    for (i, (l, n)) in [(l1, n1), (l2, n2), (l3, n3)].into_iter().enumerate() {
        if n > l {
            return Err(Error::InvalidGeometry(format!(
                "N{0} = {n} exceeds L{0} = {l}",
                i + 1
            )));
        }
    }
    if n1 != n2 + n3 {
        return Err(Error::InvalidGeometry(format!(
            "constraint N1 = N2 + N3 violated: {n1} != {n2} + {n3}"
        )));
    }
    let (l12, l13, l23) = propagators(l1, l2, l3)?;
    if l13 != n3 {
        return Err(Error::InvalidGeometry(format!(
            "relation l13 = N3 violated: (L1 + L3 - L2)/2 = {l13} but N3 = {n3}"
        )));
    }
    if l23 != l3 - n3 {
        return Err(Error::InvalidGeometry(format!(
            "relation l23 = L3 - N3 violated: {l23} != {}",
            l3 - n3
        )));
    }
    if l12 != l1 - n3 {
        return Err(Error::InvalidGeometry(format!(
            "relation l12 = L1 - N3 violated: {l12} != {}",
            l1 - n3
        )));
    }
    Ok(ThreePointGeometry {
        l1,
        l2,
        l3,
        n1,
        n2,
        n3,
        l12,
        l13,
        l23,
    })
}

/// Geometry of three magnon-free operators. Only the propagator counts are
/// constrained, since with no magnons `l13` is not tied to `N3`.
pub fn make_bps_geometry(l1: usize, l2: usize, l3: usize) -> Result<ThreePointGeometry> {
    let (l12, l13, l23) = propagators(l1, l2, l3)?;
    Ok(ThreePointGeometry {
        l1,
        l2,
        l3,
        n1: 0,
        n2: 0,
        n3: 0,
        l12,
        l13,
        l23,
    })
}

/// The structure constant and the pieces it is assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstantResult {
    pub c: Complex,
    /// `sqrt(L1 L2 L3 / (norm1 norm2 norm3))` on the principal branch.
    pub n123: Complex,
    /// The argument of that square root.
    pub radicand: Complex,
    pub dwpf: Complex,
    pub slavnov: Complex,
    pub norms: [Complex; 3],
    pub roots: [BetheRoots; 3],
}

fn check_inputs(
    g: &ThreePointGeometry,
    u: &BetheRoots,
    v: &BetheRoots,
    w: &BetheRoots,
) -> Result<()> {
    let sets = [u, v, w];
    for (k, r) in sets.iter().enumerate() {
        if r.l() != g.lengths()[k] || r.n() != g.magnons()[k] {
            return Err(Error::InvalidGeometry(format!(
                "roots of O{} live on L = {} with N = {}, geometry wants L = {}, N = {}",
                k + 1,
                r.l(),
                r.n(),
                g.lengths()[k],
                g.magnons()[k]
            )));
        }
        if !r.is_verified() {
            return Err(Error::UnverifiedRoots(r.residual()));
        }
        if r.z() != u.z() || r.eta() != u.eta() {
            return Err(Error::InvalidInput("all roots must share z and eta".into()));
        }
    }
    Ok(())
}

fn normalization(
    g: &ThreePointGeometry,
    u: &BetheRoots,
    v: &BetheRoots,
    w: &BetheRoots,
) -> Result<([Complex; 3], Complex, Complex)> {
    let mut norms = [Complex::new(1.0, 0.0); 3];
    for (k, r) in [u, v, w].into_iter().enumerate() {
        norms[k] = gaudin_norm(&GaudinInput {
            l: r.l(),
            u: r.roots().to_vec(),
            z: r.z(),
            eta: r.eta(),
        })?;
    }
    let lengths = (g.l1 * g.l2 * g.l3) as f64;
    let radicand = ensure_finite(lengths / (norms[0] * norms[1] * norms[2]), "normalization")?;
    Ok((norms, radicand, radicand.sqrt()))
}

/// `c = N123 * Z(w) * S[L1, N1, N2](u, v)` at the common homogeneous point.
pub fn structure_constant(
    g: &ThreePointGeometry,
    u: &BetheRoots,
    v: &BetheRoots,
    w: &BetheRoots,
) -> Result<StructureConstantResult> {
    check_inputs(g, u, v, w)?;
    let (norms, radicand, n123) = normalization(g, u, v, w)?;
    let dwpf = izergin_hom(w.roots(), w.z(), w.eta())?;
    let slavnov = slavnov_hom(&SlavnovInput {
        l: g.l1,
        n1: g.n1,
        n2: g.n2,
        u: u.roots().to_vec(),
        v: v.roots().to_vec(),
        z: QuantumRapidities::Homogeneous(u.z()),
        eta: u.eta(),
    })?;
    Ok(StructureConstantResult {
        c: ensure_finite(n123 * dwpf * slavnov, "structure constant")?,
        n123,
        radicand,
        dwpf,
        slavnov,
        norms,
        roots: [u.clone(), v.clone(), w.clone()],
    })
}

/// The same quantity by explicit contraction of state vectors.
///
/// `O2` and `O3` are flipped; the last `l13` sites of flipped `O3` and the
/// first `l12` sites of flipped `O2` are contracted with the two tensor
/// factors of `O1` (first `l13` sites, then the remaining `l12`), all other
/// sites of `O2` and `O3` being projected on up arrows. The result carries
/// the same normalization factor as [`structure_constant`].
pub fn oracle_contraction(
    g: &ThreePointGeometry,
    u: &BetheRoots,
    v: &BetheRoots,
    w: &BetheRoots,
) -> Result<Complex> {
    check_inputs(g, u, v, w)?;
    if g.l1 > MAX_ORACLE_SITES || g.l2 > MAX_STATE_SITES || g.l3 > MAX_STATE_SITES {
        return Err(Error::TooLarge(format!(
            "oracle contraction is limited to L1 <= {MAX_ORACLE_SITES}"
        )));
    }
    if g.l12 + g.l13 != g.l1 || g.l12 == 0 || g.l13 == 0 {
        return Err(Error::InvalidGeometry("propagators do not split O1".into()));
    }
    let (_, _, n123) = normalization(g, u, v, w)?;
    let wt = VertexWeights::new(u.eta())?;
    let state = |r: &BetheRoots| build_bethe_state(r.roots(), &vec![r.z(); r.l()], &wt);
    let o1 = state(u)?.vector;
    let f2 = flip(&state(v)?.vector);
    let f3 = flip(&state(w)?.vector);
    let shift3 = g.l3 - g.l13;
    let mut total = Complex::new(0.0, 0.0);
    for m3 in 0..1usize << g.l13 {
        let r3 = f3.amp(m3 << shift3);
        if r3 == Complex::new(0.0, 0.0) {
            continue;
        }
        for m2 in 0..1usize << g.l12 {
            total += r3 * f2.amp(m2) * o1.amp(m3 | (m2 << g.l13));
        }
    }
    ensure_finite(n123 * total, "oracle contraction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic_bethe::{solve_bethe, Seed};
    use crate::numerics::{c, rel_err};
    use proptest::prelude::*;

    fn roots(l: usize, modes: &[i64]) -> BetheRoots {
        solve_bethe(l, modes.len(), &Seed::Modes(modes.to_vec()), 1e-12).unwrap()
    }

    #[test]
    fn parse_examples() {
        let w = parse_trace("Tr(ZZXZ)").unwrap();
        assert_eq!(w.fields(), &[Field::Z, Field::Z, Field::X, Field::Z]);
        assert_eq!(w.len(), 4);
        let w = parse_trace("Tr(ZbXbZb)").unwrap();
        assert_eq!(w.fields(), &[Field::Zbar, Field::Xbar, Field::Zbar]);
        assert_eq!(w.to_string(), "Tr(ZbXbZb)");
        match parse_trace("Tr(ZQ)") {
            Err(Error::ParseError { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        for bad in ["Tr()", "Tr(Z", "Tx(Z)", "Tr(Z))", ""] {
            assert!(
                matches!(parse_trace(bad), Err(Error::ParseError { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn basis_examples() {
        let m = word_to_basis(&parse_trace("Tr(ZZXZ)").unwrap(), Role::O1, Side::Initial).unwrap();
        assert_eq!(m.mask(), 0b0100);
        assert_eq!(m.net_spin(), 2);
        let m = word_to_basis(&parse_trace("Tr(ZbXb)").unwrap(), Role::O2, Side::Initial).unwrap();
        assert_eq!(m.mask(), 0b10);
        let m = word_to_basis(&parse_trace("Tr(XbZ)").unwrap(), Role::O3, Side::Initial).unwrap();
        assert_eq!(m.mask(), 0b01);
        assert!(matches!(
            word_to_basis(&parse_trace("Tr(ZbZ)").unwrap(), Role::O1, Side::Initial),
            Err(Error::WrongSector(_))
        ));
    }

    #[test]
    fn flip_examples() {
        let v = LatticeStateVector::basis(3, 0b001).unwrap();
        assert_eq!(flip(&v), LatticeStateVector::basis(3, 0b100).unwrap());
        let r = LatticeStateVector::reference(5).unwrap();
        assert_eq!(flip(&r), r);
        let e = LatticeStateVector::reference(0).unwrap();
        assert_eq!(flip(&e), e);
    }

    proptest! {
        #[test]
        fn flip_is_an_involution_preserving_popcount(
            amps in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64)
        ) {
            let v = LatticeStateVector::new(6, amps.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap();
            let f = flip(&v);
            prop_assert_eq!(&flip(&f), &v);
            for m in 0..64usize {
                prop_assert_eq!(f.amp(reverse_bits(m, 6)), v.amp(m));
                prop_assert_eq!(reverse_bits(m, 6).count_ones(), m.count_ones());
            }
        }
    }

    #[test]
    fn geometry_examples() {
        let g = make_geometry(6, 6, 4, 3, 1, 2).unwrap();
        assert_eq!((g.l12, g.l13, g.l23), (4, 2, 2));
        // (6,4,4) gives l13 = 3, which cannot equal N3 = 2.
        assert!(
            matches!(make_geometry(6, 4, 4, 3, 1, 2), Err(Error::InvalidGeometry(m)) if m.contains("l13"))
        );
        assert!(matches!(
            make_geometry(4, 4, 4, 2, 1, 1),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(
            matches!(make_geometry(4, 4, 2, 3, 1, 1), Err(Error::InvalidGeometry(m)) if m.contains("N1 = N2 + N3"))
        );
        assert!(
            matches!(make_geometry(3, 3, 3, 1, 0, 1), Err(Error::InvalidGeometry(m)) if m.contains("odd"))
        );
        let b = make_bps_geometry(2, 3, 3).unwrap();
        assert_eq!((b.l12, b.l13, b.l23), (1, 1, 2));
        assert!(make_bps_geometry(1, 1, 2).is_err());
    }

    fn recheck(l: [i64; 3], n: [i64; 3]) -> bool {
        let (l1, l2, l3) = (l[0], l[1], l[2]);
        let sum_even = (l1 + l2 + l3) % 2 == 0;
        let l12 = (l1 + l2 - l3) / 2;
        let l13 = (l1 + l3 - l2) / 2;
        let l23 = (l2 + l3 - l1) / 2;
        sum_even
            && (0..3).all(|i| n[i] <= l[i])
            && n[0] == n[1] + n[2]
            && l13 == n[2]
            && l23 == l3 - n[2]
            && l12 == l1 - n[2]
            && l12 >= 1
            && l13 >= 1
            && l23 >= 1
    }

    #[test]
    fn geometry_sweep_matches_direct_check() {
        let mut accepted = 0;
        for l1 in 0..=8 {
            for l2 in 0..=8 {
                for l3 in 0..=8 {
                    for n1 in 0..=4 {
                        for n2 in 0..=4 {
                            for n3 in 0..=4 {
                                let got = make_geometry(l1, l2, l3, n1, n2, n3);
                                let want = recheck(
                                    [l1 as i64, l2 as i64, l3 as i64],
                                    [n1 as i64, n2 as i64, n3 as i64],
                                );
                                assert_eq!(got.is_ok(), want, "{:?}", (l1, l2, l3, n1, n2, n3));
                                if let Ok(g) = got {
                                    accepted += 1;
                                    assert_eq!(g.l12 + g.l13, l1);
                                    assert_eq!(g.l12 + g.l23, l2);
                                    assert_eq!(g.l13 + g.l23, l3);
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(accepted > 0);
    }

    #[test]
    fn bps_structure_constant() {
        let g = make_bps_geometry(4, 6, 4).unwrap();
        let e = |l| BetheRoots::at_default(l, vec![]).unwrap();
        let r = structure_constant(&g, &e(4), &e(6), &e(4)).unwrap();
        let want = c((4.0f64 * 6.0 * 4.0).sqrt(), 0.0);
        assert!((r.c - want).norm() < 1e-12);
        assert_eq!((r.dwpf, r.slavnov), (c(1.0, 0.0), c(1.0, 0.0)));
        assert!((oracle_contraction(&g, &e(4), &e(6), &e(4)).unwrap() - want).norm() < 1e-12);
    }

    #[test]
    fn contraction_agrees_for_equal_lengths() {
        let g = make_geometry(4, 4, 2, 2, 1, 1).unwrap();
        let (u, w) = (roots(4, &[1, 3]), roots(2, &[1]));
        for m in [1, 3] {
            let v = roots(4, &[m]);
            let sc = structure_constant(&g, &u, &v, &w).unwrap();
            let oc = oracle_contraction(&g, &u, &v, &w).unwrap();
            assert!(rel_err(sc.c, oc) < 1e-9, "mode {m}: {} vs {oc}", sc.c);
            assert!(rel_err(sc.c, sc.n123 * sc.dwpf * sc.slavnov) == 0.0);
        }
    }

    #[test]
    fn structure_constant_permutation_invariance() {
        let g = make_geometry(6, 6, 4, 3, 1, 2).unwrap();
        let (u, v, w) = (roots(6, &[1, 3, 5]), roots(6, &[2]), roots(4, &[1, 3]));
        let a = structure_constant(&g, &u, &v, &w).unwrap().c;
        let b = structure_constant(&g, &u.permuted(&[2, 0, 1]), &v, &w.permuted(&[1, 0]))
            .unwrap()
            .c;
        assert!(rel_err(a, b) < 1e-11);
    }

    #[test]
    fn structure_constant_input_checks() {
        let g = make_geometry(4, 4, 2, 2, 1, 1).unwrap();
        let (u, v, w) = (roots(4, &[1, 3]), roots(4, &[1]), roots(2, &[1]));
        assert!(matches!(
            structure_constant(&g, &v, &u, &w),
            Err(Error::InvalidGeometry(_))
        ));
        let off = BetheRoots::at_default(4, vec![c(0.3, 0.0)]).unwrap();
        assert!(matches!(
            structure_constant(&g, &u, &off, &w),
            Err(Error::UnverifiedRoots(_))
        ));
    }
}
