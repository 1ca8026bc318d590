use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::cone::{pulling_triangulation, RationalCone};
use crate::error::{Error, Result};
use crate::lattice::{dot, is_zero, smith_normal_form, IntegerMatrix, LatticeVector};

/// Largest cone dimension accepted by [`hilbert_basis`].
pub const MAX_HILBERT_DIM: usize = 5;
/// Largest number of candidate points examined by [`hilbert_basis`].
pub const MAX_HILBERT_CANDIDATES: usize = 1_000_000;

/// Nonzero lattice points of the half-open parallelepiped `sum [0,1) r_i`,
/// where `rows` is a nonsingular square matrix of ray coordinates.
pub(crate) fn parallelepiped_points(rows: &IntegerMatrix) -> Result<Vec<LatticeVector>> {
    let det = rows.determinant().abs();
    if det.is_zero() {
        return Err(Error::InvalidArgument("singular simplicial cone".into()));
    }
    if det > BigInt::from(MAX_HILBERT_CANDIDATES) {
        return Err(Error::Capacity(format!(
            "parallelepiped with {det} points exceeds {MAX_HILBERT_CANDIDATES}"
        )));
    }
    let k = rows.rows();
    let adj = rows.adjugate();
    let signed_det = rows.determinant();
    // Cosets of Z^k modulo the row lattice: w * V^{-1} with 0 <= w_i < d_i.
    let snf = smith_normal_form(rows);
    let diag: Vec<usize> = snf
        .diagonal()
        .iter()
        .map(|d| d.to_usize().expect("bounded by capacity"))
        .collect();
    let mut out = Vec::new();
    let mut w = vec![0usize; k];
    loop {
        if w.iter().any(|&x| x != 0) {
            let wb: LatticeVector = w.iter().map(|&x| BigInt::from(x)).collect();
            let p = snf.v_inv.left_apply(&wb);
            // Barycentric numerators: p * adj = lambda * det.
            let lam = adj.left_apply(&p);
            let shift: LatticeVector = lam.iter().map(|l| l.div_floor(&signed_det)).collect();
            let reduced = crate::lattice::sub(&p, &rows.left_apply(&shift));
            if !is_zero(&reduced) {
                out.push(reduced);
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                return Ok(out);
            }
            w[i] += 1;
            if w[i] < diag[i] {
                break;
            }
            w[i] = 0;
            i += 1;
        }
    }
}

/// The minimal generating set of the semigroup `σ ∩ Z^d`, sorted lexicographically.
pub fn hilbert_basis(cone: &RationalCone) -> Result<Vec<LatticeVector>> {
    if !cone.is_strongly_convex() {
        return Err(Error::InvalidCone(format!(
            "{cone:?} is not strongly convex; its semigroup has no Hilbert basis"
        )));
    }
    let span = cone.span();
    let k = span.dim();
    if k == 0 {
        return Ok(Vec::new());
    }
    if k > MAX_HILBERT_DIM {
        return Err(Error::Capacity(format!(
            "Hilbert basis enumeration is limited to dimension {MAX_HILBERT_DIM}, got {k}"
        )));
    }
    let h = cone.hrep();
    let facets = &h.facets_in_span;
    let degree: LatticeVector = (0..k)
        .map(|j| facets.iter().map(|f| f[j].clone()).sum())
        .collect();

    let mut candidates: BTreeSet<LatticeVector> = cone.rays().iter().map(|r| span.coords(r)).collect();
    let mut budget = MAX_HILBERT_CANDIDATES;
    for simplex in pulling_triangulation(cone) {
        let rows: Vec<LatticeVector> = simplex.rays().iter().map(|r| span.coords(r)).collect();
        let m = IntegerMatrix::from_rows(k, &rows).expect("uniform");
        let det = m.determinant().abs();
        if det > BigInt::from(budget) {
            return Err(Error::Capacity(format!(
                "Hilbert basis candidates exceed {MAX_HILBERT_CANDIDATES}"
            )));
        }
        budget -= det.to_usize().unwrap_or(0);
        candidates.extend(parallelepiped_points(&m)?);
    }

    let mut by_degree: Vec<(BigInt, LatticeVector)> = candidates
        .into_iter()
        .map(|c| (dot(&degree, &c), c))
        .collect();
    by_degree.sort();
    let mut basis: Vec<(BigInt, LatticeVector)> = Vec::new();
    for (deg, x) in by_degree {
        let reducible = basis.iter().any(|(dy, y)| {
            dy < &deg && {
                let diff = crate::lattice::sub(&x, y);
                facets.iter().all(|f| !dot(f, &diff).is_negative())
            }
        });
        if !reducible {
            basis.push((deg, x));
        }
    }
    let mut out: Vec<LatticeVector> = basis.into_iter().map(|(_, x)| span.point(&x)).collect();
    out.sort();
    Ok(out)
}
