//! Exact integer-lattice linear algebra.
//!
//! Everything here works over [`BigInt`]; no floating point is used anywhere
//! in the crate.

mod group;
mod matrix;
mod normal_form;

pub use group::{
    monomial_character, pairing, parse_rational, parse_residue, quotient_invariants, Character,
    FiniteDiagonalGroup, Residue, MAX_GROUP_ELEMENTS,
};
pub use matrix::IntegerMatrix;
pub use normal_form::{
    hermite_normal_form, is_hermite_form, row_lattice_basis, smith_normal_form,
    SmithDecomposition,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A vector in `Z^d`, used both for lattice points of `N` and exponents in `M`.
pub type LatticeVector = Vec<BigInt>;

pub fn vector(xs: &[i64]) -> LatticeVector {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> LatticeVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> LatticeVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[BigInt], c: &BigInt) -> LatticeVector {
    a.iter().map(|x| x * c).collect()
}

pub fn neg(a: &[BigInt]) -> LatticeVector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[BigInt]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// gcd of the entries (zero for the zero vector).
pub fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(a: &[BigInt]) -> bool {
    content(a) == BigInt::from(1)
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn primitive(a: &[BigInt]) -> LatticeVector {
    let g = content(a);
    if g.is_zero() {
        return a.to_vec();
    }
    a.iter().map(|x| x / &g).collect()
}

pub fn unit_vector(d: usize, i: usize) -> LatticeVector {
    let mut v = vec![BigInt::zero(); d];
    v[i] = BigInt::from(1);
    v
}

pub fn zero_vector(d: usize) -> LatticeVector {
    vec![BigInt::zero(); d]
}

/// Integer kernel `{x : A x = 0}` as a saturated basis (one vector per row).
pub fn integer_kernel(a: &IntegerMatrix) -> Vec<LatticeVector> {
    let s = smith_normal_form(a);
    let r = s.rank();
    (r..a.cols()).map(|j| s.v.col_vec(j)).collect()
}

/// Solves `A x = b` over the integers; returns one solution when it exists.
pub fn solve_integer(a: &IntegerMatrix, b: &[BigInt]) -> Option<LatticeVector> {
    assert_eq!(a.rows(), b.len());
    let s = smith_normal_form(a);
    let ub = s.u.apply(b);
    let diag = s.diagonal();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                let (q, r) = c.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            _ => {
                if !c.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(s.v.apply(&y))
}

/// The saturation `span_R(S) ∩ Z^d` of a set of vectors, with coordinates.
///
/// `basis` rows form a lattice basis of the saturation; `section` satisfies
/// `basis * section = I`, so a point `x` of the span has coordinates
/// `x * section`, and a functional on the span (in coordinates) extends to
/// `Z^d` via `section * f`.
#[derive(Clone, Debug)]
pub struct SpanLattice {
    pub ambient: usize,
    pub basis: IntegerMatrix,
    pub section: IntegerMatrix,
    /// Saturated basis of the orthogonal complement in the dual lattice.
    pub complement: Vec<LatticeVector>,
}

impl SpanLattice {
    pub fn of(vectors: &[LatticeVector], ambient: usize) -> Self {
        if vectors.is_empty() {
            return SpanLattice {
                ambient,
                basis: IntegerMatrix::zeros(0, ambient),
                section: IntegerMatrix::zeros(ambient, 0),
                complement: (0..ambient).map(|i| unit_vector(ambient, i)).collect(),
            };
        }
        let a = IntegerMatrix::from_rows(ambient, vectors).expect("ragged vectors");
        let s = smith_normal_form(&a);
        let k = s.rank();
        let rows: Vec<usize> = (0..k).collect();
        let all: Vec<usize> = (0..ambient).collect();
        let basis = s.v_inv.submatrix(&rows, &all);
        let section = s.v.submatrix(&all, &rows);
        let complement = (k..ambient).map(|j| s.v.col_vec(j)).collect();
        SpanLattice {
            ambient,
            basis,
            section,
            complement,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of a point of the span.
    pub fn coords(&self, x: &[BigInt]) -> LatticeVector {
        self.section.left_apply(x)
    }

    /// The ambient point with the given coordinates.
    pub fn point(&self, c: &[BigInt]) -> LatticeVector {
        self.basis.left_apply(c)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.complement.iter().all(|m| dot(m, x).is_zero())
    }

    /// Extends a functional given in span coordinates to the ambient dual lattice.
    pub fn lift_functional(&self, f: &[BigInt]) -> LatticeVector {
        self.section.apply(f)
    }

    /// Restricts an ambient functional to span coordinates.
    pub fn restrict_functional(&self, m: &[BigInt]) -> LatticeVector {
        self.basis.apply(m)
    }
}

/// Lexicographic sign of a vector: the sign of its first nonzero entry.
pub fn leading_sign(a: &[BigInt]) -> i32 {
    for x in a {
        if x.is_positive() {
            return 1;
        }
        if x.is_negative() {
            return -1;
        }
    }
    0
}

/// Reduces `x` modulo the lattice with the given row-Hermite basis, giving a
/// canonical coset representative.
pub fn reduce_modulo(x: &[BigInt], hermite_basis: &[LatticeVector]) -> LatticeVector {
    let mut out = x.to_vec();
    for row in hermite_basis {
        let Some(p) = row.iter().position(|c| !c.is_zero()) else {
            continue;
        };
        let q = out[p].div_floor(&row[p]);
        if !q.is_zero() {
            for (o, r) in out.iter_mut().zip(row) {
                *o -= &q * r;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_lattice_of_plane_in_space() {
        let span = SpanLattice::of(&[vector(&[2, 0, 2]), vector(&[0, 1, 0])], 3);
        assert_eq!(span.dim(), 2);
        assert!(span.contains(&vector(&[1, 5, 1])));
        assert!(!span.contains(&vector(&[1, 0, 0])));
        // saturation contains (1,0,1) even though only (2,0,2) was given
        let c = span.coords(&vector(&[1, 0, 1]));
        assert_eq!(span.point(&c), vector(&[1, 0, 1]));
        assert_eq!(span.complement.len(), 1);
        assert_eq!(
            primitive(&span.complement[0]).iter().map(|x| x.abs()).collect::<Vec<_>>(),
            vector(&[1, 0, 1])
        );
    }

    #[test]
    fn kernel_and_solve() {
        let a = IntegerMatrix::from_i64(&[[1, 1, 0], [0, 1, 1]]);
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).iter().all(Zero::is_zero));
        let x = solve_integer(&a, &vector(&[3, 5])).unwrap();
        assert_eq!(a.apply(&x), vector(&[3, 5]));
        let b = IntegerMatrix::from_i64(&[[2, 0], [0, 2]]);
        assert!(solve_integer(&b, &vector(&[1, 0])).is_none());
    }

    #[test]
    fn coset_reduction_is_canonical() {
        let basis = vec![vector(&[2, 1]), vector(&[0, 3])];
        let a = reduce_modulo(&vector(&[5, 7]), &basis);
        let b = reduce_modulo(&add(&vector(&[5, 7]), &vector(&[-4, 1])), &basis);
        assert_eq!(a, b);
    }
}
