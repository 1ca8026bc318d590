//! Two-dimensional cones: cyclic quotient types and Hirzebruch–Jung strings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::RationalCone;
use crate::lattice::{IntegerMatrix, LatticeVector};

/// The type `(n, q)` of the cone `Cone(e2, n e1 - q e2)`, `0 <= q < n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicType {
    pub n: BigInt,
    pub q: BigInt,
}

/// `Cone(e2, n e1 - q e2)`.
pub fn cyclic_quotient_cone(n: i64, q: i64) -> Result<RationalCone> {
    check_type(&BigInt::from(n), &BigInt::from(q))?;
    RationalCone::from_i64(2, &[[0, 1], [n, -q]])
}

fn check_type(n: &BigInt, q: &BigInt) -> Result<()> {
    if !n.is_positive() || q.is_negative() || q >= n {
        return Err(Error::InvalidArgument(format!(
            "cyclic type ({n}, {q}) needs n >= 1 and 0 <= q < n"
        )));
    }
    if !n.gcd(q).is_one() {
        return Err(Error::InvalidArgument(format!(
            "cyclic type ({n}, {q}) needs gcd(n, q) = 1"
        )));
    }
    Ok(())
}

/// Rays inserted by the minimal resolution of `Cone(e2, n e1 - q e2)`, in
/// boundary order starting next to `e2`.
///
/// With `n/q = [b_1, ..., b_s]` (`b_i = ceil(a_{i-1}/a_i)`, `a_0 = n`,
/// `a_1 = q`) and `u_0 = e2`, `u_1 = e1`, `u_{i+1} = b_i u_i - u_{i-1}`, the
/// result is `u_1, ..., u_s`, so the count is the length of the expansion of
/// `n/q`; in particular `(n, n-1)` yields `n-1` rays and `(n, 1)` one ray.
pub fn hj_resolution(n: &BigInt, q: &BigInt) -> Result<Vec<LatticeVector>> {
    check_type(n, q)?;
    if n.is_one() {
        return Ok(Vec::new());
    }
    let mut rays = Vec::new();
    let (mut a_prev, mut a) = (n.clone(), q.clone());
    let mut u_prev: LatticeVector = vec![BigInt::zero(), BigInt::one()];
    let mut u: LatticeVector = vec![BigInt::one(), BigInt::zero()];
    while !a.is_zero() {
        rays.push(u.clone());
        let b = a_prev.div_ceil(&a);
        let a_next = &b * &a - &a_prev;
        let u_next: LatticeVector = vec![&b * &u[0] - &u_prev[0], &b * &u[1] - &u_prev[1]];
        a_prev = std::mem::replace(&mut a, a_next);
        u_prev = std::mem::replace(&mut u, u_next);
    }
    debug_assert_eq!(u, vec![n.clone(), -q]);
    Ok(rays)
}

/// For a 2D strongly convex simplicial cone with rays `a`, `b` in `Z^2`,
/// returns its type and a unimodular `M` with `M a = e2`, `M b = (n, -q)`.
pub fn cyclic_normal_form(a: &[BigInt], b: &[BigInt]) -> Result<(CyclicType, IntegerMatrix)> {
    if a.len() != 2 || b.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.len().max(b.len()),
        });
    }
    let g = a[0].extended_gcd(&a[1]);
    if !g.gcd.is_one() {
        return Err(Error::InvalidArgument("ray is not primitive".into()));
    }
    // Rows (a1, -a0) and (x, y) send a to e2 with determinant one.
    let mut m = IntegerMatrix::zeros(2, 2);
    m[(0, 0)] = a[1].clone();
    m[(0, 1)] = -&a[0];
    m[(1, 0)] = g.x.clone();
    m[(1, 1)] = g.y.clone();
    let mut c = m.apply(b);
    if c[0].is_zero() {
        return Err(Error::InvalidArgument("rays are collinear".into()));
    }
    if c[0].is_negative() {
        m[(0, 0)] = -&m[(0, 0)];
        m[(0, 1)] = -&m[(0, 1)];
        c[0] = -&c[0];
    }
    let n = c[0].clone();
    // Shear (x, y) -> (x, y + k x) fixes e2 and moves c[1] into (-n, 0].
    let q = (-&c[1]).mod_floor(&n);
    let k = (-&q - &c[1]) / &n;
    let r0 = m.row_vec(0);
    for j in 0..2 {
        m[(1, j)] = &m[(1, j)] + &k * &r0[j];
    }
    debug_assert_eq!(m.apply(b), vec![n.clone(), -&q]);
    if !b[0].gcd(&b[1]).is_one() {
        return Err(Error::InvalidArgument("ray is not primitive".into()));
    }
    Ok((CyclicType { n, q }, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vector;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn smooth_type_has_no_rays() {
        assert!(hj_resolution(&big(1), &big(0)).unwrap().is_empty());
    }

    #[test]
    fn expansion_lengths() {
        for n in 2..20 {
            assert_eq!(hj_resolution(&big(n), &big(n - 1)).unwrap().len(), (n - 1) as usize);
            assert_eq!(hj_resolution(&big(n), &big(1)).unwrap(), vec![vector(&[1, 0])]);
        }
        assert_eq!(
            hj_resolution(&big(5), &big(2)).unwrap(),
            vec![vector(&[1, 0]), vector(&[3, -1])]
        );
        assert!(hj_resolution(&big(6), &big(2)).is_err());
        assert!(hj_resolution(&big(5), &big(5)).is_err());
    }

    #[test]
    fn normal_form_of_a_n_cone() {
        let (t, m) = cyclic_normal_form(&vector(&[1, 0]), &vector(&[1, 4])).unwrap();
        assert_eq!(t.n, big(4));
        assert!(m.is_unimodular());
        assert_eq!(m.apply(&vector(&[1, 0])), vector(&[0, 1]));
        assert_eq!(m.apply(&vector(&[1, 4])), vec![big(4), -&t.q]);
        assert_eq!(t.q, big(3));
    }
}
