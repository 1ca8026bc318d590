//! Smith and Hermite normal forms over the integers.
//!
//! Both reductions are driven by elementary unimodular operations that are
//! mirrored onto the transformation matrices (and, for Smith, onto their
//! inverses as well, so that span and kernel bases can be read off without a
//! second inversion).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v_inv: IntegerMatrix,
}

impl SmithDecomposition {
    /// The diagonal entries `d_1 | d_2 | ...` (including trailing zeros).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

/// Computes the Smith normal form of `a` together with both transformations.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut u_inv = IntegerMatrix::identity(m);
    let mut v = IntegerMatrix::identity(n);
    let mut v_inv = IntegerMatrix::identity(n);

    // Row operation `row_i += c * row_t` mirrored on U and U^{-1}.
    let row_add = |d: &mut IntegerMatrix,
                   u: &mut IntegerMatrix,
                   u_inv: &mut IntegerMatrix,
                   i: usize,
                   t: usize,
                   c: &BigInt| {
        d.add_row_multiple(i, t, c);
        u.add_row_multiple(i, t, c);
        u_inv.add_col_multiple(t, i, &-c);
    };
    let col_add = |d: &mut IntegerMatrix,
                   v: &mut IntegerMatrix,
                   v_inv: &mut IntegerMatrix,
                   j: usize,
                   t: usize,
                   c: &BigInt| {
        d.add_col_multiple(j, t, c);
        v.add_col_multiple(j, t, c);
        v_inv.add_row_multiple(t, j, &-c);
    };

    for t in 0..m.min(n) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                row_add(&mut d, &mut u, &mut u_inv, i, t, &-q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                col_add(&mut d, &mut v, &mut v_inv, j, t, &-q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)]))
            });
            match offender {
                Some(i) => row_add(&mut d, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }

    SmithDecomposition {
        u,
        d,
        v,
        u_inv,
        v_inv,
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U * A = H`, `U`
/// unimodular, `H` in echelon form with positive pivots and the entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut r = 0;
    for j in 0..n {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if h[(i, j)].is_zero() {
                continue;
            }
            if h[(r, j)].is_zero() {
                h.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            let (a_r, a_i) = (h[(r, j)].clone(), h[(i, j)].clone());
            let eg = a_r.extended_gcd(&a_i);
            let g = eg.gcd;
            let (p, q) = (eg.x, eg.y);
            let rr = -(&a_i / &g);
            let s = &a_r / &g;
            h.combine_rows(r, i, [&p, &q, &rr, &s]);
            u.combine_rows(r, i, [&p, &q, &rr, &s]);
        }
        if h[(r, j)].is_zero() {
            continue;
        }
        if h[(r, j)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, j)].div_floor(&h[(r, j)]);
            if !q.is_zero() {
                h.add_row_multiple(i, r, &-&q);
                u.add_row_multiple(i, r, &-q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Nonzero rows of the Hermite form: a canonical basis of the row lattice.
pub fn row_lattice_basis(a: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let (h, _) = hermite_normal_form(a);
    h.to_rows()
        .into_iter()
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Checks the row-style Hermite shape of `h`.
pub fn is_hermite_form(h: &IntegerMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..h.rows() {
        let pivot = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
        match pivot {
            None => seen_zero_row = true,
            Some(j) => {
                if seen_zero_row || last_pivot.is_some_and(|p| j <= p) {
                    return false;
                }
                if !h[(i, j)].is_positive() {
                    return false;
                }
                for k in 0..i {
                    let above = &h[(k, j)];
                    if above.is_negative() || above >= &h[(i, j)] {
                        return false;
                    }
                }
                last_pivot = Some(j);
            }
        }
    }
    true
}
