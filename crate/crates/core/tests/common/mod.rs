//! Oracles used by the integration tests. They avoid the normal-form code of
//! the library: multiplicities come from minors, supports from a covering
//! argument on facets.
#![allow(dead_code)]

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use toroidal::fan::{Fan, RationalCone};
use toroidal::lattice::LatticeVector;

/// Determinant by cofactor expansion (small matrices only).
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Index of the lattice spanned by `rays` in its saturation: the gcd of the
/// maximal minors. Zero if the rays are dependent.
pub fn minor_multiplicity(rays: &[LatticeVector]) -> BigInt {
    let k = rays.len();
    let d = rays.first().map_or(0, Vec::len);
    let mut g = BigInt::zero();
    for cols in (0..d).combinations(k) {
        let m: Vec<Vec<BigInt>> = rays
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        g = g.gcd(&det(&m));
    }
    g.abs()
}

/// Whether the support of `fine` equals the support of `coarse`.
///
/// Every cone of `fine` must lie in a cone of `coarse`, the cones of `fine`
/// must meet properly, and inside each cone `C` of `coarse` every facet of a
/// fine cone of full dimension either lies on the boundary of `C` or is shared
/// by exactly two such cones. A nonempty closed union with that property fills `C`.
pub fn supports_equal(coarse: &Fan, fine: &Fan) -> bool {
    if !fine.validate().is_empty() {
        return false;
    }
    if !fine
        .cones()
        .iter()
        .all(|c| coarse.cones().iter().any(|big| big.contains_cone(c)))
    {
        return false;
    }
    for big in coarse.cones() {
        let inside: Vec<&RationalCone> = fine
            .cones()
            .iter()
            .filter(|c| big.contains_cone(c) && c.dim() == big.dim())
            .collect();
        if inside.is_empty() {
            return false;
        }
        let boundary = big.facets();
        let mut shared: HashMap<RationalCone, usize> = HashMap::new();
        let facets: Vec<Vec<RationalCone>> = inside.iter().map(|c| c.facets()).collect();
        for f in facets.iter().flatten() {
            *shared.entry(f.clone()).or_default() += 1;
        }
        for facet in facets.iter().flatten() {
            if boundary.iter().any(|b| b.contains_cone(facet)) {
                continue;
            }
            if shared[facet] != 2 {
                return false;
            }
        }
    }
    true
}

/// Lattice points with coordinates in `[-r, r]`.
pub fn box_points(d: usize, r: i64) -> Vec<LatticeVector> {
    (0..d)
        .map(|_| -r..=r)
        .multi_cartesian_product()
        .map(|v| v.into_iter().map(BigInt::from).collect())
        .collect()
}

/// Brute-force order of the subgroup of `(Q/Z)^d` generated by `(num, den)` rows.
pub fn brute_force_order(gens: &[Vec<(i64, i64)>]) -> usize {
    use std::collections::BTreeSet;
    let lcm = gens
        .iter()
        .flatten()
        .fold(1i64, |acc, &(_, q)| acc.lcm(&q));
    let scaled: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| g.iter().map(|&(p, q)| (p * (lcm / q)).rem_euclid(lcm)).collect())
        .collect();
    let d = gens.first().map_or(0, Vec::len);
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut frontier = vec![vec![0i64; d]];
    seen.insert(vec![0; d]);
    while let Some(x) = frontier.pop() {
        for g in &scaled {
            let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(lcm)).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

pub fn big(v: &[i64]) -> LatticeVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
