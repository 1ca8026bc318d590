use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::IntegerMatrix;
use super::normal_form::{row_lattice_basis, smith_normal_form};
use super::{solve_integer, LatticeVector};
use crate::error::{Error, Result};

/// Upper bound on explicit element enumeration of a finite group.
pub const MAX_GROUP_ELEMENTS: usize = 1_000_000;

/// An element of `Q/Z`, stored as the reduced representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue(BigRational);

impl Residue {
    pub fn new(q: BigRational) -> Self {
        let fl = q.floor();
        Residue(q - fl)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Residue::new(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        Residue(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Additive order in `Q/Z`: the reduced denominator.
    pub fn order(&self) -> BigInt {
        self.0.denom().clone()
    }

    pub fn add(&self, other: &Residue) -> Residue {
        Residue::new(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Residue) -> Residue {
        Residue::new(&self.0 - &other.0)
    }

    pub fn mul_int(&self, c: &BigInt) -> Residue {
        Residue::new(&self.0 * BigRational::from_integer(c.clone()))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational, rejecting zero denominators.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::InvalidRational(s.to_string()))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::InvalidRational(s.to_string()))?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(num, den))
}

pub fn parse_residue(s: &str) -> Result<Residue> {
    parse_rational(s).map(Residue::new)
}

fn pair(m: &[BigInt], g: &[Residue]) -> Residue {
    let mut acc = BigRational::zero();
    for (a, r) in m.iter().zip(g) {
        if !a.is_zero() && !r.is_zero() {
            acc += BigRational::from_integer(a.clone()) * r.value();
        }
    }
    Residue::new(acc)
}

fn add_elements(a: &[Residue], b: &[Residue]) -> Vec<Residue> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

/// The overlattice `N' = Z^d + sum Z g_j` and the structure of `N'/Z^d`.
#[derive(Clone, Debug)]
pub(crate) struct Overlattice {
    /// Rows form a basis of `N'`.
    pub basis: Vec<Vec<BigRational>>,
    /// Invariant factors of `N'/Z^d` (all greater than one).
    pub invariants: Vec<BigInt>,
    /// Independent generators of `N'/Z^d`, paired with the invariant factors.
    pub generators: Vec<Vec<Residue>>,
    /// `x -> x * coordinates` sends `x` in `Z^d` to its coordinates in `basis`.
    pub coordinates: IntegerMatrix,
}

pub(crate) fn overlattice(gens: &[Vec<BigRational>], d: usize) -> Overlattice {
    let mut common = BigInt::one();
    for g in gens {
        for q in g {
            common = common.lcm(q.denom());
        }
    }
    let mut rows: Vec<LatticeVector> = (0..d)
        .map(|i| {
            let mut r = vec![BigInt::zero(); d];
            r[i] = common.clone();
            r
        })
        .collect();
    for g in gens {
        rows.push(
            g.iter()
                .map(|q| (q * BigRational::from_integer(common.clone())).to_integer())
                .collect(),
        );
    }
    let a = IntegerMatrix::from_rows(d, &rows).expect("uniform rows");
    let h_rows = row_lattice_basis(&a);
    let h = IntegerMatrix::from_rows(d, &h_rows).expect("uniform rows");
    // Coordinates of common * e_i in the basis h: C = common * h^{-1}.
    let inv = h.rational_inverse().expect("overlattice basis is full rank");
    let c_rows: Vec<LatticeVector> = inv
        .iter()
        .map(|row| {
            row.iter()
                .map(|q| {
                    let v = q * BigRational::from_integer(common.clone());
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    let c = IntegerMatrix::from_rows(d, &c_rows).expect("uniform rows");
    let snf = smith_normal_form(&c);
    let w_h = &snf.v_inv * &h;
    let diag = snf.diagonal();
    let mut invariants = Vec::new();
    let mut generators = Vec::new();
    for (i, di) in diag.iter().enumerate() {
        if *di > BigInt::one() {
            invariants.push(di.clone());
            generators.push(
                w_h.row(i)
                    .iter()
                    .map(|x| Residue::new(BigRational::new(x.clone(), common.clone())))
                    .collect(),
            );
        }
    }
    let basis = h_rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::new(x.clone(), common.clone()))
                .collect()
        })
        .collect();
    Overlattice {
        basis,
        invariants,
        generators,
        coordinates: c,
    }
}

/// Invariant factors of `N'/N` for `N' = Z^d + sum Z g`; their product is the index.
pub fn quotient_invariants(overlattice_gens: &[Vec<BigRational>], base_rank: usize) -> Result<Vec<BigInt>> {
    for g in overlattice_gens {
        if g.len() != base_rank {
            return Err(Error::DimensionMismatch {
                expected: base_rank,
                found: g.len(),
            });
        }
    }
    Ok(overlattice(overlattice_gens, base_rank).invariants)
}

/// A finite subgroup of the torus `(Q/Z)^d`, given by generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteDiagonalGroup {
    ambient_rank: usize,
    generators: Vec<Vec<Residue>>,
}

impl FiniteDiagonalGroup {
    pub fn new(ambient_rank: usize, generators: Vec<Vec<Residue>>) -> Result<Self> {
        for g in &generators {
            if g.len() != ambient_rank {
                return Err(Error::DimensionMismatch {
                    expected: ambient_rank,
                    found: g.len(),
                });
            }
        }
        Ok(FiniteDiagonalGroup {
            ambient_rank,
            generators,
        })
    }

    pub fn trivial(ambient_rank: usize) -> Self {
        FiniteDiagonalGroup {
            ambient_rank,
            generators: Vec::new(),
        }
    }

    /// Builds a group from `"p/q"` strings.
    pub fn parse(ambient_rank: usize, generators: &[Vec<String>]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| g.iter().map(|s| parse_residue(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient_rank, gens)
    }

    /// Literal constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(ambient_rank: usize, generators: &[Vec<(i64, i64)>]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|g| g.iter().map(|&(p, q)| Residue::from_ratio(p, q)).collect())
            .collect();
        Self::new(ambient_rank, gens)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn generators(&self) -> &[Vec<Residue>] {
        &self.generators
    }

    fn rational_generators(&self) -> Vec<Vec<BigRational>> {
        self.generators
            .iter()
            .map(|g| g.iter().map(|r| r.value().clone()).collect())
            .collect()
    }

    pub(crate) fn overlattice(&self) -> Overlattice {
        overlattice(&self.rational_generators(), self.ambient_rank)
    }

    /// Basis of the overlattice `N' = Z^d + sum Z g_j`, one row per vector.
    pub fn overlattice_basis(&self) -> Vec<Vec<BigRational>> {
        self.overlattice().basis
    }

    pub fn invariants(&self) -> Vec<BigInt> {
        self.overlattice().invariants
    }

    pub fn order(&self) -> BigInt {
        self.invariants().iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.iter().all(Residue::is_zero))
    }

    /// Order of the `j`-th generator.
    pub fn generator_order(&self, j: usize) -> BigInt {
        self.generators[j]
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(&r.order()))
    }

    /// Order of the abstract group `prod Z/ord(g_j)` presented by the generators.
    pub fn presented_order(&self) -> BigInt {
        (0..self.generators.len())
            .map(|j| self.generator_order(j))
            .product()
    }

    /// Whether the abstract group presented by the generators (a product of
    /// cyclic groups, one per generator) embeds into the torus.
    pub fn is_presentation_faithful(&self) -> bool {
        self.presented_order() == self.order()
    }

    /// The same subgroup, with independent generators of orders `d_1 | d_2 | ...`.
    pub fn canonical(&self) -> Self {
        FiniteDiagonalGroup {
            ambient_rank: self.ambient_rank,
            generators: self.overlattice().generators,
        }
    }

    /// All elements, sorted. Fails beyond [`MAX_GROUP_ELEMENTS`].
    pub fn elements(&self) -> Result<Vec<Vec<Residue>>> {
        let order = self.order();
        if order > BigInt::from(MAX_GROUP_ELEMENTS) {
            return Err(Error::Capacity(format!(
                "group of order {order} exceeds the enumeration bound {MAX_GROUP_ELEMENTS}"
            )));
        }
        let zero = vec![Residue::zero(); self.ambient_rank];
        let mut seen: HashSet<Vec<Residue>> = HashSet::new();
        seen.insert(zero.clone());
        let mut elems = vec![zero];
        for (j, g) in self.generators.iter().enumerate() {
            let ord = self.generator_order(j).to_usize().unwrap_or(1);
            let base = elems.clone();
            let mut step = g.clone();
            for _ in 1..ord {
                for e in &base {
                    let x = add_elements(e, &step);
                    if seen.insert(x.clone()) {
                        elems.push(x);
                    }
                }
                step = add_elements(&step, g);
            }
        }
        elems.sort();
        Ok(elems)
    }

    /// Exact membership test through the overlattice.
    pub fn contains(&self, element: &[Residue]) -> bool {
        if element.len() != self.ambient_rank {
            return false;
        }
        if element.iter().all(Residue::is_zero) {
            return true;
        }
        // element ∈ N' iff some integer combination of the generators differs
        // from it by an integral vector.
        let mut common = BigInt::one();
        for r in element.iter().chain(self.generators.iter().flatten()) {
            common = common.lcm(r.value().denom());
        }
        let scaled = |r: &Residue| (r.value() * BigRational::from_integer(common.clone())).to_integer();
        let d = self.ambient_rank;
        let cols = self.generators.len() + d;
        let mut a = IntegerMatrix::zeros(d, cols);
        for (j, g) in self.generators.iter().enumerate() {
            for i in 0..d {
                a[(i, j)] = scaled(&g[i]);
            }
        }
        for i in 0..d {
            a[(i, self.generators.len() + i)] = common.clone();
        }
        let b: LatticeVector = element.iter().map(scaled).collect();
        solve_integer(&a, &b).is_some()
    }

    pub fn same_subgroup(&self, other: &FiniteDiagonalGroup) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    /// Image under the lattice map `v -> F v` (F given as a square integer matrix).
    pub fn image(&self, f: &IntegerMatrix) -> Result<Self> {
        if f.cols() != self.ambient_rank {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_rank,
                found: f.cols(),
            });
        }
        let gens = self
            .generators
            .iter()
            .map(|g| {
                (0..f.rows())
                    .map(|i| {
                        let mut acc = BigRational::zero();
                        for (j, r) in g.iter().enumerate() {
                            acc += BigRational::from_integer(f[(i, j)].clone()) * r.value();
                        }
                        Residue::new(acc)
                    })
                    .collect()
            })
            .collect();
        Self::new(f.rows(), gens)
    }

    /// Keeps the listed coordinates of every generator.
    pub fn project(&self, coords: &[usize]) -> Self {
        FiniteDiagonalGroup {
            ambient_rank: coords.len(),
            generators: self
                .generators
                .iter()
                .map(|g| coords.iter().map(|&i| g[i].clone()).collect())
                .collect(),
        }
    }
}

impl fmt::Debug for FiniteDiagonalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g:?}")?;
        }
        write!(f, "> in (Q/Z)^{}", self.ambient_rank)
    }
}

/// A character of a [`FiniteDiagonalGroup`], one value per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub values: Vec<Residue>,
}

impl Character {
    pub fn trivial(n: usize) -> Self {
        Character {
            values: vec![Residue::zero(); n],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Residue::is_zero)
    }

    /// `order(g_j) * value_j = 0` for every generator.
    pub fn is_well_defined_on(&self, group: &FiniteDiagonalGroup) -> bool {
        self.values.len() == group.generators().len()
            && self
                .values
                .iter()
                .enumerate()
                .all(|(j, v)| v.mul_int(&group.generator_order(j)).is_zero())
    }

    pub fn add(&self, other: &Character) -> Character {
        Character {
            values: add_elements(&self.values, &other.values),
        }
    }

    pub fn sub(&self, other: &Character) -> Character {
        Character {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }
}

/// The character `g -> <m, g> mod 1` of the monomial with exponent `m`.
pub fn monomial_character(m: &[BigInt], group: &FiniteDiagonalGroup) -> Result<Character> {
    if m.len() != group.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: group.ambient_rank(),
            found: m.len(),
        });
    }
    Ok(Character {
        values: group.generators().iter().map(|g| pair(m, g)).collect(),
    })
}

/// `<m, g> mod 1` for a single torus element.
pub fn pairing(m: &[BigInt], g: &[Residue]) -> Residue {
    pair(m, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vector;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn residues_normalize() {
        assert_eq!(Residue::from_ratio(3, 2), Residue::from_ratio(1, 2));
        assert_eq!(Residue::from_ratio(-1, 3), Residue::from_ratio(2, 3));
        assert!(Residue::from_ratio(4, 4).is_zero());
        assert!(parse_residue("1/0").is_err());
        assert!(parse_residue("x/2").is_err());
        assert_eq!(parse_residue(" 5/3 ").unwrap(), Residue::from_ratio(2, 3));
    }

    #[test]
    fn quotient_invariants_examples() {
        assert!(quotient_invariants(&[], 2).unwrap().is_empty());
        assert_eq!(
            quotient_invariants(&[vec![q(1, 2), q(1, 2)]], 2).unwrap(),
            vec![BigInt::from(2)]
        );
        assert_eq!(
            quotient_invariants(&[vec![q(1, 2), q(0, 1)], vec![q(0, 1), q(1, 2)]], 2).unwrap(),
            vec![BigInt::from(2), BigInt::from(2)]
        );
        assert_eq!(
            quotient_invariants(&[vec![q(1, 2), q(0, 1)], vec![q(0, 1), q(1, 3)]], 2).unwrap(),
            vec![BigInt::from(6)]
        );
        assert!(quotient_invariants(&[vec![q(1, 2)]], 2).is_err());
    }

    #[test]
    fn element_enumeration_and_membership() {
        let g = FiniteDiagonalGroup::from_ratios(2, &[vec![(1, 4), (1, 2)], vec![(1, 2), (0, 1)]])
            .unwrap();
        let elems = g.elements().unwrap();
        assert_eq!(BigInt::from(elems.len()), g.order());
        assert_eq!(g.order(), BigInt::from(4));
        assert!(!g.is_presentation_faithful());
        for e in &elems {
            assert!(g.contains(e));
        }
        assert!(!g.contains(&[Residue::from_ratio(1, 4), Residue::zero()]));
        let c = g.canonical();
        assert!(c.same_subgroup(&g));
        assert!(c.is_presentation_faithful());
    }

    #[test]
    fn monomial_characters() {
        let g = FiniteDiagonalGroup::from_ratios(2, &[vec![(1, 2), (1, 2)]]).unwrap();
        assert!(monomial_character(&vector(&[1, 1]), &g).unwrap().is_trivial());
        let h = FiniteDiagonalGroup::from_ratios(2, &[vec![(1, 2), (0, 1)]]).unwrap();
        assert_eq!(
            monomial_character(&vector(&[1, 0]), &h).unwrap().values,
            vec![Residue::from_ratio(1, 2)]
        );
        let t = FiniteDiagonalGroup::trivial(3);
        assert!(monomial_character(&vector(&[4, -1, 7]), &t).unwrap().is_trivial());
        assert!(monomial_character(&vector(&[1]), &g).is_err());
    }
}
