use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    dot, integer_kernel, is_zero, neg, primitive, reduce_modulo, row_lattice_basis,
    smith_normal_form, IntegerMatrix, LatticeVector, SpanLattice,
};

/// A rational polyhedral cone `cone(rays) + span(lineality)` in `Z^d`.
///
/// Rays are primitive, pairwise non-redundant and sorted lexicographically.
/// When the lineality space is nontrivial each ray is stored as a canonical
/// representative of its class modulo the lineality lattice, whose basis is
/// kept in Hermite form. Two cones are equal iff their stored data agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalCone {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    lineality: Vec<LatticeVector>,
}

/// Inequality description of a cone.
#[derive(Clone, Debug)]
pub struct HRepresentation {
    pub span: SpanLattice,
    /// Primitive inward facet normals in span coordinates.
    pub facets_in_span: Vec<LatticeVector>,
    /// The same normals lifted to the ambient dual lattice.
    pub facets: Vec<LatticeVector>,
}

impl HRepresentation {
    /// Equations `<c, x> = 0` cutting out the span.
    pub fn equations(&self) -> &[LatticeVector] {
        &self.span.complement
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.span.contains(x) && self.facets.iter().all(|f| !dot(f, x).is_negative())
    }

    pub fn contains_in_relative_interior(&self, x: &[BigInt]) -> bool {
        self.span.contains(x) && self.facets.iter().all(|f| dot(f, x).is_positive())
    }
}

struct Analysis {
    span: SpanLattice,
    facets_in_span: Vec<LatticeVector>,
    rays: Vec<LatticeVector>,
    lineality: Vec<LatticeVector>,
}

fn rank_of(vectors: &[&LatticeVector], cols: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows: Vec<LatticeVector> = vectors.iter().map(|v| (*v).clone()).collect();
    IntegerMatrix::from_rows(cols, &rows).expect("uniform").rank()
}

/// Facet normals of the full-dimensional cone generated by `gens` in `Z^k`.
fn facet_normals(k: usize, gens: &[LatticeVector]) -> Vec<LatticeVector> {
    if k == 0 {
        return Vec::new();
    }
    let mut out = BTreeSet::new();
    for subset in (0..gens.len()).combinations(k - 1) {
        let rows: Vec<LatticeVector> = subset.iter().map(|&i| gens[i].clone()).collect();
        let m = IntegerMatrix::from_rows(k, &rows).expect("uniform");
        let ker = integer_kernel(&m);
        if ker.len() != 1 {
            continue;
        }
        let f = primitive(&ker[0]);
        let (mut pos, mut negative) = (false, false);
        for g in gens {
            let s = dot(&f, g);
            pos |= s.is_positive();
            negative |= s.is_negative();
            if pos && negative {
                break;
            }
        }
        match (pos, negative) {
            (true, false) => {
                out.insert(f);
            }
            (false, true) => {
                out.insert(neg(&f));
            }
            _ => {}
        }
    }
    out.into_iter().collect()
}

fn analyze(d: usize, gens: &[LatticeVector]) -> Analysis {
    let mut uniq: Vec<LatticeVector> = gens
        .iter()
        .filter(|g| !is_zero(g))
        .map(|g| primitive(g))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    uniq.sort();
    let span = SpanLattice::of(&uniq, d);
    let k = span.dim();
    let coords: Vec<LatticeVector> = uniq.iter().map(|g| span.coords(g)).collect();
    let facets_in_span = facet_normals(k, &coords);

    let lin_coords: Vec<LatticeVector> = if facets_in_span.is_empty() {
        (0..k).map(|i| crate::lattice::unit_vector(k, i)).collect()
    } else {
        let fm = IntegerMatrix::from_rows(k, &facets_in_span).expect("uniform");
        integer_kernel(&fm)
    };
    let l = lin_coords.len();
    let lineality: Vec<LatticeVector> = if l == 0 {
        Vec::new()
    } else {
        let pts: Vec<LatticeVector> = lin_coords.iter().map(|c| span.point(c)).collect();
        row_lattice_basis(&IntegerMatrix::from_rows(d, &pts).expect("uniform"))
    };
    // Quotient coordinates modulo the lineality lattice, in span coordinates.
    let quotient = if l == 0 {
        None
    } else {
        let lm = IntegerMatrix::from_rows(k, &lin_coords).expect("uniform");
        Some(smith_normal_form(&lm))
    };

    let mut rays = BTreeSet::new();
    for c in &coords {
        let zero_set: Vec<&LatticeVector> = facets_in_span
            .iter()
            .filter(|f| dot(f, c).is_zero())
            .collect();
        if zero_set.len() == facets_in_span.len() {
            continue;
        }
        if rank_of(&zero_set, k) + l + 1 != k {
            continue;
        }
        let rep = match &quotient {
            None => span.point(&primitive(c)),
            Some(snf) => {
                let full = snf.v.left_apply(c);
                let q: LatticeVector = full[l..].to_vec();
                let p = primitive(&q);
                let mut lifted = vec![BigInt::zero(); k];
                for (i, pi) in p.iter().enumerate() {
                    for (j, x) in snf.v_inv.row(l + i).iter().enumerate() {
                        lifted[j] += pi * x;
                    }
                }
                reduce_modulo(&span.point(&lifted), &lineality)
            }
        };
        rays.insert(rep);
    }
    Analysis {
        span,
        facets_in_span,
        rays: rays.into_iter().collect(),
        lineality,
    }
}

impl RationalCone {
    /// The cone generated by `gens`; lines are allowed and become lineality.
    pub fn generated_by(ambient_rank: usize, gens: &[LatticeVector]) -> Result<Self> {
        for g in gens {
            if g.len() != ambient_rank {
                return Err(Error::DimensionMismatch {
                    expected: ambient_rank,
                    found: g.len(),
                });
            }
        }
        let a = analyze(ambient_rank, gens);
        Ok(RationalCone {
            ambient_rank,
            rays: a.rays,
            lineality: a.lineality,
        })
    }

    /// A strongly convex cone with the given generators.
    pub fn new(ambient_rank: usize, rays: &[LatticeVector]) -> Result<Self> {
        let c = Self::generated_by(ambient_rank, rays)?;
        if !c.is_strongly_convex() {
            return Err(Error::InvalidCone(format!(
                "generators {} span a cone containing a line",
                format_vectors(rays)
            )));
        }
        Ok(c)
    }

    pub fn from_i64<R: AsRef<[i64]>>(ambient_rank: usize, rays: &[R]) -> Result<Self> {
        let rays: Vec<LatticeVector> = rays
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(ambient_rank, &rays)
    }

    pub fn zero(ambient_rank: usize) -> Self {
        RationalCone {
            ambient_rank,
            rays: Vec::new(),
            lineality: Vec::new(),
        }
    }

    /// The nonnegative orthant `cone(e_1, ..., e_d)`.
    pub fn orthant(ambient_rank: usize) -> Self {
        let rays: Vec<LatticeVector> = (0..ambient_rank)
            .map(|i| crate::lattice::unit_vector(ambient_rank, i))
            .collect();
        Self::new(ambient_rank, &rays).expect("orthant is strongly convex")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// Hermite basis of the lineality lattice.
    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Rays followed by `±` each lineality vector.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(neg(l));
        }
        g
    }

    pub fn span(&self) -> SpanLattice {
        SpanLattice::of(&self.generators(), self.ambient_rank)
    }

    pub fn dim(&self) -> usize {
        self.span().dim()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_rank
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_strongly_convex() && self.rays.len() == self.dim()
    }

    pub fn hrep(&self) -> HRepresentation {
        let a = analyze(self.ambient_rank, &self.generators());
        let facets = a
            .facets_in_span
            .iter()
            .map(|f| a.span.lift_functional(f))
            .collect();
        HRepresentation {
            span: a.span,
            facets_in_span: a.facets_in_span,
            facets,
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        x.len() == self.ambient_rank && self.hrep().contains(x)
    }

    pub fn contains_cone(&self, other: &RationalCone) -> bool {
        let h = self.hrep();
        other.generators().iter().all(|g| h.contains(g))
    }

    /// `{m : <m, x> >= 0 for all x in the cone}` in the dual lattice.
    pub fn dual(&self) -> RationalCone {
        let h = self.hrep();
        let mut gens = h.facets.clone();
        for c in h.equations() {
            gens.push(c.clone());
            gens.push(neg(c));
        }
        RationalCone::generated_by(self.ambient_rank, &gens).expect("consistent rank")
    }

    /// For every facet, the indices of the rays it contains.
    pub fn facet_ray_sets(&self) -> Vec<Vec<usize>> {
        let h = self.hrep();
        h.facets
            .iter()
            .map(|f| {
                (0..self.rays.len())
                    .filter(|&i| dot(f, &self.rays[i]).is_zero())
                    .collect()
            })
            .collect()
    }

    fn face_from_indices(&self, idx: &[usize]) -> RationalCone {
        let mut gens: Vec<LatticeVector> = idx.iter().map(|&i| self.rays[i].clone()).collect();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(neg(l));
        }
        RationalCone::generated_by(self.ambient_rank, &gens).expect("consistent rank")
    }

    /// Faces of codimension one.
    pub fn facets(&self) -> Vec<RationalCone> {
        self.facet_ray_sets()
            .iter()
            .map(|s| self.face_from_indices(s))
            .collect()
    }

    /// Ray-index sets of all faces, including the cone itself and the minimal face.
    pub fn face_ray_sets(&self) -> Vec<Vec<usize>> {
        let incidences = self.facet_ray_sets();
        let all: Vec<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(all.clone());
        let mut queue = VecDeque::from([all]);
        while let Some(s) = queue.pop_front() {
            for f in &incidences {
                let t: Vec<usize> = s.iter().copied().filter(|i| f.contains(i)).collect();
                if t.len() != s.len() && seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn faces(&self) -> Vec<RationalCone> {
        let mut faces: Vec<RationalCone> = self
            .face_ray_sets()
            .iter()
            .map(|s| self.face_from_indices(s))
            .collect();
        faces.sort_by_key(|f| f.dim());
        faces
    }

    /// The smallest face containing `x`; `None` when `x` is not in the cone.
    pub fn face_containing(&self, x: &[BigInt]) -> Option<RationalCone> {
        let h = self.hrep();
        if !h.contains(x) {
            return None;
        }
        let tight: Vec<&LatticeVector> = h.facets.iter().filter(|f| dot(f, x).is_zero()).collect();
        let idx: Vec<usize> = (0..self.rays.len())
            .filter(|&i| tight.iter().all(|f| dot(f, &self.rays[i]).is_zero()))
            .collect();
        Some(self.face_from_indices(&idx))
    }

    /// A lattice point in the relative interior.
    pub fn interior_point(&self) -> LatticeVector {
        let mut p = vec![BigInt::zero(); self.ambient_rank];
        for r in &self.rays {
            for (a, b) in p.iter_mut().zip(r) {
                *a += b;
            }
        }
        p
    }

    pub fn is_face_of(&self, other: &RationalCone) -> bool {
        if self.ambient_rank != other.ambient_rank || !other.contains_cone(self) {
            return false;
        }
        other.face_containing(&self.interior_point()).as_ref() == Some(self)
    }

    pub fn intersection(&self, other: &RationalCone) -> Result<RationalCone> {
        if self.ambient_rank != other.ambient_rank {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_rank,
                found: other.ambient_rank,
            });
        }
        let mut gens = self.dual().generators();
        gens.extend(other.dual().generators());
        Ok(RationalCone::generated_by(self.ambient_rank, &gens)?.dual())
    }

    /// Image under `x -> F x`.
    pub fn image(&self, f: &IntegerMatrix) -> Result<RationalCone> {
        if f.cols() != self.ambient_rank {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_rank,
                found: f.cols(),
            });
        }
        let gens: Vec<LatticeVector> = self.generators().iter().map(|g| f.apply(g)).collect();
        RationalCone::generated_by(f.rows(), &gens)
    }

    /// The product cone in `Z^{d1 + d2}`.
    pub fn product(&self, other: &RationalCone) -> RationalCone {
        let d = self.ambient_rank + other.ambient_rank;
        let mut gens = Vec::new();
        for g in self.generators() {
            let mut v = g.clone();
            v.extend(std::iter::repeat(BigInt::zero()).take(other.ambient_rank));
            gens.push(v);
        }
        for g in other.generators() {
            let mut v = vec![BigInt::zero(); self.ambient_rank];
            v.extend(g);
            gens.push(v);
        }
        RationalCone::generated_by(d, &gens).expect("consistent rank")
    }

    /// Index of the sublattice spanned by the rays inside the saturation.
    pub fn multiplicity(&self) -> Result<BigInt> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial {
                rays: self.rays.len(),
                dim: self.dim(),
            });
        }
        if self.rays.is_empty() {
            return Ok(BigInt::from(1));
        }
        let m = IntegerMatrix::from_rows(self.ambient_rank, &self.rays).expect("uniform");
        Ok(smith_normal_form(&m).invariant_factors().iter().product())
    }

    pub fn is_smooth(&self) -> bool {
        self.multiplicity().is_ok_and(|m| m == BigInt::from(1))
    }

    pub fn has_ray(&self, v: &[BigInt]) -> bool {
        self.rays.iter().any(|r| r.as_slice() == v)
    }
}

impl fmt::Debug for RationalCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone{}", format_vectors(&self.rays))?;
        if !self.lineality.is_empty() {
            write!(f, " + span{}", format_vectors(&self.lineality))?;
        }
        Ok(())
    }
}

pub(crate) fn format_vector(v: &[BigInt]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).join(","))
}

pub(crate) fn format_vectors(vs: &[LatticeVector]) -> String {
    format!("[{}]", vs.iter().map(|v| format_vector(v)).join(", "))
}

/// Pulling triangulation of a strongly convex cone, pulling the lexicographically
/// smallest ray first; no new rays are introduced. Neighbouring cones triangulated
/// this way induce the same triangulation on shared faces.
pub fn pulling_triangulation(cone: &RationalCone) -> Vec<RationalCone> {
    if cone.is_simplicial() || cone.rays().is_empty() {
        return vec![cone.clone()];
    }
    let apex = cone.rays()[0].clone();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for facet_rays in cone.facet_ray_sets() {
        if facet_rays.contains(&0) {
            continue;
        }
        let facet = cone.face_from_indices(&facet_rays);
        for piece in pulling_triangulation(&facet) {
            let mut gens = piece.rays().to_vec();
            gens.push(apex.clone());
            let c = RationalCone::generated_by(cone.ambient_rank(), &gens).expect("consistent rank");
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vector;

    fn cone(rays: &[&[i64]]) -> RationalCone {
        let d = rays[0].len();
        RationalCone::from_i64(d, rays).unwrap()
    }

    #[test]
    fn rays_are_primitive_sorted_and_minimal() {
        let c = RationalCone::from_i64(2, &[[2, 4], [1, 0], [1, 1]]).unwrap();
        assert_eq!(c.rays(), &[vector(&[1, 0]), vector(&[1, 2])]);
        assert!(c.is_simplicial());
    }

    #[test]
    fn lines_are_rejected_or_become_lineality() {
        assert!(RationalCone::from_i64(2, &[[1, 0], [-1, 0]]).is_err());
        let half = RationalCone::generated_by(2, &[vector(&[1, 0]), vector(&[-1, 0]), vector(&[3, 1])]).unwrap();
        assert_eq!(half.lineality(), &[vector(&[1, 0])]);
        assert_eq!(half.rays(), &[vector(&[0, 1])]);
        assert!(half.contains(&vector(&[-7, 2])));
        assert!(!half.contains(&vector(&[0, -1])));
    }

    #[test]
    fn dual_examples() {
        let std2 = cone(&[&[1, 0], &[0, 1]]);
        assert_eq!(std2.dual(), std2);
        let c = cone(&[&[1, 0], &[1, 3]]);
        assert_eq!(c.dual(), cone(&[&[0, 1], &[3, -1]]));
        assert_eq!(c.dual().dual(), c);
        let ray = cone(&[&[1, 1]]);
        let d = ray.dual();
        assert!(!d.is_strongly_convex());
        assert_eq!(d.lineality().len(), 1);
    }

    #[test]
    fn faces_of_square_cone() {
        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert_eq!(sq.rays().len(), 4);
        assert!(!sq.is_simplicial());
        let faces = sq.faces();
        // 1 + 4 + 4 + 1
        assert_eq!(faces.len(), 10);
        assert_eq!(faces.iter().filter(|f| f.dim() == 2).count(), 4);
        let diag = cone(&[&[0, 0, 1], &[1, 1, 1]]);
        assert!(!diag.is_face_of(&sq));
        let edge = cone(&[&[0, 0, 1], &[1, 0, 1]]);
        assert!(edge.is_face_of(&sq));
    }

    #[test]
    fn intersection_of_overlapping_cones() {
        let a = cone(&[&[1, 0], &[1, 2]]);
        let b = cone(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.intersection(&b).unwrap(), cone(&[&[1, 1], &[1, 2]]));
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(cone(&[&[1, 0], &[1, 7]]).multiplicity().unwrap(), BigInt::from(7));
        assert_eq!(
            cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]).multiplicity().unwrap(),
            BigInt::from(2)
        );
        // non-full-dimensional: index inside the saturated span
        assert_eq!(cone(&[&[1, 0, 0], &[1, 2, 0]]).multiplicity().unwrap(), BigInt::from(2));
        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert!(sq.multiplicity().is_err());
    }

    #[test]
    fn pulling_triangulations() {
        let sq = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let t = pulling_triangulation(&sq);
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|c| c.is_simplicial() && c.has_ray(&vector(&[0, 0, 1]))));
        let pent = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert_eq!(pulling_triangulation(&pent).len(), 3);
    }
}
