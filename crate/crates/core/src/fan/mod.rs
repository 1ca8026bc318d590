//! Rational polyhedral cones and fans.

mod cone;
mod hilbert;
mod ideal;

pub use cone::{pulling_triangulation, HRepresentation, RationalCone};
pub(crate) use cone::format_vector;
pub(crate) use hilbert::parallelepiped_points;
pub use hilbert::{hilbert_basis, MAX_HILBERT_CANDIDATES, MAX_HILBERT_DIM};
pub use ideal::{
    blowup_charts, blowup_monomial_ideal, star_subdivision, valuation, MonomialIdeal,
};

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{content, dot, is_zero, neg, IntegerMatrix, LatticeVector};

/// A fan, stored by its maximal cones in sorted order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Fan {
    ambient_rank: usize,
    cones: Vec<RationalCone>,
}

impl Fan {
    /// Builds a fan from cones, discarding duplicates and cones whose rays
    /// are a subset of another cone's rays. No compatibility check is done;
    /// see [`Fan::validate`].
    pub fn new(ambient_rank: usize, cones: Vec<RationalCone>) -> Result<Self> {
        for c in &cones {
            if c.ambient_rank() != ambient_rank {
                return Err(Error::DimensionMismatch {
                    expected: ambient_rank,
                    found: c.ambient_rank(),
                });
            }
        }
        let uniq: BTreeSet<RationalCone> = cones.into_iter().collect();
        let all: Vec<RationalCone> = uniq.into_iter().collect();
        let maximal: Vec<RationalCone> = all
            .iter()
            .filter(|c| {
                !all.iter().any(|o| {
                    o != *c
                        && o.lineality() == c.lineality()
                        && o.rays().len() > c.rays().len()
                        && c.rays().iter().all(|r| o.has_ray(r))
                })
            })
            .cloned()
            .collect();
        Ok(Fan {
            ambient_rank,
            cones: maximal,
        })
    }

    pub fn from_cone(cone: RationalCone) -> Self {
        Fan {
            ambient_rank: cone.ambient_rank(),
            cones: vec![cone],
        }
    }

    pub(crate) fn from_sorted_unchecked(ambient_rank: usize, mut cones: Vec<RationalCone>) -> Self {
        cones.sort();
        cones.dedup();
        Fan {
            ambient_rank,
            cones,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn cones(&self) -> &[RationalCone] {
        &self.cones
    }

    /// All distinct rays, sorted.
    pub fn rays(&self) -> Vec<LatticeVector> {
        self.cones
            .iter()
            .flat_map(|c| c.rays().iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Every cone of the fan, faces included.
    pub fn all_cones(&self) -> Vec<RationalCone> {
        let set: BTreeSet<RationalCone> = self.cones.iter().flat_map(|c| c.faces()).collect();
        set.into_iter().collect()
    }

    /// Whether `cone` is a face of some maximal cone.
    pub fn contains_cone(&self, cone: &RationalCone) -> bool {
        self.cones.iter().any(|m| cone.is_face_of(m))
    }

    pub fn support_contains(&self, x: &[BigInt]) -> bool {
        self.cones.iter().any(|c| c.contains(x))
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(RationalCone::is_simplicial)
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(RationalCone::is_smooth)
    }

    /// Image under the lattice map `x -> F x`.
    pub fn image(&self, f: &IntegerMatrix) -> Result<Fan> {
        let cones = self
            .cones
            .iter()
            .map(|c| c.image(f))
            .collect::<Result<Vec<_>>>()?;
        Fan::new(f.rows(), cones)
    }

    /// Pairwise compatibility diagnostics for the maximal cones.
    pub fn validate(&self) -> Vec<Diagnostic> {
        intersection_diagnostics(&self.cones)
    }
}

/// A defect found by [`validate_fan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    RankMismatch { cone: usize, expected: usize, found: usize },
    ZeroRay { cone: usize },
    NonPrimitiveRay { cone: usize, ray: LatticeVector },
    RedundantRay { cone: usize, ray: LatticeVector },
    NotStronglyConvex { cone: usize },
    Overlap { first: usize, second: usize },
    NotAFaceIntersection { first: usize, second: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::RankMismatch { cone, expected, found } => {
                write!(f, "cone {cone}: ray of length {found}, expected {expected}")
            }
            Diagnostic::ZeroRay { cone } => write!(f, "cone {cone}: zero ray"),
            Diagnostic::NonPrimitiveRay { cone, ray } => write!(
                f,
                "cone {cone}: ray {} is not primitive (gcd {})",
                format_vector(ray),
                content(ray)
            ),
            Diagnostic::RedundantRay { cone, ray } => write!(
                f,
                "cone {cone}: ray {} is not an extremal generator",
                format_vector(ray)
            ),
            Diagnostic::NotStronglyConvex { cone } => {
                write!(f, "cone {cone}: contains a line")
            }
            Diagnostic::Overlap { first, second } => {
                write!(f, "cones {first} and {second} overlap in their interiors")
            }
            Diagnostic::NotAFaceIntersection { first, second } => write!(
                f,
                "cones {first} and {second} do not meet in a common face"
            ),
        }
    }
}

/// Sufficient test for two pointed cones to meet in a common face. If an
/// inequality `w` of one cone is nonpositive on the other, the intersection
/// is the intersection of the two faces cut out by `w`, and the test recurses
/// on those faces.
fn meet_in_common_face(a: &RationalCone, b: &RationalCone) -> bool {
    if !a.lineality().is_empty() || !b.lineality().is_empty() {
        return false;
    }
    if a.rays().is_empty() || b.rays().is_empty() {
        return true;
    }
    for (x, y) in [(a, b), (b, a)] {
        let hx = x.hrep();
        let negated: Vec<LatticeVector> = hx.equations().iter().map(|e| neg(e)).collect();
        for w in hx.facets.iter().chain(hx.equations()).chain(&negated) {
            if y.rays().iter().any(|r| dot(w, r).is_positive()) {
                continue;
            }
            let on = |c: &RationalCone| -> Vec<LatticeVector> {
                c.rays().iter().filter(|r| dot(w, r).is_zero()).cloned().collect()
            };
            let (fx, fy) = (on(x), on(y));
            if fx == fy || fx.is_empty() || fy.is_empty() {
                return true;
            }
            if fx.len() + fy.len() < x.rays().len() + y.rays().len() {
                let d = x.ambient_rank();
                if let (Ok(cx), Ok(cy)) = (RationalCone::new(d, &fx), RationalCone::new(d, &fy)) {
                    if meet_in_common_face(&cx, &cy) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn intersection_diagnostics(cones: &[RationalCone]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            let (a, b) = (&cones[i], &cones[j]);
            if meet_in_common_face(a, b) {
                continue;
            }
            let Ok(meet) = a.intersection(b) else { continue };
            if meet.is_face_of(a) && meet.is_face_of(b) {
                continue;
            }
            let dm = meet.dim();
            if dm == a.dim().min(b.dim()) {
                out.push(Diagnostic::Overlap { first: i, second: j });
            } else {
                out.push(Diagnostic::NotAFaceIntersection { first: i, second: j });
            }
        }
    }
    out
}

/// Checks raw cone data (as read from input, before normalization).
pub fn validate_fan(ambient_rank: usize, raw_cones: &[Vec<LatticeVector>]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut cones = Vec::new();
    for (ci, rays) in raw_cones.iter().enumerate() {
        let mut ok = true;
        for r in rays {
            if r.len() != ambient_rank {
                out.push(Diagnostic::RankMismatch {
                    cone: ci,
                    expected: ambient_rank,
                    found: r.len(),
                });
                ok = false;
            } else if is_zero(r) {
                out.push(Diagnostic::ZeroRay { cone: ci });
                ok = false;
            } else if content(r) != BigInt::from(1) {
                out.push(Diagnostic::NonPrimitiveRay {
                    cone: ci,
                    ray: r.clone(),
                });
            }
        }
        if !ok {
            continue;
        }
        let cone = RationalCone::generated_by(ambient_rank, rays).expect("ranks checked");
        if !cone.is_strongly_convex() {
            out.push(Diagnostic::NotStronglyConvex { cone: ci });
            continue;
        }
        for r in rays {
            if content(r) == BigInt::from(1) && !cone.has_ray(r) {
                out.push(Diagnostic::RedundantRay {
                    cone: ci,
                    ray: r.clone(),
                });
            }
        }
        cones.push((ci, cone));
    }
    let only: Vec<RationalCone> = cones.iter().map(|(_, c)| c.clone()).collect();
    for d in intersection_diagnostics(&only) {
        out.push(match d {
            Diagnostic::Overlap { first, second } => Diagnostic::Overlap {
                first: cones[first].0,
                second: cones[second].0,
            },
            Diagnostic::NotAFaceIntersection { first, second } => {
                Diagnostic::NotAFaceIntersection {
                    first: cones[first].0,
                    second: cones[second].0,
                }
            }
            other => other,
        });
    }
    out
}
