//! Pre-toroidal actions: the torific ideal, its normalized blowup and the
//! checks that the blown-up action is toroidal and strict.

mod ideal;
mod strictness;
mod verify;

pub use ideal::{localization_check, torific_ideal, variance_check};
pub use strictness::{strictness_report, PairedSymmetry, RayValuations, ValuationReport};
pub use verify::{chart_verdict, torify, verify_toroidal, ChartReport, TorifyReport, Verdict};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fan::RationalCone;
use crate::lattice::{monomial_character, unit_vector, Character, FiniteDiagonalGroup, LatticeVector, Residue};
use crate::quotient::check_injective;

/// A chart `X0 × A^1`, with `X0` the toric chart of `base_cone`, and a finite
/// diagonal group acting on the base torus and on the extra coordinate `x`.
///
/// Group elements live in `(Q/Z)^{d0+1}`; the last coordinate is the weight
/// `psi_x` with which the element acts on `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreToroidalSitus {
    base_cone: RationalCone,
    group: FiniteDiagonalGroup,
}

impl PreToroidalSitus {
    pub fn new(base_cone: RationalCone, group: FiniteDiagonalGroup) -> Result<Self> {
        if !base_cone.is_strongly_convex() {
            return Err(Error::InvalidCone(format!("{base_cone:?} contains a line")));
        }
        let d = base_cone.ambient_rank() + 1;
        if group.ambient_rank() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: group.ambient_rank(),
            });
        }
        check_injective(&group)?;
        Ok(PreToroidalSitus { base_cone, group })
    }

    /// Assembles the group from base generators and the weights on `x`.
    ///
    /// A generator may already carry its `x` weight (length `d0 + 1`); then
    /// `psi_x`, if given, must agree with it. Short generators need `psi_x`.
    pub fn from_parts(
        base_cone: RationalCone,
        generators: Vec<Vec<Residue>>,
        psi_x: Option<Vec<Residue>>,
    ) -> Result<Self> {
        let d0 = base_cone.ambient_rank();
        if let Some(p) = &psi_x {
            if p.len() != generators.len() {
                return Err(Error::InconsistentCharacter(format!(
                    "{} values of psi_x for {} generators",
                    p.len(),
                    generators.len()
                )));
            }
        }
        let mut full = Vec::with_capacity(generators.len());
        for (j, mut g) in generators.into_iter().enumerate() {
            let given = psi_x.as_ref().map(|p| p[j].clone());
            if g.len() == d0 + 1 {
                if let Some(v) = given {
                    if v != g[d0] {
                        return Err(Error::InconsistentCharacter(format!(
                            "generator {j} acts on x with weight {} but psi_x gives {v}",
                            g[d0]
                        )));
                    }
                }
            } else if g.len() == d0 {
                let v = given.ok_or_else(|| {
                    Error::InconsistentCharacter(format!(
                        "generator {j} has no weight on x and psi_x is missing"
                    ))
                })?;
                g.push(v);
            } else {
                return Err(Error::DimensionMismatch {
                    expected: d0 + 1,
                    found: g.len(),
                });
            }
            full.push(g);
        }
        let group = FiniteDiagonalGroup::new(d0 + 1, full)?;
        Self::new(base_cone, group)
    }

    pub fn base_cone(&self) -> &RationalCone {
        &self.base_cone
    }

    pub fn group(&self) -> &FiniteDiagonalGroup {
        &self.group
    }

    pub fn base_rank(&self) -> usize {
        self.base_cone.ambient_rank()
    }

    /// Rank of the total lattice, `d0 + 1`.
    pub fn rank(&self) -> usize {
        self.base_rank() + 1
    }

    /// Exponent (and ray) of the coordinate `x`.
    pub fn x_exponent(&self) -> LatticeVector {
        unit_vector(self.rank(), self.base_rank())
    }

    /// The character by which the group acts on `x`.
    pub fn psi_x(&self) -> Character {
        monomial_character(&self.x_exponent(), &self.group).expect("ranks agree")
    }

    /// `σ0 × ray(x)`.
    pub fn total_cone(&self) -> RationalCone {
        let line = RationalCone::new(1, &[vec![BigInt::one()]]).expect("ray");
        self.base_cone.product(&line)
    }

    /// Whether the group embeds in the base torus `T0`, the setting in which
    /// the torific ideal always contains a base monomial.
    pub fn acts_through_base_torus(&self) -> bool {
        let base: Vec<usize> = (0..self.base_rank()).collect();
        self.group.project(&base).order() == self.group.order()
    }

    /// The same group acting through the stabilizer of `τ`, on the chart of `τ`.
    pub fn localized(&self, tau: &RationalCone) -> Result<PreToroidalSitus> {
        if !tau.is_face_of(&self.base_cone) {
            return Err(Error::NotAFace(format!(
                "{tau:?} is not a face of {:?}",
                self.base_cone
            )));
        }
        let group = base_stabilizer(&self.group, tau)?;
        Ok(PreToroidalSitus {
            base_cone: tau.clone(),
            group,
        })
    }
}

/// Elements of `group` acting trivially on the units of the chart of the base cone `tau`.
pub(crate) fn base_stabilizer(group: &FiniteDiagonalGroup, tau: &RationalCone) -> Result<FiniteDiagonalGroup> {
    let perp: Vec<LatticeVector> = tau
        .span()
        .complement
        .iter()
        .map(|u| {
            let mut v = u.clone();
            v.push(BigInt::from(0));
            v
        })
        .collect();
    crate::quotient::annihilator_subgroup(group, &perp)
}
