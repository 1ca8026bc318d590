//! Finite diagonal group actions on toric charts and the semistable node models.

mod node;

pub use node::{
    branch_rays, branches_separated, classify_binomial, classify_normalized_chart, node_model_cone, separate_branches,
    switch_check, ChartClassification, ChartKind, ChartRecord, NodeModel, SmoothModel,
    SwitchReport,
};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::fan::RationalCone;
use crate::lattice::{pairing, primitive, FiniteDiagonalGroup, LatticeVector, Residue};

/// A finite diagonal group acting on the affine toric chart of a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalAction {
    chart: RationalCone,
    group: FiniteDiagonalGroup,
}

impl DiagonalAction {
    /// Fails unless the abstract group presented by the generators (one cyclic
    /// factor per generator) maps injectively into the torus.
    pub fn new(chart: RationalCone, group: FiniteDiagonalGroup) -> Result<Self> {
        if chart.ambient_rank() != group.ambient_rank() {
            return Err(Error::DimensionMismatch {
                expected: chart.ambient_rank(),
                found: group.ambient_rank(),
            });
        }
        check_injective(&group)?;
        Ok(DiagonalAction { chart, group })
    }

    pub fn chart(&self) -> &RationalCone {
        &self.chart
    }

    pub fn group(&self) -> &FiniteDiagonalGroup {
        &self.group
    }
}

pub(crate) fn check_injective(group: &FiniteDiagonalGroup) -> Result<()> {
    if group.is_presentation_faithful() {
        return Ok(());
    }
    Err(Error::NonInjective(format!(
        "generators present a group of order {} but generate a subgroup of order {} in the torus",
        group.presented_order(),
        group.order()
    )))
}

/// The quotient chart expressed in the overlattice `N' = N + sum Z g`.
#[derive(Clone, Debug)]
pub struct QuotientChart {
    pub cone: RationalCone,
    /// Rows form the basis of `N'` (as rational vectors of `N ⊗ Q`) in which
    /// `cone` is written.
    pub basis: Vec<Vec<BigRational>>,
}

pub fn quotient_chart(sigma: &RationalCone, group: &FiniteDiagonalGroup) -> Result<QuotientChart> {
    if sigma.ambient_rank() != group.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: sigma.ambient_rank(),
            found: group.ambient_rank(),
        });
    }
    check_injective(group)?;
    let ol = group.overlattice();
    let rays: Vec<LatticeVector> = sigma
        .rays()
        .iter()
        .map(|r| primitive(&ol.coordinates.left_apply(r)))
        .collect();
    let lineality: Vec<LatticeVector> = sigma
        .lineality()
        .iter()
        .map(|l| ol.coordinates.left_apply(l))
        .collect();
    let mut gens = rays;
    for l in lineality {
        gens.push(crate::lattice::neg(&l));
        gens.push(l);
    }
    Ok(QuotientChart {
        cone: RationalCone::generated_by(sigma.ambient_rank(), &gens)?,
        basis: ol.basis,
    })
}

/// `σ` re-expressed in a basis of the overlattice; its chart is the quotient chart.
pub fn quotient_cone(sigma: &RationalCone, group: &FiniteDiagonalGroup) -> Result<RationalCone> {
    quotient_chart(sigma, group).map(|q| q.cone)
}

/// Elements of `group` fixing the distinguished point of the orbit of the
/// cone whose orthogonal lattice has basis `perp`.
pub(crate) fn annihilator_subgroup(
    group: &FiniteDiagonalGroup,
    perp: &[LatticeVector],
) -> Result<FiniteDiagonalGroup> {
    let elems = group.elements()?;
    let kept: Vec<Vec<Residue>> = elems
        .into_iter()
        .filter(|g| perp.iter().all(|u| pairing(u, g).is_zero()))
        .collect();
    Ok(FiniteDiagonalGroup::new(group.ambient_rank(), kept)?.canonical())
}

/// Stabilizer of the distinguished point of the stratum of the face `tau`.
pub fn stabilizer(action: &DiagonalAction, tau: &RationalCone) -> Result<FiniteDiagonalGroup> {
    if !tau.is_face_of(action.chart()) {
        return Err(Error::NotAFace(format!(
            "{tau:?} is not a face of {:?}",
            action.chart()
        )));
    }
    annihilator_subgroup(action.group(), &tau.span().complement)
}
