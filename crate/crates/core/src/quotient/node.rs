use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{blowup_charts, hilbert_basis, Fan, MonomialIdeal, RationalCone};
use crate::lattice::{dot, integer_kernel, primitive, unit_vector, IntegerMatrix, LatticeVector};

/// The local model `xy = t_1^{k_1} ... t_r^{k_r}` times a torus of rank `extra`.
///
/// Exponents live in `M = Z^{r + 1 + extra}` with basis `t_1..t_r, x, s_1..s_e`;
/// `y` is the exponent `sum k_i t_i - x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeModel {
    k: Vec<BigInt>,
    extra: usize,
    switch: bool,
}

impl NodeModel {
    pub fn new(k: Vec<BigInt>, extra: usize, switch: bool) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidArgument("node model needs r >= 1".into()));
        }
        if k.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidArgument("node exponents must be positive".into()));
        }
        Ok(NodeModel { k, extra, switch })
    }

    pub fn from_exponents(k: &[i64]) -> Result<Self> {
        Self::new(k.iter().map(|&x| BigInt::from(x)).collect(), 0, false)
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.k
    }

    pub fn r(&self) -> usize {
        self.k.len()
    }

    pub fn extra(&self) -> usize {
        self.extra
    }

    /// Whether the branch-switching involution is part of the data.
    pub fn has_switch(&self) -> bool {
        self.switch
    }

    pub fn rank(&self) -> usize {
        self.r() + 1 + self.extra
    }

    pub fn x_exponent(&self) -> LatticeVector {
        unit_vector(self.rank(), self.r())
    }

    pub fn y_exponent(&self) -> LatticeVector {
        let mut y = vec![BigInt::zero(); self.rank()];
        for (i, k) in self.k.iter().enumerate() {
            y[i] = k.clone();
        }
        y[self.r()] = -BigInt::one();
        y
    }

    pub fn t_exponent(&self, i: usize) -> LatticeVector {
        unit_vector(self.rank(), i)
    }

    /// The ideal `(x, y)` of the singular locus of the projection to the base.
    pub fn branch_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.rank(), vec![self.x_exponent(), self.y_exponent()])
            .expect("two generators")
    }

    /// The involution exchanging `x` and `y`, acting on `N`.
    ///
    /// On exponents it is `x -> y`, fixing `t_i` and `s_j`; on `N` it is the transpose.
    pub fn switch_on_n(&self) -> IntegerMatrix {
        let d = self.rank();
        let mut jm = IntegerMatrix::identity(d);
        let y = self.y_exponent();
        for (i, yi) in y.iter().enumerate() {
            jm[(i, self.r())] = yi.clone();
        }
        jm.transpose()
    }
}

/// The smooth local model: base coordinates `t_i`, a fiber coordinate `x`
/// and a torus of rank `extra`. The divisor `V(x)` belongs to the boundary
/// iff the point lies on a marked section.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmoothModel {
    pub r: usize,
    pub extra: usize,
    pub marked_section: bool,
}

impl SmoothModel {
    pub fn rank(&self) -> usize {
        self.r + 1 + self.extra
    }

    pub fn cone(&self) -> RationalCone {
        let d = self.rank();
        let mut gens: Vec<LatticeVector> = (0..=self.r).map(|i| unit_vector(d, i)).collect();
        for j in self.r + 1..d {
            gens.push(unit_vector(d, j));
            gens.push(crate::lattice::neg(&unit_vector(d, j)));
        }
        RationalCone::generated_by(d, &gens).expect("consistent rank")
    }

    /// Rays whose divisors form the boundary.
    pub fn boundary_rays(&self) -> Vec<LatticeVector> {
        let d = self.rank();
        let top = if self.marked_section { self.r + 1 } else { self.r };
        (0..top).map(|i| unit_vector(d, i)).collect()
    }
}

/// The cone of the chart of `xy = prod t_i^{k_i}`.
pub fn node_model_cone(model: &NodeModel) -> RationalCone {
    let d = model.rank();
    let mut gens: Vec<LatticeVector> = (0..model.r()).map(|i| model.t_exponent(i)).collect();
    gens.push(model.x_exponent());
    gens.push(model.y_exponent());
    for j in model.r() + 1..d {
        gens.push(unit_vector(d, j));
        gens.push(crate::lattice::neg(&unit_vector(d, j)));
    }
    RationalCone::generated_by(d, &gens)
        .expect("consistent rank")
        .dual()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChartKind {
    /// Smooth chart.
    Smooth,
    /// Hypersurface chart of the form `x z^2 = t^l`.
    Node,
    /// Hypersurface chart of the form `z^2 = t^l`.
    Double,
    /// Anything else.
    Other,
}

impl ChartKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChartKind::Smooth => "smooth",
            ChartKind::Node => "node",
            ChartKind::Double => "double",
            ChartKind::Other => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartRecord {
    pub cone: RationalCone,
    /// The generator of the blown-up ideal that is minimal on this chart.
    pub generator: LatticeVector,
    /// Pattern of the binomial relation of the blowup chart (before normalization).
    pub kind: ChartKind,
    /// Exponents `l_1..l_r` of the `t`-side of the matched binomial.
    pub exponents: Vec<BigInt>,
    /// Whether the normalized chart is smooth.
    pub normalized_smooth: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChartClassification {
    pub charts: Vec<ChartRecord>,
}

/// Classifies a semigroup given by `n + 1` generators of rank `n` through its
/// unique binomial relation. The returned vector holds, per generator, its
/// exponent on the side opposite to the matched pattern (zero elsewhere).
///
/// A side consisting of one generator with exponent one makes that generator
/// redundant (`Smooth`); a side `{1, 2}` is the `x z^2` pattern (`Node`); a
/// side `{2}` is the `z^2` pattern (`Double`).
pub fn classify_binomial(gens: &[LatticeVector]) -> Result<(ChartKind, Vec<BigInt>)> {
    let Some(first) = gens.first() else {
        return Ok((ChartKind::Smooth, Vec::new()));
    };
    let d = first.len();
    let m = IntegerMatrix::from_rows(d, gens)?;
    let rank = m.rank();
    if rank == gens.len() {
        return Ok((ChartKind::Smooth, vec![BigInt::zero(); gens.len()]));
    }
    if rank + 1 != gens.len() {
        return Ok((ChartKind::Other, vec![BigInt::zero(); gens.len()]));
    }
    let ker = integer_kernel(&m.transpose());
    let w = primitive(&ker[0]);
    let side = |positive: bool| -> Vec<BigInt> {
        let mut v: Vec<BigInt> = w
            .iter()
            .filter(|x| if positive { x.is_positive() } else { x.is_negative() })
            .map(|x| x.abs())
            .collect();
        v.sort();
        v
    };
    let opposite = |positive: bool| -> Vec<BigInt> {
        w.iter()
            .map(|x| {
                let on_pattern = if positive { x.is_positive() } else { x.is_negative() };
                if on_pattern {
                    BigInt::zero()
                } else {
                    x.abs()
                }
            })
            .collect()
    };
    let (one, two) = (BigInt::one(), BigInt::from(2));
    let patterns = [
        (vec![one.clone()], ChartKind::Smooth),
        (vec![one.clone(), two.clone()], ChartKind::Node),
        (vec![two.clone()], ChartKind::Double),
    ];
    for (pattern, kind) in patterns {
        for positive in [true, false] {
            if side(positive) == pattern {
                return Ok((kind, opposite(positive)));
            }
        }
    }
    Ok((ChartKind::Other, vec![BigInt::zero(); gens.len()]))
}

/// Classifies the normalized chart of `cone` through the binomial relation
/// of the Hilbert basis of its (pointed) dual semigroup.
pub fn classify_normalized_chart(cone: &RationalCone) -> Result<(ChartKind, Vec<BigInt>)> {
    if cone.is_smooth() {
        return Ok((ChartKind::Smooth, Vec::new()));
    }
    let span = cone.span();
    let k = span.dim();
    let coords: Vec<LatticeVector> = cone.rays().iter().map(|r| span.coords(r)).collect();
    let local = RationalCone::new(k, &coords)?;
    let hb = hilbert_basis(&local.dual())?;
    if hb.len() != k + 1 {
        return Ok((ChartKind::Other, Vec::new()));
    }
    classify_binomial(&hb)
}

/// Rays along which `x` (resp. `y`) vanishes while the other does not:
/// the components of the two branches.
pub fn branch_rays(model: &NodeModel, fan: &Fan) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
    let (x, y) = (model.x_exponent(), model.y_exponent());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in fan.rays() {
        let (vx, vy) = (dot(&r, &x), dot(&r, &y));
        if vx.is_positive() && vy.is_zero() {
            xs.push(r);
        } else if vy.is_positive() && vx.is_zero() {
            ys.push(r);
        }
    }
    (xs, ys)
}

fn has_both_branches(cone: &RationalCone, xs: &[LatticeVector], ys: &[LatticeVector]) -> bool {
    xs.iter().any(|r| cone.has_ray(r)) && ys.iter().any(|r| cone.has_ray(r))
}

/// No cone contains rays of both branches.
pub fn branches_separated(model: &NodeModel, fan: &Fan) -> bool {
    let (xs, ys) = branch_rays(model, fan);
    !fan.cones().iter().any(|c| has_both_branches(c, &xs, &ys))
}

/// Blows up `(x, y)` on the node chart and classifies the resulting charts.
///
/// On the chart where `m` generates the ideal, the blowup ring is generated
/// by `t_1..t_r`, `m` and `z = m' - m` (`m'` the other generator), subject to
/// `2m + z = sum k_i t_i`; this relation is what gets classified.
pub fn separate_branches(model: &NodeModel) -> Result<(Fan, ChartClassification)> {
    let sigma = node_model_cone(model);
    let charts = blowup_charts(&sigma, &model.branch_ideal())?;
    let (x, y) = (model.x_exponent(), model.y_exponent());
    let r = model.r();
    let mut records = Vec::new();
    for (cone, generator) in &charts {
        let other = if *generator == x { &y } else { &x };
        let mut gens: Vec<LatticeVector> = (0..r).map(|i| model.t_exponent(i)).collect();
        gens.push(generator.clone());
        gens.push(crate::lattice::sub(other, generator));
        // The torus coordinates s_j play no role in the relation.
        let trimmed: Vec<LatticeVector> = gens.iter().map(|g| g[..=r].to_vec()).collect();
        let (kind, opposite) = classify_binomial(&trimmed)?;
        let exponents = if kind == ChartKind::Other {
            Vec::new()
        } else {
            opposite[..r].to_vec()
        };
        records.push(ChartRecord {
            cone: cone.clone(),
            generator: generator.clone(),
            kind,
            exponents,
            normalized_smooth: cone.is_smooth(),
        });
    }
    let fan = Fan::new(sigma.ambient_rank(), charts.into_iter().map(|(c, _)| c).collect())?;
    Ok((fan, ChartClassification { charts: records }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchReport {
    pub fan_invariant: bool,
    /// Charts mapped to themselves by the involution.
    pub stable_charts: usize,
    /// Stable charts that still contain rays of both branches.
    pub stable_charts_with_both_branches: usize,
}

impl SwitchReport {
    pub fn passes(&self) -> bool {
        self.fan_invariant && self.stable_charts_with_both_branches == 0
    }
}

/// Checks the branch-switching involution against a fan on the node chart.
pub fn switch_check(model: &NodeModel, fan: &Fan) -> Result<SwitchReport> {
    let j = model.switch_on_n();
    let image = fan.image(&j)?;
    let (xs, ys) = branch_rays(model, fan);
    let mut stable = 0;
    let mut bad = 0;
    for c in fan.cones() {
        if c.image(&j)? == *c {
            stable += 1;
            if has_both_branches(c, &xs, &ys) {
                bad += 1;
            }
        }
    }
    Ok(SwitchReport {
        fan_invariant: image == *fan,
        stable_charts: stable,
        stable_charts_with_both_branches: bad,
    })
}
