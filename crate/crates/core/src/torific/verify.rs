use num_bigint::BigInt;

use super::ideal::adjust_by_units;
use super::{torific_ideal, PreToroidalSitus};
use crate::error::{Error, Result};
use crate::fan::{blowup_charts, Fan, MonomialIdeal, RationalCone};
use crate::lattice::{integer_kernel, monomial_character, solve_integer, Character, IntegerMatrix, LatticeVector};
use crate::quotient::annihilator_subgroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Toroidal,
    /// The chart splits off the `x` direction, but the group moves the
    /// splitting coordinate by a nontrivial character.
    PreToroidalOnly,
    NotPreToroidal,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Toroidal => "toroidal",
            Verdict::PreToroidalOnly => "pre-toroidal only",
            Verdict::NotPreToroidal => "not pre-toroidal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartReport {
    pub cone: RationalCone,
    /// The ideal generator that is minimal on this chart.
    pub generator: Option<LatticeVector>,
    pub verdict: Verdict,
    /// Exponent of a coordinate `u` with `<e_x, u> = 1`, vanishing on the
    /// other rays, with trivial character when the verdict is toroidal.
    pub invariant_coordinate: Option<LatticeVector>,
    pub invariant_character: Option<Character>,
    /// `V(x)` is part of the chart boundary (its strict transform misses the chart).
    pub x_in_boundary: bool,
    /// Invariant factors of the group fixing the closed orbit of the chart.
    pub stabilizer_invariants: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorifyReport {
    pub ideal: MonomialIdeal,
    pub fan: Fan,
    pub charts: Vec<ChartReport>,
}

impl TorifyReport {
    pub fn all_toroidal(&self) -> bool {
        self.charts.iter().all(|c| c.verdict == Verdict::Toroidal)
    }
}

/// Blows up the total chart along the torific ideal and verifies each chart.
pub fn torify(s: &PreToroidalSitus) -> Result<TorifyReport> {
    let ideal = torific_ideal(s)?;
    let charts = blowup_charts(&s.total_cone(), &ideal)?;
    let fan = Fan::new(s.rank(), charts.iter().map(|(c, _)| c.clone()).collect())?;
    let mut reports = Vec::with_capacity(charts.len());
    for (cone, generator) in charts {
        let mut r = chart_report(s, &cone)?;
        r.generator = Some(generator);
        reports.push(r);
    }
    Ok(TorifyReport {
        ideal,
        fan,
        charts: reports,
    })
}

/// Verdict for a chart of `fan`, which must be one of its maximal cones.
pub fn verify_toroidal(s: &PreToroidalSitus, fan: &Fan, chart: &RationalCone) -> Result<ChartReport> {
    if !fan.cones().contains(chart) {
        return Err(Error::ChartNotInFan(format!("{chart:?}")));
    }
    chart_report(s, chart)
}

/// Verdict for any cone in the total lattice, without membership checks.
/// Applied to the unblown chart this is the negative control.
pub fn chart_verdict(s: &PreToroidalSitus, chart: &RationalCone) -> Result<Verdict> {
    chart_report(s, chart).map(|r| r.verdict)
}

fn chart_report(s: &PreToroidalSitus, chart: &RationalCone) -> Result<ChartReport> {
    let d = s.rank();
    if chart.ambient_rank() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: chart.ambient_rank(),
        });
    }
    let stab = annihilator_subgroup(s.group(), &chart.span().complement)?;
    let mut report = ChartReport {
        cone: chart.clone(),
        generator: None,
        verdict: Verdict::Toroidal,
        invariant_coordinate: None,
        invariant_character: None,
        x_in_boundary: true,
        stabilizer_invariants: stab.invariants(),
    };
    let ex = s.x_exponent();
    if !chart.has_ray(&ex) {
        // Every divisor meeting the chart is boundary; the group acts
        // through the torus of a toric chart.
        return Ok(report);
    }
    report.x_in_boundary = false;

    // Split off x: <e_x, u> = 1 and <ρ, u> = 0 on the other rays and lineality.
    let mut rows = vec![ex.clone()];
    let mut rhs = vec![BigInt::from(1)];
    for r in chart.rays().iter().filter(|r| **r != ex) {
        rows.push(r.clone());
        rhs.push(BigInt::from(0));
    }
    for l in chart.lineality() {
        rows.push(l.clone());
        rhs.push(BigInt::from(0));
    }
    let a = IntegerMatrix::from_rows(d, &rows)?;
    let Some(u0) = solve_integer(&a, &rhs) else {
        report.verdict = Verdict::NotPreToroidal;
        return Ok(report);
    };
    let kernel = integer_kernel(&a);
    let trivial = Character::trivial(s.group().generators().len());
    match adjust_by_units(&u0, &trivial, &kernel, s.group())? {
        Some(u) => {
            report.invariant_character = Some(trivial);
            report.invariant_coordinate = Some(u);
        }
        None => {
            report.invariant_character = Some(monomial_character(&u0, s.group())?);
            report.invariant_coordinate = Some(u0);
            report.verdict = Verdict::PreToroidalOnly;
        }
    }
    Ok(report)
}
