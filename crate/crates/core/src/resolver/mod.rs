//! Toric resolution: simplicialization followed by multiplicity-reducing
//! star subdivisions.

mod plane;

pub use plane::{cyclic_normal_form, cyclic_quotient_cone, hj_resolution, CyclicType};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{parallelepiped_points, pulling_triangulation, Fan, RationalCone};
use crate::lattice::{IntegerMatrix, LatticeVector, SpanLattice};

/// Hard bound on the number of subdivision steps of [`resolve`].
pub const MAX_RESOLUTION_STEPS: usize = 200_000;

/// A cone touched by one subdivision step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffectedCone {
    pub rays: Vec<LatticeVector>,
    pub before: BigInt,
    /// Multiplicities of the cones replacing it.
    pub after: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionStep {
    /// Rays of the selected (worst) cone.
    pub cone: Vec<LatticeVector>,
    pub point: LatticeVector,
    pub multiplicity_before: BigInt,
    pub affected: Vec<AffectedCone>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolutionTrace {
    pub steps: Vec<ResolutionStep>,
}

impl ResolutionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn check_fan(fan: &Fan) -> Result<()> {
    for c in fan.cones() {
        if !c.is_strongly_convex() {
            return Err(Error::InvalidFan(format!("{c:?} contains a line")));
        }
    }
    Ok(())
}

/// Triangulates every cone by pulling at its lexicographically smallest ray.
pub fn make_simplicial(fan: &Fan) -> Result<Fan> {
    check_fan(fan)?;
    if fan.is_simplicial() {
        return Ok(fan.clone());
    }
    let cones = fan.cones().iter().flat_map(pulling_triangulation).collect();
    Fan::new(fan.ambient_rank(), cones)
}

/// A simplicial cone with its rays in span coordinates.
#[derive(Clone)]
struct Cell {
    rays: Vec<LatticeVector>,
    span: std::sync::Arc<SpanLattice>,
    coords: IntegerMatrix,
    adj: IntegerMatrix,
    det: BigInt,
}

impl Cell {
    fn new(rays: Vec<LatticeVector>, span: std::sync::Arc<SpanLattice>) -> Cell {
        let rows: Vec<LatticeVector> = rays.iter().map(|r| span.coords(r)).collect();
        let k = span.dim();
        let coords = IntegerMatrix::from_rows(k, &rows).expect("uniform");
        let det = coords.determinant();
        let adj = coords.adjugate();
        let mut cell = Cell {
            rays,
            span,
            coords,
            adj,
            det,
        };
        cell.normalize();
        cell
    }

    fn normalize(&mut self) {
        // Keep rays sorted so that the cell order is canonical.
        let mut idx: Vec<usize> = (0..self.rays.len()).collect();
        idx.sort_by(|&a, &b| self.rays[a].cmp(&self.rays[b]));
        if idx.iter().enumerate().all(|(i, &j)| i == j) {
            return;
        }
        let rays: Vec<LatticeVector> = idx.iter().map(|&i| self.rays[i].clone()).collect();
        let rows: Vec<LatticeVector> = idx.iter().map(|&i| self.coords.row_vec(i)).collect();
        self.coords = IntegerMatrix::from_rows(self.coords.cols(), &rows).expect("uniform");
        self.rays = rays;
        self.det = self.coords.determinant();
        self.adj = self.coords.adjugate();
    }

    fn multiplicity(&self) -> BigInt {
        self.det.abs()
    }

    /// Barycentric numerators over `|det|`, or `None` if `x` is outside the cone.
    fn barycentric(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        if !self.span.contains(x) {
            return None;
        }
        let c = self.span.coords(x);
        self.barycentric_coords(&c)
    }

    fn barycentric_coords(&self, c: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut lam = self.adj.left_apply(c);
        if self.det.is_negative() {
            lam.iter_mut().for_each(|l| *l = -&*l);
        }
        if lam.iter().any(|l| l.is_negative()) {
            None
        } else {
            Some(lam)
        }
    }

    fn to_cone(&self) -> RationalCone {
        RationalCone::new(self.span.ambient, &self.rays).expect("simplicial cell")
    }
}

fn lex_cmp(a: &Cell, b: &Cell) -> std::cmp::Ordering {
    a.rays.cmp(&b.rays)
}

/// Chooses the subdivision point of a cell: the nonzero lattice point of the
/// half-open fundamental parallelepiped minimizing the sum of barycentric
/// coordinates, ties broken lexicographically on the barycentric vector in
/// the cell's (sorted) ray order.
fn select_point(cell: &Cell) -> Result<LatticeVector> {
    let pts = parallelepiped_points(&cell.coords)?;
    let mut best: Option<(BigInt, Vec<BigInt>, LatticeVector)> = None;
    for p in pts {
        let lam = cell
            .barycentric_coords(&p)
            .expect("parallelepiped points lie in the cone");
        let sum: BigInt = lam.iter().sum();
        let better = match &best {
            None => true,
            Some((s, l, _)) => (&sum, &lam) < (s, l),
        };
        if better {
            best = Some((sum, lam, p));
        }
    }
    let (_, _, p) = best.ok_or_else(|| Error::InvalidArgument("smooth cell has no interior point".into()))?;
    Ok(cell.span.point(&p))
}

/// Resolves a fan: every output cone is smooth and the support is unchanged.
pub fn resolve(fan: &Fan) -> Result<(Fan, ResolutionTrace)> {
    let simplicial = make_simplicial(fan)?;
    let mut cells: Vec<Cell> = simplicial
        .cones()
        .iter()
        .map(|c| Cell::new(c.rays().to_vec(), std::sync::Arc::new(c.span())))
        .collect();
    cells.sort_by(lex_cmp);
    let mut trace = ResolutionTrace::default();
    loop {
        let worst = cells
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| {
                a.multiplicity()
                    .cmp(&b.multiplicity())
                    .then_with(|| lex_cmp(b, a))
            })
            .map(|(i, _)| i);
        let Some(wi) = worst else { break };
        if cells[wi].multiplicity().is_one() {
            break;
        }
        if trace.steps.len() >= MAX_RESOLUTION_STEPS {
            return Err(Error::Capacity(format!(
                "resolution exceeded {MAX_RESOLUTION_STEPS} subdivision steps"
            )));
        }
        let point = select_point(&cells[wi])?;
        let step_cone = cells[wi].rays.clone();
        let before = cells[wi].multiplicity();

        let mut next = Vec::with_capacity(cells.len() + 4);
        let mut affected = Vec::new();
        for cell in cells {
            let Some(lam) = cell.barycentric(&point) else {
                next.push(cell);
                continue;
            };
            let pc = cell.span.coords(&point);
            let mut after = Vec::new();
            for (i, l) in lam.iter().enumerate() {
                if l.is_zero() {
                    continue;
                }
                let mut rays = cell.rays.clone();
                rays[i] = point.clone();
                let mut coords = cell.coords.clone();
                for (j, x) in pc.iter().enumerate() {
                    coords[(i, j)] = x.clone();
                }
                let det = coords.determinant();
                let adj = coords.adjugate();
                let mut c = Cell {
                    rays,
                    span: cell.span.clone(),
                    coords,
                    adj,
                    det,
                };
                c.normalize();
                after.push(c.multiplicity());
                next.push(c);
            }
            affected.push(AffectedCone {
                rays: cell.rays.clone(),
                before: cell.multiplicity(),
                after,
            });
        }
        next.sort_by(lex_cmp);
        cells = next;
        trace.steps.push(ResolutionStep {
            cone: step_cone,
            point,
            multiplicity_before: before,
            affected,
        });
    }
    let cones = cells.iter().map(Cell::to_cone).collect();
    Ok((Fan::from_sorted_unchecked(fan.ambient_rank(), cones), trace))
}
