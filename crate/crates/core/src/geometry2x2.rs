//! Image and fibers of the embedding for two points in the plane.
//!
//! Coordinates follow the labeling `(z1, z2, z3, z4, w)`:
//! `z1 = x11 + x21`, `z2 = x12 + x22`, `z3 = x11^2 + x21^2`,
//! `z4 = x12^2 + x22^2`, `w = x11 x12 + x21 x22`. The canonical basis stores
//! these as `(1,0), (0,1), (2,0), (1,1), (0,2)`, i.e. `w` before `z4`;
//! [`z_coordinates`] translates.
//!
//! Over a projected point `(z1..z4)` the fiber has two `w` values when both
//! `2 z3 > z1^2` and `2 z4 > z2^2`, one when exactly one of them is an
//! equality, and one singular value (both points equal) when both are.

use serde::Serialize;

use crate::basis::GeneratorBasis;
use crate::embed::{Configuration, Embedding};
use crate::error::{Error, Result};

/// Discriminants within this band are treated as zero.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberQuery {
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
    pub z4: f64,
}

impl FiberQuery {
    pub fn new(z1: f64, z2: f64, z3: f64, z4: f64) -> Result<Self> {
        if ![z1, z2, z3, z4].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("fiber query coordinates must be finite".into()));
        }
        Ok(FiberQuery { z1, z2, z3, z4 })
    }

    pub fn from_slice(z: &[f64]) -> Result<Self> {
        match z {
            [z1, z2, z3, z4] => Self::new(*z1, *z2, *z3, *z4),
            _ => Err(Error::DimensionMismatch {
                expected: 4,
                actual: z.len(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiberCase {
    Empty,
    TwoRegular,
    OneRegular,
    OneSingular,
}

impl FiberCase {
    pub fn as_str(self) -> &'static str {
        match self {
            FiberCase::Empty => "Empty",
            FiberCase::TwoRegular => "TwoRegular",
            FiberCase::OneRegular => "OneRegular",
            FiberCase::OneSingular => "OneSingular",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberClassification {
    pub case: FiberCase,
    /// Ascending.
    pub w_values: Vec<f64>,
    /// `witnesses[k]` realizes `w_values[k]`.
    pub witnesses: Vec<Configuration>,
    /// Some discriminant was nonzero but inside [`DISCRIMINANT_TOL`].
    pub near_boundary: bool,
}

/// Projection onto `(z1, z2, z3, z4)` is in the image iff `2 z3 >= z1^2` and `2 z4 >= z2^2`.
pub fn image_membership(q: &FiberQuery) -> bool {
    axis_admissible(q.z1, q.z3) && axis_admissible(q.z2, q.z4)
}

/// One coordinate axis: is `(sum, square_sum)` realized by two reals?
pub fn axis_admissible(sum: f64, square_sum: f64) -> bool {
    2.0 * square_sum >= sum * sum
}

enum AxisRoots {
    Empty,
    Double { t: f64, near: bool },
    Pair { lo: f64, hi: f64, disc: f64 },
}

/// Solve `t^2 - sum t + (sum^2 - square_sum) / 2 = 0`.
fn axis_roots(sum: f64, square_sum: f64) -> AxisRoots {
    let disc = 2.0 * square_sum - sum * sum;
    if disc < -DISCRIMINANT_TOL {
        AxisRoots::Empty
    } else if disc.abs() <= DISCRIMINANT_TOL {
        AxisRoots::Double {
            t: sum / 2.0,
            near: disc != 0.0,
        }
    } else {
        let r = disc.sqrt();
        AxisRoots::Pair {
            lo: (sum - r) / 2.0,
            hi: (sum + r) / 2.0,
            disc,
        }
    }
}

fn witness(a: (f64, f64), b: (f64, f64)) -> Configuration {
    Configuration::new(vec![vec![a.0, a.1], vec![b.0, b.1]]).expect("finite witness")
}

/// `w = x1 y1 + x2 y2` in closed form: with `x = (s -+ sqrt(dx)) / 2` and
/// `y = (u -+ sqrt(dy)) / 2`, `w = (s u +- sqrt(dx dy)) / 2`.
fn mixed_moment(s: f64, u: f64, dx: f64, dy: f64, sign: f64) -> f64 {
    (s * u + sign * (dx * dy).sqrt()) / 2.0
}

pub fn fiber(q: &FiberQuery) -> FiberClassification {
    let (s, u) = (q.z1, q.z2);
    let xs = axis_roots(q.z1, q.z3);
    let ys = axis_roots(q.z2, q.z4);
    let (case, mut found, near) = match (xs, ys) {
        (AxisRoots::Empty, _) | (_, AxisRoots::Empty) => (FiberCase::Empty, vec![], false),
        (
            AxisRoots::Pair {
                lo: a1,
                hi: a2,
                disc: dx,
            },
            AxisRoots::Pair {
                lo: b1,
                hi: b2,
                disc: dy,
            },
        ) => (
            FiberCase::TwoRegular,
            vec![
                (mixed_moment(s, u, dx, dy, 1.0), witness((a1, b1), (a2, b2))),
                (mixed_moment(s, u, dx, dy, -1.0), witness((a1, b2), (a2, b1))),
            ],
            false,
        ),
        (AxisRoots::Pair { lo: a1, hi: a2, .. }, AxisRoots::Double { t, near }) => (
            FiberCase::OneRegular,
            vec![(mixed_moment(s, u, 0.0, 0.0, 1.0), witness((a1, t), (a2, t)))],
            near,
        ),
        (AxisRoots::Double { t, near }, AxisRoots::Pair { lo: b1, hi: b2, .. }) => (
            FiberCase::OneRegular,
            vec![(mixed_moment(s, u, 0.0, 0.0, 1.0), witness((t, b1), (t, b2)))],
            near,
        ),
        (AxisRoots::Double { t: a, near: na }, AxisRoots::Double { t: b, near: nb }) => (
            FiberCase::OneSingular,
            vec![(mixed_moment(s, u, 0.0, 0.0, 1.0), witness((a, b), (a, b)))],
            na || nb,
        ),
    };
    found.sort_by(|l, r| l.0.total_cmp(&r.0));
    let (w_values, witnesses) = found.into_iter().unzip();
    FiberClassification {
        case,
        w_values,
        witnesses,
        near_boundary: near,
    }
}

/// `(z1, z2, z3, z4, w)` from an embedding over the `d = n = 2` basis.
pub fn z_coordinates(e: &Embedding) -> Result<[f64; 5]> {
    let b: &GeneratorBasis = e.basis();
    if b.d() != 2 || b.n() != 2 {
        return Err(Error::Unsupported(format!(
            "fiber geometry needs d = n = 2, got d = {}, n = {}",
            b.d(),
            b.n()
        )));
    }
    let at = |s: [u32; 2]| e.values()[b.index_of(&s).expect("degree <= 2 exponent present")];
    Ok([at([1, 0]), at([0, 1]), at([2, 0]), at([0, 2]), at([1, 1])])
}

/// Drop `w`: the projection onto the first four `z` coordinates.
pub fn project(e: &Embedding) -> Result<FiberQuery> {
    let [z1, z2, z3, z4, _] = z_coordinates(e)?;
    FiberQuery::new(z1, z2, z3, z4)
}

/// Uniform grid, the same on each of the four axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl ScanGrid {
    pub fn nodes(&self) -> Result<Vec<f64>> {
        if self.steps == 0 || !self.lo.is_finite() || !self.hi.is_finite() || self.hi < self.lo {
            return Err(Error::InvalidParameter(format!(
                "grid needs finite lo <= hi and at least one step (lo={}, hi={}, steps={})",
                self.lo, self.hi, self.steps
            )));
        }
        if self.steps == 1 {
            return Ok(vec![self.lo]);
        }
        let last = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / last)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub z: [f64; 4],
    pub case: FiberCase,
    pub w_count: usize,
}

/// Classify every node of the grid, `z1` varying slowest.
pub fn fiber_cardinality_scan(grid: &ScanGrid) -> Result<Vec<ScanRow>> {
    let nodes = grid.nodes()?;
    let mut rows = Vec::with_capacity(nodes.len().pow(4));
    for &z1 in &nodes {
        for &z2 in &nodes {
            for &z3 in &nodes {
                for &z4 in &nodes {
                    let f = fiber(&FiberQuery { z1, z2, z3, z4 });
                    rows.push(ScanRow {
                        z: [z1, z2, z3, z4],
                        case: f.case,
                        w_count: f.w_values.len(),
                    });
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_generators;
    use crate::calculus::singularity_predicate;
    use crate::embed::embed;

    fn q(z: [f64; 4]) -> FiberQuery {
        FiberQuery::from_slice(&z).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(image_membership(&q([0.0, 0.0, 1.0, 1.0])));
        assert!(!image_membership(&q([2.0, 0.0, 1.0, 0.0])));
        assert!(image_membership(&q([0.0, 0.0, 0.0, 0.0])));
    }

    #[test]
    fn two_regular_fiber() {
        let f = fiber(&q([0.0, 0.0, 1.0, 1.0]));
        assert_eq!(f.case, FiberCase::TwoRegular);
        assert_eq!(f.w_values.len(), 2);
        assert!((f.w_values[0] + 1.0).abs() < 1e-10);
        assert!((f.w_values[1] - 1.0).abs() < 1e-10);
        let r = 0.5f64.sqrt();
        for p in f.witnesses[0].points().chain(f.witnesses[1].points()) {
            assert!((p[0].abs() - r).abs() < 1e-12 && (p[1].abs() - r).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_fiber() {
        let f = fiber(&q([2.0, 2.0, 2.0, 2.0]));
        assert_eq!(f.case, FiberCase::OneSingular);
        assert_eq!(f.w_values, vec![2.0]);
        let w = &f.witnesses[0];
        assert_eq!(w.point(0), &[1.0, 1.0]);
        assert_eq!(w.point(1), &[1.0, 1.0]);
        assert!(singularity_predicate(w, 0.0));
        assert!(!f.near_boundary);
    }

    #[test]
    fn one_regular_fiber() {
        let f = fiber(&q([0.0, 2.0, 1.0, 2.0]));
        assert_eq!(f.case, FiberCase::OneRegular);
        assert_eq!(f.w_values, vec![0.0]);
        assert!(!singularity_predicate(&f.witnesses[0], 0.0));
    }

    #[test]
    fn empty_fiber_off_image() {
        let f = fiber(&q([2.0, 0.0, 1.0, 0.0]));
        assert_eq!(f.case, FiberCase::Empty);
        assert!(f.w_values.is_empty() && f.witnesses.is_empty());
    }

    #[test]
    fn near_boundary_flag() {
        let f = fiber(&q([0.0, 0.0, 1e-13, 1.0]));
        assert_eq!(f.case, FiberCase::OneRegular);
        assert!(f.near_boundary);
    }

    #[test]
    fn witnesses_embed_back() {
        let b = enumerate_generators(2, 2, false).unwrap();
        let query = q([0.3, -0.4, 0.5, 0.9]);
        let f = fiber(&query);
        for (w, c) in f.w_values.iter().zip(&f.witnesses) {
            let [z1, z2, z3, z4, ww] = z_coordinates(&embed(&b, c).unwrap()).unwrap();
            for (got, want) in [z1, z2, z3, z4, ww]
                .iter()
                .zip([query.z1, query.z2, query.z3, query.z4, *w])
            {
                assert!((got - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn z_coordinates_reorder() {
        let b = enumerate_generators(2, 2, false).unwrap();
        let c = Configuration::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let e = embed(&b, &c).unwrap();
        assert_eq!(z_coordinates(&e).unwrap(), [1.0, 1.0, 1.0, 1.0, 0.0]);
        let b3 = enumerate_generators(2, 3, false).unwrap();
        let c3 = Configuration::new(vec![vec![1.0, 0.0]; 3]).unwrap();
        assert!(z_coordinates(&embed(&b3, &c3).unwrap()).is_err());
    }

    #[test]
    fn small_scan() {
        let rows = fiber_cardinality_scan(&ScanGrid {
            lo: -1.0,
            hi: 1.0,
            steps: 3,
        })
        .unwrap();
        assert_eq!(rows.len(), 81);
        let origin = rows.iter().find(|r| r.z == [0.0; 4]).unwrap();
        assert_eq!(origin.case, FiberCase::OneSingular);
        for r in &rows {
            let on = image_membership(&q(r.z));
            assert_eq!(r.case == FiberCase::Empty, !on);
            let expected = match r.case {
                FiberCase::Empty => 0,
                FiberCase::TwoRegular => 2,
                _ => 1,
            };
            assert_eq!(r.w_count, expected);
        }
        assert!(fiber_cardinality_scan(&ScanGrid {
            lo: 1.0,
            hi: 0.0,
            steps: 3
        })
        .is_err());
    }
}
