//! Orbit equality, the quotient metric, and separating polynomials.
//!
//! Two configurations lie in the same orbit when some permutation of points
//! maps one onto the other. When they do not, [`separating_polynomial`]
//! builds a symmetric polynomial `p(y) = sum_i q(y_i)` that takes different
//! values on them: `q` interpolates an indicator on the union of their
//! supports, chosen where the point multiplicities differ.

use nalgebra::{DMatrix, DVector};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::assignment::{has_perfect_matching, min_cost_assignment};
use crate::basis::{enumerate_generators, ExponentVector};
use crate::embed::{canonicalize, cmp_points, monomial, Configuration};
use crate::error::{Error, Result};

/// Residual at the nodes below which an interpolant is accepted.
pub const INTERPOLATION_RESIDUAL: f64 = 1e-10;

/// Extra total degree allowed beyond the support size before giving up.
pub const DEGREE_SLACK: usize = 2;

/// True iff some permutation matches the points of `x` and `y` coordinate-wise within `eps`.
pub fn orbit_equal(x: &Configuration, y: &Configuration, eps: f64) -> Result<bool> {
    x.check_same_shape(y)?;
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidParameter(format!("eps must be non-negative, got {eps}")));
    }
    let adj: Vec<Vec<bool>> = x
        .points()
        .map(|a| {
            y.points()
                .map(|b| a.iter().zip(b).all(|(u, v)| (u - v).abs() <= eps))
                .collect()
        })
        .collect();
    Ok(has_perfect_matching(&adj))
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum()
}

/// Optimal matching of the points of `y` to those of `x`: `x_i <-> y_{assign[i]}`.
pub fn optimal_matching(x: &Configuration, y: &Configuration) -> Result<Vec<usize>> {
    x.check_same_shape(y)?;
    let cost: Vec<Vec<f64>> = x
        .points()
        .map(|a| y.points().map(|b| squared_distance(a, b)).collect())
        .collect();
    Ok(min_cost_assignment(&cost))
}

/// `min_sigma ||x - sigma * y||`, the Euclidean metric on orbits.
pub fn quotient_distance(x: &Configuration, y: &Configuration) -> Result<f64> {
    let assign = optimal_matching(x, y)?;
    let total: f64 = assign
        .iter()
        .enumerate()
        .map(|(i, &k)| squared_distance(x.point(i), y.point(k)))
        .sum();
    Ok(total.sqrt())
}

/// `p(y_1, ..., y_n) = sum_i q(y_i)`, stored through the inner polynomial `q`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "Vec<Term>")]
pub struct SeparatingPolynomial {
    d: usize,
    terms: Vec<(ExponentVector, f64)>,
}

#[derive(Serialize, Deserialize)]
struct Term {
    exponent: ExponentVector,
    coeff: f64,
}

impl TryFrom<Vec<Term>> for SeparatingPolynomial {
    type Error = Error;

    fn try_from(terms: Vec<Term>) -> Result<Self> {
        let d = terms
            .first()
            .map(|t| t.exponent.dim())
            .ok_or_else(|| Error::InvalidParameter("polynomial has no terms".into()))?;
        if let Some(t) = terms.iter().find(|t| t.exponent.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: t.exponent.dim(),
            });
        }
        Ok(SeparatingPolynomial {
            d,
            terms: terms.into_iter().map(|t| (t.exponent, t.coeff)).collect(),
        })
    }
}

impl Serialize for SeparatingPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (s, c) in &self.terms {
            seq.serialize_element(&Term {
                exponent: s.clone(),
                coeff: *c,
            })?;
        }
        seq.end()
    }
}

impl SeparatingPolynomial {
    pub fn new(d: usize, terms: Vec<(ExponentVector, f64)>) -> Result<Self> {
        if let Some((s, _)) = terms.iter().find(|(s, _)| s.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: s.dim(),
            });
        }
        Ok(SeparatingPolynomial { d, terms })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &[(ExponentVector, f64)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(s, _)| s.total_degree()).max().unwrap_or(0)
    }

    /// The inner polynomial `q` at one point.
    pub fn inner(&self, point: &[f64]) -> f64 {
        self.terms.iter().map(|(s, c)| c * monomial(point, s)).sum()
    }
}

/// `p(config) = sum_i q(x_i)`, summed in canonical point order.
pub fn evaluate_separating(p: &SeparatingPolynomial, config: &Configuration) -> Result<f64> {
    if config.d() != p.d {
        return Err(Error::DimensionMismatch {
            expected: p.d,
            actual: config.d(),
        });
    }
    Ok(canonicalize(config).points().map(|pt| p.inner(pt)).sum())
}

/// Distinct points of both configurations, sorted, with `-0.0` folded into `0.0`.
fn union_support(x: &Configuration, y: &Configuration) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = x
        .points()
        .chain(y.points())
        .map(|p| p.iter().map(|c| c + 0.0).collect())
        .collect();
    pts.sort_by(|a, b| cmp_points(a, b));
    pts.dedup();
    pts
}

fn multiplicities(config: &Configuration, support: &[Vec<f64>]) -> Vec<usize> {
    let mut counts = vec![0; support.len()];
    for p in config.points() {
        let j = support
            .iter()
            .position(|s| s.as_slice() == p)
            .expect("every point lies in the union support");
        counts[j] += 1;
    }
    counts
}

/// Graded monomials of total degree at most `degree` in `d` variables.
fn monomials_up_to(d: usize, degree: usize) -> Vec<ExponentVector> {
    if degree == 0 {
        return vec![ExponentVector::new(vec![0; d])];
    }
    enumerate_generators(d, degree, true)
        .expect("d and degree are positive")
        .exponents()
        .to_vec()
}

/// Least-squares polynomial through `(nodes[j], values[j])`, raising the total
/// degree until the node residual drops below [`INTERPOLATION_RESIDUAL`].
pub fn interpolate(d: usize, nodes: &[Vec<f64>], values: &[f64], max_degree: usize) -> Result<SeparatingPolynomial> {
    let t = nodes.len();
    let rhs = DVector::from_column_slice(values);
    let mut best = f64::INFINITY;
    for degree in 0..=max_degree {
        let monos = monomials_up_to(d, degree);
        let vander = DMatrix::from_fn(t, monos.len(), |r, c| monomial(&nodes[r], &monos[c]));
        let svd = vander.clone().svd(true, true);
        let cutoff = 1e-13 * svd.singular_values.max();
        let coeffs = svd
            .solve(&rhs, cutoff)
            .map_err(|e| Error::Interpolation(e.to_string()))?;
        let residual = (&vander * &coeffs - &rhs).amax();
        best = best.min(residual);
        if residual < INTERPOLATION_RESIDUAL {
            let terms = monos
                .into_iter()
                .zip(coeffs.iter().copied())
                .filter(|&(_, c)| c != 0.0)
                .collect();
            return Ok(SeparatingPolynomial { d, terms });
        }
    }
    Err(Error::Interpolation(format!(
        "no interpolant of total degree <= {max_degree} through {t} nodes (best residual {best:e})"
    )))
}

/// A symmetric polynomial taking different values on `x` and `y`.
///
/// Fails with a precondition error if the two configurations share an orbit.
pub fn separating_polynomial(x: &Configuration, y: &Configuration) -> Result<SeparatingPolynomial> {
    x.check_same_shape(y)?;
    let support = union_support(x, y);
    let cx = multiplicities(x, &support);
    let cy = multiplicities(y, &support);
    let Some(first_diff) = cx.iter().zip(&cy).position(|(a, b)| a != b) else {
        return Err(Error::Precondition(
            "configurations are in the same orbit; no polynomial separates them".into(),
        ));
    };
    let mut target = vec![0.0; support.len()];
    target[first_diff] = 1.0;
    interpolate(x.d(), &support, &target, support.len() + DEGREE_SLACK)
}
