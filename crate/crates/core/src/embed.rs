//! Configurations of points and their power-sum embedding.
//!
//! A [`Configuration`] is an ordered tuple of `n` points in `R^d`. Its orbit
//! under point permutations is represented by the canonical (lexicographically
//! sorted) tuple. [`embed`] always sums over the canonical order, so the
//! embedding of every representative of an orbit is bit-identical.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::basis::{ExponentVector, GeneratorBasis};
use crate::error::{Error, Result};

/// `n` points in `R^d`, stored point-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigurationRepr", into = "ConfigurationRepr")]
pub struct Configuration {
    d: usize,
    coords: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ConfigurationRepr {
    points: Vec<Vec<f64>>,
}

impl TryFrom<ConfigurationRepr> for Configuration {
    type Error = Error;

    fn try_from(repr: ConfigurationRepr) -> Result<Self> {
        Configuration::new(repr.points)
    }
}

impl From<Configuration> for ConfigurationRepr {
    fn from(c: Configuration) -> Self {
        ConfigurationRepr {
            points: c.points().map(<[f64]>::to_vec).collect(),
        }
    }
}

impl Configuration {
    /// Build from a list of points. All points must share one dimension and
    /// every coordinate must be finite.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let d = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidParameter("configuration needs at least one point".into()))?;
        let mut coords = Vec::with_capacity(d * points.len());
        for p in &points {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(d, coords)
    }

    /// Build from point-major coordinates `[x_{1,1}, ..., x_{1,d}, x_{2,1}, ...]`.
    pub fn from_flat(d: usize, coords: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("point dimension must be positive".into()));
        }
        if coords.is_empty() || !coords.len().is_multiple_of(d) {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates do not form whole points of dimension {d}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                point: pos / d,
                axis: pos % d,
            });
        }
        Ok(Configuration { d, coords })
    }

    /// Configuration of `n` scalar points (`d = 1`).
    pub fn from_scalars(xs: &[f64]) -> Result<Self> {
        Self::from_flat(1, xs.to_vec())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.d)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// `sigma * x = (x_{sigma(0)}, ..., x_{sigma(n-1)})`.
    pub fn permuted(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.n() {
            return Err(Error::CountMismatch {
                expected: self.n(),
                actual: sigma.len(),
            });
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for &src in sigma.images() {
            coords.extend_from_slice(self.point(src));
        }
        Ok(Configuration { d: self.d, coords })
    }

    /// Sum of squared coordinates over all points.
    pub fn squared_norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub(crate) fn check_shape(&self, d: usize, n: usize) -> Result<()> {
        if self.d != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: self.d,
            });
        }
        if self.n() != n {
            return Err(Error::CountMismatch {
                expected: n,
                actual: self.n(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_same_shape(&self, other: &Configuration) -> Result<()> {
        other.check_shape(self.d, self.n())
    }
}

/// Lexicographic order on points; coordinates are finite so `total_cmp`
/// agrees with numeric order apart from `-0.0 < 0.0`.
pub fn cmp_points(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// A bijection of `{0, ..., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParameter(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// `eta(x)` together with the basis that indexes it.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    basis: GeneratorBasis,
    values: Vec<f64>,
}

impl Embedding {
    /// Wrap raw values (e.g. read from a file) against a basis.
    pub fn from_values(basis: &GeneratorBasis, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                actual: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("embedding value {k} is not finite")));
        }
        Ok(Embedding {
            basis: basis.clone(),
            values,
        })
    }

    pub fn basis(&self) -> &GeneratorBasis {
        &self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn distance(&self, other: &Embedding) -> f64 {
        euclidean(&self.values, &other.values)
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `x^e` by repeated squaring; `x^0 = 1` including `0^0`.
pub fn powu(x: f64, mut e: u32) -> f64 {
    let mut base = x;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    acc
}

/// `prod_j point_j^{s_j}`.
pub fn monomial(point: &[f64], s: &ExponentVector) -> f64 {
    point
        .iter()
        .zip(s.entries())
        .fold(1.0, |acc, (&x, &e)| acc * powu(x, e))
}

/// Every basis monomial evaluated at a single point.
pub fn point_features(basis: &GeneratorBasis, point: &[f64]) -> Result<Vec<f64>> {
    if point.len() != basis.d() {
        return Err(Error::DimensionMismatch {
            expected: basis.d(),
            actual: point.len(),
        });
    }
    Ok(basis.exponents().iter().map(|s| monomial(point, s)).collect())
}

/// Sort points lexicographically; the result depends only on the orbit.
pub fn canonicalize(config: &Configuration) -> Configuration {
    let mut pts: Vec<&[f64]> = config.points().collect();
    pts.sort_by(|a, b| cmp_points(a, b));
    Configuration {
        d: config.d,
        coords: pts.concat(),
    }
}

/// Permutation taking `config` to its canonical representative.
pub fn canonical_permutation(config: &Configuration) -> Permutation {
    let mut idx: Vec<usize> = (0..config.n()).collect();
    idx.sort_by(|&a, &b| cmp_points(config.point(a), config.point(b)).then(a.cmp(&b)));
    Permutation(idx)
}

/// `eta(x) = sum_i phi(x_i)`, summed in canonical point order.
pub fn embed(basis: &GeneratorBasis, config: &Configuration) -> Result<Embedding> {
    config.check_shape(basis.d(), basis.n())?;
    let canonical = canonicalize(config);
    let mut values = vec![0.0; basis.len()];
    for p in canonical.points() {
        for (v, s) in values.iter_mut().zip(basis.exponents()) {
            *v += monomial(p, s);
        }
    }
    Ok(Embedding {
        basis: basis.clone(),
        values,
    })
}

/// Recover `sum_{i,j} x_{i,j}^2` from `eta(x)` as `sum_j eta_{2 e_j}(x)`.
///
/// Needs `n >= 2` so that the pure quadratic power sums are generators.
pub fn reconstruct_norm(basis: &GeneratorBasis, e: &Embedding) -> Result<f64> {
    if e.basis() != basis {
        return Err(Error::InvalidParameter(
            "embedding was built on a different basis".into(),
        ));
    }
    if basis.n() < 2 {
        return Err(Error::Unsupported(
            "norm reconstruction needs n >= 2 (degree-2 power sums absent for n = 1)".into(),
        ));
    }
    let d = basis.d();
    let mut total = 0.0;
    for axis in 0..d {
        let s = ExponentVector::pure(d, axis, 2);
        let k = basis
            .index_of(s.entries())
            .expect("pure quadratic exponent is in every basis with n >= 2");
        total += e.values()[k];
    }
    Ok(total)
}

/// Upper bound on `sum |x_i|^2` over every preimage of `e`: `d * max_k |e_k|`.
pub fn preimage_norm_bound(basis: &GeneratorBasis, e: &Embedding) -> Result<f64> {
    reconstruct_norm(basis, e)?;
    let sup = e.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(basis.d() as f64 * sup)
}
