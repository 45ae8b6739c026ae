//! Power-sum generator sets.
//!
//! For `n` points in `d` dimensions the multisymmetric power sums
//! `eta_s(x) = sum_i prod_j x_{i,j}^{s_j}` with `|s| <= n` generate the algebra
//! of multisymmetric polynomials. A [`GeneratorBasis`] fixes one ordering of
//! the exponent vectors `s`; every other module indexes embeddings and
//! Jacobian rows through it.
//!
//! Ordering is graded and lexicographically descending inside a degree, so
//! for `d = 1` the basis reads `(1), (2), ..., (n)` and for `d = n = 2` it
//! reads `(1,0), (0,1), (2,0), (1,1), (0,2)`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multidegree `s = (s_1, ..., s_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    /// The pure exponent `k * e_axis` in `d` dimensions.
    pub fn pure(d: usize, axis: usize, k: u32) -> Self {
        let mut entries = vec![0; d];
        entries[axis] = k;
        ExponentVector(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }
}

impl Ord for ExponentVector {
    /// Total degree ascending, then lexicographically descending.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, s) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Ordered index set of the embedding for a given `(d, n)`.
///
/// Cloning is cheap; the exponent list is shared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorBasis {
    d: usize,
    n: usize,
    include_constant: bool,
    order: Arc<[ExponentVector]>,
}

impl GeneratorBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn include_constant(&self) -> bool {
        self.include_constant
    }

    /// Number of generators `m`.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn exponents(&self) -> &[ExponentVector] {
        &self.order
    }

    pub fn get(&self, k: usize) -> Option<&ExponentVector> {
        self.order.get(k)
    }

    /// Position of an exponent vector in the basis.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        if s.len() != self.d {
            return None;
        }
        let probe = ExponentVector(s.to_vec());
        self.order.binary_search(&probe).ok()
    }

    /// JSON array of integer arrays in basis order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(&*self.order).expect("exponent vectors serialize")
    }
}

/// Enumerate every exponent vector with `|s| <= n` in canonical order.
pub fn enumerate_generators(d: usize, n: usize, include_constant: bool) -> Result<GeneratorBasis> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "d and n must be positive (got d={d}, n={n})"
        )));
    }
    let n_deg = u32::try_from(n).map_err(|_| Error::InvalidParameter(format!("n={n} does not fit in u32")))?;
    let start = if include_constant { 0 } else { 1 };
    let mut order = Vec::new();
    let mut scratch = vec![0u32; d];
    for degree in start..=n_deg {
        compositions_desc(degree, 0, &mut scratch, &mut order);
    }
    Ok(GeneratorBasis {
        d,
        n,
        include_constant,
        order: order.into(),
    })
}

/// Push all compositions of `remaining` into `scratch[pos..]`, lexicographically descending.
fn compositions_desc(remaining: u32, pos: usize, scratch: &mut [u32], out: &mut Vec<ExponentVector>) {
    if pos + 1 == scratch.len() {
        scratch[pos] = remaining;
        out.push(ExponentVector(scratch.to_vec()));
        return;
    }
    for first in (0..=remaining).rev() {
        scratch[pos] = first;
        compositions_desc(remaining - first, pos + 1, scratch, out);
    }
}

/// `C(n + d, d)`, the number of generators including the constant.
pub fn generator_count(d: usize, n: usize) -> Result<u64> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "d and n must be positive (got d={d}, n={n})"
        )));
    }
    let k = d.min(n) as u128;
    let total = (n as u128).checked_add(d as u128).ok_or(Error::Overflow(n, d))?;
    // C(total, i) stays integral after each step
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul(total - k + i).ok_or(Error::Overflow(n, d))? / i;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow(n, d));
        }
    }
    Ok(acc as u64)
}
