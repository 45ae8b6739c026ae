//! Analytic Jacobian of the embedding and its rank.
//!
//! `J[k, (i, j)] = d eta_{s(k)} / d x_{i,j}`, columns ordered point-major
//! (column `i * d + j`). The Jacobian loses full column rank exactly when two
//! points coincide; [`classify_rank`] reports the numerical rank together with
//! the coincident pair that explains a deficiency.

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::basis::GeneratorBasis;
use crate::embed::{powu, Configuration};
use crate::error::{Error, Result};

/// Default relative singular-value threshold for [`classify_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Points closer than this (max-norm) are flagged as numerically singular.
pub const DEFAULT_NEAR_COINCIDENCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianMatrix {
    d: usize,
    n: usize,
    matrix: DMatrix<f64>,
}

impl JacobianMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    /// Column index of `d / d x_{point, axis}`.
    pub fn column_of(&self, point: usize, axis: usize) -> usize {
        point * self.d + axis
    }

    pub fn get(&self, row: usize, point: usize, axis: usize) -> f64 {
        self.matrix[(row, self.column_of(point, axis))]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.matrix.column(col).iter().copied().collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.matrix.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .matrix
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }
}

pub fn jacobian(basis: &GeneratorBasis, config: &Configuration) -> Result<JacobianMatrix> {
    config.check_shape(basis.d(), basis.n())?;
    let (d, n) = (basis.d(), basis.n());
    let mut matrix = DMatrix::zeros(basis.len(), n * d);
    for (k, s) in basis.exponents().iter().enumerate() {
        let s = s.entries();
        for (i, x) in config.points().enumerate() {
            for j in 0..d {
                if s[j] == 0 {
                    continue;
                }
                let mut v = s[j] as f64;
                for (axis, (&xa, &sa)) in x.iter().zip(s).enumerate() {
                    let e = if axis == j { sa - 1 } else { sa };
                    v *= powu(xa, e);
                }
                matrix[(k, i * d + j)] = v;
            }
        }
    }
    Ok(JacobianMatrix { d, n, matrix })
}

/// Rank diagnostics for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RankReport {
    pub smallest_singular_value: f64,
    pub largest_singular_value: f64,
    pub rank: usize,
    pub full_column_rank: bool,
    /// First pair of exactly equal points (0-based, `i1 < i2`).
    pub coincident_pair: Option<(usize, usize)>,
    /// Some pair of points lies within the near-coincidence radius, or the
    /// rank is deficient.
    pub numerically_singular: bool,
}

impl Serialize for RankReport {
    /// `{"sigma_min", "rank", "full_column_rank", "coincident_pair", "numerically_singular"}`,
    /// with the pair written 1-based.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            sigma_min: f64,
            rank: usize,
            full_column_rank: bool,
            coincident_pair: Option<[usize; 2]>,
            numerically_singular: bool,
        }
        Wire {
            sigma_min: self.smallest_singular_value,
            rank: self.rank,
            full_column_rank: self.full_column_rank,
            coincident_pair: self.coincident_pair.map(|(a, b)| [a + 1, b + 1]),
            numerically_singular: self.numerically_singular,
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RankOptions {
    /// Relative singular-value threshold, in `(0, 1)`.
    pub tol: f64,
    /// Max-norm radius for `coincident_pair`; `0` means exact equality.
    pub coincidence_eps: f64,
    pub near_coincidence: f64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            tol: DEFAULT_RANK_TOL,
            coincidence_eps: 0.0,
            near_coincidence: DEFAULT_NEAR_COINCIDENCE,
        }
    }
}

pub fn classify_rank(basis: &GeneratorBasis, config: &Configuration, tol: f64) -> Result<RankReport> {
    classify_rank_with(
        basis,
        config,
        &RankOptions {
            tol,
            ..RankOptions::default()
        },
    )
}

pub fn classify_rank_with(basis: &GeneratorBasis, config: &Configuration, opts: &RankOptions) -> Result<RankReport> {
    if !(opts.tol > 0.0 && opts.tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rank tolerance must lie in (0, 1), got {}",
            opts.tol
        )));
    }
    if [opts.coincidence_eps, opts.near_coincidence]
        .iter()
        .any(|e| e.is_nan() || *e < 0.0)
    {
        return Err(Error::InvalidParameter("coincidence radii must be non-negative".into()));
    }
    let jac = jacobian(basis, config)?;
    let sv = jac.singular_values();
    let cols = jac.cols();
    let largest = sv.first().copied().unwrap_or(0.0);
    // fewer rows than columns would leave missing singular values at zero
    let smallest = if sv.len() < cols { 0.0 } else { sv[cols - 1] };
    let cutoff = opts.tol * largest;
    let rank = sv.iter().filter(|&&s| s > cutoff).count().min(cols);
    let full_column_rank = rank == cols;
    let coincident_pair = find_coincident_pair(config, opts.coincidence_eps);
    let near = coincident_pair.is_some() || find_coincident_pair(config, opts.near_coincidence).is_some();
    Ok(RankReport {
        smallest_singular_value: smallest,
        largest_singular_value: largest,
        rank,
        full_column_rank,
        coincident_pair,
        numerically_singular: near || !full_column_rank,
    })
}

fn points_within(a: &[f64], b: &[f64], eps: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps)
}

/// First pair `(i1, i2)`, `i1 < i2`, whose points agree coordinate-wise within `eps`.
pub fn find_coincident_pair(config: &Configuration, eps: f64) -> Option<(usize, usize)> {
    let n = config.n();
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| points_within(config.point(a), config.point(b), eps))
}

/// Membership in the coincidence set: some two points agree within `eps`.
pub fn singularity_predicate(config: &Configuration, eps: f64) -> bool {
    find_coincident_pair(config, eps.max(0.0)).is_some()
}
