//! Regularity probes for the factor `g` in `f = g o eta`.
//!
//! Along paths that approach the coincidence set, `f` stays Lipschitz (or
//! `C^1`) while `g`, read off through the embedding, does not. Two
//! diagnostics make this visible: the Lipschitz ratio
//! `|f(a) - f(b)| / ||eta(a) - eta(b)||` between two paths, and a local Hölder
//! exponent of `g` estimated as a log-log slope.

use crate::basis::{enumerate_generators, GeneratorBasis};
use crate::embed::{canonicalize, embed, euclidean, Configuration, Embedding};
use crate::error::{Error, Result};

pub const MIN_PATH_SAMPLES: usize = 4;

/// Minimum number of usable samples in a log-log fit.
pub const MIN_FIT_SAMPLES: usize = 3;

pub type SymmetricFn = fn(&Configuration) -> f64;

/// `sum over points and axes of phi(x_{i,j})`, in canonical point order.
fn sum_coords(config: &Configuration, phi: impl Fn(f64) -> f64) -> f64 {
    canonicalize(config).coords().iter().map(|&x| phi(x)).sum()
}

/// `sum |x_{i,j}|`
pub fn abs_sum(config: &Configuration) -> f64 {
    sum_coords(config, f64::abs)
}

/// `sum x_{i,j}^{4/3}`, read as `(x^4)^{1/3}` so negative coordinates are allowed.
pub fn four_thirds_sum(config: &Configuration) -> f64 {
    sum_coords(config, |x| (x * x * x * x).cbrt())
}

/// `sum x_{i,j}^2`
pub fn square_sum(config: &Configuration) -> f64 {
    sum_coords(config, |x| x * x)
}

/// `sum x_{i,j}`
pub fn linear_sum(config: &Configuration) -> f64 {
    sum_coords(config, |x| x)
}

/// `t_start, t_start / 2, ...`, `steps` values.
pub fn geometric_params(t_start: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_start > 0.0 && t_start.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t_start must be positive, got {t_start}"
        )));
    }
    Ok((0..steps).map(|k| t_start * 0.5f64.powi(k as i32)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSample {
    pub t: f64,
    pub config: Configuration,
    pub embedding: Embedding,
    pub value: f64,
}

/// Samples of a symmetric function along a parametrized path, `t` decreasing to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePath {
    basis: GeneratorBasis,
    samples: Vec<ProbeSample>,
}

impl ProbePath {
    pub fn trace(
        basis: &GeneratorBasis,
        f: &dyn Fn(&Configuration) -> f64,
        path: &dyn Fn(f64) -> Configuration,
        params: &[f64],
    ) -> Result<Self> {
        if params.len() < MIN_PATH_SAMPLES {
            return Err(Error::InsufficientSamples {
                needed: MIN_PATH_SAMPLES,
                have: params.len(),
            });
        }
        if params.iter().any(|&t| t.is_nan() || t <= 0.0) || params.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidParameter(
                "path parameters must be positive and strictly decreasing".into(),
            ));
        }
        let samples = params
            .iter()
            .map(|&t| {
                let config = path(t);
                let embedding = embed(basis, &config)?;
                let value = f(&config);
                Ok(ProbeSample {
                    t,
                    config,
                    embedding,
                    value,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProbePath {
            basis: basis.clone(),
            samples,
        })
    }

    pub fn samples(&self) -> &[ProbeSample] {
        &self.samples
    }

    pub fn params(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn basis(&self) -> &GeneratorBasis {
        &self.basis
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSample {
    pub t: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LipschitzRatios {
    pub samples: Vec<RatioSample>,
    /// Parameters where the two embeddings coincided; excluded from `samples`.
    pub flagged: Vec<f64>,
}

impl LipschitzRatios {
    pub fn ratios(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.ratio).collect()
    }
}

/// `|f(a(t)) - f(b(t))| / ||eta(a(t)) - eta(b(t))||` per shared parameter.
///
/// Since `g o eta = f`, these are difference quotients of `g` itself.
pub fn lipschitz_ratio_sequence(a: &ProbePath, b: &ProbePath) -> Result<LipschitzRatios> {
    if a.basis != b.basis {
        return Err(Error::InvalidParameter("paths use different bases".into()));
    }
    if a.samples.len() != b.samples.len()
        || a.samples
            .iter()
            .zip(&b.samples)
            .any(|(x, y)| x.t.to_bits() != y.t.to_bits())
    {
        return Err(Error::InvalidParameter("paths must share their parameters".into()));
    }
    let mut out = LipschitzRatios::default();
    for (sa, sb) in a.samples.iter().zip(&b.samples) {
        let dist = sa.embedding.distance(&sb.embedding);
        if dist == 0.0 {
            out.flagged.push(sa.t);
        } else {
            out.samples.push(RatioSample {
                t: sa.t,
                ratio: (sa.value - sb.value).abs() / dist,
            });
        }
    }
    Ok(out)
}

/// One point of the log-log plot behind a Hölder estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogPoint {
    pub t: f64,
    pub log_dz: f64,
    pub log_df: f64,
}

/// `(log ||z(t) - anchor||, log |f(x(t)) - anchor_value|)` for every sample
/// with nonzero differences.
pub fn log_log_points(path: &ProbePath, anchor: &Embedding, anchor_value: f64) -> Result<Vec<LogLogPoint>> {
    if anchor.basis() != &path.basis {
        return Err(Error::InvalidParameter("anchor uses a different basis".into()));
    }
    let dz: Vec<f64> = path
        .samples
        .iter()
        .map(|s| euclidean(s.embedding.values(), anchor.values()))
        .collect();
    if dz.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition(
            "distance to the anchor must decrease strictly along the path".into(),
        ));
    }
    Ok(path
        .samples
        .iter()
        .zip(dz)
        .filter_map(|(s, dz)| {
            let df = (s.value - anchor_value).abs();
            (dz > 0.0 && df > 0.0).then(|| LogLogPoint {
                t: s.t,
                log_dz: dz.ln(),
                log_df: df.ln(),
            })
        })
        .collect())
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Local Hölder exponent of `g` at `anchor` along `path`: the log-log slope
/// over the tail half of the samples (at least [`MIN_FIT_SAMPLES`]).
pub fn holder_exponent(path: &ProbePath, anchor: &Embedding, anchor_value: f64) -> Result<f64> {
    let k = path.samples.len();
    let tail_len = (k / 2).max(MIN_FIT_SAMPLES);
    let first_t = path.samples[k.saturating_sub(tail_len)].t;
    let tail: Vec<LogLogPoint> = log_log_points(path, anchor, anchor_value)?
        .into_iter()
        .filter(|p| p.t <= first_t)
        .collect();
    if tail.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_FIT_SAMPLES,
            have: tail.len(),
        });
    }
    let xs: Vec<f64> = tail.iter().map(|p| p.log_dz).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.log_df).collect();
    Ok(ols_slope(&xs, &ys))
}

pub type PathFn = fn(f64) -> Configuration;

/// A ready-made regularity experiment on two scalar points.
#[derive(Debug, Clone, Copy)]
pub struct BuiltinExample {
    pub id: &'static str,
    pub summary: &'static str,
    pub f: SymmetricFn,
    /// Path whose embedding tends to the anchor; used for the exponent.
    pub holder_path: PathFn,
    /// Anchor configuration at `t = 0`.
    pub anchor: PathFn,
    /// Two paths compared by the Lipschitz ratio.
    pub ratio_paths: (PathFn, PathFn),
    pub expected_exponent: f64,
}

pub const DEFAULT_T_START: f64 = 0.125;
pub const DEFAULT_T_STEPS: usize = 8;

fn pair(a: f64, b: f64) -> Configuration {
    Configuration::from_scalars(&[a, b]).expect("finite scalars")
}

/// `(sqrt(t/2), -sqrt(t/2))`, whose embedding is `(0, t)`.
fn on_square_axis(t: f64) -> Configuration {
    let r = (t / 2.0).sqrt();
    pair(r, -r)
}

fn origin(_: f64) -> Configuration {
    pair(0.0, 0.0)
}

fn opposite(t: f64) -> Configuration {
    pair(t, -t)
}

fn opposite_double(t: f64) -> Configuration {
    pair(2.0 * t, -2.0 * t)
}

pub const BUILTIN_EXAMPLES: [BuiltinExample; 3] = [
    BuiltinExample {
        id: "lipschitz-loss",
        summary: "f = |x1| + |x2| is Lipschitz; g(0, t) = sqrt(2t) is not",
        f: abs_sum,
        holder_path: on_square_axis,
        anchor: origin,
        ratio_paths: (opposite, opposite_double),
        expected_exponent: 0.5,
    },
    BuiltinExample {
        id: "c1-loss",
        summary: "f = x1^(4/3) + x2^(4/3) is C^1; g(0, t) = 2^(1/3) t^(2/3) is not",
        f: four_thirds_sum,
        holder_path: on_square_axis,
        anchor: origin,
        ratio_paths: (opposite, origin),
        expected_exponent: 2.0 / 3.0,
    },
    BuiltinExample {
        id: "smooth-control",
        summary: "f = x1^2 + x2^2; g(z1, z2) = z2 is linear",
        f: square_sum,
        holder_path: on_square_axis,
        anchor: origin,
        ratio_paths: (opposite, opposite_double),
        expected_exponent: 1.0,
    },
];

pub fn builtin_example(id: &str) -> Result<&'static BuiltinExample> {
    BUILTIN_EXAMPLES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownExample {
            id: id.to_string(),
            valid: BUILTIN_EXAMPLES.iter().map(|e| e.id).collect(),
        })
}

/// Everything a builtin example computes on one parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub ratios: LipschitzRatios,
    pub log_log: Vec<LogLogPoint>,
    pub exponent: f64,
}

impl BuiltinExample {
    pub fn basis(&self) -> GeneratorBasis {
        enumerate_generators(1, 2, false).expect("fixed parameters")
    }

    pub fn run(&self, params: &[f64]) -> Result<ProbeReport> {
        let basis = self.basis();
        let f = self.f;
        let a = ProbePath::trace(&basis, &f, &self.ratio_paths.0, params)?;
        let b = ProbePath::trace(&basis, &f, &self.ratio_paths.1, params)?;
        let ratios = lipschitz_ratio_sequence(&a, &b)?;

        let path = ProbePath::trace(&basis, &f, &self.holder_path, params)?;
        let anchor_config = (self.anchor)(0.0);
        let anchor = embed(&basis, &anchor_config)?;
        let anchor_value = f(&anchor_config);
        let log_log = log_log_points(&path, &anchor, anchor_value)?;
        let exponent = holder_exponent(&path, &anchor, anchor_value)?;
        Ok(ProbeReport {
            ratios,
            log_log,
            exponent,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis() -> GeneratorBasis {
        enumerate_generators(1, 2, false).unwrap()
    }

    fn params() -> Vec<f64> {
        geometric_params(DEFAULT_T_START, DEFAULT_T_STEPS).unwrap()
    }

    fn ratios_for(f: SymmetricFn) -> LipschitzRatios {
        let b = basis();
        let a = ProbePath::trace(&b, &f, &opposite, &params()).unwrap();
        let c = ProbePath::trace(&b, &f, &opposite_double, &params()).unwrap();
        lipschitz_ratio_sequence(&a, &c).unwrap()
    }

    #[test]
    fn abs_sum_ratio_is_one_over_three_t() {
        let r = ratios_for(abs_sum);
        assert_eq!(r.samples.len(), DEFAULT_T_STEPS);
        for s in &r.samples {
            let exact = 1.0 / (3.0 * s.t);
            assert!((s.ratio - exact).abs() <= 1e-12 * exact, "{s:?}");
        }
    }

    #[test]
    fn linear_sum_ratio_vanishes() {
        assert!(ratios_for(linear_sum).ratios().iter().all(|&r| r == 0.0));
    }

    #[test]
    fn square_sum_ratio_is_one() {
        for r in ratios_for(square_sum).ratios() {
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coincident_embeddings_are_flagged() {
        let b = basis();
        let f: SymmetricFn = abs_sum;
        let a = ProbePath::trace(&b, &f, &opposite, &params()).unwrap();
        let r = lipschitz_ratio_sequence(&a, &a).unwrap();
        assert!(r.samples.is_empty());
        assert_eq!(r.flagged.len(), DEFAULT_T_STEPS);
    }

    #[test]
    fn path_validation() {
        let b = basis();
        let f: SymmetricFn = abs_sum;
        assert!(matches!(
            ProbePath::trace(&b, &f, &opposite, &[0.5, 0.25, 0.125]),
            Err(Error::InsufficientSamples { .. })
        ));
        assert!(ProbePath::trace(&b, &f, &opposite, &[0.5, 0.25, 0.25, 0.1]).is_err());
        assert!(ProbePath::trace(&b, &f, &opposite, &[0.5, 0.25, 0.1, 0.0]).is_err());
    }

    #[test]
    fn exponents_of_builtins() {
        for ex in &BUILTIN_EXAMPLES {
            let rep = ex.run(&params()).unwrap();
            assert!(
                (rep.exponent - ex.expected_exponent).abs() < 0.05,
                "{}: {}",
                ex.id,
                rep.exponent
            );
        }
    }

    #[test]
    fn unknown_example_lists_ids() {
        let err = builtin_example("nope").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("lipschitz-loss") && msg.contains("c1-loss"), "{msg}");
        assert!(builtin_example("c1-loss").is_ok());
    }

    #[test]
    fn holder_needs_three_usable_samples() {
        let b = basis();
        let f: SymmetricFn = linear_sum;
        let path = ProbePath::trace(&b, &f, &on_square_axis, &params()).unwrap();
        let anchor = embed(&b, &origin(0.0)).unwrap();
        // linear_sum vanishes on the whole path: every log|df| sample is dropped
        assert!(matches!(
            holder_exponent(&path, &anchor, 0.0),
            Err(Error::InsufficientSamples { needed: 3, have: 0 })
        ));
    }

    #[test]
    fn holder_rejects_non_decreasing_distance() {
        let b = basis();
        let f: SymmetricFn = abs_sum;
        let growing = ProbePath::trace(&b, &f, &|t| pair(1.0 / t, 0.0), &params()).unwrap();
        let anchor = embed(&b, &origin(0.0)).unwrap();
        assert!(matches!(
            holder_exponent(&growing, &anchor, 0.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ols_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        assert!((ols_slope(&xs, &ys) - 2.5).abs() < 1e-14);
    }
}
