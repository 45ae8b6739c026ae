//! Factoring a symmetric function through the embedding, `f = g o eta`.
//!
//! `g` is kept as a table over sampled orbits and evaluated by nearest
//! neighbour in embedding space. Only continuity of `g` is guaranteed, and its
//! modulus of continuity can be worse than that of `f` near the coincidence
//! set, so no smooth model is fitted. Queries off the sampled image are
//! answered by the nearest entry and are extrapolation.
//!
//! For `d = 1` the embedding is inverted explicitly with Newton's identities
//! and the roots of the resulting monic polynomial.

use std::collections::HashMap;

use nalgebra::{DMatrix, Schur};
use serde::{Deserialize, Serialize};

use crate::basis::{enumerate_generators, GeneratorBasis};
use crate::embed::{canonicalize, embed, Configuration, Embedding};
use crate::error::{Error, Result};

/// Tolerance used by [`fit_g`] when checking the symmetry premise.
pub const FIT_SYMMETRY_TOL: f64 = 1e-9;

/// Imaginary parts above `IMAG_TOL * scale` mean the power sums have no real preimage.
pub const IMAG_TOL: f64 = 1e-7;

/// Eigenvalues closer than `CLUSTER_RADIUS * scale` are treated as one multiple root.
pub const CLUSTER_RADIUS: f64 = 1e-3;

const SCHUR_MAX_ITER: usize = 10_000;

/// Relative power-sum residual a merged cluster must reproduce.
pub const CLUSTER_RESIDUAL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LabeledDataset {
    basis: GeneratorBasis,
    records: Vec<(Configuration, f64)>,
}

impl LabeledDataset {
    pub fn new(basis: GeneratorBasis) -> Self {
        LabeledDataset {
            basis,
            records: Vec::new(),
        }
    }

    pub fn from_records(basis: GeneratorBasis, records: Vec<(Configuration, f64)>) -> Result<Self> {
        let mut ds = Self::new(basis);
        for (c, f) in records {
            ds.push(c, f)?;
        }
        Ok(ds)
    }

    pub fn push(&mut self, config: Configuration, value: f64) -> Result<()> {
        config.check_shape(self.basis.d(), self.basis.n())?;
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "f-value of record {} is not finite",
                self.records.len()
            )));
        }
        self.records.push((config, value));
        Ok(())
    }

    pub fn basis(&self) -> &GeneratorBasis {
        &self.basis
    }

    pub fn records(&self) -> &[(Configuration, f64)] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// An orbit whose records disagree on `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitViolation {
    pub representative: Configuration,
    /// Indices into the dataset's records.
    pub records: Vec<usize>,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub groups: usize,
    pub violations: Vec<OrbitViolation>,
}

impl SymmetryReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

fn orbit_key(canonical: &Configuration) -> Vec<u64> {
    canonical.coords().iter().map(|c| (c + 0.0).to_bits()).collect()
}

struct OrbitGroup {
    representative: Configuration,
    records: Vec<usize>,
}

/// Orbits in order of first appearance.
fn group_by_orbit(dataset: &LabeledDataset) -> Vec<OrbitGroup> {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut groups: Vec<OrbitGroup> = Vec::new();
    for (r, (config, _)) in dataset.records.iter().enumerate() {
        let canonical = canonicalize(config);
        let key = orbit_key(&canonical);
        match index.get(&key) {
            Some(&g) => groups[g].records.push(r),
            None => {
                index.insert(key, groups.len());
                groups.push(OrbitGroup {
                    representative: canonical,
                    records: vec![r],
                });
            }
        }
    }
    groups
}

/// Group records by orbit and flag orbits whose values spread by more than `tol`.
pub fn check_symmetry(dataset: &LabeledDataset, tol: f64) -> Result<SymmetryReport> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be non-negative, got {tol}"
        )));
    }
    let groups = group_by_orbit(dataset);
    let mut violations = Vec::new();
    for g in &groups {
        let values = g.records.iter().map(|&r| dataset.records[r].1);
        let (min, max) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if max - min > tol {
            violations.push(OrbitViolation {
                representative: g.representative.clone(),
                records: g.records.clone(),
                min,
                max,
            });
        }
    }
    Ok(SymmetryReport {
        groups: groups.len(),
        violations,
    })
}

/// Sampled factor `g`: one `(eta(x), f(x))` entry per orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedDecomposition {
    basis: GeneratorBasis,
    entries: Vec<(Vec<f64>, f64)>,
}

impl FittedDecomposition {
    pub fn basis(&self) -> &GeneratorBasis {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Vec<f64>, f64)] {
        &self.entries
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dump = FitDump {
            d: self.basis.d(),
            n: self.basis.n(),
            include_constant: self.basis.include_constant(),
            basis: self.basis.to_json(),
            entries: self
                .entries
                .iter()
                .map(|(z, g)| FitEntry { z: z.clone(), g: *g })
                .collect(),
        };
        serde_json::to_value(dump).expect("fit dump serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let dump: FitDump =
            serde_json::from_value(value.clone()).map_err(|e| Error::InvalidParameter(format!("fit JSON: {e}")))?;
        let basis = enumerate_generators(dump.d, dump.n, dump.include_constant)?;
        if basis.to_json() != dump.basis {
            return Err(Error::InvalidParameter(
                "fit JSON basis does not match the canonical basis for its (d, n)".into(),
            ));
        }
        let mut entries = Vec::with_capacity(dump.entries.len());
        for (k, e) in dump.entries.into_iter().enumerate() {
            if e.z.len() != basis.len() {
                return Err(Error::InvalidParameter(format!(
                    "fit entry {k} has {} values, basis has {}",
                    e.z.len(),
                    basis.len()
                )));
            }
            entries.push((e.z, e.g));
        }
        Ok(FittedDecomposition { basis, entries })
    }
}

#[derive(Serialize, Deserialize)]
struct FitDump {
    d: usize,
    n: usize,
    include_constant: bool,
    basis: serde_json::Value,
    entries: Vec<FitEntry>,
}

#[derive(Serialize, Deserialize)]
struct FitEntry {
    z: Vec<f64>,
    g: f64,
}

/// Build the `g` table. Aborts with the report attached if the data are not symmetric.
pub fn fit_g(dataset: &LabeledDataset) -> Result<FittedDecomposition> {
    let report = check_symmetry(dataset, FIT_SYMMETRY_TOL)?;
    if !report.is_consistent() {
        return Err(Error::SymmetryViolation(Box::new(report)));
    }
    let mut entries = Vec::new();
    for g in group_by_orbit(dataset) {
        let first = g.records[0];
        let z = embed(&dataset.basis, &g.representative)?.into_values();
        entries.push((z, dataset.records[first].1));
    }
    Ok(FittedDecomposition {
        basis: dataset.basis.clone(),
        entries,
    })
}

/// Value of the nearest table entry; ties go to the lowest index.
///
/// Queries off the image of the embedding still get an answer, but it is
/// plain extrapolation from the table.
pub fn eval_g(fit: &FittedDecomposition, z: &Embedding) -> Result<f64> {
    if z.basis() != &fit.basis {
        return Err(Error::InvalidParameter("query embedding uses a different basis".into()));
    }
    eval_g_values(fit, z.values())
}

/// [`eval_g`] on raw embedding values.
pub fn eval_g_values(fit: &FittedDecomposition, z: &[f64]) -> Result<f64> {
    if z.len() != fit.basis.len() {
        return Err(Error::DimensionMismatch {
            expected: fit.basis.len(),
            actual: z.len(),
        });
    }
    let mut best: Option<(f64, f64)> = None;
    for (entry, g) in &fit.entries {
        let dist: f64 = entry.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.is_none_or(|(bd, _)| dist < bd) {
            best = Some((dist, *g));
        }
    }
    best.map(|(_, g)| g).ok_or(Error::EmptyTable)
}

/// Elementary symmetric polynomials `e_1..e_n` from power sums `p_1..p_n`.
pub fn newton_elementary(power_sums: &[f64]) -> Vec<f64> {
    let n = power_sums.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for k in 1..=n {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - i] * power_sums[i - 1];
        }
        e[k] = acc / k as f64;
    }
    e.split_off(1)
}

/// Power sums `p_1..p_k` of a multiset.
pub fn power_sums(xs: &[f64], k: usize) -> Vec<f64> {
    let mut out = vec![0.0; k];
    for &x in xs {
        let mut pw = 1.0;
        for o in out.iter_mut() {
            pw *= x;
            *o += pw;
        }
    }
    out
}

/// Monic coefficients `[1, c_1, ..., c_n]` of `prod (t - x_i)` from `e`.
fn monic_coefficients(e: &[f64]) -> Vec<f64> {
    let mut c = Vec::with_capacity(e.len() + 1);
    c.push(1.0);
    for (k, ek) in e.iter().enumerate() {
        c.push(if k % 2 == 0 { -ek } else { *ek });
    }
    c
}

fn horner(coeffs: &[f64], t: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs {
        dp = dp * t + p;
        p = p * t + c;
    }
    (p, dp)
}

/// Horner with error-free transformations: as accurate as evaluating in
/// twice the working precision.
fn compensated_horner(coeffs: &[f64], t: f64) -> f64 {
    let mut s = 0.0;
    let mut err = 0.0;
    for &c in coeffs {
        let p = s * t;
        let p_err = s.mul_add(t, -p);
        let sum = p + c;
        let bb = sum - p;
        let sum_err = (p - (sum - bb)) + (c - bb);
        s = sum;
        err = err * t + (p_err + sum_err);
    }
    s + err
}

/// A few guarded Newton steps on the polynomial.
fn polish(coeffs: &[f64], mut t: f64) -> f64 {
    let mut p = compensated_horner(coeffs, t);
    for _ in 0..4 {
        let (_, dp) = horner(coeffs, t);
        if dp == 0.0 || p == 0.0 {
            break;
        }
        let cand = t - p / dp;
        let pc = compensated_horner(coeffs, cand);
        if pc.abs() >= p.abs() {
            break;
        }
        t = cand;
        p = pc;
    }
    t
}

/// Recover the multiset `{x_1..x_n} ⊂ R` from its power sums `p_1..p_n`, sorted ascending.
pub fn invert_d1(power_sums_in: &[f64]) -> Result<Vec<f64>> {
    let n = power_sums_in.len();
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one power sum".into()));
    }
    if power_sums_in.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("power sums must be finite".into()));
    }
    if n >= 2 && power_sums_in[1] < 0.0 {
        return Err(Error::NotInImage(format!(
            "sum of squares is negative ({})",
            power_sums_in[1]
        )));
    }
    let e = newton_elementary(power_sums_in);
    let coeffs = monic_coefficients(&e);

    // exact zero roots deflate off the tail
    let zeros = coeffs.iter().rev().take_while(|&&c| c == 0.0).count();
    let reduced = &coeffs[..=n - zeros];
    let deg = n - zeros;
    let mut eig: Vec<(f64, f64)> = vec![(0.0, 0.0); zeros];
    if deg > 0 {
        let mut companion = DMatrix::<f64>::zeros(deg, deg);
        for k in 0..deg {
            companion[(0, k)] = -reduced[k + 1];
        }
        for k in 1..deg {
            companion[(k, k - 1)] = 1.0;
        }
        let schur = Schur::try_new(companion, f64::EPSILON, SCHUR_MAX_ITER)
            .ok_or_else(|| Error::IllConditioned("companion eigenvalue iteration did not converge".into()))?;
        eig.extend(schur.complex_eigenvalues().iter().map(|c| (c.re, c.im)));
    }
    eig.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let scale = eig.iter().fold(1.0f64, |m, (re, im)| m.max(re.hypot(*im)));

    // single-linkage clusters along the real-sorted order
    let mut clusters: Vec<Vec<(f64, f64)>> = Vec::new();
    for &z in &eig {
        let joins = clusters.last().is_some_and(|cl| {
            cl.iter()
                .any(|&(re, im)| (re - z.0).hypot(im - z.1) <= CLUSTER_RADIUS * scale)
        });
        if joins {
            clusters.last_mut().unwrap().push(z);
        } else {
            clusters.push(vec![z]);
        }
    }

    let mut roots = Vec::with_capacity(n);
    let mut merged = false;
    for cl in &clusters {
        let k = cl.len() as f64;
        let re = cl.iter().map(|z| z.0).sum::<f64>() / k;
        let im = cl.iter().map(|z| z.1).sum::<f64>() / k;
        if im.abs() > IMAG_TOL * scale {
            return Err(Error::NotInImage(format!("complex root {re} {:+}i", im)));
        }
        if cl.len() == 1 {
            if cl[0].1.abs() > IMAG_TOL * scale {
                return Err(Error::NotInImage(format!("complex root {} {:+}i", cl[0].0, cl[0].1)));
            }
            roots.push(polish(&coeffs, re));
        } else {
            merged = true;
            roots.extend(std::iter::repeat_n(re, cl.len()));
        }
    }

    if merged {
        let recomputed = power_sums(&roots, n);
        for (k, (got, want)) in recomputed.iter().zip(power_sums_in).enumerate() {
            let bound = CLUSTER_RESIDUAL * (n as f64) * scale.powi(k as i32 + 1);
            if (got - want).abs() > bound {
                return Err(Error::IllConditioned(format!(
                    "clustered roots do not reproduce power sum p_{} (residual {:e})",
                    k + 1,
                    (got - want).abs()
                )));
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Convenience: embed scalar points with the `d = 1` basis and invert.
pub fn invert_embedding_d1(e: &Embedding) -> Result<Vec<f64>> {
    let b = e.basis();
    if b.d() != 1 {
        return Err(Error::Unsupported("inversion is only available for d = 1".into()));
    }
    let values = e.values();
    let sums = if b.include_constant() { &values[1..] } else { values };
    invert_d1(sums)
}
