#![allow(dead_code)]

use multisym::{Configuration, Permutation};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_config<R: Rng>(rng: &mut R, d: usize, n: usize, lo: f64, hi: f64) -> Configuration {
    let coords = (0..d * n).map(|_| rng.gen_range(lo..=hi)).collect();
    Configuration::from_flat(d, coords).unwrap()
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::new(v).unwrap()
}

pub fn min_pairwise_distance(c: &Configuration) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..c.n() {
        for b in a + 1..c.n() {
            let d2: f64 = c.point(a).iter().zip(c.point(b)).map(|(x, y)| (x - y) * (x - y)).sum();
            best = best.min(d2.sqrt());
        }
    }
    best
}

/// Rejection-sample a configuration whose points are pairwise at least `gap` apart.
pub fn spread_config<R: Rng>(rng: &mut R, d: usize, n: usize, gap: f64) -> Configuration {
    loop {
        let c = random_config(rng, d, n, -1.0, 1.0);
        if min_pairwise_distance(&c) >= gap {
            return c;
        }
    }
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// `min_sigma ||x - sigma * y||` by enumeration, summing point terms in order.
pub fn brute_quotient_distance(x: &Configuration, y: &Configuration) -> f64 {
    all_permutations(x.n())
        .into_iter()
        .map(|p| {
            (0..x.n())
                .map(|i| {
                    x.point(i)
                        .iter()
                        .zip(y.point(p[i]))
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                })
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Power sums by direct expansion, independent of the library's monomial code.
pub fn direct_power_sum(c: &Configuration, s: &[u32]) -> f64 {
    c.points()
        .map(|p| p.iter().zip(s).map(|(x, &e)| x.powi(e as i32)).product::<f64>())
        .sum()
}

/// Central finite-difference Jacobian, rows = basis order, cols point-major.
pub fn fd_jacobian(basis: &multisym::GeneratorBasis, c: &Configuration, h: f64) -> Vec<Vec<f64>> {
    let cols = c.n() * c.d();
    let mut out = vec![vec![0.0; cols]; basis.len()];
    for col in 0..cols {
        let mut plus = c.coords().to_vec();
        let mut minus = c.coords().to_vec();
        plus[col] += h;
        minus[col] -= h;
        let cp = Configuration::from_flat(c.d(), plus).unwrap();
        let cm = Configuration::from_flat(c.d(), minus).unwrap();
        for (k, s) in basis.exponents().iter().enumerate() {
            out[k][col] = (direct_power_sum(&cp, s.entries()) - direct_power_sum(&cm, s.entries())) / (2.0 * h);
        }
    }
    out
}

/// Grid coordinates `-1, -0.75, ..., 1`.
pub fn grid_config<R: Rng>(rng: &mut R, d: usize, n: usize) -> Configuration {
    let coords = (0..d * n).map(|_| rng.gen_range(-4i32..=4) as f64 * 0.25).collect();
    Configuration::from_flat(d, coords).unwrap()
}
