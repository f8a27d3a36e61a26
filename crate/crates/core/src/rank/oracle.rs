//! Brute-force rank for small instances, sharing no code path with the
//! reduction-based search.
//!
//! Linear equivalence is decided here by integer lattice membership: with
//! `L'` the Laplacian with the first row and column deleted, a degree-0
//! divisor `D` is principal iff `adj(L') D' ≡ 0 (mod det L')`, where `D'`
//! drops the first coordinate. Each class therefore has the key
//! `(degree, adj(L') D' mod det L')`. Rank is then found by scanning every
//! effective `e` of degree 0, 1, 2, ... and every effective divisor of the
//! complementary degree.

use std::collections::HashSet;

use num_rational::Ratio;

use crate::divisor::Divisor;
use crate::enumerate::{check_budget, count_compositions, BoundedCompositions};
use crate::error::{Error, Result};
use crate::graph::WeightedMultigraph;

type ClassKey = (i64, Vec<i128>);

/// Integer data for deciding equivalence on a loopless graph.
pub struct Lattice {
    n: usize,
    /// `|det L'|`, the number of spanning trees.
    modulus: i128,
    /// `adj(L')` scaled to match the sign of `modulus`.
    adjugate: Vec<Vec<i128>>,
}

impl Lattice {
    pub fn new(g: &WeightedMultigraph) -> Result<Self> {
        let n = g.vertex_count();
        let m = n - 1;
        let laplacian: Vec<Vec<Ratio<i128>>> = (1..n)
            .map(|a| {
                (1..n)
                    .map(|b| {
                        let x = if a == b {
                            g.neighbors(a).map(|(_, k)| k).sum::<i64>()
                        } else {
                            -g.multiplicity(a, b)
                        };
                        Ratio::from_integer(i128::from(x))
                    })
                    .collect()
            })
            .collect();
        let (det, inverse) = invert(laplacian).ok_or(Error::Overflow)?;
        let modulus = det.abs();
        let sign = det.signum();
        let adjugate = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let scaled = inverse[i][j] * Ratio::from_integer(modulus * sign);
                        debug_assert!(scaled.is_integer());
                        scaled.to_integer()
                    })
                    .collect()
            })
            .collect();
        Ok(Lattice { n, modulus, adjugate })
    }

    /// Number of spanning trees, i.e. the size of each degree-`d` part of the Picard group.
    pub fn picard_order(&self) -> i128 {
        self.modulus
    }

    pub fn key(&self, d: &[i64]) -> ClassKey {
        let degree = d.iter().sum();
        let residues = self
            .adjugate
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&d[1..])
                    .map(|(&a, &x)| a * i128::from(x))
                    .sum::<i128>()
                    .rem_euclid(self.modulus)
            })
            .collect();
        (degree, residues)
    }

    pub fn equivalent(&self, a: &[i64], b: &[i64]) -> bool {
        debug_assert_eq!(a.len(), self.n);
        self.key(a) == self.key(b)
    }
}

/// Determinant and inverse by Gauss–Jordan elimination over the rationals.
fn invert(mut a: Vec<Vec<Ratio<i128>>>) -> Option<(i128, Vec<Vec<Ratio<i128>>>)> {
    let m = a.len();
    let zero = Ratio::from_integer(0);
    let one = Ratio::from_integer(1);
    let mut inv: Vec<Vec<Ratio<i128>>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { one } else { zero }).collect())
        .collect();
    let mut det = one;
    for col in 0..m {
        let pivot = (col..m).find(|&r| a[r][col] != zero)?;
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for j in 0..m {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..m {
            if r == col || a[r][col] == zero {
                continue;
            }
            let f = a[r][col];
            for j in 0..m {
                let (x, y) = (a[col][j], inv[col][j]);
                a[r][j] -= f * x;
                inv[r][j] -= f * y;
            }
        }
    }
    det.is_integer().then(|| (det.to_integer(), inv))
}

/// Rank straight from the definition, on the weightless model of `g`.
///
/// `budget` caps the total number of divisors examined.
pub fn rank_oracle(g: &WeightedMultigraph, d: &Divisor, budget: u64) -> Result<i64> {
    d.check_on(g)?;
    let model = g.bullet_model();
    let graph = &model.graph;
    let n = graph.vertex_count();
    let lattice = Lattice::new(graph)?;
    let target = model.embed_divisor(d);
    let degree = target.degree();
    let mut examined: u128 = 0;
    let mut k = 0i64;
    loop {
        let rest = degree - k;
        if rest < 0 {
            return Ok(k - 1);
        }
        examined += count_compositions(rest, n) + count_compositions(k, n);
        check_budget("rank oracle", examined, budget)?;
        let reachable: HashSet<ClassKey> = BoundedCompositions::nonnegative(n, rest)
            .map(|e| lattice.key(&e))
            .collect();
        for e in BoundedCompositions::nonnegative(n, k) {
            let shifted: Vec<i64> = target.values().iter().zip(&e).map(|(a, b)| a - b).collect();
            if !reachable.contains(&lattice.key(&shifted)) {
                return Ok(k - 1);
            }
        }
        k += 1;
    }
}
