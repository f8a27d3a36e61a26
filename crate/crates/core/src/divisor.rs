//! Divisors (chip configurations), principal divisors and linear equivalence.

use std::fmt;

use crate::enumerate::{check_budget, count_compositions, filter_ordered, BoundedCompositions};
use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet, WeightedMultigraph};
use crate::reduce::reduce_to;

/// An integer value on every vertex, stored in vertex declaration order.
///
/// Ordering is lexicographic on that value vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor(Vec<i64>);

impl Divisor {
    pub fn new(values: Vec<i64>) -> Self {
        Divisor(values)
    }

    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    /// The divisor with a single chip on `v`.
    pub fn unit(n: usize, v: Vertex) -> Self {
        let mut d = Self::zero(n);
        d.0[v] = 1;
        d
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `d(Z)`, the total value on a vertex set.
    pub fn value_on(&self, set: &VertexSet) -> i64 {
        set.iter().map(|v| self.0[v]).sum()
    }

    /// Vertices carrying a negative value.
    pub fn negative_support(&self) -> VertexSet {
        VertexSet::from_vertices(self.len(), self.0.iter().enumerate().filter(|(_, &x)| x < 0).map(|(v, _)| v))
            .expect("indices are in range")
    }

    /// Fails unless the divisor lives on a graph with `g.vertex_count()` vertices.
    pub fn check_on(&self, g: &WeightedMultigraph) -> Result<()> {
        if self.len() == g.vertex_count() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: g.vertex_count(),
                found: self.len(),
            })
        }
    }

    /// `self + factor * other`, overflow-checked.
    pub fn add_scaled(&self, other: &Divisor, factor: i64) -> Result<Divisor> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| b.checked_mul(factor).and_then(|p| a.checked_add(p)).ok_or(Error::Overflow))
            .collect::<Result<_>>()
            .map(Divisor)
    }

    pub fn checked_add(&self, other: &Divisor) -> Result<Divisor> {
        self.add_scaled(other, 1)
    }

    pub fn checked_sub(&self, other: &Divisor) -> Result<Divisor> {
        self.add_scaled(other, -1)
    }

    pub(crate) fn values_mut(&mut self) -> &mut [i64] {
        &mut self.0
    }

    /// `v1=3,v2=-1,...` using the graph's vertex names.
    pub fn display<'a>(&'a self, g: &'a WeightedMultigraph) -> impl fmt::Display + 'a {
        NamedDivisor { d: self, g }
    }
}

impl std::ops::Index<Vertex> for Divisor {
    type Output = i64;

    fn index(&self, v: Vertex) -> &i64 {
        &self.0[v]
    }
}

impl From<Vec<i64>> for Divisor {
    fn from(values: Vec<i64>) -> Self {
        Divisor(values)
    }
}

struct NamedDivisor<'a> {
    d: &'a Divisor,
    g: &'a WeightedMultigraph,
}

impl fmt::Display for NamedDivisor<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, x) in self.d.values().iter().enumerate() {
            if v > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}={}", self.g.name(v), x)?;
        }
        Ok(())
    }
}

/// A linear equivalence class, stored as its reduced form at `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    base: Vertex,
    canonical: Divisor,
}

impl DivisorClass {
    pub fn base(&self) -> Vertex {
        self.base
    }

    /// The unique `base`-reduced representative.
    pub fn canonical(&self) -> &Divisor {
        &self.canonical
    }

    pub fn degree(&self) -> i64 {
        self.canonical.degree()
    }

    /// A class is effective iff its reduced form is nonnegative at the base.
    pub fn is_effective(&self) -> bool {
        self.canonical[self.base] >= 0
    }

    pub fn contains(&self, g: &WeightedMultigraph, d: &Divisor) -> Result<bool> {
        Ok(class_of(g, d, self.base)?.canonical == self.canonical)
    }
}

/// The principal divisor `t_Z`: firing every vertex of `Z` once.
pub fn t_set(g: &WeightedMultigraph, set: &VertexSet) -> Divisor {
    assert_eq!(set.universe(), g.vertex_count(), "vertex set over a different graph");
    let complement = set.complement();
    Divisor(
        g.vertices()
            .map(|v| {
                if set.contains(v) {
                    -g.edges_into(v, &complement)
                } else {
                    g.edges_into(v, set)
                }
            })
            .collect(),
    )
}

/// `t_Z` for a set given by vertex names.
pub fn t_set_named<S: AsRef<str>>(g: &WeightedMultigraph, names: &[S]) -> Result<Divisor> {
    let set = VertexSet::from_vertices(
        g.vertex_count(),
        names.iter().map(|n| g.vertex(n.as_ref())).collect::<Result<Vec<_>>>()?,
    )?;
    Ok(t_set(g, &set))
}

/// Bilinear intersection pairing: `a.b` counts edges for `a != b` and
/// `a.a = -sum_{b != a} a.b`.
pub fn intersection(g: &WeightedMultigraph, d1: &Divisor, d2: &Divisor) -> Result<i64> {
    d1.check_on(g)?;
    d2.check_on(g)?;
    let mut total: i64 = 0;
    for a in g.vertices().filter(|&a| d1[a] != 0) {
        let self_term = -(g.valence(a) - 2 * g.loops_at(a));
        let row = g
            .vertices()
            .map(|b| if a == b { self_term } else { g.multiplicity(a, b) })
            .zip(d2.values())
            .try_fold(0i64, |acc, (ab, &y)| ab.checked_mul(y).and_then(|p| acc.checked_add(p)));
        total = row
            .and_then(|r| r.checked_mul(d1[a]))
            .and_then(|r| total.checked_add(r))
            .ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// Linear equivalence: equal degree and a principal difference, decided by
/// reducing the difference at the base vertex.
pub fn equivalent(g: &WeightedMultigraph, d1: &Divisor, d2: &Divisor) -> Result<bool> {
    d1.check_on(g)?;
    d2.check_on(g)?;
    if d1.degree() != d2.degree() {
        return Ok(false);
    }
    Ok(reduce_to(g, &d1.checked_sub(d2)?, g.base_vertex())?.is_zero())
}

/// `k_G - d`.
pub fn residual(g: &WeightedMultigraph, d: &Divisor) -> Result<Divisor> {
    d.check_on(g)?;
    g.canonical_divisor().checked_sub(d)
}

pub fn class_of(g: &WeightedMultigraph, d: &Divisor, base: Vertex) -> Result<DivisorClass> {
    if base >= g.vertex_count() {
        return Err(Error::VertexIndex(base));
    }
    Ok(DivisorClass {
        base,
        canonical: reduce_to(g, d, base)?,
    })
}

/// Every effective divisor in the class, sorted lexicographically.
pub fn effective_representatives(g: &WeightedMultigraph, class: &DivisorClass, budget: u64) -> Result<Vec<Divisor>> {
    let degree = class.degree();
    if degree < 0 || !class.is_effective() {
        return Ok(Vec::new());
    }
    let n = g.vertex_count();
    check_budget("effective representatives", count_compositions(degree, n), budget)?;
    let candidates = BoundedCompositions::nonnegative(n, degree).map(Divisor);
    filter_ordered(candidates, |d| class.contains(g, d))
}

/// `e^deg(v) = e(v) + min(e(v), w(v) + loops(v))` for effective `e`.
pub fn e_deg(g: &WeightedMultigraph, e: &Divisor) -> Result<Divisor> {
    e.check_on(g)?;
    if let Some(v) = e.values().iter().position(|&x| x < 0) {
        return Err(Error::NotEffectiveInput(g.name(v).to_string()));
    }
    Ok(Divisor(
        g.vertices()
            .map(|v| e[v] + e[v].min(g.weight(v) + g.loops_at(v)))
            .collect(),
    ))
}
