//! Baker–Norine rank, the Riemann–Roch and Clifford self-audits, and the
//! `e^deg` lower-bound test.
//!
//! Rank is computed on the weightless, loopless model of the graph. The
//! definitional search uses the recursion `r(D) >= k` iff `D` is effective
//! and `r(D - v) >= k - 1` for every vertex `v`, with classes identified by
//! their reduced form at a fixed base vertex and memoized by that form.

use std::collections::HashMap;

use crate::divisor::{e_deg, residual, Divisor};
use crate::enumerate::{check_budget, count_compositions, BoundedCompositions, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{Vertex, WeightedMultigraph};
use crate::reduce::{effectivize, reduce_to};

pub mod oracle;

pub use oracle::rank_oracle;

/// How a rank value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMethod {
    Definition,
    RegimeShortcut,
    Oracle,
}

impl RankMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RankMethod::Definition => "definition",
            RankMethod::RegimeShortcut => "regime_shortcut",
            RankMethod::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    /// Always at least -1.
    pub rank: i64,
    /// An effective divisor of degree `rank + 1` on the weightless model that
    /// the class cannot absorb. Absent when a degree shortcut was used.
    pub witness: Option<Divisor>,
    pub method: RankMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankOptions {
    /// Use the degree-regime laws for negative degree and degree above `2g - 2`.
    pub shortcuts: bool,
    /// Maximum number of reductions the definitional search may perform.
    pub budget: u64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            shortcuts: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl RankOptions {
    pub fn definitional() -> Self {
        RankOptions {
            shortcuts: false,
            ..Self::default()
        }
    }
}

/// Baker–Norine rank of `d`.
pub fn rank(g: &WeightedMultigraph, d: &Divisor, options: RankOptions) -> Result<RankReport> {
    d.check_on(g)?;
    let degree = d.degree();
    let genus = g.genus();
    if options.shortcuts {
        if degree < 0 {
            return Ok(RankReport {
                rank: -1,
                witness: None,
                method: RankMethod::RegimeShortcut,
            });
        }
        if degree > 2 * genus - 2 {
            return Ok(RankReport {
                rank: degree - genus,
                witness: None,
                method: RankMethod::RegimeShortcut,
            });
        }
    }
    let model = g.bullet_model();
    let mut search = CoverSearch::new(&model.graph, options.budget);
    let start = search.reduce(&model.embed_divisor(d))?;
    let mut k = 0;
    while search.covers(&start, k)? {
        k += 1;
    }
    let witness = search.witness(&start, k)?;
    Ok(RankReport {
        rank: k - 1,
        witness: Some(witness),
        method: RankMethod::Definition,
    })
}

/// Memoized coverage search on a weightless, loopless graph.
///
/// Two exact bounds cut the recursion. If `D` is reduced at the base `q` then
/// `D - (D(q) + 1) q` is reduced and negative at `q`, so `D` cannot cover
/// anything of degree above `D(q)`. A reduced divisor carries at most `g`
/// chips off `q` (each vertex burns with fewer chips than burnt edges into
/// it), so every divisor of degree at least `g` is equivalent to an effective
/// one. Non-adjacent twin vertices other than the base can be swapped by an
/// automorphism fixing the base; reduced forms are stored with values sorted
/// inside each twin class.
struct CoverSearch<'g> {
    graph: &'g WeightedMultigraph,
    base: Vertex,
    genus: i64,
    twin_classes: Vec<Vec<Vertex>>,
    /// Preceding member of the twin class, if any.
    prev_twin: Vec<Option<Vertex>>,
    /// Canonical reduced form -> (largest k known covered, smallest k known to fail).
    memo: HashMap<Vec<i64>, (i64, i64)>,
    /// Same, for divisors of degree k supported on vertices `>= i`.
    restricted: HashMap<(Vec<i64>, usize), (i64, i64)>,
    reductions: u64,
    budget: u64,
}

fn twin_classes(g: &WeightedMultigraph, base: Vertex) -> Vec<Vec<Vertex>> {
    let mut by_row: HashMap<Vec<i64>, Vec<Vertex>> = HashMap::new();
    for v in g.vertices().filter(|&v| v != base) {
        let row: Vec<i64> = g
            .vertices()
            .map(|w| if w == v { 0 } else { g.multiplicity(v, w) })
            .collect();
        by_row.entry(row).or_default().push(v);
    }
    let mut classes: Vec<Vec<Vertex>> = by_row.into_values().filter(|c| c.len() > 1).collect();
    classes.sort();
    classes
}

impl<'g> CoverSearch<'g> {
    fn new(graph: &'g WeightedMultigraph, budget: u64) -> Self {
        let base = graph.base_vertex();
        let twin_classes = twin_classes(graph, base);
        let mut prev_twin = vec![None; graph.vertex_count()];
        for class in &twin_classes {
            for pair in class.windows(2) {
                prev_twin[pair[1]] = Some(pair[0]);
            }
        }
        CoverSearch {
            graph,
            base,
            genus: graph.genus(),
            twin_classes,
            prev_twin,
            memo: HashMap::new(),
            restricted: HashMap::new(),
            reductions: 0,
            budget,
        }
    }

    fn reduce(&mut self, d: &Divisor) -> Result<Divisor> {
        self.reductions += 1;
        check_budget("rank search reductions", u128::from(self.reductions), self.budget)?;
        reduce_to(self.graph, d, self.base)
    }

    /// Sorts values inside each twin class; maps reduced forms to reduced forms.
    fn symmetrize(&self, mut d: Divisor) -> Divisor {
        let values = d.values_mut();
        for class in &self.twin_classes {
            let mut xs: Vec<i64> = class.iter().map(|&v| values[v]).collect();
            xs.sort_unstable();
            for (&v, x) in class.iter().zip(xs) {
                values[v] = x;
            }
        }
        d
    }

    /// Reduced form of `d - v` for reduced `d`.
    fn minus_vertex(&mut self, d: &Divisor, v: Vertex) -> Result<Divisor> {
        let mut next = d.clone();
        next.values_mut()[v] -= 1;
        if v == self.base {
            // still effective off the base and burns the same way
            Ok(next)
        } else {
            self.reduce(&next)
        }
    }

    /// Decides the cases settled without recursion.
    fn bounds(&self, d: &Divisor, k: i64) -> Option<bool> {
        if d[self.base] < k {
            Some(false)
        } else if k == 0 || d.degree() - k >= self.genus {
            Some(true)
        } else {
            None
        }
    }

    fn moves(&self) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(self.base).chain(self.graph.vertices().filter(|&v| v != self.base))
    }

    /// Whether every effective `e` of degree `k` leaves `d - e` equivalent to
    /// an effective divisor. `d` must be reduced.
    fn covers(&mut self, d: &Divisor, k: i64) -> Result<bool> {
        if let Some(known) = self.bounds(d, k) {
            return Ok(known);
        }
        let d = self.symmetrize(d.clone());
        if let Some(&(covered, fails)) = self.memo.get(d.values()) {
            if covered >= k {
                return Ok(true);
            }
            if fails <= k {
                return Ok(false);
            }
        }
        let mut verdict = true;
        let moves: Vec<Vertex> = self.moves().collect();
        for v in moves {
            if self.prev_twin[v].is_some_and(|u| d[u] == d[v]) {
                continue;
            }
            let next = self.minus_vertex(&d, v)?;
            if !self.covers(&next, k - 1)? {
                verdict = false;
                break;
            }
        }
        let entry = self.memo.entry(d.values().to_vec()).or_insert((0, i64::MAX));
        if verdict {
            entry.0 = entry.0.max(k);
        } else {
            entry.1 = entry.1.min(k);
        }
        Ok(verdict)
    }

    /// [`Self::covers`] restricted to `e` supported on vertices `>= from`.
    fn covers_from(&mut self, d: &Divisor, k: i64, from: Vertex) -> Result<bool> {
        if d[self.base] < 0 {
            return Ok(false);
        }
        if from <= self.base && d[self.base] < k {
            return Ok(false);
        }
        if k == 0 || d.degree() - k >= self.genus {
            return Ok(true);
        }
        if let Some(&(covered, _)) = self.memo.get(self.symmetrize(d.clone()).values()) {
            if covered >= k {
                return Ok(true);
            }
        }
        let key = (d.values().to_vec(), from);
        if let Some(&(covered, fails)) = self.restricted.get(&key) {
            if covered >= k {
                return Ok(true);
            }
            if fails <= k {
                return Ok(false);
            }
        }
        let mut verdict = true;
        for v in from..self.graph.vertex_count() {
            let next = self.minus_vertex(d, v)?;
            if !self.covers_from(&next, k - 1, v)? {
                verdict = false;
                break;
            }
        }
        let entry = self.restricted.entry(key).or_insert((0, i64::MAX));
        if verdict {
            entry.0 = entry.0.max(k);
        } else {
            entry.1 = entry.1.min(k);
        }
        Ok(verdict)
    }

    /// The lexicographically smallest effective divisor of degree `k` that
    /// `d` does not cover; requires `covers(d, k)` to be false.
    fn witness(&mut self, d: &Divisor, k: i64) -> Result<Divisor> {
        let n = self.graph.vertex_count();
        let mut e = Divisor::zero(n);
        let mut current = d.clone();
        let mut remaining = k;
        for i in 0..n {
            if i == n - 1 {
                e.values_mut()[i] = remaining;
                break;
            }
            // smallest e[i] admitting a failing completion on later vertices
            let mut a = 0;
            loop {
                if !self.covers_from(&current, remaining, i + 1)? {
                    break;
                }
                current = self.minus_vertex(&current, i)?;
                a += 1;
                remaining -= 1;
                debug_assert!(remaining >= 0, "a failing completion exists");
            }
            e.values_mut()[i] = a;
        }
        Ok(e)
    }
}

/// True iff for every effective `e` of degree `s` on `g` itself,
/// `d - e^deg` is equivalent to an effective divisor; this certifies rank >= s.
pub fn rank_lower_bound_edeg(g: &WeightedMultigraph, d: &Divisor, s: i64, budget: u64) -> Result<bool> {
    d.check_on(g)?;
    if s < 0 {
        return Err(Error::NegativeArgument(s));
    }
    check_budget("e^deg lower bound", count_compositions(s, g.vertex_count()), budget)?;
    for e in BoundedCompositions::nonnegative(g.vertex_count(), s) {
        let shifted = d.checked_sub(&e_deg(g, &Divisor::new(e))?)?;
        if !effectivize(g, &shifted)?.is_effective() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both sides of `r(d) - r(k - d) = deg d - g + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiemannRoch {
    pub degree: i64,
    pub genus: i64,
    pub rank: i64,
    pub residual_rank: i64,
}

impl RiemannRoch {
    pub fn holds(&self) -> bool {
        self.rank - self.residual_rank == self.degree - self.genus + 1
    }
}

pub fn riemann_roch_check(g: &WeightedMultigraph, d: &Divisor, options: RankOptions) -> Result<RiemannRoch> {
    let r = rank(g, d, options)?;
    let r_star = rank(g, &residual(g, d)?, options)?;
    Ok(RiemannRoch {
        degree: d.degree(),
        genus: g.genus(),
        rank: r.rank,
        residual_rank: r_star.rank,
    })
}

/// `rank <= degree / 2`, defined for `0 <= degree <= 2g - 2`.
pub fn clifford_check(g: &WeightedMultigraph, d: &Divisor, options: RankOptions) -> Result<bool> {
    d.check_on(g)?;
    let degree = d.degree();
    let max = 2 * g.genus() - 2;
    if degree < 0 || degree > max {
        return Err(Error::DegreeOutOfRange { degree, min: 0, max });
    }
    Ok(2 * rank(g, d, options)?.rank <= degree)
}
