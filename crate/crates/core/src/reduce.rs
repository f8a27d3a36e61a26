//! Dhar burning, reduced divisors and the effectivization loop.
//!
//! All firing moves here are principal, so every function returns a divisor
//! in the class of its input. Loops and weights play no role: a loop never
//! crosses a cut.

use std::collections::VecDeque;

use crate::divisor::{t_set, Divisor};
use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet, WeightedMultigraph};

/// Ceiling on Dhar rounds inside one reduction; only a bug can reach it.
const REDUCTION_CEILING: u64 = 50_000_000;

/// Ceiling on firing rounds of [`effectivize`].
pub const EFFECTIVIZE_CEILING: u64 = 10_000_000;

/// Outcome of burning from a seed set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DharResult {
    /// The stabilized burnt set `V_n`.
    pub fixed_set: VertexSet,
    /// Its complement, the Dhar set.
    pub dhar_set: VertexSet,
    /// `V_0 = seed ⊂ V_1 ⊂ ... ⊂ V_n`, each strictly larger than the last.
    pub chain: Vec<VertexSet>,
}

/// Grows the seed by repeatedly adding every vertex with more edges into the
/// burnt set than chips.
pub fn dhar(g: &WeightedMultigraph, d: &Divisor, seed: &VertexSet) -> Result<DharResult> {
    d.check_on(g)?;
    if seed.universe() != g.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: g.vertex_count(),
            found: seed.universe(),
        });
    }
    if seed.is_empty() {
        return Err(Error::EmptySeed);
    }
    if let Some(v) = g.vertices().find(|&v| !seed.contains(v) && d[v] < 0) {
        return Err(Error::NegativeOffSeed(g.name(v).to_string()));
    }
    Ok(burn(g, d, seed))
}

fn burn(g: &WeightedMultigraph, d: &Divisor, seed: &VertexSet) -> DharResult {
    let mut chain = vec![seed.clone()];
    let burnt = burn_rounds(g, d, seed, |set| chain.push(set.clone()));
    DharResult {
        dhar_set: burnt.complement(),
        fixed_set: burnt,
        chain,
    }
}

/// Burns round by round, keeping for each vertex the number of edges into
/// the burnt set; `on_round` sees the burnt set after every round.
fn burn_rounds(g: &WeightedMultigraph, d: &Divisor, seed: &VertexSet, mut on_round: impl FnMut(&VertexSet)) -> VertexSet {
    let n = g.vertex_count();
    let mut burnt = seed.clone();
    let mut inward = vec![0i64; n];
    let mut fresh: Vec<Vertex> = seed.iter().collect();
    while !fresh.is_empty() {
        for &u in &fresh {
            for (w, m) in g.neighbors(u) {
                inward[w] += m;
            }
        }
        fresh = (0..n)
            .filter(|&v| !burnt.contains(v) && inward[v] > d[v])
            .collect();
        if fresh.is_empty() {
            break;
        }
        for &v in &fresh {
            burnt.insert(v);
        }
        on_round(&burnt);
    }
    burnt
}

/// True iff `d` is effective off `set` and every nonempty subset of the
/// complement has a vertex with fewer chips than edges leaving the subset.
pub fn is_reduced(g: &WeightedMultigraph, d: &Divisor, set: &VertexSet) -> Result<bool> {
    d.check_on(g)?;
    if set.is_empty() {
        return Err(Error::EmptySeed);
    }
    if g.vertices().any(|v| !set.contains(v) && d[v] < 0) {
        return Ok(false);
    }
    Ok(burn_rounds(g, d, set, |_| {}).is_full())
}

/// The unique `u`-reduced divisor equivalent to `d`.
pub fn reduce_to(g: &WeightedMultigraph, d: &Divisor, u: Vertex) -> Result<Divisor> {
    if u >= g.vertex_count() {
        return Err(Error::VertexIndex(u));
    }
    reduce_to_set(g, d, &VertexSet::singleton(g.vertex_count(), u))
}

/// A divisor equivalent to `d` that is reduced with respect to `set`.
///
/// First every vertex off `set` is made nonnegative by sweeping a breadth-first
/// order backwards and firing the prefix in front of each negative vertex.
/// Then the Dhar set is fired toward the burnt set until nothing is left
/// unburnt.
pub fn reduce_to_set(g: &WeightedMultigraph, d: &Divisor, set: &VertexSet) -> Result<Divisor> {
    d.check_on(g)?;
    if set.is_empty() {
        return Err(Error::EmptySeed);
    }
    let mut d = d.clone();
    make_effective_off(g, &mut d, set)?;
    stabilize(g, &mut d, set)?;
    Ok(d)
}

fn bfs_order(g: &WeightedMultigraph, set: &VertexSet) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut order: Vec<Vertex> = set.iter().collect();
    for &v in &order {
        seen[v] = true;
    }
    let mut queue: VecDeque<Vertex> = order.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for (w, _) in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    order
}

/// `values += times * t_Z` where `inside` marks `Z`.
fn fire(g: &WeightedMultigraph, values: &mut [i64], inside: impl Fn(Vertex) -> bool, times: i64) -> Result<()> {
    for v in g.vertices() {
        let v_in = inside(v);
        let mut cross = 0i64;
        for (w, m) in g.neighbors(v) {
            if w != v && inside(w) != v_in {
                cross += m;
            }
        }
        let delta = if v_in { -cross } else { cross };
        values[v] = delta
            .checked_mul(times)
            .and_then(|x| values[v].checked_add(x))
            .ok_or(Error::Overflow)?;
    }
    Ok(())
}

fn make_effective_off(g: &WeightedMultigraph, d: &mut Divisor, set: &VertexSet) -> Result<()> {
    if g.vertices().all(|v| set.contains(v) || d[v] >= 0) {
        return Ok(());
    }
    let order = bfs_order(g, set);
    let mut position = vec![0usize; g.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let values = d.values_mut();
    for i in (set.len()..order.len()).rev() {
        let v = order[i];
        if values[v] >= 0 {
            continue;
        }
        // fire the prefix order[..i] until v is out of debt
        let inward: i64 = g
            .neighbors(v)
            .filter(|&(w, _)| position[w] < i)
            .map(|(_, m)| m)
            .sum();
        debug_assert!(inward > 0, "breadth-first order has an earlier neighbor");
        let times = (-values[v] + inward - 1) / inward;
        fire(g, values, |w| position[w] < i, times)?;
    }
    Ok(())
}

/// Vertices burnt from `seed`, and for every vertex the number of edges into
/// the burnt set. The final set does not depend on the burning order.
fn burn_into(g: &WeightedMultigraph, values: &[i64], seed: &VertexSet, burnt: &mut [bool], inward: &mut [i64], stack: &mut Vec<Vertex>) {
    burnt.fill(false);
    inward.fill(0);
    stack.clear();
    for v in seed.iter() {
        burnt[v] = true;
        stack.push(v);
    }
    while let Some(u) = stack.pop() {
        for (w, m) in g.neighbors(u) {
            if w == u {
                continue;
            }
            inward[w] += m;
            if !burnt[w] && inward[w] > values[w] {
                burnt[w] = true;
                stack.push(w);
            }
        }
    }
}

/// Fires the Dhar set as many times as it stays legal, until it is empty.
fn stabilize(g: &WeightedMultigraph, d: &mut Divisor, set: &VertexSet) -> Result<()> {
    let n = g.vertex_count();
    let mut burnt = vec![false; n];
    let mut inward = vec![0i64; n];
    let mut stack = Vec::with_capacity(n);
    let values = d.values_mut();
    for _ in 0..REDUCTION_CEILING {
        burn_into(g, values, set, &mut burnt, &mut inward, &mut stack);
        let mut times = i64::MAX;
        for v in (0..n).filter(|&v| !burnt[v]) {
            if inward[v] > 0 {
                times = times.min(values[v] / inward[v]);
            }
        }
        if times == i64::MAX {
            return Ok(());
        }
        debug_assert!(times >= 1);
        fire(g, values, |v| !burnt[v], times)?;
    }
    Err(Error::IterationCeiling("reduction"))
}

/// Result of [`effectivize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Effectivization {
    Effective { divisor: Divisor, iterations: u64 },
    /// The class has no effective member; carries the reduced form at the base
    /// vertex, which is negative there.
    NotEffective { reduced: Divisor },
}

impl Effectivization {
    pub fn divisor(&self) -> Option<&Divisor> {
        match self {
            Effectivization::Effective { divisor, .. } => Some(divisor),
            Effectivization::NotEffective { .. } => None,
        }
    }

    pub fn is_effective(&self) -> bool {
        matches!(self, Effectivization::Effective { .. })
    }
}

/// Moves `d` to an effective divisor of its class by repeatedly firing the
/// Dhar set of its negative support, or reports that none exists.
pub fn effectivize(g: &WeightedMultigraph, d: &Divisor) -> Result<Effectivization> {
    effectivize_with_ceiling(g, d, EFFECTIVIZE_CEILING)
}

pub fn effectivize_with_ceiling(g: &WeightedMultigraph, d: &Divisor, ceiling: u64) -> Result<Effectivization> {
    d.check_on(g)?;
    if d.is_effective() {
        return Ok(Effectivization::Effective {
            divisor: d.clone(),
            iterations: 0,
        });
    }
    let base = g.base_vertex();
    let reduced = reduce_to(g, d, base)?;
    if reduced[base] < 0 {
        return Ok(Effectivization::NotEffective { reduced });
    }
    let mut current = d.clone();
    for iterations in 1..=ceiling {
        let step = effectivization_step(g, &current)?;
        current = step;
        if current.is_effective() {
            return Ok(Effectivization::Effective {
                divisor: current,
                iterations,
            });
        }
    }
    Err(Error::IterationCeiling("effectivization"))
}

/// One round: burn from the negative support and fire the Dhar set once.
pub fn effectivization_step(g: &WeightedMultigraph, d: &Divisor) -> Result<Divisor> {
    let negative = d.negative_support();
    let burnt = dhar(g, d, &negative)?;
    if burnt.dhar_set.is_empty() {
        return Err(Error::Stalled("effectivization"));
    }
    d.checked_sub(&t_set(g, &burnt.fixed_set))
}
