//! Distinguished representatives of divisor classes: semibalanced, uniform,
//! and certified Clifford representatives.

use num_rational::Ratio;

use crate::divisor::{class_of, residual, Divisor, DivisorClass};
use crate::enumerate::{check_budget, count_bounded, find_first, BoundedCompositions};
use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet, WeightedMultigraph};
use crate::reduce::{effectivize, is_reduced, reduce_to};

/// Largest vertex count for the exhaustive subset sweep.
pub const MAX_SUBSET_VERTICES: usize = 24;

fn require_genus_two(g: &WeightedMultigraph) -> Result<i64> {
    let genus = g.genus();
    if genus < 2 {
        Err(Error::GenusTooSmall(genus))
    } else {
        Ok(genus)
    }
}

fn require_semistable(g: &WeightedMultigraph) -> Result<()> {
    require_genus_two(g)?;
    match g.vertices().find(|&v| g.weight(v) == 0 && g.valence(v) < 2) {
        Some(v) => Err(Error::NotSemistable(g.name(v).to_string())),
        None => Ok(()),
    }
}

/// `(m_Z, M_Z) = d k(Z) / (2g - 2) ∓ (Z . Z^c) / 2`.
pub fn balance_bounds(g: &WeightedMultigraph, degree: i64, set: &VertexSet) -> Result<(Ratio<i64>, Ratio<i64>)> {
    let genus = require_genus_two(g)?;
    let centre = Ratio::new(degree * g.canonical_divisor().value_on(set), 2 * genus - 2);
    let half_cut = Ratio::new(g.cut_size(set), 2);
    Ok((centre - half_cut, centre + half_cut))
}

/// Checks `m_Z <= d(Z) <= M_Z` on every nonempty proper subset, in integers:
/// multiplying through by `2(2g - 2)`.
pub fn is_semibalanced(g: &WeightedMultigraph, d: &Divisor) -> Result<bool> {
    d.check_on(g)?;
    require_semistable(g)?;
    let n = g.vertex_count();
    if n > MAX_SUBSET_VERTICES {
        return Err(Error::BudgetExceeded {
            what: "semibalanced subset sweep",
            count: (1u128 << n) - 2,
            budget: (1u64 << MAX_SUBSET_VERTICES) - 2,
        });
    }
    Ok(semibalanced_unchecked(g, d))
}

fn semibalanced_unchecked(g: &WeightedMultigraph, d: &Divisor) -> bool {
    let n = g.vertex_count();
    let scale = i128::from(2 * g.genus() - 2);
    let degree = i128::from(d.degree());
    let k = g.canonical_divisor();
    (1u64..(1u64 << n) - 1).all(|mask| {
        let set = VertexSet::from_mask(n, mask);
        let centre = 2 * degree * i128::from(k.value_on(&set));
        let spread = scale * i128::from(g.cut_size(&set));
        let value = 2 * scale * i128::from(d.value_on(&set));
        centre - spread <= value && value <= centre + spread
    })
}

/// The lexicographically smallest semibalanced divisor in the class.
///
/// Candidates are drawn from the box cut out by the singleton bounds.
pub fn semibalanced_representative(g: &WeightedMultigraph, class: &DivisorClass, budget: u64) -> Result<Divisor> {
    require_semistable(g)?;
    let n = g.vertex_count();
    if n > MAX_SUBSET_VERTICES {
        return Err(Error::BudgetExceeded {
            what: "semibalanced subset sweep",
            count: (1u128 << n) - 2,
            budget: (1u64 << MAX_SUBSET_VERTICES) - 2,
        });
    }
    let degree = class.degree();
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for v in g.vertices() {
        let (m, big_m) = balance_bounds(g, degree, &VertexSet::singleton(n, v))?;
        lower.push(m.ceil().to_integer());
        upper.push(big_m.floor().to_integer());
    }
    check_budget("semibalanced box", count_bounded(&lower, &upper, degree), budget)?;
    let candidates = BoundedCompositions::new(lower, upper, degree).map(Divisor::new);
    find_first(candidates, |d| Ok(semibalanced_unchecked(g, d) && class.contains(g, d)?))?
        .ok_or(Error::NoRepresentative("semibalanced representative"))
}

/// `0 <= d(v) <= k(v)` everywhere, i.e. both `d` and its residual are effective.
pub fn is_uniform(g: &WeightedMultigraph, d: &Divisor) -> bool {
    d.len() == g.vertex_count() && {
        let k = g.canonical_divisor();
        g.vertices().all(|v| 0 <= d[v] && d[v] <= k[v])
    }
}

/// Whether both the class and its residual class are effective.
pub fn is_special_class(g: &WeightedMultigraph, class: &DivisorClass) -> Result<bool> {
    let rep = class.canonical();
    Ok(effectivize(g, rep)?.is_effective() && effectivize(g, &residual(g, rep)?)?.is_effective())
}

/// The lexicographically smallest uniform divisor in the class, if any.
pub fn uniform_representative(g: &WeightedMultigraph, class: &DivisorClass, budget: u64) -> Result<Option<Divisor>> {
    let k = g.canonical_divisor();
    let lower = vec![0; g.vertex_count()];
    let upper = k.values().to_vec();
    let degree = class.degree();
    check_budget("uniform box", count_bounded(&lower, &upper, degree), budget)?;
    let candidates = BoundedCompositions::new(lower, upper, degree).map(Divisor::new);
    find_first(candidates, |d| class.contains(g, d))
}

/// True when every weight-0 vertex carries a loop.
pub fn weightless_vertices_have_loops(g: &WeightedMultigraph) -> bool {
    g.vertices().all(|v| g.weight(v) > 0 || g.loops_at(v) > 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordBranch {
    Uniform,
    VReducedNonEffective,
    ResidualVReduced,
}

impl CliffordBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            CliffordBranch::Uniform => "uniform",
            CliffordBranch::VReducedNonEffective => "v_reduced_non_effective",
            CliffordBranch::ResidualVReduced => "residual_v_reduced",
        }
    }
}

/// Branch-specific evidence carried by a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// `(value, canonical bound)` at each vertex.
    Uniform { bounds: Vec<(i64, i64)> },
    /// The representative is reduced at `vertex` and negative there.
    VReducedNonEffective { vertex: Vertex, value: i64 },
    /// The residual of the representative is reduced at `vertex` and negative there.
    ResidualVReduced { vertex: Vertex, residual_reduced: Divisor },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordCertificate {
    pub branch: CliffordBranch,
    pub representative: Divisor,
    pub evidence: Evidence,
}

impl CliffordCertificate {
    /// Re-checks the certificate against the class with burning tests that do
    /// not reuse the construction.
    pub fn verify(&self, g: &WeightedMultigraph, class: &DivisorClass) -> Result<bool> {
        let rep = &self.representative;
        if rep.len() != g.vertex_count() || !class.contains(g, rep)? {
            return Ok(false);
        }
        let n = g.vertex_count();
        Ok(match (&self.branch, &self.evidence) {
            (CliffordBranch::Uniform, Evidence::Uniform { bounds }) => {
                let k = g.canonical_divisor();
                is_uniform(g, rep)
                    && bounds.len() == n
                    && g.vertices().all(|v| bounds[v] == (rep[v], k[v]))
                    && rep.is_effective()
                    && residual(g, rep)?.is_effective()
            }
            (CliffordBranch::VReducedNonEffective, &Evidence::VReducedNonEffective { vertex, value }) => {
                vertex < n
                    && rep[vertex] == value
                    && value < 0
                    && is_reduced(g, rep, &VertexSet::singleton(n, vertex))?
            }
            (CliffordBranch::ResidualVReduced, Evidence::ResidualVReduced { vertex, residual_reduced }) => {
                let vertex = *vertex;
                let star = residual(g, rep)?;
                vertex < n
                    && &star == residual_reduced
                    && star[vertex] < 0
                    && is_reduced(g, &star, &VertexSet::singleton(n, vertex))?
            }
            _ => false,
        })
    }
}

/// Which hypotheses of the uniform branch hold for a special class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotCovered {
    pub chain_of_2ec: bool,
    pub loops_on_weightless: bool,
    /// Weight-0 vertices without a loop.
    pub missing_loops: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliffordOutcome {
    Certified(CliffordCertificate),
    /// The class is special but the graph is outside the certified range.
    NotCovered(NotCovered),
}

/// A certified Clifford representative of a class of degree in `[0, 2g - 2]`.
///
/// Non-effective classes yield their reduced form at the base vertex;
/// classes with non-effective residual yield the divisor whose residual is
/// reduced there. Special classes are handled only on chains of
/// 2-edge-connected components whose weight-0 vertices all carry loops,
/// where a uniform representative is returned.
pub fn clifford_representative(g: &WeightedMultigraph, class: &DivisorClass, budget: u64) -> Result<CliffordOutcome> {
    let degree = class.degree();
    let max = 2 * g.genus() - 2;
    if degree < 0 || degree > max {
        return Err(Error::DegreeOutOfRange { degree, min: 0, max });
    }
    let v = g.base_vertex();
    let n = g.vertex_count();
    let reduced = reduce_to(g, class.canonical(), v)?;
    if reduced[v] < 0 {
        return Ok(CliffordOutcome::Certified(CliffordCertificate {
            branch: CliffordBranch::VReducedNonEffective,
            evidence: Evidence::VReducedNonEffective {
                vertex: v,
                value: reduced[v],
            },
            representative: reduced,
        }));
    }
    let star = reduce_to(g, &residual(g, &reduced)?, v)?;
    if star[v] < 0 {
        return Ok(CliffordOutcome::Certified(CliffordCertificate {
            branch: CliffordBranch::ResidualVReduced,
            representative: residual(g, &star)?,
            evidence: Evidence::ResidualVReduced {
                vertex: v,
                residual_reduced: star,
            },
        }));
    }
    let chain = g.is_chain_of_2ec();
    let missing_loops: Vec<Vertex> = g
        .vertices()
        .filter(|&w| g.weight(w) == 0 && g.loops_at(w) == 0)
        .collect();
    if !chain || !missing_loops.is_empty() {
        return Ok(CliffordOutcome::NotCovered(NotCovered {
            chain_of_2ec: chain,
            loops_on_weightless: missing_loops.is_empty(),
            missing_loops,
        }));
    }
    let same_class = class_of(g, class.canonical(), class.base())?;
    let rep = uniform_representative(g, &same_class, budget)?
        .ok_or(Error::NoRepresentative("uniform representative"))?;
    let k = g.canonical_divisor();
    Ok(CliffordOutcome::Certified(CliffordCertificate {
        branch: CliffordBranch::Uniform,
        evidence: Evidence::Uniform {
            bounds: (0..n).map(|w| (rep[w], k[w])).collect(),
        },
        representative: rep,
    }))
}
