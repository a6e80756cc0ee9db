//! Value-assignment semantics and the three contradiction routes: the parity
//! count, exhaustive search for a noncontextual 0/1 assignment, and the
//! pre/post-selected state-dependent argument.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{inner, overlap_probability, projector_sum_check, AlgebraError, Vec8};
use crate::ksset::{KsSet, ProjBasis, Projector, Signature};
use crate::rays::BasisId;
use crate::rayset::{RayId, RaySet};
use crate::relabel::Realization;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofError {
    #[error("not in parity form: {0}")]
    NotParityForm(String),
    #[error("rank-2 projector ({0},{1}) is not in the set")]
    NotPresent(RayId, RayId),
    #[error("rays {0} and {1} are orthogonal; post-selection impossible")]
    OverlapZero(RayId, RayId),
    #[error("ray {0} does not occur in the set")]
    RayNotInSet(RayId),
    #[error("ray {0} has no realization in the generated system")]
    Unrealized(RayId),
    #[error("projector {0} would be assigned both 0 and 1")]
    Inconsistent(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("{0} bases; a parity proof needs an odd count")]
    EvenBasisCount(usize),
    #[error("projector {projector} occurs {count} times")]
    OddMultiplicity { projector: String, count: usize },
    #[error("rays {0} and {1} of a rank-2 projector are not orthogonal")]
    PairNotOrthogonal(RayId, RayId),
    #[error("basis {index} repeats ray {ray}")]
    RepeatedRay { index: usize, ray: RayId },
    #[error("projectors of basis {index} do not sum to the identity")]
    NotIdentity { index: usize },
    #[error("ray {0} has no realization in the generated system")]
    Unrealized(RayId),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofKind {
    Parity,
    Exhaustive,
    StateDependent,
}

/// One surviving equation `Σ v(P) = rhs` over unassigned projectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub basis: Option<BasisId>,
    pub projectors: Vec<Projector>,
    pub rhs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualSystem {
    pub equations: Vec<Equation>,
}

impl ResidualSystem {
    pub fn projectors(&self) -> Vec<Projector> {
        let mut ps: Vec<Projector> = self
            .equations
            .iter()
            .flat_map(|e| e.projectors.iter().copied())
            .collect();
        ps.sort();
        ps.dedup();
        ps
    }

    /// Number of 0/1 assignments to the residual projectors satisfying every
    /// equation.
    pub fn solution_count(&self) -> u64 {
        let ps = self.projectors();
        assert!(ps.len() <= 24, "residual too large for exhaustive check");
        let index: BTreeMap<Projector, usize> =
            ps.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let eqs: Vec<(u32, u32)> = self
            .equations
            .iter()
            .map(|e| {
                (
                    e.projectors.iter().fold(0u32, |m, p| m | 1 << index[p]),
                    e.rhs as u32,
                )
            })
            .collect();
        (0u32..1 << ps.len())
            .filter(|&a| eqs.iter().all(|&(m, rhs)| (a & m).count_ones() == rhs))
            .count() as u64
    }

    /// The counting witness when every residual projector occurs an even
    /// number of times, every right side is 1 and the equation count is odd.
    pub fn parity_witness(&self) -> Option<String> {
        let mut mult: BTreeMap<Projector, usize> = BTreeMap::new();
        for e in &self.equations {
            for &p in &e.projectors {
                *mult.entry(p).or_insert(0) += 1;
            }
        }
        let n = self.equations.len();
        let shaped = n % 2 == 1
            && self.equations.iter().all(|e| e.rhs == 1)
            && mult.values().all(|m| m % 2 == 0);
        shaped.then(|| {
            format!(
                "each of the {} projectors occurs an even number of times (left side even) but the right side totals {n} (odd)",
                mult.len()
            )
        })
    }
}

/// Rank-1 projector inventory of a state-dependent argument.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inventory {
    pub pre: RayId,
    /// Rank-1 members of the set orthogonal to the preselected ray.
    pub orthogonal_to_pre: Vec<RayId>,
    pub post: RayId,
    /// Rank-1 members orthogonal to the postselected ray but not to the
    /// preselected one.
    pub orthogonal_to_post: Vec<RayId>,
    pub residual: Vec<Projector>,
}

impl Inventory {
    pub fn total(&self) -> usize {
        2 + self.orthogonal_to_pre.len() + self.orthogonal_to_post.len() + self.residual.len()
    }

    pub fn breakdown(&self) -> [usize; 5] {
        [
            1,
            self.orthogonal_to_pre.len(),
            1,
            self.orthogonal_to_post.len(),
            self.residual.len(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDependentDetails {
    pub pre: RayId,
    pub post: RayId,
    /// Exact post-selection probability `|⟨post|pre⟩|² / (‖pre‖²‖post‖²)`.
    pub probability: String,
    pub residual: ResidualSystem,
    pub residual_solutions: u64,
    pub inventory: Inventory,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub kind: ProofKind,
    pub contradiction: bool,
    pub used_projectors: Vec<Projector>,
    pub witness: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignments: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_dependent: Option<StateDependentDetails>,
}

/// The state-independent counting argument: with every projector occurring
/// an even number of times the left sides add up to an even number, while
/// the right sides add up to the (odd) number of bases.
pub fn parity_contradiction(set: &KsSet) -> Result<ProofReport, ProofError> {
    let n = set.basis_count();
    if n.is_multiple_of(2) {
        return Err(ProofError::NotParityForm(format!("{n} bases (even)")));
    }
    let mult = set.multiplicities();
    if let Some((p, m)) = mult.iter().find(|&(_, m)| m % 2 == 1) {
        return Err(ProofError::NotParityForm(format!(
            "projector {p} occurs {m} times"
        )));
    }
    Ok(ProofReport {
        kind: ProofKind::Parity,
        contradiction: true,
        used_projectors: mult.into_keys().collect(),
        witness: format!("even vs {n}"),
        signature: Some(set.signature().to_string()),
        assignments: None,
        state_dependent: None,
    })
}

/// Counts exact covers of `universe` by the given column masks.
fn count_exact_covers(universe: u128, options: &[u128], covered: u128, stop_at_first: bool) -> u64 {
    if covered == universe {
        return 1;
    }
    // branch on the uncovered row with the fewest usable options
    let mut best: Option<(u32, usize)> = None;
    let mut rows = universe & !covered;
    while rows != 0 {
        let row = rows.trailing_zeros();
        rows &= rows - 1;
        let n = options
            .iter()
            .filter(|&&o| o & (1 << row) != 0 && o & covered == 0)
            .count();
        if n == 0 {
            return 0;
        }
        if best.is_none_or(|(_, b)| n < b) {
            best = Some((row, n));
        }
    }
    let (row, _) = best.expect("some row is uncovered");
    let mut total = 0;
    for &o in options
        .iter()
        .filter(|&&o| o & (1 << row) != 0 && o & covered == 0)
    {
        total += count_exact_covers(universe, options, covered | o, stop_at_first);
        if stop_at_first && total > 0 {
            break;
        }
    }
    total
}

/// Number of noncontextual 0/1 assignments in which every basis has exactly
/// one projector valued 1. Zero certifies a KS contradiction without the
/// parity argument. An assignment is a choice of projectors, valued 1, that
/// hits every basis exactly once, i.e. an exact cover of the bases.
///
/// Panics for sets with more than 128 bases.
pub fn exhaustive_noncolorability(set: &KsSet) -> u64 {
    assert!(set.basis_count() <= 128, "too many bases");
    let universe = if set.basis_count() == 128 {
        u128::MAX
    } else {
        (1u128 << set.basis_count()) - 1
    };
    let mut masks: BTreeMap<Projector, u128> = BTreeMap::new();
    let mut repeated = Vec::new();
    for (i, b) in set.bases.iter().enumerate() {
        for &p in &b.projectors {
            let m = masks.entry(p).or_insert(0);
            if *m & (1 << i) != 0 {
                repeated.push(p);
            }
            *m |= 1 << i;
        }
    }
    // a projector listed twice in one basis can never be valued 1
    let options: Vec<u128> = masks
        .iter()
        .filter(|(p, _)| !repeated.contains(p))
        .map(|(_, &m)| m)
        .collect();
    count_exact_covers(universe, &options, 0, false)
}

pub fn exhaustive_report(set: &KsSet) -> ProofReport {
    let count = exhaustive_noncolorability(set);
    ProofReport {
        kind: ProofKind::Exhaustive,
        contradiction: count == 0,
        used_projectors: set.projectors(),
        witness: format!("{count} consistent assignments"),
        signature: Some(set.signature().to_string()),
        assignments: Some(count),
        state_dependent: None,
    }
}

/// Replaces both occurrences of the rank-2 projector `(i, j)` by the rank-1
/// projectors `i` and `j`.
pub fn split_rank2(set: &KsSet, pair: (RayId, RayId)) -> Result<KsSet, ProofError> {
    if pair.0 == pair.1 {
        return Err(ProofError::NotPresent(pair.0, pair.1));
    }
    let target = Projector::pair(pair.0, pair.1);
    if !set.bases.iter().any(|b| b.projectors.contains(&target)) {
        return Err(ProofError::NotPresent(pair.0, pair.1));
    }
    let bases = set
        .bases
        .iter()
        .map(|b| {
            let ps = b
                .projectors
                .iter()
                .flat_map(|&p| {
                    if p == target {
                        vec![Projector::Rank1(pair.0), Projector::Rank1(pair.1)]
                    } else {
                        vec![p]
                    }
                })
                .collect();
            ProjBasis::new(b.label, ps)
        })
        .collect();
    let mut provenance = set.provenance.clone();
    provenance.split = Some((pair.0.min(pair.1), pair.0.max(pair.1)));
    Ok(KsSet::new(bases, provenance))
}

/// Inverse of [`split_rank2`]: wherever `i` and `j` both occur as rank-1
/// projectors of one basis they are merged into `(i, j)`.
pub fn merge_rank1(set: &KsSet, pair: (RayId, RayId)) -> KsSet {
    let (a, b) = (Projector::Rank1(pair.0), Projector::Rank1(pair.1));
    let bases = set
        .bases
        .iter()
        .map(|basis| {
            if basis.projectors.contains(&a) && basis.projectors.contains(&b) {
                let mut ps: Vec<Projector> = basis
                    .projectors
                    .iter()
                    .copied()
                    .filter(|p| *p != a && *p != b)
                    .collect();
                ps.push(Projector::pair(pair.0, pair.1));
                ProjBasis::new(basis.label, ps)
            } else {
                basis.clone()
            }
        })
        .collect();
    let mut provenance = set.provenance.clone();
    provenance.split = None;
    KsSet::new(bases, provenance)
}

/// Orthogonality among the rays of one set, looked up through its
/// realization.
struct OrthTable {
    neighbors: BTreeMap<RayId, RaySet>,
}

impl OrthTable {
    fn new(realization: &Realization<'_>, rays: RaySet) -> Result<Self, RayId> {
        let vecs: BTreeMap<RayId, &Vec8> = rays
            .iter()
            .map(|id| realization.vector(id).map(|v| (id, v)).ok_or(id))
            .collect::<Result<_, _>>()?;
        let neighbors = vecs
            .iter()
            .map(|(&a, va)| {
                let n = vecs
                    .iter()
                    .filter(|&(&b, vb)| a != b && inner(va, vb).is_zero())
                    .map(|(&b, _)| b)
                    .collect();
                (a, n)
            })
            .collect();
        Ok(Self { neighbors })
    }

    fn orthogonal(&self, p: &Projector, ray: RayId) -> bool {
        p.rays()
            .is_subset(self.neighbors.get(&ray).copied().unwrap_or_default())
    }
}

/// The pre/post-selection argument: preselect `pre`, postselect `post` (both
/// get value 1, as does any projector containing either ray); every
/// projector orthogonal to either ray gets value 0. Bases that are then fully
/// determined are dropped; what remains is decided exhaustively.
///
/// A satisfiable residual is reported with `contradiction == false`.
pub fn state_dependent_proof(
    set: &KsSet,
    realization: &Realization<'_>,
    pre: RayId,
    post: RayId,
) -> Result<ProofReport, ProofError> {
    let rays = set.rays();
    for r in [pre, post] {
        if !rays.contains(r) {
            return Err(ProofError::RayNotInSet(r));
        }
    }
    let table = OrthTable::new(realization, rays).map_err(ProofError::Unrealized)?;
    let vp = realization.vector(pre).ok_or(ProofError::Unrealized(pre))?;
    let vq = realization
        .vector(post)
        .ok_or(ProofError::Unrealized(post))?;
    if pre == post {
        return Err(ProofError::OverlapZero(pre, post));
    }
    let probability = overlap_probability(vp, vq);
    if probability == Ratio::from_integer(0) {
        return Err(ProofError::OverlapZero(pre, post));
    }
    decide_state_dependent(set, &table, pre, post, probability)
}

fn decide_state_dependent(
    set: &KsSet,
    table: &OrthTable,
    pre: RayId,
    post: RayId,
    probability: Ratio<i64>,
) -> Result<ProofReport, ProofError> {
    let mut value: BTreeMap<Projector, u8> = BTreeMap::new();
    for p in set.projectors() {
        let one = p.contains(pre) || p.contains(post);
        let zero = table.orthogonal(&p, pre) || table.orthogonal(&p, post);
        match (one, zero) {
            (true, true) => return Err(ProofError::Inconsistent(p.to_string())),
            (true, false) => {
                value.insert(p, 1);
            }
            (false, true) => {
                value.insert(p, 0);
            }
            (false, false) => {}
        }
    }

    let mut residual = ResidualSystem::default();
    let mut direct: Option<String> = None;
    for b in &set.bases {
        let ones: usize = b
            .projectors
            .iter()
            .filter(|p| value.get(p) == Some(&1))
            .count();
        let open: Vec<Projector> = b
            .projectors
            .iter()
            .copied()
            .filter(|p| !value.contains_key(p))
            .collect();
        if ones > 1 || (open.is_empty() && ones != 1) {
            direct.get_or_insert_with(|| {
                format!(
                    "basis {:?} forced to sum {ones} with no free projectors",
                    b.label
                )
            });
            continue;
        }
        if !open.is_empty() {
            residual.equations.push(Equation {
                basis: b.label,
                projectors: open,
                rhs: 1 - ones,
            });
        }
    }
    let solutions = if direct.is_some() {
        0
    } else {
        residual.solution_count()
    };

    let rank1_members: Vec<RayId> = set
        .projectors()
        .into_iter()
        .filter_map(|p| match p {
            Projector::Rank1(r) => Some(r),
            Projector::Rank2(..) => None,
        })
        .collect();
    let orth_pre: Vec<RayId> = rank1_members
        .iter()
        .copied()
        .filter(|&r| table.orthogonal(&Projector::Rank1(r), pre))
        .collect();
    let orth_post: Vec<RayId> = rank1_members
        .iter()
        .copied()
        .filter(|&r| table.orthogonal(&Projector::Rank1(r), post) && !orth_pre.contains(&r))
        .collect();
    let inventory = Inventory {
        pre,
        orthogonal_to_pre: orth_pre,
        post,
        orthogonal_to_post: orth_post,
        residual: residual.projectors(),
    };
    let mut used: Vec<Projector> = [pre, post]
        .into_iter()
        .chain(inventory.orthogonal_to_pre.iter().copied())
        .chain(inventory.orthogonal_to_post.iter().copied())
        .map(Projector::Rank1)
        .chain(inventory.residual.iter().copied())
        .collect();
    used.sort();
    used.dedup();

    let witness = match (&direct, residual.parity_witness()) {
        (Some(d), _) => d.clone(),
        (None, Some(w)) if solutions == 0 => w,
        (None, _) if solutions == 0 => format!(
            "{} residual equations have no 0/1 solution",
            residual.equations.len()
        ),
        (None, _) => format!("residual has {solutions} solutions; no contradiction"),
    };
    Ok(ProofReport {
        kind: ProofKind::StateDependent,
        contradiction: solutions == 0,
        used_projectors: used,
        witness,
        signature: Some(set.signature().to_string()),
        assignments: Some(solutions),
        state_dependent: Some(StateDependentDetails {
            pre,
            post,
            probability: probability.to_string(),
            residual,
            residual_solutions: solutions,
            inventory,
        }),
    })
}

/// A successful state-dependent argument found by [`search_state_dependent`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDependentHit {
    pub child: usize,
    pub split: (RayId, RayId),
    pub pre: RayId,
    pub post: RayId,
    pub used: usize,
    pub residual_equations: usize,
    pub probability: String,
}

/// For every child, every rank-2 split and every ordered pair of
/// non-orthogonal rays of the split set, runs [`state_dependent_proof`] and
/// keeps the contradictions. Output is ordered by (child, split, pre, post).
pub fn search_state_dependent(
    children: &[KsSet],
    realization: &Realization<'_>,
) -> Vec<StateDependentHit> {
    let per_child: Vec<Vec<StateDependentHit>> = children
        .par_iter()
        .enumerate()
        .map(|(idx, child)| {
            let mut hits = Vec::new();
            let Ok(table) = OrthTable::new(realization, child.rays()) else {
                return hits;
            };
            let ids: Vec<RayId> = child.rays().iter().collect();
            for p in child.rank2_projectors() {
                let Projector::Rank2(i, j) = p else { continue };
                let split = split_rank2(child, (i, j)).expect("member");
                for &pre in &ids {
                    for &post in &ids {
                        if pre == post || table.orthogonal(&Projector::Rank1(post), pre) {
                            continue;
                        }
                        let vp = realization.vector(pre).expect("realized");
                        let vq = realization.vector(post).expect("realized");
                        let prob = overlap_probability(vp, vq);
                        if let Ok(report) = decide_state_dependent(&split, &table, pre, post, prob)
                        {
                            if report.contradiction {
                                let d = report.state_dependent.as_ref().expect("details");
                                hits.push(StateDependentHit {
                                    child: idx,
                                    split: (i, j),
                                    pre,
                                    post,
                                    used: d.inventory.total(),
                                    residual_equations: d.residual.equations.len(),
                                    probability: d.probability.clone(),
                                });
                            }
                        }
                    }
                }
            }
            hits
        })
        .collect();
    per_child.into_iter().flatten().collect()
}

/// Full check of a KS set: odd number of bases, every projector with even
/// multiplicity, rank-2 members built from orthogonal rays, and every basis
/// summing exactly to the identity.
pub fn validate(set: &KsSet, realization: &Realization<'_>) -> Result<Signature, ValidationError> {
    if set.basis_count().is_multiple_of(2) {
        return Err(ValidationError::EvenBasisCount(set.basis_count()));
    }
    for (p, m) in set.multiplicities() {
        if m % 2 == 1 {
            return Err(ValidationError::OddMultiplicity {
                projector: p.to_string(),
                count: m,
            });
        }
    }
    validate_structure(set, realization)
}

/// The geometric half of [`validate`]: rank-2 members built from orthogonal
/// rays, no ray repeated within a basis, every basis summing to the identity.
pub fn validate_structure(
    set: &KsSet,
    realization: &Realization<'_>,
) -> Result<Signature, ValidationError> {
    for (index, b) in set.bases.iter().enumerate() {
        let mut seen = RaySet::EMPTY;
        let mut vecs = Vec::with_capacity(8);
        for p in &b.projectors {
            for r in p.ray_ids() {
                if seen.contains(r) {
                    return Err(ValidationError::RepeatedRay { index, ray: r });
                }
                seen.insert(r);
                vecs.push(
                    realization
                        .vector(r)
                        .ok_or(ValidationError::Unrealized(r))?,
                );
            }
            if let Projector::Rank2(x, y) = *p {
                let (vx, vy) = (realization.vector(x), realization.vector(y));
                if !inner(vx.expect("realized"), vy.expect("realized")).is_zero() {
                    return Err(ValidationError::PairNotOrthogonal(x, y));
                }
            }
        }
        if !projector_sum_check(vecs)? {
            return Err(ValidationError::NotIdentity { index });
        }
    }
    Ok(set.signature())
}

/// Identity-sum check for every basis of a set, via its realization.
pub fn bases_resolve_identity(
    set: &KsSet,
    realization: &Realization<'_>,
) -> Result<bool, ValidationError> {
    for b in &set.bases {
        let vecs = b
            .rays()
            .iter()
            .map(|r| realization.vector(r).ok_or(ValidationError::Unrealized(r)))
            .collect::<Result<Vec<_>, _>>()?;
        if b.rank() != vecs.len() || !projector_sum_check(vecs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_data, FixtureName};
    use crate::ksset::{Frame, SPLIT_SIGNATURE};

    fn published() -> Realization<'static> {
        Realization::for_frame(Frame::Published)
    }

    #[test]
    fn parity_on_fixtures() {
        for name in FixtureName::ALL {
            let r = parity_contradiction(&fixture_data(name)).unwrap();
            assert!(r.contradiction);
            assert_eq!(r.witness, "even vs 11");
        }
    }

    #[test]
    fn even_subcollection_is_not_parity_form() {
        let mut t1 = fixture_data(FixtureName::Table1);
        t1.bases.pop();
        assert!(matches!(
            parity_contradiction(&t1),
            Err(ProofError::NotParityForm(_))
        ));
    }

    #[test]
    fn fixtures_admit_no_assignment() {
        assert_eq!(
            exhaustive_noncolorability(&fixture_data(FixtureName::Table1)),
            0
        );
        assert_eq!(
            exhaustive_noncolorability(&fixture_data(FixtureName::Table2)),
            0
        );
    }

    #[test]
    fn single_basis_has_eight_assignments() {
        let mut t2 = fixture_data(FixtureName::Table2);
        t2.bases.truncate(1);
        assert_eq!(exhaustive_noncolorability(&t2), 8);
    }

    #[test]
    fn split_and_merge() {
        let t1 = fixture_data(FixtureName::Table1);
        let split = split_rank2(&t1, (27, 25)).unwrap();
        assert_eq!(split.signature().to_string(), SPLIT_SIGNATURE);
        assert!(merge_rank1(&split, (25, 27)).canonically_equal(&t1));
        assert_eq!(split_rank2(&t1, (1, 2)), Err(ProofError::NotPresent(1, 2)));
    }

    #[test]
    fn worked_state_dependent_example() {
        let t1 = fixture_data(FixtureName::Table1);
        let split = split_rank2(&t1, (25, 27)).unwrap();
        let report = state_dependent_proof(&split, &published(), 33, 12).unwrap();
        assert!(report.contradiction);
        let d = report.state_dependent.unwrap();
        let eqs: Vec<Vec<Projector>> = d
            .residual
            .equations
            .iter()
            .map(|e| e.projectors.clone())
            .collect();
        use Projector::Rank1 as R;
        assert_eq!(
            eqs,
            vec![vec![R(4), R(27)], vec![R(4), R(20)], vec![R(20), R(27)]]
        );
        assert!(d.residual.equations.iter().all(|e| e.rhs == 1));
        assert_eq!(
            d.inventory.orthogonal_to_pre,
            vec![3, 5, 10, 11, 21, 24, 25, 28, 31]
        );
        assert_eq!(d.inventory.orthogonal_to_post, vec![6, 14, 15, 17, 26, 29]);
        assert_eq!(d.inventory.breakdown(), [1, 9, 1, 6, 3]);
        assert_eq!(report.used_projectors.len(), 20);
        assert!(d.residual.parity_witness().is_some());
    }

    #[test]
    fn orthogonal_pair_is_rejected() {
        let t1 = fixture_data(FixtureName::Table1);
        assert_eq!(
            state_dependent_proof(&t1, &published(), 33, 35),
            Err(ProofError::OverlapZero(33, 35))
        );
        assert_eq!(
            state_dependent_proof(&t1, &published(), 33, 1),
            Err(ProofError::RayNotInSet(1))
        );
    }

    #[test]
    fn residual_solver() {
        use Projector::Rank1 as R;
        let eq = |ps: Vec<Projector>| Equation {
            basis: None,
            projectors: ps,
            rhs: 1,
        };
        let odd = ResidualSystem {
            equations: vec![
                eq(vec![R(1), R(2)]),
                eq(vec![R(2), R(3)]),
                eq(vec![R(1), R(3)]),
            ],
        };
        assert_eq!(odd.solution_count(), 0);
        let path = ResidualSystem {
            equations: vec![eq(vec![R(1), R(2)]), eq(vec![R(2), R(3)])],
        };
        assert_eq!(path.solution_count(), 2);
        assert!(path.parity_witness().is_none());
    }

    #[test]
    fn fixtures_validate() {
        for name in FixtureName::ALL {
            let set = fixture_data(name);
            assert!(validate(&set, &published()).is_ok(), "{name}");
        }
    }
}
