//! Merging the rays of a rank-1 parent (type `28_2 8_4 - 11_8`) into rank-2
//! projectors, giving mixed-rank children of type `16_2 [14_2] - 1_4 4_5 6_6`.
//!
//! A parent has one pure basis `PB`. Four of its rays (Γ) have multiplicity
//! 4, and each 3-subset of Γ lies in its own hybrid basis `HB_a..HB_d`; the
//! other four `PB` rays (¬Γ) occur once more, one in each of those hosts. The
//! four multiplicity-4 rays outside `PB` form Δ, one per host. The remaining
//! six hybrids ("last six") carry the other occurrences.
//!
//! The free choices are a matching Γ ↔ ¬Γ (the pairs of `PB`) and, for every
//! Δ ray, one partner among the three multiplicity-2 rays of its host row.
//! Everything else is forced; [`derive_child`] builds the forced pairs and
//! rejects configurations whose projectors do not all occur exactly twice.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ksset::{KsSet, ProjBasis, Projector, Provenance};
use crate::parity::ParentSet;
use crate::rays::BasisId;
use crate::rayset::{RayId, RaySet};

/// Claimed number of valid matchings of the pure basis.
pub const CLAIMED_I_WAYS: usize = 7;
/// Claimed number of valid partner choices for the Δ rays.
pub const CLAIMED_V_WAYS: usize = 81;
/// Claimed number of children per parent.
pub const CLAIMED_CHILDREN_PER_PARENT: usize = 567;

#[derive(Debug, Error, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformError {
    #[error("parent structure: {0}")]
    Structure(String),
    #[error("malformed merge configuration: {0}")]
    BadConfig(String),
    #[error("pair ({gamma},{not_gamma}) cannot recur: ray {gamma} is absent from basis {host}")]
    ForbiddenPair {
        gamma: RayId,
        not_gamma: RayId,
        host: BasisId,
    },
    #[error("projector {projector} occurs {count} times, expected 2")]
    Multiplicity {
        projector: String,
        rays: Vec<RayId>,
        count: usize,
    },
    #[error("Δ ray {delta}: no unique common multiplicity-2 ray in bases {bases:?} (candidates {candidates:?})")]
    Ambiguity {
        delta: RayId,
        bases: Vec<BasisId>,
        candidates: Vec<RayId>,
    },
    #[error("ray {ray} is claimed by two pairs in basis {basis}")]
    PairConflict { basis: BasisId, ray: RayId },
}

impl TransformError {
    pub fn kind(&self) -> &'static str {
        match self {
            TransformError::Structure(_) => "structure",
            TransformError::BadConfig(_) => "bad_config",
            TransformError::ForbiddenPair { .. } => "forbidden_pair",
            TransformError::Multiplicity { .. } => "multiplicity",
            TransformError::Ambiguity { .. } => "ambiguity",
            TransformError::PairConflict { .. } => "pair_conflict",
        }
    }
}

fn structure(msg: impl Into<String>) -> TransformError {
    TransformError::Structure(msg.into())
}

/// Γ/¬Γ/Δ identification and canonical basis order of a parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParentAnalysis {
    pub pb: BasisId,
    /// Γ in ascending order `α < β < γ < δ`.
    pub gamma: [RayId; 4],
    /// Hosts of `Γ_a = {α,β,γ}`, `Γ_b = {α,β,δ}`, `Γ_c = {α,γ,δ}`, `Γ_d = {β,γ,δ}`.
    pub gamma_hosts: [BasisId; 4],
    pub not_gamma: [RayId; 4],
    pub delta: [RayId; 4],
    /// `[PB, HB_a, HB_b, HB_c, HB_d, last six ascending]`.
    pub hb_order: Vec<BasisId>,
}

impl ParentAnalysis {
    pub fn hosts(&self) -> &[BasisId] {
        &self.hb_order[1..5]
    }

    pub fn last_six(&self) -> &[BasisId] {
        &self.hb_order[5..]
    }

    pub fn gamma_set(&self) -> RaySet {
        self.gamma.iter().copied().collect()
    }

    pub fn not_gamma_set(&self) -> RaySet {
        self.not_gamma.iter().copied().collect()
    }

    pub fn delta_set(&self) -> RaySet {
        self.delta.iter().copied().collect()
    }
}

fn rays_of(p: &ParentSet, label: BasisId) -> RaySet {
    p.basis(label).map(|b| b.rays).unwrap_or_default()
}

fn to_array(set: RaySet) -> [RayId; 4] {
    let v: Vec<RayId> = set.iter().collect();
    v.try_into().expect("four rays")
}

pub fn analyze_parent(p: &ParentSet) -> Result<ParentAnalysis, TransformError> {
    let pure: Vec<_> = p.bases.iter().filter(|b| b.pure).collect();
    if pure.len() != 1 {
        return Err(structure(format!("{} pure bases", pure.len())));
    }
    let pb = pure[0];
    let fours = p.rays_with_multiplicity(4);
    if fours.len() != 8 {
        return Err(structure(format!("{} rays of multiplicity 4", fours.len())));
    }
    let gamma_set = fours.intersection(pb.rays);
    let delta_set = fours.difference(pb.rays);
    if gamma_set.len() != 4 || delta_set.len() != 4 {
        return Err(structure(format!(
            "pure basis holds {} multiplicity-4 rays",
            gamma_set.len()
        )));
    }
    let gamma = to_array(gamma_set);
    let hybrids: Vec<_> = p.bases.iter().filter(|b| !b.pure).collect();
    let mut gamma_hosts = [0; 4];
    // Γ_a..Γ_d omit δ, γ, β, α respectively.
    for (slot, omit) in [3usize, 2, 1, 0].into_iter().enumerate() {
        let mut subset = gamma_set;
        subset.remove(gamma[omit]);
        let hosts: Vec<_> = hybrids
            .iter()
            .filter(|b| subset.is_subset(b.rays))
            .collect();
        if hosts.len() != 1 {
            return Err(structure(format!(
                "Γ 3-subset {:?} lies in {} hybrid bases",
                subset,
                hosts.len()
            )));
        }
        gamma_hosts[slot] = hosts[0].label;
    }
    if gamma_hosts.iter().collect::<BTreeSet<_>>().len() != 4 {
        return Err(structure("Γ 3-subsets share a host"));
    }
    let mut hb_order = vec![pb.label];
    hb_order.extend(gamma_hosts);
    let mut rest: Vec<BasisId> = hybrids
        .iter()
        .map(|b| b.label)
        .filter(|l| !gamma_hosts.contains(l))
        .collect();
    rest.sort_unstable();
    hb_order.extend(rest);
    Ok(ParentAnalysis {
        pb: pb.label,
        gamma,
        gamma_hosts,
        not_gamma: to_array(pb.rays.difference(gamma_set)),
        delta: to_array(delta_set),
        hb_order,
    })
}

/// An occurrence of a ray in a basis.
pub type Slot = (BasisId, RayId);

/// The eight divisions I–VIII of the 88 occurrence slots.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisionPartition {
    pub divisions: [Vec<Slot>; 8],
}

impl DivisionPartition {
    pub const EXPECTED_SIZES: [usize; 8] = [8, 12, 4, 4, 12, 12, 12, 24];

    pub fn division(&self, numeral: usize) -> &[Slot] {
        &self.divisions[numeral - 1]
    }

    pub fn sizes(&self) -> [usize; 8] {
        std::array::from_fn(|i| self.divisions[i].len())
    }

    pub fn rays_in(&self, numeral: usize) -> RaySet {
        self.division(numeral).iter().map(|&(_, r)| r).collect()
    }
}

pub fn partition_divisions(
    p: &ParentSet,
    a: &ParentAnalysis,
) -> Result<DivisionPartition, TransformError> {
    let gamma = a.gamma_set();
    let not_gamma = a.not_gamma_set();
    let delta = a.delta_set();
    let mut d = DivisionPartition::default();
    for r in rays_of(p, a.pb).iter() {
        d.divisions[0].push((a.pb, r));
    }
    let mut v_rays = RaySet::EMPTY;
    for &h in a.hosts() {
        for r in rays_of(p, h).iter() {
            let k = if gamma.contains(r) {
                1
            } else if not_gamma.contains(r) {
                2
            } else if delta.contains(r) {
                3
            } else {
                v_rays.insert(r);
                4
            };
            d.divisions[k].push((h, r));
        }
    }
    for &h in a.last_six() {
        for r in rays_of(p, h).iter() {
            let k = if delta.contains(r) {
                5
            } else if v_rays.contains(r) {
                6
            } else {
                7
            };
            d.divisions[k].push((h, r));
        }
    }
    for v in v_rays.iter() {
        let recur = d.divisions[6].iter().filter(|&&(_, r)| r == v).count();
        if recur != 1 {
            return Err(structure(format!(
                "V ray {v} recurs {recur} times in the last six bases"
            )));
        }
    }
    let mut viii: BTreeMap<RayId, usize> = BTreeMap::new();
    for &(_, r) in &d.divisions[7] {
        *viii.entry(r).or_insert(0) += 1;
    }
    if let Some((r, c)) = viii.iter().find(|&(_, &c)| c != 2) {
        return Err(structure(format!("division VIII ray {r} occurs {c} times")));
    }
    if d.sizes() != DivisionPartition::EXPECTED_SIZES {
        return Err(structure(format!("division sizes {:?}", d.sizes())));
    }
    Ok(d)
}

/// The Γ ray absent from the host of `not_gamma`; pairing the two in the pure
/// basis can never recur.
pub fn forbidden_partner(p: &ParentSet, a: &ParentAnalysis, not_gamma: RayId) -> Option<RayId> {
    let host = host_of_not_gamma(p, a, not_gamma)?;
    a.gamma
        .iter()
        .copied()
        .find(|&g| !rays_of(p, host).contains(g))
}

fn host_of_not_gamma(p: &ParentSet, a: &ParentAnalysis, not_gamma: RayId) -> Option<BasisId> {
    if !a.not_gamma_set().contains(not_gamma) {
        return None;
    }
    a.hosts()
        .iter()
        .copied()
        .find(|&h| rays_of(p, h).contains(not_gamma))
}

fn host_of_delta(p: &ParentSet, a: &ParentAnalysis, delta: RayId) -> Option<BasisId> {
    a.hosts()
        .iter()
        .copied()
        .find(|&h| rays_of(p, h).contains(delta))
}

/// The multiplicity-2 rays sharing the host row of a Δ ray.
pub fn v_candidates(p: &ParentSet, a: &ParentAnalysis, delta: RayId) -> RaySet {
    let Some(host) = host_of_delta(p, a, delta) else {
        return RaySet::EMPTY;
    };
    rays_of(p, host)
        .difference(a.gamma_set())
        .difference(a.not_gamma_set())
        .difference(a.delta_set())
}

/// The free choices of the transform.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MergeConfig {
    /// `(Γ ray, ¬Γ ray)`, sorted by the Γ ray.
    pub i_matching: Vec<(RayId, RayId)>,
    /// `(Δ ray, chosen partner)`, sorted by the Δ ray.
    pub v_choice: Vec<(RayId, RayId)>,
}

impl MergeConfig {
    pub fn new(mut i_matching: Vec<(RayId, RayId)>, mut v_choice: Vec<(RayId, RayId)>) -> Self {
        i_matching.sort_unstable();
        v_choice.sort_unstable();
        Self {
            i_matching,
            v_choice,
        }
    }

    /// Matched Γ ray of a ¬Γ ray.
    pub fn partner_of_not_gamma(&self, n: RayId) -> Option<RayId> {
        self.i_matching
            .iter()
            .find(|&&(_, m)| m == n)
            .map(|&(g, _)| g)
    }

    pub fn partner_of_delta(&self, d: RayId) -> Option<RayId> {
        self.v_choice
            .iter()
            .find(|&&(x, _)| x == d)
            .map(|&(_, v)| v)
    }
}

fn check_config(
    p: &ParentSet,
    a: &ParentAnalysis,
    cfg: &MergeConfig,
) -> Result<(), TransformError> {
    let bad = |m: String| Err(TransformError::BadConfig(m));
    let gs: RaySet = cfg.i_matching.iter().map(|&(g, _)| g).collect();
    let ns: RaySet = cfg.i_matching.iter().map(|&(_, n)| n).collect();
    if cfg.i_matching.len() != 4 || gs != a.gamma_set() || ns != a.not_gamma_set() {
        return bad(format!(
            "i_matching {:?} is not a bijection Γ → ¬Γ",
            cfg.i_matching
        ));
    }
    let ds: RaySet = cfg.v_choice.iter().map(|&(d, _)| d).collect();
    if cfg.v_choice.len() != 4 || ds != a.delta_set() {
        return bad(format!("v_choice {:?} does not cover Δ", cfg.v_choice));
    }
    for &(d, v) in &cfg.v_choice {
        if !v_candidates(p, a, d).contains(v) {
            return bad(format!("{v} is not in the host row of Δ ray {d}"));
        }
    }
    Ok(())
}

/// Builds the projector bases dictated by `cfg` without checking
/// multiplicities. Exposed so rejection witnesses can be re-checked.
pub fn assemble_child(
    p: &ParentSet,
    a: &ParentAnalysis,
    cfg: &MergeConfig,
) -> Result<KsSet, TransformError> {
    check_config(p, a, cfg)?;
    let mut pairs: BTreeMap<BasisId, Vec<(RayId, RayId)>> = BTreeMap::new();

    // (1) division I
    pairs
        .entry(a.pb)
        .or_default()
        .extend(cfg.i_matching.iter().copied());

    // (2) II-III type-B pair and the type-A pair in each Γ host
    for &h in a.hosts() {
        let rays = rays_of(p, h);
        let n = rays
            .intersection(a.not_gamma_set())
            .first()
            .ok_or_else(|| structure(format!("Γ host {h} has no ¬Γ ray")))?;
        let g = cfg.partner_of_not_gamma(n).expect("checked bijection");
        if !rays.contains(g) {
            return Err(TransformError::ForbiddenPair {
                gamma: g,
                not_gamma: n,
                host: h,
            });
        }
        let mut rest = rays.intersection(a.gamma_set());
        rest.remove(g);
        let rest: Vec<RayId> = rest.iter().collect();
        let [x, y] = rest[..] else {
            return Err(structure(format!(
                "Γ host {h} holds {} other Γ rays",
                rest.len()
            )));
        };
        let e = pairs.entry(h).or_default();
        e.push((g, n));
        e.push((x, y));
    }

    // (3)-(5) Δ rays
    for &(d, v) in &cfg.v_choice {
        let host = host_of_delta(p, a, d).expect("checked config");
        pairs.entry(host).or_default().push((d, v));
        let carriers: Vec<BasisId> = a
            .last_six()
            .iter()
            .copied()
            .filter(|&h| rays_of(p, h).contains(d))
            .collect();
        let recurrence: Vec<BasisId> = carriers
            .iter()
            .copied()
            .filter(|&h| rays_of(p, h).contains(v))
            .collect();
        if let [h] = recurrence[..] {
            pairs.entry(h).or_default().push((d, v));
        }
        let others: Vec<BasisId> = carriers
            .iter()
            .copied()
            .filter(|h| !recurrence.contains(h))
            .collect();
        let candidates: Vec<RayId> = match others[..] {
            [x, y] => rays_of(p, x)
                .intersection(rays_of(p, y))
                .iter()
                .filter(|&r| p.multiplicity(r) == 2)
                .collect(),
            _ => Vec::new(),
        };
        match (others.len(), &candidates[..]) {
            (2, &[c]) => {
                for &h in &others {
                    pairs.entry(h).or_default().push((d, c));
                }
            }
            _ => {
                return Err(TransformError::Ambiguity {
                    delta: d,
                    bases: others,
                    candidates,
                })
            }
        }
    }

    let mut bases = Vec::with_capacity(a.hb_order.len());
    for &h in &a.hb_order {
        let rays = rays_of(p, h);
        let mut claimed = RaySet::EMPTY;
        let mut projectors = Vec::new();
        for &(x, y) in pairs.get(&h).map(Vec::as_slice).unwrap_or_default() {
            for r in [x, y] {
                if claimed.contains(r) || !rays.contains(r) {
                    return Err(TransformError::PairConflict { basis: h, ray: r });
                }
                claimed.insert(r);
            }
            projectors.push(Projector::pair(x, y));
        }
        projectors.extend(rays.difference(claimed).iter().map(Projector::Rank1));
        bases.push(ProjBasis::new(Some(h), projectors));
    }
    Ok(KsSet::new(
        bases,
        Provenance {
            frame: p.frame,
            parent: Some(p.describe()),
            i_matching: cfg.i_matching.clone(),
            v_choice: cfg.v_choice.clone(),
            ..Provenance::default()
        },
    ))
}

/// Derives the child for `cfg` and checks that every projector occurs
/// exactly twice and the basis sizes are `{4, 5⁴, 6⁶}`.
pub fn derive_child(
    p: &ParentSet,
    a: &ParentAnalysis,
    cfg: &MergeConfig,
) -> Result<KsSet, TransformError> {
    let child = assemble_child(p, a, cfg)?;
    if let Some((proj, count)) = child.multiplicities().into_iter().find(|&(_, c)| c != 2) {
        return Err(TransformError::Multiplicity {
            projector: proj.to_string(),
            rays: proj.ray_ids(),
            count,
        });
    }
    debug_assert_eq!(child.basis_sizes(), CHILD_BASIS_SIZES);
    Ok(child)
}

pub const CHILD_BASIS_SIZES: [usize; 11] = [4, 5, 5, 5, 5, 6, 6, 6, 6, 6, 6];

/// Every candidate configuration in a fixed order: the 24 bijections Γ → ¬Γ
/// (lexicographic in the image of Γ) times the 81 partner choices
/// (lexicographic per Δ ray).
pub fn candidate_configs(p: &ParentSet, a: &ParentAnalysis) -> Vec<MergeConfig> {
    let perms = permutations(&a.not_gamma);
    let rows: Vec<Vec<RayId>> = a
        .delta
        .iter()
        .map(|&d| v_candidates(p, a, d).iter().collect())
        .collect();
    let mut v_choices: Vec<Vec<(RayId, RayId)>> = vec![Vec::new()];
    for (i, row) in rows.iter().enumerate() {
        v_choices = v_choices
            .into_iter()
            .flat_map(|prefix| {
                row.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push((a.delta[i], v));
                    next
                })
            })
            .collect();
    }
    let mut out = Vec::with_capacity(perms.len() * v_choices.len());
    for perm in &perms {
        let matching: Vec<(RayId, RayId)> =
            a.gamma.iter().copied().zip(perm.iter().copied()).collect();
        for vc in &v_choices {
            out.push(MergeConfig::new(matching.clone(), vc.clone()));
        }
    }
    out
}

fn permutations(items: &[RayId]) -> Vec<Vec<RayId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub config: MergeConfig,
    pub error: TransformError,
}

/// A claimed count next to the observed one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub claimed: usize,
    pub observed: usize,
    pub matches: bool,
}

impl Expectation {
    fn new(claimed: usize, observed: usize) -> Self {
        Self {
            claimed,
            observed,
            matches: claimed == observed,
        }
    }
}

/// Full accounting of one parent's candidate configurations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountCertificate {
    pub parent: String,
    pub total_candidates: usize,
    pub successes: usize,
    pub distinct_i_matchings: usize,
    pub distinct_v_choices: usize,
    pub distinct_children: usize,
    pub failures: BTreeMap<String, usize>,
    pub expectations: BTreeMap<String, Expectation>,
    pub rejected: Vec<Rejection>,
}

impl CountCertificate {
    pub fn matches_claims(&self) -> bool {
        self.expectations.values().all(|e| e.matches)
    }
}

#[derive(Clone, Debug)]
pub struct ChildEnumeration {
    pub analysis: ParentAnalysis,
    pub children: Vec<(MergeConfig, KsSet)>,
    pub certificate: CountCertificate,
}

/// Runs [`derive_child`] on every candidate configuration of one parent.
pub fn enumerate_children(p: &ParentSet) -> Result<ChildEnumeration, TransformError> {
    let a = analyze_parent(p)?;
    partition_divisions(p, &a)?;
    let configs = candidate_configs(p, &a);
    let mut children = Vec::new();
    let mut rejected = Vec::new();
    for cfg in &configs {
        match derive_child(p, &a, cfg) {
            Ok(child) => children.push((cfg.clone(), child)),
            Err(error) => rejected.push(Rejection {
                config: cfg.clone(),
                error,
            }),
        }
    }
    let mut failures = BTreeMap::new();
    for r in &rejected {
        *failures.entry(r.error.kind().to_string()).or_insert(0) += 1;
    }
    let i_ways: HashSet<_> = children.iter().map(|(c, _)| &c.i_matching).collect();
    let v_ways: HashSet<_> = children.iter().map(|(c, _)| &c.v_choice).collect();
    let distinct: HashSet<_> = children.iter().map(|(_, k)| k.canonical_form()).collect();
    let expectations = BTreeMap::from([
        (
            "division_i_ways".to_string(),
            Expectation::new(CLAIMED_I_WAYS, i_ways.len()),
        ),
        (
            "iv_v_ways".to_string(),
            Expectation::new(CLAIMED_V_WAYS, v_ways.len()),
        ),
        (
            "children_per_parent".to_string(),
            Expectation::new(CLAIMED_CHILDREN_PER_PARENT, children.len()),
        ),
    ]);
    let certificate = CountCertificate {
        parent: p.describe(),
        total_candidates: configs.len(),
        successes: children.len(),
        distinct_i_matchings: i_ways.len(),
        distinct_v_choices: v_ways.len(),
        distinct_children: distinct.len(),
        failures,
        expectations,
        rejected,
    };
    Ok(ChildEnumeration {
        analysis: a,
        children,
        certificate,
    })
}

/// Per-parent counts and the overall distinct-child total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogSummary {
    pub parents: usize,
    pub per_parent_successes: Vec<usize>,
    pub counts_equal: bool,
    pub total_children: usize,
    pub distinct_children: usize,
    pub failures: BTreeMap<String, usize>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub enumerations: Vec<ChildEnumeration>,
    pub summary: CatalogSummary,
}

impl Catalog {
    pub fn children(&self) -> impl Iterator<Item = &KsSet> {
        self.enumerations
            .iter()
            .flat_map(|e| e.children.iter().map(|(_, c)| c))
    }
}

/// Runs [`enumerate_children`] on every parent (in parallel, results in
/// parent order) and deduplicates the children canonically.
pub fn enumerate_all_children(parents: &[ParentSet]) -> Result<Catalog, TransformError> {
    let enumerations: Vec<ChildEnumeration> = parents
        .par_iter()
        .map(enumerate_children)
        .collect::<Result<_, _>>()?;
    let per_parent: Vec<usize> = enumerations
        .iter()
        .map(|e| e.certificate.successes)
        .collect();
    let mut failures = BTreeMap::new();
    for e in &enumerations {
        for (k, c) in &e.certificate.failures {
            *failures.entry(k.clone()).or_insert(0) += c;
        }
    }
    let distinct: HashSet<Vec<Vec<Projector>>> = enumerations
        .iter()
        .flat_map(|e| e.children.iter().map(|(_, c)| c.canonical_form()))
        .collect();
    let summary = CatalogSummary {
        parents: parents.len(),
        counts_equal: per_parent.windows(2).all(|w| w[0] == w[1]),
        total_children: per_parent.iter().sum(),
        per_parent_successes: per_parent,
        distinct_children: distinct.len(),
        failures,
    };
    Ok(Catalog {
        enumerations,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_data, FixtureName};
    use crate::ksset::{Projector as P, CHILD_SIGNATURE};

    fn fixture() -> (ParentSet, ParentAnalysis) {
        let p = ParentSet::table2();
        let a = analyze_parent(&p).unwrap();
        (p, a)
    }

    fn table1_config() -> MergeConfig {
        MergeConfig::new(
            vec![(33, 35), (34, 40), (36, 37), (38, 39)],
            vec![(8, 2), (18, 19), (12, 9), (25, 30)],
        )
    }

    #[test]
    fn analysis_of_table2() {
        let (_, a) = fixture();
        assert_eq!(a.pb, 5);
        assert_eq!(a.gamma, [33, 34, 36, 38]);
        assert_eq!(a.not_gamma, [35, 37, 39, 40]);
        assert_eq!(a.delta, [8, 12, 18, 25]);
        assert_eq!(a.gamma_hosts, [10, 22, 24, 16]);
        assert_eq!(a.hb_order, vec![5, 10, 22, 24, 16, 11, 12, 13, 18, 19, 23]);
    }

    #[test]
    fn divisions_of_table2() {
        let (p, a) = fixture();
        let d = partition_divisions(&p, &a).unwrap();
        assert_eq!(d.sizes(), DivisionPartition::EXPECTED_SIZES);
        assert_eq!(d.sizes().iter().sum::<usize>(), 88);
        assert_eq!(
            d.rays_in(8).iter().collect::<Vec<_>>(),
            vec![4, 6, 7, 10, 11, 16, 17, 20, 22, 26, 27, 29]
        );
        assert_eq!(d.rays_in(2), a.gamma_set());
        assert_eq!(d.rays_in(3), a.not_gamma_set());
        assert_eq!(d.rays_in(4), a.delta_set());
        assert_eq!(d.rays_in(5), d.rays_in(7));
        assert_eq!(
            v_candidates(&p, &a, 8).iter().collect::<Vec<_>>(),
            vec![2, 3, 5]
        );
    }

    #[test]
    fn forbidden_partners_of_table2() {
        let (p, a) = fixture();
        assert_eq!(forbidden_partner(&p, &a, 35), Some(38));
        assert_eq!(forbidden_partner(&p, &a, 39), Some(33));
        assert_eq!(forbidden_partner(&p, &a, 37), Some(34));
        assert_eq!(forbidden_partner(&p, &a, 40), Some(36));
        assert_eq!(forbidden_partner(&p, &a, 33), None);
    }

    #[test]
    fn table1_is_reproduced() {
        let (p, a) = fixture();
        let child = derive_child(&p, &a, &table1_config()).unwrap();
        assert!(child.canonically_equal(&fixture_data(FixtureName::Table1)));
        assert_eq!(child.signature().to_string(), CHILD_SIGNATURE);
        let m = child.multiplicities();
        assert_eq!(m[&P::pair(34, 36)], 2);
        assert_eq!(m[&P::pair(33, 38)], 2);
        for (x, y) in [(8, 7), (12, 16), (18, 22), (25, 27)] {
            assert_eq!(m[&P::pair(x, y)], 2);
        }
    }

    #[test]
    fn forbidden_pair_is_rejected() {
        let (p, a) = fixture();
        let cfg = MergeConfig::new(
            vec![(38, 35), (34, 40), (36, 37), (33, 39)],
            table1_config().v_choice,
        );
        assert!(matches!(
            derive_child(&p, &a, &cfg),
            Err(TransformError::ForbiddenPair {
                gamma: 38,
                not_gamma: 35,
                host: 10
            })
        ));
    }

    #[test]
    fn malformed_config_is_rejected() {
        let (p, a) = fixture();
        let cfg = MergeConfig::new(vec![(33, 35)], table1_config().v_choice);
        assert!(matches!(
            derive_child(&p, &a, &cfg),
            Err(TransformError::BadConfig(_))
        ));
        let cfg = MergeConfig::new(
            table1_config().i_matching,
            vec![(8, 9), (18, 19), (12, 9), (25, 30)],
        );
        assert!(matches!(
            derive_child(&p, &a, &cfg),
            Err(TransformError::BadConfig(_))
        ));
    }

    #[test]
    fn fixture_enumeration_contains_table1() {
        let (p, _) = fixture();
        let e = enumerate_children(&p).unwrap();
        assert_eq!(e.certificate.total_candidates, 24 * 81);
        assert_eq!(
            e.certificate.successes + e.certificate.rejected.len(),
            24 * 81
        );
        let t1 = fixture_data(FixtureName::Table1);
        assert!(e.children.iter().any(|(_, c)| c.canonically_equal(&t1)));
        assert_eq!(e.certificate.distinct_children, e.certificate.successes);
        for (_, c) in &e.children {
            assert_eq!(c.signature().to_string(), CHILD_SIGNATURE);
        }
    }

    #[test]
    fn derive_is_deterministic() {
        let (p, a) = fixture();
        let cfg = table1_config();
        assert_eq!(derive_child(&p, &a, &cfg), derive_child(&p, &a, &cfg));
    }
}
