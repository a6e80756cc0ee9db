//! Parity proofs among the 25 bases and the exhaustive parent search.
//!
//! A subset of bases is a parity proof when it has an odd number of bases and
//! every ray occurs an even number of times. With each basis stored as a ray
//! bitmask the second condition is simply "the XOR of all masks is zero".

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::fixtures::{published_block, table2_bases};
use crate::ksset::{Frame, KsSet, ProjBasis, Provenance, Signature, PARENT_SIGNATURE};
use crate::rays::{BasisId, BasisKind, RaySystem, BASIS_COUNT};
use crate::rayset::{RayId, RaySet};

/// Number of bases in a parent set.
pub const PARENT_BASES: usize = 11;
/// Number of parents in the 25-basis system.
pub const PARENT_COUNT: usize = 320;

/// A subset of the 25 generated bases; bit `k` stands for basis id `k + 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisSubset(pub u32);

impl BasisSubset {
    pub fn from_ids(ids: impl IntoIterator<Item = BasisId>) -> Self {
        Self(ids.into_iter().fold(0, |m, id| m | 1 << (id - 1)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn ids(self) -> impl Iterator<Item = BasisId> {
        (0..BASIS_COUNT as u8)
            .filter(move |k| self.0 & (1 << k) != 0)
            .map(|k| k + 1)
    }
}

/// True iff the subset has an odd number of bases and every ray occurs an
/// even number of times among them.
pub fn is_parity_proof(system: &RaySystem, subset: BasisSubset) -> bool {
    if subset.len().is_multiple_of(2) {
        return false;
    }
    let xor = subset
        .ids()
        .filter_map(|id| system.basis(id))
        .fold(0u64, |acc, b| acc ^ b.rays.0);
    xor == 0
}

fn rank_one_signature(masks: impl Iterator<Item = RaySet>) -> Signature {
    let mut counts = [0usize; 64];
    let mut sig = Signature::default();
    for m in masks {
        *sig.sizes.entry(m.len()).or_insert(0) += 1;
        for id in m.iter() {
            counts[id as usize] += 1;
        }
    }
    for &c in counts.iter().filter(|&&c| c > 0) {
        *sig.rank1.entry(c).or_insert(0) += 1;
    }
    sig
}

pub fn subset_signature(system: &RaySystem, subset: BasisSubset) -> Signature {
    rank_one_signature(
        subset
            .ids()
            .filter_map(|id| system.basis(id))
            .map(|b| b.rays),
    )
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParentError {
    #[error("parent has {0} bases, expected 11")]
    BasisCount(usize),
    #[error("parent signature is `{0}`, expected `28_2 8_4 - 11_8`")]
    Signature(String),
    #[error("parent has {0} pure bases, expected 1")]
    PureCount(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParentBasis {
    pub label: BasisId,
    pub pure: bool,
    pub rays: RaySet,
}

/// A rank-1 KS set of type `28_2 8_4 - 11_8`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParentSet {
    /// Subset mask when drawn from the generated system.
    pub subset: Option<BasisSubset>,
    pub frame: Frame,
    pub bases: Vec<ParentBasis>,
}

impl ParentSet {
    pub fn new(
        subset: Option<BasisSubset>,
        frame: Frame,
        bases: Vec<ParentBasis>,
    ) -> Result<Self, ParentError> {
        let p = Self {
            subset,
            frame,
            bases,
        };
        p.check()?;
        Ok(p)
    }

    pub fn from_subset(system: &RaySystem, subset: BasisSubset) -> Result<Self, ParentError> {
        let bases = subset
            .ids()
            .filter_map(|id| system.basis(id))
            .map(|b| ParentBasis {
                label: b.id,
                pure: b.kind == BasisKind::Pure,
                rays: b.rays,
            })
            .collect();
        Self::new(Some(subset), Frame::Generated, bases)
    }

    /// The published Table 2 parent over published ids. A basis is pure when
    /// all its rays fall in one published 8-block.
    pub fn table2() -> Self {
        let bases = table2_bases()
            .into_iter()
            .map(|(label, rays)| {
                let block = published_block(rays.first().expect("nonempty"));
                ParentBasis {
                    label,
                    pure: rays.iter().all(|id| published_block(id) == block),
                    rays,
                }
            })
            .collect();
        Self::new(None, Frame::Published, bases).expect("Table 2 is a parent")
    }

    fn check(&self) -> Result<(), ParentError> {
        if self.bases.len() != PARENT_BASES {
            return Err(ParentError::BasisCount(self.bases.len()));
        }
        let sig = self.signature().to_string();
        if sig != PARENT_SIGNATURE {
            return Err(ParentError::Signature(sig));
        }
        let pure = self.bases.iter().filter(|b| b.pure).count();
        if pure != 1 {
            return Err(ParentError::PureCount(pure));
        }
        Ok(())
    }

    pub fn signature(&self) -> Signature {
        rank_one_signature(self.bases.iter().map(|b| b.rays))
    }

    pub fn multiplicity(&self, ray: RayId) -> usize {
        self.bases.iter().filter(|b| b.rays.contains(ray)).count()
    }

    pub fn rays(&self) -> RaySet {
        self.bases
            .iter()
            .fold(RaySet::EMPTY, |acc, b| acc.union(b.rays))
    }

    pub fn rays_with_multiplicity(&self, mult: usize) -> RaySet {
        self.rays()
            .iter()
            .filter(|&r| self.multiplicity(r) == mult)
            .collect()
    }

    pub fn basis(&self, label: BasisId) -> Option<&ParentBasis> {
        self.bases.iter().find(|b| b.label == label)
    }

    pub fn to_ksset(&self) -> KsSet {
        KsSet::new(
            self.bases
                .iter()
                .map(|b| ProjBasis::rank_one(Some(b.label), b.rays))
                .collect(),
            Provenance {
                frame: self.frame,
                source: Some(self.describe()),
                ..Provenance::default()
            },
        )
    }

    /// `mask:0x…` for generated parents, `fixture:table2` for the published one.
    pub fn describe(&self) -> String {
        match self.subset {
            Some(s) => format!("mask:{:#09x}", s.0),
            None => "fixture:table2".to_string(),
        }
    }
}

/// Recursively enumerates `k`-subsets of bases `start..25` extending `mask`,
/// keeping those whose running XOR vanishes.
fn xor_combinations(
    masks: &[u64],
    start: usize,
    k: usize,
    mask: u32,
    xor: u64,
    out: &mut Vec<u32>,
) {
    if k == 0 {
        if xor == 0 {
            out.push(mask);
        }
        return;
    }
    for i in start..=masks.len() - k {
        xor_combinations(masks, i + 1, k - 1, mask | 1 << i, xor ^ masks[i], out);
    }
}

/// All parity-proof subsets with exactly `k` bases, sorted by mask value.
/// Parallel over the lowest basis index.
pub fn parity_subsets_of_size(system: &RaySystem, k: usize) -> Vec<BasisSubset> {
    let masks: Vec<u64> = system.bases().iter().map(|b| b.rays.0).collect();
    if k == 0 || k > masks.len() || k.is_multiple_of(2) {
        return Vec::new();
    }
    let mut found: Vec<u32> = (0..=masks.len() - k)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            xor_combinations(&masks, first + 1, k - 1, 1 << first, masks[first], &mut out);
            out
        })
        .collect();
    found.sort_unstable();
    found.into_iter().map(BasisSubset).collect()
}

/// Exhaustive scan of all 11-subsets; keeps the parity proofs of type
/// `28_2 8_4 - 11_8`, sorted by mask value.
pub fn enumerate_parents(system: &RaySystem) -> Vec<ParentSet> {
    parity_subsets_of_size(system, PARENT_BASES)
        .into_iter()
        .filter(|&s| subset_signature(system, s).to_string() == PARENT_SIGNATURE)
        .map(|s| ParentSet::from_subset(system, s).expect("filtered on signature"))
        .collect()
}

/// Counts every parity proof with at most `max_bases` bases by signature.
pub fn classify_parity_proofs(system: &RaySystem, max_bases: usize) -> BTreeMap<Signature, usize> {
    let mut counts = BTreeMap::new();
    for k in (1..=max_bases.min(BASIS_COUNT)).step_by(2) {
        let found = parity_subsets_of_size(system, k);
        let sigs: Vec<Signature> = found
            .par_iter()
            .map(|&s| subset_signature(system, s))
            .collect();
        for sig in sigs {
            *counts.entry(sig).or_insert(0) += 1;
        }
    }
    counts
}

/// The signature counts keyed by their rendered strings.
pub fn classification_table(counts: &BTreeMap<Signature, usize>) -> BTreeMap<String, usize> {
    counts.iter().map(|(s, &c)| (s.to_string(), c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relabel::published_relabeling;

    fn system() -> &'static RaySystem {
        RaySystem::shared()
    }

    #[test]
    fn single_basis_and_even_subsets_fail() {
        let s = system();
        for id in 1..=25 {
            assert!(!is_parity_proof(s, BasisSubset::from_ids([id])));
        }
        assert!(!is_parity_proof(s, BasisSubset::from_ids(1..=10)));
    }

    #[test]
    fn relabeled_table2_is_a_parity_proof() {
        let s = system();
        let map = published_relabeling();
        let ids = table2_bases().into_iter().map(|(_, rays)| {
            let img = map.image(rays).unwrap();
            s.bases().iter().find(|b| b.rays == img).unwrap().id
        });
        let subset = BasisSubset::from_ids(ids);
        assert_eq!(subset.len(), 11);
        assert!(is_parity_proof(s, subset));
        assert_eq!(subset_signature(s, subset).to_string(), PARENT_SIGNATURE);
    }

    #[test]
    fn table2_fixture_parent() {
        let p = ParentSet::table2();
        assert_eq!(p.signature().to_string(), PARENT_SIGNATURE);
        assert_eq!(p.bases.iter().filter(|b| b.pure).count(), 1);
        assert_eq!(p.rays().len(), 36);
    }

    #[test]
    fn parity_is_permutation_invariant() {
        // masks are order-free by construction; check the xor path against
        // a direct multiplicity count on a few random subsets
        let s = system();
        for mask in [0x1555555u32, 0x0AAAAAA, 0x1F0F0F0, 0x00007FF] {
            let sub = BasisSubset(mask);
            let sig = subset_signature(s, sub);
            let all_even = sig.rank1.keys().all(|m| m % 2 == 0);
            assert_eq!(is_parity_proof(s, sub), all_even && sub.len() % 2 == 1);
        }
    }

    #[test]
    fn wrong_signature_is_not_a_parent() {
        let s = system();
        let err = ParentSet::from_subset(s, BasisSubset::from_ids(1..=11)).unwrap_err();
        assert!(matches!(err, ParentError::Signature(_)));
    }
}
