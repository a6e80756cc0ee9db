//! Embedding published ray labels into the regenerated system.
//!
//! The published tables number rays in blocks of eight that line up with the
//! octads, but the order within a block (and which block is which octad) is
//! not recoverable. [`match_fixture`] searches for an injective relabeling
//! under which every published basis becomes a generated basis.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::algebra::Vec8;
use crate::fixtures::{published_block, table2_bases};
use crate::ksset::{Frame, KsSet};
use crate::rays::{BasisKind, RaySystem};
use crate::rayset::{RayId, RaySet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelabelError {
    #[error("no relabeling embeds the fixture into the generated bases")]
    NoEmbedding,
    #[error("fixture basis {index} has {len} rays, expected 8")]
    BadFixture { index: usize, len: usize },
    #[error("ray {0} has no image under the relabeling")]
    Unmapped(RayId),
}

/// Injective map from fixture ray ids to generated ray ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelabelMap {
    map: BTreeMap<RayId, RayId>,
}

impl RelabelMap {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (RayId, RayId)>) -> Self {
        Self {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, fixture_id: RayId) -> Option<RayId> {
        self.map.get(&fixture_id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (RayId, RayId)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn image(&self, set: RaySet) -> Option<RaySet> {
        set.iter()
            .map(|id| self.get(id))
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().collect())
    }

    pub fn is_injective(&self) -> bool {
        let images: RaySet = self.map.values().copied().collect();
        images.len() == self.map.len()
    }

    /// Checks injectivity, block-to-octad consistency, and that every fixture
    /// basis maps exactly onto a generated basis.
    pub fn is_valid_for(&self, fixture: &[RaySet], system: &RaySystem) -> bool {
        if !self.is_injective() {
            return false;
        }
        let mut block_octad = BTreeMap::new();
        for (src, dst) in self.iter() {
            let Some(ray) = system.ray(dst) else {
                return false;
            };
            if *block_octad.entry(published_block(src)).or_insert(ray.octad) != ray.octad {
                return false;
            }
        }
        let octads: std::collections::BTreeSet<u8> = block_octad.values().copied().collect();
        if octads.len() != block_octad.len() {
            return false;
        }
        fixture.iter().all(|b| {
            self.image(*b)
                .is_some_and(|img| system.bases().iter().any(|sb| sb.rays == img))
        })
    }

    /// Applies the map to a set written in the published labeling.
    pub fn apply(&self, set: &KsSet) -> Result<KsSet, RelabelError> {
        if let Some(missing) = set.rays().iter().find(|&id| self.get(id).is_none()) {
            return Err(RelabelError::Unmapped(missing));
        }
        Ok(set.relabeled(|id| self.get(id).expect("checked above"), Frame::Generated))
    }
}

struct Search<'a> {
    system: &'a RaySystem,
    fixture: &'a [RaySet],
    fixture_pure: Vec<bool>,
    order: Vec<RayId>,
    containing: BTreeMap<RayId, Vec<usize>>,
    map: BTreeMap<RayId, RayId>,
    used: RaySet,
    block_octad: [Option<u8>; 9],
}

impl Search<'_> {
    fn image_fits(&self, basis_idx: usize) -> bool {
        let img: RaySet = self.fixture[basis_idx]
            .iter()
            .filter_map(|id| self.map.get(&id).copied())
            .collect();
        let want = if self.fixture_pure[basis_idx] {
            BasisKind::Pure
        } else {
            BasisKind::Hybrid
        };
        self.system
            .bases()
            .iter()
            .any(|b| b.kind == want && img.is_subset(b.rays))
    }

    fn run(&mut self, depth: usize) -> bool {
        let Some(&src) = self.order.get(depth) else {
            return true;
        };
        let block = published_block(src) as usize;
        let octads: Vec<u8> = match self.block_octad[block] {
            Some(o) => vec![o],
            None => (1..=5)
                .filter(|o| !self.block_octad.contains(&Some(*o)))
                .collect(),
        };
        for octad in octads {
            let fresh_block = self.block_octad[block].is_none();
            self.block_octad[block] = Some(octad);
            let candidates = self.system.octad_rays(octad).difference(self.used);
            for dst in candidates.iter() {
                self.map.insert(src, dst);
                self.used.insert(dst);
                let ok = self.containing[&src].iter().all(|&b| self.image_fits(b));
                if ok && self.run(depth + 1) {
                    return true;
                }
                self.used.remove(dst);
                self.map.remove(&src);
            }
            if fresh_block {
                self.block_octad[block] = None;
            }
        }
        false
    }
}

/// Finds a relabeling from fixture ids to generated ids under which every
/// fixture basis is a generated basis. Each published 8-block maps into a
/// single octad. Candidates are tried in ascending order, so a fixture that
/// already uses generated numbering maps by the identity.
pub fn match_fixture(fixture: &[RaySet], system: &RaySystem) -> Result<RelabelMap, RelabelError> {
    for (index, b) in fixture.iter().enumerate() {
        if b.len() != 8 || b.iter().any(|id| id == 0 || id > 40) {
            return Err(RelabelError::BadFixture {
                index,
                len: b.len(),
            });
        }
    }
    let mut order = Vec::new();
    let mut seen = RaySet::EMPTY;
    let mut containing: BTreeMap<RayId, Vec<usize>> = BTreeMap::new();
    for (i, b) in fixture.iter().enumerate() {
        for id in b.iter() {
            containing.entry(id).or_default().push(i);
            if !seen.contains(id) {
                seen.insert(id);
                order.push(id);
            }
        }
    }
    let fixture_pure = fixture
        .iter()
        .map(|b| {
            b.iter()
                .all(|id| published_block(id) == published_block(b.first().unwrap()))
        })
        .collect();
    let mut search = Search {
        system,
        fixture,
        fixture_pure,
        order,
        containing,
        map: BTreeMap::new(),
        used: RaySet::EMPTY,
        block_octad: [None; 9],
    };
    if search.run(0) {
        Ok(RelabelMap { map: search.map })
    } else {
        Err(RelabelError::NoEmbedding)
    }
}

/// Vectors for the rays of a set, in whichever frame it is written.
#[derive(Clone, Copy, Debug)]
pub struct Realization<'a> {
    system: &'a RaySystem,
    relabel: Option<&'a RelabelMap>,
}

impl<'a> Realization<'a> {
    pub fn generated(system: &'a RaySystem) -> Self {
        Self {
            system,
            relabel: None,
        }
    }

    pub fn relabeled(system: &'a RaySystem, relabel: &'a RelabelMap) -> Self {
        Self {
            system,
            relabel: Some(relabel),
        }
    }

    /// Realization for the shared system and the given frame. The published
    /// frame goes through the cached Table 2 embedding.
    pub fn for_frame(frame: Frame) -> Realization<'static> {
        let system = RaySystem::shared();
        match frame {
            Frame::Generated => Realization::generated(system),
            Frame::Published => Realization::relabeled(system, published_relabeling()),
        }
    }

    pub fn system(&self) -> &'a RaySystem {
        self.system
    }

    pub fn generated_id(&self, id: RayId) -> Option<RayId> {
        match self.relabel {
            Some(m) => m.get(id),
            None => self.system.ray(id).map(|r| r.id),
        }
    }

    pub fn vector(&self, id: RayId) -> Option<&'a Vec8> {
        self.system.vector(self.generated_id(id)?)
    }
}

/// The embedding of the published Table 2 into the shared system, computed
/// once. Panics if no embedding exists, since that falsifies regeneration.
pub fn published_relabeling() -> &'static RelabelMap {
    static MAP: OnceLock<RelabelMap> = OnceLock::new();
    MAP.get_or_init(|| {
        let bases: Vec<RaySet> = table2_bases().into_iter().map(|(_, r)| r).collect();
        match_fixture(&bases, RaySystem::shared())
            .expect("Table 2 embeds into the generated system")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table2_embeds() {
        let system = RaySystem::shared();
        let fixture: Vec<RaySet> = table2_bases().into_iter().map(|(_, r)| r).collect();
        let map = match_fixture(&fixture, system).unwrap();
        assert_eq!(map.len(), 36);
        assert!(map.is_valid_for(&fixture, system));
    }

    #[test]
    fn pure_bases_map_by_identity() {
        let system = RaySystem::shared();
        let fixture: Vec<RaySet> = system.bases()[..5].iter().map(|b| b.rays).collect();
        let identity = RelabelMap::from_pairs((1..=40).map(|i| (i, i)));
        assert!(identity.is_valid_for(&fixture, system));
        assert_eq!(match_fixture(&fixture, system).unwrap(), identity);
    }

    #[test]
    fn cross_block_corruption_has_no_embedding() {
        let system = RaySystem::shared();
        let mut fixture: Vec<RaySet> = table2_bases().into_iter().map(|(_, r)| r).collect();
        // base 10: replace ray 35 (block 5) by ray 13 (block 2)
        fixture[1].remove(35);
        fixture[1].insert(13);
        assert_eq!(
            match_fixture(&fixture, system),
            Err(RelabelError::NoEmbedding)
        );
    }

    #[test]
    fn malformed_fixture_is_rejected() {
        let system = RaySystem::shared();
        let fixture = vec![RaySet::from_iter([1, 2, 3])];
        assert!(matches!(
            match_fixture(&fixture, system),
            Err(RelabelError::BadFixture { index: 0, len: 3 })
        ));
    }
}
