//! Projectors, projector bases, KS sets and their type signatures.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rays::BasisId;
use crate::rayset::{RayId, RaySet};

/// A rank-1 projector (one ray) or a rank-2 projector (an unordered pair of
/// orthogonal rays, stored with the smaller id first).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Projector {
    Rank1(RayId),
    Rank2(RayId, RayId),
}

impl Projector {
    /// Panics if `a == b`.
    pub fn pair(a: RayId, b: RayId) -> Self {
        assert_ne!(a, b, "a rank-2 projector needs two distinct rays");
        Projector::Rank2(a.min(b), a.max(b))
    }

    pub fn rank(&self) -> usize {
        match self {
            Projector::Rank1(_) => 1,
            Projector::Rank2(..) => 2,
        }
    }

    pub fn rays(&self) -> RaySet {
        match *self {
            Projector::Rank1(a) => RaySet::single(a),
            Projector::Rank2(a, b) => RaySet::single(a).union(RaySet::single(b)),
        }
    }

    pub fn ray_ids(&self) -> Vec<RayId> {
        match *self {
            Projector::Rank1(a) => vec![a],
            Projector::Rank2(a, b) => vec![a, b],
        }
    }

    pub fn contains(&self, ray: RayId) -> bool {
        self.rays().contains(ray)
    }

    fn sort_key(&self) -> (u8, RayId, RayId) {
        match *self {
            Projector::Rank2(a, b) => (0, a, b),
            Projector::Rank1(a) => (1, a, 0),
        }
    }
}

/// Rank-2 projectors sort before rank-1 projectors, then by ray ids. This
/// mirrors the tabular layout with parenthesized pairs in front.
impl Ord for Projector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Projector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectorRepr {
    rays: ProjectorRays,
}

/// The ray list, validated while it is parsed so errors keep their position.
struct ProjectorRays(Projector);

impl Serialize for ProjectorRays {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.ray_ids().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectorRays {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rays = Vec::<RayId>::deserialize(d)?;
        match rays[..] {
            [a] => Ok(Self(Projector::Rank1(a))),
            [a, b] if a != b => Ok(Self(Projector::pair(a, b))),
            [a, _] => Err(D::Error::custom(format!(
                "rank-2 projector repeats ray {a}"
            ))),
            _ => Err(D::Error::custom(format!(
                "a projector has 1 or 2 rays, got {}",
                rays.len()
            ))),
        }
    }
}

/// Serialized as `{"rays":[i]}` or `{"rays":[i,j]}` with `i < j`.
impl Serialize for Projector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ProjectorRepr {
            rays: ProjectorRays(*self),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Projector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(ProjectorRepr::deserialize(d)?.rays.0)
    }
}

impl fmt::Display for Projector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Projector::Rank1(a) => write!(f, "{a}"),
            Projector::Rank2(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// One context: projectors that should sum to the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjBasis {
    /// Id of the underlying rank-1 basis in whichever labeling the set uses.
    pub label: Option<BasisId>,
    pub projectors: Vec<Projector>,
}

impl ProjBasis {
    pub fn new(label: Option<BasisId>, mut projectors: Vec<Projector>) -> Self {
        projectors.sort();
        Self { label, projectors }
    }

    pub fn rank_one(label: Option<BasisId>, rays: RaySet) -> Self {
        Self::new(label, rays.iter().map(Projector::Rank1).collect())
    }

    pub fn size(&self) -> usize {
        self.projectors.len()
    }

    /// All constituent rays.
    pub fn rays(&self) -> RaySet {
        self.projectors
            .iter()
            .fold(RaySet::EMPTY, |acc, p| acc.union(p.rays()))
    }

    /// Total rank; 8 for a complete basis of the three-qubit space.
    pub fn rank(&self) -> usize {
        self.projectors.iter().map(Projector::rank).sum()
    }
}

/// Which ray numbering a set is written in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// Ids of the regenerated system.
    #[default]
    Generated,
    /// Ids of the published tables, bridged to geometry by relabeling.
    Published,
}

/// Where a set came from. All fields are optional.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default)]
    pub frame: Frame,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub i_matching: Vec<(RayId, RayId)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v_choice: Vec<(RayId, RayId)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<(RayId, RayId)>,
}

/// An ordered collection of projector bases.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KsSet {
    pub bases: Vec<ProjBasis>,
    pub provenance: Provenance,
}

impl KsSet {
    pub fn new(bases: Vec<ProjBasis>, provenance: Provenance) -> Self {
        Self { bases, provenance }
    }

    pub fn frame(&self) -> Frame {
        self.provenance.frame
    }

    pub fn basis_count(&self) -> usize {
        self.bases.len()
    }

    pub fn slot_count(&self) -> usize {
        self.bases.iter().map(ProjBasis::size).sum()
    }

    pub fn rays(&self) -> RaySet {
        self.bases
            .iter()
            .fold(RaySet::EMPTY, |acc, b| acc.union(b.rays()))
    }

    /// Number of bases each projector occurs in.
    pub fn multiplicities(&self) -> BTreeMap<Projector, usize> {
        let mut m = BTreeMap::new();
        for b in &self.bases {
            for &p in &b.projectors {
                *m.entry(p).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn projectors(&self) -> Vec<Projector> {
        self.multiplicities().into_keys().collect()
    }

    pub fn rank2_projectors(&self) -> Vec<Projector> {
        self.projectors()
            .into_iter()
            .filter(|p| p.rank() == 2)
            .collect()
    }

    pub fn basis_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.bases.iter().map(ProjBasis::size).collect();
        sizes.sort_unstable();
        sizes
    }

    pub fn signature(&self) -> Signature {
        Signature::of(self)
    }

    /// Sorted multiset of sorted bases; labels and provenance are dropped.
    pub fn canonical_form(&self) -> Vec<Vec<Projector>> {
        let mut bases: Vec<Vec<Projector>> = self
            .bases
            .iter()
            .map(|b| {
                let mut ps = b.projectors.clone();
                ps.sort();
                ps
            })
            .collect();
        bases.sort();
        bases
    }

    pub fn canonically_equal(&self, other: &KsSet) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// Copy with bases in canonical order (labels kept alongside).
    pub fn canonicalized(&self) -> KsSet {
        let mut bases: Vec<ProjBasis> = self
            .bases
            .iter()
            .map(|b| ProjBasis::new(b.label, b.projectors.clone()))
            .collect();
        bases.sort_by(|a, b| a.projectors.cmp(&b.projectors).then(a.label.cmp(&b.label)));
        KsSet::new(bases, self.provenance.clone())
    }

    /// Rewrites every ray id through `map`.
    pub fn relabeled(&self, map: impl Fn(RayId) -> RayId, frame: Frame) -> KsSet {
        let bases = self
            .bases
            .iter()
            .map(|b| {
                let ps = b
                    .projectors
                    .iter()
                    .map(|p| match *p {
                        Projector::Rank1(a) => Projector::Rank1(map(a)),
                        Projector::Rank2(a, c) => Projector::pair(map(a), map(c)),
                    })
                    .collect();
                ProjBasis::new(b.label, ps)
            })
            .collect();
        let mut provenance = self.provenance.clone();
        provenance.frame = frame;
        KsSet::new(bases, provenance)
    }
}

/// Type signature: multiplicity profiles of rank-1 and rank-2 projectors and
/// the basis-size profile, each as `value → count`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub rank1: BTreeMap<usize, usize>,
    pub rank2: BTreeMap<usize, usize>,
    pub sizes: BTreeMap<usize, usize>,
}

impl Signature {
    pub fn of(set: &KsSet) -> Self {
        let mut sig = Signature::default();
        for (p, mult) in set.multiplicities() {
            let profile = if p.rank() == 1 {
                &mut sig.rank1
            } else {
                &mut sig.rank2
            };
            *profile.entry(mult).or_insert(0) += 1;
        }
        for b in &set.bases {
            *sig.sizes.entry(b.size()).or_insert(0) += 1;
        }
        sig
    }

    /// `Σ count × multiplicity` over both projector profiles.
    pub fn projector_slots(&self) -> usize {
        self.rank1
            .iter()
            .chain(self.rank2.iter())
            .map(|(m, c)| m * c)
            .sum()
    }

    /// `Σ count × size` over the basis profile.
    pub fn basis_slots(&self) -> usize {
        self.sizes.iter().map(|(s, c)| s * c).sum()
    }

    pub fn basis_count(&self) -> usize {
        self.sizes.values().sum()
    }
}

/// Renders e.g. `16_2 [14_2] - 1_4 4_5 6_6`.
impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self.rank1.iter().map(|(m, c)| format!("{c}_{m}")).collect();
        terms.extend(self.rank2.iter().map(|(m, c)| format!("[{c}_{m}]")));
        terms.push("-".to_string());
        terms.extend(self.sizes.iter().map(|(s, c)| format!("{c}_{s}")));
        f.write_str(&terms.join(" "))
    }
}

/// Signature of the rank-1 parents.
pub const PARENT_SIGNATURE: &str = "28_2 8_4 - 11_8";
/// Signature of the mixed-rank children.
pub const CHILD_SIGNATURE: &str = "16_2 [14_2] - 1_4 4_5 6_6";
/// Signature after splitting one rank-2 projector of a child.
pub const SPLIT_SIGNATURE: &str = "18_2 [13_2] - 1_4 4_5 4_6 2_7";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projector_order_puts_pairs_first() {
        let mut ps = vec![
            Projector::Rank1(3),
            Projector::pair(8, 2),
            Projector::Rank1(1),
            Projector::pair(1, 40),
        ];
        ps.sort();
        assert_eq!(
            ps,
            vec![
                Projector::Rank2(1, 40),
                Projector::Rank2(2, 8),
                Projector::Rank1(1),
                Projector::Rank1(3)
            ]
        );
    }

    #[test]
    #[should_panic]
    fn degenerate_pair_panics() {
        let _ = Projector::pair(4, 4);
    }

    #[test]
    fn signature_rendering() {
        let b = |ids: &[RayId]| ProjBasis::rank_one(None, ids.iter().copied().collect());
        let set = KsSet::new(
            vec![b(&[1, 2, 3]), b(&[1, 2, 4]), b(&[3, 4])],
            Provenance::default(),
        );
        let sig = set.signature();
        assert_eq!(sig.to_string(), "4_2 - 1_2 2_3");
        assert_eq!(sig.projector_slots(), sig.basis_slots());
    }

    #[test]
    fn canonical_form_ignores_order_and_labels() {
        let a = KsSet::new(
            vec![
                ProjBasis::new(Some(1), vec![Projector::Rank1(1), Projector::pair(2, 3)]),
                ProjBasis::new(Some(2), vec![Projector::Rank1(4)]),
            ],
            Provenance::default(),
        );
        let b = KsSet::new(
            vec![
                ProjBasis::new(None, vec![Projector::Rank1(4)]),
                ProjBasis::new(None, vec![Projector::pair(3, 2), Projector::Rank1(1)]),
            ],
            Provenance::default(),
        );
        assert!(a.canonically_equal(&b));
    }
}
