//! The two published KS sets, entered verbatim over the published ray ids.
//!
//! `table2` is the rank-1 parent (type `28_2 8_4 - 11_8`) with its bases in
//! the canonical order (pure basis first, then the four hosts of the
//! Γ 3-subsets); `table1` is the mixed-rank child (type
//! `16_2 [14_2] - 1_4 4_5 6_6`) derived from it.

use std::fmt;
use std::str::FromStr;

use crate::ksset::{Frame, KsSet, ProjBasis, Projector, Provenance};
use crate::rays::BasisId;
use crate::rayset::{RayId, RaySet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixtureName {
    Table1,
    Table2,
}

impl FixtureName {
    pub const ALL: [FixtureName; 2] = [FixtureName::Table1, FixtureName::Table2];

    pub fn as_str(self) -> &'static str {
        match self {
            FixtureName::Table1 => "table1",
            FixtureName::Table2 => "table2",
        }
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixtureName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim_start_matches("fixture:") {
            "table1" => Ok(FixtureName::Table1),
            "table2" => Ok(FixtureName::Table2),
            other => Err(format!(
                "unknown fixture `{other}` (expected table1 or table2)"
            )),
        }
    }
}

const TABLE2: [(BasisId, [RayId; 8]); 11] = [
    (5, [33, 34, 35, 36, 37, 38, 39, 40]),
    (10, [33, 34, 36, 35, 8, 2, 3, 5]),
    (22, [33, 34, 38, 40, 18, 19, 21, 24]),
    (24, [33, 36, 38, 37, 25, 28, 30, 31]),
    (16, [34, 36, 38, 39, 12, 9, 14, 15]),
    (11, [8, 25, 2, 28, 4, 6, 26, 27]),
    (12, [8, 18, 3, 19, 4, 7, 17, 20]),
    (13, [8, 12, 5, 9, 6, 7, 10, 11]),
    (18, [12, 25, 14, 30, 10, 16, 26, 29]),
    (19, [12, 18, 15, 21, 11, 16, 17, 22]),
    (23, [18, 25, 24, 31, 20, 22, 27, 29]),
];

type Row = (BasisId, &'static [(RayId, RayId)], &'static [RayId]);

const TABLE1: [Row; 11] = [
    (5, &[(33, 35), (34, 40), (36, 37), (38, 39)], &[]),
    (10, &[(34, 36), (33, 35), (8, 2)], &[3, 5]),
    (22, &[(33, 38), (34, 40), (18, 19)], &[21, 24]),
    (24, &[(33, 38), (36, 37), (25, 30)], &[28, 31]),
    (16, &[(34, 36), (38, 39), (12, 9)], &[14, 15]),
    (11, &[(8, 2), (25, 27)], &[4, 6, 26, 28]),
    (12, &[(18, 19), (8, 7)], &[3, 4, 17, 20]),
    (13, &[(12, 9), (8, 7)], &[5, 6, 10, 11]),
    (18, &[(25, 30), (12, 16)], &[10, 14, 26, 29]),
    (19, &[(12, 16), (18, 22)], &[11, 15, 17, 21]),
    (23, &[(18, 22), (25, 27)], &[20, 24, 29, 31]),
];

/// Rays printed in italics in both tables (multiplicity 4 in the parent).
pub const ITALIC_RAYS: [RayId; 8] = [33, 34, 36, 38, 8, 12, 18, 25];

/// Which published 8-block a published ray id belongs to (1..=5).
pub fn published_block(id: RayId) -> u8 {
    (id - 1) / 8 + 1
}

fn provenance(name: FixtureName) -> Provenance {
    Provenance {
        frame: Frame::Published,
        source: Some(format!("fixture:{name}")),
        ..Provenance::default()
    }
}

/// The embedded table as a [`KsSet`] in the published basis order, labeled
/// with the published basis ids.
pub fn fixture_data(name: FixtureName) -> KsSet {
    let set = match name {
        FixtureName::Table2 => KsSet::new(
            TABLE2
                .iter()
                .map(|(label, rays)| {
                    ProjBasis::rank_one(Some(*label), rays.iter().copied().collect())
                })
                .collect(),
            provenance(name),
        ),
        FixtureName::Table1 => KsSet::new(
            TABLE1
                .iter()
                .map(|(label, pairs, singles)| {
                    let ps = pairs
                        .iter()
                        .map(|&(a, b)| Projector::pair(a, b))
                        .chain(singles.iter().map(|&a| Projector::Rank1(a)))
                        .collect();
                    ProjBasis::new(Some(*label), ps)
                })
                .collect(),
            provenance(name),
        ),
    };
    check_fixture(name, &set);
    set
}

/// Bases of the rank-1 parent table as ray sets, in published order.
pub fn table2_bases() -> Vec<(BasisId, RaySet)> {
    TABLE2
        .iter()
        .map(|(label, rays)| (*label, rays.iter().copied().collect()))
        .collect()
}

fn check_fixture(name: FixtureName, set: &KsSet) {
    let mult = set.multiplicities();
    match name {
        FixtureName::Table2 => {
            assert_eq!(set.slot_count(), 88);
            assert_eq!(mult.values().filter(|&&m| m == 2).count(), 28);
            assert_eq!(mult.values().filter(|&&m| m == 4).count(), 8);
            assert_eq!(mult.len(), 36);
        }
        FixtureName::Table1 => {
            assert_eq!(set.slot_count(), 60);
            assert!(mult.values().all(|&m| m == 2));
            assert!(set.bases.iter().all(|b| b.rank() == 8));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table2_first_row_is_the_last_block() {
        let t2 = fixture_data(FixtureName::Table2);
        assert_eq!(t2.bases[0].label, Some(5));
        assert_eq!(
            t2.bases[0].rays().iter().collect::<Vec<_>>(),
            (33..=40).collect::<Vec<_>>()
        );
    }

    #[test]
    fn table2_italic_rays_have_multiplicity_four() {
        let t2 = fixture_data(FixtureName::Table2);
        let mut fours: Vec<RayId> = t2
            .multiplicities()
            .into_iter()
            .filter(|&(_, m)| m == 4)
            .map(|(p, _)| p.ray_ids()[0])
            .collect();
        fours.sort_unstable();
        let mut italic = ITALIC_RAYS.to_vec();
        italic.sort_unstable();
        assert_eq!(fours, italic);
    }

    #[test]
    fn table1_basis_sizes() {
        let t1 = fixture_data(FixtureName::Table1);
        assert_eq!(t1.basis_sizes(), vec![4, 5, 5, 5, 5, 6, 6, 6, 6, 6, 6]);
    }

    #[test]
    fn table1_refines_table2_row_by_row() {
        let t1 = fixture_data(FixtureName::Table1);
        let t2 = fixture_data(FixtureName::Table2);
        for (a, b) in t1.bases.iter().zip(&t2.bases) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.rays(), b.rays());
        }
    }

    #[test]
    fn names_parse() {
        assert_eq!("fixture:table1".parse(), Ok(FixtureName::Table1));
        assert_eq!("table2".parse(), Ok(FixtureName::Table2));
        assert!("table3".parse::<FixtureName>().is_err());
    }
}
