//! JSON records and aligned text tables.
//!
//! JSON output is canonical: keys in a fixed order and arrays sorted, so
//! re-serializing a parsed document reproduces it byte for byte.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{GaussInt, Vec8};
use crate::ksset::{KsSet, ProjBasis, Projector, Provenance};
use crate::parity::ParentSet;
use crate::rays::{Basis, BasisId, BasisKind, Ray};
use crate::rayset::RayId;
use crate::transform::{
    CatalogSummary, ChildEnumeration, CountCertificate, MergeConfig, ParentAnalysis,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep only the cause
        let message = message
            .rsplit_once(" at line ")
            .map_or(message.clone(), |(m, _)| m.to_string());
        ParseError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records always serialize");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayRecord {
    pub id: RayId,
    pub octad: u8,
    pub v: [[i64; 2]; 8],
}

impl From<&Ray> for RayRecord {
    fn from(r: &Ray) -> Self {
        Self {
            id: r.id,
            octad: r.octad,
            v: r.vector.0.map(|z| [z.re, z.im]),
        }
    }
}

impl From<&RayRecord> for Ray {
    fn from(r: &RayRecord) -> Self {
        Ray {
            id: r.id,
            octad: r.octad,
            vector: Vec8(r.v.map(|[re, im]| GaussInt::new(re, im))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisRecord {
    pub id: BasisId,
    pub kind: BasisKind,
    pub rays: Vec<RayId>,
}

impl From<&Basis> for BasisRecord {
    fn from(b: &Basis) -> Self {
        Self {
            id: b.id,
            kind: b.kind,
            rays: b.ray_ids(),
        }
    }
}

pub fn rays_to_json(rays: &[Ray]) -> String {
    let mut records: Vec<RayRecord> = rays.iter().map(RayRecord::from).collect();
    records.sort_by_key(|r| r.id);
    to_json(&records)
}

pub fn rays_from_json(text: &str) -> Result<Vec<Ray>, ParseError> {
    let records: Vec<RayRecord> = from_json(text)?;
    Ok(records.iter().map(Ray::from).collect())
}

pub fn bases_to_json(bases: &[Basis]) -> String {
    let mut records: Vec<BasisRecord> = bases.iter().map(BasisRecord::from).collect();
    records.sort_by_key(|b| b.id);
    to_json(&records)
}

pub fn bases_from_json(text: &str) -> Result<Vec<BasisRecord>, ParseError> {
    let mut records: Vec<BasisRecord> = from_json(text)?;
    for (i, b) in records.iter_mut().enumerate() {
        let n = b.rays.len();
        b.rays.sort_unstable();
        b.rays.dedup();
        if b.rays.len() != n {
            return Err(ParseError::Invalid {
                location: format!("bases[{i}]"),
                message: "repeated ray id".into(),
            });
        }
    }
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsSetRecord {
    pub bases: Vec<Vec<Projector>>,
    /// Per-basis labels, parallel to `bases`; omitted when no basis has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Option<BasisId>>>,
    /// Optional on input; checked against the bases when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<String>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl From<&KsSet> for KsSetRecord {
    fn from(set: &KsSet) -> Self {
        let set = set.canonicalized();
        let labels = set
            .bases
            .iter()
            .any(|b| b.label.is_some())
            .then(|| set.bases.iter().map(|b| b.label).collect());
        Self {
            bases: set.bases.iter().map(|b| b.projectors.clone()).collect(),
            labels,
            signature: Some(set.signature().to_string()),
            provenance: set.provenance.clone(),
        }
    }
}

impl KsSetRecord {
    pub fn into_ksset(self) -> Result<KsSet, ParseError> {
        if let Some(labels) = &self.labels {
            if labels.len() != self.bases.len() {
                return Err(ParseError::Invalid {
                    location: "labels".into(),
                    message: format!("{} labels for {} bases", labels.len(), self.bases.len()),
                });
            }
        }
        let bases = self
            .bases
            .into_iter()
            .enumerate()
            .map(|(i, ps)| {
                let label = self.labels.as_ref().and_then(|l| l[i]);
                ProjBasis::new(label, ps)
            })
            .collect();
        let set = KsSet::new(bases, self.provenance);
        if let Some(expected) = self.signature {
            let actual = set.signature().to_string();
            if actual != expected {
                return Err(ParseError::Invalid {
                    location: "signature".into(),
                    message: format!("declared `{expected}` but the bases give `{actual}`"),
                });
            }
        }
        Ok(set)
    }
}

pub fn ksset_to_json(set: &KsSet) -> String {
    to_json(&KsSetRecord::from(set))
}

pub fn ksset_from_json(text: &str) -> Result<KsSet, ParseError> {
    from_json::<KsSetRecord>(text)?.into_ksset()
}

/// One parent with its children and count certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationRecord {
    pub parent: KsSetRecord,
    pub analysis: ParentAnalysis,
    pub certificate: CountCertificate,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ChildRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildRecord {
    pub config: MergeConfig,
    pub set: KsSetRecord,
}

impl EnumerationRecord {
    /// `children` and `rejections` control how much detail is kept.
    pub fn new(parent: &ParentSet, e: &ChildEnumeration, children: bool, rejections: bool) -> Self {
        let mut certificate = e.certificate.clone();
        if !rejections {
            certificate.rejected.clear();
        }
        Self {
            parent: KsSetRecord::from(&parent.to_ksset()),
            analysis: e.analysis.clone(),
            certificate,
            children: if children {
                e.children
                    .iter()
                    .map(|(config, set)| ChildRecord {
                        config: config.clone(),
                        set: KsSetRecord::from(set),
                    })
                    .collect()
            } else {
                Vec::new()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub summary: CatalogSummary,
    pub parents: Vec<EnumerationRecord>,
}

fn aligned(rows: &[(String, Vec<String>)]) -> String {
    let head = rows.iter().map(|(h, _)| h.len()).max().unwrap_or(0);
    let cols = rows.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|i| {
            rows.iter()
                .filter_map(|(_, c)| c.get(i))
                .map(String::len)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for (h, cells) in rows {
        let mut line = format!("{h:>head$}");
        for (cell, w) in cells.iter().zip(&widths) {
            line.push_str("  ");
            line.push_str(&format!("{cell:<w$}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// One row per basis, in stored order, headed by its label; rank-2
/// projectors are parenthesized and come first.
pub fn ksset_text(set: &KsSet) -> String {
    let mut rows = vec![("base".to_string(), vec!["projectors".to_string()])];
    for (i, b) in set.bases.iter().enumerate() {
        let label = b.label.map_or(format!("#{}", i + 1), |l| l.to_string());
        rows.push((
            label,
            b.projectors.iter().map(Projector::to_string).collect(),
        ));
    }
    let mut out = aligned(&rows);
    out.push_str(&format!("signature: {}\n", set.signature()));
    out
}

pub fn rays_text(rays: &[Ray]) -> String {
    let mut rows = vec![(
        "id".to_string(),
        vec!["octad".to_string(), "vector".to_string()],
    )];
    for r in rays {
        let mut cells = vec![r.octad.to_string()];
        cells.extend(r.vector.0.iter().map(GaussInt::to_string));
        rows.push((r.id.to_string(), cells));
    }
    aligned(&rows)
}

pub fn bases_text(bases: &[Basis]) -> String {
    let mut rows = vec![(
        "id".to_string(),
        vec!["kind".to_string(), "rays".to_string()],
    )];
    for b in bases {
        let kind = match b.kind {
            BasisKind::Pure => "pure",
            BasisKind::Hybrid => "hybrid",
        };
        let mut cells = vec![kind.to_string()];
        cells.extend(b.rays.iter().map(|r| r.to_string()));
        rows.push((b.id.to_string(), cells));
    }
    aligned(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture_data, FixtureName};
    use crate::rays::RaySystem;
    use proptest::prelude::*;

    #[test]
    fn ray_list_round_trips_byte_identically() {
        let sys = RaySystem::shared();
        let json = rays_to_json(sys.rays());
        let back = rays_from_json(&json).unwrap();
        assert_eq!(back, sys.rays());
        assert_eq!(rays_to_json(&back), json);
    }

    #[test]
    fn basis_json_shape() {
        let sys = RaySystem::shared();
        let json = bases_to_json(sys.bases());
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v[0]["kind"], "pure");
        assert_eq!(v[24]["kind"], "hybrid");
        assert_eq!(v[0]["rays"].as_array().unwrap().len(), 8);
        assert_eq!(bases_from_json(&json).unwrap().len(), 25);
    }

    #[test]
    fn projector_json() {
        let p: Projector = serde_json::from_str(r#"{"rays":[8,2]}"#).unwrap();
        assert_eq!(p, Projector::Rank2(2, 8));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"rays":[2,8]}"#);
        let err = from_json::<Projector>(r#"{"rays":[1,2,3]}"#).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }), "{err}");
        assert!(from_json::<Projector>(r#"{"rays":[4,4]}"#).is_err());
        assert!(from_json::<Projector>(r#"{"rays":[]}"#).is_err());
    }

    #[test]
    fn fixture_round_trip() {
        for name in FixtureName::ALL {
            let set = fixture_data(name);
            let json = ksset_to_json(&set);
            let back = ksset_from_json(&json).unwrap();
            assert!(back.canonically_equal(&set));
            assert_eq!(back.provenance, set.provenance);
            assert_eq!(ksset_to_json(&back), json);
        }
    }

    #[test]
    fn declared_signature_is_checked() {
        let json = ksset_to_json(&fixture_data(FixtureName::Table1)).replace("16_2", "17_2");
        let err = ksset_from_json(&json).unwrap_err();
        assert!(matches!(err, ParseError::Invalid { ref location, .. } if location == "signature"));
    }

    #[test]
    fn table1_text_row_for_base_11() {
        let text = ksset_text(&fixture_data(FixtureName::Table1));
        let row = text
            .lines()
            .map(|l| l.split_whitespace().collect::<Vec<_>>())
            .find(|w| w.first() == Some(&"11"))
            .unwrap();
        assert_eq!(row[1..].join(" "), "(2,8) (25,27) 4 6 26 28");
    }

    fn arb_set() -> impl Strategy<Value = KsSet> {
        let proj = prop_oneof![
            (1u8..=40).prop_map(Projector::Rank1),
            (1u8..=40, 1u8..=40)
                .prop_filter("distinct", |(a, b)| a != b)
                .prop_map(|(a, b)| Projector::pair(a, b)),
        ];
        let basis = (
            proptest::option::of(1u8..=25),
            proptest::collection::vec(proj, 1..8),
        )
            .prop_map(|(l, ps)| ProjBasis::new(l, ps));
        proptest::collection::vec(basis, 0..12)
            .prop_map(|bases| KsSet::new(bases, Provenance::default()))
    }

    proptest! {
        #[test]
        fn ksset_json_round_trip(set in arb_set()) {
            let json = ksset_to_json(&set);
            let back = ksset_from_json(&json).unwrap();
            prop_assert!(back.canonically_equal(&set));
            prop_assert_eq!(ksset_to_json(&back), json);
        }
    }
}
