//! The 40-ray / 25-basis system of three-qubit Pauli eigenvectors.
//!
//! The rays are the joint eigenvectors of the five lines of the Mermin
//! pentagram. Each line gives an orthogonal octad (a pure basis). Any two
//! lines share exactly one operator `O`; the four rays of one octad with
//! `O = s` together with the four rays of the other octad with `O = -s` are
//! again mutually orthogonal, giving the 20 hybrid bases.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    commutes, inner, projector_sum_check, GaussInt, Mat8, Pauli, PauliWord, Vec8,
};
use crate::rayset::{RayId, RaySet};

pub const RAY_COUNT: usize = 40;
pub const BASIS_COUNT: usize = 25;
pub const PURE_COUNT: usize = 5;
pub const OCTAD_SIZE: usize = 8;

pub type BasisId = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RaySystemError {
    #[error("joint eigenspace of line {line} for signs {signs:?} has dimension {dim}, expected 1")]
    DegenerateEigenspace {
        line: usize,
        signs: [i8; 3],
        dim: i64,
    },
    #[error("basis {basis} is not mutually orthogonal (rays {a} and {b})")]
    NotOrthogonal { basis: BasisId, a: RayId, b: RayId },
    #[error("pentagram line {line} does not consist of commuting operators")]
    NonCommutingLine { line: usize },
}

/// Four mutually commuting three-qubit Pauli operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PentagramLine {
    pub members: [PauliWord; 4],
}

impl PentagramLine {
    /// The product of the four members, which is `±I`.
    pub fn product(&self) -> Mat8 {
        self.members
            .iter()
            .fold(Mat8::identity(), |acc, w| acc * w.matrix())
    }

    /// `+1` or `-1` according to the sign of the product, `None` if the
    /// product is not `±I`.
    pub fn product_sign(&self) -> Option<i64> {
        let p = self.product();
        if p == Mat8::identity() {
            Some(1)
        } else if p == Mat8::scalar(-GaussInt::ONE) {
            Some(-1)
        } else {
            None
        }
    }

    pub fn mutually_commuting(&self) -> bool {
        let ms = self.members.map(|w| w.matrix());
        (0..4).all(|i| (i + 1..4).all(|j| commutes(&ms[i], &ms[j])))
    }

    pub fn shared_member(&self, other: &PentagramLine) -> Option<PauliWord> {
        self.members
            .iter()
            .copied()
            .find(|w| other.members.contains(w))
    }
}

/// The five lines of the Mermin pentagram in fixed order. Line `k` (1-based)
/// defines octad `k`; the last line holds the four three-body operators.
pub fn pentagram_lines() -> [PentagramLine; 5] {
    use Pauli::{I, X, Y};
    let w = PauliWord::new;
    let (x1, x2, x3) = (w([X, I, I]), w([I, X, I]), w([I, I, X]));
    let (y1, y2, y3) = (w([Y, I, I]), w([I, Y, I]), w([I, I, Y]));
    let (xxx, xyy, yxy, yyx) = (w([X, X, X]), w([X, Y, Y]), w([Y, X, Y]), w([Y, Y, X]));
    [
        PentagramLine {
            members: [x1, x2, x3, xxx],
        },
        PentagramLine {
            members: [x1, y2, y3, xyy],
        },
        PentagramLine {
            members: [y1, x2, y3, yxy],
        },
        PentagramLine {
            members: [y1, y2, x3, yyx],
        },
        PentagramLine {
            members: [xxx, xyy, yxy, yyx],
        },
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub id: RayId,
    pub octad: u8,
    pub vector: Vec8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Pure,
    Hybrid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    pub id: BasisId,
    pub kind: BasisKind,
    pub rays: RaySet,
}

impl Basis {
    pub fn ray_ids(&self) -> Vec<RayId> {
        self.rays.iter().collect()
    }
}

/// Orthogonality graph on ray ids: `adj[i]` has bit `j` set iff the rays are
/// orthogonal. Index 0 is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthGraph {
    adj: Vec<RaySet>,
    vertices: RaySet,
}

impl OrthGraph {
    pub fn from_rays(rays: &[Ray]) -> Self {
        let max = rays.iter().map(|r| r.id as usize).max().unwrap_or(0);
        let mut adj = vec![RaySet::EMPTY; max + 1];
        for a in rays {
            for b in rays {
                if a.id != b.id && inner(&a.vector, &b.vector).is_zero() {
                    adj[a.id as usize].insert(b.id);
                }
            }
        }
        let vertices = rays.iter().map(|r| r.id).collect();
        Self { adj, vertices }
    }

    pub fn vertices(&self) -> RaySet {
        self.vertices
    }

    pub fn neighbors(&self, id: RayId) -> RaySet {
        self.adj
            .get(id as usize)
            .copied()
            .unwrap_or_default()
            .intersection(self.vertices)
    }

    pub fn is_edge(&self, a: RayId, b: RayId) -> bool {
        self.neighbors(a).contains(b)
    }

    /// The same graph with one vertex deleted.
    pub fn without(&self, id: RayId) -> Self {
        let mut g = self.clone();
        g.vertices.remove(id);
        g
    }
}

/// All cliques of exactly `size` vertices, each as a sorted id set, in
/// ascending order of their sorted id lists. Used as an independent oracle
/// for the constructive basis enumeration.
pub fn cliques_of_size(graph: &OrthGraph, size: usize) -> Vec<RaySet> {
    fn extend(
        g: &OrthGraph,
        clique: RaySet,
        candidates: RaySet,
        size: usize,
        out: &mut Vec<RaySet>,
    ) {
        if clique.len() == size {
            out.push(clique);
            return;
        }
        if clique.len() + candidates.len() < size {
            return;
        }
        let mut remaining = candidates;
        for v in candidates.iter() {
            remaining.remove(v);
            let mut next = clique;
            next.insert(v);
            extend(g, next, remaining.intersection(g.neighbors(v)), size, out);
        }
    }
    let mut out = Vec::new();
    extend(graph, RaySet::EMPTY, graph.vertices(), size, &mut out);
    out.sort_by_key(|s| s.iter().collect::<Vec<_>>());
    out
}

/// The 8-cliques of the orthogonality graph, i.e. all orthogonal bases that
/// can be formed from its rays.
pub fn enumerate_bases_clique_oracle(graph: &OrthGraph) -> Vec<RaySet> {
    cliques_of_size(graph, OCTAD_SIZE)
}

/// The regenerated ray system.
#[derive(Clone, Debug)]
pub struct RaySystem {
    lines: [PentagramLine; 5],
    rays: Vec<Ray>,
    bases: Vec<Basis>,
    graph: OrthGraph,
}

impl RaySystem {
    /// Regenerates rays and bases from the pentagram.
    pub fn generate() -> Result<Self, RaySystemError> {
        let lines = pentagram_lines();
        let rays = generate_rays(&lines)?;
        let bases = enumerate_bases_constructive(&lines, &rays)?;
        let graph = OrthGraph::from_rays(&rays);
        Ok(Self {
            lines,
            rays,
            bases,
            graph,
        })
    }

    /// Process-wide instance; generation is deterministic.
    pub fn shared() -> &'static RaySystem {
        static SYSTEM: OnceLock<RaySystem> = OnceLock::new();
        SYSTEM.get_or_init(|| RaySystem::generate().expect("ray system generation"))
    }

    pub fn lines(&self) -> &[PentagramLine; 5] {
        &self.lines
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray(&self, id: RayId) -> Option<&Ray> {
        self.rays.get((id as usize).checked_sub(1)?)
    }

    pub fn vector(&self, id: RayId) -> Option<&Vec8> {
        self.ray(id).map(|r| &r.vector)
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn basis(&self, id: BasisId) -> Option<&Basis> {
        self.bases.get((id as usize).checked_sub(1)?)
    }

    pub fn graph(&self) -> &OrthGraph {
        &self.graph
    }

    pub fn octad_rays(&self, octad: u8) -> RaySet {
        self.rays
            .iter()
            .filter(|r| r.octad == octad)
            .map(|r| r.id)
            .collect()
    }

    /// Ids of the bases containing `ray`.
    pub fn bases_containing(&self, ray: RayId) -> Vec<BasisId> {
        self.bases
            .iter()
            .filter(|b| b.rays.contains(ray))
            .map(|b| b.id)
            .collect()
    }

    /// Checks every basis with [`projector_sum_check`].
    pub fn all_bases_resolve_identity(&self) -> bool {
        self.bases.iter().all(|b| {
            let vs: Vec<&Vec8> = b.rays.iter().filter_map(|id| self.vector(id)).collect();
            vs.len() == OCTAD_SIZE && projector_sum_check(vs).unwrap_or(false)
        })
    }
}

/// Joint eigenvectors of each line, numbered `8(k-1)+1..=8k` for line `k`.
pub fn generate_rays(lines: &[PentagramLine; 5]) -> Result<Vec<Ray>, RaySystemError> {
    let mut rays = Vec::with_capacity(RAY_COUNT);
    for (k, line) in lines.iter().enumerate() {
        if !line.mutually_commuting() {
            return Err(RaySystemError::NonCommutingLine { line: k + 1 });
        }
        let mut octad = joint_eigenvectors(k + 1, line)?;
        octad.sort_by_key(component_key);
        for vector in octad {
            rays.push(Ray {
                id: (rays.len() + 1) as RayId,
                octad: (k + 1) as u8,
                vector,
            });
        }
    }
    Ok(rays)
}

fn component_key(v: &Vec8) -> [(i64, i64); 8] {
    v.components().map(|z| (z.re, z.im))
}

/// The eight one-dimensional joint eigenspaces of a line. The first three
/// members generate the line, so each sign pattern on them fixes a joint
/// eigenspace with projector `Π (I + s·M)/2`. Eight times that projector is
/// integral; a nonzero column spans the eigenspace.
fn joint_eigenvectors(line_no: usize, line: &PentagramLine) -> Result<Vec<Vec8>, RaySystemError> {
    let gens = [0, 1, 2].map(|i| line.members[i].matrix());
    let id = Mat8::identity();
    let mut out = Vec::with_capacity(OCTAD_SIZE);
    for pattern in 0..8u8 {
        let signs: [i8; 3] =
            std::array::from_fn(|i| if pattern >> (2 - i) & 1 == 0 { 1 } else { -1 });
        let scaled_projector = gens.iter().zip(signs).fold(id, |acc, (m, s)| {
            acc * (id + m.scale(GaussInt::real(s as i64)))
        });
        let trace = scaled_projector.trace();
        if trace.im != 0 || trace.re != 8 {
            return Err(RaySystemError::DegenerateEigenspace {
                line: line_no,
                signs,
                dim: trace.re / 8,
            });
        }
        let column = (0..8)
            .map(|c| scaled_projector.column(c))
            .find(|c| !c.is_zero())
            .expect("rank-1 projector has a nonzero column");
        out.push(column.normalized());
    }
    Ok(out)
}

/// Eigenvalue of `op` on `v`, if `v` is an eigenvector with eigenvalue ±1.
fn eigenvalue(op: &Mat8, v: &Vec8) -> Option<i64> {
    let image = op.apply(v);
    if image == *v {
        Some(1)
    } else if image == v.scale(-GaussInt::ONE) {
        Some(-1)
    } else {
        None
    }
}

/// The 5 pure bases (ids 1..=5, one per octad) followed by the 20 hybrid
/// bases (ids 6..=25): for each line pair `(a, b)`, `a < b`, in lexicographic
/// order and each sign `s` (`+` first), the octad-`a` rays with shared
/// eigenvalue `s` joined with the octad-`b` rays with eigenvalue `-s`.
pub fn enumerate_bases_constructive(
    lines: &[PentagramLine; 5],
    rays: &[Ray],
) -> Result<Vec<Basis>, RaySystemError> {
    let mut bases = Vec::with_capacity(BASIS_COUNT);
    for octad in 1..=lines.len() as u8 {
        bases.push(Basis {
            id: octad,
            kind: BasisKind::Pure,
            rays: rays
                .iter()
                .filter(|r| r.octad == octad)
                .map(|r| r.id)
                .collect(),
        });
    }
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            let shared = lines[a]
                .shared_member(&lines[b])
                .expect("pentagram lines pairwise intersect");
            let op = shared.matrix();
            for sign in [1, -1] {
                let half = |octad: usize, s: i64| -> RaySet {
                    rays.iter()
                        .filter(|r| r.octad as usize == octad + 1)
                        .filter(|r| eigenvalue(&op, &r.vector) == Some(s))
                        .map(|r| r.id)
                        .collect()
                };
                bases.push(Basis {
                    id: (bases.len() + 1) as BasisId,
                    kind: BasisKind::Hybrid,
                    rays: half(a, sign).union(half(b, -sign)),
                });
            }
        }
    }
    for basis in &bases {
        check_orthogonal(basis, rays)?;
    }
    Ok(bases)
}

fn check_orthogonal(basis: &Basis, rays: &[Ray]) -> Result<(), RaySystemError> {
    let ids = basis.ray_ids();
    let not_orthogonal = |a: RayId, b: RayId| RaySystemError::NotOrthogonal {
        basis: basis.id,
        a,
        b,
    };
    if ids.len() != OCTAD_SIZE {
        let first = ids.first().copied().unwrap_or(0);
        return Err(not_orthogonal(first, first));
    }
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            let va = &rays[a as usize - 1].vector;
            let vb = &rays[b as usize - 1].vector;
            if !inner(va, vb).is_zero() {
                return Err(not_orthogonal(a, b));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system() -> &'static RaySystem {
        RaySystem::shared()
    }

    #[test]
    fn five_lines_four_positive_one_negative() {
        let lines = pentagram_lines();
        assert_eq!(lines.len(), 5);
        let signs: Vec<i64> = lines.iter().map(|l| l.product_sign().unwrap()).collect();
        assert_eq!(signs.iter().filter(|&&s| s == 1).count(), 4);
        assert_eq!(signs.iter().filter(|&&s| s == -1).count(), 1);
        assert!(lines.iter().all(PentagramLine::mutually_commuting));
    }

    #[test]
    fn lines_pairwise_share_exactly_one_member() {
        let lines = pentagram_lines();
        for i in 0..5 {
            for j in i + 1..5 {
                let shared = lines[i]
                    .members
                    .iter()
                    .filter(|w| lines[j].members.contains(w))
                    .count();
                assert_eq!(shared, 1, "lines {i} and {j}");
            }
        }
    }

    #[test]
    fn forty_rays_in_five_octads() {
        let s = system();
        assert_eq!(s.rays().len(), RAY_COUNT);
        for (i, r) in s.rays().iter().enumerate() {
            assert_eq!(r.id as usize, i + 1);
            assert_eq!(r.octad as usize, i / 8 + 1);
            assert!(
                r.vector.components().iter().all(|z| z.norm_sqr() <= 1),
                "entries in {{0, ±1, ±i}}"
            );
            let n = r.vector.norm_sqr();
            assert!(n == 2 || n == 8);
        }
    }

    #[test]
    fn octad_shapes() {
        let s = system();
        for r in &s.rays()[..8] {
            assert_eq!(r.vector.nonzero_count(), 8);
            assert!(r
                .vector
                .components()
                .iter()
                .all(|z| z.im == 0 && z.re.abs() == 1));
        }
        for r in &s.rays()[32..] {
            assert_eq!(r.vector.nonzero_count(), 2);
        }
    }

    #[test]
    fn no_two_rays_proportional() {
        let rays = system().rays();
        for (i, a) in rays.iter().enumerate() {
            for b in &rays[i + 1..] {
                assert!(!a.vector.is_proportional(&b.vector), "{} ~ {}", a.id, b.id);
            }
        }
    }

    #[test]
    fn octad_members_are_orthogonal() {
        let s = system();
        for octad in 1..=5 {
            let ids: Vec<_> = s.octad_rays(octad).iter().collect();
            for &a in &ids {
                for &b in &ids {
                    if a != b {
                        assert!(inner(s.vector(a).unwrap(), s.vector(b).unwrap()).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn twenty_five_bases() {
        let s = system();
        assert_eq!(s.bases().len(), BASIS_COUNT);
        let pure: Vec<_> = s
            .bases()
            .iter()
            .filter(|b| b.kind == BasisKind::Pure)
            .collect();
        assert_eq!(pure.len(), PURE_COUNT);
        assert!(pure.iter().all(|b| b.id <= 5));
        for b in s.bases().iter().filter(|b| b.kind == BasisKind::Hybrid) {
            let octads: Vec<usize> = (1..=5)
                .map(|o| b.rays.intersection(s.octad_rays(o)).len())
                .filter(|&n| n > 0)
                .collect();
            assert_eq!(octads, vec![4, 4], "basis {}", b.id);
        }
    }

    #[test]
    fn each_ray_in_five_bases() {
        let s = system();
        for r in s.rays() {
            assert_eq!(s.bases_containing(r.id).len(), 5);
        }
    }

    #[test]
    fn basis_overlap_histogram() {
        // pure-pure 0, pure-hybrid 0 or 4, hybrid-hybrid 0, 2 or 4
        let s = system();
        let mut sizes = std::collections::BTreeMap::new();
        for (i, a) in s.bases().iter().enumerate() {
            for b in &s.bases()[i + 1..] {
                *sizes.entry(a.rays.intersection(b.rays).len()).or_insert(0) += 1;
            }
        }
        assert_eq!(
            sizes,
            std::collections::BTreeMap::from([(0, 140), (2, 120), (4, 40)])
        );
    }

    #[test]
    fn clique_oracle_agrees_with_construction() {
        let s = system();
        let cliques = enumerate_bases_clique_oracle(s.graph());
        assert_eq!(cliques.len(), BASIS_COUNT);
        let mut constructive: Vec<RaySet> = s.bases().iter().map(|b| b.rays).collect();
        constructive.sort_by_key(|r| r.iter().collect::<Vec<_>>());
        assert_eq!(cliques, constructive);
    }

    #[test]
    fn deleting_a_ray_loses_bases() {
        let s = system();
        let g = s.graph().without(1);
        assert_eq!(enumerate_bases_clique_oracle(&g).len(), BASIS_COUNT - 5);
    }

    #[test]
    fn graph_is_symmetric_and_irreflexive() {
        let g = system().graph();
        for a in 1..=40 {
            assert!(!g.is_edge(a, a));
            for b in 1..=40 {
                assert_eq!(g.is_edge(a, b), g.is_edge(b, a));
            }
        }
    }

    #[test]
    fn every_basis_resolves_identity() {
        assert!(system().all_bases_resolve_identity());
    }

    #[test]
    fn generation_is_deterministic() {
        let a = RaySystem::generate().unwrap();
        let b = RaySystem::generate().unwrap();
        assert_eq!(a.rays(), b.rays());
        assert_eq!(a.bases(), b.bases());
    }
}
