use std::collections::HashSet;
use std::sync::OnceLock;

use serde::Serialize;

use super::LatticeError;
use super::cone::{CommonFace, Cone, common_face};
use super::int::{Int, Rational};
use super::serial::{FanJson, rationals_to_json};
use super::vector::LatticeVector;

/// A collection of cones in a common lattice, stored over a shared sorted ray list.
///
/// A fan built from generating cones keeps only those; its face list is enumerated on first use.
#[derive(Clone, Debug)]
pub struct Fan {
    ambient_rank: usize,
    rays: Vec<LatticeVector>,
    /// Ray-index lists of the generating cones, deduplicated; `None` for an explicit cone list.
    generating: Option<Vec<Entry>>,
    listing: OnceLock<Listing>,
    closed_under_faces: bool,
    maximal: OnceLock<Vec<Entry>>,
}

/// Sorted ray indices and the simplicial flag.
type Entry = (Vec<usize>, bool);

#[derive(Clone, Debug)]
struct Listing {
    /// Sorted ray-index lists; lexicographic order on these equals order on generator lists.
    cones: Vec<Vec<usize>>,
    simplicial: Vec<bool>,
}

impl Listing {
    fn new(mut entries: Vec<Entry>) -> Self {
        entries.sort_unstable();
        entries.dedup_by(|a, b| a.0 == b.0);
        let (cones, simplicial) = entries.into_iter().unzip();
        Self { cones, simplicial }
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        (self.ambient_rank, &self.rays, self.closed_under_faces) == (other.ambient_rank, &other.rays, other.closed_under_faces)
            && self.listing().cones == other.listing().cones
    }
}

impl Eq for Fan {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceClosureViolation {
    pub cone: String,
    pub missing_face: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapViolation {
    pub first: String,
    pub second: String,
    #[serde(serialize_with = "rationals_to_json")]
    pub witness: Vec<Rational>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Cones whose facets were looked up; for a fan built from generating cones, only those.
    pub cones_checked: usize,
    pub pairs_checked: usize,
    pub face_closure_violations: Vec<FaceClosureViolation>,
    pub overlap_violations: Vec<OverlapViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.face_closure_violations.is_empty() && self.overlap_violations.is_empty()
    }
}

fn collect_rays(ambient_rank: usize, cones: &[Cone]) -> Result<Vec<LatticeVector>, LatticeError> {
    let mut rays: Vec<LatticeVector> = Vec::new();
    for c in cones {
        if c.ambient_rank() != ambient_rank {
            return Err(LatticeError::DimensionMismatch { expected: ambient_rank, found: c.ambient_rank() });
        }
        rays.extend(c.generators().iter().cloned());
    }
    rays.sort();
    rays.dedup();
    Ok(rays)
}

fn ray_indices(rays: &[LatticeVector], c: &Cone) -> Vec<usize> {
    c.generators().iter().map(|g| rays.binary_search(g).expect("collected ray")).collect()
}

impl Fan {
    /// Exactly the given cones; no faces are added.
    pub fn from_cones(ambient_rank: usize, cones: impl IntoIterator<Item = Cone>) -> Result<Self, LatticeError> {
        let cones: Vec<Cone> = cones.into_iter().collect();
        let rays = collect_rays(ambient_rank, &cones)?;
        let entries: Vec<Entry> = cones.iter().map(|c| (ray_indices(&rays, c), c.is_simplicial())).collect();
        Ok(Self {
            ambient_rank,
            rays,
            generating: None,
            listing: OnceLock::from(Listing::new(entries)),
            closed_under_faces: false,
            maximal: OnceLock::new(),
        })
    }

    /// The given cones together with all their faces.
    pub fn generated_by(ambient_rank: usize, maximal: impl IntoIterator<Item = Cone>) -> Result<Self, LatticeError> {
        let maximal: Vec<Cone> = maximal.into_iter().collect();
        let rays = collect_rays(ambient_rank, &maximal)?;
        let mut entries: Vec<Entry> = maximal.iter().map(|c| (ray_indices(&rays, c), c.is_simplicial())).collect();
        entries.sort_unstable();
        entries.dedup_by(|a, b| a.0 == b.0);
        Ok(Self {
            ambient_rank,
            rays,
            generating: Some(entries),
            listing: OnceLock::new(),
            closed_under_faces: false,
            maximal: OnceLock::new(),
        })
    }

    fn listing(&self) -> &Listing {
        self.listing.get_or_init(|| {
            let generating = self.generating.as_ref().expect("explicit fans are listed at construction");
            let mut all: Vec<Entry> = vec![(Vec::new(), true)];
            for (idx, simplicial) in generating {
                if *simplicial {
                    let k = idx.len();
                    for bits in 1u64..(1u64 << k) {
                        let face: Vec<usize> = (0..k).filter(|i| bits >> i & 1 == 1).map(|i| idx[i]).collect();
                        all.push((face, true));
                    }
                } else {
                    for f in self.entry_cone(idx, false).faces() {
                        all.push((ray_indices(&self.rays, &f), f.is_simplicial()));
                    }
                }
            }
            Listing::new(all)
        })
    }

    fn entry_cone(&self, idx: &[usize], simplicial: bool) -> Cone {
        let gens: Vec<LatticeVector> = idx.iter().map(|&r| self.rays[r].clone()).collect();
        if simplicial {
            let dim = gens.len();
            Cone::from_parts(self.ambient_rank, gens, dim)
        } else {
            Cone::new(self.ambient_rank, gens).expect("stored cones are valid")
        }
    }

    pub fn face_fan(c: &Cone) -> Self {
        Self::generated_by(c.ambient_rank(), [c.clone()]).expect("single cone")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.listing().cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.listing().cones.is_empty()
    }

    pub fn closed_under_faces(&self) -> bool {
        self.closed_under_faces
    }

    fn cone_at(&self, i: usize) -> Cone {
        let l = self.listing();
        self.entry_cone(&l.cones[i], l.simplicial[i])
    }

    pub fn cones(&self) -> Vec<Cone> {
        (0..self.len()).map(|i| self.cone_at(i)).collect()
    }

    pub fn cones_of_dim(&self, d: usize) -> Vec<Cone> {
        self.cones().into_iter().filter(|c| c.dim() == d).collect()
    }

    pub fn contains(&self, c: &Cone) -> bool {
        if c.ambient_rank() != self.ambient_rank {
            return false;
        }
        let idx: Option<Vec<usize>> = c.generators().iter().map(|g| self.rays.binary_search(g).ok()).collect();
        let Some(mut idx) = idx else {
            return false;
        };
        idx.sort_unstable();
        match &self.generating {
            // Membership in a generated fan is being a face of some generating cone.
            Some(generating) if self.listing.get().is_none() => generating.iter().any(|(g, simplicial)| {
                let subset = idx.iter().all(|r| g.binary_search(r).is_ok());
                subset && (*simplicial || c.is_face_of(&self.entry_cone(g, false)))
            }),
            _ => self.position_of(&idx).is_some(),
        }
    }

    /// Calls `f` on the ray-index list of each facet of cone `i`.
    fn for_each_facet(&self, i: usize, mut f: impl FnMut(&[usize])) {
        let l = self.listing();
        let rays = &l.cones[i];
        if l.simplicial[i] {
            let mut buf = Vec::with_capacity(rays.len());
            for skip in 0..rays.len() {
                buf.clear();
                buf.extend(rays.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &r)| r));
                f(&buf);
            }
        } else {
            for facet in self.cone_at(i).facets() {
                f(&ray_indices(&self.rays, &facet));
            }
        }
    }

    fn position_of(&self, rays: &[usize]) -> Option<usize> {
        self.listing().cones.binary_search_by(|c| c.as_slice().cmp(rays)).ok()
    }

    /// Cones that are not a facet of another cone in the fan.
    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.maximal_entries().iter().map(|(idx, simplicial)| self.entry_cone(idx, *simplicial)).collect()
    }

    fn maximal_entries(&self) -> &[Entry] {
        self.maximal.get_or_init(|| match &self.generating {
            Some(generating) => {
                let is_proper_face = |(g, _): &Entry, (h, h_simplicial): &Entry| {
                    g.len() < h.len()
                        && g.iter().all(|r| h.binary_search(r).is_ok())
                        && (*h_simplicial || self.entry_cone(g, false).is_face_of(&self.entry_cone(h, false)))
                };
                generating.iter().filter(|e| !generating.iter().any(|h| is_proper_face(e, h))).cloned().collect()
            }
            None => self.explicit_maximal(),
        })
    }

    fn explicit_maximal(&self) -> Vec<Entry> {
        let l = self.listing();
        let n = l.cones.len();
        let mut covered = vec![false; n];
        let mut closed = true;
        for i in 0..n {
            self.for_each_facet(i, |f| match self.position_of(f) {
                Some(j) => covered[j] = true,
                None => closed = false,
            });
        }
        let uncovered = (0..n).filter(|&i| !covered[i]);
        let chosen: Vec<usize> = if closed {
            uncovered.collect()
        } else {
            // Without face closure a cone may sit inside another without being its facet.
            let sets: Vec<HashSet<usize>> = l.cones.iter().map(|c| c.iter().copied().collect()).collect();
            uncovered
                .filter(|&i| !(0..n).any(|j| j != i && sets[j].len() > sets[i].len() && sets[i].is_subset(&sets[j])))
                .collect()
        };
        chosen.into_iter().map(|i| (l.cones[i].clone(), l.simplicial[i])).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        match &self.generating {
            // Closed under faces by construction.
            Some(generating) => report.cones_checked = generating.len(),
            None => {
                report.cones_checked = self.len();
                for i in 0..self.len() {
                    self.for_each_facet(i, |f| {
                        if self.position_of(f).is_none() {
                            let face = Cone::new(self.ambient_rank, f.iter().map(|&r| self.rays[r].clone()))
                                .expect("valid face");
                            report.face_closure_violations.push(FaceClosureViolation {
                                cone: self.cone_at(i).to_string(),
                                missing_face: face.to_string(),
                            });
                        }
                    });
                }
            }
        }
        let maximal = self.maximal_cones();
        for a in 0..maximal.len() {
            for b in a + 1..maximal.len() {
                report.pairs_checked += 1;
                if let CommonFace::NotCommonFace { witness } =
                    common_face(&maximal[a], &maximal[b]).expect("shared ambient rank")
                {
                    report.overlap_violations.push(OverlapViolation {
                        first: maximal[a].to_string(),
                        second: maximal[b].to_string(),
                        witness,
                    });
                }
            }
        }
        report
    }

    /// Validates and records face closure in the returned fan.
    pub fn validated(mut self) -> (Self, ValidationReport) {
        let report = self.validate();
        self.closed_under_faces = report.face_closure_violations.is_empty();
        (self, report)
    }

    pub fn support_contains(&self, p: &[Rational]) -> bool {
        self.maximal_cones().iter().any(|c| c.position(p).is_inside())
    }

    pub fn to_json(&self) -> FanJson {
        FanJson::from_fan(self)
    }

    pub fn from_json_str(s: &str) -> Result<Self, LatticeError> {
        let parsed: FanJson = serde_json::from_str(s).map_err(|e| LatticeError::InvalidJson(e.to_string()))?;
        parsed.to_fan()
    }
}

pub fn validate_fan(f: &Fan) -> ValidationReport {
    f.validate()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubdivisionReport {
    pub pieces_inside: bool,
    pub pairs_checked: usize,
    pub overlap_violations: Vec<OverlapViolation>,
    pub samples_checked: usize,
    #[serde(serialize_with = "super::serial::rational_lists_to_json")]
    pub uncovered_samples: Vec<Vec<Rational>>,
}

impl SubdivisionReport {
    pub fn is_valid(&self) -> bool {
        self.pieces_inside && self.overlap_violations.is_empty() && self.uncovered_samples.is_empty()
    }
}

/// Deterministic points of `support`: generators, pairwise sums, the full sum, then `extra`
/// weighted combinations whose weights cycle through small integers (some zero, to hit faces).
pub fn sample_points(support: &Cone, extra: usize) -> Vec<Vec<Int>> {
    let gens = support.generators();
    let k = gens.len();
    let r = support.ambient_rank();
    let combine = |weights: &[u64]| -> Vec<Int> {
        let mut acc = vec![Int::ZERO; r];
        for (g, &w) in gens.iter().zip(weights) {
            if w > 0 {
                let w = Int::from(w);
                for (a, x) in acc.iter_mut().zip(g.coords()) {
                    *a += &w * x;
                }
            }
        }
        acc
    };
    let mut out = Vec::new();
    for i in 0..k {
        out.push(gens[i].coords().to_vec());
        for j in i + 1..k {
            let mut w = vec![0; k];
            w[i] = 1;
            w[j] = 1;
            out.push(combine(&w));
        }
    }
    out.push(combine(&vec![1; k]));
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    for _ in 0..extra {
        let weights: Vec<u64> = (0..k)
            .map(|_| {
                state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
                (state >> 59) % 7
            })
            .collect();
        out.push(combine(&weights));
    }
    out
}

/// Checks that `pieces` subdivide `support`: each piece lies in it, distinct pieces meet in common
/// faces, and every sample point of `support` lies in some piece.
pub fn verify_subdivision(support: &Cone, pieces: &[Cone], extra_samples: usize) -> SubdivisionReport {
    let mut report = SubdivisionReport {
        pieces_inside: pieces.iter().all(|p| p.generators().iter().all(|g| support.contains(g))),
        ..Default::default()
    };
    for a in 0..pieces.len() {
        for b in a + 1..pieces.len() {
            report.pairs_checked += 1;
            if let CommonFace::NotCommonFace { witness } = common_face(&pieces[a], &pieces[b]).expect("shared ambient rank") {
                report.overlap_violations.push(OverlapViolation {
                    first: pieces[a].to_string(),
                    second: pieces[b].to_string(),
                    witness,
                });
            }
        }
    }
    for p in sample_points(support, extra_samples) {
        report.samples_checked += 1;
        if !pieces.iter().any(|c| c.position_of_vector(&p).is_inside()) {
            report.uncovered_samples.push(p.into_iter().map(Rational::from).collect());
        }
    }
    report
}
