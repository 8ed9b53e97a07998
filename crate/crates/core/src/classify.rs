//! Automorphisms acting trivially on cohomology, and the exhaustive sweep.
//!
//! A central `σ` acts trivially iff `σ ∈ Ker(χ)` for every `χ` with
//! `H¹(C)^χ ≠ 0` and `H¹(D)^χ̄ ≠ 0`. Everything this needs is a function of
//! the branching types of the two covers, so the sweep enumerates pairs of
//! realizable types (one witness vector each) rather than raw vector pairs.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::character_table;
use crate::covering::{branching_types, TypeSearch};
use crate::error::{Error, Result};
use crate::group::{build_group, BuildOptions, ElementSet, GroupSpec};
use crate::surface::{Factor, SurfaceRecord, UnmixedSurface};

const ALLOWED_BASE_GENERA: [(usize, usize); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_group_order: usize,
    pub max_r: usize,
    pub max_s: usize,
    pub max_branch_order: usize,
    pub genus_cap: u64,
    pub base_genera: Vec<(usize, usize)>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_group_order: 16,
            max_r: 4,
            max_s: 4,
            max_branch_order: 8,
            genus_cap: 33,
            base_genera: vec![(1, 1)],
        }
    }
}

impl SearchBounds {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("max group order", self.max_group_order as u64),
            ("max r", self.max_r as u64),
            ("max s", self.max_s as u64),
            ("max branch order", self.max_branch_order as u64),
            ("genus cap", self.genus_cap),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Domain(format!("{name} must be positive")));
        }
        if self.base_genera.is_empty() {
            return Err(Error::Domain("no base genera given".into()));
        }
        if let Some(p) = self
            .base_genera
            .iter()
            .find(|p| !ALLOWED_BASE_GENERA.contains(p))
        {
            return Err(Error::Domain(format!(
                "base genera {p:?} are not supported"
            )));
        }
        Ok(())
    }
}

/// Whether the central element `σ` acts trivially on `H²(S, ℚ)`: it must lie
/// in the kernel of every character that contributes to `H²`.
pub fn acts_trivially(s: &UnmixedSurface, sigma: usize) -> Result<bool> {
    let g = s.group();
    if !g.center().contains(sigma) {
        return Err(Error::Domain(format!("{} is not central", g.label(sigma))));
    }
    Ok(relevant_characters(s).all(|i| s.table().kernel(i).contains(sigma)))
}

/// Characters `χ` with `H¹(C)^χ ≠ 0` and `H¹(D)^χ̄ ≠ 0`.
fn relevant_characters(s: &UnmixedSurface) -> impl Iterator<Item = usize> + '_ {
    let t = s.table();
    let (c, d) = (&s.factor_c().dimensions, &s.factor_d().dimensions);
    (0..t.len()).filter(move |&i| c[i] > 0 && d[t.conjugate(i)] > 0)
}

/// The central elements acting trivially on cohomology.
pub fn compute_aut0(s: &UnmixedSurface) -> ElementSet {
    let mut out = s.group().center();
    for i in relevant_characters(s) {
        out.intersect_with(s.table().kernel(i));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conformance {
    pub conforms: bool,
    pub reason: String,
}

impl Conformance {
    fn fail(reason: impl Into<String>) -> Self {
        Conformance {
            conforms: false,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationRecord {
    pub surface: UnmixedSurface,
    pub aut0: ElementSet,
    /// Present iff `aut0` is nontrivial.
    pub conformance: Option<Conformance>,
}

impl ClassificationRecord {
    pub fn new(surface: UnmixedSurface) -> Self {
        let aut0 = compute_aut0(&surface);
        let mut rec = ClassificationRecord {
            surface,
            aut0,
            conformance: None,
        };
        rec.conformance = check_conformance(&rec).ok();
        rec
    }

    pub fn json(&self) -> RecordJson {
        let g = self.surface.group();
        RecordJson {
            surface: self.surface.record(),
            aut0: self.aut0.to_vec(),
            aut0_labels: self.aut0.iter().map(|x| g.label(x).to_string()).collect(),
            conforms: self.conformance.as_ref().map(|c| c.conforms),
            reason: self.conformance.as_ref().map(|c| c.reason.clone()),
        }
    }
}

/// JSON-lines form of a record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    #[serde(flatten)]
    pub surface: SurfaceRecord,
    pub aut0: Vec<usize>,
    pub aut0_labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conforms: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Checks the shape forced on surfaces with nontrivial `aut0`: `G` abelian of
/// type `(2m, 2mn)` or `(2, 2m, 2mn)`, both bases elliptic, all branch
/// elements of each cover equal to one involution (`σ₁` resp. `τ₁`, distinct),
/// an even number of branch points on each side, and `aut0 = {1, σ₁τ₁}`.
pub fn check_conformance(rec: &ClassificationRecord) -> Result<Conformance> {
    if rec.aut0.len() <= 1 {
        return Err(Error::Domain(
            "aut0 is trivial; conformance does not apply".into(),
        ));
    }
    let s = &rec.surface;
    let g = s.group();
    if !g.is_abelian() {
        return Ok(Conformance::fail("group is not abelian"));
    }
    let f = g.abelian_invariants()?.factors;
    let shape_ok = match f.as_slice() {
        [a, _] => a % 2 == 0,
        [2, a, _] => a % 2 == 0,
        _ => false,
    };
    if !shape_ok {
        return Ok(Conformance::fail(format!(
            "invariant factors {f:?} are not (2m, 2mn) or (2, 2m, 2mn)"
        )));
    }
    let (c, d) = (&s.cover_c().vector, &s.cover_d().vector);
    if c.base_genus() != 1 || d.base_genus() != 1 {
        return Ok(Conformance::fail(format!(
            "base genera are ({}, {})",
            c.base_genus(),
            d.base_genus()
        )));
    }
    let single = |gammas: &[usize], name: &str| -> std::result::Result<usize, Conformance> {
        let first = *gammas
            .first()
            .ok_or_else(|| Conformance::fail(format!("{name} has no branch points")))?;
        if gammas.iter().any(|&x| x != first) {
            return Err(Conformance::fail(format!(
                "branch elements of {name} differ"
            )));
        }
        if g.element_order(first) != 2 {
            return Err(Conformance::fail(format!(
                "branch elements of {name} are not involutions"
            )));
        }
        if !gammas.len().is_multiple_of(2) {
            return Err(Conformance::fail(format!(
                "{name} has an odd number of branch points"
            )));
        }
        Ok(first)
    };
    let sigma = match single(c.gammas(), "C") {
        Ok(x) => x,
        Err(e) => return Ok(e),
    };
    let tau = match single(d.gammas(), "D") {
        Ok(x) => x,
        Err(e) => return Ok(e),
    };
    if sigma == tau {
        return Ok(Conformance::fail("sigma_1 = tau_1"));
    }
    let expected = ElementSet::from_elements(g.order(), [g.identity(), g.mul(sigma, tau)]);
    if rec.aut0 != expected {
        return Ok(Conformance::fail(format!(
            "aut0 = {:?} is not {{1, sigma_1 tau_1}}",
            rec.aut0
        )));
    }
    Ok(Conformance {
        conforms: true,
        reason: format!("sigma_1 = {}, tau_1 = {}", g.label(sigma), g.label(tau)),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub surfaces: u64,
    pub nontrivial_aut0: u64,
    pub conformance_failures: u64,
    pub errors: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordError {
    pub group: String,
    pub message: String,
    pub internal: bool,
}

/// Which records [`classify_all`] returns; all are passed to the inspector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    All,
    NontrivialAut0,
    Nothing,
}

#[derive(Debug)]
pub struct Report {
    pub summary: Summary,
    pub records: Vec<ClassificationRecord>,
    pub errors: Vec<RecordError>,
}

type FactorList = Result<Vec<Arc<Factor>>>;

enum Outcome {
    Record(Box<ClassificationRecord>),
    Error(RecordError),
}

/// Sweeps every pair of realizable branching types within `bounds` for each
/// group, building every surface with a free action. Per-surface errors are
/// recorded and counted; they never abort the sweep. Output order is
/// deterministic: by group (input order), then by the two vectors.
pub fn classify_all(
    bounds: &SearchBounds,
    groups: &[GroupSpec],
    build: &BuildOptions,
    keep: Keep,
    inspect: &(dyn Fn(&ClassificationRecord) + Sync),
) -> Result<Report> {
    bounds.validate()?;
    let mut summary = Summary::default();
    let mut records = Vec::new();
    let mut errors = Vec::new();
    let base_genera: BTreeSet<(usize, usize)> = bounds.base_genera.iter().copied().collect();

    for spec in groups {
        let group = match build_group(spec, build) {
            Ok(g) if g.order() <= bounds.max_group_order => Arc::new(g),
            Ok(_) => continue,
            Err(e) => {
                summary.errors += 1;
                errors.push(RecordError {
                    group: spec.to_string(),
                    message: e.to_string(),
                    internal: e.is_internal(),
                });
                continue;
            }
        };
        let table = character_table(&group)?;

        // Factors per (side, base genus).
        let needed: BTreeSet<(bool, usize)> = base_genera
            .iter()
            .flat_map(|&(b, b2)| [(true, b), (false, b2)])
            .collect();
        let factors: Vec<((bool, usize), FactorList)> = needed
            .into_par_iter()
            .map(|(is_c, b)| {
                let search = TypeSearch {
                    base_genus: b,
                    max_r: if is_c { bounds.max_r } else { bounds.max_s },
                    max_branch_order: bounds.max_branch_order,
                    genus_cap: bounds.genus_cap,
                    min_genus: 2,
                };
                let built = branching_types(&group, &search).and_then(|types| {
                    types
                        .into_iter()
                        .map(|t| Factor::new(t.cover, &table).map(Arc::new))
                        .collect()
                });
                ((is_c, b), built)
            })
            .collect();
        let lookup = |side: bool, b: usize| -> Result<&Vec<Arc<Factor>>> {
            match &factors
                .iter()
                .find(|(k, _)| *k == (side, b))
                .expect("computed above")
                .1
            {
                Ok(v) => Ok(v),
                Err(e) => Err(e.clone()),
            }
        };

        let mut units = Vec::new();
        for &(b, b2) in &base_genera {
            let (cs, ds) = match (lookup(true, b), lookup(false, b2)) {
                (Ok(cs), Ok(ds)) => (cs, ds),
                (Err(e), _) | (_, Err(e)) => {
                    summary.errors += 1;
                    errors.push(RecordError {
                        group: spec.to_string(),
                        message: e.to_string(),
                        internal: e.is_internal(),
                    });
                    continue;
                }
            };
            for c in cs {
                units.push((c.clone(), ds));
            }
        }

        let mut outcomes: Vec<Outcome> = units
            .par_iter()
            .flat_map_iter(|(c, ds)| {
                let table = &table;
                ds.iter().filter_map(move |d| {
                    if c.stabilizers.intersection(&d.stabilizers).len() != 1 {
                        return None;
                    }
                    match UnmixedSurface::from_factors(table.clone(), c.clone(), d.clone()) {
                        Ok(s) => {
                            let rec = ClassificationRecord::new(s);
                            inspect(&rec);
                            Some(Outcome::Record(Box::new(rec)))
                        }
                        Err(Error::NotFree { .. }) => None,
                        Err(e) => Some(Outcome::Error(RecordError {
                            group: spec.to_string(),
                            message: e.to_string(),
                            internal: e.is_internal(),
                        })),
                    }
                })
            })
            .collect();
        outcomes.sort_by_cached_key(|o| match o {
            Outcome::Record(r) => (
                0,
                Some((
                    r.surface.cover_c().vector.record(),
                    r.surface.cover_d().vector.record(),
                )),
                String::new(),
            ),
            Outcome::Error(e) => (1, None, e.message.clone()),
        });
        for o in outcomes {
            match o {
                Outcome::Record(rec) => {
                    summary.surfaces += 1;
                    let nontrivial = rec.aut0.len() > 1;
                    if nontrivial {
                        summary.nontrivial_aut0 += 1;
                        if !rec.conformance.as_ref().is_some_and(|c| c.conforms) {
                            summary.conformance_failures += 1;
                        }
                    }
                    let wanted = match keep {
                        Keep::All => true,
                        Keep::NontrivialAut0 => nontrivial,
                        Keep::Nothing => false,
                    };
                    if wanted {
                        records.push(*rec);
                    }
                }
                Outcome::Error(e) => {
                    summary.errors += 1;
                    errors.push(e);
                }
            }
        }
    }
    Ok(Report {
        summary,
        records,
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::GeneratingVector;
    use crate::group::GroupTable;
    use crate::surface::{build_surface, example_surface, Family};

    const ALPHA: usize = 2;
    const BETA: usize = 1;
    const AB: usize = 3;

    fn klein(gc: &[usize], gd: &[usize]) -> UnmixedSurface {
        let g = Arc::new(GroupTable::parse("ab:2,2").unwrap());
        let v = |gs: &[usize]| {
            GeneratingVector::new(g.clone(), vec![ALPHA], vec![BETA], gs.to_vec()).unwrap()
        };
        build_surface(&v(gc), &v(gd)).unwrap()
    }

    #[test]
    fn kernel_test_on_the_smallest_example() {
        let s = klein(&[ALPHA, ALPHA], &[BETA, BETA]);
        assert!(acts_trivially(&s, 0).unwrap());
        assert!(acts_trivially(&s, AB).unwrap());
        assert!(!acts_trivially(&s, ALPHA).unwrap());
        assert_eq!(compute_aut0(&s).to_vec(), vec![0, AB]);
    }

    #[test]
    fn diagonal_variant_aut0() {
        let s = klein(&[ALPHA, ALPHA], &[AB, AB]);
        assert_eq!(compute_aut0(&s).to_vec(), vec![0, BETA]);
        let rec = ClassificationRecord::new(s);
        let c = rec.conformance.unwrap();
        assert!(c.conforms, "{}", c.reason);
    }

    #[test]
    fn non_central_elements_rejected() {
        let g = Arc::new(GroupTable::parse("sym:3").unwrap());
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let c = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
        // (1; 2, 2) and (1; 3, 3) covers of an elliptic curve.
        let find = |target: usize| {
            let classes = g.conjugacy_classes();
            let cls = &classes[g.class_of(target)];
            for a in 0..6 {
                for b in 0..6 {
                    for &x in &cls.members {
                        let v = GeneratingVector::new(g.clone(), vec![a], vec![b], vec![target, x])
                            .unwrap();
                        if crate::covering::validate_vector(&v).is_ok() {
                            return v;
                        }
                    }
                }
            }
            panic!("no vector");
        };
        let s = build_surface(&find(t), &find(c)).unwrap();
        assert_eq!(
            (s.cover_c().genus, s.cover_d().genus, s.invariants().chi),
            (4, 5, 2)
        );
        assert!(acts_trivially(&s, t).is_err());
        assert_eq!(compute_aut0(&s).len(), 1);
    }

    #[test]
    fn example_family_conforms() {
        for family in [Family::Z2mZ2mn, Family::Z2Z2mZ2mn] {
            let ex = example_surface(family, 1, 2, 2, 1).unwrap();
            let rec = ClassificationRecord::new(ex.surface.clone());
            assert_eq!(rec.aut0.to_vec(), {
                let mut v = vec![0, ex.involution()];
                v.sort();
                v
            });
            assert!(rec.conformance.unwrap().conforms);
            assert_eq!(compute_aut0(&ex.surface.swapped().unwrap()), rec.aut0);
        }
    }

    #[test]
    fn conformance_requires_nontrivial_aut0() {
        let g = Arc::new(GroupTable::parse("ab:1").unwrap());
        let v = GeneratingVector::new(g, vec![0], vec![0], vec![]).unwrap();
        // Genus 1 is rejected before any record exists.
        assert!(build_surface(&v, &v).is_err());
        let s = klein(&[ALPHA, ALPHA], &[BETA, BETA]);
        let mut rec = ClassificationRecord::new(s);
        rec.aut0 = ElementSet::from_elements(4, [0]);
        assert!(check_conformance(&rec).is_err());
    }

    #[test]
    fn empty_sweep() {
        let report = classify_all(
            &SearchBounds::default(),
            &[],
            &BuildOptions::default(),
            Keep::All,
            &|_| {},
        )
        .unwrap();
        assert_eq!(report.summary, Summary::default());
        assert!(report.records.is_empty());
    }

    #[test]
    fn invalid_bounds() {
        let bounds = SearchBounds {
            max_group_order: 0,
            ..Default::default()
        };
        assert!(classify_all(&bounds, &[], &BuildOptions::default(), Keep::All, &|_| {}).is_err());
        let bounds = SearchBounds {
            base_genera: vec![(0, 1)],
            ..Default::default()
        };
        assert!(bounds.validate().is_err());
    }

    #[test]
    fn small_sweep_is_deterministic_and_conforming() {
        let groups: Vec<GroupSpec> = ["ab:2,2", "ab:2,4", "sym:3"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let bounds = SearchBounds {
            max_r: 2,
            max_s: 2,
            ..Default::default()
        };
        let run = || {
            classify_all(
                &bounds,
                &groups,
                &BuildOptions::default(),
                Keep::All,
                &|_| {},
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.summary, b.summary);
        let ja: Vec<_> = a.records.iter().map(ClassificationRecord::json).collect();
        let jb: Vec<_> = b.records.iter().map(ClassificationRecord::json).collect();
        assert_eq!(ja, jb);
        assert!(a.summary.nontrivial_aut0 > 0);
        assert_eq!(a.summary.conformance_failures, 0);
        assert_eq!(a.summary.errors, 0);
    }
}
