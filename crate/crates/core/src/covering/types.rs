//! Branching types: the base genus together with the multiset of conjugacy
//! classes of the branch elements.
//!
//! The genus, the stabilizer union and every isotypic dimension of a cover
//! are functions of its branching type, so a search over surfaces only needs
//! one witness vector per realizable type. Braid moves permute the classes
//! freely without changing the product or the generated group, so it suffices
//! to test the sorted class sequence, and conjugating the whole vector lets
//! `γ_1` be the class representative.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{riemann_hurwitz, validate_vector, BranchedCover, GeneratingVector};
use crate::error::{Error, Result};
use crate::group::{ElementSet, GroupTable};

#[derive(Clone, Debug)]
pub struct TypeSearch {
    pub base_genus: usize,
    pub max_r: usize,
    pub max_branch_order: usize,
    pub genus_cap: u64,
    pub min_genus: u64,
}

impl Default for TypeSearch {
    fn default() -> Self {
        TypeSearch {
            base_genus: 1,
            max_r: 4,
            max_branch_order: 8,
            genus_cap: 33,
            min_genus: 2,
        }
    }
}

/// A realizable branching type with one witness cover.
#[derive(Clone, Debug)]
pub struct BranchingType {
    /// Sorted class indices of `γ_1, ..., γ_r`.
    pub classes: Vec<usize>,
    pub cover: BranchedCover,
}

/// A subgroup spanned by handle pairs, with the witnessing `α`s and `β`s.
type Handles = (ElementSet, Vec<usize>, Vec<usize>);

/// Handle pairs `(α, β)` summarized by their commutator product and the
/// subgroup they generate, with one witness each.
struct HandleTable {
    by_product: HashMap<usize, Vec<Handles>>,
}

impl HandleTable {
    fn new(g: &GroupTable, b: usize) -> Self {
        let trivial = g.subgroup_generated([]);
        let mut level: BTreeMap<(usize, ElementSet), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        level.insert((g.identity(), trivial), (vec![], vec![]));
        for _ in 0..b {
            let mut next = BTreeMap::new();
            let mut joins: HashMap<(ElementSet, usize, usize), ElementSet> = HashMap::new();
            for ((c, h), (alphas, betas)) in &level {
                for a in 0..g.order() {
                    for bb in 0..g.order() {
                        let product = g.mul(*c, g.commutator(a, bb));
                        let span = joins
                            .entry((h.clone(), a.min(bb), a.max(bb)))
                            .or_insert_with(|| g.join(h, [a, bb]))
                            .clone();
                        next.entry((product, span)).or_insert_with(|| {
                            let mut alphas = alphas.clone();
                            let mut betas = betas.clone();
                            alphas.push(a);
                            betas.push(bb);
                            (alphas, betas)
                        });
                    }
                }
            }
            level = next;
        }
        let mut by_product: HashMap<usize, Vec<_>> = HashMap::new();
        for ((c, h), (alphas, betas)) in level {
            by_product.entry(c).or_default().push((h, alphas, betas));
        }
        HandleTable { by_product }
    }
}

/// All realizable branching types within the search bounds, each with a
/// witness cover, in order of `(r, classes)`.
pub fn branching_types(group: &Arc<GroupTable>, search: &TypeSearch) -> Result<Vec<BranchingType>> {
    if search.base_genus > 2 {
        return Err(Error::Domain(format!(
            "base genus {} is not supported",
            search.base_genus
        )));
    }
    let g = group.as_ref();
    let handles = HandleTable::new(g, search.base_genus);
    let classes = g.conjugacy_classes();
    let candidates: Vec<usize> = (1..classes.len())
        .filter(|&c| g.element_order(classes[c].representative) <= search.max_branch_order)
        .collect();

    let mut out = Vec::new();
    for r in 0..=search.max_r {
        for combo in multisets(&candidates, r) {
            let orders: Vec<usize> = combo
                .iter()
                .map(|&c| g.element_order(classes[c].representative))
                .collect();
            let Ok(genus) = riemann_hurwitz(g.order(), search.base_genus, &orders) else {
                continue;
            };
            if genus < search.min_genus || genus > search.genus_cap {
                continue;
            }
            if let Some(v) = witness(group, &handles, &combo) {
                let cover = validate_vector(&v)
                    .map_err(|e| Error::Consistency(format!("witness failed validation: {e}")))?;
                out.push(BranchingType {
                    classes: combo,
                    cover,
                });
            }
        }
    }
    Ok(out)
}

/// Non-decreasing sequences of length `r` drawn from `items`.
fn multisets(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    fn rec(
        items: &[usize],
        r: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, r, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, r, 0, &mut Vec::new(), &mut out);
    out
}

fn witness(
    group: &Arc<GroupTable>,
    handles: &HandleTable,
    classes: &[usize],
) -> Option<GeneratingVector> {
    let g = group.as_ref();
    let mut gammas = Vec::with_capacity(classes.len());
    if let Some(&first) = classes.first() {
        gammas.push(g.conjugacy_classes()[first].representative);
    }
    let (alphas, betas, gammas) = search(g, handles, classes, &mut gammas)?;
    Some(GeneratingVector {
        group: group.clone(),
        alphas,
        betas,
        gammas,
    })
}

/// Extends `gammas` by class members until handles complete the relation
/// and the whole vector generates `G`; returns `(alphas, betas, gammas)`.
fn search(
    g: &GroupTable,
    handles: &HandleTable,
    classes: &[usize],
    gammas: &mut Vec<usize>,
) -> Option<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    if gammas.len() == classes.len() {
        let product = gammas.iter().fold(g.identity(), |acc, &x| g.mul(acc, x));
        let entries = handles.by_product.get(&g.inv(product))?;
        let span = g.subgroup_generated(gammas.iter().copied());
        return entries.iter().find_map(|(h, alphas, betas)| {
            (g.join(&span, h.iter()).len() == g.order())
                .then(|| (alphas.clone(), betas.clone(), gammas.clone()))
        });
    }
    for &x in &g.conjugacy_classes()[classes[gammas.len()]].members {
        gammas.push(x);
        let found = search(g, handles, classes, gammas);
        gammas.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{enumerate_vectors, EnumerationOptions};
    use std::collections::BTreeSet;

    fn type_of(g: &GroupTable, v: &GeneratingVector) -> Vec<usize> {
        let mut c: Vec<usize> = v.gammas().iter().map(|&x| g.class_of(x)).collect();
        c.sort_unstable();
        c
    }

    /// Realizable types found by the witness search agree with the types of
    /// exhaustively enumerated vectors.
    #[test]
    fn types_match_exhaustive_enumeration() {
        for spec in ["ab:2,2", "sym:3", "dih:4", "quat:8", "ab:6"] {
            let g = Arc::new(GroupTable::parse(spec).unwrap());
            for b in 0..=1 {
                let search = TypeSearch {
                    base_genus: b,
                    max_r: if b == 0 { 4 } else { 3 },
                    genus_cap: 40,
                    ..Default::default()
                };
                let found: BTreeSet<Vec<usize>> = branching_types(&g, &search)
                    .unwrap()
                    .into_iter()
                    .map(|t| {
                        assert_eq!(type_of(&g, &t.cover.vector), t.classes);
                        t.classes
                    })
                    .collect();
                let opts = EnumerationOptions {
                    base_genus: b,
                    max_r: search.max_r,
                    genus_cap: 40,
                    ..Default::default()
                };
                let brute: BTreeSet<Vec<usize>> = enumerate_vectors(&g, &opts)
                    .unwrap()
                    .covers
                    .iter()
                    .map(|c| type_of(&g, &c.vector))
                    .collect();
                assert_eq!(found, brute, "{spec}, b = {b}");
            }
        }
    }

    #[test]
    fn genus_two_bases_allow_unramified_types() {
        let g = Arc::new(GroupTable::parse("ab:2,2").unwrap());
        let search = TypeSearch {
            base_genus: 2,
            max_r: 0,
            ..Default::default()
        };
        let types = branching_types(&g, &search).unwrap();
        assert_eq!(types.len(), 1);
        assert_eq!(types[0].cover.genus, 5);
    }
}
