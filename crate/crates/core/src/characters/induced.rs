//! Restriction to and induction from subgroups.

use std::sync::Arc;

use super::{character_table, CharacterTable, ClassFunction};
use crate::cyclotomic::CycloInt;
use crate::error::{Error, Result};
use crate::group::{ElementSet, GroupTable};

/// A subgroup `H ≤ G` together with the character tables of both groups.
#[derive(Clone, Debug)]
pub struct SubgroupCharacters {
    parent: CharacterTable,
    set: ElementSet,
    table: CharacterTable,
    /// Parent index -> subgroup index, `usize::MAX` outside `H`.
    position: Vec<usize>,
}

impl SubgroupCharacters {
    pub fn new(parent: &Arc<GroupTable>, set: &ElementSet) -> Result<Self> {
        let (sub, embedding) = parent.subgroup_table(set)?;
        let mut position = vec![usize::MAX; parent.order()];
        for (i, &g) in embedding.iter().enumerate() {
            position[g] = i;
        }
        Ok(SubgroupCharacters {
            parent: character_table(parent)?,
            set: set.clone(),
            table: character_table(&Arc::new(sub))?,
            position,
        })
    }

    pub fn parent(&self) -> &CharacterTable {
        &self.parent
    }

    pub fn set(&self) -> &ElementSet {
        &self.set
    }

    /// Character table of `H` on its own class structure.
    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    /// Subgroup index of a parent element, if it lies in `H`.
    pub fn position(&self, g: usize) -> Option<usize> {
        (self.position[g] != usize::MAX).then_some(self.position[g])
    }

    /// `Ker(χ)` for a character of `H`, as a set of parent elements.
    pub fn kernel_in_parent(&self, chi: usize) -> ElementSet {
        let embedding = self.set.to_vec();
        ElementSet::from_elements(
            self.parent.group().order(),
            self.table.kernel(chi).iter().map(|h| embedding[h]),
        )
    }

    /// `φ|_H` for a character `φ` of `G`, over the exponent of `H`.
    pub fn restrict(&self, phi: usize) -> ClassFunction {
        let h = self.table.group();
        let (eg, eh) = (self.parent.exponent(), self.table.exponent());
        let step = eg / eh;
        let embedding = self.set.to_vec();
        let values = h
            .conjugacy_classes()
            .iter()
            .map(|c| {
                let m = self.parent.value(phi, embedding[c.representative]);
                // Eigenvalues of an element of H are e_H-th roots of unity.
                let compressed: Vec<u32> = (0..eh).map(|k| m[k * step]).collect();
                CycloInt::from_multiplicities(&compressed)
            })
            .collect();
        ClassFunction { values }
    }
}

/// An induced character with its decomposition into irreducibles of `G`.
#[derive(Clone, Debug)]
pub struct InducedCharacter {
    pub function: ClassFunction,
    pub degree: u64,
    /// `⟨χ^G, φ⟩` for every irreducible `φ` of `G`, in table order.
    pub multiplicities: Vec<u32>,
}

impl InducedCharacter {
    /// Indices of the irreducible constituents.
    pub fn constituents(&self) -> impl Iterator<Item = usize> + '_ {
        self.multiplicities
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, _)| i)
    }

    pub fn vanishes_at(&self, g: &GroupTable, x: usize) -> bool {
        self.function.values[g.class_of(x)].is_zero()
    }
}

/// `χ^G(g) = (1/|H|) Σ_{t∈G} χ°(tgt⁻¹)` for the character `chi` of `H`.
///
/// The sum is accumulated on multiplicity vectors lifted to the exponent of
/// `G`; the terms come in blocks of `|H|` equal vectors, so every coefficient
/// divides exactly.
pub fn induced_character(sub: &SubgroupCharacters, chi: usize) -> Result<InducedCharacter> {
    let g = sub.parent.group();
    let eg = sub.parent.exponent();
    let step = eg / sub.table.exponent();
    let h_order = sub.set.len() as u64;
    let mut values = Vec::with_capacity(g.conjugacy_classes().len());
    for class in g.conjugacy_classes() {
        let x = class.representative;
        let mut acc = vec![0u64; eg];
        for t in 0..g.order() {
            let y = g.conjugate(x, t);
            if let Some(p) = sub.position(y) {
                for (k, &m) in sub.table.value(chi, p).iter().enumerate() {
                    acc[k * step] += u64::from(m);
                }
            }
        }
        if acc.iter().any(|&c| c % h_order != 0) {
            return Err(Error::Consistency(
                "induced sum not divisible by |H|".into(),
            ));
        }
        let mults: Vec<u32> = acc.iter().map(|&c| (c / h_order) as u32).collect();
        values.push(CycloInt::from_multiplicities(&mults));
    }
    let function = ClassFunction { values };
    let degree = function
        .value_at_identity()
        .ok_or_else(|| Error::Consistency("induced degree is not an integer".into()))?
        as u64;
    let multiplicities = decompose(&sub.parent, &function)?;
    Ok(InducedCharacter {
        function,
        degree,
        multiplicities,
    })
}

/// `⟨f, χ⟩` for every irreducible `χ`, checked by exact reconstruction.
/// Errors with a validation error if `f` is not a character.
pub fn decompose(table: &CharacterTable, f: &ClassFunction) -> Result<Vec<u32>> {
    let mut out = Vec::with_capacity(table.len());
    for i in 0..table.len() {
        let m = table.inner_product(f, i).map_err(|_| {
            Error::Validation("class function has a non-integral inner product".into())
        })?;
        if m < 0 {
            return Err(Error::Validation(format!(
                "negative multiplicity {m} of chi_{i}"
            )));
        }
        out.push(m as u32);
    }
    let e = table.exponent();
    for (c, value) in f.values.iter().enumerate() {
        let rebuilt = out
            .iter()
            .enumerate()
            .fold(CycloInt::zero(e), |acc, (i, &m)| {
                let v = CycloInt::from_multiplicities(&table.character(i).values[c])
                    .scale(i64::from(m));
                &acc + &v
            });
        if rebuilt != value.lift(e) {
            return Err(Error::Validation(format!(
                "class function differs from its decomposition at class {c}"
            )));
        }
    }
    Ok(out)
}

/// An irreducible constituent `φ` of `χ^G` whose kernel misses `avoid` and,
/// if given, also `extra`. Returns the index of `φ` in the table of `G`.
///
/// Requires `avoid ⊆ H`, `avoid ∩ Ker(χ) = ∅` and, for `extra`, that `χ^G`
/// vanishes there. Under these hypotheses a constituent always exists, so
/// failing to find one is reported as [`Error::Contradiction`].
pub fn find_constituent_avoiding(
    sub: &SubgroupCharacters,
    chi: usize,
    avoid: &ElementSet,
    extra: Option<usize>,
) -> Result<usize> {
    if !avoid.is_subset(&sub.set) {
        return Err(Error::Domain("avoided set is not contained in H".into()));
    }
    if !avoid.is_disjoint(&sub.kernel_in_parent(chi)) {
        return Err(Error::Domain("avoided set meets Ker(chi)".into()));
    }
    let induced = induced_character(sub, chi)?;
    let g = sub.parent.group();
    if let Some(x) = extra {
        if !induced.vanishes_at(g, x) {
            return Err(Error::Domain(format!(
                "induced character does not vanish at {}",
                g.label(x)
            )));
        }
    }
    let found = induced.constituents().find(|&phi| {
        let ker = sub.parent.kernel(phi);
        avoid.is_disjoint(ker) && extra.is_none_or(|x| !ker.contains(x))
    });
    found.ok_or_else(|| {
        Error::Contradiction(format!(
            "chi_{chi} of {} induced to {}",
            sub.table.group().spec(),
            g.spec()
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(spec: &str, gens: &[usize]) -> SubgroupCharacters {
        let g = Arc::new(GroupTable::parse(spec).unwrap());
        let h = g.subgroup_generated(gens.iter().copied());
        SubgroupCharacters::new(&g, &h).unwrap()
    }

    #[test]
    fn induction_from_whole_group_is_identity() {
        let g = Arc::new(GroupTable::parse("sym:3").unwrap());
        let sub = SubgroupCharacters::new(&g, &ElementSet::full(6)).unwrap();
        for i in 0..sub.table().len() {
            let ind = induced_character(&sub, i).unwrap();
            assert_eq!(ind.constituents().collect::<Vec<_>>().len(), 1);
            assert_eq!(ind.degree, u64::from(sub.table().degree(i)));
        }
    }

    #[test]
    fn regular_character_from_trivial_subgroup() {
        let sub = setup("dih:5", &[]);
        let ind = induced_character(&sub, 0).unwrap();
        assert_eq!(ind.degree, 10);
        for v in &ind.function.values[1..] {
            assert!(v.is_zero());
        }
        for (i, &m) in ind.multiplicities.iter().enumerate() {
            assert_eq!(m, sub.parent().degree(i));
        }
    }

    #[test]
    fn sign_of_transposition_subgroup_in_sym3() {
        let g = GroupTable::parse("sym:3").unwrap();
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let sub = setup("sym:3", &[t]);
        let sign = 1; // the non-trivial character of Z2
        let ind = induced_character(&sub, sign).unwrap();
        let by_order: Vec<(usize, i64)> = g
            .conjugacy_classes()
            .iter()
            .map(|c| {
                let v = ind.function.values[g.class_of(c.representative)]
                    .as_integer()
                    .unwrap();
                (g.element_order(c.representative), v)
            })
            .collect();
        assert!(by_order.contains(&(1, 3)));
        assert!(by_order.contains(&(2, -1)));
        assert!(by_order.contains(&(3, 0)));
        let constituents: Vec<u32> = ind.constituents().map(|i| sub.parent().degree(i)).collect();
        assert_eq!(constituents, vec![1, 2]);
        assert_ne!(ind.constituents().next(), Some(0));
    }

    #[test]
    fn faithful_character_of_three_cycles() {
        let g = GroupTable::parse("sym:3").unwrap();
        let c = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
        let sub = setup("sym:3", &[c]);
        let faithful = (0..3).find(|&i| sub.table().kernel(i).len() == 1).unwrap();
        let avoid = ElementSet::from_elements(6, [c]);
        let phi = find_constituent_avoiding(&sub, faithful, &avoid, None).unwrap();
        assert!(!sub.parent().kernel(phi).contains(c));
        assert_eq!(sub.parent().degree(phi), 2);
    }

    #[test]
    fn preconditions_are_enforced() {
        let sub = setup("sym:3", &[]);
        let avoid = ElementSet::from_elements(6, [0]);
        assert!(matches!(
            find_constituent_avoiding(&sub, 0, &avoid, None),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn non_characters_are_rejected() {
        let t = character_table(&Arc::new(GroupTable::parse("ab:3").unwrap())).unwrap();
        let mut f = t.as_class_function(1);
        f.values[0] = CycloInt::integer(3, 2);
        assert!(decompose(&t, &f).is_err());
        let neg = ClassFunction {
            values: t.as_class_function(1).values.iter().map(|v| -v).collect(),
        };
        assert!(decompose(&t, &neg).is_err());
    }
}
