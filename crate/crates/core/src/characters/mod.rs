//! Exact irreducible character tables.
//!
//! A character value `χ(g)` is stored as the eigenvalue multiplicities of a
//! representing matrix: a vector `(m_0, ..., m_{e-1})` with `χ(g) = Σ m_k ζ_e^k`
//! where `e` is the group exponent. The two predicates used downstream become
//! integer tests: `g ∈ Ker(χ)` iff `m_0 = χ(1)`, and the multiplicity of the
//! trivial character in `χ|<g>` is `m_0`.

mod abelian;
mod cache;
mod dixon;
mod induced;

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycloInt;
use crate::error::{Error, Result};
use crate::group::{ElementSet, GroupTable};

pub use cache::{cached_table_count, character_table, seed_character_table};
pub use dixon::DixonOptions;
pub use induced::{
    decompose, find_constituent_avoiding, induced_character, InducedCharacter, SubgroupCharacters,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    pub degree: u32,
    /// One multiplicity vector of length `exponent` per conjugacy class.
    pub values: Vec<Vec<u32>>,
}

impl Character {
    fn conjugated(&self) -> Character {
        let values = self
            .values
            .iter()
            .map(|m| {
                let e = m.len();
                (0..e).map(|k| m[(e - k) % e]).collect()
            })
            .collect();
        Character {
            degree: self.degree,
            values,
        }
    }
}

/// A class function with values in `Z[ζ_e]`, one value per conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<CycloInt>,
}

impl ClassFunction {
    pub fn value_at_identity(&self) -> Option<i64> {
        self.values.first().and_then(CycloInt::as_integer)
    }
}

#[derive(Debug)]
struct TableData {
    exponent: usize,
    characters: Vec<Character>,
    conjugate: Vec<usize>,
    kernels: Vec<ElementSet>,
}

/// The irreducible characters of a group, sorted by degree and then by
/// descending multiplicity vectors, so the trivial character is index 0.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: Arc<GroupTable>,
    data: Arc<TableData>,
}

impl CharacterTable {
    /// Abelian groups use the direct construction, all others Dixon's method.
    pub fn compute(group: Arc<GroupTable>) -> Result<Self> {
        if group.is_abelian() {
            Self::abelian(group)
        } else {
            Self::dixon(group, &DixonOptions::default())
        }
    }

    pub fn abelian(group: Arc<GroupTable>) -> Result<Self> {
        let characters = abelian::abelian_characters(&group)?;
        Self::from_characters(group, characters)
    }

    pub fn dixon(group: Arc<GroupTable>, opts: &DixonOptions) -> Result<Self> {
        let characters = dixon::dixon_characters(&group, opts)?;
        Self::from_characters(group, characters)
    }

    /// Sorts the characters and precomputes conjugates and kernels. Checks
    /// shape, the Burnside identity and the per-class degree sums; the full
    /// orthogonality check is [`CharacterTable::verify`].
    pub fn from_characters(group: Arc<GroupTable>, mut characters: Vec<Character>) -> Result<Self> {
        let e = group.exponent();
        let k = group.conjugacy_classes().len();
        if characters.len() != k {
            return Err(Error::Consistency(format!(
                "{} characters for {} classes of {}",
                characters.len(),
                k,
                group.spec()
            )));
        }
        for chi in &characters {
            if chi.values.len() != k || chi.values.iter().any(|m| m.len() != e) {
                return Err(Error::Consistency("character has the wrong shape".into()));
            }
            if chi
                .values
                .iter()
                .any(|m| m.iter().sum::<u32>() != chi.degree)
            {
                return Err(Error::Consistency(
                    "multiplicities do not sum to the degree".into(),
                ));
            }
        }
        let burnside: u64 = characters.iter().map(|c| u64::from(c.degree).pow(2)).sum();
        if burnside != group.order() as u64 {
            return Err(Error::Consistency(format!(
                "sum of squared degrees {} != |G| = {}",
                burnside,
                group.order()
            )));
        }
        characters.sort_by(|a, b| {
            a.degree
                .cmp(&b.degree)
                .then_with(|| b.values.cmp(&a.values))
        });

        let index: HashMap<&Character, usize> =
            characters.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let conjugate = characters
            .iter()
            .map(|c| {
                index
                    .get(&c.conjugated())
                    .copied()
                    .ok_or_else(|| Error::Consistency("conjugate character missing".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let kernels = characters
            .iter()
            .map(|c| {
                ElementSet::from_elements(
                    group.order(),
                    (0..group.order()).filter(|&g| c.values[group.class_of(g)][0] == c.degree),
                )
            })
            .collect();
        Ok(CharacterTable {
            group,
            data: Arc::new(TableData {
                exponent: e,
                characters,
                conjugate,
                kernels,
            }),
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn exponent(&self) -> usize {
        self.data.exponent
    }

    pub fn len(&self) -> usize {
        self.data.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.characters.is_empty()
    }

    pub fn characters(&self) -> &[Character] {
        &self.data.characters
    }

    pub fn character(&self, i: usize) -> &Character {
        &self.data.characters[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.data.characters[i].degree
    }

    pub fn is_trivial(&self, i: usize) -> bool {
        i == 0
    }

    /// Multiplicity vector of `χ_i(g)`.
    pub fn value(&self, i: usize, g: usize) -> &[u32] {
        &self.data.characters[i].values[self.group.class_of(g)]
    }

    pub fn value_cyclo(&self, i: usize, g: usize) -> CycloInt {
        CycloInt::from_multiplicities(self.value(i, g))
    }

    /// Index of the complex conjugate character `χ̄_i`.
    pub fn conjugate(&self, i: usize) -> usize {
        self.data.conjugate[i]
    }

    /// `Ker(χ_i) = {g : χ_i(g) = χ_i(1)}`.
    pub fn kernel(&self, i: usize) -> &ElementSet {
        &self.data.kernels[i]
    }

    /// `l_σ(χ_i)`, the multiplicity of the trivial character in the
    /// restriction of `χ_i` to `<σ>`: the number of eigenvalues equal to 1.
    pub fn trivial_multiplicity_on_cyclic(&self, i: usize, sigma: usize) -> u32 {
        self.value(i, sigma)[0]
    }

    pub fn as_class_function(&self, i: usize) -> ClassFunction {
        ClassFunction {
            values: self.data.characters[i]
                .values
                .iter()
                .map(|m| CycloInt::from_multiplicities(m))
                .collect(),
        }
    }

    /// `⟨f, χ_i⟩ = (1/|G|) Σ_g f(g) χ̄_i(g)`, exactly. Errors if the result is
    /// not a rational integer.
    pub fn inner_product(&self, f: &ClassFunction, i: usize) -> Result<i64> {
        let e = self.exponent();
        let mut acc = CycloInt::zero(e);
        for (c, class) in self.group.conjugacy_classes().iter().enumerate() {
            let chi = CycloInt::from_multiplicities(&self.data.characters[i].values[c]).conj();
            let term = (&f.values[c] * &chi).scale(class.size() as i64);
            acc = &acc + &term;
        }
        let n = self.group.order() as i64;
        match acc.as_integer() {
            Some(v) if v % n == 0 => Ok(v / n),
            _ => Err(Error::Consistency(format!(
                "inner product {acc} / {n} is not an integer"
            ))),
        }
    }

    /// Row and column orthogonality in exact cyclotomic arithmetic.
    pub fn verify(&self) -> Result<()> {
        let k = self.len();
        let classes = self.group.conjugacy_classes();
        let n = self.group.order() as i64;
        for i in 0..k {
            let fi = self.as_class_function(i);
            for j in 0..k {
                let ip = self.inner_product(&fi, j)?;
                if ip != i64::from(i == j) {
                    return Err(Error::Consistency(format!("<chi_{i}, chi_{j}> = {ip}")));
                }
            }
        }
        let e = self.exponent();
        for a in 0..k {
            for b in 0..k {
                let mut acc = CycloInt::zero(e);
                for chi in self.characters() {
                    let x = CycloInt::from_multiplicities(&chi.values[a]);
                    let y = CycloInt::from_multiplicities(&chi.values[b]).conj();
                    acc = &acc + &(&x * &y);
                }
                let expected = if a == b {
                    n / classes[a].size() as i64
                } else {
                    0
                };
                if acc.as_integer() != Some(expected) {
                    return Err(Error::Consistency(format!(
                        "column orthogonality fails at classes ({a},{b}): {acc}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Power-map consistency: the vector at `g^j` is the vector at `g`
    /// pushed forward along `k -> jk mod e`.
    pub fn check_power_maps(&self) -> Result<()> {
        let e = self.exponent();
        for (i, chi) in self.characters().iter().enumerate() {
            for class in self.group.conjugacy_classes() {
                let g = class.representative;
                let base = &chi.values[self.group.class_of(g)];
                for j in 0..e {
                    let mut pushed = vec![0u32; e];
                    for (k, &m) in base.iter().enumerate() {
                        pushed[(j * k) % e] += m;
                    }
                    if pushed != self.value(i, self.group.pow(g, j)) {
                        return Err(Error::Consistency(format!(
                            "power map {j} inconsistent for chi_{i} at {}",
                            self.group.label(g)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn export(&self) -> TableExport {
        TableExport {
            group: self.group.spec().to_string(),
            exponent: self.exponent(),
            classes: self
                .group
                .conjugacy_classes()
                .iter()
                .map(|c| c.size())
                .collect(),
            characters: self.characters().to_vec(),
        }
    }

    /// Rebuilds a table from an export of the same labelled group. The class
    /// sizes must match and the result must pass [`CharacterTable::verify`];
    /// any defect is reported as [`Error::Validation`].
    pub fn from_export(group: Arc<GroupTable>, export: TableExport) -> Result<Self> {
        let sizes: Vec<usize> = group.conjugacy_classes().iter().map(|c| c.size()).collect();
        if export.exponent != group.exponent() || export.classes != sizes {
            return Err(Error::Validation(format!(
                "exported table does not match {}",
                group.spec()
            )));
        }
        // Defects in imported data are the input's fault, not ours.
        let external = |e: Error| match e {
            Error::Consistency(m) => Error::Validation(format!("exported table: {m}")),
            e => e,
        };
        let table = Self::from_characters(group, export.characters).map_err(external)?;
        table.verify().map_err(external)?;
        Ok(table)
    }
}

/// JSON form of a character table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableExport {
    pub group: String,
    pub exponent: usize,
    pub classes: Vec<usize>,
    pub characters: Vec<Character>,
}
