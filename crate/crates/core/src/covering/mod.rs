//! Generating vectors and the branched covers of curves they describe.

mod enumerate;
mod types;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::group::{ElementSet, GroupTable};

pub use enumerate::{enumerate_vectors, DedupMode, Enumeration, EnumerationOptions};
pub use types::{branching_types, BranchingType, TypeSearch};

/// Branching data `(α_1, β_1, ..., α_b, β_b; γ_1, ..., γ_r)` in a group.
///
/// Construction only checks shape and element ranges; [`validate_vector`]
/// checks the long relation and generation.
#[derive(Clone, Debug)]
pub struct GeneratingVector {
    group: Arc<GroupTable>,
    alphas: Vec<usize>,
    betas: Vec<usize>,
    gammas: Vec<usize>,
}

/// JSON form of a generating vector, using element indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VectorRecord {
    pub group: String,
    pub b: usize,
    pub alphas: Vec<usize>,
    pub betas: Vec<usize>,
    pub gammas: Vec<usize>,
}

impl GeneratingVector {
    pub fn new(
        group: Arc<GroupTable>,
        alphas: Vec<usize>,
        betas: Vec<usize>,
        gammas: Vec<usize>,
    ) -> Result<Self> {
        if alphas.len() != betas.len() {
            return Err(Error::Validation(format!(
                "{} alphas but {} betas",
                alphas.len(),
                betas.len()
            )));
        }
        let n = group.order();
        if let Some(&x) = alphas
            .iter()
            .chain(&betas)
            .chain(&gammas)
            .find(|&&x| x >= n)
        {
            return Err(Error::Validation(format!(
                "element {x} is not in {}",
                group.spec()
            )));
        }
        Ok(GeneratingVector {
            group,
            alphas,
            betas,
            gammas,
        })
    }

    pub fn from_record(group: Arc<GroupTable>, record: &VectorRecord) -> Result<Self> {
        if record.group != group.spec() {
            return Err(Error::Validation(format!(
                "vector is over {} but the group is {}",
                record.group,
                group.spec()
            )));
        }
        if record.alphas.len() != record.b {
            return Err(Error::Validation(format!(
                "b = {} but {} alphas",
                record.b,
                record.alphas.len()
            )));
        }
        Self::new(
            group,
            record.alphas.clone(),
            record.betas.clone(),
            record.gammas.clone(),
        )
    }

    pub fn record(&self) -> VectorRecord {
        VectorRecord {
            group: self.group.spec().to_string(),
            b: self.base_genus(),
            alphas: self.alphas.clone(),
            betas: self.betas.clone(),
            gammas: self.gammas.clone(),
        }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn base_genus(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[usize] {
        &self.alphas
    }

    pub fn betas(&self) -> &[usize] {
        &self.betas
    }

    pub fn gammas(&self) -> &[usize] {
        &self.gammas
    }

    pub fn branch_orders(&self) -> Vec<usize> {
        self.gammas
            .iter()
            .map(|&g| self.group.element_order(g))
            .collect()
    }

    /// `Π [α_j, β_j] · Π γ_i`
    pub fn relation_product(&self) -> usize {
        let g = &self.group;
        let comm = self
            .alphas
            .iter()
            .zip(&self.betas)
            .fold(0, |acc, (&a, &b)| g.mul(acc, g.commutator(a, b)));
        self.gammas.iter().fold(comm, |acc, &c| g.mul(acc, c))
    }

    /// Image under a group automorphism given as an element permutation.
    pub fn relabel(&self, map: &[usize]) -> Self {
        let apply = |v: &[usize]| v.iter().map(|&x| map[x]).collect();
        GeneratingVector {
            group: self.group.clone(),
            alphas: apply(&self.alphas),
            betas: apply(&self.betas),
            gammas: apply(&self.gammas),
        }
    }

    fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.alphas
            .iter()
            .chain(&self.betas)
            .chain(&self.gammas)
            .copied()
    }
}

impl PartialEq for GeneratingVector {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.group, &other.group) || self.group.spec() == other.group.spec())
            && self.alphas == other.alphas
            && self.betas == other.betas
            && self.gammas == other.gammas
    }
}

impl Eq for GeneratingVector {}

/// A validated vector together with the genus of the covering curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedCover {
    pub vector: GeneratingVector,
    pub genus: u64,
}

impl BranchedCover {
    pub fn group(&self) -> &Arc<GroupTable> {
        self.vector.group()
    }

    pub fn base_genus(&self) -> usize {
        self.vector.base_genus()
    }
}

/// Genus `g` from `2g − 2 = |G|(2b − 2 + r) − Σ |G|/m_i`.
pub fn riemann_hurwitz(order: usize, base_genus: usize, branch_orders: &[usize]) -> Result<u64> {
    let n = order as i64;
    let mut twice = n * (2 * base_genus as i64 - 2 + branch_orders.len() as i64);
    for &m in branch_orders {
        if m < 2 || !order.is_multiple_of(m) {
            return Err(Error::Validation(format!(
                "branch order {m} is invalid for |G| = {order}"
            )));
        }
        twice -= n / m as i64;
    }
    if twice < -2 || twice % 2 != 0 {
        return Err(Error::Validation(format!(
            "2g - 2 = {twice} gives no genus"
        )));
    }
    Ok(((twice + 2) / 2) as u64)
}

/// Checks the long relation, the branch orders and generation, and computes
/// the genus of the cover.
pub fn validate_vector(v: &GeneratingVector) -> Result<BranchedCover> {
    let g = v.group();
    if let Some(i) = v.gammas.iter().position(|&x| x == g.identity()) {
        return Err(Error::Validation(format!(
            "gamma_{} is the identity",
            i + 1
        )));
    }
    let product = v.relation_product();
    if product != g.identity() {
        return Err(Error::Validation(format!(
            "long relation fails: product is {}",
            g.label(product)
        )));
    }
    let span = g.subgroup_generated(v.elements());
    if span.len() != g.order() {
        return Err(Error::Validation(format!(
            "elements generate a subgroup of order {} in a group of order {}",
            span.len(),
            g.order()
        )));
    }
    let genus = riemann_hurwitz(g.order(), v.base_genus(), &v.branch_orders())?;
    Ok(BranchedCover {
        vector: v.clone(),
        genus,
    })
}

/// All elements of all conjugates of the cyclic groups `<γ_i>`.
pub fn stabilizer_union(v: &GeneratingVector) -> ElementSet {
    let g = v.group();
    let mut powers = ElementSet::from_elements(g.order(), [g.identity()]);
    for &c in &v.gammas {
        powers.union_with(&g.cyclic_subgroup(c));
    }
    g.normal_closure_of_set(&powers)
}

/// `dim H¹(C, ℂ)^χ`: `χ(1)·[χ(1)(2b − 2 + r) − Σ_j l_{γ_j}(χ)]` for nontrivial
/// `χ` (the bracket is the multiplicity of `χ`), and `2b` for the trivial
/// character.
pub fn broughton_dimension(
    cover: &BranchedCover,
    table: &CharacterTable,
    chi: usize,
) -> Result<u64> {
    let b = cover.base_genus() as i64;
    if table.is_trivial(chi) {
        return Ok(2 * b as u64);
    }
    let gammas = cover.vector.gammas();
    let d = i64::from(table.degree(chi));
    let fixed: i64 = gammas
        .iter()
        .map(|&s| i64::from(table.trivial_multiplicity_on_cyclic(chi, s)))
        .sum();
    let multiplicity = d * (2 * b - 2 + gammas.len() as i64) - fixed;
    if multiplicity < 0 {
        return Err(Error::Consistency(format!(
            "negative multiplicity {multiplicity} of chi_{chi}"
        )));
    }
    Ok((d * multiplicity) as u64)
}

/// [`broughton_dimension`] for every irreducible character, in table order.
pub fn isotypic_dimensions(cover: &BranchedCover, table: &CharacterTable) -> Result<Vec<u64>> {
    (0..table.len())
        .map(|i| broughton_dimension(cover, table, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_table;

    fn group(spec: &str) -> Arc<GroupTable> {
        Arc::new(GroupTable::parse(spec).unwrap())
    }

    fn vector(g: &Arc<GroupTable>, a: &[usize], b: &[usize], c: &[usize]) -> GeneratingVector {
        GeneratingVector::new(g.clone(), a.to_vec(), b.to_vec(), c.to_vec()).unwrap()
    }

    // In ab:2,2 the index of (x, y) is 2x + y.
    const ALPHA: usize = 2;
    const BETA: usize = 1;

    #[test]
    fn klein_four_cover_has_genus_three() {
        let g = group("ab:2,2");
        let cover = validate_vector(&vector(&g, &[ALPHA], &[BETA], &[ALPHA, ALPHA])).unwrap();
        assert_eq!(cover.genus, 3);
    }

    #[test]
    fn unramified_genus_two_base() {
        let g = group("ab:5");
        let cover = validate_vector(&vector(&g, &[1, 0], &[0, 0], &[])).unwrap();
        assert_eq!(cover.genus, 6);
    }

    #[test]
    fn four_point_double_cover_of_the_line() {
        let g = group("ab:2");
        let cover = validate_vector(&vector(&g, &[], &[], &[1, 1, 1, 1])).unwrap();
        assert_eq!(cover.genus, 1);
    }

    #[test]
    fn invalid_vectors() {
        let g = group("ab:2,2");
        assert!(validate_vector(&vector(&g, &[ALPHA], &[BETA], &[ALPHA, BETA])).is_err());
        assert!(validate_vector(&vector(&g, &[ALPHA], &[0], &[ALPHA, ALPHA])).is_err());
        assert!(validate_vector(&vector(&g, &[ALPHA], &[BETA], &[0])).is_err());
        assert!(GeneratingVector::new(g.clone(), vec![9], vec![0], vec![]).is_err());
        assert!(GeneratingVector::new(g, vec![1], vec![], vec![]).is_err());
    }

    #[test]
    fn stabilizer_unions() {
        let g = group("ab:2,2");
        assert_eq!(
            stabilizer_union(&vector(&g, &[ALPHA], &[BETA], &[])).to_vec(),
            vec![0]
        );
        assert_eq!(
            stabilizer_union(&vector(&g, &[ALPHA], &[BETA], &[ALPHA, ALPHA])).to_vec(),
            vec![0, ALPHA]
        );
        let s3 = group("sym:3");
        let t = (0..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let sigma = stabilizer_union(&vector(&s3, &[], &[], &[t]));
        assert_eq!(sigma.len(), 4);
        assert!((0..6)
            .filter(|&x| s3.element_order(x) == 2)
            .all(|x| sigma.contains(x)));
    }

    #[test]
    fn broughton_examples() {
        let g = group("ab:2,2");
        let table = character_table(&g).unwrap();
        let cover = validate_vector(&vector(&g, &[ALPHA], &[BETA], &[ALPHA, ALPHA])).unwrap();
        let find = |a: u32, b: u32| {
            (0..4)
                .find(|&i| table.value(i, ALPHA)[0] == a && table.value(i, BETA)[0] == b)
                .unwrap()
        };
        assert_eq!(broughton_dimension(&cover, &table, 0).unwrap(), 2);
        assert_eq!(broughton_dimension(&cover, &table, find(0, 1)).unwrap(), 2);
        assert_eq!(broughton_dimension(&cover, &table, find(1, 0)).unwrap(), 0);
        let total: u64 = isotypic_dimensions(&cover, &table).unwrap().iter().sum();
        assert_eq!(total, 2 * cover.genus);
    }

    #[test]
    fn record_round_trip() {
        let g = group("ab:2,2");
        let v = vector(&g, &[ALPHA], &[BETA], &[ALPHA, ALPHA]);
        let json = serde_json::to_string(&v.record()).unwrap();
        assert_eq!(
            json,
            r#"{"group":"ab:2,2","b":1,"alphas":[2],"betas":[1],"gammas":[2,2]}"#
        );
        let back: VectorRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(GeneratingVector::from_record(g, &back).unwrap(), v);
    }
}
