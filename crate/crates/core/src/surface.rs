//! Unmixed surfaces `S = (C × D)/G` with `G` acting diagonally and freely.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::characters::{character_table, CharacterTable};
use crate::covering::{
    isotypic_dimensions, stabilizer_union, validate_vector, BranchedCover, GeneratingVector,
    VectorRecord,
};
use crate::error::{Error, Result};
use crate::group::{build_group, BuildOptions, ElementSet, GroupSpec, GroupTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub q: u64,
    pub pg: i64,
    pub chi: i64,
    #[serde(rename = "K2")]
    pub k2: i64,
    #[serde(rename = "e")]
    pub euler: i64,
    pub b1: u64,
    pub b2: u64,
    /// `dim (H¹(C)^χ ⊗ H¹(D)^χ̄)^{Δ_G}` per character, in table order.
    pub h2_summands: Vec<u64>,
}

/// One cover of a surface together with the data every later step needs.
#[derive(Clone, Debug)]
pub struct Factor {
    pub cover: BranchedCover,
    /// Union of the conjugates of the cyclic groups `<γ_i>`.
    pub stabilizers: ElementSet,
    /// `dim H¹(curve, ℂ)^χ` per character.
    pub dimensions: Vec<u64>,
}

impl Factor {
    pub fn new(cover: BranchedCover, table: &CharacterTable) -> Result<Self> {
        Ok(Factor {
            stabilizers: stabilizer_union(&cover.vector),
            dimensions: isotypic_dimensions(&cover, table)?,
            cover,
        })
    }

    pub fn genus(&self) -> u64 {
        self.cover.genus
    }
}

#[derive(Clone, Debug)]
pub struct UnmixedSurface {
    table: CharacterTable,
    c: Arc<Factor>,
    d: Arc<Factor>,
    invariants: SurfaceInvariants,
}

/// Validates both vectors and builds the surface.
pub fn build_surface(vc: &GeneratingVector, vd: &GeneratingVector) -> Result<UnmixedSurface> {
    if vc.group().spec() != vd.group().spec() || vc.group().order() != vd.group().order() {
        return Err(Error::Validation(format!(
            "vectors are over different groups {} and {}",
            vc.group().spec(),
            vd.group().spec()
        )));
    }
    let table = character_table(vc.group())?;
    let c = Factor::new(validate_vector(vc)?, &table)?;
    let d = Factor::new(validate_vector(vd)?, &table)?;
    UnmixedSurface::from_factors(table, Arc::new(c), Arc::new(d))
}

impl UnmixedSurface {
    /// Checks genus and freeness, then computes all invariants.
    pub fn from_factors(table: CharacterTable, c: Arc<Factor>, d: Arc<Factor>) -> Result<Self> {
        for (name, f) in [("C", &c), ("D", &d)] {
            if f.genus() < 2 {
                return Err(Error::Domain(format!("g({name}) = {} < 2", f.genus())));
            }
        }
        let g = table.group();
        if let Some(w) = c
            .stabilizers
            .intersection(&d.stabilizers)
            .iter()
            .find(|&x| x != g.identity())
        {
            return Err(Error::NotFree {
                witness: w,
                label: g.label(w).to_string(),
            });
        }
        let invariants = h2_decomposition(&table, &c, &d)?;
        Ok(UnmixedSurface {
            table,
            c,
            d,
            invariants,
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        self.table.group()
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn factor_c(&self) -> &Factor {
        &self.c
    }

    pub fn factor_d(&self) -> &Factor {
        &self.d
    }

    pub fn cover_c(&self) -> &BranchedCover {
        &self.c.cover
    }

    pub fn cover_d(&self) -> &BranchedCover {
        &self.d.cover
    }

    pub fn invariants(&self) -> &SurfaceInvariants {
        &self.invariants
    }

    /// The surface with the two factors exchanged.
    pub fn swapped(&self) -> Result<Self> {
        Self::from_factors(self.table.clone(), self.d.clone(), self.c.clone())
    }

    pub fn record(&self) -> SurfaceRecord {
        SurfaceRecord {
            group: self.group().spec().to_string(),
            v_c: self.c.cover.vector.record(),
            v_d: self.d.cover.vector.record(),
            g_c: self.c.genus(),
            g_d: self.d.genus(),
            invariants: self.invariants.clone(),
        }
    }
}

/// Numerical invariants and the decomposition
/// `H² = W ⊕ ⊕_χ (H¹(C)^χ ⊗ H¹(D)^χ̄)^{Δ_G}` with `dim W = 2`. The
/// invariant part of `χ^{⊕a} ⊗ χ̄^{⊕b}` has dimension `ab`, and the isotypic
/// dimensions are `a·χ(1)` and `b·χ(1)`.
pub fn h2_decomposition(
    table: &CharacterTable,
    c: &Factor,
    d: &Factor,
) -> Result<SurfaceInvariants> {
    let n = table.group().order() as i64;
    let numerator = (c.genus() as i64 - 1) * (d.genus() as i64 - 1);
    if numerator % n != 0 {
        return Err(Error::Consistency(format!(
            "|G| = {n} does not divide (g(C) - 1)(g(D) - 1) = {numerator}"
        )));
    }
    let chi = numerator / n;
    let q = (c.cover.base_genus() + d.cover.base_genus()) as u64;

    let mut h2_summands = Vec::with_capacity(table.len());
    for i in 0..table.len() {
        let deg2 = u64::from(table.degree(i)).pow(2);
        let product = c.dimensions[i] * d.dimensions[table.conjugate(i)];
        if !product.is_multiple_of(deg2) {
            return Err(Error::Consistency(format!(
                "summand of chi_{i} is not integral"
            )));
        }
        h2_summands.push(product / deg2);
    }
    let b2 = 2 + h2_summands.iter().sum::<u64>();
    let euler = 4 * chi;
    let b1 = 2 * q;
    if b2 as i64 != euler - 2 + 2 * b1 as i64 {
        return Err(Error::Consistency(format!(
            "b2 = {b2} from characters but e - 2 + 2 b1 = {}",
            euler - 2 + 2 * b1 as i64
        )));
    }
    Ok(SurfaceInvariants {
        q,
        pg: chi + q as i64 - 1,
        chi,
        k2: 8 * chi,
        euler,
        b1,
        b2,
        h2_summands,
    })
}

/// JSON form of a surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceRecord {
    pub group: String,
    #[serde(rename = "vC")]
    pub v_c: VectorRecord,
    #[serde(rename = "vD")]
    pub v_d: VectorRecord,
    #[serde(rename = "gC")]
    pub g_c: u64,
    #[serde(rename = "gD")]
    pub g_d: u64,
    #[serde(flatten)]
    pub invariants: SurfaceInvariants,
}

/// The two explicit families with an involution acting trivially on
/// cohomology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `G = Z_{2m} ⊕ Z_{2mn}`, `α = (1,0)`, `β = (0,1)`,
    /// `V = (α, β; α^m, ..., α^m)`, `V′ = (α, β; β^{mn}, ..., β^{mn})`.
    #[serde(rename = "z2m_z2mn")]
    Z2mZ2mn,
    /// `G = Z_2 ⊕ Z_{2m} ⊕ Z_{2mn}`, `λ, μ, ν` the standard generators,
    /// `V = (μ, ν; λ, ..., λ)`, `V′ = (μ, ν; λμ^m, ..., λμ^m)`.
    #[serde(rename = "z2_z2m_z2mn")]
    Z2Z2mZ2mn,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z2m_z2mn" | "1" => Ok(Family::Z2mZ2mn),
            "z2_z2m_z2mn" | "2" => Ok(Family::Z2Z2mZ2mn),
            _ => Err(Error::parse(s, "expected z2m_z2mn or z2_z2m_z2mn")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Z2mZ2mn => "z2m_z2mn",
            Family::Z2Z2mZ2mn => "z2_z2m_z2mn",
        })
    }
}

/// A surface from one of the explicit families, with its branch elements
/// `γ` (of `C`) and `γ′` (of `D`).
#[derive(Clone, Debug)]
pub struct ExampleSurface {
    pub surface: UnmixedSurface,
    pub gamma: usize,
    pub gamma_prime: usize,
}

impl ExampleSurface {
    /// `γγ′`, the central element corresponding to the involution of `S`
    /// induced by `(γ, γ′)`.
    pub fn involution(&self) -> usize {
        self.surface.group().mul(self.gamma, self.gamma_prime)
    }
}

pub fn example_surface(
    family: Family,
    m: usize,
    n: usize,
    k: usize,
    l: usize,
) -> Result<ExampleSurface> {
    example_surface_with(family, m, n, k, l, &BuildOptions::default())
}

pub fn example_surface_with(
    family: Family,
    m: usize,
    n: usize,
    k: usize,
    l: usize,
    opts: &BuildOptions,
) -> Result<ExampleSurface> {
    if [m, n, k, l].contains(&0) {
        return Err(Error::Domain("family parameters must be positive".into()));
    }
    let factors = match family {
        Family::Z2mZ2mn => vec![2 * m, 2 * m * n],
        Family::Z2Z2mZ2mn => vec![2, 2 * m, 2 * m * n],
    };
    let group = Arc::new(build_group(&GroupSpec::Abelian(factors.clone()), opts)?);
    // Mixed-radix index of a coordinate vector, first coordinate most significant.
    let at = |c: &[usize]| {
        c.iter()
            .zip(&factors)
            .fold(0, |acc, (&x, &d)| acc * d + x % d)
    };
    let (handles, gamma, gamma_prime) = match family {
        Family::Z2mZ2mn => ((at(&[1, 0]), at(&[0, 1])), at(&[m, 0]), at(&[0, m * n])),
        Family::Z2Z2mZ2mn => (
            (at(&[0, 1, 0]), at(&[0, 0, 1])),
            at(&[1, 0, 0]),
            at(&[1, m, 0]),
        ),
    };
    let vector = |x: usize, count: usize| {
        GeneratingVector::new(
            group.clone(),
            vec![handles.0],
            vec![handles.1],
            vec![x; count],
        )
    };
    let vc = vector(gamma, 2 * k)?;
    let vd = vector(gamma_prime, 2 * l)?;
    let meet = group
        .cyclic_subgroup(gamma)
        .intersection(&group.cyclic_subgroup(gamma_prime));
    if meet.len() != 1 {
        return Err(Error::Consistency(
            "<γ> and <γ′> intersect nontrivially".into(),
        ));
    }
    Ok(ExampleSurface {
        surface: build_surface(&vc, &vd)?,
        gamma,
        gamma_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALPHA: usize = 2;
    const BETA: usize = 1;
    const AB: usize = 3;

    fn klein(gc: &[usize], gd: &[usize]) -> Result<UnmixedSurface> {
        let g = Arc::new(GroupTable::parse("ab:2,2").unwrap());
        let v = |gs: &[usize]| {
            GeneratingVector::new(g.clone(), vec![ALPHA], vec![BETA], gs.to_vec()).unwrap()
        };
        build_surface(&v(gc), &v(gd))
    }

    #[test]
    fn smallest_example() {
        let s = klein(&[ALPHA, ALPHA], &[BETA, BETA]).unwrap();
        let inv = s.invariants();
        assert_eq!((inv.q, inv.chi, inv.pg, inv.k2, inv.b2), (2, 1, 2, 8, 10));
        let mut summands = inv.h2_summands.clone();
        summands.sort();
        assert_eq!(summands, vec![0, 0, 4, 4]);
        assert_eq!(inv.h2_summands[0], 4);
    }

    #[test]
    fn shared_stabilizer_is_rejected() {
        let err = klein(&[ALPHA, ALPHA], &[ALPHA, ALPHA]).unwrap_err();
        assert_eq!(
            err,
            Error::NotFree {
                witness: ALPHA,
                label: "(1,0)".into()
            }
        );
    }

    #[test]
    fn diagonal_variant() {
        let s = klein(&[ALPHA, ALPHA], &[AB, AB]).unwrap();
        assert_eq!((s.invariants().q, s.invariants().chi), (2, 1));
    }

    #[test]
    fn product_of_genus_two_curves() {
        let g = Arc::new(GroupTable::parse("ab:1").unwrap());
        let v = GeneratingVector::new(g, vec![0, 0], vec![0, 0], vec![]).unwrap();
        let s = build_surface(&v, &v).unwrap();
        let inv = s.invariants();
        assert_eq!((inv.b2, inv.euler, inv.b1), (18, 4, 8));
    }

    #[test]
    fn swapping_conjugates_summands() {
        let s = example_surface(Family::Z2mZ2mn, 2, 1, 1, 2)
            .unwrap()
            .surface;
        let t = s.swapped().unwrap();
        let (a, b) = (s.invariants(), t.invariants());
        assert_eq!((a.chi, a.k2, a.b2, a.pg), (b.chi, b.k2, b.b2, b.pg));
        for i in 0..s.table().len() {
            assert_eq!(a.h2_summands[i], b.h2_summands[s.table().conjugate(i)]);
        }
    }

    #[test]
    fn family_invariants() {
        let one = example_surface(Family::Z2mZ2mn, 1, 1, 1, 1).unwrap();
        let inv = one.surface.invariants();
        assert_eq!((inv.q, inv.pg, inv.k2), (2, 2, 8));
        let two = example_surface(Family::Z2mZ2mn, 2, 1, 1, 1).unwrap();
        assert_eq!(
            (two.surface.cover_c().genus, two.surface.cover_d().genus),
            (9, 9)
        );
        assert_eq!(
            (two.surface.invariants().chi, two.surface.invariants().k2),
            (4, 32)
        );
        let other = example_surface(Family::Z2Z2mZ2mn, 1, 1, 1, 1).unwrap();
        assert_eq!(
            (other.surface.cover_c().genus, other.surface.cover_d().genus),
            (5, 5)
        );
        assert_eq!(
            (
                other.surface.invariants().chi,
                other.surface.invariants().k2
            ),
            (2, 16)
        );
    }

    #[test]
    fn family_respects_order_cap() {
        assert!(matches!(
            example_surface(Family::Z2Z2mZ2mn, 4, 2, 1, 1),
            Err(Error::Size { .. })
        ));
    }

    #[test]
    fn record_shape() {
        let s = klein(&[ALPHA, ALPHA], &[BETA, BETA]).unwrap();
        let v = serde_json::to_value(s.record()).unwrap();
        for key in [
            "group",
            "vC",
            "vD",
            "q",
            "pg",
            "chi",
            "K2",
            "e",
            "b1",
            "b2",
            "h2_summands",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
