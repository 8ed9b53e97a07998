//! Dixon's method: simultaneous eigenvectors of the class matrices over a
//! prime field `F_p` with `p ≡ 1 (mod e)`, lifted to eigenvalue
//! multiplicities.

use super::Character;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::modular::{prime_congruent_one, PrimeField};

#[derive(Clone, Debug)]
pub struct DixonOptions {
    /// Largest prime tried before giving up.
    pub prime_bound: u64,
    /// How many successive primes to try when a splitting step fails.
    pub max_attempts: usize,
}

impl Default for DixonOptions {
    fn default() -> Self {
        DixonOptions {
            prime_bound: 1 << 24,
            max_attempts: 8,
        }
    }
}

pub(super) fn dixon_characters(g: &GroupTable, opts: &DixonOptions) -> Result<Vec<Character>> {
    let consts = class_constants(g);
    let mut lower = 2 * g.order() as u64;
    let mut last_err = None;
    for _ in 0..opts.max_attempts {
        let p = prime_congruent_one(g.exponent(), lower, opts.prime_bound)?;
        match characters_mod_p(g, &consts, PrimeField::new(p)) {
            Ok(chars) => return Ok(chars),
            Err(e) => last_err = Some(e),
        }
        lower = p;
    }
    Err(last_err.unwrap_or_else(|| Error::Consistency("no prime attempted".into())))
}

/// `a[i][j][l] = #{x : x ∈ C_i, x⁻¹z ∈ C_j}` for a fixed `z ∈ C_l`.
fn class_constants(g: &GroupTable) -> Vec<Vec<Vec<u64>>> {
    let k = g.conjugacy_classes().len();
    let mut a = vec![vec![vec![0u64; k]; k]; k];
    for (l, class) in g.conjugacy_classes().iter().enumerate() {
        let z = class.representative;
        for x in 0..g.order() {
            let i = g.class_of(x);
            let j = g.class_of(g.mul(g.inv(x), z));
            a[i][j][l] += 1;
        }
    }
    a
}

/// Row-reduced basis of a subspace of `F_p^k`.
struct Subspace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn new(f: &PrimeField, mut rows: Vec<Vec<u64>>) -> Self {
        let pivots = f.rref(&mut rows);
        rows.truncate(pivots.len());
        Subspace { rows, pivots }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

fn characters_mod_p(g: &GroupTable, a: &[Vec<Vec<u64>>], f: PrimeField) -> Result<Vec<Character>> {
    let k = a.len();
    let identity: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut pending = vec![Subspace::new(&f, identity)];
    let mut lines: Vec<Vec<u64>> = Vec::new();

    while let Some(space) = pending.pop() {
        if space.dim() == 1 {
            lines.push(space.rows[0].clone());
            continue;
        }
        let mut split = None;
        for m in a.iter().skip(1) {
            let parts = split_by(&f, m, &space)?;
            if parts.len() > 1 {
                split = Some(parts);
                break;
            }
        }
        match split {
            Some(parts) => pending.extend(parts),
            None => {
                return Err(Error::Consistency(format!(
                    "class matrices do not split a {}-dimensional space mod {}",
                    space.dim(),
                    f.modulus()
                )))
            }
        }
    }

    let classes = g.conjugacy_classes();
    let sizes: Vec<u64> = classes.iter().map(|c| c.size() as u64).collect();
    let inverse_class: Vec<usize> = classes
        .iter()
        .map(|c| g.class_of(g.inv(c.representative)))
        .collect();
    let e = g.exponent();
    let z = f.root_of_unity(e as u64);
    let e_inv = f.inv(e as u64 % f.modulus());
    let n = g.order() as u64;

    lines
        .into_iter()
        .map(|v| {
            let s = f.inv(v[0]);
            let omega: Vec<u64> = v.iter().map(|&x| f.mul(x, s)).collect();
            // Σ_j ω_j ω_j' / |C_j| = |G| / χ(1)²
            let norm = (0..k).fold(0, |acc, j| {
                let t = f.mul(f.mul(omega[j], omega[inverse_class[j]]), f.inv(sizes[j]));
                f.add(acc, t)
            });
            if norm == 0 {
                return Err(Error::Consistency("degenerate eigenvector".into()));
            }
            let d2 = f.mul(n % f.modulus(), f.inv(norm));
            let degree = (1..=n)
                .take_while(|d| d * d <= n)
                .find(|d| d * d % f.modulus() == d2)
                .ok_or_else(|| Error::Consistency("no integral degree".into()))?;
            let chi: Vec<u64> = (0..k)
                .map(|j| f.mul(f.mul(omega[j], degree), f.inv(sizes[j])))
                .collect();
            let values = classes
                .iter()
                .map(|c| multiplicities(g, &f, &chi, c.representative, z, e_inv, degree))
                .collect::<Result<Vec<_>>>()?;
            Ok(Character {
                degree: degree as u32,
                values,
            })
        })
        .collect()
}

/// Eigenspaces of `m` restricted to `space` (which `m` preserves, acting on
/// column vectors). A single part means `m` is scalar on `space`.
fn split_by(f: &PrimeField, m: &[Vec<u64>], space: &Subspace) -> Result<Vec<Subspace>> {
    let d = space.dim();
    let k = m.len();
    // images[r] = m · basis_r
    let images: Vec<Vec<u64>> = space
        .rows
        .iter()
        .map(|b| {
            (0..k)
                .map(|j| (0..k).fold(0, |acc, l| f.add(acc, f.mul(m[j][l], b[l]))))
                .collect()
        })
        .collect();
    // restricted[s][r]: coefficient of basis_s in m · basis_r
    let restricted: Vec<Vec<u64>> = (0..d)
        .map(|s| (0..d).map(|r| images[r][space.pivots[s]]).collect())
        .collect();
    let poly = f.charpoly(&restricted);
    let roots: Vec<u64> = (0..f.modulus())
        .filter(|&x| f.eval(&poly, x) == 0)
        .collect();
    if roots.len() <= 1 {
        return Ok(vec![]);
    }
    let mut parts = Vec::with_capacity(roots.len());
    let mut total = 0;
    for lambda in roots {
        let shifted: Vec<Vec<u64>> = (0..d)
            .map(|s| {
                (0..d)
                    .map(|r| {
                        let x = restricted[s][r];
                        if s == r {
                            f.sub(x, lambda)
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        let null = f.nullspace(&shifted);
        let vectors: Vec<Vec<u64>> = null
            .iter()
            .map(|c| {
                (0..k)
                    .map(|j| (0..d).fold(0, |acc, r| f.add(acc, f.mul(c[r], space.rows[r][j]))))
                    .collect()
            })
            .collect();
        total += vectors.len();
        parts.push(Subspace::new(f, vectors));
    }
    if total != d {
        return Err(Error::Consistency(format!(
            "class matrix not diagonalizable mod {}",
            f.modulus()
        )));
    }
    Ok(parts)
}

/// `m_k = e⁻¹ Σ_l χ(g^l) z^{-lk}`, lifted from `F_p` to `[0, degree]`.
fn multiplicities(
    g: &GroupTable,
    f: &PrimeField,
    chi: &[u64],
    rep: usize,
    z: u64,
    e_inv: u64,
    degree: u64,
) -> Result<Vec<u32>> {
    let e = g.exponent();
    let powers: Vec<u64> = (0..e).map(|l| chi[g.class_of(g.pow(rep, l))]).collect();
    let z_inv = f.inv(z);
    (0..e)
        .map(|k| {
            let step = f.pow(z_inv, k as u64);
            let mut acc = 0;
            let mut w = 1;
            for &c in &powers {
                acc = f.add(acc, f.mul(c, w));
                w = f.mul(w, step);
            }
            let m = f.mul(acc, e_inv);
            if m > degree {
                Err(Error::Consistency(format!(
                    "multiplicity {m} exceeds degree {degree} mod {}",
                    f.modulus()
                )))
            } else {
                Ok(m as u32)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_constants_count_all_products() {
        let g = GroupTable::parse("sym:4").unwrap();
        let a = class_constants(&g);
        let k = a.len();
        for l in 0..k {
            let total: u64 = (0..k)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| a[i][j][l])
                .sum();
            assert_eq!(total, 24);
        }
    }

    #[test]
    fn quaternion_degrees() {
        let g = GroupTable::parse("quat:8").unwrap();
        let mut degrees: Vec<u32> = dixon_characters(&g, &DixonOptions::default())
            .unwrap()
            .iter()
            .map(|c| c.degree)
            .collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn tight_prime_bound_reports_no_prime() {
        let g = GroupTable::parse("sym:3").unwrap();
        let opts = DixonOptions {
            prime_bound: 12,
            max_attempts: 1,
        };
        assert!(matches!(
            dixon_characters(&g, &opts),
            Err(Error::NoPrime { .. })
        ));
    }
}
