//! Arithmetic and linear algebra over a prime field `F_p` with `p < 2^32`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(is_prime(p) && p < (1 << 32));
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    /// A generator of the multiplicative group.
    pub fn primitive_root(&self) -> u64 {
        let factors: Vec<u64> = crate::group::factorize((self.p - 1) as usize)
            .into_iter()
            .map(|(q, _)| q as u64)
            .collect();
        (2..self.p)
            .find(|&g| factors.iter().all(|&q| self.pow(g, (self.p - 1) / q) != 1))
            .unwrap_or(1)
    }

    /// A primitive `e`-th root of unity; `e` must divide `p - 1`.
    pub fn root_of_unity(&self, e: u64) -> u64 {
        assert_eq!((self.p - 1) % e, 0);
        self.pow(self.primitive_root(), (self.p - 1) / e)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&self, m: &mut [Vec<u64>]) -> Vec<usize> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, pr);
            let inv = self.inv(m[r][c]);
            for x in m[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..rows {
                if i != r && m[i][c] != 0 {
                    let f = m[i][c];
                    for j in c..cols {
                        let t = self.mul(f, m[r][j]);
                        m[i][j] = self.sub(m[i][j], t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn nullspace(&self, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let cols = a.first().map_or(0, Vec::len);
        let mut m = a.to_vec();
        let pivots = self.rref(&mut m);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; cols];
                v[f] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = self.sub(0, m[row][f]);
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial `det(xI - A)`, lowest degree first, via
    /// reduction to upper Hessenberg form.
    pub fn charpoly(&self, a: &[Vec<u64>]) -> Vec<u64> {
        let n = a.len();
        let mut h = a.to_vec();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
                continue;
            };
            if i != m {
                h.swap(i, m);
                for row in h.iter_mut() {
                    row.swap(i, m);
                }
            }
            let t = self.inv(h[m][m - 1]);
            for i in (m + 1)..n {
                let u = self.mul(h[i][m - 1], t);
                if u == 0 {
                    continue;
                }
                for j in 0..n {
                    let s = self.mul(u, h[m][j]);
                    h[i][j] = self.sub(h[i][j], s);
                }
                for row in h.iter_mut() {
                    let s = self.mul(u, row[i]);
                    row[m] = self.add(row[m], s);
                }
            }
        }
        // polys[k] = charpoly of the leading k×k block
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for m in 0..n {
            let prev = &polys[m];
            // (x - h[m][m]) * prev
            let mut next = vec![0u64; m + 2];
            for (k, &c) in prev.iter().enumerate() {
                next[k + 1] = self.add(next[k + 1], c);
                next[k] = self.sub(next[k], self.mul(h[m][m], c));
            }
            let mut prod = 1u64;
            for i in (0..m).rev() {
                prod = self.mul(prod, h[i + 1][i]);
                let coef = self.mul(h[i][m], prod);
                if coef == 0 {
                    continue;
                }
                for (k, &c) in polys[i].iter().enumerate() {
                    next[k] = self.sub(next[k], self.mul(coef, c));
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }

    pub fn eval(&self, poly: &[u64], x: u64) -> u64 {
        poly.iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `p ≡ 1 (mod e)` with `lower < p <= bound`.
pub fn prime_congruent_one(e: usize, lower: u64, bound: u64) -> Result<u64> {
    let e64 = e as u64;
    let mut p = (lower / e64) * e64 + 1;
    while p <= bound {
        if p > lower && is_prime(p) {
            return Ok(p);
        }
        p += e64;
    }
    Err(Error::NoPrime {
        exponent: e,
        lower,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det(f: &PrimeField, a: &[Vec<u64>]) -> u64 {
        // Laplace expansion; only used on tiny matrices.
        let n = a.len();
        if n == 0 {
            return 1;
        }
        let mut acc = 0;
        for j in 0..n {
            let minor: Vec<Vec<u64>> = a[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let term = f.mul(a[0][j], det(f, &minor));
            acc = if j % 2 == 0 {
                f.add(acc, term)
            } else {
                f.sub(acc, term)
            };
        }
        acc
    }

    #[test]
    fn prime_selection() {
        assert_eq!(prime_congruent_one(2, 12, 1000).unwrap(), 13);
        assert_eq!(prime_congruent_one(6, 12, 1000).unwrap(), 13);
        assert_eq!(prime_congruent_one(4, 16, 1000).unwrap(), 17);
        assert!(prime_congruent_one(1000, 10, 20).is_err());
    }

    #[test]
    fn roots_of_unity() {
        let f = PrimeField::new(13);
        let z = f.root_of_unity(6);
        assert_eq!(f.pow(z, 6), 1);
        assert!((1..6).all(|k| f.pow(z, k) != 1));
    }

    proptest! {
        // det(xI - A) evaluated at random points agrees with the Hessenberg charpoly.
        #[test]
        fn charpoly_matches_determinant(n in 1usize..6, entries in prop::collection::vec(0u64..101, 36), x in 0u64..101) {
            let f = PrimeField::new(101);
            let a: Vec<Vec<u64>> = (0..n).map(|i| entries[i * 6..i * 6 + n].to_vec()).collect();
            let shifted: Vec<Vec<u64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { f.sub(x, a[i][j]) } else { f.sub(0, a[i][j]) }).collect())
                .collect();
            prop_assert_eq!(f.eval(&f.charpoly(&a), x), det(&f, &shifted));
        }

        #[test]
        fn nullspace_vectors_are_annihilated(rows in 1usize..5, cols in 1usize..6, entries in prop::collection::vec(0u64..7, 30)) {
            let f = PrimeField::new(7);
            let a: Vec<Vec<u64>> = (0..rows).map(|i| entries[i * 6..i * 6 + cols].to_vec()).collect();
            let mut m = a.clone();
            let rank = f.rref(&mut m).len();
            let null = f.nullspace(&a);
            prop_assert_eq!(null.len() + rank, cols);
            for v in &null {
                for row in &a {
                    let dot = row.iter().zip(v).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
                    prop_assert_eq!(dot, 0);
                }
            }
        }
    }
}
