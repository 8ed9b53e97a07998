//! Integer combinations of `e`-th roots of unity.
//!
//! A [`CycloInt`] stores coefficients on `1, ζ, ..., ζ^(e-1)` with
//! `ζ = exp(2πi/e)`, i.e. an element of the group ring `Z[x]/(x^e - 1)`. That
//! representation is not unique (for `e = 2`, `1 + ζ = 0`), so comparisons go
//! through [`CycloInt::canonical`], the remainder modulo the cyclotomic
//! polynomial `Φ_e`, which is a coordinate vector in the integral power basis
//! of `Z[ζ]`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1);
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = divide_exact(&poly, &cyclotomic_polynomial(d));
    }
    let poly = Arc::new(poly);
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

/// Quotient of `num` by the monic `den`; the remainder must be zero.
fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn totient(n: usize) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

#[derive(Clone, Debug)]
pub struct CycloInt {
    e: usize,
    coeffs: Vec<i64>,
}

impl CycloInt {
    pub fn zero(e: usize) -> Self {
        CycloInt {
            e,
            coeffs: vec![0; e],
        }
    }

    pub fn integer(e: usize, n: i64) -> Self {
        let mut z = Self::zero(e);
        z.coeffs[0] = n;
        z
    }

    /// `ζ_e^k`
    pub fn root(e: usize, k: usize) -> Self {
        let mut z = Self::zero(e);
        z.coeffs[k % e] = 1;
        z
    }

    /// `Σ_k m_k ζ^k`; the length of `mults` is the root order.
    pub fn from_multiplicities(mults: &[u32]) -> Self {
        CycloInt {
            e: mults.len(),
            coeffs: mults.iter().map(|&m| i64::from(m)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.e
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coeffs
    }

    /// The same number written over `e_new`-th roots; `e_new` must be a
    /// multiple of the current order.
    pub fn lift(&self, e_new: usize) -> Self {
        assert_eq!(
            e_new % self.e,
            0,
            "cannot lift order {} to {}",
            self.e,
            e_new
        );
        let step = e_new / self.e;
        let mut out = Self::zero(e_new);
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[k * step] = c;
        }
        out
    }

    /// Complex conjugate: `ζ^k -> ζ^(-k)`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.e);
        for (k, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[(self.e - k) % self.e] += c;
        }
        out
    }

    pub fn scale(&self, s: i64) -> Self {
        CycloInt {
            e: self.e,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Coordinates in the basis `1, ζ, ..., ζ^(φ(e)-1)`.
    pub fn canonical(&self) -> Vec<i64> {
        let phi = cyclotomic_polynomial(self.e);
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        for i in (deg..rem.len()).rev() {
            let c = rem[i];
            if c != 0 {
                for (j, &d) in phi.iter().enumerate() {
                    rem[i - deg + j] -= c * d;
                }
            }
        }
        rem.truncate(deg);
        rem
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().iter().all(|&c| c == 0)
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        let c = self.canonical();
        if c.iter().skip(1).all(|&x| x == 0) {
            Some(c[0])
        } else {
            None
        }
    }

    /// Exact division by a rational integer, performed in canonical
    /// coordinates. `None` if the quotient is not in `Z[ζ]`.
    pub fn div_exact(&self, d: i64) -> Option<Self> {
        let c = self.canonical();
        if c.iter().any(|x| x % d != 0) {
            return None;
        }
        let mut out = Self::zero(self.e);
        for (slot, x) in out.coeffs.iter_mut().zip(c) {
            *slot = x / d;
        }
        Some(out)
    }

    /// Dimension of `Q(ζ_e)` over `Q`.
    pub fn degree_of_field(&self) -> usize {
        totient(self.e)
    }
}

impl PartialEq for CycloInt {
    fn eq(&self, other: &Self) -> bool {
        assert_eq!(
            self.e, other.e,
            "comparing values over different root orders"
        );
        (self - other).is_zero()
    }
}

impl Eq for CycloInt {}

impl<'a> Add<&'a CycloInt> for &'a CycloInt {
    type Output = CycloInt;
    fn add(self, rhs: &CycloInt) -> CycloInt {
        assert_eq!(self.e, rhs.e);
        CycloInt {
            e: self.e,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a CycloInt> for &'a CycloInt {
    type Output = CycloInt;
    fn sub(self, rhs: &CycloInt) -> CycloInt {
        assert_eq!(self.e, rhs.e);
        CycloInt {
            e: self.e,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CycloInt {
    type Output = CycloInt;
    fn neg(self) -> CycloInt {
        self.scale(-1)
    }
}

impl<'a> Mul<&'a CycloInt> for &'a CycloInt {
    type Output = CycloInt;
    fn mul(self, rhs: &CycloInt) -> CycloInt {
        assert_eq!(self.e, rhs.e);
        let e = self.e;
        let mut out = CycloInt::zero(e);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out.coeffs[(i + j) % e] += a * b;
            }
        }
        out
    }
}

impl fmt::Display for CycloInt {
    /// Canonical form as a sum of powers of `z<e>`, e.g. `1 - z3^1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        let mut first = true;
        for (k, &x) in c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let sign = if x < 0 { "-" } else { "+" };
            let mag = x.unsigned_abs();
            if first {
                if x < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (k, mag) {
                (0, _) => write!(f, "{mag}")?,
                (_, 1) => write!(f, "z{}^{k}", self.e)?,
                _ => write!(f, "{mag}*z{}^{k}", self.e)?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(16), 8);
        assert_eq!(totient(30), 8);
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for e in 1..=24 {
            let s = (0..e).fold(CycloInt::zero(e), |acc, k| &acc + &CycloInt::root(e, k));
            if e == 1 {
                assert_eq!(s.as_integer(), Some(1));
            } else {
                assert!(s.is_zero(), "e = {e}");
            }
        }
    }

    #[test]
    fn display() {
        let x = &CycloInt::integer(3, 1) - &CycloInt::root(3, 1);
        assert_eq!(x.to_string(), "1 - z3^1");
        assert_eq!(CycloInt::root(2, 1).to_string(), "-1");
        assert_eq!(CycloInt::zero(5).to_string(), "0");
    }

    fn numeric(z: &CycloInt) -> (f64, f64) {
        let e = z.order() as f64;
        z.coefficients()
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (k, &c)| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / e;
                (re + c as f64 * t.cos(), im + c as f64 * t.sin())
            })
    }

    proptest! {
        // Canonical reduction preserves the complex value.
        #[test]
        fn canonical_form_preserves_value(e in 1usize..20, raw in prop::collection::vec(-5i64..5, 20)) {
            let z = CycloInt { e, coeffs: raw[..e].to_vec() };
            let mut c = z.canonical();
            c.resize(e, 0);
            let w = CycloInt { e, coeffs: c };
            let (a, b) = (numeric(&z), numeric(&w));
            prop_assert!((a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9);
        }

        #[test]
        fn multiplication_matches_complex_product(e in 1usize..13, x in prop::collection::vec(-3i64..3, 12), y in prop::collection::vec(-3i64..3, 12)) {
            let a = CycloInt { e, coeffs: x[..e].to_vec() };
            let b = CycloInt { e, coeffs: y[..e].to_vec() };
            let (ar, ai) = numeric(&a);
            let (br, bi) = numeric(&b);
            let (pr, pi) = numeric(&(&a * &b));
            prop_assert!((pr - (ar * br - ai * bi)).abs() < 1e-8);
            prop_assert!((pi - (ar * bi + ai * br)).abs() < 1e-8);
        }
    }
}
