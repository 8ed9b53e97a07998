use std::collections::{BTreeSet, HashMap};
use std::fs;

use serde::Deserialize;

use super::spec::{GroupSpec, Permutation};
use super::GroupTable;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Largest group order accepted by any builder.
    pub order_cap: usize,
    /// Seed for sampled associativity checks on tables above 256 elements.
    pub seed: u64,
    pub associativity_samples: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            order_cap: 128,
            seed: 0,
            associativity_samples: 200_000,
        }
    }
}

impl GroupTable {
    /// Parses and builds with default options.
    pub fn parse(spec: &str) -> Result<GroupTable> {
        build_group(&spec.parse()?, &BuildOptions::default())
    }
}

pub fn build_group(spec: &GroupSpec, opts: &BuildOptions) -> Result<GroupTable> {
    let name = spec.to_string();
    let check_cap = |order: usize| {
        if order > opts.order_cap {
            Err(Error::Size {
                order,
                cap: opts.order_cap,
            })
        } else {
            Ok(())
        }
    };
    match spec {
        GroupSpec::Abelian(factors) => {
            let order = factors
                .iter()
                .try_fold(1usize, |acc, &d| acc.checked_mul(d))
                .unwrap_or(usize::MAX);
            check_cap(order)?;
            Ok(abelian(name, factors))
        }
        GroupSpec::Dihedral(n) => {
            check_cap(2 * n)?;
            Ok(dihedral(name, *n))
        }
        GroupSpec::Quaternion(order) => {
            check_cap(*order)?;
            Ok(dicyclic(name, order / 4))
        }
        GroupSpec::Symmetric(n) | GroupSpec::Alternating(n) => {
            let even_only = matches!(spec, GroupSpec::Alternating(_));
            let elements: Vec<Permutation> = all_permutations(*n)
                .into_iter()
                .filter(|p| !even_only || p.is_even())
                .collect();
            check_cap(elements.len())?;
            Ok(from_permutations(name, elements))
        }
        GroupSpec::Permutations(gens) => {
            let elements = close_permutations(gens, opts.order_cap)?;
            Ok(from_permutations(name, elements))
        }
        GroupSpec::Cayley(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                reason: e.to_string(),
            })?;
            #[derive(Deserialize)]
            struct CayleyFile {
                order: usize,
                table: Vec<Vec<usize>>,
            }
            let file: CayleyFile = serde_json::from_str(&text)?;
            if file.table.len() != file.order {
                return Err(Error::Construction(format!(
                    "declared order {} but {} rows",
                    file.order,
                    file.table.len()
                )));
            }
            GroupTable::from_rows(name, file.table, None, opts)
        }
    }
}

fn abelian(spec: String, factors: &[usize]) -> GroupTable {
    let n: usize = factors.iter().product();
    let coords = |mut i: usize| {
        let mut c = vec![0; factors.len()];
        for (slot, &d) in c.iter_mut().zip(factors).rev() {
            *slot = i % d;
            i /= d;
        }
        c
    };
    let index = |c: &[usize]| c.iter().zip(factors).fold(0, |acc, (&x, &d)| acc * d + x);
    let all: Vec<Vec<usize>> = (0..n).map(coords).collect();
    let mut mult = Vec::with_capacity(n * n);
    for a in &all {
        for b in &all {
            let sum: Vec<usize> = a
                .iter()
                .zip(b)
                .zip(factors)
                .map(|((x, y), d)| (x + y) % d)
                .collect();
            mult.push(index(&sum));
        }
    }
    let labels = all
        .iter()
        .map(|c| {
            format!(
                "({})",
                c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            )
        })
        .collect();
    GroupTable::from_trusted(spec, n, mult, labels)
}

/// Elements `r^i s^j` at index `j*n + i`.
fn dihedral(spec: String, n: usize) -> GroupTable {
    let order = 2 * n;
    let mut mult = Vec::with_capacity(order * order);
    for x in 0..order {
        let (a, b) = (x % n, x / n);
        for y in 0..order {
            let (c, d) = (y % n, y / n);
            // r^a s^b r^c s^d = r^(a ± c) s^(b+d)
            let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
            mult.push(((b + d) % 2) * n + rot);
        }
    }
    let labels = (0..order)
        .map(|x| match (x % n, x / n) {
            (0, 0) => "1".to_string(),
            (0, 1) => "s".to_string(),
            (a, 0) => format!("r{a}"),
            (a, _) => format!("r{a}s"),
        })
        .collect();
    GroupTable::from_trusted(spec, order, mult, labels)
}

/// Dicyclic group `<a, x | a^(2n), x^2 = a^n, x a x^-1 = a^-1>` of order `4n`,
/// elements `a^i x^j` at index `j*2n + i`.
fn dicyclic(spec: String, n: usize) -> GroupTable {
    let m = 2 * n;
    let order = 2 * m;
    let mut mult = Vec::with_capacity(order * order);
    for u in 0..order {
        let (i, j) = (u % m, u / m);
        for v in 0..order {
            let (k, l) = (v % m, v / m);
            let (e, f) = match (j, l) {
                (0, _) => ((i + k) % m, l),
                (_, 0) => ((i + m - k) % m, 1),
                _ => ((i + m - k + n) % m, 0),
            };
            mult.push(f * m + e);
        }
    }
    let labels = (0..order)
        .map(|u| match (u % m, u / m) {
            (0, 0) => "1".to_string(),
            (0, 1) => "x".to_string(),
            (a, 0) => format!("a{a}"),
            (a, _) => format!("a{a}x"),
        })
        .collect();
    GroupTable::from_trusted(spec, order, mult, labels)
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation(prefix.clone()));
            return;
        }
        for p in 0..used.len() {
            if !used[p] {
                used[p] = true;
                prefix.push(p);
                rec(prefix, used, out);
                prefix.pop();
                used[p] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn close_permutations(gens: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    let gens = Permutation::common_degree(gens);
    let degree = gens.first().map_or(0, Permutation::degree);
    let mut seen = BTreeSet::new();
    seen.insert(Permutation::identity(degree));
    let mut frontier = vec![Permutation::identity(degree)];
    while let Some(p) = frontier.pop() {
        for g in &gens {
            let q = p.then(g);
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return Err(Error::Size {
                        order: seen.len(),
                        cap,
                    });
                }
                frontier.push(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Elements in lexicographic order of their image arrays, so the identity is
/// index 0. The product `g·h` is "apply h, then g" (right-to-left).
fn from_permutations(spec: String, mut elements: Vec<Permutation>) -> GroupTable {
    elements.sort();
    let index: HashMap<&Permutation, usize> =
        elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = elements.len();
    let mut mult = Vec::with_capacity(n * n);
    for g in &elements {
        for h in &elements {
            mult.push(index[&h.then(g)]);
        }
    }
    let labels = elements.iter().map(Permutation::to_cycles).collect();
    GroupTable::from_trusted(spec, n, mult, labels)
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Invariant-factor chains `d_1 | ... | d_t` (each `d_i >= 2`) with product `n`.
fn abelian_chains(n: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, prev: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
        if rem == 1 {
            out.push(cur.clone());
            return;
        }
        for d in divisors(rem) {
            if d >= 2 && d % prev == 0 {
                cur.push(d);
                rec(rem / d, d, out, cur);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut out, &mut Vec::new());
    out
}

/// Every built-in group of order at most `max_order`: all abelian groups (by
/// invariant factors), dihedral `dih:n` for `n >= 3`, dicyclic `quat:4n`,
/// `sym:3..5` and `alt:4..5`. Sorted by order, then by spec.
pub fn builtin_groups(max_order: usize) -> Vec<GroupSpec> {
    let mut out: Vec<(usize, GroupSpec)> = Vec::new();
    out.push((1, GroupSpec::Abelian(vec![1])));
    for n in 2..=max_order {
        for chain in abelian_chains(n) {
            out.push((n, GroupSpec::Abelian(chain)));
        }
    }
    for n in 3..=max_order / 2 {
        out.push((2 * n, GroupSpec::Dihedral(n)));
    }
    for order in (8..=max_order).step_by(4) {
        out.push((order, GroupSpec::Quaternion(order)));
    }
    for (n, order) in [(3, 6), (4, 24), (5, 120)] {
        if order <= max_order {
            out.push((order, GroupSpec::Symmetric(n)));
        }
    }
    for (n, order) in [(4, 12), (5, 60)] {
        if order <= max_order {
            out.push((order, GroupSpec::Alternating(n)));
        }
    }
    out.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.to_string().cmp(&b.1.to_string()))
    });
    out.into_iter().map(|(_, s)| s).collect()
}
