//! Finite groups as explicit multiplication tables.
//!
//! Elements are dense indices `0..order` with the identity at index 0. All
//! derived data (inverses, element orders, conjugacy classes) is computed once
//! at construction, after which a [`GroupTable`] is immutable.

mod automorphism;
mod builders;
mod elements;
mod spec;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use builders::{build_group, builtin_groups, BuildOptions};
pub use elements::ElementSet;
pub use spec::{parse_group_list, GroupSpec, Permutation};

/// Full associativity is checked up to this order; larger tables are sampled.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Invariant factors `d_1 | d_2 | ... | d_t` of a finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianInvariants {
    pub factors: Vec<usize>,
}

impl AbelianInvariants {
    /// Canonical divisibility chain of the direct product of cyclic groups of
    /// the given orders.
    pub fn from_cyclic_orders(orders: &[usize]) -> Self {
        let mut prime_powers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &d in orders {
            for (p, k) in factorize(d) {
                prime_powers.entry(p).or_default().push(p.pow(k));
            }
        }
        Self::from_prime_powers(prime_powers)
    }

    fn from_prime_powers(mut prime_powers: BTreeMap<usize, Vec<usize>>) -> Self {
        let t = prime_powers.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1usize; t];
        for powers in prime_powers.values_mut() {
            powers.sort_unstable();
            // Largest powers go into the last factors.
            for (slot, &q) in factors.iter_mut().rev().zip(powers.iter().rev()) {
                *slot *= q;
            }
        }
        AbelianInvariants { factors }
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        f.write_str(&parts.join("+"))
    }
}

pub(crate) fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A validated finite group.
#[derive(Clone, Debug)]
pub struct GroupTable {
    spec: String,
    order: usize,
    mult: Vec<usize>,
    inverse: Vec<usize>,
    element_order: Vec<usize>,
    labels: Vec<String>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    exponent: usize,
}

impl GroupTable {
    /// Validates a Cayley table and precomputes all derived data.
    ///
    /// `rows[g][h]` is the index of `g·h`. If the identity is not at index 0
    /// the table is relabelled by swapping it with element 0 (labels follow).
    pub fn from_rows(
        spec: impl Into<String>,
        rows: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
        opts: &BuildOptions,
    ) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Construction("empty table".into()));
        }
        if n > opts.order_cap {
            return Err(Error::Size {
                order: n,
                cap: opts.order_cap,
            });
        }
        let mut labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => {
                return Err(Error::Construction(format!(
                    "{} labels for {} elements",
                    l.len(),
                    n
                )))
            }
            None => (0..n).map(|i| format!("e{i}")).collect(),
        };
        let mut mult = Vec::with_capacity(n * n);
        for (g, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Construction(format!(
                    "row {g} has {} entries, expected {n}",
                    row.len()
                )));
            }
            mult.extend_from_slice(row);
        }
        check_latin(n, &mult)?;

        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mult[e * n + g] == g && mult[g * n + e] == g))
            .ok_or_else(|| Error::Construction("no two-sided identity".into()))?;
        if identity != 0 {
            mult = swap_labels(n, &mult, 0, identity);
            labels.swap(0, identity);
        }
        check_associative(n, &mult, opts.seed, opts.associativity_samples)?;
        Ok(Self::assemble(spec.into(), n, mult, labels))
    }

    /// Builds from a table already known to be a group with identity 0.
    pub(crate) fn from_trusted(
        spec: String,
        n: usize,
        mult: Vec<usize>,
        labels: Vec<String>,
    ) -> Self {
        debug_assert!(check_latin(n, &mult).is_ok());
        Self::assemble(spec, n, mult, labels)
    }

    fn assemble(spec: String, n: usize, mult: Vec<usize>, labels: Vec<String>) -> Self {
        let mut inverse = vec![0; n];
        for g in 0..n {
            for h in 0..n {
                if mult[g * n + h] == 0 {
                    inverse[g] = h;
                    break;
                }
            }
        }
        let mut element_order = vec![1; n];
        for (g, ord) in element_order.iter_mut().enumerate() {
            let mut x = g;
            while x != 0 {
                x = mult[x * n + g];
                *ord += 1;
            }
        }
        let exponent = element_order.iter().fold(1, |acc, &k| acc.lcm(&k));

        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n)
                .map(|t| mult[mult[t * n + g] * n + inverse[t]])
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            members.sort_unstable();
            for &m in &members {
                class_of[m] = usize::MAX - 1;
            }
            classes.push(ConjugacyClass {
                representative: g,
                members,
            });
        }
        classes.sort_by_key(|c| (c.size(), c.representative));
        for (i, c) in classes.iter().enumerate() {
            for &m in &c.members {
                class_of[m] = i;
            }
        }

        GroupTable {
            spec,
            order: n,
            mult,
            inverse,
            element_order,
            labels,
            classes,
            class_of,
            exponent,
        }
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mult[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    #[inline]
    pub fn element_order(&self, g: usize) -> usize {
        self.element_order[g]
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        let k = k % self.element_order[g];
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    /// `t g t⁻¹`
    pub fn conjugate(&self, g: usize, t: usize) -> usize {
        self.mul(self.mul(t, g), self.inverse[t])
    }

    /// `g h g⁻¹ h⁻¹`
    pub fn commutator(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.mul(self.inverse[g], self.inverse[h]))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mult
            .chunks(self.order)
            .map(<[usize]>::to_vec)
            .collect()
    }

    /// Classes sorted by `(size, representative)`; the identity class is first.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }

    pub fn center(&self) -> ElementSet {
        ElementSet::from_elements(
            self.order,
            (0..self.order).filter(|&g| (0..self.order).all(|h| self.mul(g, h) == self.mul(h, g))),
        )
    }

    /// Smallest subgroup containing `generators`, by saturation.
    pub fn subgroup_generated(&self, generators: impl IntoIterator<Item = usize>) -> ElementSet {
        let gens: Vec<usize> = generators.into_iter().filter(|&g| g != 0).collect();
        let mut set = ElementSet::from_elements(self.order, [0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    /// Smallest subgroup containing both `set` and the extra generators.
    pub fn join(&self, set: &ElementSet, extra: impl IntoIterator<Item = usize>) -> ElementSet {
        self.subgroup_generated(set.iter().chain(extra))
    }

    pub fn commutator_subgroup(&self) -> ElementSet {
        let n = self.order;
        let commutators: HashSet<usize> = (0..n)
            .flat_map(|g| (0..n).map(move |h| (g, h)))
            .map(|(g, h)| self.commutator(g, h))
            .collect();
        self.subgroup_generated(commutators)
    }

    pub fn cyclic_subgroup(&self, g: usize) -> ElementSet {
        let mut set = ElementSet::empty(self.order);
        let mut x = 0;
        loop {
            set.insert(x);
            x = self.mul(x, g);
            if x == 0 {
                break;
            }
        }
        set
    }

    pub fn is_subgroup(&self, set: &ElementSet) -> bool {
        set.universe() == self.order
            && set.contains(0)
            && set.iter().all(|g| {
                set.contains(self.inverse[g]) && set.iter().all(|h| set.contains(self.mul(g, h)))
            })
    }

    pub fn is_normal(&self, set: &ElementSet) -> bool {
        self.is_subgroup(set)
            && set
                .iter()
                .all(|g| (0..self.order).all(|t| set.contains(self.conjugate(g, t))))
    }

    /// Union of the conjugacy classes meeting `set`.
    pub fn normal_closure_of_set(&self, set: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.order);
        for g in set.iter() {
            for &m in &self.classes[self.class_of[g]].members {
                out.insert(m);
            }
        }
        out
    }

    /// Every subgroup, each listed once, sorted by (order, elements).
    pub fn all_subgroups(&self) -> Vec<ElementSet> {
        let cyclic: HashSet<ElementSet> =
            (0..self.order).map(|g| self.cyclic_subgroup(g)).collect();
        let mut found = cyclic.clone();
        let mut frontier: Vec<ElementSet> = cyclic.into_iter().collect();
        while let Some(h) = frontier.pop() {
            for g in 0..self.order {
                if h.contains(g) {
                    continue;
                }
                let joined = self.join(&h, [g]);
                if !found.contains(&joined) {
                    found.insert(joined.clone());
                    frontier.push(joined);
                }
            }
        }
        let mut all: Vec<ElementSet> = found.into_iter().collect();
        all.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.to_vec().cmp(&b.to_vec()))
        });
        all
    }

    /// The subgroup `set` as a standalone table, with its elements listed in
    /// increasing parent index. Returns the table and the embedding
    /// `sub index -> parent index`.
    pub fn subgroup_table(&self, set: &ElementSet) -> Result<(GroupTable, Vec<usize>)> {
        if !self.is_subgroup(set) {
            return Err(Error::Domain(format!(
                "{:?} is not a subgroup of {}",
                set, self.spec
            )));
        }
        let embedding = set.to_vec();
        let mut position = vec![usize::MAX; self.order];
        for (i, &g) in embedding.iter().enumerate() {
            position[g] = i;
        }
        let m = embedding.len();
        let mut mult = Vec::with_capacity(m * m);
        for &g in &embedding {
            for &h in &embedding {
                mult.push(position[self.mul(g, h)]);
            }
        }
        let labels = embedding.iter().map(|&g| self.labels[g].clone()).collect();
        let spec = format!(
            "{}<{}>",
            self.spec,
            embedding
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok((GroupTable::from_trusted(spec, m, mult, labels), embedding))
    }

    /// Invariant factors of an abelian group, read off from the sizes of the
    /// `p^k`-torsion subgroups for every prime `p` dividing the order.
    pub fn abelian_invariants(&self) -> Result<AbelianInvariants> {
        if !self.is_abelian() {
            return Err(Error::Domain(format!("{} is not abelian", self.spec)));
        }
        let mut prime_powers = BTreeMap::new();
        for (p, _) in factorize(self.order) {
            // omega[k] = log_p |{g : g^(p^k) = 1}|
            let mut omega = vec![0u32];
            let mut pk = 1;
            loop {
                pk *= p;
                let count = (0..self.order)
                    .filter(|&g| pk % self.element_order[g] == 0)
                    .count();
                let log = count.ilog(p);
                if log == *omega.last().unwrap() {
                    break;
                }
                omega.push(log);
            }
            // omega[k] - omega[k-1] = number of cyclic p-factors of exponent >= k
            let at_least: Vec<u32> = omega.windows(2).map(|w| w[1] - w[0]).collect();
            let mut powers = Vec::new();
            for (k, &count) in at_least.iter().enumerate() {
                let next = at_least.get(k + 1).copied().unwrap_or(0);
                for _ in 0..(count - next) {
                    powers.push(p.pow(k as u32 + 1));
                }
            }
            prime_powers.insert(p, powers);
        }
        Ok(AbelianInvariants::from_prime_powers(prime_powers))
    }

    /// Sorted element orders, one per element.
    pub fn order_census(&self) -> BTreeMap<usize, usize> {
        let mut census = BTreeMap::new();
        for &k in &self.element_order {
            *census.entry(k).or_insert(0) += 1;
        }
        census
    }

    /// Isomorphism-invariant summary plus a digest of the concrete table, so
    /// that equal fingerprints imply identical labelled tables.
    pub fn fingerprint(&self) -> String {
        let sizes: Vec<String> = self.classes.iter().map(|c| c.size().to_string()).collect();
        let census: Vec<String> = self
            .order_census()
            .iter()
            .map(|(k, c)| format!("{k}x{c}"))
            .collect();
        let mut hasher = Sha256::new();
        for &x in &self.mult {
            hasher.update((x as u32).to_le_bytes());
        }
        let digest = hasher.finalize();
        let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        format!(
            "o{}-c{}-e{}-{}",
            self.order,
            sizes.join("."),
            census.join("."),
            hex
        )
    }
}

fn check_latin(n: usize, mult: &[usize]) -> Result<()> {
    let mut seen = vec![usize::MAX; n];
    for g in 0..n {
        for h in 0..n {
            let x = mult[g * n + h];
            if x >= n {
                return Err(Error::Construction(format!(
                    "entry ({g},{h}) = {x} out of range"
                )));
            }
            if seen[x] == g {
                return Err(Error::Construction(format!("row {g} repeats element {x}")));
            }
            seen[x] = g;
        }
    }
    seen.fill(usize::MAX);
    for h in 0..n {
        for g in 0..n {
            let x = mult[g * n + h];
            if seen[x] == h {
                return Err(Error::Construction(format!(
                    "column {h} repeats element {x}"
                )));
            }
            seen[x] = h;
        }
    }
    Ok(())
}

fn check_associative(n: usize, mult: &[usize], seed: u64, samples: usize) -> Result<()> {
    let m = |a: usize, b: usize| mult[a * n + b];
    let fail = |a, b, c| Error::Construction(format!("not associative at ({a},{b},{c})"));
    if n <= FULL_ASSOCIATIVITY_LIMIT {
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(fail(a, b, c));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let (a, b, c) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            if m(m(a, b), c) != m(a, m(b, c)) {
                return Err(fail(a, b, c));
            }
        }
    }
    Ok(())
}

fn swap_labels(n: usize, mult: &[usize], a: usize, b: usize) -> Vec<usize> {
    let relabel = |x: usize| {
        if x == a {
            b
        } else if x == b {
            a
        } else {
            x
        }
    };
    let mut out = vec![0; n * n];
    for g in 0..n {
        for h in 0..n {
            out[relabel(g) * n + relabel(h)] = relabel(mult[g * n + h]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: &str) -> GroupTable {
        GroupTable::parse(spec).unwrap()
    }

    fn brute_classes(t: &GroupTable) -> Vec<Vec<usize>> {
        let n = t.order();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let mut orbit: Vec<usize> = (0..n)
                .map(|y| {
                    let yinv = (0..n).find(|&z| t.mul(y, z) == 0).unwrap();
                    t.mul(t.mul(y, x), yinv)
                })
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            if !out.contains(&orbit) {
                out.push(orbit);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn trivial_group() {
        let t = g("ab:1");
        assert_eq!(t.order(), 1);
        assert_eq!(t.conjugacy_classes().len(), 1);
        assert_eq!(t.abelian_invariants().unwrap().factors, Vec::<usize>::new());
    }

    #[test]
    fn ab_2_4() {
        let t = g("ab:2,4");
        assert_eq!(t.order(), 8);
        assert_eq!(t.exponent(), 4);
        assert_eq!(t.abelian_invariants().unwrap().factors, vec![2, 4]);
        assert_eq!(
            g("ab:2,2,2").abelian_invariants().unwrap().factors,
            vec![2, 2, 2]
        );
        assert_eq!(
            g("ab:4,2,3").abelian_invariants().unwrap().factors,
            vec![2, 12]
        );
    }

    #[test]
    fn sym3_classes_against_brute_force() {
        let t = g("sym:3");
        let mut ours: Vec<Vec<usize>> = t
            .conjugacy_classes()
            .iter()
            .map(|c| c.members.clone())
            .collect();
        ours.sort();
        assert_eq!(ours, brute_classes(&t));
        let sizes: Vec<usize> = t
            .conjugacy_classes()
            .iter()
            .map(ConjugacyClass::size)
            .collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(t.conjugacy_classes()[0].members, vec![0]);
    }

    #[test]
    fn centers_and_commutators() {
        assert_eq!(g("sym:3").center().len(), 1);
        assert_eq!(g("dih:4").center().len(), 2);
        assert_eq!(g("ab:2,3").center().len(), 6);
        assert_eq!(g("sym:3").commutator_subgroup().len(), 3);
        assert_eq!(g("quat:8").commutator_subgroup().len(), 2);
        assert_eq!(g("ab:2,4").commutator_subgroup().len(), 1);
        assert_eq!(g("alt:4").commutator_subgroup().len(), 4);
    }

    #[test]
    fn cyclic_subgroups() {
        let t = g("ab:6");
        assert_eq!(t.cyclic_subgroup(0).to_vec(), vec![0]);
        let gen = (0..6).find(|&x| t.element_order(x) == 6).unwrap();
        assert_eq!(t.cyclic_subgroup(gen).len(), 6);
        let s = g("sym:3");
        let inv = (0..6).find(|&x| s.element_order(x) == 2).unwrap();
        assert_eq!(s.cyclic_subgroup(inv).to_vec(), vec![0, inv]);
    }

    #[test]
    fn permutation_input_matches_abelian_invariants() {
        // (1 2) and (3 4 5 6) generate Z2 + Z4.
        let t = g("perm:(1 2);(3 4 5 6)");
        assert_eq!(t.order(), 8);
        assert_eq!(t.abelian_invariants().unwrap().factors, vec![2, 4]);
    }

    #[test]
    fn non_abelian_invariants_rejected() {
        assert!(matches!(
            g("sym:3").abelian_invariants(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn subgroup_counts() {
        // Known subgroup counts.
        assert_eq!(g("sym:3").all_subgroups().len(), 6);
        assert_eq!(g("ab:2,2").all_subgroups().len(), 5);
        assert_eq!(g("dih:4").all_subgroups().len(), 10);
        assert_eq!(g("quat:8").all_subgroups().len(), 6);
        assert_eq!(g("sym:4").all_subgroups().len(), 30);
    }

    #[test]
    fn subgroup_table_is_consistent() {
        let t = g("sym:4");
        for h in t.all_subgroups() {
            let (sub, emb) = t.subgroup_table(&h).unwrap();
            assert_eq!(sub.order(), h.len());
            for a in 0..sub.order() {
                for b in 0..sub.order() {
                    assert_eq!(emb[sub.mul(a, b)], t.mul(emb[a], emb[b]));
                }
            }
        }
    }

    #[test]
    fn non_latin_and_non_associative_tables_rejected() {
        let opts = BuildOptions::default();
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(
            GroupTable::from_rows("x", bad, None, &opts),
            Err(Error::Construction(_))
        ));
        // A Latin square with identity 0 that is not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            GroupTable::from_rows("x", loop5, None, &opts),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn identity_relabelled_to_zero() {
        // Z2 with the identity stored at index 1.
        let rows = vec![vec![1, 0], vec![0, 1]];
        let t = GroupTable::from_rows("x", rows, None, &BuildOptions::default()).unwrap();
        assert_eq!(t.mul(0, 1), 1);
        assert_eq!(t.mul(1, 1), 0);
        assert_eq!(t.label(0), "e1");
    }

    #[test]
    fn fingerprint_distinguishes_labellings() {
        let a = g("ab:2,2");
        let b = g("ab:4");
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), g("ab:2,2").fingerprint());
    }
}
