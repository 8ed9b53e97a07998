use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use super::{validate_vector, BranchedCover, GeneratingVector};
use crate::error::{Error, Result};
use crate::group::GroupTable;

/// Automorphism dedup is attempted only up to this order.
const AUTOMORPHISM_DEDUP_ORDER: usize = 32;

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    pub base_genus: usize,
    pub max_r: usize,
    /// Exact branch orders `(m_1, ..., m_r)`; overrides `max_r` when set.
    pub branch_orders: Option<Vec<usize>>,
    pub genus_cap: u64,
    pub min_genus: u64,
    pub dedup: bool,
    /// Stop after this many covers and set the truncation flag.
    pub max_results: Option<usize>,
    /// Largest candidate space searched for automorphisms.
    pub automorphism_limit: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            base_genus: 1,
            max_r: 4,
            branch_orders: None,
            genus_cap: 65,
            min_genus: 2,
            dedup: false,
            max_results: None,
            automorphism_limit: 1 << 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DedupMode {
    Off,
    /// One vector per orbit under simultaneous relabelling by `Aut(G)`.
    Automorphisms,
    /// One vector per (branch-order multiset, genus).
    Fingerprint,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub covers: Vec<BranchedCover>,
    pub truncated: bool,
    pub dedup: DedupMode,
}

/// Every valid generating vector of the requested shape, with `α`/`β` loops
/// outermost and the `γ` tuple in lexicographic order of element indices.
/// `γ_r` is determined by the long relation.
pub fn enumerate_vectors(
    group: &Arc<GroupTable>,
    opts: &EnumerationOptions,
) -> Result<Enumeration> {
    if opts.base_genus > 2 {
        return Err(Error::Domain(format!(
            "base genus {} is not supported",
            opts.base_genus
        )));
    }
    let automorphisms = if opts.dedup && group.order() <= AUTOMORPHISM_DEDUP_ORDER {
        group.automorphisms(opts.automorphism_limit)
    } else {
        None
    };
    let dedup = match (opts.dedup, &automorphisms) {
        (false, _) => DedupMode::Off,
        (true, Some(_)) => DedupMode::Automorphisms,
        (true, None) => DedupMode::Fingerprint,
    };

    let shapes: Vec<Option<Vec<usize>>> = match &opts.branch_orders {
        Some(orders) => vec![Some(orders.clone())],
        None => (0..=opts.max_r).map(|_| None).collect(),
    };
    let mut state = Collector {
        opts,
        automorphisms: automorphisms.unwrap_or_default(),
        seen: HashSet::new(),
        fingerprints: HashSet::new(),
        covers: Vec::new(),
        truncated: false,
    };
    for (r, shape) in shapes.into_iter().enumerate() {
        let r = shape.as_ref().map_or(r, Vec::len);
        if !genus_reachable(
            group.order(),
            opts.base_genus,
            r,
            shape.as_deref(),
            opts.genus_cap,
        ) {
            continue;
        }
        let walk = Walk {
            group,
            pools: candidate_pools(group, opts.base_genus, r, shape.as_deref()),
            b: opts.base_genus,
            r,
            shape: shape.as_deref(),
        };
        if walk.run(&mut Vec::new(), &mut state).is_break() {
            break;
        }
    }
    Ok(Enumeration {
        covers: state.covers,
        truncated: state.truncated,
        dedup,
    })
}

/// Lower bound on the genus for `r` branch points, all of order at least 2.
fn genus_reachable(order: usize, b: usize, r: usize, shape: Option<&[usize]>, cap: u64) -> bool {
    let n = order as i64;
    let twice = match shape {
        Some(orders) if orders.iter().all(|&m| m >= 2 && order.is_multiple_of(m)) => {
            n * (2 * b as i64 - 2 + r as i64) - orders.iter().map(|&m| n / m as i64).sum::<i64>()
        }
        Some(_) => return false,
        None => n * (2 * b as i64 - 2) + n * r as i64 / 2,
    };
    twice <= 2 * cap as i64 - 2
}

/// Candidates for each free slot: `2b` unrestricted slots, then `γ_1..γ_{r-1}`.
fn candidate_pools(g: &GroupTable, b: usize, r: usize, shape: Option<&[usize]>) -> Vec<Vec<usize>> {
    let mut pools = vec![(0..g.order()).collect::<Vec<_>>(); 2 * b];
    for i in 0..r.saturating_sub(1) {
        pools.push(
            (1..g.order())
                .filter(|&x| shape.is_none_or(|s| g.element_order(x) == s[i]))
                .collect(),
        );
    }
    pools
}

struct Collector<'a> {
    opts: &'a EnumerationOptions,
    automorphisms: Vec<Vec<usize>>,
    seen: HashSet<Vec<usize>>,
    fingerprints: HashSet<(Vec<usize>, u64)>,
    covers: Vec<BranchedCover>,
    truncated: bool,
}

impl Collector<'_> {
    fn offer(&mut self, cover: BranchedCover) -> ControlFlow<()> {
        if cover.genus < self.opts.min_genus || cover.genus > self.opts.genus_cap {
            return ControlFlow::Continue(());
        }
        if self.opts.dedup {
            if self.automorphisms.is_empty() {
                let mut orders = cover.vector.branch_orders();
                orders.sort_unstable();
                if !self.fingerprints.insert((orders, cover.genus)) {
                    return ControlFlow::Continue(());
                }
            } else {
                let key = flatten(&cover.vector);
                if self.seen.contains(&key) {
                    return ControlFlow::Continue(());
                }
                for a in &self.automorphisms {
                    self.seen.insert(flatten(&cover.vector.relabel(a)));
                }
            }
        }
        if self
            .opts
            .max_results
            .is_some_and(|cap| self.covers.len() >= cap)
        {
            self.truncated = true;
            return ControlFlow::Break(());
        }
        self.covers.push(cover);
        ControlFlow::Continue(())
    }
}

fn flatten(v: &GeneratingVector) -> Vec<usize> {
    v.alphas()
        .iter()
        .chain(v.betas())
        .chain(v.gammas())
        .copied()
        .collect()
}

struct Walk<'g> {
    group: &'g Arc<GroupTable>,
    pools: Vec<Vec<usize>>,
    b: usize,
    r: usize,
    shape: Option<&'g [usize]>,
}

impl Walk<'_> {
    fn run(&self, prefix: &mut Vec<usize>, state: &mut Collector<'_>) -> ControlFlow<()> {
        if prefix.len() == self.pools.len() {
            return self.complete(prefix, state);
        }
        for &x in &self.pools[prefix.len()] {
            prefix.push(x);
            let flow = self.run(prefix, state);
            prefix.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// `prefix = (α_1, β_1, ..., α_b, β_b, γ_1, ..., γ_{r-1})`
    fn complete(&self, prefix: &[usize], state: &mut Collector<'_>) -> ControlFlow<()> {
        let g = self.group;
        let (pairs, gammas) = prefix.split_at(2 * self.b);
        let mut v = GeneratingVector {
            group: g.clone(),
            alphas: pairs.iter().step_by(2).copied().collect(),
            betas: pairs.iter().skip(1).step_by(2).copied().collect(),
            gammas: gammas.to_vec(),
        };
        if self.r > 0 {
            let last = g.inv(v.relation_product());
            if last == g.identity()
                || self
                    .shape
                    .is_some_and(|s| g.element_order(last) != s[self.r - 1])
            {
                return ControlFlow::Continue(());
            }
            v.gammas.push(last);
        }
        match validate_vector(&v) {
            Ok(cover) => state.offer(cover),
            Err(_) => ControlFlow::Continue(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(spec: &str) -> Arc<GroupTable> {
        Arc::new(GroupTable::parse(spec).unwrap())
    }

    #[test]
    fn trivial_group_has_no_hyperbolic_covers() {
        let opts = EnumerationOptions {
            max_r: 0,
            ..Default::default()
        };
        assert!(enumerate_vectors(&group("ab:1"), &opts)
            .unwrap()
            .covers
            .is_empty());
        let all = EnumerationOptions {
            max_r: 0,
            min_genus: 0,
            ..Default::default()
        };
        let e = enumerate_vectors(&group("ab:1"), &all).unwrap();
        assert_eq!(e.covers.len(), 1);
        assert_eq!(e.covers[0].genus, 1);
    }

    #[test]
    fn raw_count_for_two_branch_points_over_z2() {
        // Brute force: α, β range over Z2 freely, γ_1 = γ_2 = the involution.
        let opts = EnumerationOptions {
            branch_orders: Some(vec![2, 2]),
            ..Default::default()
        };
        let e = enumerate_vectors(&group("ab:2"), &opts).unwrap();
        assert_eq!(e.covers.len(), 4);
        assert!(e
            .covers
            .iter()
            .all(|c| c.genus == 2 && c.vector.gammas() == [1, 1]));
    }

    #[test]
    fn klein_four_vector_up_to_relabelling() {
        let g = group("ab:2,2");
        let opts = EnumerationOptions {
            branch_orders: Some(vec![2, 2]),
            genus_cap: 3,
            dedup: true,
            ..Default::default()
        };
        let e = enumerate_vectors(&g, &opts).unwrap();
        assert_eq!(e.dedup, DedupMode::Automorphisms);
        let auts = g.automorphisms(1 << 20).unwrap();
        let target = GeneratingVector::new(g.clone(), vec![2], vec![1], vec![2, 2]).unwrap();
        let target = flatten(&target);
        assert!(e
            .covers
            .iter()
            .any(|c| auts.iter().any(|a| flatten(&c.vector.relabel(a)) == target)));
        let raw = enumerate_vectors(
            &g,
            &EnumerationOptions {
                dedup: false,
                ..opts
            },
        )
        .unwrap();
        assert!(raw.covers.len() > e.covers.len());
    }

    #[test]
    fn dedup_falls_back_to_fingerprints() {
        let opts = EnumerationOptions {
            branch_orders: Some(vec![2, 2]),
            dedup: true,
            automorphism_limit: 1,
            ..Default::default()
        };
        let e = enumerate_vectors(&group("ab:2,2"), &opts).unwrap();
        assert_eq!(e.dedup, DedupMode::Fingerprint);
        assert_eq!(e.covers.len(), 1);
    }

    #[test]
    fn truncation_is_flagged() {
        let opts = EnumerationOptions {
            max_results: Some(3),
            ..Default::default()
        };
        let e = enumerate_vectors(&group("ab:2,2"), &opts).unwrap();
        assert_eq!(e.covers.len(), 3);
        assert!(e.truncated);
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let g = group("sym:3");
        let opts = EnumerationOptions {
            branch_orders: Some(vec![2, 2]),
            ..Default::default()
        };
        let e = enumerate_vectors(&g, &opts).unwrap();
        assert!(!e.truncated);
        assert!(e.covers.iter().all(|c| c.genus == 4));
        let keys: Vec<Vec<usize>> = e.covers.iter().map(|c| flatten(&c.vector)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        // Oracle: brute force over all 4-tuples.
        let mut count = 0;
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    for d in 0..6 {
                        let v =
                            GeneratingVector::new(g.clone(), vec![a], vec![b], vec![c, d]).unwrap();
                        if g.element_order(c) == 2
                            && g.element_order(d) == 2
                            && validate_vector(&v).is_ok()
                        {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(e.covers.len(), count);
    }
}
