use super::GroupTable;

impl GroupTable {
    /// A small generating set, chosen greedily from elements of large order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut candidates: Vec<usize> = (1..self.order()).collect();
        candidates.sort_by_key(|&g| (std::cmp::Reverse(self.element_order(g)), g));
        let mut gens = Vec::new();
        let mut span = self.subgroup_generated([]);
        for g in candidates {
            if span.len() == self.order() {
                break;
            }
            if !span.contains(g) {
                gens.push(g);
                span = self.join(&span, [g]);
            }
        }
        gens
    }

    /// All automorphisms as permutations of the element indices, found by
    /// brute force over images of a generating set. Returns `None` when the
    /// candidate image space exceeds `candidate_limit`.
    pub fn automorphisms(&self, candidate_limit: usize) -> Option<Vec<Vec<usize>>> {
        let gens = self.generating_set();
        let pools: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                (0..self.order())
                    .filter(|&h| self.element_order(h) == self.element_order(g))
                    .collect()
            })
            .collect();
        let space = pools
            .iter()
            .try_fold(1usize, |acc, p| acc.checked_mul(p.len()))?;
        if space > candidate_limit {
            return None;
        }
        let mut out = Vec::new();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let images: Vec<usize> = choice.iter().zip(&pools).map(|(&c, p)| p[c]).collect();
            if let Some(map) = self.extend_homomorphism(&gens, &images) {
                out.push(map);
            }
            // odometer
            let mut i = 0;
            loop {
                if i == choice.len() {
                    out.sort();
                    return Some(out);
                }
                choice[i] += 1;
                if choice[i] < pools[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// Extends `gens[i] -> images[i]` to a bijective homomorphism if possible.
    fn extend_homomorphism(&self, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = self.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    frontier.push(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        let mut hit = vec![false; n];
        for &v in &map {
            if v == usize::MAX || hit[v] {
                return None;
            }
            hit[v] = true;
        }
        Some(map)
    }
}

#[cfg(test)]
mod tests {
    use crate::group::GroupTable;

    #[test]
    fn automorphism_group_orders() {
        for (spec, count) in [
            ("ab:1", 1),
            ("ab:2", 1),
            ("ab:2,2", 6),
            ("ab:6", 2),
            ("ab:2,4", 8),
            ("ab:2,2,2", 168),
            ("sym:3", 6),
            ("dih:4", 8),
            ("quat:8", 24),
            ("alt:4", 24),
            ("sym:4", 24),
        ] {
            let t = GroupTable::parse(spec).unwrap();
            let auts = t.automorphisms(1 << 24).unwrap();
            assert_eq!(auts.len(), count, "{spec}");
            for a in &auts {
                for x in 0..t.order() {
                    for y in 0..t.order() {
                        assert_eq!(a[t.mul(x, y)], t.mul(a[x], a[y]));
                    }
                }
            }
        }
    }

    #[test]
    fn candidate_limit_respected() {
        let t = GroupTable::parse("ab:2,2,2,2").unwrap();
        assert!(t.automorphisms(100).is_none());
    }
}
