use super::Character;
use crate::error::{Error, Result};
use crate::group::{ElementSet, GroupTable};

/// Elements `b_1, ..., b_t` with `|b_i| = d_i` such that every element is
/// uniquely `Σ c_i b_i`. Backtracking over candidates, largest factor first.
fn invariant_basis(g: &GroupTable, factors: &[usize]) -> Option<Vec<usize>> {
    fn rec(g: &GroupTable, factors: &[usize], span: &ElementSet, chosen: &mut Vec<usize>) -> bool {
        let Some(&d) = factors.last() else {
            return true;
        };
        for x in 0..g.order() {
            if g.element_order(x) != d {
                continue;
            }
            let joined = g.join(span, [x]);
            if joined.len() == span.len() * d {
                chosen.push(x);
                if rec(g, &factors[..factors.len() - 1], &joined, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    let start = g.subgroup_generated([]);
    rec(g, factors, &start, &mut chosen).then(|| {
        chosen.reverse();
        chosen
    })
}

/// Characters `χ_a(Σ c_i b_i) = Π ζ_{d_i}^{a_i c_i}` for all `a`.
pub(super) fn abelian_characters(g: &GroupTable) -> Result<Vec<Character>> {
    let factors = g.abelian_invariants()?.factors;
    let basis = invariant_basis(g, &factors)
        .ok_or_else(|| Error::Consistency(format!("no invariant-factor basis for {}", g.spec())))?;
    let e = g.exponent();
    let n = g.order();

    // coords[x] = (c_1, ..., c_t)
    let mut coords = vec![Vec::new(); n];
    let mut tuple = vec![0usize; factors.len()];
    for _ in 0..n {
        let x = basis
            .iter()
            .zip(&tuple)
            .fold(0, |acc, (&b, &c)| g.mul(acc, g.pow(b, c)));
        coords[x] = tuple.clone();
        for (slot, &d) in tuple.iter_mut().zip(&factors) {
            *slot += 1;
            if *slot < d {
                break;
            }
            *slot = 0;
        }
    }

    let mut out = Vec::with_capacity(n);
    let mut a = vec![0usize; factors.len()];
    for _ in 0..n {
        let values = (0..n)
            .map(|class| {
                // Abelian: class index equals element index.
                let x = g.conjugacy_classes()[class].representative;
                let k = coords[x]
                    .iter()
                    .zip(&a)
                    .zip(&factors)
                    .map(|((&c, &ai), &d)| c * ai * (e / d))
                    .sum::<usize>()
                    % e;
                let mut m = vec![0u32; e];
                m[k] = 1;
                m
            })
            .collect();
        out.push(Character { degree: 1, values });
        for (slot, &d) in a.iter_mut().zip(&factors) {
            *slot += 1;
            if *slot < d {
                break;
            }
            *slot = 0;
        }
    }
    Ok(out)
}
