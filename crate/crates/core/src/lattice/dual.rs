//! Inequality descriptions of cones given by generators, via exact Fourier–Motzkin elimination.

use super::int::{Int, gcd_all, sign};
use super::matrix::{Adjugate, left_kernel, pivot_columns};
use super::vector::LatticeVector;

/// `{x : e·x = 0 for e in equalities, a·x ≥ 0 for a in inequalities}`.
///
/// Inequalities are facet normals: one per facet, primitive, sorted. Equalities cut out the span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DualDescription {
    pub equalities: Vec<Vec<Int>>,
    pub inequalities: Vec<Vec<Int>>,
}

impl DualDescription {
    pub fn tight_set(&self, a: usize, gens: &[LatticeVector]) -> Vec<bool> {
        gens.iter().map(|g| g.dot(&self.inequalities[a]).is_zero()).collect()
    }
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Int>,
    ancestors: Vec<u64>,
}

fn ancestor_count(a: &[u64]) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

fn normalize(mut coeffs: Vec<Int>) -> Vec<Int> {
    let g = gcd_all(&coeffs);
    if !g.is_zero() && !g.is_one() {
        for c in coeffs.iter_mut() {
            *c = &*c / &g;
        }
    }
    coeffs
}

pub(crate) fn dual_description(ambient_rank: usize, gens: &[LatticeVector]) -> DualDescription {
    let r = ambient_rank;
    let k = gens.len();
    // G is r × k with the generators as columns.
    let g: Vec<Vec<Int>> = (0..r).map(|i| gens.iter().map(|v| v.coords()[i].clone()).collect()).collect();
    let equalities = left_kernel(&g, k);
    if k == 0 {
        return DualDescription { equalities, inequalities: Vec::new() };
    }

    let basis = pivot_columns(&g, k);
    let s = basis.len();
    let basis_rows: Vec<Vec<Int>> = basis.iter().map(|&j| gens[j].coords().to_vec()).collect();
    let coord_rows = pivot_columns(&basis_rows, r);
    let others: Vec<usize> = (0..k).filter(|j| !basis.contains(j)).collect();

    let m: Vec<Vec<Int>> = coord_rows.iter().map(|&i| basis.iter().map(|&j| g[i][j].clone()).collect()).collect();
    let adj = Adjugate::of(&m).expect("pivot minor is nonsingular");
    let flip = !adj.det_sign_positive();

    // Variables: x (r coordinates) then t (one per non-basis generator).
    // |det|·λ_B = ±adj·(x_S − G_{S,N} t) ≥ 0 and t ≥ 0.
    let words = k.div_ceil(64);
    let mut rows: Vec<Row> = Vec::with_capacity(k);
    for i in 0..s {
        let mut coeffs = vec![Int::ZERO; r + others.len()];
        for (l, &ci) in coord_rows.iter().enumerate() {
            coeffs[ci] = if flip { -&adj.adj[i][l] } else { adj.adj[i][l].clone() };
        }
        for (t, &j) in others.iter().enumerate() {
            let mut acc = Int::ZERO;
            for (l, &ci) in coord_rows.iter().enumerate() {
                acc += &adj.adj[i][l] * &g[ci][j];
            }
            coeffs[r + t] = if flip { acc } else { -acc };
        }
        let mut ancestors = vec![0u64; words];
        ancestors[i / 64] |= 1 << (i % 64);
        rows.push(Row { coeffs: normalize(coeffs), ancestors });
    }
    for t in 0..others.len() {
        let mut coeffs = vec![Int::ZERO; r + others.len()];
        coeffs[r + t] = Int::ONE;
        let id = s + t;
        let mut ancestors = vec![0u64; words];
        ancestors[id / 64] |= 1 << (id % 64);
        rows.push(Row { coeffs, ancestors });
    }

    for (step, col) in (r..r + others.len()).rev().enumerate() {
        let limit = step as u32 + 2;
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for row in rows {
            match sign(&row.coeffs[col]) {
                std::cmp::Ordering::Greater => pos.push(row),
                std::cmp::Ordering::Less => neg.push(row),
                std::cmp::Ordering::Equal => keep.push(row),
            }
        }
        for p in &pos {
            for q in &neg {
                let ancestors: Vec<u64> = p.ancestors.iter().zip(&q.ancestors).map(|(a, b)| a | b).collect();
                // Chernikov: a combination with more than step+2 ancestors is implied by the others.
                if ancestor_count(&ancestors) > limit {
                    continue;
                }
                let (a, b) = (-&q.coeffs[col], p.coeffs[col].clone());
                let coeffs: Vec<Int> = p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| &a * x + &b * y).collect();
                keep.push(Row { coeffs: normalize(coeffs), ancestors });
            }
        }
        keep.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then(ancestor_count(&a.ancestors).cmp(&ancestor_count(&b.ancestors))));
        keep.dedup_by(|a, b| a.coeffs == b.coeffs);
        rows = keep;
    }

    // Keep one representative per facet: tight on a generator set of rank dim − 1.
    let mut facets: Vec<(Vec<bool>, Vec<Int>)> = Vec::new();
    for row in rows {
        let a: Vec<Int> = row.coeffs[..r].to_vec();
        let tight: Vec<bool> = gens.iter().map(|v| v.dot(&a).is_zero()).collect();
        if tight.iter().all(|&t| t) {
            continue;
        }
        let tight_rows: Vec<Vec<Int>> =
            gens.iter().zip(&tight).filter(|&(_, &t)| t).map(|(v, _)| v.coords().to_vec()).collect();
        if pivot_columns(&tight_rows, r).len() + 1 != s {
            continue;
        }
        if facets.iter().any(|(t, _)| *t == tight) {
            continue;
        }
        facets.push((tight, normalize(a)));
    }
    let mut inequalities: Vec<Vec<Int>> = facets.into_iter().map(|(_, a)| a).collect();
    inequalities.sort();
    DualDescription { equalities, inequalities }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int::ints;

    fn gens(xs: &[&[i64]]) -> Vec<LatticeVector> {
        xs.iter().map(|x| LatticeVector::from_i64(x)).collect()
    }

    #[test]
    fn orthant_facets_are_coordinates() {
        let d = dual_description(3, &gens(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert!(d.equalities.is_empty());
        assert_eq!(d.inequalities, vec![ints(&[0, 0, 1]), ints(&[0, 1, 0]), ints(&[1, 0, 0])]);
    }

    #[test]
    fn square_cone_has_four_facets() {
        // Cone over the unit square at height one.
        let d = dual_description(3, &gens(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]));
        assert_eq!(
            d.inequalities,
            vec![ints(&[-1, 0, 1]), ints(&[0, -1, 1]), ints(&[0, 1, 0]), ints(&[1, 0, 0])]
        );
    }

    #[test]
    fn redundant_generator_yields_same_facets() {
        let d = dual_description(2, &gens(&[&[1, 0], &[1, 1], &[0, 1]]));
        assert_eq!(d.inequalities, vec![ints(&[0, 1]), ints(&[1, 0])]);
    }

    #[test]
    fn lower_dimensional_cone_has_equalities() {
        let d = dual_description(3, &gens(&[&[1, 1, 0], &[0, 1, 1]]));
        assert_eq!(d.equalities, vec![ints(&[1, -1, 1])]);
        assert_eq!(d.inequalities.len(), 2);
        for a in &d.inequalities {
            let vals: Vec<Int> = gens(&[&[1, 1, 0], &[0, 1, 1]]).iter().map(|g| g.dot(a)).collect();
            assert!(vals.iter().any(|v| v.is_zero()) && vals.iter().all(|v| !sign(v).is_lt()));
        }
    }

    #[test]
    fn line_has_no_inequalities() {
        let d = dual_description(2, &gens(&[&[1, 1], &[-1, -1]]));
        assert_eq!(d.equalities, vec![ints(&[1, -1])]);
        assert!(d.inequalities.is_empty());
    }
}
