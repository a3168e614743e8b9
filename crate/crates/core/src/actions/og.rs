//! Plücker weights and the torus-fixed points of the Grassmannian of lines on a pairing quadric.
//! A line is a plane `S ⊂ V`; the fixed ones are coordinate planes `S = ⟨e_i, e_j⟩`, `i < j`.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use super::{ActionError, ComponentKind, DiagonalAction, FixedComponent, FixedPoint, PairingQuadric};

/// The induced action on `P(Λ^p V)`, coordinates `e_{i_1} ∧ … ∧ e_{i_p}` in lexicographic order.
pub fn plucker_action(a: &DiagonalAction, p: usize) -> Result<DiagonalAction, ActionError> {
    if p == 0 || p >= a.len() {
        return Err(ActionError::BadPluckerDegree { p, len: a.len() });
    }
    let w = a.weights();
    let sums = (0..a.len()).combinations(p).map(|s| s.iter().map(|&i| w[i]).sum()).collect();
    DiagonalAction::new(sums, a.linearization_offset())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OgFixedPoint {
    pub mu: i64,
    pub pair: (usize, usize),
}

fn isotropic(q: &PairingQuadric, i: usize, j: usize) -> bool {
    i != j && q.value_at(i) == 0 && q.value_at(j) == 0 && q.polar(i, j) == 0
}

/// Isotropic coordinate planes, sorted by μ and then lexicographically.
pub fn og_fixed_points(a: &DiagonalAction, q: &PairingQuadric) -> Result<Vec<OgFixedPoint>, ActionError> {
    q.invariant_weight(a)?;
    let w = a.weights();
    let mut out: Vec<OgFixedPoint> = (0..a.len())
        .tuple_combinations()
        .filter(|&(i, j)| isotropic(q, i, j))
        .map(|(i, j)| OgFixedPoint { mu: w[i] + w[j] + a.linearization_offset(), pair: (i, j) })
        .collect();
    out.sort();
    Ok(out)
}

/// Weights of `Hom(S, S^⊥/S) ⊕ Λ²S^∨` at `S = ⟨e_i, e_j⟩`; `S^⊥/S` is spanned by the coordinates other
/// than `i`, `j` and their partners.
pub fn og_tangent_weights(a: &DiagonalAction, q: &PairingQuadric, pair: (usize, usize)) -> Result<Vec<i64>, ActionError> {
    q.invariant_weight(a)?;
    let (i, j) = pair;
    let len = a.len();
    if let Some(&index) = [i, j].iter().find(|&&c| c >= len) {
        return Err(ActionError::IndexOutOfRange { index, len });
    }
    if !isotropic(q, i, j) {
        return Err(ActionError::NotIsotropic(i, j));
    }
    let w = a.weights();
    let excluded = [Some(i), Some(j), q.partner(i), q.partner(j)];
    let quotient: Vec<usize> = (0..len).filter(|c| !excluded.contains(&Some(*c))).collect();
    // dim OG(2, m) = 2(m − 4) + 1; anything else means the plane or the form is degenerate.
    if quotient.len() + 4 != len {
        return Err(ActionError::SingularQuadric(format!("S^⊥/S at <e_{i}, e_{j}> has the wrong dimension")));
    }
    let mut t: Vec<i64> = quotient.iter().flat_map(|&c| [w[c] - w[i], w[c] - w[j]]).collect();
    t.push(-(w[i] + w[j]));
    Ok(t)
}

/// One component per weight type `{w_i, w_j}`; the top and bottom μ-levels are the sub-Grassmannians.
pub(super) fn og_components(a: &DiagonalAction, q: &PairingQuadric) -> Result<Vec<FixedComponent>, ActionError> {
    q.check_smooth(a.len())?;
    let w = a.weights();
    let mut groups: BTreeMap<(i64, i64, i64), Vec<FixedPoint>> = BTreeMap::new();
    for p in og_fixed_points(a, q)? {
        let (i, j) = p.pair;
        let key = (p.mu, w[i].min(w[j]), w[i].max(w[j]));
        groups.entry(key).or_default().push(FixedPoint::Plane(i, j));
    }
    let (Some(lo), Some(hi)) = (groups.keys().next().map(|k| k.0), groups.keys().last().map(|k| k.0)) else {
        return Ok(Vec::new());
    };
    groups
        .into_iter()
        .map(|((mu, a_lo, a_hi), representatives)| {
            let FixedPoint::Plane(i, j) = representatives[0] else { unreachable!() };
            let dimension = og_tangent_weights(a, q, (i, j))?.iter().filter(|&&t| t == 0).count() as i64;
            let kind = if mu == lo || mu == hi { ComponentKind::SubGrassmannian } else { ComponentKind::InnerOG };
            Ok(FixedComponent {
                label: format!("Y({a_lo},{a_hi})"),
                mu,
                dimension,
                kind,
                representatives,
                normal: None,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{Variety, fixed_component_report, og_example};

    fn og3() -> (DiagonalAction, PairingQuadric) {
        let (a, v) = og_example(3).unwrap();
        let Variety::Og2(q) = v else { unreachable!() };
        (a, q)
    }

    fn counts(ws: &[i64]) -> BTreeMap<i64, usize> {
        ws.iter().fold(BTreeMap::new(), |mut m, &w| {
            *m.entry(w).or_default() += 1;
            m
        })
    }

    #[test]
    fn plucker_sums() {
        let a = DiagonalAction::new(vec![1, 0, -1], 0).unwrap();
        assert_eq!(plucker_action(&a, 2).unwrap().weights(), &[1, 0, -1]);
        assert_eq!(plucker_action(&a, 1).unwrap(), a);
        assert!(plucker_action(&a, 3).is_err());
        let (v, _) = og3();
        let p = plucker_action(&v, 2).unwrap();
        assert_eq!(p.len(), 21);
        assert_eq!(counts(p.weights()), BTreeMap::from([(-2, 3), (-1, 3), (0, 9), (1, 3), (2, 3)]));
    }

    #[test]
    fn isotropic_pairs_for_n_3() {
        let (a, q) = og3();
        let pts = og_fixed_points(&a, &q).unwrap();
        assert_eq!(pts.len(), 12);
        let mus: Vec<i64> = pts.iter().map(|p| p.mu).collect();
        assert_eq!(counts(&mus), BTreeMap::from([(-2, 3), (0, 6), (2, 3)]));
        assert!(!pts.iter().any(|p| p.pair == (0, 3) || p.pair == (0, 4)));
    }

    #[test]
    fn tangent_weights_at_fixed_planes() {
        let (a, q) = og3();
        let mut t = og_tangent_weights(&a, &q, (0, 5)).unwrap();
        t.sort_unstable();
        assert_eq!(t, vec![-2, -1, 0, 0, 0, 1, 2]);
        assert!(og_tangent_weights(&a, &q, (0, 1)).unwrap().iter().all(|&x| x <= 0));
        assert!(og_tangent_weights(&a, &q, (4, 5)).unwrap().iter().all(|&x| x >= 0));
        assert_eq!(og_tangent_weights(&a, &q, (0, 4)), Err(ActionError::NotIsotropic(0, 4)));
        assert_eq!(og_tangent_weights(&a, &q, (0, 3)), Err(ActionError::NotIsotropic(0, 3)));
    }

    #[test]
    fn n_4_inner_weights() {
        let (a, v) = og_example(4).unwrap();
        let r = fixed_component_report(&a, &v).unwrap();
        assert_eq!((r.criticality, r.bandwidth), (2, 4));
        let inner: Vec<_> = r.inner().collect();
        assert_eq!(inner.len(), 1);
        let nw = inner[0].normal.as_ref().unwrap();
        assert_eq!(nw.positive, vec![1, 2, 2]);
        assert_eq!(nw.negative, vec![-2, -2, -1]);
        assert!(!nw.equalized);
        assert_eq!(inner[0].kind, ComponentKind::InnerOG);
        // P(T_{P^{n−1}}) has dimension 2n − 3.
        assert_eq!(inner[0].dimension, 5);
        assert_eq!(r.source_component().dimension, 2 * (4 - 2));
    }
}
