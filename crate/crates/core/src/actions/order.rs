//! The order graph on fixed components, the AM-FM identity along invariant curves, and the
//! flip-type verdict.
//!
//! Edges point from the higher μ-level to the lower one. Each edge carries the invariant curves
//! that realize it; a curve records the tangent weight at its upper end, which is negative.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ActionError, DiagonalAction, FixedComponentReport, FixedPoint, Variety, tangent_weights};

/// `(μ₊ − μ₋) / δ`: the degree of an invariant curve whose upper end has tangent weight `−δ`.
pub fn am_fm_degree(mu_plus: i64, mu_minus: i64, delta_plus: i64) -> Result<i64, ActionError> {
    if mu_plus <= mu_minus || delta_plus <= 0 {
        return Err(ActionError::BadDegreeInput);
    }
    let difference = mu_plus - mu_minus;
    if difference % delta_plus != 0 {
        return Err(ActionError::NonIntegralDegree { difference, delta: delta_plus });
    }
    Ok(difference / delta_plus)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum EdgeWitness {
    /// A coordinate line, or on the Grassmannian a pencil `⟨e_i, e_j + s e_c⟩`: degree 1.
    Line { from: FixedPoint, to: FixedPoint, tangent_weight: i64 },
    /// A conic through the square coordinate, e.g. `[e_a + s e_sq − s² e_{a'}]` on the quadric: degree 2.
    Conic { from: FixedPoint, to: FixedPoint, tangent_weight: i64 },
    /// The closure of a generic orbit runs from the source to the sink.
    GenericOrbit,
}

impl EdgeWitness {
    fn curve(&self) -> Option<(FixedPoint, FixedPoint, i64, i64)> {
        match *self {
            Self::Line { from, to, tangent_weight } => Some((from, to, tangent_weight, 1)),
            Self::Conic { from, to, tangent_weight } => Some((from, to, tangent_weight, 2)),
            Self::GenericOrbit => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderEdge {
    pub from: String,
    pub to: String,
    pub witnesses: Vec<EdgeWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<OrderEdge>,
    pub inner_links_only_to_extremal: bool,
}

impl OrderGraph {
    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges.iter().any(|e| e.from == from && e.to == to)
    }

    /// Checks `μ(from) − μ(to) = δ · degree` on every curve witness, with `−δ` a tangent weight at `from`.
    pub fn am_fm_summary(&self, r: &FixedComponentReport) -> Result<AmFmSummary, ActionError> {
        let mut s = AmFmSummary { curves_checked: 0, lines: 0, conics: 0, failures: Vec::new(), all_consistent: true };
        for e in &self.edges {
            for w in &e.witnesses {
                let Some((from, to, tangent_weight, degree)) = w.curve() else { continue };
                s.curves_checked += 1;
                if degree == 1 { s.lines += 1 } else { s.conics += 1 }
                let (mu_from, mu_to) = (point_mu(&r.action, from), point_mu(&r.action, to));
                let at_from = tangent_weights(&r.action, &r.variety, from)?;
                let ok = at_from.contains(&tangent_weight)
                    && am_fm_degree(mu_from, mu_to, -tangent_weight).is_ok_and(|d| d == degree);
                if !ok {
                    s.failures.push(format!("{from:?} -> {to:?}"));
                }
            }
        }
        s.all_consistent = s.failures.is_empty();
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmFmSummary {
    pub curves_checked: usize,
    pub lines: usize,
    pub conics: usize,
    pub failures: Vec<String>,
    pub all_consistent: bool,
}

fn point_mu(a: &DiagonalAction, p: FixedPoint) -> i64 {
    let w = a.weights();
    a.linearization_offset()
        + match p {
            FixedPoint::Coordinate(i) => w[i],
            FixedPoint::Plane(i, j) => w[i] + w[j],
        }
}

fn plane(i: usize, j: usize) -> FixedPoint {
    FixedPoint::Plane(i.min(j), i.max(j))
}

/// Invariant curves between torus-fixed points, oriented downwards in μ.
fn curves(a: &DiagonalAction, v: &Variety) -> Vec<EdgeWitness> {
    let w = a.weights();
    let n = a.len();
    let line = |hi: FixedPoint, lo: FixedPoint, t: i64| EdgeWitness::Line { from: hi, to: lo, tangent_weight: t };
    let conic = |hi: FixedPoint, lo: FixedPoint, t: i64| EdgeWitness::Conic { from: hi, to: lo, tangent_weight: t };
    let mut out = Vec::new();
    match v {
        Variety::Pn | Variety::Quadric(_) => {
            let q = match v {
                Variety::Quadric(q) => Some(q),
                _ => None,
            };
            let on_q = |c: usize| q.is_none_or(|q| q.partner(c).is_some());
            for a_ in (0..n).filter(|&c| on_q(c)) {
                for b in (0..n).filter(|&c| on_q(c) && w[c] < w[a_]) {
                    if q.is_none_or(|q| q.polar(a_, b) == 0) {
                        out.push(line(FixedPoint::Coordinate(a_), FixedPoint::Coordinate(b), w[b] - w[a_]));
                    }
                }
                if let Some(q) = q {
                    let p = q.partner(a_).expect("on the quadric");
                    for &s in q.squares() {
                        if w[p] < w[a_] {
                            out.push(conic(FixedPoint::Coordinate(a_), FixedPoint::Coordinate(p), w[s] - w[a_]));
                        }
                    }
                }
            }
        }
        Variety::Og2(q) => {
            let Ok(points) = super::og_fixed_points(a, q) else { return out };
            for pt in points {
                let (i0, j0) = pt.pair;
                let here = FixedPoint::Plane(i0, j0);
                // Move one vector of the plane, keeping the other.
                for (keep, moving) in [(i0, j0), (j0, i0)] {
                    let excluded = [Some(keep), Some(moving), q.partner(keep), q.partner(moving)];
                    for c in (0..n).filter(|&c| !excluded.contains(&Some(c)) && q.value_at(c) == 0) {
                        if w[c] < w[moving] {
                            out.push(line(here, plane(keep, c), w[c] - w[moving]));
                        }
                    }
                    let p = q.partner(moving).expect("isotropic planes avoid the square");
                    for &s in q.squares() {
                        if w[p] < w[moving] {
                            out.push(conic(here, plane(keep, p), w[s] - w[moving]));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Components linked by invariant curves between their torus-fixed representatives, plus the
/// generic source-to-sink edge.
pub fn order_graph(r: &FixedComponentReport) -> Result<OrderGraph, ActionError> {
    let mut edges: BTreeMap<(usize, usize), Vec<EdgeWitness>> = BTreeMap::new();
    for c in curves(&r.action, &r.variety) {
        let (from, to, _, _) = c.curve().expect("curves only");
        let (Some(f), Some(t)) = (r.index_of_point(from), r.index_of_point(to)) else {
            return Err(ActionError::NoTorusFixedRepresentative(format!("{from:?} or {to:?}")));
        };
        if f != t {
            edges.entry((f, t)).or_default().push(c);
        }
    }
    let sink = r.index_of_label(&r.sink);
    let source = r.index_of_label(&r.source);
    edges.entry((source, sink)).or_default().push(EdgeWitness::GenericOrbit);
    let label = |i: usize| r.components[i].label.clone();
    let inner_links_only_to_extremal =
        edges.keys().all(|&(f, t)| r.is_extremal(&r.components[f].label) || r.is_extremal(&r.components[t].label));
    Ok(OrderGraph {
        nodes: r.nonempty().map(|(_, c)| c.label.clone()).collect(),
        edges: edges.into_iter().map(|((f, t), witnesses)| OrderEdge { from: label(f), to: label(t), witnesses }).collect(),
        inner_links_only_to_extremal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason")]
pub enum Verdict {
    AtiyahLocal,
    NonEqualizedLocal,
    NotApplicable(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PsiHypotheses {
    pub criticality_two: bool,
    /// `ν± ≥ 2` at every inner component, or implied by `ρ_X = 1` with positive-dimensional extremal components.
    pub bordism_after_blowup: bool,
    pub picard_rank_one_assumed: bool,
    pub order_condition: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiVerdict {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub hypotheses: PsiHypotheses,
}

/// Local type of the birational map between the geometric quotients next to the sink and the source.
/// `picard_rank_one` is the caller's assertion that `ρ_X = 1`; it cannot be derived from weights.
pub fn classify_psi(r: &FixedComponentReport, picard_rank_one: bool) -> Result<PsiVerdict, ActionError> {
    if let Some(c) = r.nonempty().map(|(_, c)| c).find(|c| c.normal.is_none()) {
        return Err(ActionError::IncompleteReport(format!("{} has no normal weights", c.label)));
    }
    let graph = order_graph(r)?;
    let normal = |c: &super::FixedComponent| c.normal.clone().expect("checked above");
    let nu_ok = r.inner().all(|c| {
        let n = normal(c);
        n.nu_plus() >= 2 && n.nu_minus() >= 2
    });
    let extremal_positive = r.sink_component().dimension > 0 && r.source_component().dimension > 0;
    let hypotheses = PsiHypotheses {
        criticality_two: r.criticality == 2,
        bordism_after_blowup: nu_ok || (picard_rank_one && extremal_positive),
        picard_rank_one_assumed: picard_rank_one,
        order_condition: graph.inner_links_only_to_extremal,
    };
    let verdict = if r.criticality < 2 {
        Verdict::NotApplicable("criticality<2: the quotients are isomorphic".into())
    } else if r.criticality > 2 && !hypotheses.order_condition {
        Verdict::NotApplicable("criticality>2 and two inner components are linked".into())
    } else if !hypotheses.bordism_after_blowup {
        Verdict::NotApplicable(if extremal_positive {
            "ν±<2 at an inner component and ρ_X = 1 is not assumed".into()
        } else {
            "ν±<2 at an inner component with point-like extremal components: ψ is the identity".into()
        })
    } else if r.inner().all(|c| normal(c).equalized) {
        Verdict::AtiyahLocal
    } else {
        Verdict::NonEqualizedLocal
    };
    Ok(PsiVerdict { verdict, hypotheses })
}
