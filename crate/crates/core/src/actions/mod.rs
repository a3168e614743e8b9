//! Weight bookkeeping for diagonal C*-actions on `P^N`, on smooth quadrics `Z(Σ x_i x_j + x_s²)`,
//! and on the orthogonal Grassmannian of lines on such a quadric.
//!
//! Conventions. `weights[c]` is the weight of the homogeneous coordinate `x_c`. The μ-value of a
//! coordinate point (or of a coordinate plane, on the Grassmannian) is the weight sum plus the
//! linearization offset. The tangent weight at `e_i` in the direction of `e_j` is `w_j − w_i`. With
//! these signs the source of the action is the top μ-level and the sink the bottom one, every
//! tangent weight at the source is `≤ 0`, and `bandwidth = μ(source) − μ(sink) > 0`.

mod og;
mod order;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use og::{OgFixedPoint, og_fixed_points, og_tangent_weights, plucker_action};
pub use order::{
    AmFmSummary, EdgeWitness, OrderEdge, OrderGraph, PsiHypotheses, PsiVerdict, Verdict, am_fm_degree, classify_psi,
    order_graph,
};

/// Weights are bounded so that every sum formed here (Plücker sums, differences) fits in `i64`.
pub const MAX_WEIGHT: i64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("the action is trivial: all weights are equal")]
    TrivialAction,
    #[error("weight {0} exceeds the supported magnitude 2^40")]
    WeightOutOfRange(i64),
    #[error("coordinate index {index} is out of range for {len} coordinates")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("malformed quadric: {0}")]
    MalformedQuadric(String),
    #[error("the quadric is singular: {0}")]
    SingularQuadric(String),
    #[error("the quadric is not invariant: its monomials have different total weights")]
    NonInvariantForm,
    #[error("the plane <e_{0}, e_{1}> is not isotropic")]
    NotIsotropic(usize, usize),
    #[error("component {0} has no torus-fixed coordinate representative")]
    NoTorusFixedRepresentative(String),
    #[error("μ-difference {difference} is not divisible by the tangent weight {delta}")]
    NonIntegralDegree { difference: i64, delta: i64 },
    #[error("am_fm_degree needs mu_plus > mu_minus and a positive tangent weight")]
    BadDegreeInput,
    #[error("Plücker degree p = {p} must satisfy 1 <= p < {len}")]
    BadPluckerDegree { p: usize, len: usize },
    #[error("at least two nonempty fixed components are needed, found {0}")]
    TooFewComponents(usize),
    #[error("bad example parameters: {0}")]
    BadExample(String),
    #[error("report is incomplete: {0}")]
    IncompleteReport(String),
    #[error("representatives of {0} disagree")]
    InconsistentRepresentatives(String),
}

impl ActionError {
    /// Bad input, as opposed to a failed internal cross-check.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Self::InconsistentRepresentatives(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalAction {
    weights: Vec<i64>,
    linearization_offset: i64,
}

impl DiagonalAction {
    pub fn new(weights: Vec<i64>, linearization_offset: i64) -> Result<Self, ActionError> {
        if let Some(&w) = weights.iter().chain([&linearization_offset]).find(|w| w.abs() > MAX_WEIGHT) {
            return Err(ActionError::WeightOutOfRange(w));
        }
        if weights.iter().all(|&w| w == weights[0]) {
            return Err(ActionError::TrivialAction);
        }
        Ok(Self { weights, linearization_offset })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn linearization_offset(&self) -> i64 {
        self.linearization_offset
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The same action with another linearization.
    pub fn with_offset(&self, linearization_offset: i64) -> Result<Self, ActionError> {
        Self::new(self.weights.clone(), linearization_offset)
    }

    /// gcd of the pairwise weight differences; the action is faithful iff this is 1.
    pub fn faithfulness_gcd(&self) -> i64 {
        self.weights.iter().fold(0, |g, &w| gcd(g, w - self.weights[0]))
    }

    fn mu(&self, c: usize) -> i64 {
        self.weights[c] + self.linearization_offset
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `Σ_{(i,j) ∈ pairs} x_i x_j + Σ_{s ∈ squares} x_s²`, all coefficients 1, at most one square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingQuadric {
    pairs: Vec<(usize, usize)>,
    squares: Vec<usize>,
}

impl PairingQuadric {
    pub fn new(pairs: Vec<(usize, usize)>, squares: Vec<usize>) -> Result<Self, ActionError> {
        if let Some(&(i, j)) = pairs.iter().find(|(i, j)| i >= j) {
            return Err(ActionError::MalformedQuadric(format!("pair ({i},{j}) must have i < j")));
        }
        if squares.len() > 1 {
            return Err(ActionError::MalformedQuadric("at most one square term is supported".into()));
        }
        let mut seen: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).chain(squares.iter().copied()).collect();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(ActionError::MalformedQuadric(format!("index {} appears in two monomials", w[0])));
        }
        Ok(Self { pairs, squares })
    }

    /// `x_0 x_{n+1} + … + x_{n−1} x_{2n} + x_n²` on `P^{2n}`.
    pub fn standard(n: usize) -> Self {
        Self { pairs: (0..n).map(|i| (i, n + 1 + i)).collect(), squares: vec![n] }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn squares(&self) -> &[usize] {
        &self.squares
    }

    fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().flat_map(|&(i, j)| [i, j]).chain(self.squares.iter().copied())
    }

    pub fn partner(&self, c: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(i, j)| match c {
            _ if c == i => Some(j),
            _ if c == j => Some(i),
            _ => None,
        })
    }

    /// `Q(e_c)`.
    pub fn value_at(&self, c: usize) -> i64 {
        i64::from(self.squares.contains(&c))
    }

    /// The polar form `B(e_a, e_b)` for `a ≠ b`.
    pub fn polar(&self, a: usize, b: usize) -> i64 {
        i64::from(a != b && self.partner(a) == Some(b))
    }

    /// Smooth on `P^{len−1}` iff every coordinate occurs in exactly one monomial.
    pub fn check_smooth(&self, len: usize) -> Result<(), ActionError> {
        if let Some(index) = self.indices().find(|&c| c >= len) {
            return Err(ActionError::IndexOutOfRange { index, len });
        }
        if let Some(c) = (0..len).find(|&c| !self.indices().any(|i| i == c)) {
            return Err(ActionError::SingularQuadric(format!("coordinate {c} occurs in no monomial")));
        }
        Ok(())
    }

    /// The common weight of all monomials.
    pub fn invariant_weight(&self, a: &DiagonalAction) -> Result<i64, ActionError> {
        let len = a.len();
        if let Some(index) = self.indices().find(|&c| c >= len) {
            return Err(ActionError::IndexOutOfRange { index, len });
        }
        let w = a.weights();
        let mut totals = self.pairs.iter().map(|&(i, j)| w[i] + w[j]).chain(self.squares.iter().map(|&s| 2 * w[s]));
        let first = totals.next().ok_or_else(|| ActionError::MalformedQuadric("no monomials".into()))?;
        if totals.all(|t| t == first) { Ok(first) } else { Err(ActionError::NonInvariantForm) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "variety", content = "quadric", rename_all = "lowercase")]
pub enum Variety {
    Pn,
    Quadric(PairingQuadric),
    /// Lines on the quadric, i.e. isotropic planes in the underlying vector space.
    Og2(PairingQuadric),
}

impl Variety {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Pn => "pn",
            Self::Quadric(_) => "quadric",
            Self::Og2(_) => "og2",
        }
    }
}

/// Fixed coordinate points of `P^N`, grouped by μ-level in increasing order.
pub fn fixed_components_pn(a: &DiagonalAction) -> Vec<(i64, Vec<usize>)> {
    let mut levels: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for c in 0..a.len() {
        levels.entry(a.mu(c)).or_default().push(c);
    }
    levels.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LevelRestriction {
    /// No monomial survives: the whole linear subspace of the level lies on the quadric.
    IdenticallyZero,
    QuadricOfDim(usize),
    Empty,
}

/// The quadric restricted to the coordinate subspace of one μ-level.
pub fn restrict_quadric(a: &DiagonalAction, q: &PairingQuadric, level_mu: i64) -> Result<LevelRestriction, ActionError> {
    q.invariant_weight(a)?;
    let level: Vec<usize> = (0..a.len()).filter(|&c| a.mu(c) == level_mu).collect();
    let inside = |c: &usize| level.contains(c);
    let survives =
        q.pairs.iter().any(|(i, j)| inside(i) && inside(j)) || q.squares.iter().any(inside);
    Ok(match level.len() {
        0 => LevelRestriction::Empty,
        _ if !survives => LevelRestriction::IdenticallyZero,
        1 => LevelRestriction::Empty,
        m => LevelRestriction::QuadricOfDim(m - 2),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum FixedPoint {
    Coordinate(usize),
    Plane(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    LinearSubspace,
    QuadricInSubspace,
    SubGrassmannian,
    InnerOG,
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalWeights {
    #[serde(rename = "normal_weights_pos")]
    pub positive: Vec<i64>,
    #[serde(rename = "normal_weights_neg")]
    pub negative: Vec<i64>,
    /// Tangent directions along the component.
    pub zero_weights: usize,
    pub equalized: bool,
}

impl NormalWeights {
    fn from_tangent(mut t: Vec<i64>) -> Self {
        t.sort_unstable();
        let zero_weights = t.iter().filter(|&&x| x == 0).count();
        let negative: Vec<i64> = t.iter().copied().filter(|&x| x < 0).collect();
        let positive: Vec<i64> = t.iter().copied().filter(|&x| x > 0).collect();
        let equalized = t.iter().all(|x| x.abs() <= 1);
        Self { positive, negative, zero_weights, equalized }
    }

    pub fn nu_plus(&self) -> usize {
        self.positive.len()
    }

    pub fn nu_minus(&self) -> usize {
        self.negative.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedComponent {
    pub label: String,
    pub mu: i64,
    /// `−1` for an empty level.
    pub dimension: i64,
    pub kind: ComponentKind,
    pub representatives: Vec<FixedPoint>,
    #[serde(flatten)]
    pub normal: Option<NormalWeights>,
}

impl FixedComponent {
    pub fn is_empty(&self) -> bool {
        self.kind == ComponentKind::Empty
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedComponentReport {
    #[serde(flatten)]
    pub variety: Variety,
    pub action: DiagonalAction,
    /// Sorted by μ, then by representatives. Empty levels are listed but never extremal.
    pub components: Vec<FixedComponent>,
    pub criticality: i64,
    pub bandwidth: i64,
    pub sink: String,
    pub source: String,
}

impl FixedComponentReport {
    pub fn nonempty(&self) -> impl Iterator<Item = (usize, &FixedComponent)> {
        self.components.iter().enumerate().filter(|(_, c)| !c.is_empty())
    }

    pub fn component(&self, label: &str) -> Option<&FixedComponent> {
        self.components.iter().find(|c| c.label == label)
    }

    pub fn sink_component(&self) -> &FixedComponent {
        self.component(&self.sink).expect("sink label names a component")
    }

    pub fn source_component(&self) -> &FixedComponent {
        self.component(&self.source).expect("source label names a component")
    }

    pub fn is_extremal(&self, label: &str) -> bool {
        label == self.sink || label == self.source
    }

    /// Nonempty components other than the sink and the source.
    pub fn inner(&self) -> impl Iterator<Item = &FixedComponent> {
        self.nonempty().map(|(_, c)| c).filter(|c| !self.is_extremal(&c.label))
    }

    pub fn index_of_label(&self, label: &str) -> usize {
        self.components.iter().position(|c| c.label == label).expect("label names a component")
    }

    pub fn index_of_point(&self, p: FixedPoint) -> Option<usize> {
        self.components.iter().position(|c| c.representatives.contains(&p))
    }

    /// Every nonempty component carries normal weights and all of them are `±1`.
    pub fn fully_equalized(&self) -> bool {
        self.nonempty().all(|(_, c)| c.normal.as_ref().is_some_and(|n| n.equalized))
    }
}

/// Tangent weights of the variety at a torus-fixed point.
pub fn tangent_weights(a: &DiagonalAction, v: &Variety, p: FixedPoint) -> Result<Vec<i64>, ActionError> {
    let w = a.weights();
    let check = |c: usize| {
        if c < w.len() { Ok(()) } else { Err(ActionError::IndexOutOfRange { index: c, len: w.len() }) }
    };
    match (v, p) {
        (Variety::Pn, FixedPoint::Coordinate(i)) => {
            check(i)?;
            Ok((0..w.len()).filter(|&j| j != i).map(|j| w[j] - w[i]).collect())
        }
        (Variety::Quadric(q), FixedPoint::Coordinate(i)) => {
            check(i)?;
            q.invariant_weight(a)?;
            // `e_i` lies on the quadric iff `x_i` is paired; the partner direction is the normal.
            let Some(p) = q.partner(i) else {
                return Err(ActionError::NoTorusFixedRepresentative(format!("e_{i} is not on the quadric")));
            };
            Ok((0..w.len()).filter(|&j| j != i && j != p).map(|j| w[j] - w[i]).collect())
        }
        (Variety::Og2(q), FixedPoint::Plane(i, j)) => og_tangent_weights(a, q, (i, j)),
        _ => Err(ActionError::NoTorusFixedRepresentative(format!("{p:?} is not a fixed point of {}", v.name()))),
    }
}

/// Normal weights of a component, evaluated at each representative; all of them must agree.
pub fn component_normal_weights(
    a: &DiagonalAction,
    v: &Variety,
    c: &FixedComponent,
) -> Result<NormalWeights, ActionError> {
    let mut found: Option<NormalWeights> = None;
    for &p in &c.representatives {
        let n = NormalWeights::from_tangent(tangent_weights(a, v, p)?);
        match &found {
            Some(f) if *f != n => return Err(ActionError::InconsistentRepresentatives(c.label.clone())),
            Some(_) => {}
            None => found = Some(n),
        }
    }
    found.ok_or_else(|| ActionError::NoTorusFixedRepresentative(c.label.clone()))
}

fn level_label(mu: i64) -> String {
    format!("Y{mu}")
}

/// Fixed components with μ-values, dimensions and normal weights, plus criticality and bandwidth.
pub fn fixed_component_report(a: &DiagonalAction, v: &Variety) -> Result<FixedComponentReport, ActionError> {
    let mut components = match v {
        Variety::Pn => fixed_components_pn(a)
            .into_iter()
            .map(|(mu, coords)| FixedComponent {
                label: level_label(mu),
                mu,
                dimension: coords.len() as i64 - 1,
                kind: ComponentKind::LinearSubspace,
                representatives: coords.into_iter().map(FixedPoint::Coordinate).collect(),
                normal: None,
            })
            .collect(),
        Variety::Quadric(q) => quadric_components(a, q)?,
        Variety::Og2(q) => og::og_components(a, q)?,
    };
    for c in &mut components {
        if c.is_empty() {
            continue;
        }
        let n = component_normal_weights(a, v, c)?;
        if n.zero_weights as i64 != c.dimension {
            return Err(ActionError::InconsistentRepresentatives(format!(
                "{} (dimension {} but {} zero tangent weights)",
                c.label, c.dimension, n.zero_weights
            )));
        }
        c.normal = Some(n);
    }
    finish_report(a, v, components)
}

fn quadric_components(a: &DiagonalAction, q: &PairingQuadric) -> Result<Vec<FixedComponent>, ActionError> {
    q.check_smooth(a.len())?;
    let mut out = Vec::new();
    for (mu, coords) in fixed_components_pn(a) {
        let label = level_label(mu);
        let on_quadric: Vec<FixedPoint> =
            coords.iter().filter(|&&c| q.partner(c).is_some()).map(|&c| FixedPoint::Coordinate(c)).collect();
        match restrict_quadric(a, q, mu)? {
            LevelRestriction::IdenticallyZero => out.push(FixedComponent {
                label,
                mu,
                dimension: coords.len() as i64 - 1,
                kind: ComponentKind::LinearSubspace,
                representatives: on_quadric,
                normal: None,
            }),
            // `x_i x_j = 0` on a line: two points.
            LevelRestriction::QuadricOfDim(0) => {
                for (p, suffix) in on_quadric.into_iter().zip(["a", "b"]) {
                    out.push(FixedComponent {
                        label: format!("{label}{suffix}"),
                        mu,
                        dimension: 0,
                        kind: ComponentKind::QuadricInSubspace,
                        representatives: vec![p],
                        normal: None,
                    });
                }
            }
            LevelRestriction::QuadricOfDim(d) => out.push(FixedComponent {
                label,
                mu,
                dimension: d as i64,
                kind: ComponentKind::QuadricInSubspace,
                representatives: on_quadric,
                normal: None,
            }),
            LevelRestriction::Empty => out.push(FixedComponent {
                label,
                mu,
                dimension: -1,
                kind: ComponentKind::Empty,
                representatives: Vec::new(),
                normal: None,
            }),
        }
    }
    Ok(out)
}

fn finish_report(
    a: &DiagonalAction,
    v: &Variety,
    mut components: Vec<FixedComponent>,
) -> Result<FixedComponentReport, ActionError> {
    components.sort_by(|x, y| (x.mu, &x.representatives, &x.label).cmp(&(y.mu, &y.representatives, &y.label)));
    let nonempty: Vec<&FixedComponent> = components.iter().filter(|c| !c.is_empty()).collect();
    if nonempty.len() < 2 {
        return Err(ActionError::TooFewComponents(nonempty.len()));
    }
    let (sink, source) = (nonempty[0], nonempty[nonempty.len() - 1]);
    let mut levels: Vec<i64> = nonempty.iter().map(|c| c.mu).collect();
    levels.dedup();
    let (criticality, bandwidth) = (levels.len() as i64 - 1, source.mu - sink.mu);
    let (sink, source) = (sink.label.clone(), source.label.clone());
    Ok(FixedComponentReport { variety: v.clone(), action: a.clone(), components, criticality, bandwidth, sink, source })
}

pub fn criticality_and_bandwidth(r: &FixedComponentReport) -> Result<(i64, i64), ActionError> {
    let count = r.nonempty().count();
    if count < 2 {
        return Err(ActionError::TooFewComponents(count));
    }
    Ok((r.criticality, r.bandwidth))
}

/// `H_k` on `Q^{2n−1} ⊂ P^{2n}`: weight 1 on `x_0..x_{k−1}`, −1 on their partners, 0 elsewhere.
pub fn quadric_example(n: usize, k: usize) -> Result<(DiagonalAction, Variety), ActionError> {
    if k < 1 || k > n {
        return Err(ActionError::BadExample(format!("quadric example needs n >= k >= 1, got n = {n}, k = {k}")));
    }
    let mut w = vec![0i64; 2 * n + 1];
    for i in 0..k {
        w[i] = 1;
        w[n + 1 + i] = -1;
    }
    Ok((DiagonalAction::new(w, 0)?, Variety::Quadric(PairingQuadric::standard(n))))
}

/// `H_n` on the lines of `Q^{2n−1}`; the action is given by its weights on `C^{2n+1}`.
pub fn og_example(n: usize) -> Result<(DiagonalAction, Variety), ActionError> {
    if n < 3 {
        return Err(ActionError::BadExample(format!("Grassmannian example needs n >= 3, got {n}")));
    }
    let w = (0..2 * n + 1).map(|c| (c < n) as i64 - (c > n) as i64).collect();
    Ok((DiagonalAction::new(w, 0)?, Variety::Og2(PairingQuadric::standard(n))))
}

/// The action-description file: `{"weights": [...], "quadric": {"pairs": [[i,j],...], "squares": [...]},
/// "variety": "pn" | "quadric" | "og2"}`, optionally with `linearization_offset` and `picard_rank_one`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDescription {
    pub weights: Vec<i64>,
    #[serde(default)]
    pub quadric: Option<QuadricDescription>,
    pub variety: String,
    #[serde(default)]
    pub linearization_offset: i64,
    #[serde(default)]
    pub picard_rank_one: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadricDescription {
    #[serde(default)]
    pub pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub squares: Vec<usize>,
}

impl ActionDescription {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn build(&self) -> Result<(DiagonalAction, Variety), ActionError> {
        let a = DiagonalAction::new(self.weights.clone(), self.linearization_offset)?;
        let quadric = || match &self.quadric {
            Some(q) => PairingQuadric::new(q.pairs.clone(), q.squares.clone()),
            None => Err(ActionError::MalformedQuadric(format!("variety {:?} needs a quadric", self.variety))),
        };
        let v = match self.variety.as_str() {
            "pn" => Variety::Pn,
            "quadric" => Variety::Quadric(quadric()?),
            "og2" => Variety::Og2(quadric()?),
            other => return Err(ActionError::BadExample(format!("unknown variety {other:?}"))),
        };
        Ok((a, v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionAnalysis {
    pub report: FixedComponentReport,
    pub fully_equalized: bool,
    pub order_graph: OrderGraph,
    pub am_fm: AmFmSummary,
    pub verdict: PsiVerdict,
}

/// The whole pipeline: fixed components, order graph with AM-FM checks, and the flip-type verdict.
pub fn analyze(a: &DiagonalAction, v: &Variety, picard_rank_one: bool) -> Result<ActionAnalysis, ActionError> {
    let report = fixed_component_report(a, v)?;
    let order_graph = order_graph(&report)?;
    let am_fm = order_graph.am_fm_summary(&report)?;
    let verdict = classify_psi(&report, picard_rank_one)?;
    let fully_equalized = report.fully_equalized();
    Ok(ActionAnalysis { report, fully_equalized, order_graph, am_fm, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn levels(r: &FixedComponentReport) -> Vec<(i64, i64, ComponentKind)> {
        r.components.iter().map(|c| (c.mu, c.dimension, c.kind)).collect()
    }

    #[test]
    fn pn_levels_group_coordinates() {
        let a = DiagonalAction::new(vec![1, 1, 0, 0, -1, -1, 0], 0).unwrap();
        assert_eq!(fixed_components_pn(&a), vec![(-1, vec![4, 5]), (0, vec![2, 3, 6]), (1, vec![0, 1])]);
        let shifted = a.with_offset(3).unwrap();
        assert_eq!(fixed_components_pn(&shifted)[0].0, 2);
        let p1 = DiagonalAction::new(vec![1, -1], 0).unwrap();
        let r = fixed_component_report(&p1, &Variety::Pn).unwrap();
        assert_eq!(levels(&r), vec![(-1, 0, ComponentKind::LinearSubspace), (1, 0, ComponentKind::LinearSubspace)]);
        assert_eq!(criticality_and_bandwidth(&r).unwrap(), (1, 2));
        assert_eq!(DiagonalAction::new(vec![0, 0, 0], 0), Err(ActionError::TrivialAction));
        assert_eq!(DiagonalAction::new(vec![2, 4, 8], 0).unwrap().faithfulness_gcd(), 2);
    }

    #[test]
    fn quadric_levels_restrict() {
        let (a, v) = quadric_example(3, 2).unwrap();
        let Variety::Quadric(q) = &v else { unreachable!() };
        assert_eq!(q.invariant_weight(&a), Ok(0));
        assert_eq!(restrict_quadric(&a, q, 1), Ok(LevelRestriction::IdenticallyZero));
        assert_eq!(restrict_quadric(&a, q, 0), Ok(LevelRestriction::QuadricOfDim(1)));
        let (a3, v3) = quadric_example(3, 3).unwrap();
        let Variety::Quadric(q3) = &v3 else { unreachable!() };
        assert_eq!(restrict_quadric(&a3, q3, 1), Ok(LevelRestriction::IdenticallyZero));
        assert_eq!(restrict_quadric(&a3, q3, 0), Ok(LevelRestriction::Empty));
        let r = fixed_component_report(&a3, &v3).unwrap();
        assert_eq!(r.components.iter().find(|c| c.mu == 1).unwrap().dimension, 2);
        // Only the square survives at level 0, so the k = n fixed locus has two components.
        assert_eq!((r.criticality, r.bandwidth), (1, 2));
        let bad = DiagonalAction::new(vec![1, 0, 0], 0).unwrap();
        let q = PairingQuadric::new(vec![(0, 1)], vec![2]).unwrap();
        assert_eq!(restrict_quadric(&bad, &q, 0), Err(ActionError::NonInvariantForm));
    }

    #[test]
    fn quadric_normal_weights() {
        let (n, k) = (4, 3);
        let (a, v) = quadric_example(n, k).unwrap();
        let r = fixed_component_report(&a, &v).unwrap();
        assert_eq!((r.criticality, r.bandwidth), (2, 2));
        let source = r.source_component();
        assert_eq!((source.mu, source.dimension), (1, k as i64 - 1));
        assert!(source.representatives.contains(&FixedPoint::Coordinate(0)));
        let nw = source.normal.as_ref().unwrap();
        assert!(nw.positive.is_empty());
        assert_eq!(nw.negative.iter().filter(|&&x| x == -1).count(), 2 * n - 2 * k + 1);
        assert_eq!(nw.negative.iter().filter(|&&x| x == -2).count(), k - 1);
        let inner: Vec<_> = r.inner().collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(inner[0].dimension, (2 * n - 2 * k - 1) as i64);
        let inw = inner[0].normal.as_ref().unwrap();
        assert!(inw.equalized);
        assert_eq!((inw.nu_plus(), inw.nu_minus()), (k, k));
        assert!(!r.fully_equalized());
        let (a1, v1) = quadric_example(n, 1).unwrap();
        assert!(fixed_component_report(&a1, &v1).unwrap().fully_equalized());
    }

    #[test]
    fn quadrics_must_be_smooth_pairings() {
        assert!(PairingQuadric::new(vec![(1, 0)], vec![]).is_err());
        assert!(PairingQuadric::new(vec![(0, 1)], vec![1]).is_err());
        assert!(PairingQuadric::new(vec![(0, 1)], vec![2, 3]).is_err());
        let a = DiagonalAction::new(vec![1, -1, 0, 0], 0).unwrap();
        let q = PairingQuadric::new(vec![(0, 1)], vec![2]).unwrap();
        assert!(matches!(fixed_component_report(&a, &Variety::Quadric(q)), Err(ActionError::SingularQuadric(_))));
    }

    #[test]
    fn zero_dimensional_quadric_levels_split() {
        let a = DiagonalAction::new(vec![1, 1, -1, -1], 0).unwrap();
        let q = PairingQuadric::new(vec![(0, 2), (1, 3)], vec![]).unwrap();
        assert_eq!(restrict_quadric(&a, &q, 1), Ok(LevelRestriction::IdenticallyZero));
        // x0 x1 + x2 x3 with weights (1, -1, 0, 0): at level 0 the restriction is x2 x3 = 0.
        let a = DiagonalAction::new(vec![1, -1, 0, 0], 0).unwrap();
        let q = PairingQuadric::new(vec![(0, 1), (2, 3)], vec![]).unwrap();
        let r = fixed_component_report(&a, &Variety::Quadric(q)).unwrap();
        let labels: Vec<&str> = r.components.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["Y-1", "Y0a", "Y0b", "Y1"]);
    }

    #[test]
    fn description_round_trip() {
        let d = ActionDescription::parse(
            r#"{"weights":[1,0,-1],"quadric":{"pairs":[[0,2]],"squares":[1]},"variety":"quadric"}"#,
        )
        .unwrap();
        let (a, v) = d.build().unwrap();
        assert_eq!(a.weights(), &[1, 0, -1]);
        assert_eq!(v, Variety::Quadric(PairingQuadric::standard(1)));
        assert!(ActionDescription::parse(r#"{"weights":[1],"variety":"pn","extra":1}"#).is_err());
        let d = ActionDescription::parse(r#"{"weights":[1,0],"variety":"og2"}"#).unwrap();
        assert!(matches!(d.build(), Err(ActionError::MalformedQuadric(_))));
    }
}
