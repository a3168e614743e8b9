//! The toric cobordism of a diagonal C*-action on affine space: the fans of the two open loci of
//! non-converging orbits, their quotient fans, the flip between the quotients, and the bordism fan
//! obtained by gluing the two line-bundle fans to the orthant.
//!
//! Coordinates are 0-based: `e_i` is `LatticeVector::unit(n+1, i)` and `δ_i` is the facet of the
//! orthant `δ` that omits `e_i`.

use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::lattice::{
    Cone, ConeJson, Fan, FanJson, Int, IntegerMatrix, JsonInt, LatticeError, LatticeVector,
    SubdivisionReport, ValidationReport, gcd_all, quotient_projection, canonical_quotient_projection,
    serialize_int, serialize_ints, serialize_vector, verify_subdivision,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CobordismError {
    #[error("block sizes violate 1 < d1 <= d2 < n+1 (d1 = {d1}, d2 = {d2}, n+1 = {n_plus_1})")]
    BadBlockSizes { d1: usize, d2: usize, n_plus_1: usize },
    #[error("weights must be positive integers, got {0}")]
    NonPositiveWeight(Int),
    #[error("quotient fans do not subdivide the quotient cone: {0}")]
    SubdivisionCheckFailed(String),
    #[error("cone {0} has linearly dependent generators")]
    DegenerateCone(String),
    #[error("fan validation failed: {0}")]
    FanValidationFailed(String),
    #[error("cone {0} is not in the fan")]
    ConeNotInFan(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl CobordismError {
    /// Bad input, as opposed to a failed internal certificate.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Self::BadBlockSizes { .. } | Self::NonPositiveWeight(_) | Self::ConeNotInFan(_) | Self::Lattice(_)
        )
    }
}

/// Weights `q` on the negative and positive coordinate blocks, with `zero_count` fixed coordinates
/// between them. The one-parameter subgroup is `v = (−q_neg, 0^zero_count, q_pos)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CobordismSetup {
    n_plus_1: usize,
    d1: usize,
    d2: usize,
    #[serde(serialize_with = "serialize_ints")]
    q_neg: Vec<Int>,
    zero_count: usize,
    #[serde(serialize_with = "serialize_ints")]
    q_pos: Vec<Int>,
    #[serde(serialize_with = "serialize_vector")]
    v: LatticeVector,
    /// Common factor divided out of the input weights, when it was not 1.
    #[serde(serialize_with = "serialize_optional_int")]
    normalized_by: Option<Int>,
    within_hypotheses: bool,
}

fn serialize_optional_int<S: serde::Serializer>(x: &Option<Int>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => serialize_int(x, s),
        None => s.serialize_none(),
    }
}

impl CobordismSetup {
    /// Requires `|q_neg| ≥ 2` and `|q_pos| ≥ 1`.
    pub fn new(q_neg: &[Int], zero_count: usize, q_pos: &[Int]) -> Result<Self, CobordismError> {
        let setup = Self::new_unchecked(q_neg, zero_count, q_pos)?;
        if !setup.within_hypotheses {
            return Err(CobordismError::BadBlockSizes { d1: setup.d1, d2: setup.d2, n_plus_1: setup.n_plus_1 });
        }
        Ok(setup)
    }

    pub fn from_i64(q_neg: &[i64], zero_count: usize, q_pos: &[i64]) -> Result<Self, CobordismError> {
        let conv = |xs: &[i64]| xs.iter().map(|&x| Int::from(x)).collect::<Vec<_>>();
        Self::new(&conv(q_neg), zero_count, &conv(q_pos))
    }

    /// Also accepts `|q_neg| = 1`; the result is flagged as outside the hypotheses, and flip claims
    /// made from it carry no guarantee. Both blocks must still be nonempty.
    pub fn new_unchecked(q_neg: &[Int], zero_count: usize, q_pos: &[Int]) -> Result<Self, CobordismError> {
        if let Some(bad) = q_neg.iter().chain(q_pos).find(|q| *q <= &Int::ZERO) {
            return Err(CobordismError::NonPositiveWeight(bad.clone()));
        }
        let d1 = q_neg.len();
        let d2 = d1 + zero_count;
        let n_plus_1 = d2 + q_pos.len();
        if d1 == 0 || q_pos.is_empty() {
            return Err(CobordismError::BadBlockSizes { d1, d2, n_plus_1 });
        }
        let g = gcd_all(q_neg.iter().chain(q_pos));
        let (q_neg, q_pos): (Vec<Int>, Vec<Int>) =
            (q_neg.iter().map(|q| q / &g).collect(), q_pos.iter().map(|q| q / &g).collect());
        let mut coords: Vec<Int> = q_neg.iter().map(|q| -q).collect();
        coords.extend(std::iter::repeat_n(Int::ZERO, zero_count));
        coords.extend(q_pos.iter().cloned());
        Ok(Self {
            n_plus_1,
            d1,
            d2,
            q_neg,
            zero_count,
            q_pos,
            v: LatticeVector::new(coords)?,
            normalized_by: (!g.is_one()).then_some(g),
            within_hypotheses: d1 >= 2,
        })
    }

    pub fn n_plus_1(&self) -> usize {
        self.n_plus_1
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn q_neg(&self) -> &[Int] {
        &self.q_neg
    }

    pub fn q_pos(&self) -> &[Int] {
        &self.q_pos
    }

    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    pub fn v(&self) -> &LatticeVector {
        &self.v
    }

    pub fn normalized_by(&self) -> Option<&Int> {
        self.normalized_by.as_ref()
    }

    pub fn within_hypotheses(&self) -> bool {
        self.within_hypotheses
    }

    /// `|v_i|`.
    pub fn weight(&self, i: usize) -> Int {
        let c = &self.v.coords()[i];
        if c < &Int::ZERO { -c } else { c.clone() }
    }

    pub fn negative_indices(&self) -> Range<usize> {
        0..self.d1
    }

    pub fn zero_indices(&self) -> Range<usize> {
        self.d1..self.d2
    }

    pub fn positive_indices(&self) -> Range<usize> {
        self.d2..self.n_plus_1
    }

    /// The orthant `δ = ⟨e_0, …, e_n⟩`.
    pub fn delta(&self) -> Cone {
        Cone::simplicial(self.n_plus_1, (0..self.n_plus_1).map(|j| LatticeVector::unit(self.n_plus_1, j)))
            .expect("standard basis")
    }

    /// `δ_i`, the facet of `δ` omitting `e_i`.
    pub fn delta_face(&self, i: usize) -> Cone {
        Cone::simplicial(
            self.n_plus_1,
            (0..self.n_plus_1).filter(|&j| j != i).map(|j| LatticeVector::unit(self.n_plus_1, j)),
        )
        .expect("standard basis")
    }
}

impl fmt::Display for CobordismSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n+1 = {}, d1 = {}, d2 = {}, v = {}", self.n_plus_1, self.d1, self.d2, self.v)
    }
}

pub fn make_setup(q_neg: &[Int], zero_count: usize, q_pos: &[Int]) -> Result<CobordismSetup, CobordismError> {
    CobordismSetup::new(q_neg, zero_count, q_pos)
}

fn check_valid(what: &str, report: &ValidationReport) -> Result<(), CobordismError> {
    if let Some(v) = report.overlap_violations.first() {
        return Err(CobordismError::FanValidationFailed(format!(
            "{what}: {} and {} overlap at {:?}",
            v.first,
            v.second,
            v.witness.iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    if let Some(v) = report.face_closure_violations.first() {
        return Err(CobordismError::FanValidationFailed(format!("{what}: {} lacks face {}", v.cone, v.missing_face)));
    }
    Ok(())
}

/// The fans `(Δ₊, Δ₋)` in `N` of the loci where the orbit limit at `t → ∞` (resp. `t → 0`) fails to
/// exist. A face of `δ` lies in `Δ₊` iff it omits some positive-block ray, i.e. `Δ₊` is generated
/// by the facets `δ_i`, `i` positive; likewise `Δ₋` with the negative block.
pub fn fans_b(setup: &CobordismSetup) -> Result<(Fan, Fan), CobordismError> {
    let r = setup.n_plus_1;
    let build = |what: &str, idx: Range<usize>| -> Result<Fan, CobordismError> {
        let (fan, report) = Fan::generated_by(r, idx.map(|i| setup.delta_face(i)))?.validated();
        check_valid(what, &report)?;
        Ok(fan)
    };
    Ok((build("Δ₊", setup.positive_indices())?, build("Δ₋", setup.negative_indices())?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientOptions {
    /// Use the Hermite-normal-form basis of `N/Zv` instead of the direct completion.
    pub canonical_basis: bool,
    /// Weighted sample points checked on top of the structured ones.
    pub extra_samples: usize,
}

impl Default for QuotientOptions {
    fn default() -> Self {
        Self { canonical_basis: false, extra_samples: 32 }
    }
}

/// A maximal quotient cone `δ̄_i = π(δ_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCone {
    pub omitted: usize,
    pub cone: Cone,
    /// Index of the lattice spanned by the primitive generators inside `N̄`.
    pub index: Int,
    /// `|det|` of the images `π(e_j)`, `j ≠ i`, before passing to primitive parts; always `q_i`.
    pub image_determinant: Int,
}

impl QuotientCone {
    pub fn is_smooth(&self) -> bool {
        self.index.is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobordismFans {
    pub delta: Cone,
    pub delta_plus: Fan,
    pub delta_minus: Fan,
    pub projection: IntegerMatrix,
    /// `π(δ)`, the cone of the affine quotient; not simplicial in general.
    pub delta_bar: Cone,
    /// `π(Δ₊)`: the fan of the sink `X₋`.
    pub quot_plus: Fan,
    pub quot_plus_cones: Vec<QuotientCone>,
    /// `π(Δ₋)`: the fan of the source `X₊`.
    pub quot_minus: Fan,
    pub quot_minus_cones: Vec<QuotientCone>,
    pub plus_subdivision: SubdivisionReport,
    pub minus_subdivision: SubdivisionReport,
}

pub fn quotient_fans(setup: &CobordismSetup) -> Result<CobordismFans, CobordismError> {
    quotient_fans_with(setup, &QuotientOptions::default())
}

/// The projection `π` and the maximal quotient cones, without the subdivision certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCones {
    pub projection: IntegerMatrix,
    /// `π(e_j)` for every `j`.
    pub images: Vec<LatticeVector>,
    /// `π(δ_i)`, `i` positive: the sink side.
    pub plus: Vec<QuotientCone>,
    /// `π(δ_i)`, `i` negative: the source side.
    pub minus: Vec<QuotientCone>,
}

pub fn quotient_cones(setup: &CobordismSetup, canonical_basis: bool) -> Result<QuotientCones, CobordismError> {
    let projection =
        if canonical_basis { canonical_quotient_projection(setup.v())? } else { quotient_projection(setup.v())? };
    let n = projection.nrows();
    let images: Vec<LatticeVector> =
        (0..setup.n_plus_1).map(|j| LatticeVector::new(projection.column(j)).expect("n ≥ 1")).collect();
    let quotient_cone = |i: usize| -> Result<QuotientCone, CobordismError> {
        let cols: Vec<LatticeVector> = (0..setup.n_plus_1).filter(|&j| j != i).map(|j| images[j].clone()).collect();
        let det = IntegerMatrix::from_columns(&cols)?.determinant()?;
        let cone = Cone::simplicial(n, cols).map_err(|_| {
            CobordismError::SubdivisionCheckFailed(format!("the image of δ_{i} is not simplicial of dimension {n}"))
        })?;
        let index = cone.index()?;
        Ok(QuotientCone { omitted: i, cone, index, image_determinant: if det < Int::ZERO { -det } else { det } })
    };
    let plus = setup.positive_indices().map(quotient_cone).collect::<Result<Vec<_>, _>>()?;
    let minus = setup.negative_indices().map(quotient_cone).collect::<Result<Vec<_>, _>>()?;
    Ok(QuotientCones { projection, images, plus, minus })
}

pub fn quotient_fans_with(setup: &CobordismSetup, options: &QuotientOptions) -> Result<CobordismFans, CobordismError> {
    let (delta_plus, delta_minus) = fans_b(setup)?;
    let QuotientCones { projection, images, plus: quot_plus_cones, minus: quot_minus_cones } =
        quotient_cones(setup, options.canonical_basis)?;
    let n = projection.nrows();
    let delta_bar = Cone::new(n, images)?;

    let subdivide = |what: &str, pieces: &[QuotientCone]| -> Result<(Fan, SubdivisionReport), CobordismError> {
        let cones: Vec<Cone> = pieces.iter().map(|p| p.cone.clone()).collect();
        let report = verify_subdivision(&delta_bar, &cones, options.extra_samples);
        if !report.is_valid() {
            return Err(CobordismError::SubdivisionCheckFailed(format!("{what}: {report:?}")));
        }
        let (fan, validation) = Fan::generated_by(n, cones)?.validated();
        check_valid(what, &validation)?;
        Ok((fan, report))
    };
    let (quot_plus, plus_subdivision) = subdivide("π(Δ₊)", &quot_plus_cones)?;
    let (quot_minus, minus_subdivision) = subdivide("π(Δ₋)", &quot_minus_cones)?;

    Ok(CobordismFans {
        delta: setup.delta(),
        delta_plus,
        delta_minus,
        projection,
        delta_bar,
        quot_plus,
        quot_plus_cones,
        quot_minus,
        quot_minus_cones,
        plus_subdivision,
        minus_subdivision,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FlipKind {
    Atiyah,
    NonEqualized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipClassification {
    pub kind: FlipKind,
    /// The nonzero entries of `v`, sorted.
    #[serde(serialize_with = "serialize_ints")]
    pub nonzero_weights: Vec<Int>,
    /// Every maximal cone of `π(Δ₊)` is smooth, i.e. the sink `X₋` is smooth.
    pub smooth_minus: bool,
    /// Every maximal cone of `π(Δ₋)` is smooth, i.e. the source `X₊` is smooth.
    pub smooth_plus: bool,
    /// Whether `kind == Atiyah` coincides with `smooth_minus && smooth_plus`. It need not: a
    /// non-primitive image `π(e_j)` divides the index of every cone through it.
    pub characterizations_agree: bool,
    pub within_hypotheses: bool,
}

pub fn classify_flip(setup: &CobordismSetup) -> Result<FlipClassification, CobordismError> {
    Ok(classify_flip_from(setup, &quotient_fans(setup)?))
}

pub fn classify_flip_from(setup: &CobordismSetup, fans: &CobordismFans) -> FlipClassification {
    classify_quotient_cones(setup, &fans.quot_plus_cones, &fans.quot_minus_cones)
}

/// The weight test and the smoothness test side by side, from the maximal quotient cones alone.
pub fn classify_quotient_cones(setup: &CobordismSetup, plus: &[QuotientCone], minus: &[QuotientCone]) -> FlipClassification {
    let mut nonzero_weights: Vec<Int> = setup.v().coords().iter().filter(|x| !x.is_zero()).cloned().collect();
    nonzero_weights.sort();
    let atiyah = nonzero_weights.iter().all(|w| w == &Int::ONE || w == &Int::NEG_ONE);
    let smooth_minus = plus.iter().all(QuotientCone::is_smooth);
    let smooth_plus = minus.iter().all(QuotientCone::is_smooth);
    FlipClassification {
        kind: if atiyah { FlipKind::Atiyah } else { FlipKind::NonEqualized },
        nonzero_weights,
        smooth_minus,
        smooth_plus,
        characterizations_agree: atiyah == (smooth_minus && smooth_plus),
        within_hypotheses: setup.within_hypotheses(),
    }
}

/// The line-bundle fans `Λ₊` (maximal cones `⟨δ_i, −v⟩`, `i` positive) and `Λ₋` (`⟨δ_i, v⟩`,
/// `i` negative), each validated on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleFans {
    pub lambda_plus: Fan,
    pub lambda_minus: Fan,
    pub plus_report: ValidationReport,
    pub minus_report: ValidationReport,
}

fn bundle_cone(setup: &CobordismSetup, i: usize, w: &LatticeVector) -> Result<Cone, CobordismError> {
    let r = setup.n_plus_1;
    let gens = (0..r).filter(|&j| j != i).map(|j| LatticeVector::unit(r, j)).chain([w.clone()]);
    Cone::simplicial(r, gens).map_err(|_| CobordismError::DegenerateCone(format!("⟨δ_{i}, {w}⟩")))
}

pub fn bundle_fans(setup: &CobordismSetup) -> Result<BundleFans, CobordismError> {
    let r = setup.n_plus_1;
    let neg_v = setup.v().neg();
    let plus = setup.positive_indices().map(|i| bundle_cone(setup, i, &neg_v)).collect::<Result<Vec<_>, _>>()?;
    let minus = setup.negative_indices().map(|i| bundle_cone(setup, i, setup.v())).collect::<Result<Vec<_>, _>>()?;
    let (lambda_plus, plus_report) = Fan::generated_by(r, plus)?.validated();
    check_valid("Λ₊", &plus_report)?;
    let (lambda_minus, minus_report) = Fan::generated_by(r, minus)?.validated();
    check_valid("Λ₋", &minus_report)?;
    Ok(BundleFans { lambda_plus, lambda_minus, plus_report, minus_report })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLocus {
    /// `π(Δ₊)`.
    pub sink_fan: Fan,
    /// `π(Δ₋)`.
    pub source_fan: Fan,
    /// Dimension of the inner fixed component `C^{d2−d1}`.
    pub inner_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BordismFan {
    /// `Λ₊ ∪ faces(δ) ∪ Λ₋`.
    pub sigma_tilde: Fan,
    pub lambda_plus: Fan,
    pub lambda_minus: Fan,
    pub fixed_locus: FixedLocus,
    pub sigma_tilde_report: ValidationReport,
    pub lambda_plus_report: ValidationReport,
    pub lambda_minus_report: ValidationReport,
}

pub fn bordism_fan(setup: &CobordismSetup) -> Result<BordismFan, CobordismError> {
    bordism_fan_from(setup, &quotient_fans(setup)?)
}

pub fn bordism_fan_from(setup: &CobordismSetup, fans: &CobordismFans) -> Result<BordismFan, CobordismError> {
    let bundles = bundle_fans(setup)?;
    let mut maximal = bundles.lambda_plus.maximal_cones();
    maximal.push(setup.delta());
    maximal.extend(bundles.lambda_minus.maximal_cones());
    let (sigma_tilde, sigma_tilde_report) = Fan::generated_by(setup.n_plus_1, maximal)?.validated();
    check_valid("Σ̃", &sigma_tilde_report)?;
    Ok(BordismFan {
        sigma_tilde,
        lambda_plus: bundles.lambda_plus,
        lambda_minus: bundles.lambda_minus,
        fixed_locus: FixedLocus {
            sink_fan: fans.quot_plus.clone(),
            source_fan: fans.quot_minus.clone(),
            inner_dim: setup.d2 - setup.d1,
        },
        sigma_tilde_report,
        lambda_plus_report: bundles.plus_report,
        lambda_minus_report: bundles.minus_report,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LimitDirection {
    ToZero,
    ToInfinity,
}

#[allow(clippy::large_enum_variant)] // short-lived return values
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitLimit {
    /// The limit point lies in the orbit of this cone.
    Cone(Cone),
    NoLimit,
}

/// Where `λ_w(t)·x_σ` goes as `t → 0` (or `t → ∞`, using `−w`): the orbit of the smallest cone
/// `τ ⊇ σ` of `f` with `w ∈ τ + span σ`, if any.
pub fn limit_in_fan(
    f: &Fan,
    sigma: &Cone,
    w: &LatticeVector,
    direction: LimitDirection,
) -> Result<OrbitLimit, CobordismError> {
    if !f.contains(sigma) {
        return Err(CobordismError::ConeNotInFan(sigma.to_string()));
    }
    if w.rank() != f.ambient_rank() {
        return Err(LatticeError::DimensionMismatch { expected: f.ambient_rank(), found: w.rank() }.into());
    }
    let w = match direction {
        LimitDirection::ToZero => w.clone(),
        LimitDirection::ToInfinity => w.neg(),
    };
    // The answer is a face of some maximal cone containing sigma; smallest wins, ties by order.
    let mut best: Option<Cone> = None;
    let mut offer = |tau: Cone| {
        if best.as_ref().is_none_or(|b| (tau.dim(), &tau) < (b.dim(), b)) {
            best = Some(tau);
        }
    };
    for m in f.maximal_cones() {
        if !sigma.is_face_of(&m) {
            continue;
        }
        if m.is_simplicial() {
            // w ∈ τ + span σ iff its coefficients off σ are non-negative; τ adds the positive ones.
            let Some(signs) = m.generator_signs(&w) else {
                continue;
            };
            let in_sigma = |g: &LatticeVector| sigma.generators().binary_search(g).is_ok();
            let gens = m.generators();
            if gens.iter().zip(&signs).any(|(g, s)| s.is_lt() && !in_sigma(g)) {
                continue;
            }
            let tau: Vec<LatticeVector> =
                gens.iter().zip(&signs).filter(|(g, s)| s.is_gt() || in_sigma(g)).map(|(g, _)| g.clone()).collect();
            offer(Cone::simplicial(f.ambient_rank(), tau)?);
        } else {
            for tau in m.faces() {
                if !sigma.is_face_of(&tau) {
                    continue;
                }
                let gens = tau.generators().iter().cloned().chain(sigma.generators().iter().map(LatticeVector::neg));
                if Cone::new(f.ambient_rank(), gens)?.contains(&w) {
                    offer(tau);
                }
            }
        }
    }
    Ok(best.map_or(OrbitLimit::NoLimit, OrbitLimit::Cone))
}

/// Orbit limits of the generic point `x_{0}` along `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericLimits {
    pub to_zero: Option<ConeJson>,
    pub to_zero_side: &'static str,
    pub to_infinity: Option<ConeJson>,
    pub to_infinity_side: &'static str,
}

pub fn generic_limits(setup: &CobordismSetup, bordism: &BordismFan) -> Result<GenericLimits, CobordismError> {
    let f = &bordism.sigma_tilde;
    let zero = Cone::zero(setup.n_plus_1);
    let side = |limit: &OrbitLimit| -> &'static str {
        match limit {
            OrbitLimit::Cone(c) if c.generators().contains(setup.v()) => "Λ₋",
            OrbitLimit::Cone(c) if c.generators().contains(&setup.v().neg()) => "Λ₊",
            OrbitLimit::Cone(_) => "faces(δ)",
            OrbitLimit::NoLimit => "none",
        }
    };
    let to_zero = limit_in_fan(f, &zero, setup.v(), LimitDirection::ToZero)?;
    let to_infinity = limit_in_fan(f, &zero, setup.v(), LimitDirection::ToInfinity)?;
    let json = |l: &OrbitLimit| match l {
        OrbitLimit::Cone(c) => Some(ConeJson::from_cone(c)),
        OrbitLimit::NoLimit => None,
    };
    Ok(GenericLimits {
        to_zero: json(&to_zero),
        to_zero_side: side(&to_zero),
        to_infinity: json(&to_infinity),
        to_infinity_side: side(&to_infinity),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientConeJson {
    pub omitted: usize,
    pub generators: Vec<Vec<JsonInt>>,
    #[serde(serialize_with = "serialize_int")]
    pub index: Int,
    #[serde(serialize_with = "serialize_int")]
    pub image_determinant: Int,
}

impl QuotientConeJson {
    fn from_cone(c: &QuotientCone) -> Self {
        Self {
            omitted: c.omitted,
            generators: ConeJson::from_cone(&c.cone).generators,
            index: c.index.clone(),
            image_determinant: c.image_determinant.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationSummary {
    pub sink_fan_subdivides: bool,
    pub source_fan_subdivides: bool,
    pub samples_checked: usize,
    pub lambda_plus_valid: bool,
    pub lambda_minus_valid: bool,
    pub sigma_tilde_valid: bool,
    pub sigma_tilde_pairs_checked: usize,
}

/// Everything the pipeline computes for one setup, in serializable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CobordismReport {
    pub setup: CobordismSetup,
    pub delta_plus_maximal: Vec<ConeJson>,
    pub delta_minus_maximal: Vec<ConeJson>,
    pub projection: Vec<Vec<JsonInt>>,
    pub delta_bar: ConeJson,
    /// `π(Δ₊)`, the sink side.
    pub sink_cones: Vec<QuotientConeJson>,
    /// `π(Δ₋)`, the source side.
    pub source_cones: Vec<QuotientConeJson>,
    pub classification: FlipClassification,
    pub lambda_plus_maximal: Vec<ConeJson>,
    pub lambda_minus_maximal: Vec<ConeJson>,
    pub sigma_tilde_maximal: Vec<ConeJson>,
    pub sigma_tilde: FanJson,
    pub inner_dim: usize,
    pub generic_limits: GenericLimits,
    pub verification: VerificationSummary,
}

pub fn cobordism_report(setup: &CobordismSetup, options: &QuotientOptions) -> Result<CobordismReport, CobordismError> {
    let fans = quotient_fans_with(setup, options)?;
    let classification = classify_flip_from(setup, &fans);
    let bordism = bordism_fan_from(setup, &fans)?;
    let generic_limits = generic_limits(setup, &bordism)?;
    let maximal = |f: &Fan| f.maximal_cones().iter().map(ConeJson::from_cone).collect::<Vec<_>>();
    Ok(CobordismReport {
        setup: setup.clone(),
        delta_plus_maximal: maximal(&fans.delta_plus),
        delta_minus_maximal: maximal(&fans.delta_minus),
        projection: fans.projection.rows().iter().map(|r| r.iter().cloned().map(JsonInt).collect()).collect(),
        delta_bar: ConeJson::from_cone(&fans.delta_bar),
        sink_cones: fans.quot_plus_cones.iter().map(QuotientConeJson::from_cone).collect(),
        source_cones: fans.quot_minus_cones.iter().map(QuotientConeJson::from_cone).collect(),
        classification,
        lambda_plus_maximal: maximal(&bordism.lambda_plus),
        lambda_minus_maximal: maximal(&bordism.lambda_minus),
        sigma_tilde_maximal: maximal(&bordism.sigma_tilde),
        sigma_tilde: bordism.sigma_tilde.to_json(),
        inner_dim: bordism.fixed_locus.inner_dim,
        generic_limits,
        verification: VerificationSummary {
            sink_fan_subdivides: fans.plus_subdivision.is_valid(),
            source_fan_subdivides: fans.minus_subdivision.is_valid(),
            samples_checked: fans.plus_subdivision.samples_checked + fans.minus_subdivision.samples_checked,
            lambda_plus_valid: bordism.lambda_plus_report.is_valid(),
            lambda_minus_valid: bordism.lambda_minus_report.is_valid(),
            sigma_tilde_valid: bordism.sigma_tilde_report.is_valid(),
            sigma_tilde_pairs_checked: bordism.sigma_tilde_report.pairs_checked,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(r: usize, gens: &[&[i64]]) -> Cone {
        Cone::new(r, gens.iter().map(|g| LatticeVector::from_i64(g))).unwrap()
    }

    fn unit_cone(r: usize, idx: &[usize]) -> Cone {
        Cone::new(r, idx.iter().map(|&i| LatticeVector::unit(r, i))).unwrap()
    }

    fn setup(q_neg: &[i64], z: usize, q_pos: &[i64]) -> CobordismSetup {
        CobordismSetup::from_i64(q_neg, z, q_pos).unwrap()
    }

    #[test]
    fn setup_assembles_v_in_block_order() {
        assert_eq!(setup(&[2, 1], 0, &[1]).v(), &LatticeVector::from_i64(&[-2, -1, 1]));
        assert_eq!(setup(&[1, 1], 0, &[1, 1]).v(), &LatticeVector::from_i64(&[-1, -1, 1, 1]));
        let s = setup(&[2, 2], 1, &[2]);
        assert_eq!(s.v(), &LatticeVector::from_i64(&[-1, -1, 0, 1]));
        assert_eq!(s.normalized_by(), Some(&Int::from(2)));
        assert_eq!((s.d1(), s.d2(), s.n_plus_1()), (2, 3, 4));
    }

    #[test]
    fn setup_rejects_bad_blocks_and_weights() {
        assert!(matches!(
            CobordismSetup::from_i64(&[1], 1, &[1]),
            Err(CobordismError::BadBlockSizes { d1: 1, .. })
        ));
        assert!(matches!(CobordismSetup::from_i64(&[1, 1], 0, &[]), Err(CobordismError::BadBlockSizes { .. })));
        assert!(matches!(CobordismSetup::from_i64(&[1, 0], 0, &[1]), Err(CobordismError::NonPositiveWeight(_))));
        let loose = CobordismSetup::new_unchecked(&[Int::ONE], 1, &[Int::ONE]).unwrap();
        assert!(!loose.within_hypotheses());
    }

    #[test]
    fn loci_fans_for_the_three_dimensional_example() {
        let (plus, minus) = fans_b(&setup(&[2, 1], 0, &[1])).unwrap();
        assert_eq!(plus.cones_of_dim(2), vec![unit_cone(3, &[0, 1])]);
        assert_eq!(plus.maximal_cones(), vec![unit_cone(3, &[0, 1])]);
        let mut m = minus.maximal_cones();
        m.sort();
        let mut expected = vec![unit_cone(3, &[0, 2]), unit_cone(3, &[1, 2])];
        expected.sort();
        assert_eq!(m, expected);
        assert!(plus.closed_under_faces() && minus.closed_under_faces());
    }

    #[test]
    fn loci_fans_for_the_quadric_cone() {
        // Maximal cones are the facets omitting one ray of the relevant block.
        let (plus, minus) = fans_b(&setup(&[1, 1], 0, &[1, 1])).unwrap();
        assert_eq!(plus.maximal_cones().len(), 2);
        assert!(plus.maximal_cones().iter().all(|c| c.generators().contains(&LatticeVector::unit(4, 0))));
        assert_eq!(minus.maximal_cones().len(), 2);
        assert!(minus.maximal_cones().iter().all(|c| c.generators().contains(&LatticeVector::unit(4, 3))));
    }

    #[test]
    fn quotient_fans_of_the_three_dimensional_example() {
        let fans = quotient_fans(&setup(&[2, 1], 0, &[1])).unwrap();
        assert_eq!(fans.projection, IntegerMatrix::from_i64(&[[1, 0, 2], [0, 1, 1]]));
        let minus: Vec<(Cone, Int)> = fans.quot_minus_cones.iter().map(|c| (c.cone.clone(), c.index.clone())).collect();
        assert_eq!(
            minus,
            vec![(cone(2, &[&[0, 1], &[2, 1]]), Int::from(2)), (cone(2, &[&[1, 0], &[2, 1]]), Int::ONE)]
        );
        assert_eq!(fans.quot_plus_cones.len(), 1);
        assert_eq!(fans.quot_plus_cones[0].cone, cone(2, &[&[1, 0], &[0, 1]]));
        assert_eq!(fans.quot_plus_cones[0].index, Int::ONE);
        assert!(fans.plus_subdivision.is_valid() && fans.minus_subdivision.is_valid());
        // π(e_2) = 2π(e_0) + π(e_1) is not extremal when the positive block is a single ray.
        assert_eq!(fans.delta_bar, cone(2, &[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn quadric_cone_has_two_small_resolutions() {
        let fans = quotient_fans(&setup(&[1, 1], 0, &[1, 1])).unwrap();
        assert!(fans.quot_plus_cones.iter().chain(&fans.quot_minus_cones).all(QuotientCone::is_smooth));
        assert_eq!(fans.quot_plus_cones.len(), 2);
        assert_eq!(fans.quot_minus_cones.len(), 2);
        let c = classify_flip_from(&setup(&[1, 1], 0, &[1, 1]), &fans);
        assert_eq!(c.kind, FlipKind::Atiyah);
        assert!(c.characterizations_agree);
    }

    #[test]
    fn canonical_basis_gives_the_same_indices() {
        let s = setup(&[3, 2], 1, &[2, 1]);
        let a = quotient_fans(&s).unwrap();
        let b = quotient_fans_with(&s, &QuotientOptions { canonical_basis: true, extra_samples: 8 }).unwrap();
        let idx = |f: &CobordismFans| f.quot_minus_cones.iter().map(|c| c.index.clone()).collect::<Vec<_>>();
        assert_eq!(idx(&a), idx(&b));
    }

    #[test]
    fn flip_classification_examples() {
        assert_eq!(classify_flip(&setup(&[1, 1], 0, &[1, 1])).unwrap().kind, FlipKind::Atiyah);
        assert_eq!(classify_flip(&setup(&[1, 1], 0, &[1])).unwrap().kind, FlipKind::Atiyah);
        let c = classify_flip(&setup(&[2, 1], 0, &[1])).unwrap();
        assert_eq!(c.kind, FlipKind::NonEqualized);
        assert!(!c.smooth_plus && c.smooth_minus && c.characterizations_agree);
    }

    #[test]
    fn non_primitive_images_hide_the_weights() {
        // v = (−2,−2,1): π(e_2) = 2·(primitive), so every quotient cone is smooth though q ≠ 1.
        let s = setup(&[2, 2], 0, &[1]);
        let fans = quotient_fans(&s).unwrap();
        for c in fans.quot_plus_cones.iter().chain(&fans.quot_minus_cones) {
            assert_eq!(c.image_determinant, s.weight(c.omitted));
            assert!(c.is_smooth());
        }
        let c = classify_flip_from(&s, &fans);
        assert_eq!(c.kind, FlipKind::NonEqualized);
        assert!(!c.characterizations_agree);
    }

    #[test]
    fn bundle_fans_of_the_three_dimensional_example() {
        let b = bundle_fans(&setup(&[2, 1], 0, &[1])).unwrap();
        assert_eq!(b.lambda_plus.maximal_cones(), vec![cone(3, &[&[1, 0, 0], &[0, 1, 0], &[2, 1, -1]])]);
        let mut minus = b.lambda_minus.maximal_cones();
        minus.sort();
        let mut expected =
            vec![cone(3, &[&[0, 1, 0], &[0, 0, 1], &[-2, -1, 1]]), cone(3, &[&[1, 0, 0], &[0, 0, 1], &[-2, -1, 1]])];
        expected.sort();
        assert_eq!(minus, expected);
    }

    #[test]
    fn bordism_fan_of_the_three_dimensional_example() {
        let s = setup(&[2, 1], 0, &[1]);
        let b = bordism_fan(&s).unwrap();
        // One cone from Λ₊, the orthant, two from Λ₋.
        assert_eq!(b.sigma_tilde.maximal_cones().len(), 4);
        assert!(b.sigma_tilde_report.is_valid());
        assert!(b.sigma_tilde.contains(&s.delta()));
        assert_eq!(b.fixed_locus.inner_dim, 0);
        assert_eq!(bordism_fan(&setup(&[1, 1], 2, &[3])).unwrap().fixed_locus.inner_dim, 2);
    }

    #[test]
    fn orbit_limits() {
        let ray = Fan::face_fan(&cone(1, &[&[1]]));
        let zero = Cone::zero(1);
        let w = LatticeVector::from_i64(&[1]);
        assert_eq!(limit_in_fan(&ray, &zero, &w, LimitDirection::ToZero).unwrap(), OrbitLimit::Cone(cone(1, &[&[1]])));
        assert_eq!(limit_in_fan(&ray, &zero, &w, LimitDirection::ToInfinity).unwrap(), OrbitLimit::NoLimit);

        let s = setup(&[2, 1], 0, &[1]);
        let b = bordism_fan(&s).unwrap();
        let z3 = Cone::zero(3);
        assert_eq!(
            limit_in_fan(&b.sigma_tilde, &z3, s.v(), LimitDirection::ToZero).unwrap(),
            OrbitLimit::Cone(cone(3, &[&[-2, -1, 1]]))
        );
        assert_eq!(
            limit_in_fan(&b.sigma_tilde, &z3, s.v(), LimitDirection::ToInfinity).unwrap(),
            OrbitLimit::Cone(cone(3, &[&[2, 1, -1]]))
        );
        let limits = generic_limits(&s, &b).unwrap();
        assert_eq!((limits.to_zero_side, limits.to_infinity_side), ("Λ₋", "Λ₊"));
    }

    #[test]
    fn limits_from_a_torus_fixed_ray() {
        // From the orbit of ⟨e_0⟩ in the orthant fan, flowing along e_1 reaches ⟨e_0,e_1⟩.
        let f = Fan::face_fan(&unit_cone(2, &[0, 1]));
        let sigma = unit_cone(2, &[0]);
        let w = LatticeVector::from_i64(&[-5, 1]);
        assert_eq!(limit_in_fan(&f, &sigma, &w, LimitDirection::ToZero).unwrap(), OrbitLimit::Cone(unit_cone(2, &[0, 1])));
        let stray = cone(2, &[&[1, 1]]);
        assert!(matches!(limit_in_fan(&f, &stray, &w, LimitDirection::ToZero), Err(CobordismError::ConeNotInFan(_))));
    }

    #[test]
    fn report_serializes() {
        let r = cobordism_report(&setup(&[2, 1], 0, &[1]), &QuotientOptions::default()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["setup"]["v"], serde_json::json!([-2, -1, 1]));
        assert_eq!(json["classification"]["kind"], "NonEqualized");
        assert_eq!(json["sigma_tilde_maximal"].as_array().unwrap().len(), 4);
    }
}
