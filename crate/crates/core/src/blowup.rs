//! Toric weighted blow-ups: the star subdivision of the orthant `σ = ⟨e_0, …, e_{n−1}⟩` along the
//! ray `ω = (0^d, q_d, …, q_{n−1})`, its exceptional fiber, and torus weights on its charts.

use serde::Serialize;

use crate::lattice::{
    Cone, ConeJson, Fan, FanJson, Int, LatticeError, LatticeVector, Rational, SubdivisionReport, ValidationReport,
    gcd_all, rationals_to_json, serialize_int, serialize_ints, serialize_vector, serialize_vectors,
    verify_subdivision,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BlowupError {
    #[error("fixed block d = {d} must satisfy 2 <= d < n = {n} (pass the legacy flag for d < 2)")]
    BadFixedBlock { d: usize, n: usize },
    #[error("weights must be positive integers, got {0}")]
    NonPositiveWeight(Int),
    #[error("weights must be non-decreasing")]
    UnsortedWeights,
    #[error("cone {0} is not a maximal cone of the fan")]
    NotMaximal(String),
    #[error("chart {0} is not full-dimensional, so it has no dual basis")]
    NotFullDimensional(String),
    #[error("star subdivision failed its certificate: {0}")]
    CertificateFailed(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl BlowupError {
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Self::CertificateFailed(_))
    }
}

/// Ambient rank `n`, `d` coordinates of weight zero, then the weights `q_d ≤ … ≤ q_{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedBlowupSpec {
    ambient_rank: usize,
    fixed_block: usize,
    #[serde(serialize_with = "serialize_ints")]
    weights: Vec<Int>,
    /// The ray inserted by the subdivision: the primitive part of `(0^d, q)`.
    #[serde(serialize_with = "serialize_vector")]
    omega: LatticeVector,
    /// `gcd(q)`; when it exceeds 1 the ray `omega` is `(0^d, q) / gcd`.
    #[serde(serialize_with = "serialize_int")]
    weight_gcd: Int,
    legacy: bool,
}

impl WeightedBlowupSpec {
    /// Requires `2 ≤ d < n`, where `n = d + |q|`.
    pub fn new(fixed_block: usize, weights: &[Int]) -> Result<Self, BlowupError> {
        let n = fixed_block + weights.len();
        if fixed_block < 2 {
            return Err(BlowupError::BadFixedBlock { d: fixed_block, n });
        }
        Self::build(fixed_block, weights, false)
    }

    /// Also allows `d ∈ {0, 1}`, e.g. the blow-up of the origin of `C²` for `d = 0`, `q = (1, 1)`.
    pub fn legacy(fixed_block: usize, weights: &[Int]) -> Result<Self, BlowupError> {
        Self::build(fixed_block, weights, fixed_block < 2)
    }

    pub fn from_i64(fixed_block: usize, weights: &[i64]) -> Result<Self, BlowupError> {
        Self::new(fixed_block, &weights.iter().map(|&q| Int::from(q)).collect::<Vec<_>>())
    }

    fn build(fixed_block: usize, weights: &[Int], legacy: bool) -> Result<Self, BlowupError> {
        let n = fixed_block + weights.len();
        if let Some(bad) = weights.iter().find(|q| *q <= &Int::ZERO) {
            return Err(BlowupError::NonPositiveWeight(bad.clone()));
        }
        // At least two weights, so the exceptional locus is a divisor over a positive-dimensional fiber.
        if weights.len() < 2 {
            return Err(BlowupError::BadFixedBlock { d: fixed_block, n });
        }
        if weights.windows(2).any(|w| w[0] > w[1]) {
            return Err(BlowupError::UnsortedWeights);
        }
        let weight_gcd = gcd_all(weights);
        let mut coords = vec![Int::ZERO; fixed_block];
        coords.extend(weights.iter().map(|q| q / &weight_gcd));
        Ok(Self {
            ambient_rank: n,
            fixed_block,
            weights: weights.to_vec(),
            omega: LatticeVector::new(coords)?,
            weight_gcd,
            legacy,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn fixed_block(&self) -> usize {
        self.fixed_block
    }

    pub fn weights(&self) -> &[Int] {
        &self.weights
    }

    pub fn omega(&self) -> &LatticeVector {
        &self.omega
    }

    pub fn weight_gcd(&self) -> &Int {
        &self.weight_gcd
    }

    pub fn is_legacy(&self) -> bool {
        self.legacy
    }

    /// The orthant `σ` being subdivided.
    pub fn sigma(&self) -> Cone {
        let n = self.ambient_rank;
        Cone::simplicial(n, (0..n).map(|j| LatticeVector::unit(n, j))).expect("standard basis")
    }

    /// The face `⟨e_d, …, e_{n−1}⟩` whose relative interior contains `ω`.
    pub fn weighted_face(&self) -> Cone {
        let n = self.ambient_rank;
        Cone::simplicial(n, (self.fixed_block..n).map(|j| LatticeVector::unit(n, j))).expect("standard basis")
    }

    /// The chart omitting `e_i` (`d ≤ i < n`): `ω` together with every other `e_j`.
    pub fn chart_cone(&self, i: usize) -> Cone {
        let n = self.ambient_rank;
        let gens = (0..n).filter(|&j| j != i).map(|j| LatticeVector::unit(n, j)).chain([self.omega.clone()]);
        Cone::simplicial(n, gens).expect("q_i > 0 keeps the chart simplicial")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    /// The coordinate ray `e_i` replaced by `ω`.
    pub omitted: usize,
    pub cone: Cone,
    pub index: Int,
}

impl Chart {
    pub fn is_smooth(&self) -> bool {
        self.index.is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSubdivision {
    pub fan: Fan,
    pub charts: Vec<Chart>,
    pub subdivision: SubdivisionReport,
    pub validation: ValidationReport,
}

impl StarSubdivision {
    pub fn all_charts_smooth(&self) -> bool {
        self.charts.iter().all(Chart::is_smooth)
    }
}

/// The `n − d` charts plus their faces, certified to be a fan subdividing `σ`.
pub fn weighted_star_subdivision(spec: &WeightedBlowupSpec) -> Result<StarSubdivision, BlowupError> {
    weighted_star_subdivision_with(spec, 32)
}

pub fn weighted_star_subdivision_with(spec: &WeightedBlowupSpec, extra_samples: usize) -> Result<StarSubdivision, BlowupError> {
    let charts = (spec.fixed_block..spec.ambient_rank)
        .map(|i| {
            let cone = spec.chart_cone(i);
            let index = cone.index()?;
            Ok(Chart { omitted: i, cone, index })
        })
        .collect::<Result<Vec<_>, BlowupError>>()?;
    let cones: Vec<Cone> = charts.iter().map(|c| c.cone.clone()).collect();
    let subdivision = verify_subdivision(&spec.sigma(), &cones, extra_samples);
    if !subdivision.is_valid() {
        return Err(BlowupError::CertificateFailed(format!("{subdivision:?}")));
    }
    let (fan, validation) = Fan::generated_by(spec.ambient_rank, cones)?.validated();
    if !validation.is_valid() {
        return Err(BlowupError::CertificateFailed(format!("{validation:?}")));
    }
    Ok(StarSubdivision { fan, charts, subdivision, validation })
}

/// The weighted projective space `P(q_d, …, q_{n−1})` over the origin of the fixed block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WPSSignature {
    #[serde(serialize_with = "serialize_ints")]
    pub weights: Vec<Int>,
    #[serde(serialize_with = "serialize_int")]
    pub gcd: Int,
    /// Every weight is 1, so the fiber is an ordinary projective space.
    pub is_straight_projective_space: bool,
}

pub fn exceptional_fiber(spec: &WeightedBlowupSpec) -> WPSSignature {
    WPSSignature {
        weights: spec.weights.clone(),
        gcd: spec.weight_gcd.clone(),
        is_straight_projective_space: spec.weights.iter().all(Int::is_one),
    }
}

/// Weights of `v` on the chart of a maximal cone: the pairings `⟨m_i, v⟩` with the basis `m_i` dual
/// to the generators, i.e. the coordinates of `v` in the generator basis, in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartWeights {
    /// The cone's generators, in the order of `weights`.
    #[serde(serialize_with = "serialize_vectors")]
    pub generators: Vec<LatticeVector>,
    #[serde(serialize_with = "rationals_to_json")]
    pub weights: Vec<Rational>,
    #[serde(serialize_with = "serialize_int")]
    pub index: Int,
    /// The cone is singular: the weights live on the smooth cover of the chart and may be fractional.
    pub non_reduced: bool,
}

impl ChartWeights {
    /// The weights when all are integers.
    pub fn integral(&self) -> Option<Vec<Int>> {
        self.weights.iter().map(|w| w.denominator().is_one().then(|| w.numerator().clone())).collect()
    }

    /// The weight attached to generator `g`.
    pub fn weight_of(&self, g: &LatticeVector) -> Option<&Rational> {
        self.generators.iter().position(|x| x == g).map(|i| &self.weights[i])
    }
}

pub fn chart_weights(f: &Fan, v: &LatticeVector, c: &Cone) -> Result<ChartWeights, BlowupError> {
    if v.rank() != f.ambient_rank() {
        return Err(LatticeError::DimensionMismatch { expected: f.ambient_rank(), found: v.rank() }.into());
    }
    if !f.maximal_cones().contains(c) {
        return Err(BlowupError::NotMaximal(c.to_string()));
    }
    if !c.is_simplicial() {
        return Err(LatticeError::NotSimplicial.into());
    }
    if !c.is_full_dimensional() {
        return Err(BlowupError::NotFullDimensional(c.to_string()));
    }
    let p: Vec<Rational> = v.coords().iter().cloned().map(Rational::from).collect();
    let weights = c.generator_coordinates(&p).expect("full-dimensional cones span everything");
    let index = c.index()?;
    Ok(ChartWeights { generators: c.generators().to_vec(), non_reduced: !index.is_one(), weights, index })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartJson {
    pub omitted: usize,
    pub generators: Vec<Vec<crate::lattice::JsonInt>>,
    #[serde(serialize_with = "serialize_int")]
    pub index: Int,
    pub smooth: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupReport {
    pub spec: WeightedBlowupSpec,
    pub within_hypotheses: bool,
    pub charts: Vec<ChartJson>,
    pub all_charts_smooth: bool,
    pub exceptional_fiber: WPSSignature,
    pub omega_in_weighted_face_interior: bool,
    pub subdivision_valid: bool,
    pub samples_checked: usize,
    pub fan_valid: bool,
    pub fan: FanJson,
}

pub fn blowup_report(spec: &WeightedBlowupSpec) -> Result<BlowupReport, BlowupError> {
    let star = weighted_star_subdivision(spec)?;
    let charts = star
        .charts
        .iter()
        .map(|c| ChartJson {
            omitted: c.omitted,
            generators: ConeJson::from_cone(&c.cone).generators,
            index: c.index.clone(),
            smooth: c.is_smooth(),
        })
        .collect();
    Ok(BlowupReport {
        spec: spec.clone(),
        within_hypotheses: !spec.legacy,
        charts,
        all_charts_smooth: star.all_charts_smooth(),
        exceptional_fiber: exceptional_fiber(spec),
        omega_in_weighted_face_interior: spec.weighted_face().position_of_vector(spec.omega.coords())
            == crate::lattice::ConePosition::Interior,
        subdivision_valid: star.subdivision.is_valid(),
        samples_checked: star.subdivision.samples_checked,
        fan_valid: star.validation.is_valid(),
        fan: star.fan.to_json(),
    })
}
