use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use super::LatticeError;
use super::dual::{DualDescription, dual_description};
use super::int::{Int, Rational, abs, rational_sign, rsum, sign, to_i64, to_rationals};
use super::lp::{LpOutcome, maximize};
use super::matrix::{Adjugate, IntegerMatrix, left_kernel, pivot_columns};
use super::small;
use super::snf::snf;
use super::vector::LatticeVector;

/// Position of a point relative to a cone. `Interior` means the relative interior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ConePosition {
    Interior,
    Boundary,
    Outside,
}

impl ConePosition {
    pub fn is_inside(self) -> bool {
        self != ConePosition::Outside
    }
}

/// Coordinates in the generator basis of a simplicial cone. Methods take the cone's generators so
/// the arbitrary-precision form can be built on demand.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    /// Coordinates on which the generators are independent.
    rows: Vec<usize>,
    /// Machine-integer form, when every entry fits.
    small: Option<SmallFrame>,
    wide: OnceLock<WideFrame>,
}

#[derive(Clone, Debug)]
struct SmallFrame {
    /// Adjugate times the sign of the determinant: it maps `x` to a positive multiple of its coordinates.
    adj: Vec<Vec<i64>>,
    equalities: Vec<Vec<i64>>,
    det: i64,
}

#[derive(Clone, Debug)]
struct WideFrame {
    adj: Adjugate,
    equalities: Vec<Vec<Int>>,
}

impl WideFrame {
    fn new(ambient_rank: usize, gens: &[LatticeVector], rows: &[usize]) -> Self {
        let g: Vec<Vec<Int>> =
            (0..ambient_rank).map(|i| gens.iter().map(|v| v.coords()[i].clone()).collect()).collect();
        let square: Vec<Vec<Int>> = rows.iter().map(|&i| g[i].clone()).collect();
        let adj = Adjugate::of(&square).expect("simplicial generators are independent");
        let equalities = if gens.len() == ambient_rank { Vec::new() } else { left_kernel(&g, gens.len()) };
        Self { adj, equalities }
    }
}

impl Frame {
    fn new(ambient_rank: usize, gens: &[LatticeVector]) -> Self {
        if gens.len() == ambient_rank {
            let square: Option<Vec<Vec<i64>>> =
                (0..ambient_rank).map(|i| gens.iter().map(|v| to_i64(&v.coords()[i])).collect()).collect();
            if let Some(Some((det, mut adj))) = square.and_then(small::adjugate_of) {
                let oriented =
                    det > 0 || adj.iter_mut().flatten().try_for_each(|x| x.checked_neg().map(|y| *x = y)).is_some();
                if oriented {
                    return Self {
                        rows: (0..ambient_rank).collect(),
                        small: Some(SmallFrame { adj, equalities: Vec::new(), det }),
                        wide: OnceLock::new(),
                    };
                }
            }
        }
        let rows = if gens.len() == ambient_rank {
            (0..ambient_rank).collect()
        } else {
            let as_rows: Vec<Vec<Int>> = gens.iter().map(|v| v.coords().to_vec()).collect();
            pivot_columns(&as_rows, ambient_rank)
        };
        let wide = WideFrame::new(ambient_rank, gens, &rows);
        let flip = !wide.adj.det_sign_positive();
        let narrow = |m: &[Vec<Int>], flip: bool| -> Option<Vec<Vec<i64>>> {
            m.iter().map(|r| r.iter().map(|x| to_i64(&if flip { -x } else { x.clone() })).collect()).collect()
        };
        let small = narrow(&wide.adj.adj, flip)
            .zip(narrow(&wide.equalities, false))
            .zip(to_i64(&wide.adj.det))
            .map(|((adj, equalities), det)| SmallFrame { adj, equalities, det });
        Self { rows, small, wide: OnceLock::from(wide) }
    }

    fn wide(&self, gens: &[LatticeVector]) -> &WideFrame {
        self.wide.get_or_init(|| WideFrame::new(gens[0].rank(), gens, &self.rows))
    }

    pub fn det(&self, gens: &[LatticeVector]) -> Int {
        match &self.small {
            Some(s) => Int::from(s.det),
            None => self.wide(gens).adj.det.clone(),
        }
    }

    /// Signs of the generator coordinates of `x`, or `None` off the span.
    pub fn coordinate_signs(&self, x: &[Int], gens: &[LatticeVector]) -> Option<Vec<Ordering>> {
        if let Some(s) = &self.small
            && let Some(xs) = x.iter().map(to_i64).collect::<Option<Vec<i64>>>()
        {
            let on_span = s.equalities.iter().map(|e| small::dot(e, &xs).map(|d| d == 0)).collect::<Option<Vec<bool>>>();
            let picked: Vec<i64> = self.rows.iter().map(|&i| xs[i]).collect();
            let signs = s.adj.iter().map(|r| small::dot(r, &picked).map(|d| d.cmp(&0))).collect::<Option<Vec<_>>>();
            if let (Some(on_span), Some(signs)) = (on_span, signs) {
                return on_span.iter().all(|&b| b).then_some(signs);
            }
        }
        self.scaled_coordinates(x, gens).map(|y| y.iter().map(sign).collect())
    }

    /// A positive multiple of the generator coordinates of `x`, or `None` off the span.
    pub fn scaled_coordinates(&self, x: &[Int], gens: &[LatticeVector]) -> Option<Vec<Int>> {
        let wide = self.wide(gens);
        if wide.equalities.iter().any(|e| !dot(e, x).is_zero()) {
            return None;
        }
        let xs: Vec<Int> = self.rows.iter().map(|&i| x[i].clone()).collect();
        let mut y = wide.adj.apply(&xs);
        if !wide.adj.det_sign_positive() {
            for c in y.iter_mut() {
                *c = -&*c;
            }
        }
        Some(y)
    }

    pub fn coordinates(&self, x: &[Rational], gens: &[LatticeVector]) -> Option<Vec<Rational>> {
        let wide = self.wide(gens);
        for e in &wide.equalities {
            let s = rsum(e.iter().zip(x).map(|(a, b)| Rational::from(a.clone()) * b));
            if !s.is_zero() {
                return None;
            }
        }
        let xs: Vec<Rational> = self.rows.iter().map(|&i| x[i].clone()).collect();
        Some(wide.adj.solve(&xs))
    }

    /// `a_j · x ≥ 0` is the facet inequality opposite generator `j` (scaled by `|det|`).
    pub fn dual_row(&self, j: usize, gens: &[LatticeVector]) -> Vec<Int> {
        let wide = self.wide(gens);
        let mut row = vec![Int::ZERO; gens[0].rank()];
        let flip = !wide.adj.det_sign_positive();
        for (l, &i) in self.rows.iter().enumerate() {
            row[i] = if flip { -&wide.adj.adj[j][l] } else { wide.adj.adj[j][l].clone() };
        }
        row
    }
}

fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rdot(a: &[Int], b: &[Rational]) -> Rational {
    rsum(a.iter().zip(b).map(|(x, y)| Rational::from(x.clone()) * y))
}

/// A rational polyhedral cone, stored by its minimal primitive generators in sorted order.
pub struct Cone {
    ambient_rank: usize,
    generators: Vec<LatticeVector>,
    dim: usize,
    dual: OnceLock<DualDescription>,
    frame: OnceLock<Frame>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        Self {
            ambient_rank: self.ambient_rank,
            generators: self.generators.clone(),
            dim: self.dim,
            dual: self.dual.clone(),
            frame: self.frame.clone(),
        }
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank && self.generators == other.generators
    }
}

impl Eq for Cone {}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient_rank.hash(state);
        self.generators.hash(state);
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient_rank, &self.generators).cmp(&(other.ambient_rank, &other.generators))
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone{self}")
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

fn prepare(ambient_rank: usize, gens: impl IntoIterator<Item = LatticeVector>) -> Result<Vec<LatticeVector>, LatticeError> {
    let mut out = Vec::new();
    for g in gens {
        if g.rank() != ambient_rank {
            return Err(LatticeError::DimensionMismatch { expected: ambient_rank, found: g.rank() });
        }
        if !g.is_zero() {
            out.push(g.primitive_part());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn rank_of(ambient_rank: usize, gens: &[LatticeVector]) -> usize {
    let rows: Vec<Vec<Int>> = gens.iter().map(|v| v.coords().to_vec()).collect();
    pivot_columns(&rows, ambient_rank).len()
}

impl Cone {
    /// The cone generated by `gens`. Zero vectors are ignored, generators replaced by their primitive
    /// parts, and redundant generators removed.
    pub fn new(ambient_rank: usize, gens: impl IntoIterator<Item = LatticeVector>) -> Result<Self, LatticeError> {
        let gens = prepare(ambient_rank, gens)?;
        let dim = rank_of(ambient_rank, &gens);
        if dim == gens.len() {
            return Ok(Self::from_parts(ambient_rank, gens, dim));
        }
        let dual = dual_description(ambient_rank, &gens);
        let mut tight_rank_rows = dual.equalities.clone();
        tight_rank_rows.extend(dual.inequalities.iter().cloned());
        let pointed = pivot_columns(&tight_rank_rows, ambient_rank).len() == ambient_rank;
        let kept: Vec<LatticeVector> = if pointed {
            gens.iter()
                .filter(|g| {
                    let mut rows = dual.equalities.clone();
                    rows.extend(dual.inequalities.iter().filter(|a| g.dot(a).is_zero()).cloned());
                    pivot_columns(&rows, ambient_rank).len() + 1 == ambient_rank
                })
                .cloned()
                .collect()
        } else {
            let mut kept = gens.clone();
            let mut i = 0;
            while i < kept.len() {
                let rest: Vec<LatticeVector> =
                    kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
                if in_cone_lp(&rest, &to_rationals(kept[i].coords())) {
                    kept.remove(i);
                } else {
                    i += 1;
                }
            }
            kept
        };
        let cone = Self::from_parts(ambient_rank, kept, dim);
        let _ = cone.dual.set(dual);
        Ok(cone)
    }

    /// A cone whose generators must be linearly independent.
    pub fn simplicial(ambient_rank: usize, gens: impl IntoIterator<Item = LatticeVector>) -> Result<Self, LatticeError> {
        let gens: Vec<LatticeVector> = gens.into_iter().collect();
        let count = gens.len();
        let prepared = prepare(ambient_rank, gens)?;
        let dim = rank_of(ambient_rank, &prepared);
        if prepared.len() != count || dim != count {
            return Err(LatticeError::NotSimplicial);
        }
        Ok(Self::from_parts(ambient_rank, prepared, dim))
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Self::from_parts(ambient_rank, Vec::new(), 0)
    }

    pub(crate) fn from_parts(ambient_rank: usize, generators: Vec<LatticeVector>, dim: usize) -> Self {
        Self { ambient_rank, generators, dim, dual: OnceLock::new(), frame: OnceLock::new() }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim == self.generators.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_rank
    }

    pub(crate) fn dual(&self) -> &DualDescription {
        self.dual.get_or_init(|| dual_description(self.ambient_rank, &self.generators))
    }

    pub(crate) fn frame(&self) -> Option<&Frame> {
        if !self.is_simplicial() || self.is_zero() {
            return None;
        }
        Some(self.frame.get_or_init(|| Frame::new(self.ambient_rank, &self.generators)))
    }

    /// Facet normals `a` with `a·x ≥ 0` on the cone, primitive and sorted.
    pub fn facet_normals(&self) -> Vec<Vec<Int>> {
        self.dual().inequalities.clone()
    }

    /// Linear forms vanishing on the span.
    pub fn span_equations(&self) -> Vec<Vec<Int>> {
        self.dual().equalities.clone()
    }

    pub fn position(&self, p: &[Rational]) -> ConePosition {
        assert_eq!(p.len(), self.ambient_rank, "point and cone ranks differ");
        if self.is_zero() {
            return if p.iter().all(|x| x.is_zero()) { ConePosition::Interior } else { ConePosition::Outside };
        }
        if let Some(frame) = self.frame() {
            let Some(lambda) = frame.coordinates(p, &self.generators) else {
                return ConePosition::Outside;
            };
            return classify(lambda.iter().map(rational_sign));
        }
        let dual = self.dual();
        if dual.equalities.iter().any(|e| !rdot(e, p).is_zero()) {
            return ConePosition::Outside;
        }
        classify(dual.inequalities.iter().map(|a| rational_sign(&rdot(a, p))))
    }

    pub fn position_of_vector(&self, p: &[Int]) -> ConePosition {
        assert_eq!(p.len(), self.ambient_rank, "point and cone ranks differ");
        if self.is_zero() {
            return if p.iter().all(|x| x.is_zero()) { ConePosition::Interior } else { ConePosition::Outside };
        }
        if let Some(frame) = self.frame() {
            let Some(signs) = frame.coordinate_signs(p, &self.generators) else {
                return ConePosition::Outside;
            };
            return classify(signs.into_iter());
        }
        let dual = self.dual();
        if dual.equalities.iter().any(|e| !dot(e, p).is_zero()) {
            return ConePosition::Outside;
        }
        classify(dual.inequalities.iter().map(|a| sign(&dot(a, p))))
    }

    pub fn contains(&self, p: &LatticeVector) -> bool {
        self.position_of_vector(p.coords()).is_inside()
    }

    /// For a simplicial cone, the signs of the coefficients of `p` in the generator basis; `None` if
    /// `p` is off the span or the cone is not simplicial.
    pub fn generator_signs(&self, p: &LatticeVector) -> Option<Vec<Ordering>> {
        self.frame()?.coordinate_signs(p.coords(), &self.generators)
    }

    /// For a simplicial cone, the coefficients of `p` in the generator basis; `None` if `p` is off the
    /// span or the cone is not simplicial.
    pub fn generator_coordinates(&self, p: &[Rational]) -> Option<Vec<Rational>> {
        self.frame()?.coordinates(p, &self.generators)
    }

    /// Index of the sublattice spanned by the generators inside its saturation.
    pub fn index(&self) -> Result<Int, LatticeError> {
        if !self.is_simplicial() {
            return Err(LatticeError::NotSimplicial);
        }
        if self.is_zero() {
            return Ok(Int::ONE);
        }
        if let Some(frame) = self.frame().filter(|_| self.is_full_dimensional()) {
            return Ok(abs(&frame.det(&self.generators)));
        }
        let m = IntegerMatrix::from_columns(&self.generators)?;
        Ok(snf(&m)?.invariant_factors().iter().product())
    }

    pub fn is_smooth(&self) -> bool {
        self.index().is_ok_and(|i| i.is_one())
    }

    /// All faces, the zero cone and the cone itself included, sorted.
    pub fn faces(&self) -> Vec<Cone> {
        let mut out: Vec<Cone> = self
            .face_generator_sets()
            .into_iter()
            .map(|mask| {
                let gens: Vec<LatticeVector> =
                    self.generators.iter().zip(&mask).filter(|&(_, &m)| m).map(|(g, _)| g.clone()).collect();
                if self.is_simplicial() {
                    let dim = gens.len();
                    Cone::from_parts(self.ambient_rank, gens, dim)
                } else {
                    Cone::new(self.ambient_rank, gens).expect("faces share the ambient rank")
                }
            })
            .collect();
        out.sort();
        out
    }

    /// Faces of codimension one.
    pub fn facets(&self) -> Vec<Cone> {
        self.faces().into_iter().filter(|f| f.dim + 1 == self.dim).collect()
    }

    /// Generator subsets spanning faces, as membership masks.
    pub(crate) fn face_generator_sets(&self) -> BTreeSet<Vec<bool>> {
        let k = self.generators.len();
        let mut seen = BTreeSet::new();
        if self.is_simplicial() {
            for bits in 0u64..(1u64 << k) {
                seen.insert((0..k).map(|i| bits >> i & 1 == 1).collect());
            }
            return seen;
        }
        let dual = self.dual();
        let tight: Vec<Vec<bool>> = (0..dual.inequalities.len()).map(|a| dual.tight_set(a, &self.generators)).collect();
        let mut queue = vec![vec![true; k]];
        seen.insert(vec![true; k]);
        while let Some(face) = queue.pop() {
            for t in &tight {
                let next: Vec<bool> = face.iter().zip(t).map(|(a, b)| *a && *b).collect();
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        seen
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        if self.ambient_rank != other.ambient_rank {
            return false;
        }
        if !self.generators.iter().all(|g| other.generators.binary_search(g).is_ok()) {
            return false;
        }
        if other.is_simplicial() {
            return true;
        }
        let dual = other.dual();
        let vanishing: Vec<&Vec<Int>> =
            dual.inequalities.iter().filter(|a| self.generators.iter().all(|g| g.dot(a).is_zero())).collect();
        let minimal_face = other.generators.iter().filter(|g| vanishing.iter().all(|a| g.dot(a).is_zero())).count();
        minimal_face == self.generators.len()
    }

    pub fn to_json(&self) -> super::serial::ConeJson {
        super::serial::ConeJson::from_cone(self)
    }
}

fn classify(signs: impl Iterator<Item = Ordering>) -> ConePosition {
    let mut boundary = false;
    for s in signs {
        match s {
            Ordering::Less => return ConePosition::Outside,
            Ordering::Equal => boundary = true,
            Ordering::Greater => {}
        }
    }
    if boundary { ConePosition::Boundary } else { ConePosition::Interior }
}

/// Feasibility of `Σ λ_g g = p`, `λ ≥ 0`.
fn in_cone_lp(gens: &[LatticeVector], p: &[Rational]) -> bool {
    let r = p.len();
    let a: Vec<Vec<Rational>> =
        (0..r).map(|i| gens.iter().map(|g| Rational::from(g.coords()[i].clone())).collect()).collect();
    let c = vec![Rational::ZERO; gens.len()];
    !matches!(maximize(&a, p, &c), LpOutcome::Infeasible)
}

pub fn point_in_cone(p: &[Rational], c: &Cone) -> Result<ConePosition, LatticeError> {
    if p.len() != c.ambient_rank() {
        return Err(LatticeError::DimensionMismatch { expected: c.ambient_rank(), found: p.len() });
    }
    Ok(c.position(p))
}

pub fn cone_index(c: &Cone) -> Result<Int, LatticeError> {
    c.index()
}

/// Image of a cone under a lattice map.
pub fn project_cone(p: &IntegerMatrix, c: &Cone) -> Result<Cone, LatticeError> {
    if p.ncols() != c.ambient_rank() {
        return Err(LatticeError::DimensionMismatch { expected: p.ncols(), found: c.ambient_rank() });
    }
    let images = c.generators().iter().map(|g| LatticeVector::from_vec_unchecked(p.mul_vec(g.coords())));
    Cone::new(p.nrows(), images)
}

/// Outcome of intersecting two cones.
#[allow(clippy::large_enum_variant)] // short-lived return values
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommonFace {
    Face(Cone),
    /// `witness` lies in both cones but outside every common face.
    NotCommonFace { witness: Vec<Rational> },
}

impl CommonFace {
    pub fn is_face(&self) -> bool {
        matches!(self, CommonFace::Face(_))
    }
}

pub fn common_face(c1: &Cone, c2: &Cone) -> Result<CommonFace, LatticeError> {
    if c1.ambient_rank() != c2.ambient_rank() {
        return Err(LatticeError::DimensionMismatch { expected: c1.ambient_rank(), found: c2.ambient_rank() });
    }
    if c1 == c2 {
        return Ok(CommonFace::Face(c1.clone()));
    }
    if c1.is_simplicial() && c2.is_simplicial() {
        // Independent union: both are faces of the simplicial cone it spans.
        let (g1, g2) = (c1.generators(), c2.generators());
        let mut union = g1.to_vec();
        union.extend(g2.iter().filter(|g| g1.binary_search(g).is_err()).cloned());
        if union.len() <= c1.ambient_rank() && rank_of(c1.ambient_rank(), &union) == union.len() {
            let shared: Vec<LatticeVector> = g1.iter().filter(|g| g2.binary_search(g).is_ok()).cloned().collect();
            let dim = shared.len();
            return Ok(CommonFace::Face(Cone::from_parts(c1.ambient_rank(), shared, dim)));
        }
    }
    let t1: Vec<bool> = c1.generators().iter().map(|g| c2.contains(g)).collect();
    let t2: Vec<bool> = c2.generators().iter().map(|g| c1.contains(g)).collect();
    let shared = |c: &Cone, t: &[bool]| -> Vec<LatticeVector> {
        c.generators().iter().zip(t).filter(|&(_, &x)| x).map(|(g, _)| g.clone()).collect()
    };
    let (s1, s2) = (shared(c1, &t1), shared(c2, &t2));

    if let (Some(f1), Some(f2)) = (c1.frame(), c2.frame())
        && c1.is_full_dimensional()
        && c2.is_full_dimensional()
        && s1 == s2
        && (separated(c1, f1, &t1, c2, &t2) || separated(c2, f2, &t2, c1, &t1))
    {
        let dim = s1.len();
        return Ok(CommonFace::Face(Cone::from_parts(c1.ambient_rank(), s1, dim)));
    }
    general_common_face(c1, &s1, c2, &s2)
}

/// Looks for `h = Σ_{g ∉ T} α_g a_g`, `α > 0`, with `h < 0` on the generators of `c2` outside `T`.
/// Such an `h` separates the cones along `cone(T)`. Closed form when at most two `α` are free.
fn separated(c1: &Cone, f1: &Frame, t1: &[bool], c2: &Cone, t2: &[bool]) -> bool {
    let free: Vec<usize> = (0..t1.len()).filter(|&j| !t1[j]).collect();
    let targets: Vec<&LatticeVector> = c2.generators().iter().zip(t2).filter(|&(_, &t)| !t).map(|(g, _)| g).collect();
    if targets.is_empty() {
        return true;
    }
    if let Some(answer) = separated_small(f1, &free, &targets) {
        return answer;
    }
    let rows: Vec<Vec<Int>> = free.iter().map(|&j| f1.dual_row(j, c1.generators())).collect();
    let m: Vec<Vec<Int>> = targets.iter().map(|g| rows.iter().map(|a| g.dot(a)).collect()).collect();
    match free.len() {
        0 => false,
        1 => m.iter().all(|row| sign(&row[0]).is_lt()),
        2 => {
            // m0 + t·m1 < 0 for some t > 0.
            let mut lower = Rational::ZERO;
            let mut upper: Option<Rational> = None;
            for row in &m {
                let (m0, m1) = (&row[0], &row[1]);
                match sign(m1) {
                    Ordering::Equal => {
                        if !sign(m0).is_lt() {
                            return false;
                        }
                    }
                    Ordering::Greater => {
                        let b = Rational::from_parts_signed(-m0, m1.clone());
                        if upper.as_ref().is_none_or(|u| b < *u) {
                            upper = Some(b);
                        }
                    }
                    Ordering::Less => {
                        let b = Rational::from_parts_signed(-m0, m1.clone());
                        if b > lower {
                            lower = b;
                        }
                    }
                }
            }
            upper.is_none_or(|u| lower < u)
        }
        _ => false,
    }
}

/// `separated` in machine integers; `None` on overflow or when the frame has no narrow form.
fn separated_small(f1: &Frame, free: &[usize], targets: &[&LatticeVector]) -> Option<bool> {
    let adj = &f1.small.as_ref()?.adj;
    let mut m: Vec<[i128; 2]> = Vec::with_capacity(targets.len());
    for g in targets {
        let picked: Vec<i64> = f1.rows.iter().map(|&i| to_i64(&g.coords()[i])).collect::<Option<_>>()?;
        let mut row = [0i128; 2];
        for (slot, &j) in row.iter_mut().zip(free) {
            *slot = small::dot(&adj[j], &picked)?;
        }
        m.push(row);
    }
    Some(match free.len() {
        0 => false,
        1 => m.iter().all(|row| row[0] < 0),
        2 => {
            // m0 + t·m1 < 0 for some t > 0: the bounds −m0/m1 kept as (numerator, positive denominator).
            let mut lower: (i128, i128) = (0, 1);
            let mut upper: Option<(i128, i128)> = None;
            let less = |a: (i128, i128), b: (i128, i128)| -> Option<bool> { Some(a.0.checked_mul(b.1)? < b.0.checked_mul(a.1)?) };
            for &[m0, m1] in &m {
                if m1 == 0 {
                    if m0 >= 0 {
                        return Some(false);
                    }
                    continue;
                }
                let b = if m1 > 0 { (-m0, m1) } else { (m0, -m1) };
                if m1 > 0 {
                    if upper.is_none() || less(b, upper.expect("checked"))? {
                        upper = Some(b);
                    }
                } else if less(lower, b)? {
                    lower = b;
                }
            }
            match upper {
                None => true,
                Some(u) => less(lower, u)?,
            }
        }
        _ => false,
    })
}

fn general_common_face(c1: &Cone, s1: &[LatticeVector], c2: &Cone, s2: &[LatticeVector]) -> Result<CommonFace, LatticeError> {
    let r = c1.ambient_rank();
    let sum = |gs: &[LatticeVector]| -> Vec<Rational> {
        let mut acc = vec![Rational::ZERO; r];
        for g in gs {
            for (a, x) in acc.iter_mut().zip(g.coords()) {
                *a += Rational::from(x.clone());
            }
        }
        acc
    };
    // a_i vanishes exactly on the minimal face F_i of c_i containing the shared generators.
    let supporting = |c: &Cone, s: &[LatticeVector]| -> (Vec<Int>, bool) {
        let mut a = vec![Int::ZERO; r];
        for ineq in &c.dual().inequalities {
            if s.iter().all(|g| g.dot(ineq).is_zero()) {
                for (x, y) in a.iter_mut().zip(ineq) {
                    *x += y;
                }
            }
        }
        let face_size = c.generators().iter().filter(|g| g.dot(&a).is_zero()).count();
        (a, face_size == s.len())
    };
    let (a1, exact1) = supporting(c1, s1);
    let (a2, exact2) = supporting(c2, s2);
    if !exact1 {
        return Ok(CommonFace::NotCommonFace { witness: sum(s1) });
    }
    if !exact2 {
        return Ok(CommonFace::NotCommonFace { witness: sum(s2) });
    }
    // A shared generator off the other cone's candidate face; the smallest one, so the witness does
    // not depend on argument order.
    let stray = s2.iter().filter(|g| !g.dot(&a1).is_zero()).chain(s1.iter().filter(|g| !g.dot(&a2).is_zero())).min();
    if let Some(g) = stray {
        return Ok(CommonFace::NotCommonFace { witness: to_rationals(g.coords()) });
    }

    // max a1·x + a2·x over x = G1 λ = G2 μ, Σλ + Σμ + s = 1, all variables ≥ 0.
    let (g1, g2) = (c1.generators(), c2.generators());
    let (k1, k2) = (g1.len(), g2.len());
    let mut rows: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            let mut row: Vec<Rational> = g1.iter().map(|g| Rational::from(g.coords()[i].clone())).collect();
            row.extend(g2.iter().map(|g| Rational::from(-&g.coords()[i])));
            row.push(Rational::ZERO);
            row
        })
        .collect();
    rows.push(vec![Rational::ONE; k1 + k2 + 1]);
    let mut rhs = vec![Rational::ZERO; r];
    rhs.push(Rational::ONE);
    let mut cost: Vec<Rational> = g1.iter().map(|g| Rational::from(g.dot(&a1))).collect();
    cost.extend(g2.iter().map(|g| Rational::from(g.dot(&a2))));
    cost.push(Rational::ZERO);
    match maximize(&rows, &rhs, &cost) {
        LpOutcome::Optimal { value, x } if rational_sign(&value).is_gt() => {
            let mut w = vec![Rational::ZERO; r];
            for (lambda, g) in x.iter().zip(g1) {
                for (acc, c) in w.iter_mut().zip(g.coords()) {
                    *acc += lambda * Rational::from(c.clone());
                }
            }
            Ok(CommonFace::NotCommonFace { witness: w })
        }
        LpOutcome::Unbounded => unreachable!("normalized intersection is bounded"),
        _ => {
            let dim = rank_of(r, s1);
            let face = Cone::from_parts(r, s1.to_vec(), dim);
            Ok(CommonFace::Face(face))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int::{int, rational};

    fn cone(r: usize, gens: &[&[i64]]) -> Cone {
        Cone::new(r, gens.iter().map(|g| LatticeVector::from_i64(g))).unwrap()
    }

    fn pt(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rational(x, 1)).collect()
    }

    #[test]
    fn index_examples() {
        assert_eq!(cone(2, &[&[1, 0], &[0, 1]]).index().unwrap(), int(1));
        assert_eq!(cone(2, &[&[0, 1], &[2, 1]]).index().unwrap(), int(2));
        assert_eq!(cone(2, &[&[1, 0], &[1, 2]]).index().unwrap(), int(2));
        // Not full-dimensional: (1,1,0),(1,-1,0) span an index-2 sublattice of the plane z = 0.
        assert_eq!(cone(3, &[&[1, 1, 0], &[1, -1, 0]]).index().unwrap(), int(2));
        assert_eq!(cone(2, &[&[1, 0], &[1, 1], &[0, 1]]).index().unwrap(), int(1));
    }

    #[test]
    fn index_of_non_simplicial_is_an_error() {
        let square = cone(3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert_eq!(square.index(), Err(LatticeError::NotSimplicial));
    }

    #[test]
    fn positions() {
        let quadrant = cone(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(quadrant.position(&pt(&[1, 1])), ConePosition::Interior);
        assert_eq!(quadrant.position(&pt(&[1, 0])), ConePosition::Boundary);
        assert_eq!(cone(2, &[&[0, 1], &[2, 1]]).position(&pt(&[-1, 3])), ConePosition::Outside);
        let square = cone(3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert_eq!(square.position(&[rational(1, 2), rational(1, 2), rational(1, 1)]), ConePosition::Interior);
        assert_eq!(square.position(&pt(&[1, 0, 1])), ConePosition::Boundary);
        assert_eq!(square.position(&pt(&[2, 0, 1])), ConePosition::Outside);
        let zero = Cone::zero(2);
        assert_eq!(zero.position(&pt(&[0, 0])), ConePosition::Interior);
        assert_eq!(zero.position(&pt(&[0, 1])), ConePosition::Outside);
    }

    #[test]
    fn redundant_generators_removed() {
        let c = cone(2, &[&[1, 0], &[1, 1], &[0, 1], &[2, 0]]);
        assert_eq!(c.generators(), &[LatticeVector::from_i64(&[0, 1]), LatticeVector::from_i64(&[1, 0])]);
        assert!(c.is_simplicial());
        let pyramid = cone(3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[1, 1, 2]]);
        assert_eq!(pyramid.generators().len(), 4);
    }

    #[test]
    fn non_pointed_cone_keeps_a_generating_set() {
        let half_plane = cone(2, &[&[1, 0], &[-1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(half_plane.dim(), 2);
        assert_eq!(half_plane.position(&pt(&[-5, 1])), ConePosition::Interior);
        assert_eq!(half_plane.position(&pt(&[-5, 0])), ConePosition::Boundary);
        assert_eq!(half_plane.position(&pt(&[0, -1])), ConePosition::Outside);
    }

    #[test]
    fn simplicial_constructor_rejects_dependence() {
        let gens = [LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[1, 1]), LatticeVector::from_i64(&[0, 1])];
        assert_eq!(Cone::simplicial(2, gens), Err(LatticeError::NotSimplicial));
    }

    #[test]
    fn faces_of_square_cone() {
        let square = cone(3, &[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let faces = square.faces();
        // zero, four rays, four facets, the cone.
        assert_eq!(faces.len(), 10);
        assert_eq!(square.facets().len(), 4);
        let diagonal = cone(3, &[&[0, 0, 1], &[1, 1, 1]]);
        assert!(!diagonal.is_face_of(&square));
        assert!(cone(3, &[&[0, 0, 1], &[1, 0, 1]]).is_face_of(&square));
    }

    #[test]
    fn common_face_examples() {
        let e = |i: usize| LatticeVector::unit(3, i);
        let c1 = Cone::new(3, [e(0), e(1)]).unwrap();
        let c2 = Cone::new(3, [e(1), e(2)]).unwrap();
        assert_eq!(common_face(&c1, &c2).unwrap(), CommonFace::Face(Cone::new(3, [e(1)]).unwrap()));

        let a = cone(2, &[&[1, 0], &[1, 2]]);
        let b = cone(2, &[&[1, 1], &[0, 1]]);
        assert_eq!(common_face(&a, &b).unwrap(), CommonFace::NotCommonFace { witness: pt(&[1, 1]) });
        assert_eq!(common_face(&a, &a).unwrap(), CommonFace::Face(a.clone()));
    }

    #[test]
    fn common_face_of_adjacent_chambers() {
        let a = cone(2, &[&[1, 0], &[1, 1]]);
        let b = cone(2, &[&[1, 1], &[0, 1]]);
        assert_eq!(common_face(&a, &b).unwrap(), CommonFace::Face(cone(2, &[&[1, 1]])));
        let opposite = cone(2, &[&[-1, 0], &[0, -1]]);
        assert_eq!(common_face(&a, &opposite).unwrap(), CommonFace::Face(Cone::zero(2)));
    }

    #[test]
    fn general_path_detects_crossing_interiors() {
        // Two 2-dimensional cones in Z^3 crossing along a ray that is not a face of either.
        let a = cone(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = cone(3, &[&[1, 1, 1], &[1, 1, -1]]);
        match common_face(&a, &b).unwrap() {
            CommonFace::NotCommonFace { witness } => {
                assert!(a.position(&witness).is_inside() && b.position(&witness).is_inside());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn projection_examples() {
        let p = IntegerMatrix::from_i64(&[[1, 0, 2], [0, 1, 1]]);
        let c = cone(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(project_cone(&p, &c).unwrap(), cone(2, &[&[0, 1], &[2, 1]]));
        assert_eq!(project_cone(&p, &Cone::zero(3)).unwrap(), Cone::zero(2));
        let p = IntegerMatrix::from_i64(&[[1, 1]]);
        let c = cone(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(project_cone(&p, &c).unwrap().generators(), &[LatticeVector::from_i64(&[1])]);
    }
}
