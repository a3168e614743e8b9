use proptest::prelude::*;
use toric_bordism::actions::{
    self, DiagonalAction, FixedPoint, Variety, criticality_and_bandwidth, fixed_component_report, og_fixed_points,
    og_tangent_weights,
};
use toric_bordism::blowup::{WeightedBlowupSpec, chart_weights, weighted_star_subdivision};
use toric_bordism::cobordism::{
    CobordismSetup, LimitDirection, OrbitLimit, QuotientOptions, bordism_fan_from, limit_in_fan, quotient_fans_with,
};
use toric_bordism::lattice::{
    Cone, Fan, Int, IntegerMatrix, LatticeVector, Rational, cone_index, gcd_all, project_cone, quotient_projection, snf,
    validate_fan,
};

fn matrix(max_dim: usize) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(|rows| IntegerMatrix::from_i64(&rows))
    })
}

fn primitive_vector(max_len: usize) -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-12i64..=12, 2..=max_len)
        .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
        .prop_map(|c| LatticeVector::from_i64(&c).primitive_part())
}

/// A full-rank square matrix given by its columns.
fn independent_columns(max_dim: usize) -> impl Strategy<Value = Vec<LatticeVector>> {
    (1..=max_dim)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-5i64..=5, n), n))
        .prop_map(|cols| cols.iter().map(|c| LatticeVector::from_i64(c)).collect::<Vec<_>>())
        .prop_filter("independent", |cols| IntegerMatrix::from_columns(cols).unwrap().rank() == cols.len())
}

/// A product of elementary row operations: unimodular by construction.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntegerMatrix {
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            rows.swap(i, (i + 1) % n);
        } else {
            let src = rows[j].clone();
            for (x, y) in rows[i].iter_mut().zip(src) {
                *x += k * y;
            }
        }
    }
    IntegerMatrix::from_i64(&rows)
}

fn apply(m: &IntegerMatrix, v: &LatticeVector) -> LatticeVector {
    LatticeVector::new(m.mul_vec(v.coords())).unwrap()
}

fn setup(max_rank: usize, max_weight: i64) -> impl Strategy<Value = CobordismSetup> {
    (2..=max_rank - 1)
        .prop_flat_map(move |d1| (Just(d1), 0..=max_rank - d1 - 1))
        .prop_flat_map(move |(d1, z)| {
            let p = prop::collection::vec(1..=max_weight, 1..=max_rank - d1 - z);
            (prop::collection::vec(1..=max_weight, d1), Just(z), p)
        })
        .prop_filter("coprime", |(n, _, p)| n.iter().chain(p).fold(0, |g, &x| num_gcd(g, x)) == 1)
        .prop_map(|(n, z, p)| CobordismSetup::from_i64(&n, z, &p).unwrap())
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { num_gcd(b, a % b) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_round_trip(m in matrix(6)) {
        let s = snf(&m).unwrap();
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(w[0] >= Int::ZERO && w[1] >= Int::ZERO);
            let divides = if w[0] == Int::ZERO { w[1] == Int::ZERO } else { (&w[1] % &w[0]) == Int::ZERO };
            prop_assert!(divides);
        }
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                prop_assert!(i == j || *s.d.get(i, j) == Int::ZERO);
            }
        }
    }

    #[test]
    fn quotient_projection_kills_v_and_is_onto(v in primitive_vector(8)) {
        let p = quotient_projection(&v).unwrap();
        prop_assert_eq!(p.nrows(), v.rank() - 1);
        prop_assert!(p.mul_vec(v.coords()).iter().all(|x| *x == Int::ZERO));
        // Onto Z^n iff every invariant factor is 1.
        prop_assert!(snf(&p).unwrap().invariant_factors().iter().all(|d| *d == Int::ONE));
    }

    #[test]
    fn projection_preserves_membership(
        v in primitive_vector(5),
        coeffs in prop::collection::vec((0i64..=6, 1i64..=4), 5),
    ) {
        let n = v.rank();
        let c = Cone::new(n, (0..n).map(|i| LatticeVector::unit(n, i))).unwrap();
        let p = quotient_projection(&v).unwrap();
        let image = project_cone(&p, &c).unwrap();
        let point: Vec<Rational> = coeffs.iter().take(n).map(|&(a, b)| Rational::from_parts(a.into(), (b as u64).into())).collect();
        prop_assume!(point.len() == n);
        let projected = p.mul_rational_vec(&point);
        prop_assert!(image.position(&projected) != toric_bordism::lattice::ConePosition::Outside);
    }

    #[test]
    fn cone_index_is_basis_invariant(
        cols in independent_columns(4),
        ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..8),
        rotate in 0usize..4,
    ) {
        let n = cols.len();
        let c = Cone::new(n, cols.clone()).unwrap();
        let idx = cone_index(&c).unwrap();
        let mut permuted = cols.clone();
        permuted.rotate_left(rotate % n);
        prop_assert_eq!(cone_index(&Cone::new(n, permuted).unwrap()).unwrap(), idx.clone());
        let u = unimodular(n, &ops);
        let moved = Cone::new(n, cols.iter().map(|g| apply(&u, g))).unwrap();
        prop_assert_eq!(cone_index(&moved).unwrap(), idx);
    }

    #[test]
    fn face_fan_of_simplicial_cone_is_valid(cols in independent_columns(4)) {
        let c = Cone::new(cols[0].rank(), cols).unwrap();
        prop_assert!(validate_fan(&Fan::face_fan(&c)).is_valid());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quotient_fans_subdivide_and_bordism_validates(s in setup(8, 5)) {
        let fans = quotient_fans_with(&s, &QuotientOptions { canonical_basis: false, extra_samples: 200 }).unwrap();
        prop_assert!(fans.plus_subdivision.is_valid() && fans.minus_subdivision.is_valid());
        prop_assert_eq!(fans.quot_minus_cones.len(), s.d1());
        prop_assert_eq!(fans.quot_plus_cones.len(), s.n_plus_1() - s.d2());
        let b = bordism_fan_from(&s, &fans).unwrap();
        prop_assert!(b.sigma_tilde_report.is_valid());
        // The generic orbit flows out of the source chart Λ₊ and into the sink chart Λ₋.
        let zero = Cone::zero(s.n_plus_1());
        let contains = |l: &OrbitLimit, g: &LatticeVector| matches!(l, OrbitLimit::Cone(c) if c.generators().contains(g));
        let to_zero = limit_in_fan(&b.sigma_tilde, &zero, s.v(), LimitDirection::ToZero).unwrap();
        let to_inf = limit_in_fan(&b.sigma_tilde, &zero, s.v(), LimitDirection::ToInfinity).unwrap();
        prop_assert!(contains(&to_zero, s.v()));
        prop_assert!(contains(&to_inf, &s.v().neg()));
        let (OrbitLimit::Cone(sink), OrbitLimit::Cone(source)) = (&to_zero, &to_inf) else { unreachable!() };
        prop_assert!(b.lambda_minus.contains(sink));
        prop_assert!(b.lambda_plus.contains(source));
    }

    #[test]
    fn weighted_blowup_refines_and_collapses(
        (d, mut q) in (2usize..=5).prop_flat_map(|n| (0..=n - 2).prop_flat_map(move |d| (Just(d), prop::collection::vec(1i64..=5, n - d)))),
    ) {
        q.sort_unstable();
        let spec = if d >= 2 { WeightedBlowupSpec::from_i64(d, &q) } else {
            WeightedBlowupSpec::legacy(d, &q.iter().map(|&x| Int::from(x)).collect::<Vec<_>>())
        }.unwrap();
        let star = weighted_star_subdivision(&spec).unwrap();
        prop_assert!(star.subdivision.is_valid() && star.validation.is_valid());
        prop_assert_eq!(star.charts.len(), q.len());
        // Non-coprime ω blows up along its primitive ray, so collapse is decided by ω / gcd.
        prop_assert_eq!(star.all_charts_smooth(), q.iter().all(|&x| x == q[0]));
        let face = spec.weighted_face();
        prop_assert!(face.position_of_vector(spec.omega().coords()) == toric_bordism::lattice::ConePosition::Interior);
        prop_assert_eq!(gcd_all(q.iter().map(|&x| Int::from(x)).collect::<Vec<_>>().iter()), spec.weight_gcd().clone());
    }

    #[test]
    fn chart_weights_of_the_orthant_are_the_coordinates(v in prop::collection::vec(-9i64..=9, 1..=6)) {
        let n = v.len();
        let sigma = Cone::new(n, (0..n).map(|i| LatticeVector::unit(n, i))).unwrap();
        let w = chart_weights(&Fan::face_fan(&sigma), &LatticeVector::from_i64(&v), &sigma).unwrap();
        for (i, &x) in v.iter().enumerate() {
            prop_assert_eq!(w.weight_of(&LatticeVector::unit(n, i)), Some(&Rational::from(x)));
        }
        prop_assert!(w.integral().is_some() && !w.non_reduced);
    }

    #[test]
    fn criticality_and_bandwidth_ignore_characters(
        w in prop::collection::vec(-6i64..=6, 2..=7),
        shift in -20i64..=20,
        offset in -5i64..=5,
    ) {
        prop_assume!(w.iter().any(|&x| x != w[0]));
        let base = DiagonalAction::new(w.clone(), 0).unwrap();
        let shifted = DiagonalAction::new(w.iter().map(|x| x + shift).collect(), offset).unwrap();
        let r0 = fixed_component_report(&base, &Variety::Pn).unwrap();
        let r1 = fixed_component_report(&shifted, &Variety::Pn).unwrap();
        let (c0, b0) = criticality_and_bandwidth(&r0).unwrap();
        prop_assert!(c0 <= b0);
        prop_assert_eq!(criticality_and_bandwidth(&r1).unwrap(), (c0, b0));
    }

    #[test]
    fn quadric_invariants_survive_shifts(n in 2usize..=6, k_seed in 0usize..6, shift in -7i64..=7, offset in -3i64..=3) {
        let k = 1 + k_seed % n;
        let (a, v) = actions::quadric_example(n, k).unwrap();
        let moved = DiagonalAction::new(a.weights().iter().map(|x| x + shift).collect(), offset).unwrap();
        let r0 = fixed_component_report(&a, &v).unwrap();
        let r1 = fixed_component_report(&moved, &v).unwrap();
        prop_assert_eq!((r0.criticality, r0.bandwidth), (r1.criticality, r1.bandwidth));
        prop_assert!(r0.criticality <= r0.bandwidth);
        prop_assert_eq!(r0.fully_equalized(), k == 1);
    }
}

#[test]
fn og_tangent_signs_at_extremal_points() {
    for n in 3..=6 {
        let (a, v) = actions::og_example(n).unwrap();
        let Variety::Og2(q) = &v else { unreachable!() };
        let r = fixed_component_report(&a, &v).unwrap();
        for p in og_fixed_points(&a, q).unwrap() {
            let idx = r.index_of_point(FixedPoint::Plane(p.pair.0, p.pair.1)).unwrap();
            let t = og_tangent_weights(&a, q, p.pair).unwrap();
            assert_eq!(t.len(), 4 * n - 5);
            if r.components[idx].label == r.source {
                assert!(t.iter().all(|&x| x <= 0), "n = {n}, {p:?}");
            }
            if r.components[idx].label == r.sink {
                assert!(t.iter().all(|&x| x >= 0), "n = {n}, {p:?}");
            }
        }
    }
}
