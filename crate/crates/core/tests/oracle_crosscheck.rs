//! The library's closed forms against explicit matrix arithmetic and direct
//! evaluation of the value-map formulas.

mod common;

use hvlab::bell::{
    bell_value, bell_value_operator, classical_conditional, convex_sum, nonuniqueness_witness,
    route_operator_product, route_state_update, sum_conflict_witness,
};
use hvlab::montecarlo::{random_unit_vector, seeded_rng};
use hvlab::qubit::{
    chain_probability, conditional_expectation, expectation, projector, sandwich, BlochVector,
    PureState,
};

fn arr(v: BlochVector) -> [f64; 3] {
    v.to_array()
}

fn psi(v: BlochVector) -> PureState {
    PureState::new(v).unwrap()
}

#[test]
fn chain_z_then_x_then_z_is_a_quarter() {
    let matrix = common::chain_probability([0.0, 0.0, 1.0], &[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
    assert!((matrix - 0.25).abs() < 1e-15);
    let bloch = chain_probability(
        &psi(BlochVector::Z),
        &[
            projector(BlochVector::X).unwrap(),
            projector(BlochVector::Z).unwrap(),
        ],
    )
    .unwrap();
    assert!((bloch - matrix).abs() < 1e-15);
}

#[test]
fn bloch_algebra_matches_matrices() {
    let mut rng = seeded_rng(11, 0);
    for _ in 0..2000 {
        let (s, n, m) = (
            random_unit_vector(&mut rng),
            random_unit_vector(&mut rng),
            random_unit_vector(&mut rng),
        );
        let (pn, pm) = (projector(n).unwrap(), projector(m).unwrap());
        let bab = sandwich(&pn, &pm).unwrap();
        let mat_bab = common::mul(
            &common::mul(&common::projector(arr(n)), &common::projector(arr(m))),
            &common::projector(arr(n)),
        );
        assert!(common::max_abs_diff(&common::bloch_op(bab.a, arr(bab.b)), &mat_bab) < 1e-14);

        let rho = common::density(arr(s));
        let e = common::trace(&common::mul(&rho, &common::projector(arr(m)))).re;
        assert!((expectation(&psi(s), &pm) - e).abs() < 1e-14);

        if 1.0 + s.dot(n) > 1e-6 {
            let q = conditional_expectation(&psi(s), &pm, &pn).unwrap();
            assert!((q - common::conditional(arr(s), arr(n), arr(m))).abs() < 1e-12);
        }

        let axes = [arr(n), arr(m), arr(s)];
        if let Ok(p) = chain_probability(&psi(s), &[pn, pm, projector(s).unwrap()]) {
            assert!((p - common::chain_probability(arr(s), &axes)).abs() < 1e-14);
        }
    }
}

#[test]
fn convex_sum_spectrum_matches_eigendecomposition() {
    // E = ½P_x + ½P_y; eigenvalues ½(1 ± 1/√2)
    let (n, m) = (BlochVector::X, BlochVector::Y);
    let e = convex_sum(n, m, 0.5).unwrap();
    let mat = common::add(
        &common::scale(&common::projector(arr(n)), 0.5),
        &common::scale(&common::projector(arr(m)), 0.5),
    );
    let (lo, hi) = common::hermitian_eigenvalues(&mat);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((lo - 0.5 * (1.0 - r)).abs() < 1e-15);
    assert!((hi - 0.5 * (1.0 + r)).abs() < 1e-15);
    let s = BlochVector::unit(0.6, 0.0, 0.8).unwrap();
    let v = bell_value_operator(&psi(s), &e).unwrap();
    for x in v.values.value_set() {
        assert!((x - lo).abs() < 1e-15 || (x - hi).abs() < 1e-15, "{x}");
    }
    let vsum = [0.5, 0.5, 0.0];
    let expect = 0.5 + 0.5 * common::dot(vsum, arr(s));
    let rho_e = common::trace(&common::mul(&common::density(arr(s)), &mat)).re;
    assert!((v.integral() - expect).abs() < 1e-15);
    assert!((v.integral() - rho_e).abs() < 1e-15);
}

#[test]
fn bell_value_matches_closed_form_on_grid() {
    let mut rng = seeded_rng(12, 0);
    for _ in 0..200 {
        let (s, m) = (random_unit_vector(&mut rng), random_unit_vector(&mut rng));
        let v = bell_value(&psi(s), m).unwrap();
        for w in common::grid(997).chain(v.values.breakpoints().iter().copied()) {
            assert_eq!(
                v.values.eval(w),
                common::bell_closed_form(arr(s), arr(m), w),
                "ω = {w}"
            );
        }
    }
}

#[test]
fn orthogonal_overlap_measure_on_grid() {
    // s·m = 0: sign(0) = +1 gives 1 on (0, ½)
    let closed = |w: f64| 0.5 * (1.0 + if w >= 0.0 { 1.0 } else { -1.0 });
    let grid = common::grid_integral(closed, 10_000);
    let v = bell_value(&psi(BlochVector::Z), BlochVector::X).unwrap();
    assert!((grid - 0.5).abs() < 1e-12);
    assert_eq!(v.integral(), 0.5);
    assert_eq!(v.values.breakpoints(), &[0.0]);
}

#[test]
fn route_pair_closed_forms() {
    // s = z, n = m = x: route A ≡ 1, route B = 2·1(0, ½)
    let s = psi(BlochVector::Z);
    let a = route_state_update(BlochVector::X, BlochVector::X).unwrap();
    let b = route_operator_product(&s, BlochVector::X, BlochVector::X).unwrap();
    for w in common::grid(1000) {
        let prefactor = (1.0 + 1.0) / (1.0 + 0.0);
        let closed_b = prefactor * if w >= 0.0 { 1.0 } else { 0.0 };
        assert_eq!(a.values.eval(w), 1.0);
        assert_eq!(b.values.eval(w), closed_b);
    }
    let w = nonuniqueness_witness(&s, BlochVector::X, BlochVector::X).unwrap();
    let grid_disagreement = common::grid_integral(
        |w| {
            if a.values.eval(w) != b.values.eval(w) {
                1.0
            } else {
                0.0
            }
        },
        1000,
    );
    assert_eq!(grid_disagreement, 1.0);
    assert_eq!(w.measure, 1.0);
}

#[test]
fn classical_rule_by_interval_intersection() {
    // s = z, n = x, m = y: both indicator sets are (0, ½)
    let a_set = (0.0, 0.5);
    let b_set = (0.0, 0.5);
    let oracle = common::interval_overlap(a_set, b_set) / (b_set.1 - b_set.0);
    assert_eq!(oracle, 1.0);
    let c = classical_conditional(&psi(BlochVector::Z), BlochVector::Y, BlochVector::X).unwrap();
    assert_eq!(c, oracle);
    let q = common::conditional([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
    assert!((q - 0.5).abs() < 1e-15);
    assert_eq!((c - q).abs(), 0.5);
}

#[test]
fn classical_rule_random_against_intervals() {
    let mut rng = seeded_rng(13, 0);
    let set = |s: [f64; 3], m: [f64; 3]| {
        let d = common::dot(s, m);
        if d >= 0.0 {
            (-0.5 * d, 0.5)
        } else {
            (-0.5, 0.5 * d)
        }
    };
    for _ in 0..500 {
        let (s, n, m) = (
            random_unit_vector(&mut rng),
            random_unit_vector(&mut rng),
            random_unit_vector(&mut rng),
        );
        let (a_set, b_set) = (set(arr(s), arr(m)), set(arr(s), arr(n)));
        let oracle = common::interval_overlap(a_set, b_set) / (b_set.1 - b_set.0);
        let c = classical_conditional(&psi(s), m, n).unwrap();
        assert!((c - oracle).abs() < 1e-12, "{c} vs {oracle}");
    }
}

#[test]
fn sum_conflict_pointwise_on_grid() {
    let s = BlochVector::unit(-0.6, 0.0, -0.8).unwrap();
    let (n, m) = (BlochVector::X, BlochVector::Z);
    let sc = sum_conflict_witness(&psi(s), n, m, 0.5).unwrap();
    let (lo, hi) = common::hermitian_eigenvalues(&common::add(
        &common::scale(&common::projector(arr(n)), 0.5),
        &common::scale(&common::projector(arr(m)), 0.5),
    ));
    let vhat = [
        std::f64::consts::FRAC_1_SQRT_2,
        0.0,
        std::f64::consts::FRAC_1_SQRT_2,
    ];
    let lhs_closed = |w: f64| {
        let d = common::dot(arr(s), vhat);
        if (w + 0.5 * d.abs() >= 0.0) == (d >= 0.0) {
            hi
        } else {
            lo
        }
    };
    let rhs_closed = |w: f64| {
        0.5 * common::bell_closed_form(arr(s), arr(n), w)
            + 0.5 * common::bell_closed_form(arr(s), arr(m), w)
    };
    let mut both_zero_cells = 0;
    for w in common::grid(2000) {
        assert!((sc.lhs.values.eval(w) - lhs_closed(w)).abs() < 1e-15);
        assert!((sc.rhs.eval(w) - rhs_closed(w)).abs() < 1e-15);
        let differs = (lhs_closed(w) - rhs_closed(w)).abs() > 1e-15;
        assert_eq!(sc.witness.omega_region.eval(w) == 1.0, differs, "ω = {w}");
        if rhs_closed(w) == 0.0 {
            both_zero_cells += 1;
            assert!((lhs_closed(w) - lo).abs() < 1e-15);
        }
    }
    assert!(both_zero_cells > 0);
    assert!(sc.witness.measure > 0.0);
}
