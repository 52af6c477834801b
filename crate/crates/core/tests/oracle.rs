//! Frozen values computed independently with a computer algebra system:
//! `R` from the `n x n` Bloch determinant, and both series branches by
//! order-by-order substitution into `R`.

use gale_core::{
    bloch_multiplier, char_poly, char_poly_monodromy, char_poly_solution_space, expand_infinity, rat, ratio,
    BiPoly, Operator, Rational,
};

fn rows(v: &[&[i64]]) -> Vec<Vec<Rational>> {
    v.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

fn sample() -> Operator {
    Operator::triangular(5, &rows(&[&[2, -1, 3, 1, 4], &[1, 1, -2, 5, 3]])).unwrap()
}

fn expected_curve() -> BiPoly {
    BiPoly::from_terms([
        ((0, 5), rat(-1)),
        ((1, 3), rat(8)),
        ((1, 2), rat(20)),
        ((2, 1), rat(2)),
        ((1, 1), rat(-65)),
        ((3, 0), rat(1)),
        ((2, 0), rat(83)),
        ((1, 0), rat(-24)),
    ])
}

#[test]
fn curve_matches_determinant_oracle() {
    let l = sample();
    assert_eq!(char_poly(&l).unwrap(), expected_curve());
    assert_eq!(char_poly_monodromy(&l).unwrap(), expected_curve());
    assert_eq!(char_poly_solution_space(&l).unwrap(), expected_curve());
}

#[test]
fn energy_branch_matches_oracle() {
    let inf = expand_infinity(&sample(), 4).unwrap();
    assert_eq!(inf.e, vec![ratio(8, 5), ratio(74, 25), rat(0), ratio(-7712, 625)]);
}

#[test]
fn multiplier_branch_matches_oracle() {
    let mult = bloch_multiplier(&sample(), 4).unwrap();
    assert_eq!(mult.leading, ratio(-1, 24));
    assert_eq!(
        mult.w,
        vec![ratio(-65, 24), ratio(4705, 576), ratio(-332417, 13824), ratio(23565985, 331776)]
    );
}
