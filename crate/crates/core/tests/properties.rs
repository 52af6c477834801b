use gale_core::generators::{generate_gale_of_quiddity, generate_quiddity};
use gale_core::spectral::{interior_lattice_points, slot_lattice_points};
use gale_core::{
    bc_curve, bloch_space_test, char_poly, char_poly_monodromy, char_poly_solution_space, divide, dual_pair,
    expand_infinity, is_superperiodic, normalize_to_superperiodic, rat, ratio, scramble, AdmissiblePair, Operator,
    Rational, Scalar, ScaledPair, ScalingConstant, Sequence, Side,
};
use num_integer::Integer as _;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=6, 1i64..=4, any::<bool>()).prop_map(|(p, q, neg)| ratio(if neg { -p } else { p }, q))
}

fn sequence(n: usize) -> impl Strategy<Value = Sequence> {
    prop::collection::vec(rational(), n).prop_map(|v| Sequence::new(v).unwrap())
}

/// Arbitrary operator of period `n` with powers in `-3..=2`.
fn operator(n: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec((-3i64..=2, sequence(n)), 0..4)
        .prop_map(move |terms| Operator::from_terms(n, terms).unwrap())
}

fn operators<const N: usize>() -> impl Strategy<Value = [Operator; N]> {
    (1usize..=8).prop_flat_map(|n| prop::array::uniform::<_, N>(operator(n)))
}

/// Monic strictly triangular operator of order `k+1` with nonvanishing `a^1`.
fn triangular(k: usize, n: usize) -> impl Strategy<Value = Operator> {
    (
        prop::collection::vec(nonzero_rational(), n),
        prop::collection::vec(prop::collection::vec(rational(), n), k - 1),
    )
        .prop_map(move |(a1, rest)| {
            let mut rows = vec![a1];
            rows.extend(rest);
            Operator::triangular(n, &rows).unwrap()
        })
}

fn coprime_triangular(max_n: usize) -> impl Strategy<Value = (usize, usize, Operator)> {
    (2usize..=max_n, 1usize..=4)
        .prop_filter("coprime, k < n", |&(n, k)| k < n && n.gcd(&(k + 1)) == 1)
        .prop_flat_map(|(n, k)| triangular(k, n).prop_map(move |l| (k, n, l)))
}

/// Adds `bump` to the single coefficient `a^j_i`.
fn perturb(l: &Operator, j: i64, i: i64, bump: &Rational) -> Operator {
    let n = l.period();
    let delta = Sequence::from_fn(n, |t| if t == i as usize % n { bump.clone() } else { Rational::zero() });
    l.add(&Operator::monomial(-j, delta)).unwrap()
}

fn superperiodic() -> impl Strategy<Value = Operator> {
    (prop::sample::select(vec![5usize, 7, 9]), any::<u64>(), any::<bool>()).prop_map(|(n, seed, gale)| {
        if gale {
            generate_gale_of_quiddity(n, seed).unwrap()
        } else {
            generate_quiddity(n, seed).unwrap().1
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compose_is_associative([a, b, c] in operators::<3>()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_is_two_sided([a] in operators::<1>()) {
        let id = Operator::identity(a.period());
        prop_assert_eq!(&id.compose(&a).unwrap(), &a);
        prop_assert_eq!(&a.compose(&id).unwrap(), &a);
    }

    #[test]
    fn adjoint_reverses_products([a, b] in operators::<2>()) {
        let lhs = a.compose(&b).unwrap().adjoint();
        let rhs = b.adjoint().compose(&a.adjoint()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn epsilon_conjugation_is_a_ring_homomorphism([a, b] in operators::<2>()) {
        let f = |x: &Operator| x.epsilon_conjugate();
        prop_assert_eq!(f(&a.compose(&b).unwrap()), f(&a).compose(&f(&b)).unwrap());
        prop_assert_eq!(f(&a.add(&b).unwrap()), f(&a).add(&f(&b)).unwrap());
    }

    #[test]
    fn diagonal_scaling_is_a_ring_homomorphism([a, b] in operators::<2>(), c in nonzero_rational()) {
        let f = |x: &Operator| x.conjugate_scale(&c).unwrap();
        prop_assert_eq!(f(&a.compose(&b).unwrap()), f(&a).compose(&f(&b)).unwrap());
        prop_assert_eq!(f(&a.add(&b).unwrap()), f(&a).add(&f(&b)).unwrap());
        prop_assert_eq!(a.conjugate_scale(&-Rational::one()).unwrap(), a.epsilon_conjugate());
    }

    #[test]
    fn sigma_squared_shifts_coefficients((k, _n, l) in coprime_triangular(9)) {
        let m = k + 1;
        let once = l.sigma().unwrap();
        prop_assert_eq!(once.order().unwrap(), m);
        prop_assert_eq!(once.sigma().unwrap(), l.shift_index(-(m as i64)));
    }

    #[test]
    fn recursion_rows_round_trip((k, n, l) in coprime_triangular(9)) {
        let rows = l.recursion_rows().unwrap();
        prop_assert_eq!(Operator::from_recursion(n, k, &rows).unwrap(), l);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn determinant_routes_agree((_k, _n, l) in coprime_triangular(7)) {
        prop_assert_eq!(char_poly_monodromy(&l).unwrap(), char_poly_solution_space(&l).unwrap());
    }

    #[test]
    fn curve_is_invariant_under_relabeling((_k, _n, l) in coprime_triangular(7), d in 1i64..7) {
        prop_assert_eq!(char_poly(&l.shift_index(d)).unwrap(), char_poly(&l).unwrap());
    }

    #[test]
    fn curve_scales_with_the_operator((k, n, l) in coprime_triangular(7), c in nonzero_rational()) {
        let r = char_poly(&l).unwrap();
        let scaled = char_poly(&l.tau_scale(&c).unwrap()).unwrap();
        let m = (k + 1) as i64;
        let n = n as i64;
        for i in 0..=m as u32 {
            for j in 0..=n as u32 {
                let exponent = n * m - n * i as i64 - m * j as i64;
                prop_assert_eq!(scaled.coeff(i, j), c.pow_int(exponent) * r.coeff(i, j));
            }
        }
    }

    #[test]
    fn energy_series_scales_with_the_operator((_k, _n, l) in coprime_triangular(7), c in nonzero_rational()) {
        let base = expand_infinity(&l, 4).unwrap();
        let scaled = expand_infinity(&l.tau_scale(&c).unwrap(), 4).unwrap();
        for s in 0..4 {
            let f = c.pow_int(s as i64 + 1);
            prop_assert_eq!(&scaled.e[s], &(base.e[s].clone() * f.clone()));
            prop_assert_eq!(&scaled.xi[s], &base.xi[s].map(|x| x.clone() * f.clone()));
        }
    }

    #[test]
    fn divisibility_is_equivalent_to_superperiodicity(l in superperiodic(), j in 1i64..3, i in 0i64..9, bump in nonzero_rational()) {
        let j = j.min(l.order().unwrap() as i64 - 1);
        let perturbed = perturb(&l, j, i, &bump);
        for op in [&l, &perturbed] {
            let right = divide(op, Side::Right).unwrap();
            let left = divide(op, Side::Left).unwrap();
            let sp = is_superperiodic(op).unwrap();
            prop_assert_eq!(sp, right.is_exact() && left.is_exact());
            if sp {
                prop_assert_eq!(&right.quotient, &left.quotient);
            }
        }
        prop_assert!(is_superperiodic(&l).unwrap());
    }

    #[test]
    fn superperiodicity_is_scale_equivariant(l in superperiodic(), c in nonzero_rational()) {
        let (n, k) = (l.period(), l.order().unwrap() - 1);
        let pair = AdmissiblePair::<Rational>::superperiodic(n, k).scaled(&c, n, k);
        prop_assert!(pair.is_admissible(n, k));
        prop_assert!(bloch_space_test(&l.tau_scale(&c).unwrap(), &pair.e, &pair.mu).unwrap().passed);
    }

    #[test]
    fn gale_dual_has_complementary_order(l in superperiodic()) {
        let (n, m) = (l.period(), l.order().unwrap());
        let pair = dual_pair(&l).unwrap();
        prop_assert_eq!(pair.gale.order().unwrap(), n - m);
        let k_dual = n - m - 1;
        let mu = Rational::sign_power((n + k_dual) as i64);
        prop_assert!(bloch_space_test(&pair.gale, &-Rational::one(), &mu).unwrap().passed);
        prop_assert_eq!(dual_pair(&pair.gale).unwrap().gale.order().unwrap(), m);
    }

    #[test]
    fn scrambled_pairs_normalize_back(
        seed in any::<u64>(),
        alpha in -4i64..=4,
        c0 in prop::sample::select(vec![ratio(1, 1), ratio(-1, 1), ratio(2, 1), ratio(1, 3), ratio(-3, 2)]),
    ) {
        let (_, l) = generate_quiddity(5, seed).unwrap();
        let pair = dual_pair(&l).unwrap();
        let (l_in, k_in) = scramble(&l, &pair.dual_commuting, &rat(alpha), &c0).unwrap();
        let norm = normalize_to_superperiodic(&l_in, &k_in).unwrap();
        prop_assert!(norm.data.p.coeff(0).is_zero());
        prop_assert_eq!(&norm.data.c, &ScalingConstant::Exact(c0.clone()));
        match &norm.scaled {
            ScaledPair::Exact { l: l2, lambda } => {
                prop_assert_eq!(l2, &l);
                prop_assert_eq!(lambda, &pair.dual_commuting);
            }
            ScaledPair::Approx { .. } => prop_assert!(false, "expected an exact scaling constant"),
        }
        let bc = bc_curve(&l_in, &k_in).unwrap();
        prop_assert_eq!(bc.orders, (2, 3));
    }
}

#[test]
fn newton_counts_match_closed_forms() {
    for n in 2..=12usize {
        for k in 1..n {
            if n.gcd(&(k + 1)) != 1 {
                continue;
            }
            assert_eq!(2 * interior_lattice_points(k, n), k * (n - 1), "interior (k, n) = ({k}, {n})");
            assert_eq!(2 * slot_lattice_points(k, n), k * (n + 1), "slots (k, n) = ({k}, {n})");
        }
    }
}
