//! Commuting pairs `[L, K] = 0` with `ord L = k + 1`, `ord K = n - k - 1`:
//! the Burchnall-Chaundy curve, recovery of the eigenvalue `e` and the
//! polynomial `Q` from `W(E) = (E - e) K(E) + Q(E)`, and normalization to a
//! superperiodic pair by scaling.

use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::{commutator, DifferenceOperator};
use crate::poly::{BivariatePolynomial, Polynomial};
use crate::ring::Ring;
use crate::scalar::{ExactField, Scalar};
use crate::spectral::monodromy_matrix_symbolic;
use crate::superperiodic::{bloch_space_test, is_superperiodic, superperiodic_residual};
use crate::{Integer as BigInt, Operator, OperatorF64, Rational};

/// Tolerance for the floating-point fallback of the scaling constant.
pub const NUMERIC_TOLERANCE: f64 = 1e-12;

/// Orders `(k+1, n-k-1)` after checking shapes, coprimality and `[L, K] = 0`.
///
/// `K` must have `T^{-(n-k-1)}` with coefficient one as its lowest term and
/// no positive powers; lower-order terms, including a constant, are free.
fn check_pair<T: Scalar>(l: &DifferenceOperator<T>, k: &DifferenceOperator<T>) -> Result<(usize, usize)> {
    let m = l.order()?;
    let n = l.period();
    if k.period() != n {
        return Err(Error::PeriodMismatch { left: n, right: k.period() });
    }
    if m >= n {
        return Err(Error::OrderTooLarge { order: m, n });
    }
    if n.gcd(&m) != 1 {
        return Err(Error::NotCoprime { n, order: m });
    }
    let dual = n - m;
    let lo = k.min_power().ok_or_else(|| Error::NotTriangular("zero partner".into()))?;
    if lo != -(dual as i64) {
        return Err(Error::OrderMismatch { expected: dual, found: (-lo).max(0) as usize });
    }
    if k.max_power().unwrap_or(0) > 0 {
        return Err(Error::NotTriangular("partner has positive powers".into()));
    }
    if k.term(lo).expect("present").values().iter().any(|v| !v.is_one()) {
        return Err(Error::NotTriangular(format!("partner coefficient at T^{lo} is not identically 1")));
    }
    if !commutator(l, k)?.is_zero() {
        return Err(Error::CommutatorNonzero);
    }
    Ok((m, dual))
}

/// Matrix of `K` on the solutions of `L psi = E psi` in the unit-window
/// basis: entry `(r, c)` is `(K psi^{(c)})_{-r}`. Solving downward never
/// divides, so the entries are polynomials in `E`.
pub fn action_on_solutions<T: Scalar>(
    l: &DifferenceOperator<T>,
    k: &DifferenceOperator<T>,
) -> Result<Matrix<Polynomial<T>>> {
    let (m, dual) = check_pair(l, k)?;
    let mi = m as i64;
    let lo = -(mi - 1) - dual as i64;
    let energy = Polynomial::x();
    let mut columns = Vec::with_capacity(m);
    for c in 0..m {
        // psi[t] = psi_{-t}
        let mut psi = vec![Polynomial::zero(); (-lo + 1) as usize];
        psi[c] = Polynomial::constant(T::one());
        for i in (lo + mi..=0).rev() {
            let mut v = energy.mul(&psi[(-i) as usize]);
            for j in 1..mi {
                let a = l.coefficient(-j, i);
                if !Ring::is_zero(&a) {
                    v = v.sub(&psi[(j - i) as usize].scale(&a));
                }
            }
            psi[(mi - i) as usize] = v;
        }
        let column: Vec<Polynomial<T>> = (0..mi)
            .map(|r| {
                k.terms().fold(Polynomial::zero(), |acc, (p, coef)| {
                    acc.add(&psi[(r - p) as usize].scale(coef.value(-r)))
                })
            })
            .collect();
        columns.push(column);
    }
    Ok(Matrix::from_fn(m, m, |r, c| columns[c][r].clone()))
}

/// `R(kappa, E)`, monic in `kappa`: first variable `kappa`, second `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct BCCurve<T: Scalar> {
    pub poly: BivariatePolynomial<T>,
    /// `(k+1, n-k-1)`.
    pub orders: (usize, usize),
}

/// Allowed monomials besides `kappa^{k+1}` and `E^{n-k-1}`:
/// `0 < i (n-k-1) + j (k+1) < (n-k-1)(k+1)`.
pub fn bc_support_allowed(i: u32, j: u32, orders: (usize, usize)) -> bool {
    let (a, b) = (orders.0 as u64, orders.1 as u64);
    let weight = i as u64 * b + j as u64 * a;
    0 < weight && weight < a * b
}

pub fn bc_curve<T: ExactField>(l: &DifferenceOperator<T>, k: &DifferenceOperator<T>) -> Result<BCCurve<T>> {
    let action = action_on_solutions(l, k)?;
    let (m, dual) = (l.order()?, l.period() - l.order()?);
    let kappa = BivariatePolynomial::monomial(1, 0, T::one());
    let mat = Matrix::from_fn(m, m, |r, c| {
        let x = BivariatePolynomial::from_second(action.get(r, c)).neg();
        if r == c {
            x.add(&kappa)
        } else {
            x
        }
    });
    let poly = mat.determinant();
    for (&(i, j), c) in poly.terms() {
        let ok = match (i as usize, j as usize) {
            (i, 0) if i == m => c.is_one(),
            (0, j) if j == dual => *c == -T::one(),
            _ => bc_support_allowed(i, j, (m, dual)),
        };
        if !ok {
            return Err(Error::SupportViolation(format!("kappa^{i} E^{j} with coefficient {c}")));
        }
    }
    if poly.coeff(0, dual as u32) != -T::one() {
        return Err(Error::SupportViolation(format!("missing -E^{dual}")));
    }
    Ok(BCCurve { poly, orders: (m, dual) })
}

/// `e`, `Q` and `mu = Q(e)` with `W(E) = (E - e) K(E) + Q(E) Id`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recovery<T: Scalar> {
    pub e: T,
    pub q: Polynomial<T>,
    pub mu: T,
}

pub fn recover_e_q<T: ExactField>(l: &DifferenceOperator<T>, k: &DifferenceOperator<T>) -> Result<Recovery<T>> {
    let action = action_on_solutions(l, k)?;
    let (m, n) = (l.order()?, l.period());
    let w = monodromy_matrix_symbolic(l)?;
    let mut e: Option<T> = None;
    for r in 0..m {
        for s in (0..m).filter(|&s| s != r) {
            let kk = action.get(r, s);
            if kk.is_zero() {
                continue;
            }
            let (quot, rem) = w.get(r, s).div_rem(kk);
            if !rem.is_zero() || quot.degree() != Some(1) || !quot.coeff(1).is_one() {
                return Err(Error::InconsistentEigenvalue);
            }
            let candidate = -quot.coeff(0);
            match &e {
                Some(prev) if *prev != candidate => return Err(Error::InconsistentEigenvalue),
                _ => e = Some(candidate),
            }
        }
    }
    let e = e.ok_or_else(|| Error::Degenerate("every off-diagonal entry of K(E) vanishes".into()))?;
    let shift = Polynomial::linear(&e);
    let residue = w.sub(&action.map(|p| p.mul(&shift)));
    let q = residue.as_scalar().ok_or(Error::InconsistentEigenvalue)?;
    if !Ring::is_zero(&q.coeff(0)) {
        return Err(Error::NonzeroConstantTerm);
    }
    if q.degree().is_some_and(|d| d * m >= n) {
        return Err(Error::SupportViolation(format!("deg Q too large: {q}")));
    }
    let mu = q.eval(&e);
    Ok(Recovery { e, q, mu })
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScalingConstant {
    Exact(Rational),
    Approx { value: f64, tolerance: f64 },
}

impl ScalingConstant {
    pub fn as_f64(&self) -> f64 {
        match self {
            ScalingConstant::Exact(c) => crate::scalar::to_f64(c),
            ScalingConstant::Approx { value, .. } => *value,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ScalingConstant::Exact(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionData {
    pub e: Rational,
    pub q: Polynomial<Rational>,
    pub mu: Rational,
    pub c: ScalingConstant,
    pub p: Polynomial<Rational>,
}

/// The scaled pair `(tau_c(L), tau_c(Lambda))`.
#[derive(Clone, Debug, PartialEq)]
pub enum ScaledPair {
    Exact { l: Operator, lambda: Operator },
    Approx { l: OperatorF64, lambda: OperatorF64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Normalization {
    pub data: DecompositionData,
    /// `K + P(L)`, which commutes with `L`.
    pub lambda: Operator,
    pub scaled: ScaledPair,
}

fn exact_root(x: &BigInt, m: u32) -> Option<BigInt> {
    if x.is_negative() && m.is_multiple_of(2) {
        return None;
    }
    let r = x.nth_root(m);
    (num_traits::pow(r.clone(), m as usize) == *x).then_some(r)
}

/// Rational `m`-th root of `x` with the requested sign, if one exists.
pub fn rational_root(x: &Rational, m: u32, positive: bool) -> Option<Rational> {
    let num = exact_root(x.numer(), m)?;
    let den = exact_root(x.denom(), m)?;
    let r = Rational::new(num, den);
    if m % 2 == 1 {
        (r.is_positive() == positive || r.is_zero()).then_some(r)
    } else if positive {
        Some(r)
    } else {
        Some(-r)
    }
}

/// `c` with `c^{k+1} e = -1` and `c^n mu = (-1)^{n+k}`.
pub fn scaling_constant(e: &Rational, mu: &Rational, n: usize, order: usize) -> Result<ScalingConstant> {
    if e.is_zero() {
        return Err(Error::ZeroEigenvalue);
    }
    let target = -e.recip();
    let m = order as u32;
    // for even order the sign of c is fixed by c^n mu; n is then odd
    let want = Rational::sign_power((n + order - 1) as i64);
    let positive = if m % 2 == 1 { target.is_positive() } else { (mu.is_positive()) == want.is_positive() };
    if let Some(c) = rational_root(&target, m, positive) {
        return Ok(ScalingConstant::Exact(c));
    }
    let t = crate::scalar::to_f64(&target);
    if t < 0.0 && m.is_multiple_of(2) {
        return Err(Error::NoRealScaling);
    }
    let magnitude = t.abs().powf(1.0 / m as f64);
    let value = if positive { magnitude } else { -magnitude };
    Ok(ScalingConstant::Approx { value, tolerance: NUMERIC_TOLERANCE })
}

/// `c^{ord} C X C^{-1}` for an operator whose lowest term has order `ord`
/// and which may carry a constant term.
fn rescale<T: Scalar>(x: &DifferenceOperator<T>, c: &T, ord: usize) -> Result<DifferenceOperator<T>> {
    Ok(x.conjugate_scale(c)?.scale(&c.pow_int(ord as i64)))
}

/// Evaluates `P(L)`.
pub fn polynomial_in<T: Scalar>(p: &Polynomial<T>, l: &DifferenceOperator<T>) -> DifferenceOperator<T> {
    let mut acc = DifferenceOperator::zero(l.period());
    let mut power = DifferenceOperator::identity(l.period());
    for (s, coef) in p.coeffs().iter().enumerate() {
        if s > 0 {
            power = power.compose(l).expect("same period");
        }
        if !Ring::is_zero(coef) {
            acc = acc.add(&power.scale(coef)).expect("same period");
        }
    }
    acc
}

/// Finds `c` and `P` so that `tau_c(L)` is superperiodic and
/// `Lambda = K + P(L)` is its commuting dual up to the same scaling.
pub fn normalize_to_superperiodic(l: &Operator, k: &Operator) -> Result<Normalization> {
    let Recovery { e, q, mu } = recover_e_q(l, k)?;
    if e.is_zero() {
        return Err(Error::ZeroEigenvalue);
    }
    let (m, n) = (l.order()?, l.period());
    if !bloch_space_test(l, &e, &mu)?.passed {
        return Err(Error::NonScalarMonodromy);
    }
    // Q(E) - mu = (E - e)(P(E) + mu / e)
    let (quot, rem) = q.sub(&Polynomial::constant(mu.clone())).div_rem(&Polynomial::linear(&e));
    if !rem.is_zero() {
        return Err(Error::DivisionRemainder);
    }
    let p = quot.sub(&Polynomial::constant(mu.clone() / e.clone()));
    assert!(p.coeff(0).is_zero(), "P(0) must vanish once Q(0) = 0 and mu = Q(e)");
    let lambda = k.add(&polynomial_in(&p, l))?;
    let c = scaling_constant(&e, &mu, n, m)?;
    let scaled = match &c {
        ScalingConstant::Exact(c) => {
            let l2 = l.tau_scale(c)?;
            if !is_superperiodic(&l2)? {
                return Err(Error::NotSuperperiodic);
            }
            ScaledPair::Exact { l: l2, lambda: rescale(&lambda, c, n - m)? }
        }
        ScalingConstant::Approx { value, tolerance } => {
            let l2 = l.map(crate::scalar::to_f64).tau_scale(value)?;
            if superperiodic_residual(&l2)? > *tolerance {
                return Err(Error::NotSuperperiodic);
            }
            ScaledPair::Approx { l: l2, lambda: rescale(&lambda.map(crate::scalar::to_f64), value, n - m)? }
        }
    };
    Ok(Normalization { data: DecompositionData { e, q, mu, c, p }, lambda, scaled })
}

/// The inverse of the recovery: `(tau_s(L), tau_s(𝓛) + alpha tau_s(L))`
/// for `s = 1 / c0`. Normalizing the result returns `c = c0`. A nonzero
/// `alpha` needs the partner to have the larger order.
pub fn scramble(l: &Operator, dual_commuting: &Operator, alpha: &Rational, c0: &Rational) -> Result<(Operator, Operator)> {
    if c0.is_zero() {
        return Err(Error::ZeroScale);
    }
    let s = c0.recip();
    let (m, n) = (l.order()?, l.period());
    if !alpha.is_zero() && n - m <= m {
        return Err(Error::ScrambleOrder { order: m, partner: n - m });
    }
    let l_in = l.tau_scale(&s)?;
    let k_in = rescale(dual_commuting, &s, n - m)?.add(&l_in.scale(alpha))?;
    Ok((l_in, k_in))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::superperiodic::dual_pair;
    use crate::{rat, ratio};

    fn tri(n: usize, rows: &[&[i64]]) -> Operator {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Operator::triangular(n, &rows).unwrap()
    }

    fn poly(c: &[i64]) -> Polynomial<Rational> {
        Polynomial::new(c.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn n3_pair() {
        let l = tri(3, &[&[1, 1, 1]]);
        let k = Operator::shift(3, -1);
        let a = action_on_solutions(&l, &k).unwrap();
        assert_eq!(a.to_rows(), vec![vec![poly(&[0]), poly(&[1])], vec![poly(&[0, 1]), poly(&[-1])]]);
        let curve = bc_curve(&l, &k).unwrap();
        let expected = BivariatePolynomial::from_terms([((2, 0), rat(1)), ((1, 0), rat(1)), ((0, 1), rat(-1))]);
        assert_eq!(curve.poly, expected);
        let rec = recover_e_q(&l, &k).unwrap();
        assert_eq!(rec, Recovery { e: rat(-1), q: poly(&[0, -1]), mu: rat(1) });
        let norm = normalize_to_superperiodic(&l, &k).unwrap();
        assert_eq!(norm.data.c, ScalingConstant::Exact(rat(1)));
        assert!(norm.data.p.is_zero());
        assert_eq!(norm.lambda, k);
    }

    #[test]
    fn partner_shape_is_checked() {
        let l = tri(3, &[&[1, 1, 1]]);
        assert!(matches!(action_on_solutions(&l, &l), Err(Error::OrderMismatch { .. })));
        let l5 = tri(5, &[&[1, 3, 1, 2, 2]]);
        assert!(matches!(action_on_solutions(&l5, &l5), Err(Error::OrderMismatch { .. })));
        let bad = tri(5, &[&[1, 1, 1, 1, 2], &[0, 0, 0, 0, 0]]);
        assert_eq!(action_on_solutions(&l5, &bad).unwrap_err(), Error::CommutatorNonzero);
    }

    #[test]
    fn shifted_partner_breaks_normalization() {
        let l = tri(3, &[&[1, 1, 1]]);
        let k = Operator::shift(3, -1).add_constant(&rat(1));
        assert_eq!(recover_e_q(&l, &k).unwrap_err(), Error::NonzeroConstantTerm);
    }

    #[test]
    fn quiddity_pair() {
        let l = tri(5, &[&[1, 3, 1, 2, 2]]);
        let lcal = dual_pair(&l).unwrap().dual_commuting;
        let curve = bc_curve(&l, &lcal).unwrap();
        assert_eq!(curve.poly.coeff(2, 0), rat(1));
        assert_eq!(curve.poly.coeff(0, 3), rat(-1));
        let rec = recover_e_q(&l, &lcal).unwrap();
        assert_eq!(rec.e, rat(-1));
        assert_eq!(rec.q, poly(&[0, -1]));
        assert_eq!(rec.mu, rat(1));
    }

    #[test]
    fn scramble_round_trip() {
        let l = tri(5, &[&[1, 3, 1, 2, 2]]);
        let lcal = dual_pair(&l).unwrap().dual_commuting;
        for alpha in [rat(1), rat(3), rat(-2)] {
            for c0 in [rat(2), ratio(1, 3)] {
                let (l_in, k_in) = scramble(&l, &lcal, &alpha, &c0).unwrap();
                let norm = normalize_to_superperiodic(&l_in, &k_in).unwrap();
                assert_eq!(norm.data.c, ScalingConstant::Exact(c0.clone()));
                let ScaledPair::Exact { l: l2, lambda } = norm.scaled else { panic!("exact expected") };
                assert_eq!(l2, l);
                assert_eq!(lambda, lcal);
                // K_in - alpha L_in is the scaled dual, so P(E) = -alpha E
                assert_eq!(norm.data.p, Polynomial::new(vec![rat(0), -alpha.clone()]));
            }
        }
    }

    #[test]
    fn scramble_needs_a_longer_partner() {
        let l = tri(3, &[&[1, 1, 1]]);
        let lcal = Operator::shift(3, -1);
        assert_eq!(scramble(&l, &lcal, &rat(1), &rat(1)), Err(Error::ScrambleOrder { order: 2, partner: 1 }));
        assert!(scramble(&l, &lcal, &rat(0), &rat(2)).is_ok());
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_root(&ratio(8, 27), 3, true), Some(ratio(2, 3)));
        assert_eq!(rational_root(&ratio(-8, 27), 3, false), Some(ratio(-2, 3)));
        assert_eq!(rational_root(&ratio(4, 9), 2, false), Some(ratio(-2, 3)));
        assert_eq!(rational_root(&rat(2), 2, true), None);
        assert_eq!(rational_root(&rat(-4), 2, true), None);
    }

    #[test]
    fn irrational_scaling_falls_back() {
        // tau_s with s^2 = 1/2 is not rational; recover from e = -2
        let c = scaling_constant(&rat(-2), &rat(-4), 5, 2).unwrap();
        let ScalingConstant::Approx { value, tolerance } = c else { panic!("numeric expected") };
        assert!((value * value * -2.0 + 1.0).abs() < 1e-15);
        assert_eq!(tolerance, NUMERIC_TOLERANCE);
        assert_eq!(scaling_constant(&rat(1), &rat(1), 5, 2), Err(Error::NoRealScaling));
    }
}
