//! Superperiodic operators: every solution of `(L + 1) psi = 0` is Bloch
//! with multiplicator `(-1)^{n+k}`. Detection, two-sided division of
//! `T^{-n} - (-1)^{n+k}` by `L + 1`, the commuting dual and the Gale dual.

use crate::bloch::BlochSequence;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::{commutator, DifferenceOperator};
use crate::ring::Ring;
use crate::scalar::{ExactField, Scalar};
use crate::spectral::monodromy_matrix;

/// `mu^{k+1} = (-1)^{kn} e^n`, the condition for `(L - e)` to admit a full
/// Bloch kernel with multiplicator `mu`.
pub fn admissible<T: Scalar>(e: &T, mu: &T, n: usize, k: usize) -> bool {
    let lhs = mu.pow_int(k as i64 + 1);
    let rhs = T::sign_power((k * n) as i64) * e.pow_int(n as i64);
    lhs == rhs
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissiblePair<T> {
    pub e: T,
    pub mu: T,
}

impl<T: Scalar> AdmissiblePair<T> {
    /// `(-1, (-1)^{n+k})`, the superperiodic pair.
    pub fn superperiodic(n: usize, k: usize) -> Self {
        AdmissiblePair { e: -T::one(), mu: T::sign_power((n + k) as i64) }
    }

    pub fn is_admissible(&self, n: usize, k: usize) -> bool {
        admissible(&self.e, &self.mu, n, k)
    }

    /// Image under the scaling `tau_c`: `(c^{k+1} e, c^n mu)`.
    pub fn scaled(&self, c: &T, n: usize, k: usize) -> Self {
        AdmissiblePair { e: c.pow_int(k as i64 + 1) * self.e.clone(), mu: c.pow_int(n as i64) * self.mu.clone() }
    }
}

#[derive(Clone, Debug)]
pub struct BlochCertificate<T: Ring> {
    pub passed: bool,
    /// Monodromy at `e` in the window basis `(psi_0, ..., psi_{-k})`.
    pub monodromy: Matrix<T>,
}

/// True iff the monodromy of `L` at `e` is exactly `mu * Id`.
pub fn bloch_space_test<T: Scalar>(l: &DifferenceOperator<T>, e: &T, mu: &T) -> Result<BlochCertificate<T>> {
    let monodromy = monodromy_matrix(l, e)?;
    let passed = monodromy == Matrix::scalar(monodromy.rows(), mu.clone());
    Ok(BlochCertificate { passed, monodromy })
}

/// Largest entry of `M(e) - mu * Id`; used for floating-point operators.
pub fn bloch_space_residual<T: Scalar>(l: &DifferenceOperator<T>, e: &T, mu: &T) -> Result<f64> {
    let monodromy = monodromy_matrix(l, e)?;
    Ok(monodromy.sub(&Matrix::scalar(monodromy.rows(), mu.clone())).max_abs())
}

pub fn is_superperiodic<T: Scalar>(l: &DifferenceOperator<T>) -> Result<bool> {
    let (n, k) = (l.period(), l.order()? - 1);
    let pair = AdmissiblePair::<T>::superperiodic(n, k);
    Ok(bloch_space_test(l, &pair.e, &pair.mu)?.passed)
}

pub fn superperiodic_residual<T: Scalar>(l: &DifferenceOperator<T>) -> Result<f64> {
    let (n, k) = (l.period(), l.order()? - 1);
    let pair = AdmissiblePair::<T>::superperiodic(n, k);
    bloch_space_residual(l, &pair.e, &pair.mu)
}

/// `k + 1` Bloch solutions of `(L - e) psi = 0` with a common multiplicator,
/// started from the unit windows `psi_{-r} = delta_{rc}`, `r = 0..=k`.
#[derive(Clone, Debug)]
pub struct KernelBasis<T: Scalar> {
    pub eigenvalue: T,
    pub multiplicator: T,
    pub solutions: Vec<BlochSequence<T>>,
}

impl<T: Scalar> KernelBasis<T> {
    pub fn dimension(&self) -> usize {
        self.solutions.len()
    }

    /// Discrete Wronskian `det[psi^{(c)}_{at - r}]`.
    pub fn casoratian(&self, at: i64) -> T {
        let m = self.dimension();
        Matrix::from_fn(m, m, |r, c| self.solutions[c].value(at - r as i64)).field_determinant()
    }

    /// `V_i = (-1)^i psi_i`, the solutions of the alternating recursion;
    /// their multiplicator is `(-1)^n mu`.
    pub fn v_gauged(&self) -> Result<Vec<BlochSequence<T>>> {
        self.solutions
            .iter()
            .map(|psi| {
                let n = psi.period();
                let window = (0..n).map(|i| T::sign_power(i as i64) * psi.window()[i].clone()).collect();
                BlochSequence::new(window, T::sign_power(n as i64) * psi.multiplicator().clone())
            })
            .collect()
    }
}

/// Values `psi_{lo}..=psi_0` of the solution of `(L - e) psi = 0` with
/// unit window at column `c`, `lo <= -k`.
pub(crate) fn unit_solution<T: Scalar>(l: &DifferenceOperator<T>, e: &T, c: usize, lo: i64) -> Vec<T> {
    let m = l.order().expect("checked by caller") as i64;
    let lo = lo.min(1 - m);
    let len = (-lo + 1) as usize;
    // psi[t] = psi_{-t}
    let mut psi = vec![T::zero(); len];
    psi[c] = T::one();
    for i in (lo + m..=0).rev() {
        let mut v = e.clone() * psi[(-i) as usize].clone();
        for j in 1..m {
            v = v - l.coefficient(-j, i) * psi[(j - i) as usize].clone();
        }
        psi[(m - i) as usize] = v;
    }
    psi
}

pub fn kernel_basis<T: ExactField>(l: &DifferenceOperator<T>, e: &T) -> Result<KernelBasis<T>> {
    let m = l.order()?;
    let n = l.period() as i64;
    let mu = monodromy_matrix(l, e)?.as_scalar().ok_or(Error::NonScalarMonodromy)?;
    if Ring::is_zero(&mu) {
        return Err(Error::NonScalarMonodromy);
    }
    let mut solutions = Vec::with_capacity(m);
    for c in 0..m {
        let psi = unit_solution(l, e, c, -n);
        // psi_r = psi_{r-n} / mu
        let window = (0..n)
            .map(|r| if r == 0 { psi[0].clone() } else { psi[(n - r) as usize].clone() / mu.clone() })
            .collect();
        let seq = BlochSequence::new(window, mu.clone())?;
        let image = l.apply(&seq)?;
        if (0..n).any(|i| image.value(i) != e.clone() * seq.value(i)) {
            return Err(Error::Degenerate("kernel solution is not annihilated".into()));
        }
        solutions.push(seq);
    }
    let basis = KernelBasis { eigenvalue: e.clone(), multiplicator: mu, solutions };
    if Ring::is_zero(&basis.casoratian(0)) {
        return Err(Error::Degenerate("vanishing Casoratian".into()));
    }
    Ok(basis)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisionResult<T: Scalar> {
    pub side: Side,
    pub quotient: DifferenceOperator<T>,
    pub remainder: DifferenceOperator<T>,
}

impl<T: Scalar> DivisionResult<T> {
    pub fn is_exact(&self) -> bool {
        self.remainder.is_zero()
    }
}

/// `T^{-n} - (-1)^{n+k}`.
pub fn division_target<T: Scalar>(n: usize, order: usize) -> DifferenceOperator<T> {
    let s = T::sign_power((n + order - 1) as i64);
    DifferenceOperator::shift(n, -(n as i64)).add_constant(&-s)
}

/// Euclidean division of `T^{-n} - (-1)^{n+k}` by the monic `L + 1`:
/// `M = (L+1) Q + R` (right) or `M = Q (L+1) + R` (left), with the
/// remainder supported on powers `0, -1, .., -k`.
pub fn divide<T: Scalar>(l: &DifferenceOperator<T>, side: Side) -> Result<DivisionResult<T>> {
    let m = l.order()?;
    let n = l.period();
    if m >= n {
        return Err(Error::OrderTooLarge { order: m, n });
    }
    let target = division_target::<T>(n, m);
    let divisor = l.add_constant(&T::one());
    let mi = m as i64;
    let mut quotient = DifferenceOperator::zero(n);
    let mut remainder = target.clone();
    // peel the most negative power until it lies above -m
    while let Some(low) = remainder.min_power().filter(|&p| p <= -mi) {
        let c = remainder.term(low).expect("present").clone();
        let p = -low - mi;
        let (term, product) = match side {
            Side::Right => {
                let term = DifferenceOperator::monomial(-p, c.shifted(mi));
                let product = divisor.compose(&term)?;
                (term, product)
            }
            Side::Left => {
                let term = DifferenceOperator::monomial(-p, c);
                let product = term.compose(&divisor)?;
                (term, product)
            }
        };
        quotient = quotient.add(&term)?;
        remainder = remainder.sub(&product)?;
    }
    let product = match side {
        Side::Right => divisor.compose(&quotient)?,
        Side::Left => quotient.compose(&divisor)?,
    };
    assert!(product.add(&remainder)? == target, "division identity failed");
    Ok(DivisionResult { side, quotient, remainder })
}

/// An operator together with its commuting dual `𝓛` and Gale dual `𝒢(L)`,
/// both of order `n - k - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaleDualPair<T: Scalar> {
    pub operator: DifferenceOperator<T>,
    pub dual_commuting: DifferenceOperator<T>,
    pub gale: DifferenceOperator<T>,
}

/// `𝒢 = T^{k+1} sigma(tau_{-1}(𝓛)) T^{-k-1}`, where `tau_{-1}` is the
/// sign-renormalized `epsilon` gauge. The index shift aligns the Gale
/// duality offset with `n - k - 1`; without it the same product vanishes
/// at offset zero.
pub fn gale_from_commuting<T: Scalar>(dual_commuting: &DifferenceOperator<T>, order: usize) -> Result<DifferenceOperator<T>> {
    let gauged = dual_commuting.tau_scale(&-T::one())?;
    Ok(gauged.sigma()?.shift_index(order as i64))
}

pub fn dual_pair<T: ExactField>(l: &DifferenceOperator<T>) -> Result<GaleDualPair<T>> {
    let m = l.order()?;
    let n = l.period();
    if !is_superperiodic(l)? {
        return Err(Error::NotSuperperiodic);
    }
    let right = divide(l, Side::Right)?;
    let left = divide(l, Side::Left)?;
    if !right.is_exact() || !left.is_exact() {
        return Err(Error::DivisionRemainder);
    }
    if right.quotient != left.quotient {
        return Err(Error::QuotientMismatch);
    }
    let s = T::sign_power((n + m - 1) as i64);
    let dual_commuting = right.quotient.add_constant(&s);
    if !commutator(l, &dual_commuting)?.is_zero() {
        return Err(Error::CommutatorNonzero);
    }
    let gale = gale_from_commuting(&dual_commuting, m)?;
    if gale.order()? != n - m || !is_superperiodic(&gale)? {
        return Err(Error::DualNotSuperperiodic);
    }
    Ok(GaleDualPair { operator: l.clone(), dual_commuting, gale })
}

#[derive(Clone, Debug)]
pub struct DualityCheck<T: Scalar> {
    pub offset: i64,
    /// `W_(j+offset) eps V_(j)` for `j = 0..n`, each `(n-k-1) x (k+1)`.
    pub products: Vec<Matrix<T>>,
    pub max_residual: T,
}

impl<T: Scalar> DualityCheck<T> {
    pub fn is_zero(&self) -> bool {
        self.products.iter().all(Matrix::is_zero)
    }
}

/// Forms `W_(i) eps V_(j)` with `i - j = offset`, where the columns of
/// `V_(j)` are the recursion solutions `V_{j+1..j+n}` of `L`, the rows of
/// `W_(i)` those of the Gale dual, and `eps = diag(1, -1, 1, ..)`.
pub fn matrix_duality_check<T: ExactField>(
    l: &DifferenceOperator<T>,
    gale: &DifferenceOperator<T>,
    offset: i64,
) -> Result<DualityCheck<T>> {
    let n = l.period();
    if gale.period() != n {
        return Err(Error::PeriodMismatch { left: n, right: gale.period() });
    }
    let minus_one = -T::one();
    let v = kernel_basis(l, &minus_one)?.v_gauged()?;
    let w = kernel_basis(gale, &minus_one)?.v_gauged()?;
    let mut products = Vec::with_capacity(n);
    let mut max_residual = T::zero();
    for j in 0..n as i64 {
        let i = j + offset;
        let wm = Matrix::from_fn(w.len(), n, |r, t| w[r].value(i + t as i64 + 1) * T::sign_power(t as i64));
        let vm = Matrix::from_fn(n, v.len(), |t, c| v[c].value(j + t as i64 + 1));
        let p = wm.mul(&vm);
        for r in 0..p.rows() {
            for c in 0..p.cols() {
                let a = p.get(r, c).abs();
                if a > max_residual {
                    max_residual = a;
                }
            }
        }
        products.push(p);
    }
    Ok(DualityCheck { offset, products, max_residual })
}

/// Everything the `check` command reports about one operator.
#[derive(Clone, Debug)]
pub struct SuperperiodicCertificate<T: Scalar> {
    pub superperiodic: bool,
    pub monodromy: Matrix<T>,
    pub remainder_left: DifferenceOperator<T>,
    pub remainder_right: DifferenceOperator<T>,
    pub gale_dual: Option<GaleDualPair<T>>,
}

pub fn certify<T: ExactField>(l: &DifferenceOperator<T>) -> Result<SuperperiodicCertificate<T>> {
    let (n, k) = (l.period(), l.order()? - 1);
    let pair = AdmissiblePair::<T>::superperiodic(n, k);
    let cert = bloch_space_test(l, &pair.e, &pair.mu)?;
    let right = divide(l, Side::Right)?;
    let left = divide(l, Side::Left)?;
    let gale_dual = if cert.passed { Some(dual_pair(l)?) } else { None };
    Ok(SuperperiodicCertificate {
        superperiodic: cert.passed,
        monodromy: cert.monodromy,
        remainder_left: left.remainder,
        remainder_right: right.remainder,
        gale_dual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio, Operator, Rational, Sequence};

    fn tri(n: usize, rows: &[&[i64]]) -> Operator {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Operator::triangular(n, &rows).unwrap()
    }

    fn seq(v: &[i64]) -> Sequence {
        Sequence::new(v.iter().map(|&x| rat(x)).collect()).unwrap()
    }

    fn quiddity5() -> Operator {
        tri(5, &[&[1, 3, 1, 2, 2]])
    }

    #[test]
    fn admissibility_examples() {
        for n in 2..9 {
            for k in 0..5 {
                assert!(AdmissiblePair::<Rational>::superperiodic(n, k).is_admissible(n, k));
            }
        }
        assert!(!admissible(&rat(1), &rat(-1), 3, 1));
        let p = AdmissiblePair::<Rational>::superperiodic(5, 2).scaled(&ratio(2, 3), 5, 2);
        assert!(p.is_admissible(5, 2));
        assert!(!AdmissiblePair { e: rat(-1), mu: rat(1) }.is_admissible(5, 2));
    }

    #[test]
    fn bloch_space_examples() {
        assert!(bloch_space_test(&tri(3, &[&[1, 1, 1]]), &rat(-1), &rat(1)).unwrap().passed);
        assert!(is_superperiodic(&quiddity5()).unwrap());
        assert!(!is_superperiodic(&tri(3, &[&[2, 2, 2]])).unwrap());
        assert_eq!(superperiodic_residual(&quiddity5()).unwrap(), 0.0);
    }

    #[test]
    fn kernel_basis_for_cube_roots() {
        let l = tri(3, &[&[1, 1, 1]]);
        let basis = kernel_basis(&l, &rat(-1)).unwrap();
        assert_eq!(basis.dimension(), 2);
        assert_eq!(basis.multiplicator, rat(1));
        for psi in &basis.solutions {
            for i in -6..6 {
                assert_eq!(psi.value(i - 2) + psi.value(i - 1) + psi.value(i), rat(0));
                assert_eq!(psi.value(i + 3), psi.value(i));
            }
        }
        assert_eq!(basis.casoratian(0), rat(1));
        assert_eq!(kernel_basis(&tri(3, &[&[2, 2, 2]]), &rat(-1)).unwrap_err(), Error::NonScalarMonodromy);
    }

    #[test]
    fn division_examples() {
        let l = tri(3, &[&[1, 1, 1]]);
        for side in [Side::Left, Side::Right] {
            let d = divide(&l, side).unwrap();
            assert!(d.is_exact());
            assert_eq!(d.quotient, Operator::shift(3, -1).add_constant(&rat(-1)));
        }
        let d = divide(&Operator::shift(3, -1), Side::Right).unwrap();
        assert!(d.is_exact());
        let expected = Operator::shift(3, -2).sub(&Operator::shift(3, -1)).unwrap();
        assert_eq!(d.quotient.add_constant(&rat(-1)), expected);
        let d = divide(&tri(3, &[&[2, 2, 2]]), Side::Left).unwrap();
        assert!(!d.is_exact());
        assert!(d.remainder.min_power().unwrap() > -2);
        assert_eq!(divide(&tri(2, &[&[1, 1]]), Side::Left).unwrap_err(), Error::OrderTooLarge { order: 2, n: 2 });
    }

    #[test]
    fn dual_pair_n3() {
        let pair = dual_pair(&tri(3, &[&[1, 1, 1]])).unwrap();
        assert_eq!(pair.dual_commuting, Operator::shift(3, -1));
        assert_eq!(pair.gale, Operator::shift(3, -1));
        assert!(bloch_space_test(&pair.gale, &rat(-1), &rat(-1)).unwrap().passed);
        assert_eq!(dual_pair(&tri(3, &[&[2, 2, 2]])).unwrap_err(), Error::NotSuperperiodic);
    }

    #[test]
    fn dual_pair_quiddity5() {
        let pair = dual_pair(&quiddity5()).unwrap();
        let expected = Operator::from_terms(
            5,
            [(-3, seq(&[1, 1, 1, 1, 1])), (-2, seq(&[-1, -2, -2, -1, -3])), (-1, seq(&[1, 3, 1, 2, 2]))],
        )
        .unwrap();
        assert_eq!(pair.dual_commuting, expected);
        assert_eq!(pair.gale.order().unwrap(), 3);
        let unshifted = tri(5, &[&[3, 1, 2, 2, 1], &[2, 2, 1, 3, 1]]);
        assert_eq!(pair.gale, unshifted.shift_index(2));
        // the dual of the dual is the original operator
        assert_eq!(dual_pair(&pair.gale).unwrap().gale, quiddity5());
    }

    #[test]
    fn duality_offsets() {
        for l in [tri(3, &[&[1, 1, 1]]), quiddity5(), tri(7, &[&[5, 1, 2, 2, 2, 2, 1]])] {
            let n = l.period() as i64;
            let m = l.order().unwrap() as i64;
            let pair = dual_pair(&l).unwrap();
            let good = matrix_duality_check(&l, &pair.gale, n - m).unwrap();
            assert!(good.is_zero());
            assert_eq!(good.products[0].rows() as i64, n - m);
            assert_eq!(good.products[0].cols() as i64, m);
            // for n = 3 the 1x2 product vanishes at every offset
            if n > 3 {
                assert!(!matrix_duality_check(&l, &pair.gale, 0).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn certificate_for_negative_control() {
        let cert = certify(&tri(3, &[&[2, 2, 2]])).unwrap();
        assert!(!cert.superperiodic);
        assert!(cert.gale_dual.is_none());
        assert!(!cert.remainder_left.is_zero());
        let cert = certify(&quiddity5()).unwrap();
        assert!(cert.superperiodic && cert.remainder_right.is_zero());
    }
}
