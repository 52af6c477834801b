//! Monodromy (transfer) matrices, the characteristic polynomial `R(w, E)`
//! of the spectral curve, and Newton polygon bookkeeping.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::operator::DifferenceOperator;
use crate::poly::{BivariatePolynomial, Polynomial};
use crate::ring::Ring;
use crate::scalar::{ExactField, Scalar};

/// Transfer step at index `i`: maps the window `(psi_i, ..., psi_{i-k})` to
/// `(psi_{i-1}, ..., psi_{i-k-1})` along solutions of `L psi = E psi`, using
/// `psi_{i-k-1} = E psi_i - sum_j a^j_i psi_{i-j}`. Its determinant is
/// `(-1)^k E`.
pub fn transfer_step<T: Scalar, R: Ring>(
    l: &DifferenceOperator<T>,
    order: usize,
    i: i64,
    energy: &R,
    embed: impl Fn(T) -> R,
) -> Matrix<R> {
    let mut s = Matrix::zeros(order, order);
    for r in 0..order - 1 {
        s.set(r, r + 1, R::one());
    }
    s.set(order - 1, 0, energy.clone());
    for j in 1..order {
        s.set(order - 1, j, embed(-l.coefficient(-(j as i64), i)));
    }
    s
}

fn monodromy_generic<T: Scalar, R: Ring>(
    l: &DifferenceOperator<T>,
    energy: &R,
    embed: impl Fn(T) -> R,
) -> Result<Matrix<R>> {
    let m = l.order()?;
    let n = l.period() as i64;
    let mut acc = Matrix::identity(m);
    for i in (1 - n..=0).rev() {
        acc = transfer_step(l, m, i, energy, &embed).mul(&acc);
    }
    Ok(acc)
}

/// Matrix of `T^{-n}` on solutions of `L psi = E0 psi`, in the basis of
/// initial windows `(psi_0, psi_{-1}, ..., psi_{-k})`.
pub fn monodromy_matrix<T: Scalar>(l: &DifferenceOperator<T>, energy: &T) -> Result<Matrix<T>> {
    monodromy_generic(l, energy, |x| x)
}

/// Monodromy with symbolic `E`; entries are polynomials because the
/// downward recursion never divides.
pub fn monodromy_matrix_symbolic<T: Scalar>(l: &DifferenceOperator<T>) -> Result<Matrix<Polynomial<T>>> {
    monodromy_generic(l, &Polynomial::x(), Polynomial::constant)
}

/// `L(w)`: the restriction of `L` to sequences with `w psi_i = psi_{i-n}`,
/// in the basis `psi_1..psi_n`. Entries are polynomials in `w`.
pub fn solution_space_matrix<T: Scalar>(l: &DifferenceOperator<T>) -> Result<Matrix<Polynomial<T>>> {
    l.triangular_shape()?;
    let n = l.period() as i64;
    let mut a: Matrix<Polynomial<T>> = Matrix::zeros(n as usize, n as usize);
    for row in 0..n {
        let i = row + 1;
        for (p, c) in l.terms() {
            let mut idx = i + p;
            let mut wraps = 0usize;
            while idx <= 0 {
                idx += n;
                wraps += 1;
            }
            let col = (idx - 1) as usize;
            let entry = Polynomial::monomial(c.value(i).clone(), wraps);
            let v = a.get(row as usize, col).add(&entry);
            a.set(row as usize, col, v);
        }
    }
    Ok(a)
}

/// Errors unless `gcd(n, k+1) = 1`, needed for the curve shape and the series.
pub fn check_coprime(n: usize, order: usize) -> Result<()> {
    if n.gcd(&order) != 1 {
        return Err(Error::NotCoprime { n, order });
    }
    Ok(())
}

fn normalize_leading<T: ExactField>(r: BivariatePolynomial<T>, order: u32) -> Result<BivariatePolynomial<T>> {
    let lead = r.coeff(order, 0);
    if Ring::is_zero(&lead) {
        return Err(Error::SupportViolation(format!("no w^{order} term in {r}")));
    }
    Ok(r.scale(&(T::one() / lead)))
}

/// `det(w - T^{-n}(E))`, normalized monic in `w`. No coprimality needed.
pub fn char_poly_monodromy<T: ExactField>(l: &DifferenceOperator<T>) -> Result<BivariatePolynomial<T>> {
    let m = l.order()?;
    let mono = monodromy_matrix_symbolic(l)?;
    let w = BivariatePolynomial::monomial(1, 0, T::one());
    let mat = Matrix::from_fn(m, m, |r, c| {
        let e = BivariatePolynomial::from_second(mono.get(r, c)).neg();
        if r == c {
            e.add(&w)
        } else {
            e
        }
    });
    normalize_leading(mat.determinant(), m as u32)
}

/// `det(L(w) - E)`, normalized monic in `w`. No coprimality needed.
pub fn char_poly_solution_space<T: ExactField>(l: &DifferenceOperator<T>) -> Result<BivariatePolynomial<T>> {
    let m = l.order()?;
    let a = solution_space_matrix(l)?;
    let e = BivariatePolynomial::monomial(0, 1, T::one());
    let mat = Matrix::from_fn(a.rows(), a.cols(), |r, c| {
        let x = BivariatePolynomial::from_first(a.get(r, c));
        if r == c {
            x.sub(&e)
        } else {
            x
        }
    });
    normalize_leading(mat.determinant(), m as u32)
}

/// `true` when `(i, j)` is allowed in `R`: one of the two vertices
/// `(k+1, 0)`, `(0, n)`, or `i > 0` with `n i + (k+1) j < n (k+1)`.
pub fn curve_support_allowed(i: u32, j: u32, order: usize, n: usize) -> bool {
    let (m, n) = (order as u64, n as u64);
    let (i, j) = (i as u64, j as u64);
    (i, j) == (m, 0) || (i, j) == (0, n) || (i > 0 && n * i + m * j < n * m)
}

/// The characteristic polynomial `R(w, E) = w^{k+1} - E^n + sum r_ij w^i E^j`
/// of the spectral curve, computed from `det(L(w) - E)` and validated
/// against the curve shape.
pub fn char_poly<T: ExactField>(l: &DifferenceOperator<T>) -> Result<BivariatePolynomial<T>> {
    let m = l.order()?;
    let n = l.period();
    check_coprime(n, m)?;
    let r = char_poly_solution_space(l)?;
    if r.coeff(0, n as u32) != -T::one() {
        return Err(Error::SupportViolation(format!("E^{n} coefficient is not -1 in {r}")));
    }
    if let Some((i, j)) = r.support().into_iter().find(|&(i, j)| !curve_support_allowed(i, j, m, n)) {
        return Err(Error::SupportViolation(format!("monomial w^{i} E^{j} outside the curve triangle")));
    }
    Ok(r)
}

/// Lattice data of the Newton triangle with vertices `(1,0)`, `(k+1,0)`,
/// `(0,n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygonReport {
    pub support: Vec<(u32, u32)>,
    pub has_w_vertex: bool,
    pub has_e_vertex: bool,
    pub has_r10: bool,
    /// Lattice points strictly inside the triangle (the generic genus).
    pub interior_count: usize,
    /// Monomials admissible as free coefficients `r_ij`.
    pub slot_count: usize,
}

/// Interior points counted by enumeration: `j > 0`, `n i + j > n`,
/// `n i + (k+1) j < n (k+1)`.
pub fn interior_lattice_points(k: usize, n: usize) -> usize {
    let m = k + 1;
    (0..=m)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| n * i + j > n && n * i + m * j < n * m)
        .count()
}

/// Admissible slots: `i > 0`, `j >= 0`, `n i + (k+1) j < n (k+1)`.
pub fn slot_lattice_points(k: usize, n: usize) -> usize {
    let m = k + 1;
    (1..=m)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| n * i + m * j < n * m)
        .count()
}

pub fn newton_report<T: Scalar>(r: &BivariatePolynomial<T>, k: usize, n: usize) -> Result<NewtonPolygonReport> {
    let support = r.support();
    if let Some(&(i, j)) = support.iter().find(|&&(i, j)| !curve_support_allowed(i, j, k + 1, n)) {
        return Err(Error::SupportViolation(format!("monomial w^{i} E^{j} outside the Newton triangle")));
    }
    Ok(NewtonPolygonReport {
        has_w_vertex: r.coeff(k as u32 + 1, 0).is_one(),
        has_e_vertex: r.coeff(0, n as u32) == -T::one(),
        has_r10: !Ring::is_zero(&r.coeff(1, 0)),
        support,
        interior_count: interior_lattice_points(k, n),
        slot_count: slot_lattice_points(k, n),
    })
}

/// Multiplicity of `w0` as a root of `R(w, E0)`.
pub fn multiplicity_at<T: ExactField>(r: &BivariatePolynomial<T>, e0: &T, w0: &T) -> Result<usize> {
    r.eval_second(e0)
        .root_multiplicity(w0)
        .ok_or_else(|| Error::Degenerate("R(w, E0) vanishes identically".into()))
}
