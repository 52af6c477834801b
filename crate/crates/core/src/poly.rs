//! Univariate (dense) and bivariate (sparse) polynomials over a [`Scalar`].

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::{ExactDivRing, Ring};
use crate::scalar::{ExactField, Scalar};

/// Dense univariate polynomial; `coeffs[d]` multiplies `x^d`. Trailing
/// zeros are trimmed so equality is structural.
#[derive(Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| Ring::is_zero(c)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c x^d`.
    pub fn monomial(c: T, d: usize) -> Self {
        let mut coeffs = vec![T::zero(); d + 1];
        coeffs[d] = c;
        Self::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    /// `x - root`.
    pub fn linear(root: &T) -> Self {
        Self::new(vec![-root.clone(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> T {
        self.coeffs.get(d).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power with a nonzero coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !Ring::is_zero(c))
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Drops every term of degree `>= len`.
    pub fn truncate(&self, len: usize) -> Self {
        Self::new(self.coeffs.iter().take(len).cloned().collect())
    }

    /// Multiplies by `x^d`.
    pub fn shift_up(&self, d: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); d];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `self * other` with every term of degree `>= len` dropped.
    pub fn mul_truncated(&self, other: &Self, len: usize) -> Self {
        if self.is_zero() || other.is_zero() || len == 0 {
            return Self::zero();
        }
        let size = (self.coeffs.len() + other.coeffs.len() - 1).min(len);
        let mut out = vec![T::zero(); size];
        for (i, a) in self.coeffs.iter().enumerate().take(size) {
            if Ring::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(size - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(T::one()), |acc, _| Ring::mul(&acc, self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c.clone() * T::from_int(d as i64))
                .collect(),
        )
    }

    pub fn map<S: Scalar>(&self, f: impl FnMut(&T) -> S) -> Polynomial<S> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: ExactField> Polynomial<T> {
    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree().filter(|&d| d >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![T::zero(); sd - dd + 1];
        for d in (dd..=sd).rev() {
            let q = rem[d].clone() / lead.clone();
            if Ring::is_zero(&q) {
                continue;
            }
            for (t, c) in divisor.coeffs.iter().enumerate() {
                rem[d - dd + t] = rem[d - dd + t].clone() - q.clone() * c.clone();
            }
            quot[d - dd] = q;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Multiplicity of `root` as a zero; `None` for the zero polynomial.
    pub fn root_multiplicity(&self, root: &T) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = Self::linear(root);
        let mut p = self.clone();
        let mut mult = 0;
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return Some(mult);
            }
            p = q;
            mult += 1;
        }
    }
}

impl<T: Scalar> Ring for Polynomial<T> {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::constant(T::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|d| self.coeff(d) + other.coeff(d)).collect())
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|d| self.coeff(d) - other.coeff(d)).collect())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Ring::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
    fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<T: ExactField> ExactDivRing for Polynomial<T> {
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }
}

impl<T: Scalar> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.display_in("x"), f)
    }
}

/// Display adaptor with caller-chosen variable names.
pub struct Named<'a, P> {
    poly: &'a P,
    vars: (&'a str, &'a str),
}

impl<T: Scalar> Polynomial<T> {
    /// Renders with `var` in place of `x`.
    pub fn display_in<'a>(&'a self, var: &'a str) -> Named<'a, Self> {
        Named { poly: self, vars: (var, "") }
    }
}

impl<T: Scalar> fmt::Display for Named<'_, Polynomial<T>> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(u32, u32, T)> =
            self.poly.coeffs.iter().enumerate().map(|(d, c)| (d as u32, 0, c.clone())).collect();
        write_terms(f, terms.into_iter().rev(), self.vars)
    }
}

/// Sparse polynomial in two variables. Keys are `(i, j)` exponents of the
/// first and second variable (`w`/`kappa` and `E` in this crate); zero
/// coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct BivariatePolynomial<T> {
    coeffs: BTreeMap<(u32, u32), T>,
}

impl<T: Scalar> BivariatePolynomial<T> {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), T)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn monomial(i: u32, j: u32, c: T) -> Self {
        Self::from_terms([((i, j), c)])
    }

    /// Embeds a polynomial in the second variable.
    pub fn from_second(p: &Polynomial<T>) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(j, c)| ((0, j as u32), c.clone())))
    }

    /// Embeds a polynomial in the first variable.
    pub fn from_first(p: &Polynomial<T>) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| ((i as u32, 0), c.clone())))
    }

    fn add_term(&mut self, key: (u32, u32), c: T) {
        if Ring::is_zero(&c) {
            return;
        }
        let v = match self.coeffs.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !Ring::is_zero(&v) {
            self.coeffs.insert(key, v);
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> T {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    /// Terms in lexicographic order of `(i, j)`.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &T)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> Vec<(u32, u32)> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree_first(&self) -> Option<u32> {
        self.coeffs.keys().map(|k| k.0).max()
    }

    pub fn degree_second(&self) -> Option<u32> {
        self.coeffs.keys().map(|k| k.1).max()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(k, c)| (*k, c.clone() * s.clone())))
    }

    /// Fixes the second variable, leaving a polynomial in the first.
    pub fn eval_second(&self, y: &T) -> Polynomial<T> {
        let deg = self.degree_first().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![T::zero(); deg];
        for ((i, j), c) in &self.coeffs {
            coeffs[*i as usize] = coeffs[*i as usize].clone() + c.clone() * y.pow_int(*j as i64);
        }
        Polynomial::new(coeffs)
    }

    /// Substitutes polynomials (in one auxiliary variable) for both variables.
    pub fn substitute(&self, x: &Polynomial<T>, y: &Polynomial<T>) -> Polynomial<T> {
        let mut x_pows: BTreeMap<u32, Polynomial<T>> = BTreeMap::new();
        let mut y_pows: BTreeMap<u32, Polynomial<T>> = BTreeMap::new();
        let mut acc = Polynomial::zero();
        for ((i, j), c) in &self.coeffs {
            let xi = x_pows.entry(*i).or_insert_with(|| x.pow(*i as usize)).clone();
            let yj = y_pows.entry(*j).or_insert_with(|| y.pow(*j as usize)).clone();
            acc = Ring::add(&acc, &Ring::mul(&xi, &yj).scale(c));
        }
        acc
    }

    pub fn map<S: Scalar>(&self, mut f: impl FnMut(&T) -> S) -> BivariatePolynomial<S> {
        BivariatePolynomial::from_terms(self.coeffs.iter().map(|(k, c)| (*k, f(c))))
    }

    fn leading_key(&self) -> Option<(u32, u32)> {
        self.coeffs.keys().next_back().copied()
    }
}

impl<T: Scalar> Ring for BivariatePolynomial<T> {
    fn zero() -> Self {
        BivariatePolynomial::zero()
    }
    fn one() -> Self {
        Self::monomial(0, 0, T::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, -c.clone());
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((i1, j1), a) in &self.coeffs {
            for ((i2, j2), b) in &other.coeffs {
                out.add_term((i1 + i2, j1 + j2), a.clone() * b.clone());
            }
        }
        out
    }
    fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }
}

impl<T: ExactField> ExactDivRing for BivariatePolynomial<T> {
    /// Multivariate division under lexicographic order; exact quotients are
    /// found because the leading term of a product is the product of
    /// leading terms.
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (bi, bj) = divisor.leading_key()?;
        let lead = divisor.coeffs[&(bi, bj)].clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((i, j)) = rem.leading_key() {
            if i < bi || j < bj {
                return None;
            }
            let c = rem.coeffs[&(i, j)].clone() / lead.clone();
            let t = Self::monomial(i - bi, j - bj, c);
            rem = Ring::sub(&rem, &Ring::mul(&t, divisor));
            quot = Ring::add(&quot, &t);
        }
        Some(quot)
    }
}

impl<T: Scalar> fmt::Debug for BivariatePolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: Scalar> fmt::Display for BivariatePolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.display_in("w", "E"), f)
    }
}

impl<T: Scalar> BivariatePolynomial<T> {
    pub fn display_in<'a>(&'a self, first: &'a str, second: &'a str) -> Named<'a, Self> {
        Named { poly: self, vars: (first, second) }
    }
}

impl<T: Scalar> fmt::Display for Named<'_, BivariatePolynomial<T>> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(u32, u32, T)> =
            self.poly.coeffs.iter().map(|((i, j), c)| (*i, *j, c.clone())).collect();
        terms.sort_by_key(|t| std::cmp::Reverse((t.0, t.1)));
        write_terms(f, terms.into_iter(), self.vars)
    }
}

/// Renders `c x^i y^j` terms as `2*w^2*E + ...`.
pub(crate) fn write_terms<T: Scalar>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (u32, u32, T)>,
    vars: (&str, &str),
) -> fmt::Result {
    let mut first = true;
    for (i, j, c) in terms {
        if Ring::is_zero(&c) {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let mut factors = Vec::new();
        if !mag.is_one() || (i == 0 && j == 0) {
            factors.push(mag.to_text());
        }
        for (var, e) in [(vars.0, i), (vars.1, j)] {
            match e {
                0 => {}
                1 => factors.push(var.to_string()),
                _ => factors.push(format!("{var}^{e}")),
            }
        }
        write!(f, "{}", factors.join("*"))?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Poly, BiPoly, Rational};

    fn p(c: &[i64]) -> Poly {
        Polynomial::new(c.iter().map(|&v| rat(v)).collect())
    }

    #[test]
    fn trims_and_divides() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        let a = Ring::mul(&p(&[-1, 1]), &p(&[2, 0, 3]));
        let (q, r) = a.div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[2, 0, 3]));
        assert!(r.is_zero());
        let (_, r) = p(&[1, 0, 1]).div_rem(&p(&[-1, 1]));
        assert_eq!(r, p(&[2]));
    }

    #[test]
    fn root_multiplicity_counts_repeated_factor() {
        let sq = p(&[1, -2, 1]);
        assert_eq!(sq.root_multiplicity(&rat(1)), Some(2));
        assert_eq!(sq.root_multiplicity(&rat(2)), Some(0));
        assert_eq!(Poly::zero().root_multiplicity(&rat(0)), None);
    }

    #[test]
    fn bivariate_exact_division() {
        // (w + E)(w - 2E^2 + 1)
        let a = BiPoly::from_terms([((1, 0), rat(1)), ((0, 1), rat(1))]);
        let b = BiPoly::from_terms([((1, 0), rat(1)), ((0, 2), rat(-2)), ((0, 0), rat(1))]);
        let prod = Ring::mul(&a, &b);
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&b), Some(a));
        let c = BiPoly::monomial(1, 1, rat(1));
        assert_eq!(Ring::add(&prod, &BiPoly::one()).exact_div(&c), None);
    }

    #[test]
    fn display_is_readable() {
        let r = BiPoly::from_terms([
            ((2, 0), rat(1)),
            ((1, 1), rat(6)),
            ((1, 0), rat(8)),
            ((0, 3), rat(-1)),
        ]);
        assert_eq!(r.to_string(), "w^2 + 6*w*E + 8*w - E^3");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        assert_eq!(Polynomial::<Rational>::zero().to_string(), "0");
    }

    #[test]
    fn substitution() {
        // w^2 - E evaluated at w = t, E = t^2 vanishes
        let r = BiPoly::from_terms([((2, 0), rat(1)), ((0, 1), rat(-1))]);
        assert!(r.substitute(&Poly::x(), &Poly::x().pow(2)).is_zero());
    }
}
