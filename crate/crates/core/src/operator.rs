//! Periodic sequences and difference operators `sum_p c^{(p)}_i T^p`
//! acting by `(c T^p psi)_i = c_i psi_{i+p}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::bloch::BlochSequence;
use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::Scalar;

/// `n`-periodic sequence `c_i = values[i mod n]`.
#[derive(Clone, PartialEq)]
pub struct PeriodicSequence<T> {
    values: Vec<T>,
}

impl<T: Scalar> PeriodicSequence<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ZeroPeriod);
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, c: T) -> Self {
        assert!(n > 0, "period must be positive");
        Self { values: vec![c; n] }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> T) -> Self {
        assert!(n > 0, "period must be positive");
        Self { values: (0..n).map(f).collect() }
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, i: i64) -> &T {
        &self.values[i.rem_euclid(self.values.len() as i64) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Ring::is_zero)
    }

    /// `i -> c_{i+d}`.
    pub fn shifted(&self, d: i64) -> Self {
        Self::from_fn(self.period(), |i| self.value(i as i64 + d).clone())
    }

    pub fn map<S: Scalar>(&self, f: impl FnMut(&T) -> S) -> PeriodicSequence<S> {
        PeriodicSequence { values: self.values.iter().map(f).collect() }
    }

    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(&T, &T) -> T) -> Self {
        debug_assert_eq!(self.period(), other.period());
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn product(&self) -> T {
        self.values.iter().cloned().fold(T::one(), |a, b| a * b)
    }

    pub fn sum(&self) -> T {
        self.values.iter().cloned().fold(T::zero(), |a, b| a + b)
    }
}

impl<T: Scalar> fmt::Debug for PeriodicSequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(Scalar::to_text).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Shape data of a monic strictly triangular operator
/// `T^{-m} + sum_{j=1}^{m-1} a^j T^{-j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangularShape {
    pub order: usize,
    /// The coefficient at `T^{-1}` never vanishes.
    pub leading_ok: bool,
}

/// Difference operator with `n`-periodic coefficients, stored sparsely by
/// shift power. Identically zero coefficients are pruned, so structural
/// equality is operator equality.
#[derive(Clone, PartialEq)]
pub struct DifferenceOperator<T> {
    period: usize,
    terms: BTreeMap<i64, PeriodicSequence<T>>,
}

impl<T: Scalar> DifferenceOperator<T> {
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "period must be positive");
        Self { period: n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(n, T::one())
    }

    pub fn constant(n: usize, c: T) -> Self {
        Self::monomial(0, PeriodicSequence::constant(n, c))
    }

    /// `T^p` with unit coefficient.
    pub fn shift(n: usize, p: i64) -> Self {
        Self::monomial(p, PeriodicSequence::constant(n, T::one()))
    }

    /// `c_i T^p`.
    pub fn monomial(p: i64, c: PeriodicSequence<T>) -> Self {
        let mut op = Self::zero(c.period());
        op.insert(p, c);
        op
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (i64, PeriodicSequence<T>)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroPeriod);
        }
        let mut op = Self::zero(n);
        for (p, c) in terms {
            if c.period() != n {
                return Err(Error::PeriodMismatch { left: n, right: c.period() });
            }
            op.accumulate(p, &c);
        }
        Ok(op)
    }

    /// Builds `T^{-m} + sum_j a^j_i T^{-j}` with `m = rows.len() + 1`,
    /// `rows[j-1][i] = a^j_i`.
    pub fn triangular(n: usize, rows: &[Vec<T>]) -> Result<Self> {
        let m = rows.len() as i64 + 1;
        let mut terms = vec![(-m, PeriodicSequence::constant(n, T::one()))];
        for (j, row) in rows.iter().enumerate() {
            terms.push((-(j as i64) - 1, PeriodicSequence::new(row.clone())?));
        }
        Self::from_terms(n, terms)
    }

    fn insert(&mut self, p: i64, c: PeriodicSequence<T>) {
        if c.is_zero() {
            self.terms.remove(&p);
        } else {
            self.terms.insert(p, c);
        }
    }

    fn accumulate(&mut self, p: i64, c: &PeriodicSequence<T>) {
        let next = match self.terms.get(&p) {
            Some(old) => old.zip_with(c, |a, b| a.clone() + b.clone()),
            None => c.clone(),
        };
        self.insert(p, next);
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &PeriodicSequence<T>)> {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    pub fn term(&self, p: i64) -> Option<&PeriodicSequence<T>> {
        self.terms.get(&p)
    }

    /// `c^{(p)}_i`, zero when the power is absent.
    pub fn coefficient(&self, p: i64, i: i64) -> T {
        self.terms.get(&p).map_or_else(T::zero, |c| c.value(i).clone())
    }

    pub fn min_power(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn check_period(&self, other: &Self) -> Result<()> {
        if self.period != other.period {
            return Err(Error::PeriodMismatch { left: self.period, right: other.period });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_period(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.accumulate(*p, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(self.period);
        for (p, c) in &self.terms {
            out.insert(*p, c.map(|x| x.clone() * s.clone()));
        }
        out
    }

    /// Adds `c * 1`.
    pub fn add_constant(&self, c: &T) -> Self {
        self.add(&Self::constant(self.period, c.clone())).expect("same period")
    }

    /// Operator product `self ∘ other`: the term at `p + q` receives
    /// `c^{(p)}_i d^{(q)}_{i+p}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_period(other)?;
        let n = self.period;
        let mut out = Self::zero(n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let c = PeriodicSequence::from_fn(n, |i| a.values[i].clone() * b.value(i as i64 + p).clone());
                out.accumulate(p + q, &c);
            }
        }
        Ok(out)
    }

    /// `self^e` under composition.
    pub fn power(&self, e: usize) -> Self {
        (0..e).fold(Self::identity(self.period), |acc, _| acc.compose(self).expect("same period"))
    }

    /// Formal adjoint: `(c_i T^p)^* = T^{-p} c_i = c_{i-p} T^{-p}`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.period);
        for (p, c) in &self.terms {
            out.insert(-p, c.shifted(-p));
        }
        out
    }

    /// Relabels the period index: `c_i -> c_{i+d}`; equals `T^d L T^{-d}`.
    pub fn shift_index(&self, d: i64) -> Self {
        let mut out = Self::zero(self.period);
        for (p, c) in &self.terms {
            out.insert(*p, c.shifted(d));
        }
        out
    }

    /// Gauge by `epsilon_i = (-1)^i`: the term at power `p` gains `(-1)^p`.
    pub fn epsilon_conjugate(&self) -> Self {
        let mut out = Self::zero(self.period);
        for (p, c) in &self.terms {
            let s = T::sign_power(*p);
            out.insert(*p, c.map(|x| x.clone() * s.clone()));
        }
        out
    }

    /// Diagonal conjugation `C L C^{-1}` with `(C psi)_i = c^{-i} psi_i`:
    /// the term at power `p` is multiplied by `c^p`. A ring homomorphism.
    pub fn conjugate_scale(&self, c: &T) -> Result<Self> {
        if Ring::is_zero(c) {
            return Err(Error::ZeroScale);
        }
        let mut out = Self::zero(self.period);
        for (p, seq) in &self.terms {
            let f = c.pow_int(*p);
            out.insert(*p, seq.map(|x| x.clone() * f.clone()));
        }
        Ok(out)
    }

    /// Scaling `tau_c(L) = c^m C L C^{-1}` for `L` of order `m`:
    /// `a^j -> c^{m-j} a^j`, leading term stays monic.
    pub fn tau_scale(&self, c: &T) -> Result<Self> {
        let shape = self.triangular_shape()?;
        if Ring::is_zero(c) {
            return Err(Error::ZeroScale);
        }
        Ok(self.conjugate_scale(c)?.scale(&c.pow_int(shape.order as i64)))
    }

    /// Checks the monic strictly triangular form and returns its order.
    pub fn triangular_shape(&self) -> Result<TriangularShape> {
        let (Some(lo), Some(hi)) = (self.min_power(), self.max_power()) else {
            return Err(Error::NotTriangular("zero operator".into()));
        };
        if hi >= 0 {
            return Err(Error::NotTriangular(format!("term at power {hi} >= 0")));
        }
        let lead = &self.terms[&lo];
        if lead.values().iter().any(|v| !v.is_one()) {
            return Err(Error::NotTriangular(format!("coefficient at T^{lo} is not identically 1")));
        }
        let order = (-lo) as usize;
        let leading_ok = match self.terms.get(&-1) {
            Some(a1) => a1.values().iter().all(|v| !Ring::is_zero(v)),
            None => false,
        };
        Ok(TriangularShape { order, leading_ok })
    }

    /// The order of a monic strictly triangular operator.
    pub fn order(&self) -> Result<usize> {
        Ok(self.triangular_shape()?.order)
    }

    /// `L^sigma = T^{-m}(L^* + 1) - 1`; preserves the triangular form.
    pub fn sigma(&self) -> Result<Self> {
        let m = self.order()? as i64;
        let n = self.period;
        let inner = self.adjoint().add_constant(&T::one());
        let out = Self::shift(n, -m).compose(&inner)?.add_constant(&-T::one());
        debug_assert_eq!(out.order().ok(), Some(m as usize));
        Ok(out)
    }

    /// `L = T^{-k-1} + sum_j a^j T^{-j}` from the coefficients of the
    /// alternating recursion
    /// `V_i = a^1_i V_{i-1} - a^2_i V_{i-2} + ... + (-1)^k V_{i-k-1}`;
    /// `V` solves it iff `psi_i = (-1)^i V_i` solves `(L + 1) psi = 0`.
    pub fn from_recursion(n: usize, k: usize, rows: &[Vec<T>]) -> Result<Self> {
        if rows.len() != k {
            return Err(Error::OrderMismatch { expected: k, found: rows.len() });
        }
        Self::triangular(n, rows)
    }

    /// Inverse of [`DifferenceOperator::from_recursion`]: `rows[j-1][i] = a^j_i`.
    pub fn recursion_rows(&self) -> Result<Vec<Vec<T>>> {
        let m = self.order()? as i64;
        Ok((1..m)
            .map(|j| (0..self.period as i64).map(|i| self.coefficient(-j, i)).collect())
            .collect())
    }

    /// Applies the operator to a Bloch sequence; the multiplicator is kept.
    pub fn apply(&self, psi: &BlochSequence<T>) -> Result<BlochSequence<T>> {
        if psi.period() != self.period {
            return Err(Error::PeriodMismatch { left: self.period, right: psi.period() });
        }
        let window = (0..self.period as i64)
            .map(|i| {
                self.terms
                    .iter()
                    .fold(T::zero(), |acc, (p, c)| acc + c.value(i).clone() * psi.value(i + p))
            })
            .collect();
        BlochSequence::new(window, psi.multiplicator().clone())
    }

    /// Applies the operator to a finite window `values[t] = psi_{start+t}`,
    /// producing `(L psi)_i` for every `i` whose stencil fits the window.
    pub fn apply_window(&self, start: i64, values: &[T]) -> (i64, Vec<T>) {
        let lo = self.min_power().unwrap_or(0).min(0);
        let hi = self.max_power().unwrap_or(0).max(0);
        let first = start - lo;
        let last = start + values.len() as i64 - 1 - hi;
        let out = (first..=last)
            .map(|i| {
                self.terms.iter().fold(T::zero(), |acc, (p, c)| {
                    acc + c.value(i).clone() * values[(i + p - start) as usize].clone()
                })
            })
            .collect();
        (first, out)
    }

    pub fn map<S: Scalar>(&self, mut f: impl FnMut(&T) -> S) -> DifferenceOperator<S> {
        let mut out = DifferenceOperator::zero(self.period);
        for (p, c) in &self.terms {
            out.insert(*p, c.map(&mut f));
        }
        out
    }

    /// Largest absolute coefficient difference, for approximate comparisons.
    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        let Ok(d) = self.sub(other) else { return f64::INFINITY };
        d.terms
            .values()
            .flat_map(|c| c.values().iter())
            .map(|x| crate::scalar::to_f64(&x.abs()))
            .fold(0.0, f64::max)
    }
}

/// `[A, B] = AB - BA`.
pub fn commutator<T: Scalar>(a: &DifferenceOperator<T>, b: &DifferenceOperator<T>) -> Result<DifferenceOperator<T>> {
    a.compose(b)?.sub(&b.compose(a)?)
}

impl<T: Scalar> fmt::Debug for DifferenceOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: Scalar> fmt::Display for DifferenceOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| {
                let shift = match p {
                    0 => String::new(),
                    _ => format!("T^{p}"),
                };
                let first = &c.values()[0];
                let coef = if c.values().iter().all(|v| v == first) {
                    if first.is_one() && *p != 0 {
                        String::new()
                    } else {
                        first.to_text()
                    }
                } else {
                    format!("{c:?}")
                };
                match (coef.is_empty(), shift.is_empty()) {
                    (true, _) => shift,
                    (false, true) => coef,
                    (false, false) => format!("{coef}*{shift}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
