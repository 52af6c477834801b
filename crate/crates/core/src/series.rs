//! Truncated formal Bloch solutions at the two marked points of the
//! spectral curve: `z -> 0` near infinity (`E ~ z^{-(k+1)}`) and `E -> 0`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::operator::{DifferenceOperator, PeriodicSequence};
use crate::poly::{BivariatePolynomial, Polynomial};
use crate::ring::Ring;
use crate::scalar::{ExactField, Scalar};

/// `E(z) = z^{-(k+1)} (1 + sum_s e_s z^s)` together with the periodic
/// corrections of `psi_i(z) = z^i (1 + sum_s xi_s(i) z^s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InfinityExpansion<T: Scalar> {
    pub order: usize,
    pub period: usize,
    /// `step * (k+1) = 1 (mod n)`.
    pub step: usize,
    /// `e_1..e_S`.
    pub e: Vec<T>,
    /// `xi_1..xi_S`, each with `xi_s(0) = 0`.
    pub xi: Vec<PeriodicSequence<T>>,
}

impl<T: Scalar> InfinityExpansion<T> {
    pub fn truncation(&self) -> usize {
        self.e.len()
    }

    /// `1 + sum_s e_s z^s`, i.e. `z^{k+1} E(z)`.
    pub fn normalized_energy(&self) -> Polynomial<T> {
        let mut c = vec![T::one()];
        c.extend(self.e.iter().cloned());
        Polynomial::new(c)
    }
}

/// Inverse of `k+1` modulo `n`, in `1..n` (or 0 when `n = 1`).
pub fn step_integer(n: usize, order: usize) -> Result<usize> {
    if n.gcd(&order) != 1 {
        return Err(Error::NotCoprime { n, order });
    }
    if n == 1 {
        return Ok(0);
    }
    let g = (order as i64).extended_gcd(&(n as i64));
    Ok(g.x.rem_euclid(n as i64) as usize)
}

/// Solves the order-by-order recursion
/// `e_s + xi_s(i) - xi_s(i-k-1) = F_s(i)` where
/// `F_s(i) = sum_j a^j_i xi_{s-(k+1-j)}(i-j) - sum_{t<s} e_t xi_{s-t}(i)`.
/// Periodicity fixes `e_s` as the mean of `F_s`; the step integer reduces
/// the difference equation of order `k+1` to one of order 1.
pub fn expand_infinity<T: Scalar>(l: &DifferenceOperator<T>, truncation: usize) -> Result<InfinityExpansion<T>> {
    let m = l.order()?;
    let n = l.period();
    let step = step_integer(n, m)?;
    if truncation == 0 {
        return Err(Error::TruncationTooShort);
    }
    let ni = n as i64;
    let mi = m as i64;
    let mut e: Vec<T> = Vec::with_capacity(truncation);
    let mut xi: Vec<PeriodicSequence<T>> = Vec::with_capacity(truncation);
    // xi_t(i) with xi_0 = 1 and xi_{<0} = 0
    let xi_at = |xi: &[PeriodicSequence<T>], t: i64, i: i64| -> T {
        match t {
            t if t < 0 => T::zero(),
            0 => T::one(),
            t => xi[t as usize - 1].value(i).clone(),
        }
    };
    let n_inv = T::one() / T::from_int(ni);
    for s in 1..=truncation as i64 {
        let forcing: Vec<T> = (0..ni)
            .map(|i| {
                let mut f = T::zero();
                for j in 1..mi {
                    let a = l.coefficient(-j, i);
                    if !Ring::is_zero(&a) {
                        f = f + a * xi_at(&xi, s - (mi - j), i - j);
                    }
                }
                for t in 1..s {
                    f = f - e[t as usize - 1].clone() * xi_at(&xi, s - t, i);
                }
                f
            })
            .collect();
        let es = forcing.iter().cloned().fold(T::zero(), |a, b| a + b) * n_inv.clone();
        let g = PeriodicSequence::new(forcing.into_iter().map(|f| f - es.clone()).collect())?;
        // xi(i) - xi(i-1) = sum_{j < step} g(i - j (k+1))
        let mut values = vec![T::zero(); n];
        for i in 1..ni {
            let h = (0..step as i64).fold(T::zero(), |acc, j| acc + g.value(i - j * mi).clone());
            values[i as usize] = values[i as usize - 1].clone() + h;
        }
        e.push(es);
        xi.push(PeriodicSequence::new(values)?);
    }
    Ok(InfinityExpansion { order: m, period: n, step, e, xi })
}

/// `psi_i = pi_i E^{-i} (1 + sum_s xi_s(i) E^s)` near `E = 0`, with
/// `pi_i / pi_{i-1} = a^1_i` and `xi_s(0) = 0`.
///
/// The corrections are not periodic: `psi` is a Bloch solution, so
/// `xi_s(i - n)` differs from `xi_s(i)` by the expansion of the
/// multiplier. They are stored on the window `-n..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroExpansion<T: Scalar> {
    pub order: usize,
    pub period: usize,
    /// `a^1`, the ratios of consecutive prefactors.
    pub ratios: PeriodicSequence<T>,
    /// `xi[s-1][i + n] = xi_s(i)` for `i` in `-n..=n`.
    xi: Vec<Vec<T>>,
}

impl<T: Scalar> ZeroExpansion<T> {
    pub fn truncation(&self) -> usize {
        self.xi.len()
    }

    /// `xi_s(i)` for `1 <= s <= S` and `|i| <= n`.
    pub fn xi(&self, s: usize, i: i64) -> &T {
        &self.xi[s - 1][(i + self.period as i64) as usize]
    }

    /// `pi_i` normalized by `pi_0 = 1`.
    pub fn prefactor(&self, i: i64) -> T {
        let mut p = T::one();
        if i >= 0 {
            for t in 1..=i {
                p = p * self.ratios.value(t).clone();
            }
        } else {
            for t in (i + 1..=0).rev() {
                p = p / self.ratios.value(t).clone();
            }
        }
        p
    }

    /// `1 + sum_s xi_s(i) E^s`.
    pub fn correction(&self, i: i64) -> Polynomial<T> {
        let mut c = vec![T::one()];
        c.extend((1..=self.truncation()).map(|s| self.xi(s, i).clone()));
        Polynomial::new(c)
    }
}

pub fn expand_zero<T: Scalar>(l: &DifferenceOperator<T>, truncation: usize) -> Result<ZeroExpansion<T>> {
    let m = l.order()?;
    if m < 2 {
        return Err(Error::UnsupportedOrderOne);
    }
    if truncation == 0 {
        return Err(Error::TruncationTooShort);
    }
    let n = l.period();
    let ni = n as i64;
    let ratios = l.term(-1).cloned().ok_or(Error::VanishingLeading(0))?;
    if let Some(i) = ratios.values().iter().position(Ring::is_zero) {
        return Err(Error::VanishingLeading(i));
    }
    let k = (m - 1) as i64;
    let s_max = truncation as i64;
    // Order s lives on [lo(s), n]; lower orders reach k further down.
    let lo = |s: i64| -ni - (s_max - s) * k;
    // c_{ij} = a^j_i pi_{i-j} / pi_i, j = 2..=m, with a^m = 1
    let coupling = |i: i64, j: i64| -> T {
        let mut c = if j == m as i64 { T::one() } else { l.coefficient(-j, i) };
        for t in 0..j {
            c = c / ratios.value(i - t).clone();
        }
        c
    };
    let mut levels: Vec<(i64, Vec<T>)> = Vec::with_capacity(truncation);
    let at = |levels: &[(i64, Vec<T>)], t: i64, i: i64| -> T {
        if t == 0 {
            return T::one();
        }
        let (start, v) = &levels[t as usize - 1];
        v[(i - start) as usize].clone()
    };
    for s in 1..=s_max {
        let start = lo(s);
        let len = (ni - start + 1) as usize;
        let mut v = vec![T::zero(); len];
        let rhs = |levels: &[(i64, Vec<T>)], i: i64| -> T {
            (2..=m as i64)
                .filter(|j| s - j + 1 >= 0)
                .fold(T::zero(), |acc, j| acc + coupling(i, j) * at(levels, s - j + 1, i - j))
        };
        let zero_idx = (-start) as usize;
        // xi_s(i - 1) = xi_s(i) - rhs(i), going down from xi_s(0) = 0
        for i in (start + 1..=0).rev() {
            let idx = (i - start) as usize;
            v[idx - 1] = v[idx].clone() - rhs(&levels, i);
        }
        for i in 1..=ni {
            let idx = (i - start) as usize;
            v[idx] = v[idx - 1].clone() + rhs(&levels, i);
        }
        debug_assert!(Ring::is_zero(&v[zero_idx]));
        levels.push((start, v));
    }
    let xi = levels
        .into_iter()
        .map(|(start, v)| v[(-ni - start) as usize..].to_vec())
        .collect();
    Ok(ZeroExpansion { order: m, period: n, ratios, xi })
}

/// `w(E) = r^{-1} E^n (1 + sum_s w_s E^s)` for the Bloch branch through
/// the origin, `r = prod_j a^1_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierExpansion<T> {
    pub period: usize,
    /// `r^{-1}`.
    pub leading: T,
    /// `w_1..w_S`.
    pub w: Vec<T>,
}

impl<T: Scalar> MultiplierExpansion<T> {
    pub fn truncation(&self) -> usize {
        self.w.len()
    }

    /// The truncated multiplier as a polynomial in `E`.
    pub fn as_polynomial(&self) -> Polynomial<T> {
        let mut c = vec![self.leading.clone()];
        c.extend(self.w.iter().map(|x| x.clone() * self.leading.clone()));
        Polynomial::new(c).shift_up(self.period)
    }
}

/// The multiplier is the quasi-period ratio `psi_{-n} / psi_0`.
pub fn bloch_multiplier<T: Scalar>(l: &DifferenceOperator<T>, truncation: usize) -> Result<MultiplierExpansion<T>> {
    let zero = expand_zero(l, truncation)?;
    Ok(multiplier_from_zero(&zero))
}

pub fn multiplier_from_zero<T: Scalar>(zero: &ZeroExpansion<T>) -> MultiplierExpansion<T> {
    let n = zero.period as i64;
    MultiplierExpansion {
        period: zero.period,
        leading: zero.prefactor(-n),
        w: (1..=zero.truncation()).map(|s| zero.xi(s, -n).clone()).collect(),
    }
}

/// Residual valuations of the two series substitutions into `R`.
///
/// Residuals are computed modulo `S` orders past their thresholds; a
/// valuation of `None` means the residual vanishes through that precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCheck {
    pub truncation: usize,
    /// z-valuation of `R(z^{-n}, E(z))`.
    pub infinity_valuation: Option<i64>,
    /// `-n(k+1) + S + 1`.
    pub infinity_threshold: i64,
    /// E-valuation of `R(w(E), E)`.
    pub zero_valuation: Option<i64>,
    /// `n + S + 1`.
    pub zero_threshold: i64,
}

impl SeriesCheck {
    pub fn infinity_ok(&self) -> bool {
        self.infinity_valuation.is_none_or(|v| v >= self.infinity_threshold)
    }

    pub fn zero_ok(&self) -> bool {
        self.zero_valuation.is_none_or(|v| v >= self.zero_threshold)
    }

    pub fn passed(&self) -> bool {
        self.infinity_ok() && self.zero_ok()
    }
}

/// Substitutes `w = z^{-n}, E = E(z)` and `w = w(E)` into `R`.
///
/// Near infinity the truncation error of `E(z)` is `O(z^{S+1-(k+1)})` and
/// `dR/dE ~ z^{-(k+1)(n-1)}`, so the residual starts at or beyond
/// `z^{-n(k+1)+S+1}`. Near the origin `dR/dw = r + O(E)`, so the residual
/// starts at or beyond `E^{n+S+1}`.
pub fn verify_curve_series<T: ExactField>(
    r: &BivariatePolynomial<T>,
    inf: &InfinityExpansion<T>,
    mult: &MultiplierExpansion<T>,
) -> Result<SeriesCheck> {
    let (m, n) = (inf.order, inf.period);
    if mult.period != n {
        return Err(Error::PeriodMismatch { left: n, right: mult.period });
    }
    if r.degree_first() != Some(m as u32) || r.degree_second() != Some(n as u32) {
        return Err(Error::OrderMismatch { expected: m, found: r.degree_first().unwrap_or(0) as usize });
    }
    let (s, sz) = (inf.truncation(), mult.truncation());
    if s == 0 || sz == 0 {
        return Err(Error::TruncationTooShort);
    }
    // z^{nm} R(z^{-n}, z^{-m} F(z)) = sum r_ij z^{nm - ni - mj} F^j
    let nm = (n * m) as i64;
    let prec = 2 * s + 2;
    let f = inf.normalized_energy();
    let mut f_pows = vec![Polynomial::constant(T::one())];
    for j in 1..=n {
        let next = f_pows[j - 1].mul_truncated(&f, prec);
        f_pows.push(next);
    }
    let mut acc = Polynomial::zero();
    for (&(i, j), c) in r.terms() {
        let shift = nm - n as i64 * i as i64 - m as i64 * j as i64;
        if shift < 0 {
            return Err(Error::SupportViolation(format!("w^{i} E^{j} above the curve triangle")));
        }
        if (shift as usize) < prec {
            acc = acc.add(&f_pows[j as usize].scale(c).shift_up(shift as usize).truncate(prec));
        }
    }
    let infinity_valuation = acc.valuation().map(|v| v as i64 - nm);

    let prec = n + 2 * sz + 2;
    let w = mult.as_polynomial();
    let mut w_pows = vec![Polynomial::constant(T::one())];
    for i in 1..=m {
        let next = w_pows[i - 1].mul_truncated(&w, prec);
        w_pows.push(next);
    }
    let mut residual = Polynomial::zero();
    for (&(i, j), c) in r.terms() {
        if (j as usize) < prec {
            residual = residual.add(&w_pows[i as usize].scale(c).shift_up(j as usize).truncate(prec));
        }
    }
    let zero_valuation = residual.valuation().map(|v| v as i64);
    Ok(SeriesCheck {
        truncation: s.min(sz),
        infinity_valuation,
        infinity_threshold: -nm + s as i64 + 1,
        zero_valuation,
        zero_threshold: (n + sz + 1) as i64,
    })
}
