use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::Scalar;

/// Quasi-periodic sequence determined by one period window
/// `psi_0..psi_{n-1}` and a multiplicator `mu`, extended by
/// `psi_{i-n} = mu * psi_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochSequence<T> {
    window: Vec<T>,
    multiplicator: T,
}

impl<T: Scalar> BlochSequence<T> {
    pub fn new(window: Vec<T>, multiplicator: T) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::ZeroPeriod);
        }
        if Ring::is_zero(&multiplicator) {
            return Err(Error::Degenerate("Bloch multiplicator must be nonzero".into()));
        }
        Ok(Self { window, multiplicator })
    }

    pub fn period(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[T] {
        &self.window
    }

    pub fn multiplicator(&self) -> &T {
        &self.multiplicator
    }

    /// `psi_i` for any integer `i`.
    pub fn value(&self, i: i64) -> T {
        let n = self.window.len() as i64;
        let r = i.rem_euclid(n);
        let t = (i - r) / n;
        // psi_{r + t n} = mu^{-t} psi_r
        self.window[r as usize].clone() * self.multiplicator.pow_int(-t)
    }

    pub fn is_zero(&self) -> bool {
        self.window.iter().all(Ring::is_zero)
    }

    /// Linear combination `a * self + b * other`; multiplicators must agree.
    pub fn combine(&self, a: &T, other: &Self, b: &T) -> Result<Self> {
        if self.period() != other.period() {
            return Err(Error::PeriodMismatch { left: self.period(), right: other.period() });
        }
        if self.multiplicator != other.multiplicator {
            return Err(Error::Degenerate("multiplicators differ".into()));
        }
        let window = self
            .window
            .iter()
            .zip(&other.window)
            .map(|(x, y)| a.clone() * x.clone() + b.clone() * y.clone())
            .collect();
        Self::new(window, self.multiplicator.clone())
    }
}

#[cfg(test)]
mod tests {
    use crate::{rat, Operator, Bloch};

    #[test]
    fn extension_rule() {
        let psi = Bloch::new(vec![rat(1), rat(2), rat(3)], rat(2)).unwrap();
        assert_eq!(psi.value(-3), rat(2));
        assert_eq!(psi.value(-1), rat(6));
        assert_eq!(psi.value(4), crate::ratio(1, 1));
        assert_eq!(psi.value(-6), rat(4));
        assert!(Bloch::new(vec![rat(1)], rat(0)).is_err());
    }

    #[test]
    fn apply_shift_keeps_multiplicator() {
        let psi = Bloch::new(vec![rat(1), rat(2), rat(3)], rat(-1)).unwrap();
        let out = Operator::shift(3, -1).apply(&psi).unwrap();
        assert_eq!(out.multiplicator(), &rat(-1));
        for i in -5..5 {
            assert_eq!(out.value(i), psi.value(i - 1));
        }
    }

    #[test]
    fn apply_is_linear() {
        let l = Operator::triangular(3, &[vec![rat(2), rat(-1), rat(5)]]).unwrap();
        let a = Bloch::new(vec![rat(1), rat(0), rat(4)], rat(3)).unwrap();
        let b = Bloch::new(vec![rat(-2), rat(7), rat(1)], rat(3)).unwrap();
        let lhs = l.apply(&a.combine(&rat(2), &b, &rat(-3)).unwrap()).unwrap();
        let rhs = l.apply(&a).unwrap().combine(&rat(2), &l.apply(&b).unwrap(), &rat(-3)).unwrap();
        assert_eq!(lhs, rhs);
    }
}
