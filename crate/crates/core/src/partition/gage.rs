use crate::error::{Error, Result};
use crate::scalar::{smin, Scalar};

/// A piecewise-constant gage on [0,1].
///
/// Piece `j` covers `[x_j, x_{j+1})` where `x_0 = 0` and the last piece is
/// closed at 1. Point overrides replace the value at isolated points only.
#[derive(Debug, Clone, PartialEq)]
pub struct Gage<S> {
    breakpoints: Vec<S>,
    values: Vec<S>,
    overrides: Vec<(S, S)>,
}

impl<S: Scalar> Gage<S> {
    pub fn new(breakpoints: Vec<S>, values: Vec<S>) -> Result<Self> {
        Self::with_overrides(breakpoints, values, Vec::new())
    }

    pub fn with_overrides(breakpoints: Vec<S>, values: Vec<S>, mut overrides: Vec<(S, S)>) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "gage with {} breakpoints needs {} values, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                values.len()
            )));
        }
        let interior = breakpoints.iter().all(|x| *x > S::zero() && *x < S::one());
        let sorted = breakpoints.windows(2).all(|w| w[0] < w[1]);
        if !interior || !sorted {
            return Err(Error::InvalidArgument(
                "gage breakpoints must be strictly increasing inside (0,1)".into(),
            ));
        }
        if values.iter().chain(overrides.iter().map(|(_, v)| v)).any(|v| *v <= S::zero()) {
            return Err(Error::InvalidArgument("gage values must be positive".into()));
        }
        if overrides.iter().any(|(p, _)| *p < S::zero() || *p > S::one()) {
            return Err(Error::InvalidArgument("gage override outside [0,1]".into()));
        }
        overrides.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("ordered scalars"));
        overrides.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                earlier.1 = smin(&earlier.1, &later.1);
                true
            } else {
                false
            }
        });
        Ok(Self { breakpoints, values, overrides })
    }

    pub fn constant(value: S) -> Result<Self> {
        Self::new(Vec::new(), vec![value])
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn overrides(&self) -> &[(S, S)] {
        &self.overrides
    }

    pub fn piece_index(&self, t: &S) -> usize {
        self.breakpoints.partition_point(|x| x <= t)
    }

    pub fn piece_value(&self, t: &S) -> &S {
        &self.values[self.piece_index(t)]
    }

    /// `γ(t)`.
    pub fn eval(&self, t: &S) -> S {
        if let Ok(i) = self
            .overrides
            .binary_search_by(|(p, _)| p.partial_cmp(t).expect("ordered scalars"))
        {
            return self.overrides[i].1.clone();
        }
        self.piece_value(t).clone()
    }

    /// Left end of piece `j`.
    pub fn piece_start(&self, j: usize) -> S {
        if j == 0 {
            S::zero()
        } else {
            self.breakpoints[j - 1].clone()
        }
    }

    pub fn piece_end(&self, j: usize) -> S {
        self.breakpoints.get(j).cloned().unwrap_or_else(S::one)
    }

    /// The global minimum `δ_min > 0`.
    pub fn min_value(&self) -> S {
        self.values
            .iter()
            .chain(self.overrides.iter().map(|(_, v)| v))
            .skip(1)
            .fold(self.values[0].clone(), |m, v| smin(&m, v))
    }

    pub fn max_value(&self) -> S {
        self.values
            .iter()
            .skip(1)
            .fold(self.values[0].clone(), |m, v| crate::scalar::smax(&m, v))
    }

    /// Pointwise minimum of two gages; still piecewise constant.
    pub fn pointwise_min(&self, other: &Self) -> Self {
        let mut bps: Vec<S> = self.breakpoints.iter().chain(&other.breakpoints).cloned().collect();
        bps.sort_by(|a, b| a.partial_cmp(b).expect("ordered scalars"));
        bps.dedup();
        let starts = std::iter::once(S::zero()).chain(bps.iter().cloned());
        let values = starts
            .map(|s| smin(self.piece_value(&s), other.piece_value(&s)))
            .collect();
        let mut overrides: Vec<(S, S)> = Vec::new();
        for (p, _) in self.overrides.iter().chain(&other.overrides) {
            overrides.push((p.clone(), smin(&self.eval(p), &other.eval(p))));
        }
        Self::with_overrides(bps, values, overrides).expect("min of valid gages is valid")
            .merged()
    }

    /// Shrinks the gage at isolated points.
    pub fn shrink_at(&self, points: &[S], cap: &S) -> Result<Self> {
        let mut overrides = self.overrides.clone();
        for p in points {
            overrides.push((p.clone(), smin(&self.eval(p), cap)));
        }
        Self::with_overrides(self.breakpoints.clone(), self.values.clone(), overrides)
    }

    /// Drops breakpoints between equal adjacent values.
    fn merged(self) -> Self {
        let mut bps = Vec::with_capacity(self.breakpoints.len());
        let mut vals = vec![self.values[0].clone()];
        for (x, v) in self.breakpoints.iter().zip(self.values.iter().skip(1)) {
            if v != vals.last().expect("non-empty") {
                bps.push(x.clone());
                vals.push(v.clone());
            }
        }
        Self { breakpoints: bps, values: vals, overrides: self.overrides }
    }

    /// Number of bisection levels within which Cousin construction terminates:
    /// `⌈log₂(1/δ_min)⌉ + |breakpoints| + 1`.
    pub fn cousin_level_bound(&self) -> u32 {
        let inv = S::one() / self.min_value();
        let mut levels = 0u32;
        let mut p = S::one();
        while p < inv {
            p = p * S::from_i64(2);
            levels += 1;
        }
        levels + self.breakpoints.len() as u32 + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn evaluation_and_pieces() {
        let g = Gage::new(vec![q(1, 2)], vec![q(1, 2), q(1, 100)]).unwrap();
        assert_eq!(g.eval(&q(1, 4)), q(1, 2));
        assert_eq!(g.eval(&q(1, 2)), q(1, 100));
        assert_eq!(g.eval(&q(1, 1)), q(1, 100));
        assert_eq!(g.min_value(), q(1, 100));
        let s = g.shrink_at(&[q(1, 4)], &q(1, 1000)).unwrap();
        assert_eq!(s.eval(&q(1, 4)), q(1, 1000));
        assert_eq!(s.eval(&q(1, 5)), q(1, 2));
        assert_eq!(s.min_value(), q(1, 1000));
    }

    #[test]
    fn rejects_invalid() {
        assert!(Gage::new(vec![q(1, 2)], vec![q(1, 2)]).is_err());
        assert!(Gage::new(vec![], vec![q(0, 1)]).is_err());
        assert!(Gage::new(vec![q(3, 4), q(1, 4)], vec![q(1, 1); 3]).is_err());
        assert!(Gage::new(vec![q(1, 1)], vec![q(1, 1); 2]).is_err());
    }

    #[test]
    fn pointwise_min_of_gages() {
        let a = Gage::new(vec![q(1, 2)], vec![q(1, 2), q(1, 8)]).unwrap();
        let b = Gage::new(vec![q(1, 4)], vec![q(1, 16), q(1, 4)]).unwrap();
        let m = a.pointwise_min(&b);
        for t in [q(0, 1), q(1, 8), q(1, 4), q(3, 8), q(1, 2), q(7, 8), q(1, 1)] {
            assert_eq!(m.eval(&t), smin(&a.eval(&t), &b.eval(&t)));
        }
    }
}
