//! (o)-sequences: decreasing positive lattice elements with infimum zero.

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, Space};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum OSequenceRule<S> {
    /// `b_n = c / n`
    Harmonic { c: LatticeVector<S> },
    /// `b_n = c · r^n` with `0 < r < 1`
    Geometric { c: LatticeVector<S>, r: S },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OSequence<S> {
    rule: OSequenceRule<S>,
    description: String,
}

impl<S: Scalar> OSequence<S> {
    /// `c` must be positive in the lattice sense (every component >= 0).
    pub fn harmonic(c: LatticeVector<S>) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidArgument("o-sequence constant must be >= 0".into()));
        }
        let description = format!("c/n, c = ({})", c.to_canonical().join(", "));
        Ok(Self { rule: OSequenceRule::Harmonic { c }, description })
    }

    pub fn geometric(c: LatticeVector<S>, r: S) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidArgument("o-sequence constant must be >= 0".into()));
        }
        if !(r > S::zero() && r < S::one()) {
            return Err(Error::InvalidArgument("geometric ratio must lie in (0,1)".into()));
        }
        let description =
            format!("c·r^n, c = ({}), r = {}", c.to_canonical().join(", "), r.to_canonical());
        Ok(Self { rule: OSequenceRule::Geometric { c, r }, description })
    }

    pub fn rule(&self) -> &OSequenceRule<S> {
        &self.rule
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn dim(&self) -> usize {
        match &self.rule {
            OSequenceRule::Harmonic { c } | OSequenceRule::Geometric { c, .. } => c.dim(),
        }
    }

    pub fn eval(&self, n: u64) -> Result<LatticeVector<S>> {
        if n < 1 {
            return Err(Error::InvalidArgument("o-sequence index must be >= 1".into()));
        }
        Ok(match &self.rule {
            OSequenceRule::Harmonic { c } => c.scale(&(S::one() / S::from_u64(n))),
            OSequenceRule::Geometric { c, r } => {
                c.scale(&r.powi(u32::try_from(n).expect("geometric index fits in u32")))
            }
        })
    }

    /// The same rule with its constant multiplied by `k`; used for negative
    /// controls that deliberately undercut a certified bound.
    pub fn scaled(&self, k: &S) -> Self {
        let mut out = match &self.rule {
            OSequenceRule::Harmonic { c } => Self::harmonic(c.scale(k)),
            OSequenceRule::Geometric { c, r } => Self::geometric(c.scale(k), r.clone()),
        }
        .expect("scaling by a positive factor keeps the rule valid");
        out.description = format!("{} scaled by {}", self.description, k.to_canonical());
        out
    }

    /// Smallest `n` with `b_n <= tol` componentwise.
    pub fn index_reaching(&self, tol: &LatticeVector<S>) -> Result<u64> {
        Error::check_dim(self.dim(), tol.dim())?;
        if tol.entries().iter().any(|t| *t <= S::zero()) {
            return Err(Error::InvalidArgument("tolerance must be strictly positive".into()));
        }
        match &self.rule {
            OSequenceRule::Harmonic { c } => {
                let mut n = 1u64;
                for (ci, ti) in c.entries().iter().zip(tol.entries()) {
                    let need = (ci.clone() / ti.clone())
                        .ceil_u64()
                        .ok_or_else(|| Error::InvalidArgument("tolerance too small".into()))?;
                    n = n.max(need);
                }
                Ok(n)
            }
            OSequenceRule::Geometric { .. } => self.search(|b| b.le(tol).unwrap_or(false)),
        }
    }

    /// Smallest `n` with `‖b_n‖ <= eps` in the given space.
    pub fn index_for_norm(&self, space: &Space, eps: &S) -> Result<u64> {
        if *eps <= S::zero() {
            return Err(Error::InvalidArgument("eps must be positive".into()));
        }
        match &self.rule {
            OSequenceRule::Harmonic { c } => {
                let norm_c = space.norm(c)?;
                Ok((norm_c / eps.clone()).ceil_u64().unwrap_or(u64::MAX).max(1))
            }
            OSequenceRule::Geometric { .. } => {
                self.search(|b| space.norm(b).map(|v| v <= *eps).unwrap_or(false))
            }
        }
    }

    fn search(&self, ok: impl Fn(&LatticeVector<S>) -> bool) -> Result<u64> {
        // Geometric rules decay exponentially; 4096 steps covers any r <= 0.99
        // down to tolerances far below f64 resolution.
        for n in 1..=4096u64 {
            if ok(&self.eval(n)?) {
                return Ok(n);
            }
        }
        Err(Error::NoConvergence { depth: 4096 })
    }

    /// Checks `b_1 >= b_2 >= ... >= b_upto >= 0` componentwise.
    pub fn check_decreasing(&self, upto: u64) -> Result<bool> {
        let mut prev = self.eval(1)?;
        if !prev.is_positive() {
            return Ok(false);
        }
        for n in 2..=upto {
            let cur = self.eval(n)?;
            if !cur.le(&prev)? || !cur.is_positive() {
                return Ok(false);
            }
            prev = cur;
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::NormKind;
    use crate::scalar::Rational;

    type Q = Rational;

    #[test]
    fn harmonic_eval() {
        let s = OSequence::harmonic(LatticeVector::<Q>::from_i64s(&[1, 1])).unwrap();
        assert_eq!(
            s.eval(4).unwrap(),
            LatticeVector::new(vec![Q::from_ratio(1, 4), Q::from_ratio(1, 4)]).unwrap()
        );
        assert!(s.eval(0).is_err());
    }

    #[test]
    fn geometric_is_decreasing() {
        let s = OSequence::geometric(LatticeVector::<Q>::from_i64s(&[3, 1]), Q::from_ratio(1, 2))
            .unwrap();
        let b1 = s.eval(1).unwrap();
        let b2 = s.eval(2).unwrap();
        let b10 = s.eval(10).unwrap();
        assert!(b2.le(&b1).unwrap() && b10.le(&b2).unwrap());
        assert!(s.check_decreasing(64).unwrap());
        assert!(OSequence::geometric(LatticeVector::<Q>::from_i64s(&[1]), Q::from_i64(1)).is_err());
        assert!(OSequence::harmonic(LatticeVector::<Q>::from_i64s(&[1, -1])).is_err());
    }

    #[test]
    fn reaching_tolerance() {
        let c = LatticeVector::new(vec![Q::from_ratio(3, 2), Q::from_i64(1)]).unwrap();
        let s = OSequence::harmonic(c).unwrap();
        let tol = LatticeVector::splat(2, Q::from_ratio(1, 1_000_000));
        // ⌈10^6 · max(c)⌉
        assert_eq!(s.index_reaching(&tol).unwrap(), 1_500_000);
        let g = OSequence::geometric(LatticeVector::<Q>::from_i64s(&[1]), Q::from_ratio(1, 2))
            .unwrap();
        // 2^-10 <= 1/1000 < 2^-9
        assert_eq!(g.index_reaching(&LatticeVector::splat(1, Q::from_ratio(1, 1000))).unwrap(), 10);
    }

    #[test]
    fn norms_tend_to_zero() {
        let space = Space::new(3, NormKind::L1).unwrap();
        let s = OSequence::harmonic(LatticeVector::<Q>::from_i64s(&[1, 2, 3])).unwrap();
        for k in 1..=6 {
            let eps = Q::from_ratio(1, 10i64.pow(k));
            let n = s.index_for_norm(&space, &eps).unwrap();
            assert!(space.norm(&s.eval(n).unwrap()).unwrap() <= eps);
            if n > 1 {
                assert!(space.norm(&s.eval(n - 1).unwrap()).unwrap() > eps);
            }
        }
    }
}
