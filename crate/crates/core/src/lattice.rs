//! Finite-dimensional Banach lattices: ℝ^d with the componentwise order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{smax, smin, Scalar};

/// An element of ℝ^d ordered componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector<S> {
    entries: Vec<S>,
}

impl<S: Scalar> LatticeVector<S> {
    pub fn new(entries: Vec<S>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("lattice vectors need dim >= 1".into()));
        }
        Ok(Self { entries })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self { entries: vec![S::zero(); dim] }
    }

    pub fn splat(dim: usize, v: S) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self { entries: vec![v; dim] }
    }

    /// The `k`-th unit vector (0-based).
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = S::one();
        v
    }

    pub fn from_i64s(vals: &[i64]) -> Self {
        Self { entries: vals.iter().map(|&v| S::from_i64(v)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    pub fn get(&self, i: usize) -> &S {
        &self.entries[i]
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        Error::check_dim(self.dim(), other.dim())?;
        Ok(Self {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self { entries: self.entries.iter().map(f).collect() }
    }

    /// Componentwise maximum `x ∨ y`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, smax)
    }

    /// Componentwise minimum `x ∧ y`.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, smin)
    }

    /// `|x| = x ∨ (−x)`.
    pub fn modulus(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        Error::check_dim(self.dim(), other.dim())?;
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a = a.clone() + b.clone();
        }
        Ok(())
    }

    /// `self += other * k`, the workhorse of Riemann sums.
    pub fn add_scaled(&mut self, other: &Self, k: &S) -> Result<()> {
        Error::check_dim(self.dim(), other.dim())?;
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a = a.clone() + b.clone() * k.clone();
        }
        Ok(())
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|v| v.clone() * k.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    /// Componentwise `self <= other`, exact on the rational backend.
    pub fn le(&self, other: &Self) -> Result<bool> {
        Error::check_dim(self.dim(), other.dim())?;
        Ok(self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b))
    }

    /// Componentwise `self <= other` up to the backend tolerance.
    pub fn le_tol(&self, other: &Self) -> Result<bool> {
        Error::check_dim(self.dim(), other.dim())?;
        Ok(self.entries.iter().zip(&other.entries).all(|(a, b)| a.le_tol(b)))
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|v| *v >= S::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero())
    }

    pub fn max_entry(&self) -> S {
        self.entries.iter().skip(1).fold(self.entries[0].clone(), |m, v| smax(&m, v))
    }

    pub fn sum_entries(&self) -> S {
        self.entries.iter().fold(S::zero(), |acc, v| acc + v.clone())
    }

    pub fn to_canonical(&self) -> Vec<String> {
        self.entries.iter().map(Scalar::to_canonical).collect()
    }

    pub fn parse(items: &[String]) -> Result<Self> {
        Self::new(items.iter().map(|s| S::parse(s)).collect::<Result<_>>()?)
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.entries.iter().map(Scalar::to_f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L1,
    Sup,
    Euclid,
}

/// ℝ^d equipped with one of the three lattice norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space {
    pub dim: usize,
    pub norm_kind: NormKind,
}

impl Space {
    pub fn new(dim: usize, norm_kind: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("space dimension must be positive".into()));
        }
        Ok(Self { dim, norm_kind })
    }

    pub fn norm<S: Scalar>(&self, x: &LatticeVector<S>) -> Result<S> {
        Error::check_dim(self.dim, x.dim())?;
        match self.norm_kind {
            NormKind::L1 => Ok(x.modulus().sum_entries()),
            NormKind::Sup => Ok(x.modulus().max_entry()),
            NormKind::Euclid => {
                let sq = x.entries().iter().fold(S::zero(), |acc, v| acc + v.clone() * v.clone());
                sq.sqrt()
                    .ok_or_else(|| Error::Inexact(format!("sqrt of {}", sq.to_canonical())))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    type Q = Rational;

    fn v(vals: &[i64]) -> LatticeVector<Q> {
        LatticeVector::from_i64s(vals)
    }

    #[test]
    fn join_meet_examples() {
        assert_eq!(v(&[1, -2]).join(&v(&[0, 3])).unwrap(), v(&[1, 3]));
        assert_eq!(v(&[1, -2]).meet(&v(&[0, 3])).unwrap(), v(&[0, -2]));
        assert_eq!(v(&[0, 0]).join(&v(&[-1, -1])).unwrap(), v(&[0, 0]));
        let x = v(&[4, -7, 2]);
        assert_eq!(x.join(&x).unwrap(), x);
        assert_eq!(x.meet(&x).unwrap(), x);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            v(&[1]).join(&v(&[1, 2])),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
        let s = Space::new(3, NormKind::L1).unwrap();
        assert!(s.norm(&v(&[1, 2])).is_err());
        assert!(LatticeVector::<Q>::new(vec![]).is_err());
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(v(&[-2, 3]).modulus(), v(&[2, 3]));
        assert_eq!(v(&[0, 0]).modulus(), v(&[0, 0]));
    }

    #[test]
    fn norms() {
        let l1 = Space::new(2, NormKind::L1).unwrap();
        let sup = Space::new(2, NormKind::Sup).unwrap();
        let eu = Space::new(2, NormKind::Euclid).unwrap();
        assert_eq!(l1.norm(&v(&[2, -3])).unwrap(), Q::from_i64(5));
        assert_eq!(sup.norm(&v(&[2, -3])).unwrap(), Q::from_i64(3));
        assert_eq!(eu.norm(&v(&[3, -4])).unwrap(), Q::from_i64(5));
        assert!(matches!(eu.norm(&v(&[1, 1])), Err(Error::Inexact(_))));
        let eu_f = eu.norm(&LatticeVector::<f64>::from_i64s(&[1, 1])).unwrap();
        assert!((eu_f - 2f64.sqrt()).abs() < 1e-15);
    }

    fn small_vec(dim: usize) -> impl Strategy<Value = LatticeVector<Q>> {
        prop::collection::vec((-50i64..50, 1i64..9), dim)
            .prop_map(|p| LatticeVector::new(p.into_iter().map(|(n, d)| Q::from_ratio(n, d)).collect()).unwrap())
    }

    fn triple() -> impl Strategy<Value = (LatticeVector<Q>, LatticeVector<Q>, LatticeVector<Q>)> {
        (1usize..6).prop_flat_map(|d| (small_vec(d), small_vec(d), small_vec(d)))
    }

    proptest! {
        #[test]
        fn lattice_axioms((x, y, z) in triple()) {
            // commutativity
            prop_assert_eq!(x.join(&y).unwrap(), y.join(&x).unwrap());
            prop_assert_eq!(x.meet(&y).unwrap(), y.meet(&x).unwrap());
            // associativity
            prop_assert_eq!(x.join(&y).unwrap().join(&z).unwrap(), x.join(&y.join(&z).unwrap()).unwrap());
            prop_assert_eq!(x.meet(&y).unwrap().meet(&z).unwrap(), x.meet(&y.meet(&z).unwrap()).unwrap());
            // absorption
            prop_assert_eq!(x.join(&x.meet(&y).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(x.meet(&x.join(&y).unwrap()).unwrap(), x.clone());
            // x∧y + x∨y = x + y
            prop_assert_eq!(
                x.meet(&y).unwrap().add(&x.join(&y).unwrap()).unwrap(),
                x.add(&y).unwrap()
            );
        }

        #[test]
        fn order_is_partial((x, y, z) in triple()) {
            prop_assert!(x.le(&x).unwrap());
            if x.le(&y).unwrap() && y.le(&x).unwrap() {
                prop_assert_eq!(&x, &y);
            }
            if x.le(&y).unwrap() && y.le(&z).unwrap() {
                prop_assert!(x.le(&z).unwrap());
            }
            prop_assert!(x.meet(&y).unwrap().le(&x.join(&y).unwrap()).unwrap());
        }

        #[test]
        fn modulus_properties((x, y, _z) in triple()) {
            prop_assert_eq!(x.neg().modulus(), x.modulus());
            prop_assert!(x.modulus().is_positive());
            prop_assert_eq!(x.modulus().is_zero(), x.is_zero());
            for kind in [NormKind::L1, NormKind::Sup] {
                let s = Space::new(x.dim(), kind).unwrap();
                prop_assert_eq!(s.norm(&x.modulus()).unwrap(), s.norm(&x).unwrap());
                prop_assert!(s.norm(&x).unwrap() >= Q::from_i64(0));
            }
            let (px, py) = (x.modulus(), y.modulus());
            let l1 = Space::new(x.dim(), NormKind::L1).unwrap();
            let sup = Space::new(x.dim(), NormKind::Sup).unwrap();
            prop_assert_eq!(l1.norm(&px.add(&py).unwrap()).unwrap(), l1.norm(&px).unwrap() + l1.norm(&py).unwrap());
            prop_assert_eq!(
                sup.norm(&px.join(&py).unwrap()).unwrap(),
                smax(&sup.norm(&px).unwrap(), &sup.norm(&py).unwrap())
            );
            // monotone: 0 <= px <= px + py
            let big = px.add(&py).unwrap();
            prop_assert!(l1.norm(&px).unwrap() <= l1.norm(&big).unwrap());
            prop_assert!(sup.norm(&px).unwrap() <= sup.norm(&big).unwrap());
        }
    }
}
