use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{AryTree, BundledTree, PlaneTree};
use crate::error::{Error, Result};
use crate::rational::{int, rational_binomial, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FamilyKind {
    GeneralizedPlane,
    DAry,
    Recursive,
}

/// Simple family of increasing trees given by a degree-weight generating
/// function `φ(t) = Σ φ_m t^m`:
///
/// * generalized plane: `φ(t) = φ0 (1 + c2 t / φ0)^(-α)`, `α = -1 - c1/c2`
/// * d-ary: `φ(t) = φ0 (1 + c2 t / φ0)^d`, `d = c1/c2 + 1`
/// * recursive: `φ(t) = φ0 exp(c1 t / φ0)`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeWeightFamily {
    kind: FamilyKind,
    #[serde(with = "crate::rational::as_string")]
    phi0: Rational,
    #[serde(with = "crate::rational::as_string")]
    c1: Rational,
    #[serde(with = "crate::rational::as_string")]
    c2: Rational,
}

impl DegreeWeightFamily {
    pub fn new(kind: FamilyKind, phi0: Rational, c1: Rational, c2: Rational) -> Result<Self> {
        if !phi0.is_positive() {
            return Err(Error::InvalidFamily("φ0 must be positive".into()));
        }
        match kind {
            FamilyKind::GeneralizedPlane => {
                if !(c2.is_negative() && -&c2 < c1) {
                    return Err(Error::InvalidFamily(format!(
                        "generalized plane trees need 0 < -c2 < c1 (got c1 = {c1}, c2 = {c2})"
                    )));
                }
            }
            FamilyKind::DAry => {
                if !c2.is_positive() {
                    return Err(Error::InvalidFamily("d-ary trees need c2 > 0".into()));
                }
                let d = &c1 / &c2 + Rational::one();
                if !d.is_integer() || d < int(2) {
                    return Err(Error::InvalidFamily(format!(
                        "d = c1/c2 + 1 must be an integer >= 2 (got {d})"
                    )));
                }
            }
            FamilyKind::Recursive => {
                if !c1.is_positive() || !c2.is_zero() {
                    return Err(Error::InvalidFamily("recursive trees need c1 > 0 and c2 = 0".into()));
                }
            }
        }
        Ok(Self { kind, phi0, c1, c2 })
    }

    /// Ordinary plane recursive trees, `φ(t) = 1/(1-t)`.
    pub fn plane_recursive() -> Self {
        Self::bundled(1).expect("valid")
    }

    /// `k`-plane recursive trees, `φ(t) = (1 - (k-1) t)^(-1/(k-1))`, `k >= 2`.
    pub fn k_plane(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidFamily("k-plane trees need k >= 2".into()));
        }
        Self::new(FamilyKind::GeneralizedPlane, int(1), int(k as i64), int(1 - k as i64))
    }

    /// Trees with `bundles` ordered bundles per node, `φ(t) = (1-t)^(-bundles)`.
    pub fn bundled(bundles: u32) -> Result<Self> {
        if bundles == 0 {
            return Err(Error::InvalidFamily("at least one bundle is needed".into()));
        }
        Self::new(FamilyKind::GeneralizedPlane, int(1), int(bundles as i64 + 1), int(-1))
    }

    /// Positional `d`-ary trees, `φ(t) = (1+t)^d`.
    pub fn d_ary(d: u32) -> Result<Self> {
        Self::new(FamilyKind::DAry, int(1), int(d as i64 - 1), int(1))
    }

    /// Unordered recursive trees, `φ(t) = e^t`.
    pub fn recursive() -> Self {
        Self::new(FamilyKind::Recursive, int(1), int(1), int(0)).expect("valid")
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn phi0(&self) -> &Rational {
        &self.phi0
    }

    pub fn c1(&self) -> &Rational {
        &self.c1
    }

    pub fn c2(&self) -> &Rational {
        &self.c2
    }

    /// `α = -1 - c1/c2` for plane kinds.
    pub fn alpha(&self) -> Option<Rational> {
        (self.kind == FamilyKind::GeneralizedPlane).then(|| -Rational::one() - &self.c1 / &self.c2)
    }

    /// `d = c1/c2 + 1` for the d-ary kind.
    pub fn arity(&self) -> Option<usize> {
        (self.kind == FamilyKind::DAry)
            .then(|| (&self.c1 / &self.c2 + Rational::one()).to_integer().to_usize().expect("small arity"))
    }

    /// Coefficient `φ_m` of `t^m` in `φ(t)`.
    pub fn degree_weight(&self, m: usize) -> Rational {
        let ratio = &self.c2 / &self.phi0;
        match self.kind {
            FamilyKind::GeneralizedPlane => {
                let alpha = self.alpha().expect("plane kind");
                let rising = rational_binomial(&(alpha + int(m as i64 - 1)), m as u64);
                &self.phi0 * rising * pow(&-ratio, m)
            }
            FamilyKind::DAry => {
                let d = int(self.arity().expect("ary kind") as i64);
                &self.phi0 * rational_binomial(&d, m as u64) * pow(&ratio, m)
            }
            FamilyKind::Recursive => {
                let r = &self.c1 / &self.phi0;
                &self.phi0 * pow(&r, m) / factorial(m)
            }
        }
    }

    /// `T_n = φ0 c1^(n-1) (n-1)! binom(n-1+c2/c1, n-1)`.
    pub fn total_weight(&self, n: usize) -> Result<Rational> {
        if n == 0 {
            return Err(Error::InvalidArgument("total weight needs n >= 1".into()));
        }
        let m = n - 1;
        let top = int(m as i64) + &self.c2 / &self.c1;
        Ok(&self.phi0 * pow(&self.c1, m) * factorial(m) * rational_binomial(&top, m as u64))
    }
}

fn pow(r: &Rational, m: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..m {
        acc *= r;
    }
    acc
}

fn factorial(m: usize) -> Rational {
    Rational::from_integer((1..=m as u64).map(BigInt::from).product())
}

/// A tree shape whose weight in a degree-weight family is defined.
pub trait Weighted {
    fn weight_in(&self, family: &DegreeWeightFamily) -> Result<Rational>;
}

/// Product of `φ_deg(v)` over all nodes, ordered children.
impl Weighted for PlaneTree {
    fn weight_in(&self, family: &DegreeWeightFamily) -> Result<Rational> {
        let max = family.arity();
        let mut acc = Rational::one();
        for v in 1..=self.order() as u32 {
            let deg = self.degree(v);
            if max.is_some_and(|d| deg > d) {
                return Err(Error::DegreeNotAllowed { degree: deg });
            }
            acc *= family.degree_weight(deg);
        }
        Ok(acc)
    }
}

/// Weight of one positional tree: `φ_deg / binom(d, deg)` per node, since
/// the plane weight `φ_deg` spreads evenly over the slot placements.
impl Weighted for AryTree {
    fn weight_in(&self, family: &DegreeWeightFamily) -> Result<Rational> {
        match family.arity() {
            Some(d) if d == self.arity() => {}
            _ => {
                return Err(Error::InvalidFamily(format!(
                    "a {}-ary tree needs the matching d-ary family",
                    self.arity()
                )))
            }
        }
        let d = int(self.arity() as i64);
        let mut acc = Rational::one();
        for v in 1..=self.order() as u32 {
            let deg = self.degree(v) as u64;
            acc *= family.degree_weight(deg as usize) / rational_binomial(&d, deg);
        }
        Ok(acc)
    }
}

/// Weight of one bundled tree: `φ_deg / binom(b+deg-1, deg)` per node, the
/// number of ways to split `deg` ordered children into `b` bundles.
impl Weighted for BundledTree {
    fn weight_in(&self, family: &DegreeWeightFamily) -> Result<Rational> {
        let b = int(self.bundles() as i64);
        if family.alpha().as_ref() != Some(&b) {
            return Err(Error::InvalidFamily(format!(
                "a {}-bundled tree needs a plane family with α = {}",
                self.bundles(),
                self.bundles()
            )));
        }
        let mut acc = Rational::one();
        for v in 1..=self.order() as u32 {
            let deg = self.degree(v) as u64;
            acc *= family.degree_weight(deg as usize) / rational_binomial(&(&b + int(deg as i64 - 1)), deg);
        }
        Ok(acc)
    }
}

pub fn tree_weight<T: Weighted + ?Sized>(tree: &T, family: &DegreeWeightFamily) -> Result<Rational> {
    tree.weight_in(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn parameter_checks() {
        assert!(DegreeWeightFamily::new(FamilyKind::GeneralizedPlane, int(1), int(1), int(-2)).is_err());
        assert!(DegreeWeightFamily::new(FamilyKind::DAry, int(1), int(3), int(2)).is_err());
        assert!(DegreeWeightFamily::new(FamilyKind::DAry, int(0), int(2), int(1)).is_err());
        assert!(DegreeWeightFamily::k_plane(1).is_err());
        assert_eq!(DegreeWeightFamily::d_ary(3).unwrap().arity(), Some(3));
        assert_eq!(DegreeWeightFamily::bundled(2).unwrap().alpha(), Some(int(2)));
        assert_eq!(DegreeWeightFamily::k_plane(3).unwrap().alpha(), Some(frac(1, 2)));
    }

    #[test]
    fn total_weights() {
        let plane = DegreeWeightFamily::plane_recursive();
        let got: Vec<_> = (1..=5).map(|n| plane.total_weight(n).unwrap()).collect();
        assert_eq!(got, [1, 1, 3, 15, 105].map(int));
        assert_eq!(DegreeWeightFamily::d_ary(3).unwrap().total_weight(2).unwrap(), int(3));
        assert_eq!(DegreeWeightFamily::k_plane(3).unwrap().total_weight(3).unwrap(), int(4));
        assert_eq!(DegreeWeightFamily::recursive().total_weight(4).unwrap(), int(6));
    }

    #[test]
    fn degree_weights() {
        let three = DegreeWeightFamily::k_plane(3).unwrap();
        assert_eq!(three.degree_weight(0), int(1));
        assert_eq!(three.degree_weight(1), int(1));
        assert_eq!(three.degree_weight(2), frac(3, 2));
        assert_eq!(three.degree_weight(3), frac(15, 6));
        let tern = DegreeWeightFamily::d_ary(3).unwrap();
        assert_eq!((0..5).map(|m| tern.degree_weight(m)).collect::<Vec<_>>(), [1, 3, 3, 1, 0].map(int));
        let two = DegreeWeightFamily::bundled(2).unwrap();
        assert_eq!((0..4).map(|m| two.degree_weight(m)).collect::<Vec<_>>(), [1, 2, 3, 4].map(int));
    }

    #[test]
    fn small_tree_weights() {
        let three = DegreeWeightFamily::k_plane(3).unwrap();
        let path = PlaneTree::new(vec![0, 1], vec![0, 1]).unwrap();
        assert_eq!(tree_weight(&path, &three).unwrap(), int(1));
        let star = PlaneTree::new(vec![0, 1, 1], vec![0, 1, 2]).unwrap();
        assert_eq!(tree_weight(&star, &three).unwrap(), frac(3, 2));
        let bin = DegreeWeightFamily::d_ary(2).unwrap();
        let wide = PlaneTree::new(vec![0, 1, 1, 1], vec![0, 1, 2, 3]).unwrap();
        assert_eq!(tree_weight(&wide, &bin), Err(Error::DegreeNotAllowed { degree: 3 }));
        let t = AryTree::new(3, vec![0, 1, 1], vec![0, 1, 3]).unwrap();
        assert_eq!(tree_weight(&t, &DegreeWeightFamily::d_ary(3).unwrap()).unwrap(), int(1));
        assert!(tree_weight(&t, &bin).is_err());
    }
}
