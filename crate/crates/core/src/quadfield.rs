//! Quadratic algebras `F(σ)`, `σ² = d`, with `E = F(√τ)` as the main case.

use core::fmt;

use num_traits::{One, Zero};

use crate::arith::{vp, Rational};
use crate::linalg::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quad {
    pub a: Rational,
    pub b: Rational,
    pub d: Rational,
}

impl Quad {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Self {
        Quad { a, b, d }
    }

    pub fn from_base(a: Rational, d: &Rational) -> Self {
        Quad { a, b: Rational::zero(), d: d.clone() }
    }

    pub fn sqrt_d(d: &Rational) -> Self {
        Quad { a: Rational::zero(), b: Rational::one(), d: d.clone() }
    }

    pub fn conj(&self) -> Self {
        Quad { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.d * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn is_base(&self) -> bool {
        self.b.is_zero()
    }

    /// Valuation of `a + b√d` for the normalized valuation of `F(√d)`
    /// when `v(d) ∈ {0, 1}` and `F(√d)` is a field.
    pub fn valuation_normalized(&self, p: u64) -> Option<i64> {
        let vd = vp(&self.d, p).unwrap();
        let va = vp(&self.a, p);
        let vb = vp(&self.b, p);
        match vd {
            0 => match (va, vb) {
                (None, None) => None,
                (Some(x), None) | (None, Some(x)) => Some(x),
                (Some(x), Some(y)) => Some(x.min(y)),
            },
            1 => {
                let xa = va.map(|x| 2 * x);
                let xb = vb.map(|y| 2 * y + 1);
                match (xa, xb) {
                    (None, None) => None,
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    (Some(x), Some(y)) => Some(x.min(y)),
                }
            }
            _ => panic!("valuation_normalized expects v(d) in {{0, 1}}"),
        }
    }
}

impl Field for Quad {
    fn zero_like(&self) -> Self {
        Quad::from_base(Rational::zero(), &self.d)
    }
    fn one_like(&self) -> Self {
        Quad::from_base(Rational::one(), &self.d)
    }
    fn vanishes(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Quad { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d.clone() }
    }
    fn sub(&self, o: &Self) -> Self {
        Quad { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.d, o.d);
        Quad {
            a: &self.a * &o.a + &self.d * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d.clone(),
        }
    }
    fn neg(&self) -> Self {
        Quad { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Quad { a: &c.a / &n, b: &c.b / &n, d: self.d.clone() })
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        Quad::from_base(r.clone(), &self.d)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn arithmetic() {
        let d = rat(3);
        let x = Quad::new(rat(1), rat(2), d.clone());
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), x.one_like());
        assert_eq!(x.mul(&x.conj()).a, x.norm());
        let z = Quad::new(ratio(1, 3), rat(1), d);
        assert_eq!(z.valuation_normalized(3), Some(-2));
        assert_eq!(Quad::sqrt_d(&rat(3)).valuation_normalized(3), Some(1));
    }
}
