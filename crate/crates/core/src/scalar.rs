//! Base field data: `F = Q_p`, `E = F(√τ)`, Hilbert symbols, `χ` and `ψ`.

use num_traits::{ToPrimitive, Zero};

use crate::arith::{
    is_odd_prime, least_nonresidue, legendre_unit, pow_p, rat, residue, unit_part, vp, Rational,
};
use crate::cyclotomic::CycScalar;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareClass {
    One,
    U,
    P,
    UP,
}

impl SquareClass {
    pub const ALL: [SquareClass; 4] = [SquareClass::One, SquareClass::U, SquareClass::P, SquareClass::UP];

    /// `(unit nonsquare bit, odd valuation bit)`.
    pub fn bits(self) -> (bool, bool) {
        match self {
            SquareClass::One => (false, false),
            SquareClass::U => (true, false),
            SquareClass::P => (false, true),
            SquareClass::UP => (true, true),
        }
    }

    pub fn from_bits(u: bool, odd: bool) -> Self {
        match (u, odd) {
            (false, false) => SquareClass::One,
            (true, false) => SquareClass::U,
            (false, true) => SquareClass::P,
            (true, true) => SquareClass::UP,
        }
    }

    pub fn mul(self, o: Self) -> Self {
        let (a, b) = self.bits();
        let (c, d) = o.bits();
        Self::from_bits(a ^ c, b ^ d)
    }
}

/// The local data `(p, τ)`; `q = p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFieldSpec {
    pub p: u64,
    pub tau: Rational,
}

impl LocalFieldSpec {
    pub fn new(p: u64, tau: Rational) -> Result<Self, Error> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if tau.is_zero() {
            return Err(Error::ZeroInput);
        }
        let s = LocalFieldSpec { p, tau };
        if s.square_class(&s.tau)? == SquareClass::One {
            return Err(Error::TauIsSquare);
        }
        Ok(s)
    }

    /// `E` unramified: `τ` has even valuation.
    pub fn unramified(p: u64) -> Self {
        Self::new(p, rat(least_nonresidue(p) as i64)).expect("nonresidue is a nonsquare")
    }

    /// `E = F(√p)`.
    pub fn ramified(p: u64) -> Self {
        Self::new(p, rat(p as i64)).expect("p is a nonsquare")
    }

    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn is_ramified(&self) -> bool {
        vp(&self.tau, self.p).unwrap() % 2 != 0
    }

    /// The fixed nonsquare unit `u`.
    pub fn nonresidue(&self) -> u64 {
        least_nonresidue(self.p)
    }

    pub fn valuation(&self, x: &Rational) -> Option<i64> {
        vp(x, self.p)
    }

    /// `|x|_F = q^{-v(x)}`, zero at zero.
    pub fn abs(&self, x: &Rational) -> Rational {
        match vp(x, self.p) {
            None => Rational::zero(),
            Some(v) => pow_p(self.p, -v),
        }
    }

    pub fn square_class(&self, x: &Rational) -> Result<SquareClass, Error> {
        let v = vp(x, self.p).ok_or(Error::ZeroInput)?;
        let u = unit_part(x, self.p);
        Ok(SquareClass::from_bits(legendre_unit(&u, self.p) == -1, v.rem_euclid(2) == 1))
    }

    /// Representative rational of a square class: `1, u, p, up`.
    pub fn class_rep(&self, c: SquareClass) -> Rational {
        let (u, odd) = c.bits();
        let mut r = rat(1);
        if u {
            r *= rat(self.nonresidue() as i64);
        }
        if odd {
            r *= rat(self.p as i64);
        }
        r
    }

    pub fn hilbert_symbol(&self, a: &Rational, b: &Rational) -> Result<i8, Error> {
        hilbert_symbol(a, b, self.p)
    }

    /// `χ(x) = (x, τ)_F`; zero only for `x = 0`.
    pub fn chi(&self, x: &Rational) -> i8 {
        if x.is_zero() {
            return 0;
        }
        hilbert_symbol(x, &self.tau, self.p).unwrap()
    }

    pub fn psi(&self, x: &Rational) -> CycScalar {
        psi_value(x, self.p)
    }
}

/// Tame Hilbert symbol over `Q_p`, `p` odd.
pub fn hilbert_symbol(a: &Rational, b: &Rational, p: u64) -> Result<i8, Error> {
    let alpha = vp(a, p).ok_or(Error::ZeroInput)?;
    let beta = vp(b, p).ok_or(Error::ZeroInput)?;
    let u = unit_part(a, p);
    let v = unit_part(b, p);
    let mut s: i8 = 1;
    if (alpha * beta).rem_euclid(2) == 1 && ((p - 1) / 2) % 2 == 1 {
        s = -s;
    }
    if beta.rem_euclid(2) == 1 {
        s *= legendre_unit(&u, p);
    }
    if alpha.rem_euclid(2) == 1 {
        s *= legendre_unit(&v, p);
    }
    Ok(s)
}

/// Level-0 additive character: `ψ(m / p^k) = ζ_{p^k}^m`.
pub fn psi_value(x: &Rational, p: u64) -> CycScalar {
    let v = match vp(x, p) {
        None => return CycScalar::one(),
        Some(v) => v,
    };
    if v >= 0 {
        return CycScalar::one();
    }
    let k = (-v) as u32;
    let m = residue(&(x * pow_p(p, k as i64)), p, k);
    let modulus = p.pow(k);
    CycScalar::root_of_unity(m.to_i64().unwrap(), modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn classes() {
        let s = LocalFieldSpec::unramified(3);
        assert_eq!(s.square_class(&rat(4)).unwrap(), SquareClass::One);
        assert_eq!(s.square_class(&rat(3)).unwrap(), SquareClass::P);
        assert_eq!(s.square_class(&rat(2)).unwrap(), SquareClass::U);
        assert_eq!(s.square_class(&ratio(2, 27)).unwrap(), SquareClass::UP);
        assert!(s.square_class(&rat(0)).is_err());
        assert!(LocalFieldSpec::new(3, rat(4)).is_err());
        assert!(LocalFieldSpec::new(9, rat(2)).is_err());
    }

    #[test]
    fn chi_unramified_is_parity() {
        let s = LocalFieldSpec::unramified(5);
        assert!(!s.is_ramified());
        assert_eq!(s.chi(&rat(5)), -1);
        assert_eq!(s.chi(&rat(2)), 1);
        assert_eq!(s.chi(&rat(25)), 1);
        assert_eq!(s.chi(&rat(1)), 1);
    }

    #[test]
    fn psi_basics() {
        assert!(psi_value(&rat(7), 3).is_one());
        assert_eq!(psi_value(&ratio(1, 3), 3), CycScalar::root_of_unity(1, 3));
        assert_eq!(psi_value(&ratio(1, 6), 3), CycScalar::root_of_unity(2, 3));
        let a = ratio(5, 9);
        let b = ratio(-7, 27);
        assert_eq!(psi_value(&(&a + &b), 3), psi_value(&a, 3) * psi_value(&b, 3));
    }
}
