//! Rational functions in `u = q^{-s}` with denominators `(1-u)^a (1+u)^b`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::Rational;
use crate::cyclotomic::CycScalar;

#[derive(Clone, Debug)]
pub struct ZetaElement {
    /// Laurent numerator `Σ n_k u^k`.
    num: BTreeMap<i64, CycScalar>,
    /// Power of `(1 - u)` in the denominator.
    minus: u32,
    /// Power of `(1 + u)` in the denominator.
    plus: u32,
}

/// Value at `u = 1`, or the order of the pole there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtOne {
    Value(CycScalar),
    Pole(u32),
}

fn mul_linear(num: &BTreeMap<i64, CycScalar>, c: i64) -> BTreeMap<i64, CycScalar> {
    // multiply by (1 + c u)
    let mut out = num.clone();
    for (k, v) in num {
        let e = out.entry(k + 1).or_default();
        *e += &v.scale(&Rational::from_integer(c.into()));
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn eval_at(num: &BTreeMap<i64, CycScalar>, sign: i64) -> CycScalar {
    let mut acc = CycScalar::zero();
    for (k, v) in num {
        if sign < 0 && k.rem_euclid(2) == 1 {
            acc -= v;
        } else {
            acc += v;
        }
    }
    acc
}

/// Exact division by `(1 - c u)`, `c = ±1`, assuming `num(1/c) = 0`.
fn div_linear(num: &BTreeMap<i64, CycScalar>, c: i64) -> BTreeMap<i64, CycScalar> {
    let mut out = BTreeMap::new();
    let Some((&lo, _)) = num.iter().next() else {
        return out;
    };
    let hi = *num.keys().next_back().unwrap();
    let cr = CycScalar::from_int(c);
    let mut prev = CycScalar::zero();
    for k in lo..hi {
        let nk = num.get(&k).cloned().unwrap_or_default();
        // q_k - c q_{k-1} = n_k
        let q = &nk + &(&cr * &prev);
        if !q.is_zero() {
            out.insert(k, q.clone());
        }
        prev = q;
    }
    out
}

impl ZetaElement {
    pub fn zero() -> Self {
        ZetaElement { num: BTreeMap::new(), minus: 0, plus: 0 }
    }

    pub fn constant(c: CycScalar) -> Self {
        Self::monomial(c, 0)
    }

    /// `c u^k`.
    pub fn monomial(c: CycScalar, k: i64) -> Self {
        let mut num = BTreeMap::new();
        if !c.is_zero() {
            num.insert(k, c);
        }
        ZetaElement { num, minus: 0, plus: 0 }
    }

    /// `Σ_{j ≥ start} (c u^{sign})^j` as a rational function, `c = ±1`.
    pub fn geometric_tail(c: i64, sign: i64, start: i64) -> Self {
        assert!(c == 1 || c == -1);
        let cj = |j: i64| if c == -1 && j.rem_euclid(2) == 1 { -1 } else { 1 };
        let (coef, exp) = if sign > 0 {
            (cj(start), start)
        } else {
            (-cj(start + 1), 1 - start)
        };
        let mut z = Self::monomial(CycScalar::from_int(coef), exp);
        if c == 1 {
            z.minus = 1;
        } else {
            z.plus = 1;
        }
        z.normalize();
        z
    }

    pub fn denominator(&self) -> (u32, u32) {
        (self.minus, self.plus)
    }

    pub fn numerator(&self) -> &BTreeMap<i64, CycScalar> {
        &self.num
    }

    fn normalize(&mut self) {
        self.num.retain(|_, v| !v.is_zero());
        while self.minus > 0 && !self.num.is_empty() && eval_at(&self.num, 1).is_zero() {
            self.num = div_linear(&self.num, 1);
            self.minus -= 1;
        }
        while self.plus > 0 && !self.num.is_empty() && eval_at(&self.num, -1).is_zero() {
            self.num = div_linear(&self.num, -1);
            self.plus -= 1;
        }
        if self.num.is_empty() {
            self.minus = 0;
            self.plus = 0;
        }
    }

    fn lifted(&self, minus: u32, plus: u32) -> BTreeMap<i64, CycScalar> {
        let mut n = self.num.clone();
        for _ in self.minus..minus {
            n = mul_linear(&n, -1);
        }
        for _ in self.plus..plus {
            n = mul_linear(&n, 1);
        }
        n
    }

    pub fn add(&self, o: &Self) -> Self {
        let minus = self.minus.max(o.minus);
        let plus = self.plus.max(o.plus);
        let mut num = self.lifted(minus, plus);
        for (k, v) in o.lifted(minus, plus) {
            *num.entry(k).or_default() += &v;
        }
        let mut z = ZetaElement { num, minus, plus };
        z.normalize();
        z
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut z = ZetaElement {
            num: self.num.iter().map(|(k, v)| (*k, v * c)).collect(),
            minus: self.minus,
            plus: self.plus,
        };
        z.normalize();
        z
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut num: BTreeMap<i64, CycScalar> = BTreeMap::new();
        for (a, x) in &self.num {
            for (b, y) in &o.num {
                *num.entry(a + b).or_default() += &(x * y);
            }
        }
        let mut z = ZetaElement { num, minus: self.minus + o.minus, plus: self.plus + o.plus };
        z.normalize();
        z
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn at_one(&self) -> AtOne {
        if self.minus > 0 {
            return AtOne::Pole(self.minus);
        }
        let v = eval_at(&self.num, 1);
        let two = Rational::from_integer(2.into());
        let mut d = Rational::from_integer(1.into());
        for _ in 0..self.plus {
            d *= &two;
        }
        AtOne::Value(v.scale(&d.recip()))
    }

    /// Value at `u = 1` when holomorphic there.
    pub fn value_at_one(&self) -> Option<CycScalar> {
        match self.at_one() {
            AtOne::Value(v) => Some(v),
            AtOne::Pole(_) => None,
        }
    }

    /// Evaluate at a rational `u` away from `±1`.
    pub fn eval(&self, u: &Rational) -> Option<CycScalar> {
        let one = Rational::from_integer(1.into());
        let dm = &one - u;
        let dp = &one + u;
        if (self.minus > 0 && num_traits::Zero::is_zero(&dm)) || (self.plus > 0 && num_traits::Zero::is_zero(&dp)) {
            return None;
        }
        let mut acc = CycScalar::zero();
        for (k, v) in &self.num {
            let uk = if *k >= 0 { num_traits::pow(u.clone(), *k as usize) } else { num_traits::pow(u.recip(), (-k) as usize) };
            acc += &v.scale(&uk);
        }
        let mut den = one;
        for _ in 0..self.minus {
            den *= &dm;
        }
        for _ in 0..self.plus {
            den *= &dp;
        }
        Some(acc.scale(&den.recip()))
    }

    /// Truncated power-series coefficients of `u^lo .. u^hi` (expansion in
    /// `|u| < 1`).
    pub fn series(&self, lo: i64, hi: i64) -> Vec<CycScalar> {
        let mut coeffs: BTreeMap<i64, CycScalar> = self.num.clone();
        let top = hi;
        for _ in 0..self.minus {
            let mut next = BTreeMap::new();
            let mut run = CycScalar::zero();
            let start = coeffs.keys().next().copied().unwrap_or(0);
            for k in start..=top {
                if let Some(v) = coeffs.get(&k) {
                    run += v;
                }
                next.insert(k, run.clone());
            }
            coeffs = next;
        }
        for _ in 0..self.plus {
            let mut next = BTreeMap::new();
            let mut prev = CycScalar::zero();
            let start = coeffs.keys().next().copied().unwrap_or(0);
            for k in start..=top {
                let nk = coeffs.get(&k).cloned().unwrap_or_default();
                let q = &nk - &prev;
                next.insert(k, q.clone());
                prev = q;
            }
            coeffs = next;
        }
        (lo..=hi).map(|k| coeffs.get(&k).cloned().unwrap_or_default()).collect()
    }
}

impl PartialEq for ZetaElement {
    fn eq(&self, o: &Self) -> bool {
        self.add(&o.scale(&CycScalar::from_int(-1))).is_zero()
    }
}

impl Default for ZetaElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for ZetaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for (k, v) in &self.num {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})u^{}", v, k)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ") / ((1-u)^{} (1+u)^{})", self.minus, self.plus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn geometric_series() {
        let z = ZetaElement::geometric_tail(1, 1, 0);
        assert_eq!(z.at_one(), AtOne::Pole(1));
        let z = ZetaElement::geometric_tail(-1, 1, 0);
        assert_eq!(z.value_at_one(), Some(CycScalar::from_rational(ratio(1, 2))));
        assert_eq!(z.series(0, 3), alloc::vec![1i64, -1, 1, -1].into_iter().map(CycScalar::from_int).collect::<Vec<_>>());
        // Σ_{j ≥ 2} (-u^{-1})^j at u = 1/3 (continued from |u| > 1) = 9 / (1 + 3) ... checked numerically
        let z = ZetaElement::geometric_tail(-1, -1, 2);
        let u = rat(3);
        // convergent at u = 3: Σ_{j≥2} (-1/3)^j = (1/9)/(1+1/3) = 1/12
        assert_eq!(z.eval(&u), Some(CycScalar::from_rational(ratio(1, 12))));
        let z = ZetaElement::geometric_tail(1, -1, 1);
        // Σ_{j≥1} 3^{-j} = 1/2
        assert_eq!(z.eval(&u), Some(CycScalar::from_rational(ratio(1, 2))));
    }

    #[test]
    fn cancellation() {
        // 1/(1-u) - u/(1-u) = 1
        let a = ZetaElement::geometric_tail(1, 1, 0);
        let b = ZetaElement::geometric_tail(1, 1, 1);
        let d = a.add(&b.scale(&CycScalar::from_int(-1)));
        assert_eq!(d, ZetaElement::constant(CycScalar::one()));
        assert_eq!(d.denominator(), (0, 0));
        // Σ_{j≥0} u^j + Σ_{j≥1} u^{-j}: the two one-sided sums add to 0 as rational functions
        let c = ZetaElement::geometric_tail(1, -1, 1);
        assert!(a.add(&c).is_zero());
    }
}
