//! Exact elements of cyclotomic fields `Q(ζ_M)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

/// An element `Σ c_i ζ_M^i` with `0 <= i < φ(M)`, reduced modulo `Φ_M`.
///
/// Values with only a constant term always carry `M = 1`. Two values with
/// different conductors are compared after lifting to the common multiple.
#[derive(Clone, Debug)]
pub struct CycScalar {
    m: u64,
    c: Vec<Rational>,
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, &p| acc / p * (p - 1))
}

fn poly_mul_i(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_div_monic_i(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let lead = r[i + db];
        q[i] = lead;
        if lead != 0 {
            for (j, y) in b.iter().enumerate() {
                r[i + j] -= lead * y;
            }
        }
    }
    debug_assert!(r.iter().all(|x| *x == 0));
    q
}

/// `Φ_n` as a sparse list `(exponent, coefficient)`, exponent below `φ(n)`
/// omitted for the leading term (monic of degree `φ(n)`).
fn cyclotomic_sparse(n: u64) -> (usize, Vec<(usize, i64)>) {
    let primes = prime_factors(n);
    let rad: u64 = primes.iter().product::<u64>().max(1);
    // Φ_rad = Π_{d | rad} (x^d - 1)^{μ(rad/d)}
    let k = primes.len();
    let mut num: Vec<i64> = vec![1];
    let mut den: Vec<Vec<i64>> = Vec::new();
    for mask in 0u32..(1 << k) {
        let d: u64 = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| primes[i]).product();
        let mu_sign = (k - mask.count_ones() as usize) % 2 == 0;
        let mut f = vec![0i64; d as usize + 1];
        f[0] = -1;
        f[d as usize] = 1;
        if mu_sign {
            num = poly_mul_i(&num, &f);
        } else {
            den.push(f);
        }
    }
    for f in &den {
        num = poly_div_monic_i(&num, f);
    }
    let stretch = (n / rad) as usize;
    let deg = (num.len() - 1) * stretch;
    let sparse = num[..num.len() - 1]
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| (i * stretch, *c))
        .collect();
    (deg, sparse)
}

fn reduce(m: u64, mut dense: Vec<Rational>) -> Vec<Rational> {
    let (deg, phi) = cyclotomic_sparse(m);
    if dense.len() > deg {
        for i in (deg..dense.len()).rev() {
            if dense[i].is_zero() {
                continue;
            }
            let lead = core::mem::take(&mut dense[i]);
            for (j, a) in &phi {
                let t = &lead * Rational::from_integer(BigInt::from(*a));
                dense[i - deg + j] -= t;
            }
        }
    }
    dense.truncate(deg);
    dense.resize(deg, Rational::zero());
    dense
}

impl CycScalar {
    fn build(m: u64, c: Vec<Rational>) -> Self {
        let mut s = CycScalar { m, c };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.m > 1 && self.c.iter().skip(1).all(|x| x.is_zero()) {
            let c0 = self.c.first().cloned().unwrap_or_else(Rational::zero);
            self.m = 1;
            self.c = vec![c0];
        }
    }

    pub fn zero() -> Self {
        CycScalar { m: 1, c: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        CycScalar { m: 1, c: vec![r] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn root_of_unity(k: i64, m: u64) -> Self {
        assert!(m >= 1);
        let e = k.rem_euclid(m as i64) as usize;
        let mut dense = vec![Rational::zero(); e + 1];
        dense[e] = Rational::one();
        Self::build(m, reduce(m, dense))
    }

    /// Primitive fourth root of unity `i = ζ_4`.
    pub fn i() -> Self {
        Self::root_of_unity(1, 4)
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coords(&self) -> &[Rational] {
        &self.c
    }

    /// Rebuild from a conductor and power-basis coordinates (any length).
    pub fn from_coords(m: u64, coords: Vec<Rational>) -> Self {
        assert!(m >= 1);
        Self::build(m, reduce(m, coords))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.m == 1 && self.c[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.m == 1 {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Coordinates in `Q(ζ_n)` for a multiple `n` of the conductor.
    pub fn lift(&self, n: u64) -> Vec<Rational> {
        assert!(n % self.m == 0);
        if n == self.m {
            return self.c.clone();
        }
        let t = (n / self.m) as usize;
        let mut dense = vec![Rational::zero(); (self.c.len() - 1) * t + 1];
        for (i, x) in self.c.iter().enumerate() {
            if !x.is_zero() {
                dense[i * t] = x.clone();
            }
        }
        reduce(n, dense)
    }

    fn binary(&self, other: &Self, f: impl Fn(&mut Rational, &Rational)) -> Self {
        let n = lcm(self.m, other.m);
        let mut a = self.lift(n);
        let b = other.lift(n);
        for (x, y) in a.iter_mut().zip(b.iter()) {
            f(x, y);
        }
        Self::build(n, a)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycScalar { m: self.m, c: self.c.iter().map(|x| x * r).collect() }
    }

    /// Galois automorphism `ζ ↦ ζ^a`, `gcd(a, M) = 1`.
    pub fn galois(&self, a: i64) -> Self {
        if self.m == 1 {
            return self.clone();
        }
        let m = self.m as i64;
        debug_assert_eq!(gcd(a.rem_euclid(m) as u64, self.m), 1);
        let mut dense = vec![Rational::zero(); self.m as usize];
        for (i, x) in self.c.iter().enumerate() {
            if !x.is_zero() {
                let e = (i as i64 * a).rem_euclid(m) as usize;
                dense[e] += x;
            }
        }
        Self::build(self.m, reduce(self.m, dense))
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Multiplicative inverse via the product of nontrivial conjugates.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(r.recip()));
        }
        let mut prod = Self::one();
        for a in 2..self.m as i64 {
            if gcd(a as u64, self.m) == 1 {
                prod = &prod * &self.galois(a);
            }
        }
        let norm = &prod * self;
        let n = norm.as_rational().expect("field norm is rational").clone();
        Some(prod.scale(&n.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Sign power `(-1)^k` as a scalar.
    pub fn sign(k: i64) -> Self {
        Self::from_int(if k.rem_euclid(2) == 0 { 1 } else { -1 })
    }
}

impl Default for CycScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.c == other.c;
        }
        let n = lcm(self.m, other.m);
        self.lift(n) == other.lift(n)
    }
}

impl Eq for CycScalar {}

impl From<Rational> for CycScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for CycScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, o: &CycScalar) -> CycScalar {
        if self.m == 1 && o.m == 1 {
            return CycScalar::from_rational(&self.c[0] + &o.c[0]);
        }
        self.binary(o, |x, y| *x += y)
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, o: &CycScalar) -> CycScalar {
        if self.m == 1 && o.m == 1 {
            return CycScalar::from_rational(&self.c[0] - &o.c[0]);
        }
        self.binary(o, |x, y| *x -= y)
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, o: &CycScalar) -> CycScalar {
        if self.m == 1 {
            return o.scale(&self.c[0]);
        }
        if o.m == 1 {
            return self.scale(&o.c[0]);
        }
        let n = lcm(self.m, o.m);
        let a = self.lift(n);
        let b = o.lift(n);
        let mut dense = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    dense[i + j] += x * y;
                }
            }
        }
        CycScalar::build(n, reduce(n, dense))
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar { m: self.m, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $f(self, o: CycScalar) -> CycScalar {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $f(self, o: &CycScalar) -> CycScalar {
                (&self).$f(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, o: &CycScalar) {
        if self.m == 1 && o.m == 1 {
            self.c[0] += &o.c[0];
        } else {
            *self = &*self + o;
        }
    }
}

impl AddAssign<CycScalar> for CycScalar {
    fn add_assign(&mut self, o: CycScalar) {
        *self += &o;
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, o: &CycScalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&CycScalar> for CycScalar {
    fn mul_assign(&mut self, o: &CycScalar) {
        *self = &*self * o;
    }
}

impl core::iter::Sum for CycScalar {
    fn sum<I: Iterator<Item = CycScalar>>(iter: I) -> Self {
        let mut acc = CycScalar::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let mut first = true;
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if x.is_negative() { '-' } else { '+' })?;
            } else if x.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = x.abs();
            match i {
                0 => write!(f, "{}", a)?,
                _ if a.is_one() => write!(f, "z{}^{}", self.m, i)?,
                _ => write!(f, "{}*z{}^{}", a, self.m, i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) fn to_complex(x: &CycScalar) -> (f64, f64) {
    extern crate std;
    use num_traits::ToPrimitive;
    let mut re = 0.0;
    let mut im = 0.0;
    for (i, c) in x.c.iter().enumerate() {
        let v = c.to_f64().unwrap();
        let th = 2.0 * std::f64::consts::PI * i as f64 / x.m as f64;
        re += v * th.cos();
        im += v * th.sin();
    }
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_sparse(4), (2, vec![(0, 1)]));
        assert_eq!(cyclotomic_sparse(3), (2, vec![(0, 1), (1, 1)]));
        // Φ_12 = x^4 - x^2 + 1
        assert_eq!(cyclotomic_sparse(12), (4, vec![(0, 1), (2, -1)]));
        assert_eq!(cyclotomic_sparse(9).0, 6);
        assert_eq!(euler_phi(36), 12);
    }

    #[test]
    fn roots_multiply() {
        for m in [3u64, 4, 5, 9, 12, 20, 36] {
            for a in 0..m as i64 {
                for b in 0..m as i64 {
                    let x = CycScalar::root_of_unity(a, m) * CycScalar::root_of_unity(b, m);
                    assert_eq!(x, CycScalar::root_of_unity(a + b, m));
                }
            }
            let s: CycScalar = (0..m as i64).map(|k| CycScalar::root_of_unity(k, m)).sum();
            assert!(s.is_zero() || m == 1);
        }
    }

    #[test]
    fn mixed_conductors_and_embedding() {
        let z3 = CycScalar::root_of_unity(1, 3);
        let i = CycScalar::i();
        let x = &(&z3 + &i) * &z3;
        assert_eq!(x.conductor(), 12);
        let (a, b) = (to_complex(&z3), to_complex(&i));
        let want = ((a.0 + b.0) * a.0 - (a.1 + b.1) * a.1, (a.0 + b.0) * a.1 + (a.1 + b.1) * a.0);
        assert!(close(to_complex(&x), want));
        assert_eq!(CycScalar::root_of_unity(4, 12), z3);
        assert_eq!(&i * &i, CycScalar::from_int(-1));
        assert_eq!((&i * &i).conductor(), 1);
    }

    #[test]
    fn conjugation_and_inverse() {
        let x = &CycScalar::root_of_unity(2, 9).scale(&ratio(3, 2)) + &CycScalar::from_int(5);
        assert_eq!(x.conj().conj(), x);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, CycScalar::one());
        let z = CycScalar::root_of_unity(3, 20);
        assert_eq!(&z * &z.conj(), CycScalar::one());
        assert_eq!(CycScalar::from_rational(rat(0)).inv(), None);
    }
}
