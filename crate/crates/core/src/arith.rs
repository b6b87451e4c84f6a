//! Exact rational arithmetic viewed inside `Q_p`.
//!
//! Every base-field value is a [`Rational`]; p-adic information (valuation,
//! unit part, residues modulo `p^k`) is read off the numerator and
//! denominator. No truncated digit expansions are ever stored.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// `p`-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let pb = big(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// `v_p(x)`, or `None` for `x = 0`.
pub fn vp(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

/// `v_p(x)` with `+∞` encoded as `i64::MAX`; convenient for minima.
pub fn vp_or_max(x: &Rational, p: u64) -> i64 {
    vp(x, p).unwrap_or(i64::MAX)
}

/// `p^e` as a rational, `e` of any sign.
pub fn pow_p(p: u64, e: i64) -> Rational {
    let m = num_traits::pow(big(p), e.unsigned_abs() as usize);
    if e >= 0 {
        Rational::from_integer(m)
    } else {
        Rational::new(BigInt::one(), m)
    }
}

pub fn pow_p_int(p: u64, e: u32) -> BigInt {
    num_traits::pow(big(p), e as usize)
}

/// `x / p^{v(x)}`, a p-adic unit. Panics on zero.
pub fn unit_part(x: &Rational, p: u64) -> Rational {
    let v = vp(x, p).expect("unit part of zero");
    x * pow_p(p, -v)
}

/// Modular inverse of `a` modulo `m` (`gcd(a, m) = 1`).
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Residue of a p-integral rational modulo `p^k`, in `[0, p^k)`.
pub fn residue(x: &Rational, p: u64, k: u32) -> BigInt {
    let m = pow_p_int(p, k);
    if k == 0 {
        return BigInt::zero();
    }
    debug_assert!(vp_or_max(x, p) >= 0);
    let inv = mod_inverse(&x.denom().mod_floor(&m), &m);
    (x.numer() * inv).mod_floor(&m)
}

/// Canonical representative of the coset `x + p^k Z_p`.
///
/// The representative is `m / p^j` with `j = max(0, -v(x), -k)` and
/// `0 <= m < p^{k+j}`; it is `0` exactly when `v(x) >= k`.
pub fn coset_rep(x: &Rational, p: u64, k: i64) -> Rational {
    let v = vp_or_max(x, p);
    if v >= k {
        return Rational::zero();
    }
    let j = 0i64.max(-v).max(-k);
    let scaled = x * pow_p(p, j);
    let m = residue(&scaled, p, (k + j) as u32);
    Rational::new(m, pow_p_int(p, j as u32))
}

/// Whether `x ∈ c + p^k Z_p`.
pub fn in_coset(x: &Rational, c: &Rational, p: u64, k: i64) -> bool {
    vp_or_max(&(x - c), p) >= k
}

/// Legendre symbol of a p-adic unit (given as rational) modulo an odd prime.
pub fn legendre_unit(x: &Rational, p: u64) -> i8 {
    legendre(x.numer(), p) * legendre(x.denom(), p)
}

/// Legendre symbol `(a / p)` for an integer `a`.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    let a = a.mod_floor(&big(p)).to_u64().expect("residue below p");
    if a == 0 {
        return 0;
    }
    let (mut base, mut e, mut r) = (a as u128, (p - 1) / 2, 1u128);
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Smallest positive integer that is a quadratic nonresidue mod `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(&big(a), p) == -1).expect("odd prime has a nonresidue")
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Whether a rational is the square of a rational.
pub fn is_rational_square(x: &Rational) -> bool {
    if x.is_negative() {
        return false;
    }
    if x.is_zero() {
        return true;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    &(&n * &n) == x.numer() && &(&d * &d) == x.denom()
}

pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if !is_rational_square(x) {
        return None;
    }
    Some(Rational::new(x.numer().sqrt(), x.denom().sqrt()))
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

pub fn sign_of(x: &Rational) -> Sign {
    x.numer().sign()
}

/// Nonnegative integer divisors of `n` (`n != 0`), by trial division.
pub fn divisors(n: &BigInt) -> alloc::vec::Vec<BigInt> {
    let n = n.abs();
    let mut out = alloc::vec::Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(vp(&rat(1), 3), Some(0));
        assert_eq!(vp(&ratio(9, 2), 3), Some(2));
        assert_eq!(vp(&rat(0), 3), None);
        assert_eq!(vp(&ratio(5, 27), 3), Some(-3));
    }

    #[test]
    fn coset_representatives() {
        // 1/2 ≡ 2 mod 3
        assert_eq!(coset_rep(&ratio(1, 2), 3, 1), rat(2));
        assert_eq!(coset_rep(&ratio(1, 2), 3, 2), rat(5));
        assert_eq!(coset_rep(&rat(9), 3, 2), rat(0));
        // 1/3 + Z_3 has representative 1/3
        assert_eq!(coset_rep(&ratio(4, 3), 3, 0), ratio(1, 3));
        // coset of p^{-1} Z_p: anything in p^{-1}Z_p is zero
        assert_eq!(coset_rep(&ratio(4, 3), 3, -1), rat(0));
        assert_eq!(coset_rep(&ratio(1, 9), 3, -1), ratio(1, 9));
        let x = ratio(-7, 18);
        let r = coset_rep(&x, 3, 1);
        assert!(in_coset(&x, &r, 3, 1));
    }

    #[test]
    fn residues_and_symbols() {
        assert_eq!(residue(&ratio(1, 2), 5, 1), BigInt::from(3));
        assert_eq!(legendre(&BigInt::from(2), 3), -1);
        assert_eq!(legendre(&BigInt::from(4), 5), 1);
        assert_eq!(least_nonresidue(7), 3);
        assert!(is_odd_prime(7) && !is_odd_prime(9) && !is_odd_prime(2));
    }

    #[test]
    fn squares() {
        assert!(is_rational_square(&ratio(4, 9)));
        assert!(!is_rational_square(&rat(2)));
        assert_eq!(rational_sqrt(&ratio(25, 4)), Some(ratio(5, 2)));
    }
}
