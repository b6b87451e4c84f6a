//! Univariate polynomials over `Q`, coefficients stored low to high.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{divisors, Rational};
use crate::linalg::RMatrix;

pub type Poly = Vec<Rational>;

pub fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    if p.is_empty() {
        p.push(Rational::zero());
    }
    p
}

pub fn degree(p: &[Rational]) -> Option<usize> {
    let p = trim(p.to_vec());
    if p.len() == 1 && p[0].is_zero() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn mul(a: &[Rational], b: &[Rational]) -> Poly {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    trim(out)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Poly {
    let nb: Poly = b.iter().map(|x| -x).collect();
    add(a, &nb)
}

pub fn scale(a: &[Rational], s: &Rational) -> Poly {
    trim(a.iter().map(|x| x * s).collect())
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &[Rational]) -> Poly {
    if p.len() <= 1 {
        return vec![Rational::zero()];
    }
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
}

pub fn divrem(a: &[Rational], b: &[Rational]) -> (Poly, Poly) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by zero polynomial");
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else {
        return (vec![Rational::zero()], r);
    };
    if da < db {
        return (vec![Rational::zero()], r);
    }
    let lead_inv = b[db].recip();
    let mut q = vec![Rational::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = &r[i + db] * &lead_inv;
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] -= &c * y;
            }
        }
        q[i] = c;
    }
    (trim(q), trim(r))
}

pub fn monic(p: &[Rational]) -> Poly {
    let p = trim(p.to_vec());
    let l = p.last().unwrap().recip();
    scale(&p, &l)
}

pub fn gcd(a: &[Rational], b: &[Rational]) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while degree(&y).is_some() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    if degree(&x).is_none() {
        return x;
    }
    monic(&x)
}

pub fn is_squarefree(p: &[Rational]) -> bool {
    degree(&gcd(p, &derivative(p))) == Some(0)
}

/// Sylvester-matrix resultant `Res(a, b)`.
pub fn resultant(a: &[Rational], b: &[Rational]) -> Rational {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m + n == 0 {
        return Rational::one();
    }
    let mut s = RMatrix::filled(m + n, m + n, Rational::zero());
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            s[(i, i + j)] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            s[(n + i, i + j)] = c.clone();
        }
    }
    s.det()
}

pub fn from_ints(c: &[i64]) -> Poly {
    trim(c.iter().map(|x| Rational::from_integer(BigInt::from(*x))).collect())
}

pub fn from_roots(roots: &[Rational]) -> Poly {
    let mut p: Poly = vec![Rational::one()];
    for r in roots {
        p = mul(&p, &[-r, Rational::one()]);
    }
    p
}

/// Factor a monic squarefree polynomial over `Q` into monic pieces of
/// degree one and two when possible; the remainder (degree ≥ 3, no such
/// factors found) is returned separately.
pub fn split_low_degree(p: &[Rational]) -> (Vec<Poly>, Option<Poly>) {
    let p = monic(p);
    let n = p.len() - 1;
    // x = y / L turns p into a monic integer polynomial.
    let mut l = BigInt::one();
    for c in &p {
        l = l.lcm(c.denom());
    }
    let lr = Rational::from_integer(l.clone());
    let mut q: Vec<BigInt> = Vec::with_capacity(n + 1);
    for (i, c) in p.iter().enumerate() {
        let f = num_traits::pow(lr.clone(), n - i);
        let v = c * f;
        debug_assert!(v.is_integer());
        q.push(v.to_integer());
    }
    let mut factors_y: Vec<Vec<BigInt>> = Vec::new();
    let mut rest = q;
    // integer roots
    loop {
        let deg = rest.len() - 1;
        if deg == 0 {
            break;
        }
        let c0 = rest[0].clone();
        let mut found = None;
        if c0.is_zero() {
            found = Some(BigInt::zero());
        } else {
            for d in divisors(&c0) {
                for r in [d.clone(), -d] {
                    if eval_int(&rest, &r).is_zero() {
                        found = Some(r);
                        break;
                    }
                }
                if found.is_some() {
                    break;
                }
            }
        }
        match found {
            Some(r) => {
                rest = synthetic_div(&rest, &r);
                factors_y.push(vec![-r, BigInt::one()]);
            }
            None => break,
        }
    }
    // monic integer quadratic factors
    loop {
        let deg = rest.len() - 1;
        if deg <= 2 {
            if deg == 2 {
                factors_y.push(rest.clone());
                rest = vec![BigInt::one()];
            }
            break;
        }
        let Some(fq) = find_quadratic(&rest) else { break };
        rest = int_div_monic(&rest, &fq);
        factors_y.push(fq);
    }
    let back = |f: &Vec<BigInt>| -> Poly {
        let d = f.len() - 1;
        f.iter()
            .enumerate()
            .map(|(i, c)| Rational::from_integer(c.clone()) / num_traits::pow(lr.clone(), d - i))
            .collect()
    };
    let factors = factors_y.iter().map(back).collect();
    let remainder = if rest.len() > 1 { Some(back(&rest)) } else { None };
    (factors, remainder)
}

fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn synthetic_div(p: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let n = p.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + carry * r;
        q[i] = carry.clone();
    }
    q
}

fn int_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let lead = r[i + db].clone();
        for (j, y) in b.iter().enumerate() {
            r[i + j] -= &lead * y;
        }
        q[i] = lead;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

fn find_quadratic(p: &[BigInt]) -> Option<Vec<BigInt>> {
    let one = BigInt::one();
    let p1 = eval_int(p, &one);
    let pm1 = eval_int(p, &-one.clone());
    if p1.is_zero() || pm1.is_zero() || p[0].is_zero() {
        return None;
    }
    let d1 = divisors(&p1);
    let dm1 = divisors(&pm1);
    for c in divisors(&p[0]).into_iter().flat_map(|d| [d.clone(), -d]) {
        for e in d1.iter().flat_map(|d| [d.clone(), -d.clone()]) {
            // 1 + b + c = e
            let b = &e - &one - &c;
            let at_m1 = &one - &b + &c;
            if at_m1.is_zero() || !dm1.contains(&at_m1.abs()) {
                continue;
            }
            let f = vec![c.clone(), b, one.clone()];
            let (_, r) = divrem(&to_rat(p), &to_rat(&f));
            if degree(&r).is_none() {
                return Some(f);
            }
        }
    }
    None
}

fn to_rat(p: &[BigInt]) -> Poly {
    p.iter().map(|c| Rational::from_integer(c.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn division_and_gcd() {
        let a = from_ints(&[-1, 0, 1]);
        let b = from_ints(&[-1, 1]);
        let (q, r) = divrem(&a, &b);
        assert_eq!(q, from_ints(&[1, 1]));
        assert!(degree(&r).is_none());
        assert_eq!(gcd(&a, &from_ints(&[1, 1])), from_ints(&[1, 1]));
        assert!(is_squarefree(&a));
        assert!(!is_squarefree(&from_ints(&[1, 2, 1])));
    }

    #[test]
    fn resultant_is_root_product() {
        let a = from_roots(&[rat(1), rat(2)]);
        let b = from_roots(&[rat(5), ratio(1, 2)]);
        let mut want = rat(1);
        for x in [rat(1), rat(2)] {
            for y in [rat(5), ratio(1, 2)] {
                want *= &x - &y;
            }
        }
        assert_eq!(resultant(&a, &b), want);
        assert_eq!(resultant(&from_ints(&[-3, 1]), &from_ints(&[-7, 1])), rat(-4));
    }

    #[test]
    fn low_degree_splitting() {
        // (x - 1/2)(x^2 - 2)(x^2 + x + 3)
        let p = mul(&mul(&[ratio(-1, 2), rat(1)], &from_ints(&[-2, 0, 1])), &from_ints(&[3, 1, 1]));
        let (f, rest) = split_low_degree(&p);
        assert!(rest.is_none());
        assert_eq!(f.len(), 3);
        let prod = f.iter().fold(alloc::vec![rat(1)], |acc, g| mul(&acc, g));
        assert_eq!(prod, monic(&p));
        let (_, rest) = split_low_degree(&from_ints(&[-2, 0, 0, 1]));
        assert!(rest.is_some());
    }
}
