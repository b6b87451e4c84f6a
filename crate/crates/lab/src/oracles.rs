//! Brute-force checks that share no code with the core arithmetic.

/// `a^e mod m`.
fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    r
}

/// Whether the nonzero integer `c` is a square in `Q_p`: even valuation and
/// unit part a residue by Euler's criterion (Hensel lifts it for odd `p`).
pub fn is_padic_square(c: i64, p: u64) -> bool {
    if c == 0 {
        return false;
    }
    let mut c = c;
    let mut v = 0;
    while c % p as i64 == 0 {
        c /= p as i64;
        v += 1;
    }
    if v % 2 == 1 {
        return false;
    }
    let u = c.rem_euclid(p as i64) as u64;
    pow_mod(u, (p - 1) / 2, p) == 1
}

/// `(a, b)` for integers `a, b` by searching `a x² + b y²` for a nonzero
/// square with `0 ≤ x, y < p²`. An anisotropic form never takes a square
/// value there; an isotropic one is universal and hits one.
pub fn hilbert_brute(a: i64, b: i64, p: u64) -> i8 {
    let bound = (p * p) as i64;
    for x in 0..bound {
        for y in 0..bound {
            if (x, y) == (0, 0) {
                continue;
            }
            if is_padic_square(a * x * x + b * y * y, p) {
                return 1;
            }
        }
    }
    -1
}

/// `Σ_{y mod p} e^{2πi u y²/p}` as a complex number.
pub fn gauss_sum_numeric(u: i64, p: u64) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for y in 0..p as i64 {
        let t = 2.0 * std::f64::consts::PI * ((u * y * y).rem_euclid(p as i64) as f64) / p as f64;
        re += t.cos();
        im += t.sin();
    }
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares() {
        assert!(is_padic_square(4, 3));
        assert!(is_padic_square(9 * 7, 3));
        assert!(!is_padic_square(2, 3));
        assert!(!is_padic_square(3, 3));
    }

    #[test]
    fn classical_symbols() {
        assert_eq!(hilbert_brute(3, 3, 3), -1);
        assert_eq!(hilbert_brute(2, 3, 3), -1);
        assert_eq!(hilbert_brute(2, 2, 3), 1);
        assert_eq!(hilbert_brute(-1, 5, 5), 1);
    }

    #[test]
    fn gauss_sum_modulus() {
        for p in [3u64, 5, 7] {
            let (re, im) = gauss_sum_numeric(1, p);
            assert!((re * re + im * im - p as f64).abs() < 1e-9);
        }
    }
}
