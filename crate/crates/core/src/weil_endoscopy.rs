//! The trace form `X ↦ tr(X²)` on `u(W)`, its Weil index, and the sign
//! relating the two Hermitian spaces of a given dimension.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::cyclotomic::CycScalar;
use crate::integrals::weil::{weil_index, weil_index_diag};
use crate::linalg::{Field, RMatrix};
use crate::quadfield::Quad;
use crate::scalar::{LocalFieldSpec, SquareClass};
use crate::spaces::{EMatrix, HermitianSpace};
use crate::Error;

/// `⊕ a_i x_i²`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadFormDiag {
    pub coeffs: Vec<Rational>,
    pub tag: String,
}

impl QuadFormDiag {
    pub fn new(coeffs: Vec<Rational>, tag: &str) -> Result<Self, Error> {
        if coeffs.iter().any(|c| c.is_zero()) {
            return Err(Error::DegeneratePairing);
        }
        Ok(QuadFormDiag { coeffs, tag: tag.into() })
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(o.coeffs.iter().cloned());
        QuadFormDiag { coeffs, tag: alloc::format!("{} + {}", self.tag, o.tag) }
    }

    pub fn weil_index(&self, spec: &LocalFieldSpec) -> Result<CycScalar, Error> {
        weil_index_diag(&self.coeffs, spec)
    }

    pub fn discriminant(&self) -> Rational {
        self.coeffs.iter().fold(Rational::one(), |a, b| a * b)
    }
}

/// An `F`-basis of `u(W) = {X : conj(X)ᵗ H = H X}`.
pub fn lie_algebra_basis(w: &HermitianSpace) -> Vec<EMatrix> {
    let n = w.n();
    let d = w.gram.data[0].d.clone();
    let zero = Quad::from_base(Rational::zero(), &d);
    // Coordinates: X_{ij} = c_{2(in+j)} + c_{2(in+j)+1} √d.
    let unit = |k: usize| -> EMatrix {
        let mut m = EMatrix::zeros_like(n, n, &zero);
        let (ij, im) = (k / 2, k % 2);
        m.data[ij] = if im == 0 { Quad::from_base(Rational::one(), &d) } else { Quad::sqrt_d(&d) };
        m
    };
    let defect = |x: &EMatrix| -> Vec<Rational> {
        let lhs = x.transpose().map(|c| c.conj()).mul(&w.gram);
        let rhs = w.gram.mul(x);
        lhs.sub(&rhs).data.iter().flat_map(|c| [c.a.clone(), c.b.clone()]).collect()
    };
    let dim = 2 * n * n;
    let cols: Vec<Vec<Rational>> = (0..dim).map(|k| defect(&unit(k))).collect();
    let map = RMatrix::from_cols(&cols);
    map.nullspace()
        .into_iter()
        .map(|v| {
            let mut m = EMatrix::zeros_like(n, n, &zero);
            for (k, c) in v.iter().enumerate() {
                m = m.add(&unit(k).scale(&Quad::from_base(c.clone(), &d)));
            }
            m
        })
        .collect()
}

/// Gram matrix of `(X, Y) ↦ tr(XY)` on [`lie_algebra_basis`].
pub fn trace_gram(w: &HermitianSpace) -> Result<RMatrix, Error> {
    let basis = lie_algebra_basis(w);
    let k = basis.len();
    let mut g = RMatrix::filled(k, k, Rational::zero());
    for i in 0..k {
        for j in 0..k {
            let t = basis[i].mul(&basis[j]).trace();
            if !t.is_base() {
                return Err(Error::Precondition("tr(XY) outside F".into()));
            }
            g[(i, j)] = t.a;
        }
    }
    Ok(g)
}

/// Diagonal entries of a congruence diagonalization `Pᵗ G P`.
pub fn diagonalize_symmetric(g: &RMatrix) -> Result<Vec<Rational>, Error> {
    let mut g = g.clone();
    let n = g.rows;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if g[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !g[(j, j)].is_zero()) {
                swap_basis(&mut g, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !g[(k, j)].is_zero()) {
                // e_k ← e_k + e_j makes the pivot 2 g_kj.
                for i in 0..n {
                    let v = &g[(i, k)] + &g[(i, j)];
                    g[(i, k)] = v;
                }
                for i in 0..n {
                    let v = &g[(k, i)] + &g[(j, i)];
                    g[(k, i)] = v;
                }
            } else {
                return Err(Error::DegeneratePairing);
            }
        }
        let piv = g[(k, k)].clone();
        for j in k + 1..n {
            let f = &g[(k, j)] / &piv;
            for i in 0..n {
                let v = &g[(i, j)] - &f * &g[(i, k)];
                g[(i, j)] = v;
            }
            for i in 0..n {
                let v = &g[(j, i)] - &f * &g[(k, i)];
                g[(j, i)] = v;
            }
        }
        out.push(piv);
    }
    Ok(out)
}

fn swap_basis(g: &mut RMatrix, a: usize, b: usize) {
    let n = g.rows;
    for i in 0..n {
        let t = g[(i, a)].clone();
        g[(i, a)] = g[(i, b)].clone();
        g[(i, b)] = t;
    }
    for i in 0..n {
        let t = g[(a, i)].clone();
        g[(a, i)] = g[(b, i)].clone();
        g[(b, i)] = t;
    }
}

/// `tr(X²)` on `u(W)` as a diagonal form; the Gram matrix of `W` must be
/// diagonal.
pub fn diagonalize_trace_form(w: &HermitianSpace) -> Result<QuadFormDiag, Error> {
    let n = w.n();
    for i in 0..n {
        for j in 0..n {
            if i != j && !w.gram[(i, j)].vanishes() {
                return Err(Error::Precondition("diagonalize the Hermitian form first".into()));
            }
        }
    }
    let diag = diagonalize_symmetric(&trace_gram(w)?)?;
    QuadFormDiag::new(diag, &alloc::format!("u(W), dim W = {}", n))
}

/// Both sides of `γ_a γ_{−xa} = γ_1 γ_{−x}` with `E = F(√x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct A1Row {
    pub a: Rational,
    pub chi_a: i8,
    pub lhs: CycScalar,
    pub rhs: CycScalar,
    pub ratio: CycScalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignReport {
    pub rows: Vec<A1Row>,
    /// `lhs / rhs` on non-norm `a`.
    pub discrepancy: Option<CycScalar>,
    /// `(n, γ(q_{W_1}) / γ(q_{W_0}))` computed from the trace forms.
    pub c_by_n: Vec<(usize, CycScalar)>,
    /// `(λ, γ(q_W))` for `W = diag(1, λ)` over square classes `λ`.
    pub lambda_table: Vec<(Rational, CycScalar)>,
    pub holds: bool,
}

pub fn square_class_reps(spec: &LocalFieldSpec) -> Vec<Rational> {
    SquareClass::ALL.iter().map(|c| spec.class_rep(*c)).collect()
}

pub fn sign_of_n(n: usize) -> CycScalar {
    if n % 2 == 1 {
        CycScalar::one()
    } else {
        CycScalar::from_int(-1)
    }
}

/// Evaluates (A1) over all square classes, the ratio of trace-form Weil
/// indices for `dim W ≤ max_n`, and its dependence on `λ` at `dim W = 2`.
pub fn verify_sign_identity(spec: &LocalFieldSpec, max_n: usize) -> Result<SignReport, Error> {
    let x = spec.tau.clone();
    let g1 = weil_index(&Rational::one(), spec)?;
    let rhs = &g1 * &weil_index(&-x.clone(), spec)?;
    let mut rows = Vec::new();
    let mut discrepancy: Option<CycScalar> = None;
    let mut holds = true;
    for a in square_class_reps(spec) {
        let lhs = &weil_index(&a, spec)? * &weil_index(&(-(&x * &a)), spec)?;
        let ratio = &lhs * &rhs.inv().ok_or(Error::ZeroInput)?;
        let chi_a = spec.chi(&a);
        let want = CycScalar::from_int(chi_a as i64);
        holds &= ratio == want;
        if chi_a == -1 {
            match &discrepancy {
                None => discrepancy = Some(ratio.clone()),
                Some(d) => holds &= *d == ratio,
            }
        }
        rows.push(A1Row { a, chi_a, lhs, rhs: rhs.clone(), ratio });
    }
    let mut c_by_n = Vec::new();
    for n in 1..=max_n {
        let q0 = diagonalize_trace_form(&HermitianSpace::with_class(spec, n, 0))?;
        let q1 = diagonalize_trace_form(&HermitianSpace::with_class(spec, n, 1))?;
        let c = &q1.weil_index(spec)? * &q0.weil_index(spec)?.inv().ok_or(Error::ZeroInput)?;
        holds &= c == sign_of_n(n);
        c_by_n.push((n, c));
    }
    let mut lambda_table = Vec::new();
    for l in square_class_reps(spec) {
        let w = HermitianSpace::diagonal(spec, &[Rational::one(), l.clone()])?;
        lambda_table.push((l, diagonalize_trace_form(&w)?.weil_index(spec)?));
    }
    Ok(SignReport { rows, discrepancy, c_by_n, lambda_table, holds })
}

/// `γ_{−a} = γ_a^{−1}` and `γ_a γ_b = γ_1 γ_{ab} (a, b)` over all pairs of
/// square classes; returns the number of failures.
pub fn weil_hilbert_identities(spec: &LocalFieldSpec) -> Result<usize, Error> {
    let reps = square_class_reps(spec);
    let g1 = weil_index(&Rational::one(), spec)?;
    let mut bad = 0;
    for a in &reps {
        let ga = weil_index(a, spec)?;
        if weil_index(&-a.clone(), spec)? != ga.inv().ok_or(Error::ZeroInput)? {
            bad += 1;
        }
        for b in &reps {
            let lhs = &ga * &weil_index(b, spec)?;
            let h = spec.hilbert_symbol(a, b)?;
            let rhs = (&g1 * &weil_index(&(a * b), spec)?).scale(&Rational::from_integer((h as i64).into()));
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

/// `ω(γ, v, v*)` against `χ((−1)^{n_1 n_2} D(γ)) ω(γ_1, v_1, v*_1) ω(γ_2, v_2, v*_2)`
/// for block data, `Ω` ordered block 1 then block 2. The Krylov determinant
/// of `v_1 ⊕ v_2` picks up `Res(p_2, p_1) = (−1)^{n_1 n_2} D`.
pub fn transfer_factor_blocks(
    spec: &LocalFieldSpec,
    b1: &crate::spaces::GlTriple,
    b2: &crate::spaces::GlTriple,
) -> Result<(i8, i8), Error> {
    let n1 = b1.n();
    let n2 = b2.n();
    let n = n1 + n2;
    let mut x = RMatrix::filled(n, n, Rational::zero());
    for i in 0..n1 {
        for j in 0..n1 {
            x[(i, j)] = b1.x[(i, j)].clone();
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            x[(n1 + i, n1 + j)] = b2.x[(i, j)].clone();
        }
    }
    let mut v = b1.v.clone();
    v.extend(b2.v.iter().cloned());
    let mut vs = b1.vstar.clone();
    vs.extend(b2.vstar.iter().cloned());
    let whole = crate::spaces::GlTriple::new(x, v, vs)?;
    let lhs = crate::spaces::omega(spec, &whole)?;
    let d = crate::spaces::d_of_polys(&b1.x.charpoly(), &b2.x.charpoly())?;
    let d = if (n1 * n2) % 2 == 1 { -d } else { d };
    let rhs = spec.chi(&d) * crate::spaces::omega(spec, b1)? * crate::spaces::omega(spec, b2)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::arith::rat;

    #[test]
    fn rank_two_trace_form() {
        let spec = LocalFieldSpec::unramified(3);
        let w = HermitianSpace::diagonal(&spec, &[rat(1), rat(1)]).unwrap();
        assert_eq!(lie_algebra_basis(&w).len(), 4);
        let q = diagonalize_trace_form(&w).unwrap();
        assert_eq!(q.coeffs.len(), 4);
        let g = trace_gram(&w).unwrap();
        assert_eq!(q.discriminant() / g.det(), rat(1));
    }

    #[test]
    fn sign_identity() {
        for p in [3, 5, 7] {
            for spec in [LocalFieldSpec::unramified(p), LocalFieldSpec::ramified(p)] {
                let r = verify_sign_identity(&spec, 3).unwrap();
                assert!(r.holds, "{:?}", r);
                assert_eq!(r.discrepancy, Some(CycScalar::from_int(-1)));
                assert_eq!(weil_hilbert_identities(&spec).unwrap(), 0);
            }
        }
    }

    #[test]
    fn omega_block_identity() {
        let spec = LocalFieldSpec::unramified(5);
        let b1 = crate::spaces::GlTriple::new(crate::linalg::rmat(&[&[2]]), vec![rat(3)], vec![rat(1)]).unwrap();
        let b2 = crate::spaces::GlTriple::new(crate::linalg::rmat(&[&[7]]), vec![rat(2)], vec![rat(1)]).unwrap();
        let (l, r) = transfer_factor_blocks(&spec, &b1, &b2).unwrap();
        assert_eq!(l, r);
        // χ(−1) = −1 here; det[v | γv] = 3·2·(7 − 2)
        let spec = LocalFieldSpec::ramified(3);
        assert_eq!(spec.chi(&rat(-1)), -1);
        let (l, r) = transfer_factor_blocks(&spec, &b1, &b2).unwrap();
        assert_eq!(l, spec.chi(&rat(30)));
        assert_eq!(l, r);
    }
}
