//! Unit vectors of a given sde over `Z[xi][1/chi]` via integral quadratic forms.
//!
//! Writing `w = sum a_j xi^j`, the norm `|w|^2 = q0(a) + q1(a) tau + q2(a) tau^2`
//! in the basis `1, tau, tau^2` (`tau = xi + xi^-1`). A unit vector
//! `(w1, w2, w3) / chi^f` needs `sum_i (q0, q1, q2)(w_i) = (A, B, C)`, the
//! coordinates of `|chi|^(2f)`. The combination `q = q0 + 2 q2` is a sum of
//! three Eisenstein norms `u^2 + v^2 - uv`, so it bounds the search.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gates::{sqrt_minus3, GateSym};
use crate::loc::{div_chi_pow, signed_root_exponent, LocElem, LocMatrix, LocVector};
use crate::ring::{CycInt, RingSpec};

pub type Tuple6 = [i64; 6];

/// `(q0, q1, q2)` with `alpha_k = sum_{j - i = k} a_i a_j`.
pub fn quad_forms(a: &Tuple6) -> (i64, i64, i64) {
    let mut al = [0i64; 6];
    for i in 0..6 {
        for j in i..6 {
            al[j - i] += a[i] * a[j];
        }
    }
    (
        al[0] - 2 * al[2] - al[3] + 2 * al[4] + 2 * al[5],
        al[1] - al[4] - al[5],
        al[2] - al[4] - al[5],
    )
}

/// `q0 + 2 q2 = sum over blocks (a_i^2 + a_{i+3}^2 - a_i a_{i+3})`.
pub fn trace_form(a: &Tuple6) -> i64 {
    (0..3).map(|i| a[i] * a[i] + a[i + 3] * a[i + 3] - a[i] * a[i + 3]).sum()
}

/// All integer pairs with `u^2 + v^2 - uv = m`.
pub fn eisenstein_reps(m: u64) -> Vec<(i64, i64)> {
    let bound = (2.0 * (m as f64 / 3.0).sqrt()).ceil() as i64 + 1;
    let m = m as i64;
    let mut out = Vec::new();
    for u in -bound..=bound {
        for v in -bound..=bound {
            if u * u + v * v - u * v == m {
                out.push((u, v));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Right-hand side `|chi|^(2f) = (2 - tau)^f`.
    Exact,
    /// Right-hand side `3^r (2 - tau)^s` with `f = 3r + s`.
    Rescaled,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Rescaled => "rescaled",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadTarget {
    pub f: u32,
    pub mode: Mode,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    /// `A + 2C`, the value the trace form must reach.
    pub n: i64,
}

impl QuadTarget {
    pub fn new(f: u32, mode: Mode) -> Self {
        let (r, s) = match mode {
            Mode::Exact => (0, f),
            Mode::Rescaled => (f / 3, f % 3),
        };
        let (mut a, mut b, mut c) = (1i64, 0i64, 0i64);
        for _ in 0..s {
            // times (2 - tau), with tau^3 = 3 tau - 1
            (a, b, c) = (2 * a + c, 2 * b - a - 3 * c, 2 * c - b);
        }
        let scale = 3i64.pow(r);
        let (a, b, c) = (a * scale, b * scale, c * scale);
        QuadTarget { f, mode, a, b, c, n: a + 2 * c }
    }

    fn embedded(&self) -> [f64; 3] {
        embed(self.a, self.b, self.c)
    }
}

/// `x = A + B tau + C tau^2` under the three real embeddings `tau -> 2cos(2 pi k / 9)`.
fn embed(a: i64, b: i64, c: i64) -> [f64; 3] {
    [1.0, 2.0, 4.0].map(|k: f64| {
        let t = 2.0 * (2.0 * std::f64::consts::PI * k / 9.0).cos();
        a as f64 + b as f64 * t + c as f64 * t * t
    })
}

const EMBED_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormSolution {
    pub w: [Tuple6; 3],
}

impl FormSolution {
    pub fn elements(&self) -> [CycInt; 3] {
        self.w.map(|a| CycInt::from_coeffs(RingSpec::N9, a))
    }
}

/// Every 6-tuple with trace form at most `n`.
fn tuples_up_to(n: i64) -> Vec<Tuple6> {
    let reps: Vec<Vec<(i64, i64)>> = (0..=n.max(0) as u64).map(eisenstein_reps).collect();
    let mut out = Vec::new();
    for m0 in 0..=n {
        for m1 in 0..=n - m0 {
            for m2 in 0..=n - m0 - m1 {
                for &(a0, a3) in &reps[m0 as usize] {
                    for &(a1, a4) in &reps[m1 as usize] {
                        for &(a2, a5) in &reps[m2 as usize] {
                            out.push([a0, a1, a2, a3, a4, a5]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// All coefficient triples solving the three form equations for `target`.
///
/// For `f >= 1` each `w_i` must be chi-coprime (`sum a_j != 0 mod 3`), as
/// required of numerators of a vector whose sde is exactly `f`.
pub fn enumerate_solutions(target: &QuadTarget) -> Vec<FormSolution> {
    let bound = target.embedded();
    let cands: Vec<(Tuple6, (i64, i64, i64))> = tuples_up_to(target.n)
        .into_iter()
        .filter(|a| target.f == 0 || a.iter().sum::<i64>().rem_euclid(3) != 0)
        .filter_map(|a| {
            let q = quad_forms(&a);
            let e = embed(q.0, q.1, q.2);
            (0..3).all(|k| e[k] <= bound[k] + EMBED_TOL).then_some((a, q))
        })
        .collect();
    let mut by_form: HashMap<(i64, i64, i64), Vec<Tuple6>> = HashMap::new();
    for (a, q) in &cands {
        by_form.entry(*q).or_default().push(*a);
    }
    let mut sols: Vec<FormSolution> = cands
        .par_iter()
        .flat_map_iter(|(a, qa)| {
            let mut local = Vec::new();
            for (b, qb) in &cands {
                let rem = (target.a - qa.0 - qb.0, target.b - qa.1 - qb.1, target.c - qa.2 - qb.2);
                if let Some(cs) = by_form.get(&rem) {
                    for c in cs {
                        local.push(FormSolution { w: [*a, *b, *c] });
                    }
                }
            }
            local
        })
        .collect();
    sols.sort();
    sols
}

/// `lambda = chi^3 / sqrt(-3)`, a unit of `Z[xi]`.
pub fn rescale_unit() -> CycInt {
    let s = RingSpec::N9;
    let num = -(&sqrt_minus3(s) * CycInt::p_unit_inv(s));
    div_chi_pow(&num, 3).expect("sqrt(-3) u^-1 is divisible by chi^3")
}

/// The vector a form solution stands for: `w / chi^f` in exact mode. In
/// rescaled mode `w / (sqrt(-3)^r chi^s)`, which is `lambda^r w / chi^f`.
pub fn solution_vector(sol: &FormSolution, target: &QuadTarget) -> LocVector {
    let s = RingSpec::N9;
    let mut scale = CycInt::one(s);
    if target.mode == Mode::Rescaled {
        scale = rescale_unit().pow(target.f / 3);
    }
    let entries = sol.elements().iter().map(|w| w * &scale).collect();
    LocVector::new(s, entries, target.f).expect("same ring")
}

/// Unit vectors of sde `f`, in lexicographic order of their coefficient triples.
///
/// Exact mode additionally checks the exact norm identity for every solution.
pub fn enumerate_unit_vectors(f: u32, mode: Mode) -> Result<Vec<LocVector>> {
    let target = QuadTarget::new(f, mode);
    let sols = enumerate_solutions(&target);
    sols.iter()
        .map(|s| {
            let v = solution_vector(s, &target);
            if mode == Mode::Exact && !(v.is_unit_vector() && v.sde() == f) {
                return Err(Error::Inconsistent(format!("form solution {:?} is not a unit vector of sde {f}", s.w)));
            }
            Ok(v)
        })
        .collect()
}

/// `sqrt(-3) z` as exponents of 18th roots of unity, if every entry is `+-xi^e`.
fn root18_shape(z: &LocVector) -> Result<[u32; 3]> {
    if z.spec() != RingSpec::N9 || z.dim() != 3 {
        return Err(Error::Precondition("expected a qutrit vector over Z[xi]".into()));
    }
    let y = z.scale(&LocElem::integral(sqrt_minus3(RingSpec::N9)))?;
    if y.sde() != 0 {
        return Err(Error::Precondition("vector is not of monomial sde-3 shape".into()));
    }
    let mut out = [0u32; 3];
    for (i, w) in y.entries().iter().enumerate() {
        let (e, s) = signed_root_exponent(w)
            .ok_or_else(|| Error::Precondition("vector is not of monomial sde-3 shape".into()))?;
        out[i] = (2 * e + if s < 0 { 9 } else { 0 }) % 18;
    }
    Ok(out)
}

/// Orthogonality of two vectors `(+-xi^a, +-xi^b, +-xi^c) / sqrt(-3)`.
///
/// With relative exponent shifts `p`, `q` of the second and third entries,
/// the inner product vanishes iff the relative signs agree and
/// `(p, q) = (3, 6)` or `(6, 3)` mod 9. This is checked against the exact
/// inner product.
pub fn check_orthogonal_sde3(z1: &LocVector, z2: &LocVector) -> Result<bool> {
    let e1 = root18_shape(z1)?;
    let e2 = root18_shape(z2)?;
    let d: Vec<u32> = (0..3).map(|i| (e2[i] + 18 - e1[i]) % 18).collect();
    let rel = [(d[1] + 18 - d[0]) % 18, (d[2] + 18 - d[0]) % 18];
    let by_rule = rel[0].is_multiple_of(2) && rel[1].is_multiple_of(2) && {
        let (p, q) = (rel[0] / 2 % 9, rel[1] / 2 % 9);
        (p, q) == (3, 6) || (p, q) == (6, 3)
    };
    let exact = z1.inner(z2)?.is_zero();
    if by_rule != exact {
        return Err(Error::Inconsistent("exponent rule and inner product disagree".into()));
    }
    Ok(exact)
}

/// `M P = D1 H D2` with diagonal sde-0 gates and a column permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sde3Factorization {
    pub d1: GateSym,
    pub d2: GateSym,
    /// Column `j` of `M P` is column `perm[j]` of `M`.
    pub perm: Vec<usize>,
}

fn d_gate(entries: &[CycInt]) -> Option<GateSym> {
    let mut exps = [0u8; 3];
    let mut neg = [false; 3];
    for (i, w) in entries.iter().enumerate() {
        let (e, s) = signed_root_exponent(w)?;
        exps[i] = e as u8;
        neg[i] = s < 0;
    }
    Some(GateSym::D { exps, neg })
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

pub fn factor_sde3_unitary(m: &LocMatrix) -> Result<Sde3Factorization> {
    use crate::gates::{word_to_matrix, GateWord, Regime};
    let spec = RingSpec::N9;
    if m.spec() != spec || m.dim() != 3 {
        return Err(Error::Precondition("expected a 3x3 matrix over Z[xi]".into()));
    }
    if !m.is_unitary() {
        return Err(Error::NotUnitary);
    }
    if m.sde() != 3 {
        return Err(Error::NotSde3Form);
    }
    let root3 = sqrt_minus3(spec);
    // E = sqrt(-3) M, integral when M has the expected shape
    let e = LocMatrix::new(
        spec,
        m.rows().iter().map(|r| r.iter().map(|x| x * &root3).collect()).collect(),
        m.denom_exp(),
    )?;
    if e.sde() != 0 {
        return Err(Error::NotSde3Form);
    }
    for perm in PERMS3 {
        let col = |j: usize| perm[j];
        let first: Vec<CycInt> = (0..3).map(|i| e.rows()[i][col(0)].clone()).collect();
        let Some(d1) = d_gate(&first) else { continue };
        // d2_j = E[0][perm j] / E[0][perm 0]; the divisor is a signed root, so multiply by its inverse
        let Some((e0, s0)) = signed_root_exponent(&e.rows()[0][col(0)]) else { continue };
        let inv0 = {
            let z = CycInt::zeta_pow(spec, -(e0 as i64));
            if s0 < 0 {
                -z
            } else {
                z
            }
        };
        let second: Vec<CycInt> = (0..3).map(|j| &e.rows()[0][col(j)] * &inv0).collect();
        let Some(d2) = d_gate(&second) else { continue };
        let w = GateWord { regime: Regime::QutritD9, syms: vec![d1.clone(), GateSym::H, d2.clone()] };
        let lhs = permute_columns(m, &perm)?;
        if word_to_matrix(&w)? == lhs {
            return Ok(Sde3Factorization { d1, d2, perm: perm.to_vec() });
        }
    }
    Err(Error::NotSde3Form)
}

/// `M P`: column `j` of the result is column `perm[j]` of `M`.
pub fn permute_columns(m: &LocMatrix, perm: &[usize]) -> Result<LocMatrix> {
    let rows = m.rows().iter().map(|r| perm.iter().map(|&j| r[j].clone()).collect()).collect();
    LocMatrix::new(m.spec(), rows, m.denom_exp())
}

/// Small-integer view of a coefficient list (used by reports and tests).
pub fn to_tuple6(w: &CycInt) -> Option<Tuple6> {
    let c = w.coeffs();
    if c.len() != 6 {
        return None;
    }
    let mut out = [0i64; 6];
    for (o, v) in out.iter_mut().zip(c) {
        *o = v.to_i64()?;
    }
    Some(out)
}

/// Whether `z` is `(+-xi^a)` in one slot and zero elsewhere.
pub fn is_monomial_vector(z: &LocVector) -> bool {
    z.sde() == 0
        && z.entries().iter().filter(|w| !w.is_zero()).count() == 1
        && z.entries().iter().filter(|w| !w.is_zero()).all(|w| signed_root_exponent(w).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{parse_word, word_to_matrix, Regime};
    use crate::loc::to_real_tau_basis;
    use crate::taylor::gde;
    use num_bigint::BigInt;

    #[test]
    fn forms_examples() {
        assert_eq!(quad_forms(&[1, 0, 0, 0, 0, 0]), (1, 0, 0));
        assert_eq!(trace_form(&[1, 0, 0, 1, 0, 0]), 1);
        let a = [1, 1, 1, 0, 0, 0];
        let (q0, q1, q2) = quad_forms(&a);
        let w = CycInt::from_coeffs(RingSpec::N9, a);
        let (x, y, z) = to_real_tau_basis(&w.abs_sq()).unwrap();
        assert_eq!((BigInt::from(q0), BigInt::from(q1), BigInt::from(q2)), (x, y, z));
    }

    #[test]
    fn eisenstein_small() {
        assert_eq!(eisenstein_reps(0), vec![(0, 0)]);
        let mut one = eisenstein_reps(1);
        one.sort();
        assert_eq!(one, vec![(-1, -1), (-1, 0), (0, -1), (0, 1), (1, 0), (1, 1)]);
        assert!(eisenstein_reps(2).is_empty());
        assert_eq!(eisenstein_reps(3).len(), 6);
        assert_eq!(eisenstein_reps(7).len(), 12);
    }

    #[test]
    fn targets() {
        let t = QuadTarget::new(3, Mode::Exact);
        assert_eq!((t.a, t.b, t.c, t.n), (9, -15, 6, 21));
        let t = QuadTarget::new(3, Mode::Rescaled);
        assert_eq!((t.a, t.b, t.c, t.n), (3, 0, 0, 3));
        let t = QuadTarget::new(5, Mode::Rescaled);
        assert_eq!((t.a, t.b, t.c), (12, -12, 3));
        for f in 0..5 {
            let t = QuadTarget::new(f, Mode::Exact);
            let x = CycInt::chi(RingSpec::N9).abs_sq().pow(f);
            let (a, b, c) = to_real_tau_basis(&x).unwrap();
            assert_eq!((BigInt::from(t.a), BigInt::from(t.b), BigInt::from(t.c)), (a, b, c));
        }
    }

    #[test]
    fn rescale_unit_norm() {
        let s = RingSpec::N9;
        let lam = rescale_unit();
        assert_eq!(gde(&lam).unwrap(), 0);
        // |lambda|^2 * 3 = |chi|^6
        assert_eq!(lam.abs_sq().scale(&BigInt::from(3)), CycInt::chi(s).abs_sq().pow(3));
    }

    #[test]
    fn sde0_census() {
        let v = enumerate_unit_vectors(0, Mode::Exact).unwrap();
        assert_eq!(v.len(), 54);
        assert!(v.iter().all(is_monomial_vector));
    }

    #[test]
    fn orthogonality_of_hadamard_columns() {
        let h = word_to_matrix(&parse_word("H", Regime::QutritD9).unwrap()).unwrap();
        assert!(check_orthogonal_sde3(&h.column(0), &h.column(1)).unwrap());
        assert!(!check_orthogonal_sde3(&h.column(0), &h.column(0)).unwrap());
        let bent = word_to_matrix(&parse_word("D[0,-0,0] H", Regime::QutritD9).unwrap()).unwrap();
        assert!(!check_orthogonal_sde3(&h.column(0), &bent.column(1)).unwrap());
        assert!(check_orthogonal_sde3(&LocVector::basis(RingSpec::N9, 3, 0), &h.column(0)).is_err());
    }

    #[test]
    fn factor_examples() {
        let h = word_to_matrix(&parse_word("H", Regime::QutritD9).unwrap()).unwrap();
        let f = factor_sde3_unitary(&h).unwrap();
        assert_eq!(f.perm, vec![0, 1, 2]);
        let m = word_to_matrix(&parse_word("D[1,2,3] H D[0,1,0]", Regime::QutritD9).unwrap()).unwrap();
        let f = factor_sde3_unitary(&m).unwrap();
        let w = crate::gates::GateWord { regime: Regime::QutritD9, syms: vec![f.d1, GateSym::H, f.d2] };
        assert_eq!(word_to_matrix(&w).unwrap(), permute_columns(&m, &f.perm).unwrap());
        assert_eq!(factor_sde3_unitary(&LocMatrix::identity(RingSpec::N9, 3)), Err(Error::NotSde3Form));
    }
}
