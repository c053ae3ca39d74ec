//! Elements, vectors and matrices over the localization `R_n[1/chi]`.
//!
//! Every value is `numerator / chi^k`. Vectors and matrices share a single
//! exponent across all entries. Constructors always canonicalize, so the
//! derived equality is value equality and `denom_exp` is the sde.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::{CycInt, RingSpec};
use crate::taylor::gde;

/// Exact division by `chi^m`. Batches of `phi` use `a * u / p`.
pub fn div_chi_pow(a: &CycInt, m: u32) -> Result<CycInt> {
    let spec = a.spec();
    let phi = spec.phi() as u32;
    let p = BigInt::from(spec.p());
    let mut cur = a.clone();
    let mut left = m;
    while left >= phi {
        if cur.is_zero() {
            return Ok(cur);
        }
        let probe = &cur * CycInt::p_unit(spec);
        cur = probe.div_exact_int(&p).ok_or(Error::NotDivisible)?;
        left -= phi;
    }
    for _ in 0..left {
        cur = cur.try_div_chi()?;
    }
    Ok(cur)
}

/// `chi^m` (cached for small `m` would be premature; products are cheap).
pub fn chi_pow(spec: RingSpec, m: u32) -> CycInt {
    CycInt::chi(spec).pow(m)
}

/// `conj(chi)^k = (-zeta^-1)^k chi^k`, so `conj(a / chi^k) = conj(a) (-zeta)^k / chi^k`.
fn conj_numerator(a: &CycInt, k: u32) -> CycInt {
    let c = a.conj().mul_zeta_pow(k as i64);
    if k % 2 == 1 {
        -c
    } else {
        c
    }
}

/// Common chi-power that can be cancelled from a list of numerators, capped at `k`.
fn cancellable(nums: &[&CycInt], k: u32) -> u32 {
    let mut m = k;
    for a in nums {
        if m == 0 {
            break;
        }
        if !a.is_zero() {
            m = m.min(gde(a).expect("nonzero"));
        }
    }
    if nums.iter().all(|a| a.is_zero()) {
        k
    } else {
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocElem {
    num: CycInt,
    denom_exp: u32,
}

/// Canonical `num / chi^k`.
pub fn normalize(num: CycInt, k: u32) -> LocElem {
    LocElem::new(num, k)
}

impl LocElem {
    pub fn new(num: CycInt, k: u32) -> Self {
        if num.is_zero() {
            return LocElem { num, denom_exp: 0 };
        }
        let m = cancellable(&[&num], k);
        let num = div_chi_pow(&num, m).expect("cancellable power divides");
        LocElem { num, denom_exp: k - m }
    }

    pub fn integral(num: CycInt) -> Self {
        LocElem { num, denom_exp: 0 }
    }

    pub fn zero(spec: RingSpec) -> Self {
        Self::integral(CycInt::zero(spec))
    }

    pub fn one(spec: RingSpec) -> Self {
        Self::integral(CycInt::one(spec))
    }

    pub fn num(&self) -> &CycInt {
        &self.num
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn spec(&self) -> RingSpec {
        self.num.spec()
    }

    pub fn sde(&self) -> u32 {
        self.denom_exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numerator rewritten over `chi^k` for `k >= denom_exp`.
    pub fn num_at(&self, k: u32) -> CycInt {
        debug_assert!(k >= self.denom_exp);
        &self.num * &chi_pow(self.spec(), k - self.denom_exp)
    }

    pub fn add(&self, rhs: &LocElem) -> Result<LocElem> {
        self.spec().check_same(rhs.spec())?;
        let k = self.denom_exp.max(rhs.denom_exp);
        Ok(LocElem::new(self.num_at(k).checked_add(&rhs.num_at(k))?, k))
    }

    pub fn sub(&self, rhs: &LocElem) -> Result<LocElem> {
        self.spec().check_same(rhs.spec())?;
        let k = self.denom_exp.max(rhs.denom_exp);
        Ok(LocElem::new(self.num_at(k).checked_sub(&rhs.num_at(k))?, k))
    }

    pub fn mul(&self, rhs: &LocElem) -> Result<LocElem> {
        Ok(LocElem::new(self.num.checked_mul(&rhs.num)?, self.denom_exp + rhs.denom_exp))
    }

    pub fn neg(&self) -> LocElem {
        LocElem { num: -&self.num, denom_exp: self.denom_exp }
    }

    pub fn conj(&self) -> LocElem {
        LocElem { num: conj_numerator(&self.num, self.denom_exp), denom_exp: self.denom_exp }
    }
}

pub fn loc_add(a: &LocElem, b: &LocElem) -> Result<LocElem> {
    a.add(b)
}

pub fn loc_mul(a: &LocElem, b: &LocElem) -> Result<LocElem> {
    a.mul(b)
}

pub fn loc_conj(a: &LocElem) -> LocElem {
    a.conj()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocVector {
    spec: RingSpec,
    denom_exp: u32,
    entries: Vec<CycInt>,
}

impl LocVector {
    /// `(1/chi^k) * entries`, canonicalized.
    pub fn new(spec: RingSpec, entries: Vec<CycInt>, k: u32) -> Result<Self> {
        for e in &entries {
            spec.check_same(e.spec())?;
        }
        let refs: Vec<&CycInt> = entries.iter().collect();
        let m = cancellable(&refs, k);
        let entries = if m == 0 || entries.iter().all(CycInt::is_zero) {
            entries
        } else {
            entries.iter().map(|e| div_chi_pow(e, m)).collect::<Result<_>>()?
        };
        let denom_exp = if entries.iter().all(CycInt::is_zero) { 0 } else { k - m };
        Ok(LocVector { spec, denom_exp, entries })
    }

    /// Entries with their own exponents; padded to the largest.
    pub fn from_elems(spec: RingSpec, elems: &[LocElem]) -> Result<Self> {
        let k = elems.iter().map(LocElem::denom_exp).max().unwrap_or(0);
        for e in elems {
            spec.check_same(e.spec())?;
        }
        Self::new(spec, elems.iter().map(|e| e.num_at(k)).collect(), k)
    }

    /// Standard basis vector.
    pub fn basis(spec: RingSpec, dim: usize, i: usize) -> Self {
        let mut entries = vec![CycInt::zero(spec); dim];
        entries[i] = CycInt::one(spec);
        LocVector { spec, denom_exp: 0, entries }
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn sde(&self) -> u32 {
        self.denom_exp
    }

    /// Numerators over the shared `chi^denom_exp`.
    pub fn entries(&self) -> &[CycInt] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> LocElem {
        LocElem::new(self.entries[i].clone(), self.denom_exp)
    }

    /// `sum_i conj(a_i) b_i`.
    pub fn inner(&self, other: &LocVector) -> Result<LocElem> {
        self.spec.check_same(other.spec)?;
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { left: self.dim(), right: other.dim() });
        }
        let mut acc = CycInt::zero(self.spec);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc = &acc + &(&conj_numerator(a, self.denom_exp) * b);
        }
        Ok(LocElem::new(acc, self.denom_exp + other.denom_exp))
    }

    /// Exact test of `sum |w_i|^2 = |chi|^(2f)`.
    pub fn is_unit_vector(&self) -> bool {
        let mut acc = CycInt::zero(self.spec);
        for w in &self.entries {
            acc = &acc + &w.abs_sq();
        }
        acc == CycInt::chi(self.spec).abs_sq().pow(self.denom_exp)
    }

    pub fn scale(&self, s: &LocElem) -> Result<LocVector> {
        self.spec.check_same(s.spec())?;
        LocVector::new(
            self.spec,
            self.entries.iter().map(|e| e * s.num()).collect(),
            self.denom_exp + s.denom_exp(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocMatrix {
    spec: RingSpec,
    denom_exp: u32,
    rows: Vec<Vec<CycInt>>,
}

impl LocMatrix {
    /// `(1/chi^k) * rows`, canonicalized. Rows must form a square grid.
    pub fn new(spec: RingSpec, rows: Vec<Vec<CycInt>>, k: u32) -> Result<Self> {
        let dim = rows.len();
        for r in &rows {
            if r.len() != dim {
                return Err(Error::DimMismatch { left: dim, right: r.len() });
            }
            for e in r {
                spec.check_same(e.spec())?;
            }
        }
        let refs: Vec<&CycInt> = rows.iter().flatten().collect();
        let all_zero = refs.iter().all(|e| e.is_zero());
        let m = cancellable(&refs, k);
        let rows = if m == 0 || all_zero {
            rows
        } else {
            rows.iter()
                .map(|r| r.iter().map(|e| div_chi_pow(e, m)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?
        };
        let denom_exp = if all_zero { 0 } else { k - m };
        Ok(LocMatrix { spec, denom_exp, rows })
    }

    pub fn from_elems(spec: RingSpec, elems: &[Vec<LocElem>]) -> Result<Self> {
        let k = elems.iter().flatten().map(LocElem::denom_exp).max().unwrap_or(0);
        for e in elems.iter().flatten() {
            spec.check_same(e.spec())?;
        }
        Self::new(spec, elems.iter().map(|r| r.iter().map(|e| e.num_at(k)).collect()).collect(), k)
    }

    pub fn identity(spec: RingSpec, dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { CycInt::one(spec) } else { CycInt::zero(spec) })
                    .collect()
            })
            .collect();
        LocMatrix { spec, denom_exp: 0, rows }
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn sde(&self) -> u32 {
        self.denom_exp
    }

    /// Numerator grid over the shared `chi^denom_exp`.
    pub fn rows(&self) -> &[Vec<CycInt>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> LocElem {
        LocElem::new(self.rows[i][j].clone(), self.denom_exp)
    }

    pub fn column(&self, j: usize) -> LocVector {
        LocVector::new(self.spec, self.rows.iter().map(|r| r[j].clone()).collect(), self.denom_exp)
            .expect("same ring")
    }

    pub fn row(&self, i: usize) -> LocVector {
        LocVector::new(self.spec, self.rows[i].clone(), self.denom_exp).expect("same ring")
    }

    fn check(&self, other_spec: RingSpec, other_dim: usize) -> Result<()> {
        self.spec.check_same(other_spec)?;
        if self.dim() != other_dim {
            return Err(Error::DimMismatch { left: self.dim(), right: other_dim });
        }
        Ok(())
    }

    pub fn mat_mul(&self, rhs: &LocMatrix) -> Result<LocMatrix> {
        self.check(rhs.spec, rhs.dim())?;
        let d = self.dim();
        let mut rows = vec![vec![CycInt::zero(self.spec); d]; d];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                let mut acc = CycInt::zero(self.spec);
                for k in 0..d {
                    let (a, b) = (&self.rows[i][k], &rhs.rows[k][j]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                *out = acc;
            }
        }
        LocMatrix::new(self.spec, rows, self.denom_exp + rhs.denom_exp)
    }

    pub fn mat_vec(&self, v: &LocVector) -> Result<LocVector> {
        self.check(v.spec(), v.dim())?;
        let entries = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = CycInt::zero(self.spec);
                for (a, b) in row.iter().zip(v.entries()) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect();
        LocVector::new(self.spec, entries, self.denom_exp + v.denom_exp())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> LocMatrix {
        let d = self.dim();
        let rows = (0..d)
            .map(|i| (0..d).map(|j| conj_numerator(&self.rows[j][i], self.denom_exp)).collect())
            .collect();
        LocMatrix { spec: self.spec, denom_exp: self.denom_exp, rows }
    }

    /// `dagger(M) * M = I`, checked exactly.
    pub fn is_unitary(&self) -> bool {
        match self.dagger().mat_mul(self) {
            Ok(p) => p == LocMatrix::identity(self.spec, self.dim()),
            Err(_) => false,
        }
    }

    /// Exactly one nonzero entry per row and column, each a signed root of unity.
    pub fn is_monomial(&self) -> bool {
        if self.denom_exp != 0 {
            return false;
        }
        let d = self.dim();
        let mut seen = vec![false; d];
        for row in &self.rows {
            let nz: Vec<usize> = (0..d).filter(|&j| !row[j].is_zero()).collect();
            if nz.len() != 1 || seen[nz[0]] {
                return false;
            }
            seen[nz[0]] = true;
            if signed_root_exponent(&row[nz[0]]).is_none() {
                return false;
            }
        }
        true
    }
}

/// If `a = s * zeta^e` with `s = +-1`, returns `(e, s)` with `e` in `0..n`.
pub fn signed_root_exponent(a: &CycInt) -> Option<(u32, i32)> {
    let spec = a.spec();
    for e in 0..spec.n() {
        let z = CycInt::zeta_pow(spec, e as i64);
        if *a == z {
            return Some((e, 1));
        }
        if *a == -&z {
            return Some((e, -1));
        }
    }
    None
}

/// `x = A + B tau + C tau^2` with `tau = xi + xi^-1`, for real `x` in `Z[xi]`.
pub fn to_real_tau_basis(x: &CycInt) -> Result<(BigInt, BigInt, BigInt)> {
    let spec = x.spec();
    if spec != RingSpec::N9 {
        return Err(Error::UnsupportedRing(spec.n()));
    }
    if !x.is_real() {
        return Err(Error::NotReal);
    }
    // tau = xi - xi^2 - xi^5, tau^2 = 2 - xi + xi^2 - xi^4
    let c = x.coeffs();
    let cc = -c[4].clone();
    let b = &c[1] + &cc;
    let a = &c[0] - &cc * 2;
    let rebuilt = from_tau_basis(&a, &b, &cc);
    if rebuilt != *x {
        return Err(Error::NotReal);
    }
    Ok((a, b, cc))
}

/// `A + B tau + C tau^2` as an element of `Z[xi]`.
pub fn from_tau_basis(a: &BigInt, b: &BigInt, c: &BigInt) -> CycInt {
    let spec = RingSpec::N9;
    let tau = &CycInt::zeta_pow(spec, 1) + &CycInt::zeta_pow(spec, -1);
    let t2 = &tau * &tau;
    &(&CycInt::from_bigint(spec, a.clone()) + &tau.scale(b)) + &t2.scale(c)
}
