//! Exact arithmetic in the cyclotomic integers `Z[zeta_n]` for `n = p^l` in
//! `{3, 8, 9}`.
//!
//! Elements are stored in the power basis `1, zeta, .., zeta^(phi-1)` with
//! unbounded integer coefficients and are reduced modulo the cyclotomic
//! polynomial after every multiplication. `chi = 1 - zeta` is the unique prime
//! above `p`, and `p = u * chi^phi` for a unit `u` (see [`CycInt::p_unit`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// One of the three cyclotomic orders handled here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingSpec {
    n: u32,
}

impl RingSpec {
    /// `Z[omega]`, `omega = e^{2 pi i / 3}`.
    pub const N3: RingSpec = RingSpec { n: 3 };
    /// `Z[zeta_8]`.
    pub const N8: RingSpec = RingSpec { n: 8 };
    /// `Z[xi]`, `xi = e^{2 pi i / 9}`.
    pub const N9: RingSpec = RingSpec { n: 9 };

    pub const ALL: [RingSpec; 3] = [RingSpec::N3, RingSpec::N8, RingSpec::N9];

    pub fn new(n: u32) -> Result<Self> {
        match n {
            3 | 8 | 9 => Ok(RingSpec { n }),
            _ => Err(Error::UnsupportedRing(n)),
        }
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn p(self) -> u32 {
        match self.n {
            8 => 2,
            _ => 3,
        }
    }

    pub fn l(self) -> u32 {
        match self.n {
            3 => 1,
            8 => 3,
            _ => 2,
        }
    }

    /// Euler totient of `n`, i.e. the degree of `Phi_n`.
    pub fn phi(self) -> usize {
        match self.n {
            3 => 2,
            8 => 4,
            _ => 6,
        }
    }

    /// `p^(l-1)`: `Phi_n(x) = sum_{j<p} x^(j * block)`.
    fn block(self) -> usize {
        (self.n / self.p()) as usize
    }

    fn index(self) -> usize {
        match self.n {
            3 => 0,
            8 => 1,
            _ => 2,
        }
    }

    /// Integer coefficients of `Phi_n`, constant term first.
    pub fn cyclotomic_poly(self) -> Vec<i64> {
        let mut c = vec![0i64; self.phi() + 1];
        for j in 0..self.p() as usize {
            c[j * self.block()] = 1;
        }
        c
    }

    pub(crate) fn check_same(self, other: RingSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpecMismatch { left: self.n, right: other.n })
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[zeta_{}]", self.n)
    }
}

/// An element of `Z[zeta_n]` in canonical (reduced) power-basis form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    spec: RingSpec,
    coeffs: Vec<BigInt>,
}

/// Reduce a polynomial of any length modulo `Phi_n`.
///
/// Uses `zeta^phi = -sum_{j=0}^{p-2} zeta^(j * p^(l-1))`, rewriting from the
/// top degree down.
pub fn reduce_poly(spec: RingSpec, coeffs: Vec<BigInt>) -> CycInt {
    let phi = spec.phi();
    let block = spec.block();
    let p = spec.p() as usize;
    let mut c = coeffs;
    if c.len() < phi {
        c.resize(phi, BigInt::zero());
    }
    for d in (phi..c.len()).rev() {
        if c[d].is_zero() {
            continue;
        }
        let v = std::mem::take(&mut c[d]);
        let base = d - phi;
        for j in 0..p - 1 {
            c[base + j * block] -= &v;
        }
    }
    c.truncate(phi);
    CycInt { spec, coeffs: c }
}

impl CycInt {
    pub fn zero(spec: RingSpec) -> Self {
        CycInt { spec, coeffs: vec![BigInt::zero(); spec.phi()] }
    }

    pub fn one(spec: RingSpec) -> Self {
        Self::from_int(spec, 1)
    }

    pub fn from_int(spec: RingSpec, v: i64) -> Self {
        Self::from_bigint(spec, BigInt::from(v))
    }

    pub fn from_bigint(spec: RingSpec, v: BigInt) -> Self {
        let mut c = Self::zero(spec);
        c.coeffs[0] = v;
        c
    }

    /// Build from a coefficient list of any length (reduced on the way in).
    pub fn from_coeffs<I, T>(spec: RingSpec, coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        reduce_poly(spec, coeffs.into_iter().map(Into::into).collect())
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(spec: RingSpec, k: i64) -> Self {
        let n = spec.n() as i64;
        let k = k.rem_euclid(n) as usize;
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        reduce_poly(spec, c)
    }

    /// `chi = 1 - zeta`.
    pub fn chi(spec: RingSpec) -> Self {
        Self::from_coeffs(spec, [1i64, -1])
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn checked_add(&self, rhs: &CycInt) -> Result<CycInt> {
        self.spec.check_same(rhs.spec)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycInt { spec: self.spec, coeffs })
    }

    pub fn checked_sub(&self, rhs: &CycInt) -> Result<CycInt> {
        self.spec.check_same(rhs.spec)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycInt { spec: self.spec, coeffs })
    }

    pub fn checked_mul(&self, rhs: &CycInt) -> Result<CycInt> {
        self.spec.check_same(rhs.spec)?;
        let phi = self.spec.phi();
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(reduce_poly(self.spec, prod))
    }

    /// Multiply by `zeta^k` (a signed rotation of the coefficients).
    pub fn mul_zeta_pow(&self, k: i64) -> CycInt {
        let n = self.spec.n() as i64;
        let k = k.rem_euclid(n) as usize;
        if k == 0 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + k];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i + k] = a.clone();
        }
        reduce_poly(self.spec, c)
    }

    pub fn scale(&self, s: &BigInt) -> CycInt {
        CycInt { spec: self.spec, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Coefficient-wise exact division by an integer, if every coefficient is
    /// divisible.
    pub fn div_exact_int(&self, d: &BigInt) -> Option<CycInt> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(CycInt { spec: self.spec, coeffs })
    }

    pub fn pow(&self, mut e: u32) -> CycInt {
        let mut base = self.clone();
        let mut acc = CycInt::one(self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex conjugation `zeta -> zeta^(n-1)`.
    pub fn conj(&self) -> CycInt {
        let n = self.spec.n() as usize;
        let mut c = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[(n - i) % n] += a;
        }
        reduce_poly(self.spec, c)
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `a * conj(a)`.
    pub fn abs_sq(&self) -> CycInt {
        self * &self.conj()
    }

    /// `a(1) mod p`: the ring map `Z[zeta] -> Z/p` whose kernel is `(chi)`.
    pub fn eval_at_one_mod_p(&self) -> u32 {
        let p = BigInt::from(self.spec.p());
        let s: BigInt = self.coeffs.iter().sum();
        s.mod_floor(&p).to_u32().expect("residue fits")
    }

    /// Exact division by `chi`.
    ///
    /// Multiplication by `chi` is a `phi x phi` integer matrix of determinant
    /// `p`; its inverse is `S / p` for an integer matrix `S` computed once per
    /// ring. The quotient exists iff `S a` is divisible by `p` coefficient-wise.
    pub fn try_div_chi(&self) -> Result<CycInt> {
        let s = chi_inverse_scaled(self.spec);
        let p = BigInt::from(self.spec.p());
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for row in s {
            let mut acc = BigInt::zero();
            for (m, a) in row.iter().zip(&self.coeffs) {
                if *m != 0 && !a.is_zero() {
                    acc += a * *m;
                }
            }
            let (q, r) = acc.div_rem(&p);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            coeffs.push(q);
        }
        Ok(CycInt { spec: self.spec, coeffs })
    }

    /// The unit `u` with `p = u * chi^phi`, obtained by dividing the constant
    /// `p` by `chi` exactly `phi` times.
    pub fn p_unit(spec: RingSpec) -> &'static CycInt {
        static CACHE: OnceLock<[CycInt; 3]> = OnceLock::new();
        &CACHE.get_or_init(|| {
            RingSpec::ALL.map(|spec| {
                let mut u = CycInt::from_int(spec, spec.p() as i64);
                for _ in 0..spec.phi() {
                    u = u.try_div_chi().expect("p is divisible by chi^phi");
                }
                u
            })
        })[spec.index()]
    }

    /// `u^-1 = chi^phi / p`, integral because `u` is a unit.
    pub fn p_unit_inv(spec: RingSpec) -> &'static CycInt {
        static CACHE: OnceLock<[CycInt; 3]> = OnceLock::new();
        &CACHE.get_or_init(|| {
            RingSpec::ALL.map(|spec| {
                CycInt::chi(spec)
                    .pow(spec.phi() as u32)
                    .div_exact_int(&BigInt::from(spec.p()))
                    .expect("chi^phi / p is integral")
            })
        })[spec.index()]
    }

    /// Largest absolute coefficient; handy for reporting growth.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// `p * M^-1` where `M` is multiplication by `chi` in the power basis.
fn chi_inverse_scaled(spec: RingSpec) -> &'static [Vec<i64>] {
    static CACHE: OnceLock<[Vec<Vec<i64>>; 3]> = OnceLock::new();
    &CACHE.get_or_init(|| RingSpec::ALL.map(build_chi_inverse))[spec.index()]
}

fn build_chi_inverse(spec: RingSpec) -> Vec<Vec<i64>> {
    let phi = spec.phi();
    let chi = CycInt::chi(spec);
    // column j holds chi * zeta^j
    let mut m = vec![vec![Ratio::<i64>::zero(); 2 * phi]; phi];
    for j in 0..phi {
        let col = chi.mul_zeta_pow(j as i64);
        for (i, c) in col.coeffs.iter().enumerate() {
            m[i][j] = Ratio::from_integer(c.to_i64().unwrap());
        }
        m[j][phi + j] = Ratio::one();
    }
    // Gauss-Jordan on [M | I]
    for col in 0..phi {
        let pivot = (col..phi).find(|&r| !m[r][col].is_zero()).expect("chi is invertible over Q");
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= inv;
        }
        for r in 0..phi {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..2 * phi {
                    let t = m[col][c] * f;
                    m[r][c] -= t;
                }
            }
        }
    }
    let p = Ratio::from_integer(spec.p() as i64);
    m.iter()
        .map(|row| {
            row[phi..]
                .iter()
                .map(|v| {
                    let s = *v * p;
                    assert!(s.is_integer(), "p * chi^-1 must be integral");
                    s.to_integer()
                })
                .collect()
        })
        .collect()
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.checked_add(rhs).expect("ring mismatch in add")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.checked_sub(rhs).expect("ring mismatch in sub")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.checked_mul(rhs).expect("ring mismatch in mul")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { spec: self.spec, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}
