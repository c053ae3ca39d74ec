//! Derivatives modulo `p` at `zeta = 1` and the chi-adic valuation they give.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{CycInt, RingSpec};

/// Entry `k` is `f^(k)(1) / k! mod p` for the canonical representative `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TaylorVec {
    spec: RingSpec,
    entries: Vec<u32>,
}

impl TaylorVec {
    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> u32 {
        self.entries[k]
    }

    /// Number of leading zero entries.
    pub fn leading_zeros(&self) -> usize {
        self.entries.iter().take_while(|&&e| e == 0).count()
    }
}

impl fmt::Display for TaylorVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

fn residue(v: &BigInt, p: u32) -> u32 {
    v.mod_floor(&BigInt::from(p)).to_u32().expect("residue fits")
}

/// `f^(k)(1)/k! = sum_i c_i * binom(i, k)`, reduced mod `p`.
pub fn taylor_mod_p(a: &CycInt) -> TaylorVec {
    let spec = a.spec();
    let p = spec.p();
    let entries = (0..spec.phi())
        .map(|k| {
            let s: BigInt = a
                .coeffs()
                .iter()
                .enumerate()
                .skip(k)
                .map(|(i, c)| c * binom(i, k))
                .sum();
            residue(&s, p)
        })
        .collect();
    TaylorVec { spec, entries }
}

/// Coefficients of `f` in powers of `(1 - x)`, mod `p`.
///
/// Computed by substituting `x = 1 - y` and expanding. Entry `k` equals
/// `(-1)^k` times the matching entry of [`taylor_mod_p`], so the two agree up
/// to sign and have identical zero patterns.
pub fn chi_expansion(a: &CycInt) -> TaylorVec {
    let spec = a.spec();
    let p = spec.p();
    let phi = spec.phi();
    // acc holds the polynomial in y; Horner from the top coefficient.
    let mut acc = vec![BigInt::zero(); phi];
    for c in a.coeffs().iter().rev() {
        // acc <- acc * (1 - y) + c
        for k in (1..phi).rev() {
            let prev = acc[k - 1].clone();
            acc[k] -= prev;
        }
        acc[0] += c;
    }
    TaylorVec { spec, entries: acc.iter().map(|v| residue(v, p)).collect() }
}

/// `Phi_n^(k)(1) / k!` for `k = 1..=phi`, as exact integers.
pub fn phi_derivative_table(n: u32) -> Result<Vec<BigInt>> {
    let spec = RingSpec::new(n)?;
    let poly = spec.cyclotomic_poly();
    Ok((1..=spec.phi())
        .map(|k| {
            poly.iter()
                .enumerate()
                .map(|(i, &c)| BigInt::from(c) * binom(i, k))
                .sum()
        })
        .collect())
}

/// The chi-adic valuation of a nonzero element.
///
/// Reads the leading zeros of the derivative vector; a vector of all zeros
/// means `chi^phi` divides, and the quotient `a * u / p` is processed again.
pub fn gde(a: &CycInt) -> Result<u32> {
    if a.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let spec = a.spec();
    let phi = spec.phi();
    let p = BigInt::from(spec.p());
    let mut cur = a.clone();
    let mut total = 0u32;
    loop {
        let lz = taylor_mod_p(&cur).leading_zeros();
        if lz < phi {
            return Ok(total + lz as u32);
        }
        total += phi as u32;
        cur = (&cur * CycInt::p_unit(spec))
            .div_exact_int(&p)
            .ok_or_else(|| Error::Inconsistent("a*u not divisible by p".into()))?;
    }
}

/// Valuation by repeated exact division; independent of the derivative route.
pub fn gde_oracle(a: &CycInt) -> Result<u32> {
    if a.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let mut cur = a.clone();
    let mut k = 0;
    while let Ok(q) = cur.try_div_chi() {
        cur = q;
        k += 1;
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(spec: RingSpec, v: &[i64]) -> CycInt {
        CycInt::from_coeffs(spec, v.iter().copied())
    }

    #[test]
    fn derivative_table_values() {
        let t3: Vec<i64> = phi_derivative_table(3).unwrap().iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(t3, vec![3, 1]);
        let t8: Vec<i64> = phi_derivative_table(8).unwrap().iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(t8, vec![4, 6, 4, 1]);
        // direct differentiation of x^6 + x^3 + 1: second derivative at 1 is 36, halved gives 18
        let t9: Vec<i64> = phi_derivative_table(9).unwrap().iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(t9, vec![9, 18, 21, 15, 6, 1]);
        assert!(phi_derivative_table(7).is_err());
    }

    #[test]
    fn taylor_examples() {
        let s = RingSpec::N9;
        assert_eq!(taylor_mod_p(&CycInt::one(s)).entries(), &[1, 0, 0, 0, 0, 0]);
        assert_eq!(chi_expansion(&CycInt::chi(s)).entries(), &[0, 1, 0, 0, 0, 0]);
        // f(x) = 1 - x has f'(1) = -1
        assert_eq!(taylor_mod_p(&CycInt::chi(s)).entries(), &[0, 2, 0, 0, 0, 0]);
        let t = taylor_mod_p(&c(s, &[1, 1, 1]));
        assert_eq!(&t.entries()[..2], &[0, 0]);
        assert_ne!(t.get(2), 0);
        assert!(taylor_mod_p(&CycInt::zero(s)).entries().iter().all(|&e| e == 0));
    }

    #[test]
    fn expansions_agree_up_to_sign() {
        for spec in RingSpec::ALL {
            let p = spec.p();
            let a = c(spec, &[3, -7, 2, 11, -4, 5]);
            let t = taylor_mod_p(&a);
            let e = chi_expansion(&a);
            for k in 0..spec.phi() {
                let expect = if k % 2 == 0 { t.get(k) } else { (p - t.get(k)) % p };
                assert_eq!(e.get(k), expect);
            }
        }
    }

    #[test]
    fn gde_examples() {
        assert_eq!(gde(&c(RingSpec::N9, &[1, 1, 1])).unwrap(), 2);
        assert_eq!(gde(&CycInt::from_int(RingSpec::N8, 2)).unwrap(), 4);
        assert_eq!(gde(&CycInt::from_int(RingSpec::N3, 3)).unwrap(), 2);
        assert_eq!(gde(&c(RingSpec::N3, &[2, 2])).unwrap(), 0);
        assert_eq!(gde(&c(RingSpec::N3, &[1, 2])).unwrap(), 1);
        assert_eq!(gde(&CycInt::from_int(RingSpec::N9, 81)).unwrap(), 24);
        assert_eq!(gde(&CycInt::zero(RingSpec::N9)), Err(Error::ZeroValuation));
        assert_eq!(gde_oracle(&CycInt::zero(RingSpec::N9)), Err(Error::ZeroValuation));
        for spec in RingSpec::ALL {
            let a = &CycInt::chi(spec).pow(13) * &c(spec, &[2, 1]);
            assert_eq!(gde(&a).unwrap(), gde_oracle(&a).unwrap());
        }
    }
}
