//! Clifford+R reduction for a single qutrit over `Z[omega][1/chi]`.

use crate::error::{Error, Result};
use crate::gates::{GateSym, GateWord, Regime};
use crate::loc::{LocMatrix, LocVector};
use crate::ring::CycInt;
use crate::taylor::{gde, taylor_mod_p};

use super::{
    apply_word, apply_word_vec, check_input, finish, require_reducible_shape, worst_column, ReduceStep, StepKind,
    SynthesisResult,
};

/// Result of moving the values `w_i(1) mod 3` to `sigma * (1,1,1)`.
pub(crate) struct Normalized {
    pub eps: u8,
    pub delta: u8,
    pub z: LocVector,
    /// Common value of `w_i(1) mod 3`, 1 or 2.
    pub sigma: u32,
}

/// Choose `X^delta` and `R^eps` so that `R^eps X^delta z` has equal values at 1.
pub(crate) fn normalize_values(regime: Regime, z: &LocVector) -> Result<Normalized> {
    let vals: Vec<u32> = z.entries().iter().map(|w| taylor_mod_p(w).get(0)).collect();
    if vals.contains(&0) {
        return Err(Error::Precondition("numerators are not all chi-coprime".into()));
    }
    let (eps, delta) = if vals[0] == vals[1] && vals[1] == vals[2] {
        (0u8, 0u8)
    } else {
        // exactly one entry differs from the other two
        let odd = (0..3).find(|&i| vals[i] != vals[(i + 1) % 3] && vals[i] != vals[(i + 2) % 3]).expect("one deviant");
        (1, ((2 + 3 - odd) % 3) as u8)
    };
    let mut syms = Vec::new();
    if eps == 1 {
        syms.push(GateSym::R);
    }
    syms.extend(std::iter::repeat_n(GateSym::X, delta as usize));
    let z2 = apply_word_vec(&GateWord { regime, syms }, z)?;
    let sigma = taylor_mod_p(&z2.entries()[0]).get(0);
    debug_assert!(z2.entries().iter().all(|w| taylor_mod_p(w).get(0) == sigma));
    Ok(Normalized { eps, delta, z: z2, sigma })
}

/// sde of `H diag(zeta^e_j) v` for `v` with numerators `nums` over `chi^f`,
/// read off from the chi-adic valuations of the Fourier sums.
pub(crate) fn hadamard_sde_after(nums: &[CycInt], f: u32, exps: [i64; 3]) -> u32 {
    let spec = nums[0].spec();
    let w = spec.n() as i64 / 3;
    let hs = match spec.n() {
        3 => 1,
        _ => 3,
    };
    let y: Vec<CycInt> = nums.iter().zip(exps).map(|(v, e)| v.mul_zeta_pow(e)).collect();
    let mut min_g = u32::MAX;
    for i in 0..3i64 {
        let mut acc = y[0].clone();
        for (j, yj) in y.iter().enumerate().skip(1) {
            acc = &acc + &yj.mul_zeta_pow(w * i * j as i64);
        }
        if !acc.is_zero() {
            min_g = min_g.min(gde(&acc).expect("nonzero"));
        }
    }
    (f + hs).saturating_sub(min_g)
}

/// The six vectors `R^eps X^delta z`, keyed by `(eps, delta)`.
pub(crate) fn shifted_variants(regime: Regime, z: &LocVector) -> Result<Vec<(u8, u8, LocVector)>> {
    let mut out = Vec::with_capacity(6);
    for delta in 0..3u8 {
        for eps in 0..2u8 {
            let mut syms = Vec::new();
            if eps == 1 {
                syms.push(GateSym::R);
            }
            syms.extend(std::iter::repeat_n(GateSym::X, delta as usize));
            out.push((eps, delta, apply_word_vec(&GateWord { regime, syms }, z)?));
        }
    }
    Ok(out)
}

/// Every `(Dw[a], eps, delta)` whose syllable lowers the sde of `z`.
pub fn qutrit_r_exhaustive(z: &LocVector) -> Result<Vec<ReduceStep>> {
    check_vector(z)?;
    let before = z.sde();
    let mut out = Vec::new();
    for (eps, delta, v) in shifted_variants(Regime::QutritR3, z)? {
        for x in 0..27u8 {
            let a = [x / 9, (x / 3) % 3, x % 3];
            let after = hadamard_sde_after(v.entries(), v.sde(), a.map(|e| e as i64));
            if after < before {
                out.push(ReduceStep { kind: StepKind::QutritR { a, eps, delta }, sde_before: before, sde_after: after });
            }
        }
    }
    Ok(out)
}

fn check_vector(z: &LocVector) -> Result<()> {
    if z.spec() != Regime::QutritR3.spec() || z.dim() != 3 {
        return Err(Error::Precondition("expected a qutrit vector over Z[omega]".into()));
    }
    Ok(())
}

/// A syllable `H Dw[a] R^eps X^delta` that lowers the sde of `z`.
///
/// After normalizing so every `w_i(1) = sigma`, `a = (-sigma * sum_i w_i'(1), 0, 0)`
/// makes `chi^2` divide the first Fourier sum. The choice is verified and the
/// exhaustive search is used if verification fails.
pub fn qutrit_r_choose_step(z: &LocVector) -> Result<ReduceStep> {
    check_vector(z)?;
    require_reducible_shape(z)?;
    let before = z.sde();
    let n = normalize_values(Regime::QutritR3, z)?;
    let pi1: u32 = n.z.entries().iter().map(|w| taylor_mod_p(w).get(1)).sum::<u32>() % 3;
    let a0 = ((3 - (n.sigma * pi1) % 3) % 3) as u8;
    let kind = StepKind::QutritR { a: [a0, 0, 0], eps: n.eps, delta: n.delta };
    let cand = ReduceStep { kind, sde_before: before, sde_after: 0 };
    let after = apply_word_vec(&cand.word(), z)?.sde();
    if after < before {
        return Ok(ReduceStep { sde_after: after, ..cand });
    }
    qutrit_r_exhaustive(z)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Inconsistent("no Clifford+R syllable lowers the sde".into()))
}

/// Exact Clifford+R synthesis of a 3x3 unitary over `Z[omega][1/chi]`.
pub fn qutrit_r_synthesize(u: &LocMatrix) -> Result<SynthesisResult> {
    let regime = Regime::QutritR3;
    check_input(u, regime)?;
    let mut cur = u.clone();
    let mut prefix = GateWord::empty(regime);
    let mut trace = vec![cur.sde()];
    while cur.sde() > 0 {
        let st = qutrit_r_choose_step(&worst_column(&cur))?;
        let next = apply_word(&st.word(), &cur)?;
        if next.sde() >= cur.sde() {
            return Err(Error::Inconsistent("Clifford+R step did not lower the matrix sde".into()));
        }
        prefix = prefix.concat(&st.inverse_word());
        cur = next;
        trace.push(cur.sde());
    }
    finish(regime, prefix, cur, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{parse_word, word_to_matrix};
    use crate::ring::RingSpec;
    use crate::synth::Status;

    fn m(text: &str) -> LocMatrix {
        word_to_matrix(&parse_word(text, Regime::QutritR3).unwrap()).unwrap()
    }

    #[test]
    fn hadamard_columns_reach_sde_zero() {
        let h = m("H");
        for j in 0..3 {
            let st = qutrit_r_choose_step(&h.column(j)).unwrap();
            assert_eq!(st.sde_after, 0);
        }
    }

    #[test]
    fn sde_zero_is_rejected() {
        let e = LocVector::basis(RingSpec::N3, 3, 0);
        assert!(matches!(qutrit_r_choose_step(&e), Err(Error::Precondition(_))));
    }

    #[test]
    fn fast_sde_matches_direct_product() {
        let z = m("H S H R H Dw[1,0,2] H S H").column(1);
        for (eps, delta, v) in shifted_variants(Regime::QutritR3, &z).unwrap() {
            for x in [0u8, 5, 13, 26] {
                let a = [x / 9, (x / 3) % 3, x % 3];
                let st = ReduceStep { kind: StepKind::QutritR { a, eps, delta }, sde_before: 0, sde_after: 0 };
                let direct = apply_word_vec(&st.word(), &z).unwrap().sde();
                assert_eq!(hadamard_sde_after(v.entries(), v.sde(), a.map(|e| e as i64)), direct);
            }
        }
    }

    #[test]
    fn round_trips() {
        for text in ["", "H S X R Dw[1,2,0] H", "H H S H R H S S H X H"] {
            let u = m(text);
            let r = qutrit_r_synthesize(&u).unwrap();
            assert_eq!(r.status, Status::Complete);
            assert_eq!(word_to_matrix(&r.word).unwrap(), u, "{text}");
            assert!(r.strictly_descending());
        }
        assert!(qutrit_r_synthesize(&LocMatrix::identity(RingSpec::N3, 3)).unwrap().word.is_empty());
    }
}
