//! Clifford+T reduction for a single qubit.

use crate::error::{Error, Result};
use crate::gates::{GateSym, GateWord, Regime};
use crate::loc::{LocMatrix, LocVector};
use crate::taylor::taylor_mod_p;

use super::{apply_word, apply_word_vec, base_case_search, check_input, finish, worst_column, ReduceStep, StepKind, SynthesisResult};

const BASE_CASE_LEN: usize = 6;

fn step(k: u8, before: u32, after: u32) -> ReduceStep {
    ReduceStep { kind: StepKind::Qubit { k }, sde_before: before, sde_after: after }
}

fn after_ht(z: &LocVector, k: u8) -> Result<u32> {
    let w = GateWord { regime: Regime::Qubit8, syms: vec![GateSym::H, GateSym::T(k)] };
    Ok(apply_word_vec(&w, z)?.sde())
}

/// `sde(H T^k z) - sde(z)` for `k = 0..8`.
pub fn qubit_sde_changes(z: &LocVector) -> Result<Vec<i64>> {
    let s = z.sde() as i64;
    (0..8u8).map(|k| Ok(after_ht(z, k)? as i64 - s)).collect()
}

fn check_vector(z: &LocVector) -> Result<()> {
    if z.spec() != Regime::Qubit8.spec() || z.dim() != 2 {
        return Err(Error::Precondition("expected a qubit vector over Z[zeta_8]".into()));
    }
    if !z.is_unit_vector() {
        return Err(Error::Precondition("not a unit vector".into()));
    }
    Ok(())
}

/// A `k` in `0..4` with `sde(H T^k z) = sde(z) + s`.
///
/// For `s = -1` the derivative choice `e = w1' + w2'`,
/// `t = w1''/2 + w2''/2 + e w2'` (all mod 2), `k = 2t + e` is tried first;
/// every answer is checked by recomputing the sde.
pub fn qubit_choose_k(z: &LocVector, s: i32) -> Result<ReduceStep> {
    check_vector(z)?;
    if !(-1..=1).contains(&s) {
        return Err(Error::Precondition(format!("s must be -1, 0 or 1, got {s}")));
    }
    let before = z.sde();
    if s == -1 {
        if before < 2 {
            return Err(Error::Precondition("sde must be at least 2 to lower it".into()));
        }
        let t1 = taylor_mod_p(&z.entries()[0]);
        let t2 = taylor_mod_p(&z.entries()[1]);
        let e = (t1.get(1) + t2.get(1)) % 2;
        let t = (t1.get(2) + t2.get(2) + e * t2.get(1)) % 2;
        let k = (2 * t + e) as u8;
        let after = after_ht(z, k)?;
        if after as i64 == before as i64 - 1 {
            return Ok(step(k, before, after));
        }
    }
    for k in 0..4u8 {
        let after = after_ht(z, k)?;
        if after as i64 - before as i64 == s as i64 {
            return Ok(step(k, before, after));
        }
    }
    Err(Error::NoSuchK(s))
}

/// Any `k` in `0..8` that lowers the sde, preferring the largest drop.
fn best_drop(z: &LocVector) -> Result<Option<ReduceStep>> {
    let before = z.sde();
    let mut best: Option<ReduceStep> = None;
    for k in 0..8u8 {
        let after = after_ht(z, k)?;
        if after < before && best.as_ref().is_none_or(|b| after < b.sde_after) {
            best = Some(step(k, before, after));
        }
    }
    Ok(best)
}

/// Exact Clifford+T synthesis of a 2x2 unitary over `Z[zeta_8][1/chi]`.
pub fn qubit_synthesize(u: &LocMatrix) -> Result<SynthesisResult> {
    let regime = Regime::Qubit8;
    check_input(u, regime)?;
    let mut cur = u.clone();
    let mut prefix = GateWord::empty(regime);
    let mut trace = vec![cur.sde()];
    while cur.sde() > 0 {
        let z = worst_column(&cur);
        let chosen = match qubit_choose_k(&z, -1) {
            Ok(st) => Some(st),
            Err(Error::NoSuchK(_)) | Err(Error::Precondition(_)) => best_drop(&z)?,
            Err(e) => return Err(e),
        };
        let Some(st) = chosen else { break };
        let next = apply_word(&st.word(), &cur)?;
        if next.sde() >= cur.sde() {
            break;
        }
        prefix = prefix.concat(&st.inverse_word());
        cur = next;
        trace.push(cur.sde());
    }
    if cur.sde() > 0 {
        let mut alphabet = vec![GateSym::H];
        alphabet.extend((1..8).map(GateSym::T));
        let w = base_case_search(regime, &cur, &alphabet, BASE_CASE_LEN)?;
        cur = apply_word(&w, &cur)?;
        prefix = prefix.concat(&w.inverse());
        trace.push(cur.sde());
    }
    finish(regime, prefix, cur, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{parse_word, word_to_matrix};
    use crate::ring::RingSpec;

    fn m(text: &str) -> LocMatrix {
        word_to_matrix(&parse_word(text, Regime::Qubit8).unwrap()).unwrap()
    }

    #[test]
    fn identity_gives_empty_word() {
        let r = qubit_synthesize(&LocMatrix::identity(RingSpec::N8, 2)).unwrap();
        assert!(r.word.is_empty());
        assert_eq!(r.status, super::super::Status::Complete);
    }

    #[test]
    fn round_trip_small_word() {
        let u = m("H T^1 H T^3 H");
        let r = qubit_synthesize(&u).unwrap();
        assert_eq!(r.status, super::super::Status::Complete);
        assert_eq!(word_to_matrix(&r.word).unwrap(), u);
        assert!(r.strictly_descending());
    }

    #[test]
    fn choose_k_lowers_sde() {
        let u = m("H T^1 H T^3 H T^5 H T^1 H T^7 H T^2 H T^1");
        let z = u.column(0);
        assert!(z.sde() >= 3);
        let st = qubit_choose_k(&z, -1).unwrap();
        assert_eq!(st.change(), -1);
        assert!(st.sde_after < z.sde());
    }

    #[test]
    fn basis_vector_changes() {
        let z = LocVector::basis(RingSpec::N8, 2, 0);
        for c in qubit_sde_changes(&z).unwrap() {
            assert_eq!(c, 2);
        }
        assert_eq!(qubit_choose_k(&z, 1), Err(Error::NoSuchK(1)));
        assert!(matches!(qubit_choose_k(&z, -1), Err(Error::Precondition(_))));
    }
}
