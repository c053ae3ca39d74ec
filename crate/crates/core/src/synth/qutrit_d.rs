//! Clifford+D greedy reduction for a single qutrit over `Z[xi][1/chi]`.
//!
//! After normalizing so that `(p(1), q(1), r(1)) = (1,1,1)` (up to a global
//! sign), a syllable `H D R^eps X^delta` lowers the sde exactly when the
//! obstruction `alpha^2 - gamma` is not `-1` mod 3, with
//! `alpha = q1 - p1` and `gamma = -pi1 + pi2 - pi1^2 - pi1 r1`.

use crate::error::{Error, Result};
use crate::gates::{GateWord, Regime};
use crate::loc::{LocMatrix, LocVector};
use crate::taylor::taylor_mod_p;

use super::qutrit_r::{hadamard_sde_after, normalize_values, shifted_variants};
use super::{
    apply_word, apply_word_vec, check_input, finish, require_reducible_shape, worst_column, ReduceStep, StepKind,
    Status, SynthesisResult,
};

fn check_vector(z: &LocVector) -> Result<()> {
    if z.spec() != Regime::QutritD9.spec() || z.dim() != 3 {
        return Err(Error::Precondition("expected a qutrit vector over Z[xi]".into()));
    }
    require_reducible_shape(z)
}

/// `(eps, delta, R^eps X^delta z)` with all `w_i(1)` equal mod 3.
pub fn qutrit_d_normalize(z: &LocVector) -> Result<(u8, u8, LocVector)> {
    check_vector(z)?;
    let n = normalize_values(Regime::QutritD9, z)?;
    Ok((n.eps, n.delta, n.z))
}

/// Derivative entries `k = 0..4` of the normalized numerators, sign-fixed so
/// that every `w_i(1) = 1`.
fn normalized_taylor(z: &LocVector) -> Result<(u8, u8, [[u32; 4]; 3])> {
    let n = normalize_values(Regime::QutritD9, z)?;
    let mut t = [[0u32; 4]; 3];
    for (i, w) in n.z.entries().iter().enumerate() {
        let tv = taylor_mod_p(w);
        for k in 0..4 {
            t[i][k] = if n.sigma == 1 { tv.get(k) } else { (3 - tv.get(k)) % 3 };
        }
    }
    Ok((n.eps, n.delta, t))
}

/// The quantities entering the obstruction, all mod 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaParts {
    pub p1: u32,
    pub q1: u32,
    pub r1: u32,
    pub pi1: u32,
    pub pi2: u32,
    pub alpha: u32,
    pub gamma: u32,
    /// `alpha^2 - gamma`; the value 2 (that is, -1) means obstructed.
    pub delta: u32,
}

fn parts_from(t: &[[u32; 4]; 3]) -> DeltaParts {
    let (p1, q1, r1) = (t[0][1], t[1][1], t[2][1]);
    let pi1 = (p1 + q1 + r1) % 3;
    let pi2 = (t[0][2] + t[1][2] + t[2][2]) % 3;
    let alpha = (q1 + 3 - p1) % 3;
    // gamma = -pi1 + pi2 - pi1^2 - pi1 r1
    let gamma = (2 * pi1 + pi2 + 2 * pi1 * pi1 + 2 * pi1 * r1) % 3;
    let delta = (alpha * alpha + 3 - gamma) % 3;
    DeltaParts { p1, q1, r1, pi1, pi2, alpha, gamma, delta }
}

pub fn delta_parts(z: &LocVector) -> Result<DeltaParts> {
    check_vector(z)?;
    Ok(parts_from(&normalized_taylor(z)?.2))
}

/// The obstruction `alpha^2 - gamma` in `{0, 1, 2}`.
pub fn qutrit_d_delta(z: &LocVector) -> Result<u32> {
    Ok(delta_parts(z)?.delta)
}

/// `p1^2 + q1^2 + r1^2 mod 3`, the closed form obtained by substituting the
/// printed second-derivative identity into `alpha^2 - gamma`.
pub fn qutrit_d_delta_closed_form(z: &LocVector) -> Result<u32> {
    let d = delta_parts(z)?;
    Ok((d.p1 * d.p1 + d.q1 * d.q1 + d.r1 * d.r1) % 3)
}

/// Values mod 3 of `-pi2 + pi1 + sum p1^2` (as printed) and of
/// `-pi2 + pi1 - sum p1^2` on the normalized vector. A unit vector of sde at
/// least 2 always makes the second one vanish.
pub fn second_derivative_identity(z: &LocVector) -> Result<(u32, u32)> {
    let d = delta_parts(z)?;
    let sq = (d.p1 * d.p1 + d.q1 * d.q1 + d.r1 * d.r1) % 3;
    let printed = (2 * d.pi2 + d.pi1 + sq) % 3;
    let corrected = (2 * d.pi2 + d.pi1 + 2 * sq) % 3;
    Ok((printed, corrected))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DStep {
    Reduce(ReduceStep),
    Obstructed(u32),
}

/// The closed-form syllable, unverified; `None` when obstructed.
pub fn qutrit_d_analytic_step(z: &LocVector) -> Result<Option<StepKind>> {
    check_vector(z)?;
    let (eps, delta, t) = normalized_taylor(z)?;
    let d = parts_from(&t);
    if d.delta == 2 {
        return Ok(None);
    }
    let g = |x: u32| (x * x + d.alpha * x + d.gamma) % 3;
    let mut found = None;
    'scan: for a1 in 0..3u32 {
        for a2 in 0..3u32 {
            if g((a1 + 3 - a2) % 3) == 0 {
                found = Some((a1, a2));
                break 'scan;
            }
        }
    }
    let Some((a1, a2)) = found else { return Ok(None) };
    let a3 = (9 - d.pi1 - a1 - a2) % 3;
    let e = [a1, a2, a3];
    // third-derivative condition fixes the lift of the first exponent
    let mut s = 0u32;
    for i in 0..3 {
        let ei = e[i];
        let lin = (ei + 9 - (ei * ei) % 3) % 3;
        s += lin * t[i][1] + ei * t[i][2] + t[i][3];
    }
    let k1 = (3 - s % 3) % 3;
    let exps = [(3 * k1 + e[0]) as u8, e[1] as u8, e[2] as u8];
    Ok(Some(StepKind::QutritD { exps, neg: [false; 3], eps, delta }))
}

/// Every `(D, eps, delta)` with `D = diag(xi^a)` that lowers the sde of `z`.
pub fn qutrit_d_exhaustive(z: &LocVector) -> Result<Vec<ReduceStep>> {
    check_vector(z)?;
    let before = z.sde();
    let mut out = Vec::new();
    for (eps, delta, v) in shifted_variants(Regime::QutritD9, z)? {
        for x in 0..729u32 {
            let a = [(x / 81) as u8, ((x / 9) % 9) as u8, (x % 9) as u8];
            let after = hadamard_sde_after(v.entries(), v.sde(), a.map(|e| e as i64));
            if after < before {
                out.push(ReduceStep {
                    kind: StepKind::QutritD { exps: a, neg: [false; 3], eps, delta },
                    sde_before: before,
                    sde_after: after,
                });
            }
        }
    }
    Ok(out)
}

/// One verified sde-lowering syllable, or the obstruction value.
pub fn qutrit_d_reduce_step(z: &LocVector) -> Result<DStep> {
    check_vector(z)?;
    let before = z.sde();
    let delta = qutrit_d_delta(z)?;
    if delta == 2 {
        return Ok(DStep::Obstructed(delta));
    }
    if let Some(kind) = qutrit_d_analytic_step(z)? {
        let cand = ReduceStep { kind, sde_before: before, sde_after: 0 };
        let after = apply_word_vec(&cand.word(), z)?.sde();
        if after < before {
            return Ok(DStep::Reduce(ReduceStep { sde_after: after, ..cand }));
        }
    }
    match qutrit_d_exhaustive(z)?.into_iter().next() {
        Some(st) => Ok(DStep::Reduce(st)),
        None => Err(Error::Inconsistent(format!("obstruction value {delta} but no syllable lowers the sde"))),
    }
}

/// Greedy Clifford+D reduction; stops early at an obstructed column.
pub fn qutrit_d_greedy(u: &LocMatrix) -> Result<SynthesisResult> {
    let regime = Regime::QutritD9;
    check_input(u, regime)?;
    let mut cur = u.clone();
    let mut prefix = GateWord::empty(regime);
    let mut trace = vec![cur.sde()];
    while cur.sde() > 0 {
        match qutrit_d_reduce_step(&worst_column(&cur))? {
            DStep::Reduce(st) => {
                let next = apply_word(&st.word(), &cur)?;
                if next.sde() >= cur.sde() {
                    return Err(Error::Inconsistent("Clifford+D step did not lower the matrix sde".into()));
                }
                prefix = prefix.concat(&st.inverse_word());
                cur = next;
                trace.push(cur.sde());
            }
            DStep::Obstructed(d) => {
                return Ok(SynthesisResult { word: prefix, residual: cur, status: Status::Obstructed(d), sde_trace: trace });
            }
        }
    }
    finish(regime, prefix, cur, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{parse_word, word_to_matrix};
    use crate::ring::RingSpec;

    fn m(text: &str) -> LocMatrix {
        word_to_matrix(&parse_word(text, Regime::QutritD9).unwrap()).unwrap()
    }

    #[test]
    fn normalize_cases() {
        let h = m("H");
        let (e, d, z) = qutrit_d_normalize(&h.column(0)).unwrap();
        assert_eq!((e, d), (0, 0));
        assert_eq!(z, h.column(0));
        // flip the last sign: deviant in position 2
        let v = m("R H").column(0);
        assert_eq!(qutrit_d_normalize(&v).unwrap().0, 1);
        assert_eq!(qutrit_d_normalize(&v).unwrap().1, 0);
        let v = m("D[0,-0,0] H").column(0);
        let (e, d, _) = qutrit_d_normalize(&v).unwrap();
        assert_eq!((e, d), (1, 1));
        assert!(matches!(qutrit_d_normalize(&LocVector::basis(RingSpec::N9, 3, 0)), Err(Error::Precondition(_))));
    }

    #[test]
    fn hadamard_column_is_unobstructed() {
        let z = m("H").column(0);
        assert_eq!(qutrit_d_delta(&z).unwrap(), 0);
        assert_eq!(qutrit_d_delta_closed_form(&z).unwrap(), 0);
        match qutrit_d_reduce_step(&z).unwrap() {
            DStep::Reduce(st) => assert_eq!(st.sde_after, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn closed_form_arithmetic() {
        let t = [[1, 1, 0, 0], [1, 1, 0, 0], [1, 0, 0, 0]];
        let d = parts_from(&t);
        assert_eq!((d.p1 * d.p1 + d.q1 * d.q1 + d.r1 * d.r1) % 3, 2);
    }

    #[test]
    fn greedy_examples() {
        for text in ["", "H D[1,0,2]", "D[3,-1,4] H D[0,1,0] X", "H D[1,2,3] H D[4,-5,6] H R H"] {
            let u = m(text);
            let r = qutrit_d_greedy(&u).unwrap();
            assert!(r.reconstructs(&u).unwrap(), "{text}");
            assert!(r.strictly_descending());
            if r.status == Status::Complete {
                assert_eq!(word_to_matrix(&r.word).unwrap(), u);
            }
        }
        assert_eq!(qutrit_d_greedy(&m("H D[1,0,2]")).unwrap().status, Status::Complete);
    }

    #[test]
    fn obstruction_vanishes_under_corrected_identity() {
        // pi2 is forced by -pi2 + pi1 - sum p1^2 = 0; then alpha^2 - gamma = 0 for every residue
        for x in 0..27u32 {
            let (p1, q1, r1) = (x % 3, x / 3 % 3, x / 9);
            let pi1 = (p1 + q1 + r1) % 3;
            let pi2 = (pi1 + 2 * (p1 * p1 + q1 * q1 + r1 * r1)) % 3;
            let t = [[1, p1, pi2, 0], [1, q1, 0, 0], [1, r1, 0, 0]];
            assert_eq!(parts_from(&t).delta, 0, "{p1} {q1} {r1}");
        }
    }

    #[test]
    fn random_search_finds_no_obstructed_vector() {
        let mut seen = 0;
        for seed in 0..400u64 {
            let z = word_to_matrix(&crate::gates::seeded_random_word(Regime::QutritD9, 12, seed)).unwrap().column(0);
            if z.sde() == 0 {
                continue;
            }
            seen += 1;
            assert_ne!(qutrit_d_delta(&z).unwrap(), 2);
            if seed % 40 == 0 {
                assert!(!qutrit_d_exhaustive(&z).unwrap().is_empty());
            }
        }
        assert!(seen > 100);
    }

    #[test]
    fn analytic_step_is_in_brute_force_set() {
        let z = m("H D[1,2,3] H D[4,-5,6] H D[7,0,2] H").column(0);
        assert!(z.sde() >= 1);
        let all = qutrit_d_exhaustive(&z).unwrap();
        let kind = qutrit_d_analytic_step(&z).unwrap().unwrap();
        assert!(all.iter().any(|s| s.kind == kind));
    }
}
