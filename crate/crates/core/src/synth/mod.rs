//! Exact synthesis engines.
//!
//! Every engine repeatedly left-multiplies the input by a short syllable `G`
//! that lowers the sde of the first column, until a monomial remains:
//! `G_m .. G_1 U = M`. The returned word is `G_1^-1 .. G_m^-1` followed by a
//! word for `M`, so the word's matrix equals `U`.

mod qubit;
mod qutrit_d;
mod qutrit_r;

pub use qubit::{qubit_choose_k, qubit_sde_changes, qubit_synthesize};
pub use qutrit_d::{
    delta_parts, qutrit_d_analytic_step, qutrit_d_delta, qutrit_d_delta_closed_form, qutrit_d_exhaustive, qutrit_d_greedy, qutrit_d_normalize,
    qutrit_d_reduce_step, second_derivative_identity, DStep, DeltaParts,
};
pub use qutrit_r::{qutrit_r_choose_step, qutrit_r_exhaustive, qutrit_r_synthesize};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::gates::{gate_matrix, word_to_matrix, GateSym, GateWord, Regime};
use crate::loc::{LocMatrix, LocVector};
use crate::monomial::monomial_decompose;
use crate::taylor::taylor_mod_p;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// `H T^k`.
    Qubit { k: u8 },
    /// `H Dw[a] R^eps X^delta`.
    QutritR { a: [u8; 3], eps: u8, delta: u8 },
    /// `H D[a; signs] R^eps X^delta`.
    QutritD { exps: [u8; 3], neg: [bool; 3], eps: u8, delta: u8 },
}

/// One verified syllable together with the sde it moves between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduceStep {
    pub kind: StepKind,
    pub sde_before: u32,
    pub sde_after: u32,
}

impl ReduceStep {
    pub fn regime(&self) -> Regime {
        match self.kind {
            StepKind::Qubit { .. } => Regime::Qubit8,
            StepKind::QutritR { .. } => Regime::QutritR3,
            StepKind::QutritD { .. } => Regime::QutritD9,
        }
    }

    pub fn change(&self) -> i64 {
        self.sde_after as i64 - self.sde_before as i64
    }

    /// The syllable as applied to the vector.
    pub fn word(&self) -> GateWord {
        GateWord { regime: self.regime(), syms: step_syms(&self.kind) }
    }

    /// A word for the inverse syllable.
    pub fn inverse_word(&self) -> GateWord {
        let regime = self.regime();
        let syms = match &self.kind {
            StepKind::Qubit { k } => {
                let mut s = Vec::new();
                if *k % 8 != 0 {
                    s.push(GateSym::T((8 - *k % 8) % 8));
                }
                s.push(GateSym::H);
                s
            }
            StepKind::QutritR { a, eps, delta } => {
                let mut s = vec![GateSym::X; ((3 - delta) % 3) as usize];
                if *eps == 1 {
                    s.push(GateSym::R);
                }
                if a.iter().any(|&x| x != 0) {
                    s.push(GateSym::Dw(a.map(|x| (3 - x) % 3)));
                }
                s.extend([GateSym::H, GateSym::H, GateSym::H]);
                s
            }
            StepKind::QutritD { exps, neg, eps, delta } => {
                let mut s = vec![GateSym::X; ((3 - delta) % 3) as usize];
                if *eps == 1 {
                    s.push(GateSym::R);
                }
                if exps.iter().any(|&x| x != 0) || neg.iter().any(|&n| n) {
                    s.push(GateSym::D { exps: exps.map(|x| (9 - x) % 9), neg: *neg });
                }
                s.extend([GateSym::H, GateSym::H, GateSym::H]);
                s
            }
        };
        GateWord { regime, syms }
    }
}

fn step_syms(kind: &StepKind) -> Vec<GateSym> {
    match kind {
        StepKind::Qubit { k } => vec![GateSym::H, GateSym::T(*k)],
        StepKind::QutritR { a, eps, delta } => {
            let mut s = vec![GateSym::H, GateSym::Dw(*a)];
            if *eps == 1 {
                s.push(GateSym::R);
            }
            s.extend(std::iter::repeat_n(GateSym::X, *delta as usize));
            s
        }
        StepKind::QutritD { exps, neg, eps, delta } => {
            let mut s = vec![GateSym::H, GateSym::D { exps: *exps, neg: *neg }];
            if *eps == 1 {
                s.push(GateSym::R);
            }
            s.extend(std::iter::repeat_n(GateSym::X, *delta as usize));
            s
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Complete,
    /// The Clifford+D greedy loop met a vector with this obstruction value.
    Obstructed(u32),
    /// The residual monomial has no table entry at the depth cap.
    TableIncomplete,
}

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub word: GateWord,
    /// `word_to_matrix(word) * residual` is the input.
    pub residual: LocMatrix,
    pub status: Status,
    /// sde of the working matrix before each iteration and at the end.
    pub sde_trace: Vec<u32>,
}

impl SynthesisResult {
    /// Exact check of `word * residual = input`.
    pub fn reconstructs(&self, input: &LocMatrix) -> Result<bool> {
        Ok(word_to_matrix(&self.word)?.mat_mul(&self.residual)? == *input)
    }

    /// sde went down at every iteration.
    pub fn strictly_descending(&self) -> bool {
        self.sde_trace.windows(2).all(|w| w[1] < w[0])
    }
}

pub(crate) fn apply_word(w: &GateWord, m: &LocMatrix) -> Result<LocMatrix> {
    word_to_matrix(w)?.mat_mul(m)
}

pub(crate) fn apply_word_vec(w: &GateWord, v: &LocVector) -> Result<LocVector> {
    word_to_matrix(w)?.mat_vec(v)
}

/// Checks the vector is a unit vector of sde >= 1 whose numerators are all chi-coprime.
pub(crate) fn require_reducible_shape(z: &LocVector) -> Result<()> {
    if z.sde() == 0 {
        return Err(Error::Precondition("vector has sde 0".into()));
    }
    if !z.is_unit_vector() {
        return Err(Error::Precondition("not a unit vector".into()));
    }
    if z.entries().iter().any(|w| w.is_zero() || taylor_mod_p(w).get(0) == 0) {
        return Err(Error::Precondition("numerators are not all chi-coprime".into()));
    }
    Ok(())
}

/// Finish a synthesis once the working matrix is a monomial.
pub(crate) fn finish(
    regime: Regime,
    prefix: GateWord,
    current: LocMatrix,
    sde_trace: Vec<u32>,
) -> Result<SynthesisResult> {
    match monomial_decompose(&current, regime) {
        Ok(w) => Ok(SynthesisResult {
            word: prefix.concat(&w),
            residual: LocMatrix::identity(regime.spec(), regime.dim()),
            status: Status::Complete,
            sde_trace,
        }),
        Err(Error::TableIncomplete(_)) => {
            Ok(SynthesisResult { word: prefix, residual: current, status: Status::TableIncomplete, sde_trace })
        }
        Err(e) => Err(e),
    }
}

/// Breadth-first search for a short word `W` with `W U` monomial.
pub(crate) fn base_case_search(regime: Regime, u: &LocMatrix, alphabet: &[GateSym], max_len: usize) -> Result<GateWord> {
    let gates: Vec<(GateSym, LocMatrix)> =
        alphabet.iter().map(|g| Ok((g.clone(), gate_matrix(regime, g)?))).collect::<Result<_>>()?;
    let mut seen = HashSet::new();
    let mut frontier = vec![(u.clone(), GateWord::empty(regime))];
    seen.insert(u.clone());
    for _ in 0..=max_len {
        let mut next = Vec::new();
        for (m, w) in &frontier {
            if m.is_monomial() {
                return Ok(w.clone());
            }
            for (g, gm) in &gates {
                let prod = gm.mat_mul(m)?;
                if seen.insert(prod.clone()) {
                    let mut word = GateWord { regime, syms: vec![g.clone()] };
                    word.syms.extend(w.syms.iter().cloned());
                    next.push((prod, word));
                }
            }
        }
        frontier = next;
    }
    Err(Error::Inconsistent(format!("no word of length <= {max_len} reaches a monomial")))
}

/// A column whose sde equals the matrix sde.
pub(crate) fn worst_column(m: &LocMatrix) -> LocVector {
    (0..m.dim()).map(|j| m.column(j)).find(|c| c.sde() == m.sde()).expect("some column attains the sde")
}

pub(crate) fn check_input(u: &LocMatrix, regime: Regime) -> Result<()> {
    regime.spec().check_same(u.spec())?;
    if u.dim() != regime.dim() {
        return Err(Error::DimMismatch { left: regime.dim(), right: u.dim() });
    }
    if !u.is_unitary() {
        return Err(Error::NotUnitary);
    }
    Ok(())
}
