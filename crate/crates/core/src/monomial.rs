//! Words for signed monomial (sde 0) matrices.
//!
//! Qubit and Clifford+R tables come from a breadth-first closure over the
//! gate alphabet, deduplicated by exact matrix. Clifford+D monomials are
//! decomposed directly as `X^d (H H)^r D`.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::gates::{gate_matrix, parse_word, word_to_matrix, GateSym, GateWord, Regime};
use crate::json::{matrix_from_json, matrix_to_json, to_line};
use crate::loc::{signed_root_exponent, LocMatrix};

pub const DEFAULT_DEPTH_CAP: usize = 14;
const CACHE_VERSION: u64 = 1;

/// Number of signed monomial matrices in each regime.
pub fn monomial_count(regime: Regime) -> usize {
    match regime {
        Regime::Qubit8 => 2 * 8 * 8,
        Regime::QutritR3 => 6 * 6 * 6 * 6,
        Regime::QutritD9 => 6 * 18 * 18 * 18,
    }
}

fn alphabet(regime: Regime) -> Vec<GateSym> {
    match regime {
        Regime::Qubit8 => std::iter::once(GateSym::H).chain((1..8).map(GateSym::T)).collect(),
        Regime::QutritR3 => {
            let mut a = vec![GateSym::H, GateSym::S, GateSym::X, GateSym::R];
            for x in 0..27u8 {
                a.push(GateSym::Dw([x / 9, (x / 3) % 3, x % 3]));
            }
            for x in 0..8u8 {
                a.push(GateSym::Rs([x / 4, (x / 2) % 2, x % 2]));
            }
            a
        }
        Regime::QutritD9 => vec![GateSym::H, GateSym::X, GateSym::R],
    }
}

/// Largest sde a search node may have. Every monomial is reachable through
/// matrices of at most this sde (one Hadamard layer).
fn node_sde_cap(regime: Regime) -> u32 {
    match regime {
        Regime::Qubit8 => 2,
        Regime::QutritR3 => 1,
        Regime::QutritD9 => 3,
    }
}

#[derive(Clone, Debug)]
pub struct MonomialTable {
    regime: Regime,
    depth_cap: usize,
    entries: HashMap<LocMatrix, GateWord>,
}

impl MonomialTable {
    /// Breadth-first closure up to `depth_cap`, stopping once every monomial has a word.
    pub fn build(regime: Regime, depth_cap: usize) -> Result<Self> {
        if regime == Regime::QutritD9 {
            return Err(Error::Precondition("Clifford+D monomials are decomposed directly".into()));
        }
        let gates: Vec<(GateSym, LocMatrix)> =
            alphabet(regime).into_iter().map(|g| { let m = gate_matrix(regime, &g).expect("alphabet gate"); (g, m) }).collect();
        let cap = node_sde_cap(regime);
        let target = monomial_count(regime);
        let id = LocMatrix::identity(regime.spec(), regime.dim());
        let mut entries = HashMap::new();
        let mut seen = HashSet::new();
        seen.insert(id.clone());
        entries.insert(id.clone(), GateWord::empty(regime));
        let mut frontier = vec![(id, GateWord::empty(regime))];
        let mut depth = 0;
        while depth < depth_cap && entries.len() < target && !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for (m, w) in &frontier {
                for (g, gm) in &gates {
                    let prod = m.mat_mul(gm)?;
                    if prod.sde() > cap || seen.contains(&prod) {
                        continue;
                    }
                    seen.insert(prod.clone());
                    let mut word = w.clone();
                    word.syms.push(g.clone());
                    if prod.is_monomial() {
                        entries.insert(prod.clone(), word.clone());
                    }
                    next.push((prod, word));
                }
            }
            frontier = next;
        }
        Ok(MonomialTable { regime, depth_cap, entries })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.len() == monomial_count(self.regime)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LocMatrix, &GateWord)> {
        self.entries.iter()
    }

    pub fn lookup(&self, m: &LocMatrix) -> Result<GateWord> {
        if !m.is_monomial() {
            return Err(Error::NotMonomial);
        }
        self.entries.get(m).cloned().ok_or(Error::TableIncomplete(self.depth_cap))
    }

    pub fn to_json(&self) -> Value {
        let mut ents: Vec<(String, String)> =
            self.entries.iter().map(|(m, w)| (to_line(&matrix_to_json(m)), w.to_string())).collect();
        ents.sort();
        let mut map = Map::new();
        for (k, v) in ents {
            map.insert(k, Value::String(v));
        }
        let mut o = Map::new();
        o.insert("version".into(), Value::from(CACHE_VERSION));
        o.insert("regime".into(), Value::from(self.regime.name()));
        o.insert("depth_cap".into(), Value::from(self.depth_cap));
        o.insert("entries".into(), Value::Object(map));
        Value::Object(o)
    }

    /// Reads a cache, re-verifying every word against its matrix.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |s: &str| Error::Malformed(format!("monomial cache: {s}"));
        let o = v.as_object().ok_or_else(|| bad("not an object"))?;
        if o.get("version").and_then(Value::as_u64) != Some(CACHE_VERSION) {
            return Err(bad("unsupported version"));
        }
        let regime = Regime::from_name(o.get("regime").and_then(Value::as_str).ok_or_else(|| bad("missing regime"))?)?;
        let depth_cap = o.get("depth_cap").and_then(Value::as_u64).ok_or_else(|| bad("missing depth_cap"))? as usize;
        let mut entries = HashMap::new();
        for (k, w) in o.get("entries").and_then(Value::as_object).ok_or_else(|| bad("missing entries"))? {
            let m = matrix_from_json(&crate::json::parse(k)?)?;
            let word = parse_word(w.as_str().ok_or_else(|| bad("word must be a string"))?, regime)?;
            if word_to_matrix(&word)? != m {
                return Err(Error::Inconsistent(format!("cached word \"{word}\" does not match its matrix")));
            }
            entries.insert(m, word);
        }
        Ok(MonomialTable { regime, depth_cap, entries })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_json())?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&crate::json::parse(&std::fs::read_to_string(path)?)?)
    }

    /// Loads `path` if it holds a table for `regime`, otherwise builds and writes it.
    pub fn load_or_build(path: &Path, regime: Regime, depth_cap: usize) -> Result<Self> {
        if let Ok(t) = Self::load(path) {
            if t.regime == regime {
                return Ok(t);
            }
        }
        let t = Self::build(regime, depth_cap)?;
        t.save(path)?;
        Ok(t)
    }
}

static QUBIT_TABLE: OnceLock<MonomialTable> = OnceLock::new();
static QUTRIT_TABLE: OnceLock<MonomialTable> = OnceLock::new();

fn slot(regime: Regime) -> Option<&'static OnceLock<MonomialTable>> {
    match regime {
        Regime::Qubit8 => Some(&QUBIT_TABLE),
        Regime::QutritR3 => Some(&QUTRIT_TABLE),
        Regime::QutritD9 => None,
    }
}

/// Make `table` the process-wide table for its regime (first install wins).
pub fn install_table(table: MonomialTable) -> bool {
    match slot(table.regime) {
        Some(s) => s.set(table).is_ok(),
        None => false,
    }
}

/// The process-wide table, built on first use with the default depth cap.
pub fn shared_table(regime: Regime) -> Result<&'static MonomialTable> {
    let s = slot(regime).ok_or_else(|| Error::Precondition("no table for Clifford+D".into()))?;
    if let Some(t) = s.get() {
        return Ok(t);
    }
    let t = MonomialTable::build(regime, DEFAULT_DEPTH_CAP)?;
    let _ = s.set(t);
    Ok(s.get().expect("just set"))
}

/// Column `j` of the monomial lives in row `perm[j]`.
fn monomial_perm(m: &LocMatrix) -> Vec<usize> {
    let d = m.dim();
    (0..d).map(|j| (0..d).find(|&i| !m.rows()[i][j].is_zero()).expect("monomial")).collect()
}

fn decompose_d9(m: &LocMatrix) -> Result<GateWord> {
    let regime = Regime::QutritD9;
    let perm = monomial_perm(m);
    for r in 0..2usize {
        for delta in 0..3usize {
            // X^delta (H H)^r sends e_j to (-1)^r e_{delta + (-1)^r j}
            let fits = (0..3).all(|j| {
                let s = if r == 0 { j } else { (3 - j) % 3 };
                (delta + s) % 3 == perm[j]
            });
            if !fits {
                continue;
            }
            let mut syms = vec![GateSym::X; delta];
            if r == 1 {
                syms.extend([GateSym::H, GateSym::H]);
            }
            let prefix = GateWord { regime, syms };
            let rest = word_to_matrix(&prefix.inverse())?.mat_mul(m)?;
            let mut exps = [0u8; 3];
            let mut neg = [false; 3];
            for j in 0..3 {
                let (e, s) = signed_root_exponent(&rest.rows()[j][j]).ok_or(Error::NotMonomial)?;
                exps[j] = e as u8;
                neg[j] = s < 0;
            }
            let mut word = prefix;
            word.syms.push(GateSym::D { exps, neg });
            if word_to_matrix(&word)? != *m {
                return Err(Error::Inconsistent("monomial decomposition failed to verify".into()));
            }
            return Ok(word);
        }
    }
    Err(Error::NotMonomial)
}

/// A word over the regime's alphabet whose matrix equals the monomial `m`.
pub fn monomial_decompose(m: &LocMatrix, regime: Regime) -> Result<GateWord> {
    regime.spec().check_same(m.spec())?;
    if m.dim() != regime.dim() {
        return Err(Error::DimMismatch { left: regime.dim(), right: m.dim() });
    }
    if !m.is_monomial() {
        return Err(Error::NotMonomial);
    }
    if *m == LocMatrix::identity(regime.spec(), regime.dim()) {
        return Ok(GateWord::empty(regime));
    }
    let word = match regime {
        Regime::QutritD9 => decompose_d9(m)?,
        _ => shared_table(regime)?.lookup(m)?,
    };
    if word_to_matrix(&word)? != *m {
        return Err(Error::Inconsistent("table word does not match".into()));
    }
    Ok(word)
}
