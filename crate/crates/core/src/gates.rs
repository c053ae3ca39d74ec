//! Gate alphabets, their exact matrices, and the word grammar.
//!
//! A word `g1 g2 .. gm` denotes the product `g1 * g2 * .. * gm`; the rightmost
//! gate acts first on a column vector.

use std::fmt;

use crate::error::{Error, Result};
use crate::loc::{LocElem, LocMatrix};
use crate::ring::{CycInt, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// Single-qubit Clifford+T over `Z[zeta_8]`.
    Qubit8,
    /// Single-qutrit Clifford+R over `Z[omega]`.
    QutritR3,
    /// Single-qutrit Clifford+D over `Z[xi]`, `xi^9 = 1`.
    QutritD9,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Qubit8, Regime::QutritR3, Regime::QutritD9];

    pub fn spec(self) -> RingSpec {
        match self {
            Regime::Qubit8 => RingSpec::N8,
            Regime::QutritR3 => RingSpec::N3,
            Regime::QutritD9 => RingSpec::N9,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Regime::Qubit8 => 2,
            _ => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Qubit8 => "qubit",
            Regime::QutritR3 => "qutrit-r",
            Regime::QutritD9 => "qutrit-d",
        }
    }

    pub fn from_name(s: &str) -> Result<Regime> {
        match s {
            "qubit" => Ok(Regime::Qubit8),
            "qutrit-r" => Ok(Regime::QutritR3),
            "qutrit-d" => Ok(Regime::QutritD9),
            other => Err(Error::Malformed(format!("unknown regime \"{other}\""))),
        }
    }

    pub fn from_spec(spec: RingSpec) -> Regime {
        match spec.n() {
            8 => Regime::Qubit8,
            3 => Regime::QutritR3,
            _ => Regime::QutritD9,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GateSym {
    H,
    S,
    X,
    R,
    /// `diag(1, zeta_8^k)`, `k` in `0..8`.
    T(u8),
    /// `diag(omega^a0, omega^a1, omega^a2)`.
    Dw([u8; 3]),
    /// `diag((-1)^b0, (-1)^b1, (-1)^b2)`.
    Rs([u8; 3]),
    /// `diag(+-xi^a0, +-xi^a1, +-xi^a2)`; `neg[i]` selects the minus sign.
    D { exps: [u8; 3], neg: [bool; 3] },
    /// Column `j` has the single entry `sign_j * zeta^phase_j` in row `perm[j]`.
    Mono { perm: Vec<usize>, phases: Vec<u32>, neg: Vec<bool> },
}

impl GateSym {
    pub fn allowed_in(&self, regime: Regime) -> bool {
        use GateSym::*;
        match (self, regime) {
            (H, _) | (Mono { .. }, _) => true,
            (T(_), Regime::Qubit8) => true,
            (S | Dw(_) | Rs(_), Regime::QutritR3) => true,
            (X | R, Regime::QutritR3 | Regime::QutritD9) => true,
            (D { .. }, Regime::QutritD9) => true,
            _ => false,
        }
    }

    /// Build a terminal monomial gate from a signed monomial matrix.
    pub fn mono_from_matrix(m: &LocMatrix) -> Result<GateSym> {
        if !m.is_monomial() {
            return Err(Error::NotMonomial);
        }
        let d = m.dim();
        let mut perm = vec![0; d];
        let mut phases = vec![0; d];
        let mut neg = vec![false; d];
        for j in 0..d {
            let i = (0..d).find(|&i| !m.rows()[i][j].is_zero()).ok_or(Error::NotMonomial)?;
            let (e, s) = crate::loc::signed_root_exponent(&m.rows()[i][j]).ok_or(Error::NotMonomial)?;
            perm[j] = i;
            phases[j] = e;
            neg[j] = s < 0;
        }
        Ok(GateSym::Mono { perm, phases, neg })
    }
}

impl fmt::Display for GateSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<T: fmt::Display>(xs: &[T]) -> String {
            xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        match self {
            GateSym::H => f.write_str("H"),
            GateSym::S => f.write_str("S"),
            GateSym::X => f.write_str("X"),
            GateSym::R => f.write_str("R"),
            GateSym::T(k) => write!(f, "T^{k}"),
            GateSym::Dw(a) => write!(f, "Dw[{}]", list(a)),
            GateSym::Rs(b) => write!(f, "Rs[{}]", list(b)),
            GateSym::D { exps, neg } => {
                let parts: Vec<String> =
                    exps.iter().zip(neg).map(|(e, &n)| format!("{}{e}", if n { "-" } else { "" })).collect();
                write!(f, "D[{}]", parts.join(","))
            }
            GateSym::Mono { perm, phases, neg } => {
                let signs: Vec<&str> = neg.iter().map(|&n| if n { "-" } else { "+" }).collect();
                write!(f, "M({};{};{})", list(perm), list(phases), signs.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateWord {
    pub regime: Regime,
    pub syms: Vec<GateSym>,
}

impl GateWord {
    pub fn empty(regime: Regime) -> Self {
        GateWord { regime, syms: Vec::new() }
    }

    pub fn new(regime: Regime, syms: Vec<GateSym>) -> Result<Self> {
        for s in &syms {
            if !s.allowed_in(regime) {
                return Err(Error::Malformed(format!("gate {s} is not in the {regime} alphabet")));
            }
        }
        Ok(GateWord { regime, syms })
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn concat(&self, other: &GateWord) -> GateWord {
        let mut syms = self.syms.clone();
        syms.extend(other.syms.iter().cloned());
        GateWord { regime: self.regime, syms }
    }

    /// A word for the inverse matrix, built gate by gate.
    pub fn inverse(&self) -> GateWord {
        let syms = self.syms.iter().rev().flat_map(|g| inverse_gate(self.regime, g)).collect();
        GateWord { regime: self.regime, syms }
    }
}

impl fmt::Display for GateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_word(self))
    }
}

/// Gates whose product is the inverse of `g`.
pub fn inverse_gate(regime: Regime, g: &GateSym) -> Vec<GateSym> {
    use GateSym::*;
    let n = regime.spec().n();
    match g {
        H => match regime {
            Regime::Qubit8 => vec![H],
            _ => vec![H, H, H],
        },
        S => vec![S, S],
        X => vec![X, X],
        R => vec![R],
        T(k) => vec![T(((8 - *k as u32) % 8) as u8)],
        Dw(a) => vec![Dw(a.map(|x| (3 - x) % 3))],
        Rs(b) => vec![Rs(*b)],
        D { exps, neg } => vec![D { exps: exps.map(|x| (9 - x) % 9), neg: *neg }],
        Mono { perm, phases, neg } => {
            let d = perm.len();
            let mut p2 = vec![0; d];
            let mut ph2 = vec![0; d];
            let mut n2 = vec![false; d];
            for j in 0..d {
                p2[perm[j]] = j;
                ph2[perm[j]] = (n - phases[j] % n) % n;
                n2[perm[j]] = neg[j];
            }
            vec![Mono { perm: p2, phases: ph2, neg: n2 }]
        }
    }
}

fn diag(spec: RingSpec, d: Vec<CycInt>) -> LocMatrix {
    let k = d.len();
    let rows = (0..k)
        .map(|i| (0..k).map(|j| if i == j { d[i].clone() } else { CycInt::zero(spec) }).collect())
        .collect();
    LocMatrix::new(spec, rows, 0).expect("square")
}

fn signed_root(spec: RingSpec, e: i64, neg: bool) -> CycInt {
    let z = CycInt::zeta_pow(spec, e);
    if neg {
        -z
    } else {
        z
    }
}

/// `1/sqrt(2)` in `Z[zeta_8][1/chi]`, using `sqrt(2) = zeta^2 (1-zeta)(1-zeta^3)`.
pub fn inv_sqrt2() -> LocElem {
    let s = RingSpec::N8;
    let sqrt2 = &(&CycInt::zeta_pow(s, 2) * &CycInt::chi(s)) * &CycInt::from_coeffs(s, [1i64, 0, 0, -1]);
    // 1/sqrt2 = sqrt2 / 2 = sqrt2 * u^-1 / chi^4
    LocElem::new(&sqrt2 * CycInt::p_unit_inv(s), 4)
}

/// `sqrt(-3)` as `omega (1 - omega)` with `omega = zeta^(n/3)`.
pub fn sqrt_minus3(spec: RingSpec) -> CycInt {
    let w = spec.n() as i64 / 3;
    let omega = CycInt::zeta_pow(spec, w);
    &omega * &(&CycInt::one(spec) - &omega)
}

/// `1/sqrt(-3) = -sqrt(-3) u^-1 / chi^phi` (since `-3 = sqrt(-3)^2`).
pub fn inv_sqrt_minus3(spec: RingSpec) -> LocElem {
    let num = -(&sqrt_minus3(spec) * CycInt::p_unit_inv(spec));
    LocElem::new(num, spec.phi() as u32)
}

fn qutrit_hadamard(spec: RingSpec) -> LocMatrix {
    let w = spec.n() as i64 / 3;
    let s = inv_sqrt_minus3(spec);
    let elems: Vec<Vec<LocElem>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| s.mul(&LocElem::integral(CycInt::zeta_pow(spec, w * i * j))).expect("same ring"))
                .collect()
        })
        .collect();
    LocMatrix::from_elems(spec, &elems).expect("square")
}

pub fn gate_matrix(regime: Regime, g: &GateSym) -> Result<LocMatrix> {
    if !g.allowed_in(regime) {
        return Err(Error::Malformed(format!("gate {g} is not in the {regime} alphabet")));
    }
    let spec = regime.spec();
    let d = regime.dim();
    Ok(match g {
        GateSym::H => match regime {
            Regime::Qubit8 => {
                let s = inv_sqrt2();
                let m = s.neg();
                LocMatrix::from_elems(spec, &[vec![s.clone(), s.clone()], vec![s, m]])?
            }
            _ => qutrit_hadamard(spec),
        },
        GateSym::T(k) => diag(spec, vec![CycInt::one(spec), CycInt::zeta_pow(spec, *k as i64)]),
        GateSym::S => diag(spec, vec![CycInt::one(spec), CycInt::zeta_pow(spec, 1), CycInt::one(spec)]),
        GateSym::R => diag(spec, vec![CycInt::one(spec), CycInt::one(spec), -CycInt::one(spec)]),
        GateSym::X => {
            let rows = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| if i == (j + 1) % 3 { CycInt::one(spec) } else { CycInt::zero(spec) })
                        .collect()
                })
                .collect();
            LocMatrix::new(spec, rows, 0)?
        }
        GateSym::Dw(a) => diag(spec, a.iter().map(|&x| CycInt::zeta_pow(spec, x as i64)).collect()),
        GateSym::Rs(b) => diag(spec, b.iter().map(|&x| signed_root(spec, 0, x % 2 == 1)).collect()),
        GateSym::D { exps, neg } => {
            diag(spec, exps.iter().zip(neg).map(|(&e, &n)| signed_root(spec, e as i64, n)).collect())
        }
        GateSym::Mono { perm, phases, neg } => {
            if perm.len() != d || phases.len() != d || neg.len() != d {
                return Err(Error::DimMismatch { left: d, right: perm.len() });
            }
            let mut seen = vec![false; d];
            for &p in perm {
                if p >= d || seen[p] {
                    return Err(Error::Malformed("monomial gate needs a permutation".into()));
                }
                seen[p] = true;
            }
            let mut rows = vec![vec![CycInt::zero(spec); d]; d];
            for j in 0..d {
                rows[perm[j]][j] = signed_root(spec, phases[j] as i64, neg[j]);
            }
            LocMatrix::new(spec, rows, 0)?
        }
    })
}

pub fn word_to_matrix(w: &GateWord) -> Result<LocMatrix> {
    let mut acc = LocMatrix::identity(w.regime.spec(), w.regime.dim());
    for g in &w.syms {
        acc = acc.mat_mul(&gate_matrix(w.regime, g)?)?;
    }
    Ok(acc)
}

pub fn print_word(w: &GateWord) -> String {
    w.syms.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ")
}

struct Tok<'a> {
    text: &'a str,
    pos: usize,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn tokens(text: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok { text: &text[s..i], pos: s });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok { text: &text[s..], pos: s });
    }
    out
}

fn parse_uint(s: &str, pos: usize) -> Result<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(pos, format!("expected a nonnegative integer, found \"{s}\"")));
    }
    s.parse().map_err(|_| syntax(pos, "integer too large"))
}

/// Splits `inner` on `sep`, returning each piece with its byte offset.
fn pieces(inner: &str, base: usize, sep: char) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for part in inner.split(sep) {
        out.push((part, base + off));
        off += part.len() + sep.len_utf8();
    }
    out
}

fn bracketed<'a>(tok: &Tok<'a>, prefix: &str, open: char, close: char) -> Result<(&'a str, usize)> {
    let rest = &tok.text[prefix.len()..];
    if !rest.starts_with(open) {
        return Err(syntax(tok.pos + prefix.len(), format!("expected '{open}'")));
    }
    if !rest.ends_with(close) || rest.len() < 2 {
        return Err(syntax(tok.pos + tok.text.len(), format!("expected closing '{close}'")));
    }
    Ok((&rest[1..rest.len() - 1], tok.pos + prefix.len() + 1))
}

fn triple<'a>(tok: &Tok<'a>, prefix: &str) -> Result<Vec<(&'a str, usize)>> {
    let (inner, base) = bracketed(tok, prefix, '[', ']')?;
    let parts = pieces(inner, base, ',');
    if parts.len() != 3 {
        return Err(syntax(base, format!("expected 3 parameters, found {}", parts.len())));
    }
    Ok(parts)
}

fn bounded(s: &str, pos: usize, limit: u64) -> Result<u8> {
    let v = parse_uint(s, pos)?;
    if v >= limit {
        return Err(syntax(pos, format!("parameter {v} out of range 0..{limit}")));
    }
    Ok(v as u8)
}

fn parse_sym(tok: &Tok<'_>) -> Result<GateSym> {
    let t = tok.text;
    match t {
        "H" => return Ok(GateSym::H),
        "S" => return Ok(GateSym::S),
        "X" => return Ok(GateSym::X),
        "R" => return Ok(GateSym::R),
        _ => {}
    }
    if let Some(k) = t.strip_prefix("T^") {
        let v = parse_uint(k, tok.pos + 2)?;
        return Ok(GateSym::T((v % 8) as u8));
    }
    if t.starts_with("Dw") {
        let p = triple(tok, "Dw")?;
        let mut a = [0u8; 3];
        for (i, (s, pos)) in p.into_iter().enumerate() {
            a[i] = bounded(s, pos, 3)?;
        }
        return Ok(GateSym::Dw(a));
    }
    if t.starts_with("Rs") {
        let p = triple(tok, "Rs")?;
        let mut b = [0u8; 3];
        for (i, (s, pos)) in p.into_iter().enumerate() {
            b[i] = bounded(s, pos, 2)?;
        }
        return Ok(GateSym::Rs(b));
    }
    if t.starts_with("D[") {
        let p = triple(tok, "D")?;
        let mut exps = [0u8; 3];
        let mut neg = [false; 3];
        for (i, (s, pos)) in p.into_iter().enumerate() {
            let (body, n, off) = match s.as_bytes().first() {
                Some(b'-') => (&s[1..], true, 1),
                Some(b'+') => (&s[1..], false, 1),
                _ => (s, false, 0),
            };
            exps[i] = (parse_uint(body, pos + off)? % 9) as u8;
            neg[i] = n;
        }
        return Ok(GateSym::D { exps, neg });
    }
    if t.starts_with("M(") {
        let (inner, base) = bracketed(tok, "M", '(', ')')?;
        let groups = pieces(inner, base, ';');
        if groups.len() != 3 {
            return Err(syntax(base, "monomial gate needs perm;phases;signs"));
        }
        let perm = pieces(groups[0].0, groups[0].1, ',')
            .into_iter()
            .map(|(s, pos)| parse_uint(s, pos).map(|v| v as usize))
            .collect::<Result<Vec<_>>>()?;
        let phases = pieces(groups[1].0, groups[1].1, ',')
            .into_iter()
            .map(|(s, pos)| parse_uint(s, pos).map(|v| v as u32))
            .collect::<Result<Vec<_>>>()?;
        let neg = pieces(groups[2].0, groups[2].1, ',')
            .into_iter()
            .map(|(s, pos)| match s {
                "+" => Ok(false),
                "-" => Ok(true),
                _ => Err(syntax(pos, format!("expected '+' or '-', found \"{s}\""))),
            })
            .collect::<Result<Vec<_>>>()?;
        if perm.len() != phases.len() || perm.len() != neg.len() {
            return Err(syntax(base, "monomial gate lists differ in length"));
        }
        return Ok(GateSym::Mono { perm, phases, neg });
    }
    Err(syntax(tok.pos, format!("unknown gate \"{t}\"")))
}

/// Parse a whitespace-separated word for a known regime.
pub fn parse_word(text: &str, regime: Regime) -> Result<GateWord> {
    let mut syms = Vec::new();
    for tok in tokens(text) {
        let g = parse_sym(&tok)?;
        if !g.allowed_in(regime) {
            return Err(syntax(tok.pos, format!("gate \"{}\" is not in the {regime} alphabet", tok.text)));
        }
        if let GateSym::Mono { perm, phases, .. } = &g {
            if perm.len() != regime.dim() {
                return Err(syntax(tok.pos, format!("monomial gate must have {} columns", regime.dim())));
            }
            let n = regime.spec().n();
            let mut seen = vec![false; perm.len()];
            for &p in perm {
                if p >= perm.len() || seen[p] {
                    return Err(syntax(tok.pos, "monomial gate needs a permutation"));
                }
                seen[p] = true;
            }
            if phases.iter().any(|&e| e >= n) {
                return Err(syntax(tok.pos, format!("monomial phases must lie in 0..{n}")));
            }
        }
        syms.push(g);
    }
    Ok(GateWord { regime, syms })
}

/// The regime implied by regime-specific tokens, if any.
pub fn infer_regime(text: &str) -> Result<Option<Regime>> {
    let mut found: Option<Regime> = None;
    for tok in tokens(text) {
        let g = parse_sym(&tok)?;
        let r = match g {
            GateSym::T(_) => Some(Regime::Qubit8),
            GateSym::S | GateSym::Dw(_) | GateSym::Rs(_) => Some(Regime::QutritR3),
            GateSym::D { .. } => Some(Regime::QutritD9),
            _ => None,
        };
        if let Some(r) = r {
            match found {
                Some(f) if f != r => {
                    return Err(syntax(tok.pos, format!("gate \"{}\" mixes regimes {f} and {r}", tok.text)))
                }
                _ => found = Some(r),
            }
        }
    }
    Ok(found)
}

/// A uniformly drawn gate kind (with uniform parameters) per position.
pub fn random_word<R: rand::Rng + ?Sized>(regime: Regime, len: usize, rng: &mut R) -> GateWord {
    let syms = (0..len)
        .map(|_| match regime {
            Regime::Qubit8 => match rng.gen_range(0..2) {
                0 => GateSym::H,
                _ => GateSym::T(rng.gen_range(1..8)),
            },
            Regime::QutritR3 => match rng.gen_range(0..6) {
                0 => GateSym::H,
                1 => GateSym::S,
                2 => GateSym::X,
                3 => GateSym::R,
                4 => GateSym::Dw([rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..3)]),
                _ => GateSym::Rs([rng.gen_range(0..2), rng.gen_range(0..2), rng.gen_range(0..2)]),
            },
            Regime::QutritD9 => match rng.gen_range(0..4) {
                0 => GateSym::H,
                1 => GateSym::X,
                2 => GateSym::R,
                _ => GateSym::D {
                    exps: [rng.gen_range(0..9), rng.gen_range(0..9), rng.gen_range(0..9)],
                    neg: [rng.gen(), rng.gen(), rng.gen()],
                },
            },
        })
        .collect();
    GateWord { regime, syms }
}

/// [`random_word`] driven by a seeded ChaCha8 stream.
pub fn seeded_random_word(regime: Regime, len: usize, seed: u64) -> GateWord {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    random_word(regime, len, &mut rng)
}
