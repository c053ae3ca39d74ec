//! Command-line front end. `run` never exits the process, so it is testable.
//!
//! JSON arguments (`--elem`, `--vec`, `--mat`) are taken inline when they
//! start with `{` and read from a file otherwise. Failures print
//! `{"error": kind, "message": text}` and exit with 1; an obstructed
//! Clifford+D reduction exits with 2.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use crate::enumerate::{enumerate_unit_vectors, Mode};
use crate::error::{Error, Result};
use crate::gates::{
    infer_regime, parse_word, print_word, seeded_random_word, word_to_matrix, Regime,
};
use crate::json::{elem_from_json, matrix_from_json, matrix_to_json, parse, to_line, vector_from_json, vector_to_json};
use crate::loc::{div_chi_pow, to_real_tau_basis, LocElem, LocMatrix};
use crate::ring::{CycInt, RingSpec};
use crate::synth::{
    qubit_choose_k, qubit_synthesize, qutrit_d_delta, qutrit_d_greedy, qutrit_d_reduce_step, qutrit_r_choose_step,
    qutrit_r_synthesize, DStep, ReduceStep, Status,
};
use crate::taylor::{gde, phi_derivative_table, taylor_mod_p};

#[derive(Parser, Debug)]
#[command(name = "cyclosynth", version, about = "Exact cyclotomic arithmetic and gate synthesis")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// chi-adic valuation of a ring element
    Gde {
        #[arg(long)]
        ring: u32,
        #[arg(long)]
        elem: String,
    },
    /// Smallest denominator exponent of an element, vector or matrix
    Sde {
        #[arg(long)]
        ring: u32,
        #[arg(long, group = "obj")]
        elem: Option<String>,
        #[arg(long, group = "obj")]
        vec: Option<String>,
        #[arg(long, group = "obj")]
        mat: Option<String>,
        /// denominator exponent for --elem
        #[arg(long, default_value_t = 0)]
        denom: u32,
    },
    /// Derivatives at 1 divided by k!, mod p
    Taylor {
        #[arg(long)]
        ring: u32,
        #[arg(long)]
        elem: String,
    },
    /// Matrix of a gate word
    Word2mat {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        regime: Option<String>,
    },
    /// Exact comparison of a word against a matrix
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        mat: String,
    },
    /// Exact synthesis of a unitary
    Synth {
        #[arg(long)]
        regime: String,
        #[arg(long)]
        mat: String,
    },
    /// One sde-lowering syllable for a unit vector
    ReduceStep {
        #[arg(long, default_value = "qutrit-d")]
        regime: String,
        #[arg(long)]
        vec: String,
    },
    /// Clifford+D obstruction value of a qutrit vector
    Delta {
        #[arg(long)]
        vec: String,
    },
    /// Census of qutrit unit vectors over Z[xi] with a given sde
    Enumerate {
        #[arg(long)]
        sde: u32,
        #[arg(long)]
        rescaled: bool,
        /// write the census here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random word
    RandomWord {
        #[arg(long)]
        regime: String,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Regression checks on known values
    Selftest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String) -> Self {
        CliOutput { code: 0, stdout, stderr: String::new() }
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

#[derive(Serialize)]
struct CensusSummary {
    f: u32,
    mode: &'static str,
    count: usize,
}

#[derive(Serialize)]
struct StepRecord {
    status: &'static str,
    step: String,
    sde_before: u32,
    sde_after: u32,
}

fn line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("records serialize");
    s.push('\n');
    s
}

fn error_output(kind: &str, message: String) -> CliOutput {
    CliOutput { code: 1, stdout: line(&ErrorRecord { error: kind, message }), stderr: String::new() }
}

/// Parse `argv` (including the program name) and execute.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliOutput::ok(e.to_string()),
                _ => error_output("usage", e.to_string().trim_end().to_string()),
            };
        }
    };
    match execute(cli.cmd) {
        Ok(out) => out,
        Err(e) => error_output(e.kind(), e.to_string()),
    }
}

fn read_json_arg(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        parse(trimmed)
    } else {
        let text = std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
        parse(&text)
    }
}

fn expect_ring(spec: RingSpec, ring: u32) -> Result<()> {
    RingSpec::new(ring)?.check_same(spec)
}

fn regime_for_matrix(m: &LocMatrix) -> Result<Regime> {
    let r = Regime::from_spec(m.spec());
    if m.dim() != r.dim() {
        return Err(Error::DimMismatch { left: r.dim(), right: m.dim() });
    }
    Ok(r)
}

fn check_regime(r: Regime, spec: RingSpec, dim: usize) -> Result<()> {
    r.spec().check_same(spec)?;
    if dim != r.dim() {
        return Err(Error::DimMismatch { left: r.dim(), right: dim });
    }
    Ok(())
}

fn word_regime(word: &str, explicit: Option<&str>) -> Result<Regime> {
    let inferred = infer_regime(word)?;
    match (explicit, inferred) {
        (Some(name), inf) => {
            let r = Regime::from_name(name)?;
            if let Some(i) = inf {
                if i != r {
                    return Err(Error::Precondition(format!("word uses {i} gates but --regime is {r}")));
                }
            }
            Ok(r)
        }
        (None, Some(r)) => Ok(r),
        (None, None) => Err(Error::Precondition("cannot infer the regime from this word; pass --regime".into())),
    }
}

fn step_output(st: &ReduceStep) -> CliOutput {
    CliOutput::ok(line(&StepRecord {
        status: "reduced",
        step: print_word(&st.word()),
        sde_before: st.sde_before,
        sde_after: st.sde_after,
    }))
}

fn execute(cmd: Command) -> Result<CliOutput> {
    match cmd {
        Command::Gde { ring, elem } => {
            let a = elem_from_json(&read_json_arg(&elem)?)?;
            expect_ring(a.spec(), ring)?;
            Ok(CliOutput::ok(format!("{}\n", gde(&a)?)))
        }
        Command::Sde { ring, elem, vec, mat, denom } => {
            let s = if let Some(e) = elem {
                let a = elem_from_json(&read_json_arg(&e)?)?;
                expect_ring(a.spec(), ring)?;
                LocElem::new(a, denom).sde()
            } else if let Some(v) = vec {
                let v = vector_from_json(&read_json_arg(&v)?)?;
                expect_ring(v.spec(), ring)?;
                v.sde()
            } else if let Some(m) = mat {
                let m = matrix_from_json(&read_json_arg(&m)?)?;
                expect_ring(m.spec(), ring)?;
                m.sde()
            } else {
                return Err(Error::Precondition("one of --elem, --vec, --mat is required".into()));
            };
            Ok(CliOutput::ok(format!("{s}\n")))
        }
        Command::Taylor { ring, elem } => {
            let a = elem_from_json(&read_json_arg(&elem)?)?;
            expect_ring(a.spec(), ring)?;
            let t = taylor_mod_p(&a);
            let mut obj = serde_json::Map::new();
            obj.insert("ring".into(), Value::from(ring));
            obj.insert("taylor".into(), Value::from(t.entries().to_vec()));
            Ok(CliOutput::ok(format!("{}\n", to_line(&Value::Object(obj)))))
        }
        Command::Word2mat { word, regime } => {
            let r = word_regime(&word, regime.as_deref())?;
            let m = word_to_matrix(&parse_word(&word, r)?)?;
            Ok(CliOutput::ok(format!("{}\n", to_line(&matrix_to_json(&m)))))
        }
        Command::Verify { word, mat } => {
            let m = matrix_from_json(&read_json_arg(&mat)?)?;
            let r = regime_for_matrix(&m)?;
            let w = parse_word(&word, word_regime(&word, Some(r.name()))?)?;
            Ok(CliOutput::ok(format!("{}\n", word_to_matrix(&w)? == m)))
        }
        Command::Synth { regime, mat } => {
            let r = Regime::from_name(&regime)?;
            let m = matrix_from_json(&read_json_arg(&mat)?)?;
            check_regime(r, m.spec(), m.dim())?;
            let res = match r {
                Regime::Qubit8 => qubit_synthesize(&m)?,
                Regime::QutritR3 => qutrit_r_synthesize(&m)?,
                Regime::QutritD9 => qutrit_d_greedy(&m)?,
            };
            let mut obj = serde_json::Map::new();
            obj.insert("word".into(), Value::from(print_word(&res.word)));
            obj.insert("sde_trace".into(), Value::from(res.sde_trace.clone()));
            let code = match res.status {
                Status::Complete => {
                    obj.insert("status".into(), Value::from("complete"));
                    0
                }
                Status::Obstructed(d) => {
                    obj.insert("status".into(), Value::from("obstructed"));
                    obj.insert("delta".into(), Value::from(d));
                    obj.insert("residual".into(), matrix_to_json(&res.residual));
                    2
                }
                Status::TableIncomplete => {
                    obj.insert("status".into(), Value::from("table_incomplete"));
                    obj.insert("residual".into(), matrix_to_json(&res.residual));
                    1
                }
            };
            Ok(CliOutput { code, stdout: format!("{}\n", to_line(&Value::Object(obj))), stderr: String::new() })
        }
        Command::ReduceStep { regime, vec } => {
            let r = Regime::from_name(&regime)?;
            let v = vector_from_json(&read_json_arg(&vec)?)?;
            check_regime(r, v.spec(), v.dim())?;
            match r {
                Regime::Qubit8 => Ok(step_output(&qubit_choose_k(&v, -1)?)),
                Regime::QutritR3 => Ok(step_output(&qutrit_r_choose_step(&v)?)),
                Regime::QutritD9 => match qutrit_d_reduce_step(&v)? {
                    DStep::Reduce(st) => Ok(step_output(&st)),
                    DStep::Obstructed(d) => {
                        let mut obj = serde_json::Map::new();
                        obj.insert("status".into(), Value::from("obstructed"));
                        obj.insert("delta".into(), Value::from(d));
                        Ok(CliOutput { code: 2, stdout: format!("{}\n", to_line(&Value::Object(obj))), stderr: String::new() })
                    }
                },
            }
        }
        Command::Delta { vec } => {
            let v = vector_from_json(&read_json_arg(&vec)?)?;
            check_regime(Regime::QutritD9, v.spec(), v.dim())?;
            Ok(CliOutput::ok(format!("{}\n", qutrit_d_delta(&v)?)))
        }
        Command::Enumerate { sde, rescaled, out } => {
            let mode = if rescaled { Mode::Rescaled } else { Mode::Exact };
            let vs = enumerate_unit_vectors(sde, mode)?;
            let mut text = String::new();
            for v in &vs {
                text.push_str(&to_line(&vector_to_json(v)));
                text.push('\n');
            }
            text.push_str(&line(&CensusSummary { f: sde, mode: mode.name(), count: vs.len() }));
            match out {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    Ok(CliOutput::ok(line(&CensusSummary { f: sde, mode: mode.name(), count: vs.len() })))
                }
                None => Ok(CliOutput::ok(text)),
            }
        }
        Command::RandomWord { regime, len, seed } => {
            let r = Regime::from_name(&regime)?;
            Ok(CliOutput::ok(format!("{}\n", print_word(&seeded_random_word(r, len, seed)))))
        }
        Command::Selftest => {
            let checks = regression_checks()?;
            let mut text = String::new();
            let mut failed = 0;
            for (name, ok) in &checks {
                text.push_str(&format!("{} {name}\n", if *ok { "ok  " } else { "FAIL" }));
                failed += usize::from(!ok);
            }
            text.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
            Ok(CliOutput { code: i32::from(failed > 0), stdout: text, stderr: String::new() })
        }
    }
}

fn hadamard_sde(r: Regime) -> Result<u32> {
    Ok(word_to_matrix(&parse_word("H", r)?)?.sde())
}

/// Known small values of the ring machinery, as `(name, passed)`.
pub fn regression_checks() -> Result<Vec<(String, bool)>> {
    let n9 = RingSpec::N9;
    let f = CycInt::from_coeffs(n9, [1, 1, 1, 0, 0, 0]);
    let tau_ok = |f: u32, want: (i64, i64, i64)| -> Result<bool> {
        let x = CycInt::chi(n9).abs_sq().pow(f);
        Ok(to_real_tau_basis(&x)? == (BigInt::from(want.0), BigInt::from(want.1), BigInt::from(want.2)))
    };
    let table = phi_derivative_table(9)?;
    let table_want: Vec<BigInt> = [9, 18, 21, 15, 6, 1].map(BigInt::from).to_vec();
    let residues_ok = table.iter().take(5).all(|v| (v % 3u32) == BigInt::from(0)) && table[5] == BigInt::from(1);
    Ok(vec![
        ("gde(1+xi+xi^2) = 2".into(), gde(&f)? == 2),
        ("sde((1+xi+xi^2)/chi^6) = 4".into(), LocElem::new(f.clone(), 6).sde() == 4),
        ("gde(2) = 4 over Z[zeta_8]".into(), gde(&CycInt::from_int(RingSpec::N8, 2))? == 4),
        ("gde(3) = 2 over Z[omega]".into(), gde(&CycInt::from_int(RingSpec::N3, 3))? == 2),
        ("sde(H) = 3 for Clifford+D".into(), hadamard_sde(Regime::QutritD9)? == 3),
        ("sde(H) = 1 for Clifford+R".into(), hadamard_sde(Regime::QutritR3)? == 1),
        ("sde(H) = 2 for Clifford+T".into(), hadamard_sde(Regime::Qubit8)? == 2),
        ("Phi_9 derivative table = (9,18,21,15,6,1)".into(), table == table_want),
        ("Phi_9 derivative table vanishes mod 3 below k = 6".into(), residues_ok),
        ("|chi|^2 = 2 - tau".into(), tau_ok(1, (2, -1, 0))?),
        ("|chi|^4 = 4 - 4 tau + tau^2".into(), tau_ok(2, (4, -4, 1))?),
        ("|chi|^6 = 9 - 15 tau + 6 tau^2".into(), tau_ok(3, (9, -15, 6))?),
        ("1 + xi + xi^2 = chi^2 unit".into(), div_chi_pow(&f, 2).map(|q| gde(&q).ok() == Some(0)).unwrap_or(false)),
    ])
}
