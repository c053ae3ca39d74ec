//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints its PASS/FAIL line even when the run succeeds.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclosynth::enumerate::{
    check_orthogonal_sde3, enumerate_solutions, enumerate_unit_vectors, factor_sde3_unitary, permute_columns, Mode,
    QuadTarget,
};
use cyclosynth::gates::{seeded_random_word, word_to_matrix, GateSym, GateWord, Regime};
use cyclosynth::loc::{signed_root_exponent, to_real_tau_basis, LocElem, LocMatrix, LocVector};
use cyclosynth::monomial::{monomial_count, MonomialTable, DEFAULT_DEPTH_CAP};
use cyclosynth::ring::{CycInt, RingSpec};
use cyclosynth::synth::{
    qubit_sde_changes, qubit_synthesize, qutrit_d_analytic_step, qutrit_d_delta, qutrit_d_exhaustive,
    qutrit_d_reduce_step, qutrit_r_synthesize, second_derivative_identity, DStep, ReduceStep, Status,
};
use cyclosynth::taylor::{gde, gde_oracle, phi_derivative_table, taylor_mod_p};

const BUDGET_1: Duration = Duration::from_secs(1);
const BUDGET_2: Duration = Duration::from_secs(30);
const BUDGET_3: Duration = Duration::from_secs(60);
const BUDGET_4: Duration = Duration::from_secs(30);
const BUDGET_5: Duration = Duration::from_secs(120);
const BUDGET_6: Duration = Duration::from_secs(60);
const BUDGET_7: Duration = Duration::from_secs(120);

const ORACLE_SAMPLES: usize = 10_000;
const COEFF_RANGE: i64 = 50;
const ROUND_TRIP_WORDS: usize = 200;
const MAX_WORD_LEN: usize = 40;
const EQUAL_SDE_UNITARIES: usize = 500;
const DELTA_VECTORS: usize = 500;
const ENVELOPE_VECTORS: usize = 1000;
const ENVELOPE_MIN_SDE: u32 = 4;
const ENVELOPE: (i64, i64) = (-1, 2);
const SDE3_UNITARIES: usize = 300;
const CENSUS_PAIR_SAMPLES: usize = 20_000;

struct Report {
    lines: Vec<String>,
    ok: bool,
}

impl Report {
    fn new() -> Self {
        Report { lines: Vec::new(), ok: true }
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.lines.push(format!("    {} {name}", if ok { "ok  " } else { "FAIL" }));
        self.ok &= ok;
    }

    fn note(&mut self, text: String) {
        self.lines.push(format!("    note {text}"));
    }
}

fn within(r: &mut Report, start: Instant, budget: Duration) {
    let t = start.elapsed();
    r.check(&format!("runtime {:.2?} < {:?}", t, budget), t < budget);
}

fn unitary(regime: Regime, rng: &mut ChaCha8Rng) -> LocMatrix {
    let len = rng.gen_range(0..=MAX_WORD_LEN);
    let w = seeded_random_word(regime, len, rng.gen());
    word_to_matrix(&w).unwrap()
}

fn unitary_word(regime: Regime, rng: &mut ChaCha8Rng) -> GateWord {
    let len = rng.gen_range(0..=MAX_WORD_LEN);
    seeded_random_word(regime, len, rng.gen())
}

fn random_elem(spec: RingSpec, rng: &mut ChaCha8Rng) -> CycInt {
    let c: Vec<i64> = (0..spec.phi()).map(|_| rng.gen_range(-COEFF_RANGE..=COEFF_RANGE)).collect();
    CycInt::from_coeffs(spec, c)
}

fn tau_of_chi_power(f: u32) -> (BigInt, BigInt, BigInt) {
    to_real_tau_basis(&CycInt::chi(RingSpec::N9).abs_sq().pow(f)).unwrap()
}

fn triple(a: i64, b: i64, c: i64) -> (BigInt, BigInt, BigInt) {
    (a.into(), b.into(), c.into())
}

fn hadamard(regime: Regime) -> LocMatrix {
    word_to_matrix(&GateWord { regime, syms: vec![GateSym::H] }).unwrap()
}

fn criterion_known_values() -> Report {
    let mut r = Report::new();
    let start = Instant::now();
    let n9 = RingSpec::N9;
    let f = CycInt::from_coeffs(n9, [1, 1, 1, 0, 0, 0]);
    r.check("gde(1 + xi + xi^2) = 2", gde(&f).unwrap() == 2);
    r.check("sde((1 + xi + xi^2) / chi^6) = 4", LocElem::new(f, 6).sde() == 4);
    r.check("gde(2) = 4 over Z[zeta_8]", gde(&CycInt::from_int(RingSpec::N8, 2)).unwrap() == 4);
    r.check("gde(3) = 2 over Z[omega]", gde(&CycInt::from_int(RingSpec::N3, 3)).unwrap() == 2);
    r.check("sde(H) = 3 over Z[xi]", hadamard(Regime::QutritD9).sde() == 3);
    r.check("sde(H) = 1 over Z[omega]", hadamard(Regime::QutritR3).sde() == 1);
    r.check("sde(H) = 2 over Z[zeta_8]", hadamard(Regime::Qubit8).sde() == 2);
    let table = phi_derivative_table(9).unwrap();
    let expected: Vec<BigInt> = [9, 36, 21, 15, 6, 1].map(BigInt::from).to_vec();
    r.check("Phi_9 derivative table = (9, 36, 21, 15, 6, 1)", table == expected);
    r.note(format!("computed Phi_9 derivative table = {:?}", table.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
    let zero_mod_3 = table[..5].iter().all(|v| v % 3u32 == BigInt::from(0)) && &table[5] % 3u32 != BigInt::from(0);
    r.check("all table entries but the last vanish mod 3", zero_mod_3);
    r.check("|chi|^2 = (2, -1, 0) in tau basis", tau_of_chi_power(1) == triple(2, -1, 0));
    r.check("|chi|^4 = (4, -4, 1) in tau basis", tau_of_chi_power(2) == triple(4, -4, 1));
    r.check("|chi|^6 = (9, -15, 6) in tau basis", tau_of_chi_power(3) == triple(9, -15, 6));
    within(&mut r, start, BUDGET_1);
    r
}

fn criterion_oracles() -> Report {
    let mut r = Report::new();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for spec in RingSpec::ALL {
        let mut gde_ok = true;
        let mut deriv_ok = true;
        for _ in 0..ORACLE_SAMPLES {
            let a = random_elem(spec, &mut rng);
            if a.is_zero() {
                continue;
            }
            gde_ok &= gde(&a).unwrap() == gde_oracle(&a).unwrap();
            let t = taylor_mod_p(&a);
            let mut cur = a.clone();
            for k in 1..=spec.phi() {
                let by_derivatives = (0..k).all(|j| t.get(j) == 0);
                let by_division = match cur.try_div_chi() {
                    Ok(q) => {
                        cur = q;
                        true
                    }
                    Err(_) => false,
                };
                deriv_ok &= by_derivatives == by_division;
                if !by_division {
                    break;
                }
            }
        }
        r.check(&format!("gde = gde_oracle on {ORACLE_SAMPLES} elements of Z[zeta_{}]", spec.n()), gde_ok);
        r.check(&format!("derivative test = repeated division for k <= {} in Z[zeta_{}]", spec.phi(), spec.n()), deriv_ok);
    }
    within(&mut r, start, BUDGET_2);
    r
}

fn criterion_round_trip() -> Report {
    let mut r = Report::new();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for regime in [Regime::Qubit8, Regime::QutritR3] {
        let (mut exact, mut descending, mut complete) = (0, 0, 0);
        for _ in 0..ROUND_TRIP_WORDS {
            let u = unitary(regime, &mut rng);
            let res = match regime {
                Regime::Qubit8 => qubit_synthesize(&u),
                _ => qutrit_r_synthesize(&u),
            }
            .unwrap();
            complete += usize::from(res.status == Status::Complete);
            exact += usize::from(word_to_matrix(&res.word).unwrap() == u);
            descending += usize::from(res.strictly_descending());
        }
        let n = ROUND_TRIP_WORDS;
        r.check(&format!("{regime}: {complete}/{n} complete"), complete == n);
        r.check(&format!("{regime}: {exact}/{n} words reproduce the input exactly"), exact == n);
        r.check(&format!("{regime}: {descending}/{n} sde traces strictly decrease"), descending == n);
    }
    within(&mut r, start, BUDGET_3);
    r
}

fn criterion_equal_sde() -> Report {
    let mut r = Report::new();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for regime in Regime::ALL {
        let mut ok = 0;
        let mut max_sde = 0;
        for _ in 0..EQUAL_SDE_UNITARIES {
            let u = unitary(regime, &mut rng);
            let s = u.sde();
            max_sde = max_sde.max(s);
            let all_equal = s == 0 || (0..u.dim()).all(|i| (0..u.dim()).all(|j| u.entry(i, j).sde() == s));
            ok += usize::from(all_equal);
        }
        r.check(&format!("{regime}: {ok}/{EQUAL_SDE_UNITARIES} unitaries have one sde across entries"), ok == EQUAL_SDE_UNITARIES);
        r.note(format!("{regime}: largest sde seen {max_sde}"));
    }
    within(&mut r, start, BUDGET_4);
    r
}

fn step_drops(st: &ReduceStep, z: &LocVector) -> bool {
    word_to_matrix(&st.word()).unwrap().mat_vec(z).unwrap().sde() < z.sde()
}

fn criterion_delta() -> Report {
    let mut r = Report::new();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut agree_delta, mut agree_brute, mut analytic_ok, mut printed_ok, mut corrected_ok) = (0, 0, 0, 0, 0);
    let mut obstructed = 0;
    let mut vectors = 0;
    let mut printed_counterexample = None;
    while vectors < DELTA_VECTORS {
        let u = unitary(Regime::QutritD9, &mut rng);
        let z = u.column(rng.gen_range(0..3));
        if z.sde() == 0 {
            continue;
        }
        vectors += 1;
        let delta = qutrit_d_delta(&z).unwrap();
        let step = qutrit_d_reduce_step(&z).unwrap();
        let succeeded = matches!(step, DStep::Reduce(_));
        obstructed += usize::from(!succeeded);
        agree_delta += usize::from(succeeded == (delta != 2));
        agree_brute += usize::from(succeeded == !qutrit_d_exhaustive(&z).unwrap().is_empty());
        let analytic = match qutrit_d_analytic_step(&z).unwrap() {
            Some(kind) => {
                let st = ReduceStep { kind, sde_before: z.sde(), sde_after: 0 };
                succeeded && step_drops(&st, &z)
            }
            None => !succeeded,
        };
        analytic_ok += usize::from(analytic);
        let (printed, corrected) = second_derivative_identity(&z).unwrap();
        printed_ok += usize::from(printed == 0);
        corrected_ok += usize::from(corrected == 0);
        if printed != 0 && printed_counterexample.is_none() {
            printed_counterexample = Some(z.clone());
        }
    }
    let n = DELTA_VECTORS;
    r.check(&format!("reduce step succeeds iff delta != -1 on {agree_delta}/{n}"), agree_delta == n);
    r.check(&format!("reduce step succeeds iff brute force finds a drop on {agree_brute}/{n}"), agree_brute == n);
    r.check(&format!("closed-form syllable lowers the sde whenever unobstructed on {analytic_ok}/{n}"), analytic_ok == n);
    r.check(&format!("-pi2 + pi1 + sum p1^2 = 0 mod 3 on {printed_ok}/{n}"), printed_ok == n);
    r.note(format!("-pi2 + pi1 - sum p1^2 = 0 mod 3 on {corrected_ok}/{n}"));
    r.note(format!("{obstructed}/{n} vectors were obstructed"));
    if let Some(z) = printed_counterexample {
        r.note(format!("first violating vector: {}", cyclosynth::json::to_line(&cyclosynth::json::vector_to_json(&z))));
    }
    within(&mut r, start, BUDGET_5);
    r
}

fn random_d(rng: &mut ChaCha8Rng) -> GateSym {
    GateSym::D { exps: [0; 3].map(|_| rng.gen_range(0..9)), neg: [0; 3].map(|_| rng.gen_bool(0.5)) }
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn criterion_census() -> Report {
    let mut r = Report::new();
    let start = Instant::now();
    let sde0 = enumerate_unit_vectors(0, Mode::Exact).unwrap();
    let monomial = |z: &LocVector| {
        z.entries().iter().filter(|w| !w.is_zero()).count() == 1
            && z.entries().iter().filter(|w| !w.is_zero()).all(|w| signed_root_exponent(w).is_some())
    };
    r.check(&format!("f = 0 exact: {} vectors (want 54)", sde0.len()), sde0.len() == 54);
    r.check("f = 0 exact: all monomial", sde0.iter().all(monomial));

    let target = QuadTarget::new(3, Mode::Rescaled);
    let sols = enumerate_solutions(&target);
    r.check(&format!("f = 3 rescaled: {} coefficient triples (want 5832)", sols.len()), sols.len() == 5832);
    let shaped = sols.iter().all(|s| s.elements().iter().all(|w| signed_root_exponent(w).is_some()));
    r.check("f = 3 rescaled: every entry is +-xi^a", shaped);

    for f in 0..=3 {
        let vs = enumerate_unit_vectors(f, Mode::Exact).unwrap();
        let ok = vs.iter().all(|z| z.is_unit_vector() && z.sde() == f);
        r.check(&format!("f = {f} exact: {} vectors, all unit with sde {f}", vs.len()), ok);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut factored, mut pairs_ok, mut pairs) = (0, 0, 0);
    for _ in 0..SDE3_UNITARIES {
        let perm = PERMS3[rng.gen_range(0..6)];
        let w = GateWord { regime: Regime::QutritD9, syms: vec![random_d(&mut rng), GateSym::H, random_d(&mut rng)] };
        let mp = word_to_matrix(&w).unwrap();
        // undo the permutation so that factoring has to find it
        let mut inv = [0usize; 3];
        for (j, &pj) in perm.iter().enumerate() {
            inv[pj] = j;
        }
        let m = permute_columns(&mp, &inv).unwrap();
        if let Ok(fz) = factor_sde3_unitary(&m) {
            let back = GateWord { regime: Regime::QutritD9, syms: vec![fz.d1, GateSym::H, fz.d2] };
            factored += usize::from(word_to_matrix(&back).unwrap() == permute_columns(&m, &fz.perm).unwrap());
        }
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    pairs += 1;
                    pairs_ok += usize::from(check_orthogonal_sde3(&m.column(i), &m.column(j)) == Ok(true));
                }
            }
        }
    }
    r.check(&format!("{factored}/{SDE3_UNITARIES} sde-3 unitaries factor as D1 H D2 P"), factored == SDE3_UNITARIES);
    r.check(&format!("exponent rule = inner product, orthogonal, on {pairs_ok}/{pairs} column pairs"), pairs_ok == pairs);

    let census = enumerate_unit_vectors(3, Mode::Rescaled).unwrap();
    let exact3: HashSet<LocVector> = enumerate_unit_vectors(3, Mode::Exact).unwrap().into_iter().collect();
    r.check("f = 3 rescaled and exact censuses are the same vectors", census.iter().all(|v| exact3.contains(v)) && census.len() == exact3.len());
    let (mut agree, mut orth) = (0, 0);
    for _ in 0..CENSUS_PAIR_SAMPLES {
        let a = &census[rng.gen_range(0..census.len())];
        let b = &census[rng.gen_range(0..census.len())];
        if let Ok(o) = check_orthogonal_sde3(a, b) {
            agree += 1;
            orth += usize::from(o);
        }
    }
    r.check(&format!("exponent rule = inner product on {agree}/{CENSUS_PAIR_SAMPLES} census pairs"), agree == CENSUS_PAIR_SAMPLES);
    r.note(format!("{orth} of those pairs are orthogonal"));
    within(&mut r, start, BUDGET_6);
    r
}

fn criterion_tables() -> Report {
    let mut r = Report::new();
    let start = Instant::now();
    for regime in [Regime::Qubit8, Regime::QutritR3] {
        let t = MonomialTable::build(regime, DEFAULT_DEPTH_CAP).unwrap();
        let verified = t.iter().filter(|(m, w)| word_to_matrix(w).unwrap() == **m && m.is_monomial()).count();
        let want = monomial_count(regime);
        r.check(&format!("{regime}: {} of {want} monomials have a word", t.len()), t.is_complete() && t.len() == want);
        r.check(&format!("{regime}: {verified} words verified by exact equality"), verified == want);
    }
    within(&mut r, start, BUDGET_7);
    r
}

fn criterion_envelope() -> Report {
    let mut r = Report::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut seen = 0;
    let mut inside = 0;
    let mut sharp = 0;
    let mut sharp_total = 0;
    let mut hist = std::collections::BTreeMap::new();
    while seen < ENVELOPE_VECTORS {
        let w = unitary_word(Regime::Qubit8, &mut rng);
        let u = word_to_matrix(&w).unwrap();
        let z = u.column(rng.gen_range(0..2));
        if z.sde() < ENVELOPE_MIN_SDE {
            continue;
        }
        seen += 1;
        let changes = qubit_sde_changes(&z).unwrap();
        inside += usize::from(changes.iter().all(|c| (ENVELOPE.0..=ENVELOPE.1).contains(c)));
        for c in &changes {
            *hist.entry(*c).or_insert(0usize) += 1;
            sharp_total += 1;
            sharp += usize::from(*c <= 1);
        }
    }
    r.check(
        &format!("sde(H T^k z) - sde(z) in [{}, {}] for {inside}/{ENVELOPE_VECTORS} vectors", ENVELOPE.0, ENVELOPE.1),
        inside == ENVELOPE_VECTORS,
    );
    r.note(format!("changes <= 1 in {sharp}/{sharp_total} (k, z) pairs; histogram {hist:?}"));
    r
}

type Criterion = (&'static str, fn() -> Report);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 known values", criterion_known_values),
        ("2 oracle equivalence", criterion_oracles),
        ("3 round-trip synthesis", criterion_round_trip),
        ("4 equal sde across entries", criterion_equal_sde),
        ("5 obstruction vs brute force", criterion_delta),
        ("6 enumeration census", criterion_census),
        ("7 monomial tables", criterion_tables),
        ("8 qubit sde envelope", criterion_envelope),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let rep = f();
        println!("acceptance {name}: {}", if rep.ok { "PASS" } else { "FAIL" });
        for l in &rep.lines {
            println!("{l}");
        }
        if !rep.ok {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: {} criteria failed: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
