//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the console.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use moyalex::builder::{Op, Word};
use moyalex::fixtures::theta_51;
use moyalex::normalize::{
    colored_writhe, link_alexander, normalized_delta, normalized_delta_with, state_contributions, Engine,
};
use moyalex::verify::random::random_planar_trivalent;
use moyalex::verify::{
    chirality, corpus, cross_engine_check, cross_pipeline_check, delta_covariance, move_pairs, planar_properties,
    relation_suite, run_suite, Move, Report, Suite,
};
use moyalex::weights::WeightTable;
use moyalex::{qint, t_half, BigInt, Diagram, Laurent, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn table() -> WeightTable {
    WeightTable::builtin()
}

fn theta_51_file() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/resources/theta_51.json")
}

fn moyalex(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_moyalex"))
        .args(args)
        .env_remove("MOYALEX_WEIGHT_TABLE")
        .output()
        .expect("run the moyalex binary")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(reports: &[Report]) -> Result<(), String> {
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| format!("{}: {}", r.id, r.detail)).collect();
    ensure(failed.is_empty(), || format!("{} failed, first: {}", failed.len(), failed[0]))
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

/// The table rows at `(i, j)`, each `±t^{h/2}[i+j]`.
fn table_rows(i: i64, j: i64) -> Vec<Laurent> {
    let b = qint(i + j);
    [(1, 3 * i + 3 * j), (-1, i + 3 * j), (1, j - i), (-1, 3 * i + j), (1, i + j), (-1, -(i + j)), (1, i - j)]
        .iter()
        .map(|&(c, h)| &(&t_half(h) * &b) * &Laurent::constant(BigInt::from(c)))
        .collect()
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

fn state_table() -> Outcome {
    let start = Instant::now();
    let file = moyalex::file::DiagramFile::from_json(&std::fs::read_to_string(theta_51_file()).unwrap())
        .map_err(|e| e.to_string())?;
    for (i, j) in [(1i64, 1i64), (1, 2), (2, 3)] {
        let b = [("i".to_string(), i), ("j".to_string(), j)].into_iter().collect();
        let d = file.to_diagram(&b).map_err(|e| e.to_string())?;
        let got: Vec<String> = state_contributions(&d, &table())
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(_, v)| v.as_poly().map_or_else(|| format!("non-polynomial {v}"), |p| p.to_string()))
            .collect();
        let want: Vec<String> = table_rows(i, j).iter().map(Laurent::to_string).collect();
        ensure(got.len() == 7, || format!("({i},{j}): {} states", got.len()))?;
        ensure(sorted(got.clone()) == sorted(want.clone()), || format!("({i},{j}): {got:?} vs {want:?}"))?;
    }
    let out = moyalex(&["states", theta_51_file().to_str().unwrap()]);
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<String> = text.lines().filter_map(|l| l.split_once("weight = ").map(|x| x.1.to_string())).collect();
    let symbolic = [
        "t^{(3i+3j)/2}[i+j]",
        "-t^{(i+3j)/2}[i+j]",
        "t^{(-i+j)/2}[i+j]",
        "-t^{(3i+j)/2}[i+j]",
        "t^{(i+j)/2}[i+j]",
        "-t^{(-i-j)/2}[i+j]",
        "t^{(i-j)/2}[i+j]",
    ];
    ensure(sorted(rows.clone()) == sorted(symbolic.map(String::from).to_vec()), || format!("symbolic rows {rows:?}"))?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("7 states at (1,1), (1,2), (2,3) and symbolically, {:.0?}", start.elapsed()))
}

fn five_one() -> Outcome {
    let file = theta_51_file();
    let file = file.to_str().unwrap();
    // (t^3 - 2t^2 + t + 2 - t^{-1})(t^{1/2} + t^{-1/2}), built in q = t^{1/4}
    let first = Laurent::from_terms([(12, 1), (8, -2), (4, 1), (0, 2), (-4, -1)].map(|(e, c)| (e, BigInt::from(c))));
    let want = &first * &(&t_half(1) + &t_half(-1));
    let out = moyalex(&["compute", file, "--color", "i=1", "--color", "j=1"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let line = text.lines().find_map(|l| l.strip_prefix("Δ = ")).ok_or("no Δ line")?;
    let got: Laurent = line.parse().map_err(|e| format!("{e:?}"))?;
    ensure(got == want, || format!("Δ = {got}, want {want}"))?;
    ensure(text.contains("Δ(t) = (-t^{-1} + 2 + t - 2*t^{2} + t^{3})(t^{-1/2} + t^{1/2})"), || text.clone())?;
    let out = moyalex(&["planarity", file]);
    let verdict = String::from_utf8_lossy(&out.stdout).to_string();
    ensure(out.status.code() == Some(1) && verdict.starts_with("NonPlanarCertificate"), || {
        format!("planarity: {verdict} (exit {:?})", out.status.code())
    })?;
    let c = chirality(&theta_51(1, 1), &table()).map_err(|e| e.to_string())?;
    ensure(c.chiral, || "chirality not detected".into())?;
    ensure(c.mirror_delta == c.delta.invert_variable(), || "mirror is not t -> 1/t".into())?;
    Ok(format!(
        "Δ = {}, {}, chiral",
        text.lines().find(|l| l.starts_with("Δ(t) = (")).unwrap()[7..].trim(),
        verdict.trim()
    ))
}

fn relations() -> Outcome {
    let start = Instant::now();
    let reports = relation_suite(3, &table()).map_err(|e| e.to_string())?;
    all_pass(&reports)?;
    let names: std::collections::BTreeSet<&str> = reports.iter().filter_map(|r| r.id.split('/').nth(1)).collect();
    ensure(names.len() == 10, || format!("relations covered: {names:?}"))?;
    within(Duration::from_secs(30), start)?;
    Ok(format!("{} checks over 10 relations, {:.2?}", reports.len(), start.elapsed()))
}

fn dual_engine() -> Outcome {
    let start = Instant::now();
    let members = corpus();
    ensure(members.len() >= 30, || format!("corpus has {} diagrams", members.len()))?;
    let max = members.iter().map(|m| m.diagram.crossing_count()).max().unwrap_or(0);
    ensure(max <= 12, || format!("a corpus member has {max} crossings"))?;
    let reports: Vec<Report> = members.iter().map(|m| cross_engine_check(&m.name, &m.diagram, &table())).collect();
    all_pass(&reports)?;
    within(Duration::from_secs(10), start)?;
    Ok(format!("{} diagrams, up to {max} crossings, {:.2?}", members.len(), start.elapsed()))
}

fn cross_pipeline() -> Outcome {
    let members: Vec<_> = corpus().into_iter().filter(|m| m.diagram.is_framed_trivalent_positive()).collect();
    ensure(!members.is_empty(), || "no framed trivalent diagram in the corpus".into())?;
    let reports: Vec<Report> = members.iter().map(|m| cross_pipeline_check(&m.name, &m.diagram, &table())).collect();
    all_pass(&reports)?;
    Ok(format!("{} framed trivalent diagrams", members.len()))
}

fn invariance() -> Outcome {
    let pairs = move_pairs();
    for mv in Move::ALL {
        ensure(pairs.iter().filter(|p| p.mv == mv).count() >= 2, || format!("fewer than two {mv} pairs"))?;
    }
    // the four kinks of an i-colored strand give t^{i}, 1, 1 and t^{-i}
    let mut powers = std::collections::BTreeSet::new();
    for p in pairs.iter().filter(|p| p.mv == Move::RI) {
        let f = &p.expected_factor;
        let unit = f.terms().count() == 1 && f.terms().all(|(_, c)| *c == BigInt::from(1));
        let e = f.min_exp().unwrap_or(0);
        let ok = unit && (e == 0 || p.before.edges.iter().any(|x| e.abs() == 4 * x.color as i64));
        ensure(ok, || format!("{}: move (I) factor {f}", p.name))?;
        powers.insert(e);
    }
    for i in 1..=3 {
        ensure(powers.contains(&(4 * i)) && powers.contains(&(-4 * i)), || format!("no t^(+-{i}) kink"))?;
    }
    let reports = run_suite(Suite::Moves, &table());
    all_pass(&reports)?;
    let cov = delta_covariance(&corpus(), 20, 7, &table());
    ensure(cov.len() == 20, || format!("{} covariance triples", cov.len()))?;
    all_pass(&cov)?;
    Ok(format!("{} move pairs, 20 basepoint triples", reports.len()))
}

fn property_fuzz() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    for k in 0..100u64 {
        let d = random_planar_trivalent(&mut ChaCha8Rng::seed_from_u64(5000 + k), 1 + k as usize % 8);
        ensure(d.edges.iter().all(|e| (1..=3).contains(&e.color)), || format!("diagram {k}: colors out of range"))?;
        let rm = d.build_regions().map_err(|e| e.to_string())?;
        ensure(rm.connected && d.crossing_count() == 0, || format!("diagram {k} is not connected and planar"))?;
        reports.push(planar_properties(&format!("{k:03}"), &d, &table()));
    }
    all_pass(&reports)?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("100 diagrams, {:.2?}", start.elapsed()))
}

fn closure(colors: &[u32], word: &[(usize, bool)]) -> Diagram {
    let mut ops = vec![Op::Delta(0)];
    ops.extend(word.iter().map(|&(k, over_left)| Op::Cross { k, over_left }));
    Word::closed(colors, ops).build().expect("braid closure")
}

fn link(d: &Diagram) -> Result<Rational, String> {
    link_alexander(d, &table()).map_err(|e| e.to_string())
}

/// The link value again, from the determinant engine.
fn link_by_det(d: &Diagram) -> Result<Rational, String> {
    let r = normalized_delta_with(d, &table(), Engine::Determinant).map_err(|e| e.to_string())?;
    Ok(Rational::from(t_half(-colored_writhe(d))) * r.delta)
}

fn link_sanity() -> Outcome {
    let z = &t_half(-1) - &t_half(1);
    // torus links T(2,n) by skein recursion: T(2,0) is the unlink, T(2,1) the unknot
    let mut oracle = vec![Laurent::zero(), Laurent::one()];
    for n in 2..=7 {
        let next = &oracle[n - 2] + &(&z * &oracle[n - 1]);
        oracle.push(next);
    }
    let trefoil = Laurent::from_terms([(4, 1), (0, -1), (-4, 1)].map(|(e, c)| (e, BigInt::from(c))));
    ensure(oracle[3] == trefoil, || format!("oracle trefoil {}", oracle[3]))?;
    for (n, want) in oracle.iter().enumerate() {
        let d = closure(&[1, 1], &vec![(0, true); n]);
        let (a, b) = (link(&d)?, link_by_det(&d)?);
        ensure(a == Rational::from(want.clone()), || format!("T(2,{n}): {a}, oracle {want}"))?;
        ensure(a == b, || format!("T(2,{n}): engines disagree, {a} vs {b}"))?;
    }
    let unknot = Word::plat(vec![Op::Cup { k: 0, color: 1, left_up: true }, Op::Delta(0), Op::Cap(0)])
        .build()
        .map_err(|e| e.to_string())?;
    ensure(link(&unknot)? == Rational::one(), || "round unknot".into())?;
    let d = normalized_delta(&closure(&[1, 1], &[]), &table()).map_err(|e| e.to_string())?;
    ensure(d.delta.is_zero(), || "2-unlink".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let zr = Rational::from(z);
    for t in 0..10 {
        let len = rng.gen_range(2..=6);
        let word: Vec<(usize, bool)> = (0..len).map(|_| (rng.gen_range(0..2), rng.gen())).collect();
        let at = rng.gen_range(0..len);
        let mut plus = word.clone();
        plus[at].1 = true;
        let mut minus = word.clone();
        minus[at].1 = false;
        let mut zero = word.clone();
        zero.remove(at);
        let colors = [1, 1, 1];
        let lhs = &link(&closure(&colors, &plus))? - &link(&closure(&colors, &minus))?;
        let rhs = &zr * &link(&closure(&colors, &zero))?;
        ensure(lhs == rhs, || format!("triple {t}: {word:?} at {at}: {lhs} vs {rhs}"))?;
    }
    Ok("unknot 1, unlink 0, trefoil t - 1 + t^-1, T(2,0..7) on both engines, 10 skein triples".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("table of states", state_table),
        ("5_1 polynomial", five_one),
        ("relation suite", relations),
        ("dual engines", dual_engine),
        ("cross pipeline", cross_pipeline),
        ("invariance corpus", invariance),
        ("property fuzz", property_fuzz),
        ("link sanity", link_sanity),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{took:.2?}]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} [{took:.2?}]", k + 1);
            }
        }
    }
    println!("acceptance: {}/8 passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
