//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use serde_json::Value;

use mahler_core::kronecker::{lift_algebraic_relation, HomogeneousPoly};
use mahler_core::lift::lift_from_series;
use mahler_core::scalar::{frac, int, parse_rational};
use mahler_core::{MahlerSystem, Matrix, Poly, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, f64, fn() -> Outcome);

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.json"))
}

fn system(name: &str) -> MahlerSystem {
    MahlerSystem::from_json(&std::fs::read_to_string(corpus(name)).unwrap()).unwrap()
}

fn raw(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_mahler")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

/// Runs `mahler --json <args>` and returns the exit code and parsed document.
fn mahler(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, stdout) = raw(&full);
    let doc = serde_json::from_slice(&stdout).unwrap_or(Value::Null);
    (code, doc)
}

fn sys_arg(name: &str) -> String {
    corpus(name).to_string_lossy().into_owned()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rat(v: &Value) -> Rational {
    parse_rational(v.as_str().expect("rational string")).unwrap()
}

fn ac1() -> Outcome {
    let (code, doc) = mahler(&["solve", "--system", &sys_arg("thue_morse"), "--order", "64"]);
    ensure(code == 0, format!("exit {code}"))?;
    let mut prod = Poly::one();
    for n in 0..=6 {
        prod = &prod * &(&Poly::one() - &Poly::monomial(int(1), 1 << n));
    }
    let got: Vec<Rational> = doc["series"][0].as_array().unwrap().iter().map(rat).collect();
    let want: Vec<Rational> = (0..64).map(|i| prod.coeff(i)).collect();
    ensure(got == want, "coefficients differ from the product expansion")?;
    Ok("64 coefficients equal".into())
}

fn ac2() -> Outcome {
    let alpha = frac(1, 2);
    let mut checked = 0;
    for name in ["thue_morse", "cantor2", "cantor3"] {
        let sys = system(name);
        for k in 0..=3u32 {
            for l in 0..=3u32 {
                let shifted = sys.cocycle(l).unwrap().map(|r| r.substitute_power(sys.q.pow(k)));
                let rhs = sys.cocycle(k).unwrap().mul(&shifted).unwrap();
                ensure(sys.cocycle(k + l).unwrap() == rhs, format!("{name}: symbolic k={k} l={l}"))?;
                let at_shift = mahler_core::scalar::rat_pow(&alpha, (sys.q as u64).pow(k));
                let value = sys.eval_cocycle(&alpha, k).unwrap().mul(&sys.eval_cocycle(&at_shift, l).unwrap()).unwrap();
                ensure(sys.eval_cocycle(&alpha, k + l).unwrap() == value, format!("{name}: value k={k} l={l}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (k, l) pairs, symbolic and at 1/2"))
}

fn ac3() -> Outcome {
    let (code, doc) = mahler(&["regular", "--system", &sys_arg("cantor3"), "--alpha", "1/2"]);
    ensure(code == 0 && doc["regular"] == true && doc["checked_upto"] == 0, format!("cantor3: exit {code}, {doc}"))?;
    let (code, doc) = mahler(&["regular", "--system", &sys_arg("singular16"), "--alpha", "1/4"]);
    ensure(code == 1 && doc["regular"] == false && doc["failing_k"] == 1, format!("singular16: exit {code}, {doc}"))?;
    Ok("cantor3 regular with K = 0; [1-16z] fails at k = 1".into())
}

fn poly_of(v: &Value) -> Poly {
    Poly::new(v.as_array().unwrap().iter().map(rat).collect())
}

fn ac4() -> Outcome {
    let cantor3 = sys_arg("cantor3");
    let line = vec![Poly::one(), -&Poly::one(), Poly::z()];
    let (code, doc) = mahler(&["guess", "--system", &cantor3, "--deg", "1", "--order", "64"]);
    ensure(code == 0, format!("guess exit {code}"))?;
    let basis = doc["basis"].as_array().unwrap();
    ensure(basis.len() == 1, format!("guess returned {} vectors", basis.len()))?;
    let v: Vec<Poly> = basis[0].as_array().unwrap().iter().map(poly_of).collect();
    let lead = v[0].coeff(0);
    ensure(lead != int(0), "zero leading coordinate")?;
    let scaled: Vec<Poly> = v.iter().map(|p| p.scale(&(int(1) / &lead))).collect();
    ensure(scaled == line, "guessed relation is not on the line through (1, -1, z)")?;

    let (code, doc) = mahler(&["lift", "--system", &cantor3, "--alpha", "1/2", "--tau", "1,-1,1/2", "--order", "64"]);
    ensure(code == 0, format!("lift exit {code}"))?;
    let coeffs: Vec<Poly> = doc["lift"]["coefficients"].as_array().unwrap().iter().map(poly_of).collect();
    ensure(coeffs == line, format!("lift returned {coeffs:?}"))?;
    let spec: Vec<Rational> = doc["specialized"].as_array().unwrap().iter().map(rat).collect();
    ensure(spec == vec![int(1), int(-1), frac(1, 2)], "L(1/2) differs from tau")?;
    let residual = doc["lift"]["residual_order"].as_u64().unwrap();
    ensure(residual >= 63, format!("residual order {residual}"))?;

    let (code, doc) = mahler(&["lift", "--system", &cantor3, "--alpha", "1/2", "--tau", "1,-1,0", "--order", "64"]);
    ensure(code == 1 && doc["error"]["kind"] == "NoLiftAtDegree", format!("false tau: exit {code}, {doc}"))?;
    let sys = system("cantor3");
    let f = sys.solve_series(256).unwrap();
    let tau = [int(1), int(-1), int(0)];
    for d in 1..=16usize {
        let n = 64usize.max(3 * (d + 1) + 16);
        match lift_from_series(&f, &frac(1, 2), &tau, d, n) {
            Err(mahler_core::Error::NoLiftAtDegree(_)) => {}
            other => return Err(format!("D = {d}: {other:?}")),
        }
    }
    Ok(format!("line (1, -1, z), residual order {residual}; false tau has no lift for D <= 16"))
}

fn random_matrix(rng: &mut rand::rngs::StdRng, n: usize) -> Matrix<Rational> {
    Matrix::new(n, n, (0..n * n).map(|_| int(rng.gen_range(-9..=9))).collect())
}

fn ac5() -> Outcome {
    let mut rng = rand::rngs::StdRng::seed_from_u64(20240601);
    for trial in 0..50 {
        for n in [2usize, 3] {
            let (a, b, c, d) = (random_matrix(&mut rng, n), random_matrix(&mut rng, n), random_matrix(&mut rng, n), random_matrix(&mut rng, n));
            let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
            let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
            ensure(lhs == rhs, format!("mixed product, trial {trial}, n = {n}"))?;
            let det = a.kron(&b).det();
            let nn = n as u64;
            let expect = mahler_core::scalar::rat_pow(&a.det(), nn) * mahler_core::scalar::rat_pow(&b.det(), nn);
            ensure(det == expect, format!("determinant, trial {trial}, n = {n}"))?;
        }
    }
    Ok("50 pairs each of 2x2 and 3x3".into())
}

fn ac6() -> Outcome {
    let poly = "X1*X3 - X2*X3 + 1/2*X3^2";
    let (code, doc) = mahler(&["kron-lift", "--system", &sys_arg("cantor3"), "--alpha", "1/2", "--poly", poly, "--order", "48"]);
    ensure(code == 0, format!("kron-lift exit {code}, {doc}"))?;
    let residual = doc["lift"]["residual_order"].as_u64().unwrap();
    ensure(doc["lift"]["degree"] == 2 && residual >= 48, format!("degree {}, residual {residual}", doc["lift"]["degree"]))?;
    let sys = system("cantor3");
    let p = HomogeneousPoly::parse(poly, 3).unwrap();
    let lifted = lift_algebraic_relation(&sys, &frac(1, 2), &p, 1, 48).unwrap();
    ensure(lifted.specialize(&frac(1, 2)) == p.terms, "P(1/2, X) differs from P")?;
    Ok(format!("{}, residual order {residual}", doc["display"].as_str().unwrap_or("")))
}

fn ac7() -> Outcome {
    let (code, doc) = mahler(&["dims", "--system", &sys_arg("trivial"), "--alpha", "1/2", "--delta1", "1", "--delta2", "1..8"]);
    ensure(code == 0, format!("trivial exit {code}"))?;
    for row in doc["profile"]["rows"].as_array().unwrap() {
        let (d2, rank) = (row[0].as_u64().unwrap(), row[1].as_u64().unwrap());
        ensure(rank == d2 + 1, format!("trivial: d(1, {d2}) = {rank}"))?;
    }
    let mut cells = 0;
    for (name, alpha) in [("trivial", "1/2"), ("thue_morse", "1/2"), ("cantor2", "1/2"), ("cantor3", "1/2"), ("singular16", "1/3")] {
        for d1 in ["1", "2"] {
            let (code, doc) =
                mahler(&["dims", "--system", &sys_arg(name), "--alpha", alpha, "--delta1", d1, "--delta2", "1..10", "--doubling"]);
            ensure(code == 0, format!("{name} delta1 = {d1}: exit {code}, {doc}"))?;
            let incs: Vec<u64> = doc["profile"]["rows"].as_array().unwrap().iter().map(|r| r[2].as_u64().unwrap()).collect();
            ensure(incs.iter().all(|&i| i >= 1), format!("{name} delta1 = {d1}: increments {incs:?}"))?;
            let tail = &incs[incs.len() - 3..];
            ensure(tail.iter().all(|&i| i == tail[0]), format!("{name} delta1 = {d1}: increments {incs:?} not constant"))?;
            for r in doc["doubling"].as_array().unwrap() {
                ensure(r["holds"] == true, format!("{name}: doubling fails at {r}"))?;
                cells += 1;
            }
        }
    }
    Ok(format!("trivial ranks d2 + 1; increments settle; doubling holds at {cells} cells"))
}

fn ac8() -> Outcome {
    let mut vectors = 0;
    for (name, alpha) in [("trivial", "1/2"), ("thue_morse", "1/2"), ("cantor2", "1/2"), ("cantor3", "1/2"), ("singular16", "1/3")] {
        let (code, doc) = mahler(&[
            "kernel", "--system", &sys_arg(name), "--alpha", alpha, "--delta1", "1", "--delta2", "2", "--shift-k", "1,2", "--ells", "5..8",
        ]);
        ensure(code == 0, format!("{name}: exit {code}, {}", doc["error"]))?;
        let checks = doc["shift_checks"].as_array().unwrap();
        ensure(checks.len() == 2 && checks.iter().all(|c| c["all_vanish"] == true), format!("{name}: {checks:?}"))?;
        vectors += doc["kernel"]["basis"].as_array().unwrap().len();
    }
    Ok(format!("{vectors} kernel vectors, k in {{1, 2}}, l in 5..8"))
}

fn ac9() -> Outcome {
    let (code, doc) = mahler(&["heights", "--system", &sys_arg("cantor2"), "--alpha", "1/2", "--kmax", "10"]);
    ensure(code == 0, format!("exit {code}"))?;
    let rows = doc["rows"].as_array().unwrap();
    for k in 1..=10u32 {
        let row = rows.iter().find(|r| r["k"] == k).ok_or(format!("row {k} missing"))?;
        let h = &row["heights"][1];
        let (value, err) = (h["value"].as_f64().unwrap(), h["certified_rel_error"].as_f64().unwrap());
        let want = f64::from(1u32 << (k - 1)) * std::f64::consts::LN_2;
        ensure(err <= 1e-9, format!("k = {k}: certified error {err}"))?;
        ensure((value - want).abs() <= 1e-9 * want, format!("k = {k}: height {value} vs {want}"))?;
    }
    let (_, doc) = prove_doc();
    let rows = doc["decay"]["rows"].as_array().ok_or("no decay rows")?;
    ensure(rows.iter().all(|r| r["liouville_holds"] != false), "Liouville inequality fails on a decay value")?;
    Ok(format!("heights 2^(k-1) log 2 for k <= 10; Liouville holds on {} decay values", rows.len()))
}

fn prove_doc() -> (i32, Value) {
    mahler(&[
        "prove", "--system", &sys_arg("cantor3"), "--alpha", "1/2", "--tau", "1,-1,1/2", "--delta1", "1", "--delta2", "8", "--kmax", "10",
    ])
}

fn ac10() -> Outcome {
    let (code, doc) = prove_doc();
    ensure(code == 0, format!("exit {code}, {}", doc["error"]))?;
    let aux = &doc["aux"];
    ensure(aux["kernel_dim"].as_u64().unwrap_or(0) > 0 && aux["e_p_terms"].as_u64().unwrap_or(0) > 0, "trivial auxiliary function")?;
    ensure(aux["kset_heldout"].as_array().map(Vec::len) == Some(4) && aux["heldout_verified"] == true, "held-out check")?;
    ensure(aux["identity_verified"] == true, "truncated identity")?;
    let rows = doc["decay"]["rows"].as_array().unwrap();
    ensure(rows.len() == 10 && rows.iter().all(|r| r["agree"] == true), "Ecal and P_v0 disagree")?;
    Ok(format!("kernel dimension {}, v0 = {}, p = {}", aux["kernel_dim"], aux["v0"], aux["p"]))
}

fn ac11() -> Outcome {
    let (code, doc) =
        mahler(&["hilbert", "--system", &sys_arg("cantor2"), "--dmax", "5", "--reldeg", "3", "--order", "128"]);
    ensure(code == 0, format!("exit {code}, {}", doc["error"]))?;
    let phi: Vec<u64> = doc["profile"]["phi"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    ensure(phi == vec![1, 2, 3, 4, 5, 6], format!("phi = {phi:?}"))?;
    ensure(doc["profile"]["stabilized_degree"].as_u64().unwrap() <= 3, "stabilization degree")?;
    ensure(doc["estimate"]["t_hat"] == 1 && doc["estimate"]["confidence"] == "stable", format!("estimate {}", doc["estimate"]))?;
    ensure(doc["bounds"]["lower_bound_holds"] == true, "lower bound")?;
    Ok("phi(d) = d + 1, t = 1 stable".into())
}

fn ac12() -> Outcome {
    let cantor3 = sys_arg("cantor3");
    let cantor2 = sys_arg("cantor2");
    let runs: Vec<Vec<&str>> = vec![
        vec!["dims", "--system", &cantor3, "--alpha", "1/2", "--delta1", "1", "--delta2", "1..6", "--doubling"],
        vec!["kernel", "--system", &cantor2, "--alpha", "1/2", "--delta1", "1", "--delta2", "2", "--shift-k", "1,2"],
        vec!["hilbert", "--system", &cantor2, "--dmax", "4", "--order", "96"],
        vec!["prove", "--system", &cantor3, "--alpha", "1/2", "--tau", "1,-1,1/2", "--delta1", "1", "--delta2", "8"],
        vec!["heights", "--system", &cantor2, "--alpha", "1/2"],
        vec!["lift", "--system", &cantor3, "--alpha", "1/2", "--tau", "1,-1,0"],
    ];
    for args in &runs {
        let mut outputs = Vec::new();
        for jobs in ["1", "4", "4"] {
            let mut full = vec!["--json", "--jobs", jobs];
            full.extend(args.iter().copied());
            outputs.push(raw(&full));
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), format!("{} differs between runs", args[0]))?;
    }
    Ok(format!("{} commands byte-identical over --jobs 1, 4, 4", runs.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("AC1", "series vs product oracle", 1.0, ac1),
        ("AC2", "cocycle identity", 5.0, ac2),
        ("AC3", "regularity certificates", 1.0, ac3),
        ("AC4", "lifting round trip", 10.0, ac4),
        ("AC5", "Kronecker identities", 5.0, ac5),
        ("AC6", "algebraic lifting", 30.0, ac6),
        ("AC7", "dimension profile", 60.0, ac7),
        ("AC8", "shift invariance", 30.0, ac8),
        ("AC9", "heights and Liouville", 5.0, ac9),
        ("AC10", "auxiliary function", 120.0, ac10),
        ("AC11", "Hilbert profile", 60.0, ac11),
        ("AC12", "determinism", f64::INFINITY, ac12),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match result {
            Ok(d) if secs <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {secs:.2}s, limit {limit}s")),
            Err(e) => (false, e),
        };
        println!("{id:<5} {} {name:<26} {secs:>7.2}s  {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
