use std::fmt::Write;

use rayon::prelude::*;
use serde_json::{json, Value};

use mahler_core::hilbert::{bounds_check, estimate_trdeg, phi_profile};
use mahler_core::kronecker::{kron_system, lift_algebraic_relation, verify_algebraic_relation, HomogeneousPoly, MonomialIndexMap};
use mahler_core::lift::{guess_function_relations, lift_with_escalation, verify_value_relation, ValueCheck, ValueRelation};
use mahler_core::proof::{build_aux, decay_report, desk_p, height_growth};
use mahler_core::relation::{dim_profile, doubling_check, kernel_basis, shift_check};
use mahler_core::scalar::format_rational;
use mahler_core::{Error, MahlerSystem, Rational, Result, TruncSeries};

use crate::parse;
use crate::Command;

pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub exit: u8,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome { json, text, exit: 0 }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn rationals_json(v: &[Rational]) -> Value {
    Value::from(v.iter().map(format_rational).collect::<Vec<_>>())
}

fn series_text(s: &TruncSeries) -> String {
    let p = s.to_poly();
    let body = if p.is_zero() { "0".to_string() } else { p.to_pretty("z") };
    format!("{body} + O(z^{})", s.order())
}

fn check_text(c: &ValueCheck) -> String {
    match c {
        ValueCheck::Verified { sum, tail_bound } => {
            format!("verified: |partial sum| = |{}| <= tail bound {}", format_rational(sum), format_rational(tail_bound))
        }
        ValueCheck::Refuted { sum, tail_bound, margin } => format!(
            "refuted: partial sum {} exceeds twice the tail bound {} (margin {})",
            format_rational(sum),
            format_rational(tail_bound),
            format_rational(margin)
        ),
        ValueCheck::Inconclusive { sum, tail_bound } => {
            format!("inconclusive: partial sum {} vs tail bound {}", format_rational(sum), format_rational(tail_bound))
        }
    }
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Solve { system, order } => solve(&parse::load_system(system)?, *order),
        Command::Verify { system, series } => verify(&parse::load_system(system)?, &parse::load_series(series)?),
        Command::Cocycle { system, k, alpha } => {
            let alpha = alpha.as_deref().map(parse::rational).transpose()?;
            cocycle(&parse::load_system(system)?, *k, alpha.as_ref())
        }
        Command::Regular { system, alpha } => regular(&parse::load_system(system)?, &parse::rational(alpha)?),
        Command::Dims { system, alpha, delta1, delta2, doubling } => {
            dims(&parse::load_system(system)?, &parse::rational(alpha)?, *delta1, &parse::index_list(delta2)?, *doubling)
        }
        Command::Kernel { system, alpha, delta1, delta2, shift_k, ells } => {
            let shifts = shift_k.as_deref().map(parse::index_list).transpose()?.unwrap_or_default();
            kernel(&parse::load_system(system)?, &parse::rational(alpha)?, *delta1, *delta2, &shifts, &parse::index_list(ells)?)
        }
        Command::Guess { system, deg, order } => guess(&parse::load_system(system)?, *deg, *order),
        Command::Lift { system, alpha, tau, deg, order, max_deg } => lift(
            &parse::load_system(system)?,
            &parse::rational(alpha)?,
            &parse::rationals(tau)?,
            *deg,
            *order,
            *max_deg,
        ),
        Command::Kron { system, d } => kron(&parse::load_system(system)?, *d),
        Command::KronLift { system, alpha, poly, deg, order } => {
            let sys = parse::load_system(system)?;
            let p = HomogeneousPoly::parse(poly, sys.m)?;
            kron_lift(&sys, &parse::rational(alpha)?, &p, *deg, *order)
        }
        Command::Hilbert { system, dmax, reldeg, order, trdeg } => {
            hilbert(&parse::load_system(system)?, *dmax, *reldeg, *order, *trdeg)
        }
        Command::Heights { system, alpha, kmax } => heights(&parse::load_system(system)?, &parse::rational(alpha)?, *kmax),
        Command::Prove { system, alpha, tau, delta1, delta2, kmax, kset, order } => prove(
            &parse::load_system(system)?,
            &parse::rational(alpha)?,
            &parse::rationals(tau)?,
            (*delta1, *delta2),
            *kmax,
            &parse::index_list(kset)?,
            *order,
        ),
    }
}

fn solve(sys: &MahlerSystem, order: usize) -> Result<Outcome> {
    let f = sys.solve_series(order)?;
    let mut text = String::new();
    for (i, s) in f.iter().enumerate() {
        writeln!(text, "f{} = {}", i + 1, series_text(s)).unwrap();
    }
    let series: Vec<Value> = f.iter().map(|s| rationals_json(s.coeffs())).collect();
    Ok(Outcome::ok(json!({ "system": sys.name, "order": order, "series": series }), text))
}

fn verify(sys: &MahlerSystem, f: &[TruncSeries]) -> Result<Outcome> {
    if f.len() != sys.m {
        return Err(Error::DimensionMismatch(format!("{} series given, m = {}", f.len(), sys.m)));
    }
    let given = f.iter().map(TruncSeries::order).min().unwrap_or(0);
    let verified = sys.verify_solution(f);
    let text = format!("verified to order {verified} (input order {given})\n");
    let mut out = Outcome::ok(json!({ "verified_order": verified, "input_order": given }), text);
    if verified < given {
        out.exit = 1;
    }
    Ok(out)
}

fn cocycle(sys: &MahlerSystem, k: u32, alpha: Option<&Rational>) -> Result<Outcome> {
    if let Some(alpha) = alpha {
        let v = sys.eval_cocycle(alpha, k)?;
        let mut text = format!("A_{k}({}) =\n", format_rational(alpha));
        for row in v.to_strings() {
            writeln!(text, "  [{}]", row.join(", ")).unwrap();
        }
        return Ok(Outcome::ok(json!({ "k": k, "alpha": format_rational(alpha), "value": to_json(&v) }), text));
    }
    let a = sys.cocycle(k)?;
    let mut text = format!("A_{k}(z) =\n");
    for row in a.to_rows() {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        writeln!(text, "  [{}]", cells.join(", ")).unwrap();
    }
    Ok(Outcome::ok(json!({ "k": k, "matrix": to_json(&a) }), text))
}

fn regular(sys: &MahlerSystem, alpha: &Rational) -> Result<Outcome> {
    let cert = sys.certify_regular(alpha)?;
    let text = if cert.regular && cert.checked_upto == 0 {
        format!(
            "alpha = {} is regular: |alpha| < {} already, no pole or zero of det A on the orbit\n",
            format_rational(alpha),
            format_rational(&cert.tail_bound_radius)
        )
    } else if cert.regular {
        format!(
            "alpha = {} is regular: k < {} checked exactly, |alpha|^(q^k) < {} beyond\n",
            format_rational(alpha),
            cert.checked_upto,
            format_rational(&cert.tail_bound_radius)
        )
    } else {
        format!(
            "alpha = {} is not regular: A is {} at alpha^(q^{})\n",
            format_rational(alpha),
            cert.failure_kind.unwrap(),
            cert.failing_k.unwrap()
        )
    };
    let exit = if cert.regular { 0 } else { 1 };
    Ok(Outcome { json: to_json(&cert), text, exit })
}

fn dims(sys: &MahlerSystem, alpha: &Rational, delta1: u32, delta2s: &[u32], doubling: bool) -> Result<Outcome> {
    let profile = dim_profile(sys, alpha, delta1, delta2s)?;
    let mut text = format!("delta1 = {delta1}\n{:>7} {:>8} {:>6}", "delta2", "rank", "inc");
    let reports = if doubling {
        text.push_str(&format!(" {:>10} {:>6}", "rank(2d1)", "holds"));
        delta2s.par_iter().map(|&d2| doubling_check(sys, alpha, delta1, d2)).collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    text.push('\n');
    for (i, (d2, rank, inc)) in profile.rows.iter().enumerate() {
        write!(text, "{d2:>7} {rank:>8} {inc:>6}").unwrap();
        if let Some(r) = reports.get(i) {
            write!(text, " {:>10} {:>6}", r.rank_doubled, r.holds).unwrap();
        }
        text.push('\n');
    }
    writeln!(text, "last increment = {}, orbit indices up to k = {}", profile.c1_estimate, profile.k_used_max).unwrap();
    let mut json = json!({ "profile": to_json(&profile) });
    if doubling {
        json["doubling"] = to_json(&reports);
    }
    let mut out = Outcome::ok(json, text);
    if reports.iter().any(|r| !r.holds) {
        out.exit = 1;
    }
    Ok(out)
}

fn kernel(sys: &MahlerSystem, alpha: &Rational, delta1: u32, delta2: u32, shifts: &[u32], ells: &[u32]) -> Result<Outcome> {
    let kb = kernel_basis(sys, alpha, delta1, delta2)?;
    let mut text = format!(
        "box ({delta1}, {delta2}): {} monomials, rank {}, kernel dimension {}\nk used: {:?}\nheld-out k: {:?}\n",
        kb.ncols,
        kb.rank,
        kb.dim(),
        kb.k_used,
        kb.held_out_verified
    );
    for v in &kb.basis {
        writeln!(text, "  {}", kb.format_vector(v)).unwrap();
    }
    let basis = kb.monomial_basis();
    let mut checks = Vec::new();
    for &k in shifts {
        let ok: Vec<bool> = kb.basis.par_iter().map(|v| shift_check(sys, alpha, &basis, v, k, ells)).collect::<Result<_>>()?;
        let pass = ok.iter().all(|&b| b);
        writeln!(text, "shift k = {k}, l in {ells:?}: {}", if pass { "all vanish" } else { "FAILED" }).unwrap();
        checks.push(json!({ "k": k, "ells": ells, "all_vanish": pass }));
    }
    let pass = checks.iter().all(|c| c["all_vanish"] == json!(true));
    let mut out = Outcome::ok(json!({ "kernel": to_json(&kb), "shift_checks": checks }), text);
    if !pass {
        out.exit = 1;
    }
    Ok(out)
}

fn guess(sys: &MahlerSystem, degree: usize, order: usize) -> Result<Outcome> {
    let f = sys.solve_series(2 * order)?;
    let b = guess_function_relations(&f, degree, order)?;
    let mut text = format!(
        "{} relation(s) with coefficient degree <= {degree} (from {} equations, rechecked to order {})\n",
        b.basis.len(),
        b.order,
        b.verified_order
    );
    for v in &b.basis {
        let cells: Vec<String> = v.iter().map(|p| p.to_pretty("z")).collect();
        writeln!(text, "  ({})", cells.join(", ")).unwrap();
    }
    Ok(Outcome::ok(to_json(&b), text))
}

fn lift(sys: &MahlerSystem, alpha: &Rational, tau: &[Rational], degree: usize, order: usize, cap: usize) -> Result<Outcome> {
    let mut text = String::new();
    let mut json = json!({ "alpha": format_rational(alpha), "tau": rationals_json(tau) });
    let mut refuted = false;
    if sys.coeff_bound.is_some() {
        sys.require_regular(alpha)?;
        let f = sys.solve_series(order + 1)?;
        let check = verify_value_relation(sys, &f, &ValueRelation { tau: tau.to_vec(), alpha: alpha.clone() }, order)?;
        writeln!(text, "value relation {}", check_text(&check)).unwrap();
        json["value_check"] = to_json(&check);
        refuted = matches!(check, ValueCheck::Refuted { .. });
        if refuted {
            eprintln!("value relation {}", check_text(&check));
        }
    }
    let r = lift_with_escalation(sys, alpha, tau, degree, order, cap)?;
    writeln!(text, "lift with coefficient degree <= {}, residual order {}:", r.degree_bound, r.residual_order).unwrap();
    for (i, p) in r.coefficients.iter().enumerate() {
        writeln!(text, "  L{}(z) = {}", i + 1, p.to_pretty("z")).unwrap();
    }
    let spec = r.specialize(alpha);
    writeln!(text, "L(alpha) = ({})", spec.iter().map(format_rational).collect::<Vec<_>>().join(", ")).unwrap();
    json["lift"] = to_json(&r);
    json["specialized"] = rationals_json(&spec);
    Ok(Outcome { json, text, exit: if refuted { 1 } else { 0 } })
}

fn kron(sys: &MahlerSystem, d: usize) -> Result<Outcome> {
    let k = kron_system(sys, d)?;
    let map = MonomialIndexMap::new(sys.m, d)?;
    let mut text = format!("degree {d} Kronecker power: size {}, {} monomial classes\n", k.m, map.classes.len());
    for (lambda, class) in &map.classes {
        writeln!(text, "  {lambda:?}: {class:?}").unwrap();
    }
    Ok(Outcome::ok(json!({ "system": to_json(&k), "index_map": to_json(&map) }), text))
}

fn kron_lift(sys: &MahlerSystem, alpha: &Rational, p: &HomogeneousPoly, degree: usize, order: usize) -> Result<Outcome> {
    let mut text = String::new();
    let mut json = json!({ "alpha": format_rational(alpha), "poly": p.to_string() });
    let mut refuted = false;
    if sys.coeff_bound.is_some() {
        sys.require_regular(alpha)?;
        let check = verify_algebraic_relation(sys, alpha, p, order)?;
        writeln!(text, "value relation {}", check_text(&check)).unwrap();
        json["value_check"] = to_json(&check);
        refuted = matches!(check, ValueCheck::Refuted { .. });
        if refuted {
            eprintln!("value relation {}", check_text(&check));
        }
    }
    let r = lift_algebraic_relation(sys, alpha, p, degree, order)?;
    writeln!(text, "P(z, X) = {r}").unwrap();
    writeln!(text, "residual order {} (coefficient degree <= {})", r.residual_order, r.degree_bound).unwrap();
    json["lift"] = to_json(&r);
    json["display"] = Value::from(r.to_string());
    Ok(Outcome { json, text, exit: if refuted { 1 } else { 0 } })
}

fn hilbert(sys: &MahlerSystem, dmax: u32, reldeg: usize, order: usize, trdeg: Option<usize>) -> Result<Outcome> {
    let f = sys.solve_series(order)?;
    let profile = phi_profile(&f, dmax, reldeg, order)?;
    let est = estimate_trdeg(&profile);
    let t = trdeg.unwrap_or(est.t_hat);
    let bounds = bounds_check(&profile, t);
    let mut text = format!("{:>3} {:>6} {:>12}\n", "d", "phi", "C(d+t,t)");
    for (d, phi, lower, _) in &bounds.rows {
        writeln!(text, "{d:>3} {phi:>6} {lower:>12}").unwrap();
    }
    writeln!(text, "estimated transcendence degree {} ({:?})", est.t_hat, est.confidence).unwrap();
    writeln!(
        text,
        "t = {t}: lower bound {}, gamma2 = {}",
        if bounds.lower_bound_holds { "holds" } else { "fails" },
        format_rational(&bounds.gamma2)
    )
    .unwrap();
    Ok(Outcome::ok(json!({ "profile": to_json(&profile), "estimate": to_json(&est), "bounds": to_json(&bounds) }), text))
}

fn heights(sys: &MahlerSystem, alpha: &Rational, kmax: u32) -> Result<Outcome> {
    let t = height_growth(sys, alpha, kmax)?;
    let mut text = format!("{:>3} {:>16} {:>12}\n", "k", "max height", "gamma");
    for r in &t.rows {
        writeln!(text, "{:>3} {:>16.6} {:>12.6}", r.k, r.max_height.value, r.gamma).unwrap();
    }
    writeln!(text, "gamma_hat = {:.6} ({})", t.gamma_hat, if t.stable { "stable" } else { "still growing" }).unwrap();
    Ok(Outcome::ok(to_json(&t), text))
}

fn prove(
    sys: &MahlerSystem,
    alpha: &Rational,
    tau: &[Rational],
    (delta1, delta2): (u32, u32),
    kmax: u32,
    kset: &[u32],
    order: usize,
) -> Result<Outcome> {
    let n = order.max(desk_p(delta1, delta2) as usize + 1);
    let f = sys.solve_series(n)?;
    let aux = build_aux(sys, &f, alpha, tau, delta1, delta2, kset)?;
    let decay = decay_report(&aux, sys, &f, kmax)?;
    let mut text = format!(
        "box ({delta1}, {delta2}), p = {} (theoretical {}), {} unknowns, {} ideal constraints, kernel dimension {}\n",
        aux.p, aux.p_theoretical, aux.unknowns, aux.ideal_constraints, aux.kernel_dim
    );
    writeln!(text, "v0 = {}, E_p has {} terms", aux.v0, aux.e_p_terms).unwrap();
    writeln!(text, "held-out k {:?}: {}", aux.kset_heldout, if aux.heldout_verified { "vanish" } else { "FAILED" }).unwrap();
    writeln!(text, "identity Ecal F^v0 = E_p: {}", if aux.identity_verified { "holds" } else { "FAILED" }).unwrap();
    writeln!(text, "{:>3} {:>6} {:>6} {:>14} {:>14} {:>9}", "k", "zero", "agree", "log|value|", "height", "liouville").unwrap();
    for r in &decay.rows {
        let log = r.log_abs.as_ref().map(|l| format!("{:.6}", l.value)).unwrap_or_else(|| "-inf".into());
        let lv = r.liouville_holds.map(|b| b.to_string()).unwrap_or_else(|| "-".into());
        writeln!(text, "{:>3} {:>6} {:>6} {:>14} {:>14.6} {:>9}", r.k, r.zero, r.agree, log, r.height.value, lv).unwrap();
    }
    let fmt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "n/a".into());
    writeln!(text, "c2_hat = {}, c3_hat = {}", fmt(decay.c2_hat), fmt(decay.c3_hat)).unwrap();
    let pass = aux.heldout_verified && aux.identity_verified && decay.all_agree() && decay.liouville_ok();
    Ok(Outcome { json: json!({ "aux": to_json(&aux), "decay": to_json(&decay) }), text, exit: if pass { 0 } else { 1 } })
}
