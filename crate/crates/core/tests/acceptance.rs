//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Known-false literal claims are run and reported as XFAIL next to
//! the corrected check that must pass.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lemnatomic::classfield::{
    density_report, orbit_law_scan, prop2_evidence, splitting_law_scan, theorem_search, verify_prop1,
    DiscriminantPolicy, TheoremSearch,
};
use lemnatomic::gaussint::factor;
use lemnatomic::lemnatomic::{all_torsion_poly, compute_lemnatomic, divisors_up_to_units, ExactCache, Method};
use lemnatomic::lemniscate::{
    lemnatomic_numeric, lemniscate_constant, lemniscate_constant_quadrature, sl_eval, torsion_values, BigComplex, Real,
};
use lemnatomic::residue::Normalization;
use lemnatomic::zipoly::PolyZi;
use lemnatomic::{Exec, GaussInt, Result};

const BITS: u32 = 256;
const CORPUS: [(&str, usize); 5] = [("-1+2i", 4), ("-1-2i", 4), ("-3", 8), ("-3-4i", 20), ("3-6i", 32)];
/// 2^-100 < 10^-30.
const TOL_LOG2: i64 = -100;

fn g(s: &str) -> GaussInt {
    s.parse().expect("corpus literal")
}

struct Gate {
    quiet: bool,
    failures: Vec<String>,
    xfails: usize,
    /// JSON of every deterministic report, in order.
    reports: Vec<String>,
    exact: ExactCache,
    exec: Exec,
}

impl Gate {
    fn line(&self, s: String) {
        if !self.quiet {
            println!("{s}");
        }
    }

    fn record(&mut self, id: &str, name: &str, outcome: Result<(bool, String)>, elapsed: Duration) {
        let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.line(format!("{} {id} {name}: {detail} [{:.2}s]", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64()));
        if !ok {
            self.failures.push(id.to_string());
        }
    }

    fn xfail(&mut self, id: &str, detail: String) {
        self.xfails += 1;
        self.line(format!("XFAIL {id}: {detail}"));
    }

    fn report<T: serde::Serialize>(&mut self, r: &T) {
        self.reports.push(serde_json::to_string(r).expect("reports serialize"));
    }

    fn run(&mut self, id: &str, name: &str, limit: Option<Duration>, f: impl FnOnce(&mut Gate) -> Result<(bool, String)>) {
        let t = Instant::now();
        let mut outcome = f(self);
        let elapsed = t.elapsed();
        if let (Some(limit), Ok((ok, detail))) = (limit, &mut outcome) {
            if elapsed > limit {
                *ok = false;
                detail.push_str(&format!("; exceeded {}s limit", limit.as_secs()));
            }
        }
        self.record(id, name, outcome, elapsed);
    }

    fn lambda(&mut self, beta: &str) -> Result<PolyZi> {
        self.exact.lemnatomic(&g(beta))
    }
}

fn log2_str(x: &Real) -> String {
    x.log2_floor().map_or("0".into(), |l| format!("2^{l}"))
}

fn ac1(gate: &mut Gate) -> Result<(bool, String)> {
    let agm = lemniscate_constant(BITS);
    let quad = lemniscate_constant_quadrature(BITS);
    let diff = agm.sub(&quad);
    gate.report(&(agm.to_decimal(60), quad.to_decimal(60)));
    Ok((diff.abs_below_pow2(TOL_LOG2), format!("ϖ = {}…, |AGM − quadrature| = {}", agm.to_decimal(30), log2_str(&diff))))
}

fn close(a: &BigComplex, b: &BigComplex) -> bool {
    a.sub(b).abs_below_pow2(TOL_LOG2)
}

fn ac2(gate: &mut Gate) -> Result<(bool, String)> {
    let v = lemniscate_constant(BITS);
    let zero_ok = sl_eval(&BigComplex::zero(BITS))?.s.abs_below_pow2(TOL_LOG2);
    let at_v = sl_eval(&BigComplex::from_real(v.clone()))?.s;
    let one_ok = close(&at_v, &BigComplex::one(BITS));

    let shift = |re: &Real, im: &Real| BigComplex::new(re.clone(), im.clone());
    let literal = [shift(&v, &v), shift(&v, &v.neg())];
    let v2 = v.ldexp(1);
    let periods = [shift(&v2, &v2), shift(&v2, &v2.neg())];
    let minus_i = BigComplex::from_int(0, -1, BITS);

    let mut rng = ChaCha8Rng::seed_from_u64(0x1e3);
    let (mut points, mut skipped) = (0, 0);
    let (mut rot, mut pair, mut per, mut lit, mut quarter) = (0, 0, 0, 0, 0);
    while points < 100 {
        let z = BigComplex::from_f64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), BITS);
        let Ok(p) = sl_eval(&z) else {
            skipped += 1;
            continue;
        };
        points += 1;
        rot += close(&sl_eval(&z.mul_i())?.s, &p.s.mul_i()) as usize;
        pair += p.consistency_defect().abs_below_pow2(TOL_LOG2) as usize;
        let shifted: Vec<BigComplex> = periods.iter().map(|w| sl_eval(&z.add(w)).map(|q| q.s)).collect::<Result<_>>()?;
        per += shifted.iter().all(|s| close(s, &p.s)) as usize;
        let lit_vals: Vec<BigComplex> = literal.iter().map(|w| sl_eval(&z.add(w)).map(|q| q.s)).collect::<Result<_>>()?;
        lit += lit_vals.iter().all(|s| close(s, &p.s)) as usize;
        // what a (1+i)ϖ shift really does
        quarter += close(&lit_vals[0], &minus_i.div(&p.s)?) as usize;
    }
    let ok = zero_ok && one_ok && rot == points && pair == points && per == points && quarter == points;
    gate.report(&(points, skipped, rot, pair, per, lit, quarter));
    gate.xfail(
        "AC2",
        format!(
            "sl(z + (1±i)ϖ) = sl(z) holds at {lit}/{points} points; sl(z + (1+i)ϖ) = −i/sl(z) holds at {quarter}/{points}, \
             so (1±i)ϖ are not periods; the periods 2(1±i)ϖ are checked instead"
        ),
    );
    Ok((
        ok,
        format!(
            "sl(0)=0 {zero_ok}, |sl(ϖ)−1|<1e-30 {one_ok}; over {points} random points ({skipped} near poles redrawn): \
             sl(iz)=i·sl(z) {rot}, |c²−(1−s⁴)|<1e-30 {pair}, periods 2(1±i)ϖ {per}"
        ),
    ))
}

fn ac3(gate: &mut Gate) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (b, _) in CORPUS {
        let beta = g(b);
        let values = torsion_values(&beta, BITS, gate.exec)?;
        let mut min_gap: Option<i64> = None;
        for (i, a) in values.iter().enumerate() {
            for c in &values[i + 1..] {
                let gap = a.value.sub(&c.value).abs().log2_floor().unwrap_or(i64::MIN);
                min_gap = Some(min_gap.map_or(gap, |m| m.min(gap)));
            }
        }
        let n = beta.norm_u64()? as usize;
        let (poly, report) = lemnatomic_numeric(&beta, BITS, gate.exec)?;
        let distinct = values.len() == n && min_gap.is_some_and(|m| m > -(BITS as i64) / 2);
        let rounded = report.max_rounding_error_log2 < -30.0;
        ok &= distinct && rounded;
        parts.push(format!(
            "{b}: {} values, min gap 2^{}, rounding error 2^{:.0}",
            values.len(),
            min_gap.unwrap_or(0),
            report.max_rounding_error_log2
        ));
        gate.report(&(poly, report.precision_bits));
    }
    Ok((ok, parts.join("; ")))
}

/// `|(R/βR)*|` from `Π N(π)^{e-1} (N(π) - 1)`.
fn phi_from_factorization(beta: &GaussInt) -> Result<u64> {
    Ok(factor(beta)?.factors.iter().map(|(p, e)| p.norm.pow(e - 1) * (p.norm - 1)).product())
}

fn ac4(gate: &mut Gate) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (b, table) in CORPUS {
        let phi = phi_from_factorization(&g(b))? as usize;
        let deg = gate.lambda(b)?.degree().unwrap_or(0);
        ok &= deg == phi && phi == table;
        parts.push(format!("deg Λ_{b} = {deg}, phi = {phi}"));
    }
    Ok((ok, parts.join("; ")))
}

fn ac5(gate: &mut Gate) -> Result<(bool, String)> {
    let mut agree = 0;
    let mut checked = 0;
    for (b, _) in CORPUS {
        if g(b).norm_u64()? > 50 {
            continue;
        }
        checked += 1;
        let r = compute_lemnatomic(&g(b), Method::Both, BITS, gate.exec)?;
        r.validate()?;
        agree += (r.pipelines_agree == Some(true)) as usize;
        gate.report(&r);
    }
    Ok((agree == checked, format!("{agree}/{checked} corpus moduli agree coefficientwise")))
}

fn ac6(gate: &mut Gate) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (b, _) in CORPUS {
        let beta = g(b);
        let t = all_torsion_poly(&beta)?;
        let mut prod = PolyZi::one();
        let divisors = divisors_up_to_units(&beta)?;
        for d in &divisors {
            prod = &prod * &gate.exact.lemnatomic(d)?;
        }
        let exact = prod == t && t.degree() == Some(beta.norm_u64()? as usize);
        ok &= exact;
        parts.push(format!("{b}: {} divisors, {}", divisors.len(), if exact { "equal" } else { "MISMATCH" }));
    }
    Ok((ok, parts.join("; ")))
}

fn ac7(gate: &mut Gate) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (b, _) in CORPUS {
        let l = gate.lambda(b)?;
        let r = verify_prop1(&g(b), &l, 1000, gate.exec)?;
        ok &= r.passed && r.checked > 0;
        parts.push(format!("{b}: {} primes, {} counterexamples", r.checked, r.counterexamples.len()));
        gate.report(&r);
    }
    Ok((ok, parts.join("; ")))
}

fn ac8(gate: &mut Gate) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for b in ["-1+2i", "-3"] {
        let l = gate.lambda(b)?;
        let r = splitting_law_scan(&g(b), &l, 2000, gate.exec)?;
        ok &= r.exceptions.is_empty() && r.split_count > 0;
        parts.push(format!("{b}: {} primes, {} split, {} exceptions", r.checked, r.split_count, r.exceptions.len()));
        gate.report(&r);
    }
    Ok((ok, parts.join("; ")))
}

fn ac9(gate: &mut Gate) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for b in ["-1+2i", "-3"] {
        let l = gate.lambda(b)?;
        let r = orbit_law_scan(&g(b), &l, 2000, gate.exec)?;
        ok &= r.exceptions.is_empty() && r.checked > 0;
        parts.push(format!("{b}: {} primes, {} exceptions", r.checked, r.exceptions.len()));
        gate.report(&r);
    }
    Ok((ok, parts.join("; ")))
}

fn ac10(gate: &mut Gate) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (b, target, tol) in [("-1+2i", 0.25, 0.05), ("-3", 0.125, 0.03)] {
        let l = gate.lambda(b)?;
        let r = density_report(&l, 100_000, gate.exec)?;
        ok &= (r.ratio - target).abs() <= tol;
        parts.push(format!("Λ_{b}: {}/{} = {:.4} (target {target} ± {tol})", r.count_p, r.count_all_odd, r.ratio));
        gate.report(&r);
    }
    Ok((ok, parts.join("; ")))
}

fn ac11(gate: &mut Gate) -> Result<(bool, String)> {
    let l = gate.lambda("-1+2i")?;
    let strict = TheoremSearch { bound: 5000, ..TheoremSearch::default() };
    // disc(X^4 + β) = 256 β^3 is even, so the search needs the relaxed policy
    let strict_rejects = theorem_search(&l, strict, gate.exec).is_err_and(|e| e.is_input_error());
    let relaxed = TheoremSearch { policy: DiscriminantPolicy::AllowEven, ..strict };
    let r = theorem_search(&l, relaxed, gate.exec)?;
    let witness = r
        .candidates
        .iter()
        .find(|c| c.beta == g("-1+2i"))
        .is_some_and(|c| c.witness && c.subgroup_order == 1 && c.group_order == 4);
    gate.report(&r);
    let trivial = theorem_search(&PolyZi::from_ints(&[-1, 1]), strict, gate.exec)?;
    let none = trivial.witnesses.is_empty();
    gate.report(&trivial);
    let rejected = theorem_search(&PolyZi::from_ints(&[1, 0, 1]), strict, gate.exec).is_err_and(|e| e.is_input_error());
    Ok((
        witness && none && rejected,
        format!(
            "Λ_-1+2i: witness -1+2i with subgroup 1 of 4 {witness} (even disc {}; strict policy rejects {strict_rejects}); \
             X−1: no witness {none}; X²+1 rejected {rejected}",
            r.disc
        ),
    ))
}

fn ac12(gate: &mut Gate) -> Result<(bool, String)> {
    let l = gate.lambda("-1+2i")?;
    let raw = prop2_evidence(&l, &g("-1+2i"), 1000, Normalization::Raw, gate.exec)?;
    let primary = prop2_evidence(&l, &g("-1+2i"), 1000, Normalization::Primary, gate.exec)?;
    let ok = raw.criterion_satisfied && !primary.criterion_satisfied;
    let detail = format!(
        "raw classes [{}] satisfied {}; primary classes [{}] satisfied {}",
        raw.classes.join(", "),
        raw.criterion_satisfied,
        primary.classes.join(", "),
        primary.criterion_satisfied
    );
    gate.report(&raw);
    gate.report(&primary);
    Ok((ok, detail))
}

fn suite(gate: &mut Gate) {
    let secs = Duration::from_secs;
    gate.run("AC1", "lemniscate constant", Some(secs(1)), ac1);
    gate.run("AC2", "sl function suite", Some(secs(10)), ac2);
    gate.run("AC3", "torsion distinctness", None, ac3);
    gate.run("AC4", "degree law", None, ac4);
    gate.run("AC5", "pipeline agreement", Some(secs(120)), ac5);
    gate.run("AC6", "product identity", None, ac6);
    gate.run("AC7", "separability sweep", Some(secs(60)), ac7);
    gate.run("AC8", "splitting law", None, ac8);
    gate.run("AC9", "Frobenius orbit law", None, ac9);
    gate.run("AC10", "split-prime density", Some(secs(120)), ac10);
    gate.run("AC11", "witness search", None, ac11);
    gate.run("AC12", "normalization evidence", None, ac12);
}

fn fresh(quiet: bool) -> Gate {
    Gate { quiet, failures: Vec::new(), xfails: 0, reports: Vec::new(), exact: ExactCache::new(), exec: Exec::default() }
}

fn main() {
    let mut first = fresh(false);
    suite(&mut first);

    let t = Instant::now();
    let mut second = fresh(true);
    suite(&mut second);
    let a = first.reports.join("\n");
    let b = second.reports.join("\n");
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let written = std::fs::write(dir.join("acceptance_reports.json"), &a).is_ok();
    first.record(
        "AC13",
        "determinism",
        Ok((a == b && second.failures.is_empty(), format!("{} reports, {} bytes, second run byte-identical {}, saved {written}", first.reports.len(), a.len(), a == b))),
        t.elapsed(),
    );

    println!(
        "acceptance: {} of 13 criteria passed, {} expected failure(s) reported",
        13 - first.failures.len(),
        first.xfails
    );
    if !first.failures.is_empty() {
        println!("failed: {}", first.failures.join(", "));
        std::process::exit(1);
    }
}
