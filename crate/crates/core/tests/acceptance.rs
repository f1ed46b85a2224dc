//! One line per acceptance criterion; exits nonzero if any fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use qgx_core::hopfpair::{verify_functional_relations, verify_woronowicz, Functionals, PairingEngine};
use qgx_core::ncalg::{check_overlaps, coaction_check, quantum_lie_check, relation_smoke, RuleSet};
use qgx_core::rtensor::{check_hecke, check_second_inverse, check_ybe, derive_constants};
use qgx_core::suite::{classical_check, run, sigma_tilde_routes, Config, Suite};
use qgx_core::wcalc::{brackets_check, cartan_check, dstar_check, exterior_check, Forms};
use qgx_core::{IndexedTensor, RBundle, Report, StructureConstants};

type Outcome = Result<(), String>;

struct Ctx {
    bundle: RBundle,
    rules: RuleSet,
    engine: PairingEngine,
    funcs: Functionals,
    consts: StructureConstants,
}

impl Ctx {
    fn new(n: usize) -> Self {
        let bundle = RBundle::standard(n);
        let rules = RuleSet::build(&bundle).unwrap();
        let engine = PairingEngine::new(&bundle).unwrap();
        let funcs = Functionals::new(&bundle);
        let consts = derive_constants(&bundle, &engine, &funcs).unwrap();
        Ctx { bundle, rules, engine, funcs, consts }
    }

    fn forms(&self) -> Forms<'_> {
        Forms::new(&self.rules, &self.engine, &self.funcs, 3).unwrap()
    }
}

fn all_pass(r: &Report) -> Outcome {
    match r.failures().next() {
        None if r.entries.is_empty() => Err("empty report".into()),
        None => Ok(()),
        Some(e) => Err(format!("{}: {}", e.equation, e.witness.clone().unwrap_or_default())),
    }
}

fn require(r: &Report, names: &[&str]) -> Outcome {
    for n in names {
        match r.get(n) {
            None => return Err(format!("missing entry {}", n)),
            Some(e) if !e.passed() => return Err(format!("{}: {}", n, e.witness.clone().unwrap_or_default())),
            _ => {}
        }
    }
    Ok(())
}

fn within(t: Instant, limit: Duration, what: &str) -> Outcome {
    if t.elapsed() > limit {
        Err(format!("{} took {:?}, limit {:?}", what, t.elapsed(), limit))
    } else {
        Ok(())
    }
}

fn c1() -> Outcome {
    for n in 1..=3 {
        let t = Instant::now();
        let r = qgx_core::rtensor::build_r(n);
        if !check_ybe(&r) {
            return Err(format!("YBE fails at n = {}", n));
        }
        if !check_hecke(&r).map_err(|e| e.to_string())? {
            return Err(format!("Hecke fails at n = {}", n));
        }
        within(t, Duration::from_secs(if n <= 2 { 1 } else { 60 }), &format!("n = {}", n))?;
    }
    Ok(())
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn c2() -> Outcome {
    for n in 1..=2 {
        let b = RBundle::standard(n);
        if check_second_inverse(&b.r, &b.rtilde) != (true, true) {
            return Err(format!("second inverse contraction fails at n = {}", n));
        }
        if !b.d_is_diagonal_monomial() {
            return Err(format!("D is not a diagonal of Laurent monomials at n = {}", n));
        }
        let g = IndexedTensor::from_json(&golden(&format!("D_n{}.json", n))).map_err(|e| e.to_string())?;
        if g != b.d {
            return Err(format!("D differs from the golden file at n = {}", n));
        }
    }
    Ok(())
}

fn c5(c1: &Ctx, c2: &Ctx) -> Outcome {
    for c in [c1, c2] {
        sigma_tilde_routes(&c.engine, &c.funcs, &c.consts).map_err(|w| w.0)?;
    }
    Ok(())
}

fn c6(c1: &Ctx, c2: &Ctx) -> Outcome {
    let t = Instant::now();
    for c in [c1, c2] {
        all_pass(&relation_smoke(&c.rules))?;
        let o = check_overlaps(&c.rules).map_err(|e| e.to_string())?;
        if !o.resolved() {
            return Err(format!("{} overlaps differ, first {}", o.mismatches.len(), o.mismatches[0]));
        }
    }
    within(t, Duration::from_secs(300), "relations and overlaps")
}

fn c14() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/tests/fixtures");
    let mut seen = 0;
    for f in ["r_lambda_doubled.json", "r_diagonal_changed.json", "r_offdiagonal_q.json"] {
        let r = IndexedTensor::from_json(&std::fs::read_to_string(dir.join(f)).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let mut cfg = Config::new(2);
        cfg.r = Some(r);
        // Cheapest first; stop at the first failing suite.
        let caught = [Suite::Ybe, Suite::Overlaps, Suite::Woronowicz].iter().any(|s| {
            run(*s, &cfg).entries.iter().any(|e| !e.passed() && e.witness.as_ref().is_some_and(|w| !w.is_empty()))
        });
        if !caught {
            return Err(format!("{} passes suites 1, 3 and 6", f));
        }
        seen += 1;
    }
    if seen == 3 {
        Ok(())
    } else {
        Err("fixtures missing".into())
    }
}

fn main() {
    let t0 = Instant::now();
    let n1 = Ctx::new(1);
    let n2 = Ctx::new(2);
    let forms = n2.forms();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("YBE and Hecke for n = 1, 2, 3", Box::new(c1)),
        ("second inverse, D monomial and golden", Box::new(c2)),
        ("Woronowicz conditions (23)-(28), n = 2, degree 3", Box::new(|| all_pass(&verify_woronowicz(&n2.engine, &n2.funcs, 3)))),
        (
            "functional relations (47), (49), (51)-(55), (90)",
            Box::new(|| {
                let r = verify_functional_relations(&n2.engine, &n2.funcs, &n2.consts, 3);
                require(&r, &["(47)", "(49)", "(51)", "(52)", "(53)", "(54)", "(55)", "(90)"])
            }),
        ),
        ("two routes to sigma-tilde agree, n = 1, 2", Box::new(|| c5(&n1, &n2))),
        ("relation families and degree-3 overlaps, n = 1, 2", Box::new(|| c6(&n1, &n2))),
        (
            "(116) from (113) under Y = 1 - lambda X",
            Box::new(|| all_pass(&quantum_lie_check(&n2.bundle, &n2.rules))),
        ),
        ("coaction covariance (117), (118)", Box::new(|| all_pass(&coaction_check(&n2.rules, &n2.engine, 3)))),
        (
            "Cartan identity and (58) on {t, t dt, dt dt}",
            Box::new(|| require(&cartan_check(&forms), &["(63)", "(64)", "(58)"])),
        ),
        (
            "d^2 = 0 and graded Leibniz",
            Box::new(|| require(&exterior_check(&forms), &["d(d(e)) = 0", "(2) graded Leibniz rule"])),
        ),
        ("d* bridge on t-words of length <= 3", Box::new(|| all_pass(&dstar_check(&forms, 3)))),
        (
            "brackets (57) and (89) match the constants",
            Box::new(|| require(&brackets_check(&forms, &n2.consts), &["(57)", "(89)"])),
        ),
        ("classical limit at q = 1", Box::new(|| all_pass(&classical_check(&n2.bundle, Some(&n2.consts))))),
        ("mutation fixtures are caught", Box::new(c14)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        match &res {
            Ok(()) => println!("criterion {:>2} PASS  {} ({:.1?})", i + 1, name, t.elapsed()),
            Err(w) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {} ({:.1?})\n              {}", i + 1, name, t.elapsed(), w);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass ({:.1?})", criteria.len() - failed, criteria.len(), t0.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
