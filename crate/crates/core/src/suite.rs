//! Named verification suites and the shared configuration that drives them.

use std::fmt;
use std::str::FromStr;

use crate::hopfpair::{table_checks, verify_functional_relations, verify_woronowicz, Functionals, PairingEngine};
use crate::linalg::Matrix;
use crate::ncalg::{check_overlaps, coaction_check, quantum_lie_check, relation_smoke, x_relations, RuleSet};
use crate::qfield::{rat, FieldError, Rat, RatFunc};
use crate::report::{Report, Witness};
use crate::rtensor::{
    check_braid, check_second_inverse, derive_constants, hecke_witness, ybe_witness, IndexedTensor, RBundle,
    StructureConstants,
};
use crate::wcalc::{brackets_check, cartan_check, dstar_check, exterior_check, tilded_check, Forms, DEFAULT_GRADE_CAP};

#[derive(Clone, Debug)]
pub struct Config {
    pub n: usize,
    pub degree: usize,
    pub grade_cap: usize,
    pub fuel: u64,
    /// Replaces the built-in R-matrix when set.
    pub r: Option<IndexedTensor>,
}

impl Config {
    pub fn new(n: usize) -> Self {
        Config { n, degree: 3, grade_cap: DEFAULT_GRADE_CAP, fuel: crate::ncalg::DEFAULT_FUEL, r: None }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n < 1 {
            return Err("n must be at least 1".into());
        }
        if self.degree < 1 {
            return Err("degree must be at least 1".into());
        }
        if !(1..=3).contains(&self.grade_cap) {
            return Err("grade cap must be in 1..3".into());
        }
        if self.fuel < 1 {
            return Err("fuel must be at least 1".into());
        }
        if let Some(r) = &self.r {
            if r.legs() != 4 || r.n() != self.n {
                return Err(format!("R-matrix file has n = {} and {} legs; expected n = {} and 4 legs", r.n(), r.legs(), self.n));
            }
        }
        Ok(())
    }

    pub fn r_matrix(&self) -> IndexedTensor {
        self.r.clone().unwrap_or_else(|| crate::rtensor::build_r(self.n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Ybe,
    Hecke,
    Woronowicz,
    Relations,
    Overlaps,
    Cartan,
    Coactions,
    Tilded,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] =
        ["ybe", "hecke", "woronowicz", "relations", "overlaps", "cartan", "coactions", "tilded", "all"];
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "ybe" => Suite::Ybe,
            "hecke" => Suite::Hecke,
            "woronowicz" => Suite::Woronowicz,
            "relations" => Suite::Relations,
            "overlaps" => Suite::Overlaps,
            "cartan" => Suite::Cartan,
            "coactions" => Suite::Coactions,
            "tilded" => Suite::Tilded,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite {:?}; expected one of {}", s, Suite::NAMES.join(", "))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [
            Suite::Ybe,
            Suite::Hecke,
            Suite::Woronowicz,
            Suite::Relations,
            Suite::Overlaps,
            Suite::Cartan,
            Suite::Coactions,
            Suite::Tilded,
            Suite::All,
        ]
        .iter()
        .position(|x| x == self)
        .expect("listed");
        f.write_str(Suite::NAMES[i])
    }
}

/// The tensors exported by `constants`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constant {
    Sigma,
    SigmaTilde,
    C,
    CTilde,
    D,
    R,
    RTilde,
}

impl FromStr for Constant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "sigma" => Constant::Sigma,
            "sigmaTilde" => Constant::SigmaTilde,
            "C" => Constant::C,
            "CTilde" => Constant::CTilde,
            "D" => Constant::D,
            "R" => Constant::R,
            "Rtilde" => Constant::RTilde,
            _ => return Err(format!("unknown tensor {:?}; expected one of sigma, sigmaTilde, C, CTilde, D, R, Rtilde", s)),
        })
    }
}

/// Everything a suite may need, built on demand. Setup failures become report entries.
struct Ctx<'c> {
    cfg: &'c Config,
    bundle: Result<RBundle, Witness>,
}

fn wit(e: impl fmt::Display) -> Witness {
    Witness(e.to_string())
}

impl<'c> Ctx<'c> {
    fn new(cfg: &'c Config) -> Self {
        Ctx { cfg, bundle: RBundle::from_r(cfg.r_matrix()).map_err(wit) }
    }
}

/// Builds the pairing layer; `None` after recording the failure in `rep`.
fn pairing(b: &RBundle, rep: &mut Report) -> Option<(PairingEngine, Functionals)> {
    match PairingEngine::new(b) {
        Ok(e) => Some((e, Functionals::new(b))),
        Err(e) => {
            rep.push("pairing table", None, Err(wit(e)));
            None
        }
    }
}

fn constants(b: &RBundle, e: &PairingEngine, f: &Functionals, rep: &mut Report) -> Option<StructureConstants> {
    match derive_constants(b, e, f) {
        Ok(c) => Some(c),
        Err(err) => {
            rep.push("structure constants", None, Err(wit(err)));
            None
        }
    }
}

fn rules(b: &RBundle, cfg: &Config, rep: &mut Report) -> Option<RuleSet> {
    match RuleSet::build(b) {
        Ok(r) => Some(r.with_fuel(cfg.fuel)),
        Err(e) => {
            rep.push("rule set", None, Err(wit(e)));
            None
        }
    }
}

fn ybe_suite(cfg: &Config) -> Report {
    let mut rep = Report::new();
    let r = cfg.r_matrix();
    let w = match ybe_witness(&r) {
        None => Ok(()),
        Some(ix) => Err(Witness(format!("R12 R13 R23 and R23 R13 R12 differ at entry {}", one_based(&ix)))),
    };
    rep.push("(95)", None, w);
    rep
}

fn one_based(ix: &[usize]) -> String {
    let v: Vec<String> = ix.iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", v.join(","))
}

fn hecke_suite(ctx: &Ctx) -> Report {
    let mut rep = Report::new();
    let r = ctx.cfg.r_matrix();
    let w = match hecke_witness(&r) {
        Ok(None) => Ok(()),
        Ok(Some(ix)) => Err(Witness(format!("R - R21^-1 differs from lambda P at entry {}", one_based(&ix)))),
        Err(e) => Err(wit(e)),
    };
    rep.push("(96)", None, w);
    let w = ctx.bundle.as_ref().map_err(Clone::clone).and_then(|b| match check_second_inverse(&b.r, &b.rtilde) {
        (true, true) => Ok(()),
        (a, _) => Err(Witness(format!("{} contraction is not the identity", if a { "second" } else { "first" }))),
    });
    rep.push("(97)", None, w);
    let w = ctx.bundle.as_ref().map_err(Clone::clone).and_then(|b| {
        if b.d_is_diagonal_monomial() {
            Ok(())
        } else {
            Err(Witness("D is not diagonal with Laurent monomial entries".into()))
        }
    });
    rep.push("D is a diagonal of Laurent monomials", None, w);
    rep
}

/// σ̃ by pairing φ against r, compared with the matrix inverse of σ.
pub fn sigma_tilde_routes(engine: &PairingEngine, funcs: &Functionals, consts: &StructureConstants) -> Result<(), Witness> {
    let m = consts.dim();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let v = engine.pair(funcs.phi(l, i), &funcs.r(k, j)).map_err(wit)?;
                    if v != consts.sigma_tilde(i, j, k, l) {
                        return Err(Witness(format!(
                            "<phi, r> and sigma^-1 differ at ({},{},{},{}): {} vs {}",
                            i + 1,
                            j + 1,
                            k + 1,
                            l + 1,
                            v,
                            consts.sigma_tilde(i, j, k, l)
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn woronowicz_suite(ctx: &Ctx) -> Report {
    let mut rep = Report::new();
    let b = match &ctx.bundle {
        Ok(b) => b,
        Err(w) => {
            rep.push("R bundle", None, Err(w.clone()));
            return rep;
        }
    };
    let Some((engine, funcs)) = pairing(b, &mut rep) else { return rep };
    let deg = ctx.cfg.degree;
    rep.extend(table_checks(&engine, deg));
    rep.extend(verify_woronowicz(&engine, &funcs, deg));
    let Some(consts) = constants(b, &engine, &funcs, &mut rep) else { return rep };
    rep.push("(86)", None, sigma_tilde_routes(&engine, &funcs, &consts));
    let braid = if check_braid(&consts.sigma) { Ok(()) } else { Err(Witness("sigma violates the braid relation".into())) };
    rep.push("(45) braid relation", None, braid);
    rep.extend(verify_functional_relations(&engine, &funcs, &consts, deg));
    rep
}

fn nc_suite(ctx: &Ctx, which: Suite) -> Report {
    let mut rep = Report::new();
    let b = match &ctx.bundle {
        Ok(b) => b,
        Err(w) => {
            rep.push("R bundle", None, Err(w.clone()));
            return rep;
        }
    };
    let Some(rs) = rules(b, ctx.cfg, &mut rep) else { return rep };
    match which {
        Suite::Relations => rep.extend(relation_smoke(&rs)),
        Suite::Overlaps => {
            let w = match check_overlaps(&rs) {
                Ok(o) if o.resolved() => Ok(()),
                Ok(o) => Err(Witness(format!("{} of {} overlaps differ; first: {}", o.mismatches.len(), o.checked, o.mismatches[0]))),
                Err(e) => Err(wit(e)),
            };
            rep.push("overlap ambiguities resolve", Some(3), w);
            rep.extend(quantum_lie_check(b, &rs));
        }
        Suite::Coactions => {
            let Some((engine, _)) = pairing(b, &mut rep) else { return rep };
            rep.extend(coaction_check(&rs, &engine, ctx.cfg.degree));
        }
        _ => unreachable!("not an algebra suite"),
    }
    rep
}

fn forms_suite(ctx: &Ctx, which: Suite) -> Report {
    let mut rep = Report::new();
    let b = match &ctx.bundle {
        Ok(b) => b,
        Err(w) => {
            rep.push("R bundle", None, Err(w.clone()));
            return rep;
        }
    };
    let Some(rs) = rules(b, ctx.cfg, &mut rep) else { return rep };
    let Some((engine, funcs)) = pairing(b, &mut rep) else { return rep };
    let Some(consts) = constants(b, &engine, &funcs, &mut rep) else { return rep };
    let forms = match Forms::new(&rs, &engine, &funcs, ctx.cfg.grade_cap) {
        Ok(f) => f,
        Err(e) => {
            rep.push("forms layer", None, Err(wit(e)));
            return rep;
        }
    };
    let deg = ctx.cfg.degree;
    match which {
        Suite::Cartan => {
            rep.extend(exterior_check(&forms));
            rep.extend(cartan_check(&forms));
            rep.extend(dstar_check(&forms, deg));
            rep.extend(brackets_check(&forms, &consts));
        }
        Suite::Tilded => rep.extend(tilded_check(&forms, b, &consts, deg)),
        _ => unreachable!("not a forms suite"),
    }
    rep
}

fn eval_matrix(m: &Matrix, q0: &Rat) -> Result<Vec<Vec<Rat>>, (usize, usize, FieldError)> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).eval_at(q0).map_err(|e| (i, j, e))).collect())
        .collect()
}

/// Classical limit at q = 1: σ² = 1, λ = 0, the (112) tail matrix vanishes, and 1/λ is reported as a pole.
pub fn classical_check(bundle: &RBundle, consts: Option<&StructureConstants>) -> Report {
    let mut rep = Report::new();
    let one = rat(1);
    let lam = match bundle.lambda.eval_at(&one) {
        Ok(v) if v == rat(0) => Ok(()),
        Ok(v) => Err(Witness(format!("lambda(1) = {}", v))),
        Err(e) => Err(wit(e)),
    };
    rep.push("lambda vanishes at q = 1", None, lam);

    if let Some(c) = consts {
        let w = eval_matrix(&c.sigma_matrix(), &one)
            .map_err(|(i, j, e)| Witness(format!("sigma entry ({},{}) at q = 1: {}", i + 1, j + 1, e)))
            .and_then(|s| {
                let k = s.len();
                for i in 0..k {
                    for j in 0..k {
                        let v: Rat = (0..k).map(|x| &s[i][x] * &s[x][j]).sum();
                        let want = if i == j { rat(1) } else { rat(0) };
                        if v != want {
                            return Err(Witness(format!("sigma(1)^2 entry ({},{}) = {}", i + 1, j + 1, v)));
                        }
                    }
                }
                Ok(())
            });
        rep.push("sigma at q = 1 squares to the identity", None, w);
    }

    let r = bundle.r.to_matrix4();
    let k = r.rows();
    let swap = Matrix::from_fn(k, k, |row, col| {
        let n = bundle.n;
        if row == (col % n) * n + col / n {
            RatFunc::one()
        } else {
            RatFunc::zero()
        }
    });
    let r21 = &(&swap * &r) * &swap;
    let tail = &Matrix::identity(k) - &(&r * &r21);
    let w = eval_matrix(&tail, &one)
        .map_err(|(i, j, e)| Witness(format!("tail entry ({},{}) at q = 1: {}", i + 1, j + 1, e)))
        .and_then(|t| match t.iter().flatten().position(|v| *v != rat(0)) {
            None => Ok(()),
            Some(p) => Err(Witness(format!("1 - R12 R21 entry ({},{}) is {} at q = 1", p / k + 1, p % k + 1, t[p / k][p % k]))),
        });
    rep.push("(112) tail 1 - R12 R21 vanishes at q = 1", None, w);

    // χ-level objects carry 1/λ: the X presentation and the (116) linear term.
    let w = (|| {
        let inv = bundle.lambda.inv().map_err(wit)?;
        if inv.eval_at(&one) != Err(FieldError::Pole(one.clone())) {
            return Err(Witness("1/lambda at q = 1 is not flagged as a pole".into()));
        }
        for e in &x_relations(bundle).eqs {
            for (_, c) in e.iter() {
                match c.eval_at(&one) {
                    Err(FieldError::Pole(_)) => {}
                    Err(err) => return Err(wit(err)),
                    Ok(_) if c.den().eval(&one) == rat(0) => {
                        return Err(Witness(format!("{} evaluated at a pole", c)));
                    }
                    Ok(_) => {}
                }
            }
        }
        Ok(())
    })();
    rep.push("poles at q = 1 are flagged", None, w);
    rep
}

/// Runs a suite. All failures, including setup failures, appear as report entries.
pub fn run(suite: Suite, cfg: &Config) -> Report {
    let ctx = Ctx::new(cfg);
    let mut rep = Report::new();
    let parts: &[Suite] = match suite {
        Suite::All => &[
            Suite::Ybe,
            Suite::Hecke,
            Suite::Woronowicz,
            Suite::Relations,
            Suite::Overlaps,
            Suite::Coactions,
            Suite::Cartan,
            Suite::Tilded,
        ],
        _ => std::slice::from_ref(&suite),
    };
    for s in parts {
        rep.extend(match s {
            Suite::Ybe => ybe_suite(cfg),
            Suite::Hecke => hecke_suite(&ctx),
            Suite::Woronowicz => woronowicz_suite(&ctx),
            Suite::Relations | Suite::Overlaps | Suite::Coactions => nc_suite(&ctx, *s),
            Suite::Cartan | Suite::Tilded => forms_suite(&ctx, *s),
            Suite::All => unreachable!(),
        });
    }
    if suite == Suite::All {
        match &ctx.bundle {
            Ok(b) => {
                let consts = PairingEngine::new(b)
                    .ok()
                    .and_then(|e| derive_constants(b, &e, &Functionals::new(b)).ok());
                rep.extend(classical_check(b, consts.as_ref()));
            }
            Err(w) => rep.push("classical limit", None, Err(w.clone())),
        }
    }
    rep
}

/// The requested tensor in the rtensor JSON layout.
pub fn constant_tensor(which: Constant, cfg: &Config) -> Result<IndexedTensor, String> {
    let b = RBundle::from_r(cfg.r_matrix()).map_err(|e| e.to_string())?;
    Ok(match which {
        Constant::R => b.r,
        Constant::RTilde => b.rtilde,
        Constant::D => b.d,
        _ => {
            let e = PairingEngine::new(&b).map_err(|e| e.to_string())?;
            let c = derive_constants(&b, &e, &Functionals::new(&b)).map_err(|e| e.to_string())?;
            match which {
                Constant::Sigma => c.sigma,
                Constant::SigmaTilde => c.sigma_tilde,
                Constant::C => c.c,
                _ => c.c_tilde,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        for s in Suite::NAMES {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("sigmaTilde".parse::<Constant>(), Ok(Constant::SigmaTilde));
    }

    #[test]
    fn config_bounds() {
        let mut c = Config::new(2);
        assert!(c.validate().is_ok());
        c.grade_cap = 4;
        assert!(c.validate().is_err());
    }

    #[test]
    fn classical_n2() {
        let b = RBundle::standard(2);
        let e = PairingEngine::new(&b).unwrap();
        let c = derive_constants(&b, &e, &Functionals::new(&b)).unwrap();
        let r = classical_check(&b, Some(&c));
        assert!(r.all_pass(), "{}", r.to_text());
    }

    #[test]
    fn d_for_n1() {
        let t = constant_tensor(Constant::D, &Config::new(1)).unwrap();
        assert_eq!(t.nnz(), 1);
        assert_eq!(t.get(&[0, 0]), RatFunc::q_pow(-1));
    }
}
