//! Worked counterexamples shipped as model files.

use std::collections::BTreeSet;

use crate::atoms::Atom;
use crate::error::Result;
use crate::permission::SupportDescriptor;
use crate::pnl::{check_regimes, reduce_support_pnl, EvalConfig, Regime};
use crate::semantics::{
    check_equation, check_theory, default_pool, lift_valuation, reduce_support, render_valuation, valuation_family,
    FamilyConfig, Interpretation, Valuation, Verdict,
};
use crate::syntax::{parse_document, Document};
use crate::terms::{atoms_of, fv, Term};
use crate::universe::{listabs, AtomList, Element, ListMode};

pub const DEMOS: [&str; 3] = ["prop-6-counterexample", "prop-7-fuzzy", "prop-8-zero"];

/// The bundled model files, by name.
pub const FILES: [(&str, &str); 9] = [
    ("separation_full.nk", include_str!("../demos/separation_full.nk")),
    ("separation_medium.nk", include_str!("../demos/separation_medium.nk")),
    ("separation_finite.nk", include_str!("../demos/separation_finite.nk")),
    ("fuzzy.nk", include_str!("../demos/fuzzy.nk")),
    ("fuzzy_finite.nk", include_str!("../demos/fuzzy_finite.nk")),
    ("zero.nk", include_str!("../demos/zero.nk")),
    ("desk_list.nk", include_str!("../demos/desk_list.nk")),
    ("desk_perm.nk", include_str!("../demos/desk_perm.nk")),
    ("desk_const.nk", include_str!("../demos/desk_const.nk")),
];

/// Strict-mode theories whose goals fail in a model with infinite supports.
pub const DESK_THEORIES: [&str; 3] = ["desk_list.nk", "desk_perm.nk", "desk_const.nk"];

pub fn file(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn document(name: &str) -> Result<Document> {
    let src = file(name).ok_or_else(|| crate::NomError::Unbound(format!("demo file {name}")))?;
    parse_document(src)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoReport {
    pub lines: Vec<String>,
    /// `key=value` facts for scripts.
    pub machine: Vec<(String, String)>,
    /// Whether every outcome matched the expected one.
    pub passed: bool,
}

impl DemoReport {
    fn new() -> Self {
        DemoReport {
            lines: Vec::new(),
            machine: Vec::new(),
            passed: true,
        }
    }

    fn fact(&mut self, key: &str, value: impl ToString, expected: bool) {
        self.machine.push((key.to_string(), value.to_string()));
        self.passed &= expected;
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.machine.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn run(name: &str) -> Result<DemoReport> {
    match name {
        "prop-6-counterexample" => separation(),
        "prop-7-fuzzy" => fuzzy(),
        "prop-8-zero" => zero(),
        _ => Err(crate::NomError::Unbound(format!(
            "demo {name}; available: {}",
            DEMOS.join(", ")
        ))),
    }
}

/// A pool for the equations: their atoms, the model's atoms, and fresh
/// atoms of every name sort.
pub fn equation_config(i: &Interpretation, eqs: &[(Term, Term)]) -> Result<FamilyConfig> {
    let terms: Vec<&Term> = eqs.iter().flat_map(|(r, s)| [r, s]).collect();
    Ok(FamilyConfig {
        pool: default_pool(i, &terms, 2)?,
        ..FamilyConfig::default()
    })
}

/// Checks `r = s` over the valuation family of its unknowns.
pub fn check_goal(i: &Interpretation, goal: &(Term, Term), cfg: &FamilyConfig) -> Result<Verdict> {
    let (r, s) = goal;
    let mut xs = fv(r);
    xs.extend(fv(s));
    let xs: Vec<String> = xs.into_iter().collect();
    let family = valuation_family(i, &xs, cfg)?;
    check_equation(i, r, s, &family)
}

fn verdict_word(v: &Verdict) -> &'static str {
    if v.is_valid() {
        "valid"
    } else {
        "refuted"
    }
}

fn separation() -> Result<DemoReport> {
    let mut rep = DemoReport::new();
    let mut models = Vec::new();
    let mut phi = None;
    for f in ["separation_full.nk", "separation_medium.nk", "separation_finite.nk"] {
        let d = document(f)?;
        phi = phi.or_else(|| d.formulas.first().cloned());
        models.push((d.pnl_model()?, d.regime.unwrap_or(Regime::Full)));
    }
    let phi = phi.expect("the separation files state a formula");
    rep.lines.push(format!("formula: {phi}"));
    let cfg = EvalConfig::default();
    let verdicts = check_regimes(&models, &phi, &cfg)?;
    for (r, v) in verdicts.iter().rev() {
        rep.lines.push(format!("{r}: {v}"));
    }
    let valid = |r: Regime| verdicts[&r].is_valid();
    rep.fact("full", valid(Regime::Full), !valid(Regime::Full));
    rep.fact("medium", valid(Regime::Medium), valid(Regime::Medium));
    rep.fact("finite", valid(Regime::Finite), valid(Regime::Finite));

    let medium = &models[1].0;
    let m = AtomList::base(ListMode::Half);
    let reduced = reduce_support_pnl(medium, &m)?;
    let finite = reduced.conforms(Regime::Finite).is_ok();
    rep.lines.push(format!(
        "[{m}] applied to the medium model: finite supports {finite}, formula holds {}",
        reduced.eval(&Valuation::new(), &phi, &cfg)?
    ));
    rep.fact("reduced_medium_finite", finite, finite);
    Ok(rep)
}

fn fuzzy() -> Result<DemoReport> {
    let mut rep = DemoReport::new();
    let d = document("fuzzy.nk")?;
    let i = d.interpretation()?;
    let cfg = equation_config(&i, &[d.axioms.clone(), d.goals.clone()].concat())?;
    let ax = check_theory(&i, &d.theory(), &cfg)?;
    let goal = check_goal(&i, &d.goals[0], &cfg)?;
    let (ar, as_) = &d.axioms[0];
    let (gr, gs) = &d.goals[0];
    rep.lines.push(format!("carrier: {}", d.model.carriers["tau"]));
    rep.lines.push(format!("axiom {ar} = {as_}: {}", ax[0]));
    rep.lines.push(format!("goal {gr} = {gs}: {goal}"));
    rep.fact("axiom", verdict_word(&ax[0]), ax[0].is_valid());
    rep.fact("goal", verdict_word(&goal), !goal.is_valid());
    if let Verdict::CounterWitness(v) = &goal {
        let expected = v.get("X") == Some(&Element::Fuzzy(0));
        rep.fact("witness", render_valuation(v), expected);
    }

    let fd = document("fuzzy_finite.nk")?;
    let fi = fd.interpretation()?;
    let fcfg = equation_config(&fi, &[fd.axioms.clone(), fd.goals.clone()].concat())?;
    let fax = check_theory(&fi, &fd.theory(), &fcfg)?;
    let fgoal = check_goal(&fi, &fd.goals[0], &fcfg)?;
    rep.lines.push(format!("finite-support model: axiom {}, goal {}", fax[0], fgoal));
    rep.fact("finite_axiom", verdict_word(&fax[0]), fax[0].is_valid());
    rep.fact("finite_goal", verdict_word(&fgoal), fgoal.is_valid());

    match atoms_of(&d.sig, gr) {
        Err(e) => {
            rep.lines.push(format!("atoms({gr}): {e}"));
            rep.fact("atoms_of_shift", "error", true);
        }
        Ok(s) => rep.fact("atoms_of_shift", format!("{s:?}"), false),
    }
    Ok(rep)
}

/// Atoms of the theory's axioms and goals.
fn theory_atoms(d: &Document) -> Result<BTreeSet<Atom>> {
    let mut out = BTreeSet::new();
    for (r, s) in d.axioms.iter().chain(&d.goals) {
        out.extend(atoms_of(&d.sig, r)?);
        out.extend(atoms_of(&d.sig, s)?);
    }
    Ok(out)
}

/// Outcome of moving one strict desk theory to `[m]H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub axioms_in_model: bool,
    pub axioms_in_reduced: bool,
    /// The goal's counterwitness in the model.
    pub witness: Option<Valuation>,
    /// Whether `[m]ς` refutes the goal in `[m]H`.
    pub lifted_refutes: bool,
    pub lifted_finite: bool,
    pub reduced_carriers_finite: bool,
}

/// Checks a desk theory in its model `H` and in `[m]H`, for a full list
/// `m` avoiding the theory's atoms.
pub fn transfer(d: &Document) -> Result<Transfer> {
    let i = d.interpretation()?;
    let eqs = [d.axioms.clone(), d.goals.clone()].concat();
    let cfg = equation_config(&i, &eqs)?;
    let m = AtomList::fresh(ListMode::Full, &SupportDescriptor::finite(theory_atoms(d)?))?;
    let reduced = reduce_support(&i, &m);
    let axioms_in_model = check_theory(&i, &d.theory(), &cfg)?.iter().all(Verdict::is_valid);
    let axioms_in_reduced = check_theory(&reduced, &d.theory(), &cfg)?.iter().all(Verdict::is_valid);
    let mut out = Transfer {
        axioms_in_model,
        axioms_in_reduced,
        witness: None,
        lifted_refutes: false,
        lifted_finite: false,
        reduced_carriers_finite: true,
    };
    for c in d.model.carriers.values() {
        for g in &c.generators {
            let l = AtomList::fresh(ListMode::Full, &SupportDescriptor::finite(g.support().perturbation()))?;
            out.reduced_carriers_finite &= listabs(&l, g.clone())?.support().is_finite();
        }
    }
    if let Some(goal) = d.goals.first() {
        if let Verdict::CounterWitness(v) = check_goal(&i, goal, &cfg)? {
            let lifted = lift_valuation(&v, &m)?;
            out.lifted_finite = lifted.values().all(|x| x.support().is_finite());
            out.lifted_refutes = !check_equation(&reduced, &goal.0, &goal.1, &[lifted])?.is_valid();
            out.witness = Some(v);
        }
    }
    Ok(out)
}

fn zero() -> Result<DemoReport> {
    let mut rep = DemoReport::new();
    let mut preserved = true;
    for f in DESK_THEORIES {
        let t = transfer(&document(f)?)?;
        let ok = t.axioms_in_model && t.axioms_in_reduced && t.lifted_refutes && t.lifted_finite;
        rep.lines.push(format!(
            "strict {f}: axioms hold in H {}, in [m]H {}; goal counterwitness {} stays a counterwitness with finite support: {}",
            t.axioms_in_model,
            t.axioms_in_reduced,
            t.witness.as_ref().map(render_valuation).unwrap_or_else(|| "none".into()),
            t.lifted_refutes && t.lifted_finite
        ));
        preserved &= ok;
    }
    rep.fact("strict_preserved", preserved, preserved);

    let d = document("zero.nk")?;
    let i = d.interpretation()?;
    let cfg = equation_config(&i, &[d.axioms.clone(), d.goals.clone()].concat())?;
    let ax = check_goal(&i, &d.axioms[0], &cfg)?;
    let goal = check_goal(&i, &d.goals[0], &cfg)?;
    rep.lines.push(format!("extended model, X = zero: {ax}"));
    rep.lines.push(format!("extended model, Z = zero: {goal}"));
    rep.fact("x_eq_zero", verdict_word(&ax), ax.is_valid());
    rep.fact("z_eq_zero", verdict_word(&goal), !goal.is_valid());

    let m = AtomList::base(ListMode::Full);
    let reduced = reduce_support(&i, &m);
    let (b, c) = (Atom::up(0, 1), Atom::down(0, 2));
    let l2 = AtomList::with_substitutions(ListMode::Full, [(c, b)])?;
    let big = d.model.carriers["tau"].generators[0].clone();
    let x = listabs(&l2, big)?;
    let residual = x.support();
    let val: Valuation = [("X".to_string(), x)].into();
    let legal = reduced.check_valuation(&val).is_ok();
    let refuted = !check_equation(&reduced, &d.axioms[0].0, &d.axioms[0].1, std::slice::from_ref(&val))?.is_valid();
    rep.lines.push(format!(
        "in [{m}]H the valuation {} has residual support {residual}, is legal: {legal}, refutes X = zero: {refuted}",
        render_valuation(&val)
    ));
    rep.fact("residual_support", &residual, residual == SupportDescriptor::singleton(c));
    rep.fact("reduced_valuation_legal", legal, legal);
    rep.fact("reduced_x_eq_zero", if refuted { "refuted" } else { "valid" }, refuted);
    Ok(rep)
}
