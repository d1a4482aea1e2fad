use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nomkit::atoms::{pi_slash, Atom};
use nomkit::demos;
use nomkit::permission::SupportDescriptor;
use nomkit::pnl::{check_validity, EvalConfig, PnlVerdict, Regime};
use nomkit::semantics::{
    check_theory, default_pool, reduce_support, render_valuation, FamilyConfig, Interpretation, Verdict,
};
use nomkit::syntax::{
    letter_or_atom, parse_document, parse_element, parse_fin_perm, parse_atom_set, parse_prop, parse_term,
    parse_valuation, uses_letters, Document,
};
use nomkit::terms::{alpha_eq, mentioned_atoms, Mode, Signature, Sort, Term};
use nomkit::universe::{AtomList, ListMode, PermGroup};
use nomkit::NomError;

#[derive(Parser)]
#[command(name = "nomkit", version, about = "Permissive-nominal sets, terms, models and logic")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Opts {
    /// Permission-set discipline, overriding the model file.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Permutation group carriers are closed under, overriding the model file.
    #[arg(long, global = true, value_enum)]
    group: Option<GroupArg>,
    /// Kind of list used to reduce support.
    #[arg(long, global = true, value_enum, default_value = "full")]
    list: ListArg,
    /// Fresh atoms added per name sort when enumerating families.
    #[arg(long, global = true)]
    pool: Option<usize>,
    /// Largest family enumerated before giving up.
    #[arg(long = "family-cap", global = true, default_value_t = 20_000)]
    family_cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Finite,
    Shift,
}

#[derive(Clone, Copy, ValueEnum)]
enum ListArg {
    Full,
    Half,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Full,
    Medium,
    Finite,
}

#[derive(Subcommand)]
enum Command {
    /// Restrict a permutation to a set of atoms.
    PermRestrict {
        perm: String,
        #[arg(long = "in")]
        region: String,
    },
    /// Decide α-equivalence of two terms.
    AlphaEq {
        r: String,
        s: String,
        /// Model file whose signature the terms use.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Print the support of an element.
    Support { element: String },
    /// Evaluate a term in a model.
    Denote {
        model: PathBuf,
        term: String,
        /// Values for unknowns, as `X := element; Y := element`.
        #[arg(long, default_value = "")]
        valuation: String,
    },
    /// Check the axioms and goals of a model file.
    CheckTheory { model: PathBuf },
    /// Build `[m]H` for a fresh list `m` and check the theory there.
    ReduceSupport {
        model: PathBuf,
        /// A term to evaluate in both models.
        #[arg(long)]
        term: Option<String>,
        #[arg(long, default_value = "")]
        valuation: String,
    },
    /// Check a formula in a model under a support regime.
    PnlEval {
        model: PathBuf,
        /// The formula; defaults to the model file's first `formula`.
        formula: Option<String>,
        #[arg(long, value_enum, default_value = "full")]
        regime: RegimeArg,
    },
    /// Run a named demo, or list them.
    Demo { name: Option<String> },
}

#[derive(Default)]
struct Report {
    lines: Vec<String>,
    machine: Vec<(String, String)>,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn fact(&mut self, k: &str, v: impl ToString) {
        self.machine.push((k.to_string(), v.to_string()));
    }

    fn print(&self) {
        for l in &self.lines {
            println!("{l}");
        }
        println!("---");
        for (k, v) in &self.machine {
            println!("{k}={v}");
        }
    }
}

enum Failure {
    Usage(String),
    Nom(NomError),
}

impl From<NomError> for Failure {
    fn from(e: NomError) -> Self {
        Failure::Nom(e)
    }
}

type Outcome = Result<(Report, bool), Failure>;

fn load(path: &Path, opts: &Opts) -> Result<Document, Failure> {
    let src = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut doc = parse_document(&src)?;
    if let Some(m) = opts.mode {
        doc.sig.mode = match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Extended => Mode::Extended,
        };
    }
    if let Some(g) = opts.group {
        let g = match g {
            GroupArg::Finite => PermGroup::Finite,
            GroupArg::Shift => PermGroup::Shift,
        };
        doc.sig.group = g;
        for c in doc.model.carriers.values_mut() {
            c.group = g;
        }
    }
    Ok(doc)
}

fn list_mode(opts: &Opts) -> ListMode {
    match opts.list {
        ListArg::Full => ListMode::Full,
        ListArg::Half => ListMode::Half,
    }
}

fn family_config(i: &Interpretation, terms: &[&Term], opts: &Opts) -> Result<FamilyConfig, Failure> {
    Ok(FamilyConfig {
        pool: default_pool(i, terms, opts.pool.unwrap_or(2))?,
        cap: opts.family_cap,
        ..FamilyConfig::default()
    })
}

fn verdict_word(v: &Verdict) -> &'static str {
    if v.is_valid() {
        "valid"
    } else {
        "refuted"
    }
}

fn perm_restrict(perm: &str, region: &str) -> Outcome {
    let p = parse_fin_perm(perm)?;
    let s = parse_atom_set(region)?;
    let r = pi_slash(&p, &s);
    let out = if uses_letters(perm) || uses_letters(region) {
        r.render(letter_or_atom)
    } else {
        r.to_string()
    };
    let mut rep = Report::default();
    rep.line(&out);
    rep.fact("result", &out);
    Ok((rep, true))
}

fn alpha(r: &str, s: &str, model: Option<&Path>, opts: &Opts) -> Outcome {
    let mut sig = match model {
        Some(p) => load(p, opts)?.sig,
        None => Signature::permissive(),
    };
    let tr = parse_term(&mut sig, r)?;
    let ts = parse_term(&mut sig, s)?;
    let eq = alpha_eq(&sig, &tr, &ts)?;
    let mut rep = Report::default();
    rep.line(format!("{tr} {} {ts}", if eq { "=α" } else { "≠α" }));
    rep.fact("alpha_eq", eq);
    Ok((rep, eq))
}

fn support(src: &str) -> Outcome {
    let x = parse_element(src)?;
    let s = x.support();
    let mut rep = Report::default();
    rep.line(format!("supp({x}) = {s}"));
    rep.fact("support", &s);
    rep.fact("finite", s.is_finite());
    rep.fact("medium", s.is_medium());
    rep.fact("within_comb", s.within_some_comb());
    Ok((rep, true))
}

fn denote(path: &Path, term: &str, valuation: &str, opts: &Opts) -> Outcome {
    let mut doc = load(path, opts)?;
    let r = parse_term(&mut doc.sig, term)?;
    let val = parse_valuation(valuation)?;
    let i = doc.interpretation()?;
    i.check_valuation(&val)?;
    let x = i.denote(&val, &r)?;
    let mut rep = Report::default();
    rep.line(format!("[[{r}]] = {x}"));
    rep.fact("value", &x);
    rep.fact("support", x.support());
    Ok((rep, true))
}

fn equations(doc: &Document) -> Vec<(Term, Term)> {
    [doc.axioms.clone(), doc.goals.clone()].concat()
}

fn check_all(i: &Interpretation, doc: &Document, cfg: &FamilyConfig, rep: &mut Report, prefix: &str) -> Result<bool, Failure> {
    let mut all = true;
    let axioms = check_theory(i, &doc.theory(), cfg)?;
    let goals = check_theory(
        i,
        &nomkit::semantics::Theory {
            sig: doc.sig.clone(),
            axioms: doc.goals.clone(),
        },
        cfg,
    )?;
    let rows = doc.axioms.iter().zip(&axioms).map(|e| ("axiom", e));
    let rows = rows.chain(doc.goals.iter().zip(&goals).map(|e| ("goal", e)));
    for (n, (kind, ((r, s), v))) in rows.enumerate() {
        let mut line = format!("{kind} {r} = {s}: {}", verdict_word(v));
        rep.fact(&format!("{prefix}{kind}.{n}"), verdict_word(v));
        if let Verdict::CounterWitness(val) = v {
            line.push_str(&format!(" at {}", render_valuation(val)));
            rep.fact(&format!("{prefix}witness.{n}"), render_valuation(val));
        }
        rep.line(line);
        all &= v.is_valid();
    }
    Ok(all)
}

fn theory(path: &Path, opts: &Opts) -> Outcome {
    let doc = load(path, opts)?;
    let i = doc.interpretation()?;
    let eqs = equations(&doc);
    let terms: Vec<&Term> = eqs.iter().flat_map(|(r, s)| [r, s]).collect();
    let cfg = family_config(&i, &terms, opts)?;
    let mut rep = Report::default();
    let ok = check_all(&i, &doc, &cfg, &mut rep, "")?;
    rep.fact("valid", ok);
    Ok((rep, ok))
}

fn reduce(path: &Path, term: Option<&str>, valuation: &str, opts: &Opts) -> Outcome {
    let mut doc = load(path, opts)?;
    let r = term.map(|t| parse_term(&mut doc.sig, t)).transpose()?;
    let i = doc.interpretation()?;
    let eqs = equations(&doc);
    let mut terms: Vec<&Term> = eqs.iter().flat_map(|(r, s)| [r, s]).collect();
    terms.extend(r.as_ref());
    let cfg = family_config(&i, &terms, opts)?;
    let avoid: BTreeSet<Atom> = terms.iter().flat_map(|t| mentioned_atoms(t)).chain(cfg.pool.iter().copied()).collect();
    let m = AtomList::fresh(list_mode(opts), &SupportDescriptor::finite(avoid))?;
    let reduced = reduce_support(&i, &m);
    let mut rep = Report::default();
    rep.line(format!("m = {m}"));
    rep.fact("list", &m);
    let mut finite = true;
    for t in &doc.sig.base_sorts {
        let fam = reduced.carrier(&Sort::Base(t.clone()))?.family(&cfg.pool, &cfg)?;
        let bad = fam.iter().find(|x| !x.support().is_finite());
        if let Some(x) = bad {
            rep.line(format!("carrier {t}: {x} has support {}", x.support()));
        } else {
            rep.line(format!("carrier {t}: {} representatives, all finitely supported", fam.len()));
        }
        finite &= bad.is_none();
    }
    rep.fact("carriers_finite", finite);
    let ok = check_all(&reduced, &doc, &cfg, &mut rep, "reduced.")?;
    if let Some(r) = &r {
        let val = parse_valuation(valuation)?;
        let x = i.denote(&val, r)?;
        let y = reduced.denote(&nomkit::semantics::lift_valuation(&val, &m)?, r)?;
        rep.line(format!("[[{r}]] = {x}"));
        rep.line(format!("[m][[{r}]] = {y}"));
        rep.fact("value", &x);
        rep.fact("reduced_value", &y);
    }
    rep.fact("valid", ok);
    Ok((rep, ok && finite))
}

fn pnl_eval(path: &Path, formula: Option<&str>, regime: RegimeArg, opts: &Opts) -> Outcome {
    let mut doc = load(path, opts)?;
    let phi = match formula {
        Some(f) => parse_prop(&mut doc.sig, f)?,
        None => doc
            .formulas
            .first()
            .cloned()
            .ok_or_else(|| Failure::Usage(format!("{} states no formula", path.display())))?,
    };
    let regime = match regime {
        RegimeArg::Full => Regime::Full,
        RegimeArg::Medium => Regime::Medium,
        RegimeArg::Finite => Regime::Finite,
    };
    let model = doc.pnl_model()?;
    let cfg = EvalConfig {
        extra_per_region: opts.pool.unwrap_or(EvalConfig::default().extra_per_region),
        cap: opts.family_cap,
        ..EvalConfig::default()
    };
    let verdict = check_validity(&[(model, regime)], &phi, regime, &cfg)?;
    let mut rep = Report::default();
    rep.line(format!("{phi} under {regime} support: {verdict}"));
    rep.fact("regime", regime);
    rep.fact("valid", verdict.is_valid());
    if let PnlVerdict::CounterWitness { valuation, .. } = &verdict {
        rep.fact("witness", render_valuation(valuation));
    }
    Ok((rep, verdict.is_valid()))
}

fn demo(name: Option<&str>) -> Outcome {
    let mut rep = Report::default();
    let Some(name) = name else {
        for d in demos::DEMOS {
            rep.line(d);
        }
        rep.fact("demos", demos::DEMOS.join(","));
        return Ok((rep, true));
    };
    let d = demos::run(name).map_err(|e| match e {
        NomError::Unbound(m) => Failure::Usage(format!("unknown {m}")),
        e => Failure::Nom(e),
    })?;
    rep.lines = d.lines;
    rep.machine = d.machine;
    rep.fact("passed", d.passed);
    Ok((rep, d.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = &cli.opts;
    let outcome = match &cli.cmd {
        Command::PermRestrict { perm, region } => perm_restrict(perm, region),
        Command::AlphaEq { r, s, model } => alpha(r, s, model.as_deref(), opts),
        Command::Support { element } => support(element),
        Command::Denote { model, term, valuation } => denote(model, term, valuation, opts),
        Command::CheckTheory { model } => theory(model, opts),
        Command::ReduceSupport { model, term, valuation } => reduce(model, term.as_deref(), valuation, opts),
        Command::PnlEval { model, formula, regime } => pnl_eval(model, formula.as_deref(), *regime, opts),
        Command::Demo { name } => demo(name.as_deref()),
    };
    match outcome {
        Ok((rep, ok)) => {
            rep.print();
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Nom(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_parse() { 2 } else { 3 })
        }
    }
}
