//! Permissive-nominal logic: propositions, their evaluation, and validity
//! graded by how much support interpretations may use.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::atoms::{Atom, Zone};
use crate::error::{NomError, Result};
use crate::permission::SupportDescriptor;
use crate::semantics::{reduce_support, render_valuation, FamilyConfig, Interpretation, SortCarrier, Valuation};
use crate::terms::{atoms_of, fa, fv, mentioned_atoms, typecheck, Mode, Signature, Sort, Term};
use crate::universe::{elem_eq, listabs, listabs_at, AtomList, Carrier, Element, ListMode};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prop {
    Bot,
    Imp(Box<Prop>, Box<Prop>),
    All(String, Box<Prop>),
    Pred(String, Term),
}

impl Prop {
    pub fn imp(a: Prop, b: Prop) -> Prop {
        Prop::Imp(Box::new(a), Box::new(b))
    }

    pub fn not(a: Prop) -> Prop {
        Prop::imp(a, Prop::Bot)
    }

    pub fn all(x: &str, a: Prop) -> Prop {
        Prop::All(x.to_string(), Box::new(a))
    }

    /// `∃X φ`, encoded as `¬∀X¬φ`.
    pub fn exists(x: &str, a: Prop) -> Prop {
        Prop::not(Prop::all(x, Prop::not(a)))
    }

    pub fn pred(p: &str, r: Term) -> Prop {
        Prop::Pred(p.to_string(), r)
    }

    /// `fresh(y, r)`.
    pub fn fresh(y: Term, r: Term) -> Prop {
        Prop::pred(FRESH, Term::Tuple(vec![y, r]))
    }

    pub fn eq(r: Term, s: Term) -> Prop {
        Prop::pred(EQ, Term::Tuple(vec![r, s]))
    }
}

/// Name of the built-in freshness predicate on pairs `(atom, element)`.
pub const FRESH: &str = "fresh";
/// Name of the built-in equality predicate on pairs.
pub const EQ: &str = "eq";

/// Checks that every predicate argument has the predicate's arity.
pub fn check_prop(sig: &Signature, phi: &Prop) -> Result<()> {
    match phi {
        Prop::Bot => Ok(()),
        Prop::Imp(a, b) => {
            check_prop(sig, a)?;
            check_prop(sig, b)
        }
        Prop::All(x, a) => {
            sig.unknown(x)?;
            check_prop(sig, a)
        }
        Prop::Pred(p, r) => {
            let s = typecheck(sig, r)?;
            if let Some(want) = sig.predicates.get(p) {
                if *want != s {
                    return Err(NomError::Sort(format!("{p} expects {want}, got {r} : {s}")));
                }
                return Ok(());
            }
            match (p.as_str(), &s) {
                (FRESH, Sort::Tuple(ss)) if ss.len() == 2 && matches!(ss[0], Sort::Name(_)) => Ok(()),
                (EQ, Sort::Tuple(ss)) if ss.len() == 2 && ss[0] == ss[1] => Ok(()),
                (FRESH | EQ, _) => Err(NomError::Sort(format!("{p} cannot take {r} : {s}"))),
                _ => Err(NomError::Unbound(format!("predicate {p}"))),
            }
        }
    }
}

/// `atoms(φ)`.
pub fn atoms_of_prop(sig: &Signature, phi: &Prop) -> Result<BTreeSet<Atom>> {
    Ok(match phi {
        Prop::Bot => BTreeSet::new(),
        Prop::Imp(a, b) => {
            let mut s = atoms_of_prop(sig, a)?;
            s.extend(atoms_of_prop(sig, b)?);
            s
        }
        Prop::All(_, a) => atoms_of_prop(sig, a)?,
        Prop::Pred(_, r) => atoms_of(sig, r)?,
    })
}

/// `fa(φ)`: the union of the free atoms of the predicate arguments.
pub fn fa_prop(sig: &Signature, phi: &Prop) -> Result<SupportDescriptor> {
    Ok(match phi {
        Prop::Bot => SupportDescriptor::empty(),
        Prop::Imp(a, b) => fa_prop(sig, a)?.union(&fa_prop(sig, b)?),
        Prop::All(_, a) => fa_prop(sig, a)?,
        Prop::Pred(_, r) => fa(sig, r)?,
    })
}

/// Unknowns not bound by a quantifier.
pub fn fv_prop(phi: &Prop) -> BTreeSet<String> {
    match phi {
        Prop::Bot => BTreeSet::new(),
        Prop::Imp(a, b) => {
            let mut s = fv_prop(a);
            s.extend(fv_prop(b));
            s
        }
        Prop::All(x, a) => {
            let mut s = fv_prop(a);
            s.remove(x);
            s
        }
        Prop::Pred(_, r) => fv(r),
    }
}

fn mentioned_prop(phi: &Prop, out: &mut BTreeSet<Atom>) {
    match phi {
        Prop::Bot => {}
        Prop::Imp(a, b) => {
            mentioned_prop(a, out);
            mentioned_prop(b, out);
        }
        Prop::All(_, a) => mentioned_prop(a, out),
        Prop::Pred(_, r) => out.extend(mentioned_atoms(r)),
    }
}

/// An equivariant subset of a carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredDenotation {
    /// Pairs `(a, x)` with `a ∉ supp(x)`.
    Freshness,
    /// Pairs `(x, y)` with `x = y`.
    Equality,
    /// The closure of the generators under the group.
    Table(Carrier),
    /// `{[l]x | x in the inner set}`.
    Wrapped(Box<PredDenotation>, ListMode),
}

impl PredDenotation {
    pub fn holds(&self, x: &Element) -> Result<bool> {
        match self {
            PredDenotation::Freshness => Ok(match x {
                Element::Tuple(xs) if xs.len() == 2 => match &xs[0] {
                    Element::Atom(a) => !xs[1].support().member(a),
                    _ => false,
                },
                _ => false,
            }),
            PredDenotation::Equality => Ok(match x {
                Element::Tuple(xs) if xs.len() == 2 => elem_eq(&xs[0], &xs[1]),
                _ => false,
            }),
            PredDenotation::Table(c) => c.contains(x),
            PredDenotation::Wrapped(inner, mode) => {
                let Element::ListAbs(_) = x else {
                    return Ok(false);
                };
                let l = AtomList::fresh(*mode, &x.support())?;
                match listabs_at(x, &l) {
                    Ok(body) => inner.holds(&body),
                    Err(_) => Ok(false),
                }
            }
        }
    }
}

impl fmt::Display for PredDenotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredDenotation::Freshness => write!(f, "fresh"),
            PredDenotation::Equality => write!(f, "eq"),
            PredDenotation::Table(c) => write!(f, "table {c}"),
            PredDenotation::Wrapped(p, m) => write!(f, "[{m} lists]{p}"),
        }
    }
}

/// How much support the elements of an interpretation may have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    /// Finite supports only.
    Finite,
    /// Supports inside a permuted half-comb.
    Medium,
    /// Any support the signature permits.
    Full,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Full, Regime::Medium, Regime::Finite];

    fn admits(self, mode: Mode, s: &SupportDescriptor) -> bool {
        match self {
            Regime::Finite => s.is_finite(),
            Regime::Medium => s.is_medium(),
            Regime::Full => mode == Mode::Extended || s.within_some_comb(),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Finite => "finite",
            Regime::Medium => "medium",
            Regime::Full => "full",
        })
    }
}

/// Bounds on quantifier enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    /// Fresh atoms tried per region of the comb when quantifying over names.
    pub extra_per_region: usize,
    pub cap: usize,
    pub shift_window: i64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            extra_per_region: 1,
            cap: 20_000,
            shift_window: 2,
        }
    }
}

/// An interpretation together with denotations for proposition-formers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PnlModel {
    pub interp: Interpretation,
    pub preds: BTreeMap<String, PredDenotation>,
    /// Generators to quantify over, per sort, in place of the carrier.
    pub quant_basis: BTreeMap<Sort, Vec<Element>>,
    inner: Option<Box<PnlModel>>,
}

impl PnlModel {
    /// A model with the built-in `fresh` and `eq` predicates.
    pub fn new(interp: Interpretation) -> PnlModel {
        let mut preds = BTreeMap::new();
        preds.insert(FRESH.to_string(), PredDenotation::Freshness);
        preds.insert(EQ.to_string(), PredDenotation::Equality);
        PnlModel {
            interp,
            preds,
            quant_basis: BTreeMap::new(),
            inner: None,
        }
    }

    pub fn with_pred(mut self, p: &str, d: PredDenotation) -> PnlModel {
        self.preds.insert(p.to_string(), d);
        self
    }

    pub fn sig(&self) -> &Signature {
        self.interp.sig()
    }

    /// The model `H` when this is `[m]H`.
    pub fn inner(&self) -> Option<&PnlModel> {
        self.inner.as_deref()
    }

    /// `⟦φ⟧_ς`.
    pub fn eval(&self, val: &Valuation, phi: &Prop, cfg: &EvalConfig) -> Result<bool> {
        match phi {
            Prop::Bot => Ok(false),
            Prop::Imp(a, b) => Ok(!self.eval(val, a, cfg)? || self.eval(val, b, cfg)?),
            Prop::All(x, body) => {
                for v in self.candidates(x, val, phi, cfg)? {
                    let mut w = val.clone();
                    w.insert(x.clone(), v);
                    if !self.eval(&w, body, cfg)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Prop::Pred(p, r) => {
                let d = self
                    .preds
                    .get(p)
                    .ok_or_else(|| NomError::Unbound(format!("no denotation for predicate {p}")))?;
                d.holds(&self.interp.denote(val, r)?)
            }
        }
    }

    /// A valuation under which `φ` fails, found by descending through the
    /// leading universal quantifiers.
    pub fn find_counter(&self, val: &Valuation, phi: &Prop, cfg: &EvalConfig) -> Result<Option<Valuation>> {
        if let Prop::All(x, body) = phi {
            for v in self.candidates(x, val, phi, cfg)? {
                let mut w = val.clone();
                w.insert(x.clone(), v);
                if let Some(c) = self.find_counter(&w, body, cfg)? {
                    return Ok(Some(c));
                }
            }
            return Ok(None);
        }
        Ok((!self.eval(val, phi, cfg)?).then(|| val.clone()))
    }

    /// Values the quantifier `∀X` in `scope` ranges over under `val`.
    pub fn candidates(&self, x: &str, val: &Valuation, scope: &Prop, cfg: &EvalConfig) -> Result<Vec<Element>> {
        let decl = self.sig().unknown(x)?;
        let pmss = decl.pmss.descriptor();
        let values = match (&self.inner, self.interp.reduced_parts()) {
            (Some(inner), Some((_, m))) => {
                let mut avoid = SupportDescriptor::empty();
                for v in val.values() {
                    avoid = avoid.union(&v.support());
                }
                let mut mentioned = BTreeSet::new();
                mentioned_prop(scope, &mut mentioned);
                avoid = avoid.add(&mentioned);
                let l = AtomList::fresh(m.mode(), &avoid)?;
                let at_l = val
                    .iter()
                    .map(|(y, v)| Ok((y.clone(), listabs_at(v, &l)?)))
                    .collect::<Result<Valuation>>()?;
                inner
                    .candidates(x, &at_l, scope, cfg)?
                    .into_iter()
                    .filter_map(|v| listabs(&l, v).ok())
                    .collect()
            }
            _ => self.base_candidates(&decl.sort, val, scope, cfg)?,
        };
        Ok(values.into_iter().filter(|v| v.support().is_subset(&pmss)).collect())
    }

    fn base_candidates(&self, sort: &Sort, val: &Valuation, scope: &Prop, cfg: &EvalConfig) -> Result<Vec<Element>> {
        let sig = self.sig();
        let mut explicit = BTreeSet::new();
        mentioned_prop(scope, &mut explicit);
        for v in val.values() {
            explicit.extend(v.canonical().mentioned_atoms());
        }
        for d in sig.unknowns.values() {
            explicit.extend(d.pmss.descriptor().perturbation());
        }
        if let Some(model) = self.interp.model() {
            for v in model.consts.values() {
                explicit.extend(v.canonical().mentioned_atoms());
            }
        }
        let avoid = SupportDescriptor::finite(explicit.iter().copied());
        let mut reps = BTreeSet::new();
        for &n in sig.name_sorts.keys() {
            reps.extend(region_representatives(n, &avoid, cfg.extra_per_region));
        }
        if let Sort::Name(n) = sort {
            return Ok(explicit
                .iter()
                .chain(&reps)
                .filter(|a| a.sort == *n)
                .map(|a| Element::Atom(*a))
                .collect());
        }
        let mut pool = explicit;
        pool.extend(reps);
        let fcfg = FamilyConfig {
            pool: pool.clone(),
            cap: cfg.cap,
            shift_window: cfg.shift_window,
        };
        let carrier = match self.quant_basis.get(sort) {
            Some(basis) if basis.is_empty() => {
                return Err(NomError::NoQuantBasis(sort.to_string()));
            }
            Some(basis) => SortCarrier::Base(Carrier::new(basis.clone(), sig.group)),
            None => self.interp.carrier(sort)?,
        };
        let values = carrier.family(&pool, &fcfg)?;
        if values.is_empty() {
            return Err(NomError::NoQuantBasis(sort.to_string()));
        }
        Ok(values)
    }

    /// Elements standing for the whole interpretation when checking its
    /// support regime: carrier generators, constants and quantification
    /// bases, wrapped by a list for `[m]H`.
    fn samples(&self) -> Result<Vec<Element>> {
        match (&self.inner, self.interp.reduced_parts()) {
            (Some(inner), Some((_, m))) => inner
                .samples()?
                .into_iter()
                .map(|x| {
                    let avoid = SupportDescriptor::finite(x.support().perturbation());
                    listabs(&AtomList::fresh(m.mode(), &avoid)?, x)
                })
                .collect(),
            _ => {
                let mut out = Vec::new();
                if let Some(model) = self.interp.model() {
                    for c in model.carriers.values() {
                        out.extend(c.generators.iter().cloned());
                    }
                    out.extend(model.consts.values().cloned());
                }
                for b in self.quant_basis.values() {
                    out.extend(b.iter().cloned());
                }
                Ok(out)
            }
        }
    }

    /// Checks that every element of the interpretation fits the regime.
    pub fn conforms(&self, regime: Regime) -> Result<()> {
        let mode = self.sig().mode;
        for x in self.samples()? {
            let s = x.support();
            if !regime.admits(mode, &s) {
                return Err(NomError::RegimeViolation(format!(
                    "{x} has support {s}, not admitted by the {regime} regime"
                )));
            }
        }
        Ok(())
    }
}

/// The `n` least atoms of sort `sort` outside `avoid` in each region of the
/// comb: even and odd indexes.
fn region_representatives(sort: u32, avoid: &SupportDescriptor, n: usize) -> Vec<Atom> {
    let mut out = Vec::new();
    for parity in [0, 1] {
        out.extend(
            (0u64..)
                .map(|i| Atom::new(sort, Zone::Down, 2 * i + parity))
                .filter(|a| !avoid.member(a))
                .take(n),
        );
    }
    out
}

/// `[m]H` for a model with medium support: the interpretation is wrapped
/// and each predicate becomes `{[l]x | x ∈ P}`.
pub fn reduce_support_pnl(h: &PnlModel, m: &AtomList) -> Result<PnlModel> {
    if m.mode() == ListMode::Half {
        h.conforms(Regime::Medium)?;
    }
    Ok(PnlModel {
        interp: reduce_support(&h.interp, m),
        preds: h
            .preds
            .iter()
            .map(|(p, d)| (p.clone(), PredDenotation::Wrapped(Box::new(d.clone()), m.mode())))
            .collect(),
        quant_basis: BTreeMap::new(),
        inner: Some(Box::new(h.clone())),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PnlVerdict {
    ValidOverFamily,
    /// The index of the failing model and a valuation refuting the formula.
    CounterWitness { model: usize, valuation: Valuation },
}

impl PnlVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PnlVerdict::ValidOverFamily)
    }
}

impl fmt::Display for PnlVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PnlVerdict::ValidOverFamily => write!(f, "valid over family"),
            PnlVerdict::CounterWitness { model, valuation } => {
                write!(f, "counterwitness in model {model}: {}", render_valuation(valuation))
            }
        }
    }
}

/// Checks `φ` in every model whose tag the regime admits, after checking
/// each such model against its tag. Free unknowns are read universally.
pub fn check_validity(models: &[(PnlModel, Regime)], phi: &Prop, regime: Regime, cfg: &EvalConfig) -> Result<PnlVerdict> {
    let mut closed = phi.clone();
    for x in fv_prop(phi).into_iter().rev() {
        closed = Prop::All(x, Box::new(closed));
    }
    for (i, (model, tag)) in models.iter().enumerate() {
        if *tag > regime {
            continue;
        }
        model.conforms(*tag)?;
        check_prop(model.sig(), phi)?;
        if let Some(valuation) = model.find_counter(&Valuation::new(), &closed, cfg)? {
            return Ok(PnlVerdict::CounterWitness { model: i, valuation });
        }
    }
    Ok(PnlVerdict::ValidOverFamily)
}

/// [`check_validity`] at each of the three regimes.
pub fn check_regimes(models: &[(PnlModel, Regime)], phi: &Prop, cfg: &EvalConfig) -> Result<BTreeMap<Regime, PnlVerdict>> {
    Regime::ALL
        .iter()
        .map(|&r| Ok((r, check_validity(models, phi, r, cfg)?)))
        .collect()
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Bot => write!(f, "bot"),
            Prop::Imp(a, b) => {
                if matches!(**a, Prop::Imp(..) | Prop::All(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
            Prop::All(x, a) => write!(f, "forall {x}. {a}"),
            Prop::Pred(p, Term::Tuple(rs)) if rs.len() >= 2 => {
                let parts: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
                write!(f, "{p}({})", parts.join(", "))
            }
            Prop::Pred(p, r) => write!(f, "{p}({r})"),
        }
    }
}
