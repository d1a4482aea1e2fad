//! Interpretations, denotation, equation checking, and the
//! support-reducing transform `[m]H`.

mod family;
mod function;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use family::{default_pool, FamilyConfig, SortCarrier};
pub use function::EquivariantFn;

use crate::atoms::{Atom, GenPerm};
use crate::error::{NomError, Result};
use crate::permission::SupportDescriptor;
use crate::terms::{typecheck, Mode, Signature, Sort, Term};
use crate::universe::{elem_eq, factor_common, listabs, AtomList, Carrier, Element};

/// Values of unknowns.
pub type Valuation = BTreeMap<String, Element>;

/// The data of a model built directly in the element universe.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    /// Carriers of base sorts. Name, tuple and abstraction sorts are
    /// interpreted by the element constructors.
    pub carriers: BTreeMap<String, Carrier>,
    pub formers: BTreeMap<String, EquivariantFn>,
    pub consts: BTreeMap<String, Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Base(Model),
    Reduced { inner: Box<Interpretation>, m: AtomList },
}

/// A Σ-interpretation: either a model or `[m]H` for an interpretation `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    sig: Signature,
    kind: Kind,
}

impl Interpretation {
    /// Builds and validates a model.
    pub fn new(sig: Signature, model: Model) -> Result<Interpretation> {
        let i = Interpretation {
            sig,
            kind: Kind::Base(model),
        };
        i.validate()?;
        Ok(i)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn model(&self) -> Option<&Model> {
        match &self.kind {
            Kind::Base(m) => Some(m),
            Kind::Reduced { .. } => None,
        }
    }

    /// `(H, m)` when this is `[m]H`.
    pub fn reduced_parts(&self) -> Option<(&Interpretation, &AtomList)> {
        match &self.kind {
            Kind::Reduced { inner, m } => Some((inner, m)),
            Kind::Base(_) => None,
        }
    }

    fn validate(&self) -> Result<()> {
        self.sig.validate()?;
        let Kind::Base(model) = &self.kind else {
            return Ok(());
        };
        for t in &self.sig.base_sorts {
            let c = model
                .carriers
                .get(t)
                .ok_or_else(|| NomError::Signature(format!("no carrier for base sort {t}")))?;
            for g in &c.generators {
                let s = g.support();
                let ok = self.sig.mode == Mode::Extended || s.within_some_comb();
                if !ok {
                    return Err(NomError::Signature(format!(
                        "carrier element {g} of {t} has support {s}, outside every {} permission set",
                        self.sig.mode
                    )));
                }
            }
        }
        for f in self.sig.formers.keys() {
            if !model.formers.contains_key(f) {
                return Err(NomError::Signature(format!("no denotation for term-former {f}")));
            }
        }
        for (c, decl) in &self.sig.constants {
            let v = model
                .consts
                .get(c)
                .ok_or_else(|| NomError::Signature(format!("no denotation for constant {c}")))?;
            if !v.support().is_subset(&decl.pmss) {
                return Err(NomError::Signature(format!(
                    "constant {c} denotes {v} with support {} outside pmss {}",
                    v.support(),
                    decl.pmss
                )));
            }
            if !self.carrier(&Sort::Base(decl.sort.clone()))?.contains(v)? {
                return Err(NomError::CarrierMismatch(format!("{c} = {v} is not in {}", decl.sort)));
            }
        }
        Ok(())
    }

    /// The carrier of a sort.
    pub fn carrier(&self, sort: &Sort) -> Result<SortCarrier> {
        match &self.kind {
            Kind::Reduced { inner, m } => Ok(SortCarrier::Reduced(Box::new(inner.carrier(sort)?), m.mode())),
            Kind::Base(model) => Ok(match sort {
                Sort::Name(n) => SortCarrier::Names(*n),
                Sort::Base(t) => SortCarrier::Base(
                    model
                        .carriers
                        .get(t)
                        .cloned()
                        .ok_or_else(|| NomError::Signature(format!("no carrier for {t}")))?,
                ),
                Sort::Tuple(ss) => SortCarrier::Product(ss.iter().map(|s| self.carrier(s)).collect::<Result<_>>()?),
                Sort::Abs(n, s) => SortCarrier::Abstractions(*n, Box::new(self.carrier(s)?)),
            }),
        }
    }

    /// `a^I`.
    pub fn atom(&self, a: Atom) -> Result<Element> {
        match &self.kind {
            Kind::Base(_) => Ok(Element::Atom(a)),
            Kind::Reduced { inner, m } => {
                let l = AtomList::fresh(m.mode(), &SupportDescriptor::singleton(a))?;
                listabs(&l, inner.atom(a)?)
            }
        }
    }

    /// `(x_1, …, x_n)^I`.
    pub fn tuple(&self, xs: Vec<Element>) -> Result<Element> {
        match &self.kind {
            Kind::Base(_) => Ok(Element::Tuple(xs)),
            Kind::Reduced { inner, m } => {
                let (l, bodies) = factor_common(m.mode(), &xs, &BTreeSet::new())?;
                listabs(&l, inner.tuple(bodies)?)
            }
        }
    }

    /// `[a]^I x`.
    pub fn abs(&self, a: Atom, x: Element) -> Result<Element> {
        match &self.kind {
            Kind::Base(_) => Ok(Element::abs(a, x)),
            Kind::Reduced { inner, m } => {
                let (l, bodies) = factor_common(m.mode(), &[x], &[a].into())?;
                let body = bodies.into_iter().next().expect("one element in, one out");
                listabs(&l, inner.abs(a, body)?)
            }
        }
    }

    /// `f^I(x)`.
    pub fn former(&self, f: &str, x: Element) -> Result<Element> {
        match &self.kind {
            Kind::Base(model) => model
                .formers
                .get(f)
                .ok_or_else(|| NomError::Unbound(format!("term-former {f}")))?
                .apply(&x),
            Kind::Reduced { inner, m } => {
                let (l, bodies) = factor_common(m.mode(), &[x], &BTreeSet::new())?;
                let body = bodies.into_iter().next().expect("one element in, one out");
                listabs(&l, inner.former(f, body)?)
            }
        }
    }

    /// `C^I`.
    pub fn constant(&self, c: &str) -> Result<Element> {
        match &self.kind {
            Kind::Base(model) => model
                .consts
                .get(c)
                .cloned()
                .ok_or_else(|| NomError::Unbound(format!("constant {c}"))),
            Kind::Reduced { inner, m } => listabs(m, inner.constant(c)?),
        }
    }

    /// A value for an unassigned unknown: the first empty-support generator
    /// of its carrier.
    pub fn default_value(&self, sort: &Sort) -> Option<Element> {
        match &self.kind {
            Kind::Base(model) => match sort {
                Sort::Base(t) => model
                    .carriers
                    .get(t)?
                    .generators
                    .iter()
                    .find(|g| g.support().is_empty())
                    .cloned(),
                _ => None,
            },
            Kind::Reduced { inner, m } => {
                let x = inner.default_value(sort)?;
                listabs(m, x).ok()
            }
        }
    }

    /// `⟦r⟧_ς`.
    pub fn denote(&self, val: &Valuation, r: &Term) -> Result<Element> {
        match r {
            Term::Atom(a) => self.atom(*a),
            Term::Unknown(p, x) => {
                let v = match val.get(x) {
                    Some(v) => v.clone(),
                    None => {
                        let sort = &self.sig.unknown(x)?.sort;
                        self.default_value(sort)
                            .ok_or_else(|| NomError::Unbound(format!("no value for unknown {x}")))?
                    }
                };
                v.act(p)
            }
            Term::Const(p, c) => self.constant(c)?.act(p),
            Term::App(f, arg) => {
                let x = self.denote(val, arg)?;
                self.former(f, x)
            }
            Term::Tuple(rs) => {
                let xs = rs.iter().map(|r| self.denote(val, r)).collect::<Result<_>>()?;
                self.tuple(xs)
            }
            Term::Abs(a, body) => {
                let x = self.denote(val, body)?;
                self.abs(*a, x)
            }
        }
    }

    /// Checks that `val` assigns each unknown a carrier element with support
    /// inside its permission set.
    pub fn check_valuation(&self, val: &Valuation) -> Result<()> {
        for (x, v) in val {
            let decl = self.sig.unknown(x)?;
            if !v.support().is_subset(&decl.pmss.descriptor()) {
                return Err(NomError::CarrierMismatch(format!(
                    "{x} = {v} has support {} outside pmss {}",
                    v.support(),
                    decl.pmss
                )));
            }
            if !self.carrier(&decl.sort)?.contains(v)? {
                return Err(NomError::CarrierMismatch(format!("{x} = {v} is not in {}", decl.sort)));
            }
        }
        Ok(())
    }
}

/// `[m]H`. Failures of representability surface lazily, at denotation.
pub fn reduce_support(h: &Interpretation, m: &AtomList) -> Interpretation {
    Interpretation {
        sig: h.sig.clone(),
        kind: Kind::Reduced {
            inner: Box::new(h.clone()),
            m: m.clone(),
        },
    }
}

/// `[l]ς`.
pub fn lift_valuation(val: &Valuation, l: &AtomList) -> Result<Valuation> {
    val.iter()
        .map(|(x, v)| Ok((x.clone(), listabs(l, v.clone())?)))
        .collect()
}

/// `π∘ς`, defined when `π` moves only atoms of the comb.
pub fn shift_valuation(pi: &GenPerm, val: &Valuation) -> Result<Valuation> {
    let ok = pi
        .nontriv_finite()
        .is_some_and(|moved| moved.iter().all(|a| a.is_down()));
    if !ok {
        return Err(NomError::ShiftValuation(pi.to_string()));
    }
    val.iter()
        .map(|(x, v)| Ok((x.clone(), v.act(pi)?)))
        .collect()
}

/// The outcome of checking a statement over a family of valuations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Holds for every valuation searched.
    ValidOverFamily,
    CounterWitness(Valuation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::ValidOverFamily)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ValidOverFamily => write!(f, "valid over family"),
            Verdict::CounterWitness(v) => write!(f, "counterwitness {}", render_valuation(v)),
        }
    }
}

pub fn render_valuation(v: &Valuation) -> String {
    let parts: Vec<String> = v.iter().map(|(x, e)| format!("{x} := {e}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Checks `r = s` under every valuation of the family, reporting the first
/// failing one.
pub fn check_equation(i: &Interpretation, r: &Term, s: &Term, family: &[Valuation]) -> Result<Verdict> {
    let sr = typecheck(i.sig(), r)?;
    let ss = typecheck(i.sig(), s)?;
    if sr != ss {
        return Err(NomError::Sort(format!("{r} : {sr} but {s} : {ss}")));
    }
    for val in family {
        if !elem_eq(&i.denote(val, r)?, &i.denote(val, s)?) {
            return Ok(Verdict::CounterWitness(val.clone()));
        }
    }
    Ok(Verdict::ValidOverFamily)
}

/// Valuations for `unknowns`: every combination of family values with
/// support inside the unknown's permission set.
pub fn valuation_family(i: &Interpretation, unknowns: &[String], cfg: &FamilyConfig) -> Result<Vec<Valuation>> {
    let mut out = vec![Valuation::new()];
    for x in unknowns {
        let decl = i.sig().unknown(x)?;
        let pmss = decl.pmss.descriptor();
        let values: Vec<Element> = i
            .carrier(&decl.sort)?
            .family(&cfg.pool, cfg)?
            .into_iter()
            .filter(|v| v.support().is_subset(&pmss))
            .collect();
        let size = out.len() * values.len();
        if size > cfg.cap {
            return Err(NomError::FamilyTooLarge { size, cap: cfg.cap });
        }
        out = out
            .into_iter()
            .flat_map(|val| {
                values.iter().map(move |v| {
                    let mut w = val.clone();
                    w.insert(x.clone(), v.clone());
                    w
                })
            })
            .collect();
    }
    Ok(out)
}

/// A signature with a set of equality axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub sig: Signature,
    pub axioms: Vec<(Term, Term)>,
}

impl Theory {
    pub fn validate(&self) -> Result<()> {
        self.sig.validate()?;
        for (r, s) in &self.axioms {
            let (a, b) = (typecheck(&self.sig, r)?, typecheck(&self.sig, s)?);
            if a != b {
                return Err(NomError::Sort(format!("axiom {r} = {s}: {a} against {b}")));
            }
        }
        Ok(())
    }
}

/// Checks every axiom over its own valuation family.
pub fn check_theory(i: &Interpretation, t: &Theory, cfg: &FamilyConfig) -> Result<Vec<Verdict>> {
    t.axioms
        .iter()
        .map(|(r, s)| {
            let mut unknowns = crate::terms::fv(r);
            unknowns.extend(crate::terms::fv(s));
            let unknowns: Vec<String> = unknowns.into_iter().collect();
            let family = valuation_family(i, &unknowns, cfg)?;
            check_equation(i, r, s, &family)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::FinPerm;
    use crate::permission::PermissionSet;
    use crate::terms::{ConstDecl, FormerDecl, UnknownDecl};
    use crate::universe::{ListMode, PermGroup};

    fn d(i: u64) -> Atom {
        Atom::down(0, i)
    }
    fn u(i: u64) -> Atom {
        Atom::up(0, i)
    }

    fn zero_model(mode: Mode) -> Interpretation {
        let mut sig = Signature::default();
        sig.name_sorts.insert(0, None);
        sig.base_sorts.insert("tau".into());
        sig.mode = mode;
        sig.constants.insert(
            "zero".into(),
            ConstDecl {
                sort: "tau".into(),
                pmss: SupportDescriptor::empty(),
            },
        );
        sig.declare_unknown("X", Sort::base("tau"));
        if mode == Mode::Extended {
            sig.unknowns.insert(
                "Z".into(),
                UnknownDecl {
                    sort: Sort::base("tau"),
                    pmss: PermissionSet::new([], [u(1)]).unwrap(),
                },
            );
        }
        let zero = Element::unit("zero", SupportDescriptor::empty());
        let b = PermissionSet::new([], [u(1)]).unwrap();
        let mut model = Model::default();
        model.carriers.insert(
            "tau".into(),
            Carrier::new(vec![Element::PermSet(b), zero.clone()], PermGroup::Finite),
        );
        model.consts.insert("zero".into(), zero);
        Interpretation::new(sig, model).unwrap()
    }

    #[test]
    fn extended_zero_model() {
        let h = zero_model(Mode::Extended);
        let cfg = FamilyConfig::with_pool([d(0), d(1), u(1), u(2)]);
        let x = valuation_family(&h, &["X".into()], &cfg).unwrap();
        assert_eq!(x.len(), 1);
        let v = check_equation(&h, &Term::unknown("X"), &Term::constant("zero"), &x).unwrap();
        assert!(v.is_valid());
        let mut w = Valuation::new();
        w.insert("Z".into(), Element::PermSet(PermissionSet::new([], [u(1)]).unwrap()));
        let v = check_equation(&h, &Term::unknown("Z"), &Term::constant("zero"), &[w]).unwrap();
        assert!(!v.is_valid());
    }

    #[test]
    fn strict_mode_rejects_extended_carrier() {
        let mut sig = Signature::permissive();
        sig.auto_unknowns = false;
        let mut model = Model::default();
        let b = PermissionSet::new([], [u(1)]).unwrap();
        model.carriers.insert("tau".into(), Carrier::new(vec![Element::PermSet(b)], PermGroup::Finite));
        assert!(Interpretation::new(sig, model).is_err());
    }

    #[test]
    fn denote_examples() {
        let mut sig = Signature::permissive();
        sig.declare_unknown("X", Sort::base("tau"));
        let mut model = Model::default();
        model.carriers.insert(
            "tau".into(),
            Carrier::new(vec![Element::Atom(d(0))], PermGroup::Finite),
        );
        sig.formers.insert("f".into(), FormerDecl { arg: Sort::Name(0), result: "tau".into() });
        model.formers.insert("f".into(), EquivariantFn::Identity);
        let h = Interpretation::new(sig, model).unwrap();
        let mut val = Valuation::new();
        val.insert("X".into(), Element::Atom(d(2)));
        let swap: GenPerm = FinPerm::swap(d(2), d(3)).unwrap().into();
        assert_eq!(h.denote(&val, &Term::Atom(d(0))).unwrap(), Element::Atom(d(0)));
        assert_eq!(
            h.denote(&val, &Term::Unknown(swap, "X".into())).unwrap(),
            Element::Atom(d(3))
        );
        assert_eq!(
            h.denote(&val, &Term::abs(d(2), Term::unknown("X"))).unwrap(),
            Element::abs(d(2), Element::Atom(d(2)))
        );
        let fam = valuation_family(&h, &["X".into()], &FamilyConfig::with_pool([d(0), d(1)])).unwrap();
        let vals: Vec<_> = fam.iter().map(|v| v["X"].clone()).collect();
        assert_eq!(vals, vec![Element::Atom(d(0)), Element::Atom(d(1))]);
        assert_eq!(valuation_family(&h, &[], &FamilyConfig::default()).unwrap().len(), 1);
    }

    #[test]
    fn reduced_constants_and_supports() {
        let h = zero_model(Mode::Extended);
        let m = AtomList::base(ListMode::Full);
        let rh = reduce_support(&h, &m);
        let c = rh.constant("zero").unwrap();
        assert!(elem_eq(&c, &listabs(&m, h.constant("zero").unwrap()).unwrap()));
        let lifted = lift_valuation(&Valuation::new(), &m).unwrap();
        assert!(lifted.is_empty());
        let mut val = Valuation::new();
        val.insert("X".into(), Element::PermSet(PermissionSet::comb()));
        let lifted = lift_valuation(&val, &m).unwrap();
        assert!(lifted["X"].support().is_empty());
    }

    #[test]
    fn shift_valuation_side_condition() {
        let mut val = Valuation::new();
        val.insert("X".into(), Element::Atom(d(0)));
        let ab: GenPerm = FinPerm::swap(d(0), d(1)).unwrap().into();
        assert_eq!(shift_valuation(&ab, &val).unwrap()["X"], Element::Atom(d(1)));
        assert_eq!(shift_valuation(&GenPerm::identity(), &val).unwrap(), val);
        let up: GenPerm = FinPerm::swap(d(0), u(1)).unwrap().into();
        assert!(matches!(shift_valuation(&up, &val), Err(NomError::ShiftValuation(_))));
    }
}
