//! Sorts, signatures and permissive-nominal terms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::atoms::{agree_on, pi_slash, Atom, FinPerm, GenPerm};
use crate::error::{NomError, Result};
use crate::permission::{Base, PermissionSet, SupportDescriptor};
use crate::universe::PermGroup;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Name(u32),
    Base(String),
    Tuple(Vec<Sort>),
    Abs(u32, Box<Sort>),
}

impl Sort {
    pub fn base(name: &str) -> Sort {
        Sort::Base(name.to_string())
    }

    pub fn abs(nu: u32, inner: Sort) -> Sort {
        Sort::Abs(nu, Box::new(inner))
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Name(n) => write!(f, "nu{n}"),
            Sort::Base(t) => write!(f, "{t}"),
            Sort::Tuple(ss) => {
                let parts: Vec<String> = ss.iter().map(|s| s.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            Sort::Abs(n, s) => write!(f, "[nu{n}]{s}"),
        }
    }
}

/// Which permission sets a signature may use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Only `π·A<` for finite `π`; every unknown has permission set `A<`.
    #[default]
    Strict,
    /// Any `(A< ∖ A) ∪ B` with `A`, `B` finite.
    Extended,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Extended => "extended",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstDecl {
    pub sort: String,
    pub pmss: SupportDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownDecl {
    pub sort: Sort,
    pub pmss: PermissionSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormerDecl {
    pub arg: Sort,
    pub result: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    /// Name sorts by index, with optional display names.
    pub name_sorts: BTreeMap<u32, Option<String>>,
    pub base_sorts: BTreeSet<String>,
    pub constants: BTreeMap<String, ConstDecl>,
    pub unknowns: BTreeMap<String, UnknownDecl>,
    pub formers: BTreeMap<String, FormerDecl>,
    /// Proposition-formers and the sort of their argument.
    pub predicates: BTreeMap<String, Sort>,
    pub mode: Mode,
    pub group: PermGroup,
    /// Undeclared capitalised identifiers become unknowns of sort `tau`.
    pub auto_unknowns: bool,
}

impl Signature {
    /// One name sort `0`, one base sort `tau`, and unknowns declared on use.
    pub fn permissive() -> Signature {
        let mut s = Signature::default();
        s.name_sorts.insert(0, None);
        s.base_sorts.insert("tau".into());
        s.auto_unknowns = true;
        s
    }

    pub fn name_sort_index(&self, name: &str) -> Option<u32> {
        self.name_sorts
            .iter()
            .find(|(_, n)| n.as_deref() == Some(name))
            .map(|(i, _)| *i)
            .or_else(|| name.strip_prefix("nu").and_then(|d| d.parse().ok()))
            .filter(|i| self.name_sorts.contains_key(i))
    }

    pub fn unknown(&self, x: &str) -> Result<&UnknownDecl> {
        self.unknowns.get(x).ok_or_else(|| NomError::Unbound(format!("unknown {x}")))
    }

    pub fn constant(&self, c: &str) -> Result<&ConstDecl> {
        self.constants.get(c).ok_or_else(|| NomError::Unbound(format!("constant {c}")))
    }

    pub fn former(&self, f: &str) -> Result<&FormerDecl> {
        self.formers.get(f).ok_or_else(|| NomError::Unbound(format!("term-former {f}")))
    }

    pub fn declare_unknown(&mut self, x: &str, sort: Sort) {
        self.unknowns.insert(
            x.to_string(),
            UnknownDecl {
                sort,
                pmss: PermissionSet::comb(),
            },
        );
    }

    /// `pmss(X)` as a descriptor.
    pub fn pmss(&self, x: &str) -> Result<SupportDescriptor> {
        Ok(self.unknown(x)?.pmss.descriptor())
    }

    pub fn check_sort(&self, s: &Sort) -> Result<()> {
        match s {
            Sort::Name(n) if self.name_sorts.contains_key(n) => Ok(()),
            Sort::Name(n) => Err(NomError::Signature(format!("undeclared name sort {n}"))),
            Sort::Base(t) if self.base_sorts.contains(t) => Ok(()),
            Sort::Base(t) => Err(NomError::Signature(format!("undeclared base sort {t}"))),
            Sort::Tuple(ss) => ss.iter().try_for_each(|s| self.check_sort(s)),
            Sort::Abs(n, s) => {
                self.check_sort(&Sort::Name(*n))?;
                self.check_sort(s)
            }
        }
    }

    /// Checks every declaration against the sort language and the mode.
    pub fn validate(&self) -> Result<()> {
        for (c, d) in &self.constants {
            self.check_sort(&Sort::Base(d.sort.clone()))?;
            let ok = matches!(d.pmss.base(), Base::Comb | Base::Empty)
                && d.pmss.is_subset(&SupportDescriptor::comb());
            if !ok {
                return Err(NomError::Signature(format!(
                    "pmss of constant {c} must lie inside comb, got {}",
                    d.pmss
                )));
            }
        }
        for (x, d) in &self.unknowns {
            self.check_sort(&d.sort)?;
            if self.mode == Mode::Strict && d.pmss != PermissionSet::comb() {
                return Err(NomError::Signature(format!(
                    "strict mode gives unknown {x} permission set comb, not {}",
                    d.pmss
                )));
            }
        }
        for d in self.formers.values() {
            self.check_sort(&d.arg)?;
            self.check_sort(&Sort::Base(d.result.clone()))?;
        }
        for s in self.predicates.values() {
            self.check_sort(s)?;
        }
        Ok(())
    }

    pub(crate) fn check_perm(&self, pi: &GenPerm) -> Result<()> {
        if pi.shift_power() != 0 && self.group != PermGroup::Shift {
            return Err(NomError::Sort(format!(
                "{pi} uses the shift but the signature group is finite"
            )));
        }
        Ok(())
    }
}

/// A permissive-nominal term. Terms are not quotiented by α-equivalence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Atom(Atom),
    /// `π·C`.
    Const(GenPerm, String),
    /// `π·X`.
    Unknown(GenPerm, String),
    App(String, Box<Term>),
    Tuple(Vec<Term>),
    Abs(Atom, Box<Term>),
}

impl Term {
    pub fn unknown(x: &str) -> Term {
        Term::Unknown(GenPerm::identity(), x.to_string())
    }

    pub fn constant(c: &str) -> Term {
        Term::Const(GenPerm::identity(), c.to_string())
    }

    pub fn app(f: &str, r: Term) -> Term {
        Term::App(f.to_string(), Box::new(r))
    }

    pub fn abs(a: Atom, r: Term) -> Term {
        Term::Abs(a, Box::new(r))
    }

    /// Whether any moderating permutation uses the shift.
    pub fn uses_shift(&self) -> bool {
        match self {
            Term::Atom(_) => false,
            Term::Const(p, _) | Term::Unknown(p, _) => !p.is_finite(),
            Term::App(_, r) | Term::Abs(_, r) => r.uses_shift(),
            Term::Tuple(rs) => rs.iter().any(Term::uses_shift),
        }
    }
}

pub fn typecheck(sig: &Signature, r: &Term) -> Result<Sort> {
    match r {
        Term::Atom(a) => {
            if sig.name_sorts.contains_key(&a.sort) {
                Ok(Sort::Name(a.sort))
            } else {
                Err(NomError::Sort(format!("atom {a} has undeclared name sort {}", a.sort)))
            }
        }
        Term::Unknown(p, x) => {
            sig.check_perm(p)?;
            Ok(sig.unknown(x)?.sort.clone())
        }
        Term::Const(p, c) => {
            sig.check_perm(p)?;
            Ok(Sort::Base(sig.constant(c)?.sort.clone()))
        }
        Term::App(f, arg) => {
            let d = sig.former(f)?;
            let s = typecheck(sig, arg)?;
            if s != d.arg {
                return Err(NomError::Sort(format!(
                    "{f} expects {} but {arg} has sort {s}",
                    d.arg
                )));
            }
            Ok(Sort::Base(d.result.clone()))
        }
        Term::Tuple(rs) => Ok(Sort::Tuple(
            rs.iter().map(|r| typecheck(sig, r)).collect::<Result<_>>()?,
        )),
        Term::Abs(a, body) => {
            if !sig.name_sorts.contains_key(&a.sort) {
                return Err(NomError::Sort(format!("abstracted atom {a} has no name sort")));
            }
            Ok(Sort::abs(a.sort, typecheck(sig, body)?))
        }
    }
}

/// Free atoms.
pub fn fa(sig: &Signature, r: &Term) -> Result<SupportDescriptor> {
    match r {
        Term::Atom(a) => Ok(SupportDescriptor::singleton(*a)),
        Term::Unknown(p, x) => sig.pmss(x)?.act(p),
        Term::Const(p, c) => sig.constant(c)?.pmss.act(p),
        Term::App(_, arg) => fa(sig, arg),
        Term::Tuple(rs) => {
            let parts = rs.iter().map(|r| fa(sig, r)).collect::<Result<Vec<_>>>()?;
            Ok(SupportDescriptor::union_all(&parts))
        }
        Term::Abs(a, body) => Ok(fa(sig, body)?.remove(&[*a].into())),
    }
}

/// Free unknowns.
pub fn fv(r: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_fv(r, &mut out);
    out
}

fn collect_fv(r: &Term, out: &mut BTreeSet<String>) {
    match r {
        Term::Atom(_) | Term::Const(..) => {}
        Term::Unknown(_, x) => {
            out.insert(x.clone());
        }
        Term::App(_, arg) | Term::Abs(_, arg) => collect_fv(arg, out),
        Term::Tuple(rs) => rs.iter().for_each(|r| collect_fv(r, out)),
    }
}

/// Atoms mentioned anywhere in the term, including permutations.
pub fn mentioned_atoms(r: &Term) -> BTreeSet<Atom> {
    let mut out = BTreeSet::new();
    collect_mentioned(r, &mut out);
    out
}

fn collect_mentioned(r: &Term, out: &mut BTreeSet<Atom>) {
    match r {
        Term::Atom(a) => {
            out.insert(*a);
        }
        Term::Const(p, _) | Term::Unknown(p, _) => out.extend(p.finite_part().nontriv()),
        Term::App(_, arg) => collect_mentioned(arg, out),
        Term::Abs(a, arg) => {
            out.insert(*a);
            collect_mentioned(arg, out);
        }
        Term::Tuple(rs) => rs.iter().for_each(|r| collect_mentioned(r, out)),
    }
}

/// `π·r`. Moderated heads compose.
pub fn act_term(pi: &GenPerm, r: &Term) -> Term {
    match r {
        Term::Atom(a) => Term::Atom(pi.apply(*a)),
        Term::Const(p, c) => Term::Const(pi.compose(p), c.clone()),
        Term::Unknown(p, x) => Term::Unknown(pi.compose(p), x.clone()),
        Term::App(f, arg) => Term::App(f.clone(), Box::new(act_term(pi, arg))),
        Term::Tuple(rs) => Term::Tuple(rs.iter().map(|r| act_term(pi, r)).collect()),
        Term::Abs(a, body) => Term::Abs(pi.apply(*a), Box::new(act_term(pi, body))),
    }
}

fn moderated_atoms(p: &GenPerm, region: &SupportDescriptor, head: &str) -> Result<BTreeSet<Atom>> {
    let Some(f) = p.as_finite() else {
        return Err(NomError::InfiniteAtoms(format!("{p} * {head}")));
    };
    Ok(pi_slash(f, region).nontriv())
}

/// `atoms(r)`: the atoms a term genuinely depends on. Fails on
/// shift-moderated unknowns and constants, where the set is infinite.
pub fn atoms_of(sig: &Signature, r: &Term) -> Result<BTreeSet<Atom>> {
    match r {
        Term::Atom(a) => Ok([*a].into()),
        Term::Unknown(p, x) => moderated_atoms(p, &sig.pmss(x)?, x),
        Term::Const(p, c) => moderated_atoms(p, &sig.constant(c)?.pmss, c),
        Term::App(_, arg) => atoms_of(sig, arg),
        Term::Tuple(rs) => {
            let mut out = BTreeSet::new();
            for r in rs {
                out.extend(atoms_of(sig, r)?);
            }
            Ok(out)
        }
        Term::Abs(a, body) => {
            let mut out = atoms_of(sig, body)?;
            out.insert(*a);
            Ok(out)
        }
    }
}

/// α-equivalence, decided by syntax-directed rules.
pub fn alpha_eq(sig: &Signature, r: &Term, s: &Term) -> Result<bool> {
    let sr = typecheck(sig, r)?;
    let ss = typecheck(sig, s)?;
    if sr != ss {
        return Err(NomError::Sort(format!("{r} : {sr} and {s} : {ss}")));
    }
    alpha(sig, r, s)
}

fn alpha(sig: &Signature, r: &Term, s: &Term) -> Result<bool> {
    Ok(match (r, s) {
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Unknown(p, x), Term::Unknown(q, y)) => x == y && agree_on(p, q, &sig.pmss(x)?)?,
        (Term::Const(p, c), Term::Const(q, d)) => {
            c == d && agree_on(p, q, &sig.constant(c)?.pmss)?
        }
        (Term::App(f, x), Term::App(g, y)) => f == g && alpha(sig, x, y)?,
        (Term::Tuple(xs), Term::Tuple(ys)) => {
            if xs.len() != ys.len() {
                return Ok(false);
            }
            for (x, y) in xs.iter().zip(ys) {
                if !alpha(sig, x, y)? {
                    return Ok(false);
                }
            }
            true
        }
        (Term::Abs(a, x), Term::Abs(b, y)) => {
            if a.sort != b.sort {
                false
            } else if a == b {
                alpha(sig, x, y)?
            } else if fa(sig, x)?.member(b) {
                false
            } else {
                let swap = GenPerm::from(FinPerm::swap(*b, *a)?);
                alpha(sig, &act_term(&swap, x), y)?
            }
        }
        _ => false,
    })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => write!(f, "{a}"),
            Term::Const(p, c) | Term::Unknown(p, c) => {
                if p.is_identity() {
                    write!(f, "{c}")
                } else {
                    write!(f, "{p} * {c}")
                }
            }
            Term::App(g, arg) => match &**arg {
                Term::Tuple(_) => write!(f, "{g}{arg}"),
                _ => write!(f, "{g}({arg})"),
            },
            Term::Tuple(rs) => {
                write!(f, "(")?;
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{r}")?;
                }
                if rs.len() == 1 {
                    write!(f, ",")?;
                }
                write!(f, ")")
            }
            Term::Abs(a, body) => write!(f, "[{a}]{body}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(i: u64) -> Atom {
        Atom::down(0, i)
    }
    fn u(i: u64) -> Atom {
        Atom::up(0, i)
    }

    fn sig() -> Signature {
        let mut s = Signature::permissive();
        s.declare_unknown("X", Sort::base("tau"));
        s.declare_unknown("Y", Sort::base("tau"));
        s.formers.insert(
            "f".into(),
            FormerDecl {
                arg: Sort::Name(0),
                result: "tau".into(),
            },
        );
        s.name_sorts.insert(1, None);
        s
    }

    fn swap(a: Atom, b: Atom) -> GenPerm {
        FinPerm::swap(a, b).unwrap().into()
    }

    #[test]
    fn typing() {
        let s = sig();
        assert_eq!(typecheck(&s, &Term::Atom(d(0))).unwrap(), Sort::Name(0));
        assert_eq!(
            typecheck(&s, &Term::abs(d(0), Term::unknown("X"))).unwrap(),
            Sort::abs(0, Sort::base("tau"))
        );
        assert!(typecheck(&s, &Term::app("f", Term::Atom(Atom::down(1, 0)))).is_err());
    }

    #[test]
    fn free_atoms() {
        let s = sig();
        assert_eq!(fa(&s, &Term::Atom(d(0))).unwrap(), SupportDescriptor::singleton(d(0)));
        let moved = Term::Unknown(swap(d(0), u(1)), "X".into());
        assert_eq!(
            fa(&s, &moved).unwrap(),
            PermissionSet::new([d(0)], [u(1)]).unwrap().descriptor()
        );
        let abs = Term::abs(d(0), Term::unknown("X"));
        assert_eq!(
            fa(&s, &abs).unwrap(),
            PermissionSet::new([d(0)], []).unwrap().descriptor()
        );
    }

    #[test]
    fn free_unknowns() {
        assert!(fv(&Term::Atom(d(0))).is_empty());
        let t = Term::Tuple(vec![Term::unknown("X"), Term::Unknown(swap(d(0), d(1)), "X".into())]);
        assert_eq!(fv(&t), ["X".to_string()].into());
        assert_eq!(fv(&Term::app("f", Term::abs(d(0), Term::unknown("Y")))), ["Y".to_string()].into());
    }

    #[test]
    fn action_composes() {
        let p = swap(d(0), d(1));
        assert_eq!(act_term(&p, &Term::Atom(d(0))), Term::Atom(d(1)));
        let q = swap(d(1), d(2));
        assert_eq!(
            act_term(&p, &Term::Unknown(q.clone(), "X".into())),
            Term::Unknown(p.compose(&q), "X".into())
        );
        assert_eq!(
            act_term(&p, &Term::abs(d(0), Term::unknown("X"))),
            Term::abs(d(1), Term::Unknown(p.clone(), "X".into()))
        );
    }

    #[test]
    fn atoms_examples() {
        let s = sig();
        assert!(atoms_of(&s, &Term::unknown("X")).unwrap().is_empty());
        assert_eq!(atoms_of(&s, &Term::abs(d(0), Term::unknown("X"))).unwrap(), [d(0)].into());
        let t = Term::abs(u(1), Term::Unknown(swap(u(1), d(0)), "X".into()));
        assert_eq!(atoms_of(&s, &t).unwrap(), [u(1), d(0)].into());
        let sh = Term::Unknown(GenPerm::shift(1), "X".into());
        assert!(matches!(atoms_of(&s, &sh), Err(NomError::InfiniteAtoms(_))));
    }

    #[test]
    fn alpha_examples() {
        let s = sig();
        let l = Term::abs(d(0), Term::unknown("X"));
        let r = Term::abs(u(1), Term::Unknown(swap(u(1), d(0)), "X".into()));
        assert!(alpha_eq(&s, &l, &r).unwrap());
        assert!(!alpha_eq(&s, &l, &Term::abs(u(1), Term::unknown("X"))).unwrap());
        assert!(alpha_eq(&s, &l, &l).unwrap());
        assert_ne!(atoms_of(&s, &l).unwrap(), atoms_of(&s, &r).unwrap());
    }
}
