//! The executable universe of permissive-nominal elements.

mod carrier;
mod list;

use std::collections::BTreeSet;
use std::fmt;

pub use carrier::{orbit_match, Carrier, PermGroup, DEFAULT_MATCH_CAP};
pub(crate) use carrier::complete;
pub use list::{base_at, base_position, AtomList, ListMode};

use crate::atoms::{Atom, FinPerm, GenPerm, Zone};
use crate::error::{NomError, Result};
use crate::permission::{PermissionSet, SupportDescriptor};

/// `[l]x`, stored with its list and body. Only constructible when the
/// residual support `supp(x) ∖ supp(l)` is finite.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ListAbstraction {
    list: AtomList,
    body: Box<Element>,
}

impl ListAbstraction {
    pub fn list(&self) -> &AtomList {
        &self.list
    }

    pub fn body(&self) -> &Element {
        &self.body
    }
}

/// An element of the universe. The derived equality is structural; use
/// [`elem_eq`] for equality up to the binders.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Atom(Atom),
    Tuple(Vec<Element>),
    Abs(Atom, Box<Element>),
    ListAbs(ListAbstraction),
    /// An infinite list as an element in its own right.
    List(AtomList),
    PermSet(PermissionSet),
    /// The orbit element `x_i`: fixed by every finite permutation, moved
    /// by the shift.
    Fuzzy(i64),
    /// An opaque element with a declared support.
    Unit(String, SupportDescriptor),
}

impl Element {
    pub fn atom(a: Atom) -> Element {
        Element::Atom(a)
    }

    pub fn abs(a: Atom, x: Element) -> Element {
        Element::Abs(a, Box::new(x))
    }

    pub fn tuple(xs: impl IntoIterator<Item = Element>) -> Element {
        Element::Tuple(xs.into_iter().collect())
    }

    pub fn unit(tag: &str, supp: SupportDescriptor) -> Element {
        Element::Unit(tag.to_string(), supp)
    }

    /// The least supporting set.
    pub fn support(&self) -> SupportDescriptor {
        match self {
            Element::Atom(a) => SupportDescriptor::singleton(*a),
            Element::Tuple(xs) => {
                let parts: Vec<_> = xs.iter().map(Element::support).collect();
                SupportDescriptor::union_all(&parts)
            }
            Element::Abs(a, x) => x.support().remove(&[*a].into()),
            Element::ListAbs(la) => residual(&la.list, &la.body)
                .expect("list abstractions are built with finite residual"),
            Element::List(l) => l.support(),
            Element::PermSet(s) => s.descriptor(),
            Element::Fuzzy(_) => SupportDescriptor::empty(),
            Element::Unit(_, d) => d.clone(),
        }
    }

    /// True when the support is sensitive to the shift: the element is fixed
    /// by finite permutations but moved by δ.
    pub fn is_shift_sensitive(&self) -> bool {
        match self {
            Element::Fuzzy(_) => true,
            Element::Tuple(xs) => xs.iter().any(Element::is_shift_sensitive),
            Element::Abs(_, x) => x.is_shift_sensitive(),
            Element::ListAbs(la) => la.body.is_shift_sensitive(),
            _ => false,
        }
    }

    /// Atoms occurring in the finite description, bound or free.
    pub fn mentioned_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_mentioned(&mut out);
        out
    }

    fn collect_mentioned(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Element::Atom(a) => {
                out.insert(*a);
            }
            Element::Tuple(xs) => xs.iter().for_each(|x| x.collect_mentioned(out)),
            Element::Abs(a, x) => {
                out.insert(*a);
                x.collect_mentioned(out);
            }
            Element::ListAbs(la) => {
                out.extend(la.list.mentioned_atoms());
                la.body.collect_mentioned(out);
            }
            Element::List(l) => out.extend(l.mentioned_atoms()),
            Element::PermSet(s) => {
                out.extend(s.removed().iter().copied());
                out.extend(s.added().iter().copied());
            }
            Element::Fuzzy(_) => {}
            Element::Unit(_, d) => out.extend(d.perturbation()),
        }
    }

    /// Structural action of a finite permutation.
    pub fn act_finite(&self, pi: &FinPerm) -> Element {
        if pi.is_identity() {
            return self.clone();
        }
        match self {
            Element::Atom(a) => Element::Atom(pi.apply(*a)),
            Element::Tuple(xs) => Element::Tuple(xs.iter().map(|x| x.act_finite(pi)).collect()),
            Element::Abs(a, x) => Element::abs(pi.apply(*a), x.act_finite(pi)),
            Element::ListAbs(la) => Element::ListAbs(ListAbstraction {
                list: la.list.act_finite(pi),
                body: Box::new(la.body.act_finite(pi)),
            }),
            Element::List(l) => Element::List(l.act_finite(pi)),
            Element::PermSet(s) => Element::PermSet(s.act(&pi.clone().into())),
            Element::Fuzzy(i) => Element::Fuzzy(*i),
            Element::Unit(t, d) => Element::Unit(t.clone(), d.act_finite(pi)),
        }
    }

    /// Action of a shift-extended permutation. Lists and half-comb supports
    /// have no representable image under a nonzero shift.
    pub fn act(&self, pi: &GenPerm) -> Result<Element> {
        if let Some(f) = pi.as_finite() {
            return Ok(self.act_finite(f));
        }
        Ok(match self {
            Element::Atom(a) => Element::Atom(pi.apply(*a)),
            Element::Tuple(xs) => {
                Element::Tuple(xs.iter().map(|x| x.act(pi)).collect::<Result<_>>()?)
            }
            Element::Abs(a, x) => Element::abs(pi.apply(*a), x.act(pi)?),
            Element::ListAbs(la) => {
                let list = la.list.act(pi)?;
                Element::ListAbs(ListAbstraction {
                    list,
                    body: Box::new(la.body.act(pi)?),
                })
            }
            Element::List(l) => Element::List(l.act(pi)?),
            Element::PermSet(s) => Element::PermSet(s.act(pi)),
            Element::Fuzzy(i) => Element::Fuzzy(i + pi.shift_power()),
            Element::Unit(t, d) => Element::Unit(t.clone(), d.act(pi)?),
        })
    }

    /// A representative of the α-class, equal structurally for
    /// [`elem_eq`]-equal inputs.
    pub fn canonical(&self) -> Element {
        match self {
            Element::Tuple(xs) => Element::Tuple(xs.iter().map(Element::canonical).collect()),
            Element::Abs(a, x) => {
                let avoid = x.support().remove(&[*a].into());
                let b = least_fresh(a.sort, &avoid);
                let body = if b == *a {
                    (**x).clone()
                } else {
                    x.act_finite(&FinPerm::swap(*a, b).expect("same sort, distinct"))
                };
                Element::abs(b, body.canonical())
            }
            Element::ListAbs(la) => {
                let supp = self.support();
                let l = AtomList::fresh(la.list.mode(), &supp)
                    .expect("residual support is finite");
                let body = listabs_at(self, &l).expect("fresh list avoids the support");
                Element::ListAbs(ListAbstraction {
                    list: l,
                    body: Box::new(body.canonical()),
                })
            }
            other => other.clone(),
        }
    }
}

/// The least atom of a sort outside `avoid`, Down zone first.
fn least_fresh(sort: u32, avoid: &SupportDescriptor) -> Atom {
    avoid
        .fresh_atom(sort, Zone::Down)
        .or_else(|_| avoid.fresh_atom(sort, Zone::Up))
        .expect("Up atoms of a sort are never exhausted by a support")
}

fn residual(l: &AtomList, x: &Element) -> Result<SupportDescriptor> {
    let r = x
        .support()
        .difference(&l.support())
        .map_err(|_| NomError::UnrepresentableAbstraction(format!("{} minus {}", x.support(), l.support())))?;
    if !r.is_finite() {
        return Err(NomError::UnrepresentableAbstraction(r.to_string()));
    }
    Ok(r)
}

/// `[l]x`, with support `supp(x) ∖ supp(l)`.
pub fn listabs(l: &AtomList, x: Element) -> Result<Element> {
    residual(l, &x)?;
    Ok(Element::ListAbs(ListAbstraction {
        list: l.clone(),
        body: Box::new(x),
    }))
}

/// `x̂@l`: the unique `x` with `x̂ = [l]x`. Requires `supp(x̂) ∩ supp(l) = ∅`.
pub fn listabs_at(xhat: &Element, l: &AtomList) -> Result<Element> {
    let Element::ListAbs(la) = xhat else {
        return Err(NomError::CarrierMismatch(format!("{xhat} is not a list abstraction")));
    };
    if la.list.mode() != l.mode() {
        return Err(NomError::ListNotFresh(format!(
            "{xhat} binds a {} list, got a {} list",
            la.list.mode(),
            l.mode()
        )));
    }
    let supp = xhat.support();
    if !supp.is_disjoint(&l.support()) {
        return Err(NomError::ListNotFresh(format!(
            "{} meets the atoms of {l}",
            supp.intersection(&l.support())
        )));
    }
    let pi = la.list.carrying_perm(l)?;
    Ok(la.body.act_finite(&pi))
}

/// One list `l`, fresh for every `y_i` and for `avoid`, with `y_i = [l]x_i`.
pub fn factor_common(mode: ListMode, ys: &[Element], avoid: &BTreeSet<Atom>) -> Result<(AtomList, Vec<Element>)> {
    let mut supp = SupportDescriptor::finite(avoid.iter().copied());
    for y in ys {
        supp = supp.union(&y.support());
    }
    let l = AtomList::fresh(mode, &supp)?;
    let xs = ys.iter().map(|y| listabs_at(y, &l)).collect::<Result<_>>()?;
    Ok((l, xs))
}

/// Equality of elements, with α-equivalence for `[a]x` and `[l]x`.
pub fn elem_eq(x: &Element, y: &Element) -> bool {
    match (x, y) {
        (Element::Tuple(xs), Element::Tuple(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| elem_eq(a, b))
        }
        (Element::Abs(a, x1), Element::Abs(b, y1)) => {
            if a.sort != b.sort {
                false
            } else if a == b {
                elem_eq(x1, y1)
            } else {
                !x1.support().member(b)
                    && elem_eq(&x1.act_finite(&FinPerm::swap(*b, *a).expect("distinct")), y1)
            }
        }
        (Element::ListAbs(lx), Element::ListAbs(ly)) => {
            if lx.list.mode() != ly.list.mode() {
                return false;
            }
            let sx = x.support();
            if sx != y.support() {
                return false;
            }
            let Ok(l) = AtomList::fresh(lx.list.mode(), &sx) else {
                return false;
            };
            match (listabs_at(x, &l), listabs_at(y, &l)) {
                (Ok(a), Ok(b)) => elem_eq(&a, &b),
                _ => false,
            }
        }
        _ => x == y,
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Atom(a) => write!(f, "atm {a}"),
            Element::Tuple(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                if xs.len() == 1 {
                    write!(f, ",")?;
                }
                write!(f, ")")
            }
            Element::Abs(a, x) => write!(f, "[{a}]{x}"),
            Element::ListAbs(la) => write!(f, "[{}]{}", la.list, la.body),
            Element::List(l) => write!(f, "{l}"),
            Element::PermSet(s) => write!(f, "pset {s}"),
            Element::Fuzzy(i) => write!(f, "fuzzy {i}"),
            Element::Unit(t, d) => write!(f, "unit {t} supp={d}"),
        }
    }
}
