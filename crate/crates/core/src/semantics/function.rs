use std::collections::BTreeSet;
use std::fmt;

use crate::atoms::{Atom, FinPerm, Zone};
use crate::error::{NomError, Result};
use crate::permission::SupportDescriptor;
use crate::universe::{elem_eq, Carrier, Element, PermGroup};

/// Equivariant functions built from a closed family of combinators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivariantFn {
    Identity,
    /// A constant map; its value must have empty support.
    ConstantTo(Element),
    /// The `i`-th component of a tuple.
    Project(usize),
    /// `Compose(f, g)` is `f ∘ g`.
    Compose(Box<EquivariantFn>, Box<EquivariantFn>),
    /// `(a, x) ↦ [a]x`.
    MakeAbs,
    /// `x ↦ (f_1(x), …, f_n(x))`.
    MakeTuple(Vec<EquivariantFn>),
    /// `π·g ↦ π·f(g)` for each table entry `(g, f(g))`.
    OrbitTable(Vec<(Element, Element)>, PermGroup),
}

impl EquivariantFn {
    pub fn constant_to(e: Element) -> Result<EquivariantFn> {
        if !e.support().is_empty() {
            return Err(NomError::NotEquivariant(format!("constant value {e} has support {}", e.support())));
        }
        Ok(EquivariantFn::ConstantTo(e))
    }

    /// Builds an orbit table after checking that it defines a function.
    pub fn orbit_table(entries: Vec<(Element, Element)>, group: PermGroup) -> Result<EquivariantFn> {
        validate_table(&entries, group)?;
        Ok(EquivariantFn::OrbitTable(entries, group))
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        match self {
            EquivariantFn::Identity => Ok(x.clone()),
            EquivariantFn::ConstantTo(e) => Ok(e.clone()),
            EquivariantFn::Project(i) => match x {
                Element::Tuple(xs) if *i < xs.len() => Ok(xs[*i].clone()),
                _ => Err(NomError::CarrierMismatch(format!("cannot project {i} from {x}"))),
            },
            EquivariantFn::Compose(f, g) => f.apply(&g.apply(x)?),
            EquivariantFn::MakeAbs => match x {
                Element::Tuple(xs) if xs.len() == 2 => match &xs[0] {
                    Element::Atom(a) => Ok(Element::abs(*a, xs[1].clone())),
                    _ => Err(NomError::CarrierMismatch(format!("abs expects an atom, got {}", xs[0]))),
                },
                _ => Err(NomError::CarrierMismatch(format!("abs expects a pair, got {x}"))),
            },
            EquivariantFn::MakeTuple(fs) => Ok(Element::Tuple(
                fs.iter().map(|f| f.apply(x)).collect::<Result<_>>()?,
            )),
            EquivariantFn::OrbitTable(entries, group) => {
                let inputs = Carrier::new(entries.iter().map(|(g, _)| g.clone()).collect(), *group);
                match inputs.find_orbit(x)? {
                    Some((i, pi)) => entries[i].1.act(&pi),
                    None => Err(NomError::CarrierMismatch(format!("{x} is outside the table's domain"))),
                }
            }
        }
    }
}

/// Probe atoms around an entry: its mentioned atoms plus two fresh atoms of
/// each zone for every sort involved.
fn probe_atoms(g: &Element, out: &Element) -> Vec<Atom> {
    let mut atoms: BTreeSet<Atom> = g.canonical().mentioned_atoms();
    atoms.extend(out.canonical().mentioned_atoms());
    let sorts: BTreeSet<u32> = atoms.iter().map(|a| a.sort).collect();
    let avoid = SupportDescriptor::finite(atoms.iter().copied());
    let mut extra = Vec::new();
    for s in sorts.iter().copied().chain(std::iter::once(0)) {
        for z in [Zone::Down, Zone::Up] {
            extra.extend(avoid.fresh_atoms(s, z, 2).unwrap_or_default());
        }
    }
    atoms.extend(extra);
    atoms.into_iter().collect()
}

fn validate_table(entries: &[(Element, Element)], group: PermGroup) -> Result<()> {
    for (g, out) in entries {
        if !out.support().is_subset(&g.support()) {
            return Err(NomError::NotEquivariant(format!(
                "{g} ↦ {out}: support {} is not inside {}",
                out.support(),
                g.support()
            )));
        }
        let atoms = probe_atoms(g, out);
        let mut swaps = Vec::new();
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[i + 1..] {
                if a.sort == b.sort {
                    swaps.push(FinPerm::swap(*a, *b)?);
                }
            }
        }
        let mut probes = swaps.clone();
        for s in &swaps {
            for t in &swaps {
                probes.push(s.compose(t));
            }
        }
        for pi in &probes {
            if elem_eq(&g.act_finite(pi), g) && !elem_eq(&out.act_finite(pi), out) {
                return Err(NomError::NotEquivariant(format!(
                    "{pi} fixes {g} but moves its image {out}"
                )));
            }
        }
    }
    for (i, (g, out)) in entries.iter().enumerate() {
        for (h, out2) in &entries[i + 1..] {
            let same = Carrier::new(vec![g.clone()], group);
            if let Some((_, pi)) = same.find_orbit(h)? {
                if !elem_eq(&out.act(&pi)?, out2) {
                    return Err(NomError::NotEquivariant(format!(
                        "{g} and {h} share an orbit but their images disagree"
                    )));
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for EquivariantFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivariantFn::Identity => write!(f, "id"),
            EquivariantFn::ConstantTo(e) => write!(f, "const {e}"),
            EquivariantFn::Project(i) => write!(f, "proj {i}"),
            EquivariantFn::Compose(a, b) => write!(f, "compose({a}; {b})"),
            EquivariantFn::MakeAbs => write!(f, "abs"),
            EquivariantFn::MakeTuple(fs) => {
                let parts: Vec<String> = fs.iter().map(|g| g.to_string()).collect();
                write!(f, "tuple({})", parts.join("; "))
            }
            EquivariantFn::OrbitTable(entries, group) => {
                let parts: Vec<String> = entries.iter().map(|(g, o)| format!("{g} => {o}")).collect();
                write!(f, "table {group} {{ {} }}", parts.join("; "))
            }
        }
    }
}
