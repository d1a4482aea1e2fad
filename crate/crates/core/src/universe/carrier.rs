use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{elem_eq, Element};
use crate::atoms::{Atom, FinPerm, GenPerm};
use crate::error::{NomError, Result};
use crate::permission::SupportDescriptor;

/// The permutation group a carrier is closed under.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PermGroup {
    /// Finite permutations only.
    #[default]
    Finite,
    /// Finite permutations and the shift δ.
    Shift,
}

impl fmt::Display for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PermGroup::Finite => "finite",
            PermGroup::Shift => "shift",
        })
    }
}

/// Shift powers tried when matching orbits under the shift group.
const SHIFT_SEARCH: i64 = 6;

/// Default bound on the number of candidate permutations tried per match.
pub const DEFAULT_MATCH_CAP: usize = 200_000;

/// `{π·g | g ∈ generators, π ∈ group}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Carrier {
    pub generators: Vec<Element>,
    pub group: PermGroup,
}

impl Carrier {
    pub fn new(generators: Vec<Element>, group: PermGroup) -> Carrier {
        Carrier { generators, group }
    }

    /// The first generator whose orbit holds `x`, with a permutation
    /// carrying it to `x`.
    pub fn find_orbit(&self, x: &Element) -> Result<Option<(usize, GenPerm)>> {
        for (i, g) in self.generators.iter().enumerate() {
            if let Some(pi) = orbit_match(g, x, self.group, DEFAULT_MATCH_CAP)? {
                return Ok(Some((i, pi)));
            }
        }
        Ok(None)
    }

    pub fn contains(&self, x: &Element) -> Result<bool> {
        Ok(self.find_orbit(x)?.is_some())
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "{{ {} }} closure {}", gens.join(", "), self.group)
    }
}

fn first_fuzzy(x: &Element) -> Option<i64> {
    match x {
        Element::Fuzzy(i) => Some(*i),
        Element::Tuple(xs) => xs.iter().find_map(first_fuzzy),
        Element::Abs(_, y) => first_fuzzy(y),
        Element::ListAbs(la) => first_fuzzy(la.body()),
        _ => None,
    }
}

/// A permutation `π` in `group` with `π·g = x`, if one exists among those
/// moving only atoms mentioned by `g` or `x`.
pub fn orbit_match(g: &Element, x: &Element, group: PermGroup, cap: usize) -> Result<Option<GenPerm>> {
    match group {
        PermGroup::Finite => Ok(finite_match(g, x, cap)?.map(GenPerm::from)),
        PermGroup::Shift => {
            let ks: Vec<i64> = match (first_fuzzy(g), first_fuzzy(x)) {
                (Some(i), Some(j)) => vec![j - i],
                _ => {
                    let mut v = vec![0];
                    for k in 1..=SHIFT_SEARCH {
                        v.extend([k, -k]);
                    }
                    v
                }
            };
            for k in ks {
                let shift = GenPerm::shift(k);
                let Ok(gk) = g.act(&shift) else { continue };
                if let Some(sigma) = finite_match(&gk, x, cap)? {
                    return Ok(Some(GenPerm::from(sigma).compose(&shift)));
                }
            }
            Ok(None)
        }
    }
}

fn shape_compatible(g: &Element, x: &Element) -> bool {
    match (g, x) {
        (Element::Atom(a), Element::Atom(b)) => a.sort == b.sort,
        (Element::Tuple(xs), Element::Tuple(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| shape_compatible(a, b))
        }
        (Element::Abs(a, y), Element::Abs(b, z)) => a.sort == b.sort && shape_compatible(y, z),
        (Element::ListAbs(l), Element::ListAbs(m)) => l.list().mode() == m.list().mode(),
        (Element::List(l), Element::List(m)) => l.mode() == m.mode(),
        (Element::PermSet(_), Element::PermSet(_)) => true,
        (Element::Fuzzy(i), Element::Fuzzy(j)) => i == j,
        (Element::Unit(s, _), Element::Unit(t, _)) => s == t,
        _ => false,
    }
}

fn finite_match(g: &Element, x: &Element, cap: usize) -> Result<Option<FinPerm>> {
    if !shape_compatible(g, x) {
        return Ok(None);
    }
    if elem_eq(g, x) {
        return Ok(Some(FinPerm::identity()));
    }
    let cg = g.canonical();
    let cx = x.canonical();
    let mut pool: BTreeSet<Atom> = cg.mentioned_atoms();
    pool.extend(cx.mentioned_atoms());
    let pool: Vec<Atom> = pool.into_iter().collect();
    let supports = (cg.support(), cx.support());
    let mut tried = 0usize;
    let mut chosen: Vec<Atom> = Vec::with_capacity(pool.len());
    let mut used = BTreeSet::new();
    search(&cg, &cx, &supports, &pool, &mut chosen, &mut used, &mut tried, cap)
}

#[allow(clippy::too_many_arguments)]
fn search(
    g: &Element,
    x: &Element,
    supports: &(SupportDescriptor, SupportDescriptor),
    pool: &[Atom],
    chosen: &mut Vec<Atom>,
    used: &mut BTreeSet<Atom>,
    tried: &mut usize,
    cap: usize,
) -> Result<Option<FinPerm>> {
    if chosen.len() == pool.len() {
        *tried += 1;
        if *tried > cap {
            return Err(NomError::FamilyTooLarge { size: *tried, cap });
        }
        let pi = complete(pool, chosen);
        return Ok(elem_eq(&g.act_finite(&pi), x).then_some(pi));
    }
    let a = pool[chosen.len()];
    for &b in pool {
        if b.sort != a.sort || used.contains(&b) || supports.0.member(&a) != supports.1.member(&b) {
            continue;
        }
        chosen.push(b);
        used.insert(b);
        let r = search(g, x, supports, pool, chosen, used, tried, cap)?;
        used.remove(&b);
        chosen.pop();
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

/// Extends the injection `src[i] ↦ dst[i]` to a finite permutation.
pub(crate) fn complete(src: &[Atom], dst: &[Atom]) -> FinPerm {
    let mut map: BTreeMap<Atom, Atom> = src.iter().copied().zip(dst.iter().copied()).collect();
    map.retain(|a, b| a != b);
    let dom: BTreeSet<Atom> = map.keys().copied().collect();
    let ran: BTreeSet<Atom> = map.values().copied().collect();
    let mut back: BTreeMap<u32, Vec<Atom>> = BTreeMap::new();
    for a in dom.difference(&ran) {
        back.entry(a.sort).or_default().push(*a);
    }
    for a in ran.difference(&dom) {
        let t = back.get_mut(&a.sort).and_then(|v| v.pop()).expect("balanced by sort");
        map.insert(*a, t);
    }
    FinPerm::from_map(map).expect("completed injection is a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permission::PermissionSet;

    fn d(i: u64) -> Atom {
        Atom::down(0, i)
    }
    fn u(i: u64) -> Atom {
        Atom::up(0, i)
    }

    #[test]
    fn atom_orbit() {
        let c = Carrier::new(vec![Element::Atom(d(0))], PermGroup::Finite);
        assert!(c.contains(&Element::Atom(u(3))).unwrap());
        assert!(!c.contains(&Element::Atom(Atom::down(1, 0))).unwrap());
    }

    #[test]
    fn permission_set_orbit() {
        let b = PermissionSet::new([], [u(1)]).unwrap();
        let c = Carrier::new(vec![Element::PermSet(b)], PermGroup::Finite);
        let moved = PermissionSet::new([], [u(4)]).unwrap();
        assert!(c.contains(&Element::PermSet(moved)).unwrap());
        assert!(!c.contains(&Element::PermSet(PermissionSet::comb())).unwrap());
    }

    #[test]
    fn fuzzy_orbits() {
        let fin = Carrier::new(vec![Element::Fuzzy(0)], PermGroup::Finite);
        assert!(!fin.contains(&Element::Fuzzy(1)).unwrap());
        let sh = Carrier::new(vec![Element::Fuzzy(0)], PermGroup::Shift);
        let (_, pi) = sh.find_orbit(&Element::Fuzzy(3)).unwrap().unwrap();
        assert_eq!(pi.shift_power(), 3);
    }

    #[test]
    fn tuple_orbit_respects_equalities() {
        let c = Carrier::new(vec![Element::tuple([Element::Atom(d(0)), Element::Atom(d(0))])], PermGroup::Finite);
        assert!(c.contains(&Element::tuple([Element::Atom(d(4)), Element::Atom(d(4))])).unwrap());
        assert!(!c.contains(&Element::tuple([Element::Atom(d(4)), Element::Atom(d(5))])).unwrap());
    }
}
