use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::atoms::{Atom, FinPerm, GenPerm, Zone};
use crate::error::{NomError, Result};
use crate::permission::{Base, SupportDescriptor};

/// Which atoms the base enumeration `l_*` lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ListMode {
    /// Every Down atom.
    Full,
    /// The half-comb: Down atoms of even index.
    Half,
}

impl ListMode {
    pub fn base(self) -> Base {
        match self {
            ListMode::Full => Base::Comb,
            ListMode::Half => Base::HalfComb,
        }
    }
}

impl fmt::Display for ListMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ListMode::Full => "full",
            ListMode::Half => "half",
        })
    }
}

/// Cantor pairing: position `p` holds slot `(sort, k)`.
fn unpair(p: u64) -> (u32, u64) {
    let w = ((((8 * p as u128 + 1) as f64).sqrt() as u64).saturating_sub(1)) / 2;
    // correct the float estimate
    let mut w = w;
    while (w + 1) * (w + 2) / 2 <= p {
        w += 1;
    }
    while w * (w + 1) / 2 > p {
        w -= 1;
    }
    let t = w * (w + 1) / 2;
    let y = p - t;
    (y as u32, w - y)
}

fn pair(sort: u32, k: u64) -> u64 {
    let s = sort as u64;
    (s + k) * (s + k + 1) / 2 + s
}

/// An infinite list of distinct atoms: the base enumeration with finitely
/// many positions overwritten.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomList {
    mode: ListMode,
    perturbation: BTreeMap<u64, Atom>,
}

impl AtomList {
    /// The base enumeration `l_*`.
    pub fn base(mode: ListMode) -> AtomList {
        AtomList {
            mode,
            perturbation: BTreeMap::new(),
        }
    }

    /// Builds a list from position overrides, rejecting anything that is not
    /// a sort-preserving injective relisting.
    pub fn with_overrides(mode: ListMode, overrides: impl IntoIterator<Item = (u64, Atom)>) -> Result<AtomList> {
        let mut perturbation = BTreeMap::new();
        for (p, a) in overrides {
            let b = base_at(mode, p);
            if a.sort != b.sort {
                return Err(NomError::InvalidList(format!(
                    "position {p} holds sort {} but {a} has sort {}",
                    b.sort, a.sort
                )));
            }
            if perturbation.insert(p, a).is_some() {
                return Err(NomError::InvalidList(format!("position {p} overridden twice")));
            }
        }
        perturbation.retain(|p, a| base_at(mode, *p) != *a);
        let mut seen = BTreeSet::new();
        for (p, a) in &perturbation {
            if !seen.insert(*a) {
                return Err(NomError::InvalidList(format!("{a} listed twice")));
            }
            if let Some(q) = base_position(mode, a) {
                if !perturbation.contains_key(&q) {
                    return Err(NomError::InvalidList(format!(
                        "{a} at position {p} also sits at its base position {q}"
                    )));
                }
            }
        }
        Ok(AtomList { mode, perturbation })
    }

    /// Builds a list from substitutions `base atom -> new atom`.
    pub fn with_substitutions(mode: ListMode, subs: impl IntoIterator<Item = (Atom, Atom)>) -> Result<AtomList> {
        let mut overrides = Vec::new();
        for (from, to) in subs {
            let p = base_position(mode, &from).ok_or_else(|| {
                NomError::InvalidList(format!("{from} is not listed by the {mode} base list"))
            })?;
            overrides.push((p, to));
        }
        AtomList::with_overrides(mode, overrides)
    }

    pub fn mode(&self) -> ListMode {
        self.mode
    }

    pub fn is_base(&self) -> bool {
        self.perturbation.is_empty()
    }

    pub fn perturbation(&self) -> &BTreeMap<u64, Atom> {
        &self.perturbation
    }

    /// Substitutions `(base atom, listed atom)` at perturbed positions.
    pub fn substitutions(&self) -> Vec<(Atom, Atom)> {
        self.perturbation
            .iter()
            .map(|(p, a)| (base_at(self.mode, *p), *a))
            .collect()
    }

    pub fn at(&self, p: u64) -> Atom {
        self.perturbation
            .get(&p)
            .copied()
            .unwrap_or_else(|| base_at(self.mode, p))
    }

    pub fn position_of(&self, a: &Atom) -> Option<u64> {
        if let Some((p, _)) = self.perturbation.iter().find(|(_, b)| *b == a) {
            return Some(*p);
        }
        base_position(self.mode, a).filter(|q| !self.perturbation.contains_key(q))
    }

    /// The first `n` atoms of the list.
    pub fn prefix(&self, n: u64) -> Vec<Atom> {
        (0..n).map(|p| self.at(p)).collect()
    }

    /// The set of listed atoms.
    pub fn support(&self) -> SupportDescriptor {
        let minus = self.perturbation.keys().map(|p| base_at(self.mode, *p));
        SupportDescriptor::new(self.mode.base(), minus, self.perturbation.values().copied())
    }

    /// Atoms occurring in the finite description.
    pub fn mentioned_atoms(&self) -> BTreeSet<Atom> {
        self.substitutions().into_iter().flat_map(|(a, b)| [a, b]).collect()
    }

    pub fn act_finite(&self, pi: &FinPerm) -> AtomList {
        let mut positions: BTreeSet<u64> = self.perturbation.keys().copied().collect();
        for a in pi.nontriv() {
            if let Some(p) = self.position_of(&a) {
                positions.insert(p);
            }
        }
        let overrides = positions.into_iter().map(|p| (p, pi.apply(self.at(p))));
        AtomList::with_overrides(self.mode, overrides).expect("a permutation of a list is a list")
    }

    pub fn act(&self, pi: &GenPerm) -> Result<AtomList> {
        match pi.as_finite() {
            Some(f) => Ok(self.act_finite(f)),
            None => Err(NomError::Unrepresentable(format!(
                "shift^{} applied to an infinite list",
                pi.shift_power()
            ))),
        }
    }

    /// A finite permutation carrying `self` to `other`, moving only atoms
    /// of the two lists at positions where they differ.
    pub fn carrying_perm(&self, other: &AtomList) -> Result<FinPerm> {
        if self.mode != other.mode {
            return Err(NomError::InvalidList(format!(
                "cannot carry a {} list to a {} list",
                self.mode, other.mode
            )));
        }
        let positions: BTreeSet<u64> = self
            .perturbation
            .keys()
            .chain(other.perturbation.keys())
            .copied()
            .collect();
        let mut map = BTreeMap::new();
        for p in positions {
            let (a, b) = (self.at(p), other.at(p));
            if a != b {
                map.insert(a, b);
            }
        }
        let dom: BTreeSet<Atom> = map.keys().copied().collect();
        let ran: BTreeSet<Atom> = map.values().copied().collect();
        let mut back: BTreeMap<u32, Vec<Atom>> = BTreeMap::new();
        for a in dom.difference(&ran) {
            back.entry(a.sort).or_default().push(*a);
        }
        for a in ran.difference(&dom) {
            let target = back
                .get_mut(&a.sort)
                .and_then(|v| v.pop())
                .expect("sort-preserving injection has balanced ends");
            map.insert(*a, target);
        }
        FinPerm::from_map(map)
    }

    /// A list of the given mode whose atoms avoid `avoid`: each base atom in
    /// `avoid` is replaced by the least unused Up atom of its sort.
    pub fn fresh(mode: ListMode, avoid: &SupportDescriptor) -> Result<AtomList> {
        let Some(atoms) = avoid.atoms() else {
            return Err(NomError::NoFreshAtom(format!(
                "no list avoids the infinite set {avoid}"
            )));
        };
        let mut taken = atoms.clone();
        let mut overrides = Vec::new();
        for a in atoms {
            if let Some(p) = base_position(mode, a) {
                let fresh = (0u64..)
                    .map(|i| Atom::new(a.sort, Zone::Up, i))
                    .find(|b| !taken.contains(b))
                    .expect("Up atoms are unbounded");
                taken.insert(fresh);
                overrides.push((p, fresh));
            }
        }
        AtomList::with_overrides(mode, overrides)
    }
}

/// The atom at position `p` of the base enumeration.
pub fn base_at(mode: ListMode, p: u64) -> Atom {
    let (sort, k) = unpair(p);
    match mode {
        ListMode::Full => Atom::down(sort, k),
        ListMode::Half => Atom::down(sort, 2 * k),
    }
}

/// Position of `a` in the base enumeration, if listed there.
pub fn base_position(mode: ListMode, a: &Atom) -> Option<u64> {
    if !a.is_down() {
        return None;
    }
    match mode {
        ListMode::Full => Some(pair(a.sort, a.index)),
        ListMode::Half => a.index.is_multiple_of(2).then(|| pair(a.sort, a.index / 2)),
    }
}

impl fmt::Display for AtomList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "list {}", self.mode)?;
        let subs = self.substitutions();
        if !subs.is_empty() {
            let parts: Vec<String> = subs.iter().map(|(a, b)| format!("{a}->{b}")).collect();
            write!(f, " / {}", parts.join(", "))?;
        }
        Ok(())
    }
}
