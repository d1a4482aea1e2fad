//! Permission sets and support descriptors: infinite atom sets presented as
//! a fixed base perturbed by finitely many atoms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::atoms::{shift_window, Atom, AtomRegion, FinPerm, GenPerm, Zone};
use crate::error::{NomError, Result};

/// The infinite bases a descriptor can be built on. They are nested:
/// `Empty ⊆ HalfComb ⊆ Comb`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    Empty,
    /// `A◁`, the Down atoms of even index.
    HalfComb,
    /// `A<`, every Down atom.
    Comb,
}

impl Base {
    pub fn contains(self, a: &Atom) -> bool {
        match self {
            Base::Empty => false,
            Base::HalfComb => a.is_half(),
            Base::Comb => a.is_down(),
        }
    }
}

/// A set `(base ∖ minus) ∪ plus` with `minus ⊆ base` and `plus ∩ base = ∅`.
///
/// Construction normalizes, so structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportDescriptor {
    base: Base,
    minus: BTreeSet<Atom>,
    plus: BTreeSet<Atom>,
}

impl SupportDescriptor {
    pub fn empty() -> Self {
        Self::finite(BTreeSet::new())
    }

    pub fn finite(atoms: impl IntoIterator<Item = Atom>) -> Self {
        SupportDescriptor {
            base: Base::Empty,
            minus: BTreeSet::new(),
            plus: atoms.into_iter().collect(),
        }
    }

    pub fn singleton(a: Atom) -> Self {
        Self::finite([a])
    }

    pub fn comb() -> Self {
        Self::based(Base::Comb)
    }

    pub fn half_comb() -> Self {
        Self::based(Base::HalfComb)
    }

    pub fn based(base: Base) -> Self {
        SupportDescriptor {
            base,
            minus: BTreeSet::new(),
            plus: BTreeSet::new(),
        }
    }

    pub fn new(base: Base, minus: impl IntoIterator<Item = Atom>, plus: impl IntoIterator<Item = Atom>) -> Self {
        let minus: BTreeSet<Atom> = minus.into_iter().collect();
        let plus: BTreeSet<Atom> = plus.into_iter().collect();
        let cand: BTreeSet<Atom> = minus.union(&plus).copied().collect();
        Self::from_membership(base, cand, |a| {
            (base.contains(a) && !minus.contains(a)) || plus.contains(a)
        })
    }

    /// Normalizes a set that agrees with `base` outside `candidates`.
    fn from_membership(base: Base, candidates: BTreeSet<Atom>, mem: impl Fn(&Atom) -> bool) -> Self {
        let mut minus = BTreeSet::new();
        let mut plus = BTreeSet::new();
        for a in candidates {
            match (base.contains(&a), mem(&a)) {
                (true, false) => {
                    minus.insert(a);
                }
                (false, true) => {
                    plus.insert(a);
                }
                _ => {}
            }
        }
        SupportDescriptor { base, minus, plus }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn minus(&self) -> &BTreeSet<Atom> {
        &self.minus
    }

    pub fn plus(&self) -> &BTreeSet<Atom> {
        &self.plus
    }

    pub fn member(&self, a: &Atom) -> bool {
        (self.base.contains(a) && !self.minus.contains(a)) || self.plus.contains(a)
    }

    pub fn is_finite(&self) -> bool {
        self.base == Base::Empty
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.plus.is_empty()
    }

    /// The members, when finite.
    pub fn atoms(&self) -> Option<&BTreeSet<Atom>> {
        self.is_finite().then_some(&self.plus)
    }

    /// Atoms where the set differs from its base.
    pub fn perturbation(&self) -> BTreeSet<Atom> {
        self.minus.union(&self.plus).copied().collect()
    }

    fn all_candidates<'a>(ds: impl IntoIterator<Item = &'a SupportDescriptor>) -> BTreeSet<Atom> {
        ds.into_iter().flat_map(|d| d.perturbation()).collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        let base = self.base.max(other.base);
        let cand = Self::all_candidates([self, other]);
        Self::from_membership(base, cand, |a| self.member(a) || other.member(a))
    }

    pub fn union_all<'a>(ds: impl IntoIterator<Item = &'a SupportDescriptor>) -> Self {
        ds.into_iter().fold(Self::empty(), |acc, d| acc.union(d))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let base = self.base.min(other.base);
        let cand = Self::all_candidates([self, other]);
        Self::from_membership(base, cand, |a| self.member(a) && other.member(a))
    }

    /// `self ∖ other`. Fails when the difference of the bases is infinite
    /// and cofinite in no base (`A< ∖ A◁`).
    pub fn difference(&self, other: &Self) -> Result<Self> {
        let base = if self.base <= other.base {
            Base::Empty
        } else if other.base == Base::Empty {
            self.base
        } else {
            return Err(NomError::Unrepresentable(format!("{self} minus {other}")));
        };
        let cand = Self::all_candidates([self, other]);
        Ok(Self::from_membership(base, cand, |a| {
            self.member(a) && !other.member(a)
        }))
    }

    pub fn remove(&self, atoms: &BTreeSet<Atom>) -> Self {
        let mut cand = self.perturbation();
        cand.extend(atoms.iter().copied());
        Self::from_membership(self.base, cand, |a| self.member(a) && !atoms.contains(a))
    }

    pub fn add(&self, atoms: &BTreeSet<Atom>) -> Self {
        let mut cand = self.perturbation();
        cand.extend(atoms.iter().copied());
        Self::from_membership(self.base, cand, |a| self.member(a) || atoms.contains(a))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        match self.difference(other) {
            Ok(d) => d.is_empty(),
            Err(_) => false,
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// Pointwise image `π·self`.
    pub fn act(&self, pi: &GenPerm) -> Result<Self> {
        let k = pi.shift_power();
        let sigma = pi.finite_part();
        if k != 0 && self.base == Base::HalfComb {
            return Err(NomError::Unrepresentable(format!(
                "shift^{k} applied to a half-comb based set {self}"
            )));
        }
        if self.base == Base::Empty {
            return Ok(Self::finite(self.plus.iter().map(|a| pi.apply(*a))));
        }
        let mut cand: BTreeSet<Atom> = self.perturbation().iter().map(|a| pi.apply(*a)).collect();
        cand.extend(sigma.nontriv());
        cand.extend(shift_window(k));
        Ok(Self::from_membership(self.base, cand, |a| {
            self.member(&pi.apply_inverse(*a))
        }))
    }

    /// Image under a finite permutation; never fails.
    pub fn act_finite(&self, pi: &FinPerm) -> Self {
        self.act(&GenPerm::from(pi.clone()))
            .expect("finite permutations act on every base")
    }

    /// Whether the set lies inside `π·A<` for some finite `π`.
    pub fn within_some_comb(&self) -> bool {
        match self.base {
            Base::Empty | Base::HalfComb => true,
            Base::Comb => counts_fit(&self.plus, &self.minus),
        }
    }

    /// Whether the set lies inside `π·A◁` for some finite `π` (medium support).
    pub fn is_medium(&self) -> bool {
        match self.base {
            Base::Empty => true,
            Base::HalfComb => counts_fit(&self.plus, &self.minus),
            Base::Comb => false,
        }
    }

    /// The least atom of the given sort and zone outside `self`.
    pub fn fresh_atom(&self, sort: u32, zone: Zone) -> Result<Atom> {
        if zone == Zone::Down && self.base == Base::Comb {
            return self
                .minus
                .iter()
                .find(|a| a.sort == sort)
                .copied()
                .ok_or_else(|| {
                    NomError::NoFreshAtom(format!("every Down atom of sort {sort} is in {self}"))
                });
        }
        (0u64..)
            .map(|i| Atom::new(sort, zone, i))
            .find(|a| !self.member(a))
            .ok_or_else(|| NomError::NoFreshAtom(format!("{self}")))
    }

    /// The least `n` atoms of the given sort and zone outside `self`.
    pub fn fresh_atoms(&self, sort: u32, zone: Zone, n: usize) -> Result<Vec<Atom>> {
        let mut avoid = self.clone();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let a = avoid.fresh_atom(sort, zone)?;
            avoid = avoid.add(&[a].into());
            out.push(a);
        }
        Ok(out)
    }

    pub fn sorts(&self) -> BTreeSet<u32> {
        self.perturbation().iter().map(|a| a.sort).collect()
    }
}

fn count_by_sort(atoms: &BTreeSet<Atom>) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for a in atoms {
        *m.entry(a.sort).or_insert(0) += 1;
    }
    m
}

/// Per sort, `|extra| ≤ |room|`.
fn counts_fit(extra: &BTreeSet<Atom>, room: &BTreeSet<Atom>) -> bool {
    let room = count_by_sort(room);
    count_by_sort(extra)
        .iter()
        .all(|(s, n)| room.get(s).copied().unwrap_or(0) >= *n)
}

impl AtomRegion for SupportDescriptor {
    fn contains(&self, a: &Atom) -> bool {
        self.member(a)
    }

    fn finite_atoms(&self) -> Option<BTreeSet<Atom>> {
        self.atoms().cloned()
    }
}

fn fmt_set(f: &mut fmt::Formatter<'_>, atoms: &BTreeSet<Atom>) -> fmt::Result {
    write!(f, "{{")?;
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, "}}")
}

impl fmt::Display for SupportDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            Base::Empty => return fmt_set(f, &self.plus),
            Base::Comb => write!(f, "comb")?,
            Base::HalfComb => write!(f, "halfcomb")?,
        }
        if !self.minus.is_empty() {
            write!(f, " - ")?;
            fmt_set(f, &self.minus)?;
        }
        if !self.plus.is_empty() {
            write!(f, " + ")?;
            fmt_set(f, &self.plus)?;
        }
        Ok(())
    }
}

/// A permission set `(A< ∖ removed) ∪ added`, with `removed` Down atoms
/// and `added` Up atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PermissionSet {
    removed: BTreeSet<Atom>,
    added: BTreeSet<Atom>,
}

impl PermissionSet {
    /// `A<`.
    pub fn comb() -> Self {
        Self::default()
    }

    pub fn new(removed: impl IntoIterator<Item = Atom>, added: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let removed: BTreeSet<Atom> = removed.into_iter().collect();
        let added: BTreeSet<Atom> = added.into_iter().collect();
        if let Some(a) = removed.iter().find(|a| !a.is_down()) {
            return Err(NomError::Unrepresentable(format!("removed atom {a} is not in comb")));
        }
        if let Some(a) = added.iter().find(|a| a.is_down()) {
            return Err(NomError::Unrepresentable(format!("added atom {a} is already in comb")));
        }
        Ok(PermissionSet { removed, added })
    }

    pub fn removed(&self) -> &BTreeSet<Atom> {
        &self.removed
    }

    pub fn added(&self) -> &BTreeSet<Atom> {
        &self.added
    }

    pub fn member(&self, a: &Atom) -> bool {
        (a.is_down() && !self.removed.contains(a)) || self.added.contains(a)
    }

    /// Of the form `π·A<` for a finite `π`.
    pub fn is_strict(&self) -> bool {
        count_by_sort(&self.removed) == count_by_sort(&self.added)
    }

    /// A finite `π` with `π·A< = self`, pairing removed and added atoms of
    /// each sort in order.
    pub fn strict_witness(&self) -> Option<FinPerm> {
        if !self.is_strict() {
            return None;
        }
        let mut cycles = Vec::new();
        for s in count_by_sort(&self.removed).keys() {
            let r = self.removed.iter().filter(|a| a.sort == *s);
            let a = self.added.iter().filter(|a| a.sort == *s);
            for (x, y) in r.zip(a) {
                cycles.push(vec![*x, *y]);
            }
        }
        Some(FinPerm::from_cycles(&cycles).expect("pairs are disjoint"))
    }

    pub fn descriptor(&self) -> SupportDescriptor {
        SupportDescriptor::new(Base::Comb, self.removed.iter().copied(), self.added.iter().copied())
    }

    pub fn from_descriptor(d: &SupportDescriptor) -> Result<Self> {
        if d.base() != Base::Comb {
            return Err(NomError::Unrepresentable(format!("{d} is not a permission set")));
        }
        PermissionSet::new(d.minus().iter().copied(), d.plus().iter().copied())
    }

    pub fn act(&self, pi: &GenPerm) -> PermissionSet {
        let d = self.descriptor().act(pi).expect("comb-based sets admit every permutation");
        PermissionSet::from_descriptor(&d).expect("image of a comb-based set is comb-based")
    }
}

impl AtomRegion for PermissionSet {
    fn contains(&self, a: &Atom) -> bool {
        self.member(a)
    }

    fn finite_atoms(&self) -> Option<BTreeSet<Atom>> {
        None
    }
}

impl fmt::Display for PermissionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}
