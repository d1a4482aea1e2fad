use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{join_atoms, Atom, Zone};
use crate::error::{NomError, Result};

/// A finite, sort-preserving permutation of atoms.
///
/// Only the moved atoms are stored, so two `FinPerm`s are equal exactly when
/// they are equal as functions.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinPerm {
    map: BTreeMap<Atom, Atom>,
}

impl FinPerm {
    pub fn identity() -> FinPerm {
        FinPerm::default()
    }

    /// The transposition `(a b)`.
    pub fn swap(a: Atom, b: Atom) -> Result<FinPerm> {
        if a.sort != b.sort {
            return Err(NomError::CrossSortSwap(a.to_string(), b.to_string()));
        }
        if a == b {
            return Err(NomError::TrivialSwap(a.to_string()));
        }
        let mut map = BTreeMap::new();
        map.insert(a, b);
        map.insert(b, a);
        Ok(FinPerm { map })
    }

    /// Builds a permutation from disjoint cycles. Cycles of length one are
    /// accepted and ignored.
    pub fn from_cycles<C: AsRef<[Atom]>>(cycles: &[C]) -> Result<FinPerm> {
        let mut map = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for (i, &a) in cycle.iter().enumerate() {
                if !seen.insert(a) {
                    return Err(NomError::Unrepresentable(format!(
                        "atom {a} occurs twice in cycle notation"
                    )));
                }
                let b = cycle[(i + 1) % cycle.len()];
                if a.sort != b.sort {
                    return Err(NomError::CrossSortSwap(a.to_string(), b.to_string()));
                }
                if a != b {
                    map.insert(a, b);
                }
            }
        }
        Ok(FinPerm { map })
    }

    /// Builds a permutation from a finite map, which must be a sort-preserving
    /// bijection of its domain onto itself.
    pub fn from_map(pairs: impl IntoIterator<Item = (Atom, Atom)>) -> Result<FinPerm> {
        let mut map = BTreeMap::new();
        for (a, b) in pairs {
            if a.sort != b.sort {
                return Err(NomError::CrossSortSwap(a.to_string(), b.to_string()));
            }
            if map.insert(a, b).is_some() {
                return Err(NomError::Unrepresentable(format!("atom {a} mapped twice")));
            }
        }
        let dom: BTreeSet<_> = map.keys().copied().collect();
        let ran: BTreeSet<_> = map.values().copied().collect();
        if dom != ran {
            return Err(NomError::Unrepresentable(
                "map is not a permutation of its domain".into(),
            ));
        }
        map.retain(|a, b| a != b);
        Ok(FinPerm { map })
    }

    pub fn apply(&self, a: Atom) -> Atom {
        self.map.get(&a).copied().unwrap_or(a)
    }

    pub fn apply_inverse(&self, a: Atom) -> Atom {
        // cycles are short at desk scale; walk forward until we return
        let mut cur = a;
        loop {
            let next = self.apply(cur);
            if next == a {
                return cur;
            }
            cur = next;
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FinPerm) -> FinPerm {
        let mut map = BTreeMap::new();
        for a in self.map.keys().chain(other.map.keys()) {
            let b = self.apply(other.apply(*a));
            if b != *a {
                map.insert(*a, b);
            }
        }
        FinPerm { map }
    }

    pub fn inverse(&self) -> FinPerm {
        FinPerm {
            map: self.map.iter().map(|(a, b)| (*b, *a)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// `nontriv(π)`, the moved atoms.
    pub fn nontriv(&self) -> BTreeSet<Atom> {
        self.map.keys().copied().collect()
    }

    pub fn moves(&self, a: &Atom) -> bool {
        self.map.contains_key(a)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Atom, Atom)> + '_ {
        self.map.iter().map(|(a, b)| (*a, *b))
    }

    /// Canonical cycle form: every cycle starts at its least atom and cycles
    /// are sorted by leading atom.
    pub fn cycles(&self) -> Vec<Vec<Atom>> {
        let mut done = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.map.keys() {
            if done.contains(&start) {
                continue;
            }
            let mut cycle = vec![start];
            done.insert(start);
            let mut cur = self.apply(start);
            while cur != start {
                done.insert(cur);
                cycle.push(cur);
                cur = self.apply(cur);
            }
            out.push(cycle);
        }
        out
    }

    /// `δ^k ∘ self ∘ δ^-k`, which maps `δ^k(a)` to `δ^k(self(a))`.
    pub fn conjugate_by_shift(&self, k: i64) -> FinPerm {
        if k == 0 {
            return self.clone();
        }
        FinPerm {
            map: self
                .map
                .iter()
                .map(|(a, b)| (shift_apply(*a, k), shift_apply(*b, k)))
                .collect(),
        }
    }

    /// Renders the cycle form with a custom atom printer.
    pub fn render(&self, atom: impl Fn(&Atom) -> String) -> String {
        if self.is_identity() {
            return "id".into();
        }
        self.cycles()
            .iter()
            .map(|c| format!("({})", c.iter().map(&atom).collect::<Vec<_>>().join(" ")))
            .collect()
    }
}

impl fmt::Display for FinPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        for c in self.cycles() {
            write!(f, "({})", join_atoms(&c, " "))?;
        }
        Ok(())
    }
}

/// Position of a sort-0 atom on the chain moved by δ: `Down(n)` sits at `n`
/// and `Up(2m)` (m ≥ 1) at `-m`. Everything else is fixed by δ.
fn chain_position(a: Atom) -> Option<i64> {
    if a.sort != 0 {
        return None;
    }
    match a.zone {
        Zone::Down => Some(a.index as i64),
        Zone::Up if a.index >= 2 && a.index.is_multiple_of(2) => Some(-((a.index / 2) as i64)),
        Zone::Up => None,
    }
}

fn chain_atom(pos: i64) -> Atom {
    if pos >= 0 {
        Atom::down(0, pos as u64)
    } else {
        Atom::up(0, 2 * pos.unsigned_abs())
    }
}

/// `δ^k(a)`. δ sends `Down(n)` to `Down(n+1)`, `Up(2)` to `Down(0)`,
/// `Up(2m)` to `Up(2m-2)` for m ≥ 2, and fixes odd Up atoms, `Up(0)`, and
/// every atom of a sort other than 0.
pub fn shift_apply(a: Atom, k: i64) -> Atom {
    match chain_position(a) {
        Some(p) if k != 0 => chain_atom(p + k),
        _ => a,
    }
}

/// The chain atoms on which `δ^k ∘ A<` and `A<` disagree.
pub(crate) fn shift_window(k: i64) -> Vec<Atom> {
    let (lo, hi) = if k >= 0 { (0, k) } else { (k, 0) };
    (lo..hi).map(chain_atom).collect()
}

/// A permutation in the group generated by swappings and δ, in the normal
/// form `finite ∘ δ^shift`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenPerm {
    finite: FinPerm,
    shift: i64,
}

impl GenPerm {
    pub fn identity() -> GenPerm {
        GenPerm::default()
    }

    pub fn new(finite: FinPerm, shift: i64) -> GenPerm {
        GenPerm { finite, shift }
    }

    /// δ^k.
    pub fn shift(k: i64) -> GenPerm {
        GenPerm::new(FinPerm::identity(), k)
    }

    pub fn finite_part(&self) -> &FinPerm {
        &self.finite
    }

    pub fn shift_power(&self) -> i64 {
        self.shift
    }

    pub fn is_finite(&self) -> bool {
        self.shift == 0
    }

    pub fn as_finite(&self) -> Option<&FinPerm> {
        self.is_finite().then_some(&self.finite)
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.finite.is_identity()
    }

    pub fn apply(&self, a: Atom) -> Atom {
        self.finite.apply(shift_apply(a, self.shift))
    }

    pub fn apply_inverse(&self, a: Atom) -> Atom {
        shift_apply(self.finite.apply_inverse(a), -self.shift)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GenPerm) -> GenPerm {
        GenPerm {
            finite: self
                .finite
                .compose(&other.finite.conjugate_by_shift(self.shift)),
            shift: self.shift + other.shift,
        }
    }

    pub fn inverse(&self) -> GenPerm {
        GenPerm {
            finite: self.finite.inverse().conjugate_by_shift(-self.shift),
            shift: -self.shift,
        }
    }

    /// `nontriv(π)` when it is finite; `None` for any nonzero shift power,
    /// whose moved set is infinite.
    pub fn nontriv_finite(&self) -> Option<BTreeSet<Atom>> {
        self.is_finite().then(|| self.finite.nontriv())
    }

    /// Atoms outside which `self` agrees with `δ^shift`.
    pub(crate) fn finite_support_hint(&self) -> BTreeSet<Atom> {
        self.finite
            .nontriv()
            .into_iter()
            .map(|a| shift_apply(a, -self.shift))
            .collect()
    }

    pub fn render(&self, atom: impl Fn(&Atom) -> String) -> String {
        if self.shift == 0 {
            return self.finite.render(atom);
        }
        // printed as δ^k ∘ ρ with ρ = δ^-k ∘ finite ∘ δ^k
        let rho = self.finite.conjugate_by_shift(-self.shift);
        if rho.is_identity() {
            format!("shift^{}", self.shift)
        } else {
            format!("shift^{} * {}", self.shift, rho.render(atom))
        }
    }
}

impl From<FinPerm> for GenPerm {
    fn from(finite: FinPerm) -> GenPerm {
        GenPerm { finite, shift: 0 }
    }
}

impl fmt::Display for GenPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|a| a.to_string()))
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

    #[test]
    fn swap_moves_exactly_two_atoms() {
        let s = FinPerm::swap(d(0), d(1)).unwrap();
        assert_eq!(s.apply(d(0)), d(1));
        assert_eq!(s.apply(d(1)), d(0));
        assert_eq!(s.apply(d(2)), d(2));
        assert_eq!(s.cycles(), vec![vec![d(0), d(1)]]);
    }

    #[test]
    fn swap_across_zones_is_legal() {
        let s = FinPerm::swap(d(0), u(3)).unwrap();
        assert_eq!(s.apply(d(0)), u(3));
    }

    #[test]
    fn swap_errors() {
        assert!(matches!(
            FinPerm::swap(d(0), Atom::down(1, 0)),
            Err(NomError::CrossSortSwap(..))
        ));
        assert!(matches!(FinPerm::swap(d(0), d(0)), Err(NomError::TrivialSwap(_))));
    }

    #[test]
    fn shift_matches_arrow_diagram() {
        let delta = GenPerm::shift(1);
        assert_eq!(delta.apply(d(0)), d(1));
        assert_eq!(delta.apply(u(2)), d(0));
        assert_eq!(delta.apply(u(4)), u(2));
        assert_eq!(delta.apply(u(1)), u(1));
        assert_eq!(delta.apply(u(0)), u(0));
        assert_eq!(delta.apply(Atom::down(1, 0)), Atom::down(1, 0));
        assert_eq!(shift_apply(d(3), -5), u(4));
    }

    #[test]
    fn compose_shift_with_inverse_is_identity() {
        let c = GenPerm::shift(1).compose(&GenPerm::shift(-1));
        assert!(c.is_identity());
    }

    #[test]
    fn compose_swap_past_shift_pointwise() {
        // (a b) ∘ δ  versus  δ ∘ (δ⁻¹a δ⁻¹b), brute force on a probe set
        let a = d(3);
        let b = u(5);
        let left = GenPerm::from(FinPerm::swap(a, b).unwrap()).compose(&GenPerm::shift(1));
        let conj = FinPerm::swap(shift_apply(a, -1), shift_apply(b, -1)).unwrap();
        let right = GenPerm::shift(1).compose(&GenPerm::from(conj));
        let probe: Vec<Atom> = (0..10).map(d).chain((0..10).map(u)).collect();
        assert_eq!(probe.len(), 20);
        for x in probe {
            assert_eq!(left.apply(x), right.apply(x), "at {x}");
            let y = shift_apply(x, 1);
            let expected = if y == a {
                b
            } else if y == b {
                a
            } else {
                y
            };
            assert_eq!(left.apply(x), expected);
        }
    }

    #[test]
    fn invert_cycle() {
        let c = GenPerm::from(FinPerm::from_cycles(&[vec![d(0), d(1), d(2)]]).unwrap());
        let inv = c.inverse();
        assert_eq!(
            inv.finite_part().cycles(),
            vec![vec![d(0), d(2), d(1)]]
        );
        assert!(GenPerm::identity().inverse().is_identity());
    }

    #[test]
    fn invert_shifted_fixes_probe() {
        let p = GenPerm::new(FinPerm::from_cycles(&[vec![d(1), u(3), d(4)]]).unwrap(), 3);
        let q = p.inverse().compose(&p);
        assert!(q.is_identity());
        for i in 0..12 {
            assert_eq!(p.apply_inverse(p.apply(d(i))), d(i));
            assert_eq!(p.apply_inverse(p.apply(u(i))), u(i));
        }
    }

    #[test]
    fn nontriv_finite_cases() {
        let s = GenPerm::from(FinPerm::swap(d(0), d(1)).unwrap());
        assert_eq!(s.nontriv_finite(), Some([d(0), d(1)].into()));
        assert_eq!(GenPerm::identity().nontriv_finite(), Some(BTreeSet::new()));
        assert_eq!(GenPerm::shift(1).nontriv_finite(), None);
    }

    #[test]
    fn display_round_shapes() {
        let p = FinPerm::from_cycles(&[vec![d(2), d(0)], vec![u(1), d(5)]]).unwrap();
        assert_eq!(p.to_string(), "(d0.0 d0.2)(d0.5 u0.1)");
        assert_eq!(GenPerm::shift(-2).to_string(), "shift^-2");
    }
}
