use std::collections::BTreeSet;

use super::{Atom, FinPerm, GenPerm};
use crate::error::{NomError, Result};

/// A set of atoms with decidable membership.
pub trait AtomRegion {
    fn contains(&self, a: &Atom) -> bool;

    /// All members, when there are finitely many.
    fn finite_atoms(&self) -> Option<BTreeSet<Atom>>;
}

impl AtomRegion for BTreeSet<Atom> {
    fn contains(&self, a: &Atom) -> bool {
        BTreeSet::contains(self, a)
    }

    fn finite_atoms(&self) -> Option<BTreeSet<Atom>> {
        Some(self.clone())
    }
}

impl<R: AtomRegion + ?Sized> AtomRegion for &R {
    fn contains(&self, a: &Atom) -> bool {
        (**self).contains(a)
    }

    fn finite_atoms(&self) -> Option<BTreeSet<Atom>> {
        (**self).finite_atoms()
    }
}

/// `π/S`: the least permutation beneath `π` that agrees with `π` and `π⁻¹`
/// on `S`.
///
/// Each cycle is handled on its own. Runs of atoms outside `S` shrink to
/// their first and last atom, cycles meeting no atom of `S` vanish, and a
/// cycle is then cut at every remaining two-atom run between distinct atoms
/// of `S`, provided there are at least two such runs.
pub fn pi_slash<S: AtomRegion + ?Sized>(pi: &FinPerm, s: &S) -> FinPerm {
    let mut pieces: Vec<Vec<Atom>> = Vec::new();
    for cycle in pi.cycles() {
        let marks: Vec<usize> = (0..cycle.len()).filter(|&i| s.contains(&cycle[i])).collect();
        if marks.is_empty() {
            continue;
        }
        let n = cycle.len();
        let mut flat = Vec::new();
        let mut cut_starts = Vec::new();
        for (j, &m) in marks.iter().enumerate() {
            let next = marks[(j + 1) % marks.len()];
            flat.push(cycle[m]);
            let gap_len = (next + n - m - 1) % n;
            let gap: Vec<Atom> = (1..=gap_len).map(|t| cycle[(m + t) % n]).collect();
            match gap.len() {
                0 | 1 => flat.extend(gap),
                _ => {
                    flat.push(gap[0]);
                    if marks.len() > 1 {
                        cut_starts.push(flat.len());
                    }
                    flat.push(gap[gap.len() - 1]);
                }
            }
        }
        if cut_starts.len() < 2 {
            pieces.push(flat);
            continue;
        }
        for (j, &start) in cut_starts.iter().enumerate() {
            let end = cut_starts[(j + 1) % cut_starts.len()];
            let len = (end + flat.len() - start) % flat.len();
            pieces.push((0..len).map(|t| flat[(start + t) % flat.len()]).collect());
        }
    }
    FinPerm::from_cycles(&pieces).expect("pieces of disjoint cycles are disjoint")
}

/// `π' ≤_S π`: the two permutations agree on `S` in both directions and
/// every nontrivial cycle of `π'` lies inside a cycle of `π`.
pub fn leq_s<S: AtomRegion + ?Sized>(pi_prime: &FinPerm, pi: &FinPerm, s: &S) -> bool {
    let moved: BTreeSet<Atom> = pi.nontriv().union(&pi_prime.nontriv()).copied().collect();
    let inv = pi.inverse();
    let inv_prime = pi_prime.inverse();
    for a in moved.iter().filter(|a| s.contains(a)) {
        if pi_prime.apply(*a) != pi.apply(*a) || inv_prime.apply(*a) != inv.apply(*a) {
            return false;
        }
    }
    let big: Vec<BTreeSet<Atom>> = pi
        .cycles()
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    pi_prime.cycles().iter().all(|c| {
        big.iter().any(|b| c.iter().all(|a| b.contains(a)))
    })
}

/// Whether `π(a) = π'(a)` for every `a ∈ A`.
///
/// Decided pointwise for finite `A`; for infinite `A` the two shift powers
/// must match, since the permutations then differ on finitely many atoms.
pub fn agree_on<A: AtomRegion + ?Sized>(pi: &GenPerm, pi_prime: &GenPerm, region: &A) -> Result<bool> {
    if let Some(atoms) = region.finite_atoms() {
        return Ok(atoms.iter().all(|a| pi.apply(*a) == pi_prime.apply(*a)));
    }
    if pi.shift_power() != pi_prime.shift_power() {
        return Err(NomError::UndecidableAgreement(
            pi.shift_power(),
            pi_prime.shift_power(),
        ));
    }
    let mut candidates = pi.finite_support_hint();
    candidates.extend(pi_prime.finite_support_hint());
    Ok(candidates
        .iter()
        .filter(|a| region.contains(a))
        .all(|a| pi.apply(*a) == pi_prime.apply(*a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(s: &str) -> Vec<Atom> {
        s.chars().map(|c| Atom::from_letter(c).unwrap()).collect()
    }

    fn perm(cycles: &[&str]) -> FinPerm {
        let cs: Vec<Vec<Atom>> = cycles.iter().map(|c| letters(c)).collect();
        FinPerm::from_cycles(&cs).unwrap()
    }

    fn set(s: &str) -> BTreeSet<Atom> {
        letters(s).into_iter().collect()
    }

    #[test]
    fn worked_values() {
        let p = perm(&["abcde", "fg"]);
        assert_eq!(pi_slash(&p, &set("a")), perm(&["abe"]));
        assert_eq!(pi_slash(&p, &set("ab")), perm(&["abce"]));
        assert_eq!(pi_slash(&p, &set("ac")), perm(&["abcde"]));
        assert_eq!(pi_slash(&p, &set("af")), perm(&["abe", "fg"]));
        let q = perm(&["abcdef"]);
        assert_eq!(pi_slash(&q, &set("be")), perm(&["abc", "def"]));
        assert_eq!(pi_slash(&q, &set("b")), perm(&["abc"]));
        assert_eq!(pi_slash(&q, &set("bed")), perm(&["abcdef"]));
        assert_eq!(pi_slash(&q, &set("ad")), perm(&["abf", "cde"]));
    }

    #[test]
    fn disjoint_region_gives_identity() {
        assert!(pi_slash(&perm(&["abc"]), &set("xyz")).is_identity());
        assert!(pi_slash(&FinPerm::identity(), &set("a")).is_identity());
    }

    #[test]
    fn leq_examples() {
        let p = perm(&["abcde", "fg"]);
        assert!(leq_s(&perm(&["abe"]), &p, &set("a")));
        assert!(leq_s(&p, &p, &set("ac")));
        let e = BTreeSet::new();
        assert!(leq_s(&perm(&["acb"]), &perm(&["abc"]), &e));
        assert!(leq_s(&perm(&["abc"]), &perm(&["acb"]), &e));
    }

    #[test]
    fn agree_on_finite() {
        let ab = GenPerm::from(perm(&["ab"]));
        assert!(!agree_on(&ab, &GenPerm::identity(), &set("a")).unwrap());
        let q = perm(&["abcdef"]);
        let r = GenPerm::from(pi_slash(&q, &set("b")));
        assert!(agree_on(&GenPerm::from(q), &r, &set("b")).unwrap());
    }
}
