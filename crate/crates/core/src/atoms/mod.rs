//! Sorted atoms, finite and shift-extended permutations, and restriction `π/S`.
//!
//! Atoms come in two zones per name sort: the comb `A<` (zone [`Zone::Down`])
//! and the reservoir `A>` (zone [`Zone::Up`]). Both are countably infinite
//! for every sort.

mod perm;
mod restrict;

use std::fmt;

pub use perm::{shift_apply, FinPerm, GenPerm};
pub(crate) use perm::shift_window;
pub use restrict::{agree_on, leq_s, pi_slash, AtomRegion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Zone {
    Down,
    Up,
}

/// An atom `d<sort>.<index>` or `u<sort>.<index>`.
///
/// The derived order is lexicographic on (sort, zone, index) with
/// `Down < Up`; canonical forms everywhere rely on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub sort: u32,
    pub zone: Zone,
    pub index: u64,
}

impl Atom {
    pub const fn new(sort: u32, zone: Zone, index: u64) -> Atom {
        Atom { sort, zone, index }
    }

    pub const fn down(sort: u32, index: u64) -> Atom {
        Atom::new(sort, Zone::Down, index)
    }

    pub const fn up(sort: u32, index: u64) -> Atom {
        Atom::new(sort, Zone::Up, index)
    }

    /// Member of the comb `A<`.
    pub fn is_down(&self) -> bool {
        self.zone == Zone::Down
    }

    /// Member of the half-comb `A◁` (even-index Down atoms).
    pub fn is_half(&self) -> bool {
        self.zone == Zone::Down && self.index.is_multiple_of(2)
    }

    /// Short letter name used by the CLI: `a` is `d0.0`, `b` is `d0.1`, ...
    pub fn letter(&self) -> Option<char> {
        if self.sort == 0 && self.zone == Zone::Down && self.index < 26 {
            Some((b'a' + self.index as u8) as char)
        } else {
            None
        }
    }

    pub fn from_letter(c: char) -> Option<Atom> {
        c.is_ascii_lowercase()
            .then(|| Atom::down(0, (c as u8 - b'a') as u64))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = match self.zone {
            Zone::Down => 'd',
            Zone::Up => 'u',
        };
        write!(f, "{}{}.{}", z, self.sort, self.index)
    }
}

/// Formats a sequence of atoms separated by `sep`.
pub(crate) fn join_atoms<'a>(atoms: impl IntoIterator<Item = &'a Atom>, sep: &str) -> String {
    atoms
        .into_iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_order_is_sort_zone_index() {
        let mut v = vec![Atom::up(0, 0), Atom::down(1, 0), Atom::down(0, 5), Atom::down(0, 1)];
        v.sort();
        assert_eq!(
            v,
            vec![Atom::down(0, 1), Atom::down(0, 5), Atom::up(0, 0), Atom::down(1, 0)]
        );
    }

    #[test]
    fn display_and_letters() {
        assert_eq!(Atom::down(0, 3).to_string(), "d0.3");
        assert_eq!(Atom::up(2, 1).to_string(), "u2.1");
        assert_eq!(Atom::from_letter('c'), Some(Atom::down(0, 2)));
        assert_eq!(Atom::down(0, 2).letter(), Some('c'));
        assert_eq!(Atom::up(0, 2).letter(), None);
    }
}
