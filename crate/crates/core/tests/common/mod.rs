#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nomkit::atoms::{Atom, FinPerm, GenPerm};
use nomkit::permission::{Base, PermissionSet, SupportDescriptor};
use nomkit::pnl::{PnlModel, Prop};
use nomkit::semantics::Valuation;
use nomkit::syntax::parse_document;
use nomkit::terms::Term;
use nomkit::universe::{listabs, AtomList, Element, ListMode};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seed() -> u64 {
    std::env::var("NOMKIT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x6e6f_6d6b)
}

/// A generator seeded by `NOMKIT_SEED` and a per-test label.
pub fn rng(label: &str) -> ChaCha8Rng {
    let h = label
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed() ^ h)
}

pub fn d(i: u64) -> Atom {
    Atom::down(0, i)
}

pub fn u(i: u64) -> Atom {
    Atom::up(0, i)
}

pub fn letters(s: &str) -> Vec<Atom> {
    s.chars().map(|c| Atom::from_letter(c).unwrap()).collect()
}

pub fn set(s: &str) -> BTreeSet<Atom> {
    letters(s).into_iter().collect()
}

/// Sort-0 atoms that random data draws from.
pub fn pool() -> Vec<Atom> {
    (0..8).map(d).chain((0..4).map(u)).collect()
}

pub fn random_perm(rng: &mut ChaCha8Rng, atoms: &[Atom]) -> FinPerm {
    let mut img = atoms.to_vec();
    img.shuffle(rng);
    FinPerm::from_map(atoms.iter().copied().zip(img).filter(|(a, b)| a != b)).unwrap()
}

/// A permutation moving a few atoms of `atoms`.
pub fn sparse_perm(rng: &mut ChaCha8Rng, atoms: &[Atom]) -> FinPerm {
    let n = rng.gen_range(0..=atoms.len().min(4));
    let chosen: Vec<Atom> = atoms.choose_multiple(rng, n).copied().collect();
    random_perm(rng, &chosen)
}

pub fn all_perms(atoms: &[Atom]) -> Vec<FinPerm> {
    fn go(rest: &mut Vec<Atom>, acc: &mut Vec<Atom>, atoms: &[Atom], out: &mut Vec<FinPerm>) {
        if rest.is_empty() {
            let pairs = atoms.iter().copied().zip(acc.iter().copied()).filter(|(a, b)| a != b);
            out.push(FinPerm::from_map(pairs).unwrap());
            return;
        }
        for i in 0..rest.len() {
            let a = rest.remove(i);
            acc.push(a);
            go(rest, acc, atoms, out);
            acc.pop();
            rest.insert(i, a);
        }
    }
    let mut out = Vec::new();
    go(&mut atoms.to_vec(), &mut Vec::new(), atoms, &mut out);
    out
}

/// Cycles of length at least two, found by following `apply`.
pub fn orbits(p: &FinPerm, atoms: &[Atom]) -> Vec<Vec<Atom>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &a in atoms {
        if seen.contains(&a) || p.apply(a) == a {
            continue;
        }
        let mut c = vec![a];
        seen.insert(a);
        let mut b = p.apply(a);
        while b != a {
            seen.insert(b);
            c.push(b);
            b = p.apply(b);
        }
        out.push(c);
    }
    out
}

/// `π' ≤_S π`, straight from the three clauses.
pub fn oracle_leq(pp: &FinPerm, p: &FinPerm, s: &BTreeSet<Atom>, atoms: &[Atom]) -> bool {
    let (ppi, pi) = (pp.inverse(), p.inverse());
    if s.iter().any(|&a| pp.apply(a) != p.apply(a) || ppi.apply(a) != pi.apply(a)) {
        return false;
    }
    let big: Vec<BTreeSet<Atom>> = orbits(p, atoms).into_iter().map(|c| c.into_iter().collect()).collect();
    orbits(pp, atoms)
        .iter()
        .all(|c| big.iter().any(|b| c.iter().all(|a| b.contains(a))))
}

/// The `≤_S`-least permutations below `p` among all permutations of `atoms`.
pub fn brute_least(p: &FinPerm, s: &BTreeSet<Atom>, atoms: &[Atom], perms: &[FinPerm]) -> Vec<FinPerm> {
    let below: Vec<&FinPerm> = perms.iter().filter(|q| oracle_leq(q, p, s, atoms)).collect();
    below
        .iter()
        .filter(|q| below.iter().all(|r| oracle_leq(q, r, s, atoms)))
        .map(|q| (*q).clone())
        .collect()
}

/// Rewrites the cycle form of `p` by randomly chosen steps until none
/// applies: drop an atom outside `s` whose neighbours are outside `s`, or
/// cut a cycle at two places where two atoms outside `s` sit between
/// atoms of `s`, and rejoin the two arcs as separate cycles.
pub fn rewrite_normal_form(p: &FinPerm, s: &BTreeSet<Atom>, atoms: &[Atom], rng: &mut ChaCha8Rng) -> FinPerm {
    enum Step {
        Drop(usize, usize),
        Split(usize, usize, usize),
    }
    let mut cycles = orbits(p, atoms);
    loop {
        let mut steps = Vec::new();
        for (ci, c) in cycles.iter().enumerate() {
            let n = c.len();
            for j in 0..n {
                let (prev, next) = (c[(j + n - 1) % n], c[(j + 1) % n]);
                if !s.contains(&c[j]) && !s.contains(&prev) && !s.contains(&next) {
                    steps.push(Step::Drop(ci, j));
                }
            }
            let cuts: Vec<usize> = (0..n)
                .filter(|&k| {
                    n >= 4
                        && s.contains(&c[k])
                        && !s.contains(&c[(k + 1) % n])
                        && !s.contains(&c[(k + 2) % n])
                        && s.contains(&c[(k + 3) % n])
                })
                .collect();
            for (i, &k1) in cuts.iter().enumerate() {
                for &k2 in &cuts[i + 1..] {
                    steps.push(Step::Split(ci, k1, k2));
                }
            }
        }
        let Some(step) = steps.choose(rng) else { break };
        match *step {
            Step::Drop(ci, j) => {
                cycles[ci].remove(j);
            }
            Step::Split(ci, k1, k2) => {
                let c = cycles.remove(ci);
                let n = c.len();
                let arc = |from: usize, to: usize| {
                    let mut v = Vec::new();
                    let mut i = from % n;
                    loop {
                        v.push(c[i]);
                        if i == to % n {
                            break;
                        }
                        i = (i + 1) % n;
                    }
                    v
                };
                cycles.push(arc(k1 + 2, k2 + 1));
                cycles.push(arc(k2 + 2, k1 + 1));
            }
        }
        cycles.retain(|c| c.len() > 1);
    }
    FinPerm::from_cycles(&cycles).unwrap()
}

pub fn random_subset(rng: &mut ChaCha8Rng, atoms: &[Atom], max: usize) -> BTreeSet<Atom> {
    let n = rng.gen_range(0..=max.min(atoms.len()));
    atoms.choose_multiple(rng, n).copied().collect()
}

pub fn random_list(rng: &mut ChaCha8Rng) -> AtomList {
    let mode = if rng.gen_bool(0.5) { ListMode::Full } else { ListMode::Half };
    let base: Vec<Atom> = (0..8).map(d).filter(|a| mode == ListMode::Full || a.index % 2 == 0).collect();
    let mut fresh: Vec<Atom> = (0..4).map(u).collect();
    if mode == ListMode::Half {
        fresh.extend([d(1), d(3), d(5)]);
    }
    fresh.shuffle(rng);
    let n = rng.gen_range(0..=2);
    let old: Vec<Atom> = base.choose_multiple(rng, n).copied().collect();
    AtomList::with_substitutions(mode, old.into_iter().zip(fresh)).unwrap()
}

pub fn random_descriptor(rng: &mut ChaCha8Rng) -> SupportDescriptor {
    let downs: Vec<Atom> = (0..8).map(d).collect();
    let ups: Vec<Atom> = (0..4).map(u).collect();
    match rng.gen_range(0..4) {
        0 | 1 => SupportDescriptor::finite(random_subset(rng, &pool(), 3)),
        2 => SupportDescriptor::new(Base::Comb, random_subset(rng, &downs, 2), random_subset(rng, &ups, 2)),
        _ => SupportDescriptor::new(Base::HalfComb, random_subset(rng, &downs, 2), random_subset(rng, &pool(), 2)),
    }
}

pub fn random_element(rng: &mut ChaCha8Rng, depth: u32) -> Element {
    let atoms = pool();
    let pick = if depth == 0 { rng.gen_range(0..5) } else { rng.gen_range(0..9) };
    match pick {
        0 => Element::Atom(*atoms.choose(rng).unwrap()),
        1 => Element::List(random_list(rng)),
        2 => {
            let removed = random_subset(rng, &atoms[..8], 2);
            let added = random_subset(rng, &atoms[8..], 2);
            Element::PermSet(PermissionSet::new(removed, added).unwrap())
        }
        3 => Element::Unit("t".into(), random_descriptor(rng)),
        4 => Element::Fuzzy(rng.gen_range(-3..=3)),
        5 | 6 => {
            let n = rng.gen_range(0..=3);
            Element::Tuple((0..n).map(|_| random_element(rng, depth - 1)).collect())
        }
        7 => Element::abs(*atoms.choose(rng).unwrap(), random_element(rng, depth - 1)),
        _ => {
            for _ in 0..8 {
                let l = random_list(rng);
                if let Ok(x) = listabs(&l, random_element(rng, depth - 1)) {
                    return x;
                }
            }
            Element::Tuple(vec![])
        }
    }
}

/// A strict-mode model file with randomly chosen carrier generators and
/// constant values, all with supports inside some permuted comb.
pub fn strict_model_source(rng: &mut ChaCha8Rng) -> String {
    let menu = [
        "list full",
        "list full / d0.1->u0.0",
        "pset comb - {d0.0}",
        "unit s supp={d0.0, d0.2}",
        "unit s supp=comb - {d0.3}",
        "unit s supp=halfcomb + {d0.1}",
        "[d0.0]unit s supp={d0.0, d0.1}",
        "(atm d0.0, atm d0.1)",
    ];
    let consts = ["list full", "unit c supp=comb - {d0.1}", "unit c supp={}"];
    let c = *consts.choose(rng).unwrap();
    let k = rng.gen_range(1..=4);
    let mut gens: Vec<&str> = menu.choose_multiple(rng, k).copied().collect();
    gens.push("unit e supp={}");
    gens.push(c);
    let proj = rng.gen_range(0..2);
    format!(
        "namesort 0 nu
basesort tau
unknown X, Y : tau
unknown W : nu
const c : tau pmss comb
const e : tau
former f : tau -> tau
former g : (tau, tau) -> tau
former k : (nu, tau) -> tau
former h : [nu]tau -> tau
carrier tau = {{ {} }} closure finite
const c = {c}
const e = unit e supp={{}}
former f = id
former g = proj {proj}
former k = proj 1
former h = const unit e supp={{}}
",
        gens.join(", ")
    )
}

/// A term of sort `tau` (or, at the top, of a tuple or abstraction sort)
/// over the strict model's signature.
pub fn random_term(rng: &mut ChaCha8Rng, depth: u32, top: bool) -> Term {
    let atoms: Vec<Atom> = letters("abcdef").into_iter().chain([u(0), u(1)]).collect();
    let perm = |rng: &mut ChaCha8Rng| GenPerm::from(sparse_perm(rng, &atoms));
    let atom = |rng: &mut ChaCha8Rng| *atoms.choose(rng).unwrap();
    let leaf = rng.gen_range(0..4);
    if depth == 0 || rng.gen_bool(0.3) {
        return match leaf {
            0 => Term::Unknown(perm(rng), "X".into()),
            1 => Term::Unknown(perm(rng), "Y".into()),
            2 => Term::Const(perm(rng), "c".into()),
            _ => Term::Const(GenPerm::identity(), "e".into()),
        };
    }
    let n = if top { 6 } else { 4 };
    match rng.gen_range(0..n) {
        0 => Term::app("f", random_term(rng, depth - 1, false)),
        1 => Term::app(
            "g",
            Term::Tuple(vec![random_term(rng, depth - 1, false), random_term(rng, depth - 1, false)]),
        ),
        2 => {
            let w = if rng.gen_bool(0.5) {
                Term::Atom(atom(rng))
            } else {
                Term::Unknown(perm(rng), "W".into())
            };
            Term::app("k", Term::Tuple(vec![w, random_term(rng, depth - 1, false)]))
        }
        3 => Term::app("h", Term::abs(atom(rng), random_term(rng, depth - 1, false))),
        4 => Term::Tuple(vec![random_term(rng, depth - 1, false), Term::Atom(atom(rng))]),
        _ => Term::abs(atom(rng), random_term(rng, depth - 1, true)),
    }
}

/// A valuation of the strict model's unknowns: permuted carrier generators
/// with support inside the comb, and a comb atom for `W`.
pub fn strict_valuation(rng: &mut ChaCha8Rng, gens: &[Element]) -> Valuation {
    let downs: Vec<Atom> = (0..8).map(d).collect();
    let mut v = Valuation::new();
    for x in ["X", "Y"] {
        let value = loop {
            let g = gens.choose(rng).unwrap().act_finite(&random_perm(rng, &pool()));
            if g.support().is_subset(&SupportDescriptor::comb()) {
                break g;
            }
        };
        v.insert(x.to_string(), value);
    }
    v.insert("W".into(), Element::Atom(*downs.choose(rng).unwrap()));
    v
}

/// A model file whose carrier has medium supports, with a table predicate
/// `T` holding of pairs of distinct names.
pub fn medium_model_source(rng: &mut ChaCha8Rng) -> String {
    let menu = [
        "list half",
        "list half / d0.2->d0.1",
        "unit m supp=halfcomb",
        "unit m supp=halfcomb - {d0.4}",
        "unit m supp={d0.0}",
        "unit z supp={}",
        "(atm d0.1, unit m supp={d0.3})",
    ];
    let k = rng.gen_range(1..=3);
    let gens: Vec<&str> = menu.choose_multiple(rng, k).copied().collect();
    format!(
        "namesort 0 nu
basesort tau
unknown X, X2 : tau
unknown Y, Y2 : nu
pred T : (nu, nu)
carrier tau = {{ {} }} closure finite
pred T = table {{ (atm d0.0, atm d0.1) }} closure finite
regime medium
",
        gens.join(", ")
    )
}

pub fn load(src: &str) -> PnlModel {
    parse_document(src).unwrap().pnl_model().unwrap()
}

/// A random proposition over the medium model's signature.
pub fn random_prop(rng: &mut ChaCha8Rng, depth: u32, names_only: bool) -> Prop {
    let names = ["Y", "Y2"];
    let values = if names_only { vec!["X"] } else { vec!["X", "X2"] };
    let atoms = letters("abcd");
    let name_term = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.25) {
            Term::Atom(*atoms.choose(rng).unwrap())
        } else {
            Term::unknown(names.choose(rng).unwrap())
        }
    };
    let value_term = |rng: &mut ChaCha8Rng| {
        let x = Term::unknown(values.choose(rng).unwrap());
        if rng.gen_bool(0.3) {
            let p = sparse_perm(rng, &atoms);
            match x {
                Term::Unknown(_, n) => Term::Unknown(GenPerm::from(p), n),
                t => t,
            }
        } else {
            x
        }
    };
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => Prop::Bot,
            1 | 2 => Prop::fresh(name_term(rng), value_term(rng)),
            3 => Prop::eq(name_term(rng), name_term(rng)),
            4 if !names_only => Prop::eq(value_term(rng), value_term(rng)),
            _ => Prop::pred("T", Term::Tuple(vec![name_term(rng), name_term(rng)])),
        };
    }
    let binders: Vec<&str> = if names_only { names.to_vec() } else { ["Y", "Y2", "X", "X2"].to_vec() };
    match rng.gen_range(0..5) {
        0 => Prop::imp(random_prop(rng, depth - 1, names_only), random_prop(rng, depth - 1, names_only)),
        1 => Prop::not(random_prop(rng, depth - 1, names_only)),
        2 | 3 => Prop::all(binders.choose(rng).unwrap(), random_prop(rng, depth - 1, names_only)),
        _ => Prop::exists(binders.choose(rng).unwrap(), random_prop(rng, depth - 1, names_only)),
    }
}

/// Values for every unknown of the medium model.
pub fn medium_valuation(rng: &mut ChaCha8Rng, gens: &[Element]) -> Valuation {
    let downs: Vec<Atom> = (0..8).map(d).collect();
    let mut v = BTreeMap::new();
    for x in ["X", "X2"] {
        let p = random_perm(rng, &downs);
        v.insert(x.to_string(), gens.choose(rng).unwrap().act_finite(&p));
    }
    for y in ["Y", "Y2"] {
        v.insert(y.to_string(), Element::Atom(*downs.choose(rng).unwrap()));
    }
    v
}
