use std::collections::BTreeSet;
use std::fmt;

use crate::atoms::{Atom, GenPerm, Zone};
use crate::error::{NomError, Result};
use crate::permission::SupportDescriptor;
use crate::terms::{mentioned_atoms, Term};
use crate::universe::{complete, listabs, listabs_at, AtomList, Carrier, Element, ListMode, PermGroup};

use super::Interpretation;

/// Bounds for enumerating finite families of elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyConfig {
    /// Atoms that permutations may move.
    pub pool: BTreeSet<Atom>,
    /// Largest family size before giving up.
    pub cap: usize,
    /// Shift powers `-w..=w` applied to generators of shift-closed carriers.
    pub shift_window: i64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig {
            pool: BTreeSet::new(),
            cap: 20_000,
            shift_window: 2,
        }
    }
}

impl FamilyConfig {
    pub fn with_pool(pool: impl IntoIterator<Item = Atom>) -> Self {
        FamilyConfig {
            pool: pool.into_iter().collect(),
            ..Default::default()
        }
    }
}

/// The carrier of an arbitrary sort, assembled from base carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SortCarrier {
    Base(Carrier),
    Names(u32),
    Product(Vec<SortCarrier>),
    Abstractions(u32, Box<SortCarrier>),
    /// `{[l]x | l a list of the mode, x in the inner carrier}`.
    Reduced(Box<SortCarrier>, ListMode),
}

/// Distinct elements up to α, in first-seen order.
struct Distinct {
    seen: BTreeSet<Element>,
    out: Vec<Element>,
    cap: usize,
}

impl Distinct {
    fn new(cap: usize) -> Self {
        Distinct {
            seen: BTreeSet::new(),
            out: Vec::new(),
            cap,
        }
    }

    fn push(&mut self, x: Element) -> Result<()> {
        let c = x.canonical();
        if self.seen.insert(c.clone()) {
            self.out.push(c);
            if self.out.len() > self.cap {
                return Err(NomError::FamilyTooLarge {
                    size: self.out.len(),
                    cap: self.cap,
                });
            }
        }
        Ok(())
    }
}

/// Sort-preserving injections of `src` into `pool`.
fn injections(src: &[Atom], pool: &[Atom], cap: usize) -> Result<Vec<Vec<Atom>>> {
    fn go(src: &[Atom], pool: &[Atom], cur: &mut Vec<Atom>, out: &mut Vec<Vec<Atom>>, cap: usize) -> Result<()> {
        if cur.len() == src.len() {
            out.push(cur.clone());
            if out.len() > cap {
                return Err(NomError::FamilyTooLarge { size: out.len(), cap });
            }
            return Ok(());
        }
        let a = src[cur.len()];
        for &b in pool {
            if b.sort == a.sort && !cur.contains(&b) {
                cur.push(b);
                go(src, pool, cur, out, cap)?;
                cur.pop();
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(src, pool, &mut Vec::new(), &mut out, cap)?;
    Ok(out)
}

fn shift_order(w: i64) -> Vec<i64> {
    let mut ks = vec![0];
    for k in 1..=w {
        ks.extend([k, -k]);
    }
    ks
}

impl SortCarrier {
    pub fn contains(&self, x: &Element) -> Result<bool> {
        Ok(match (self, x) {
            (SortCarrier::Base(c), _) => c.contains(x)?,
            (SortCarrier::Names(n), Element::Atom(a)) => a.sort == *n,
            (SortCarrier::Product(cs), Element::Tuple(xs)) => {
                if cs.len() != xs.len() {
                    return Ok(false);
                }
                for (c, y) in cs.iter().zip(xs) {
                    if !c.contains(y)? {
                        return Ok(false);
                    }
                }
                true
            }
            (SortCarrier::Abstractions(n, c), Element::Abs(a, y)) => a.sort == *n && c.contains(y)?,
            (SortCarrier::Reduced(c, mode), Element::ListAbs(la)) => {
                if la.list().mode() != *mode {
                    return Ok(false);
                }
                let l = AtomList::fresh(*mode, &x.support())?;
                c.contains(&listabs_at(x, &l)?)?
            }
            _ => false,
        })
    }

    /// Orbit representatives under permutations of the pool, up to α.
    pub fn family(&self, pool: &BTreeSet<Atom>, cfg: &FamilyConfig) -> Result<Vec<Element>> {
        let mut acc = Distinct::new(cfg.cap);
        match self {
            SortCarrier::Base(c) => {
                let ks = match c.group {
                    PermGroup::Finite => vec![0],
                    PermGroup::Shift => shift_order(cfg.shift_window),
                };
                for g in &c.generators {
                    for &k in &ks {
                        let Ok(gk) = g.act(&GenPerm::shift(k)) else { continue };
                        let gk = gk.canonical();
                        let src: Vec<Atom> = gk.mentioned_atoms().into_iter().collect();
                        let mut targets: BTreeSet<Atom> = pool.clone();
                        targets.extend(src.iter().copied());
                        let targets: Vec<Atom> = targets.into_iter().collect();
                        for dst in injections(&src, &targets, cfg.cap)? {
                            acc.push(gk.act_finite(&complete(&src, &dst)))?;
                        }
                    }
                }
            }
            SortCarrier::Names(n) => {
                let mut any = false;
                for a in pool.iter().filter(|a| a.sort == *n) {
                    acc.push(Element::Atom(*a))?;
                    any = true;
                }
                if !any {
                    acc.push(Element::Atom(Atom::down(*n, 0)))?;
                }
            }
            SortCarrier::Product(cs) => {
                let mut rows: Vec<Vec<Element>> = vec![Vec::new()];
                for c in cs {
                    let col = c.family(pool, cfg)?;
                    let size = rows.len() * col.len();
                    if size > cfg.cap {
                        return Err(NomError::FamilyTooLarge { size, cap: cfg.cap });
                    }
                    rows = rows
                        .into_iter()
                        .flat_map(|r| {
                            col.iter().map(move |y| {
                                let mut r = r.clone();
                                r.push(y.clone());
                                r
                            })
                        })
                        .collect();
                }
                for r in rows {
                    acc.push(Element::Tuple(r))?;
                }
            }
            SortCarrier::Abstractions(n, c) => {
                let avoid = SupportDescriptor::finite(pool.iter().copied());
                let mut binders: Vec<Atom> = pool.iter().filter(|a| a.sort == *n).copied().collect();
                binders.push(avoid.fresh_atom(*n, Zone::Down)?);
                for a in binders {
                    let mut p = pool.clone();
                    p.insert(a);
                    for y in c.family(&p, cfg)? {
                        acc.push(Element::abs(a, y))?;
                    }
                }
            }
            SortCarrier::Reduced(c, mode) => {
                let l = AtomList::fresh(*mode, &SupportDescriptor::finite(pool.iter().copied()))?;
                for x in c.family(pool, cfg)? {
                    if let Ok(y) = listabs(&l, x) {
                        acc.push(y)?;
                    }
                }
            }
        }
        Ok(acc.out)
    }
}

impl fmt::Display for SortCarrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortCarrier::Base(c) => write!(f, "{c}"),
            SortCarrier::Names(n) => write!(f, "atoms of sort {n}"),
            SortCarrier::Product(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "({})", parts.join(" x "))
            }
            SortCarrier::Abstractions(n, c) => write!(f, "[atoms of sort {n}]{c}"),
            SortCarrier::Reduced(c, m) => write!(f, "[{m} lists]{c}"),
        }
    }
}

/// A pool for checking statements about `terms` in `i`: their mentioned
/// atoms, the finite parts of generator and constant supports, plus `extra`
/// fresh Down atoms and one fresh Up atom per name sort.
pub fn default_pool(i: &Interpretation, terms: &[&Term], extra: usize) -> Result<BTreeSet<Atom>> {
    let mut pool = BTreeSet::new();
    for t in terms {
        pool.extend(mentioned_atoms(t));
    }
    let mut base = i;
    while let Some((inner, m)) = base.reduced_parts() {
        pool.extend(m.mentioned_atoms());
        base = inner;
    }
    if let Some(model) = base.model() {
        for c in model.carriers.values() {
            for g in &c.generators {
                pool.extend(g.canonical().mentioned_atoms());
            }
        }
        for v in model.consts.values() {
            pool.extend(v.canonical().mentioned_atoms());
        }
    }
    let avoid = SupportDescriptor::finite(pool.iter().copied());
    for &n in i.sig().name_sorts.keys() {
        pool.extend(avoid.fresh_atoms(n, Zone::Down, extra)?);
        pool.extend(avoid.fresh_atoms(n, Zone::Up, 1)?);
    }
    Ok(pool)
}
