//! Text syntax for atoms, permutations, supports, elements, sorts, terms,
//! propositions and whole model files.
//!
//! Every printed value reparses to an equal value. Atoms are written
//! `d0.3` (comb) or `u0.3` (reservoir); a single letter `a`..`z` stands for
//! `d0.0`..`d0.25`.

use std::collections::{BTreeMap, BTreeSet};

use crate::atoms::{Atom, FinPerm, GenPerm, Zone};
use crate::error::{NomError, Result};
use crate::permission::{Base, PermissionSet, SupportDescriptor};
use crate::pnl::{PnlModel, PredDenotation, Prop, Regime};
use crate::semantics::{EquivariantFn, Interpretation, Model, Theory, Valuation};
use crate::terms::{ConstDecl, FormerDecl, Mode, Signature, Sort, Term, UnknownDecl};
use crate::universe::{AtomList, Carrier, Element, ListMode, PermGroup};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(Atom),
    Ident(String),
    Int(u64),
    Sym(&'static str),
    Newline,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 21] = [
    "->", "=>", ":=", "(", ")", "[", "]", "{", "}", ",", "*", "^", "+", "-", ".", "=", ":", ";", "/", "|", "~",
];

fn lex(src: &str, newlines: bool) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut depth = 0i32;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l0, col: c0 });
        if c == '\n' {
            if newlines && depth == 0 {
                push(&mut out, Tok::Newline);
            }
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| NomError::Parse {
                line: l0,
                col: c0,
                msg: format!("number {s} is too large"),
            })?;
            col += i - start;
            push(&mut out, Tok::Int(n));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let atom_head = (c == 'd' || c == 'u') && word.len() > 1 && word[1..].bytes().all(|b| b.is_ascii_digit());
            if atom_head && i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let idx: String = chars[i + 1..j].iter().collect();
                let bad = || NomError::Parse {
                    line: l0,
                    col: c0,
                    msg: "atom index out of range".into(),
                };
                let sort: u32 = word[1..].parse().map_err(|_| bad())?;
                let index: u64 = idx.parse().map_err(|_| bad())?;
                let zone = if c == 'd' { Zone::Down } else { Zone::Up };
                col += j - start;
                i = j;
                push(&mut out, Tok::Atom(Atom::new(sort, zone, index)));
                continue;
            }
            col += i - start;
            push(&mut out, Tok::Ident(word));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return Err(NomError::Parse {
                line: l0,
                col: c0,
                msg: format!("unexpected character {c:?}"),
            });
        };
        match *sym {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            _ => {}
        }
        i += sym.len();
        col += sym.len();
        push(&mut out, Tok::Sym(sym));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Whether the text writes atoms as single letters.
pub fn uses_letters(src: &str) -> bool {
    lex(src, false).is_ok_and(|ts| {
        ts.iter()
            .any(|t| matches!(&t.tok, Tok::Ident(w) if w.len() == 1 && w.as_bytes()[0].is_ascii_lowercase()))
    })
}

/// Renders an atom as a letter where one exists.
pub fn letter_or_atom(a: &Atom) -> String {
    a.letter().map(String::from).unwrap_or_else(|| a.to_string())
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str, newlines: bool) -> Result<Parser> {
        Ok(Parser {
            toks: lex(src, newlines)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(NomError::Parse {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Atom(a) => format!("atom {a}"),
            Tok::Ident(w) => format!("'{w}'"),
            Tok::Int(n) => format!("number {n}"),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn at(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == w)
    }

    fn eat(&mut self, s: &str) -> bool {
        let hit = self.at(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let hit = self.at_word(w);
        if hit {
            self.bump();
        }
        hit
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}', found {}", self.describe()))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.err(format!("expected '{w}', found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(w) => {
                self.bump();
                Ok(w)
            }
            _ => self.err(format!("expected an identifier, found {}", self.describe())),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let n = i64::try_from(n).or_else(|_| self.err("number out of range"))?;
                Ok(if neg { -n } else { n })
            }
            _ => self.err(format!("expected a number, found {}", self.describe())),
        }
    }

    fn end(&mut self) -> Result<()> {
        while matches!(self.peek(), Tok::Newline) {
            self.bump();
        }
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => self.err(format!("unexpected {}", self.describe())),
        }
    }

    fn is_atom(&self) -> bool {
        match self.peek() {
            Tok::Atom(_) => true,
            Tok::Ident(w) => w.len() == 1 && w.as_bytes()[0].is_ascii_lowercase(),
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        match self.peek().clone() {
            Tok::Atom(a) => {
                self.bump();
                Ok(a)
            }
            Tok::Ident(w) if w.len() == 1 => match Atom::from_letter(w.chars().next().unwrap()) {
                Some(a) => {
                    self.bump();
                    Ok(a)
                }
                None => self.err(format!("expected an atom, found {}", self.describe())),
            },
            _ => self.err(format!("expected an atom, found {}", self.describe())),
        }
    }

    fn cycles(&mut self) -> Result<FinPerm> {
        let start = self.pos;
        let mut cycles = Vec::new();
        while self.at("(") {
            self.bump();
            let mut c = Vec::new();
            while !self.at(")") {
                c.push(self.atom()?);
                self.eat(",");
            }
            self.expect(")")?;
            cycles.push(c);
        }
        if cycles.is_empty() {
            return self.err(format!("expected a permutation, found {}", self.describe()));
        }
        FinPerm::from_cycles(&cycles).map_err(|e| {
            let t = &self.toks[start];
            NomError::Parse {
                line: t.line,
                col: t.col,
                msg: e.to_string(),
            }
        })
    }

    fn fin_perm(&mut self) -> Result<FinPerm> {
        if self.eat_word("id") {
            return Ok(FinPerm::identity());
        }
        self.cycles()
    }

    fn perm(&mut self) -> Result<GenPerm> {
        if self.eat_word("shift") {
            self.expect("^")?;
            let k = self.int()?;
            let save = self.pos;
            if self.eat("*") && self.at("(") {
                if let Ok(rho) = self.cycles() {
                    return Ok(GenPerm::shift(k).compose(&GenPerm::from(rho)));
                }
            }
            self.pos = save;
            return Ok(GenPerm::shift(k));
        }
        Ok(GenPerm::from(self.fin_perm()?))
    }

    fn atom_set(&mut self) -> Result<BTreeSet<Atom>> {
        self.expect("{")?;
        let mut out = BTreeSet::new();
        while !self.at("}") {
            out.insert(self.atom()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}")?;
        Ok(out)
    }

    fn descriptor(&mut self) -> Result<SupportDescriptor> {
        let base = if self.eat_word("comb") {
            Base::Comb
        } else if self.eat_word("halfcomb") {
            Base::HalfComb
        } else {
            return Ok(SupportDescriptor::finite(self.atom_set()?));
        };
        let minus = if self.eat("-") { self.atom_set()? } else { BTreeSet::new() };
        let plus = if self.eat("+") { self.atom_set()? } else { BTreeSet::new() };
        Ok(SupportDescriptor::new(base, minus, plus))
    }

    fn list_mode(&mut self) -> Result<ListMode> {
        if self.eat_word("full") {
            Ok(ListMode::Full)
        } else if self.eat_word("half") {
            Ok(ListMode::Half)
        } else {
            self.err(format!("expected 'full' or 'half', found {}", self.describe()))
        }
    }

    fn list(&mut self) -> Result<AtomList> {
        let start = self.pos;
        self.expect_word("list")?;
        let mode = self.list_mode()?;
        let mut subs = Vec::new();
        if self.eat("/") {
            loop {
                let a = self.atom()?;
                self.expect("->")?;
                subs.push((a, self.atom()?));
                let more = self.at(",") && matches!(self.peek_at(2), Tok::Sym("->")) && {
                    self.pos += 1;
                    let ok = self.is_atom();
                    self.pos -= 1;
                    ok
                };
                if !more {
                    break;
                }
                self.bump();
            }
        }
        AtomList::with_substitutions(mode, subs).map_err(|e| {
            let t = &self.toks[start];
            NomError::Parse {
                line: t.line,
                col: t.col,
                msg: e.to_string(),
            }
        })
    }

    fn group(&mut self) -> Result<PermGroup> {
        if self.eat_word("finite") {
            Ok(PermGroup::Finite)
        } else if self.eat_word("shift") {
            Ok(PermGroup::Shift)
        } else {
            self.err(format!("expected 'finite' or 'shift', found {}", self.describe()))
        }
    }

    fn element(&mut self) -> Result<Element> {
        match self.peek().clone() {
            Tok::Ident(w) => match w.as_str() {
                "atm" => {
                    self.bump();
                    Ok(Element::Atom(self.atom()?))
                }
                "list" => Ok(Element::List(self.list()?)),
                "pset" => {
                    self.bump();
                    let d = self.descriptor()?;
                    PermissionSet::from_descriptor(&d)
                        .map(Element::PermSet)
                        .or_else(|e| self.err(e.to_string()))
                }
                "fuzzy" => {
                    self.bump();
                    Ok(Element::Fuzzy(self.int()?))
                }
                "unit" => {
                    self.bump();
                    let tag = self.ident()?;
                    self.expect_word("supp")?;
                    self.expect("=")?;
                    Ok(Element::Unit(tag, self.descriptor()?))
                }
                _ => self.err(format!("expected an element, found {}", self.describe())),
            },
            Tok::Sym("(") => {
                self.bump();
                let xs = self.seq(")", Parser::element)?;
                Ok(Element::Tuple(xs))
            }
            Tok::Sym("[") => {
                self.bump();
                if self.at_word("list") {
                    let l = self.list()?;
                    self.expect("]")?;
                    let body = self.element()?;
                    crate::universe::listabs(&l, body).or_else(|e| self.err(e.to_string()))
                } else {
                    let a = self.atom()?;
                    self.expect("]")?;
                    Ok(Element::abs(a, self.element()?))
                }
            }
            _ => self.err(format!("expected an element, found {}", self.describe())),
        }
    }

    /// Comma-separated items up to `close`; a trailing comma is allowed.
    fn seq<T>(&mut self, close: &str, mut item: impl FnMut(&mut Parser) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        while !self.at(close) {
            out.push(item(self)?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(close)?;
        Ok(out)
    }

    fn name_sort(&mut self, sig: &Signature) -> Result<u32> {
        let w = self.ident()?;
        match sig.name_sort_index(&w) {
            Some(n) => Ok(n),
            None => {
                self.pos -= 1;
                self.err(format!("{w} is not a name sort"))
            }
        }
    }

    fn sort(&mut self, sig: &Signature) -> Result<Sort> {
        if self.eat("(") {
            let mut ss = Vec::new();
            while !self.at(")") {
                ss.push(self.sort(sig)?);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
            return Ok(Sort::Tuple(ss));
        }
        if self.eat("[") {
            let n = self.name_sort(sig)?;
            self.expect("]")?;
            return Ok(Sort::abs(n, self.sort(sig)?));
        }
        let w = self.ident()?;
        Ok(match sig.name_sort_index(&w) {
            Some(n) => Sort::Name(n),
            None => Sort::Base(w),
        })
    }

    fn named(&mut self, sig: &mut Signature, pi: GenPerm) -> Result<Term> {
        let w = self.ident()?;
        if sig.constants.contains_key(&w) {
            return Ok(Term::Const(pi, w));
        }
        if !sig.unknowns.contains_key(&w) {
            let capital = w.starts_with(|c: char| c.is_ascii_uppercase());
            if sig.auto_unknowns && capital {
                sig.declare_unknown(&w, Sort::base("tau"));
            } else {
                self.pos -= 1;
                return self.err(format!("{w} is neither a constant nor an unknown"));
            }
        }
        Ok(Term::Unknown(pi, w))
    }

    fn term(&mut self, sig: &mut Signature) -> Result<Term> {
        if self.at_word("shift") || self.at_word("id") {
            let pi = self.perm()?;
            self.expect("*")?;
            return self.named(sig, pi);
        }
        if self.at("(") {
            let save = self.pos;
            if let Ok(p) = self.cycles() {
                if self.eat("*") {
                    return self.named(sig, GenPerm::from(p));
                }
            }
            self.pos = save;
            self.bump();
            let mut rs = Vec::new();
            let mut trailing = false;
            while !self.at(")") {
                rs.push(self.term(sig)?);
                trailing = self.eat(",");
                if !trailing {
                    break;
                }
            }
            self.expect(")")?;
            if rs.len() == 1 && !trailing {
                return Ok(rs.pop().unwrap());
            }
            return Ok(Term::Tuple(rs));
        }
        if self.eat("[") {
            let a = self.atom()?;
            self.expect("]")?;
            return Ok(Term::abs(a, self.term(sig)?));
        }
        if let Tok::Atom(a) = self.peek().clone() {
            self.bump();
            return Ok(Term::Atom(a));
        }
        let Tok::Ident(w) = self.peek().clone() else {
            return self.err(format!("expected a term, found {}", self.describe()));
        };
        if sig.constants.contains_key(&w) {
            self.bump();
            return Ok(Term::Const(GenPerm::identity(), w));
        }
        if matches!(self.peek_at(1), Tok::Sym("(")) {
            self.bump();
            self.bump();
            let (rs, trailing) = self.args(sig)?;
            let arg = if rs.len() == 1 && !trailing {
                rs.into_iter().next().unwrap()
            } else {
                Term::Tuple(rs)
            };
            return Ok(Term::App(w, Box::new(arg)));
        }
        if self.is_atom() && !sig.unknowns.contains_key(&w) {
            return Ok(Term::Atom(self.atom()?));
        }
        self.named(sig, GenPerm::identity())
    }

    /// Arguments after an opening parenthesis, and whether a trailing comma
    /// was written.
    fn args(&mut self, sig: &mut Signature) -> Result<(Vec<Term>, bool)> {
        let mut rs = Vec::new();
        let mut trailing = false;
        while !self.at(")") {
            rs.push(self.term(sig)?);
            trailing = self.eat(",");
            if !trailing {
                break;
            }
        }
        self.expect(")")?;
        Ok((rs, trailing))
    }

    fn prop(&mut self, sig: &mut Signature) -> Result<Prop> {
        let a = self.unary(sig)?;
        if self.eat("->") {
            return Ok(Prop::imp(a, self.prop(sig)?));
        }
        Ok(a)
    }

    fn binder(&mut self, sig: &mut Signature) -> Result<String> {
        let x = self.ident()?;
        if !sig.unknowns.contains_key(&x) {
            if sig.auto_unknowns && x.starts_with(|c: char| c.is_ascii_uppercase()) {
                sig.declare_unknown(&x, Sort::base("tau"));
            } else {
                self.pos -= 1;
                return self.err(format!("{x} is not a declared unknown"));
            }
        }
        self.expect(".")?;
        Ok(x)
    }

    fn unary(&mut self, sig: &mut Signature) -> Result<Prop> {
        if self.eat_word("bot") {
            return Ok(Prop::Bot);
        }
        if self.eat_word("not") || self.eat("~") {
            return Ok(Prop::not(self.unary(sig)?));
        }
        if self.eat_word("forall") {
            let x = self.binder(sig)?;
            return Ok(Prop::all(&x, self.prop(sig)?));
        }
        if self.eat_word("exists") {
            let x = self.binder(sig)?;
            return Ok(Prop::exists(&x, self.prop(sig)?));
        }
        if self.eat("(") {
            let p = self.prop(sig)?;
            self.expect(")")?;
            return Ok(p);
        }
        let p = self.ident()?;
        self.expect("(")?;
        let (rs, trailing) = self.args(sig)?;
        let arg = if rs.len() == 1 && !trailing {
            rs.into_iter().next().unwrap()
        } else {
            Term::Tuple(rs)
        };
        Ok(Prop::Pred(p, arg))
    }

    fn combinator(&mut self) -> Result<EquivariantFn> {
        let w = self.ident()?;
        match w.as_str() {
            "id" => Ok(EquivariantFn::Identity),
            "abs" => Ok(EquivariantFn::MakeAbs),
            "proj" => {
                let i = self.int()?;
                usize::try_from(i)
                    .map(EquivariantFn::Project)
                    .or_else(|_| self.err("projection index must be non-negative"))
            }
            "const" => EquivariantFn::constant_to(self.element()?),
            "compose" => {
                self.expect("(")?;
                let f = self.combinator()?;
                self.expect(";")?;
                let g = self.combinator()?;
                self.expect(")")?;
                Ok(EquivariantFn::Compose(Box::new(f), Box::new(g)))
            }
            "tuple" => {
                self.expect("(")?;
                let mut fs = Vec::new();
                while !self.at(")") {
                    fs.push(self.combinator()?);
                    if !self.eat(";") {
                        break;
                    }
                }
                self.expect(")")?;
                Ok(EquivariantFn::MakeTuple(fs))
            }
            "table" => {
                let group = self.group()?;
                self.expect("{")?;
                let mut entries = Vec::new();
                while !self.at("}") {
                    let g = self.element()?;
                    self.expect("=>")?;
                    entries.push((g, self.element()?));
                    if !self.eat(";") {
                        break;
                    }
                }
                self.expect("}")?;
                EquivariantFn::orbit_table(entries, group)
            }
            _ => {
                self.pos -= 1;
                self.err(format!("unknown combinator {w}"))
            }
        }
    }

    fn carrier(&mut self, default: PermGroup) -> Result<Carrier> {
        self.expect("{")?;
        let gens = self.seq("}", Parser::element)?;
        let group = if self.eat_word("closure") { self.group()? } else { default };
        Ok(Carrier::new(gens, group))
    }

    fn regime(&mut self) -> Result<Regime> {
        if self.eat_word("full") {
            Ok(Regime::Full)
        } else if self.eat_word("medium") {
            Ok(Regime::Medium)
        } else if self.eat_word("finite") {
            Ok(Regime::Finite)
        } else {
            self.err(format!("expected a regime, found {}", self.describe()))
        }
    }
}

fn parse_all<T>(src: &str, f: impl FnOnce(&mut Parser) -> Result<T>) -> Result<T> {
    let mut p = Parser::new(src, false)?;
    let v = f(&mut p)?;
    p.end()?;
    Ok(v)
}

pub fn parse_atom(src: &str) -> Result<Atom> {
    parse_all(src, Parser::atom)
}

/// A permutation: `id`, cycles such as `(a b c)(d0.7 u0.1)`, or
/// `shift^k * (…)`.
pub fn parse_perm(src: &str) -> Result<GenPerm> {
    parse_all(src, Parser::perm)
}

pub fn parse_fin_perm(src: &str) -> Result<FinPerm> {
    parse_all(src, Parser::fin_perm)
}

/// A finite set `{a, b, d0.4}`.
pub fn parse_atom_set(src: &str) -> Result<BTreeSet<Atom>> {
    parse_all(src, Parser::atom_set)
}

/// A support: a finite set, or `comb`/`halfcomb` with optional
/// `- {…}` and `+ {…}`.
pub fn parse_descriptor(src: &str) -> Result<SupportDescriptor> {
    parse_all(src, Parser::descriptor)
}

pub fn parse_list(src: &str) -> Result<AtomList> {
    parse_all(src, Parser::list)
}

pub fn parse_element(src: &str) -> Result<Element> {
    parse_all(src, Parser::element)
}

pub fn parse_sort(sig: &Signature, src: &str) -> Result<Sort> {
    parse_all(src, |p| p.sort(sig))
}

/// A term. With `auto_unknowns`, undeclared capitalised identifiers are
/// declared as unknowns of sort `tau`.
pub fn parse_term(sig: &mut Signature, src: &str) -> Result<Term> {
    parse_all(src, |p| p.term(sig))
}

pub fn parse_prop(sig: &mut Signature, src: &str) -> Result<Prop> {
    parse_all(src, |p| p.prop(sig))
}

/// `X := element; Y := element`.
pub fn parse_valuation(src: &str) -> Result<Valuation> {
    parse_all(src, |p| {
        let mut v = Valuation::new();
        while !matches!(p.peek(), Tok::Eof) {
            let x = p.ident()?;
            p.expect(":=")?;
            v.insert(x, p.element()?);
            if !p.eat(";") {
                break;
            }
        }
        Ok(v)
    })
}

/// The contents of a model file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Document {
    pub sig: Signature,
    pub model: Model,
    pub preds: BTreeMap<String, PredDenotation>,
    pub basis: BTreeMap<Sort, Vec<Element>>,
    pub axioms: Vec<(Term, Term)>,
    /// Equations to check against the theory.
    pub goals: Vec<(Term, Term)>,
    pub formulas: Vec<Prop>,
    pub regime: Option<Regime>,
}

impl Document {
    pub fn interpretation(&self) -> Result<Interpretation> {
        Interpretation::new(self.sig.clone(), self.model.clone())
    }

    pub fn theory(&self) -> Theory {
        Theory {
            sig: self.sig.clone(),
            axioms: self.axioms.clone(),
        }
    }

    pub fn pnl_model(&self) -> Result<PnlModel> {
        let mut m = PnlModel::new(self.interpretation()?);
        for (p, d) in &self.preds {
            m.preds.insert(p.clone(), d.clone());
        }
        m.quant_basis = self.basis.clone();
        Ok(m)
    }
}

/// Parses a model file. Statements, one per line (brackets may span lines):
///
/// ```text
/// namesort 0 nu          basesort tau          mode strict|extended
/// group finite|shift     regime full|medium|finite
/// unknown X, Y : tau [pmss comb - {…} + {…}]
/// const zero : tau [pmss {…}]                  const zero = unit z supp={}
/// former f : (tau, tau) -> tau                 former f = proj 0
/// pred P : (nu, tau)                           pred P = fresh | eq | table {…} closure finite
/// carrier tau = { element, … } closure finite
/// basis tau = { element, … }
/// axiom r = s                                goal r = s
/// formula forall X. exists Y. fresh(Y, X)
/// ```
pub fn parse_document(src: &str) -> Result<Document> {
    let mut p = Parser::new(src, true)?;
    let mut d = Document::default();
    loop {
        while matches!(p.peek(), Tok::Newline) {
            p.bump();
        }
        if matches!(p.peek(), Tok::Eof) {
            break;
        }
        statement(&mut p, &mut d)?;
        match p.peek() {
            Tok::Newline | Tok::Eof => {}
            _ => return p.err(format!("unexpected {} after statement", p.describe())),
        }
    }
    Ok(d)
}

fn statement(p: &mut Parser, d: &mut Document) -> Result<()> {
    let kw = p.ident()?;
    match kw.as_str() {
        "namesort" => {
            let n = p.int()?;
            let n = u32::try_from(n).or_else(|_| p.err("name sort index out of range"))?;
            let name = match p.peek() {
                Tok::Ident(_) => Some(p.ident()?),
                _ => None,
            };
            d.sig.name_sorts.insert(n, name);
        }
        "basesort" => {
            d.sig.base_sorts.insert(p.ident()?);
        }
        "mode" => {
            d.sig.mode = if p.eat_word("strict") {
                Mode::Strict
            } else if p.eat_word("extended") {
                Mode::Extended
            } else {
                return p.err("expected 'strict' or 'extended'");
            };
        }
        "group" => d.sig.group = p.group()?,
        "regime" => d.regime = Some(p.regime()?),
        "unknown" => {
            let mut names = vec![p.ident()?];
            while p.eat(",") {
                names.push(p.ident()?);
            }
            p.expect(":")?;
            let sort = p.sort(&d.sig)?;
            let pmss = if p.eat_word("pmss") {
                let desc = p.descriptor()?;
                PermissionSet::from_descriptor(&desc).or_else(|e| p.err(e.to_string()))?
            } else {
                PermissionSet::comb()
            };
            for x in names {
                d.sig.unknowns.insert(
                    x,
                    UnknownDecl {
                        sort: sort.clone(),
                        pmss: pmss.clone(),
                    },
                );
            }
        }
        "const" => {
            let c = p.ident()?;
            if p.eat("=") {
                d.model.consts.insert(c, p.element()?);
            } else {
                p.expect(":")?;
                let sort = p.ident()?;
                let pmss = if p.eat_word("pmss") {
                    p.descriptor()?
                } else {
                    SupportDescriptor::empty()
                };
                d.sig.constants.insert(c, ConstDecl { sort, pmss });
            }
        }
        "former" => {
            let f = p.ident()?;
            if p.eat("=") {
                d.model.formers.insert(f, p.combinator()?);
            } else {
                p.expect(":")?;
                let arg = p.sort(&d.sig)?;
                p.expect("->")?;
                let result = p.ident()?;
                d.sig.formers.insert(f, FormerDecl { arg, result });
            }
        }
        "pred" => {
            let name = p.ident()?;
            if p.eat("=") {
                let den = if p.eat_word("fresh") {
                    PredDenotation::Freshness
                } else if p.eat_word("eq") {
                    PredDenotation::Equality
                } else if p.eat_word("table") {
                    PredDenotation::Table(p.carrier(d.sig.group)?)
                } else {
                    return p.err("expected 'fresh', 'eq' or 'table'");
                };
                d.preds.insert(name, den);
            } else {
                p.expect(":")?;
                let s = p.sort(&d.sig)?;
                d.sig.predicates.insert(name, s);
            }
        }
        "carrier" => {
            let t = p.ident()?;
            p.expect("=")?;
            let c = p.carrier(d.sig.group)?;
            d.model.carriers.insert(t, c);
        }
        "basis" => {
            let s = p.sort(&d.sig)?;
            p.expect("=")?;
            p.expect("{")?;
            let xs = p.seq("}", Parser::element)?;
            d.basis.insert(s, xs);
        }
        "axiom" | "goal" => {
            let r = p.term(&mut d.sig)?;
            p.expect("=")?;
            let s = p.term(&mut d.sig)?;
            if kw == "axiom" {
                d.axioms.push((r, s));
            } else {
                d.goals.push((r, s));
            }
        }
        "formula" => {
            let f = p.prop(&mut d.sig)?;
            d.formulas.push(f);
        }
        _ => {
            p.pos -= 1;
            return p.err(format!("unknown statement {kw}"));
        }
    }
    Ok(())
}
