//! First-order formulas over difference atoms `a - b IN L`, with `L` an
//! ultimately periodic set, compiled to synchronous automata; and the
//! converse translation of an automaton into such a formula.
//!
//! An atom `a - b IN L` holds when `a >= b` and `a - b ∈ L`. Grammar:
//!
//! ```text
//! f    := "EX" var "." f | "ALL" var "." f | f "OR" f | f "AND" f
//!       | "NOT" f | "(" f ")" | atom
//! atom := term "-" term "IN" (name | UP-literal) | term "-" term ">" "0"
//!       | var "=" var | "TRUE" | "FALSE"
//! term := var | "0"
//! ```
//!
//! `NOT` binds tighter than `AND`, which binds tighter than `OR`;
//! quantifier bodies extend as far right as possible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::structured::StructuredBinary;
use crate::syncauto::{Letter, SyncAutomaton, MAX_ARITY};
use crate::upset::UpSet;

/// Operand of a difference atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    Var(String),
    Zero,
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Var(v) => f.write_str(v),
            Operand::Zero => f.write_str("0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Diff(Operand, Operand, UpSet),
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    /// Free variables in alphabetical order.
    pub fn free_vars(&self) -> Vec<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let mut note = |v: &String, bound: &Vec<String>| {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            };
            match f {
                Formula::True | Formula::False => {}
                Formula::Diff(a, b, _) => {
                    for op in [a, b] {
                        if let Operand::Var(v) = op {
                            note(v, bound);
                        }
                    }
                }
                Formula::Eq(a, b) => {
                    note(a, bound);
                    note(b, bound);
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(g, h) | Formula::Or(g, h) => {
                    walk(g, bound, out);
                    walk(h, bound, out);
                }
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    bound.push(v.clone());
                    walk(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out.into_iter().collect()
    }

    fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::True | Formula::False | Formula::Diff(..) | Formula::Eq(..) | Formula::Not(_)
        )
    }
}

struct Wrapped<'a>(&'a Formula);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_atomic() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("TRUE"),
            Formula::False => f.write_str("FALSE"),
            Formula::Diff(a, b, set) => write!(f, "{a} - {b} IN {set}"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => match **g {
                Formula::Not(_) => write!(f, "NOT ({g})"),
                _ => write!(f, "NOT {}", Wrapped(g)),
            },
            Formula::And(g, h) => write!(f, "{} AND {}", Wrapped(g), Wrapped(h)),
            Formula::Or(g, h) => write!(f, "{} OR {}", Wrapped(g), Wrapped(h)),
            Formula::Exists(v, g) => write!(f, "EX {v} . {g}"),
            Formula::Forall(v, g) => write!(f, "ALL {v} . {g}"),
        }
    }
}

/// Named sets available after `IN`.
#[derive(Debug, Clone)]
pub struct SetEnv {
    sets: BTreeMap<String, UpSet>,
}

impl Default for SetEnv {
    /// `POS` (positive integers), `NAT`, `EV`/`EVEN` and `ODD`.
    fn default() -> Self {
        let mut sets = BTreeMap::new();
        sets.insert("POS".to_string(), UpSet::positive());
        sets.insert("NAT".to_string(), UpSet::naturals());
        sets.insert("EV".to_string(), UpSet::residue_class(2, 0));
        sets.insert("EVEN".to_string(), UpSet::residue_class(2, 0));
        sets.insert("ODD".to_string(), UpSet::residue_class(2, 1));
        SetEnv { sets }
    }
}

const KEYWORDS: [&str; 9] = ["EX", "ALL", "OR", "AND", "NOT", "IN", "TRUE", "FALSE", "UP"];

impl SetEnv {
    /// Binds or rebinds `name`.
    pub fn bind(&mut self, name: &str, set: UpSet) -> Result<()> {
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || KEYWORDS.contains(&name) {
            return Err(Error::BadParameters(format!("`{name}` cannot name a set")));
        }
        self.sets.insert(name.to_string(), set);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&UpSet> {
        self.sets.get(name)
    }
}

/// Parses with the default set names.
pub fn parse_formula(text: &str) -> Result<Formula> {
    parse_formula_with(text, &SetEnv::default())
}

pub fn parse_formula_with(text: &str, env: &SetEnv) -> Result<Formula> {
    let mut p = Parser {
        src: text,
        pos: 0,
        env,
    };
    let f = p.or()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    env: &'a SetEnv,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek_word(&mut self) -> Option<&str> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        (len > 0).then(|| &rest[..len])
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek_word() == Some(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn eat(&mut self, sym: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(sym) {
            self.pos += sym.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: char) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{sym}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        let at = self.pos;
        match self.peek_word() {
            Some(w)
                if w.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
                    && !KEYWORDS.contains(&w) =>
            {
                let w = w.to_string();
                self.pos += w.len();
                Ok(w)
            }
            _ => Err(Error::parse(at.max(self.pos), format!("expected {what}"))),
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.eat_keyword("OR") {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat_keyword("AND") {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat_keyword("NOT") {
            return Ok(Formula::not(self.unary()?));
        }
        for (kw, forall) in [("EX", false), ("ALL", true)] {
            if self.eat_keyword(kw) {
                let v = self.ident("a variable")?;
                self.expect('.')?;
                let body = Box::new(self.or()?);
                return Ok(if forall {
                    Formula::Forall(v, body)
                } else {
                    Formula::Exists(v, body)
                });
            }
        }
        if self.eat('(') {
            let f = self.or()?;
            self.expect(')')?;
            return Ok(f);
        }
        if self.eat_keyword("TRUE") {
            return Ok(Formula::True);
        }
        if self.eat_keyword("FALSE") {
            return Ok(Formula::False);
        }
        self.atom()
    }

    fn operand(&mut self) -> Result<Operand> {
        if self.peek_word() == Some("0") {
            self.pos += 1;
            return Ok(Operand::Zero);
        }
        self.ident("a variable or `0`").map(Operand::Var)
    }

    fn atom(&mut self) -> Result<Formula> {
        let left = self.operand()?;
        if let Operand::Var(x) = &left {
            if self.eat('=') {
                let y = self.ident("a variable")?;
                return Ok(Formula::Eq(x.clone(), y));
            }
        }
        self.expect('-')?;
        let right = self.operand()?;
        if self.eat('>') {
            if self.peek_word() != Some("0") {
                return Err(Error::parse(self.pos, "expected `0`"));
            }
            self.pos += 1;
            return Ok(Formula::Diff(left, right, UpSet::positive()));
        }
        if !self.eat_keyword("IN") {
            return Err(Error::parse(self.pos, "expected `IN`"));
        }
        Ok(Formula::Diff(left, right, self.set()?))
    }

    fn set(&mut self) -> Result<UpSet> {
        self.skip_ws();
        let at = self.pos;
        if self.peek_word() == Some("UP") {
            let (set, used) = UpSet::parse_prefix(self.rest()).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: at + pos, msg },
                other => other,
            })?;
            self.pos += used;
            return Ok(set);
        }
        let name = self.ident("a set name or literal")?;
        match self.env.get(&name) {
            Some(set) => Ok(set.clone()),
            None => Err(Error::parse(at, format!("unknown set name `{name}`"))),
        }
    }
}

/// Intermediate result of compilation: a constant, or an automaton whose
/// coordinates are the listed variables in alphabetical order.
enum Sem {
    Const(bool),
    Auto(SyncAutomaton, Vec<String>),
}

fn arity_check(n: usize) -> Result<()> {
    if n > MAX_ARITY {
        Err(Error::ArityExceeded(n))
    } else {
        Ok(())
    }
}

/// Re-expresses `a` (coordinates `from`) over the variable list `to`,
/// which must contain every variable of `from`.
fn align(a: &SyncAutomaton, from: &[String], to: &[String]) -> Result<SyncAutomaton> {
    arity_check(to.len())?;
    let positions: Vec<usize> = from
        .iter()
        .map(|v| {
            to.iter()
                .position(|w| w == v)
                .expect("target covers source")
        })
        .collect();
    a.embed(to.len(), &positions)
}

fn merged(a: &[String], b: &[String]) -> Vec<String> {
    let set: BTreeSet<&String> = a.iter().chain(b).collect();
    set.into_iter().cloned().collect()
}

/// The binary relation `{(a, b) : a >= b, a - b ∈ set}`.
fn difference_relation(set: &UpSet) -> SyncAutomaton {
    let left = set.difference(&UpSet::singleton(0));
    StructuredBinary::new(0, vec![left], vec![UpSet::empty()], vec![set.contains(0)])
        .expect("single diagonal state")
        .to_automaton()
}

fn compile_sem(f: &Formula) -> Result<Sem> {
    Ok(match f {
        Formula::True => Sem::Const(true),
        Formula::False => Sem::Const(false),
        Formula::Eq(x, y) => {
            return compile_sem(&Formula::Diff(
                Operand::Var(x.clone()),
                Operand::Var(y.clone()),
                UpSet::singleton(0),
            ))
        }
        Formula::Diff(a, b, set) => match (a, b) {
            (Operand::Zero, Operand::Zero) => Sem::Const(set.contains(0)),
            (Operand::Var(x), Operand::Zero) => {
                Sem::Auto(SyncAutomaton::from_upset(set), vec![x.clone()])
            }
            (Operand::Zero, Operand::Var(y)) => {
                let zero = if set.contains(0) {
                    UpSet::singleton(0)
                } else {
                    UpSet::empty()
                };
                Sem::Auto(SyncAutomaton::from_upset(&zero), vec![y.clone()])
            }
            (Operand::Var(x), Operand::Var(y)) if x == y => Sem::Const(set.contains(0)),
            (Operand::Var(x), Operand::Var(y)) => {
                let rel = difference_relation(set);
                if x < y {
                    Sem::Auto(rel, vec![x.clone(), y.clone()])
                } else {
                    Sem::Auto(rel.permute(&[1, 0])?, vec![y.clone(), x.clone()])
                }
            }
        },
        Formula::Not(g) => match compile_sem(g)? {
            Sem::Const(b) => Sem::Const(!b),
            Sem::Auto(a, vars) => Sem::Auto(a.complement(), vars),
        },
        Formula::And(g, h) | Formula::Or(g, h) => {
            let is_and = matches!(f, Formula::And(..));
            match (compile_sem(g)?, compile_sem(h)?) {
                (Sem::Const(a), Sem::Const(b)) => Sem::Const(if is_and { a && b } else { a || b }),
                (Sem::Const(c), other) | (other, Sem::Const(c)) => match (is_and, c) {
                    (true, true) | (false, false) => other,
                    (true, false) => Sem::Const(false),
                    (false, true) => Sem::Const(true),
                },
                (Sem::Auto(a, va), Sem::Auto(b, vb)) => {
                    let vars = merged(&va, &vb);
                    let (a, b) = (align(&a, &va, &vars)?, align(&b, &vb, &vars)?);
                    let out = if is_and {
                        a.intersection(&b)?
                    } else {
                        a.union(&b)?
                    };
                    Sem::Auto(out, vars)
                }
            }
        }
        Formula::Exists(x, g) => match compile_sem(g)? {
            Sem::Auto(a, vars) => match vars.iter().position(|v| v == x) {
                None => Sem::Auto(a, vars),
                Some(_) if vars.len() == 1 => Sem::Const(!a.is_empty()),
                Some(i) => {
                    let rest = vars.iter().filter(|v| *v != x).cloned().collect();
                    Sem::Auto(a.project(i + 1)?, rest)
                }
            },
            c => c,
        },
        Formula::Forall(x, g) => {
            let dual = Formula::not(Formula::Exists(
                x.clone(),
                Box::new(Formula::not((**g).clone())),
            ));
            return compile_sem(&dual);
        }
    })
}

/// Compiles `f` over `vars` (default: its free variables in alphabetical
/// order). A formula with no variables compiles to the unary automaton of
/// `N` or of the empty set. Returns the automaton and its coordinate names.
pub fn compile_formula(
    f: &Formula,
    vars: Option<&[String]>,
) -> Result<(SyncAutomaton, Vec<String>)> {
    let free = f.free_vars();
    let vars: Vec<String> = match vars {
        Some(v) => {
            if let Some(missing) = free.iter().find(|x| !v.contains(x)) {
                return Err(Error::BadParameters(format!(
                    "free variable `{missing}` is not listed"
                )));
            }
            if v.iter().collect::<BTreeSet<_>>().len() != v.len() {
                return Err(Error::BadParameters("variable listed twice".into()));
            }
            v.to_vec()
        }
        None => free,
    };
    arity_check(vars.len())?;
    let arity = vars.len().max(1);
    let automaton = match compile_sem(f)? {
        Sem::Const(true) => SyncAutomaton::full(arity),
        Sem::Const(false) => SyncAutomaton::empty(arity),
        Sem::Auto(a, used) => align(&a, &used, &vars)?,
    };
    Ok((automaton, vars))
}

/// Coordinate names `x1, ..., xn` used by [`automaton_to_formula`].
pub fn coordinate_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn conjunction(parts: Vec<Formula>) -> Formula {
    parts
        .into_iter()
        .reduce(Formula::and)
        .unwrap_or(Formula::True)
}

/// A quantifier-free formula over `x1..xn` defining the relation of `a`.
///
/// Every accepted word is `e(I_1)^m_1 ... e(I_r)^m_r` for a strictly
/// decreasing chain of supports; coordinates leaving the support after
/// block `k` all equal `m_1 + ... + m_k`. One disjunct is emitted per
/// support chain and sequence of block-boundary states.
pub fn automaton_to_formula(a: &SyncAutomaton) -> Result<Formula> {
    let n = a.arity();
    arity_check(n)?;
    let a = a.canonical();
    let names = coordinate_names(n);
    let full = Letter::full(n).mask();
    let singleton_zero = UpSet::singleton(0);

    let mut disjuncts = Vec::new();
    if a.is_final(a.initial()) {
        let zero = names
            .iter()
            .map(|x| {
                Formula::Diff(
                    Operand::Var(x.clone()),
                    Operand::Zero,
                    singleton_zero.clone(),
                )
            })
            .collect();
        disjuncts.push(conjunction(zero));
    }

    // depth-first over (support chain, boundary states)
    struct Frame {
        state: usize,
        support: u8,
        blocks: Vec<(u8, UpSet)>,
    }
    let mut stack = vec![Frame {
        state: a.initial(),
        support: full,
        blocks: Vec::new(),
    }];
    while let Some(frame) = stack.pop() {
        let mut sub = frame.support;
        // nonempty subsets of the current support; the first block may use it whole
        loop {
            let usable = sub != 0 && (frame.blocks.is_empty() || sub != frame.support);
            if usable {
                let letter = Letter(sub);
                for target in 0..a.num_states() {
                    let lengths = a
                        .unary_lengths(Some(frame.state), letter, |q| q == Some(target))
                        .difference(&singleton_zero);
                    if lengths.is_empty() {
                        continue;
                    }
                    let mut blocks = frame.blocks.clone();
                    blocks.push((sub, lengths));
                    if a.is_final(target) {
                        disjuncts.push(shape_formula(&names, &blocks));
                    }
                    stack.push(Frame {
                        state: target,
                        support: sub,
                        blocks,
                    });
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & frame.support;
        }
    }
    Ok(disjuncts
        .into_iter()
        .reduce(Formula::or)
        .unwrap_or(Formula::False))
}

fn shape_formula(names: &[String], blocks: &[(u8, UpSet)]) -> Formula {
    let mut parts = Vec::new();
    let first = blocks[0].0;
    for (i, x) in names.iter().enumerate() {
        if first & (1 << i) == 0 {
            parts.push(Formula::Diff(
                Operand::Var(x.clone()),
                Operand::Zero,
                UpSet::singleton(0),
            ));
        }
    }
    let mut prev = Operand::Zero;
    for (k, (support, lengths)) in blocks.iter().enumerate() {
        let next = blocks.get(k + 1).map_or(0, |b| b.0);
        let leaving: Vec<usize> = (0..names.len())
            .filter(|&i| support & (1 << i) != 0 && next & (1 << i) == 0)
            .collect();
        // nonempty because the supports strictly decrease and end at the last block
        let rep = Operand::Var(names[leaving[0]].clone());
        parts.push(Formula::Diff(rep.clone(), prev, lengths.clone()));
        for &i in &leaving[1..] {
            parts.push(Formula::Eq(names[i].clone(), names[leaving[0]].clone()));
        }
        prev = rep;
    }
    conjunction(parts)
}
