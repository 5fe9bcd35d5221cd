//! Ultimately periodic subsets of the naturals.
//!
//! An [`UpSet`] is given by a transient `t`, a period `p >= 1`, a head (the
//! members below `t`) and a residue pattern: for `n >= t`, `n` is a member
//! iff `n mod p` is one of the residues. Every constructor returns the
//! canonical representation (least period, then least transient), so
//! structural equality is set equality.
//!
//! These are exactly the regular unary languages; they carry the distance
//! sets of binary automata, supports of relations and atom sets of formulas.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UpSet {
    transient: u64,
    period: u64,
    head: Vec<bool>,
    residues: Vec<bool>,
}

/// Boolean operation for [`UpSet::combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
    /// Complement of the first operand; the second is ignored.
    ComplementOfFirst,
}

/// Shape of a set as reported by [`UpSet::classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Empty,
    /// Finite and nonempty, with its elements in increasing order.
    Finite(Vec<u64>),
    /// Cofinite, with the (possibly empty) list of missing elements.
    Cofinite(Vec<u64>),
    /// Infinite with an infinite complement.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub shape: Shape,
    pub min_element: Option<u64>,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl UpSet {
    /// Builds a set from explicit fields. Head elements must lie below `t`
    /// and residues below `p`.
    pub fn new(
        transient: u64,
        period: u64,
        head: impl IntoIterator<Item = u64>,
        residues: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        if period == 0 {
            return Err(Error::BadParameters("period must be at least 1".into()));
        }
        let mut h = vec![false; transient as usize];
        for n in head {
            if n >= transient {
                return Err(Error::BadParameters(format!(
                    "head element {n} is not below the transient {transient}"
                )));
            }
            h[n as usize] = true;
        }
        let mut r = vec![false; period as usize];
        for n in residues {
            if n >= period {
                return Err(Error::BadParameters(format!(
                    "residue {n} is not below the period {period}"
                )));
            }
            r[n as usize] = true;
        }
        Ok(Self::canonical(period, h, r))
    }

    /// Builds the set `{n : member(n)}` where `member` is known to satisfy
    /// `member(n) == member(n + period)` for all `n >= transient`.
    pub fn from_fn(transient: u64, period: u64, member: impl Fn(u64) -> bool) -> Self {
        assert!(period >= 1, "period must be positive");
        let head = (0..transient).map(&member).collect();
        let offset = transient % period;
        let residues = (0..period)
            .map(|r| member(transient + (r + period - offset) % period))
            .collect();
        Self::canonical(period, head, residues)
    }

    fn canonical(period: u64, head: Vec<bool>, residues: Vec<bool>) -> Self {
        let p = period as usize;
        let mut best = p;
        for d in 1..p {
            if p.is_multiple_of(d) && (0..p).all(|r| residues[r] == residues[(r + d) % p]) {
                best = d;
                break;
            }
        }
        let mut residues = residues;
        residues.truncate(best);
        let mut head = head;
        while let Some(&last) = head.last() {
            let n = head.len() - 1;
            if last == residues[n % best] {
                head.pop();
            } else {
                break;
            }
        }
        UpSet {
            transient: head.len() as u64,
            period: best as u64,
            head,
            residues,
        }
    }

    pub fn empty() -> Self {
        UpSet {
            transient: 0,
            period: 1,
            head: vec![],
            residues: vec![false],
        }
    }

    pub fn naturals() -> Self {
        UpSet {
            transient: 0,
            period: 1,
            head: vec![],
            residues: vec![true],
        }
    }

    /// The positive naturals.
    pub fn positive() -> Self {
        UpSet {
            transient: 1,
            period: 1,
            head: vec![false],
            residues: vec![true],
        }
    }

    /// `{n : n mod modulus == residue}`.
    pub fn residue_class(modulus: u64, residue: u64) -> Self {
        Self::from_fn(0, modulus, |n| n % modulus == residue % modulus)
    }

    pub fn finite(elements: impl IntoIterator<Item = u64>) -> Self {
        let elements: Vec<u64> = elements.into_iter().collect();
        let t = elements.iter().map(|&n| n + 1).max().unwrap_or(0);
        let mut head = vec![false; t as usize];
        for n in elements {
            head[n as usize] = true;
        }
        Self::canonical(1, head, vec![false])
    }

    pub fn singleton(n: u64) -> Self {
        Self::finite([n])
    }

    pub fn transient(&self) -> u64 {
        self.transient
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Head members, ascending.
    pub fn head(&self) -> impl Iterator<Item = u64> + '_ {
        bits(&self.head)
    }

    /// Residues modulo the period, ascending.
    pub fn residues(&self) -> impl Iterator<Item = u64> + '_ {
        bits(&self.residues)
    }

    pub fn contains(&self, n: u64) -> bool {
        if n < self.transient {
            self.head[n as usize]
        } else {
            self.residues[(n % self.period) as usize]
        }
    }

    pub fn combine(&self, other: &UpSet, op: SetOp) -> UpSet {
        if op == SetOp::ComplementOfFirst {
            return UpSet::from_fn(self.transient, self.period, |n| !self.contains(n));
        }
        let t = self.transient.max(other.transient);
        let p = lcm(self.period, other.period);
        UpSet::from_fn(t, p, |n| {
            let (a, b) = (self.contains(n), other.contains(n));
            match op {
                SetOp::Union => a || b,
                SetOp::Intersection => a && b,
                SetOp::Difference => a && !b,
                SetOp::ComplementOfFirst => unreachable!(),
            }
        })
    }

    pub fn union(&self, other: &UpSet) -> UpSet {
        self.combine(other, SetOp::Union)
    }

    pub fn intersection(&self, other: &UpSet) -> UpSet {
        self.combine(other, SetOp::Intersection)
    }

    pub fn difference(&self, other: &UpSet) -> UpSet {
        self.combine(other, SetOp::Difference)
    }

    pub fn complement(&self) -> UpSet {
        self.combine(self, SetOp::ComplementOfFirst)
    }

    pub fn is_empty(&self) -> bool {
        !self.head.iter().any(|&b| b) && !self.residues.iter().any(|&b| b)
    }

    pub fn is_finite(&self) -> bool {
        !self.residues.iter().any(|&b| b)
    }

    pub fn is_cofinite(&self) -> bool {
        self.residues.iter().all(|&b| b)
    }

    pub fn is_naturals(&self) -> bool {
        *self == UpSet::naturals()
    }

    pub fn min_element(&self) -> Option<u64> {
        if let Some(n) = self.head().next() {
            return Some(n);
        }
        // the first periodic position at or after the transient
        (self.transient..self.transient + self.period).find(|&n| self.contains(n))
    }

    pub fn classify(&self) -> Classification {
        let shape = if self.is_empty() {
            Shape::Empty
        } else if self.is_finite() {
            Shape::Finite(self.head().collect())
        } else if self.is_cofinite() {
            Shape::Cofinite(self.complement().head().collect())
        } else {
            Shape::Mixed
        };
        Classification {
            shape,
            min_element: self.min_element(),
        }
    }

    /// Members in increasing order (infinite unless the set is finite).
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let finite = self.is_finite();
        let bound = if finite { self.transient } else { u64::MAX };
        (0..bound).filter(move |&n| self.contains(n))
    }

    /// Parses a literal at the start of `input` and returns it with the
    /// number of bytes consumed. Fields may be separated by `;` or `,`.
    pub fn parse_prefix(input: &str) -> Result<(UpSet, usize)> {
        let mut p = LiteralParser { src: input, pos: 0 };
        let set = p.literal()?;
        Ok((set, p.pos))
    }
}

fn bits(v: &[bool]) -> impl Iterator<Item = u64> + '_ {
    v.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
}

fn write_list(f: &mut fmt::Formatter<'_>, it: impl Iterator<Item = u64>) -> fmt::Result {
    f.write_str("{")?;
    for (i, n) in it.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{n}")?;
    }
    f.write_str("}")
}

impl fmt::Display for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UP(t={};p={};head=", self.transient, self.period)?;
        write_list(f, self.head())?;
        f.write_str(";res=")?;
        write_list(f, self.residues())?;
        f.write_str(")")
    }
}

impl fmt::Debug for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for UpSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (set, used) = UpSet::parse_prefix(s)?;
        if !s[used..].trim().is_empty() {
            return Err(Error::parse(used, "trailing input after set literal"));
        }
        Ok(set)
    }
}

struct LiteralParser<'a> {
    src: &'a str,
    pos: usize,
}

impl LiteralParser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{tok}`")))
        }
    }

    fn separator(&mut self) -> Result<()> {
        self.skip_ws();
        match self.src[self.pos..].chars().next() {
            Some(';') | Some(',') => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::parse(self.pos, "expected `;`")),
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.src.len() - start);
        if len == 0 {
            return Err(Error::parse(start, "expected a natural number"));
        }
        self.pos += len;
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::parse(start, "number out of range"))
    }

    fn list(&mut self) -> Result<Vec<u64>> {
        self.expect("{")?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.src[self.pos..].starts_with('}') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            self.skip_ws();
            match self.src[self.pos..].chars().next() {
                Some(',') => self.pos += 1,
                Some('}') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(Error::parse(self.pos, "expected `,` or `}`")),
            }
        }
    }

    fn literal(&mut self) -> Result<UpSet> {
        let start = self.pos;
        self.expect("UP")?;
        self.expect("(")?;
        self.expect("t")?;
        self.expect("=")?;
        let t = self.number()?;
        self.separator()?;
        self.expect("p")?;
        self.expect("=")?;
        let p = self.number()?;
        self.separator()?;
        self.expect("head")?;
        self.expect("=")?;
        let head = self.list()?;
        self.separator()?;
        self.expect("res")?;
        self.expect("=")?;
        let res = self.list()?;
        self.expect(")")?;
        UpSet::new(t, p, head, res).map_err(|e| match e {
            Error::BadParameters(msg) => Error::parse(start, msg),
            other => other,
        })
    }
}
