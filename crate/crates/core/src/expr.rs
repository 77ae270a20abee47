//! Text syntax for groups, elements, characters, and sequences.
//!
//! ```text
//! group    := term ("x" term)*                 at most three terms
//! term     := "Z(" n ("," n)* ")" ["^" pow] ("+" "Z(" n ")")*
//!           | "Z" | "T" ["^" pow] | "R" | "Q_" p | "(" group ")"
//! pow      := n | "N"                           any power makes the group symbolic
//! sequence := "factorial" | "harmonic" | "zenum" | "zero"
//!           | "geom(" rat "," n ")" | "affgeom(" rat "," rat "," n ")"
//!           | "rec([" ints "],[" ints "])" | "periodic([" chars "];[" chars "])"
//!           | "interleave(" seq "," seq ")" | "tail(" seq "," n ")" | "pair(" seq "," seq ")"
//! value    := rat | "(" n ("," n)* ")" | "<" value ";" value ">"
//!           | "phi" | "sqrt(" n ")" | "root([" ints "]," rat "," rat ")"
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{fmt_rat, int_rat};
use crate::error::{Error, Result};
use crate::groups::circle::{CertifiedInterval, CirclePoint, CircleValue, IntervalSource};
use crate::groups::finite::{fmt_tuple, FiniteAbelian};
use crate::groups::padic::PAdicRational;
use crate::groups::{CompactBase, CompactFactor, Character, Element, GroupDescriptor, Multiplicity};
use crate::sequences::{CharSequence, Generator};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { column, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "()[],;/+-^<>*".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(err(col, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, end: src.chars().count() + 1 })
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(err(self.col(), format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(err(self.col(), "expected a name")),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(err(self.col(), "unexpected trailing input"))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let neg = self.eat_sym('-');
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(err(self.col(), "expected an integer")),
        }
    }

    fn small(&mut self) -> Result<u64> {
        let col = self.col();
        let n = self.integer()?;
        u64::try_from(n).map_err(|_| err(col, "expected a nonnegative machine-size integer"))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let n = self.integer()?;
        if self.eat_sym('/') {
            let col = self.col();
            let d = self.integer()?;
            if d.is_zero() {
                return Err(err(col, "zero denominator"));
            }
            Ok(BigRational::new(n, d))
        } else {
            Ok(int_rat(n))
        }
    }

    fn int_list(&mut self) -> Result<Vec<BigInt>> {
        self.expect_sym('[')?;
        let mut out = Vec::new();
        if !self.eat_sym(']') {
            loop {
                out.push(self.integer()?);
                if self.eat_sym(']') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        Ok(out)
    }

    // ---- groups ----

    fn group(&mut self) -> Result<GroupDescriptor> {
        let col = self.col();
        let mut terms = vec![self.group_term()?];
        while matches!(self.peek(), Some(Tok::Ident(s)) if s == "x") {
            self.pos += 1;
            terms.push(self.group_term()?);
        }
        if terms.len() > 3 {
            return Err(err(col, "at most three product factors are supported"));
        }
        if terms.iter().any(|t| t.symbolic) {
            let mut factors = Vec::new();
            for t in terms {
                factors.extend(t.into_compact().map_err(|m| err(col, m))?);
            }
            let g = GroupDescriptor::SymbolicCompact(factors);
            g.validate().map_err(|e| err(col, e.to_string()))?;
            return Ok(g);
        }
        let mut it = terms.into_iter().map(|t| t.group);
        let mut g = it.next().expect("one term");
        for next in it {
            g = GroupDescriptor::Product(Box::new(g), Box::new(next));
        }
        g.validate().map_err(|e| err(col, e.to_string()))?;
        Ok(g)
    }

    fn power(&mut self) -> Result<Option<Multiplicity>> {
        if !self.eat_sym('^') {
            return Ok(None);
        }
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "N") {
            self.pos += 1;
            return Ok(Some(Multiplicity::Countable));
        }
        let col = self.col();
        let n = self.small()?;
        if n == 0 {
            return Err(err(col, "power must be at least 1"));
        }
        Ok(Some(Multiplicity::Finite(n)))
    }

    fn group_term(&mut self) -> Result<Term> {
        let col = self.col();
        if self.eat_sym('(') {
            let g = self.group()?;
            self.expect_sym(')')?;
            let symbolic = matches!(g, GroupDescriptor::SymbolicCompact(_));
            return Ok(Term { group: g, power: None, symbolic });
        }
        let name = self.ident()?;
        match name.as_str() {
            "Z" if self.peek_sym('(') => {
                let mut orders = self.paren_orders()?;
                let power = self.power()?;
                while self.eat_sym('+') {
                    let c = self.col();
                    if self.ident()? != "Z" {
                        return Err(err(c, "expected Z(n) after '+'"));
                    }
                    orders.extend(self.paren_orders()?);
                }
                let g = FiniteAbelian::from_cyclic_orders(&orders).map_err(|e| err(col, e.to_string()))?;
                Ok(Term { group: GroupDescriptor::Finite(g), power, symbolic: power.is_some() })
            }
            "Z" => Ok(Term::plain(GroupDescriptor::Integers)),
            "T" => {
                let power = self.power()?;
                Ok(Term { group: GroupDescriptor::Circle, power, symbolic: power.is_some() })
            }
            "R" => Ok(Term::plain(GroupDescriptor::Reals)),
            _ if name.starts_with("Q_") => {
                let p: u64 = name[2..].parse().map_err(|_| err(col, "expected Q_p with p prime"))?;
                Ok(Term::plain(GroupDescriptor::padic(p).map_err(|e| err(col, e.to_string()))?))
            }
            _ => Err(err(col, format!("unknown group '{name}'"))),
        }
    }

    fn paren_orders(&mut self) -> Result<Vec<u64>> {
        self.expect_sym('(')?;
        let mut out = vec![self.small()?];
        while self.eat_sym(',') {
            out.push(self.small()?);
        }
        self.expect_sym(')')?;
        Ok(out)
    }

    // ---- values ----

    fn circle_value(&mut self) -> Result<CircleValue> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "phi" => Ok(CircleValue::Interval(CertifiedInterval::golden_ratio())),
                    "sqrt" => {
                        self.expect_sym('(')?;
                        let n = self.small()?;
                        self.expect_sym(')')?;
                        CertifiedInterval::sqrt(n)
                            .map(CircleValue::Interval)
                            .ok_or_else(|| err(col, format!("sqrt({n}) is rational; write it as an integer")))
                    }
                    "root" => {
                        self.expect_sym('(')?;
                        let poly = self.int_list()?;
                        self.expect_sym(',')?;
                        let lo = self.rational()?;
                        self.expect_sym(',')?;
                        let hi = self.rational()?;
                        self.expect_sym(')')?;
                        CertifiedInterval::root(poly, lo, hi)
                            .map(CircleValue::Interval)
                            .ok_or_else(|| err(col, "root bounds must bracket a sign change"))
                    }
                    _ => Err(err(col, format!("unknown value '{name}'"))),
                }
            }
            _ => Ok(CircleValue::Exact(CirclePoint::new(self.rational()?))),
        }
    }

    fn residues(&mut self, g: &FiniteAbelian) -> Result<Vec<u64>> {
        let col = self.col();
        let raw: Vec<BigInt> = if self.eat_sym('(') {
            let mut v = vec![self.integer()?];
            while self.eat_sym(',') {
                v.push(self.integer()?);
            }
            self.expect_sym(')')?;
            v
        } else {
            vec![self.integer()?]
        };
        if raw.len() != g.rank() {
            return Err(err(col, format!("{} expects {} coordinates", g, g.rank())));
        }
        Ok(raw
            .iter()
            .zip(g.factors())
            .map(|(a, &d)| {
                let r = a % BigInt::from(d);
                let r = if r < BigInt::zero() { r + BigInt::from(d) } else { r };
                u64::try_from(r).expect("residue below modulus")
            })
            .collect())
    }

    fn pair_of<T>(
        &mut self,
        a: &GroupDescriptor,
        b: &GroupDescriptor,
        mut f: impl FnMut(&mut Self, &GroupDescriptor) -> Result<T>,
    ) -> Result<(T, T)> {
        self.expect_sym('<')?;
        let x = f(self, a)?;
        self.expect_sym(';')?;
        let y = f(self, b)?;
        self.expect_sym('>')?;
        Ok((x, y))
    }

    fn element(&mut self, group: &GroupDescriptor) -> Result<Element> {
        let col = self.col();
        Ok(match group {
            GroupDescriptor::Finite(g) => Element::Residues(self.residues(g)?),
            GroupDescriptor::Integers => Element::Integer(self.integer()?),
            GroupDescriptor::Circle => Element::Circle(self.circle_value()?),
            GroupDescriptor::Reals => Element::Real(self.rational()?),
            GroupDescriptor::PAdic(p) => {
                Element::PAdic(PAdicRational::new(*p, self.rational()?).map_err(|e| err(col, e.to_string()))?)
            }
            GroupDescriptor::Product(a, b) => {
                let (x, y) = self.pair_of(a, b, |s, g| s.element(g))?;
                Element::pair(x, y)
            }
            GroupDescriptor::SymbolicCompact(_) => {
                return Err(err(col, "symbolic groups have no concrete elements"))
            }
        })
    }

    fn character(&mut self, group: &GroupDescriptor) -> Result<Character> {
        let col = self.col();
        Ok(match group {
            GroupDescriptor::Finite(g) => Character::Residues(self.residues(g)?),
            GroupDescriptor::Integers => Character::Rotation(self.circle_value()?),
            GroupDescriptor::Circle => Character::Multiplier(self.integer()?),
            GroupDescriptor::Reals => Character::Scale(self.rational()?),
            GroupDescriptor::PAdic(p) => {
                Character::PAdic(PAdicRational::new(*p, self.rational()?).map_err(|e| err(col, e.to_string()))?)
            }
            GroupDescriptor::Product(a, b) => {
                let (x, y) = self.pair_of(a, b, |s, g| s.character(g))?;
                Character::pair(x, y)
            }
            GroupDescriptor::SymbolicCompact(_) => {
                return Err(err(col, "symbolic groups have no concrete characters"))
            }
        })
    }

    fn char_list(&mut self, group: &GroupDescriptor) -> Result<Vec<Character>> {
        self.expect_sym('[')?;
        let mut out = Vec::new();
        if !self.eat_sym(']') {
            loop {
                out.push(self.character(group)?);
                if self.eat_sym(']') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        Ok(out)
    }

    // ---- sequences ----

    fn sequence(&mut self, group: &GroupDescriptor) -> Result<CharSequence> {
        let col = self.col();
        let name = self.ident()?;
        let wrap = |r: Result<CharSequence>| r.map_err(|e| err(col, e.to_string()));
        match name.as_str() {
            "factorial" => wrap(CharSequence::new(group.clone(), Generator::Factorial)),
            "harmonic" => wrap(CharSequence::new(group.clone(), Generator::Harmonic)),
            "zenum" => wrap(CharSequence::new(group.clone(), Generator::IntegerEnumeration)),
            "zero" => wrap(CharSequence::zero(group.clone())),
            "geom" => {
                self.expect_sym('(')?;
                let c = self.rational()?;
                self.expect_sym(',')?;
                let q = self.integer()?;
                self.expect_sym(')')?;
                wrap(CharSequence::geometric(group.clone(), c, q))
            }
            "affgeom" => {
                self.expect_sym('(')?;
                let o = self.rational()?;
                self.expect_sym(',')?;
                let s = self.rational()?;
                self.expect_sym(',')?;
                let q = self.integer()?;
                self.expect_sym(')')?;
                wrap(CharSequence::new(
                    group.clone(),
                    Generator::AffineGeometric { offset: o, scale: s, ratio: q },
                ))
            }
            "rec" => {
                self.expect_sym('(')?;
                let coeffs = self.int_list()?;
                self.expect_sym(',')?;
                let init = self.int_list()?;
                self.expect_sym(')')?;
                wrap(CharSequence::new(group.clone(), Generator::Recurrence { coeffs, init }))
            }
            "periodic" => {
                self.expect_sym('(')?;
                let prefix = self.char_list(group)?;
                self.expect_sym(';')?;
                let cycle = self.char_list(group)?;
                self.expect_sym(')')?;
                wrap(CharSequence::periodic(group.clone(), prefix, cycle))
            }
            "interleave" => {
                self.expect_sym('(')?;
                let u = self.sequence(group)?;
                self.expect_sym(',')?;
                let v = self.sequence(group)?;
                self.expect_sym(')')?;
                wrap(CharSequence::interleave(&u, &v))
            }
            "tail" => {
                self.expect_sym('(')?;
                let u = self.sequence(group)?;
                self.expect_sym(',')?;
                let m = self.small()?;
                self.expect_sym(')')?;
                Ok(u.tail(m))
            }
            "pair" => {
                let GroupDescriptor::Product(a, b) = group else {
                    return Err(err(col, format!("pair(…) needs a product group, not {group}")));
                };
                self.expect_sym('(')?;
                let u = self.sequence(a)?;
                self.expect_sym(',')?;
                let w = self.sequence(b)?;
                self.expect_sym(')')?;
                wrap(CharSequence::pair(&u, &w))
            }
            _ => Err(err(col, format!("unknown sequence '{name}'"))),
        }
    }
}

struct Term {
    group: GroupDescriptor,
    power: Option<Multiplicity>,
    symbolic: bool,
}

impl Term {
    fn plain(group: GroupDescriptor) -> Self {
        Term { group, power: None, symbolic: false }
    }

    fn into_compact(self) -> std::result::Result<Vec<CompactFactor>, String> {
        let mult = self.power.unwrap_or(Multiplicity::Finite(1));
        match self.group {
            GroupDescriptor::SymbolicCompact(fs) if self.power.is_none() => Ok(fs),
            GroupDescriptor::Circle => Ok(vec![CompactFactor { base: CompactBase::Circle, multiplicity: mult }]),
            GroupDescriptor::Finite(g) => {
                if self.power.is_some() && g.rank() != 1 {
                    return Err("powers apply to a single cyclic factor".into());
                }
                Ok(g.factors()
                    .iter()
                    .map(|&d| CompactFactor { base: CompactBase::Cyclic(d), multiplicity: mult })
                    .collect())
            }
            other => Err(format!("{other} cannot appear in a symbolic compact product")),
        }
    }
}

pub fn parse_group(src: &str) -> Result<GroupDescriptor> {
    let mut p = Parser::new(src)?;
    let g = p.group()?;
    p.finish()?;
    Ok(g)
}

pub fn parse_sequence(group: &GroupDescriptor, src: &str) -> Result<CharSequence> {
    let mut p = Parser::new(src)?;
    let s = p.sequence(group)?;
    p.finish()?;
    Ok(s)
}

pub fn parse_element(group: &GroupDescriptor, src: &str) -> Result<Element> {
    let mut p = Parser::new(src)?;
    let x = p.element(group)?;
    p.finish()?;
    Ok(x)
}

pub fn parse_character(group: &GroupDescriptor, src: &str) -> Result<Character> {
    let mut p = Parser::new(src)?;
    let x = p.character(group)?;
    p.finish()?;
    Ok(x)
}

/// Rational written for the grammar.
pub fn parse_rational(src: &str) -> Result<BigRational> {
    let mut p = Parser::new(src)?;
    let r = p.rational()?;
    p.finish()?;
    Ok(r)
}

fn fmt_ints(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(BigInt::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Grammar form of a circle value; derived intervals fall back to their
/// current bounds, which do not parse.
pub fn fmt_circle_value(v: &CircleValue) -> String {
    match v {
        CircleValue::Exact(p) => p.to_string(),
        CircleValue::Interval(i) => {
            if *i == CertifiedInterval::golden_ratio() {
                return "phi".into();
            }
            if let IntervalSource::Root { poly } = i.source() {
                if poly.len() == 3 && poly[1].is_zero() && poly[2].is_one() {
                    if let Ok(n) = u64::try_from(-&poly[0]) {
                        if CertifiedInterval::sqrt(n).as_ref() == Some(i) {
                            return format!("sqrt({n})");
                        }
                    }
                }
                return format!("root({},{},{})", fmt_ints(poly), fmt_rat(i.lower()), fmt_rat(i.upper()));
            }
            i.to_string()
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Character::Multiplier(n) => write!(f, "{n}"),
            Character::Rotation(v) => f.write_str(&fmt_circle_value(v)),
            Character::Residues(c) => f.write_str(&fmt_tuple(c)),
            Character::Scale(r) => f.write_str(&fmt_rat(r)),
            Character::PAdic(y) => write!(f, "{y}"),
            Character::Pair(a, b) => write!(f, "<{a};{b}>"),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Residues(x) => f.write_str(&fmt_tuple(x)),
            Element::Integer(n) => write!(f, "{n}"),
            Element::Circle(v) => f.write_str(&fmt_circle_value(v)),
            Element::Real(r) => f.write_str(&fmt_rat(r)),
            Element::PAdic(y) => write!(f, "{y}"),
            Element::Pair(a, b) => write!(f, "<{a};{b}>"),
        }
    }
}

fn fmt_chars(v: &[Character]) -> String {
    let parts: Vec<String> = v.iter().map(Character::to_string).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for CharSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.generator() {
            Generator::Periodic { prefix, cycle } => {
                write!(f, "periodic({};{})", fmt_chars(prefix), fmt_chars(cycle))
            }
            Generator::Recurrence { coeffs, init } => write!(f, "rec({},{})", fmt_ints(coeffs), fmt_ints(init)),
            Generator::Factorial => f.write_str("factorial"),
            Generator::Geometric { coeff, ratio } => write!(f, "geom({},{ratio})", fmt_rat(coeff)),
            Generator::AffineGeometric { offset, scale, ratio } => {
                write!(f, "affgeom({},{},{ratio})", fmt_rat(offset), fmt_rat(scale))
            }
            Generator::Harmonic => f.write_str("harmonic"),
            Generator::IntegerEnumeration => f.write_str("zenum"),
            Generator::Interleave(u, v) => write!(f, "interleave({u},{v})"),
            Generator::Tail(inner, m) => write!(f, "tail({inner},{m})"),
            Generator::Pair(u, w) => write!(f, "pair({u},{w})"),
        }
    }
}
