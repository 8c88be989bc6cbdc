//! Group expressions such as `(C3 rx C4) x C5`.
//!
//! ```text
//! expr := semi { "x" semi }
//! semi := atom [ "rx" atom ]
//! atom := C<n> | D<n> | Q<n> | SD<n> | M(<n>) | E(<p>,<n>) | Pstar(<p>,<n>,<q>,<k>)
//!       | A4 | A5 | S3 | S4 | SL23 | CPD8C4 | "(" expr ")"
//! ```
//!
//! Case is ignored, and so is whitespace between tokens. The integer after D, Q, SD and M is the group order.

use std::fmt;

use psi_core::constructions::{
    alt, central_product_d8_c4, cyclic, dihedral, elementary_abelian, generalized_quaternion, modular_group,
    p_star_with, rtimes_iota_with, semidihedral, sl23, sym,
};
use psi_core::numeric::prime_power;
use psi_core::{FiniteGroup, Limits};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Cyclic(u64),
    Dihedral(u64),
    Quaternion(u64),
    Semidihedral(u64),
    Modular(u64),
    Elementary { p: u64, n: u64 },
    PStar { p: u64, n: u64, q: u64, k: u64 },
    A4,
    A5,
    S3,
    S4,
    Sl23,
    Cpd8c4,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Atom(Atom),
    Direct(Box<GroupExpr>, Box<GroupExpr>),
    /// `left ⋊ι right`: the generator of the cyclic right side inverts the abelian left side.
    Rx(Box<GroupExpr>, Box<GroupExpr>),
}

impl GroupExpr {
    pub fn direct(a: GroupExpr, b: GroupExpr) -> Self {
        GroupExpr::Direct(Box::new(a), Box::new(b))
    }

    pub fn rx(a: GroupExpr, b: GroupExpr) -> Self {
        GroupExpr::Rx(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Cyclic(n) => write!(f, "C{n}"),
            Atom::Dihedral(n) => write!(f, "D{n}"),
            Atom::Quaternion(n) => write!(f, "Q{n}"),
            Atom::Semidihedral(n) => write!(f, "SD{n}"),
            Atom::Modular(n) => write!(f, "M({n})"),
            Atom::Elementary { p, n } => write!(f, "E({p},{n})"),
            Atom::PStar { p, n, q, k } => write!(f, "Pstar({p},{n},{q},{k})"),
            Atom::A4 => f.write_str("A4"),
            Atom::A5 => f.write_str("A5"),
            Atom::S3 => f.write_str("S3"),
            Atom::S4 => f.write_str("S4"),
            Atom::Sl23 => f.write_str("SL23"),
            Atom::Cpd8c4 => f.write_str("CPD8C4"),
        }
    }
}

/// Prints with the fewest parentheses that reparse to the same tree.
impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Atom(a) => write!(f, "{a}"),
            GroupExpr::Direct(a, b) => {
                write!(f, "{a} x ")?;
                match **b {
                    GroupExpr::Direct(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            GroupExpr::Rx(a, b) => {
                let side = |e: &GroupExpr| match e {
                    GroupExpr::Atom(_) => e.to_string(),
                    _ => format!("({e})"),
                };
                write!(f, "{} rx {}", side(a), side(b))
            }
        }
    }
}

/// Upper-cased input with whitespace removed, keeping byte offsets into the original.
///
/// Each entry records whether whitespace preceded it, so spaces separate tokens
/// but never split a number or keyword.
struct Parser {
    chars: Vec<(usize, u8, bool)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let mut chars = Vec::new();
        let mut gap = false;
        for (i, c) in text.char_indices() {
            if c.is_whitespace() {
                gap = true;
                continue;
            }
            chars.push((i, if c.is_ascii() { c.to_ascii_uppercase() as u8 } else { 0 }, gap));
            gap = false;
        }
        Parser { chars, pos: 0, len: text.len() }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(i, _, _)| i)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(CliError::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.chars.get(self.pos).map(|&(_, c, _)| c)
    }

    fn gap(&self) -> bool {
        self.chars.get(self.pos).is_some_and(|&(_, _, g)| g)
    }

    fn at(&self, word: &str) -> bool {
        let w = word.as_bytes();
        self.chars.len() - self.pos >= w.len()
            && self.chars[self.pos..self.pos + w.len()]
                .iter()
                .zip(w)
                .enumerate()
                .all(|(i, (c, b))| c.1 == *b && (i == 0 || !c.2))
    }

    fn eat(&mut self, word: &str) -> bool {
        let hit = self.at(word);
        if hit {
            self.pos += word.len();
        }
        hit
    }

    fn expect(&mut self, word: &str) -> Result<()> {
        if self.eat(word) {
            Ok(())
        } else {
            self.error(format!("expected {word:?}"))
        }
    }

    fn int(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(c @ b'0'..=b'9') = self.peek().filter(|_| self.pos == start || !self.gap()) {
            v = match v.checked_mul(10).and_then(|v| v.checked_add(u64::from(c - b'0'))) {
                Some(v) => v,
                None => {
                    self.pos = start;
                    return self.error("integer too large");
                }
            };
            self.pos += 1;
        }
        if self.pos == start {
            return self.error("expected an integer");
        }
        Ok(v)
    }

    fn args<const N: usize>(&mut self) -> Result<[u64; N]> {
        self.expect("(")?;
        let mut out = [0; N];
        for (i, slot) in out.iter_mut().enumerate() {
            if i > 0 {
                self.expect(",")?;
            }
            *slot = self.int()?;
        }
        self.expect(")")?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<GroupExpr> {
        let keywords = [
            ("SL23", Atom::Sl23),
            ("CPD8C4", Atom::Cpd8c4),
            ("A4", Atom::A4),
            ("A5", Atom::A5),
            ("S3", Atom::S3),
            ("S4", Atom::S4),
        ];
        if let Some(&(w, a)) = keywords.iter().find(|(w, _)| self.at(w)) {
            self.pos += w.len();
            return Ok(GroupExpr::Atom(a));
        }
        let atom = if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        } else if self.eat("PSTAR") {
            let [p, n, q, k] = self.args()?;
            Atom::PStar { p, n, q, k }
        } else if self.eat("SD") {
            Atom::Semidihedral(self.int()?)
        } else if self.eat("M") {
            let [n] = self.args()?;
            Atom::Modular(n)
        } else if self.eat("E") {
            let [p, n] = self.args()?;
            Atom::Elementary { p, n }
        } else if self.eat("C") {
            Atom::Cyclic(self.int()?)
        } else if self.eat("D") {
            Atom::Dihedral(self.int()?)
        } else if self.eat("Q") {
            Atom::Quaternion(self.int()?)
        } else {
            return self.error("expected a group");
        };
        Ok(GroupExpr::Atom(atom))
    }

    fn semi(&mut self) -> Result<GroupExpr> {
        let left = self.atom()?;
        if self.eat("RX") {
            let right = self.atom()?;
            return Ok(GroupExpr::rx(left, right));
        }
        Ok(left)
    }

    fn expr(&mut self) -> Result<GroupExpr> {
        let mut e = self.semi()?;
        while self.eat("X") {
            e = GroupExpr::direct(e, self.semi()?);
        }
        Ok(e)
    }
}

pub fn parse(text: &str) -> Result<GroupExpr> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

fn semantic<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Semantic(msg.into()))
}

fn small(v: u64, what: &str) -> Result<usize> {
    usize::try_from(v).or_else(|_| semantic(format!("{what} {v} is too large")))
}

fn exponent(v: u64, what: &str) -> Result<u32> {
    u32::try_from(v).or_else(|_| semantic(format!("{what} {v} is too large")))
}

/// Group order implied by the expression, without building anything.
pub fn order(e: &GroupExpr) -> Option<u64> {
    match e {
        GroupExpr::Atom(a) => match *a {
            Atom::Cyclic(n) | Atom::Dihedral(n) | Atom::Quaternion(n) | Atom::Semidihedral(n) | Atom::Modular(n) => {
                Some(n)
            }
            Atom::Elementary { p, n } => p.checked_pow(u32::try_from(n).ok()?),
            Atom::PStar { p, n, q, k } => {
                p.checked_pow(u32::try_from(n).ok()?)?.checked_mul(q.checked_pow(u32::try_from(k).ok()?)?)
            }
            Atom::A4 => Some(12),
            Atom::A5 => Some(60),
            Atom::S3 => Some(6),
            Atom::S4 | Atom::Sl23 => Some(24),
            Atom::Cpd8c4 => Some(16),
        },
        GroupExpr::Direct(a, b) | GroupExpr::Rx(a, b) => order(a)?.checked_mul(order(b)?),
    }
}

fn atom_group(a: Atom, limits: &Limits) -> Result<FiniteGroup> {
    let g = match a {
        Atom::Cyclic(n) => cyclic(small(n, "order")?),
        Atom::Dihedral(n) => dihedral(small(n, "order")?),
        Atom::Quaternion(n) => generalized_quaternion(small(n, "order")?),
        Atom::Semidihedral(n) => semidihedral(small(n, "order")?),
        Atom::Modular(n) => match prime_power(n) {
            Some((p, k)) => modular_group(small(p, "prime")?, k),
            None => return semantic(format!("M({n}) needs a prime-power order")),
        },
        Atom::Elementary { p, n } => elementary_abelian(small(p, "prime")?, exponent(n, "rank")?),
        Atom::PStar { p, n, q, k } => p_star_with(
            small(p, "prime")?,
            exponent(n, "exponent")?,
            small(q, "prime")?,
            exponent(k, "exponent")?,
            limits,
        ),
        Atom::A4 => alt(4),
        Atom::A5 => alt(5),
        Atom::S3 => sym(3),
        Atom::S4 => sym(4),
        Atom::Sl23 => sl23(),
        Atom::Cpd8c4 => central_product_d8_c4(),
    };
    g.map_err(|e| match e {
        psi_core::Error::Resource(_) => CliError::Core(e),
        other => CliError::Semantic(format!("{a}: {other}")),
    })
}

fn build(e: &GroupExpr, limits: &Limits) -> Result<FiniteGroup> {
    match e {
        GroupExpr::Atom(a) => atom_group(*a, limits),
        GroupExpr::Direct(a, b) => Ok(build(a, limits)?.direct_product_with(&build(b, limits)?, limits)?),
        GroupExpr::Rx(a, b) => {
            let left = build(a, limits)?;
            let right = build(b, limits)?;
            if !left.is_abelian() {
                return semantic(format!("left side of rx must be abelian, {a} is not"));
            }
            if !right.is_cyclic() || right.order() % 2 == 1 {
                return semantic(format!("right side of rx must be cyclic of even order, {b} is not"));
            }
            Ok(rtimes_iota_with(&left, right.order(), limits)?)
        }
    }
}

/// Builds the group, refusing anything above `limits.max_order` before any table is made.
pub fn evaluate(e: &GroupExpr, limits: &Limits) -> Result<FiniteGroup> {
    match order(e) {
        Some(n) if n <= limits.max_order as u64 => {}
        Some(n) => {
            return Err(
                psi_core::Error::Resource(format!("order {n} exceeds the order cap {}", limits.max_order)).into()
            )
        }
        None => return Err(psi_core::Error::Resource("order overflows".into()).into()),
    }
    Ok(build(e, limits)?.with_name(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u64) -> GroupExpr {
        GroupExpr::Atom(Atom::Cyclic(n))
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(parse("C7 rx C2").unwrap(), GroupExpr::rx(c(7), c(2)));
        assert_eq!(parse("Q8 x C15").unwrap(), GroupExpr::direct(GroupExpr::Atom(Atom::Quaternion(8)), c(15)));
        assert_eq!(parse("(C3 rx C4) x C5").unwrap(), GroupExpr::direct(GroupExpr::rx(c(3), c(4)), c(5)));
        assert_eq!(parse("c3xc3").unwrap(), parse("C3 x C3").unwrap());
        assert_eq!(parse(" pStar( 5 ,1,2, 3)").unwrap(), GroupExpr::Atom(Atom::PStar { p: 5, n: 1, q: 2, k: 3 }));
        assert_eq!(parse("C2 x C3 x C5").unwrap(), GroupExpr::direct(GroupExpr::direct(c(2), c(3)), c(5)));
        assert_eq!(parse("SD16 x S3 x SL23 x S4").unwrap().to_string(), "SD16 x S3 x SL23 x S4");
    }

    #[test]
    fn positioned_errors() {
        let pos = |s: &str| match parse(s) {
            Err(CliError::Parse { pos, .. }) => pos,
            other => panic!("{s:?} gave {other:?}"),
        };
        assert_eq!(pos(""), 0);
        assert_eq!(pos("C"), 1);
        assert_eq!(pos("C3 x"), 4);
        assert_eq!(pos("C3 y"), 3);
        assert_eq!(pos("E(3 2)"), 4);
        assert_eq!(pos("(C3"), 3);
        assert_eq!(pos("C99999999999999999999"), 1);
        assert_eq!(pos("C3 rx C2 rx C2"), 9);
        assert_eq!(pos("C1 2"), 3);
        assert_eq!(pos("S L23"), 0);
        assert_eq!(pos("C3 r x C2"), 3);
    }

    #[test]
    fn printing_keeps_structure() {
        let right_nested = GroupExpr::direct(c(2), GroupExpr::direct(c(3), c(5)));
        assert_eq!(right_nested.to_string(), "C2 x (C3 x C5)");
        assert_eq!(parse(&right_nested.to_string()).unwrap(), right_nested);
        let rx = GroupExpr::rx(GroupExpr::direct(c(3), c(3)), c(2));
        assert_eq!(rx.to_string(), "(C3 x C3) rx C2");
    }

    #[test]
    fn evaluation() {
        let l = Limits::default();
        assert_eq!(evaluate(&parse("C5 rx C4").unwrap(), &l).unwrap().order(), 20);
        assert_eq!(evaluate(&parse("M(16)").unwrap(), &l).unwrap().order(), 16);
        assert!(matches!(evaluate(&parse("D8 rx C2").unwrap(), &l), Err(CliError::Semantic(_))));
        assert!(matches!(evaluate(&parse("C5 rx C3").unwrap(), &l), Err(CliError::Semantic(_))));
        assert!(matches!(evaluate(&parse("C5 rx (C2 x C2)").unwrap(), &l), Err(CliError::Semantic(_))));
        assert!(matches!(evaluate(&parse("M(12)").unwrap(), &l), Err(CliError::Semantic(_))));
        assert!(matches!(evaluate(&parse("C0").unwrap(), &l), Err(CliError::Semantic(_))));
        let capped = Limits { max_order: 100, ..Limits::default() };
        let err = evaluate(&parse("C11 x C11").unwrap(), &capped).unwrap_err();
        assert_eq!(err.exit_code(), crate::error::exit::RESOURCE);
        let huge = evaluate(&parse("C4294967296 x C4294967296 x C4294967296").unwrap(), &l).unwrap_err();
        assert_eq!(huge.exit_code(), crate::error::exit::RESOURCE);
    }
}
