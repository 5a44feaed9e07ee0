//! ASCII concrete syntax for formulas.
//!
//! | glyph | ASCII | | glyph | ASCII |
//! |-------|-------|-|-------|-------|
//! | ∼ | `~` | | • | `&` |
//! | ¬ | `!` | | ∪ | `\|` |
//! | + | `+` | | ⊃ | `=>` |
//! | ⊗ | `?` | | ≡ | `<=>` |
//! | − | `#` | | ∧ | `/\` |
//! | * | `*` | | ∨ | `\/` |
//! |   |     | | → | `->` |
//! |   |     | | ↔ | `<->` |
//!
//! Unary prefixes bind tightest, then `& /\`, `| \/`, `=> ->`, `<=> <->`.
//! Binary connectives associate to the right.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Atom, BinOp, DerivedOp, Formula};

/// Byte range into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> SourceSpan {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {}..{}: {message}", span.start, span.end)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Atom(&'a str, bool),
    Unary(Unary),
    Bin(bool, BinOp),
    LParen,
    RParen,
    End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Unary {
    CNeg,
    ANeg,
    Derived(DerivedOp),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok<'a>, SourceSpan), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if start == bytes.len() {
            return Ok((Tok::End, SourceSpan::new(start, start)));
        }
        let rest = &self.src[start..];
        const FIXED: [(&str, Tok<'static>); 16] = [
            ("<=>", Tok::Bin(false, BinOp::Iff)),
            ("<->", Tok::Bin(true, BinOp::Iff)),
            ("=>", Tok::Bin(false, BinOp::Impl)),
            ("->", Tok::Bin(true, BinOp::Impl)),
            ("/\\", Tok::Bin(true, BinOp::And)),
            ("\\/", Tok::Bin(true, BinOp::Or)),
            ("&", Tok::Bin(false, BinOp::And)),
            ("|", Tok::Bin(false, BinOp::Or)),
            ("~", Tok::Unary(Unary::CNeg)),
            ("!", Tok::Unary(Unary::ANeg)),
            ("+", Tok::Unary(Unary::Derived(DerivedOp::Plus))),
            ("?", Tok::Unary(Unary::Derived(DerivedOp::Circ))),
            ("#", Tok::Unary(Unary::Derived(DerivedOp::Minus))),
            ("*", Tok::Unary(Unary::Derived(DerivedOp::Star))),
            ("(", Tok::LParen),
            (")", Tok::RParen),
        ];
        for (text, tok) in FIXED {
            if rest.starts_with(text) {
                self.pos += text.len();
                return Ok((tok, SourceSpan::new(start, self.pos)));
            }
        }
        let (alternate, name_start) = if rest.starts_with('_') { (true, start + 1) } else { (false, start) };
        let name_len = self.src[name_start..]
            .bytes()
            .take_while(|b| b.is_ascii_lowercase() || b.is_ascii_digit())
            .count();
        let name = &self.src[name_start..name_start + name_len];
        if name_len == 0 || !name.as_bytes()[0].is_ascii_lowercase() {
            let end = start + rest.chars().next().map_or(1, char::len_utf8);
            let message = if alternate {
                "expected an atom name after '_'".to_string()
            } else {
                format!("unexpected character {:?}", rest.chars().next().unwrap())
            };
            return Err(ParseError { span: SourceSpan::new(start, end), message });
        }
        self.pos = name_start + name_len;
        Ok((Tok::Atom(name, alternate), SourceSpan::new(start, self.pos)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: (Tok<'a>, SourceSpan),
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(Tok<'a>, SourceSpan), ParseError> {
        let next = self.lexer.next()?;
        Ok(std::mem::replace(&mut self.peeked, next))
    }

    /// Parses the binary level `level` (0 = iff .. 3 = and).
    fn binary(&mut self, level: usize) -> Result<Formula, ParseError> {
        const LEVELS: [BinOp; 4] = [BinOp::Iff, BinOp::Impl, BinOp::Or, BinOp::And];
        if level == LEVELS.len() {
            return self.unary();
        }
        let lhs = self.binary(level + 1)?;
        match self.peeked.0 {
            Tok::Bin(alternate, op) if op == LEVELS[level] => {
                self.bump()?;
                let rhs = self.binary(level)?;
                Ok(if alternate { Formula::abin(op, lhs, rhs) } else { Formula::cbin(op, lhs, rhs) })
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let (tok, span) = self.bump()?;
        match tok {
            Tok::Atom(name, alternate) => {
                let atom = if alternate { Atom::alternate(name) } else { Atom::classical(name) };
                Ok(Formula::Atom(atom))
            }
            Tok::Unary(u) => {
                let inner = self.unary()?;
                Ok(match u {
                    Unary::CNeg => Formula::cneg(inner),
                    Unary::ANeg => Formula::aneg(inner),
                    Unary::Derived(op) => Formula::derived(op, inner),
                })
            }
            Tok::LParen => {
                let inner = self.binary(0)?;
                match self.bump()? {
                    (Tok::RParen, _) => Ok(inner),
                    (_, span) => Err(ParseError { span, message: "expected ')'".into() }),
                }
            }
            Tok::End => Err(ParseError { span, message: "unexpected end of input".into() }),
            _ => Err(ParseError { span, message: "expected a formula".into() }),
        }
    }
}

/// Parses a formula. See the module docs for the grammar.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut lexer = Lexer { src: text, pos: 0 };
    let first = lexer.next()?;
    let mut parser = Parser { lexer, peeked: first };
    let f = parser.binary(0)?;
    match parser.peeked {
        (Tok::End, _) => Ok(f),
        (_, span) => Err(ParseError { span, message: "unexpected trailing input".into() }),
    }
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::CBin(op, ..) | Formula::ABin(op, ..) => match op {
            BinOp::Iff => 1,
            BinOp::Impl => 2,
            BinOp::Or => 3,
            BinOp::And => 4,
        },
        _ => 5,
    }
}

fn bin_symbol(alternate: bool, op: BinOp) -> &'static str {
    match (alternate, op) {
        (false, BinOp::Impl) => "=>",
        (false, BinOp::Or) => "|",
        (false, BinOp::And) => "&",
        (false, BinOp::Iff) => "<=>",
        (true, BinOp::Impl) => "->",
        (true, BinOp::Or) => "\\/",
        (true, BinOp::And) => "/\\",
        (true, BinOp::Iff) => "<->",
    }
}

/// Canonical ASCII rendering with the fewest parentheses that re-parse to the
/// same tree.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(a) => out.push_str(&a.to_string()),
        Formula::CNeg(g) | Formula::ANeg(g) | Formula::Derived(_, g) => {
            out.push(match f {
                Formula::CNeg(_) => '~',
                Formula::ANeg(_) => '!',
                Formula::Derived(DerivedOp::Plus, _) => '+',
                Formula::Derived(DerivedOp::Circ, _) => '?',
                Formula::Derived(DerivedOp::Minus, _) => '#',
                Formula::Derived(DerivedOp::Star, _) => '*',
                _ => unreachable!(),
            });
            write_child(g, level(g) < 5, out);
        }
        Formula::CBin(op, l, r) | Formula::ABin(op, l, r) => {
            let lv = level(f);
            write_child(l, level(l) <= lv, out);
            out.push(' ');
            out.push_str(bin_symbol(matches!(f, Formula::ABin(..)), *op));
            out.push(' ');
            write_child(r, level(r) < lv, out);
        }
    }
}

fn write_child(f: &Formula, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}
