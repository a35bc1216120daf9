//! Element grammar: a sum of terms `±[coeff*]word`, where a word is a product
//! of generator names joined by `*` and `1` denotes the empty word.
//! Integer factors anywhere in a term multiply its coefficient, and `g^k`
//! abbreviates `k` copies of generator `g`. Whitespace is insignificant.

use super::{Element, Word};
use crate::error::{Error, Result};
use crate::exactlin::FieldSpec;

pub(crate) struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    generators: &'a [String],
    field: FieldSpec,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, generators: &'a [String], field: FieldSpec) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            generators,
            field,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    /// Parses a whole element without applying any rewriting. Terms whose word
    /// is the unit are reported so the caller can reject them in non-unital
    /// algebras.
    pub(crate) fn element(mut self) -> Result<(Element, bool)> {
        let f = self.field;
        let mut out = Element::zero();
        let mut uses_unit = false;
        if self.peek().is_none() {
            return self.err("empty element");
        }
        let mut first = true;
        loop {
            let mut negative = false;
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                None => break,
                Some(_) if first => {}
                Some(c) => return self.err(format!("expected `+` or `-`, found `{}`", c as char)),
            }
            first = false;
            let (coeff, word) = self.term()?;
            let coeff = if negative { f.neg(coeff) } else { coeff };
            if coeff != 0 && word.is_unit() {
                uses_unit = true;
            }
            out.add_term(f, word, coeff);
        }
        Ok((out, uses_unit))
    }

    fn term(&mut self) -> Result<(u32, Word)> {
        let f = self.field;
        let mut coeff = 1u32;
        let mut letters = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer();
                    coeff = f.mul(coeff, n);
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.ident();
                    let Some(g) = self.generators.iter().position(|s| s == name) else {
                        return Err(Error::UnknownGenerator(name.to_string()));
                    };
                    let mut k = 1usize;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        match self.peek() {
                            Some(c) if c.is_ascii_digit() => {}
                            _ => return self.err("expected exponent after `^`"),
                        }
                        let start = self.pos;
                        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                            self.pos += 1;
                        }
                        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                        k = digits
                            .parse()
                            .or_else(|_| self.err::<usize>("exponent too large"))?;
                    }
                    letters.extend(std::iter::repeat_n(g as u16, k));
                }
                Some(c) => return self.err(format!("unexpected `{}`", c as char)),
                None => return self.err("unexpected end of input"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((coeff, Word::new(letters)))
    }

    fn integer(&mut self) -> u32 {
        let f = self.field;
        let mut acc = 0u32;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            let d = (self.src[self.pos] - b'0') as u32;
            acc = f.add(f.mul(acc, 10 % f.characteristic() as u32), d % f.characteristic() as u32);
            self.pos += 1;
        }
        acc
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || matches!(self.src[self.pos], b'_' | b'\''))
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }
}

pub(crate) fn is_valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn parse(s: &str, p: u64) -> Result<(Element, bool)> {
        let g = gens();
        Parser::new(s, &g, FieldSpec::new(p).unwrap()).element()
    }

    #[test]
    fn sums_and_coefficients() {
        let (e, unit) = parse("x*y + 2*y", 5).unwrap();
        assert!(!unit);
        assert_eq!(e.coeff(&Word::new(vec![0, 1])), 1);
        assert_eq!(e.coeff(&Word::new(vec![1])), 2);
        let (e, _) = parse("-x + 7*x", 5).unwrap();
        assert_eq!(e.coeff(&Word::letter(0)), 1);
        let (e, unit) = parse("0", 5).unwrap();
        assert!(e.is_zero() && !unit);
        let (e, unit) = parse(" 3 ", 5).unwrap();
        assert!(unit);
        assert_eq!(e.coeff(&Word::unit()), 3);
        let (e, _) = parse("y^2*x", 5).unwrap();
        assert_eq!(e.coeff(&Word::new(vec![1, 1, 0])), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(parse("z", 5), Err(Error::UnknownGenerator("z".into())));
        assert!(matches!(parse("x +", 5), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x y", 5), Err(Error::Syntax { .. })));
        assert!(matches!(parse("", 5), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x*", 5), Err(Error::Syntax { .. })));
    }

    #[test]
    fn names() {
        assert!(is_valid_generator_name("X"));
        assert!(is_valid_generator_name("x_1'"));
        assert!(!is_valid_generator_name("1x"));
        assert!(!is_valid_generator_name("a*b"));
        assert!(!is_valid_generator_name(""));
    }
}
