//! Element grammar:
//!
//! ```text
//! expression  := ['+'|'-'] term (('+'|'-') term)*
//! term        := coefficient | [coefficient '*'] factor ('*' factor)*
//! factor      := generator ['^' positive-integer]
//! coefficient := decimal integer, reduced mod p
//! ```
//!
//! Whitespace is insignificant. A bare coefficient denotes a multiple of the
//! unit, so `0` is the zero element.

use thiserror::Error;

use super::{add_term, Presentation, Terms};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{name}` at position {pos}")]
    UnknownGenerator { name: String, pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    pres: &'a Presentation,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.here(),
            msg: msg.to_string(),
        })
    }

    fn int_mod_p(&self, digits: &str) -> u32 {
        let p = self.pres.p() as u64;
        digits
            .bytes()
            .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p) as u32
    }

    fn expression(&mut self) -> Result<Terms, ParseError> {
        let p = self.pres.p();
        let mut terms = Terms::new();
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Minus) => {
                sign = p - 1;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            self.term(sign, &mut terms)?;
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = p - 1,
                None => break,
                Some(_) => return self.err("expected `+`, `-` or end of input"),
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self, sign: u32, terms: &mut Terms) -> Result<(), ParseError> {
        let p = self.pres.p();
        let mut coeff = sign;
        let mut word = Vec::new();
        if let Some(Tok::Int(d)) = self.peek() {
            let c = self.int_mod_p(&d.clone());
            coeff = coeff * c % p;
            self.pos += 1;
            if self.peek() != Some(&Tok::Star) {
                add_term(terms, super::Monomial::one(self.pres.num_generators()), coeff, p);
                return Ok(());
            }
            self.pos += 1;
        }
        loop {
            word.push(self.factor()?);
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        if let Some((s, m)) = self.pres.normalize_word(&word) {
            add_term(terms, m, coeff * s % p, p);
        }
        Ok(())
    }

    fn factor(&mut self) -> Result<(usize, u32), ParseError> {
        let pos = self.here();
        let name = match self.peek() {
            Some(Tok::Ident(n)) => n.clone(),
            _ => return self.err("expected a generator"),
        };
        let g = self
            .pres
            .generator_index(&name)
            .map_err(|_| ParseError::UnknownGenerator { name, pos })?;
        self.pos += 1;
        let mut exp = 1;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            exp = match self.peek() {
                Some(Tok::Int(d)) => match d.parse::<u32>() {
                    Ok(e) if e > 0 => e,
                    _ => return self.err("exponent must be a positive integer"),
                },
                _ => return self.err("expected an exponent"),
            };
            self.pos += 1;
        }
        Ok((g, exp))
    }
}

/// Parses into sign-normalized free-algebra terms (relations not applied).
pub(super) fn parse_terms(pres: &Presentation, text: &str) -> Result<Terms, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ParseError::Syntax {
            pos: 0,
            msg: "empty expression".to_string(),
        });
    }
    let mut parser = Parser {
        pres,
        toks,
        pos: 0,
        end: text.len(),
    };
    parser.expression()
}
