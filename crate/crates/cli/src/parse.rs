//! The text form language.
//!
//! ```text
//! form    := ['+'|'-'] term (('+'|'-') term)*
//! term    := coeff [basis] | basis
//! basis   := 'd' var (('^'|'∧') 'd' var)*
//! coeff   := product
//! product := unary (('*' | '/' | juxtaposition) unary)*
//! unary   := '-' unary | atom ['^' digits]
//! atom    := digits | var | '(' expr ')'
//! expr    := ['+'|'-'] product (('+'|'-') product)*
//! var     := 'z' digits | 'x' | 'y' | 'z' | 'w'
//! ```
//!
//! The aliases `x, y, z, w` name `z1 .. z4`; with a single variable every
//! alias names `z1`. Whitespace is ignored.

use std::fmt;

use pforms_core::{Error, MultiIndex, MultiPoly, RatForm, RatFun, Ring};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("parse error at {line}:{col}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        col: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("PrimeOutOfRange: {0} is not a prime in [2, 2^31-1]")]
    PrimeOutOfRange(u64),
    #[error("VariableOutOfRange at {line}:{col}: {name} with n={n}")]
    VariableOutOfRange {
        line: usize,
        col: usize,
        name: String,
        n: usize,
    },
    #[error("parse error at {line}:{col}: term of degree {found} in a form of degree {expected}")]
    MixedDegree {
        line: usize,
        col: usize,
        expected: usize,
        found: usize,
    },
    #[error("error at {line}:{col}: {source}")]
    Algebra {
        line: usize,
        col: usize,
        source: Error,
    },
    #[error("invalid document: {0}")]
    Document(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Var(usize),
    D(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Var(i) => write!(f, "variable z{}", i + 1),
            Tok::D(i) => write!(f, "dz{}", i + 1),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, n: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, col: &mut usize, k: usize| {
        *i += k;
        *col += k;
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: tl,
                col: tc,
            })
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(&mut i, &mut col, 1),
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                col += i - start;
                push(&mut out, Tok::Num(digits));
            }
            '+' | '-' | '*' | '/' | '^' | '∧' | '(' | ')' => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Caret,
                };
                push(&mut out, tok);
                advance(&mut i, &mut col, 1);
            }
            'd' => {
                let Some((var, len)) = lex_var(&chars, i + 1, n, tl, tc)? else {
                    return Err(ParseError::Syntax {
                        line: tl,
                        col: tc + 1,
                        expected: vec!["variable after 'd'"],
                        found: chars
                            .get(i + 1)
                            .map_or("end of input".into(), |c| format!("'{c}'")),
                    });
                };
                push(&mut out, Tok::D(var));
                advance(&mut i, &mut col, 1 + len);
            }
            _ => match lex_var(&chars, i, n, tl, tc)? {
                Some((var, len)) => {
                    push(&mut out, Tok::Var(var));
                    advance(&mut i, &mut col, len);
                }
                None => {
                    return Err(ParseError::Syntax {
                        line: tl,
                        col: tc,
                        expected: vec!["number", "variable", "'d'", "'('", "operator"],
                        found: format!("'{c}'"),
                    })
                }
            },
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// A variable starting at `chars[at]`: its zero-based index and length.
fn lex_var(
    chars: &[char],
    at: usize,
    n: usize,
    line: usize,
    col: usize,
) -> Result<Option<(usize, usize)>, ParseError> {
    let Some(&c) = chars.get(at) else {
        return Ok(None);
    };
    let alias = match c {
        'x' => 0,
        'y' => 1,
        'z' => 2,
        'w' => 3,
        _ => return Ok(None),
    };
    let mut end = at + 1;
    if c == 'z' {
        while end < chars.len() && chars[end].is_ascii_digit() {
            end += 1;
        }
    }
    let (index, name) = if end > at + 1 {
        let name: String = chars[at..end].iter().collect();
        let k: usize = name[1..].parse().unwrap_or(usize::MAX);
        if k == 0 || k > n {
            return Err(ParseError::VariableOutOfRange { line, col, name, n });
        }
        (k - 1, name)
    } else if n == 1 {
        (0, c.to_string())
    } else {
        (alias, c.to_string())
    };
    if index >= n {
        return Err(ParseError::VariableOutOfRange { line, col, name, n });
    }
    Ok(Some((index, end - at)))
}

struct Parser<'a> {
    ring: Ring,
    tokens: &'a [Token],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.tokens[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax {
            line,
            col,
            expected,
            found: self.peek().to_string(),
        }
    }

    fn algebra<T>(&self, at: (usize, usize), r: Result<T, Error>) -> Result<T, ParseError> {
        r.map_err(|source| ParseError::Algebra {
            line: at.0,
            col: at.1,
            source,
        })
    }

    fn form(&mut self) -> Result<RatForm, ParseError> {
        let mut degree: Option<usize> = None;
        let mut terms: Vec<(MultiIndex, RatFun)> = Vec::new();
        let mut negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let at = self.here();
            let (coeff, basis) = self.term()?;
            match degree {
                None => degree = Some(basis.len()),
                Some(r) if r != basis.len() => {
                    return Err(ParseError::MixedDegree {
                        line: at.0,
                        col: at.1,
                        expected: r,
                        found: basis.len(),
                    })
                }
                _ => {}
            }
            if let Some((idx, odd)) = MultiIndex::from_unsorted(&basis) {
                let coeff = if negate != odd { -coeff } else { coeff };
                terms.push((idx, coeff));
            }
            negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                Tok::Eof => break,
                _ => return Err(self.unexpected(vec!["'+'", "'-'", "'d'", "end of input"])),
            };
            self.bump();
        }
        let degree = degree.unwrap_or(0);
        let at = self.here();
        self.algebra(at, RatForm::from_terms(self.ring, degree, terms))
    }

    fn term(&mut self) -> Result<(RatFun, Vec<usize>), ParseError> {
        let coeff = if matches!(self.peek(), Tok::D(_)) {
            RatFun::from_poly(MultiPoly::one(self.ring))
        } else {
            let c = self.product()?;
            if matches!(self.peek(), Tok::Star) && matches!(self.peek_at(1), Tok::D(_)) {
                self.bump();
            }
            c
        };
        let mut basis = Vec::new();
        if let Tok::D(i) = *self.peek() {
            self.bump();
            basis.push(i);
            while matches!(self.peek(), Tok::Caret) {
                self.bump();
                match self.bump() {
                    Tok::D(j) => basis.push(j),
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected(vec!["differential"]));
                    }
                }
            }
        }
        Ok((coeff, basis))
    }

    fn expr(&mut self) -> Result<RatFun, ParseError> {
        let mut negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut total = RatFun::zero(self.ring);
        loop {
            let at = self.here();
            let p = self.product()?;
            let p = if negate { -p } else { p };
            total = self.algebra(at, total.checked_add(&p))?;
            negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(total),
            };
            self.bump();
        }
    }

    fn product(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let at = self.here();
            match self.peek() {
                Tok::Star if !matches!(self.peek_at(1), Tok::D(_)) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.algebra(at, acc.checked_mul(&rhs))?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.algebra(at, acc.checked_div(&rhs))?;
                }
                Tok::Num(_) | Tok::Var(_) | Tok::LParen => {
                    let rhs = self.unary()?;
                    acc = self.algebra(at, acc.checked_mul(&rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun, ParseError> {
        if matches!(self.peek(), Tok::Minus) {
            self.bump();
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if matches!(self.peek(), Tok::Caret) && matches!(self.peek_at(1), Tok::Num(_)) {
            let at = self.here();
            self.bump();
            let Tok::Num(k) = self.bump() else {
                unreachable!()
            };
            return self.algebra(at, pow(&base, k.parse().unwrap_or(u128::MAX)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFun, ParseError> {
        let ring = self.ring;
        match *self.peek() {
            Tok::Num(ref digits) => {
                let c = digits.bytes().fold(0u64, |acc, b| {
                    (acc * 10 + (b - b'0') as u64) % ring.p() as u64
                });
                self.bump();
                Ok(RatFun::from_poly(MultiPoly::constant(ring, c as i64)))
            }
            Tok::Var(i) => {
                self.bump();
                Ok(RatFun::from_poly(MultiPoly::var(ring, i)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek(), Tok::RParen) {
                    return Err(self.unexpected(vec!["')'", "operator"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected(vec!["number", "variable", "'('", "'d'"])),
        }
    }
}

fn pow(base: &RatFun, k: u128) -> Result<RatFun, Error> {
    let ring = base.ring();
    if k == 0 {
        return Ok(RatFun::from_poly(MultiPoly::one(ring)));
    }
    if base.as_constant().is_none() && k > ring.max_degree() as u128 {
        let var = (0..ring.nvars())
            .find(|&i| base.num().degree_in(i) > 0 || base.den().degree_in(i) > 0)
            .unwrap_or(0);
        return Err(Error::DegreeOverflow {
            var,
            degree: k.min(u64::MAX as u128) as u64,
            cap: ring.max_degree(),
        });
    }
    if let Some(c) = base.as_constant() {
        if c == 0 {
            return Ok(RatFun::zero(ring));
        }
        let e = (k % (ring.p() as u128 - 1)) as u32;
        let e = if e == 0 { ring.p() - 1 } else { e };
        return Ok(RatFun::from_poly(MultiPoly::constant(
            ring,
            ring.prime().pow(c, e as u64) as i64,
        )));
    }
    let mut acc = RatFun::from_poly(MultiPoly::one(ring));
    let mut square = base.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.checked_mul(&square)?;
        }
        e >>= 1;
        if e > 0 {
            square = square.checked_mul(&square)?;
        }
    }
    Ok(acc)
}

/// Parses a form in `ring`.
pub fn parse_form(text: &str, ring: Ring) -> Result<RatForm, ParseError> {
    let tokens = lex(text, ring.nvars())?;
    let mut parser = Parser {
        ring,
        tokens: &tokens,
        pos: 0,
    };
    parser.form()
}
