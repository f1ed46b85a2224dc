//! Parser for the expression language shared by coefficients, algebra elements and form operators.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] int)?
//! atom   := int | 'q' | gen | 'd' '(' expr ')'
//!         | 'L' '[' func ']' '(' expr ')' | 'i' '[' int ',' int ']' '(' expr ')'
//!         | '(' expr ')'
//! gen    := ('t'|'w'|'Y'|'J'|'X') '[' int ',' int ']'
//! func   := ident ('[' int (',' int)* ']')?
//! ```
//! Generator indices are 1-based in the text form and 0-based in the tree.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at position {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    T,
    W,
    Y,
    J,
    X,
}

impl GenKind {
    pub fn symbol(self) -> char {
        match self {
            GenKind::T => 't',
            GenKind::W => 'w',
            GenKind::Y => 'Y',
            GenKind::J => 'J',
            GenKind::X => 'X',
        }
    }

    fn from_symbol(s: &str) -> Option<GenKind> {
        Some(match s {
            "t" => GenKind::T,
            "w" => GenKind::W,
            "Y" => GenKind::Y,
            "J" => GenKind::J,
            "X" => GenKind::X,
            _ => return None,
        })
    }
}

/// Named dual functional used inside `L[...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncRef {
    pub name: String,
    pub idx: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Q,
    Gen(GenKind, usize, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    D(Box<Expr>),
    Lie(FuncRef, Box<Expr>),
    Inner(usize, usize, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{}", n),
            Expr::Q => write!(f, "q"),
            Expr::Gen(k, i, j) => write!(f, "{}[{},{}]", k.symbol(), i + 1, j + 1),
            Expr::Neg(a) => write!(f, "-({})", a),
            Expr::Add(a, b) => write!(f, "({} + {})", a, b),
            Expr::Sub(a, b) => write!(f, "({} - {})", a, b),
            Expr::Mul(a, b) => write!(f, "({} * {})", a, b),
            Expr::Div(a, b) => write!(f, "({} / {})", a, b),
            Expr::Pow(a, k) => write!(f, "({})^{}", a, k),
            Expr::D(a) => write!(f, "d({})", a),
            Expr::Lie(h, a) => {
                let idx: Vec<String> = h.idx.iter().map(|i| (i + 1).to_string()).collect();
                if idx.is_empty() {
                    write!(f, "L[{}]({})", h.name, a)
                } else {
                    write!(f, "L[{}[{}]]({})", h.name, idx.join(","), a)
                }
            }
            Expr::Inner(i, j, a) => write!(f, "i[{},{}]({})", i + 1, j + 1, a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn lex(s: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let b: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = b[st..i].iter().collect();
            toks.push((st, Tok::Int(txt.parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == '_') {
                i += 1;
            }
            toks.push((st, Tok::Ident(b[st..i].iter().collect())));
        } else if "+-*/^()[],".contains(c) {
            toks.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError { pos: i, message: format!("unexpected character '{}'", c) });
        }
    }
    Ok(Lexer { toks, end: b.len() })
}

struct Parser {
    lx: Lexer,
    at: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.lx.toks.get(self.at).map(|t| t.0).unwrap_or(self.lx.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.at).map(|t| &t.1)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.lx.toks.get(self.at + 1).map(|t| &t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), message: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c))
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected integer"),
        }
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let p = self.pos();
        let n = self.int()?;
        let v: usize = n
            .try_into()
            .map_err(|_| ParseError { pos: p, message: "index out of range".into() })?;
        if v == 0 {
            return Err(ParseError { pos: p, message: "indices are 1-based".into() });
        }
        Ok(v - 1)
    }

    fn pair(&mut self) -> Result<(usize, usize), ParseError> {
        self.expect('[')?;
        let i = self.index()?;
        self.expect(',')?;
        let j = self.index()?;
        self.expect(']')?;
        Ok((i, j))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let p = self.pos();
            let n = self.int()?;
            let k: i32 = n
                .try_into()
                .map_err(|_| ParseError { pos: p, message: "exponent too large".into() })?;
            return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                let next_is = |c: char| self.peek2() == Some(&Tok::Sym(c));
                if name == "q" {
                    self.at += 1;
                    Ok(Expr::Q)
                } else if name == "d" && next_is('(') {
                    self.at += 2;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::D(Box::new(e)))
                } else if name == "L" && next_is('[') {
                    self.at += 2;
                    let h = self.func()?;
                    self.expect(']')?;
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::Lie(h, Box::new(e)))
                } else if name == "i" && next_is('[') {
                    self.at += 1;
                    let (i, j) = self.pair()?;
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::Inner(i, j, Box::new(e)))
                } else if let Some(k) = GenKind::from_symbol(&name) {
                    self.at += 1;
                    let (i, j) = self.pair()?;
                    Ok(Expr::Gen(k, i, j))
                } else {
                    self.err(format!("unknown identifier '{}'", name))
                }
            }
            Some(Tok::Sym(c)) => self.err(format!("unexpected '{}'", c)),
            None => self.err("unexpected end of input"),
        }
    }

    fn func(&mut self) -> Result<FuncRef, ParseError> {
        let name = match self.peek().cloned() {
            Some(Tok::Ident(s)) => s,
            Some(Tok::Int(n)) if n == BigInt::from(1) => "1".to_string(),
            _ => return self.err("expected functional name"),
        };
        self.at += 1;
        let mut idx = Vec::new();
        if self.eat('[') {
            idx.push(self.index()?);
            while self.eat(',') {
                idx.push(self.index()?);
            }
            self.expect(']')?;
        }
        Ok(FuncRef { name, idx })
    }
}

pub fn parse(s: &str) -> Result<Expr, ParseError> {
    let lx = lex(s)?;
    let mut p = Parser { lx, at: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("-q^-1 + 2*q").unwrap();
        assert_eq!(e.to_string(), "(-((q)^-1) + (2 * q))");
    }

    #[test]
    fn generators_and_operators() {
        let e = parse("w[1,2]*t[2,1] - d(t[1,1])").unwrap();
        assert_eq!(e.to_string(), "((w[1,2] * t[2,1]) - d(t[1,1]))");
        let e = parse("L[chi[1,2]](t[1,1]) + i[2,2](w[1,1])").unwrap();
        assert_eq!(e.to_string(), "(L[chi[1,2]](t[1,1]) + i[2,2](w[1,1]))");
    }

    #[test]
    fn error_position() {
        let e = parse("t[1,1] * ").unwrap_err();
        assert_eq!(e.pos, 9);
        let e = parse("t[0,1]").unwrap_err();
        assert_eq!(e.pos, 2);
        let e = parse("q $").unwrap_err();
        assert_eq!(e.pos, 2);
    }
}
