use super::{BinaryOp, Expr, UnaryOp};
use crate::error::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Var(usize),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Var(a) => format!("variable x{a}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Op(c) => format!("'{c}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn syntax(offset: usize, message: impl Into<String>, expected: &[&str]) -> ParseError {
        ParseError {
            offset,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            kind: ParseErrorKind::Syntax,
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, ParseError> {
        let bytes = self.src.as_bytes();
        let mut out = Vec::new();
        loop {
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            let start = self.pos;
            let Some(&c) = bytes.get(self.pos) else {
                out.push((start, Tok::End));
                return Ok(out);
            };
            let tok = match c {
                b'+' | b'-' | b'*' | b'/' | b'^' => {
                    self.pos += 1;
                    Tok::Op(c as char)
                }
                b'(' => {
                    self.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    self.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' | b'.' => self.number()?,
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let word = &self.src[start..self.pos];
                    match word.strip_prefix('x') {
                        Some(digits) if !digits.is_empty() && digits.bytes().all(|d| d.is_ascii_digit()) => {
                            let index =
                                digits.parse().map_err(|_| Self::syntax(start, "variable index too large", &[]))?;
                            Tok::Var(index)
                        }
                        _ => Tok::Ident(word.to_string()),
                    }
                }
                _ => {
                    let ch = self.src[start..].chars().next().unwrap_or('?');
                    return Err(Self::syntax(start, format!("unexpected character '{ch}'"), &["expression"]));
                }
            };
            out.push((start, tok));
        }
    }

    fn number(&mut self) -> Result<Tok, ParseError> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let digits = |pos: &mut usize| {
            let s = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - s
        };
        let mut count = digits(&mut self.pos);
        if self.pos < bytes.len() && bytes[self.pos] == b'.' {
            self.pos += 1;
            count += digits(&mut self.pos);
        }
        if count == 0 {
            return Err(Self::syntax(start, "malformed number", &["digit"]));
        }
        if self.pos < bytes.len() && matches!(bytes[self.pos], b'e' | b'E') {
            let mut p = self.pos + 1;
            if p < bytes.len() && matches!(bytes[p], b'+' | b'-') {
                p += 1;
            }
            if digits(&mut p) == 0 {
                return Err(Self::syntax(p.min(self.src.len()), "malformed exponent", &["digit"]));
            }
            self.pos = p;
        }
        let text = &self.src[start..self.pos];
        let v: f64 = text.parse().map_err(|_| Self::syntax(start, "malformed number", &["number"]))?;
        if !v.is_finite() {
            return Err(Self::syntax(start, "number out of range", &[]));
        }
        Ok(Tok::Num(v))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    dimension: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let found = self.peek().describe();
        Lexer::syntax(self.offset(), format!("unexpected {found}, expected {}", expected.join(" or ")), expected)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            let op = if c == '+' { BinaryOp::Add } else { BinaryOp::Sub };
            lhs = Expr::Binary(op, lhs.into(), rhs.into());
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            self.bump();
            let rhs = self.unary()?;
            let op = if c == '*' { BinaryOp::Mul } else { BinaryOp::Div };
            lhs = Expr::Binary(op, lhs.into(), rhs.into());
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Unary(UnaryOp::Neg, inner.into()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Op('-') {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        let k = match *self.peek() {
            Tok::Num(v) if v.fract() == 0.0 && v <= i32::MAX as f64 => v as i32,
            Tok::Num(_) => {
                return Err(Lexer::syntax(at, "exponent must be an integer literal", &["integer"]));
            }
            _ => return Err(self.unexpected(&["integer exponent"])),
        };
        self.bump();
        if *self.peek() == Tok::Op('^') {
            return Err(Lexer::syntax(self.offset(), "chained exponents need parentheses", &[]));
        }
        Ok(Expr::Pow(base.into(), if negative { -k } else { k }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::Var(a) => {
                if a >= self.dimension {
                    return Err(ParseError {
                        offset: at,
                        message: format!(
                            "variable x{a} out of range (dimension {} admits x0..x{})",
                            self.dimension,
                            self.dimension.saturating_sub(1)
                        ),
                        expected: vec![],
                        kind: ParseErrorKind::VariableOutOfRange,
                    });
                }
                self.bump();
                Ok(Expr::Var(a))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.close()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let Some(op) = UnaryOp::from_name(&name) else {
                    return Err(Lexer::syntax(
                        at,
                        format!("unknown identifier '{name}'"),
                        &["x<index>", "sin", "cos", "exp", "sqrt"],
                    ));
                };
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Err(self.unexpected(&["'('"]));
                }
                self.bump();
                let arg = self.expr()?;
                self.close()?;
                Ok(Expr::Unary(op, arg.into()))
            }
            _ => Err(self.unexpected(&["number", "variable", "function", "'('"])),
        }
    }

    fn close(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&["')'"]))
        }
    }
}

/// Parses `text` as an expression over `x0 … x{dimension−1}`.
pub fn parse(text: &str, dimension: usize) -> Result<Expr, ParseError> {
    let toks = Lexer { src: text, pos: 0 }.tokens()?;
    let mut p = Parser { toks, pos: 0, dimension };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(&["operator", "end of input"]));
    }
    Ok(e)
}
