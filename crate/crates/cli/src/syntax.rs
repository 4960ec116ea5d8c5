//! Lexer and recursive-descent parser for the diagram language.
//!
//! One statement per line. `;` composes in diagrammatic order and binds
//! loosest; `(x)` binds tighter; both associate to the left. The exact
//! character sequence `(x)` is always the tensor operator, so a generator
//! named `x` must not be wrapped in parentheses.

use std::fmt;

use frobenius_core::{Factor, ObjectWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: expected {expected}, found {found}")]
pub struct ParseError {
    pub pos: Pos,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i32),
    Semi,
    Tensor,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Define,
    Arrow,
    Star,
    DualMark,
    EqEq,
    NotEq,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Tensor => f.write_str("`(x)`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Define => f.write_str("`:=`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Star => f.write_str("`*`"),
            Tok::DualMark => f.write_str("`^d`"),
            Tok::EqEq => f.write_str("`==`"),
            Tok::NotEq => f.write_str("`!=`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |pos: Pos, found: String| ParseError {
        pos,
        expected: "a token".into(),
        found,
    };
    while i < chars.len() {
        let pos = Pos { line, col };
        let ch = chars[i];
        let rest = &chars[i..];
        let starts = |s: &str| rest.iter().take(s.len()).copied().eq(s.chars());
        let (tok, len) = match ch {
            '\n' => {
                out.push((Tok::Newline, pos));
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' | '/' if ch == '#' || starts("//") => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' if starts("(x)") => (Tok::Tensor, 3),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            ',' => (Tok::Comma, 1),
            ';' => (Tok::Semi, 1),
            '*' => (Tok::Star, 1),
            ':' if starts(":=") => (Tok::Define, 2),
            ':' => (Tok::Colon, 1),
            '-' if starts("->") => (Tok::Arrow, 2),
            '=' if starts("==") => (Tok::EqEq, 2),
            '!' if starts("!=") => (Tok::NotEq, 2),
            '^' if starts("^d") && !rest.get(2).is_some_and(|c| c.is_alphanumeric() || *c == '_') => (Tok::DualMark, 2),
            c if c.is_ascii_digit() || (c == '-' && rest.get(1).is_some_and(char::is_ascii_digit)) => {
                let mut j = 1;
                while rest.get(j).is_some_and(char::is_ascii_digit) {
                    j += 1;
                }
                let text: String = rest[..j].iter().collect();
                let n = text.parse().map_err(|_| err(pos, format!("integer `{text}`")))?;
                (Tok::Int(n), j)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = 1;
                while rest.get(j).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    j += 1;
                }
                (Tok::Ident(rest[..j].iter().collect()), j)
            }
            other => return Err(err(pos, format!("character `{other}`"))),
        };
        out.push((tok, pos));
        i += len;
        col += len;
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Expression syntax, before names are resolved against a signature.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Name(String, Pos),
    Id(ObjectWord),
    Sym(ObjectWord, ObjectWord),
    Eta(ObjectWord),
    Delta(String, Pos),
    Eps(String, Pos),
    Dag(Box<Expr>),
    Conj(Box<Expr>),
    Sdim(ObjectWord, i32),
    /// `first ; second`: `first` runs first.
    Seq(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Base names appearing in object positions, with their positions
    /// unavailable for types (types carry no spans).
    pub fn visit_words(&self, f: &mut impl FnMut(&ObjectWord)) {
        match self {
            Expr::Id(w) | Expr::Eta(w) | Expr::Sdim(w, _) => f(w),
            Expr::Sym(a, b) => {
                f(a);
                f(b);
            }
            Expr::Dag(e) | Expr::Conj(e) => e.visit_words(f),
            Expr::Seq(a, b) | Expr::Tensor(a, b) => {
                a.visit_words(f);
                b.visit_words(f);
            }
            Expr::Name(..) | Expr::Delta(..) | Expr::Eps(..) => {}
        }
    }

    /// Names used as classical objects in `delta[..]` / `eps[..]`.
    pub fn visit_classicals(&self, f: &mut impl FnMut(&str)) {
        match self {
            Expr::Delta(x, _) | Expr::Eps(x, _) => f(x),
            Expr::Dag(e) | Expr::Conj(e) => e.visit_classicals(f),
            Expr::Seq(a, b) | Expr::Tensor(a, b) => {
                a.visit_classicals(f);
                b.visit_classicals(f);
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Object(String),
    Gen {
        name: String,
        dom: ObjectWord,
        cod: ObjectWord,
    },
    Classical(String),
    Scalar(String),
    Define(String, Expr),
    /// `assert lhs == rhs` (`equal`) or `assert lhs != rhs`.
    Assert {
        lhs: Expr,
        rhs: Expr,
        equal: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceFile {
    pub stmts: Vec<(Stmt, Pos)>,
}

const EXPR_KEYWORDS: &[&str] = &["id", "sym", "eta", "delta", "eps", "dag", "conj", "sdim"];
const DECL_KEYWORDS: &[&str] = &["object", "gen", "classical", "scalar", "assert"];

/// True for words that cannot name objects, generators or definitions.
pub fn is_reserved(name: &str) -> bool {
    name == "I" || EXPR_KEYWORDS.contains(&name) || DECL_KEYWORDS.contains(&name)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            expected: expected.into(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.fail(&tok.to_string())
        }
    }

    fn name(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) => {
                let p = self.bump().1;
                Ok((s, p))
            }
            _ => self.fail(what),
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Newline | Tok::Eof => {
                self.skip_newlines();
                Ok(())
            }
            _ => self.fail("end of line"),
        }
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let (base, _) = self.name("an object name")?;
        let dual = if *self.peek() == Tok::DualMark {
            self.bump();
            true
        } else {
            false
        };
        Ok(Factor::new(base, dual))
    }

    fn ty(&mut self) -> Result<ObjectWord, ParseError> {
        if *self.peek() == Tok::Ident("I".into()) {
            self.bump();
            return Ok(ObjectWord::unit());
        }
        let mut factors = vec![self.factor()?];
        while *self.peek() == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(ObjectWord::from_factors(factors))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.tensor_expr()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            let rhs = self.tensor_expr()?;
            lhs = Expr::Seq(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn tensor_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.atom()?;
        while *self.peek() == Tok::Tensor {
            self.bump();
            let rhs = self.atom()?;
            lhs = Expr::Tensor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn bracketed<T>(&mut self, inner: impl FnOnce(&mut Self) -> Result<T, ParseError>) -> Result<T, ParseError> {
        self.expect(Tok::LBrack)?;
        let v = inner(self)?;
        self.expect(Tok::RBrack)?;
        Ok(v)
    }

    fn parened(&mut self) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen)?;
        let e = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let kw = match self.peek().clone() {
            Tok::LParen => return self.parened(),
            Tok::Ident(s) => s,
            _ => return self.fail("an expression"),
        };
        match kw.as_str() {
            "id" => {
                self.bump();
                self.bracketed(|p| p.ty()).map(Expr::Id)
            }
            "eta" => {
                self.bump();
                self.bracketed(|p| p.ty()).map(Expr::Eta)
            }
            "sym" => {
                self.bump();
                self.bracketed(|p| {
                    let a = p.ty()?;
                    p.expect(Tok::Comma)?;
                    Ok(Expr::Sym(a, p.ty()?))
                })
            }
            "sdim" => {
                self.bump();
                self.bracketed(|p| {
                    let a = p.ty()?;
                    p.expect(Tok::Comma)?;
                    match p.peek().clone() {
                        Tok::Int(n) => {
                            p.bump();
                            Ok(Expr::Sdim(a, n))
                        }
                        _ => p.fail("an integer half-power"),
                    }
                })
            }
            "delta" | "eps" => {
                self.bump();
                let (name, pos) = self.bracketed(|p| p.name("a classical object name"))?;
                Ok(if kw == "delta" {
                    Expr::Delta(name, pos)
                } else {
                    Expr::Eps(name, pos)
                })
            }
            "dag" | "conj" => {
                self.bump();
                let inner = Box::new(self.parened()?);
                Ok(if kw == "dag" {
                    Expr::Dag(inner)
                } else {
                    Expr::Conj(inner)
                })
            }
            _ => {
                let (name, pos) = self.name("an expression")?;
                Ok(Expr::Name(name, pos))
            }
        }
    }

    fn stmt(&mut self) -> Result<(Stmt, Pos), ParseError> {
        let pos = self.pos();
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.fail("a declaration, definition or `assert`"),
        };
        let stmt = match kw.as_str() {
            "object" | "classical" | "scalar" => {
                self.bump();
                let (name, _) = self.name("a name")?;
                match kw.as_str() {
                    "object" => Stmt::Object(name),
                    "classical" => Stmt::Classical(name),
                    _ => Stmt::Scalar(name),
                }
            }
            "gen" => {
                self.bump();
                let (name, _) = self.name("a generator name")?;
                self.expect(Tok::Colon)?;
                let dom = self.ty()?;
                self.expect(Tok::Arrow)?;
                let cod = self.ty()?;
                Stmt::Gen { name, dom, cod }
            }
            "assert" => {
                self.bump();
                let lhs = self.expr()?;
                let equal = match self.peek() {
                    Tok::EqEq => true,
                    Tok::NotEq => false,
                    _ => return self.fail("`==` or `!=`"),
                };
                self.bump();
                let rhs = self.expr()?;
                Stmt::Assert { lhs, rhs, equal }
            }
            _ => {
                let (name, _) = self.name("a declaration, definition or `assert`")?;
                self.expect(Tok::Define)?;
                Stmt::Define(name, self.expr()?)
            }
        };
        self.end_of_statement()?;
        Ok((stmt, pos))
    }
}

pub fn parse(src: &str) -> Result<SourceFile, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    p.skip_newlines();
    let mut stmts = Vec::new();
    while *p.peek() != Tok::Eof {
        stmts.push(p.stmt()?);
    }
    Ok(SourceFile { stmts })
}

/// A single expression, which may not span lines.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        Tok::Newline => p.fail("a single-line expression"),
        _ => p.fail("`;`, `(x)` or end of input"),
    }
}

/// A single type such as `A * B^d` or `I`.
pub fn parse_type(src: &str) -> Result<ObjectWord, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let t = p.ty()?;
    match p.peek() {
        Tok::Eof => Ok(t),
        _ => p.fail("`*` or end of input"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> ObjectWord {
        ObjectWord::base("X")
    }

    #[test]
    fn counit_law_lhs() {
        let e = parse_expr("delta[X] ; (eps[X] (x) id[X])").unwrap();
        let Expr::Seq(first, second) = e else {
            panic!("not a sequence")
        };
        assert!(matches!(*first, Expr::Delta(ref n, _) if n == "X"));
        let Expr::Tensor(l, r) = *second else {
            panic!("not a tensor")
        };
        assert!(matches!(*l, Expr::Eps(ref n, _) if n == "X"));
        assert_eq!(*r, Expr::Id(x()));
    }

    #[test]
    fn dimension_scalar() {
        let e = parse_expr("eta[A] ; dag(eta[A])").unwrap();
        assert!(matches!(e, Expr::Seq(..)));
    }

    #[test]
    fn dangling_operator() {
        let err = parse_expr("delta[X] ;").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 11 });
        assert_eq!(err.expected, "an expression");
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("f ; g (x) h ; k").unwrap();
        let Expr::Seq(left, k) = e else { panic!() };
        assert!(matches!(*k, Expr::Name(ref n, _) if n == "k"));
        let Expr::Seq(f, gh) = *left else { panic!() };
        assert!(matches!(*f, Expr::Name(ref n, _) if n == "f"));
        assert!(matches!(*gh, Expr::Tensor(..)));
    }

    #[test]
    fn types() {
        let w = parse_type("A * B^d").unwrap();
        assert_eq!(w.to_string(), "A * B^d");
        assert_eq!(parse_type("I").unwrap(), ObjectWord::unit());
        assert!(parse_type("A *").is_err());
    }

    #[test]
    fn file_positions() {
        let src = "object A\n\ngen f : A -> A * A\nassert f ; == f\n";
        let err = parse(src).unwrap_err();
        assert_eq!(err.pos, Pos { line: 4, col: 12 });
        let ok = parse("object A\ngen f : A -> A\n# note\ng := dag(f) ; f\nassert g == g\n").unwrap();
        assert_eq!(ok.stmts.len(), 4);
        assert_eq!(ok.stmts[3].1, Pos { line: 5, col: 1 });
    }

    #[test]
    fn errors_name_the_expected_token() {
        assert!(parse("// note\nobject A # trailing\n").is_ok());
        let err = parse("gen f A -> A").unwrap_err();
        assert_eq!((err.pos.col, err.expected.as_str()), (7, "`:`"));
        let err = parse("object id").unwrap_err();
        assert_eq!(err.expected, "a name");
        let err = parse("assert f = g").unwrap_err();
        assert_eq!(err.found, "character `=`");
        let err = parse_expr("sdim[A, x]").unwrap_err();
        assert_eq!(err.expected, "an integer half-power");
    }
}
