//! The line-oriented script language: tokens, syntax tree, parser and printer.
//!
//! ```text
//! field K = ratfunc(F2; x1, x2, x3)
//! derivation d on K: x1 -> x2, x2 -> x3, x3 -> x1
//! derivation dp = d^2
//! ring A = ore(K, x; delta = d; central = t)
//! element z = x^4 - x in A
//! assert central(z in A)
//! ```

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Num(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

const SYMBOLS: [&str; 15] = ["->", "+", "-", "*", "/", "^", "(", ")", "[", "]", ",", ";", ":", "=", "."];

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(chars[start..i].iter().collect()), col));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push((Tok::Sym(s), col));
                i += s.len();
            }
            None => return Err(ParseError { line, column: col, message: format!("unexpected character `{c}`") }),
        }
    }
    Ok(out)
}

/// Arithmetic expressions. Products are noncommutative and read left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(String),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
    Commutator(Box<Expr>, Box<Expr>),
    Call(String, Box<Expr>),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.prec();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Expr::Num(s) | Expr::Ident(s) => write!(f, "{s}")?,
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 4)?;
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Pow(a, n) => {
                a.fmt_prec(f, 5)?;
                write!(f, "^{n}")?;
            }
            Expr::Commutator(a, b) => write!(f, "[{a}, {b}]")?,
            Expr::Call(name, a) => write!(f, "{name}({a})")?,
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assertion {
    Central { expr: Expr, ring: String },
    Equal { lhs: Expr, rhs: Expr, ring: String },
    NotEqual { lhs: Expr, rhs: Expr, ring: String },
    Zero { expr: Expr, ring: String },
    DerivationsEqual { lhs: String, rhs: String },
    Hom { hom: String },
    Preimage { hom: String, source: Expr, target: Expr },
    Kernel { jet: String, expr: Expr },
    HsAxiom { jet: String, lhs: Expr, rhs: Expr },
    Iterative { jet: String, expr: Expr },
    Nu { jet: String, expr: Expr, value: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Field { name: String, scalar: String, vars: Vec<String> },
    Derivation { name: String, field: String, images: Vec<(String, Expr)> },
    DerivationPower { name: String, base: String, exponent: u64 },
    Automorphism { name: String, field: String, images: Vec<(String, Expr)> },
    Ring { name: String, field: String, skew: String, sigma: Option<String>, delta: Option<String>, central: Vec<String> },
    Element { name: String, expr: Expr, ring: String },
    Jet { name: String, ring: String, series: String, truncation: Option<usize>, images: Vec<(String, Expr)> },
    Hom { name: String, source: String, target: String, images: Vec<(String, Expr)> },
    Assert(Assertion),
    Show { expr: Expr, ring: String },
}

impl Stmt {
    /// The name this statement introduces, if any.
    pub fn defines(&self) -> Option<&str> {
        match self {
            Stmt::Field { name, .. }
            | Stmt::Derivation { name, .. }
            | Stmt::DerivationPower { name, .. }
            | Stmt::Automorphism { name, .. }
            | Stmt::Ring { name, .. }
            | Stmt::Element { name, .. }
            | Stmt::Jet { name, .. }
            | Stmt::Hom { name, .. } => Some(name),
            Stmt::Assert(_) | Stmt::Show { .. } => None,
        }
    }

    /// Top-level names this statement refers to.
    pub fn references(&self) -> Vec<&str> {
        match self {
            Stmt::Field { .. } => vec![],
            Stmt::Derivation { field, .. } | Stmt::Automorphism { field, .. } => vec![field],
            Stmt::DerivationPower { base, .. } => vec![base],
            Stmt::Ring { field, sigma, delta, .. } => {
                let mut v = vec![field.as_str()];
                v.extend(sigma.as_deref());
                v.extend(delta.as_deref());
                v
            }
            Stmt::Element { ring, .. } | Stmt::Show { ring, .. } | Stmt::Jet { ring, .. } => vec![ring],
            Stmt::Hom { source, target, .. } => vec![source, target],
            Stmt::Assert(a) => match a {
                Assertion::Central { ring, .. }
                | Assertion::Equal { ring, .. }
                | Assertion::NotEqual { ring, .. }
                | Assertion::Zero { ring, .. } => vec![ring],
                Assertion::DerivationsEqual { lhs, rhs } => vec![lhs, rhs],
                Assertion::Hom { hom } | Assertion::Preimage { hom, .. } => vec![hom],
                Assertion::Kernel { jet, .. }
                | Assertion::HsAxiom { jet, .. }
                | Assertion::Iterative { jet, .. }
                | Assertion::Nu { jet, .. } => vec![jet],
            },
        }
    }
}

fn fmt_images(f: &mut fmt::Formatter<'_>, images: &[(String, Expr)]) -> fmt::Result {
    for (i, (g, e)) in images.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{g} -> {e}")?;
    }
    Ok(())
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Central { expr, ring } => write!(f, "central({expr} in {ring})"),
            Assertion::Equal { lhs, rhs, ring } => write!(f, "equal({lhs}, {rhs} in {ring})"),
            Assertion::NotEqual { lhs, rhs, ring } => write!(f, "notequal({lhs}, {rhs} in {ring})"),
            Assertion::Zero { expr, ring } => write!(f, "zero({expr} in {ring})"),
            Assertion::DerivationsEqual { lhs, rhs } => write!(f, "derivations_equal({lhs}, {rhs})"),
            Assertion::Hom { hom } => write!(f, "hom({hom})"),
            Assertion::Preimage { hom, source, target } => write!(f, "preimage({hom}, {source}, {target})"),
            Assertion::Kernel { jet, expr } => write!(f, "kernel({jet}, {expr})"),
            Assertion::HsAxiom { jet, lhs, rhs } => write!(f, "hs_axiom({jet}; {lhs}, {rhs})"),
            Assertion::Iterative { jet, expr } => write!(f, "iterative({jet}; {expr})"),
            Assertion::Nu { jet, expr, value } => write!(f, "nu({jet}, {expr}) = {value}"),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Field { name, scalar, vars } => write!(f, "field {name} = ratfunc({scalar}; {})", vars.join(", ")),
            Stmt::Derivation { name, field, images } => {
                write!(f, "derivation {name} on {field}: ")?;
                fmt_images(f, images)
            }
            Stmt::DerivationPower { name, base, exponent } => write!(f, "derivation {name} = {base}^{exponent}"),
            Stmt::Automorphism { name, field, images } => {
                write!(f, "automorphism {name} on {field}: ")?;
                fmt_images(f, images)
            }
            Stmt::Ring { name, field, skew, sigma, delta, central } => {
                write!(f, "ring {name} = ore({field}, {skew}")?;
                if let Some(s) = sigma {
                    write!(f, "; sigma = {s}")?;
                }
                if let Some(d) = delta {
                    write!(f, "; delta = {d}")?;
                }
                if !central.is_empty() {
                    write!(f, "; central = {}", central.join(", "))?;
                }
                write!(f, ")")
            }
            Stmt::Element { name, expr, ring } => write!(f, "element {name} = {expr} in {ring}"),
            Stmt::Jet { name, ring, series, truncation, images } => {
                write!(f, "jet {name} on {ring} series {series}")?;
                if let Some(n) = truncation {
                    write!(f, " truncation {n}")?;
                }
                write!(f, ": ")?;
                fmt_images(f, images)
            }
            Stmt::Hom { name, source, target, images } => {
                write!(f, "hom {name}: {source} -> {target}: ")?;
                fmt_images(f, images)
            }
            Stmt::Assert(a) => write!(f, "assert {a}"),
            Stmt::Show { expr, ring } => write!(f, "show {expr} in {ring}"),
        }
    }
}

/// A statement with its 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub number: usize,
    pub stmt: Stmt,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Script {
    pub lines: Vec<Line>,
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{}", l.stmt)?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let column = self.toks.get(self.pos).map_or(self.end_col, |t| t.1);
        Err(ParseError { line: self.line, column, message: message.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn peek_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == w)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.peek_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.unexpected(&format!("`{s}`"))
        }
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        match self.peek() {
            Some(t) => self.err(format!("expected {wanted}, found {t}")),
            None => self.err(format!("expected {wanted}, found end of line")),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.unexpected("a name"),
        }
    }

    fn keyword(&mut self, w: &str) -> Result<(), ParseError> {
        if self.peek_word(w) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(&format!("`{w}`"))
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Num(s)) => {
                let v = s.parse().or_else(|_| self.err("number too large"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => self.unexpected("a number"),
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.unexpected("end of line")
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_sym("+") {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat_sym("-") {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_sym("*") {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat_sym("/") {
                acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.eat_sym("^") {
            base = Expr::Pow(Box::new(base), self.number()?);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(Expr::Num(s))
            }
            Some(Tok::Ident(s)) if s != "in" => {
                self.pos += 1;
                if self.eat_sym("(") {
                    let arg = self.expr()?;
                    self.expect_sym(")")?;
                    Ok(Expr::Call(s, Box::new(arg)))
                } else {
                    Ok(Expr::Ident(s))
                }
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Some(Tok::Sym("[")) => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect_sym(",")?;
                let b = self.expr()?;
                self.expect_sym("]")?;
                Ok(Expr::Commutator(Box::new(a), Box::new(b)))
            }
            _ => self.unexpected("an expression"),
        }
    }

    fn images(&mut self) -> Result<Vec<(String, Expr)>, ParseError> {
        let mut out = Vec::new();
        if self.pos == self.toks.len() {
            return Ok(out);
        }
        loop {
            let g = self.ident()?;
            self.expect_sym("->")?;
            out.push((g, self.expr()?));
            if !self.eat_sym(",") {
                return Ok(out);
            }
        }
    }

    fn name_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = Vec::new();
        if !matches!(self.peek(), Some(Tok::Ident(_))) {
            return Ok(out);
        }
        loop {
            out.push(self.ident()?);
            if !self.eat_sym(",") {
                return Ok(out);
            }
        }
    }

    fn in_ring(&mut self) -> Result<String, ParseError> {
        self.keyword("in")?;
        self.ident()
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let kw = self.ident()?;
        let stmt = match kw.as_str() {
            "field" => {
                let name = self.ident()?;
                self.expect_sym("=")?;
                self.keyword("ratfunc")?;
                self.expect_sym("(")?;
                let scalar = self.ident()?;
                self.expect_sym(";")?;
                let vars = self.name_list()?;
                self.expect_sym(")")?;
                Stmt::Field { name, scalar, vars }
            }
            "derivation" => {
                let name = self.ident()?;
                if self.eat_sym("=") {
                    let base = self.ident()?;
                    self.expect_sym("^")?;
                    let exponent = self.number()?;
                    Stmt::DerivationPower { name, base, exponent }
                } else {
                    self.keyword("on")?;
                    let field = self.ident()?;
                    self.expect_sym(":")?;
                    Stmt::Derivation { name, field, images: self.images()? }
                }
            }
            "automorphism" => {
                let name = self.ident()?;
                self.keyword("on")?;
                let field = self.ident()?;
                self.expect_sym(":")?;
                Stmt::Automorphism { name, field, images: self.images()? }
            }
            "ring" => {
                let name = self.ident()?;
                self.expect_sym("=")?;
                self.keyword("ore")?;
                self.expect_sym("(")?;
                let field = self.ident()?;
                self.expect_sym(",")?;
                let skew = self.ident()?;
                let (mut sigma, mut delta, mut central) = (None, None, Vec::new());
                while self.eat_sym(";") {
                    let key = self.ident()?;
                    self.expect_sym("=")?;
                    match key.as_str() {
                        "sigma" => sigma = Some(self.ident()?),
                        "delta" => delta = Some(self.ident()?),
                        "central" => central = self.name_list()?,
                        _ => {
                            self.pos -= 2;
                            return self.err(format!("unknown ring option `{key}`"));
                        }
                    }
                }
                self.expect_sym(")")?;
                Stmt::Ring { name, field, skew, sigma, delta, central }
            }
            "element" => {
                let name = self.ident()?;
                self.expect_sym("=")?;
                let expr = self.expr()?;
                Stmt::Element { name, expr, ring: self.in_ring()? }
            }
            "jet" => {
                let name = self.ident()?;
                self.keyword("on")?;
                let ring = self.ident()?;
                let mut series = "s".to_string();
                let mut truncation = None;
                loop {
                    if self.peek_word("series") {
                        self.pos += 1;
                        series = self.ident()?;
                    } else if self.peek_word("truncation") {
                        self.pos += 1;
                        truncation = Some(self.number()? as usize);
                    } else {
                        break;
                    }
                }
                self.expect_sym(":")?;
                Stmt::Jet { name, ring, series, truncation, images: self.images()? }
            }
            "hom" => {
                let name = self.ident()?;
                self.expect_sym(":")?;
                let source = self.ident()?;
                self.expect_sym("->")?;
                let target = self.ident()?;
                self.expect_sym(":")?;
                Stmt::Hom { name, source, target, images: self.images()? }
            }
            "show" => {
                let expr = self.expr()?;
                Stmt::Show { expr, ring: self.in_ring()? }
            }
            "assert" => Stmt::Assert(self.assertion()?),
            _ => {
                self.pos -= 1;
                return self.err(format!("unknown statement `{kw}`"));
            }
        };
        self.done()?;
        Ok(stmt)
    }

    fn assertion(&mut self) -> Result<Assertion, ParseError> {
        let kind = self.ident()?;
        self.expect_sym("(")?;
        let a = match kind.as_str() {
            "central" => {
                let expr = self.expr()?;
                Assertion::Central { expr, ring: self.in_ring()? }
            }
            "equal" | "notequal" => {
                let lhs = self.expr()?;
                self.expect_sym(",")?;
                let rhs = self.expr()?;
                let ring = self.in_ring()?;
                if kind == "equal" {
                    Assertion::Equal { lhs, rhs, ring }
                } else {
                    Assertion::NotEqual { lhs, rhs, ring }
                }
            }
            "zero" => {
                let expr = self.expr()?;
                Assertion::Zero { expr, ring: self.in_ring()? }
            }
            "derivations_equal" => {
                let lhs = self.ident()?;
                self.expect_sym(",")?;
                Assertion::DerivationsEqual { lhs, rhs: self.ident()? }
            }
            "hom" => Assertion::Hom { hom: self.ident()? },
            "preimage" => {
                let hom = self.ident()?;
                self.expect_sym(",")?;
                let source = self.expr()?;
                self.expect_sym(",")?;
                Assertion::Preimage { hom, source, target: self.expr()? }
            }
            "kernel" => {
                let jet = self.ident()?;
                self.expect_sym(",")?;
                Assertion::Kernel { jet, expr: self.expr()? }
            }
            "hs_axiom" => {
                let jet = self.ident()?;
                self.expect_sym(";")?;
                let lhs = self.expr()?;
                self.expect_sym(",")?;
                Assertion::HsAxiom { jet, lhs, rhs: self.expr()? }
            }
            "iterative" => {
                let jet = self.ident()?;
                self.expect_sym(";")?;
                Assertion::Iterative { jet, expr: self.expr()? }
            }
            "nu" => {
                let jet = self.ident()?;
                self.expect_sym(",")?;
                let expr = self.expr()?;
                self.expect_sym(")")?;
                self.expect_sym("=")?;
                let value = self.number()? as usize;
                return Ok(Assertion::Nu { jet, expr, value });
            }
            _ => {
                self.pos -= 2;
                return self.err(format!("unknown assertion `{kind}`"));
            }
        };
        self.expect_sym(")")?;
        Ok(a)
    }
}

/// Parses one statement; `None` for blank and comment lines.
pub fn parse_line(text: &str, line: usize) -> Result<Option<Stmt>, ParseError> {
    let toks = lex(text, line)?;
    if toks.is_empty() {
        return Ok(None);
    }
    let mut p = Parser { toks: &toks, pos: 0, line, end_col: text.trim_end().chars().count() + 1 };
    p.statement().map(Some)
}

/// Parses and checks that every definition is unique and every referenced
/// top-level name is defined on an earlier line.
pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut lines = Vec::new();
    let mut defined = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let Some(stmt) = parse_line(raw, number)? else { continue };
        check_names(&stmt, raw, number, &defined)?;
        if let Some(n) = stmt.defines() {
            defined.insert(n.to_string());
        }
        lines.push(Line { number, stmt });
    }
    Ok(Script { lines })
}

/// Name-resolution check for one statement against the names defined so far.
pub fn check_names(stmt: &Stmt, raw: &str, line: usize, defined: &HashSet<String>) -> Result<(), ParseError> {
    let column_of = |name: &str| {
        lex(raw, line)
            .ok()
            .and_then(|toks| toks.into_iter().find(|(t, _)| *t == Tok::Ident(name.to_string())).map(|t| t.1))
            .unwrap_or(1)
    };
    if let Some(n) = stmt.defines() {
        if defined.contains(n) {
            return Err(ParseError { line, column: column_of(n), message: format!("`{n}` is already defined") });
        }
    }
    for r in stmt.references() {
        if !defined.contains(r) {
            return Err(ParseError { line, column: column_of(r), message: format!("undefined name `{r}`") });
        }
    }
    Ok(())
}
