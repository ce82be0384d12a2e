//! Problem files and the expression mini-language.
//!
//! A problem file is a list of `key: value` entries separated by commas or
//! newlines. `#` starts a comment.
//!
//! ```text
//! n: 1
//! objectives: ["-x1^2", "x1"]
//! constraints: box [[0, inf]]
//! ```
//!
//! `constraints` is one of `full`, `box [[lo, hi], ...]`,
//! `polyhedron ["a*x <= b", ...]` or `smooth ["g(x) <= 0", ...]`. `n` and
//! `m` are optional and checked when present.

use std::fmt;

use vecopt_core::{Expr, FeasibleSet, HalfSpace, Problem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn err<T>(self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }
}

/// Parses a single expression. Variables are `x1`, `x2`, ...; with
/// `n = Some(k)` only `x1..xk` are known.
pub fn parse_expr(text: &str, n: Option<usize>) -> PResult<Expr> {
    ExprParser::new(text, Pos { line: 1, column: 1 }, n)?.run()
}

/// Parses a problem file.
pub fn parse_problem(text: &str) -> PResult<Problem> {
    DocParser::new(text).run()
}

// ---------------------------------------------------------------------------
// expressions

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    Le,
    End,
}

struct ExprParser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    n: Option<usize>,
}

fn lex(text: &str, base: Pos) -> PResult<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let pos = |i: usize| Pos {
        line: base.line,
        column: base.column + i,
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            match s.parse::<f64>() {
                Ok(v) => out.push((Tok::Num(v), pos(start))),
                Err(_) => return pos(start).err(format!("malformed number '{s}'")),
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos(start)));
        } else if c == '<' && chars.get(i + 1) == Some(&'=') {
            out.push((Tok::Le, pos(i)));
            i += 2;
        } else if "+-*^(),".contains(c) {
            out.push((Tok::Op(c), pos(i)));
            i += 1;
        } else {
            return pos(i).err(format!("unexpected character '{c}'"));
        }
    }
    out.push((Tok::End, pos(chars.len())));
    Ok(out)
}

impl ExprParser {
    fn new(text: &str, base: Pos, n: Option<usize>) -> PResult<Self> {
        Ok(ExprParser {
            toks: lex(text, base)?,
            at: 0,
            n,
        })
    }

    fn run(mut self) -> PResult<Expr> {
        let e = self.sum()?;
        self.finish()?;
        Ok(e)
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            self.pos().err(format!("expected '{c}'"))
        }
    }

    fn finish(&self) -> PResult<()> {
        match self.peek() {
            Tok::End => Ok(()),
            t => self.pos().err(format!("unexpected {}", describe(t))),
        }
    }

    fn sum(&mut self) -> PResult<Expr> {
        let first = self.product()?;
        let mut terms = vec![first];
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    terms.push(self.product()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    terms.push(Expr::Neg(Box::new(self.product()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut factors = vec![self.unary()?];
        while *self.peek() == Tok::Op('*') {
            self.bump();
            factors.push(self.unary()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) })
    }

    fn unary(&mut self) -> PResult<Expr> {
        if *self.peek() != Tok::Op('-') {
            return self.power();
        }
        self.bump();
        // a minus directly on a literal is a negative constant, unless the
        // literal is raised to a power (-2^2 is -(2^2))
        if let Tok::Num(v) = *self.peek() {
            if self.toks[self.at + 1].0 != Tok::Op('^') {
                self.bump();
                return Ok(Expr::Const(-v));
            }
        }
        Ok(Expr::Neg(Box::new(self.unary()?)))
    }

    fn power(&mut self) -> PResult<Expr> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Op('^') {
            self.bump();
            let at = self.pos();
            match self.bump() {
                Tok::Num(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                    base = Expr::Pow(Box::new(base), v as u32);
                }
                _ => return at.err("exponent must be a nonnegative integer literal"),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let at = self.pos();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::Op('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::Op('(') {
                    self.bump();
                    let mut args = vec![self.sum()?];
                    while *self.peek() == Tok::Op(',') {
                        self.bump();
                        args.push(self.sum()?);
                    }
                    self.expect(')')?;
                    self.call(&name, args, at)
                } else {
                    self.variable(&name, at)
                }
            }
            t => at.err(format!("unexpected {}", describe(&t))),
        }
    }

    fn call(&self, name: &str, mut args: Vec<Expr>, at: Pos) -> PResult<Expr> {
        let unary = |args: &mut Vec<Expr>| -> PResult<Box<Expr>> {
            if args.len() != 1 {
                return at.err(format!("{name} takes 1 argument, got {}", args.len()));
            }
            Ok(Box::new(args.pop().unwrap()))
        };
        match name {
            "sin" => Ok(Expr::Sin(unary(&mut args)?)),
            "cos" => Ok(Expr::Cos(unary(&mut args)?)),
            "exp" => Ok(Expr::Exp(unary(&mut args)?)),
            "abs" => Ok(Expr::Abs(unary(&mut args)?)),
            "max" | "min" => {
                if args.len() < 2 {
                    return at.err(format!("{name} takes at least 2 arguments, got {}", args.len()));
                }
                Ok(if name == "max" { Expr::Max(args) } else { Expr::Min(args) })
            }
            _ => at.err(format!("unknown function '{name}'")),
        }
    }

    fn variable(&self, name: &str, at: Pos) -> PResult<Expr> {
        let idx = name
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) && !d.starts_with('0'))
            .and_then(|d| d.parse::<usize>().ok());
        match idx {
            Some(i) if self.n.is_none_or(|n| i <= n) => Ok(Expr::Var(i - 1)),
            _ => at.err(format!("unknown identifier '{name}'")),
        }
    }

    /// `lhs <= rhs` as the pair of sides.
    fn inequality(&mut self) -> PResult<(Expr, Expr)> {
        let lhs = self.sum()?;
        if *self.peek() != Tok::Le {
            return self.pos().err("expected '<='");
        }
        self.bump();
        let rhs = self.sum()?;
        self.finish()?;
        Ok((lhs, rhs))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Op(c) => format!("'{c}'"),
        Tok::Le => "'<='".into(),
        Tok::End => "end of expression".into(),
    }
}

/// Coefficients and constant of an affine expression, `None` otherwise.
fn affine(e: &Expr, n: usize) -> Option<(Vec<f64>, f64)> {
    match e {
        Expr::Const(c) => Some((vec![0.0; n], *c)),
        Expr::Var(i) => {
            let mut a = vec![0.0; n];
            *a.get_mut(*i)? = 1.0;
            Some((a, 0.0))
        }
        Expr::Neg(u) => {
            let (a, c) = affine(u, n)?;
            Some((a.iter().map(|v| -v).collect(), -c))
        }
        Expr::Add(cs) => cs.iter().try_fold((vec![0.0; n], 0.0), |(mut a, c), t| {
            let (b, d) = affine(t, n)?;
            for (x, y) in a.iter_mut().zip(&b) {
                *x += y;
            }
            Some((a, c + d))
        }),
        Expr::Mul(cs) => {
            let mut scale = 1.0;
            let mut linear: Option<(Vec<f64>, f64)> = None;
            for t in cs {
                let (b, d) = affine(t, n)?;
                if b.iter().all(|v| *v == 0.0) {
                    scale *= d;
                } else if linear.is_none() {
                    linear = Some((b, d));
                } else {
                    return None;
                }
            }
            Some(match linear {
                Some((b, d)) => (b.iter().map(|v| scale * v).collect(), scale * d),
                None => (vec![0.0; n], scale),
            })
        }
        Expr::Pow(u, k) => {
            let (b, d) = affine(u, n)?;
            match k {
                0 => Some((vec![0.0; n], 1.0)),
                1 => Some((b, d)),
                _ if b.iter().all(|v| *v == 0.0) => Some((b, d.powi(*k as i32))),
                _ => None,
            }
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// documents

enum Constraints {
    Full,
    Box(Vec<(f64, f64)>),
    Polyhedron(Vec<(String, Pos)>),
    Smooth(Vec<(String, Pos)>),
}

struct DocParser {
    chars: Vec<char>,
    at: usize,
    line: usize,
    column: usize,
}

impl DocParser {
    fn new(text: &str) -> Self {
        DocParser {
            chars: text.chars().collect(),
            at: 0,
            line: 1,
            column: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.at += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    /// Skips blanks and comments; newlines too when `newlines` is set.
    fn skip(&mut self, newlines: bool) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c == '\n' && !newlines {
                break;
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        self.skip(true);
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            self.pos().err(format!("expected '{c}'"))
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '-' || *c == '+' || *c == '.') {
            s.push(c);
            self.bump();
        }
        s
    }

    fn integer(&mut self) -> PResult<usize> {
        self.skip(false);
        let at = self.pos();
        let w = self.word();
        w.parse::<usize>().or_else(|_| at.err(format!("expected an integer, got '{w}'")))
    }

    fn bound(&mut self) -> PResult<f64> {
        self.skip(true);
        let at = self.pos();
        let w = self.word();
        match w.as_str() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => match w.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => at.err(format!("expected a number or inf, got '{w}'")),
            },
        }
    }

    fn string(&mut self) -> PResult<(String, Pos)> {
        self.skip(true);
        if self.peek() != Some('"') {
            return self.pos().err("expected '\"'");
        }
        self.bump();
        let start = self.pos();
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok((s, start)),
                Some('\n') | None => return start.err("unterminated string"),
                Some('\\') => return Pos { column: self.column - 1, ..self.pos() }.err("escapes are not supported"),
                Some(c) => s.push(c),
            }
        }
    }

    /// `[item, item, ...]`, possibly empty, newlines allowed inside.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect('[')?;
        let mut out = Vec::new();
        self.skip(true);
        if self.peek() == Some(']') {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            self.skip(true);
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some(']') => {
                    self.bump();
                    return Ok(out);
                }
                _ => return self.pos().err("expected ',' or ']'"),
            }
        }
    }

    fn constraints(&mut self) -> PResult<Constraints> {
        self.skip(false);
        let at = self.pos();
        let kind = self.word();
        match kind.as_str() {
            "full" => Ok(Constraints::Full),
            "box" => {
                let b = self.list(|p| {
                    p.expect('[')?;
                    let lo = p.bound()?;
                    p.expect(',')?;
                    let hi = p.bound()?;
                    p.expect(']')?;
                    Ok((lo, hi))
                })?;
                Ok(Constraints::Box(b))
            }
            "polyhedron" => Ok(Constraints::Polyhedron(self.list(Self::string)?)),
            "smooth" => Ok(Constraints::Smooth(self.list(Self::string)?)),
            _ => at.err(format!("unknown constraint kind '{kind}' (full, box, polyhedron, smooth)")),
        }
    }

    fn run(mut self) -> PResult<Problem> {
        let mut n: Option<(usize, Pos)> = None;
        let mut m: Option<(usize, Pos)> = None;
        let mut objectives: Option<(Vec<(String, Pos)>, Pos)> = None;
        let mut constraints: Option<(Constraints, Pos)> = None;
        loop {
            self.skip(true);
            while self.peek() == Some(',') {
                self.bump();
                self.skip(true);
            }
            if self.peek().is_none() {
                break;
            }
            let at = self.pos();
            let key = self.word();
            if key.is_empty() {
                return at.err(format!("expected a key, got '{}'", self.peek().unwrap()));
            }
            self.skip(false);
            if self.peek() != Some(':') {
                return self.pos().err("expected ':'");
            }
            self.bump();
            let dup = match key.as_str() {
                "n" => n.replace((self.integer()?, at)).is_some(),
                "m" => m.replace((self.integer()?, at)).is_some(),
                "objectives" => objectives.replace((self.list(Self::string)?, at)).is_some(),
                "constraints" => constraints.replace((self.constraints()?, at)).is_some(),
                _ => return at.err(format!("unknown key '{key}' (n, m, objectives, constraints)")),
            };
            if dup {
                return at.err(format!("duplicate key '{key}'"));
            }
            self.skip(false);
            match self.peek() {
                None | Some('\n') | Some(',') => {}
                Some(c) => return self.pos().err(format!("unexpected '{c}' after value")),
            }
        }
        let end = self.pos();
        let Some((objectives, obj_at)) = objectives else {
            return end.err("missing key 'objectives'");
        };
        if objectives.is_empty() {
            return obj_at.err("need at least one objective");
        }
        let fixed_n = n.map(|(v, _)| v);
        if let Some((0, at)) = n {
            return at.err("n must be positive");
        }
        let parse_all = |rows: &[(String, Pos)]| -> PResult<Vec<Expr>> {
            rows.iter()
                .map(|(s, p)| ExprParser::new(s, *p, fixed_n)?.run())
                .collect()
        };
        let fs = parse_all(&objectives)?;
        let mut max_var = fs.iter().filter_map(Expr::max_var).max();
        let constraints = constraints.unwrap_or((Constraints::Full, end));
        let mut raw_rows: Vec<(Expr, Expr, Pos)> = Vec::new();
        if let Constraints::Polyhedron(rows) | Constraints::Smooth(rows) = &constraints.0 {
            for (s, p) in rows {
                let (l, r) = ExprParser::new(s, *p, fixed_n)?.inequality()?;
                for e in [&l, &r] {
                    max_var = max_var.max(e.max_var());
                }
                raw_rows.push((l, r, *p));
            }
        }
        let dim = match (&constraints.0, fixed_n) {
            (_, Some(v)) => v,
            (Constraints::Box(b), None) => b.len(),
            _ => max_var.map_or(1, |v| v + 1),
        };
        if let Some(v) = max_var {
            if v >= dim {
                return constraints.1.err(format!("variable x{} exceeds the box dimension {dim}", v + 1));
            }
        }
        if let Some((mv, at)) = m {
            if mv != fs.len() {
                return at.err(format!("m = {mv} but {} objectives are listed", fs.len()));
            }
        }
        let set = match constraints.0 {
            Constraints::Full => FeasibleSet::Full,
            Constraints::Box(b) => {
                if b.len() != dim {
                    return constraints.1.err(format!("box has {} intervals, n = {dim}", b.len()));
                }
                if let Some(i) = b.iter().position(|(l, u)| l > u) {
                    return constraints.1.err(format!("box interval {} is empty", i + 1));
                }
                FeasibleSet::Box {
                    lower: b.iter().map(|p| p.0).collect(),
                    upper: b.iter().map(|p| p.1).collect(),
                }
            }
            Constraints::Polyhedron(_) => {
                let mut rows = Vec::with_capacity(raw_rows.len());
                for (l, r, p) in raw_rows {
                    let (Some((a, c)), Some((b, d))) = (affine(&l, dim), affine(&r, dim)) else {
                        return p.err("polyhedron rows must be affine");
                    };
                    let normal: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                    if normal.iter().all(|v| *v == 0.0) {
                        return p.err("polyhedron row has a zero normal");
                    }
                    rows.push(HalfSpace { normal, offset: d - c });
                }
                FeasibleSet::Polyhedron(rows)
            }
            Constraints::Smooth(_) => FeasibleSet::SmoothIneq(
                raw_rows
                    .into_iter()
                    .map(|(l, r, _)| if r == Expr::Const(0.0) { l } else { Expr::Add(vec![l, Expr::Neg(Box::new(r))]) })
                    .collect(),
            ),
        };
        Problem::new(dim, fs, set).or_else(|e| obj_at.err(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// rendering

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(_) => 0,
        Expr::Mul(_) => 1,
        Expr::Neg(_) => 2,
        Expr::Const(c) if c.is_sign_negative() => 2,
        Expr::Pow(..) => 3,
        _ => 4,
    }
}

fn render_at(e: &Expr, min: u8, out: &mut String) {
    if level(e) < min {
        out.push('(');
        render_into(e, out);
        out.push(')');
    } else {
        render_into(e, out);
    }
}

fn render_into(e: &Expr, out: &mut String) {
    use std::fmt::Write;
    match e {
        Expr::Const(c) => write!(out, "{c}").unwrap(),
        Expr::Var(i) => write!(out, "x{}", i + 1).unwrap(),
        Expr::Add(cs) => {
            for (k, t) in cs.iter().enumerate() {
                match (k, t) {
                    (0, _) => render_at(t, 1, out),
                    (_, Expr::Neg(u)) => {
                        out.push_str(" - ");
                        render_at(u, 1, out);
                    }
                    _ => {
                        out.push_str(" + ");
                        render_at(t, 1, out);
                    }
                }
            }
        }
        Expr::Mul(cs) => {
            for (k, t) in cs.iter().enumerate() {
                if k > 0 {
                    out.push('*');
                }
                render_at(t, 2, out);
            }
        }
        Expr::Neg(u) => {
            out.push('-');
            match **u {
                // keep -(2) apart from the literal -2
                Expr::Const(c) if !c.is_sign_negative() => write!(out, "({c})").unwrap(),
                _ => render_at(u, 2, out),
            }
        }
        Expr::Pow(u, k) => {
            render_at(u, 4, out);
            write!(out, "^{k}").unwrap();
        }
        Expr::Sin(u) | Expr::Cos(u) | Expr::Exp(u) | Expr::Abs(u) => {
            out.push_str(match e {
                Expr::Sin(_) => "sin(",
                Expr::Cos(_) => "cos(",
                Expr::Exp(_) => "exp(",
                _ => "abs(",
            });
            render_into(u, out);
            out.push(')');
        }
        Expr::Max(cs) | Expr::Min(cs) => {
            out.push_str(if matches!(e, Expr::Max(_)) { "max(" } else { "min(" });
            for (k, t) in cs.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                render_into(t, out);
            }
            out.push(')');
        }
    }
}

/// Renders an expression so that [`parse_expr`] gives back the same tree,
/// as long as every `Add` and `Mul` has at least two terms.
pub fn render_expr(e: &Expr) -> String {
    let mut s = String::new();
    render_into(e, &mut s);
    s
}

fn bound_str(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

fn quoted(rows: impl Iterator<Item = String>) -> String {
    let rows: Vec<String> = rows.map(|r| format!("\"{r}\"")).collect();
    format!("[{}]", rows.join(", "))
}

/// Canonical problem file text.
pub fn render_problem(p: &Problem) -> String {
    let constraints = match p.feasible() {
        FeasibleSet::Full => "full".to_string(),
        FeasibleSet::Box { lower, upper } => {
            let iv: Vec<String> = lower
                .iter()
                .zip(upper)
                .map(|(l, u)| format!("[{}, {}]", bound_str(*l), bound_str(*u)))
                .collect();
            format!("box [{}]", iv.join(", "))
        }
        FeasibleSet::Polyhedron(rows) => {
            let rows = rows.iter().map(|h| {
                let terms: Vec<String> = h
                    .normal
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| **a != 0.0)
                    .map(|(i, a)| format!("{a}*x{}", i + 1))
                    .collect();
                let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                format!("{lhs} <= {}", h.offset)
            });
            format!("polyhedron {}", quoted(rows))
        }
        FeasibleSet::SmoothIneq(gs) => format!("smooth {}", quoted(gs.iter().map(|g| format!("{} <= 0", render_expr(g))))),
    };
    format!(
        "n: {}\nm: {}\nobjectives: {}\nconstraints: {}\n",
        p.n(),
        p.m(),
        quoted(p.objectives().iter().map(render_expr)),
        constraints
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Expr {
        Expr::var(i)
    }

    #[test]
    fn example_41_file() {
        let p = parse_problem("objectives: [\"-x1^2\", \"x1\"], constraints: box [[0, inf]]").unwrap();
        let want = Problem::new(1, vec![-(x(0).powi(2)), x(0)], FeasibleSet::half_line(0.0)).unwrap();
        assert_eq!(p, want);
    }

    #[test]
    fn sin_and_plane_files() {
        let p = parse_problem("objectives: [\"sin(x1)\"], constraints: full").unwrap();
        assert_eq!(p, Problem::new(1, vec![x(0).sin()], FeasibleSet::Full).unwrap());
        let p = parse_problem("objectives: [\"x1+x2\"], constraints: full").unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.objectives()[0], Expr::Add(vec![x(0), x(1)]));
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_expr("-x1^2", None).unwrap(), Expr::Neg(Box::new(x(0).powi(2))));
        assert_eq!(parse_expr("-2^2", None).unwrap(), Expr::Neg(Box::new(Expr::constant(2.0).powi(2))));
        assert_eq!(parse_expr("-2*x1", None).unwrap(), Expr::Mul(vec![Expr::Const(-2.0), x(0)]));
        assert_eq!(
            parse_expr("x1 - x2 + 3", None).unwrap(),
            Expr::Add(vec![x(0), Expr::Neg(Box::new(x(1))), Expr::Const(3.0)])
        );
        assert_eq!(parse_expr("x1^2^3", None).unwrap(), x(0).powi(2).powi(3));
        assert_eq!(
            parse_expr("2 * x1 * x2", None).unwrap(),
            Expr::Mul(vec![Expr::Const(2.0), x(0), x(1)])
        );
        assert_eq!(parse_expr(" max( x1 ,-x1 ) ", None).unwrap(), Expr::Max(vec![x(0), Expr::Neg(Box::new(x(0)))]));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_problem("n: 1\nobjectives: [\"x1 + \"]").unwrap_err();
        assert_eq!((e.line, e.column), (2, 20));
        let e = parse_problem("objectives: [\"x1\", \"y\"]").unwrap_err();
        assert_eq!((e.line, e.column), (1, 21));
        assert!(e.message.contains("unknown identifier"));
        let e = parse_problem("objectives: [\"max(x1)\"]").unwrap_err();
        assert!(e.message.contains("at least 2"));
        let e = parse_problem("objectives: [\"sin(x1, x1)\"]").unwrap_err();
        assert!(e.message.contains("takes 1 argument"));
        let e = parse_problem("n: 1\nobjectives: [\"x2\"]").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_problem("objectives: [\"x1^1.5\"]").unwrap_err();
        assert!(e.message.contains("exponent"));
        let e = parse_problem("objective: [\"x1\"]").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(parse_problem("constraints: full").unwrap_err().message.contains("objectives"));
    }

    #[test]
    fn constraint_kinds() {
        let p = parse_problem(
            "objectives: [\"x1\", \"x2\"]\nconstraints: polyhedron [\"x1 + 2*x2 <= 3\",\n  \"-x1 <= 0\", \"0 <= x2\"]",
        )
        .unwrap();
        match p.feasible() {
            FeasibleSet::Polyhedron(rows) => {
                assert_eq!(rows[0], HalfSpace { normal: vec![1.0, 2.0], offset: 3.0 });
                assert_eq!(rows[1], HalfSpace { normal: vec![-1.0, 0.0], offset: 0.0 });
                assert_eq!(rows[2], HalfSpace { normal: vec![0.0, -1.0], offset: 0.0 });
            }
            other => panic!("{other:?}"),
        }
        let e = parse_problem("objectives: [\"x1\"], constraints: polyhedron [\"x1^2 <= 1\"]").unwrap_err();
        assert!(e.message.contains("affine"));
        let p = parse_problem("objectives: [\"x1\"], constraints: smooth [\"x1^2 - 1 <= 0\"]").unwrap();
        assert_eq!(p.feasible(), &FeasibleSet::SmoothIneq(vec![Expr::Add(vec![x(0).powi(2), Expr::Neg(Box::new(Expr::Const(1.0)))])]));
        let p = parse_problem("objectives: [\"x1\"]\nconstraints: box [[-inf, 2], [0, 1]]  # two dims").unwrap();
        assert_eq!(p.n(), 2);
    }

    #[test]
    fn render_round_trips() {
        let cases = [
            "-x1^2",
            "x1 - x2 + -3*x1",
            "-(2)",
            "--2",
            "(x1 + x2)*(x1 - 1)",
            "(-2)^3",
            "(x1^2)^3",
            "max(abs(x1), min(x1, -x2), 0.5)",
            "exp(sin(x1)) - cos(x2*x1)",
            "(x1 + x2) + x1",
            "x1*(x2*x1)",
            "-(x1*x2)",
            "-(x1 + 1)",
            "0.1 + 1e-7*x1",
        ];
        for c in cases {
            let e = parse_expr(c, None).unwrap();
            let back = parse_expr(&render_expr(&e), None).unwrap();
            assert_eq!(e, back, "{c} -> {}", render_expr(&e));
        }
        let p = parse_problem("objectives: [\"x1\", \"x2\"]\nconstraints: polyhedron [\"x1 + 2*x2 <= 3\", \"-0.25*x1 <= 1e-3\"]").unwrap();
        assert_eq!(parse_problem(&render_problem(&p)).unwrap(), p);
    }
}
