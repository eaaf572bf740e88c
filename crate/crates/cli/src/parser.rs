use std::collections::HashMap;

use rankp_core::charp::GroupSchemeKind;
use rankp_core::fp::Window;

use crate::ast::*;
use crate::lexer::{lex_line, Tok, Token};
use crate::SyntaxError;

/// Static type of an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    /// Integers and `a1` only; takes the type of its context.
    Scalar,
    /// Rational function in `t`.
    CharP,
    /// Annulus element in `T`, `pi`, `l`.
    Annulus,
    Torsor,
    MixedTorsor,
}

impl Sort {
    fn name(self) -> &'static str {
        match self {
            Sort::Scalar => "a constant",
            Sort::CharP => "a function of t",
            Sort::Annulus => "an annulus element",
            Sort::Torsor => "a torsor",
            Sort::MixedTorsor => "a sum of torsors",
        }
    }
}

const KEYWORDS: [&str; 18] = [
    "t", "T", "l", "pi", "a1", "inf", "sigma", "at", "marked", "n", "mode", "config", "component", "node", "classify",
    "conductor", "residue", "kummerian",
];
const MORE_KEYWORDS: [&str; 3] = ["lift", "filtration", "selftest"];

fn reserved(s: &str) -> bool {
    KEYWORDS.contains(&s) || MORE_KEYWORDS.contains(&s) || GroupSchemeKind::from_name(s).is_some()
}

struct Cursor {
    toks: Vec<Token>,
    i: usize,
    end: Pos,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.i + 1).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.i).cloned();
        self.i += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Pos, SyntaxError> {
        let pos = self.pos();
        match self.next() {
            Some(t) if t.tok == want => Ok(t.pos),
            Some(t) => Err(SyntaxError::new(t.pos, format!("expected {what}, found {}", t.tok.describe()))),
            None => Err(SyntaxError::new(pos, format!("expected {what}, found end of line"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), SyntaxError> {
        let pos = self.pos();
        match self.next() {
            Some(Token { tok: Tok::Ident(s), pos }) => Ok((s, pos)),
            Some(t) => Err(SyntaxError::new(t.pos, format!("expected {what}, found {}", t.tok.describe()))),
            None => Err(SyntaxError::new(pos, format!("expected {what}, found end of line"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<i64, SyntaxError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.next();
            true
        } else {
            false
        };
        let pos = self.pos();
        match self.next() {
            Some(Token { tok: Tok::Int(n), pos }) => {
                let v = i64::try_from(n).map_err(|_| SyntaxError::new(pos, "integer out of range"))?;
                Ok(if neg { -v } else { v })
            }
            Some(t) => Err(SyntaxError::new(t.pos, format!("expected {what}, found {}", t.tok.describe()))),
            None => Err(SyntaxError::new(pos, format!("expected {what}, found end of line"))),
        }
    }

    /// Fails unless the line is consumed.
    fn finish(&self) -> Result<(), SyntaxError> {
        match self.toks.get(self.i) {
            None => Ok(()),
            Some(t) if t.tok.starts_operand() => Err(SyntaxError::new(
                t.pos,
                format!("missing operator before {} (there is no implicit multiplication)", t.tok.describe()),
            )),
            Some(t) => Err(SyntaxError::new(t.pos, format!("unexpected {}", t.tok.describe()))),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, SyntaxError> {
        let mut lhs = self.prefix()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                Some(Tok::Caret) => {
                    if PREC_POW < min_bp {
                        break;
                    }
                    let pos = self.next().unwrap().pos;
                    let e = self.exponent()?;
                    lhs = Expr::new(ExprKind::Pow(Box::new(lhs), e), pos);
                    continue;
                }
                _ => break,
            };
            if op.prec() < min_bp {
                break;
            }
            let pos = self.next().unwrap().pos;
            let rhs = self.expr(op.prec() + 1)?;
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn exponent(&mut self) -> Result<i64, SyntaxError> {
        if self.peek() == Some(&Tok::LParen) {
            self.next();
            let e = self.int("an integer exponent")?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(e);
        }
        self.int("an integer exponent")
    }

    fn prefix(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        let Some(tok) = self.next() else {
            return Err(SyntaxError::new(pos, "expected an expression, found end of line"));
        };
        let kind = match tok.tok {
            Tok::Int(n) => ExprKind::Int(n),
            Tok::Minus => ExprKind::Neg(Box::new(self.expr(PREC_NEG)?)),
            Tok::LParen => {
                let e = self.expr(0)?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(e);
            }
            Tok::Ident(s) => {
                if let Some(k) = GroupSchemeKind::from_name(&s) {
                    self.expect(Tok::LParen, &format!("`(` after `{s}`"))?;
                    let e = self.expr(0)?;
                    self.expect(Tok::RParen, "`)`")?;
                    ExprKind::Call(k, Box::new(e))
                } else if let Some(v) = Var::from_name(&s) {
                    ExprKind::Var(v)
                } else if reserved(&s) {
                    return Err(SyntaxError::new(tok.pos, format!("`{s}` is a keyword and cannot be used here")));
                } else if s.starts_with('a') && s[1..].chars().all(|c| c.is_ascii_digit()) && s.len() > 1 {
                    return Err(SyntaxError::new(tok.pos, format!("`{s}`: only the generator `a1` is defined")));
                } else {
                    ExprKind::Name(s)
                }
            }
            other => return Err(SyntaxError::new(tok.pos, format!("expected an operand, found {}", other.describe()))),
        };
        Ok(Expr::new(kind, tok.pos))
    }

    /// `inf`, or an expression; `parens_only` restricts to atoms and
    /// parenthesized expressions (used inside `X@point`).
    fn point(&mut self, parens_only: bool) -> Result<PointExpr, SyntaxError> {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == "inf" {
                self.next();
                return Ok(PointExpr::Infinity);
            }
        }
        if !parens_only {
            return Ok(PointExpr::Finite(self.expr(0)?));
        }
        let pos = self.pos();
        match self.peek() {
            Some(Tok::LParen) => {
                self.next();
                let e = self.expr(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(PointExpr::Finite(e))
            }
            Some(Tok::Int(_) | Tok::Ident(_)) => {
                let tok = self.next().unwrap();
                let kind = match tok.tok {
                    Tok::Int(n) => ExprKind::Int(n),
                    Tok::Ident(s) => match Var::from_name(&s) {
                        Some(v) => ExprKind::Var(v),
                        None if reserved(&s) => {
                            return Err(SyntaxError::new(tok.pos, format!("`{s}` is a keyword and cannot be used here")))
                        }
                        None => ExprKind::Name(s),
                    },
                    _ => unreachable!(),
                };
                Ok(PointExpr::Finite(Expr::new(kind, tok.pos)))
            }
            _ => Err(SyntaxError::new(pos, "expected a point: `inf`, an integer, `a1`, a name or a parenthesized expression")),
        }
    }
}

/// Names in scope with their sorts.
#[derive(Default)]
struct Scope {
    names: HashMap<String, Sort>,
    configs: HashMap<String, Pos>,
}

impl Scope {
    fn declare(&mut self, name: &str, pos: Pos) -> Result<(), SyntaxError> {
        if reserved(name) {
            return Err(SyntaxError::new(pos, format!("`{name}` is a keyword and cannot be bound")));
        }
        if self.names.contains_key(name) || self.configs.contains_key(name) {
            return Err(SyntaxError::typed(pos, format!("`{name}` is already bound")));
        }
        Ok(())
    }
}

fn join(a: Sort, b: Sort, pos: Pos) -> Result<Sort, SyntaxError> {
    use Sort::*;
    match (a, b) {
        (Scalar, x) | (x, Scalar) if !matches!(x, Torsor | MixedTorsor) => Ok(x),
        (CharP, CharP) => Ok(CharP),
        (Annulus, Annulus) => Ok(Annulus),
        (CharP, Annulus) | (Annulus, CharP) => {
            Err(SyntaxError::typed(pos, "expression mixes the characteristic p variable `t` with `T`, `pi` or `l`"))
        }
        _ => Err(SyntaxError::typed(pos, format!("cannot combine {} with {}", a.name(), b.name()))),
    }
}

/// Sort of an expression, checked against the mode and the bindings so far.
fn sort_of(e: &Expr, mode: Mode, scope: &Scope) -> Result<Sort, SyntaxError> {
    Ok(match &e.kind {
        ExprKind::Int(_) | ExprKind::Var(Var::Gen) => Sort::Scalar,
        ExprKind::Var(Var::SmallT) => Sort::CharP,
        ExprKind::Var(v) => {
            if mode == Mode::CharP {
                return Err(SyntaxError::typed(e.pos, format!("`{}` is not available in charp mode", v.name())));
            }
            Sort::Annulus
        }
        ExprKind::Name(s) => {
            if scope.configs.contains_key(s) {
                return Err(SyntaxError::typed(e.pos, format!("`{s}` is a configuration, not a value")));
            }
            *scope.names.get(s).ok_or_else(|| SyntaxError::typed(e.pos, format!("unknown name `{s}`")))?
        }
        ExprKind::Neg(x) | ExprKind::Pow(x, _) => {
            let s = sort_of(x, mode, scope)?;
            if matches!(s, Sort::Torsor | Sort::MixedTorsor) {
                return Err(SyntaxError::typed(e.pos, "torsors only support `+`"));
            }
            s
        }
        ExprKind::Bin(op, a, b) => {
            let (sa, sb) = (sort_of(a, mode, scope)?, sort_of(b, mode, scope)?);
            let ta = matches!(sa, Sort::Torsor | Sort::MixedTorsor);
            let tb = matches!(sb, Sort::Torsor | Sort::MixedTorsor);
            match (ta, tb) {
                (true, true) if *op == BinOp::Add => Sort::MixedTorsor,
                (false, false) => join(sa, sb, e.pos)?,
                _ => return Err(SyntaxError::typed(e.pos, "torsors only support `+` with other torsors")),
            }
        }
        ExprKind::Call(k, x) => {
            if mode == Mode::Mixed {
                return Err(SyntaxError::typed(e.pos, format!("torsor constructor `{}` is only available in charp mode", k.name())));
            }
            match sort_of(x, mode, scope)? {
                Sort::Scalar | Sort::CharP => Sort::Torsor,
                s => return Err(SyntaxError::typed(x.pos, format!("torsor datum must be a function of t, not {}", s.name()))),
            }
        }
    })
}

fn require(e: &Expr, mode: Mode, scope: &Scope, allowed: &[Sort], what: &str) -> Result<(), SyntaxError> {
    let s = sort_of(e, mode, scope)?;
    if allowed.contains(&s) {
        Ok(())
    } else {
        Err(SyntaxError::typed(e.pos, format!("expected {what}, found {}", s.name())))
    }
}

fn require_mode(have: Mode, want: Mode, cmd: &str, pos: Pos) -> Result<(), SyntaxError> {
    if have == want {
        Ok(())
    } else {
        Err(SyntaxError::typed(pos, format!("`{cmd}` needs a {} document", want.name())))
    }
}

fn parse_header(cur: &mut Cursor, pos: Pos) -> Result<Header, SyntaxError> {
    let (mode, mpos) = cur.ident("`charp` or `mixed`")?;
    let mode = match mode.as_str() {
        "charp" => Mode::CharP,
        "mixed" => Mode::Mixed,
        other => return Err(SyntaxError::new(mpos, format!("unknown mode `{other}`; expected `charp` or `mixed`"))),
    };
    let mut h = Header { mode, p: 0, f: 1, c: 1, n: rankp_core::padic::DEFAULT_PRECISION, window: Window::default(), pos };
    let mut seen = Vec::new();
    while !cur.at_end() {
        let (key, kpos) = cur.ident("a header setting such as `p=3`")?;
        if seen.contains(&key) {
            return Err(SyntaxError::new(kpos, format!("`{key}` is set twice")));
        }
        cur.expect(Tok::Eq, "`=`")?;
        let small = |v: i64| u32::try_from(v).map_err(|_| SyntaxError::new(kpos, format!("`{key}` must be a positive integer")));
        match key.as_str() {
            "p" => h.p = small(cur.int("an integer")?)?,
            "f" => h.f = small(cur.int("an integer")?)?,
            "c" => h.c = small(cur.int("an integer")?)?,
            "N" => h.n = cur.int("an integer")?,
            "window" => {
                let lo = cur.int("the window start")?;
                cur.expect(Tok::Colon, "`:` in LO:HI")?;
                let hi = cur.int("the window end")?;
                if lo > hi {
                    return Err(SyntaxError::new(kpos, "window start exceeds window end"));
                }
                h.window = Window::new(lo, hi);
            }
            _ => return Err(SyntaxError::new(kpos, format!("unknown header setting `{key}`"))),
        }
        seen.push(key);
    }
    if h.p == 0 {
        return Err(SyntaxError::new(pos, "the header must set `p`"));
    }
    if h.f == 0 || h.c == 0 {
        return Err(SyntaxError::new(pos, "`f` and `c` must be positive"));
    }
    Ok(h)
}

/// Splits off the leading word (which may contain `-`) and lexes the rest.
fn split_line(raw: &str, line: usize) -> Result<Option<(String, Pos, Cursor)>, SyntaxError> {
    let text = raw.split('#').next().unwrap_or("");
    let trimmed = text.trim_start();
    if trimmed.trim().is_empty() {
        return Ok(None);
    }
    let indent = text.len() - trimmed.len();
    let word_len = trimmed.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-')).unwrap_or(trimmed.len());
    let word_len = word_len.max(trimmed.chars().next().map_or(1, |c| c.len_utf8()));
    let col = indent + 1;
    let word = trimmed[..word_len].to_string();
    let rest = &trimmed[word_len..];
    let toks = lex_line(rest, line, col + word_len)?;
    let end = Pos { line, col: text.trim_end().len() + 1 };
    Ok(Some((word, Pos { line, col }, Cursor { toks, i: 0, end })))
}

pub fn parse_document(src: &str) -> Result<Document, SyntaxError> {
    let mut doc = Document::default();
    let mut scope = Scope::default();
    let lines: Vec<&str> = src.lines().collect();
    let mut idx = 0;
    while idx < lines.len() {
        let line_no = idx + 1;
        let Some((word, pos, mut cur)) = split_line(lines[idx], line_no)? else {
            idx += 1;
            continue;
        };
        idx += 1;
        if word == "mode" {
            if doc.header.is_some() || !doc.statements.is_empty() {
                return Err(SyntaxError::new(pos, "the `mode` header must come first and only once"));
            }
            doc.header = Some(parse_header(&mut cur, pos)?);
            continue;
        }
        let Some(header) = &doc.header else {
            return Err(SyntaxError::new(pos, "the document must start with a `mode` header"));
        };
        let mode = header.mode;
        if word == "config" {
            let (cfg, consumed) = parse_config(&mut cur, pos, &lines[idx..], line_no + 1, mode, &mut scope)?;
            idx += consumed;
            doc.statements.push(Statement::Config(cfg));
        } else if Command::NAMES.contains(&word.as_str()) {
            let command = parse_command(&word, &mut cur, pos, mode, &scope)?;
            doc.statements.push(Statement::Directive(Directive { command, pos }));
        } else {
            if !word.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') || word.contains('-') {
                return Err(SyntaxError::new(pos, format!("unknown directive `{word}`")));
            }
            if cur.peek() != Some(&Tok::Eq) {
                return Err(SyntaxError::new(pos, format!("unknown directive `{word}` (bindings are written `name = expression`)")));
            }
            cur.next();
            scope.declare(&word, pos)?;
            let value = cur.expr(0)?;
            cur.finish()?;
            let sort = sort_of(&value, mode, &scope)?;
            scope.names.insert(word.clone(), sort);
            doc.statements.push(Statement::Binding(Binding { name: word, value, pos }));
        }
    }
    Ok(doc)
}

fn parse_command(word: &str, cur: &mut Cursor, pos: Pos, mode: Mode, scope: &Scope) -> Result<Command, SyntaxError> {
    use Sort::*;
    let command = match word {
        "classify" => {
            require_mode(mode, Mode::Mixed, word, pos)?;
            let e = cur.expr(0)?;
            require(&e, mode, scope, &[Scalar, Annulus], "an annulus element")?;
            Command::Classify(e)
        }
        "conductor" | "residue" => {
            require_mode(mode, Mode::CharP, word, pos)?;
            let e = cur.expr(0)?;
            require(&e, mode, scope, &[Torsor], "a torsor such as `mu_p(t)`")?;
            let (at, apos) = cur.ident("`at`")?;
            if at != "at" {
                return Err(SyntaxError::new(apos, format!("expected `at`, found `{at}`")));
            }
            let x = cur.point(false)?;
            if let PointExpr::Finite(x) = &x {
                require(x, mode, scope, &[Scalar], "a constant point")?;
            }
            if word == "conductor" {
                Command::Conductor(e, x)
            } else {
                Command::Residue(e, x)
            }
        }
        "cartier-check" => {
            require_mode(mode, Mode::CharP, word, pos)?;
            let e = cur.expr(0)?;
            require(&e, mode, scope, &[Torsor], "a mu_p or alpha_p torsor")?;
            Command::CartierCheck(e)
        }
        "as-reduce" => {
            let e = cur.expr(0)?;
            require(&e, mode, scope, &[Scalar, CharP], "a function of t")?;
            Command::AsReduce(e)
        }
        "kummerian" => {
            require_mode(mode, Mode::CharP, word, pos)?;
            let (name, npos) = cur.ident("a configuration name")?;
            if !scope.configs.contains_key(&name) {
                return Err(SyntaxError::typed(npos, format!("unknown configuration `{name}`")));
            }
            Command::Kummerian(name)
        }
        "lift" => {
            require_mode(mode, Mode::Mixed, word, pos)?;
            let (k, kpos) = cur.ident("a group scheme kind")?;
            let kind = GroupSchemeKind::from_name(&k)
                .ok_or_else(|| SyntaxError::new(kpos, format!("unknown kind `{k}`; expected etale, mu_p or alpha_p")))?;
            let datum = cur.expr(0)?;
            require(&datum, mode, scope, &[Scalar, CharP], "a function of t")?;
            let mut n = None;
            if let (Some(Tok::Ident(s)), Some(Tok::Eq)) = (cur.peek(), cur.peek2()) {
                if s == "n" {
                    let npos = cur.pos();
                    cur.next();
                    cur.next();
                    if kind != GroupSchemeKind::AlphaP {
                        return Err(SyntaxError::new(npos, "`n=` only applies to alpha_p lifts"));
                    }
                    n = Some(cur.int("an integer")?);
                }
            }
            Command::Lift { kind, datum, n }
        }
        "filtration" => {
            require_mode(mode, Mode::Mixed, word, pos)?;
            let mut es = Vec::new();
            loop {
                let e = cur.expr(0)?;
                require(&e, mode, scope, &[Scalar, Annulus], "an annulus element")?;
                es.push(e);
                if cur.peek() == Some(&Tok::Comma) {
                    cur.next();
                } else if cur.at_end() {
                    break;
                } else if !cur.peek().is_some_and(Tok::starts_operand) {
                    break;
                }
            }
            Command::Filtration(es)
        }
        "galois-check" => {
            require_mode(mode, Mode::Mixed, word, pos)?;
            let j = match cur.peek() {
                Some(Tok::Ident(s)) if s == "sigma" => {
                    cur.next();
                    if cur.peek() == Some(&Tok::Caret) {
                        cur.next();
                        cur.exponent()?
                    } else {
                        1
                    }
                }
                Some(Tok::Int(_)) if cur.peek2().is_some() => cur.int("a Frobenius power")?,
                _ => return Err(SyntaxError::new(cur.pos(), "expected `sigma`, `sigma^J` or an integer Frobenius power")),
            };
            let unit = cur.expr(0)?;
            require(&unit, mode, scope, &[Scalar, Annulus], "an annulus element")?;
            Command::GaloisCheck { j, unit }
        }
        "selftest" => {
            require_mode(mode, Mode::Mixed, word, pos)?;
            let n = if cur.at_end() { 20 } else { cur.int("a sample count")? };
            if n <= 0 {
                return Err(SyntaxError::new(pos, "sample count must be positive"));
            }
            Command::Selftest(n as usize)
        }
        _ => unreachable!("checked against Command::NAMES"),
    };
    cur.finish()?;
    Ok(command)
}

fn parse_config(
    head: &mut Cursor,
    pos: Pos,
    rest: &[&str],
    first_line: usize,
    mode: Mode,
    scope: &mut Scope,
) -> Result<(ConfigDecl, usize), SyntaxError> {
    require_mode(mode, Mode::CharP, "config", pos)?;
    let (name, npos) = head.ident("a configuration name")?;
    scope.declare(&name, npos)?;
    head.expect(Tok::LBrace, "`{`")?;
    head.finish()?;
    let mut cfg = ConfigDecl { name: name.clone(), components: Vec::new(), nodes: Vec::new(), pos };
    for (k, raw) in rest.iter().enumerate() {
        let line = first_line + k;
        let Some((word, wpos, mut cur)) = split_line(raw, line)? else { continue };
        match word.as_str() {
            "}" => {
                cur.finish()?;
                scope.configs.insert(name, pos);
                return Ok((cfg, k + 1));
            }
            "component" => {
                let (cname, cpos) = cur.ident("a component name")?;
                if reserved(&cname) {
                    return Err(SyntaxError::new(cpos, format!("`{cname}` is a keyword")));
                }
                if cfg.components.iter().any(|c| c.name == cname) {
                    return Err(SyntaxError::typed(cpos, format!("component `{cname}` is declared twice")));
                }
                let mut torsor = None;
                if cur.peek() == Some(&Tok::Eq) {
                    cur.next();
                    let e = cur.expr(0)?;
                    require(&e, mode, scope, &[Sort::Torsor, Sort::MixedTorsor], "a torsor or a sum of torsors")?;
                    torsor = Some(e);
                }
                let mut marked = Vec::new();
                if let Some(Tok::Ident(s)) = cur.peek() {
                    if s == "marked" {
                        cur.next();
                        while !cur.at_end() {
                            let x = cur.point(true)?;
                            if let PointExpr::Finite(x) = &x {
                                require(x, mode, scope, &[Sort::Scalar], "a constant point")?;
                            }
                            marked.push(x);
                        }
                    }
                }
                cur.finish()?;
                cfg.components.push(ComponentDecl { name: cname, torsor, marked, pos: wpos });
            }
            "node" => {
                let mut ends = Vec::new();
                for _ in 0..2 {
                    let (comp, cpos) = cur.ident("a component name")?;
                    if !cfg.components.iter().any(|c| c.name == comp) {
                        return Err(SyntaxError::typed(cpos, format!("unknown component `{comp}`")));
                    }
                    cur.expect(Tok::At, "`@`")?;
                    let point = cur.point(true)?;
                    if let PointExpr::Finite(x) = &point {
                        require(x, mode, scope, &[Sort::Scalar], "a constant point")?;
                    }
                    let mut kind = None;
                    if cur.peek() == Some(&Tok::Colon) {
                        cur.next();
                        let (k, kpos) = cur.ident("a group scheme kind")?;
                        kind = Some(
                            GroupSchemeKind::from_name(&k)
                                .ok_or_else(|| SyntaxError::new(kpos, format!("unknown kind `{k}`")))?,
                        );
                    }
                    ends.push(EndDecl { component: comp, point, kind, pos: cpos });
                }
                cur.finish()?;
                let [a, b]: [EndDecl; 2] = ends.try_into().expect("two ends");
                cfg.nodes.push([a, b]);
            }
            other => {
                return Err(SyntaxError::new(wpos, format!("expected `component`, `node` or `}}`, found `{other}`")));
            }
        }
    }
    Err(SyntaxError::new(pos, format!("configuration `{name}` is not closed with `}}`")))
}
