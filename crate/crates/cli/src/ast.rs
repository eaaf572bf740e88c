use std::fmt;

use rankp_core::charp::GroupSchemeKind;
use rankp_core::fp::Window;

/// 1-based source position. Positions never take part in AST equality, so
/// a reparsed canonical print compares equal to the original.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    /// `t`, the characteristic p parameter.
    SmallT,
    /// `T`, the annulus parameter.
    BigT,
    /// `l`, i.e. lambda = zeta_p - 1.
    Lambda,
    Pi,
    /// `a1`, the unramified generator.
    Gen,
}

impl Var {
    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "t" => Var::SmallT,
            "T" => Var::BigT,
            "l" => Var::Lambda,
            "pi" => Var::Pi,
            "a1" => Var::Gen,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::SmallT => "t",
            Var::BigT => "T",
            Var::Lambda => "l",
            Var::Pi => "pi",
            Var::Gen => "a1",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 10,
            BinOp::Mul | BinOp::Div => 20,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

pub const PREC_NEG: u8 = 30;
pub const PREC_POW: u8 = 40;
const PREC_ATOM: u8 = 50;

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(u64),
    Var(Var),
    Name(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// Torsor constructor such as `mu_p(1 + t)`.
    Call(GroupSchemeKind, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }

    fn prec(&self) -> u8 {
        match &self.kind {
            ExprKind::Bin(op, ..) => op.prec(),
            ExprKind::Neg(_) => PREC_NEG,
            ExprKind::Pow(..) => PREC_POW,
            _ => PREC_ATOM,
        }
    }
}

fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Var(v) => f.write_str(v.name()),
            ExprKind::Name(s) => f.write_str(s),
            ExprKind::Neg(x) => {
                f.write_str("-")?;
                paren(f, x, x.prec() < PREC_NEG)
            }
            ExprKind::Bin(op, a, b) => {
                // all operators are left associative: equal precedence on the
                // right needs parentheses to keep the tree shape
                paren(f, a, a.prec() < op.prec())?;
                f.write_str(op.symbol())?;
                paren(f, b, b.prec() <= op.prec())
            }
            ExprKind::Pow(x, e) => {
                paren(f, x, x.prec() <= PREC_POW)?;
                write!(f, "^{e}")
            }
            ExprKind::Call(k, x) => write!(f, "{}({x})", k.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    CharP,
    Mixed,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::CharP => "charp",
            Mode::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Header {
    pub mode: Mode,
    pub p: u32,
    pub f: u32,
    pub c: u32,
    pub n: i64,
    pub window: Window,
    pub pos: Pos,
}

impl fmt::Display for Header {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode {} p={} f={} c={} N={} window={}:{}",
            self.mode.name(),
            self.p,
            self.f,
            self.c,
            self.n,
            self.window.lo,
            self.window.hi
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PointExpr {
    Infinity,
    Finite(Expr),
}

impl fmt::Display for PointExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointExpr::Infinity => f.write_str("inf"),
            PointExpr::Finite(e) if matches!(e.kind, ExprKind::Int(_) | ExprKind::Var(_) | ExprKind::Name(_)) => {
                write!(f, "{e}")
            }
            PointExpr::Finite(e) => write!(f, "({e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentDecl {
    pub name: String,
    pub torsor: Option<Expr>,
    pub marked: Vec<PointExpr>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EndDecl {
    pub component: String,
    pub point: PointExpr,
    pub kind: Option<GroupSchemeKind>,
    pub pos: Pos,
}

impl fmt::Display for EndDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.component, self.point)?;
        if let Some(k) = self.kind {
            write!(f, ":{}", k.name())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigDecl {
    pub name: String,
    pub components: Vec<ComponentDecl>,
    pub nodes: Vec<[EndDecl; 2]>,
    pub pos: Pos,
}

impl fmt::Display for ConfigDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "config {} {{", self.name)?;
        for c in &self.components {
            write!(f, "  component {}", c.name)?;
            if let Some(t) = &c.torsor {
                write!(f, " = {t}")?;
            }
            if !c.marked.is_empty() {
                f.write_str(" marked")?;
                for m in &c.marked {
                    write!(f, " {m}")?;
                }
            }
            writeln!(f)?;
        }
        for [a, b] in &self.nodes {
            writeln!(f, "  node {a} {b}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Classify(Expr),
    Conductor(Expr, PointExpr),
    Residue(Expr, PointExpr),
    CartierCheck(Expr),
    AsReduce(Expr),
    Kummerian(String),
    Lift { kind: GroupSchemeKind, datum: Expr, n: Option<i64> },
    Filtration(Vec<Expr>),
    GaloisCheck { j: i64, unit: Expr },
    Selftest(usize),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Conductor(..) => "conductor",
            Command::Residue(..) => "residue",
            Command::CartierCheck(_) => "cartier-check",
            Command::AsReduce(_) => "as-reduce",
            Command::Kummerian(_) => "kummerian",
            Command::Lift { .. } => "lift",
            Command::Filtration(_) => "filtration",
            Command::GaloisCheck { .. } => "galois-check",
            Command::Selftest(_) => "selftest",
        }
    }

    pub const NAMES: [&'static str; 10] = [
        "classify",
        "conductor",
        "residue",
        "cartier-check",
        "as-reduce",
        "kummerian",
        "lift",
        "filtration",
        "galois-check",
        "selftest",
    ];
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match self {
            Command::Classify(e) | Command::CartierCheck(e) | Command::AsReduce(e) => write!(f, " {e}"),
            Command::Conductor(e, x) | Command::Residue(e, x) => write!(f, " {e} at {x}"),
            Command::Kummerian(name) => write!(f, " {name}"),
            Command::Lift { kind, datum, n } => {
                write!(f, " {} {datum}", kind.name())?;
                match n {
                    Some(n) => write!(f, " n={n}"),
                    None => Ok(()),
                }
            }
            Command::Filtration(es) => {
                let parts: Vec<String> = es.iter().map(|e| e.to_string()).collect();
                write!(f, " {}", parts.join(", "))
            }
            Command::GaloisCheck { j, unit } => write!(f, " sigma^{j} {unit}"),
            Command::Selftest(n) => write!(f, " {n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Directive {
    pub command: Command,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub name: String,
    pub value: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Binding(Binding),
    Config(ConfigDecl),
    Directive(Directive),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Document {
    pub header: Option<Header>,
    pub statements: Vec<Statement>,
}

impl Document {
    pub fn directives(&self) -> impl Iterator<Item = &Directive> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Directive(d) => Some(d),
            _ => None,
        })
    }
}

/// Canonical printer; reparsing the output yields an equal document.
impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(h) = &self.header {
            writeln!(f, "{h}")?;
        }
        for s in &self.statements {
            match s {
                Statement::Binding(b) => writeln!(f, "{} = {}", b.name, b.value)?,
                Statement::Config(c) => writeln!(f, "{c}")?,
                Statement::Directive(d) => writeln!(f, "{}", d.command)?,
            }
        }
        Ok(())
    }
}
