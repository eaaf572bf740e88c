use std::collections::HashMap;

use rankp_core::charp::{CharPTorsor, Component, MixedTorsor, NodeEnd, SemiStableConfig, TorsorDatum};
use rankp_core::fp::{FiniteField, Fq, P1Point, RationalFunction, Window};
use rankp_core::padic::{AnnulusElement, LocalFieldTower};
use rankp_core::{Error, Result};

use crate::ast::*;

/// Evaluation environment of a parsed document.
#[derive(Clone)]
pub struct Context {
    pub mode: Mode,
    pub field: FiniteField,
    pub tower: Option<LocalFieldTower>,
    pub window: Window,
    bindings: HashMap<String, Expr>,
    configs: HashMap<String, ConfigDecl>,
}

impl Context {
    pub fn new(header: &Header, doc: &Document) -> Result<Self> {
        let (field, tower) = match header.mode {
            Mode::CharP => (FiniteField::new(header.p, header.f)?, None),
            Mode::Mixed => {
                let t = LocalFieldTower::new(header.p, header.f, header.c, header.n)?;
                (t.residue_field().clone(), Some(t))
            }
        };
        let mut bindings = HashMap::new();
        let mut configs = HashMap::new();
        for s in &doc.statements {
            match s {
                Statement::Binding(b) => {
                    bindings.insert(b.name.clone(), b.value.clone());
                }
                Statement::Config(c) => {
                    configs.insert(c.name.clone(), c.clone());
                }
                Statement::Directive(_) => {}
            }
        }
        Ok(Context { mode: header.mode, field, tower, window: header.window, bindings, configs })
    }

    pub fn tower(&self) -> Result<&LocalFieldTower> {
        self.tower.as_ref().ok_or_else(|| Error::BadParameters("no p-adic tower in charp mode".into()))
    }

    fn lookup(&self, name: &str) -> Result<&Expr> {
        self.bindings.get(name).ok_or_else(|| Error::BadParameters(format!("unknown name `{name}`")))
    }

    pub fn config(&self, name: &str) -> Result<&ConfigDecl> {
        self.configs.get(name).ok_or_else(|| Error::BadParameters(format!("unknown configuration `{name}`")))
    }

    /// A rational function of `t` over the residue field.
    pub fn charp(&self, e: &Expr) -> Result<RationalFunction> {
        let k = &self.field;
        Ok(match &e.kind {
            ExprKind::Int(n) => RationalFunction::constant(k, int_in_field(k, *n)),
            ExprKind::Var(Var::Gen) => RationalFunction::constant(k, k.generator()),
            ExprKind::Var(Var::SmallT) => RationalFunction::t(k),
            ExprKind::Var(v) => return Err(Error::BadParameters(format!("`{}` is not a function of t", v.name()))),
            ExprKind::Name(s) => self.charp(self.lookup(s)?)?,
            ExprKind::Neg(x) => self.charp(x)?.neg(),
            ExprKind::Pow(x, n) => self.charp(x)?.pow(*n)?,
            ExprKind::Bin(op, a, b) => {
                let (a, b) = (self.charp(a)?, self.charp(b)?);
                match op {
                    BinOp::Add => a.add(&b)?,
                    BinOp::Sub => a.sub(&b)?,
                    BinOp::Mul => a.mul(&b)?,
                    BinOp::Div => a.div(&b)?,
                }
            }
            ExprKind::Call(..) => return Err(Error::BadParameters("a torsor is not a function".into())),
        })
    }

    /// An element of the annulus ring of `tower` on the document window.
    pub fn annulus(&self, e: &Expr, tower: &LocalFieldTower) -> Result<AnnulusElement> {
        let w = self.window;
        Ok(match &e.kind {
            ExprKind::Int(n) => AnnulusElement::constant(&tower.from_int(int_i64(*n)?), w),
            ExprKind::Var(Var::Gen) => AnnulusElement::constant(&tower.unramified_generator(), w),
            ExprKind::Var(Var::BigT) => AnnulusElement::t(tower, w)?,
            ExprKind::Var(Var::Pi) => AnnulusElement::constant(&tower.pi(), w),
            ExprKind::Var(Var::Lambda) => AnnulusElement::constant(&tower.lambda(), w),
            ExprKind::Var(Var::SmallT) => return Err(Error::BadParameters("`t` is not an annulus element".into())),
            ExprKind::Name(s) => self.annulus(self.lookup(s)?, tower)?,
            ExprKind::Neg(x) => self.annulus(x, tower)?.neg(),
            ExprKind::Pow(x, n) => self.annulus(x, tower)?.pow_int(*n)?,
            ExprKind::Bin(op, a, b) => {
                let (a, b) = (self.annulus(a, tower)?, self.annulus(b, tower)?);
                match op {
                    BinOp::Add => a.add(&b)?,
                    BinOp::Sub => a.sub(&b)?,
                    BinOp::Mul => a.mul(&b)?,
                    BinOp::Div => a.div(&b)?,
                }
            }
            ExprKind::Call(..) => return Err(Error::BadParameters("a torsor is not an annulus element".into())),
        })
    }

    pub fn unit(&self, e: &Expr) -> Result<AnnulusElement> {
        self.annulus(e, self.tower()?)
    }

    pub fn torsor(&self, e: &Expr) -> Result<CharPTorsor> {
        match &e.kind {
            ExprKind::Call(kind, x) => CharPTorsor::new(*kind, TorsorDatum::Rational(self.charp(x)?)),
            ExprKind::Name(s) => self.torsor(self.lookup(s)?),
            _ => Err(Error::BadParameters("expected a single torsor".into())),
        }
    }

    pub fn mixed(&self, e: &Expr) -> Result<MixedTorsor> {
        match &e.kind {
            ExprKind::Bin(BinOp::Add, a, b) => self.mixed(a)?.add(&self.mixed(b)?),
            ExprKind::Name(s) => self.mixed(self.lookup(s)?),
            _ => Ok(MixedTorsor::single(self.torsor(e)?)),
        }
    }

    pub fn point(&self, x: &PointExpr) -> Result<P1Point> {
        match x {
            PointExpr::Infinity => Ok(P1Point::Infinity),
            PointExpr::Finite(e) => {
                let r = self.charp(e)?;
                let c = constant_value(&r).ok_or_else(|| Error::BadParameters("a point must be a constant".into()))?;
                Ok(P1Point::finite(&self.field, c))
            }
        }
    }

    pub fn semistable(&self, name: &str) -> Result<(SemiStableConfig, Vec<MixedTorsor>)> {
        let cfg = self.config(name)?;
        let mut components = Vec::new();
        let mut torsors = Vec::new();
        for c in &cfg.components {
            let marked = c.marked.iter().map(|x| self.point(x)).collect::<Result<Vec<_>>>()?;
            components.push(Component { name: c.name.clone(), marked });
            torsors.push(match &c.torsor {
                Some(e) => self.mixed(e)?,
                None => MixedTorsor::zero(&self.field),
            });
        }
        let index = |n: &str| cfg.components.iter().position(|c| c.name == n).expect("checked by the parser");
        let mut nodes = Vec::new();
        for [a, b] in &cfg.nodes {
            let end = |e: &EndDecl| -> Result<NodeEnd> {
                Ok(NodeEnd { component: index(&e.component), point: self.point(&e.point)?, kind: e.kind })
            };
            nodes.push([end(a)?, end(b)?]);
        }
        Ok((SemiStableConfig::new(components, nodes)?, torsors))
    }
}

fn int_i64(n: u64) -> Result<i64> {
    i64::try_from(n).map_err(|_| Error::BadParameters(format!("integer {n} is too large")))
}

fn int_in_field(k: &FiniteField, n: u64) -> Fq {
    k.from_int((n % k.p() as u64) as i64)
}

fn constant_value(r: &RationalFunction) -> Option<Fq> {
    if r.is_zero() {
        return Some(Fq::ZERO);
    }
    let (num, den) = (r.numerator(), r.denominator());
    (num.len() == 1 && den.len() == 1).then(|| r.field().div(num[0], den[0]).expect("nonzero denominator"))
}
