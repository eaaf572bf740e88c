use std::collections::BTreeMap;

use super::torsor::{conductor_residue, CharPTorsor, GroupSchemeKind, TorsorDatum, TorsorLocalData};
use crate::error::{Error, Result};
use crate::fp::{FiniteField, P1Point};

/// Formal direct sum of one torsor class per group scheme kind.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedTorsor {
    field: FiniteField,
    components: BTreeMap<GroupSchemeKind, TorsorDatum>,
}

impl MixedTorsor {
    pub fn zero(field: &FiniteField) -> Self {
        MixedTorsor { field: field.clone(), components: BTreeMap::new() }
    }

    pub fn single(f: CharPTorsor) -> Self {
        let mut m = Self::zero(f.field());
        m.components.insert(f.kind, f.datum);
        m
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn kinds(&self) -> impl Iterator<Item = GroupSchemeKind> + '_ {
        self.components.keys().copied()
    }

    pub fn component(&self, kind: GroupSchemeKind) -> Option<CharPTorsor> {
        self.components.get(&kind).map(|d| CharPTorsor { kind, datum: d.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Componentwise group law: etale and alpha_p data add, mu_p data multiply.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::SchemeMismatch);
        }
        let mut out = self.components.clone();
        for (&kind, d) in &other.components {
            let merged = match out.remove(&kind) {
                None => d.clone(),
                Some(e) if kind == GroupSchemeKind::MuP => e.mul(d)?,
                Some(e) => e.add(d)?,
            };
            if !(kind != GroupSchemeKind::MuP && merged.is_zero()) {
                out.insert(kind, merged);
            }
        }
        Ok(MixedTorsor { field: self.field.clone(), components: out })
    }

    pub fn frobenius_act(&self, j: i64) -> Self {
        MixedTorsor {
            field: self.field.clone(),
            components: self.components.iter().map(|(&k, d)| (k, d.frobenius(j))).collect(),
        }
    }
}

/// One end of a node: a point on a component, optionally naming which torsor
/// component of that curve is read there.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeEnd {
    pub component: usize,
    pub point: P1Point,
    pub kind: Option<GroupSchemeKind>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub name: String,
    pub marked: Vec<P1Point>,
}

/// P^1 charts glued at nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiStableConfig {
    components: Vec<Component>,
    nodes: Vec<[NodeEnd; 2]>,
}

impl SemiStableConfig {
    pub fn new(components: Vec<Component>, nodes: Vec<[NodeEnd; 2]>) -> Result<Self> {
        for (i, [a, b]) in nodes.iter().enumerate() {
            for e in [a, b] {
                let c = components
                    .get(e.component)
                    .ok_or_else(|| Error::BadParameters(format!("node {i} names a missing component")))?;
                if c.marked.contains(&e.point) {
                    return Err(Error::BadParameters(format!("node {i} sits on a marked point")));
                }
            }
            if a.component == b.component && a.point == b.point {
                return Err(Error::BadParameters(format!("node {i} glues a slot to itself")));
            }
        }
        let mut slots: Vec<(usize, &P1Point)> = Vec::new();
        for [a, b] in &nodes {
            for e in [a, b] {
                if slots.contains(&(e.component, &e.point)) {
                    return Err(Error::BadParameters("a slot is used by two nodes".into()));
                }
                slots.push((e.component, &e.point));
            }
        }
        Ok(SemiStableConfig { components, nodes })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn nodes(&self) -> &[[NodeEnd; 2]] {
        &self.nodes
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeReport {
    pub node: usize,
    pub ends: [TorsorLocalData; 2],
    pub conductor_sum: i64,
    pub residue_sum: u32,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KummerianReport {
    pub nodes: Vec<NodeReport>,
    pub kummerian: bool,
}

fn end_data(node: usize, end: &NodeEnd, mt: &MixedTorsor) -> Result<TorsorLocalData> {
    let kind = match end.kind {
        Some(k) => k,
        None => {
            let mut kinds = mt.kinds();
            match (kinds.next(), kinds.next()) {
                (None, _) => return Ok(TorsorLocalData::TRIVIAL),
                (Some(k), None) => k,
                _ => return Err(Error::MissingTorsorAtNode { node }),
            }
        }
    };
    let f = mt.component(kind).ok_or(Error::MissingTorsorAtNode { node })?;
    conductor_residue(&f, &end.point)
}

/// At every node the conductors must cancel in Z and the residues in F_p.
pub fn kummerian_check(cfg: &SemiStableConfig, torsors: &[MixedTorsor]) -> Result<KummerianReport> {
    if torsors.len() != cfg.components.len() {
        return Err(Error::BadParameters("one mixed torsor per component is required".into()));
    }
    let mut nodes = Vec::new();
    for (i, [a, b]) in cfg.nodes.iter().enumerate() {
        let da = end_data(i, a, &torsors[a.component])?;
        let db = end_data(i, b, &torsors[b.component])?;
        let p = torsors[a.component].field().p();
        let conductor_sum = da.m + db.m;
        let residue_sum = (da.h + db.h) % p;
        nodes.push(NodeReport { node: i, ends: [da, db], conductor_sum, residue_sum, ok: conductor_sum == 0 && residue_sum == 0 });
    }
    let kummerian = nodes.iter().all(|n| n.ok);
    Ok(KummerianReport { nodes, kummerian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::RationalFunction;

    fn two_lines(k: &FiniteField) -> SemiStableConfig {
        let comp = |n: &str| Component { name: n.into(), marked: vec![P1Point::Infinity] };
        let end = |c| NodeEnd { component: c, point: P1Point::origin(k), kind: None };
        SemiStableConfig::new(vec![comp("X1"), comp("X2")], vec![[end(0), end(1)]]).unwrap()
    }

    fn mu(k: &FiniteField, e: i64) -> MixedTorsor {
        MixedTorsor::single(CharPTorsor::mu_p(RationalFunction::t(k).pow(e).unwrap()).unwrap())
    }

    #[test]
    fn residues_cancel() {
        let k = FiniteField::prime(5).unwrap();
        let cfg = two_lines(&k);
        let r = kummerian_check(&cfg, &[mu(&k, 1), mu(&k, 4)]).unwrap();
        assert!(r.kummerian);
        assert_eq!(r.nodes[0].ends[1].h, 4);
        let r = kummerian_check(&cfg, &[mu(&k, 1), mu(&k, 1)]).unwrap();
        assert!(!r.kummerian);
        assert_eq!(r.nodes[0].residue_sum, 2);
        let z = MixedTorsor::zero(&k);
        assert!(kummerian_check(&cfg, &[z.clone(), z]).unwrap().kummerian);
    }

    #[test]
    fn ambiguous_designation() {
        let k = FiniteField::prime(3).unwrap();
        let cfg = two_lines(&k);
        let a = MixedTorsor::single(CharPTorsor::etale(RationalFunction::t(&k).pow(-1).unwrap()));
        let both = a.add(&mu(&k, 1)).unwrap();
        assert_eq!(kummerian_check(&cfg, &[both, mu(&k, 2)]), Err(Error::MissingTorsorAtNode { node: 0 }));
    }

    #[test]
    fn group_law() {
        let k = FiniteField::prime(3).unwrap();
        let x = mu(&k, 1);
        assert_eq!(x.add(&MixedTorsor::zero(&k)).unwrap(), x);
        let y = x.add(&mu(&k, 2)).unwrap();
        let TorsorDatum::Rational(u) = y.component(GroupSchemeKind::MuP).unwrap().datum else { unreachable!() };
        assert!(u.is_pth_power());
        let e = |n| MixedTorsor::single(CharPTorsor::etale(RationalFunction::t(&k).pow(n).unwrap()));
        let s = e(-1).add(&e(-2)).unwrap();
        let expect = RationalFunction::t(&k).pow(-1).unwrap().add(&RationalFunction::t(&k).pow(-2).unwrap()).unwrap();
        assert_eq!(s.component(GroupSchemeKind::EtaleZp).unwrap().datum, TorsorDatum::Rational(expect));
        let other = MixedTorsor::zero(&FiniteField::prime(5).unwrap());
        assert_eq!(x.add(&other), Err(Error::SchemeMismatch));
    }
}
