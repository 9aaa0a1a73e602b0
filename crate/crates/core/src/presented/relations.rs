//! Instances of the defining relations of every algebra as pairs of free
//! elements `(lhs, rhs)`.

use std::fmt;

use crate::backend::ObjId;
use crate::error::{Error, Result};
use crate::hall::{aut, vpow};
use crate::quiver::KClass;
use crate::scalar::{Rational, SqrtScalar};

use super::rules::{self, Rewrite};
use super::{cross, Algebra, FreeElt, Gen, Workbench};

/// Parameters of a relation instance. `part` selects among the relations
/// sharing one label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelParams {
    pub m: Option<ObjId>,
    pub n: Option<ObjId>,
    pub alpha: Option<KClass>,
    pub beta: Option<KClass>,
    pub i: Option<i64>,
    pub j: Option<i64>,
    pub part: u8,
}

impl RelParams {
    pub fn objects(m: &ObjId, n: &ObjId) -> Self {
        RelParams { m: Some(m.clone()), n: Some(n.clone()), ..Default::default() }
    }

    pub fn with_i(mut self, i: i64) -> Self {
        self.i = Some(i);
        self
    }

    pub fn with_j(mut self, j: i64) -> Self {
        self.j = Some(j);
        self
    }

    pub fn with_part(mut self, part: u8) -> Self {
        self.part = part;
        self
    }

    pub fn with_classes(mut self, a: &KClass, b: &KClass) -> Self {
        self.alpha = Some(a.clone());
        self.beta = Some(b.clone());
        self
    }

    fn obj_m(&self) -> Result<&ObjId> {
        self.m.as_ref().ok_or_else(|| Error::Param("relation needs M".into()))
    }
    fn obj_n(&self) -> Result<&ObjId> {
        self.n.as_ref().ok_or_else(|| Error::Param("relation needs N".into()))
    }
    fn cls_a(&self) -> Result<&KClass> {
        self.alpha.as_ref().ok_or_else(|| Error::Param("relation needs alpha".into()))
    }
    fn cls_b(&self) -> Result<&KClass> {
        self.beta.as_ref().ok_or_else(|| Error::Param("relation needs beta".into()))
    }
    fn idx_i(&self) -> Result<i64> {
        self.i.ok_or_else(|| Error::Param("relation needs i".into()))
    }
    fn idx_j(&self) -> Result<i64> {
        self.j.ok_or_else(|| Error::Param("relation needs j".into()))
    }
}

impl fmt::Display for RelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(m) = &self.m {
            parts.push(format!("M={m}"));
        }
        if let Some(n) = &self.n {
            parts.push(format!("N={n}"));
        }
        if let Some(a) = &self.alpha {
            parts.push(format!("alpha={a}"));
        }
        if let Some(b) = &self.beta {
            parts.push(format!("beta={b}"));
        }
        if let Some(i) = self.i {
            parts.push(format!("i={i}"));
        }
        if let Some(j) = self.j {
            parts.push(format!("j={j}"));
        }
        if self.part > 0 {
            parts.push(format!("part={}", self.part));
        }
        f.write_str(&parts.join(" "))
    }
}

/// Relation labels of each algebra with their number of parts.
pub fn relation_catalog(alg: Algebra) -> Vec<(&'static str, u8)> {
    match alg {
        Algebra::Hd => vec![("2.3", 2), ("2.4", 2), ("2.5", 3), ("2.6", 2), ("2.7", 1)],
        Algebra::Hhd => vec![("2.8", 2), ("2.9", 2), ("2.10", 3), ("2.11", 2), ("2.12", 1)],
        Algebra::D => vec![("2.14", 2), ("2.15", 2), ("2.16", 3), ("2.17", 2), ("2.18", 1)],
        Algebra::Dhm(_) => vec![("4.1", 2), ("4.2", 1), ("4.3", 1), ("4.4", 1), ("4.5", 1)],
        Algebra::Dh => vec![("4.6", 1), ("4.7", 1), ("4.8", 1)],
        Algebra::Dhtw => vec![("4.15", 1), ("4.16", 1), ("4.17", 1)],
        Algebra::Dhce => vec![
            ("4.10", 2),
            ("4.11", 2),
            ("4.12", 1),
            ("4.13", 1),
            ("4.14", 1),
            ("4.15", 1),
            ("4.16", 1),
            ("4.17", 1),
        ],
    }
}

fn owner(rel: &str) -> Option<&'static [Algebra]> {
    use Algebra::*;
    Some(match rel {
        "2.3" | "2.4" | "2.5" | "2.6" | "2.7" => &[Hd],
        "2.8" | "2.9" | "2.10" | "2.11" | "2.12" => &[Hhd],
        "2.13" | "2.14" | "2.15" | "2.16" | "2.17" | "2.18" | "2.18r" => &[D],
        "4.1" | "4.2" | "4.3" | "4.4" | "4.5" => &[],
        "4.6" | "4.7" | "4.8" => &[Dh],
        "4.10" | "4.11" | "4.12" | "4.13" | "4.14" => &[Dhce],
        "4.15" | "4.16" | "4.17" | "4.17p" => &[Dhce, Dhtw],
        _ => return None,
    })
}

fn from_rewrite(q: u64, r: Rewrite) -> FreeElt {
    let mut x = FreeElt::zero(q);
    for (c, w) in r {
        x.add_term(w.into_iter().filter(|g| !g.is_unit()).collect(), c);
    }
    x
}

fn pair(q: u64, lhs: Vec<Gen>, c: SqrtScalar, rhs: Vec<Gen>) -> (FreeElt, FreeElt) {
    (FreeElt::word(q, lhs), FreeElt::term(rhs, c))
}

fn bad_part(rel: &str, part: u8) -> Error {
    Error::Param(format!("relation {rel} has no part {part}"))
}

/// The instance `(lhs, rhs)` of relation `rel` of `alg` at `p`.
pub fn relation_instance(wb: &Workbench, alg: Algebra, rel: &str, p: &RelParams) -> Result<(FreeElt, FreeElt)> {
    let owners = owner(rel).ok_or_else(|| Error::UnknownRelation(rel.to_string()))?;
    let fits = match alg {
        Algebra::Dhm(_) => matches!(rel, "4.1" | "4.2" | "4.3" | "4.4" | "4.5"),
        a => owners.contains(&a),
    };
    if !fits {
        return Err(Error::UnknownRelation(format!("{rel} in {alg}")));
    }
    let b = wb.backend();
    let q = b.q();
    let vp = |n: i64| vpow(b, n);
    let one = SqrtScalar::one(q);
    use Gen::*;
    Ok(match rel {
        "2.3" | "2.8" | "2.14" => {
            let (m, n) = (p.obj_m()?, p.obj_n()?);
            let wrap: fn(ObjId) -> Gen = match (rel, p.part) {
                ("2.3", 0) => MuP,
                ("2.3", 1) => MuM,
                ("2.8", 0) => NuP,
                ("2.8", 1) => NuM,
                ("2.14", 0) => OmP,
                ("2.14", 1) => OmM,
                _ => return Err(bad_part(rel, p.part)),
            };
            let lhs = FreeElt::word(q, vec![wrap(m.clone()), wrap(n.clone())]);
            (lhs, from_rewrite(q, rules::twisted_product(b, m, n, wrap)?))
        }
        "2.4" | "2.9" | "2.15" => {
            let (a, m) = (p.cls_a()?, p.obj_m()?);
            let c = vp(b.sym(a, m.hat()));
            let (k, g) = match (rel, p.part) {
                ("2.4", 0) => (KP(a.clone()), MuP(m.clone())),
                ("2.4", 1) => (KM(a.clone()), MuM(m.clone())),
                ("2.9", 0) => (KcP(a.clone()), NuP(m.clone())),
                ("2.9", 1) => (KcM(a.clone()), NuM(m.clone())),
                ("2.15", 0) => (KdP(a.clone()), OmP(m.clone())),
                ("2.15", 1) => (KdM(a.clone()), OmM(m.clone())),
                _ => return Err(bad_part(rel, p.part)),
            };
            pair(q, vec![k.clone(), g.clone()], c, vec![g, k])
        }
        "2.5" | "2.10" | "2.16" => {
            let (a, be) = (p.cls_a()?, p.cls_b()?);
            let (plus, minus): (fn(KClass) -> Gen, fn(KClass) -> Gen) = match rel {
                "2.5" => (KP, KM),
                "2.10" => (KcP, KcM),
                _ => (KdP, KdM),
            };
            match p.part {
                0 => pair(q, vec![plus(a.clone()), plus(be.clone())], one, vec![plus(a + be)]),
                1 => pair(q, vec![minus(a.clone()), minus(be.clone())], one, vec![minus(a + be)]),
                2 => {
                    let c = match rel {
                        "2.5" => vp(b.sym(a, be)),
                        "2.10" => vp(-b.sym(a, be)),
                        _ => one,
                    };
                    pair(q, vec![plus(a.clone()), minus(be.clone())], c, vec![minus(be.clone()), plus(a.clone())])
                }
                _ => return Err(bad_part(rel, p.part)),
            }
        }
        "2.6" | "2.11" | "2.17" => {
            let (a, m) = (p.cls_a()?, p.obj_m()?);
            let s = b.sym(a, m.hat());
            let (k, g, c) = match (rel, p.part) {
                ("2.6", 0) => (KP(a.clone()), MuM(m.clone()), one),
                ("2.6", 1) => (KM(a.clone()), MuP(m.clone()), vp(-s)),
                ("2.11", 0) => (KcM(a.clone()), NuP(m.clone()), one),
                ("2.11", 1) => (KcP(a.clone()), NuM(m.clone()), vp(-s)),
                ("2.17", 0) => (KdP(a.clone()), OmM(m.clone()), vp(-s)),
                ("2.17", 1) => (KdM(a.clone()), OmP(m.clone()), vp(-s)),
                _ => return Err(bad_part(rel, p.part)),
            };
            pair(q, vec![k.clone(), g.clone()], c, vec![g, k])
        }
        "2.7" => {
            let (m, n) = (p.obj_m()?, p.obj_n()?);
            let lhs = FreeElt::word(q, vec![MuP(m.clone()), MuM(n.clone())]);
            (lhs, from_rewrite(q, rules::hd_cross_terms(b, m, n)?))
        }
        "2.12" => {
            let (m, n) = (p.obj_m()?, p.obj_n()?);
            let lhs = FreeElt::word(q, vec![NuM(n.clone()), NuP(m.clone())]);
            (lhs, from_rewrite(q, rules::hhd_cross_terms(b, n, m)?))
        }
        "2.18" => {
            let (m, n) = (p.obj_m()?, p.obj_n()?);
            (from_rewrite(q, rules::d_cross_lhs(b, m, n)?), from_rewrite(q, rules::d_cross_rhs(b, m, n)?))
        }
        "2.18r" => {
            let (m, n) = (p.obj_m()?, p.obj_n()?);
            d_cross_expanded(wb, m, n)?
        }
        "2.13" => {
            let (m, n) = (p.obj_m()?, p.obj_n()?);
            let zero = b.zero_class();
            let a = p.alpha.clone().unwrap_or_else(|| zero.clone());
            let be = p.beta.clone().unwrap_or(zero);
            cross::drinfeld_abstract(wb, m, &be, n, &a)?
        }
        "4.1" => {
            let (a, be, i) = (p.cls_a()?, p.cls_b()?, alg.index(p.idx_i()?));
            match p.part {
                0 => pair(q, vec![Ki(a.clone(), i), Ki(be.clone(), i)], one, vec![Ki(a + be, i)]),
                1 => {
                    let j = alg.index(p.idx_j()?);
                    if i == j {
                        return Err(Error::Param("relation 4.1 part 1 needs i != j".into()));
                    }
                    let c = rules::dhm_kk(alg, b, a, i, be, j);
                    pair(q, vec![Ki(a.clone(), i), Ki(be.clone(), j)], c, vec![Ki(be.clone(), j), Ki(a.clone(), i)])
                }
                _ => return Err(bad_part(rel, p.part)),
            }
        }
        "4.2" => {
            let (a, m) = (p.cls_a()?, p.obj_m()?);
            let (i, j) = (alg.index(p.idx_i()?), alg.index(p.idx_j()?));
            let c = rules::dhm_ke(alg, b, a, i, m, j);
            pair(q, vec![Ki(a.clone(), i), E(m.clone(), j)], c, vec![E(m.clone(), j), Ki(a.clone(), i)])
        }
        "4.3" => {
            let (m, n, i) = (p.obj_m()?, p.obj_n()?, alg.index(p.idx_i()?));
            let lhs = FreeElt::word(q, vec![E(m.clone(), i), E(n.clone(), i)]);
            (lhs, from_rewrite(q, rules::twisted_product(b, m, n, |l| E(l, i))?))
        }
        "4.4" => {
            let (m, n) = (p.obj_m()?, p.obj_n()?);
            let i = alg.index(p.idx_i()?);
            let i1 = alg.index(i + 1);
            let lhs = FreeElt::word(q, vec![E(m.clone(), i1), E(n.clone(), i)]);
            (lhs, from_rewrite(q, rules::dhm_cross_terms(b, m, n, i, i1)?))
        }
        "4.5" => {
            let (m, n) = (p.obj_m()?, p.obj_n()?);
            let (i, j) = (alg.index(p.idx_i()?), alg.index(p.idx_j()?));
            let d = i - j;
            let excluded = match alg.modulus() {
                Some(md) => [0, 1, md - 1].contains(&d.rem_euclid(md)),
                None => [0, 1, -1].contains(&d),
            };
            if excluded {
                return Err(Error::Param(format!("relation 4.5 needs i - j outside 0, 1, m-1 (got i={i}, j={j})")));
            }
            pair(q, vec![E(m.clone(), i), E(n.clone(), j)], one, vec![E(n.clone(), j), E(m.clone(), i)])
        }
        "4.6" | "4.15" => {
            let (m, n, i) = (p.obj_m()?, p.obj_n()?, p.idx_i()?);
            let lhs = FreeElt::word(q, vec![Z(m.clone(), i), Z(n.clone(), i)]);
            let rhs = if rel == "4.6" {
                rules::plain_product(b, m, n, |l| Z(l, i))?
            } else {
                rules::twisted_product(b, m, n, |l| Z(l, i))?
            };
            (lhs, from_rewrite(q, rhs))
        }
        "4.7" | "4.16" => {
            let (m, n, i) = (p.obj_m()?, p.obj_n()?, p.idx_i()?);
            let lhs = FreeElt::word(q, vec![Z(m.clone(), i + 1), Z(n.clone(), i)]);
            (lhs, from_rewrite(q, rules::z_cross_terms(b, m, n, i, rel == "4.16")?))
        }
        "4.8" | "4.17" | "4.17p" => {
            let (m, n, i, j) = (p.obj_m()?, p.obj_n()?, p.idx_i()?, p.idx_j()?);
            if i - j <= 1 {
                return Err(Error::Param(format!("relation {rel} needs i - j > 1")));
            }
            let c = match rel {
                "4.8" => rules::z_far(b, m, i, n, j, false),
                "4.17" => rules::z_far(b, m, i, n, j, true),
                _ => rules::z_far_printed(b, m, i, n, j),
            };
            pair(q, vec![Z(m.clone(), i), Z(n.clone(), j)], c, vec![Z(n.clone(), j), Z(m.clone(), i)])
        }
        "4.10" => {
            let i = p.idx_i()?;
            let a = p.cls_a()?;
            match p.part {
                0 => {
                    let be = p.cls_b()?;
                    pair(q, vec![KZ(a.clone(), i), KZ(be.clone(), i)], one, vec![KZ(a + be, i)])
                }
                1 => ce_kz_pair(wb, a, i, p.obj_m()?, i),
                _ => return Err(bad_part(rel, p.part)),
            }
        }
        "4.11" => {
            let (a, be, i) = (p.cls_a()?, p.cls_b()?, p.idx_i()?);
            match p.part {
                0 => pair(
                    q,
                    vec![KZ(a.clone(), i + 1), KZ(be.clone(), i)],
                    vp(b.sym(a, be)),
                    vec![KZ(be.clone(), i), KZ(a.clone(), i + 1)],
                ),
                1 => {
                    let j = p.idx_j()?;
                    if (i - j).abs() <= 1 {
                        return Err(Error::Param("relation 4.11 part 1 needs |i - j| > 1".into()));
                    }
                    pair(q, vec![KZ(a.clone(), i), KZ(be.clone(), j)], one, vec![KZ(be.clone(), j), KZ(a.clone(), i)])
                }
                _ => return Err(bad_part(rel, p.part)),
            }
        }
        "4.12" => ce_kz_pair(wb, p.cls_a()?, p.idx_i()?, p.obj_m()?, p.idx_i()? + 1),
        "4.13" => ce_kz_pair(wb, p.cls_a()?, p.idx_i()?, p.obj_m()?, p.idx_i()? - 1),
        "4.14" => {
            let (i, j) = (p.idx_i()?, p.idx_j()?);
            if (i - j).abs() <= 1 {
                return Err(Error::Param("relation 4.14 needs |i - j| > 1".into()));
            }
            ce_kz_pair(wb, p.cls_a()?, i, p.obj_m()?, j)
        }
        _ => return Err(Error::UnknownRelation(rel.to_string())),
    })
}

fn ce_kz_pair(wb: &Workbench, a: &KClass, i: i64, m: &ObjId, j: i64) -> (FreeElt, FreeElt) {
    let c = rules::ce_kz(wb.backend(), a, i, m, j);
    pair(wb.q(), vec![Gen::KZ(a.clone(), i), Gen::Z(m.clone(), j)], c, vec![Gen::Z(m.clone(), j), Gen::KZ(a.clone(), i)])
}

/// The cross relation of the Drinfeld double with `γ` expanded:
/// `Σ v^{<L, M-N>} a_X a_Y a_L g^M_{LX} g^N_{YL} 𝒦⁻_L ω⁻_Y ω⁺_X =
///  Σ v^{<L, N-M>} a_X a_Y a_L g^M_{XL} g^N_{LY} 𝒦⁺_L ω⁺_X ω⁻_Y`.
fn d_cross_expanded(wb: &Workbench, m: &ObjId, n: &ObjId) -> Result<(FreeElt, FreeElt)> {
    let b = wb.backend();
    let q = b.q();
    let int = |g: u64| Rational::from_integer(g.into());
    let mut lhs = FreeElt::zero(q);
    let split_n = b.splittings(n)?;
    for (l, x, g1) in b.splittings(m)? {
        for (y, l2, g2) in &split_n {
            if *l2 != l {
                continue;
            }
            let r = aut(b, &x)? * aut(b, y)? * aut(b, &l)? * int(g1) * int(*g2);
            let c = vpow(b, b.euler(l.hat(), &(m.hat() - n.hat()))).scale_rational(&r);
            lhs.add_term(vec![Gen::KdM(l.hat().clone()), Gen::OmM(y.clone()), Gen::OmP(x.clone())], c);
        }
    }
    let mut rhs = FreeElt::zero(q);
    let split_n = b.splittings(n)?;
    for (x, l, g1) in b.splittings(m)? {
        for (l2, y, g2) in &split_n {
            if *l2 != l {
                continue;
            }
            let r = aut(b, &x)? * aut(b, y)? * aut(b, &l)? * int(g1) * int(*g2);
            let c = vpow(b, b.euler(l.hat(), &(n.hat() - m.hat()))).scale_rational(&r);
            rhs.add_term(vec![Gen::KdP(l.hat().clone()), Gen::OmP(x.clone()), Gen::OmM(y.clone())], c);
        }
    }
    Ok((strip_units(&lhs), strip_units(&rhs)))
}

pub(crate) fn strip_units(x: &FreeElt) -> FreeElt {
    let mut out = FreeElt::zero(x.q());
    for (w, c) in x.terms() {
        out.add_term(w.iter().filter(|g| !g.is_unit()).cloned().collect(), c.clone());
    }
    out
}
