//! Algebra homomorphisms given by generator images, their multiplicative
//! extension, and relation-preservation checks.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use crate::backend::{Backend, ObjId};
use crate::error::{Error, Result};
use crate::hall::{aut_ratio, vpow};
use crate::presented::{relation_instance, Algebra, Elt, FreeElt, Gen, RelParams, Word, Workbench};
use crate::quiver::KClass;
use crate::scalar::{Rational, SqrtScalar};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum HomKind {
    /// `D → HD ⊗ ȞD`.
    I,
    /// `HD → DH_m`.
    Kappa { m: u32, i: i64 },
    /// `ȞD → DH_m`.
    KappaCheck { m: u32, i: i64 },
    /// `D → DH_m ⊗ DH_m`.
    Psi { m: u32, i: i64 },
    /// `DH_tw^ce → DH_0`.
    Phi,
    /// `DH_0 → DH_tw^ce`.
    PhiInv,
    /// `D → DH_tw^ce ⊗ DH_tw^ce`.
    Varphi { i: i64 },
}

impl HomKind {
    pub fn source(self) -> Algebra {
        match self {
            HomKind::I | HomKind::Psi { .. } | HomKind::Varphi { .. } => Algebra::D,
            HomKind::Kappa { .. } => Algebra::Hd,
            HomKind::KappaCheck { .. } => Algebra::Hhd,
            HomKind::Phi => Algebra::Dhce,
            HomKind::PhiInv => Algebra::Dhm(0),
        }
    }

    pub fn target(self) -> Vec<Algebra> {
        match self {
            HomKind::I => vec![Algebra::Hd, Algebra::Hhd],
            HomKind::Kappa { m, .. } | HomKind::KappaCheck { m, .. } => vec![Algebra::Dhm(m)],
            HomKind::Psi { m, .. } => vec![Algebra::Dhm(m); 2],
            HomKind::Phi => vec![Algebra::Dhm(0)],
            HomKind::PhiInv => vec![Algebra::Dhce],
            HomKind::Varphi { .. } => vec![Algebra::Dhce; 2],
        }
    }

    fn validate(self) -> Result<Self> {
        if let HomKind::Kappa { m, .. } | HomKind::KappaCheck { m, .. } | HomKind::Psi { m, .. } = self {
            Algebra::Dhm(m).validate()?;
        }
        Ok(self)
    }
}

impl fmt::Display for HomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomKind::I => write!(f, "I"),
            HomKind::Kappa { m, i } => write!(f, "kappa(m={m},i={i})"),
            HomKind::KappaCheck { m, i } => write!(f, "kappaCheck(m={m},i={i})"),
            HomKind::Psi { m, i } => write!(f, "psi(m={m},i={i})"),
            HomKind::Phi => write!(f, "phi"),
            HomKind::PhiInv => write!(f, "phiInv"),
            HomKind::Varphi { i } => write!(f, "varphi(i={i})"),
        }
    }
}

/// A homomorphism determined by generator images, with memoized images.
pub struct GenMap {
    kind: HomKind,
    cache: Mutex<HashMap<Gen, Elt>>,
}

/// Builds a map by name: `I`, `kappa`, `kappaCheck`, `psi`, `phi`, `phiInv`, `varphi`.
pub fn build_hom(name: &str, m: Option<u32>, i: Option<i64>) -> Result<GenMap> {
    let need_i = || i.ok_or_else(|| Error::Param(format!("map {name} needs i")));
    let m = m.unwrap_or(0);
    let kind = match name {
        "I" => HomKind::I,
        "kappa" => HomKind::Kappa { m, i: need_i()? },
        "kappaCheck" => HomKind::KappaCheck { m, i: need_i()? },
        "psi" => HomKind::Psi { m, i: need_i()? },
        "phi" => HomKind::Phi,
        "phiInv" => HomKind::PhiInv,
        "varphi" => HomKind::Varphi { i: need_i()? },
        _ => return Err(Error::Param(format!("unknown map {name}"))),
    };
    GenMap::new(kind)
}

fn sign(i: i64) -> i64 {
    if i.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `v^e a_{M1} a_{M2} / a_M`.
fn split_coeff(b: &Backend, e: i64, m1: &ObjId, m2: &ObjId, m: &ObjId, g: u64) -> Result<SqrtScalar> {
    let r = aut_ratio(b, m1, m2, m)? * Rational::from_integer(g.into());
    Ok(vpow(b, e).scale_rational(&r))
}

impl GenMap {
    pub fn new(kind: HomKind) -> Result<Self> {
        Ok(GenMap { kind: kind.validate()?, cache: Mutex::new(HashMap::new()) })
    }

    pub fn kind(&self) -> HomKind {
        self.kind
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    pub fn source(&self) -> Algebra {
        self.kind.source()
    }

    pub fn target(&self) -> Vec<Algebra> {
        self.kind.target()
    }

    /// Image of a generator, normalized in the target.
    pub fn image(&self, wb: &Workbench, g: &Gen) -> Result<Elt> {
        if !g.algebra_matches(self.source()) {
            return Err(Error::UnknownSymbol { symbol: g.to_string(), algebra: self.source().to_string() });
        }
        if let Some(x) = self.cache.lock().unwrap().get(g) {
            return Ok(x.clone());
        }
        let x = if g.is_unit() { Elt::unit(wb.q(), self.target()) } else { self.compute(wb, g)? };
        self.cache.lock().unwrap().insert(g.clone(), x.clone());
        Ok(x)
    }

    /// Multiplicative extension to a free element of the source.
    pub fn apply(&self, wb: &Workbench, x: &FreeElt) -> Result<Elt> {
        let mut out = Elt::zero(wb.q(), self.target());
        for (w, c) in x.terms() {
            let mut acc = Elt::unit(wb.q(), self.target());
            for g in w {
                acc = wb.mult(&acc, &self.image(wb, g)?)?;
            }
            out.add(&acc, c);
        }
        Ok(out)
    }

    fn one_factor(&self, wb: &Workbench, terms: Vec<(SqrtScalar, Word)>) -> Result<Elt> {
        let alg = self.target()[0];
        let mut x = FreeElt::zero(wb.q());
        for (c, w) in terms {
            x.add_term(w, c);
        }
        wb.normal_form(alg, &x)
    }

    fn two_factor(&self, wb: &Workbench, terms: Vec<(SqrtScalar, Word, Word)>) -> Result<Elt> {
        let algs = self.target();
        let mut out = Elt::zero(wb.q(), algs.clone());
        for (c, u, w) in terms {
            let x = wb.word(algs[0], u)?.tensor(&wb.word(algs[1], w)?);
            out.add(&x, &c);
        }
        Ok(out)
    }

    fn compute(&self, wb: &Workbench, g: &Gen) -> Result<Elt> {
        let b = wb.backend();
        let one = SqrtScalar::one(b.q());
        use Gen::*;
        match self.kind {
            HomKind::I => match g {
                KdP(a) => self.two_factor(wb, vec![(one, vec![KP(a.clone())], vec![KcP(a.clone())])]),
                KdM(a) => self.two_factor(wb, vec![(one, vec![KM(a.clone())], vec![KcM(a.clone())])]),
                OmP(m) => {
                    let mut t = Vec::new();
                    for (m1, m2, gg) in b.splittings(m)? {
                        let c = split_coeff(b, b.euler(m1.hat(), m2.hat()), &m1, &m2, m, gg)?;
                        t.push((c, vec![MuP(m1.clone()), KP(m2.hat().clone())], vec![NuP(m2)]));
                    }
                    self.two_factor(wb, t)
                }
                OmM(m) => {
                    let mut t = Vec::new();
                    for (m2, m1, gg) in b.splittings(m)? {
                        let c = split_coeff(b, b.euler(m2.hat(), m1.hat()), &m1, &m2, m, gg)?;
                        t.push((c, vec![MuM(m1.clone())], vec![NuM(m2), KcM(m1.hat().clone())]));
                    }
                    self.two_factor(wb, t)
                }
                _ => unreachable!(),
            },
            HomKind::Kappa { m, i } => {
                let alg = Algebra::Dhm(m);
                let (lo, hi) = (alg.index(i), alg.index(i + 1));
                let img = match g {
                    KP(a) => Ki(a.clone(), hi),
                    KM(a) => Ki(a.clone(), lo),
                    MuP(x) => E(x.clone(), hi),
                    MuM(x) => E(x.clone(), lo),
                    _ => unreachable!(),
                };
                self.one_factor(wb, vec![(one, vec![img])])
            }
            HomKind::KappaCheck { m, i } => {
                let alg = Algebra::Dhm(m);
                let (lo, hi) = (alg.index(i), alg.index(i + 1));
                let img = match g {
                    KcP(a) => Ki(a.clone(), lo),
                    KcM(a) => Ki(a.clone(), hi),
                    NuP(x) => E(x.clone(), lo),
                    NuM(x) => E(x.clone(), hi),
                    _ => unreachable!(),
                };
                self.one_factor(wb, vec![(one, vec![img])])
            }
            HomKind::Psi { m, i } => {
                let alg = Algebra::Dhm(m);
                let (lo, hi) = (alg.index(i), alg.index(i + 1));
                match g {
                    KdP(a) => self.two_factor(wb, vec![(one, vec![Ki(a.clone(), hi)], vec![Ki(a.clone(), lo)])]),
                    KdM(a) => self.two_factor(wb, vec![(one, vec![Ki(a.clone(), lo)], vec![Ki(a.clone(), hi)])]),
                    OmP(x) => {
                        let mut t = Vec::new();
                        for (m1, m2, gg) in b.splittings(x)? {
                            let c = split_coeff(b, b.euler(m1.hat(), m2.hat()), &m1, &m2, x, gg)?;
                            t.push((c, vec![E(m1.clone(), hi), Ki(m2.hat().clone(), hi)], vec![E(m2, lo)]));
                        }
                        self.two_factor(wb, t)
                    }
                    OmM(x) => {
                        let mut t = Vec::new();
                        for (m2, m1, gg) in b.splittings(x)? {
                            let c = split_coeff(b, b.euler(m2.hat(), m1.hat()), &m1, &m2, x, gg)?;
                            t.push((c, vec![E(m1.clone(), lo)], vec![E(m2, hi), Ki(m1.hat().clone(), hi)]));
                        }
                        self.two_factor(wb, t)
                    }
                    _ => unreachable!(),
                }
            }
            HomKind::Phi => {
                let t = match g {
                    KZ(a, n) => vec![(one, vec![Ki(a.clone(), *n)])],
                    Z(x, 0) => vec![(one, vec![E(x.clone(), 0)])],
                    Z(x, n) if *n > 0 => {
                        let mut w = vec![E(x.clone(), *n)];
                        for k in 1..=*n {
                            w.push(Ki(x.hat().scale(sign(k)), n - k));
                        }
                        vec![(vpow(b, n * b.euler(x.hat(), x.hat())), w)]
                    }
                    Z(x, neg) => {
                        let n = -neg;
                        let mut w = vec![E(x.clone(), -n)];
                        for k in 0..n {
                            w.push(Ki(x.hat().scale(sign(k + 1)), k - n));
                        }
                        vec![(vpow(b, -n * b.euler(x.hat(), x.hat())), w)]
                    }
                    _ => unreachable!(),
                };
                self.one_factor(wb, t)
            }
            HomKind::PhiInv => {
                let t = match g {
                    Ki(a, n) => vec![(one, vec![KZ(a.clone(), *n)])],
                    E(x, 0) => vec![(one, vec![Z(x.clone(), 0)])],
                    E(x, n) if *n > 0 => {
                        let mut w = vec![Z(x.clone(), *n)];
                        for k in 0..*n {
                            w.push(KZ(x.hat().scale(sign(n - k - 1)), k));
                        }
                        vec![(vpow(b, -n * b.euler(x.hat(), x.hat())), w)]
                    }
                    E(x, neg) => {
                        let n = -neg;
                        let mut w = vec![Z(x.clone(), -n)];
                        for k in 1..=n {
                            w.push(KZ(x.hat().scale(sign(n - k)), -k));
                        }
                        vec![(vpow(b, n * b.euler(x.hat(), x.hat())), w)]
                    }
                    _ => unreachable!(),
                };
                self.one_factor(wb, t)
            }
            HomKind::Varphi { i } => self.varphi_image(wb, i, g),
        }
    }

    fn varphi_image(&self, wb: &Workbench, i: i64, g: &Gen) -> Result<Elt> {
        let b = wb.backend();
        let one = SqrtScalar::one(b.q());
        use Gen::*;
        let e = |x: &KClass, y: &KClass| b.euler(x, y);
        // Products of K letters appearing in the i < -1 and i > 0 branches.
        let kneg = |cls: &KClass, upto: i64, shift: i64| -> Vec<Gen> {
            (1..=upto).map(|j| KZ(cls.scale(sign(i + j + shift)), -j)).collect()
        };
        let kpos = |cls: &KClass, upto: i64, shift: i64| -> Vec<Gen> {
            (0..=upto).map(|j| KZ(cls.scale(sign(i - j + shift)), j)).collect()
        };
        match g {
            KdP(a) => return self.two_factor(wb, vec![(one, vec![KZ(a.clone(), i + 1)], vec![KZ(a.clone(), i)])]),
            KdM(a) => return self.two_factor(wb, vec![(one, vec![KZ(a.clone(), i)], vec![KZ(a.clone(), i + 1)])]),
            _ => {}
        }
        let mut t = Vec::new();
        match g {
            OmP(m) => {
                for (m1, m2, gg) in b.splittings(m)? {
                    let (h, h1, h2) = (m.hat(), m1.hat(), m2.hat());
                    let quad = e(h1, h1) + e(h2, h2);
                    let (ex, u, w) = match i {
                        -1 => (
                            e(h, h2),
                            vec![Z(m1.clone(), 0), KZ(h2.clone(), 0)],
                            vec![Z(m2.clone(), -1), KZ(h2.clone(), -1)],
                        ),
                        0 => (
                            -e(h, h1),
                            vec![Z(m1.clone(), 1), KZ(h2.clone(), 1), KZ(h1.clone(), 0)],
                            vec![Z(m2.clone(), 0)],
                        ),
                        _ if i < -1 => {
                            let mut u = vec![Z(m1.clone(), i + 1)];
                            u.extend(kneg(h1, -(i + 1), 1));
                            u.push(KZ(h2.clone(), i + 1));
                            let mut w = vec![Z(m2.clone(), i)];
                            w.extend(kneg(h2, -i, 0));
                            (e(h1, &(h2 - h1)) - i * quad, u, w)
                        }
                        _ => {
                            let mut u = vec![Z(m1.clone(), i + 1)];
                            u.extend(kpos(h1, i, 0));
                            u.push(KZ(h2.clone(), i + 1));
                            let mut w = vec![Z(m2.clone(), i)];
                            w.extend(kpos(h2, i - 1, -1));
                            (e(h1, &(h2 - h1)) - i * quad, u, w)
                        }
                    };
                    t.push((split_coeff(b, ex, &m1, &m2, m, gg)?, u, w));
                }
            }
            OmM(m) => {
                for (m2, m1, gg) in b.splittings(m)? {
                    let (h, h1, h2) = (m.hat(), m1.hat(), m2.hat());
                    let quad = e(h1, h1) + e(h2, h2);
                    let (ex, u, w) = match i {
                        -1 => (
                            e(h, h1),
                            vec![Z(m1.clone(), -1), KZ(h1.clone(), -1)],
                            vec![Z(m2.clone(), 0), KZ(h1.clone(), 0)],
                        ),
                        0 => (
                            -e(h, h2),
                            vec![Z(m1.clone(), 0)],
                            vec![Z(m2.clone(), 1), KZ(h1.clone(), 1), KZ(h2.clone(), 0)],
                        ),
                        _ if i < -1 => {
                            let mut u = vec![Z(m1.clone(), i)];
                            u.extend(kneg(h1, -i, 0));
                            let mut w = vec![Z(m2.clone(), i + 1)];
                            w.extend(kneg(h2, -(i + 1), 1));
                            w.push(KZ(h1.clone(), i + 1));
                            (e(h2, &(h1 - h2)) - i * quad, u, w)
                        }
                        _ => {
                            let mut u = vec![Z(m1.clone(), i)];
                            u.extend(kpos(h1, i - 1, -1));
                            let mut w = vec![Z(m2.clone(), i + 1)];
                            w.extend(kpos(h2, i, 0));
                            w.push(KZ(h1.clone(), i + 1));
                            (e(h2, &(h1 - h2)) - i * quad, u, w)
                        }
                    };
                    t.push((split_coeff(b, ex, &m1, &m2, m, gg)?, u, w));
                }
            }
            _ => unreachable!(),
        }
        self.two_factor(wb, t)
    }
}

/// Applies one map per tensor factor.
pub fn apply_factorwise(wb: &Workbench, maps: &[&GenMap], x: &Elt) -> Result<Elt> {
    if maps.len() != x.algebras().len() {
        return Err(Error::Param("one map per tensor factor expected".into()));
    }
    let algs: Vec<Algebra> = maps.iter().flat_map(|h| h.target()).collect();
    let mut out = Elt::zero(wb.q(), algs);
    for (k, c) in x.terms() {
        let mut acc: Option<Elt> = None;
        for (h, w) in maps.iter().zip(k) {
            let img = h.apply(wb, &FreeElt::word(wb.q(), w.clone()))?;
            acc = Some(match acc {
                None => img,
                Some(a) => a.tensor(&img),
            });
        }
        if let Some(a) = acc {
            out.add(&a, c);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub map: String,
    pub relation: String,
    pub params: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

/// Pushes both sides of a source relation through `h` and compares.
pub fn check_relation(wb: &Workbench, h: &GenMap, rel: &str, p: &RelParams) -> Result<CheckReport> {
    let (l, r) = relation_instance(wb, h.source(), rel, p)?;
    let (il, ir) = (h.apply(wb, &l)?, h.apply(wb, &r)?);
    let pass = il == ir;
    Ok(CheckReport {
        map: h.name(),
        relation: rel.to_string(),
        params: p.to_string(),
        pass,
        lhs: if pass { String::new() } else { il.render() },
        rhs: if pass { String::new() } else { ir.render() },
    })
}

/// Rank over `Q(√q)` of the coefficient matrix of `elts` on their joint support.
pub fn rank_independence(elts: &[Elt]) -> Result<usize> {
    let support: Vec<Vec<Word>> =
        elts.iter().flat_map(|x| x.terms().keys().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut rows: Vec<Vec<SqrtScalar>> = elts
        .iter()
        .map(|x| {
            support
                .iter()
                .map(|k| x.terms().get(k).cloned().unwrap_or_else(|| SqrtScalar::zero(x.q())))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..support.len() {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inverse()?;
        let pivot_row: Vec<SqrtScalar> = rows[rank].iter().map(|x| x * &inv).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..support.len() {
                    rows[r][c] = &rows[r][c] - &(&f * &pivot_row[c]);
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn a2() -> Workbench {
        Workbench::new(Arc::new(Backend::preset("a2", 2).unwrap()))
    }

    fn cls(xs: &[i64]) -> KClass {
        KClass::from_slice(xs)
    }

    #[test]
    fn kashaev_image_of_a_simple() {
        let wb = a2();
        let s1 = wb.backend().simple(0);
        let h = build_hom("I", None, None).unwrap();
        let got = h.image(&wb, &Gen::OmP(s1.clone())).unwrap();
        let mut want = Elt::zero(2, vec![Algebra::Hd, Algebra::Hhd]);
        let one = SqrtScalar::one(2);
        want.add_term(vec![vec![Gen::MuP(s1.clone())], vec![]], one.clone());
        want.add_term(vec![vec![Gen::KP(cls(&[1, 0]))], vec![Gen::NuP(s1)]], one);
        assert_eq!(got, want);
        assert_eq!(h.apply(&wb, &FreeElt::scalar(SqrtScalar::one(2))).unwrap(), Elt::unit(2, h.target()));
    }

    #[test]
    fn stated_generator_images() {
        let wb = a2();
        let s1 = wb.backend().simple(0);
        let a = cls(&[1, 0]);
        let psi = build_hom("psi", Some(0), Some(0)).unwrap();
        let got = psi.image(&wb, &Gen::KdP(a.clone())).unwrap();
        let want = wb.gen(Algebra::Dhm(0), Gen::Ki(a.clone(), 1)).unwrap().tensor(&wb.gen(Algebra::Dhm(0), Gen::Ki(a.clone(), 0)).unwrap());
        assert_eq!(got, want);

        let phi = build_hom("phi", None, None).unwrap();
        let got = phi.image(&wb, &Gen::Z(s1.clone(), 1)).unwrap();
        let want = wb
            .word(Algebra::Dhm(0), vec![Gen::E(s1.clone(), 1), Gen::Ki(cls(&[-1, 0]), 0)])
            .unwrap()
            .scale(&vpow(wb.backend(), 1));
        assert_eq!(got, want);
        assert_eq!(phi.image(&wb, &Gen::KZ(a.clone(), -2)).unwrap(), wb.gen(Algebra::Dhm(0), Gen::Ki(a, -2)).unwrap());
    }

    #[test]
    fn cross_relation_preserved_by_kashaev_map() {
        let wb = a2();
        let h = build_hom("I", None, None).unwrap();
        let (s1, s2) = (wb.backend().simple(0), wb.backend().simple(1));
        for (m, n) in [(&s1, &s2), (&s2, &s1), (&s1, &s1)] {
            let r = check_relation(&wb, &h, "2.18", &RelParams::objects(m, n)).unwrap();
            assert!(r.pass, "{} vs {}", r.lhs, r.rhs);
        }
    }

    #[test]
    fn rank_of_images() {
        let wb = a2();
        let h = build_hom("I", None, None).unwrap();
        let x = h.image(&wb, &Gen::OmP(wb.backend().simple(0))).unwrap();
        let y = h.image(&wb, &Gen::OmP(wb.backend().simple(1))).unwrap();
        assert_eq!(rank_independence(&[x.clone(), y]).unwrap(), 2);
        assert_eq!(rank_independence(&[x.clone(), x]).unwrap(), 1);
        assert_eq!(rank_independence(&[]).unwrap(), 0);
    }

    #[test]
    fn phi_round_trips_on_generators() {
        let wb = a2();
        let phi = build_hom("phi", None, None).unwrap();
        let inv = build_hom("phiInv", None, None).unwrap();
        let s1 = wb.backend().simple(0);
        for n in -3..=3 {
            let z = Gen::Z(s1.clone(), n);
            let back = inv.apply(&wb, &phi.image(&wb, &z).unwrap().to_free()).unwrap();
            assert_eq!(back, wb.gen(Algebra::Dhce, z).unwrap());
            let e = Gen::E(s1.clone(), n);
            let back = phi.apply(&wb, &inv.image(&wb, &e).unwrap().to_free()).unwrap();
            assert_eq!(back, wb.gen(Algebra::Dhm(0), e).unwrap());
        }
    }
}
