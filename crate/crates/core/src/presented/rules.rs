//! Rewrite rules for adjacent letter pairs, one table per algebra, plus the
//! commutation scalars they share with the relation catalog.

use crate::backend::{Backend, ObjId};
use crate::error::Result;
use crate::hall::{gamma_terms, vpow};
use crate::quiver::KClass;
use crate::scalar::SqrtScalar;

use super::{Algebra, Gen, Word};

pub type Rewrite = Vec<(SqrtScalar, Word)>;

fn one(b: &Backend) -> SqrtScalar {
    SqrtScalar::one(b.q())
}

fn sign(i: i64) -> i64 {
    if i.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `Σ_L v^{<M,N>} g^L_{MN} [L]`, the twisted Hall product of two objects,
/// with each `L` wrapped by `wrap`.
pub fn twisted_product(b: &Backend, m: &ObjId, n: &ObjId, wrap: impl Fn(ObjId) -> Gen) -> Result<Rewrite> {
    let c = vpow(b, b.euler(m.hat(), n.hat()));
    Ok(b.middle_terms(m, n)?
        .iter()
        .map(|(l, g)| (c.scale_rational(&crate::scalar::Rational::from_integer((*g).into())), vec![wrap(l.clone())]))
        .collect())
}

/// Untwisted version: `Σ_L g^L_{MN} [L]`.
pub fn plain_product(b: &Backend, m: &ObjId, n: &ObjId, wrap: impl Fn(ObjId) -> Gen) -> Result<Rewrite> {
    Ok(b.middle_terms(m, n)?
        .iter()
        .map(|(l, g)| (SqrtScalar::from_int(*g as i64, b.q()), vec![wrap(l.clone())]))
        .collect())
}

/// `μ⁺_M μ⁻_N = Σ v^{<N-Y, X-Y>} γ^{XY}_{MN} K⁻_{N-Y} μ⁻_Y μ⁺_X`.
pub fn hd_cross_terms(b: &Backend, m: &ObjId, n: &ObjId) -> Result<Rewrite> {
    let mut out = Vec::new();
    for (x, y, g) in gamma_terms(b, m, n)?.iter() {
        let ny = n.hat() - y.hat();
        let c = vpow(b, b.euler(&ny, &(x.hat() - y.hat()))).scale_rational(g);
        out.push((c, vec![Gen::KM(ny), Gen::MuM(y.clone()), Gen::MuP(x.clone())]));
    }
    Ok(out)
}

/// `ν⁻_N ν⁺_M = Σ v^{<N-Y, Y-X>} γ^{YX}_{NM} 𝒦⁺_{N-Y} ν⁺_X ν⁻_Y`.
pub fn hhd_cross_terms(b: &Backend, n: &ObjId, m: &ObjId) -> Result<Rewrite> {
    let mut out = Vec::new();
    for (y, x, g) in gamma_terms(b, n, m)?.iter() {
        let ny = n.hat() - y.hat();
        let c = vpow(b, b.euler(&ny, &(y.hat() - x.hat()))).scale_rational(g);
        out.push((c, vec![Gen::KcP(ny), Gen::NuP(x.clone()), Gen::NuM(y.clone())]));
    }
    Ok(out)
}

/// Left side of the Drinfeld double cross relation:
/// `Σ v^{<M-X, M-N>} γ^{XY}_{MN} 𝒦⁻_{M-X} ω⁻_Y ω⁺_X`.
pub fn d_cross_lhs(b: &Backend, m: &ObjId, n: &ObjId) -> Result<Rewrite> {
    let mut out = Vec::new();
    for (x, y, g) in gamma_terms(b, m, n)?.iter() {
        let mx = m.hat() - x.hat();
        let c = vpow(b, b.euler(&mx, &(m.hat() - n.hat()))).scale_rational(g);
        out.push((c, vec![Gen::KdM(mx), Gen::OmM(y.clone()), Gen::OmP(x.clone())]));
    }
    Ok(out)
}

/// Right side: `Σ v^{<M-X, N-M>} γ^{YX}_{NM} 𝒦⁺_{M-X} ω⁺_X ω⁻_Y`.
pub fn d_cross_rhs(b: &Backend, m: &ObjId, n: &ObjId) -> Result<Rewrite> {
    let mut out = Vec::new();
    for (y, x, g) in gamma_terms(b, n, m)?.iter() {
        let mx = m.hat() - x.hat();
        let c = vpow(b, b.euler(&mx, &(n.hat() - m.hat()))).scale_rational(g);
        out.push((c, vec![Gen::KdP(mx), Gen::OmP(x.clone()), Gen::OmM(y.clone())]));
    }
    Ok(out)
}

/// `e_{M,i+1} e_{N,i} = Σ v^{<M-X, X-Y>} γ^{XY}_{MN} K_{M-X,i} e_{Y,i} e_{X,i+1}`.
pub fn dhm_cross_terms(b: &Backend, m: &ObjId, n: &ObjId, i: i64, i1: i64) -> Result<Rewrite> {
    let mut out = Vec::new();
    for (x, y, g) in gamma_terms(b, m, n)?.iter() {
        let mx = m.hat() - x.hat();
        let c = vpow(b, b.euler(&mx, &(x.hat() - y.hat()))).scale_rational(g);
        out.push((c, vec![Gen::Ki(mx, i), Gen::E(y.clone(), i), Gen::E(x.clone(), i1)]));
    }
    Ok(out)
}

/// `Z_M^{[i+1]} Z_N^{[i]} = Σ c(X,Y) γ^{XY}_{MN} Z_Y^{[i]} Z_X^{[i+1]}` with
/// `c = q^{-<Y,X>}` untwisted or `v^{-<M,N>-<Y,X>}` twisted.
pub fn z_cross_terms(b: &Backend, m: &ObjId, n: &ObjId, i: i64, twisted: bool) -> Result<Rewrite> {
    let mut out = Vec::new();
    for (x, y, g) in gamma_terms(b, m, n)?.iter() {
        let e = if twisted {
            -b.euler(m.hat(), n.hat()) - b.euler(y.hat(), x.hat())
        } else {
            -2 * b.euler(y.hat(), x.hat())
        };
        out.push((vpow(b, e).scale_rational(g), vec![Gen::Z(y.clone(), i), Gen::Z(x.clone(), i + 1)]));
    }
    Ok(out)
}

/// `c` in `K_{α,i} K_{β,j} = c K_{β,j} K_{α,i}` for the cyclic algebra.
pub fn dhm_kk(alg: Algebra, b: &Backend, a: &KClass, i: i64, be: &KClass, j: i64) -> SqrtScalar {
    let s = b.sym(a, be);
    if i == alg.index(j + 1) {
        vpow(b, s)
    } else if j == alg.index(i + 1) {
        vpow(b, -s)
    } else {
        one(b)
    }
}

/// `c` in `K_{α,i} e_{M,j} = c e_{M,j} K_{α,i}`.
pub fn dhm_ke(alg: Algebra, b: &Backend, a: &KClass, i: i64, m: &ObjId, j: i64) -> SqrtScalar {
    let s = b.sym(a, m.hat());
    if i == j {
        vpow(b, s)
    } else if j == alg.index(i + 1) {
        vpow(b, -s)
    } else {
        one(b)
    }
}

/// `c` in `Z_M^{[i]} Z_N^{[j]} = c Z_N^{[j]} Z_M^{[i]}` for `i - j > 1`.
/// The twisted algebras use the symmetric form.
pub fn z_far(b: &Backend, m: &ObjId, i: i64, n: &ObjId, j: i64, twisted: bool) -> SqrtScalar {
    let s = sign(i - j);
    if twisted {
        vpow(b, s * b.sym(m.hat(), n.hat()))
    } else {
        vpow(b, 2 * s * b.euler(n.hat(), m.hat()))
    }
}

/// The same with the Euler form in the exponent, as the relation is
/// sometimes printed.
pub fn z_far_printed(b: &Backend, m: &ObjId, i: i64, n: &ObjId, j: i64) -> SqrtScalar {
    vpow(b, sign(i - j) * b.euler(m.hat(), n.hat()))
}

/// `c` in `K_α^{[i]} Z_M^{[j]} = c Z_M^{[j]} K_α^{[i]}`.
pub fn ce_kz(b: &Backend, a: &KClass, i: i64, m: &ObjId, j: i64) -> SqrtScalar {
    let s = b.sym(a, m.hat());
    let low = i == -1 || i == 0;
    if j == i {
        if low {
            vpow(b, s)
        } else {
            one(b)
        }
    } else if j == i + 1 || j == i - 1 {
        if low {
            vpow(b, -s)
        } else {
            one(b)
        }
    } else if i == 0 && j.abs() > 1 {
        vpow(b, sign(j) * s)
    } else if i == -1 && (j + 1).abs() > 1 {
        vpow(b, sign(j + 1) * s)
    } else {
        one(b)
    }
}

/// `c` in `K_α^{[i]} K_β^{[j]} = c K_β^{[j]} K_α^{[i]}`, `i ≠ j`.
pub fn ce_kk(b: &Backend, a: &KClass, i: i64, be: &KClass, j: i64) -> SqrtScalar {
    if i == j + 1 {
        vpow(b, b.sym(a, be))
    } else if j == i + 1 {
        vpow(b, -b.sym(a, be))
    } else {
        one(b)
    }
}

fn swap(c: SqrtScalar, x: &Gen, y: &Gen) -> Option<Rewrite> {
    Some(vec![(c, vec![y.clone(), x.clone()])])
}

fn single(b: &Backend, g: Gen) -> Option<Rewrite> {
    Some(vec![(one(b), vec![g])])
}

/// The rewrite of the adjacent pair `x y`, or `None` when it is in normal order.
pub fn reduce(alg: Algebra, b: &Backend, x: &Gen, y: &Gen) -> Result<Option<Rewrite>> {
    match alg {
        Algebra::Hd => reduce_hd(b, x, y),
        Algebra::Hhd => reduce_hhd(b, x, y),
        Algebra::D => Ok(reduce_d(b, x, y)),
        Algebra::Dhm(_) => reduce_dhm(alg, b, x, y),
        Algebra::Dh => reduce_z(b, x, y, false),
        Algebra::Dhtw => reduce_z(b, x, y, true),
        Algebra::Dhce => reduce_ce(b, x, y),
    }
}

fn reduce_hd(b: &Backend, x: &Gen, y: &Gen) -> Result<Option<Rewrite>> {
    use Gen::*;
    let vp = |n: i64| vpow(b, n);
    Ok(match (x, y) {
        (KM(a), KM(c)) => single(b, KM(a + c)),
        (KP(a), KP(c)) => single(b, KP(a + c)),
        (MuM(m), MuM(n)) => Some(twisted_product(b, m, n, MuM)?),
        (MuP(m), MuP(n)) => Some(twisted_product(b, m, n, MuP)?),
        (KP(a), KM(c)) => swap(vp(b.sym(a, c)), x, y),
        (MuM(m), KM(a)) => swap(vp(-b.sym(a, m.hat())), x, y),
        (MuM(_), KP(_)) => swap(one(b), x, y),
        (MuP(m), KM(a)) => swap(vp(b.sym(a, m.hat())), x, y),
        (MuP(m), KP(a)) => swap(vp(-b.sym(a, m.hat())), x, y),
        (MuP(m), MuM(n)) => Some(hd_cross_terms(b, m, n)?),
        _ => None,
    })
}

fn reduce_hhd(b: &Backend, x: &Gen, y: &Gen) -> Result<Option<Rewrite>> {
    use Gen::*;
    let vp = |n: i64| vpow(b, n);
    Ok(match (x, y) {
        (KcM(a), KcM(c)) => single(b, KcM(a + c)),
        (KcP(a), KcP(c)) => single(b, KcP(a + c)),
        (NuM(m), NuM(n)) => Some(twisted_product(b, m, n, NuM)?),
        (NuP(m), NuP(n)) => Some(twisted_product(b, m, n, NuP)?),
        (KcP(a), KcM(c)) => swap(vp(-b.sym(a, c)), x, y),
        (NuP(_), KcM(_)) => swap(one(b), x, y),
        (NuP(m), KcP(a)) => swap(vp(-b.sym(a, m.hat())), x, y),
        (NuM(m), KcM(a)) => swap(vp(-b.sym(a, m.hat())), x, y),
        (NuM(m), KcP(a)) => swap(vp(b.sym(a, m.hat())), x, y),
        (NuM(n), NuP(m)) => Some(hhd_cross_terms(b, n, m)?),
        _ => None,
    })
}

fn reduce_d(b: &Backend, x: &Gen, y: &Gen) -> Option<Rewrite> {
    use Gen::*;
    let vp = |n: i64| vpow(b, n);
    match (x, y) {
        (KdM(a), KdM(c)) => single(b, KdM(a + c)),
        (KdP(a), KdP(c)) => single(b, KdP(a + c)),
        (KdP(_), KdM(_)) => swap(one(b), x, y),
        (OmP(m), KdP(a)) | (OmM(m), KdM(a)) => swap(vp(-b.sym(a, m.hat())), x, y),
        (OmM(m), KdP(a)) | (OmP(m), KdM(a)) => swap(vp(b.sym(a, m.hat())), x, y),
        _ => None,
    }
}

fn reduce_dhm(alg: Algebra, b: &Backend, x: &Gen, y: &Gen) -> Result<Option<Rewrite>> {
    use Gen::*;
    Ok(match (x, y) {
        (Ki(a, i), Ki(c, j)) if i == j => single(b, Ki(a + c, *i)),
        (Ki(a, i), Ki(c, j)) if i > j => swap(dhm_kk(alg, b, a, *i, c, *j), x, y),
        (E(m, j), Ki(a, i)) => swap(dhm_ke(alg, b, a, *i, m, *j).inverse()?, x, y),
        (E(m, i), E(n, j)) if i == j => Some(twisted_product(b, m, n, |l| E(l, *i))?),
        (E(m, i), E(n, j)) if *i == alg.index(j + 1) => Some(dhm_cross_terms(b, m, n, *j, *i)?),
        (E(_, i), E(_, j)) if *j == alg.index(i + 1) => None,
        (E(_, i), E(_, j)) if i > j => swap(one(b), x, y),
        _ => None,
    })
}

fn reduce_z(b: &Backend, x: &Gen, y: &Gen, twisted: bool) -> Result<Option<Rewrite>> {
    use Gen::*;
    Ok(match (x, y) {
        (Z(m, i), Z(n, j)) if i == j => Some(if twisted {
            twisted_product(b, m, n, |l| Z(l, *i))?
        } else {
            plain_product(b, m, n, |l| Z(l, *i))?
        }),
        (Z(m, i), Z(n, j)) if *i == j + 1 => Some(z_cross_terms(b, m, n, *j, twisted)?),
        (Z(m, i), Z(n, j)) if *i > j + 1 => swap(z_far(b, m, *i, n, *j, twisted), x, y),
        _ => None,
    })
}

fn reduce_ce(b: &Backend, x: &Gen, y: &Gen) -> Result<Option<Rewrite>> {
    use Gen::*;
    Ok(match (x, y) {
        (KZ(a, i), KZ(c, j)) if i == j => single(b, KZ(a + c, *i)),
        (KZ(a, i), KZ(c, j)) if i > j => swap(ce_kk(b, a, *i, c, *j), x, y),
        (Z(m, j), KZ(a, i)) => swap(ce_kz(b, a, *i, m, *j).inverse()?, x, y),
        (Z(..), Z(..)) => reduce_z(b, x, y, true)?,
        _ => None,
    })
}
