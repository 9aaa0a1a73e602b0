//! Cross relations computed two ways: from the closed-form rules and from
//! the double construction (comultiplication plus Green's pairing), and the
//! twist comparing the derived Hall algebra with its twisted version.

use crate::backend::ObjId;
use crate::error::Result;
use crate::hall::{comult_basis, pairing_basis, vpow, Basis};
use crate::quiver::KClass;

use super::rules::{hd_cross_terms, hhd_cross_terms};
use super::{Algebra, Elt, FreeElt, Gen, Word, Workbench};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    /// `μ⁺_M μ⁻_N` in the Heisenberg double.
    Hd,
    /// `ν⁻_N ν⁺_M` in the dual Heisenberg double.
    Hhd,
}

impl Side {
    pub fn algebra(self) -> Algebra {
        match self {
            Side::Hd => Algebra::Hd,
            Side::Hhd => Algebra::Hhd,
        }
    }
}

type Wrap = fn(&Basis) -> Word;

fn hd_plus(x: &Basis) -> Word {
    vec![Gen::MuP(x.0.clone()), Gen::KP(x.1.clone())]
}
fn hd_minus(x: &Basis) -> Word {
    vec![Gen::MuM(x.0.clone()), Gen::KM(x.1.clone())]
}
fn hhd_plus(x: &Basis) -> Word {
    vec![Gen::NuP(x.0.clone()), Gen::KcP(x.1.clone())]
}
fn hhd_minus(x: &Basis) -> Word {
    vec![Gen::NuM(x.0.clone()), Gen::KcM(x.1.clone())]
}
fn d_plus(x: &Basis) -> Word {
    vec![Gen::OmP(x.0.clone()), Gen::KdP(x.1.clone())]
}
fn d_minus(x: &Basis) -> Word {
    vec![Gen::OmM(x.0.clone()), Gen::KdM(x.1.clone())]
}

fn concat(x: &Word, y: &Word) -> Word {
    x.iter().chain(y).filter(|g| !g.is_unit()).cloned().collect()
}

/// `Σ φ(a_2, b_1) a_1 b_2` for basis elements `a ∈ A`, `b ∈ B`.
fn heisenberg_sum(wb: &Workbench, a: &Basis, wa: Wrap, b: &Basis, wbr: Wrap) -> Result<FreeElt> {
    let bk = wb.backend();
    let da = comult_basis(bk, a)?;
    let db = comult_basis(bk, b)?;
    let mut out = FreeElt::zero(wb.q());
    for (ka, ca) in da.terms() {
        for (kb, cb) in db.terms() {
            let phi = pairing_basis(bk, &ka[1], &kb[0])?;
            if phi.is_zero() {
                continue;
            }
            out.add_term(concat(&wa(&ka[0]), &wbr(&kb[1])), &(ca * cb) * &phi);
        }
    }
    Ok(out)
}

/// Closed form of the cross relation, normalized.
pub fn hd_cross(wb: &Workbench, side: Side, m: &ObjId, n: &ObjId) -> Result<Elt> {
    let b = wb.backend();
    let terms = match side {
        Side::Hd => hd_cross_terms(b, m, n)?,
        Side::Hhd => hhd_cross_terms(b, n, m)?,
    };
    let mut x = FreeElt::zero(wb.q());
    for (c, w) in terms {
        x.add_term(w, c);
    }
    wb.normal_form(side.algebra(), &x)
}

/// The same product computed from the Heisenberg double construction; only
/// torus commutations are used to normalize.
pub fn hd_cross_oracle(wb: &Workbench, side: Side, m: &ObjId, n: &ObjId) -> Result<Elt> {
    let z = wb.backend().zero_class();
    let bm = (m.clone(), z.clone());
    let bn = (n.clone(), z);
    let sum = match side {
        // b a with a = μ⁻_N ∈ H⁻, b = μ⁺_M ∈ H⁺.
        Side::Hd => heisenberg_sum(wb, &bn, hd_minus, &bm, hd_plus)?,
        // b a with a = ν⁺_M ∈ H⁺, b = ν⁻_N ∈ H⁻.
        Side::Hhd => heisenberg_sum(wb, &bm, hhd_plus, &bn, hhd_minus)?,
    };
    wb.normal_form(side.algebra(), &sum)
}

/// Both sides of the Drinfeld double relation
/// `Σ φ(a_1, b_2) b_1 a_2 = Σ φ(a_2, b_1) a_1 b_2` for
/// `a = ω⁻_N 𝒦⁻_α` and `b = ω⁺_M 𝒦⁺_β`, as unnormalized words.
pub fn drinfeld_abstract(
    wb: &Workbench,
    m: &ObjId,
    beta: &KClass,
    n: &ObjId,
    alpha: &KClass,
) -> Result<(FreeElt, FreeElt)> {
    let bk = wb.backend();
    let a = (n.clone(), alpha.clone());
    let b = (m.clone(), beta.clone());
    let da = comult_basis(bk, &a)?;
    let db = comult_basis(bk, &b)?;
    let mut lhs = FreeElt::zero(wb.q());
    for (ka, ca) in da.terms() {
        for (kb, cb) in db.terms() {
            let phi = pairing_basis(bk, &ka[0], &kb[1])?;
            if !phi.is_zero() {
                lhs.add_term(concat(&d_plus(&kb[0]), &d_minus(&ka[1])), &(ca * cb) * &phi);
            }
        }
    }
    let rhs = heisenberg_sum(wb, &a, d_minus, &b, d_plus)?;
    Ok((lhs, rhs))
}

/// Signed degree `(-1)^i M^` of a derived Hall letter; torus letters have none.
fn z_degree(g: &Gen, rank: usize) -> KClass {
    g.degree(Algebra::Dh).unwrap_or_else(|| KClass::zero(rank))
}

/// Exponent relating a word read in the twisted product to the same word
/// read in the untwisted one: `Σ_{p<r} <d_p, d_r>`.
pub fn twist_exponent(wb: &Workbench, w: &[Gen]) -> i64 {
    let b = wb.backend();
    let degs: Vec<KClass> = w.iter().map(|g| z_degree(g, b.rank())).collect();
    let mut e = 0;
    for p in 0..degs.len() {
        for r in p + 1..degs.len() {
            e += b.euler(&degs[p], &degs[r]);
        }
    }
    e
}

/// For a word `w` in the `Z` letters: the twisted normal form carried over
/// to the untwisted algebra, and `v^{χ(w)}` times the untwisted normal form.
/// The two agree exactly when the twisted rules are the twist of the
/// untwisted ones.
pub fn twist_sides(wb: &Workbench, w: &Word) -> Result<(Elt, Elt)> {
    let q = wb.q();
    let tw = wb.word(Algebra::Dhtw, w.clone())?;
    let mut lhs = Elt::zero(q, vec![Algebra::Dh]);
    for (k, c) in tw.terms() {
        lhs.add_term(k.clone(), c * &vpow(wb.backend(), twist_exponent(wb, &k[0])));
    }
    let rhs = wb.word(Algebra::Dh, w.clone())?.scale(&vpow(wb.backend(), twist_exponent(wb, w)));
    Ok((lhs, rhs))
}
