//! The extended Ringel–Hall algebra over a [`Backend`]: twisted product,
//! Green's coproduct, Green's pairing and the γ structure constants.
//!
//! Basis elements are pairs `([M], α)` standing for `[M]K_α`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::backend::{Backend, ObjId};
use crate::error::Result;
use crate::quiver::KClass;
use crate::scalar::{Rational, SqrtScalar};

pub type Basis = (ObjId, KClass);

pub fn big_rational(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

pub fn aut(b: &Backend, m: &ObjId) -> Result<Rational> {
    Ok(big_rational(&b.aut_count(m)?))
}

/// `a_M a_N / a_L`.
pub fn aut_ratio(b: &Backend, m: &ObjId, n: &ObjId, l: &ObjId) -> Result<Rational> {
    Ok(aut(b, m)? * aut(b, n)? / aut(b, l)?)
}

pub fn vpow(b: &Backend, n: i64) -> SqrtScalar {
    SqrtScalar::vpow(n, b.q())
}

/// A finite linear combination of tensors of `arity` basis elements
/// (arity 1 is an ordinary element of the Hall algebra).
#[derive(Clone, PartialEq, Eq)]
pub struct HallElt {
    q: u64,
    arity: usize,
    terms: BTreeMap<Vec<Basis>, SqrtScalar>,
}

pub type HallTensorElt = HallElt;

impl HallElt {
    pub fn zero(q: u64, arity: usize) -> Self {
        HallElt { q, arity, terms: BTreeMap::new() }
    }

    pub fn unit(b: &Backend) -> Self {
        Self::basis(b, b.zero(), b.zero_class())
    }

    pub fn basis(b: &Backend, m: ObjId, alpha: KClass) -> Self {
        Self::tensor_basis(b.q(), vec![(m, alpha)], SqrtScalar::one(b.q()))
    }

    pub fn tensor_basis(q: u64, key: Vec<Basis>, c: SqrtScalar) -> Self {
        let mut x = Self::zero(q, key.len());
        x.add_term(key, c);
        x
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Basis>, SqrtScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[Basis]) -> SqrtScalar {
        self.terms.get(key).cloned().unwrap_or_else(|| SqrtScalar::zero(self.q))
    }

    pub fn add_term(&mut self, key: Vec<Basis>, c: SqrtScalar) {
        debug_assert_eq!(key.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &HallElt, c: &SqrtScalar) {
        for (k, x) in &other.terms {
            self.add_term(k.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &SqrtScalar) -> HallElt {
        let mut out = Self::zero(self.q, self.arity);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &HallElt) -> HallElt {
        let mut out = self.clone();
        out.add_scaled(other, &SqrtScalar::from_int(-1, self.q));
        out
    }
}

impl fmt::Display for HallElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (key, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if !c.is_one() {
                write!(f, "({c}) * ")?;
            }
            for (i, (m, a)) in key.iter().enumerate() {
                if i > 0 {
                    write!(f, " (x) ")?;
                }
                write!(f, "[{m}]K{{{a}}}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HallElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[M]K_α · [N]K_β = v^{(α,N^) + <M^,N^>} Σ_L g^L_{MN} [L]K_{α+β}`.
pub fn hmult_basis(b: &Backend, x: &Basis, y: &Basis) -> Result<HallElt> {
    let (m, alpha) = x;
    let (n, beta) = y;
    let mut out = HallElt::zero(b.q(), 1);
    let c = vpow(b, b.sym(alpha, n.hat()) + b.euler(m.hat(), n.hat()));
    let k = alpha + beta;
    for (l, g) in b.middle_terms(m, n)?.iter() {
        out.add_term(vec![(l.clone(), k.clone())], c.scale_rational(&Rational::from_integer((*g).into())));
    }
    Ok(out)
}

/// Componentwise product of tensors of equal arity.
pub fn hmult(b: &Backend, x: &HallElt, y: &HallElt) -> Result<HallElt> {
    assert_eq!(x.arity, y.arity, "arity mismatch");
    let mut out = HallElt::zero(b.q(), x.arity);
    for (kx, cx) in &x.terms {
        for (ky, cy) in &y.terms {
            let mut partial = HallElt::tensor_basis(b.q(), Vec::new(), cx * cy);
            for (bx, by) in kx.iter().zip(ky) {
                let p = hmult_basis(b, bx, by)?;
                let mut next = HallElt::zero(b.q(), partial.arity + 1);
                for (pk, pc) in &partial.terms {
                    for (qk, qc) in &p.terms {
                        let mut key = pk.clone();
                        key.push(qk[0].clone());
                        next.add_term(key, pc * qc);
                    }
                }
                partial = next;
            }
            out.add_scaled(&partial, &SqrtScalar::one(b.q()));
        }
    }
    Ok(out)
}

/// `Δ([L]K_α) = Σ v^{<M,N>} (a_M a_N / a_L) g^L_{MN} [M]K_{N^+α} ⊗ [N]K_α`.
pub fn comult_basis(b: &Backend, x: &Basis) -> Result<HallElt> {
    let (l, alpha) = x;
    let mut out = HallElt::zero(b.q(), 2);
    for (m, n, g) in b.splittings(l)? {
        let r = aut_ratio(b, &m, &n, l)? * Rational::from_integer(g.into());
        let c = vpow(b, b.euler(m.hat(), n.hat())).scale_rational(&r);
        let left = (m, n.hat() + alpha);
        out.add_term(vec![left, (n, alpha.clone())], c);
    }
    Ok(out)
}

/// Applies `Δ` to tensor factor `pos`, raising the arity by one.
pub fn comult_at(b: &Backend, x: &HallElt, pos: usize) -> Result<HallElt> {
    let mut out = HallElt::zero(b.q(), x.arity + 1);
    for (k, c) in &x.terms {
        for (dk, dc) in &comult_basis(b, &k[pos])?.terms {
            let mut key = k[..pos].to_vec();
            key.extend(dk.iter().cloned());
            key.extend(k[pos + 1..].iter().cloned());
            out.add_term(key, c * dc);
        }
    }
    Ok(out)
}

pub fn comult(b: &Backend, x: &HallElt) -> Result<HallElt> {
    assert_eq!(x.arity, 1);
    comult_at(b, x, 0)
}

/// Green's pairing `φ0([M]K_α, [N]K_β) = δ_{MN} v^{(α,β)} / a_M` on basis elements.
pub fn pairing_basis(b: &Backend, x: &Basis, y: &Basis) -> Result<SqrtScalar> {
    if x.0 != y.0 {
        return Ok(SqrtScalar::zero(b.q()));
    }
    Ok(vpow(b, b.sym(&x.1, &y.1)).scale_rational(&aut(b, &x.0)?.recip()))
}

/// Bilinear pairing of equal-arity tensors, factor by factor.
pub fn green_pairing(b: &Backend, x: &HallElt, y: &HallElt) -> Result<SqrtScalar> {
    assert_eq!(x.arity, y.arity);
    let mut total = SqrtScalar::zero(b.q());
    for (kx, cx) in &x.terms {
        for (ky, cy) in &y.terms {
            let mut c = cx * cy;
            for (bx, by) in kx.iter().zip(ky) {
                if c.is_zero() {
                    break;
                }
                c = &c * &pairing_basis(b, bx, by)?;
            }
            total = &total + &c;
        }
    }
    Ok(total)
}

/// All nonzero `γ^{XY}_{MN} = (a_X a_Y / a_M a_N) Σ_L a_L g^M_{LX} g^N_{YL}` as `(X, Y, γ)`.
pub fn gamma_terms(b: &Backend, m: &ObjId, n: &ObjId) -> Result<Arc<Vec<(ObjId, ObjId, Rational)>>> {
    let key = (m.clone(), n.clone());
    if let Some(t) = b.store.read().unwrap().gamma.get(&key) {
        return Ok(t.clone());
    }
    let mut acc: BTreeMap<(ObjId, ObjId), Rational> = BTreeMap::new();
    let split_n = b.splittings(n)?;
    for (l, x, g1) in b.splittings(m)? {
        for (y, l2, g2) in &split_n {
            if *l2 != l {
                continue;
            }
            let term = aut(b, &l)? * Rational::from_integer((g1 * g2).into());
            *acc.entry((x.clone(), y.clone())).or_insert_with(Rational::zero) += term;
        }
    }
    let amn = aut(b, m)? * aut(b, n)?;
    let mut out = Vec::with_capacity(acc.len());
    for ((x, y), s) in acc {
        let g = s * aut(b, &x)? * aut(b, &y)? / &amn;
        out.push((x, y, g));
    }
    let out = Arc::new(out);
    let mut st = b.store.write().unwrap();
    Ok(st.gamma.entry(key).or_insert(out).clone())
}

pub fn gamma(b: &Backend, m: &ObjId, n: &ObjId, x: &ObjId, y: &ObjId) -> Result<Rational> {
    Ok(gamma_terms(b, m, n)?
        .iter()
        .find(|(a, c, _)| a == x && c == y)
        .map(|t| t.2.clone())
        .unwrap_or_else(Rational::zero))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenCheck {
    pub lhs: SqrtScalar,
    pub rhs: SqrtScalar,
    pub pass: bool,
}

/// Both sides of Green's formula for `(M, N, M', N')`, with
/// `|Ext^1(A,B')| / |Hom(A,B')| = q^{-<A^,B'^>}`.
pub fn green_formula_check(b: &Backend, m: &ObjId, n: &ObjId, m2: &ObjId, n2: &ObjId) -> Result<GreenCheck> {
    let q = b.q();
    let prefix = aut(b, m)? * aut(b, n)? * aut(b, m2)? * aut(b, n2)?;
    let mut lhs = Rational::zero();
    if m.hat() + n.hat() == m2.hat() + n2.hat() {
        for l in b.iso_classes(&(m.hat() + n.hat()))? {
            let g = b.hall_number(&l, m, n)? * b.hall_number(&l, m2, n2)?;
            if g > 0 {
                lhs += Rational::from_integer(g.into()) / aut(b, &l)?;
            }
        }
    }
    lhs *= prefix;
    let mut rhs = Rational::zero();
    let qq = Rational::from_integer(q.into());
    for (a, a2, g1) in b.splittings(m)? {
        for (bb, b2, g2) in b.splittings(n)? {
            let g3 = b.hall_number(m2, &a, &bb)?;
            if g3 == 0 {
                continue;
            }
            let g4 = b.hall_number(n2, &a2, &b2)?;
            if g4 == 0 {
                continue;
            }
            let e = -b.euler(a.hat(), b2.hat());
            let factor = if e >= 0 { num_traits::pow(qq.clone(), e as usize) } else { num_traits::pow(qq.recip(), (-e) as usize) };
            let auts = aut(b, &a)? * aut(b, &a2)? * aut(b, &bb)? * aut(b, &b2)?;
            rhs += factor * auts * Rational::from_integer((g1 * g2 * g3 * g4).into());
        }
    }
    Ok(GreenCheck {
        pass: lhs == rhs,
        lhs: SqrtScalar::from_rational(lhs, q),
        rhs: SqrtScalar::from_rational(rhs, q),
    })
}

/// `(Δ ⊗ 1)Δ(x) - (1 ⊗ Δ)Δ(x)`.
pub fn coassociativity_defect(b: &Backend, x: &Basis) -> Result<HallElt> {
    let d = comult_basis(b, x)?;
    Ok(comult_at(b, &d, 0)?.sub(&comult_at(b, &d, 1)?))
}

/// `Δ(xy)` and `Δ(x)Δ(y)` for basis elements, the latter in the componentwise
/// product of the tensor square.
pub fn multiplicativity_sides(b: &Backend, x: &Basis, y: &Basis) -> Result<(HallElt, HallElt)> {
    let lhs = comult(b, &hmult_basis(b, x, y)?)?;
    let rhs = hmult(b, &comult_basis(b, x)?, &comult_basis(b, y)?)?;
    Ok((lhs, rhs))
}

/// `φ0(xy, z)` against `φ0(x ⊗ y, Δz)`, and `φ0(x, yz)` against `φ0(Δx, y ⊗ z)`.
pub fn pairing_sides(b: &Backend, x: &Basis, y: &Basis, z: &Basis) -> Result<[(SqrtScalar, SqrtScalar); 2]> {
    let q = b.q();
    let ex = HallElt::tensor_basis(q, vec![x.clone()], SqrtScalar::one(q));
    let ey = HallElt::tensor_basis(q, vec![y.clone()], SqrtScalar::one(q));
    let ez = HallElt::tensor_basis(q, vec![z.clone()], SqrtScalar::one(q));
    let l1 = green_pairing(b, &hmult(b, &ex, &ey)?, &ez)?;
    let xy = HallElt::tensor_basis(q, vec![x.clone(), y.clone()], SqrtScalar::one(q));
    let r1 = green_pairing(b, &xy, &comult(b, &ez)?)?;
    let l2 = green_pairing(b, &ex, &hmult(b, &ey, &ez)?)?;
    let yz = HallElt::tensor_basis(q, vec![y.clone(), z.clone()], SqrtScalar::one(q));
    let r2 = green_pairing(b, &comult(b, &ex)?, &yz)?;
    Ok([(l1, r1), (l2, r2)])
}

/// Basis elements `[M]K_α` for the given objects and classes.
pub fn basis_window(objects: &[ObjId], classes: &[KClass]) -> Vec<Basis> {
    let mut out = Vec::new();
    for m in objects {
        for a in classes {
            out.push((m.clone(), a.clone()));
        }
    }
    out
}

/// `{0} ∪ {±S_v^}` for every vertex.
pub fn default_class_window(b: &Backend) -> Vec<KClass> {
    let n = b.rank();
    let mut out = vec![KClass::zero(n)];
    for v in 0..n {
        out.push(KClass::unit(n, v));
        out.push(-&KClass::unit(n, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn a2() -> Backend {
        Backend::preset("a2", 2).unwrap()
    }

    fn k(xs: &[i64]) -> KClass {
        KClass::from_slice(xs)
    }

    fn s(b: &Backend, n: i64) -> SqrtScalar {
        SqrtScalar::from_int(n, b.q())
    }

    #[test]
    fn product_of_simples() {
        let b = a2();
        let z = b.zero_class();
        let cls = b.iso_classes(&k(&[1, 1])).unwrap();
        let p = hmult_basis(&b, &(b.simple(0), z.clone()), &(b.simple(1), z.clone())).unwrap();
        let mut want = HallElt::zero(2, 1);
        for c in &cls {
            want.add_term(vec![(c.clone(), z.clone())], vpow(&b, -1));
        }
        assert_eq!(p, want);
    }

    #[test]
    fn torus_and_unit() {
        let b = a2();
        let o = b.zero();
        let p = hmult_basis(&b, &(o.clone(), k(&[1, 0])), &(o.clone(), k(&[0, -1]))).unwrap();
        assert_eq!(p, HallElt::basis(&b, o.clone(), k(&[1, -1])));
        let x = HallElt::basis(&b, b.simple(1), k(&[1, 0]));
        assert_eq!(hmult(&b, &HallElt::unit(&b), &x).unwrap(), x);
    }

    #[test]
    fn coproduct_of_projective() {
        let b = a2();
        let z = b.zero_class();
        let p = b.iso_classes(&k(&[1, 1])).unwrap()[1].clone();
        let d = comult_basis(&b, &(p.clone(), z.clone())).unwrap();
        let mut want = HallElt::zero(2, 2);
        want.add_term(vec![(p.clone(), z.clone()), (b.zero(), z.clone())], s(&b, 1));
        want.add_term(vec![(b.zero(), p.hat().clone()), (p.clone(), z.clone())], s(&b, 1));
        want.add_term(vec![(b.simple(0), k(&[0, 1])), (b.simple(1), z.clone())], vpow(&b, -1));
        assert_eq!(d, want);
        let dk = comult_basis(&b, &(b.zero(), k(&[1, 0]))).unwrap();
        assert_eq!(dk.terms().len(), 1);
    }

    #[test]
    fn pairing_values() {
        let b = a2();
        let z = b.zero_class();
        let p = b.iso_classes(&k(&[1, 1])).unwrap()[1].clone();
        assert!(pairing_basis(&b, &(p.clone(), z.clone()), &(p, z.clone())).unwrap().is_one());
        assert!(pairing_basis(&b, &(b.simple(0), z.clone()), &(b.simple(1), z.clone())).unwrap().is_zero());
        let v = pairing_basis(&b, &(b.zero(), k(&[1, 0])), &(b.zero(), k(&[0, 1]))).unwrap();
        assert_eq!(v, vpow(&b, -1));
    }

    #[test]
    fn gamma_values() {
        let b = a2();
        let (o, s1) = (b.zero(), b.simple(0));
        assert!(gamma(&b, &s1, &o, &s1, &o).unwrap().is_one());
        assert!(gamma(&b, &s1, &o, &o, &o).unwrap().is_zero());
        assert!(gamma(&b, &s1, &s1, &s1, &s1).unwrap().is_one());
        assert!(gamma(&b, &s1, &s1, &o, &o).unwrap().is_one());
        assert!(gamma(&b, &s1, &s1, &s1, &o).unwrap().is_zero());
    }

    #[test]
    fn green_examples() {
        let b = a2();
        let (s1, s2) = (b.simple(0), b.simple(1));
        let r = green_formula_check(&b, &s1, &s2, &s1, &s2).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, s(&b, 2));
        assert!(green_formula_check(&b, &s1, &s2, &s2, &s1).unwrap().pass);
        assert!(green_formula_check(&b, &s1, &b.zero(), &s1, &b.zero()).unwrap().pass);
    }

    #[test]
    fn ext_over_hom_is_a_power_of_q() {
        let b = a2();
        for m in b.objects_up_to(2).unwrap() {
            for n in b.objects_up_to(2).unwrap() {
                let h = b.hom_dim(&m, &n).unwrap() as i64;
                let e = b.ext_dim(&m, &n).unwrap();
                assert!(e >= 0);
                assert_eq!(e - h, -b.euler(m.hat(), n.hat()));
            }
        }
    }

    #[test]
    fn bialgebra_on_small_window() {
        let b = a2();
        let win = basis_window(&b.objects_up_to(1).unwrap(), &[b.zero_class(), k(&[1, 0])]);
        for x in &win {
            assert!(coassociativity_defect(&b, x).unwrap().is_zero());
            for y in &win {
                let (l, r) = multiplicativity_sides(&b, x, y).unwrap();
                assert_eq!(l, r, "{x:?} {y:?}");
                for z in &win {
                    for (l, r) in pairing_sides(&b, x, y, z).unwrap() {
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }
}
