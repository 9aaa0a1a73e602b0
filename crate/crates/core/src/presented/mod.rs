//! Presented algebras as normal-ordering rewrite systems.
//!
//! Every algebra shares one engine ([`Engine`]); they differ only in the rule
//! table consulted for an adjacent pair of letters ([`rules::reduce`]).

mod cross;
mod engine;
mod relations;
pub mod rules;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::backend::ObjId;
use crate::error::{Error, Result};
use crate::quiver::KClass;
use crate::scalar::SqrtScalar;

pub use cross::{drinfeld_abstract, hd_cross, hd_cross_oracle, twist_exponent, twist_sides, Side};
pub use engine::{Engine, Workbench, DEFAULT_STEP_LIMIT};
pub use relations::{relation_catalog, relation_instance, RelParams};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Algebra {
    /// Heisenberg double `HD`.
    Hd,
    /// Dual Heisenberg double.
    Hhd,
    /// Bridgeland Hall algebra of m-cyclic complexes (m = 0 or m > 2).
    Dhm(u32),
    /// Derived Hall algebra.
    Dh,
    /// Twisted derived Hall algebra.
    Dhtw,
    /// Completely extended twisted derived Hall algebra.
    Dhce,
    /// Drinfeld double; only torus letters are reordered.
    D,
}

impl Algebra {
    pub fn validate(self) -> Result<Self> {
        match self {
            Algebra::Dhm(m) if m == 1 || m == 2 => {
                Err(Error::Param(format!("dhm:{m} is not supported; m must be 0 or greater than 2")))
            }
            a => Ok(a),
        }
    }

    /// The cyclic modulus for `dhm:<m>` with m > 0.
    pub fn modulus(self) -> Option<i64> {
        match self {
            Algebra::Dhm(m) if m > 0 => Some(m as i64),
            _ => None,
        }
    }

    /// Reduces an index into the algebra's index set.
    pub fn index(self, i: i64) -> i64 {
        match self.modulus() {
            Some(m) => i.rem_euclid(m),
            None => i,
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Hd => write!(f, "hd"),
            Algebra::Hhd => write!(f, "hhd"),
            Algebra::Dhm(m) => write!(f, "dhm:{m}"),
            Algebra::Dh => write!(f, "dh"),
            Algebra::Dhtw => write!(f, "dhtw"),
            Algebra::Dhce => write!(f, "dhce"),
            Algebra::D => write!(f, "d"),
        }
    }
}

impl FromStr for Algebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let a = match s {
            "hd" => Algebra::Hd,
            "hhd" => Algebra::Hhd,
            "dh" => Algebra::Dh,
            "dhtw" => Algebra::Dhtw,
            "dhce" => Algebra::Dhce,
            "d" => Algebra::D,
            _ => match s.strip_prefix("dhm:").map(str::parse) {
                Some(Ok(m)) => Algebra::Dhm(m),
                _ => return Err(Error::Param(format!("unknown algebra tag {s}"))),
            },
        };
        a.validate()
    }
}

/// A generator letter. Object-indexed letters carry an isoclass, torus
/// letters a class in the Grothendieck group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Gen {
    MuP(ObjId),
    MuM(ObjId),
    KP(KClass),
    KM(KClass),
    NuP(ObjId),
    NuM(ObjId),
    KcP(KClass),
    KcM(KClass),
    E(ObjId, i64),
    Ki(KClass, i64),
    Z(ObjId, i64),
    KZ(KClass, i64),
    OmP(ObjId),
    OmM(ObjId),
    KdP(KClass),
    KdM(KClass),
}

impl Gen {
    pub fn algebra_matches(&self, alg: Algebra) -> bool {
        use Gen::*;
        match alg {
            Algebra::Hd => matches!(self, MuP(_) | MuM(_) | KP(_) | KM(_)),
            Algebra::Hhd => matches!(self, NuP(_) | NuM(_) | KcP(_) | KcM(_)),
            Algebra::Dhm(_) => match self {
                E(_, i) | Ki(_, i) => alg.index(*i) == *i,
                _ => false,
            },
            Algebra::Dh | Algebra::Dhtw => matches!(self, Z(..)),
            Algebra::Dhce => matches!(self, Z(..) | KZ(..)),
            Algebra::D => matches!(self, OmP(_) | OmM(_) | KdP(_) | KdM(_)),
        }
    }

    /// Letters indexed by the zero object or the zero class are the unit.
    pub fn is_unit(&self) -> bool {
        match self.object() {
            Some(m) => m.is_zero(),
            None => self.class().is_some_and(KClass::is_zero),
        }
    }

    pub fn object(&self) -> Option<&ObjId> {
        use Gen::*;
        match self {
            MuP(m) | MuM(m) | NuP(m) | NuM(m) | OmP(m) | OmM(m) | E(m, _) | Z(m, _) => Some(m),
            _ => None,
        }
    }

    pub fn class(&self) -> Option<&KClass> {
        use Gen::*;
        match self {
            KP(a) | KM(a) | KcP(a) | KcM(a) | KdP(a) | KdM(a) | Ki(a, _) | KZ(a, _) => Some(a),
            _ => None,
        }
    }

    pub fn index(&self) -> Option<i64> {
        match self {
            Gen::E(_, i) | Gen::Ki(_, i) | Gen::Z(_, i) | Gen::KZ(_, i) => Some(*i),
            _ => None,
        }
    }

    /// Signed degree in `K(A)`: `±M^` on plus/minus letters, `(-1)^i M^` on
    /// indexed letters, zero on torus letters. `None` where no consistent
    /// sign exists (odd cyclic modulus).
    pub fn degree(&self, alg: Algebra) -> Option<KClass> {
        use Gen::*;
        let sign = |i: i64| if i.rem_euclid(2) == 0 { 1 } else { -1 };
        match self {
            MuP(m) | NuP(m) | OmP(m) => Some(m.hat().clone()),
            MuM(m) | NuM(m) | OmM(m) => Some(-m.hat()),
            E(m, i) => match alg.modulus() {
                Some(md) if md % 2 == 1 => None,
                _ => Some(m.hat().scale(sign(*i))),
            },
            Z(m, i) => Some(m.hat().scale(sign(*i))),
            KP(a) | KM(a) | KcP(a) | KcM(a) | KdP(a) | KdM(a) | Ki(a, _) | KZ(a, _) => Some(KClass::zero(a.len())),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Gen::*;
        match self {
            MuP(m) => write!(f, "mu+[{m}]"),
            MuM(m) => write!(f, "mu-[{m}]"),
            KP(a) => write!(f, "K+[{a}]"),
            KM(a) => write!(f, "K-[{a}]"),
            NuP(m) => write!(f, "nu+[{m}]"),
            NuM(m) => write!(f, "nu-[{m}]"),
            KcP(a) => write!(f, "Kc+[{a}]"),
            KcM(a) => write!(f, "Kc-[{a}]"),
            E(m, i) => write!(f, "e[{m};{i}]"),
            Ki(a, i) => write!(f, "k[{a};{i}]"),
            Z(m, i) => write!(f, "Z[{m};{i}]"),
            KZ(a, i) => write!(f, "KZ[{a};{i}]"),
            OmP(m) => write!(f, "om+[{m}]"),
            OmM(m) => write!(f, "om-[{m}]"),
            KdP(a) => write!(f, "KD+[{a}]"),
            KdM(a) => write!(f, "KD-[{a}]"),
        }
    }
}

pub type Word = Vec<Gen>;

pub fn render_word(w: &[Gen]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter().map(Gen::to_string).collect::<Vec<_>>().join(" ")
}

/// Sign and magnitude of a coefficient as it prefixes a word; the
/// magnitude is empty for 1.
fn render_coeff(c: &SqrtScalar) -> (bool, String) {
    use crate::scalar::fmt_rational;
    use num_traits::{One, Signed, Zero};
    let (a, b) = (c.rational_part(), c.v_part());
    if b.is_zero() {
        let mag = a.abs();
        return (a.is_negative(), if mag.is_one() { String::new() } else { fmt_rational(&mag) });
    }
    if a.is_zero() {
        let mag = b.abs();
        let s = if mag.is_one() { "v".to_string() } else { format!("{}*v", fmt_rational(&mag)) };
        return (b.is_negative(), s);
    }
    (false, format!("({c})"))
}

/// Renders `Σ c_k w_k` as e.g. `mu-[S1] mu+[S1] + v K-[(1,0)]`.
pub fn render_sum<'a, I>(terms: I, render: impl Fn(&'a Vec<Word>) -> String) -> String
where
    I: IntoIterator<Item = (&'a Vec<Word>, &'a SqrtScalar)>,
{
    let mut out = String::new();
    for (k, c) in terms {
        let (neg, mag) = render_coeff(c);
        let body = render(k);
        let term = match (mag.is_empty(), body.as_str()) {
            (true, b) => b.to_string(),
            (false, "1") => mag,
            (false, b) => format!("{mag} {b}"),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A linear combination of words in the free algebra on the generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeElt {
    q: u64,
    terms: BTreeMap<Word, SqrtScalar>,
}

impl FreeElt {
    pub fn zero(q: u64) -> Self {
        FreeElt { q, terms: BTreeMap::new() }
    }

    pub fn scalar(c: SqrtScalar) -> Self {
        let mut x = Self::zero(c.q());
        x.add_term(Vec::new(), c);
        x
    }

    pub fn word(q: u64, w: Word) -> Self {
        Self::term(w, SqrtScalar::one(q))
    }

    pub fn term(w: Word, c: SqrtScalar) -> Self {
        let mut x = Self::zero(c.q());
        x.add_term(w, c);
        x
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn terms(&self) -> &BTreeMap<Word, SqrtScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: SqrtScalar) {
        add_into(&mut self.terms, w, c);
    }

    pub fn add(&mut self, other: &FreeElt, c: &SqrtScalar) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &SqrtScalar) -> FreeElt {
        let mut out = Self::zero(self.q);
        out.add(self, c);
        out
    }

    pub fn neg(&self) -> FreeElt {
        self.scale(&SqrtScalar::from_int(-1, self.q))
    }

    /// Product in the free algebra: concatenation.
    pub fn mul(&self, other: &FreeElt) -> FreeElt {
        let mut out = Self::zero(self.q);
        for (u, a) in &self.terms {
            for (w, b) in &other.terms {
                let mut uw = u.clone();
                uw.extend(w.iter().cloned());
                out.add_term(uw, a * b);
            }
        }
        out
    }

    /// Homogeneous degree, if every word has the same signed degree.
    pub fn degree(&self, alg: Algebra, rank: usize) -> Option<Option<KClass>> {
        let mut deg: Option<KClass> = None;
        for w in self.terms.keys() {
            let mut d = KClass::zero(rank);
            for g in w {
                d = &d + &g.degree(alg)?;
            }
            match &deg {
                None => deg = Some(d),
                Some(e) if *e == d => {}
                Some(_) => return Some(None),
            }
        }
        Some(deg)
    }
}

impl fmt::Display for FreeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keyed: Vec<(Vec<Word>, SqrtScalar)> =
            self.terms.iter().map(|(w, c)| (vec![w.clone()], c.clone())).collect();
        let s = render_sum(keyed.iter().map(|(k, c)| (k, c)), |k| render_word(&k[0]));
        f.write_str(&s)
    }
}

pub(crate) fn add_into<K: Ord>(terms: &mut BTreeMap<K, SqrtScalar>, k: K, c: SqrtScalar) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&k) {
        Some(x) => {
            *x = &*x + &c;
            if x.is_zero() {
                terms.remove(&k);
            }
        }
        None => {
            terms.insert(k, c);
        }
    }
}

/// A normalized element of a presented algebra (one factor) or of a tensor
/// product of presented algebras (several factors).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Elt {
    q: u64,
    algs: Vec<Algebra>,
    terms: BTreeMap<Vec<Word>, SqrtScalar>,
    noncanonical: bool,
}

pub type NormalElt = Elt;
pub type TensorSquareElt = Elt;

impl Elt {
    pub fn zero(q: u64, algs: Vec<Algebra>) -> Self {
        Elt { q, algs, terms: BTreeMap::new(), noncanonical: false }
    }

    pub fn unit(q: u64, algs: Vec<Algebra>) -> Self {
        let mut x = Self::zero(q, algs);
        let key = vec![Word::new(); x.algs.len()];
        x.add_term(key, SqrtScalar::one(q));
        x
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn algebras(&self) -> &[Algebra] {
        &self.algs
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Word>, SqrtScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Set when some input word fell outside the range where the cyclic
    /// rewrite system is known to be canonical.
    pub fn is_noncanonical(&self) -> bool {
        self.noncanonical
    }

    pub(crate) fn mark_noncanonical(&mut self, flag: bool) {
        self.noncanonical |= flag;
    }

    pub fn add_term(&mut self, key: Vec<Word>, c: SqrtScalar) {
        debug_assert_eq!(key.len(), self.algs.len());
        add_into(&mut self.terms, key, c);
    }

    pub fn add(&mut self, other: &Elt, c: &SqrtScalar) {
        assert_eq!(self.algs, other.algs, "algebra mismatch");
        for (k, x) in &other.terms {
            self.add_term(k.clone(), x * c);
        }
        self.noncanonical |= other.noncanonical;
    }

    pub fn scale(&self, c: &SqrtScalar) -> Elt {
        let mut out = Self::zero(self.q, self.algs.clone());
        out.add(self, c);
        out
    }

    pub fn sub(&self, other: &Elt) -> Elt {
        let mut out = self.clone();
        out.add(other, &SqrtScalar::from_int(-1, self.q));
        out
    }

    /// Tensor product of two elements (factors concatenated).
    pub fn tensor(&self, other: &Elt) -> Elt {
        let mut algs = self.algs.clone();
        algs.extend(other.algs.iter().copied());
        let mut out = Elt::zero(self.q, algs);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut k = a.clone();
                k.extend(b.iter().cloned());
                out.add_term(k, x * y);
            }
        }
        out.noncanonical = self.noncanonical || other.noncanonical;
        out
    }

    /// The single-factor element as a free element (for feeding it to a map).
    pub fn to_free(&self) -> FreeElt {
        assert_eq!(self.algs.len(), 1);
        let mut out = FreeElt::zero(self.q);
        for (k, c) in &self.terms {
            out.add_term(k[0].clone(), c.clone());
        }
        out
    }

    pub fn render(&self) -> String {
        render_sum(self.terms.iter(), |k| k.iter().map(|w| render_word(w)).collect::<Vec<_>>().join(" ⊗ "))
    }
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
