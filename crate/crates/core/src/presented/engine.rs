use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, RwLock};

use crate::backend::Backend;
use crate::error::{Error, Result};
use crate::scalar::SqrtScalar;

use super::{add_into, rules, Algebra, Elt, FreeElt, Gen, Word};

/// Default bound on rewrite steps per normalization.
pub const DEFAULT_STEP_LIMIT: u64 = 5_000_000;

type Terms = BTreeMap<Word, SqrtScalar>;

/// Normal-form engine for one algebra: leftmost-reducible strategy with a
/// per-word memo.
pub struct Engine {
    alg: Algebra,
    backend: Arc<Backend>,
    memo: RwLock<HashMap<Word, Arc<Terms>>>,
    step_limit: u64,
}

impl Engine {
    pub fn new(alg: Algebra, backend: Arc<Backend>, step_limit: u64) -> Result<Self> {
        Ok(Engine { alg: alg.validate()?, backend, memo: RwLock::new(HashMap::new()), step_limit })
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    /// Drops unit letters and rejects letters of other algebras.
    pub fn clean(&self, w: &[Gen]) -> Result<Word> {
        let mut out = Vec::with_capacity(w.len());
        for g in w {
            if !g.algebra_matches(self.alg) {
                return Err(Error::UnknownSymbol { symbol: g.to_string(), algebra: self.alg.to_string() });
            }
            if !g.is_unit() {
                out.push(g.clone());
            }
        }
        Ok(out)
    }

    /// True when the word lies outside the range where the cyclic system is
    /// canonical: its e-letters use residues not within two adjacent ones.
    pub fn out_of_contract(&self, w: &[Gen]) -> bool {
        let Some(m) = self.alg.modulus() else { return false };
        let res: BTreeSet<i64> = w.iter().filter_map(|g| match g {
            Gen::E(_, i) => Some(*i),
            _ => None,
        }).collect();
        match res.len() {
            0 | 1 => false,
            2 => {
                let v: Vec<i64> = res.into_iter().collect();
                !((v[0] + 1).rem_euclid(m) == v[1] || (v[1] + 1).rem_euclid(m) == v[0])
            }
            _ => true,
        }
    }

    pub fn normalize_word(&self, w: &[Gen]) -> Result<Arc<Terms>> {
        let w = self.clean(w)?;
        let mut steps = 0u64;
        self.nf(w, &mut steps)
    }

    fn nf(&self, w: Word, steps: &mut u64) -> Result<Arc<Terms>> {
        if let Some(t) = self.memo.read().unwrap().get(&w) {
            return Ok(t.clone());
        }
        let mut out = Terms::new();
        let mut found = None;
        for k in 0..w.len().saturating_sub(1) {
            if let Some(r) = rules::reduce(self.alg, &self.backend, &w[k], &w[k + 1])? {
                found = Some((k, r));
                break;
            }
        }
        match found {
            None => {
                out.insert(w.clone(), SqrtScalar::one(self.backend.q()));
            }
            Some((k, rewrite)) => {
                *steps += 1;
                if *steps > self.step_limit {
                    return Err(Error::RewriteBound { limit: self.step_limit });
                }
                for (c, mid) in rewrite {
                    let mut nw: Word = w[..k].to_vec();
                    nw.extend(mid.into_iter().filter(|g| !g.is_unit()));
                    nw.extend(w[k + 2..].iter().cloned());
                    for (u, d) in self.nf(nw, steps)?.iter() {
                        add_into(&mut out, u.clone(), &c * d);
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.memo.write().unwrap().insert(w, out.clone());
        Ok(out)
    }

    pub fn normal_form(&self, x: &FreeElt) -> Result<Elt> {
        let mut out = Elt::zero(self.backend.q(), vec![self.alg]);
        for (w, c) in x.terms() {
            let w = self.clean(w)?;
            out.mark_noncanonical(self.out_of_contract(&w));
            for (u, d) in self.normalize_word(&w)?.iter() {
                out.add_term(vec![u.clone()], c * d);
            }
        }
        Ok(out)
    }
}

/// Shared engines for all algebras over one backend.
pub struct Workbench {
    backend: Arc<Backend>,
    engines: Mutex<HashMap<Algebra, Arc<Engine>>>,
    step_limit: u64,
}

impl Workbench {
    pub fn new(backend: Arc<Backend>) -> Self {
        Self::with_step_limit(backend, DEFAULT_STEP_LIMIT)
    }

    pub fn with_step_limit(backend: Arc<Backend>, step_limit: u64) -> Self {
        Workbench { backend, engines: Mutex::new(HashMap::new()), step_limit }
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn backend_arc(&self) -> Arc<Backend> {
        self.backend.clone()
    }

    pub fn q(&self) -> u64 {
        self.backend.q()
    }

    pub fn engine(&self, alg: Algebra) -> Result<Arc<Engine>> {
        let mut map = self.engines.lock().unwrap();
        if let Some(e) = map.get(&alg) {
            return Ok(e.clone());
        }
        let e = Arc::new(Engine::new(alg, self.backend.clone(), self.step_limit)?);
        map.insert(alg, e.clone());
        Ok(e)
    }

    pub fn normal_form(&self, alg: Algebra, x: &FreeElt) -> Result<Elt> {
        self.engine(alg)?.normal_form(x)
    }

    /// The normal form of a single generator.
    pub fn gen(&self, alg: Algebra, g: Gen) -> Result<Elt> {
        self.normal_form(alg, &FreeElt::word(self.q(), vec![g]))
    }

    pub fn word(&self, alg: Algebra, w: Word) -> Result<Elt> {
        self.normal_form(alg, &FreeElt::word(self.q(), w))
    }

    /// Product of normalized elements, factor by factor.
    pub fn mult(&self, x: &Elt, y: &Elt) -> Result<Elt> {
        if x.algebras() != y.algebras() {
            return Err(Error::Param("product of elements of different algebras".into()));
        }
        let engines: Vec<Arc<Engine>> = x.algebras().iter().map(|&a| self.engine(a)).collect::<Result<_>>()?;
        let mut out = Elt::zero(self.q(), x.algebras().to_vec());
        out.mark_noncanonical(x.is_noncanonical() || y.is_noncanonical());
        for (kx, cx) in x.terms() {
            for (ky, cy) in y.terms() {
                let mut partial: Vec<(Vec<Word>, SqrtScalar)> = vec![(Vec::new(), cx * cy)];
                for (f, eng) in engines.iter().enumerate() {
                    let mut w = kx[f].clone();
                    w.extend(ky[f].iter().cloned());
                    out.mark_noncanonical(eng.out_of_contract(&w));
                    let nf = eng.normalize_word(&w)?;
                    let mut next = Vec::with_capacity(partial.len() * nf.len());
                    for (k, c) in &partial {
                        for (u, d) in nf.iter() {
                            let mut k2 = k.clone();
                            k2.push(u.clone());
                            next.push((k2, c * d));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    out.add_term(k, c);
                }
            }
        }
        Ok(out)
    }

    /// Normal form of a product of free elements in one algebra.
    pub fn mult_free(&self, alg: Algebra, x: &FreeElt, y: &FreeElt) -> Result<Elt> {
        self.normal_form(alg, &x.mul(y))
    }
}
