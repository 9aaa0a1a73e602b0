//! Category-level data for representations of an acyclic quiver over F_p:
//! Hom spaces, automorphism counts, isoclass registry, subobject scans and
//! Hall numbers.
//!
//! Isomorphism classes are named by [`ObjId`] = (dimension vector, index in
//! the deterministic enumeration of that dimension vector), so names do not
//! depend on the order in which classes happen to be requested.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fq::{enumerate_subspaces, max_enum_from_env, odometer_step, solve_nullspace, Budget, FpMatrix, SubspaceRep};
use crate::quiver::{KClass, Quiver, Rep};
use crate::scalar::{is_prime, Rational};

/// Handle of an isomorphism class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId {
    pub class: KClass,
    pub idx: u32,
}

impl ObjId {
    pub fn zero(n: usize) -> Self {
        ObjId { class: KClass::zero(n), idx: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.class.is_zero()
    }

    /// The class `M^` in the Grothendieck group.
    pub fn hat(&self) -> &KClass {
        &self.class
    }

    fn simple_vertex(&self) -> Option<usize> {
        if self.idx != 0 || self.class.total() != 1 {
            return None;
        }
        self.class.0.iter().position(|&x| x == 1)
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some(v) = self.simple_vertex() {
            return write!(f, "S{}", v + 1);
        }
        write!(f, "X{{")?;
        for (i, x) in self.class.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}#{}", self.idx)
    }
}

impl fmt::Debug for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Linear description of `Hom(M, N)`: a basis of intertwiners in flattened form.
pub struct HomSpace {
    /// Offset of vertex i's block (an `N_i x M_i` matrix, row-major).
    offsets: Vec<usize>,
    shapes: Vec<(usize, usize)>,
    basis: SubspaceRep,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Vertex components of the element with flattened entries `v`.
    fn component<'a>(&self, v: &'a [u64], i: usize) -> &'a [u64] {
        let (r, c) = self.shapes[i];
        &v[self.offsets[i]..self.offsets[i] + r * c]
    }
}

/// Intertwiner solution space: `phi_t f^M_a = f^N_a phi_s` for each arrow `a: s -> t`.
pub fn hom_space(quiver: &Quiver, m: &Rep, n: &Rep) -> HomSpace {
    let p = m.p();
    let nv = quiver.num_vertices();
    let mut offsets = Vec::with_capacity(nv);
    let mut shapes = Vec::with_capacity(nv);
    let mut total = 0;
    for i in 0..nv {
        offsets.push(total);
        shapes.push((n.dims()[i], m.dims()[i]));
        total += n.dims()[i] * m.dims()[i];
    }
    let mut eqs: Vec<u64> = Vec::new();
    let mut neq = 0;
    for (k, &(s, t)) in quiver.arrows().iter().enumerate() {
        let fm = &m.maps()[k];
        let fn_ = &n.maps()[k];
        let (ms, nt) = (m.dims()[s], n.dims()[t]);
        let (mt, ns) = (m.dims()[t], n.dims()[s]);
        for r in 0..nt {
            for c in 0..ms {
                let mut row = vec![0u64; total];
                // (phi_t f^M)[r, c] = sum_k phi_t[r, k] f^M[k, c]
                for kk in 0..mt {
                    let idx = offsets[t] + r * mt + kk;
                    row[idx] = (row[idx] + fm.get(kk, c)) % p;
                }
                // - (f^N phi_s)[r, c] = - sum_k f^N[r, k] phi_s[k, c]
                for kk in 0..ns {
                    let idx = offsets[s] + kk * ms + c;
                    row[idx] = (row[idx] + p - fn_.get(r, kk)) % p;
                }
                eqs.extend(row);
                neq += 1;
            }
        }
    }
    let sys = FpMatrix::from_flat(p, neq, total, eqs);
    HomSpace { offsets, shapes, basis: solve_nullspace(&sys) }
}

pub fn hom_dim(quiver: &Quiver, m: &Rep, n: &Rep) -> usize {
    hom_space(quiver, m, n).dim()
}

fn square_invertible(entries: &[u64], n: usize, p: u64) -> bool {
    let mut a: smallvec::SmallVec<[u64; 36]> = smallvec::SmallVec::from_slice(entries);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return false;
        };
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
        }
        let inv = crate::fq::inv_mod(a[col * n + col], p);
        for r in (col + 1)..n {
            let f = a[r * n + col] * inv % p;
            if f == 0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] = (a[r * n + c] + p * p - f * a[col * n + c]) % p;
            }
        }
    }
    true
}

fn all_components_invertible(h: &HomSpace, v: &[u64], p: u64) -> bool {
    (0..h.shapes.len()).all(|i| {
        let (r, c) = h.shapes[i];
        r == c && square_invertible(h.component(v, i), r, p)
    })
}

fn checked_pow(p: u64, e: usize) -> Option<u64> {
    (0..e).try_fold(1u64, |acc, _| acc.checked_mul(p))
}

/// Visits every element of the span of `h` in odometer order, updating the
/// current element incrementally; stops early when `f` returns true.
fn scan_span(h: &HomSpace, p: u64, budget: &mut Budget, mut f: impl FnMut(&[u64]) -> bool) -> Result<bool> {
    let d = h.dim();
    budget.reserve(checked_pow(p, d).unwrap_or(u64::MAX))?;
    let mut cur = vec![0u64; h.basis.ambient()];
    let mut digits = vec![0u64; d];
    loop {
        budget.tick()?;
        if f(&cur) {
            return Ok(true);
        }
        // every digit that changes (increment or wrap to 0) adds its basis row once
        let mut k = d;
        let mut more = false;
        while k > 0 {
            k -= 1;
            for (x, y) in cur.iter_mut().zip(h.basis.basis().row(k)) {
                *x = (*x + y) % p;
            }
            digits[k] += 1;
            if digits[k] < p {
                more = true;
                break;
            }
            digits[k] = 0;
        }
        if !more {
            return Ok(false);
        }
    }
}

const PROBE_SEED: u64 = 0x4a11_f02e;

/// True iff some intertwiner `M -> N` is invertible at every vertex.
///
/// Cheap necessary conditions and seeded random probes run before the
/// exhaustive scan; the answer does not depend on them.
pub fn is_iso(quiver: &Quiver, m: &Rep, n: &Rep, budget: &mut Budget) -> Result<bool> {
    if m.dims() != n.dims() {
        return Ok(false);
    }
    if m == n {
        return Ok(true);
    }
    let p = m.p();
    let h = hom_space(quiver, m, n);
    let d = h.dim();
    if hom_dim(quiver, m, m) != d || hom_dim(quiver, n, n) != d || hom_dim(quiver, n, m) != d {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let width = h.basis.ambient();
    for _ in 0..64 {
        budget.tick()?;
        let mut v = vec![0u64; width];
        for k in 0..d {
            let c: u64 = rng.gen_range(0..p);
            for (x, y) in v.iter_mut().zip(h.basis.basis().row(k)) {
                *x = (*x + c * y) % p;
            }
        }
        if all_components_invertible(&h, &v, p) {
            return Ok(true);
        }
    }
    scan_span(&h, p, budget, |v| all_components_invertible(&h, v, p))
}

/// `|Aut(M)|` by enumerating `End(M)`.
pub fn aut_count(quiver: &Quiver, m: &Rep, budget: &mut Budget) -> Result<BigUint> {
    let h = hom_space(quiver, m, m);
    let p = m.p();
    let mut count = BigUint::default();
    scan_span(&h, p, budget, |v| {
        if all_components_invertible(&h, v, p) {
            count += 1u32;
        }
        false
    })?;
    Ok(count)
}

/// A subrepresentation together with its quotient, in the induced bases.
#[derive(Clone, Debug)]
pub struct Subobject {
    pub spaces: Vec<SubspaceRep>,
    pub sub: Rep,
    pub quotient: Rep,
}

/// All subrepresentations of `l`: tuples of subspaces closed under every arrow.
pub fn subobjects(quiver: &Quiver, l: &Rep, budget: &mut Budget) -> Result<Vec<Subobject>> {
    let p = l.p();
    let nv = quiver.num_vertices();
    let mut per_vertex: Vec<Vec<SubspaceRep>> = Vec::with_capacity(nv);
    for &d in l.dims() {
        let mut all = Vec::new();
        for k in 0..=d {
            all.extend(enumerate_subspaces(d, k, p, budget)?);
        }
        per_vertex.push(all);
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; nv];
    loop {
        budget.tick()?;
        let spaces: Vec<&SubspaceRep> = (0..nv).map(|i| &per_vertex[i][choice[i]]).collect();
        let closed = quiver.arrows().iter().enumerate().all(|(k, &(s, t))| {
            let f = &l.maps()[k];
            (0..spaces[s].dim()).all(|r| spaces[t].contains(&f.apply(spaces[s].basis().row(r))))
        });
        if closed {
            out.push(induced(quiver, l, spaces.into_iter().cloned().collect()));
        }
        // mixed-radix odometer over the per-vertex choices
        let mut i = nv;
        let mut more = false;
        while i > 0 {
            i -= 1;
            choice[i] += 1;
            if choice[i] < per_vertex[i].len() {
                more = true;
                break;
            }
            choice[i] = 0;
        }
        if !more {
            break;
        }
    }
    Ok(out)
}

fn induced(quiver: &Quiver, l: &Rep, spaces: Vec<SubspaceRep>) -> Subobject {
    let p = l.p();
    let sub_dims: Vec<usize> = spaces.iter().map(SubspaceRep::dim).collect();
    let quot_dims: Vec<usize> = spaces.iter().zip(l.dims()).map(|(s, d)| d - s.dim()).collect();
    let mut sub_maps = Vec::new();
    let mut quot_maps = Vec::new();
    for (k, &(s, t)) in quiver.arrows().iter().enumerate() {
        let f = &l.maps()[k];
        let mut sm = FpMatrix::zeros(p, sub_dims[t], sub_dims[s]);
        for j in 0..sub_dims[s] {
            let img = f.apply(spaces[s].basis().row(j));
            for (r, x) in spaces[t].coords(&img).into_iter().enumerate() {
                sm.set(r, j, x);
            }
        }
        let mut qm = FpMatrix::zeros(p, quot_dims[t], quot_dims[s]);
        for (j, &c) in spaces[s].free_columns().iter().enumerate() {
            let mut e = vec![0u64; l.dims()[s]];
            e[c] = 1;
            let img = f.apply(&e);
            for (r, x) in spaces[t].quotient_coords(&img).into_iter().enumerate() {
                qm.set(r, j, x);
            }
        }
        sub_maps.push(sm);
        quot_maps.push(qm);
    }
    Subobject {
        spaces,
        sub: Rep::new_unchecked(p, sub_dims, sub_maps),
        quotient: Rep::new_unchecked(p, quot_dims, quot_maps),
    }
}

/// Hall-number table of one object: `(quotient M, sub N) -> g^L_{MN}`.
pub type Decomposition = BTreeMap<(ObjId, ObjId), u64>;

/// Category data consumed by the Hall-algebra formulas. Implemented by the
/// brute-force quiver [`Backend`] and by the closed-form [`A1Oracle`].
pub trait HallData {
    fn classes(&self, d: &KClass) -> Result<Vec<ObjId>>;
    fn hall_number(&self, l: &ObjId, m: &ObjId, n: &ObjId) -> Result<u64>;
    fn automorphisms(&self, m: &ObjId) -> Result<BigUint>;
}

#[derive(Default)]
pub(crate) struct Store {
    classes: HashMap<KClass, Arc<Vec<Rep>>>,
    rep_index: HashMap<Rep, ObjId>,
    aut: HashMap<ObjId, BigUint>,
    decomp: HashMap<ObjId, Arc<Decomposition>>,
    products: HashMap<(ObjId, ObjId), Arc<Vec<(ObjId, u64)>>>,
    pub(crate) gamma: HashMap<(ObjId, ObjId), Arc<Vec<(ObjId, ObjId, Rational)>>>,
}

/// The brute-force backend over a fixed quiver and prime field, with an
/// isoclass registry and memo tables shared between threads.
pub struct Backend {
    quiver: Quiver,
    p: u64,
    max_enum: u64,
    pub(crate) store: RwLock<Store>,
}

impl fmt::Debug for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Backend({}, p={})", self.quiver.name(), self.p)
    }
}

impl Backend {
    /// Enumeration budget from `HALLFORGE_MAX_ENUM`.
    pub fn new(quiver: Quiver, p: u64) -> Result<Self> {
        Self::with_budget(quiver, p, max_enum_from_env())
    }

    pub fn with_budget(quiver: Quiver, p: u64, max_enum: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Backend { quiver, p, max_enum, store: RwLock::new(Store::default()) })
    }

    pub fn preset(name: &str, p: u64) -> Result<Self> {
        Self::new(Quiver::preset(name)?, p)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// The field size q = p; also the `q` of every scalar.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn max_enum(&self) -> u64 {
        self.max_enum
    }

    pub fn budget(&self, op: &'static str) -> Budget {
        Budget::new(op, self.max_enum)
    }

    pub fn rank(&self) -> usize {
        self.quiver.num_vertices()
    }

    pub fn zero(&self) -> ObjId {
        ObjId::zero(self.rank())
    }

    pub fn zero_class(&self) -> KClass {
        KClass::zero(self.rank())
    }

    /// The simple at vertex `v` (0-based).
    pub fn simple(&self, v: usize) -> ObjId {
        ObjId { class: KClass::unit(self.rank(), v), idx: 0 }
    }

    pub fn euler(&self, x: &KClass, y: &KClass) -> i64 {
        self.quiver.euler_form(x, y)
    }

    pub fn sym(&self, x: &KClass, y: &KClass) -> i64 {
        self.quiver.sym_euler(x, y)
    }

    /// Canonical representatives of all isoclasses with dimension vector `d`,
    /// in the order of first appearance in the matrix-tuple enumeration.
    pub fn class_reps(&self, d: &KClass) -> Result<Arc<Vec<Rep>>> {
        if let Some(v) = self.store.read().unwrap().classes.get(d) {
            return Ok(v.clone());
        }
        if d.len() != self.rank() || !d.is_dimvec() {
            return Err(Error::Param(format!("{d} is not a dimension vector")));
        }
        let dims = d.as_dims();
        let shapes: Vec<(usize, usize)> = self.quiver.arrows().iter().map(|&(s, t)| (dims[t], dims[s])).collect();
        let n_entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
        let mut budget = self.budget("iso_classes");
        budget.reserve(checked_pow(self.p, n_entries).unwrap_or(u64::MAX))?;
        let mut reps: Vec<Rep> = Vec::new();
        let mut digits = vec![0u64; n_entries];
        loop {
            budget.tick()?;
            let mut maps = Vec::with_capacity(shapes.len());
            let mut off = 0;
            for &(r, c) in &shapes {
                maps.push(FpMatrix::from_flat(self.p, r, c, digits[off..off + r * c].to_vec()));
                off += r * c;
            }
            let cand = Rep::new_unchecked(self.p, dims.clone(), maps);
            let mut known = false;
            for r in &reps {
                if is_iso(&self.quiver, r, &cand, &mut budget)? {
                    known = true;
                    break;
                }
            }
            if !known {
                reps.push(cand);
            }
            if !odometer_step(&mut digits, self.p) {
                break;
            }
        }
        let reps = Arc::new(reps);
        let mut st = self.store.write().unwrap();
        let entry = st.classes.entry(d.clone()).or_insert(reps).clone();
        for (i, r) in entry.iter().enumerate() {
            st.rep_index.entry(r.clone()).or_insert(ObjId { class: d.clone(), idx: i as u32 });
        }
        Ok(entry)
    }

    pub fn iso_classes(&self, d: &KClass) -> Result<Vec<ObjId>> {
        let n = self.class_reps(d)?.len();
        Ok((0..n).map(|i| ObjId { class: d.clone(), idx: i as u32 }).collect())
    }

    /// All isoclasses of total dimension at most `max_dim`, by total dimension
    /// then dimension vector then index.
    pub fn objects_up_to(&self, max_dim: usize) -> Result<Vec<ObjId>> {
        let mut out = Vec::new();
        for t in 0..=max_dim {
            for d in self.quiver.dimvecs_of_total(t) {
                out.extend(self.iso_classes(&d)?);
            }
        }
        Ok(out)
    }

    pub fn rep(&self, id: &ObjId) -> Result<Rep> {
        let reps = self.class_reps(&id.class)?;
        reps.get(id.idx as usize)
            .cloned()
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    /// The registered isoclass of an arbitrary representation.
    pub fn classify(&self, rep: &Rep) -> Result<ObjId> {
        if let Some(id) = self.store.read().unwrap().rep_index.get(rep) {
            return Ok(id.clone());
        }
        if rep.p() != self.p || rep.dims().len() != self.rank() {
            return Err(Error::InvalidRep("representation does not belong to this backend".into()));
        }
        let d = rep.dimvec();
        let reps = self.class_reps(&d)?;
        if reps.len() == 1 {
            return Ok(ObjId { class: d, idx: 0 });
        }
        let mut budget = self.budget("is_iso");
        for (i, r) in reps.iter().enumerate() {
            if is_iso(&self.quiver, r, rep, &mut budget)? {
                let id = ObjId { class: d, idx: i as u32 };
                self.store.write().unwrap().rep_index.insert(rep.clone(), id.clone());
                return Ok(id);
            }
        }
        unreachable!("isoclass enumeration is exhaustive")
    }

    pub fn hom_dim(&self, m: &ObjId, n: &ObjId) -> Result<usize> {
        Ok(hom_dim(&self.quiver, &self.rep(m)?, &self.rep(n)?))
    }

    /// `dim Ext^1(M, N) = dim Hom(M, N) - <M^, N^>` (hereditary).
    pub fn ext_dim(&self, m: &ObjId, n: &ObjId) -> Result<i64> {
        Ok(self.hom_dim(m, n)? as i64 - self.euler(m.hat(), n.hat()))
    }

    pub fn is_iso(&self, m: &Rep, n: &Rep) -> Result<bool> {
        is_iso(&self.quiver, m, n, &mut self.budget("is_iso"))
    }

    pub fn aut_count(&self, m: &ObjId) -> Result<BigUint> {
        if m.is_zero() {
            return Ok(BigUint::one());
        }
        if let Some(a) = self.store.read().unwrap().aut.get(m) {
            return Ok(a.clone());
        }
        let a = aut_count(&self.quiver, &self.rep(m)?, &mut self.budget("aut_count"))?;
        self.store.write().unwrap().aut.insert(m.clone(), a.clone());
        Ok(a)
    }

    pub fn subobjects(&self, l: &Rep) -> Result<Vec<Subobject>> {
        subobjects(&self.quiver, l, &mut self.budget("subobjects"))
    }

    /// The full Hall-number table of `L`, from one subobject scan.
    pub fn decomposition(&self, l: &ObjId) -> Result<Arc<Decomposition>> {
        if let Some(d) = self.store.read().unwrap().decomp.get(l) {
            return Ok(d.clone());
        }
        let rep = self.rep(l)?;
        let mut table = Decomposition::new();
        for s in self.subobjects(&rep)? {
            let sub = self.classify(&s.sub)?;
            let quot = self.classify(&s.quotient)?;
            *table.entry((quot, sub)).or_insert(0) += 1;
        }
        let table = Arc::new(table);
        let mut st = self.store.write().unwrap();
        Ok(st.decomp.entry(l.clone()).or_insert(table).clone())
    }

    /// `g^L_{MN}`: subobjects `X` of `L` with `X ~ N` and `L/X ~ M`.
    pub fn hall_number(&self, l: &ObjId, m: &ObjId, n: &ObjId) -> Result<u64> {
        if &(m.hat() + n.hat()) != l.hat() {
            return Ok(0);
        }
        Ok(self.decomposition(l)?.get(&(m.clone(), n.clone())).copied().unwrap_or(0))
    }

    /// Hall number for arbitrary representations.
    pub fn hall_number_reps(&self, l: &Rep, m: &Rep, n: &Rep) -> Result<u64> {
        self.hall_number(&self.classify(l)?, &self.classify(m)?, &self.classify(n)?)
    }

    /// `{(L, g^L_{MN}) : g > 0}` over `L` with `L^ = M^ + N^`.
    pub fn middle_terms(&self, m: &ObjId, n: &ObjId) -> Result<Arc<Vec<(ObjId, u64)>>> {
        let key = (m.clone(), n.clone());
        if let Some(v) = self.store.read().unwrap().products.get(&key) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        for l in self.iso_classes(&(m.hat() + n.hat()))? {
            let g = self.hall_number(&l, m, n)?;
            if g > 0 {
                out.push((l, g));
            }
        }
        let out = Arc::new(out);
        let mut st = self.store.write().unwrap();
        Ok(st.products.entry(key).or_insert(out).clone())
    }

    /// Pairs `(quotient, sub, g)` with `g = g^L_{quotient, sub} > 0`.
    pub fn splittings(&self, l: &ObjId) -> Result<Vec<(ObjId, ObjId, u64)>> {
        Ok(self.decomposition(l)?.iter().map(|((m, n), &g)| (m.clone(), n.clone(), g)).collect())
    }

    /// `g^M_{N_1 ... N_t}` by recursive subobject scans.
    pub fn filtration_count(&self, m: &Rep, parts: &[Rep]) -> Result<u64> {
        match parts {
            [] => Ok(u64::from(m.total_dim() == 0)),
            [only] => Ok(u64::from(self.is_iso(m, only)?)),
            [first, rest @ ..] => {
                let target = self.classify(first)?;
                let mut total = 0;
                for s in self.subobjects(m)? {
                    if s.quotient.dims() == first.dims() && self.classify(&s.quotient)? == target {
                        total += self.filtration_count(&s.sub, rest)?;
                    }
                }
                Ok(total)
            }
        }
    }

    /// Parses `0`, `S<k>` or `X{d1,...,dn}#j`.
    pub fn parse_object(&self, name: &str) -> Result<ObjId> {
        let name = name.trim();
        let bad = || Error::UnknownObject(name.to_string());
        let id = if name == "0" {
            self.zero()
        } else if let Some(k) = name.strip_prefix('S') {
            let k: usize = k.parse().map_err(|_| bad())?;
            if k == 0 || k > self.rank() {
                return Err(bad());
            }
            self.simple(k - 1)
        } else if let Some(rest) = name.strip_prefix("X{") {
            let (dims, idx) = rest.split_once("}#").ok_or_else(bad)?;
            let dims: Vec<i64> = dims
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            let idx: u32 = idx.parse().map_err(|_| bad())?;
            let class = KClass::from_slice(&dims);
            if class.len() != self.rank() || !class.is_dimvec() {
                return Err(bad());
            }
            ObjId { class, idx }
        } else {
            return Err(bad());
        };
        if id.idx as usize >= self.class_reps(&id.class)?.len() {
            return Err(bad());
        }
        Ok(id)
    }
}

impl HallData for Backend {
    fn classes(&self, d: &KClass) -> Result<Vec<ObjId>> {
        self.iso_classes(d)
    }
    fn hall_number(&self, l: &ObjId, m: &ObjId, n: &ObjId) -> Result<u64> {
        Backend::hall_number(self, l, m, n)
    }
    fn automorphisms(&self, m: &ObjId) -> Result<BigUint> {
        self.aut_count(m)
    }
}

/// Closed forms for the one-vertex quiver: one class per dimension,
/// `g^{(n)}_{(a),(b)} = [n choose b]_q` and `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)`.
pub struct A1Oracle {
    q: u64,
}

impl A1Oracle {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(A1Oracle { q })
    }

    fn dim(id: &ObjId) -> u64 {
        id.class.0[0] as u64
    }
}

impl HallData for A1Oracle {
    fn classes(&self, d: &KClass) -> Result<Vec<ObjId>> {
        Ok(vec![ObjId { class: d.clone(), idx: 0 }])
    }

    fn hall_number(&self, l: &ObjId, m: &ObjId, n: &ObjId) -> Result<u64> {
        let (l, m, n) = (Self::dim(l), Self::dim(m), Self::dim(n));
        if m + n != l {
            return Ok(0);
        }
        let g = crate::fq::gaussian_binomial(l, n, self.q);
        u64::try_from(g).map_err(|_| Error::Param("Hall number overflow".into()))
    }

    fn automorphisms(&self, m: &ObjId) -> Result<BigUint> {
        let n = Self::dim(m) as u32;
        let q = BigUint::from(self.q);
        Ok((0..n).map(|i| q.pow(n) - q.pow(i)).product())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(p: u64) -> Backend {
        Backend::preset("a2", p).unwrap()
    }

    fn proj(b: &Backend, c: u64) -> Rep {
        let q = b.quiver().clone();
        Rep::new(&q, b.q(), vec![1, 1], vec![FpMatrix::from_flat(b.q(), 1, 1, vec![c])]).unwrap()
    }

    #[test]
    fn hom_dims_on_a2() {
        let b = a2(2);
        let q = b.quiver().clone();
        let p = proj(&b, 1);
        let s1 = Rep::simple(&q, 2, 0);
        let s2 = Rep::simple(&q, 2, 1);
        assert_eq!(hom_dim(&q, &p, &s1), 1);
        assert_eq!(hom_dim(&q, &p, &s2), 0);
        assert_eq!(hom_dim(&q, &p, &Rep::zero(&q, 2)), 0);
        // Ext^1(S1, S2) = 1, Hom = 0
        assert_eq!(hom_dim(&q, &s1, &s2), 0);
        assert_eq!(hom_dim(&q, &s1, &s2) as i64 - q.euler_form(&s1.dimvec(), &s2.dimvec()), 1);
    }

    #[test]
    fn automorphisms() {
        let b = a2(2);
        let q = b.quiver().clone();
        let s1 = Rep::simple(&q, 2, 0);
        let s1s1 = s1.direct_sum(&s1, &q);
        let mut bud = b.budget("t");
        assert_eq!(aut_count(&q, &s1s1, &mut bud).unwrap(), BigUint::from(6u32));
        assert_eq!(aut_count(&q, &proj(&b, 1), &mut bud).unwrap(), BigUint::from(1u32));
        assert_eq!(b.aut_count(&b.zero()).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn isomorphism_tests() {
        let b = Backend::preset("a2", 3).unwrap();
        let q = b.quiver().clone();
        assert!(b.is_iso(&proj(&b, 1), &proj(&b, 2)).unwrap());
        assert!(!b.is_iso(&proj(&b, 1), &proj(&b, 0)).unwrap());
        assert!(!b.is_iso(&Rep::simple(&q, 3, 0), &Rep::simple(&q, 3, 1)).unwrap());
    }

    #[test]
    fn subobject_scans() {
        let b = a2(2);
        let q = b.quiver().clone();
        let subs = b.subobjects(&proj(&b, 1)).unwrap();
        assert_eq!(subs.len(), 3);
        let socle: Vec<_> = subs.iter().filter(|s| s.sub.total_dim() == 1).collect();
        assert_eq!(socle.len(), 1);
        assert_eq!(socle[0].sub.dims(), &[0, 1]);
        assert_eq!(b.subobjects(&Rep::zero(&q, 2)).unwrap().len(), 1);
        let split = Rep::simple(&q, 2, 0).direct_sum(&Rep::simple(&q, 2, 1), &q);
        assert_eq!(b.subobjects(&split).unwrap().len(), 4);
    }

    #[test]
    fn classes_and_hall_numbers() {
        let b = a2(2);
        let d11 = KClass::from_slice(&[1, 1]);
        let cls = b.iso_classes(&d11).unwrap();
        assert_eq!(cls.len(), 2);
        // #0 is the split S1+S2 (zero map), #1 the indecomposable projective
        assert!(b.rep(&cls[0]).unwrap().maps()[0].is_zero());
        let (s1, s2, p) = (b.simple(0), b.simple(1), cls[1].clone());
        assert_eq!(b.hall_number(&p, &s1, &s2).unwrap(), 1);
        assert_eq!(b.hall_number(&p, &s2, &s1).unwrap(), 0);
        assert_eq!(b.hall_number(&p, &p, &b.zero()).unwrap(), 1);
        assert_eq!(b.hall_number(&p, &b.zero(), &p).unwrap(), 1);
        let mt: Vec<_> = b.middle_terms(&s1, &s2).unwrap().iter().map(|(l, _)| l.clone()).collect();
        assert_eq!(mt, cls);
        let mt: Vec<_> = b.middle_terms(&s2, &s1).unwrap().iter().map(|(l, _)| l.clone()).collect();
        assert_eq!(mt, vec![cls[0].clone()]);
        assert_eq!(b.iso_classes(&b.zero_class()).unwrap(), vec![b.zero()]);
        assert_eq!(b.objects_up_to(2).unwrap().len(), 7);
    }

    #[test]
    fn a1_lines_in_plane() {
        let b = Backend::preset("a1", 2).unwrap();
        let two = ObjId { class: KClass::from_slice(&[2]), idx: 0 };
        let one = b.simple(0);
        assert_eq!(b.hall_number(&two, &one, &one).unwrap(), 3);
        let r2 = b.rep(&two).unwrap();
        let r1 = b.rep(&one).unwrap();
        assert_eq!(b.filtration_count(&r2, &[r1.clone(), r1.clone()]).unwrap(), 3);
        assert_eq!(b.filtration_count(&r2, &[r2.clone()]).unwrap(), 1);
    }

    #[test]
    fn filtration_on_projective() {
        let b = a2(2);
        let q = b.quiver().clone();
        let p = proj(&b, 1);
        let (s1, s2) = (Rep::simple(&q, 2, 0), Rep::simple(&q, 2, 1));
        assert_eq!(b.filtration_count(&p, &[s1.clone(), s2.clone()]).unwrap(), 1);
        assert_eq!(b.filtration_count(&p, &[s2, s1]).unwrap(), 0);
    }

    #[test]
    fn object_names_round_trip() {
        let b = a2(2);
        for id in b.objects_up_to(2).unwrap() {
            assert_eq!(b.parse_object(&id.to_string()).unwrap(), id);
        }
        assert_eq!(b.simple(0).to_string(), "S1");
        assert!(b.parse_object("X{1,1}#2").is_err());
        assert!(b.parse_object("S3").is_err());
    }

    #[test]
    fn registry_is_stable() {
        let b = a2(3);
        let r = proj(&b, 2);
        assert_eq!(b.classify(&r).unwrap(), b.classify(&r).unwrap());
        assert_eq!(b.classify(&r).unwrap(), b.classify(&proj(&b, 1)).unwrap());
    }

    #[test]
    fn cap_exceeded_is_clean() {
        let b = Backend::with_budget(Quiver::preset("a1").unwrap(), 3, 1000).unwrap();
        let four = ObjId { class: KClass::from_slice(&[4]), idx: 0 };
        assert!(matches!(b.aut_count(&four), Err(Error::CapExceeded { .. })));
    }
}
