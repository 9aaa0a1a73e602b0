//! Acyclic quivers, dimension vectors and representations over a prime field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::fq::FpMatrix;

/// An element of the Grothendieck group, identified with Z^vertices.
/// Dimension vectors are the non-negative ones.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct KClass(pub SmallVec<[i64; 4]>);

impl KClass {
    pub fn zero(n: usize) -> Self {
        KClass(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut k = Self::zero(n);
        k.0[i] = 1;
        k
    }

    pub fn from_slice(xs: &[i64]) -> Self {
        KClass(SmallVec::from_slice(xs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_dimvec(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        KClass(self.0.iter().map(|x| x * k).collect())
    }

    pub fn as_dims(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x.max(0) as usize).collect()
    }
}

impl Add for &KClass {
    type Output = KClass;
    fn add(self, o: &KClass) -> KClass {
        assert_eq!(self.len(), o.len(), "class rank mismatch");
        KClass(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &KClass {
    type Output = KClass;
    fn sub(self, o: &KClass) -> KClass {
        assert_eq!(self.len(), o.len(), "class rank mismatch");
        KClass(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        KClass(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    name: String,
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct QuiverFile {
    vertices: Vec<String>,
    arrows: Vec<ArrowFile>,
}

#[derive(Serialize, Deserialize)]
struct ArrowFile {
    from: String,
    to: String,
}

impl Quiver {
    pub fn new(name: &str, vertices: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidQuiver(format!("duplicate vertex {v}")));
            }
        }
        if arrows.iter().any(|&(s, t)| s >= n || t >= n) {
            return Err(Error::InvalidQuiver("arrow endpoint out of range".into()));
        }
        let q = Quiver { name: name.to_string(), vertices, arrows };
        if q.has_cycle() {
            return Err(Error::InvalidQuiver("quiver has a directed cycle".into()));
        }
        Ok(q)
    }

    /// Presets: `a1`, `a2` (1->2), `a3` (1->2->3), `kronecker` (two arrows 1->2).
    pub fn preset(name: &str) -> Result<Self> {
        let vs = |n: usize| (1..=n).map(|i| i.to_string()).collect::<Vec<_>>();
        match name {
            "a1" => Self::new(name, vs(1), vec![]),
            "a2" => Self::new(name, vs(2), vec![(0, 1)]),
            "a3" => Self::new(name, vs(3), vec![(0, 1), (1, 2)]),
            "kronecker" => Self::new(name, vs(2), vec![(0, 1), (0, 1)]),
            _ => Err(Error::InvalidQuiver(format!("unknown preset {name}"))),
        }
    }

    pub fn from_json(name: &str, text: &str) -> Result<Self> {
        let f: QuiverFile = serde_json::from_str(text)?;
        let idx = |v: &str| {
            f.vertices
                .iter()
                .position(|x| x == v)
                .ok_or_else(|| Error::InvalidQuiver(format!("unknown vertex {v}")))
        };
        let arrows = f
            .arrows
            .iter()
            .map(|a| Ok((idx(&a.from)?, idx(&a.to)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, f.vertices.clone(), arrows)
    }

    pub fn to_json(&self) -> String {
        let f = QuiverFile {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|&(s, t)| ArrowFile { from: self.vertices[s].clone(), to: self.vertices[t].clone() })
                .collect(),
        };
        serde_json::to_string(&f).expect("quiver serializes")
    }

    fn has_cycle(&self) -> bool {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        seen < n
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// `<x, y> = sum_i x_i y_i - sum_{a: s->t} x_s y_t`.
    pub fn euler_form(&self, x: &KClass, y: &KClass) -> i64 {
        let diag: i64 = x.0.iter().zip(&y.0).map(|(a, b)| a * b).sum();
        let off: i64 = self.arrows.iter().map(|&(s, t)| x.0[s] * y.0[t]).sum();
        diag - off
    }

    /// `(x, y) = <x, y> + <y, x>`.
    pub fn sym_euler(&self, x: &KClass, y: &KClass) -> i64 {
        self.euler_form(x, y) + self.euler_form(y, x)
    }

    /// All dimension vectors with total dimension exactly `n`, lexicographically.
    pub fn dimvecs_of_total(&self, n: usize) -> Vec<KClass> {
        let k = self.num_vertices();
        let mut out = Vec::new();
        let mut cur = vec![0i64; k];
        fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<KClass>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(KClass::from_slice(cur));
                return;
            }
            for x in (0..=left).rev() {
                cur[i] = x;
                rec(i + 1, left - x, cur, out);
            }
        }
        if k == 0 {
            return out;
        }
        rec(0, n as i64, &mut cur, &mut out);
        out
    }
}

/// A representation: one vector space `F_p^{d_i}` per vertex, one matrix per arrow.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rep {
    p: u64,
    dims: Vec<usize>,
    maps: Vec<FpMatrix>,
}

#[derive(Serialize, Deserialize)]
struct RepFile {
    dims: BTreeMap<String, usize>,
    #[serde(default)]
    maps: BTreeMap<String, Vec<Vec<i64>>>,
    p: u64,
}

impl Rep {
    pub fn new(quiver: &Quiver, p: u64, dims: Vec<usize>, maps: Vec<FpMatrix>) -> Result<Self> {
        if dims.len() != quiver.num_vertices() {
            return Err(Error::InvalidRep("dimension vector has wrong length".into()));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::InvalidRep("one matrix per arrow required".into()));
        }
        for (m, &(s, t)) in maps.iter().zip(quiver.arrows()) {
            if m.rows() != dims[t] || m.cols() != dims[s] || m.p() != p {
                return Err(Error::InvalidRep(format!(
                    "arrow {s}->{t} needs a {}x{} matrix over F_{p}",
                    dims[t], dims[s]
                )));
            }
        }
        Ok(Rep { p, dims, maps })
    }

    pub(crate) fn new_unchecked(p: u64, dims: Vec<usize>, maps: Vec<FpMatrix>) -> Self {
        Rep { p, dims, maps }
    }

    pub fn zero(quiver: &Quiver, p: u64) -> Self {
        Self::with_zero_maps(quiver, p, vec![0; quiver.num_vertices()])
    }

    pub fn with_zero_maps(quiver: &Quiver, p: u64, dims: Vec<usize>) -> Self {
        let maps = quiver.arrows().iter().map(|&(s, t)| FpMatrix::zeros(p, dims[t], dims[s])).collect();
        Rep { p, dims, maps }
    }

    pub fn simple(quiver: &Quiver, p: u64, vertex: usize) -> Self {
        let mut dims = vec![0; quiver.num_vertices()];
        dims[vertex] = 1;
        Self::with_zero_maps(quiver, p, dims)
    }

    pub fn from_json(quiver: &Quiver, text: &str) -> Result<Self> {
        let f: RepFile = serde_json::from_str(text)?;
        let dims = quiver
            .vertices()
            .iter()
            .map(|v| f.dims.get(v).copied().unwrap_or(0))
            .collect::<Vec<_>>();
        let mut rep = Self::with_zero_maps(quiver, f.p, dims);
        for (k, rows) in &f.maps {
            let a: usize = k.parse().map_err(|_| Error::InvalidRep(format!("bad arrow key {k}")))?;
            if a >= rep.maps.len() {
                return Err(Error::InvalidRep(format!("no arrow {a}")));
            }
            rep.maps[a] = FpMatrix::from_rows(f.p, rows)?;
        }
        Self::new(quiver, f.p, rep.dims, rep.maps)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn maps(&self) -> &[FpMatrix] {
        &self.maps
    }
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dimvec(&self) -> KClass {
        KClass(self.dims.iter().map(|&d| d as i64).collect())
    }

    pub fn direct_sum(&self, other: &Rep, quiver: &Quiver) -> Rep {
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| {
                let mut m = FpMatrix::zeros(self.p, dims[t], dims[s]);
                let (a, b) = (&self.maps[k], &other.maps[k]);
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m.set(a.rows() + r, a.cols() + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        Rep { p: self.p, dims, maps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_form_on_a2() {
        let q = Quiver::preset("a2").unwrap();
        let s1 = KClass::from_slice(&[1, 0]);
        let s2 = KClass::from_slice(&[0, 1]);
        let p = KClass::from_slice(&[1, 1]);
        assert_eq!(q.euler_form(&s1, &s2), -1);
        assert_eq!(q.euler_form(&s2, &s1), 0);
        assert_eq!(q.euler_form(&p, &p), 1);
        assert_eq!(q.euler_form(&KClass::zero(2), &p), 0);
        assert_eq!(q.sym_euler(&s1, &s2), -1);
    }

    #[test]
    fn cycles_rejected() {
        let r = Quiver::new("c", vec!["a".into(), "b".into()], vec![(0, 1), (1, 0)]);
        assert!(matches!(r, Err(Error::InvalidQuiver(_))));
        let r = Quiver::new("d", vec!["a".into(), "a".into()], vec![]);
        assert!(matches!(r, Err(Error::InvalidQuiver(_))));
    }

    #[test]
    fn json_formats() {
        let q = Quiver::from_json("f", r#"{"vertices": ["1","2"], "arrows": [{"from":"1","to":"2"}]}"#).unwrap();
        assert_eq!(q.arrows(), &[(0, 1)]);
        assert_eq!(Quiver::from_json("g", &q.to_json()).unwrap().arrows(), q.arrows());
        let r = Rep::from_json(&q, r#"{"dims": {"1":1,"2":1}, "maps": {"0": [[1]]}, "p": 2}"#).unwrap();
        assert_eq!(r.dims(), &[1, 1]);
        assert_eq!(r.maps()[0].get(0, 0), 1);
        let bad = Rep::from_json(&q, r#"{"dims": {"1":1,"2":1}, "maps": {"0": [[1, 1]]}, "p": 2}"#);
        assert!(matches!(bad, Err(Error::InvalidRep(_))));
    }

    #[test]
    fn dimvecs() {
        let q = Quiver::preset("a2").unwrap();
        let ds: Vec<String> = q.dimvecs_of_total(2).iter().map(|d| d.to_string()).collect();
        assert_eq!(ds, ["(2,0)", "(1,1)", "(0,2)"]);
    }
}
