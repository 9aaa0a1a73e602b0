//! Expression front-end for the presented algebras.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := '-' factor | rational | 'v' ('^' int)? | atom | '(' expr ')'
//! atom   := name '[' object ']' | name '[' object ';' int ']'
//!         | name '[' class ']'  | name '[' class ';' int ']'
//! object := '0' | 'S' k | 'X{' d1 ',' ... '}#' j | '@' path
//! class  := '(' int (',' int)* ')'
//! ```
//!
//! Juxtaposition multiplies, so rendered elements such as
//! `mu-[S1] mu+[S1] + v K-[(1,0)]` parse back.

use num_bigint::BigInt;

use crate::backend::{Backend, ObjId};
use crate::error::{Error, Result};
use crate::presented::{Algebra, FreeElt, Gen};
use crate::quiver::{KClass, Rep};
use crate::scalar::{Rational, SqrtScalar};

/// Parses `text` as an element of the free algebra on the letters of `alg`.
pub fn parse_expr(text: &str, alg: Algebra, backend: &Backend) -> Result<FreeElt> {
    let mut p = Parser { s: text.chars().collect(), pos: 0, alg, b: backend };
    let x = p.expr()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(p.err(format!("unexpected '{}'", p.s[p.pos])));
    }
    Ok(x)
}

struct Parser<'a> {
    s: Vec<char>,
    pos: usize,
    alg: Algebra,
    b: &'a Backend,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.s.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.s.get(self.pos) {
                Some(d) => Err(self.err(format!("expected '{c}', found '{d}'"))),
                None => Err(self.err(format!("expected '{c}', found end of input"))),
            }
        }
    }

    fn q(&self) -> u64 {
        self.b.q()
    }

    fn expr(&mut self) -> Result<FreeElt> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek() {
                Some('+') => 1,
                Some('-') => -1,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let t = self.term()?;
            acc.add(&t, &SqrtScalar::from_int(sign, self.q()));
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c == '(' || c.is_ascii_alphanumeric())
    }

    fn term(&mut self) -> Result<FreeElt> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') || self.starts_factor() {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<FreeElt> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some('(') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(')')?;
                Ok(x)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(FreeElt::scalar(SqrtScalar::from_rational(r, self.q())))
            }
            Some(c) if c.is_ascii_alphabetic() => self.named(),
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Result<String> {
        self.ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(self.s[start..self.pos].iter().collect())
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let d = self.digits()?;
        let n: i64 = d.parse().map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn rational(&mut self) -> Result<Rational> {
        let n: BigInt = self.digits()?.parse().expect("digit string");
        if self.s.get(self.pos) == Some(&'/') {
            self.pos += 1;
            let d: BigInt = self.digits()?.parse().expect("digit string");
            if d == BigInt::from(0) {
                return Err(self.err("zero denominator"));
            }
            return Ok(Rational::new(n, d));
        }
        Ok(Rational::from_integer(n))
    }

    fn ident(&mut self) -> String {
        self.ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let mut name: String = self.s[start..self.pos].iter().collect();
        if let (Some(&sign @ ('+' | '-')), Some('[')) = (self.s.get(self.pos), self.s.get(self.pos + 1)) {
            name.push(sign);
            self.pos += 1;
        }
        name
    }

    fn named(&mut self) -> Result<FreeElt> {
        let start = self.pos;
        let name = self.ident();
        if name == "v" {
            let e = if self.eat('^') { self.int()? } else { 1 };
            return Ok(FreeElt::scalar(SqrtScalar::vpow(e, self.q())));
        }
        if self.s.get(self.pos) != Some(&'[') {
            return Err(Error::Syntax { pos: start, msg: format!("unknown name {name}") });
        }
        self.pos += 1;
        let g = self.atom(&name)?;
        if !g.algebra_matches(self.alg) {
            return Err(Error::UnknownSymbol { symbol: g.to_string(), algebra: self.alg.to_string() });
        }
        Ok(FreeElt::word(self.q(), vec![g]))
    }

    fn index(&mut self) -> Result<i64> {
        self.expect(';')?;
        let i = self.int()?;
        self.expect(']')?;
        Ok(i)
    }

    fn atom(&mut self, name: &str) -> Result<Gen> {
        use Gen::*;
        let g = match name {
            "mu+" => MuP(self.object()?),
            "mu-" => MuM(self.object()?),
            "nu+" => NuP(self.object()?),
            "nu-" => NuM(self.object()?),
            "om+" => OmP(self.object()?),
            "om-" => OmM(self.object()?),
            "K+" => KP(self.class()?),
            "K-" => KM(self.class()?),
            "Kc+" => KcP(self.class()?),
            "Kc-" => KcM(self.class()?),
            "KD+" => KdP(self.class()?),
            "KD-" => KdM(self.class()?),
            "e" => {
                let m = self.object()?;
                return Ok(E(m, self.index()?));
            }
            "Z" => {
                let m = self.object()?;
                return Ok(Z(m, self.index()?));
            }
            "k" => {
                let a = self.class()?;
                return Ok(Ki(a, self.index()?));
            }
            "KZ" => {
                let a = self.class()?;
                return Ok(KZ(a, self.index()?));
            }
            _ => {
                return Err(Error::UnknownSymbol { symbol: name.to_string(), algebra: self.alg.to_string() })
            }
        };
        self.expect(']')?;
        Ok(g)
    }

    fn object(&mut self) -> Result<ObjId> {
        self.ws();
        let start = self.pos;
        let mut depth = 0;
        while let Some(&c) = self.s.get(self.pos) {
            match c {
                '{' => depth += 1,
                '}' => depth -= 1,
                ']' | ';' if depth == 0 => break,
                _ => {}
            }
            self.pos += 1;
        }
        let text: String = self.s[start..self.pos].iter().collect();
        let text = text.trim();
        if let Some(path) = text.strip_prefix('@') {
            let body = std::fs::read_to_string(path)?;
            let rep = Rep::from_json(self.b.quiver(), &body)?;
            if rep.p() != self.b.q() {
                return Err(Error::FieldMismatch { left: rep.p(), right: self.b.q() });
            }
            return self.b.classify(&rep);
        }
        self.b.parse_object(text)
    }

    fn class(&mut self) -> Result<KClass> {
        self.expect('(')?;
        let mut xs = vec![self.int()?];
        while self.eat(',') {
            xs.push(self.int()?);
        }
        self.expect(')')?;
        if xs.len() != self.b.rank() {
            return Err(self.err(format!("class needs {} entries", self.b.rank())));
        }
        Ok(KClass::from_slice(&xs))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::presented::Workbench;

    fn a2() -> Arc<Backend> {
        Arc::new(Backend::preset("a2", 2).unwrap())
    }

    #[test]
    fn cross_relation_expression() {
        let wb = Workbench::new(a2());
        let x = parse_expr("mu+[S1]*mu-[S1]", Algebra::Hd, wb.backend()).unwrap();
        assert_eq!(wb.normal_form(Algebra::Hd, &x).unwrap().render(), "mu-[S1] mu+[S1] + K-[(1,0)]");
    }

    #[test]
    fn scalars_and_powers() {
        let b = a2();
        let x = parse_expr("3/2 - v^-2 + (1 + v) * 2", Algebra::Hd, &b).unwrap();
        let want = SqrtScalar::from_rational(Rational::new(7.into(), 2.into()), 2) - SqrtScalar::vpow(-2, 2)
            + SqrtScalar::vpow(1, 2) * SqrtScalar::from_int(2, 2);
        assert_eq!(x, FreeElt::scalar(want));
    }

    #[test]
    fn indexed_letters_and_isoclasses() {
        let b = a2();
        let x = parse_expr("Z[X{1,1}#0;-1] KZ[(1,-1);2]", Algebra::Dhce, &b).unwrap();
        let m = b.parse_object("X{1,1}#0").unwrap();
        assert_eq!(x, FreeElt::word(2, vec![Gen::Z(m, -1), Gen::KZ(KClass::from_slice(&[1, -1]), 2)]));
    }

    #[test]
    fn open_paren_reports_position() {
        let err = parse_expr("(", Algebra::Hd, &a2()).unwrap_err();
        assert!(matches!(err, Error::Syntax { pos: 1, .. }), "{err:?}");
        let err = parse_expr("mu+[S1] ) ", Algebra::Hd, &a2()).unwrap_err();
        assert!(matches!(err, Error::Syntax { pos: 8, .. }), "{err:?}");
    }

    #[test]
    fn foreign_and_unknown_letters() {
        let b = a2();
        assert!(matches!(parse_expr("nu+[S1]", Algebra::Hd, &b), Err(Error::UnknownSymbol { .. })));
        assert!(matches!(parse_expr("mu+[S7]", Algebra::Hd, &b), Err(Error::UnknownObject(_))));
        assert!(matches!(parse_expr("foo", Algebra::Hd, &b), Err(Error::Syntax { pos: 0, .. })));
    }

    fn letter(alg: Algebra) -> impl Strategy<Value = Gen> {
        let objs: Vec<ObjId> = a2().objects_up_to(2).unwrap().into_iter().filter(|m| !m.is_zero()).collect();
        let classes: Vec<KClass> = [[1, 0], [0, 1], [-1, 0], [1, 1]].iter().map(|c| KClass::from_slice(c)).collect();
        (prop::sample::select(objs), prop::sample::select(classes), -2i64..=2, 0usize..4).prop_map(
            move |(m, a, i, k)| match (alg, k) {
                (Algebra::Hd, 0) => Gen::MuP(m),
                (Algebra::Hd, 1) => Gen::MuM(m),
                (Algebra::Hd, 2) => Gen::KP(a),
                (Algebra::Hd, _) => Gen::KM(a),
                (Algebra::Dhce, 0 | 1) => Gen::Z(m, i),
                (Algebra::Dhce, _) => Gen::KZ(a, i),
                (_, 0) => Gen::E(m, i),
                (_, 1) => Gen::E(m, i + 1),
                _ => Gen::Ki(a, i),
            },
        )
    }

    fn alg() -> impl Strategy<Value = Algebra> {
        prop::sample::select(vec![Algebra::Hd, Algebra::Dhce, Algebra::Dhm(0)])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn parse_inverts_render(
            (alg, words) in alg().prop_flat_map(|a| (Just(a), prop::collection::vec(prop::collection::vec(letter(a), 0..4), 1..4))),
            coeffs in prop::collection::vec((-3i64..=3, -3i64..=3, 1i64..=3), 3),
        ) {
            let b = a2();
            let wb = Workbench::new(b.clone());
            let mut x = FreeElt::zero(2);
            for (w, (n, e, d)) in words.into_iter().zip(coeffs) {
                let c = SqrtScalar::from_rational(Rational::new(n.into(), d.into()), 2) * SqrtScalar::vpow(e, 2);
                x.add_term(w, c);
            }
            let nf = wb.normal_form(alg, &x).unwrap();
            let back = parse_expr(&nf.render(), alg, &b).unwrap();
            prop_assert_eq!(wb.normal_form(alg, &back).unwrap(), nf);
        }
    }
}
