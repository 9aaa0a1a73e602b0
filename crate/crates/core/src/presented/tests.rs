use std::sync::Arc;

use super::*;
use crate::backend::Backend;
use crate::hall::vpow;

fn a2() -> Workbench {
    Workbench::new(Arc::new(Backend::preset("a2", 2).unwrap()))
}

fn obj(wb: &Workbench, s: &str) -> ObjId {
    wb.backend().parse_object(s).unwrap()
}

fn cls(xs: &[i64]) -> KClass {
    KClass::from_slice(xs)
}

fn elt(wb: &Workbench, alg: Algebra, terms: Vec<(SqrtScalar, Word)>) -> Elt {
    let mut x = FreeElt::zero(wb.q());
    for (c, w) in terms {
        x.add_term(w, c);
    }
    wb.normal_form(alg, &x).unwrap()
}

#[test]
fn hd_cross_of_simples() {
    let wb = a2();
    let s1 = obj(&wb, "S1");
    let got = wb.word(Algebra::Hd, vec![Gen::MuP(s1.clone()), Gen::MuM(s1.clone())]).unwrap();
    let one = SqrtScalar::one(2);
    let want = elt(
        &wb,
        Algebra::Hd,
        vec![(one.clone(), vec![Gen::MuM(s1.clone()), Gen::MuP(s1.clone())]), (one, vec![Gen::KM(cls(&[1, 0]))])],
    );
    assert_eq!(got, want);
    assert_eq!(got.render(), "mu-[S1] mu+[S1] + K-[(1,0)]");
}

#[test]
fn torus_swap_uses_symmetric_form() {
    let wb = a2();
    let got = wb.word(Algebra::Hd, vec![Gen::KP(cls(&[1, 0])), Gen::KM(cls(&[0, 1]))]).unwrap();
    let want = elt(&wb, Algebra::Hd, vec![(vpow(wb.backend(), -1), vec![Gen::KM(cls(&[0, 1])), Gen::KP(cls(&[1, 0]))])]);
    assert_eq!(got, want);
}

#[test]
fn empty_word_is_unit() {
    let wb = a2();
    for alg in [Algebra::Hd, Algebra::Hhd, Algebra::Dhm(0), Algebra::Dh, Algebra::Dhce, Algebra::D] {
        assert_eq!(wb.word(alg, vec![]).unwrap(), Elt::unit(2, vec![alg]));
    }
}

#[test]
fn hall_merge_in_minus_part() {
    let wb = a2();
    let (s1, s2) = (obj(&wb, "S1"), obj(&wb, "S2"));
    let got = wb.word(Algebra::Hd, vec![Gen::MuM(s1), Gen::MuM(s2)]).unwrap();
    let vinv = vpow(wb.backend(), -1);
    let mut terms = Vec::new();
    for l in wb.backend().iso_classes(&cls(&[1, 1])).unwrap() {
        terms.push((vinv.clone(), vec![Gen::MuM(l)]));
    }
    assert_eq!(terms.len(), 2);
    assert_eq!(got, elt(&wb, Algebra::Hd, terms));
}

#[test]
fn dh0_cross_of_simples() {
    let wb = a2();
    let s1 = obj(&wb, "S1");
    let got = wb.word(Algebra::Dhm(0), vec![Gen::E(s1.clone(), 1), Gen::E(s1.clone(), 0)]).unwrap();
    let one = SqrtScalar::one(2);
    let want = elt(
        &wb,
        Algebra::Dhm(0),
        vec![
            (one.clone(), vec![Gen::E(s1.clone(), 0), Gen::E(s1.clone(), 1)]),
            (one, vec![Gen::Ki(cls(&[1, 0]), 0)]),
        ],
    );
    assert_eq!(got, want);
}

#[test]
fn cross_matches_oracle_on_small_pairs() {
    let wb = a2();
    let objs = wb.backend().objects_up_to(2).unwrap();
    for side in [Side::Hd, Side::Hhd] {
        for m in &objs {
            for n in &objs {
                let a = hd_cross(&wb, side, m, n).unwrap();
                let b = hd_cross_oracle(&wb, side, m, n).unwrap();
                assert_eq!(a, b, "{side:?} {m} {n}");
            }
        }
    }
}

#[test]
fn hhd_cross_of_simples() {
    let wb = a2();
    let s1 = obj(&wb, "S1");
    let got = hd_cross(&wb, Side::Hhd, &s1, &s1).unwrap();
    let one = SqrtScalar::one(2);
    let want = elt(
        &wb,
        Algebra::Hhd,
        vec![(one.clone(), vec![Gen::NuP(s1.clone()), Gen::NuM(s1.clone())]), (one, vec![Gen::KcP(cls(&[1, 0]))])],
    );
    assert_eq!(got, want);
}

#[test]
fn drinfeld_abstract_reproduces_cross_relation() {
    let wb = a2();
    let objs = wb.backend().objects_up_to(2).unwrap();
    for m in &objs {
        for n in &objs {
            let p = RelParams::objects(m, n);
            let (al, ar) = relation_instance(&wb, Algebra::D, "2.13", &p).unwrap();
            let (cl, cr) = relation_instance(&wb, Algebra::D, "2.18", &p).unwrap();
            let nf = |x: &FreeElt| wb.normal_form(Algebra::D, x).unwrap();
            assert_eq!(nf(&al), nf(&cr), "{m} {n}");
            assert_eq!(nf(&ar), nf(&cl), "{m} {n}");
        }
    }
}

#[test]
fn expanded_cross_relation_is_rescaled() {
    let wb = a2();
    let objs = wb.backend().objects_up_to(2).unwrap();
    for m in &objs {
        for n in &objs {
            let p = RelParams::objects(m, n);
            let (l, r) = relation_instance(&wb, Algebra::D, "2.18", &p).unwrap();
            let (lr, rr) = relation_instance(&wb, Algebra::D, "2.18r", &p).unwrap();
            let b = wb.backend();
            let s = SqrtScalar::from_rational(crate::hall::aut(b, m).unwrap() * crate::hall::aut(b, n).unwrap(), 2);
            assert_eq!(l.scale(&s), lr);
            assert_eq!(r.scale(&s), rr);
        }
    }
}

#[test]
fn catalog_instances_are_homogeneous_and_hold() {
    let wb = a2();
    let s1 = obj(&wb, "S1");
    let s2 = obj(&wb, "S2");
    let a = cls(&[1, 0]);
    let be = cls(&[0, 1]);
    for alg in [Algebra::Hd, Algebra::Hhd, Algebra::Dhm(0), Algebra::Dh, Algebra::Dhtw, Algebra::Dhce] {
        for (rel, parts) in relation_catalog(alg) {
            for part in 0..parts {
                let p = RelParams { alpha: Some(a.clone()), beta: Some(be.clone()), ..RelParams::objects(&s1, &s2) }
                    .with_i(3)
                    .with_j(0)
                    .with_part(part);
                let (l, r) = relation_instance(&wb, alg, rel, &p).unwrap();
                let dl = l.degree(alg, 2).unwrap();
                assert_eq!(dl, r.degree(alg, 2).unwrap(), "{alg} {rel}");
                assert!(dl.is_some(), "{alg} {rel}");
                assert_eq!(wb.normal_form(alg, &l).unwrap(), wb.normal_form(alg, &r).unwrap(), "{alg} {rel} {part}");
            }
        }
    }
}

#[test]
fn twisted_rules_are_the_twist() {
    let wb = a2();
    let objs = wb.backend().objects_up_to(2).unwrap();
    for m in &objs {
        for n in &objs {
            for (i, j) in [(0, 0), (1, 0), (0, 1), (3, 0), (2, -1), (-2, 1)] {
                let w = vec![Gen::Z(m.clone(), i), Gen::Z(n.clone(), j)];
                let (l, r) = twist_sides(&wb, &w).unwrap();
                assert_eq!(l, r, "{m} {n} {i} {j}");
            }
        }
    }
}

#[test]
fn rejects_foreign_letters() {
    let wb = a2();
    let s1 = obj(&wb, "S1");
    let err = wb.word(Algebra::Hd, vec![Gen::NuP(s1)]).unwrap_err();
    assert!(matches!(err, Error::UnknownSymbol { .. }));
}

#[test]
fn cyclic_words_outside_two_residues_are_flagged() {
    let wb = a2();
    let s1 = obj(&wb, "S1");
    let alg = Algebra::Dhm(4);
    let ok = wb.word(alg, vec![Gen::E(s1.clone(), 0), Gen::E(s1.clone(), 3)]).unwrap();
    assert!(!ok.is_noncanonical());
    let bad = wb.word(alg, vec![Gen::E(s1.clone(), 0), Gen::E(s1.clone(), 2)]).unwrap();
    assert!(bad.is_noncanonical());
}

#[test]
fn tensor_product_is_componentwise() {
    let wb = a2();
    let s1 = obj(&wb, "S1");
    let q = 2;
    let x = wb.gen(Algebra::Hd, Gen::MuP(s1.clone())).unwrap().tensor(&Elt::unit(q, vec![Algebra::Hhd]));
    let y = wb.gen(Algebra::Hd, Gen::KP(cls(&[1, 0]))).unwrap().tensor(&wb.gen(Algebra::Hhd, Gen::NuP(s1.clone())).unwrap());
    let got = wb.mult(&x, &y).unwrap();
    let want = wb
        .word(Algebra::Hd, vec![Gen::MuP(s1.clone()), Gen::KP(cls(&[1, 0]))])
        .unwrap()
        .tensor(&wb.gen(Algebra::Hhd, Gen::NuP(s1)).unwrap());
    assert_eq!(got, want);
}
