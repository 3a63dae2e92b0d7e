use super::*;
use crate::cartan::Quiver;

fn algebra(quiver: Quiver, p: u32, r: u32) -> HallAlgebra {
    HallAlgebra::new(quiver, FiniteField::new(p, r).unwrap())
}

fn kronecker_rep(a: Fq, b: Fq) -> Representation {
    Representation { dims: vec![1, 1], maps: vec![Mat::from_rows(1, 1, vec![a]), Mat::from_rows(1, 1, vec![b])] }
}

fn is_split(h: &HallAlgebra, k: &ClassKey) -> bool {
    h.info(k).unwrap().summands.len() > 1
}

#[test]
fn kronecker_small_classes() {
    let h = algebra(Quiver::kronecker(), 2, 1);
    assert_eq!(h.enumerate_reps(&[1, 1]).unwrap().len(), 4);
    let classes = h.iso_classes(&[1, 1]).unwrap();
    assert_eq!(classes.len(), 4);
    assert_eq!(classes.iter().filter(|(k, _)| is_split(&h, k)).count(), 1);
    assert_eq!(h.iso_classes(&[1, 0]).unwrap().len(), 1);
    assert_eq!(h.iso_classes(&[0, 0]).unwrap(), vec![(h.zero_key(), 1)]);
    assert_eq!(h.enumerate_reps(&[0, 0]).unwrap().len(), 1);
}

#[test]
fn jordan_small_classes() {
    let h = algebra(Quiver::jordan(), 2, 1);
    assert_eq!(h.enumerate_reps(&[2]).unwrap().len(), 4);
    assert_eq!(h.iso_classes(&[2]).unwrap().len(), 2);
}

#[test]
fn orbit_sums_and_stabilizers() {
    let cases = [(Quiver::kronecker(), vec![2, 2], 3, 1), (Quiver::kronecker(), vec![2, 1], 2, 2), (Quiver::jordan(), vec![3], 2, 1), (Quiver::a2(), vec![2, 2], 3, 1), (Quiver::jordan(), vec![2], 2, 2)];
    for (quiver, dims, p, r) in cases {
        let h = algebra(quiver, p, r);
        let classes = h.iso_classes(&dims).unwrap();
        let total: u64 = classes.iter().map(|c| c.1).sum();
        assert_eq!(total, h.enumerate_reps(&dims).unwrap().len() as u64);
        for (k, n) in classes {
            assert_eq!(h.orbit_size(&k).unwrap(), n as u128, "{dims:?} over {p}^{r}");
        }
    }
}

#[test]
fn isomorphism_examples() {
    let h3 = algebra(Quiver::kronecker(), 3, 1);
    let m = kronecker_rep(1, 1);
    assert!(h3.is_isomorphic(&m, &m).unwrap());
    assert!(h3.is_isomorphic(&m, &kronecker_rep(2, 2)).unwrap());
    let h2 = algebra(Quiver::kronecker(), 2, 1);
    assert!(!h2.is_isomorphic(&kronecker_rep(1, 0), &kronecker_rep(0, 1)).unwrap());
}

#[test]
fn decomposition_examples() {
    let h = algebra(Quiver::kronecker(), 2, 1);
    let split = h.decompose(&kronecker_rep(0, 0)).unwrap();
    let mut simples = vec![h.simple_key(0), h.simple_key(1)];
    simples.sort();
    assert_eq!(split, simples);
    assert_eq!(h.decompose(&Representation::simple(h.quiver(), 0)).unwrap(), vec![h.simple_key(0)]);
    assert_eq!(h.decompose(&kronecker_rep(1, 0)).unwrap().len(), 1);
}

#[test]
fn registry_keys_agree_with_catalogue() {
    let cases = [(Quiver::kronecker(), vec![2, 2], 3, 1), (Quiver::jordan(), vec![3], 3, 1), (Quiver::jordan(), vec![2], 2, 2), (Quiver::a2(), vec![2, 1], 5, 1)];
    for (quiver, dims, p, r) in cases {
        let f = FiniteField::new(p, r).unwrap();
        let dense = HallAlgebra::new(quiver.clone(), f.clone());
        let sparse = HallAlgebra::with_dense_limit(quiver.clone(), f, 0);
        let q = dense.q();
        let total = dense.code_space(&dims).unwrap();
        let mut code = 7u64;
        for _ in 0..60 {
            code = (code * 2654435761 + 12345) % total;
            let rep = Representation::decode(&quiver, &dims, q, code);
            if !rep.is_nilpotent(&quiver, dense.field()) {
                continue;
            }
            let k = dense.key_of(&rep).unwrap();
            assert_eq!(sparse.key_of(&rep).unwrap(), k);
            assert_eq!(sparse.automorphisms(&k).unwrap(), dense.automorphisms(&k).unwrap());
        }
    }
}

#[test]
fn simple_products() {
    let h = algebra(Quiver::kronecker(), 2, 1);
    let (sp, sm) = (h.simple(0), h.simple(1));
    let m = h.element(&h.key_of(&kronecker_rep(1, 1)).unwrap());
    assert_eq!(h.multiply(&h.one(), &m).unwrap(), m);
    assert_eq!(h.multiply(&m, &h.one()).unwrap(), m);
    let split = h.key_of(&kronecker_rep(0, 0)).unwrap();
    let ab = h.multiply(&sp, &sm).unwrap();
    assert_eq!(ab.len(), 4);
    assert!(ab.terms().all(|(_, c)| c == 1));
    assert_eq!(ab.coefficient(&split), 1);
    let ba = h.multiply(&sm, &sp).unwrap();
    assert_eq!(ba, h.element(&split));
    let regular = ab.sub(&ba).unwrap();
    assert_eq!(regular.len(), 3);
    assert!(regular.keys().iter().all(|k| h.is_indecomposable(k).unwrap()));
}

#[test]
fn hall_number_examples() {
    let h = algebra(Quiver::kronecker(), 2, 1);
    let (sp, sm) = (h.simple_key(0), h.simple_key(1));
    let split = h.key_of(&kronecker_rep(0, 0)).unwrap();
    let regular = h.key_of(&kronecker_rep(1, 0)).unwrap();
    assert_eq!(h.hall_number(&split, &sp, &sm).unwrap(), 1);
    assert_eq!(h.hall_number(&regular, &sm, &sp).unwrap(), 0);
    assert_eq!(h.hall_number(&regular, &sp, &sm).unwrap(), 1);
    assert_eq!(h.hall_number(&regular, &sp, &sp), Err(HallError::DimensionMismatch));
}

// Two independent routes: subspace counting and extension counting.
#[test]
fn hall_numbers_match_products() {
    let cases = [(Quiver::kronecker(), 2, 1), (Quiver::kronecker(), 3, 1), (Quiver::jordan(), 2, 1), (Quiver::a2(), 3, 1)];
    for (quiver, p, r) in cases {
        let h = algebra(quiver, p, r);
        let bound = if h.quiver().vertices().len() == 1 { vec![2] } else { vec![1, 1] };
        let classes = h.classes_within(&bound).unwrap();
        for m in &classes {
            for n in &classes {
                let product = h.product_basis(m, n).unwrap();
                let dims: Vec<usize> = m.dims().iter().zip(n.dims()).map(|(a, b)| a + b).collect();
                for (e, _) in h.iso_classes(&dims).unwrap() {
                    let expected = product.iter().find(|t| t.0 == e).map_or(0, |t| t.1);
                    assert_eq!(h.hall_number(&e, m, n).unwrap() as i128, expected);
                }
            }
        }
    }
}

#[test]
fn coproduct_examples() {
    let h = algebra(Quiver::kronecker(), 3, 1);
    let (sp, sm, zero) = (h.simple_key(0), h.simple_key(1), h.zero_key());
    let d = h.comultiply(&h.simple(0)).unwrap();
    assert_eq!(d.len(), 2);
    assert_eq!(d.coefficient(&sp, &zero), 1);
    assert_eq!(d.coefficient(&zero, &sp), 1);
    let twice = h.sum_key(&[sp.clone(), sp.clone()]).unwrap();
    let d = h.comultiply(&h.element(&twice)).unwrap();
    assert_eq!(d.len(), 3);
    assert_eq!(d.coefficient(&sp, &sp), 1);
    let both = h.sum_key(&[sp.clone(), sm.clone()]).unwrap();
    let d = h.comultiply(&h.element(&both)).unwrap();
    assert_eq!(d.len(), 4);
    assert_eq!(d.coefficient(&sp, &sm), 1);
    assert_eq!(d.coefficient(&sm, &sp), 1);
}

#[test]
fn counit_and_reduction() {
    let h = algebra(Quiver::kronecker(), 3, 1);
    let sp = h.simple_key(0);
    assert_eq!(h.counit(&h.one()), 1);
    assert_eq!(h.counit(&h.simple(0)), 0);
    let x = HallElement::from_terms(Coefficients::Integers, [(h.zero_key(), 3), (sp.clone(), 2)]).unwrap();
    assert_eq!(h.counit(&x), 3);
    let (r, collapsed) = h.reduce_mod(&h.simple(0).scale(2).unwrap());
    assert!(r.is_zero() && !collapsed);
    let h4 = algebra(Quiver::kronecker(), 2, 2);
    let (r, _) = h4.reduce_mod(&h4.simple(0).scale(7).unwrap());
    assert_eq!(r.coefficient(&h4.simple_key(0)), 1);
    let h2 = algebra(Quiver::kronecker(), 2, 1);
    let (r, collapsed) = h2.reduce_mod(&h2.simple(0).scale(5).unwrap());
    assert!(r.is_zero() && collapsed);
}

#[test]
fn brackets_and_primitives() {
    let h = algebra(Quiver::kronecker(), 3, 1);
    let (sp, sm) = (h.simple(0), h.simple(1));
    let b = h.lie_bracket(&sp, &sm).unwrap();
    assert_eq!(b.len(), 4);
    assert!(b.terms().all(|(k, c)| c == 1 && h.is_indecomposable(k).unwrap()));
    assert!(h.lie_bracket(&b, &b).unwrap().is_zero());
    assert!(h.is_primitive(&b).unwrap());
    assert!(h.is_primitive(&sp).unwrap());
    let twice = h.sum_key(&[h.simple_key(0), h.simple_key(0)]).unwrap();
    assert!(!h.is_primitive(&h.element(&twice)).unwrap());
    let arrowless = algebra(Quiver::arrowless(2), 3, 1);
    assert!(arrowless.lie_bracket(&arrowless.simple(0), &arrowless.simple(1)).unwrap().is_zero());
}

#[test]
fn bialgebra_checks() {
    for (quiver, bound) in [(Quiver::kronecker(), vec![1, 1]), (Quiver::jordan(), vec![2])] {
        let h = algebra(quiver, 3, 1);
        assert!(h.check_bialgebra(&bound).unwrap().passed());
    }
    assert_eq!(algebra(Quiver::jordan(), 2, 1).check_bialgebra(&[1]).unwrap_err(), HallError::Collapsed);
}

// [S][S] = (q+1)[S+S], so Delta([S][S]) and Delta([S])^2 differ by (q-1) S(x)S.
#[test]
fn integer_defect_of_repeated_simple() {
    let h = algebra(Quiver::kronecker(), 3, 1);
    let s = h.simple(0);
    let d = h.bialgebra_defect(&s, &s, None).unwrap();
    assert_eq!(d.len(), 1);
    assert_eq!(d.coefficient(&h.simple_key(0), &h.simple_key(0)), 2);
    assert!(h.bialgebra_defect(&s, &s, Some(2)).unwrap().is_empty());
}

#[test]
fn serre_probe_examples() {
    for quiver in [Quiver::a2(), Quiver::kronecker(), Quiver::arrowless(2)] {
        let h = algebra(quiver, 3, 1);
        let report = h.serre_probe().unwrap();
        assert!(!report.rows.is_empty());
        assert!(report.rows.iter().all(|r| r.verdict == Verdict::Pass));
    }
    let collapsed = algebra(Quiver::a2(), 2, 1).serre_probe().unwrap();
    assert!(collapsed.rows.iter().all(|r| r.verdict == Verdict::Vacuous));
}

#[test]
fn keys_serialize() {
    let h = algebra(Quiver::kronecker(), 2, 2);
    let x = h.lie_bracket(&h.simple(0), &h.simple(1)).unwrap();
    let text = h.serialize(&x);
    assert_eq!(h.parse_element(&text).unwrap(), x);
    for k in x.keys() {
        assert_eq!(h.parse_key(&h.key_hex(&k)).unwrap(), k);
    }
    assert_eq!(h.key_hex(&h.simple_key(0)), "1,0:");
    assert!(matches!(h.parse_element("1\t1,1:0\nx\t0,0:"), Err(HallError::Parse { line: 1, .. })));
    assert!(matches!(h.parse_element("1\t0,0:\nx\t0,0:"), Err(HallError::Parse { line: 2, .. })));
}

#[test]
fn guards_are_errors() {
    let h = algebra(Quiver::kronecker(), 2, 1);
    assert!(matches!(h.iso_classes(&[4, 3]), Err(HallError::SizeGuard(_))));
    let j = algebra(Quiver::jordan(), 2, 1);
    assert_eq!(j.key_of(&Representation { dims: vec![1], maps: vec![Mat::from_rows(1, 1, vec![1])] }), Err(HallError::NotNilpotent));
}
