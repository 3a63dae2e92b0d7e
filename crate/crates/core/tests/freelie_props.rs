use gkm_core::cartan::validate;
use gkm_core::freelie::{lyndon_words, serre_relators, Alphabet, FreeLie, FreeLieElement, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn lie(rank: usize) -> FreeLie {
    FreeLie::new(Alphabet::new((0..rank).map(|i| format!("g{i}")).collect()))
}

/// Small combinations of Lyndon words of length at most 2 over three letters.
fn element() -> impl Strategy<Value = FreeLieElement> {
    let basis = lyndon_words(3, 2);
    prop::collection::vec((0..basis.len(), -3i64..=3), 1..=3).prop_map(move |terms| {
        FreeLieElement::from_terms(
            terms.into_iter().map(|(k, c)| (basis[k].clone(), BigRational::from_integer(BigInt::from(c)))),
        )
    })
}

fn mobius(n: usize) -> i64 {
    let (mut n, mut sign, mut p) = (n, 1, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

/// Number of Lyndon words of length `n` over `k` letters.
fn witt(k: usize, n: usize) -> i64 {
    let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * (k as i64).pow((n / d) as u32)).sum();
    s / n as i64
}

proptest! {
    #[test]
    fn jacobi(x in element(), y in element(), z in element()) {
        let l = lie(3);
        let b = |a: &FreeLieElement, c: &FreeLieElement| l.bracket(a, c).unwrap();
        let sum = b(&b(&x, &y), &z).add(&b(&b(&y, &z), &x)).add(&b(&b(&z, &x), &y));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn antisymmetry(x in element(), y in element()) {
        let l = lie(3);
        prop_assert_eq!(l.bracket(&x, &y).unwrap(), l.bracket(&y, &x).unwrap().neg());
    }

    #[test]
    fn multidegrees_add(u in 0usize..14, v in 0usize..14) {
        let words: Vec<Word> = lyndon_words(3, 3);
        let l = lie(3);
        let (a, b) = (FreeLieElement::basis(words[u].clone()), FreeLieElement::basis(words[v].clone()));
        let c = l.bracket(&a, &b).unwrap();
        if !c.is_zero() {
            let sum: Vec<u32> = a.multidegree(3).unwrap().iter().zip(b.multidegree(3).unwrap()).map(|(x, y)| x + y).collect();
            prop_assert_eq!(c.multidegree(3), Some(sum));
        }
    }

    #[test]
    fn lyndon_counts_follow_witt(k in 1usize..=4, n in 1usize..=6) {
        let count = lyndon_words(k, n).iter().filter(|w| w.len() == n).count() as i64;
        prop_assert_eq!(count, witt(k, n));
    }

    #[test]
    fn doubled_serre_relators_match_the_double(a in -2i64..=0, b in -2i64..=0, d in prop_oneof![Just(2i64), -1i64..=0]) {
        let rows = vec![vec![2, a], vec![if a == 0 { 0 } else { b.min(-1) }, d]];
        let c = validate(&rows).unwrap();
        let doubled = serre_relators(&c, true);
        let plain = serre_relators(&c.double(), false);
        prop_assert_eq!(doubled.alphabet(), plain.alphabet());
        prop_assert_eq!(doubled.sorted_elements(), plain.sorted_elements());
    }
}
