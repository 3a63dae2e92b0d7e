use gkm_core::cartan::{validate, CartanMatrix};
use gkm_core::presentation::{graded_dims_exact, quotient_dims_truncated, Presentation};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = CartanMatrix> {
    prop_oneof![
        prop_oneof![Just(2i64), -1i64..=0].prop_map(|d| validate(&[vec![d]]).unwrap()),
        (-2i64..=-1, -2i64..=-1, prop_oneof![Just(2i64), Just(0)])
            .prop_map(|(a, b, d)| validate(&[vec![2, a], vec![b, d]]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn truncated_dims_do_not_increase(c in small_matrix()) {
        let p = Presentation::doubled_quotient(&c);
        let low = quotient_dims_truncated(&p, 4).unwrap();
        let high = quotient_dims_truncated(&p, 5).unwrap();
        for (d, &(n, _)) in &high.entries {
            if d.iter().map(|x| x.unsigned_abs()).sum::<u64>() < 4 {
                prop_assert!(n <= low.dim(d), "{:?}: {} then {}", d, low.dim(d), n);
            }
        }
    }

    #[test]
    fn coarse_grading_agrees_with_exact(c in small_matrix()) {
        let cutoff = 5;
        let exact = graded_dims_exact(&Presentation::positive_part(&c), cutoff).unwrap();
        let fine = Presentation::positive_part(&c);
        let total = vec![vec![1i64]; fine.alphabet().rank()];
        let coarse = Presentation::new(fine.alphabet().clone(), total, fine.relators().to_vec()).unwrap();
        let truncated = quotient_dims_truncated(&coarse, cutoff).unwrap();
        for k in 1..cutoff as i64 {
            let summed: u64 = exact.nonzero().filter(|(d, _)| d.iter().sum::<i64>() == k).map(|(_, n)| n).sum();
            prop_assert_eq!(truncated.dim(&[k]), summed, "total degree {}", k);
        }
    }
}
