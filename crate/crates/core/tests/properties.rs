use crfactor::gf::{epsilon_q, legendre_valuation, Field, Rational};
use crfactor::matfq::{rref, Matrix};
use proptest::prelude::*;

fn small_field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just((2, 1)),
        Just((2, 2)),
        Just((2, 3)),
        Just((3, 1)),
        Just((3, 2)),
        Just((5, 1)),
        Just((7, 2))
    ]
    .prop_map(|(p, f)| Field::new(p, f, None).unwrap())
}

proptest! {
    #[test]
    fn frobenius_has_order_dividing_f(field in small_field(), seed in any::<u32>()) {
        let a = seed % field.q();
        let mut x = a;
        for _ in 0..field.f() {
            x = field.frobenius(x);
        }
        prop_assert_eq!(x, a);
        prop_assert_eq!(field.frobenius(a), field.pow(a, field.p() as u64));
    }

    #[test]
    fn rref_is_idempotent(field in small_field(), rows in 1usize..5, cols in 1usize..5, raw in prop::collection::vec(any::<u32>(), 25)) {
        let data = raw.iter().take(rows * cols).map(|x| x % field.q()).collect();
        let m = Matrix::from_flat(rows, cols, data);
        let (r1, rank1, piv1) = rref(&field, &m);
        let (r2, rank2, piv2) = rref(&field, &r1);
        prop_assert_eq!(&r1, &r2);
        prop_assert_eq!(rank1, rank2);
        prop_assert_eq!(piv1, piv2);
        prop_assert_eq!(rank1, m.rank(&field));
    }

    #[test]
    fn epsilon_is_between_one_and_three_halves(pi in 0usize..8, f in 1u64..12) {
        let p = [2u64, 3, 5, 7, 11, 13, 17, 257][pi];
        let e = epsilon_q(p, f);
        prop_assert!(e >= Rational::from_integer(1) && e <= Rational::new(3, 2));
        for g in (1..=f).filter(|g| f % g == 0) {
            prop_assert!(epsilon_q(p, g) <= e);
        }
    }

    #[test]
    fn legendre_matches_factorial_valuation(r in 1u64..300, pi in 0usize..5) {
        let p = [2u64, 3, 5, 7, 17][pi];
        let mut v = 0;
        for k in 1..=r {
            let mut n = k;
            while n % p == 0 {
                n /= p;
                v += 1;
            }
        }
        prop_assert_eq!(legendre_valuation(r, p).value, v);
    }
}
