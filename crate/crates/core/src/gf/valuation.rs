//! Integer p-adic valuations, Legendre's formula and the constant epsilon_q.

use num_bigint::BigUint;
use num_rational::Ratio;

/// Exact rational numbers used in every bound computation.
pub type Rational = Ratio<i64>;

/// The exponent of p in an integer, together with the p-part itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    pub value: u64,
    pub p_part: BigUint,
}

impl Valuation {
    fn new(p: u64, value: u64) -> Self {
        Valuation {
            value,
            p_part: BigUint::from(p).pow(value as u32),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u128) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d as u64, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

/// v_p(n) for n >= 1.
pub fn valuation(mut n: u128, p: u64) -> u32 {
    assert!(n > 0 && p > 1);
    let p = p as u128;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Sum of the base-p digits of r.
pub fn digit_sum(mut r: u64, p: u64) -> u64 {
    let mut s = 0;
    while r > 0 {
        s += r % p;
        r /= p;
    }
    s
}

/// v_p(r!) = (r - s_p(r)) / (p - 1).
pub fn legendre_valuation(r: u64, p: u64) -> Valuation {
    assert!(r >= 1, "legendre_valuation needs r >= 1");
    Valuation::new(p, (r - digit_sum(r, p)) / (p - 1))
}

/// An odd prime p with p - 1 a power of two.
pub fn is_fermat_prime(p: u64) -> bool {
    p > 2 && is_prime(p) && (p - 1).is_power_of_two()
}

/// The constant epsilon_q for q = p^f.
pub fn epsilon_q(p: u64, f: u64) -> Rational {
    if p == 2 && f.is_multiple_of(2) {
        Rational::new(4, 3)
    } else if is_fermat_prime(p) {
        Rational::new(p as i64, p as i64 - 1)
    } else {
        Rational::from_integer(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_small_values() {
        for p in [2, 3, 5, 7] {
            assert_eq!(legendre_valuation(1, p).value, 0);
            assert_eq!(legendre_valuation(p, p).value, 1);
        }
        // 10! = 3628800 = 2^8 * 3^4 * 5^2 * 7
        let v = legendre_valuation(10, 2);
        assert_eq!(v.value, 8);
        assert_eq!(v.p_part, BigUint::from(256u32));
    }

    #[test]
    fn epsilon_table() {
        assert_eq!(epsilon_q(2, 2), Rational::new(4, 3));
        assert_eq!(epsilon_q(3, 1), Rational::new(3, 2));
        assert_eq!(epsilon_q(2, 3), Rational::from_integer(1));
        assert_eq!(epsilon_q(7, 5), Rational::from_integer(1));
        assert_eq!(epsilon_q(17, 2), Rational::new(17, 16));
    }

    #[test]
    fn rational_arithmetic() {
        let r = |a, b| Rational::new(a, b);
        assert_eq!(r(4, 3) * r(6, 1) - r(1, 1), r(7, 1));
        assert_eq!((r(3, 2) * r(2, 1) - r(1, 1)) / r(2, 1), r(1, 1));
        assert_eq!(r(8, 6), r(4, 3));
    }

    #[test]
    fn factorize_orders() {
        assert_eq!(factorize(342), vec![(2, 1), (3, 2), (19, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(161050), vec![(2, 1), (5, 2), (3221, 1)]);
    }
}
