//! Polynomials over a prime field F_p, used to validate and choose field moduli.

use crate::gf::valuation::factorize;

type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
    a
}

fn is_zero(a: &Poly) -> bool {
    a.iter().all(|&c| c == 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn rem(a: &Poly, m: &Poly, p: u64) -> Poly {
    let mut r = trim(a.clone());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm && !is_zero(&r) {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - c) * mc % p) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_mod(a: &Poly, b: &Poly, m: &Poly, p: u64) -> Poly {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&prod, m, p)
}

fn pow_mod(base: &Poly, mut e: u128, m: &Poly, p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !is_zero(&y) {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn sub(a: &Poly, b: &Poly, p: u64) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m: Poly = modulus.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    let n = m.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let frob = |k: usize| pow_mod(&x, (p as u128).pow(k as u32), &m, p64);
    if !is_zero(&sub(&frob(n), &x, p64)) {
        return false;
    }
    for (l, _) in factorize(n as u128) {
        let h = sub(&frob(n / l as usize), &x, p64);
        let g = gcd(&m, &h, p64);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Whether x has multiplicative order p^n - 1 modulo the monic polynomial.
pub fn is_primitive(modulus: &[u32], p: u32) -> bool {
    let m: Poly = modulus.iter().map(|&c| c as u64).collect();
    if m[0] == 0 {
        return false;
    }
    let n = m.len() - 1;
    let order = (p as u128).pow(n as u32) - 1;
    let x: Poly = if n == 1 {
        vec![(p as u64 - m[0]) % p as u64]
    } else {
        vec![0, 1]
    };
    if pow_mod(&x, order, &m, p as u64) != vec![1] {
        return false;
    }
    factorize(order)
        .into_iter()
        .all(|(l, _)| pow_mod(&x, order / l as u128, &m, p as u64) != vec![1])
}

/// Lexicographically smallest primitive monic polynomial of degree `f`,
/// comparing coefficients from the constant term upwards.
pub fn smallest_primitive(p: u32, f: u32) -> Vec<u32> {
    let total = (p as u64).pow(f);
    for code in 0..total {
        // constant term is the most significant digit of `code`
        let mut coeffs = vec![0u32; f as usize + 1];
        let mut x = code;
        for i in (0..f as usize).rev() {
            coeffs[i] = (x % p as u64) as u32;
            x /= p as u64;
        }
        coeffs[f as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        if is_primitive(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[2, 0, 1], 3)); // x^2 - 1
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(!is_irreducible(&[1, 1, 1, 1], 2)); // (x+1)^3
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2)); // (x^2+x+1)^2
    }

    #[test]
    fn smallest_primitive_polynomials() {
        assert_eq!(smallest_primitive(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_primitive(2, 3), vec![1, 0, 1, 1]);
        assert_eq!(smallest_primitive(3, 1), vec![1, 1]);
        assert_eq!(smallest_primitive(2, 1), vec![1, 1]);
        // x^2 + 1 over F_3 is irreducible but not primitive
        assert!(!is_primitive(&[1, 0, 1], 3));
        assert!(is_primitive(&smallest_primitive(3, 2), 3));
    }
}
