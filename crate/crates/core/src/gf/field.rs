use std::fmt;

use crate::error::{Error, Result};
use crate::gf::prime_poly;
use crate::gf::valuation::{factorize, is_prime};

/// Largest field order handled (p^f < 2^31).
const MAX_ORDER: u64 = 1 << 31;
/// Log/antilog tables are built for fields up to this order.
const TABLE_LIMIT: u32 = 1 << 16;
/// Addition tables for odd-characteristic extension fields up to this order.
const ADD_TABLE_LIMIT: u32 = 512;

/// Field element: the integer `sum c_i p^i` of its polynomial-basis coefficients.
pub type Elem = u32;

/// The finite field F_{p^f} = F_p[x]/(modulus).
#[derive(Clone)]
pub struct Field {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: bool,
    generator: Elem,
    pow_p: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    add_table: Vec<Elem>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "GF({}^{}; modulus {:?})", self.p, self.f, self.modulus)
    }
}

impl Field {
    /// Builds F_{p^f}. Without a modulus the lexicographically smallest
    /// primitive polynomial (coefficients compared low degree first) is used.
    pub fn new(p: u32, f: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if f == 0 {
            return Err(Error::InvalidModulus("degree must be positive".into()));
        }
        let order = (p as u64).checked_pow(f).filter(|&q| q < MAX_ORDER);
        let q = order.ok_or(Error::FieldTooLarge { p, f })? as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != f as usize + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients, got {}",
                        f + 1,
                        m.len()
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus("coefficient out of range".into()));
                }
                if m[f as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !prime_poly::is_irreducible(&m, p) {
                    return Err(Error::ReduciblePolynomial(m, p));
                }
                m
            }
            None => prime_poly::smallest_primitive(p, f),
        };
        let pow_p = (0..f).map(|i| p.pow(i)).collect();
        let mut field = Field {
            p,
            f,
            q,
            modulus,
            primitive: false,
            generator: 0,
            pow_p,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: Vec::new(),
        };
        let root = field.modulus_root();
        field.primitive = field.raw_order(root) == (q - 1) as u64;
        field.generator = if field.primitive {
            root
        } else {
            (1..q)
                .find(|&g| field.raw_order(g) == (q - 1) as u64)
                .expect("multiplicative group of a finite field is cyclic")
        };
        if q <= TABLE_LIMIT {
            field.build_tables();
        }
        if p != 2 && f > 1 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = field.digit_add(a, b);
                }
            }
            field.add_table = t;
        }
        Ok(field)
    }

    /// Prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn f(&self) -> u32 {
        self.f
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// Whether the root of the modulus generates the multiplicative group.
    pub fn is_primitive(&self) -> bool {
        self.primitive
    }
    /// A fixed generator of the multiplicative group (the modulus root when primitive).
    pub fn primitive_element(&self) -> Elem {
        self.generator
    }

    /// Root of the modulus as a field element: `x` for f > 1, `-c_0` for f = 1.
    pub fn modulus_root(&self) -> Elem {
        if self.f == 1 {
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a < self.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            a ^ b
        } else if self.f == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if !self.add_table.is_empty() {
            self.add_table[(a * self.q + b) as usize]
        } else {
            self.digit_add(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a == 0 {
            a
        } else if self.f == 1 {
            self.p - a
        } else {
            let mut out = 0;
            let mut x = a;
            for i in 0..self.f as usize {
                let c = x % self.p;
                x /= self.p;
                if c != 0 {
                    out += (self.p - c) * self.pow_p[i];
                }
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.f == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if !self.exp.is_empty() {
            let s = self.log[a as usize] + self.log[b as usize];
            return self.exp[s as usize];
        }
        self.raw_mul(a, b)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if !self.exp.is_empty() {
            let n = self.q - 1;
            return Ok(self.exp[((n - self.log[a as usize]) % n) as usize]);
        }
        Ok(self.pow(a, (self.q - 2) as u64))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if !self.exp.is_empty() {
            let n = (self.q - 1) as u64;
            let l = (self.log[a as usize] as u64 * (e % n)) % n;
            return self.exp[l as usize];
        }
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius automorphism x -> x^p.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: Elem) -> u64 {
        assert!(a != 0, "zero has no multiplicative order");
        self.raw_order(a)
    }

    /// Embeds a prime-field integer.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Polynomial-basis coefficients of an element, ascending.
    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        let mut x = a;
        (0..self.f)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Elem {
        coeffs
            .iter()
            .zip(&self.pow_p)
            .map(|(&c, &w)| (c % self.p) * w)
            .sum()
    }

    /// Evaluates a polynomial with field-element coefficients (ascending) at `x`.
    pub fn eval_poly(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    fn digit_add(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y, mut out) = (a, b, 0);
        for i in 0..self.f as usize {
            let c = (x % self.p + y % self.p) % self.p;
            x /= self.p;
            y /= self.p;
            out += c * self.pow_p[i];
        }
        out
    }

    fn raw_mul(&self, a: Elem, b: Elem) -> Elem {
        if self.f == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let f = self.f as usize;
        let p = self.p as u64;
        let ca = self.coefficients(a);
        let cb = self.coefficients(b);
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..f {
                let m = self.modulus[i] as u64;
                prod[k - f + i] = (prod[k - f + i] + (p - c) * m) % p;
            }
        }
        prod[..f]
            .iter()
            .zip(&self.pow_p)
            .map(|(&c, &w)| c as u32 * w)
            .sum()
    }

    fn raw_pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(acc, base);
            }
            base = self.raw_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn raw_order(&self, a: Elem) -> u64 {
        if a == 0 {
            return 0;
        }
        let mut n = (self.q - 1) as u64;
        for (l, _) in factorize((self.q - 1) as u128) {
            while n.is_multiple_of(l) && self.raw_pow(a, n / l) == 1 {
                n /= l;
            }
        }
        n
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0; 2 * n.max(1)];
        let mut log = vec![0; self.q as usize];
        let mut x = 1;
        for i in 0..n {
            exp[i] = x;
            exp[i + n] = x;
            log[x as usize] = i as u32;
            x = self.raw_mul(x, self.generator);
        }
        if n == 1 {
            exp[1] = 1;
        }
        self.exp = exp;
        self.log = log;
    }
}

/// Image of every element of `small` in `big` under a field embedding
/// (requires `small.p == big.p` and `small.f | big.f`).
pub fn embedding(small: &Field, big: &Field) -> Result<Vec<Elem>> {
    if small.p() != big.p() || !big.f().is_multiple_of(small.f()) {
        return Err(Error::FieldMismatch);
    }
    // Find a root of small's modulus in big; it lies in the unique subfield of order small.q.
    let lift: Vec<Elem> = small.modulus().to_vec();
    let root = (0..big.q())
        .find(|&z| big.eval_poly(&lift, z) == 0)
        .ok_or(Error::FieldMismatch)?;
    let powers: Vec<Elem> = (0..small.f()).map(|i| big.pow(root, i as u64)).collect();
    Ok((0..small.q())
        .map(|a| {
            small
                .coefficients(a)
                .iter()
                .zip(&powers)
                .fold(0, |acc, (&c, &w)| big.add(acc, big.mul(c, w)))
        })
        .collect())
}
