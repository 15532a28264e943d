//! Finite fields `GF(q)` for prime-power `q`.
//!
//! Elements are integers `0..q` indexing the polynomial basis: the value
//! `v = sum(c_i p^i)` stands for the polynomial `sum(c_i x^i)` over
//! `GF(p)`. Prime fields reduce to arithmetic mod `p`. Extension fields
//! use the lexicographically smallest monic irreducible polynomial of the
//! right degree, so a given `q` always names the same field.
//!
//! Addition and multiplication are precomputed as full tables; the field
//! axioms are verified exhaustively at construction for `q <= 256`.

use crate::{Error, Result};

const MAX_Q: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf {
    q: usize,
    p: usize,
    degree: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

fn smallest_prime_factor(q: usize) -> usize {
    (2..).find(|d| q.is_multiple_of(*d)).unwrap()
}

/// Coefficients (low to high) of the element `v` over `GF(p)`.
fn coeffs(v: usize, p: usize, degree: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(degree);
    let mut v = v;
    for _ in 0..degree {
        out.push(v % p);
        v /= p;
    }
    out
}

fn poly_divides(divisor: &[usize], poly: &[usize], p: usize) -> bool {
    let mut rem = poly.to_vec();
    while rem.len() >= divisor.len() {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - divisor.len();
            for (i, &dc) in divisor.iter().enumerate() {
                rem[shift + i] = (rem[shift + i] + p * p - dc * lead % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

fn poly_is_irreducible(poly: &[usize], p: usize) -> bool {
    let k = poly.len() - 1;
    for d in 1..=k / 2 {
        for c in 0..p.pow(d as u32) {
            let mut divisor = coeffs(c, p, d);
            divisor.push(1);
            if poly_divides(&divisor, poly, p) {
                return false;
            }
        }
    }
    true
}

fn poly_mul_mod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let mut prod = vec![0usize; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        for (j, &cb) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ca * cb) % p;
        }
    }
    let k = modulus.len() - 1;
    for i in (k..prod.len()).rev() {
        let lead = prod[i];
        if lead != 0 {
            prod[i] = 0;
            for (j, &mc) in modulus.iter().take(k).enumerate() {
                prod[i - k + j] = (prod[i - k + j] + p * p - mc * lead % p) % p;
            }
        }
    }
    prod.truncate(k);
    prod
}

impl Gf {
    pub fn new(q: usize) -> Result<Gf> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::InvalidInput(format!(
                "field size must be in 2..={MAX_Q}, got {q}"
            )));
        }
        let p = smallest_prime_factor(q);
        let mut degree = 0;
        let mut t = q;
        while t.is_multiple_of(p) {
            t /= p;
            degree += 1;
        }
        if t != 1 {
            return Err(Error::InvalidInput(format!(
                "field size must be a prime power, got {q}"
            )));
        }

        let idx = |a: usize, b: usize| a * q + b;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        if degree == 1 {
            for a in 0..q {
                for b in 0..q {
                    add[idx(a, b)] = ((a + b) % q) as u16;
                    mul[idx(a, b)] = ((a * b) % q) as u16;
                }
            }
        } else {
            let modulus = (0..q)
                .map(|c| {
                    let mut poly = coeffs(c, p, degree);
                    poly.push(1);
                    poly
                })
                .find(|poly| poly_is_irreducible(poly, p))
                .expect("an irreducible polynomial of every degree exists");
            let encode = |poly: &[usize]| -> u16 {
                poly.iter().rev().fold(0usize, |acc, &c| acc * p + c) as u16
            };
            for a in 0..q {
                let pa = coeffs(a, p, degree);
                for b in 0..q {
                    let pb = coeffs(b, p, degree);
                    let sum: Vec<usize> =
                        pa.iter().zip(&pb).map(|(&x, &y)| (x + y) % p).collect();
                    add[idx(a, b)] = encode(&sum);
                    mul[idx(a, b)] = encode(&poly_mul_mod(&pa, &pb, &modulus, p));
                }
            }
        }

        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[idx(a, b)] == 0).expect("negation") as u16)
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (0..q).find(|&b| mul[idx(a, b)] == 1).expect("inverse") as u16
                }
            })
            .collect();

        let field = Gf { q, p, degree, add, mul, neg, inv };
        if q <= 256 {
            field.check_axioms();
        }
        Ok(field)
    }

    fn check_axioms(&self) {
        let q = self.q;
        for a in 0..q as u16 {
            assert_eq!(self.add(a, 0), a);
            assert_eq!(self.mul(a, 1), a);
            assert_eq!(self.mul(a, 0), 0);
            assert_eq!(self.add(a, self.neg(a)), 0);
            if a != 0 {
                assert_eq!(self.mul(a, self.inv(a)), 1);
            }
            for b in 0..q as u16 {
                assert_eq!(self.add(a, b), self.add(b, a));
                assert_eq!(self.mul(a, b), self.mul(b, a));
                for c in 0..q as u16 {
                    assert_eq!(self.add(self.add(a, b), c), self.add(a, self.add(b, c)));
                    assert_eq!(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c)));
                    assert_eq!(
                        self.mul(a, self.add(b, c)),
                        self.add(self.mul(a, b), self.mul(a, c))
                    );
                }
            }
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_prime(&self) -> bool {
        self.degree == 1
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u16) -> u16 {
        debug_assert_ne!(a, 0, "zero has no inverse");
        self.inv[a as usize]
    }

    pub fn dot(&self, x: &[u16], y: &[u16]) -> u16 {
        debug_assert_eq!(x.len(), y.len());
        x.iter()
            .zip(y)
            .fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }
}
