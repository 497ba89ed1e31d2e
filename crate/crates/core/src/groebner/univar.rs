//! Dense univariate polynomials over a prime field, plus just enough
//! extension-field arithmetic to evaluate Jacobians at points living in
//! small extensions.  Used by the radicality test (squarefreeness of
//! eliminants) and by the smoothness probe (root finding along random
//! lines).

use crate::mpoly::mod_inv;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Polynomial in one variable over `F_p`; `c[i]` is the coefficient of
/// `t^i`, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in &mut c {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn constant(p: u64, a: u64) -> Self {
        Self::new(p, vec![a])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    fn mulmod(p: u64, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % p as u128) as u64
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let p = self.p;
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for (i, slot) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            let s = a + b;
            *slot = if s >= p { s - p } else { s };
        }
        FpPoly::new(p, c)
    }

    pub fn neg(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(p, self.c.iter().map(|&a| if a == 0 { 0 } else { p - a }).collect())
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + Self::mulmod(p, a, b)) % p;
            }
        }
        FpPoly::new(p, c)
    }

    pub fn scale(&self, a: u64) -> FpPoly {
        let p = self.p;
        FpPoly::new(p, self.c.iter().map(|&x| Self::mulmod(p, x, a)).collect())
    }

    pub fn monic(&self) -> FpPoly {
        match self.c.last() {
            None => self.clone(),
            Some(&lead) => self.scale(mod_inv(lead, self.p)),
        }
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, m: &FpPoly) -> FpPoly {
        assert!(!m.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let dm = m.c.len() - 1;
        let inv_lead = mod_inv(*m.c.last().unwrap(), p);
        let mut r = self.c.clone();
        while r.len() > dm {
            let lead = *r.last().unwrap();
            if lead != 0 {
                let q = Self::mulmod(p, lead, inv_lead);
                let shift = r.len() - 1 - dm;
                for (i, &mc) in m.c.iter().enumerate() {
                    let sub = Self::mulmod(p, q, mc);
                    let idx = shift + i;
                    r[idx] = (r[idx] + p - sub) % p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
            if r.len() <= dm {
                break;
            }
        }
        FpPoly::new(p, r)
    }

    pub fn div_exact(&self, m: &FpPoly) -> FpPoly {
        // long division, asserting zero remainder
        assert!(!m.is_zero());
        let p = self.p;
        let dm = m.c.len() - 1;
        let inv_lead = mod_inv(*m.c.last().unwrap(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len().saturating_sub(dm)];
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            if lead != 0 {
                let qc = Self::mulmod(p, lead, inv_lead);
                q[shift] = qc;
                for (i, &mc) in m.c.iter().enumerate() {
                    let sub = Self::mulmod(p, qc, mc);
                    r[shift + i] = (r[shift + i] + p - sub) % p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        assert!(r.is_empty(), "division was not exact");
        FpPoly::new(p, q)
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        if self.c.len() <= 1 {
            return FpPoly::zero(p);
        }
        let c = (1..self.c.len()).map(|i| Self::mulmod(p, self.c[i], i as u64 % p)).collect();
        FpPoly::new(p, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for &a in self.c.iter().rev() {
            acc = (Self::mulmod(p, acc, x) + a) % p;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_constant() {
            return true;
        }
        self.gcd(&self.derivative()).is_constant()
    }

    /// `t^(p^k) mod m`, by k rounds of exponentiation by p.
    pub fn frobenius_power(m: &FpPoly, k: usize) -> FpPoly {
        let p = m.p;
        let mut t = FpPoly::new(p, vec![0, 1]).rem(m);
        for _ in 0..k {
            t = Self::powmod(&t, p, m);
        }
        t
    }

    pub fn powmod(base: &FpPoly, mut e: u64, m: &FpPoly) -> FpPoly {
        let p = base.p;
        let mut acc = FpPoly::constant(p, 1);
        let mut b = base.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).rem(m);
            }
            b = b.mul(&b).rem(m);
            e >>= 1;
        }
        acc
    }
}

/// Irreducible factors of degree at most `max_deg` of a nonzero polynomial,
/// found by distinct-degree splitting followed by Cantor-Zassenhaus.
/// Multiplicities are dropped (the squarefree part is factored).  The prime
/// must be odd.
pub fn small_degree_factors(f: &FpPoly, max_deg: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    assert!(f.p % 2 == 1, "odd characteristic required");
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut u = {
        let d = f.derivative();
        if d.is_zero() {
            // f is a p-th power; its radical divides gcd-chain, but with
            // deg(f) < p in all our uses this cannot happen
            f.monic()
        } else {
            f.div_exact(&f.gcd(&d)).monic()
        }
    };
    for k in 1..=max_deg {
        if u.is_constant() {
            break;
        }
        if u.c.len() - 1 < k {
            break;
        }
        // product of irreducible factors of degree dividing k
        let frob = FpPoly::frobenius_power(&u, k);
        let t = FpPoly::new(f.p, vec![0, 1]).rem(&u);
        let w = u.gcd(&frob.sub(&t));
        if !w.is_constant() {
            split_equal_degree(&w, k, rng, &mut out);
            u = u.div_exact(&w);
        }
    }
    out
}

fn split_equal_degree(w: &FpPoly, k: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    let d = w.c.len() - 1;
    if d == k {
        out.push(w.monic());
        return;
    }
    let p = w.p;
    // (p^k - 1) / 2 as u128 exponent; k stays tiny so this fits easily
    let mut q: u128 = 1;
    for _ in 0..k {
        q *= p as u128;
    }
    let e = ((q - 1) / 2) as u64;
    loop {
        let r = FpPoly::new(p, (0..d).map(|_| rng.gen_range(0..p)).collect());
        if r.is_constant() {
            continue;
        }
        let s = FpPoly::powmod(&r, e, w).sub(&FpPoly::constant(p, 1));
        let g = w.gcd(&s);
        if !g.is_constant() && g.c.len() - 1 < d {
            split_equal_degree(&g, k, rng, out);
            split_equal_degree(&w.div_exact(&g), k, rng, out);
            return;
        }
    }
}

/// Element of `F_p[t] / (modulus)`; coefficients of degree below the
/// modulus degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    pub modulus: FpPoly,
}

pub type ExtElem = FpPoly;

impl ExtField {
    pub fn new(modulus: FpPoly) -> Self {
        ExtField { modulus }
    }

    pub fn p(&self) -> u64 {
        self.modulus.p
    }

    pub fn from_fp(&self, a: u64) -> ExtElem {
        FpPoly::constant(self.p(), a)
    }

    /// The class of `t`, a root of the modulus.
    pub fn root(&self) -> ExtElem {
        FpPoly::new(self.p(), vec![0, 1]).rem(&self.modulus)
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.add(b)
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.sub(b)
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.mul(b).rem(&self.modulus)
    }

    pub fn is_zero(&self, a: &ExtElem) -> bool {
        a.is_zero()
    }

    /// Inverse by the extended Euclidean algorithm in `F_p[t]`.
    pub fn inv(&self, a: &ExtElem) -> ExtElem {
        assert!(!a.is_zero(), "inverting zero");
        let p = self.p();
        let (mut r0, mut r1) = (self.modulus.clone(), a.rem(&self.modulus));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::constant(p, 1));
        while !r1.is_zero() {
            // r0 = q r1 + r2
            let q = poly_quot(&r0, &r1);
            let r2 = r0.sub(&q.mul(&r1));
            r0 = r1;
            r1 = r2;
            let t2 = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t2;
        }
        debug_assert!(r0.is_constant() && !r0.is_zero(), "modulus not coprime to element");
        t0.scale(mod_inv(r0.c[0], p)).rem(&self.modulus)
    }
}

fn poly_quot(a: &FpPoly, b: &FpPoly) -> FpPoly {
    let r = a.rem(b);
    a.sub(&r).div_exact(b)
}
