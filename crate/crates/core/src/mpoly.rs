//! Sparse multigraded polynomial arithmetic with exact coefficients.
//!
//! Polynomials live in rings with a fixed coefficient field (the rationals
//! or a prime field), variables organized in blocks (one block per
//! projective factor), and a per-block grading.  Terms are kept sorted in
//! graded reverse lexicographic order with respect to the fixed variable
//! order, so leading terms are ready for the Groebner engine.  Affine rings
//! (products of chart coordinates) drop the block grading.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MPolyError {
    #[error("polynomials belong to different rings")]
    MixedRings,
    #[error("coefficient fields do not match")]
    MixedFields,
    #[error("chart must pick exactly one variable per block")]
    BadChart,
    #[error("denominator of {0} is divisible by the prime")]
    BadReduction(BigRational),
    #[error("matrix is not rectangular")]
    NotRectangular,
    #[error("operation requires a 3x3 matrix, found {rows}x{cols}")]
    NotThreeByThree { rows: usize, cols: usize },
    #[error("minor size {k} exceeds matrix dimensions {rows}x{cols}")]
    MinorTooLarge { k: usize, rows: usize, cols: usize },
    #[error("polynomial involves variables outside the kept blocks")]
    BlockProjection,
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("internal identity check failed: {0}")]
    IdentityFailure(String),
}

/// Coefficient field descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Q,
    Fp(u64),
}

/// An element of the coefficient field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coef {
    Q(BigRational),
    Fp(u64),
}

impl Field {
    pub fn zero(&self) -> Coef {
        match self {
            Field::Q => Coef::Q(BigRational::zero()),
            Field::Fp(_) => Coef::Fp(0),
        }
    }

    pub fn one(&self) -> Coef {
        match self {
            Field::Q => Coef::Q(BigRational::one()),
            Field::Fp(_) => Coef::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Coef {
        match self {
            Field::Q => Coef::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => {
                let p = *p as i128;
                Coef::Fp((((n as i128 % p) + p) % p) as u64)
            }
        }
    }

    pub fn is_zero(&self, a: &Coef) -> bool {
        match a {
            Coef::Q(x) => x.is_zero(),
            Coef::Fp(x) => *x == 0,
        }
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (Field::Q, Coef::Q(x), Coef::Q(y)) => Coef::Q(x + y),
            (Field::Fp(p), Coef::Fp(x), Coef::Fp(y)) => {
                let s = x + y;
                Coef::Fp(if s >= *p { s - p } else { s })
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coef) -> Coef {
        match (self, a) {
            (Field::Q, Coef::Q(x)) => Coef::Q(-x),
            (Field::Fp(p), Coef::Fp(x)) => Coef::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        match (self, a, b) {
            (Field::Q, Coef::Q(x), Coef::Q(y)) => Coef::Q(x * y),
            (Field::Fp(p), Coef::Fp(x), Coef::Fp(y)) => {
                Coef::Fp((*x as u128 * *y as u128 % *p as u128) as u64)
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn inv(&self, a: &Coef) -> Coef {
        match (self, a) {
            (Field::Q, Coef::Q(x)) => {
                assert!(!x.is_zero(), "division by zero");
                Coef::Q(x.recip())
            }
            (Field::Fp(p), Coef::Fp(x)) => Coef::Fp(mod_inv(*x, *p)),
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn div(&self, a: &Coef, b: &Coef) -> Coef {
        self.mul(a, &self.inv(b))
    }
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "division by zero mod {p}");
    // extended Euclid
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "{a} is not invertible mod {p}");
    (((t0 % p as i128) + p as i128) % p as i128) as u64
}

/// Graded reverse lexicographic comparison with respect to the fixed
/// variable order: higher total degree wins; on ties the monomial whose
/// rightmost differing exponent is smaller is the larger one.
pub fn grevlex_cmp(a: &[u16], b: &[u16]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let da: u32 = a.iter().map(|&x| x as u32).sum();
    let db: u32 = b.iter().map(|&x| x as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// A polynomial ring: coefficient field, ordered variable blocks, and a
/// per-block grading (dropped for affine rings).
#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: Field,
    blocks: Vec<(String, Vec<String>)>,
    affine: bool,
}

impl PolyRing {
    pub fn multigraded(field: Field, blocks: &[(&str, &[&str])]) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            field,
            blocks: blocks
                .iter()
                .map(|(n, vs)| (n.to_string(), vs.iter().map(|v| v.to_string()).collect()))
                .collect(),
            affine: false,
        })
    }

    pub fn affine(field: Field, vars: &[&str]) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            field,
            blocks: vec![("affine".to_string(), vars.iter().map(|v| v.to_string()).collect())],
            affine: true,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_affine(&self) -> bool {
        self.affine
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[(String, Vec<String>)] {
        &self.blocks
    }

    pub fn num_vars(&self) -> usize {
        self.blocks.iter().map(|(_, v)| v.len()).sum()
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.blocks.iter().flat_map(|(_, v)| v.iter().map(|s| s.as_str())).collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names().iter().position(|v| *v == name)
    }

    /// Block index of each flat variable index.
    pub fn block_of_var(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_vars());
        for (b, (_, vs)) in self.blocks.iter().enumerate() {
            out.extend(std::iter::repeat(b).take(vs.len()));
        }
        out
    }

    /// The same ring over the prime field `p`.
    pub fn with_prime(self: &Arc<Self>, p: u64) -> Arc<PolyRing> {
        Arc::new(PolyRing { field: Field::Fp(p), blocks: self.blocks.clone(), affine: self.affine })
    }

    /// Affine chart ring: chart variables (one per block) are set to one and
    /// removed; all other variables are retained, and the grading dropped.
    pub fn chart_ring(self: &Arc<Self>, chart: &[usize]) -> Result<Arc<PolyRing>, MPolyError> {
        self.validate_chart(chart)?;
        let names = self.var_names();
        let kept: Vec<&str> = (0..self.num_vars()).filter(|i| !chart.contains(i)).map(|i| names[i]).collect();
        Ok(PolyRing::affine(self.field, &kept))
    }

    fn validate_chart(&self, chart: &[usize]) -> Result<(), MPolyError> {
        if chart.len() != self.blocks.len() {
            return Err(MPolyError::BadChart);
        }
        let blocks = self.block_of_var();
        for (b, &v) in chart.iter().enumerate() {
            if v >= self.num_vars() || blocks[v] != b {
                return Err(MPolyError::BadChart);
            }
        }
        Ok(())
    }

    pub fn zero(self: &Arc<Self>) -> MPoly {
        MPoly { ring: Arc::clone(self), terms: Vec::new() }
    }

    pub fn one(self: &Arc<Self>) -> MPoly {
        self.constant(self.field.one())
    }

    pub fn constant(self: &Arc<Self>, c: Coef) -> MPoly {
        let mut terms = Vec::new();
        if !self.field.is_zero(&c) {
            terms.push((vec![0u16; self.num_vars()], c));
        }
        MPoly { ring: Arc::clone(self), terms }
    }

    pub fn var(self: &Arc<Self>, i: usize) -> MPoly {
        assert!(i < self.num_vars());
        let mut e = vec![0u16; self.num_vars()];
        e[i] = 1;
        MPoly { ring: Arc::clone(self), terms: vec![(e, self.field.one())] }
    }

    pub fn var_named(self: &Arc<Self>, name: &str) -> Option<MPoly> {
        self.var_index(name).map(|i| self.var(i))
    }

    pub fn from_terms<I>(self: &Arc<Self>, iter: I) -> MPoly
    where
        I: IntoIterator<Item = (Vec<u16>, Coef)>,
    {
        let mut terms: Vec<(Vec<u16>, Coef)> = Vec::new();
        for (e, c) in iter {
            debug_assert_eq!(e.len(), self.num_vars());
            terms.push((e, c));
        }
        terms.sort_by(|x, y| grevlex_cmp(&y.0, &x.0));
        // merge equal monomials
        let mut out: Vec<(Vec<u16>, Coef)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == e {
                    last.1 = self.field.add(&last.1, &c);
                    continue;
                }
            }
            out.push((e, c));
        }
        out.retain(|(_, c)| !self.field.is_zero(c));
        MPoly { ring: Arc::clone(self), terms: out }
    }
}

/// Result of per-block degree inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(Vec<u16>),
    Mixed,
}

/// A sparse polynomial with terms sorted descending in grevlex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    ring: Arc<PolyRing>,
    terms: Vec<(Vec<u16>, Coef)>,
}

impl MPoly {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(Vec<u16>, Coef)] {
        &self.terms
    }

    pub fn leading(&self) -> Option<(&Vec<u16>, &Coef)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(e, _)| e.iter().map(|&x| x as u32).sum())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    /// Per-block multidegree.
    pub fn multidegree(&self) -> Degree {
        if self.terms.is_empty() {
            return Degree::Zero;
        }
        let blocks = self.ring.block_of_var();
        let k = self.ring.num_blocks();
        let deg_of = |e: &[u16]| {
            let mut d = vec![0u16; k];
            for (i, &x) in e.iter().enumerate() {
                d[blocks[i]] += x;
            }
            d
        };
        let first = deg_of(&self.terms[0].0);
        for (e, _) in &self.terms[1..] {
            if deg_of(e) != first {
                return Degree::Mixed;
            }
        }
        Degree::Homogeneous(first)
    }

    pub fn same_ring(&self, other: &MPoly) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert!(self.same_ring(other), "polynomials from different rings");
        let field = self.ring.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match grevlex_cmp(&self.terms[i].0, &other.terms[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = field.add(&self.terms[i].1, &other.terms[j].1);
                    if !field.is_zero(&c) {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        MPoly { ring: Arc::clone(&self.ring), terms: out }
    }

    pub fn neg(&self) -> MPoly {
        let field = self.ring.field;
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), field.neg(c))).collect();
        MPoly { ring: Arc::clone(&self.ring), terms }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert!(self.same_ring(other), "polynomials from different rings");
        let field = self.ring.field;
        let mut acc: std::collections::BTreeMap<Vec<u16>, Coef> = std::collections::BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = field.mul(c1, c2);
                match acc.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let s = field.add(o.get(), &c);
                        if field.is_zero(&s) {
                            o.remove();
                        } else {
                            *o.get_mut() = s;
                        }
                    }
                }
            }
        }
        self.ring.from_terms(acc)
    }

    /// Multiply by a single term.
    pub fn mul_term(&self, exps: &[u16], coef: &Coef) -> MPoly {
        let field = self.ring.field;
        if field.is_zero(coef) {
            return self.ring.zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), field.mul(c, coef)))
            .collect();
        MPoly { ring: Arc::clone(&self.ring), terms }
    }

    pub fn scale(&self, c: &Coef) -> MPoly {
        self.mul_term(&vec![0u16; self.ring.num_vars()], c)
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = self.ring.one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> MPoly {
        let field = self.ring.field;
        let terms = self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[var] -= 1;
            (e2, field.mul(c, &field.from_i64(e[var] as i64)))
        });
        self.ring.from_terms(terms)
    }

    /// Substitute constants for a subset of variables, producing a
    /// polynomial in a target ring whose variables are the retained ones (in
    /// order).  `images[i]` is `None` to retain variable `i`, or a constant.
    pub fn map_vars(&self, target: &Arc<PolyRing>, images: &[Option<Coef>]) -> MPoly {
        assert_eq!(images.len(), self.ring.num_vars());
        let field = self.ring.field;
        let kept: Vec<usize> = (0..images.len()).filter(|&i| images[i].is_none()).collect();
        assert_eq!(kept.len(), target.num_vars(), "target ring has wrong variable count");
        let mut out: Vec<(Vec<u16>, Coef)> = Vec::new();
        'term: for (e, c) in &self.terms {
            let mut coef = c.clone();
            for (i, img) in images.iter().enumerate() {
                if let Some(v) = img {
                    if e[i] > 0 {
                        if field.is_zero(v) {
                            continue 'term;
                        }
                        let mut pw = field.one();
                        for _ in 0..e[i] {
                            pw = field.mul(&pw, v);
                        }
                        coef = field.mul(&coef, &pw);
                    }
                }
            }
            let e2: Vec<u16> = kept.iter().map(|&i| e[i]).collect();
            out.push((e2, coef));
        }
        target.from_terms(out)
    }

    /// Set the chart variables (one per block) to one, keeping every other
    /// variable; drops the block grading.
    pub fn dehomogenize(&self, chart: &[usize], target: &Arc<PolyRing>) -> Result<MPoly, MPolyError> {
        self.ring.validate_chart(chart)?;
        let field = self.ring.field;
        let images: Vec<Option<Coef>> = (0..self.ring.num_vars())
            .map(|i| if chart.contains(&i) { Some(field.one()) } else { None })
            .collect();
        Ok(self.map_vars(target, &images))
    }

    /// Full evaluation at a point.
    pub fn eval(&self, point: &[Coef]) -> Coef {
        assert_eq!(point.len(), self.ring.num_vars());
        let field = self.ring.field;
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                for _ in 0..x {
                    t = field.mul(&t, &point[i]);
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    /// Reduce a rational-coefficient polynomial modulo `p`; every
    /// denominator must be a unit mod `p`.
    pub fn reduce_mod(&self, target: &Arc<PolyRing>) -> Result<MPoly, MPolyError> {
        let p = match target.field {
            Field::Fp(p) => p,
            Field::Q => return Err(MPolyError::MixedFields),
        };
        let pb = BigInt::from(p);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let q = match c {
                Coef::Q(q) => q,
                Coef::Fp(_) => return Err(MPolyError::MixedFields),
            };
            let den = ((q.denom() % &pb) + &pb) % &pb;
            if den.is_zero() {
                return Err(MPolyError::BadReduction(q.clone()));
            }
            let num = ((q.numer() % &pb) + &pb) % &pb;
            let c = num.to_u64().unwrap() as u128 * mod_inv(den.to_u64().unwrap(), p) as u128;
            terms.push((e.clone(), Coef::Fp((c % p as u128) as u64)));
        }
        Ok(target.from_terms(terms))
    }

    /// Reinterpret in a ring keeping only the given blocks; the polynomial
    /// must not involve variables of the dropped blocks.
    pub fn project_blocks(
        &self,
        target: &Arc<PolyRing>,
        keep: &[usize],
    ) -> Result<MPoly, MPolyError> {
        let blocks = self.ring.block_of_var();
        let kept_vars: Vec<usize> =
            (0..self.ring.num_vars()).filter(|&i| keep.contains(&blocks[i])).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            for (i, &x) in e.iter().enumerate() {
                if x > 0 && !keep.contains(&blocks[i]) {
                    return Err(MPolyError::BlockProjection);
                }
            }
            let e2: Vec<u16> = kept_vars.iter().map(|&i| e[i]).collect();
            terms.push((e2, c.clone()));
        }
        Ok(target.from_terms(terms))
    }

    /// Canonical text form: grevlex-descending terms, explicit `^`, `*`
    /// between factors.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.var_names();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = match c {
                Coef::Q(q) => (q.is_negative(), format!("{}", q.abs())),
                Coef::Fp(x) => (false, format!("{x}")),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != "1" || e.iter().all(|&x| x == 0) {
                factors.push(mag);
            }
            for (v, &x) in names.iter().zip(e) {
                match x {
                    0 => {}
                    1 => factors.push((*v).to_string()),
                    _ => factors.push(format!("{v}^{x}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Parsing of the canonical text form.

impl PolyRing {
    /// Parse the canonical text form produced by `Display`.
    pub fn parse_poly(self: &Arc<Self>, input: &str) -> Result<MPoly, MPolyError> {
        let mut p = PolyParser { ring: self, input: input.as_bytes(), pos: 0 };
        p.parse()
    }
}

struct PolyParser<'a> {
    ring: &'a Arc<PolyRing>,
    input: &'a [u8],
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, MPolyError> {
        Err(MPolyError::Parse { at: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn parse(&mut self) -> Result<MPoly, MPolyError> {
        let mut acc = self.ring.zero();
        let mut sign = 1i64;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let term = self.parse_term(sign)?;
            acc = acc.add(&term);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                None => break,
                Some(c) => return self.err(&format!("unexpected character '{}'", c as char)),
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self, sign: i64) -> Result<MPoly, MPolyError> {
        let field = self.ring.field;
        let mut coef = field.from_i64(sign);
        let mut exps = vec![0u16; self.ring.num_vars()];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.parse_uint()?;
                    let mut q = field.from_i64(0);
                    // n may exceed i64 in principle; accumulate digits
                    for d in n.bytes() {
                        q = field.add(
                            &field.mul(&q, &field.from_i64(10)),
                            &field.from_i64((d - b'0') as i64),
                        );
                    }
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let d = self.parse_uint()?;
                        let mut den = field.from_i64(0);
                        for b in d.bytes() {
                            den = field.add(
                                &field.mul(&den, &field.from_i64(10)),
                                &field.from_i64((b - b'0') as i64),
                            );
                        }
                        if field.is_zero(&den) {
                            return self.err("zero denominator");
                        }
                        q = field.div(&q, &den);
                    }
                    coef = field.mul(&coef, &q);
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.parse_ident()?;
                    let Some(idx) = self.ring.var_index(&name) else {
                        return self.err(&format!("unknown variable '{name}'"));
                    };
                    let mut e = 1u16;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let n = self.parse_uint()?;
                        e = n
                            .parse::<u16>()
                            .map_err(|_| MPolyError::Parse { at: self.pos, msg: "exponent too large".into() })?;
                    }
                    exps[idx] += e;
                }
                _ => return self.err("expected a coefficient or variable"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
                continue;
            }
            break;
        }
        Ok(self.ring.from_terms([(exps, coef)]))
    }

    fn parse_uint(&mut self) -> Result<String, MPolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        Ok(std::str::from_utf8(&self.input[start..self.pos]).unwrap().to_string())
    }

    fn parse_ident(&mut self) -> Result<String, MPolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len()
            && (self.input[self.pos].is_ascii_alphanumeric() || self.input[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an identifier");
        }
        Ok(std::str::from_utf8(&self.input[start..self.pos]).unwrap().to_string())
    }
}

// ---------------------------------------------------------------------------
// Seeded sampling of dense "general" forms.

/// Enumerate the exponent tuples of total degree `d` in `n` variables, in a
/// fixed (lexicographic descending) order.
fn exponents_of_degree(n: usize, d: u16) -> Vec<Vec<u16>> {
    fn rec(n: usize, d: u16, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if n == 1 {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=d).rev() {
            cur.push(e);
            rec(n - 1, d - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Dense-support form of the given multidegree with seeded coefficients:
/// nonzero integers in `[-9, 9]` over the rationals, uniform nonzero
/// elements over a prime field.  The same seed always yields the same
/// polynomial.
pub fn random_form(ring: &Arc<PolyRing>, multidegree: &[u16], seed: u64) -> MPoly {
    assert_eq!(multidegree.len(), ring.num_blocks(), "one degree per block");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_block: Vec<Vec<Vec<u16>>> = ring
        .blocks
        .iter()
        .zip(multidegree)
        .map(|((_, vars), &d)| exponents_of_degree(vars.len(), d))
        .collect();
    // cartesian product over blocks, in fixed order
    let mut monomials: Vec<Vec<u16>> = vec![Vec::new()];
    for block in &per_block {
        let mut next = Vec::with_capacity(monomials.len() * block.len());
        for m in &monomials {
            for e in block {
                let mut m2 = m.clone();
                m2.extend_from_slice(e);
                next.push(m2);
            }
        }
        monomials = next;
    }
    let field = ring.field;
    let terms: Vec<(Vec<u16>, Coef)> = monomials
        .into_iter()
        .map(|m| {
            let c = match field {
                Field::Q => loop {
                    let n = rng.gen_range(-9i64..=9);
                    if n != 0 {
                        break field.from_i64(n);
                    }
                },
                Field::Fp(p) => Coef::Fp(rng.gen_range(1..p)),
            };
            (m, c)
        })
        .collect();
    ring.from_terms(terms)
}

// ---------------------------------------------------------------------------
// Matrices of polynomials.

/// A rectangular matrix of polynomials over one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Arc<PolyRing>,
    rows: usize,
    cols: usize,
    entries: Vec<MPoly>,
}

impl PolyMatrix {
    pub fn new(ring: &Arc<PolyRing>, rows: Vec<Vec<MPoly>>) -> Result<PolyMatrix, MPolyError> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(MPolyError::NotRectangular);
        }
        Ok(PolyMatrix { ring: Arc::clone(ring), rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &MPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn map<F: FnMut(&MPoly) -> MPoly>(&self, mut f: F) -> PolyMatrix {
        PolyMatrix {
            ring: f(&self.entries[0]).ring().clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| f(e)).collect(),
        }
    }

    /// All `k x k` minors, ordered lexicographically by (row set, column
    /// set); each minor is the plain determinant of the submatrix.
    pub fn minors(&self, k: usize) -> Result<Vec<MPoly>, MPolyError> {
        if k > self.rows || k > self.cols {
            return Err(MPolyError::MinorTooLarge { k, rows: self.rows, cols: self.cols });
        }
        let row_sets = subsets(self.rows, k);
        let col_sets = subsets(self.cols, k);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            for cs in &col_sets {
                out.push(self.submatrix_det(rs, cs));
            }
        }
        Ok(out)
    }

    fn submatrix_det(&self, rs: &[usize], cs: &[usize]) -> MPoly {
        let n = rs.len();
        if n == 0 {
            return self.ring.one();
        }
        if n == 1 {
            return self.entry(rs[0], cs[0]).clone();
        }
        // Laplace along the first listed row
        let mut det = self.ring.zero();
        for (j, &c) in cs.iter().enumerate() {
            let e = self.entry(rs[0], c);
            if e.is_zero() {
                continue;
            }
            let rest_cols: Vec<usize> =
                cs.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect();
            let sub = self.submatrix_det(&rs[1..], &rest_cols);
            let term = e.mul(&sub);
            det = if j % 2 == 0 { det.add(&term) } else { det.sub(&term) };
        }
        det
    }

    pub fn det(&self) -> Result<MPoly, MPolyError> {
        if self.rows != self.cols {
            return Err(MPolyError::NotRectangular);
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.submatrix_det(&idx, &idx))
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant of a 3x3 matrix together with its cofactor expansion along
/// the third row: returns `F` and the pairs (signed third-row entry, 2x2
/// minor of the first two rows) whose products sum to `F`.  The identity is
/// checked exactly before returning, so the expansion is a membership
/// certificate for `F` in the ideal of those minors.
pub fn laplace_certificate(m: &PolyMatrix) -> Result<(MPoly, Vec<(MPoly, MPoly)>), MPolyError> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(MPolyError::NotThreeByThree { rows: m.rows(), cols: m.cols() });
    }
    let det = m.det()?;
    // 2x2 minors of the first two rows, by complementary column:
    // columns {1,2}, {0,2}, {0,1} pair with entries (2,0), (2,1), (2,2)
    let minor = |c1: usize, c2: usize| m.submatrix_det(&[0, 1], &[c1, c2]);
    let pairs = vec![
        (m.entry(2, 0).clone(), minor(1, 2)),
        (m.entry(2, 1).neg(), minor(0, 2)),
        (m.entry(2, 2).clone(), minor(0, 1)),
    ];
    let mut sum = m.ring().zero();
    for (cof, min) in &pairs {
        sum = sum.add(&cof.mul(min));
    }
    if sum != det {
        return Err(MPolyError::IdentityFailure("Laplace expansion".into()));
    }
    Ok((det, pairs))
}

/// Matrix of partial derivatives: rows are the polynomials, columns the
/// selected variables.
pub fn jacobian(polys: &[MPoly], vars: &[usize]) -> Result<PolyMatrix, MPolyError> {
    let ring = polys.first().map(|p| p.ring().clone()).expect("jacobian of empty system");
    let rows: Vec<Vec<MPoly>> =
        polys.iter().map(|p| vars.iter().map(|&v| p.derivative(v)).collect()).collect();
    PolyMatrix::new(&ring, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri_ring(field: Field) -> Arc<PolyRing> {
        PolyRing::multigraded(
            field,
            &[("s", &["S", "T"]), ("x", &["X0", "X1", "X2"]), ("y", &["Y0", "Y1", "Y2"])],
        )
    }

    #[test]
    fn grevlex_order() {
        // x^2 > xy > y^2 > xz > yz > z^2 in three variables
        let monos: Vec<Vec<u16>> = vec![
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![0, 2, 0],
            vec![1, 0, 1],
            vec![0, 1, 1],
            vec![0, 0, 2],
        ];
        for w in monos.windows(2) {
            assert_eq!(grevlex_cmp(&w[0], &w[1]), std::cmp::Ordering::Greater);
        }
        assert_eq!(grevlex_cmp(&[1, 0, 0], &[0, 2, 0]), std::cmp::Ordering::Less);
    }

    #[test]
    fn arithmetic_randomized() {
        for field in [Field::Q, Field::Fp(101)] {
            let r = tri_ring(field);
            for seed in 0..10u64 {
                let f = random_form(&r, &[1, 2, 0], seed);
                let g = random_form(&r, &[1, 2, 0], seed + 100);
                assert_eq!(f.add(&g).sub(&g), f);
                assert_eq!(f.mul(&g), g.mul(&f));
                let h = random_form(&r, &[0, 0, 2], seed + 200);
                assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
            }
        }
    }

    #[test]
    fn random_form_examples() {
        let r = tri_ring(Field::Fp(101));
        let c = random_form(&r, &[0, 0, 0], 7);
        assert!(c.is_constant() && !c.is_zero());

        let f = random_form(&r, &[1, 2, 0], 42);
        assert_eq!(f.num_terms(), 12); // C(2,1) * C(4,2) monomials, all nonzero
        assert_eq!(f.multidegree(), Degree::Homogeneous(vec![1, 2, 0]));

        assert_eq!(random_form(&r, &[1, 2, 0], 42), f);
        assert_ne!(random_form(&r, &[1, 2, 0], 43), f);

        let rq = tri_ring(Field::Q);
        let fq = random_form(&rq, &[1, 2, 0], 42);
        assert_eq!(fq.num_terms(), 12);
    }

    #[test]
    fn minors_examples() {
        let r = PolyRing::affine(Field::Q, &["a", "b", "c", "d", "e", "f"]);
        let v = |i: usize| r.var(i);
        let m = PolyMatrix::new(&r, vec![vec![v(0), v(1), v(2)], vec![v(3), v(4), v(5)]]).unwrap();
        let minors = m.minors(2).unwrap();
        assert_eq!(minors.len(), 3);
        assert_eq!(minors[0], v(0).mul(&v(4)).sub(&v(1).mul(&v(3))));
        assert_eq!(minors[1], v(0).mul(&v(5)).sub(&v(2).mul(&v(3))));
        assert_eq!(minors[2], v(1).mul(&v(5)).sub(&v(2).mul(&v(4))));

        let firsts = m.minors(1).unwrap();
        assert_eq!(firsts.len(), 6);
        assert_eq!(firsts[0], v(0));

        // degree bookkeeping of the pencil matrix rows
        let rt = tri_ring(Field::Q);
        let row1: Vec<MPoly> = (0..3).map(|i| random_form(&rt, &[1, 2, 0], i)).collect();
        let row2: Vec<MPoly> = (0..3).map(|i| random_form(&rt, &[1, 0, 2], i + 10)).collect();
        let m = PolyMatrix::new(&rt, vec![row1, row2]).unwrap();
        for minor in m.minors(2).unwrap() {
            assert_eq!(minor.multidegree(), Degree::Homogeneous(vec![2, 2, 2]));
        }
    }

    /// Leibniz-sum determinant, used as an independent oracle.
    fn leibniz_det3(m: &PolyMatrix) -> MPoly {
        let perms: [([usize; 3], bool); 6] = [
            ([0, 1, 2], true),
            ([1, 2, 0], true),
            ([2, 0, 1], true),
            ([0, 2, 1], false),
            ([1, 0, 2], false),
            ([2, 1, 0], false),
        ];
        let mut det = m.ring().zero();
        for (p, pos) in perms {
            let t = m.entry(0, p[0]).mul(m.entry(1, p[1])).mul(m.entry(2, p[2]));
            det = if pos { det.add(&t) } else { det.sub(&t) };
        }
        det
    }

    #[test]
    fn laplace_certificate_examples() {
        // nine independent variables
        let names: Vec<String> = (0..9).map(|i| format!("m{i}")).collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let r = PolyRing::affine(Field::Q, &name_refs);
        let rows: Vec<Vec<MPoly>> =
            (0..3).map(|i| (0..3).map(|j| r.var(3 * i + j)).collect()).collect();
        let m = PolyMatrix::new(&r, rows).unwrap();
        let (det, pairs) = laplace_certificate(&m).unwrap();
        assert_eq!(det, leibniz_det3(&m));
        assert_eq!(pairs.len(), 3);

        // zero third row
        let rows = vec![
            vec![r.var(0), r.var(1), r.var(2)],
            vec![r.var(3), r.var(4), r.var(5)],
            vec![r.zero(), r.zero(), r.zero()],
        ];
        let m = PolyMatrix::new(&r, rows).unwrap();
        let (det, pairs) = laplace_certificate(&m).unwrap();
        assert!(det.is_zero());
        assert!(pairs.iter().all(|(c, _)| c.is_zero()));
    }

    #[test]
    fn det_cofactor_vs_leibniz_randomized() {
        let r = tri_ring(Field::Fp(101));
        for seed in 0..10u64 {
            let rows: Vec<Vec<MPoly>> = (0..3)
                .map(|i| (0..3).map(|j| random_form(&r, &[1, 1, 1], seed * 9 + i * 3 + j)).collect())
                .collect();
            let m = PolyMatrix::new(&r, rows).unwrap();
            assert_eq!(m.det().unwrap(), leibniz_det3(&m));
        }
    }

    #[test]
    fn jacobian_examples() {
        let r = PolyRing::affine(Field::Q, &["x", "y"]);
        let x = r.var(0);
        let y = r.var(1);
        let f = x.pow(2).mul(&y);
        let j = jacobian(&[f.clone()], &[0, 1]).unwrap();
        assert_eq!(j.entry(0, 0), &x.mul(&y).scale(&Coef::Q(BigRational::from_integer(2.into()))));
        assert_eq!(j.entry(0, 1), &x.pow(2));

        let j = jacobian(&[r.one(), r.constant(r.field().from_i64(5))], &[0, 1]).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                assert!(j.entry(i, k).is_zero());
            }
        }
    }

    #[test]
    fn dehomogenize_examples() {
        let r = tri_ring(Field::Q);
        let s = r.var_named("S").unwrap();
        let t = r.var_named("T").unwrap();
        let x0 = r.var_named("X0").unwrap();
        let x1 = r.var_named("X1").unwrap();
        let chart = [
            r.var_index("S").unwrap(),
            r.var_index("X0").unwrap(),
            r.var_index("Y0").unwrap(),
        ];
        let target = r.chart_ring(&chart).unwrap();
        assert_eq!(target.num_vars(), 5);
        assert!(target.is_affine());

        let f = s.mul(&x0.pow(2));
        assert_eq!(f.dehomogenize(&chart, &target).unwrap(), target.one());

        let g = t.mul(&x1.pow(2));
        let gd = g.dehomogenize(&chart, &target).unwrap();
        let t2 = target.var_named("T").unwrap();
        let x12 = target.var_named("X1").unwrap();
        assert_eq!(gd, t2.mul(&x12.pow(2)));

        // bad chart: two variables from one block
        assert!(r.chart_ring(&[0, 1, 3]).is_err());
    }

    #[test]
    fn dehomogenize_eval_property() {
        let r = tri_ring(Field::Fp(211));
        let chart = [0usize, 2, 5];
        let target = r.chart_ring(&chart).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for seed in 0..10u64 {
            let f = random_form(&r, &[1, 2, 0], seed);
            let fd = f.dehomogenize(&chart, &target).unwrap();
            // lifted point: chart coordinates 1, others random
            let mut point = vec![Coef::Fp(0); 8];
            let mut small = Vec::new();
            for i in 0..8 {
                if chart.contains(&i) {
                    point[i] = Coef::Fp(1);
                } else {
                    let v = Coef::Fp(rng.gen_range(0..211));
                    point[i] = v.clone();
                    small.push(v);
                }
            }
            assert_eq!(f.eval(&point), fd.eval(&small));
        }
    }

    #[test]
    fn reduction_mod_p_commutes() {
        let rq = tri_ring(Field::Q);
        let rp = rq.with_prime(101);
        for seed in 0..6u64 {
            let f = random_form(&rq, &[1, 2, 0], seed);
            let g = random_form(&rq, &[1, 2, 0], seed + 50);
            let red = |x: &MPoly| x.reduce_mod(&rp).unwrap();
            assert_eq!(red(&f.add(&g)), red(&f).add(&red(&g)));
            assert_eq!(red(&f.mul(&g)), red(&f).mul(&red(&g)));
        }
        // minors commute with reduction
        let rows: Vec<Vec<MPoly>> = vec![
            (0..3).map(|i| random_form(&rq, &[1, 2, 0], i)).collect(),
            (0..3).map(|i| random_form(&rq, &[0, 0, 2], i + 7)).collect(),
        ];
        let m = PolyMatrix::new(&rq, rows).unwrap();
        let mp = m.map(|e| e.reduce_mod(&rp).unwrap());
        let lhs: Vec<MPoly> = m.minors(2).unwrap().iter().map(|x| x.reduce_mod(&rp).unwrap()).collect();
        assert_eq!(lhs, mp.minors(2).unwrap());
    }

    #[test]
    fn reduction_rejects_bad_denominator() {
        let rq = PolyRing::affine(Field::Q, &["x"]);
        let rp = rq.with_prime(101);
        let c = rq.constant(Coef::Q(BigRational::new(1.into(), 101.into())));
        assert!(matches!(c.reduce_mod(&rp), Err(MPolyError::BadReduction(_))));
    }

    #[test]
    fn canonical_text_round_trip() {
        for field in [Field::Q, Field::Fp(101)] {
            let r = tri_ring(field);
            for seed in 0..8u64 {
                let f = random_form(&r, &[1, 1, 2], seed);
                let s = f.to_canonical_string();
                assert_eq!(r.parse_poly(&s).unwrap(), f, "round trip failed on {s}");
            }
        }
        let r = PolyRing::affine(Field::Q, &["x", "y"]);
        let f = r.parse_poly("-x^2*y + 3/4*y - 1").unwrap();
        assert_eq!(r.parse_poly(&f.to_string()).unwrap(), f);
        assert!(r.parse_poly("x^").is_err());
        assert!(r.parse_poly("z + 1").is_err());
        assert_eq!(r.parse_poly("0").unwrap(), r.zero());
    }

    #[test]
    fn block_projection() {
        let r3 = tri_ring(Field::Fp(101));
        let r2 = PolyRing::multigraded(Field::Fp(101), &[("s", &["S", "T"]), ("x", &["X0", "X1", "X2"])]);
        let f = random_form(&r3, &[1, 2, 0], 3);
        let g = f.project_blocks(&r2, &[0, 1]).unwrap();
        assert_eq!(g.num_terms(), f.num_terms());
        let bad = random_form(&r3, &[1, 0, 2], 3);
        assert!(bad.project_blocks(&r2, &[0, 1]).is_err());
    }
}
