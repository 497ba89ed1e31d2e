//! Exact Chow-ring arithmetic for products of projective spaces and for
//! projective bundles over them.
//!
//! A multiprojective ring `P^{n_1} x ... x P^{n_k}` is the truncated integer
//! polynomial ring on hyperplane classes `H_i` with `H_i^{n_i+1} = 0`.  A
//! projective bundle `P(E)` over a base ring adds one generator `xi` subject
//! to the Grothendieck relation
//!
//! ```text
//! xi^r - c_1(E) xi^{r-1} + c_2(E) xi^{r-2} - ... + (-1)^r c_r(E) = 0,
//! ```
//!
//! and is a free base module on `1, xi, ..., xi^{r-1}`.  We use the quotient
//! convention: `P(E)` parameterizes rank-one quotients of `E` and `xi` is the
//! class of the tautological quotient `O(1)`.  Classes are kept in normal
//! form at all times, so equality is syntactic.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChowError {
    #[error("classes belong to different rings")]
    MixedRings,
    #[error("grading mismatch: expected codimension {expected}, found {found:?}")]
    GradingMismatch { expected: usize, found: Option<usize> },
    #[error("empty dimension list")]
    EmptyDims,
    #[error("projective bundle needs at least one Chern class")]
    EmptyChern,
}

/// Coefficient rings the term engine is generic over.  Classes exposed by
/// this module are integral; the rational instance backs Riemann-Roch
/// computations elsewhere in the crate.
pub(crate) trait Coeff:
    Clone + PartialEq + fmt::Display + Zero + One + for<'a> std::ops::AddAssign<&'a Self>
{
    fn from_bigint(n: &BigInt) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

impl Coeff for BigInt {
    fn from_bigint(n: &BigInt) -> Self {
        n.clone()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Coeff for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

/// Kind of ring: a product of projective spaces, or a projectivized bundle
/// over another ring.
#[derive(Debug)]
pub enum RingKind {
    Multiproj { dims: Vec<usize> },
    Bundle { base: Arc<ChowRing>, rank: usize, chern: Vec<ChowClass> },
}

/// A Chow ring with a fixed ordered list of codimension-one generators.
#[derive(Debug)]
pub struct ChowRing {
    gens: Vec<String>,
    kind: RingKind,
    dim: usize,
}

impl PartialEq for ChowRing {
    fn eq(&self, other: &Self) -> bool {
        if self.gens != other.gens {
            return false;
        }
        match (&self.kind, &other.kind) {
            (RingKind::Multiproj { dims: a }, RingKind::Multiproj { dims: b }) => a == b,
            (
                RingKind::Bundle { base: b1, rank: r1, chern: c1 },
                RingKind::Bundle { base: b2, rank: r2, chern: c2 },
            ) => {
                r1 == r2
                    && b1 == b2
                    && c1.len() == c2.len()
                    && c1.iter().zip(c2).all(|(x, y)| x.terms == y.terms)
            }
            _ => false,
        }
    }
}

impl Eq for ChowRing {}

fn default_names(dims: &[usize]) -> Vec<String> {
    let lines = dims.iter().filter(|&&d| d == 1).count();
    let mut line_idx = 0usize;
    let mut big_idx = 0usize;
    let big = ["a", "b", "c", "d", "e", "f", "g"];
    dims.iter()
        .map(|&d| {
            if d == 1 {
                line_idx += 1;
                if lines > 1 {
                    format!("h{line_idx}")
                } else {
                    "h".to_string()
                }
            } else {
                let name = if big_idx < big.len() {
                    big[big_idx].to_string()
                } else {
                    format!("a{}", big_idx + 1)
                };
                big_idx += 1;
                name
            }
        })
        .collect()
}

impl ChowRing {
    /// Chow ring of `P^{d_1} x ... x P^{d_k}`.  Factors of dimension one are
    /// named `h` (or `h1, h2, ...`), the rest `a, b, c, ...`.
    pub fn multiproj(dims: &[usize]) -> Result<Arc<ChowRing>, ChowError> {
        if dims.is_empty() {
            return Err(ChowError::EmptyDims);
        }
        let names = default_names(dims);
        let pairs: Vec<(&str, usize)> =
            names.iter().map(|n| n.as_str()).zip(dims.iter().copied()).collect();
        Self::multiproj_named(&pairs)
    }

    /// Multiprojective ring with explicit generator names.
    pub fn multiproj_named(factors: &[(&str, usize)]) -> Result<Arc<ChowRing>, ChowError> {
        if factors.is_empty() {
            return Err(ChowError::EmptyDims);
        }
        Ok(Arc::new(ChowRing {
            gens: factors.iter().map(|(n, _)| n.to_string()).collect(),
            dim: factors.iter().map(|&(_, d)| d).sum(),
            kind: RingKind::Multiproj { dims: factors.iter().map(|&(_, d)| d).collect() },
        }))
    }

    /// Ring of the projective bundle `P(E)` where `E` has the given Chern
    /// classes `[c_1, ..., c_r]` over `base`.  The new generator is `xi`.
    pub fn bundle_over(
        base: &Arc<ChowRing>,
        chern: Vec<ChowClass>,
    ) -> Result<Arc<ChowRing>, ChowError> {
        if chern.is_empty() {
            return Err(ChowError::EmptyChern);
        }
        for (i, c) in chern.iter().enumerate() {
            if !Arc::ptr_eq(c.ring(), base) && *c.ring().as_ref() != *base.as_ref() {
                return Err(ChowError::MixedRings);
            }
            if !c.is_zero() && c.codim() != Some(i + 1) {
                return Err(ChowError::GradingMismatch { expected: i + 1, found: c.codim() });
            }
        }
        let rank = chern.len();
        let mut gens = base.gens.clone();
        gens.push("xi".to_string());
        Ok(Arc::new(ChowRing {
            gens,
            dim: base.dim + rank - 1,
            kind: RingKind::Bundle { base: Arc::clone(base), rank, chern },
        }))
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    /// Dimension of the underlying variety; the top nonzero grading.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gens
    }

    pub fn zero(self: &Arc<Self>) -> ChowClass {
        ChowClass { ring: Arc::clone(self), terms: BTreeMap::new() }
    }

    pub fn one(self: &Arc<Self>) -> ChowClass {
        self.constant(1)
    }

    pub fn constant(self: &Arc<Self>, n: i64) -> ChowClass {
        let mut terms = BTreeMap::new();
        if n != 0 {
            terms.insert(vec![0u32; self.gens.len()], BigInt::from(n));
        }
        ChowClass { ring: Arc::clone(self), terms }
    }

    /// The `i`-th generator as a class.
    pub fn generator(self: &Arc<Self>, i: usize) -> ChowClass {
        assert!(i < self.gens.len(), "generator index out of range");
        let mut exps = vec![0u32; self.gens.len()];
        exps[i] = 1;
        self.from_terms([(exps, BigInt::one())])
    }

    pub fn generator_named(self: &Arc<Self>, name: &str) -> Option<ChowClass> {
        self.gens.iter().position(|g| g == name).map(|i| self.generator(i))
    }

    /// Class from raw `(exponents, coefficient)` pairs; normalized on entry.
    pub fn from_terms<I>(self: &Arc<Self>, terms: I) -> ChowClass
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        ChowClass { ring: Arc::clone(self), terms: self.normalize(terms) }
    }

    /// Line-bundle class `sum d_i H_i` from per-generator integers.
    pub fn line_class(self: &Arc<Self>, degrees: &[i64]) -> ChowClass {
        assert_eq!(degrees.len(), self.gens.len(), "one degree per generator");
        self.from_terms(degrees.iter().enumerate().filter(|(_, &d)| d != 0).map(|(i, &d)| {
            let mut e = vec![0u32; self.gens.len()];
            e[i] = 1;
            (e, BigInt::from(d))
        }))
    }

    /// For bundle rings: pull a class on the base back along the projection.
    pub fn pullback_from_base(self: &Arc<Self>, c: &ChowClass) -> ChowClass {
        match &self.kind {
            RingKind::Bundle { base, .. } => {
                assert!(
                    Arc::ptr_eq(c.ring(), base) || *c.ring().as_ref() == *base.as_ref(),
                    "class does not live on the base of this bundle"
                );
                self.from_terms(c.terms.iter().map(|(e, co)| {
                    let mut e = e.clone();
                    e.push(0);
                    (e, co.clone())
                }))
            }
            RingKind::Multiproj { .. } => panic!("not a bundle ring"),
        }
    }

    /// Monomial basis of the codimension-`d` graded piece.
    pub fn basis(self: &Arc<Self>, d: usize) -> Vec<ChowClass> {
        let mut out = Vec::new();
        for exps in self.basis_exponents(d) {
            out.push(self.from_terms([(exps, BigInt::one())]));
        }
        out
    }

    fn basis_exponents(&self, d: usize) -> Vec<Vec<u32>> {
        fn rec(bounds: &[usize], d: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if bounds.is_empty() {
                if d == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let cap = bounds[0].min(d);
            for e in 0..=cap {
                cur.push(e as u32);
                rec(&bounds[1..], d - e, cur, out);
                cur.pop();
            }
        }
        let bounds: Vec<usize> = match &self.kind {
            RingKind::Multiproj { dims } => dims.clone(),
            RingKind::Bundle { base, rank, .. } => {
                // per-generator caps; over-approximate for nested bundles and
                // filtered below
                let mut b: Vec<usize> = match &base.kind {
                    RingKind::Multiproj { dims } => dims.clone(),
                    RingKind::Bundle { .. } => vec![base.dim; base.gens.len()],
                };
                b.push(rank - 1);
                b
            }
        };
        let mut out = Vec::new();
        rec(&bounds, d, &mut Vec::new(), &mut out);
        // keep only monomials that survive normalization unchanged
        out.retain(|e| {
            let m: BTreeMap<Vec<u32>, BigInt> = self.normalize([(e.clone(), BigInt::one())]);
            m.len() == 1 && m.contains_key(e)
        });
        out
    }

    /// Reduce raw terms to normal form: multiprojective truncation plus the
    /// Grothendieck relation for bundle rings.
    pub(crate) fn normalize<C, I>(&self, terms: I) -> BTreeMap<Vec<u32>, C>
    where
        C: Coeff,
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        match &self.kind {
            RingKind::Multiproj { dims } => {
                let mut out: BTreeMap<Vec<u32>, C> = BTreeMap::new();
                for (exps, coeff) in terms {
                    if coeff.is_zero() {
                        continue;
                    }
                    debug_assert_eq!(exps.len(), dims.len());
                    if exps.iter().zip(dims).any(|(&e, &d)| e as usize > d) {
                        continue;
                    }
                    merge(&mut out, exps, coeff);
                }
                out
            }
            RingKind::Bundle { base, rank, chern } => {
                let r = *rank;
                let n = self.gens.len();
                // Phase 1: rewrite xi^k for k >= r using the Grothendieck
                // relation; each step strictly lowers the xi exponent.
                let mut work: Vec<(Vec<u32>, C)> = terms.into_iter().collect();
                let mut flat: BTreeMap<Vec<u32>, C> = BTreeMap::new();
                while let Some((exps, coeff)) = work.pop() {
                    if coeff.is_zero() {
                        continue;
                    }
                    debug_assert_eq!(exps.len(), n);
                    let k = exps[n - 1] as usize;
                    if k < r {
                        merge(&mut flat, exps, coeff);
                        continue;
                    }
                    // xi^r = c_1 xi^{r-1} - c_2 xi^{r-2} + ... - (-1)^r c_r
                    for (i, ci) in chern.iter().enumerate() {
                        let sign_pos = i % 2 == 0; // (-1)^{i+2} with i zero-based
                        for (ce, cc) in &ci.terms {
                            let mut e = exps.clone();
                            e[n - 1] = (k - 1 - i) as u32;
                            for (j, x) in ce.iter().enumerate() {
                                e[j] += x;
                            }
                            let c = coeff.mul_ref(&C::from_bigint(cc));
                            work.push((e, if sign_pos { c } else { c.neg_ref() }));
                        }
                    }
                }
                // Phase 2: reduce the base part of each xi-slice in the base
                // ring.
                let mut slices: BTreeMap<u32, BTreeMap<Vec<u32>, C>> = BTreeMap::new();
                for (mut exps, coeff) in flat {
                    let k = exps[n - 1];
                    exps.truncate(n - 1);
                    merge(slices.entry(k).or_default(), exps, coeff);
                }
                let mut out: BTreeMap<Vec<u32>, C> = BTreeMap::new();
                for (k, slice) in slices {
                    for (mut exps, coeff) in base.normalize(slice) {
                        exps.push(k);
                        merge(&mut out, exps, coeff);
                    }
                }
                out
            }
        }
    }

    pub(crate) fn integrate_terms<C: Coeff>(&self, terms: &BTreeMap<Vec<u32>, C>) -> C {
        match &self.kind {
            RingKind::Multiproj { dims } => {
                let top: Vec<u32> = dims.iter().map(|&d| d as u32).collect();
                terms.get(&top).cloned().unwrap_or_else(C::zero)
            }
            RingKind::Bundle { base, rank, .. } => {
                let n = self.gens.len();
                let mut slice: BTreeMap<Vec<u32>, C> = BTreeMap::new();
                for (exps, coeff) in terms {
                    if exps[n - 1] as usize == rank - 1 {
                        slice.insert(exps[..n - 1].to_vec(), coeff.clone());
                    }
                }
                base.integrate_terms(&slice)
            }
        }
    }
}

fn merge<C: Coeff>(map: &mut BTreeMap<Vec<u32>, C>, exps: Vec<u32>, coeff: C) {
    match map.entry(exps) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += &coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// A cycle class in normal form.  Two classes are equal iff their term maps
/// coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass {
    ring: Arc<ChowRing>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl ChowClass {
    pub fn ring(&self) -> &Arc<ChowRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Codimension if homogeneous (`None` for mixed classes; zero class is
    /// homogeneous of every degree).
    pub fn codim(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>() as usize);
        let first = it.next()?;
        for d in it {
            if d != first {
                return None;
            }
        }
        Some(first)
    }

    /// The codimension-`d` graded part.
    pub fn component(&self, d: usize) -> ChowClass {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() as usize == d)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        ChowClass { ring: Arc::clone(&self.ring), terms }
    }

    pub fn scale(&self, n: i64) -> ChowClass {
        self.scale_big(&BigInt::from(n))
    }

    pub fn scale_big(&self, n: &BigInt) -> ChowClass {
        if Zero::is_zero(n) {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * n)).collect();
        ChowClass { ring: Arc::clone(&self.ring), terms }
    }

    pub fn pow(&self, k: u32) -> ChowClass {
        let mut acc = self.ring.one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Degree of the top-dimensional part: the coefficient of the point
    /// class.  Classes with no top-degree part integrate to zero.
    pub fn integrate(&self) -> BigInt {
        self.ring.integrate_terms(&self.terms)
    }

    fn same_ring(&self, other: &ChowClass) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }
}

impl std::ops::Add for &ChowClass {
    type Output = ChowClass;
    fn add(self, rhs: &ChowClass) -> ChowClass {
        assert!(self.same_ring(rhs), "classes belong to different rings");
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            merge(&mut terms, e.clone(), c.clone());
        }
        ChowClass { ring: Arc::clone(&self.ring), terms }
    }
}

impl std::ops::Sub for &ChowClass {
    type Output = ChowClass;
    fn sub(self, rhs: &ChowClass) -> ChowClass {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        ChowClass { ring: Arc::clone(&self.ring), terms }
    }
}

impl std::ops::Mul for &ChowClass {
    type Output = ChowClass;
    fn mul(self, rhs: &ChowClass) -> ChowClass {
        assert!(self.same_ring(rhs), "classes belong to different rings");
        let mut raw: Vec<(Vec<u32>, BigInt)> = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                raw.push((exps, c1 * c2));
            }
        }
        ChowClass { ring: Arc::clone(&self.ring), terms: self.ring.normalize(raw) }
    }
}

macro_rules! forward_owned_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl std::ops::$trait for ChowClass {
            type Output = ChowClass;
            fn $method(self, rhs: ChowClass) -> ChowClass {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
        impl std::ops::$trait<&ChowClass> for ChowClass {
            type Output = ChowClass;
            fn $method(self, rhs: &ChowClass) -> ChowClass {
                std::ops::$trait::$method(&self, rhs)
            }
        }
        impl std::ops::$trait<ChowClass> for &ChowClass {
            type Output = ChowClass;
            fn $method(self, rhs: ChowClass) -> ChowClass {
                std::ops::$trait::$method(self, &rhs)
            }
        }
    )*};
}

forward_owned_ops!(Add::add, Sub::sub, Mul::mul);

impl std::ops::Neg for ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        -&self
    }
}

/// Canonical text form: terms sorted by total degree, then lexicographically
/// by exponent tuple (descending), with explicit `^`, e.g.
/// `12*h*a^2 - 4*a*b`.
impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(&Vec<u32>, &BigInt)> = self.terms.iter().collect();
        ordered.sort_by(|(e1, _), (e2, _)| {
            let d1: u32 = e1.iter().sum();
            let d2: u32 = e2.iter().sum();
            d1.cmp(&d2).then_with(|| e2.cmp(e1))
        });
        for (i, (exps, coeff)) in ordered.into_iter().enumerate() {
            let neg = coeff.is_negative();
            let abs = coeff.abs();
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
            if !abs.is_one() || exps.iter().all(|&e| e == 0) {
                factors.push(abs.to_string());
            }
            for (g, &e) in self.ring.gens.iter().zip(exps) {
                match e {
                    0 => {}
                    1 => factors.push(g.clone()),
                    _ => factors.push(format!("{g}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn p122() -> Arc<ChowRing> {
        ChowRing::multiproj(&[1, 2, 2]).unwrap()
    }

    /// Dense expansion in the untruncated polynomial ring; the coefficient of
    /// the exact top monomial is unaffected by the nilpotency relations, so
    /// this is an independent integration oracle for multiprojective rings.
    fn dense_integrate(dims: &[usize], factors: &[Vec<i64>]) -> i64 {
        let mut poly: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        poly.insert(vec![0; dims.len()], 1);
        for f in factors {
            let mut next: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
            for (exps, c) in &poly {
                for (i, &ci) in f.iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    let mut e = exps.clone();
                    e[i] += 1;
                    *next.entry(e).or_insert(0) += c * ci;
                }
            }
            poly = next;
        }
        let top: Vec<u32> = dims.iter().map(|&d| d as u32).collect();
        poly.get(&top).copied().unwrap_or(0)
    }

    #[test]
    fn multiproj_truncation() {
        let r = p122();
        assert_eq!(r.dim(), 5);
        assert_eq!(r.gen_names(), &["h", "a", "b"]);
        let h = r.generator(0);
        let a = r.generator(1);
        assert!(h.pow(2).is_zero());
        assert!(a.pow(3).is_zero());
        assert!(!a.pow(2).is_zero());

        let pt = ChowRing::multiproj(&[0]).unwrap();
        assert_eq!(pt.dim(), 0);
        assert!(pt.generator(0).is_zero());

        let p22 = ChowRing::multiproj(&[2, 2]).unwrap();
        assert_eq!(p22.dim(), 4);
        assert_eq!(p22.gen_names(), &["a", "b"]);
    }

    #[test]
    fn bundle_relation_matches_whitney_data() {
        // P(O(2,0) + O(0,2)) over P^2 x P^2: c(E) = (1+2a)(1+2b)
        let base = ChowRing::multiproj(&[2, 2]).unwrap();
        let a = base.generator(0);
        let b = base.generator(1);
        let c1 = &a.scale(2) + &b.scale(2);
        let c2 = (a.scale(2)) * b.scale(2);
        let pa = ChowRing::bundle_over(&base, vec![c1.clone(), c2.clone()]).unwrap();
        assert_eq!(pa.dim(), 5);
        let xi = pa.generator_named("xi").unwrap();
        let lift = |c: &ChowClass| {
            pa.from_terms(c.terms().map(|(e, co)| {
                let mut e = e.clone();
                e.push(0);
                (e, co.clone())
            }))
        };
        // xi^2 = (2a+2b) xi - 4ab
        let expected = &(&lift(&c1) * &xi) - &lift(&c2);
        assert_eq!(xi.pow(2), expected);
        // Grothendieck relation normalizes to zero
        let rel = &(&xi.pow(2) - &(&lift(&c1) * &xi)) + &lift(&c2);
        assert!(rel.is_zero());
    }

    #[test]
    fn trivial_bundles() {
        // rank-2 trivial bundle over a point: the ring of P^1
        let pt = ChowRing::multiproj(&[0]).unwrap();
        let ring = ChowRing::bundle_over(&pt, vec![pt.zero(), pt.zero()]).unwrap();
        let xi = ring.generator_named("xi").unwrap();
        assert!(xi.pow(2).is_zero());
        assert_eq!(xi.integrate(), BigInt::one());
        // O + O over P^1
        let p1 = ChowRing::multiproj(&[1]).unwrap();
        let ruled = ChowRing::bundle_over(&p1, vec![p1.zero(), p1.zero()]).unwrap();
        let xi = ruled.generator_named("xi").unwrap();
        let h = ruled.generator_named("h").unwrap();
        assert!(xi.pow(2).is_zero());
        assert_eq!((&h * &xi).integrate(), BigInt::one());
    }

    #[test]
    fn bundle_grading_mismatch_rejected() {
        let base = ChowRing::multiproj(&[2, 2]).unwrap();
        let a = base.generator(0);
        let err = ChowRing::bundle_over(&base, vec![a.pow(2)]);
        assert!(matches!(err, Err(ChowError::GradingMismatch { expected: 1, .. })));
    }

    #[test]
    fn integrate_examples() {
        let r = p122();
        let h = r.generator(0);
        let a = r.generator(1);
        let b = r.generator(2);
        let twelve = &(&h + &a.scale(2)).pow(3) * &b.pow(2);
        assert_eq!(twelve.integrate(), BigInt::from(12));
        assert_eq!(
            dense_integrate(&[1, 2, 2], &[
                vec![1, 2, 0],
                vec![1, 2, 0],
                vec![1, 2, 0],
                vec![0, 1, 0],
                vec![0, 1, 0],
            ]),
            0
        );
        // oracle form of the same number: (h+2a)^3 b^2
        assert_eq!(
            dense_integrate(&[1, 2, 2], &[
                vec![1, 2, 0],
                vec![1, 2, 0],
                vec![1, 2, 0],
                vec![0, 0, 1],
                vec![0, 0, 1],
            ]),
            12
        );

        assert_eq!(r.one().integrate(), BigInt::zero());

        let p22 = ChowRing::multiproj(&[2, 2]).unwrap();
        let ab = &p22.generator(0) + &p22.generator(1);
        assert_eq!(ab.pow(4).integrate(), BigInt::from(6));
        let linear = vec![vec![1i64, 1]; 4];
        assert_eq!(dense_integrate(&[2, 2], &linear), 6);
    }

    #[test]
    fn fiber_integration_of_bundle_rings() {
        // integrate(xi^{r-1} * top base monomial) = 1 for several bundles
        let base = ChowRing::multiproj(&[2, 2]).unwrap();
        let a = base.generator(0);
        let b = base.generator(1);
        for chern in [
            vec![&a.scale(2) + &b.scale(2), a.scale(2) * b.scale(2)],
            vec![a.scale(1) + b.scale(3), a.scale(3) * b.scale(1)],
            vec![base.zero(), base.zero()],
        ] {
            let ring = ChowRing::bundle_over(&base, chern).unwrap();
            let xi = ring.generator_named("xi").unwrap();
            let a = ring.generator_named("a").unwrap();
            let b = ring.generator_named("b").unwrap();
            let c = &(&a.pow(2) * &b.pow(2)) * &xi;
            assert_eq!(c.integrate(), BigInt::one());
        }
    }

    #[test]
    fn ring_axioms_randomized() {
        let r = p122();
        let mut rng = StdRng::seed_from_u64(7);
        let random_class = |rng: &mut StdRng| {
            let mut terms = Vec::new();
            for _ in 0..rng.gen_range(1..6) {
                let e = vec![
                    rng.gen_range(0..2u32),
                    rng.gen_range(0..3u32),
                    rng.gen_range(0..3u32),
                ];
                terms.push((e, BigInt::from(rng.gen_range(-9i64..=9))));
            }
            r.from_terms(terms)
        };
        for _ in 0..50 {
            let x = random_class(&mut rng);
            let y = random_class(&mut rng);
            let z = random_class(&mut rng);
            assert_eq!(&x + &y, &y + &x);
            assert_eq!(&x * &y, &y * &x);
            assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }
    }

    #[test]
    fn nilpotency_randomized() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let dims: Vec<usize> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..4)).collect();
            let r = ChowRing::multiproj(&dims).unwrap();
            for (i, &d) in dims.iter().enumerate() {
                assert!(r.generator(i).pow(d as u32 + 1).is_zero());
            }
        }
    }

    #[test]
    fn oracle_equivalence_on_random_linear_products() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..100 {
            let k = rng.gen_range(1..4usize);
            let mut dims: Vec<usize> = (0..k).map(|_| rng.gen_range(0..4)).collect();
            while dims.iter().sum::<usize>() > 6 {
                let i = rng.gen_range(0..k);
                if dims[i] > 0 {
                    dims[i] -= 1;
                }
            }
            let total: usize = dims.iter().sum();
            let r = ChowRing::multiproj(&dims).unwrap();
            let factors: Vec<Vec<i64>> = (0..total)
                .map(|_| (0..k).map(|_| rng.gen_range(-3i64..=3)).collect())
                .collect();
            let mut prod = r.one();
            for f in &factors {
                prod = &prod * &r.line_class(f);
            }
            assert_eq!(prod.integrate(), BigInt::from(dense_integrate(&dims, &factors)));
        }
    }

    #[test]
    fn basis_enumeration() {
        let r = p122();
        assert_eq!(r.basis(0).len(), 1);
        assert_eq!(r.basis(1).len(), 3);
        assert_eq!(r.basis(5).len(), 1);
        assert_eq!(r.basis(6).len(), 0);

        let base = ChowRing::multiproj(&[2, 2]).unwrap();
        let a = base.generator(0);
        let b = base.generator(1);
        let pa = ChowRing::bundle_over(&base, vec![&a.scale(2) + &b.scale(2), a.scale(2) * b.scale(2)])
            .unwrap();
        // CH^1(P_A) has basis a, b, xi
        assert_eq!(pa.basis(1).len(), 3);
        // top piece is a^2 b^2 xi
        assert_eq!(pa.basis(5).len(), 1);
    }

    #[test]
    fn display_canonical() {
        let r = p122();
        let h = r.generator(0);
        let a = r.generator(1);
        let c = &(&r.one() + &(&h * &a.scale(-2))) + &a.scale(3);
        assert_eq!(c.to_string(), "1 + 3*a - 2*h*a");
        assert_eq!(r.zero().to_string(), "0");
    }
}
