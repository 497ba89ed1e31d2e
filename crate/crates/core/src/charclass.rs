//! Characteristic-class calculus on top of the Chow-ring engine.
//!
//! Provides total Chern classes of split bundles (Whitney), tangent classes
//! of multiprojective spaces and projective bundles, Thom-Porteous degeneracy
//! classes, Euler numbers and canonical classes of complete intersections,
//! Euler characteristics of line bundles via Hirzebruch-Riemann-Roch, and
//! exact line-bundle cohomology tables on products of projective spaces
//! (Bott plus Kuenneth), including the bookkeeping needed to read off sheaf
//! cohomology from a locally free resolution.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::chow::{ChowClass, ChowRing, RingKind};

#[derive(Debug, Error)]
pub enum CharClassError {
    #[error("expected a class of codimension {expected}, found codimension {found:?}")]
    GradingMismatch { expected: usize, found: Option<usize> },
    #[error("expected codimension {codim} exceeds ambient dimension {dim}")]
    CodimensionTooLarge { codim: usize, dim: usize },
    #[error("corank bound must be smaller than both ranks ({src} and {tgt})")]
    BadCorank { src: usize, tgt: usize },
    #[error("formal bundle term must have constant Chern coefficient 1")]
    BadFormalTerm,
    #[error("length mismatch: {0}")]
    ShapeMismatch(String),
    #[error("Riemann-Roch produced the non-integral value {0}; grading conventions are broken")]
    NonIntegralChi(BigRational),
}

/// A formal vector-bundle expression: a direct sum of line bundles (given by
/// their first Chern classes, with multiplicities) plus optional non-split
/// terms carried directly by total Chern class and rank.
#[derive(Debug, Clone)]
pub struct BundleExpr {
    ring: Arc<ChowRing>,
    lines: Vec<(ChowClass, usize)>,
    formal: Vec<(ChowClass, usize)>,
}

impl BundleExpr {
    pub fn empty(ring: &Arc<ChowRing>) -> Self {
        BundleExpr { ring: Arc::clone(ring), lines: Vec::new(), formal: Vec::new() }
    }

    /// The trivial bundle of the given rank.
    pub fn trivial(ring: &Arc<ChowRing>, rank: usize) -> Self {
        let mut e = Self::empty(ring);
        if rank > 0 {
            e.lines.push((ring.zero(), rank));
        }
        e
    }

    /// Append a line-bundle summand with the given multiplicity.
    pub fn with_line(mut self, class: ChowClass, mult: usize) -> Result<Self, CharClassError> {
        if !class.is_zero() && class.codim() != Some(1) {
            return Err(CharClassError::GradingMismatch { expected: 1, found: class.codim() });
        }
        if mult > 0 {
            self.lines.push((class, mult));
        }
        Ok(self)
    }

    /// Append a non-split term given by its total Chern class and rank.
    pub fn with_formal(mut self, total: ChowClass, rank: usize) -> Result<Self, CharClassError> {
        if total.coefficient(&vec![0; self.ring.num_gens()]) != BigInt::one() {
            return Err(CharClassError::BadFormalTerm);
        }
        self.formal.push((total, rank));
        Ok(self)
    }

    /// Direct sum of line bundles with the given per-generator degrees.
    pub fn sum_of_line_bundles(
        ring: &Arc<ChowRing>,
        degrees: &[Vec<i64>],
    ) -> Result<Self, CharClassError> {
        let mut e = Self::empty(ring);
        for d in degrees {
            e = e.with_line(ring.line_class(d), 1)?;
        }
        Ok(e)
    }

    pub fn ring(&self) -> &Arc<ChowRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.lines.iter().map(|&(_, m)| m).sum::<usize>()
            + self.formal.iter().map(|&(_, r)| r).sum::<usize>()
    }

    pub fn direct_sum(&self, other: &BundleExpr) -> BundleExpr {
        let mut out = self.clone();
        out.lines.extend(other.lines.iter().cloned());
        out.formal.extend(other.formal.iter().cloned());
        out
    }

    /// Total Chern class by the Whitney formula: the product of `(1 + l)`
    /// over line summands times the formal terms.
    pub fn chern_total(&self) -> ChowClass {
        let one = self.ring.one();
        let mut acc = one.clone();
        for (l, m) in &self.lines {
            let f = &one + l;
            for _ in 0..*m {
                acc = &acc * &f;
            }
        }
        for (t, _) in &self.formal {
            acc = &acc * t;
        }
        acc
    }

    /// The `k`-th Chern class.
    pub fn chern(&self, k: usize) -> ChowClass {
        self.chern_total().component(k)
    }
}

/// Total Chern class of a bundle expression.
pub fn chern_total(e: &BundleExpr) -> ChowClass {
    e.chern_total()
}

/// Total Chern class of the tangent bundle of the ring's variety.
///
/// For a multiprojective factor the Euler sequence gives `(1 + H)^{n+1}`;
/// for a projective bundle the relative factor is
/// `sum_i (-1)^i c_i(E) (1 + xi)^{r-i}`, the total Chern class of the
/// relative Euler sequence under the quotient convention.
pub fn tangent_class(ring: &Arc<ChowRing>) -> ChowClass {
    match ring.kind() {
        RingKind::Multiproj { dims } => {
            let mut acc = ring.one();
            for (i, &n) in dims.iter().enumerate() {
                let f = &ring.one() + &ring.generator(i);
                for _ in 0..=n {
                    acc = &acc * &f;
                }
            }
            acc
        }
        RingKind::Bundle { base, rank, chern } => {
            let r = *rank;
            let xi = ring.generator(ring.num_gens() - 1);
            let one_plus_xi = &ring.one() + &xi;
            let mut rel = one_plus_xi.pow(r as u32);
            for (i, ci) in chern.iter().enumerate() {
                let term = &ring.pullback_from_base(ci) * &one_plus_xi.pow((r - i - 1) as u32);
                rel = if i % 2 == 0 { &rel - &term } else { &rel + &term };
            }
            &ring.pullback_from_base(&tangent_class(base)) * &rel
        }
    }
}

fn canonical_of_ambient(ring: &Arc<ChowRing>) -> ChowClass {
    match ring.kind() {
        RingKind::Multiproj { dims } => {
            let mut k = ring.zero();
            for (i, &n) in dims.iter().enumerate() {
                k = &k - &ring.generator(i).scale(n as i64 + 1);
            }
            k
        }
        RingKind::Bundle { base, rank, chern } => {
            let xi = ring.generator(ring.num_gens() - 1);
            let k = &ring.pullback_from_base(&canonical_of_ambient(base))
                - &xi.scale(*rank as i64);
            &k + &ring.pullback_from_base(&chern[0])
        }
    }
}

/// A complete intersection of divisors inside an ambient ring.  An empty
/// divisor list denotes the ambient variety itself.
#[derive(Debug, Clone)]
pub struct CompleteIntersection {
    pub ambient: Arc<ChowRing>,
    pub divisors: Vec<ChowClass>,
}

impl CompleteIntersection {
    pub fn new(
        ambient: &Arc<ChowRing>,
        divisors: Vec<ChowClass>,
    ) -> Result<Self, CharClassError> {
        for d in &divisors {
            if !d.is_zero() && d.codim() != Some(1) {
                return Err(CharClassError::GradingMismatch { expected: 1, found: d.codim() });
            }
        }
        Ok(CompleteIntersection { ambient: Arc::clone(ambient), divisors })
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim() - self.divisors.len()
    }
}

/// Thom-Porteous class of the locus where a map from a trivial bundle of
/// rank `source_rank` to `target` has rank at most `corank_bound`.  With a
/// trivial source `c(target - source) = c(target)`, and the class is the
/// Giambelli determinant `det(c_{f-r+j-i})` of size `e - r`.
pub fn degeneracy_class(
    source_rank: usize,
    target: &BundleExpr,
    corank_bound: usize,
) -> Result<ChowClass, CharClassError> {
    let e = source_rank;
    let f = target.rank();
    let r = corank_bound;
    if r >= e || r >= f {
        return Err(CharClassError::BadCorank { src: e, tgt: f });
    }
    let codim = (e - r) * (f - r);
    let dim = target.ring().dim();
    if codim > dim {
        return Err(CharClassError::CodimensionTooLarge { codim, dim });
    }
    let total = target.chern_total();
    let ring = target.ring();
    let size = e - r;
    let entry = |i: usize, j: usize| -> ChowClass {
        let k = (f - r) as i64 + j as i64 - i as i64;
        if k < 0 {
            ring.zero()
        } else {
            total.component(k as usize)
        }
    };
    let m: Vec<Vec<ChowClass>> =
        (0..size).map(|i| (0..size).map(|j| entry(i, j)).collect()).collect();
    Ok(class_det(ring, &m))
}

fn class_det(ring: &Arc<ChowRing>, m: &[Vec<ChowClass>]) -> ChowClass {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = ring.zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<ChowClass>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let cof = &m[0][j] * &class_det(ring, &minor);
        det = if j % 2 == 0 { &det + &cof } else { &det - &cof };
    }
    det
}

/// Topological Euler number of a smooth complete intersection: the integral
/// of `c(T_ambient) / prod(1 + D_i)` times `prod D_i`.
pub fn euler_characteristic_top(ci: &CompleteIntersection) -> BigInt {
    let ring = &ci.ambient;
    let n = ring.dim();
    let mut acc = tangent_class(ring);
    let mut cut = ring.one();
    for d in &ci.divisors {
        // (1 + D)^{-1} = sum (-D)^k, truncated by the grading
        let mut inv = ring.zero();
        let neg = -d;
        let mut pw = ring.one();
        for _ in 0..=n {
            inv = &inv + &pw;
            pw = &pw * &neg;
            if pw.is_zero() {
                break;
            }
        }
        acc = &acc * &inv;
        cut = &cut * d;
    }
    (&acc * &cut).integrate()
}

/// Ambient divisor class restricting to the canonical class of the complete
/// intersection (adjunction: `K_ambient + sum D_i`).
pub fn canonical_class(ci: &CompleteIntersection) -> ChowClass {
    let mut k = canonical_of_ambient(&ci.ambient);
    for d in &ci.divisors {
        k = &k + d;
    }
    k
}

// ---------------------------------------------------------------------------
// Rational-coefficient classes, used only inside Riemann-Roch.

#[derive(Debug, Clone, PartialEq)]
struct RatClass {
    ring: Arc<ChowRing>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl RatClass {
    fn zero(ring: &Arc<ChowRing>) -> Self {
        RatClass { ring: Arc::clone(ring), terms: BTreeMap::new() }
    }

    fn one(ring: &Arc<ChowRing>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; ring.num_gens()], BigRational::one());
        RatClass { ring: Arc::clone(ring), terms }
    }

    fn from_class(c: &ChowClass) -> Self {
        let terms = c
            .terms()
            .map(|(e, co)| (e.clone(), BigRational::from_integer(co.clone())))
            .collect();
        RatClass { ring: Arc::clone(c.ring()), terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &RatClass) -> RatClass {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let s = terms.get(e).map(|x| x + c).unwrap_or_else(|| c.clone());
            if s.is_zero() {
                terms.remove(e);
            } else {
                terms.insert(e.clone(), s);
            }
        }
        RatClass { ring: Arc::clone(&self.ring), terms }
    }

    fn mul(&self, other: &RatClass) -> RatClass {
        let raw: Vec<(Vec<u32>, BigRational)> = self
            .terms
            .iter()
            .flat_map(|(e1, c1)| {
                other.terms.iter().map(move |(e2, c2)| {
                    let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                    (e, c1 * c2)
                })
            })
            .collect();
        RatClass { ring: Arc::clone(&self.ring), terms: self.ring.normalize(raw) }
    }

    fn scale(&self, s: &BigRational) -> RatClass {
        if s.is_zero() {
            return RatClass::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect();
        RatClass { ring: Arc::clone(&self.ring), terms }
    }

    /// `exp` of a class with no degree-zero part; terminates by nilpotency.
    fn exp(&self) -> RatClass {
        debug_assert!(self.terms.keys().all(|e| e.iter().any(|&x| x > 0)));
        let mut acc = RatClass::one(&self.ring);
        let mut pw = RatClass::one(&self.ring);
        let mut fact = BigRational::one();
        for k in 1..=(self.ring.dim() as i64 + 1) {
            pw = pw.mul(self);
            if pw.is_zero() {
                break;
            }
            fact *= BigRational::from_integer(BigInt::from(k));
            acc = acc.add(&pw.scale(&fact.recip()));
        }
        acc
    }

    fn integrate(&self) -> BigRational {
        self.ring.integrate_terms(&self.terms)
    }
}

/// Coefficients `l_k` of `log(x / (1 - e^{-x}))`, so that
/// `log td(E) = sum_k l_k p_k(E)` with `p_k` the Chern-root power sums.
fn log_todd_coeffs(n: usize) -> Vec<BigRational> {
    // S = (1 - e^{-x})/x has s_k = (-1)^k / (k+1)!
    let mut s = vec![BigRational::zero(); n + 1];
    let mut fact = BigInt::one();
    for (k, sk) in s.iter_mut().enumerate() {
        fact *= BigInt::from(k as i64 + 1);
        let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        *sk = BigRational::new(sign, fact.clone());
    }
    // log q = -log S, expanded as -sum (-1)^{m+1} (S-1)^m / m
    let mut u = s;
    u[0] = BigRational::zero();
    let mut logs = vec![BigRational::zero(); n + 1];
    let mut upow = vec![BigRational::zero(); n + 1];
    upow[0] = BigRational::one();
    for m in 1..=n {
        let mut next = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            if upow[i].is_zero() {
                continue;
            }
            for j in 1..=(n - i) {
                if u[j].is_zero() {
                    continue;
                }
                let add = &upow[i] * &u[j];
                next[i + j] = &next[i + j] + add;
            }
        }
        upow = next;
        let c = BigRational::new(
            if m % 2 == 1 { BigInt::one() } else { -BigInt::one() },
            BigInt::from(m as i64),
        );
        for i in 0..=n {
            logs[i] = &logs[i] + &(&upow[i] * &c);
        }
    }
    (1..=n).map(|k| -logs[k].clone()).collect()
}

/// Todd class of a bundle presented by its total Chern class, via Newton's
/// identities on the Chern components.
fn todd_of_total_chern(ring: &Arc<ChowRing>, total: &ChowClass) -> RatClass {
    let n = ring.dim();
    let e: Vec<RatClass> = (1..=n).map(|k| RatClass::from_class(&total.component(k))).collect();
    let minus_one = -BigRational::one();
    let mut p: Vec<RatClass> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut s = RatClass::zero(ring);
        for i in 1..k {
            let term = e[i - 1].mul(&p[k - i - 1]);
            s = if i % 2 == 1 { s.add(&term) } else { s.add(&term.scale(&minus_one)) };
        }
        let lead = e[k - 1].scale(&BigRational::from_integer(BigInt::from(k as i64)));
        s = if k % 2 == 1 { s.add(&lead) } else { s.add(&lead.scale(&minus_one)) };
        p.push(s);
    }
    let l = log_todd_coeffs(n);
    let mut logtd = RatClass::zero(ring);
    for k in 1..=n {
        if !l[k - 1].is_zero() {
            logtd = logtd.add(&p[k - 1].scale(&l[k - 1]));
        }
    }
    logtd.exp()
}

/// Holomorphic Euler characteristic `chi(X, O_X(twist))` of a smooth
/// complete intersection, by Hirzebruch-Riemann-Roch computed in the ambient
/// ring as `integral(e^twist . td(T_ambient) . prod_i (1 - e^{-D_i}))`.
///
/// The computation runs over the rationals; a non-integral outcome is a hard
/// error since it can only come from broken grading conventions.
pub fn hrr_chi(ci: &CompleteIntersection, twist: &ChowClass) -> Result<BigInt, CharClassError> {
    if !twist.is_zero() && twist.codim() != Some(1) {
        return Err(CharClassError::GradingMismatch { expected: 1, found: twist.codim() });
    }
    let ring = &ci.ambient;
    let td = todd_of_total_chern(ring, &tangent_class(ring));
    let mut acc = RatClass::from_class(twist).exp().mul(&td);
    let minus_one = -BigRational::one();
    for d in &ci.divisors {
        let e = RatClass::from_class(&-d).exp();
        let factor = RatClass::one(ring).add(&e.scale(&minus_one));
        acc = acc.mul(&factor);
    }
    let chi = acc.integrate();
    if !chi.is_integer() {
        return Err(CharClassError::NonIntegralChi(chi));
    }
    Ok(chi.to_integer())
}

// ---------------------------------------------------------------------------
// Line-bundle cohomology on products of projective spaces.

/// Cohomology dimension table.  When `exact` is false the entries are upper
/// bounds and only the Euler characteristic is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomTable {
    dims: Vec<u64>,
    exact: bool,
    chi: i64,
}

impl CohomTable {
    pub fn exact(mut dims: Vec<u64>) -> Self {
        while dims.last() == Some(&0) {
            dims.pop();
        }
        let chi = dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum();
        CohomTable { dims, exact: true, chi }
    }

    pub fn euler_only(mut bounds: Vec<u64>, chi: i64) -> Self {
        while bounds.last() == Some(&0) {
            bounds.pop();
        }
        CohomTable { dims: bounds, exact: false, chi }
    }

    pub fn h(&self, i: usize) -> u64 {
        self.dims.get(i).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn chi(&self) -> i64 {
        self.chi
    }

    pub fn is_zero(&self) -> bool {
        self.exact && self.dims.iter().all(|&d| d == 0)
    }
}

impl fmt::Display for CohomTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.dims.iter().enumerate() {
            write!(f, "h^{i}={d} ")?;
        }
        write!(f, "chi={} {}", self.chi, if self.exact { "exact" } else { "euler-only" })
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(num).expect("cohomology dimension overflow")
}

/// Bott's formula on one factor: cohomology of `O(d)` on `P^n` sits in
/// degree 0 when `d >= 0` and in degree `n` when `d <= -n-1`.
fn bott_factor(n: usize, d: i64) -> Vec<u64> {
    let mut v = vec![0u64; n + 1];
    if d >= 0 {
        v[0] = binom(d as u64 + n as u64, n as u64);
    } else if d <= -(n as i64) - 1 {
        v[n] = binom((-d - 1) as u64, n as u64);
    }
    v
}

/// Exact cohomology of `O(d_1, ..., d_k)` on `P^{n_1} x ... x P^{n_k}`
/// as the Kuenneth convolution of the factor tables.
pub fn bott_kunneth_table(
    dims: &[usize],
    multidegree: &[i64],
) -> Result<CohomTable, CharClassError> {
    if dims.len() != multidegree.len() {
        return Err(CharClassError::ShapeMismatch(format!(
            "{} factors vs {} degrees",
            dims.len(),
            multidegree.len()
        )));
    }
    let mut table = vec![1u64];
    for (&n, &d) in dims.iter().zip(multidegree) {
        let factor = bott_factor(n, d);
        let mut next = vec![0u64; table.len() + n];
        for (i, &a) in table.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in factor.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        table = next;
    }
    Ok(CohomTable::exact(table))
}

#[derive(Clone)]
struct Knowledge {
    exact: Vec<Option<u64>>,
    bound: Vec<u64>,
    chi: i64,
}

impl Knowledge {
    fn from_table(t: &CohomTable, len: usize) -> Self {
        let exact = (0..len).map(|i| Some(t.h(i))).collect();
        let bound = (0..len).map(|i| t.h(i)).collect();
        Knowledge { exact, bound, chi: t.chi() }
    }

    fn get(&self, i: usize) -> Option<u64> {
        self.exact.get(i).copied().unwrap_or(Some(0))
    }

    fn get_bound(&self, i: usize) -> u64 {
        self.bound.get(i).copied().unwrap_or(0)
    }
}

/// One long-exact-sequence step for `0 -> A -> B -> C -> 0` with the middle
/// table exact: `H^i(C)` is determined whenever the vanishing pattern forces
/// it, otherwise only an upper bound is recorded.
fn les_solve(a: &Knowledge, b: &CohomTable, len: usize) -> Knowledge {
    let mut out = Knowledge { exact: vec![None; len], bound: vec![0; len], chi: b.chi() - a.chi };
    for i in 0..len {
        let bi = b.h(i);
        let bi1 = b.h(i + 1);
        out.bound[i] = bi + a.get_bound(i + 1);
        out.exact[i] = match (a.get(i), a.get(i + 1)) {
            (Some(0), Some(0)) => Some(bi),
            (_, Some(x)) if bi == 0 && bi1 == 0 => Some(x),
            (_, Some(0)) if bi == 0 => Some(0),
            (Some(0), Some(x)) if bi1 == 0 => Some(bi + x),
            _ => None,
        };
    }
    out
}

/// Cohomology of the sheaf `G` resolved by split bundles
///
/// ```text
/// 0 -> T_m -> ... -> T_1 -> T_0 -> G -> 0,
/// ```
///
/// twisted by `O(twist)`.  `terms[j]` lists the line-bundle multidegrees of
/// `T_j`, so `terms` runs from the degree-zero term leftwards.  When every
/// long exact sequence in the splitting of the resolution is forced by
/// vanishing the result is exact; otherwise it degrades to Euler-only with
/// per-degree upper bounds.  Connecting-map ranks are never guessed.
pub fn resolution_sheaf_cohomology(
    dims: &[usize],
    terms: &[Vec<Vec<i64>>],
    twist: &[i64],
) -> Result<CohomTable, CharClassError> {
    if terms.is_empty() {
        return Err(CharClassError::ShapeMismatch("empty resolution".into()));
    }
    let len = dims.iter().sum::<usize>() + 2;
    let table_of = |summands: &Vec<Vec<i64>>| -> Result<CohomTable, CharClassError> {
        let mut acc = vec![0u64; len];
        for s in summands {
            if s.len() != dims.len() {
                return Err(CharClassError::ShapeMismatch(format!(
                    "{} degrees for {} factors",
                    s.len(),
                    dims.len()
                )));
            }
            let shifted: Vec<i64> = s.iter().zip(twist).map(|(x, t)| x + t).collect();
            let t = bott_kunneth_table(dims, &shifted)?;
            for (i, slot) in acc.iter_mut().enumerate() {
                *slot += t.h(i);
            }
        }
        Ok(CohomTable::exact(acc))
    };
    let m = terms.len() - 1;
    if m == 0 {
        return table_of(&terms[0]);
    }
    // K_{m-1} = T_m, then 0 -> K_j -> T_j -> K_{j-1} -> 0 downwards, and
    // finally 0 -> K_0 -> T_0 -> G -> 0.
    let mut k = Knowledge::from_table(&table_of(&terms[m])?, len);
    for j in (1..m).rev() {
        k = les_solve(&k, &table_of(&terms[j])?, len);
    }
    let g = les_solve(&k, &table_of(&terms[0])?, len);
    if g.exact.iter().all(|x| x.is_some()) {
        let dims_out: Vec<u64> = g.exact.iter().map(|x| x.unwrap()).collect();
        let t = CohomTable::exact(dims_out);
        debug_assert_eq!(t.chi(), g.chi);
        Ok(t)
    } else {
        Ok(CohomTable::euler_only(g.bound, g.chi))
    }
}

/// Euler characteristic of `O(multidegree)` by the closed product formula,
/// with binomials extended polynomially.
pub fn chi_closed_product(dims: &[usize], multidegree: &[i64]) -> i64 {
    let mut chi = 1i64;
    for (&n, &d) in dims.iter().zip(multidegree) {
        let mut num = 1i64;
        for i in 1..=(n as i64) {
            num *= d + i;
        }
        let mut den = 1i64;
        for i in 1..=(n as i64) {
            den *= i;
        }
        chi *= num / den;
    }
    chi
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn p122() -> Arc<ChowRing> {
        ChowRing::multiproj(&[1, 2, 2]).unwrap()
    }

    /// Ambient ring of the pencil: the projectivization of
    /// O(0,2,0) + O(0,0,2) over P^1 x P^2 x P^2.
    fn pencil_ambient() -> Arc<ChowRing> {
        let base = p122();
        let a = base.generator(1);
        let b = base.generator(2);
        let c1 = &a.scale(2) + &b.scale(2);
        let c2 = a.scale(2) * b.scale(2);
        ChowRing::bundle_over(&base, vec![c1, c2]).unwrap()
    }

    fn pencil_ci() -> CompleteIntersection {
        let ring = pencil_ambient();
        let h = ring.generator_named("h").unwrap();
        let xi = ring.generator_named("xi").unwrap();
        let d = &h + &xi;
        CompleteIntersection::new(&ring, vec![d.clone(), d.clone(), d]).unwrap()
    }

    #[test]
    fn chern_total_examples() {
        let p22 = ChowRing::multiproj(&[2, 2]).unwrap();
        let a = p22.generator(0);
        let b = p22.generator(1);
        let e = BundleExpr::sum_of_line_bundles(&p22, &[vec![2, 0], vec![0, 2]]).unwrap();
        // (1+2a)(1+2b) = 1 + (2a+2b) + 4ab
        let expected = &(&p22.one() + &(&a.scale(2) + &b.scale(2))) + &(a.scale(4) * &b);
        assert_eq!(e.chern_total(), expected);

        let triv = BundleExpr::trivial(&p22, 3);
        assert_eq!(triv.chern_total(), p22.one());
        assert_eq!(triv.rank(), 3);

        let r = p122();
        let e = BundleExpr::sum_of_line_bundles(&r, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let h = r.generator(0);
        let a = r.generator(1);
        let b = r.generator(2);
        let l1 = &h + &a.scale(2);
        let l2 = &h + &b.scale(2);
        let expected = &(&r.one() + &(&l1 + &l2)) + &(&l1 * &l2);
        assert_eq!(e.chern_total(), expected);
    }

    #[test]
    fn whitney_on_random_sums() {
        let r = p122();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let mk = |rng: &mut StdRng| {
                let n = rng.gen_range(1..4usize);
                let degs: Vec<Vec<i64>> = (0..n)
                    .map(|_| (0..3).map(|_| rng.gen_range(-2i64..=2)).collect())
                    .collect();
                BundleExpr::sum_of_line_bundles(&r, &degs).unwrap()
            };
            let e = mk(&mut rng);
            let f = mk(&mut rng);
            let sum = e.direct_sum(&f);
            assert_eq!(sum.chern_total(), &e.chern_total() * &f.chern_total());
            assert_eq!(sum.rank(), e.rank() + f.rank());
        }
    }

    #[test]
    fn tangent_classes() {
        let p2 = ChowRing::multiproj(&[2]).unwrap();
        let a = p2.generator(0);
        let expected = &(&p2.one() + &a.scale(3)) + &a.pow(2).scale(3);
        assert_eq!(tangent_class(&p2), expected);

        let p12 = ChowRing::multiproj(&[1, 2]).unwrap();
        let h = p12.generator(0);
        let a = p12.generator(1);
        let expected = (&p12.one() + &h).pow(2) * (&p12.one() + &a).pow(3);
        assert_eq!(tangent_class(&p12), expected);
    }

    #[test]
    fn hirzebruch_surface_euler_number() {
        // P(O + O(1)) over P^1 has chi_top = 4, like every rational ruled
        // surface
        let p1 = ChowRing::multiproj(&[1]).unwrap();
        let h = p1.generator(0);
        let ring = ChowRing::bundle_over(&p1, vec![h.clone(), p1.zero()]).unwrap();
        let c2 = tangent_class(&ring).component(2);
        assert_eq!(c2.integrate(), BigInt::from(4));
    }

    #[test]
    fn degeneracy_class_examples() {
        let r = p122();
        let h = r.generator(0);
        let a = r.generator(1);
        let b = r.generator(2);

        let target = BundleExpr::sum_of_line_bundles(&r, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let cls = degeneracy_class(3, &target, 1).unwrap();
        assert_eq!(cls, &target.chern(1).pow(2) - &target.chern(2));
        let expected = &(&(&(&(&h * &a.scale(6)) + &(&h * &b.scale(6))) + &a.pow(2).scale(4))
            + &(&a * &b).scale(4))
            + &b.pow(2).scale(4);
        assert_eq!(cls, expected);

        // special-fiber target O(1,2,0) + O(0,0,2)
        let target = BundleExpr::sum_of_line_bundles(&r, &[vec![1, 2, 0], vec![0, 0, 2]]).unwrap();
        let cls = degeneracy_class(3, &target, 1).unwrap();
        let expected = &(&(&(&(&h * &a.scale(4)) + &(&h * &b.scale(2))) + &a.pow(2).scale(4))
            + &(&a * &b).scale(4))
            + &b.pow(2).scale(4);
        assert_eq!(cls, expected);

        // square case: determinantal hypersurface class is c1
        let cls = degeneracy_class(2, &target, 1).unwrap();
        assert_eq!(cls, target.chern(1));

        // expected codimension beyond the ambient dimension is rejected
        let p2 = ChowRing::multiproj(&[2]).unwrap();
        let t = BundleExpr::sum_of_line_bundles(&p2, &[vec![1], vec![1], vec![1]]).unwrap();
        assert!(matches!(
            degeneracy_class(5, &t, 1),
            Err(CharClassError::CodimensionTooLarge { .. })
        ));
    }

    #[test]
    fn degeneracy_matches_symbolic_determinant_randomized() {
        let r = p122();
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..20 {
            let degs: Vec<Vec<i64>> = (0..2)
                .map(|_| (0..3).map(|_| rng.gen_range(0i64..=2)).collect())
                .collect();
            let target = BundleExpr::sum_of_line_bundles(&r, &degs).unwrap();
            let cls = degeneracy_class(3, &target, 1).unwrap();
            assert_eq!(cls, &target.chern(1).pow(2) - &target.chern(2));
        }
    }

    #[test]
    fn euler_number_of_the_pencil_threefold() {
        assert_eq!(euler_characteristic_top(&pencil_ci()), BigInt::from(-36));
    }

    #[test]
    fn euler_number_oracles() {
        // quartic K3 in P^3
        let p3 = ChowRing::multiproj(&[3]).unwrap();
        let a = p3.generator(0);
        let k3 = CompleteIntersection::new(&p3, vec![a.scale(4)]).unwrap();
        assert_eq!(euler_characteristic_top(&k3), BigInt::from(24));

        // ambient itself
        let p2 = ChowRing::multiproj(&[2]).unwrap();
        let amb = CompleteIntersection::new(&p2, vec![]).unwrap();
        assert_eq!(euler_characteristic_top(&amb), BigInt::from(3));

        // (1,2)^3 complete intersection in P^1 x P^5: the minimal double
        // cover of the pencil; value expanded by hand
        let p15 = ChowRing::multiproj(&[1, 5]).unwrap();
        let d = &p15.generator(0) + &p15.generator(1).scale(2);
        let ci = CompleteIntersection::new(&p15, vec![d.clone(), d.clone(), d]).unwrap();
        assert_eq!(euler_characteristic_top(&ci), BigInt::from(-192));
    }

    #[test]
    fn canonical_class_examples() {
        let ring = pencil_ambient();
        let h = ring.generator_named("h").unwrap();
        let a = ring.generator_named("a").unwrap();
        let b = ring.generator_named("b").unwrap();
        let xi = ring.generator_named("xi").unwrap();
        let k = canonical_class(&pencil_ci());
        let expected = &(&(&h - &a) - &b) + &xi;
        assert_eq!(k, expected);
        // ambient form of the double canonical identity with section classes
        // xi - 2b and xi - 2a
        let lhs = k.scale(2);
        let rhs = &(&h.scale(2) + &(&xi - &b.scale(2))) + &(&xi - &a.scale(2));
        assert_eq!(lhs, rhs);

        let p3 = ChowRing::multiproj(&[3]).unwrap();
        let a = p3.generator(0);
        let k3 = CompleteIntersection::new(&p3, vec![a.scale(4)]).unwrap();
        assert!(canonical_class(&k3).is_zero());

        let p22 = ChowRing::multiproj(&[2, 2]).unwrap();
        let anti = &p22.generator(0).scale(3) + &p22.generator(1).scale(3);
        let ci = CompleteIntersection::new(&p22, vec![anti]).unwrap();
        assert!(canonical_class(&ci).is_zero());
    }

    #[test]
    fn canonical_is_minus_c1_of_tangent() {
        for ring in [p122(), pencil_ambient(), ChowRing::multiproj(&[3]).unwrap()] {
            let ci = CompleteIntersection::new(&ring, vec![]).unwrap();
            assert_eq!(canonical_class(&ci), -tangent_class(&ring).component(1));
        }
    }

    #[test]
    fn hrr_on_projective_plane() {
        let p2 = ChowRing::multiproj(&[2]).unwrap();
        let a = p2.generator(0);
        let amb = CompleteIntersection::new(&p2, vec![]).unwrap();
        for d in -5i64..=5 {
            let chi = hrr_chi(&amb, &a.scale(d)).unwrap();
            assert_eq!(chi, BigInt::from((d + 1) * (d + 2) / 2), "twist {d}");
        }
    }

    #[test]
    fn hrr_examples() {
        let p12 = ChowRing::multiproj(&[1, 2]).unwrap();
        let amb = CompleteIntersection::new(&p12, vec![]).unwrap();
        let t = p12.line_class(&[-2, -2]);
        assert_eq!(hrr_chi(&amb, &t).unwrap(), BigInt::zero());

        // structure sheaf of the pencil threefold
        let ci = pencil_ci();
        let z = ci.ambient.zero();
        assert_eq!(hrr_chi(&ci, &z).unwrap(), BigInt::one());
    }

    #[test]
    fn bott_tables() {
        let t = bott_kunneth_table(&[2], &[-4]).unwrap();
        assert_eq!(t.dims(), &[0, 0, 3]);
        assert!(t.is_exact());

        let t = bott_kunneth_table(&[1, 2, 2], &[-2, -2, -2]).unwrap();
        assert!(t.is_zero());

        let t = bott_kunneth_table(&[1, 2, 2], &[-3, -4, -2]).unwrap();
        assert!(t.is_zero());

        // Kuenneth placement: h^0(P^1) x h^2(P^2) x h^0(P^2)
        let t = bott_kunneth_table(&[1, 2, 2], &[0, -4, 0]).unwrap();
        assert_eq!(t.h(2), 3);
        assert_eq!(t.dims().iter().sum::<u64>(), 3);
    }

    #[test]
    fn bott_hrr_agreement_randomized() {
        let dims = [1usize, 2, 2];
        let ring = p122();
        let amb = CompleteIntersection::new(&ring, vec![]).unwrap();
        let mut rng = StdRng::seed_from_u64(97);
        for _ in 0..100 {
            let d: Vec<i64> = (0..3).map(|_| rng.gen_range(-6i64..=6)).collect();
            let table = bott_kunneth_table(&dims, &d).unwrap();
            let closed = chi_closed_product(&dims, &d);
            assert_eq!(table.chi(), closed, "degrees {d:?}");
            let chi = hrr_chi(&amb, &ring.line_class(&d)).unwrap();
            assert_eq!(chi, BigInt::from(closed), "degrees {d:?}");
        }
    }

    #[test]
    fn resolution_of_the_structure_sheaf() {
        let dims = [1usize, 2, 2];
        let terms = vec![
            vec![vec![0, 0, 0]],
            vec![vec![-2, -2, -2], vec![-2, -2, -2], vec![-2, -2, -2]],
            vec![vec![-3, -4, -2], vec![-3, -2, -4]],
        ];
        let t = resolution_sheaf_cohomology(&dims, &terms, &[0, 0, 0]).unwrap();
        assert!(t.is_exact());
        assert_eq!(t.h(0), 1);
        for i in 1..=5 {
            assert_eq!(t.h(i), 0, "h^{i}");
        }
        assert_eq!(t.chi(), 1);
    }

    #[test]
    fn resolution_single_term_is_bott() {
        let dims = [1usize, 2, 2];
        for d in [[0, -4, 0], [2, 1, -3], [-2, -2, -2]] {
            let t = resolution_sheaf_cohomology(&dims, &[vec![vec![0, 0, 0]]], &d).unwrap();
            assert_eq!(t, bott_kunneth_table(&dims, &d).unwrap());
        }
    }

    #[test]
    fn resolution_of_the_ideal_sheaf() {
        let dims = [1usize, 2, 2];
        let terms = vec![
            vec![vec![-2, -2, -2], vec![-2, -2, -2], vec![-2, -2, -2]],
            vec![vec![-3, -4, -2], vec![-3, -2, -4]],
        ];
        let t = resolution_sheaf_cohomology(&dims, &terms, &[0, 0, 0]).unwrap();
        assert!(t.is_exact());
        assert!(t.is_zero());
    }

    #[test]
    fn resolution_forced_and_unforced_cases() {
        // 0 -> O(-2) -> O -> G -> 0 on P^1: H^1(O(-2)) = 1 feeds H^0(G) and
        // the junction is forced by vanishing
        let t = resolution_sheaf_cohomology(&[1], &[vec![vec![0]], vec![vec![-2]]], &[0]).unwrap();
        assert!(t.is_exact());
        assert_eq!((t.h(0), t.h(1)), (2, 0));

        // kernel and middle term both have h^1 != 0: the connecting rank is
        // not forced, so only the Euler characteristic is asserted
        let t =
            resolution_sheaf_cohomology(&[1], &[vec![vec![-2]], vec![vec![-2]]], &[0]).unwrap();
        assert!(!t.is_exact());
        assert_eq!(t.chi(), 0);
        assert_eq!((t.h(0), t.h(1)), (1, 1));
    }

    #[test]
    fn euler_betti_bookkeeping() {
        // with b0 = b6 = 1, b1 = b5 = 0, b2 = b4 = 26, chi = -36 forces
        // b3 = 90
        let chi = euler_characteristic_top(&pencil_ci()).to_i64().unwrap();
        let (b0, b1, b2) = (1i64, 0i64, 26i64);
        let b3 = 2 * b0 + 2 * b2 - 2 * b1 - chi;
        assert_eq!(b3, 90);
    }
}
