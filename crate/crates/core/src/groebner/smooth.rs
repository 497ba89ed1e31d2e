//! Chart-wise smoothness certificates and a point-sampling probe.
//!
//! The certificate replaces a Bertini-style generality appeal by explicit
//! computation on the chosen instance: on every affine chart the ideal of
//! the subscheme together with the expected-codimension minors of its
//! Jacobian must define the empty set.  Emptiness over the algebraic closure
//! is certified by `1` appearing in a Groebner basis, so a "smooth" verdict
//! is sound; budget exhaustion downgrades a chart to inconclusive, never to
//! a claim.
//!
//! The probe is the cheap falsification partner: it finds actual points of
//! the variety over the prime field and its small extensions by intersecting
//! with random lines, evaluates the Jacobian there, and reports any
//! rank-deficient point as a certified singular point.  It never claims
//! smoothness.

use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::mpoly::{jacobian, Coef, Field, MPoly};

use super::univar::{small_degree_factors, ExtElem, ExtField, FpPoly};
use super::{buchberger, CellDecomposition, GroebnerError};

/// Status of one chart in a smoothness certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    SmoothCertified,
    Singular,
    Inconclusive,
}

impl std::fmt::Display for CellStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CellStatus::SmoothCertified => write!(f, "smooth-certified"),
            CellStatus::Singular => write!(f, "singular"),
            CellStatus::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellRecord {
    pub label: String,
    pub status: CellStatus,
    pub steps: u64,
    pub millis: u128,
}

#[derive(Debug, Clone)]
pub struct SmoothnessReport {
    pub cells: Vec<CellRecord>,
}

impl SmoothnessReport {
    pub fn all_smooth(&self) -> bool {
        self.cells.iter().all(|c| c.status == CellStatus::SmoothCertified)
    }

    pub fn any_singular(&self) -> bool {
        self.cells.iter().any(|c| c.status == CellStatus::Singular)
    }

    pub fn any_inconclusive(&self) -> bool {
        self.cells.iter().any(|c| c.status == CellStatus::Inconclusive)
    }

    pub fn certified(&self) -> usize {
        self.cells.iter().filter(|c| c.status == CellStatus::SmoothCertified).count()
    }
}

/// Jacobian-criterion certificate for a multihomogeneous ideal expected to
/// be of pure codimension `expected_codim`.  On every chart the
/// dehomogenized ideal plus the `c x c` minors of the Jacobian of its
/// generators is tested for emptiness.  Charts run in parallel, each with
/// its own step budget.
pub fn smoothness_certificate(
    gens: &[MPoly],
    expected_codim: usize,
    decomp: &CellDecomposition,
    budget: u64,
) -> SmoothnessReport {
    let cells: Vec<CellRecord> = decomp
        .cells()
        .par_iter()
        .map(|cell| {
            let start = Instant::now();
            let restricted: Vec<MPoly> =
                gens.iter().map(|g| cell.restrict_to_chart(g)).filter(|g| !g.is_zero()).collect();
            let (status, steps) = certify_chart(&restricted, expected_codim, &cell.chart_ring, budget);
            CellRecord {
                label: cell.label.clone(),
                status,
                steps,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();
    SmoothnessReport { cells }
}

fn certify_chart(
    restricted: &[MPoly],
    expected_codim: usize,
    chart_ring: &Arc<crate::mpoly::PolyRing>,
    budget: u64,
) -> (CellStatus, u64) {
    if restricted.is_empty() {
        // the whole chart satisfies the equations; it is singular as a
        // degenerate locus only if the expected codimension is positive
        return if expected_codim == 0 {
            (CellStatus::SmoothCertified, 0)
        } else {
            (CellStatus::Singular, 0)
        };
    }
    let nvars = chart_ring.num_vars();
    let vars: Vec<usize> = (0..nvars).collect();
    let jac = match jacobian(restricted, &vars) {
        Ok(j) => j,
        Err(_) => return (CellStatus::Inconclusive, 0),
    };
    let minors = match jac.minors(expected_codim.min(restricted.len()).min(nvars.max(1))) {
        Ok(m) => m,
        Err(_) => return (CellStatus::Inconclusive, 0),
    };
    let mut ideal: Vec<MPoly> = restricted.to_vec();
    ideal.extend(minors.into_iter().filter(|m| !m.is_zero()));
    match buchberger(&ideal, budget) {
        Ok(gb) => {
            let status =
                if gb.contains_one() { CellStatus::SmoothCertified } else { CellStatus::Singular };
            (status, gb.steps_used())
        }
        Err(GroebnerError::BudgetExceeded { steps }) => (CellStatus::Inconclusive, steps),
        Err(_) => (CellStatus::Inconclusive, 0),
    }
}

/// A point found by the probe, with the Jacobian rank observed there.
#[derive(Debug, Clone)]
pub struct ProbePoint {
    pub cell: String,
    /// minimal polynomial of the coordinate extension (degree 1 means a
    /// rational point)
    pub residue_degree: usize,
    pub jacobian_rank: usize,
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub points_checked: usize,
    pub singular_points: Vec<ProbePoint>,
    pub lines_tried: usize,
}

impl ProbeReport {
    pub fn found_singularity(&self) -> bool {
        !self.singular_points.is_empty()
    }
}

/// Sample up to `samples` points of the variety over `F_p` and extensions of
/// degree at most `ext_bound` by intersecting the charts with random lines
/// and factoring the resulting univariate system; evaluate the Jacobian rank
/// at every point found.  Errors if no point is located at all.
pub fn smoothness_probe(
    gens: &[MPoly],
    expected_codim: usize,
    decomp: &CellDecomposition,
    samples: usize,
    ext_bound: usize,
    seed: u64,
) -> Result<ProbeReport, GroebnerError> {
    let p = match decomp.source().field() {
        Field::Fp(p) => p,
        Field::Q => return Err(GroebnerError::NotAffine),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0usize;
    let mut singular = Vec::new();
    let mut lines = 0usize;
    let max_lines = samples.saturating_mul(400).max(2000);

    // restrict generators and Jacobians to every chart once
    struct ChartData {
        label: String,
        gens: Vec<MPoly>,
        jac: Vec<Vec<MPoly>>, // rows x cols
    }
    let charts: Vec<ChartData> = decomp
        .cells()
        .iter()
        .map(|cell| {
            let restricted: Vec<MPoly> =
                gens.iter().map(|g| cell.restrict_to_chart(g)).collect();
            let nv = cell.chart_ring.num_vars();
            let vars: Vec<usize> = (0..nv).collect();
            let jac: Vec<Vec<MPoly>> = restricted
                .iter()
                .map(|g| vars.iter().map(|&v| g.derivative(v)).collect())
                .collect();
            ChartData { label: cell.label.clone(), gens: restricted, jac }
        })
        .collect();

    'sampling: while checked < samples && lines < max_lines {
        for chart in &charts {
            if checked >= samples || lines >= max_lines {
                break 'sampling;
            }
            lines += 1;
            let nv = chart.gens.first().map(|g| g.ring().num_vars()).unwrap_or(0);
            if nv == 0 {
                continue;
            }
            let base: Vec<u64> = (0..nv).map(|_| rng.gen_range(0..p)).collect();
            let dir: Vec<u64> = (0..nv).map(|_| rng.gen_range(0..p)).collect();
            if dir.iter().all(|&d| d == 0) {
                continue;
            }
            // substitute x_i = base_i + t * dir_i into every generator
            let mut gcd: Option<FpPoly> = None;
            for g in &chart.gens {
                let u = restrict_to_line(g, &base, &dir, p);
                gcd = Some(match gcd {
                    None => u,
                    Some(d) => d.gcd(&u),
                });
                if gcd.as_ref().map(|d| d.is_constant() && !d.is_zero()).unwrap_or(false) {
                    break;
                }
            }
            let Some(u) = gcd else { continue };
            if u.is_zero() || u.is_constant() {
                continue;
            }
            for factor in small_degree_factors(&u, ext_bound, &mut rng) {
                if checked >= samples {
                    break 'sampling;
                }
                let k = factor.c.len() - 1;
                let fq = ExtField::new(factor.clone());
                let theta = fq.root();
                // point coordinates over the extension
                let point: Vec<ExtElem> = (0..nv)
                    .map(|i| fq.add(&fq.from_fp(base[i]), &fq.mul(&fq.from_fp(dir[i]), &theta)))
                    .collect();
                // paranoia: the point really lies on the variety
                debug_assert!(chart
                    .gens
                    .iter()
                    .all(|g| fq.is_zero(&eval_ext(g, &point, &fq))));
                let rank = jacobian_rank_ext(&chart.jac, &point, &fq);
                checked += 1;
                if rank < expected_codim {
                    singular.push(ProbePoint {
                        cell: chart.label.clone(),
                        residue_degree: k,
                        jacobian_rank: rank,
                    });
                }
            }
        }
    }
    if checked == 0 {
        return Err(GroebnerError::PointLocationFailure { lines });
    }
    Ok(ProbeReport { points_checked: checked, singular_points: singular, lines_tried: lines })
}

/// Substitute `x_i = base_i + t dir_i` to get a univariate polynomial.
fn restrict_to_line(g: &MPoly, base: &[u64], dir: &[u64], p: u64) -> FpPoly {
    let mut acc = FpPoly::zero(p);
    for (exps, coef) in g.terms() {
        let c = match coef {
            Coef::Fp(c) => *c,
            Coef::Q(_) => unreachable!("probe runs over a prime field"),
        };
        let mut term = FpPoly::constant(p, c);
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let lin = FpPoly::new(p, vec![base[i], dir[i]]);
            for _ in 0..e {
                term = term.mul(&lin);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

fn eval_ext(g: &MPoly, point: &[ExtElem], fq: &ExtField) -> ExtElem {
    let mut acc = fq.from_fp(0);
    for (exps, coef) in g.terms() {
        let c = match coef {
            Coef::Fp(c) => *c,
            Coef::Q(_) => unreachable!(),
        };
        let mut term = fq.from_fp(c);
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                term = fq.mul(&term, &point[i]);
            }
        }
        acc = fq.add(&acc, &term);
    }
    acc
}

/// Rank of the Jacobian matrix evaluated at an extension-field point.
fn jacobian_rank_ext(jac: &[Vec<MPoly>], point: &[ExtElem], fq: &ExtField) -> usize {
    let mut rows: Vec<Vec<ExtElem>> = jac
        .iter()
        .map(|row| row.iter().map(|e| eval_ext(e, point, fq)).collect())
        .collect();
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0usize;
    let mut col = 0usize;
    while rank < nrows && col < ncols {
        // find a pivot
        let pivot = (rank..nrows).find(|&r| !fq.is_zero(&rows[r][col]));
        let Some(pr) = pivot else {
            col += 1;
            continue;
        };
        rows.swap(rank, pr);
        let inv = fq.inv(&rows[rank][col].clone());
        for c in col..ncols {
            rows[rank][c] = fq.mul(&rows[rank][c], &inv);
        }
        for r in 0..nrows {
            if r != rank && !fq.is_zero(&rows[r][col]) {
                let f = rows[r][col].clone();
                for c in col..ncols {
                    let s = fq.mul(&f, &rows[rank][c]);
                    rows[r][c] = fq.sub(&rows[r][c], &s);
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::DEFAULT_BUDGET;
    use crate::mpoly::{random_form, PolyRing};

    fn p2_ring(p: u64) -> Arc<PolyRing> {
        PolyRing::multigraded(Field::Fp(p), &[("x", &["X0", "X1", "X2"])])
    }

    #[test]
    fn smooth_conic_certifies() {
        let r = p2_ring(101);
        let d = CellDecomposition::of_ring(&r).unwrap();
        // X0^2 + X1^2 + X2^2 is smooth for p != 2
        let f = r.var(0).pow(2).add(&r.var(1).pow(2)).add(&r.var(2).pow(2));
        let report = smoothness_certificate(&[f], 1, &d, DEFAULT_BUDGET);
        assert!(report.all_smooth(), "{:?}", report.cells);
        assert_eq!(report.cells.len(), 3);
    }

    #[test]
    fn singular_pair_of_lines_detected() {
        let r = p2_ring(101);
        let d = CellDecomposition::of_ring(&r).unwrap();
        // X0 * X1 has a node at [0:0:1]
        let f = r.var(0).mul(&r.var(1));
        let report = smoothness_certificate(&[f], 1, &d, DEFAULT_BUDGET);
        assert!(report.any_singular());
        assert!(!report.all_smooth());
    }

    #[test]
    fn probe_agrees_with_certificate() {
        let r = p2_ring(101);
        let d = CellDecomposition::of_ring(&r).unwrap();
        let smooth = r.var(0).pow(2).add(&r.var(1).pow(2)).add(&r.var(2).pow(2));
        let probe = smoothness_probe(&[smooth], 1, &d, 50, 2, 11).unwrap();
        assert!(probe.points_checked > 0);
        assert!(!probe.found_singularity());

        // a doubled line is singular at every point, so the probe must
        // flag whatever it samples
        let double_line = r.var(0).pow(2);
        let probe = smoothness_probe(&[double_line.clone()], 1, &d, 50, 2, 11).unwrap();
        assert!(probe.found_singularity(), "checked {}", probe.points_checked);
        for pt in &probe.singular_points {
            assert!(pt.jacobian_rank < 1);
        }
        // and the certificate agrees
        let report = smoothness_certificate(&[double_line], 1, &d, DEFAULT_BUDGET);
        assert!(report.any_singular());
    }

    #[test]
    fn probe_fails_on_empty_variety() {
        let r = p2_ring(101);
        let d = CellDecomposition::of_ring(&r).unwrap();
        // three general conics have no common point
        let gens: Vec<MPoly> = (0..3).map(|i| random_form(&r, &[2], 31 + i)).collect();
        match smoothness_probe(&gens, 2, &d, 5, 2, 1) {
            Err(GroebnerError::PointLocationFailure { .. }) => {}
            other => panic!("expected point-location failure, got {other:?}"),
        }
    }

    #[test]
    fn enriques_surface_instance_certifies() {
        // 2x2 minors of a general 2x3 matrix with rows of bidegree (2,0) and
        // (0,2) on P^2 x P^2: smooth surface on all 9 charts
        let r = PolyRing::multigraded(
            Field::Fp(101),
            &[("x", &["X0", "X1", "X2"]), ("y", &["Y0", "Y1", "Y2"])],
        );
        let d = CellDecomposition::of_ring(&r).unwrap();
        let row1: Vec<MPoly> = (0..3).map(|i| random_form(&r, &[2, 0], 100 + i)).collect();
        let row2: Vec<MPoly> = (0..3).map(|i| random_form(&r, &[0, 2], 200 + i)).collect();
        let m = crate::mpoly::PolyMatrix::new(&r, vec![row1, row2]).unwrap();
        let minors = m.minors(2).unwrap();
        let report = smoothness_certificate(&minors, 2, &d, DEFAULT_BUDGET);
        assert_eq!(report.cells.len(), 9);
        assert!(report.all_smooth(), "{:?}", report.cells);
    }
}
