//! Locally linearly dependent operator families.
//!
//! `T_1, …, T_d: K^a → K^b` are locally linearly dependent (LLD) when
//! `T_1v, …, T_dv` are dependent for every `v`. Some nontrivial combination
//! of an LLD family then has rank at most `d − 1`, and certainly at most
//! Amitsur's `C(d+1, 2) − 1`. This module decides LLD at small sizes, searches
//! for low-rank combinations and sweeps whole configurations.

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::matrix::Matrix;
use crate::projective::{within_budget, ProjectiveSweep};

/// Largest `q^a` (domain sweep) or `q^d` (coefficient sweep) enumerated.
pub const SWEEP_BUDGET: u64 = 1 << 20;

/// Largest number of families in an exhaustive configuration sweep.
pub const FAMILY_BUDGET: u64 = 1 << 24;

/// Coefficient range for the search over the rationals.
pub const RATIONAL_GRID: i64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorFamily<F: Field> {
    field: F,
    domain_dim: usize,
    codomain_dim: usize,
    ops: Vec<Matrix<F>>,
}

impl<F: Field> OperatorFamily<F> {
    pub fn new(field: &F, ops: Vec<Matrix<F>>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidParameter("an operator family needs d ≥ 1".into()))?;
        let (b, a) = (first.rows(), first.cols());
        for m in &ops {
            if m.field() != field {
                return Err(Error::FieldMismatch(field.spec().to_string(), m.field().spec().to_string()));
            }
            if m.rows() != b || m.cols() != a {
                return Err(Error::DimensionMismatch {
                    context: "operator family",
                    expected: format!("{b}x{a}"),
                    found: format!("{}x{}", m.rows(), m.cols()),
                });
            }
        }
        Ok(OperatorFamily { field: field.clone(), domain_dim: a, codomain_dim: b, ops })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Matrix<F>] {
        &self.ops
    }

    /// `Σ c_i T_i`.
    pub fn combination(&self, coeffs: &[F::Elem]) -> Matrix<F> {
        let mut out = Matrix::zeros(&self.field, self.codomain_dim, self.domain_dim);
        for (c, m) in coeffs.iter().zip(&self.ops) {
            if !self.field.is_zero(c) {
                out.add_scaled(c, m).expect("shapes agree");
            }
        }
        out
    }

    /// Whether `T_1v, …, T_dv` are linearly dependent.
    pub fn dependent_at(&self, v: &[F::Elem]) -> bool {
        let images: Vec<Vec<F::Elem>> =
            self.ops.iter().map(|m| m.mul_vec(v).expect("length checked")).collect();
        let m = Matrix::from_columns(&self.field, self.codomain_dim, &images).expect("lengths agree");
        m.rank() < self.ops.len()
    }
}

/// Nontrivial combination with its rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowRankWitness<F: Field> {
    pub coeffs: Vec<F::Elem>,
    pub combination_rank: usize,
}

impl<F: Field> LowRankWitness<F> {
    /// Recomputes the rank from the family.
    pub fn recompute(&self, fam: &OperatorFamily<F>) -> usize {
        fam.combination(&self.coeffs).rank()
    }
}

/// Decision with a certificate of independence when the family is not LLD.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LldDecision<F: Field> {
    pub lld: bool,
    /// A vector `v` with `T_1v, …, T_dv` independent.
    pub independent_at: Option<Vec<F::Elem>>,
}

fn grid_points<F: Field>(field: &F, dim: usize, points: i64) -> impl Iterator<Item = Vec<F::Elem>> + '_ {
    let total = (points as u64).pow(dim as u32);
    (0..total).map(move |mut idx| {
        (0..dim)
            .map(|_| {
                let x = (idx % points as u64) as i64;
                idx /= points as u64;
                field.from_i64(x)
            })
            .collect()
    })
}

/// Exact LLD decision. Finite fields sweep every line of the domain when
/// `q^a` is within budget. Over the rationals (`a ≤ 4`) every maximal minor
/// of `[T_1v … T_dv]` has degree at most `d` in each coordinate, so vanishing
/// on the grid `{0, …, d·min(a,b)}^a` forces it to vanish identically.
pub fn is_lld<F: Field>(fam: &OperatorFamily<F>) -> Result<LldDecision<F>> {
    let f = fam.field();
    let a = fam.domain_dim;
    let check = |v: Vec<F::Elem>| if fam.dependent_at(&v) { None } else { Some(v) };
    let certificate = match f.order() {
        Some(q) if within_budget(q, a, SWEEP_BUDGET) => {
            ProjectiveSweep::new(f, a)?.find_map(check)
        }
        Some(q) => {
            return Err(Error::UnsupportedSize(format!("domain sweep of {q}^{a} vectors")))
        }
        None if a <= 4 => {
            let points = (fam.len() * a.min(fam.codomain_dim) + 1) as i64;
            grid_points(f, a, points).find_map(check)
        }
        None => {
            return Err(Error::UnsupportedSize(format!(
                "LLD test over the rationals needs domain dimension ≤ 4, got {a}"
            )))
        }
    };
    Ok(LldDecision { lld: certificate.is_none(), independent_at: certificate })
}

/// Result of [`bms_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmsResult<F: Field> {
    pub witness: LowRankWitness<F>,
    /// `combination_rank ≤ d − 1`.
    pub within_bound: bool,
}

fn rational_tuples(d: usize) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * RATIONAL_GRID + 1) as u64;
    (0..side.pow(d as u32)).filter_map(move |mut idx| {
        let mut t = vec![0i64; d];
        for slot in t.iter_mut().rev() {
            *slot = (idx % side) as i64 - RATIONAL_GRID;
            idx /= side;
        }
        let lead = *t.iter().find(|&&x| x != 0)?;
        let g = t.iter().fold(0i64, |g, &x| g.gcd(&x));
        (lead > 0 && g == 1).then_some(t)
    })
}

/// Minimal-rank nontrivial combination. Finite fields sweep every line of
/// coefficient space (`q^d` within budget) in projective order; the
/// rationals sweep primitive integer tuples with entries in `[−8, 8]` and a
/// positive leading entry, lexicographically. Ties keep the first tuple.
pub fn bms_search<F: Field>(fam: &OperatorFamily<F>) -> Result<BmsResult<F>> {
    let f = fam.field();
    let d = fam.len();
    let candidates: Box<dyn Iterator<Item = Vec<F::Elem>>> = match f.order() {
        Some(q) if within_budget(q, d, SWEEP_BUDGET) => Box::new(ProjectiveSweep::new(f, d)?),
        Some(q) => {
            return Err(Error::UnsupportedSize(format!("coefficient sweep of {q}^{d} tuples")))
        }
        None if d <= 3 => Box::new(
            rational_tuples(d).map(move |t| t.into_iter().map(|x| f.from_i64(x)).collect()),
        ),
        None => {
            return Err(Error::UnsupportedSize(format!(
                "coefficient search over the rationals needs d ≤ 3, got {d}"
            )))
        }
    };
    let mut best: Option<LowRankWitness<F>> = None;
    for coeffs in candidates {
        let rank = fam.combination(&coeffs).rank();
        if best.as_ref().is_none_or(|b| rank < b.combination_rank) {
            best = Some(LowRankWitness { coeffs, combination_rank: rank });
            if rank == 0 {
                break;
            }
        }
    }
    let witness = best.expect("at least one coefficient tuple");
    Ok(BmsResult { within_bound: witness.combination_rank < d, witness })
}

/// `C(d+1, 2) − 1`.
pub fn amitsur_bound(d: usize) -> usize {
    d * (d + 1) / 2 - 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SweepMode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

/// Aggregate over every tested family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub field: FieldSpec,
    pub a: usize,
    pub b: usize,
    pub d: usize,
    pub mode: SweepMode,
    pub families_tested: u64,
    pub lld_count: u64,
    pub max_witness_rank: Option<usize>,
    pub bms_violations: u64,
    pub amitsur_violations: u64,
    /// Index and matrices (text format) of the first violating family.
    pub first_violation: Option<(u64, Vec<String>)>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.bms_violations == 0 && self.amitsur_violations == 0
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "field": self.field,
            "a": self.a,
            "b": self.b,
            "d": self.d,
            "mode": self.mode,
            "families_tested": self.families_tested,
            "lld_count": self.lld_count,
            "max_witness_rank": self.max_witness_rank,
            "bms_bound": self.d - 1,
            "amitsur_bound": amitsur_bound(self.d),
            "bms_violations": self.bms_violations,
            "amitsur_violations": self.amitsur_violations,
        });
        if let Some((index, ops)) = &self.first_violation {
            out["first_violation"] = json!({ "index": index, "ops": ops });
        }
        out
    }
}

fn family_from_index<F: Field>(f: &F, q: u64, a: usize, b: usize, d: usize, mut idx: u64) -> Vec<Matrix<F>> {
    (0..d)
        .map(|_| {
            Matrix::from_fn(f, b, a, |_, _| {
                let x = idx % q;
                idx /= q;
                f.element(x)
            })
        })
        .collect()
}

/// Tests every family of `d` operators `K^a → K^b` (or a seeded sample):
/// each LLD family must have a combination of rank `≤ d − 1`, hence also
/// `≤ C(d+1, 2) − 1`.
pub fn verify_bms_sweep<F: Field>(
    field: &F,
    a: usize,
    b: usize,
    d: usize,
    mode: SweepMode,
) -> Result<SweepReport> {
    if a == 0 || b == 0 || d == 0 {
        return Err(Error::InvalidParameter("sweep dimensions must be positive".into()));
    }
    let q = field
        .order()
        .ok_or_else(|| Error::UnsupportedSize("configuration sweeps need a finite field".into()))?;
    let entries = a * b * d;
    let (count, exhaustive) = match mode {
        SweepMode::Exhaustive => {
            if !within_budget(q, entries, FAMILY_BUDGET) {
                return Err(Error::UnsupportedSize(format!("{q}^{entries} families")));
            }
            (q.pow(entries as u32), true)
        }
        SweepMode::Random { samples, .. } => (samples, false),
    };
    let mut rng = match mode {
        SweepMode::Random { seed, .. } => ChaCha8Rng::seed_from_u64(seed),
        SweepMode::Exhaustive => ChaCha8Rng::seed_from_u64(0),
    };
    let mut report = SweepReport {
        field: field.spec(),
        a,
        b,
        d,
        mode,
        families_tested: 0,
        lld_count: 0,
        max_witness_rank: None,
        bms_violations: 0,
        amitsur_violations: 0,
        first_violation: None,
    };
    for i in 0..count {
        let ops = if exhaustive {
            family_from_index(field, q, a, b, d, i)
        } else {
            (0..d).map(|_| Matrix::random(field, b, a, &mut rng, q)).collect()
        };
        let fam = OperatorFamily::new(field, ops)?;
        report.families_tested += 1;
        if !is_lld(&fam)?.lld {
            continue;
        }
        report.lld_count += 1;
        let found = bms_search(&fam)?;
        let rank = found.witness.combination_rank;
        report.max_witness_rank = Some(report.max_witness_rank.map_or(rank, |m| m.max(rank)));
        let bms_bad = rank > d - 1;
        let amitsur_bad = rank > amitsur_bound(d);
        report.bms_violations += u64::from(bms_bad);
        report.amitsur_violations += u64::from(amitsur_bad);
        if (bms_bad || amitsur_bad) && report.first_violation.is_none() {
            report.first_violation = Some((i, fam.ops().iter().map(Matrix::to_text).collect()));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn gf2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn fam<F: Field>(f: &F, ops: &[&[&[i64]]]) -> OperatorFamily<F> {
        OperatorFamily::new(f, ops.iter().map(|m| Matrix::from_i64(f, m)).collect()).unwrap()
    }

    const I2: &[&[i64]] = &[&[1, 0], &[0, 1]];
    const J2: &[&[i64]] = &[&[0, 0], &[1, 0]];
    const E11: &[&[i64]] = &[&[1, 0], &[0, 0]];
    const E12: &[&[i64]] = &[&[0, 1], &[0, 0]];

    #[test]
    fn lld_examples() {
        let f = gf2();
        assert!(!is_lld(&fam(&f, &[I2])).unwrap().lld);
        assert!(is_lld(&fam(&f, &[E11, E12])).unwrap().lld);
        let d = is_lld(&fam(&f, &[I2, J2])).unwrap();
        assert!(!d.lld);
        assert_eq!(d.independent_at, Some(vec![1, 0]));
        let q = Rationals;
        assert!(is_lld(&fam(&q, &[E11, E12])).unwrap().lld);
        assert!(!is_lld(&fam(&q, &[I2, J2])).unwrap().lld);
    }

    #[test]
    fn bms_examples() {
        let f = gf2();
        let t: &[&[i64]] = &[&[1, 1], &[0, 1]];
        let r = bms_search(&fam(&f, &[t, t])).unwrap();
        assert_eq!((r.witness.coeffs.clone(), r.witness.combination_rank), (vec![1, 1], 0));
        let q = Rationals;
        let r = bms_search(&fam(&q, &[t, t])).unwrap();
        assert_eq!(r.witness.coeffs, vec![q.from_i64(1), q.from_i64(-1)]);
        let r = bms_search(&fam(&f, &[E11, E12])).unwrap();
        assert_eq!(r.witness.coeffs, vec![1, 0]);
        assert_eq!(r.witness.combination_rank, 1);
        assert!(r.within_bound);
        let family = fam(&f, &[I2, J2]);
        let r = bms_search(&family).unwrap();
        assert_eq!(r.witness.coeffs, vec![0, 1]);
        assert_eq!(r.witness.combination_rank, 1);
        assert_eq!(r.witness.recompute(&family), 1);
        let r = bms_search(&fam(&f, &[I2])).unwrap();
        assert_eq!(r.witness.combination_rank, 2);
        assert!(!r.within_bound);
    }

    #[test]
    fn single_operator_lld_iff_zero() {
        let f = gf2();
        let zero: &[&[i64]] = &[&[0, 0], &[0, 0]];
        assert!(is_lld(&fam(&f, &[zero])).unwrap().lld);
        assert_eq!(bms_search(&fam(&f, &[zero])).unwrap().witness.combination_rank, 0);
        assert!(!is_lld(&fam(&f, &[E12])).unwrap().lld);
    }

    #[test]
    fn small_exhaustive_sweep() {
        let r = verify_bms_sweep(&gf2(), 2, 2, 2, SweepMode::Exhaustive).unwrap();
        assert_eq!(r.families_tested, 256);
        assert!(r.passed());
        assert_eq!(r.max_witness_rank, Some(1));
        assert!(r.first_violation.is_none());
        assert_eq!(amitsur_bound(2), 2);
        assert!(verify_bms_sweep(&gf2(), 5, 5, 2, SweepMode::Exhaustive).is_err());
    }
}
