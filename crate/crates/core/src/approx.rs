//! Approximate representations `φ: A → M_n(K)` stored as word → matrix tables
//! over a monomial ball, with the builder from Følner windows, the exact
//! d-approximation checker, finite quotient representations and amplification.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{Algebra, AlgebraElement, AlgebraSpec, Ball, BasisWord};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::folner::{invariance_check, FolnerWindow, InvarianceReport};
use crate::matrix::Matrix;
use crate::projective::{random_vector, within_budget, ProjectiveSweep};
use crate::rational::{self, Rational};
use crate::subspace::{EchelonBasis, Subspace};

/// Largest `q^{dim A_{≤d}}` for which the rank condition is swept exhaustively.
pub const EXHAUSTIVE_BUDGET: u64 = 1 << 20;

/// Default number of random combinations for the sampled rank check.
pub const DEFAULT_SAMPLES: usize = 256;

/// Where a table came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    FolnerWindow {
        window: FolnerWindow,
        d: usize,
        invariance: InvarianceReport,
    },
    QuotientRep {
        m: usize,
    },
    File {
        source: String,
    },
    Amplified {
        source_n: usize,
        copies: usize,
        pad: usize,
        source: Box<Provenance>,
    },
    Conjugated {
        source: Box<Provenance>,
    },
}

/// A linear map `A_{≤D} → M_n(K)` given by its values on the words of `Ball(D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxMap<F: Field> {
    algebra: Algebra,
    field: F,
    n: usize,
    ball: Ball,
    table: Vec<Matrix<F>>,
    provenance: Provenance,
}

/// Options for [`build_d_approximation`].
#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Reject windows that are not `(A_{≤2d}, 1/(d·|S^{2d}|))`-invariant.
    pub require_invariance: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { require_invariance: true }
    }
}

/// The invariance threshold `1/(d·|S^{2d}|)` the builder asks of its window.
pub fn builder_epsilon(alg: &Algebra, d: usize) -> Result<Rational> {
    let ball = Ball::enumerate(alg, 2 * d)?;
    Ok(rational::count_ratio(1, d * ball.len()))
}

/// `φ(b) = p ∘ m_b` on `W` for every word `b ∈ Ball(2d)`, where `p` kills
/// every word outside the window.
pub fn build_d_approximation<F: Field>(
    alg: &Algebra,
    window: &FolnerWindow,
    d: usize,
    field: &F,
    options: BuildOptions,
) -> Result<ApproxMap<F>> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    window.validate(alg)?;
    let ball = Ball::enumerate(alg, 2 * d)?;
    let eps = rational::count_ratio(1, d * ball.len());
    let invariance = invariance_check(alg, ball.words(), window, &eps)?;
    if options.require_invariance && !invariance.holds {
        return Err(Error::InsufficientInvariance {
            dim_vw: invariance.dim_vw,
            dim_w: invariance.dim_w,
            epsilon: rational::format_ratio(&eps),
            report: Box::new(invariance),
        });
    }
    let index = window.index();
    let n = window.dim();
    let mut table = Vec::with_capacity(ball.len());
    for b in ball.words() {
        let mut m = Matrix::zeros(field, n, n);
        for (j, w) in window.words.iter().enumerate() {
            if let Some(&i) = index.get(&alg.mul_words(b, w)?) {
                m.set(i, j, field.one());
            }
        }
        table.push(m);
    }
    Ok(ApproxMap {
        algebra: alg.clone(),
        field: field.clone(),
        n,
        ball,
        table,
        provenance: Provenance::FolnerWindow { window: window.clone(), d, invariance },
    })
}

fn group_coords(alg: &Algebra, m: usize) -> Result<usize> {
    match alg.spec() {
        AlgebraSpec::Polynomial { vars } => Ok(*vars),
        AlgebraSpec::Laurent { rank } => Ok(*rank),
        AlgebraSpec::Heisenberg => Ok(3),
        AlgebraSpec::Custom { .. } => Err(Error::UnsupportedKind(format!(
            "quotient representation of {} (m = {m})",
            alg.spec()
        ))),
    }
}

/// True representation through a finite quotient, acting on the regular
/// module: polynomial and laurent kinds through `(Z/m)^r` (for `K[x]` the
/// companion matrix of `x^m − 1`), heisenberg through the Heisenberg group
/// with entries mod `m`. Group elements are indexed in mixed radix `m`, first
/// coordinate most significant.
pub fn build_quotient_representation<F: Field>(
    alg: &Algebra,
    m: usize,
    field: &F,
    degree_cap: usize,
) -> Result<ApproxMap<F>> {
    if m == 0 {
        return Err(Error::InvalidParameter("quotient parameter m must be at least 1".into()));
    }
    let r = group_coords(alg, m)?;
    let n = m
        .checked_pow(r as u32)
        .filter(|&n| n <= 1 << 16)
        .ok_or_else(|| Error::UnsupportedSize(format!("m^{r} for m = {m}")))?;
    let mi = m as i64;
    let decode = |mut g: usize| {
        let mut v = vec![0i64; r];
        for c in (0..r).rev() {
            v[c] = (g % m) as i64;
            g /= m;
        }
        v
    };
    let encode = |v: &[i64]| v.iter().fold(0usize, |acc, &x| acc * m + x.rem_euclid(mi) as usize);
    let ball = Ball::enumerate(alg, degree_cap)?;
    let mut table = Vec::with_capacity(ball.len());
    for w in ball.words() {
        let mut mat = Matrix::zeros(field, n, n);
        for g in 0..n {
            let image = alg.mul_words(w, &BasisWord(decode(g)))?;
            mat.set(encode(&image.0), g, field.one());
        }
        table.push(mat);
    }
    Ok(ApproxMap {
        algebra: alg.clone(),
        field: field.clone(),
        n,
        ball,
        table,
        provenance: Provenance::QuotientRep { m },
    })
}

/// Which rank check was run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RankPolicy {
    Exhaustive,
    BasisPlusRandom { samples: usize, seed: u64 },
}

/// Options for [`ApproxMap::check_d_approximation`].
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub samples: usize,
    pub seed: u64,
    /// Sweep exhaustively when the field is finite and within budget.
    pub allow_exhaustive: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { samples: DEFAULT_SAMPLES, seed: 0, allow_exhaustive: true }
    }
}

/// Outcome of checking the three conditions of a d-approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertReport<F: Field> {
    pub d: usize,
    pub n: usize,
    pub u: Subspace<F>,
    pub mult_ok: bool,
    pub rank_policy: RankPolicy,
    pub combinations_tested: u64,
    pub min_rank_seen: usize,
    pub min_rank_witness: Vec<F::Elem>,
}

impl<F: Field> CertReport<F> {
    pub fn dim_u(&self) -> usize {
        self.u.dim()
    }

    /// `dim U ≥ (1 − 1/d) n`.
    pub fn dim_ok(&self) -> bool {
        self.d * self.dim_u() >= (self.d - 1) * self.n
    }

    /// Every tested nonzero `a` has `rank φ(a) ≥ (1 − 1/d) n`.
    pub fn rank_ok(&self) -> bool {
        self.d * self.min_rank_seen >= (self.d - 1) * self.n
    }

    pub fn certified(&self) -> bool {
        self.mult_ok && self.dim_ok() && self.rank_ok()
    }

    pub fn to_json(&self) -> Value {
        let f = self.u.field();
        json!({
            "d": self.d,
            "n": self.n,
            "dim_U": self.dim_u(),
            "U": self.u.basis().to_text(),
            "mult_ok": self.mult_ok,
            "dim_ok": self.dim_ok(),
            "dim_bound": rational::format_ratio(&rational::count_ratio((self.d - 1) * self.n, self.d)),
            "rank_policy": self.rank_policy,
            "combinations_tested": self.combinations_tested,
            "min_rank_seen": self.min_rank_seen,
            "min_rank_witness": self.min_rank_witness.iter().map(|c| f.format_elem(c)).collect::<Vec<_>>(),
            "rank_ok": self.rank_ok(),
            "certified": self.certified(),
        })
    }
}

impl<F: Field> ApproxMap<F> {
    /// A map from an explicit table; the table must cover `Ball(degree_cap)`
    /// exactly with `n × n` matrices over `field`.
    pub fn from_table(
        alg: &Algebra,
        field: &F,
        n: usize,
        degree_cap: usize,
        entries: Vec<(BasisWord, Matrix<F>)>,
        provenance: Provenance,
    ) -> Result<Self> {
        let ball = Ball::enumerate(alg, degree_cap)?;
        let mut table: Vec<Option<Matrix<F>>> = vec![None; ball.len()];
        for (w, m) in entries {
            let i = ball
                .position(&w)
                .ok_or_else(|| Error::OutOfBall { word: w.to_string(), radius: degree_cap })?;
            if m.field() != field {
                return Err(Error::FieldMismatch(field.spec().to_string(), m.field().spec().to_string()));
            }
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch {
                    context: "table entry",
                    expected: format!("{n}x{n}"),
                    found: format!("{}x{}", m.rows(), m.cols()),
                });
            }
            if table[i].replace(m).is_some() {
                return Err(Error::Parse(format!("word {w} appears twice in the table")));
            }
        }
        let table = table
            .into_iter()
            .zip(ball.words())
            .map(|(m, w)| m.ok_or_else(|| Error::Parse(format!("table is missing word {w}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ApproxMap { algebra: alg.clone(), field: field.clone(), n, ball, table, provenance })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree_cap(&self) -> usize {
        self.ball.radius()
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn table(&self) -> impl Iterator<Item = (&BasisWord, &Matrix<F>)> {
        self.ball.words().iter().zip(&self.table)
    }

    pub fn word_matrix(&self, w: &BasisWord) -> Result<&Matrix<F>> {
        self.ball
            .position(w)
            .map(|i| &self.table[i])
            .ok_or_else(|| Error::OutOfBall { word: w.to_string(), radius: self.degree_cap() })
    }

    /// `φ(s)` for the `i`-th generator.
    pub fn generator_matrix(&self, i: usize) -> Result<&Matrix<F>> {
        let g = self.algebra.generators().get(i).ok_or_else(|| {
            Error::InvalidParameter(format!("generator index {i} out of range"))
        })?;
        self.word_matrix(g)
    }

    /// `φ(a)` by linear extension of the table.
    pub fn eval(&self, a: &AlgebraElement<F>) -> Result<Matrix<F>> {
        if a.field() != &self.field {
            return Err(Error::FieldMismatch(
                self.field.spec().to_string(),
                a.field().spec().to_string(),
            ));
        }
        let mut out = Matrix::zeros(&self.field, self.n, self.n);
        for (w, c) in a.terms() {
            out.add_scaled(c, self.word_matrix(w)?)?;
        }
        Ok(out)
    }

    /// `Σ coeffs_i · φ(words_i)`.
    pub fn eval_coords(&self, words: &[BasisWord], coeffs: &[F::Elem]) -> Result<Matrix<F>> {
        let mut out = Matrix::zeros(&self.field, self.n, self.n);
        for (w, c) in words.iter().zip(coeffs) {
            if !self.field.is_zero(c) {
                out.add_scaled(c, self.word_matrix(w)?)?;
            }
        }
        Ok(out)
    }

    fn check_cap(&self, needed: usize) -> Result<()> {
        if needed > self.degree_cap() {
            return Err(Error::DegreeCapExceeded { needed, cap: self.degree_cap() });
        }
        Ok(())
    }

    /// `⋂ ker(φ(ab) − φ(a)φ(b))` over the given word pairs: the nullspace of
    /// the span of all defect rows.
    pub fn kernel_intersection(&self, pairs: &[(BasisWord, BasisWord)]) -> Result<Subspace<F>> {
        let f = &self.field;
        let mut functionals = EchelonBasis::new(f, self.n);
        for (a, b) in pairs {
            if functionals.dim() == self.n {
                break;
            }
            let ab = self.algebra.mul_words(a, b)?;
            let defect = self
                .word_matrix(&ab)?
                .sub(&self.word_matrix(a)?.mul(self.word_matrix(b)?)?)?;
            for i in 0..self.n {
                let row = defect.row(i);
                if row.iter().any(|x| !f.is_zero(x)) {
                    functionals.insert(row.to_vec());
                }
            }
        }
        Ok(functionals.to_subspace().basis().transpose().nullspace())
    }

    /// Exact `φ(ab)u = φ(a)φ(b)u` for every pair and every basis vector of `u`.
    pub fn is_multiplicative_on(
        &self,
        pairs: &[(BasisWord, BasisWord)],
        u: &Subspace<F>,
    ) -> Result<bool> {
        let basis = u.basis();
        for (a, b) in pairs {
            let ab = self.algebra.mul_words(a, b)?;
            let lhs = self.word_matrix(&ab)?.mul(basis)?;
            let rhs = self.word_matrix(a)?.mul(&self.word_matrix(b)?.mul(basis)?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All pairs of words of `Ball(d)`.
    pub fn ball_pairs(&self, d: usize) -> Result<Vec<(BasisWord, BasisWord)>> {
        let ball = Ball::enumerate(&self.algebra, d)?;
        let words = ball.words();
        Ok(words
            .iter()
            .flat_map(|a| words.iter().map(move |b| (a.clone(), b.clone())))
            .collect())
    }

    /// The largest subspace on which `φ` is `d`-multiplicative.
    pub fn mult_subspace(&self, d: usize) -> Result<Subspace<F>> {
        self.check_cap(2 * d)?;
        self.kernel_intersection(&self.ball_pairs(d)?)
    }

    /// Checks the three conditions of a `d`-approximation.
    pub fn check_d_approximation(&self, d: usize, options: CheckOptions) -> Result<CertReport<F>> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        self.check_cap(2 * d)?;
        let pairs = self.ball_pairs(d)?;
        let u = self.kernel_intersection(&pairs)?;
        let mult_ok = self.is_multiplicative_on(&pairs, &u)?;

        let words = Ball::enumerate(&self.algebra, d)?.words().to_vec();
        let k = words.len();
        let f = &self.field;
        let exhaustive = options.allow_exhaustive
            && f.order().is_some_and(|q| within_budget(q, k, EXHAUSTIVE_BUDGET));
        let mut min_rank = usize::MAX;
        let mut witness = Vec::new();
        let mut tested = 0u64;
        let mut consider = |coeffs: Vec<F::Elem>| -> Result<()> {
            if coeffs.iter().all(|c| f.is_zero(c)) {
                return Ok(());
            }
            tested += 1;
            let r = self.eval_coords(&words, &coeffs)?.rank();
            if r < min_rank {
                min_rank = r;
                witness = coeffs;
            }
            Ok(())
        };
        let rank_policy = if exhaustive {
            for coeffs in ProjectiveSweep::new(f, k)? {
                consider(coeffs)?;
            }
            RankPolicy::Exhaustive
        } else {
            for i in 0..k {
                let mut e = vec![f.zero(); k];
                e[i] = f.one();
                consider(e)?;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            for _ in 0..options.samples {
                consider(random_vector(f, k, &mut rng, self.n.max(2) as u64))?;
            }
            RankPolicy::BasisPlusRandom { samples: options.samples, seed: options.seed }
        };
        Ok(CertReport {
            d,
            n: self.n,
            u,
            mult_ok,
            rank_policy,
            combinations_tested: tested,
            min_rank_seen: if tested == 0 { 0 } else { min_rank },
            min_rank_witness: witness,
        })
    }

    /// `(φ ⊗ I_c) ⊕ 0_r` for each target `n = c·source_n + r`, `0 ≤ r < source_n`.
    pub fn amplify(&self, targets: &[usize]) -> Result<Vec<ApproxMap<F>>> {
        targets
            .iter()
            .map(|&t| {
                if t < self.n || self.n == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "amplification target {t} is below the source dimension {}",
                        self.n
                    )));
                }
                let (copies, pad) = (t / self.n, t % self.n);
                let table = self
                    .table
                    .iter()
                    .map(|m| m.kron_and_pad(copies, pad))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ApproxMap {
                    algebra: self.algebra.clone(),
                    field: self.field.clone(),
                    n: t,
                    ball: self.ball.clone(),
                    table,
                    provenance: Provenance::Amplified {
                        source_n: self.n,
                        copies,
                        pad,
                        source: Box::new(self.provenance.clone()),
                    },
                })
            })
            .collect()
    }

    /// `a ↦ M φ(a) M⁻¹`.
    pub fn conjugate_by(&self, m: &Matrix<F>) -> Result<ApproxMap<F>> {
        let inv = m.inverse()?;
        let table = self
            .table
            .iter()
            .map(|t| m.mul(t)?.mul(&inv))
            .collect::<Result<Vec<_>>>()?;
        Ok(ApproxMap {
            table,
            provenance: Provenance::Conjugated { source: Box::new(self.provenance.clone()) },
            ..self.clone()
        })
    }

    pub fn to_file(&self) -> ApproxMapFile {
        ApproxMapFile {
            algebra: self.algebra.spec().clone(),
            field: self.field.spec(),
            n: self.n,
            degree_cap: self.degree_cap(),
            provenance: Some(self.provenance.clone()),
            table: self
                .table()
                .map(|(w, m)| TableEntry { word: w.clone(), matrix: m.to_text() })
                .collect(),
        }
    }

    pub fn from_file(field: &F, file: &ApproxMapFile, source: &str) -> Result<Self> {
        if file.field != field.spec() {
            return Err(Error::FieldMismatch(field.spec().to_string(), file.field.to_string()));
        }
        let alg = Algebra::new(file.algebra.clone())?;
        let entries = file
            .table
            .iter()
            .map(|e| Ok((e.word.clone(), Matrix::from_text(field, &e.matrix)?)))
            .collect::<Result<Vec<_>>>()?;
        let provenance = file
            .provenance
            .clone()
            .unwrap_or_else(|| Provenance::File { source: source.to_string() });
        Self::from_table(&alg, field, file.n, file.degree_cap, entries, provenance)
    }
}

/// Serialized form of an [`ApproxMap`]; matrices use the text format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxMapFile {
    pub algebra: AlgebraSpec,
    pub field: FieldSpec,
    pub n: usize,
    pub degree_cap: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub table: Vec<TableEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub word: BasisWord,
    pub matrix: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::folner::candidate_window;

    fn poly1() -> Algebra {
        Algebra::new(AlgebraSpec::Polynomial { vars: 1 }).unwrap()
    }

    fn loose() -> BuildOptions {
        BuildOptions { require_invariance: false }
    }

    fn shift(f: &PrimeField, n: usize) -> Matrix<PrimeField> {
        Matrix::from_fn(f, n, n, |i, j| u32::from(i == j + 1))
    }

    #[test]
    fn truncated_shift_table() {
        let f = PrimeField::new(2).unwrap();
        let alg = poly1();
        let w = candidate_window(&alg, 8).unwrap();
        let phi = build_d_approximation(&alg, &w, 2, &f, loose()).unwrap();
        let j = shift(&f, 8);
        assert_eq!(phi.word_matrix(&BasisWord(vec![1])).unwrap(), &j);
        let mut power = Matrix::identity(&f, 8);
        for k in 0..=4 {
            assert_eq!(phi.word_matrix(&BasisWord(vec![k])).unwrap(), &power);
            power = power.mul(&j).unwrap();
        }
        assert!(matches!(
            build_d_approximation(&alg, &w, 2, &f, BuildOptions::default()),
            Err(Error::InsufficientInvariance { dim_vw: 12, dim_w: 8, .. })
        ));
    }

    #[test]
    fn laurent_window_has_two_truncated_corners() {
        let f = PrimeField::new(3).unwrap();
        let alg = Algebra::new(AlgebraSpec::Laurent { rank: 1 }).unwrap();
        let w = candidate_window(&alg, 8).unwrap();
        let phi = build_d_approximation(&alg, &w, 2, &f, loose()).unwrap();
        let t = phi.generator_matrix(1).unwrap();
        assert_eq!(t.rank(), 16);
        assert_eq!(t.nnz(), 16);
        let t_inv = phi.generator_matrix(2).unwrap();
        assert_eq!(t.mul(t_inv).unwrap().rank(), 16);
    }

    #[test]
    fn eval_examples() {
        let f = PrimeField::new(5).unwrap();
        let alg = poly1();
        let w = candidate_window(&alg, 8).unwrap();
        let phi = build_d_approximation(&alg, &w, 2, &f, loose()).unwrap();
        assert!(phi.eval(&AlgebraElement::zero(&f)).unwrap().is_zero());
        let a = AlgebraElement::from_terms(&f, [(BasisWord(vec![1]), 2), (BasisWord(vec![0]), 1)]);
        let expected = shift(&f, 8).scaled(&2).add(&Matrix::identity(&f, 8)).unwrap();
        assert_eq!(phi.eval(&a).unwrap(), expected);
        let high = AlgebraElement::from_word(&f, BasisWord(vec![5]));
        assert!(matches!(phi.eval(&high), Err(Error::OutOfBall { .. })));
    }

    #[test]
    fn certification_of_small_shift() {
        let f = PrimeField::new(2).unwrap();
        let alg = poly1();
        let w = candidate_window(&alg, 8).unwrap();
        let phi = build_d_approximation(&alg, &w, 3, &f, loose()).unwrap();
        let r2 = phi.check_d_approximation(2, CheckOptions::default()).unwrap();
        assert_eq!(r2.rank_policy, RankPolicy::Exhaustive);
        assert_eq!(r2.combinations_tested, 7);
        assert_eq!(r2.min_rank_seen, 6);
        assert!(r2.certified());
        let r3 = phi.check_d_approximation(3, CheckOptions::default()).unwrap();
        assert_eq!(r3.min_rank_seen, 5);
        assert!(!r3.certified());
        assert!(phi.check_d_approximation(4, CheckOptions::default()).is_err());
    }

    #[test]
    fn zero_map_is_never_certified() {
        let f = PrimeField::new(2).unwrap();
        let alg = poly1();
        let zero = Matrix::zeros(&f, 4, 4);
        let entries = Ball::enumerate(&alg, 6)
            .unwrap()
            .words()
            .iter()
            .map(|w| (w.clone(), zero.clone()))
            .collect();
        let phi = ApproxMap::from_table(&alg, &f, 4, 6, entries, Provenance::File { source: "t".into() })
            .unwrap();
        for d in 2..=3 {
            let r = phi.check_d_approximation(d, CheckOptions::default()).unwrap();
            assert!(r.mult_ok && r.dim_ok());
            assert_eq!(r.min_rank_seen, 0);
            assert!(!r.certified());
        }
    }

    #[test]
    fn quotient_representations() {
        let f = PrimeField::new(2).unwrap();
        let z = Algebra::new(AlgebraSpec::Laurent { rank: 1 }).unwrap();
        let rep = build_quotient_representation(&z, 4, &f, 2).unwrap();
        let cyclic = Matrix::from_fn(&f, 4, 4, |i, j| u32::from(i == (j + 1) % 4));
        assert_eq!(rep.generator_matrix(1).unwrap(), &cyclic);
        let x = build_quotient_representation(&poly1(), 4, &f, 2).unwrap();
        assert_eq!(x.generator_matrix(1).unwrap(), &cyclic);
        assert_eq!(rep.mult_subspace(1).unwrap().dim(), 4);

        let h = Algebra::new(AlgebraSpec::Heisenberg).unwrap();
        let rep = build_quotient_representation(&h, 2, &f, 4).unwrap();
        assert_eq!(rep.n(), 8);
        let (x, y) = (rep.generator_matrix(1).unwrap(), rep.generator_matrix(3).unwrap());
        let zm = rep.word_matrix(&BasisWord(vec![0, 0, 1])).unwrap();
        assert_eq!(y.mul(x).unwrap(), x.mul(y).unwrap().mul(zm).unwrap());
        assert_eq!(rep.mult_subspace(2).unwrap().dim(), 8);

        let custom = Algebra::new(AlgebraSpec::Custom { letters: Some(1), rules: vec![] }).unwrap();
        assert!(matches!(
            build_quotient_representation(&custom, 2, &f, 1),
            Err(Error::UnsupportedKind(_))
        ));
    }

    #[test]
    fn amplify_blocks() {
        let q = Rationals;
        let z = Algebra::new(AlgebraSpec::Laurent { rank: 1 }).unwrap();
        let rep = build_quotient_representation(&z, 2, &q, 2).unwrap();
        let same = rep.amplify(&[2]).unwrap().remove(0);
        assert_eq!(same.table().map(|(_, m)| m.clone()).collect::<Vec<_>>(),
                   rep.table().map(|(_, m)| m.clone()).collect::<Vec<_>>());
        let five = rep.amplify(&[5]).unwrap().remove(0);
        let t = five.generator_matrix(1).unwrap();
        assert_eq!(t.rows(), 5);
        for i in 0..5 {
            for j in 0..5 {
                let expected = i < 4 && j < 4 && i % 2 == j % 2 && (i / 2) != (j / 2);
                assert_eq!(t.get(i, j) == &q.one(), expected, "({i},{j})");
            }
        }
        assert!(rep.amplify(&[1]).is_err());
    }

    #[test]
    fn file_round_trip_recertifies() {
        let f = PrimeField::new(3).unwrap();
        let alg = poly1();
        let w = candidate_window(&alg, 8).unwrap();
        let phi = build_d_approximation(&alg, &w, 2, &f, loose()).unwrap();
        let json = serde_json::to_string(&phi.to_file()).unwrap();
        let back: ApproxMapFile = serde_json::from_str(&json).unwrap();
        let psi = ApproxMap::from_file(&f, &back, "mem").unwrap();
        assert_eq!(psi, phi);
        let opts = CheckOptions::default();
        assert_eq!(
            phi.check_d_approximation(2, opts).unwrap().to_json(),
            psi.check_d_approximation(2, opts).unwrap().to_json()
        );
        assert!(ApproxMap::from_file(&PrimeField::new(2).unwrap(), &back, "mem").is_err());
    }
}
