//! W-root vectors, greedy linear monotilings, the conjugator between two
//! approximations, and the block decomposition a tiling induces.
//!
//! A vector `v` is a W-root vector when `w ↦ φ(w)v` is injective on the
//! window and `v` lies in a subspace on which `φ` is multiplicative. A tiling
//! is a family of root vectors whose tiles `φ(W)v_i` are independent.
//!
//! Root candidates are drawn in a fixed order. Continuations `φ(b)v` of
//! roots already found come first, for boundary words `b ∈ SW ∖ W`. Then
//! the canonical basis of `U`, most-boundary vectors first, and then seeded
//! random vectors of `U`. Last comes an exhaustive sweep of `U` when it is
//! small enough.

use std::collections::HashSet;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{containing_radius, Algebra, BasisWord};
use crate::approx::{ApproxMap, CheckOptions};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::folner::{candidate_window, invariance_check, product_words, FolnerWindow};
use crate::matrix::{complete_to_basis, rk_dist, Matrix};
use crate::projective::{random_vector, within_budget, ProjectiveSweep};
use crate::rational::{self, Rational};
use crate::subspace::{EchelonBasis, Subspace};

/// Random candidates tried per root before the exhaustive sweep.
pub const RANDOM_BUDGET: usize = 64;

/// Largest `q^{dim U}` swept exhaustively.
pub const EXHAUSTIVE_BUDGET: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateOrder {
    /// Continuations, then the basis of `U`, then random, then exhaustive.
    Structured,
    /// Random vectors of `U`, then exhaustive.
    RandomFirst,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub order: CandidateOrder,
    pub random_budget: usize,
    pub exhaustive_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            order: CandidateOrder::Structured,
            random_budget: RANDOM_BUDGET,
            exhaustive_budget: EXHAUSTIVE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootVector<F: Field> {
    pub vector: Vec<F::Elem>,
    /// `φ(w_i)v` in window order.
    pub images: Vec<Vec<F::Elem>>,
}

impl<F: Field> RootVector<F> {
    pub fn span(&self, field: &F) -> Subspace<F> {
        Subspace::from_vectors(field, self.vector.len(), &self.images)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling<F: Field> {
    pub field: F,
    pub n: usize,
    pub d: usize,
    pub window: Vec<BasisWord>,
    pub roots: Vec<RootVector<F>>,
    pub total_span: Subspace<F>,
}

/// Row-wise sparse copy of a table matrix.
struct Sparse<F: Field> {
    rows: Vec<Vec<(usize, F::Elem)>>,
}

impl<F: Field> Sparse<F> {
    fn new(m: &Matrix<F>) -> Self {
        let f = m.field();
        let rows = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !f.is_zero(x))
                    .map(|(j, x)| (j, x.clone()))
                    .collect()
            })
            .collect();
        Sparse { rows }
    }

    fn apply(&self, f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        self.rows
            .iter()
            .map(|row| {
                row.iter().fold(f.zero(), |acc, (j, x)| {
                    if f.is_zero(&v[*j]) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(x, &v[*j]))
                    }
                })
            })
            .collect()
    }
}

/// `d·dim E ≤ (d−2)n − d·dim W`, the hypothesis under which a root vector exists.
fn root_hypothesis(d: usize, n: usize, dim_w: usize, dim_e: usize) -> bool {
    (d * dim_e + d * dim_w) as i128 <= ((d as i128 - 2) * n as i128)
}

/// Size bound `(1 − 2/d)n − dim W` as an exact rational.
pub fn monotiling_bound(d: usize, n: usize, dim_w: usize) -> Rational {
    Rational::new(
        ((d as i64 - 2) * n as i64 - (d * dim_w) as i64).into(),
        (d as i64).into(),
    )
}

struct Search<'a, F: Field> {
    phi: &'a ApproxMap<F>,
    u: &'a Subspace<F>,
    window: Vec<Sparse<F>>,
    boundary: Vec<Sparse<F>>,
    basis_order: Vec<Vec<F::Elem>>,
    continuation_cursor: (usize, usize),
    basis_cursor: usize,
    options: SearchOptions,
    rng: ChaCha8Rng,
    tried: u64,
}

impl<'a, F: Field> Search<'a, F> {
    fn new(
        phi: &'a ApproxMap<F>,
        window: &[BasisWord],
        u: &'a Subspace<F>,
        seed: u64,
        options: SearchOptions,
    ) -> Result<Self> {
        let alg = phi.algebra();
        let window_mats = window
            .iter()
            .map(|w| phi.word_matrix(w).map(Sparse::new))
            .collect::<Result<Vec<_>>>()?;
        let mut boundary = Vec::new();
        let mut basis_order = Vec::new();
        if options.order == CandidateOrder::Structured {
            let inside: HashSet<&BasisWord> = window.iter().collect();
            for b in product_words(alg, &alg.generators()[1..], window)? {
                if inside.contains(&b) {
                    continue;
                }
                if let Ok(m) = phi.word_matrix(&b) {
                    boundary.push(Sparse::new(m));
                }
            }
            basis_order = boundary_sorted_basis(phi, u)?;
        }
        Ok(Search {
            phi,
            u,
            window: window_mats,
            boundary,
            basis_order,
            continuation_cursor: (0, 0),
            basis_cursor: 0,
            options,
            rng: ChaCha8Rng::seed_from_u64(seed),
            tried: 0,
        })
    }

    /// Images of `v` if they are independent modulo `e`.
    fn test(&mut self, v: &[F::Elem], e: &EchelonBasis<F>) -> Option<Vec<Vec<F::Elem>>> {
        let f = self.phi.field();
        self.tried += 1;
        if v.iter().all(|x| f.is_zero(x)) {
            return None;
        }
        let mut local = EchelonBasis::new(f, v.len());
        let mut images = Vec::with_capacity(self.window.len());
        for m in &self.window {
            let img = m.apply(f, v);
            let mut reduced = img.clone();
            e.reduce(&mut reduced);
            if !local.insert(reduced) {
                return None;
            }
            images.push(img);
        }
        Some(images)
    }

    fn accept(&mut self, v: Vec<F::Elem>, e: &EchelonBasis<F>) -> Option<RootVector<F>> {
        self.test(&v, e).map(|images| RootVector { vector: v, images })
    }

    fn find(
        &mut self,
        roots: &[RootVector<F>],
        e: &EchelonBasis<F>,
        exhaustive: bool,
    ) -> Option<RootVector<F>> {
        let f = self.phi.field().clone();
        if self.options.order == CandidateOrder::Structured {
            while self.continuation_cursor.0 < roots.len() {
                let (r, b) = self.continuation_cursor;
                if b >= self.boundary.len() {
                    self.continuation_cursor = (r + 1, 0);
                    continue;
                }
                self.continuation_cursor = (r, b + 1);
                let v = self.boundary[b].apply(&f, &roots[r].vector);
                if !self.u.contains(&v) {
                    continue;
                }
                if let Some(root) = self.accept(v, e) {
                    return Some(root);
                }
            }
            while self.basis_cursor < self.basis_order.len() {
                let v = self.basis_order[self.basis_cursor].clone();
                self.basis_cursor += 1;
                if let Some(root) = self.accept(v, e) {
                    return Some(root);
                }
            }
        }
        let k = self.u.dim();
        let bound = self.phi.n().max(2) as u64;
        for _ in 0..self.options.random_budget {
            let c = random_vector(&f, k, &mut self.rng, bound);
            let v = self.u.basis().mul_vec(&c).expect("shape");
            if let Some(root) = self.accept(v, e) {
                return Some(root);
            }
        }
        let sweepable =
            f.order().is_some_and(|q| within_budget(q, k, self.options.exhaustive_budget));
        if exhaustive && sweepable {
            for c in ProjectiveSweep::new(&f, k).expect("finite field") {
                let v = self.u.basis().mul_vec(&c).expect("shape");
                if let Some(root) = self.accept(v, e) {
                    return Some(root);
                }
            }
        }
        None
    }
}

/// Basis of `U`, ordered by how many non-unit generator images miss each
/// vector (most first, ties by position).
fn boundary_sorted_basis<F: Field>(phi: &ApproxMap<F>, u: &Subspace<F>) -> Result<Vec<Vec<F::Elem>>> {
    let images = (1..phi.algebra().generators().len())
        .map(|i| phi.generator_matrix(i).map(Matrix::column_space))
        .collect::<Result<Vec<_>>>()?;
    let mut scored: Vec<(usize, Vec<F::Elem>)> = u
        .basis_vectors()
        .into_iter()
        .map(|v| (images.iter().filter(|img| !img.contains(&v)).count(), v))
        .collect();
    scored.sort_by_key(|s| std::cmp::Reverse(s.0));
    Ok(scored.into_iter().map(|(_, v)| v).collect())
}

fn check_window<F: Field>(phi: &ApproxMap<F>, window: &[BasisWord], d: usize) -> Result<()> {
    if window.is_empty() {
        return Err(Error::InvalidParameter("tiling window must be nonempty".into()));
    }
    let distinct: HashSet<&BasisWord> = window.iter().collect();
    if distinct.len() != window.len() {
        return Err(Error::InvalidParameter("tiling window repeats a word".into()));
    }
    match containing_radius(phi.algebra(), window, d)? {
        Some(_) => Ok(()),
        None => Err(Error::InvalidParameter(format!("tiling window is not inside Ball({d})"))),
    }
}

/// A W-root vector in `u` whose tile meets `e` trivially.
pub fn find_root_vector<F: Field>(
    phi: &ApproxMap<F>,
    window: &[BasisWord],
    u: &Subspace<F>,
    e: &Subspace<F>,
    d: usize,
    seed: u64,
    options: SearchOptions,
) -> Result<RootVector<F>> {
    check_window(phi, window, d)?;
    let basis = EchelonBasis::from_subspace(e);
    let mut search = Search::new(phi, window, u, seed, options)?;
    search.find(&[], &basis, true).ok_or_else(|| Error::RootSearchExhausted {
        tried: search.tried as usize,
        hypothesis: if root_hypothesis(d, phi.n(), window.len(), e.dim()) {
            "holds"
        } else {
            "fails"
        },
    })
}

/// Greedy monotiling inside `u`. Roots are added while the search succeeds
/// and a further tile fits; a failed search before the size bound is met is
/// an error.
pub fn monotile_in<F: Field>(
    phi: &ApproxMap<F>,
    window: &[BasisWord],
    u: &Subspace<F>,
    d: usize,
    seed: u64,
    options: SearchOptions,
) -> Result<Tiling<F>> {
    check_window(phi, window, d)?;
    let (n, k) = (phi.n(), window.len());
    let mut e = EchelonBasis::new(phi.field(), n);
    let mut roots = Vec::new();
    let mut search = Search::new(phi, window, u, seed, options)?;
    while e.dim() + k <= n {
        let before_bound = !meets_bound(d, n, k, e.dim());
        match search.find(&roots, &e, before_bound) {
            Some(root) => {
                for img in &root.images {
                    e.insert(img.clone());
                }
                roots.push(root);
            }
            None if before_bound => {
                return Err(Error::RootSearchExhausted {
                    tried: search.tried as usize,
                    hypothesis: if root_hypothesis(d, n, k, e.dim()) { "holds" } else { "fails" },
                })
            }
            None => break,
        }
    }
    Ok(Tiling {
        field: phi.field().clone(),
        n,
        d,
        window: window.to_vec(),
        roots,
        total_span: e.to_subspace(),
    })
}

fn meets_bound(d: usize, n: usize, dim_w: usize, dim_e: usize) -> bool {
    (d * dim_e + d * dim_w) as i128 >= (d as i128 - 2) * n as i128
}

/// Greedy monotiling inside the `d`-multiplicative subspace of `φ`.
pub fn monotile<F: Field>(
    phi: &ApproxMap<F>,
    window: &[BasisWord],
    d: usize,
    seed: u64,
    options: SearchOptions,
) -> Result<Tiling<F>> {
    let u = phi.mult_subspace(d)?;
    monotile_in(phi, window, &u, d, seed, options)
}

impl<F: Field> Tiling<F> {
    pub fn ell(&self) -> usize {
        self.roots.len()
    }

    pub fn dim_total(&self) -> usize {
        self.total_span.dim()
    }

    /// Tiles are independent: `dim ⊕ φ(W)v_i = ℓ·dim W`.
    pub fn is_independent(&self) -> bool {
        self.dim_total() == self.ell() * self.window.len()
    }

    pub fn size_bound(&self) -> Rational {
        monotiling_bound(self.d, self.n, self.window.len())
    }

    pub fn meets_size_bound(&self) -> bool {
        meets_bound(self.d, self.n, self.window.len(), self.dim_total())
    }

    pub fn codimension(&self) -> usize {
        self.n - self.dim_total()
    }

    /// First `ell` roots.
    pub fn truncated(&self, ell: usize) -> Tiling<F> {
        let roots: Vec<_> = self.roots.iter().take(ell).cloned().collect();
        let vectors: Vec<_> = roots.iter().flat_map(|r| r.images.iter().cloned()).collect();
        Tiling {
            total_span: Subspace::from_vectors(&self.field, self.n, &vectors),
            roots,
            ..self.clone()
        }
    }

    /// Columns `φ(w_i)v_j`, tile by tile.
    pub fn tile_matrix(&self) -> Matrix<F> {
        let cols: Vec<_> = self.roots.iter().flat_map(|r| r.images.iter().cloned()).collect();
        Matrix::from_columns(&self.field, self.n, &cols).expect("images have length n")
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        json!({
            "n": self.n,
            "d": self.d,
            "window": self.window,
            "dim_W": self.window.len(),
            "ell": self.ell(),
            "roots": self.roots.iter()
                .map(|r| r.vector.iter().map(|x| f.format_elem(x)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "dim_total_span": self.dim_total(),
            "independent": self.is_independent(),
            "size_bound": rational::format_ratio(&self.size_bound()),
            "meets_size_bound": self.meets_size_bound(),
            "codimension": self.codimension(),
        })
    }
}

/// Options for [`build_conjugator`].
#[derive(Clone, Debug, Default)]
pub struct ConjugatorOptions {
    /// Tile window; chosen by a doubling search when absent.
    pub window: Option<Vec<BasisWord>>,
    /// Demand both maps pass `check_d_approximation` at `4d`.
    pub require_certified: bool,
    pub check: CheckOptions,
    pub search: SearchOptions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyResult<F: Field> {
    pub m: Matrix<F>,
    pub generator_names: Vec<String>,
    pub per_generator: Vec<Rational>,
    pub epsilon: Rational,
    pub details: Option<ConjugatorDetails>,
}

/// Construction data reported by [`build_conjugator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugatorDetails {
    pub window: Vec<BasisWord>,
    pub d: usize,
    pub ell_a: usize,
    pub ell_b: usize,
    pub ell: usize,
    /// `1 − (1 − ε/4)(1 − 3/(4d))`.
    pub bound: Rational,
    /// `ℓ·dim W ≥ (1 − 3/(4d)) n`.
    pub bound_applicable: bool,
}

impl<F: Field> ConjugacyResult<F> {
    pub fn achieved(&self) -> Rational {
        self.per_generator.iter().cloned().max().unwrap_or_else(Rational::zero)
    }

    pub fn within_epsilon(&self) -> bool {
        self.achieved() < self.epsilon
    }

    /// `achieved ≤ bound` whenever the bound applies (vacuously true otherwise).
    pub fn bound_respected(&self) -> bool {
        self.details
            .as_ref()
            .is_none_or(|d| !d.bound_applicable || self.achieved() <= d.bound)
    }

    pub fn to_json(&self) -> Value {
        let per: serde_json::Map<String, Value> = self
            .generator_names
            .iter()
            .zip(&self.per_generator)
            .map(|(g, r)| (g.clone(), Value::String(rational::format_ratio(r))))
            .collect();
        let mut out = json!({
            "M": self.m.to_text(),
            "per_generator": per,
            "epsilon": rational::format_ratio(&self.epsilon),
            "achieved": rational::format_ratio(&self.achieved()),
            "within_epsilon": self.within_epsilon(),
            "bound_respected": self.bound_respected(),
        });
        if let Some(d) = &self.details {
            out["construction"] = json!({
                "window": d.window,
                "dim_W": d.window.len(),
                "d": d.d,
                "ell_a": d.ell_a,
                "ell_b": d.ell_b,
                "ell": d.ell,
                "bound": rational::format_ratio(&d.bound),
                "bound_applicable": d.bound_applicable,
            });
        }
        out
    }
}

fn check_pair<F: Field>(a: &ApproxMap<F>, b: &ApproxMap<F>) -> Result<()> {
    if a.algebra() != b.algebra() {
        return Err(Error::AlgebraMismatch(a.algebra().spec().to_string(), b.algebra().spec().to_string()));
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().spec().to_string(), b.field().spec().to_string()));
    }
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            context: "conjugator",
            expected: format!("n = {}", a.n()),
            found: format!("n = {}", b.n()),
        });
    }
    Ok(())
}

/// Smallest window of the doubling family `1, 2, 4, …` that is
/// `(S, ε/4)`-invariant and fits into dimension `n`.
pub fn doubling_window(alg: &Algebra, epsilon: &Rational, n: usize) -> Result<FolnerWindow> {
    let eps = epsilon / rational::int(4);
    let mut size = 1;
    loop {
        let w = candidate_window(alg, size)?;
        if w.dim() > n {
            return Err(Error::InvalidParameter(format!(
                "no (S, {})-invariant window of the built-in family fits in dimension {n}",
                rational::format_ratio(&eps)
            )));
        }
        if invariance_check(alg, alg.generators(), &w, &eps)?.holds {
            return Ok(w);
        }
        size *= 2;
    }
}

/// `rk(M φ(s) M⁻¹ − ψ(s))` for every generator `s`.
pub fn verify_conjugacy<F: Field>(
    m: &Matrix<F>,
    phi_a: &ApproxMap<F>,
    phi_b: &ApproxMap<F>,
    epsilon: &Rational,
) -> Result<ConjugacyResult<F>> {
    check_pair(phi_a, phi_b)?;
    if m.rows() != phi_a.n() || m.cols() != phi_a.n() {
        return Err(Error::DimensionMismatch {
            context: "conjugating matrix",
            expected: format!("{0}x{0}", phi_a.n()),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let m_inv = m.inverse()?;
    let mut per_generator = Vec::new();
    for i in 0..phi_a.algebra().generators().len() {
        let conj = m.mul(&phi_a.generator_matrix(i)?.mul(&m_inv)?)?;
        per_generator.push(rk_dist(&conj, phi_b.generator_matrix(i)?)?);
    }
    Ok(ConjugacyResult {
        m: m.clone(),
        generator_names: phi_a.algebra().generator_names(),
        per_generator,
        epsilon: epsilon.clone(),
        details: None,
    })
}

/// `⋂_{s ∈ S, w ∈ W} ker(φ(sw) − φ(s)φ(w))`.
pub fn window_mult_subspace<F: Field>(phi: &ApproxMap<F>, window: &[BasisWord]) -> Result<Subspace<F>> {
    let pairs: Vec<_> = phi
        .algebra()
        .generators()
        .iter()
        .flat_map(|s| window.iter().map(move |w| (s.clone(), w.clone())))
        .collect();
    phi.kernel_intersection(&pairs)
}

/// Tiles both maps with the same window, pairs the tiles and returns the
/// invertible `M` with `M φ(w_i)v_j = ψ(w_i)u_j`, completed greedily by
/// standard basis vectors on both sides.
pub fn build_conjugator<F: Field>(
    phi_a: &ApproxMap<F>,
    phi_b: &ApproxMap<F>,
    epsilon: &Rational,
    seed: u64,
    options: &ConjugatorOptions,
) -> Result<ConjugacyResult<F>> {
    check_pair(phi_a, phi_b)?;
    if epsilon <= &Rational::zero() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let alg = phi_a.algebra();
    let n = phi_a.n();
    let window = match &options.window {
        Some(w) => FolnerWindow::from_words(alg, w.clone())?.words,
        None => doubling_window(alg, epsilon, n)?.words,
    };
    let cap = phi_a.degree_cap().min(phi_b.degree_cap());
    let radius = containing_radius(alg, &window, cap)?
        .filter(|&r| r < cap)
        .ok_or(Error::DegreeCapExceeded { needed: cap + 1, cap })?;
    let four_over_eps = rational::ceil(&(rational::int(4) / epsilon));
    let d = usize::try_from(four_over_eps)
        .map_err(|_| Error::InvalidParameter("epsilon is too small".into()))?
        .max(radius)
        .max(1);
    if options.require_certified {
        for (name, phi) in [("first", phi_a), ("second", phi_b)] {
            let report = phi.check_d_approximation(4 * d, options.check)?;
            if !report.certified() {
                return Err(Error::CertificationMissing(format!(
                    "{name} map is not a {}-approximation",
                    4 * d
                )));
            }
        }
    }
    let u_a = window_mult_subspace(phi_a, &window)?;
    let u_b = window_mult_subspace(phi_b, &window)?;
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let (seed_a, seed_b) = (rand::Rng::gen::<u64>(&mut seeds), rand::Rng::gen::<u64>(&mut seeds));
    let tiling_a = monotile_in(phi_a, &window, &u_a, d, seed_a, options.search)?;
    let tiling_b = monotile_in(phi_b, &window, &u_b, d, seed_b, options.search)?;
    let ell = tiling_a.ell().min(tiling_b.ell());
    let x = complete_to_basis(&tiling_a.truncated(ell).tile_matrix())?;
    let y = complete_to_basis(&tiling_b.truncated(ell).tile_matrix())?;
    let m = y.mul(&x.inverse()?)?;
    let mut result = verify_conjugacy(&m, phi_a, phi_b, epsilon)?;

    let quarter = epsilon / rational::int(4);
    let three = rational::count_ratio(3, 4 * d);
    let bound = rational::one() - (rational::one() - quarter) * (rational::one() - &three);
    let bound_applicable = rational::count_ratio(ell * window.len(), 1)
        >= (rational::one() - three) * rational::count_ratio(n, 1);
    result.details = Some(ConjugatorDetails {
        window,
        d,
        ell_a: tiling_a.ell(),
        ell_b: tiling_b.ell(),
        ell,
        bound,
        bound_applicable,
    });
    Ok(result)
}

/// Idempotents and per-generator defects of the block structure of a tiling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockReport<F: Field> {
    /// Idempotent onto the tiled span.
    pub idempotent: Matrix<F>,
    /// Columns: tile vectors block by block, then the greedy completion.
    pub change_of_basis: Matrix<F>,
    pub block_dims: Vec<usize>,
    pub codimension: usize,
    pub generator_names: Vec<String>,
    /// `rk(Pφ(s)P − Σ_j P_j φ(s) P_j)`.
    pub defects: Vec<Rational>,
}

impl<F: Field> BlockReport<F> {
    pub fn to_json(&self) -> Value {
        let defects: serde_json::Map<String, Value> = self
            .generator_names
            .iter()
            .zip(&self.defects)
            .map(|(g, r)| (g.clone(), Value::String(rational::format_ratio(r))))
            .collect();
        json!({
            "idempotent": self.idempotent.to_text(),
            "change_of_basis": self.change_of_basis.to_text(),
            "block_dims": self.block_dims,
            "codimension": self.codimension,
            "defects": defects,
        })
    }
}

/// Compresses `φ` to the tiled span and compares it with its block-diagonal part.
pub fn hyperfinite_decompose<F: Field>(phi: &ApproxMap<F>, tiling: &Tiling<F>) -> Result<BlockReport<F>> {
    let f = phi.field();
    let n = phi.n();
    if tiling.n != n {
        return Err(Error::DimensionMismatch {
            context: "tiling",
            expected: format!("n = {n}"),
            found: format!("n = {}", tiling.n),
        });
    }
    let k = tiling.window.len();
    let covered = tiling.ell() * k;
    let basis = complete_to_basis(&tiling.tile_matrix())?;
    let basis_inv = basis.inverse()?;
    let block_of = |i: usize| if i < covered { Some(i / k) } else { None };
    let proj = Matrix::from_fn(f, n, n, |i, j| {
        if i == j && block_of(i).is_some() {
            f.one()
        } else {
            f.zero()
        }
    });
    let idempotent = basis.mul(&proj)?.mul(&basis_inv)?;
    let mut defects = Vec::new();
    for i in 0..phi.algebra().generators().len() {
        let a = basis_inv.mul(&phi.generator_matrix(i)?.mul(&basis)?)?;
        let off_block = Matrix::from_fn(f, n, n, |r, c| match (block_of(r), block_of(c)) {
            (Some(x), Some(y)) if x != y => a.get(r, c).clone(),
            _ => f.zero(),
        });
        defects.push(rational::count_ratio(off_block.rank(), n.max(1)));
    }
    Ok(BlockReport {
        idempotent,
        change_of_basis: basis,
        block_dims: vec![k; tiling.ell()],
        codimension: n - covered,
        generator_names: phi.algebra().generator_names(),
        defects,
    })
}
