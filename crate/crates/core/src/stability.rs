//! Almost-complete tilings of invariant windows and an end-to-end weak
//! stability run: a truncated action on a large window is conjugated, up to
//! a rank-metric error below `ε`, onto an amplified finite-quotient
//! representation.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::{containing_radius, Algebra, AlgebraSpec, Ball, BasisWord};
use crate::approx::{build_d_approximation, build_quotient_representation, ApproxMap, BuildOptions};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::folner::{box_window, candidate_window, invariance_check, preimage_in_window, window_core};
use crate::folner::{FolnerWindow, InvarianceReport};
use crate::rational::{self, Rational};
use crate::subspace::Subspace;
use crate::tiling::{build_conjugator, monotile_in, ConjugacyResult, ConjugatorOptions, SearchOptions, Tiling};

/// Largest approximation dimension the demo will build.
pub const DEMO_MAX_N: usize = 4096;

/// Result of [`tile_window`].
#[derive(Clone, Debug)]
pub struct WindowTilingReport<F: Field> {
    pub invariance: InvarianceReport,
    /// Window words `w` with `S^{2d}·w ⊆ W`.
    pub core: Vec<BasisWord>,
    pub tiling: Tiling<F>,
    pub epsilon: Rational,
}

impl<F: Field> WindowTilingReport<F> {
    pub fn codimension(&self) -> usize {
        self.tiling.n - self.tiling.ell() * self.tiling.window.len()
    }

    /// `codim ≤ ε·dim W`.
    pub fn holds(&self) -> bool {
        self.tiling.is_independent()
            && rational::count_ratio(self.codimension(), 1)
                <= &self.epsilon * rational::count_ratio(self.tiling.n, 1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "invariance": self.invariance,
            "dim_W": self.tiling.n,
            "dim_core": self.core.len(),
            "tile": self.tiling.window,
            "ell": self.tiling.ell(),
            "independent": self.tiling.is_independent(),
            "codimension": self.codimension(),
            "epsilon": rational::format_ratio(&self.epsilon),
            "holds": self.holds(),
        })
    }
}

/// Tiles a Følner window `W` by translates `V·v` of a tile `V ⊆ A_{≤d}`.
///
/// `W` must be `(A_{≤2d}, ε/(3|S^{2d}|))`-invariant. Roots are searched inside
/// the span of the window core, where the truncated action is exactly
/// multiplicative up to degree `d`.
#[allow(clippy::too_many_arguments)]
pub fn tile_window<F: Field>(
    alg: &Algebra,
    tile: &[BasisWord],
    window: &FolnerWindow,
    d: usize,
    epsilon: &Rational,
    field: &F,
    seed: u64,
    options: SearchOptions,
) -> Result<WindowTilingReport<F>> {
    if epsilon <= &Rational::zero() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let ball = Ball::enumerate(alg, 2 * d)?;
    let eps = epsilon / rational::count_ratio(3 * ball.len(), 1);
    let invariance = invariance_check(alg, ball.words(), window, &eps)?;
    if !invariance.holds {
        return Err(Error::InsufficientInvariance {
            dim_vw: invariance.dim_vw,
            dim_w: invariance.dim_w,
            epsilon: rational::format_ratio(&eps),
            report: Box::new(invariance),
        });
    }
    let phi = build_d_approximation(alg, window, d, field, BuildOptions { require_invariance: false })?;
    let core = window_core(alg, ball.words(), window)?;
    let index = window.index();
    let units: Vec<Vec<F::Elem>> = core
        .iter()
        .map(|w| {
            let mut v = vec![field.zero(); window.dim()];
            v[index[w]] = field.one();
            v
        })
        .collect();
    let u = Subspace::from_vectors(field, window.dim(), &units);
    let tiling = monotile_in(&phi, tile, &u, d, seed, options)?;
    Ok(WindowTilingReport { invariance, core, tiling, epsilon: epsilon.clone() })
}

/// Result of [`demo_weak_stability`].
#[derive(Clone, Debug)]
pub struct DemoReport<F: Field> {
    pub epsilon: Rational,
    /// Tile window, almost invariant under every generator.
    pub tile: FolnerWindow,
    /// Window of the truncated action.
    pub window: FolnerWindow,
    pub d: usize,
    pub n: usize,
    /// Side of the finite quotient `(Z/m)^r`.
    pub m: usize,
    pub copies: usize,
    pub pad: usize,
    /// Generator multiplicativity of the amplified quotient action.
    pub representation_exact: bool,
    pub conjugacy: ConjugacyResult<F>,
}

impl<F: Field> DemoReport<F> {
    pub fn success(&self) -> bool {
        self.representation_exact && self.conjugacy.within_epsilon()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "epsilon": rational::format_ratio(&self.epsilon),
            "tile": self.tile,
            "dim_tile": self.tile.dim(),
            "d": self.d,
            "n": self.n,
            "quotient_m": self.m,
            "copies": self.copies,
            "pad": self.pad,
            "representation_exact": self.representation_exact,
            "conjugacy": self.conjugacy.to_json(),
            "success": self.success(),
        })
    }
}

/// Fraction test `|{w ∈ W : s·w ∈ W}| > (1 − ε)|W|` for every generator `s`.
fn almost_invariant(alg: &Algebra, window: &FolnerWindow, epsilon: &Rational) -> Result<bool> {
    let size = rational::count_ratio(window.dim(), 1);
    for s in alg.generators() {
        let kept = preimage_in_window(alg, s, window)?.len();
        if rational::count_ratio(kept, 1) <= (rational::one() - epsilon) * &size {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `k` with `k^r ≥ t`.
fn root_ceil(t: usize, r: usize) -> usize {
    let mut k: usize = 1;
    while k.pow(r as u32) < t {
        k += 1;
    }
    k
}

/// Builds a truncated action on a window made of `⌈4/ε⌉` or more tile-sized
/// boxes, a true representation through `(Z/m)^r` amplified to the same
/// dimension, and a conjugator between them. Polynomial algebras in one
/// variable and Laurent algebras are supported; other kinds, or runs that
/// would exceed [`DEMO_MAX_N`], are reported as unsupported.
pub fn demo_weak_stability<F: Field>(
    alg: &Algebra,
    field: &F,
    epsilon: &Rational,
    seed: u64,
) -> Result<DemoReport<F>> {
    if epsilon <= &Rational::zero() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let r = match alg.spec() {
        AlgebraSpec::Polynomial { vars: 1 } => 1,
        AlgebraSpec::Laurent { rank } => *rank,
        AlgebraSpec::Heisenberg => {
            return Err(Error::UnsupportedSize(format!(
                "weak stability demo for {}: the tile and window outgrow n = {DEMO_MAX_N}",
                alg.spec()
            )))
        }
        other => return Err(Error::UnsupportedKind(format!("weak stability demo for {other}"))),
    };
    let polynomial = matches!(alg.spec(), AlgebraSpec::Polynomial { .. });
    let mut size = 1;
    let tile = loop {
        let w = candidate_window(alg, size)?;
        if w.dim() > DEMO_MAX_N {
            return Err(Error::UnsupportedSize(format!("no almost invariant tile below n = {DEMO_MAX_N}")));
        }
        if almost_invariant(alg, &w, epsilon)? {
            break w;
        }
        size += 1;
    };
    let side = if polynomial { size } else { 2 * size + 1 };
    let tiles = usize::try_from(rational::ceil(&(rational::int(4) / epsilon)))
        .map_err(|_| Error::InvalidParameter("epsilon is too small".into()))?;
    let per_axis = root_ceil(tiles, r);
    let n = (side * per_axis)
        .checked_pow(r as u32)
        .filter(|&n| n <= DEMO_MAX_N)
        .ok_or_else(|| Error::UnsupportedSize(format!("approximation window exceeds n = {DEMO_MAX_N}")))?;
    let window = box_window(alg, &vec![(0, (side * per_axis) as i64 - 1); r])?;

    let radius = containing_radius(alg, &tile.words, 2 * n)?
        .ok_or_else(|| Error::InvalidParameter("tile radius is unbounded".into()))?;
    let d = (radius + 2) / 2;
    let phi = build_d_approximation(alg, &window, d, field, BuildOptions { require_invariance: false })?;
    let quotient = build_quotient_representation(alg, side, field, 2 * d)?;
    let copies = n / quotient.n();
    let pad = n - copies * quotient.n();
    let psi = quotient.amplify(&[n])?.remove(0);
    let representation_exact = exact_on_generators(&psi)?;

    let options = ConjugatorOptions { window: Some(tile.words.clone()), ..Default::default() };
    let conjugacy = build_conjugator(&phi, &psi, epsilon, seed, &options)?;
    Ok(DemoReport {
        epsilon: epsilon.clone(),
        tile,
        window,
        d,
        n,
        m: side,
        copies,
        pad,
        representation_exact,
        conjugacy,
    })
}

fn exact_on_generators<F: Field>(psi: &ApproxMap<F>) -> Result<bool> {
    let gens = psi.algebra().generators();
    let pairs: Vec<_> = gens
        .iter()
        .flat_map(|a| gens.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    Ok(psi.kernel_intersection(&pairs)?.dim() == psi.n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn window_tiling_on_a_line() {
        let alg = Algebra::new(AlgebraSpec::Polynomial { vars: 1 }).unwrap();
        let f = PrimeField::new(2).unwrap();
        let tile = Ball::enumerate(&alg, 2).unwrap().words().to_vec();
        let eps = rational::ratio(1, 4);
        let window = candidate_window(&alg, 241).unwrap();
        let report = tile_window(&alg, &tile, &window, 2, &eps, &f, 0, SearchOptions::default()).unwrap();
        assert!(report.holds(), "{}", report.to_json());

        let small = candidate_window(&alg, 240).unwrap();
        let err = tile_window(&alg, &tile, &small, 2, &eps, &f, 0, SearchOptions::default());
        assert!(matches!(err, Err(Error::InsufficientInvariance { .. })));
    }

    #[test]
    fn demo_rejects_bad_input() {
        let f = PrimeField::new(2).unwrap();
        let alg = Algebra::new(AlgebraSpec::Polynomial { vars: 1 }).unwrap();
        assert!(matches!(
            demo_weak_stability(&alg, &f, &Rational::zero(), 0),
            Err(Error::InvalidParameter(_))
        ));
        let h = Algebra::new(AlgebraSpec::Heisenberg).unwrap();
        assert!(matches!(
            demo_weak_stability(&h, &f, &rational::ratio(1, 4), 0),
            Err(Error::UnsupportedSize(_))
        ));
    }

    #[test]
    fn demo_on_a_line() {
        let f = PrimeField::new(2).unwrap();
        let alg = Algebra::new(AlgebraSpec::Polynomial { vars: 1 }).unwrap();
        let report = demo_weak_stability(&alg, &f, &rational::ratio(1, 4), 0).unwrap();
        assert_eq!(report.tile.dim(), 5);
        assert_eq!(report.n, 80);
        assert!(report.success(), "{}", report.to_json());
    }
}
