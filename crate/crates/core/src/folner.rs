//! Følner windows: finite monomial subspaces `W ≤ A` and exact checks of
//! `(V, ε)`-invariance, `dim VW < (1 + ε) dim W`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraSpec, BasisWord};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::rational::{self, Rational};

/// A window `W = span(words)` of distinct normal-form words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerWindow {
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
    pub words: Vec<BasisWord>,
}

/// Outcome of an invariance check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub dim_w: usize,
    pub dim_vw: usize,
    #[serde(with = "rational::serde_str")]
    pub epsilon: Rational,
    pub holds: bool,
}

impl InvarianceReport {
    fn new(dim_w: usize, dim_vw: usize, epsilon: Rational) -> Self {
        let holds = rational::count_ratio(dim_vw, 1)
            < (rational::one() + &epsilon) * rational::count_ratio(dim_w, 1);
        InvarianceReport { dim_w, dim_vw, epsilon, holds }
    }
}

impl FolnerWindow {
    /// A window from explicit words; every word must be a distinct normal form.
    pub fn from_words(alg: &Algebra, words: Vec<BasisWord>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidParameter("a window needs at least one word".into()));
        }
        let mut seen = HashSet::new();
        for w in &words {
            alg.validate_word(w)?;
            if !seen.insert(w) {
                return Err(Error::InvalidParameter(format!("window word {w} is repeated")));
            }
        }
        Ok(FolnerWindow { algebra: alg.spec().clone(), params: BTreeMap::new(), words })
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// Word → coordinate index.
    pub fn index(&self) -> HashMap<BasisWord, usize> {
        self.words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect()
    }

    /// Re-validates words against the algebra (used after reading JSON).
    pub fn validate(&self, alg: &Algebra) -> Result<()> {
        if alg.spec() != &self.algebra {
            return Err(Error::AlgebraMismatch(alg.spec().to_string(), self.algebra.to_string()));
        }
        Self::from_words(alg, self.words.clone()).map(|_| ())
    }
}

fn box_words(ranges: &[(i64, i64)]) -> Vec<BasisWord> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (lo..=hi).map(move |e| {
                    let mut w = prefix.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(BasisWord).collect()
}

/// Built-in window family, words in lexicographic (box) order:
/// polynomial: all exponents `< n`; laurent: `[−n, n]^r`;
/// heisenberg: `|a|, |b| ≤ n`, `|c| ≤ n²`.
pub fn candidate_window(alg: &Algebra, n: usize) -> Result<FolnerWindow> {
    if n == 0 {
        return Err(Error::InvalidParameter("window size must be at least 1".into()));
    }
    let n = n as i64;
    let words = match alg.spec() {
        AlgebraSpec::Polynomial { vars } => box_words(&vec![(0, n - 1); *vars]),
        AlgebraSpec::Laurent { rank } => box_words(&vec![(-n, n); *rank]),
        AlgebraSpec::Heisenberg => box_words(&[(-n, n), (-n, n), (-n * n, n * n)]),
        AlgebraSpec::Custom { .. } => {
            return Err(Error::UnsupportedWindow(alg.spec().to_string()))
        }
    };
    Ok(FolnerWindow {
        algebra: alg.spec().clone(),
        params: BTreeMap::from([("n".to_string(), n)]),
        words,
    })
}

/// Box window `∏ [lo_i, hi_i]` of exponent vectors, in lexicographic order.
pub fn box_window(alg: &Algebra, ranges: &[(i64, i64)]) -> Result<FolnerWindow> {
    let words = box_words(ranges);
    let mut window = FolnerWindow::from_words(alg, words)?;
    for (i, (lo, hi)) in ranges.iter().enumerate() {
        window.params.insert(format!("lo{i}"), *lo);
        window.params.insert(format!("hi{i}"), *hi);
    }
    Ok(window)
}

/// Distinct products `v·w`, `v ∈ V`, `w ∈ W`, in first-seen order.
pub fn product_words(alg: &Algebra, v: &[BasisWord], w: &[BasisWord]) -> Result<Vec<BasisWord>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in v {
        for b in w {
            let p = alg.mul_words(a, b)?;
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// `dim VW` as the rank of the coefficient matrix whose columns are the
/// products `v·w` written in the basis of all product words.
pub fn product_rank<F: Field>(
    field: &F,
    alg: &Algebra,
    v: &[BasisWord],
    w: &[BasisWord],
) -> Result<usize> {
    let support = product_words(alg, v, w)?;
    let index: HashMap<&BasisWord, usize> = support.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut m = Matrix::zeros(field, support.len(), v.len() * w.len());
    for (i, a) in v.iter().enumerate() {
        for (j, b) in w.iter().enumerate() {
            let p = alg.mul_words(a, b)?;
            m.set(index[&p], i * w.len() + j, field.one());
        }
    }
    Ok(m.rank())
}

/// Exact `(V, ε)`-invariance of `W`. Built-in kinds count distinct products;
/// custom kinds take the rank of the product coefficient matrix.
pub fn invariance_check(
    alg: &Algebra,
    v: &[BasisWord],
    window: &FolnerWindow,
    epsilon: &Rational,
) -> Result<InvarianceReport> {
    if &window.algebra != alg.spec() {
        return Err(Error::AlgebraMismatch(alg.spec().to_string(), window.algebra.to_string()));
    }
    if epsilon <= &Rational::from_integer(0.into()) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let dim_vw = if alg.is_builtin() {
        product_words(alg, v, &window.words)?.len()
    } else {
        product_rank(&crate::field::Rationals, alg, v, &window.words)?
    };
    Ok(InvarianceReport::new(window.dim(), dim_vw, epsilon.clone()))
}

/// `{w ∈ W : x·w ∈ W}`, the monomial part of `m_x^{-1}(W) ∩ W`.
pub fn preimage_in_window(
    alg: &Algebra,
    x: &BasisWord,
    window: &FolnerWindow,
) -> Result<Vec<BasisWord>> {
    let members: HashSet<&BasisWord> = window.words.iter().collect();
    let mut out = Vec::new();
    for w in &window.words {
        if members.contains(&alg.mul_words(x, w)?) {
            out.push(w.clone());
        }
    }
    Ok(out)
}

/// Window words `w` with `b·w ∈ W` for every `b` in `multipliers`; for
/// `multipliers = S^{2d}` this spans the builder subspace on which the
/// truncated action is exactly multiplicative up to degree `d`.
pub fn window_core(
    alg: &Algebra,
    multipliers: &[BasisWord],
    window: &FolnerWindow,
) -> Result<Vec<BasisWord>> {
    let members: HashSet<&BasisWord> = window.words.iter().collect();
    let mut out = Vec::new();
    'words: for w in &window.words {
        for b in multipliers {
            if !members.contains(&alg.mul_words(b, w)?) {
                continue 'words;
            }
        }
        out.push(w.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ball;
    use crate::field::PrimeField;
    use crate::rational::ratio;

    fn alg(spec: AlgebraSpec) -> Algebra {
        Algebra::new(spec).unwrap()
    }

    #[test]
    fn window_sizes() {
        let poly = alg(AlgebraSpec::Polynomial { vars: 1 });
        let w = candidate_window(&poly, 8).unwrap();
        assert_eq!(w.dim(), 8);
        assert_eq!(w.words[7], BasisWord(vec![7]));
        let z2 = alg(AlgebraSpec::Laurent { rank: 2 });
        assert_eq!(candidate_window(&z2, 3).unwrap().dim(), 49);
        let h = alg(AlgebraSpec::Heisenberg);
        let w = candidate_window(&h, 2).unwrap();
        let mut count = 0;
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -4i64..=4 {
                    assert!(w.words.contains(&BasisWord(vec![a, b, c])));
                    count += 1;
                }
            }
        }
        assert_eq!(w.dim(), count);
        assert_eq!(count, 225);
        let custom = alg(AlgebraSpec::Custom { letters: Some(2), rules: vec![] });
        assert!(matches!(candidate_window(&custom, 2), Err(Error::UnsupportedWindow(_))));
    }

    #[test]
    fn invariance_examples() {
        let poly = alg(AlgebraSpec::Polynomial { vars: 1 });
        let w = candidate_window(&poly, 8).unwrap();
        let unit = [poly.unit().clone()];
        let r = invariance_check(&poly, &unit, &w, &ratio(1, 100)).unwrap();
        assert_eq!((r.dim_vw, r.holds), (8, true));
        let v = Ball::enumerate(&poly, 1).unwrap();
        let r = invariance_check(&poly, v.words(), &w, &ratio(1, 4)).unwrap();
        assert_eq!((r.dim_vw, r.holds), (9, true));

        let z2 = alg(AlgebraSpec::Laurent { rank: 2 });
        let v = Ball::enumerate(&z2, 1).unwrap();
        for n in 1..8i64 {
            let words = box_words(&[(0, n - 1), (0, n - 1)]);
            let w = FolnerWindow::from_words(&z2, words).unwrap();
            for eps in [ratio(1, 2), ratio(1, 4), ratio(4, 5)] {
                let r = invariance_check(&z2, v.words(), &w, &eps).unwrap();
                assert_eq!(r.dim_vw as i64, n * n + 4 * n);
                assert_eq!(r.holds, ratio(4, n) < eps);
            }
        }
    }

    #[test]
    fn rank_path_agrees_with_counting() {
        let f = PrimeField::new(3).unwrap();
        for spec in [
            AlgebraSpec::Polynomial { vars: 2 },
            AlgebraSpec::Laurent { rank: 1 },
            AlgebraSpec::Heisenberg,
        ] {
            let a = alg(spec);
            let v = Ball::enumerate(&a, 2).unwrap();
            let w = candidate_window(&a, 2).unwrap();
            assert_eq!(
                product_rank(&f, &a, v.words(), &w.words).unwrap(),
                product_words(&a, v.words(), &w.words).unwrap().len()
            );
        }
    }

    #[test]
    fn builder_core_examples() {
        let poly = alg(AlgebraSpec::Polynomial { vars: 1 });
        let w = candidate_window(&poly, 8).unwrap();
        let s4 = Ball::enumerate(&poly, 4).unwrap();
        assert_eq!(window_core(&poly, s4.words(), &w).unwrap().len(), 4);
        let s6 = Ball::enumerate(&poly, 6).unwrap();
        assert_eq!(window_core(&poly, s6.words(), &w).unwrap().len(), 2);
        assert_eq!(preimage_in_window(&poly, &BasisWord(vec![3]), &w).unwrap().len(), 5);
    }

    #[test]
    fn window_json_round_trip() {
        let poly = alg(AlgebraSpec::Polynomial { vars: 1 });
        let w = candidate_window(&poly, 3).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(
            json,
            r#"{"algebra":{"kind":"polynomial","vars":1},"params":{"n":3},"words":[[0],[1],[2]]}"#
        );
        let back: FolnerWindow = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        back.validate(&poly).unwrap();
    }
}
