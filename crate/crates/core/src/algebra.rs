//! Finitely generated monomial algebras: normal forms, element arithmetic,
//! monomial balls `S^r` and the filtration `A_{≤r} = span(S^r)`.
//!
//! Built-in kinds:
//!
//! * `polynomial(m)`: `K[x_1..x_m]`, generators `1, x_1, …, x_m`.
//! * `laurent(r)`: `K[Z^r]`, generators `1, t_1, t_1⁻¹, …, t_r, t_r⁻¹`.
//! * `heisenberg`: group algebra of the integer Heisenberg group with
//!   generators `1, x, x⁻¹, y, y⁻¹`, central `z` and `y·x = x·y·z`. Words are
//!   normal forms `x^a y^b z^c`, multiplied by
//!   `(a,b,c)·(a',b',c') = (a+a', b+b', c+c'+a'·b)`.
//! * `custom`: words over letters `a, b, …` reduced by a finite rewrite table.
//!   The table must be confluent and the algebra free of zero divisors; neither
//!   is checked.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// Maximum number of rewrite steps for one custom normal form.
pub const REWRITE_BUDGET: usize = 10_000;

/// Serializable description of an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraSpec {
    Polynomial {
        vars: usize,
    },
    Laurent {
        rank: usize,
    },
    Heisenberg,
    Custom {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        letters: Option<usize>,
        rules: Vec<[String; 2]>,
    },
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraSpec::Polynomial { vars } => write!(f, "polynomial({vars})"),
            AlgebraSpec::Laurent { rank } => write!(f, "laurent({rank})"),
            AlgebraSpec::Heisenberg => f.write_str("heisenberg"),
            AlgebraSpec::Custom { rules, .. } => write!(f, "custom({} rules)", rules.len()),
        }
    }
}

/// A canonical basis monomial: an exponent vector for the built-in kinds
/// (`(a,b,c)` for Heisenberg), a letter sequence for custom algebras.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasisWord(pub Vec<i64>);

impl fmt::Display for BasisWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Runtime algebra: the spec plus its generator list and compiled rewrite rules.
#[derive(Clone, Debug)]
pub struct Algebra {
    spec: AlgebraSpec,
    generators: Vec<BasisWord>,
    rules: Arc<Vec<(Vec<i64>, Vec<i64>)>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Algebra {}

fn unit_vector(len: usize, i: usize, v: i64) -> BasisWord {
    let mut e = vec![0; len];
    e[i] = v;
    BasisWord(e)
}

fn letters_of(word: &str) -> Result<Vec<i64>> {
    word.chars()
        .map(|c| {
            if c.is_ascii_lowercase() {
                Ok((c as u8 - b'a') as i64)
            } else {
                Err(Error::Parse(format!("custom words use letters a-z, found `{c}`")))
            }
        })
        .collect()
}

impl Algebra {
    pub fn new(spec: AlgebraSpec) -> Result<Self> {
        let mut rules = Vec::new();
        let generators = match &spec {
            AlgebraSpec::Polynomial { vars } => {
                let mut g = vec![BasisWord(vec![0; *vars])];
                g.extend((0..*vars).map(|i| unit_vector(*vars, i, 1)));
                g
            }
            AlgebraSpec::Laurent { rank } => {
                let mut g = vec![BasisWord(vec![0; *rank])];
                for i in 0..*rank {
                    g.push(unit_vector(*rank, i, 1));
                    g.push(unit_vector(*rank, i, -1));
                }
                g
            }
            AlgebraSpec::Heisenberg => vec![
                BasisWord(vec![0, 0, 0]),
                BasisWord(vec![1, 0, 0]),
                BasisWord(vec![-1, 0, 0]),
                BasisWord(vec![0, 1, 0]),
                BasisWord(vec![0, -1, 0]),
            ],
            AlgebraSpec::Custom { letters, rules: table } => {
                let mut max_letter = -1;
                for [lhs, rhs] in table {
                    let l = letters_of(lhs)?;
                    let r = letters_of(rhs)?;
                    if l.is_empty() {
                        return Err(Error::Parse("rewrite rule with empty left side".into()));
                    }
                    max_letter = l.iter().chain(&r).copied().fold(max_letter, i64::max);
                    rules.push((l, r));
                }
                let k = letters.unwrap_or((max_letter + 1) as usize);
                if (max_letter + 1) as usize > k {
                    return Err(Error::Parse(format!(
                        "rewrite table uses more than the declared {k} letters"
                    )));
                }
                let mut g = vec![BasisWord(Vec::new())];
                g.extend((0..k as i64).map(|i| BasisWord(vec![i])));
                g
            }
        };
        Ok(Algebra { spec, generators, rules: Arc::new(rules) })
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    /// Generating set `S`; `generators()[0]` is the unit.
    pub fn generators(&self) -> &[BasisWord] {
        &self.generators
    }

    pub fn unit(&self) -> &BasisWord {
        &self.generators[0]
    }

    /// Human-readable generator names, aligned with `generators()`.
    pub fn generator_names(&self) -> Vec<String> {
        let mut names = vec!["1".to_string()];
        match &self.spec {
            AlgebraSpec::Polynomial { vars } => {
                for i in 0..*vars {
                    names.push(if *vars == 1 { "x".into() } else { format!("x{}", i + 1) });
                }
            }
            AlgebraSpec::Laurent { rank } => {
                for i in 0..*rank {
                    let t = if *rank == 1 { "t".to_string() } else { format!("t{}", i + 1) };
                    names.push(t.clone());
                    names.push(format!("{t}^-1"));
                }
            }
            AlgebraSpec::Heisenberg => {
                names.extend(["x", "x^-1", "y", "y^-1"].map(String::from));
            }
            AlgebraSpec::Custom { .. } => {
                for g in &self.generators[1..] {
                    names.push(((b'a' + g.0[0] as u8) as char).to_string());
                }
            }
        }
        names
    }

    /// Whether the kind has a built-in (coefficient-free, exact) product rule.
    pub fn is_builtin(&self) -> bool {
        !matches!(self.spec, AlgebraSpec::Custom { .. })
    }

    /// Product of two basis words. Built-in kinds never fail; custom rewriting
    /// fails past [`REWRITE_BUDGET`] steps.
    pub fn mul_words(&self, a: &BasisWord, b: &BasisWord) -> Result<BasisWord> {
        match &self.spec {
            AlgebraSpec::Polynomial { .. } | AlgebraSpec::Laurent { .. } => {
                Ok(BasisWord(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect()))
            }
            AlgebraSpec::Heisenberg => {
                let (x, y) = (&a.0, &b.0);
                Ok(BasisWord(vec![x[0] + y[0], x[1] + y[1], x[2] + y[2] + y[0] * x[1]]))
            }
            AlgebraSpec::Custom { .. } => {
                let mut w = a.0.clone();
                w.extend_from_slice(&b.0);
                self.rewrite(w).map(BasisWord)
            }
        }
    }

    fn rewrite(&self, mut w: Vec<i64>) -> Result<Vec<i64>> {
        for _ in 0..REWRITE_BUDGET {
            let hit = (0..w.len()).find_map(|pos| {
                self.rules
                    .iter()
                    .find(|(lhs, _)| w[pos..].starts_with(lhs))
                    .map(|rule| (pos, rule))
            });
            let Some((pos, (lhs, rhs))) = hit else {
                return Ok(w);
            };
            w.splice(pos..pos + lhs.len(), rhs.iter().copied());
        }
        Err(Error::NonTermination { steps: REWRITE_BUDGET })
    }

    /// Normal form of the product of the generators with the given indices.
    /// Every kind here is a monomial algebra with coefficient-free rewriting,
    /// so the product equals `1 · word`.
    pub fn normal_form(&self, generator_indices: &[usize]) -> Result<BasisWord> {
        let mut w = self.unit().clone();
        for &i in generator_indices {
            let g = self.generators.get(i).ok_or_else(|| {
                Error::InvalidParameter(format!("generator index {i} out of range"))
            })?;
            w = self.mul_words(&w, g)?;
        }
        Ok(w)
    }

    /// Grading used for the canonical order: word length for custom algebras,
    /// the sum of absolute exponents otherwise.
    pub fn grade(&self, w: &BasisWord) -> u64 {
        match self.spec {
            AlgebraSpec::Custom { .. } => w.0.len() as u64,
            _ => w.0.iter().map(|e| e.unsigned_abs()).sum(),
        }
    }

    /// Graded-lexicographic sort.
    pub fn sort_words(&self, words: &mut [BasisWord]) {
        words.sort_by(|a, b| self.grade(a).cmp(&self.grade(b)).then_with(|| a.cmp(b)));
    }

    /// Checks that a word has the right shape for this algebra.
    pub fn validate_word(&self, w: &BasisWord) -> Result<()> {
        let ok = match &self.spec {
            AlgebraSpec::Polynomial { vars } => w.0.len() == *vars && w.0.iter().all(|&e| e >= 0),
            AlgebraSpec::Laurent { rank } => w.0.len() == *rank,
            AlgebraSpec::Heisenberg => w.0.len() == 3,
            AlgebraSpec::Custom { .. } => {
                let k = self.generators.len() as i64 - 1;
                w.0.iter().all(|&l| (0..k).contains(&l))
                    && self.rewrite(w.0.clone()).is_ok_and(|nf| nf == w.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!("{w} is not a normal-form word of {}", self.spec)))
        }
    }

    pub fn mul_elements<F: Field>(
        &self,
        a: &AlgebraElement<F>,
        b: &AlgebraElement<F>,
    ) -> Result<AlgebraElement<F>> {
        if a.field != b.field {
            return Err(Error::FieldMismatch(
                a.field.spec().to_string(),
                b.field.spec().to_string(),
            ));
        }
        let f = &a.field;
        let mut out = AlgebraElement::zero(f);
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                let w = self.mul_words(wa, wb)?;
                out.add_term(w, f.mul(ca, cb));
            }
        }
        Ok(out)
    }
}

/// Finite linear combination of basis words; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement<F: Field> {
    field: F,
    terms: BTreeMap<BasisWord, F::Elem>,
}

impl<F: Field> AlgebraElement<F> {
    pub fn zero(field: &F) -> Self {
        AlgebraElement { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn from_word(field: &F, w: BasisWord) -> Self {
        Self::from_terms(field, [(w, field.one())])
    }

    pub fn from_terms(field: &F, terms: impl IntoIterator<Item = (BasisWord, F::Elem)>) -> Self {
        let mut e = Self::zero(field);
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<BasisWord, F::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &BasisWord) -> F::Elem {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, w: BasisWord, c: F::Elem) {
        let f = &self.field;
        let next = match self.terms.get(&w) {
            Some(old) => f.add(old, &c),
            None => c,
        };
        if f.is_zero(&next) {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, next);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), self.field.neg(c));
        }
        out
    }

    pub fn scaled(&self, c: &F::Elem) -> Self {
        Self::from_terms(
            &self.field,
            self.terms.iter().map(|(w, x)| (w.clone(), self.field.mul(c, x))),
        )
    }
}

/// The words of `S^r`: normal forms of all products of at most `r`
/// generators, deduplicated and sorted graded-lexicographically. Their span
/// is `A_{≤r}`, so `len()` is the growth function `γ_S(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    radius: usize,
    words: Vec<BasisWord>,
    index: HashMap<BasisWord, usize>,
}

impl Ball {
    pub fn enumerate(alg: &Algebra, radius: usize) -> Result<Self> {
        let mut seen: HashSet<BasisWord> = HashSet::new();
        seen.insert(alg.unit().clone());
        let mut frontier = vec![alg.unit().clone()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &alg.generators()[1..] {
                    let p = alg.mul_words(w, g)?;
                    if seen.insert(p.clone()) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        let mut words: Vec<BasisWord> = seen.into_iter().collect();
        alg.sort_words(&mut words);
        Ok(Self::from_sorted(radius, words))
    }

    fn from_sorted(radius: usize, words: Vec<BasisWord>) -> Self {
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Ball { radius, words, index }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn words(&self) -> &[BasisWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn position(&self, w: &BasisWord) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn contains(&self, w: &BasisWord) -> bool {
        self.index.contains_key(w)
    }

    /// Coefficient vector of `a` in ball order.
    pub fn coords<F: Field>(&self, a: &AlgebraElement<F>) -> Result<Vec<F::Elem>> {
        let f = a.field();
        let mut v = vec![f.zero(); self.len()];
        for (w, c) in a.terms() {
            let i = self
                .position(w)
                .ok_or_else(|| Error::OutOfBall { word: w.to_string(), radius: self.radius })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    /// The element with the given coordinates.
    pub fn element<F: Field>(&self, field: &F, coords: &[F::Elem]) -> AlgebraElement<F> {
        AlgebraElement::from_terms(
            field,
            self.words.iter().cloned().zip(coords.iter().cloned()),
        )
    }
}

/// Smallest `r` with every word in `S^r`, or `None` if some word is not
/// reached by radius `max_radius`.
pub fn containing_radius(alg: &Algebra, words: &[BasisWord], max_radius: usize) -> Result<Option<usize>> {
    let mut remaining: HashSet<&BasisWord> = words.iter().collect();
    let mut seen: HashSet<BasisWord> = HashSet::from([alg.unit().clone()]);
    remaining.remove(alg.unit());
    let mut frontier = vec![alg.unit().clone()];
    let mut r = 0;
    while !remaining.is_empty() {
        if r == max_radius {
            return Ok(None);
        }
        r += 1;
        let mut next = Vec::new();
        for w in &frontier {
            for g in &alg.generators()[1..] {
                let p = alg.mul_words(w, g)?;
                if seen.insert(p.clone()) {
                    remaining.remove(&p);
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    Ok(Some(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn w(v: &[i64]) -> BasisWord {
        BasisWord(v.to_vec())
    }

    #[test]
    fn normal_form_examples() {
        let poly = Algebra::new(AlgebraSpec::Polynomial { vars: 1 }).unwrap();
        assert_eq!(poly.normal_form(&[1, 1, 1]).unwrap(), w(&[3]));
        let laurent = Algebra::new(AlgebraSpec::Laurent { rank: 1 }).unwrap();
        assert_eq!(laurent.normal_form(&[1, 2]).unwrap(), w(&[0]));
        let h = Algebra::new(AlgebraSpec::Heisenberg).unwrap();
        // y·x = x·y·z
        assert_eq!(h.normal_form(&[3, 1]).unwrap(), w(&[1, 1, 1]));
        assert!(h.normal_form(&[7]).is_err());
    }

    #[test]
    fn heisenberg_product_rule() {
        let h = Algebra::new(AlgebraSpec::Heisenberg).unwrap();
        let (a, b) = (w(&[2, -1, 3]), w(&[-1, 4, 0]));
        assert_eq!(h.mul_words(&a, &b).unwrap(), w(&[1, 3, 3 + (-1) * (-1)]));
    }

    #[test]
    fn element_product_textbook_identity() {
        let q = Rationals;
        let poly = Algebra::new(AlgebraSpec::Polynomial { vars: 1 }).unwrap();
        let x = AlgebraElement::from_word(&q, w(&[1]));
        let one = AlgebraElement::from_word(&q, w(&[0]));
        let p = poly.mul_elements(&x.add(&one), &x.sub(&one)).unwrap();
        let expected = AlgebraElement::from_terms(&q, [(w(&[2]), q.one()), (w(&[0]), q.from_i64(-1))]);
        assert_eq!(p, expected);
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn ball_examples() {
        let poly2 = Algebra::new(AlgebraSpec::Polynomial { vars: 2 }).unwrap();
        let b = Ball::enumerate(&poly2, 2).unwrap();
        assert_eq!(
            b.words(),
            &[w(&[0, 0]), w(&[0, 1]), w(&[1, 0]), w(&[0, 2]), w(&[1, 1]), w(&[2, 0])]
        );
        let laurent = Algebra::new(AlgebraSpec::Laurent { rank: 1 }).unwrap();
        let b = Ball::enumerate(&laurent, 2).unwrap();
        assert_eq!(b.words(), &[w(&[0]), w(&[-1]), w(&[1]), w(&[-2]), w(&[2])]);
        assert_eq!(Ball::enumerate(&laurent, 0).unwrap().words(), &[w(&[0])]);
    }

    #[test]
    fn coords_examples() {
        let f = PrimeField::new(2).unwrap();
        let poly = Algebra::new(AlgebraSpec::Polynomial { vars: 1 }).unwrap();
        let ball = Ball::enumerate(&poly, 3).unwrap();
        assert_eq!(ball.coords(&AlgebraElement::zero(&f)).unwrap(), vec![0; 4]);
        let x2 = AlgebraElement::from_word(&f, w(&[2]));
        assert_eq!(ball.coords(&x2).unwrap(), vec![0, 0, 1, 0]);
        let x4 = AlgebraElement::from_word(&f, w(&[4]));
        assert!(matches!(ball.coords(&x4), Err(Error::OutOfBall { .. })));
    }

    #[test]
    fn custom_commutative_rules_match_polynomial_ball() {
        let spec = AlgebraSpec::Custom { letters: None, rules: vec![["ba".into(), "ab".into()]] };
        let alg = Algebra::new(spec).unwrap();
        assert_eq!(alg.normal_form(&[2, 1, 2, 1]).unwrap(), w(&[0, 0, 1, 1]));
        for r in 0..5 {
            let poly = Algebra::new(AlgebraSpec::Polynomial { vars: 2 }).unwrap();
            assert_eq!(
                Ball::enumerate(&alg, r).unwrap().len(),
                Ball::enumerate(&poly, r).unwrap().len()
            );
        }
    }

    #[test]
    fn custom_non_terminating_table_errors() {
        let spec = AlgebraSpec::Custom { letters: None, rules: vec![["a".into(), "aa".into()]] };
        let alg = Algebra::new(spec).unwrap();
        assert!(matches!(alg.normal_form(&[1]), Err(Error::NonTermination { .. })));
        assert!(matches!(Ball::enumerate(&alg, 1), Err(Error::NonTermination { .. })));
    }

    #[test]
    fn spec_json_forms() {
        let cases = [
            (r#"{"kind":"polynomial","vars":2}"#, AlgebraSpec::Polynomial { vars: 2 }),
            (r#"{"kind":"laurent","rank":2}"#, AlgebraSpec::Laurent { rank: 2 }),
            (r#"{"kind":"heisenberg"}"#, AlgebraSpec::Heisenberg),
        ];
        for (json, spec) in cases {
            assert_eq!(serde_json::from_str::<AlgebraSpec>(json).unwrap(), spec);
            assert_eq!(serde_json::to_string(&spec).unwrap(), json);
        }
        let custom: AlgebraSpec =
            serde_json::from_str(r#"{"kind":"custom","rules":[["ba","ab"]]}"#).unwrap();
        assert!(matches!(custom, AlgebraSpec::Custom { .. }));
    }
}
