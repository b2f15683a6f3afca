//! Subspaces of `K^n` in canonical form, and an incremental echelon basis.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{echelon, Matrix};

/// A subspace of `K^n`, stored as a reduced column-echelon basis.
///
/// Column `k` of `basis` has a leading 1 in row `pivots[k]`, zeros above it,
/// and every other column vanishes in that row; pivot rows increase with `k`.
/// Equal subspaces therefore have identical representations, so `==` is
/// subspace equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient_dim: usize) -> Self {
        Subspace { basis: Matrix::zeros(field, ambient_dim, 0), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of arbitrary vectors of length `ambient_dim`.
    pub fn from_vectors(field: &F, ambient_dim: usize, vectors: &[Vec<F::Elem>]) -> Self {
        let k = vectors.len();
        let mut data = Vec::with_capacity(k * ambient_dim);
        for v in vectors {
            assert_eq!(v.len(), ambient_dim, "vector length must equal the ambient dimension");
            data.extend_from_slice(v);
        }
        let pivots = echelon(field, &mut data, k, ambient_dim, true);
        let r = pivots.len();
        let basis = Matrix::from_fn(field, ambient_dim, r, |i, j| data[j * ambient_dim + i].clone());
        Subspace { basis, pivots }
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    /// Basis vectors as the columns of an `ambient_dim × dim` matrix.
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F::Elem>> {
        self.basis.columns().collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the subspace; the result vanishes on every pivot row.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        let f = self.field();
        for (k, &p) in self.pivots.iter().enumerate() {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = f.neg(&v[p]);
            for (i, x) in v.iter_mut().enumerate() {
                let b = self.basis.get(i, k);
                if !f.is_zero(b) {
                    *x = f.add(x, &f.mul(&c, b));
                }
            }
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field().is_zero(x))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.columns().all(|c| other.contains(&c))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(
                self.field().spec().to_string(),
                other.field().spec().to_string(),
            ));
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "subspace",
                expected: format!("ambient dimension {}", self.ambient_dim()),
                found: format!("ambient dimension {}", other.ambient_dim()),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut vectors = self.basis_vectors();
        vectors.extend(other.basis_vectors());
        Ok(Self::from_vectors(self.field(), self.ambient_dim(), &vectors))
    }

    /// `self ∩ other`, via the kernel of `[A | −B]`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let f = self.field();
        let n = self.ambient_dim();
        let (ka, kb) = (self.dim(), other.dim());
        if ka == 0 || kb == 0 {
            return Ok(Self::zero(f, n));
        }
        let stacked = Matrix::from_fn(f, n, ka + kb, |i, j| {
            if j < ka {
                self.basis.get(i, j).clone()
            } else {
                f.neg(other.basis.get(i, j - ka))
            }
        });
        let kernel = stacked.nullspace();
        let vectors: Vec<Vec<F::Elem>> = kernel
            .basis_vectors()
            .into_iter()
            .map(|xy| self.basis.mul_vec(&xy[..ka]).expect("shape checked"))
            .collect();
        Ok(Self::from_vectors(f, n, &vectors))
    }

    /// Image of the subspace under `m` (an `m.rows() × ambient_dim` matrix).
    pub fn image(&self, m: &Matrix<F>) -> Result<Self> {
        let img = m.mul(&self.basis)?;
        Ok(img.column_space())
    }
}

/// Incrementally grown basis kept in fully reduced form: each stored vector
/// has a 1 at its pivot and every other stored vector is 0 there.
///
/// Reducing a sparse vector costs one entry lookup per stored vector plus a
/// row operation only where that entry is nonzero.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    n: usize,
    vectors: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: &F, n: usize) -> Self {
        EchelonBasis { field: field.clone(), n, vectors: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_subspace(s: &Subspace<F>) -> Self {
        let mut b = Self::new(s.field(), s.ambient_dim());
        for v in s.basis_vectors() {
            b.insert(v);
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (b, &p) in self.vectors.iter().zip(&self.pivots) {
            if !f.is_zero(&v[p]) {
                let c = f.neg(&v[p]);
                f.axpy(v, &c, b);
            }
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the span; returns `false` (leaving the basis unchanged) if
    /// `v` already lies in it.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.n, "vector length must equal the ambient dimension");
        self.reduce(&mut v);
        let f = &self.field;
        let Some(q) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[q]).expect("nonzero");
        f.scale(&mut v, &inv);
        for b in &mut self.vectors {
            if !f.is_zero(&b[q]) {
                let c = f.neg(&b[q]);
                f.axpy(b, &c, &v);
            }
        }
        self.vectors.push(v);
        self.pivots.push(q);
        true
    }

    pub fn to_subspace(&self) -> Subspace<F> {
        Subspace::from_vectors(&self.field, self.n, &self.vectors)
    }
}
