//! Dense exact matrices, Gaussian elimination and the normalized rank metric.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::rational::{count_ratio, Rational};
use crate::subspace::Subspace;

/// Row-major dense matrix over an exact field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(
        field: &F,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> F::Elem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    /// Builds a matrix from row vectors; all rows must share a length.
    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "from_rows",
                    expected: format!("{cols} columns"),
                    found: format!("{} columns", r.len()),
                });
            }
            data.extend(r);
        }
        Ok(Matrix { field: field.clone(), rows: n, cols, data })
    }

    /// Builds a `rows × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch {
                context: "from_columns",
                expected: format!("length {rows}"),
                found: format!("length {}", bad.len()),
            });
        }
        Ok(Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone()))
    }

    /// Integer entries, reduced into the field.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn random<R: Rng + ?Sized>(
        field: &F,
        rows: usize,
        cols: usize,
        rng: &mut R,
        bound: u64,
    ) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.sample(rng, bound))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<F::Elem>> + '_ {
        (0..self.cols).map(move |j| self.column(j))
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !self.field.is_zero(x)).count()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn check_same_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.spec().to_string(),
                other.field.spec().to_string(),
            ));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Ok(Matrix { data, ..self.clone_shape() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Ok(Matrix { data, ..self.clone_shape() })
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: &F::Elem, other: &Self) -> Result<()> {
        self.check_same_shape(other, "add_scaled")?;
        self.field.axpy(&mut self.data, c, &other.data);
        Ok(())
    }

    pub fn scaled(&self, c: &F::Elem) -> Self {
        let mut m = self.clone();
        m.field.scale(&mut m.data, c);
        m
    }

    fn clone_shape(&self) -> Self {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: Vec::new(),
        }
    }

    /// Matrix product. Zero entries of `self` are skipped, which keeps products
    /// of the (very sparse) shift and permutation tables cheap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.spec().to_string(),
                other.field.spec().to_string(),
            ));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "mul",
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        let oc = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * oc..(i + 1) * oc];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if !f.is_zero(a) {
                    f.axpy(dst, a, &other.data[k * oc..(k + 1) * oc]);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "mul_vec",
                expected: format!("length {}", self.cols),
                found: format!("length {}", v.len()),
            });
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(x) {
                        acc = f.add(&acc, &f.mul(a, x));
                    }
                }
                acc
            })
            .collect())
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_range(&self, start: usize, end: usize) -> Self {
        Self::from_fn(&self.field, self.rows, end - start, |i, j| self.get(i, start + j).clone())
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "hstack",
                expected: format!("{} rows", self.rows),
                found: format!("{} rows", other.rows),
            });
        }
        let cols = self.cols + other.cols;
        Ok(Self::from_fn(&self.field, self.rows, cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "vstack",
                expected: format!("{} columns", self.cols),
                found: format!("{} columns", other.cols),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        echelon(&self.field, &mut data, self.rows, self.cols, false).len()
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = echelon(&self.field, &mut m.data, self.rows, self.cols, true);
        (m, pivots)
    }

    /// Kernel `{v : self·v = 0}` as a canonical subspace of `K^cols`.
    pub fn nullspace(&self) -> Subspace<F> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut vectors = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(k, free));
            }
            vectors.push(v);
        }
        Subspace::from_vectors(f, self.cols, &vectors)
    }

    pub fn column_space(&self) -> Subspace<F> {
        Subspace::from_vectors(&self.field, self.rows, &self.columns().collect::<Vec<_>>())
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                context: "inverse",
                expected: "square matrix".into(),
                found: format!("{}x{}", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(r.column_range(n, 2 * n))
    }

    /// `(self ⊗ I_copies) ⊕ 0_pad`.
    pub fn kron_and_pad(&self, copies: usize, pad: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::InvalidParameter("copies must be at least 1".into()));
        }
        let f = &self.field;
        let rows = self.rows * copies + pad;
        let cols = self.cols * copies + pad;
        let mut out = Self::zeros(f, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if f.is_zero(v) {
                    continue;
                }
                for a in 0..copies {
                    out.set(i * copies + a, j * copies + a, v.clone());
                }
            }
        }
        Ok(out)
    }

    /// Text form: a `field rows cols` header line, then one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}", self.field.spec(), self.rows, self.cols);
        for i in 0..self.rows {
            s.push('\n');
            let row: Vec<String> = self.row(i).iter().map(|x| self.field.format_elem(x)).collect();
            s.push_str(&row.join(" "));
        }
        s
    }

    pub fn from_text(field: &F, text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let header_field: FieldSpec = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty matrix text".into()))?
            .parse()?;
        if header_field != field.spec() {
            return Err(Error::FieldMismatch(header_field.to_string(), field.spec().to_string()));
        }
        let mut dim = |what: &str| -> Result<usize> {
            tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("missing {what} in matrix header")))
        };
        let rows = dim("rows")?;
        let cols = dim("cols")?;
        let data = tokens.map(|t| field.parse_elem(t)).collect::<Result<Vec<_>>>()?;
        if data.len() != rows * cols {
            return Err(Error::Parse(format!(
                "expected {} entries for a {rows}x{cols} matrix, found {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Normalized rank distance `rank(a − b) / n` of two `n × n` matrices.
pub fn rk_dist<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Rational> {
    if !a.is_square() || a.rows == 0 {
        return Err(Error::DimensionMismatch {
            context: "rk_dist",
            expected: "nonempty square matrices".into(),
            found: format!("{}x{}", a.rows, a.cols),
        });
    }
    let diff = a.sub(b)?;
    Ok(count_ratio(diff.rank(), a.rows))
}

/// Appends to `vectors` (columns, linearly independent) standard basis vectors
/// in index order until they span `K^n`, and returns the resulting invertible
/// `n × n` matrix.
pub fn complete_to_basis<F: Field>(vectors: &Matrix<F>) -> Result<Matrix<F>> {
    let f = vectors.field();
    let n = vectors.rows();
    let mut basis = crate::subspace::EchelonBasis::new(f, n);
    let mut columns: Vec<Vec<F::Elem>> = Vec::with_capacity(n);
    for c in vectors.columns() {
        if !basis.insert(c.clone()) {
            return Err(Error::DependentColumns);
        }
        columns.push(c);
    }
    for i in 0..n {
        if basis.dim() == n {
            break;
        }
        let mut e = vec![f.zero(); n];
        e[i] = f.one();
        if basis.insert(e.clone()) {
            columns.push(e);
        }
    }
    Matrix::from_columns(f, n, &columns)
}

/// In-place Gaussian elimination with first-nonzero pivoting; returns the pivot
/// columns. With `reduced`, pivots are normalized to 1 and cleared above too.
pub(crate) fn echelon<F: Field>(
    f: &F,
    data: &mut [F::Elem],
    rows: usize,
    cols: usize,
    reduced: bool,
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&data[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in c..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&data[r * cols + c]).expect("pivot is nonzero");
        if reduced {
            f.scale(&mut data[r * cols + c..(r + 1) * cols], &inv);
        }
        let (head, tail) = data.split_at_mut(r * cols);
        let (pivot_row, below) = tail.split_at_mut(cols);
        let eliminate = |row: &mut [F::Elem]| {
            let x = &row[c];
            if f.is_zero(x) {
                return;
            }
            let factor = if reduced {
                f.neg(x)
            } else {
                f.neg(&f.mul(x, &inv))
            };
            f.axpy(&mut row[c..], &factor, &pivot_row[c..]);
        };
        for row in below.chunks_mut(cols) {
            eliminate(row);
        }
        if reduced {
            for row in head.chunks_mut(cols) {
                eliminate(row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::rational::ratio;

    fn gf2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(&gf2(), 3).rank(), 3);
        assert_eq!(Matrix::zeros(&Rationals, 2, 4).rank(), 0);
        assert_eq!(Matrix::from_i64(&Rationals, &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn rk_dist_examples() {
        let f = gf2();
        let a = Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]);
        assert_eq!(rk_dist(&a, &a).unwrap(), ratio(0, 1));
        assert_eq!(
            rk_dist(&Matrix::identity(&f, 4), &Matrix::zeros(&f, 4, 4)).unwrap(),
            ratio(1, 1)
        );
        // nilpotent shift vs cyclic shift: they differ in one column
        let j4 = Matrix::from_fn(&f, 4, 4, |i, j| u32::from(i == j + 1));
        let c4 = Matrix::from_fn(&f, 4, 4, |i, j| u32::from(i == (j + 1) % 4));
        assert_eq!(rk_dist(&j4, &c4).unwrap(), ratio(1, 4));
        assert!(matches!(
            rk_dist(&j4, &Matrix::identity(&f, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn nullspace_examples() {
        let q = Rationals;
        assert_eq!(Matrix::zeros(&q, 2, 2).nullspace().dim(), 2);
        assert_eq!(Matrix::identity(&q, 3).nullspace().dim(), 0);
        let f = gf2();
        let n = Matrix::from_i64(&f, &[&[1, 1], &[0, 0]]).nullspace();
        assert_eq!(n, Subspace::from_vectors(&f, 2, &[vec![1, 1]]));
    }

    #[test]
    fn complete_to_basis_examples() {
        let f = gf2();
        let empty = Matrix::zeros(&f, 2, 0);
        assert_eq!(complete_to_basis(&empty).unwrap(), Matrix::identity(&f, 2));
        let id = Matrix::identity(&f, 3);
        assert_eq!(complete_to_basis(&id).unwrap(), id);
        let v = Matrix::from_i64(&f, &[&[1], &[1]]);
        assert_eq!(
            complete_to_basis(&v).unwrap(),
            Matrix::from_i64(&f, &[&[1, 1], &[1, 0]])
        );
        let dep = Matrix::from_i64(&f, &[&[1, 1], &[1, 1]]);
        assert!(matches!(complete_to_basis(&dep), Err(Error::DependentColumns)));
    }

    #[test]
    fn kron_and_pad_examples() {
        let f = gf2();
        let i2 = Matrix::identity(&f, 2);
        assert_eq!(i2.kron_and_pad(2, 0).unwrap(), Matrix::identity(&f, 4));
        let a = Matrix::from_i64(&f, &[&[1, 0], &[1, 1]]);
        assert_eq!(a.kron_and_pad(1, 0).unwrap(), a);
        let j2 = Matrix::from_i64(&f, &[&[0, 0], &[1, 0]]);
        let out = j2.kron_and_pad(2, 1).unwrap();
        assert_eq!((out.rows(), out.cols()), (5, 5));
        assert_eq!(out.rank(), 2);
        assert_eq!(*out.get(2, 0), 1);
        assert_eq!(*out.get(3, 1), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, &[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&q, 2));
        assert!(matches!(
            Matrix::from_i64(&q, &[&[1, 2], &[2, 4]]).inverse(),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn text_round_trip() {
        let q = Rationals;
        let a = Matrix::from_rows(
            &q,
            vec![
                vec![ratio(3, 4), ratio(-2, 1)],
                vec![ratio(0, 1), ratio(5, 3)],
            ],
        )
        .unwrap();
        let text = a.to_text();
        assert_eq!(text, "q 2 2\n3/4 -2\n0 5/3");
        assert_eq!(Matrix::from_text(&q, &text).unwrap(), a);
        assert!(Matrix::from_text(&gf2(), &text).is_err());
        assert!(Matrix::from_text(&q, "q 2 2\n1 2 3").is_err());
    }
}
