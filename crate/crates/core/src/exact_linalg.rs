//! Dense exact linear algebra over `ℚ`.
//!
//! Two elimination routes live here. [`rref`] runs fraction-free (Bareiss)
//! elimination on integer-scaled rows and then normalizes to the canonical
//! reduced row echelon form. [`SpanBuilder`] grows a reduced basis one vector at
//! a time, which is much cheaper when thousands of sparse vectors span a space
//! of a few hundred dimensions. Both produce the same canonical basis, which
//! is what [`Subspace`] equality relies on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::forms::{monomial_basis, Form, Scalar};

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatrixQ::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        MatrixQ::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        MatrixQ {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> MatrixQ {
        let mut t = MatrixQ::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &MatrixQ) -> MatrixQ {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = MatrixQ::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "vector length does not match matrix");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    /// Determinant by fraction-free elimination. Square matrices only.
    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        let (mut rows, denom) = integer_rows(self);
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !rows[r][c].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                rows.swap(p, c);
                sign = -sign;
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let v = &rows[c][c] * &rows[i][j] - &rows[i][c] * &rows[c][j];
                    rows[i][j] = v / &prev;
                }
                rows[i][c] = BigInt::zero();
            }
            prev = rows[c][c].clone();
        }
        Scalar::new(sign * &rows[n - 1][n - 1], denom)
    }

    pub fn inverse(&self) -> Result<MatrixQ> {
        if self.rows != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = MatrixQ::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one());
        }
        let red = rref(&aug);
        if red.pivots.iter().take(n).copied().ne(0..n) {
            return Err(Error::SingularMatrix);
        }
        let mut inv = MatrixQ::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.matrix.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }
}

/// Scales each row to integers. Returns the rows and the product of the row scales
/// (used to undo the scaling for the determinant).
fn integer_rows(m: &MatrixQ) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut total = BigInt::one();
    let rows = (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            total *= &l;
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect();
    (rows, total)
}

/// Result of [`rref`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rref {
    /// Canonical reduced row echelon form, same shape as the input (zero rows last).
    pub matrix: MatrixQ,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Canonical reduced row echelon form.
///
/// Fraction-free elimination brings integer-scaled rows to echelon form; every
/// intermediate entry is a minor of the input, so the division by the previous
/// pivot is exact. A final rational pass normalizes pivots to one and clears the
/// entries above them.
pub fn rref(m: &MatrixQ) -> Rref {
    let (mut rows, _) = integer_rows(m);
    let nrows = m.rows;
    let ncols = m.cols;
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        for i in r + 1..nrows {
            if rows[i][c].is_zero() {
                for j in c + 1..ncols {
                    if !rows[i][j].is_zero() {
                        rows[i][j] = &rows[r][c] * &rows[i][j] / &prev;
                    }
                }
                continue;
            }
            for j in c + 1..ncols {
                let v = &rows[r][c] * &rows[i][j] - &rows[i][c] * &rows[r][j];
                rows[i][j] = v / &prev;
            }
            rows[i][c] = BigInt::zero();
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let rank = r;

    let mut reduced: Vec<Vec<Scalar>> = rows
        .into_iter()
        .take(rank)
        .map(|row| row.into_iter().map(Scalar::from_integer).collect())
        .collect();
    for i in (0..rank).rev() {
        let pc = pivots[i];
        let inv = reduced[i][pc].recip();
        for v in reduced[i].iter_mut().skip(pc) {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let (above, rest) = reduced.split_at_mut(i);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            let factor = row[pc].clone();
            if factor.is_zero() {
                continue;
            }
            for j in pc..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &factor * &pivot_row[j];
                }
            }
        }
    }
    reduced.resize(nrows, vec![Scalar::zero(); ncols]);
    Rref {
        matrix: MatrixQ::from_rows_with_cols(reduced, ncols),
        rank,
        pivots,
    }
}

/// Canonical (RREF) basis of the right null space, one basis vector per row.
pub fn kernel_basis(m: &MatrixQ) -> MatrixQ {
    let red = rref(m);
    let ncols = m.cols();
    let mut is_pivot = vec![false; ncols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let vectors: Vec<Vec<Scalar>> = (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Scalar::zero(); ncols];
            v[free] = Scalar::one();
            for (i, &p) in red.pivots.iter().enumerate() {
                v[p] = -red.matrix.get(i, free).clone();
            }
            v
        })
        .collect();
    canonical_basis(vectors, ncols)
}

fn canonical_basis(vectors: Vec<Vec<Scalar>>, dim: usize) -> MatrixQ {
    let mut b = SpanBuilder::new(dim);
    for v in vectors {
        b.insert(v);
    }
    b.into_matrix()
}

/// Dimension of the span of equal-length vectors.
pub fn span_dim(vectors: &[Vec<Scalar>]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let dim = first.len();
    let mut b = SpanBuilder::new(dim);
    for v in vectors {
        if v.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        if b.is_full() {
            break;
        }
        b.insert(v.clone());
    }
    Ok(b.rank())
}

/// Incrementally maintained reduced row echelon basis.
///
/// Rows are kept fully reduced at all times: each row is zero in every other
/// row's pivot column. Inserting a vector therefore costs one subtraction per
/// pivot column in which it is nonzero.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(dim: usize) -> Self {
        SpanBuilder {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Residue of `v` modulo the current span.
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        if self.is_full() {
            return false;
        }
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut().skip(p) {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let support: Vec<usize> = (p..self.dim).filter(|&j| !v[j].is_zero()).collect();
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for &j in &support {
                row[j] -= &factor * &v[j];
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// Canonical basis: rows sorted by pivot column.
    pub fn into_matrix(self) -> MatrixQ {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Option<Vec<Scalar>>> = self.rows.into_iter().map(Some).collect();
        let sorted = order
            .into_iter()
            .map(|i| rows[i].take().expect("each row taken once"))
            .collect();
        MatrixQ::from_rows_with_cols(sorted, self.dim)
    }
}

/// Linear subspace of the degree-`t` piece of a polynomial ring in `nvars`
/// variables, stored by its canonical RREF basis over `monomial_basis(nvars, t)`.
///
/// Two subspaces are equal as sets exactly when the derived `PartialEq` says so.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    degree: u32,
    nvars: usize,
    basis: MatrixQ,
}

impl Subspace {
    pub fn ambient_dim(nvars: usize, degree: u32) -> usize {
        monomial_basis(nvars, degree).len()
    }

    pub fn zero(nvars: usize, degree: u32) -> Self {
        Subspace {
            degree,
            nvars,
            basis: MatrixQ::zeros(0, Subspace::ambient_dim(nvars, degree)),
        }
    }

    pub fn full(nvars: usize, degree: u32) -> Self {
        Subspace {
            degree,
            nvars,
            basis: MatrixQ::identity(Subspace::ambient_dim(nvars, degree)),
        }
    }

    pub fn from_vectors(nvars: usize, degree: u32, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = Subspace::ambient_dim(nvars, degree);
        let mut b = SpanBuilder::new(dim);
        for v in vectors {
            if v.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            b.insert(v);
        }
        Ok(Subspace::from_builder(nvars, degree, b))
    }

    pub fn from_forms(nvars: usize, degree: u32, forms: &[Form]) -> Result<Self> {
        let index = crate::forms::MonomialIndex::new(nvars, degree);
        let mut b = SpanBuilder::new(index.len());
        for f in forms {
            if f.nvars() != nvars {
                return Err(Error::NvarsMismatch {
                    left: nvars,
                    right: f.nvars(),
                });
            }
            if f.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: f.degree(),
                });
            }
            b.insert(f.to_dense(&index));
        }
        Ok(Subspace::from_builder(nvars, degree, b))
    }

    pub(crate) fn from_builder(nvars: usize, degree: u32, b: SpanBuilder) -> Self {
        Subspace {
            degree,
            nvars,
            basis: b.into_matrix(),
        }
    }

    pub(crate) fn from_canonical(nvars: usize, degree: u32, basis: MatrixQ) -> Self {
        Subspace {
            degree,
            nvars,
            basis,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &MatrixQ {
        &self.basis
    }

    /// Basis vectors as forms in the dual ring.
    pub fn basis_forms(&self) -> Vec<Form> {
        (0..self.basis.rows())
            .map(|r| {
                Form::from_dense(self.nvars, self.degree, self.basis.row(r))
                    .expect("basis rows match the ambient space")
            })
            .collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut b = SpanBuilder::new(self.basis.cols());
        for r in 0..self.basis.rows() {
            b.insert(self.basis.row(r).to_vec());
        }
        b.contains(v)
    }

    pub fn contains_form(&self, f: &Form) -> bool {
        if f.nvars() != self.nvars || f.degree() != self.degree {
            return false;
        }
        let index = crate::forms::MonomialIndex::new(self.nvars, self.degree);
        self.contains(&f.to_dense(&index))
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }
}

/// `U + W`.
pub fn subspace_sum(u: &Subspace, w: &Subspace) -> Result<Subspace> {
    u.same_ambient(w)?;
    let mut b = SpanBuilder::new(u.basis.cols());
    for m in [&u.basis, &w.basis] {
        for r in 0..m.rows() {
            b.insert(m.row(r).to_vec());
        }
    }
    Ok(Subspace::from_builder(u.nvars, u.degree, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::int;

    fn m(rows: &[&[i64]]) -> MatrixQ {
        MatrixQ::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_examples() {
        let r = rref(&m(&[&[0, 2], &[2, 0], &[0, 0]]));
        assert_eq!(r.rank, 2);
        assert_eq!(r.matrix, m(&[&[1, 0], &[0, 1], &[0, 0]]));

        let r = rref(&MatrixQ::identity(4));
        assert_eq!(r.rank, 4);
        assert_eq!(r.pivots, vec![0, 1, 2, 3]);

        let r = rref(&MatrixQ::zeros(3, 5));
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_with_rationals() {
        let a = MatrixQ::from_rows(vec![
            vec![Scalar::new(1.into(), 2.into()), int(1), int(3)],
            vec![int(1), int(2), int(6)],
            vec![int(0), int(1), Scalar::new(1.into(), 3.into())],
        ]);
        let r = rref(&a);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
        // second pivot row: (0, 1, 1/3); first: (1, 0, 6 - 2/3)
        assert_eq!(
            *r.matrix.get(0, 2),
            int(6) - Scalar::new(2.into(), 3.into())
        );
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&MatrixQ::identity(3)).rows(), 0);
        assert_eq!(kernel_basis(&MatrixQ::zeros(2, 3)).rows(), 3);
        let k = kernel_basis(&m(&[&[1, 1, 0]]));
        assert_eq!(k.rows(), 2);
        let mut b = SpanBuilder::new(3);
        for r in k.to_rows() {
            b.insert(r);
        }
        assert!(b.contains(&[int(1), int(-1), int(0)]));
    }

    #[test]
    fn span_dim_examples() {
        let v = |a: i64, b: i64| vec![int(a), int(b)];
        assert_eq!(span_dim(&[v(1, 0), v(0, 1), v(1, 1)]).unwrap(), 2);
        assert_eq!(span_dim(&[]).unwrap(), 0);
        assert_eq!(span_dim(&[v(2, 4), v(1, 2)]).unwrap(), 1);
        assert!(span_dim(&[v(1, 0), vec![int(1)]]).is_err());
    }

    #[test]
    fn subspace_sum_examples() {
        let u = Subspace::from_vectors(3, 1, vec![vec![int(1), int(2), int(0)]]).unwrap();
        let z = Subspace::zero(3, 1);
        assert_eq!(subspace_sum(&u, &z).unwrap(), u);
        assert_eq!(subspace_sum(&u, &u).unwrap(), u);
        let w = Subspace::from_vectors(3, 1, vec![vec![int(0), int(1), int(1)]]).unwrap();
        assert_eq!(subspace_sum(&u, &w).unwrap().dim(), 2);
        let other = Subspace::zero(3, 2);
        assert!(subspace_sum(&u, &other).is_err());
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.determinant(), int(18));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), MatrixQ::identity(3));
        let s = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.determinant(), int(0));
        assert_eq!(s.inverse(), Err(Error::SingularMatrix));
        let p = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(p.determinant(), int(-1));
    }
}
