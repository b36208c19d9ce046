//! Dense exact linear algebra: echelon forms, kernels, subspaces and
//! subquotients.
//!
//! Pivoting is always "first nonzero entry, in column order", so every basis
//! produced here is a deterministic function of the input.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::scalar::{display_coefficient, Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("vectors are linearly dependent (vector {index} lies in the span of the previous ones)")]
    Dependent { index: usize },
    #[error("boundary vector {index} does not lie in the cycle space")]
    NotContained { index: usize },
    #[error("map does not send source cycle {index} into target cycles")]
    CyclesNotPreserved { index: usize },
    #[error("map does not send source boundary {index} into target boundaries")]
    BoundariesNotPreserved { index: usize },
}

pub fn zero_vector<F: Field>(n: usize) -> Vec<F> {
    vec![F::zero(); n]
}

pub fn unit_vector<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = zero_vector(n);
    v[i] = F::one();
    v
}

pub fn is_zero_vector<F: Field>(v: &[F]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `y += a * x`
pub fn axpy<F: Field>(y: &mut [F], a: &F, x: &[F]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += &a.times(xi);
        }
    }
}

pub fn scale_vector<F: Field>(a: &F, x: &[F]) -> Vec<F> {
    x.iter().map(|xi| a.times(xi)).collect()
}

/// A dense `rows × cols` matrix, stored row by row.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field = Rational> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<F>>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            let cells: Vec<String> = row.iter().map(display_coefficient).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![zero_vector(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = F::one();
        }
        m
    }

    /// Builds a matrix from its rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| F::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: F) {
        self.data[i][j] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: &F) {
        self.data[i][j] += value;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| is_zero_vector(r))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    t.data[j][i] = x.clone();
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension");
        self.data
            .iter()
            .map(|row| {
                let mut acc = F::zero();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &a.times(b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix: `w^T · self`.
    pub fn vec_mul(&self, w: &[F]) -> Vec<F> {
        assert_eq!(w.len(), self.rows, "vector-matrix dimension");
        let mut out = zero_vector(self.cols);
        for (wi, row) in w.iter().zip(&self.data) {
            axpy(&mut out, wi, row);
        }
        out
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "matrix product dimension");
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    axpy(&mut out.data[i], a, &other.data[k]);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (r, o) in out.data.iter_mut().zip(&other.data) {
            for (x, y) in r.iter_mut().zip(o) {
                *x += y;
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, a: &F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| scale_vector(a, r)).collect(),
        }
    }

    /// Side-by-side concatenation; all blocks must have `rows` rows.
    pub fn hstack(rows: usize, blocks: &[&Matrix<F>]) -> Matrix<F> {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row count");
            for i in 0..rows {
                for j in 0..b.cols {
                    if !b.data[i][j].is_zero() {
                        out.data[i][offset + j] = b.data[i][j].clone();
                    }
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m.data, self.cols);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self · v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Subspace<F> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            is_pivot[p] = Some(row);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = zero_vector(self.cols);
            v[free] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                let x = &r.data[row][free];
                if !x.is_zero() {
                    v[p] = -x.clone();
                }
            }
            basis.push(v);
        }
        Subspace::from_basis(self.cols, basis).expect("kernel basis is independent")
    }

    /// Span of the columns.
    pub fn image(&self) -> Subspace<F> {
        Subspace::span(self.rows, self.columns())
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = Self::hstack(n, &[self, &Self::identity(n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some(Matrix::from_rows(
            n,
            r.data.into_iter().map(|row| row[n..].to_vec()).collect(),
        ))
    }

    /// Some solution of `self · x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let rhs = Matrix::from_columns(self.rows, &[b.to_vec()]);
        let aug = Self::hstack(self.rows, &[self, &rhs]);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vector(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.data[row][self.cols].clone();
        }
        Some(x)
    }
}

/// In-place Gauss–Jordan elimination; returns pivot columns.
fn rref_in_place<F: Field>(data: &mut [Vec<F>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..cols {
        if lead >= data.len() {
            break;
        }
        let Some(found) = (lead..data.len()).find(|&r| !data[r][col].is_zero()) else {
            continue;
        };
        data.swap(lead, found);
        let inv = F::one() / data[lead][col].clone();
        if !inv.is_one() {
            for x in data[lead].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let support: Vec<usize> = (col..cols).filter(|&j| !data[lead][j].is_zero()).collect();
        let pivot_row = data[lead].clone();
        for (r, row) in data.iter_mut().enumerate() {
            if r == lead || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &j in &support {
                let t = factor.times(&pivot_row[j]);
                row[j] -= &t;
            }
        }
        pivots.push(col);
        lead += 1;
    }
    pivots
}

/// A linear subspace of `F^n` with a fixed basis.
///
/// Besides the basis the subspace keeps an echelon form of it, which makes
/// membership tests and coordinate extraction a single pass over the vector.
#[derive(Clone, PartialEq)]
pub struct Subspace<F: Field = Rational> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    echelon: Vec<Vec<F>>,
    pivots: Vec<usize>,
    // basis coordinates = to_basis · echelon coordinates
    to_basis: Matrix<F>,
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient", &self.ambient)
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            echelon: Vec::new(),
            pivots: Vec::new(),
            to_basis: Matrix::zeros(0, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_basis(ambient, (0..ambient).map(|i| unit_vector(ambient, i)).collect())
            .expect("standard basis")
    }

    /// Span of arbitrary vectors; the basis is the reduced echelon form.
    pub fn span(ambient: usize, vectors: Vec<Vec<F>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "vector length");
        }
        let mut rows = vectors;
        let pivots = rref_in_place(&mut rows, ambient);
        rows.truncate(pivots.len());
        let k = rows.len();
        Subspace {
            ambient,
            basis: rows.clone(),
            echelon: rows,
            pivots,
            to_basis: Matrix::identity(k),
        }
    }

    /// Uses `basis` verbatim; fails if it is linearly dependent.
    pub fn from_basis(ambient: usize, basis: Vec<Vec<F>>) -> Result<Self, LinalgError> {
        let k = basis.len();
        for v in &basis {
            if v.len() != ambient {
                return Err(LinalgError::Dimension {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        let mut aug: Vec<Vec<F>> = basis
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut row = v.clone();
                row.extend(unit_vector::<F>(k, i));
                row
            })
            .collect();
        let pivots = rref_in_place(&mut aug, ambient + k);
        if let Some(pos) = pivots.iter().position(|&p| p >= ambient) {
            // The first pivot in the identity block marks a dependency; find
            // which input vector it involves last.
            let row = &aug[pos];
            let index = (0..k).rev().find(|&i| !row[ambient + i].is_zero()).unwrap_or(0);
            return Err(LinalgError::Dependent { index });
        }
        let echelon: Vec<Vec<F>> = aug.iter().map(|r| r[..ambient].to_vec()).collect();
        let t = Matrix::from_rows(k, aug.iter().map(|r| r[ambient..].to_vec()).collect());
        Ok(Subspace {
            ambient,
            basis,
            echelon,
            pivots,
            to_basis: t.transpose(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// The basis as the columns of an `ambient × dim` matrix.
    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    fn echelon_coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.pivots.len());
        for (row, &p) in self.echelon.iter().zip(&self.pivots) {
            let c = residual[p].clone();
            if !c.is_zero() {
                axpy(&mut residual, &-c.clone(), row);
            }
            coords.push(c);
        }
        if is_zero_vector(&residual) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.echelon_coordinates(v).is_some()
    }

    /// Coordinates of `v` with respect to [`Subspace::basis`].
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let c = self.echelon_coordinates(v)?;
        Some(self.to_basis.mul_vec(&c))
    }

    /// Index of the first basis vector of `self` not contained in `other`.
    pub fn first_outside(&self, other: &Subspace<F>) -> Option<usize> {
        self.basis.iter().position(|v| !other.contains(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> bool {
        self.first_outside(other).is_none()
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, vs)
    }

    /// Image of the subspace under a linear map.
    pub fn map(&self, f: &Matrix<F>) -> Subspace<F> {
        Subspace::span(f.nrows(), self.basis.iter().map(|v| f.mul_vec(v)).collect())
    }
}

/// Incrementally built echelon basis. Each stored row has a unit pivot and
/// is zero at the pivots of all rows stored before it.
struct Echelon<F: Field> {
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    fn reduce(&self, v: &mut [F]) {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = -v[*p].clone();
                axpy(v, &c, row);
            }
        }
    }

    /// Adds `v` if it is independent of the stored rows.
    fn insert(&mut self, mut v: Vec<F>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = F::one() / v[p].clone();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, v));
        true
    }
}

/// A quotient `Z / B` of nested subspaces, with chosen coset representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Subquotient<F: Field = Rational> {
    cycles: Subspace<F>,
    boundaries: Subspace<F>,
    reps: Vec<Vec<F>>,
    // basis: boundaries basis followed by reps
    combined: Subspace<F>,
}

impl<F: Field> Subquotient<F> {
    /// Builds `Z / B`. Representatives are taken greedily from the basis of
    /// `Z`, skipping vectors already spanned by `B` and earlier choices.
    pub fn new(cycles: Subspace<F>, boundaries: Subspace<F>) -> Result<Self, LinalgError> {
        if cycles.ambient != boundaries.ambient {
            return Err(LinalgError::Dimension {
                expected: cycles.ambient,
                found: boundaries.ambient,
            });
        }
        if let Some(index) = boundaries.first_outside(&cycles) {
            return Err(LinalgError::NotContained { index });
        }
        let mut current = Echelon { rows: Vec::new() };
        for b in boundaries.basis() {
            current.insert(b.clone());
        }
        let mut reps = Vec::new();
        for z in cycles.basis() {
            if boundaries.dim() + reps.len() == cycles.dim() {
                break;
            }
            if current.insert(z.clone()) {
                reps.push(z.clone());
            }
        }
        let mut all = boundaries.basis().to_vec();
        all.extend(reps.iter().cloned());
        let combined = Subspace::from_basis(cycles.ambient, all)?;
        Ok(Subquotient {
            cycles,
            boundaries,
            reps,
            combined,
        })
    }

    /// The whole space modulo nothing.
    pub fn full(ambient: usize) -> Self {
        Self::new(Subspace::full(ambient), Subspace::zero(ambient)).expect("trivially nested")
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.cycles.ambient
    }

    pub fn cycles(&self) -> &Subspace<F> {
        &self.cycles
    }

    pub fn boundaries(&self) -> &Subspace<F> {
        &self.boundaries
    }

    pub fn representatives(&self) -> &[Vec<F>] {
        &self.reps
    }

    /// Quotient coordinates of a cycle; `None` when `v` is not a cycle.
    pub fn project(&self, v: &[F]) -> Option<Vec<F>> {
        let c = self.combined.coordinates(v)?;
        Some(c[self.boundaries.dim()..].to_vec())
    }

    /// `projection` restricted to [`Subquotient::cycles`], in cycle-basis
    /// coordinates.
    pub fn projection_matrix(&self) -> Matrix<F> {
        let cols: Vec<Vec<F>> = self
            .cycles
            .basis()
            .iter()
            .map(|z| self.project(z).expect("cycle"))
            .collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    /// Representative for quotient coordinates.
    pub fn lift(&self, coords: &[F]) -> Vec<F> {
        let mut v = zero_vector(self.ambient_dim());
        for (c, r) in coords.iter().zip(&self.reps) {
            axpy(&mut v, c, r);
        }
        v
    }

    pub fn is_zero_class(&self, v: &[F]) -> bool {
        self.boundaries.contains(v)
    }
}

/// Matrix of the map `src → dst` induced by `f` on quotient coordinates.
pub fn induced_map<F: Field>(
    f: &Matrix<F>,
    src: &Subquotient<F>,
    dst: &Subquotient<F>,
) -> Result<Matrix<F>, LinalgError> {
    if f.ncols() != src.ambient_dim() {
        return Err(LinalgError::Dimension {
            expected: src.ambient_dim(),
            found: f.ncols(),
        });
    }
    if f.nrows() != dst.ambient_dim() {
        return Err(LinalgError::Dimension {
            expected: dst.ambient_dim(),
            found: f.nrows(),
        });
    }
    for (index, z) in src.cycles().basis().iter().enumerate() {
        if !dst.cycles().contains(&f.mul_vec(z)) {
            return Err(LinalgError::CyclesNotPreserved { index });
        }
    }
    for (index, b) in src.boundaries().basis().iter().enumerate() {
        if !dst.boundaries().contains(&f.mul_vec(b)) {
            return Err(LinalgError::BoundariesNotPreserved { index });
        }
    }
    let cols: Vec<Vec<F>> = src
        .representatives()
        .iter()
        .map(|r| dst.project(&f.mul_vec(r)).expect("checked cycle"))
        .collect();
    Ok(Matrix::from_columns(dst.dim(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type M = Matrix<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn qv(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rref_examples() {
        let (z, p) = M::zeros(2, 2).rref();
        assert!(z.is_zero());
        assert!(p.is_empty());

        let (i, p) = M::identity(3).rref();
        assert_eq!(i, M::identity(3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = M::from_int_rows(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r, M::from_int_rows(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(M::identity(3).kernel().dim(), 0);
        assert_eq!(M::zeros(2, 3).kernel().dim(), 3);
        let k = M::from_int_rows(&[&[1, 2], &[2, 4]]).kernel();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis()[0], qv(&[-2, 1]));
    }

    #[test]
    fn subquotient_examples() {
        let z = Subspace::span(3, vec![qv(&[1, 0, 0]), qv(&[0, 1, 0])]);
        let b = Subspace::span(3, vec![qv(&[1, 0, 0])]);
        let sq = Subquotient::new(z.clone(), b).unwrap();
        assert_eq!(sq.dim(), 1);
        assert_eq!(sq.representatives()[0], qv(&[0, 1, 0]));

        assert_eq!(Subquotient::new(z.clone(), z).unwrap().dim(), 0);

        let sq = Subquotient::new(Subspace::full(2), Subspace::span(2, vec![qv(&[1, 1])])).unwrap();
        assert_eq!(sq.dim(), 1);
        let p = sq.project(&qv(&[0, 1])).unwrap();
        assert!(!is_zero_vector(&p));
        assert!(is_zero_vector(&sq.project(&qv(&[3, 3])).unwrap()));
    }

    #[test]
    fn subquotient_rejects_non_nested() {
        let z = Subspace::span(2, vec![qv(&[1, 0])]);
        let b = Subspace::span(2, vec![qv(&[0, 1])]);
        assert_eq!(
            Subquotient::new(z, b).unwrap_err(),
            LinalgError::NotContained { index: 0 }
        );
    }

    #[test]
    fn induced_map_examples() {
        let sq = Subquotient::new(Subspace::full(2), Subspace::span(2, vec![qv(&[0, 1])])).unwrap();
        assert_eq!(induced_map(&M::identity(2), &sq, &sq).unwrap(), M::identity(1));
        assert!(induced_map(&M::zeros(2, 2), &sq, &sq).unwrap().is_zero());
        let diag = M::from_int_rows(&[&[1, 0], &[0, 0]]);
        assert_eq!(induced_map(&diag, &sq, &sq).unwrap(), M::identity(1));

        // swapping the coordinates moves the boundary e2 onto e1
        let swap = M::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            induced_map(&swap, &sq, &sq).unwrap_err(),
            LinalgError::BoundariesNotPreserved { index: 0 }
        );
    }

    #[test]
    fn dependent_basis_is_rejected() {
        let err = Subspace::from_basis(2, vec![qv(&[1, 2]), qv(&[2, 4])]).unwrap_err();
        assert_eq!(err, LinalgError::Dependent { index: 1 });
    }

    #[test]
    fn coordinates_in_given_basis() {
        let s = Subspace::from_basis(3, vec![qv(&[1, 1, 0]), qv(&[0, 1, 1])]).unwrap();
        assert_eq!(s.coordinates(&qv(&[2, 5, 3])).unwrap(), qv(&[2, 3]));
        assert!(s.coordinates(&qv(&[1, 0, 0])).is_none());
    }

    #[test]
    fn inverse_and_solve() {
        let a = M::from_int_rows(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), M::identity(2));
        assert!(M::from_int_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let x = a.solve(&qv(&[3, 2])).unwrap();
        assert_eq!(a.mul_vec(&x), qv(&[3, 2]));
        assert!(M::from_int_rows(&[&[1, 2], &[2, 4]]).solve(&qv(&[1, 0])).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = M> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, c), r).prop_map(move |rows| {
                M::from_rows(c, rows.into_iter().map(|r| qv(&r)).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            prop_assert_eq!(m.rank() + m.kernel().dim(), m.ncols());
            for v in m.kernel().basis() {
                prop_assert!(is_zero_vector(&m.mul_vec(v)));
            }
        }

        #[test]
        fn rref_idempotent(m in small_matrix()) {
            let (r, p) = m.rref();
            let (rr, pp) = r.rref();
            prop_assert_eq!(r, rr);
            prop_assert_eq!(p, pp);
        }

        #[test]
        fn identity_induces_identity(m in small_matrix()) {
            let n = m.ncols();
            let z = m.kernel();
            let b = Subspace::span(n, z.basis().iter().take(1).cloned().collect());
            let sq = Subquotient::new(z, b).unwrap();
            prop_assert_eq!(induced_map(&M::identity(n), &sq, &sq).unwrap(), M::identity(sq.dim()));
        }
    }
}
