//! Exact vectors, matrices, Gaussian elimination, and affine hulls.

use std::fmt;
use std::ops::Index;

use crate::num::Rational;
use crate::Error;

/// Dense vector of rationals. Ordering is lexicographic, which fixes the
/// canonical sort order used throughout the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    /// Standard basis vector e_i.
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        QVector(entries.iter().map(|&n| Rational::from_int(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dot dimension mismatch");
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    pub fn add(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * c).collect())
    }

    /// Keep only the listed coordinates, in the given order.
    pub fn select(&self, coords: &[usize]) -> QVector {
        QVector(coords.iter().map(|&i| self.0[i].clone()).collect())
    }

    pub fn concat(&self, other: &QVector) -> QVector {
        let mut entries = self.0.clone();
        entries.extend(other.0.iter().cloned());
        QVector(entries)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|a| !a.is_zero())
    }

    pub fn set(&mut self, i: usize, value: Rational) {
        self.0[i] = value;
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Rectangular row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: Vec<QVector>,
    cols: usize,
}

/// Output of reduced-row-echelon elimination.
pub struct Rref {
    pub rank: usize,
    pub reduced: QMatrix,
    pub pivot_cols: Vec<usize>,
}

impl QMatrix {
    pub fn new(rows: Vec<QVector>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.dim(), cols, "non-rectangular matrix");
        }
        QMatrix { rows, cols }
    }

    pub fn from_rows(rows: Vec<QVector>) -> Self {
        let cols = rows.first().map_or(0, QVector::dim);
        Self::new(rows, cols)
    }

    pub fn identity(n: usize) -> Self {
        QMatrix {
            rows: (0..n).map(|i| QVector::unit(n, i)).collect(),
            cols: n,
        }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &QVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn mul_vec(&self, v: &QVector) -> QVector {
        QVector::new(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    /// Reduced row echelon form. Pivots are chosen as the first row with a
    /// nonzero entry in column order; exact arithmetic needs no pivoting for
    /// stability, and this keeps the result deterministic.
    pub fn rref(&self) -> Rref {
        let mut m: Vec<Vec<Rational>> = self.rows.iter().map(|r| r.entries().to_vec()).collect();
        let nrows = m.len();
        let ncols = self.cols;
        let mut pivot_cols = Vec::new();
        let mut rank = 0;

        for col in 0..ncols {
            if rank == nrows {
                break;
            }
            let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][col].recip();
            for v in m[rank].iter_mut().skip(col) {
                *v = &*v * &inv;
            }
            let pivot_row = m[rank].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == rank || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().skip(col).zip(pivot_row.iter().skip(col)) {
                    *v = &*v - &(&f * pv);
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }

        Rref {
            rank,
            reduced: QMatrix::new(m.into_iter().map(QVector::new).collect(), ncols),
            pivot_cols,
        }
    }

    /// Basis of the right null space {x : Mx = 0}, one vector per free column
    /// of the rref, in column order.
    pub fn null_space(&self) -> Vec<QVector> {
        let r = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in r.pivot_cols.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = QVector::zeros(self.cols);
            v.set(free, Rational::one());
            for (col, &prow) in pivot_set.iter().enumerate() {
                if let Some(prow) = prow {
                    v.set(col, -&r.reduced.row(prow)[free]);
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }
}

/// Solve `A x = b` returning the rref particular solution (free variables
/// fixed to zero), or `None` when the system is inconsistent.
pub fn solve_particular(a: &QMatrix, b: &QVector) -> Option<QVector> {
    assert_eq!(a.row_count(), b.dim());
    let aug_rows: Vec<QVector> = a
        .rows()
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut e = row.entries().to_vec();
            e.push(rhs.clone());
            QVector::new(e)
        })
        .collect();
    let aug = QMatrix::new(aug_rows, a.col_count() + 1);
    let r = aug.rref();
    if r.pivot_cols.contains(&a.col_count()) {
        return None; // a row reduced to 0 = 1
    }
    let mut x = QVector::zeros(a.col_count());
    for (row, &col) in r.pivot_cols.iter().enumerate() {
        x.set(col, r.reduced.row(row)[a.col_count()].clone());
    }
    Some(x)
}

/// One row `normal . z = offset` of an equation system, or `normal . z <= rhs`
/// when used as an inequality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct LinearConstraint {
    pub normal: QVector,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(normal: QVector, rhs: Rational) -> Self {
        LinearConstraint { normal, rhs }
    }

    pub fn eval(&self, point: &QVector) -> Rational {
        self.normal.dot(point)
    }

    pub fn satisfied_eq(&self, point: &QVector) -> bool {
        self.eval(point) == self.rhs
    }

    pub fn satisfied_le(&self, point: &QVector) -> bool {
        self.eval(point) <= self.rhs
    }
}

/// An affine subspace of R^n given by an irredundant equation system in
/// reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineSubspace {
    pub equations: Vec<LinearConstraint>,
    pub ambient_dim: usize,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.ambient_dim - self.equations.len()
    }

    pub fn contains(&self, point: &QVector) -> bool {
        self.equations.iter().all(|eq| eq.satisfied_eq(point))
    }
}

/// Bring an equation system `normal . z = rhs` to canonical form: reduced row
/// echelon over the augmented matrix, leading coefficient +1. Panics if the
/// system is inconsistent (a pivot in the rhs column), which cannot happen for
/// equations derived from a nonempty point set.
pub fn canonicalize_equations(
    equations: &[LinearConstraint],
    ambient_dim: usize,
) -> Vec<LinearConstraint> {
    let aug_rows: Vec<QVector> = equations
        .iter()
        .map(|eq| {
            assert_eq!(eq.normal.dim(), ambient_dim);
            let mut e = eq.normal.entries().to_vec();
            e.push(eq.rhs.clone());
            QVector::new(e)
        })
        .collect();
    let r = QMatrix::new(aug_rows, ambient_dim + 1).rref();
    assert!(
        !r.pivot_cols.contains(&ambient_dim),
        "inconsistent equation system"
    );
    (0..r.rank)
        .map(|i| {
            let row = r.reduced.row(i);
            LinearConstraint::new(
                QVector::new(row.entries()[..ambient_dim].to_vec()),
                row[ambient_dim].clone(),
            )
        })
        .collect()
}

/// Smallest affine subspace containing all points, computed by translating to
/// the first point and taking the null space of the difference-vector matrix.
pub fn affine_hull(points: &[QVector]) -> Result<AffineSubspace, Error> {
    let Some(p0) = points.first() else {
        return Err(Error::EmptyPointSet);
    };
    let dim = p0.dim();
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch);
        }
    }
    let diffs: Vec<QVector> = points[1..].iter().map(|p| p.sub(p0)).collect();
    let normals = QMatrix::new(diffs, dim).null_space();
    let equations: Vec<LinearConstraint> = normals
        .into_iter()
        .map(|n| {
            let rhs = n.dot(p0);
            LinearConstraint::new(n, rhs)
        })
        .collect();
    Ok(AffineSubspace {
        equations: canonicalize_equations(&equations, dim),
        ambient_dim: dim,
    })
}

/// Nonzero coefficients λ with Σλ = 0 and Σλᵢ·pᵢ = 0, scaled so the first
/// nonzero coefficient is 1. Errors if the points are affinely independent.
pub fn affine_dependence(points: &[QVector]) -> Result<QVector, Error> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let dim = points[0].dim();
    let k = points.len();
    let mut rows = Vec::with_capacity(dim + 1);
    rows.push(QVector::new(vec![Rational::one(); k]));
    for c in 0..dim {
        rows.push(QVector::new(points.iter().map(|p| p[c].clone()).collect()));
    }
    let basis = QMatrix::new(rows, k).null_space();
    let Some(lambda) = basis.into_iter().next() else {
        return Err(Error::NoAffineDependence);
    };
    let lead = lambda
        .first_nonzero()
        .expect("null space vector is nonzero");
    Ok(lambda.scale(&lambda[lead].recip()))
}

/// Greedily select an affinely independent subset spanning the affine hull of
/// `points`, scanning in the given order. Returns indices into `points`.
pub fn affinely_independent_spanning_subset(points: &[QVector]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if chosen.is_empty() {
            chosen.push(i);
            continue;
        }
        let p0 = &points[chosen[0]];
        let mut diffs: Vec<QVector> = chosen[1..].iter().map(|&j| points[j].sub(p0)).collect();
        let old_rank = diffs.len(); // invariant: chosen diffs are independent
        diffs.push(p.sub(p0));
        if QMatrix::new(diffs, p0.dim()).rank() > old_rank {
            chosen.push(i);
        }
    }
    chosen
}

/// Affine rank minus one: dimension of the affine hull of the point set.
pub fn affine_dim(points: &[QVector]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let p0 = &points[0];
    let diffs: Vec<QVector> = points[1..].iter().map(|p| p.sub(p0)).collect();
    QMatrix::new(diffs, p0.dim()).rank()
}
