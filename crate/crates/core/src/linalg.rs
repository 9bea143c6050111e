//! Dense exact linear algebra over a [`FieldSpec`].
//!
//! Matrices are square, row-major, and indexed from 0. Elimination always
//! picks the first nonzero pivot so that outputs (null-space bases in
//! particular) are deterministic.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("matrix is singular")]
    Singular,
    #[error("rows must all have length {expected}, found {found}")]
    Ragged { expected: usize, found: usize },
    #[error("matrix order must be positive")]
    Empty,
    #[error("candidate eigenvalues are not pairwise distinct")]
    RepeatedCandidate,
    #[error("expected {expected} candidate eigenvalues, got {found}")]
    CandidateCount { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A dense n×n matrix of scalars from a single field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    n: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: FieldSpec, n: usize) -> Matrix {
        Matrix {
            field,
            n,
            entries: vec![field.zero(); n * n],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        Matrix::from_fn(
            field,
            n,
            |i, j| if i == j { field.one() } else { field.zero() },
        )
    }

    pub fn from_fn(
        field: FieldSpec,
        n: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = f(i, j);
                assert_eq!(x.field(), field, "entry ({i},{j}) is from the wrong field");
                entries.push(x);
            }
        }
        Matrix { field, n, entries }
    }

    pub fn diag(field: FieldSpec, d: &[Scalar]) -> Matrix {
        Matrix::from_fn(field, d.len(), |i, j| {
            if i == j {
                d[i].clone()
            } else {
                field.zero()
            }
        })
    }

    /// Builds a matrix from rows, checking squareness and that every entry
    /// lives in `field`.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Matrix, LinalgError> {
        let n = rows.len();
        if n == 0 {
            return Err(LinalgError::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LinalgError::Ragged {
                    expected: n,
                    found: row.len(),
                });
            }
            for x in row {
                if x.field() != field {
                    return Err(LinalgError::FieldMismatch(field, x.field()));
                }
                entries.push(x);
            }
        }
        Ok(Matrix { field, n, entries })
    }

    /// Convenience for literals: integer pairs `(num, den)`.
    pub fn from_ratios(field: FieldSpec, rows: &[&[(i64, i64)]]) -> Result<Matrix, LinalgError> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(a, b)| field.from_ratio(a, b))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_rows(field, rows)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert_eq!(x.field(), self.field);
        self.entries[i * self.n + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major flattening, used for rank tests on families of matrices.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    pub fn from_columns(field: FieldSpec, cols: &[Vec<Scalar>]) -> Result<Matrix, LinalgError> {
        let n = cols.len();
        let rows = (0..n)
            .map(|i| {
                cols.iter()
                    .map(|c| {
                        if c.len() != n {
                            Err(LinalgError::Ragged {
                                expected: n,
                                found: c.len(),
                            })
                        } else {
                            Ok(c[i].clone())
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_rows(field, rows)
    }

    fn conformable(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field, other.field));
        }
        if self.n != other.n {
            return Err(LinalgError::OrderMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.conformable(other)?;
        Ok(Matrix {
            field: self.field,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.conformable(other)?;
        Ok(Matrix {
            field: self.field,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.conformable(other)?;
        if self.field.is_rational() {
            return Ok(self.mul_rational(other));
        }
        let n = self.n;
        let mut out = Matrix::zero(self.field, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * n + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product over ℚ with denominators cleared per row of `self` and per
    /// column of `other`, so the inner sums are integer arithmetic.
    fn mul_rational(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let rat = |x: &Scalar| x.as_rational().expect("rational field").clone();
        let cleared = |get: &dyn Fn(usize, usize) -> BigRational| {
            let mut dens = Vec::with_capacity(n);
            let mut ints = Vec::with_capacity(n);
            for a in 0..n {
                let line: Vec<BigRational> = (0..n).map(|b| get(a, b)).collect();
                let den = line.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
                ints.push(
                    line.iter()
                        .map(|x| x.numer() * (&den / x.denom()))
                        .collect::<Vec<BigInt>>(),
                );
                dens.push(den);
            }
            (dens, ints)
        };
        let (row_den, rows) = cleared(&|i, k| rat(self.get(i, k)));
        let (col_den, cols) = cleared(&|j, k| rat(other.get(k, j)));
        Matrix::from_fn(self.field, n, |i, j| {
            let sum = rows[i]
                .iter()
                .zip(&cols[j])
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(BigInt::zero(), |acc, (a, b)| acc + a * b);
            let r = BigRational::new(sum, &row_den[i] * &col_den[j]);
            self.field.from_rational(&r).expect("rational field")
        })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            n: self.n,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.n, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> Scalar {
        (0..self.n).fold(self.field.zero(), |acc, i| acc + self.get(i, i))
    }

    /// tr(self · other) without forming the product.
    pub fn trace_of_product(&self, other: &Matrix) -> Scalar {
        assert_eq!(self.n, other.n, "order mismatch");
        let mut acc = self.field.zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let (x, y) = (self.get(i, j), other.get(j, i));
                if !x.is_zero() && !y.is_zero() {
                    acc = acc + x * y;
                }
            }
        }
        acc
    }

    pub fn pow(&self, k: usize) -> Matrix {
        (0..k).fold(Matrix::identity(self.field, self.n), |acc, _| &acc * self)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.n {
            return Err(LinalgError::OrderMismatch(self.n, v.len()));
        }
        Ok((0..self.n)
            .map(|i| (0..self.n).fold(self.field.zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_tridiagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i.abs_diff(j) <= 1 || self.get(i, j).is_zero()))
    }

    /// Tridiagonal with every sub- and superdiagonal entry nonzero.
    pub fn is_irreducible_tridiagonal(&self) -> bool {
        self.is_tridiagonal()
            && (1..self.n).all(|i| !self.get(i, i - 1).is_zero() && !self.get(i - 1, i).is_zero())
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        let n = self.n;
        let mut rows: Vec<Vec<Scalar>> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| {
                    if i == j {
                        self.field.one()
                    } else {
                        self.field.zero()
                    }
                }));
                r
            })
            .collect();
        let pivots = rref(&mut rows);
        if pivots.len() < n || pivots.iter().enumerate().any(|(r, &c)| r != c) {
            return Err(LinalgError::Singular);
        }
        let rows = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_rows(self.field, rows)
    }

    /// Monic characteristic polynomial det(xI − X), via similarity reduction to
    /// upper Hessenberg form followed by the Hessenberg determinant recurrence.
    pub fn char_poly(&self) -> Poly {
        let n = self.n;
        let h = self.hessenberg();
        let field = self.field;
        let mut p: Vec<Poly> = vec![Poly::one(field)];
        for m in 1..=n {
            let mut pm = Poly::linear_root(&h[m - 1][m - 1]).mul(&p[m - 1]);
            let mut sub_prod = field.one();
            for i in 1..m {
                sub_prod = sub_prod * &h[m - i][m - i - 1];
                if sub_prod.is_zero() {
                    break;
                }
                let coeff = &h[m - 1 - i][m - 1] * &sub_prod;
                if !coeff.is_zero() {
                    pm = pm.sub(&p[m - 1 - i].scale(&coeff));
                }
            }
            p.push(pm);
        }
        p.pop().unwrap()
    }

    fn hessenberg(&self) -> Vec<Vec<Scalar>> {
        let n = self.n;
        let mut h = self.rows();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| !h[i][j].is_zero()) else {
                continue;
            };
            if piv != j + 1 {
                h.swap(piv, j + 1);
                for row in h.iter_mut() {
                    row.swap(piv, j + 1);
                }
            }
            let pivot_inv = h[j + 1][j].inv().expect("pivot is nonzero");
            for k in j + 2..n {
                if h[k][j].is_zero() {
                    continue;
                }
                let m = &h[k][j] * &pivot_inv;
                for c in 0..n {
                    let t = &m * &h[j + 1][c];
                    h[k][c] = &h[k][c] - &t;
                }
                for row in h.iter_mut() {
                    let t = &m * &row[k];
                    row[j + 1] = &row[j + 1] + &t;
                }
            }
        }
        h
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Scalar {
        let n = self.n;
        let mut rows = self.rows();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
                return self.field.zero();
            };
            if piv != c {
                rows.swap(piv, c);
                det = -det;
            }
            det = det * &rows[c][c];
            let inv = rows[c][c].inv().expect("pivot is nonzero");
            for i in c + 1..n {
                if rows[i][c].is_zero() {
                    continue;
                }
                let m = &rows[i][c] * &inv;
                for k in c..n {
                    let t = &m * &rows[c][k];
                    rows[i][k] = &rows[i][k] - &t;
                }
            }
        }
        det
    }

    /// A basis for the null space of `self`, one vector per free column of the
    /// reduced row echelon form.
    pub fn null_space(&self) -> Vec<Vec<Scalar>> {
        let n = self.n;
        let mut rows = self.rows();
        let pivots = rref(&mut rows);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); n];
                v[f] = self.field.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&rows[r][f];
                }
                v
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows())
    }

    /// Entrywise image under the reduction map into `target`.
    pub fn reduce_to(&self, target: &FieldSpec) -> Result<Matrix, FieldError> {
        Ok(Matrix {
            field: *target,
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|x| x.reduce_to(target))
                .collect::<Result<_, _>>()?,
        })
    }
}

/// The commutator [X, Y] = XY − YX.
pub fn commutator(x: &Matrix, y: &Matrix) -> Result<Matrix, LinalgError> {
    x.checked_mul(y)?.checked_sub(&y.checked_mul(x)?)
}

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns, one per nonzero row, in order.
pub fn rref(rows: &mut [Vec<Scalar>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let m = rows[i][c].clone();
            for k in c..ncols {
                let t = &m * &rows[r][k];
                rows[i][k] = &rows[i][k] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a list of equal-length vectors (as rows of a rectangular matrix).
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut rows = rows.to_vec();
    rref(&mut rows).len()
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs)
            .unwrap_or_else(|e| panic!("matrix mul: {e}"))
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs)
            .unwrap_or_else(|e| panic!("matrix add: {e}"))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs)
            .unwrap_or_else(|e| panic!("matrix sub: {e}"))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let w = strs.iter().map(String::len).max().unwrap_or(1);
        for row in strs.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>w$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

/// A univariate polynomial; `coeffs[k]` is the coefficient of x^k, trailing
/// zeros trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: FieldSpec, coeffs: Vec<Scalar>) -> Poly {
        assert!(coeffs.iter().all(|c| c.field() == field));
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn zero(field: FieldSpec) -> Poly {
        Poly {
            field,
            coeffs: vec![],
        }
    }

    pub fn one(field: FieldSpec) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// The polynomial x.
    pub fn x(field: FieldSpec) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// x − r.
    pub fn linear_root(r: &Scalar) -> Poly {
        let field = r.field();
        Poly::new(field, vec![-r, field.one()])
    }

    /// ∏ (x − r) over `roots`.
    pub fn from_roots(field: FieldSpec, roots: &[Scalar]) -> Poly {
        roots
            .iter()
            .fold(Poly::one(field), |acc, r| acc.mul(&Poly::linear_root(r)))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero past the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            self.field,
            (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            self.field,
            (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect(),
        )
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| acc * x + c)
    }

    /// Σ f_k X^k with X⁰ = I, by Horner's rule.
    pub fn eval_matrix(&self, x: &Matrix) -> Matrix {
        let n = x.n();
        self.coeffs
            .iter()
            .rev()
            .fold(Matrix::zero(self.field, n), |acc, c| {
                &(&acc * x) + &Matrix::identity(self.field, n).scale(c)
            })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Outcome of [`is_multiplicity_free`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectrumCheck {
    /// `eigenvectors[i]` spans the eigenspace of the i-th candidate.
    MultiplicityFree { eigenvectors: Vec<Vec<Scalar>> },
    /// The characteristic polynomial is not ∏(x − θ) over the candidates.
    WrongSpectrum,
    /// The spectrum matches but ∏(X − θI) ≠ 0.
    NotDiagonalizable,
}

impl SpectrumCheck {
    pub fn holds(&self) -> bool {
        matches!(self, SpectrumCheck::MultiplicityFree { .. })
    }
}

/// Decides whether `x` is diagonalizable with one-dimensional eigenspaces for
/// exactly the given (pairwise distinct) candidate eigenvalues.
pub fn is_multiplicity_free(
    x: &Matrix,
    candidates: &[Scalar],
) -> Result<SpectrumCheck, LinalgError> {
    let n = x.n();
    if candidates.len() != n {
        return Err(LinalgError::CandidateCount {
            expected: n,
            found: candidates.len(),
        });
    }
    for c in candidates {
        if c.field() != x.field() {
            return Err(LinalgError::FieldMismatch(x.field(), c.field()));
        }
    }
    for i in 0..n {
        if candidates[..i].contains(&candidates[i]) {
            return Err(LinalgError::RepeatedCandidate);
        }
    }
    if x.char_poly() != Poly::from_roots(x.field(), candidates) {
        return Ok(SpectrumCheck::WrongSpectrum);
    }
    let id = Matrix::identity(x.field(), n);
    let shifted: Vec<Matrix> = candidates.iter().map(|t| x - &id.scale(t)).collect();
    let annihilator = shifted.iter().fold(id.clone(), |acc, m| &acc * m);
    if !annihilator.is_zero() {
        return Ok(SpectrumCheck::NotDiagonalizable);
    }
    let eigenvectors = shifted
        .iter()
        .map(|m| {
            let mut basis = m.null_space();
            debug_assert_eq!(basis.len(), 1);
            basis.swap_remove(0)
        })
        .collect();
    Ok(SpectrumCheck::MultiplicityFree { eigenvectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat() -> FieldSpec {
        FieldSpec::rational()
    }

    fn ints(rows: &[&[i64]]) -> Matrix {
        let f = rat();
        Matrix::from_rows(
            f,
            rows.iter()
                .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn commutator_basics() {
        let x = ints(&[&[1, 2], &[3, 4]]);
        assert!(commutator(&x, &x).unwrap().is_zero());
        let e = ints(&[&[0, 1], &[0, 0]]);
        let f = ints(&[&[0, 0], &[1, 0]]);
        let h = ints(&[&[1, 0], &[0, -1]]);
        assert_eq!(commutator(&e, &f).unwrap(), h);
        assert_eq!(x.transpose().transpose(), x);
    }

    #[test]
    fn mismatches_are_errors() {
        let a = ints(&[&[1, 2], &[3, 4]]);
        let b = ints(&[&[1]]);
        assert_eq!(a.checked_mul(&b), Err(LinalgError::OrderMismatch(2, 1)));
        let f7 = FieldSpec::prime(7).unwrap();
        let c = Matrix::identity(f7, 2);
        assert!(matches!(
            a.checked_add(&c),
            Err(LinalgError::FieldMismatch(..))
        ));
        assert!(matches!(
            Matrix::from_rows(
                rat(),
                vec![vec![rat().one(), rat().one()], vec![rat().one()]]
            ),
            Err(LinalgError::Ragged { .. })
        ));
    }

    #[test]
    fn trace_of_product_matches() {
        let x = ints(&[&[1, 2, 0], &[3, -1, 4], &[0, 5, 2]]);
        let y = ints(&[&[2, 0, 1], &[1, 1, 0], &[-3, 2, 7]]);
        assert_eq!(x.trace_of_product(&y), (&x * &y).trace());
    }

    #[test]
    fn inverse_cases() {
        let f = rat();
        let id = Matrix::identity(f, 3);
        assert_eq!(id.inverse().unwrap(), id);
        assert_eq!(Matrix::zero(f, 3).inverse(), Err(LinalgError::Singular));
        let x = ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let xi = x.inverse().unwrap();
        assert_eq!(&x * &xi, id);
        assert_eq!(&xi * &x, id);
        assert_eq!(
            ints(&[&[1, 2], &[2, 4]]).inverse(),
            Err(LinalgError::Singular)
        );
    }

    #[test]
    fn char_poly_examples() {
        let f = rat();
        let d = ints(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]);
        let expect = Poly::new(f, vec![f.zero(), f.from_i64(-4), f.zero(), f.one()]);
        assert_eq!(d.char_poly(), expect);
        let c = ints(&[&[7]]);
        assert_eq!(c.char_poly(), Poly::new(f, vec![f.from_i64(-7), f.one()]));
        // needs a row swap during the Hessenberg reduction
        let x = ints(&[&[1, 2, 3, 4], &[0, 5, 6, 7], &[8, 9, 1, 2], &[3, 4, 5, 6]]);
        assert!(x.char_poly().eval_matrix(&x).is_zero());
        // char poly of the empty-subdiagonal case
        let u = ints(&[&[1, 2, 3], &[0, 4, 5], &[0, 0, 6]]);
        assert_eq!(
            u.char_poly(),
            Poly::from_roots(f, &[f.from_i64(1), f.from_i64(4), f.from_i64(6)])
        );
    }

    #[test]
    fn char_poly_determinant_constant_term() {
        // constant term of det(xI − X) is (−1)^n det X; det of this one is −2
        let x = ints(&[&[0, 1, 0], &[0, 0, 1], &[2, 0, 0]]);
        let p = x.char_poly();
        assert_eq!(p.coeff(0), rat().from_i64(-2));
        assert_eq!(p.coeff(1), rat().zero());
        assert_eq!(p.coeff(2), rat().zero());
        assert_eq!(x.det(), rat().from_i64(2));
        assert_eq!(ints(&[&[0, 1], &[1, 0]]).det(), rat().from_i64(-1));
    }

    #[test]
    fn eval_poly_at_matrix() {
        let f = rat();
        let x = ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(Poly::x(f).eval_matrix(&x), x);
        assert_eq!(Poly::one(f).eval_matrix(&x), Matrix::identity(f, 2));
    }

    #[test]
    fn multiplicity_free_checks() {
        let f = rat();
        let d = ints(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]);
        let cands = [f.from_i64(2), f.from_i64(0), f.from_i64(-2)];
        let r = is_multiplicity_free(&d, &cands).unwrap();
        match r {
            SpectrumCheck::MultiplicityFree { eigenvectors } => {
                assert_eq!(eigenvectors[0], vec![f.one(), f.zero(), f.zero()]);
            }
            other => panic!("{other:?}"),
        }
        let j = ints(&[&[0, 1], &[0, 0]]);
        assert_eq!(
            is_multiplicity_free(&j, &[f.zero(), f.zero()]),
            Err(LinalgError::RepeatedCandidate)
        );
        let j2 = ints(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]]);
        assert_eq!(
            is_multiplicity_free(&j2, &[f.from_i64(1), f.from_i64(3), f.from_i64(2)]).unwrap(),
            SpectrumCheck::WrongSpectrum
        );
        let j3 = ints(&[&[1, 1], &[0, 1]]);
        // spectrum {1,1} cannot be supplied as distinct candidates
        assert_eq!(
            is_multiplicity_free(&j3, &[f.from_i64(1), f.from_i64(2)]).unwrap(),
            SpectrumCheck::WrongSpectrum
        );
    }

    #[test]
    fn null_space_is_deterministic() {
        let f = rat();
        let x = ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = x.null_space();
        assert_eq!(ns.len(), 1);
        assert!(x.mul_vec(&ns[0]).unwrap().iter().all(Scalar::is_zero));
        assert_eq!(ns[0][2], f.one());
    }

    #[test]
    fn rank_of_rectangular_rows() {
        let f = rat();
        let rows = vec![
            vec![f.from_i64(1), f.from_i64(2), f.from_i64(3), f.from_i64(4)],
            vec![f.from_i64(2), f.from_i64(4), f.from_i64(6), f.from_i64(8)],
            vec![f.from_i64(0), f.from_i64(1), f.from_i64(0), f.from_i64(1)],
        ];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn prime_field_linear_algebra() {
        let f = FieldSpec::prime(7).unwrap();
        let x = Matrix::from_rows(
            f,
            vec![
                vec![f.from_i64(3), f.from_i64(5)],
                vec![f.from_i64(1), f.from_i64(2)],
            ],
        )
        .unwrap();
        let xi = x.inverse().unwrap();
        assert_eq!(&x * &xi, Matrix::identity(f, 2));
        assert!(x.char_poly().eval_matrix(&x).is_zero());
    }
}
