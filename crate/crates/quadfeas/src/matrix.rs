//! Hermitian matrices stored by their upper triangle.
//!
//! A matrix is represented by its `n(n+1)/2` upper-triangular entries in
//! row-major order; the lower triangle is the conjugate of the stored data
//! *by construction*, so `A = A*` holds exactly and diagonal entries carry
//! an exactly zero imaginary part.

use crate::error::{Error, Result};
use crate::vector::ComplexVector;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    /// Upper triangle, row-major: row i holds columns i..n.
    upper: Vec<C64>,
}

/// Number of stored entries for dimension `n`.
pub fn upper_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl HermitianMatrix {
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j < self.dim);
        i * self.dim - i * (i + 1) / 2 + j
    }

    /// Build from upper-triangular entries (row-major). Diagonal entries
    /// must have an exactly zero imaginary part; all entries must be finite.
    pub fn from_upper(n: usize, upper: Vec<C64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be >= 1".into()));
        }
        if upper.len() != upper_len(n) {
            return Err(Error::DimensionMismatch { expected: upper_len(n), got: upper.len() });
        }
        let m = Self { dim: n, upper };
        for (k, e) in m.upper.iter().enumerate() {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::NonFiniteEntry(k));
            }
        }
        for i in 0..n {
            let d = m.upper[m.idx(i, i)];
            if d.im != 0.0 {
                return Err(Error::NonRealDiagonal(i, d.im));
            }
        }
        Ok(m)
    }

    /// Build from full rows, validating exact Hermitian symmetry.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be >= 1".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: r.len() });
            }
            for (j, e) in r.iter().enumerate() {
                if rows[j][i] != e.conj() {
                    return Err(Error::MalformedDocument(format!(
                        "entry ({j},{i}) is not the conjugate of entry ({i},{j})"
                    )));
                }
            }
        }
        let mut upper = Vec::with_capacity(upper_len(n));
        for i in 0..n {
            for j in i..n {
                upper.push(rows[i][j]);
            }
        }
        Self::from_upper(n, upper)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1);
        Self { dim: n, upper: vec![C64::new(0.0, 0.0); upper_len(n)] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            let k = m.idx(i, i);
            m.upper[k] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn upper_entries(&self) -> &[C64] {
        &self.upper
    }

    /// Entry (i, j); the lower triangle is served as the conjugate of the
    /// stored upper triangle.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        if i <= j {
            self.upper[self.idx(i, j)]
        } else {
            self.upper[self.idx(j, i)].conj()
        }
    }

    /// The rank-one matrix `a·a*`.
    pub fn rank_one(a: &ComplexVector) -> Self {
        let n = a.dim();
        let e = a.entries();
        let mut upper = Vec::with_capacity(upper_len(n));
        for i in 0..n {
            upper.push(C64::new(e[i].norm_sqr(), 0.0));
            for j in (i + 1)..n {
                upper.push(e[i] * e[j].conj());
            }
        }
        Self { dim: n, upper }
    }

    /// `x·x* − y·y*`, the Hermitian difference of rank-one outer products.
    pub fn outer_difference(x: &ComplexVector, y: &ComplexVector) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch { expected: x.dim(), got: y.dim() });
        }
        let n = x.dim();
        let (xe, ye) = (x.entries(), y.entries());
        let mut upper = Vec::with_capacity(upper_len(n));
        for i in 0..n {
            upper.push(C64::new(xe[i].norm_sqr() - ye[i].norm_sqr(), 0.0));
            for j in (i + 1)..n {
                upper.push(xe[i] * xe[j].conj() - ye[i] * ye[j].conj());
            }
        }
        Ok(Self { dim: n, upper })
    }

    /// Symmetric outer product `u·v* + v·u*`.
    pub fn symmetric_outer(u: &ComplexVector, v: &ComplexVector) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::DimensionMismatch { expected: u.dim(), got: v.dim() });
        }
        let n = u.dim();
        let (ue, ve) = (u.entries(), v.entries());
        let mut upper = Vec::with_capacity(upper_len(n));
        for i in 0..n {
            upper.push(C64::new(2.0 * (ue[i] * ve[i].conj()).re, 0.0));
            for j in (i + 1)..n {
                upper.push(ue[i] * ve[j].conj() + ve[i] * ue[j].conj());
            }
        }
        Ok(Self { dim: n, upper })
    }

    /// Frobenius inner product `⟨A, M⟩ = Σ_{ij} conj(a_ij)·m_ij`.
    ///
    /// For Hermitian arguments the sum is real: diagonal products are real
    /// and the (i,j)/(j,i) pairs contribute conjugate values, so the
    /// imaginary parts cancel exactly and the pair sum is accumulated as
    /// `2·Re(conj(a_ij)·m_ij)`.
    pub fn frobenius_inner(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut acc = 0.0;
        let mut k = 0;
        for i in 0..self.dim {
            acc += self.upper[k].re * other.upper[k].re;
            k += 1;
            for _ in (i + 1)..self.dim {
                let a = self.upper[k];
                let m = other.upper[k];
                // Re(conj(a)·m)
                acc += 2.0 * (a.re * m.re + a.im * m.im);
                k += 1;
            }
        }
        Ok(acc)
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.frobenius_inner(self).expect("same dimension")
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sqr().sqrt()
    }

    /// Matrix–vector product `A·x`.
    pub fn matvec(&self, x: &ComplexVector) -> ComplexVector {
        debug_assert_eq!(self.dim, x.dim());
        let xe = x.entries();
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        let mut k = 0;
        for i in 0..self.dim {
            y[i] += self.upper[k] * xe[i];
            k += 1;
            for j in (i + 1)..self.dim {
                let a = self.upper[k];
                y[i] += a * xe[j];
                y[j] += a.conj() * xe[i];
                k += 1;
            }
        }
        ComplexVector::from_entries(y)
    }

    /// The real quadratic form `x*·A·x`.
    pub fn quad_form(&self, x: &ComplexVector) -> f64 {
        debug_assert_eq!(self.dim, x.dim());
        let xe = x.entries();
        let mut acc = 0.0;
        let mut k = 0;
        for i in 0..self.dim {
            acc += self.upper[k].re * xe[i].norm_sqr();
            k += 1;
            for j in (i + 1)..self.dim {
                let z = xe[i].conj() * self.upper[k] * xe[j];
                acc += 2.0 * z.re;
                k += 1;
            }
        }
        acc
    }

    /// The complex bilinear-sesquilinear value `y*·A·x` (equals
    /// `⟨A, x·y*⟩` in the Frobenius pairing).
    pub fn sandwich(&self, y: &ComplexVector, x: &ComplexVector) -> C64 {
        debug_assert_eq!(self.dim, x.dim());
        debug_assert_eq!(self.dim, y.dim());
        y.entries()
            .iter()
            .zip(self.matvec(x).entries())
            .map(|(yi, axi)| yi.conj() * axi)
            .sum()
    }

    /// Dense copy as a nalgebra matrix (diagnostics and eigenvalue work).
    pub fn to_dense(&self) -> nalgebra::DMatrix<C64> {
        nalgebra::DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }
}
