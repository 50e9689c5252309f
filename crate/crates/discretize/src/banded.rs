//! Banded matrices in LAPACK-style storage with LU factorization and
//! partial pivoting. Generic over real and complex scalars.

use num_complex::Complex64;

use crate::DiscretizeError;

/// Scalar admitted in banded solves.
pub trait BandScalar:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
    + PartialEq
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Pivot magnitude.
    fn modulus(&self) -> f64;
}

impl BandScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(&self) -> f64 {
        self.abs()
    }
}

impl BandScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

/// Banded `n x n` matrix with `kl` sub- and `ku` superdiagonals.
///
/// Storage is column-major with leading dimension `2*kl + ku + 1`; the extra
/// `kl` rows absorb fill-in from row interchanges during factorization.
#[derive(Debug, Clone)]
pub struct BandedMatrix<T> {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    ldab: usize,
    ab: Vec<T>,
}

impl<T: BandScalar> BandedMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        BandedMatrix {
            n,
            kl,
            ku,
            ldab,
            ab: vec![T::zero(); ldab * n],
        }
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(j + self.kl >= i && i + self.ku >= j, "entry outside band");
        j * self.ldab + (self.kl + self.ku + i - j)
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && i + self.ku >= j
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let s = self.slot(i, j);
        self.ab[s] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        let s = self.slot(i, j);
        self.ab[s] = self.ab[s] + v;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        if self.in_band(i, j) {
            self.ab[self.slot(i, j)]
        } else {
            T::zero()
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![T::zero(); self.n];
        for j in 0..self.n {
            let i_lo = j.saturating_sub(self.ku);
            let i_hi = (j + self.kl).min(self.n - 1);
            let xj = x[j];
            for i in i_lo..=i_hi {
                y[i] = y[i] + self.ab[self.slot(i, j)] * xj;
            }
        }
        y
    }

    /// `A^T x` without forming the transpose.
    pub fn matvec_transpose(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![T::zero(); self.n];
        for j in 0..self.n {
            let i_lo = j.saturating_sub(self.ku);
            let i_hi = (j + self.kl).min(self.n - 1);
            let mut acc = T::zero();
            for i in i_lo..=i_hi {
                acc = acc + self.ab[self.slot(i, j)] * x[i];
            }
            y[j] = acc;
        }
        y
    }

    /// LU factorization with partial pivoting, consuming the matrix.
    pub fn factor(mut self) -> Result<BandedLu<T>, DiscretizeError> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let ldab = self.ldab;
        let mut ipiv = vec![0usize; n];
        let mut max_pivot = 0.0f64;
        let mut min_pivot = f64::INFINITY;

        // Effective upper bandwidth after pivoting is kl + ku.
        let kv = kl + ku;

        for k in 0..n {
            // Pivot search in column k among rows k..=min(k+kl, n-1).
            let i_hi = (k + kl).min(n - 1);
            let mut piv_row = k;
            let mut piv_mag = self.ab[self.slot(k, k)].modulus();
            for i in (k + 1)..=i_hi {
                let mag = self.ab[self.slot(i, k)].modulus();
                if mag > piv_mag {
                    piv_mag = mag;
                    piv_row = i;
                }
            }
            ipiv[k] = piv_row;
            if piv_mag == 0.0 {
                return Err(DiscretizeError::Singular { column: k });
            }
            max_pivot = max_pivot.max(piv_mag);
            min_pivot = min_pivot.min(piv_mag);

            let j_hi = (k + kv).min(n - 1);
            // Swap rows k and piv_row across the active columns.
            if piv_row != k {
                for j in k..=j_hi {
                    let a = j * ldab + (kl + ku + k - j);
                    let b = j * ldab + (kl + ku + piv_row - j);
                    self.ab.swap(a, b);
                }
            }
            // Eliminate below the pivot.
            let pivot = self.ab[self.slot(k, k)];
            for i in (k + 1)..=i_hi {
                let s = self.slot(i, k);
                let mult = self.ab[s] / pivot;
                self.ab[s] = mult;
                if mult != T::zero() {
                    for j in (k + 1)..=j_hi {
                        let a_kj = self.ab[j * ldab + (kl + ku + k - j)];
                        if a_kj != T::zero() {
                            let t = j * ldab + (kl + ku + i - j);
                            self.ab[t] = self.ab[t] - mult * a_kj;
                        }
                    }
                }
            }
        }

        if min_pivot <= 1e-14 * max_pivot {
            return Err(DiscretizeError::NearSingular {
                ratio: min_pivot / max_pivot,
            });
        }

        Ok(BandedLu {
            n,
            kl,
            ku,
            ldab,
            ab: self.ab,
            ipiv,
        })
    }
}

/// Factored banded matrix; solves by forward/back substitution.
#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<T>,
    ipiv: Vec<usize>,
}

impl<T: BandScalar> BandedLu<T> {
    pub fn solve_in_place(&self, b: &mut [T]) {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let kv = kl + ku;
        // Forward: apply P and L.
        for k in 0..n {
            let p = self.ipiv[k];
            if p != k {
                b.swap(p, k);
            }
            let i_hi = (k + kl).min(n - 1);
            let bk = b[k];
            if bk != T::zero() {
                for i in (k + 1)..=i_hi {
                    let l = self.ab[k * self.ldab + (kl + ku + i - k)];
                    b[i] = b[i] - l * bk;
                }
            }
        }
        // Back substitution with U (bandwidth kv).
        for k in (0..n).rev() {
            let j_hi = (k + kv).min(n - 1);
            let mut acc = b[k];
            for j in (k + 1)..=j_hi {
                acc = acc - self.ab[j * self.ldab + (kl + ku + k - j)] * b[j];
            }
            b[k] = acc / self.ab[k * self.ldab + (kl + ku)];
        }
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Factor-and-solve convenience for a single right-hand side.
pub fn banded_solve<T: BandScalar>(
    matrix: BandedMatrix<T>,
    rhs: &[T],
) -> Result<Vec<T>, DiscretizeError> {
    let lu = matrix.factor()?;
    Ok(lu.solve(rhs))
}
