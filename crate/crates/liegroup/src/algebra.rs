//! The Lie algebra se(d): skew part stored as the strict lower triangle,
//! translation part as a vector. Bracket, ad-matrix and its spectrum.

use ndarray::Array2;
use ndarray_linalg::EigVals;
use num_complex::Complex64;

use crate::LieGroupError;

/// Element (S, c) of se(d) with `S^T = -S` held exactly: only the strict
/// lower triangle of S is stored (row-by-row: (1,0), (2,0), (2,1), ...).
#[derive(Debug, Clone, PartialEq)]
pub struct SEAlgebraElement {
    pub d: usize,
    s_lower: Vec<f64>,
    pub c: Vec<f64>,
}

pub(crate) fn lower_len(d: usize) -> usize {
    d * (d - 1) / 2
}

/// Index of (i, j), i > j, in the strict-lower-triangle ordering.
fn lower_index(i: usize, j: usize) -> usize {
    debug_assert!(i > j);
    i * (i - 1) / 2 + j
}

impl SEAlgebraElement {
    pub fn new(d: usize, s_lower: Vec<f64>, c: Vec<f64>) -> Result<Self, LieGroupError> {
        if d == 0 || d > 3 {
            return Err(LieGroupError::UnsupportedDimension(d));
        }
        if s_lower.len() != lower_len(d) || c.len() != d {
            return Err(LieGroupError::DimensionMismatch(format!(
                "se({d}) needs {} skew entries and {d} translation entries",
                lower_len(d)
            )));
        }
        Ok(SEAlgebraElement { d, s_lower, c })
    }

    pub fn zero(d: usize) -> Self {
        SEAlgebraElement {
            d,
            s_lower: vec![0.0; lower_len(d)],
            c: vec![0.0; d],
        }
    }

    pub fn translation(c: Vec<f64>) -> Self {
        let d = c.len();
        SEAlgebraElement {
            d,
            s_lower: vec![0.0; lower_len(d)],
            c,
        }
    }

    /// se(2) element with S = [[0, -theta], [theta, 0]] (theta = S_21).
    pub fn rotation_2d(theta: f64, c: [f64; 2]) -> Self {
        SEAlgebraElement {
            d: 2,
            s_lower: vec![theta],
            c: c.to_vec(),
        }
    }

    /// Entry S[i][j] of the skew matrix.
    pub fn s_entry(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Equal => 0.0,
            Ordering::Greater => self.s_lower[lower_index(i, j)],
            Ordering::Less => -self.s_lower[lower_index(j, i)],
        }
    }

    pub fn s_lower(&self) -> &[f64] {
        &self.s_lower
    }

    /// Dense d x d skew matrix, row-major.
    pub fn s_matrix(&self) -> Vec<f64> {
        let d = self.d;
        let mut s = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                s[i * d + j] = self.s_entry(i, j);
            }
        }
        s
    }

    /// (d+1) x (d+1) matrix representation [[S, c], [0, 0]], row-major.
    pub fn embed(&self) -> Vec<f64> {
        let d = self.d;
        let n = d + 1;
        let mut m = vec![0.0; n * n];
        for i in 0..d {
            for j in 0..d {
                m[i * n + j] = self.s_entry(i, j);
            }
            m[i * n + d] = self.c[i];
        }
        m
    }

    /// S x + c at the point x.
    pub fn apply_affine(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d;
        debug_assert_eq!(x.len(), d);
        let mut out = self.c.clone();
        for i in 0..d {
            for j in 0..d {
                out[i] += self.s_entry(i, j) * x[j];
            }
        }
        out
    }

    pub fn scale(&self, a: f64) -> Self {
        SEAlgebraElement {
            d: self.d,
            s_lower: self.s_lower.iter().map(|s| a * s).collect(),
            c: self.c.iter().map(|c| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.d, other.d);
        SEAlgebraElement {
            d: self.d,
            s_lower: self
                .s_lower
                .iter()
                .zip(&other.s_lower)
                .map(|(a, b)| a + b)
                .collect(),
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
        }
    }

    /// Coordinates in the canonical basis: strict lower triangle then c.
    pub fn coords(&self) -> Vec<f64> {
        let mut v = self.s_lower.clone();
        v.extend_from_slice(&self.c);
        v
    }

    pub fn from_coords(d: usize, coords: &[f64]) -> Result<Self, LieGroupError> {
        let q = lower_len(d);
        if coords.len() != q + d {
            return Err(LieGroupError::DimensionMismatch(format!(
                "se({d}) has dimension {}",
                q + d
            )));
        }
        SEAlgebraElement::new(d, coords[..q].to_vec(), coords[q..].to_vec())
    }

    pub fn norm(&self) -> f64 {
        self.coords().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Commutator [mu, nu] of the (d+1)x(d+1) matrix representations, returned
/// as an algebra element: ([S_mu, S_nu], S_mu c_nu - S_nu c_mu).
pub fn bracket(
    mu: &SEAlgebraElement,
    nu: &SEAlgebraElement,
) -> Result<SEAlgebraElement, LieGroupError> {
    if mu.d != nu.d {
        return Err(LieGroupError::DimensionMismatch(format!(
            "bracket of se({}) with se({})",
            mu.d, nu.d
        )));
    }
    let d = mu.d;
    let sm = mu.s_matrix();
    let sn = nu.s_matrix();
    let mut comm = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0.0;
            for k in 0..d {
                acc += sm[i * d + k] * sn[k * d + j] - sn[i * d + k] * sm[k * d + j];
            }
            comm[i * d + j] = acc;
        }
    }
    let mut s_lower = vec![0.0; lower_len(d)];
    for i in 0..d {
        for j in 0..i {
            s_lower[lower_index(i, j)] = comm[i * d + j];
        }
    }
    let mut c = vec![0.0; d];
    for i in 0..d {
        for k in 0..d {
            c[i] += mu.s_entry(i, k) * nu.c[k] - nu.s_entry(i, k) * mu.c[k];
        }
    }
    SEAlgebraElement::new(d, s_lower, c)
}

/// Matrix of the linear map `nu -> [nu, mu_star]` on se(d) in the canonical
/// basis.
pub fn ad_matrix(mu_star: &SEAlgebraElement) -> Array2<f64> {
    let d = mu_star.d;
    let q = lower_len(d) + d;
    let mut m = Array2::zeros((q, q));
    for beta in 0..q {
        let mut coords = vec![0.0; q];
        coords[beta] = 1.0;
        let basis = SEAlgebraElement::from_coords(d, &coords).expect("valid basis coords");
        let img = bracket(&basis, mu_star).expect("same dimension");
        for (alpha, val) in img.coords().into_iter().enumerate() {
            m[(alpha, beta)] = val;
        }
    }
    m
}

/// Eigenvalues of `nu -> [nu, mu_star]` by a dense eigensolve of the
/// assembled ad-matrix.
pub fn ad_spectrum(mu_star: &SEAlgebraElement) -> Result<Vec<Complex64>, LieGroupError> {
    let m = ad_matrix(mu_star);
    let vals = m
        .eigvals()
        .map_err(|e| LieGroupError::LinAlg(e.to_string()))?;
    Ok(vals.to_vec())
}

/// Eigenvalues of the dense skew matrix S_star.
pub fn skew_eigenvalues(mu_star: &SEAlgebraElement) -> Result<Vec<Complex64>, LieGroupError> {
    let d = mu_star.d;
    let s = mu_star.s_matrix();
    let mut arr = Array2::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            arr[(i, j)] = s[i * d + j];
        }
    }
    let vals = arr
        .eigvals()
        .map_err(|e| LieGroupError::LinAlg(e.to_string()))?;
    Ok(vals.to_vec())
}

/// Closed-form spectrum of the ad map for SE(d) generators: the eigenvalues
/// of S_star together with all pairwise sums mu_j + mu_k, j < k. Returned as
/// a multiset of size dim se(d).
pub fn ad_spectrum_formula(mu_star: &SEAlgebraElement) -> Result<Vec<Complex64>, LieGroupError> {
    let evs = skew_eigenvalues(mu_star)?;
    let mut out = evs.clone();
    for j in 0..evs.len() {
        for k in (j + 1)..evs.len() {
            out.push(evs[j] + evs[k]);
        }
    }
    Ok(out)
}

/// Greedy matching of two complex multisets: every element of `a` must pair
/// with a distinct element of `b` within `tol`.
pub fn complex_multisets_match(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for za in a {
        let mut best: Option<(usize, f64)> = None;
        for (j, zb) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let dist = (za - zb).norm();
            if best.map_or(true, |(_, d)| dist < d) {
                best = Some((j, dist));
            }
        }
        match best {
            Some((j, d)) if d <= tol => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// Spectrum of the (d+1)x(d+1) embedding of mu_star (sigma(S) plus {0}).
pub fn embedded_eigenvalues(mu_star: &SEAlgebraElement) -> Result<Vec<Complex64>, LieGroupError> {
    let d = mu_star.d;
    let e = mu_star.embed();
    let n = d + 1;
    let mut arr = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            arr[(i, j)] = e[i * n + j];
        }
    }
    let vals = arr
        .eigvals()
        .map_err(|e| LieGroupError::LinAlg(e.to_string()))?;
    Ok(vals.to_vec())
}
