//! SE(d) group elements (Q, b), composition, inverse, and the exact
//! exponential for d in {1, 2}.

use crate::algebra::SEAlgebraElement;
use crate::LieGroupError;

const ORTHO_TOL: f64 = 1e-12;

/// Group element of SE(d) in the representation [[Q, b], [0, 1]].
#[derive(Debug, Clone, PartialEq)]
pub struct SEGroupElement {
    pub d: usize,
    /// d x d rotation, row-major.
    pub q: Vec<f64>,
    pub b: Vec<f64>,
}

impl SEGroupElement {
    pub fn new(d: usize, q: Vec<f64>, b: Vec<f64>) -> Result<Self, LieGroupError> {
        if q.len() != d * d || b.len() != d {
            return Err(LieGroupError::DimensionMismatch(format!(
                "SE({d}) needs a {d}x{d} rotation and a {d}-vector"
            )));
        }
        let g = SEGroupElement { d, q, b };
        g.check_orthogonality()?;
        Ok(g)
    }

    fn check_orthogonality(&self) -> Result<(), LieGroupError> {
        let d = self.d;
        for i in 0..d {
            for j in 0..d {
                let mut dot = 0.0;
                for k in 0..d {
                    dot += self.q[k * d + i] * self.q[k * d + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > ORTHO_TOL {
                    return Err(LieGroupError::NotOrthogonal(format!(
                        "Q^T Q deviates from identity by {:.2e} at ({i},{j})",
                        (dot - target).abs()
                    )));
                }
            }
        }
        let det = match d {
            1 => self.q[0],
            2 => self.q[0] * self.q[3] - self.q[1] * self.q[2],
            3 => {
                self.q[0] * (self.q[4] * self.q[8] - self.q[5] * self.q[7])
                    - self.q[1] * (self.q[3] * self.q[8] - self.q[5] * self.q[6])
                    + self.q[2] * (self.q[3] * self.q[7] - self.q[4] * self.q[6])
            }
            _ => return Err(LieGroupError::UnsupportedDimension(d)),
        };
        if (det - 1.0).abs() > ORTHO_TOL {
            return Err(LieGroupError::NotOrthogonal(format!(
                "det Q = {det} is not 1"
            )));
        }
        Ok(())
    }

    pub fn identity(d: usize) -> Self {
        let mut q = vec![0.0; d * d];
        for i in 0..d {
            q[i * d + i] = 1.0;
        }
        SEGroupElement {
            d,
            q,
            b: vec![0.0; d],
        }
    }

    pub fn translation(b: Vec<f64>) -> Self {
        let d = b.len();
        let mut g = Self::identity(d);
        g.b = b;
        g
    }

    /// SE(2) rotation by `theta` about the origin.
    pub fn rotation_2d(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        SEGroupElement {
            d: 2,
            q: vec![c, -s, s, c],
            b: vec![0.0; 2],
        }
    }

    /// Q^T (x - b), the argument transform of the action on functions.
    pub fn inverse_point(&self, x: &[f64]) -> Vec<f64> {
        let d = self.d;
        debug_assert_eq!(x.len(), d);
        let mut y = vec![0.0; d];
        for i in 0..d {
            for k in 0..d {
                y[i] += self.q[k * d + i] * (x[k] - self.b[k]);
            }
        }
        y
    }

    /// Largest deviation of Q^T Q from the identity; used to monitor drift
    /// along reconstructed paths.
    pub fn orthogonality_defect(&self) -> f64 {
        let d = self.d;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut dot = 0.0;
                for k in 0..d {
                    dot += self.q[k * d + i] * self.q[k * d + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Block product (Q1 Q2, Q1 b2 + b1).
pub fn compose(
    g1: &SEGroupElement,
    g2: &SEGroupElement,
) -> Result<SEGroupElement, LieGroupError> {
    if g1.d != g2.d {
        return Err(LieGroupError::DimensionMismatch(format!(
            "compose SE({}) with SE({})",
            g1.d, g2.d
        )));
    }
    let d = g1.d;
    let mut q = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0.0;
            for k in 0..d {
                acc += g1.q[i * d + k] * g2.q[k * d + j];
            }
            q[i * d + j] = acc;
        }
    }
    let mut b = g1.b.clone();
    for i in 0..d {
        for k in 0..d {
            b[i] += g1.q[i * d + k] * g2.b[k];
        }
    }
    Ok(SEGroupElement { d, q, b })
}

/// (Q^T, -Q^T b).
pub fn inverse(g: &SEGroupElement) -> SEGroupElement {
    let d = g.d;
    let mut q = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            q[i * d + j] = g.q[j * d + i];
        }
    }
    let mut b = vec![0.0; d];
    for i in 0..d {
        for k in 0..d {
            b[i] -= q[i * d + k] * g.b[k];
        }
    }
    SEGroupElement { d, q, b }
}

/// exp(t mu) on SE(d), closed form for d in {1, 2}.
pub fn exp_se(mu: &SEAlgebraElement, t: f64) -> Result<SEGroupElement, LieGroupError> {
    match mu.d {
        1 => Ok(SEGroupElement {
            d: 1,
            q: vec![1.0],
            b: vec![t * mu.c[0]],
        }),
        2 => {
            let theta = mu.s_entry(1, 0);
            let phi = t * theta;
            let (sin_phi, cos_phi) = phi.sin_cos();
            let q = vec![cos_phi, -sin_phi, sin_phi, cos_phi];
            // b = V(phi) * (t c) with V the se(2) dressing matrix
            // [[sin(phi)/phi, -(1-cos(phi))/phi], [(1-cos(phi))/phi, sin(phi)/phi]].
            let (a, bcoef) = if phi.abs() < 1e-4 {
                // series to O(phi^6): sin(phi)/phi, (1-cos(phi))/phi
                let p2 = phi * phi;
                (
                    1.0 - p2 / 6.0 + p2 * p2 / 120.0,
                    phi / 2.0 - phi * p2 / 24.0 + phi * p2 * p2 / 720.0,
                )
            } else {
                (sin_phi / phi, (1.0 - cos_phi) / phi)
            };
            let (tc1, tc2) = (t * mu.c[0], t * mu.c[1]);
            let b = vec![a * tc1 - bcoef * tc2, bcoef * tc1 + a * tc2];
            Ok(SEGroupElement { d: 2, q, b })
        }
        d => Err(LieGroupError::UnsupportedDimension(d)),
    }
}
