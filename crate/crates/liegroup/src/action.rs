//! Action of SE(d) on sampled fields, its derivative at the identity, and
//! the symmetry eigenfunction candidates it induces.

use num_complex::Complex64;

use freezewave_core::{Field, Grid};
use freezewave_discretize::{d1_central, DiffOp2D, Stencil2D};

use crate::algebra::{ad_matrix, SEAlgebraElement};
use crate::group::SEGroupElement;
use crate::LieGroupError;

/// Linear interpolation of component `c` at coordinate `y`, clamped to the
/// grid (constant extension by the nearest boundary value).
fn interp_1d(v: &Field, y: f64, c: usize) -> f64 {
    let g = v.grid.as_1d().expect("1D field");
    let h = g.h();
    let pos = (y - g.x_minus) / h;
    let pos = pos.clamp(0.0, (g.n - 1) as f64);
    let i0 = (pos.floor() as usize).min(g.n - 2);
    let frac = pos - i0 as f64;
    (1.0 - frac) * v.at(i0, c) + frac * v.at(i0 + 1, c)
}

fn interp_2d(v: &Field, y1: f64, y2: f64, c: usize) -> f64 {
    let g = v.grid.as_2d().expect("2D field");
    let h = g.h();
    let n = g.n_per_axis;
    let p1 = ((y1 + g.half_width) / h).clamp(0.0, (n - 1) as f64);
    let p2 = ((y2 + g.half_width) / h).clamp(0.0, (n - 1) as f64);
    let i0 = (p1.floor() as usize).min(n - 2);
    let j0 = (p2.floor() as usize).min(n - 2);
    let (f1, f2) = (p1 - i0 as f64, p2 - j0 as f64);
    let at = |i: usize, j: usize| v.at(j * n + i, c);
    (1.0 - f1) * (1.0 - f2) * at(i0, j0)
        + f1 * (1.0 - f2) * at(i0 + 1, j0)
        + (1.0 - f1) * f2 * at(i0, j0 + 1)
        + f1 * f2 * at(i0 + 1, j0 + 1)
}

/// `[a(g) v](x) = v(Q^T (x - b))` sampled on the grid of `v`.
pub fn group_action(g: &SEGroupElement, v: &Field) -> Result<Field, LieGroupError> {
    if v.grid.dim() != g.d {
        return Err(LieGroupError::DimensionMismatch(format!(
            "SE({}) acting on a {}D field",
            g.d,
            v.grid.dim()
        )));
    }
    let mut out = Field::zeros(v.grid.clone(), v.m);
    match &v.grid {
        Grid::One(grid) => {
            for i in 0..grid.n {
                let y = g.inverse_point(&[grid.node(i)]);
                for c in 0..v.m {
                    *out.at_mut(i, c) = interp_1d(v, y[0], c);
                }
            }
        }
        Grid::Two(grid) => {
            for idx in 0..grid.node_count() {
                let (x1, x2) = grid.node(idx);
                let y = g.inverse_point(&[x1, x2]);
                for c in 0..v.m {
                    *out.at_mut(idx, c) = interp_2d(v, y[0], y[1], c);
                }
            }
        }
    }
    Ok(out)
}

/// Derivative of the group action at the identity applied to `mu`:
/// `-v_x(x) (S x + c)`, assembled from central-difference gradients.
pub fn action_derivative(v: &Field, mu: &SEAlgebraElement) -> Result<Field, LieGroupError> {
    if v.grid.dim() != mu.d {
        return Err(LieGroupError::DimensionMismatch(format!(
            "se({}) acting on a {}D field",
            mu.d,
            v.grid.dim()
        )));
    }
    match &v.grid {
        Grid::One(_) => {
            let dv = d1_central(v).map_err(|e| LieGroupError::Discretize(e.to_string()))?;
            Ok(dv.map(|x| -mu.c[0] * x))
        }
        Grid::Two(grid) => {
            let g1 = DiffOp2D::new(Stencil2D::Grad(0), grid.clone())
                .apply(v)
                .map_err(|e| LieGroupError::Discretize(e.to_string()))?;
            let g2 = DiffOp2D::new(Stencil2D::Grad(1), grid.clone())
                .apply(v)
                .map_err(|e| LieGroupError::Discretize(e.to_string()))?;
            let mut out = Field::zeros(v.grid.clone(), v.m);
            for idx in 0..grid.node_count() {
                let (x1, x2) = grid.node(idx);
                let a = mu.apply_affine(&[x1, x2]);
                for c in 0..v.m {
                    *out.at_mut(idx, c) = -(g1.at(idx, c) * a[0] + g2.at(idx, c) * a[1]);
                }
            }
            Ok(out)
        }
    }
}

/// Candidate eigenfunction of the linearization about a relative equilibrium,
/// built from an eigenpair of the ad map.
#[derive(Debug, Clone)]
pub struct SymmetryEigenpair {
    pub lambda: Complex64,
    pub w_re: Field,
    pub w_im: Field,
    /// Set when the eigenfunction norm is numerically zero (the profile lacks
    /// the regularity or genuinely degenerates, e.g. a constant).
    pub degenerate: bool,
}

impl SymmetryEigenpair {
    pub fn norm(&self) -> f64 {
        let a = freezewave_core::l2_norm(&self.w_re);
        let b = freezewave_core::l2_norm(&self.w_im);
        (a * a + b * b).sqrt()
    }
}

/// For each eigenpair (lambda_j, nu_j) of `nu -> [nu, mu_star]` on the
/// complexified algebra, returns lambda_j with the complex-linear extension
/// of the action derivative applied to nu_j.
pub fn symmetry_eigenpairs(
    v_star: &Field,
    mu_star: &SEAlgebraElement,
) -> Result<Vec<SymmetryEigenpair>, LieGroupError> {
    use ndarray_linalg::Eig;
    let m = ad_matrix(mu_star);
    let (vals, vecs) = m.eig().map_err(|e| LieGroupError::LinAlg(e.to_string()))?;
    let d = mu_star.d;
    let q = vals.len();
    let mut out = Vec::with_capacity(q);
    let scale = v_star.max_abs().max(1e-300);
    for j in 0..q {
        let col: Vec<Complex64> = (0..q).map(|i| vecs[(i, j)]).collect();
        let nu_re = SEAlgebraElement::from_coords(d, &col.iter().map(|z| z.re).collect::<Vec<_>>())?;
        let nu_im = SEAlgebraElement::from_coords(d, &col.iter().map(|z| z.im).collect::<Vec<_>>())?;
        let w_re = action_derivative(v_star, &nu_re)?;
        let w_im = action_derivative(v_star, &nu_im)?;
        let pair = SymmetryEigenpair {
            lambda: vals[j],
            degenerate: false,
            w_re,
            w_im,
        };
        let degenerate = pair.norm() < 1e-10 * scale;
        out.push(SymmetryEigenpair { degenerate, ..pair });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use freezewave_core::{Grid1D, Grid2D};

    #[test]
    fn identity_action_is_identity() {
        let g = Grid1D::new(-1.0, 1.0, 21).unwrap();
        let v = Field::from_fn_1d(g, 1, |x| vec![(3.0 * x).sin()]);
        let out = group_action(&SEGroupElement::identity(1), &v).unwrap();
        for (a, b) in out.values.iter().zip(&v.values) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn grid_aligned_shift_moves_indices() {
        let g = Grid1D::new(0.0, 1.0, 11).unwrap();
        let h = g.h();
        let v = Field::from_fn_1d(g, 1, |x| vec![x * x]);
        let shift = SEGroupElement::translation(vec![3.0 * h]);
        let out = group_action(&shift, &v).unwrap();
        // v(x - 3h): index i reads index i-3, boundary-filled on the left.
        for i in 3..11 {
            assert!((out.at(i, 0) - v.at(i - 3, 0)).abs() < 1e-14);
        }
        for i in 0..3 {
            assert!((out.at(i, 0) - v.at(0, 0)).abs() < 1e-14);
        }
    }

    #[test]
    fn rotation_preserves_radial_field() {
        let g = Grid2D::new(1.0, 201).unwrap();
        let v = Field::from_fn_2d(g, 1, |x1, x2| vec![(-2.0 * (x1 * x1 + x2 * x2)).exp()]);
        let rot = SEGroupElement::rotation_2d(std::f64::consts::FRAC_PI_2);
        let out = group_action(&rot, &v).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in out.values.iter().zip(&v.values) {
            worst = worst.max((a - b).abs());
        }
        assert!(worst < 1e-3, "rotation error {worst}");
    }

    #[test]
    fn action_derivative_zero_for_zero_mu() {
        let g = Grid1D::new(-1.0, 1.0, 31).unwrap();
        let v = Field::from_fn_1d(g, 1, |x| vec![x.cos()]);
        let w = action_derivative(&v, &SEAlgebraElement::zero(1)).unwrap();
        assert!(w.max_abs() < 1e-15);
    }

    #[test]
    fn action_derivative_linear_profile() {
        let g = Grid1D::new(0.0, 1.0, 21).unwrap();
        let v = Field::from_fn_1d(g, 1, |x| vec![x]);
        let mu = SEAlgebraElement::translation(vec![1.0]);
        let w = action_derivative(&v, &mu).unwrap();
        for i in 1..20 {
            assert!((w.at(i, 0) + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rotational_invariance_kills_rotation_derivative() {
        // v = |x|^2 is rotation invariant: v_x . (S x) = 2 x^T S x = 0.
        let g = Grid2D::new(1.0, 41).unwrap();
        let v = Field::from_fn_2d(g.clone(), 1, |x1, x2| vec![x1 * x1 + x2 * x2]);
        let mu = SEAlgebraElement::rotation_2d(1.0, [0.0, 0.0]);
        let w = action_derivative(&v, &mu).unwrap();
        let n = g.n_per_axis;
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                assert!(w.at(j * n + i, 0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn travelling_wave_symmetry_pair_is_neg_derivative() {
        let g = Grid1D::new(-10.0, 10.0, 201).unwrap();
        let v = Field::from_fn_1d(g, 1, |x| vec![x.tanh()]);
        let mu = SEAlgebraElement::translation(vec![0.07]);
        let pairs = symmetry_eigenpairs(&v, &mu).unwrap();
        assert_eq!(pairs.len(), 1);
        assert!(pairs[0].lambda.norm() < 1e-12);
        assert!(!pairs[0].degenerate);
        // w should be parallel to -v_xi (the ad eigenvector is +-1).
        let dv = d1_central(&v).unwrap();
        let num = freezewave_core::l2_inner(&pairs[0].w_re, &dv).unwrap().abs();
        let den = freezewave_core::l2_norm(&pairs[0].w_re) * freezewave_core::l2_norm(&dv);
        assert!((num / den - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotating_wave_lambda_set_is_zero_and_pm_i_mu() {
        let g = Grid2D::new(3.0, 41).unwrap();
        let v = Field::from_fn_2d(g, 1, |x1, x2| {
            vec![x1 * (-(x1 * x1 + x2 * x2)).exp() + 0.3 * x2]
        });
        let rate = 1.027;
        let mu = SEAlgebraElement::rotation_2d(rate, [0.0, 0.0]);
        let pairs = symmetry_eigenpairs(&v, &mu).unwrap();
        let mut lams: Vec<f64> = pairs.iter().map(|p| p.lambda.im).collect();
        lams.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(pairs.iter().all(|p| p.lambda.re.abs() < 1e-12));
        assert!((lams[0] + rate).abs() < 1e-12);
        assert!(lams[1].abs() < 1e-12);
        assert!((lams[2] - rate).abs() < 1e-12);
    }

    #[test]
    fn constant_profile_flags_degenerate() {
        let g = Grid1D::new(-1.0, 1.0, 11).unwrap();
        let v = Field::from_fn_1d(g, 1, |_| vec![1.0]);
        let mu = SEAlgebraElement::translation(vec![1.0]);
        let pairs = symmetry_eigenpairs(&v, &mu).unwrap();
        assert!(pairs[0].degenerate);
    }
}
