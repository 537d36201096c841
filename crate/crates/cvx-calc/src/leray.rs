use crate::{inv_laplace, CalcError};
use cvx_fields::VectorField;

/// Leray projection onto divergence-free fields: subtract the gradient part
/// of the Helmholtz decomposition. Constant (zero-mode) parts pass through.
pub fn leray_project(f: &VectorField) -> VectorField {
    let div = f.divergence();
    let potential = inv_laplace(&div);
    let grad = VectorField::new(
        (0..f.grid().dim()).map(|i| potential.partial(i)).collect(),
    )
    .unwrap();
    f.sub(&grad)
}

/// Vector potential of a 3-d field: z = (-Laplace)^{-1} curl v, so that
/// curl z recovers the mean-free part of v whenever div v = 0.
pub fn biot_savart(v: &VectorField) -> Result<VectorField, CalcError> {
    if v.grid().dim() != 3 {
        return Err(CalcError::NeedsDim {
            needs: 3,
            got: v.grid().dim(),
        });
    }
    let w = v.curl();
    Ok(w.map_comps(|c| inv_laplace(c).scale(-1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cvx_fields::{ScalarField, TorusGrid};

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn gradient_fields_project_to_zero() {
        let g = TorusGrid::new(2, 16).unwrap();
        let phi = ScalarField::from_fn(g, |x| (2.0 * PI * x[0]).sin());
        let grad = VectorField::new(vec![phi.partial(0), phi.partial(1)]).unwrap();
        assert!(leray_project(&grad).c0() < 1e-12);
    }

    #[test]
    fn divergence_free_fields_pass_through() {
        let g = TorusGrid::new(2, 16).unwrap();
        let f = VectorField::from_fns(g, |x, i| match i {
            0 => (2.0 * PI * x[1]).sin(),
            _ => (2.0 * PI * x[0]).cos(),
        });
        assert!(f.divergence().c0() < 1e-12);
        assert!(leray_project(&f).sub(&f).c0() < 1e-12);
    }

    #[test]
    fn biot_savart_single_mode() {
        // v = sin(2 pi x2) e1 is div-free; its potential is
        // -cos(2 pi x2)/(2 pi) e3.
        let g = TorusGrid::new(3, 16).unwrap();
        let v = VectorField::from_fns(g, |x, i| {
            if i == 0 {
                (2.0 * PI * x[1]).sin()
            } else {
                0.0
            }
        });
        let z = biot_savart(&v).unwrap();
        let want = ScalarField::from_fn(g, |x| -(2.0 * PI * x[1]).cos() / (2.0 * PI));
        assert!(z.comp(2).sub(&want).c0() < 1e-12);
        assert!(z.comp(0).c0() < 1e-13);
        assert!(z.comp(1).c0() < 1e-13);
        assert!(z.curl().sub(&v).c0() < 1e-11);
        assert!(z.divergence().c0() < 1e-12);
    }

    #[test]
    fn biot_savart_needs_three_dims() {
        let g = TorusGrid::new(2, 8).unwrap();
        let v = VectorField::zeros(g);
        assert!(matches!(
            biot_savart(&v),
            Err(CalcError::NeedsDim { needs: 3, got: 2 })
        ));
    }
}
