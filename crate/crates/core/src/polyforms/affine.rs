use crate::error::{FesError, Result};
use crate::linalg::Mat;
use crate::polyforms::form::PolyForm;
use crate::polyforms::monomial::{FormIndex, MultiIndex};
use crate::polyforms::polynomial::{Polynomial, PowerCache};
use crate::scalar::Scalar;

/// Affine map `t ↦ A t + b` from `ℝ^m` to `ℝ^n`, with `A` of shape `n × m`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap<S> {
    matrix: Mat<S>,
    offset: Vec<S>,
}

impl<S: Scalar> AffineMap<S> {
    pub fn new(matrix: Mat<S>, offset: Vec<S>) -> Result<Self> {
        if offset.len() != matrix.rows() {
            return Err(FesError::DimensionMismatch { expected: matrix.rows(), found: offset.len() });
        }
        Ok(Self { matrix, offset })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: Mat::identity(n), offset: vec![S::zero(); n] }
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.matrix
    }

    pub fn offset(&self) -> &[S] {
        &self.offset
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, t: &[S]) -> Vec<S> {
        assert_eq!(t.len(), self.source_dim());
        (0..self.target_dim())
            .map(|i| {
                let mut acc = self.offset[i].clone();
                for (j, tj) in t.iter().enumerate() {
                    acc += &self.matrix[(i, j)].times(tj);
                }
                acc
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let matrix = self.matrix.mul(&inner.matrix)?;
        let offset = self.apply(&inner.offset);
        Ok(Self { matrix, offset })
    }

    /// The coordinate substitutes `x_i = Σ_j A_ij t_j + b_i`.
    fn substitutes(&self) -> Vec<Polynomial<S>> {
        let m = self.source_dim();
        (0..self.target_dim())
            .map(|i| {
                let mut p = Polynomial::constant(m, self.offset[i].clone());
                for j in 0..m {
                    p.add_term(MultiIndex::unit(m, j), self.matrix[(i, j)].clone());
                }
                p
            })
            .collect()
    }

    /// Pullback of a form on `ℝ^n` to `ℝ^m`: coefficients are composed with the map and
    /// `dx_J ↦ Σ_L det A[J, L] dt_L`.
    pub fn pullback(&self, u: &PolyForm<S>) -> Result<PolyForm<S>> {
        if u.nvars() != self.target_dim() {
            return Err(FesError::DimensionMismatch { expected: self.target_dim(), found: u.nvars() });
        }
        let m = self.source_dim();
        let k = u.degree();
        let mut out = PolyForm::zero(m, k);
        if k > m {
            return Ok(out);
        }
        let mut cache = PowerCache::with_target(self.substitutes(), m);
        let targets = FormIndex::all(m, k);
        for (j, p) in u.terms() {
            let rows: Vec<usize> = j.elements().collect();
            let pulled = p.compose_cached(&mut cache);
            for l in &targets {
                let cols: Vec<usize> = l.elements().collect();
                let minor = self.minor(&rows, &cols);
                if !minor.is_zero() {
                    out.add_term(*l, pulled.scaled(&minor));
                }
            }
        }
        Ok(out)
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> S {
        let k = rows.len();
        let mut data = Vec::with_capacity(k * k);
        for &r in rows {
            for &c in cols {
                data.push(self.matrix[(r, c)].clone());
            }
        }
        Mat::from_vec(k, k, data)
            .and_then(|m| m.determinant())
            .expect("square minor")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type F = PolyForm<Rational>;
    type P = Polynomial<Rational>;

    fn edge(point: &[i64], direction: &[i64]) -> AffineMap<Rational> {
        let n = point.len();
        let data = direction.iter().map(|&v| Rational::int(v)).collect();
        AffineMap::new(
            Mat::from_vec(n, 1, data).unwrap(),
            point.iter().map(|&v| Rational::int(v)).collect(),
        )
        .unwrap()
    }

    fn x_dy() -> F {
        F::basic(2, FormIndex::from_elements(&[1])).mul_poly(&P::var(2, 0))
    }

    #[test]
    fn pullback_to_bottom_edge_kills_dy() {
        assert!(edge(&[0, 0], &[1, 0]).pullback(&x_dy()).unwrap().is_zero());
    }

    #[test]
    fn pullback_to_right_edge() {
        let pulled = edge(&[1, 0], &[0, 1]).pullback(&x_dy()).unwrap();
        assert_eq!(pulled, F::basic(1, FormIndex::from_elements(&[0])));
    }

    #[test]
    fn pullback_commutes_with_d() {
        let u = F::function(P::var(2, 0).mul(&P::var(2, 0)).mul(&P::var(2, 1)));
        let f = AffineMap::new(
            Mat::from_int_rows(&[&[2, 1], &[-1, 3]]),
            vec![Rational::int(1), Rational::ratio(1, 2)],
        )
        .unwrap();
        let lhs = f.pullback(&u.exterior_derivative()).unwrap();
        let rhs = f.pullback(&u).unwrap().exterior_derivative();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_is_contravariant() {
        let g = AffineMap::new(Mat::from_int_rows(&[&[0, 1], &[1, 1]]), vec![Rational::int(0); 2]).unwrap();
        let f = edge(&[1, 0], &[1, 2]);
        let u = x_dy();
        let composite = g.compose(&f).unwrap().pullback(&u).unwrap();
        let stepwise = f.pullback(&g.pullback(&u).unwrap()).unwrap();
        assert_eq!(composite, stepwise);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let u = F::function(P::var(3, 0));
        assert!(edge(&[0, 0], &[1, 0]).pullback(&u).is_err());
    }
}
