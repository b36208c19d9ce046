use super::{Axiom, Dgla, ValidationReport};
use crate::linalg::Matrix;
use crate::scalar::{Field, Rational};

/// A degree-0 linear map between DGLAs; column `j` is the image of source
/// generator `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DglaMorphism<F: Field = Rational> {
    source: Dgla<F>,
    target: Dgla<F>,
    matrix: Matrix<F>,
}

impl<F: Field> DglaMorphism<F> {
    pub fn new(source: Dgla<F>, target: Dgla<F>, matrix: Matrix<F>) -> Self {
        assert_eq!(
            (matrix.nrows(), matrix.ncols()),
            (target.dim(), source.dim()),
            "morphism matrix shape"
        );
        DglaMorphism {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(l: &Dgla<F>) -> Self {
        Self::new(l.clone(), l.clone(), Matrix::identity(l.dim()))
    }

    pub fn zero(source: &Dgla<F>, target: &Dgla<F>) -> Self {
        Self::new(
            source.clone(),
            target.clone(),
            Matrix::zeros(target.dim(), source.dim()),
        )
    }

    pub fn source(&self) -> &Dgla<F> {
        &self.source
    }

    pub fn target(&self) -> &Dgla<F> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn apply(&self, x: &[F]) -> Vec<F> {
        self.matrix.mul_vec(x)
    }

    pub fn image_of(&self, j: usize) -> Vec<F> {
        self.matrix.column(j)
    }

    /// `g ∘ self`. Panics unless `g.source` is `self.target`.
    pub fn then(&self, g: &DglaMorphism<F>) -> DglaMorphism<F> {
        assert_eq!(g.source.dim(), self.target.dim(), "composable morphisms");
        DglaMorphism::new(self.source.clone(), g.target.clone(), g.matrix.mul(&self.matrix))
    }

    pub fn validate(&self) -> ValidationReport {
        let (s, t) = (&self.source, &self.target);
        let (sb, tb) = (s.basis(), t.basis());
        let mut report = ValidationReport::default();
        for j in 0..s.dim() {
            let fj = self.image_of(j);
            if let Some((k, _)) = fj
                .iter()
                .enumerate()
                .find(|(k, c)| !c.is_zero() && tb.degree(*k) != sb.degree(j))
            {
                report.push(
                    Axiom::MorphismDegree,
                    &[sb.name(j)],
                    format!("f({}) involves {} of degree {}", sb.name(j), tb.name(k), tb.degree(k)),
                );
            }
            if t.differential(&fj) != self.apply(&s.d_basis(j)) {
                report.push(Axiom::CommutesWithDifferential, &[sb.name(j)], "d f(x) != f(d x)".into());
            }
        }
        for i in 0..s.dim() {
            for j in i..s.dim() {
                let lhs = self.apply(s.bracket_basis(i, j));
                let rhs = t.bracket(&self.image_of(i), &self.image_of(j));
                if lhs != rhs {
                    report.push(
                        Axiom::PreservesBracket,
                        &[sb.name(i), sb.name(j)],
                        "f[x,y] != [f x, f y]".into(),
                    );
                }
            }
        }
        report
    }

    /// The block of the matrix from source degree `k` to target degree `k`.
    pub fn restricted_to_degree(&self, k: i64) -> Matrix<F> {
        let cols = self.source.basis().indices_of_degree(k);
        let rows = self.target.basis().indices_of_degree(k);
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (c, &j) in cols.iter().enumerate() {
            for (r, &i) in rows.iter().enumerate() {
                m.set(r, c, self.matrix.get(i, j).clone());
            }
        }
        m
    }
}
