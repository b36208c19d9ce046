use super::{Axiom, Dgla, DglaMorphism, GradedBasis, ValidationReport};
use crate::linalg::{axpy, zero_vector, Matrix};
use crate::scalar::{is_odd, koszul_odd, Field, Rational};

/// A right DG-module `M` over a DGLA `L`, written `m * x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleStructure<F: Field = Rational> {
    algebra: Dgla<F>,
    space: GradedBasis,
    differential: Matrix<F>,
    // action[m * dim L + x] = v_m * v_x
    action: Vec<Vec<F>>,
}

impl<F: Field> ModuleStructure<F> {
    pub fn from_parts(
        algebra: Dgla<F>,
        space: GradedBasis,
        differential: Matrix<F>,
        action: Vec<Vec<F>>,
    ) -> Self {
        let (nl, nm) = (algebra.dim(), space.len());
        assert_eq!((differential.nrows(), differential.ncols()), (nm, nm));
        assert_eq!(action.len(), nl * nm);
        ModuleStructure {
            algebra,
            space,
            differential,
            action,
        }
    }

    /// `M` is an `L`-module through `m * x = [m, f(x)]`.
    pub fn adjoint(f: &DglaMorphism<F>) -> Self {
        let (l, m) = (f.source(), f.target());
        let mut action = Vec::with_capacity(l.dim() * m.dim());
        for a in 0..m.dim() {
            let ea = m.generator(a);
            for x in 0..l.dim() {
                action.push(m.bracket(&ea, &f.image_of(x)));
            }
        }
        ModuleStructure {
            algebra: l.clone(),
            space: m.basis().clone(),
            differential: m.differential_matrix().clone(),
            action,
        }
    }

    /// `L` acting on itself.
    pub fn adjoint_self(l: &Dgla<F>) -> Self {
        Self::adjoint(&DglaMorphism::identity(l))
    }

    pub fn algebra(&self) -> &Dgla<F> {
        &self.algebra
    }

    pub fn space(&self) -> &GradedBasis {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.len()
    }

    pub fn differential_matrix(&self) -> &Matrix<F> {
        &self.differential
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.is_zero()
    }

    pub fn differential(&self, m: &[F]) -> Vec<F> {
        self.differential.mul_vec(m)
    }

    pub fn act_basis(&self, m: usize, x: usize) -> &[F] {
        &self.action[m * self.algebra.dim() + x]
    }

    /// `m * v_x` for a vector `m`.
    pub fn act_on_generator(&self, m: &[F], x: usize) -> Vec<F> {
        let mut out = zero_vector(self.dim());
        for (a, c) in m.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, self.act_basis(a, x));
            }
        }
        out
    }

    pub fn act(&self, m: &[F], x: &[F]) -> Vec<F> {
        let mut out = zero_vector(self.dim());
        for (j, c) in x.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.act_on_generator(m, j));
            }
        }
        out
    }

    /// Whether every `m * x` vanishes.
    pub fn is_trivial_action(&self) -> bool {
        self.action.iter().all(|v| v.iter().all(|c| c.is_zero()))
    }

    pub fn validate(&self) -> ValidationReport {
        let (l, sb) = (&self.algebra, &self.space);
        let lb = l.basis();
        let mut report = ValidationReport::default();
        for a in 0..self.dim() {
            let da = self.differential.column(a);
            if da.iter().enumerate().any(|(k, c)| !c.is_zero() && sb.degree(k) != sb.degree(a) + 1) {
                report.push(Axiom::DifferentialDegree, &[sb.name(a)], "module differential degree".into());
            }
            if self.differential(&da).iter().any(|c| !c.is_zero()) {
                report.push(Axiom::ModuleDifferentialSquare, &[sb.name(a)], "d(d(m)) != 0".into());
            }
        }
        for a in 0..self.dim() {
            let ea = crate::linalg::unit_vector::<F>(self.dim(), a);
            for x in 0..l.dim() {
                let v = self.act_basis(a, x);
                let deg = sb.degree(a) + lb.degree(x);
                if v.iter().enumerate().any(|(k, c)| !c.is_zero() && sb.degree(k) != deg) {
                    report.push(Axiom::ActionDegree, &[sb.name(a), lb.name(x)], "m*x has wrong degree".into());
                }
                // d(m*x) = (dm)*x + (-1)^{|m|} m*(dx)
                let lhs = self.differential(v);
                let mut rhs = self.act_on_generator(&self.differential.column(a), x);
                let tail = self.act(&ea, &l.d_basis(x));
                axpy(&mut rhs, &F::sign(is_odd(sb.degree(a))), &tail);
                if lhs != rhs {
                    report.push(
                        Axiom::ActionDifferential,
                        &[sb.name(a), lb.name(x)],
                        "d(m*x) != (dm)*x + (-1)^{|m|} m*dx".into(),
                    );
                }
                // m*[x,y] = (m*x)*y - (-1)^{|x||y|} (m*y)*x
                for y in 0..l.dim() {
                    let lhs = self.act(&ea, l.bracket_basis(x, y));
                    let mut rhs = self.act_on_generator(v, y);
                    let tail = self.act_on_generator(self.act_basis(a, y), x);
                    axpy(&mut rhs, &-F::sign(koszul_odd(lb.degree(x), lb.degree(y))), &tail);
                    if lhs != rhs {
                        report.push(
                            Axiom::ActionBracket,
                            &[sb.name(a), lb.name(x), lb.name(y)],
                            "m*[x,y] != (m*x)*y - (-1)^{|x||y|}(m*y)*x".into(),
                        );
                    }
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{algebra_l, algebra_m};
    use crate::linalg::is_zero_vector;

    #[test]
    fn adjoint_of_identity_on_m() {
        let m = algebra_m();
        let ad = ModuleStructure::adjoint_self(&m);
        assert!(ad.validate().is_valid(), "{}", ad.validate());
        let minus_h2 = {
            let mut v = zero_vector::<Rational>(5);
            v[4] = -Rational::from_int(1);
            v
        };
        assert_eq!(ad.act_basis(0, 0), minus_h2.as_slice());
    }

    #[test]
    fn central_h2_acts_trivially() {
        let m = algebra_m();
        let (_, inc) = algebra_l();
        for module in [ModuleStructure::adjoint_self(&m), ModuleStructure::adjoint(&inc)] {
            assert!(module.validate().is_valid());
            for x in 0..module.algebra().dim() {
                assert!(is_zero_vector(module.act_basis(4, x)));
            }
        }
    }

    #[test]
    fn abelian_target_gives_zero_action() {
        let m = algebra_m();
        let a = Dgla::<Rational>::abelian(m.basis().clone());
        let module = ModuleStructure::adjoint(&DglaMorphism::identity(&a));
        assert!(module.is_trivial_action());
    }
}
