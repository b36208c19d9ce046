//! Finite groups acting on a DGLA by automorphisms.

use serde::Serialize;
use thiserror::Error;

use crate::formality::{module_splitting_check, SplittingReport};
use crate::graded::{subalgebra, Dgla, DglaMorphism};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{Field, Rational};

/// Groups larger than this are rejected during closure checks.
pub const DEFAULT_ORDER_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group generated exceeds {0} elements")]
    TooLarge(usize),
    #[error("element {0} is not invertible")]
    Singular(usize),
}

/// An explicit list of automorphisms `g: M → M`, identity included.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAction<F: Field = Rational> {
    algebra: Dgla<F>,
    elements: Vec<Matrix<F>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub order: usize,
    pub problems: Vec<String>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

impl<F: Field> FiniteAction<F> {
    pub fn new(algebra: Dgla<F>, elements: Vec<Matrix<F>>) -> Self {
        FiniteAction { algebra, elements }
    }

    /// The group generated by `generators`, enumerated by closing under
    /// multiplication. Fails beyond `cap` elements.
    pub fn generated_by(algebra: Dgla<F>, generators: Vec<Matrix<F>>, cap: usize) -> Result<Self, GroupError> {
        let n = algebra.dim();
        for (i, g) in generators.iter().enumerate() {
            if g.inverse().is_none() {
                return Err(GroupError::Singular(i));
            }
        }
        let mut elements = vec![Matrix::identity(n)];
        let mut frontier = 0;
        while frontier < elements.len() {
            let x = elements[frontier].clone();
            frontier += 1;
            for g in &generators {
                let y = g.mul(&x);
                if !elements.contains(&y) {
                    if elements.len() == cap {
                        return Err(GroupError::TooLarge(cap));
                    }
                    elements.push(y);
                }
            }
        }
        Ok(FiniteAction { algebra, elements })
    }

    pub fn algebra(&self) -> &Dgla<F> {
        &self.algebra
    }

    pub fn elements(&self) -> &[Matrix<F>] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Automorphism axioms for every element, then closure under products
    /// and inverses.
    pub fn validate(&self) -> ActionReport {
        self.validate_with_cap(DEFAULT_ORDER_CAP)
    }

    pub fn validate_with_cap(&self, cap: usize) -> ActionReport {
        let n = self.algebra.dim();
        let mut problems = Vec::new();
        if self.elements.len() > cap {
            problems.push(format!("{} elements exceed the cap of {cap}", self.elements.len()));
        }
        for (k, g) in self.elements.iter().enumerate() {
            if (g.nrows(), g.ncols()) != (n, n) {
                problems.push(format!("element {k} has shape {}x{}", g.nrows(), g.ncols()));
                return ActionReport {
                    order: self.order(),
                    problems,
                };
            }
            let f = DglaMorphism::new(self.algebra.clone(), self.algebra.clone(), g.clone());
            for v in f.validate().violations {
                problems.push(format!("element {k}: {:?} at {}", v.axiom, v.witness.join(", ")));
            }
            match g.inverse() {
                None => problems.push(format!("element {k} is not invertible")),
                Some(inv) => {
                    if !self.elements.contains(&inv) {
                        problems.push(format!("inverse of element {k} is missing"));
                    }
                }
            }
        }
        if !self.elements.contains(&Matrix::identity(n)) {
            problems.push("identity is missing".into());
        }
        'outer: for (a, x) in self.elements.iter().enumerate() {
            for (b, y) in self.elements.iter().enumerate() {
                if !self.elements.contains(&x.mul(y)) {
                    problems.push(format!("product of elements {a} and {b} is missing"));
                    break 'outer;
                }
            }
        }
        ActionReport {
            order: self.order(),
            problems,
        }
    }

    /// `p = (1/|G|) Σ g`.
    pub fn reynolds(&self) -> Matrix<F> {
        let n = self.algebra.dim();
        let mut sum = Matrix::zeros(n, n);
        for g in &self.elements {
            sum = sum.add(g);
        }
        sum.scale(&(F::one() / F::from_int(self.order() as i64)))
    }

    /// `M^G` spanned by the RREF basis of `⋂ ker(g - 1)`, computed degree by
    /// degree, with its inclusion.
    pub fn invariants(&self) -> (Dgla<F>, DglaMorphism<F>) {
        let m = &self.algebra;
        let n = m.dim();
        let b = m.basis();
        let id = Matrix::identity(n);
        let mut spans = Vec::new();
        for k in b.occurring_degrees() {
            let idx = b.indices_of_degree(k);
            let mut rows = Vec::new();
            for g in &self.elements {
                let diff = g.sub(&id);
                for r in 0..n {
                    rows.push(idx.iter().map(|&j| diff.get(r, j).clone()).collect::<Vec<F>>());
                }
            }
            let stacked = Matrix::from_rows(idx.len(), rows);
            let kernel: Vec<Vec<F>> = stacked
                .kernel()
                .basis()
                .iter()
                .map(|c| {
                    let mut v = crate::linalg::zero_vector(n);
                    for (t, &j) in idx.iter().enumerate() {
                        v[j] = c[t].clone();
                    }
                    v
                })
                .collect();
            for v in Subspace::span(n, kernel).basis() {
                let pivot = v.iter().position(|c| !c.is_zero()).expect("nonzero");
                spans.push((b.name(pivot).to_string(), v.clone()));
            }
        }
        subalgebra(m, &spans).expect("invariants form a subalgebra")
    }

    /// Checks that the Reynolds operator is a module retraction onto `M^G`.
    pub fn retraction_check(&self) -> SplittingReport {
        let (l, inc) = self.invariants();
        let span = Subspace::from_basis(self.algebra.dim(), inc.matrix().columns()).expect("independent");
        let p = self.reynolds();
        let cols: Vec<Vec<F>> = p
            .columns()
            .iter()
            .map(|c| span.coordinates(c).expect("averages are invariant"))
            .collect();
        let p_l = Matrix::from_columns(l.dim(), &cols);
        module_splitting_check(&inc, &p_l)
    }
}
