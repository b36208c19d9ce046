use std::collections::BTreeMap;

use super::{Dgla, DglaMorphism, Generator, GradedBasis};
use crate::linalg::{zero_vector, Matrix, Subquotient, Subspace};
use crate::scalar::{Field, Rational};

/// `H(L) = ker d / im d` degree by degree, with representatives and the
/// induced graded Lie bracket.
#[derive(Debug, Clone)]
pub struct CohomologyPresentation<F: Field = Rational> {
    algebra: Dgla<F>,
    per_degree: BTreeMap<i64, Subquotient<F>>,
    // first H-basis index of each degree
    offsets: BTreeMap<i64, usize>,
    reps: Vec<Vec<F>>,
    h: Dgla<F>,
}

impl<F: Field> CohomologyPresentation<F> {
    /// Computes the presentation. Representatives are the earliest-pivot
    /// cocycles completing a basis of the coboundaries.
    pub fn new(l: &Dgla<F>) -> Self {
        let n = l.dim();
        let b = l.basis();
        let mut per_degree = BTreeMap::new();
        let mut offsets = BTreeMap::new();
        let mut reps = Vec::new();
        let mut names = Vec::new();
        for k in b.occurring_degrees() {
            let idx = b.indices_of_degree(k);
            let cocycles: Vec<Vec<F>> = {
                let cols: Vec<Vec<F>> = idx.iter().map(|&i| l.d_basis(i)).collect();
                let dk = Matrix::from_columns(n, &cols);
                dk.kernel()
                    .basis()
                    .iter()
                    .map(|c| {
                        let mut v = zero_vector(n);
                        for (t, &i) in idx.iter().enumerate() {
                            v[i] = c[t].clone();
                        }
                        v
                    })
                    .collect()
            };
            let z = Subspace::span(n, cocycles);
            let boundaries = Subspace::span(
                n,
                b.indices_of_degree(k - 1).iter().map(|&i| l.d_basis(i)).collect(),
            );
            let sq = Subquotient::new(z, boundaries).expect("d squares to zero");
            offsets.insert(k, reps.len());
            for r in sq.representatives() {
                let pivot = r.iter().position(|c| !c.is_zero()).expect("nonzero rep");
                names.push(Generator {
                    name: b.name(pivot).to_string(),
                    degree: k,
                });
                reps.push(r.clone());
            }
            per_degree.insert(k, sq);
        }
        let mut pres = CohomologyPresentation {
            algebra: l.clone(),
            per_degree,
            offsets,
            reps,
            h: Dgla::zero(),
        };
        let hb = GradedBasis::new(names).expect("distinct pivots");
        let dim = pres.reps.len();
        let mut bracket = Vec::with_capacity(dim * dim);
        for x in &pres.reps {
            for y in &pres.reps {
                let v = l.bracket(x, y);
                bracket.push(pres.project(&v).expect("bracket of cocycles is a cocycle"));
            }
        }
        pres.h = Dgla::from_parts(hb, Matrix::zeros(dim, dim), bracket);
        debug_assert!(pres.bracket_well_defined());
        pres
    }

    /// Bracket of every coboundary basis vector with every representative
    /// is a coboundary.
    pub fn bracket_well_defined(&self) -> bool {
        self.per_degree.values().all(|sq| {
            sq.boundaries().basis().iter().all(|bd| {
                self.reps
                    .iter()
                    .all(|r| self.is_zero_class(&self.algebra.bracket(bd, r)))
            })
        })
    }

    pub fn algebra(&self) -> &Dgla<F> {
        &self.algebra
    }

    /// `H(L)` as a DGLA with zero differential.
    pub fn as_dgla(&self) -> &Dgla<F> {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Nonzero dimensions by degree.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.per_degree
            .iter()
            .filter(|(_, sq)| sq.dim() > 0)
            .map(|(&k, sq)| (k, sq.dim()))
            .collect()
    }

    pub fn dim_in_degree(&self, k: i64) -> usize {
        self.per_degree.get(&k).map_or(0, |sq| sq.dim())
    }

    pub fn subquotient(&self, k: i64) -> Option<&Subquotient<F>> {
        self.per_degree.get(&k)
    }

    pub fn representative(&self, i: usize) -> &[F] {
        &self.reps[i]
    }

    pub fn representatives(&self) -> &[Vec<F>] {
        &self.reps
    }

    /// Columns are the representatives, in `L` coordinates.
    pub fn representatives_matrix(&self) -> Matrix<F> {
        Matrix::from_columns(self.algebra.dim(), &self.reps)
    }

    /// H-basis indices of degree `k`.
    pub fn indices_of_degree(&self, k: i64) -> std::ops::Range<usize> {
        match self.offsets.get(&k) {
            Some(&o) => o..o + self.dim_in_degree(k),
            None => 0..0,
        }
    }

    /// `dim H × dim L` matrix of `x ↦ [π(x)]`, where `π` projects each
    /// degree onto the span of the representatives along the coboundaries
    /// and the complement of the cocycles spanned by the earliest standard
    /// basis vectors.
    pub fn class_projection(&self) -> Matrix<F> {
        let n = self.algebra.dim();
        let b = self.algebra.basis();
        let mut out = Matrix::zeros(self.dim(), n);
        for (&k, sq) in &self.per_degree {
            let mut all: Vec<Vec<F>> = sq.boundaries().basis().to_vec();
            all.extend(sq.representatives().iter().cloned());
            let mut span = Subspace::span(n, all.clone());
            for i in b.indices_of_degree(k) {
                let e = crate::linalg::unit_vector(n, i);
                if !span.contains(&e) {
                    all.push(e.clone());
                    span = span.sum(&Subspace::span(n, vec![e]));
                }
            }
            let full = Subspace::from_basis(n, all).expect("independent by construction");
            let (nb, o) = (sq.boundaries().dim(), self.offsets[&k]);
            for i in b.indices_of_degree(k) {
                let c = full
                    .coordinates(&crate::linalg::unit_vector(n, i))
                    .expect("degree spanned");
                for t in 0..sq.dim() {
                    out.set(o + t, i, c[nb + t].clone());
                }
            }
        }
        out
    }

    /// Class of a cocycle in H-basis coordinates; `None` if not a cocycle.
    pub fn project(&self, v: &[F]) -> Option<Vec<F>> {
        let b = self.algebra.basis();
        let mut out = zero_vector(self.dim());
        for (&k, sq) in &self.per_degree {
            let mut part = zero_vector(v.len());
            let mut any = false;
            for i in b.indices_of_degree(k) {
                if !v[i].is_zero() {
                    part[i] = v[i].clone();
                    any = true;
                }
            }
            if !any {
                continue;
            }
            let c = sq.project(&part)?;
            let o = self.offsets[&k];
            for (t, x) in c.into_iter().enumerate() {
                out[o + t] = x;
            }
        }
        Some(out)
    }

    /// Whether `v` is a coboundary.
    pub fn is_zero_class(&self, v: &[F]) -> bool {
        matches!(self.project(v), Some(c) if c.iter().all(|x| x.is_zero()))
    }
}

/// The graded Lie morphism `H(f): H(L) → H(M)`.
#[derive(Debug, Clone)]
pub struct CohomologyMorphism<F: Field = Rational> {
    pub source: CohomologyPresentation<F>,
    pub target: CohomologyPresentation<F>,
    matrix: Matrix<F>,
}

impl<F: Field> CohomologyMorphism<F> {
    pub fn new(f: &DglaMorphism<F>) -> Self {
        Self::between(
            CohomologyPresentation::new(f.source()),
            CohomologyPresentation::new(f.target()),
            f,
        )
    }

    /// Uses already computed presentations of source and target.
    pub fn between(
        source: CohomologyPresentation<F>,
        target: CohomologyPresentation<F>,
        f: &DglaMorphism<F>,
    ) -> Self {
        let cols: Vec<Vec<F>> = source
            .representatives()
            .iter()
            .map(|r| {
                target
                    .project(&f.apply(r))
                    .expect("chain maps send cocycles to cocycles")
            })
            .collect();
        let matrix = Matrix::from_columns(target.dim(), &cols);
        CohomologyMorphism {
            source,
            target,
            matrix,
        }
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn as_dgla_morphism(&self) -> DglaMorphism<F> {
        DglaMorphism::new(
            self.source.as_dgla().clone(),
            self.target.as_dgla().clone(),
            self.matrix.clone(),
        )
    }

    fn block(&self, k: i64) -> Matrix<F> {
        let rows = self.target.indices_of_degree(k);
        let cols = self.source.indices_of_degree(k);
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (r, i) in rows.clone().enumerate() {
            for (c, j) in cols.clone().enumerate() {
                m.set(r, c, self.matrix.get(i, j).clone());
            }
        }
        m
    }

    fn degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self
            .source
            .dims()
            .keys()
            .chain(self.target.dims().keys())
            .copied()
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn is_injective_in_degree(&self, k: i64) -> bool {
        self.block(k).rank() == self.source.dim_in_degree(k)
    }

    pub fn is_surjective_in_degree(&self, k: i64) -> bool {
        self.block(k).rank() == self.target.dim_in_degree(k)
    }

    pub fn is_injective(&self) -> bool {
        self.degrees().into_iter().all(|k| self.is_injective_in_degree(k))
    }

    pub fn is_surjective(&self) -> bool {
        self.degrees().into_iter().all(|k| self.is_surjective_in_degree(k))
    }

    /// Whether `f` is a quasi-isomorphism.
    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::fixtures::{acyclic_cone, algebra_l, algebra_m};
    use crate::graded::direct_sum;

    #[test]
    fn cohomology_of_m() {
        let m = algebra_m();
        let h = CohomologyPresentation::new(&m);
        assert_eq!(h.dims(), BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(h.representative(0), m.generator(0).as_slice());
        assert_eq!(h.representative(1), m.generator(1).as_slice());
        assert_eq!(h.representative(2), m.generator(4).as_slice());
        assert!(h.is_zero_class(&m.generator(3)));
        assert!(h.bracket_well_defined());
        assert!(h.as_dgla().validate().is_valid());
        let pi = h.class_projection();
        // e3 is not a cocycle and h1 is a coboundary
        assert!(pi.column(2).iter().all(|c| c.is_zero()));
        assert!(pi.column(3).iter().all(|c| c.is_zero()));
        assert_eq!(pi.column(4), vec![Rational::from_int(0), Rational::from_int(0), Rational::from_int(1)]);
    }

    #[test]
    fn abelian_cohomology_is_itself() {
        let a = Dgla::<Rational>::abelian(GradedBasis::from_pairs(&[("a", 0), ("b", 1), ("c", 1)]).unwrap());
        let h = CohomologyPresentation::new(&a);
        assert_eq!(h.as_dgla(), &a);
    }

    #[test]
    fn cohomology_of_l_and_inclusion() {
        let (l, inc) = algebra_l();
        let h = CohomologyPresentation::new(&l);
        assert_eq!(h.dims(), BTreeMap::from([(1, 1), (2, 1)]));
        assert!(h.as_dgla().is_abelian());
        let hf = CohomologyMorphism::new(&inc);
        assert!(hf.is_injective());
        assert!(!hf.is_surjective());
        assert!(hf.as_dgla_morphism().validate().is_valid());
    }

    #[test]
    fn identity_and_zero_maps() {
        let m = algebra_m();
        let id = CohomologyMorphism::new(&DglaMorphism::identity(&m));
        assert_eq!(id.matrix(), &Matrix::identity(3));
        let z = Dgla::zero();
        let zf = CohomologyMorphism::new(&DglaMorphism::zero(&z, &m));
        assert_eq!(zf.matrix().ncols(), 0);
    }

    #[test]
    fn cone_does_not_change_cohomology() {
        let m = algebra_m();
        let s = direct_sum(&m, &acyclic_cone(1));
        let h = CohomologyPresentation::new(&s.algebra);
        assert_eq!(h.dims(), CohomologyPresentation::new(&m).dims());
        assert!(CohomologyMorphism::new(&s.left).is_isomorphism());
    }
}
