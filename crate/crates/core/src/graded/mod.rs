//! Finite-dimensional graded vector spaces and DG-Lie algebras.
//!
//! A [`Dgla`] is stored through structure constants on a named, graded basis:
//! the differential as a matrix whose `i`-th column is `d(v_i)`, and the
//! bracket as one coordinate vector per ordered pair of basis elements.
//!
//! Sign conventions used everywhere in the crate:
//!
//! * graded antisymmetry `[x,y] = -(-1)^{|x||y|} [y,x]`;
//! * Jacobi in Leibniz form `[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]`;
//! * `d[x,y] = [dx,y] + (-1)^{|x|} [x,dy]`.

mod cohomology;
mod module;
mod morphism;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{axpy, is_zero_vector, unit_vector, zero_vector, Matrix, Subspace};
use crate::scalar::{display_coefficient, koszul_odd, Field, Rational};

pub use cohomology::{CohomologyMorphism, CohomologyPresentation};
pub use module::ModuleStructure;
pub use morphism::DglaMorphism;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("vector has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("inconsistent brackets: [{0},{1}] and [{1},{0}] violate graded antisymmetry")]
    InconsistentBracket(String, String),
    #[error("element {0} is not homogeneous")]
    NotHomogeneous(String),
    #[error("spanning elements are linearly dependent (element {0})")]
    Dependent(String),
    #[error("span is not closed under {operation}: {witness}")]
    NotClosed { operation: String, witness: String },
    #[error("no generator named `{0}`")]
    UnknownGenerator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// An ordered list of named homogeneous generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl GradedBasis {
    pub fn new(gens: Vec<Generator>) -> Result<Self, StructureError> {
        let mut index = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(StructureError::DuplicateName(g.name.clone()));
            }
        }
        Ok(GradedBasis { gens, index })
    }

    /// Convenience constructor from `(name, degree)` pairs.
    pub fn from_pairs(pairs: &[(&str, i64)]) -> Result<Self, StructureError> {
        Self::new(
            pairs
                .iter()
                .map(|&(n, d)| Generator {
                    name: n.to_string(),
                    degree: d,
                })
                .collect(),
        )
    }

    pub fn empty() -> Self {
        GradedBasis {
            gens: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.gens[i].degree
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.gens.iter().map(|g| g.degree).collect()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn indices_of_degree(&self, k: i64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) == k).collect()
    }

    /// Degrees that occur, ascending.
    pub fn occurring_degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.degrees();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Support of `v` sits in a single degree. `None` for the zero vector.
    pub fn homogeneous_degree<F: Field>(&self, v: &[F]) -> Result<Option<i64>, Inhomogeneous> {
        let mut deg = None;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(self.degree(i)),
                Some(k) if k != self.degree(i) => return Err(Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// `2*e1 - h2`-style rendering of a coordinate vector.
    pub fn format_vector<F: Field>(&self, v: &[F]) -> String {
        format_lincomb(v.iter().enumerate().map(|(i, c)| (self.name(i), c)))
    }
}

/// Renders `Σ c_i name_i` with canonical signs; `"0"` when empty.
pub fn format_lincomb<'a, F: Field + 'a>(terms: impl IntoIterator<Item = (&'a str, &'a F)>) -> String {
    let mut out = String::new();
    for (name, c) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = {
            let (n, _) = c.to_bigints();
            n.sign() == num_bigint::Sign::Minus
        };
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&display_coefficient(&abs));
            out.push('*');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// One violated axiom together with the basis elements witnessing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    DifferentialDegree,
    BracketDegree,
    DifferentialSquare,
    Antisymmetry,
    Jacobi,
    Leibniz,
    MorphismDegree,
    CommutesWithDifferential,
    PreservesBracket,
    ActionDegree,
    ActionDifferential,
    ActionBracket,
    ModuleDifferentialSquare,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, axiom: Axiom, witness: &[&str], detail: String) {
        self.violations.push(Violation {
            axiom,
            witness: witness.iter().map(|s| s.to_string()).collect(),
            detail,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{:?} at ({}): {}", v.axiom, v.witness.join(", "), v.detail)?;
        }
        Ok(())
    }
}

/// A vector with support in more than one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("vector is not homogeneous")]
pub struct Inhomogeneous;

/// A finite-dimensional differential graded Lie algebra.
#[derive(Clone, PartialEq)]
pub struct Dgla<F: Field = Rational> {
    basis: GradedBasis,
    // column i = d(v_i)
    d: Matrix<F>,
    // bracket[i * n + j] = [v_i, v_j]
    bracket: Vec<Vec<F>>,
}

impl<F: Field> fmt::Debug for Dgla<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dgla(")?;
        for (i, g) in self.basis.generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", g.name, g.degree)?;
        }
        write!(f, ")")
    }
}

impl<F: Field> Dgla<F> {
    /// Raw constructor; no axioms are checked (see [`Dgla::validate`]).
    pub fn from_parts(basis: GradedBasis, d: Matrix<F>, bracket: Vec<Vec<F>>) -> Self {
        let n = basis.len();
        assert_eq!((d.nrows(), d.ncols()), (n, n), "differential shape");
        assert_eq!(bracket.len(), n * n, "bracket table size");
        Dgla { basis, d, bracket }
    }

    /// Builds an algebra from the nonzero structure constants.
    ///
    /// Brackets `[v_i, v_j]` are completed by graded antisymmetry; when both
    /// orders are supplied they must agree.
    pub fn from_structure(
        basis: GradedBasis,
        differentials: &[(usize, Vec<F>)],
        brackets: &[(usize, usize, Vec<F>)],
    ) -> Result<Self, StructureError> {
        let n = basis.len();
        let mut d = Matrix::zeros(n, n);
        for (i, v) in differentials {
            check_len(v, n)?;
            for (j, c) in v.iter().enumerate() {
                d.set(j, *i, c.clone());
            }
        }
        let mut table: Vec<Option<Vec<F>>> = vec![None; n * n];
        for (i, j, v) in brackets {
            check_len(v, n)?;
            let (i, j) = (*i, *j);
            let sign = antisymmetry_sign::<F>(basis.degree(i), basis.degree(j));
            let mirrored: Vec<F> = v.iter().map(|c| sign.times(c)).collect();
            for (slot, value) in [(i * n + j, v.clone()), (j * n + i, mirrored)] {
                match &table[slot] {
                    Some(existing) if *existing != value => {
                        return Err(StructureError::InconsistentBracket(
                            basis.name(i).to_string(),
                            basis.name(j).to_string(),
                        ))
                    }
                    _ => table[slot] = Some(value),
                }
            }
        }
        let bracket = table
            .into_iter()
            .map(|v| v.unwrap_or_else(|| zero_vector(n)))
            .collect();
        Ok(Dgla { basis, d, bracket })
    }

    /// The abelian algebra with zero differential on `basis`.
    pub fn abelian(basis: GradedBasis) -> Self {
        let n = basis.len();
        Dgla {
            basis,
            d: Matrix::zeros(n, n),
            bracket: vec![zero_vector(n); n * n],
        }
    }

    pub fn zero() -> Self {
        Self::abelian(GradedBasis::empty())
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn differential_matrix(&self) -> &Matrix<F> {
        &self.d
    }

    pub fn has_zero_differential(&self) -> bool {
        self.d.is_zero()
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().all(|v| is_zero_vector(v))
    }

    pub fn d_basis(&self, i: usize) -> Vec<F> {
        self.d.column(i)
    }

    pub fn differential(&self, x: &[F]) -> Vec<F> {
        self.d.mul_vec(x)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[F] {
        &self.bracket[i * self.dim() + j]
    }

    pub fn bracket(&self, x: &[F], y: &[F]) -> Vec<F> {
        let n = self.dim();
        let mut out = zero_vector(n);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                axpy(&mut out, &a.times(b), self.bracket_basis(i, j));
            }
        }
        out
    }

    pub fn generator(&self, i: usize) -> Vec<F> {
        unit_vector(self.dim(), i)
    }

    pub fn generator_by_name(&self, name: &str) -> Option<Vec<F>> {
        self.basis.index_of(name).map(|i| self.generator(i))
    }

    /// Checks every axiom on basis elements; violations are data.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let b = &self.basis;
        let mut report = ValidationReport::default();
        for i in 0..n {
            let di = self.d_basis(i);
            if let Some(j) = support_outside_degree(b, &di, b.degree(i) + 1) {
                report.push(
                    Axiom::DifferentialDegree,
                    &[b.name(i)],
                    format!("d({}) involves {} of degree {}", b.name(i), b.name(j), b.degree(j)),
                );
            }
            if !is_zero_vector(&self.differential(&di)) {
                report.push(Axiom::DifferentialSquare, &[b.name(i)], "d(d(x)) != 0".into());
            }
        }
        for i in 0..n {
            for j in 0..n {
                let bij = self.bracket_basis(i, j);
                if let Some(k) = support_outside_degree(b, bij, b.degree(i) + b.degree(j)) {
                    report.push(
                        Axiom::BracketDegree,
                        &[b.name(i), b.name(j)],
                        format!("bracket involves {} of degree {}", b.name(k), b.degree(k)),
                    );
                }
                if j >= i {
                    let sign = antisymmetry_sign::<F>(b.degree(i), b.degree(j));
                    let mirrored: Vec<F> = bij.iter().map(|c| sign.times(c)).collect();
                    if mirrored != self.bracket_basis(j, i) {
                        report.push(
                            Axiom::Antisymmetry,
                            &[b.name(i), b.name(j)],
                            "[x,y] != -(-1)^{|x||y|} [y,x]".into(),
                        );
                    }
                }
                // d[x,y] = [dx,y] + (-1)^{|x|} [x,dy]
                let lhs = self.differential(bij);
                let mut rhs = self.bracket(&self.d_basis(i), &self.generator(j));
                let tail = self.bracket(&self.generator(i), &self.d_basis(j));
                axpy(&mut rhs, &F::sign(crate::scalar::is_odd(b.degree(i))), &tail);
                if lhs != rhs {
                    report.push(
                        Axiom::Leibniz,
                        &[b.name(i), b.name(j)],
                        "d[x,y] != [dx,y] + (-1)^{|x|}[x,dy]".into(),
                    );
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (self.generator(i), self.generator(j), self.generator(k));
                    let lhs = self.bracket(&x, self.bracket_basis(j, k));
                    let mut rhs = self.bracket(self.bracket_basis(i, j), &z);
                    let tail = self.bracket(&y, self.bracket_basis(i, k));
                    axpy(&mut rhs, &F::sign(koszul_odd(b.degree(i), b.degree(j))), &tail);
                    if lhs != rhs {
                        report.push(
                            Axiom::Jacobi,
                            &[b.name(i), b.name(j), b.name(k)],
                            "[x,[y,z]] != [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]".into(),
                        );
                        let _ = &x;
                    }
                }
            }
        }
        report
    }

    /// Nonzero differentials `(i, d v_i)` in basis order.
    pub fn nonzero_differentials(&self) -> Vec<(usize, Vec<F>)> {
        (0..self.dim())
            .map(|i| (i, self.d_basis(i)))
            .filter(|(_, v)| !is_zero_vector(v))
            .collect()
    }

    /// Nonzero brackets `[v_i, v_j]` with `i <= j`.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vec<F>)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let v = self.bracket_basis(i, j);
                if !is_zero_vector(v) {
                    out.push((i, j, v.to_vec()));
                }
            }
        }
        out
    }

    /// Dimension of each occurring degree.
    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for g in self.basis.generators() {
            *out.entry(g.degree).or_insert(0) += 1;
        }
        out
    }

    /// Same algebra in a new basis; column `j` of `change` is the new
    /// generator `j` in old coordinates. `change` must be invertible and
    /// degree preserving.
    pub fn change_basis(&self, names: Vec<Generator>, change: &Matrix<F>) -> Option<Self> {
        let inv = change.inverse()?;
        let basis = GradedBasis::new(names).ok()?;
        let n = self.dim();
        let new_vecs = change.columns();
        let d = inv.mul(&self.d).mul(change);
        let mut bracket = Vec::with_capacity(n * n);
        for x in &new_vecs {
            for y in &new_vecs {
                bracket.push(inv.mul_vec(&self.bracket(x, y)));
            }
        }
        Some(Dgla::from_parts(basis, d, bracket))
    }
}

fn check_len<F>(v: &[F], n: usize) -> Result<(), StructureError> {
    if v.len() == n {
        Ok(())
    } else {
        Err(StructureError::Length {
            expected: n,
            found: v.len(),
        })
    }
}

/// `-(-1)^{ab}`, the factor relating `[x,y]` and `[y,x]`.
pub(crate) fn antisymmetry_sign<F: Field>(a: i64, b: i64) -> F {
    F::sign(!koszul_odd(a, b))
}

fn support_outside_degree<F: Field>(b: &GradedBasis, v: &[F], degree: i64) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(j, c)| !c.is_zero() && b.degree(*j) != degree)
        .map(|(j, _)| j)
}

/// Result of [`direct_sum`]: the algebra plus the structure maps.
#[derive(Debug, Clone)]
pub struct DirectSum<F: Field = Rational> {
    pub algebra: Dgla<F>,
    pub left: DglaMorphism<F>,
    pub right: DglaMorphism<F>,
    pub left_projection: DglaMorphism<F>,
    pub right_projection: DglaMorphism<F>,
    /// `(old, new)` for every generator of the right summand that was renamed.
    pub renamed: Vec<(String, String)>,
}

/// `L ⊕ A` with componentwise structure and zero cross brackets. Clashing
/// names of `A` get a `_2`, `_3`, … suffix.
pub fn direct_sum<F: Field>(l: &Dgla<F>, a: &Dgla<F>) -> DirectSum<F> {
    let (nl, na) = (l.dim(), a.dim());
    let n = nl + na;
    let mut gens = l.basis().generators().to_vec();
    let mut renamed = Vec::new();
    for g in a.basis().generators() {
        let mut name = g.name.clone();
        let mut k = 2;
        while gens.iter().any(|h| h.name == name) || (name != g.name && a.basis().index_of(&name).is_some()) {
            name = format!("{}_{k}", g.name);
            k += 1;
        }
        if name != g.name {
            renamed.push((g.name.clone(), name.clone()));
        }
        gens.push(Generator {
            name,
            degree: g.degree,
        });
    }
    let basis = GradedBasis::new(gens).expect("names made unique");
    let mut d = Matrix::zeros(n, n);
    for i in 0..nl {
        for j in 0..nl {
            d.set(i, j, l.differential_matrix().get(i, j).clone());
        }
    }
    for i in 0..na {
        for j in 0..na {
            d.set(nl + i, nl + j, a.differential_matrix().get(i, j).clone());
        }
    }
    let mut bracket = vec![zero_vector(n); n * n];
    for i in 0..nl {
        for j in 0..nl {
            let v = &mut bracket[i * n + j];
            v[..nl].clone_from_slice(l.bracket_basis(i, j));
        }
    }
    for i in 0..na {
        for j in 0..na {
            let v = &mut bracket[(nl + i) * n + nl + j];
            v[nl..].clone_from_slice(a.bracket_basis(i, j));
        }
    }
    let algebra = Dgla::from_parts(basis, d, bracket);
    let block = |rows: usize, cols: usize, r0: usize, c0: usize, k: usize| {
        let mut m = Matrix::zeros(rows, cols);
        for t in 0..k {
            m.set(r0 + t, c0 + t, F::one());
        }
        m
    };
    DirectSum {
        left: DglaMorphism::new(l.clone(), algebra.clone(), block(n, nl, 0, 0, nl)),
        right: DglaMorphism::new(a.clone(), algebra.clone(), block(n, na, nl, 0, na)),
        left_projection: DglaMorphism::new(algebra.clone(), l.clone(), block(nl, n, 0, 0, nl)),
        right_projection: DglaMorphism::new(algebra.clone(), a.clone(), block(na, n, 0, nl, na)),
        algebra,
        renamed,
    }
}

/// The sub-DGLA spanned by homogeneous, independent `elements` of `m`,
/// with its inclusion. Fails unless the span is closed under `d` and `[,]`.
pub fn subalgebra<F: Field>(
    m: &Dgla<F>,
    elements: &[(String, Vec<F>)],
) -> Result<(Dgla<F>, DglaMorphism<F>), StructureError> {
    let n = m.dim();
    let mut gens = Vec::new();
    for (name, v) in elements {
        check_len(v, n)?;
        match m.basis().homogeneous_degree(v) {
            Ok(Some(k)) => gens.push(Generator {
                name: name.clone(),
                degree: k,
            }),
            _ => return Err(StructureError::NotHomogeneous(name.clone())),
        }
    }
    let basis = GradedBasis::new(gens)?;
    let vectors: Vec<Vec<F>> = elements.iter().map(|(_, v)| v.clone()).collect();
    let span = Subspace::from_basis(n, vectors.clone()).map_err(|e| match e {
        crate::linalg::LinalgError::Dependent { index } => {
            StructureError::Dependent(elements[index].0.clone())
        }
        _ => StructureError::Dependent(String::new()),
    })?;
    let k = vectors.len();
    let mut d = Matrix::zeros(k, k);
    for (i, v) in vectors.iter().enumerate() {
        let dv = m.differential(v);
        let c = span.coordinates(&dv).ok_or_else(|| StructureError::NotClosed {
            operation: "d".into(),
            witness: format!("d({}) = {}", elements[i].0, m.basis().format_vector(&dv)),
        })?;
        for (j, x) in c.into_iter().enumerate() {
            d.set(j, i, x);
        }
    }
    let mut bracket = Vec::with_capacity(k * k);
    for (i, x) in vectors.iter().enumerate() {
        for (j, y) in vectors.iter().enumerate() {
            let b = m.bracket(x, y);
            let c = span.coordinates(&b).ok_or_else(|| StructureError::NotClosed {
                operation: "bracket".into(),
                witness: format!(
                    "[{},{}] = {}",
                    elements[i].0,
                    elements[j].0,
                    m.basis().format_vector(&b)
                ),
            })?;
            bracket.push(c);
        }
    }
    let sub = Dgla::from_parts(basis, d, bracket);
    let inclusion = DglaMorphism::new(sub.clone(), m.clone(), Matrix::from_columns(n, &vectors));
    Ok((sub, inclusion))
}

/// Quotient of `m` by the DG ideal generated by homogeneous `generators`,
/// with the projection. The quotient basis consists of the generators of
/// `m` not needed to span the ideal, earliest first.
pub fn quotient<F: Field>(
    m: &Dgla<F>,
    generators: &[Vec<F>],
) -> Result<(Dgla<F>, DglaMorphism<F>), StructureError> {
    let n = m.dim();
    for v in generators {
        check_len(v, n)?;
        if m.basis().homogeneous_degree(v).is_err() {
            return Err(StructureError::NotHomogeneous(m.basis().format_vector(v)));
        }
    }
    let mut ideal = Subspace::span(n, generators.to_vec());
    loop {
        let mut more: Vec<Vec<F>> = ideal.basis().to_vec();
        for v in ideal.basis() {
            more.push(m.differential(v));
            for i in 0..n {
                more.push(m.bracket(v, &m.generator(i)));
            }
        }
        let next = Subspace::span(n, more);
        if next.dim() == ideal.dim() {
            break;
        }
        ideal = next;
    }
    // The ideal is spanned by homogeneous vectors, so its RREF rows are
    // homogeneous as well; complete it with standard basis vectors.
    let mut kept = Vec::new();
    let mut current = ideal.clone();
    for i in 0..n {
        let e = m.generator(i);
        if !current.contains(&e) {
            kept.push(i);
            current = current.sum(&Subspace::span(n, vec![e]));
        }
    }
    let k = kept.len();
    let mut all = ideal.basis().to_vec();
    all.extend(kept.iter().map(|&i| m.generator(i)));
    let full = Subspace::from_basis(n, all).expect("complement");
    let off = ideal.dim();
    let project = |v: &[F]| -> Vec<F> { full.coordinates(v).expect("full rank")[off..].to_vec() };
    let mut proj = Matrix::zeros(k, n);
    for i in 0..n {
        for (r, x) in project(&m.generator(i)).into_iter().enumerate() {
            proj.set(r, i, x);
        }
    }
    let basis = GradedBasis::new(
        kept.iter()
            .map(|&i| m.basis().generators()[i].clone())
            .collect(),
    )?;
    let mut d = Matrix::zeros(k, k);
    for (c, &i) in kept.iter().enumerate() {
        for (r, x) in project(&m.d_basis(i)).into_iter().enumerate() {
            d.set(r, c, x);
        }
    }
    let mut bracket = Vec::with_capacity(k * k);
    for &i in &kept {
        for &j in &kept {
            bracket.push(project(m.bracket_basis(i, j)));
        }
    }
    let q = Dgla::from_parts(basis, d, bracket);
    let pi = DglaMorphism::new(m.clone(), q.clone(), proj);
    Ok((q, pi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{acyclic_cone, algebra_l, algebra_m};

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn m_and_l_are_valid() {
        let m = algebra_m();
        assert!(m.validate().is_valid(), "{}", m.validate());
        assert!(algebra_l().0.validate().is_valid());
    }

    #[test]
    fn wrong_degree_differential_is_reported() {
        let m = algebra_m();
        let b = m.basis().clone();
        let e1 = m.generator(0);
        let mut d = m.nonzero_differentials();
        d[0].1 = e1;
        let bad = Dgla::from_structure(b, &d, &m.nonzero_brackets()).unwrap();
        let report = bad.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == Axiom::DifferentialDegree && v.witness == vec!["e3".to_string()]));
    }

    #[test]
    fn wrong_degree_bracket_is_reported() {
        let m = algebra_m();
        let mut brackets = m.nonzero_brackets();
        brackets.push((0, 1, m.generator(0)));
        let bad = Dgla::from_structure(m.basis().clone(), &m.nonzero_differentials(), &brackets).unwrap();
        assert!(bad
            .validate()
            .violations
            .iter()
            .any(|v| v.axiom == Axiom::BracketDegree));
    }

    #[test]
    fn bracket_completion_and_consistency() {
        let m = algebra_m();
        let (e2, e3) = (1, 2);
        // both orders agree for odd generators
        assert_eq!(m.bracket_basis(e2, e3), m.bracket_basis(e3, e2));
        let b = GradedBasis::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let err = Dgla::<Rational>::from_structure(
            b,
            &[],
            &[(0, 1, vec![q(1), q(0)]), (1, 0, vec![q(1), q(0)])],
        )
        .unwrap_err();
        assert!(matches!(err, StructureError::InconsistentBracket(..)));
    }

    #[test]
    fn direct_sum_with_zero_and_renaming() {
        let m = algebra_m();
        let s = direct_sum(&m, &Dgla::zero());
        assert_eq!(s.algebra, m);
        let z = direct_sum::<Rational>(&Dgla::zero(), &Dgla::zero());
        assert_eq!(z.algebra.dim(), 0);
        let mm = direct_sum(&m, &m);
        assert_eq!(mm.renamed.len(), 5);
        assert_eq!(mm.algebra.basis().name(5), "e1_2");
        assert!(mm.algebra.validate().is_valid());
        for f in [&mm.left, &mm.right, &mm.left_projection, &mm.right_projection] {
            assert!(f.validate().is_valid());
        }
        let cone = direct_sum(&m, &acyclic_cone(1));
        assert!(cone.left.validate().is_valid());
    }

    #[test]
    fn subalgebra_closure_is_checked() {
        let m = algebra_m();
        let e1 = m.generator(0);
        let err = subalgebra(&m, &[("e1".into(), e1)]).unwrap_err();
        assert!(matches!(err, StructureError::NotClosed { .. }));
        let (l, inc) = algebra_l();
        assert_eq!(l.dim(), 4);
        assert!(inc.validate().is_valid());
    }

    #[test]
    fn quotient_by_h1_e3_is_abelian() {
        let m = algebra_m();
        let (qa, pi) = quotient(&m, &[m.generator(3), m.generator(2)]).unwrap();
        assert_eq!(qa.dim(), 2);
        assert!(qa.is_abelian());
        assert_eq!(qa.basis().name(0), "e1");
        assert!(pi.validate().is_valid());
    }

    #[test]
    fn format_vectors() {
        let m = algebra_m();
        let v = vec![q(0), q(0), q(0), q(-1), q(1)];
        assert_eq!(m.basis().format_vector(&v), "-h1 + h2");
        let w = vec![Rational::new(1.into(), 2.into()), q(-2), q(0), q(0), q(0)];
        assert_eq!(m.basis().format_vector(&w), "1/2*e1 - 2*e2");
        assert_eq!(m.basis().format_vector(&zero_vector::<Rational>(5)), "0");
    }
}
