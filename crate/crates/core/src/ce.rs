//! The Chevalley–Eilenberg double complex `CE(L, M)^{p,q} = Hom^q(L^∧p, M)`
//! restricted to a window `0 <= p <= p_max`.
//!
//! The vertical differential is
//! `(δ̄φ)(x_1..x_p) = d(φ(x_1..x_p)) - Σ (-1)^{q + |x_1| + … + |x_{i-1}|} φ(x_1..dx_i..x_p)`
//! and the horizontal one is
//!
//! * `p = 0`: `(δm)(x) = (-1)^q m*x`;
//! * `p = 1`: `(δφ)(x,y) = (-1)^{q+1} (φ(x)*y - (-1)^{|x||y|} φ(y)*x - φ([x,y]))`;
//! * `p >= 2`: `(δφ)(x_1..x_{p+1}) = (-1)^{q+p} Σ_i χ_i φ(..x̂_i..)*x_i
//!   + (-1)^{q+p+1} Σ_{i<j} χ_{ij} φ(..x̂_i..x̂_j.., [x_i,x_j])`.

use std::borrow::Cow;
use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graded::{DglaMorphism, ModuleStructure};
use crate::linalg::{Matrix, Subquotient};
use crate::multilinear::{chi_sign, chi_sign_pair, hom_space_basis, normalize_wedge, q_range, HomSpace};
use crate::scalar::{is_odd, koszul_odd, Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CeError {
    #[error("the differentials of {0} must vanish")]
    NonzeroDifferential(&'static str),
    #[error("horizontal and vertical differentials neither commute nor anticommute at cell ({p},{q})")]
    SignMismatch { p: usize, q: i64 },
}

/// How the two differentials were combined into an anticommuting pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignNormalization {
    /// `δ δ̄ + δ̄ δ = 0` already; the vertical differential is `δ̄`.
    Anticommuting,
    /// `δ δ̄ = δ̄ δ`; the vertical differential is `(-1)^p δ̄`.
    Twisted,
}

/// Which transcription of the horizontal differential to use in
/// `CE^{1,*} → CE^{2,*}`; both must give the same matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowFormula {
    SeparateCase,
    GeneralCase,
}

#[derive(Debug, Clone)]
pub struct BicomplexWindow<F: Field = Rational> {
    module: ModuleStructure<F>,
    p_max: usize,
    cells: BTreeMap<(usize, i64), HomSpace>,
    // raw δ̄: (p,q) → (p,q+1)
    delta_bar: BTreeMap<(usize, i64), Matrix<F>>,
    // normalized vertical differential
    vertical: BTreeMap<(usize, i64), Matrix<F>>,
    // δ: (p,q) → (p+1,q), p < p_max
    horizontal: BTreeMap<(usize, i64), Matrix<F>>,
    normalization: SignNormalization,
}

struct Term<F> {
    coef: F,
    factors: Vec<usize>,
    act_by: Option<usize>,
}

impl<F: Field> BicomplexWindow<F> {
    /// Builds every cell with `p <= p_max` and its differentials, then
    /// decides how to normalize signs.
    pub fn new(module: &ModuleStructure<F>, p_max: usize) -> Result<Self, CeError> {
        Self::with_formula(module, p_max, LowFormula::SeparateCase)
    }

    pub fn with_formula(module: &ModuleStructure<F>, p_max: usize, formula: LowFormula) -> Result<Self, CeError> {
        let lb = module.algebra().basis();
        let mb = module.space();
        let mut cells = BTreeMap::new();
        for p in 0..=p_max {
            if let Some(range) = q_range(lb, mb, p) {
                for q in range {
                    let space = hom_space_basis(lb, mb, p, q);
                    if space.dim() > 0 {
                        cells.insert((p, q), space);
                    }
                }
            }
        }
        let mut w = BicomplexWindow {
            module: module.clone(),
            p_max,
            cells,
            delta_bar: BTreeMap::new(),
            vertical: BTreeMap::new(),
            horizontal: BTreeMap::new(),
            normalization: SignNormalization::Anticommuting,
        };
        let keys: Vec<(usize, i64)> = w.cells.keys().copied().collect();
        for &(p, q) in &keys {
            if let Some(m) = w.build_delta_bar(p, q) {
                w.delta_bar.insert((p, q), m);
            }
            if p < p_max {
                if let Some(m) = w.build_delta(p, q, formula) {
                    w.horizontal.insert((p, q), m);
                }
            }
        }
        w.normalization = w.detect_normalization()?;
        let twisted = w.normalization == SignNormalization::Twisted;
        w.vertical = w
            .delta_bar
            .iter()
            .map(|(&(p, q), m)| {
                let m = if twisted && is_odd(p as i64) {
                    m.scale(&-F::one())
                } else {
                    m.clone()
                };
                ((p, q), m)
            })
            .collect();
        Ok(w)
    }

    pub fn module(&self) -> &ModuleStructure<F> {
        &self.module
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn normalization(&self) -> SignNormalization {
        self.normalization
    }

    pub fn cell(&self, p: usize, q: i64) -> Option<&HomSpace> {
        self.cells.get(&(p, q))
    }

    pub fn cell_dim(&self, p: usize, q: i64) -> usize {
        self.cells.get(&(p, q)).map_or(0, |c| c.dim())
    }

    /// Nonzero cells in `(p, q)` order.
    pub fn cells(&self) -> impl Iterator<Item = ((usize, i64), &HomSpace)> {
        self.cells.iter().map(|(&k, v)| (k, v))
    }

    /// `q` values of nonzero cells in column `p`.
    pub fn q_values(&self, p: usize) -> Vec<i64> {
        self.cells.range((p, i64::MIN)..=(p, i64::MAX)).map(|(&(_, q), _)| q).collect()
    }

    fn zero_map(&self, src: (usize, i64), dst: (usize, i64)) -> Matrix<F> {
        Matrix::zeros(self.cell_dim(dst.0, dst.1), self.cell_dim(src.0, src.1))
    }

    /// `δ̄` as transcribed, `(p,q) → (p,q+1)`.
    pub fn delta_bar(&self, p: usize, q: i64) -> Cow<'_, Matrix<F>> {
        match self.delta_bar.get(&(p, q)) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(self.zero_map((p, q), (p, q + 1))),
        }
    }

    /// Vertical differential after sign normalization.
    pub fn vertical(&self, p: usize, q: i64) -> Cow<'_, Matrix<F>> {
        match self.vertical.get(&(p, q)) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(self.zero_map((p, q), (p, q + 1))),
        }
    }

    /// `δ: (p,q) → (p+1,q)`; only for `p < p_max`.
    pub fn horizontal(&self, p: usize, q: i64) -> Cow<'_, Matrix<F>> {
        assert!(p < self.p_max, "horizontal map leaves the window");
        match self.horizontal.get(&(p, q)) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(self.zero_map((p, q), (p + 1, q))),
        }
    }

    fn scatter(&self, m: &mut Matrix<F>, dst: &HomSpace, row_mono: usize, src: &HomSpace, terms: &[Term<F>]) {
        let mb = self.module.space();
        let lb = self.module.algebra().basis();
        for term in terms {
            let Some((neg, mono)) = normalize_wedge(lb, &term.factors) else {
                continue;
            };
            let Some(ms) = src.monomial_index(&mono.factors) else {
                continue;
            };
            let coef = if neg { -term.coef.clone() } else { term.coef.clone() };
            let degree = mono.degree(lb) + src.q;
            for t in mb.indices_of_degree(degree) {
                let Some(col) = src.index_of(ms, t) else {
                    continue;
                };
                match term.act_by {
                    None => {
                        if let Some(row) = dst.index_of(row_mono, t) {
                            m.add_to(row, col, &coef);
                        }
                    }
                    Some(x) => {
                        for (t2, c) in self.module.act_basis(t, x).iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            if let Some(row) = dst.index_of(row_mono, t2) {
                                m.add_to(row, col, &coef.times(c));
                            }
                        }
                    }
                }
            }
        }
    }

    fn build_delta_bar(&self, p: usize, q: i64) -> Option<Matrix<F>> {
        let src = self.cells.get(&(p, q))?;
        let dst = self.cells.get(&(p, q + 1))?;
        let lb = self.module.algebra().basis();
        let l = self.module.algebra();
        let mut m = Matrix::zeros(dst.dim(), src.dim());
        for (mi, nu) in dst.monomials.iter().enumerate() {
            // d(φ(ν))
            if let Some(ms) = src.monomial_index(&nu.factors) {
                let degree = nu.degree(lb) + q;
                for t in self.module.space().indices_of_degree(degree) {
                    let Some(col) = src.index_of(ms, t) else {
                        continue;
                    };
                    for (t2, c) in self.module.differential_matrix().column(t).iter().enumerate() {
                        if !c.is_zero() {
                            if let Some(row) = dst.index_of(mi, t2) {
                                m.add_to(row, col, c);
                            }
                        }
                    }
                }
            }
            // -Σ (-1)^{q + |x_1|+…+|x_{i-1}|} φ(…dx_i…)
            let mut prefix = q;
            let mut terms = Vec::new();
            for (i, &x) in nu.factors.iter().enumerate() {
                let sign = -F::sign(is_odd(prefix));
                for (k, c) in l.d_basis(x).iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut factors = nu.factors.clone();
                    factors[i] = k;
                    terms.push(Term {
                        coef: sign.times(c),
                        factors,
                        act_by: None,
                    });
                }
                prefix += lb.degree(x);
            }
            self.scatter(&mut m, dst, mi, src, &terms);
        }
        Some(m)
    }

    fn build_delta(&self, p: usize, q: i64, formula: LowFormula) -> Option<Matrix<F>> {
        let src = self.cells.get(&(p, q))?;
        let dst = self.cells.get(&(p + 1, q))?;
        let lb = self.module.algebra().basis();
        let l = self.module.algebra();
        let big_p = p + 1;
        let mut m = Matrix::zeros(dst.dim(), src.dim());
        for (mi, nu) in dst.monomials.iter().enumerate() {
            let x = &nu.factors;
            let degs: Vec<i64> = x.iter().map(|&i| lb.degree(i)).collect();
            let mut terms = Vec::new();
            if big_p == 1 {
                terms.push(Term {
                    coef: F::sign(is_odd(q)),
                    factors: vec![],
                    act_by: Some(x[0]),
                });
            } else if big_p == 2 && formula == LowFormula::SeparateCase {
                let s = F::sign(is_odd(q + 1));
                terms.push(Term {
                    coef: s.clone(),
                    factors: vec![x[0]],
                    act_by: Some(x[1]),
                });
                terms.push(Term {
                    coef: -s.times(&F::sign(koszul_odd(degs[0], degs[1]))),
                    factors: vec![x[1]],
                    act_by: Some(x[0]),
                });
                for (k, c) in l.bracket_basis(x[0], x[1]).iter().enumerate() {
                    if !c.is_zero() {
                        terms.push(Term {
                            coef: -s.times(c),
                            factors: vec![k],
                            act_by: None,
                        });
                    }
                }
            } else {
                let s1 = F::sign(is_odd(q + big_p as i64 - 1));
                let s2 = -s1.clone();
                for i in 0..big_p {
                    let mut factors = x.clone();
                    let xi = factors.remove(i);
                    let chi = F::sign(chi_sign(&degs, i));
                    terms.push(Term {
                        coef: s1.times(&chi),
                        factors,
                        act_by: Some(xi),
                    });
                }
                for i in 0..big_p {
                    for j in i + 1..big_p {
                        let chi = F::sign(chi_sign_pair(&degs, i, j));
                        let rest: Vec<usize> = x
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != i && k != j)
                            .map(|(_, &v)| v)
                            .collect();
                        for (k, c) in l.bracket_basis(x[i], x[j]).iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let mut factors = rest.clone();
                            factors.push(k);
                            terms.push(Term {
                                coef: s2.times(&chi).times(c),
                                factors,
                                act_by: None,
                            });
                        }
                    }
                }
            }
            self.scatter(&mut m, dst, mi, src, &terms);
        }
        Some(m)
    }

    /// `δ δ̄ + δ̄ δ` (or the difference when `commutator`) from `(p,q)`.
    fn square_defect(&self, p: usize, q: i64, commutator: bool) -> bool {
        let a = self.horizontal(p, q + 1).mul(&self.delta_bar(p, q));
        let b = self.delta_bar(p + 1, q).mul(&self.horizontal(p, q));
        let s = if commutator { a.sub(&b) } else { a.add(&b) };
        !s.is_zero()
    }

    fn detect_normalization(&self) -> Result<SignNormalization, CeError> {
        let mut anti = true;
        let mut comm = true;
        let mut witness = None;
        for &(p, q) in self.cells.keys() {
            if p >= self.p_max {
                continue;
            }
            let a = !self.square_defect(p, q, false);
            let c = !self.square_defect(p, q, true);
            anti &= a;
            comm &= c;
            if !a && !c {
                witness = Some((p, q));
            }
            if !anti && !comm {
                let (p, q) = witness.unwrap_or((p, q));
                return Err(CeError::SignMismatch { p, q });
            }
        }
        Ok(if anti {
            SignNormalization::Anticommuting
        } else {
            SignNormalization::Twisted
        })
    }

    /// Whether `δ̄∘δ̄`, `δ∘δ` and the normalized anticommutator vanish on
    /// every cell of the window.
    pub fn check_identities(&self) -> bool {
        self.cells.keys().all(|&(p, q)| {
            let vv = self.vertical(p, q + 1).mul(&self.vertical(p, q)).is_zero();
            let hh = p + 2 > self.p_max || self.horizontal(p + 1, q).mul(&self.horizontal(p, q)).is_zero();
            let anti = p + 1 > self.p_max || {
                let a = self.horizontal(p, q + 1).mul(&self.vertical(p, q));
                let b = self.vertical(p + 1, q).mul(&self.horizontal(p, q));
                a.add(&b).is_zero()
            };
            vv && hh && anti
        })
    }

    /// Degree-`n` part of the total complex, truncated to `p <= p_max`.
    pub fn total_slice(&self, n: i64) -> TotalComplexSlice<F> {
        let comps = |n: i64| -> Vec<(usize, i64, usize)> {
            (0..=self.p_max)
                .map(|p| (p, n - p as i64, self.cell_dim(p, n - p as i64)))
                .filter(|c| c.2 > 0)
                .collect()
        };
        let src = comps(n);
        let dst = comps(n + 1);
        let rows: usize = dst.iter().map(|c| c.2).sum();
        let cols: usize = src.iter().map(|c| c.2).sum();
        let mut m = Matrix::zeros(rows, cols);
        let offset = |list: &[(usize, i64, usize)], p: usize| -> Option<usize> {
            let mut o = 0;
            for c in list {
                if c.0 == p {
                    return Some(o);
                }
                o += c.2;
            }
            None
        };
        for &(p, q, _) in &src {
            let c0 = offset(&src, p).expect("listed");
            let mut blocks: Vec<(usize, Cow<'_, Matrix<F>>)> = vec![(p, self.vertical(p, q))];
            if p < self.p_max {
                blocks.push((p + 1, self.horizontal(p, q)));
            }
            for (tp, block) in blocks {
                if let Some(r0) = offset(&dst, tp) {
                    for i in 0..block.nrows() {
                        for j in 0..block.ncols() {
                            let v = block.get(i, j);
                            if !v.is_zero() {
                                m.add_to(r0 + i, c0 + j, v);
                            }
                        }
                    }
                }
            }
        }
        TotalComplexSlice {
            degree: n,
            components: src,
            differential: m,
        }
    }
}

/// One degree of `Tot^Π`, truncated to the window.
#[derive(Debug, Clone)]
pub struct TotalComplexSlice<F: Field = Rational> {
    pub degree: i64,
    /// `(p, q, dim)` of each nonzero component.
    pub components: Vec<(usize, i64, usize)>,
    /// Into the slice of degree `degree + 1`.
    pub differential: Matrix<F>,
}

/// A family of cell maps between two windows, commuting with both
/// differentials.
#[derive(Debug, Clone)]
pub struct CochainMap<F: Field = Rational> {
    pub p_max: usize,
    maps: BTreeMap<(usize, i64), Matrix<F>>,
    src_dims: BTreeMap<(usize, i64), usize>,
    dst_dims: BTreeMap<(usize, i64), usize>,
}

impl<F: Field> CochainMap<F> {
    pub fn cell(&self, p: usize, q: i64) -> Cow<'_, Matrix<F>> {
        match self.maps.get(&(p, q)) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(Matrix::zeros(
                self.dst_dims.get(&(p, q)).copied().unwrap_or(0),
                self.src_dims.get(&(p, q)).copied().unwrap_or(0),
            )),
        }
    }

    /// Whether the map commutes with `V` and `δ` on every cell.
    pub fn commutes(&self, src: &BicomplexWindow<F>, dst: &BicomplexWindow<F>) -> bool {
        src.cells.keys().all(|&(p, q)| {
            let v = dst.vertical(p, q).mul(&self.cell(p, q)) == self.cell(p, q + 1).mul(&src.vertical(p, q));
            let h = p >= self.p_max
                || dst.horizontal(p, q).mul(&self.cell(p, q)) == self.cell(p + 1, q).mul(&src.horizontal(p, q));
            v && h
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &CochainMap<F>) -> CochainMap<F> {
        let mut maps = BTreeMap::new();
        for (&k, m) in &self.maps {
            maps.insert(k, other.cell(k.0, k.1).mul(m));
        }
        CochainMap {
            p_max: self.p_max,
            maps,
            src_dims: self.src_dims.clone(),
            dst_dims: other.dst_dims.clone(),
        }
    }
}

fn dims<F: Field>(w: &BicomplexWindow<F>) -> BTreeMap<(usize, i64), usize> {
    w.cells.iter().map(|(&k, c)| (k, c.dim())).collect()
}

/// `φ ↦ g∘φ` for a module map `g` (a `dim M2 × dim M1` matrix) between
/// windows over the same algebra.
pub fn post_compose<F: Field>(g: &Matrix<F>, src: &BicomplexWindow<F>, dst: &BicomplexWindow<F>) -> CochainMap<F> {
    assert_eq!(src.p_max, dst.p_max);
    let mut maps = BTreeMap::new();
    for (&(p, q), s) in &src.cells {
        let Some(d) = dst.cells.get(&(p, q)) else {
            continue;
        };
        let mut m = Matrix::zeros(d.dim(), s.dim());
        for (col, e) in s.elements.iter().enumerate() {
            let Some(mi) = d.monomial_index(&e.monomial.factors) else {
                continue;
            };
            for t2 in 0..g.nrows() {
                let c = g.get(t2, e.target);
                if c.is_zero() {
                    continue;
                }
                if let Some(row) = d.index_of(mi, t2) {
                    m.set(row, col, c.clone());
                }
            }
        }
        maps.insert((p, q), m);
    }
    CochainMap {
        p_max: src.p_max,
        maps,
        src_dims: dims(src),
        dst_dims: dims(dst),
    }
}

/// `φ ↦ φ∘f^∧p` for `f: L' → L`, from a window over `L` to one over `L'`
/// with the same module space.
pub fn pre_compose<F: Field>(f: &DglaMorphism<F>, src: &BicomplexWindow<F>, dst: &BicomplexWindow<F>) -> CochainMap<F> {
    assert_eq!(src.p_max, dst.p_max);
    let lb = src.module.algebra().basis();
    let mut maps = BTreeMap::new();
    for (&(p, q), d) in &dst.cells {
        let Some(s) = src.cells.get(&(p, q)) else {
            continue;
        };
        let mut m = Matrix::zeros(d.dim(), s.dim());
        for (mi, nu) in d.monomials.iter().enumerate() {
            // expand f(y_1) ∧ … ∧ f(y_p) multilinearly
            let images: Vec<Vec<(usize, F)>> = nu
                .factors
                .iter()
                .map(|&y| {
                    f.image_of(y)
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect()
                })
                .collect();
            let mut stack: Vec<(Vec<usize>, F)> = vec![(Vec::new(), F::one())];
            for choices in &images {
                let mut next = Vec::with_capacity(stack.len() * choices.len());
                for (word, c) in &stack {
                    for (k, fk) in choices {
                        let mut w = word.clone();
                        w.push(*k);
                        next.push((w, c.times(fk)));
                    }
                }
                stack = next;
            }
            for (word, c) in stack {
                let Some((neg, mono)) = normalize_wedge(lb, &word) else {
                    continue;
                };
                let Some(ms) = s.monomial_index(&mono.factors) else {
                    continue;
                };
                let c = if neg { -c } else { c };
                for (col, e) in s.elements.iter().enumerate() {
                    if s.index_of(ms, e.target) != Some(col) {
                        continue;
                    }
                    if let Some(row) = d.index_of(mi, e.target) {
                        m.add_to(row, col, &c);
                    }
                }
            }
        }
        maps.insert((p, q), m);
    }
    CochainMap {
        p_max: src.p_max,
        maps,
        src_dims: dims(src),
        dst_dims: dims(dst),
    }
}

/// One factor `E^{p, n-p}` of `H^n_CE` for inputs with zero differential.
#[derive(Debug, Clone)]
pub struct CeFactor<F: Field = Rational> {
    pub p: usize,
    pub q: i64,
    pub cell_dim: usize,
    pub quotient: Subquotient<F>,
}

/// `ker δ / im δ` at `(p, n - p)` for each `p <= p_max`; `H^n_CE` up to
/// the cutoff is their product.
pub fn ce_cohomology_trivial_d<F: Field>(
    module: &ModuleStructure<F>,
    n: i64,
    p_max: usize,
) -> Result<Vec<CeFactor<F>>, CeError> {
    if !module.algebra().has_zero_differential() {
        return Err(CeError::NonzeroDifferential("the algebra"));
    }
    if !module.has_zero_differential() {
        return Err(CeError::NonzeroDifferential("the module"));
    }
    // one extra column so δ out of p = p_max is available
    let w = BicomplexWindow::new(module, p_max + 1)?;
    let mut out = Vec::new();
    for p in 0..=p_max {
        let q = n - p as i64;
        let dim = w.cell_dim(p, q);
        let cycles = w.horizontal(p, q).kernel();
        let boundaries = if p == 0 {
            crate::linalg::Subspace::zero(dim)
        } else {
            w.horizontal(p - 1, q).image()
        };
        let quotient = Subquotient::new(cycles, boundaries).expect("δ squares to zero");
        out.push(CeFactor {
            p,
            q,
            cell_dim: dim,
            quotient,
        });
    }
    Ok(out)
}
