//! The spectral sequence of the first (column) filtration of a
//! [`BicomplexWindow`], computed with zig-zag ladders.
//!
//! Write `V` for the normalized vertical differential and `H` for `δ`. A
//! ladder of length `r` at `(p, q)` is a tuple `(a_0, …, a_{r-1})` with
//! `a_i ∈ C^{p+i, q-i}`, `V a_0 = 0` and `H a_{i-1} + V a_i = 0`. Then
//!
//! * `Z_r` is the set of first rungs of length-`r` ladders,
//! * `B_r` is `im V` plus the `H`-images of last rungs of shorter ladders
//!   ending just left of the cell,
//! * `E_r = Z_r / B_r` and `d_r [a_0] = [H a_{r-1}]`.
//!
//! A cell value is reported only when every cell its ladders touch lies
//! inside the window.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::Serialize;
use thiserror::Error;

use crate::ce::{BicomplexWindow, CochainMap};
use crate::graded::{CohomologyPresentation, DglaMorphism, ModuleStructure};
use crate::linalg::{axpy, is_zero_vector, zero_vector, Matrix, Subquotient, Subspace};
use crate::multilinear::hom_space_basis;
use crate::scalar::{Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("ladder from ({p},{q}) on page {r} does not land in a cycle of the target")]
    Unprolongable { r: usize, p: usize, q: i64 },
    #[error("Euler cochain is not closed: {0}")]
    EulerNotClosed(&'static str),
    #[error("no dual witness exists although the image is not a boundary")]
    MissingWitness,
}

/// The ladders of a fixed length starting at a fixed cell.
#[derive(Debug, Clone)]
pub struct LadderSpace<F: Field = Rational> {
    pub p: usize,
    pub q: i64,
    pub len: usize,
    /// `(offset, dim)` of each rung inside a stacked ladder vector.
    pub layout: Vec<(usize, usize)>,
    pub basis: Vec<Vec<F>>,
}

impl<F: Field> LadderSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rung<'a>(&self, ladder: &'a [F], i: usize) -> &'a [F] {
        let (o, d) = self.layout[i];
        &ladder[o..o + d]
    }

    /// Columns are the `i`-th rungs of the basis ladders.
    pub fn rung_matrix(&self, i: usize) -> Matrix<F> {
        let cols: Vec<Vec<F>> = self.basis.iter().map(|l| self.rung(l, i).to_vec()).collect();
        Matrix::from_columns(self.layout[i].1, &cols)
    }

    fn split(&self, ladder: &[F]) -> Vec<Vec<F>> {
        (0..self.len).map(|i| self.rung(ladder, i).to_vec()).collect()
    }
}

/// `E_r^{p,q}` with one ladder per quotient basis vector.
#[derive(Debug, Clone)]
pub struct PageCell<F: Field = Rational> {
    pub r: usize,
    pub p: usize,
    pub q: i64,
    pub quotient: Subquotient<F>,
    /// Ladders of length `r` (rungs listed separately).
    pub ladders: Vec<Vec<Vec<F>>>,
}

impl<F: Field> PageCell<F> {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
}

/// A page restricted to the window; `None` marks an unknown cell.
#[derive(Debug, Clone)]
pub struct Page<F: Field = Rational> {
    pub r: usize,
    pub cells: BTreeMap<(usize, i64), Option<PageCell<F>>>,
}

impl<F: Field> Page<F> {
    /// Known dimensions, `None` for unknown cells.
    pub fn dims(&self) -> BTreeMap<(usize, i64), Option<usize>> {
        self.cells
            .iter()
            .map(|(&k, c)| (k, c.as_ref().map(|c| c.dim())))
            .collect()
    }
}

/// Evidence that `d_r [a_0] ≠ 0`: the ladder, plus functionals `λ_i` on
/// `C^{P-i, Q+i}` with `λ_0 V = 0`, `λ_{i-1} H + λ_i V = 0` and
/// `λ_0(H a_{r-1}) = 1`, where `(P, Q)` is the target cell. Such `λ_0`
/// vanishes on `B_r^{P,Q}`, so the image class is nonzero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate<F: Field = Rational> {
    pub r: usize,
    pub start: (usize, i64),
    pub target: (usize, i64),
    #[serde(skip)]
    pub rungs: Vec<Vec<F>>,
    #[serde(skip)]
    pub witnesses: Vec<Vec<F>>,
}

impl<F: Field> Certificate<F> {
    /// Re-checks every identity using only the window's matrices.
    pub fn verify(&self, w: &BicomplexWindow<F>) -> Result<(), String> {
        let (p, q) = self.start;
        let (big_p, big_q) = self.target;
        let r = self.r;
        if r == 0 || self.rungs.len() != r || self.witnesses.len() != r {
            return Err("wrong number of rungs or witnesses".into());
        }
        if big_p != p + r || big_q != q - r as i64 + 1 {
            return Err("target is not the d_r target of the start cell".into());
        }
        if big_p > w.p_max() {
            return Err(format!("window p_max = {} is smaller than the target column {big_p}", w.p_max()));
        }
        for (i, a) in self.rungs.iter().enumerate() {
            if a.len() != w.cell_dim(p + i, q - i as i64) {
                return Err(format!("rung {i} has the wrong length"));
            }
        }
        for (i, l) in self.witnesses.iter().enumerate() {
            if l.len() != w.cell_dim(big_p - i, big_q + i as i64) {
                return Err(format!("witness {i} has the wrong length"));
            }
        }
        if !is_zero_vector(&w.vertical(p, q).mul_vec(&self.rungs[0])) {
            return Err("first rung is not V-closed".into());
        }
        for i in 1..r {
            let (pi, qi) = (p + i, q - i as i64);
            let mut s = w.horizontal(pi - 1, qi + 1).mul_vec(&self.rungs[i - 1]);
            axpy(&mut s, &F::one(), &w.vertical(pi, qi).mul_vec(&self.rungs[i]));
            if !is_zero_vector(&s) {
                return Err(format!("ladder relation fails at rung {i}"));
            }
        }
        let y = w.horizontal(big_p - 1, big_q).mul_vec(&self.rungs[r - 1]);
        if !is_zero_vector(&w.vertical(big_p, big_q - 1).vec_mul(&self.witnesses[0])) {
            return Err("witness 0 does not vanish on im V".into());
        }
        for i in 1..r {
            let (pi, qi) = (big_p - i, big_q + i as i64 - 1);
            let mut s = w.horizontal(pi, qi).vec_mul(&self.witnesses[i - 1]);
            axpy(&mut s, &F::one(), &w.vertical(pi, qi).vec_mul(&self.witnesses[i]));
            if !is_zero_vector(&s) {
                return Err(format!("witness relation fails at {i}"));
            }
        }
        let pairing = dot(&self.witnesses[0], &y);
        if pairing != F::one() {
            return Err(format!("witness pairs to {pairing}, expected 1"));
        }
        Ok(())
    }
}

fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut s = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &x.times(y);
        }
    }
    s
}

type LadderCache<F> = RefCell<HashMap<(usize, usize, i64), Rc<LadderSpace<F>>>>;

/// Generators of `B_r` with the ladder space their last rungs came from.
type BoundaryGenerators<F> = (Matrix<F>, Option<Rc<LadderSpace<F>>>);

/// Lazily computed spectral sequence of a window.
pub struct SpectralSequence<'w, F: Field = Rational> {
    window: &'w BicomplexWindow<F>,
    ladders: LadderCache<F>,
}

impl<'w, F: Field> SpectralSequence<'w, F> {
    pub fn new(window: &'w BicomplexWindow<F>) -> Self {
        SpectralSequence {
            window,
            ladders: RefCell::new(HashMap::new()),
        }
    }

    pub fn window(&self) -> &'w BicomplexWindow<F> {
        self.window
    }

    fn dim(&self, p: usize, q: i64) -> usize {
        self.window.cell_dim(p, q)
    }

    /// Ladders of length `len >= 1` at `(p, q)`; `None` beyond the window.
    pub fn ladder_space(&self, len: usize, p: usize, q: i64) -> Option<Rc<LadderSpace<F>>> {
        assert!(len >= 1);
        if p + len - 1 > self.window.p_max() {
            return None;
        }
        if let Some(k) = self.ladders.borrow().get(&(len, p, q)) {
            return Some(k.clone());
        }
        let space = if len == 1 {
            let kernel = self.window.vertical(p, q).kernel();
            LadderSpace {
                p,
                q,
                len: 1,
                layout: vec![(0, self.dim(p, q))],
                basis: kernel.basis().to_vec(),
            }
        } else {
            let prev = self.ladder_space(len - 1, p, q)?;
            let (pl, ql) = (p + len - 2, q - len as i64 + 2);
            let (pn, qn) = (p + len - 1, q - len as i64 + 1);
            let h_last = self.window.horizontal(pl, ql).mul(&prev.rung_matrix(len - 2));
            let v_new = self.window.vertical(pn, qn);
            let system = Matrix::hstack(h_last.nrows(), &[&h_last, &v_new]);
            let k = prev.dim();
            let new_dim = self.dim(pn, qn);
            let total: usize = prev.layout.last().map_or(0, |(o, d)| o + d);
            let mut layout = prev.layout.clone();
            layout.push((total, new_dim));
            let basis = system
                .kernel()
                .basis()
                .iter()
                .map(|v| {
                    let mut ladder = zero_vector(total);
                    for (c, b) in v[..k].iter().zip(&prev.basis) {
                        if !c.is_zero() {
                            axpy(&mut ladder, c, b);
                        }
                    }
                    ladder.extend(v[k..].iter().cloned());
                    ladder
                })
                .collect();
            LadderSpace {
                p,
                q,
                len,
                layout,
                basis,
            }
        };
        let rc = Rc::new(space);
        self.ladders.borrow_mut().insert((len, p, q), rc.clone());
        Some(rc)
    }

    /// `Z_r^{p,q}`; `Z_0` is the whole cell.
    pub fn cycles(&self, r: usize, p: usize, q: i64) -> Option<Subspace<F>> {
        let n = self.dim(p, q);
        if r == 0 {
            return Some(Subspace::full(n));
        }
        let k = self.ladder_space(r, p, q)?;
        Some(Subspace::span(n, k.basis.iter().map(|l| k.rung(l, 0).to_vec()).collect()))
    }

    /// Column generators of `B_r^{p,q}`: `V` from below, then `H` of last
    /// rungs of the ladder space that ends at column `p - 1`.
    fn boundary_generators(&self, r: usize, p: usize, q: i64) -> Option<BoundaryGenerators<F>> {
        let n = self.dim(p, q);
        let v = self.window.vertical(p, q - 1).into_owned();
        if r <= 1 || p == 0 {
            return Some((v, None));
        }
        let j = (r - 1).min(p);
        let k = self.ladder_space(j, p - j, q + j as i64 - 1)?;
        let h = self.window.horizontal(p - 1, q).mul(&k.rung_matrix(j - 1));
        Some((Matrix::hstack(n, &[&v, &h]), Some(k)))
    }

    /// `B_r^{p,q}`; `B_0 = 0`.
    pub fn boundaries(&self, r: usize, p: usize, q: i64) -> Option<Subspace<F>> {
        if r == 0 {
            return Some(Subspace::zero(self.dim(p, q)));
        }
        if p > self.window.p_max() {
            return None;
        }
        let (g, _) = self.boundary_generators(r, p, q)?;
        Some(g.image())
    }

    /// Writes `y = V c + H(last rung of b)` for `y ∈ B_r^{p,q}`, returning
    /// `(c, rungs of b)`; `None` when `y ∉ B_r`.
    fn boundary_preimage(&self, r: usize, p: usize, q: i64, y: &[F]) -> Option<(Vec<F>, Vec<Vec<F>>)> {
        let (g, k) = self.boundary_generators(r, p, q)?;
        let x = g.solve(y)?;
        let nv = self.dim(p, q - 1);
        let c = x[..nv].to_vec();
        let rungs = match k {
            None => Vec::new(),
            Some(k) => {
                let mut ladder = zero_vector(k.layout.last().map_or(0, |(o, d)| o + d));
                for (coef, b) in x[nv..].iter().zip(&k.basis) {
                    if !coef.is_zero() {
                        axpy(&mut ladder, coef, b);
                    }
                }
                k.split(&ladder)
            }
        };
        Some((c, rungs))
    }

    /// Whether `E_r^{p,q}` is determined by the window.
    pub fn is_known(&self, r: usize, p: usize, q: i64) -> bool {
        p <= self.window.p_max() && (r == 0 || self.dim(p, q) == 0 || p + r - 1 <= self.window.p_max())
    }

    pub fn page_cell(&self, r: usize, p: usize, q: i64) -> Option<PageCell<F>> {
        if !self.is_known(r, p, q) {
            return None;
        }
        let n = self.dim(p, q);
        if n == 0 {
            return Some(PageCell {
                r,
                p,
                q,
                quotient: Subquotient::full(0),
                ladders: Vec::new(),
            });
        }
        let z = self.cycles(r, p, q)?;
        let b = self.boundaries(r, p, q)?;
        let quotient = Subquotient::new(z, b).expect("boundaries lie in cycles");
        let ladders = if r == 0 {
            quotient.representatives().iter().map(|v| vec![v.clone()]).collect()
        } else {
            let k = self.ladder_space(r, p, q)?;
            let first = k.rung_matrix(0);
            quotient
                .representatives()
                .iter()
                .map(|rep| {
                    let c = first.solve(rep).expect("representative is a first rung");
                    let mut ladder = zero_vector(k.layout.last().map_or(0, |(o, d)| o + d));
                    for (coef, b) in c.iter().zip(&k.basis) {
                        if !coef.is_zero() {
                            axpy(&mut ladder, coef, b);
                        }
                    }
                    k.split(&ladder)
                })
                .collect()
        };
        Some(PageCell {
            r,
            p,
            q,
            quotient,
            ladders,
        })
    }

    /// All cells of the window on page `r`.
    pub fn page(&self, r: usize) -> Page<F> {
        let cells = self
            .window
            .cells()
            .map(|((p, q), _)| ((p, q), self.page_cell(r, p, q)))
            .collect();
        Page { r, cells }
    }

    /// `H a_{r-1}` for a ladder of length `r >= 1` from `(p, q)`, or `V a_0`
    /// on page 0.
    fn image_of_ladder(&self, r: usize, p: usize, q: i64, rungs: &[Vec<F>]) -> Vec<F> {
        if r == 0 {
            return self.window.vertical(p, q).mul_vec(&rungs[0]);
        }
        self.window
            .horizontal(p + r - 1, q - r as i64 + 1)
            .mul_vec(&rungs[r - 1])
    }

    fn target(r: usize, p: usize, q: i64) -> (usize, i64) {
        (p + r, q - r as i64 + 1)
    }

    /// Whether `d_r` vanishes on `E_r^{p,q}`; `None` when undecidable in
    /// the window. A nonvanishing answer comes with a certificate.
    pub fn d_r_vanishes(&self, r: usize, p: usize, q: i64) -> Option<Result<(), Certificate<F>>> {
        assert!(r >= 1);
        let (tp, tq) = Self::target(r, p, q);
        if tp > self.window.p_max() {
            return None;
        }
        let cell = self.page_cell(r, p, q)?;
        for rungs in &cell.ladders {
            if let Some(cert) = self.obstruction(r, p, q, rungs)? {
                return Some(Err(cert));
            }
        }
        let _ = tq;
        Some(Ok(()))
    }

    /// `None` outside the window, `Some(None)` when `d_r` of the ladder's
    /// class vanishes, otherwise a certificate.
    fn obstruction(&self, r: usize, p: usize, q: i64, rungs: &[Vec<F>]) -> Option<Option<Certificate<F>>> {
        let (tp, tq) = Self::target(r, p, q);
        if tp > self.window.p_max() {
            return None;
        }
        let y = self.image_of_ladder(r, p, q, rungs);
        if self.boundaries(r, tp, tq)?.contains(&y) {
            return Some(None);
        }
        let witnesses = self.dual_witness(r, tp, tq, &y).expect("duality");
        Some(Some(Certificate {
            r,
            start: (p, q),
            target: (tp, tq),
            rungs: rungs.to_vec(),
            witnesses,
        }))
    }

    /// Solves for `λ_0..λ_{r-1}` (see [`Certificate`]).
    fn dual_witness(&self, r: usize, big_p: usize, big_q: i64, y: &[F]) -> Result<Vec<Vec<F>>, SpectralError> {
        let w = self.window;
        let dims: Vec<usize> = (0..r)
            .map(|i| if i <= big_p { w.cell_dim(big_p - i, big_q + i as i64) } else { 0 })
            .collect();
        let offs: Vec<usize> = dims
            .iter()
            .scan(0, |acc, d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let unknowns: usize = dims.iter().sum();
        let mut rows: Vec<Vec<F>> = Vec::new();
        // λ_0 V(P, Q-1) = 0
        let v0 = w.vertical(big_p, big_q - 1);
        for col in 0..v0.ncols() {
            let mut row = zero_vector(unknowns);
            for i in 0..v0.nrows() {
                row[offs[0] + i] = v0.get(i, col).clone();
            }
            rows.push(row);
        }
        // λ_{i-1} H(P-i, Q+i-1) + λ_i V(P-i, Q+i-1) = 0
        for i in 1..r {
            if i > big_p {
                break;
            }
            let (pi, qi) = (big_p - i, big_q + i as i64 - 1);
            let h = w.horizontal(pi, qi);
            let v = w.vertical(pi, qi);
            for col in 0..w.cell_dim(pi, qi) {
                let mut row = zero_vector(unknowns);
                for t in 0..h.nrows() {
                    row[offs[i - 1] + t] = h.get(t, col).clone();
                }
                for t in 0..v.nrows() {
                    row[offs[i] + t] = v.get(t, col).clone();
                }
                rows.push(row);
            }
        }
        let mut row = zero_vector(unknowns);
        for (t, c) in y.iter().enumerate() {
            row[offs[0] + t] = c.clone();
        }
        rows.push(row);
        let mut rhs = zero_vector(rows.len());
        *rhs.last_mut().expect("pairing row") = F::one();
        let system = Matrix::from_rows(unknowns, rows);
        let lambda = system.solve(&rhs).ok_or(SpectralError::MissingWitness)?;
        Ok((0..r).map(|i| lambda[offs[i]..offs[i] + dims[i]].to_vec()).collect())
    }

    /// `d_r` in quotient coordinates, `E_r^{p,q} → E_r^{p+r,q-r+1}`.
    pub fn d_r_matrix(&self, r: usize, p: usize, q: i64) -> Option<Result<Matrix<F>, SpectralError>> {
        let (tp, tq) = Self::target(r, p, q);
        let src = self.page_cell(r, p, q)?;
        let dst = self.page_cell(r, tp, tq)?;
        let mut cols = Vec::with_capacity(src.dim());
        for rungs in &src.ladders {
            let y = self.image_of_ladder(r, p, q, rungs);
            match dst.quotient.project(&y) {
                Some(c) => cols.push(c),
                None => return Some(Err(SpectralError::Unprolongable { r, p, q })),
            }
        }
        Some(Ok(Matrix::from_columns(dst.dim(), &cols)))
    }

    /// Induced map on `E_r^{p,q}` of a cochain map into `other`'s window.
    pub fn map_cell(
        &self,
        g: &CochainMap<F>,
        other: &SpectralSequence<'_, F>,
        r: usize,
        p: usize,
        q: i64,
    ) -> Option<Result<Matrix<F>, SpectralError>> {
        let src = self.page_cell(r, p, q)?;
        let dst = other.page_cell(r, p, q)?;
        let m = g.cell(p, q);
        let mut cols = Vec::with_capacity(src.dim());
        for rungs in &src.ladders {
            match dst.quotient.project(&m.mul_vec(&rungs[0])) {
                Some(c) => cols.push(c),
                None => return Some(Err(SpectralError::Unprolongable { r, p, q })),
            }
        }
        Some(Ok(Matrix::from_columns(dst.dim(), &cols)))
    }

    /// Coordinates in `E_r^{p,q}` of a cochain in `Z_r`; `None` if the
    /// cell is unknown or the cochain is not in `Z_r`.
    pub fn class_of(&self, r: usize, p: usize, q: i64, v: &[F]) -> Option<Vec<F>> {
        self.page_cell(r, p, q)?.quotient.project(v)
    }
}

/// `dim Hom^q(H(L)^∧p, H(M))` for each nonzero cell of the window: the
/// Künneth prediction for `E_1`.
pub fn kunneth_dims<F: Field>(module: &ModuleStructure<F>, p_max: usize) -> BTreeMap<(usize, i64), usize> {
    let hl = CohomologyPresentation::new(module.algebra());
    let hm = complex_cohomology_basis(module);
    let mut out = BTreeMap::new();
    for p in 0..=p_max {
        if let Some(range) = crate::multilinear::q_range(module.algebra().basis(), module.space(), p) {
            for q in range {
                let d = hom_space_basis(hl.as_dgla().basis(), &hm, p, q).dim();
                if d > 0 {
                    out.insert((p, q), d);
                }
            }
        }
    }
    out
}

/// A graded basis with the cohomology dimensions of the module complex.
fn complex_cohomology_basis<F: Field>(module: &ModuleStructure<F>) -> crate::graded::GradedBasis {
    let n = module.dim();
    let b = module.space();
    let d = module.differential_matrix();
    let mut gens = Vec::new();
    for k in b.occurring_degrees() {
        let idx = b.indices_of_degree(k);
        let cols: Vec<Vec<F>> = idx.iter().map(|&i| d.column(i)).collect();
        let z = Matrix::from_columns(n, &cols).kernel().dim();
        let prev: Vec<Vec<F>> = b.indices_of_degree(k - 1).iter().map(|&i| d.column(i)).collect();
        let bdim = Subspace::span(n, prev).dim();
        for t in 0..z - bdim {
            gens.push(crate::graded::Generator {
                name: format!("c{k}_{t}"),
                degree: k,
            });
        }
    }
    crate::graded::GradedBasis::new(gens).expect("distinct names")
}

/// The Euler class of `f: L → M` in a window over `L` acting on `M` via `f`.
#[derive(Debug, Clone)]
pub struct EulerClass<F: Field = Rational> {
    /// The cochain `x ↦ |x| f(π x)` in `C^{1,0}`, where `π` maps `L` onto
    /// the span of the cohomology representatives.
    pub cochain: Vec<F>,
    /// Coordinates in `E_2^{1,0}`.
    pub coordinates: Vec<F>,
}

/// Builds the Euler cochain and checks `V Φ = 0` and `d_1 [Φ] = 0`.
pub fn euler_class<F: Field>(f: &DglaMorphism<F>, ss: &SpectralSequence<'_, F>) -> Result<EulerClass<F>, SpectralError> {
    let w = ss.window();
    assert!(w.p_max() >= 2, "Euler class needs columns up to 2");
    let l = f.source();
    let lb = l.basis();
    let hl = CohomologyPresentation::new(l);
    let proj = hl.class_projection();
    let reps = hl.representatives_matrix();
    let pi = reps.mul(&proj);
    let mut phi = zero_vector(w.cell_dim(1, 0));
    if let Some(cell) = w.cell(1, 0) {
        for j in 0..l.dim() {
            let Some(mi) = cell.monomial_index(&[j]) else {
                continue;
            };
            let image = f.apply(&pi.column(j));
            let deg = F::from_int(lb.degree(j));
            for (t, c) in image.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let idx = cell.index_of(mi, t).expect("degree-0 map");
                phi[idx] = deg.times(c);
            }
        }
    }
    if !is_zero_vector(&w.vertical(1, 0).mul_vec(&phi)) {
        return Err(SpectralError::EulerNotClosed("V Φ != 0"));
    }
    let y = w.horizontal(1, 0).mul_vec(&phi);
    if !w.vertical(2, -1).image().contains(&y) {
        return Err(SpectralError::EulerNotClosed("d_1 [Φ] != 0"));
    }
    let coordinates = ss
        .class_of(2, 1, 0, &phi)
        .ok_or(SpectralError::EulerNotClosed("Φ not in Z_2"))?;
    Ok(EulerClass {
        cochain: phi,
        coordinates,
    })
}

/// Result of following `e_f` through the pages.
#[derive(Debug, Clone)]
pub enum Obstruction<F: Field = Rational> {
    /// `d_r(e_f) ≠ 0` for the first such `r`.
    Found(Certificate<F>),
    /// `d_2(e_f) = … = d_{r_max}(e_f) = 0`.
    NoneUpTo(usize),
    /// The window only decides `d_k(e_f)` for `k <= last`.
    Undetermined { last: usize },
}

/// Computes `d_r(e_f)` for `r = 2, 3, …, r_max`, prolonging one ladder.
pub fn euler_obstruction<F: Field>(
    euler: &EulerClass<F>,
    ss: &SpectralSequence<'_, F>,
    r_max: usize,
) -> Obstruction<F> {
    let w = ss.window();
    let mut rungs = vec![euler.cochain.clone()];
    // the length-1 ladder extends by d_1 = 0 (checked in `euler_class`)
    for s in 1..=r_max {
        let (tp, tq) = (1 + s, 1 - s as i64);
        if tp > w.p_max() {
            return Obstruction::Undetermined { last: s - 1 };
        }
        let y = ss.image_of_ladder(s, 1, 0, &rungs);
        match ss.boundary_preimage(s, tp, tq, &y) {
            Some((c, b)) => {
                for (i, bi) in b.iter().enumerate() {
                    for (x, v) in rungs[i + 1].iter_mut().zip(bi) {
                        *x -= v;
                    }
                }
                rungs.push(c.into_iter().map(|x| -x).collect());
            }
            None => {
                if s == 1 {
                    unreachable!("d_1 of the Euler class was verified to vanish");
                }
                let witnesses = ss.dual_witness(s, tp, tq, &y).expect("duality");
                return Obstruction::Found(Certificate {
                    r: s,
                    start: (1, 0),
                    target: (tp, tq),
                    rungs,
                    witnesses,
                });
            }
        }
    }
    Obstruction::NoneUpTo(r_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::fixtures::{algebra_l, algebra_m};
    use crate::graded::{Dgla, GradedBasis};

    fn window(module: &ModuleStructure, p_max: usize) -> BicomplexWindow {
        BicomplexWindow::new(module, p_max).unwrap()
    }

    #[test]
    fn e1_of_m_over_itself() {
        let m = algebra_m();
        let module = ModuleStructure::adjoint_self(&m);
        let w = window(&module, 3);
        let ss = SpectralSequence::new(&w);
        assert_eq!(ss.page_cell(1, 1, 0).unwrap().dim(), 5);
        let kd = kunneth_dims(&module, 3);
        for ((p, q), c) in ss.page(1).cells {
            assert_eq!(c.unwrap().dim(), kd.get(&(p, q)).copied().unwrap_or(0), "cell ({p},{q})");
        }
    }

    #[test]
    fn zero_differentials_make_e1_the_cells() {
        let a = Dgla::<Rational>::abelian(GradedBasis::from_pairs(&[("a", 1), ("b", 2)]).unwrap());
        let module = ModuleStructure::adjoint_self(&a);
        let w = window(&module, 3);
        let ss = SpectralSequence::new(&w);
        for ((p, q), c) in ss.page(1).cells {
            assert_eq!(c.unwrap().dim(), w.cell_dim(p, q));
        }
        for r in 1..=2 {
            for ((p, q), _) in w.cells() {
                if let Some(Ok(m)) = ss.d_r_matrix(r, p, q) {
                    assert!(m.is_zero());
                }
            }
        }
    }

    #[test]
    fn l_is_obstructed_at_r2() {
        let (l, _) = algebra_l();
        let id = DglaMorphism::identity(&l);
        let module = ModuleStructure::adjoint(&id);
        let w = window(&module, 4);
        let ss = SpectralSequence::new(&w);
        let e = euler_class(&id, &ss).unwrap();
        match euler_obstruction(&e, &ss, 2) {
            Obstruction::Found(c) => {
                assert_eq!(c.r, 2);
                assert_eq!(c.target, (3, -1));
                c.verify(&w).unwrap();
            }
            other => panic!("expected an obstruction, got {other:?}"),
        }
        let d2 = ss.d_r_matrix(2, 1, 0);
        // target E_2^{3,-1} needs columns up to 4
        assert!(!d2.unwrap().unwrap().is_zero());
    }

    #[test]
    fn m_has_no_euler_obstruction() {
        let m = algebra_m();
        let id = DglaMorphism::identity(&m);
        let module = ModuleStructure::adjoint(&id);
        let w = window(&module, 6);
        let ss = SpectralSequence::new(&w);
        let e = euler_class(&id, &ss).unwrap();
        assert!(matches!(euler_obstruction(&e, &ss, 4), Obstruction::NoneUpTo(4)));
    }

    #[test]
    fn euler_class_of_identity_on_m() {
        let m = algebra_m();
        let id = DglaMorphism::identity(&m);
        let w = window(&ModuleStructure::adjoint(&id), 2);
        let ss = SpectralSequence::new(&w);
        let e = euler_class(&id, &ss).unwrap();
        let cell = w.cell(1, 0).unwrap();
        let at = |x: usize, t: usize| e.cochain[cell.index_of(cell.monomial_index(&[x]).unwrap(), t).unwrap()].clone();
        assert_eq!(at(0, 0), Rational::from_int(1));
        assert_eq!(at(1, 1), Rational::from_int(1));
        assert_eq!(at(4, 4), Rational::from_int(2));
        assert_eq!(at(2, 2), Rational::from_int(0));
        assert!(e.coordinates.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn zero_map_has_zero_euler_class() {
        let m = algebra_m();
        let z = Dgla::zero();
        let f = DglaMorphism::zero(&m, &z);
        let w = window(&ModuleStructure::adjoint(&f), 3);
        let ss = SpectralSequence::new(&w);
        let e = euler_class(&f, &ss).unwrap();
        assert!(e.coordinates.iter().all(|c| c.is_zero()));
        assert!(matches!(euler_obstruction(&e, &ss, 2), Obstruction::NoneUpTo(2)));
    }
}
