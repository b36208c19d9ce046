//! Truncated symmetric and universal enveloping algebras of a DG-Lie
//! algebra, the symmetrization map `e: S(L) → U(L)`, the derivations
//! `r_x` and the complement `H = e(⊕_{n≠1} S^n L)` of `i(L)`.
//!
//! Both algebras are truncated at word length `N`. The defining relations
//! `xy - (-1)^{|x||y|} yx - [x,y]` only shorten or sort words, so the
//! length-`N` part `F_N U(L)` is closed under rewriting and under `d`.
//! Symmetric products use `x⊙y = (-1)^{|x||y|} y⊙x`, so odd generators
//! square to zero in `S(L)`.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::graded::{CohomologyPresentation, Dgla};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{is_odd, koszul_odd, Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopingError {
    #[error("word of length {length} exceeds the truncation N = {n}")]
    Truncation { length: usize, n: usize },
    #[error("{0} is not homogeneous")]
    NotHomogeneous(&'static str),
}

/// A linear combination of words (generator index sequences).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinComb<F: Field = Rational> {
    terms: BTreeMap<Vec<usize>, F>,
}

impl<F: Field> LinComb<F> {
    pub fn zero() -> Self {
        LinComb { terms: BTreeMap::new() }
    }

    pub fn word(w: Vec<usize>) -> Self {
        let mut c = Self::zero();
        c.add_term(w, F::one());
        c
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn add_term(&mut self, w: Vec<usize>, c: F) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert_with(F::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, a: &F) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.times(a));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &F)> {
        self.terms.iter()
    }

    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    fn degree(&self, degs: &[i64]) -> Option<Option<i64>> {
        let mut ds = self.terms.keys().map(|w| w.iter().map(|&i| degs[i]).sum::<i64>());
        match ds.next() {
            None => Some(None),
            Some(d) => ds.all(|e| e == d).then_some(Some(d)),
        }
    }
}

/// Nondecreasing sequences, strictly increasing on odd generators, of
/// length at most `n`: bases of both `S^{≤n}(L)` and `F_n U(L)`.
pub fn pbw_monomials(degrees: &[i64], n: usize) -> Vec<Vec<usize>> {
    fn rec(degs: &[i64], n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == n {
            return;
        }
        for i in start..degs.len() {
            cur.push(i);
            let next = if is_odd(degs[i]) { i + 1 } else { i };
            rec(degs, n, next, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(degrees, n, 0, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// `dim S^{≤n}(V)^k` from the degrees of a basis of `V`, by expanding
/// `Π_even 1/(1-t^{|v|}s) · Π_odd (1+t^{|v|}s)` up to `s^n`.
pub fn symmetric_dims(degrees: &[i64], n: usize) -> BTreeMap<i64, usize> {
    // (length, degree) -> count
    let mut series: BTreeMap<(usize, i64), usize> = BTreeMap::from([((0, 0), 1)]);
    for &d in degrees {
        let max_power = if is_odd(d) { 1 } else { n };
        let mut next: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        for (&(len, deg), &c) in &series {
            for k in 0..=max_power {
                if len + k > n {
                    break;
                }
                *next.entry((len + k, deg + k as i64 * d)).or_default() += c;
            }
        }
        series = next;
    }
    let mut out = BTreeMap::new();
    for ((_, deg), c) in series {
        *out.entry(deg).or_default() += c;
    }
    out
}

/// `F_N U(L)` with its PBW basis.
#[derive(Debug, Clone)]
pub struct TruncatedUea<'a, F: Field = Rational> {
    algebra: &'a Dgla<F>,
    n: usize,
    degrees: Vec<i64>,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl<'a, F: Field> TruncatedUea<'a, F> {
    pub fn new(algebra: &'a Dgla<F>, n: usize) -> Self {
        let degrees = algebra.basis().degrees();
        let basis = pbw_monomials(&degrees, n);
        let index = basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        TruncatedUea {
            algebra,
            n,
            degrees,
            basis,
            index,
        }
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &Dgla<F> {
        self.algebra
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.degrees[i]).sum()
    }

    /// Positions `k` where `w[k] w[k+1]` must be rewritten.
    fn reducible_positions(&self, w: &[usize]) -> Vec<usize> {
        (0..w.len().saturating_sub(1))
            .filter(|&k| w[k] > w[k + 1] || (w[k] == w[k + 1] && is_odd(self.degrees[w[k]])))
            .collect()
    }

    /// One rewrite at position `k`.
    fn rewrite(&self, w: &[usize], k: usize) -> Vec<(Vec<usize>, F)> {
        let (y, x) = (w[k], w[k + 1]);
        let mut out = Vec::new();
        let splice = |middle: &[usize]| {
            let mut v = w[..k].to_vec();
            v.extend_from_slice(middle);
            v.extend_from_slice(&w[k + 2..]);
            v
        };
        if y == x {
            // xx = ½[x,x] for odd x
            let half = F::one() / F::from_int(2);
            for (g, c) in self.algebra.bracket_basis(x, x).iter().enumerate() {
                if !c.is_zero() {
                    out.push((splice(&[g]), c.times(&half)));
                }
            }
        } else {
            // yx = (-1)^{|x||y|} xy + [y,x]
            out.push((splice(&[x, y]), F::sign(koszul_odd(self.degrees[x], self.degrees[y]))));
            for (g, c) in self.algebra.bracket_basis(y, x).iter().enumerate() {
                if !c.is_zero() {
                    out.push((splice(&[g]), c.clone()));
                }
            }
        }
        out
    }

    /// Normal form, always rewriting the leftmost reducible pair.
    pub fn normal_form(&self, a: &LinComb<F>) -> Result<LinComb<F>, EnvelopingError> {
        self.normal_form_with(a, |ps| ps[0])
    }

    /// Normal form with `choose` picking which reducible pair to rewrite.
    pub fn normal_form_with(
        &self,
        a: &LinComb<F>,
        mut choose: impl FnMut(&[usize]) -> usize,
    ) -> Result<LinComb<F>, EnvelopingError> {
        let length = a.max_length();
        if length > self.n {
            return Err(EnvelopingError::Truncation { length, n: self.n });
        }
        let mut out = LinComb::zero();
        let mut pending: Vec<(Vec<usize>, F)> = a.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        while let Some((w, c)) = pending.pop() {
            let ps = self.reducible_positions(&w);
            if ps.is_empty() {
                out.add_term(w, c);
                continue;
            }
            let k = choose(&ps);
            for (v, e) in self.rewrite(&w, k) {
                pending.push((v, e.times(&c)));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, a: &LinComb<F>, b: &LinComb<F>) -> Result<LinComb<F>, EnvelopingError> {
        let mut prod = LinComb::zero();
        for (u, c) in &a.terms {
            for (v, e) in &b.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                prod.add_term(w, c.times(e));
            }
        }
        self.normal_form(&prod)
    }

    /// `[a, b] = ab - (-1)^{|a||b|} ba` for homogeneous `a`, `b`.
    pub fn commutator(&self, a: &LinComb<F>, b: &LinComb<F>) -> Result<LinComb<F>, EnvelopingError> {
        let da = a.degree(&self.degrees).ok_or(EnvelopingError::NotHomogeneous("left factor"))?;
        let db = b.degree(&self.degrees).ok_or(EnvelopingError::NotHomogeneous("right factor"))?;
        let (Some(da), Some(db)) = (da, db) else {
            return Ok(LinComb::zero());
        };
        let mut out = self.mul(a, b)?;
        out.add_scaled(&self.mul(b, a)?, &-F::sign(koszul_odd(da, db)));
        Ok(out)
    }

    /// `i(v)` for `v ∈ L`.
    pub fn include(&self, v: &[F]) -> LinComb<F> {
        let mut out = LinComb::zero();
        for (g, c) in v.iter().enumerate() {
            out.add_term(vec![g], c.clone());
        }
        out
    }

    /// The derivation extending `d`, applied word by word.
    pub fn differential(&self, a: &LinComb<F>) -> Result<LinComb<F>, EnvelopingError> {
        let mut out = LinComb::zero();
        for (w, c) in &a.terms {
            let mut sign_odd = false;
            for (k, &g) in w.iter().enumerate() {
                let s = F::sign(sign_odd);
                for (h, e) in self.algebra.d_basis(g).iter().enumerate() {
                    if e.is_zero() {
                        continue;
                    }
                    let mut v = w.clone();
                    v[k] = h;
                    out.add_term(v, e.times(c).times(&s));
                }
                sign_odd ^= is_odd(self.degrees[g]);
            }
        }
        self.normal_form(&out)
    }

    /// Coordinates of a normal form in the PBW basis.
    pub fn coordinates(&self, a: &LinComb<F>) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        for (w, c) in &a.terms {
            let i = *self.index.get(w).expect("normal form inside the truncation");
            v[i] = c.clone();
        }
        v
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for w in &self.basis {
            *out.entry(self.word_degree(w)).or_default() += 1;
        }
        out
    }

    /// `dim F_N U^k` as the rank of all words of length `≤ N` and degree
    /// `k`, reduced to normal form.
    pub fn spanned_dims(&self) -> BTreeMap<i64, usize> {
        let g = self.degrees.len();
        let mut by_degree: BTreeMap<i64, Vec<Vec<F>>> = BTreeMap::new();
        for len in 0..=self.n {
            for w in (0..len).map(|_| 0..g).multi_cartesian_product() {
                let nf = self.normal_form(&LinComb::word(w.clone())).expect("within truncation");
                by_degree.entry(self.word_degree(&w)).or_default().push(self.coordinates(&nf));
            }
            if len == 0 {
                by_degree.entry(0).or_default().push(self.coordinates(&LinComb::one()));
            }
        }
        by_degree
            .into_iter()
            .map(|(k, vs)| (k, Subspace::span(self.dim(), vs).dim()))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// `d` on `F_N U` in the PBW basis.
    pub fn differential_matrix(&self) -> Matrix<F> {
        let cols: Vec<Vec<F>> = self
            .basis
            .iter()
            .map(|w| self.coordinates(&self.differential(&LinComb::word(w.clone())).expect("length preserved")))
            .collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    /// Cohomology dimensions of `(F_N U, d)`.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        let d = self.differential_matrix();
        let mut out = BTreeMap::new();
        let degrees: Vec<i64> = self.basis.iter().map(|w| self.word_degree(w)).collect();
        let mut ks: Vec<i64> = degrees.clone();
        ks.sort();
        ks.dedup();
        for k in ks {
            let idx: Vec<usize> = (0..self.dim()).filter(|&i| degrees[i] == k).collect();
            let cols: Vec<Vec<F>> = idx.iter().map(|&i| d.column(i)).collect();
            let z = Matrix::from_columns(self.dim(), &cols).kernel().dim();
            let prev: Vec<Vec<F>> = (0..self.dim()).filter(|&i| degrees[i] == k - 1).map(|i| d.column(i)).collect();
            let b = Subspace::span(self.dim(), prev).dim();
            if z > b {
                out.insert(k, z - b);
            }
        }
        out
    }
}

/// `S^{≤N}(L)`, elements as [`LinComb`]s of sorted monomials.
#[derive(Debug, Clone)]
pub struct TruncatedSymmetric<'a, F: Field = Rational> {
    algebra: &'a Dgla<F>,
    n: usize,
    degrees: Vec<i64>,
}

impl<'a, F: Field> TruncatedSymmetric<'a, F> {
    pub fn new(algebra: &'a Dgla<F>, n: usize) -> Self {
        TruncatedSymmetric {
            algebra,
            n,
            degrees: algebra.basis().degrees(),
        }
    }

    pub fn basis(&self) -> Vec<Vec<usize>> {
        pbw_monomials(&self.degrees, self.n)
    }

    /// Sorts a product of generators; `None` when an odd generator repeats.
    pub fn normalize(&self, factors: &[usize]) -> Option<(bool, Vec<usize>)> {
        let mut v = factors.to_vec();
        let mut neg = false;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                neg ^= koszul_odd(self.degrees[v[j - 1]], self.degrees[v[j]]);
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1] && is_odd(self.degrees[w[0]])) {
            return None;
        }
        Some((neg, v))
    }

    fn push_normalized(&self, out: &mut LinComb<F>, factors: &[usize], c: F) {
        if let Some((neg, v)) = self.normalize(factors) {
            out.add_term(v, if neg { -c } else { c });
        }
    }

    /// Sign `ε(σ)` with `x_1⊙…⊙x_n = ε(σ) x_{σ(1)}⊙…⊙x_{σ(n)}`.
    pub fn koszul_sign(&self, factors: &[usize], sigma: &[usize]) -> bool {
        // bubble the permuted positions back into order
        let mut pos = sigma.to_vec();
        let mut neg = false;
        for i in 1..pos.len() {
            let mut j = i;
            while j > 0 && pos[j - 1] > pos[j] {
                neg ^= koszul_odd(self.degrees[factors[pos[j - 1]]], self.degrees[factors[pos[j]]]);
                pos.swap(j - 1, j);
                j -= 1;
            }
        }
        neg
    }

    /// The derivation extending `d`.
    pub fn differential(&self, z: &LinComb<F>) -> LinComb<F> {
        let mut out = LinComb::zero();
        for (w, c) in z.terms() {
            let mut sign_odd = false;
            for (k, &g) in w.iter().enumerate() {
                for (h, e) in self.algebra.d_basis(g).iter().enumerate() {
                    if e.is_zero() {
                        continue;
                    }
                    let mut v = w.clone();
                    v[k] = h;
                    self.push_normalized(&mut out, &v, e.times(c).times(&F::sign(sign_odd)));
                }
                sign_odd ^= is_odd(self.degrees[g]);
            }
        }
        out
    }

    /// `r_x`, the derivation with `r_x(y) = [y, x]`, for homogeneous `x`:
    /// `r_x(y_1⊙…⊙y_n) = Σ_i (-1)^{|x|(|y_{i+1}|+…+|y_n|)} y_1⊙…⊙[y_i,x]⊙…⊙y_n`.
    pub fn r_derivation(&self, x: &[F], z: &LinComb<F>) -> Result<LinComb<F>, EnvelopingError> {
        let dx = self
            .algebra
            .basis()
            .homogeneous_degree(x)
            .map_err(|_| EnvelopingError::NotHomogeneous("x"))?;
        let Some(dx) = dx else {
            return Ok(LinComb::zero());
        };
        let mut out = LinComb::zero();
        for (w, c) in z.terms() {
            for (k, &g) in w.iter().enumerate() {
                let after: i64 = w[k + 1..].iter().map(|&i| self.degrees[i]).sum();
                let s = F::sign(koszul_odd(dx, after));
                let b = self.algebra.bracket(&self.algebra.generator(g), x);
                for (h, e) in b.iter().enumerate() {
                    if e.is_zero() {
                        continue;
                    }
                    let mut v = w.clone();
                    v[k] = h;
                    self.push_normalized(&mut out, &v, e.times(c).times(&s));
                }
            }
        }
        Ok(out)
    }
}

fn factorial<F: Field>(n: usize) -> F {
    (1..=n as i64).fold(F::one(), |acc, k| acc.times(&F::from_int(k)))
}

/// `e(x_1⊙…⊙x_n) = (1/n!) Σ_σ ε(σ) x_{σ(1)}⋯x_{σ(n)}` in PBW normal form.
pub fn pbw_map<F: Field>(
    s: &TruncatedSymmetric<'_, F>,
    u: &TruncatedUea<'_, F>,
    z: &LinComb<F>,
) -> Result<LinComb<F>, EnvelopingError> {
    let mut words = LinComb::zero();
    for (w, c) in z.terms() {
        let n = w.len();
        if n > u.truncation() {
            return Err(EnvelopingError::Truncation { length: n, n: u.truncation() });
        }
        let scale = c.clone() / factorial::<F>(n);
        for sigma in (0..n).permutations(n) {
            let word: Vec<usize> = sigma.iter().map(|&i| w[i]).collect();
            let sign = F::sign(s.koszul_sign(w, &sigma));
            words.add_term(word, sign.times(&scale));
        }
    }
    u.normal_form(&words)
}

/// `e` as a square matrix from the symmetric basis to the PBW basis.
pub fn pbw_matrix<F: Field>(s: &TruncatedSymmetric<'_, F>, u: &TruncatedUea<'_, F>) -> Matrix<F> {
    let cols: Vec<Vec<F>> = s
        .basis()
        .into_iter()
        .map(|w| u.coordinates(&pbw_map(s, u, &LinComb::word(w)).expect("within truncation")))
        .collect();
    Matrix::from_columns(u.dim(), &cols)
}

/// Outcome of [`complement_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementReport {
    pub dim_h: usize,
    /// `F_N U = i(L) ⊕ H` (by rank).
    pub direct_sum: bool,
    /// `[h, i(x)] ∈ H` for `h = e(z)`, `z` of length `≤ N-1`.
    pub submodule: bool,
    pub failures: Vec<String>,
}

/// Checks the decomposition `U = i(L) ⊕ H` with `H = e(⊕_{n≠1} S^n L)`.
pub fn complement_check<F: Field>(l: &Dgla<F>, n: usize) -> ComplementReport {
    let s = TruncatedSymmetric::new(l, n);
    let u = TruncatedUea::new(l, n);
    let sym = s.basis();
    let h_gens: Vec<&Vec<usize>> = sym.iter().filter(|w| w.len() != 1).collect();
    let h_vecs: Vec<Vec<F>> = h_gens
        .iter()
        .map(|w| u.coordinates(&pbw_map(&s, &u, &LinComb::word((*w).clone())).expect("within truncation")))
        .collect();
    let h = Subspace::span(u.dim(), h_vecs);
    let mut all: Vec<Vec<F>> = h.basis().to_vec();
    for g in 0..l.dim() {
        all.push(u.coordinates(&LinComb::word(vec![g])));
    }
    let direct_sum = h.dim() == h_gens.len() && Subspace::span(u.dim(), all).dim() == u.dim() && h.dim() + l.dim() == u.dim();
    let mut failures = Vec::new();
    for w in h_gens.iter().filter(|w| w.len() < n) {
        let ez = pbw_map(&s, &u, &LinComb::word((*w).clone())).expect("within truncation");
        for g in 0..l.dim() {
            let c = u.commutator(&ez, &LinComb::word(vec![g])).expect("homogeneous");
            if !h.contains(&u.coordinates(&c)) {
                failures.push(format!("[e({w:?}), {}] not in H", l.basis().name(g)));
            }
        }
    }
    ComplementReport {
        dim_h: h.dim(),
        direct_sum,
        submodule: failures.is_empty(),
        failures,
    }
}

/// Summary of the checks on `F_N U(L)` for one algebra and truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PbwReport {
    pub truncation: usize,
    pub uea_dims: BTreeMap<i64, usize>,
    pub symmetric_dims: BTreeMap<i64, usize>,
    pub e_bijective: bool,
    pub e_commutes_with_d: bool,
    pub derivation_identity: bool,
    pub complement: ComplementReport,
    pub uea_cohomology: BTreeMap<i64, usize>,
    pub symmetric_cohomology: BTreeMap<i64, usize>,
    pub failures: Vec<String>,
}

impl PbwReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every check: dimension identities, `e` bijective and a chain map,
/// `e(r_x z) = [e(z), i(x)]`, the complement, and cohomology dimensions.
pub fn pbw_report<F: Field>(l: &Dgla<F>, n: usize) -> PbwReport {
    let s = TruncatedSymmetric::new(l, n);
    let u = TruncatedUea::new(l, n);
    let mut failures = Vec::new();
    let uea_dims = u.spanned_dims();
    let sym_dims = symmetric_dims(&l.basis().degrees(), n);
    if uea_dims != sym_dims {
        failures.push(format!("dim F_N U {uea_dims:?} != dim S^<=N {sym_dims:?}"));
    }
    let e = pbw_matrix(&s, &u);
    let e_bijective = e.nrows() == e.ncols() && e.rank() == e.nrows();
    if !e_bijective {
        failures.push("e is not bijective".into());
    }
    let mut e_commutes_with_d = true;
    let mut derivation_identity = true;
    for w in s.basis() {
        let z = LinComb::word(w.clone());
        let ez = pbw_map(&s, &u, &z).expect("within truncation");
        let lhs = pbw_map(&s, &u, &s.differential(&z)).expect("length preserved");
        if lhs != u.differential(&ez).expect("length preserved") {
            e_commutes_with_d = false;
            failures.push(format!("e(dz) != d e(z) for z = {w:?}"));
        }
        if w.len() >= n {
            continue;
        }
        for g in 0..l.dim() {
            let x = l.generator(g);
            let rz = s.r_derivation(&x, &z).expect("generator is homogeneous");
            let lhs = pbw_map(&s, &u, &rz).expect("length preserved");
            let rhs = u.commutator(&ez, &u.include(&x)).expect("homogeneous");
            if lhs != rhs {
                derivation_identity = false;
                failures.push(format!("e(r_x z) != [e(z), x] for z = {w:?}, x = {}", l.basis().name(g)));
            }
        }
    }
    let complement = complement_check(l, n);
    if !complement.direct_sum {
        failures.push("i(L) + H is not a direct sum equal to F_N U".into());
    }
    failures.extend(complement.failures.iter().cloned());
    let uea_cohomology = u.cohomology_dims();
    let h = CohomologyPresentation::new(l);
    let symmetric_cohomology: BTreeMap<i64, usize> = symmetric_dims(&h.as_dgla().basis().degrees(), n)
        .into_iter()
        .filter(|&(_, d)| d > 0)
        .collect();
    if uea_cohomology != symmetric_cohomology {
        failures.push(format!("H(F_N U) {uea_cohomology:?} != S^<=N(H) {symmetric_cohomology:?}"));
    }
    PbwReport {
        truncation: n,
        uea_dims,
        symmetric_dims: sym_dims,
        e_bijective,
        e_commutes_with_d,
        derivation_identity,
        complement,
        uea_cohomology,
        symmetric_cohomology,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::algebra_m;
    use crate::graded::GradedBasis;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rewriting_examples() {
        let m = algebra_m();
        let u = TruncatedUea::new(&m, 3);
        let (e1, e2, e3, h2) = (0, 1, 2, 4);
        let nf = u.normal_form(&LinComb::word(vec![e3, e2])).unwrap();
        let mut expect = LinComb::word(vec![e2, e3]);
        expect = {
            let mut x = LinComb::zero();
            x.add_scaled(&expect, &q(-1, 1));
            x.add_term(vec![h2], q(1, 1));
            x
        };
        assert_eq!(nf, expect);
        let sq = u.normal_form(&LinComb::word(vec![e1, e1])).unwrap();
        let mut half_h2 = LinComb::zero();
        half_h2.add_term(vec![h2], q(-1, 2));
        assert_eq!(sq, half_h2);
        let sorted = LinComb::word(vec![e1, e2, h2]);
        assert_eq!(u.normal_form(&sorted).unwrap(), sorted);
        assert!(matches!(
            u.normal_form(&LinComb::word(vec![0, 1, 2, 3])),
            Err(EnvelopingError::Truncation { length: 4, n: 3 })
        ));
    }

    #[test]
    fn pbw_map_small_cases() {
        let m = algebra_m();
        let s = TruncatedSymmetric::new(&m, 2);
        let u = TruncatedUea::new(&m, 2);
        let x = LinComb::word(vec![3]);
        assert_eq!(pbw_map(&s, &u, &x).unwrap(), x);
        // e(e1⊙e2) = ½(e1e2 - e2e1) = e1e2 since [e2,e1] = 0
        assert_eq!(pbw_map(&s, &u, &LinComb::word(vec![0, 1])).unwrap(), LinComb::word(vec![0, 1]));
        assert_eq!(s.normalize(&[0, 0]), None);
        let a = Dgla::<Rational>::abelian(GradedBasis::from_pairs(&[("x", 0), ("y", 2)]).unwrap());
        let (sa, ua) = (TruncatedSymmetric::new(&a, 2), TruncatedUea::new(&a, 2));
        assert_eq!(pbw_map(&sa, &ua, &LinComb::word(vec![0, 1])).unwrap(), LinComb::word(vec![0, 1]));
    }

    #[test]
    fn r_derivation_examples() {
        let m = algebra_m();
        let s = TruncatedSymmetric::new(&m, 3);
        assert!(s.r_derivation(&m.generator(2), &LinComb::one()).unwrap().is_zero());
        let y = s.r_derivation(&m.generator(2), &LinComb::word(vec![1])).unwrap();
        assert_eq!(y, LinComb::word(vec![4]));
        // r_{e3}(e2⊙e2) vanishes: e2 is odd, so e2⊙e2 = 0
        // r_{e3}(e2⊙h1) = h2⊙h1 (no bracket of h1 with e3)
        let z = s.r_derivation(&m.generator(2), &LinComb::word(vec![1, 3])).unwrap();
        assert_eq!(z, LinComb::word(vec![3, 4]));
    }

    #[test]
    fn symmetric_dimension_formula() {
        // three odd generators of degree 1 and two even of degree 2
        let d = symmetric_dims(&[1, 1, 1, 2, 2], 2);
        assert_eq!(d.get(&0), Some(&1));
        assert_eq!(d.get(&1), Some(&3));
        assert_eq!(d.get(&2), Some(&(3 + 2)));
        assert_eq!(d.get(&3), Some(&6));
        assert_eq!(d.get(&4), Some(&3));
    }

    #[test]
    fn m_passes_all_checks() {
        let m = algebra_m();
        for n in 1..=3 {
            let r = pbw_report(&m, n);
            assert!(r.passed(), "N = {n}: {:?}", r.failures);
        }
    }

    #[test]
    fn confluence_on_random_orders() {
        use rand::{Rng, SeedableRng};
        let m = algebra_m();
        let u = TruncatedUea::new(&m, 4);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let w: Vec<usize> = (0..rng.gen_range(0..=4)).map(|_| rng.gen_range(0..5)).collect();
            let a = LinComb::word(w);
            let left = u.normal_form(&a).unwrap();
            let random = u.normal_form_with(&a, |ps| ps[rng.gen_range(0..ps.len())]).unwrap();
            assert_eq!(left, random);
        }
    }

    #[test]
    fn abelian_complement_is_everything_but_generators() {
        let a = Dgla::<Rational>::abelian(GradedBasis::from_pairs(&[("x", 1), ("y", 2)]).unwrap());
        let c = complement_check(&a, 3);
        assert!(c.direct_sum && c.submodule);
        assert_eq!(c.dim_h, TruncatedUea::new(&a, 3).dim() - 2);
        let trivial = complement_check(&a, 1);
        assert_eq!(trivial.dim_h, 1);
    }
}
