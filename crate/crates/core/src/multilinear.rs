//! Graded exterior powers and the Hom spaces `Hom^q(L^∧p, M)`.
//!
//! The exterior convention is `x∧y = -(-1)^{|x||y|} y∧x`: odd generators
//! may repeat, even ones may not. Monomials are stored in nondecreasing
//! generator order and all signs are relative to that normal form.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::graded::GradedBasis;
use crate::scalar::{is_odd, koszul_odd};

/// A canonical wedge monomial `v_{i_1} ∧ … ∧ v_{i_p}`, `i_1 <= … <= i_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WedgeMonomial {
    pub factors: Vec<usize>,
}

impl WedgeMonomial {
    pub fn empty() -> Self {
        WedgeMonomial { factors: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self, basis: &GradedBasis) -> i64 {
        self.factors.iter().map(|&i| basis.degree(i)).sum()
    }

    pub fn format(&self, basis: &GradedBasis) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|&i| basis.name(i))
            .collect::<Vec<_>>()
            .join("^")
    }
}

/// Sign of the transposition `x∧y → y∧x`: `true` means `-1`.
pub fn swap_is_negative(a: i64, b: i64) -> bool {
    // -(-1)^{ab} is -1 exactly when ab is even
    !koszul_odd(a, b)
}

/// Sorts `factors` into canonical order. Returns `None` when an even
/// generator repeats (the monomial vanishes), otherwise whether the sign is
/// negative together with the monomial.
pub fn normalize_wedge(basis: &GradedBasis, factors: &[usize]) -> Option<(bool, WedgeMonomial)> {
    let mut v = factors.to_vec();
    let mut negative = false;
    // insertion sort by adjacent transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if swap_is_negative(basis.degree(v[j - 1]), basis.degree(v[j])) {
                negative = !negative;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1] && !is_odd(basis.degree(w[0]))) {
        return None;
    }
    Some((negative, WedgeMonomial { factors: v }))
}

/// `χ_i`: `x_1∧…∧x_p = χ_i x_1∧…x̂_i…∧x_p∧x_i` (0-based `i`); `true` is `-1`.
pub fn chi_sign(degrees: &[i64], i: usize) -> bool {
    degrees[i + 1..]
        .iter()
        .fold(false, |acc, &b| acc ^ swap_is_negative(degrees[i], b))
}

/// `χ_{i,j}` for `i < j`: `x_1∧…∧x_p = χ_{i,j} (…x̂_i…x̂_j…)∧x_i∧x_j`.
pub fn chi_sign_pair(degrees: &[i64], i: usize, j: usize) -> bool {
    assert!(i < j);
    // move x_j to the end, then x_i to the slot before it
    let mut neg = chi_sign(degrees, j);
    for (k, &b) in degrees.iter().enumerate().skip(i + 1) {
        if k != j {
            neg ^= swap_is_negative(degrees[i], b);
        }
    }
    neg
}

/// Canonical monomials with `p` factors and degree in `window`, in
/// lexicographic order.
pub fn wedge_basis(basis: &GradedBasis, p: usize, window: RangeInclusive<i64>) -> Vec<WedgeMonomial> {
    let n = basis.len();
    let mut out = Vec::new();
    if p == 0 {
        if window.contains(&0) {
            out.push(WedgeMonomial::empty());
        }
        return out;
    }
    if n == 0 {
        return out;
    }
    let degs = basis.degrees();
    let (lo, hi) = (degs.iter().copied().min().unwrap_or(0), degs.iter().copied().max().unwrap_or(0));
    let mut current = Vec::with_capacity(p);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        degs: &[i64],
        p: usize,
        start: usize,
        sum: i64,
        bounds: (i64, i64),
        window: &RangeInclusive<i64>,
        current: &mut Vec<usize>,
        out: &mut Vec<WedgeMonomial>,
    ) {
        let left = (p - current.len()) as i64;
        if left == 0 {
            if window.contains(&sum) {
                out.push(WedgeMonomial {
                    factors: current.clone(),
                });
            }
            return;
        }
        // prune on attainable degree range
        if sum + left * bounds.1 < *window.start() || sum + left * bounds.0 > *window.end() {
            return;
        }
        for i in start..degs.len() {
            let next = if is_odd(degs[i]) { i } else { i + 1 };
            current.push(i);
            rec(degs, p, next, sum + degs[i], bounds, window, current, out);
            current.pop();
        }
    }
    rec(&degs, p, 0, 0, (lo, hi), &window, &mut current, &mut out);
    out
}

/// Basis element of `Hom(L^∧p, M)`: the map sending `monomial` to
/// `target` and every other canonical monomial to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HomBasisElement {
    pub monomial: WedgeMonomial,
    pub target: usize,
}

/// Basis of `Hom^q(L^∧p, M)` together with index lookups.
#[derive(Debug, Clone, PartialEq)]
pub struct HomSpace {
    pub p: usize,
    pub q: i64,
    pub monomials: Vec<WedgeMonomial>,
    pub elements: Vec<HomBasisElement>,
    monomial_index: HashMap<Vec<usize>, usize>,
    index: HashMap<(usize, usize), usize>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn monomial_index(&self, factors: &[usize]) -> Option<usize> {
        self.monomial_index.get(factors).copied()
    }

    /// Index of the element (monomial number, target generator).
    pub fn index_of(&self, monomial: usize, target: usize) -> Option<usize> {
        self.index.get(&(monomial, target)).copied()
    }
}

/// Degrees of `M` as an inclusive range, if `M` is nonzero.
fn degree_range(basis: &GradedBasis) -> Option<(i64, i64)> {
    let d = basis.degrees();
    Some((*d.iter().min()?, *d.iter().max()?))
}

/// Range of `q` for which `Hom^q(L^∧p, M)` can be nonzero.
pub fn q_range(l: &GradedBasis, m: &GradedBasis, p: usize) -> Option<RangeInclusive<i64>> {
    let (mlo, mhi) = degree_range(m)?;
    if p == 0 {
        return Some(mlo..=mhi);
    }
    let (llo, lhi) = degree_range(l)?;
    let (nlo, nhi) = (llo * p as i64, lhi * p as i64);
    Some(mlo - nhi..=mhi - nlo)
}

/// One element per pair (monomial of degree `n`, target of degree `n + q`).
pub fn hom_space_basis(l: &GradedBasis, m: &GradedBasis, p: usize, q: i64) -> HomSpace {
    let mut space = HomSpace {
        p,
        q,
        monomials: Vec::new(),
        elements: Vec::new(),
        monomial_index: HashMap::new(),
        index: HashMap::new(),
    };
    let Some((mlo, mhi)) = degree_range(m) else {
        return space;
    };
    let candidates = wedge_basis(l, p, mlo - q..=mhi - q);
    for mono in candidates {
        let n = mono.degree(l);
        let targets = m.indices_of_degree(n + q);
        if targets.is_empty() {
            continue;
        }
        let mi = space.monomials.len();
        space.monomial_index.insert(mono.factors.clone(), mi);
        for t in targets {
            space.index.insert((mi, t), space.elements.len());
            space.elements.push(HomBasisElement {
                monomial: mono.clone(),
                target: t,
            });
        }
        space.monomials.push(mono);
    }
    space
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{algebra_l, algebra_m};
    use crate::graded::CohomologyPresentation;

    #[test]
    fn wedge_basis_parity_rule() {
        let m = algebra_m();
        let b = m.basis();
        let two = wedge_basis(b, 2, 2..=4);
        assert!(two.contains(&WedgeMonomial { factors: vec![0, 0] }));
        assert!(two.contains(&WedgeMonomial { factors: vec![0, 1] }));
        assert!(!two.contains(&WedgeMonomial { factors: vec![3, 3] }));
        assert!(two.contains(&WedgeMonomial { factors: vec![3, 4] }));
        assert_eq!(wedge_basis(b, 0, 0..=0), vec![WedgeMonomial::empty()]);
    }

    #[test]
    fn cubes_in_degree_three() {
        // L has two degree-1 generators (m, e3), so four cubes
        let (l, _) = algebra_l();
        assert_eq!(wedge_basis(l.basis(), 3, 3..=3).len(), 4);
        // H(L) has one class in degree 1 and one in degree 2
        let h = CohomologyPresentation::new(&l);
        assert_eq!(
            wedge_basis(h.as_dgla().basis(), 3, 3..=3),
            vec![WedgeMonomial { factors: vec![0, 0, 0] }]
        );
    }

    #[test]
    fn normalize_signs() {
        let odd = GradedBasis::from_pairs(&[("x", 1), ("y", 1)]).unwrap();
        assert_eq!(normalize_wedge(&odd, &[1, 0]), Some((false, WedgeMonomial { factors: vec![0, 1] })));
        let even = GradedBasis::from_pairs(&[("x", 0), ("y", 2)]).unwrap();
        assert_eq!(normalize_wedge(&even, &[1, 0]), Some((true, WedgeMonomial { factors: vec![0, 1] })));
        assert_eq!(normalize_wedge(&even, &[1, 1]), None);
        let m = algebra_m();
        assert_eq!(normalize_wedge(m.basis(), &[3, 3]), None);
        let canon = [0, 0, 1, 3];
        assert_eq!(
            normalize_wedge(m.basis(), &canon),
            Some((false, WedgeMonomial { factors: canon.to_vec() }))
        );
    }

    #[test]
    fn chi_examples() {
        assert!(!chi_sign(&[1, 1, 1], 0));
        assert!(!chi_sign(&[1, 1, 1], 1));
        assert!(chi_sign(&[0, 0], 0));
        assert!(chi_sign(&[1, 0, 1], 0));
    }

    #[test]
    fn chi_matches_normalization() {
        let b = GradedBasis::from_pairs(&[("a", 1), ("b", 0), ("c", 1), ("d", 2), ("e", 3)]).unwrap();
        let degs = b.degrees();
        let all: Vec<usize> = (0..5).collect();
        for i in 0..5 {
            let mut moved: Vec<usize> = all.iter().copied().filter(|&k| k != i).collect();
            moved.push(i);
            let (neg, _) = normalize_wedge(&b, &moved).unwrap();
            assert_eq!(neg, chi_sign(&degs, i));
            for j in i + 1..5 {
                let mut moved: Vec<usize> = all.iter().copied().filter(|&k| k != i && k != j).collect();
                moved.push(i);
                moved.push(j);
                let (neg, _) = normalize_wedge(&b, &moved).unwrap();
                assert_eq!(neg, chi_sign_pair(&degs, i, j), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn hom_space_dimensions() {
        let m = algebra_m();
        let (l, _) = algebra_l();
        let h0 = hom_space_basis(l.basis(), m.basis(), 0, 1);
        assert_eq!(h0.dim(), 3);
        assert_eq!(hom_space_basis(l.basis(), m.basis(), 1, 0).dim(), 10);
        assert_eq!(hom_space_basis(l.basis(), m.basis(), 1, -2).dim(), 0);
        assert_eq!(q_range(l.basis(), m.basis(), 1), Some(-1..=1));
    }
}
