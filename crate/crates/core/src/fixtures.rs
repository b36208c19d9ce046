//! Named example algebras and random generators of valid DGLAs.
//!
//! `algebra_m` is the five-dimensional algebra with generators `e1, e2, e3`
//! in degree 1 and `h1, h2` in degree 2, `d e3 = h1`, and brackets
//! `[e1,e1] = -h2`, `[e2,e2] = h2 - h1`, `[e2,e3] = h2`. `algebra_l` is its
//! subalgebra spanned by `m = e1 + e2`, `e3`, `h1`, `h2`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graded::{direct_sum, subalgebra, Dgla, DglaMorphism, Generator, GradedBasis};
use crate::group::FiniteAction;
use crate::linalg::{zero_vector, Matrix};
use crate::scalar::{Field, Rational};

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn vector(entries: &[(usize, i64)], n: usize) -> Vec<Rational> {
    let mut v = zero_vector(n);
    for &(i, c) in entries {
        v[i] = q(c);
    }
    v
}

pub fn algebra_m() -> Dgla {
    let basis = GradedBasis::from_pairs(&[("e1", 1), ("e2", 1), ("e3", 1), ("h1", 2), ("h2", 2)])
        .expect("distinct names");
    let (e1, e2, e3, h1, h2) = (0, 1, 2, 3, 4);
    Dgla::from_structure(
        basis,
        &[(e3, vector(&[(h1, 1)], 5))],
        &[
            (e1, e1, vector(&[(h2, -1)], 5)),
            (e2, e2, vector(&[(h2, 1), (h1, -1)], 5)),
            (e2, e3, vector(&[(h2, 1)], 5)),
        ],
    )
    .expect("consistent brackets")
}

/// The subalgebra `L` and its inclusion into [`algebra_m`].
pub fn algebra_l() -> (Dgla, DglaMorphism) {
    let m = algebra_m();
    let spans = vec![
        ("m".to_string(), vector(&[(0, 1), (1, 1)], 5)),
        ("e3".to_string(), vector(&[(2, 1)], 5)),
        ("h1".to_string(), vector(&[(3, 1)], 5)),
        ("h2".to_string(), vector(&[(4, 1)], 5)),
    ];
    subalgebra(&m, &spans).expect("closed span")
}

/// `u` in degree `k`, `v` in degree `k + 1`, `d u = v`, zero bracket.
pub fn acyclic_cone(k: i64) -> Dgla {
    let basis = GradedBasis::from_pairs(&[("u", k), ("v", k + 1)]).expect("distinct names");
    Dgla::from_structure(basis, &[(0, vector(&[(1, 1)], 2))], &[]).expect("no brackets")
}

/// Swap of the two summands of `M ⊕ M`.
pub fn swap_action(m: &Dgla) -> FiniteAction {
    let s = direct_sum(m, m);
    let n = m.dim();
    let mut swap = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        swap.set(i, n + i, q(1));
        swap.set(n + i, i, q(1));
    }
    FiniteAction::new(s.algebra.clone(), vec![Matrix::identity(2 * n), swap])
}

fn small<R: Rng + ?Sized>(rng: &mut R, density: f64) -> i64 {
    if rng.gen_bool(density) {
        *[-2, -1, 1, 1, 2].choose(rng).expect("nonempty")
    } else {
        0
    }
}

fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, support: &[usize], density: f64) -> Vec<Rational> {
    let mut v = zero_vector(n);
    for &i in support {
        v[i] = q(small(rng, density));
    }
    v
}

fn names(degrees: &[i64]) -> GradedBasis {
    GradedBasis::new(
        degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Generator {
                name: format!("x{}", i + 1),
                degree: d,
            })
            .collect(),
    )
    .expect("distinct names")
}

/// Degrees 1 and 2, arbitrary `d: L^1 → L^2` and symmetric `L^1 × L^1 → L^2`.
/// Every such datum satisfies all axioms.
fn family_low<R: Rng + ?Sized>(rng: &mut R, max: usize) -> Dgla {
    let n1 = rng.gen_range(1..=3.min(max - 1));
    let n2 = rng.gen_range(1..=(max - n1).min(3));
    let mut deg = vec![1; n1];
    deg.extend(vec![2; n2]);
    let n = n1 + n2;
    let two: Vec<usize> = (n1..n).collect();
    let d: Vec<(usize, Vec<Rational>)> = (0..n1).map(|i| (i, random_vector(rng, n, &two, 0.35))).collect();
    let mut b = Vec::new();
    for i in 0..n1 {
        for j in i..n1 {
            b.push((i, j, random_vector(rng, n, &two, 0.5)));
        }
    }
    Dgla::from_structure(names(&deg), &d, &b).expect("generated consistently")
}

/// Degrees 1, 2, 3 with zero differential. `[L^1, L^1]` lands in a subspace
/// `A ⊂ L^2` killed by `[L^1, -]`.
fn family_graded<R: Rng + ?Sized>(rng: &mut R, max: usize) -> Dgla {
    let n1 = rng.gen_range(1..=2);
    let n2 = rng.gen_range(1..=2.min(max - n1 - 1));
    let n3 = rng.gen_range(1..=(max - n1 - n2).min(2));
    let mut deg = vec![1; n1];
    deg.extend(vec![2; n2]);
    deg.extend(vec![3; n3]);
    let n = deg.len();
    let a = rng.gen_range(1..=n2);
    let a_idx: Vec<usize> = (n1..n1 + a).collect();
    let three: Vec<usize> = (n1 + n2..n).collect();
    let mut b = Vec::new();
    for i in 0..n1 {
        for j in i..n1 {
            b.push((i, j, random_vector(rng, n, &a_idx, 0.6)));
        }
        for h in n1 + a..n1 + n2 {
            b.push((i, h, random_vector(rng, n, &three, 0.6)));
        }
    }
    Dgla::from_structure(names(&deg), &[], &b).expect("generated consistently")
}

/// Degrees 1, 2, 3. `L^2 = A ⊕ C`, `d(L^1) ⊂ A`, `d(A) = 0`,
/// `d(C) ⊂ L^3`, `[L^1, L^1] ⊂ A`, all other brackets zero.
fn family_mixed<R: Rng + ?Sized>(rng: &mut R, max: usize) -> Dgla {
    let n1 = rng.gen_range(1..=if max >= 5 { 2 } else { 1 });
    let na = 1;
    let nc = rng.gen_range(1..=(max - n1 - na - 1).clamp(1, 2));
    let n3 = rng.gen_range(1..=(max - n1 - na - nc).clamp(1, 2));
    let mut deg = vec![1; n1];
    deg.extend(vec![2; na + nc]);
    deg.extend(vec![3; n3]);
    let n = deg.len();
    let a_idx: Vec<usize> = (n1..n1 + na).collect();
    let three: Vec<usize> = (n1 + na + nc..n).collect();
    let mut d = Vec::new();
    for i in 0..n1 {
        d.push((i, random_vector(rng, n, &a_idx, 0.5)));
    }
    for c in n1 + na..n1 + na + nc {
        d.push((c, random_vector(rng, n, &three, 0.6)));
    }
    let mut b = Vec::new();
    for i in 0..n1 {
        for j in i..n1 {
            b.push((i, j, random_vector(rng, n, &a_idx, 0.6)));
        }
    }
    Dgla::from_structure(names(&deg), &d, &b).expect("generated consistently")
}

/// Random unipotent change of basis inside each degree.
pub fn scramble<R: Rng + ?Sized>(rng: &mut R, l: &Dgla) -> Dgla {
    let n = l.dim();
    let mut change = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            if l.basis().degree(i) == l.basis().degree(j) {
                change.set(i, j, q(small(rng, 0.4)));
            }
        }
    }
    l.change_basis(l.basis().generators().to_vec(), &change)
        .expect("unipotent is invertible")
}

/// A random valid DGLA with at most `max` generators (`max >= 4`) in
/// degrees 1 to 3.
pub fn random_dgla<R: Rng + ?Sized>(rng: &mut R, max: usize) -> Dgla {
    assert!(max >= 4);
    let base = match rng.gen_range(0..3) {
        0 => family_low(rng, max),
        1 => family_graded(rng, max),
        _ => family_mixed(rng, max),
    };
    let l = scramble(rng, &base);
    if l.dim() + 2 <= max && rng.gen_bool(0.25) {
        let k = rng.gen_range(1..=2);
        let mut s = direct_sum(&l, &acyclic_cone(k)).algebra;
        s = scramble(rng, &s);
        return s;
    }
    l
}

/// `x ↦ λ^{|x|} x`, an automorphism whenever the differential vanishes.
pub fn grading_automorphism(l: &Dgla, lambda: i64) -> Matrix {
    let n = l.dim();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        let k = l.basis().degree(i);
        let mut c = q(1);
        for _ in 0..k.unsigned_abs() {
            c *= &q(lambda);
        }
        if k < 0 {
            c = q(1) / c;
        }
        m.set(i, i, c);
    }
    m
}

/// Cyclic permutation of `k` copies of `l`, optionally conjugated by a
/// grading automorphism on the first copy (only when `d = 0`).
pub fn random_permutation_action<R: Rng + ?Sized>(rng: &mut R, l: &Dgla, k: usize) -> FiniteAction {
    let mut sum = l.clone();
    for _ in 1..k {
        sum = direct_sum(&sum, l).algebra;
    }
    let n = l.dim();
    let total = n * k;
    let mut shift = Matrix::zeros(total, total);
    for c in 0..k {
        for i in 0..n {
            shift.set(((c + 1) % k) * n + i, c * n + i, q(1));
        }
    }
    let mut conj = Matrix::identity(total);
    if l.has_zero_differential() && rng.gen_bool(0.5) {
        let g = grading_automorphism(l, rng.gen_range(2..=3));
        for i in 0..n {
            conj.set(i, i, g.get(i, i).clone());
        }
    }
    let inv = conj.inverse().expect("diagonal nonzero");
    let gen = conj.mul(&shift).mul(&inv);
    let mut elements = vec![Matrix::identity(total)];
    for _ in 1..k {
        let next = gen.mul(elements.last().expect("nonempty"));
        elements.push(next);
    }
    FiniteAction::new(sum, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_algebras_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let l = random_dgla(&mut rng, 6);
            assert!(l.dim() <= 6);
            assert!(l.validate().is_valid(), "{:?}\n{}", l, l.validate());
        }
    }

    #[test]
    fn permutation_actions_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let l = random_dgla(&mut rng, 4);
            let k = rng.gen_range(2..=3);
            let a = random_permutation_action(&mut rng, &l, k);
            assert!(a.validate().is_valid());
        }
    }
}
