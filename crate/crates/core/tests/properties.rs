//! Randomized cross-module properties.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dgla_core::ce::BicomplexWindow;
use dgla_core::enveloping::pbw_report;
use dgla_core::fixtures::{acyclic_cone, algebra_l, random_dgla, random_permutation_action, scramble};
use dgla_core::formality::{forward_injectivity, nonformality_search, Cutoffs};
use dgla_core::graded::direct_sum;
use dgla_core::maurer_cartan::{mc_system, mc_value};
use dgla_core::spectral::SpectralSequence;
use dgla_core::{CohomologyPresentation, ModuleStructure, Rational};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into())
}

#[test]
fn averaging_retracts_onto_invariants() {
    let mut r = rng(31);
    for _ in 0..15 {
        let l = random_dgla(&mut r, 4);
        let k = r.gen_range(2..=3);
        let action = random_permutation_action(&mut r, &l, k);
        assert!(action.validate().is_valid());
        assert_eq!(action.order(), k);
        let (inv, inc) = action.invariants();
        assert_eq!(inv.dims_by_degree(), l.dims_by_degree());
        assert!(inv.validate().is_valid());
        assert!(inc.validate().is_valid());
        let report = action.retraction_check();
        assert!(report.passed, "{:?}", report.failures);
        assert!(forward_injectivity(&inc, 3).all_injective());
    }
}

#[test]
fn mc_polynomials_agree_with_direct_evaluation() {
    let mut r = rng(5);
    for _ in 0..30 {
        let l = random_dgla(&mut r, 6);
        let sys = mc_system(&l);
        let ones = l.basis().indices_of_degree(1);
        let point: Vec<Rational> = ones.iter().map(|_| small_rational(&mut r)).collect();
        let mut x = vec![Rational::from_integer(0.into()); l.dim()];
        for (&i, c) in ones.iter().zip(&point) {
            x[i] = c.clone();
        }
        let direct = mc_value(&l, &x);
        let twos = l.basis().indices_of_degree(2);
        for (row, &h) in twos.iter().enumerate() {
            assert_eq!(sys.raw[row].evaluate(&point), direct[h]);
        }
        for (raw, cleared) in sys.raw.iter().zip(&sys.cleared) {
            assert!(raw.is_zero() && cleared.is_zero() || cleared.is_scalar_multiple_of(raw));
        }
    }
}

#[test]
fn change_of_basis_preserves_invariants() {
    let mut r = rng(17);
    let (l, _) = algebra_l();
    let mut algebras = vec![l];
    for _ in 0..6 {
        algebras.push(random_dgla(&mut r, 5));
    }
    for a in algebras {
        let b = scramble(&mut r, &a);
        assert!(b.validate().is_valid());
        assert_eq!(CohomologyPresentation::new(&a).dims(), CohomologyPresentation::new(&b).dims());
        let cut = Cutoffs::new(4, 3);
        let va = nonformality_search(&a, "a", cut);
        let vb = nonformality_search(&b, "b", cut);
        assert_eq!(va.is_non_formal(), vb.is_non_formal());
        let (ma, mb) = (ModuleStructure::adjoint_self(&a), ModuleStructure::adjoint_self(&b));
        let (wa, wb) = (BicomplexWindow::new(&ma, 3).unwrap(), BicomplexWindow::new(&mb, 3).unwrap());
        let (sa, sb) = (SpectralSequence::new(&wa), SpectralSequence::new(&wb));
        for k in 1..=3 {
            assert_eq!(sa.page(k).dims(), sb.page(k).dims(), "E_{k}");
        }
    }
}

#[test]
fn adding_an_acyclic_summand_keeps_page_dimensions() {
    let mut r = rng(23);
    for _ in 0..8 {
        let l = random_dgla(&mut r, 4);
        let s = direct_sum(&l, &acyclic_cone(r.gen_range(1..=2)));
        let (ml, ms) = (ModuleStructure::adjoint_self(&l), ModuleStructure::adjoint_self(&s.algebra));
        let (wl, ws) = (BicomplexWindow::new(&ml, 3).unwrap(), BicomplexWindow::new(&ms, 3).unwrap());
        let (sl, ss) = (SpectralSequence::new(&wl), SpectralSequence::new(&ws));
        for k in 1..=3 {
            let (dl, ds) = (sl.page(k).dims(), ss.page(k).dims());
            for (cell, d) in &ds {
                let Some(d) = d else { continue };
                match dl.get(cell) {
                    Some(Some(e)) => assert_eq!(e, d, "E_{k}^{cell:?}"),
                    Some(None) => {}
                    None => assert_eq!(*d, 0, "E_{k}^{cell:?} outside the smaller window"),
                }
            }
        }
    }
}

#[test]
fn pbw_on_random_algebras() {
    let mut r = rng(41);
    for _ in 0..6 {
        let l = random_dgla(&mut r, 4);
        for n in 1..=3 {
            let report = pbw_report(&l, n);
            assert!(report.passed(), "N = {n}: {:?}", report.failures);
        }
    }
}
