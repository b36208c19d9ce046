//! Formality decisions: non-formality certificates from nonzero higher
//! differentials, transfer of formality along morphisms, and the module
//! splitting criterion.

use serde::Serialize;

use crate::ce::{post_compose, pre_compose, BicomplexWindow};
use crate::graded::{Dgla, DglaMorphism, ModuleStructure};
use crate::linalg::Matrix;
use crate::scalar::{Field, Rational};
use crate::spectral::{Certificate, SpectralSequence};

/// Default `r_max`; the default `p_cutoff` is `r_max + 2`.
pub const DEFAULT_R_MAX: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    SelfObstruction,
    TransferForward,
    TransferBackward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cutoffs {
    pub p_cutoff: usize,
    pub r_max: usize,
}

impl Cutoffs {
    pub fn new(p_cutoff: usize, r_max: usize) -> Self {
        Cutoffs { p_cutoff, r_max }
    }
}

impl Default for Cutoffs {
    fn default() -> Self {
        Cutoffs::new(DEFAULT_R_MAX + 2, DEFAULT_R_MAX)
    }
}

/// Where the formality of the theorem-side algebra comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormalitySource {
    /// Asserted by the user.
    Asserted,
    /// No nonzero `d_r` found within the cutoffs; evidence only.
    NoObstructionFound,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<F: Field = Rational> {
    /// A nonzero `d_r`, `r >= 2`: conclusive.
    NonFormal(Certificate<F>),
    /// Every decidable `d_r` with `2 <= r <= r_max` vanishes in the window.
    NoObstructionUpTo(Cutoffs),
    /// The transfer hypotheses hold up to the cutoffs.
    TransferConcludesFormal {
        source: FormalitySource,
        injectivity: InjectivityReport,
    },
    /// The transfer rule does not apply.
    TransferInconclusive(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalityVerdict<F: Field = Rational> {
    pub subject: String,
    pub mode: Mode,
    pub cutoffs: Cutoffs,
    pub outcome: Outcome<F>,
    /// Limitations of the verdict stated alongside it.
    pub caveats: Vec<String>,
}

impl<F: Field> FormalityVerdict<F> {
    pub fn is_non_formal(&self) -> bool {
        matches!(self.outcome, Outcome::NonFormal(_))
    }
}

/// Injectivity of the induced map on `E_2^{p,2-p}` for `p <= p_cutoff`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    /// `(p, source dim, rank)` per column.
    pub per_p: Vec<(usize, usize, usize)>,
    pub p_cutoff: usize,
}

impl InjectivityReport {
    pub fn injective_at(&self, p: usize) -> Option<bool> {
        self.per_p.iter().find(|e| e.0 == p).map(|e| e.1 == e.2)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.per_p.iter().find(|e| e.1 != e.2).map(|e| e.0)
    }

    pub fn all_injective(&self) -> bool {
        self.first_failure().is_none()
    }
}

/// Searches `E(L,L)` for a nonzero `d_r`, `2 <= r <= r_max`, using the
/// window `p <= p_cutoff`.
pub fn nonformality_search<F: Field>(l: &Dgla<F>, subject: &str, cutoffs: Cutoffs) -> FormalityVerdict<F> {
    let module = ModuleStructure::adjoint_self(l);
    let w = BicomplexWindow::new(&module, cutoffs.p_cutoff).expect("adjoint module");
    let ss = SpectralSequence::new(&w);
    let mut caveats = vec![format!(
        "only d_r with 2 <= r <= {} on cells with p + r <= {} were examined",
        cutoffs.r_max, cutoffs.p_cutoff
    )];
    for r in 2..=cutoffs.r_max {
        let cells: Vec<(usize, i64)> = w.cells().map(|(k, _)| k).filter(|&(p, _)| p + r <= cutoffs.p_cutoff).collect();
        for (p, q) in cells {
            if let Some(Err(cert)) = ss.d_r_vanishes(r, p, q) {
                return FormalityVerdict {
                    subject: subject.to_string(),
                    mode: Mode::SelfObstruction,
                    cutoffs,
                    outcome: Outcome::NonFormal(cert),
                    caveats: Vec::new(),
                };
            }
        }
    }
    caveats.push("absence of obstructions in a finite window is evidence, not proof, of formality".into());
    FormalityVerdict {
        subject: subject.to_string(),
        mode: Mode::SelfObstruction,
        cutoffs,
        outcome: Outcome::NoObstructionUpTo(cutoffs),
        caveats,
    }
}

fn injectivity_on_e2<F: Field>(
    src: &BicomplexWindow<F>,
    dst: &BicomplexWindow<F>,
    map: &crate::ce::CochainMap<F>,
    p_cutoff: usize,
) -> InjectivityReport {
    let (ss, sd) = (SpectralSequence::new(src), SpectralSequence::new(dst));
    let per_p = (0..=p_cutoff)
        .map(|p| {
            let q = 2 - p as i64;
            let m = ss
                .map_cell(map, &sd, 2, p, q)
                .expect("E_2 cells are known below the cutoff")
                .expect("cochain maps preserve ladders");
            (p, m.ncols(), m.rank())
        })
        .collect();
    InjectivityReport { per_p, p_cutoff }
}

/// `f_*: E(L,L)_2^{p,2-p} → E(L,M)_2^{p,2-p}` for `p <= p_cutoff`.
pub fn forward_injectivity<F: Field>(f: &DglaMorphism<F>, p_cutoff: usize) -> InjectivityReport {
    let ll = ModuleStructure::adjoint_self(f.source());
    let lm = ModuleStructure::adjoint(f);
    let w_ll = BicomplexWindow::new(&ll, p_cutoff + 1).expect("adjoint module");
    let w_lm = BicomplexWindow::new(&lm, p_cutoff + 1).expect("adjoint module");
    let map = post_compose(f.matrix(), &w_ll, &w_lm);
    injectivity_on_e2(&w_ll, &w_lm, &map, p_cutoff)
}

/// `f^*: E(M,M)_2^{p,2-p} → E(L,M)_2^{p,2-p}` for `p <= p_cutoff`.
pub fn backward_injectivity<F: Field>(f: &DglaMorphism<F>, p_cutoff: usize) -> InjectivityReport {
    let mm = ModuleStructure::adjoint_self(f.target());
    let lm = ModuleStructure::adjoint(f);
    let w_mm = BicomplexWindow::new(&mm, p_cutoff + 1).expect("adjoint module");
    let w_lm = BicomplexWindow::new(&lm, p_cutoff + 1).expect("adjoint module");
    let map = pre_compose(f, &w_mm, &w_lm);
    injectivity_on_e2(&w_mm, &w_lm, &map, p_cutoff)
}

fn transfer<F: Field>(
    mode: Mode,
    subject: &str,
    other: &Dgla<F>,
    other_name: &str,
    injectivity: InjectivityReport,
    cutoffs: Cutoffs,
    asserted: bool,
) -> (FormalityVerdict<F>, InjectivityReport) {
    let map_name = if mode == Mode::TransferForward { "f_*" } else { "f^*" };
    let mut caveats = vec![format!(
        "injectivity of {map_name} on E_2^{{p,2-p}} checked for p <= {} only",
        cutoffs.p_cutoff
    )];
    let source = if asserted {
        caveats.push(format!("formality of {other_name} is asserted by the user"));
        Some(FormalitySource::Asserted)
    } else {
        let evidence = nonformality_search(other, other_name, cutoffs);
        match evidence.outcome {
            Outcome::NonFormal(c) => {
                caveats.push(format!("{other_name} has a nonzero d_{} from {:?}", c.r, c.start));
                None
            }
            _ => {
                caveats.push(format!(
                    "formality of {other_name} rests on a finite obstruction search, not a proof"
                ));
                Some(FormalitySource::NoObstructionFound)
            }
        }
    };
    let outcome = match (source, injectivity.first_failure()) {
        (None, _) => Outcome::TransferInconclusive(format!("{other_name} is not formal")),
        (Some(_), Some(p)) => Outcome::TransferInconclusive(format!("{map_name} is not injective at p = {p}")),
        (Some(source), None) => Outcome::TransferConcludesFormal {
            source,
            injectivity: injectivity.clone(),
        },
    };
    (
        FormalityVerdict {
            subject: subject.to_string(),
            mode,
            cutoffs,
            outcome,
            caveats,
        },
        injectivity,
    )
}

/// Transfers formality from the target of `f` to its source. With
/// `assert_target_formal` the evidence scan on the target is skipped.
pub fn transfer_forward<F: Field>(
    f: &DglaMorphism<F>,
    names: (&str, &str),
    cutoffs: Cutoffs,
    assert_target_formal: bool,
) -> (FormalityVerdict<F>, InjectivityReport) {
    let inj = forward_injectivity(f, cutoffs.p_cutoff);
    transfer(Mode::TransferForward, names.0, f.target(), names.1, inj, cutoffs, assert_target_formal)
}

/// Transfers formality from the source of `f` to its target.
pub fn transfer_backward<F: Field>(
    f: &DglaMorphism<F>,
    names: (&str, &str),
    cutoffs: Cutoffs,
    assert_source_formal: bool,
) -> (FormalityVerdict<F>, InjectivityReport) {
    let inj = backward_injectivity(f, cutoffs.p_cutoff);
    transfer(Mode::TransferBackward, names.1, f.source(), names.0, inj, cutoffs, assert_source_formal)
}

/// Outcome of [`module_splitting_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Checks that `p: M → L` (a `dim L × dim M` matrix) is a retraction of
/// the inclusion `f` compatible with the `L`-module structures:
/// `p` has degree 0, commutes with `d`, `p(f x) = x` and
/// `p([f x, y]) = [x, p y]`.
pub fn module_splitting_check<F: Field>(f: &DglaMorphism<F>, p: &Matrix<F>) -> SplittingReport {
    let (l, m) = (f.source(), f.target());
    let (lb, mb) = (l.basis(), m.basis());
    let mut failures = Vec::new();
    if (p.nrows(), p.ncols()) != (l.dim(), m.dim()) {
        failures.push(format!(
            "projection has shape {}x{}, expected {}x{}",
            p.nrows(),
            p.ncols(),
            l.dim(),
            m.dim()
        ));
        return SplittingReport {
            passed: false,
            failures,
        };
    }
    for y in 0..m.dim() {
        let py = p.column(y);
        if py
            .iter()
            .enumerate()
            .any(|(k, c)| !c.is_zero() && lb.degree(k) != mb.degree(y))
        {
            failures.push(format!("p({}) has the wrong degree", mb.name(y)));
        }
        if p.mul_vec(&m.d_basis(y)) != l.differential(&py) {
            failures.push(format!("p(d {0}) != d p({0})", mb.name(y)));
        }
    }
    for x in 0..l.dim() {
        let fx = f.image_of(x);
        if p.mul_vec(&fx) != l.generator(x) {
            failures.push(format!("p(x) != x for x = {}", lb.name(x)));
        }
        for y in 0..m.dim() {
            let lhs = p.mul_vec(&m.bracket(&fx, &m.generator(y)));
            let rhs = l.bracket(&l.generator(x), &p.column(y));
            if lhs != rhs {
                failures.push(format!("p([x,y]) != [x,p(y)] for x = {}, y = {}", lb.name(x), mb.name(y)));
            }
        }
    }
    SplittingReport {
        passed: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{acyclic_cone, algebra_l, algebra_m};
    use crate::graded::{direct_sum, DglaMorphism, GradedBasis};

    #[test]
    fn projection_onto_summand_splits() {
        let m = algebra_m();
        let s = direct_sum(&m, &acyclic_cone(1));
        let r = module_splitting_check(&s.left, s.left_projection.matrix());
        assert!(r.passed, "{:?}", r.failures);
    }

    #[test]
    fn l_is_not_formal() {
        let (l, _) = algebra_l();
        let v = nonformality_search(&l, "L", Cutoffs::new(4, 2));
        match &v.outcome {
            Outcome::NonFormal(c) => {
                assert_eq!(c.r, 2);
                let module = ModuleStructure::adjoint_self(&l);
                c.verify(&BicomplexWindow::new(&module, 4).unwrap()).unwrap();
            }
            other => panic!("{other:?}"),
        }
        // larger cutoffs keep the verdict
        assert!(nonformality_search(&l, "L", Cutoffs::new(6, 4)).is_non_formal());
    }

    #[test]
    fn abelian_has_no_obstruction() {
        let a = Dgla::<Rational>::abelian(GradedBasis::from_pairs(&[("a", 1), ("b", 1), ("c", 2)]).unwrap());
        let v = nonformality_search(&a, "A", Cutoffs::new(5, 3));
        assert_eq!(v.outcome, Outcome::NoObstructionUpTo(Cutoffs::new(5, 3)));
    }

    #[test]
    fn inclusion_of_l_fails_injectivity() {
        let (_, inc) = algebra_l();
        let report = forward_injectivity(&inc, 4);
        assert!(!report.all_injective());
        let (v, _) = transfer_forward(&inc, ("L", "M"), Cutoffs::new(4, 2), false);
        assert!(matches!(v.outcome, Outcome::TransferInconclusive(_)));
    }

    #[test]
    fn identity_transfers_trivially() {
        let m = algebra_m();
        let id = DglaMorphism::identity(&m);
        assert!(forward_injectivity(&id, 4).all_injective());
        assert!(backward_injectivity(&id, 4).all_injective());
        let (v, _) = transfer_forward(&id, ("M", "M"), Cutoffs::new(4, 2), true);
        assert!(matches!(v.outcome, Outcome::TransferConcludesFormal { source: FormalitySource::Asserted, .. }));
    }

    #[test]
    fn acyclic_source_is_vacuous() {
        let m = algebra_m();
        let cone = acyclic_cone(1);
        let s = direct_sum(&m, &cone);
        let f = s.right;
        let report = forward_injectivity(&f, 4);
        assert!(report.per_p.iter().all(|&(_, d, _)| d == 0));
    }

    #[test]
    fn summand_splitting_gives_injectivity() {
        let m = algebra_m();
        let s = direct_sum(&m, &acyclic_cone(1));
        assert!(module_splitting_check(&s.left, s.left_projection.matrix()).passed);
        assert!(forward_injectivity(&s.left, 4).all_injective());
    }

    #[test]
    fn zero_projection_fails() {
        let m = algebra_m();
        let id = DglaMorphism::identity(&m);
        let r = module_splitting_check(&id, &Matrix::zeros(5, 5));
        assert!(!r.passed);
        assert!(r.failures.iter().any(|f| f.starts_with("p(x) != x")));
    }
}
