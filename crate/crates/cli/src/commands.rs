use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use dgla_core::ce::BicomplexWindow;
use dgla_core::dsl::{self, AlgebraItem, Definition, Document, Item, CANONICAL_FIXTURE};
use dgla_core::enveloping::pbw_report;
use dgla_core::formality::{
    nonformality_search, transfer_backward, transfer_forward, Cutoffs, FormalityVerdict, Outcome, DEFAULT_R_MAX,
};
use dgla_core::maurer_cartan::mc_system;
use dgla_core::scalar::Field;
use dgla_core::spectral::{euler_class, euler_obstruction, Obstruction, SpectralSequence};
use dgla_core::{CohomologyPresentation, Dgla, DglaMorphism};

use crate::certificate::{self, CertificateRecord, ModuleSource};
use crate::report::*;
use crate::{CliError, Command, Common, Computed, Direction};

const DEFAULT_CE_P_MAX: usize = 4;
const DEFAULT_PAGE: usize = 2;
const DEFAULT_TRUNCATION: usize = 3;

struct Input {
    text: String,
    digest: String,
}

fn read_input(common: &Common) -> Result<Input, CliError> {
    let text = match &common.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?,
        None => CANONICAL_FIXTURE.to_string(),
    };
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    Ok(Input { text, digest })
}

fn parse(input: &Input) -> Result<Document, CliError> {
    dsl::parse(&input.text).map_err(|e| {
        CliError::Parse(e.0.iter().map(|d| d.render(&input.text)).collect::<Vec<_>>().join("\n"))
    })
}

fn algebra<'d>(doc: &'d Document, name: &str) -> Result<&'d Dgla, CliError> {
    let l = doc.algebra(name).ok_or_else(|| CliError::Unknown {
        kind: "algebra",
        name: name.into(),
    })?;
    let report = l.validate();
    if !report.is_valid() {
        return Err(CliError::Invalid(format!("algebra `{name}` is not a DGLA:\n{report}")));
    }
    Ok(l)
}

fn morphism<'d>(doc: &'d Document, name: &str) -> Result<&'d dsl::MorphismItem, CliError> {
    let m = doc.morphism(name).ok_or_else(|| CliError::Unknown {
        kind: "morphism",
        name: name.into(),
    })?;
    algebra(doc, &m.source)?;
    algebra(doc, &m.target)?;
    let report = m.morphism.validate();
    if !report.is_valid() {
        return Err(CliError::Invalid(format!("morphism `{name}` is not a DGLA morphism:\n{report}")));
    }
    Ok(m)
}

fn required<'a>(value: &'a Option<String>, flag: &str, command: &str) -> Result<&'a str, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("`{command}` needs {flag} NAME")))
}

/// The module of a window command: `--morphism f` gives `L` acting on
/// `M` through `f`, `--algebra L` the adjoint module.
enum Subject<'d> {
    Adjoint { name: &'d str, algebra: &'d Dgla },
    Along { name: &'d str, item: &'d dsl::MorphismItem },
}

impl<'d> Subject<'d> {
    fn resolve(doc: &'d Document, common: &'d Common, command: &str) -> Result<Self, CliError> {
        match (&common.morphism, &common.algebra) {
            (Some(name), _) => Ok(Subject::Along {
                name,
                item: morphism(doc, name)?,
            }),
            (None, Some(name)) => Ok(Subject::Adjoint {
                name,
                algebra: algebra(doc, name)?,
            }),
            (None, None) => Err(CliError::Usage(format!("`{command}` needs --algebra NAME or --morphism NAME"))),
        }
    }

    fn label(&self) -> String {
        match self {
            Subject::Adjoint { name, .. } => format!("{name} over {name}"),
            Subject::Along { name, item } => format!("{} over {} via {name}", item.target, item.source),
        }
    }

    fn source(&self) -> ModuleSource<'d> {
        match self {
            Subject::Adjoint { algebra, .. } => ModuleSource::Adjoint(algebra),
            Subject::Along { item, .. } => ModuleSource::Along(&item.morphism),
        }
    }
}

fn window(source: ModuleSource<'_>, p_max: usize) -> Result<BicomplexWindow, CliError> {
    BicomplexWindow::new(&source.module(), p_max).map_err(|e| CliError::Invalid(e.to_string()))
}

fn verdict_payload(v: &FormalityVerdict, algebra: &Dgla) -> VerdictPayload {
    let outcome = match &v.outcome {
        Outcome::NonFormal(c) => OutcomeJson::NonFormal {
            certificate: CertificateRecord::new(c, ModuleSource::Adjoint(algebra), v.cutoffs.p_cutoff),
        },
        Outcome::NoObstructionUpTo(c) => OutcomeJson::NoObstructionUpTo {
            p_cutoff: c.p_cutoff,
            r_max: c.r_max,
        },
        Outcome::TransferConcludesFormal { source, .. } => OutcomeJson::TransferConcludesFormal { source: source.clone() },
        Outcome::TransferInconclusive(reason) => OutcomeJson::TransferInconclusive { reason: reason.clone() },
    };
    VerdictPayload {
        subject: v.subject.clone(),
        mode: v.mode,
        cutoffs: v.cutoffs,
        outcome,
        caveats: v.caveats.clone(),
    }
}

fn cutoffs(common: &Common) -> Cutoffs {
    let r_max = common.r_max.unwrap_or(DEFAULT_R_MAX);
    Cutoffs::new(common.p_max.unwrap_or(r_max + 2), r_max)
}

struct Step {
    payload: Payload,
    cutoffs: ReportCutoffs,
    input_valid: bool,
    conclusive: bool,
}

impl Step {
    fn done(payload: Payload, cutoffs: ReportCutoffs) -> Self {
        Step {
            payload,
            cutoffs,
            input_valid: true,
            conclusive: true,
        }
    }
}

pub fn execute(command: &Command) -> Result<Computed, CliError> {
    let common = command.common();
    if let Command::CheckCertificate(_) = command {
        return check_certificates(common);
    }
    let input = read_input(common)?;
    let doc = parse(&input)?;
    let out = match command {
        Command::Validate(c) => validate(&doc, c)?,
        Command::Cohom(c) => cohom(&doc, c)?,
        Command::Mc(c) => mc(&doc, c)?,
        Command::Ce(c) => ce(&doc, c)?,
        Command::Page(c) => page(&doc, c)?,
        Command::Euler(c) => euler(&doc, c)?,
        Command::Formality(c) => formality(&doc, c)?,
        Command::Transfer(c) => transfer(&doc, c)?,
        Command::Pbw(c) => pbw(&doc, c)?,
        Command::Invariants(c) => invariants(&doc, c)?,
        Command::CheckCertificate(_) => unreachable!("handled above"),
    };
    Ok(Computed {
        report: Report {
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.name().into(),
            input_sha256: input.digest,
            cutoffs: out.cutoffs,
            result: out.payload,
        },
        input_valid: out.input_valid,
        conclusive: out.conclusive,
    })
}

fn validate(doc: &Document, c: &Common) -> Result<Step, CliError> {
    let unknown = |kind, name: &str| CliError::Unknown {
        kind,
        name: name.into(),
    };
    let mut items = Vec::new();
    let mut push = |kind: &'static str, name: &str, problems: Vec<String>| {
        items.push(ValidatedItem {
            kind,
            name: name.into(),
            valid: problems.is_empty(),
            problems,
        })
    };
    let violations = |r: dgla_core::graded::ValidationReport| -> Vec<String> {
        r.violations
            .iter()
            .map(|v| format!("{:?} at ({}): {}", v.axiom, v.witness.join(", "), v.detail))
            .collect()
    };
    let selected = c.algebra.is_some() || c.morphism.is_some() || c.action.is_some();
    if let Some(name) = &c.algebra {
        let l = doc.algebra(name).ok_or_else(|| unknown("algebra", name))?;
        push("algebra", name, violations(l.validate()));
    }
    if let Some(name) = &c.morphism {
        let m = doc.morphism(name).ok_or_else(|| unknown("morphism", name))?;
        push("morphism", name, violations(m.morphism.validate()));
    }
    if let Some(name) = &c.action {
        let a = doc.action(name).ok_or_else(|| unknown("action", name))?;
        push("action", name, a.action.validate().problems);
    }
    if !selected {
        for item in &doc.items {
            match item {
                Item::Algebra(a) => push("algebra", &a.name, violations(a.algebra.validate())),
                Item::Morphism(m) => push("morphism", &m.name, violations(m.morphism.validate())),
                Item::Action(a) => push("action", &a.name, a.action.validate().problems),
            }
        }
    }
    let valid = items.iter().all(|i| i.valid);
    let mut out = Step::done(Payload::Validate(ValidatePayload { valid, items }), ReportCutoffs::default());
    out.input_valid = valid;
    Ok(out)
}

fn cohom(doc: &Document, c: &Common) -> Result<Step, CliError> {
    let name = required(&c.algebra, "--algebra", "cohom")?;
    let l = algebra(doc, name)?;
    let h = CohomologyPresentation::new(l);
    let hb = h.as_dgla().basis();
    let classes = (0..h.dim())
        .map(|i| CohomClass {
            name: hb.name(i).into(),
            degree: hb.degree(i),
            representative: l.basis().format_vector(h.representative(i)),
            coordinates: certificate::sparse(h.representative(i)),
        })
        .collect();
    let brackets = h
        .as_dgla()
        .nonzero_brackets()
        .into_iter()
        .map(|(i, j, v)| BracketEntry {
            left: hb.name(i).into(),
            right: hb.name(j).into(),
            value: hb.format_vector(&v),
        })
        .collect();
    Ok(Step::done(
        Payload::Cohom(CohomPayload {
            algebra: name.into(),
            dims: h.dims(),
            classes,
            brackets,
            bracket_well_defined: h.bracket_well_defined(),
        }),
        ReportCutoffs::default(),
    ))
}

fn mc(doc: &Document, c: &Common) -> Result<Step, CliError> {
    let name = required(&c.algebra, "--algebra", "mc")?;
    let sys = mc_system(algebra(doc, name)?);
    let equations = sys
        .equations
        .iter()
        .zip(sys.raw.iter().zip(&sys.cleared))
        .map(|(g, (raw, cleared))| McEquation {
            generator: g.clone(),
            raw: raw.to_string(),
            cleared: cleared.to_string(),
        })
        .collect();
    Ok(Step::done(
        Payload::Mc(McPayload {
            algebra: name.into(),
            variables: sys.variables.clone(),
            equations,
        }),
        ReportCutoffs::default(),
    ))
}

fn ce(doc: &Document, c: &Common) -> Result<Step, CliError> {
    let subject = Subject::resolve(doc, c, "ce")?;
    let p_max = c.p_max.unwrap_or(DEFAULT_CE_P_MAX);
    let w = window(subject.source(), p_max)?;
    let cells = w
        .cells()
        .map(|((p, q), h)| CellDim {
            p,
            q,
            dim: Some(h.dim()),
        })
        .collect();
    Ok(Step::done(
        Payload::Ce(CePayload {
            module: subject.label(),
            normalization: format!("{:?}", w.normalization()).to_lowercase(),
            identities_hold: w.check_identities(),
            cells,
        }),
        ReportCutoffs {
            p_max: Some(p_max),
            ..Default::default()
        },
    ))
}

fn page(doc: &Document, c: &Common) -> Result<Step, CliError> {
    let subject = Subject::resolve(doc, c, "page")?;
    let p_max = c.p_max.unwrap_or(DEFAULT_CE_P_MAX);
    let r = c.r.unwrap_or(DEFAULT_PAGE);
    if r == 0 {
        return Err(CliError::Usage("pages start at r = 1".into()));
    }
    let w = window(subject.source(), p_max)?;
    let ss = SpectralSequence::new(&w);
    let cells: Vec<CellDim> = ss
        .page(r)
        .dims()
        .into_iter()
        .map(|((p, q), dim)| CellDim { p, q, dim })
        .collect();
    let unknown = cells.iter().filter(|c| c.dim.is_none()).count();
    let mut out = Step::done(
        Payload::Page(PagePayload {
            module: subject.label(),
            r,
            cells,
            unknown,
        }),
        ReportCutoffs {
            p_max: Some(p_max),
            r_max: Some(r),
            ..Default::default()
        },
    );
    out.conclusive = unknown == 0;
    Ok(out)
}

fn euler(doc: &Document, c: &Common) -> Result<Step, CliError> {
    let subject = Subject::resolve(doc, c, "euler")?;
    let r_max = c.r_max.unwrap_or(DEFAULT_R_MAX);
    let p_max = c.p_max.unwrap_or(r_max + 2);
    if p_max < 2 {
        return Err(CliError::Usage("the Euler class needs --p-max >= 2".into()));
    }
    let identity;
    let (f, label) = match &subject {
        Subject::Adjoint { name, algebra } => {
            identity = DglaMorphism::identity(algebra);
            (&identity, format!("id_{name}"))
        }
        Subject::Along { name, item } => (&item.morphism, name.to_string()),
    };
    let w = window(subject.source(), p_max)?;
    let ss = SpectralSequence::new(&w);
    let e = euler_class(f, &ss).map_err(|e| CliError::Invalid(e.to_string()))?;
    let (obstruction, conclusive) = match euler_obstruction(&e, &ss, r_max) {
        Obstruction::Found(cert) => (
            ObstructionJson::Found {
                r: cert.r,
                certificate: CertificateRecord::new(&cert, subject.source(), p_max),
            },
            true,
        ),
        Obstruction::NoneUpTo(r) => (ObstructionJson::NoneUpTo { r_max: r }, false),
        Obstruction::Undetermined { last } => (ObstructionJson::Undetermined { last }, false),
    };
    let mut out = Step::done(
        Payload::Euler(EulerPayload {
            morphism: label,
            cochain: certificate::sparse(&e.cochain),
            coordinates: e.coordinates.iter().map(Field::to_fraction_string).collect(),
            obstruction,
        }),
        ReportCutoffs {
            p_max: Some(p_max),
            r_max: Some(r_max),
            ..Default::default()
        },
    );
    out.conclusive = conclusive;
    Ok(out)
}

fn formality(doc: &Document, c: &Common) -> Result<Step, CliError> {
    let name = required(&c.algebra, "--algebra", "formality")?;
    let l = algebra(doc, name)?;
    let cut = cutoffs(c);
    let v = nonformality_search(l, name, cut);
    let mut out = Step::done(
        Payload::Formality(verdict_payload(&v, l)),
        ReportCutoffs {
            p_max: Some(cut.p_cutoff),
            r_max: Some(cut.r_max),
            ..Default::default()
        },
    );
    out.conclusive = v.is_non_formal();
    Ok(out)
}

fn transfer(doc: &Document, c: &Common) -> Result<Step, CliError> {
    let name = required(&c.morphism, "--morphism", "transfer")?;
    let item = morphism(doc, name)?;
    let cut = cutoffs(c);
    let names = (item.source.as_str(), item.target.as_str());
    let theorem_side = match c.direction {
        Direction::Forward => &item.target,
        Direction::Backward => &item.source,
    };
    let asserted = match &c.assert_formal {
        None => false,
        Some(a) if a == theorem_side => true,
        Some(a) => {
            return Err(CliError::Invalid(format!(
                "--assert-formal {a}: the formality hypothesis of this transfer is about `{theorem_side}`"
            )))
        }
    };
    let (v, inj) = match c.direction {
        Direction::Forward => transfer_forward(&item.morphism, names, cut, asserted),
        Direction::Backward => transfer_backward(&item.morphism, names, cut, asserted),
    };
    let subject_algebra = match c.direction {
        Direction::Forward => item.morphism.source(),
        Direction::Backward => item.morphism.target(),
    };
    let conclusive = matches!(v.outcome, Outcome::TransferConcludesFormal { .. });
    let mut out = Step::done(
        Payload::Transfer(TransferPayload {
            morphism: name.into(),
            verdict: verdict_payload(&v, subject_algebra),
            injectivity: (&inj).into(),
        }),
        ReportCutoffs {
            p_max: Some(cut.p_cutoff),
            r_max: Some(cut.r_max),
            ..Default::default()
        },
    );
    out.conclusive = conclusive;
    Ok(out)
}

fn pbw(doc: &Document, c: &Common) -> Result<Step, CliError> {
    let name = required(&c.algebra, "--algebra", "pbw")?;
    let l = algebra(doc, name)?;
    let n = c.truncation.unwrap_or(DEFAULT_TRUNCATION);
    let report = pbw_report(l, n);
    Ok(Step::done(
        Payload::Pbw(PbwPayload {
            algebra: name.into(),
            passed: report.passed(),
            report,
        }),
        ReportCutoffs {
            truncation: Some(n),
            ..Default::default()
        },
    ))
}

fn invariants(doc: &Document, c: &Common) -> Result<Step, CliError> {
    let name = required(&c.action, "--action", "invariants")?;
    let item = doc.action(name).ok_or_else(|| CliError::Unknown {
        kind: "action",
        name: name.into(),
    })?;
    let m = algebra(doc, &item.on)?;
    let check = item.action.validate();
    if !check.is_valid() {
        return Err(CliError::Invalid(format!(
            "action `{name}` is not by DGLA automorphisms:\n{}",
            check.problems.join("\n")
        )));
    }
    let (inv, _) = item.action.invariants();
    let text = dsl::print(&Document {
        items: vec![Item::Algebra(AlgebraItem {
            name: format!("{}_{}", item.on, name),
            definition: Definition::Explicit,
            algebra: inv.clone(),
        })],
    });
    Ok(Step::done(
        Payload::Invariants(InvariantsPayload {
            action: name.into(),
            on: item.on.clone(),
            order: item.action.order(),
            action_problems: check.problems,
            algebra_dims: m.dims_by_degree(),
            invariant_dims: inv.dims_by_degree(),
            invariant_algebra: text,
            retraction: item.action.retraction_check(),
        }),
        ReportCutoffs::default(),
    ))
}

fn check_certificates(common: &Common) -> Result<Computed, CliError> {
    let path = common
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("`check-certificate` needs --input REPORT.json".into()))?;
    let input = read_input(common)?;
    let value: serde_json::Value = serde_json::from_str(&input.text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let certificates: Vec<CheckedCertificate> = certificate::collect(&value)
        .into_iter()
        .map(|(path, rec)| {
            let error = rec.and_then(|r| r.verify()).err();
            CheckedCertificate {
                path: if path.is_empty() { "/".into() } else { path },
                valid: error.is_none(),
                error,
            }
        })
        .collect();
    let all_valid = certificates.iter().all(|c| c.valid);
    let cutoffs = value
        .get("cutoffs")
        .and_then(|c| serde_json::from_value::<BTreeMap<String, Option<usize>>>(c.clone()).ok())
        .map(|m| ReportCutoffs {
            p_max: m.get("p_max").copied().flatten(),
            r_max: m.get("r_max").copied().flatten(),
            truncation: m.get("truncation").copied().flatten(),
        })
        .unwrap_or_default();
    Ok(Computed {
        report: Report {
            version: env!("CARGO_PKG_VERSION").into(),
            command: "check-certificate".into(),
            input_sha256: input.digest,
            cutoffs,
            result: Payload::CheckCertificate(CheckPayload {
                all_valid,
                certificates,
            }),
        },
        input_valid: all_valid,
        conclusive: true,
    })
}
