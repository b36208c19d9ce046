//! The report value behind both the JSON file and the text output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use dgla_core::enveloping::PbwReport;
use dgla_core::formality::{Cutoffs, FormalitySource, InjectivityReport, Mode, SplittingReport};

use crate::certificate::{CertificateRecord, Sparse};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub input_sha256: String,
    pub cutoffs: ReportCutoffs,
    pub result: Payload,
}

/// The limits a computation ran under; `null` where a limit does not apply.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReportCutoffs {
    pub p_max: Option<usize>,
    pub r_max: Option<usize>,
    pub truncation: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Validate(ValidatePayload),
    Cohom(CohomPayload),
    Mc(McPayload),
    Ce(CePayload),
    Page(PagePayload),
    Euler(EulerPayload),
    Formality(VerdictPayload),
    Transfer(TransferPayload),
    Pbw(PbwPayload),
    Invariants(InvariantsPayload),
    CheckCertificate(CheckPayload),
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidatedItem {
    pub kind: &'static str,
    pub name: String,
    pub valid: bool,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidatePayload {
    pub valid: bool,
    pub items: Vec<ValidatedItem>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CohomClass {
    pub name: String,
    pub degree: i64,
    pub representative: String,
    pub coordinates: Sparse,
}

#[derive(Debug, Clone, Serialize)]
pub struct BracketEntry {
    pub left: String,
    pub right: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CohomPayload {
    pub algebra: String,
    pub dims: BTreeMap<i64, usize>,
    pub classes: Vec<CohomClass>,
    pub brackets: Vec<BracketEntry>,
    pub bracket_well_defined: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct McEquation {
    pub generator: String,
    pub raw: String,
    pub cleared: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct McPayload {
    pub algebra: String,
    pub variables: Vec<String>,
    pub equations: Vec<McEquation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellDim {
    pub p: usize,
    pub q: i64,
    /// `None` for a cell the window does not determine.
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CePayload {
    pub module: String,
    pub normalization: String,
    pub identities_hold: bool,
    pub cells: Vec<CellDim>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PagePayload {
    pub module: String,
    pub r: usize,
    pub cells: Vec<CellDim>,
    pub unknown: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ObstructionJson {
    Found { r: usize, certificate: CertificateRecord },
    NoneUpTo { r_max: usize },
    Undetermined { last: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerPayload {
    pub morphism: String,
    pub cochain: Sparse,
    pub coordinates: Vec<String>,
    pub obstruction: ObstructionJson,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum OutcomeJson {
    NonFormal {
        certificate: CertificateRecord,
    },
    NoObstructionUpTo {
        p_cutoff: usize,
        r_max: usize,
    },
    TransferConcludesFormal {
        source: FormalitySource,
    },
    TransferInconclusive {
        reason: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictPayload {
    pub subject: String,
    pub mode: Mode,
    pub cutoffs: Cutoffs,
    pub outcome: OutcomeJson,
    pub caveats: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InjectivityRow {
    pub p: usize,
    pub source_dim: usize,
    pub rank: usize,
    pub injective: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InjectivityJson {
    pub p_cutoff: usize,
    pub first_failure: Option<usize>,
    pub per_p: Vec<InjectivityRow>,
}

impl From<&InjectivityReport> for InjectivityJson {
    fn from(r: &InjectivityReport) -> Self {
        InjectivityJson {
            p_cutoff: r.p_cutoff,
            first_failure: r.first_failure(),
            per_p: r
                .per_p
                .iter()
                .map(|&(p, source_dim, rank)| InjectivityRow {
                    p,
                    source_dim,
                    rank,
                    injective: source_dim == rank,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferPayload {
    pub morphism: String,
    pub verdict: VerdictPayload,
    pub injectivity: InjectivityJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct PbwPayload {
    pub algebra: String,
    pub passed: bool,
    pub report: PbwReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantsPayload {
    pub action: String,
    pub on: String,
    pub order: usize,
    pub action_problems: Vec<String>,
    pub algebra_dims: BTreeMap<i64, usize>,
    pub invariant_dims: BTreeMap<i64, usize>,
    /// The invariant subalgebra as canonical `.dgla` text.
    pub invariant_algebra: String,
    pub retraction: SplittingReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckedCertificate {
    pub path: String,
    pub valid: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckPayload {
    pub all_valid: bool,
    pub certificates: Vec<CheckedCertificate>,
}

fn dims_line(dims: &BTreeMap<i64, usize>) -> String {
    if dims.is_empty() {
        return "0".into();
    }
    dims.iter().map(|(k, d)| format!("{k}:{d}")).collect::<Vec<_>>().join(" ")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_certificate(out: &mut String, c: &CertificateRecord) {
    let _ = writeln!(
        out,
        "  certificate: d_{} from E^({},{}) to E^({},{}), {} rungs, {} witnesses, window p <= {}",
        c.r,
        c.start.0,
        c.start.1,
        c.target.0,
        c.target.1,
        c.rungs.len(),
        c.witnesses.len(),
        c.context.p_max
    );
}

fn render_cells(out: &mut String, cells: &[CellDim]) {
    let mut by_p: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for c in cells {
        let d = c.dim.map_or("?".to_string(), |d| d.to_string());
        by_p.entry(c.p).or_default().push(format!("q={}:{}", c.q, d));
    }
    for (p, row) in by_p {
        let _ = writeln!(out, "  p={p}  {}", row.join("  "));
    }
}

fn render_verdict(out: &mut String, v: &VerdictPayload) {
    let head = match &v.outcome {
        OutcomeJson::NonFormal { .. } => "NON_FORMAL",
        OutcomeJson::NoObstructionUpTo { .. } => "NO_OBSTRUCTION_FOUND",
        OutcomeJson::TransferConcludesFormal { .. } => "FORMAL_BY_TRANSFER",
        OutcomeJson::TransferInconclusive { .. } => "INCONCLUSIVE",
    };
    let _ = writeln!(
        out,
        "{}: {head} (p_cutoff = {}, r_max = {})",
        v.subject, v.cutoffs.p_cutoff, v.cutoffs.r_max
    );
    match &v.outcome {
        OutcomeJson::NonFormal { certificate } => render_certificate(out, certificate),
        OutcomeJson::TransferConcludesFormal { source } => {
            let s = match source {
                FormalitySource::Asserted => "asserted",
                FormalitySource::NoObstructionFound => "no obstruction found",
            };
            let _ = writeln!(out, "  theorem-side formality: {s}");
        }
        OutcomeJson::TransferInconclusive { reason } => {
            let _ = writeln!(out, "  reason: {reason}");
        }
        OutcomeJson::NoObstructionUpTo { .. } => {}
    }
    for c in &v.caveats {
        let _ = writeln!(out, "  caveat: {c}");
    }
}

impl Report {
    /// Text rendering of the same value that is written as JSON.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dgla {} {}", self.version, self.command);
        match &self.result {
            Payload::Validate(v) => {
                for item in &v.items {
                    if item.valid {
                        let _ = writeln!(out, "{} {}: valid", item.kind, item.name);
                    } else {
                        let _ = writeln!(out, "{} {}: invalid", item.kind, item.name);
                        for p in &item.problems {
                            let _ = writeln!(out, "  {p}");
                        }
                    }
                }
                let _ = writeln!(out, "{}", if v.valid { "valid" } else { "invalid" });
            }
            Payload::Cohom(c) => {
                let _ = writeln!(out, "H({}) dims: {}", c.algebra, dims_line(&c.dims));
                for class in &c.classes {
                    let _ = writeln!(out, "  [{}] degree {}: {}", class.name, class.degree, class.representative);
                }
                for b in &c.brackets {
                    let _ = writeln!(out, "  [{}, {}] = {}", b.left, b.right, b.value);
                }
                let _ = writeln!(out, "  induced bracket well defined: {}", yes(c.bracket_well_defined));
            }
            Payload::Mc(m) => {
                let _ = writeln!(out, "Maurer-Cartan system of {} in {}", m.algebra, m.variables.join(", "));
                for e in &m.equations {
                    let _ = writeln!(out, "  [{}] {} = 0", e.generator, e.cleared);
                }
            }
            Payload::Ce(c) => {
                let _ = writeln!(
                    out,
                    "CE({}) window, normalization {}, identities hold: {}",
                    c.module,
                    c.normalization,
                    yes(c.identities_hold)
                );
                render_cells(&mut out, &c.cells);
            }
            Payload::Page(p) => {
                let _ = writeln!(out, "E_{} of {} ({} unknown cells marked ?)", p.r, p.module, p.unknown);
                render_cells(&mut out, &p.cells);
            }
            Payload::Euler(e) => {
                let _ = writeln!(out, "Euler class of {}: E_2^(1,0) coordinates [{}]", e.morphism, e.coordinates.join(", "));
                match &e.obstruction {
                    ObstructionJson::Found { r, certificate } => {
                        let _ = writeln!(out, "  d_{r}(e) is nonzero");
                        render_certificate(&mut out, certificate);
                    }
                    ObstructionJson::NoneUpTo { r_max } => {
                        let _ = writeln!(out, "  d_r(e) = 0 for 2 <= r <= {r_max}");
                    }
                    ObstructionJson::Undetermined { last } => {
                        let _ = writeln!(out, "  undetermined: the window decides d_r(e) only for r <= {last}");
                    }
                }
            }
            Payload::Formality(v) => render_verdict(&mut out, v),
            Payload::Transfer(t) => {
                render_verdict(&mut out, &t.verdict);
                for row in &t.injectivity.per_p {
                    let _ = writeln!(
                        out,
                        "  p={}  dim {}  rank {}  {}",
                        row.p,
                        row.source_dim,
                        row.rank,
                        if row.injective { "injective" } else { "NOT injective" }
                    );
                }
            }
            Payload::Pbw(p) => {
                let r = &p.report;
                let _ = writeln!(out, "PBW checks for {} up to length {}: {}", p.algebra, r.truncation, if p.passed { "passed" } else { "FAILED" });
                let _ = writeln!(out, "  dim F_N U by degree: {}", dims_line(&r.uea_dims));
                let _ = writeln!(out, "  dim S^<=N by degree: {}", dims_line(&r.symmetric_dims));
                let _ = writeln!(out, "  e bijective: {}, chain map: {}", yes(r.e_bijective), yes(r.e_commutes_with_d));
                let _ = writeln!(out, "  e(r_x z) = [e(z), i(x)]: {}", yes(r.derivation_identity));
                let _ = writeln!(
                    out,
                    "  complement: direct sum {}, submodule {}",
                    yes(r.complement.direct_sum),
                    yes(r.complement.submodule)
                );
                let _ = writeln!(out, "  H(F_N U): {}", dims_line(&r.uea_cohomology));
                let _ = writeln!(out, "  S^<=N(H): {}", dims_line(&r.symmetric_cohomology));
                for f in &r.failures {
                    let _ = writeln!(out, "  failure: {f}");
                }
            }
            Payload::Invariants(i) => {
                let _ = writeln!(out, "action {} on {}: order {}", i.action, i.on, i.order);
                for p in &i.action_problems {
                    let _ = writeln!(out, "  problem: {p}");
                }
                let _ = writeln!(out, "  {} dims: {}", i.on, dims_line(&i.algebra_dims));
                let _ = writeln!(out, "  invariants dims: {}", dims_line(&i.invariant_dims));
                let _ = writeln!(out, "  Reynolds retraction: {}", if i.retraction.passed { "passed" } else { "FAILED" });
                for f in &i.retraction.failures {
                    let _ = writeln!(out, "  failure: {f}");
                }
                for line in i.invariant_algebra.lines() {
                    let _ = writeln!(out, "  {line}");
                }
            }
            Payload::CheckCertificate(c) => {
                for cert in &c.certificates {
                    match &cert.error {
                        None => {
                            let _ = writeln!(out, "{}: ok", cert.path);
                        }
                        Some(e) => {
                            let _ = writeln!(out, "{}: FAILED ({e})", cert.path);
                        }
                    }
                }
                let _ = writeln!(out, "{} certificates, all valid: {}", c.certificates.len(), yes(c.all_valid));
            }
        }
        out
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
