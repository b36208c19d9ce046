//! Self-contained ladder certificates: the algebra data travels with the
//! rungs and witnesses, so re-validation rebuilds the window from scratch.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use dgla_core::ce::BicomplexWindow;
use dgla_core::dsl::{self, AlgebraItem, Definition, Document, Item, MorphismItem};
use dgla_core::scalar::{Field, Rational};
use dgla_core::spectral::Certificate;
use dgla_core::{Dgla, DglaMorphism, ModuleStructure};

pub const CERTIFICATE_KIND: &str = "ladder-certificate";

/// `(index, "num/den")` pairs for the nonzero coordinates.
pub type Sparse = Vec<(usize, String)>;

pub fn sparse(v: &[Rational]) -> Sparse {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.to_fraction_string()))
        .collect()
}

fn dense(s: &Sparse, len: usize) -> Result<Vec<Rational>, String> {
    let mut v = vec![Rational::zero(); len];
    for (i, c) in s {
        let slot = v.get_mut(*i).ok_or_else(|| format!("coordinate {i} out of range (length {len})"))?;
        *slot = Rational::parse_fraction(c).ok_or_else(|| format!("bad rational `{c}`"))?;
    }
    Ok(v)
}

/// The coefficient module of the bicomplex a certificate lives in.
#[derive(Debug, Clone, Copy)]
pub enum ModuleSource<'a> {
    /// `L` acting on itself.
    Adjoint(&'a Dgla),
    /// `L` acting on `M` through `f: L → M`.
    Along(&'a DglaMorphism),
}

impl ModuleSource<'_> {
    pub fn module(&self) -> ModuleStructure {
        match self {
            ModuleSource::Adjoint(l) => ModuleStructure::adjoint_self(l),
            ModuleSource::Along(f) => ModuleStructure::adjoint(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateContext {
    /// Canonical `.dgla` text with the acting algebra `L` and, for a
    /// module along a morphism, the target `M` and the morphism `f`.
    pub document: String,
    pub algebra: String,
    pub morphism: Option<String>,
    pub p_max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub kind: String,
    pub context: CertificateContext,
    pub r: usize,
    pub start: (usize, i64),
    pub target: (usize, i64),
    pub rungs: Vec<Sparse>,
    pub witnesses: Vec<Sparse>,
}

fn explicit(name: &str, algebra: &Dgla) -> Item {
    Item::Algebra(AlgebraItem {
        name: name.into(),
        definition: Definition::Explicit,
        algebra: algebra.clone(),
    })
}

impl CertificateRecord {
    pub fn new(cert: &Certificate, source: ModuleSource<'_>, p_max: usize) -> Self {
        let (items, morphism) = match source {
            ModuleSource::Adjoint(l) => (vec![explicit("L", l)], None),
            ModuleSource::Along(f) => (
                vec![
                    explicit("L", f.source()),
                    explicit("M", f.target()),
                    Item::Morphism(MorphismItem {
                        name: "f".into(),
                        source: "L".into(),
                        target: "M".into(),
                        morphism: f.clone(),
                    }),
                ],
                Some("f".to_string()),
            ),
        };
        CertificateRecord {
            kind: CERTIFICATE_KIND.into(),
            context: CertificateContext {
                document: dsl::print(&Document { items }),
                algebra: "L".into(),
                morphism,
                p_max,
            },
            r: cert.r,
            start: cert.start,
            target: cert.target,
            rungs: cert.rungs.iter().map(|v| sparse(v)).collect(),
            witnesses: cert.witnesses.iter().map(|v| sparse(v)).collect(),
        }
    }

    /// Rebuilds the window from the embedded document and re-checks every
    /// ladder and witness identity.
    pub fn verify(&self) -> Result<(), String> {
        if self.kind != CERTIFICATE_KIND {
            return Err(format!("unknown certificate kind `{}`", self.kind));
        }
        let ctx = &self.context;
        let doc = dsl::parse(&ctx.document).map_err(|e| e.to_string())?;
        let module = match &ctx.morphism {
            None => {
                let l = doc
                    .algebra(&ctx.algebra)
                    .ok_or_else(|| format!("document has no algebra `{}`", ctx.algebra))?;
                ModuleStructure::adjoint_self(l)
            }
            Some(name) => {
                let f = doc.morphism(name).ok_or_else(|| format!("document has no morphism `{name}`"))?;
                ModuleStructure::adjoint(&f.morphism)
            }
        };
        let w = BicomplexWindow::new(&module, ctx.p_max).map_err(|e| e.to_string())?;
        let (p, q) = self.start;
        let (big_p, big_q) = self.target;
        if self.r == 0 || self.rungs.len() != self.r || self.witnesses.len() != self.r || big_p + 1 < self.r {
            return Err("wrong number of rungs or witnesses".into());
        }
        let rungs = self
            .rungs
            .iter()
            .enumerate()
            .map(|(i, s)| dense(s, w.cell_dim(p + i, q - i as i64)))
            .collect::<Result<Vec<_>, _>>()?;
        let witnesses = self
            .witnesses
            .iter()
            .enumerate()
            .map(|(i, s)| dense(s, w.cell_dim(big_p - i, big_q + i as i64)))
            .collect::<Result<Vec<_>, _>>()?;
        Certificate {
            r: self.r,
            start: self.start,
            target: self.target,
            rungs,
            witnesses,
        }
        .verify(&w)
    }
}

/// Every certificate object nested anywhere in a JSON value.
pub fn collect(value: &serde_json::Value) -> Vec<(String, Result<CertificateRecord, String>)> {
    fn walk(v: &serde_json::Value, path: String, out: &mut Vec<(String, Result<CertificateRecord, String>)>) {
        match v {
            serde_json::Value::Object(map) => {
                if map.get("kind").and_then(|k| k.as_str()) == Some(CERTIFICATE_KIND) {
                    let rec = serde_json::from_value(v.clone()).map_err(|e| e.to_string());
                    out.push((path, rec));
                    return;
                }
                for (k, x) in map {
                    walk(x, format!("{path}/{k}"), out);
                }
            }
            serde_json::Value::Array(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    walk(x, format!("{path}/{i}"), out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(value, String::new(), &mut out);
    out
}
