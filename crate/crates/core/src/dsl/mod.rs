//! The `.dgla` text format.
//!
//! ```text
//! # comments run to the end of the line
//! algebra M {
//!   basis e1:1, e2:1, e3:1, h1:2, h2:2;
//!   d e3 = h1;
//!   [e1,e1] = -h2;
//!   [e2,e2] = h2 - h1;
//!   [e2,e3] = h2;
//! }
//! subalgebra L of M { span m = e1 + e2, e3, h1, h2; }
//! sum MM = M + M;
//! quotient Q of M { ideal h1, e3; }
//! morphism i : L -> M { m -> e1 + e2; e3 -> e3; h1 -> h1; h2 -> h2; }
//! action swap on MM { element { e1 -> e1_2; e1_2 -> e1; } }
//! ```
//!
//! Unlisted differentials and brackets are zero and brackets are completed
//! by graded antisymmetry. Morphisms send unlisted generators to zero;
//! action elements fix unlisted generators, and an action is the group
//! generated by its listed elements. Coefficients are integers or
//! fractions `a/b`, optionally followed by `*`.

mod lexer;
mod parser;
mod print;

use std::fmt;

use serde::Serialize;

use crate::graded::{Dgla, DglaMorphism};
use crate::group::FiniteAction;
use crate::linalg::Matrix;
use crate::scalar::Rational;

pub use parser::parse;
pub use print::print;

/// Location of a diagnostic in the source text; `line` and `column` are
/// 1-based, `offset` and `length` count bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
    pub length: usize,
}

impl SourceSpan {
    /// The smallest span covering both.
    pub fn to(self, end: SourceSpan) -> SourceSpan {
        SourceSpan {
            length: (end.offset + end.length).saturating_sub(self.offset),
            ..self
        }
    }

    pub fn slice<'a>(&self, src: &'a str) -> &'a str {
        &src[self.offset..self.offset + self.length]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    Lexical,
    Syntax,
    Resolution,
    Degree,
    InconsistentBracket,
    Structure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub span: SourceSpan,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, span: SourceSpan, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            span,
            message: message.into(),
        }
    }

    /// `line:col: message` followed by the source line and a caret marker.
    pub fn render(&self, src: &str) -> String {
        let text = src.lines().nth(self.span.line - 1).unwrap_or("");
        let width = self.span.length.max(1).min(text.len().saturating_sub(self.span.column - 1).max(1));
        format!(
            "{}:{}: {}\n  {}\n  {}{}",
            self.span.line,
            self.span.column,
            self.message,
            text,
            " ".repeat(self.span.column - 1),
            "^".repeat(width)
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.span.line, self.span.column, self.message)
    }
}

/// One or more diagnostics from [`parse`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct Diagnostics(pub Vec<Diagnostic>);

/// How an algebra was declared.
#[derive(Debug, Clone, PartialEq)]
pub enum Definition {
    Explicit,
    Subalgebra { parent: String, inclusion: DglaMorphism },
    Sum { left: String, right: String },
    Quotient {
        parent: String,
        ideal: Vec<Vec<Rational>>,
        projection: DglaMorphism,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraItem {
    pub name: String,
    pub definition: Definition,
    pub algebra: Dgla,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorphismItem {
    pub name: String,
    pub source: String,
    pub target: String,
    pub morphism: DglaMorphism,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionItem {
    pub name: String,
    pub on: String,
    /// The listed elements.
    pub generators: Vec<Matrix>,
    pub action: FiniteAction,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Algebra(AlgebraItem),
    Morphism(MorphismItem),
    Action(ActionItem),
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Algebra(a) => &a.name,
            Item::Morphism(m) => &m.name,
            Item::Action(a) => &a.name,
        }
    }
}

/// A parsed and resolved document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Document {
    pub items: Vec<Item>,
}

impl Document {
    pub fn algebra_item(&self, name: &str) -> Option<&AlgebraItem> {
        self.items.iter().find_map(|i| match i {
            Item::Algebra(a) if a.name == name => Some(a),
            _ => None,
        })
    }

    pub fn algebra(&self, name: &str) -> Option<&Dgla> {
        self.algebra_item(name).map(|a| &a.algebra)
    }

    pub fn morphism(&self, name: &str) -> Option<&MorphismItem> {
        self.items.iter().find_map(|i| match i {
            Item::Morphism(m) if m.name == name => Some(m),
            _ => None,
        })
    }

    pub fn action(&self, name: &str) -> Option<&ActionItem> {
        self.items.iter().find_map(|i| match i {
            Item::Action(a) if a.name == name => Some(a),
            _ => None,
        })
    }

    pub fn algebras(&self) -> impl Iterator<Item = &AlgebraItem> {
        self.items.iter().filter_map(|i| match i {
            Item::Algebra(a) => Some(a),
            _ => None,
        })
    }

    pub fn morphisms(&self) -> impl Iterator<Item = &MorphismItem> {
        self.items.iter().filter_map(|i| match i {
            Item::Morphism(m) => Some(m),
            _ => None,
        })
    }

    pub fn actions(&self) -> impl Iterator<Item = &ActionItem> {
        self.items.iter().filter_map(|i| match i {
            Item::Action(a) => Some(a),
            _ => None,
        })
    }
}

/// The text of the fixture shipped with the repository: `M`, its
/// subalgebra `L`, the inclusion, `M ⊕ M` with the swap action, and an
/// abelian quotient of `M`.
pub const CANONICAL_FIXTURE: &str = include_str!("../../../../fixtures/canonical.dgla");

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{algebra_l, algebra_m, random_dgla};
    use rand::SeedableRng;

    #[test]
    fn documented_block_parses_to_m() {
        let src = "algebra M { basis e1:1,e2:1,e3:1,h1:2,h2:2; d e3 = h1; [e1,e1] = -h2; [e2,e2] = h2 - h1; [e2,e3] = h2; }";
        let doc = parse(src).unwrap();
        assert_eq!(doc.algebra("M").unwrap(), &algebra_m());
        assert!(doc.algebra("M").unwrap().validate().is_valid());
    }

    #[test]
    fn empty_document() {
        assert_eq!(parse("").unwrap(), Document::default());
        assert_eq!(parse("  # only a comment\n").unwrap(), Document::default());
    }

    #[test]
    fn degree_violation_points_at_statement() {
        let src = "algebra M { basis e1:1,e2:1; [e1,e2] = e1; }";
        let err = parse(src).unwrap_err();
        let d = &err.0[0];
        assert_eq!(d.kind, DiagnosticKind::Degree);
        assert!(d.span.slice(src).contains("[e1,e2] = e1"), "{}", d.span.slice(src));
        let src = "algebra M { basis e1:1,e2:1,e3:1,h1:2; d e3 = e1; }";
        let d = &parse(src).unwrap_err().0[0];
        assert_eq!(d.kind, DiagnosticKind::Degree);
        assert!(d.span.slice(src).contains("e1"));
    }

    #[test]
    fn inconsistent_duplicate_bracket() {
        let ok = "algebra M { basis e2:1,e3:1,h2:2; [e2,e3] = h2; [e3,e2] = h2; }";
        assert!(parse(ok).is_ok());
        let bad = "algebra M { basis e2:1,e3:1,h2:2; [e2,e3] = h2; [e3,e2] = -h2; }";
        let d = &parse(bad).unwrap_err().0[0];
        assert_eq!(d.kind, DiagnosticKind::InconsistentBracket);
        assert_eq!(d.span.slice(bad), "[e3,e2] = -h2;");
    }

    #[test]
    fn resolution_and_syntax_errors_carry_spans() {
        let cases = [
            ("algebra M { basis x:1; d y = x; }", "y"),
            ("algebra M { basis x:1 }", "}"),
            ("algebra M { basis x:1; } algebra M { basis y:2; }", "M"),
            ("subalgebra L of N { span x; }", "N"),
            ("algebra M { basis x:1, y:2; [x,x] = 3; }", "3"),
            ("algebra M { basis x:1; } subalgebra L of M { span x, x; }", "x"),
        ];
        for (src, token) in cases {
            let err = parse(src).unwrap_err();
            let d = &err.0[0];
            assert!(d.span.slice(src).contains(token), "{src}: {:?} {}", d, d.span.slice(src));
        }
    }

    #[test]
    fn fixture_contents() {
        let doc = parse(CANONICAL_FIXTURE).unwrap();
        assert_eq!(doc.algebra("M").unwrap(), &algebra_m());
        let (l, inc) = algebra_l();
        assert_eq!(doc.algebra("L").unwrap(), &l);
        assert_eq!(doc.morphism("i").unwrap().morphism, inc);
        assert_eq!(doc.action("swap").unwrap().action.order(), 2);
        assert!(doc.algebra("Q").unwrap().is_abelian());
    }

    #[test]
    fn round_trip_fixture() {
        let doc = parse(CANONICAL_FIXTURE).unwrap();
        let text = print(&doc);
        let again = parse(&text).unwrap();
        assert_eq!(again, doc);
        assert_eq!(print(&again), text);
    }

    #[test]
    fn round_trip_random_algebras() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = random_dgla(&mut rng, 6);
            let doc = Document {
                items: vec![Item::Algebra(AlgebraItem {
                    name: "A".into(),
                    definition: Definition::Explicit,
                    algebra: a,
                })],
            };
            let text = print(&doc);
            let back = parse(&text).unwrap_or_else(|e| panic!("{text}\n{e}"));
            assert_eq!(back, doc, "{text}");
            assert_eq!(print(&back), text);
        }
    }

    #[test]
    fn zero_algebra_prints_minimal_block() {
        let doc = parse("algebra Z { basis ; }").unwrap();
        assert_eq!(doc.algebra("Z").unwrap().dim(), 0);
        assert_eq!(print(&doc), "algebra Z {\n  basis ;\n}\n");
    }
}
