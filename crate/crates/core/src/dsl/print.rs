use std::fmt::Write;

use super::{Definition, Document, Item};
use crate::graded::GradedBasis;
use crate::linalg::Matrix;
use crate::scalar::Rational;

/// Canonical text of a document; [`super::parse`] reads it back to an
/// equal document.
pub fn print(doc: &Document) -> String {
    let blocks: Vec<String> = doc.items.iter().map(print_item).collect();
    blocks.join("\n")
}

fn assignments(out: &mut String, indent: &str, source: &GradedBasis, target: &GradedBasis, m: &Matrix, skip: impl Fn(usize, &[Rational]) -> bool) {
    for j in 0..source.len() {
        let col = m.column(j);
        if skip(j, &col) {
            continue;
        }
        writeln!(out, "{indent}{} -> {};", source.name(j), target.format_vector(&col)).expect("string");
    }
}

fn print_item(item: &Item) -> String {
    let mut out = String::new();
    match item {
        Item::Algebra(a) => match &a.definition {
            Definition::Explicit => {
                let b = a.algebra.basis();
                let gens: Vec<String> = b.generators().iter().map(|g| format!("{}:{}", g.name, g.degree)).collect();
                writeln!(out, "algebra {} {{", a.name).expect("string");
                writeln!(out, "  basis {};", gens.join(", ")).expect("string");
                for (i, v) in a.algebra.nonzero_differentials() {
                    writeln!(out, "  d {} = {};", b.name(i), b.format_vector(&v)).expect("string");
                }
                for (i, j, v) in a.algebra.nonzero_brackets() {
                    writeln!(out, "  [{},{}] = {};", b.name(i), b.name(j), b.format_vector(&v)).expect("string");
                }
                out.push_str("}\n");
            }
            Definition::Subalgebra { parent, inclusion } => {
                let pb = inclusion.target().basis();
                let sb = a.algebra.basis();
                let elems: Vec<String> = (0..sb.len())
                    .map(|j| format!("{} = {}", sb.name(j), pb.format_vector(&inclusion.image_of(j))))
                    .collect();
                writeln!(out, "subalgebra {} of {parent} {{", a.name).expect("string");
                writeln!(out, "  span {};", elems.join(", ")).expect("string");
                out.push_str("}\n");
            }
            Definition::Sum { left, right } => {
                writeln!(out, "sum {} = {left} + {right};", a.name).expect("string");
            }
            Definition::Quotient { parent, ideal, projection } => {
                let pb = projection.source().basis();
                let gens: Vec<String> = ideal.iter().map(|v| pb.format_vector(v)).collect();
                writeln!(out, "quotient {} of {parent} {{", a.name).expect("string");
                writeln!(out, "  ideal {};", gens.join(", ")).expect("string");
                out.push_str("}\n");
            }
        },
        Item::Morphism(m) => {
            let f = &m.morphism;
            writeln!(out, "morphism {} : {} -> {} {{", m.name, m.source, m.target).expect("string");
            assignments(&mut out, "  ", f.source().basis(), f.target().basis(), f.matrix(), |_, col| {
                col.iter().all(num_traits::Zero::is_zero)
            });
            out.push_str("}\n");
        }
        Item::Action(a) => {
            let b = a.action.algebra().basis();
            writeln!(out, "action {} on {} {{", a.name, a.on).expect("string");
            for g in &a.generators {
                out.push_str("  element {\n");
                let id = Matrix::<Rational>::identity(b.len());
                assignments(&mut out, "    ", b, b, g, |j, col| col == id.column(j).as_slice());
                out.push_str("  }\n");
            }
            out.push_str("}\n");
        }
    }
    out
}
