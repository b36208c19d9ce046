use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::lexer::{lex, Tok, Token};
use super::{
    ActionItem, AlgebraItem, Definition, Diagnostic, DiagnosticKind, Diagnostics, Document, Item, MorphismItem,
    SourceSpan,
};
use crate::graded::{
    antisymmetry_sign, direct_sum, quotient, subalgebra, Dgla, DglaMorphism, GradedBasis, Generator, StructureError,
};
use crate::group::{FiniteAction, GroupError, DEFAULT_ORDER_CAP};
use crate::linalg::{zero_vector, Matrix};
use crate::scalar::{Field, Rational};

/// Parses and resolves a document.
pub fn parse(src: &str) -> Result<Document, Diagnostics> {
    let toks = lex(src).map_err(|d| Diagnostics(vec![d]))?;
    let mut p = Parser {
        toks,
        pos: 0,
        doc: Document::default(),
        diags: Vec::new(),
    };
    p.document().map_err(|d| Diagnostics(vec![d]))?;
    if p.diags.is_empty() {
        Ok(p.doc)
    } else {
        Err(Diagnostics(p.diags))
    }
}

type PResult<T> = Result<T, Diagnostic>;

/// An unresolved linear combination.
struct LinCombAst {
    terms: Vec<(Rational, String, SourceSpan)>,
    span: SourceSpan,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    doc: Document,
    diags: Vec<Diagnostic>,
}

fn syntax(span: SourceSpan, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagnosticKind::Syntax, span, msg)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, tok: Tok) -> PResult<SourceSpan> {
        let t = self.next();
        if t.tok == tok {
            Ok(t.span)
        } else {
            Err(syntax(t.span, format!("expected {}, found {}", tok.describe(), t.tok.describe())))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<SourceSpan> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(t.span),
            other => Err(syntax(t.span, format!("expected `{kw}`, found {}", other.describe()))),
        }
    }

    fn ident(&mut self) -> PResult<(String, SourceSpan)> {
        let t = self.next();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.span)),
            other => Err(syntax(t.span, format!("expected a name, found {}", other.describe()))),
        }
    }

    fn integer(&mut self) -> PResult<(BigInt, SourceSpan)> {
        let neg = if self.at(&Tok::Minus) {
            self.next();
            true
        } else {
            false
        };
        let start = self.prev_span();
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok((if neg { -n } else { n }, if neg { start.to(t.span) } else { t.span })),
            other => Err(syntax(t.span, format!("expected an integer, found {}", other.describe()))),
        }
    }

    /// Skips to the `}` closing an already opened block.
    fn skip_block(&mut self) -> PResult<()> {
        let mut depth = 1;
        loop {
            let t = self.next();
            match t.tok {
                Tok::LBrace => depth += 1,
                Tok::RBrace => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                Tok::Eof => return Err(syntax(t.span, "unterminated block")),
                _ => {}
            }
        }
    }

    fn error(&mut self, kind: DiagnosticKind, span: SourceSpan, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(kind, span, msg));
    }

    fn check_fresh(&mut self, name: &str, span: SourceSpan) -> bool {
        if self.doc.items.iter().any(|i| i.name() == name) {
            self.error(DiagnosticKind::Resolution, span, format!("`{name}` is already declared"));
            false
        } else {
            true
        }
    }

    fn document(&mut self) -> PResult<()> {
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(()),
                Tok::Ident(kw) => match kw.as_str() {
                    "algebra" => self.algebra()?,
                    "subalgebra" => self.subalgebra_decl()?,
                    "sum" => self.sum()?,
                    "quotient" => self.quotient_decl()?,
                    "morphism" => self.morphism()?,
                    "action" => self.action()?,
                    _ => return Err(syntax(t.span, format!("expected a declaration, found `{kw}`"))),
                },
                other => return Err(syntax(t.span, format!("expected a declaration, found {}", other.describe()))),
            }
        }
    }

    fn lincomb(&mut self) -> PResult<LinCombAst> {
        let start = self.peek().span;
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let negative = match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    false
                }
                Tok::Minus => {
                    self.next();
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.next();
            let (coef, name) = match t.tok {
                Tok::Int(n) => {
                    let mut den = BigInt::from(1);
                    let mut num_span = t.span;
                    if self.at(&Tok::Slash) {
                        self.next();
                        let d = self.next();
                        match d.tok {
                            Tok::Int(k) if !k.is_zero() => den = k,
                            Tok::Int(_) => return Err(syntax(d.span, "zero denominator")),
                            other => {
                                return Err(syntax(d.span, format!("expected a denominator, found {}", other.describe())))
                            }
                        }
                        num_span = num_span.to(d.span);
                    }
                    let c = Rational::new(n, den);
                    if self.at(&Tok::Star) {
                        self.next();
                    }
                    match self.peek().tok.clone() {
                        Tok::Ident(s) => {
                            let sp = self.next().span;
                            (c, Some((s, sp)))
                        }
                        _ if c.is_zero() => (c, None),
                        _ => {
                            return Err(syntax(
                                num_span,
                                "constant terms are not allowed; a coefficient must multiply a generator",
                            ))
                        }
                    }
                }
                Tok::Ident(s) => (Rational::from_int(1), Some((s, t.span))),
                other => return Err(syntax(t.span, format!("expected a term, found {}", other.describe()))),
            };
            if let Some((name, sp)) = name {
                terms.push((if negative { -coef } else { coef }, name, sp));
            }
        }
        Ok(LinCombAst {
            terms,
            span: start.to(self.prev_span()),
        })
    }

    fn resolve(&mut self, basis: &GradedBasis, ast: &LinCombAst) -> Option<Vec<Rational>> {
        let mut v = zero_vector(basis.len());
        let mut ok = true;
        for (c, name, sp) in &ast.terms {
            match basis.index_of(name) {
                Some(i) => v[i] += c,
                None => {
                    self.error(DiagnosticKind::Resolution, *sp, format!("no generator named `{name}`"));
                    ok = false;
                }
            }
        }
        ok.then_some(v)
    }

    /// Reports a degree diagnostic unless `v` is zero or homogeneous of
    /// degree `expected`.
    fn check_degree(&mut self, basis: &GradedBasis, v: &[Rational], expected: i64, span: SourceSpan, what: &str) -> bool {
        match basis.homogeneous_degree(v) {
            Ok(None) => true,
            Ok(Some(k)) if k == expected => true,
            Ok(Some(k)) => {
                self.error(DiagnosticKind::Degree, span, format!("{what} has degree {k}, expected {expected}"));
                false
            }
            Err(_) => {
                self.error(DiagnosticKind::Degree, span, format!("{what} is not homogeneous, expected degree {expected}"));
                false
            }
        }
    }

    fn lookup_algebra(&mut self, name: &str, span: SourceSpan) -> Option<Dgla> {
        match self.doc.algebra(name) {
            Some(a) => Some(a.clone()),
            None => {
                self.error(DiagnosticKind::Resolution, span, format!("no algebra named `{name}`"));
                None
            }
        }
    }

    fn algebra(&mut self) -> PResult<()> {
        let kw = self.expect_keyword("algebra")?;
        let (name, name_span) = self.ident()?;
        self.expect(Tok::LBrace)?;
        self.expect_keyword("basis")?;
        let mut gens = Vec::new();
        let mut gen_spans = Vec::new();
        while !self.at(&Tok::Semi) {
            let (g, sp) = self.ident()?;
            self.expect(Tok::Colon)?;
            let (deg, dsp) = self.integer()?;
            let degree = i64::try_from(deg).map_err(|_| syntax(dsp, "degree out of range"))?;
            gens.push(Generator { name: g, degree });
            gen_spans.push(sp);
            if self.at(&Tok::Comma) {
                self.next();
            }
        }
        self.expect(Tok::Semi)?;
        let mut ok = true;
        let basis = match GradedBasis::new(gens.clone()) {
            Ok(b) => b,
            Err(StructureError::DuplicateName(n)) => {
                let sp = gens
                    .iter()
                    .zip(&gen_spans)
                    .filter(|(g, _)| g.name == n)
                    .nth(1)
                    .map(|(_, s)| *s)
                    .unwrap_or(name_span);
                self.error(DiagnosticKind::Resolution, sp, format!("duplicate generator `{n}`"));
                ok = false;
                GradedBasis::empty()
            }
            Err(e) => return Err(syntax(name_span, e.to_string())),
        };
        let n = basis.len();
        let mut ds: Vec<(usize, Vec<Rational>)> = Vec::new();
        let mut d_seen: HashMap<usize, SourceSpan> = HashMap::new();
        let mut table: HashMap<(usize, usize), Vec<Rational>> = HashMap::new();
        let mut brackets: Vec<(usize, usize, Vec<Rational>)> = Vec::new();
        while !self.at(&Tok::RBrace) {
            let start = self.peek().span;
            if self.at_keyword("d") {
                self.next();
                let (g, gsp) = self.ident()?;
                self.expect(Tok::Eq)?;
                let rhs = self.lincomb()?;
                let end = self.expect(Tok::Semi)?;
                let stmt = start.to(end);
                let Some(i) = basis.index_of(&g) else {
                    self.error(DiagnosticKind::Resolution, gsp, format!("no generator named `{g}`"));
                    ok = false;
                    continue;
                };
                let Some(v) = self.resolve(&basis, &rhs) else {
                    ok = false;
                    continue;
                };
                if !self.check_degree(&basis, &v, basis.degree(i) + 1, rhs.span, &format!("d {g}")) {
                    ok = false;
                    continue;
                }
                if d_seen.insert(i, stmt).is_some() {
                    self.error(DiagnosticKind::Structure, stmt, format!("second differential for `{g}`"));
                    ok = false;
                    continue;
                }
                ds.push((i, v));
            } else if self.at(&Tok::LBracket) {
                self.next();
                let (a, asp) = self.ident()?;
                self.expect(Tok::Comma)?;
                let (b, bsp) = self.ident()?;
                self.expect(Tok::RBracket)?;
                self.expect(Tok::Eq)?;
                let rhs = self.lincomb()?;
                let end = self.expect(Tok::Semi)?;
                let stmt = start.to(end);
                let (Some(i), Some(j)) = (basis.index_of(&a), basis.index_of(&b)) else {
                    let (bad, sp) = if basis.index_of(&a).is_none() { (&a, asp) } else { (&b, bsp) };
                    self.error(DiagnosticKind::Resolution, sp, format!("no generator named `{bad}`"));
                    ok = false;
                    continue;
                };
                let Some(v) = self.resolve(&basis, &rhs) else {
                    ok = false;
                    continue;
                };
                let expected = basis.degree(i) + basis.degree(j);
                if !self.check_degree(&basis, &v, expected, stmt, &format!("[{a},{b}] = {}", basis.format_vector(&v))) {
                    ok = false;
                    continue;
                }
                let sign: Rational = antisymmetry_sign(basis.degree(i), basis.degree(j));
                let mirrored: Vec<Rational> = v.iter().map(|c| c.times(&sign)).collect();
                let clash = table.get(&(i, j)).is_some_and(|e| *e != v) || table.get(&(j, i)).is_some_and(|e| *e != mirrored);
                if clash {
                    self.error(
                        DiagnosticKind::InconsistentBracket,
                        stmt,
                        format!("[{a},{b}] contradicts an earlier bracket under graded antisymmetry"),
                    );
                    ok = false;
                    continue;
                }
                table.insert((i, j), v.clone());
                table.insert((j, i), mirrored);
                brackets.push((i, j, v));
            } else {
                let t = self.next();
                return Err(syntax(t.span, format!("expected `d`, `[` or `}}`, found {}", t.tok.describe())));
            }
        }
        let end = self.expect(Tok::RBrace)?;
        let fresh = self.check_fresh(&name, name_span);
        if !(ok && fresh) {
            return Ok(());
        }
        match Dgla::from_structure(basis, &ds, &brackets) {
            Ok(algebra) => {
                debug_assert_eq!(algebra.dim(), n);
                self.doc.items.push(Item::Algebra(AlgebraItem {
                    name,
                    definition: Definition::Explicit,
                    algebra,
                }))
            }
            Err(e) => self.error(DiagnosticKind::Structure, kw.to(end), e.to_string()),
        }
        Ok(())
    }

    fn subalgebra_decl(&mut self) -> PResult<()> {
        let kw = self.expect_keyword("subalgebra")?;
        let (name, name_span) = self.ident()?;
        self.expect_keyword("of")?;
        let (parent, psp) = self.ident()?;
        self.expect(Tok::LBrace)?;
        self.expect_keyword("span")?;
        let mut elems: Vec<(String, LinCombAst, SourceSpan)> = Vec::new();
        while !self.at(&Tok::Semi) {
            let start = self.peek().span;
            let named = matches!(self.peek().tok, Tok::Ident(_)) && self.toks[self.pos + 1].tok == Tok::Eq;
            let (ename, rhs) = if named {
                let (n, _) = self.ident()?;
                self.expect(Tok::Eq)?;
                (n, self.lincomb()?)
            } else {
                let rhs = self.lincomb()?;
                match rhs.terms.as_slice() {
                    [(c, g, _)] if c == &Rational::from_int(1) => (g.clone(), rhs),
                    _ => return Err(syntax(rhs.span, "name this element: write `NAME = ...`")),
                }
            };
            elems.push((ename, rhs, start.to(self.prev_span())));
            if self.at(&Tok::Comma) {
                self.next();
            }
        }
        self.expect(Tok::Semi)?;
        let end = self.expect(Tok::RBrace)?;
        let Some(m) = self.lookup_algebra(&parent, psp) else {
            return Ok(());
        };
        if !self.check_fresh(&name, name_span) {
            return Ok(());
        }
        let mut spans = Vec::new();
        for (ename, rhs, sp) in &elems {
            match self.resolve(m.basis(), rhs) {
                Some(v) => spans.push((ename.clone(), v)),
                None => return Ok(()),
            }
            let _ = sp;
        }
        let span_of = |n: &str| elems.iter().rev().find(|e| e.0 == n).map(|e| e.2);
        match subalgebra(&m, &spans) {
            Ok((algebra, inclusion)) => self.doc.items.push(Item::Algebra(AlgebraItem {
                name,
                definition: Definition::Subalgebra { parent, inclusion },
                algebra,
            })),
            Err(e) => {
                let sp = match &e {
                    StructureError::Dependent(n) | StructureError::NotHomogeneous(n) | StructureError::DuplicateName(n) => {
                        span_of(n).unwrap_or(kw.to(end))
                    }
                    _ => kw.to(end),
                };
                self.error(DiagnosticKind::Structure, sp, e.to_string());
            }
        }
        Ok(())
    }

    fn sum(&mut self) -> PResult<()> {
        self.expect_keyword("sum")?;
        let (name, name_span) = self.ident()?;
        self.expect(Tok::Eq)?;
        let (left, lsp) = self.ident()?;
        self.expect(Tok::Plus)?;
        let (right, rsp) = self.ident()?;
        self.expect(Tok::Semi)?;
        let (Some(l), Some(r)) = (self.lookup_algebra(&left, lsp), self.lookup_algebra(&right, rsp)) else {
            return Ok(());
        };
        if self.check_fresh(&name, name_span) {
            let s = direct_sum(&l, &r);
            self.doc.items.push(Item::Algebra(AlgebraItem {
                name,
                definition: Definition::Sum { left, right },
                algebra: s.algebra,
            }));
        }
        Ok(())
    }

    fn quotient_decl(&mut self) -> PResult<()> {
        let kw = self.expect_keyword("quotient")?;
        let (name, name_span) = self.ident()?;
        self.expect_keyword("of")?;
        let (parent, psp) = self.ident()?;
        self.expect(Tok::LBrace)?;
        self.expect_keyword("ideal")?;
        let mut gens = Vec::new();
        while !self.at(&Tok::Semi) {
            gens.push(self.lincomb()?);
            if self.at(&Tok::Comma) {
                self.next();
            }
        }
        self.expect(Tok::Semi)?;
        let end = self.expect(Tok::RBrace)?;
        let Some(m) = self.lookup_algebra(&parent, psp) else {
            return Ok(());
        };
        if !self.check_fresh(&name, name_span) {
            return Ok(());
        }
        let mut ideal = Vec::new();
        for g in &gens {
            let Some(v) = self.resolve(m.basis(), g) else {
                return Ok(());
            };
            if m.basis().homogeneous_degree(&v).is_err() {
                self.error(DiagnosticKind::Degree, g.span, "ideal generators must be homogeneous");
                return Ok(());
            }
            ideal.push(v);
        }
        match quotient(&m, &ideal) {
            Ok((algebra, projection)) => self.doc.items.push(Item::Algebra(AlgebraItem {
                name,
                definition: Definition::Quotient {
                    parent,
                    ideal,
                    projection,
                },
                algebra,
            })),
            Err(e) => self.error(DiagnosticKind::Structure, kw.to(end), e.to_string()),
        }
        Ok(())
    }

    /// `NAME -> lincomb ;` lines until `}`; columns default to `default`.
    fn assignments(
        &mut self,
        source: &GradedBasis,
        target: &GradedBasis,
        mut matrix: Matrix,
    ) -> PResult<Option<Matrix>> {
        let mut ok = true;
        let mut seen: HashMap<usize, ()> = HashMap::new();
        while !self.at(&Tok::RBrace) {
            let start = self.peek().span;
            let (g, gsp) = self.ident()?;
            self.expect(Tok::Arrow)?;
            let rhs = self.lincomb()?;
            let end = self.expect(Tok::Semi)?;
            let Some(j) = source.index_of(&g) else {
                self.error(DiagnosticKind::Resolution, gsp, format!("no generator named `{g}`"));
                ok = false;
                continue;
            };
            let Some(v) = self.resolve(target, &rhs) else {
                ok = false;
                continue;
            };
            if !self.check_degree(target, &v, source.degree(j), rhs.span, &format!("image of {g}")) {
                ok = false;
                continue;
            }
            if seen.insert(j, ()).is_some() {
                self.error(DiagnosticKind::Structure, start.to(end), format!("second assignment for `{g}`"));
                ok = false;
                continue;
            }
            for (i, c) in v.into_iter().enumerate() {
                matrix.set(i, j, c);
            }
        }
        Ok(ok.then_some(matrix))
    }

    fn morphism(&mut self) -> PResult<()> {
        self.expect_keyword("morphism")?;
        let (name, name_span) = self.ident()?;
        self.expect(Tok::Colon)?;
        let (source, ssp) = self.ident()?;
        self.expect(Tok::Arrow)?;
        let (target, tsp) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let l = self.lookup_algebra(&source, ssp);
        let m = self.lookup_algebra(&target, tsp);
        let (l, m) = match (l, m) {
            (Some(l), Some(m)) => (l, m),
            _ => {
                self.skip_block()?;
                return Ok(());
            }
        };
        let matrix = self.assignments(l.basis(), m.basis(), Matrix::zeros(m.dim(), l.dim()))?;
        self.expect(Tok::RBrace)?;
        if let (Some(matrix), true) = (matrix, self.check_fresh(&name, name_span)) {
            self.doc.items.push(Item::Morphism(MorphismItem {
                name,
                source,
                target,
                morphism: DglaMorphism::new(l, m, matrix),
            }));
        }
        Ok(())
    }

    fn action(&mut self) -> PResult<()> {
        let kw = self.expect_keyword("action")?;
        let (name, name_span) = self.ident()?;
        self.expect_keyword("on")?;
        let (on, osp) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let Some(m) = self.lookup_algebra(&on, osp) else {
            return self.skip_block();
        };
        let mut generators = Vec::new();
        let mut spans = Vec::new();
        let mut ok = true;
        while !self.at(&Tok::RBrace) {
            let start = self.expect_keyword("element")?;
            self.expect(Tok::LBrace)?;
            let g = self.assignments(m.basis(), m.basis(), Matrix::identity(m.dim()))?;
            let end = self.expect(Tok::RBrace)?;
            spans.push(start.to(end));
            match g {
                Some(g) => generators.push(g),
                None => ok = false,
            }
        }
        let end = self.expect(Tok::RBrace)?;
        if !ok || !self.check_fresh(&name, name_span) {
            return Ok(());
        }
        match FiniteAction::generated_by(m, generators.clone(), DEFAULT_ORDER_CAP) {
            Ok(action) => self.doc.items.push(Item::Action(ActionItem {
                name,
                on,
                generators,
                action,
            })),
            Err(e @ GroupError::Singular(i)) => self.error(DiagnosticKind::Structure, spans[i], e.to_string()),
            Err(e) => self.error(DiagnosticKind::Structure, kw.to(end), e.to_string()),
        }
        Ok(())
    }
}
