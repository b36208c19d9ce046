//! The Maurer–Cartan equation `dx + ½[x,x] = 0` written out in coordinates
//! on the degree-1 part, and exact polynomial substitution.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::graded::Dgla;
use crate::scalar::{denominator_lcm, display_coefficient, Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("replacement for {0} mentions {0} itself")]
    Circular(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("polynomials over different variable lists")]
    VariableMismatch,
}

/// Exponent vector, ordered graded-lexicographically: higher total degree
/// first, then lexicographically larger exponents first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponents(pub Vec<u32>);

impl Exponents {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .total()
            .cmp(&self.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial over named variables; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<F: Field = Rational> {
    variables: Vec<String>,
    terms: BTreeMap<Exponents, F>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(variables: Vec<String>) -> Self {
        MultiPoly {
            variables,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(variables: Vec<String>, c: F) -> Self {
        let n = variables.len();
        let mut p = Self::zero(variables);
        p.add_term(Exponents(vec![0; n]), c);
        p
    }

    pub fn variable(variables: Vec<String>, i: usize) -> Self {
        let mut e = vec![0; variables.len()];
        e[i] = 1;
        let mut p = Self::zero(variables);
        p.add_term(Exponents(e), F::one());
        p
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponents::total).max()
    }

    pub fn coefficient(&self, e: &[u32]) -> F {
        self.terms.get(&Exponents(e.to_vec())).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, e: Exponents, c: F) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(F::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    fn check_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.variables == other.variables {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, a: &F) -> Self {
        let mut out = Self::zero(self.variables.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.times(a));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.variables.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.0.iter().zip(&e2.0).map(|(a, b)| a + b).collect();
                out.add_term(Exponents(e), c1.times(c2));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.variables.clone(), F::one());
        for _ in 0..k {
            out = out.mul(self).expect("same variables");
        }
        out
    }

    /// Replaces `var` by `replacement` everywhere.
    pub fn substitute(&self, var: &str, replacement: &Self) -> Result<Self, PolyError> {
        self.check_vars(replacement)?;
        let i = self
            .var_index(var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        if replacement.terms.keys().any(|e| e.0[i] > 0) {
            return Err(PolyError::Circular(var.to_string()));
        }
        let mut out = Self::zero(self.variables.clone());
        let mut powers: BTreeMap<u32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e.0[i];
            let mut rest = e.0.clone();
            rest[i] = 0;
            let mut mono = Self::zero(self.variables.clone());
            mono.add_term(Exponents(rest), c.clone());
            let rk = powers.entry(k).or_insert_with(|| replacement.pow(k));
            out = out.add(&mono.mul(rk).expect("same variables")).expect("same variables");
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[F]) -> F {
        let mut s = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                for _ in 0..k {
                    t *= x;
                }
            }
            s += &t;
        }
        s
    }

    /// Multiplies by the least common multiple of the denominators.
    pub fn clear_denominators(&self) -> Self {
        let l = denominator_lcm(self.terms.values());
        self.scale(&F::from_bigints(l, BigInt::from(1)).expect("nonzero"))
    }

    /// Whether `self = λ other` for some nonzero `λ`.
    pub fn is_scalar_multiple_of(&self, other: &Self) -> bool {
        if self.variables != other.variables || self.terms.len() != other.terms.len() {
            return false;
        }
        let Some((e, c)) = other.terms.iter().next() else {
            return self.is_zero();
        };
        let Some(s) = self.terms.get(e) else {
            return false;
        };
        let mut lambda = s.clone();
        lambda /= c;
        *self == other.scale(&lambda)
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    /// e.g. `-x_e1^2 + x_e2^2 + 2*x_e2*x_e3`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.to_bigints().0 < BigInt::from(0);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = e
                .0
                .iter()
                .zip(&self.variables)
                .filter(|(k, _)| **k > 0)
                .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            let coef = display_coefficient(&abs);
            if factors.is_empty() {
                write!(f, "{coef}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{coef}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// One equation per degree-2 generator.
#[derive(Debug, Clone)]
pub struct McSystem<F: Field = Rational> {
    pub variables: Vec<String>,
    /// Degree-2 generator names, one per equation.
    pub equations: Vec<String>,
    /// Coordinates of `dx + ½[x,x]`.
    pub raw: Vec<MultiPoly<F>>,
    /// `raw` with denominators cleared.
    pub cleared: Vec<MultiPoly<F>>,
}

/// Coordinates of `dx + ½[x,x]` for `x = Σ x_{name} v_{name}` over the
/// degree-1 generators.
pub fn mc_system<F: Field>(l: &Dgla<F>) -> McSystem<F> {
    let b = l.basis();
    let ones = b.indices_of_degree(1);
    let twos = b.indices_of_degree(2);
    let variables: Vec<String> = ones.iter().map(|&i| format!("x_{}", b.name(i))).collect();
    let half = {
        let mut h = F::one();
        h /= &F::from_int(2);
        h
    };
    let mut raw: Vec<MultiPoly<F>> = twos.iter().map(|_| MultiPoly::zero(variables.clone())).collect();
    let n = ones.len();
    for (a, &i) in ones.iter().enumerate() {
        let di = l.d_basis(i);
        for (row, &h) in twos.iter().enumerate() {
            let mut e = vec![0; n];
            e[a] = 1;
            raw[row].add_term(Exponents(e), di[h].clone());
        }
        for (c, &j) in ones.iter().enumerate() {
            let bij = l.bracket_basis(i, j);
            for (row, &h) in twos.iter().enumerate() {
                let mut e = vec![0; n];
                e[a] += 1;
                e[c] += 1;
                raw[row].add_term(Exponents(e), bij[h].times(&half));
            }
        }
    }
    let cleared = raw.iter().map(MultiPoly::clear_denominators).collect();
    McSystem {
        variables,
        equations: twos.iter().map(|&h| b.name(h).to_string()).collect(),
        raw,
        cleared,
    }
}

/// `dx + ½[x,x]` evaluated directly in the algebra.
pub fn mc_value<F: Field>(l: &Dgla<F>, x: &[F]) -> Vec<F> {
    let mut v = l.differential(x);
    let half = F::one() / F::from_int(2);
    for (a, c) in v.iter_mut().zip(l.bracket(x, x)) {
        *a += &c.times(&half);
    }
    v
}
