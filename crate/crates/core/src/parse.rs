//! Text formats: polynomials, matrix literals and substitutions.
//!
//! ```text
//! poly   := term (('+' | '-') term)*
//! term   := item ('*'? item)*
//! item   := coeff | factor
//! factor := var | '(' poly ')' | factor '^' NAT | '[' poly ',' poly ']'
//! var    := 'x' NAT ('[' NAME ']')?
//! coeff  := NAT ('/' NAT)? | 'z' NAT '^' NAT
//! ```
//!
//! A bracket directly after a variable is a degree tag when its content names
//! a group element, and a commutator juxtaposed with the variable otherwise.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::freealg::{GPolynomial, GVar};
use crate::grassmann::{parse_mask, GrassmannElement};
use crate::groups::FiniteGroup;
use crate::matalg::{GradedMatrixAlgebra, RingMatrix};
use crate::scalars::CycloScalar;

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    group: &'a FiniteGroup,
}

impl<'a> Cursor<'a> {
    fn new(text: &str, group: &'a FiniteGroup) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
            group,
        }
    }

    fn err_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let before = &self.chars[..pos.min(self.chars.len())];
        let line = before.iter().filter(|&&c| c == '\n').count() + 1;
        let column = before.iter().rev().take_while(|&&c| c != '\n').count() + 1;
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        self.err_at(self.pos, message)
    }

    fn peek(&mut self) -> Option<char> {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn nat(&mut self) -> Result<BigInt> {
        self.peek();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural number"));
        }
        Ok(self.chars[start..self.pos].iter().collect::<String>().parse().expect("digits"))
    }

    fn small(&mut self, what: &str) -> Result<u32> {
        let start = self.pos;
        let v = self.nat()?;
        u32::try_from(v).map_err(|_| self.err_at(start, format!("{what} is too large")))
    }

    fn poly(&mut self) -> Result<GPolynomial> {
        let mut acc = GPolynomial::zero();
        let mut negate = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some('+') => negate = false,
                Some('-') => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn starts_item(c: Option<char>) -> bool {
        matches!(c, Some('x' | 'z' | '(' | '[' | '0'..='9'))
    }

    fn term(&mut self) -> Result<GPolynomial> {
        if !Self::starts_item(self.peek()) {
            return Err(self.err("expected a term"));
        }
        let mut acc = self.item()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.item()?);
                }
                c if Self::starts_item(c) => acc = acc.mul(&self.item()?),
                _ => return Ok(acc),
            }
        }
    }

    fn item(&mut self) -> Result<GPolynomial> {
        let base = match self.peek() {
            Some('0'..='9') => {
                let num = self.nat()?;
                let q = if self.peek() == Some('/') {
                    self.pos += 1;
                    let at = self.pos;
                    let den = self.nat()?;
                    if den == BigInt::from(0) {
                        return Err(self.err_at(at, "zero denominator"));
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                return Ok(GPolynomial::constant(CycloScalar::from_rational(q)));
            }
            Some('z') => {
                self.pos += 1;
                let m = self.small("conductor")?;
                if m == 0 {
                    return Err(self.err("root of unity order must be positive"));
                }
                self.expect('^')?;
                let k = self.small("exponent")?;
                return Ok(GPolynomial::constant(CycloScalar::root_of_unity(m, k as i64)));
            }
            Some('x') => self.variable()?,
            Some('(') => {
                self.pos += 1;
                let p = self.poly()?;
                self.expect(')')?;
                p
            }
            Some('[') => self.commutator()?,
            _ => return Err(self.err("expected a coefficient or factor")),
        };
        self.powers(base)
    }

    fn powers(&mut self, mut base: GPolynomial) -> Result<GPolynomial> {
        while self.peek() == Some('^') {
            self.pos += 1;
            let k = self.small("exponent")?;
            base = base.pow(k);
        }
        Ok(base)
    }

    fn commutator(&mut self) -> Result<GPolynomial> {
        self.expect('[')?;
        let p = self.poly()?;
        self.expect(',')?;
        let q = self.poly()?;
        self.expect(']')?;
        Ok(p.commutator(&q))
    }

    /// Index of the `]` matching the `[` at `open`.
    fn matching_bracket(&self, open: usize) -> Option<usize> {
        let mut depth = 0usize;
        for (k, &c) in self.chars.iter().enumerate().skip(open) {
            match c {
                '[' => depth += 1,
                ']' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(k);
                    }
                }
                _ => {}
            }
        }
        None
    }

    fn variable(&mut self) -> Result<GPolynomial> {
        let at = self.pos;
        self.expect('x')?;
        if !self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            return Err(self.err("expected a variable index after `x`"));
        }
        let index = self.small("variable index")?;
        if index == 0 {
            return Err(self.err_at(at, "variable indices start at 1"));
        }
        let mut degree = self.group.identity();
        if self.chars.get(self.pos) == Some(&'[') {
            let open = self.pos;
            let close = self
                .matching_bracket(open)
                .ok_or_else(|| self.err_at(open, "unclosed `[`"))?;
            let content: String = self.chars[open + 1..close].iter().collect();
            match self.group.lookup(&content) {
                Ok(g) => {
                    degree = g;
                    self.pos = close + 1;
                }
                Err(e) => {
                    if !has_top_level_comma(&content) {
                        return Err(e);
                    }
                    // juxtaposed commutator, parsed by the caller
                }
            }
        }
        Ok(GPolynomial::var(GVar::new(index, degree)))
    }
}

fn has_top_level_comma(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

/// Parses a polynomial; degree tags are resolved against `group`.
pub fn parse_polynomial(text: &str, group: &FiniteGroup) -> Result<GPolynomial> {
    let mut c = Cursor::new(text, group);
    if c.peek().is_none() {
        return Err(c.err("empty polynomial"));
    }
    let p = c.poly()?;
    if c.peek().is_some() {
        return Err(c.err("unexpected trailing input"));
    }
    p.check_variables()?;
    Ok(p)
}

/// Parses a matrix literal such as `E12 + e1e2*E21`, `z3^1*E11 - 1/2*E22` or
/// `E1_10`. Grassmann factors are written `e1e2` or `e1*e2`.
pub fn parse_matrix(text: &str, n: usize, budget: usize) -> Result<RingMatrix> {
    let syntax = |column: usize, message: String| Error::Syntax {
        line: 1,
        column,
        message,
    };
    let mut out = RingMatrix::zero(n, budget);
    let mut pos = 0;
    for (negative, term) in split_signed(text) {
        let column = pos + 1;
        pos += term.len() + 1;
        let mut scalar = if negative { CycloScalar::from_integer(-1) } else { CycloScalar::one() };
        let mut grass = GrassmannElement::one(budget);
        let mut unit: Option<(usize, usize)> = None;
        for factor in term.split('*').map(str::trim) {
            if let Some(rest) = factor.strip_prefix('E') {
                if unit.is_some() {
                    return Err(syntax(column, format!("two matrix units in `{term}`")));
                }
                let (i, j) = parse_unit(rest, n).ok_or_else(|| syntax(column, format!("bad matrix unit `{factor}`")))?;
                unit = Some((i, j));
            } else if factor.starts_with('e') {
                let mask = parse_mask(factor)?;
                if 64 - mask.leading_zeros() as usize > budget {
                    return Err(Error::BudgetExceeded {
                        needed: 64 - mask.leading_zeros() as usize,
                        budget,
                    });
                }
                grass = grass.wedge(&GrassmannElement::monomial(budget, mask, CycloScalar::one()));
            } else {
                let c: CycloScalar = factor.parse()?;
                scalar = &scalar * &c;
            }
        }
        let (i, j) = unit.ok_or_else(|| syntax(column, format!("term `{term}` has no matrix unit")))?;
        let entry = grass.scale(&scalar);
        out.set(i, j, out.get(i, j).add(&entry));
    }
    Ok(out)
}

/// `12` (n < 10) or `1_10`, 1-based; returns 0-based indices.
fn parse_unit(s: &str, n: usize) -> Option<(usize, usize)> {
    let (i, j) = match s.split_once('_') {
        Some((a, b)) => (a.parse::<usize>().ok()?, b.parse::<usize>().ok()?),
        None if s.len() == 2 && s.chars().all(|c| c.is_ascii_digit()) => {
            let d: Vec<usize> = s.chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
            (d[0], d[1])
        }
        None => return None,
    };
    (1..=n).contains(&i).then_some(())?;
    (1..=n).contains(&j).then_some((i - 1, j - 1))
}

/// Splits at top-level `+`/`-`, keeping a leading sign per term.
fn split_signed(text: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if (c == '+' || c == '-') && depth == 0 {
            if !current.trim().is_empty() {
                out.push((negative, current.trim().to_string()));
            }
            current.clear();
            negative = c == '-';
            continue;
        }
        current.push(c);
    }
    if !current.trim().is_empty() {
        out.push((negative, current.trim().to_string()));
    }
    out
}

/// Parses `x1=E12, x2=e1*E21` into an assignment; the variable degrees are
/// taken from `f` so that tags need not be repeated.
pub fn parse_assignment(
    text: &str,
    f: &GPolynomial,
    algebra: &GradedMatrixAlgebra,
) -> Result<BTreeMap<GVar, RingMatrix>> {
    let vars = f.variables();
    let mut out = BTreeMap::new();
    for part in split_assignments(text) {
        let (lhs, rhs) = part
            .split_once('=')
            .ok_or_else(|| Error::Spec(format!("expected `xN=matrix`, got `{part}`")))?;
        let lhs = lhs.trim();
        let index: u32 = lhs
            .strip_prefix('x')
            .and_then(|s| s.split('[').next())
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Spec(format!("bad variable `{lhs}`")))?;
        let var = vars
            .iter()
            .find(|v| v.index == index)
            .copied()
            .ok_or_else(|| Error::Spec(format!("x{index} does not occur in the polynomial")))?;
        out.insert(var, parse_matrix(rhs, algebra.n(), algebra.budget())?);
    }
    Ok(out)
}

/// Splits at commas that start a new `xN=` binding.
fn split_assignments(text: &str) -> Vec<String> {
    let mut parts: Vec<String> = Vec::new();
    for chunk in text.split(',') {
        let starts_binding = chunk.trim_start().starts_with('x') && chunk.contains('=');
        match parts.last_mut() {
            Some(last) if !starts_binding => {
                last.push(',');
                last.push_str(chunk);
            }
            _ => parts.push(chunk.to_string()),
        }
    }
    parts.into_iter().filter(|p| !p.trim().is_empty()).collect()
}
