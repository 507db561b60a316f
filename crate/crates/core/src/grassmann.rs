//! The Grassmann algebra on a finite number of generators with its parity grading.
//!
//! Basis monomials `e_{i1}...e_{ik}` (i1 < ... < ik) are bitmasks; bit `i-1`
//! stands for `e_i`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::CycloScalar;

pub const MAX_BUDGET: usize = 62;

/// Sign of `e_a * e_b` relative to `e_{a|b}`; zero when the supports overlap.
pub fn wedge_sign(a: u64, b: u64) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn mask_parity(mask: u64) -> u8 {
    (mask.count_ones() % 2) as u8
}

pub fn mask_to_string(mask: u64) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| format!("e{}", i + 1))
        .collect()
}

/// Parses `e1e2e5` (or `1` for the unit) into a bitmask.
pub fn parse_mask(text: &str) -> Result<u64> {
    let text = text.trim();
    if text == "1" {
        return Ok(0);
    }
    let syntax = |message: &str| Error::Syntax {
        line: 1,
        column: 1,
        message: format!("{message} in `{text}`"),
    };
    let mut mask = 0u64;
    let mut last = 0usize;
    for part in text.split('e').skip(1) {
        let i: usize = part.parse().map_err(|_| syntax("bad generator index"))?;
        if i == 0 || i > MAX_BUDGET {
            return Err(syntax("generator index out of range"));
        }
        if i <= last {
            return Err(syntax("generators must be strictly increasing"));
        }
        last = i;
        mask |= 1 << (i - 1);
    }
    if !text.starts_with('e') || mask == 0 {
        return Err(syntax("expected a Grassmann monomial"));
    }
    Ok(mask)
}

/// Element of the Grassmann algebra on `budget` generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannElement {
    budget: usize,
    terms: BTreeMap<u64, CycloScalar>,
}

impl GrassmannElement {
    pub fn zero(budget: usize) -> Self {
        assert!(budget <= MAX_BUDGET, "Grassmann budget above {MAX_BUDGET}");
        Self {
            budget,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(budget: usize, c: CycloScalar) -> Self {
        Self::monomial(budget, 0, c)
    }

    pub fn one(budget: usize) -> Self {
        Self::scalar(budget, CycloScalar::one())
    }

    /// `e_i`, 1-based.
    pub fn generator(budget: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= budget, "generator e{i} outside budget {budget}");
        Self::monomial(budget, 1 << (i - 1), CycloScalar::one())
    }

    pub fn monomial(budget: usize, mask: u64, c: CycloScalar) -> Self {
        let mut out = Self::zero(budget);
        assert!(budget == 64 || mask >> budget == 0, "monomial outside budget");
        if !c.is_zero() {
            out.terms.insert(mask, c);
        }
        out
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn terms(&self) -> &BTreeMap<u64, CycloScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same element viewed with another budget (must still contain all generators used).
    pub fn with_budget(&self, budget: usize) -> Self {
        assert!(self.terms.keys().all(|m| budget >= 64 || m >> budget == 0));
        Self {
            budget,
            terms: self.terms.clone(),
        }
    }

    fn add_term(&mut self, mask: u64, c: CycloScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self {
            budget: self.budget.max(other.budget),
            terms: self.terms.clone(),
        };
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            budget: self.budget,
            terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.budget);
        }
        Self {
            budget: self.budget,
            terms: self.terms.iter().map(|(&m, x)| (m, x * c)).collect(),
        }
    }

    /// Exterior product. Elements with different budgets are multiplied in the
    /// larger one.
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.budget.max(other.budget));
        for (&a, x) in &self.terms {
            for (&b, y) in &other.terms {
                match wedge_sign(a, b) {
                    0 => {}
                    1 => out.add_term(a | b, x * y),
                    _ => out.add_term(a | b, -(x * y)),
                }
            }
        }
        out
    }

    /// The `E_p` part.
    pub fn parity_component(&self, p: u8) -> Self {
        Self {
            budget: self.budget,
            terms: self
                .terms
                .iter()
                .filter(|(&m, _)| mask_parity(m) == p % 2)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    /// `Some(p)` if every monomial has parity `p` (zero is homogeneous of both;
    /// reported as `Some(0)`).
    pub fn parity(&self) -> Option<u8> {
        let mut parities = self.terms.keys().map(|&m| mask_parity(m));
        match parities.next() {
            None => Some(0),
            Some(p) => parities.all(|q| q == p).then_some(p),
        }
    }

    pub fn is_homogeneous_of(&self, p: u8) -> bool {
        self.terms.keys().all(|&m| mask_parity(m) == p % 2)
    }

    /// Scalar part if the element is a multiple of 1.
    pub fn as_scalar(&self) -> Option<CycloScalar> {
        match self.terms.len() {
            0 => Some(CycloScalar::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coeff = c.to_string();
            let multi_term = c.conductor() > 1 && c.coeffs().iter().filter(|q| !num_traits::Zero::is_zero(*q)).count() > 1;
            let coeff = if multi_term { format!("({coeff})") } else { coeff };
            if m == 0 {
                f.write_str(&coeff)?;
            } else if c.is_one() {
                f.write_str(&mask_to_string(m))?;
            } else {
                write!(f, "{coeff}*{}", mask_to_string(m))?;
            }
        }
        Ok(())
    }
}

/// One basis monomial per slot with pairwise-disjoint supports: odd slots get
/// consecutive fresh generators `e1, e2, ...`, even slots get `1`.
pub fn parity_representatives(budget: usize, parities: &[u8]) -> Result<Vec<GrassmannElement>> {
    let needed = parities.iter().filter(|&&p| p % 2 == 1).count();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut next = 1;
    Ok(parities
        .iter()
        .map(|&p| {
            if p % 2 == 1 {
                next += 1;
                GrassmannElement::generator(budget, next - 1)
            } else {
                GrassmannElement::one(budget)
            }
        })
        .collect())
}
