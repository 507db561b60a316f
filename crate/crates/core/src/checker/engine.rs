//! Evaluation of multilinear polynomials on tuples of basis representatives.
//!
//! For a multilinear piece in slots `0..d`, every monomial is walked as a chain
//! of matrix units: the representative chosen for a letter must start where the
//! previous one ended. Each complete chain contributes `sign * coeff` to the
//! entry `(start, end)` of the value at the tuple of chosen representatives,
//! where `sign` comes from reordering the odd generators. Contributions are
//! sorted and summed per tuple; the piece vanishes iff every sum is zero.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::freealg::{GPolynomial, GVar};
use crate::grassmann::{wedge_sign, GrassmannElement};
use crate::groups::Elem;
use crate::matalg::{BasisRep, GradedMatrixAlgebra, RingMatrix};
use crate::scalars::CycloScalar;

/// Tuples are packed into a `u128`, `bits` per slot.
const KEY_BITS: usize = 128;

/// Which substitutions are admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admissibility {
    /// Each variable takes values in the component of its degree.
    Graded,
    /// Each variable takes arbitrary values (all components).
    Ordinary,
}

/// A multilinear polynomial prepared for enumeration.
#[derive(Clone, Debug)]
pub struct Piece {
    pub poly: GPolynomial,
    pub vars: Vec<GVar>,
    monomials: Vec<(Vec<u8>, u16)>,
    coeffs: Vec<CycloScalar>,
    domains: Vec<Vec<BasisRep>>,
    odd_bit: Vec<u8>,
    by_row: Vec<Vec<Vec<(u8, BasisRep)>>>,
    bits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Contribution {
    key: u128,
    start: u8,
    end: u8,
    coeff: u16,
    sign: i8,
}

impl Piece {
    pub fn new(poly: GPolynomial, algebra: &GradedMatrixAlgebra, mode: Admissibility) -> Result<Self> {
        if !poly.is_multilinear() {
            return Err(Error::NonMultilinear);
        }
        let vars: Vec<GVar> = poly.variables().into_iter().collect();
        let slot_of: BTreeMap<GVar, u8> = vars.iter().enumerate().map(|(k, v)| (*v, k as u8)).collect();
        let mut coeffs: Vec<CycloScalar> = Vec::new();
        let mut monomials = Vec::with_capacity(poly.terms().len());
        for (m, c) in poly.terms() {
            let id = match coeffs.iter().position(|x| x == c) {
                Some(i) => i,
                None => {
                    coeffs.push(c.clone());
                    coeffs.len() - 1
                }
            };
            monomials.push((m.letters.iter().map(|v| slot_of[v]).collect(), id as u16));
        }
        let support: Vec<Elem> = algebra.support().into_iter().collect();
        let domains: Vec<Vec<BasisRep>> = vars
            .iter()
            .map(|v| match mode {
                Admissibility::Graded => algebra.slot_domain(v.degree),
                Admissibility::Ordinary => {
                    let mut all: Vec<BasisRep> = support.iter().flat_map(|&g| algebra.slot_domain(g)).collect();
                    all.sort();
                    all.dedup();
                    all
                }
            })
            .collect();
        let widest = domains.iter().map(Vec::len).max().unwrap_or(1);
        if widest > 256 {
            return Err(Error::SizeLimit(format!("{widest} basis representatives for one variable (limit 256)")));
        }
        let bits = (usize::BITS - (widest.max(2) - 1).leading_zeros()) as usize;
        if vars.len() * bits > KEY_BITS {
            return Err(Error::SizeLimit(format!(
                "{} variables after multilinearization (limit {})",
                vars.len(),
                KEY_BITS / bits
            )));
        }
        let mut odd_bit = vec![u8::MAX; vars.len()];
        let mut next = 0u8;
        for (k, d) in domains.iter().enumerate() {
            if d.iter().any(|r| r.odd) {
                odd_bit[k] = next;
                next += 1;
            }
        }
        if next as usize > algebra.budget() {
            return Err(Error::BudgetExceeded {
                needed: next as usize,
                budget: algebra.budget(),
            });
        }
        let n = algebra.n();
        let by_row = domains
            .iter()
            .map(|d| {
                let mut rows = vec![Vec::new(); n];
                for (i, r) in d.iter().enumerate() {
                    rows[r.row].push((i as u8, *r));
                }
                rows
            })
            .collect();
        Ok(Self {
            poly,
            vars,
            monomials,
            coeffs,
            domains,
            odd_bit,
            by_row,
            bits,
        })
    }

    pub fn slots(&self) -> usize {
        self.vars.len()
    }

    /// Representative chosen for each slot under a packed key.
    pub fn tuple(&self, key: u128) -> Vec<BasisRep> {
        (0..self.slots())
            .map(|k| self.domains[k][((key >> (self.bits * k)) & ((1 << self.bits) - 1)) as usize])
            .collect()
    }

    /// Grassmann mask of the value at a tuple: the odd generators used.
    fn mask_of(&self, tuple: &[BasisRep]) -> u64 {
        tuple
            .iter()
            .enumerate()
            .filter(|(_, r)| r.odd)
            .fold(0, |acc, (k, _)| acc | 1 << self.odd_bit[k])
    }

    /// Matrix substituted for slot `k` under the representative `rep`.
    pub fn rep_matrix(&self, algebra: &GradedMatrixAlgebra, k: usize, rep: &BasisRep) -> RingMatrix {
        let budget = algebra.budget();
        let entry = if rep.odd {
            GrassmannElement::generator(budget, self.odd_bit[k] as usize + 1)
        } else {
            GrassmannElement::one(budget)
        };
        RingMatrix::elementary(algebra.n(), rep.row, rep.col, entry)
    }

    fn walk(&self, letters: &[u8], coeff: u16, out: &mut Vec<Contribution>) {
        let first = letters[0] as usize;
        for (choice, rep) in self.domains[first].iter().enumerate() {
            let (mask, sign) = if rep.odd { (1u64 << self.odd_bit[first], 1i8) } else { (0, 1) };
            self.walk_from(
                letters,
                1,
                rep.row as u8,
                rep.col,
                (choice as u128) << (self.bits * first),
                mask,
                sign,
                coeff,
                out,
            );
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn walk_from(
        &self,
        letters: &[u8],
        pos: usize,
        start: u8,
        col: usize,
        key: u128,
        mask: u64,
        sign: i8,
        coeff: u16,
        out: &mut Vec<Contribution>,
    ) {
        if pos == letters.len() {
            out.push(Contribution {
                key,
                start,
                end: col as u8,
                coeff,
                sign,
            });
            return;
        }
        let slot = letters[pos] as usize;
        for &(choice, rep) in &self.by_row[slot][col] {
            let (mask, sign) = if rep.odd {
                let bit = 1u64 << self.odd_bit[slot];
                (mask | bit, sign * wedge_sign(mask, bit) as i8)
            } else {
                (mask, sign)
            };
            self.walk_from(
                letters,
                pos + 1,
                start,
                rep.col,
                key | (choice as u128) << (self.bits * slot),
                mask,
                sign,
                coeff,
                out,
            );
        }
    }

    fn contributions(&self, exec: ExecMode) -> Vec<Contribution> {
        let mut all = exec::flat_map(exec, &self.monomials, |(letters, coeff)| {
            let mut out = Vec::new();
            if letters.is_empty() {
                // constant term: value is coeff * identity, keyed by the empty tuple
                return Vec::new();
            }
            self.walk(letters, *coeff, &mut out);
            out
        });
        exec::sort_unstable(exec, &mut all);
        all
    }

    fn group_sum(&self, group: &[Contribution]) -> CycloScalar {
        let mut counts = vec![0i64; self.coeffs.len()];
        for c in group {
            counts[c.coeff as usize] += c.sign as i64;
        }
        counts
            .iter()
            .zip(&self.coeffs)
            .filter(|(n, _)| **n != 0)
            .fold(CycloScalar::zero(), |acc, (&n, c)| &acc + &(c * &CycloScalar::from_integer(n)))
    }

    /// First tuple with a nonzero value, or `None` if the piece vanishes.
    pub fn find_nonzero(&self, exec: ExecMode) -> Option<u128> {
        if self.monomials.iter().any(|(l, _)| l.is_empty()) {
            // a constant piece is nonzero on the empty tuple
            return Some(0);
        }
        let contribs = self.contributions(exec);
        contribs
            .chunk_by(|a, b| (a.key, a.start, a.end) == (b.key, b.start, b.end))
            .find(|g| !self.group_sum(g).is_zero())
            .map(|g| g[0].key)
    }

    /// All nonzero values, keyed by tuple.
    pub fn values(&self, algebra: &GradedMatrixAlgebra, exec: ExecMode) -> BTreeMap<u128, RingMatrix> {
        let n = algebra.n();
        let budget = algebra.budget();
        let mut out: BTreeMap<u128, RingMatrix> = BTreeMap::new();
        if let Some((_, id)) = self.monomials.iter().find(|(l, _)| l.is_empty()) {
            out.insert(0, RingMatrix::identity(n, budget).scale(&self.coeffs[*id as usize]));
        }
        for g in self
            .contributions(exec)
            .chunk_by(|a, b| (a.key, a.start, a.end) == (b.key, b.start, b.end))
        {
            let s = self.group_sum(g);
            if s.is_zero() {
                continue;
            }
            let c = g[0];
            let mask = self.mask_of(&self.tuple(c.key));
            let entry = GrassmannElement::monomial(budget, mask, s);
            let m = out.entry(c.key).or_insert_with(|| RingMatrix::zero(n, budget));
            let sum = m.get(c.start as usize, c.end as usize).add(&entry);
            m.set(c.start as usize, c.end as usize, sum);
        }
        out.retain(|_, m| !m.is_zero());
        out
    }

    /// Assignment of representative matrices for a tuple.
    pub fn assignment(&self, algebra: &GradedMatrixAlgebra, key: u128) -> BTreeMap<GVar, RingMatrix> {
        self.tuple(key)
            .iter()
            .enumerate()
            .map(|(k, rep)| (self.vars[k], self.rep_matrix(algebra, k, rep)))
            .collect()
    }
}

/// Multihomogeneous components of `f`, each fully multilinearized, with the
/// map from new variables to the original ones.
pub fn multilinear_pieces(f: &GPolynomial) -> Result<Vec<(GPolynomial, BTreeMap<GVar, GVar>)>> {
    f.check_variables()?;
    f.multihomogeneous_components()
        .iter()
        .map(GPolynomial::multilinearize)
        .collect()
}

/// A piece of `f` with a nonzero value, if any.
pub struct NonzeroPiece {
    pub piece: Piece,
    pub origin: BTreeMap<GVar, GVar>,
    pub key: u128,
}

/// Checks that every multilinear piece of `f` vanishes; on failure returns the
/// first offending piece and tuple.
pub fn find_nonvanishing_piece(
    f: &GPolynomial,
    algebra: &GradedMatrixAlgebra,
    mode: Admissibility,
    exec: ExecMode,
) -> Result<Option<NonzeroPiece>> {
    let pieces = multilinear_pieces(f)?;
    // build all pieces first so budget errors surface before any verdict
    let prepared = pieces
        .into_iter()
        .map(|(p, origin)| Ok((Piece::new(p, algebra, mode)?, origin)))
        .collect::<Result<Vec<_>>>()?;
    for (piece, origin) in prepared {
        if let Some(key) = piece.find_nonzero(exec) {
            return Ok(Some(NonzeroPiece { piece, origin, key }));
        }
    }
    Ok(None)
}
