//! Exhaustive search for products `f g` (disjoint variables) that are central
//! while a factor is not.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::freealg::{GMonomial, GPolynomial, GVar};
use crate::groups::{Elem, FiniteGroup, Permutation};
use crate::matalg::{AlgebraKind, ElementaryGrading, GradedMatrixAlgebra};
use crate::scalars::CycloScalar;

use super::classify::classify_with;
use super::{check_central_with, shift_variables, CheckOptions, Status};

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub maxdeg: usize,
    pub coeffs: Vec<CycloScalar>,
    pub exec: ExecMode,
    /// Refuse to scan more candidates than this.
    pub max_candidates: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            maxdeg: 2,
            coeffs: vec![CycloScalar::one(), CycloScalar::from_integer(-1)],
            exec: ExecMode::Auto,
            max_candidates: 400,
        }
    }
}

/// What the classifier predicts for the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Holds,
    Fails,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct CentralProduct {
    pub f: GPolynomial,
    pub g: GPolynomial,
    pub f_status: Status,
    pub g_status: Status,
}

impl CentralProduct {
    pub fn factors_central(&self) -> bool {
        self.f_status == Status::Central && self.g_status == Status::Central
    }
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub expectation: Expectation,
    pub candidates: usize,
    pub pairs: usize,
    pub central_products: Vec<CentralProduct>,
    /// Central products with a non-central factor although primeness is expected.
    pub violations: Vec<CentralProduct>,
    /// Central products with a non-central factor where failure is expected.
    pub counterexamples: Vec<CentralProduct>,
}

impl ScanReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Prediction of the classifier for the algebra, where it applies.
pub fn expectation(algebra: &GradedMatrixAlgebra) -> Result<Expectation> {
    let from_grading = |grading: &ElementaryGrading| -> Result<Expectation> {
        if !grading.is_distinct() || grading.n() > 8 {
            return Ok(Expectation::Unknown);
        }
        let verdict = classify_with(grading, algebra.conductor(), &CheckOptions::quick())?;
        Ok(if verdict.holds() { Expectation::Holds } else { Expectation::Fails })
    };
    match algebra.kind() {
        AlgebraKind::MnF => from_grading(algebra.grading()),
        AlgebraKind::Mab => from_grading(algebra.grading()),
        AlgebraKind::MnE => Ok(match from_grading(algebra.grading())? {
            Expectation::Holds => Expectation::Holds,
            _ => Expectation::Unknown,
        }),
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (1..=total.saturating_sub(parts - 1))
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Distinct words with the given multidegree over variables `1..=r`.
fn words(multidegree: &[usize]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut remaining = multidegree.to_vec();
    let total: usize = multidegree.iter().sum();
    let mut current = Vec::with_capacity(total);
    fn rec(remaining: &mut [usize], current: &mut Vec<u32>, total: usize, out: &mut Vec<Vec<u32>>) {
        if current.len() == total {
            out.push(current.clone());
            return;
        }
        for v in 0..remaining.len() {
            if remaining[v] > 0 {
                remaining[v] -= 1;
                current.push(v as u32 + 1);
                rec(remaining, current, total, out);
                current.pop();
                remaining[v] += 1;
            }
        }
    }
    rec(&mut remaining, &mut current, total, &mut out);
    out
}

fn product_of(choices: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    choices.iter().fold(vec![Vec::new()], |acc, options| {
        acc.into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect()
    })
}

/// Canonical representative up to renaming variables and scaling.
fn canonical(f: &GPolynomial, group: &FiniteGroup) -> (String, GPolynomial) {
    let vars: Vec<GVar> = f.variables().into_iter().collect();
    let mut best: Option<(String, GPolynomial)> = None;
    for p in Permutation::all(vars.len()) {
        let rename: BTreeMap<GVar, GVar> = vars
            .iter()
            .enumerate()
            .map(|(k, v)| (*v, GVar::new(p.apply(k) as u32 + 1, v.degree)))
            .collect();
        let renamed = GPolynomial::from_terms(f.terms().iter().map(|(m, c)| {
            (GMonomial::new(m.letters.iter().map(|v| rename[v]).collect()), c.clone())
        }));
        let lead = renamed.terms().values().next().expect("nonzero").clone();
        let scaled = renamed.scale(&lead.inverse().expect("nonzero lead"));
        let text = scaled.display(group);
        if best.as_ref().is_none_or(|(b, _)| text < *b) {
            best = Some((text, scaled));
        }
    }
    best.expect("at least one renaming")
}

/// Multihomogeneous candidates of total degree `1..=maxdeg`, up to renaming and scaling.
pub fn candidates(algebra: &GradedMatrixAlgebra, opts: &ScanOptions) -> Result<Vec<GPolynomial>> {
    if opts.maxdeg > 3 {
        return Err(Error::SizeLimit("primeness scan supports maxdeg <= 3".into()));
    }
    let group = algebra.group();
    let support: Vec<Elem> = algebra.support().into_iter().collect();
    let mut coeff_options = vec![CycloScalar::zero()];
    for c in &opts.coeffs {
        if !c.is_zero() && !coeff_options.contains(c) {
            coeff_options.push(c.clone());
        }
    }
    let mut seen: BTreeMap<String, GPolynomial> = BTreeMap::new();
    for total in 1..=opts.maxdeg {
        for r in 1..=total {
            for multidegree in compositions(total, r) {
                let ws = words(&multidegree);
                for degrees in product_of(&vec![support.clone(); r]) {
                    let monomials: Vec<GMonomial> = ws
                        .iter()
                        .map(|w| GMonomial::new(w.iter().map(|&i| GVar::new(i, degrees[i as usize - 1])).collect()))
                        .collect();
                    let mut idx = vec![0usize; monomials.len()];
                    loop {
                        if idx.iter().any(|&i| i != 0) {
                            let f = GPolynomial::from_terms(
                                monomials.iter().cloned().zip(idx.iter().map(|&i| coeff_options[i].clone())),
                            );
                            let (key, canon) = canonical(&f, group);
                            seen.entry(key).or_insert(canon);
                            if seen.len() > opts.max_candidates {
                                return Err(Error::SizeLimit(format!(
                                    "more than {} candidate polynomials",
                                    opts.max_candidates
                                )));
                            }
                        }
                        // odometer over coefficient choices
                        let mut pos = 0;
                        while pos < idx.len() {
                            idx[pos] += 1;
                            if idx[pos] < coeff_options.len() {
                                break;
                            }
                            idx[pos] = 0;
                            pos += 1;
                        }
                        if pos == idx.len() {
                            break;
                        }
                    }
                }
            }
        }
    }
    Ok(seen.into_values().collect())
}

/// Checks every ordered pair of non-identity candidates.
pub fn primeness_enumeration_test(algebra: &GradedMatrixAlgebra, opts: &ScanOptions) -> Result<ScanReport> {
    let expectation = expectation(algebra)?;
    let inner = CheckOptions {
        exec: ExecMode::Sequential,
        ..CheckOptions::quick()
    };
    let all = candidates(algebra, opts)?;
    let statuses = exec::map(opts.exec, &all, |f| check_central_with(f, algebra, &inner).map(|v| v.status));
    let mut kept = Vec::new();
    for (f, s) in all.into_iter().zip(statuses) {
        let s = s?;
        if s != Status::Identity {
            kept.push((f, s));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..kept.len()).flat_map(|i| (0..kept.len()).map(move |j| (i, j))).collect();
    let results = exec::map(opts.exec, &pairs, |&(i, j)| {
        let f = &kept[i].0;
        let g = shift_variables(&kept[j].0, f.max_index());
        check_central_with(&f.mul(&g), algebra, &inner).map(|v| v.status)
    });
    let mut report = ScanReport {
        expectation,
        candidates: kept.len(),
        pairs: pairs.len(),
        central_products: Vec::new(),
        violations: Vec::new(),
        counterexamples: Vec::new(),
    };
    for (&(i, j), status) in pairs.iter().zip(results) {
        if status? != Status::Central {
            continue;
        }
        let found = CentralProduct {
            f: kept[i].0.clone(),
            g: shift_variables(&kept[j].0, kept[i].0.max_index()),
            f_status: kept[i].1,
            g_status: kept[j].1,
        };
        if !found.factors_central() {
            match expectation {
                Expectation::Holds => report.violations.push(found.clone()),
                _ => report.counterexamples.push(found.clone()),
            }
        }
        report.central_products.push(found);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(words(&[1, 1]).len(), 2);
        assert_eq!(words(&[2, 1]).len(), 3);
    }

    #[test]
    fn candidates_are_canonical() {
        let m2 = GradedMatrixAlgebra::mnf(ElementaryGrading::trivial(2), 1);
        let c = candidates(&m2, &ScanOptions::default()).unwrap();
        // x1, x1^2, x1x2, x1x2 + x2x1, x1x2 - x2x1
        assert_eq!(c.len(), 5);
    }
}
