//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use gpi_core::freealg::{GMonomial, GPolynomial, GVar};
use gpi_core::groups::{Elem, FiniteGroup};
use gpi_core::matalg::ElementaryGrading;
use gpi_core::scalars::CycloScalar;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

/// Commutative polynomial in indeterminates `t_0, t_1, ...`.
type CPoly = BTreeMap<Vec<u16>, CycloScalar>;

fn cpoly_add_into(acc: &mut CPoly, other: &CPoly, scale: &CycloScalar) {
    for (e, c) in other {
        let v = acc.entry(e.clone()).or_insert_with(CycloScalar::zero);
        *v = &*v + &(c * scale);
        if v.is_zero() {
            acc.remove(e);
        }
    }
}

fn cpoly_mul(a: &CPoly, b: &CPoly) -> CPoly {
    let mut out = CPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let v = out.entry(e.clone()).or_insert_with(CycloScalar::zero);
            *v = &*v + &(ca * cb);
            if v.is_zero() {
                out.remove(&e);
            }
        }
    }
    out
}

type SymMatrix = Vec<Vec<CPoly>>;

fn sym_mul(a: &SymMatrix, b: &SymMatrix) -> SymMatrix {
    let n = a.len();
    let mut out = vec![vec![CPoly::new(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_empty() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_empty() {
                    continue;
                }
                let p = cpoly_mul(&a[i][k], &b[k][j]);
                cpoly_add_into(&mut out[i][j], &p, &CycloScalar::one());
            }
        }
    }
    out
}

/// Whether `f` vanishes on `M_n(F)` with the given grading, by substituting
/// for each variable of degree `g` the generic element
/// `sum t_{v,ij} E_ij` over the `E_ij` of degree `g` and expanding.
pub fn generic_coordinates_identity(f: &GPolynomial, grading: &ElementaryGrading) -> bool {
    let group = grading.group();
    let tuple = grading.tuple();
    let n = tuple.len();
    let vars: Vec<GVar> = f.variables().into_iter().collect();
    // indeterminate numbering
    let mut slots: Vec<(usize, usize, usize)> = Vec::new();
    for (k, v) in vars.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if group.mul(group.inv(tuple[i]), tuple[j]) == v.degree {
                    slots.push((k, i, j));
                }
            }
        }
    }
    let width = slots.len();
    let generic: Vec<SymMatrix> = (0..vars.len())
        .map(|k| {
            let mut m = vec![vec![CPoly::new(); n]; n];
            for (t, &(kk, i, j)) in slots.iter().enumerate() {
                if kk == k {
                    let mut e = vec![0u16; width];
                    e[t] = 1;
                    m[i][j].insert(e, CycloScalar::one());
                }
            }
            m
        })
        .collect();
    let index: BTreeMap<GVar, usize> = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let mut total = vec![vec![CPoly::new(); n]; n];
    for (m, c) in f.terms() {
        let mut acc: SymMatrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut p = CPoly::new();
                        if i == j {
                            p.insert(vec![0u16; width], CycloScalar::one());
                        }
                        p
                    })
                    .collect()
            })
            .collect();
        for v in &m.letters {
            acc = sym_mul(&acc, &generic[index[v]]);
        }
        for i in 0..n {
            for j in 0..n {
                cpoly_add_into(&mut total[i][j], &acc[i][j], c);
            }
        }
    }
    total.iter().all(|row| row.iter().all(CPoly::is_empty))
}

/// Sign and union of `e_{S_1} e_{S_2} ... e_{S_k}` for monomials given as
/// masks, or `None` when two masks overlap.
pub fn grassmann_word(masks: &[u64]) -> Option<(i64, u64)> {
    let mut union = 0u64;
    let mut inversions = 0u32;
    for (p, &s) in masks.iter().enumerate() {
        if union & s != 0 {
            return None;
        }
        for &earlier in &masks[..p] {
            // pairs (a in earlier, b in s) with a > b
            for b in 0..64 {
                if s >> b & 1 == 1 {
                    inversions += (earlier >> (b + 1)).count_ones();
                }
            }
        }
        union |= s;
    }
    Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, union))
}

/// Whether a multilinear `f` with integer coefficients is a graded identity of
/// `M_{a,b}(E)`, enumerating every tuple of basis elements `e_S E_ij` with
/// `S` a subset of `2 deg f` generators. Tuples with overlapping supports are
/// skipped since every monomial then contains a repeated generator.
pub fn exhaustive_mab_identity(f: &GPolynomial, a: usize, b: usize) -> bool {
    assert!(f.is_multilinear());
    let vars: Vec<GVar> = f.variables().into_iter().collect();
    let d = vars.len();
    let budget = 2 * d;
    let t: Vec<usize> = std::iter::repeat_n(0, a).chain(std::iter::repeat_n(1, b)).collect();
    let n = a + b;
    let slot: BTreeMap<GVar, usize> = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let terms: Vec<(Vec<usize>, i64)> = f
        .terms()
        .iter()
        .map(|(m, c)| {
            let q = c.as_rational().expect("rational coefficient");
            assert!(q.is_integer(), "integer coefficients only");
            (m.letters.iter().map(|v| slot[v]).collect(), q.to_integer().to_i64().unwrap())
        })
        .collect();
    if terms.iter().any(|(l, _)| l.is_empty()) {
        return false;
    }
    // distinct vectors of per-monomial Grassmann signs over disjoint mask tuples
    let mut sign_vectors: HashSet<Vec<i64>> = HashSet::new();
    let masks_of_parity = |p: usize| -> Vec<u64> {
        (0u64..1 << budget).filter(|m| m.count_ones() as usize % 2 == p).collect()
    };
    let domains: Vec<Vec<u64>> = vars.iter().map(|v| masks_of_parity(v.degree)).collect();
    let mut chosen = vec![0u64; d];
    fn rec(
        k: usize,
        used: u64,
        domains: &[Vec<u64>],
        chosen: &mut Vec<u64>,
        terms: &[(Vec<usize>, i64)],
        out: &mut HashSet<Vec<i64>>,
    ) {
        if k == domains.len() {
            let v = terms
                .iter()
                .map(|(letters, _)| {
                    let word: Vec<u64> = letters.iter().map(|&s| chosen[s]).collect();
                    grassmann_word(&word).map_or(0, |(s, _)| s)
                })
                .collect();
            out.insert(v);
            return;
        }
        for &m in &domains[k] {
            if m & used == 0 {
                chosen[k] = m;
                rec(k + 1, used | m, domains, chosen, terms, out);
            }
        }
    }
    rec(0, 0, &domains, &mut chosen, &terms, &mut sign_vectors);
    // unit choices per slot: E_ij with t_i + t_j = degree
    let units: Vec<Vec<(usize, usize)>> = vars
        .iter()
        .map(|v| {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| (t[i] + t[j]) % 2 == v.degree)
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; d];
    loop {
        if units.iter().all(|u| !u.is_empty()) {
            for signs in &sign_vectors {
                let mut entries: BTreeMap<(usize, usize), i64> = BTreeMap::new();
                for ((letters, c), s) in terms.iter().zip(signs) {
                    if *s == 0 {
                        continue;
                    }
                    let mut pos: Option<(usize, usize)> = None;
                    let mut alive = true;
                    for &slot in letters {
                        let (i, j) = units[slot][choice[slot]];
                        pos = match pos {
                            None => Some((i, j)),
                            Some((r, col)) if col == i => Some((r, j)),
                            _ => {
                                alive = false;
                                break;
                            }
                        };
                    }
                    if alive {
                        *entries.entry(pos.unwrap()).or_default() += c * s;
                    }
                }
                if entries.values().any(|&x| x != 0) {
                    return false;
                }
            }
        } else {
            return true;
        }
        let mut k = 0;
        while k < d {
            choice[k] += 1;
            if choice[k] < units[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == d {
            return true;
        }
    }
}

/// Random multihomogeneous polynomial: a fixed multidegree over variables with
/// degrees drawn from `support`, a few random words, integer coefficients.
pub fn random_multihomogeneous(
    rng: &mut impl Rng,
    support: &[Elem],
    max_total: usize,
    max_vars: usize,
) -> GPolynomial {
    loop {
        let total = rng.random_range(1..=max_total);
        let nvars = rng.random_range(1..=max_vars.min(total));
        let mut multiset: Vec<u32> = (1..=nvars as u32).collect();
        while multiset.len() < total {
            multiset.push(rng.random_range(1..=nvars as u32));
        }
        let degrees: Vec<Elem> = (0..nvars).map(|_| support[rng.random_range(0..support.len())]).collect();
        let mut f = GPolynomial::zero();
        let words = rng.random_range(1..=4);
        for _ in 0..words {
            multiset.shuffle(rng);
            let m = GMonomial::new(multiset.iter().map(|&i| GVar::new(i, degrees[i as usize - 1])).collect());
            let c = rng.random_range(-2i64..=2);
            if c != 0 {
                f.add_term(m, CycloScalar::from_integer(c));
            }
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// `[a, b]` for random `a`, `b` in disjoint neutral variables: an identity
/// whenever the neutral component is commutative.
pub fn random_neutral_commutator(rng: &mut impl Rng, neutral: Elem) -> GPolynomial {
    let a = random_multihomogeneous(rng, &[neutral], 2, 2);
    let b = random_multihomogeneous(rng, &[neutral], 2, 2);
    let offset = a.max_index();
    let b = GPolynomial::from_terms(b.terms().iter().map(|(m, c)| {
        let letters = m.letters.iter().map(|v| GVar::new(v.index + offset, v.degree)).collect();
        (GMonomial::new(letters), c.clone())
    }));
    a.commutator(&b)
}

/// Random multilinear polynomial in `x_1..x_d` with the given degrees and
/// coefficients `±1` on up to four distinct words.
pub fn random_multilinear(rng: &mut impl Rng, degrees: &[Elem]) -> GPolynomial {
    loop {
        let d = degrees.len();
        let mut perm: Vec<u32> = (1..=d as u32).collect();
        let mut f = GPolynomial::zero();
        let mut seen = BTreeSet::new();
        for _ in 0..rng.random_range(1..=4) {
            perm.shuffle(rng);
            if !seen.insert(perm.clone()) {
                continue;
            }
            let m = GMonomial::new(perm.iter().map(|&i| GVar::new(i, degrees[i as usize - 1])).collect());
            f.add_term(m, CycloScalar::from_integer(if rng.random_bool(0.5) { 1 } else { -1 }));
        }
        if !f.is_zero() && f.variables().len() == d {
            return f;
        }
    }
}

pub fn parse(text: &str, group: &FiniteGroup) -> GPolynomial {
    gpi_core::parse::parse_polynomial(text, group).unwrap()
}
