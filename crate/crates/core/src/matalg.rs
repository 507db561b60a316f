//! Matrix algebras `M_n(F)`, `M_n(E)` and `M_{a,b}(E)` with their gradings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::freealg::{GPolynomial, GVar};
use crate::grassmann::{mask_parity, mask_to_string, GrassmannElement};
use crate::groups::{Character, Elem, FiniteGroup, Permutation, PermutationGroup};
use crate::scalars::CycloScalar;

/// Elementary grading by a tuple `(g_1, ..., g_n)`: `deg E_ij = g_i^{-1} g_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryGrading {
    group: FiniteGroup,
    tuple: Vec<Elem>,
    distinct: bool,
}

impl ElementaryGrading {
    pub fn new(group: FiniteGroup, tuple: Vec<Elem>) -> Result<Self> {
        if tuple.is_empty() {
            return Err(Error::Spec("empty grading tuple".into()));
        }
        if let Some(&bad) = tuple.iter().find(|&&g| g >= group.order()) {
            return Err(Error::UnknownGroupElement(bad.to_string()));
        }
        let distinct = tuple.iter().collect::<BTreeSet<_>>().len() == tuple.len();
        Ok(Self { group, tuple, distinct })
    }

    pub fn from_names(group: FiniteGroup, names: &[&str]) -> Result<Self> {
        let tuple = names.iter().map(|n| group.lookup(n)).collect::<Result<Vec<_>>>()?;
        Self::new(group, tuple)
    }

    pub fn trivial(n: usize) -> Self {
        Self::new(FiniteGroup::trivial(), vec![0; n]).expect("trivial grading")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn tuple(&self) -> &[Elem] {
        &self.tuple
    }

    pub fn n(&self) -> usize {
        self.tuple.len()
    }

    pub fn is_distinct(&self) -> bool {
        self.distinct
    }

    /// `g_i^{-1} g_j`, 0-based.
    pub fn degree_of(&self, i: usize, j: usize) -> Elem {
        self.group.mul(self.group.inv(self.tuple[i]), self.tuple[j])
    }

    pub fn support(&self) -> BTreeSet<Elem> {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.degree_of(i, j)).collect()
    }

    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.tuple.iter().map(|&g| self.group.name(g)).collect();
        format!("({}) over {}", names.join(","), self.group.description())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum AlgebraKind {
    MnF,
    MnE,
    Mab,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::MnF => "MnF",
            AlgebraKind::MnE => "MnE",
            AlgebraKind::Mab => "Mab",
        })
    }
}

/// A homogeneous basis element `e_S E_ij` (0-based `row`, `col`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElement {
    pub mask: u64,
    pub row: usize,
    pub col: usize,
}

/// Basis representative used by the checker: `E_ij` times either `1` or a
/// single fresh generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisRep {
    pub row: usize,
    pub col: usize,
    pub odd: bool,
}

/// Descriptor of a graded matrix algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrixAlgebra {
    kind: AlgebraKind,
    grading: ElementaryGrading,
    split: Option<(usize, usize)>,
    budget: usize,
    conductor: u32,
}

/// Largest budget for which basis enumeration over all masks is allowed.
pub const ENUMERATION_BUDGET_LIMIT: usize = 16;

impl GradedMatrixAlgebra {
    pub fn mnf(grading: ElementaryGrading, conductor: u32) -> Self {
        Self {
            kind: AlgebraKind::MnF,
            grading,
            split: None,
            budget: 0,
            conductor,
        }
    }

    pub fn mne(grading: ElementaryGrading, budget: usize, conductor: u32) -> Self {
        Self {
            kind: AlgebraKind::MnE,
            grading,
            split: None,
            budget,
            conductor,
        }
    }

    /// `M_{a,b}(E)` with its canonical `Z2`-grading.
    pub fn mab(a: usize, b: usize, budget: usize, conductor: u32) -> Result<Self> {
        if a + b == 0 {
            return Err(Error::Spec("M_{a,b}(E) needs a + b >= 1".into()));
        }
        let z2 = FiniteGroup::cyclic(2);
        let tuple = std::iter::repeat_n(0, a).chain(std::iter::repeat_n(1, b)).collect();
        Ok(Self {
            kind: AlgebraKind::Mab,
            grading: ElementaryGrading::new(z2, tuple)?,
            split: Some((a, b)),
            budget,
            conductor,
        })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn grading(&self) -> &ElementaryGrading {
        &self.grading
    }

    pub fn group(&self) -> &FiniteGroup {
        self.grading.group()
    }

    pub fn n(&self) -> usize {
        self.grading.n()
    }

    pub fn split(&self) -> Option<(usize, usize)> {
        self.split
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn has_grassmann_entries(&self) -> bool {
        self.kind != AlgebraKind::MnF
    }

    pub fn with_budget(&self, budget: usize) -> Self {
        Self {
            budget,
            ..self.clone()
        }
    }

    pub fn with_conductor(&self, conductor: u32) -> Self {
        Self {
            conductor,
            ..self.clone()
        }
    }

    pub fn describe(&self) -> String {
        match self.kind {
            AlgebraKind::MnF => format!("M{}(F), tuple {}", self.n(), self.grading.describe()),
            AlgebraKind::MnE => format!("M{}(E), tuple {}", self.n(), self.grading.describe()),
            AlgebraKind::Mab => {
                let (a, b) = self.split.expect("Mab split");
                format!("M{a},{b}(E), canonical Z2-grading")
            }
        }
    }

    /// Degrees `g` with a nonzero component.
    pub fn support(&self) -> BTreeSet<Elem> {
        self.grading.support()
    }

    /// Whether `e_S E_ij` (with `|S|` of parity `parity`) lies in the algebra
    /// and in component `g`.
    pub fn admits(&self, parity: u8, row: usize, col: usize, g: Elem) -> bool {
        let d = self.grading.degree_of(row, col);
        match self.kind {
            AlgebraKind::MnF => parity == 0 && d == g,
            AlgebraKind::MnE => d == g,
            AlgebraKind::Mab => d == g && parity as usize == d,
        }
    }

    /// Checker representatives for component `g`.
    pub fn slot_domain(&self, g: Elem) -> Vec<BasisRep> {
        let n = self.n();
        let mut out = Vec::new();
        for row in 0..n {
            for col in 0..n {
                for parity in 0..=1u8 {
                    if self.admits(parity, row, col, g) {
                        out.push(BasisRep {
                            row,
                            col,
                            odd: parity == 1,
                        });
                    }
                }
            }
        }
        out
    }

    /// All basis elements `e_S E_ij` of component `g` within the budget.
    pub fn homogeneous_basis(&self, g: Elem) -> Result<Vec<BasisElement>> {
        if self.budget > ENUMERATION_BUDGET_LIMIT {
            return Err(Error::SizeLimit(format!(
                "basis enumeration at budget {} (limit {ENUMERATION_BUDGET_LIMIT})",
                self.budget
            )));
        }
        let masks: Vec<u64> = if self.has_grassmann_entries() {
            (0..1u64 << self.budget).collect()
        } else {
            vec![0]
        };
        let n = self.n();
        let mut out = Vec::new();
        for row in 0..n {
            for col in 0..n {
                for &mask in &masks {
                    if self.admits(mask_parity(mask), row, col, g) {
                        out.push(BasisElement { mask, row, col });
                    }
                }
            }
        }
        out.sort_by_key(|b| (b.mask.count_ones(), b.mask, b.row, b.col));
        Ok(out)
    }

    /// Union of the homogeneous bases over the support.
    pub fn full_basis(&self) -> Result<Vec<BasisElement>> {
        let mut out = Vec::new();
        for g in self.support() {
            out.extend(self.homogeneous_basis(g)?);
        }
        Ok(out)
    }

    pub fn basis_matrix(&self, b: &BasisElement) -> RingMatrix {
        RingMatrix::elementary(
            self.n(),
            b.row,
            b.col,
            GrassmannElement::monomial(self.budget, b.mask, CycloScalar::one()),
        )
    }

    /// Whether `m` lies in component `g`.
    pub fn is_homogeneous_of(&self, m: &RingMatrix, g: Elem) -> bool {
        m.n == self.n()
            && m.entries().all(|(i, j, x)| {
                x.terms().keys().all(|&mask| self.admits(mask_parity(mask), i, j, g))
            })
    }

    /// Whether `v` commutes with every homogeneous basis element.
    pub fn is_central_element(&self, v: &RingMatrix) -> Result<bool> {
        for b in self.full_basis()? {
            let m = self.basis_matrix(&b);
            if v.mul(&m) != m.mul(v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `f` evaluated at an admissible assignment.
    pub fn evaluate(&self, f: &GPolynomial, assignment: &BTreeMap<GVar, RingMatrix>) -> Result<RingMatrix> {
        let group = self.group();
        for v in f.variables() {
            let value = assignment.get(&v).ok_or_else(|| Error::NotAdmissible {
                var: v.display(group),
                expected: format!("a value of degree {}", group.name(v.degree)),
            })?;
            if !self.is_homogeneous_of(value, v.degree) {
                return Err(Error::NotAdmissible {
                    var: v.display(group),
                    expected: group.name(v.degree).to_string(),
                });
            }
        }
        Ok(evaluate_unchecked(f, self.n(), self.budget, assignment))
    }
}

/// Evaluation without admissibility checks; every variable must be assigned.
pub fn evaluate_unchecked(
    f: &GPolynomial,
    n: usize,
    budget: usize,
    assignment: &BTreeMap<GVar, RingMatrix>,
) -> RingMatrix {
    let mut out = RingMatrix::zero(n, budget);
    for (m, c) in f.terms() {
        let mut acc = RingMatrix::identity(n, budget).scale(c);
        for v in &m.letters {
            acc = acc.mul(&assignment[v]);
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc);
    }
    out
}

/// Square matrix with Grassmann entries (scalars are budget-0 elements).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMatrix {
    n: usize,
    budget: usize,
    data: Vec<GrassmannElement>,
}

impl RingMatrix {
    pub fn zero(n: usize, budget: usize) -> Self {
        Self {
            n,
            budget,
            data: vec![GrassmannElement::zero(budget); n * n],
        }
    }

    pub fn identity(n: usize, budget: usize) -> Self {
        let mut m = Self::zero(n, budget);
        for i in 0..n {
            m.data[i * n + i] = GrassmannElement::one(budget);
        }
        m
    }

    pub fn elementary(n: usize, i: usize, j: usize, entry: GrassmannElement) -> Self {
        let mut m = Self::zero(n, entry.budget());
        m.data[i * n + j] = entry;
        m
    }

    pub fn diagonal(budget: usize, diag: &[CycloScalar]) -> Self {
        let n = diag.len();
        let mut m = Self::zero(n, budget);
        for (i, c) in diag.iter().enumerate() {
            m.data[i * n + i] = GrassmannElement::scalar(budget, c.clone());
        }
        m
    }

    pub fn from_scalars(rows: &[Vec<CycloScalar>]) -> Self {
        let n = rows.len();
        let mut m = Self::zero(n, 0);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, c) in row.iter().enumerate() {
                m.data[i * n + j] = GrassmannElement::scalar(0, c.clone());
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn get(&self, i: usize, j: usize) -> &GrassmannElement {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: GrassmannElement) {
        self.data[i * self.n + j] = x;
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GrassmannElement)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(move |(k, x)| (k / self.n, k % self.n, x))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GrassmannElement::is_zero)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&GrassmannElement, &GrassmannElement) -> GrassmannElement) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        Self {
            n: self.n,
            budget: self.budget.max(other.budget),
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, GrassmannElement::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, GrassmannElement::sub)
    }

    pub fn neg(&self) -> Self {
        Self {
            n: self.n,
            budget: self.budget,
            data: self.data.iter().map(GrassmannElement::neg).collect(),
        }
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        Self {
            n: self.n,
            budget: self.budget,
            data: self.data.iter().map(|x| x.scale(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zero(n, self.budget.max(other.budget));
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        let t = a.wedge(b);
                        out.data[i * n + j] = out.data[i * n + j].add(&t);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.n, self.budget), |acc, _| acc.mul(self))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, _)| i == j)
    }

    /// Scalar diagonal entries, if the matrix is diagonal with scalar entries.
    pub fn scalar_diagonal(&self) -> Option<Vec<CycloScalar>> {
        if !self.is_diagonal() {
            return None;
        }
        (0..self.n).map(|i| self.get(i, i).as_scalar()).collect()
    }

    /// `c * I` for a field scalar `c`.
    pub fn is_scalar_matrix(&self) -> bool {
        self.scalar_diagonal()
            .is_some_and(|d| d.iter().all(|c| *c == d[0]))
    }

    /// `Lambda_sigma`: `E_ij -> E_{sigma(i) sigma(j)}`.
    pub fn permuted(&self, sigma: &Permutation) -> Self {
        let mut out = Self::zero(self.n, self.budget);
        for (i, j, x) in self.entries() {
            out.set(sigma.apply(i), sigma.apply(j), x.clone());
        }
        out
    }

    /// Single scalar `c` with `other = c * self`, when `self != 0` and one exists.
    pub fn proportionality(&self, other: &Self) -> Option<CycloScalar> {
        let (i, j, x) = self.entries().next()?;
        let (&mask, c) = x.terms().iter().next()?;
        let d = other.get(i, j).terms().get(&mask).cloned().unwrap_or_else(CycloScalar::zero);
        let ratio = &d * &c.inverse().ok()?;
        (self.scale(&ratio) == *other).then_some(ratio)
    }

    /// `diag(...)` text for scalar diagonal matrices, entry sum otherwise.
    pub fn pretty(&self) -> String {
        match self.scalar_diagonal() {
            Some(d) if self.n > 1 => {
                let parts: Vec<String> = d.iter().map(ToString::to_string).collect();
                format!("diag({})", parts.join(","))
            }
            _ => self.to_string(),
        }
    }
}

fn matrix_unit_name(n: usize, i: usize, j: usize) -> String {
    if n >= 10 {
        format!("E{}_{}", i + 1, j + 1)
    } else {
        format!("E{}{}", i + 1, j + 1)
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, x) in self.entries() {
            for (&mask, c) in x.terms() {
                let unit = matrix_unit_name(self.n, i, j);
                let body = if mask == 0 { unit } else { format!("{}*{unit}", mask_to_string(mask)) };
                let text = if c.is_one() {
                    body
                } else if (-c).is_one() {
                    format!("-{body}")
                } else {
                    format!("{}*{body}", crate::freealg::coefficient_text(c))
                };
                match (first, text.strip_prefix('-')) {
                    (true, _) => f.write_str(&text)?,
                    (false, Some(rest)) => write!(f, " - {rest}")?,
                    (false, None) => write!(f, " + {text}")?,
                }
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Permutations `sigma` with `deg E_{sigma(i) sigma(j)} = deg E_ij` for all `i, j`.
pub fn aut_subgroup_h(grading: &ElementaryGrading) -> Result<PermutationGroup> {
    let n = grading.n();
    if n > 8 {
        return Err(Error::SizeLimit(format!("automorphism search needs n <= 8, got {n}")));
    }
    let elements: Vec<Permutation> = Permutation::all(n)
        .into_iter()
        .filter(|s| {
            (0..n).all(|i| (0..n).all(|j| grading.degree_of(s.apply(i), s.apply(j)) == grading.degree_of(i, j)))
        })
        .collect();
    PermutationGroup::new(n, elements)
}

#[derive(Clone, Debug)]
pub enum CrossedProduct {
    Yes {
        /// Support `{h_1, ..., h_n}` after normalizing `h_i = g_1^{-1} g_i`.
        support: Vec<Elem>,
        /// `g -> sigma_g` with `(g h_1, ..., g h_n) = (h_{sigma_g(1)}, ...)`.
        sigma: BTreeMap<Elem, Permutation>,
        h: PermutationGroup,
    },
    No {
        reason: String,
        h: PermutationGroup,
    },
}

impl CrossedProduct {
    pub fn is_yes(&self) -> bool {
        matches!(self, CrossedProduct::Yes { .. })
    }

    pub fn h(&self) -> &PermutationGroup {
        match self {
            CrossedProduct::Yes { h, .. } | CrossedProduct::No { h, .. } => h,
        }
    }
}

pub fn is_crossed_product(grading: &ElementaryGrading) -> Result<CrossedProduct> {
    if !grading.is_distinct() {
        return Err(Error::PreconditionViolated("grading tuple has repeated entries".into()));
    }
    let h = aut_subgroup_h(grading)?;
    let n = grading.n();
    if h.order() != n {
        return Ok(CrossedProduct::No {
            reason: format!("|H| = {} but n = {n}", h.order()),
            h,
        });
    }
    let g = grading.group();
    let first_inv = g.inv(grading.tuple()[0]);
    let normalized: Vec<Elem> = grading.tuple().iter().map(|&x| g.mul(first_inv, x)).collect();
    let mut sigma = BTreeMap::new();
    for &x in &normalized {
        let images = normalized
            .iter()
            .map(|&y| normalized.iter().position(|&z| z == g.mul(x, y)))
            .collect::<Option<Vec<_>>>();
        let Some(images) = images else {
            return Ok(CrossedProduct::No {
                reason: "normalized tuple is not closed under multiplication".into(),
                h,
            });
        };
        let perm = Permutation::from_images(images)?;
        if h.position(&perm).is_none() {
            return Ok(CrossedProduct::No {
                reason: format!("sigma for {} is not in H", g.name(x)),
                h,
            });
        }
        sigma.insert(x, perm);
    }
    // g -> sigma_g must be an isomorphism onto H
    let homomorphic = normalized.iter().all(|&x| {
        normalized
            .iter()
            .all(|&y| sigma[&g.mul(x, y)] == sigma[&x].compose(&sigma[&y]))
    });
    let images: BTreeSet<&Permutation> = sigma.values().collect();
    if !homomorphic || images.len() != h.order() {
        return Ok(CrossedProduct::No {
            reason: "g -> sigma_g is not an isomorphism onto H".into(),
            h,
        });
    }
    let mut support = normalized;
    support.sort_unstable();
    Ok(CrossedProduct::Yes { support, sigma, h })
}

/// `P(i) = sum_{alpha in H} lambda(alpha) E_{alpha(i), alpha(i)}` (0-based `i`).
pub fn p_matrix(h: &PermutationGroup, lambda: &Character, i: usize) -> RingMatrix {
    let mut diag = vec![CycloScalar::zero(); h.n];
    for (k, alpha) in h.elements.iter().enumerate() {
        let pos = alpha.apply(i);
        diag[pos] = &diag[pos] + lambda.value(k);
    }
    RingMatrix::diagonal(0, &diag)
}

/// `sum_s p_s x_s x_{s+1} ... x_{s-1}` (indices cyclic) with `x_k` of degree
/// `g_k^{-1} g_{k+1}`, so that its value at `(E_12, E_23, ..., E_n1)` is `diag(p)`.
///
/// `p` must be nonzero and satisfy `Lambda_sigma(diag p) = c_sigma diag p` for
/// every `sigma` in `H`, as the combinations of the `P(i)` do.
pub fn witness_polynomial(grading: &ElementaryGrading, p: &[CycloScalar]) -> Result<GPolynomial> {
    let n = grading.n();
    if !grading.is_distinct() {
        return Err(Error::PreconditionViolated("grading tuple has repeated entries".into()));
    }
    if p.len() != n {
        return Err(Error::PreconditionViolated(format!("diagonal has {} entries, n = {n}", p.len())));
    }
    if p.iter().all(CycloScalar::is_zero) {
        return Err(Error::PreconditionViolated("diagonal is zero".into()));
    }
    let h = aut_subgroup_h(grading)?;
    let big_p = RingMatrix::diagonal(0, p);
    for sigma in &h.elements {
        if big_p.proportionality(&big_p.permuted(sigma)).is_none() {
            return Err(Error::PreconditionViolated(format!(
                "diagonal is not a combination of the P(i): not an eigenvector of {sigma}"
            )));
        }
    }
    let vars: Vec<GVar> = (0..n)
        .map(|k| GVar::new(k as u32 + 1, grading.degree_of(k, (k + 1) % n)))
        .collect();
    let mut f = GPolynomial::zero();
    for (s, ps) in p.iter().enumerate() {
        let letters = (0..n).map(|t| vars[(s + t) % n]).collect();
        f.add_term(crate::freealg::GMonomial::new(letters), ps.clone());
    }
    Ok(f)
}

/// The assignment `x_k -> E_{k,k+1}` (cyclic) used with [`witness_polynomial`].
pub fn witness_assignment(grading: &ElementaryGrading) -> BTreeMap<GVar, RingMatrix> {
    let n = grading.n();
    (0..n)
        .map(|k| {
            (
                GVar::new(k as u32 + 1, grading.degree_of(k, (k + 1) % n)),
                RingMatrix::elementary(n, k, (k + 1) % n, GrassmannElement::one(0)),
            )
        })
        .collect()
}

/// Coarsening along a homomorphism `phi: G -> target` given on element indices.
pub fn coarsen(grading: &ElementaryGrading, target: &FiniteGroup, phi: &[Elem]) -> Result<ElementaryGrading> {
    let g = grading.group();
    if phi.len() != g.order() || phi.iter().any(|&x| x >= target.order()) {
        return Err(Error::NotHomomorphism("map is not defined on every element".into()));
    }
    for a in g.elements() {
        for b in g.elements() {
            if phi[g.mul(a, b)] != target.mul(phi[a], phi[b]) {
                return Err(Error::NotHomomorphism(format!(
                    "phi({}*{}) != phi({})*phi({})",
                    g.name(a),
                    g.name(b),
                    g.name(a),
                    g.name(b)
                )));
            }
        }
    }
    ElementaryGrading::new(target.clone(), grading.tuple().iter().map(|&x| phi[x]).collect())
}

/// Simultaneous row/column permutation sorting a `Z2` tuple to `(0,...,0,1,...,1)`:
/// returns the permutation `pi` with new position `pi(i)` for old index `i`.
pub fn sorting_permutation(tuple: &[Elem]) -> Permutation {
    let mut order: Vec<usize> = (0..tuple.len()).collect();
    order.sort_by_key(|&i| (tuple[i], i));
    let mut images = vec![0; tuple.len()];
    for (new, &old) in order.iter().enumerate() {
        images[old] = new;
    }
    Permutation::from_images(images).expect("sorting permutation")
}

/// `M_{a+b}(F)` with tuple `(0^a, 1^b)` tensored with the Grassmann algebra
/// along the `Z2`-grading, i.e. `M_{a,b}(E)`.
pub fn envelope(a: &GradedMatrixAlgebra, budget: usize) -> Result<GradedMatrixAlgebra> {
    if a.kind() != AlgebraKind::MnF || a.group().order() != 2 {
        return Err(Error::PreconditionViolated("envelope needs M_n(F) with a Z2 elementary grading".into()));
    }
    let tuple = a.grading().tuple();
    if tuple.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::TupleNotSorted);
    }
    let zeros = tuple.iter().filter(|&&t| t == 0).count();
    GradedMatrixAlgebra::mab(zeros, tuple.len() - zeros, budget, a.conductor())
}

/// Basis of `(A (x) E)_h = A_h (x) E_h` as pairs `(E_ij, e_S)`.
pub fn envelope_basis(a: &GradedMatrixAlgebra, budget: usize, h: Elem) -> Vec<BasisElement> {
    let n = a.n();
    let mut out = Vec::new();
    for row in 0..n {
        for col in 0..n {
            if a.grading().degree_of(row, col) != h {
                continue;
            }
            for mask in 0..1u64 << budget {
                if mask_parity(mask) as usize == h {
                    out.push(BasisElement { mask, row, col });
                }
            }
        }
    }
    out.sort_by_key(|b| (b.mask.count_ones(), b.mask, b.row, b.col));
    out
}

/// Product in `A (x) E` computed factorwise: `(E_ij (x) e_S)(E_kl (x) e_T)`.
pub fn envelope_product(x: &BasisElement, y: &BasisElement) -> Option<(i32, BasisElement)> {
    if x.col != y.row {
        return None;
    }
    let sign = crate::grassmann::wedge_sign(x.mask, y.mask);
    (sign != 0).then_some({
        (
            sign,
            BasisElement {
                mask: x.mask | y.mask,
                row: x.row,
                col: y.col,
            },
        )
    })
}

/// Compares `M_{a+b}(F) (x) E` with `M_{a,b}(E)` on bases and products.
pub fn envelope_agrees(a: usize, b: usize, budget: usize) -> Result<bool> {
    let z2 = FiniteGroup::cyclic(2);
    let tuple = std::iter::repeat_n(0, a).chain(std::iter::repeat_n(1, b)).collect();
    let base = GradedMatrixAlgebra::mnf(ElementaryGrading::new(z2, tuple)?, 1);
    let direct = envelope(&base, budget)?;
    let mut all = Vec::new();
    for h in 0..2 {
        let env = envelope_basis(&base, budget, h);
        if env != direct.homogeneous_basis(h)? {
            return Ok(false);
        }
        all.extend(env);
    }
    for x in &all {
        for y in &all {
            let lhs = direct.basis_matrix(x).mul(&direct.basis_matrix(y));
            let rhs = match envelope_product(x, y) {
                None => RingMatrix::zero(a + b, budget),
                Some((sign, z)) => direct.basis_matrix(&z).scale(&CycloScalar::from_integer(sign as i64)),
            };
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
