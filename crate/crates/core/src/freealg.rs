//! The free graded associative algebra on variables `x_{i,g}`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groups::{Elem, FiniteGroup};
use crate::regular::Bicharacter;
use crate::scalars::CycloScalar;

/// The variable `x_{index, degree}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GVar {
    pub index: u32,
    pub degree: Elem,
}

impl GVar {
    pub fn new(index: u32, degree: Elem) -> Self {
        Self { index, degree }
    }

    pub fn display(&self, group: &FiniteGroup) -> String {
        if self.degree == group.identity() {
            format!("x{}", self.index)
        } else {
            format!("x{}[{}]", self.index, group.name(self.degree))
        }
    }
}

/// A word in the variables; ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GMonomial {
    pub letters: Vec<GVar>,
}

impl Ord for GMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for GMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl GMonomial {
    pub fn new(letters: Vec<GVar>) -> Self {
        Self { letters }
    }

    pub fn unit() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn degree(&self, group: &FiniteGroup) -> Elem {
        self.letters
            .iter()
            .fold(group.identity(), |acc, v| group.mul(acc, v.degree))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    /// Occurrence count per variable index.
    pub fn multidegree(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for v in &self.letters {
            *out.entry(v.index).or_insert(0) += 1;
        }
        out
    }

    pub fn display(&self, group: &FiniteGroup) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        self.letters
            .chunk_by(|a, b| a == b)
            .map(|run| match run.len() {
                1 => run[0].display(group),
                k => format!("{}^{k}", run[0].display(group)),
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Noncommutative polynomial with cyclotomic coefficients; no zero terms stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GPolynomial {
    terms: BTreeMap<GMonomial, CycloScalar>,
}

impl GPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CycloScalar) -> Self {
        Self::term(GMonomial::unit(), c)
    }

    pub fn one() -> Self {
        Self::constant(CycloScalar::one())
    }

    pub fn var(v: GVar) -> Self {
        Self::term(GMonomial::new(vec![v]), CycloScalar::one())
    }

    pub fn term(m: GMonomial, c: CycloScalar) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GMonomial, CycloScalar)>) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<GMonomial, CycloScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: GMonomial, c: CycloScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.concat(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `pq - qp`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn variables(&self) -> BTreeSet<GVar> {
        self.terms
            .keys()
            .flat_map(|m| m.letters.iter().copied())
            .collect()
    }

    pub fn max_index(&self) -> u32 {
        self.variables().iter().map(|v| v.index).max().unwrap_or(0)
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(GMonomial::len).max().unwrap_or(0)
    }

    /// Rejects the same index used with two different degrees.
    pub fn check_variables(&self) -> Result<()> {
        let mut seen: BTreeMap<u32, Elem> = BTreeMap::new();
        for v in self.variables() {
            if let Some(&d) = seen.get(&v.index) {
                if d != v.degree {
                    return Err(Error::VariableDegreeClash { index: v.index });
                }
            }
            seen.insert(v.index, v.degree);
        }
        Ok(())
    }

    /// The common degree of all monomials; `None` if inhomogeneous or zero.
    pub fn homogeneous_degree(&self, group: &FiniteGroup) -> Option<Elem> {
        let mut degrees = self.terms.keys().map(|m| m.degree(group));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, group: &FiniteGroup, g: Elem) -> bool {
        self.terms.keys().all(|m| m.degree(group) == g)
    }

    /// Replaces variables by polynomials of the same degree; unassigned
    /// variables are left in place.
    pub fn substitute(
        &self,
        group: &FiniteGroup,
        assignment: &BTreeMap<GVar, GPolynomial>,
    ) -> Result<GPolynomial> {
        for (v, p) in assignment {
            if !p.is_homogeneous_of(group, v.degree) {
                return Err(Error::DegreeMismatch(format!(
                    "{} cannot replace {}",
                    p.display(group),
                    v.display(group)
                )));
            }
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            for v in &m.letters {
                acc = match assignment.get(v) {
                    Some(p) => acc.mul(p),
                    None => acc.mul(&Self::var(*v)),
                };
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Components by multidegree, ordered by multidegree.
    pub fn multihomogeneous_components(&self) -> Vec<GPolynomial> {
        let mut parts: BTreeMap<Vec<(u32, usize)>, GPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<(u32, usize)> = m.multidegree().into_iter().collect();
            parts.entry(key).or_default().add_term(m.clone(), c.clone());
        }
        parts.into_values().collect()
    }

    pub fn is_multihomogeneous(&self) -> bool {
        let mut keys = self.terms.keys().map(GMonomial::multidegree);
        match keys.next() {
            None => true,
            Some(k) => keys.all(|x| x == k),
        }
    }

    /// Each monomial contains every variable of the polynomial exactly once.
    pub fn is_multilinear(&self) -> bool {
        self.is_multihomogeneous()
            && self
                .terms
                .keys()
                .next()
                .is_none_or(|m| m.multidegree().values().all(|&d| d == 1))
    }

    /// Full polarization of a multihomogeneous polynomial.
    ///
    /// Variable `x_i` occurring `d_i` times is replaced by `d_i` fresh
    /// variables of the same degree. New indices are `1, 2, ...` allocated in
    /// increasing order of the original index; the returned map sends each new
    /// variable to the variable it came from. Already multilinear polynomials
    /// are renumbered but otherwise unchanged.
    pub fn multilinearize(&self) -> Result<(GPolynomial, BTreeMap<GVar, GVar>)> {
        if !self.is_multihomogeneous() {
            return Err(Error::NonMultihomogeneous);
        }
        self.check_variables()?;
        let Some(first) = self.terms.keys().next() else {
            return Ok((Self::zero(), BTreeMap::new()));
        };
        let degree_of: BTreeMap<u32, Elem> =
            self.variables().into_iter().map(|v| (v.index, v.degree)).collect();
        let mut fresh: BTreeMap<u32, Vec<GVar>> = BTreeMap::new();
        let mut origin = BTreeMap::new();
        let mut next = 1u32;
        for (idx, d) in first.multidegree() {
            let deg = degree_of[&idx];
            let copies: Vec<GVar> = (0..d)
                .map(|k| GVar::new(next + k as u32, deg))
                .collect();
            next += d as u32;
            for v in &copies {
                origin.insert(*v, GVar::new(idx, deg));
            }
            fresh.insert(idx, copies);
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            // positions of each original variable
            let mut slots: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for (pos, v) in m.letters.iter().enumerate() {
                slots.entry(v.index).or_default().push(pos);
            }
            let groups: Vec<(Vec<usize>, &Vec<GVar>)> = slots
                .into_iter()
                .map(|(idx, positions)| (positions, &fresh[&idx]))
                .collect();
            let mut letters = m.letters.clone();
            polarize_rec(&groups, 0, &mut letters, &mut |word| {
                out.add_term(GMonomial::new(word.to_vec()), c.clone());
            });
        }
        Ok((out, origin))
    }

    /// For each variable `x_i`, the part of `f(.., x_i + z_i, ..)` of degree one
    /// in a fresh variable `z_i` of the same degree. Returns `(x_i, z_i, h_i)`.
    pub fn derivation_components(&self) -> Result<Vec<(GVar, GVar, GPolynomial)>> {
        if !self.is_multihomogeneous() {
            return Err(Error::NonMultihomogeneous);
        }
        let base = self.max_index();
        let mut out = Vec::new();
        for (k, v) in self.variables().into_iter().enumerate() {
            let z = GVar::new(base + 1 + k as u32, v.degree);
            let mut h = Self::zero();
            for (m, c) in &self.terms {
                for (pos, letter) in m.letters.iter().enumerate() {
                    if *letter == v {
                        let mut letters = m.letters.clone();
                        letters[pos] = z;
                        h.add_term(GMonomial::new(letters), c.clone());
                    }
                }
            }
            out.push((v, z, h));
        }
        Ok(out)
    }

    /// Checks `[f, y] = sum_i h_i(x, [x_i, y])` symbolically, with `y` a fresh
    /// variable of neutral degree.
    pub fn verify_derivation_identity(&self, group: &FiniteGroup) -> Result<bool> {
        let components = self.derivation_components()?;
        let top = components
            .iter()
            .map(|(_, z, _)| z.index)
            .max()
            .unwrap_or(self.max_index());
        let y = GPolynomial::var(GVar::new(top + 1, group.identity()));
        let lhs = self.commutator(&y);
        let mut rhs = Self::zero();
        for (x, z, h) in &components {
            let assignment = BTreeMap::from([(*z, GPolynomial::var(*x).commutator(&y))]);
            rhs = rhs.add(&h.substitute(group, &assignment)?);
        }
        Ok(lhs == rhs)
    }

    /// `f_h = sum eps_{h, m_i} alpha_i m_i` for a multihomogeneous `f`.
    pub fn transform_f_h(&self, h: &BTreeMap<u32, Elem>, beta: &Bicharacter) -> Result<GPolynomial> {
        if !self.is_multihomogeneous() {
            return Err(Error::NonMultihomogeneous);
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &crossing_scalar(m, h, beta)? * c);
        }
        Ok(out)
    }

    /// `f* = sum eps_{m_i} alpha_i m_i`, each variable weighted by its own degree.
    pub fn transform_star(&self, beta: &Bicharacter) -> Result<GPolynomial> {
        if !self.is_multilinear() {
            return Err(Error::NonMultilinear);
        }
        self.check_variables()?;
        let h: BTreeMap<u32, Elem> = self.variables().iter().map(|v| (v.index, v.degree)).collect();
        self.transform_f_h(&h, beta)
    }

    pub fn display(&self, group: &FiniteGroup) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let text = term_text(m, c, group);
            match (k, text.strip_prefix('-')) {
                (0, _) => out.push_str(&text),
                (_, Some(rest)) => {
                    let _ = write!(out, " - {rest}");
                }
                (_, None) => {
                    let _ = write!(out, " + {text}");
                }
            }
        }
        out
    }
}

fn polarize_rec(
    groups: &[(Vec<usize>, &Vec<GVar>)],
    g: usize,
    letters: &mut Vec<GVar>,
    emit: &mut dyn FnMut(&[GVar]),
) {
    if g == groups.len() {
        emit(letters);
        return;
    }
    let (positions, copies) = &groups[g];
    let mut used = vec![false; copies.len()];
    assign_copies(positions, copies, 0, &mut used, letters, &mut |letters| {
        polarize_rec(groups, g + 1, letters, emit)
    });
}

fn assign_copies(
    positions: &[usize],
    copies: &[GVar],
    k: usize,
    used: &mut [bool],
    letters: &mut Vec<GVar>,
    next: &mut dyn FnMut(&mut Vec<GVar>),
) {
    if k == positions.len() {
        next(letters);
        return;
    }
    for c in 0..copies.len() {
        if !used[c] {
            used[c] = true;
            letters[positions[k]] = copies[c];
            assign_copies(positions, copies, k + 1, used, letters, next);
            used[c] = false;
        }
    }
}

fn scalar_is_single_term(c: &CycloScalar) -> bool {
    c.coeffs().iter().filter(|q| !q.is_zero()).count() <= 1
}

/// Coefficient prefix for a term, in the polynomial grammar.
pub(crate) fn coefficient_text(c: &CycloScalar) -> String {
    if scalar_is_single_term(c) {
        c.to_string()
    } else {
        format!("({c})")
    }
}

fn term_text(m: &GMonomial, c: &CycloScalar, group: &FiniteGroup) -> String {
    if m.is_empty() {
        return coefficient_text(c);
    }
    let body = m.display(group);
    if c.is_one() {
        body
    } else if (-c).is_one() {
        format!("-{body}")
    } else {
        format!("{}*{body}", coefficient_text(c))
    }
}

/// The scalar `eps` with `m(r_1, ..., r_s) = eps * r_1^{d_1} ... r_s^{d_s}` for
/// homogeneous `r_i` of degree `h(i)`: each pair of positions `p < q` whose
/// letters have `index(p) > index(q)` contributes `beta(h_p, h_q)`.
pub fn crossing_scalar(
    m: &GMonomial,
    h: &BTreeMap<u32, Elem>,
    beta: &Bicharacter,
) -> Result<CycloScalar> {
    let degree = |v: &GVar| {
        h.get(&v.index).copied().ok_or_else(|| {
            Error::PreconditionViolated(format!("no H-degree given for x{}", v.index))
        })
    };
    let mut eps = CycloScalar::one();
    for p in 0..m.letters.len() {
        for q in p + 1..m.letters.len() {
            let (a, b) = (&m.letters[p], &m.letters[q]);
            if a.index > b.index {
                let value = beta.value(degree(a)?, degree(b)?);
                if !value.is_one() {
                    eps = &eps * value;
                }
            }
        }
    }
    Ok(eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> GPolynomial {
        GPolynomial::var(GVar::new(i, 0))
    }

    fn xg(i: u32, g: Elem) -> GPolynomial {
        GPolynomial::var(GVar::new(i, g))
    }

    #[test]
    fn substitute_examples() {
        let g = FiniteGroup::trivial();
        let f = x(1).mul(&x(2));
        let a = BTreeMap::from([(GVar::new(1, 0), x(3)), (GVar::new(2, 0), x(4))]);
        assert_eq!(f.substitute(&g, &a).unwrap(), x(3).mul(&x(4)));

        let f = x(1).pow(2);
        let s = x(1).add(&x(2));
        let a = BTreeMap::from([(GVar::new(1, 0), s.clone())]);
        assert_eq!(f.substitute(&g, &a).unwrap(), s.mul(&s));

        let f = x(1).commutator(&x(2));
        let a = BTreeMap::from([(GVar::new(1, 0), x(1).mul(&x(2))), (GVar::new(2, 0), x(3))]);
        let expected = x(1).mul(&x(2)).mul(&x(3)).sub(&x(3).mul(&x(1)).mul(&x(2)));
        assert_eq!(f.substitute(&g, &a).unwrap(), expected);
    }

    #[test]
    fn substitute_rejects_wrong_degree() {
        let z2 = FiniteGroup::cyclic(2);
        let f = xg(1, 1);
        let a = BTreeMap::from([(GVar::new(1, 1), xg(2, 0))]);
        assert!(matches!(f.substitute(&z2, &a), Err(Error::DegreeMismatch(_))));
        let a = BTreeMap::from([(GVar::new(1, 1), xg(2, 1).add(&xg(3, 0)))]);
        assert!(matches!(f.substitute(&z2, &a), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn components_examples() {
        assert_eq!(x(1).add(&x(1).pow(2)).multihomogeneous_components().len(), 2);
        assert_eq!(x(1).commutator(&x(2)).multihomogeneous_components().len(), 1);
        let f = x(1).pow(2).mul(&x(2)).add(&x(1)).add(&x(2));
        let parts = f.multihomogeneous_components();
        assert_eq!(parts.len(), 3);
        let sum = parts.iter().fold(GPolynomial::zero(), |acc, p| acc.add(p));
        assert_eq!(sum, f);
    }

    #[test]
    fn multilinearize_examples() {
        let (p, origin) = x(1).pow(2).multilinearize().unwrap();
        assert_eq!(p, x(1).mul(&x(2)).add(&x(2).mul(&x(1))));
        assert_eq!(origin[&GVar::new(2, 0)], GVar::new(1, 0));
        let f = x(1).mul(&x(2));
        assert_eq!(f.multilinearize().unwrap().0, f);
        let (p, _) = x(1).pow(3).multilinearize().unwrap();
        assert_eq!(p.terms().len(), 6);
        assert!(p.terms().values().all(CycloScalar::is_one));
    }

    #[test]
    fn derivation_examples() {
        let g = FiniteGroup::trivial();
        let f = x(1).mul(&x(2));
        let comps = f.derivation_components().unwrap();
        assert_eq!(comps[0].2, GPolynomial::var(comps[0].1).mul(&x(2)));
        assert_eq!(comps[1].2, x(1).mul(&GPolynomial::var(comps[1].1)));
        assert!(f.verify_derivation_identity(&g).unwrap());

        let f = x(1).pow(2);
        let (_, z, h) = &f.derivation_components().unwrap()[0];
        let z = GPolynomial::var(*z);
        assert_eq!(*h, z.mul(&x(1)).add(&x(1).mul(&z)));

        let f = x(1).mul(&x(2)).mul(&x(1));
        let comps = f.derivation_components().unwrap();
        assert_eq!(comps[1].2, x(1).mul(&GPolynomial::var(comps[1].1)).mul(&x(1)));
        assert!(f.verify_derivation_identity(&g).unwrap());
    }

    #[test]
    fn crossing_examples() {
        let beta = Bicharacter::grassmann();
        let h = BTreeMap::from([(1, 1), (2, 1)]);
        let m12 = GMonomial::new(vec![GVar::new(1, 1), GVar::new(2, 1)]);
        assert!(crossing_scalar(&m12, &h, &beta).unwrap().is_one());
        let m21 = GMonomial::new(vec![GVar::new(2, 1), GVar::new(1, 1)]);
        assert_eq!(crossing_scalar(&m21, &h, &beta).unwrap(), CycloScalar::from_integer(-1));
        let m212 = GMonomial::new(vec![GVar::new(2, 1), GVar::new(1, 1), GVar::new(2, 1)]);
        assert_eq!(crossing_scalar(&m212, &h, &beta).unwrap(), CycloScalar::from_integer(-1));
    }

    #[test]
    fn transform_examples() {
        let beta = Bicharacter::grassmann();
        let odd = xg(1, 1).commutator(&xg(2, 1));
        let anti = xg(1, 1).mul(&xg(2, 1)).add(&xg(2, 1).mul(&xg(1, 1)));
        let h = BTreeMap::from([(1, 1), (2, 1)]);
        assert_eq!(odd.transform_f_h(&h, &beta).unwrap(), anti);
        assert_eq!(odd.transform_star(&beta).unwrap(), anti);
        let even = xg(1, 0).commutator(&xg(2, 0));
        assert_eq!(even.transform_star(&beta).unwrap(), even);
        let h0 = BTreeMap::from([(1, 0), (2, 0)]);
        assert_eq!(odd.transform_f_h(&h0, &beta).unwrap(), odd);
        assert_eq!(anti.transform_star(&beta).unwrap().transform_star(&beta).unwrap(), anti);
        assert_eq!(xg(1, 1).pow(2).transform_star(&beta), Err(Error::NonMultilinear));
    }

    #[test]
    fn display_forms() {
        let z2 = FiniteGroup::cyclic(2);
        let f = xg(1, 1).commutator(&xg(2, 1));
        assert_eq!(f.display(&z2), "x1[g]*x2[g] - x2[g]*x1[g]");
        let c = &CycloScalar::one() + &CycloScalar::root_of_unity(3, 1);
        let f = x(1).scale(&c);
        assert_eq!(f.display(&z2), "(1 + z3^1)*x1");
    }
}
