//! Regular gradings: commutation bicharacters and two concrete realizations,
//! the Grassmann algebra and the Pauli (clock and shift) grading on `M_m(F)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::freealg::GMonomial;
use crate::grassmann::{mask_parity, parity_representatives, GrassmannElement};
use crate::groups::{Elem, FiniteGroup};
use crate::linalg::EchelonBasis;
use crate::matalg::{evaluate_unchecked, RingMatrix};
use crate::scalars::{torsion_order, CycloScalar};

/// A commutation function `beta: H x H -> F^x`, stored as an explicit table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicharacter {
    group: FiniteGroup,
    values: Vec<CycloScalar>,
}

impl Bicharacter {
    /// Validates multiplicativity in each slot, skew-symmetry and `beta(e, h) = 1`.
    pub fn new(group: FiniteGroup, values: Vec<CycloScalar>) -> Result<Self> {
        let beta = Self::new_unchecked(group, values)?;
        beta.validate()?;
        Ok(beta)
    }

    /// Builds the table without checking the axioms; for negative controls.
    pub fn new_unchecked(group: FiniteGroup, values: Vec<CycloScalar>) -> Result<Self> {
        let n = group.order();
        if values.len() != n * n {
            return Err(Error::InvalidBicharacter(format!("table has {} entries, expected {}", values.len(), n * n)));
        }
        Ok(Self { group, values })
    }

    pub fn from_fn(group: FiniteGroup, f: impl Fn(Elem, Elem) -> CycloScalar) -> Result<Self> {
        let values = group
            .elements()
            .flat_map(|a| group.elements().map(move |b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect();
        Self::new(group, values)
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        if !g.is_abelian() {
            return Err(Error::InvalidBicharacter("group is not abelian".into()));
        }
        for a in g.elements() {
            if !self.value(g.identity(), a).is_one() {
                return Err(Error::InvalidBicharacter(format!("beta(e, {}) != 1", g.name(a))));
            }
            for b in g.elements() {
                if *self.value(b, a) != self.value(a, b).inverse()? {
                    return Err(Error::InvalidBicharacter(format!(
                        "not skew-symmetric at ({}, {})",
                        g.name(a),
                        g.name(b)
                    )));
                }
                for c in g.elements() {
                    if *self.value(g.mul(a, b), c) != self.value(a, c) * self.value(b, c)
                        || *self.value(c, g.mul(a, b)) != self.value(c, a) * self.value(c, b)
                    {
                        return Err(Error::InvalidBicharacter(format!(
                            "not multiplicative at ({}, {}, {})",
                            g.name(a),
                            g.name(b),
                            g.name(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `beta(1, 1) = -1` on `Z2`.
    pub fn grassmann() -> Self {
        let minus = CycloScalar::from_integer(-1);
        let one = CycloScalar::one();
        Self::new(FiniteGroup::cyclic(2), vec![one.clone(), one.clone(), one, minus]).expect("sign bicharacter")
    }

    pub fn trivial(group: FiniteGroup) -> Self {
        let n = group.order();
        Self {
            group,
            values: vec![CycloScalar::one(); n * n],
        }
    }

    /// `beta((a,b),(c,d)) = zeta_m^{ad - bc}` on `Z_m x Z_m`, index `a*m + b`.
    pub fn pauli(m: usize) -> Self {
        let group = FiniteGroup::cyclic_product(&[m, m]);
        let mi = m as i64;
        Self::from_fn(group, |x, y| {
            let (a, b) = ((x / m) as i64, (x % m) as i64);
            let (c, d) = ((y / m) as i64, (y % m) as i64);
            CycloScalar::root_of_unity(m as u32, (a * d - b * c).rem_euclid(mi.max(1)))
        })
        .expect("pauli bicharacter")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn value(&self, a: Elem, b: Elem) -> &CycloScalar {
        &self.values[a * self.group.order() + b]
    }

    /// For every `h != e` some `h'` has `beta(h, h') != 1`.
    pub fn is_minimal(&self) -> bool {
        let g = &self.group;
        g.elements()
            .filter(|&h| h != g.identity())
            .all(|h| g.elements().any(|k| !self.value(h, k).is_one()))
    }
}

/// Concrete algebra carrying a regular grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    /// Grassmann algebra on `budget` generators. With `forgotten`, the parity
    /// grading is discarded: everything sits in the neutral component.
    Grassmann { budget: usize, forgotten: bool },
    /// `M_m(F)` graded by `Z_m x Z_m` with components spanned by `X^a Y^b`.
    Pauli { m: usize, conductor: u32 },
}

/// A pair `(R, beta)` with `R` graded by the group of `beta`.
#[derive(Clone, Debug)]
pub struct RegularGradingSpec {
    pub beta: Bicharacter,
    pub realization: Realization,
}

impl RegularGradingSpec {
    pub fn grassmann(budget: usize) -> Self {
        Self {
            beta: Bicharacter::grassmann(),
            realization: Realization::Grassmann {
                budget,
                forgotten: false,
            },
        }
    }

    /// `E` with all of it declared neutral and the trivial `beta` on `Z2`; not minimal.
    pub fn grassmann_forgotten(budget: usize) -> Self {
        Self {
            beta: Bicharacter::trivial(FiniteGroup::cyclic(2)),
            realization: Realization::Grassmann {
                budget,
                forgotten: true,
            },
        }
    }

    /// The clock and shift grading on `M_m(F)` over `Q(zeta_conductor)`.
    pub fn pauli(m: usize, conductor: u32) -> Result<Self> {
        if m == 0 || !torsion_order(conductor).is_multiple_of(m as u64) {
            return Err(Error::ConductorMismatch {
                conductor,
                m: m as u32,
            });
        }
        Ok(Self {
            beta: Bicharacter::pauli(m),
            realization: Realization::Pauli { m, conductor },
        })
    }

    /// Parses `grassmann:budget=6` or `pauli:m=3`.
    pub fn from_spec(spec: &str, conductor: u32) -> Result<Self> {
        let spec = spec.trim();
        let (family, params) = spec.split_once(':').unwrap_or((spec, ""));
        let mut values = BTreeMap::new();
        for item in params.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Spec(format!("expected key=value in `{item}`")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Spec(format!("bad number in `{item}`")))?;
            values.insert(k.trim().to_string(), v);
        }
        match family {
            "grassmann" => Ok(Self::grassmann(*values.get("budget").unwrap_or(&6))),
            "pauli" => {
                let m = *values
                    .get("m")
                    .ok_or_else(|| Error::Spec("pauli needs m=<size>".into()))?;
                Self::pauli(m, conductor)
            }
            other => Err(Error::Spec(format!("unknown regular grading `{other}`"))),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        self.beta.group()
    }

    fn size_and_budget(&self) -> (usize, usize) {
        match self.realization {
            Realization::Grassmann { budget, .. } => (1, budget),
            Realization::Pauli { m, .. } => (m, 0),
        }
    }

    /// `X = diag(1, zeta, ..., zeta^{m-1})` and the cyclic shift `Y = sum E_{i+1,i}`.
    pub fn pauli_generators(m: usize) -> (RingMatrix, RingMatrix) {
        let diag: Vec<CycloScalar> = (0..m).map(|i| CycloScalar::root_of_unity(m as u32, i as i64)).collect();
        let x = RingMatrix::diagonal(0, &diag);
        let mut y = RingMatrix::zero(m, 0);
        for i in 0..m {
            y.set((i + 1) % m, i, GrassmannElement::one(0));
        }
        (x, y)
    }

    /// Basis of the component `R_h`, as 1x1 matrices for the Grassmann case.
    pub fn component_basis(&self, h: Elem) -> Vec<RingMatrix> {
        match self.realization {
            Realization::Grassmann { budget, forgotten } => {
                let wanted = |mask: u64| if forgotten { h == 0 } else { mask_parity(mask) as usize == h };
                (0..1u64 << budget)
                    .filter(|&mask| wanted(mask))
                    .map(|mask| {
                        RingMatrix::elementary(1, 0, 0, GrassmannElement::monomial(budget, mask, CycloScalar::one()))
                    })
                    .collect()
            }
            Realization::Pauli { m, .. } => {
                let (x, y) = Self::pauli_generators(m);
                let (a, b) = (h / m, h % m);
                vec![x.pow(a as u32).mul(&y.pow(b as u32))]
            }
        }
    }

    /// Homogeneous elements of the given degrees with nonzero product.
    ///
    /// `Ok(None)` if some requested component is empty.
    pub fn check_p1(&self, degrees: &[Elem]) -> Result<Option<Vec<RingMatrix>>> {
        match self.realization {
            Realization::Grassmann { budget, forgotten } => {
                if forgotten {
                    if degrees.iter().any(|&h| h != 0) {
                        return Ok(None);
                    }
                    return Ok(Some(vec![RingMatrix::identity(1, budget); degrees.len()]));
                }
                let parities: Vec<u8> = degrees.iter().map(|&h| h as u8).collect();
                let reps = parity_representatives(budget, &parities)?;
                Ok(Some(reps.into_iter().map(|r| RingMatrix::elementary(1, 0, 0, r)).collect()))
            }
            Realization::Pauli { .. } => Ok(Some(
                degrees.iter().map(|&h| self.component_basis(h).remove(0)).collect(),
            )),
        }
    }

    /// `ab = beta(h1, h2) ba` on all pairs of homogeneous basis elements.
    pub fn check_p2(&self) -> bool {
        let g = self.group();
        let bases: Vec<Vec<RingMatrix>> = g.elements().map(|h| self.component_basis(h)).collect();
        g.elements().all(|h1| {
            g.elements().all(|h2| {
                let beta = self.beta.value(h1, h2);
                bases[h1].iter().all(|a| {
                    bases[h2]
                        .iter()
                        .all(|b| a.mul(b) == b.mul(a).scale(beta))
                })
            })
        })
    }

    /// Whether the monomial (variable degrees read as elements of `H`) has a
    /// nonzero value; uses one representative per variable.
    pub fn monomial_is_nonvanishing(&self, m: &GMonomial) -> Result<bool> {
        let vars: Vec<_> = m.letters.iter().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let degrees: Vec<Elem> = vars.iter().map(|v| v.degree).collect();
        let Some(reps) = self.check_p1(&degrees)? else {
            return Ok(false);
        };
        let (size, budget) = self.size_and_budget();
        let assignment = vars.into_iter().zip(reps).collect();
        let f = crate::freealg::GPolynomial::term(m.clone(), CycloScalar::one());
        Ok(!evaluate_unchecked(&f, size, budget, &assignment).is_zero())
    }

    /// Condition (R1) on a pair of monomials in disjoint variables: if neither
    /// vanishes identically then neither does their product.
    pub fn check_r1(&self, m1: &GMonomial, m2: &GMonomial) -> Result<bool> {
        let shared = m1.letters.iter().any(|v| m2.letters.iter().any(|w| w.index == v.index));
        if shared {
            return Err(Error::PreconditionViolated("monomials share a variable".into()));
        }
        if !self.monomial_is_nonvanishing(m1)? || !self.monomial_is_nonvanishing(m2)? {
            return Ok(true);
        }
        self.monomial_is_nonvanishing(&m1.concat(m2))
    }

    /// Compares the centralizer of all homogeneous elements with `R_e`.
    ///
    /// For the Grassmann realization the answer concerns the truncated algebra
    /// at the given budget only.
    pub fn center_equals_neutral(&self) -> bool {
        let g = self.group();
        let all: Vec<RingMatrix> = g.elements().flat_map(|h| self.component_basis(h)).collect();
        for h in g.elements() {
            let basis = self.component_basis(h);
            if basis.is_empty() {
                continue;
            }
            let central_dim = basis.len() - commutator_rank(&basis, &all);
            let expected = if h == g.identity() { basis.len() } else { 0 };
            if central_dim != expected {
                return false;
            }
        }
        true
    }
}

/// Rank of `c -> ([sum c_k b_k, t])_t` over test elements `t`.
fn commutator_rank(basis: &[RingMatrix], tests: &[RingMatrix]) -> usize {
    let width = basis.len();
    let mut echelon = EchelonBasis::new(width);
    for t in tests {
        let mut rows: BTreeMap<(usize, usize, u64), Vec<CycloScalar>> = BTreeMap::new();
        for (k, b) in basis.iter().enumerate() {
            let c = b.commutator(t);
            for (i, j, x) in c.entries() {
                for (&mask, coeff) in x.terms() {
                    rows.entry((i, j, mask))
                        .or_insert_with(|| vec![CycloScalar::zero(); width])[k] = coeff.clone();
                }
            }
        }
        for row in rows.into_values() {
            echelon.insert(row);
            if echelon.is_full() {
                return width;
            }
        }
    }
    echelon.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::GVar;

    fn mono(vars: &[(u32, Elem)]) -> GMonomial {
        GMonomial::new(vars.iter().map(|&(i, d)| GVar::new(i, d)).collect())
    }

    #[test]
    fn minimality() {
        assert!(Bicharacter::grassmann().is_minimal());
        assert!(!Bicharacter::trivial(FiniteGroup::cyclic(2)).is_minimal());
        assert!(Bicharacter::pauli(2).is_minimal());
    }

    #[test]
    fn axioms_hold_for_builtins() {
        for beta in [Bicharacter::grassmann(), Bicharacter::pauli(2), Bicharacter::pauli(3), Bicharacter::pauli(4)] {
            assert!(beta.is_valid());
        }
        let z2 = FiniteGroup::cyclic(2);
        let bad = vec![CycloScalar::one(), CycloScalar::one(), CycloScalar::one(), CycloScalar::from_integer(2)];
        assert!(Bicharacter::new(z2, bad).is_err());
    }

    #[test]
    fn p1_examples() {
        let e = RegularGradingSpec::grassmann(3);
        let reps = e.check_p1(&[1, 1, 1]).unwrap().unwrap();
        assert_eq!(reps[2].get(0, 0), &GrassmannElement::generator(3, 3));
        assert_eq!(e.check_p1(&[0, 0]).unwrap().unwrap()[0], RingMatrix::identity(1, 3));
        assert!(matches!(e.check_p1(&[1, 1, 1, 1]), Err(Error::BudgetExceeded { .. })));
        let p = RegularGradingSpec::pauli(2, 4).unwrap();
        let reps = p.check_p1(&[2, 1]).unwrap().unwrap();
        assert!(!reps[0].mul(&reps[1]).is_zero());
    }

    #[test]
    fn p2_examples() {
        assert!(RegularGradingSpec::grassmann(4).check_p2());
        let p = RegularGradingSpec::pauli(2, 1).unwrap();
        assert!(p.check_p2());
        assert_eq!(*p.beta.value(2, 1), CycloScalar::from_integer(-1));
        let corrupted = RegularGradingSpec {
            beta: Bicharacter::trivial(FiniteGroup::cyclic(2)),
            realization: Realization::Grassmann {
                budget: 3,
                forgotten: false,
            },
        };
        assert!(!corrupted.check_p2());
    }

    #[test]
    fn r1_examples() {
        let e = RegularGradingSpec::grassmann(4);
        assert!(e.check_r1(&mono(&[(1, 1)]), &mono(&[(2, 1)])).unwrap());
        assert!(!e.monomial_is_nonvanishing(&mono(&[(1, 1), (1, 1)])).unwrap());
        assert!(e.check_r1(&mono(&[(1, 1), (1, 1)]), &mono(&[(2, 0)])).unwrap());
        let p = RegularGradingSpec::pauli(2, 1).unwrap();
        assert!(p.check_r1(&mono(&[(1, 2)]), &mono(&[(2, 1)])).unwrap());
    }

    #[test]
    fn center_examples() {
        assert!(RegularGradingSpec::pauli(2, 4).unwrap().center_equals_neutral());
        assert!(RegularGradingSpec::pauli(3, 3).unwrap().center_equals_neutral());
        assert!(!RegularGradingSpec::grassmann_forgotten(4).center_equals_neutral());
        assert!(RegularGradingSpec::grassmann(4).center_equals_neutral());
        // odd budget: the top monomial is odd and central
        assert!(!RegularGradingSpec::grassmann(3).center_equals_neutral());
    }

    #[test]
    fn pauli_examples() {
        let (x, y) = RegularGradingSpec::pauli_generators(2);
        assert_eq!(x.pretty(), "diag(1,-1)");
        assert_eq!(y.to_string(), "E12 + E21");
        assert_eq!(x.mul(&y), y.mul(&x).neg());
        let p1 = RegularGradingSpec::pauli(1, 1).unwrap();
        assert_eq!(p1.group().order(), 1);
        let p3 = RegularGradingSpec::pauli(3, 3).unwrap();
        let all: Vec<Vec<CycloScalar>> = p3
            .group()
            .elements()
            .map(|h| {
                let m = p3.component_basis(h).remove(0);
                (0..3).flat_map(|i| (0..3).map(move |j| (i, j)))
                    .map(|(i, j)| m.get(i, j).as_scalar().unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(crate::linalg::rank(all, 9), 9);
        assert!(matches!(RegularGradingSpec::pauli(3, 1), Err(Error::ConductorMismatch { .. })));
        assert!(matches!(RegularGradingSpec::pauli(4, 2), Err(Error::ConductorMismatch { .. })));
    }
}
