//! Primeness classification of elementary gradings on `M_n(F)` with witness
//! certificates when the property fails.

use crate::error::Result;
use crate::freealg::GPolynomial;
use crate::groups::{homs_to_roots, orbits, Character, PermutationGroup};
use crate::matalg::{
    is_crossed_product, p_matrix, witness_polynomial, CrossedProduct, ElementaryGrading, GradedMatrixAlgebra,
    RingMatrix,
};
use crate::scalars::torsion_order;

use super::{check_central_with, disjoint_power, CheckOptions, Status};

/// Which construction produced a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `|H| < n`: `d > 1` orbits, trivial character, `P = P(i_1)+...+P(i_{d-1})-P(i_d)`.
    NotCrossedProduct,
    /// Crossed product with a nontrivial character `lambda` of `H`, `P = P(i_1)`.
    Character,
}

/// `(f, P, k)` with `f` not central while the product of `k` disjoint copies is.
#[derive(Clone, Debug)]
pub struct WitnessCertificate {
    pub f: GPolynomial,
    pub p: RingMatrix,
    pub k: usize,
    pub lambda: Character,
    pub branch: Branch,
    pub h: PermutationGroup,
    pub orbits: Vec<Vec<usize>>,
    /// Results of the independent checks, filled by [`WitnessCertificate::verify`].
    pub f_status: Option<Status>,
    pub product_status: Option<Status>,
    pub p_power_scalar: Option<bool>,
}

impl WitnessCertificate {
    pub fn note(&self) -> &'static str {
        match self.branch {
            Branch::NotCrossedProduct => "not a crossed product grading",
            Branch::Character => "crossed product grading with a nontrivial character",
        }
    }

    /// Runs the three checks: `f` Neither, the `k`-fold product Central, `P^k` scalar.
    pub fn verify(&mut self, algebra: &GradedMatrixAlgebra, opts: &CheckOptions) -> Result<bool> {
        let quick = CheckOptions {
            evidence: false,
            ..*opts
        };
        self.f_status = Some(check_central_with(&self.f, algebra, &quick)?.status);
        let product = disjoint_power(&self.f, self.k);
        self.product_status = Some(check_central_with(&product, algebra, &quick)?.status);
        self.p_power_scalar = Some(self.p.pow(self.k as u32).is_scalar_matrix());
        Ok(self.is_verified())
    }

    pub fn is_verified(&self) -> bool {
        self.f_status == Some(Status::Neither)
            && self.product_status == Some(Status::Central)
            && self.p_power_scalar == Some(true)
    }
}

#[derive(Clone, Debug)]
pub enum PrimenessVerdict {
    Holds { h: PermutationGroup, characters: usize },
    Fails(Box<WitnessCertificate>),
}

impl PrimenessVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PrimenessVerdict::Holds { .. })
    }
}

/// Classifies `M_n(F)` with the given grading over `F = Q(zeta_conductor)`.
///
/// Certificates are verified with independent centrality checks before being
/// returned. Tuples with repeated entries are rejected.
pub fn classify_primeness(grading: &ElementaryGrading, conductor: u32) -> Result<PrimenessVerdict> {
    classify_with(grading, conductor, &CheckOptions::default())
}

pub fn classify_with(grading: &ElementaryGrading, conductor: u32, opts: &CheckOptions) -> Result<PrimenessVerdict> {
    let cp = is_crossed_product(grading)?;
    let h = cp.h().clone();
    let n = grading.n();
    let orbit_list = orbits(&h.elements, n);
    let (lambda, p, k, branch) = match &cp {
        CrossedProduct::No { .. } => {
            let lambda = Character::trivial(&h.group);
            let d = orbit_list.len();
            let mut p = RingMatrix::zero(n, 0);
            for (s, orbit) in orbit_list.iter().enumerate() {
                let ps = p_matrix(&h, &lambda, orbit[0]);
                p = if s + 1 == d { p.sub(&ps) } else { p.add(&ps) };
            }
            (lambda, p, 2, Branch::NotCrossedProduct)
        }
        CrossedProduct::Yes { .. } => {
            let r = torsion_order(conductor);
            let characters = homs_to_roots(&h.group, r)?;
            let count = characters.len();
            let Some(lambda) = characters.into_iter().find(|c| !c.is_trivial()) else {
                return Ok(PrimenessVerdict::Holds { h, characters: count });
            };
            let p = p_matrix(&h, &lambda, orbit_list[0][0]);
            (lambda, p, n, Branch::Character)
        }
    };
    let diag = p.scalar_diagonal().expect("P is a scalar diagonal matrix");
    let f = witness_polynomial(grading, &diag)?;
    let mut cert = WitnessCertificate {
        f,
        p,
        k,
        lambda,
        branch,
        h,
        orbits: orbit_list,
        f_status: None,
        product_status: None,
        p_power_scalar: None,
    };
    let algebra = GradedMatrixAlgebra::mnf(grading.clone(), conductor);
    cert.verify(&algebra, opts)?;
    Ok(PrimenessVerdict::Fails(Box::new(cert)))
}
