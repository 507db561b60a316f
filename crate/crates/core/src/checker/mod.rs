//! Decision procedures for graded identities and graded central polynomials.

pub mod classify;
pub mod engine;
pub mod scan;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::freealg::{GPolynomial, GVar};
use crate::groups::Elem;
use crate::matalg::{evaluate_unchecked, AlgebraKind, GradedMatrixAlgebra, RingMatrix};
use crate::scalars::CycloScalar;

pub use classify::{classify_primeness, PrimenessVerdict, WitnessCertificate};
pub use engine::Admissibility;
pub use scan::{primeness_enumeration_test, ScanOptions, ScanReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Status {
    Identity,
    Central,
    Neither,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Identity => "Identity",
            Status::Central => "Central",
            Status::Neither => "Neither",
        })
    }
}

/// Whether the evidence substitutes into the input polynomial or into one of
/// its multilinear pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvidenceLevel {
    Polynomial,
    Piece,
}

/// A concrete admissible substitution and the resulting value.
#[derive(Clone, Debug)]
pub struct Evidence {
    pub level: EvidenceLevel,
    /// The polynomial the assignment is substituted into.
    pub polynomial: GPolynomial,
    pub assignment: BTreeMap<GVar, RingMatrix>,
    pub value: RingMatrix,
    /// For non-central values: an element `y` with `[value, y] != 0`.
    pub witness: Option<(RingMatrix, RingMatrix)>,
}

impl Evidence {
    /// Re-evaluates the stored assignment and compares with the stored value.
    pub fn replays(&self, algebra: &GradedMatrixAlgebra) -> bool {
        let value = evaluate_unchecked(&self.polynomial, algebra.n(), algebra.budget(), &self.assignment);
        value == self.value
            && self
                .witness
                .as_ref()
                .is_none_or(|(y, c)| value.commutator(y) == *c && !c.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Option<Evidence>,
    /// Grassmann budget the verdict was computed at (E-entry algebras only).
    pub budget: Option<usize>,
    /// Verdict recomputed at budget + 2 agreed, when that recheck ran.
    pub stable_at_larger_budget: Option<bool>,
}

impl Verdict {
    pub fn budget_note(&self) -> Option<String> {
        self.budget.map(|b| format!("within Grassmann budget {b}"))
    }
}

/// Knobs shared by the decision procedures.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub exec: ExecMode,
    pub mode: Admissibility,
    pub evidence: bool,
    pub stability_recheck: bool,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            exec: ExecMode::Auto,
            mode: Admissibility::Graded,
            evidence: true,
            stability_recheck: true,
            seed: 0x5eed,
        }
    }
}

impl CheckOptions {
    pub fn quick() -> Self {
        Self {
            evidence: false,
            stability_recheck: false,
            ..Self::default()
        }
    }

    pub fn ordinary(self) -> Self {
        Self {
            mode: Admissibility::Ordinary,
            ..self
        }
    }
}

/// Whether every admissible substitution annihilates `f`.
pub fn check_graded_identity(f: &GPolynomial, algebra: &GradedMatrixAlgebra) -> Result<bool> {
    check_identity_with(f, algebra, &CheckOptions::quick())
}

pub fn check_identity_with(f: &GPolynomial, algebra: &GradedMatrixAlgebra, opts: &CheckOptions) -> Result<bool> {
    Ok(engine::find_nonvanishing_piece(f, algebra, opts.mode, opts.exec)?.is_none())
}

/// Degrees `g` for which `[f, y_g]` must vanish, and the fresh variables.
fn commutator_probes(f: &GPolynomial, algebra: &GradedMatrixAlgebra, mode: Admissibility) -> Vec<GVar> {
    let fresh = f.max_index() + 1;
    match mode {
        Admissibility::Graded => algebra.support().into_iter().map(|g| GVar::new(fresh, g)).collect(),
        Admissibility::Ordinary => vec![GVar::new(fresh, algebra.group().identity())],
    }
}

/// Identity, Central (every value is central) or Neither, with evidence.
pub fn check_graded_central(f: &GPolynomial, algebra: &GradedMatrixAlgebra) -> Result<Verdict> {
    check_central_with(f, algebra, &CheckOptions::default())
}

pub fn check_central_with(f: &GPolynomial, algebra: &GradedMatrixAlgebra, opts: &CheckOptions) -> Result<Verdict> {
    let verdict = central_verdict(f, algebra, opts)?;
    if !(opts.stability_recheck && algebra.has_grassmann_entries()) {
        return Ok(verdict);
    }
    let larger = algebra.with_budget(algebra.budget() + 2);
    let again = central_verdict(
        f,
        &larger,
        &CheckOptions {
            evidence: false,
            ..*opts
        },
    )?;
    Ok(Verdict {
        stable_at_larger_budget: Some(again.status == verdict.status),
        ..verdict
    })
}

fn central_verdict(f: &GPolynomial, algebra: &GradedMatrixAlgebra, opts: &CheckOptions) -> Result<Verdict> {
    let budget = algebra.has_grassmann_entries().then_some(algebra.budget());
    let done = |status, evidence| Verdict {
        status,
        evidence,
        budget,
        stable_at_larger_budget: None,
    };
    let Some(nonzero) = engine::find_nonvanishing_piece(f, algebra, opts.mode, opts.exec)? else {
        return Ok(done(Status::Identity, None));
    };
    for y in commutator_probes(f, algebra, opts.mode) {
        let bracket = f.commutator(&GPolynomial::var(y));
        if let Some(bad) = engine::find_nonvanishing_piece(&bracket, algebra, opts.mode, opts.exec)? {
            let evidence = if opts.evidence {
                Some(noncentral_evidence(f, y, &bracket, &bad, algebra, opts)?)
            } else {
                None
            };
            return Ok(done(Status::Neither, evidence));
        }
    }
    let evidence = if opts.evidence {
        Some(nonzero_evidence(f, &nonzero, algebra, opts)?)
    } else {
        None
    };
    Ok(done(Status::Central, evidence))
}

/// Substitution `x -> sum_k t_k b_k` over the copies of `x`, for integer `t`.
fn lifted_assignment(
    piece: &engine::NonzeroPiece,
    algebra: &GradedMatrixAlgebra,
    target: &GPolynomial,
    weights: &[i64],
) -> BTreeMap<GVar, RingMatrix> {
    let tuple = piece.piece.tuple(piece.key);
    // variables outside this piece's component are set to zero
    let mut out: BTreeMap<GVar, RingMatrix> = target
        .variables()
        .into_iter()
        .map(|v| (v, RingMatrix::zero(algebra.n(), algebra.budget())))
        .collect();
    for (k, rep) in tuple.iter().enumerate() {
        let copy = piece.piece.vars[k];
        let original = piece.origin.get(&copy).copied().unwrap_or(copy);
        let m = piece
            .piece
            .rep_matrix(algebra, k, rep)
            .scale(&CycloScalar::from_integer(weights[k]));
        let slot = out
            .entry(original)
            .or_insert_with(|| RingMatrix::zero(algebra.n(), algebra.budget()));
        *slot = slot.add(&m);
    }
    out
}

/// Searches integer weights for which the lifted substitution satisfies `accept`.
fn search_lift(
    piece: &engine::NonzeroPiece,
    algebra: &GradedMatrixAlgebra,
    target: &GPolynomial,
    opts: &CheckOptions,
    mut accept: impl FnMut(&BTreeMap<GVar, RingMatrix>) -> bool,
) -> Option<BTreeMap<GVar, RingMatrix>> {
    let slots = piece.piece.slots();
    let degree = slots as i64;
    let ones = vec![1; slots];
    let a = lifted_assignment(piece, algebra, target, &ones);
    if accept(&a) {
        return Some(a);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..2000 {
        let weights: Vec<i64> = (0..slots).map(|_| rng.random_range(1..=degree + 1)).collect();
        let a = lifted_assignment(piece, algebra, target, &weights);
        if accept(&a) {
            return Some(a);
        }
    }
    None
}

fn nonzero_evidence(
    f: &GPolynomial,
    piece: &engine::NonzeroPiece,
    algebra: &GradedMatrixAlgebra,
    opts: &CheckOptions,
) -> Result<Evidence> {
    let (n, budget) = (algebra.n(), algebra.budget());
    let mut value = None;
    let lifted = search_lift(piece, algebra, f, opts, |a| {
        let v = evaluate_unchecked(f, n, budget, a);
        let ok = !v.is_zero();
        value = Some(v);
        ok
    });
    Ok(match lifted {
        Some(assignment) => Evidence {
            level: EvidenceLevel::Polynomial,
            polynomial: f.clone(),
            assignment,
            value: value.expect("evaluated"),
            witness: None,
        },
        None => piece_evidence(piece, algebra, None),
    })
}

fn noncentral_evidence(
    f: &GPolynomial,
    y: GVar,
    bracket: &GPolynomial,
    piece: &engine::NonzeroPiece,
    algebra: &GradedMatrixAlgebra,
    opts: &CheckOptions,
) -> Result<Evidence> {
    let (n, budget) = (algebra.n(), algebra.budget());
    let lifted = search_lift(piece, algebra, bracket, opts, |a| !evaluate_unchecked(bracket, n, budget, a).is_zero());
    Ok(match lifted {
        Some(mut assignment) => {
            let y_value = assignment
                .remove(&y)
                .unwrap_or_else(|| RingMatrix::zero(n, budget));
            let value = evaluate_unchecked(f, n, budget, &assignment);
            let commutator = value.commutator(&y_value);
            Evidence {
                level: EvidenceLevel::Polynomial,
                polynomial: f.clone(),
                assignment,
                value,
                witness: Some((y_value, commutator)),
            }
        }
        None => piece_evidence(piece, algebra, None),
    })
}

fn piece_evidence(
    piece: &engine::NonzeroPiece,
    algebra: &GradedMatrixAlgebra,
    witness: Option<(RingMatrix, RingMatrix)>,
) -> Evidence {
    let assignment = piece.piece.assignment(algebra, piece.key);
    let value = evaluate_unchecked(&piece.piece.poly, algebra.n(), algebra.budget(), &assignment);
    Evidence {
        level: EvidenceLevel::Piece,
        polynomial: piece.piece.poly.clone(),
        assignment,
        value,
        witness,
    }
}

/// All nonzero values of the multilinear pieces of `f` on basis tuples.
pub fn admissible_values(
    f: &GPolynomial,
    algebra: &GradedMatrixAlgebra,
    mode: Admissibility,
    exec: ExecMode,
) -> Result<Vec<RingMatrix>> {
    let mut out = Vec::new();
    for (p, _) in engine::multilinear_pieces(f)? {
        let piece = engine::Piece::new(p, algebra, mode)?;
        out.extend(piece.values(algebra, exec).into_values());
    }
    Ok(out)
}

/// Common direction of all admissible values, normalized so the first nonzero
/// diagonal entry (or first nonzero entry) is 1.
#[derive(Clone, Debug)]
pub struct ScalarLine {
    pub p: RingMatrix,
    pub diagonal: bool,
    pub invertible: bool,
}

pub fn scalar_line_certificate(f: &GPolynomial, algebra: &GradedMatrixAlgebra) -> Result<Option<ScalarLine>> {
    if algebra.kind() != AlgebraKind::MnF {
        return Err(Error::PreconditionViolated("scalar line certificates need M_n(F)".into()));
    }
    let values = admissible_values(f, algebra, Admissibility::Graded, ExecMode::Auto)?;
    let Some(first) = values.first() else {
        return Ok(None);
    };
    if values[1..].iter().any(|v| first.proportionality(v).is_none()) {
        return Ok(None);
    }
    let n = algebra.n();
    let pivot = (0..n)
        .map(|i| first.get(i, i))
        .find(|x| !x.is_zero())
        .or_else(|| first.entries().next().map(|(_, _, x)| x))
        .and_then(|x| x.as_scalar())
        .expect("nonzero scalar entry");
    let p = first.scale(&pivot.inverse()?);
    let diagonal = p.is_diagonal();
    let invertible = diagonal && p.scalar_diagonal().is_some_and(|d| d.iter().all(|c| !c.is_zero()));
    Ok(Some(ScalarLine { p, diagonal, invertible }))
}

/// Verdict for an ordinary polynomial (all components admissible), plus the
/// component holding every value of `f` when a companion `g` with `f g`
/// central is supplied.
#[derive(Clone, Debug)]
pub struct OrdinaryReport {
    pub verdict: Verdict,
    pub product_central: Option<bool>,
    pub component: Option<Elem>,
}

pub fn check_graded_central_ordinary(
    f: &GPolynomial,
    algebra: &GradedMatrixAlgebra,
    companion: Option<&GPolynomial>,
) -> Result<OrdinaryReport> {
    let opts = CheckOptions::default().ordinary();
    let graded_input = f
        .variables()
        .iter()
        .chain(companion.map(|g| g.variables()).unwrap_or_default().iter())
        .any(|v| v.degree != algebra.group().identity());
    let verdict = if graded_input {
        check_central_with(f, algebra, &CheckOptions::default())?
    } else {
        check_central_with(f, algebra, &opts)?
    };
    let Some(g) = companion else {
        return Ok(OrdinaryReport {
            verdict,
            product_central: None,
            component: None,
        });
    };
    let mode = if graded_input { Admissibility::Graded } else { Admissibility::Ordinary };
    let shifted = shift_variables(g, f.max_index());
    let product = f.mul(&shifted);
    let product_opts = CheckOptions {
        mode,
        ..CheckOptions::quick()
    };
    let product_central = check_central_with(&product, algebra, &product_opts)?.status == Status::Central;
    let mut component = None;
    if product_central {
        let values = admissible_values(f, algebra, mode, ExecMode::Auto)?;
        let support: Vec<Elem> = algebra.support().into_iter().collect();
        component = support
            .into_iter()
            .find(|&g| !values.is_empty() && values.iter().all(|v| algebra.is_homogeneous_of(v, g)));
    }
    Ok(OrdinaryReport {
        verdict,
        product_central: Some(product_central),
        component,
    })
}

/// Renames `x_i` to `x_{i + offset}`.
pub fn shift_variables(f: &GPolynomial, offset: u32) -> GPolynomial {
    GPolynomial::from_terms(f.terms().iter().map(|(m, c)| {
        let letters = m
            .letters
            .iter()
            .map(|v| GVar::new(v.index + offset, v.degree))
            .collect();
        (crate::freealg::GMonomial::new(letters), c.clone())
    }))
}

/// Product of `k` copies of `f` in pairwise disjoint variables.
pub fn disjoint_power(f: &GPolynomial, k: usize) -> GPolynomial {
    let width = f.max_index();
    (0..k).fold(GPolynomial::one(), |acc, j| acc.mul(&shift_variables(f, width * j as u32)))
}

/// `f` is an identity for `M_{a+b}(F)` with tuple `(0^a, 1^b)` iff `f*` is one
/// for `M_{a,b}(E)`; both sides are computed independently.
#[derive(Clone, Debug)]
pub struct TransferReport {
    pub f_identity_matrix: bool,
    pub star_identity_envelope: bool,
    pub star: GPolynomial,
}

impl TransferReport {
    pub fn agree(&self) -> bool {
        self.f_identity_matrix == self.star_identity_envelope
    }
}

pub fn check_transfer_star(f: &GPolynomial, a: usize, b: usize, budget: usize) -> Result<TransferReport> {
    let z2 = crate::groups::FiniteGroup::cyclic(2);
    let tuple = std::iter::repeat_n(0, a).chain(std::iter::repeat_n(1, b)).collect();
    let matrix = GradedMatrixAlgebra::mnf(crate::matalg::ElementaryGrading::new(z2, tuple)?, 1);
    let envelope = crate::matalg::envelope(&matrix, budget)?;
    let star = f.transform_star(&crate::regular::Bicharacter::grassmann())?;
    Ok(TransferReport {
        f_identity_matrix: check_graded_identity(f, &matrix)?,
        star_identity_envelope: check_graded_identity(&star, &envelope)?,
        star,
    })
}
