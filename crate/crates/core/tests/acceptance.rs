//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::time::{Duration, Instant};

use gpi_core::checker::scan::{primeness_enumeration_test, Expectation, ScanOptions};
use gpi_core::checker::{
    check_central_with, check_graded_central, check_graded_central_ordinary, check_graded_identity,
    check_transfer_star, classify_primeness, CheckOptions, PrimenessVerdict, Status,
};
use gpi_core::freealg::{GMonomial, GPolynomial, GVar};
use gpi_core::groups::{homs_to_roots, orbits, FiniteGroup, Permutation};
use gpi_core::matalg::{aut_subgroup_h, envelope_agrees, p_matrix, ElementaryGrading, GradedMatrixAlgebra, RingMatrix};
use gpi_core::regular::{Bicharacter, RegularGradingSpec};
use gpi_core::scalars::{torsion_order, CycloScalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn grading(order: usize, names: &[&str]) -> ElementaryGrading {
    ElementaryGrading::from_names(FiniteGroup::cyclic(order), names).unwrap()
}

fn certificate(v: PrimenessVerdict) -> Result<Box<gpi_core::checker::WitnessCertificate>, String> {
    match v {
        PrimenessVerdict::Fails(c) => Ok(c),
        PrimenessVerdict::Holds { .. } => Err("expected Fails, got Holds".into()),
    }
}

fn criterion_1() -> Outcome {
    let gr = grading(2, &["e", "g"]);
    let z2 = gr.group().clone();
    let cert = certificate(classify_primeness(&gr, 1).map_err(|e| e.to_string())?)?;
    let expected_f = common::parse("x1[g]*x2[g] - x2[g]*x1[g]", &z2);
    ensure(cert.f == expected_f, format!("f = {}", cert.f.display(&z2)))?;
    ensure(cert.p.pretty() == "diag(1,-1)", format!("P = {}", cert.p.pretty()))?;
    ensure(cert.k == 2, "k != 2")?;
    let m2 = GradedMatrixAlgebra::mnf(gr, 1);
    let f_status = check_graded_central(&cert.f, &m2).map_err(|e| e.to_string())?.status;
    let copy = gpi_core::checker::shift_variables(&cert.f, 2);
    let prod_status = check_graded_central(&cert.f.mul(&copy), &m2).map_err(|e| e.to_string())?.status;
    ensure(f_status == Status::Neither, format!("f is {f_status}"))?;
    ensure(prod_status == Status::Central, format!("f*f' is {prod_status}"))?;
    ensure(cert.p.pow(2) == RingMatrix::identity(2, 0), "P^2 != I")?;
    Ok("Fails, f = x1[g]*x2[g] - x2[g]*x1[g], P = diag(1,-1), k = 2, P^2 = I".into())
}

fn criterion_2() -> Outcome {
    let gr = grading(3, &["e", "g", "g^2"]);
    let over_q = classify_primeness(&gr, 1).map_err(|e| e.to_string())?;
    ensure(over_q.holds(), "expected Holds over Q")?;
    let cert = certificate(classify_primeness(&gr, 3).map_err(|e| e.to_string())?)?;
    let z = CycloScalar::root_of_unity(3, 1);
    let expected = RingMatrix::diagonal(0, &[CycloScalar::one(), z.clone(), &z * &z]);
    ensure(cert.p == expected, format!("P = {}", cert.p.pretty()))?;
    ensure(cert.k == 3, "k != 3")?;
    ensure(cert.p.pow(3) == RingMatrix::identity(3, 0), "P^3 != I")?;
    let m3 = GradedMatrixAlgebra::mnf(gr, 3);
    let f_status = check_graded_central(&cert.f, &m3).map_err(|e| e.to_string())?.status;
    let product = gpi_core::checker::disjoint_power(&cert.f, 3);
    let p_status = check_graded_central(&product, &m3).map_err(|e| e.to_string())?.status;
    ensure(f_status == Status::Neither, format!("f is {f_status}"))?;
    ensure(p_status == Status::Central, format!("3-fold product is {p_status}"))?;
    Ok(format!("Holds over Q; Fails over Q(zeta_3) with P = {}, k = 3", cert.p.pretty()))
}

fn criterion_3() -> Outcome {
    let gr = grading(4, &["e", "g"]);
    let h = aut_subgroup_h(&gr).map_err(|e| e.to_string())?;
    ensure(h.order() == 1, format!("|H| = {}", h.order()))?;
    let cert = certificate(classify_primeness(&gr, 1).map_err(|e| e.to_string())?)?;
    ensure(cert.orbits.len() == 2, "expected 2 orbits")?;
    ensure(cert.p.to_string() == "E11 - E22", format!("P = {}", cert.p))?;
    ensure(cert.lambda.is_trivial(), "lambda not trivial")?;
    ensure(cert.k == 2, "k != 2")?;
    ensure(cert.is_verified(), "certificate checks failed")?;
    Ok("H = {id}, 2 orbits, P = E11 - E22, trivial lambda, k = 2, verified".into())
}

fn criterion_4() -> Outcome {
    let m11 = GradedMatrixAlgebra::mab(1, 1, 6, 1).map_err(|e| e.to_string())?;
    let z2 = m11.group().clone();
    let product = common::parse("x1[1]^2*x2[1]^2", &z2);
    let v = check_graded_central(&product, &m11).map_err(|e| e.to_string())?;
    ensure(v.status == Status::Central, format!("product is {}", v.status))?;
    ensure(v.stable_at_larger_budget == Some(true), "recheck at budget 8 disagrees")?;
    let at8 = check_graded_central(&product, &m11.with_budget(8)).map_err(|e| e.to_string())?;
    ensure(at8.status == Status::Central, "product not Central at budget 8")?;
    for text in ["x1[1]^2", "x2[1]^2"] {
        let s = check_graded_central(&common::parse(text, &z2), &m11).map_err(|e| e.to_string())?;
        ensure(s.status == Status::Neither, format!("{text} is {}", s.status))?;
    }
    Ok("x1[1]^2*x2[1]^2 Central, both factors Neither, stable at budget 8".into())
}

fn criterion_5() -> Outcome {
    let mut cases = 0usize;
    let mut disagreements = 0usize;
    let mut identities = 0usize;
    for d in 1..=3usize {
        let perms = Permutation::all(d);
        for pattern in 0..1usize << d {
            let degrees: Vec<usize> = (0..d).map(|k| pattern >> k & 1).collect();
            let words: Vec<GMonomial> = perms
                .iter()
                .map(|p| {
                    GMonomial::new((0..d).map(|k| GVar::new(p.apply(k) as u32 + 1, degrees[p.apply(k)])).collect())
                })
                .collect();
            let total = 3usize.pow(words.len() as u32);
            for code in 1..total {
                let mut c = code;
                let mut f = GPolynomial::zero();
                for w in &words {
                    let digit = c % 3;
                    c /= 3;
                    if digit != 0 {
                        f.add_term(w.clone(), CycloScalar::from_integer(if digit == 1 { 1 } else { -1 }));
                    }
                }
                if f.variables().len() != d {
                    continue;
                }
                let report = check_transfer_star(&f, 1, 1, 2 * d).map_err(|e| e.to_string())?;
                cases += 1;
                identities += report.f_identity_matrix as usize;
                disagreements += !report.agree() as usize;
            }
        }
    }
    ensure(disagreements == 0, format!("{disagreements} disagreements in {cases} cases"))?;
    Ok(format!("{cases} cases ({identities} identities), 0 disagreements"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let z2 = grading(2, &["e", "g"]);
    let trivial = ElementaryGrading::trivial(2);
    let mut mismatches = 0;
    let mut identities = 0;
    for k in 0..30 {
        let gr = if k % 2 == 0 { &z2 } else { &trivial };
        let support: Vec<usize> = gr.support().into_iter().collect();
        let f = if k % 3 == 0 {
            common::random_neutral_commutator(&mut rng, 0)
        } else {
            common::random_multihomogeneous(&mut rng, &support, 4, 3)
        };
        let algebra = GradedMatrixAlgebra::mnf(gr.clone(), 1);
        let fast = check_graded_identity(&f, &algebra).map_err(|e| e.to_string())?;
        let oracle = common::generic_coordinates_identity(&f, gr);
        identities += oracle as usize;
        mismatches += (fast != oracle) as usize;
    }
    ensure(mismatches == 0, format!("{mismatches} mismatches on M2(Q)"))?;

    let m11 = GradedMatrixAlgebra::mab(1, 1, 8, 1).map_err(|e| e.to_string())?;
    let group = m11.group().clone();
    let mut set: Vec<GPolynomial> = [
        "[x1,x2]",
        "[x1,x2]*x3[1]",
        "x1[1]*x2[1] + x2[1]*x1[1]",
        "[x1[1]*x2[1], x3]",
        "[x1,x2]*x3[1]*x4[1]",
        "x1[1]*x2[1]*x3[1] - x3[1]*x2[1]*x1[1]",
    ]
    .iter()
    .map(|t| common::parse(t, &group))
    .collect();
    for d in 1..=4 {
        for _ in 0..6 {
            let degrees: Vec<usize> = (0..d).map(|_| rand::Rng::random_range(&mut rng, 0..2)).collect();
            set.push(common::random_multilinear(&mut rng, &degrees));
        }
    }
    let mut e_mismatches = 0;
    let mut e_identities = 0;
    for f in &set {
        let fast = check_graded_identity(f, &m11).map_err(|e| e.to_string())?;
        let oracle = common::exhaustive_mab_identity(f, 1, 1);
        e_identities += oracle as usize;
        e_mismatches += (fast != oracle) as usize;
    }
    ensure(e_mismatches == 0, format!("{e_mismatches} mismatches on M_(1,1)(E)"))?;
    Ok(format!(
        "M2(Q): 30 polynomials ({identities} identities), 0 mismatches; M_(1,1)(E): {} polynomials ({e_identities} identities), 0 mismatches",
        set.len()
    ))
}

fn criterion_7() -> Outcome {
    // bicharacter axioms, with a corrupted table as negative control
    ensure(Bicharacter::grassmann().is_valid(), "Grassmann bicharacter invalid")?;
    for m in [2, 3] {
        ensure(Bicharacter::pauli(m).is_valid(), format!("Pauli({m}) invalid"))?;
    }
    let z2 = FiniteGroup::cyclic(2);
    let minus = CycloScalar::from_integer(-1);
    let corrupt = Bicharacter::new_unchecked(z2.clone(), vec![CycloScalar::one(), minus.clone(), CycloScalar::one(), minus])
        .map_err(|e| e.to_string())?;
    ensure(!corrupt.is_valid(), "corrupted table accepted")?;

    ensure(RegularGradingSpec::grassmann(5).check_p2(), "Grassmann (P2) at budget 5")?;
    for (m, conductor) in [(2usize, 1u32), (3, 3)] {
        let spec = RegularGradingSpec::pauli(m, conductor).map_err(|e| e.to_string())?;
        let h = spec.group().clone();
        for len in 1..=3 {
            let mut idx = vec![0usize; len];
            loop {
                ensure(
                    spec.check_p1(&idx).map_err(|e| e.to_string())?.is_some(),
                    format!("Pauli({m}) (P1) fails for {idx:?}"),
                )?;
                let mut k = 0;
                while k < len {
                    idx[k] += 1;
                    if idx[k] < h.order() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == len {
                    break;
                }
            }
        }
        ensure(spec.check_p2(), format!("Pauli({m}) (P2)"))?;
        ensure(spec.beta.is_minimal(), format!("Pauli({m}) minimality"))?;
        ensure(spec.center_equals_neutral(), format!("Pauli({m}) center"))?;
    }

    // P(i) matrices: equivariance and orbit supports; orbit sizes
    for (gr, conductor) in [
        (grading(2, &["e", "g"]), 1u32),
        (grading(3, &["e", "g", "g^2"]), 3),
        (grading(4, &["e", "g"]), 1),
    ] {
        let h = aut_subgroup_h(&gr).map_err(|e| e.to_string())?;
        let n = gr.n();
        let orbit_list = orbits(&h.elements, n);
        let orbit_of = |i: usize| orbit_list.iter().position(|o| o.contains(&i)).unwrap();
        for lambda in homs_to_roots(&h.group, torsion_order(conductor)).map_err(|e| e.to_string())? {
            for i in 0..n {
                let p = p_matrix(&h, &lambda, i);
                for (k, sigma) in h.elements.iter().enumerate() {
                    let expected = p.scale(&lambda.value(k).inverse().map_err(|e| e.to_string())?);
                    ensure(p.permuted(sigma) == expected, "P(i) not equivariant")?;
                }
                for j in 0..n {
                    let q = p_matrix(&h, &lambda, j);
                    let shared = (0..n).any(|t| !p.get(t, t).is_zero() && !q.get(t, t).is_zero());
                    ensure(shared == (orbit_of(i) == orbit_of(j)), "P(i), P(j) support vs orbits")?;
                }
            }
        }
        for o in &orbit_list {
            ensure(o.len() == h.order(), "orbit size != |H|")?;
        }
        ensure(n % h.order() == 0, "|H| does not divide n")?;
    }
    let z2xz2 = FiniteGroup::cyclic_product(&[2, 2]);
    let z6 = FiniteGroup::cyclic(6);
    for gr in [
        ElementaryGrading::from_names(z2xz2, &["(0,0)", "(0,1)", "(1,0)", "(1,1)"]).unwrap(),
        ElementaryGrading::from_names(z6.clone(), &["e", "g^3"]).unwrap(),
        ElementaryGrading::from_names(z6.clone(), &["e", "g^2", "g^4", "g"]).unwrap(),
        ElementaryGrading::from_names(z6, &["e", "g", "g^3", "g^4"]).unwrap(),
    ] {
        let h = aut_subgroup_h(&gr).map_err(|e| e.to_string())?;
        ensure(gr.n() % h.order() == 0, "|H| does not divide n")?;
        ensure(orbits(&h.elements, gr.n()).iter().all(|o| o.len() == h.order()), "orbit size")?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let z3 = FiniteGroup::cyclic(3);
    let support: Vec<usize> = z3.elements().collect();
    for _ in 0..50 {
        let f = common::random_multihomogeneous(&mut rng, &support, 5, 3);
        ensure(f.verify_derivation_identity(&z3).map_err(|e| e.to_string())?, "derivation identity")?;
    }

    for (a, b) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)] {
        for budget in 0..=4 {
            ensure(
                envelope_agrees(a, b, budget).map_err(|e| e.to_string())?,
                format!("envelope mismatch a={a} b={b} budget={budget}"),
            )?;
        }
    }
    Ok("bicharacters, (P1)/(P2)/minimality/center, P(i) and orbit checks, 50 derivation identities, envelopes a+b <= 3".into())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let opts = ScanOptions::default();
    let m2 = GradedMatrixAlgebra::mnf(grading(2, &["e", "g"]), 1);
    let m11 = GradedMatrixAlgebra::mab(1, 1, 6, 1).map_err(|e| e.to_string())?;
    let m3 = GradedMatrixAlgebra::mnf(grading(3, &["e", "g", "g^2"]), 1);
    let mut notes = Vec::new();
    for (name, algebra) in [("M2/Z2", &m2), ("M_(1,1)(E)", &m11)] {
        let r = primeness_enumeration_test(algebra, &opts).map_err(|e| e.to_string())?;
        ensure(r.expectation == Expectation::Fails, format!("{name}: classifier does not predict Fails"))?;
        ensure(!r.counterexamples.is_empty(), format!("{name}: no counterexample found"))?;
        notes.push(format!("{name}: {} counterexamples", r.counterexamples.len()));
    }
    let r = primeness_enumeration_test(&m3, &opts).map_err(|e| e.to_string())?;
    ensure(r.expectation == Expectation::Holds, "M3/Z3: classifier does not predict Holds")?;
    ensure(r.violations.is_empty(), format!("M3/Z3: {} violations", r.violations.len()))?;
    notes.push(format!("M3/Z3: {} pairs, 0 violations", r.pairs));
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), format!("took {elapsed:?}"))?;
    Ok(format!("{} in {:.1?}", notes.join("; "), elapsed))
}

fn criterion_9() -> Outcome {
    let m2 = GradedMatrixAlgebra::mnf(ElementaryGrading::trivial(2), 1);
    let t = m2.group().clone();
    let f = common::parse("[x1,x2]^2", &t);
    let g = common::parse("[x1,x2]^2", &t);
    let report = check_graded_central_ordinary(&f, &m2, Some(&g)).map_err(|e| e.to_string())?;
    ensure(report.verdict.status == Status::Central, format!("[x1,x2]^2 is {}", report.verdict.status))?;
    ensure(report.product_central == Some(true), "product not Central")?;
    let product = common::parse("[x1,x2]^2*[x3,x4]^2", &t);
    let v = check_central_with(&product, &m2, &CheckOptions::default().ordinary()).map_err(|e| e.to_string())?;
    ensure(v.status == Status::Central, format!("product is {}", v.status))?;
    let g_shifted = common::parse("[x3,x4]^2", &t);
    let gv = check_central_with(&g_shifted, &m2, &CheckOptions::default().ordinary()).map_err(|e| e.to_string())?;
    ensure(gv.status == Status::Central, "second factor not Central")?;
    Ok("[x1,x2]^2 Central; [x1,x2]^2*[x3,x4]^2 Central with both factors Central".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Z2 crossed product over Q fails with P = diag(1,-1)", criterion_1),
        ("Z3 crossed product: holds over Q, fails over Q(zeta_3)", criterion_2),
        ("non-crossed (e,g) over Z4", criterion_3),
        ("M_(1,1)(E): x^2*x^2 central, x^2 not", criterion_4),
        ("transfer to M_(1,1)(E) for multilinear f of degree <= 3", criterion_5),
        ("identity checker vs independent oracles", criterion_6),
        ("structural suites", criterion_7),
        ("primeness enumeration at maxdeg 2", criterion_8),
        ("ordinary central polynomials of M2(Q)", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} [{secs:.1}s]: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} [{secs:.1}s]: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
