//! `gpi`: graded identities and central polynomials from the command line.
//!
//! Exit codes: 0 definitive verdict, 1 property violation found, 2 input
//! error, 3 Grassmann budget exceeded.

mod report;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gpi_core::checker::scan::{primeness_enumeration_test, CentralProduct, Expectation, ScanOptions};
use gpi_core::checker::{
    check_central_with, check_graded_central_ordinary, check_identity_with, classify::classify_with, CheckOptions,
    PrimenessVerdict,
};
use gpi_core::exec::ExecMode;
use gpi_core::matalg::{
    aut_subgroup_h, envelope_agrees, is_crossed_product, witness_assignment, witness_polynomial, AlgebraKind,
    GradedMatrixAlgebra,
};
use gpi_core::parse::{parse_assignment, parse_polynomial};
use gpi_core::regular::RegularGradingSpec;
use gpi_core::scalars::CycloScalar;
use gpi_core::spec::{AlgebraSpec, DEFAULT_BUDGET, DEFAULT_CONDUCTOR};
use gpi_core::Error;
use report::Context;
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "gpi", version, about = "Graded polynomial identities and central polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print a JSON report instead of prose.
    #[arg(long, global = true)]
    json: bool,
    /// Grassmann budget (overrides the spec).
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Scalar field Q(zeta_m) (overrides the spec).
    #[arg(long, global = true)]
    conductor: Option<u32>,
    /// Seed for randomized evidence search.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run single-threaded.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Is the polynomial a graded identity?
    CheckIdentity {
        #[arg(long)]
        algebra: String,
        poly: String,
        /// Allow arbitrary (non-homogeneous) substitutions.
        #[arg(long)]
        ordinary: bool,
    },
    /// Identity, graded central, or neither.
    CheckCentral {
        #[arg(long)]
        algebra: String,
        poly: String,
        #[arg(long)]
        ordinary: bool,
        /// Companion g: report whether f*g is central and where the values of f lie.
        #[arg(long = "with")]
        companion: Option<String>,
    },
    /// Decide the primeness property for M_n(F) with an elementary grading.
    Classify {
        #[arg(long)]
        algebra: String,
    },
    /// The permutations preserving the grading, and their orbits.
    AutGroup {
        #[arg(long)]
        algebra: String,
    },
    /// Cyclic witness polynomial for a diagonal P (default: the classifier's).
    Witness {
        #[arg(long)]
        algebra: String,
        /// Diagonal entries, comma separated, e.g. "1,-1".
        #[arg(long)]
        p: Option<String>,
    },
    /// Apply the commutation-factor transforms f_h or f*.
    Transform {
        /// `grassmann:budget=6` or `pauli:m=2`.
        #[arg(long)]
        regular: String,
        poly: String,
        /// Degrees for f_h, e.g. "1=1,2=0".
        #[arg(long)]
        h: Option<String>,
        /// Use the variables' own degrees (f*).
        #[arg(long)]
        star: bool,
    },
    /// Compare M_{a+b}(F) with M_{a,b}(E) basis-wise, and optionally transfer f.
    EnvelopeCheck {
        #[arg(long)]
        algebra: String,
        poly: Option<String>,
    },
    /// Exhaustive search for central products with non-central factors.
    PrimenessScan {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        maxdeg: usize,
        /// Coefficient set, comma separated.
        #[arg(long, default_value = "1,-1")]
        coeffs: String,
        /// Refuse to scan more candidate polynomials than this.
        #[arg(long, default_value_t = 400)]
        max_candidates: usize,
    },
    /// Evaluate a polynomial at a substitution.
    Eval {
        #[arg(long)]
        algebra: String,
        poly: String,
        /// e.g. "x1=E12,x2=e1*E21".
        #[arg(long)]
        at: String,
    },
}

struct Outcome {
    report: Map<String, Value>,
    lines: Vec<String>,
    code: u8,
}

impl Outcome {
    fn new(report: Map<String, Value>, code: u8) -> Self {
        Self {
            report,
            lines: Vec::new(),
            code,
        }
    }

    fn line(mut self, l: impl Into<String>) -> Self {
        self.lines.push(l.into());
        self
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckIdentity { .. } => "check-identity",
        Command::CheckCentral { .. } => "check-central",
        Command::Classify { .. } => "classify",
        Command::AutGroup { .. } => "aut-group",
        Command::Witness { .. } => "witness",
        Command::Transform { .. } => "transform",
        Command::EnvelopeCheck { .. } => "envelope-check",
        Command::PrimenessScan { .. } => "primeness-scan",
        Command::Eval { .. } => "eval",
    }
}

struct Runner {
    ctx: Context,
    opts: CheckOptions,
    budget: Option<usize>,
    conductor: Option<u32>,
}

impl Runner {
    fn load(&mut self, arg: &str) -> Result<GradedMatrixAlgebra, Error> {
        let mut spec = AlgebraSpec::load(arg)?;
        if let Some(b) = self.budget {
            spec.budget = b;
        }
        if let Some(c) = self.conductor {
            spec.conductor = c;
        }
        self.ctx.algebra = Some(spec.echo());
        self.ctx.conductor = spec.conductor;
        self.ctx.budget = spec.budget;
        spec.build()
    }

    fn run(&mut self, command: &Command) -> Result<Outcome, Error> {
        match command {
            Command::CheckIdentity { algebra, poly, ordinary } => {
                let a = self.load(algebra)?;
                let f = parse_polynomial(poly, a.group())?;
                let opts = if *ordinary { self.opts.ordinary() } else { self.opts };
                let identity = check_identity_with(&f, &a, &opts)?;
                let status = if identity { "Identity" } else { "NotIdentity" };
                let mut r = self.ctx.report(status);
                r.insert("polynomial".into(), json!(f.display(a.group())));
                r.insert("identity".into(), json!(identity));
                Ok(Outcome::new(r, 0).line(format!("{status}: {}", f.display(a.group()))))
            }
            Command::CheckCentral {
                algebra,
                poly,
                ordinary,
                companion,
            } => {
                let a = self.load(algebra)?;
                let group = a.group().clone();
                let f = parse_polynomial(poly, &group)?;
                let mut lines = Vec::new();
                let (verdict, extra) = match companion {
                    Some(g_text) => {
                        let g = parse_polynomial(g_text, &group)?;
                        let rep = check_graded_central_ordinary(&f, &a, Some(&g))?;
                        let component = rep.component.map(|c| group.name(c).to_string());
                        lines.push(format!(
                            "product with companion central: {}",
                            rep.product_central.unwrap_or(false)
                        ));
                        if let Some(c) = &component {
                            lines.push(format!("all values of f lie in component {c}"));
                        }
                        (
                            rep.verdict,
                            Some(json!({"product_central": rep.product_central, "component": component})),
                        )
                    }
                    None => {
                        let opts = if *ordinary { self.opts.ordinary() } else { self.opts };
                        (check_central_with(&f, &a, &opts)?, None)
                    }
                };
                let mut r = self.ctx.report(&verdict.status.to_string());
                r.insert("polynomial".into(), json!(f.display(&group)));
                report::verdict(&mut r, &verdict, &group);
                if let Some(x) = extra {
                    r.insert("companion".into(), x);
                }
                let mut out = Outcome::new(r, 0).line(format!("{}: {}", verdict.status, f.display(&group)));
                if let Some(e) = &verdict.evidence {
                    let subs: Vec<String> = e
                        .assignment
                        .iter()
                        .map(|(v, m)| format!("{}={}", v.display(&group), m))
                        .collect();
                    out = out.line(format!("  evidence: {} at {} = {}", e.polynomial.display(&group), subs.join(", "), e.value));
                    if let Some((y, c)) = &e.witness {
                        out = out.line(format!("  [value, {y}] = {c}"));
                    }
                }
                if let Some(note) = verdict.budget_note() {
                    out = out.line(format!("  {note}"));
                }
                out.lines.extend(lines);
                Ok(out)
            }
            Command::Classify { algebra } => {
                let a = self.load(algebra)?;
                if a.kind() != AlgebraKind::MnF {
                    return Err(Error::Spec("classify applies to kind MnF".into()));
                }
                let group = a.group().clone();
                if !a.grading().is_distinct() {
                    let mut r = self.ctx.report("Unsupported");
                    r.insert("reason".into(), json!("grading tuple has repeated entries"));
                    return Ok(Outcome::new(r, 2).line("Unsupported: grading tuple has repeated entries"));
                }
                match classify_with(a.grading(), a.conductor(), &self.opts)? {
                    PrimenessVerdict::Holds { h, characters } => {
                        let mut r = self.ctx.report("Holds");
                        r.insert("H".into(), report::group_elements(&h));
                        r.insert("characters".into(), json!(characters));
                        Ok(Outcome::new(r, 0).line(format!(
                            "Holds: crossed product grading, |H| = {}, no nontrivial character into {}",
                            h.order(),
                            report::field_name(a.conductor())
                        )))
                    }
                    PrimenessVerdict::Fails(cert) => {
                        let mut r = self.ctx.report("Fails");
                        report::certificate(&mut r, &cert, &group);
                        let code = if cert.is_verified() { 0 } else { 1 };
                        Ok(Outcome::new(r, code)
                            .line(format!(
                                "Fails: witness f={}, P={}, k={}",
                                cert.f.display(&group),
                                cert.p.pretty(),
                                cert.k
                            ))
                            .line(format!("  {}; certificate verified: {}", cert.note(), cert.is_verified())))
                    }
                }
            }
            Command::AutGroup { algebra } => {
                let a = self.load(algebra)?;
                let h = aut_subgroup_h(a.grading())?;
                let crossed = if a.grading().is_distinct() {
                    Some(is_crossed_product(a.grading())?.is_yes())
                } else {
                    None
                };
                let orbit_list = gpi_core::groups::orbits(&h.elements, a.n());
                let mut r = self.ctx.report("Group");
                r.insert("H".into(), report::group_elements(&h));
                r.insert("order".into(), json!(h.order()));
                r.insert("orbits".into(), report::orbits(&orbit_list));
                r.insert("crossed_product".into(), json!(crossed));
                let names: Vec<String> = h.elements.iter().map(|p| p.to_string()).collect();
                Ok(Outcome::new(r, 0)
                    .line(format!("H = {{{}}}, |H| = {}", names.join(", "), h.order()))
                    .line(format!("orbits: {}", report::orbits(&orbit_list)))
                    .line(format!(
                        "crossed product: {}",
                        crossed.map_or("unsupported (repeated entries)".to_string(), |c| c.to_string())
                    )))
            }
            Command::Witness { algebra, p } => {
                let a = self.load(algebra)?;
                if a.kind() != AlgebraKind::MnF {
                    return Err(Error::Spec("witness applies to kind MnF".into()));
                }
                let group = a.group().clone();
                let diag: Vec<CycloScalar> = match p {
                    Some(text) => parse_scalars(text)?,
                    None => match classify_with(a.grading(), a.conductor(), &CheckOptions::quick())? {
                        PrimenessVerdict::Fails(cert) => cert.p.scalar_diagonal().expect("diagonal P"),
                        PrimenessVerdict::Holds { .. } => {
                            return Err(Error::Spec("primeness holds; pass --p to choose a diagonal".into()))
                        }
                    },
                };
                let f = witness_polynomial(a.grading(), &diag)?;
                let at = witness_assignment(a.grading());
                let value = a.evaluate(&f, &at)?;
                let mut r = self.ctx.report("Witness");
                r.insert("f".into(), json!(f.display(&group)));
                r.insert("assignment".into(), report::assignment(&at, &group));
                r.insert("value".into(), json!(value.to_string()));
                r.insert("P".into(), report::diagonal(&value));
                Ok(Outcome::new(r, 0)
                    .line(format!("f = {}", f.display(&group)))
                    .line(format!("f(E12, ..., En1) = {}", value.pretty())))
            }
            Command::Transform { regular, poly, h, star } => {
                let conductor = self.conductor.unwrap_or(DEFAULT_CONDUCTOR);
                let spec = RegularGradingSpec::from_spec(regular, conductor)?;
                self.ctx.algebra = Some(regular.clone());
                self.ctx.conductor = conductor;
                let group = spec.group().clone();
                let f = parse_polynomial(poly, &group)?;
                let out = match (h, star) {
                    (_, true) => f.transform_star(&spec.beta)?,
                    (Some(text), false) => f.transform_f_h(&parse_degrees(text, &group)?, &spec.beta)?,
                    (None, false) => return Err(Error::Spec("transform needs --h or --star".into())),
                };
                let mut r = self.ctx.report("Transformed");
                r.insert("polynomial".into(), json!(f.display(&group)));
                r.insert("transformed".into(), json!(out.display(&group)));
                Ok(Outcome::new(r, 0).line(out.display(&group)))
            }
            Command::EnvelopeCheck { algebra, poly } => {
                let a = self.load(algebra)?;
                let (na, nb) = split_of(&a)?;
                let budget = self.ctx.budget;
                let basis_ok = envelope_agrees(na, nb, budget.min(6))?;
                let mut r = self.ctx.report("Agree");
                r.insert("a".into(), json!(na));
                r.insert("b".into(), json!(nb));
                r.insert("basis_isomorphism".into(), json!(basis_ok));
                let mut agree = basis_ok;
                let mut out_lines = vec![format!("M_{{{na},{nb}}}(E) basis matches M_{}(F) (x) E: {basis_ok}", na + nb)];
                if let Some(text) = poly {
                    let f = parse_polynomial(text, a.group())?;
                    let t = gpi_core::checker::check_transfer_star(&f, na, nb, budget)?;
                    agree &= t.agree();
                    r.insert(
                        "transfer".into(),
                        json!({
                            "f": f.display(a.group()),
                            "f_star": t.star.display(a.group()),
                            "f_identity_matrix": t.f_identity_matrix,
                            "f_star_identity_envelope": t.star_identity_envelope,
                            "agree": t.agree(),
                        }),
                    );
                    out_lines.push(format!(
                        "f identity for M_{}(F): {}; f* = {} identity for M_{{{na},{nb}}}(E): {}",
                        na + nb,
                        t.f_identity_matrix,
                        t.star.display(a.group()),
                        t.star_identity_envelope
                    ));
                }
                let status = if agree { "Agree" } else { "Disagree" };
                r.insert("status".into(), json!(status));
                let mut out = Outcome::new(r, if agree { 0 } else { 1 }).line(status);
                out.lines.extend(out_lines);
                Ok(out)
            }
            Command::PrimenessScan {
                algebra,
                maxdeg,
                coeffs,
                max_candidates,
            } => {
                let a = self.load(algebra)?;
                let group = a.group().clone();
                let opts = ScanOptions {
                    maxdeg: *maxdeg,
                    coeffs: parse_scalars(coeffs)?,
                    exec: self.opts.exec,
                    max_candidates: *max_candidates,
                };
                let scan = primeness_enumeration_test(&a, &opts)?;
                let pair = |p: &CentralProduct| {
                    json!({
                        "f": p.f.display(&group),
                        "g": p.g.display(&group),
                        "f_status": p.f_status.to_string(),
                        "g_status": p.g_status.to_string(),
                    })
                };
                let status = if scan.consistent() { "Consistent" } else { "Inconsistent" };
                let mut r = self.ctx.report(status);
                r.insert(
                    "expectation".into(),
                    json!(match scan.expectation {
                        Expectation::Holds => "Holds",
                        Expectation::Fails => "Fails",
                        Expectation::Unknown => "Unknown",
                    }),
                );
                r.insert("maxdeg".into(), json!(maxdeg));
                r.insert("candidates".into(), json!(scan.candidates));
                r.insert("pairs".into(), json!(scan.pairs));
                r.insert("central_products".into(), json!(scan.central_products.len()));
                r.insert("violations".into(), json!(scan.violations.iter().map(pair).collect::<Vec<_>>()));
                r.insert(
                    "counterexamples".into(),
                    json!(scan.counterexamples.iter().map(pair).collect::<Vec<_>>()),
                );
                let mut out = Outcome::new(r, if scan.consistent() { 0 } else { 1 }).line(format!(
                    "{status}: {} candidates, {} pairs, {} central products, {} violations, {} counterexamples",
                    scan.candidates,
                    scan.pairs,
                    scan.central_products.len(),
                    scan.violations.len(),
                    scan.counterexamples.len()
                ));
                for p in scan.violations.iter().chain(&scan.counterexamples) {
                    out = out.line(format!(
                        "  ({}) * ({}) central; factors {} / {}",
                        p.f.display(&group),
                        p.g.display(&group),
                        p.f_status,
                        p.g_status
                    ));
                }
                Ok(out)
            }
            Command::Eval { algebra, poly, at } => {
                let a = self.load(algebra)?;
                let group = a.group().clone();
                let f = parse_polynomial(poly, &group)?;
                let assignment = parse_assignment(at, &f, &a)?;
                let value = a.evaluate(&f, &assignment)?;
                let mut r = self.ctx.report("Value");
                r.insert("polynomial".into(), json!(f.display(&group)));
                r.insert("assignment".into(), report::assignment(&assignment, &group));
                r.insert("value".into(), json!(value.to_string()));
                r.insert("central".into(), json!(a.is_central_element(&value)?));
                Ok(Outcome::new(r, 0).line(value.to_string()))
            }
        }
    }
}

fn parse_scalars(text: &str) -> Result<Vec<CycloScalar>, Error> {
    split_top_level(text).iter().map(|s| s.trim().parse()).collect()
}

fn parse_degrees(text: &str, group: &gpi_core::groups::FiniteGroup) -> Result<BTreeMap<u32, usize>, Error> {
    split_top_level(text)
        .into_iter()
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Spec(format!("expected index=degree, got `{item}`")))?;
            let k = k.trim().trim_start_matches('x');
            let idx: u32 = k.parse().map_err(|_| Error::Spec(format!("bad variable index `{k}`")))?;
            Ok((idx, group.lookup(v)?))
        })
        .collect()
}

/// Splits at commas outside parentheses.
fn split_top_level(text: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' | ';' if depth == 0 => {
                out.push(String::new());
                continue;
            }
            _ => {}
        }
        out.last_mut().unwrap().push(c);
    }
    out
}

/// `(a, b)` for `M_{a,b}(E)` or for `M_{a+b}(F)` with tuple `(0^a, 1^b)`.
fn split_of(a: &GradedMatrixAlgebra) -> Result<(usize, usize), Error> {
    if let Some(s) = a.split() {
        return Ok(s);
    }
    if a.group().order() != 2 || a.kind() != AlgebraKind::MnF {
        return Err(Error::Spec("envelope-check needs kind Mab, or MnF graded by Z2".into()));
    }
    let t = a.grading().tuple();
    let zeros = t.iter().take_while(|&&x| x == 0).count();
    if t[zeros..].contains(&0) {
        return Err(Error::TupleNotSorted);
    }
    Ok((zeros, t.len() - zeros))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = CheckOptions {
        exec: if cli.sequential { ExecMode::Sequential } else { ExecMode::Auto },
        seed: cli.seed.unwrap_or(CheckOptions::default().seed),
        ..CheckOptions::default()
    };
    let mut runner = Runner {
        ctx: Context {
            command: command_name(&cli.command),
            algebra: None,
            conductor: cli.conductor.unwrap_or(DEFAULT_CONDUCTOR),
            budget: cli.budget.unwrap_or(DEFAULT_BUDGET),
        },
        opts,
        budget: cli.budget,
        conductor: cli.conductor,
    };
    match runner.run(&cli.command) {
        Ok(out) => {
            if cli.json {
                println!("{}", Value::Object(out.report));
            } else {
                for l in &out.lines {
                    println!("{l}");
                }
                println!(
                    "[field {}, budget {}{}]",
                    report::field_name(runner.ctx.conductor),
                    runner.ctx.budget,
                    runner.ctx.algebra.as_ref().map(|a| format!(", {a}")).unwrap_or_default()
                );
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            let code = if matches!(e, Error::BudgetExceeded { .. }) { 3 } else { 2 };
            let status = if code == 3 { "BudgetExceeded" } else { "Error" };
            if cli.json {
                let mut r = runner.ctx.report(status);
                r.insert("error".into(), json!(e.to_string()));
                println!("{}", Value::Object(r));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}
