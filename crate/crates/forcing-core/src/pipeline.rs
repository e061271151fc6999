//! End-to-end certification runs: pick or load a certificate for the base
//! family, build the block matrix, audit, rank, verify dependencies, check
//! the canonical upper matching, and close the sandwich. Every stage is
//! logged so a failed run reports exactly where it halted.

use std::collections::BTreeMap;
use std::time::Instant;

use thiserror::Error;

use crate::blocks::{
    circular_block_matrix, instantiate_circular, instantiate_prism, prism_block_matrix,
    BlockError, BlockKind,
};
use crate::certificates::{
    delete_rows, fourier_pair, gprime_certificate, hypercube_involutory, hypercube_lift_chain,
    involutory_from_pair, knn_rational, pair_from_involutory, prism_lift,
    random_certificate_search, s14_certificate, star_pair, CertError, InvolutoryCertificate,
    ParsedCertificate, RowInversePair,
};
use crate::fields::{
    is_prime, Field, FieldError, FieldSpec, PrimeField, QuadraticField, Rationals,
};
use crate::forcing::{
    certify_upper_matching, circular_upper_matching, minimum_forcing_number, prism_upper_matching,
    Closure, ForcingError, FValue, OracleOutcome,
};
use crate::graphs::{BipartiteGraph, FamilyExpr, GraphError, SimpleExpr};
use crate::rank::{forcing_lower_bound, verify_case_dependency, RankError};
use crate::report::{
    DependencyDoc, ForcingDoc, GraphDescriptor, MatchingEntry, RankCertificateDoc, ReportDocument,
    ResidualDoc, StageRecord, SCHEMA_VERSION,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Parse(_) => 2,
            PipelineError::Precondition(_) => 3,
            PipelineError::Verification(_) => 4,
            PipelineError::Budget(_) => 5,
            PipelineError::Internal(_) => 6,
        }
    }
}

impl From<GraphError> for PipelineError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Parse { .. } | GraphError::File { .. } => PipelineError::Parse(e.to_string()),
            _ => PipelineError::Precondition(e.to_string()),
        }
    }
}

impl From<FieldError> for PipelineError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Parse { .. } | FieldError::MixedField { .. } => {
                PipelineError::Parse(e.to_string())
            }
            _ => PipelineError::Precondition(e.to_string()),
        }
    }
}

impl From<CertError> for PipelineError {
    fn from(e: CertError) -> Self {
        match e {
            CertError::SupportMismatch { .. }
            | CertError::NotIdentity { .. }
            | CertError::TransposeSupport { .. }
            | CertError::SignMismatch { .. }
            | CertError::Singular => PipelineError::Verification(e.to_string()),
            CertError::Graph(g) => g.into(),
            CertError::Field(f) => f.into(),
            _ => PipelineError::Precondition(e.to_string()),
        }
    }
}

impl From<BlockError> for PipelineError {
    fn from(e: BlockError) -> Self {
        match e {
            BlockError::Cert(c) => c.into(),
            BlockError::Graph(g) => g.into(),
            _ => PipelineError::Precondition(e.to_string()),
        }
    }
}

impl From<RankError> for PipelineError {
    fn from(e: RankError) -> Self {
        match e {
            RankError::UnsoundSupport(_) => PipelineError::Verification(e.to_string()),
            _ => PipelineError::Precondition(e.to_string()),
        }
    }
}

impl From<ForcingError> for PipelineError {
    fn from(e: ForcingError) -> Self {
        match e {
            ForcingError::UniquenessNotVerified(_) => PipelineError::Verification(e.to_string()),
            ForcingError::ProductShape(m) => PipelineError::Internal(m),
            _ => PipelineError::Precondition(e.to_string()),
        }
    }
}

/// Accumulates stage records, structured side data, and wall-clock
/// timings while a pipeline runs; failed stages are recorded with the
/// pipeline halted right there.
#[derive(Default)]
pub struct StageLog {
    pub stages: Vec<StageRecord>,
    pub timings: BTreeMap<String, u128>,
    pub rank_docs: Vec<RankCertificateDoc>,
    pub dependency: Option<DependencyDoc>,
    pub forcing: ForcingDoc,
}

impl StageLog {
    pub fn new() -> Self {
        StageLog::default()
    }

    fn stage<T>(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut Self) -> Result<(T, String), PipelineError>,
    ) -> Result<T, PipelineError> {
        let t0 = Instant::now();
        let result = f(self);
        self.timings.insert(name.to_string(), t0.elapsed().as_millis());
        match result {
            Ok((value, detail)) => {
                self.stages.push(StageRecord {
                    name: name.to_string(),
                    status: "pass".into(),
                    detail,
                });
                Ok(value)
            }
            Err(e) => {
                self.stages.push(StageRecord {
                    name: name.to_string(),
                    status: "fail".into(),
                    detail: e.to_string(),
                });
                Err(e)
            }
        }
    }

    pub fn into_document(
        self,
        command: String,
        graph: Option<GraphDescriptor>,
        field: Option<String>,
        verdict: String,
    ) -> ReportDocument {
        ReportDocument {
            schema_version: SCHEMA_VERSION.into(),
            tool_version: crate::report::tool_version(),
            command,
            graph,
            field,
            verdict,
            stages: self.stages,
            rank_certificates: self.rank_docs,
            dependency: self.dependency,
            forcing: if self.forcing == ForcingDoc::default() {
                None
            } else {
                Some(self.forcing)
            },
            timings_ms: self.timings,
        }
    }
}

pub struct CircularOutcome {
    pub product: BipartiteGraph,
    pub exact: usize,
}

/// Full circular certification for G □ C_{2k}: expects the corank to land
/// exactly on n = |V(G)| and the canonical matching of size n to verify,
/// closing f = n.
pub fn certify_circular<F: Field>(
    log: &mut StageLog,
    cert: &InvolutoryCertificate<F>,
    k: usize,
) -> Result<CircularOutcome, PipelineError> {
    let n = cert.host().vertex_count();
    let bm = log.stage("block-grid", |_| {
        let bm = circular_block_matrix(cert, k)?;
        let BlockKind::Circular { case, .. } = bm.kind() else {
            return Err(PipelineError::Internal("circular grid expected".into()));
        };
        let detail = format!("{} grid, {} x {} blocks of order {}", case.name(), 2 * k, 2 * k, cert.block_size());
        Ok((bm, detail))
    })?;
    let inst = log.stage("support-audit", |_| {
        let inst = instantiate_circular(&bm, cert)?;
        let detail = format!(
            "R is {0} x {0} over {1}; support equals the bi-adjacency of the product",
            inst.r.matrix().rows(),
            cert.field().descriptor()
        );
        Ok((inst, detail))
    })?;
    log.stage("dependency", |log| {
        let (top, bottom) = verify_case_dependency(&inst.r, cert, &bm)?;
        let doc = DependencyDoc {
            case: top.case.name().to_string(),
            top: ResidualDoc {
                zero: top.zero,
                first_nonzero: top.first_nonzero.clone().map(|f| format!("{f:?}")),
            },
            bottom: ResidualDoc {
                zero: bottom.zero,
                first_nonzero: bottom.first_nonzero.clone().map(|f| format!("{f:?}")),
            },
        };
        log.dependency = Some(doc);
        for r in [&top, &bottom] {
            if !r.zero {
                let (block, row, col, value) = r.first_nonzero.clone().unwrap();
                return Err(PipelineError::Verification(format!(
                    "{} identity residual nonzero at block {block}, entry ({row}, {col}) = {value}",
                    r.identity
                )));
            }
        }
        Ok(((), "both block-row identities have zero residual".into()))
    })?;
    let lower = log.stage("rank", |log| {
        let lb = forcing_lower_bound(&inst.r)?;
        log.rank_docs.push(RankCertificateDoc::new("R(G x C2k)", &lb.certificate));
        // The verified dependency forces rank <= kn - n; landing above it
        // would mean the residual check and the elimination disagree.
        if lb.certificate.rank > k * n - n {
            return Err(PipelineError::Internal(format!(
                "dependency verified but rank {} exceeds kn - n = {}",
                lb.certificate.rank,
                k * n - n
            )));
        }
        if lb.bound != n {
            return Err(PipelineError::Verification(format!(
                "corank(R) = {} but the construction promises exactly n = {n}",
                lb.bound
            )));
        }
        Ok((lb.bound, format!("rank {} of {}, corank = {} = n", lb.certificate.rank, lb.certificate.rows, lb.bound)))
    })?;
    log.forcing.lower_bound = Some(lower);
    log.forcing.lower_kind = Some("rank-corank".into());
    let upper = log.stage("upper-matching", |log| {
        let m = circular_upper_matching(cert.host(), &inst.product, 2 * k)?;
        let cert_ub = certify_upper_matching(&inst.product, &m)?;
        log.forcing.upper_bound = Some(cert_ub.bound);
        log.forcing.upper_matching = Some(m.render(&inst.product));
        Ok((cert_ub.bound, format!("matching of size {} extends uniquely", cert_ub.bound)))
    })?;
    let exact = log.stage("sandwich", |log| {
        if lower == upper {
            log.forcing.exact = Some(lower);
            log.forcing.closure = Some("bounds-met".into());
            Ok((lower, format!("lower = upper = {lower}, f = {lower} EXACT")))
        } else {
            Err(PipelineError::Verification(format!(
                "bounds do not meet: lower {lower}, upper {upper}"
            )))
        }
    })?;
    Ok(CircularOutcome {
        product: inst.product,
        exact,
    })
}

pub struct PrismOutcome {
    pub product: BipartiteGraph,
    pub exact: usize,
}

/// Prism certification for G □ K₂ via a row-inverse pair: rank(R) = n
/// exactly, corank = m, canonical X-side matching of size m verifies,
/// closing f = m.
pub fn certify_prism<F: Field>(
    log: &mut StageLog,
    pair: &RowInversePair<F>,
) -> Result<PrismOutcome, PipelineError> {
    let (m, n) = (pair.x_size(), pair.y_size());
    let bm = log.stage("block-grid", |_| {
        let bm = prism_block_matrix(pair);
        Ok((bm, format!("prism grid [[I_{n}, C^T], [B, I_{m}]]")))
    })?;
    let inst = log.stage("support-audit", |_| {
        let inst = instantiate_prism(&bm, pair)?;
        let detail = format!(
            "R is {0} x {0} over {1}; support equals the bi-adjacency of the product",
            inst.r.matrix().rows(),
            pair.field().descriptor()
        );
        Ok((inst, detail))
    })?;
    let lower = log.stage("rank", |log| {
        let lb = forcing_lower_bound(&inst.r)?;
        log.rank_docs.push(RankCertificateDoc::new("R(G x K2)", &lb.certificate));
        if lb.certificate.rank != n {
            return Err(PipelineError::Verification(format!(
                "rank(R) = {} but the factorization promises exactly n = {n}",
                lb.certificate.rank
            )));
        }
        Ok((lb.bound, format!("rank {n}, corank = {} = m", lb.bound)))
    })?;
    log.forcing.lower_bound = Some(lower);
    log.forcing.lower_kind = Some("rank-corank".into());
    let upper = log.stage("upper-matching", |log| {
        let matching = prism_upper_matching(pair.host(), &inst.product)?;
        let cert_ub = certify_upper_matching(&inst.product, &matching)?;
        log.forcing.upper_bound = Some(cert_ub.bound);
        log.forcing.upper_matching = Some(matching.render(&inst.product));
        Ok((cert_ub.bound, format!("matching of size {} extends uniquely", cert_ub.bound)))
    })?;
    let exact = log.stage("sandwich", |log| {
        if lower == upper {
            log.forcing.exact = Some(lower);
            log.forcing.closure = Some("bounds-met".into());
            Ok((lower, format!("lower = upper = {lower}, f = {lower} EXACT")))
        } else {
            Err(PipelineError::Verification(format!(
                "bounds do not meet: lower {lower}, upper {upper}"
            )))
        }
    })?;
    Ok(PrismOutcome {
        product: inst.product,
        exact,
    })
}

/// Brute-force oracle wrapped in a stage; budget truncation is reported in
/// the outcome, not as an error.
pub fn run_oracle(
    log: &mut StageLog,
    g: &BipartiteGraph,
    known_lower: Option<usize>,
    pm_cap: Option<usize>,
    with_table: bool,
) -> Result<OracleOutcome, PipelineError> {
    let outcome = log.stage("oracle", |log| {
        let out = minimum_forcing_number(g, known_lower, pm_cap)?;
        log.forcing.exact = match out.closure {
            Closure::Truncated => None,
            _ => Some(out.value),
        };
        if out.closure == Closure::Truncated {
            log.forcing.upper_bound = Some(out.value);
        }
        log.forcing.closure = Some(
            match out.closure {
                Closure::Exhausted => "oracle-exhausted",
                Closure::MetKnownLower => "oracle-met-known-lower",
                Closure::Truncated => "oracle-truncated",
            }
            .to_string(),
        );
        log.forcing.matchings_seen = Some(out.matchings_seen);
        if with_table {
            log.forcing.table = Some(
                out.table
                    .iter()
                    .map(|rec| MatchingEntry {
                        edges: rec.matching.render(g),
                        f: match rec.f {
                            FValue::Exact(v) => v.to_string(),
                            FValue::AtLeast(v) => format!(">={v}"),
                        },
                    })
                    .collect(),
            );
        }
        let detail = format!(
            "minimum {} over {} matchings ({})",
            out.value,
            out.matchings_seen,
            log.forcing.closure.clone().unwrap()
        );
        Ok((out, detail))
    })?;
    Ok(outcome)
}

/// A certificate whose field is only known at runtime.
pub enum AnyInvolutory {
    Rational(InvolutoryCertificate<Rationals>),
    Prime(InvolutoryCertificate<PrimeField>),
    Quadratic(InvolutoryCertificate<QuadraticField>),
}

impl AnyInvolutory {
    pub fn host(&self) -> &BipartiteGraph {
        match self {
            AnyInvolutory::Rational(c) => c.host(),
            AnyInvolutory::Prime(c) => c.host(),
            AnyInvolutory::Quadratic(c) => c.host(),
        }
    }

    pub fn field_descriptor(&self) -> String {
        match self {
            AnyInvolutory::Rational(c) => c.field().descriptor(),
            AnyInvolutory::Prime(c) => c.field().descriptor(),
            AnyInvolutory::Quadratic(c) => c.field().descriptor(),
        }
    }

    pub fn certify_circular(
        &self,
        log: &mut StageLog,
        k: usize,
    ) -> Result<CircularOutcome, PipelineError> {
        match self {
            AnyInvolutory::Rational(c) => certify_circular(log, c, k),
            AnyInvolutory::Prime(c) => certify_circular(log, c, k),
            AnyInvolutory::Quadratic(c) => certify_circular(log, c, k),
        }
    }

    pub fn emit(&self) -> String {
        match self {
            AnyInvolutory::Rational(c) => crate::certificates::write_involutory(c),
            AnyInvolutory::Prime(c) => crate::certificates::write_involutory(c),
            AnyInvolutory::Quadratic(c) => crate::certificates::write_involutory(c),
        }
    }
}

pub enum AnyPair {
    Rational(RowInversePair<Rationals>),
    Prime(RowInversePair<PrimeField>),
    Quadratic(RowInversePair<QuadraticField>),
}

impl AnyPair {
    pub fn host(&self) -> &BipartiteGraph {
        match self {
            AnyPair::Rational(p) => p.host(),
            AnyPair::Prime(p) => p.host(),
            AnyPair::Quadratic(p) => p.host(),
        }
    }

    pub fn field_descriptor(&self) -> String {
        match self {
            AnyPair::Rational(p) => p.field().descriptor(),
            AnyPair::Prime(p) => p.field().descriptor(),
            AnyPair::Quadratic(p) => p.field().descriptor(),
        }
    }

    pub fn certify_prism(&self, log: &mut StageLog) -> Result<PrismOutcome, PipelineError> {
        match self {
            AnyPair::Rational(p) => certify_prism(log, p),
            AnyPair::Prime(p) => certify_prism(log, p),
            AnyPair::Quadratic(p) => certify_prism(log, p),
        }
    }

    pub fn emit(&self) -> String {
        match self {
            AnyPair::Rational(p) => crate::certificates::write_pair(p),
            AnyPair::Prime(p) => crate::certificates::write_pair(p),
            AnyPair::Quadratic(p) => crate::certificates::write_pair(p),
        }
    }
}

/// Smallest prime p with p ≡ 1 (mod n), the default Fourier modulus.
pub fn smallest_fourier_prime(n: usize) -> u64 {
    let n = n as u64;
    let mut t = 1;
    loop {
        let candidate = t * n + 1;
        if candidate >= 2 && is_prime(candidate) {
            return candidate;
        }
        t += 1;
    }
}

/// Smallest prime not dividing n, the default star-pair modulus.
pub fn smallest_star_prime(n: usize) -> u64 {
    let mut p = 2u64;
    loop {
        if is_prime(p) && !(n as u64).is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
}

/// Default prime for the random certificate search.
pub const SEARCH_DEFAULT_PRIME: u64 = 101;

fn unsupported(expr: &FamilyExpr, mode: &str, hint: &str) -> PipelineError {
    PipelineError::Precondition(format!(
        "no {mode} certificate constructor for {expr}; {hint}"
    ))
}

/// A lift constant c with 1 + c² a nonzero square: 3/4 in characteristic
/// zero, a small search over GF(p).
fn prime_lift_constant(field: &PrimeField) -> Option<u64> {
    let p = field.characteristic();
    (1..p).find(|&c| {
        let v = field.add(&1, &field.mul(&c, &c));
        v != 0 && field.square_root(v).is_some()
    })
}

/// Resolve an involutory certificate for a base family, honoring the
/// field flag; `None` picks the documented default per family.
pub fn resolve_involutory(
    expr: &FamilyExpr,
    spec: Option<FieldSpec>,
    trials: u64,
    seed: u64,
) -> Result<AnyInvolutory, PipelineError> {
    match expr {
        FamilyExpr::Kmn(m, n) if m == n => match spec {
            None | Some(FieldSpec::Rational) => {
                Ok(AnyInvolutory::Rational(knn_rational(*n)?))
            }
            Some(FieldSpec::Prime(p)) => Ok(AnyInvolutory::Prime(involutory_from_pair(
                &fourier_pair(*n, p)?,
            )?)),
            Some(FieldSpec::Quadratic(_)) => Err(unsupported(
                expr,
                "quadratic-field",
                "use Q (default) or GFp:<p> for complete bipartite hosts",
            )),
        },
        FamilyExpr::K2 => resolve_involutory(&FamilyExpr::Hypercube(1), spec, trials, seed),
        FamilyExpr::Hypercube(d) => match spec {
            None | Some(FieldSpec::Rational) => {
                Ok(AnyInvolutory::Rational(hypercube_lift_chain(*d)?))
            }
            Some(FieldSpec::Prime(p)) => Ok(AnyInvolutory::Prime(hypercube_involutory(
                *d,
                PrimeField::new(p)?,
            )?)),
            Some(FieldSpec::Quadratic(dd)) => Ok(AnyInvolutory::Quadratic(hypercube_involutory(
                *d,
                QuadraticField::new(dd)?,
            )?)),
        },
        FamilyExpr::S14 => match spec {
            None | Some(FieldSpec::Rational) => Ok(AnyInvolutory::Rational(s14_certificate()?)),
            _ => Err(unsupported(expr, "non-rational", "the S14 matrix lives over Q")),
        },
        FamilyExpr::GPrime => match spec {
            None | Some(FieldSpec::Quadratic(2)) => {
                Ok(AnyInvolutory::Quadratic(gprime_certificate()?))
            }
            _ => Err(unsupported(expr, "non-Q(sqrt(2))", "the G' matrix lives over Q(sqrt(2))")),
        },
        FamilyExpr::Prod(inner, h) if is_k2_simple(h) => {
            let base = resolve_involutory(inner, spec, trials, seed)?;
            match base {
                AnyInvolutory::Rational(c) => {
                    let lifted = prism_lift(&c, &Rationals.parse("3/4").expect("literal"))?;
                    Ok(AnyInvolutory::Rational(lifted))
                }
                AnyInvolutory::Quadratic(c) => {
                    let f = *c.field();
                    let lifted = prism_lift(&c, &f.parse("3/4").expect("literal"))?;
                    Ok(AnyInvolutory::Quadratic(lifted))
                }
                AnyInvolutory::Prime(c) => {
                    let f = *c.field();
                    let constant = prime_lift_constant(&f).ok_or_else(|| {
                        PipelineError::Precondition(format!(
                            "no lift constant with 1 + c^2 a square in {}",
                            f.descriptor()
                        ))
                    })?;
                    Ok(AnyInvolutory::Prime(prism_lift(&c, &constant)?))
                }
            }
        }
        other => {
            // Balanced families without a closed-form witness fall back to
            // the seeded random search over GF(p).
            let g = other.build()?;
            if !g.is_balanced() {
                return Err(PipelineError::Precondition(format!(
                    "{other} is not balanced, so it has no involutory certificate"
                )));
            }
            let p = match spec {
                None => SEARCH_DEFAULT_PRIME,
                Some(FieldSpec::Prime(p)) => p,
                Some(_) => {
                    return Err(unsupported(
                        other,
                        "closed-form",
                        "the random search runs over GF(p); pass --field GFp:<p>",
                    ))
                }
            };
            match random_certificate_search(&g, p, trials, seed)? {
                Some(cert) => Ok(AnyInvolutory::Prime(cert)),
                None => Err(PipelineError::Precondition(format!(
                    "random search over GF({p}) found no certificate for {other} in {trials} trials"
                ))),
            }
        }
    }
}

fn is_k2_simple(h: &SimpleExpr) -> bool {
    matches!(h, SimpleExpr::Bipartite(b) if **b == FamilyExpr::K2)
        || matches!(h, SimpleExpr::Complete(2))
}

/// Resolve a row-inverse pair for a base family (for prism runs).
pub fn resolve_pair(
    expr: &FamilyExpr,
    spec: Option<FieldSpec>,
    trials: u64,
    seed: u64,
) -> Result<AnyPair, PipelineError> {
    match expr {
        FamilyExpr::Star(n) => {
            let spec = spec.unwrap_or(FieldSpec::Prime(smallest_star_prime(*n)));
            match spec {
                FieldSpec::Rational => Ok(AnyPair::Rational(star_pair(Rationals, *n)?)),
                FieldSpec::Prime(p) => Ok(AnyPair::Prime(star_pair(PrimeField::new(p)?, *n)?)),
                FieldSpec::Quadratic(d) => {
                    Ok(AnyPair::Quadratic(star_pair(QuadraticField::new(d)?, *n)?))
                }
            }
        }
        FamilyExpr::Kmn(m, n) if m < n => {
            let p = match spec {
                None => smallest_fourier_prime(*n),
                Some(FieldSpec::Prime(p)) => p,
                Some(_) => {
                    return Err(unsupported(
                        expr,
                        "non-GF(p)",
                        "unbalanced complete bipartite pairs come from the Fourier matrix over GF(p)",
                    ))
                }
            };
            let full = fourier_pair(*n, p)?;
            let delete: Vec<String> = (*m..*n).map(|i| format!("x{i}")).collect();
            let delete_refs: Vec<&str> = delete.iter().map(String::as_str).collect();
            Ok(AnyPair::Prime(delete_rows(&full, &delete_refs)?))
        }
        FamilyExpr::Union(parts) => {
            let stars: Option<Vec<usize>> = parts
                .iter()
                .map(|p| match p {
                    FamilyExpr::Star(n) => Some(*n),
                    _ => None,
                })
                .collect();
            let Some(stars) = stars else {
                return Err(unsupported(
                    expr,
                    "union",
                    "union pairs are constructed for star parts",
                ));
            };
            let spec = spec.unwrap_or(FieldSpec::Quadratic(2));
            match spec {
                FieldSpec::Rational => {
                    let pairs = build_union_star_pairs(Rationals, &stars)?;
                    Ok(AnyPair::Rational(crate::certificates::union_pair(
                        &pairs.iter().collect::<Vec<_>>(),
                    )?))
                }
                FieldSpec::Prime(p) => {
                    let pairs = build_union_star_pairs(PrimeField::new(p)?, &stars)?;
                    Ok(AnyPair::Prime(crate::certificates::union_pair(
                        &pairs.iter().collect::<Vec<_>>(),
                    )?))
                }
                FieldSpec::Quadratic(d) => {
                    let pairs = build_union_star_pairs(QuadraticField::new(d)?, &stars)?;
                    Ok(AnyPair::Quadratic(crate::certificates::union_pair(
                        &pairs.iter().collect::<Vec<_>>(),
                    )?))
                }
            }
        }
        other => {
            let inv = resolve_involutory(other, spec, trials, seed)?;
            match inv {
                AnyInvolutory::Rational(c) => Ok(AnyPair::Rational(pair_from_involutory(&c)?)),
                AnyInvolutory::Prime(c) => Ok(AnyPair::Prime(pair_from_involutory(&c)?)),
                AnyInvolutory::Quadratic(c) => Ok(AnyPair::Quadratic(pair_from_involutory(&c)?)),
            }
        }
    }
}

/// Star pairs relabeled exactly like `FamilyExpr::Union::build` relabels
/// its parts, so the glued host matches the expression's graph.
fn build_union_star_pairs<F: Field>(
    field: F,
    stars: &[usize],
) -> Result<Vec<RowInversePair<F>>, PipelineError> {
    stars
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let pair = star_pair(field.clone(), n)?;
            let renamed = crate::graphs::prefix_y_labels(pair.host(), &format!("u{}.", i + 1));
            let xs = renamed.x_vertices();
            let ys = renamed.y_vertices();
            RowInversePair::assemble(
                renamed,
                xs,
                ys,
                pair.b().matrix().clone(),
                pair.c().matrix().clone(),
            )
            .map_err(PipelineError::from)
        })
        .collect()
}

/// Mode of a certify run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertifyMode {
    Circular(usize),
    Prism,
}

pub struct CertifyRequest {
    pub expr: Option<FamilyExpr>,
    pub mode: CertifyMode,
    pub field: Option<FieldSpec>,
    pub trials: u64,
    pub seed: u64,
    pub cert_text: Option<String>,
    pub command: String,
}

pub struct CertifyRun {
    pub document: ReportDocument,
    pub result: Result<usize, PipelineError>,
    pub certificate_text: Option<String>,
}

/// Resolve, certify, and assemble the report document; failures leave the
/// halted stage recorded in the document.
pub fn run_certify(req: &CertifyRequest) -> CertifyRun {
    let mut log = StageLog::new();
    let mut cert_text = None;
    let result = (|| -> Result<(usize, GraphDescriptor, String), PipelineError> {
        match req.mode {
            CertifyMode::Circular(k) => {
                let cert = log.stage("certificate", |_| {
                    let cert = match (&req.cert_text, &req.expr) {
                        (Some(text), _) => involutory_from_text(text)?,
                        (None, Some(expr)) => {
                            resolve_involutory(expr, req.field, req.trials, req.seed)?
                        }
                        (None, None) => {
                            return Err(PipelineError::Parse(
                                "certify needs a family expression or a certificate file".into(),
                            ))
                        }
                    };
                    let detail = format!(
                        "involutory certificate over {} for a host on {} vertices",
                        cert.field_descriptor(),
                        cert.host().vertex_count()
                    );
                    Ok((cert, detail))
                })?;
                cert_text = Some(cert.emit());
                let expr_name = req
                    .expr
                    .as_ref()
                    .map(|e| format!("prod({e};C:{})", 2 * k))
                    .unwrap_or_else(|| format!("<cert host> x C:{}", 2 * k));
                let field = cert.field_descriptor();
                let out = cert.certify_circular(&mut log, k)?;
                Ok((out.exact, GraphDescriptor::new(&expr_name, &out.product), field))
            }
            CertifyMode::Prism => {
                let pair = log.stage("certificate", |_| {
                    let pair = match (&req.cert_text, &req.expr) {
                        (Some(text), _) => pair_from_text(text)?,
                        (None, Some(expr)) => resolve_pair(expr, req.field, req.trials, req.seed)?,
                        (None, None) => {
                            return Err(PipelineError::Parse(
                                "certify needs a family expression or a certificate file".into(),
                            ))
                        }
                    };
                    let detail = format!(
                        "row-inverse pair over {} with |X| = {}, |Y| = {}",
                        pair.field_descriptor(),
                        pair.host().x_vertices().len(),
                        pair.host().y_vertices().len()
                    );
                    Ok((pair, detail))
                })?;
                cert_text = Some(pair.emit());
                let expr_name = req
                    .expr
                    .as_ref()
                    .map(|e| format!("prod({e};K2)"))
                    .unwrap_or_else(|| "<cert host> x K2".to_string());
                let field = pair.field_descriptor();
                let out = pair.certify_prism(&mut log)?;
                Ok((out.exact, GraphDescriptor::new(&expr_name, &out.product), field))
            }
        }
    })();
    let (result, graph, field, verdict) = match result {
        Ok((exact, graph, field)) => (
            Ok(exact),
            Some(graph),
            Some(field),
            format!("EXACT f = {exact}"),
        ),
        Err(e) => {
            let graph = req
                .expr
                .as_ref()
                .and_then(|expr| expr.build().ok().map(|g| GraphDescriptor::new(&expr.to_string(), &g)));
            (Err(e.clone()), graph, None, format!("FAILED: {e}"))
        }
    };
    CertifyRun {
        document: log.into_document(req.command.clone(), graph, field, verdict),
        result,
        certificate_text: cert_text,
    }
}

fn involutory_from_text(text: &str) -> Result<AnyInvolutory, PipelineError> {
    let parsed = crate::certificates::parse_certificate(text)?;
    match parsed {
        ParsedCertificate::RationalInvolutory(c) => Ok(AnyInvolutory::Rational(c)),
        ParsedCertificate::PrimeInvolutory(c) => Ok(AnyInvolutory::Prime(c)),
        ParsedCertificate::QuadraticInvolutory(c) => Ok(AnyInvolutory::Quadratic(c)),
        ParsedCertificate::RationalPair(p) => Ok(AnyInvolutory::Rational(involutory_from_pair(&p)?)),
        ParsedCertificate::PrimePair(p) => Ok(AnyInvolutory::Prime(involutory_from_pair(&p)?)),
        ParsedCertificate::QuadraticPair(p) => {
            Ok(AnyInvolutory::Quadratic(involutory_from_pair(&p)?))
        }
    }
}

fn pair_from_text(text: &str) -> Result<AnyPair, PipelineError> {
    let parsed = crate::certificates::parse_certificate(text)?;
    match parsed {
        ParsedCertificate::RationalPair(p) => Ok(AnyPair::Rational(p)),
        ParsedCertificate::PrimePair(p) => Ok(AnyPair::Prime(p)),
        ParsedCertificate::QuadraticPair(p) => Ok(AnyPair::Quadratic(p)),
        ParsedCertificate::RationalInvolutory(c) => {
            Ok(AnyPair::Rational(pair_from_involutory(&c)?))
        }
        ParsedCertificate::PrimeInvolutory(c) => Ok(AnyPair::Prime(pair_from_involutory(&c)?)),
        ParsedCertificate::QuadraticInvolutory(c) => {
            Ok(AnyPair::Quadratic(pair_from_involutory(&c)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(expr: &str, mode: CertifyMode) -> CertifyRequest {
        CertifyRequest {
            expr: Some(FamilyExpr::parse(expr).unwrap()),
            mode,
            field: None,
            trials: 200,
            seed: 0,
            cert_text: None,
            command: format!("certify {expr}"),
        }
    }

    #[test]
    fn k22_circular_k2_is_exact_4() {
        let run = run_certify(&req("Kmn:2,2", CertifyMode::Circular(2)));
        assert_eq!(run.result.as_ref().unwrap(), &4);
        assert_eq!(run.document.verdict, "EXACT f = 4");
        assert!(run.document.stages.iter().all(|s| s.status == "pass"));
        assert_eq!(run.document.forcing.as_ref().unwrap().lower_bound, Some(4));
    }

    #[test]
    fn s14_prism_is_exact_7() {
        let run = run_certify(&req("s14", CertifyMode::Prism));
        assert_eq!(run.result.unwrap(), 7);
    }

    #[test]
    fn k13_prism_is_exact_1() {
        let run = run_certify(&req("star:3", CertifyMode::Prism));
        assert_eq!(run.result.unwrap(), 1);
    }

    #[test]
    fn k23_prism_via_fourier_deletion() {
        let run = run_certify(&req("Kmn:2,3", CertifyMode::Prism));
        assert_eq!(run.result.unwrap(), 2);
        assert_eq!(run.document.field.as_deref(), Some("GF(7)"));
    }

    #[test]
    fn unbalanced_circular_is_a_precondition_failure() {
        let run = run_certify(&req("Kmn:2,3", CertifyMode::Circular(2)));
        match run.result {
            Err(PipelineError::Precondition(_)) => {}
            other => panic!("{other:?}"),
        }
        assert_eq!(run.document.stages.last().unwrap().status, "fail");
    }

    #[test]
    fn report_documents_are_reproducible_modulo_timings() {
        let a = run_certify(&req("Kmn:2,2", CertifyMode::Circular(2)));
        let b = run_certify(&req("Kmn:2,2", CertifyMode::Circular(2)));
        assert_eq!(
            a.document.stripped_of_timings(),
            b.document.stripped_of_timings()
        );
    }

    #[test]
    fn certificate_file_round_trips_through_certify() {
        let first = run_certify(&req("Kmn:2,2", CertifyMode::Circular(2)));
        let text = first.certificate_text.unwrap();
        let second = run_certify(&CertifyRequest {
            expr: None,
            mode: CertifyMode::Circular(2),
            field: None,
            trials: 0,
            seed: 0,
            cert_text: Some(text),
            command: "certify --cert <file> --k 2".into(),
        });
        assert_eq!(second.result.unwrap(), 4);
    }

    #[test]
    fn default_primes() {
        assert_eq!(smallest_fourier_prime(1), 2);
        assert_eq!(smallest_fourier_prime(2), 3);
        assert_eq!(smallest_fourier_prime(3), 7);
        assert_eq!(smallest_fourier_prime(4), 5);
        assert_eq!(smallest_star_prime(3), 2);
        assert_eq!(smallest_star_prime(4), 3);
        assert_eq!(smallest_star_prime(6), 5);
    }

    #[test]
    fn lifted_product_expression_certifies() {
        // prod(K2;K2) is Q2; the lift route closes f(Q2 x C4) = 4.
        let run = run_certify(&req("prod(K2;K2)", CertifyMode::Circular(2)));
        assert_eq!(run.result.unwrap(), 4);
    }

    #[test]
    fn corrupted_certificate_fails_at_the_named_stage() {
        let good = run_certify(&req("Kmn:2,2", CertifyMode::Circular(2)))
            .certificate_text
            .unwrap();
        // Swap one B entry: the support stays intact but B * Binv != I.
        let corrupted = good.replacen("2, 1", "1, 1", 1);
        assert_ne!(good, corrupted);
        let run = run_certify(&CertifyRequest {
            expr: None,
            mode: CertifyMode::Circular(2),
            field: None,
            trials: 0,
            seed: 0,
            cert_text: Some(corrupted),
            command: "certify --cert <corrupted> --k 2".into(),
        });
        assert!(matches!(run.result, Err(PipelineError::Verification(_))));
        let last = run.document.stages.last().unwrap();
        assert_eq!((last.name.as_str(), last.status.as_str()), ("certificate", "fail"));
        assert!(last.detail.contains("B * Binv"), "{}", last.detail);
    }
}
