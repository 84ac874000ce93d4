//! Check battery for a single graph, and the parameter-space survey.

use std::fmt;
use std::str::FromStr;

use rand::{rngs::StdRng, seq::SliceRandom, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{
    cayley_certificate, classify_quotient_type, edge_orbits, ten_cycle_check, AnalysisError,
    QuotientType,
};
use crate::aut_search::{full_aut, full_aut_adj, SearchError};
use crate::automorphisms::{
    alpha_of, commutes_with_outside, first_violation, formula_gens, gamma_of, is_automorphism,
    n8_exceptional_gens, AutError,
};
use crate::constructions::{
    alpha_condition, build_htg, build_mobius_or_prism, build_n8, build_xb, classify_theorem_case,
    gamma_condition, validate_xb, CaseKind, ConstructionError, LadderKind, N8Kind, TheoremCase,
    XbParams,
};
use crate::graph_core::{FactorGraph, VertexId};
use crate::perm::Perm;
use crate::perm_group::{GroupError, PermGroup};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("survey has {0} tuples, above the budget {1}")]
    Budget(usize, usize),
}

impl VerifyError {
    /// Resource limits as opposed to bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            VerifyError::Search(_)
                | VerifyError::Group(GroupError::BoundExceeded(_))
                | VerifyError::Budget(..)
        )
    }
}

impl From<AnalysisError> for VerifyError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Search(s) => VerifyError::Search(s),
            AnalysisError::Construction(c) => VerifyError::Construction(c),
            other => VerifyError::Usage(other.to_string()),
        }
    }
}

/// A graph family with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Xb(XbParams),
    Xb1 { m: u32 },
    Xb2 { m: u32 },
    Mobius { m: u32 },
    Prism { m: u32 },
    Htg { m: u32, n: u32, l: i64 },
}

impl Family {
    /// Parses a family name and a comma-separated parameter list.
    pub fn parse(name: &str, params: &str) -> Result<Self, VerifyError> {
        let nums: Vec<i64> = params
            .split(',')
            .map(|s| s.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| VerifyError::Usage(format!("cannot parse parameters {params:?}")))?;
        let arity = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(VerifyError::Usage(format!(
                    "{name} takes {k} parameter(s), got {}",
                    nums.len()
                )))
            }
        };
        let positive = |x: i64, what: &str| {
            u32::try_from(x)
                .map_err(|_| VerifyError::Usage(format!("{what} must be a non-negative integer")))
        };
        match name.to_ascii_lowercase().as_str() {
            "xb" => {
                arity(5)?;
                let p = XbParams::new(nums[0], nums[1], nums[2], nums[3], nums[4])?;
                Ok(Family::Xb(p))
            }
            "xb1" => {
                arity(1)?;
                Ok(Family::Xb1 {
                    m: positive(nums[0], "m")?,
                })
            }
            "xb2" => {
                arity(1)?;
                Ok(Family::Xb2 {
                    m: positive(nums[0], "m")?,
                })
            }
            "mobius" => {
                arity(1)?;
                Ok(Family::Mobius {
                    m: positive(nums[0], "m")?,
                })
            }
            "prism" => {
                arity(1)?;
                Ok(Family::Prism {
                    m: positive(nums[0], "m")?,
                })
            }
            "htg" => {
                arity(3)?;
                Ok(Family::Htg {
                    m: positive(nums[0], "m")?,
                    n: positive(nums[1], "n")?,
                    l: nums[2],
                })
            }
            other => Err(VerifyError::Usage(format!(
                "unknown family {other:?} (expected xb, xb1, xb2, mobius, prism or htg)"
            ))),
        }
    }

    pub fn build(&self) -> Result<FactorGraph, ConstructionError> {
        match *self {
            Family::Xb(p) => build_xb(&p),
            Family::Xb1 { m } => build_n8(N8Kind::Xb1, m),
            Family::Xb2 { m } => build_n8(N8Kind::Xb2, m),
            Family::Mobius { m } => build_mobius_or_prism(m, LadderKind::Mobius),
            Family::Prism { m } => build_mobius_or_prism(m, LadderKind::Prism),
            Family::Htg { m, n, l } => build_htg(m, n, l),
        }
    }

    /// The classification entry, where the family has one.
    pub fn theorem_case(&self) -> Option<TheoremCase> {
        let fixed = |case, detail: &str| {
            Some(TheoremCase {
                case,
                detail: detail.into(),
            })
        };
        match *self {
            Family::Xb(p) => Some(classify_theorem_case(
                p.m as i64, p.n as i64, p.a as i64, p.b as i64, p.l as i64,
            )),
            Family::Xb1 { .. } => fixed(CaseKind::N8Xb1, "n = 8, 3 | m, exceptional family"),
            Family::Xb2 { .. } => fixed(CaseKind::N8Xb2, "n = 8, 3 | m, exceptional family"),
            Family::Mobius { .. } | Family::Prism { .. } => {
                fixed(CaseKind::N4MobiusOrPrism, "n = 4: Moebius ladder or prism")
            }
            Family::Htg { .. } => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Xb(p) => write!(f, "{p}"),
            Family::Xb1 { m } => write!(f, "X_b^1({m})"),
            Family::Xb2 { m } => write!(f, "X_b^2({m})"),
            Family::Mobius { m } => write!(f, "Mobius({})", 4 * m),
            Family::Prism { m } => write!(f, "Prism({})", 4 * m),
            Family::Htg { m, n, l } => write!(f, "HTG({m},{n},{l})"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub oracle: bool,
    pub vertex_limit: usize,
    pub group_bound: usize,
    /// Seed for the random relabelling in the oracle consistency check.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            oracle: false,
            vertex_limit: crate::aut_search::DEFAULT_VERTEX_LIMIT,
            group_bound: crate::perm_group::DEFAULT_BOUND,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorCheck {
    pub label: String,
    pub automorphism: bool,
    pub violation: Option<String>,
    pub commutes_with_outside: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSummary {
    pub order: usize,
    pub orbit_sizes: Vec<usize>,
    pub transitive: bool,
    pub regular: bool,
    pub preserves_c: bool,
    pub point_stabilizer_order: usize,
}

impl GroupSummary {
    fn of(group: &PermGroup, rings: &[Vec<u32>], seed: u64) -> Self {
        GroupSummary {
            order: group.order(),
            orbit_sizes: group.orbit_sizes(),
            transitive: group.is_transitive(),
            regular: group.is_regular(),
            preserves_c: group.preserves_partition(rings, seed),
            point_stabilizer_order: group.point_stabilizer_order(0),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitRow {
    pub representative: (VertexId, VertexId),
    pub size: usize,
    pub cycles: Vec<(usize, u64)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleSummary {
    pub aut_order: usize,
    pub point_stabilizer_order: usize,
    pub c_invariant: bool,
    pub c_preserving_order: usize,
    pub c_preserving_transitive: bool,
    pub two_arc_regular: bool,
    pub formula_generators_in_aut: bool,
    pub relabel_consistent: bool,
    pub edge_orbits: Vec<OrbitRow>,
}

/// A published value compared with what was computed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Claim {
    pub what: String,
    pub expected: String,
    pub observed: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: Family,
    pub label: String,
    pub order: usize,
    pub theorem_case: Option<TheoremCase>,
    pub validator_violations: Vec<String>,
    pub connected: bool,
    pub girth: usize,
    pub quotient_type: Option<QuotientType>,
    pub generators: Vec<GeneratorCheck>,
    pub formula_group: Option<GroupSummary>,
    pub cayley_involutions: Option<Vec<Perm>>,
    pub cayley_error: Option<String>,
    pub oracle: Option<OracleSummary>,
    pub claims: Vec<Claim>,
    /// Checks that contradict a published statement.
    pub findings: Vec<String>,
}

impl VerificationReport {
    pub fn has_findings(&self) -> bool {
        !self.findings.is_empty()
    }
}

fn formula_generators(family: &Family) -> Result<Vec<Perm>, VerifyError> {
    Ok(match *family {
        Family::Xb(p) => formula_gens(&p),
        Family::Xb1 { m } => n8_exceptional_gens(N8Kind::Xb1, m).map_err(transcription)?,
        Family::Xb2 { m } => n8_exceptional_gens(N8Kind::Xb2, m).map_err(transcription)?,
        _ => Vec::new(),
    })
}

fn transcription(e: AutError) -> VerifyError {
    VerifyError::Usage(format!("generator construction failed: {e}"))
}

/// Runs every check that applies to `family`.
pub fn verify(family: &Family, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let g = family.build()?;
    let grid = g.grid();
    let rings = grid.rings();
    let case = family.theorem_case();
    let in_theorem = case.as_ref().map(|c| c.case.is_valid());
    let mut findings = Vec::new();

    let validator_violations = match family {
        Family::Xb(p) => validate_xb(p).iter().map(ToString::to_string).collect(),
        _ => Vec::new(),
    };
    let girth = g.girth();
    if in_theorem == Some(true) && girth > 10 {
        findings.push(format!("girth {girth} exceeds 10"));
    }
    if let Family::Xb(p) = family {
        if p.a != 1 && !ten_cycle_check(&g, p.a) {
            findings.push(
                "the 10-walk from v(2,3) does not close to a 10-cycle although a != 1".into(),
            );
        }
        if is_automorphism(&g, &gamma_of(p)) != gamma_condition(p) {
            findings
                .push("gamma is an automorphism exactly when its condition holds: violated".into());
        }
        let alpha_aut = alpha_of(p)
            .map(|a| is_automorphism(&g, &a))
            .unwrap_or(false);
        if gamma_condition(p) && alpha_aut != alpha_condition(p) {
            findings
                .push("alpha is an automorphism exactly when its condition holds: violated".into());
        }
    }

    let gens = formula_generators(family)?;
    let generators: Vec<GeneratorCheck> = gens
        .iter()
        .map(|p| {
            let violation = first_violation(&g, p)
                .map(|(u, v, c)| format!("{}-{} ({})", grid.vertex(u), grid.vertex(v), c.as_str()));
            GeneratorCheck {
                label: p.label.clone(),
                automorphism: violation.is_none(),
                violation,
                commutes_with_outside: commutes_with_outside(&g, p),
            }
        })
        .collect();
    let certified: Vec<Perm> = gens
        .iter()
        .filter(|p| is_automorphism(&g, p))
        .cloned()
        .collect();
    for (p, check) in gens.iter().zip(&generators) {
        if check.automorphism && !check.commutes_with_outside {
            findings.push(format!(
                "{} is an automorphism but does not commute with the outside neighbour",
                p.label
            ));
        }
        if matches!(family, Family::Xb1 { .. } | Family::Xb2 { .. }) && !check.automorphism {
            findings.push(format!("{} fails certification", p.label));
        }
    }

    let mut formula_group = None;
    let mut cayley_involutions = None;
    let mut cayley_error = None;
    if !certified.is_empty() {
        let group = PermGroup::close(g.order(), &certified, opts.group_bound)?;
        let summary = GroupSummary::of(&group, &rings, opts.seed);
        if in_theorem == Some(true) && !summary.regular {
            findings.push(format!(
                "formula generators give a group of order {} that is not regular",
                summary.order
            ));
        }
        if summary.regular {
            match cayley_certificate(&g, &group) {
                Ok(cert) => cayley_involutions = Some(cert.involutions),
                Err(e) => {
                    findings.push(format!("Cayley certificate failed: {e}"));
                    cayley_error = Some(e.to_string());
                }
            }
        }
        formula_group = Some(summary);
    }

    let mut claims = Vec::new();
    let oracle =
        if opts.oracle {
            let aut = full_aut(&g, opts.vertex_limit)?;
            let aut_group =
                PermGroup::from_elements(g.order(), aut.generators.clone(), aut.elements.clone());
            let c_pres = aut_group.block_preserving_subgroup(&rings);
            let relabel_consistent = relabel_check(&g, &aut_group, opts.seed, opts.vertex_limit)?;
            let summary = OracleSummary {
                aut_order: aut_group.order(),
                point_stabilizer_order: aut_group.point_stabilizer_order(0),
                c_invariant: c_pres.order() == aut_group.order(),
                c_preserving_order: c_pres.order(),
                c_preserving_transitive: c_pres.is_transitive(),
                two_arc_regular: aut_group.is_s_arc_regular(&g, 2),
                formula_generators_in_aut: certified.iter().all(|p| aut_group.contains(p)),
                relabel_consistent,
                edge_orbits: edge_orbits(&g, &aut_group)
                    .into_iter()
                    .map(|o| OrbitRow {
                        representative: (
                            grid.vertex(o.representative.0),
                            grid.vertex(o.representative.1),
                        ),
                        size: o.size,
                        cycles: o.cycles.into_iter().collect(),
                    })
                    .collect(),
            };
            if let Some(expected) = in_theorem {
                if expected != summary.c_preserving_transitive {
                    findings.push(format!(
                    "classification says {} but the ring-preserving automorphisms are {}transitive",
                    if expected { "vertex-transitive" } else { "not vertex-transitive" },
                    if summary.c_preserving_transitive { "" } else { "not " }
                ));
                }
            }
            if !summary.formula_generators_in_aut || !summary.relabel_consistent {
                findings.push("oracle self-consistency check failed".into());
            }
            claims = published_claims(family, &summary);
            for c in claims.iter().filter(|c| !c.holds) {
                findings.push(format!(
                    "{}: expected {}, observed {}",
                    c.what, c.expected, c.observed
                ));
            }
            Some(summary)
        } else {
            None
        };

    Ok(VerificationReport {
        family: *family,
        label: g.family_label().to_string(),
        order: g.order(),
        theorem_case: case,
        validator_violations,
        connected: g.is_connected(),
        girth,
        quotient_type: classify_quotient_type(&g).ok(),
        generators,
        formula_group,
        cayley_involutions,
        cayley_error,
        oracle,
        claims,
        findings,
    })
}

/// Relabels `g` at random and checks the oracle returns the conjugate group.
pub fn relabel_check(
    g: &FactorGraph,
    aut: &PermGroup,
    seed: u64,
    limit: usize,
) -> Result<bool, VerifyError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut images: Vec<u32> = (0..g.order() as u32).collect();
    images.shuffle(&mut rng);
    let pi = Perm::from_images("pi", images).expect("shuffle is a bijection");
    let mut adj = vec![Vec::new(); g.order()];
    for v in 0..g.order() as u32 {
        adj[pi.apply(v) as usize] = g.neighbors(v).iter().map(|&w| pi.apply(w)).collect();
    }
    let relabelled = full_aut_adj(adj, limit)?;
    if relabelled.order() != aut.order() {
        return Ok(false);
    }
    let expected: std::collections::HashSet<Vec<u32>> = aut
        .elements()
        .iter()
        .map(|e| e.conjugate_by(&pi).into_images())
        .collect();
    Ok(relabelled
        .elements
        .iter()
        .all(|e| expected.contains(e.images())))
}

fn claim(what: &str, expected: impl ToString, observed: impl ToString) -> Claim {
    let (expected, observed) = (expected.to_string(), observed.to_string());
    Claim {
        what: what.into(),
        holds: expected == observed,
        expected,
        observed,
    }
}

/// Values stated in the literature for specific graphs.
pub fn published_claims(family: &Family, o: &OracleSummary) -> Vec<Claim> {
    let mut out = Vec::new();
    let stab = |out: &mut Vec<Claim>, k: usize| {
        out.push(claim(
            "vertex stabilizer order",
            k,
            o.point_stabilizer_order,
        ))
    };
    let inv =
        |out: &mut Vec<Claim>, b: bool| out.push(claim("rings Aut-invariant", b, o.c_invariant));
    match *family {
        Family::Xb(p) => {
            let t = (p.m, p.n, p.a, p.b, p.l);
            match t {
                (3, 12, 1, 4, 2) => out.push(claim("|Aut|", 18, o.aut_order)),
                (3, 12, 1, 4, 3) => out.push(claim("|Aut|", 12, o.aut_order)),
                (5, 12, 1, 8, 7) => {
                    out.push(claim("|Aut|", 60, o.aut_order));
                    inv(&mut out, true);
                }
                (3, 8, 5, 4, 3) => {
                    out.push(claim("|Aut|", 144, o.aut_order));
                    out.push(claim("2-arc-regular", true, o.two_arc_regular));
                }
                (4, 8, 1, 4, 6) => stab(&mut out, 4),
                _ => {}
            }
            let case =
                classify_theorem_case(p.m as i64, p.n as i64, p.a as i64, p.b as i64, p.l as i64)
                    .case;
            if p.n == 8 && p.b == 4 && p.a == 5 && case.is_valid() && t != (3, 8, 5, 4, 3) {
                stab(&mut out, 2);
            }
            if p.n == 8 && p.b == 4 && p.a == 1 && case.is_valid() && t != (4, 8, 1, 4, 6) {
                stab(&mut out, 1);
            }
            if case == CaseKind::OddEven {
                if p.n == 4 * p.m {
                    if t == (3, 12, 1, 4, 10) {
                        out.push(claim("|Aut|", 72, o.aut_order));
                    }
                    stab(&mut out, 2);
                    inv(&mut out, false);
                } else {
                    stab(&mut out, 1);
                    inv(&mut out, true);
                }
            }
        }
        Family::Xb1 { .. } => {
            stab(&mut out, 2);
            inv(&mut out, false);
        }
        Family::Xb2 { .. } => {
            stab(&mut out, 1);
            inv(&mut out, true);
        }
        Family::Mobius { .. } | Family::Prism { .. } => {
            stab(&mut out, 2);
            inv(&mut out, false);
        }
        Family::Htg { .. } => {}
    }
    out
}

/// Ranges for [`run_survey`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurveySpec {
    pub m_min: u32,
    pub m_max: u32,
    pub n_values: Vec<u32>,
    /// Keep only these classification cases; `None` keeps all.
    pub cases: Option<Vec<CaseKind>>,
    pub oracle: bool,
    /// Oracle runs only on graphs with at most this many vertices.
    pub oracle_max_order: usize,
    pub vertex_limit: usize,
    pub max_tuples: usize,
}

impl Default for SurveySpec {
    fn default() -> Self {
        SurveySpec {
            m_min: 3,
            m_max: 6,
            n_values: vec![8, 12, 16, 20],
            cases: None,
            oracle: true,
            oracle_max_order: 200,
            vertex_limit: crate::aut_search::DEFAULT_VERTEX_LIMIT,
            max_tuples: 100_000,
        }
    }
}

/// One line of survey output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub m: u32,
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub l: u32,
    pub case: CaseKind,
    pub gamma_automorphism: bool,
    pub alpha_automorphism: bool,
    /// The certified formula generators generate a transitive group.
    pub formula_transitive: bool,
    /// The ring-preserving part of the full automorphism group is transitive.
    pub oracle_transitive: Option<bool>,
    pub agree: bool,
    pub error: Option<String>,
}

/// Valid tuples of the survey range, lexicographic in `(m, n, a, b, l)`.
pub fn survey_tuples(spec: &SurveySpec) -> Vec<XbParams> {
    let mut ns = spec.n_values.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut out = Vec::new();
    for m in spec.m_min..=spec.m_max {
        for &n in &ns {
            if n == 0 || n % 4 != 0 {
                continue;
            }
            for a in 0..n {
                for b in 0..n {
                    for l in 0..n {
                        let Ok(p) = XbParams::new(m as i64, n as i64, a as i64, b as i64, l as i64)
                        else {
                            continue;
                        };
                        if !validate_xb(&p).is_empty() {
                            continue;
                        }
                        if let Some(cases) = &spec.cases {
                            let c = classify_theorem_case(
                                m as i64, n as i64, a as i64, b as i64, l as i64,
                            )
                            .case;
                            if !cases.contains(&c) {
                                continue;
                            }
                        }
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Runs every tuple in parallel; records come back in tuple order.
pub fn run_survey(spec: &SurveySpec) -> Result<Vec<SurveyRecord>, VerifyError> {
    let tuples = survey_tuples(spec);
    if tuples.len() > spec.max_tuples {
        return Err(VerifyError::Budget(tuples.len(), spec.max_tuples));
    }
    Ok(tuples.par_iter().map(|p| survey_one(p, spec)).collect())
}

fn survey_one(p: &XbParams, spec: &SurveySpec) -> SurveyRecord {
    let case =
        classify_theorem_case(p.m as i64, p.n as i64, p.a as i64, p.b as i64, p.l as i64).case;
    let mut rec = SurveyRecord {
        m: p.m,
        n: p.n,
        a: p.a,
        b: p.b,
        l: p.l,
        case,
        gamma_automorphism: false,
        alpha_automorphism: false,
        formula_transitive: false,
        oracle_transitive: None,
        agree: false,
        error: None,
    };
    let g = match build_xb(p) {
        Ok(g) => g,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.gamma_automorphism = is_automorphism(&g, &gamma_of(p));
    rec.alpha_automorphism = alpha_of(p)
        .map(|a| is_automorphism(&g, &a))
        .unwrap_or(false);
    let certified: Vec<Perm> = formula_gens(p)
        .into_iter()
        .filter(|q| is_automorphism(&g, q))
        .collect();
    match PermGroup::close(g.order(), &certified, 64 * g.order()) {
        Ok(group) => rec.formula_transitive = group.is_transitive(),
        Err(e) => rec.error = Some(format!("formula closure: {e}")),
    }
    if spec.oracle && g.order() <= spec.oracle_max_order {
        match full_aut(&g, spec.vertex_limit) {
            Ok(aut) => {
                let group = PermGroup::from_elements(g.order(), aut.generators, aut.elements);
                rec.oracle_transitive = Some(
                    group
                        .block_preserving_subgroup(&g.grid().rings())
                        .is_transitive(),
                );
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
    }
    let expected = case.is_valid();
    rec.agree = rec.error.is_none()
        && rec.formula_transitive == expected
        && rec.oracle_transitive.is_none_or(|t| t == expected);
    rec
}

impl FromStr for CaseKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseKind::parse(s).ok_or_else(|| format!("unknown case {s:?}"))
    }
}
