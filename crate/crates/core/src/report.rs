//! Construction descriptors, code files, and the analysis/verification
//! reports shared by the command-line tool and the test suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    self, club, complete_twisted, doubly_extended_lrs, lift, lrs, simplex, simplex_weight, two_fold_default,
    two_fold_lrs, twisted_default, twisted_lrs, twisted_system, SingerGroup,
};
use crate::error::{Error, Result};
use crate::fqlin::{FqSubspace, Matrix, SweepOpts};
use crate::geometry::{
    covers_line, duality_sweep, geometric_msrd, is_scattered, msrd_block_bounds, phi, psi, system_multi_weight,
};
use crate::gf::{is_prime, Felem, Field, FieldDescriptor};
use crate::hamming_ext::{bonisoli_constraints, ext_formula_sweep, hamming_distance_from_rank_lists};
use crate::skew::EvaluationPair;
use crate::srcode::{BlockProfile, CodeJson, SumRankCode, WeightDistribution};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Splits q = p^e.
pub fn split_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    if !is_prime(p as u64) {
        return None;
    }
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

/// Either the literal string "default" or explicit coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Elems {
    Default(String),
    List(Vec<Vec<u32>>),
}

/// A construction request, e.g.
/// `{"family":"doubly_extended_lrs","q":2,"m":3,"k":2,"gamma":[1],"delta":[1]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub family: String,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_power: Option<u32>,
    /// Modulus of F_{q^m} over F_p, lowest degree first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Elems>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Elems>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<u32>>,
    /// Basis of H for the 2-fold family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Elems>,
    /// Basis vectors of U for simplex: one list of coefficient vectors per vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_basis: Option<Vec<Vec<Vec<u32>>>>,
    /// Singer polynomial c_0, …, c_k.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<Vec<u32>>>,
    /// Block lengths for the random family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub const FAMILIES: &[&str] = &[
    "lrs",
    "doubly_extended_lrs",
    "two_fold_lrs",
    "twisted_lrs",
    "completed_twisted_lrs",
    "simplex",
    "club_lift",
    "all_points",
    "random",
];

/// Parses an element from a possibly short coefficient vector.
pub fn parse_elem(f: &Field, c: &[u32]) -> Result<Felem> {
    let d = f.degree() as usize;
    if c.len() > d {
        return Err(Error::Parse(format!("element has {} coefficients, field degree is {d}", c.len())));
    }
    let mut full = c.to_vec();
    full.resize(d, 0);
    f.parse_coeffs(&full)
}

fn parse_list(f: &Field, e: &Option<Elems>) -> Result<Option<Vec<Felem>>> {
    match e {
        None => Ok(None),
        Some(Elems::Default(s)) if s == "default" => Ok(None),
        Some(Elems::Default(s)) => Err(Error::Parse(format!("expected \"default\" or a list, got {s:?}"))),
        Some(Elems::List(v)) => v.iter().map(|c| parse_elem(f, c)).collect::<Result<Vec<_>>>().map(Some),
    }
}

fn parse_one(f: &Field, e: &Option<Vec<u32>>, default: Felem) -> Result<Felem> {
    e.as_ref().map_or(Ok(default), |c| parse_elem(f, c))
}

impl Descriptor {
    pub fn field(&self) -> Result<Arc<Field>> {
        let (p, e) = match self.e {
            Some(e) => {
                let (p, e0) = split_prime_power(self.q)
                    .ok_or_else(|| Error::BadFieldParams(format!("q = {} is not a prime power", self.q)))?;
                if e0 != e {
                    return Err(Error::BadFieldParams(format!("q = {} is not p^{e}", self.q)));
                }
                (p, e)
            }
            None => split_prime_power(self.q)
                .ok_or_else(|| Error::BadFieldParams(format!("q = {} is not a prime power", self.q)))?,
        };
        Ok(Arc::new(Field::new(p, e, self.m, self.modulus.as_deref())?))
    }

    fn sigma(&self) -> u32 {
        self.sigma_power.unwrap_or(1)
    }

    fn pair(&self, f: &Field, t_default: usize) -> Result<EvaluationPair> {
        let t = self.t.unwrap_or(t_default);
        let n = self.n.unwrap_or(f.m() as usize);
        let default = EvaluationPair::default_for(f, t, n);
        let a = match parse_list(f, &self.a)? {
            Some(a) => a,
            None => default.clone()?.a,
        };
        let beta = match parse_list(f, &self.beta)? {
            Some(b) => b,
            None => {
                let basis = f.fq_basis();
                if n > basis.len() {
                    return Err(Error::InvalidPair(format!("n = {n} exceeds m = {}", f.m())));
                }
                basis[..n].to_vec()
            }
        };
        EvaluationPair::new(f, a, beta)
    }

    fn need_k(&self) -> Result<usize> {
        self.k.ok_or_else(|| Error::BadDimension("k is required for this family".into()))
    }

    /// Builds the code; the lifting summary is returned for `club_lift`.
    pub fn build(&self) -> Result<Built> {
        let field = self.field()?;
        let f = &*field;
        let s = self.sigma();
        let q = f.q() as usize;
        let mut lift_summary = None;
        let code = match self.family.as_str() {
            "lrs" => lrs(field.clone(), s, self.need_k()?, &self.pair(f, q - 1)?)?,
            "doubly_extended_lrs" => {
                let pair = self.pair(f, q - 1)?;
                let gamma = parse_one(f, &self.gamma, f.one())?;
                let delta = parse_one(f, &self.delta, f.one())?;
                doubly_extended_lrs(field.clone(), s, self.k.unwrap_or(2), &pair, gamma, delta)?
            }
            "two_fold_lrs" => {
                let (h0, d0) = two_fold_default(f);
                let h = parse_list(f, &self.h)?.unwrap_or(h0);
                let delta = parse_one(f, &self.delta, d0)?;
                two_fold_lrs(field.clone(), &h, delta)?
            }
            "twisted_lrs" | "completed_twisted_lrs" => {
                let t = match self.t {
                    Some(t) => t,
                    None => constructions::twisted_max_t(f)?,
                };
                let (a, eta) = match (parse_list(f, &self.a)?, &self.eta) {
                    (Some(a), Some(e)) => (a, parse_elem(f, e)?),
                    (a, e) => {
                        let (a0, e0) = twisted_default(f, a.as_ref().map_or(t, Vec::len))?;
                        (a.unwrap_or(a0), parse_one(f, e, e0)?)
                    }
                };
                if self.family == "twisted_lrs" {
                    let gamma = parse_list(f, &self.beta)?.unwrap_or_else(|| f.fq_basis());
                    twisted_lrs(field.clone(), s, &a, &gamma, eta)?
                } else {
                    constructions::check_twisted(f, &a, eta)?;
                    phi(&complete_twisted(field.clone(), &twisted_system(f, s, &a, eta)?)?)?
                }
            }
            "simplex" => {
                let k = self.k.unwrap_or(2);
                let poly = self
                    .poly
                    .as_ref()
                    .map(|p| p.iter().map(|c| parse_elem(f, c)).collect::<Result<Vec<_>>>())
                    .transpose()?;
                let g = SingerGroup::new(field.clone(), k, poly.as_deref())?;
                simplex(&g, &self.u(f, k)?)?
            }
            "club_lift" => {
                let l = lift(field.clone(), &[club(f)])?;
                lift_summary = Some(l.summary());
                l.code()?
            }
            "all_points" => phi(&constructions::all_points_system(field.clone(), self.k.unwrap_or(2))?)?,
            "random" => {
                let profile = BlockProfile::new(
                    self.profile.clone().ok_or_else(|| Error::Parse("the random family needs a profile".into()))?,
                )?;
                random_code(field.clone(), profile, self.need_k()?, self.seed.unwrap_or(0))?
            }
            other => {
                return Err(Error::Parse(format!("unknown family {other:?}; expected one of {}", FAMILIES.join(", "))))
            }
        };
        Ok(Built { code, lift: lift_summary })
    }

    fn u(&self, f: &Field, k: usize) -> Result<FqSubspace> {
        match &self.u_basis {
            Some(vs) => {
                let basis = vs
                    .iter()
                    .map(|v| v.iter().map(|c| parse_elem(f, c)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                FqSubspace::new(f, k, basis)
            }
            None => {
                // default: the first coordinate axis
                let mut e0 = vec![Felem::ZERO; k];
                e0[0] = f.one();
                FqSubspace::new(f, k, vec![e0])
            }
        }
    }
}

/// A seeded random code of the given shape with a full-rank generator.
pub fn random_code(field: Arc<Field>, profile: BlockProfile, k: usize, seed: u64) -> Result<SumRankCode> {
    if k == 0 || k > profile.total() {
        return Err(Error::BadDimension(format!("k = {k} must lie in 1..={}", profile.total())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<Felem>> = (0..k)
            .map(|_| (0..profile.total()).map(|_| Felem(rng.random_range(0..field.size()))).collect())
            .collect();
        match SumRankCode::new(field.clone(), profile.clone(), Matrix::from_rows(rows)?) {
            Ok(c) => return Ok(c),
            Err(Error::InvalidCode(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

pub struct Built {
    pub code: SumRankCode,
    pub lift: Option<constructions::LiftSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub library_version: String,
    pub field: FieldDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<Descriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<constructions::LiftSummary>,
}

/// On-disk code file: the code plus where it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub code: CodeJson,
    pub provenance: Provenance,
}

impl CodeFile {
    pub fn new(code: &SumRankCode, descriptor: Option<Descriptor>, lift: Option<constructions::LiftSummary>) -> CodeFile {
        CodeFile {
            code: code.to_json(),
            provenance: Provenance {
                library_version: VERSION.into(),
                field: code.field().descriptor(),
                descriptor,
                lift,
            },
        }
    }

    /// Accepts either a full code file or a bare code object.
    pub fn parse(text: &str) -> Result<CodeFile> {
        if let Ok(f) = serde_json::from_str::<CodeFile>(text) {
            return Ok(f);
        }
        let code: CodeJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(CodeFile {
            provenance: Provenance {
                library_version: VERSION.into(),
                field: code.field.clone(),
                descriptor: None,
                lift: None,
            },
            code,
        })
    }

    pub fn to_code(&self) -> Result<SumRankCode> {
        SumRankCode::from_json(&self.code)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankListCount {
    pub rank_list: Vec<usize>,
    pub count: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionJson {
    /// Each projective codeword stands for this many nonzero codewords.
    pub scalars: u128,
    /// Weight → number of nonzero codewords.
    pub by_weight: BTreeMap<usize, u128>,
    /// Counts of projective codewords per rank-list.
    pub by_rank_list: Vec<RankListCount>,
}

impl From<&WeightDistribution> for DistributionJson {
    fn from(d: &WeightDistribution) -> Self {
        DistributionJson {
            scalars: d.scalars,
            by_weight: d.expanded(),
            by_rank_list: d
                .by_rank_list
                .iter()
                .map(|(r, &c)| RankListCount { rank_list: r.clone(), count: c })
                .collect(),
        }
    }
}

/// Static part of an analysis; available without any sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticData {
    pub library_version: String,
    pub field: FieldDescriptor,
    pub k: usize,
    pub profile: Vec<usize>,
    pub n_total: usize,
    pub singleton_bound: usize,
    pub nondegenerate: bool,
    pub dual_distance_gt_1: bool,
    pub projective_codewords: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(flatten)]
    pub static_data: StaticData,
    pub d: usize,
    pub msrd: bool,
    pub one_weight: Option<usize>,
    pub constant_rank_profile: Option<Vec<usize>>,
    pub weight_distribution: DistributionJson,
}

pub fn static_data(c: &SumRankCode) -> StaticData {
    StaticData {
        library_version: VERSION.into(),
        field: c.field().descriptor(),
        k: c.k(),
        profile: c.profile().lengths().to_vec(),
        n_total: c.n_total(),
        singleton_bound: c.singleton_bound(),
        nondegenerate: c.is_nondegenerate(),
        dual_distance_gt_1: !c.dual_has_weight_one(),
        projective_codewords: c.projective_size(),
    }
}

/// Full analysis; fails with `TooLarge` when the sweep exceeds the budget.
pub fn analyze(c: &SumRankCode, opts: SweepOpts) -> Result<AnalysisReport> {
    let st = static_data(c);
    let dist = c.weight_distribution(opts)?;
    let d = dist.min_weight().expect("k >= 1");
    Ok(AnalysisReport {
        d,
        msrd: d == st.singleton_bound,
        one_weight: crate::srcode::one_weight(&dist),
        constant_rank_profile: crate::srcode::constant_profile(&dist),
        weight_distribution: DistributionJson::from(&dist),
        static_data: st,
    })
}

pub const CHECKS: &[&str] = &["duality", "geometry-msrd", "ext-formula", "bonisoli", "line-cover"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub applicable: bool,
    pub passed: bool,
    pub details: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub library_version: String,
    pub field: FieldDescriptor,
    pub profile: Vec<usize>,
    pub k: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn not_applicable(name: &str, why: &str) -> CheckResult {
    CheckResult {
        check: name.into(),
        applicable: false,
        passed: true,
        details: serde_json::json!({ "reason": why }),
    }
}

pub fn run_check(c: &SumRankCode, name: &str, opts: SweepOpts) -> Result<CheckResult> {
    let f = c.field();
    let degenerate = "code is degenerate, so it has no associated system";
    Ok(match name {
        "duality" => {
            if !c.is_nondegenerate() {
                return Ok(not_applicable(name, degenerate));
            }
            let s = duality_sweep(c, opts)?;
            CheckResult { check: name.into(), applicable: true, passed: s.passed(), details: serde_json::to_value(&s).unwrap() }
        }
        "geometry-msrd" => {
            if !c.is_nondegenerate() {
                return Ok(not_applicable(name, degenerate));
            }
            let geo = geometric_msrd(&psi(c)?, opts)?;
            let metric = c.is_msrd(opts)?;
            CheckResult {
                check: name.into(),
                applicable: true,
                passed: geo == metric,
                details: serde_json::json!({ "geometric_msrd": geo, "metric_msrd": metric }),
            }
        }
        "ext-formula" => {
            if !c.is_nondegenerate() {
                return Ok(not_applicable(name, degenerate));
            }
            let s = ext_formula_sweep(c, opts)?;
            let from_lists = hamming_distance_from_rank_lists(c, opts)?;
            let ok = s.passed() && s.min_distance() == Some(from_lists);
            CheckResult {
                check: name.into(),
                applicable: true,
                passed: ok,
                details: serde_json::json!({
                    "points": s.points,
                    "failures": s.failures,
                    "counterexample": s.counterexample,
                    "constant_hamming_weight": s.constant_weight(),
                    "hamming_distance": s.min_distance(),
                    "hamming_distance_from_rank_lists": from_lists,
                }),
            }
        }
        "bonisoli" => {
            let lengths = c.profile().lengths();
            if lengths.iter().any(|&n| n != lengths[0]) {
                return Ok(not_applicable(name, "block lengths are not all equal"));
            }
            if !c.is_nondegenerate() {
                return Ok(not_applicable(name, degenerate));
            }
            let Some(r) = c.constant_rank_profile(opts)? else {
                return Ok(not_applicable(name, "code is not constant rank-profile"));
            };
            let rep = bonisoli_constraints(f.q(), f.m(), c.k() as u32, lengths[0] as u32, &r);
            CheckResult { check: name.into(), applicable: true, passed: rep.passed(), details: serde_json::to_value(&rep).unwrap() }
        }
        "line-cover" => {
            if c.k() != 2 {
                return Ok(not_applicable(name, "requires k = 2"));
            }
            if !c.is_nondegenerate() {
                return Ok(not_applicable(name, degenerate));
            }
            let w = system_multi_weight(&psi(c)?)?;
            let cover = covers_line(f, &w)?;
            let bounds = msrd_block_bounds(c.profile().lengths(), f.q(), f.m());
            CheckResult {
                check: name.into(),
                applicable: true,
                passed: cover,
                details: serde_json::json!({
                    "covers_line": cover,
                    "scattered": is_scattered(&w),
                    "max_multi_weight": w.max_weight(),
                    "block_bounds": bounds,
                }),
            }
        }
        other => return Err(Error::Parse(format!("unknown check {other:?}; expected one of {}", CHECKS.join(", ")))),
    })
}

pub fn verify(c: &SumRankCode, checks: &[&str], opts: SweepOpts) -> Result<VerifyReport> {
    Ok(VerifyReport {
        library_version: VERSION.into(),
        field: c.field().descriptor(),
        profile: c.profile().lengths().to_vec(),
        k: c.k(),
        checks: checks.iter().map(|n| run_check(c, n, opts)).collect::<Result<_>>()?,
    })
}

/// The simplex weight predicted from the embedded rank-metric code, for
/// reports on simplex descriptors.
pub fn simplex_prediction(d: &Descriptor, opts: SweepOpts) -> Result<Option<u128>> {
    if d.family != "simplex" {
        return Ok(None);
    }
    let field = d.field()?;
    let k = d.k.unwrap_or(2);
    let poly = d
        .poly
        .as_ref()
        .map(|p| p.iter().map(|c| parse_elem(&field, c)).collect::<Result<Vec<_>>>())
        .transpose()?;
    let g = SingerGroup::new(field.clone(), k, poly.as_deref())?;
    Ok(Some(simplex_weight(&g, &d.u(&field, k)?, opts)?))
}
