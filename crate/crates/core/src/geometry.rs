//! Systems of F_q-subspaces, hyperplane sections, and (multi-)linear sets.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqlin::{self, dot, left_kernel, FqSubspace, Matrix, ProjectiveSpace, SweepOpts};
use crate::gf::{Felem, Field};
use crate::srcode::{support, BlockProfile, QSpace, SumRankCode};

/// Ordered tuple (U_1, …, U_t) of F_q-subspaces spanning F_{q^m}^k over
/// F_{q^m}, with non-increasing dimensions.
#[derive(Clone, Debug)]
pub struct QSystem {
    field: Arc<Field>,
    k: usize,
    blocks: Vec<FqSubspace>,
}

impl QSystem {
    pub fn new(field: Arc<Field>, k: usize, blocks: Vec<FqSubspace>) -> Result<QSystem> {
        if blocks.is_empty() {
            return Err(Error::InvalidSystem("no blocks".into()));
        }
        if let Some(b) = blocks.iter().find(|b| b.ambient() != k) {
            return Err(Error::AmbientMismatch(k, b.ambient()));
        }
        if blocks.iter().any(|b| b.dim() == 0) {
            return Err(Error::InvalidSystem("zero-dimensional block".into()));
        }
        if blocks.windows(2).any(|w| w[0].dim() < w[1].dim()) {
            return Err(Error::InvalidSystem("block dimensions must be non-increasing".into()));
        }
        let all: Vec<Vec<Felem>> = blocks.iter().flat_map(|b| b.basis().to_vec()).collect();
        if Matrix::from_rows(all)?.rank(&field) != k {
            return Err(Error::InvalidSystem(format!("blocks do not span F_{{q^m}}^{k}")));
        }
        Ok(QSystem { field, k, blocks })
    }

    /// Sorts blocks by non-increasing dimension (stable) before validating.
    pub fn new_sorted(field: Arc<Field>, k: usize, mut blocks: Vec<FqSubspace>) -> Result<QSystem> {
        blocks.sort_by(|a, b| b.dim().cmp(&a.dim()));
        QSystem::new(field, k, blocks)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn blocks(&self) -> &[FqSubspace] {
        &self.blocks
    }
    pub fn t(&self) -> usize {
        self.blocks.len()
    }
    pub fn lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(FqSubspace::dim).collect()
    }
    pub fn n_total(&self) -> usize {
        self.lengths().iter().sum()
    }
}

/// Ψ: per-block F_q-span of the generator columns.
pub fn psi(c: &SumRankCode) -> Result<QSystem> {
    if !c.is_nondegenerate() {
        return Err(Error::DegenerateCode("a block has F_q-dependent columns".into()));
    }
    let f = c.field();
    let blocks = (0..c.profile().t())
        .map(|i| {
            let b = c.block(i);
            let cols: Vec<Vec<Felem>> = (0..b.cols()).map(|j| b.col(j)).collect();
            FqSubspace::new(f, c.k(), cols)
        })
        .collect::<Result<Vec<_>>>()?;
    QSystem::new(c.field_arc().clone(), c.k(), blocks)
}

/// Φ: the stored bases become the generator columns, block by block.
pub fn phi(u: &QSystem) -> Result<SumRankCode> {
    let blocks: Vec<Matrix> =
        u.blocks.iter().map(|b| Matrix::from_cols(b.basis())).collect::<Result<_>>()?;
    let profile = BlockProfile::new(u.lengths())?;
    SumRankCode::new(u.field.clone(), profile, Matrix::hcat(&blocks))
}

/// Basis of U ∩ v^⊥ together with the F_q-coordinates (in the basis of U)
/// of that basis.
fn section_coords(f: &Field, u: &FqSubspace, v: &[Felem]) -> Vec<Vec<Felem>> {
    let rows: Vec<Vec<Felem>> = u.basis().iter().map(|b| f.fq_coords(dot(f, v, b))).collect();
    left_kernel(f, &rows)
}

fn combine(f: &Field, u: &FqSubspace, lambda: &[Felem]) -> Vec<Felem> {
    let mut acc = vec![Felem::ZERO; u.ambient()];
    for (c, b) in lambda.iter().zip(u.basis()) {
        fqlin::axpy(f, *c, b, &mut acc);
    }
    acc
}

/// χ_U(v^⊥) = (U_1 ∩ v^⊥, …, U_t ∩ v^⊥).
pub fn subspace_section(u: &QSystem, v: &[Felem]) -> Vec<FqSubspace> {
    let f = &*u.field;
    u.blocks
        .iter()
        .map(|b| {
            let vecs: Vec<Vec<Felem>> = section_coords(f, b, v).iter().map(|l| combine(f, b, l)).collect();
            FqSubspace::span(f, u.k, &vecs).expect("ambient matches")
        })
        .collect()
}

/// ν_U(v^⊥): per-block dim_{F_q}(U_i ∩ v^⊥).
pub fn dimension_list(u: &QSystem, v: &[Felem]) -> Vec<usize> {
    let f = &*u.field;
    u.blocks.iter().map(|b| section_coords(f, b, v).len()).collect()
}

/// Compares the section U_i ∩ v^⊥, pulled back through ψ_{G_i}, with the
/// orthogonal complement of supp(vG_i), block by block.
pub fn verify_duality(c: &SumRankCode, u: &QSystem, v: &[Felem]) -> Result<bool> {
    let f = c.field();
    let x = c.encode(v);
    let supp = support(f, c.profile(), &x, None)?;
    for (i, section) in subspace_section(u, v).iter().enumerate() {
        let n = c.profile().lengths()[i];
        let pulled: Option<Vec<Vec<Felem>>> =
            section.basis().iter().map(|s| u.blocks[i].coordinates(f, s)).collect();
        let Some(pulled) = pulled else {
            return Ok(false);
        };
        if QSpace::span(f, n, pulled) != supp[i].perp(f) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the exhaustive support/section duality sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualitySweep {
    pub points: u128,
    pub duality_failures: u128,
    pub weight_identity_failures: u128,
    pub counterexample: Option<Vec<Vec<u32>>>,
}

impl DualitySweep {
    pub fn passed(&self) -> bool {
        self.duality_failures == 0 && self.weight_identity_failures == 0
    }
}

/// Checks, for every point v of PG(k−1, q^m), the duality and the identity
/// w(vG) + Σ dim(U_i ∩ v^⊥) = N. `C` must be nondegenerate.
pub fn duality_sweep(c: &SumRankCode, opts: SweepOpts) -> Result<DualitySweep> {
    let u = psi(c)?;
    let count = c.projective_size();
    opts.check(count)?;
    let f = c.field();
    let ps = ProjectiveSpace::new(f, c.k());
    let n = c.n_total();
    let empty = DualitySweep { points: 0, duality_failures: 0, weight_identity_failures: 0, counterexample: None };
    let out = fqlin::sweep(
        opts,
        count as u64,
        empty.clone(),
        |range| {
            let mut part = empty.clone();
            for v in ps.iter_range(f, range) {
                part.points += 1;
                let dual_ok = verify_duality(c, &u, &v).unwrap_or(false);
                let w = c.weight_of(&c.encode(&v)).map(|r| r.weight).unwrap_or(usize::MAX);
                let nu: usize = dimension_list(&u, &v).iter().sum();
                let ident_ok = w.checked_add(nu) == Some(n);
                if !dual_ok {
                    part.duality_failures += 1;
                }
                if !ident_ok {
                    part.weight_identity_failures += 1;
                }
                if (!dual_ok || !ident_ok) && part.counterexample.is_none() {
                    part.counterexample = Some(v.iter().map(|&x| f.coeffs(x)).collect());
                }
            }
            part
        },
        |a, b| DualitySweep {
            points: a.points + b.points,
            duality_failures: a.duality_failures + b.duality_failures,
            weight_identity_failures: a.weight_identity_failures + b.weight_identity_failures,
            counterexample: a.counterexample.or(b.counterexample),
        },
    );
    Ok(out)
}

/// max over hyperplanes v^⊥ of Σ_i dim(U_i ∩ v^⊥).
pub fn max_section_sum(u: &QSystem, opts: SweepOpts) -> Result<usize> {
    let f = &*u.field;
    let count = fqlin::projective_count(f.size() as u64, u.k);
    opts.check(count)?;
    let ps = ProjectiveSpace::new(f, u.k);
    Ok(fqlin::sweep(
        opts,
        count as u64,
        0usize,
        |range| ps.iter_range(f, range).map(|v| dimension_list(u, &v).iter().sum()).max().unwrap_or(0),
        usize::max,
    ))
}

/// Geometric MSRD test: every hyperplane section has total dimension ≤ k−1.
pub fn geometric_msrd(u: &QSystem, opts: SweepOpts) -> Result<bool> {
    Ok(max_section_sum(u, opts)? < u.k)
}

/// Point weights, keyed by projective index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMap {
    pub k: usize,
    pub weights: BTreeMap<u64, usize>,
}

/// One entry of a serialized weight map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointWeight {
    pub point: Vec<Vec<u32>>,
    pub weight: usize,
}

impl WeightMap {
    pub fn max_weight(&self) -> usize {
        self.weights.values().copied().max().unwrap_or(0)
    }

    /// Number of points of positive weight.
    pub fn size(&self) -> usize {
        self.weights.values().filter(|&&w| w > 0).count()
    }

    pub fn get(&self, idx: u64) -> usize {
        self.weights.get(&idx).copied().unwrap_or(0)
    }

    fn add(&mut self, other: &WeightMap) {
        for (&p, &w) in &other.weights {
            *self.weights.entry(p).or_default() += w;
        }
    }

    pub fn to_json(&self, f: &Field) -> Vec<PointWeight> {
        let ps = ProjectiveSpace::new(f, self.k);
        self.weights
            .iter()
            .map(|(&i, &w)| PointWeight { point: ps.point(f, i).iter().map(|&x| f.coeffs(x)).collect(), weight: w })
            .collect()
    }
}

fn log_q(q: u64, mut n: u64) -> usize {
    let mut e = 0;
    while n > 1 {
        debug_assert_eq!(n % q, 0);
        n /= q;
        e += 1;
    }
    e
}

/// L_U with w(P) = dim_{F_q}(U ∩ P), by enumerating the vectors of U.
pub fn linear_set(f: &Field, u: &FqSubspace) -> Result<WeightMap> {
    let size = (f.q() as u128).pow(u.dim() as u32);
    SweepOpts::default().check(size)?;
    let ps = ProjectiveSpace::new(f, u.ambient());
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for x in u.elements(f) {
        if x.iter().any(|c| !c.is_zero()) {
            *counts.entry(ps.index_of(f, &x)).or_default() += 1;
        }
    }
    let q = f.q() as u64;
    let weights: BTreeMap<u64, usize> = counts.into_iter().map(|(p, c)| (p, log_q(q, c + 1))).collect();
    let bound = (size - 1) / (f.q() as u128 - 1);
    assert!(weights.len() as u128 <= bound, "linear set larger than (q^n-1)/(q-1)");
    Ok(WeightMap { k: u.ambient(), weights })
}

/// Blockwise sum of point weights.
pub fn multi_weight(f: &Field, k: usize, blocks: &[FqSubspace]) -> Result<WeightMap> {
    let mut total = WeightMap { k, weights: BTreeMap::new() };
    for b in blocks {
        total.add(&linear_set(f, b)?);
    }
    Ok(total)
}

pub fn system_multi_weight(u: &QSystem) -> Result<WeightMap> {
    multi_weight(&u.field, u.k, &u.blocks)
}

pub fn is_scattered(w: &WeightMap) -> bool {
    w.weights.values().all(|&x| x <= 1)
}

/// Every point of PG(1, q^m) has positive weight.
pub fn covers_line(f: &Field, w: &WeightMap) -> Result<bool> {
    if w.k != 2 {
        return Err(Error::WrongDimension { expected: 2, got: w.k });
    }
    let total = f.size() as u64 + 1;
    Ok((0..total).all(|p| w.get(p) >= 1))
}

/// For k = 2: `Some(N − c)` when every point of PG(1, q^m) has the same
/// multi-weight c.
pub fn one_weight_check(u: &QSystem) -> Result<Option<usize>> {
    if u.k != 2 {
        return Err(Error::WrongDimension { expected: 2, got: u.k });
    }
    let w = system_multi_weight(u)?;
    let f = &*u.field;
    let total = f.size() as u64 + 1;
    let c = w.get(0);
    Ok((0..total).all(|p| w.get(p) == c).then(|| u.n_total() - c))
}

/// Arithmetic conditions on the block lengths of a two-dimensional one-weight
/// MSRD code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockBounds {
    pub profile: Vec<usize>,
    pub t: usize,
    pub lengths_at_most_m: bool,
    pub t_in_range: bool,
    pub t_congruent_one: bool,
    pub point_count_identity: bool,
    /// For t = q + 1: which extremal shape matched, if any.
    pub extremal_case: Option<String>,
    pub admissible: bool,
    pub reasons: Vec<String>,
}

pub fn msrd_block_bounds(profile: &[usize], q: u32, m: u32) -> BlockBounds {
    let q64 = q as u128;
    let t = profile.len();
    let qm = q64.pow(m);
    let mut reasons = Vec::new();
    let lengths_at_most_m = profile.iter().all(|&n| n >= 1 && n as u32 <= m);
    if !lengths_at_most_m {
        reasons.push(format!("block lengths must lie in [1, {m}]"));
    }
    let t_in_range = (q64 + 1..=qm + 1).contains(&(t as u128));
    if !t_in_range {
        reasons.push(format!("t = {t} outside [q+1, q^m+1] = [{}, {}]", q + 1, qm + 1));
    }
    let t_congruent_one = t as u128 % q64 == 1 % q64;
    if !t_congruent_one {
        reasons.push(format!("t = {t} is not 1 mod {q}"));
    }
    let sum: u128 = if lengths_at_most_m {
        profile.iter().map(|&n| (q64.pow(n as u32) - 1) / (q64 - 1)).sum()
    } else {
        0
    };
    let point_count_identity = lengths_at_most_m && sum == qm + 1;
    if !point_count_identity {
        reasons.push(format!("sum of (q^n_i - 1)/(q - 1) is {sum}, need q^m + 1 = {}", qm + 1));
    }
    if t as u32 == q {
        reasons.push(
            "t = q: every (q^n_i - 1)/(q - 1) is 1 mod q, so the sum is 0 mod q while q^m + 1 is 1 mod q".into(),
        );
    }
    let mut extremal_case = None;
    if t as u128 == q64 + 1 {
        let mut sorted = profile.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut case1 = vec![m as usize; q as usize - 1];
        case1.extend([1, 1]);
        if sorted == case1 {
            extremal_case = Some("n_1 = ... = n_{q-1} = m, n_q = n_{q+1} = 1".into());
        } else if q == 2 && m >= 2 && sorted == vec![m as usize - 1, m as usize - 1, 2] {
            extremal_case = Some("q = 2, (m-1, m-1, 2)".into());
        } else {
            reasons.push("t = q + 1 but the shape is neither (m,...,m,1,1) nor (m-1,m-1,2) with q = 2".into());
        }
    }
    let admissible = lengths_at_most_m
        && t_in_range
        && t_congruent_one
        && point_count_identity
        && (t as u128 != q64 + 1 || extremal_case.is_some());
    BlockBounds {
        profile: profile.to_vec(),
        t,
        lengths_at_most_m,
        t_in_range,
        t_congruent_one,
        point_count_identity,
        extremal_case,
        admissible,
        reasons,
    }
}
