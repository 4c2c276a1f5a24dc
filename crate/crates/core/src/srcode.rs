//! Linear sum-rank-metric codes: weights, supports, rank-lists, minimum
//! distance by projective sweep, duals and isometries.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqlin::{self, expand_over, rank_q, rref, vec_mat, Matrix, ProjectiveSpace, SweepOpts};
use crate::gf::{Felem, Field, FieldDescriptor};

/// Block lengths n_1 ≥ … ≥ n_t ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BlockProfile {
    lengths: Vec<usize>,
    offsets: Vec<usize>,
}

impl TryFrom<Vec<usize>> for BlockProfile {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        BlockProfile::new(v)
    }
}

impl From<BlockProfile> for Vec<usize> {
    fn from(p: BlockProfile) -> Vec<usize> {
        p.lengths
    }
}

impl BlockProfile {
    pub fn new(lengths: Vec<usize>) -> Result<BlockProfile> {
        if lengths.is_empty() {
            return Err(Error::BadProfile("no blocks".into()));
        }
        if lengths.contains(&0) {
            return Err(Error::BadProfile("zero-length block".into()));
        }
        if lengths.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadProfile(format!("{lengths:?} is not non-increasing")));
        }
        let mut offsets = Vec::with_capacity(lengths.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for &n in &lengths {
            acc += n;
            offsets.push(acc);
        }
        Ok(BlockProfile { lengths, offsets })
    }

    pub fn uniform(n: usize, t: usize) -> Result<BlockProfile> {
        BlockProfile::new(vec![n; t])
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }
    pub fn t(&self) -> usize {
        self.lengths.len()
    }
    /// N = Σ n_i.
    pub fn total(&self) -> usize {
        self.offsets[self.lengths.len()]
    }
    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Splits a length-N vector into blocks.
    pub fn split<'a>(&self, x: &'a [Felem]) -> Result<Vec<&'a [Felem]>> {
        if x.len() != self.total() {
            return Err(Error::ProfileMismatch(format!("length {} vs N = {}", x.len(), self.total())));
        }
        Ok((0..self.t()).map(|i| &x[self.range(i)]).collect())
    }
}

/// Per-block ranks, their sorted profile, and the sum-rank weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankData {
    pub rank_list: Vec<usize>,
    pub rank_profile: Vec<usize>,
    pub weight: usize,
}

impl RankData {
    pub fn from_list(rank_list: Vec<usize>) -> RankData {
        let mut rank_profile = rank_list.clone();
        rank_profile.sort_unstable_by(|a, b| b.cmp(a));
        let weight = rank_list.iter().sum();
        RankData { rank_list, rank_profile, weight }
    }
}

/// w(x) = Σ rk_q(x_i).
pub fn sum_rank_weight(f: &Field, profile: &BlockProfile, x: &[Felem]) -> Result<RankData> {
    let blocks = profile.split(x)?;
    Ok(RankData::from_list(blocks.iter().map(|b| rank_q(f, b)).collect()))
}

fn rank_list_unchecked(f: &Field, profile: &BlockProfile, x: &[Felem]) -> Vec<usize> {
    (0..profile.t()).map(|i| rank_q(f, &x[profile.range(i)])).collect()
}

/// F_q-subspace of F_q^n in canonical (reduced echelon) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QSpace {
    pub n: usize,
    pub basis: Vec<Vec<Felem>>,
}

impl QSpace {
    pub fn span(f: &Field, n: usize, mut vecs: Vec<Vec<Felem>>) -> QSpace {
        vecs.retain(|v| v.iter().any(|x| !x.is_zero()));
        rref(f, &mut vecs);
        QSpace { n, basis: vecs }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal complement under the standard dot product.
    pub fn perp(&self, f: &Field) -> QSpace {
        let ker = fqlin::nullspace(f, &self.basis, self.n);
        QSpace::span(f, self.n, ker)
    }

    /// Image under right multiplication by an n × n matrix over F_q.
    pub fn right_mul(&self, f: &Field, a: &Matrix) -> QSpace {
        QSpace::span(f, self.n, self.basis.iter().map(|b| vec_mat(f, b, a)).collect())
    }
}

/// Column space of the Γ-expansion of each block. `gammas = None` uses the
/// canonical basis 1, z, …, z^{m−1} in every block.
pub fn support(
    f: &Field,
    profile: &BlockProfile,
    x: &[Felem],
    gammas: Option<&[Vec<Felem>]>,
) -> Result<Vec<QSpace>> {
    let blocks = profile.split(x)?;
    let canon = f.fq_basis();
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let g = gammas.map_or(&canon, |gs| &gs[i]);
            let rows = expand_over(f, b, g)?;
            let m = f.m() as usize;
            let cols: Vec<Vec<Felem>> = (0..m).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
            Ok(QSpace::span(f, b.len(), cols))
        })
        .collect()
}

/// Counts of nonzero codewords, one entry per projective codeword. Every
/// projective codeword stands for `scalars` = q^m − 1 codewords.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub scalars: u128,
    pub by_weight: BTreeMap<usize, u128>,
    pub by_rank_list: BTreeMap<Vec<usize>, u128>,
}

impl WeightDistribution {
    fn merge(mut self, other: WeightDistribution) -> WeightDistribution {
        for (w, c) in other.by_weight {
            *self.by_weight.entry(w).or_default() += c;
        }
        for (r, c) in other.by_rank_list {
            *self.by_rank_list.entry(r).or_default() += c;
        }
        self
    }

    /// Weight counts over all nonzero codewords.
    pub fn expanded(&self) -> BTreeMap<usize, u128> {
        self.by_weight.iter().map(|(&w, &c)| (w, c * self.scalars)).collect()
    }

    pub fn by_profile(&self) -> BTreeMap<Vec<usize>, u128> {
        let mut out = BTreeMap::new();
        for (r, &c) in &self.by_rank_list {
            *out.entry(RankData::from_list(r.clone()).rank_profile).or_default() += c;
        }
        out
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.by_weight.keys().next().copied()
    }

    pub fn total_nonzero(&self) -> u128 {
        self.by_weight.values().sum::<u128>() * self.scalars
    }
}

/// A k-dimensional F_{q^m}-linear code in F_{q^m}^n given by a full-rank
/// generator matrix.
#[derive(Clone, Debug)]
pub struct SumRankCode {
    field: Arc<Field>,
    profile: BlockProfile,
    g: Matrix,
}

impl PartialEq for SumRankCode {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.profile == other.profile && self.g == other.g
    }
}

impl SumRankCode {
    pub fn new(field: Arc<Field>, profile: BlockProfile, g: Matrix) -> Result<SumRankCode> {
        if g.cols() != profile.total() {
            return Err(Error::ProfileMismatch(format!(
                "generator has {} columns, profile needs {}",
                g.cols(),
                profile.total()
            )));
        }
        if g.rows() == 0 {
            return Err(Error::InvalidCode("dimension must be at least 1".into()));
        }
        if (0..g.rows()).any(|i| g.row(i).iter().all(|x| x.is_zero())) {
            return Err(Error::InvalidCode("generator has a zero row".into()));
        }
        if g.rank(&field) != g.rows() {
            return Err(Error::InvalidCode("generator rows are linearly dependent".into()));
        }
        Ok(SumRankCode { field, profile, g })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn profile(&self) -> &BlockProfile {
        &self.profile
    }
    pub fn generator(&self) -> &Matrix {
        &self.g
    }
    pub fn k(&self) -> usize {
        self.g.rows()
    }
    pub fn n_total(&self) -> usize {
        self.profile.total()
    }
    pub fn singleton_bound(&self) -> usize {
        self.n_total() - self.k() + 1
    }

    /// Generator block G_i.
    pub fn block(&self, i: usize) -> Matrix {
        self.g.col_block(self.profile.range(i))
    }

    pub fn encode(&self, v: &[Felem]) -> Vec<Felem> {
        vec_mat(&self.field, v, &self.g)
    }

    pub fn weight_of(&self, x: &[Felem]) -> Result<RankData> {
        sum_rank_weight(&self.field, &self.profile, x)
    }

    pub fn projective_size(&self) -> u128 {
        fqlin::projective_count(self.field.size() as u64, self.k())
    }

    /// Exhaustive projective sweep of the nonzero codewords.
    pub fn weight_distribution(&self, opts: SweepOpts) -> Result<WeightDistribution> {
        let count = self.projective_size();
        opts.check(count)?;
        let f = &*self.field;
        let ps = ProjectiveSpace::new(f, self.k());
        let empty = WeightDistribution { scalars: (f.size() - 1) as u128, ..Default::default() };
        let dist = fqlin::sweep(
            opts,
            count as u64,
            empty.clone(),
            |range| {
                let mut part = empty.clone();
                for v in ps.iter_range(f, range) {
                    let x = self.encode(&v);
                    let rl = rank_list_unchecked(f, &self.profile, &x);
                    *part.by_weight.entry(rl.iter().sum()).or_default() += 1;
                    *part.by_rank_list.entry(rl).or_default() += 1;
                }
                part
            },
            WeightDistribution::merge,
        );
        Ok(dist)
    }

    pub fn min_distance(&self, opts: SweepOpts) -> Result<usize> {
        Ok(self.weight_distribution(opts)?.min_weight().expect("k >= 1"))
    }

    pub fn is_msrd(&self, opts: SweepOpts) -> Result<bool> {
        Ok(self.min_distance(opts)? == self.singleton_bound())
    }

    pub fn is_one_weight(&self, opts: SweepOpts) -> Result<Option<usize>> {
        Ok(one_weight(&self.weight_distribution(opts)?))
    }

    pub fn constant_rank_profile(&self, opts: SweepOpts) -> Result<Option<Vec<usize>>> {
        Ok(constant_profile(&self.weight_distribution(opts)?))
    }

    /// Every block has F_q-independent columns.
    pub fn is_nondegenerate(&self) -> bool {
        let f = &*self.field;
        (0..self.profile.t()).all(|i| {
            let b = self.block(i);
            let mut rows: Vec<Vec<Felem>> =
                (0..b.cols()).map(|j| fqlin::expand_vec(f, &b.col(j))).collect();
            rref(f, &mut rows).len() == b.cols()
        })
    }

    /// Whether C^⊥ contains a codeword of sum-rank weight one, found by
    /// testing every rank-one vector supported on a single block.
    pub fn dual_has_weight_one(&self) -> bool {
        let f = &*self.field;
        let sub = f.subfield();
        (0..self.profile.t()).any(|i| {
            let b = self.block(i);
            let n = b.cols();
            let total = (f.q() as u64).pow(n as u32);
            (1..total).any(|mut idx| {
                let mut c = vec![Felem::ZERO; n];
                for slot in c.iter_mut() {
                    *slot = sub[(idx % f.q() as u64) as usize];
                    idx /= f.q() as u64;
                }
                (0..b.rows()).all(|r| fqlin::dot(f, b.row(r), &c).is_zero())
            })
        })
    }

    /// The code C^⊥ under the standard inner product.
    pub fn dual(&self) -> Result<SumRankCode> {
        if self.k() == self.n_total() {
            return Err(Error::FullSpace);
        }
        let ker = self.g.right_kernel(&self.field);
        SumRankCode::new(self.field.clone(), self.profile.clone(), Matrix::from_rows(ker)?)
    }

    pub fn same_code(&self, other: &SumRankCode) -> bool {
        self.field == other.field
            && self.profile == other.profile
            && self.g.row_space_eq(&self.field, &other.g)
    }

    /// (x_1, …, x_t) ↦ (a_1 x_{π(1)} A_1, …, a_t x_{π(t)} A_t).
    pub fn apply_isometry(&self, a: &[Felem], mats: &[Matrix], perm: &[usize]) -> Result<SumRankCode> {
        let f = &*self.field;
        let t = self.profile.t();
        if a.len() != t || mats.len() != t || perm.len() != t {
            return Err(Error::BadIsometry("expected one scalar, matrix and image per block".into()));
        }
        let mut seen = vec![false; t];
        for &p in perm {
            if p >= t || seen[p] {
                return Err(Error::BadIsometry("not a permutation".into()));
            }
            seen[p] = true;
        }
        for (i, &p) in perm.iter().enumerate() {
            if self.profile.lengths()[p] != self.profile.lengths()[i] {
                return Err(Error::IllegalPermutation);
            }
        }
        if a.iter().any(|x| x.is_zero()) {
            return Err(Error::BadIsometry("zero block scalar".into()));
        }
        for (i, m) in mats.iter().enumerate() {
            let n = self.profile.lengths()[i];
            if m.rows() != n || m.cols() != n {
                return Err(Error::BadIsometry(format!("block {i} matrix must be {n}x{n}")));
            }
            if (0..n).any(|r| m.row(r).iter().any(|&x| !f.is_in_subfield(x))) {
                return Err(Error::BadIsometry(format!("block {i} matrix has entries outside F_q")));
            }
            if m.rank(f) != n {
                return Err(Error::BadIsometry(format!("block {i} matrix is singular")));
            }
        }
        let blocks: Vec<Matrix> = (0..t)
            .map(|i| {
                let mut b = self.block(perm[i]).mul(f, &mats[i]);
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        let v = f.mul(a[i], b.get(r, c));
                        b.set(r, c, v);
                    }
                }
                b
            })
            .collect();
        SumRankCode::new(self.field.clone(), self.profile.clone(), Matrix::hcat(&blocks))
    }

    pub fn to_json(&self) -> CodeJson {
        let f = &*self.field;
        CodeJson {
            field: f.descriptor(),
            profile: self.profile.lengths().to_vec(),
            k: self.k(),
            g: (0..self.k()).map(|i| self.g.row(i).iter().map(|&x| f.coeffs(x)).collect()).collect(),
        }
    }

    pub fn from_json(j: &CodeJson) -> Result<SumRankCode> {
        let field = Arc::new(Field::from_descriptor(&j.field)?);
        let profile = BlockProfile::new(j.profile.clone())?;
        if j.g.len() != j.k {
            return Err(Error::Parse(format!("k = {} but G has {} rows", j.k, j.g.len())));
        }
        let rows: Result<Vec<Vec<Felem>>> = j
            .g
            .iter()
            .map(|r| r.iter().map(|c| field.parse_coeffs(c)).collect())
            .collect();
        let g = Matrix::from_rows(rows?)?;
        SumRankCode::new(field, profile, g)
    }
}

pub fn one_weight(d: &WeightDistribution) -> Option<usize> {
    (d.by_weight.len() == 1).then(|| *d.by_weight.keys().next().unwrap())
}

pub fn constant_profile(d: &WeightDistribution) -> Option<Vec<usize>> {
    let p = d.by_profile();
    (p.len() == 1).then(|| p.keys().next().unwrap().clone())
}

/// Serialized code: `{"field":…,"profile":[3,1,1],"k":2,"G":[[…]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: FieldDescriptor,
    pub profile: Vec<usize>,
    pub k: usize,
    #[serde(rename = "G")]
    pub g: Vec<Vec<Vec<u32>>>,
}
