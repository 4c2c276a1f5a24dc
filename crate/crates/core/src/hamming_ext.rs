//! The associated Hamming-metric code of a sum-rank code: the Ext multiset,
//! its generator matrix, the weight formula, and arithmetic constraints on
//! constant rank-profile codes.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqlin::{self, FqSubspace, Matrix, ProjectiveSpace, SweepOpts};
use crate::geometry::{linear_set, psi, QSystem};
use crate::gf::{Felem, Field};
use crate::srcode::{BlockProfile, SumRankCode};

/// Largest G_Ext we are willing to build.
pub const MAX_EXT_COLUMNS: u128 = 1 << 16;

/// Points of PG(k−1, q^m) with multiplicities, keyed by projective index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveMultiset {
    pub k: usize,
    pub mult: BTreeMap<u64, u64>,
}

impl ProjectiveMultiset {
    pub fn total(&self) -> u64 {
        self.mult.values().sum()
    }

    fn add(&mut self, other: &ProjectiveMultiset) {
        for (&p, &c) in &other.mult {
            *self.mult.entry(p).or_default() += c;
        }
    }
}

/// Ext¹(U): every point of L_U with multiplicity (q^{w(P)} − 1)/(q − 1).
pub fn ext1(f: &Field, u: &FqSubspace) -> Result<ProjectiveMultiset> {
    let q = f.q() as u64;
    let w = linear_set(f, u)?;
    let mult = w.weights.iter().map(|(&p, &x)| (p, (q.pow(x as u32) - 1) / (q - 1))).collect();
    Ok(ProjectiveMultiset { k: u.ambient(), mult })
}

/// Ext(U) = ⊎ Ext¹(U_i).
pub fn ext(u: &QSystem) -> Result<ProjectiveMultiset> {
    let mut out = ProjectiveMultiset { k: u.k(), mult: BTreeMap::new() };
    for b in u.blocks() {
        out.add(&ext1(u.field(), b)?);
    }
    Ok(out)
}

/// (q^{n_1} + … + q^{n_t} − t)/(q − 1).
pub fn ext_length(q: u32, lengths: &[usize]) -> u128 {
    let q = q as u128;
    lengths.iter().map(|&n| (q.pow(n as u32) - 1) / (q - 1)).sum()
}

/// Columns of Ext(Ψ(C)) in projective order, repeated points adjacent.
pub fn g_ext(c: &SumRankCode) -> Result<Matrix> {
    let f = c.field();
    let total = ext_length(f.q(), c.profile().lengths());
    if total > MAX_EXT_COLUMNS {
        return Err(Error::TooLarge { count: total, budget: MAX_EXT_COLUMNS });
    }
    let e = ext(&psi(c)?)?;
    let ps = ProjectiveSpace::new(f, c.k());
    let mut cols = Vec::with_capacity(total as usize);
    for (&p, &m) in &e.mult {
        let v = ps.point(f, p);
        for _ in 0..m {
            cols.push(v.clone());
        }
    }
    Matrix::from_cols(&cols)
}

/// The associated Hamming code as a code with all blocks of length one.
pub fn hamming_code(c: &SumRankCode) -> Result<SumRankCode> {
    let g = g_ext(c)?;
    let profile = BlockProfile::uniform(1, g.cols())?;
    SumRankCode::new(c.field_arc().clone(), profile, g)
}

/// Σ_i (q^{n_i} − q^{n_i − ρ_i})/(q − 1).
pub fn hamming_weight_formula(q: u32, ranks: &[usize], lengths: &[usize]) -> u128 {
    let q = q as u128;
    ranks
        .iter()
        .zip(lengths)
        .map(|(&r, &n)| (q.pow(n as u32) - q.pow((n - r.min(n)) as u32)) / (q - 1))
        .sum()
}

pub fn hamming_weight(x: &[Felem]) -> usize {
    x.iter().filter(|c| !c.is_zero()).count()
}

/// Outcome of comparing the weight formula with literal column counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtFormulaSweep {
    pub points: u128,
    pub failures: u128,
    pub counterexample: Option<Vec<Vec<u32>>>,
    /// Hamming weight → number of projective codewords.
    pub hamming_weights: BTreeMap<u128, u128>,
}

impl ExtFormulaSweep {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn constant_weight(&self) -> Option<u128> {
        (self.hamming_weights.len() == 1).then(|| *self.hamming_weights.keys().next().unwrap())
    }

    pub fn min_distance(&self) -> Option<u128> {
        self.hamming_weights.keys().next().copied()
    }
}

/// For every point v: the formula on rank(vG_i) against w_H(v G_Ext).
pub fn ext_formula_sweep(c: &SumRankCode, opts: SweepOpts) -> Result<ExtFormulaSweep> {
    let f = c.field();
    let gx = g_ext(c)?;
    let count = c.projective_size();
    opts.check(count)?;
    let ps = ProjectiveSpace::new(f, c.k());
    let lengths = c.profile().lengths().to_vec();
    Ok(fqlin::sweep(
        opts,
        count as u64,
        ExtFormulaSweep::default(),
        |range| {
            let mut part = ExtFormulaSweep::default();
            for v in ps.iter_range(f, range) {
                part.points += 1;
                let rl = c.weight_of(&c.encode(&v)).expect("profile matches").rank_list;
                let formula = hamming_weight_formula(f.q(), &rl, &lengths);
                let direct = hamming_weight(&gx.vec_mul(f, &v)) as u128;
                *part.hamming_weights.entry(direct).or_default() += 1;
                if formula != direct {
                    part.failures += 1;
                    if part.counterexample.is_none() {
                        part.counterexample = Some(v.iter().map(|&x| f.coeffs(x)).collect());
                    }
                }
            }
            part
        },
        |mut a, b| {
            a.points += b.points;
            a.failures += b.failures;
            a.counterexample = a.counterexample.or(b.counterexample);
            for (w, n) in b.hamming_weights {
                *a.hamming_weights.entry(w).or_default() += n;
            }
            a
        },
    ))
}

/// d(C^H) as the minimum of the formula over all rank-lists of C.
pub fn hamming_distance_from_rank_lists(c: &SumRankCode, opts: SweepOpts) -> Result<u128> {
    let dist = c.weight_distribution(opts)?;
    let q = c.field().q();
    Ok(dist
        .by_rank_list
        .keys()
        .map(|rl| hamming_weight_formula(q, rl, c.profile().lengths()))
        .min()
        .expect("k >= 1"))
}

/// Exact rational rendered as "num/den" in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub numerator: String,
    pub denominator: String,
}

impl Ratio {
    fn new(num: BigUint, den: BigUint) -> Ratio {
        let g = num.gcd(&den);
        Ratio { numerator: (&num / &g).to_string(), denominator: (&den / &g).to_string() }
    }

    pub fn is_integer(&self) -> bool {
        self.denominator == "1"
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Both necessary conditions for a constant rank-profile [(n,…,n), k] code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BonisoliReport {
    pub q: u32,
    pub m: u32,
    pub k: u32,
    pub n: u32,
    pub t: usize,
    pub profile: Vec<usize>,
    pub ell: Ratio,
    pub ell_positive_integer: bool,
    pub identity_holds: bool,
}

impl BonisoliReport {
    pub fn passed(&self) -> bool {
        self.ell_positive_integer && self.identity_holds
    }
}

fn big_pow(q: u32, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// ℓ = t(q^n−1)(q^m−1)/((q−1)(q^{km}−1)) and
/// t q^{m(k−1)}(q^n−1)(q^m−1) = (q^{km}−1)(t q^n − Σ q^{n−r_i}).
pub fn bonisoli_constraints(q: u32, m: u32, k: u32, n: u32, profile: &[usize]) -> BonisoliReport {
    let t = profile.len();
    let one = BigUint::one();
    let tb = BigUint::from(t);
    let qn1 = big_pow(q, n) - &one;
    let qm1 = big_pow(q, m) - &one;
    let qkm1 = big_pow(q, k * m) - &one;
    let num = &tb * &qn1 * &qm1;
    let den = BigUint::from(q - 1) * &qkm1;
    let ell_positive_integer = !num.is_zero() && (&num % &den).is_zero();
    let ell = Ratio::new(num, den);
    let lhs = &tb * big_pow(q, m * (k - 1)) * &qn1 * &qm1;
    let identity_holds = if profile.iter().all(|&r| r <= n as usize) {
        let sum: BigUint = profile.iter().map(|&r| big_pow(q, n - r as u32)).sum();
        let tqn = &tb * big_pow(q, n);
        tqn >= sum && lhs == &qkm1 * (tqn - sum)
    } else {
        false
    };
    BonisoliReport { q, m, k, n, t, profile: profile.to_vec(), ell, ell_positive_integer, identity_holds }
}

/// Range of a single rank r_i = n − dim(U_i ∩ H) for an F_{q^m}-hyperplane H.
pub fn rank_range(m: u32, k: u32, n: u32) -> (usize, usize) {
    let lo = n.saturating_sub(m * (k - 1));
    let hi = n.min(m);
    (lo as usize, hi as usize)
}

/// All non-increasing profiles of length t with entries in `rank_range`
/// passing both constraints, in decreasing lexicographic order.
pub fn feasible_profiles(q: u32, m: u32, k: u32, n: u32, t: usize) -> Result<Vec<Vec<usize>>> {
    let (lo, hi) = rank_range(m, k, n);
    let values: Vec<usize> = (lo..=hi).rev().collect();
    // number of multisets of size t over |values| symbols
    let v = values.len() as u128;
    let mut count: u128 = 1;
    for i in 0..(v.saturating_sub(1)) {
        count = count * (t as u128 + 1 + i) / (i + 1);
    }
    let cap = 1u128 << 22;
    if count > cap {
        return Err(Error::TooLarge { count, budget: cap });
    }
    let probe = bonisoli_constraints(q, m, k, n, &vec![hi; t]);
    if !probe.ell_positive_integer {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(t);
    fn rec(
        values: &[usize],
        start: usize,
        t: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        check: &dyn Fn(&[usize]) -> bool,
    ) {
        if cur.len() == t {
            if check(cur) {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..values.len() {
            cur.push(values[i]);
            rec(values, i, t, cur, out, check);
            cur.pop();
        }
    }
    let check = |p: &[usize]| bonisoli_constraints(q, m, k, n, p).passed();
    rec(&values, 0, t, &mut cur, &mut out, &check);
    Ok(out)
}
