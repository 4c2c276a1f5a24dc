//! Code and system constructions: linearized Reed–Solomon families, Singer
//! orbits and simplex codes, completions and liftings on the projective line.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqlin::{rank_q, FqSubspace, Matrix, ProjectiveSpace, SweepOpts};
use crate::geometry::{self, is_scattered, multi_weight, phi, QSystem, WeightMap};
use crate::gf::{prime_factors, Felem, Field};
use crate::skew::{check_sigma, ev_multi, n_i, sigma_pow, EvaluationPair, SkewPoly};
use crate::srcode::{BlockProfile, SumRankCode};

fn ev_row(f: &Field, poly: &SkewPoly, pair: &EvaluationPair) -> Vec<Felem> {
    ev_multi(f, poly, pair).concat()
}

fn check_k(k: usize, lo: usize, n_total: usize) -> Result<()> {
    if k < lo || k > n_total {
        return Err(Error::BadDimension(format!("k = {k} outside [{lo}, {n_total}]")));
    }
    Ok(())
}

/// C_{k,a,β} = {ev_{a,β}(f) : deg f < k}.
pub fn lrs(field: Arc<Field>, sigma_power: u32, k: usize, pair: &EvaluationPair) -> Result<SumRankCode> {
    let f = &*field;
    check_sigma(f, sigma_power)?;
    let (t, n) = (pair.t(), pair.n());
    check_k(k, 1, t * n)?;
    let rows = (0..k)
        .map(|i| Ok(ev_row(f, &SkewPoly::monomial(f, sigma_power, f.one(), i)?, pair)))
        .collect::<Result<Vec<_>>>()?;
    SumRankCode::new(field.clone(), BlockProfile::uniform(n, t)?, Matrix::from_rows(rows)?)
}

/// U_i = {(y, σ(y)N_1(a_i), …, σ^{k−1}(y)N_{k−1}(a_i)) : y ∈ ⟨β⟩}.
pub fn lrs_system(f: &Field, sigma_power: u32, k: usize, pair: &EvaluationPair) -> Result<Vec<FqSubspace>> {
    pair.a
        .iter()
        .map(|&a| {
            let basis = pair
                .beta
                .iter()
                .map(|&y| (0..k).map(|l| f.mul(sigma_pow(f, sigma_power, l, y), n_i(f, sigma_power, a, l))).collect())
                .collect();
            FqSubspace::new(f, k, basis)
        })
        .collect()
}

/// (ev_{a,β}(f) | f(γ)_0 | f(δ)_∞).
pub fn doubly_extended_lrs(
    field: Arc<Field>,
    sigma_power: u32,
    k: usize,
    pair: &EvaluationPair,
    gamma: Felem,
    delta: Felem,
) -> Result<SumRankCode> {
    let f = &*field;
    check_sigma(f, sigma_power)?;
    if gamma.is_zero() || delta.is_zero() {
        return Err(Error::ZeroExtension);
    }
    let (t, n) = (pair.t(), pair.n());
    check_k(k, 2, t * n)?;
    let rows = (0..k)
        .map(|i| {
            let poly = SkewPoly::monomial(f, sigma_power, f.one(), i)?;
            let mut row = ev_row(f, &poly, pair);
            row.push(poly.eval_zero(f, gamma));
            row.push(poly.eval_inf(f, delta, k)?);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut lengths = vec![n; t];
    lengths.extend([1, 1]);
    SumRankCode::new(field.clone(), BlockProfile::new(lengths)?, Matrix::from_rows(rows)?)
}

/// Default H = ⟨1, z, …, z^{m−2}⟩ and δ = z^{m−1}.
pub fn two_fold_default(f: &Field) -> (Vec<Felem>, Felem) {
    let mut basis = f.fq_basis();
    let delta = basis.pop().expect("m >= 1");
    (basis, delta)
}

/// (X, Y_δ, Z_δ) with X = {(x, x²)}, Y_δ = {(x, x² + δx)} over x ∈ H and
/// Z_δ = ⟨(1,0), (0,δ)⟩.
pub fn two_fold_system(field: Arc<Field>, h: &[Felem], delta: Felem) -> Result<QSystem> {
    let f = &*field;
    if f.q() != 2 {
        return Err(Error::BadCharacteristic { expected: 2 });
    }
    let m = f.m() as usize;
    if m < 3 {
        return Err(Error::BadDimension(format!("m = {m} < 3")));
    }
    if h.len() != m - 1 || rank_q(f, h) != m - 1 {
        return Err(Error::BadDimension(format!("H must be an F_2-subspace of dimension {}", m - 1)));
    }
    let mut ext = h.to_vec();
    ext.push(delta);
    if rank_q(f, &ext) != m {
        return Err(Error::DeltaInH);
    }
    let x: Vec<Vec<Felem>> = h.iter().map(|&x| vec![x, f.mul(x, x)]).collect();
    let y: Vec<Vec<Felem>> = h.iter().map(|&x| vec![x, f.add(f.mul(x, x), f.mul(delta, x))]).collect();
    let z = vec![vec![f.one(), Felem::ZERO], vec![Felem::ZERO, delta]];
    QSystem::new(
        field.clone(),
        2,
        vec![FqSubspace::new(f, 2, x)?, FqSubspace::new(f, 2, y)?, FqSubspace::new(f, 2, z)?],
    )
}

pub fn two_fold_lrs(field: Arc<Field>, h: &[Felem], delta: Felem) -> Result<SumRankCode> {
    phi(&two_fold_system(field, h, delta)?)
}

/// Multiplicative order of a nonzero element of F_q inside F_{q^m}.
fn fq_order(f: &Field, x: Felem) -> u64 {
    let n = f.q() as u64 - 1;
    let mut best = n;
    for p in prime_factors(n as u128) {
        let p = p as u64;
        while best % p == 0 && f.pow(x, best / p) == f.one() {
            best /= p;
        }
    }
    best
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Checks the twisted hypotheses: a_i nonzero with distinct norms, the norms
/// generating a subgroup S of F_q^*, and N(η) ∉ S. When η ≠ 0 this forces S
/// to be proper.
pub fn check_twisted(f: &Field, a: &[Felem], eta: Felem) -> Result<()> {
    if a.is_empty() || a.iter().any(|x| x.is_zero()) {
        return Err(Error::NormSubgroupViolation("a must be nonempty with nonzero entries".into()));
    }
    let norms: Vec<Felem> = a.iter().map(|&x| f.norm(x)).collect();
    for i in 0..norms.len() {
        if norms[i + 1..].contains(&norms[i]) {
            return Err(Error::NormSubgroupViolation("norms of a are not pairwise distinct".into()));
        }
    }
    if eta.is_zero() {
        return Ok(());
    }
    let order = norms.iter().fold(1u64, |l, &x| {
        let o = fq_order(f, x);
        l / gcd(l, o) * o
    });
    let q1 = f.q() as u64 - 1;
    if order == q1 {
        return Err(Error::NormSubgroupViolation(format!(
            "norms generate all of F_q^* (t = {}, q = {})",
            a.len(),
            f.q()
        )));
    }
    if f.pow(f.norm(eta), order) == f.one() {
        return Err(Error::NormSubgroupViolation("N(eta) lies in the subgroup generated by the norms".into()));
    }
    Ok(())
}

/// (q − 1)/r for r the smallest prime factor of q − 1: the order of the
/// largest proper subgroup of F_q^*.
pub fn twisted_max_t(f: &Field) -> Result<usize> {
    let q1 = f.q() as u128 - 1;
    match prime_factors(q1).first() {
        Some(&r) => Ok((q1 / r) as usize),
        None => Err(Error::NormSubgroupViolation("F_q^* has no proper nontrivial subgroup".into())),
    }
}

/// Smallest prime factor r of q − 1 and the defaults a_i = g^{r(i−1)}, η = g.
pub fn twisted_default(f: &Field, t: usize) -> Result<(Vec<Felem>, Felem)> {
    let q1 = f.q() as u128 - 1;
    let Some(&r) = prime_factors(q1).first() else {
        return Err(Error::NormSubgroupViolation("F_q^* has no proper nontrivial subgroup".into()));
    };
    if t as u128 > q1 / r {
        return Err(Error::NormSubgroupViolation(format!("t = {t} exceeds (q-1)/r = {}", q1 / r)));
    }
    let a = (0..t).map(|i| f.exp(r as u64 * i as u64)).collect();
    Ok((a, f.exp(1)))
}

/// H^η_{a,γ} = {ev_{a,γ}(f) : f = x_0 + x_1 x + x_0 η x²}.
pub fn twisted_lrs(
    field: Arc<Field>,
    sigma_power: u32,
    a: &[Felem],
    gamma: &[Felem],
    eta: Felem,
) -> Result<SumRankCode> {
    let f = &*field;
    check_sigma(f, sigma_power)?;
    check_twisted(f, a, eta)?;
    let m = f.m() as usize;
    if gamma.len() != m || rank_q(f, gamma) != m {
        return Err(Error::InvalidPair("gamma must be an ordered F_q-basis of F_{q^m}".into()));
    }
    let pair = EvaluationPair { a: a.to_vec(), beta: gamma.to_vec() };
    let r0 = SkewPoly::new(f, sigma_power, vec![f.one(), Felem::ZERO, eta])?;
    let r1 = SkewPoly::monomial(f, sigma_power, f.one(), 1)?;
    let g = Matrix::from_rows(vec![ev_row(f, &r0, &pair), ev_row(f, &r1, &pair)])?;
    SumRankCode::new(field.clone(), BlockProfile::uniform(m, a.len())?, g)
}

/// U_i = {(y + σ²(y)ηN_2(a_i), a_iσ(y)) : y ∈ F_{q^m}}.
pub fn twisted_system(f: &Field, sigma_power: u32, a: &[Felem], eta: Felem) -> Result<Vec<FqSubspace>> {
    check_sigma(f, sigma_power)?;
    a.iter()
        .map(|&ai| {
            let n2 = n_i(f, sigma_power, ai, 2);
            let basis = f
                .fq_basis()
                .into_iter()
                .map(|y| {
                    let s2 = sigma_pow(f, sigma_power, 2, y);
                    vec![f.add(y, f.mul(s2, f.mul(eta, n2))), f.mul(ai, sigma_pow(f, sigma_power, 1, y))]
                })
                .collect();
            FqSubspace::new(f, 2, basis)
        })
        .collect()
}

/// Appends ⟨v⟩_{F_q} for every point of PG(1, q^m) missed by a scattered
/// multi-linear set, in projective order.
pub fn complete_twisted(field: Arc<Field>, blocks: &[FqSubspace]) -> Result<QSystem> {
    let f = &*field;
    if let Some(b) = blocks.iter().find(|b| b.ambient() != 2) {
        return Err(Error::WrongDimension { expected: 2, got: b.ambient() });
    }
    let w = multi_weight(f, 2, blocks)?;
    if !is_scattered(&w) {
        return Err(Error::NotScattered);
    }
    let ps = ProjectiveSpace::new(f, 2);
    let mut out = blocks.to_vec();
    for idx in 0..ps.count() as u64 {
        if w.get(idx) == 0 {
            out.push(FqSubspace::new(f, 2, vec![ps.point(f, idx)])?);
        }
    }
    QSystem::new_sorted(field.clone(), 2, out)
}

/// Dense polynomials over F_{q^m}, lowest degree first.
mod poly {
    use crate::gf::{Felem, Field};

    pub fn trim(a: &mut Vec<Felem>) {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
    }

    pub fn rem(f: &Field, a: &[Felem], b: &[Felem]) -> Vec<Felem> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let inv = f.inv(b[db]);
        while r.len() > db {
            let c = f.mul(*r.last().unwrap(), inv);
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(f: &Field, a: &[Felem], b: &[Felem], p: &[Felem]) -> Vec<Felem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Felem::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        rem(f, &out, p)
    }

    pub fn pow_mod(f: &Field, a: &[Felem], mut e: u128, p: &[Felem]) -> Vec<Felem> {
        let mut base = rem(f, a, p);
        let mut acc = vec![f.one()];
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(f, &acc, &base, p);
            }
            base = mul_mod(f, &base, &base, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(f: &Field, a: &[Felem], b: &[Felem]) -> Vec<Felem> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        a
    }

    fn sub_x(f: &Field, mut a: Vec<Felem>) -> Vec<Felem> {
        if a.len() < 2 {
            a.resize(2, Felem::ZERO);
        }
        a[1] = f.sub(a[1], f.one());
        trim(&mut a);
        a
    }

    /// Rabin's test over F_Q, Q = |f|.
    pub fn is_irreducible(f: &Field, p: &[Felem]) -> bool {
        let k = p.len() - 1;
        if k == 0 {
            return false;
        }
        let qq = f.size() as u128;
        let x = vec![Felem::ZERO, f.one()];
        let xq = |i: u32| (0..i).fold(rem(f, &x, p), |acc, _| pow_mod(f, &acc, qq, p));
        if !sub_x(f, xq(k as u32)).is_empty() {
            return false;
        }
        for r in crate::gf::prime_factors(k as u128) {
            let g = gcd(f, &sub_x(f, xq((k as u128 / r) as u32)), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

/// The cyclic group ⟨M⟩ ≤ GL(k, q^m) generated by the companion matrix of a
/// primitive polynomial of degree k over F_{q^m}.
#[derive(Clone, Debug)]
pub struct SingerGroup {
    field: Arc<Field>,
    k: usize,
    /// c_0, …, c_{k−1}, 1.
    poly: Vec<Felem>,
    m: Matrix,
}

/// M with ones on the subdiagonal and last column −c_0, …, −c_{k−1}.
pub fn companion(f: &Field, poly: &[Felem]) -> Matrix {
    let k = poly.len() - 1;
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        if i + 1 < k {
            m.set(i + 1, i, f.one());
        }
        m.set(i, k - 1, f.neg(poly[i]));
    }
    m
}

impl SingerGroup {
    /// `poly` lists c_0, …, c_k, lowest degree first, and must be monic.
    /// Without it the lexicographically smallest (c_0 first) monic primitive
    /// polynomial is used.
    pub fn new(field: Arc<Field>, k: usize, poly: Option<&[Felem]>) -> Result<SingerGroup> {
        let f = &*field;
        if k == 0 {
            return Err(Error::BadDimension("k must be at least 1".into()));
        }
        let order = Self::order_for(f, k);
        if order > 1u128 << 64 {
            return Err(Error::TooLarge { count: order, budget: 1u128 << 64 });
        }
        let poly = match poly {
            Some(p) => {
                if p.len() != k + 1 || p[k] != f.one() {
                    return Err(Error::BadDimension(format!("polynomial must be monic of degree {k}")));
                }
                if !poly::is_irreducible(f, p) {
                    return Err(Error::ReduciblePolynomial);
                }
                let ord = Self::x_order(f, p);
                if ord != order {
                    return Err(Error::NotPrimitive { order: ord });
                }
                p.to_vec()
            }
            None => Self::default_poly(f, k),
        };
        let m = companion(f, &poly);
        Ok(SingerGroup { field, k, poly, m })
    }

    fn order_for(f: &Field, k: usize) -> u128 {
        (f.size() as u128).pow(k as u32) - 1
    }

    /// Multiplicative order of x modulo an irreducible p.
    fn x_order(f: &Field, p: &[Felem]) -> u128 {
        let n = Self::order_for(f, p.len() - 1);
        let x = vec![Felem::ZERO, f.one()];
        let mut best = n;
        for r in prime_factors(n) {
            while best % r == 0 && poly::pow_mod(f, &x, best / r, p) == vec![f.one()] {
                best /= r;
            }
        }
        best
    }

    fn default_poly(f: &Field, k: usize) -> Vec<Felem> {
        let size = f.size() as u64;
        let total = size.pow(k as u32);
        let order = Self::order_for(f, k);
        for code in 0..total {
            // c_0 is the most significant digit
            let mut p = vec![Felem::ZERO; k + 1];
            let mut c = code;
            for i in (0..k).rev() {
                p[i] = Felem((c % size) as u32);
                c /= size;
            }
            p[k] = f.one();
            if !p[0].is_zero() && poly::is_irreducible(f, &p) && Self::x_order(f, &p) == order {
                return p;
            }
        }
        unreachable!("primitive polynomials exist in every degree")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn poly(&self) -> &[Felem] {
        &self.poly
    }
    pub fn matrix(&self) -> &Matrix {
        &self.m
    }
    /// q^{km} − 1.
    pub fn order(&self) -> u128 {
        Self::order_for(&self.field, self.k)
    }
    /// (q^{km} − 1)/(q^m − 1).
    pub fn quotient_size(&self) -> u128 {
        self.order() / (self.field.size() as u128 - 1)
    }

    pub fn power(&self, e: u128) -> Matrix {
        let f = &*self.field;
        let mut base = self.m.clone();
        let mut acc = Matrix::identity(f, self.k);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// M^0, …, M^{t−1}.
    pub fn representatives(&self) -> Vec<Matrix> {
        let f = &*self.field;
        let mut out = Vec::new();
        let mut cur = Matrix::identity(f, self.k);
        for _ in 0..self.quotient_size() {
            let next = cur.mul(f, &self.m);
            out.push(cur);
            cur = next;
        }
        out
    }
}

/// Whether λU = W for some λ ∈ F_{q^m}^*.
pub fn same_up_to_scalar(f: &Field, u: &FqSubspace, w: &FqSubspace) -> bool {
    if u.ambient() != w.ambient() || u.dim() != w.dim() {
        return false;
    }
    if u.dim() == 0 {
        return true;
    }
    let b0 = &u.basis()[0];
    let lead = b0.iter().position(|x| !x.is_zero()).expect("basis vectors are nonzero");
    // λ is pinned by where b0 lands; try every image in W with a nonzero lead
    f.elements().skip(1).any(|lambda| {
        let img: Vec<Felem> = b0.iter().map(|&x| f.mul(lambda, x)).collect();
        !img[lead].is_zero()
            && w.contains(f, &img)
            && u.basis()[1..].iter().all(|b| w.contains(f, &b.iter().map(|&x| f.mul(lambda, x)).collect::<Vec<_>>()))
    })
}

/// Orbit of U under the group generated by `gens` acting on the right, with
/// subspaces identified up to F_{q^m}^* scaling, in first-visited order.
/// For r > 1, U must be closed under F_{q^r}.
pub fn orbit(f: &Field, gens: &[Matrix], u: &FqSubspace, r: u32, budget: usize) -> Result<Vec<FqSubspace>> {
    if r == 0 || f.m() % r != 0 {
        return Err(Error::BadDimension(format!("r = {r} does not divide m = {}", f.m())));
    }
    if r > 1 {
        let w = f.intermediate_generator(r);
        if !u.basis().iter().all(|b| u.contains(f, &b.iter().map(|&x| f.mul(w, x)).collect::<Vec<_>>())) {
            return Err(Error::NotFqrSubspace { r });
        }
    }
    let mut out = vec![u.clone()];
    let mut head = 0;
    while head < out.len() {
        let cur = out[head].clone();
        head += 1;
        for g in gens {
            let img = cur.right_mul(f, g);
            if !out.iter().any(|o| same_up_to_scalar(f, o, &img)) {
                if out.len() >= budget {
                    return Err(Error::TooLarge { count: out.len() as u128 + 1, budget: budget as u128 });
                }
                out.push(img);
            }
        }
    }
    Ok(out)
}

/// The code of a system given by an orbit.
pub fn orbital_code(field: Arc<Field>, k: usize, orbit: Vec<FqSubspace>) -> Result<SumRankCode> {
    phi(&QSystem::new(field, k, orbit)?)
}

/// (G | (M^1)^⊤ G | … | (M^{t−1})^⊤ G) with G the basis columns of U. Blocks
/// are indexed by all coset representatives, without deduplication.
pub fn simplex(g: &SingerGroup, u: &FqSubspace) -> Result<SumRankCode> {
    let f = g.field();
    if u.ambient() != g.k {
        return Err(Error::AmbientMismatch(g.k, u.ambient()));
    }
    let blocks: Vec<FqSubspace> = g.representatives().iter().map(|a| u.right_mul(f, a)).collect();
    phi(&QSystem::new(g.field.clone(), g.k, blocks)?)
}

/// The rank-metric code C̃ spanned by an F_{q^m}-basis of the rows of the
/// basis-column matrix of U; returns it together with s.
pub fn embedded_rank_code(field: Arc<Field>, u: &FqSubspace) -> Result<(SumRankCode, usize)> {
    let f = &*field;
    let a = Matrix::from_cols(u.basis())?;
    let mut rows = a.rref(f).to_rows();
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let s = rows.len();
    let c = SumRankCode::new(field.clone(), BlockProfile::new(vec![u.dim()])?, Matrix::from_rows(rows)?)?;
    Ok((c, s))
}

/// w = q^{(k−s)m}/(q^m − 1) · Σ_{c ∈ C̃} w(c).
pub fn simplex_weight(g: &SingerGroup, u: &FqSubspace, opts: SweepOpts) -> Result<u128> {
    let f = g.field();
    let (ct, s) = embedded_rank_code(g.field.clone(), u)?;
    opts.check((f.size() as u128).pow(s as u32))?;
    let dist = ct.weight_distribution(opts)?;
    let total: u128 = dist.expanded().iter().map(|(&w, &c)| w as u128 * c).sum();
    let factor = (f.size() as u128).pow((g.k - s) as u32);
    Ok(factor * total / (f.size() as u128 - 1))
}

/// {(y, Tr(y)) : y ∈ F_{q^m}}.
pub fn club(f: &Field) -> FqSubspace {
    let basis = f.fq_basis().into_iter().map(|y| vec![y, f.trace(y)]).collect();
    FqSubspace::new(f, 2, basis).expect("club basis is independent")
}

/// Every point of PG(k−1, q^m) once, as a one-dimensional block.
pub fn all_points_system(field: Arc<Field>, k: usize) -> Result<QSystem> {
    let f = &*field;
    let ps = ProjectiveSpace::new(f, k);
    let blocks = ps.iter(f).map(|v| FqSubspace::new(f, k, vec![v])).collect::<Result<Vec<_>>>()?;
    QSystem::new(field.clone(), k, blocks)
}

/// The lifting M(U) of a tuple of subspaces of F_{q^m}^2.
#[derive(Clone, Debug)]
pub struct LiftedSystem {
    pub system: QSystem,
    /// Maximal multi-weight of the input; every point has this weight after
    /// lifting.
    pub max_weight: usize,
    /// Points of weight zero in the input.
    pub z: usize,
    /// Σ_{P ∈ L_U} (M − w(P)).
    pub ell: usize,
    /// Σ n_i + (z − 1)M + ℓ.
    pub predicted_d: usize,
}

/// Summary of a lifting, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftSummary {
    pub profile: Vec<usize>,
    pub max_weight: usize,
    pub z: usize,
    pub ell: usize,
    pub predicted_d: usize,
}

impl LiftedSystem {
    pub fn summary(&self) -> LiftSummary {
        LiftSummary {
            profile: self.system.lengths(),
            max_weight: self.max_weight,
            z: self.z,
            ell: self.ell,
            predicted_d: self.predicted_d,
        }
    }

    pub fn code(&self) -> Result<SumRankCode> {
        phi(&self.system)
    }
}

/// For every point P = ⟨v⟩ with M − w(P) = cm + d, appends c copies of
/// ⟨v⟩_{F_{q^m}} and the span of v, zv, …, z^{d−1}v.
pub fn lift(field: Arc<Field>, blocks: &[FqSubspace]) -> Result<LiftedSystem> {
    let f = &*field;
    if let Some(b) = blocks.iter().find(|b| b.ambient() != 2) {
        return Err(Error::WrongDimension { expected: 2, got: b.ambient() });
    }
    let w: WeightMap = multi_weight(f, 2, blocks)?;
    let big_m = w.max_weight();
    let m = f.m() as usize;
    let ps = ProjectiveSpace::new(f, 2);
    let zs = f.fq_basis();
    let mut out = blocks.to_vec();
    let (mut z, mut ell) = (0, 0);
    for idx in 0..ps.count() as u64 {
        let wp = w.get(idx);
        if wp == 0 {
            z += 1;
        } else {
            ell += big_m - wp;
        }
        let deficit = big_m - wp;
        let v = ps.point(f, idx);
        let scaled = |c: Felem| -> Vec<Felem> { v.iter().map(|&x| f.mul(c, x)).collect() };
        for _ in 0..deficit / m {
            out.push(FqSubspace::new(f, 2, zs.iter().map(|&c| scaled(c)).collect())?);
        }
        let d = deficit % m;
        if d > 0 {
            out.push(FqSubspace::new(f, 2, zs[..d].iter().map(|&c| scaled(c)).collect())?);
        }
    }
    let n_in: usize = blocks.iter().map(FqSubspace::dim).sum();
    let predicted_d = (n_in + ell + z * big_m).saturating_sub(big_m);
    let system = QSystem::new_sorted(field.clone(), 2, out)?;
    debug_assert!(geometry::system_multi_weight(&system).map(|mw| mw.size() == ps.count() as usize).unwrap_or(true));
    Ok(LiftedSystem { system, max_weight: big_m, z, ell, predicted_d })
}
