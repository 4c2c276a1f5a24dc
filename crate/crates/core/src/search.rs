//! Enumeration of block shapes for two-dimensional one-weight MSRD codes,
//! with witnesses from the library's families.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constructions::{complete_twisted, doubly_extended_lrs, lrs_system, two_fold_default, two_fold_lrs};
use crate::error::{Error, Result};
use crate::fqlin::SweepOpts;
use crate::geometry::{msrd_block_bounds, phi};
use crate::gf::Field;
use crate::skew::EvaluationPair;
use crate::srcode::{one_weight, SumRankCode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRow {
    pub q: u32,
    pub m: u32,
    pub t: usize,
    pub profile: Vec<usize>,
    pub admissible: bool,
    pub reasons: Vec<String>,
    pub witness: Option<String>,
    /// The witness was swept and found one-weight MSRD with this profile.
    pub witness_verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub q: u32,
    pub m: u32,
    pub t: usize,
    pub label: String,
    pub candidates: u128,
    pub rows: Vec<SearchRow>,
}

impl SearchReport {
    pub fn admissible_shapes(&self) -> Vec<Vec<usize>> {
        self.rows.iter().filter(|r| r.admissible).map(|r| r.profile.clone()).collect()
    }
}

/// Number of non-increasing sequences of length t over 1..=m.
fn multiset_count(m: u32, t: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..(m as u128 - 1) {
        c = c * (t as u128 + 1 + i) / (i + 1);
    }
    c
}

fn shapes(m: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(max: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in (1..=max).rev() {
            cur.push(v);
            rec(v, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, t, &mut Vec::new(), &mut out);
    out
}

/// A family member with the given profile, if the library has one.
fn witness(field: &Arc<Field>, profile: &[usize]) -> Result<Option<(String, SumRankCode)>> {
    let f = &**field;
    let (q, m) = (f.q() as usize, f.m() as usize);
    let j = profile.iter().filter(|&&n| n == m).count();
    let rest_ones = profile.iter().filter(|&&n| n != m).all(|&n| n == 1);
    if m > 1 && rest_ones && j < q {
        if j == q - 1 && profile.len() == q + 1 {
            let pair = EvaluationPair::default_for(f, j, m)?;
            let c = doubly_extended_lrs(field.clone(), 1, 2, &pair, f.one(), f.one())?;
            return Ok(Some(("doubly_extended_lrs".into(), c)));
        }
        let blocks = if j == 0 { Vec::new() } else { lrs_system(f, 1, 2, &EvaluationPair::default_for(f, j, m)?)? };
        let c = phi(&complete_twisted(field.clone(), &blocks)?)?;
        return Ok(Some(("completed_lrs_blocks".into(), c)));
    }
    if m == 1 && profile.iter().all(|&n| n == 1) {
        let c = phi(&complete_twisted(field.clone(), &[])?)?;
        return Ok(Some(("all_points".into(), c)));
    }
    if q == 2 && m >= 3 && profile == [m - 1, m - 1, 2] {
        let (h, d) = two_fold_default(f);
        return Ok(Some(("two_fold_lrs".into(), two_fold_lrs(field.clone(), &h, d)?)));
    }
    Ok(None)
}

/// Lists every block shape of length t with entries in [1, m] that satisfies
/// the point-count identity, marking which pass all the bounds, and checks a
/// library witness for each admissible one. Only k = 2 is considered.
pub fn search(q: u32, m: u32, t: usize, cap: u128, opts: SweepOpts) -> Result<SearchReport> {
    let (p, e) = crate::report::split_prime_power(q)
        .ok_or_else(|| Error::BadFieldParams(format!("q = {q} is not a prime power")))?;
    let field = Arc::new(Field::new(p, e, m, None)?);
    let label = format!(
        "range-limited: k = 2, q = {q}, m = {m}, t = {t}; all shapes with entries in [1, {m}] enumerated; \
         existence shown only by library witnesses, nonexistence is not claimed"
    );
    let candidates = if t == 0 { 0 } else { multiset_count(m, t) };
    if candidates > cap {
        return Err(Error::TooLarge { count: candidates, budget: cap });
    }
    let mut rows = Vec::new();
    // conditions on t alone; the all-ones shape only serves as a carrier
    let t_reasons: Vec<String> = msrd_block_bounds(&vec![1; t], q, m)
        .reasons
        .into_iter()
        .filter(|r| r.starts_with("t ") && !r.contains("shape"))
        .collect();
    if !t_reasons.is_empty() {
        rows.push(SearchRow {
            q,
            m,
            t,
            profile: Vec::new(),
            admissible: false,
            reasons: t_reasons,
            witness: None,
            witness_verified: None,
        });
    }
    for shape in shapes(m as usize, t) {
        let b = msrd_block_bounds(&shape, q, m);
        if !b.point_count_identity {
            continue;
        }
        let (mut wit, mut verified) = (None, None);
        if b.admissible {
            if let Some((name, code)) = witness(&field, &shape)? {
                let dist = code.weight_distribution(opts)?;
                let ok = code.profile().lengths() == shape.as_slice()
                    && one_weight(&dist) == Some(code.singleton_bound());
                wit = Some(name);
                verified = Some(ok);
            }
        }
        rows.push(SearchRow {
            q,
            m,
            t,
            profile: shape,
            admissible: b.admissible,
            reasons: b.reasons,
            witness: wit,
            witness_verified: verified,
        });
    }
    Ok(SearchReport { q, m, t, label, candidates, rows })
}
