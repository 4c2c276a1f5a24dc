//! The skew polynomial ring F_{q^m}[x; σ] with σ = (y ↦ y^{q^s}), and the
//! generalized operator evaluation used by linearized Reed–Solomon codes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqlin::rank_q;
use crate::gf::{Felem, Field};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Checks that y ↦ y^{q^s} generates Gal(F_{q^m}/F_q).
pub fn check_sigma(f: &Field, s: u32) -> Result<()> {
    let m = f.m();
    if m == 1 || gcd(s % m, m) == 1 {
        Ok(())
    } else {
        Err(Error::BadSigma { s, m })
    }
}

/// σ^i(y).
#[inline]
pub fn sigma_pow(f: &Field, s: u32, i: usize, y: Felem) -> Felem {
    let e = ((s as u64 * i as u64) % f.m() as u64) as u32;
    f.frobenius(y, e)
}

/// N_i(a) = ∏_{j<i} σ^j(a).
pub fn n_i(f: &Field, s: u32, a: Felem, i: usize) -> Felem {
    (0..i).fold(f.one(), |acc, j| f.mul(acc, sigma_pow(f, s, j, a)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewPoly {
    pub sigma_power: u32,
    coeffs: Vec<Felem>,
}

impl SkewPoly {
    pub fn new(f: &Field, sigma_power: u32, mut coeffs: Vec<Felem>) -> Result<SkewPoly> {
        check_sigma(f, sigma_power)?;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(SkewPoly { sigma_power, coeffs })
    }

    pub fn zero(sigma_power: u32) -> SkewPoly {
        SkewPoly { sigma_power, coeffs: Vec::new() }
    }

    /// The monomial c·x^i.
    pub fn monomial(f: &Field, sigma_power: u32, c: Felem, i: usize) -> Result<SkewPoly> {
        let mut coeffs = vec![Felem::ZERO; i + 1];
        coeffs[i] = c;
        SkewPoly::new(f, sigma_power, coeffs)
    }

    pub fn coeffs(&self) -> &[Felem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Felem {
        self.coeffs.get(i).copied().unwrap_or(Felem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn same_sigma(&self, other: &SkewPoly) -> Result<()> {
        if self.sigma_power != other.sigma_power {
            return Err(Error::SigmaMismatch(self.sigma_power, other.sigma_power));
        }
        Ok(())
    }

    pub fn add(&self, f: &Field, other: &SkewPoly) -> Result<SkewPoly> {
        self.same_sigma(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        SkewPoly::new(f, self.sigma_power, c)
    }

    /// Left scalar multiple c·f.
    pub fn scale(&self, f: &Field, c: Felem) -> SkewPoly {
        let coeffs = self.coeffs.iter().map(|&x| f.mul(c, x)).collect();
        SkewPoly::new(f, self.sigma_power, coeffs).expect("sigma already validated")
    }

    /// Product under x·a = σ(a)·x.
    pub fn mul(&self, f: &Field, other: &SkewPoly) -> Result<SkewPoly> {
        self.same_sigma(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(SkewPoly::zero(self.sigma_power));
        }
        let s = self.sigma_power;
        let mut out = vec![Felem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, sigma_pow(f, s, i, b)));
            }
        }
        SkewPoly::new(f, s, out)
    }

    /// Generalized operator evaluation f(β)_a = Σ f_i σ^i(β) N_i(a).
    pub fn op_eval(&self, f: &Field, beta: Felem, a: Felem) -> Felem {
        let s = self.sigma_power;
        let mut acc = Felem::ZERO;
        let mut ni = f.one();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = f.add(acc, f.mul(c, f.mul(sigma_pow(f, s, i, beta), ni)));
            }
            ni = f.mul(ni, sigma_pow(f, s, i, a));
        }
        acc
    }

    /// The linearized evaluation f(β) = Σ f_i σ^i(β).
    pub fn eval(&self, f: &Field, beta: Felem) -> Felem {
        self.op_eval(f, beta, f.one())
    }

    /// f(δ)_∞ = δ · f_{k−1}.
    pub fn eval_inf(&self, f: &Field, delta: Felem, k: usize) -> Result<Felem> {
        if let Some(d) = self.degree() {
            if d >= k {
                return Err(Error::DegreeTooLarge { deg: d, bound: k });
            }
        }
        Ok(f.mul(delta, self.coeff(k.saturating_sub(1))))
    }

    /// f(γ)_0 = f_0 · γ.
    pub fn eval_zero(&self, f: &Field, gamma: Felem) -> Felem {
        f.mul(self.coeff(0), gamma)
    }

    /// dim_{F_q} of {β : f(β) = 0}, by enumeration of the field.
    pub fn kernel_dim(&self, f: &Field) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if f.size() > 1 << 16 {
            return Err(Error::FieldTooLarge { p: f.p(), degree: f.degree() });
        }
        let roots = f.elements().filter(|&b| self.eval(f, b).is_zero()).count() as u64;
        let mut dim = 0;
        let mut pw = 1u64;
        while pw < roots {
            pw *= f.q() as u64;
            dim += 1;
        }
        debug_assert_eq!(pw, roots);
        Ok(dim)
    }
}

/// (a, β): norms of a pairwise distinct, β F_q-independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationPair {
    pub a: Vec<Felem>,
    pub beta: Vec<Felem>,
}

impl EvaluationPair {
    pub fn new(f: &Field, a: Vec<Felem>, beta: Vec<Felem>) -> Result<EvaluationPair> {
        if a.is_empty() || beta.is_empty() {
            return Err(Error::InvalidPair("a and beta must be nonempty".into()));
        }
        if a.iter().any(|x| x.is_zero()) {
            return Err(Error::InvalidPair("a has a zero entry".into()));
        }
        let norms: Vec<Felem> = a.iter().map(|&x| f.norm(x)).collect();
        for i in 0..norms.len() {
            if norms[i + 1..].contains(&norms[i]) {
                return Err(Error::InvalidPair(format!(
                    "norms not pairwise distinct (t = {} > q − 1 = {} or repeated norm)",
                    a.len(),
                    f.q() - 1
                )));
            }
        }
        if rank_q(f, &beta) != beta.len() {
            return Err(Error::InvalidPair(format!(
                "beta not F_q-independent (n = {}, m = {})",
                beta.len(),
                f.m()
            )));
        }
        Ok(EvaluationPair { a, beta })
    }

    /// a_i = g^{i−1}, β_j = z^{j−1}.
    pub fn default_for(f: &Field, t: usize, n: usize) -> Result<EvaluationPair> {
        let a = (0..t).map(|i| f.exp(i as u64)).collect();
        let basis = f.fq_basis();
        if n > basis.len() {
            return Err(Error::InvalidPair(format!("n = {n} exceeds m = {}", f.m())));
        }
        EvaluationPair::new(f, a, basis[..n].to_vec())
    }

    pub fn t(&self) -> usize {
        self.a.len()
    }
    pub fn n(&self) -> usize {
        self.beta.len()
    }
}

/// ev_{a,β}(f): t blocks of length n.
pub fn ev_multi(f: &Field, poly: &SkewPoly, pair: &EvaluationPair) -> Vec<Vec<Felem>> {
    pair.a
        .iter()
        .map(|&a| pair.beta.iter().map(|&b| poly.op_eval(f, b, a)).collect())
        .collect()
}
