//! Table-backed arithmetic in the tower F_p ⊂ F_q ⊂ F_{q^m}, q = p^e.
//!
//! The big field is F_p[z]/(modulus) with `deg(modulus) = e·m`. An element is
//! stored as a [`Felem`] holding its coefficient vector (c_0, …, c_{em−1})
//! packed as base-p digits with c_0 the *most* significant digit, so that the
//! integer order on the packed value is the low-degree-first lexicographic
//! order on coefficient vectors. All arithmetic goes through a shared
//! [`Field`], which owns the log/exp and Zech tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of field elements handled by the table-backed arithmetic.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const ZECH_NONE: u32 = u32::MAX;

/// An element of F_{q^m}. Only meaningful together with the [`Field`] that
/// produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Felem(pub u32);

impl Felem {
    pub const ZERO: Felem = Felem(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serializable description of a field: `{"p":2,"e":1,"m":4,"modulus":[1,1,0,0,1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub e: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

/// The field F_{q^m} together with its subfield F_q.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    e: u32,
    m: u32,
    q: u32,
    size: u32,
    degree: u32,
    modulus: Vec<u32>,
    /// `place[i] = p^(degree-1-i)`, the weight of coefficient c_i in the packing.
    place: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    primitive: Felem,
    one: Felem,
    z: Felem,
    subfield_gen: Felem,
    /// F_q-coordinates of z^j (j < degree) over the basis 1, z, …, z^{m-1}.
    /// Only populated when e > 1.
    fq_coord_table: Vec<Vec<Felem>>,
    fp_embed: Vec<Felem>,
    minus_one_log: u32,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n` by trial division.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomials over F_p as low-degree-first coefficient vectors.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut b = b.to_vec();
        trim(&mut b);
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        while r.len() > db {
            let dr = r.len() - 1;
            let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
            if c != 0 {
                for (i, &bi) in b.iter().enumerate() {
                    let idx = dr - db + i;
                    r[idx] = ((r[idx] as u64 + (p - c) as u64 * bi as u64) % p as u64) as u32;
                }
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
        rem(&out, f, p)
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = *a.get(i).unwrap_or(&0);
                let y = *b.get(i).unwrap_or(&0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// x^(p^k) mod f by repeated p-th powering.
    pub fn x_pow_p_pow(k: u32, f: &[u32], p: u32) -> Vec<u32> {
        let mut cur = rem(&[0, 1], f, p);
        for _ in 0..k {
            let mut acc = vec![1u32];
            for _ in 0..p {
                acc = mul_mod(&acc, &cur, f, p);
            }
            cur = acc;
        }
        cur
    }

    /// Rabin's irreducibility test for a monic `f` of degree >= 1.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let d = (f.len() - 1) as u32;
        if d == 1 {
            return true;
        }
        let x = vec![0u32, 1];
        if sub(&x_pow_p_pow(d, f, p), &x, p) != Vec::<u32>::new() {
            return false;
        }
        for r in super::prime_factors(d as u128) {
            let h = sub(&x_pow_p_pow(d / r as u32, f, p), &x, p);
            let g = gcd(f, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Builds F_{q^m} with q = p^e. When `modulus` is `None` the
    /// lexicographically smallest monic irreducible polynomial of degree
    /// e·m (coefficients compared low-degree-first) is used.
    pub fn new(p: u32, e: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || m == 0 {
            return Err(Error::BadFieldParams("e and m must be positive".into()));
        }
        let degree = e
            .checked_mul(m)
            .ok_or_else(|| Error::BadFieldParams("degree overflow".into()))?;
        let mut size: u64 = 1;
        for _ in 0..degree {
            size = size.saturating_mul(p as u64);
            if size > MAX_FIELD_SIZE {
                return Err(Error::FieldTooLarge { p, degree });
            }
        }
        let modulus = match modulus {
            Some(f) => {
                if f.len() != degree as usize + 1 || f[degree as usize] != 1 || f.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus { expected: degree as usize });
                }
                if !fp_poly::is_irreducible(f, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                f.to_vec()
            }
            None => default_modulus(p, degree),
        };
        Ok(Self::build(p, e, m, degree, size as u32, modulus))
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field> {
        Field::new(d.p, d.e, d.m, Some(&d.modulus))
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, e: self.e, m: self.m, modulus: self.modulus.clone() }
    }

    fn build(p: u32, e: u32, m: u32, degree: u32, size: u32, modulus: Vec<u32>) -> Field {
        let d = degree as usize;
        let place: Vec<u32> = (0..d).map(|i| p.pow((d - 1 - i) as u32)).collect();
        let q = p.pow(e);
        let n = size - 1;

        let mut f = Field {
            p,
            e,
            m,
            q,
            size,
            degree,
            modulus,
            place,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
            primitive: Felem(0),
            one: Felem(0),
            z: Felem(0),
            subfield_gen: Felem(0),
            fq_coord_table: Vec::new(),
            fp_embed: Vec::new(),
            minus_one_log: 0,
        };
        f.one = f.from_coeffs(&[1]);
        f.z = if d >= 2 {
            f.from_coeffs(&[0, 1])
        } else {
            // z ≡ -c_0 in a degree-one quotient
            f.from_coeffs(&[(p - f.modulus[0]) % p])
        };
        f.fp_embed = (0..p).map(|c| f.from_coeffs(&[c])).collect();

        // Primitive element: first candidate in element order of full order.
        let factors = prime_factors(n as u128);
        let mut primitive = f.one;
        for cand in 1..size {
            let g = Felem(cand);
            if factors
                .iter()
                .all(|&r| f.pow_poly(g, (n as u128 / r) as u64) != f.one)
            {
                primitive = g;
                break;
            }
        }
        f.primitive = primitive;

        // exp/log tables via the F_p-linear map "multiply by g".
        let images: Vec<Vec<u32>> = (0..d)
            .map(|i| {
                let mut zi = vec![0u32; i + 1];
                zi[i] = 1;
                let zi = f.from_coeffs(&zi);
                f.coeffs(f.mul_poly(zi, primitive))
            })
            .collect();
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; size as usize];
        let mut cur = f.coeffs(f.one);
        for i in 0..n as usize {
            let packed = f.from_coeffs(&cur).0;
            exp[i] = packed;
            log[packed as usize] = i as u32;
            let mut next = vec![0u32; d];
            for (j, &c) in cur.iter().enumerate() {
                if c != 0 {
                    for (t, &v) in images[j].iter().enumerate() {
                        next[t] = (next[t] + c * v) % p;
                    }
                }
            }
            cur = next;
        }
        for i in 0..n as usize {
            exp[n as usize + i] = exp[i];
        }
        f.exp = exp;
        f.log = log;

        if p != 2 {
            // zech[i] = log(1 + g^i), ZECH_NONE when 1 + g^i = 0.
            let lead = f.place[0];
            f.zech = (0..n as usize)
                .map(|i| {
                    let x = f.exp[i];
                    let c0 = x / lead;
                    let y = if c0 == p - 1 { x - (p - 1) * lead } else { x + lead };
                    if y == 0 {
                        ZECH_NONE
                    } else {
                        f.log[y as usize]
                    }
                })
                .collect();
            f.minus_one_log = n / 2;
        }

        f.subfield_gen = f.pow(primitive, (n / (q - 1)) as u64);

        if e > 1 {
            f.fq_coord_table = f.build_fq_coord_table();
        }
        f
    }

    fn build_fq_coord_table(&self) -> Vec<Vec<Felem>> {
        let m = self.m as usize;
        // minimal polynomial of z over F_q: prod_{j<m} (X - z^{q^j}), low-degree-first
        let mut mu = vec![self.one];
        for j in 0..self.m {
            let root = self.frobenius(self.z, j);
            let neg_root = self.neg(root);
            let mut next = vec![Felem::ZERO; mu.len() + 1];
            for (i, &c) in mu.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.add(next[i], self.mul(c, neg_root));
            }
            mu = next;
        }
        let mut table = Vec::with_capacity(self.degree as usize);
        let mut cur = vec![Felem::ZERO; m];
        cur[0] = self.one;
        for _ in 0..self.degree {
            table.push(cur.clone());
            // multiply by z: shift, then reduce z^m = -sum mu_i z^i
            let top = cur[m - 1];
            let mut next = vec![Felem::ZERO; m];
            for i in (1..m).rev() {
                next[i] = cur[i - 1];
            }
            if !top.is_zero() {
                for (i, slot) in next.iter_mut().enumerate() {
                    *slot = self.sub(*slot, self.mul(top, mu[i]));
                }
            }
            cur = next;
        }
        table
    }

    // ---- accessors -------------------------------------------------------

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// Order of the subfield F_q.
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Number of elements q^m.
    pub fn size(&self) -> u32 {
        self.size
    }
    /// Extension degree e·m over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn primitive(&self) -> Felem {
        self.primitive
    }
    pub fn one(&self) -> Felem {
        self.one
    }
    /// The class of the modulus variable; 1, z, …, z^{m-1} is the F_q-basis.
    pub fn z(&self) -> Felem {
        self.z
    }
    /// Generator of F_q^* inside F_{q^m}.
    pub fn subfield_generator(&self) -> Felem {
        self.subfield_gen
    }

    /// All elements in canonical (coefficient-lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = Felem> {
        (0..self.size).map(Felem)
    }

    pub fn contains(&self, x: Felem) -> bool {
        x.0 < self.size
    }

    // ---- coefficient conversion ---------------------------------------

    /// Low-degree-first coefficient vector of length e·m.
    pub fn coeffs(&self, x: Felem) -> Vec<u32> {
        self.place.iter().map(|&w| (x.0 / w) % self.p).collect()
    }

    /// Packs a low-degree-first coefficient vector (shorter vectors are
    /// zero-padded). Coefficients are reduced mod p.
    pub fn from_coeffs(&self, c: &[u32]) -> Felem {
        assert!(c.len() <= self.degree as usize, "too many coefficients");
        Felem(c.iter().zip(&self.place).map(|(&ci, &w)| (ci % self.p) * w).sum())
    }

    /// Parses a serialized element, rejecting out-of-range coordinates.
    pub fn parse_coeffs(&self, c: &[u32]) -> Result<Felem> {
        if c.len() != self.degree as usize || c.iter().any(|&v| v >= self.p) {
            return Err(Error::Parse(format!(
                "element must have {} coefficients in [0,{})",
                self.degree, self.p
            )));
        }
        Ok(self.from_coeffs(c))
    }

    /// The image of an integer under Z → F_p ⊂ F_{q^m}.
    pub fn from_int(&self, c: i64) -> Felem {
        self.fp_embed[c.rem_euclid(self.p as i64) as usize]
    }

    /// The F_p-digit c_i of x (coefficient of z^i).
    #[inline]
    pub fn digit(&self, x: Felem, i: usize) -> u32 {
        (x.0 / self.place[i]) % self.p
    }

    // ---- arithmetic ----------------------------------------------------

    #[inline]
    pub fn add(&self, a: Felem, b: Felem) -> Felem {
        if self.p == 2 {
            return Felem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let n = self.size - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let diff = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[diff as usize];
        if z == ZECH_NONE {
            Felem(0)
        } else {
            Felem(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Felem) -> Felem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        Felem(self.exp[(self.log[a.0 as usize] + self.minus_one_log) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Felem, b: Felem) -> Felem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felem, b: Felem) -> Felem {
        if a.0 == 0 || b.0 == 0 {
            return Felem(0);
        }
        Felem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Felem) -> Felem {
        assert!(!a.is_zero(), "inverse of zero");
        let n = self.size - 1;
        let l = self.log[a.0 as usize];
        Felem(self.exp[((n - l) % n) as usize])
    }

    #[inline]
    pub fn div(&self, a: Felem, b: Felem) -> Felem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Felem, e: u64) -> Felem {
        if e == 0 {
            return self.one;
        }
        if a.is_zero() {
            return Felem(0);
        }
        let n = (self.size - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Felem(self.exp[((l % n) * (e % n) % n) as usize])
    }

    /// Discrete log to the base of the primitive element. `None` for zero.
    pub fn log(&self, a: Felem) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// primitive^i.
    pub fn exp(&self, i: u64) -> Felem {
        Felem(self.exp[(i % (self.size as u64 - 1)) as usize])
    }

    /// Reference multiplication in the polynomial basis, independent of the
    /// tables.
    pub fn mul_poly(&self, a: Felem, b: Felem) -> Felem {
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let r = fp_poly::mul_mod(&ca, &cb, &self.modulus, self.p);
        self.from_coeffs(&r)
    }

    /// Reference coefficient-wise addition.
    pub fn add_poly(&self, a: Felem, b: Felem) -> Felem {
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.from_coeffs(&s)
    }

    fn pow_poly(&self, a: Felem, mut e: u64) -> Felem {
        let mut base = a;
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    // ---- Galois structure ----------------------------------------------

    /// y ↦ y^{q^s}.
    pub fn frobenius(&self, x: Felem, s: u32) -> Felem {
        if x.is_zero() {
            return x;
        }
        let n = (self.size - 1) as u128;
        let mut qs: u128 = 1;
        for _ in 0..(s % self.m) {
            qs = qs * self.q as u128 % n;
        }
        let l = self.log[x.0 as usize] as u128;
        Felem(self.exp[(l * qs % n) as usize])
    }

    /// Relative norm N_{q^m/q}(x) = x^{(q^m-1)/(q-1)}.
    pub fn norm(&self, x: Felem) -> Felem {
        if x.is_zero() {
            return x;
        }
        self.pow(x, ((self.size - 1) / (self.q - 1)) as u64)
    }

    /// Relative trace Tr_{q^m/q}(x) = Σ_{i<m} x^{q^i}.
    pub fn trace(&self, x: Felem) -> Felem {
        (0..self.m).fold(Felem::ZERO, |acc, i| self.add(acc, self.frobenius(x, i)))
    }

    /// The q elements of F_q: zero followed by the powers of the subfield
    /// generator.
    pub fn subfield(&self) -> Vec<Felem> {
        let mut out = Vec::with_capacity(self.q as usize);
        out.push(Felem::ZERO);
        let mut cur = self.one;
        for _ in 0..self.q - 1 {
            out.push(cur);
            cur = self.mul(cur, self.subfield_gen);
        }
        out
    }

    pub fn is_in_subfield(&self, x: Felem) -> bool {
        self.frobenius(x, 1) == x
    }

    /// Elements of the intermediate field F_{q^r} (r | m).
    pub fn intermediate_generator(&self, r: u32) -> Felem {
        let qr = (self.q as u64).pow(r);
        self.pow(self.primitive, (self.size as u64 - 1) / (qr - 1))
    }

    // ---- F_q-coordinates ----------------------------------------------

    /// Coordinates of x over the F_q-basis 1, z, …, z^{m-1}, as elements of
    /// F_q ⊂ F_{q^m}.
    pub fn fq_coords(&self, x: Felem) -> Vec<Felem> {
        if self.e == 1 {
            return (0..self.m as usize).map(|i| self.fp_embed[self.digit(x, i) as usize]).collect();
        }
        let mut out = vec![Felem::ZERO; self.m as usize];
        for (j, row) in self.fq_coord_table.iter().enumerate() {
            let c = self.digit(x, j);
            if c != 0 {
                let s = self.fp_embed[c as usize];
                for (o, &r) in out.iter_mut().zip(row) {
                    *o = self.add(*o, self.mul(s, r));
                }
            }
        }
        out
    }

    /// Σ c_i z^i for F_q-coordinates c.
    pub fn from_fq_coords(&self, c: &[Felem]) -> Felem {
        let mut acc = Felem::ZERO;
        let mut zi = self.one;
        for &ci in c {
            acc = self.add(acc, self.mul(ci, zi));
            zi = self.mul(zi, self.z);
        }
        acc
    }

    /// The canonical F_q-basis 1, z, …, z^{m-1}.
    pub fn fq_basis(&self) -> Vec<Felem> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut zi = self.one;
        for _ in 0..self.m {
            out.push(zi);
            zi = self.mul(zi, self.z);
        }
        out
    }

    /// Formats an element as a power of the primitive element, for
    /// diagnostics.
    pub fn display(&self, x: Felem) -> String {
        match self.log(x) {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(l) => format!("g^{l}"),
        }
    }
}

fn default_modulus(p: u32, degree: u32) -> Vec<u32> {
    let d = degree as usize;
    let count = (p as u64).pow(degree);
    // enumerate (c_0, …, c_{d-1}) with c_0 most significant
    for idx in 0..count {
        let mut f = vec![0u32; d + 1];
        let mut rest = idx;
        for i in (0..d).rev() {
            f[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        f[d] = 1;
        if fp_poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
