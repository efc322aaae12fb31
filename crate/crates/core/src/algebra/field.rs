//! Finite fields `F_q`, `q = p^e`.
//!
//! Elements are stored as the integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`
//! built from their coordinates over `F_p` in the power basis of the
//! defining modulus. Multiplication goes through discrete log tables, so a
//! [`Field`] is cheap to clone (it is an `Arc`) and every operation on
//! [`Fq`] values needs the field handle.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order we build tables for.
pub const MAX_ORDER: u32 = 1 << 16;

/// Element of a finite field, identified by its base-`p` digit encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Raw digit encoding.
    pub fn index(self) -> u32 {
        self.0
    }
}

/// Characteristic, degree and modulus of a field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Monic irreducible over `F_p`, coefficients low to high, length `e + 1`.
    pub modulus: Vec<u32>,
}

/// Conway polynomials for the small extension fields we test against.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
];

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomial helpers over F_p used only while building a field.

fn fp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        k >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo `m` over `F_p`.
fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in m.iter().enumerate() {
            let sub = factor * c % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, m, p)
}

fn digits_of(mut x: u32, p: u32, e: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(e as usize);
    for _ in 0..e {
        d.push(x % p);
        x /= p;
    }
    d
}

fn encode(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Checks irreducibility of a monic `modulus` over `F_p`: no roots, and no
/// monic factor of degree `2..=deg/2` (trial division).
pub(crate) fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    if deg == 1 {
        return true;
    }
    let eval = |x: u32| {
        modulus
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64)
    };
    if (0..p).any(|x| eval(x) == 0) {
        return false;
    }
    for d in 2..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut f = digits_of(idx as u32, p, d as u32);
            f.push(1);
            if fp_rem(modulus, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = p.pow(e);
    for idx in 0..count {
        let mut f = digits_of(idx, p, e);
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// Spec with the built-in modulus: a Conway polynomial when tabulated,
    /// otherwise the lexicographically first monic irreducible.
    pub fn new(p: u32, e: u32) -> Result<FieldSpec> {
        Self::check_order(p, e)?;
        let modulus = if e == 1 {
            vec![0, 1]
        } else if let Some((_, _, m)) = CONWAY.iter().find(|(cp, ce, _)| *cp == p && *ce == e) {
            m.to_vec()
        } else {
            first_irreducible(p, e)
        };
        Ok(FieldSpec { p, e, modulus })
    }

    /// Spec with a caller-supplied monic modulus (coefficients low to high).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<FieldSpec> {
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree at least 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        Self::check_order(p, e)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must be reduced mod p".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        Ok(FieldSpec { p, e, modulus })
    }

    fn check_order(p: u32, e: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        match p.checked_pow(e) {
            Some(q) if q <= MAX_ORDER => Ok(()),
            _ => Err(Error::InvalidField(format!("field order {p}^{e} exceeds {MAX_ORDER}"))),
        }
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.e)
    }
}

pub struct GaloisField {
    spec: FieldSpec,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// Shared handle to a finite field.
#[derive(Clone)]
pub struct Field(Arc<GaloisField>);

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.spec.p, self.0.spec.e)
    }
}

impl Field {
    /// `F_{p^e}` with the built-in modulus.
    pub fn new(p: u32, e: u32) -> Result<Field> {
        Ok(Self::from_spec(FieldSpec::new(p, e)?))
    }

    /// `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1)
    }

    pub fn from_spec(spec: FieldSpec) -> Field {
        let p = spec.p;
        let e = spec.e;
        let q = spec.order();
        let m = &spec.modulus;
        let mul_slow = |a: u32, b: u32| {
            let mut da = digits_of(a, p, e);
            let mut db = digits_of(b, p, e);
            fp_trim(&mut da);
            fp_trim(&mut db);
            let r = fp_mulmod(&da, &db, m, p);
            let mut full = r;
            full.resize(e as usize, 0);
            encode(&full, p)
        };

        // Find a primitive element and fill exp/log tables.
        let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
        let mut log = vec![0u32; q as usize];
        if q == 2 {
            exp[0] = 1;
            exp[1] = 1;
        } else {
            let mut generator_found = false;
            for g in 2..q {
                let mut x = 1u32;
                let mut order = 0u32;
                loop {
                    x = mul_slow(x, g);
                    order += 1;
                    if x == 1 {
                        break;
                    }
                }
                if order == q - 1 {
                    let mut x = 1u32;
                    for k in 0..(q - 1) {
                        exp[k as usize] = x;
                        log[x as usize] = k;
                        x = mul_slow(x, g);
                    }
                    generator_found = true;
                    break;
                }
            }
            assert!(generator_found, "multiplicative group of a finite field is cyclic");
            for k in 0..(q - 1) as usize {
                exp[k + (q - 1) as usize] = exp[k];
            }
        }

        let add_slow = |a: u32, b: u32| {
            let da = digits_of(a, p, e);
            let db = digits_of(b, p, e);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            encode(&s, p)
        };
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits_of(a, p, e).iter().map(|&c| (p - c) % p).collect();
                encode(&d, p)
            })
            .collect();
        let add = if e > 1 && q <= 256 {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_slow(a, b);
                }
            }
            Some(t)
        } else {
            None
        };
        Field(Arc::new(GaloisField { spec, q, exp, log, add, neg }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn e(&self) -> u32 {
        self.0.spec.e
    }

    /// Field order `q = p^e`.
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.spec.e == 1
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    /// All elements in index order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fq> {
        (1..self.0.q).map(Fq)
    }

    /// Element from its raw digit encoding.
    pub fn from_index(&self, idx: u32) -> Fq {
        assert!(idx < self.0.q, "index {idx} out of range for field of order {}", self.0.q);
        Fq(idx)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p() as i64) as u32)
    }

    /// Element from base-`p` digits, little-endian; missing digits are zero.
    pub fn from_digits(&self, digits: &[u32]) -> Result<Fq> {
        let p = self.p();
        if digits.len() > self.e() as usize || digits.iter().any(|&d| d >= p) {
            return Err(Error::InvalidElement(format!("{digits:?} is not an element of {self:?}")));
        }
        Ok(Fq(encode(digits, p)))
    }

    /// Base-`p` digits of `a`, little-endian, always `e` long.
    pub fn digits(&self, a: Fq) -> Vec<u32> {
        digits_of(a.0, self.p(), self.e())
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let f = &self.0;
        if f.spec.e == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= f.q { s - f.q } else { s });
        }
        if let Some(t) = &f.add {
            return Fq(t[(a.0 * f.q + b.0) as usize]);
        }
        let p = f.spec.p;
        let (mut x, mut y, mut r, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            r += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fq(r)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.0.neg[a.0 as usize])
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let f = &self.0;
        if f.spec.e == 1 {
            return Fq(((a.0 as u64 * b.0 as u64) % f.q as u64) as u32);
        }
        Fq(f.exp[(f.log[a.0 as usize] + f.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            return None;
        }
        let f = &self.0;
        let l = f.log[a.0 as usize];
        Some(Fq(f.exp[((f.q - 1 - l) % (f.q - 1)) as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fq, k: u64) -> Fq {
        if k == 0 {
            return Fq::ONE;
        }
        if a.0 == 0 {
            return Fq::ZERO;
        }
        let f = &self.0;
        let l = f.log[a.0 as usize] as u64;
        Fq(f.exp[((l * (k % (f.q as u64 - 1))) % (f.q as u64 - 1)) as usize])
    }

    /// Absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p() as u64)
    }

    /// Elements of the subfield of order `sub_order` (those with
    /// `x^{sub_order} = x`), in index order.
    pub fn subfield(&self, sub_order: u32) -> Result<Vec<Fq>> {
        let q = self.q();
        let mut k = sub_order as u64;
        let mut ok = sub_order >= self.p();
        while ok && k < q as u64 {
            k *= sub_order as u64;
        }
        ok = ok && k == q as u64;
        if !ok {
            return Err(Error::InvalidField(format!("no subfield of order {sub_order} in {self:?}")));
        }
        Ok(self.elements().filter(|&x| self.pow(x, sub_order as u64) == x).collect())
    }
}
