//! Sparse polynomials in `F_q[θ, t]`.
//!
//! The same type doubles as a generic bivariate ring `F_q[X, Y]` (first
//! exponent for `X = θ`, second for `Y = t`) in the finite identity checks.

use std::collections::HashMap;
use std::fmt;

use super::apoly::APoly;
use super::field::{Field, Fq};

/// Exponent pair `(i, j)` for the monomial `θ^i t^j`.
pub type Exp = (u32, u32);

/// Element of `F_q[θ, t]`: monomials sorted lexicographically by `(i, j)`,
/// no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ThetaTPoly {
    field: Field,
    terms: Vec<(Exp, Fq)>,
}

impl fmt::Debug for ThetaTPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((i, j), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let digits = self.field.digits(*c);
            let mut s = if self.field.is_prime_field() {
                format!("{}", digits[0])
            } else {
                format!("{digits:?}")
            };
            if c.index() == 1 && (*i > 0 || *j > 0) {
                s.clear();
            }
            match i {
                0 => {}
                1 => s.push('θ'),
                _ => s.push_str(&format!("θ^{i}")),
            }
            match j {
                0 => {}
                1 => s.push('t'),
                _ => s.push_str(&format!("t^{j}")),
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Dense scratch space used by products; falls back to a hash map when the
/// exponent box is much larger than the number of contributions.
enum Accumulator {
    DensePrime { p: u64, i0: u32, j0: u32, width: usize, cells: Vec<u64> },
    Dense { i0: u32, j0: u32, width: usize, cells: Vec<Fq> },
    Sparse(HashMap<Exp, Fq>),
}

impl Accumulator {
    fn new(field: &Field, lo: Exp, hi: Exp, contributions: usize) -> Accumulator {
        let width = (hi.1 - lo.1 + 1) as usize;
        let height = (hi.0 - lo.0 + 1) as usize;
        let cells = width.saturating_mul(height);
        if cells <= 4096 || cells <= contributions.saturating_mul(4) {
            if field.is_prime_field() {
                Accumulator::DensePrime {
                    p: field.p() as u64,
                    i0: lo.0,
                    j0: lo.1,
                    width,
                    cells: vec![0; cells],
                }
            } else {
                Accumulator::Dense { i0: lo.0, j0: lo.1, width, cells: vec![Fq::ZERO; cells] }
            }
        } else {
            Accumulator::Sparse(HashMap::with_capacity(contributions.min(1 << 16)))
        }
    }

    #[inline]
    fn add_product(&mut self, field: &Field, e: Exp, a: Fq, b: Fq) {
        match self {
            Accumulator::DensePrime { p, i0, j0, width, cells } => {
                let idx = (e.0 - *i0) as usize * *width + (e.1 - *j0) as usize;
                let cell = &mut cells[idx];
                *cell += a.0 as u64 * b.0 as u64;
                if *cell >= (1u64 << 62) {
                    *cell %= *p;
                }
            }
            Accumulator::Dense { i0, j0, width, cells } => {
                let idx = (e.0 - *i0) as usize * *width + (e.1 - *j0) as usize;
                cells[idx] = field.add(cells[idx], field.mul(a, b));
            }
            Accumulator::Sparse(map) => {
                let v = map.entry(e).or_insert(Fq::ZERO);
                *v = field.add(*v, field.mul(a, b));
            }
        }
    }

    fn finish(self, field: &Field) -> ThetaTPoly {
        let terms: Vec<(Exp, Fq)> = match self {
            Accumulator::DensePrime { p, i0, j0, width, cells } => cells
                .into_iter()
                .enumerate()
                .filter_map(|(idx, v)| {
                    let v = (v % p) as u32;
                    (v != 0).then(|| {
                        (((idx / width) as u32 + i0, (idx % width) as u32 + j0), Fq(v))
                    })
                })
                .collect(),
            Accumulator::Dense { i0, j0, width, cells } => cells
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(idx, v)| (((idx / width) as u32 + i0, (idx % width) as u32 + j0), v))
                .collect(),
            Accumulator::Sparse(map) => {
                let mut t: Vec<(Exp, Fq)> = map.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                t.sort_unstable_by_key(|(e, _)| *e);
                t
            }
        };
        ThetaTPoly { field: field.clone(), terms }
    }
}

impl ThetaTPoly {
    pub fn zero(field: &Field) -> ThetaTPoly {
        ThetaTPoly { field: field.clone(), terms: Vec::new() }
    }

    pub fn one(field: &Field) -> ThetaTPoly {
        Self::constant(field, Fq::ONE)
    }

    pub fn constant(field: &Field, c: Fq) -> ThetaTPoly {
        Self::monomial(field, c, 0, 0)
    }

    pub fn monomial(field: &Field, c: Fq, i: u32, j: u32) -> ThetaTPoly {
        let terms = if c.is_zero() { Vec::new() } else { vec![((i, j), c)] };
        ThetaTPoly { field: field.clone(), terms }
    }

    pub fn theta(field: &Field) -> ThetaTPoly {
        Self::monomial(field, Fq::ONE, 1, 0)
    }

    pub fn t(field: &Field) -> ThetaTPoly {
        Self::monomial(field, Fq::ONE, 0, 1)
    }

    /// Builds from arbitrary terms; repeated exponents are summed.
    pub fn from_terms<I>(field: &Field, terms: I) -> ThetaTPoly
    where
        I: IntoIterator<Item = (Exp, Fq)>,
    {
        let mut t: Vec<(Exp, Fq)> = terms.into_iter().collect();
        t.sort_by_key(|(e, _)| *e);
        let mut merged: Vec<(Exp, Fq)> = Vec::with_capacity(t.len());
        for (e, c) in t {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc = field.add(*lc, c),
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        ThetaTPoly { field: field.clone(), terms: merged }
    }

    /// Builds from integer coefficients reduced mod `p`.
    pub fn from_int_terms(field: &Field, terms: &[(u32, u32, i64)]) -> ThetaTPoly {
        Self::from_terms(field, terms.iter().map(|&(i, j, c)| ((i, j), field.from_int(c))))
    }

    /// Uniformly random coefficients on the box `θ^{≤max_i} t^{≤max_j}`.
    pub fn random<R: rand::Rng + ?Sized>(field: &Field, rng: &mut R, max_i: u32, max_j: u32) -> ThetaTPoly {
        let q = field.q();
        let mut terms = Vec::new();
        for i in 0..=max_i {
            for j in 0..=max_j {
                terms.push(((i, j), field.from_index(rng.gen_range(0..q))));
            }
        }
        ThetaTPoly::from_terms(field, terms)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &[(Exp, Fq)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Fq {
        match self.terms.binary_search_by_key(&(i, j), |(e, _)| *e) {
            Ok(k) => self.terms[k].1,
            Err(_) => Fq::ZERO,
        }
    }

    /// The value if this is a constant (including zero).
    pub fn as_constant(&self) -> Option<Fq> {
        match self.terms.as_slice() {
            [] => Some(Fq::ZERO),
            [((0, 0), c)] => Some(*c),
            _ => None,
        }
    }

    pub fn is_t_free(&self) -> bool {
        self.terms.iter().all(|((_, j), _)| *j == 0)
    }

    pub fn is_theta_free(&self) -> bool {
        self.terms.iter().all(|((i, _), _)| *i == 0)
    }

    pub fn degree_theta(&self) -> Option<u32> {
        self.terms.iter().map(|((i, _), _)| *i).max()
    }

    pub fn degree_t(&self) -> Option<u32> {
        self.terms.iter().map(|((_, j), _)| *j).max()
    }

    fn check_field(&self, other: &ThetaTPoly) {
        assert!(self.field == other.field, "ThetaTPoly operands over different fields");
    }

    pub fn add(&self, other: &ThetaTPoly) -> ThetaTPoly {
        self.check_field(other);
        let f = &self.field;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[y]);
                    y += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.add(a[x].1, b[y].1);
                    if !c.is_zero() {
                        out.push((a[x].0, c));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        ThetaTPoly { field: f.clone(), terms: out }
    }

    pub fn neg(&self) -> ThetaTPoly {
        let f = &self.field;
        ThetaTPoly {
            field: f.clone(),
            terms: self.terms.iter().map(|&(e, c)| (e, f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &ThetaTPoly) -> ThetaTPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fq) -> ThetaTPoly {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        ThetaTPoly {
            field: f.clone(),
            terms: self.terms.iter().map(|&(e, a)| (e, f.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &ThetaTPoly) -> ThetaTPoly {
        Self::sum_of_products(&self.field, [(self, other)])
    }

    /// `Σ a_k b_k` with a single accumulation pass.
    pub fn sum_of_products<'a, I>(field: &Field, pairs: I) -> ThetaTPoly
    where
        I: IntoIterator<Item = (&'a ThetaTPoly, &'a ThetaTPoly)>,
    {
        let pairs: Vec<_> = pairs
            .into_iter()
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .collect();
        if pairs.is_empty() {
            return Self::zero(field);
        }
        let mut lo = (u32::MAX, u32::MAX);
        let mut hi = (0u32, 0u32);
        let mut contributions = 0usize;
        for (a, b) in &pairs {
            a.check_field(b);
            assert!(a.field == *field, "ThetaTPoly operand over a different field");
            let (alo, ahi) = a.bounds();
            let (blo, bhi) = b.bounds();
            lo.0 = lo.0.min(alo.0 + blo.0);
            lo.1 = lo.1.min(alo.1 + blo.1);
            hi.0 = hi.0.max(ahi.0 + bhi.0);
            hi.1 = hi.1.max(ahi.1 + bhi.1);
            contributions += a.len() * b.len();
        }
        let mut acc = Accumulator::new(field, lo, hi, contributions);
        for (a, b) in pairs {
            for &((ai, aj), ac) in &a.terms {
                for &((bi, bj), bc) in &b.terms {
                    acc.add_product(field, (ai + bi, aj + bj), ac, bc);
                }
            }
        }
        acc.finish(field)
    }

    fn bounds(&self) -> (Exp, Exp) {
        let mut lo = (u32::MAX, u32::MAX);
        let mut hi = (0, 0);
        for ((i, j), _) in &self.terms {
            lo = (lo.0.min(*i), lo.1.min(*j));
            hi = (hi.0.max(*i), hi.1.max(*j));
        }
        (lo, hi)
    }

    /// `f -> f^p`, coefficientwise Frobenius with exponents scaled by `p`.
    pub fn frobenius_p(&self) -> ThetaTPoly {
        let f = &self.field;
        let p = f.p();
        ThetaTPoly {
            field: f.clone(),
            terms: self
                .terms
                .iter()
                .map(|&((i, j), c)| ((i * p, j * p), f.frobenius(c)))
                .collect(),
        }
    }

    pub fn pow(&self, k: u64) -> ThetaTPoly {
        let p = self.field.p() as u64;
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            let digit = k % p;
            for _ in 0..digit {
                acc = acc.mul(&base);
            }
            k /= p;
            if k > 0 {
                base = base.frobenius_p();
            }
        }
        acc
    }

    /// `τ^k`: `θ^i t^j -> θ^{i q^k} t^j`, scalars fixed.
    pub fn tau(&self, k: u32) -> ThetaTPoly {
        if k == 0 {
            return self.clone();
        }
        let step = self.field.q().pow(k);
        ThetaTPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|&((i, j), c)| ((i * step, j), c)).collect(),
        }
    }

    /// Specialization `t -> θ`.
    pub fn subst_t_theta(&self) -> ThetaTPoly {
        Self::from_terms(&self.field, self.terms.iter().map(|&((i, j), c)| ((i + j, 0), c)))
    }

    /// Swaps the roles of θ and t.
    pub fn swap_vars(&self) -> ThetaTPoly {
        Self::from_terms(&self.field, self.terms.iter().map(|&((i, j), c)| ((j, i), c)))
    }

    /// Evaluates θ and t at field elements.
    pub fn eval(&self, theta: Fq, t: Fq) -> Fq {
        let f = &self.field;
        self.terms.iter().fold(Fq::ZERO, |acc, &((i, j), c)| {
            f.add(acc, f.mul(c, f.mul(f.pow(theta, i as u64), f.pow(t, j as u64))))
        })
    }

    /// Coefficients with respect to t: entry `j` is the θ-polynomial
    /// multiplying `t^j`.
    pub fn t_coefficients(&self) -> Vec<APoly> {
        let Some(dt) = self.degree_t() else {
            return Vec::new();
        };
        let mut cols: Vec<Vec<Fq>> = vec![Vec::new(); dt as usize + 1];
        for &((i, j), c) in &self.terms {
            let col = &mut cols[j as usize];
            if col.len() <= i as usize {
                col.resize(i as usize + 1, Fq::ZERO);
            }
            col[i as usize] = c;
        }
        cols.into_iter().map(|c| APoly::new(&self.field, c)).collect()
    }

    /// Reassembles `Σ_j a_j(θ) t^j`.
    pub fn from_t_coefficients(field: &Field, cols: &[APoly]) -> ThetaTPoly {
        Self::from_terms(
            field,
            cols.iter().enumerate().flat_map(|(j, a)| {
                a.coeffs()
                    .iter()
                    .enumerate()
                    .map(move |(i, &c)| ((i as u32, j as u32), c))
                    .collect::<Vec<_>>()
            }),
        )
    }

    /// The θ-polynomial this equals, if it is t-free.
    pub fn to_apoly(&self) -> Option<APoly> {
        if !self.is_t_free() {
            return None;
        }
        Some(self.t_coefficients().into_iter().next().unwrap_or_else(|| APoly::zero(&self.field)))
    }
}
