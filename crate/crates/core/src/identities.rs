//! Exact checks of the finite identities behind `𝔼^l = Σ χ_t(c)^l u_c^l`:
//! the rational-function lemmas over `F_q(X, Y)`, the brute-force
//! `n`-variable lemma over `F_{q^m}`, and partial sums of Pellarin's
//! `L`-series.
//!
//! Bivariate polynomials in `X, Y` reuse [`ThetaTPoly`] with `θ = X`, `t = Y`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{chi_t, monic_below, APoly, Field, Fq, ThetaTPoly};
use crate::error::{Error, Result};

fn check_l(field: &Field, l: u32) -> Result<()> {
    if l == 0 || l > field.q() {
        return Err(Error::OutOfRange(format!("l = {l} outside 1..={}", field.q())));
    }
    Ok(())
}

/// `D = Π_{u ∈ F_q} (Y + u)` and the cofactors `D / (Y + u)`, in the order of
/// `field.elements()`.
fn y_denominators(field: &Field) -> (ThetaTPoly, Vec<ThetaTPoly>) {
    let y = ThetaTPoly::t(field);
    let linear: Vec<ThetaTPoly> = field
        .elements()
        .map(|u| y.add(&ThetaTPoly::constant(field, u)))
        .collect();
    let product = |skip: Option<usize>| {
        linear
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .fold(ThetaTPoly::one(field), |acc, (_, x)| acc.mul(x))
    };
    let cofactors = (0..linear.len()).map(|i| product(Some(i))).collect();
    (product(None), cofactors)
}

/// `D · (1 + Σ_u (X+u)/(Y+u))`.
fn lemma1_numerator(field: &Field, d: &ThetaTPoly, cof: &[ThetaTPoly]) -> ThetaTPoly {
    let x = ThetaTPoly::theta(field);
    field.elements().zip(cof).fold(d.clone(), |acc, (u, c)| {
        acc.add(&x.add(&ThetaTPoly::constant(field, u)).mul(c))
    })
}

/// `1 + Σ_{u ∈ F_q} (X+u)/(Y+u) = (Y^q - X)/(Y^q - Y)`, cleared of
/// denominators.
pub fn lemma1_check(field: &Field) -> bool {
    let (d, cof) = y_denominators(field);
    let q = field.q() as u64;
    let y_q = ThetaTPoly::t(field).pow(q);
    let lhs = lemma1_numerator(field, &d, &cof).mul(&y_q.sub(&ThetaTPoly::t(field)));
    let rhs = y_q.sub(&ThetaTPoly::theta(field)).mul(&d);
    lhs == rhs
}

/// `1 + Σ ((X+u)/(Y+u))^l = (1 + Σ (X+u)/(Y+u))^l` multiplied through by
/// `D^l`, for any `l ≥ 1`.
pub fn lemma2_identity(field: &Field, l: u32) -> bool {
    let (d, cof) = y_denominators(field);
    let x = ThetaTPoly::theta(field);
    let l = l as u64;
    let lhs = field.elements().zip(&cof).fold(d.pow(l), |acc, (u, c)| {
        acc.add(&x.add(&ThetaTPoly::constant(field, u)).mul(c).pow(l))
    });
    let rhs = lemma1_numerator(field, &d, &cof).pow(l);
    lhs == rhs
}

/// [`lemma2_identity`] restricted to `1 ≤ l ≤ q`.
pub fn lemma2_check(field: &Field, l: u32) -> Result<bool> {
    check_l(field, l)?;
    Ok(lemma2_identity(field, l))
}

/// `Σ_u (Y+u)^{-l} = (Σ_u (Y+u)^{-1})^l` multiplied through by `D^l`.
pub fn goss_degenerate_identity(field: &Field, l: u32) -> bool {
    let (_, cof) = y_denominators(field);
    let l = l as u64;
    let lhs = cof.iter().fold(ThetaTPoly::zero(field), |acc, c| acc.add(&c.pow(l)));
    let rhs = cof.iter().fold(ThetaTPoly::zero(field), |acc, c| acc.add(c)).pow(l);
    lhs == rhs
}

pub fn goss_degenerate_check(field: &Field, l: u32) -> Result<bool> {
    check_l(field, l)?;
    Ok(goss_degenerate_identity(field, l))
}

/// Data for one brute-force instance of
/// `Σ' ((Σ u_i V_i)/(Σ u_i W_i))^l = (-1)^{l+1} (Σ' (Σ u_i V_i)/(Σ u_i W_i))^l`,
/// the sums running over nonzero `(u_1, …, u_n) ∈ F_q^n`.
#[derive(Clone, Debug)]
pub struct BruteForceInstance {
    q: u32,
    ext: Field,
    /// `F_q` inside `ext`.
    base: Vec<Fq>,
    v: Vec<Fq>,
    w: Vec<Fq>,
    l: u32,
}

/// Moore determinant `det(W_j^{q^i})`, nonzero iff the `W_j` are
/// `F_q`-linearly independent.
pub fn moore_determinant(ext: &Field, q: u32, w: &[Fq]) -> Fq {
    let n = w.len();
    let mut rows: Vec<Vec<Fq>> = (0..n)
        .map(|i| w.iter().map(|&x| ext.pow(x, (q as u64).pow(i as u32))).collect())
        .collect();
    let mut det = ext.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return ext.zero();
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = ext.neg(det);
        }
        let p = rows[col][col];
        det = ext.mul(det, p);
        let p_inv = ext.inv(p).expect("pivot is nonzero");
        for r in col + 1..n {
            let factor = ext.mul(rows[r][col], p_inv);
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let sub = ext.mul(factor, rows[col][c]);
                rows[r][c] = ext.sub(rows[r][c], sub);
            }
        }
    }
    det
}

impl BruteForceInstance {
    /// `ext` must contain `F_q` as a subfield.
    pub fn new(ext: &Field, q: u32, v: Vec<Fq>, w: Vec<Fq>, l: u32) -> Result<BruteForceInstance> {
        if v.len() != w.len() || v.is_empty() {
            return Err(Error::OutOfRange("V and W must have the same positive length".into()));
        }
        if l == 0 || l > q {
            return Err(Error::OutOfRange(format!("l = {l} outside 1..={q}")));
        }
        let base = ext.subfield(q)?;
        if moore_determinant(ext, q, &w).is_zero() {
            return Err(Error::DependentDenominators);
        }
        Ok(BruteForceInstance { q, ext: ext.clone(), base, v, w, l })
    }

    /// Seeded instance over `F_{q^m}` with `m` raised to at least `n`.
    pub fn random<R: Rng + ?Sized>(
        base: &Field,
        m: u32,
        n: usize,
        l: u32,
        rng: &mut R,
    ) -> Result<BruteForceInstance> {
        let m = m.max(n as u32);
        let ext = Field::new(base.p(), base.e() * m)?;
        let order = ext.q();
        let mut draw = |k: usize| (0..k).map(|_| ext.from_index(rng.gen_range(0..order))).collect::<Vec<_>>();
        let v = draw(n);
        loop {
            let w = draw(n);
            match BruteForceInstance::new(&ext, base.q(), v.clone(), w, l) {
                Err(Error::DependentDenominators) => continue,
                other => return other,
            }
        }
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn v(&self) -> &[Fq] {
        &self.v
    }

    pub fn w(&self) -> &[Fq] {
        &self.w
    }

    /// `(Σ' R^l, Σ' R)` with `R = Σ u_i V_i / Σ u_i W_i`.
    fn sums(&self) -> (Fq, Fq) {
        let ext = &self.ext;
        let n = self.n();
        let q = self.q as usize;
        let total = q.pow(n as u32);
        let mut pow_sum = ext.zero();
        let mut sum = ext.zero();
        for code in 1..total {
            let mut c = code;
            let (mut num, mut den) = (ext.zero(), ext.zero());
            for i in 0..n {
                let u = self.base[c % q];
                c /= q;
                num = ext.add(num, ext.mul(u, self.v[i]));
                den = ext.add(den, ext.mul(u, self.w[i]));
            }
            let r = ext.div(num, den).expect("independent W give nonzero denominators");
            pow_sum = ext.add(pow_sum, ext.pow(r, self.l as u64));
            sum = ext.add(sum, r);
        }
        (pow_sum, sum)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma3Outcome {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
    pub holds: bool,
}

/// Evaluates both sides by enumerating all `q^n - 1` nonzero tuples.
pub fn lemma3_bruteforce(inst: &BruteForceInstance) -> Lemma3Outcome {
    let ext = &inst.ext;
    let (lhs, sum) = inst.sums();
    let mut rhs = ext.pow(sum, inst.l as u64);
    if inst.l.is_multiple_of(2) {
        rhs = ext.neg(rhs);
    }
    Lemma3Outcome { lhs: ext.digits(lhs), rhs: ext.digits(rhs), holds: lhs == rhs }
}

/// Runs `trials` seeded instances; returns the indices of failures.
pub fn lemma3_trials(base: &Field, m: u32, n: usize, l: u32, trials: usize, seed: u64) -> Result<Vec<usize>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let instances = (0..trials)
        .map(|_| BruteForceInstance::random(base, m, n, l, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(instances
        .par_iter()
        .enumerate()
        .filter(|(_, inst)| !lemma3_bruteforce(inst).holds)
        .map(|(i, _)| i)
        .collect())
}

/// `num / den`, an exact partial sum of `L(χ_t^α, β)`.
#[derive(Clone, Debug)]
pub struct PartialLValue {
    pub alpha: u32,
    pub beta: u32,
    pub n: usize,
    pub num: ThetaTPoly,
    pub den: APoly,
}

/// `Σ_{a ∈ A_+, deg a < n} χ_t(a)^α / a^β` over the common denominator `Π a^β`.
pub fn pellarin_partial(field: &Field, alpha: u32, beta: u32, n: usize) -> Result<PartialLValue> {
    if alpha == 0 || beta == 0 || n == 0 {
        return Err(Error::OutOfRange("alpha, beta and n must be at least 1".into()));
    }
    let monics = monic_below(field, n);
    let powers: Vec<APoly> = monics.par_iter().map(|a| a.pow(beta as u64)).collect();
    let den = powers.iter().fold(APoly::one(field), |acc, x| acc.mul(x));
    let parts: Vec<ThetaTPoly> = monics
        .par_iter()
        .zip(&powers)
        .map(|(a, ab)| Ok(chi_t(a).pow(alpha as u64).mul(&den.div_exact(ab)?.to_theta_t())))
        .collect::<Result<_>>()?;
    let num = parts.iter().fold(ThetaTPoly::zero(field), |acc, x| acc.add(x));
    Ok(PartialLValue { alpha, beta, n, num, den })
}

impl PartialLValue {
    pub fn field(&self) -> &Field {
        self.den.field()
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn value_eq(&self, other: &PartialLValue) -> bool {
        self.num.mul(&other.den.to_theta_t()) == other.num.mul(&self.den.to_theta_t())
    }

    pub fn neg(&self) -> PartialLValue {
        PartialLValue { num: self.num.neg(), ..self.clone() }
    }

    pub fn pow(&self, k: u32) -> PartialLValue {
        PartialLValue {
            num: self.num.pow(k as u64),
            den: self.den.pow(k as u64),
            ..self.clone()
        }
    }

    /// Divides out the monic gcd of `den` and every `t`-coefficient of `num`.
    pub fn reduced(&self) -> Result<PartialLValue> {
        let f = self.field();
        if self.num.is_zero() {
            return Ok(PartialLValue { den: APoly::one(f), ..self.clone() });
        }
        let cols = self.num.t_coefficients();
        let g = cols.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        let cols = cols.iter().map(|c| c.div_exact(&g)).collect::<Result<Vec<_>>>()?;
        // keep the denominator monic
        let lead = f.inv(self.den.div_exact(&g)?.leading()).expect("nonzero leading coefficient");
        let den = self.den.div_exact(&g)?.scale(lead);
        let num = ThetaTPoly::from_t_coefficients(f, &cols).scale(lead);
        Ok(PartialLValue { num, den, ..self.clone() })
    }
}

/// With `Σ'` over all nonzero `a ∈ A(n)` (so `Σ' = -Σ_{monic}`), checks
/// `Σ' χ_t(a)^l / a^l = (-1)^{l+1} (Σ' χ_t(a)/a)^l`.
pub fn check_lvals(field: &Field, l: u32, n: usize) -> Result<bool> {
    check_l(field, l)?;
    let lhs = pellarin_partial(field, l, l, n)?.neg();
    let mut rhs = pellarin_partial(field, 1, 1, n)?.neg().pow(l);
    if l.is_multiple_of(2) {
        rhs = rhs.neg();
    }
    Ok(lhs.value_eq(&rhs))
}

/// `Σ_{monic} χ_t(a)^l / a^l = (Σ_{monic} χ_t(a)/a)^l`.
pub fn check_lvals_monic(field: &Field, l: u32, n: usize) -> Result<bool> {
    check_l(field, l)?;
    let lhs = pellarin_partial(field, l, l, n)?;
    let rhs = pellarin_partial(field, 1, 1, n)?.pow(l);
    Ok(lhs.value_eq(&rhs))
}

/// For `n = 1..=max_n`, the size `deg_θ(num) - deg(den)` of the increment
/// `L_{n+1} - L_n` (the degree-`n` terms); decreasing values mean the
/// partial sums settle `1/θ`-adically.
pub fn stabilization_report(field: &Field, alpha: u32, beta: u32, max_n: usize) -> Result<Vec<(usize, i64)>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let lo = pellarin_partial(field, alpha, beta, n)?;
        let hi = pellarin_partial(field, alpha, beta, n + 1)?;
        let diff = PartialLValue {
            num: hi.num.sub(&lo.num.mul(&hi.den.div_exact(&lo.den)?.to_theta_t())),
            ..hi
        }
        .reduced()?;
        let size = match diff.num.degree_theta() {
            Some(d) => d as i64 - diff.den.degree().unwrap_or(0) as i64,
            None => i64::MIN,
        };
        out.push((n, size));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::all_below;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fields() -> Vec<Field> {
        vec![
            Field::prime(2).unwrap(),
            Field::prime(3).unwrap(),
            Field::new(2, 2).unwrap(),
            Field::prime(5).unwrap(),
        ]
    }

    #[test]
    fn lemma1_holds() {
        for f in fields() {
            assert!(lemma1_check(&f), "{f:?}");
        }
    }

    #[test]
    fn lemma1_at_x_equals_y() {
        // both sides of the cleared identity agree on the diagonal X = Y
        for f in fields() {
            let (d, cof) = y_denominators(&f);
            let diag: ThetaTPoly = ThetaTPoly::from_terms(
                &f,
                lemma1_numerator(&f, &d, &cof).terms().iter().map(|&((i, j), c)| ((0, i + j), c)),
            );
            assert_eq!(diag, d, "{f:?}");
        }
    }

    #[test]
    fn lemma2_in_and_out_of_range() {
        for f in fields() {
            for l in 1..=f.q() {
                assert!(lemma2_check(&f, l).unwrap(), "{f:?} l={l}");
            }
            assert!(lemma2_check(&f, f.q() + 1).is_err());
        }
        // outside the range the identity is not claimed; at q = 2, l = 3 it fails
        assert!(!lemma2_identity(&Field::prime(2).unwrap(), 3));
    }

    #[test]
    fn goss_degenerate_holds() {
        for f in fields() {
            for l in 1..=f.q() {
                assert!(goss_degenerate_check(&f, l).unwrap(), "{f:?} l={l}");
            }
        }
    }

    #[test]
    fn moore_matches_enumeration() {
        let base = Field::prime(2).unwrap();
        let ext = Field::new(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let w: Vec<Fq> = (0..2).map(|_| ext.from_index(rng.gen_range(0..8))).collect();
            let dependent = base.elements().flat_map(|a| base.elements().map(move |b| (a, b))).any(|(a, b)| {
                !(a.is_zero() && b.is_zero()) && {
                    let (a, b) = (ext.subfield(2).unwrap()[a.index() as usize], ext.subfield(2).unwrap()[b.index() as usize]);
                    ext.add(ext.mul(a, w[0]), ext.mul(b, w[1])).is_zero()
                }
            });
            assert_eq!(moore_determinant(&ext, 2, &w).is_zero(), dependent);
        }
    }

    #[test]
    fn lemma3_n1_is_minus_ratio_power() {
        let base = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for l in 1..=3 {
            let inst = BruteForceInstance::random(&base, 4, 1, l, &mut rng).unwrap();
            let ext = inst.ext();
            let r = ext.div(inst.v()[0], inst.w()[0]).unwrap();
            let expect = ext.neg(ext.pow(r, l as u64));
            let out = lemma3_bruteforce(&inst);
            assert_eq!(out.lhs, ext.digits(expect));
            assert!(out.holds);
        }
    }

    #[test]
    fn lemma3_random_instances() {
        let base = Field::prime(3).unwrap();
        assert!(lemma3_trials(&base, 4, 2, 2, 20, 7).unwrap().is_empty());
        let b4 = Field::new(2, 2).unwrap();
        assert!(lemma3_trials(&b4, 4, 3, 3, 5, 1).unwrap().is_empty());
    }

    #[test]
    fn lemma3_rejects_dependent_w() {
        let ext = Field::new(3, 4).unwrap();
        let w = ext.from_index(5);
        let two_w = ext.add(w, w);
        assert!(matches!(
            BruteForceInstance::new(&ext, 3, vec![w, w], vec![w, two_w], 1),
            Err(Error::DependentDenominators)
        ));
    }

    #[test]
    fn partial_l_examples() {
        let f = Field::prime(3).unwrap();
        let one = pellarin_partial(&f, 1, 1, 1).unwrap();
        assert_eq!(one.num, ThetaTPoly::one(&f));
        assert_eq!(one.den, APoly::one(&f));
        // (θ^q - t)/(θ^q - θ)
        let two = pellarin_partial(&f, 1, 1, 2).unwrap();
        let expect = PartialLValue {
            num: ThetaTPoly::theta(&f).pow(3).sub(&ThetaTPoly::t(&f)),
            den: APoly::theta(&f).pow(3).sub(&APoly::theta(&f)),
            ..two.clone()
        };
        assert!(two.value_eq(&expect));
        let r = two.reduced().unwrap();
        assert!(r.value_eq(&two));
        assert!(r.den.is_monic());
    }

    #[test]
    fn partial_l_squares_at_q2() {
        let f = Field::prime(2).unwrap();
        let lhs = pellarin_partial(&f, 2, 2, 3).unwrap().reduced().unwrap();
        let rhs = pellarin_partial(&f, 1, 1, 3).unwrap().pow(2).reduced().unwrap();
        assert_eq!(lhs.num, rhs.num);
        assert_eq!(lhs.den, rhs.den);
    }

    /// `Σ'` summed literally over every nonzero `a` of degree `< n`.
    fn all_nonzero_sum(f: &Field, l: u32, n: usize) -> PartialLValue {
        let nonzero: Vec<APoly> = all_below(f, n).into_iter().filter(|a| !a.is_zero()).collect();
        let den = nonzero.iter().fold(APoly::one(f), |acc, a| acc.mul(&a.pow(l as u64)));
        let num = nonzero.iter().fold(ThetaTPoly::zero(f), |acc, a| {
            acc.add(&chi_t(a).pow(l as u64).mul(&den.div_exact(&a.pow(l as u64)).unwrap().to_theta_t()))
        });
        PartialLValue { alpha: l, beta: l, n, num, den }
    }

    #[test]
    fn primed_sum_is_minus_monic_sum() {
        for p in [2, 3] {
            let f = Field::prime(p).unwrap();
            for l in 1..=p {
                let lit = all_nonzero_sum(&f, l, 2);
                assert!(lit.value_eq(&pellarin_partial(&f, l, l, 2).unwrap().neg()));
            }
        }
    }

    #[test]
    fn lvals_small() {
        let f3 = Field::prime(3).unwrap();
        assert!(check_lvals(&f3, 2, 3).unwrap());
        assert!(check_lvals_monic(&f3, 2, 3).unwrap());
        let f2 = Field::prime(2).unwrap();
        assert!(check_lvals(&f2, 2, 4).unwrap());
        for l in 1..=3 {
            assert!(check_lvals(&f3, l, 1).unwrap());
        }
        assert!(check_lvals(&f3, 4, 2).is_err());
    }

    #[test]
    fn stabilization_increments_shrink() {
        let f = Field::prime(2).unwrap();
        let rep = stabilization_report(&f, 1, 1, 4).unwrap();
        assert_eq!(rep.len(), 4);
        assert!(rep.windows(2).all(|w| w[1].1 < w[0].1), "{rep:?}");
    }
}
