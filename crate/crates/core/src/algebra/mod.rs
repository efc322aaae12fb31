//! Scalars and polynomial rings: `F_q`, `A = F_q[θ]`, `F_q[θ, t]`, and the
//! small combinatorial helpers that go with them.

pub mod apoly;
pub mod bipoly;
pub mod field;

pub use apoly::{all_below, chi_t, enumerate_monic, monic_below, APoly};
pub use bipoly::{Exp, ThetaTPoly};
pub use field::{Field, FieldSpec, Fq};

/// `τ^k` on coefficients: `θ^i t^j -> θ^{i q^k} t^j`.
pub fn tau_coeff(c: &ThetaTPoly, k: u32) -> ThetaTPoly {
    c.tau(k)
}

/// `C(n, i) mod p` by Lucas' theorem on base-`p` digits.
pub fn lucas_binom(mut n: u64, mut i: u64, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1u64;
    while i > 0 || n > 0 {
        let (nd, id) = (n % p, i % p);
        if id > nd {
            return 0;
        }
        acc = acc * small_binom_mod(nd, id, p) % p;
        n /= p;
        i /= p;
    }
    acc as u32
}

fn small_binom_mod(n: u64, k: u64, p: u64) -> u64 {
    // n < p, so every factor below is a unit mod p.
    let mut num = 1u64;
    let mut den = 1u64;
    for r in 0..k {
        num = num * ((n - r) % p) % p;
        den = den * ((r + 1) % p) % p;
    }
    let mut inv = 1u64;
    let mut b = den;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    num * inv % p
}
