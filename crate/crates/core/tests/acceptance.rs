//! Acceptance suite: nine exact criteria, each under a wall-clock limit.
//! Runs sequentially (no libtest harness) so timings are not contended,
//! prints one PASS/FAIL line per criterion and exits non-zero on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use drinfeld_core::algebra::lucas_binom;
use drinfeld_core::forms::{self, bracket, FormCatalog};
use drinfeld_core::identities::{
    check_lvals, check_lvals_monic, goss_degenerate_check, lemma1_check, lemma2_check, lemma3_trials,
};
use drinfeld_core::shadowed::{d2_approx_bound, enumerate_shadowed, g1k_shadowed, ShadowedPartition};
use drinfeld_core::taurec::{apply_operator, g_sequence, operator_l1, operator_l2, sym_det_holds, TauSequence};
use drinfeld_core::{Field, ThetaTPoly};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn prime(p: u32) -> Field {
    Field::prime(p).unwrap()
}

/// F_2, F_3, F_4, F_5.
fn small_fields() -> Vec<Field> {
    vec![prime(2), prime(3), Field::new(2, 2).unwrap(), prime(5)]
}

fn err(e: drinfeld_core::Error) -> String {
    e.to_string()
}

fn golden_expansions() -> Outcome {
    let mut worst = Duration::ZERO;
    for p in [2u32, 3, 5] {
        let start = Instant::now();
        let f = prime(p);
        let q = p as usize;
        let prec = 2 * q * q;
        let cat = FormCatalog::new(&f, prec).map_err(err)?;
        let g = cat.g().map_err(err)?;
        let h = cat.h().map_err(err)?;
        let delta = cat.delta().map_err(err)?;
        ensure(g.prec() == prec && h.prec() == prec && delta.prec() == prec, || format!("q={q}: precision lost"))?;
        ensure(g.coeff(0) == Some(ThetaTPoly::one(&f)), || format!("q={q}: g(0) != 1"))?;
        for j in 1..q - 1 {
            ensure(g.coeff(j).is_some_and(|c| c.is_zero()), || format!("q={q}: g({j}) != 0"))?;
        }
        ensure(g.coeff(q - 1) == Some(bracket(&f, 1).neg()), || format!("q={q}: g(q-1) != -(θ^q-θ)"))?;
        ensure(h.valuation() == 1 && h.coeff(1) == Some(ThetaTPoly::one(&f)), || format!("q={q}: h != u + …"))?;
        let h_pow = h.pow(q as u64 - 1).map_err(err)?.truncate(prec);
        ensure(delta.add(&h_pow).map_err(err)?.is_zero(), || format!("q={q}: Δ + h^(q-1) != 0"))?;
        ensure(
            delta.valuation() == q - 1 && delta.coeff(q - 1) == Some(ThetaTPoly::one(&f).neg()),
            || format!("q={q}: Δ != -u^(q-1) + …"),
        )?;
        let took = start.elapsed();
        ensure(took < Duration::from_secs(5), || format!("q={q} took {took:?}"))?;
        worst = worst.max(took);
    }
    Ok(format!("q in {{2,3,5}}, prec 2q^2, slowest q {worst:.2?}"))
}

fn d2_cross_validation() -> Outcome {
    let mut notes = Vec::new();
    for p in [2u32, 3] {
        let f = prime(p);
        let q = p as usize;
        let second = (q - 1) * (q * q - q + 1);
        let prec = (d2_approx_bound(p, 4) + 1).max(second + 1);
        let cat = FormCatalog::new(&f, prec).map_err(err)?;
        let d2 = cat.d2().map_err(err)?;
        for k in 1..=4 {
            let bound = d2_approx_bound(p, k);
            let approx = g1k_shadowed(&cat, k).map_err(err)?.neg();
            ensure(d2.truncate(bound) == approx.truncate(bound), || {
                format!("q={q} k={k}: disagree below u^{bound} (first at {:?})", d2.first_difference(&approx))
            })?;
        }
        let theta_minus_t = ThetaTPoly::theta(&f).sub(&ThetaTPoly::t(&f));
        ensure(d2.coeff(0) == Some(ThetaTPoly::one(&f)), || format!("q={q}: d2(0) != 1"))?;
        ensure(d2.coeff(q - 1) == Some(theta_minus_t.clone()), || format!("q={q}: d2(q-1) != θ - t"))?;
        ensure(d2.coeff(second) == Some(theta_minus_t), || format!("q={q}: d2({second}) != θ - t"))?;
        notes.push(format!("q={q} prec {prec}"));
    }
    Ok(notes.join(", "))
}

fn recurrence_annihilation() -> Outcome {
    let mut notes = Vec::new();
    for p in [2u32, 3] {
        let f = prime(p);
        let prec = (p * p * p) as usize;
        let cat = FormCatalog::new(&f, prec).map_err(err)?;
        let l1 = operator_l1(&cat).map_err(err)?;
        let l2 = operator_l2(&cat).map_err(err)?;
        let g1 = g_sequence(&cat, 1, 5).map_err(err)?;
        let g2 = g_sequence(&cat, 2, 5).map_err(err)?;
        let cases: [(&str, &_, TauSequence); 3] = [
            ("L1 d2", &l1, TauSequence::constant(cat.d2().map_err(err)?, 3)),
            ("L1 G_1k", &l1, g1),
            ("L2 -G_1k^2", &l2, g2),
        ];
        for (label, op, seq) in cases {
            ensure(seq.entries().iter().skip(1).all(|e| !e.is_zero()), || format!("q={p} {label}: trivial input"))?;
            let out = apply_operator(op, &seq).map_err(err)?;
            ensure(out.min_prec() >= Some(prec), || format!("q={p} {label}: precision fell to {:?}", out.min_prec()))?;
            ensure(out.is_zero(), || {
                let bad: Vec<usize> = (out.start()..out.end()).filter(|&k| !out.get(k).unwrap().is_zero()).collect();
                format!("q={p} {label}: nonzero at k = {bad:?}")
            })?;
        }
        notes.push(format!("q={p} prec {prec}"));
    }
    Ok(notes.join(", "))
}

fn finite_avatars() -> Outcome {
    let mut instances = 0;
    for (qi, f) in small_fields().into_iter().take(3).enumerate() {
        for n in 1..=3usize {
            for l in 1..=f.q() {
                let seed = 1000 * qi as u64 + 10 * n as u64 + l as u64;
                let failed = lemma3_trials(&f, 4, n, l, 100, seed).map_err(err)?;
                ensure(failed.is_empty(), || format!("lemma3 q={} n={n} l={l}: instances {failed:?} fail", f.q()))?;
                instances += 100;
            }
        }
    }
    for p in [2u32, 3] {
        let f = prime(p);
        for n in 1..=4 {
            for l in 1..=p {
                ensure(check_lvals(&f, l, n).map_err(err)?, || format!("lvals q={p} l={l} n={n}"))?;
                ensure(check_lvals_monic(&f, l, n).map_err(err)?, || format!("monic lvals q={p} l={l} n={n}"))?;
            }
        }
    }
    Ok(format!("{instances} brute-force instances, lvals n<=4"))
}

fn a_expansion_powers() -> Outcome {
    for p in [2u32, 3, 5] {
        let f = prime(p);
        let prec = (p * p * p) as usize;
        let cat = FormCatalog::new(&f, prec).map_err(err)?;
        for l in 1..=p {
            let r = forms::check_ee_power(&cat, l).map_err(err)?;
            ensure(r.equal && r.prec == prec, || format!("EE^{l} q={p}: {r:?}"))?;
        }
    }
    for (p, prec) in [(2u32, 64usize), (3, 81)] {
        let f = prime(p);
        let cat = FormCatalog::new(&f, prec).map_err(err)?;
        for l in 1..=p {
            for nu in 1..=3 {
                let r = forms::check_f_power(&cat, l, nu).map_err(err)?;
                ensure(r.equal, || format!("q={p}: {r:?}"))?;
            }
            for r in forms::check_f_closed_forms(&cat, l).map_err(err)? {
                ensure(r.equal, || format!("q={p}: {r:?}"))?;
            }
        }
    }
    Ok("EE^l at prec q^3 for q in {2,3,5}; f_(1,ν)^l, ν<=3".into())
}

fn sym_power_determinant() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for p in [2u32, 3, 5] {
        let f = prime(p);
        for l in 1..=4 {
            for trial in 0..50 {
                let v: Vec<ThetaTPoly> = (0..4).map(|_| ThetaTPoly::random(&f, &mut rng, 2, 1)).collect();
                ensure(sym_det_holds(&v[0], &v[1], &v[2], &v[3], l), || format!("q={p} l={l} trial {trial}"))?;
            }
        }
    }
    Ok("600 random matrices".into())
}

fn pascal_mod(n: u64, p: u32) -> Vec<u32> {
    let mut row = vec![1u32];
    for _ in 0..n {
        let mut next = vec![1u32; row.len() + 1];
        for i in 1..row.len() {
            next[i] = (row[i - 1] + row[i]) % p;
        }
        row = next;
    }
    row
}

fn lemma_suite() -> Outcome {
    for f in small_fields() {
        let q = f.q();
        ensure(lemma1_check(&f), || format!("lemma1 q={q}"))?;
        for l in 1..=q {
            ensure(lemma2_check(&f, l).map_err(err)?, || format!("lemma2 q={q} l={l}"))?;
            ensure(goss_degenerate_check(&f, l).map_err(err)?, || format!("goss q={q} l={l}"))?;
        }
    }
    for p in [2u32, 3, 5, 7] {
        for n in 0..=64u64 {
            let row = pascal_mod(n, p);
            for i in 0..=n {
                ensure(lucas_binom(n, i, p) == row[i as usize], || format!("C({n},{i}) mod {p}"))?;
            }
        }
    }
    Ok("q in {2,3,4,5}; Lucas vs Pascal n<=64".into())
}

/// Renders every report with its full content, so two runs can be compared byte for byte.
fn experiment_bytes() -> Result<(String, String), String> {
    let mut out = String::new();
    let mut summary = Vec::new();
    for (p, prec) in [(2u32, 128usize), (3, 81)] {
        let cat = FormCatalog::new(&prime(p), prec).map_err(err)?;
        let r = forms::resolve_recursive(&cat, 3).map_err(err)?;
        out.push_str(&format!("{r:?}\n"));
        let m: Vec<_> = r.matching().iter().map(|c| format!("{:?}/{:?}", c.inner, c.bracket)).collect();
        summary.push(format!("q={p} ν=3 matches {m:?}"));
        let mut equal = Vec::new();
        for s in 1..=p {
            let c = forms::conjecture_fs(&cat, s).map_err(err)?;
            out.push_str(&format!("{c:?}\n"));
            equal.push(c.comparison.equal);
        }
        summary.push(format!("q={p} f_s d2 equal for s=1..q: {equal:?}"));
    }
    let failed = lemma3_trials(&prime(3), 4, 2, 2, 50, 7).map_err(err)?;
    out.push_str(&format!("{failed:?}\n"));
    Ok((out, summary.join("; ")))
}

fn reproducible_experiments() -> Outcome {
    let (a, summary) = experiment_bytes()?;
    let (b, _) = experiment_bytes()?;
    ensure(a == b, || "two runs produced different bytes".into())?;
    Ok(summary)
}

fn fib(n: usize) -> usize {
    let (mut a, mut b) = (1usize, 1usize);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

fn combinatorics() -> Outcome {
    for n in 0..=12 {
        let all = enumerate_shadowed(2, n);
        ensure(all.len() == fib(n), || format!("|P_2({n})| = {} != {}", all.len(), fib(n)))?;
        ensure(all.iter().all(ShadowedPartition::is_valid), || format!("invalid tuple in P_2({n})"))?;
        for r in [1, 3] {
            ensure(enumerate_shadowed(r, n).iter().all(ShadowedPartition::is_valid), || format!("P_{r}({n})"))?;
        }
    }
    Ok("n <= 12".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("golden expansions", 15, golden_expansions),
        ("d2 cross-validation", 30, d2_cross_validation),
        ("recurrence annihilation", 60, recurrence_annihilation),
        ("finite avatars", 60, finite_avatars),
        ("A-expansion powers", 120, a_expansion_powers),
        ("symmetric-power determinant", 10, sym_power_determinant),
        ("lemma suite", 10, lemma_suite),
        ("reproducible experiments", 600, reproducible_experiments),
        ("combinatorics", 5, combinatorics),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|note| {
            if took < Duration::from_secs(*limit) {
                Ok(note)
            } else {
                Err(format!("took {took:.2?}, limit {limit}s"))
            }
        });
        match outcome {
            Ok(note) => println!("criterion {}: PASS  {name} ({took:.2?}; {note})", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL  {name} ({took:.2?}; {why})", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
