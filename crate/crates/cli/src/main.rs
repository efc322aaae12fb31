//! `drinfeld`: expansions, identity checks, experiments and partial
//! L-values from the command line.
//!
//! Exit codes: 0 success, 1 an identity check failed, 2 usage error,
//! 3 precision underflow or resource cap exceeded.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use drinfeld_core::forms::{self, FormCatalog};
use drinfeld_core::identities::{self, PartialLValue};
use drinfeld_core::serialize::{lvalue_to_value, series_to_tsv, series_to_value};
use drinfeld_core::shadowed::{self, d2_approx_bound};
use drinfeld_core::taurec::{self, TauSequence};
use drinfeld_core::{Error, Field, FieldSpec, ThetaTPoly, USeries};

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Exact u-expansions and identity checks over F_q[θ, t]")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// Extension degree, q = p^e.
    #[arg(long, global = true)]
    e: Option<u32>,
    /// Monic modulus for F_q over F_p, coefficients low to high, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// u-adic precision.
    #[arg(long, global = true, default_value_t = 32)]
    uprec: usize,
    /// Abort (exit 3) if an emitted coefficient has t-degree above this.
    #[arg(long, global = true)]
    tcap: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the u-expansion of a form.
    Expand {
        /// g, h, delta, E, d2, EE or f.
        #[arg(long)]
        form: String,
        /// Power l for f (integer, `q` or `q+N`).
        #[arg(long, default_value = "1")]
        l: String,
        /// Twist ν for f.
        #[arg(long, default_value_t = 1)]
        nu: u32,
    },
    /// Run an identity check; exit 1 if it fails.
    Check {
        /// e-power, f-power, f-closed, d2-approx, recurrence-l1, recurrence-l2,
        /// sym-det, lemma1, lemma2, lemma3, goss-degenerate, lvals.
        #[arg(long)]
        identity: String,
        /// Single l (integer, `q` or `q+N`); all of 1..=q when omitted.
        #[arg(long)]
        l: Option<String>,
        #[arg(long)]
        nu: Option<u32>,
        /// n for lemma3 and lvals, k for d2-approx, k_max for recurrences.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Extension degree m of F_{q^m} for lemma3 (raised to n if smaller).
        #[arg(long, default_value_t = 4)]
        m: u32,
    },
    /// Run an exploratory comparison; reports, never asserts.
    Experiment {
        /// conjecture-fs, resolve-recursive or ee-power-beyond-q.
        #[arg(long)]
        name: String,
        /// Range `a..b` (inclusive) or a single value.
        #[arg(long, default_value = "1..5")]
        s: String,
        #[arg(long, default_value_t = 3)]
        nu: u32,
        #[arg(long, default_value = "q+1")]
        l: String,
    },
    /// Exact partial sum of L(χ_t^α, β) over monic a with deg a < n.
    Lvalue {
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[arg(long, default_value_t = 1)]
        beta: u32,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Cancel common factors of numerator and denominator.
        #[arg(long)]
        reduce: bool,
    },
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::PrecisionUnderflow(_) | Error::NoConvergence(_) | Error::InexactDivision(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// A finished command: header fields, payload, TSV body, and whether every
/// asserted check passed.
struct Output {
    command: &'static str,
    params: Value,
    result: Value,
    tsv: String,
    passed: bool,
}

fn build_field(c: &Common) -> CliResult<Field> {
    let spec = match &c.modulus {
        Some(m) => {
            let spec = FieldSpec::with_modulus(c.p, m.clone())?;
            if c.e.is_some_and(|e| e != spec.e) {
                return Err(usage("--e disagrees with the degree of --modulus"));
            }
            spec
        }
        None => FieldSpec::new(c.p, c.e.unwrap_or(1))?,
    };
    Ok(Field::from_spec(spec))
}

/// `7`, `q`, `q+1`, `q-1`.
fn parse_l(s: &str, q: u32) -> CliResult<u32> {
    let s = s.trim();
    let bad = || usage(format!("cannot read l from {s:?}"));
    let v: i64 = if let Some(rest) = s.strip_prefix('q') {
        let off: i64 = match rest.chars().next() {
            None => 0,
            Some('+') => rest[1..].parse().map_err(|_| bad())?,
            Some('-') => -rest[1..].parse::<i64>().map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        q as i64 + off
    } else {
        s.parse().map_err(|_| bad())?
    };
    u32::try_from(v).ok().filter(|&v| v >= 1).ok_or_else(bad)
}

fn parse_range(s: &str) -> CliResult<Vec<u32>> {
    let bad = || usage(format!("cannot read range from {s:?}"));
    let num = |x: &str| x.trim().parse::<u32>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn max_t_degree(s: &USeries) -> u32 {
    s.terms().iter().filter_map(|(_, c)| c.degree_t()).max().unwrap_or(0)
}

fn enforce_tcap(cap: Option<u32>, degree: u32) -> CliResult<()> {
    match cap {
        Some(c) if degree > c => Err(Failure { code: 3, message: format!("t-degree {degree} exceeds --tcap {c}") }),
        _ => Ok(()),
    }
}

fn catalog(field: &Field, c: &Common) -> CliResult<FormCatalog> {
    Ok(FormCatalog::new(field, c.uprec)?)
}

fn cmd_expand(field: &Field, c: &Common, form: &str, l: &str, nu: u32) -> CliResult<Output> {
    let cat = catalog(field, c)?;
    let mut params = json!({ "form": form });
    let series = match form {
        "g" => cat.g()?.clone(),
        "h" => cat.h()?.clone(),
        "delta" => cat.delta()?.clone(),
        "E" => cat.false_e()?.clone(),
        "d2" => cat.d2()?.clone(),
        "EE" => cat.ee()?.clone(),
        "f" => {
            let l = parse_l(l, field.q())?;
            params = json!({ "form": form, "l": l, "nu": nu });
            cat.f_l_nu(l, nu)?
        }
        other => return Err(usage(format!("unknown form {other:?}"))),
    };
    enforce_tcap(c.tcap, max_t_degree(&series))?;
    Ok(Output {
        command: "expand",
        params,
        result: series_to_value(&series),
        tsv: series_to_tsv(&series),
        passed: true,
    })
}

struct CheckRow {
    identity: String,
    params: Value,
    pass: bool,
    witness: Value,
}

fn row(identity: &str, params: Value, pass: bool, witness: Value) -> CheckRow {
    CheckRow { identity: identity.to_string(), params, pass, witness }
}

fn l_values(l: &Option<String>, q: u32) -> CliResult<Vec<u32>> {
    match l {
        Some(s) => {
            let v = parse_l(s, q)?;
            if v > q {
                return Err(usage(format!("l = {v} outside 1..={q}; see `experiment`")));
            }
            Ok(vec![v])
        }
        None => Ok((1..=q).collect()),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    field: &Field,
    c: &Common,
    identity: &str,
    l: &Option<String>,
    nu: Option<u32>,
    n: Option<usize>,
    trials: usize,
    m: u32,
) -> CliResult<Output> {
    let q = field.q();
    let ls = l_values(l, q)?;
    let mut rows = Vec::new();
    let mut params = json!({ "identity": identity, "l": ls });
    match identity {
        "e-power" => {
            let cat = catalog(field, c)?;
            for &l in &ls {
                let r = forms::check_ee_power(&cat, l)?;
                rows.push(row(identity, json!({ "l": l }), r.equal, json!(r.first_difference)));
            }
        }
        "f-power" => {
            let cat = catalog(field, c)?;
            let nus: Vec<u32> = nu.map_or_else(|| vec![1, 2, 3], |v| vec![v]);
            params["nu"] = json!(nus);
            for &nu in &nus {
                for &l in &ls {
                    let r = forms::check_f_power(&cat, l, nu)?;
                    rows.push(row(identity, json!({ "l": l, "nu": nu }), r.equal, json!(r.first_difference)));
                }
            }
        }
        "f-closed" => {
            let cat = catalog(field, c)?;
            for &l in &ls {
                for r in forms::check_f_closed_forms(&cat, l)? {
                    rows.push(row(&r.label, json!({ "l": l }), r.equal, json!(r.first_difference)));
                }
            }
        }
        "d2-approx" => {
            let cat = catalog(field, c)?;
            let ks: Vec<usize> = match n {
                Some(k) => vec![k],
                None => (1..).take_while(|&k| d2_approx_bound(q, k) < c.uprec).collect(),
            };
            params["k"] = json!(ks);
            for k in ks {
                let r = shadowed::check_d2_approx(&cat, k)?;
                rows.push(row(identity, json!({ "k": k, "bound": r.bound }), r.holds, json!(r.valuation)));
            }
            let direct = cat.d2()?;
            let other = shadowed::d2_from_shadowed(&cat)?;
            let diff = direct.first_difference(&other);
            rows.push(row("d2 fixed point = -G_(1,k)", json!({}), diff.is_none(), json!(diff)));
        }
        "recurrence-l1" | "recurrence-l2" => {
            let cat = catalog(field, c)?;
            let k_max = n.unwrap_or(5);
            params["k_max"] = json!(k_max);
            let mut checks: Vec<(&str, TauSequence)> = Vec::new();
            let op = if identity == "recurrence-l1" {
                checks.push(("L1 d2", TauSequence::constant(cat.d2()?, 3)));
                checks.push(("L1 G_(1,k)", taurec::g_sequence(&cat, 1, k_max)?));
                taurec::operator_l1(&cat)?
            } else {
                if q < 2 {
                    return Err(usage("recurrence-l2 needs q >= 2"));
                }
                checks.push(("L2 -G_(1,k)^2", taurec::g_sequence(&cat, 2, k_max)?));
                taurec::operator_l2(&cat)?
            };
            for (label, seq) in checks {
                let out = taurec::apply_operator(&op, &seq)?;
                let nonzero: Vec<usize> = (out.start()..out.end())
                    .filter(|&k| !out.get(k).is_some_and(USeries::is_zero))
                    .collect();
                rows.push(row(label, json!({ "prec": out.min_prec() }), nonzero.is_empty(), json!(nonzero)));
            }
        }
        "sym-det" => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(c.seed);
            let ls: Vec<u32> = match l {
                Some(s) => vec![parse_l(s, q)?],
                None => (1..=4).collect(),
            };
            params["l"] = json!(ls);
            params["trials"] = json!(trials);
            for &l in &ls {
                let failures: Vec<usize> = (0..trials)
                    .filter(|_| {
                        let v: Vec<ThetaTPoly> = (0..4).map(|_| ThetaTPoly::random(field, &mut rng, 2, 2)).collect();
                        !taurec::sym_det_holds(&v[0], &v[1], &v[2], &v[3], l as usize)
                    })
                    .collect();
                rows.push(row(identity, json!({ "l": l }), failures.is_empty(), json!(failures)));
            }
        }
        "lemma1" => rows.push(row(identity, json!({}), identities::lemma1_check(field), Value::Null)),
        "lemma2" => {
            for &l in &ls {
                rows.push(row(identity, json!({ "l": l }), identities::lemma2_check(field, l)?, Value::Null));
            }
        }
        "goss-degenerate" => {
            for &l in &ls {
                rows.push(row(identity, json!({ "l": l }), identities::goss_degenerate_check(field, l)?, Value::Null));
            }
        }
        "lemma3" => {
            let ns: Vec<usize> = n.map_or_else(|| vec![1, 2, 3], |v| vec![v]);
            params["n"] = json!(ns);
            params["trials"] = json!(trials);
            params["m"] = json!(m);
            for &n in &ns {
                for &l in &ls {
                    let seed = c.seed ^ ((n as u64) << 32 | l as u64);
                    let failed = identities::lemma3_trials(field, m, n, l, trials, seed)?;
                    rows.push(row(identity, json!({ "n": n, "l": l, "seed": seed }), failed.is_empty(), json!(failed)));
                }
            }
        }
        "lvals" => {
            let ns: Vec<usize> = n.map_or_else(|| vec![1, 2, 3], |v| vec![v]);
            params["n"] = json!(ns);
            for &n in &ns {
                for &l in &ls {
                    let p = json!({ "n": n, "l": l });
                    rows.push(row("lvals", p.clone(), identities::check_lvals(field, l, n)?, Value::Null));
                    rows.push(row("lvals-monic", p, identities::check_lvals_monic(field, l, n)?, Value::Null));
                }
            }
        }
        other => return Err(usage(format!("unknown identity {other:?}"))),
    }
    let passed = rows.iter().all(|r| r.pass);
    let mut tsv = String::from("identity\tparams\tpass\twitness\n");
    for r in &rows {
        let _ = writeln!(tsv, "{}\t{}\t{}\t{}", r.identity, r.params, r.pass, r.witness);
    }
    let result = json!({
        "passed": passed,
        "checks": rows
            .iter()
            .map(|r| json!({ "identity": r.identity, "params": r.params, "pass": r.pass, "witness": r.witness }))
            .collect::<Vec<_>>(),
    });
    Ok(Output { command: "check", params, result, tsv, passed })
}

fn cmd_experiment(field: &Field, c: &Common, name: &str, s: &str, nu: u32, l: &str) -> CliResult<Output> {
    let cat = catalog(field, c)?;
    let mut tsv = String::new();
    let (params, result) = match name {
        "conjecture-fs" => {
            let ss = parse_range(s)?;
            tsv.push_str("s\tequal\tfirst_difference\tspecialized_equal\n");
            let mut reports = Vec::new();
            for &s in &ss {
                let r = forms::conjecture_fs(&cat, s)?;
                let _ = writeln!(
                    tsv,
                    "{s}\t{}\t{}\t{}",
                    r.comparison.equal,
                    r.comparison.first_difference.map_or("-".into(), |d| d.to_string()),
                    r.specialized.equal
                );
                reports.push(r);
            }
            (json!({ "name": name, "s": ss }), json!(reports))
        }
        "resolve-recursive" => {
            let r = forms::resolve_recursive(&cat, nu)?;
            tsv.push_str("inner\tbracket\texact_division\tmatches\tfirst_difference\n");
            for cand in &r.candidates {
                let _ = writeln!(
                    tsv,
                    "{:?}\t{:?}\t{}\t{}\t{}",
                    cand.inner,
                    cand.bracket,
                    cand.exact_division,
                    cand.matches,
                    cand.first_difference.map_or("-".into(), |d| d.to_string())
                );
            }
            (json!({ "name": name, "nu": nu }), json!(r))
        }
        "ee-power-beyond-q" => {
            let l = parse_l(l, field.q())?;
            let r = forms::check_ee_power(&cat, l)?;
            tsv.push_str("l\tequal\tfirst_difference\n");
            let _ = writeln!(tsv, "{l}\t{}\t{}", r.equal, r.first_difference.map_or("-".into(), |d| d.to_string()));
            (json!({ "name": name, "l": l }), json!(r))
        }
        other => return Err(usage(format!("unknown experiment {other:?}"))),
    };
    Ok(Output { command: "experiment", params, result, tsv, passed: true })
}

fn cmd_lvalue(field: &Field, c: &Common, alpha: u32, beta: u32, n: usize, reduce: bool) -> CliResult<Output> {
    let mut v: PartialLValue = identities::pellarin_partial(field, alpha, beta, n)?;
    if reduce {
        v = v.reduced()?;
    }
    enforce_tcap(c.tcap, v.num.degree_t().unwrap_or(0))?;
    let result = lvalue_to_value(&v);
    let mut tsv = String::from("part\ti\tj\tdigits\n");
    for (part, poly) in [("num", v.num.clone()), ("den", v.den.to_theta_t())] {
        for &((i, j), x) in poly.terms() {
            let digits: Vec<String> = field.digits(x).iter().map(u32::to_string).collect();
            let _ = writeln!(tsv, "{part}\t{i}\t{j}\t{}", digits.join(","));
        }
    }
    Ok(Output {
        command: "lvalue",
        params: json!({ "alpha": alpha, "beta": beta, "n": n, "reduce": reduce }),
        result,
        tsv,
        passed: true,
    })
}

fn header(field: &Field, c: &Common, out: &Output) -> Value {
    json!({
        "command": out.command,
        "p": field.p(),
        "e": field.e(),
        "modulus": field.spec().modulus,
        "uprec": c.uprec,
        "tcap": c.tcap,
        "seed": c.seed,
        "params": out.params,
    })
}

fn render(field: &Field, c: &Common, out: &Output) -> String {
    let head = header(field, c, out);
    match c.format {
        Format::Json => {
            let doc = json!({ "config": head, "result": out.result });
            serde_json::to_string(&doc).expect("json values serialize") + "\n"
        }
        Format::Tsv => {
            let mut s = String::new();
            if let Value::Object(map) = &head {
                for (k, v) in map {
                    let _ = writeln!(s, "# {k}\t{v}");
                }
            }
            s.push_str(&out.tsv);
            s
        }
    }
}

fn run(cli: &Cli) -> CliResult<bool> {
    let c = &cli.common;
    if c.uprec == 0 {
        return Err(Failure { code: 3, message: "--uprec must be at least 1".into() });
    }
    let field = build_field(c)?;
    let out = match &cli.command {
        Command::Expand { form, l, nu } => cmd_expand(&field, c, form, l, *nu)?,
        Command::Check { identity, l, nu, n, trials, m } => {
            cmd_check(&field, c, identity, l, *nu, *n, *trials, *m)?
        }
        Command::Experiment { name, s, nu, l } => cmd_experiment(&field, c, name, s, *nu, l)?,
        Command::Lvalue { alpha, beta, n, reduce } => cmd_lvalue(&field, c, *alpha, *beta, *n, *reduce)?,
    };
    let text = render(&field, c, &out);
    match &c.out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("cannot write {path}: {e}")))?,
        None => print!("{text}"),
    }
    Ok(out.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("drinfeld: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
