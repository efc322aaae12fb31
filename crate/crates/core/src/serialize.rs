//! Stable JSON and TSV encodings.
//!
//! Polynomial: `{"p":…, "e":…, "monomials":[[i, j, [c_0, …, c_{e-1}]], …]}`,
//! monomials sorted by `(i, j)`, field elements as little-endian base-`p`
//! digit vectors. Series: `{"prec": N, "terms": [[n, <poly>], …]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Field, ThetaTPoly};
use crate::error::{Error, Result};
use crate::identities::PartialLValue;
use crate::useries::USeries;

#[derive(Serialize, Deserialize)]
struct PolyJson {
    p: u32,
    e: u32,
    monomials: Vec<(u32, u32, Vec<u32>)>,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    prec: usize,
    terms: Vec<(usize, PolyJson)>,
}

fn poly_json(x: &ThetaTPoly) -> PolyJson {
    let f = x.field();
    PolyJson {
        p: f.p(),
        e: f.e(),
        monomials: x.terms().iter().map(|&((i, j), c)| (i, j, f.digits(c))).collect(),
    }
}

fn poly_from_json(field: &Field, pj: PolyJson) -> Result<ThetaTPoly> {
    if (pj.p, pj.e) != (field.p(), field.e()) {
        return Err(Error::FieldMismatch(format!(
            "polynomial over F_{}^{} read into {field:?}",
            pj.p, pj.e
        )));
    }
    let terms = pj
        .monomials
        .into_iter()
        .map(|(i, j, d)| Ok(((i, j), field.from_digits(&d)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ThetaTPoly::from_terms(field, terms))
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn poly_to_value(x: &ThetaTPoly) -> Value {
    serde_json::to_value(poly_json(x)).expect("plain data serializes")
}

pub fn poly_to_json(x: &ThetaTPoly) -> String {
    serde_json::to_string(&poly_json(x)).expect("plain data serializes")
}

pub fn poly_from_json_str(field: &Field, s: &str) -> Result<ThetaTPoly> {
    poly_from_json(field, serde_json::from_str(s).map_err(parse_err)?)
}

fn series_json(s: &USeries) -> SeriesJson {
    SeriesJson {
        prec: s.prec(),
        terms: s.terms().iter().map(|(n, c)| (*n, poly_json(c))).collect(),
    }
}

pub fn series_to_value(s: &USeries) -> Value {
    serde_json::to_value(series_json(s)).expect("plain data serializes")
}

pub fn series_to_json(s: &USeries) -> String {
    serde_json::to_string(&series_json(s)).expect("plain data serializes")
}

pub fn series_from_json_str(field: &Field, s: &str) -> Result<USeries> {
    let sj: SeriesJson = serde_json::from_str(s).map_err(parse_err)?;
    let terms = sj
        .terms
        .into_iter()
        .map(|(n, pj)| Ok((n, poly_from_json(field, pj)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(USeries::from_terms(field, sj.prec, terms))
}

/// One row per monomial: `n  i  j  d_0,…,d_{e-1}`, tab separated.
pub fn series_to_tsv(s: &USeries) -> String {
    let f = s.field();
    let mut out = String::from("n\ti\tj\tdigits\n");
    for (n, c) in s.terms() {
        for &((i, j), x) in c.terms() {
            let digits: Vec<String> = f.digits(x).iter().map(u32::to_string).collect();
            out.push_str(&format!("{n}\t{i}\t{j}\t{}\n", digits.join(",")));
        }
    }
    out
}

pub fn series_from_tsv(field: &Field, prec: usize, s: &str) -> Result<USeries> {
    let mut terms: Vec<(usize, ThetaTPoly)> = Vec::new();
    for line in s.lines().skip(1).filter(|l| !l.is_empty()) {
        let cols: Vec<&str> = line.split('\t').collect();
        let [n, i, j, d] = cols.as_slice() else {
            return Err(Error::Parse(format!("expected 4 columns: {line:?}")));
        };
        let num = |x: &str| x.parse::<u32>().map_err(|e| Error::Parse(e.to_string()));
        let digits = d.split(',').map(num).collect::<Result<Vec<_>>>()?;
        let c = field.from_digits(&digits)?;
        let mono = ThetaTPoly::monomial(field, c, num(i)?, num(j)?);
        terms.push((num(n)? as usize, mono));
    }
    Ok(USeries::from_terms(field, prec, terms))
}

pub fn lvalue_to_value(l: &PartialLValue) -> Value {
    serde_json::json!({
        "alpha": l.alpha,
        "beta": l.beta,
        "n": l.n,
        "num": poly_to_value(&l.num),
        "den": poly_to_value(&l.den.to_theta_t()),
    })
}
