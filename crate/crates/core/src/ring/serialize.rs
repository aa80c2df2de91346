use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::gauss::{GaussKind, GaussSym};
use super::lattice::LatticeVector;
use super::laurent::LaurentPoly;
use super::ratfunc::{Binomial, RatFunc};
use super::scalar::{GaussPoly, SMono};
use crate::error::{Error, Result};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn gauss_poly_to_json(p: &GaussPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| {
                let g: Vec<Value> = m
                    .gauss
                    .iter()
                    .map(|(s, e)| {
                        json!({"kind": s.kind.name(), "t": s.residue, "n": s.modulus, "d": s.degree, "e": e})
                    })
                    .collect();
                json!({"c": c.to_string(), "q": m.q, "g": g})
            })
            .collect(),
    )
}

pub fn gauss_poly_from_json(v: &Value) -> Result<GaussPoly> {
    let arr = v.as_array().ok_or_else(|| perr("scalar terms must be an array"))?;
    let mut out = GaussPoly::zero();
    for t in arr {
        let c: BigRational = t["c"]
            .as_str()
            .ok_or_else(|| perr("missing coefficient"))?
            .parse()
            .map_err(|_| perr("bad rational coefficient"))?;
        let q = t["q"].as_i64().ok_or_else(|| perr("missing q exponent"))?;
        let mut term = GaussPoly::term(c, SMono::q_pow(q));
        for g in t["g"].as_array().ok_or_else(|| perr("missing gauss list"))? {
            let kind = match g["kind"].as_str() {
                Some("SL2") => GaussKind::Sl2,
                Some("SU3") => GaussKind::Su3,
                _ => return Err(perr("bad gauss kind")),
            };
            let get = |k: &str| g[k].as_i64().ok_or_else(|| perr(format!("missing gauss field {k}")));
            let sym = GaussSym::new(kind, get("t")?, get("n")? as u32, get("d")? as u32);
            for _ in 0..get("e")? {
                term = term.mul(&GaussPoly::gauss(sym));
            }
        }
        out = out.add(&term);
    }
    Ok(out)
}

pub fn laurent_to_json(p: &LaurentPoly) -> Value {
    let one = gauss_poly_to_json(&GaussPoly::one());
    let terms: Vec<Value> = p
        .terms()
        .map(|(e, c)| json!({"exp": e.coords(), "coeff": {"num": gauss_poly_to_json(c), "den": one.clone()}}))
        .collect();
    json!({"terms": terms})
}

pub fn laurent_from_json(v: &Value, rank: usize) -> Result<LaurentPoly> {
    let arr = v["terms"].as_array().ok_or_else(|| perr("missing terms"))?;
    let mut out = LaurentPoly::zero(rank);
    for t in arr {
        let exp: Vec<i64> = serde_json::from_value(t["exp"].clone()).map_err(|e| perr(e.to_string()))?;
        if exp.len() != rank {
            return Err(Error::RankMismatch { expected: rank, got: exp.len() });
        }
        let num = gauss_poly_from_json(&t["coeff"]["num"])?;
        let den = gauss_poly_from_json(&t["coeff"]["den"])?;
        let inv = den.unit_inverse().ok_or_else(|| perr("coefficient denominator must be a unit"))?;
        out = out.add(&LaurentPoly::monomial(LatticeVector(exp), num.mul(&inv)));
    }
    Ok(out)
}

pub fn ratfunc_to_json(f: &RatFunc) -> Value {
    let factors: Vec<Value> = f
        .den_factors()
        .iter()
        .map(|(b, m)| json!({"c": gauss_poly_to_json(&b.c), "v": b.v.coords(), "mult": m}))
        .collect();
    json!({"num": laurent_to_json(f.num()), "den": laurent_to_json(f.den_poly()), "den_factors": factors})
}

pub fn ratfunc_from_json(v: &Value, rank: usize) -> Result<RatFunc> {
    let num = laurent_from_json(&v["num"], rank)?;
    let den = laurent_from_json(&v["den"], rank)?;
    let mut factors = BTreeMap::new();
    for fct in v["den_factors"].as_array().ok_or_else(|| perr("missing den_factors"))? {
        let c = gauss_poly_from_json(&fct["c"])?;
        if c.as_signed_q_power().is_none() {
            return Err(perr("binomial constant must be ±q^k"));
        }
        let vv: Vec<i64> = serde_json::from_value(fct["v"].clone()).map_err(|e| perr(e.to_string()))?;
        if vv.len() != rank {
            return Err(Error::RankMismatch { expected: rank, got: vv.len() });
        }
        let v = LatticeVector(vv);
        if !v.is_lex_positive() {
            return Err(perr("binomial exponent must be lexicographically positive"));
        }
        let m = fct["mult"].as_u64().ok_or_else(|| perr("missing mult"))? as u32;
        *factors.entry(Binomial { c, v }).or_insert(0) += m;
    }
    RatFunc::from_parts(num, den, factors)
}

fn latex_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn latex_smono(m: &SMono) -> String {
    let mut s = String::new();
    match m.q {
        0 => {}
        1 => s.push('q'),
        k => s.push_str(&format!("q^{{{k}}}")),
    }
    for (g, e) in &m.gauss {
        let kind = match g.kind {
            GaussKind::Sl2 => "SL_2",
            GaussKind::Su3 => "SU_3",
        };
        let deg = if g.degree > 1 { format!("^{{({})}}", g.degree) } else { String::new() };
        s.push_str(&format!("\\mathfrak{{g}}_{{{kind}}}{deg}({})", g.residue));
        if *e > 1 {
            s.push_str(&format!("^{{{e}}}"));
        }
    }
    s
}

pub fn gauss_poly_latex(p: &GaussPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let body = latex_smono(m);
        if body.is_empty() {
            out.push_str(&latex_rational(&a));
        } else if a.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&latex_rational(&a));
            out.push_str(&body);
        }
    }
    out
}

fn latex_x(e: &LatticeVector) -> String {
    let mut s = String::new();
    for (i, &k) in e.coords().iter().enumerate() {
        match k {
            0 => {}
            1 => s.push_str(&format!("x_{{{}}}", i + 1)),
            k => s.push_str(&format!("x_{{{}}}^{{{}}}", i + 1, k)),
        }
    }
    s
}

pub fn laurent_latex(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (e, c) in p.terms() {
        let x = latex_x(e);
        let coeff = gauss_poly_latex(c);
        let term = if x.is_empty() {
            coeff
        } else if c.is_one() {
            x
        } else if c.len() == 1 {
            if coeff == "-1" {
                format!("-{x}")
            } else {
                format!("{coeff}{x}")
            }
        } else {
            format!("\\left({coeff}\\right){x}")
        };
        parts.push(term);
    }
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
                continue;
            }
            out.push_str(" + ");
        }
        out.push_str(p);
    }
    out
}

pub fn ratfunc_latex(f: &RatFunc) -> String {
    let num = laurent_latex(f.num());
    let mut den_parts = Vec::new();
    if !f.den_poly().is_one() {
        den_parts.push(format!("\\left({}\\right)", laurent_latex(f.den_poly())));
    }
    for (b, m) in f.den_factors() {
        let inner = laurent_latex(&b.to_poly());
        if *m > 1 {
            den_parts.push(format!("\\left({inner}\\right)^{{{m}}}"));
        } else {
            den_parts.push(format!("\\left({inner}\\right)"));
        }
    }
    if den_parts.is_empty() {
        num
    } else {
        format!("\\frac{{{}}}{{{}}}", num, den_parts.join(""))
    }
}

