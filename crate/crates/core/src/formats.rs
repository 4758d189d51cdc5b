//! JSON wire formats.
//!
//! Every type here is a plain serde mirror of a library value, with fallible
//! conversions in both directions. Rationals travel as `"a/b"` strings and all
//! indices are 0-based.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, parse_rational, vars, Coeff, NuSeries, Poly, QPoly, RatFunc, Scalar, Vars};
use crate::berezin::DiskSymbol;
use crate::error::{Error, Result};
use crate::fedosov::{FedosovInput, TwoForm};
use crate::gutt::LieAlgebraData;
use crate::moyal::{canonical_vars, ConstantPoisson};
use crate::polydiff::MultiDiffOp;

fn check_vars(names: &[String]) -> Result<Vars> {
    for (i, a) in names.iter().enumerate() {
        if a.is_empty() || names[..i].contains(a) {
            return Err(Error::Parse(format!("variable names must be nonempty and distinct, got `{a}`")));
        }
    }
    Ok(vars(names))
}

/// A coefficient: either a rational string or a rational function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Rational(String),
    Func(RatFuncJson),
}

impl From<&Scalar> for CoeffJson {
    fn from(s: &Scalar) -> Self {
        match s {
            Scalar::Rat(r) => CoeffJson::Rational(format_rational(r)),
            Scalar::Func(f) => CoeffJson::Func(f.into()),
        }
    }
}

impl TryFrom<&CoeffJson> for Scalar {
    type Error = Error;

    fn try_from(c: &CoeffJson) -> Result<Self> {
        match c {
            CoeffJson::Rational(s) => Ok(Scalar::Rat(parse_rational(s)?)),
            CoeffJson::Func(f) => Ok(Scalar::from_func(f.try_into()?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub exp: Vec<u32>,
}

/// `{"vars": [...], "terms": [{"coeff": ..., "exp": [...]}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl From<&Poly> for PolyJson {
    fn from(p: &Poly) -> Self {
        PolyJson {
            vars: p.vars().iter().cloned().collect(),
            terms: p.terms().iter().map(|(e, c)| TermJson { coeff: c.into(), exp: e.clone() }).collect(),
        }
    }
}

impl TryFrom<&PolyJson> for Poly {
    type Error = Error;

    fn try_from(p: &PolyJson) -> Result<Self> {
        let vs = check_vars(&p.vars)?;
        let mut out = Poly::zero(vs.clone());
        for t in &p.terms {
            if t.exp.len() != vs.len() {
                return Err(Error::DimensionMismatch { expected: vs.len(), found: t.exp.len() });
            }
            out.add_term(t.exp.clone(), Scalar::try_from(&t.coeff)?);
        }
        Ok(out)
    }
}

fn qpoly_json(p: &QPoly) -> PolyJson {
    PolyJson {
        vars: p.vars().iter().cloned().collect(),
        terms: p
            .terms()
            .iter()
            .map(|(e, c)| TermJson { coeff: CoeffJson::Rational(format_rational(c)), exp: e.clone() })
            .collect(),
    }
}

fn qpoly_from(p: &PolyJson) -> Result<QPoly> {
    let vs = check_vars(&p.vars)?;
    let mut out = QPoly::zero(vs.clone());
    for t in &p.terms {
        if t.exp.len() != vs.len() {
            return Err(Error::DimensionMismatch { expected: vs.len(), found: t.exp.len() });
        }
        match &t.coeff {
            CoeffJson::Rational(s) => out.add_term(t.exp.clone(), parse_rational(s)?),
            CoeffJson::Func(_) => return Err(Error::Parse("rational-function coefficients must be rational".into())),
        }
    }
    Ok(out)
}

/// `{"num": Poly, "den": Poly}` over the parameter names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatFuncJson {
    pub num: PolyJson,
    pub den: PolyJson,
}

impl From<&RatFunc> for RatFuncJson {
    fn from(f: &RatFunc) -> Self {
        RatFuncJson { num: qpoly_json(f.numer()), den: qpoly_json(f.denom()) }
    }
}

impl TryFrom<&RatFuncJson> for RatFunc {
    type Error = Error;

    fn try_from(f: &RatFuncJson) -> Result<Self> {
        RatFunc::new(qpoly_from(&f.num)?, qpoly_from(&f.den)?)
    }
}

/// `{"order": N, "coeffs": [Poly, ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NuSeriesJson {
    pub order: usize,
    pub coeffs: Vec<PolyJson>,
}

impl From<&NuSeries> for NuSeriesJson {
    fn from(s: &NuSeries) -> Self {
        NuSeriesJson { order: s.order(), coeffs: s.coeffs().iter().map(PolyJson::from).collect() }
    }
}

impl TryFrom<&NuSeriesJson> for NuSeries {
    type Error = Error;

    fn try_from(s: &NuSeriesJson) -> Result<Self> {
        if s.coeffs.len() != s.order + 1 {
            return Err(Error::DimensionMismatch { expected: s.order + 1, found: s.coeffs.len() });
        }
        let coeffs = s.coeffs.iter().map(Poly::try_from).collect::<Result<Vec<_>>>()?;
        let vs = coeffs[0].vars().clone();
        if coeffs.iter().any(|c| *c.vars() != vs) {
            return Err(Error::Parse("all coefficients of a series must share one variable list".into()));
        }
        Ok(NuSeries::from_coeffs(coeffs))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpTermJson {
    pub coeff: PolyJson,
    pub derivs: Vec<Vec<u32>>,
}

/// `{"vars": [...], "arity": k, "terms": [{"coeff": Poly, "derivs": [[...], ...]}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiDiffOpJson {
    pub vars: Vec<String>,
    pub arity: usize,
    pub terms: Vec<OpTermJson>,
}

impl From<&MultiDiffOp> for MultiDiffOpJson {
    fn from(op: &MultiDiffOp) -> Self {
        MultiDiffOpJson {
            vars: op.vars().iter().cloned().collect(),
            arity: op.arity(),
            terms: op.terms().iter().map(|(d, c)| OpTermJson { coeff: c.into(), derivs: d.clone() }).collect(),
        }
    }
}

impl TryFrom<&MultiDiffOpJson> for MultiDiffOp {
    type Error = Error;

    fn try_from(op: &MultiDiffOpJson) -> Result<Self> {
        let vs = check_vars(&op.vars)?;
        let mut out = MultiDiffOp::zero(vs.clone(), op.arity);
        for t in &op.terms {
            if t.derivs.len() != op.arity {
                return Err(Error::ArityMismatch { expected: op.arity, found: t.derivs.len() });
            }
            if let Some(d) = t.derivs.iter().find(|d| d.len() != vs.len()) {
                return Err(Error::DimensionMismatch { expected: vs.len(), found: d.len() });
            }
            let c = Poly::try_from(&t.coeff)?.compact().align_to(&vs)?;
            out.add_term(t.derivs.clone(), c);
        }
        Ok(out)
    }
}

/// A constant Poisson tensor: `{"vars": [...], "matrix": [["a/b", ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoissonJson {
    pub vars: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

impl From<&ConstantPoisson> for PoissonJson {
    fn from(p: &ConstantPoisson) -> Self {
        PoissonJson {
            vars: p.vars().iter().cloned().collect(),
            matrix: p.matrix().iter().map(|row| row.iter().map(format_rational).collect()).collect(),
        }
    }
}

impl TryFrom<&PoissonJson> for ConstantPoisson {
    type Error = Error;

    fn try_from(p: &PoissonJson) -> Result<Self> {
        let matrix = p
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ConstantPoisson::new(check_vars(&p.vars)?, matrix)
    }
}

/// Structure constants `{"dim": d, "vars": [...], "C": [[a, b, c, "coeff"], ...]}`
/// meaning `[e_a, e_b] = Σ_c C^c_{ab} e_c`. `vars` defaults to `x0..x{d-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(rename = "C")]
    pub c: Vec<(usize, usize, usize, String)>,
}

impl From<&LieAlgebraData> for LieJson {
    fn from(lie: &LieAlgebraData) -> Self {
        let d = lie.dim();
        let mut c = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                for k in 0..d {
                    let v = lie.structure(a, b, k);
                    if !v.is_nil() {
                        c.push((a, b, k, format_rational(v)));
                    }
                }
            }
        }
        LieJson { dim: d, vars: Some(lie.vars().iter().cloned().collect()), c }
    }
}

impl TryFrom<&LieJson> for LieAlgebraData {
    type Error = Error;

    fn try_from(l: &LieJson) -> Result<Self> {
        let names = match &l.vars {
            Some(v) if v.len() != l.dim => return Err(Error::DimensionMismatch { expected: l.dim, found: v.len() }),
            Some(v) => v.clone(),
            None => (0..l.dim).map(|i| format!("x{i}")).collect(),
        };
        let entries = l
            .c
            .iter()
            .map(|(a, b, k, s)| Ok((*a, *b, *k, parse_rational(s)?)))
            .collect::<Result<Vec<_>>>()?;
        LieAlgebraData::new(check_vars(&names)?, &entries)
    }
}

fn index_key(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn parse_key(key: &str, len: usize, bound: usize) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("`{key}` is not an index key of the form [{}]", vec!["i"; len].join(",")));
    let inner = key.trim().strip_prefix('[').and_then(|k| k.strip_suffix(']')).ok_or_else(bad)?;
    let idx = inner.split(',').map(|s| s.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
    if idx.len() != len {
        return Err(bad());
    }
    if let Some(&i) = idx.iter().find(|&&i| i >= bound) {
        return Err(Error::Parse(format!("index {i} in `{key}` is out of range for dimension {bound}")));
    }
    Ok(idx)
}

/// Connection and 2-form data.
///
/// `gamma` maps `"[k,i,j]"` to `Γ^k_{ij}`; `omega[r]` maps `"[i,j]"` with
/// `i < j` to the coefficient of `dx^i ∧ dx^j` in `ω_{r+1}`. Coordinates are
/// `q1..qn, p1..pn` (or `q, p` when `n = 1`); missing entries are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FedosovJson {
    pub n: usize,
    #[serde(default)]
    pub gamma: BTreeMap<String, PolyJson>,
    #[serde(default)]
    pub omega: Vec<BTreeMap<String, PolyJson>>,
}

impl From<&FedosovInput> for FedosovJson {
    fn from(f: &FedosovInput) -> Self {
        let m = 2 * f.n();
        let mut gamma = BTreeMap::new();
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let g = f.gamma(k, i, j);
                    if !g.is_zero() {
                        gamma.insert(index_key(&[k, i, j]), g.into());
                    }
                }
            }
        }
        let omega = f
            .omegas()
            .iter()
            .map(|w| {
                let mut t = BTreeMap::new();
                for i in 0..m {
                    for j in i + 1..m {
                        if !w[i][j].is_zero() {
                            t.insert(index_key(&[i, j]), (&w[i][j]).into());
                        }
                    }
                }
                t
            })
            .collect();
        FedosovJson { n: f.n(), gamma, omega }
    }
}

impl TryFrom<&FedosovJson> for FedosovInput {
    type Error = Error;

    fn try_from(f: &FedosovJson) -> Result<Self> {
        let m = 2 * f.n;
        let vs = canonical_vars(f.n);
        let zero = Poly::zero(vs.clone());
        let read = |p: &PolyJson| Poly::try_from(p)?.compact().align_to(&vs);
        let mut gamma = vec![vec![vec![zero.clone(); m]; m]; m];
        for (key, p) in &f.gamma {
            let idx = parse_key(key, 3, m)?;
            gamma[idx[0]][idx[1]][idx[2]] = read(p)?;
        }
        let mut omegas: Vec<TwoForm> = Vec::with_capacity(f.omega.len());
        for table in &f.omega {
            let mut w = vec![vec![zero.clone(); m]; m];
            for (key, p) in table {
                let idx = parse_key(key, 2, m)?;
                let (i, j) = (idx[0], idx[1]);
                if i >= j {
                    return Err(Error::Parse(format!("2-form key `{key}` must have i < j")));
                }
                let c = read(p)?;
                w[j][i] = c.neg();
                w[i][j] = c;
            }
            omegas.push(w);
        }
        FedosovInput::new(f.n, gamma, omegas)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskTermJson {
    pub p: u32,
    pub q: u32,
    pub coeff: CoeffJson,
}

/// `{"terms": [{"p": .., "q": .., "coeff": ..}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSymbolJson {
    pub terms: Vec<DiskTermJson>,
}

impl From<&DiskSymbol> for DiskSymbolJson {
    fn from(d: &DiskSymbol) -> Self {
        DiskSymbolJson {
            terms: d.terms().iter().map(|((p, q), c)| DiskTermJson { p: *p, q: *q, coeff: c.into() }).collect(),
        }
    }
}

impl TryFrom<&DiskSymbolJson> for DiskSymbol {
    type Error = Error;

    fn try_from(d: &DiskSymbolJson) -> Result<Self> {
        let mut out = DiskSymbol::zero();
        for t in &d.terms {
            out.add_term(t.p, t.q, Scalar::try_from(&t.coeff)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{poly_from, rat, sc};
    use crate::berezin::KAPPA;

    fn roundtrip<T, J>(x: &T)
    where
        T: std::fmt::Debug + PartialEq,
        J: for<'a> From<&'a T> + Serialize + for<'de> Deserialize<'de>,
        for<'a> T: TryFrom<&'a J, Error = Error>,
    {
        let text = serde_json::to_string(&J::from(x)).unwrap();
        let back: J = serde_json::from_str(&text).unwrap();
        assert_eq!(&T::try_from(&back).unwrap(), x);
    }

    #[test]
    fn poly_literal() {
        let text = r#"{"vars": ["q", "p"], "terms": [{"coeff": "1/2", "exp": [1, 1]}, {"coeff": "-3", "exp": [0, 0]}]}"#;
        let p: PolyJson = serde_json::from_str(text).unwrap();
        let vs = vars(&["q", "p"]);
        assert_eq!(Poly::try_from(&p).unwrap(), poly_from(&vs, &[(rat(1, 2), &[1, 1]), (rat(-3, 1), &[0, 0])]));
        let bad = r#"{"vars": ["q", "p"], "terms": [{"coeff": "1", "exp": [1]}]}"#;
        assert!(Poly::try_from(&serde_json::from_str::<PolyJson>(bad).unwrap()).is_err());
        let dup = r#"{"vars": ["q", "q"], "terms": []}"#;
        assert!(Poly::try_from(&serde_json::from_str::<PolyJson>(dup).unwrap()).is_err());
    }

    #[test]
    fn parametric_coefficients() {
        let k = Scalar::param("k");
        let c = k.times(&Scalar::param("m").inverse().unwrap()).times(&sc(1, 2));
        let p = Poly::monomial(vars(&["q"]), vec![2], c);
        roundtrip::<Poly, PolyJson>(&p);
        let s = NuSeries::from_coeffs(vec![p.clone(), p.neg(), Poly::zero(vars(&["q"]))]);
        roundtrip::<NuSeries, NuSeriesJson>(&s);
    }

    #[test]
    fn structured_values() {
        roundtrip::<ConstantPoisson, PoissonJson>(&ConstantPoisson::standard(2));
        roundtrip::<LieAlgebraData, LieJson>(&LieAlgebraData::sl2());
        roundtrip::<MultiDiffOp, MultiDiffOpJson>(&ConstantPoisson::standard(1).to_polyvector().to_bidiff());
        let vs = canonical_vars(1);
        let s = poly_from(&vs, &[(rat(1, 1), &[0, 1])]);
        let f = FedosovInput::from_symmetric(1, &[(0, 0, 0, s)], vec![]).unwrap();
        roundtrip::<FedosovInput, FedosovJson>(&f);
        let d = DiskSymbol::basis(1, 2).add(&DiskSymbol::term(0, 0, Scalar::param(KAPPA).inverse().unwrap()));
        roundtrip::<DiskSymbol, DiskSymbolJson>(&d);
    }

    #[test]
    fn index_keys() {
        assert_eq!(parse_key("[0, 1,2]", 3, 3).unwrap(), vec![0, 1, 2]);
        assert!(parse_key("[0,1]", 3, 3).is_err());
        assert!(parse_key("[0,1,3]", 3, 3).is_err());
        assert!(parse_key("0,1,2", 3, 3).is_err());
    }
}
