//! Rational functions over ℚ in named parameters.
//!
//! Values are kept canonical: parameter names sorted alphabetically and
//! restricted to those that occur, numerator and denominator coprime, and
//! the denominator monic with respect to the lexicographic order. Equality
//! is therefore representation equality.

use std::fmt;

use num_traits::{One, Zero};

use super::coeff::{Coeff, Rational};
use super::poly::{merge_vars, SparsePoly, Vars};
use crate::error::{Error, Result};

pub type QPoly = SparsePoly<Rational>;

#[derive(Clone, PartialEq)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: QPoly) -> Self {
        let one = QPoly::one(p.vars().clone());
        Self::normalized(p, one)
    }

    pub fn constant(c: Rational) -> Self {
        let v: Vars = Vec::<String>::new().into();
        Self::from_poly(QPoly::constant(v.clone(), c))
    }

    /// The parameter `name` as a rational function.
    pub fn param(name: &str) -> Self {
        let v: Vars = vec![name.to_string()].into();
        Self::from_poly(QPoly::var(v, 0))
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn params(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(c)` if the function is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.constant_term() / self.den.constant_term())
        } else {
            None
        }
    }

    fn normalized(num: QPoly, den: QPoly) -> Self {
        let v = merge_vars(num.vars(), den.vars());
        let mut names: Vec<String> = v.to_vec();
        names.sort();
        let sorted: Vars = names.into();
        let num = num.aligned(&sorted);
        let den = den.aligned(&sorted);
        if num.is_zero() {
            let empty: Vars = Vec::<String>::new().into();
            return RatFunc { num: QPoly::zero(empty.clone()), den: QPoly::one(empty) };
        }
        let g = gcd(&num, &den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !One::is_one(&lc) {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        // Restrict to occurring parameters, keeping the sorted order.
        let used: Vec<String> = sorted
            .iter()
            .enumerate()
            .filter(|(i, _)| num.terms().keys().chain(den.terms().keys()).any(|e| e[*i] > 0))
            .map(|(_, n)| n.clone())
            .collect();
        let used: Vars = used.into();
        RatFunc { num: num.aligned(&used), den: den.aligned(&used) }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::normalized(self.num.add(&o.num), self.den.clone());
        }
        Self::normalized(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Substitutes rational values for the parameters named in `values`.
    pub fn evaluate(&self, values: &[(&str, Rational)]) -> Result<Self> {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (name, val) in values {
            if let Some(i) = num.index_of(name) {
                let c = QPoly::constant(num.vars().clone(), val.clone());
                num = num.substitute(i, &c);
                den = den.substitute(i, &c);
            }
        }
        Self::new(num, den)
    }
}

/// Greatest common divisor of multivariate polynomials over ℚ, computed
/// recursively by content and primitive pseudo-remainder sequences. The
/// result is monic in the lexicographic order (or zero if both inputs are).
pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let v = merge_vars(a.vars(), b.vars());
    let a = a.aligned(&v);
    let b = b.aligned(&v);
    monic(&gcd_rec(&a, &b, 0))
}

fn monic(p: &QPoly) -> QPoly {
    match p.leading() {
        None => p.clone(),
        Some((_, c)) => p.scale(&c.recip()),
    }
}

fn gcd_rec(a: &QPoly, b: &QPoly, from: usize) -> QPoly {
    let vars = a.vars().clone();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let main = (from..vars.len()).find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0);
    let Some(x) = main else {
        return QPoly::one(vars);
    };
    let ca = content(a, x);
    let cb = content(b, x);
    let c = gcd_rec(&ca, &cb, x + 1);
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if f.degree_in(x) < g.degree_in(x) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        if g.degree_in(x) == 0 {
            // g is a nonzero element of the coefficient ring and primitive.
            return c;
        }
        let r = pseudo_rem(&f, &g, x);
        f = g;
        g = if r.is_zero() { r } else { primitive(&r, x) };
    }
    let pf = primitive(&f, x);
    c.mul(&monic(&pf))
}

fn coefficients_in(p: &QPoly, x: usize) -> Vec<QPoly> {
    let deg = p.degree_in(x) as usize;
    let mut out = vec![QPoly::zero(p.vars().clone()); deg + 1];
    for (e, c) in p.terms() {
        let mut ne = e.clone();
        ne[x] = 0;
        out[e[x] as usize].add_term(ne, c.clone());
    }
    out
}

fn content(p: &QPoly, x: usize) -> QPoly {
    let mut g = QPoly::zero(p.vars().clone());
    for c in coefficients_in(p, x) {
        g = gcd_rec(&g, &c, x + 1);
        if g.is_constant() && !g.is_zero() {
            return QPoly::one(p.vars().clone());
        }
    }
    monic(&g)
}

fn primitive(p: &QPoly, x: usize) -> QPoly {
    let c = content(p, x);
    p.div_exact(&c).expect("content divides")
}

fn pseudo_rem(f: &QPoly, g: &QPoly, x: usize) -> QPoly {
    let dg = g.degree_in(x);
    let lg = coefficients_in(g, x).pop().unwrap();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(x) >= dg {
        let dr = r.degree_in(x);
        let lr = coefficients_in(&r, x).pop().unwrap();
        let mut shift = vec![0; r.vars().len()];
        shift[x] = dr - dg;
        let xs = QPoly::monomial(r.vars().clone(), shift, Rational::one());
        r = r.mul(&lg).sub(&lr.mul(&xs).mul(g));
    }
    r
}

impl Coeff for RatFunc {
    fn nil() -> Self {
        RatFunc::constant(Rational::zero())
    }
    fn unit() -> Self {
        RatFunc::constant(Rational::one())
    }
    fn is_nil(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn from_rational(r: Rational) -> Self {
        RatFunc::constant(r)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::{int, rat};
    use crate::algebra::poly::vars;

    fn km() -> Vars {
        vars(&["k", "m"])
    }

    #[test]
    fn gcd_of_shared_factor() {
        let k = QPoly::var(km(), 0);
        let m = QPoly::var(km(), 1);
        let common = k.add(&m.scale(&int(2)));
        let a = common.mul(&k.sub(&m));
        let b = common.mul(&k.mul(&k).add(&m));
        assert_eq!(gcd(&a, &b), monic(&common));
    }

    #[test]
    fn inverse_pairs_multiply_to_one() {
        let k = RatFunc::param("k");
        let m = RatFunc::param("m");
        let f = k.add(&m.mul(&m));
        let g = k.sub(&RatFunc::constant(rat(3, 2)));
        let h = f.div(&g).unwrap().mul(&g.div(&f).unwrap());
        assert_eq!(h, RatFunc::unit());
    }

    #[test]
    fn canonical_form_is_independent_of_construction_order() {
        let k = RatFunc::param("k");
        let m = RatFunc::param("m");
        let a = m.add(&k).inv().unwrap();
        let b = k.add(&m).inv().unwrap();
        assert_eq!(a, b);
        let two_k = k.mul(&RatFunc::constant(int(2)));
        let c = two_k.div(&k.mul(&k)).unwrap();
        assert_eq!(c, RatFunc::constant(int(2)).div(&k).unwrap());
    }

    #[test]
    fn constants_demote() {
        let k = RatFunc::param("k");
        assert_eq!(k.div(&k).unwrap().as_constant(), Some(int(1)));
        assert!(k.sub(&k).is_zero());
    }
}
