use std::fmt;

use num_traits::{One, Zero};

use super::coeff::{format_rational, Coeff, Rational};
use super::ratfunc::RatFunc;

/// Coefficient of a [`Poly`](super::Poly): an exact rational, or a rational
/// function of named formal parameters. A `Func` never holds a constant;
/// arithmetic demotes constants back to `Rat`.
#[derive(Clone, PartialEq)]
pub enum Scalar {
    Rat(Rational),
    Func(RatFunc),
}

impl Scalar {
    pub fn from_func(f: RatFunc) -> Self {
        match f.as_constant() {
            Some(c) => Scalar::Rat(c),
            None => Scalar::Func(f),
        }
    }

    /// The formal parameter `name`.
    pub fn param(name: &str) -> Self {
        Scalar::Func(RatFunc::param(name))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Func(_) => None,
        }
    }

    pub fn to_func(&self) -> RatFunc {
        match self {
            Scalar::Rat(r) => RatFunc::constant(r.clone()),
            Scalar::Func(f) => f.clone(),
        }
    }

    /// Parameter names this scalar depends on.
    pub fn params(&self) -> Vec<String> {
        match self {
            Scalar::Rat(_) => Vec::new(),
            Scalar::Func(f) => f.params().to_vec(),
        }
    }

    fn lift2<F, G>(&self, o: &Self, rat: F, func: G) -> Self
    where
        F: Fn(&Rational, &Rational) -> Rational,
        G: Fn(&RatFunc, &RatFunc) -> RatFunc,
    {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(rat(a, b)),
            _ => Scalar::from_func(func(&self.to_func(), &o.to_func())),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl Coeff for Scalar {
    fn nil() -> Self {
        Scalar::Rat(Rational::zero())
    }
    fn unit() -> Self {
        Scalar::Rat(Rational::one())
    }
    fn is_nil(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Func(f) => f.is_zero(),
        }
    }
    fn is_unit(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }
    fn plus(&self, other: &Self) -> Self {
        self.lift2(other, |a, b| a + b, |a, b| a.add(b))
    }
    fn minus(&self, other: &Self) -> Self {
        self.lift2(other, |a, b| a - b, |a, b| a.sub(b))
    }
    fn times(&self, other: &Self) -> Self {
        self.lift2(other, |a, b| a * b, |a, b| a.mul(b))
    }
    fn negated(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Func(f) => Scalar::Func(f.neg()),
        }
    }
    fn inverse(&self) -> Option<Self> {
        match self {
            Scalar::Rat(r) => Coeff::inverse(r).map(Scalar::Rat),
            Scalar::Func(f) => f.inv().ok().map(Scalar::from_func),
        }
    }
    fn from_rational(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", format_rational(r)),
            Scalar::Func(g) => write!(f, "{g}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::int;

    #[test]
    fn functions_demote_to_rationals() {
        let k = Scalar::param("k");
        let q = k.times(&k.inverse().unwrap());
        assert_eq!(q, Scalar::Rat(int(1)));
        let z = k.minus(&k);
        assert!(z.is_nil());
        assert!(matches!(z, Scalar::Rat(_)));
    }
}
