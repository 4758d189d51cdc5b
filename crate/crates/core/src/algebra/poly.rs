//! Sparse multivariate polynomials over an exact coefficient field.
//!
//! A polynomial carries its own generator context (an ordered list of
//! variable names). Binary operations merge contexts by name: the result
//! context is the left context followed by the right context's new names,
//! in order. Terms are kept in a `BTreeMap` keyed by exponent vectors, so
//! the monomial order is lexicographic on exponent vectors with respect to
//! the context order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::coeff::Coeff;
use crate::error::{Error, Result};

/// An ordered list of generator names.
pub type Vars = Arc<[String]>;

/// Exponent vector aligned with a [`Vars`] context.
pub type Exponent = Vec<u32>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// Union of two contexts: `a` followed by the names of `b` not in `a`.
pub fn merge_vars(a: &Vars, b: &Vars) -> Vars {
    if Arc::ptr_eq(a, b) || a[..] == b[..] {
        return a.clone();
    }
    let mut out: Vec<String> = a.to_vec();
    for name in b.iter() {
        if !out.contains(name) {
            out.push(name.clone());
        }
    }
    out.into()
}

/// All exponent vectors in `n` variables of total degree at most `max_degree`,
/// ordered by degree and then lexicographically.
pub fn exponents_up_to(n: usize, max_degree: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        exponents_of_degree(n, d, &mut vec![0; n], 0, &mut out);
    }
    out
}

fn exponents_of_degree(n: usize, left: u32, cur: &mut Exponent, pos: usize, out: &mut Vec<Exponent>) {
    if n == 0 {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = left;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        exponents_of_degree(n, left - e, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

#[derive(Clone)]
pub struct SparsePoly<C> {
    vars: Vars,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coeff> SparsePoly<C> {
    pub fn zero(vars: Vars) -> Self {
        SparsePoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, c: C) -> Self {
        let mut p = Self::zero(vars);
        let n = p.vars.len();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, C::unit())
    }

    /// The generator at position `idx` of `vars`.
    pub fn var(vars: Vars, idx: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Self::monomial(vars, e, C::unit())
    }

    pub fn var_named(vars: Vars, name: &str) -> Result<Self> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(vars, idx))
    }

    pub fn monomial(vars: Vars, exp: Exponent, c: C) -> Self {
        assert_eq!(exp.len(), vars.len(), "exponent arity must match the context");
        let mut p = Self::zero(vars);
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, C)>>(vars: Vars, terms: I) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent arity must match the context");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * x^exp` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, exp: Exponent, c: C) {
        if c.is_nil() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().plus(&c);
                if s.is_nil() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, exp: &[u32]) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::nil)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Leading term under the lexicographic order of the context.
    pub fn leading(&self) -> Option<(&Exponent, &C)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|e| e[idx]).max().unwrap_or(0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Re-expresses the polynomial in `target`, which must contain every
    /// variable that occurs with a nonzero exponent.
    pub fn align_to(&self, target: &Vars) -> Result<Self> {
        if Arc::ptr_eq(&self.vars, target) {
            return Ok(self.clone());
        }
        if self.vars[..] == target[..] {
            return Ok(SparsePoly { vars: target.clone(), terms: self.terms.clone() });
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.iter().enumerate() {
            let pos = target.iter().position(|t| t == name);
            if pos.is_none() && self.terms.keys().any(|e| e[i] > 0) {
                return Err(Error::UnknownVariable(name.clone()));
            }
            map.push(pos);
        }
        let mut out = Self::zero(target.clone());
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] = x;
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Like [`align_to`](Self::align_to) for targets known to be supersets.
    pub fn aligned(&self, target: &Vars) -> Self {
        self.align_to(target).expect("target context must contain all occurring variables")
    }

    /// Drops context variables that do not occur in any term.
    pub fn compact(&self) -> Self {
        let used: Vec<usize> =
            (0..self.vars.len()).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect();
        if used.len() == self.vars.len() {
            return self.clone();
        }
        let vars: Vars = used.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (used.iter().map(|&i| e[i]).collect(), c.clone()))
            .collect();
        SparsePoly { vars, terms }
    }

    fn unify<'a>(&'a self, other: &'a Self) -> (std::borrow::Cow<'a, Self>, std::borrow::Cow<'a, Self>) {
        use std::borrow::Cow;
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars[..] == other.vars[..] {
            return (Cow::Borrowed(self), Cow::Borrowed(other));
        }
        let v = merge_vars(&self.vars, &other.vars);
        (Cow::Owned(self.aligned(&v)), Cow::Owned(other.aligned(&v)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let mut out = a.into_owned();
        for (e, c) in &b.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let mut out = a.into_owned();
        for (e, c) in &b.terms {
            out.add_term(e.clone(), c.negated());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let mut out = Self::zero(a.vars.clone());
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.times(cb));
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.negated())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_nil() {
            return Self::zero(self.vars.clone());
        }
        self.map_coeffs(|c| c.times(s))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.vars.clone());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map_coeffs<F: Fn(&C) -> C>(&self, f: F) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// `k`-th partial derivative with respect to the variable at `idx`.
    pub fn derivative(&self, idx: usize, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[idx] < k {
                continue;
            }
            let mut falling: i64 = 1;
            for j in 0..k {
                falling *= i64::from(e[idx] - j);
            }
            let mut ne = e.clone();
            ne[idx] -= k;
            out.add_term(ne, c.times(&C::from_int(falling)));
        }
        out
    }

    /// Applies `∂^alpha` where `alpha` is aligned with this context.
    pub fn derive_multi(&self, alpha: &[u32]) -> Self {
        assert_eq!(alpha.len(), self.vars.len());
        let mut out = Self::zero(self.vars.clone());
        'terms: for (e, c) in &self.terms {
            let mut factor: i64 = 1;
            let mut ne = e.clone();
            for (i, &a) in alpha.iter().enumerate() {
                if e[i] < a {
                    continue 'terms;
                }
                for j in 0..a {
                    factor *= i64::from(e[i] - j);
                }
                ne[i] -= a;
            }
            out.add_term(ne, c.times(&C::from_int(factor)));
        }
        out
    }

    /// Sets the variables at the given positions to zero.
    pub fn set_zero(&self, idxs: &[usize]) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if idxs.iter().all(|&i| e[i] == 0) {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// Substitutes `value` for the variable at `idx`.
    pub fn substitute(&self, idx: usize, value: &Self) -> Self {
        let value = value.aligned(&merge_vars(&self.vars, value.vars()));
        let vars = value.vars.clone();
        let me = self.aligned(&vars);
        let mut powers: Vec<Self> = vec![Self::one(vars.clone())];
        let mut out = Self::zero(vars.clone());
        for (e, c) in &me.terms {
            let k = e[idx] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(&value);
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[idx] = 0;
            let m = Self::monomial(vars.clone(), rest, c.clone());
            out = out.add(&m.mul(&powers[k]));
        }
        out
    }

    /// Evaluates every variable at the given coefficient values.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = C::nil();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.times(&point[i]);
                }
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Exact division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (a, b) = self.unify(divisor);
        let (lb_e, lb_c) = b.leading()?;
        let lb_inv = lb_c.inverse()?;
        let mut rem = a.into_owned();
        let mut quot = Self::zero(rem.vars.clone());
        while let Some((le, lc)) = rem.leading() {
            if le.iter().zip(lb_e).any(|(x, y)| x < y) {
                return None;
            }
            let e: Exponent = le.iter().zip(lb_e).map(|(x, y)| x - y).collect();
            let t = Self::monomial(rem.vars.clone(), e, lc.times(&lb_inv));
            rem = rem.sub(&t.mul(&b));
            quot = quot.add(&t);
        }
        Some(quot)
    }
}

impl<C: Coeff> PartialEq for SparsePoly<C> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.unify(other);
        a.terms == b.terms
    }
}

impl<C: Coeff> fmt::Debug for SparsePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<C: Coeff> fmt::Display for SparsePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], k) })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_unit() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::coeff::{int, rat, Rational};

    type QPoly = SparsePoly<Rational>;

    fn qp() -> Vars {
        vars(&["q", "p"])
    }

    #[test]
    fn difference_of_squares() {
        let q = QPoly::var(qp(), 0);
        let p = QPoly::var(qp(), 1);
        let lhs = q.add(&p).mul(&q.sub(&p));
        let rhs = q.mul(&q).sub(&p.mul(&p));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_inverse_leaves_no_terms() {
        let x = QPoly::var(vars(&["x"]), 0);
        let s = x.add(&x.neg());
        assert!(s.is_zero());
        assert_eq!(s.terms().len(), 0);
    }

    #[test]
    fn rational_cancellation() {
        let v = vars(&["x"]);
        let a = QPoly::monomial(v.clone(), vec![1], rat(2, 3));
        let b = QPoly::monomial(v.clone(), vec![1], rat(3, 2));
        assert_eq!(a.mul(&b), QPoly::monomial(v, vec![2], int(1)));
    }

    #[test]
    fn contexts_merge_by_name() {
        let q = QPoly::var(vars(&["q"]), 0);
        let p = QPoly::var(vars(&["p", "q"]), 0);
        let s = q.add(&p);
        assert_eq!(&s.vars()[..], &["q".to_string(), "p".to_string()]);
        let t = p.add(&q);
        assert_eq!(s, t);
    }

    #[test]
    fn derivatives_and_division() {
        let q = QPoly::var(qp(), 0);
        let p = QPoly::var(qp(), 1);
        let f = q.pow(3).mul(&p.pow(2));
        assert_eq!(f.derive_multi(&[2, 1]), q.mul(&p).scale(&int(12)));
        let g = q.add(&p);
        let prod = f.mul(&g);
        assert_eq!(prod.div_exact(&g).unwrap(), f);
        assert!(f.div_exact(&g).is_none());
    }

    #[test]
    fn exponent_enumeration_counts() {
        assert_eq!(exponents_up_to(2, 3).len(), 10);
        assert_eq!(exponents_up_to(3, 2).len(), 10);
        assert_eq!(exponents_up_to(0, 4), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn substitution() {
        let q = QPoly::var(qp(), 0);
        let p = QPoly::var(qp(), 1);
        let f = q.mul(&q).add(&p);
        let g = f.substitute(0, &p);
        assert_eq!(g, p.mul(&p).add(&p));
    }
}
