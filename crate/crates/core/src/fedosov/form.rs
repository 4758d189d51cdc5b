//! Forms with values in the formal Weyl algebra over a Darboux chart.
//!
//! Coordinates are `x = (q^1..q^n, p_1..p_n)` on the base and `y` in the
//! fiber, with the constant fiber Poisson tensor `Λ^{i,n+i} = 1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{factorial, int, rat, Exponent, Poly, Rational, Scalar, Vars};
use crate::error::{Error, Result};

/// Fiber monomial, `ν`-power and `dx` index set (bit `k` for `dx^k`).
pub type FormKey = (Exponent, u32, u32);

/// `Σ ν^k a(x) y^α dx^I`.
#[derive(Clone, PartialEq)]
pub struct WeylForm {
    n: usize,
    xvars: Vars,
    terms: BTreeMap<FormKey, Poly>,
}

fn falling(n: u32, k: u32) -> Rational {
    (0..k).fold(int(1), |acc, i| acc * int((n - i) as i64))
}

/// Sign of `dx^I ∧ dx^J` relative to the sorted index set, or `None` if
/// the sets meet.
pub fn wedge_sign(i: u32, j: u32) -> Option<i32> {
    if i & j != 0 {
        return None;
    }
    let mut swaps = 0;
    let mut jj = j;
    while jj != 0 {
        let b = jj.trailing_zeros();
        swaps += (i >> (b + 1)).count_ones();
        jj &= jj - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

fn below(mask: u32, k: usize) -> u32 {
    (mask & ((1u32 << k) - 1)).count_ones()
}

impl WeylForm {
    pub fn zero(n: usize, xvars: Vars) -> Self {
        assert_eq!(xvars.len(), 2 * n);
        WeylForm { n, xvars, terms: BTreeMap::new() }
    }

    /// The function `u(x)` as a section without fiber or form part.
    pub fn function(n: usize, u: &Poly) -> Result<Self> {
        let xvars = u.vars().clone();
        let mut out = Self::zero(n, xvars);
        out.add_term((vec![0; 2 * n], 0, 0), u.clone());
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn xvars(&self) -> &Vars {
        &self.xvars
    }

    pub fn terms(&self) -> &BTreeMap<FormKey, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn empty(&self) -> Self {
        Self::zero(self.n, self.xvars.clone())
    }

    pub fn add_term(&mut self, key: FormKey, c: Poly) {
        if c.is_zero() {
            return;
        }
        let c = c.aligned(&self.xvars);
        let s = match self.terms.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(key, s);
        }
    }

    /// `c(x) ν^k y^α dx^I` with `I` given as a list of indices.
    pub fn monomial(n: usize, xvars: Vars, y: Exponent, k: u32, dx: &[usize], c: Poly) -> Self {
        let mut out = Self::zero(n, xvars);
        let mut mask = 0u32;
        let mut sign = 1;
        for &i in dx {
            match wedge_sign(mask, 1 << i) {
                Some(s) => sign *= s,
                None => return out,
            }
            mask |= 1 << i;
        }
        out.add_term((y, k, mask), if sign > 0 { c } else { c.neg() });
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let s = Scalar::Rat(r.clone());
        let mut out = self.empty();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.scale(&s));
        }
        out
    }

    /// Fedosov degree `|α| + 2k` of a key.
    pub fn key_degree(key: &FormKey) -> u32 {
        key.0.iter().sum::<u32>() + 2 * key.1
    }

    /// Component of Fedosov degree exactly `d`.
    pub fn degree_part(&self, d: u32) -> Self {
        self.filter(|k| Self::key_degree(k) == d)
    }

    /// Components of Fedosov degree at most `d`.
    pub fn up_to_degree(&self, d: u32) -> Self {
        self.filter(|k| Self::key_degree(k) <= d)
    }

    /// Terms with `ν`-power exactly `k`.
    pub fn filter_nu(&self, k: u32) -> Self {
        self.filter(|key| key.1 == k)
    }

    pub fn form_part(&self, q: u32) -> Self {
        self.filter(|k| k.2.count_ones() == q)
    }

    /// The part without fiber variables and forms, as coefficients of `ν^k`.
    pub fn symbol(&self) -> BTreeMap<u32, Poly> {
        let mut out = BTreeMap::new();
        for ((y, k, mask), c) in &self.terms {
            if *mask == 0 && y.iter().all(|&e| e == 0) {
                out.insert(*k, c.clone());
            }
        }
        out
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Self::key_degree).max()
    }

    fn filter<F: Fn(&FormKey) -> bool>(&self, f: F) -> Self {
        WeylForm {
            n: self.n,
            xvars: self.xvars.clone(),
            terms: self.terms.iter().filter(|(k, _)| f(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Fiberwise Moyal product combined with the wedge product of forms.
    pub fn product(&self, o: &Self) -> Self {
        self.product_bounded(o, u32::MAX)
    }

    /// [`product`](Self::product) keeping only Fedosov degree `≤ bound`.
    pub fn product_bounded(&self, o: &Self, bound: u32) -> Self {
        let mut out = self.empty();
        for ((ya, ka, ia), ca) in &self.terms {
            let da = Self::key_degree(&(ya.clone(), *ka, *ia));
            for ((yb, kb, ib), cb) in &o.terms {
                let db = Self::key_degree(&(yb.clone(), *kb, *ib));
                if da + db > bound {
                    continue;
                }
                let Some(sign) = wedge_sign(*ia, *ib) else { continue };
                let c = ca.mul(cb);
                let c = if sign > 0 { c } else { c.neg() };
                for (y, r, w) in fiber_moyal(self.n, ya, yb) {
                    out.add_term((y, ka + kb + r, ia | ib), c.scale(&Scalar::Rat(w)));
                }
            }
        }
        out
    }

    /// Graded commutator `a ⋆ b − (−1)^{|a||b|} b ⋆ a` for homogeneous
    /// form degrees; mixed degrees are split.
    pub fn commutator(&self, o: &Self) -> Self {
        self.commutator_bounded(o, u32::MAX)
    }

    pub fn commutator_bounded(&self, o: &Self, bound: u32) -> Self {
        let mut out = self.empty();
        for qa in 0..=self.dim() as u32 {
            let a = self.form_part(qa);
            if a.is_zero() {
                continue;
            }
            for qb in 0..=self.dim() as u32 {
                let b = o.form_part(qb);
                if b.is_zero() {
                    continue;
                }
                let ab = a.product_bounded(&b, bound);
                let ba = b.product_bounded(&a, bound);
                out = if (qa * qb) % 2 == 0 { out.add(&ab).sub(&ba) } else { out.add(&ab).add(&ba) };
            }
        }
        out
    }

    /// Exact division by `ν^k`.
    pub fn div_nu(&self, k: u32) -> Result<Self> {
        let mut out = self.empty();
        for ((y, j, m), c) in &self.terms {
            if *j < k {
                return Err(Error::NotDivisible { power: k as usize, order: *j as usize });
            }
            out.add_term((y.clone(), j - k, *m), c.clone());
        }
        Ok(out)
    }

    /// `d a = Σ_k dx^k ∧ ∂a/∂x^k`.
    pub fn exterior_d(&self) -> Self {
        let mut out = self.empty();
        for ((y, j, m), c) in &self.terms {
            for k in 0..self.dim() {
                if m & (1 << k) != 0 {
                    continue;
                }
                let dc = c.derivative(k, 1);
                if dc.is_zero() {
                    continue;
                }
                let dc = if below(*m, k) % 2 == 0 { dc } else { dc.neg() };
                out.add_term((y.clone(), *j, m | (1 << k)), dc);
            }
        }
        out
    }

    /// `δ a = Σ_k dx^k ∧ ∂a/∂y^k`.
    pub fn delta(&self) -> Self {
        let mut out = self.empty();
        for ((y, j, m), c) in &self.terms {
            for k in 0..self.dim() {
                if y[k] == 0 || m & (1 << k) != 0 {
                    continue;
                }
                let mut ny = y.clone();
                ny[k] -= 1;
                let w = int(y[k] as i64) * if below(*m, k) % 2 == 0 { int(1) } else { int(-1) };
                out.add_term((ny, *j, m | (1 << k)), c.scale(&Scalar::Rat(w)));
            }
        }
        out
    }

    /// `δ̂ a_{pq} = (1/(p+q)) Σ_k y^k i(∂/∂x^k) a_{pq}`, zero when `p+q = 0`.
    pub fn delta_inv(&self) -> Self {
        let mut out = self.empty();
        for ((y, j, m), c) in &self.terms {
            let p: u32 = y.iter().sum();
            let q = m.count_ones();
            if p + q == 0 {
                continue;
            }
            for k in 0..self.dim() {
                if m & (1 << k) == 0 {
                    continue;
                }
                let mut ny = y.clone();
                ny[k] += 1;
                let sign = if below(*m, k) % 2 == 0 { 1 } else { -1 };
                let w = rat(sign, (p + q) as i64);
                out.add_term((ny, *j, m & !(1 << k)), c.scale(&Scalar::Rat(w)));
            }
        }
        out
    }
}

/// `y^α ⋆ y^β = Σ ν^r w · y^γ` for the standard fiber tensor, returned as
/// `(γ, r, w)`.
pub(crate) fn fiber_moyal(n: usize, a: &[u32], b: &[u32]) -> Vec<(Exponent, u32, Rational)> {
    // per pair (q_i, p_i): m₊ contractions ∂_{q}⊗∂_{p}, m₋ contractions −∂_{p}⊗∂_{q}
    let mut out: Vec<(Exponent, u32, Rational)> = vec![(a.iter().zip(b).map(|(x, y)| x + y).collect(), 0, int(1))];
    for i in 0..n {
        let (qi, pi) = (i, n + i);
        let mut next = Vec::new();
        for mp in 0..=a[qi].min(b[pi]) {
            for mm in 0..=a[pi].min(b[qi]) {
                let w = falling(a[qi], mp) * falling(b[pi], mp) * falling(a[pi], mm) * falling(b[qi], mm)
                    / (factorial(mp) * factorial(mm))
                    * rat(1, 2).pow((mp + mm) as i32)
                    * if mm % 2 == 0 { int(1) } else { int(-1) };
                for (y, r, c) in &out {
                    let mut y = y.clone();
                    y[qi] -= mp + mm;
                    y[pi] -= mp + mm;
                    next.push((y, r + mp + mm, c * &w));
                }
            }
        }
        out = next;
    }
    out
}

impl fmt::Debug for WeylForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((y, k, m), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if *k > 0 {
                write!(f, "·ν^{k}")?;
            }
            for (i, e) in y.iter().enumerate() {
                if *e > 0 {
                    write!(f, "·y{}^{e}", i + 1)?;
                }
            }
            for i in 0..32 {
                if m & (1 << i) != 0 {
                    write!(f, "·dx{}", i + 1)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::vars;

    fn xv() -> Vars {
        vars(&["q", "p"])
    }

    fn mono(y: [u32; 2], k: u32, dx: &[usize]) -> WeylForm {
        WeylForm::monomial(1, xv(), y.to_vec(), k, dx, Poly::one(xv()))
    }

    #[test]
    fn fiber_commutator_is_nu() {
        let c = mono([1, 0], 0, &[]).commutator(&mono([0, 1], 0, &[]));
        assert_eq!(c, mono([0, 0], 1, &[]));
    }

    #[test]
    fn repeated_dx_vanishes() {
        let a = mono([1, 0], 0, &[1]);
        assert!(a.product(&a).is_zero());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(mono([1, 0], 0, &[]).delta(), mono([0, 0], 0, &[0]));
        let x1 = WeylForm::function(1, &Poly::var(xv(), 0)).unwrap();
        assert!(x1.delta().is_zero());
        assert_eq!(mono([1, 1], 0, &[]).delta(), mono([0, 1], 0, &[0]).add(&mono([1, 0], 0, &[1])));
        assert!(mono([2, 1], 1, &[]).delta().delta().is_zero());
    }

    #[test]
    fn delta_inv_examples() {
        assert_eq!(mono([0, 0], 0, &[0]).delta_inv(), mono([1, 0], 0, &[]));
        assert!(mono([0, 0], 3, &[]).delta_inv().is_zero());
        // y¹dx² ↦ ½ y¹y²
        assert_eq!(mono([1, 0], 0, &[1]).delta_inv(), mono([1, 1], 0, &[]).scale(&rat(1, 2)));
    }

    #[test]
    fn hodge_decomposition() {
        let c = Poly::var(xv(), 1).add(&Poly::one(xv()));
        let a = WeylForm::monomial(1, xv(), vec![2, 1], 1, &[0], c.clone())
            .add(&WeylForm::monomial(1, xv(), vec![0, 0], 2, &[], c.clone()))
            .add(&WeylForm::monomial(1, xv(), vec![1, 0], 0, &[0, 1], c))
            .add(&mono([0, 3], 0, &[]));
        let a00 = a.filter(|(y, _, m)| *m == 0 && y.iter().all(|&e| e == 0));
        assert_eq!(a.delta().delta_inv().add(&a.delta_inv().delta()).add(&a00), a);
    }
}
