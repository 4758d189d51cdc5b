//! Truncated formal power series in the deformation parameter ν.

use std::fmt;

use super::poly::{merge_vars, Vars};
use super::scalar::Scalar;
use super::Poly;
use crate::error::{Error, Result};

/// `Σ_{k=0}^{N} ν^k c_k` with polynomial coefficients, known modulo `ν^{N+1}`.
#[derive(Clone, PartialEq)]
pub struct NuSeries {
    coeffs: Vec<Poly>,
}

impl NuSeries {
    pub fn zero(vars: Vars, order: usize) -> Self {
        NuSeries { coeffs: vec![Poly::zero(vars); order + 1] }
    }

    /// The polynomial `p` viewed as a series (ν-order 0 term only).
    pub fn from_poly(p: Poly, order: usize) -> Self {
        let vars = p.vars().clone();
        let mut s = Self::zero(vars, order);
        s.coeffs[0] = p;
        s
    }

    /// Coefficients `c_0..c_N`; the truncation order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Poly>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the ν^0 coefficient");
        NuSeries { coeffs }
    }

    /// `ν^k` in the given context.
    pub fn nu_power(vars: Vars, k: usize, order: usize) -> Self {
        let mut s = Self::zero(vars.clone(), order);
        if k <= order {
            s.coeffs[k] = Poly::one(vars);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Poly {
        &self.coeffs[k]
    }

    pub fn vars(&self) -> Vars {
        self.coeffs.iter().fold(self.coeffs[0].vars().clone(), |v, c| merge_vars(&v, c.vars()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest ν-power with a nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        NuSeries { coeffs: self.coeffs[..=n].to_vec() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        NuSeries { coeffs: (0..=n).map(|k| self.coeffs[k].add(&o.coeffs[k])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        NuSeries { coeffs: (0..=n).map(|k| self.coeffs[k].sub(&o.coeffs[k])).collect() }
    }

    pub fn neg(&self) -> Self {
        NuSeries { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        NuSeries { coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        NuSeries { coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect() }
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let v = merge_vars(&self.vars(), &o.vars());
        let mut out = Self::zero(v, n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[i].mul(&o.coeffs[j]));
            }
        }
        out
    }

    /// Multiplies by `ν^k`, keeping the truncation order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let vars = self.coeffs[0].vars().clone();
        let coeffs = (0..=n)
            .map(|i| if i >= k { self.coeffs[i - k].clone() } else { Poly::zero(vars.clone()) })
            .collect();
        NuSeries { coeffs }
    }

    /// Exact division by `ν^k`; the result has truncation order `N - k`.
    pub fn div_nu(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::NotDivisible { power: k, order: self.order() });
        }
        if let Some(i) = self.coeffs[..k].iter().position(|c| !c.is_zero()) {
            return Err(Error::NotDivisible { power: k, order: i });
        }
        Ok(NuSeries { coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn map<F: Fn(&Poly) -> Poly>(&self, f: F) -> Self {
        NuSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Evaluates the series at `ν = value`, a scalar such as a formal
    /// parameter; used to compare with expressions in `ħ`.
    pub fn substitute_nu(&self, value: &Poly) -> Poly {
        let mut acc = Poly::zero(value.vars().clone());
        let mut power = Poly::one(value.vars().clone());
        for c in &self.coeffs {
            acc = acc.add(&c.mul(&power));
            power = power.mul(value);
        }
        acc
    }
}

impl fmt::Debug for NuSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NuSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("nu*({c})"),
                _ => format!("nu^{k}*({c})"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", parts.join(" + "))?;
        }
        write!(f, " + O(nu^{})", self.order() + 1)
    }
}
