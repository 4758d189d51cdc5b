//! Berezin symbols of polynomial differential operators on the unit disk.
//!
//! The basis functions are `e(p, q) = z^p (z̄ / (1 − |z|²))^q`, and every
//! coefficient is a rational function of the single parameter `κ = kλ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::algebra::{binomial, factorial, Coeff, QPoly, Rational, Scalar};
use crate::error::{Error, Result};

/// Name of the parameter `κ`.
pub const KAPPA: &str = "κ";

/// `P_q(x) = x (x + 1) ⋯ (x + q − 1)` evaluated at `κ`; `P_0 = 1`.
pub fn pochhammer(q: u32) -> Scalar {
    let k = Scalar::param(KAPPA);
    (0..q).fold(Scalar::unit(), |acc, i| acc.times(&k.plus(&Scalar::from_int(i as i64))))
}

/// `Σ c_{pq}(κ) e(p, q)`.
#[derive(Clone, Default, PartialEq)]
pub struct DiskSymbol {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl DiskSymbol {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(p: u32, q: u32) -> Self {
        Self::term(p, q, Scalar::unit())
    }

    pub fn term(p: u32, q: u32, c: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(p, q, c);
        out
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: u32, q: u32, c: Scalar) {
        if c.is_nil() {
            return;
        }
        let s = match self.terms.remove(&(p, q)) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !s.is_nil() {
            self.terms.insert((p, q), s);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((p, q), c) in &o.terms {
            out.add_term(*p, *q, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for ((p, q), c) in &self.terms {
            out.add_term(*p, *q, c.times(s));
        }
        out
    }

    /// The pointwise product, `e(p, q) e(r, s) = e(p + r, q + s)`.
    pub fn pointwise(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for ((p, q), a) in &self.terms {
            for ((r, s), b) in &o.terms {
                out.add_term(p + r, q + s, a.times(b));
            }
        }
        out
    }
}

impl fmt::Debug for DiskSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((p, q), c)| format!("({c})·e({p},{q})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `e(p,q) ⋆ e(r,s) = Σ_{m ≤ min(q,r)} C(q,m) r!/(r−m)! · P_{s+q−m}/(P_q P_s) · e(p+r−m, s+q−m)`,
/// extended bilinearly.
pub fn disk_compose(a: &DiskSymbol, b: &DiskSymbol) -> DiskSymbol {
    let mut out = DiskSymbol::zero();
    for ((p, q), ca) in &a.terms {
        for ((r, s), cb) in &b.terms {
            let denom = pochhammer(*q).times(&pochhammer(*s)).inverse().expect("nonzero Pochhammer");
            let c = ca.times(cb).times(&denom);
            for m in 0..=(*q).min(*r) {
                let w = binomial(*q, m) * factorial(*r) / factorial(r - m);
                let coeff = c.times(&pochhammer(s + q - m)).times(&Scalar::Rat(w));
                out.add_term(p + r - m, s + q - m, coeff);
            }
        }
    }
    out
}

/// Exact associativity on all basis triples with entries `≤ bound`.
pub fn disk_assoc_check(bound: u32) -> bool {
    disk_assoc_defect(bound).is_none()
}

/// First basis triple with entries `≤ bound` where associativity fails.
pub fn disk_assoc_defect(bound: u32) -> Option<[(u32, u32); 3]> {
    let basis: Vec<(u32, u32)> = (0..=bound).flat_map(|p| (0..=bound).map(move |q| (p, q))).collect();
    let mut table: HashMap<((u32, u32), (u32, u32)), DiskSymbol> = HashMap::new();
    let mut basis_product = |x: (u32, u32), y: (u32, u32)| {
        table
            .entry((x, y))
            .or_insert_with(|| disk_compose(&DiskSymbol::basis(x.0, x.1), &DiskSymbol::basis(y.0, y.1)))
            .clone()
    };
    for &x in &basis {
        for &y in &basis {
            let xy = basis_product(x, y);
            for &z in &basis {
                let yz = basis_product(y, z);
                let mut lhs = DiskSymbol::zero();
                for (&w, c) in xy.terms() {
                    lhs = lhs.add(&basis_product(w, z).scale(c));
                }
                let mut rhs = DiskSymbol::zero();
                for (&w, c) in yz.terms() {
                    rhs = rhs.add(&basis_product(x, w).scale(c));
                }
                if lhs != rhs {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

/// Univariate coefficients of `p` in `κ`, lowest degree first.
fn univariate(p: &QPoly) -> Result<Vec<Rational>> {
    if p.vars().iter().any(|v| v != KAPPA) {
        return Err(Error::Invalid(format!("coefficient depends on parameters other than {KAPPA}")));
    }
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut out = vec![Rational::zero(); deg + 1];
    for (e, c) in p.terms() {
        let d = e.iter().sum::<u32>() as usize;
        out[d] = c.clone();
    }
    Ok(out)
}

/// Taylor coefficients of `c(κ)` in `t = 1/κ` at `t = 0`, through `t^order`.
pub fn expand_at_infinity(c: &Scalar, order: usize) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::zero(); order + 1];
    let f = match c {
        Scalar::Rat(r) => {
            out[0] = r.clone();
            return Ok(out);
        }
        Scalar::Func(f) => f,
    };
    let num = univariate(f.numer())?;
    let den = univariate(f.denom())?;
    let (dn, dd) = (num.len() - 1, den.len() - 1);
    if dn > dd {
        return Err(Error::PoleAtInfinity);
    }
    // c = t^{dd − dn} · rev(num)(t) / rev(den)(t)
    let rn: Vec<Rational> = num.iter().rev().cloned().collect();
    let rd: Vec<Rational> = den.iter().rev().cloned().collect();
    let shift = dd - dn;
    let mut series = vec![Rational::zero(); order + 1];
    for j in 0..=order {
        let mut s = rn.get(j).cloned().unwrap_or_else(Rational::zero);
        for i in 1..=j.min(rd.len() - 1) {
            s -= &rd[i] * &series[j - i];
        }
        series[j] = s / &rd[0];
    }
    for j in 0..=order {
        if j + shift <= order {
            out[j + shift] = series[j].clone();
        }
    }
    Ok(out)
}

/// `A ⋆ B` expanded in `1/κ`: entry `j` holds the coefficient of `κ^{−j}`.
pub fn disk_asymptotic(a: &DiskSymbol, b: &DiskSymbol, order: usize) -> Result<Vec<DiskSymbol>> {
    let exact = disk_compose(a, b);
    let mut out = vec![DiskSymbol::zero(); order + 1];
    for ((p, q), c) in exact.terms() {
        for (j, r) in expand_at_infinity(c, order)?.into_iter().enumerate() {
            out[j].add_term(*p, *q, Scalar::Rat(r));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn e(p: u32, q: u32) -> DiskSymbol {
        DiskSymbol::basis(p, q)
    }

    fn inv_kappa() -> Scalar {
        Scalar::param(KAPPA).inverse().unwrap()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(0), Scalar::unit());
        let k = Scalar::param(KAPPA);
        assert_eq!(pochhammer(2), k.times(&k.plus(&Scalar::unit())));
    }

    #[test]
    fn composition_examples() {
        assert_eq!(disk_compose(&e(0, 1), &e(1, 0)), e(1, 1).add(&DiskSymbol::term(0, 0, inv_kappa())));
        assert_eq!(disk_compose(&e(2, 0), &e(3, 0)), e(5, 0));
        assert_eq!(disk_compose(&e(1, 0), &e(0, 1)), e(1, 1));
        for (p, q) in [(0, 0), (2, 1), (1, 3)] {
            assert_eq!(disk_compose(&e(0, 0), &e(p, q)), e(p, q));
            assert_eq!(disk_compose(&e(p, q), &e(0, 0)), e(p, q));
        }
    }

    #[test]
    fn associative_on_small_indices() {
        assert!(disk_assoc_check(2));
    }

    #[test]
    fn expansion_examples() {
        let x = disk_asymptotic(&e(0, 1), &e(1, 0), 2).unwrap();
        assert_eq!(x[0], e(1, 1));
        assert_eq!(x[1], e(0, 0));
        assert!(x[2].is_zero());
        let y = disk_asymptotic(&e(1, 0), &e(0, 1), 2).unwrap();
        assert_eq!(x[1].sub(&y[1]), e(0, 0));
        // P_2 / (P_1 P_1) = (κ + 1)/κ = 1 + 1/κ
        let r = pochhammer(2).times(&pochhammer(1).times(&pochhammer(1)).inverse().unwrap());
        assert_eq!(expand_at_infinity(&r, 3).unwrap(), vec![int(1), int(1), int(0), int(0)]);
        // 1/(κ + 2) = t − 2t² + 4t³
        let s = Scalar::param(KAPPA).plus(&Scalar::from_int(2)).inverse().unwrap();
        assert_eq!(expand_at_infinity(&s, 3).unwrap(), vec![int(0), int(1), int(-2), int(4)]);
        assert_eq!(expand_at_infinity(&Scalar::param(KAPPA), 1), Err(Error::PoleAtInfinity));
    }

    #[test]
    fn leading_order_is_pointwise() {
        for (p, q, r, s) in [(0, 1, 1, 0), (2, 2, 1, 3), (1, 1, 1, 1)] {
            let x = disk_asymptotic(&e(p, q), &e(r, s), 0).unwrap();
            assert_eq!(x[0], e(p, q).pointwise(&e(r, s)));
        }
    }

    #[test]
    fn first_order_bracket_is_a_biderivation() {
        let bracket = |a: &DiskSymbol, b: &DiskSymbol| {
            let x = disk_asymptotic(a, b, 1).unwrap();
            let y = disk_asymptotic(b, a, 1).unwrap();
            x[1].sub(&y[1])
        };
        let basis: Vec<DiskSymbol> = [(0, 1), (1, 0), (1, 1), (2, 1), (0, 2)].iter().map(|&(p, q)| e(p, q)).collect();
        for f in &basis {
            for g in &basis {
                for h in &basis {
                    let lhs = bracket(f, &g.pointwise(h));
                    let rhs = bracket(f, g).pointwise(h).add(&g.pointwise(&bracket(f, h)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
