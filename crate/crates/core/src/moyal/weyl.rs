//! Differential operators in normal order and the Weyl symmetrization map.
//!
//! `ν = iħ` is carried as the extra coefficient generator [`NU`], so the
//! momentum `P_i = −iħ ∂_i` becomes `−ν ∂_i` and all coefficients stay real.

use std::collections::{BTreeMap, HashMap};

use super::{canonical_vars, moyal_product, ConstantPoisson};
use crate::algebra::{binomial, merge_vars, vars, Coeff, Exponent, NuSeries, Poly, Rational, Scalar, Vars};
use crate::error::{Error, Result};

/// Name of the generator standing for `ν = iħ` in operator coefficients.
pub const NU: &str = "ν";

/// `Σ_α c_α(q, ν) ∂^α`, coefficients to the left of the derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylOperator {
    qvars: Vars,
    cvars: Vars,
    terms: BTreeMap<Exponent, Poly>,
}

fn with_nu(qvars: &Vars) -> Vars {
    merge_vars(qvars, &vars(&[NU]))
}

impl WeylOperator {
    pub fn zero(qvars: Vars) -> Self {
        let cvars = with_nu(&qvars);
        WeylOperator { qvars, cvars, terms: BTreeMap::new() }
    }

    pub fn identity(qvars: Vars) -> Self {
        let mut op = Self::zero(qvars);
        let c = Poly::one(op.cvars.clone());
        op.add_term(vec![0; op.qvars.len()], c);
        op
    }

    /// Multiplication by `f`, a polynomial in the `q` variables and `ν`.
    pub fn multiplication(qvars: Vars, f: &Poly) -> Result<Self> {
        let mut op = Self::zero(qvars);
        let c = f.compact().align_to(&op.cvars)?;
        op.add_term(vec![0; op.qvars.len()], c);
        Ok(op)
    }

    /// `P_i = −ν ∂_i`.
    pub fn momentum(qvars: Vars, i: usize) -> Self {
        let mut op = Self::zero(qvars);
        let mut e = vec![0; op.qvars.len()];
        e[i] = 1;
        let nu = Poly::var(op.cvars.clone(), op.qvars.len());
        op.add_term(e, nu.neg());
        op
    }

    pub fn qvars(&self) -> &Vars {
        &self.qvars
    }

    /// The coefficient context: the `q` variables followed by `ν`.
    pub fn coeff_vars(&self) -> &Vars {
        &self.cvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, derivs: Exponent, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        let coeff = coeff.aligned(&self.cvars);
        let s = match self.terms.remove(&derivs) {
            Some(old) => old.add(&coeff),
            None => coeff,
        };
        if !s.is_zero() {
            self.terms.insert(derivs, s);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Poly::constant(self.cvars.clone(), Scalar::Rat(Rational::from_int(-1)))))
    }

    /// Left multiplication of every coefficient by `c`.
    pub fn scale(&self, c: &Poly) -> Self {
        let mut out = Self::zero(self.qvars.clone());
        for (a, x) in &self.terms {
            out.add_term(a.clone(), x.mul(c));
        }
        out
    }

    /// Highest total derivative order.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.iter().sum()).max()
    }

    /// `A ∘ B`, re-normalized by `∂^α b = Σ_γ C(α,γ) (∂^γ b) ∂^{α−γ}`.
    pub fn compose(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.qvars.clone());
        for (alpha, a) in &self.terms {
            for (beta, b) in &o.terms {
                for gamma in sub_indices(alpha) {
                    let mut w = Rational::from_int(1);
                    let mut db = b.clone();
                    for (i, (&al, &g)) in alpha.iter().zip(&gamma).enumerate() {
                        w *= binomial(al, g);
                        db = db.derivative(i, g);
                    }
                    if db.is_zero() {
                        continue;
                    }
                    let d: Exponent = alpha.iter().zip(&gamma).zip(beta).map(|((al, g), be)| al - g + be).collect();
                    out.add_term(d, a.mul(&db).scale(&Scalar::Rat(w)));
                }
            }
        }
        out
    }
}

fn sub_indices(alpha: &[u32]) -> Vec<Exponent> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        out = out.into_iter().flat_map(|p: Exponent| (0..=a).map(move |g| [p.clone(), vec![g]].concat())).collect();
    }
    out
}

/// Lexicographic successor of a multiset arrangement.
fn next_arrangement(w: &mut [usize]) -> bool {
    let n = w.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

struct Quantizer {
    n: usize,
    qvars: Vars,
    letters: Vec<WeylOperator>,
    cache: HashMap<Exponent, WeylOperator>,
}

impl Quantizer {
    fn new(n: usize) -> Self {
        let phase = canonical_vars(n);
        let qvars: Vars = phase[..n].iter().cloned().collect();
        let mut letters = Vec::with_capacity(2 * n);
        for i in 0..n {
            let qi = Poly::var(with_nu(&qvars), i);
            letters.push(WeylOperator::multiplication(qvars.clone(), &qi).expect("q variable"));
        }
        for i in 0..n {
            letters.push(WeylOperator::momentum(qvars.clone(), i));
        }
        Quantizer { n, qvars, letters, cache: HashMap::new() }
    }

    /// The average over all distinct orderings of the letters of `q^a p^b`.
    fn monomial(&mut self, e: &Exponent) -> WeylOperator {
        if let Some(op) = self.cache.get(e) {
            return op.clone();
        }
        let mut word: Vec<usize> = Vec::new();
        for (letter, &k) in e.iter().enumerate() {
            word.extend(std::iter::repeat_n(letter, k as usize));
        }
        let mut sum = WeylOperator::zero(self.qvars.clone());
        let mut count = 0i64;
        loop {
            let op = word
                .iter()
                .fold(WeylOperator::identity(self.qvars.clone()), |acc, &l| acc.compose(&self.letters[l]));
            sum = sum.add(&op);
            count += 1;
            if !next_arrangement(&mut word) {
                break;
            }
        }
        let cv = sum.cvars.clone();
        let op = sum.scale(&Poly::constant(cv, Scalar::Rat(Rational::new(1.into(), count.into()))));
        self.cache.insert(e.clone(), op.clone());
        op
    }

    /// Quantizes a polynomial in the phase-space variables and `ν`.
    fn quantize(&mut self, f: &Poly) -> Result<WeylOperator> {
        let full = with_nu(&canonical_vars(self.n));
        let f = f.compact().align_to(&full)?;
        let cv = with_nu(&self.qvars);
        let mut out = WeylOperator::zero(self.qvars.clone());
        for (e, c) in f.terms() {
            let mut nu_exp = vec![0; self.n + 1];
            nu_exp[self.n] = e[2 * self.n];
            let scalar = Poly::monomial(cv.clone(), nu_exp, c.clone());
            out = out.add(&self.monomial(&e[..2 * self.n].to_vec()).scale(&scalar));
        }
        Ok(out)
    }

    fn dequantize(&mut self, a: &WeylOperator) -> Result<Poly> {
        let n = self.n;
        let full = with_nu(&canonical_vars(n));
        let mut symbol = Poly::zero(full.clone());
        let mut rest = a.clone();
        while let Some(top) = rest.order() {
            let leading: Vec<(Exponent, Poly)> = rest
                .terms
                .iter()
                .filter(|(al, _)| al.iter().sum::<u32>() == top)
                .map(|(al, c)| (al.clone(), c.clone()))
                .collect();
            for (alpha, c) in leading {
                for (e, s) in c.terms() {
                    // c = Σ s q^{e_q} ν^{e_ν}; the symbol piece divides out (−ν)^{|α|}
                    let nu_pow = e[n];
                    if nu_pow < top {
                        return Err(Error::NotDivisible { power: top as usize, order: nu_pow as usize });
                    }
                    let sign = if top % 2 == 0 { s.clone() } else { s.negated() };
                    let mut se: Exponent = e[..n].to_vec();
                    se.extend_from_slice(&alpha);
                    se.push(nu_pow - top);
                    let piece = Poly::monomial(full.clone(), se, sign);
                    symbol = symbol.add(&piece);
                    rest = rest.sub(&self.quantize(&piece)?);
                }
            }
        }
        Ok(symbol)
    }
}

/// The Weyl quantization of `f`, a polynomial in [`canonical_vars`]`(n)`
/// (optionally also in [`NU`]).
pub fn weyl_quantize(f: &Poly, n: usize) -> Result<WeylOperator> {
    Quantizer::new(n).quantize(f)
}

/// The inverse of [`weyl_quantize`], returning a polynomial in the
/// phase-space variables and `ν`.
pub fn weyl_dequantize(a: &WeylOperator) -> Result<Poly> {
    Quantizer::new(a.qvars.len()).dequantize(a)
}

/// `Q⁻¹(Q(f) ∘ Q(g))` as a ν-series truncated at `order`.
pub fn weyl_compose(f: &Poly, g: &Poly, n: usize, order: usize) -> Result<NuSeries> {
    let mut qz = Quantizer::new(n);
    let a = qz.quantize(f)?;
    let b = qz.quantize(g)?;
    let sym = qz.dequantize(&a.compose(&b))?;
    Ok(split_nu(&sym, n, order))
}

fn split_nu(p: &Poly, n: usize, order: usize) -> NuSeries {
    let phase = canonical_vars(n);
    let mut coeffs = vec![Poly::zero(phase.clone()); order + 1];
    for (e, c) in p.terms() {
        let k = e[2 * n] as usize;
        if k <= order {
            coeffs[k].add_term(e[..2 * n].to_vec(), c.clone());
        }
    }
    NuSeries::from_coeffs(coeffs)
}

/// True iff `Q⁻¹(Q(f) ∘ Q(g))` agrees with the Moyal product at `ν = iħ`
/// through `ν^order`.
pub fn weyl_compose_check(f: &Poly, g: &Poly, n: usize, order: usize) -> Result<bool> {
    let lhs = weyl_compose(f, g, n, order)?;
    let rhs = moyal_product(f, g, &ConstantPoisson::standard(n), order)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, sc};

    fn q() -> Poly {
        Poly::var(canonical_vars(1), 0)
    }

    fn p() -> Poly {
        Poly::var(canonical_vars(1), 1)
    }

    fn qv() -> Vars {
        vars(&["q"])
    }

    #[test]
    fn generators_quantize_to_canonical_operators() {
        let qop = weyl_quantize(&q(), 1).unwrap();
        let mult = WeylOperator::multiplication(qv(), &Poly::var(with_nu(&qv()), 0)).unwrap();
        assert_eq!(qop, mult);
        assert_eq!(weyl_quantize(&p(), 1).unwrap(), WeylOperator::momentum(qv(), 0));
    }

    #[test]
    fn mixed_monomial_is_symmetrized() {
        // ½(QP + PQ) = −ν (q ∂ + ½)
        let op = weyl_quantize(&q().mul(&p()), 1).unwrap();
        let cv = with_nu(&qv());
        let nu = Poly::var(cv.clone(), 1);
        let qq = Poly::var(cv.clone(), 0);
        let mut expected = WeylOperator::zero(qv());
        expected.add_term(vec![1], nu.mul(&qq).neg());
        expected.add_term(vec![0], nu.scale(&sc(-1, 2)));
        assert_eq!(op, expected);
    }

    #[test]
    fn dequantize_inverts_quantize() {
        for f in crate::polydiff::monomials(&canonical_vars(1), 5) {
            let f = f.scale(&Scalar::Rat(int(3)));
            let op = weyl_quantize(&f, 1).unwrap();
            assert_eq!(weyl_dequantize(&op).unwrap(), f);
        }
    }

    #[test]
    fn spec_pairs() {
        assert!(weyl_compose_check(&q(), &p(), 1, 2).unwrap());
        assert!(weyl_compose_check(&q().pow(2), &q().pow(2), 1, 2).unwrap());
        assert!(weyl_compose_check(&p().pow(2), &q().pow(2), 1, 2).unwrap());
        let s = weyl_compose(&q(), &p(), 1, 2).unwrap();
        assert_eq!(s.coeff(1), &Poly::constant(canonical_vars(1), sc(1, 2)));
    }

    #[test]
    fn two_degrees_of_freedom() {
        let v = canonical_vars(2);
        let f = Poly::var(v.clone(), 0).mul(&Poly::var(v.clone(), 3));
        let g = Poly::var(v.clone(), 2).mul(&Poly::var(v.clone(), 1).pow(2));
        assert!(weyl_compose_check(&f, &g, 2, 3).unwrap());
    }
}
