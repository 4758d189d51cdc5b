//! Normal ordering in the universal enveloping algebra.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::LieAlgebraData;
use crate::algebra::{Coeff, Exponent, NuSeries, Poly, Rational, Scalar};
use crate::error::Result;

/// A word in the basis `e_0, …, e_{d−1}`; normal-ordered words are
/// nondecreasing.
pub type Word = Vec<usize>;

/// `Σ c · ν^k e_{w_1} ⋯ e_{w_n}` over normal-ordered words `w`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UeaElement {
    terms: BTreeMap<(Word, u32), Scalar>,
}

impl UeaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), 0, Scalar::unit())
    }

    /// `c · ν^k e_w`; `w` must be nondecreasing.
    pub fn monomial(w: Word, k: u32, c: Scalar) -> Self {
        debug_assert!(w.windows(2).all(|p| p[0] <= p[1]));
        let mut out = Self::zero();
        out.add_term(w, k, c);
        out
    }

    pub fn generator(a: usize) -> Self {
        Self::monomial(vec![a], 0, Scalar::unit())
    }

    pub fn terms(&self) -> &BTreeMap<(Word, u32), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, k: u32, c: Scalar) {
        if c.is_nil() {
            return;
        }
        match self.terms.entry((w, k)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().plus(&c);
                if s.is_nil() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += ν^shift · s · o`, keeping only `ν`-powers up to `limit`.
    fn accumulate(&mut self, o: &Self, shift: u32, s: &Scalar, limit: u32) {
        for ((w, k), c) in &o.terms {
            if k + shift <= limit {
                self.add_term(w.clone(), k + shift, c.times(s));
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((w, k), c) in &o.terms {
            out.add_term(w.clone(), *k, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::Rat(Rational::from_int(-1))))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for ((w, k), c) in &self.terms {
            out.add_term(w.clone(), *k, c.times(s));
        }
        out
    }

    /// Multiplies by `ν^k`.
    pub fn shift(&self, k: u32) -> Self {
        Self { terms: self.terms.iter().map(|((w, j), c)| ((w.clone(), j + k), c.clone())).collect() }
    }

    /// Drops terms with `ν`-power above `order`.
    pub fn truncate(&self, order: u32) -> Self {
        Self { terms: self.terms.iter().filter(|((_, k), _)| *k <= order).map(|(a, b)| (a.clone(), b.clone())).collect() }
    }

    /// Longest word length.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|(w, _)| w.len()).max()
    }

    /// The counit: the coefficient of the empty word.
    pub fn counit(&self) -> BTreeMap<u32, Scalar> {
        self.terms.iter().filter(|((w, _), _)| w.is_empty()).map(|((_, k), c)| (*k, c.clone())).collect()
    }
}

type Combination = Vec<((Word, u32), Rational)>;

/// The enveloping algebra of a Lie algebra with bracket
/// `[e_a, e_b] = ν^w Σ_c C^c_{ab} e_c`. Normal-ordering results are
/// memoized, so one engine should serve many products.
pub struct Uea {
    lie: LieAlgebraData,
    weight: u32,
    left: HashMap<(usize, Word), Combination>,
    sym: HashMap<Exponent, UeaElement>,
}

impl Uea {
    pub fn new(lie: LieAlgebraData, weight: u32) -> Self {
        Uea { lie, weight, left: HashMap::new(), sym: HashMap::new() }
    }

    /// The `ν`-weighted algebra used by the Gutt product.
    pub fn gutt(lie: LieAlgebraData) -> Self {
        Self::new(lie, 1)
    }

    pub fn lie(&self) -> &LieAlgebraData {
        &self.lie
    }

    /// `e_a · e_s` in normal order, for a normal-ordered word `s`.
    fn left_word(&mut self, a: usize, s: &[usize]) -> Combination {
        if s.is_empty() || a <= s[0] {
            let mut w = Vec::with_capacity(s.len() + 1);
            w.push(a);
            w.extend_from_slice(s);
            return vec![((w, 0), Rational::from_int(1))];
        }
        let key = (a, s.to_vec());
        if let Some(c) = self.left.get(&key) {
            return c.clone();
        }
        let (b, rest) = (s[0], &s[1..]);
        let mut acc: BTreeMap<(Word, u32), Rational> = BTreeMap::new();
        // e_a e_b r = e_b (e_a r) + ν^w Σ_c C^c_{ab} e_c r
        for ((w, k), r) in self.left_word(a, rest) {
            for ((w2, k2), r2) in self.left_word(b, &w) {
                *acc.entry((w2, k + k2)).or_insert_with(Rational::zero) += &r * &r2;
            }
        }
        for c in 0..self.lie.dim() {
            let cab = self.lie.structure(a, b, c).clone();
            if cab.is_zero() {
                continue;
            }
            for ((w, k), r) in self.left_word(c, rest) {
                *acc.entry((w, k + self.weight)).or_insert_with(Rational::zero) += &cab * &r;
            }
        }
        let out: Combination = acc.into_iter().filter(|(_, r)| !r.is_zero()).collect();
        self.left.insert(key, out.clone());
        out
    }

    /// `e_a · x`.
    pub fn left_mul(&mut self, a: usize, x: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for ((w, k), c) in x.terms() {
            for ((w2, k2), r) in self.left_word(a, w) {
                out.add_term(w2, k + k2, c.times(&Scalar::Rat(r)));
            }
        }
        out
    }

    /// Normal form of an arbitrary word.
    pub fn normal_order(&mut self, word: &[usize]) -> UeaElement {
        word.iter().rev().fold(UeaElement::one(), |acc, &a| self.left_mul(a, &acc))
    }

    pub fn mul(&mut self, x: &UeaElement, y: &UeaElement) -> UeaElement {
        let mut out = UeaElement::zero();
        for ((w, k), c) in x.terms() {
            let mut t = y.clone();
            for &a in w.iter().rev() {
                t = self.left_mul(a, &t);
            }
            out.accumulate(&t, *k, c, u32::MAX);
        }
        out
    }

    /// `σ(ξ^e) = Σ_a (e_a / |e|) · e_a σ(ξ^{e − 1_a})`, the full
    /// symmetrization of the monomial.
    fn sym_monomial(&mut self, e: &Exponent) -> UeaElement {
        if let Some(x) = self.sym.get(e) {
            return x.clone();
        }
        let n: u32 = e.iter().sum();
        let out = if n == 0 {
            UeaElement::one()
        } else {
            let mut acc = UeaElement::zero();
            for a in 0..e.len() {
                if e[a] == 0 {
                    continue;
                }
                let mut lower = e.clone();
                lower[a] -= 1;
                let inner = self.sym_monomial(&lower);
                let w = Scalar::Rat(Rational::new(e[a].into(), n.into()));
                acc.accumulate(&self.left_mul(a, &inner), 0, &w, u32::MAX);
            }
            acc
        };
        self.sym.insert(e.clone(), out.clone());
        out
    }

    /// The symmetrization map `σ` on polynomials in the dual coordinates.
    pub fn symmetrize(&mut self, f: &Poly) -> Result<UeaElement> {
        let f = f.compact().align_to(self.lie.vars())?;
        let mut out = UeaElement::zero();
        for (e, c) in f.terms() {
            out = out.add(&self.sym_monomial(e).scale(c));
        }
        Ok(out)
    }

    /// `σ⁻¹`, by peeling off top-degree words: a normal-ordered word equals
    /// the symmetrization of its monomial up to shorter words.
    pub fn unsymmetrize(&mut self, x: &UeaElement, order: usize) -> NuSeries {
        let vars = self.lie.vars().clone();
        let d = self.lie.dim();
        let mut coeffs = vec![Poly::zero(vars.clone()); order + 1];
        let mut rest = x.truncate(order as u32);
        while let Some(top) = rest.degree() {
            let leading: Vec<((Word, u32), Scalar)> = rest
                .terms()
                .iter()
                .filter(|((w, _), _)| w.len() == top)
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect();
            for ((w, k), c) in leading {
                let mut e = vec![0u32; d];
                for &a in &w {
                    e[a] += 1;
                }
                coeffs[k as usize].add_term(e.clone(), c.clone());
                let s = self.sym_monomial(&e);
                rest.accumulate(&s, k, &c.times(&Scalar::from_int(-1)), order as u32);
            }
        }
        NuSeries::from_coeffs(coeffs)
    }

    /// `σ⁻¹(σ(u) σ(v))` truncated at `ν^order`.
    pub fn star(&mut self, u: &Poly, v: &Poly, order: usize) -> Result<NuSeries> {
        let a = self.symmetrize(u)?;
        let b = self.symmetrize(v)?;
        let p = self.mul(&a, &b);
        Ok(self.unsymmetrize(&p, order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, sc};
    use crate::polydiff::monomials;

    #[test]
    fn single_swap() {
        let h = LieAlgebraData::heisenberg();
        let mut u = Uea::gutt(h);
        // e_y e_x = e_x e_y − ν e_z
        let n = u.normal_order(&[1, 0]);
        let mut expected = UeaElement::monomial(vec![0, 1], 0, Scalar::unit());
        expected.add_term(vec![2], 1, sc(-1, 1));
        assert_eq!(n, expected);
    }

    #[test]
    fn symmetrized_pair() {
        // σ(ξ_1 ξ_2) = e_1 e_2 − (ν/2) Σ_c C^c_{12} e_c
        let l = LieAlgebraData::so3();
        let mut u = Uea::gutt(l.clone());
        let f = Poly::var(l.vars().clone(), 0).mul(&Poly::var(l.vars().clone(), 1));
        let mut expected = UeaElement::monomial(vec![0, 1], 0, Scalar::unit());
        expected.add_term(vec![2], 1, Scalar::Rat(rat(-1, 2)));
        assert_eq!(u.symmetrize(&f).unwrap(), expected);
        assert_eq!(u.symmetrize(&Poly::one(l.vars().clone())).unwrap(), UeaElement::one());
    }

    #[test]
    fn unsymmetrize_inverts() {
        for l in [LieAlgebraData::so3(), LieAlgebraData::affine2()] {
            let mut u = Uea::gutt(l.clone());
            for f in monomials(l.vars(), 5) {
                let s = u.symmetrize(&f).unwrap();
                assert_eq!(u.unsymmetrize(&s, 5), NuSeries::from_poly(f, 5));
            }
        }
    }

    #[test]
    fn plain_enveloping_algebra_has_no_nu() {
        let mut u = Uea::new(LieAlgebraData::so3(), 0);
        let n = u.normal_order(&[2, 1, 0]);
        assert!(n.terms().keys().all(|(_, k)| *k == 0));
    }
}
