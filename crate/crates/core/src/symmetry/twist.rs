//! Drinfeld twists in `U(g)^{⊗k}[[ν]]` and the deformations they induce.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{factorial, Coeff, NuSeries, Poly, Rational, Scalar, Vars};
use crate::error::{Error, Result};
use crate::gutt::{LieAlgebraData, Uea, UeaElement, Word};
use crate::polydiff::{gerstenhaber_insert, MultiDiffOp, StarProduct};

/// `Σ c · ν^k e_{w_1} ⊗ ⋯ ⊗ e_{w_m}` with normal-ordered legs.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement {
    legs: usize,
    terms: BTreeMap<(Vec<Word>, u32), Rational>,
}

fn as_rational(s: &Scalar) -> Rational {
    match s {
        Scalar::Rat(r) => r.clone(),
        Scalar::Func(f) => f.as_constant().expect("structure constants are rational"),
    }
}

impl TensorElement {
    pub fn zero(legs: usize) -> Self {
        TensorElement { legs, terms: BTreeMap::new() }
    }

    pub fn one(legs: usize) -> Self {
        let mut out = Self::zero(legs);
        out.add_term(vec![Vec::new(); legs], 0, Rational::one());
        out
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn terms(&self) -> &BTreeMap<(Vec<Word>, u32), Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c ν^k e_{w_1} ⊗ ⋯`; legs must already be normal-ordered.
    pub fn add_term(&mut self, words: Vec<Word>, k: u32, c: Rational) {
        assert_eq!(words.len(), self.legs);
        if c.is_zero() {
            return;
        }
        let key = (words, k);
        let s = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(key, s);
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
        self.add(&o.scale(&Rational::from_int(-1)))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.legs);
        for ((w, k), c) in &self.terms {
            out.add_term(w.clone(), *k, c * r);
        }
        out
    }

    pub fn truncate(&self, order: u32) -> Self {
        TensorElement { legs: self.legs, terms: self.terms.iter().filter(|((_, k), _)| *k <= order).map(|(a, b)| (a.clone(), b.clone())).collect() }
    }

    /// Terms at `ν^k`.
    pub fn at_order(&self, k: u32) -> Self {
        TensorElement { legs: self.legs, terms: self.terms.iter().filter(|((_, j), _)| *j == k).map(|(a, b)| (a.clone(), b.clone())).collect() }
    }

    /// Lowest `ν`-order with a nonzero term.
    pub fn first_nonzero(&self) -> Option<u32> {
        self.terms.keys().map(|(_, k)| *k).min()
    }

    /// Legwise product in the enveloping algebra, truncated at `ν^order`.
    pub fn mul(&self, o: &Self, engine: &mut Uea, order: u32) -> Self {
        assert_eq!(self.legs, o.legs);
        let mut out = Self::zero(self.legs);
        for ((wa, ka), ca) in &self.terms {
            for ((wb, kb), cb) in &o.terms {
                if ka + kb > order {
                    continue;
                }
                let mut partial: Vec<(Vec<Word>, Rational)> = vec![(Vec::new(), ca * cb)];
                for (x, y) in wa.iter().zip(wb) {
                    let leg = engine.mul(
                        &UeaElement::monomial(x.clone(), 0, Scalar::unit()),
                        &UeaElement::monomial(y.clone(), 0, Scalar::unit()),
                    );
                    let mut next = Vec::new();
                    for (ws, c) in &partial {
                        for ((w, _), s) in leg.terms() {
                            let mut ws = ws.clone();
                            ws.push(w.clone());
                            next.push((ws, c * as_rational(s)));
                        }
                    }
                    partial = next;
                }
                for (ws, c) in partial {
                    out.add_term(ws, ka + kb, c);
                }
            }
        }
        out
    }

    /// `Δ` applied to leg `i`: `Δ(e_w) = Σ_S e_{w_S} ⊗ e_{w_{S^c}}`.
    pub fn coproduct(&self, i: usize) -> Self {
        let mut out = Self::zero(self.legs + 1);
        for ((ws, k), c) in &self.terms {
            let w = &ws[i];
            for mask in 0u64..(1u64 << w.len()) {
                let (mut left, mut right) = (Vec::new(), Vec::new());
                for (pos, &a) in w.iter().enumerate() {
                    if mask & (1 << pos) != 0 {
                        left.push(a);
                    } else {
                        right.push(a);
                    }
                }
                let mut nw: Vec<Word> = ws[..i].to_vec();
                nw.push(left);
                nw.push(right);
                nw.extend(ws[i + 1..].iter().cloned());
                out.add_term(nw, *k, c.clone());
            }
        }
        out
    }

    /// `ε` applied to leg `i`.
    pub fn counit(&self, i: usize) -> Self {
        let mut out = Self::zero(self.legs - 1);
        for ((ws, k), c) in &self.terms {
            if ws[i].is_empty() {
                let mut nw = ws.clone();
                nw.remove(i);
                out.add_term(nw, *k, c.clone());
            }
        }
        out
    }

    /// Inserts a unit leg at position `i`.
    pub fn with_unit(&self, i: usize) -> Self {
        let mut out = Self::zero(self.legs + 1);
        for ((ws, k), c) in &self.terms {
            let mut nw = ws.clone();
            nw.insert(i, Vec::new());
            out.add_term(nw, *k, c.clone());
        }
        out
    }
}

/// A truncated formal twist `F = 1⊗1 + O(ν)` over a Lie algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistElement {
    lie: LieAlgebraData,
    order: u32,
    f: TensorElement,
}

impl TwistElement {
    /// Terms `(w_1, w_2, k, c)` for `c ν^k e_{w_1} ⊗ e_{w_2}`; words are put
    /// in normal order. The `ν⁰` part must be exactly `1 ⊗ 1`.
    pub fn new(lie: LieAlgebraData, order: u32, terms: &[(Word, Word, u32, Rational)]) -> Result<Self> {
        let d = lie.dim();
        let mut engine = Uea::new(lie.clone(), 0);
        let mut f = TensorElement::zero(2);
        for (w1, w2, k, c) in terms {
            if w1.iter().chain(w2).any(|&a| a >= d) {
                return Err(Error::Invalid(format!("generator index out of range for dimension {d}")));
            }
            if *k > order {
                continue;
            }
            let (a, b) = (engine.normal_order(w1), engine.normal_order(w2));
            for ((x, _), s) in a.terms() {
                for ((y, _), t) in b.terms() {
                    f.add_term(vec![x.clone(), y.clone()], *k, c * as_rational(s) * as_rational(t));
                }
            }
        }
        if f.at_order(0) != TensorElement::one(2) {
            return Err(Error::Invalid("the ν⁰ part of a twist must be 1⊗1".into()));
        }
        Ok(TwistElement { lie, order, f })
    }

    pub fn trivial(lie: LieAlgebraData, order: u32) -> Self {
        TwistElement { lie, order, f: TensorElement::one(2) }
    }

    /// `exp((ν/2) Σ P^{ij} e_i ⊗ e_j)` through `ν^order`.
    pub fn exponential(lie: LieAlgebraData, p: &[Vec<Rational>], order: u32) -> Result<Self> {
        let d = lie.dim();
        if p.len() != d || p.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: p.len() });
        }
        let mut engine = Uea::new(lie.clone(), 0);
        let mut x = TensorElement::zero(2);
        for (i, row) in p.iter().enumerate() {
            for (j, pij) in row.iter().enumerate() {
                x.add_term(vec![vec![i], vec![j]], 1, pij / Rational::from_int(2));
            }
        }
        let mut f = TensorElement::one(2);
        let mut power = TensorElement::one(2);
        for k in 1..=order {
            power = power.mul(&x, &mut engine, order);
            f = f.add(&power.scale(&Coeff::inverse(&factorial(k)).expect("nonzero")));
        }
        Ok(TwistElement { lie, order, f })
    }

    pub fn lie(&self) -> &LieAlgebraData {
        &self.lie
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn element(&self) -> &TensorElement {
        &self.f
    }
}

/// `(Δ⊗id)(F)(F⊗1) − (id⊗Δ)(F)(1⊗F)` and the counit defects
/// `(ε⊗id)F − 1`, `(id⊗ε)F − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistDefect {
    pub cocycle: TensorElement,
    pub left_counit: TensorElement,
    pub right_counit: TensorElement,
}

impl TwistDefect {
    pub fn is_zero(&self) -> bool {
        self.cocycle.is_zero() && self.left_counit.is_zero() && self.right_counit.is_zero()
    }

    /// Lowest `ν`-order at which any of the identities fails.
    pub fn first_nonzero(&self) -> Option<u32> {
        [&self.cocycle, &self.left_counit, &self.right_counit].iter().filter_map(|t| t.first_nonzero()).min()
    }
}

pub fn twist_cocycle_defect(f: &TwistElement) -> TwistDefect {
    let mut engine = Uea::new(f.lie.clone(), 0);
    let n = f.order;
    let lhs = f.f.coproduct(0).mul(&f.f.with_unit(2), &mut engine, n);
    let rhs = f.f.coproduct(1).mul(&f.f.with_unit(0), &mut engine, n);
    TwistDefect {
        cocycle: lhs.sub(&rhs),
        left_counit: f.f.counit(0).sub(&TensorElement::one(1)),
        right_counit: f.f.counit(1).sub(&TensorElement::one(1)),
    }
}

/// Checks that `e_a ↦ X_a` is a Lie algebra morphism into vector fields.
fn check_action(lie: &LieAlgebraData, action: &[MultiDiffOp]) -> Result<Vars> {
    if action.len() != lie.dim() {
        return Err(Error::BadAction(format!("{} fields for a {}-dimensional algebra", action.len(), lie.dim())));
    }
    let vars = action[0].vars().clone();
    for (a, x) in action.iter().enumerate() {
        if x.arity() != 1 || x.vars() != &vars {
            return Err(Error::BadAction(format!("X_{a} is not a 1-differential operator on the common variables")));
        }
        if x.terms().keys().any(|sig| sig[0].iter().sum::<u32>() != 1) {
            return Err(Error::BadAction(format!("X_{a} is not a derivation")));
        }
    }
    for a in 0..action.len() {
        for b in a + 1..action.len() {
            let comm = gerstenhaber_insert(&action[a], &action[b], 1)?.sub(&gerstenhaber_insert(&action[b], &action[a], 1)?);
            let mut rhs = MultiDiffOp::zero(vars.clone(), 1);
            for (c, xc) in action.iter().enumerate() {
                let s = lie.structure(a, b, c);
                if !s.is_zero() {
                    rhs = rhs.add(&xc.scale_rat(s));
                }
            }
            if comm != rhs {
                return Err(Error::BadAction(format!("[X_{a}, X_{b}] differs from the image of [e_{a}, e_{b}]")));
            }
        }
    }
    Ok(vars)
}

/// The product `μ(F • (u ⊗ v))` as cochains, with `e_w` acting by
/// `X_{w_1} ∘ ⋯ ∘ X_{w_k}`.
pub fn udf_star(f: &TwistElement, action: &[MultiDiffOp]) -> Result<StarProduct> {
    let vars = check_action(&f.lie, action)?;
    let mut words: BTreeMap<Word, MultiDiffOp> = BTreeMap::new();
    let mut op = |w: &Word| -> Result<MultiDiffOp> {
        if let Some(o) = words.get(w) {
            return Ok(o.clone());
        }
        let mut o = MultiDiffOp::identity(vars.clone());
        for &a in w.iter().rev() {
            o = gerstenhaber_insert(&action[a], &o, 1)?;
        }
        words.insert(w.clone(), o.clone());
        Ok(o)
    };
    let mut cochains = vec![MultiDiffOp::zero(vars.clone(), 2); f.order as usize + 1];
    for ((ws, k), c) in f.f.terms() {
        let t = MultiDiffOp::tensor(&op(&ws[0])?, &op(&ws[1])?).scale_rat(c);
        cochains[*k as usize] = cochains[*k as usize].add(&t);
    }
    StarProduct::new(vars, cochains)
}

/// `a ⋆_F b = μ(F • (a ⊗ b))`.
pub fn apply_udf(f: &TwistElement, action: &[MultiDiffOp], u: &Poly, v: &Poly) -> Result<NuSeries> {
    let s = udf_star(f, action)?;
    let vars = s.vars().clone();
    Ok(s.product(&u.compact().align_to(&vars)?, &v.compact().align_to(&vars)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, vars};
    use crate::moyal::{moyal_star, ConstantPoisson};
    use crate::polydiff::monomials;

    fn standard_p() -> Vec<Vec<Rational>> {
        vec![vec![int(0), int(1)], vec![int(-1), int(0)]]
    }

    fn abelian2() -> LieAlgebraData {
        LieAlgebraData::abelian(vars(&["X1", "X2"]))
    }

    #[test]
    fn abelian_exponential_is_a_twist() {
        let f = TwistElement::exponential(abelian2(), &standard_p(), 4).unwrap();
        assert!(twist_cocycle_defect(&f).is_zero());
        assert!(twist_cocycle_defect(&TwistElement::trivial(abelian2(), 4)).is_zero());
    }

    #[test]
    fn broken_twist_fails_at_order_two() {
        let one = || (vec![], vec![], 0, int(1));
        let f = TwistElement::new(abelian2(), 3, &[one(), (vec![0, 1], vec![0], 2, int(1))]).unwrap();
        let d = twist_cocycle_defect(&f);
        assert_eq!(d.first_nonzero(), Some(2));
        assert!(d.left_counit.is_zero() && d.right_counit.is_zero());
        let g = TwistElement::new(abelian2(), 3, &[one(), (vec![0], vec![], 1, int(1))]).unwrap();
        assert!(!twist_cocycle_defect(&g).right_counit.is_zero());
    }

    #[test]
    fn coproduct_of_generators() {
        let mut x = TensorElement::zero(1);
        x.add_term(vec![vec![0, 1]], 0, int(1));
        let d = x.coproduct(0);
        assert_eq!(d.terms().len(), 4);
        assert_eq!(d.counit(0), x);
        assert_eq!(d.counit(1), x);
    }

    #[test]
    fn udf_reproduces_moyal() {
        let qp = crate::moyal::canonical_vars(1);
        let action: Vec<MultiDiffOp> = (0..2)
            .map(|i| {
                let mut c = vec![Poly::zero(qp.clone()); 2];
                c[i] = Poly::one(qp.clone());
                MultiDiffOp::vector_field(qp.clone(), &c)
            })
            .collect();
        let f = TwistElement::exponential(abelian2(), &standard_p(), 4).unwrap();
        let s = udf_star(&f, &action).unwrap();
        let m = moyal_star(&ConstantPoisson::standard(1), 4);
        assert_eq!(s.cochains(), m.cochains());
        let trivial = udf_star(&TwistElement::trivial(abelian2(), 4), &action).unwrap();
        let (u, v) = (Poly::var(qp.clone(), 0), Poly::var(qp.clone(), 1));
        assert_eq!(trivial.product(&u, &v), NuSeries::from_poly(u.mul(&v), 4));
        for u in monomials(&qp, 2) {
            assert_eq!(apply_udf(&f, &action, &u, &v).unwrap(), m.product(&u, &v));
        }
    }

    #[test]
    fn noncommuting_fields_are_rejected() {
        let xs = vars(&["x1", "x2", "x3"]);
        let z = Poly::zero(xs.clone());
        let one = Poly::one(xs.clone());
        let d1 = MultiDiffOp::vector_field(xs.clone(), &[one.clone(), z.clone(), z.clone()]);
        let x1d3 = MultiDiffOp::vector_field(xs.clone(), &[z.clone(), z.clone(), Poly::var(xs.clone(), 0)]);
        let f = TwistElement::trivial(abelian2(), 2);
        assert!(matches!(udf_star(&f, &[d1, x1d3.clone()]), Err(Error::BadAction(_))));
        let d2 = MultiDiffOp::vector_field(xs.clone(), &[z.clone(), one, z]);
        let f = TwistElement::exponential(abelian2(), &standard_p(), 3).unwrap();
        let s = udf_star(&f, &[d2, x1d3]).unwrap();
        assert!(s.maurer_cartan_defect().is_zero());
        assert!(!s.cochain(1).is_zero());
    }
}
