//! Star products as ν-series of bidifferential operators, and the two
//! associativity oracles.

use super::gerstenhaber::{bracket_series, OpSeries};
use super::multidiff::MultiDiffOp;
use super::polyvector::PolyVector;
use crate::algebra::{exponents_up_to, factorial, Coeff, Exponent, NuSeries, Poly, Scalar, Vars};
use crate::error::{Error, Result};

/// `u ⋆ v = Σ_r ν^r C_r(u, v)` truncated at `ν^N`, with `C_0` the pointwise
/// product and `C_r(1, ·) = C_r(·, 1) = 0` for `r ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarProduct {
    vars: Vars,
    cochains: Vec<MultiDiffOp>,
    poisson: Option<PolyVector>,
}

/// Outcome of a triple-evaluation sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleDefect {
    pub order: usize,
    pub args: [Poly; 3],
    pub value: Poly,
}

/// All monomials in `n` variables of total degree at most `d`.
pub fn monomials(vars: &Vars, d: u32) -> Vec<Poly> {
    exponents_up_to(vars.len(), d)
        .into_iter()
        .map(|e| Poly::monomial(vars.clone(), e, Scalar::unit()))
        .collect()
}

fn total(e: &Exponent) -> u32 {
    e.iter().sum()
}

/// `C(x^a, x^b)` for a bidifferential `C`, touching only the terms whose
/// derivatives fit under `a` and `b`.
fn eval_on_monomials(op: &MultiDiffOp, a: &Exponent, b: &Exponent) -> Poly {
    let falling = |e: &Exponent, d: &Exponent| {
        e.iter().zip(d).fold(crate::algebra::int(1), |acc, (&x, &k)| acc * factorial(x) / factorial(x - k))
    };
    let mut out = Poly::zero(op.vars().clone());
    for (sig, c) in op.terms() {
        let (da, db) = (&sig[0], &sig[1]);
        if da.iter().zip(a).any(|(d, x)| d > x) || db.iter().zip(b).any(|(d, x)| d > x) {
            continue;
        }
        let e: Exponent = (0..a.len()).map(|i| a[i] - da[i] + b[i] - db[i]).collect();
        let w = Scalar::Rat(falling(a, da) * falling(b, db));
        for (ce, cc) in c.terms() {
            let m: Exponent = ce.iter().zip(&e).map(|(x, y)| x + y).collect();
            out.add_term(m, cc.times(&w));
        }
    }
    out
}

impl StarProduct {
    pub fn new(vars: Vars, cochains: Vec<MultiDiffOp>) -> Result<Self> {
        if cochains.is_empty() {
            return Err(Error::Invalid("a star product needs at least C_0".into()));
        }
        let mut cs = Vec::with_capacity(cochains.len());
        for (r, c) in cochains.into_iter().enumerate() {
            if c.arity() != 2 {
                return Err(Error::ArityMismatch { expected: 2, found: c.arity() });
            }
            let c = c.extend_to(&vars)?;
            if r >= 1 && !c.vanishes_on_constants() {
                return Err(Error::Invalid(format!("C_{r} does not vanish on constants")));
            }
            cs.push(c);
        }
        if cs[0] != MultiDiffOp::product(vars.clone(), 2) {
            return Err(Error::Invalid("C_0 is not the pointwise product".into()));
        }
        Ok(StarProduct { vars, cochains: cs, poisson: None })
    }

    /// The undeformed product `C = 0`.
    pub fn trivial(vars: Vars, order: usize) -> Self {
        let mut cochains = vec![MultiDiffOp::product(vars.clone(), 2)];
        cochains.resize(order + 1, MultiDiffOp::zero(vars.clone(), 2));
        StarProduct { vars, cochains, poisson: None }
    }

    /// Attaches a Poisson bivector, checking `C_1(u,v) − C_1(v,u) = {u,v}`.
    pub fn with_poisson(mut self, p: PolyVector) -> Result<Self> {
        if self.order() >= 1 {
            let c1 = &self.cochains[1];
            let skew = c1.sub(&c1.transposed());
            let bracket = p.to_bidiff().extend_to(&self.vars)?;
            if skew != bracket {
                return Err(Error::Invalid("skew part of C_1 differs from the Poisson bracket".into()));
            }
        }
        self.poisson = Some(p);
        Ok(self)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn order(&self) -> usize {
        self.cochains.len() - 1
    }

    pub fn cochains(&self) -> &[MultiDiffOp] {
        &self.cochains
    }

    pub fn cochain(&self, r: usize) -> &MultiDiffOp {
        &self.cochains[r]
    }

    pub fn poisson(&self) -> Option<&PolyVector> {
        self.poisson.as_ref()
    }

    /// Drops the cochains above `ν^order`.
    pub fn truncate(&self, order: usize) -> Self {
        let mut out = self.clone();
        out.cochains.truncate(order + 1);
        out
    }

    /// Highest derivative order appearing in any slot of any cochain.
    pub fn max_operator_order(&self) -> u32 {
        self.cochains.iter().flat_map(|c| c.slot_orders()).max().unwrap_or(0)
    }

    pub fn product(&self, u: &Poly, v: &Poly) -> NuSeries {
        let coeffs = self
            .cochains
            .iter()
            .map(|c| c.eval(&[u.clone(), v.clone()]).expect("arity two"))
            .collect();
        NuSeries::from_coeffs(coeffs)
    }

    /// ν-bilinear extension to series, truncated at the smallest order.
    pub fn product_series(&self, a: &NuSeries, b: &NuSeries) -> NuSeries {
        let n = self.order().min(a.order()).min(b.order());
        let mut coeffs: Vec<Poly> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc: Option<Poly> = None;
            for r in 0..=k {
                let c = &self.cochains[r];
                if c.is_zero() {
                    continue;
                }
                for i in 0..=k - r {
                    let (x, y) = (a.coeff(i), b.coeff(k - r - i));
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    let t = c.eval(&[x.clone(), y.clone()]).expect("arity two");
                    acc = Some(match acc {
                        None => t,
                        Some(s) => s.add(&t),
                    });
                }
            }
            coeffs.push(acc.unwrap_or_else(|| Poly::zero(self.vars.clone())));
        }
        NuSeries::from_coeffs(coeffs)
    }

    /// `u ⋆ v − v ⋆ u`.
    pub fn commutator(&self, u: &Poly, v: &Poly) -> NuSeries {
        self.product(u, v).sub(&self.product(v, u))
    }

    /// `(u ⋆ v) ⋆ w − u ⋆ (v ⋆ w)`.
    pub fn associator(&self, u: &Poly, v: &Poly, w: &Poly) -> NuSeries {
        let n = self.order();
        let left = self.product_series(&self.product(u, v), &NuSeries::from_poly(w.clone(), n));
        let right = self.product_series(&NuSeries::from_poly(u.clone(), n), &self.product(v, w));
        left.sub(&right)
    }

    /// The 3-cochain series `[μ + C, μ + C]_G`; zero iff `⋆` is associative
    /// modulo `ν^{N+1}`.
    pub fn maurer_cartan_defect(&self) -> OpSeries {
        bracket_series(&self.cochains, &self.cochains)
    }

    /// Evaluates the associator on all monomial triples of total degree at
    /// most `d` and reports the lowest failing order with a witness.
    pub fn triple_defect(&self, d: u32) -> Option<TripleDefect> {
        let monos: Vec<(u32, Poly)> = exponents_up_to(self.vars.len(), d)
            .into_iter()
            .map(|e| (total(&e), Poly::monomial(self.vars.clone(), e, Scalar::unit())))
            .collect();
        let mut best: Option<TripleDefect> = None;
        for (da, a) in &monos {
            for (db, b) in monos.iter().filter(|(db, _)| da + db <= d) {
                let ab = self.product(a, b);
                for (_, c) in monos.iter().filter(|(dc, _)| da + db + dc <= d) {
                    let n = self.order();
                    let left = self.product_series(&ab, &NuSeries::from_poly(c.clone(), n));
                    let right = self.product_series(&NuSeries::from_poly(a.clone(), n), &self.product(b, c));
                    let diff = left.sub(&right);
                    if let Some(k) = diff.first_nonzero() {
                        if best.as_ref().is_none_or(|t| k < t.order) {
                            best = Some(TripleDefect {
                                order: k,
                                args: [a.clone(), b.clone(), c.clone()],
                                value: diff.coeff(k).clone(),
                            });
                        }
                    }
                }
            }
        }
        best
    }

    /// Runs both oracles and returns the lowest failing order of each. The
    /// triple sweep uses total degree `N + 2m`, `m` the highest operator
    /// order, since a composite `C_i(C_j(·,·),·)` can differentiate one
    /// argument up to `2m` times.
    pub fn associativity_orders(&self) -> (Option<usize>, Option<usize>) {
        let d = self.order() as u32 + 2 * self.max_operator_order();
        let mc = self.maurer_cartan_defect().first_nonzero();
        let triple = self.triple_defect(d).map(|t| t.order);
        (mc, triple)
    }

    /// Recovers the cochains of a bidifferential product known only through
    /// its values on monomials.
    ///
    /// Coefficients are solved triangularly over monomial pairs. The
    /// derivative bound per slot starts at `min_bound` and grows until one
    /// further shell of monomials adds no new terms; `max_bound` caps it.
    pub fn fit<F>(vars: Vars, order: usize, min_bound: u32, max_bound: u32, mut black_box: F) -> Result<Self>
    where
        F: FnMut(&Poly, &Poly) -> Result<NuSeries>,
    {
        let n = vars.len();
        let mut ops: Vec<MultiDiffOp> = vec![MultiDiffOp::zero(vars.clone(), 2); order + 1];
        let mono = |e: &Exponent| Poly::monomial(vars.clone(), e.clone(), Scalar::unit());
        let fact = |e: &Exponent| e.iter().fold(crate::algebra::int(1), |acc, &x| acc * factorial(x));
        let mut done: std::collections::BTreeSet<(Exponent, Exponent)> = Default::default();
        let mut bound = min_bound;
        loop {
            let exps = exponents_up_to(n, bound + 1);
            let mut pairs: Vec<(&Exponent, &Exponent)> = Vec::new();
            for a in &exps {
                for b in &exps {
                    if !done.contains(&(a.clone(), b.clone())) {
                        pairs.push((a, b));
                    }
                }
            }
            pairs.sort_by_key(|(a, b)| total(a) + total(b));
            let mut grew = false;
            for (a, b) in pairs {
                let (u, v) = (mono(a), mono(b));
                let value = black_box(&u, &v)?;
                if value.order() < order {
                    return Err(Error::Invalid(format!("black box returned order {} < {order}", value.order())));
                }
                let w = Coeff::inverse(&(fact(a) * fact(b))).expect("nonzero factorial");
                for (r, op) in ops.iter_mut().enumerate() {
                    let current = eval_on_monomials(op, a, b);
                    let resid = value.coeff(r).sub(&current);
                    if !resid.is_zero() {
                        op.add_term(vec![a.clone(), b.clone()], resid.scale(&Scalar::Rat(w.clone())));
                        if total(a) > bound || total(b) > bound {
                            grew = true;
                        }
                    }
                }
                done.insert((a.clone(), b.clone()));
            }
            if !grew {
                break;
            }
            bound += 1;
            if bound > max_bound {
                return Err(Error::Invalid(format!("operator order exceeds {max_bound}")));
            }
        }
        StarProduct::new(vars, ops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat, vars};

    fn qp() -> Vars {
        vars(&["q", "p"])
    }

    fn half_bracket_only() -> StarProduct {
        let p = PolyVector::bivector(qp(), &[(0, 1, Poly::one(qp()))]).unwrap();
        let c1 = p.to_bidiff().scale_rat(&rat(1, 2));
        let c2 = MultiDiffOp::zero(qp(), 2);
        StarProduct::new(qp(), vec![MultiDiffOp::product(qp(), 2), c1, c2]).unwrap().with_poisson(p).unwrap()
    }

    #[test]
    fn trivial_product_is_associative() {
        let s = StarProduct::trivial(qp(), 3);
        assert!(s.maurer_cartan_defect().is_zero());
        assert_eq!(s.triple_defect(4), None);
    }

    #[test]
    fn first_order_truncation_fails_at_second_order() {
        let s = half_bracket_only();
        assert_eq!(s.maurer_cartan_defect().first_nonzero(), Some(2));
        let t = s.triple_defect(4).unwrap();
        assert_eq!(t.order, 2);
        assert_eq!(s.associativity_orders(), (Some(2), Some(2)));
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let mu = MultiDiffOp::product(qp(), 2);
        let mut c1 = MultiDiffOp::zero(qp(), 2);
        c1.add_term(vec![vec![0, 0], vec![1, 0]], Poly::one(qp()));
        assert!(StarProduct::new(qp(), vec![mu.clone(), c1]).is_err());
        assert!(StarProduct::new(qp(), vec![mu.scale_rat(&int(2))]).is_err());
        let p = PolyVector::bivector(qp(), &[(0, 1, Poly::one(qp()))]).unwrap();
        let sym = MultiDiffOp::tensor(
            &MultiDiffOp::vector_field(qp(), &[Poly::one(qp()), Poly::zero(qp())]),
            &MultiDiffOp::vector_field(qp(), &[Poly::one(qp()), Poly::zero(qp())]),
        );
        assert!(StarProduct::new(qp(), vec![mu, sym]).unwrap().with_poisson(p).is_err());
    }

    #[test]
    fn fit_recovers_cochains() {
        let s = half_bracket_only();
        let fitted = StarProduct::fit(qp(), 2, 1, 4, |u, v| Ok(s.product(u, v))).unwrap();
        assert_eq!(fitted.cochains(), s.cochains());
    }
}
