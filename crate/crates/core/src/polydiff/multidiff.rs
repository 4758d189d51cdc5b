//! Multidifferential operators with polynomial coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::{factorial, merge_vars, Coeff, Exponent, Poly, Rational, Scalar, Vars};
use crate::error::{Error, Result};

/// Per-slot derivative multi-indices of one term.
pub type Signature = Vec<Exponent>;

/// `A(f_1,…,f_k) = Σ_terms coeff · Π_j ∂^{α_j} f_j`.
///
/// Coefficients live in the operator's variable context; each signature
/// appears at most once.
#[derive(Clone, PartialEq)]
pub struct MultiDiffOp {
    vars: Vars,
    arity: usize,
    terms: BTreeMap<Signature, Poly>,
}

impl MultiDiffOp {
    pub fn zero(vars: Vars, arity: usize) -> Self {
        assert!(arity >= 1, "multidifferential operators take at least one argument");
        MultiDiffOp { vars, arity, terms: BTreeMap::new() }
    }

    /// Pointwise multiplication of `arity` functions.
    pub fn product(vars: Vars, arity: usize) -> Self {
        let mut op = Self::zero(vars.clone(), arity);
        let n = vars.len();
        op.add_term(vec![vec![0; n]; arity], Poly::one(vars));
        op
    }

    /// The identity 1-differential operator.
    pub fn identity(vars: Vars) -> Self {
        Self::product(vars, 1)
    }

    /// The vector field `Σ_i X^i ∂_i` as a 1-differential operator.
    pub fn vector_field(vars: Vars, components: &[Poly]) -> Self {
        assert_eq!(components.len(), vars.len());
        let mut op = Self::zero(vars.clone(), 1);
        for (i, c) in components.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            op.add_term(vec![e], c.aligned(&vars));
        }
        op
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Hochschild degree `|A| = arity − 1`.
    pub fn degree(&self) -> i64 {
        self.arity as i64 - 1
    }

    pub fn terms(&self) -> &BTreeMap<Signature, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · ∂^{derivs[0]} ⊗ … ⊗ ∂^{derivs[k-1]}`; multi-indices are
    /// relative to the operator's context.
    pub fn add_term(&mut self, derivs: Signature, coeff: Poly) {
        assert_eq!(derivs.len(), self.arity, "one multi-index per slot");
        debug_assert!(derivs.iter().all(|d| d.len() == self.vars.len()));
        if coeff.is_zero() {
            return;
        }
        let coeff = coeff.aligned(&self.vars);
        use std::collections::btree_map::Entry;
        match self.terms.entry(derivs) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&coeff);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Re-expresses the operator in a larger context.
    pub fn extend_to(&self, target: &Vars) -> Result<Self> {
        if self.vars[..] == target[..] {
            return Ok(MultiDiffOp { vars: target.clone(), ..self.clone() });
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for name in self.vars.iter() {
            let j = target
                .iter()
                .position(|t| t == name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            map.push(j);
        }
        let mut out = Self::zero(target.clone(), self.arity);
        for (sig, c) in &self.terms {
            let nsig = sig
                .iter()
                .map(|a| {
                    let mut e = vec![0; target.len()];
                    for (i, &x) in a.iter().enumerate() {
                        e[map[i]] = x;
                    }
                    e
                })
                .collect();
            out.add_term(nsig, c.aligned(target));
        }
        Ok(out)
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        let v = merge_vars(&self.vars, &other.vars);
        (self.extend_to(&v).unwrap(), other.extend_to(&v).unwrap())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "cannot add operators of different arity");
        let (mut a, b) = self.unify(other);
        for (sig, c) in b.terms {
            a.add_term(sig, c);
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.scale(&Scalar::Rat(r.clone()))
    }

    pub fn map_coeffs<F: Fn(&Poly) -> Poly>(&self, f: F) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.arity);
        for (sig, c) in &self.terms {
            out.add_term(sig.clone(), f(c));
        }
        out
    }

    /// Swaps the arguments of a bidifferential operator.
    pub fn transposed(&self) -> Self {
        assert_eq!(self.arity, 2);
        let mut out = Self::zero(self.vars.clone(), 2);
        for (sig, c) in &self.terms {
            out.add_term(vec![sig[1].clone(), sig[0].clone()], c.clone());
        }
        out
    }

    /// Highest total derivative order in each slot.
    pub fn slot_orders(&self) -> Vec<u32> {
        let mut out = vec![0; self.arity];
        for sig in self.terms.keys() {
            for (j, a) in sig.iter().enumerate() {
                out[j] = out[j].max(a.iter().sum());
            }
        }
        out
    }

    /// True if the operator vanishes whenever some argument is constant.
    pub fn vanishes_on_constants(&self) -> bool {
        self.terms.keys().all(|sig| sig.iter().all(|a| a.iter().any(|&x| x > 0)))
    }

    /// Evaluates `A(args…)` exactly.
    pub fn eval(&self, args: &[Poly]) -> Result<Poly> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        let v = args.iter().fold(self.vars.clone(), |v, a| merge_vars(&v, a.vars()));
        let op = self.extend_to(&v)?;
        let args: Vec<Poly> = args.iter().map(|a| a.aligned(&v)).collect();
        let mut cache: Vec<HashMap<Exponent, Poly>> = vec![HashMap::new(); self.arity];
        let mut acc = Poly::zero(v.clone());
        for (sig, c) in &op.terms {
            let mut t = c.clone();
            for (j, a) in sig.iter().enumerate() {
                let d = cache[j].entry(a.clone()).or_insert_with(|| args[j].derive_multi(a));
                if d.is_zero() {
                    t = Poly::zero(v.clone());
                    break;
                }
                t = t.mul(d);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Fixes argument `slot` (1-based) to the polynomial `f`, leaving an
    /// operator of arity one less.
    pub fn partial_eval(&self, slot: usize, f: &Poly) -> Result<Self> {
        if slot == 0 || slot > self.arity {
            return Err(Error::SlotOutOfRange { slot, arity: self.arity });
        }
        if self.arity == 1 {
            return Err(Error::ArityMismatch { expected: 2, found: 1 });
        }
        let v = merge_vars(&self.vars, f.vars());
        let op = self.extend_to(&v)?;
        let f = f.aligned(&v);
        let mut out = Self::zero(v, self.arity - 1);
        for (sig, c) in &op.terms {
            let d = f.derive_multi(&sig[slot - 1]);
            if d.is_zero() {
                continue;
            }
            let mut nsig = sig.clone();
            nsig.remove(slot - 1);
            out.add_term(nsig, c.mul(&d));
        }
        Ok(out)
    }

    /// The bidifferential operator `(f, g) ↦ A(f) · B(g)` for 1-differential
    /// operators `A`, `B`.
    pub fn tensor(a: &Self, b: &Self) -> Self {
        assert!(a.arity == 1 && b.arity == 1);
        let (a, b) = a.unify(b);
        let mut out = Self::zero(a.vars.clone(), 2);
        for (sa, ca) in &a.terms {
            for (sb, cb) in &b.terms {
                out.add_term(vec![sa[0].clone(), sb[0].clone()], ca.mul(cb));
            }
        }
        out
    }
}

/// All ways of writing `alpha` as an ordered sum of `parts` multi-indices,
/// with the multinomial weight `alpha! / Π γ_i!`.
pub(crate) fn leibniz_splits(alpha: &[u32], parts: usize) -> Vec<(Vec<Exponent>, Rational)> {
    let n = alpha.len();
    let mut out = vec![(vec![vec![0; n]; parts], Rational::from_int(1))];
    for (v, &a) in alpha.iter().enumerate() {
        let comps = compositions(a, parts);
        let mut next = Vec::with_capacity(out.len() * comps.len());
        for (split, w) in &out {
            for comp in &comps {
                let mut s = split.clone();
                let mut weight = w.clone() * factorial(a);
                for (i, &c) in comp.iter().enumerate() {
                    s[i][v] = c;
                    weight /= factorial(c);
                }
                next.push((s, weight));
            }
        }
        out = next;
    }
    out
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl fmt::Debug for MultiDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let slot = |a: &Exponent| -> String {
            let parts: Vec<String> = a
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("d{}", self.vars[i]) } else { format!("d{}^{}", self.vars[i], k) })
                .collect();
            if parts.is_empty() {
                "1".into()
            } else {
                parts.join("")
            }
        };
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(sig, c)| {
                let s: Vec<String> = sig.iter().map(slot).collect();
                format!("({c})[{}]", s.join(" ⊗ "))
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, vars};

    fn qp() -> Vars {
        vars(&["q", "p"])
    }

    fn q() -> Poly {
        Poly::var(qp(), 0)
    }

    fn p() -> Poly {
        Poly::var(qp(), 1)
    }

    #[test]
    fn mixed_first_derivatives() {
        let mut a = MultiDiffOp::zero(qp(), 2);
        a.add_term(vec![vec![1, 0], vec![0, 1]], Poly::one(qp()));
        let r = a.eval(&[q().mul(&q()), p().mul(&p())]).unwrap();
        assert_eq!(r, q().mul(&p()).scale(&Scalar::Rat(int(4))));
    }

    #[test]
    fn identity_and_product() {
        let id = MultiDiffOp::identity(qp());
        assert_eq!(id.eval(&[q().pow(3)]).unwrap(), q().pow(3));
        let mu = MultiDiffOp::product(qp(), 2);
        assert_eq!(mu.eval(&[q(), p()]).unwrap(), q().mul(&p()));
    }

    #[test]
    fn arity_is_checked() {
        let mu = MultiDiffOp::product(qp(), 2);
        assert_eq!(mu.eval(&[q()]), Err(Error::ArityMismatch { expected: 2, found: 1 }));
    }

    #[test]
    fn leibniz_weights_sum_to_powers() {
        // Σ multinomial weights = parts^{|α|}
        let splits = leibniz_splits(&[2, 1], 3);
        let total: Rational = splits.iter().map(|(_, w)| w.clone()).sum();
        assert_eq!(total, int(27));
    }

    #[test]
    fn partial_evaluation_matches_full() {
        let mut a = MultiDiffOp::zero(qp(), 2);
        a.add_term(vec![vec![1, 0], vec![0, 1]], q());
        a.add_term(vec![vec![0, 0], vec![2, 0]], p());
        let f = q().pow(2).mul(&p());
        let g = p().pow(3).add(&q().pow(2));
        let one = a.partial_eval(1, &f).unwrap();
        assert_eq!(one.eval(&[g.clone()]).unwrap(), a.eval(&[f, g]).unwrap());
    }
}
