//! Gerstenhaber composition and bracket, and the Hochschild differential.
//!
//! Degrees are shifted: an operator of arity `k` has degree `k − 1`.

use std::collections::HashMap;

use super::multidiff::{leibniz_splits, MultiDiffOp, Signature};
use crate::algebra::{Exponent, Poly, Rational, Scalar};
use crate::error::{Error, Result};

/// Substitutes `B` into slot `slot` (1-based) of `A`, without sign:
/// `A(f_1,…,f_{j−1}, B(f_j,…), …)`.
///
/// The derivatives that `A` applies in slot `j` are distributed over `B`'s
/// coefficient and arguments by the Leibniz rule.
pub fn gerstenhaber_insert(a: &MultiDiffOp, b: &MultiDiffOp, slot: usize) -> Result<MultiDiffOp> {
    if slot == 0 || slot > a.arity() {
        return Err(Error::SlotOutOfRange { slot, arity: a.arity() });
    }
    let v = crate::algebra::merge_vars(a.vars(), b.vars());
    let a = a.extend_to(&v)?;
    let b = b.extend_to(&v)?;
    let kb = b.arity();
    let arity = a.arity() + kb - 1;
    let mut out = MultiDiffOp::zero(v.clone(), arity);
    let mut splits: HashMap<Exponent, Vec<(Vec<Exponent>, Rational)>> = HashMap::new();
    let mut coeff_derivs: HashMap<(Signature, Exponent), Poly> = HashMap::new();
    for (sig_a, ca) in a.terms() {
        let alpha = &sig_a[slot - 1];
        let parts = splits.entry(alpha.clone()).or_insert_with(|| leibniz_splits(alpha, kb + 1));
        for (sig_b, cb) in b.terms() {
            for (split, weight) in parts.iter() {
                let db = coeff_derivs
                    .entry((sig_b.clone(), split[0].clone()))
                    .or_insert_with(|| cb.derive_multi(&split[0]));
                if db.is_zero() {
                    continue;
                }
                let mut sig: Signature = Vec::with_capacity(arity);
                sig.extend(sig_a[..slot - 1].iter().cloned());
                for (i, beta) in sig_b.iter().enumerate() {
                    sig.push(beta.iter().zip(&split[i + 1]).map(|(x, y)| x + y).collect());
                }
                sig.extend(sig_a[slot..].iter().cloned());
                out.add_term(sig, ca.mul(db).scale(&Scalar::Rat(weight.clone())));
            }
        }
    }
    Ok(out)
}

/// `A ∘ B = Σ_{j=1}^{arity A} (−1)^{|B|(j−1)} A(…, B(…), …)`.
pub fn circle(a: &MultiDiffOp, b: &MultiDiffOp) -> MultiDiffOp {
    let db = b.degree();
    let mut out: Option<MultiDiffOp> = None;
    for j in 1..=a.arity() {
        let mut t = gerstenhaber_insert(a, b, j).expect("slot in range");
        if db * (j as i64 - 1) % 2 != 0 {
            t = t.neg();
        }
        out = Some(match out {
            None => t,
            Some(acc) => acc.add(&t),
        });
    }
    out.expect("arity at least one")
}

/// `[A, B]_G = A ∘ B − (−1)^{|A||B|} B ∘ A`.
pub fn gerstenhaber_bracket(a: &MultiDiffOp, b: &MultiDiffOp) -> MultiDiffOp {
    let ab = circle(a, b);
    let ba = circle(b, a);
    if (a.degree() * b.degree()) % 2 == 0 {
        ab.sub(&ba)
    } else {
        ab.add(&ba)
    }
}

/// Hochschild differential `d A = −[μ, A]_G`.
pub fn hochschild_d(a: &MultiDiffOp) -> MultiDiffOp {
    let mu = MultiDiffOp::product(a.vars().clone(), 2);
    gerstenhaber_bracket(&mu, a).neg()
}

/// A ν-series of multidifferential operators of a common arity, indexed by
/// the power of ν.
#[derive(Clone, Debug, PartialEq)]
pub struct OpSeries {
    pub terms: Vec<MultiDiffOp>,
}

impl OpSeries {
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_zero())
    }

    /// Lowest ν-order with a nonzero operator.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.terms.iter().position(|t| !t.is_zero())
    }
}

/// Graded bracket of two ν-series, truncated at the smaller order.
pub fn bracket_series(a: &[MultiDiffOp], b: &[MultiDiffOp]) -> OpSeries {
    let n = a.len().min(b.len());
    let mut terms = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc: Option<MultiDiffOp> = None;
        for i in 0..=k {
            let t = gerstenhaber_bracket(&a[i], &b[k - i]);
            acc = Some(match acc {
                None => t,
                Some(s) => s.add(&t),
            });
        }
        terms.push(acc.unwrap());
    }
    OpSeries { terms }
}
