//! Exact coefficient arithmetic, sparse polynomials and truncated ν-series.

pub mod coeff;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod series;

pub use coeff::{binomial, factorial, format_rational, int, parse_rational, rat, Coeff, Rational};
pub use poly::{exponents_up_to, merge_vars, vars, Exponent, SparsePoly, Vars};
pub use ratfunc::{QPoly, RatFunc};
pub use scalar::Scalar;
pub use series::NuSeries;

use crate::error::{Error, Result};

/// Polynomial with [`Scalar`] coefficients: the carrier of functions on the
/// phase spaces handled by this crate.
pub type Poly = SparsePoly<Scalar>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked polynomial arithmetic. Fails with [`Error::FieldMismatch`] when a
/// name is used as a generator by one operand and as a coefficient
/// parameter by the other.
pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<Poly> {
    check_fields(a, b)?;
    Ok(match op {
        PolyOp::Add => a.add(b),
        PolyOp::Sub => a.sub(b),
        PolyOp::Mul => a.mul(b),
    })
}

fn coefficient_params(p: &Poly) -> Vec<String> {
    let mut out: Vec<String> = p.terms().values().flat_map(|c| c.params()).collect();
    out.sort();
    out.dedup();
    out
}

fn check_fields(a: &Poly, b: &Poly) -> Result<()> {
    let gens = merge_vars(a.vars(), b.vars());
    for name in coefficient_params(a).into_iter().chain(coefficient_params(b)) {
        if gens.contains(&name) {
            return Err(Error::FieldMismatch(name));
        }
    }
    Ok(())
}

/// Shorthand for a polynomial with rational coefficients given as
/// `(coefficient, exponent)` pairs.
pub fn poly_from(vars: &Vars, terms: &[(Rational, &[u32])]) -> Poly {
    Poly::from_terms(vars.clone(), terms.iter().map(|(c, e)| (e.to_vec(), Scalar::Rat(c.clone()))))
}

/// Rational scalar shorthand.
pub fn sc(num: i64, den: i64) -> Scalar {
    Scalar::Rat(rat(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_named_like_a_generator_is_rejected() {
        let v = vars(&["q", "k"]);
        let a = Poly::var(v.clone(), 0);
        let b = Poly::constant(vars(&["q"]), Scalar::param("k"));
        assert_eq!(poly_arith(&a, &b, PolyOp::Mul), Err(Error::FieldMismatch("k".into())));
        let c = Poly::constant(vars(&["q"]), Scalar::param("m"));
        assert!(poly_arith(&a, &c, PolyOp::Mul).is_ok());
    }

    #[test]
    fn parametric_coefficients_cancel() {
        let v = vars(&["q"]);
        let k = Scalar::param("k");
        let a = Poly::monomial(v.clone(), vec![1], k.clone());
        let b = Poly::monomial(v.clone(), vec![1], k.inverse().unwrap());
        let prod = poly_arith(&a, &b, PolyOp::Mul).unwrap();
        assert_eq!(prod, Poly::monomial(v, vec![2], Scalar::unit()));
    }
}
