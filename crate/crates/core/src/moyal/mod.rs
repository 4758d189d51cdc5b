//! The Moyal product for constant Poisson tensors and Weyl quantization.

mod weyl;

pub use weyl::{weyl_compose, weyl_compose_check, weyl_dequantize, weyl_quantize, WeylOperator, NU};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{factorial, rat, vars, Coeff, Exponent, NuSeries, Poly, Rational, Scalar, Vars};
use crate::error::{Error, Result};
use crate::polydiff::{monomials, MultiDiffOp, PolyVector, StarProduct};

/// A skew-symmetric constant matrix `P^{ij}` on named coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantPoisson {
    vars: Vars,
    matrix: Vec<Vec<Rational>>,
}

/// Coordinate names `q, p` for `n = 1`, else `q1..qn, p1..pn`.
pub fn canonical_vars(n: usize) -> Vars {
    if n == 1 {
        return vars(&["q", "p"]);
    }
    let names: Vec<String> = (1..=n).map(|i| format!("q{i}")).chain((1..=n).map(|i| format!("p{i}"))).collect();
    vars(&names)
}

impl ConstantPoisson {
    pub fn new(vars: Vars, matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let m = vars.len();
        if matrix.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: matrix.len() });
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: row.len() });
            }
            for j in 0..m {
                if row[j] != -matrix[j][i].clone() {
                    return Err(Error::Invalid(format!("P is not skew-symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(ConstantPoisson { vars, matrix })
    }

    /// `{q^i, p_i} = 1` on `ℝ^{2n}` with [`canonical_vars`].
    pub fn standard(n: usize) -> Self {
        let mut matrix = vec![vec![Rational::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            matrix[i][n + i] = rat(1, 1);
            matrix[n + i][i] = rat(-1, 1);
        }
        ConstantPoisson { vars: canonical_vars(n), matrix }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn to_polyvector(&self) -> PolyVector {
        let m = self.dim();
        let mut upper = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                if !self.matrix[i][j].is_zero() {
                    upper.push((i, j, Poly::constant(self.vars.clone(), Scalar::Rat(self.matrix[i][j].clone()))));
                }
            }
        }
        PolyVector::bivector(self.vars.clone(), &upper).expect("valid indices")
    }

    fn nonzero_entries(&self) -> Vec<(usize, usize, Rational)> {
        let m = self.dim();
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if !self.matrix[i][j].is_zero() {
                    out.push((i, j, self.matrix[i][j].clone()));
                }
            }
        }
        out
    }

    /// Re-expresses `u` in the coordinates of `P`.
    fn coordinates(&self, u: &Poly) -> Result<Poly> {
        u.compact()
            .align_to(&self.vars)
            .map_err(|_| Error::DimensionMismatch { expected: self.dim(), found: u.compact().vars().len() })
    }
}

/// `exp((ν/2) P^{rs} ∂_{x^r} ∂_{y^s}) (u(x) v(y)) |_{x=y=z}`, expanded
/// directly on the doubled variables.
pub fn moyal_product(u: &Poly, v: &Poly, p: &ConstantPoisson, order: usize) -> Result<NuSeries> {
    let m = p.dim();
    let u = p.coordinates(u)?;
    let v = p.coordinates(v)?;
    let doubled: Vec<String> =
        p.vars().iter().map(|n| format!("{n}_x")).chain(p.vars().iter().map(|n| format!("{n}_y"))).collect();
    let dv = vars(&doubled);
    let mut tensor = Poly::zero(dv.clone());
    for (a, ca) in u.terms() {
        for (b, cb) in v.terms() {
            let e: Exponent = a.iter().chain(b.iter()).copied().collect();
            tensor.add_term(e, ca.times(cb));
        }
    }
    let entries = p.nonzero_entries();
    let diag = |t: &Poly| {
        Poly::from_terms(
            p.vars().clone(),
            t.terms().iter().map(|(e, c)| ((0..m).map(|i| e[i] + e[m + i]).collect(), c.clone())),
        )
    };
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut current = tensor;
    for r in 0..=order {
        let w = rat(1, 2).pow(r as i32) / factorial(r as u32);
        coeffs.push(diag(&current).scale(&Scalar::Rat(w)));
        if r < order {
            let mut next = Poly::zero(dv.clone());
            for (i, j, c) in &entries {
                let t = current.derivative(*i, 1).derivative(m + j, 1);
                if !t.is_zero() {
                    next = next.add(&t.scale(&Scalar::Rat(c.clone())));
                }
            }
            current = next;
        }
    }
    Ok(NuSeries::from_coeffs(coeffs))
}

/// The Moyal cochains `C_r = (1/r!) (1/2)^r (P^{rs} ∂_r ⊗ ∂_s)^r` as a
/// star product, with `P` attached as its Poisson structure.
pub fn moyal_star(p: &ConstantPoisson, order: usize) -> StarProduct {
    let m = p.dim();
    let entries = p.nonzero_entries();
    let mut power: BTreeMap<(Exponent, Exponent), Rational> = BTreeMap::new();
    power.insert((vec![0; m], vec![0; m]), rat(1, 1));
    let mut cochains = Vec::with_capacity(order + 1);
    for r in 0..=order {
        let w = rat(1, 2).pow(r as i32) / factorial(r as u32);
        let mut op = MultiDiffOp::zero(p.vars().clone(), 2);
        for ((a, b), c) in &power {
            op.add_term(vec![a.clone(), b.clone()], Poly::constant(p.vars().clone(), Scalar::Rat(c * &w)));
        }
        cochains.push(op);
        let mut next: BTreeMap<(Exponent, Exponent), Rational> = BTreeMap::new();
        for ((a, b), c) in &power {
            for (i, j, pij) in &entries {
                let mut a2 = a.clone();
                let mut b2 = b.clone();
                a2[*i] += 1;
                b2[*j] += 1;
                let e = next.entry((a2, b2)).or_insert_with(Rational::zero);
                *e += c * pij;
            }
        }
        next.retain(|_, c| !c.is_zero());
        power = next;
    }
    StarProduct::new(p.vars().clone(), cochains)
        .and_then(|s| s.with_poisson(p.to_polyvector()))
        .expect("Moyal cochains satisfy the axioms")
}

/// First pair of monomials of degree at most `d` violating
/// `C_r(f, g) = (−1)^r C_r(g, f)`, the reality condition for a Hermitian
/// product under `ν = iλ`.
pub fn hermitian_defect(s: &StarProduct, d: u32) -> Option<(usize, Poly, Poly)> {
    let monos = monomials(s.vars(), d);
    for (r, c) in s.cochains().iter().enumerate() {
        for f in &monos {
            for g in &monos {
                let lhs = c.eval(&[f.clone(), g.clone()]).expect("arity two");
                let rhs = c.eval(&[g.clone(), f.clone()]).expect("arity two");
                let ok = if r % 2 == 0 { lhs == rhs } else { lhs == rhs.neg() };
                if !ok {
                    return Some((r, f.clone(), g.clone()));
                }
            }
        }
    }
    None
}

pub fn hermitian_check(s: &StarProduct, d: u32) -> bool {
    hermitian_defect(s, d).is_none()
}
