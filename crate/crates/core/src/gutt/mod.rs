//! Lie algebra data and the star product on the dual of a Lie algebra
//! transported from the universal enveloping algebra.

mod uea;

pub use uea::{Uea, UeaElement, Word};

use num_traits::Zero;

use crate::algebra::{int, vars, NuSeries, Poly, Rational, Scalar, Vars};
use crate::error::{Error, Result};
use crate::polydiff::{PolyVector, StarProduct};

/// Structure constants `C^c_{ab}` of `[e_a, e_b] = Σ_c C^c_{ab} e_c`,
/// together with names for the dual coordinates `ξ_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData {
    vars: Vars,
    c: Vec<Vec<Vec<Rational>>>,
}

impl LieAlgebraData {
    /// Builds the algebra from entries `(a, b, c, C^c_{ab})`; the entry for
    /// `(b, a)` follows by skew-symmetry. Fails on inconsistent entries or
    /// when the Jacobi identity does not hold.
    pub fn new(vars: Vars, entries: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let d = vars.len();
        let mut c = vec![vec![vec![Rational::zero(); d]; d]; d];
        let mut set = vec![vec![vec![false; d]; d]; d];
        for (a, b, k, v) in entries {
            let (a, b, k) = (*a, *b, *k);
            if a >= d || b >= d || k >= d {
                return Err(Error::LieAlgebra(format!("index ({a}, {b}, {k}) out of range for dimension {d}")));
            }
            if a == b {
                if !v.is_zero() {
                    return Err(Error::LieAlgebra(format!("C^{k}_{{{a}{a}}} must vanish")));
                }
                continue;
            }
            for (x, y, val) in [(a, b, v.clone()), (b, a, -v.clone())] {
                if set[x][y][k] && c[x][y][k] != val {
                    return Err(Error::LieAlgebra(format!("conflicting entries for C^{k}_{{{a}{b}}}")));
                }
                set[x][y][k] = true;
                c[x][y][k] = val;
            }
        }
        let lie = LieAlgebraData { vars, c };
        lie.check_jacobi()?;
        Ok(lie)
    }

    pub fn abelian(vars: Vars) -> Self {
        let d = vars.len();
        LieAlgebraData { vars, c: vec![vec![vec![Rational::zero(); d]; d]; d] }
    }

    /// `so(3)`: `[e_1, e_2] = e_3` and cyclic, on `x, y, z`.
    pub fn so3() -> Self {
        let one = int(1);
        Self::new(vars(&["x", "y", "z"]), &[(0, 1, 2, one.clone()), (1, 2, 0, one.clone()), (2, 0, 1, one)])
            .expect("so(3) satisfies Jacobi")
    }

    /// Heisenberg: `[x, y] = z`, `z` central.
    pub fn heisenberg() -> Self {
        Self::new(vars(&["x", "y", "z"]), &[(0, 1, 2, int(1))]).expect("Heisenberg satisfies Jacobi")
    }

    /// The 2-dimensional affine algebra `[a, b] = b`.
    pub fn affine2() -> Self {
        Self::new(vars(&["a", "b"]), &[(0, 1, 1, int(1))]).expect("affine algebra satisfies Jacobi")
    }

    /// `sl(2)`: `[h, e] = 2e`, `[h, f] = −2f`, `[e, f] = h`.
    pub fn sl2() -> Self {
        Self::new(vars(&["h", "e", "f"]), &[(0, 1, 1, int(2)), (0, 2, 2, int(-2)), (1, 2, 0, int(1))])
            .expect("sl(2) satisfies Jacobi")
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// `C^c_{ab}`.
    pub fn structure(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.c[a][b][c]
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().flatten().flatten().all(|x| x.is_zero())
    }

    fn check_jacobi(&self) -> Result<()> {
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for f in 0..d {
                        let mut s = Rational::zero();
                        for e in 0..d {
                            s += &self.c[a][b][e] * &self.c[e][c][f];
                            s += &self.c[b][c][e] * &self.c[e][a][f];
                            s += &self.c[c][a][e] * &self.c[e][b][f];
                        }
                        if !s.is_zero() {
                            return Err(Error::LieAlgebra(format!(
                                "Jacobi identity fails for (e_{a}, e_{b}, e_{c}) in component {f}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The modular form `Δ_a = Σ_b C^b_{ab}`, i.e. `tr ad(e_a)`.
    pub fn modular_form(&self) -> Vec<Rational> {
        (0..self.dim()).map(|a| (0..self.dim()).map(|b| self.c[a][b][b].clone()).sum()).collect()
    }

    /// The linear Poisson structure `{ξ_a, ξ_b} = Σ_c C^c_{ab} ξ_c`.
    pub fn linear_poisson(&self) -> PolyVector {
        let d = self.dim();
        let mut upper = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let mut p = Poly::zero(self.vars.clone());
                for c in 0..d {
                    if !self.c[a][b][c].is_zero() {
                        p = p.add(&Poly::var(self.vars.clone(), c).scale(&Scalar::Rat(self.c[a][b][c].clone())));
                    }
                }
                upper.push((a, b, p));
            }
        }
        PolyVector::bivector(self.vars.clone(), &upper).expect("valid indices")
    }

    /// The linear function `f_X(ξ) = <ξ, X>` for `X = Σ x_a e_a`.
    pub fn linear_function(&self, x: &[Rational]) -> Poly {
        let mut p = Poly::zero(self.vars.clone());
        for (a, xa) in x.iter().enumerate() {
            if !xa.is_zero() {
                p = p.add(&Poly::var(self.vars.clone(), a).scale(&Scalar::Rat(xa.clone())));
            }
        }
        p
    }
}

/// `σ⁻¹(σ(u) σ(v))` with `σ` the symmetrization into the enveloping algebra
/// whose bracket is weighted by `ν`.
pub fn gutt_product(u: &Poly, v: &Poly, lie: &LieAlgebraData, order: usize) -> Result<NuSeries> {
    Uea::gutt(lie.clone()).star(u, v, order)
}

/// The Gutt product as a star product with cochains recovered from its
/// values on monomials.
pub fn gutt_star(lie: &LieAlgebraData, order: usize) -> Result<StarProduct> {
    let mut engine = Uea::gutt(lie.clone());
    StarProduct::fit(lie.vars().clone(), order, order.max(1) as u32, order as u32 + 3, |u, v| {
        engine.star(u, v, order)
    })?
    .with_poisson(lie.linear_poisson())
}
