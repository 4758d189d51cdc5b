//! Fedosov's construction on a Darboux chart `ℝ^{2n}` with a polynomial
//! symplectic connection and a formal series of closed 2-forms.
//!
//! Sections are split by Fedosov degree (`deg y = 1`, `deg ν = 2`); every
//! operation used here maps homogeneous pieces to homogeneous pieces, so
//! the recursions run one degree at a time.

mod form;

pub use form::{wedge_sign, FormKey, WeylForm};

use crate::algebra::{rat, Exponent, NuSeries, Poly, Scalar, Vars};
use crate::error::{Error, Result};
use crate::moyal::canonical_vars;
use crate::polydiff::StarProduct;

/// A 2-form `Σ_{i<j} c_{ij} dx^i ∧ dx^j`, stored as the full skew matrix.
pub type TwoForm = Vec<Vec<Poly>>;

/// Connection and 2-form data for the construction.
///
/// Coordinates are `x = (q^1..q^n, p_1..p_n)` with `ω = Σ dp_i ∧ dq^i`,
/// so `ω_{i,n+i} = −1` and the fiber tensor `Λ = ω⁻¹` has `Λ^{i,n+i} = 1`,
/// matching the standard Moyal product.
#[derive(Clone, Debug, PartialEq)]
pub struct FedosovInput {
    n: usize,
    vars: Vars,
    gamma: Vec<Vec<Vec<Poly>>>,
    omegas: Vec<TwoForm>,
}

impl FedosovInput {
    /// `gamma[k][i][j] = Γ^k_{ij}` and `omegas[k − 1] = ω_k`.
    pub fn new(n: usize, gamma: Vec<Vec<Vec<Poly>>>, omegas: Vec<TwoForm>) -> Result<Self> {
        let vars = canonical_vars(n);
        let m = 2 * n;
        let align = |p: &Poly| p.compact().align_to(&vars);
        if gamma.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: gamma.len() });
        }
        let mut g = Vec::with_capacity(m);
        for gk in &gamma {
            if gk.len() != m || gk.iter().any(|row| row.len() != m) {
                return Err(Error::DimensionMismatch { expected: m, found: gk.len() });
            }
            g.push(gk.iter().map(|row| row.iter().map(align).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?);
        }
        let mut om = Vec::with_capacity(omegas.len());
        for w in &omegas {
            if w.len() != m || w.iter().any(|row| row.len() != m) {
                return Err(Error::DimensionMismatch { expected: m, found: w.len() });
            }
            om.push(w.iter().map(|row| row.iter().map(align).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?);
        }
        let input = FedosovInput { n, vars, gamma: g, omegas: om };
        input.validate()?;
        Ok(input)
    }

    /// Zero connection and no 2-forms: the Moyal case.
    pub fn flat(n: usize) -> Self {
        let vars = canonical_vars(n);
        let zero = Poly::zero(vars.clone());
        FedosovInput { n, vars, gamma: vec![vec![vec![zero; 2 * n]; 2 * n]; 2 * n], omegas: Vec::new() }
    }

    /// The connection `Γ^l_{ij} = Λ^{lk} S_{kij}` for a totally symmetric
    /// tensor `S`, given by its entries with `i ≤ j ≤ k` as `(i, j, k, S)`.
    pub fn from_symmetric(n: usize, entries: &[(usize, usize, usize, Poly)], omegas: Vec<TwoForm>) -> Result<Self> {
        let m = 2 * n;
        let vars = canonical_vars(n);
        let mut s = vec![vec![vec![Poly::zero(vars.clone()); m]; m]; m];
        for (a, b, c, v) in entries {
            if *a >= m || *b >= m || *c >= m {
                return Err(Error::Invalid(format!("index ({a}, {b}, {c}) out of range for dimension {m}")));
            }
            let v = v.compact().align_to(&vars)?;
            for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                s[*i][*j][*k] = v.clone();
            }
        }
        let mut gamma = vec![vec![vec![Poly::zero(vars.clone()); m]; m]; m];
        for (l, gl) in gamma.iter_mut().enumerate() {
            for (i, row) in gl.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    let mut acc = Poly::zero(vars.clone());
                    for (k, sk) in s.iter().enumerate() {
                        let lam = lambda(n, l, k);
                        if lam != 0 {
                            acc = acc.add(&sk[i][j].scale(&Scalar::Rat(rat(lam, 1))));
                        }
                    }
                    *entry = acc;
                }
            }
        }
        Self::new(n, gamma, omegas)
    }

    fn validate(&self) -> Result<()> {
        let m = 2 * self.n;
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    if self.gamma[k][i][j] != self.gamma[k][j][i] {
                        return Err(Error::NotSymplectic(format!("Γ^{k}_{{{i}{j}}} is not symmetric in its lower indices")));
                    }
                }
            }
        }
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let s = self.lowered(k, i, j);
                    if s != self.lowered(i, k, j) || s != self.lowered(j, i, k) {
                        return Err(Error::NotSymplectic(format!("ω_{{kl}}Γ^l_{{ij}} is not totally symmetric at ({k}, {i}, {j})")));
                    }
                }
            }
        }
        for (order, w) in self.omegas.iter().enumerate() {
            for i in 0..m {
                for j in 0..m {
                    if w[i][j] != w[j][i].neg() {
                        return Err(Error::Invalid(format!("ω_{} is not skew at ({i}, {j})", order + 1)));
                    }
                }
            }
            for i in 0..m {
                for j in i + 1..m {
                    for k in j + 1..m {
                        let d = w[j][k].derivative(i, 1).sub(&w[i][k].derivative(j, 1)).add(&w[i][j].derivative(k, 1));
                        if !d.is_zero() {
                            return Err(Error::NotClosed(format!("dω_{} has component {d} at ({i}, {j}, {k})", order + 1)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `ω_{kl} Γ^l_{ij}`.
    fn lowered(&self, k: usize, i: usize, j: usize) -> Poly {
        let mut acc = Poly::zero(self.vars.clone());
        for l in 0..2 * self.n {
            let w = omega(self.n, k, l);
            if w != 0 {
                acc = acc.add(&self.gamma[l][i][j].scale(&Scalar::Rat(rat(w, 1))));
            }
        }
        acc
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &Poly {
        &self.gamma[k][i][j]
    }

    pub fn omegas(&self) -> &[TwoForm] {
        &self.omegas
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.iter().flatten().flatten().all(Poly::is_zero) && self.omegas.iter().flatten().flatten().all(Poly::is_zero)
    }

    fn zero_form(&self) -> WeylForm {
        WeylForm::zero(self.n, self.vars.clone())
    }

    fn y(&self, idx: &[usize]) -> Exponent {
        let mut e = vec![0; 2 * self.n];
        for &i in idx {
            e[i] += 1;
        }
        e
    }

    /// `Γ̃ = ½ ω_{ki} Γ^k_{rj} y^i y^j dx^r`.
    pub fn gamma_form(&self) -> WeylForm {
        let m = 2 * self.n;
        let mut out = self.zero_form();
        for r in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let c = self.lowered(i, r, j);
                    if !c.is_zero() {
                        out = out.add(&WeylForm::monomial(self.n, self.vars.clone(), self.y(&[i, j]), 0, &[r], c.scale(&Scalar::Rat(rat(1, 2)))));
                    }
                }
            }
        }
        out
    }

    /// `Ω̃ = Σ_k ν^k ω_k`.
    pub fn omega_form(&self) -> WeylForm {
        let m = 2 * self.n;
        let mut out = self.zero_form();
        for (k, w) in self.omegas.iter().enumerate() {
            for i in 0..m {
                for j in i + 1..m {
                    out = out.add(&WeylForm::monomial(self.n, self.vars.clone(), self.y(&[]), k as u32 + 1, &[i, j], w[i][j].clone()));
                }
            }
        }
        out
    }

    /// `∂a = da − (1/ν)[Γ̃, a]`.
    pub fn nabla(&self, a: &WeylForm) -> Result<WeylForm> {
        Ok(a.exterior_d().sub(&self.gamma_form().commutator(a).div_nu(1)?))
    }

    /// The curvature `R̄` of `∂`, defined by `∂∂a = (1/ν)[R̄, a]`:
    /// `R̄ = −dΓ̃ + (1/ν) Γ̃ ⋆ Γ̃`.
    pub fn curvature(&self) -> Result<WeylForm> {
        let g = self.gamma_form();
        Ok(g.product(&g).div_nu(1)?.sub(&g.exterior_d()))
    }

    /// `R^k_{jlm} = ∂_l Γ^k_{mj} − ∂_m Γ^k_{lj} + Γ^k_{lp} Γ^p_{mj} − Γ^k_{mp} Γ^p_{lj}`.
    pub fn riemann(&self, k: usize, j: usize, l: usize, m: usize) -> Poly {
        let g = &self.gamma;
        let mut out = g[k][m][j].derivative(l, 1).sub(&g[k][l][j].derivative(m, 1));
        for p in 0..2 * self.n {
            out = out.add(&g[k][l][p].mul(&g[p][m][j])).sub(&g[k][m][p].mul(&g[p][l][j]));
        }
        out
    }

    /// `¼ ω_{ki} R^k_{jlm} y^i y^j dx^l ∧ dx^m`.
    pub fn curvature_from_components(&self) -> WeylForm {
        let d = 2 * self.n;
        let mut out = self.zero_form();
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    for m in 0..d {
                        if l == m {
                            continue;
                        }
                        let mut c = Poly::zero(self.vars.clone());
                        for k in 0..d {
                            let w = omega(self.n, k, i);
                            if w != 0 {
                                c = c.add(&self.riemann(k, j, l, m).scale(&Scalar::Rat(rat(w, 1))));
                            }
                        }
                        if !c.is_zero() {
                            let t = WeylForm::monomial(self.n, self.vars.clone(), self.y(&[i, j]), 0, &[l, m], c);
                            out = out.add(&t.scale(&rat(1, 4)));
                        }
                    }
                }
            }
        }
        out
    }
}

/// `ω_{ij}` for `ω = Σ dp_i ∧ dq^i`.
fn omega(n: usize, i: usize, j: usize) -> i64 {
    if j == i + n && i < n {
        -1
    } else if i == j + n && j < n {
        1
    } else {
        0
    }
}

/// `Λ^{ij}`, the inverse of `ω`.
fn lambda(n: usize, i: usize, j: usize) -> i64 {
    -omega(n, i, j)
}

fn sum(parts: &[WeylForm], zero: &WeylForm) -> WeylForm {
    parts.iter().fold(zero.clone(), |acc, p| acc.add(p))
}

/// The curvature correction `r`, split by Fedosov degree.
#[derive(Clone, Debug)]
pub struct FedosovR {
    parts: Vec<WeylForm>,
}

impl FedosovR {
    /// Highest Fedosov degree computed.
    pub fn bound(&self) -> u32 {
        self.parts.len() as u32 - 1
    }

    pub fn degree(&self, d: u32) -> Option<&WeylForm> {
        self.parts.get(d as usize)
    }

    pub fn total(&self) -> WeylForm {
        sum(&self.parts, &self.parts[0].scale(&rat(0, 1)))
    }
}

/// Solves `δr = −R̄ + ∂r − (1/ν) r² + Ω̃` with `δ̂r = 0` through Fedosov
/// degree `bound`, and checks the equation on every degree it determines.
pub fn build_r(f: &FedosovInput, bound: u32) -> Result<FedosovR> {
    let zero = f.zero_form();
    let source = f.omega_form().sub(&f.curvature()?);
    let mut parts: Vec<WeylForm> = vec![zero.clone(); bound as usize + 1];
    for d in 3..=bound {
        let mut s = source.degree_part(d - 1).add(&f.nabla(&parts[d as usize - 1])?);
        let mut sq = zero.clone();
        for i in 3..=d - 2 {
            let j = d + 1 - i;
            if j >= 3 && j <= d - 2 {
                sq = sq.add(&parts[i as usize].product(&parts[j as usize]));
            }
        }
        s = s.sub(&sq.div_nu(1)?);
        parts[d as usize] = s.delta_inv();
    }
    let r = FedosovR { parts };
    let res = r_residual(f, &r)?;
    if !res.is_zero() {
        return Err(Error::Invalid(format!("curvature equation fails: residual {res:?}")));
    }
    Ok(r)
}

/// `δr + R̄ − ∂r + (1/ν) r² − Ω̃` on the Fedosov degrees below the bound of
/// `r`, the ones fully determined by the computed part.
pub fn r_residual(f: &FedosovInput, r: &FedosovR) -> Result<WeylForm> {
    let top = r.bound().saturating_sub(1);
    let rt = r.total();
    let sq = rt.product_bounded(&rt, top + 2).div_nu(1)?;
    let res = rt.delta().add(&f.curvature()?).sub(&f.nabla(&rt)?).add(&sq).sub(&f.omega_form());
    Ok(res.up_to_degree(top))
}

/// The flat section `Q(u)` with `Q(u)_{00} = u`, through Fedosov degree
/// `bound`, from `a = δ̂(∂a − (1/ν)[r, a]) + u`.
pub fn flat_lift(f: &FedosovInput, r: &FedosovR, u: &Poly, bound: u32) -> Result<WeylForm> {
    if bound > r.bound() + 1 {
        return Err(Error::Invalid(format!("lift to degree {bound} needs r through degree {}", bound + 1)));
    }
    let u = u.compact().align_to(f.vars())?;
    let mut parts = vec![WeylForm::function(f.n, &u)?];
    for d in 1..=bound {
        let mut s = f.nabla(&parts[d as usize - 1])?;
        let mut br = f.zero_form();
        for j in 0..d.saturating_sub(1) {
            let i = d + 1 - j;
            if let Some(ri) = r.degree(i) {
                br = br.add(&ri.commutator(&parts[j as usize]));
            }
        }
        s = s.sub(&br.div_nu(1)?);
        parts.push(s.delta_inv());
    }
    Ok(sum(&parts, &f.zero_form()))
}

/// `Da = ∂a − δa − (1/ν)[r, a]`.
pub fn covariant_derivative(f: &FedosovInput, r: &FedosovR, a: &WeylForm) -> Result<WeylForm> {
    Ok(f.nabla(a)?.sub(&a.delta()).sub(&r.total().commutator(a).div_nu(1)?))
}

/// The `y`- and form-free part of `a ⋆ b` through `ν^order`.
fn symbol_product(a: &WeylForm, b: &WeylForm, order: usize, vars: &Vars) -> NuSeries {
    let n = a.n();
    let mut coeffs = vec![Poly::zero(vars.clone()); order + 1];
    for ((ya, ka, ma), ca) in a.terms() {
        if *ma != 0 {
            continue;
        }
        for ((yb, kb, mb), cb) in b.terms() {
            if *mb != 0 {
                continue;
            }
            // only full contraction survives: y^α pairs with y^β when
            // α_q = β_p and α_p = β_q
            if (0..n).any(|i| ya[i] != yb[n + i] || ya[n + i] != yb[i]) {
                continue;
            }
            let p: u32 = ya.iter().sum();
            let k = (ka + kb + p) as usize;
            if k > order {
                continue;
            }
            let mut w = rat(1, 2).pow(p as i32);
            for i in 0..n {
                w *= crate::algebra::factorial(ya[i]) * crate::algebra::factorial(ya[n + i]);
                if ya[n + i] % 2 == 1 {
                    w = -w;
                }
            }
            coeffs[k] = coeffs[k].add(&ca.mul(cb).scale(&Scalar::Rat(w)));
        }
    }
    NuSeries::from_coeffs(coeffs)
}

/// A built construction: `r` through degree `2N + 3` with memoized lifts
/// through degree `2N + 1`.
pub struct Fedosov {
    input: FedosovInput,
    order: usize,
    r: FedosovR,
    lifts: Vec<(Poly, WeylForm)>,
}

impl Fedosov {
    pub fn new(input: FedosovInput, order: usize) -> Result<Self> {
        let r = build_r(&input, 2 * order as u32 + 3)?;
        Ok(Fedosov { input, order, r, lifts: Vec::new() })
    }

    pub fn input(&self) -> &FedosovInput {
        &self.input
    }

    pub fn r(&self) -> &FedosovR {
        &self.r
    }

    pub fn lift(&mut self, u: &Poly) -> Result<WeylForm> {
        let u = u.compact().align_to(self.input.vars())?;
        if let Some((_, a)) = self.lifts.iter().find(|(p, _)| *p == u) {
            return Ok(a.clone());
        }
        let a = flat_lift(&self.input, &self.r, &u, 2 * self.order as u32 + 1)?;
        self.lifts.push((u, a.clone()));
        Ok(a)
    }

    /// `(Q(u) ⋆ Q(v))_{00}` through `ν^N`.
    pub fn star(&mut self, u: &Poly, v: &Poly) -> Result<NuSeries> {
        let a = self.lift(u)?;
        let b = self.lift(v)?;
        Ok(symbol_product(&a, &b, self.order, self.input.vars()))
    }

    /// The cochains of the product, recovered from its values on monomials.
    pub fn star_product(&mut self) -> Result<StarProduct> {
        let vars = self.input.vars().clone();
        let order = self.order;
        let p = crate::moyal::ConstantPoisson::standard(self.input.n).to_polyvector();
        StarProduct::fit(vars, order, order.max(1) as u32, 2 * order as u32 + 2, |u, v| self.star(u, v))?.with_poisson(p)
    }
}

/// `u ⋆ v` through `ν^N`.
pub fn fedosov_star(f: &FedosovInput, u: &Poly, v: &Poly, order: usize) -> Result<NuSeries> {
    Fedosov::new(f.clone(), order)?.star(u, v)
}
