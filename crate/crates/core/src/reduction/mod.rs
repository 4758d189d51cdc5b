//! Classical and quantized Koszul reduction on `M = C × g*`, where the
//! momentum map is the projection `J_a = μ_a`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{rat, Coeff, NuSeries, Poly, Rational, Scalar, Vars};
use crate::error::{Error, Result};
use crate::gutt::LieAlgebraData;
use crate::polydiff::StarProduct;

/// Ambient product, the coordinates playing the role of `μ_a`, the
/// coordinates of the reduced space, and the parameter `κ`.
#[derive(Clone, Debug)]
pub struct ReductionSetup {
    star: StarProduct,
    lie: LieAlgebraData,
    mu: Vec<usize>,
    reduced: Vec<usize>,
    kappa: Rational,
}

impl ReductionSetup {
    /// `mu[a]` is the variable index of `μ_a`; `reduced` lists the
    /// coordinates of `C` on which the group acts trivially.
    pub fn new(star: StarProduct, lie: LieAlgebraData, mu: Vec<usize>, reduced: Vec<usize>, kappa: Rational) -> Result<Self> {
        let n = star.vars().len();
        if mu.len() != lie.dim() {
            return Err(Error::DimensionMismatch { expected: lie.dim(), found: mu.len() });
        }
        let mut seen = vec![false; n];
        for &i in mu.iter().chain(&reduced) {
            if i >= n {
                return Err(Error::Invalid(format!("variable index {i} out of range for {n} variables")));
            }
            if seen[i] {
                return Err(Error::Invalid(format!("variable index {i} used twice")));
            }
            seen[i] = true;
        }
        Ok(ReductionSetup { star, lie, mu, reduced, kappa })
    }

    pub fn star(&self) -> &StarProduct {
        &self.star
    }

    pub fn lie(&self) -> &LieAlgebraData {
        &self.lie
    }

    pub fn vars(&self) -> &Vars {
        self.star.vars()
    }

    pub fn order(&self) -> usize {
        self.star.order()
    }

    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn reduced_vars(&self) -> Vars {
        crate::algebra::vars(&self.reduced.iter().map(|&i| self.vars()[i].clone()).collect::<Vec<_>>())
    }

    fn dim(&self) -> usize {
        self.lie.dim()
    }

    fn j(&self, a: usize) -> NuSeries {
        NuSeries::from_poly(Poly::var(self.vars().clone(), self.mu[a]), self.order())
    }

    fn series(&self, f: &Poly) -> Result<NuSeries> {
        Ok(NuSeries::from_poly(f.compact().align_to(self.vars())?, self.order()))
    }

    /// The coefficient of a 0-chain.
    pub fn scalar_part(&self, x: &KoszulChain) -> NuSeries {
        x.component(&[]).cloned().unwrap_or_else(|| NuSeries::zero(self.vars().clone(), self.order()))
    }

    /// A 0-chain.
    pub fn scalar(&self, f: &NuSeries) -> KoszulChain {
        let mut x = KoszulChain::zero(self.dim(), 0);
        x.add(Vec::new(), f.clone());
        x
    }

    /// `ι*f = f|_{μ=0}`.
    pub fn restrict(&self, f: &NuSeries) -> NuSeries {
        f.map(|c| c.set_zero(&self.mu))
    }

    /// `∂x = Σ_a J_a i(e^a) x`.
    pub fn koszul_d(&self, x: &KoszulChain) -> KoszulChain {
        let mut out = KoszulChain::zero(self.dim(), x.degree.saturating_sub(1));
        if x.degree == 0 {
            return out;
        }
        for a in 0..self.dim() {
            let j = Poly::var(self.vars().clone(), self.mu[a]);
            for (idx, f) in x.contract(a).comps {
                out.add(idx, f.mul_poly(&j));
            }
        }
        out
    }

    /// `h_k x = e_a ∧ ∫₀¹ t^k ∂x/∂μ_a (c, tμ) dt`, exactly: a `μ`-monomial
    /// of degree `s` after differentiation picks up `1/(k + s + 1)`.
    pub fn homotopy(&self, x: &KoszulChain) -> KoszulChain {
        let k = x.degree;
        let mut out = KoszulChain::zero(self.dim(), k + 1);
        for (idx, f) in &x.comps {
            for a in 0..self.dim() {
                let Some((sign, widx)) = wedge_front(a, idx) else { continue };
                let g = f.map(|c| {
                    let d = c.derivative(self.mu[a], 1);
                    Poly::from_terms(
                        c.vars().clone(),
                        d.terms().iter().map(|(e, coef)| {
                            let s: u32 = self.mu.iter().map(|&i| e[i]).sum();
                            (e.clone(), coef.times(&Scalar::Rat(rat(sign, (k as i64) + s as i64 + 1))))
                        }),
                    )
                });
                out.add(widx, g);
            }
        }
        out
    }

    /// `∂^{(κ)} x = i(e^a)x ⋆ J_a + (ν/2) C^c_{ab} e_c ∧ i(e^a) i(e^b) x + νκ i(Δ) x`.
    pub fn quantized_koszul(&self, x: &KoszulChain) -> KoszulChain {
        let d = self.dim();
        let mut out = KoszulChain::zero(d, x.degree.saturating_sub(1));
        if x.degree == 0 {
            return out;
        }
        let n = self.order();
        for a in 0..d {
            let j = self.j(a);
            for (idx, f) in x.contract(a).comps {
                out.add(idx, self.star.product_series(&f, &j));
            }
        }
        if x.degree >= 2 {
            for a in 0..d {
                let xa = x.contract(a);
                for b in 0..d {
                    let xab = xa.contract(b);
                    for c in 0..d {
                        // xab is i(e^b) i(e^a) x
                        let s = self.lie.structure(b, a, c);
                        if s.is_zero() {
                            continue;
                        }
                        let w = Scalar::Rat(s / Rational::from_int(2));
                        for (idx, f) in &xab.comps {
                            if let Some((sign, widx)) = wedge_front(c, idx) {
                                out.add(widx, f.scale(&w.times(&Scalar::Rat(rat(sign, 1)))).shift_up(1).truncate(n));
                            }
                        }
                    }
                }
            }
        }
        let delta = self.lie.modular_form();
        for (a, da) in delta.iter().enumerate() {
            if da.is_zero() || self.kappa.is_zero() {
                continue;
            }
            let w = Scalar::Rat(da * &self.kappa);
            for (idx, f) in x.contract(a).comps {
                out.add(idx, f.scale(&w).shift_up(1).truncate(n));
            }
        }
        out
    }

    /// `Σ_{j=0}^{N} (−B)^j x`, the inverse of `id + B` for an operator `B`
    /// raising the `ν`-order.
    fn geometric<F: Fn(&KoszulChain) -> KoszulChain>(&self, x: &KoszulChain, b: F) -> KoszulChain {
        let mut acc = x.clone();
        let mut term = x.clone();
        for _ in 0..self.order() {
            term = b(&term).neg();
            if term.is_zero() {
                break;
            }
            acc = acc.plus(&term);
        }
        acc
    }

    /// `(∂₁^{(κ)} − ∂₁) h₀` on 0-chains.
    fn correction0(&self, x: &KoszulChain) -> KoszulChain {
        let h = self.homotopy(x);
        self.quantized_koszul(&h).minus(&self.koszul_d(&h))
    }

    /// `ι*_κ = ι* (id + (∂₁^{(κ)} − ∂₁) h₀)⁻¹`.
    pub fn deformed_restriction(&self, f: &NuSeries) -> NuSeries {
        let x = self.geometric(&self.scalar(f), |y| self.correction0(y));
        self.restrict(&self.scalar_part(&x))
    }

    /// `h₀^{(κ)} = h₀ (id + (∂₁^{(κ)} − ∂₁) h₀)⁻¹`.
    pub fn deformed_homotopy0(&self, f: &NuSeries) -> KoszulChain {
        self.homotopy(&self.geometric(&self.scalar(f), |y| self.correction0(y)))
    }

    /// `h_k^{(κ)} = h_k (h_{k−1} ∂_k^{(κ)} + ∂_{k+1}^{(κ)} h_k)⁻¹` for `k ≥ 1`,
    /// inverting around the classical identity `h_{k−1} ∂_k + ∂_{k+1} h_k = id`.
    pub fn deformed_homotopy(&self, x: &KoszulChain) -> KoszulChain {
        if x.degree == 0 {
            return self.deformed_homotopy0(&self.scalar_part(x));
        }
        let b = |y: &KoszulChain| {
            let lhs = self.homotopy(&self.quantized_koszul(y)).minus(&self.homotopy(&self.koszul_d(y)));
            let h = self.homotopy(y);
            lhs.plus(&self.quantized_koszul(&h).minus(&self.koszul_d(&h)))
        };
        self.homotopy(&self.geometric(x, b))
    }

    /// `ι*_κ (prol u ⋆ prol v)` for `u, v` in the reduced coordinates.
    pub fn reduced_star(&self, u: &Poly, v: &Poly) -> Result<NuSeries> {
        let red = self.reduced_vars();
        let u = u.compact().align_to(&red)?;
        let v = v.compact().align_to(&red)?;
        let p = self.star.product(&u.aligned(self.vars()), &v.aligned(self.vars()));
        let r = self.deformed_restriction(&p);
        let coeffs = r.coeffs().iter().map(|c| c.compact().align_to(&red)).collect::<Result<Vec<_>>>()?;
        Ok(NuSeries::from_coeffs(coeffs))
    }

    /// The reduced product as cochains on the reduced coordinates.
    pub fn reduced_star_product(&self) -> Result<StarProduct> {
        let n = self.order();
        StarProduct::fit(self.reduced_vars(), n, n.max(1) as u32, n as u32 + 3, |u, v| self.reduced_star(u, v))
    }

    pub fn series_of(&self, f: &Poly) -> Result<NuSeries> {
        self.series(f)
    }
}

/// `e_a ∧ e_I` as `±e_{I ∪ a}`, or `None` if `a ∈ I`.
fn wedge_front(a: usize, idx: &[usize]) -> Option<(i64, Vec<usize>)> {
    if idx.contains(&a) {
        return None;
    }
    let pos = idx.iter().filter(|&&i| i < a).count();
    let mut out = idx.to_vec();
    out.insert(pos, a);
    Some((if pos % 2 == 0 { 1 } else { -1 }, out))
}

/// `Σ_I x_I e_{i_1} ∧ ⋯ ∧ e_{i_k}` over increasing tuples `I`.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulChain {
    dim: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, NuSeries>,
}

impl KoszulChain {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KoszulChain { dim, degree, comps: BTreeMap::new() }
    }

    /// `f · e_{i_1} ∧ ⋯ ∧ e_{i_k}` for distinct indices in any order.
    pub fn monomial(dim: usize, idx: &[usize], f: NuSeries) -> Result<Self> {
        let mut x = Self::zero(dim, idx.len());
        let mut sorted: Vec<usize> = Vec::new();
        let mut sign = 1;
        for &i in idx.iter().rev() {
            if i >= dim {
                return Err(Error::Invalid(format!("index {i} out of range for dimension {dim}")));
            }
            let (s, w) = wedge_front(i, &sorted).ok_or_else(|| Error::Invalid(format!("repeated index {i}")))?;
            sign *= s;
            sorted = w;
        }
        x.add(sorted, if sign > 0 { f } else { f.neg() });
        Ok(x)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, NuSeries> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn add(&mut self, idx: Vec<usize>, f: NuSeries) {
        let s = match self.comps.remove(&idx) {
            Some(old) => old.add(&f),
            None => f,
        };
        if !s.is_zero() {
            self.comps.insert(idx, s);
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (i, f) in &o.comps {
            out.add(i.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        KoszulChain { dim: self.dim, degree: self.degree, comps: self.comps.iter().map(|(i, f)| (i.clone(), f.neg())).collect() }
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.neg())
    }

    /// The coefficient of `e_I`, if nonzero.
    pub fn component(&self, idx: &[usize]) -> Option<&NuSeries> {
        self.comps.get(idx)
    }

    /// `i(e^a) x`: removes `a` from each tuple with sign `(−1)^{j−1}` for
    /// position `j`.
    pub fn contract(&self, a: usize) -> Self {
        let mut out = Self::zero(self.dim, self.degree.saturating_sub(1));
        for (idx, f) in &self.comps {
            if let Some(pos) = idx.iter().position(|&i| i == a) {
                let mut rest = idx.clone();
                rest.remove(pos);
                out.add(rest, if pos % 2 == 0 { f.clone() } else { f.neg() });
            }
        }
        out
    }
}
