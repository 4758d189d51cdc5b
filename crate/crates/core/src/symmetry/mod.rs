//! Equivalence transformations, derivations, moment maps and twists.

mod twist;

pub use twist::{apply_udf, twist_cocycle_defect, udf_star, TensorElement, TwistDefect, TwistElement};

use crate::algebra::{factorial, Coeff, NuSeries, Poly, Rational, Scalar, Vars};
use crate::error::{Error, Result};
use crate::gutt::LieAlgebraData;
use crate::polydiff::{gerstenhaber_insert, monomials, MultiDiffOp, OpSeries, StarProduct};

fn compose(a: &MultiDiffOp, b: &MultiDiffOp) -> MultiDiffOp {
    gerstenhaber_insert(a, b, 1).expect("arity one")
}

/// Product of two series of 1-differential operators, truncated at `order`.
fn series_compose(a: &[MultiDiffOp], b: &[MultiDiffOp], order: usize) -> Vec<MultiDiffOp> {
    let vars = a[0].vars().clone();
    (0..=order)
        .map(|k| {
            (0..=k)
                .filter(|&i| i < a.len() && k - i < b.len())
                .fold(MultiDiffOp::zero(vars.clone(), 1), |acc, i| acc.add(&compose(&a[i], &b[k - i])))
        })
        .collect()
}

/// `T = Σ_{r≥1} ν^r T_r`, acting through `e^T`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceTransform {
    vars: Vars,
    ts: Vec<MultiDiffOp>,
}

impl EquivalenceTransform {
    /// `ts[r − 1] = T_r`; every entry must be a 1-differential operator.
    pub fn new(vars: Vars, ts: Vec<MultiDiffOp>) -> Result<Self> {
        let mut aligned = Vec::with_capacity(ts.len());
        for t in ts {
            if t.arity() != 1 {
                return Err(Error::ArityMismatch { expected: 1, found: t.arity() });
            }
            aligned.push(t.extend_to(&vars)?);
        }
        Ok(EquivalenceTransform { vars, ts: aligned })
    }

    pub fn zero(vars: Vars) -> Self {
        EquivalenceTransform { vars, ts: Vec::new() }
    }

    pub fn components(&self) -> &[MultiDiffOp] {
        &self.ts
    }

    /// `−T`, whose exponential inverts that of `T`.
    pub fn inverse(&self) -> Self {
        EquivalenceTransform { vars: self.vars.clone(), ts: self.ts.iter().map(MultiDiffOp::neg).collect() }
    }

    pub fn preserves_unit(&self) -> bool {
        self.ts.iter().all(MultiDiffOp::vanishes_on_constants)
    }

    /// `e^T` as a series of operators through `ν^order`.
    pub fn exponential(&self, order: usize) -> Vec<MultiDiffOp> {
        let zero = MultiDiffOp::zero(self.vars.clone(), 1);
        let mut t = vec![zero.clone()];
        t.extend(self.ts.iter().take(order).cloned());
        let mut power = vec![MultiDiffOp::identity(self.vars.clone())];
        let mut out: Vec<MultiDiffOp> = vec![zero; order + 1];
        out[0] = power[0].clone();
        for k in 1..=order {
            power = series_compose(&t, &power, order);
            let w = Coeff::inverse(&factorial(k as u32)).expect("nonzero");
            for (o, p) in out.iter_mut().zip(&power) {
                *o = o.add(&p.scale_rat(&w));
            }
        }
        out
    }
}

/// `u ⋆' v = e^T(e^{−T}u ⋆ e^{−T}v)`.
pub fn transform_star(s: &StarProduct, t: &EquivalenceTransform) -> Result<StarProduct> {
    let n = s.order();
    let vars = s.vars().clone();
    let e = t.exponential(n);
    let einv = t.inverse().exponential(n);
    let mut cochains = vec![MultiDiffOp::zero(vars.clone(), 2); n + 1];
    for (r, c) in s.cochains().iter().enumerate() {
        for b in 0..=n - r {
            let left = gerstenhaber_insert(c, &einv[b], 1)?;
            for cc in 0..=n - r - b {
                let inner = gerstenhaber_insert(&left, &einv[cc], 2)?;
                for a in 0..=n - r - b - cc {
                    let outer = compose(&e[a], &inner);
                    cochains[r + a + b + cc] = cochains[r + a + b + cc].add(&outer);
                }
            }
        }
    }
    let out = StarProduct::new(vars, cochains)?;
    match s.poisson() {
        Some(p) => out.with_poisson(p.clone()),
        None => Ok(out),
    }
}

/// `D_r(u, v) = X(C_r(u, v)) − C_r(Xu, v) − C_r(u, Xv)`; zero in every
/// order iff `X` is a derivation of the product.
pub fn derivation_defect(s: &StarProduct, x: &MultiDiffOp) -> Result<OpSeries> {
    if x.arity() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: x.arity() });
    }
    let mut terms = Vec::with_capacity(s.order() + 1);
    for c in s.cochains() {
        let d = gerstenhaber_insert(x, c, 1)?
            .sub(&gerstenhaber_insert(c, x, 1)?)
            .sub(&gerstenhaber_insert(c, x, 2)?);
        terms.push(d);
    }
    Ok(OpSeries { terms })
}

/// The Hamiltonian vector field `u ↦ {h, u}` of `h`.
pub fn hamiltonian_field(s: &StarProduct, h: &Poly) -> Result<MultiDiffOp> {
    let p = s.poisson().ok_or_else(|| Error::Invalid("no Poisson structure attached".into()))?;
    let vars = s.vars().clone();
    let h = h.compact().align_to(&vars)?;
    let comps: Vec<Poly> = (0..vars.len()).map(|j| p.poisson_bracket(&h, &Poly::var(vars.clone(), j))).collect();
    Ok(MultiDiffOp::vector_field(vars, &comps))
}

/// A Lie algebra with a linear assignment `e_a ↦ J_a` of functions.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentMapData {
    lie: LieAlgebraData,
    j: Vec<Poly>,
}

impl MomentMapData {
    pub fn new(lie: LieAlgebraData, j: Vec<Poly>) -> Result<Self> {
        if j.len() != lie.dim() {
            return Err(Error::DimensionMismatch { expected: lie.dim(), found: j.len() });
        }
        Ok(MomentMapData { lie, j })
    }

    pub fn lie(&self) -> &LieAlgebraData {
        &self.lie
    }

    pub fn components(&self) -> &[Poly] {
        &self.j
    }

    /// `J_X` for `X = Σ x_a e_a`.
    pub fn evaluate(&self, x: &[Rational]) -> Poly {
        let mut out = self.j[0].scale(&Scalar::nil());
        for (xa, ja) in x.iter().zip(&self.j) {
            out = out.add(&ja.scale(&Scalar::Rat(xa.clone())));
        }
        out
    }

    /// `J_{[e_a, e_b]}`.
    fn bracket(&self, a: usize, b: usize) -> Poly {
        let c: Vec<Rational> = (0..self.lie.dim()).map(|c| self.lie.structure(a, b, c).clone()).collect();
        self.evaluate(&c)
    }
}

/// A nonzero value of an invariance check: basis index, test argument and
/// the defect series.
pub type InvarianceDefect = (usize, Poly, NuSeries);

/// `J_a ⋆ u − u ⋆ J_a − ν{J_a, u}` over monomials `u` of degree `≤ d`,
/// listing the nonzero ones.
pub fn strong_invariance_defect(s: &StarProduct, m: &MomentMapData, d: u32) -> Result<Vec<InvarianceDefect>> {
    let p = s.poisson().ok_or_else(|| Error::Invalid("strong invariance needs a Poisson structure".into()))?;
    let vars = s.vars().clone();
    let mut out = Vec::new();
    for (a, ja) in m.j.iter().enumerate() {
        let ja = ja.compact().align_to(&vars)?;
        for u in monomials(&vars, d) {
            let bracket = NuSeries::from_poly(p.poisson_bracket(&ja, &u), s.order()).shift_up(1);
            let defect = s.commutator(&ja, &u).sub(&bracket);
            if !defect.is_zero() {
                out.push((a, u, defect));
            }
        }
    }
    Ok(out)
}

/// `J_a ⋆ J_b − J_b ⋆ J_a − ν J_{[e_a, e_b]}` for each pair `a < b`,
/// listing the nonzero ones.
pub fn covariance_defect(s: &StarProduct, m: &MomentMapData) -> Result<Vec<((usize, usize), NuSeries)>> {
    let vars = s.vars().clone();
    let j: Vec<Poly> = m.j.iter().map(|p| p.compact().align_to(&vars)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for a in 0..j.len() {
        for b in a + 1..j.len() {
            let rhs = NuSeries::from_poly(m.bracket(a, b).compact().align_to(&vars)?, s.order()).shift_up(1);
            let defect = s.commutator(&j[a], &j[b]).sub(&rhs);
            if !defect.is_zero() {
                out.push(((a, b), defect));
            }
        }
    }
    Ok(out)
}

/// `X_a(u) − (1/ν)(u_a ⋆ u − u ⋆ u_a)` over monomials `u` of degree `≤ d`
/// for fundamental fields `X_a` and a quantum moment map `a ↦ u_a`. The
/// comparison runs through `ν^{N−1}`, the orders the quotient determines.
pub fn quantum_moment_defect(s: &StarProduct, fields: &[MultiDiffOp], qmap: &[NuSeries], d: u32) -> Result<Vec<InvarianceDefect>> {
    if fields.len() != qmap.len() {
        return Err(Error::DimensionMismatch { expected: fields.len(), found: qmap.len() });
    }
    let vars = s.vars().clone();
    let n = s.order();
    if n == 0 {
        return Err(Error::Invalid("quantum moment maps need order at least 1".into()));
    }
    let mut out = Vec::new();
    for (a, (x, ua)) in fields.iter().zip(qmap).enumerate() {
        let ua = ua.map(|c| c.compact().aligned(&vars)).truncate(n);
        for u in monomials(&vars, d) {
            let us = NuSeries::from_poly(u.clone(), n);
            let comm = s.product_series(&ua, &us).sub(&s.product_series(&us, &ua)).div_nu(1)?;
            let xu = NuSeries::from_poly(x.eval(&[u.clone()])?, n - 1);
            let defect = xu.sub(&comm.truncate(n - 1));
            if !defect.is_zero() {
                out.push((a, u, defect));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, sc, vars};
    use crate::moyal::{canonical_vars, moyal_star, ConstantPoisson};

    fn qp() -> Vars {
        canonical_vars(1)
    }

    fn q() -> Poly {
        Poly::var(qp(), 0)
    }

    fn p() -> Poly {
        Poly::var(qp(), 1)
    }

    fn d_qp() -> MultiDiffOp {
        let mut t = MultiDiffOp::zero(qp(), 1);
        t.add_term(vec![vec![1, 1]], Poly::constant(qp(), sc(1, 2)));
        t
    }

    /// `sp(2)` realized by `q²/2, p²/2, qp`.
    pub(crate) fn sp2() -> MomentMapData {
        let lie = LieAlgebraData::new(vars(&["j1", "j2", "j3"]), &[(0, 1, 2, int(1)), (2, 0, 0, int(-2)), (2, 1, 1, int(2))]).unwrap();
        let half = sc(1, 2);
        MomentMapData::new(lie, vec![q().pow(2).scale(&half), p().pow(2).scale(&half), q().mul(&p())]).unwrap()
    }

    #[test]
    fn zero_transform_is_identity() {
        let s = moyal_star(&ConstantPoisson::standard(1), 3);
        assert_eq!(transform_star(&s, &EquivalenceTransform::zero(qp())).unwrap(), s);
    }

    #[test]
    fn reordered_moyal_is_associative_and_invertible() {
        let s = moyal_star(&ConstantPoisson::standard(1), 3);
        let t = EquivalenceTransform::new(qp(), vec![d_qp()]).unwrap();
        let s2 = transform_star(&s, &t).unwrap();
        assert_ne!(s2, s);
        assert!(s2.maurer_cartan_defect().is_zero());
        // standard ordering: q ⋆' p = qp + ν, p ⋆' q = qp
        assert_eq!(s2.product(&q(), &p()), NuSeries::from_poly(q().mul(&p()), 3).add(&NuSeries::nu_power(qp(), 1, 3)));
        assert_eq!(s2.product(&p(), &q()), NuSeries::from_poly(q().mul(&p()), 3));
        assert_eq!(transform_star(&s2, &t.inverse()).unwrap(), s);
    }

    #[test]
    fn exponential_of_nilpotent_series() {
        let t = EquivalenceTransform::new(qp(), vec![d_qp()]).unwrap();
        let e = t.exponential(2);
        let f = q().pow(2).mul(&p().pow(2));
        // e^{ν/2 ∂_q∂_p}(q²p²) = q²p² + 2ν qp + ν²/2
        assert_eq!(e[1].eval(&[f.clone()]).unwrap(), q().mul(&p()).scale(&sc(2, 1)));
        assert_eq!(e[2].eval(&[f]).unwrap(), Poly::constant(qp(), sc(1, 2)));
    }

    #[test]
    fn derivations_of_moyal() {
        let s = moyal_star(&ConstantPoisson::standard(1), 3);
        let dq = MultiDiffOp::vector_field(qp(), &[Poly::one(qp()), Poly::zero(qp())]);
        assert!(derivation_defect(&s, &dq).unwrap().is_zero());
        let scale = MultiDiffOp::vector_field(qp(), &[q(), Poly::zero(qp())]);
        assert_eq!(derivation_defect(&s, &scale).unwrap().first_nonzero(), Some(1));
        // the linear symplectic field q∂_q − p∂_p
        let hyperbolic = MultiDiffOp::vector_field(qp(), &[q(), p().neg()]);
        assert!(derivation_defect(&s, &hyperbolic).unwrap().is_zero());
        let x = hamiltonian_field(&s, &q().mul(&p())).unwrap();
        assert_eq!(x, MultiDiffOp::vector_field(qp(), &[q().neg(), p()]));
    }

    #[test]
    fn moyal_invariance() {
        let s = moyal_star(&ConstantPoisson::standard(1), 3);
        let trans = MomentMapData::new(LieAlgebraData::abelian(vars(&["a", "b"])), vec![p(), q().neg()]).unwrap();
        assert!(strong_invariance_defect(&s, &trans, 4).unwrap().is_empty());
        let m = sp2();
        assert!(strong_invariance_defect(&s, &m, 4).unwrap().is_empty());
        assert!(covariance_defect(&s, &m).unwrap().is_empty());
        let cubic = MomentMapData::new(LieAlgebraData::abelian(vars(&["c"])), vec![q().pow(3)]).unwrap();
        let defects = strong_invariance_defect(&s, &cubic, 3).unwrap();
        assert!(!defects.is_empty());
        assert!(defects.iter().all(|(_, _, d)| d.first_nonzero() == Some(3)));
    }

    #[test]
    fn shifted_map_breaks_covariance() {
        let s = moyal_star(&ConstantPoisson::standard(1), 2);
        let m = sp2();
        let mut j = m.components().to_vec();
        j[2] = j[2].add(&Poly::one(qp()));
        let broken = MomentMapData::new(m.lie().clone(), j).unwrap();
        let d = covariance_defect(&s, &broken).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0, (0, 1));
        assert_eq!(d[0].1, NuSeries::nu_power(qp(), 1, 2).scale(&sc(-1, 1)));
        // strong invariance still holds: constants are central
        assert!(strong_invariance_defect(&s, &broken, 3).unwrap().is_empty());
    }

    #[test]
    fn gutt_linear_map_is_covariant() {
        let l = LieAlgebraData::so3();
        let s = crate::gutt::gutt_star(&l, 2).unwrap();
        let j = (0..3).map(|a| Poly::var(l.vars().clone(), a)).collect();
        let m = MomentMapData::new(l, j).unwrap();
        assert!(covariance_defect(&s, &m).unwrap().is_empty());
    }

    #[test]
    fn classical_map_is_quantum_for_moyal() {
        let s = moyal_star(&ConstantPoisson::standard(1), 3);
        let m = sp2();
        let fields: Vec<MultiDiffOp> = m.components().iter().map(|j| hamiltonian_field(&s, j).unwrap()).collect();
        let qmap: Vec<NuSeries> = m.components().iter().map(|j| NuSeries::from_poly(j.clone(), 3)).collect();
        assert!(quantum_moment_defect(&s, &fields, &qmap, 4).unwrap().is_empty());
        let mut bad = qmap.clone();
        bad[0] = NuSeries::from_poly(q().pow(3), 3);
        assert!(!quantum_moment_defect(&s, &fields, &bad, 2).unwrap().is_empty());
    }
}
