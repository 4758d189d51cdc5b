//! Skew-symmetric multivector fields with polynomial coefficients.

use std::collections::BTreeMap;

use super::multidiff::MultiDiffOp;
use crate::algebra::{Poly, Vars};
use crate::error::{Error, Result};

/// A `(degree + 1)`-vector field stored as its full skew-symmetric table.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyVector {
    vars: Vars,
    degree: usize,
    table: BTreeMap<Vec<usize>, Poly>,
}

/// Sign of the permutation sorting `idx`, or `None` if an index repeats.
pub(crate) fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

impl PolyVector {
    pub fn zero(vars: Vars, degree: usize) -> Self {
        PolyVector { vars, degree, table: BTreeMap::new() }
    }

    /// Builds the field from components on strictly increasing index tuples;
    /// the remaining entries follow by skew-symmetry.
    pub fn from_increasing(vars: Vars, degree: usize, entries: &[(Vec<usize>, Poly)]) -> Result<Self> {
        let mut out = Self::zero(vars.clone(), degree);
        for (idx, c) in entries {
            if idx.len() != degree + 1 {
                return Err(Error::DimensionMismatch { expected: degree + 1, found: idx.len() });
            }
            if idx.iter().any(|&i| i >= vars.len()) {
                return Err(Error::Invalid(format!("index tuple {idx:?} out of range")));
            }
            if !idx.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Invalid(format!("index tuple {idx:?} is not strictly increasing")));
            }
            out.set_increasing(idx, &c.aligned(&vars).add(&out.get(idx)));
        }
        Ok(out)
    }

    /// Validates a full table: every permutation of a nonzero entry must be
    /// present with the matching sign.
    pub fn from_table(vars: Vars, degree: usize, table: BTreeMap<Vec<usize>, Poly>) -> Result<Self> {
        let mut increasing: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
        for (idx, c) in table.iter().filter(|(_, c)| !c.is_zero()) {
            let Some((sorted, sign)) = sort_sign(idx) else {
                return Err(Error::Invalid(format!("nonzero entry on repeated indices {idx:?}")));
            };
            increasing.insert(sorted, if sign > 0 { c.clone() } else { c.neg() });
        }
        let out = Self::from_increasing(vars, degree, &increasing.into_iter().collect::<Vec<_>>())?;
        let nonzero = table.values().filter(|c| !c.is_zero()).count();
        if nonzero != out.table.len() || table.iter().any(|(idx, c)| out.get(idx) != *c) {
            return Err(Error::Invalid("table is not skew-symmetric".into()));
        }
        Ok(out)
    }

    /// Bivector from a constant or polynomial matrix given by its upper
    /// triangle `(i, j, P^{ij})`, `i < j`.
    pub fn bivector(vars: Vars, upper: &[(usize, usize, Poly)]) -> Result<Self> {
        let entries: Vec<_> = upper.iter().map(|(i, j, c)| (vec![*i, *j], c.clone())).collect();
        Self::from_increasing(vars, 1, &entries)
    }

    fn set_increasing(&mut self, idx: &[usize], c: &Poly) {
        for perm in permutations(idx.len()) {
            let key: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
            let (_, sign) = sort_sign(&key).expect("distinct indices");
            if c.is_zero() {
                self.table.remove(&key);
            } else {
                self.table.insert(key, if sign > 0 { c.clone() } else { c.neg() });
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn table(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> Poly {
        self.table.get(idx).cloned().unwrap_or_else(|| Poly::zero(self.vars.clone()))
    }

    /// True if every stored transposition flips the sign.
    pub fn is_skew(&self) -> bool {
        self.table.iter().all(|(idx, c)| {
            (0..idx.len()).all(|a| {
                (a + 1..idx.len()).all(|b| {
                    let mut t = idx.clone();
                    t.swap(a, b);
                    self.get(&t) == c.neg()
                })
            })
        })
    }

    /// The bidifferential operator `(u, v) ↦ Σ P^{ij} ∂_i u ∂_j v`.
    pub fn to_bidiff(&self) -> MultiDiffOp {
        assert_eq!(self.degree, 1, "only bivectors induce brackets");
        let n = self.vars.len();
        let mut op = MultiDiffOp::zero(self.vars.clone(), 2);
        for (idx, c) in &self.table {
            let mut a = vec![0; n];
            let mut b = vec![0; n];
            a[idx[0]] = 1;
            b[idx[1]] = 1;
            op.add_term(vec![a, b], c.clone());
        }
        op
    }

    /// `{u, v} = Σ P^{ij} ∂_i u ∂_j v`.
    pub fn poisson_bracket(&self, u: &Poly, v: &Poly) -> Poly {
        self.to_bidiff().eval(&[u.clone(), v.clone()]).expect("arity two")
    }
}

/// The Jacobiator of a bivector,
/// `T^{ijk} = Σ_l (P^{li} ∂_l P^{jk} + P^{lj} ∂_l P^{ki} + P^{lk} ∂_l P^{ij})`,
/// which is `[P, P]_S` up to a nonzero normalization. Zero iff `P` is Poisson.
pub fn schouten_jacobi_defect(p: &PolyVector) -> Result<PolyVector> {
    if p.degree() != 1 {
        return Err(Error::Invalid(format!("expected a bivector, found degree {}", p.degree())));
    }
    let n = p.vars().len();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut t = Poly::zero(p.vars().clone());
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for l in 0..n {
                        let pla = p.get(&[l, a]);
                        if pla.is_zero() {
                            continue;
                        }
                        t = t.add(&pla.mul(&p.get(&[b, c]).derivative(l, 1)));
                    }
                }
                entries.push((vec![i, j, k], t));
            }
        }
    }
    PolyVector::from_increasing(p.vars().clone(), 2, &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, sc, vars};

    fn xyz() -> Vars {
        vars(&["x", "y", "z"])
    }

    fn v(i: usize) -> Poly {
        Poly::var(xyz(), i)
    }

    #[test]
    fn table_is_fully_skew() {
        let p = PolyVector::bivector(xyz(), &[(0, 1, v(2)), (1, 2, v(0))]).unwrap();
        assert!(p.is_skew());
        assert_eq!(p.get(&[1, 0]), v(2).neg());
        assert!(p.get(&[0, 0]).is_zero());
        let mut bad = BTreeMap::new();
        bad.insert(vec![0, 1], v(0));
        bad.insert(vec![1, 0], v(0));
        assert!(PolyVector::from_table(xyz(), 1, bad).is_err());
    }

    #[test]
    fn constant_symplectic_is_poisson() {
        let w = vars(&["q1", "q2", "p1", "p2"]);
        let one = Poly::one(w.clone());
        let p = PolyVector::bivector(w, &[(0, 2, one.clone()), (1, 3, one)]).unwrap();
        assert!(schouten_jacobi_defect(&p).unwrap().is_zero());
    }

    #[test]
    fn so3_is_poisson() {
        let p = PolyVector::bivector(xyz(), &[(0, 1, v(2)), (1, 2, v(0)), (0, 2, v(1).neg())]).unwrap();
        assert!(schouten_jacobi_defect(&p).unwrap().is_zero());
    }

    #[test]
    fn broken_component_is_detected() {
        // x ∂_y∧∂_z + y ∂_z∧∂_x + x ∂_x∧∂_y
        let p = PolyVector::bivector(xyz(), &[(1, 2, v(0)), (0, 2, v(1).neg()), (0, 1, v(0))]).unwrap();
        let t = schouten_jacobi_defect(&p).unwrap();
        // hand expansion: T^{xyz} = P^{lx}∂_l P^{yz} + P^{ly}∂_l P^{zx} + P^{lz}∂_l P^{xy} = −y
        assert_eq!(t.get(&[0, 1, 2]), v(1).scale(&sc(-1, 1)));
    }

    #[test]
    fn bracket_of_coordinates() {
        let p = PolyVector::bivector(xyz(), &[(0, 1, v(2))]).unwrap();
        assert_eq!(p.poisson_bracket(&v(0), &v(1)), v(2));
        assert_eq!(p.poisson_bracket(&v(1), &v(0)), v(2).scale(&crate::algebra::Scalar::Rat(int(-1))));
    }
}
