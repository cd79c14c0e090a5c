use std::fmt;

use super::{Poly, Ring};

/// Σ X^a ∂/∂x_a with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    ring: Ring,
    comps: Vec<Poly>,
}

impl VectorField {
    pub fn new(ring: &Ring, comps: Vec<Poly>) -> Self {
        assert_eq!(comps.len(), ring.nvars(), "vector field needs one coefficient per variable");
        for c in &comps {
            assert!(c.ring().same(ring), "ring mismatch");
        }
        VectorField { ring: ring.clone(), comps }
    }

    pub fn zero(ring: &Ring) -> Self {
        VectorField { ring: ring.clone(), comps: vec![Poly::zero(ring); ring.nvars()] }
    }

    /// f ∂/∂x_a.
    pub fn coordinate(ring: &Ring, a: usize, f: Poly) -> Self {
        let mut v = VectorField::zero(ring);
        v.comps[a] = f;
        v
    }

    /// Σ x_i ∂/∂x_i.
    pub fn euler(ring: &Ring) -> Self {
        let comps = (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect();
        VectorField { ring: ring.clone(), comps }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn comp(&self, a: usize) -> &Poly {
        &self.comps[a]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// X[f].
    pub fn apply(&self, f: &Poly) -> Poly {
        assert!(f.ring().same(&self.ring), "ring mismatch");
        let mut out = Poly::zero(&self.ring);
        for (a, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(a);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }

    /// [X, Y].
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let comps = (0..self.comps.len())
            .map(|a| &self.apply(&other.comps[a]) - &other.apply(&self.comps[a]))
            .collect();
        VectorField { ring: self.ring.clone(), comps }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect();
        VectorField { ring: self.ring.clone(), comps }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect();
        VectorField { ring: self.ring.clone(), comps }
    }

    pub fn scale(&self, f: &Poly) -> VectorField {
        let comps = self.comps.iter().map(|c| c * f).collect();
        VectorField { ring: self.ring.clone(), comps }
    }

    pub fn to_ring(&self, ring: &Ring) -> VectorField {
        VectorField { ring: ring.clone(), comps: self.comps.iter().map(|c| c.to_ring(ring)).collect() }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| format!("({})*d{}", c, self.ring.vars()[a]))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({})", self)
    }
}
