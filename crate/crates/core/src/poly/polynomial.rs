use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::gb::MVec;
use super::monomial::{mono_mul, Exps};
use super::{PolyError, Ring, Q};

/// Exact multivariate polynomial over ℚ, normalized modulo the ring's
/// quotient ideal.
#[derive(Clone)]
pub struct Poly {
    ring: Ring,
    v: MVec,
}

impl Poly {
    pub fn zero(ring: &Ring) -> Self {
        Poly { ring: ring.clone(), v: MVec::zero() }
    }

    pub fn one(ring: &Ring) -> Self {
        Poly::constant(ring, Q::one())
    }

    pub fn constant(ring: &Ring, c: Q) -> Self {
        Poly::monomial(ring, vec![0; ring.nvars()], c)
    }

    pub fn int(ring: &Ring, c: i64) -> Self {
        Poly::constant(ring, Q::from_integer(c.into()))
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        Poly::monomial(ring, e, Q::one())
    }

    pub fn monomial(ring: &Ring, exps: Exps, c: Q) -> Self {
        assert_eq!(exps.len(), ring.nvars());
        if c.is_zero() {
            return Poly::zero(ring);
        }
        let v = ring.reduce(MVec { terms: vec![(0, exps, c)] });
        Poly { ring: ring.clone(), v }
    }

    pub fn from_terms(ring: &Ring, terms: Vec<(Exps, Q)>) -> Self {
        let v = MVec::from_unsorted(terms.into_iter().map(|(e, q)| (0, e, q)).collect(), ring.order());
        Poly { ring: ring.clone(), v: ring.reduce(v) }
    }

    pub(crate) fn from_mvec(ring: &Ring, v: &MVec) -> Self {
        let v = MVec::from_unsorted(v.terms.iter().map(|(_, e, q)| (0, e.clone(), q.clone())).collect(), ring.order());
        Poly { ring: ring.clone(), v: ring.reduce(v) }
    }

    pub(crate) fn to_mvec(&self) -> MVec {
        self.v.clone()
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.v.terms.len() == 1 && self.v.terms[0].1.iter().all(|&e| e == 0) && self.v.terms[0].2.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.v.terms.iter().all(|t| t.1.iter().all(|&e| e == 0))
    }

    /// Constant coefficient if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        if self.is_constant() {
            Some(self.v.terms[0].2.clone())
        } else {
            None
        }
    }

    /// Terms in descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Q)> {
        self.v.terms.iter().map(|(_, e, q)| (e, q))
    }

    pub fn num_terms(&self) -> usize {
        self.v.terms.len()
    }

    pub fn lead(&self) -> Option<(&Exps, &Q)> {
        self.v.terms.first().map(|(_, e, q)| (e, q))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.v.terms.iter().map(|t| super::monomial::degree(&t.1)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.v.terms.iter().map(|t| super::monomial::degree(&t.1));
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    fn check(&self, other: &Poly) -> Result<(), PolyError> {
        if self.ring.same(&other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let v = self.v.add(&other.v, self.ring.order());
        Ok(Poly { ring: self.ring.clone(), v })
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let v = self.v.sub(&other.v, self.ring.order());
        Ok(Poly { ring: self.ring.clone(), v })
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ring));
        }
        let mut acc: HashMap<Exps, Q> = HashMap::with_capacity(self.v.terms.len() * other.v.terms.len());
        for (_, ea, qa) in &self.v.terms {
            for (_, eb, qb) in &other.v.terms {
                *acc.entry(mono_mul(ea, eb)).or_insert_with(Q::zero) += qa * qb;
            }
        }
        Ok(Poly::from_terms(&self.ring, acc.into_iter().collect()))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly { ring: self.ring.clone(), v: self.v.scale(c) }
    }

    pub fn scale_int(&self, c: i64) -> Poly {
        self.scale(&Q::from_integer(c.into()))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(&self.ring);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Partial derivative of the stored representative, reduced.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut terms = Vec::new();
        for (_, e, q) in &self.v.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                terms.push((e2, q * Q::from_integer(e[var].into())));
            }
        }
        Poly::from_terms(&self.ring, terms)
    }

    /// Value at a rational point (of the stored representative).
    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.ring.nvars());
        let mut total = Q::zero();
        for (_, e, q) in &self.v.terms {
            let mut t = q.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Substitutes polynomials for the variables.
    pub fn substitute(&self, images: &[Poly], target: &Ring) -> Poly {
        let mut out = Poly::zero(target);
        for (_, e, q) in &self.v.terms {
            let mut t = Poly::constant(target, q.clone());
            for (img, &k) in images.iter().zip(e) {
                for _ in 0..k {
                    t = &t * img;
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Reinterprets the representative in another ring over the same variables
    /// (reducing if the target is a quotient).
    pub fn to_ring(&self, ring: &Ring) -> Poly {
        assert_eq!(ring.nvars(), self.ring.nvars());
        if ring.order() == self.ring.order() {
            return Poly { ring: ring.clone(), v: ring.reduce(self.v.clone()) };
        }
        Poly::from_terms(ring, self.v.terms.iter().map(|(_, e, q)| (e.clone(), q.clone())).collect())
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.v == other.v
    }
}

impl Eq for Poly {}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let vars = self.ring.vars();
        for (i, (_, e, q)) in self.v.terms.iter().enumerate() {
            let neg = q.is_negative();
            let a = q.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { vars[v].clone() } else { format!("{}^{}", vars[v], k) })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", a, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("ring mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { ring: self.ring.clone(), v: self.v.neg() }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
