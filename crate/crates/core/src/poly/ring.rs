use std::fmt;
use std::sync::Arc;

use super::gb::{buchberger, divide, MVec};
use super::monomial::MonomialOrder;
use super::Poly;

struct RingData {
    vars: Vec<String>,
    order: MonomialOrder,
    /// Reduced Gröbner basis of the quotient ideal, as rank-one vectors.
    quotient: Vec<MVec>,
}

/// Coefficient ring: ℚ[vars], optionally modulo an ideal. Cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl Ring {
    pub fn new(vars: &[&str], order: MonomialOrder) -> Self {
        assert_eq!(vars.len(), order.nvars(), "order arity must match variable count");
        Ring(Arc::new(RingData {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order,
            quotient: Vec::new(),
        }))
    }

    pub fn with_names(vars: Vec<String>, order: MonomialOrder) -> Self {
        assert_eq!(vars.len(), order.nvars(), "order arity must match variable count");
        Ring(Arc::new(RingData { vars, order, quotient: Vec::new() }))
    }

    /// ℚ[vars] with grevlex in the given variable order.
    pub fn grevlex(vars: &[&str]) -> Self {
        Ring::new(vars, MonomialOrder::grevlex(vars.len()))
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.0.order
    }

    pub fn is_quotient(&self) -> bool {
        !self.0.quotient.is_empty()
    }

    /// The polynomial ring this ring is a quotient of (itself if not a quotient).
    pub fn ambient(&self) -> Ring {
        if !self.is_quotient() {
            return self.clone();
        }
        Ring(Arc::new(RingData {
            vars: self.0.vars.clone(),
            order: self.0.order.clone(),
            quotient: Vec::new(),
        }))
    }

    /// Quotient by the ideal generated by `gens` (taken together with any
    /// existing quotient ideal).
    pub fn quotient(&self, gens: &[Poly]) -> Ring {
        let mut all: Vec<MVec> = self.0.quotient.clone();
        for g in gens {
            all.push(g.to_mvec());
        }
        let gb = buchberger(&all, &self.0.order, false);
        Ring(Arc::new(RingData {
            vars: self.0.vars.clone(),
            order: self.0.order.clone(),
            quotient: gb.elems,
        }))
    }

    /// Generators of the quotient ideal (reduced Gröbner basis), as ambient polynomials.
    pub fn quotient_basis(&self) -> Vec<Poly> {
        let amb = self.ambient();
        self.0.quotient.iter().map(|v| Poly::from_mvec(&amb, v)).collect()
    }

    pub(crate) fn quotient_mvecs(&self) -> &[MVec] {
        &self.0.quotient
    }

    /// True when the quotient ideal is the unit ideal.
    pub fn is_zero_ring(&self) -> bool {
        self.0.quotient.iter().any(|v| v.terms.len() == 1 && v.terms[0].1.iter().all(|&e| e == 0))
    }

    pub(crate) fn reduce(&self, v: MVec) -> MVec {
        if self.0.quotient.is_empty() || v.is_zero() {
            return v;
        }
        divide(&v, &self.0.quotient, &self.0.order).1
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn same(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.vars == other.0.vars
                && self.0.order == other.0.order
                && self.0.quotient == other.0.quotient)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring(QQ[{}]", self.0.vars.join(","))?;
        if self.is_quotient() {
            let q: Vec<String> = self.quotient_basis().iter().map(|p| p.to_string()).collect();
            write!(f, "/<{}>", q.join(", "))?;
        }
        write!(f, ")")
    }
}
