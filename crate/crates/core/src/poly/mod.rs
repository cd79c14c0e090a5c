//! Exact polynomial arithmetic over ℚ and its quotients.

mod gb;
mod monomial;
mod parse;
mod polynomial;
mod ring;
mod vfield;

pub use monomial::{degree, divides, lcm, mono_div, mono_mul, Exps, MonomialOrder, OrderKind};
pub use parse::{format_rational, parse_poly, parse_rational};
pub use polynomial::Poly;
pub use ring::Ring;
pub use vfield::VectorField;

pub(crate) use gb::{buchberger, combination, divide, sub_combination, Gb, MVec};

/// Exact rational coefficients.
pub type Q = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("ring mismatch")]
    RingMismatch,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn to_ambient_mvec(p: &Poly, order: &MonomialOrder) -> MVec {
    MVec::from_unsorted(p.terms().map(|(e, c)| (0, e.clone(), c.clone())).collect(), order)
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
/// In a quotient ring the quotient ideal is adjoined and elements that
/// vanish in the quotient are dropped.
pub fn groebner(gens: &[Poly], order: &MonomialOrder) -> Vec<Poly> {
    let Some(first) = gens.first() else { return Vec::new() };
    let ring = first.ring().clone();
    let mut all: Vec<MVec> = gens.iter().map(|g| to_ambient_mvec(g, order)).collect();
    for qg in ring.quotient_basis() {
        all.push(to_ambient_mvec(&qg, order));
    }
    let gb = buchberger(&all, order, false);
    gb.elems
        .iter()
        .map(|v| Poly::from_terms(&ring, v.terms.iter().map(|t| (t.1.clone(), t.2.clone())).collect()))
        .filter(|p| !p.is_zero())
        .collect()
}

/// Division of `f` by `basis` (not necessarily a Gröbner basis):
/// `f = Σ cofactors_i · basis_i + remainder`, lowest-index reducer first.
pub fn normal_form_with_cofactors(f: &Poly, basis: &[Poly], order: &MonomialOrder) -> (Poly, Vec<Poly>) {
    let ring = f.ring().clone();
    let fv = to_ambient_mvec(f, order);
    let bv: Vec<MVec> = basis.iter().map(|b| to_ambient_mvec(b, order)).collect();
    let (cof, rem) = divide(&fv, &bv, order);
    let cofs = (0..basis.len())
        .map(|k| Poly::from_terms(&ring, cof.component(k)))
        .collect();
    (Poly::from_terms(&ring, rem.component(0)), cofs)
}

/// Normal form modulo a Gröbner basis (remainder only).
pub fn normal_form(f: &Poly, basis: &[Poly], order: &MonomialOrder) -> Poly {
    normal_form_with_cofactors(f, basis, order).0
}

/// Ideal membership via a freshly computed Gröbner basis.
pub fn ideal_contains(gens: &[Poly], f: &Poly) -> bool {
    if f.is_zero() {
        return true;
    }
    let order = f.ring().order().clone();
    let gb = groebner(gens, &order);
    normal_form(f, &gb, &order).is_zero()
}

/// S-polynomial of two polynomials under `order`.
pub fn s_polynomial(f: &Poly, g: &Poly, order: &MonomialOrder) -> Poly {
    let ring = f.ring().clone();
    let fv = to_ambient_mvec(f, order);
    let gv = to_ambient_mvec(g, order);
    let (Some(lf), Some(lg)) = (fv.lead(), gv.lead()) else { return Poly::zero(&ring) };
    let l = lcm(&lf.1, &lg.1);
    let mf = mono_div(&l, &lf.1);
    let mg = mono_div(&l, &lg.1);
    let one = Q::from_integer(1.into());
    let s = fv.mul_term(&mf, &(&one / &lf.2)).add_scaled(&-(&one / &lg.2), &mg, &gv, order);
    Poly::from_terms(&ring, s.component(0))
}

/// Univariate gcd in variable `var` for polynomials involving only that
/// variable (monic result).
pub fn univariate_gcd(a: &Poly, b: &Poly, var: usize) -> Poly {
    let ring = a.ring().clone();
    let order = MonomialOrder::lex(ring.nvars());
    let _ = var;
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let (r, _) = normal_form_with_cofactors(&x, std::slice::from_ref(&y), &order);
        x = y;
        y = r;
    }
    match x.lead() {
        None => x,
        Some((_, c)) => {
            let inv = Q::from_integer(1.into()) / c;
            x.scale(&inv)
        }
    }
}
