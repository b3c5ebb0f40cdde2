//! Sparse polynomials in `x, y` over a runtime field.

mod monomial;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::arith::Field;
pub use monomial::{Monomial, MonomialIdeal};

/// Exponents above this bound are rejected.
pub const MAX_EXPONENT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands live over different fields (characteristic {left} vs {right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("the zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("exponent {0} exceeds the supported bound 2^20")]
    ExponentOverflow(u64),
}

fn checked_exp(e: u64) -> Result<u32, PolyError> {
    if e > MAX_EXPONENT {
        Err(PolyError::ExponentOverflow(e))
    } else {
        Ok(e as u32)
    }
}

fn checked_monomial(i: u64, j: u64) -> Result<Monomial, PolyError> {
    Ok(Monomial::new(checked_exp(i)?, checked_exp(j)?))
}

/// A polynomial with no stored zero coefficients. Terms are kept in monomial
/// order, so the leading term is the last entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<F: Field> {
    field: F,
    terms: BTreeMap<Monomial, F::Elem>,
}

/// Quotients and remainder of multivariate division.
#[derive(Clone, Debug)]
pub struct Division<F: Field> {
    pub quotients: Vec<Poly<F>>,
    pub remainder: Poly<F>,
}

impl<F: Field> Poly<F> {
    pub fn zero(field: &F) -> Self {
        Self {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &F) -> Self {
        Self::term(field, Monomial::ONE, field.one())
    }

    pub fn x(field: &F) -> Self {
        Self::term(field, Monomial::new(1, 0), field.one())
    }

    pub fn y(field: &F) -> Self {
        Self::term(field, Monomial::new(0, 1), field.one())
    }

    pub fn term(field: &F, m: Monomial, coeff: F::Elem) -> Self {
        let mut p = Self::zero(field);
        p.add_term(m, coeff);
        p
    }

    /// `x^i y^j` with coefficient one.
    pub fn monomial(field: &F, i: u32, j: u32) -> Self {
        Self::term(field, Monomial::new(i, j), field.one())
    }

    /// Sums repeated monomials and drops zeros.
    pub fn from_terms(field: &F, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Integer coefficients, mainly for tests and examples.
    pub fn from_int_terms(field: &F, terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(
            field,
            terms
                .iter()
                .map(|&(i, j, c)| (Monomial::new(i, j), field.from_i64(c))),
        )
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> F::Elem {
        self.terms
            .get(&m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_term(&self) -> Result<(Monomial, &F::Elem), PolyError> {
        self.terms
            .iter()
            .next_back()
            .map(|(m, c)| (*m, c))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_monomial(&self) -> Result<Monomial, PolyError> {
        self.leading_term().map(|(m, _)| m)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = self.field.add(existing, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch {
                left: self.field.characteristic(),
                right: other.field.characteristic(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_field(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_field(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, self.field.neg(c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_field(other)?;
        let mut out = Self::zero(&self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = checked_monomial(ma.i as u64 + mb.i as u64, ma.j as u64 + mb.j as u64)?;
                out.add_term(m, self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &F::Elem) -> Self {
        Self::from_terms(
            &self.field,
            self.terms.iter().map(|(m, a)| (*m, self.field.mul(a, c))),
        )
    }

    /// `c * x^i y^j * self`.
    pub fn mul_term(&self, shift: Monomial, c: &F::Elem) -> Result<Self, PolyError> {
        let mut out = Self::zero(&self.field);
        for (m, a) in &self.terms {
            let mm = checked_monomial(m.i as u64 + shift.i as u64, m.j as u64 + shift.j as u64)?;
            out.add_term(mm, self.field.mul(a, c));
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, PolyError> {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Drops every term with `x` exponent at least `m`.
    pub fn truncate_x(&self, m: u32) -> Self {
        self.filter_terms(|mono| mono.i < m)
    }

    /// Drops every term with `y` exponent at least `n`.
    pub fn truncate_y(&self, n: u32) -> Self {
        self.filter_terms(|mono| mono.j < n)
    }

    fn filter_terms(&self, keep: impl Fn(Monomial) -> bool) -> Self {
        Self {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(**m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// `self -= c * shift * g`, in place.
    fn sub_scaled(&mut self, c: &F::Elem, shift: Monomial, g: &Self) {
        for (m, a) in &g.terms {
            let mm = Monomial::new(m.i + shift.i, m.j + shift.j);
            let t = self.field.mul(c, a);
            self.add_term(mm, self.field.neg(&t));
        }
    }

    /// Multivariate division by `basis` (first divisor wins). The remainder has
    /// no term divisible by a basis leading monomial, and
    /// `self = sum q_i * basis_i + remainder`.
    pub fn divide(&self, basis: &[Poly<F>]) -> Result<Division<F>, PolyError> {
        for g in basis {
            self.same_field(g)?;
        }
        let leads: Vec<(Monomial, F::Elem)> = basis
            .iter()
            .map(|g| {
                let (m, c) = g.leading_term()?;
                Ok((
                    m,
                    self.field.inv(c).expect("leading coefficient is nonzero"),
                ))
            })
            .collect::<Result<_, PolyError>>()?;
        let mut quotients = vec![Self::zero(&self.field); basis.len()];
        let mut remainder = Self::zero(&self.field);
        let mut rest = self.clone();
        while let Some((&lm, lc)) = rest.terms.iter().next_back() {
            let lc = lc.clone();
            let hit = leads
                .iter()
                .enumerate()
                .find_map(|(idx, (gm, ginv))| gm.quotient_of(lm).map(|q| (idx, q, ginv)));
            match hit {
                Some((idx, q, ginv)) => {
                    let c = self.field.mul(&lc, ginv);
                    quotients[idx].add_term(q, c.clone());
                    rest.sub_scaled(&c, q, &basis[idx]);
                }
                None => {
                    rest.terms.remove(&lm);
                    remainder.terms.insert(lm, lc);
                }
            }
        }
        Ok(Division {
            quotients,
            remainder,
        })
    }

    /// Remainder of division by `basis`.
    pub fn normal_form(&self, basis: &[Poly<F>]) -> Result<Self, PolyError> {
        Ok(self.divide(basis)?.remainder)
    }

    /// Image under `x -> x + y`, `y -> -y`.
    pub fn substitute_phi(&self) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f);
        for (m, c) in &self.terms {
            let c = if m.j % 2 == 1 { f.neg(c) } else { c.clone() };
            let row = f.binomial_row(m.i as usize);
            for (l, b) in row.iter().enumerate() {
                let l = l as u32;
                out.add_term(Monomial::new(l, m.i - l + m.j), f.mul(&c, b));
            }
        }
        out
    }

    /// `(x^a y^b (x^u + y^v)^c)^K`, expanded binomially.
    pub fn power_xy(
        field: &F,
        a: u64,
        b: u64,
        c: u64,
        u: u64,
        v: u64,
        k: u64,
    ) -> Result<Self, PolyError> {
        let ck = c * k;
        checked_exp((a * k).max(b * k) + ck * u.max(v))?;
        let row = field.binomial_row(ck as usize);
        let terms = row.into_iter().enumerate().map(|(j, coeff)| {
            let j = j as u64;
            let m = Monomial::new((a * k + u * j) as u32, (b * k + v * (ck - j)) as u32);
            (m, coeff)
        });
        Ok(Self::from_terms(field, terms))
    }

    /// The weighted degree shared by all terms under weights `(wx, wy)`, if any.
    pub fn homogeneous_degree(&self, wx: u64, wy: u64) -> Option<u64> {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(wx, wy));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Smallest positive weights `(wx, wy)` making the polynomial
    /// quasi-homogeneous. A single term is homogeneous for `(1, 1)`; `None` if
    /// no positive weighting works.
    pub fn homogeneity_weights(&self) -> Option<(u64, u64)> {
        let mut keys = self.terms.keys();
        let first = *keys.next()?;
        let Some(other) = keys.find(|m| **m != first) else {
            return Some((1, 1));
        };
        let di = other.i as i64 - first.i as i64;
        let dj = other.j as i64 - first.j as i64;
        // wx * di + wy * dj = 0 needs di and dj of opposite sign.
        if di == 0 || dj == 0 || (di > 0) == (dj > 0) {
            return None;
        }
        let g = num_integer::gcd(di.abs(), dj.abs());
        let w = ((dj.abs() / g) as u64, (di.abs() / g) as u64);
        self.homogeneous_degree(w.0, w.1).map(|_| w)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = self.field.is_negative(c);
            let mag = if negative {
                self.field.neg(c)
            } else {
                c.clone()
            };
            let sign = match (idx, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let unit = mag == self.field.one();
            let body = match (*m == Monomial::ONE, unit) {
                (true, _) => self.field.render(&mag),
                (false, true) => m.to_string(),
                (false, false) => format!("{}*{}", self.field.render(&mag), m),
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<F: Field> $trait for &Poly<F> {
            type Output = Poly<F>;
            fn $method(self, rhs: &Poly<F>) -> Poly<F> {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<F: Field> $trait for Poly<F> {
            type Output = Poly<F>;
            fn $method(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$method(&rhs)
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        self.scalar_mul(&self.field.neg(&self.field.one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PrimeField, Rationals};
    use proptest::prelude::*;

    const Q: Rationals = Rationals;

    fn qp(terms: &[(u32, u32, i64)]) -> Poly<Rationals> {
        Poly::from_int_terms(&Q, terms)
    }

    fn x_plus_y<F: Field>(f: &F) -> Poly<F> {
        &Poly::x(f) + &Poly::y(f)
    }

    #[test]
    fn ring_operations() {
        let s = x_plus_y(&Q);
        assert_eq!(&s * &s, qp(&[(2, 0, 1), (1, 1, 2), (0, 2, 1)]));
        let f2 = PrimeField::new(2).unwrap();
        let s2 = x_plus_y(&f2);
        assert_eq!(
            &s2 * &s2,
            Poly::from_int_terms(&f2, &[(2, 0, 1), (0, 2, 1)])
        );
        assert!((&s * &Poly::zero(&Q)).is_zero());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = Poly::x(&PrimeField::new(5).unwrap());
        let b = Poly::x(&PrimeField::new(7).unwrap());
        assert_eq!(
            a.try_add(&b),
            Err(PolyError::FieldMismatch { left: 5, right: 7 })
        );
    }

    #[test]
    fn leading_terms() {
        let (m, c) = x_plus_y(&Q)
            .leading_term()
            .map(|(m, c)| (m, c.clone()))
            .unwrap();
        assert_eq!((m, c), (Monomial::new(1, 0), Q.one()));
        let p = qp(&[(2, 1, 3), (1, 2, 5)]);
        assert_eq!(p.leading_term().unwrap().0, Monomial::new(2, 1));
        assert_eq!(p.leading_term().unwrap().1, &Q.from_i64(3));
        assert_eq!(
            Poly::zero(&Q).leading_term().unwrap_err(),
            PolyError::ZeroPolynomial
        );
    }

    #[test]
    fn truncation() {
        let cube = x_plus_y(&Q).pow(3).unwrap();
        assert_eq!(cube.truncate_x(2), qp(&[(1, 2, 3), (0, 3, 1)]));
        assert!(cube.truncate_x(0).is_zero());
        assert_eq!(qp(&[(2, 0, 1), (0, 2, 1)]).truncate_y(2), qp(&[(2, 0, 1)]));
    }

    #[test]
    fn normal_forms() {
        let x2 = qp(&[(2, 0, 1)]);
        let y2 = qp(&[(0, 2, 1)]);
        assert!(x2.normal_form(&[qp(&[(1, 0, 1)])]).unwrap().is_zero());
        let s = x_plus_y(&Q);
        assert_eq!(s.normal_form(&[x2.clone(), y2.clone()]).unwrap(), s);
        let cube = s.pow(3).unwrap();
        assert!(cube.normal_form(&[x2, y2]).unwrap().is_zero());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(Poly::x(&Q).substitute_phi(), x_plus_y(&Q));
        assert_eq!(x_plus_y(&Q).substitute_phi(), Poly::x(&Q));
        let p = qp(&[(2, 1, 1)]);
        assert_eq!(p.substitute_phi().substitute_phi(), p);
    }

    #[test]
    fn power_xy_matches_repeated_multiplication() {
        assert_eq!(
            Poly::power_xy(&Q, 0, 0, 1, 1, 1, 2).unwrap(),
            qp(&[(2, 0, 1), (1, 1, 2), (0, 2, 1)])
        );
        assert_eq!(
            Poly::power_xy(&Q, 1, 1, 1, 1, 1, 1).unwrap(),
            qp(&[(2, 1, 1), (1, 2, 1)])
        );
        let base = qp(&[(1, 0, 1)]) * qp(&[(2, 0, 1), (0, 3, 1)]);
        let g = Poly::power_xy(&Q, 1, 0, 1, 2, 3, 2).unwrap();
        assert_eq!(g, base.pow(2).unwrap());
        assert_eq!(g.len(), 3);
        assert_eq!(g.homogeneity_weights(), Some((3, 2)));
        let f31 = PrimeField::new(31).unwrap();
        let g = Poly::power_xy(&f31, 1, 2, 3, 1, 1, 4).unwrap();
        let base = Poly::from_int_terms(&f31, &[(1, 2, 1)]) * x_plus_y(&f31).pow(3).unwrap();
        assert_eq!(g, base.pow(4).unwrap());
    }

    #[test]
    fn weights() {
        assert_eq!(
            qp(&[(2, 1, 1), (1, 2, 1)]).homogeneity_weights(),
            Some((1, 1))
        );
        assert_eq!(qp(&[(5, 5, 1)]).homogeneity_weights(), Some((1, 1)));
        assert_eq!(
            qp(&[(1, 0, 1), (0, 1, 1), (0, 0, 1)]).homogeneity_weights(),
            None
        );
        assert_eq!(qp(&[(1, 1, 1), (2, 2, 1)]).homogeneity_weights(), None);
    }

    #[test]
    fn rendering() {
        assert_eq!(qp(&[(2, 1, 3), (0, 3, 1)]).to_string(), "3*x^2*y + y^3");
        // Descending in the graded order: y^4 outranks x^2*y.
        assert_eq!(qp(&[(2, 1, 3), (0, 4, 1)]).to_string(), "y^4 + 3*x^2*y");
        assert_eq!(qp(&[(1, 0, -1), (0, 0, -2)]).to_string(), "-x - 2");
        assert_eq!(Poly::zero(&Q).to_string(), "0");
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(
            Poly::from_int_terms(&f7, &[(1, 1, -1)]).to_string(),
            "6*x*y"
        );
    }

    #[test]
    fn exponent_guard() {
        let big = Poly::monomial(&Q, 1 << 20, 0);
        assert!(matches!(
            big.try_mul(&Poly::x(&Q)),
            Err(PolyError::ExponentOverflow(_))
        ));
    }

    fn small_poly(field: PrimeField) -> impl Strategy<Value = Poly<PrimeField>> {
        prop::collection::vec((0u32..4, 0u32..4, -5i64..6), 0..5)
            .prop_map(move |t| Poly::from_int_terms(&field, &t))
    }

    fn small_qpoly() -> impl Strategy<Value = Poly<Rationals>> {
        prop::collection::vec((0u32..4, 0u32..4, -5i64..6), 0..5).prop_map(|t| qp(&t))
    }

    proptest! {
        #[test]
        fn ring_axioms_mod_p(a in small_poly(PrimeField::new(101).unwrap()),
                             b in small_poly(PrimeField::new(101).unwrap()),
                             c in small_poly(PrimeField::new(101).unwrap())) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn ring_axioms_rational(a in small_qpoly(), b in small_qpoly(), c in small_qpoly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn leading_term_is_multiplicative(a in small_qpoly(), b in small_qpoly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let (ma, ca) = a.leading_term().unwrap();
            let (mb, cb) = b.leading_term().unwrap();
            let prod = &a * &b;
            let (m, c) = prod.leading_term().unwrap();
            prop_assert_eq!(m, Monomial::new(ma.i + mb.i, ma.j + mb.j));
            prop_assert_eq!(c, &(ca * cb));
        }

        #[test]
        fn truncation_splits(a in small_qpoly(), m in 0u32..5) {
            let low = a.truncate_x(m);
            let high = &a - &low;
            prop_assert_eq!(&low + &high, a);
            prop_assert!(high.terms().all(|(mono, _)| mono.i >= m));
        }

        #[test]
        fn division_identity(f in small_qpoly(), g in small_qpoly(), h in small_qpoly()) {
            let basis: Vec<_> = [g, h].into_iter().filter(|p| !p.is_zero()).collect();
            let d = f.divide(&basis).unwrap();
            let mut rebuilt = d.remainder.clone();
            for (q, b) in d.quotients.iter().zip(&basis) {
                rebuilt = &rebuilt + &(q * b);
            }
            prop_assert_eq!(rebuilt, f);
            let leads: Vec<_> = basis.iter().map(|b| b.leading_monomial().unwrap()).collect();
            prop_assert!(d.remainder.terms().all(|(m, _)| leads.iter().all(|l| !l.divides(*m))));
        }

        #[test]
        fn phi_is_an_involution(a in small_qpoly()) {
            prop_assert_eq!(a.substitute_phi().substitute_phi(), a);
        }
    }
}
