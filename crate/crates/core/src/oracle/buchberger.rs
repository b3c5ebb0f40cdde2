use crate::arith::Field;
use crate::closed_basis::GroebnerBasis;
use crate::poly::{Monomial, MonomialIdeal, Poly, PolyError};

fn monic<F: Field>(p: &Poly<F>) -> Result<Poly<F>, PolyError> {
    let (_, lc) = p.leading_term()?;
    let inv = p.field().inv(lc).expect("leading coefficient is nonzero");
    Ok(p.scalar_mul(&inv))
}

/// The S-polynomial of `f` and `g`, with both scaled to be monic.
pub fn s_polynomial<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Result<Poly<F>, PolyError> {
    let (lf, cf) = f.leading_term()?;
    let (lg, cg) = g.leading_term()?;
    let field = f.field();
    let l = lf.lcm(lg);
    let left = f.mul_term(lf.quotient_of(l).unwrap(), &field.inv(cf).unwrap())?;
    let right = g.mul_term(lg.quotient_of(l).unwrap(), &field.inv(cg).unwrap())?;
    left.try_sub(&right)
}

/// Buchberger's algorithm with the normal selection strategy (smallest lcm
/// first) and the coprime-leading-monomial criterion. The returned generators
/// are monic and have pairwise non-dividing leading monomials.
pub fn buchberger<F: Field>(gens: &[Poly<F>]) -> Result<GroebnerBasis<F>, PolyError> {
    let mut basis: Vec<Poly<F>> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        basis.push(monic(g)?);
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let lead = |b: &[Poly<F>], i: usize| b[i].leading_monomial().unwrap();
    while !pairs.is_empty() {
        let (pos, _) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(i, j))| (lead(&basis, i).lcm(lead(&basis, j)), i, j))
            .unwrap();
        let (i, j) = pairs.swap_remove(pos);
        if lead(&basis, i).is_coprime(lead(&basis, j)) {
            continue;
        }
        let r = s_polynomial(&basis[i], &basis[j])?.normal_form(&basis)?;
        if !r.is_zero() {
            let new = basis.len();
            basis.push(monic(&r)?);
            pairs.extend((0..new).map(|i| (i, new)));
        }
    }
    Ok(minimalize(basis))
}

/// Drops generators whose leading monomial is a multiple of another's.
fn minimalize<F: Field>(basis: Vec<Poly<F>>) -> GroebnerBasis<F> {
    let leads: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading_monomial().unwrap())
        .collect();
    let keep: Vec<bool> = (0..basis.len())
        .map(|i| {
            !(0..basis.len())
                .any(|j| j != i && leads[j].divides(leads[i]) && (leads[j] != leads[i] || j < i))
        })
        .collect();
    let generators: Vec<Poly<F>> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    let lt_ideal = MonomialIdeal::new(generators.iter().map(|g| g.leading_monomial().unwrap()));
    GroebnerBasis {
        generators,
        lt_ideal,
    }
}

/// Outcome of Buchberger's criterion on a candidate basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerCertificate<F: Field> {
    pub is_groebner: bool,
    /// First pair (by index) whose S-polynomial has a nonzero normal form.
    pub failing_pair: Option<(usize, usize, Poly<F>)>,
}

/// Checks every pairwise S-polynomial of `candidate` against the candidate set.
pub fn is_groebner<F: Field>(candidate: &[Poly<F>]) -> Result<GroebnerCertificate<F>, PolyError> {
    for j in 0..candidate.len() {
        for i in 0..j {
            let r = s_polynomial(&candidate[i], &candidate[j])?.normal_form(candidate)?;
            if !r.is_zero() {
                return Ok(GroebnerCertificate {
                    is_groebner: false,
                    failing_pair: Some((i, j, r)),
                });
            }
        }
    }
    Ok(GroebnerCertificate {
        is_groebner: true,
        failing_pair: None,
    })
}
