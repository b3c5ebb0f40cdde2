//! Acceptance criteria, one line each. Every expected value comes from an
//! independent route: Buchberger's algorithm, the rank oracle, naive
//! elimination, or a second closed form.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fsig_core::arith::{
    det_binomial_formula, det_binomial_naive, primes_between, Field, PrimeField, Rationals,
};
use fsig_core::closed_basis::{closed_groebner, closed_groebner_simple, BasisError, IdealSpec};
use fsig_core::fsig::{
    corollary_b_check, fsig_at_p, fsig_empirical, lct_general, limit_fsig_general,
    limit_fsig_simple, nvol_simple, PiecewiseFn,
};
use fsig_core::lengths::{length_general, length_simple, length_wlp, Characteristic};
use fsig_core::mutation::Mutation;
use fsig_core::oracle::{buchberger, length_rank};
use fsig_core::poly::Poly;
use fsig_core::verify::{run_verify, Suite, VerifyConfig};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Outcome of one criterion: a count of compared cases or the first failure.
type Verdict = Result<String, String>;
type Criterion = fn() -> Verdict;

fn sorted_desc(a: u64, b: u64, c: u64) -> (u64, u64, u64) {
    let mut e = [a, b, c];
    e.sort_unstable_by(|x, y| y.cmp(x));
    (e[0], e[1], e[2])
}

fn lt_ideal_agrees<F: Field>(field: &F, spec: &IdealSpec, simple: bool) -> Result<bool, String> {
    let closed = if simple {
        closed_groebner_simple(field, spec.k, spec.m, spec.n)
    } else {
        closed_groebner(field, spec)
    };
    let closed = match closed {
        Ok(basis) => basis,
        Err(BasisError::HypothesisViolation(_)) => return Ok(false),
        Err(e) => return Err(format!("{spec:?}: {e}")),
    };
    let gens = [
        Poly::monomial(field, spec.m as u32, 0),
        Poly::monomial(field, 0, spec.n as u32),
        Poly::power_xy(field, spec.a, spec.b, spec.c, 1, 1, spec.k).map_err(|e| e.to_string())?,
    ];
    let oracle = buchberger(&gens).map_err(|e| e.to_string())?;
    if oracle.lt_ideal != closed.basis.lt_ideal {
        return Err(format!(
            "{spec:?} over {}: closed {} vs buchberger {}",
            field.characteristic(),
            closed.basis.lt_ideal,
            oracle.lt_ideal
        ));
    }
    Ok(true)
}

fn groebner_in<F: Field>(field: &F) -> Result<usize, String> {
    let mut compared = 0;
    for k in 1..=12 {
        for m in 1..=12 {
            for n in 1..=12 {
                compared += lt_ideal_agrees(field, &IdealSpec::simple(k, m, n), true)? as usize;
            }
        }
    }
    for m in 1..=12 {
        for k in 1..=4 {
            for a in 0..=3 {
                for b in 0..=3 {
                    for c in 0..=3 {
                        let spec = IdealSpec {
                            m,
                            n: m,
                            k,
                            a,
                            b,
                            c,
                        };
                        compared += lt_ideal_agrees(field, &spec, false)? as usize;
                    }
                }
            }
        }
    }
    Ok(compared)
}

fn groebner_equivalence() -> Verdict {
    let mut compared = groebner_in(&Rationals)?;
    for p in [31, 101] {
        compared += groebner_in(&PrimeField::new(p).unwrap())?;
    }
    Ok(format!("{compared} closed bases match Buchberger"))
}

fn length_triple_agreement() -> Verdict {
    let q_lin = Poly::power_xy(&Rationals, 0, 0, 1, 1, 1, 1).unwrap();
    let anchors = [((3, 2, 2), 4), ((2, 2, 2), 3)];
    for ((k, m, n), want) in anchors {
        let formula = length_simple(k, m, n, Characteristic::Zero).unwrap().value;
        let oracle = length_rank(m as u32, n as u32, &q_lin, k as u32).unwrap();
        if formula != want || oracle != want {
            return Err(format!(
                "anchor ({k},{m},{n}): formula {formula}, oracle {oracle}, want {want}"
            ));
        }
    }
    let mut simple = 0;
    let mut general = 0;
    for p in [31, 101] {
        let fp = PrimeField::new(p).unwrap();
        let ch = Characteristic::Prime(p);
        let lin = Poly::power_xy(&fp, 0, 0, 1, 1, 1, 1).unwrap();
        for k in 1..=14 {
            for m in 1..=14 {
                for n in 1..=14 {
                    let (Ok(s), Ok(w)) = (length_simple(k, m, n, ch), length_wlp(k, m, n, ch))
                    else {
                        continue;
                    };
                    let oracle = length_rank(m as u32, n as u32, &lin, k as u32).unwrap();
                    if s.value != oracle || w.value != oracle {
                        return Err(format!(
                            "(k,m,n,p)=({k},{m},{n},{p}): simple {}, wlp {}, oracle {oracle}",
                            s.value, w.value
                        ));
                    }
                    simple += 1;
                }
            }
        }
        for m in 1..=12u64 {
            for k in 1..=4u64 {
                for a in 0..=3 {
                    for b in 0..=3 {
                        for c in 0..=3 {
                            let spec = IdealSpec {
                                m,
                                n: m,
                                k,
                                a,
                                b,
                                c,
                            };
                            let Ok(formula) = length_general(&spec, ch) else {
                                continue;
                            };
                            let f = Poly::power_xy(&fp, a, b, c, 1, 1, 1).unwrap();
                            let oracle = length_rank(m as u32, m as u32, &f, k as u32).unwrap();
                            if formula.value != oracle {
                                return Err(format!(
                                    "{spec:?} p={p}: formula {}, oracle {oracle}",
                                    formula.value
                                ));
                            }
                            general += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{simple} simple and {general} general cases agree with the oracle"
    ))
}

fn fsig_identity() -> Verdict {
    let anchor = fsig_at_p(1, 1, 1, 7, 3).map_err(|e| e.to_string())?;
    if anchor != q(6, 49) {
        return Err(format!("psi_7(3/7) = {anchor}, want 6/49"));
    }
    let mut compared = 0;
    for p in [7u64, 11, 31, 101] {
        let fp = PrimeField::new(p).unwrap();
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    let f = Poly::power_xy(&fp, a, b, c, 1, 1, 1).unwrap();
                    let mut r = 0;
                    while let Ok(value) = fsig_at_p(a, b, c, p, r) {
                        let l = length_rank(p as u32, p as u32, &f, r as u32).unwrap();
                        let oracle =
                            BigRational::one() - BigRational::new(l.into(), (p * p).into());
                        if value != oracle {
                            return Err(format!(
                                "(a,b,c,p,r)=({a},{b},{c},{p},{r}): {value} vs {oracle}"
                            ));
                        }
                        compared += 1;
                        r += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{compared} values equal 1 - l/p^2"))
}

fn convergence() -> Verdict {
    let primes = primes_between(31, 307);
    let specs: [(u64, u64, u64, u64, u64); 7] = [
        (1, 1, 1, 1, 1),
        (3, 1, 1, 1, 1),
        (2, 1, 0, 1, 1),
        (3, 2, 2, 1, 1),
        (1, 0, 1, 2, 3),
        (1, 1, 1, 2, 2),
        (0, 2, 1, 3, 2),
    ];
    let mut compared = 0;
    let mut worst = BigRational::zero();
    for (a, b, c, u, v) in specs {
        let simple = u == 1 && v == 1;
        let (limit, lambda) = if simple {
            let (x, y, z) = sorted_desc(a, b, c);
            let f = limit_fsig_simple(x, y, z).map_err(|e| e.to_string())?;
            let l = f.lambda().clone();
            (f, l)
        } else {
            let f = limit_fsig_general(a, b, c, u, v).map_err(|e| e.to_string())?;
            let l = lct_general(a, b, c, u, v)
                .unwrap()
                .lambda
                .finite()
                .unwrap()
                .clone();
            (f, l)
        };
        for &p in &primes {
            for i in 0..10 {
                let t = &lambda * q(i, 10);
                let r = (&t * qi(p)).floor().to_integer().try_into().unwrap();
                let psi_p = if simple {
                    fsig_at_p(a, b, c, p, r)
                } else {
                    fsig_empirical(a, b, c, u, v, p, r)
                }
                .map_err(|e| e.to_string())?;
                let diff = (&psi_p - limit.eval(&t)).abs();
                if diff > q(10, p as i64) {
                    return Err(format!(
                        "(a,b,c,u,v)=({a},{b},{c},{u},{v}) p={p} t={t}: |{psi_p} - {}| > 10/p",
                        limit.eval(&t)
                    ));
                }
                worst = worst.max(diff * qi(p));
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} points, max p*|psi_p - psi| = {worst}"))
}

/// Checks the construction invariants again from outside, with random midpoint triples.
fn check_piecewise(f: &PiecewiseFn, rng: &mut ChaCha8Rng) -> Result<(), String> {
    if !f.eval(&BigRational::zero()).is_one() {
        return Err("psi(0) != 1".into());
    }
    if !f.eval(f.lambda()).is_zero() || !f.pieces().last().unwrap().eval(f.lambda()).is_zero() {
        return Err("psi(lambda) != 0".into());
    }
    for (i, bp) in f
        .breakpoints()
        .iter()
        .enumerate()
        .skip(1)
        .take(f.pieces().len() - 1)
    {
        if f.pieces()[i - 1].eval(bp) != f.pieces()[i].eval(bp) {
            return Err(format!("discontinuous at {bp}"));
        }
    }
    let span = f.lambda() * q(6, 5);
    let denom = 1_000_000i64;
    for _ in 0..100 {
        let x = &span * q(rng.random_range(0..=denom), denom);
        let y = &span * q(rng.random_range(0..=denom), denom);
        let mid = (&x + &y) / qi(2);
        if f.eval(&mid) * qi(2) > f.eval(&x) + f.eval(&y) {
            return Err(format!("midpoint convexity fails for {x}, {y}"));
        }
    }
    Ok(())
}

fn piecewise_sanity() -> Verdict {
    let anchor = limit_fsig_general(1, 0, 1, 2, 3).map_err(|e| e.to_string())?;
    if anchor.breakpoints() != [q(0, 1), q(1, 9), q(5, 9)] || anchor.eval(&q(1, 9)) != q(2, 3) {
        return Err(format!(
            "anchor breakpoints {:?}",
            anchor.to_json().breakpoints
        ));
    }
    let left = anchor.pieces()[0].eval(&q(1, 9));
    let right = anchor.pieces()[1].eval(&q(1, 9));
    if left != q(2, 3) || right != q(2, 3) {
        return Err(format!("anchor values at 1/9: {left}, {right}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut built = 0;
    for a in 1..=4 {
        for b in 0..=a {
            for c in 0..=b {
                let f = limit_fsig_simple(a, b, c).map_err(|e| format!("({a},{b},{c}): {e}"))?;
                check_piecewise(&f, &mut rng).map_err(|e| format!("({a},{b},{c}): {e}"))?;
                built += 1;
            }
        }
    }
    for a in 0..=3 {
        for b in 0..=3 {
            for c in 1..=3 {
                for u in 1..=3 {
                    for v in 1..=3 {
                        let f = limit_fsig_general(a, b, c, u, v)
                            .map_err(|e| format!("({a},{b},{c},{u},{v}): {e}"))?;
                        check_piecewise(&f, &mut rng)
                            .map_err(|e| format!("({a},{b},{c},{u},{v}): {e}"))?;
                        built += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{built} functions satisfy every invariant"))
}

fn corollary_b() -> Verdict {
    let half = q(1, 2);
    let nvol = nvol_simple(1, 1, 1, &half).map_err(|e| e.to_string())?;
    let psi = limit_fsig_simple(1, 1, 1).unwrap().eval(&half);
    if nvol / qi(4) != q(1, 16) || psi != q(1, 16) {
        return Err("anchor nvol(1,1,1; 1/2)/4 = 1/16 = psi(1/2) fails".into());
    }
    let mut compared = 0;
    for a in 1..=4 {
        for b in 0..=a {
            for c in 0..=b {
                for i in 0..20 {
                    let t = q(i, 16);
                    if !corollary_b_check(a, b, c, &t).map_err(|e| e.to_string())? {
                        return Err(format!("(a,b,c)=({a},{b},{c}) t={t}"));
                    }
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} points satisfy nvol/4 = psi"))
}

fn binomial_determinant() -> Verdict {
    let mut compared = 0;
    for k in 0..=12i64 {
        for a in 0..=k {
            for v in -a..=8 - a {
                let formula = det_binomial_formula(k, a, v).map_err(|e| e.to_string())?;
                let naive = det_binomial_naive(k, a, v).map_err(|e| e.to_string())?;
                if formula != naive || !formula.is_integer() {
                    return Err(format!("(k,a,v)=({k},{a},{v}): {formula} vs {naive}"));
                }
                for p in [31i64, 101] {
                    if k + a + v < p && (formula.to_integer() % p).is_zero() {
                        return Err(format!("(k,a,v)=({k},{a},{v}) vanishes mod {p}"));
                    }
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} determinants match"))
}

/// Odd primes only, so the witness is not an artifact of characteristic 2.
fn non_stabilization() -> Verdict {
    let limit = limit_fsig_simple(1, 1, 1).unwrap();
    for p in primes_between(3, 101) {
        let fp = PrimeField::new(p).unwrap();
        let f = Poly::power_xy(&fp, 1, 1, 1, 1, 1, 1).unwrap();
        for r in (1..p).step_by(2) {
            let Ok(psi_p) = fsig_at_p(1, 1, 1, p, r) else {
                break;
            };
            let t = q(r as i64, p as i64);
            let psi = limit.eval(&t);
            if psi_p != psi {
                let l = length_rank(p as u32, p as u32, &f, r as u32).unwrap();
                let oracle = BigRational::one() - BigRational::new(l.into(), (p * p).into());
                if oracle != psi_p {
                    return Err(format!("witness p={p} r={r} not confirmed by the oracle"));
                }
                return Ok(format!("p={p}, r={r}: psi_p = {psi_p}, psi = {psi}"));
            }
        }
    }
    Err("no witness with p <= 101 and odd r".into())
}

fn mutation_sentinel() -> Verdict {
    let config = |mutation| VerifyConfig {
        suite: Suite::All,
        max_size: 5,
        primes: vec![31, 101],
        mutation,
    };
    let clean = run_verify(&config(None));
    if let Some((name, ce)) = clean.first_failure() {
        return Err(format!("unmutated suite fails: {name} at {}", ce.params));
    }
    let mut caught = Vec::new();
    for m in Mutation::ALL {
        match run_verify(&config(Some(m))).first_failure() {
            Some((name, _)) => caught.push(format!("{m}->{name}")),
            None => return Err(format!("mutation {m} survives")),
        }
    }
    Ok(caught.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("groebner equivalence", groebner_equivalence),
        ("length triple agreement", length_triple_agreement),
        ("f-signature identity", fsig_identity),
        ("convergence to the limit", convergence),
        ("piecewise sanity", piecewise_sanity),
        ("normalized volume identity", corollary_b),
        ("binomial determinant", binomial_determinant),
        ("non-stabilization witness", non_stabilization),
        ("mutation sentinel", mutation_sentinel),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}; {secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
