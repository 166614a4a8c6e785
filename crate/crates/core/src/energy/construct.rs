//! Exponents with nontrivial solutions built from `x^(2n) - x^(n+1) - x^n + 1`
//! and `x^(2n) - 2x^(n+1) + 1`.

use rug::{Integer, Rational};
use serde::Serialize;

use super::EnergyError;
use crate::realcore::{compare_sums, AlgebraicLog, CompareVerdict, Exponent, Poly, RealBall};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionKind {
    Sporadic,
    ThreeAp,
}

#[derive(Debug, Clone, Serialize)]
pub struct SporadicSolution {
    pub n: u64,
    pub kind: SolutionKind,
    #[serde(serialize_with = "crate::energy::serialize_display")]
    pub c: Exponent,
    pub c_approx: String,
    pub phi_approx: String,
    pub polynomial: String,
    pub quadruple: [u64; 4],
    pub verdict: CompareVerdict,
}

/// Divides out every factor `x - 1`.
fn strip_unit_root(p: &Poly) -> Poly {
    let linear = Poly::from_ints_low_first(&[-1, 1]);
    let mut p = p.clone();
    while !p.is_zero() && p.eval(&Rational::from(1)) == 0 {
        p = p.div_rem(&linear).0;
    }
    p
}

fn build(
    n: u64,
    kind: SolutionKind,
    full: Poly,
    search_hi: Rational,
    lhs: &[(i64, u64)],
    rhs: &[(i64, u64)],
    quadruple: [u64; 4],
) -> Result<SporadicSolution, EnergyError> {
    let reduced = strip_unit_root(&full);
    if reduced.degree().unwrap_or(0) == 0 {
        return Err(EnergyError::DegenerateConstruction { n });
    }
    let roots = reduced.squarefree().isolate_roots(&Rational::from(1), &search_hi);
    let Some((lo, hi)) = roots.into_iter().next() else {
        return Err(EnergyError::NoAdmissibleRoot {
            n,
            polynomial: reduced.to_string(),
        });
    };
    let log = AlgebraicLog::new(2, reduced.clone(), lo, hi)?;
    let phi = log.root_enclosure(64).to_decimal(15);
    let c = Exponent::AlgebraicLog(log);
    let verdict = compare_sums(lhs, rhs, &c, 4096)?;
    Ok(SporadicSolution {
        n,
        kind,
        c_approx: c.enclosure(64)?.to_decimal(15),
        c,
        phi_approx: phi,
        polynomial: reduced.to_string(),
        quadruple,
        verdict,
    })
}

fn pow2(e: u64) -> Result<u64, EnergyError> {
    1u64.checked_shl(e as u32)
        .filter(|_| e < 64)
        .ok_or_else(|| EnergyError::InvalidInput(format!("2^{e} does not fit in 64 bits")))
}

fn poly_from_terms(terms: &[(i64, u64)]) -> Poly {
    let deg = terms.iter().map(|t| t.1).max().unwrap_or(0) as usize;
    let mut c = vec![Integer::new(); deg + 1];
    for &(k, e) in terms {
        c[e as usize] += k;
    }
    Poly::from_integers_low_first(&c)
}

/// `c = log_2 phi` with `phi^(2n) + 1 = phi^(n+1) + phi^n`, giving
/// `(2^(2n), 1, 2^(n+1), 2^n)`.
pub fn construct_sporadic(n: u64) -> Result<SporadicSolution, EnergyError> {
    if n <= 1 {
        return Err(EnergyError::DegenerateConstruction { n });
    }
    let q = [pow2(2 * n)?, 1, pow2(n + 1)?, pow2(n)?];
    let full = poly_from_terms(&[(1, 2 * n), (-1, n + 1), (-1, n), (1, 0)]);
    build(
        n,
        SolutionKind::Sporadic,
        full,
        Rational::from(2),
        &[(1, q[0]), (1, q[1])],
        &[(1, q[2]), (1, q[3])],
        q,
    )
}

/// `c = log_2 phi` with `1 + phi^(2n) = 2 phi^(n+1)`: `1, (2^(n+1))^c, (4^n)^c`
/// is an arithmetic progression.
pub fn construct_three_ap(n: u64) -> Result<SporadicSolution, EnergyError> {
    if n <= 1 {
        return Err(EnergyError::DegenerateConstruction { n });
    }
    let q = [pow2(2 * n)?, 1, pow2(n + 1)?, pow2(n + 1)?];
    let full = poly_from_terms(&[(1, 2 * n), (-2, n + 1), (1, 0)]);
    // every root lies below the Cauchy bound 1 + 2
    build(
        n,
        SolutionKind::ThreeAp,
        full,
        Rational::from(3),
        &[(1, q[0]), (1, q[1])],
        &[(2, q[2])],
        q,
    )
}

/// `log 2 / log(N/(N-1))`: a nontrivial solution in `[N]^4` forces `c` below it.
pub fn solution_exponent_bound(n: u64) -> Result<RealBall, EnergyError> {
    if n < 2 {
        return Err(EnergyError::InvalidInput("N must be at least 2".into()));
    }
    let prec = 128;
    let ratio = RealBall::from_rational(&Rational::from((n, n - 1)), prec);
    let den = ratio.ln().expect("ratio exceeds 1");
    Ok(RealBall::ln2(prec).div(&den).expect("log ratio is positive"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sporadic_n2_is_plastic() {
        let s = construct_sporadic(2).unwrap();
        assert_eq!(s.quadruple, [16, 1, 8, 4]);
        assert!(s.verdict.is_equal());
        assert!(s.phi_approx.starts_with("1.3247"));
    }

    #[test]
    fn degenerate_cases() {
        assert!(matches!(
            construct_sporadic(1),
            Err(EnergyError::DegenerateConstruction { n: 1 })
        ));
        assert!(matches!(
            construct_three_ap(1),
            Err(EnergyError::DegenerateConstruction { n: 1 })
        ));
    }

    #[test]
    fn three_ap_n2_is_tribonacci() {
        let s = construct_three_ap(2).unwrap();
        assert_eq!(s.quadruple, [16, 1, 8, 8]);
        assert!(s.verdict.is_equal());
        assert!(s.phi_approx.starts_with("1.8392"));
    }

    #[test]
    fn exponent_bound_values() {
        let b = solution_exponent_bound(2).unwrap();
        assert!(b.contains_rational(&Rational::from(1)));
        let b = solution_exponent_bound(10).unwrap();
        assert!((b.mid_f64() - 6.578813478960584).abs() < 1e-9);
    }
}
