//! Multiplicative relations `prod x_i^(v_i) = 1` through the integer kernel
//! of the prime-exponent matrix.

use std::collections::BTreeSet;

use num_prime::nt_funcs::factorize64;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use super::certificate::{parse_field, Certificate, CertificateKind, Verdict};
use super::DissociationError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Multiplicative {
    Independent,
    Relation { exponents: Vec<i64> },
}

/// Columns are `x_j`, rows are primes, entries are exponents.
fn exponent_matrix(x: &[u64]) -> Vec<Vec<Integer>> {
    let factors: Vec<_> = x.iter().map(|&v| factorize64(v)).collect();
    let primes: BTreeSet<u64> = factors.iter().flat_map(|f| f.keys().copied()).collect();
    primes
        .iter()
        .map(|p| factors.iter().map(|f| Integer::from(*f.get(p).unwrap_or(&0))).collect())
        .collect()
}

/// Kernel of the exponent matrix by unimodular column reduction: columns
/// `[M; I]` are combined until the top block is in echelon form, and the
/// columns whose top part vanishes carry a kernel basis below.
fn kernel(m: &[Vec<Integer>], k: usize) -> Vec<Vec<Integer>> {
    let rows = m.len();
    let mut cols: Vec<Vec<Integer>> = (0..k)
        .map(|j| {
            let mut c: Vec<Integer> = m.iter().map(|r| r[j].clone()).collect();
            c.extend((0..k).map(|i| Integer::from((i == j) as u32)));
            c
        })
        .collect();
    let mut start = 0;
    for r in 0..rows {
        loop {
            let piv = (start..k)
                .filter(|&j| cols[j][r] != 0)
                .min_by(|&a, &b| cols[a][r].cmp_abs(&cols[b][r]).then(a.cmp(&b)));
            let Some(piv) = piv else { break };
            let mut reduced = true;
            for j in start..k {
                if j == piv || cols[j][r] == 0 {
                    continue;
                }
                let q = Integer::from(&cols[j][r] / &cols[piv][r]);
                let (pc, jc) = if piv < j {
                    let (a, b) = cols.split_at_mut(j);
                    (&a[piv], &mut b[0])
                } else {
                    let (a, b) = cols.split_at_mut(piv);
                    (&b[0], &mut a[j])
                };
                for (t, s) in jc.iter_mut().zip(pc) {
                    *t -= Integer::from(&q * s);
                }
                if jc[r] != 0 {
                    reduced = false;
                }
            }
            if reduced {
                cols.swap(start, piv);
                start += 1;
                break;
            }
        }
    }
    cols[start..].iter().map(|c| c[rows..].to_vec()).collect()
}

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    a.iter().zip(b).map(|(x, y)| Integer::from(x * y)).sum()
}

/// LLL reduction with `delta = 3/4`, exact rational Gram-Schmidt.
fn lll(mut b: Vec<Vec<Integer>>) -> Vec<Vec<Integer>> {
    let n = b.len();
    if n < 2 {
        return b;
    }
    let gram_schmidt = |b: &[Vec<Integer>]| {
        let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut mu = vec![vec![Rational::new(); n]; n];
        let mut norms: Vec<Rational> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<Rational> = b[i].iter().map(Rational::from).collect();
            for j in 0..i {
                let num: Rational = b[i].iter().zip(&star[j]).map(|(x, y)| Rational::from(x * y)).sum();
                mu[i][j] = num / &norms[j];
                for (t, s) in v.iter_mut().zip(&star[j]) {
                    *t -= Rational::from(&mu[i][j] * s);
                }
            }
            norms.push(v.iter().map(|t| Rational::from(t * t)).sum());
            star.push(v);
        }
        (mu, norms)
    };
    let delta = Rational::from((3, 4));
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&b);
            let q = mu[k][j].clone().round();
            if q != 0 {
                let q = q.numer().clone();
                let bj = b[j].clone();
                for (t, s) in b[k].iter_mut().zip(&bj) {
                    *t -= Integer::from(&q * s);
                }
            }
        }
        let (mu, norms) = gram_schmidt(&b);
        let lhs = norms[k].clone();
        let rhs = (delta.clone() - Rational::from(&mu[k][k - 1] * &mu[k][k - 1])) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

/// LLL-reduced basis of the relation lattice of `x`.
pub fn relation_lattice(x: &[u64]) -> Vec<Vec<Integer>> {
    let m = exponent_matrix(x);
    let basis = lll(kernel(&m, x.len()));
    basis.into_iter().filter(|v| v.iter().any(|t| *t != 0)).collect()
}

/// Whether `prod x_i^(v_i) = 1`, by comparing the two sides as integers.
pub fn verify_relation(x: &[u64], v: &[i64]) -> bool {
    let mut num = Integer::from(1);
    let mut den = Integer::from(1);
    for (&xi, &vi) in x.iter().zip(v) {
        let p = Integer::from(xi).pow(vi.unsigned_abs() as u32);
        if vi > 0 {
            num *= p;
        } else if vi < 0 {
            den *= p;
        }
    }
    num == den
}

fn normalize(mut v: Vec<Integer>) -> Vec<Integer> {
    if v.iter().find(|t| **t != 0).is_some_and(|t| *t < 0) {
        for t in &mut v {
            *t = Integer::from(-&*t);
        }
    }
    v
}

/// Preferred relation among small combinations of the reduced basis: the
/// largest support, then the least Euclidean norm, then lexicographic order.
fn pick_relation(basis: &[Vec<Integer>]) -> Vec<Integer> {
    let r = basis.len();
    let span: i64 = match r {
        0..=4 => 2,
        5..=8 => 1,
        _ => 0,
    };
    let k = basis[0].len();
    let mut best: Option<(usize, Integer, Vec<Integer>)> = None;
    let mut consider = |v: Vec<Integer>| {
        if v.iter().all(|t| *t == 0) {
            return;
        }
        let v = normalize(v);
        let support = v.iter().filter(|t| **t != 0).count();
        let norm = dot(&v, &v);
        let better = match &best {
            None => true,
            Some((s, n, b)) => {
                (support, std::cmp::Reverse(&norm), std::cmp::Reverse(&v))
                    > (*s, std::cmp::Reverse(n), std::cmp::Reverse(b))
            }
        };
        if better {
            best = Some((support, norm, v));
        }
    };
    if span == 0 {
        basis.iter().cloned().for_each(&mut consider);
    } else {
        let width = (2 * span + 1) as u64;
        for idx in 0..width.pow(r as u32) {
            let mut v = vec![Integer::new(); k];
            let mut t = idx;
            for b in basis {
                let coef = (t % width) as i64 - span;
                t /= width;
                for (s, e) in v.iter_mut().zip(b) {
                    *s += Integer::from(e * coef);
                }
            }
            consider(v);
        }
    }
    best.expect("nonempty basis").2
}

/// `Independent`, or a verified relation with nonzero exponents on as many
/// `x_i` as possible. A value `1` is reported at once as the relation `e_i`.
pub fn multiplicative_independence(x: &[u64]) -> Result<Multiplicative, DissociationError> {
    if x.is_empty() || x.contains(&0) {
        return Err(DissociationError::InvalidInput(
            "need a nonempty list of positive integers".into(),
        ));
    }
    if let Some(i) = x.iter().position(|&v| v == 1) {
        let mut e = vec![0; x.len()];
        e[i] = 1;
        return Ok(Multiplicative::Relation { exponents: e });
    }
    let basis = relation_lattice(x);
    if basis.is_empty() {
        return Ok(Multiplicative::Independent);
    }
    let v = pick_relation(&basis);
    let exponents: Vec<i64> = v
        .iter()
        .map(|t| t.to_i64())
        .collect::<Option<_>>()
        .ok_or_else(|| DissociationError::InvalidInput("relation exponents overflow i64".into()))?;
    if !verify_relation(x, &exponents) {
        return Err(DissociationError::InvalidInput(format!(
            "kernel vector {exponents:?} failed the exact check"
        )));
    }
    Ok(Multiplicative::Relation { exponents })
}

pub fn relation_certificate(x: &[u64]) -> Result<Certificate, DissociationError> {
    let result = multiplicative_independence(x)?;
    let rank = if x.contains(&1) {
        Value::Null
    } else {
        json!(relation_lattice(x).len())
    };
    let (verdict, exponents) = match &result {
        Multiplicative::Independent => (Verdict::Independent, Value::Null),
        Multiplicative::Relation { exponents } => (Verdict::Relation, json!(exponents)),
    };
    let evidence = json!({ "exponents": exponents, "kernel_rank": rank });
    Ok(Certificate::new(
        CertificateKind::MultiplicativeRelation,
        json!({ "points": x }),
        verdict,
        evidence,
        0,
    ))
}

pub(crate) fn recheck_inputs(inputs: &Value) -> Result<Certificate, DissociationError> {
    let x: Vec<u64> = parse_field(inputs, "points")?;
    relation_certificate(&x)
}
