//! Dense univariate polynomials over the rationals, with just enough
//! machinery for exact root certification: division, gcd, Sturm counts and
//! bisection on a rational interval.

use std::fmt;

use rug::{Integer, Rational};

/// Coefficients are stored lowest degree first; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    /// From integer coefficients, lowest degree first.
    pub fn from_ints_low_first(coeffs: &[i64]) -> Self {
        Self::from_rationals(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// From integer coefficients, highest degree first (`[1, 0, -1, -1]` is `x^3 - x - 1`).
    pub fn from_ints_high_first(coeffs: &[i64]) -> Self {
        let mut low: Vec<i64> = coeffs.to_vec();
        low.reverse();
        Self::from_ints_low_first(&low)
    }

    pub fn from_integers_low_first(coeffs: &[Integer]) -> Self {
        Self::from_rationals(coeffs.iter().map(Rational::from).collect())
    }

    /// `sum coeff * x^exp` from sparse terms.
    pub fn from_terms(terms: &[(i64, u32)]) -> Self {
        let deg = terms.iter().map(|t| t.1).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::new(); deg + 1];
        for &(c, e) in terms {
            coeffs[e as usize] += c;
        }
        Self::from_rationals(coeffs)
    }

    pub fn monomial(coeff: Rational, exp: usize) -> Self {
        let mut coeffs = vec![Rational::new(); exp + 1];
        coeffs[exp] = coeff;
        Self::from_rationals(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Integer coefficients (lowest first) when all coefficients are integral.
    pub fn integer_coeffs(&self) -> Option<Vec<Integer>> {
        self.coeffs
            .iter()
            .map(|c| (*c.denom() == 1).then(|| c.numer().clone()))
            .collect()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        self.eval(x).cmp0() as i32
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rational::new(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Poly::from_rationals(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::from_rationals(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += Rational::from(a * b);
            }
        }
        Poly::from_rationals(coeffs)
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::from_rationals(self.coeffs.iter().map(|c| Rational::from(c * k)).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_rationals(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u64))
                .collect(),
        )
    }

    /// Euclidean division: `(quotient, remainder)`. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::new(); self.coeffs.len().saturating_sub(d).max(1)];
        while rem.len() > d {
            let top = rem.len() - 1;
            let factor = Rational::from(&rem[top] / &lead);
            if factor != 0 {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    rem[top - d + i] -= Rational::from(&factor * c);
                }
                quot[top - d] = factor;
            }
            rem.pop();
            while rem.last().is_some_and(|c| *c == 0) {
                rem.pop();
            }
        }
        (Poly::from_rationals(quot), Poly::from_rationals(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic scaling; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => {
                let inv = Rational::from(l.recip_ref());
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Sturm sequence of the squarefree part.
    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let p0 = self.squarefree();
        let mut seq = vec![p0.clone(), p0.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        let seq = self.sturm_sequence();
        let changes = |x: &Rational| {
            let signs: Vec<i32> = seq.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        changes(lo).saturating_sub(changes(hi))
    }

    /// Disjoint intervals `(a, b]`, each holding exactly one distinct root
    /// in `(lo, hi]`, in increasing order.
    pub fn isolate_roots(&self, lo: &Rational, hi: &Rational) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone())];
        while let Some((a, b)) = stack.pop() {
            match self.count_roots(&a, &b) {
                0 => {}
                1 => out.push((a, b)),
                _ => {
                    let m = Rational::from(&a + &b) / 2u32;
                    stack.push((a, m.clone()));
                    stack.push((m, b));
                }
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Shrinks an isolating interval for a simple root by bisection until its
    /// width is at most `2^-bits`. The endpoints never become roots of `self`:
    /// an exact rational root collapses the interval onto it.
    pub fn refine_root(&self, lo: &Rational, hi: &Rational, bits: u32) -> (Rational, Rational) {
        let sf = self.squarefree();
        let mut a = lo.clone();
        let mut b = hi.clone();
        let target = Rational::from((Integer::from(1), Integer::from(1) << bits));
        let sb = sf.sign_at(&b);
        if sb == 0 {
            return (b.clone(), b);
        }
        while Rational::from(&b - &a) > target {
            let m = Rational::from(&a + &b) / 2u32;
            let sm = sf.sign_at(&m);
            if sm == 0 {
                return (m.clone(), m);
            }
            if sm == sb {
                b = m;
            } else {
                a = m;
            }
        }
        (a, b)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = abs != 1 || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn quartic_factors_through_plastic_polynomial() {
        // x^4 - x^3 - x^2 + 1 = (x - 1)(x^3 - x - 1)
        let quartic = Poly::from_ints_high_first(&[1, -1, -1, 0, 1]);
        let cubic = Poly::from_ints_high_first(&[1, 0, -1, -1]);
        assert!(quartic.rem(&cubic).is_zero());
        let (quot, rem) = quartic.div_rem(&Poly::from_ints_high_first(&[1, -1]));
        assert!(rem.is_zero());
        assert_eq!(quot, cubic);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = Poly::from_ints_high_first(&[1, 0, -3, 2]);
        let sf = p.squarefree();
        assert_eq!(sf, Poly::from_ints_high_first(&[1, 1, -2]));
        let g = p.gcd(&Poly::from_ints_high_first(&[1, -1]));
        assert_eq!(g, Poly::from_ints_high_first(&[1, -1]));
    }

    #[test]
    fn sturm_counts_plastic_root() {
        let cubic = Poly::from_ints_high_first(&[1, 0, -1, -1]);
        assert_eq!(cubic.count_roots(&q(-10, 1), &q(10, 1)), 1);
        assert_eq!(cubic.count_roots(&q(132, 100), &q(133, 100)), 1);
        assert_eq!(cubic.count_roots(&q(0, 1), &q(1, 1)), 0);
    }

    #[test]
    fn isolates_all_roots_of_a_product() {
        // (x-1)(x-2)(x-3)
        let p = Poly::from_ints_high_first(&[1, -6, 11, -6]);
        let roots = p.isolate_roots(&q(0, 1), &q(4, 1));
        assert_eq!(roots.len(), 3);
        for (a, b) in &roots {
            assert_eq!(p.count_roots(a, b), 1);
        }
    }

    #[test]
    fn refinement_hits_rational_root_exactly() {
        let p = Poly::from_ints_high_first(&[2, -1]); // 2x - 1
        let (a, b) = p.refine_root(&q(0, 1), &q(1, 1), 40);
        assert_eq!(a, q(1, 2));
        assert_eq!(b, q(1, 2));
    }

    #[test]
    fn display_is_readable() {
        let p = Poly::from_ints_high_first(&[1, 0, -1, -1]);
        assert_eq!(p.to_string(), "x^3 - x - 1");
    }
}
