//! Rectangular complex balls.

use rug::Float;
use serde::{Serialize, Serializer};

use crate::realcore::RealBall;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn zero(prec: u32) -> Self {
        ComplexBall {
            re: RealBall::zero(prec),
            im: RealBall::zero(prec),
        }
    }

    /// `e^(i theta)`.
    pub fn cis(theta: &RealBall) -> Self {
        let (s, c) = theta.sin_cos();
        ComplexBall { re: c, im: s }
    }

    pub fn add(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn mul_i64(&self, k: i64) -> ComplexBall {
        ComplexBall {
            re: self.re.mul_i64(k),
            im: self.im.mul_i64(k),
        }
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self) -> RealBall {
        self.re.pow_u32(2).add(&self.im.pow_u32(2))
    }

    /// Upper bound on `|z|`.
    pub fn abs_upper(&self) -> Float {
        let n = self.norm_sqr().upper();
        let mut r = Float::with_val(n.prec(), &n);
        r.sqrt_round(rug::float::Round::Up);
        r
    }
}

impl Serialize for ComplexBall {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            re: String,
            im: String,
        }
        Repr {
            re: self.re.to_decimal(20),
            im: self.im.to_decimal(20),
        }
        .serialize(s)
    }
}
