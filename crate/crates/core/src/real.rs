//! Scalar abstraction so the numerical pipeline can run in binary64 or in
//! multiprecision binary floating point.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

pub trait Real:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Working precision in bits.
    const BITS: usize;

    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn epsilon() -> Self;
    /// Returns `(cos(p*pi/q), sin(p*pi/q))`.
    fn cos_sin_pi(p: i64, q: i64) -> (Self, Self);
    fn to_decimal(&self) -> String;
    fn parse_decimal(s: &str) -> Option<Self>;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn from_i64(x: i64) -> Self {
        Self::from_f64(x as f64)
    }
    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
    fn is_finite(&self) -> bool {
        self.to_f64().is_finite()
    }
    /// cos(pi/n).
    fn cos_pi_over(n: u32) -> Self {
        match n {
            2 => Self::zero(),
            3 => Self::from_f64(0.5),
            _ => Self::cos_sin_pi(1, n as i64).0,
        }
    }
}

impl Real for f64 {
    const BITS: usize = 53;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn cos_sin_pi(p: i64, q: i64) -> (Self, Self) {
        let t = std::f64::consts::PI * p as f64 / q as f64;
        (t.cos(), t.sin())
    }
    fn to_decimal(&self) -> String {
        format!("{:e}", self)
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// Binary floating point with `P` bits of mantissa.
#[derive(Clone)]
pub struct MpFloat<const P: usize>(BigFloat);

pub type F256 = MpFloat<256>;
pub type F1024 = MpFloat<1024>;

impl<const P: usize> MpFloat<P> {
    pub fn inner(&self) -> &BigFloat {
        &self.0
    }
}

impl<const P: usize> fmt::Debug for MpFloat<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: usize> fmt::Display for MpFloat<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: usize> PartialEq for MpFloat<P> {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl<const P: usize> PartialOrd for MpFloat<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! mp_binop {
    ($tr:ident, $f:ident) => {
        impl<const P: usize> $tr for MpFloat<P> {
            type Output = Self;
            fn $f(self, rhs: Self) -> Self {
                MpFloat(self.0.$f(&rhs.0, P, RM))
            }
        }
    };
}
mp_binop!(Add, add);
mp_binop!(Sub, sub);
mp_binop!(Mul, mul);
mp_binop!(Div, div);

impl<const P: usize> Neg for MpFloat<P> {
    type Output = Self;
    fn neg(self) -> Self {
        MpFloat(self.0.neg())
    }
}

impl<const P: usize> Real for MpFloat<P> {
    const BITS: usize = P;

    fn from_f64(x: f64) -> Self {
        MpFloat(BigFloat::from_f64(x, P))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_string().parse().unwrap_or(f64::NAN)
    }
    fn sqrt(&self) -> Self {
        MpFloat(self.0.sqrt(P, RM))
    }
    fn epsilon() -> Self {
        MpFloat(BigFloat::from_f64(2.0, P).powi(P - 1, P, RM).reciprocal(P, RM))
    }
    fn cos_sin_pi(p: i64, q: i64) -> (Self, Self) {
        CONSTS.with(|cc| {
            let mut cc = cc.borrow_mut();
            let work = P + 64;
            let pi = cc.pi(work, RM);
            let t = pi
                .mul(&BigFloat::from_i64(p, work), work, RM)
                .div(&BigFloat::from_i64(q, work), work, RM);
            let c = t.cos(work, RM, &mut cc);
            let s = t.sin(work, RM, &mut cc);
            (
                MpFloat(c.add(&BigFloat::from_f64(0.0, P), P, RM)),
                MpFloat(s.add(&BigFloat::from_f64(0.0, P), P, RM)),
            )
        })
    }
    fn to_decimal(&self) -> String {
        self.0.to_string()
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        CONSTS.with(|cc| {
            let v = BigFloat::parse(s.trim(), Radix::Dec, P, RM, &mut cc.borrow_mut());
            if v.is_nan() {
                None
            } else {
                Some(MpFloat(v))
            }
        })
    }
}

/// Converts between scalar types through their decimal representation.
pub fn convert<A: Real, B: Real>(x: &A) -> B {
    if A::BITS <= 53 {
        B::from_f64(x.to_f64())
    } else {
        B::parse_decimal(&x.to_decimal()).unwrap_or_else(|| B::from_f64(x.to_f64()))
    }
}
