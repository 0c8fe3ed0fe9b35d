//! Real algebraic number fields `Q(theta)`: power-basis arithmetic modulo an
//! irreducible minimal polynomial, with `theta` selected by an isolating
//! rational interval.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::GroebnerError;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense univariate polynomials over `Q`, lowest degree first.
pub mod qpoly {
    use super::*;

    pub type QPoly = Vec<Rational>;

    pub fn trim(mut p: QPoly) -> QPoly {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn degree(p: &[Rational]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }

    pub fn add(a: &[Rational], b: &[Rational]) -> QPoly {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()).collect())
    }

    pub fn sub(a: &[Rational], b: &[Rational]) -> QPoly {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()).collect())
    }

    pub fn scale(a: &[Rational], c: &Rational) -> QPoly {
        trim(a.iter().map(|x| x * c).collect())
    }

    pub fn mul(a: &[Rational], b: &[Rational]) -> QPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(a: &[Rational], b: &[Rational]) -> (QPoly, QPoly) {
        let db = degree(b).expect("nonzero divisor");
        let lead = b[db].clone();
        let mut r = trim(a.to_vec());
        let mut q = vec![Rational::zero(); r.len().saturating_sub(db).max(1)];
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = &r[dr] / &lead;
            let shift = dr - db;
            for (i, y) in b.iter().enumerate() {
                r[i + shift] -= &c * y;
            }
            q[shift] += c;
            r = trim(r);
        }
        (trim(q), r)
    }

    /// `(g, s, t)` with `s a + t b = g = gcd(a, b)`, `g` monic.
    pub fn ext_gcd(a: &[Rational], b: &[Rational]) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
        let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![Rational::one()]);
        while degree(&r1).is_some() {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            let t = sub(&t0, &mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match degree(&r0) {
            Some(d) => {
                let inv = r0[d].recip();
                (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
            }
            None => (r0, s0, t0),
        }
    }

    pub fn eval(p: &[Rational], x: &Rational) -> Rational {
        p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(p: &[Rational]) -> QPoly {
        trim(p.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
    }

    pub fn sturm_sequence(p: &[Rational]) -> Vec<QPoly> {
        let mut seq = vec![trim(p.to_vec()), derivative(p)];
        while degree(seq.last().unwrap()).is_some_and(|d| d > 0) {
            let n = seq.len();
            let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
            if degree(&r).is_none() {
                break;
            }
            seq.push(r.into_iter().map(|c| -c).collect());
        }
        seq
    }

    fn sign_changes(seq: &[QPoly], x: &Rational) -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .map(|p| eval(p, x))
            .filter(|v| !v.is_zero())
            .map(|v| if v.is_positive() { 1 } else { -1 })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_roots(p: &[Rational], lo: &Rational, hi: &Rational) -> usize {
        let seq = sturm_sequence(p);
        sign_changes(&seq, lo).saturating_sub(sign_changes(&seq, hi))
    }
}

use qpoly::QPoly;

struct FieldData {
    name: String,
    /// Monic minimal polynomial, lowest degree first.
    modulus: QPoly,
    /// Isolating interval, refined in place.
    interval: Mutex<(Rational, Rational)>,
}

/// `Q(theta)` with `theta` the unique root of the modulus in its interval.
#[derive(Clone)]
pub struct NumberField(Arc<FieldData>);

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({}), {} = 0", self.0.name, self.describe_modulus())
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.modulus == other.0.modulus && self.0.name == other.0.name)
    }
}

impl NumberField {
    /// Field from a minimal polynomial (lowest degree first) and an interval
    /// containing exactly one of its real roots. Irreducibility is checked.
    pub fn new(name: &str, modulus: &[Rational], lo: Rational, hi: Rational) -> Result<Self, GroebnerError> {
        let m = qpoly::trim(modulus.to_vec());
        let d = qpoly::degree(&m).filter(|&d| d > 0).ok_or_else(|| GroebnerError::Field("constant modulus".into()))?;
        let lead = m[d].recip();
        let m = qpoly::scale(&m, &lead);
        if qpoly::eval(&m, &lo).is_zero() || qpoly::eval(&m, &hi).is_zero() {
            return Err(GroebnerError::Field("interval endpoint is a root".into()));
        }
        let roots = qpoly::count_roots(&m, &lo, &hi);
        if roots != 1 {
            return Err(GroebnerError::Field(format!("interval holds {roots} roots")));
        }
        check_irreducible(&m)?;
        Ok(NumberField(Arc::new(FieldData { name: name.to_string(), modulus: m, interval: Mutex::new((lo, hi)) })))
    }

    /// Convenience constructor from integer coefficients and a floating-point
    /// interval (converted exactly).
    pub fn from_integers(name: &str, coeffs: &[i64], lo: f64, hi: f64) -> Result<Self, GroebnerError> {
        let m: QPoly = coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        let conv = |x: f64| Rational::from_float(x).ok_or_else(|| GroebnerError::Field("non-finite endpoint".into()));
        Self::new(name, &m, conv(lo)?, conv(hi)?)
    }

    /// The rationals, as `Q(theta)` with `theta = 0`.
    pub fn rationals() -> Self {
        NumberField(Arc::new(FieldData {
            name: "0".into(),
            modulus: vec![Rational::zero(), Rational::one()],
            interval: Mutex::new((rat(-1, 1), rat(1, 1))),
        }))
    }

    /// `Q(sqrt(p_1), ..., sqrt(p_m))` for pairwise coprime squarefree
    /// radicands, flattened to the primitive element `sum sqrt(p_i)`. Returns
    /// the field and the square roots as elements.
    pub fn multiquadratic(radicands: &[u64]) -> Result<(Self, Vec<FieldElem>), GroebnerError> {
        let m = radicands.len();
        for (i, &p) in radicands.iter().enumerate() {
            let squarefree = p > 1 && (2..).take_while(|k| k * k <= p).all(|k| p % (k * k) != 0);
            if !squarefree || radicands[..i].iter().any(|&q| q.gcd(&p) != 1) {
                return Err(GroebnerError::Field(format!("radicand {p} not squarefree and coprime")));
            }
        }
        let n = 1usize << m;
        let basis_mul = |a: &[Rational], b: &[Rational]| {
            let mut out = vec![Rational::zero(); n];
            for s in 0..n {
                if a[s].is_zero() {
                    continue;
                }
                for t in 0..n {
                    if b[t].is_zero() {
                        continue;
                    }
                    let common: u64 = (0..m).filter(|i| (s & t) >> i & 1 == 1).map(|i| radicands[i]).product();
                    out[s ^ t] += &a[s] * &b[t] * Rational::from_integer(BigInt::from(common));
                }
            }
            out
        };
        let mut theta = vec![Rational::zero(); n];
        for i in 0..m {
            theta[1 << i] = Rational::one();
        }
        let mut powers = vec![{
            let mut one = vec![Rational::zero(); n];
            one[0] = Rational::one();
            one
        }];
        for k in 1..=n {
            let next = basis_mul(&powers[k - 1], &theta);
            powers.push(next);
        }
        // Columns theta^0 .. theta^(n-1) in the radical basis.
        let matrix: Vec<Vec<Rational>> = (0..n).map(|r| (0..n).map(|c| powers[c][r].clone()).collect()).collect();
        let q = solve_rational(&matrix, &powers[n]).ok_or_else(|| GroebnerError::Field("not primitive".into()))?;
        let mut modulus: QPoly = q.iter().map(|x| -x.clone()).collect();
        modulus.push(Rational::one());
        let approx: f64 = radicands.iter().map(|&p| (p as f64).sqrt()).sum();
        let conv = |x: f64| Rational::from_float(x).expect("finite");
        let name = radicands.iter().map(|p| format!("sqrt{p}")).join("+");
        let field = Self::new(&name, &modulus, conv(approx - 1e-9), conv(approx + 1e-9))?;
        let roots = (0..m)
            .map(|i| {
                let mut e = vec![Rational::zero(); n];
                e[1 << i] = Rational::one();
                let c = solve_rational(&matrix, &e).expect("invertible");
                field.elem(c)
            })
            .collect();
        Ok((field, roots))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Rational] {
        &self.0.modulus
    }

    pub fn describe_modulus(&self) -> String {
        let terms: Vec<String> = self
            .0
            .modulus
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{k}"),
            })
            .collect();
        terms.join(" + ")
    }

    /// Current isolating interval.
    pub fn interval(&self) -> (Rational, Rational) {
        self.0.interval.lock().expect("interval lock").clone()
    }

    pub fn elem(&self, coeffs: Vec<Rational>) -> FieldElem {
        let c = qpoly::trim(coeffs);
        let c = if c.len() > self.degree() { qpoly::divrem(&c, &self.0.modulus).1 } else { c };
        FieldElem { field: self.clone(), coeffs: c }
    }

    pub fn rational(&self, q: Rational) -> FieldElem {
        self.elem(vec![q])
    }

    pub fn int(&self, n: i64) -> FieldElem {
        self.rational(rat(n, 1))
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(Vec::new())
    }

    pub fn one(&self) -> FieldElem {
        self.int(1)
    }

    pub fn generator(&self) -> FieldElem {
        self.elem(vec![Rational::zero(), Rational::one()])
    }

    /// Bisects the isolating interval until its width is below `width`.
    fn refine_to(&self, width: &Rational) {
        let mut guard = self.0.interval.lock().expect("interval lock");
        while &guard.1 - &guard.0 > *width {
            bisect(&self.0.modulus, &mut guard);
        }
    }
}

fn bisect(modulus: &[Rational], iv: &mut (Rational, Rational)) {
    let mid = (&iv.0 + &iv.1) / rat(2, 1);
    let s_lo = qpoly::eval(modulus, &iv.0).signum();
    let s_mid = qpoly::eval(modulus, &mid).signum();
    if s_mid.is_zero() {
        iv.0 = mid.clone();
        iv.1 = mid;
    } else if s_lo != s_mid {
        iv.1 = mid;
    } else {
        iv.0 = mid;
    }
}

/// Gaussian elimination over `Q`.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Irreducibility over `Q`: any factor of the monic integer transform has
/// integer coefficients and is a product of a subset of the complex roots.
/// Subsets whose product rounds to an integer polynomial are tested by exact
/// division.
fn check_irreducible(monic: &[Rational]) -> Result<(), GroebnerError> {
    let d = monic.len() - 1;
    if d <= 1 {
        return Ok(());
    }
    let (g, _, _) = qpoly::ext_gcd(monic, &qpoly::derivative(monic));
    if qpoly::degree(&g).unwrap_or(0) > 0 {
        return Err(GroebnerError::Field("modulus has a repeated factor".into()));
    }
    // Scale to an integer monic polynomial: q(y) = L^d p(y / L).
    let lcm = monic.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let int_poly: QPoly = monic
        .iter()
        .enumerate()
        .map(|(k, c)| c * Rational::from_integer(lcm.pow((d - k) as u32)))
        .collect();
    let coeffs: Vec<f64> = int_poly.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let roots = complex_roots(&coeffs);
    for k in 1..=d / 2 {
        for subset in (0..d).combinations(k) {
            let mut prod = vec![Complex64::new(1.0, 0.0)];
            for &i in &subset {
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (j, c) in prod.iter().enumerate() {
                    next[j + 1] += c;
                    next[j] -= c * roots[i];
                }
                prod = next;
            }
            let near_integer = prod.iter().all(|c| c.im.abs() < 1e-6 && (c.re - c.re.round()).abs() < 1e-6 * c.re.abs().max(1.0));
            if !near_integer {
                continue;
            }
            let cand: QPoly = prod.iter().map(|c| Rational::from_integer(BigInt::from(c.re.round() as i64))).collect();
            let (_, r) = qpoly::divrem(&int_poly, &cand);
            if qpoly::degree(&r).is_none() {
                return Err(GroebnerError::Field(format!("modulus has a factor of degree {k}")));
            }
        }
    }
    Ok(())
}

/// All complex roots of a monic polynomial (lowest degree first) by the
/// Durand-Kerner iteration.
fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let bound = 1.0 + coeffs[..d].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let mut roots: Vec<Complex64> =
        (0..d).map(|k| Complex64::from_polar(bound.min(4.0) * 0.9, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64)).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let denom = (0..d).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    roots
}

/// Element of a number field in the power basis of its generator.
#[derive(Clone)]
pub struct FieldElem {
    field: NumberField,
    coeffs: QPoly,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for FieldElem {}

impl FieldElem {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<FieldElem, GroebnerError> {
        if self.is_zero() {
            return Err(GroebnerError::DivisionByZero);
        }
        let (g, s, _) = qpoly::ext_gcd(&self.coeffs, &self.field.0.modulus);
        if qpoly::degree(&g) != Some(0) {
            return Err(GroebnerError::DivisionByZero);
        }
        Ok(self.field.elem(s))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, GroebnerError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: u32) -> FieldElem {
        (0..k).fold(self.field.one(), |acc, _| &acc * self)
    }

    /// Exact sign, by refining the isolating interval until interval
    /// evaluation excludes zero.
    pub fn sign(&self) -> Ordering {
        if let Some(q) = self.as_rational() {
            return q.cmp(&Rational::zero());
        }
        let mut guard = self.field.0.interval.lock().expect("interval lock");
        loop {
            let (lo, hi) = interval_eval(&self.coeffs, &guard.0, &guard.1);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bisect(&self.field.0.modulus, &mut guard);
        }
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(q) = self.as_rational() {
            return q.to_f64().unwrap_or(f64::NAN);
        }
        self.field.refine_to(&rat(1, 1 << 62).pow(2));
        let (lo, hi) = self.field.interval();
        let mid = (lo + hi) / rat(2, 1);
        qpoly::eval(&self.coeffs, &mid).to_f64().unwrap_or(f64::NAN)
    }
}

fn interval_eval(p: &[Rational], lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mut acc = (Rational::zero(), Rational::zero());
    for c in p.iter().rev() {
        let cands = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let mn = cands.iter().min().unwrap().clone();
        let mx = cands.iter().max().unwrap().clone();
        acc = (mn + c, mx + c);
    }
    acc
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{k}"),
            })
            .collect();
        if terms.len() == 1 {
            write!(f, "{}", terms[0])
        } else {
            write!(f, "({})", terms.join(" + "))
        }
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem { field: self.field.clone(), coeffs: qpoly::add(&self.coeffs, &rhs.coeffs) }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        FieldElem { field: self.field.clone(), coeffs: qpoly::sub(&self.coeffs, &rhs.coeffs) }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        if self.is_zero() || rhs.is_zero() {
            return self.field.zero();
        }
        self.field.elem(qpoly::mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_arithmetic() {
        let (k, r) = NumberField::multiquadratic(&[5]).unwrap();
        assert_eq!(&r[0] * &r[0], k.int(5));
        let (k, r) = NumberField::multiquadratic(&[5, 6]).unwrap();
        let p = &r[0] * &r[1];
        assert_eq!(&p * &p, k.int(30));
        assert_eq!(k.degree(), 4);
        assert!((p.to_f64() - 30f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn multiquadratic_minimal_polynomial() {
        let (k, _) = NumberField::multiquadratic(&[2, 3, 5]).unwrap();
        let expected: Vec<Rational> = [576, 0, -960, 0, 352, 0, -40, 0, 1].iter().map(|&c| rat(c, 1)).collect();
        assert_eq!(k.modulus(), expected.as_slice());
        assert!(NumberField::multiquadratic(&[2, 8]).is_err());
        assert!(NumberField::multiquadratic(&[6, 10]).is_err());
    }

    #[test]
    fn inverse_and_sign() {
        let (k, r) = NumberField::multiquadratic(&[2, 3, 5]).unwrap();
        assert_eq!(k.degree(), 8);
        let x = &(&r[0] + &r[1]) - &r[2];
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        // sqrt2 + sqrt3 - sqrt5 > 0, sqrt5 - sqrt2 - sqrt3 < 0.
        assert_eq!(x.sign(), Ordering::Greater);
        assert_eq!((-&x).sign(), Ordering::Less);
        let tiny = &(&r[0] * &r[1]) - &k.rational(rat(2449489742783, 1_000_000_000_000));
        assert_eq!(tiny.sign(), Ordering::Greater);
        assert!(k.zero().inv().is_err());
    }

    #[test]
    fn rejects_reducible_and_bad_intervals() {
        // (t^2 - 2)(t^2 - 3)
        assert!(NumberField::from_integers("t", &[6, 0, -5, 0, 1], 1.3, 1.5).is_err());
        // two roots inside
        assert!(NumberField::from_integers("t", &[-2, 0, 1], -2.0, 2.0).is_err());
        assert!(NumberField::from_integers("t", &[-2, 0, 1], 1.0, 2.0).is_ok());
    }

    #[test]
    fn degree_twelve_generator() {
        let k = NumberField::from_integers(
            "t",
            &[64, 0, -384, 0, -208, 0, 320, 0, -52, 0, -24, 0, 1],
            -0.3957,
            -0.3955,
        )
        .unwrap();
        assert!((k.generator().to_f64() + 0.395609).abs() < 1e-6);
    }
}
