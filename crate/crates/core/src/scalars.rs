//! Exact arithmetic in the cyclotomic field generated by a primitive 4r-th
//! root of unity `A`, extended by a formal positive constant `c` with
//! `c^2 = 1/D`, `D = sum_k d_k^2`.
//!
//! Elements are stored as a polynomial in `A` of degree `< phi(4r)` with
//! integer numerators over one common positive denominator, fully reduced
//! modulo the 4r-th cyclotomic polynomial. Since every primitive 4r-th root
//! has the same minimal polynomial, exact arithmetic does not depend on the
//! root selector `s`; only [`Scalar::embed`] does.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Level data: `A = exp(2 pi i s / 4r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumParams {
    pub r: u32,
    pub s: u32,
}

impl QuantumParams {
    pub fn new(r: u32, s: u32) -> Result<Self> {
        if r < 3 {
            return Err(Error::InvalidParams(format!("r = {r} must be at least 3")));
        }
        let order = 4 * r;
        if s == 0 || s >= order {
            return Err(Error::InvalidParams(format!("s = {s} must lie in 1..{order}")));
        }
        if s.gcd(&order) != 1 {
            return Err(Error::InvalidParams(format!(
                "s = {s} is not coprime to 4r = {order}; A would not be primitive"
            )));
        }
        Ok(QuantumParams { r, s })
    }

    /// Largest admissible label, `r - 2`.
    pub fn max_label(&self) -> u32 {
        self.r - 2
    }

    pub fn ring(&self) -> Arc<Ring> {
        static RINGS: OnceLock<Mutex<HashMap<QuantumParams, Arc<Ring>>>> = OnceLock::new();
        let rings = RINGS.get_or_init(Default::default);
        let mut guard = rings.lock().unwrap();
        guard.entry(*self).or_insert_with(|| Arc::new(Ring::build(*self))).clone()
    }
}

pub fn make_params(r: u32, s: u32) -> Result<QuantumParams> {
    QuantumParams::new(r, s)
}

/// Shared context for all scalars at one level.
pub struct Ring {
    params: QuantumParams,
    order: usize,
    phi: usize,
    /// `A^k` reduced, for `0 <= k < 4r`.
    powers: Vec<Vec<i64>>,
    /// `1/D` as (numerators, denominator).
    inv_total: (Vec<BigInt>, BigInt),
    /// Embedded powers of `A`.
    roots: Vec<Complex64>,
    c_numeric: f64,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring(r={}, s={})", self.params.r, self.params.s)
    }
}

fn cyclotomic_poly(n: usize) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd] / lead;
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

impl Ring {
    fn build(params: QuantumParams) -> Ring {
        let order = 4 * params.r as usize;
        let cyc = cyclotomic_poly(order);
        let phi = cyc.len() - 1;
        let mut powers = Vec::with_capacity(order);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by A and reduce with the monic cyclotomic polynomial
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1] - top * cyc[i];
            }
            cur[0] = -top * cyc[0];
        }
        let theta = 2.0 * std::f64::consts::PI * params.s as f64 / order as f64;
        let roots = (0..order)
            .map(|k| Complex64::from_polar(1.0, theta * k as f64))
            .collect();
        let mut ring = Ring {
            params,
            order,
            phi,
            powers,
            inv_total: (vec![BigInt::zero(); phi], BigInt::one()),
            roots,
            c_numeric: 0.0,
        };
        let ring_arc = Arc::new(ring.clone_shallow());
        let total = total_quantum_dimension(&ring_arc);
        let inv = total.inv().expect("D is a nonzero field element");
        ring.inv_total = (inv.num.clone(), inv.den.clone());
        ring.c_numeric = 1.0 / total.embed().re.sqrt();
        ring
    }

    fn clone_shallow(&self) -> Ring {
        Ring {
            params: self.params,
            order: self.order,
            phi: self.phi,
            powers: self.powers.clone(),
            inv_total: self.inv_total.clone(),
            roots: self.roots.clone(),
            c_numeric: self.c_numeric,
        }
    }

    pub fn params(&self) -> QuantumParams {
        self.params
    }

    pub fn r(&self) -> u32 {
        self.params.r
    }

    /// Degree of the field, `phi(4r)`.
    pub fn degree(&self) -> usize {
        self.phi
    }

    fn reduce(&self, conv: &[BigInt]) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = conv[..self.phi.min(conv.len())].to_vec();
        out.resize(self.phi, BigInt::zero());
        for (k, c) in conv.iter().enumerate().skip(self.phi) {
            if c.is_zero() {
                continue;
            }
            let p = &self.powers[k % self.order];
            for (o, &pi) in out.iter_mut().zip(p) {
                if pi != 0 {
                    *o += c * pi;
                }
            }
        }
        out
    }
}

fn total_quantum_dimension(ring: &Arc<Ring>) -> Scalar {
    let d = Scalar::d(ring);
    let mut prev = Scalar::zero(ring);
    let mut cur = Scalar::one(ring);
    let mut total = Scalar::zero(ring);
    for _ in 0..=ring.params.max_label() {
        total += &cur * &cur;
        let next = &(&d * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    total
}

/// Exact element of the c-extended cyclotomic ring.
#[derive(Clone)]
pub struct Scalar {
    ring: Arc<Ring>,
    num: Vec<BigInt>,
    den: BigInt,
    cpow: u8,
}

impl Scalar {
    fn raw(ring: &Arc<Ring>, num: Vec<BigInt>, den: BigInt, cpow: u8) -> Scalar {
        let mut s = Scalar { ring: ring.clone(), num, den, cpow };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for x in self.num.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        if self.den.is_one() {
            if self.num.iter().all(|x| x.is_zero()) {
                self.cpow = 0;
            }
            return;
        }
        let mut g = self.den.clone();
        for x in &self.num {
            if g.is_one() {
                break;
            }
            if !x.is_zero() {
                g = g.gcd(x);
            }
        }
        if self.num.iter().all(|x| x.is_zero()) {
            self.den = BigInt::one();
            self.cpow = 0;
            return;
        }
        if !g.is_one() {
            self.den /= &g;
            for x in self.num.iter_mut() {
                *x /= &g;
            }
        }
    }

    pub fn zero(ring: &Arc<Ring>) -> Scalar {
        Scalar { ring: ring.clone(), num: vec![BigInt::zero(); ring.phi], den: BigInt::one(), cpow: 0 }
    }

    pub fn one(ring: &Arc<Ring>) -> Scalar {
        Scalar::from_int(ring, 1)
    }

    pub fn from_int(ring: &Arc<Ring>, n: i64) -> Scalar {
        let mut num = vec![BigInt::zero(); ring.phi];
        num[0] = BigInt::from(n);
        Scalar::raw(ring, num, BigInt::one(), 0)
    }

    pub fn from_rational(ring: &Arc<Ring>, n: i64, d: i64) -> Scalar {
        let mut num = vec![BigInt::zero(); ring.phi];
        num[0] = BigInt::from(n);
        Scalar::raw(ring, num, BigInt::from(d), 0)
    }

    /// `A^k` for any integer `k`.
    pub fn a_pow(ring: &Arc<Ring>, k: i64) -> Scalar {
        let idx = k.rem_euclid(ring.order as i64) as usize;
        let num = ring.powers[idx].iter().map(|&x| BigInt::from(x)).collect();
        Scalar { ring: ring.clone(), num, den: BigInt::one(), cpow: 0 }
    }

    /// The loop value `d = -A^2 - A^-2`.
    pub fn d(ring: &Arc<Ring>) -> Scalar {
        -(Scalar::a_pow(ring, 2) + Scalar::a_pow(ring, -2))
    }

    /// The formal normalization constant `c` (`c > 0`, `c^2 = 1/D`).
    pub fn c(ring: &Arc<Ring>) -> Scalar {
        let mut s = Scalar::one(ring);
        s.cpow = 1;
        s
    }

    /// `D = sum_{k=0}^{r-2} d_k^2`.
    pub fn total_dimension(ring: &Arc<Ring>) -> Scalar {
        total_quantum_dimension(ring)
    }

    /// Quantum integer `[n] = (A^{2n} - A^{-2n}) / (A^2 - A^{-2})`, computed as
    /// the finite geometric sum `sum_{j=0}^{n-1} A^{2n-2-4j}`.
    pub fn quantum_int(ring: &Arc<Ring>, n: i64) -> Scalar {
        if n == 0 {
            return Scalar::zero(ring);
        }
        if n < 0 {
            return -Scalar::quantum_int(ring, -n);
        }
        let mut acc = vec![0i64; ring.phi];
        for j in 0..n {
            let e = (2 * n - 2 - 4 * j).rem_euclid(ring.order as i64) as usize;
            for (a, p) in acc.iter_mut().zip(&ring.powers[e]) {
                *a += p;
            }
        }
        Scalar::raw(ring, acc.into_iter().map(BigInt::from).collect(), BigInt::one(), 0)
    }

    /// `[n]! = [1][2]...[n]`.
    pub fn quantum_factorial(ring: &Arc<Ring>, n: i64) -> Scalar {
        let mut acc = Scalar::one(ring);
        for k in 1..=n {
            acc *= &Scalar::quantum_int(ring, k);
        }
        acc
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn cpow(&self) -> u8 {
        self.cpow
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.cpow == 0
            && self.den.is_one()
            && self.num[0].is_one()
            && self.num[1..].iter().all(|x| x.is_zero())
    }

    /// Rational coefficients of `1, A, ..., A^{phi-1}`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|x| BigRational::new(x.clone(), self.den.clone()))
            .collect()
    }

    pub fn from_coeffs(ring: &Arc<Ring>, coeffs: &[BigRational], cpow: u8) -> Result<Scalar> {
        if coeffs.len() != ring.phi {
            return Err(Error::Parse(format!(
                "expected {} coefficients, got {}",
                ring.phi,
                coeffs.len()
            )));
        }
        if cpow > 1 {
            return Err(Error::Parse("cpow must be 0 or 1".into()));
        }
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Scalar::raw(ring, num, den, cpow))
    }

    /// Multiply by `A^k` (cheap: no denominators change).
    pub fn mul_a_pow(&self, k: i64) -> Scalar {
        let shift = k.rem_euclid(self.ring.order as i64) as usize;
        if shift == 0 {
            return self.clone();
        }
        let phi = self.ring.phi;
        let mut conv = vec![BigInt::zero(); phi + shift];
        for (i, x) in self.num.iter().enumerate() {
            conv[i + shift] = x.clone();
        }
        let num = self.ring.reduce(&conv);
        Scalar { ring: self.ring.clone(), num, den: self.den.clone(), cpow: self.cpow }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one(&self.ring);
        for _ in 0..e {
            acc *= self;
        }
        acc
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let phi = self.ring.phi;
        // Columns: coefficients of self * A^j.
        let base = Scalar { ring: self.ring.clone(), num: self.num.clone(), den: BigInt::one(), cpow: 0 };
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = base.mul_a_pow(j as i64);
            for i in 0..phi {
                m[i][j] = BigRational::from_integer(col.num[i].clone());
            }
        }
        m[0][phi] = BigRational::one();
        let sol = solve_dense(m).ok_or(Error::NotInvertible)?;
        // self = base / den, so self^{-1} = den * base^{-1}
        let den_r = BigRational::from_integer(self.den.clone());
        let coeffs: Vec<BigRational> = sol.into_iter().map(|x| x * &den_r).collect();
        let mut out = Scalar::from_coeffs(&self.ring, &coeffs, 0)?;
        if self.cpow == 1 {
            // (x c)^{-1} = x^{-1} c^{-1} = x^{-1} c D
            out = &out * &(Scalar::total_dimension(&self.ring));
            out.cpow = 1;
        }
        Ok(out)
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    /// Complex value under `A -> exp(2 pi i s/4r)` and `c -> +sqrt(1/D)`.
    pub fn embed(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        for (k, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let v = if den.is_finite() && x.abs().bits() < 1000 {
                x.to_f64().unwrap() / den
            } else {
                BigRational::new(x.clone(), self.den.clone()).to_f64().unwrap_or(0.0)
            };
            acc += self.ring.roots[k] * v;
        }
        if self.cpow == 1 {
            acc *= self.ring.c_numeric;
        }
        acc
    }

    fn same_ring(&self, other: &Scalar) {
        debug_assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring.params == other.ring.params,
            "scalars from different rings"
        );
    }
}

pub fn embed_numeric(x: &Scalar) -> Complex64 {
    x.embed()
}

pub fn is_zero(x: &Scalar) -> bool {
    x.is_zero()
}

/// Gaussian elimination on an augmented matrix; returns the solution if the
/// system is nonsingular.
fn solve_dense(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        for row in 0..n {
            if row != col && !m[row][col].is_zero() {
                let f = m[row][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[row].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.same_ring(other);
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.cpow == other.cpow && self.den == other.den && self.num == other.num
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.cpow.hash(state);
        self.den.hash(state);
        self.num.hash(state);
    }
}

fn add_raw(x: &Scalar, y: &Scalar, negate: bool) -> Scalar {
    x.same_ring(y);
    if y.is_zero() {
        return x.clone();
    }
    if x.is_zero() {
        return if negate { -y.clone() } else { y.clone() };
    }
    assert_eq!(
        x.cpow, y.cpow,
        "adding scalars of different c-degree is not supported"
    );
    let num: Vec<BigInt> = if x.den == y.den {
        x.num
            .iter()
            .zip(&y.num)
            .map(|(a, b)| if negate { a - b } else { a + b })
            .collect()
    } else {
        x.num
            .iter()
            .zip(&y.num)
            .map(|(a, b)| {
                let l = a * &y.den;
                let r = b * &x.den;
                if negate {
                    l - r
                } else {
                    l + r
                }
            })
            .collect()
    };
    let den = if x.den == y.den { x.den.clone() } else { &x.den * &y.den };
    Scalar::raw(&x.ring, num, den, x.cpow)
}

fn mul_raw(x: &Scalar, y: &Scalar) -> Scalar {
    x.same_ring(y);
    let ring = &x.ring;
    if x.is_zero() || y.is_zero() {
        return Scalar::zero(ring);
    }
    let phi = ring.phi;
    let mut conv = vec![BigInt::zero(); 2 * phi - 1];
    for (i, a) in x.num.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.num.iter().enumerate() {
            if !b.is_zero() {
                conv[i + j] += a * b;
            }
        }
    }
    let num = ring.reduce(&conv);
    let den = &x.den * &y.den;
    let cpow = x.cpow + y.cpow;
    if cpow == 2 {
        let prod = Scalar::raw(ring, num, den, 0);
        let inv = Scalar { ring: ring.clone(), num: ring.inv_total.0.clone(), den: ring.inv_total.1.clone(), cpow: 0 };
        mul_raw(&prod, &inv)
    } else {
        Scalar::raw(ring, num, den, cpow)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        add_raw(self, rhs, false)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        add_raw(self, rhs, true)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        mul_raw(self, rhs)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        add_raw(&self, &rhs, false)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        add_raw(&self, &rhs, true)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        mul_raw(&self, &rhs)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for x in self.num.iter_mut() {
            *x = -std::mem::take(x);
        }
        self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = add_raw(self, rhs, false);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = add_raw(self, rhs, true);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = mul_raw(self, rhs);
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = add_raw(self, &rhs, false);
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = add_raw(self, &rhs, true);
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = mul_raw(self, &rhs);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "A".to_string(),
                _ => format!("A^{k}"),
            };
            let t = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if *c == -BigRational::one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            terms.push(t);
        }
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ").replace("+ -", "- ") };
        if self.cpow == 1 {
            write!(f, "c*({body})")
        } else {
            write!(f, "{body}")
        }
    }
}

/// Wire form: `{"cpow": 0|1, "coeffs": ["p/q", ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub cpow: u8,
    pub coeffs: Vec<String>,
    /// Floating value `[re, im]` with `c` taken as its positive real value;
    /// ignored on input.
    #[serde(default)]
    pub approx: [f64; 2],
}

impl Scalar {
    pub fn to_json(&self) -> ScalarJson {
        let z = self.embed();
        ScalarJson { cpow: self.cpow, coeffs: self.coeffs().iter().map(|c| c.to_string()).collect(), approx: [z.re, z.im] }
    }

    pub fn from_json(ring: &Arc<Ring>, j: &ScalarJson) -> Result<Scalar> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(|e| Error::Parse(format!("{s}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Scalar::from_coeffs(ring, &coeffs, j.cpow)
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}
