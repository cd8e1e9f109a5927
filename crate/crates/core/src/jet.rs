//! Truncated Taylor arithmetic.
//!
//! A [`Jet<N, T>`] carries the first `N` Taylor coefficients of a function
//! of one variable, `c[k] = f^(k)(x0) / k!`. Arithmetic and the elementary
//! functions propagate the coefficients exactly (up to rounding), so every
//! derivative up to order `N - 1` comes out without truncation error.
//!
//! The coefficient type is itself generic over [`Scalar`], which makes jets
//! nest: `Jet<3, Jet<3>>` is a second-order jet in `u` whose coefficients are
//! second-order jets in `v`, i.e. a bivariate expansion that yields every
//! partial up to `X_uu`, `X_uv`, `X_vv`.

use core::fmt::Debug;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Number type accepted by the expression evaluator and the geometry code.
///
/// Implemented for `f64` and for every [`Jet`] over a `Scalar`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Highest total order carried by the type (0 for plain reals).
    ///
    /// If `h` has zero constant part then `h^k == 0` for `k > ORDER`.
    const ORDER: usize;

    fn from_f64(x: f64) -> Self;

    /// The innermost constant part.
    fn re(&self) -> f64;

    fn scale(self, k: f64) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
    /// `self^p` for a real constant exponent.
    fn powf(self, p: f64) -> Self;
    fn powi(self, n: i32) -> Self;
    fn is_finite(&self) -> bool;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn tan(self) -> Self {
        let (s, c) = self.sin_cos();
        s / c
    }

    fn recip(self) -> Self {
        Self::one() / self
    }
}

impl Scalar for f64 {
    const ORDER: usize = 0;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn re(&self) -> f64 {
        *self
    }

    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }

    #[inline]
    fn sin_cos(self) -> (Self, Self) {
        libm::sincos(self)
    }

    #[inline]
    fn ln(self) -> Self {
        libm::log(self)
    }

    #[inline]
    fn exp(self) -> Self {
        libm::exp(self)
    }

    #[inline]
    fn sqrt(self) -> Self {
        libm::sqrt(self)
    }

    #[inline]
    fn powf(self, p: f64) -> Self {
        libm::pow(self, p)
    }

    fn powi(self, n: i32) -> Self {
        // exact repeated squaring, no libm rounding for small integer powers
        let mut base = if n < 0 { 1.0 / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = 1.0;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    #[inline]
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// First `N` Taylor coefficients of a function of one variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const N: usize, T: Scalar = f64> {
    c: [T; N],
}

/// Value and first three derivatives of a scalar function of the curve parameter.
pub type Jet3 = Jet<4, f64>;

const FACTORIAL: [f64; 16] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
];

impl<const N: usize, T: Scalar> Jet<N, T> {
    pub fn from_coeffs(c: [T; N]) -> Self {
        Jet { c }
    }

    /// Builds a jet from derivatives `[f, f', f'', ...]`.
    pub fn from_derivatives(d: [T; N]) -> Self {
        let mut c = d;
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = ck.scale(1.0 / FACTORIAL[k]);
        }
        Jet { c }
    }

    pub fn constant(x: T) -> Self {
        let mut c = [T::zero(); N];
        c[0] = x;
        Jet { c }
    }

    /// The independent variable at `x`: coefficients `[x, 1, 0, ...]`.
    pub fn variable(x: T) -> Self {
        let mut c = [T::zero(); N];
        c[0] = x;
        if N > 1 {
            c[1] = T::one();
        }
        Jet { c }
    }

    pub fn coeffs(&self) -> &[T; N] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> T {
        self.c[k]
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> T {
        self.c[k].scale(FACTORIAL[k])
    }

    /// Jet of the derivative. The top coefficient is unknown and is set to zero,
    /// so the result is only exact through order `N - 2`.
    pub fn differentiate(&self) -> Self {
        let mut c = [T::zero(); N];
        for k in 0..N.saturating_sub(1) {
            c[k] = self.c[k + 1].scale((k + 1) as f64);
        }
        Jet { c }
    }

    fn sin_cos_jet(self) -> (Self, Self) {
        let (s0, c0) = self.c[0].sin_cos();
        let mut s = [T::zero(); N];
        let mut c = [T::zero(); N];
        s[0] = s0;
        c[0] = c0;
        for k in 1..N {
            let mut sk = T::zero();
            let mut ck = T::zero();
            for j in 1..=k {
                let w = self.c[j].scale(j as f64 / k as f64);
                sk += w * c[k - j];
                ck -= w * s[k - j];
            }
            s[k] = sk;
            c[k] = ck;
        }
        (Jet { c: s }, Jet { c })
    }
}

impl Jet3 {
    pub fn new(f: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Jet::from_derivatives([f, d1, d2, d3])
    }

    pub fn f(&self) -> f64 {
        self.c[0]
    }

    pub fn d1(&self) -> f64 {
        self.c[1]
    }

    pub fn d2(&self) -> f64 {
        2.0 * self.c[2]
    }

    pub fn d3(&self) -> f64 {
        6.0 * self.c[3]
    }

    /// `[f, f', f'', f''']`.
    pub fn to_array(&self) -> [f64; 4] {
        [self.f(), self.d1(), self.d2(), self.d3()]
    }
}

impl<const N: usize, T: Scalar> Add for Jet<N, T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl<const N: usize, T: Scalar> Sub for Jet<N, T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.c[k] -= rhs.c[k];
        }
        self
    }
}

impl<const N: usize, T: Scalar> Neg for Jet<N, T> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for k in 0..N {
            self.c[k] = -self.c[k];
        }
        self
    }
}

impl<const N: usize, T: Scalar> Mul for Jet<N, T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = [T::zero(); N];
        for k in 0..N {
            let mut acc = T::zero();
            for j in 0..=k {
                acc += self.c[j] * rhs.c[k - j];
            }
            c[k] = acc;
        }
        Jet { c }
    }
}

impl<const N: usize, T: Scalar> Div for Jet<N, T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let mut c = [T::zero(); N];
        let b0 = rhs.c[0];
        for k in 0..N {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= rhs.c[j] * c[k - j];
            }
            c[k] = acc / b0;
        }
        Jet { c }
    }
}

impl<const N: usize, T: Scalar> AddAssign for Jet<N, T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const N: usize, T: Scalar> SubAssign for Jet<N, T> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const N: usize, T: Scalar> MulAssign for Jet<N, T> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const N: usize, T: Scalar> Scalar for Jet<N, T> {
    const ORDER: usize = N - 1 + T::ORDER;

    fn from_f64(x: f64) -> Self {
        Jet::constant(T::from_f64(x))
    }

    fn re(&self) -> f64 {
        self.c[0].re()
    }

    fn scale(mut self, k: f64) -> Self {
        for ck in self.c.iter_mut() {
            *ck = ck.scale(k);
        }
        self
    }

    fn sin_cos(self) -> (Self, Self) {
        self.sin_cos_jet()
    }

    fn ln(self) -> Self {
        let a0 = self.c[0];
        let mut l = [T::zero(); N];
        l[0] = a0.ln();
        for k in 1..N {
            let mut acc = self.c[k];
            for j in 1..k {
                acc -= (l[j] * self.c[k - j]).scale(j as f64 / k as f64);
            }
            l[k] = acc / a0;
        }
        Jet { c: l }
    }

    fn exp(self) -> Self {
        let mut e = [T::zero(); N];
        e[0] = self.c[0].exp();
        for k in 1..N {
            let mut acc = T::zero();
            for j in 1..=k {
                acc += (self.c[j] * e[k - j]).scale(j as f64 / k as f64);
            }
            e[k] = acc;
        }
        Jet { c: e }
    }

    fn sqrt(self) -> Self {
        let mut q = [T::zero(); N];
        q[0] = self.c[0].sqrt();
        let two_q0 = q[0].scale(2.0);
        for k in 1..N {
            let mut acc = self.c[k];
            for j in 1..k {
                acc -= q[j] * q[k - j];
            }
            q[k] = acc / two_q0;
        }
        Jet { c: q }
    }

    fn powf(self, p: f64) -> Self {
        let a0 = self.c[0];
        let mut b = [T::zero(); N];
        b[0] = a0.powf(p);
        for k in 1..N {
            let mut acc = T::zero();
            for j in 1..=k {
                let w = (p * j as f64 - (k - j) as f64) / k as f64;
                acc += (self.c[j] * b[k - j]).scale(w);
            }
            b[k] = acc / a0;
        }
        Jet { c: b }
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    fn is_finite(&self) -> bool {
        self.c.iter().all(Scalar::is_finite)
    }
}

/// Evaluates `sum_k coeffs[k] * (s - s.re())^k`.
///
/// Used to push a function known only through its Taylor coefficients at a
/// real point through an arbitrary (possibly nested) jet argument. Terms past
/// `S::ORDER` vanish and are skipped.
pub fn compose_taylor<S: Scalar>(coeffs: &[f64], s: S) -> S {
    let h = s - S::from_f64(s.re());
    let top = coeffs.len().min(S::ORDER + 1);
    if top == 0 {
        return S::zero();
    }
    let mut acc = S::from_f64(coeffs[top - 1]);
    for k in (0..top - 1).rev() {
        acc = acc * h + S::from_f64(coeffs[k]);
    }
    acc
}
