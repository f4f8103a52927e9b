//! Power series in one variable truncated at a fixed order.

use std::ops::{Add, Mul, Neg, Sub};

use super::coefficient::Coefficient;
use crate::error::{Error, Result};

/// `c_0 + c_1 t + ... + c_N t^N`.  Every operation drops terms past `t^N`.
#[derive(Debug, Clone)]
pub struct TruncatedSeries<C: Coefficient> {
    coeffs: Vec<C>,
    ctx: C::Ctx,
}

/// Equality compares coefficients only.
impl<C: Coefficient> PartialEq for TruncatedSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Analytic {
    Sqrt,
    ReciprocalSqrt,
    /// `L(w) = 2 sum w^k / (2k+1)`.
    OddLogKernel,
    /// `L'(w)`.
    OddLogKernelDerivative,
}

impl<C: Coefficient> TruncatedSeries<C> {
    /// Pads with zeros or truncates so that there are `order + 1` coefficients.
    pub fn new(mut coeffs: Vec<C>, order: usize, ctx: &C::Ctx) -> Self {
        coeffs.resize(order + 1, C::zero(ctx));
        Self { coeffs, ctx: ctx.clone() }
    }

    pub fn constant(c: C, order: usize, ctx: &C::Ctx) -> Self {
        Self::new(vec![c], order, ctx)
    }

    pub fn zero(order: usize, ctx: &C::Ctx) -> Self {
        Self::new(Vec::new(), order, ctx)
    }

    /// The series `t` itself (zero when `order == 0`).
    pub fn variable(order: usize, ctx: &C::Ctx) -> Self {
        Self::new(vec![C::zero(ctx), C::one(ctx)], order, ctx)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn coefficients(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, c: C) {
        self.coeffs[n] = c;
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order, &self.ctx)
    }

    /// Horner evaluation at a scalar `t`.
    pub fn evaluate(&self, t: &C) -> C {
        let mut acc = C::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, k: &C) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * k.clone()).collect();
        Self { coeffs, ctx: self.ctx.clone() }
    }

    pub fn add_constant(&self, k: &C) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + k.clone();
        out
    }

    fn zip(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|i| f(&self.coeffs[i], &other.coeffs[i])).collect();
        Self { coeffs, ctx: self.ctx.clone() }
    }

    fn cauchy(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = C::zero(&self.ctx);
            for i in 0..=k {
                let (a, b) = (&self.coeffs[i], &other.coeffs[k - i]);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
            coeffs.push(acc);
        }
        Self { coeffs, ctx: self.ctx.clone() }
    }

    pub fn recip(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::domain("division by a series with zero constant term"));
        }
        let n = self.order();
        let mut b: Vec<C> = Vec::with_capacity(n + 1);
        b.push(C::one(&self.ctx) / a0.clone());
        for k in 1..=n {
            let mut acc = C::zero(&self.ctx);
            for i in 1..=k {
                acc = acc + self.coeffs[i].clone() * b[k - i].clone();
            }
            b.push(-acc / a0.clone());
        }
        Ok(Self { coeffs: b, ctx: self.ctx.clone() })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.cauchy(&other.recip()?))
    }

    pub fn sqrt(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::domain("square root of a series with zero constant term"));
        }
        let b0 = a0.sqrt()?;
        let two_b0 = b0.clone() + b0.clone();
        let n = self.order();
        let mut b = Vec::with_capacity(n + 1);
        b.push(b0);
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc = acc - b[i].clone() * b[k - i].clone();
            }
            b.push(acc / two_b0.clone());
        }
        Ok(Self { coeffs: b, ctx: self.ctx.clone() })
    }

    /// `f(a0 + d) = sum c_k d^k` with `d = self - a0`, summed by Horner.
    fn compose_taylor(&self, taylor: &[C]) -> Self {
        let mut delta = self.clone();
        delta.coeffs[0] = C::zero(&self.ctx);
        let mut acc = Self::zero(self.order(), &self.ctx);
        for c in taylor.iter().rev() {
            acc = acc.cauchy(&delta).add_constant(c);
        }
        acc
    }

    pub fn compose(&self, func: Analytic) -> Result<Self> {
        match func {
            Analytic::Sqrt => self.sqrt(),
            Analytic::ReciprocalSqrt => self.sqrt()?.recip(),
            Analytic::OddLogKernel => {
                // 2N + 2 kernel terms; beyond t^N they cannot contribute.
                let terms = 2 * self.order() + 2;
                let c = odd_log_kernel_taylor(&self.coeffs[0], terms, &self.ctx)?;
                Ok(self.compose_taylor(&c))
            }
            Analytic::OddLogKernelDerivative => {
                let terms = 2 * self.order() + 3;
                let c = odd_log_kernel_taylor(&self.coeffs[0], terms, &self.ctx)?;
                let d: Vec<C> = (1..c.len())
                    .map(|k| C::from_ratio(k as i64, 1, &self.ctx) * c[k].clone())
                    .collect();
                Ok(self.compose_taylor(&d))
            }
        }
    }
}

/// Taylor coefficients of `L` about `w0`, `terms` of them.
///
/// At `w0 = 0` these are `2/(2k+1)`.  Elsewhere they follow from
/// `2w(1-w)L' + (1-w)L = 2`, starting from the closed-form value.
pub fn odd_log_kernel_taylor<C: Coefficient>(w0: &C, terms: usize, ctx: &C::Ctx) -> Result<Vec<C>> {
    let terms = terms.max(1);
    if w0.is_zero() {
        return Ok((0..terms).map(|k| C::from_ratio(2, 2 * k as i64 + 1, ctx)).collect());
    }
    let c0 = C::odd_log_kernel(w0, ctx)?;
    let one = C::one(ctx);
    let two = C::from_ratio(2, 1, ctx);
    let int = |k: i64| C::from_ratio(k, 1, ctx);
    let lead = two.clone() * w0.clone() * (one.clone() - w0.clone());
    let slope = one.clone() - two.clone() * w0.clone();
    let mut c = vec![c0];
    for m in 0..terms - 1 {
        let mi = m as i64;
        let mut num = -((two.clone() * slope.clone() * int(mi) + one.clone() - w0.clone()) * c[m].clone());
        if m == 0 {
            num = num + two.clone();
        } else {
            num = num + int(2 * mi - 1) * c[m - 1].clone();
        }
        c.push(num / (lead.clone() * int(mi + 1)));
    }
    Ok(c)
}

/// Checked arithmetic: orders must agree.
pub fn series_arithmetic<C: Coefficient>(
    a: &TruncatedSeries<C>,
    b: &TruncatedSeries<C>,
    op: SeriesOp,
) -> Result<TruncatedSeries<C>> {
    if a.order() != b.order() {
        return Err(Error::InvalidInput(format!(
            "series orders differ ({} vs {})",
            a.order(),
            b.order()
        )));
    }
    match op {
        SeriesOp::Add => Ok(a + b),
        SeriesOp::Sub => Ok(a - b),
        SeriesOp::Mul => Ok(a * b),
        SeriesOp::Div => a.try_div(b),
    }
}

pub fn series_compose_analytic<C: Coefficient>(
    a: &TruncatedSeries<C>,
    func: Analytic,
) -> Result<TruncatedSeries<C>> {
    a.compose(func)
}

// Operators on references truncate to the smaller of the two orders.

impl<C: Coefficient> Add for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn add(self, rhs: Self) -> TruncatedSeries<C> {
        self.zip(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<C: Coefficient> Sub for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn sub(self, rhs: Self) -> TruncatedSeries<C> {
        self.zip(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<C: Coefficient> Mul for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn mul(self, rhs: Self) -> TruncatedSeries<C> {
        self.cauchy(rhs)
    }
}

impl<C: Coefficient> Neg for &TruncatedSeries<C> {
    type Output = TruncatedSeries<C>;
    fn neg(self) -> TruncatedSeries<C> {
        let coeffs = self.coeffs.iter().map(|c| -c.clone()).collect();
        TruncatedSeries { coeffs, ctx: self.ctx.clone() }
    }
}
