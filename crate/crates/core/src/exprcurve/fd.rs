//! Central finite differences with Richardson extrapolation.
//!
//! This is the independent oracle for the jet evaluator: it only ever calls
//! the plain `f64` evaluation path. Each base stencil has truncation error
//! `O(s^2)`; one extrapolation level over steps `s` and `ratio * s` lifts that
//! to `O(s^4)`. The third-derivative stencil reaches `+-2s`, so with the
//! default ratio 1.5 every sample lies in `[u - 3h, u + 3h]`.

use core::ops::{Add, Sub};

use super::expr::ExprTree;
use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdConfig {
    pub h: f64,
    /// Step growth between extrapolation levels.
    pub ratio: f64,
    /// Number of Richardson levels (0 = raw central differences).
    pub levels: usize,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { h: 1e-3, ratio: 1.5, levels: 1 }
    }
}

impl FdConfig {
    pub fn with_step(h: f64) -> Self {
        FdConfig { h, ..Self::default() }
    }

    /// Largest offset from the expansion point that any stencil touches.
    pub fn reach(&self) -> f64 {
        2.0 * self.h * libm::pow(self.ratio, self.levels as f64)
    }
}

/// Values the stencils can combine.
pub trait FdValue: Copy + Add<Output = Self> + Sub<Output = Self> {
    fn scaled(self, k: f64) -> Self;
}

impl FdValue for f64 {
    fn scaled(self, k: f64) -> Self {
        self * k
    }
}

impl FdValue for Vec3<f64> {
    fn scaled(self, k: f64) -> Self {
        self.scale(k)
    }
}

fn stencils<V: FdValue>(f: &impl Fn(f64) -> Result<V>, u: f64, s: f64) -> Result<[V; 3]> {
    let f0 = f(u)?;
    let fp1 = f(u + s)?;
    let fm1 = f(u - s)?;
    let fp2 = f(u + 2.0 * s)?;
    let fm2 = f(u - 2.0 * s)?;
    let d1 = (fp1 - fm1).scaled(0.5 / s);
    let d2 = (fp1 - f0 - f0 + fm1).scaled(1.0 / (s * s));
    let d3 = (fp2 - fp1 - fp1 + fm1 + fm1 - fm2).scaled(0.5 / (s * s * s));
    Ok([d1, d2, d3])
}

/// Value and first three derivatives of `f` at `u`.
pub fn fd_derivs<V: FdValue>(f: impl Fn(f64) -> Result<V>, u: f64, cfg: &FdConfig) -> Result<[V; 4]> {
    if !(cfg.h > 0.0) || !(cfg.ratio > 1.0) {
        return Err(Error::InvalidInput("finite-difference step must be positive and ratio > 1".into()));
    }
    let value = f(u)?;
    let levels = cfg.levels.min(8);
    // table[i] holds the estimates at step h * ratio^i, refined in place
    let mut table: [[V; 3]; 9] = [[value; 3]; 9];
    let mut s = cfg.h;
    for row in table.iter_mut().take(levels + 1) {
        *row = stencils(&f, u, s)?;
        s *= cfg.ratio;
    }
    for j in 1..=levels {
        let t = libm::pow(cfg.ratio, 2.0 * j as f64);
        for i in 0..=(levels - j) {
            for k in 0..3 {
                table[i][k] = (table[i][k].scaled(t) - table[i + 1][k]).scaled(1.0 / (t - 1.0));
            }
        }
    }
    Ok([value, table[0][0], table[0][1], table[0][2]])
}

/// Finite-difference counterpart of [`eval_jet3`](super::eval_jet3).
pub fn fd_jet3(tree: &ExprTree, u: f64, h: f64) -> Result<Jet3> {
    fd_jet3_with(tree, u, &FdConfig::with_step(h))
}

pub fn fd_jet3_with(tree: &ExprTree, u: f64, cfg: &FdConfig) -> Result<Jet3> {
    let d = fd_derivs(|x| tree.eval1(x), u, cfg)?;
    Ok(Jet3::new(d[0], d[1], d[2], d[3]))
}
