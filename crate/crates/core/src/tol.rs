use crate::exprcurve::FdConfig;

/// Every threshold used by the library, in one place.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Curvature below which the principal normal is undefined.
    pub eps_kappa: f64,
    /// `|b|` below which the Darboux focal point is at infinity.
    pub eps_b: f64,
    /// `|cos v|` below which the Frenet focal point is at infinity.
    pub eps_v: f64,
    /// Regularity threshold on `W = |X_u x X_v|`.
    pub eps_reg: f64,
    pub unit_speed: f64,
    /// Bound on `|z|` and `|tau|` for Frenet-mode spines.
    pub planar: f64,
    /// Moving-frame ODE residual bound (jet derivatives).
    pub frame_residual: f64,
    /// Moving-frame ODE residual bound (finite differences).
    pub frame_residual_fd: f64,
    /// `‖X_uv - X_vu‖` bound.
    pub mixed_partial: f64,
    /// Set equality of principal curvatures, relative to `max(|a|, |b|, 1/r)`.
    pub principal_rel: f64,
    /// Closed form vs. numeric path: relative part.
    pub closed_form_rel: f64,
    /// Closed form vs. numeric path: absolute floor.
    pub closed_form_abs: f64,
    /// `max |K*|` along the jet path.
    pub flat_jet: f64,
    /// `max |K*|` along the finite-difference path.
    pub flat_fd: f64,
    /// `|<X*_vv, N*>|` bound for asymptotic v-curves.
    pub asymptotic: f64,
    /// Lower bound on `|l*|` (u-curves never asymptotic).
    pub min_l_star: f64,
    pub spine_recovery: f64,
    /// Relative to `max(1, |X*|)`.
    pub focal_offset: f64,
    pub fd: FdConfig,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_kappa: 1e-8,
            eps_b: 1e-8,
            eps_v: 1e-8,
            eps_reg: 1e-10,
            unit_speed: 1e-6,
            planar: 1e-9,
            frame_residual: 1e-6,
            frame_residual_fd: 1e-4,
            mixed_partial: 1e-8,
            principal_rel: 1e-8,
            closed_form_rel: 1e-6,
            closed_form_abs: 1e-8,
            flat_jet: 1e-8,
            flat_fd: 1e-4,
            asymptotic: 1e-8,
            min_l_star: 1e-10,
            spine_recovery: 1e-9,
            focal_offset: 1e-9,
            fd: FdConfig::default(),
        }
    }
}

macro_rules! keyed {
    ($($name:ident),* $(,)?) => {
        /// Names accepted by [`Tolerances::get`] and [`Tolerances::set`], in report order.
        pub const KEYS: &'static [&'static str] = &[$(stringify!($name),)* "fd_h", "fd_ratio", "fd_levels"];

        pub fn get(&self, key: &str) -> Option<f64> {
            match key {
                $(stringify!($name) => Some(self.$name),)*
                "fd_h" => Some(self.fd.h),
                "fd_ratio" => Some(self.fd.ratio),
                "fd_levels" => Some(self.fd.levels as f64),
                _ => None,
            }
        }

        /// Sets one threshold by name. Values must be finite and non-negative;
        /// `fd_h` must be positive, `fd_ratio` above 1 and `fd_levels` a small integer.
        pub fn set(&mut self, key: &str, value: f64) -> Result<(), &'static str> {
            if !value.is_finite() || value < 0.0 {
                return Err("must be a finite, non-negative number");
            }
            match key {
                $(stringify!($name) => self.$name = value,)*
                "fd_h" if value > 0.0 => self.fd.h = value,
                "fd_ratio" if value > 1.0 => self.fd.ratio = value,
                "fd_levels" if libm::trunc(value) == value && value <= 8.0 => self.fd.levels = value as usize,
                "fd_h" => return Err("must be positive"),
                "fd_ratio" => return Err("must exceed 1"),
                "fd_levels" => return Err("must be an integer in 0..=8"),
                _ => return Err("unknown tolerance"),
            }
            Ok(())
        }
    };
}

impl Tolerances {
    keyed!(
        eps_kappa,
        eps_b,
        eps_v,
        eps_reg,
        unit_speed,
        planar,
        frame_residual,
        frame_residual_fd,
        mixed_partial,
        principal_rel,
        closed_form_rel,
        closed_form_abs,
        flat_jet,
        flat_fd,
        asymptotic,
        min_l_star,
        spine_recovery,
        focal_offset,
    );
}

/// `|a - b| <= max(rel * max(|a|, |b|), abs)`.
pub fn rel_close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    rel_dev(a, b, abs) <= rel || (a - b).abs() <= abs
}

/// Deviation relative to `max(|a|, |b|, floor)`.
pub fn rel_dev(a: f64, b: f64, floor: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        return 0.0;
    }
    d / a.abs().max(b.abs()).max(floor)
}
