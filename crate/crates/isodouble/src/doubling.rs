//! Closed-form curvature data of an isoparametric family of hypersurfaces
//! in the round sphere, and the scalar-curvature certificate for the
//! metric obtained by doubling the region on one side of a level set.
//!
//! A family is determined by the number `g` of distinct principal
//! curvatures and the alternating multiplicities `(m_plus, m_minus)`. The
//! normalized level function `f` satisfies `|∇f|² = g²(1 - f²)` and
//! `Δf = c - g(g + n - 1) f` on the unit sphere `S^n`, so every curvature
//! quantity of the level hypersurfaces is an explicit function of `f`.
//! The double is described by a bending curve in the `(r, t)` half-plane
//! (see [`crate::curve`]); its scalar curvature at a point with curve data
//! `(theta, k)` over the level `f(r)` is
//!
//! ```text
//! R = n(n-1) cos²θ + [(n-g-1)(n-1) + a(f)] sin²θ + 2 k H(f) sinθ
//! ```
//!
//! where `H` is the mean curvature of the level hypersurface and `a` is
//! its scalar-curvature defect against the comparison value
//! `(n-1)(n-g-1)`.

use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

use crate::curve::{
    assemble_curve, bump_segment, bump_width, identity_curve, straight_segment, BendingCurve,
    CurveError, CurveSegment,
};

#[derive(Debug, Error)]
pub enum DoublingError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("g = {0} must be one of 1, 2, 3, 4, 6")]
    UnsupportedG(u32),
    #[error("g = {g} requires equal multiplicities; got ({m_plus}, {m_minus})")]
    UnequalMultiplicities { g: u32, m_plus: u32, m_minus: u32 },
    #[error("radius {r} is too close to a focal radius; the regular band around 0 is ({lo}, {hi}) and focal radii repeat every {spacing}")]
    FocalRadius {
        r: f64,
        lo: f64,
        hi: f64,
        spacing: f64,
    },
    #[error("level {0} is focal; need |f| < 1")]
    FocalLevel(f64),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("certificate precondition violated: {0}")]
    Precondition(String),
    #[error("curve planning failed: {0}")]
    Planner(String),
}

/// Proximity cutoff to the focal levels `f = ±1`.
const FOCAL_EPS: f64 = 1e-13;

/// An isoparametric family on `S^n`, `n = g (m_plus + m_minus) / 2 + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct IsoparametricFamily {
    pub g: u32,
    pub m_plus: u32,
    pub m_minus: u32,
    /// Ambient sphere dimension.
    pub n: usize,
    /// Laplacian constant `g² (m_minus - m_plus) / 2`.
    c: f64,
    /// Level of the minimal hypersurface, `(m_minus - m_plus) / (m_plus + m_minus)`.
    f0: f64,
}

impl IsoparametricFamily {
    pub fn new(g: u32, m_plus: u32, m_minus: u32) -> Result<Self, DoublingError> {
        if ![1, 2, 3, 4, 6].contains(&g) {
            return Err(DoublingError::UnsupportedG(g));
        }
        if m_plus < 1 || m_minus < 1 {
            return Err(DoublingError::InvalidInput(
                "multiplicities must be at least 1".into(),
            ));
        }
        if [1, 3, 6].contains(&g) && m_plus != m_minus {
            return Err(DoublingError::UnequalMultiplicities { g, m_plus, m_minus });
        }
        let sum = (m_plus + m_minus) as usize;
        let n = g as usize * sum / 2 + 1;
        let gf = g as f64;
        Ok(IsoparametricFamily {
            g,
            m_plus,
            m_minus,
            n,
            c: gf * gf * (m_minus as f64 - m_plus as f64) / 2.0,
            f0: (m_minus as f64 - m_plus as f64) / (m_plus + m_minus) as f64,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Level of the minimal hypersurface; `H(f0) = 0`.
    pub fn f0(&self) -> f64 {
        self.f0
    }

    fn phi0(&self) -> f64 {
        self.f0.asin()
    }

    /// `|∇f|²` on the sphere as a function of the level.
    pub fn b_profile(&self, f: f64) -> f64 {
        let g = self.g as f64;
        g * g * (1.0 - f * f)
    }

    /// `Δf` on the sphere as a function of the level.
    pub fn lap_profile(&self, f: f64) -> f64 {
        let g = self.g as f64;
        self.c - g * (g + self.n as f64 - 1.0) * f
    }

    /// Level reached at oriented distance `r` from the minimal
    /// hypersurface along the gradient flow: `sin(g r + arcsin f0)`.
    ///
    /// Any finite `r` is admissible as long as it avoids the isolated
    /// focal radii where `|f| = 1`.
    pub fn f_of_r(&self, r: f64) -> Result<f64, DoublingError> {
        if !r.is_finite() {
            return Err(DoublingError::InvalidInput(format!(
                "radius must be finite, got {r}"
            )));
        }
        let g = self.g as f64;
        let f = (g * r + self.phi0()).sin();
        if f.abs() >= 1.0 - FOCAL_EPS {
            return Err(DoublingError::FocalRadius {
                r,
                lo: (-FRAC_PI_2 - self.phi0()) / g,
                hi: (FRAC_PI_2 - self.phi0()) / g,
                spacing: PI / g,
            });
        }
        Ok(f)
    }

    /// Principal-branch inverse of [`Self::f_of_r`].
    pub fn r_of_f(&self, f: f64) -> Result<f64, DoublingError> {
        if !(f.abs() < 1.0) {
            return Err(DoublingError::FocalLevel(f));
        }
        Ok((f.asin() - self.phi0()) / self.g as f64)
    }

    /// Squared norm of the shape operator of the level hypersurface.
    /// Requires `|f| < 1`.
    pub fn mu_square_sum(&self, f: f64) -> f64 {
        let nf = self.n as f64 - 1.0;
        let gf = self.g as f64 - 1.0;
        (nf * gf - self.c * f + nf * f * f) / (1.0 - f * f)
    }

    /// Mean curvature (trace of the shape operator) of the level
    /// hypersurface, with respect to the normal of increasing `f`.
    pub fn h_mean(&self, f: f64) -> f64 {
        ((self.n as f64 - 1.0) * f - self.c / self.g as f64) / (1.0 - f * f).sqrt()
    }

    /// Scalar-curvature defect of the level hypersurface:
    /// its intrinsic scalar curvature minus `(n-1)(n-g-1)`.
    ///
    /// Factored closed form
    /// `(n-1)(n-g-1)(f - f0)(f - f1) / (1 - f²)` with
    /// `f1 = c / (g (n-g-1))`; identically zero when `n - g - 1 = 0`.
    pub fn a_defect(&self, f: f64) -> f64 {
        let lead = self.defect_leading_coeff();
        if lead == 0.0 {
            return 0.0;
        }
        lead * (f - self.f0) * (f - self.f1()) / (1.0 - f * f)
    }

    fn defect_leading_coeff(&self) -> f64 {
        let nf = self.n as f64;
        let gf = self.g as f64;
        (nf - 1.0) * (nf - gf - 1.0)
    }

    fn f1(&self) -> f64 {
        self.c / (self.g as f64 * (self.n as f64 - self.g as f64 - 1.0))
    }

    /// The same defect computed by the Gauss equation route:
    /// `H² - Σμ² + (n-1)(g-1)`.
    pub fn a_defect_subtractive(&self, f: f64) -> f64 {
        let h = self.h_mean(f);
        h * h - self.mu_square_sum(f) + (self.n as f64 - 1.0) * (self.g as f64 - 1.0)
    }

    /// Global minimum of the defect over `(-1, 1)`: `(argmin, value)`.
    ///
    /// The rational function `(f - f0)(f - f1)/(1 - f²)` blows up to `+∞`
    /// at both ends and has a single interior critical point, the root of
    /// `-(f0+f1) f² + 2(1 + f0 f1) f - (f0+f1)` inside the interval.
    pub fn a_min(&self) -> (f64, f64) {
        if self.defect_leading_coeff() == 0.0 {
            return (self.f0, 0.0);
        }
        let s = self.f0 + self.f1();
        let p = self.f0 * self.f1();
        let f_star = s / ((1.0 + p) + ((1.0 + p) * (1.0 + p) - s * s).sqrt());
        (f_star, self.a_defect(f_star))
    }

    /// Principal curvatures of the level hypersurface with multiplicities,
    /// in descending order: `cot(acos(f)/g + k π/g)` for `k = 0..g`, the
    /// multiplicity alternating `m_plus`, `m_minus`.
    pub fn principal_curvatures(&self, f: f64) -> Result<Vec<(f64, usize)>, DoublingError> {
        if !(f.abs() < 1.0) {
            return Err(DoublingError::FocalLevel(f));
        }
        let base = f.acos() / self.g as f64;
        Ok((0..self.g)
            .map(|k| {
                let angle = base + k as f64 * PI / self.g as f64;
                let mult = if k % 2 == 0 { self.m_plus } else { self.m_minus };
                (angle.cos() / angle.sin(), mult as usize)
            })
            .collect())
    }

    /// Principal curvatures expanded to a flat list of length `n - 1`.
    pub fn principal_curvature_list(&self, f: f64) -> Result<Vec<f64>, DoublingError> {
        Ok(self
            .principal_curvatures(f)?
            .into_iter()
            .flat_map(|(mu, mult)| std::iter::repeat_n(mu, mult))
            .collect())
    }

    /// Principal curvatures of the bent hypersurface in `S^n × R`: the
    /// level-hypersurface directions contribute `μ_i sinθ`, the curve
    /// direction contributes `k`.
    pub fn bent_principal_curvatures(
        &self,
        f: f64,
        theta: f64,
        k: f64,
    ) -> Result<Vec<(f64, usize)>, DoublingError> {
        let mut out: Vec<(f64, usize)> = self
            .principal_curvatures(f)?
            .into_iter()
            .map(|(mu, mult)| (mu * theta.sin(), mult))
            .collect();
        out.push((k, 1));
        Ok(out)
    }

    /// Scalar curvature of the doubled metric at curve data `(theta, k)`
    /// over the level `f`.
    ///
    /// At `theta = 0` this is exactly `n(n-1)` (a slice of the round
    /// sphere); at `theta = π/2` it is the intrinsic scalar curvature of
    /// the level hypersurface (a cylinder cross-section). The bending term
    /// is skipped when `k = 0`, where it vanishes identically, so straight
    /// glides never evaluate the mean curvature.
    pub fn scalar_curvature(&self, f: f64, theta: f64, k: f64) -> f64 {
        let nf = self.n as f64;
        let cos = theta.cos();
        let sin = theta.sin();
        let mut r = nf * (nf - 1.0) * cos * cos;
        if sin != 0.0 {
            r += (self.defect_leading_coeff() + self.a_defect(f)) * sin * sin;
        }
        if k != 0.0 && sin != 0.0 {
            r += 2.0 * k * self.h_mean(f) * sin;
        }
        r
    }

    /// `(n-g-1)(n-1)`, the comparison scalar curvature of the level
    /// hypersurfaces.
    pub fn context_bound(&self) -> f64 {
        self.defect_leading_coeff()
    }

    fn window_period(&self) -> f64 {
        2.0 * PI / self.g as f64
    }

    fn window_width(&self) -> f64 {
        (PI - 2.0 * self.phi0()) / self.g as f64
    }

    /// The `j`-th closed radius window on which the level hypersurfaces
    /// have nonnegative mean curvature (`f(r) >= f0`).
    pub fn h_window(&self, j: u32) -> (f64, f64) {
        let lo = j as f64 * self.window_period();
        (lo, lo + self.window_width())
    }

    fn curve_clears_focal(&self, curve: &BendingCurve) -> bool {
        curve.samples.iter().all(|p| {
            let f = (self.g as f64 * p.r + self.phi0()).sin();
            p.r > 0.0 && f.abs() < 1.0 - 10.0 * FOCAL_EPS
        })
    }

    /// Emit a segment chain, shrinking the sample step slightly if some
    /// sample lands on a focal radius.
    fn emit_clear(
        &self,
        segments: &[CurveSegment],
        r_start: f64,
        r_bar: f64,
        r_1: f64,
        r_inf: f64,
        k_max: f64,
        step: f64,
    ) -> Result<BendingCurve, DoublingError> {
        for attempt in 0..32 {
            let step_a = step * (1.0 - 1e-4 * attempt as f64);
            let curve = assemble_curve(
                segments.to_vec(),
                r_start,
                r_bar,
                r_1,
                r_inf,
                k_max,
                step_a,
            );
            if self.curve_clears_focal(&curve) {
                return Ok(curve);
            }
        }
        Err(DoublingError::Planner(
            "could not find a sample grid avoiding the focal radii".into(),
        ))
    }

    /// Build the single-bump bending curve from `r_bar` down to `r_inf`.
    ///
    /// With `r_1 = None` the bump uses the full curvature budget `k_max`
    /// and `r_1` is derived; with `r_1 = Some(v)` the plateau curvature is
    /// solved so the bump spans exactly `[r_inf, v]`. No attention is paid
    /// to the sign of the mean curvature; see
    /// [`Self::build_certifiable_curve`] for the window-aware planner.
    pub fn build_curve(
        &self,
        k_max: f64,
        r_bar: f64,
        r_inf: f64,
        step: f64,
        r_1: Option<f64>,
    ) -> Result<BendingCurve, DoublingError> {
        if !(k_max > 0.0) || !(step > 0.0) || !(r_inf > 0.0) || !(r_bar >= r_inf) {
            return Err(DoublingError::InvalidInput(
                "need k_max > 0, step > 0, 0 < r_inf <= r_bar".into(),
            ));
        }
        if r_bar == r_inf {
            if let Some(r1) = r_1 {
                if r1 != r_inf {
                    return Err(DoublingError::InvalidInput(
                        "degenerate curve needs r_1 = r_inf = r_bar".into(),
                    ));
                }
            }
            let curve = identity_curve(r_inf, k_max, step);
            if !self.curve_clears_focal(&curve) {
                return Err(DoublingError::Planner(
                    "degenerate radius sits on a focal radius".into(),
                ));
            }
            return Ok(curve);
        }
        let min_straight = step.max(1e-3);
        let (kappa, width) = match r_1 {
            None => (k_max, bump_width(FRAC_PI_2, FRAC_PI_2, k_max)),
            Some(r1) => {
                let target = r1 - r_inf;
                let sharpest = bump_width(FRAC_PI_2, FRAC_PI_2, k_max);
                if target < sharpest - 1e-12 {
                    return Err(DoublingError::InvalidInput(format!(
                        "r_1 - r_inf = {target} is narrower than the sharpest admissible bump ({sharpest})"
                    )));
                }
                let mut lo = k_max;
                while bump_width(FRAC_PI_2, FRAC_PI_2, lo) < target && lo > 1e-12 {
                    lo *= 0.5;
                }
                let mut hi = k_max;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if bump_width(FRAC_PI_2, FRAC_PI_2, mid) > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let kappa = 0.5 * (lo + hi);
                (kappa, bump_width(FRAC_PI_2, FRAC_PI_2, kappa))
            }
        };
        let r_top = r_inf + width;
        if r_top + min_straight > r_bar {
            return Err(CurveError::Infeasible {
                r_bar,
                needed: r_top + min_straight,
            }
            .into());
        }
        let straight = straight_segment(0.0, 0.0, r_bar - r_top);
        let bump = bump_segment(straight.s_end, 0.0, FRAC_PI_2, kappa);
        let tail = straight_segment(bump.s_end, FRAC_PI_2, 10.0 * step);
        self.emit_clear(
            &[straight, bump, tail],
            r_bar,
            r_bar,
            r_top,
            r_inf,
            k_max,
            step,
        )
    }

    /// Largest turn (up to `max_turn`) whose bump ending at `theta_hi`
    /// fits into a window of horizontal extent `avail`.
    fn fit_turn(theta_hi: f64, avail: f64, k_max: f64, max_turn: f64) -> f64 {
        if bump_width(theta_hi, max_turn, k_max) <= avail {
            return max_turn;
        }
        let mut lo = 0.0f64;
        let mut hi = max_turn;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if bump_width(theta_hi, mid, k_max) <= avail {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Window-aware planner: place all bending inside the radius windows
    /// where the level hypersurfaces have nonnegative mean curvature, so
    /// the bending term of the scalar curvature never hurts. Straight
    /// glides cross the gaps. Greedy from the bottom window up, so the
    /// resulting `r_bar` is close to the smallest workable one for this
    /// bump shape.
    pub fn build_certifiable_curve(
        &self,
        k_max: f64,
        r_inf: f64,
        step: f64,
    ) -> Result<BendingCurve, DoublingError> {
        if !(k_max > 0.0) || !(step > 0.0) || !(r_inf > 0.0) {
            return Err(DoublingError::InvalidInput(
                "need k_max > 0, step > 0, r_inf > 0".into(),
            ));
        }
        let period = self.window_period();
        let ww = self.window_width();
        let j0 = (r_inf / period).floor();
        let hi0 = j0 * period + ww;
        if r_inf > hi0 - 1e-6 {
            return Err(DoublingError::InvalidInput(format!(
                "r_inf = {r_inf} does not sit inside a window of nonnegative mean curvature; windows are [{:.6}, {:.6}] repeating every {:.6}",
                0.0, ww, period
            )));
        }

        // allocate turn to windows from the bottom up
        struct Chunk {
            anchor: f64,
            dtheta: f64,
            theta_hi: f64,
        }
        let mut chunks: Vec<Chunk> = Vec::new();
        let mut theta_hi = FRAC_PI_2;
        let mut remaining = FRAC_PI_2;
        let mut anchor = r_inf;
        let mut avail = hi0 - r_inf;
        let mut j = j0 as u64;
        for guard in 0..200_000u64 {
            let dtheta = Self::fit_turn(theta_hi, avail, k_max, remaining);
            if dtheta >= remaining {
                chunks.push(Chunk {
                    anchor,
                    dtheta: remaining,
                    theta_hi,
                });
                remaining = 0.0;
                break;
            }
            if chunks.is_empty() && dtheta < 1e-9 {
                return Err(DoublingError::InvalidInput(format!(
                    "r_inf = {r_inf} leaves no room below the window top to finish the turn"
                )));
            }
            if dtheta >= 1e-9 {
                chunks.push(Chunk {
                    anchor,
                    dtheta,
                    theta_hi,
                });
                remaining -= dtheta;
                theta_hi -= dtheta;
            }
            j += 1;
            anchor = j as f64 * period;
            avail = ww;
            if guard == 199_999 {
                return Err(DoublingError::Planner(
                    "turn allocation did not terminate".into(),
                ));
            }
        }
        if remaining > 0.0 {
            return Err(DoublingError::Planner("turn allocation incomplete".into()));
        }

        // assemble forward: straight approach, then bumps from the top
        // window downward with glides across the gaps, then the tail
        let tops: Vec<f64> = chunks
            .iter()
            .map(|ch| ch.anchor + bump_width(ch.theta_hi, ch.dtheta, k_max))
            .collect();
        let min_straight = step.max(1e-3);
        let r_1 = *tops.last().unwrap();
        let r_bar = r_1 + min_straight;

        let mut segments = vec![straight_segment(0.0, 0.0, r_bar - r_1)];
        for i in (0..chunks.len()).rev() {
            let ch = &chunks[i];
            let s = segments.last().unwrap().s_end;
            segments.push(bump_segment(s, ch.theta_hi - ch.dtheta, ch.dtheta, k_max));
            if i > 0 {
                let dr = ch.anchor - tops[i - 1];
                let glide_len = dr / ch.theta_hi.cos();
                let s = segments.last().unwrap().s_end;
                segments.push(straight_segment(s, ch.theta_hi, glide_len));
            }
        }
        let s = segments.last().unwrap().s_end;
        segments.push(straight_segment(s, FRAC_PI_2, 10.0 * step));

        self.emit_clear(&segments, r_bar, r_bar, r_1, r_inf, k_max, step)
    }

    /// Evaluate the scalar curvature at every sample of the curve and
    /// assemble the positivity certificate.
    pub fn certify(&self, curve: &BendingCurve) -> Result<PositivityCertificate, DoublingError> {
        if curve.samples.is_empty() {
            return Err(DoublingError::Precondition("curve has no samples".into()));
        }
        let mut min_scalar = f64::INFINITY;
        let mut argmin = Extremum {
            s: 0.0,
            r: 0.0,
            theta: 0.0,
            k: 0.0,
            f: 0.0,
            scalar: f64::INFINITY,
        };
        for p in &curve.samples {
            if !(p.r > 0.0) {
                return Err(DoublingError::Precondition(format!(
                    "sample at s = {} has nonpositive radius {}",
                    p.s, p.r
                )));
            }
            let f = self.f_of_r(p.r)?;
            let scalar = self.scalar_curvature(f, p.theta, p.k);
            if scalar < min_scalar {
                min_scalar = scalar;
                argmin = Extremum {
                    s: p.s,
                    r: p.r,
                    theta: p.theta,
                    k: p.k,
                    f,
                    scalar,
                };
            }
        }
        let strong = self.n > self.g as usize + 1;
        let (_, a_min) = self.a_min();
        let lower_bound_used = self.context_bound() + a_min;
        let pass = min_scalar >= -1e-9 && (!strong || min_scalar > 0.0);
        Ok(PositivityCertificate {
            family: self.clone(),
            pass,
            min_scalar,
            argmin,
            lower_bound_used,
            context_bound: self.context_bound(),
            meets_lower_bound: strong && min_scalar >= lower_bound_used - 1e-9,
            samples: curve.samples.len() as u64,
            curve: curve.clone(),
        })
    }
}

/// Scalar curvature of a doubled hypersurface over a general ambient
/// space: `R_X + 2 A sin²θ + 2 k H sinθ` with
/// `A = Σ_{i<j} μ_i μ_j - ric_xi` and `H = Σ μ_i`.
pub fn general_scalar(r_x: f64, mu: &[f64], ric_xi: f64, theta: f64, k: f64) -> f64 {
    let h: f64 = mu.iter().sum();
    let sq: f64 = mu.iter().map(|m| m * m).sum();
    let a = 0.5 * (h * h - sq) - ric_xi;
    let sin = theta.sin();
    r_x + 2.0 * a * sin * sin + 2.0 * k * h * sin
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Extremum {
    pub s: f64,
    pub r: f64,
    pub theta: f64,
    pub k: f64,
    pub f: f64,
    pub scalar: f64,
}

/// Result of [`IsoparametricFamily::certify`].
///
/// `pass` requires `min_scalar >= -1e-9`; when the comparison curvature
/// `(n-g-1)(n-1)` is positive (multiplicities beyond `(1, 1)`) it
/// additionally requires strict positivity. `lower_bound_used` is the
/// closed-form floor `(n-g-1)(n-1) + min a`; `meets_lower_bound` records
/// whether the curve stayed above it, which window-planned curves do.
#[derive(Debug, Clone, Serialize)]
pub struct PositivityCertificate {
    pub family: IsoparametricFamily,
    pub pass: bool,
    pub min_scalar: f64,
    pub argmin: Extremum,
    pub lower_bound_used: f64,
    pub context_bound: f64,
    pub meets_lower_bound: bool,
    pub samples: u64,
    pub curve: BendingCurve,
}
