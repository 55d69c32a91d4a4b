//! Closed-form retraction of the punctured sector onto its two bounding
//! radii, with a grid-based numerical check.
//!
//! The region is the closed sector of the unit disk between the rays at
//! angles `λ` and `π - λ`, with the point `N = (0, 1)` removed. Its boundary
//! radii are `OP` and `OQ`, `P = (cos λ, sin λ)`, `Q = (-cos λ, sin λ)`. A
//! point `M = (x0, y0)` with `x0 != 0` is sent along the circle through `M`
//! and `N` centred on the x-axis until it meets `OP` (for `x0 > 0`) or `OQ`
//! (for `x0 < 0`); points on the y-axis go to the origin.
//!
//! With `S = x0² + y0² - 1`, `t = tan λ` and
//! `D = x0⁴ + y0⁴ + 2x0²(2t² + 1) + 2y0²(x0² - 1) + 1` the image is
//! `(a, t·a)` for `x0 > 0` and `(c, -t·c)` for `x0 < 0`, where both `a` and
//! `c` equal `(S + √D) / (2 x0 (t² + 1))`. For `x0 < 0` this is the root of
//! the circle/line intersection lying on `OQ`; taking `S - √D` instead lands on
//! the reflection of `OQ` through the origin and moves the points of `OQ`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use thiserror::Error;

/// Tolerance for region membership.
pub const REGION_TOL: f64 = 1e-12;
/// `|x0|` below this is treated as lying on the y-axis.
pub const AXIS_TOL: f64 = 1e-12;
/// Tolerance for the on-target, fixed-point and idempotence checks.
pub const CHECK_TOL: f64 = 1e-9;
/// Samples closer than this to the puncture are skipped.
pub const PUNCTURE_EXCLUSION: f64 = 1e-6;
/// Continuity proxy: adjacent images may be at most this many sample
/// spacings apart.
pub const CONTINUITY_FACTOR: f64 = 50.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("lambda must lie strictly between 0 and pi/2, got {0}")]
    BadLambda(f64),
    #[error("({0}, {1}) is the puncture N = (0, 1)")]
    Puncture(f64, f64),
    #[error("({0}, {1}) is outside the sector region")]
    OutsideRegion(f64, f64),
    #[error("grid must be at least 2, got {0}")]
    BadGrid(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetractionParams {
    lambda: f64,
}

impl RetractionParams {
    pub fn new(lambda: f64) -> Result<Self, GeometryError> {
        if !(lambda > 0.0 && lambda < FRAC_PI_2) {
            return Err(GeometryError::BadLambda(lambda));
        }
        Ok(RetractionParams { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p(&self) -> (f64, f64) {
        (self.lambda.cos(), self.lambda.sin())
    }

    pub fn q(&self) -> (f64, f64) {
        (-self.lambda.cos(), self.lambda.sin())
    }

    /// Distance from `(x, y)` to `OP ∪ OQ`.
    pub fn distance_to_segments(&self, (x, y): (f64, f64)) -> f64 {
        segment_distance((x, y), self.p()).min(segment_distance((x, y), self.q()))
    }
}

fn segment_distance((x, y): (f64, f64), (ex, ey): (f64, f64)) -> f64 {
    // segment from the origin to the unit vector (ex, ey)
    let s = (x * ex + y * ey).clamp(0.0, 1.0);
    (x - s * ex).hypot(y - s * ey)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub x0: f64,
    pub y0: f64,
}

impl RegionPoint {
    pub fn new(params: &RetractionParams, x0: f64, y0: f64) -> Result<Self, GeometryError> {
        if x0 == 0.0 && y0 == 1.0 {
            return Err(GeometryError::Puncture(x0, y0));
        }
        if !in_region(params, x0, y0) {
            return Err(GeometryError::OutsideRegion(x0, y0));
        }
        Ok(RegionPoint { x0, y0 })
    }
}

fn in_region(params: &RetractionParams, x: f64, y: f64) -> bool {
    let r = x.hypot(y);
    if !x.is_finite() || !y.is_finite() || r > 1.0 + REGION_TOL {
        return false;
    }
    if r <= REGION_TOL {
        return true;
    }
    let lambda = params.lambda;
    // inside the cone between the two rays: y >= |x| tan λ, up to tolerance
    // measured as distance to the nearer bounding line
    let (s, c) = lambda.sin_cos();
    let to_right = y * c - x * s; // signed distance to the line through OP
    let to_left = y * c + x * s; // signed distance to the line through OQ
    to_right >= -REGION_TOL && to_left >= -REGION_TOL
}

/// Image of `p` under the retraction.
pub fn retract(params: &RetractionParams, p: &RegionPoint) -> (f64, f64) {
    let (x0, y0) = (p.x0, p.y0);
    if x0.abs() < AXIS_TOL {
        return (0.0, 0.0);
    }
    let t = params.lambda.tan();
    let s = x0 * x0 + y0 * y0 - 1.0;
    let disc = x0.powi(4)
        + y0.powi(4)
        + 2.0 * x0 * x0 * (2.0 * t * t + 1.0)
        + 2.0 * y0 * y0 * (x0 * x0 - 1.0)
        + 1.0;
    let root = disc.max(0.0).sqrt();
    let coord = (s + root) / (2.0 * x0 * (t * t + 1.0));
    if x0 > 0.0 {
        (coord, t * coord)
    } else {
        (coord, -t * coord)
    }
}

/// Outcome of [`verify_retraction`]. Failures are reported, not raised.
#[derive(Debug, Clone, PartialEq)]
pub struct RetractionReport {
    pub lambda: f64,
    pub grid: usize,
    pub samples: usize,
    /// Largest distance from an image to `OP ∪ OQ`.
    pub max_target_distance: f64,
    /// Largest `|r(p) - p|` over samples lying on `OP ∪ OQ`.
    pub max_fixed_point_error: f64,
    /// Samples off the segments that `r` nonetheless fixes.
    pub spurious_fixed_points: usize,
    /// Largest `|r(r(p)) - r(p)|`.
    pub max_idempotence_error: f64,
    /// Largest image distance between same-side neighbours, in units of the
    /// sample spacing.
    pub max_continuity_ratio: f64,
}

impl RetractionReport {
    pub fn on_target(&self) -> bool {
        self.max_target_distance <= CHECK_TOL
    }

    pub fn fixes_segments(&self) -> bool {
        self.max_fixed_point_error <= CHECK_TOL && self.spurious_fixed_points == 0
    }

    pub fn idempotent(&self) -> bool {
        self.max_idempotence_error <= CHECK_TOL
    }

    pub fn continuous(&self) -> bool {
        self.max_continuity_ratio <= CONTINUITY_FACTOR
    }

    pub fn passed(&self) -> bool {
        self.on_target() && self.fixes_segments() && self.idempotent() && self.continuous()
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

impl fmt::Display for RetractionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lambda: {}", self.lambda)?;
        writeln!(f, "grid: {}", self.grid)?;
        writeln!(f, "samples: {}", self.samples)?;
        writeln!(
            f,
            "on_target: {} (max distance {:.3e}, tol {:.0e})",
            verdict(self.on_target()),
            self.max_target_distance,
            CHECK_TOL
        )?;
        writeln!(
            f,
            "fixed_segments: {} (max error {:.3e}, spurious {})",
            verdict(self.fixes_segments()),
            self.max_fixed_point_error,
            self.spurious_fixed_points
        )?;
        writeln!(
            f,
            "idempotent: {} (max error {:.3e})",
            verdict(self.idempotent()),
            self.max_idempotence_error
        )?;
        writeln!(
            f,
            "continuity: {} (max ratio {:.3}, bound {})",
            verdict(self.continuous()),
            self.max_continuity_ratio,
            CONTINUITY_FACTOR
        )?;
        writeln!(f, "result: {}", verdict(self.passed()))
    }
}

/// Samples a `grid × grid` polar grid over the sector (radius `i/(grid-1)`,
/// angle from `λ` to `π - λ`), skipping the puncture, and checks the
/// retraction properties on it.
pub fn verify_retraction(
    params: &RetractionParams,
    grid: usize,
) -> Result<RetractionReport, GeometryError> {
    if grid < 2 {
        return Err(GeometryError::BadGrid(grid));
    }
    let lambda = params.lambda;
    let steps = (grid - 1) as f64;
    let dr = 1.0 / steps;
    let dtheta = (PI - 2.0 * lambda) / steps;
    // angular step measured as arc length on the unit circle
    let spacing = dr.max(dtheta);

    // (point, image) per grid cell; None at the puncture
    let mut samples: Vec<Option<[(f64, f64); 2]>> = vec![None; grid * grid];
    let mut report = RetractionReport {
        lambda,
        grid,
        samples: 0,
        max_target_distance: 0.0,
        max_fixed_point_error: 0.0,
        spurious_fixed_points: 0,
        max_idempotence_error: 0.0,
        max_continuity_ratio: 0.0,
    };
    let dist = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).hypot(a.1 - b.1);

    for i in 0..grid {
        for j in 0..grid {
            let radius = i as f64 * dr;
            let theta = if j + 1 == grid {
                PI - lambda
            } else {
                lambda + j as f64 * dtheta
            };
            let (x, y) = (radius * theta.cos(), radius * theta.sin());
            if x.hypot(y - 1.0) < PUNCTURE_EXCLUSION {
                continue;
            }
            let Ok(point) = RegionPoint::new(params, x, y) else {
                continue;
            };
            let image = retract(params, &point);
            report.samples += 1;
            report.max_target_distance = report
                .max_target_distance
                .max(params.distance_to_segments(image));

            let moved = dist(image, (x, y));
            if params.distance_to_segments((x, y)) <= CHECK_TOL {
                report.max_fixed_point_error = report.max_fixed_point_error.max(moved);
            } else if moved <= CHECK_TOL {
                report.spurious_fixed_points += 1;
            }

            let again = match RegionPoint::new(params, image.0, image.1) {
                Ok(ip) => retract(params, &ip),
                // an image outside the region is already a failed check
                Err(_) => (f64::INFINITY, f64::INFINITY),
            };
            report.max_idempotence_error = report.max_idempotence_error.max(dist(again, image));
            samples[i * grid + j] = Some([(x, y), image]);
        }
    }

    for i in 0..grid {
        for j in 0..grid {
            let Some([p, rp]) = samples[i * grid + j] else {
                continue;
            };
            for (ni, nj) in [(i + 1, j), (i, j + 1)] {
                if ni >= grid || nj >= grid {
                    continue;
                }
                let Some([q, rq]) = samples[ni * grid + nj] else {
                    continue;
                };
                let same_side = (p.0 > AXIS_TOL && q.0 > AXIS_TOL)
                    || (p.0 < -AXIS_TOL && q.0 < -AXIS_TOL);
                if same_side {
                    report.max_continuity_ratio =
                        report.max_continuity_ratio.max(dist(rp, rq) / spacing);
                }
            }
        }
    }
    Ok(report)
}
