//! Piecewise paths in the complex plane: polylines and circular arcs with
//! exact breakpoints and clearance bookkeeping against a forbidden point set.

use rug::ops::CompleteRound;
use rug::Float;

use super::{AppComplex, NumericsError};

/// One path piece, parametrized over a local coordinate in [0,1].
#[derive(Clone, Debug)]
pub enum PathSegment {
    Line { from: AppComplex, to: AppComplex },
    /// Arc around `center` with radius `radius` from angle `theta0` to
    /// `theta1` (radians); the sweep is signed, so `theta1 < theta0` runs
    /// clockwise.
    Arc { center: AppComplex, radius: Float, theta0: Float, theta1: Float },
}

impl PathSegment {
    pub fn start(&self) -> AppComplex {
        match self {
            PathSegment::Line { from, .. } => from.clone(),
            PathSegment::Arc { .. } => self.point_at(0.0),
        }
    }

    pub fn end(&self) -> AppComplex {
        match self {
            PathSegment::Line { to, .. } => to.clone(),
            PathSegment::Arc { .. } => self.point_at(1.0),
        }
    }

    fn prec(&self) -> u32 {
        match self {
            PathSegment::Line { from, .. } => from.precision_bits(),
            PathSegment::Arc { center, .. } => center.precision_bits(),
        }
    }

    /// Point at local parameter `lambda` (given as f64 since the parameter
    /// grid itself is low-entropy; all arithmetic runs at the path precision).
    pub fn point_at(&self, lambda: f64) -> AppComplex {
        let prec = self.prec();
        let lam = Float::with_val(prec, lambda);
        self.point_at_f(&lam)
    }

    pub fn point_at_f(&self, lambda: &Float) -> AppComplex {
        let prec = self.prec();
        match self {
            PathSegment::Line { from, to } => {
                let d = &to.0 - &from.0;
                AppComplex(&from.0 + d.complete(from.0.prec()) * lambda)
            }
            PathSegment::Arc { center, radius, theta0, theta1 } => {
                let theta = theta0.clone() + (theta1.clone() - theta0) * lambda;
                let dir = AppComplex(rug::Complex::with_val(
                    prec,
                    (theta.clone().cos(), theta.sin()),
                ));
                AppComplex(&center.0 + dir.0 * radius)
            }
        }
    }

    /// d(point)/d(lambda) at local parameter `lambda`.
    pub fn derivative_at_f(&self, lambda: &Float) -> AppComplex {
        let prec = self.prec();
        match self {
            PathSegment::Line { from, to } => AppComplex((&to.0 - &from.0).complete(from.0.prec())),
            PathSegment::Arc { center: _, radius, theta0, theta1 } => {
                let sweep = theta1.clone() - theta0;
                let theta = theta0.clone() + sweep.clone() * lambda;
                let dir = AppComplex(rug::Complex::with_val(
                    prec,
                    (theta.clone().cos(), theta.sin()),
                ));
                // i * sweep * r * e^{i theta}
                AppComplex(dir.0 * radius * sweep).mul_i()
            }
        }
    }

    /// Minimum distance from this segment to a point, at path precision.
    pub fn distance_to(&self, p: &AppComplex) -> Float {
        let prec = self.prec();
        match self {
            PathSegment::Line { from, to } => {
                let d = AppComplex((&to.0 - &from.0).complete(from.0.prec()));
                let v = AppComplex((&p.0 - &from.0).complete(from.0.prec()));
                let dd = d.norm_sqr();
                if dd.is_zero() {
                    return v.abs();
                }
                // Projection parameter clamped to [0,1].
                let dot = v.re().clone() * d.re() + v.im().clone() * d.im();
                let mut t = dot / dd;
                if t < 0 {
                    t = Float::with_val(prec, 0);
                } else if t > 1 {
                    t = Float::with_val(prec, 1);
                }
                let proj = self.point_at_f(&t);
                p.dist(&proj)
            }
            PathSegment::Arc { center, radius, theta0, theta1 } => {
                let rel = AppComplex((&p.0 - &center.0).complete(center.0.prec()));
                let ang = rel.arg();
                let (lo, hi) = if theta0 < theta1 {
                    (theta0.clone(), theta1.clone())
                } else {
                    (theta1.clone(), theta0.clone())
                };
                // Does some representative ang + 2πk land inside [lo, hi]?
                let two_pi = Float::with_val(prec, rug::float::Constant::Pi) * 2u8;
                let mut a = ang.clone();
                while a > hi {
                    a -= two_pi.clone();
                }
                while a < lo {
                    a += two_pi.clone();
                }
                if a <= hi {
                    (rel.abs() - radius.clone()).abs()
                } else {
                    let d0 = p.dist(&self.point_at(0.0));
                    let d1 = p.dist(&self.point_at(1.0));
                    if d0 < d1 {
                        d0
                    } else {
                        d1
                    }
                }
            }
        }
    }
}

/// A piecewise path with clearance contract against a forbidden point set.
/// The global parameter runs over [0,1], split uniformly across segments.
#[derive(Clone, Debug)]
pub struct PlanePath {
    pub segments: Vec<PathSegment>,
    pub clearance: Float,
    pub forbidden: Vec<AppComplex>,
}

impl PlanePath {
    pub fn new(
        segments: Vec<PathSegment>,
        clearance: Float,
        forbidden: Vec<AppComplex>,
    ) -> Result<Self, NumericsError> {
        if segments.is_empty() {
            return Err(NumericsError::InvalidPath("empty segment list".into()));
        }
        for w in segments.windows(2) {
            if w[0].end().dist(&w[1].start()).to_f64() != 0.0 {
                return Err(NumericsError::InvalidPath(format!(
                    "segment endpoints do not coincide: {} vs {}",
                    w[0].end(),
                    w[1].start()
                )));
            }
        }
        let path = PlanePath { segments, clearance, forbidden };
        path.check_clearance()?;
        Ok(path)
    }

    pub fn polyline(
        points: &[AppComplex],
        clearance: Float,
        forbidden: Vec<AppComplex>,
    ) -> Result<Self, NumericsError> {
        if points.len() < 2 {
            return Err(NumericsError::InvalidPath("polyline needs at least two points".into()));
        }
        let segments = points
            .windows(2)
            .map(|w| PathSegment::Line { from: w[0].clone(), to: w[1].clone() })
            .collect();
        PlanePath::new(segments, clearance, forbidden)
    }

    /// A single-segment constant path (degenerate line), always admissible.
    pub fn constant(at: AppComplex) -> Self {
        PlanePath {
            segments: vec![PathSegment::Line { from: at.clone(), to: at }],
            clearance: Float::with_val(64, 0),
            forbidden: Vec::new(),
        }
    }

    pub fn check_clearance(&self) -> Result<(), NumericsError> {
        for f in &self.forbidden {
            for seg in &self.segments {
                let d = seg.distance_to(f);
                if d < self.clearance {
                    return Err(NumericsError::ClearanceViolation(
                        format!("{}", seg.start()),
                        d.to_f64(),
                        format!("{f}"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn start(&self) -> AppComplex {
        self.segments[0].start()
    }

    pub fn end(&self) -> AppComplex {
        self.segments.last().unwrap().end()
    }

    pub fn prec(&self) -> u32 {
        self.segments[0].start().precision_bits()
    }

    /// Global parameter values of segment boundaries, including 0 and 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        let n = self.segments.len();
        (0..=n).map(|k| k as f64 / n as f64).collect()
    }

    /// Map a global parameter to (segment index, local lambda in [0,1]).
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let n = self.segments.len();
        let scaled = (s.clamp(0.0, 1.0)) * n as f64;
        let mut idx = scaled.floor() as usize;
        if idx >= n {
            idx = n - 1;
        }
        (idx, scaled - idx as f64)
    }

    pub fn point(&self, s: f64) -> AppComplex {
        let (idx, lam) = self.locate(s);
        self.segments[idx].point_at(lam)
    }

    /// d(point)/ds with the segment-count chain factor included.
    pub fn derivative(&self, s: f64) -> AppComplex {
        let (idx, lam) = self.locate(s);
        let prec = self.prec();
        let lam = Float::with_val(prec, lam);
        let d = self.segments[idx].derivative_at_f(&lam);
        let n = Float::with_val(prec, self.segments.len() as f64);
        AppComplex(d.0 * n)
    }

    /// Concatenate with another path starting where this one ends.
    pub fn join(mut self, other: PlanePath) -> Result<Self, NumericsError> {
        if self.end().dist(&other.start()).to_f64() != 0.0 {
            return Err(NumericsError::InvalidPath("join endpoints do not coincide".into()));
        }
        self.segments.extend(other.segments);
        for f in other.forbidden {
            if !self.forbidden.iter().any(|g| g.dist(&f).is_zero()) {
                self.forbidden.push(f);
            }
        }
        PlanePath::new(self.segments, self.clearance, self.forbidden)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> AppComplex {
        AppComplex::from_f64(re, im, 128)
    }

    #[test]
    fn polyline_rejects_clearance_violation() {
        let forbidden = vec![c(0.5, 0.0)];
        let r = PlanePath::polyline(&[c(0.0, 0.0), c(1.0, 0.0)], Float::with_val(64, 0.1), forbidden);
        assert!(matches!(r, Err(NumericsError::ClearanceViolation(..))));
    }

    #[test]
    fn arc_points_and_derivative() {
        // Unit semicircle from 1 to -1 through i.
        let seg = PathSegment::Arc {
            center: c(0.0, 0.0),
            radius: Float::with_val(128, 1),
            theta0: Float::with_val(128, 0),
            theta1: Float::with_val(128, rug::float::Constant::Pi),
        };
        let mid = seg.point_at(0.5);
        assert!(mid.dist(&c(0.0, 1.0)).to_f64() < 1e-30);
        // Derivative at 0 points straight up with magnitude pi.
        let d = seg.derivative_at_f(&Float::with_val(128, 0));
        assert!((d.re().to_f64()).abs() < 1e-30);
        assert!((d.im().to_f64() - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn arc_distance_inside_and_outside_sweep() {
        let seg = PathSegment::Arc {
            center: c(0.0, 0.0),
            radius: Float::with_val(128, 1),
            theta0: Float::with_val(128, 0),
            theta1: Float::with_val(128, std::f64::consts::FRAC_PI_2),
        };
        // Point along the sweep: radial distance.
        let d = seg.distance_to(&c(0.0, 2.0));
        assert!((d.to_f64() - 1.0).abs() < 1e-12);
        // Point opposite the sweep: endpoint distance.
        let d2 = seg.distance_to(&c(-1.0, 0.0));
        assert!((d2.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn global_parameter_traversal() {
        let p = PlanePath::polyline(
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)],
            Float::with_val(64, 0),
            vec![],
        )
        .unwrap();
        assert!(p.point(0.5).dist(&c(1.0, 0.0)).to_f64() < 1e-30);
        assert!(p.point(0.25).dist(&c(0.5, 0.0)).to_f64() < 1e-30);
        assert_eq!(p.breakpoints(), vec![0.0, 0.5, 1.0]);
    }
}
