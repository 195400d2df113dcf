//! Apollonius loci in any dimension.
//!
//! For two foci `A`, `B` and a ratio `k > 0`, the Apollonius locus is the set
//! of points `M` with `d(A, M) / d(M, B) = k`. For `k < 1` it is a circle
//! (sphere in higher dimensions) enclosing `A`, for `k > 1` one enclosing `B`,
//! and for `k = 1` it degenerates to the perpendicular bisector of `AB`.
//!
//! Membership is decided with the ratio itself rather than the center/radius
//! form, so the same code serves every dimension.

use crate::error::{Error, Result};

/// Relative distance below which two points are treated as coincident.
pub const COINCIDENCE_TOL: f64 = 1e-12;
/// `|k - 1|` at or below this value yields the bisector form.
pub const UNIT_RATIO_TOL: f64 = 1e-9;
/// Relative tolerance of the boundary band used by [`ApolloniusRegion::side_of`].
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Euclidean distance between two coordinate slices of equal length.
#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// Distance ratio `d(a, m) / d(m, b)`.
///
/// Fails with [`Error::DegenerateRatio`] when `m` coincides with `b`; callers
/// treat such a point as lying on `b`'s side.
pub fn ratio(a: &[f64], b: &[f64], m: &[f64]) -> Result<f64> {
    check_dims(a, b)?;
    check_dims(a, m)?;
    let dmb = euclidean(m, b);
    let scale = euclidean(a, b).max(1.0);
    if dmb <= COINCIDENCE_TOL * scale {
        return Err(Error::DegenerateRatio);
    }
    Ok(euclidean(a, m) / dmb)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionForm {
    /// `0 < k < 1`: the sphere encloses focus A.
    SphereSideA,
    /// `k > 1`: the sphere encloses focus B.
    SphereSideB,
    /// `k = 1`: the perpendicular bisector of AB.
    BisectorLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inside,
    OnBoundary,
    Outside,
}

/// Apollonius locus for foci `A`, `B` and ratio `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApolloniusRegion {
    focus_a: Vec<f64>,
    focus_b: Vec<f64>,
    k: f64,
    form: RegionForm,
    center: Option<Vec<f64>>,
    radius: Option<f64>,
}

impl ApolloniusRegion {
    /// Builds the locus of points whose distance ratio to `a` and `b` is `k`.
    ///
    /// The center is `(a - k² b) / (1 - k²)` and the radius
    /// `k · d(a, b) / |1 - k²|`.
    pub fn new(a: &[f64], b: &[f64], k: f64) -> Result<Self> {
        check_dims(a, b)?;
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::InvalidRatio(k));
        }
        let dab = euclidean(a, b);
        if dab <= COINCIDENCE_TOL {
            return Err(Error::CoincidentFoci);
        }

        let (form, center, radius) = if (k - 1.0).abs() <= UNIT_RATIO_TOL {
            (RegionForm::BisectorLine, None, None)
        } else {
            let k2 = k * k;
            let denom = 1.0 - k2;
            let center = a
                .iter()
                .zip(b)
                .map(|(xa, xb)| (xa - k2 * xb) / denom)
                .collect::<Vec<_>>();
            let radius = k * dab / denom.abs();
            let form = if k < 1.0 {
                RegionForm::SphereSideA
            } else {
                RegionForm::SphereSideB
            };
            (form, Some(center), Some(radius))
        };

        Ok(Self {
            focus_a: a.to_vec(),
            focus_b: b.to_vec(),
            k,
            form,
            center,
            radius,
        })
    }

    pub fn focus_a(&self) -> &[f64] {
        &self.focus_a
    }

    pub fn focus_b(&self) -> &[f64] {
        &self.focus_b
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn form(&self) -> RegionForm {
        self.form
    }

    /// Sphere center; `None` for the bisector form.
    pub fn center(&self) -> Option<&[f64]> {
        self.center.as_deref()
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.focus_a.len()
    }

    /// Classifies `m` against the region using the distance ratio.
    ///
    /// A point coinciding with focus B has an unbounded ratio: it is inside
    /// a `SphereSideB` region and outside every other form.
    pub fn side_of(&self, m: &[f64]) -> Side {
        debug_assert_eq!(m.len(), self.dim());
        if self.form == RegionForm::BisectorLine {
            let da = euclidean(&self.focus_a, m);
            let db = euclidean(m, &self.focus_b);
            let scale = euclidean(&self.focus_a, &self.focus_b).max(1.0);
            return if (da - db).abs() <= BOUNDARY_TOL * scale {
                Side::OnBoundary
            } else {
                Side::Outside
            };
        }

        let r = match ratio(&self.focus_a, &self.focus_b, m) {
            Ok(r) => r,
            Err(_) => {
                return match self.form {
                    RegionForm::SphereSideB => Side::Inside,
                    _ => Side::Outside,
                }
            }
        };
        if (r - self.k).abs() <= BOUNDARY_TOL * self.k.max(1.0) {
            return Side::OnBoundary;
        }
        let inside = match self.form {
            RegionForm::SphereSideA => r < self.k,
            RegionForm::SphereSideB => r > self.k,
            RegionForm::BisectorLine => unreachable!(),
        };
        if inside {
            Side::Inside
        } else {
            Side::Outside
        }
    }

    /// Closed-region membership: inside or on the boundary.
    ///
    /// The bisector form never covers anything.
    pub fn covers(&self, m: &[f64]) -> bool {
        match self.form {
            RegionForm::BisectorLine => false,
            _ => self.side_of(m) != Side::Outside,
        }
    }
}

/// Free-function form of [`ApolloniusRegion::new`].
pub fn apollonius_region(a: &[f64], b: &[f64], k: f64) -> Result<ApolloniusRegion> {
    ApolloniusRegion::new(a, b, k)
}
