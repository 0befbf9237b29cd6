//! Hölder exponents, the interpolation weight theta, and the two planar
//! regions used in the free-group argument: the lens `B(0,1) ∩ {|Im z| <= theta}`
//! and the ellipse parameterising the uniformly bounded family of `F_r`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::C64;

/// An exponent `p` in the open interval `(1, inf)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 1.0 {
            Ok(Self(p))
        } else {
            Err(Error::InvalidExponent(p))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `|2/p - 1|`. On `(1, 2]` this is the Riesz–Thorin weight `2/p - 1`;
    /// for `p > 2` it is the weight of the conjugate exponent.
    pub fn theta(self) -> f64 {
        (2.0 / self.0 - 1.0).abs()
    }

    /// The conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Self {
        Self(self.0 / (self.0 - 1.0))
    }

    /// The representative of `{p, q}` lying in `(1, 2]`.
    pub fn at_most_two(self) -> Self {
        if self.0 > 2.0 {
            self.conjugate()
        } else {
            self
        }
    }
}

impl std::fmt::Display for PExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// `B(0,1) ∩ {z : |Im z| <= theta}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LensRegion {
    theta: f64,
}

impl LensRegion {
    pub fn new(theta: f64) -> Result<Self> {
        if (0.0..1.0).contains(&theta) {
            Ok(Self { theta })
        } else {
            Err(Error::InvalidParameter(format!("lens height {theta} not in [0, 1)")))
        }
    }

    pub fn for_exponent(p: PExponent) -> Self {
        Self { theta: p.theta() }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        lens_contains(z, self.theta, tol)
    }
}

/// True iff `|z| <= 1 + tol` and `|Im z| <= theta + tol`.
pub fn lens_contains(z: C64, theta: f64, tol: f64) -> bool {
    z.norm() <= 1.0 + tol && z.im.abs() <= theta + tol
}

/// The ellipse `|z - c| + |z + c| < 2`, `c = sqrt(2r - 1) / r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PytlikEllipse {
    r: u64,
    focus: f64,
    semi_minor: f64,
}

impl PytlikEllipse {
    pub fn new(r: u64) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParameter(format!("ellipse needs r >= 2, got {r}")));
        }
        let rf = r as f64;
        Ok(Self { r, focus: (2.0 * rf - 1.0).sqrt() / rf, semi_minor: (rf - 1.0) / rf })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn focus(&self) -> f64 {
        self.focus
    }

    pub fn semi_minor(&self) -> f64 {
        self.semi_minor
    }

    /// `2 - (|z - c| + |z + c|)`; positive exactly on the open ellipse.
    pub fn margin(&self, z: C64) -> f64 {
        let c = C64::new(self.focus, 0.0);
        2.0 - ((z - c).norm() + (z + c).norm())
    }

    pub fn contains(&self, z: C64) -> bool {
        self.margin(z) > 0.0
    }
}

pub fn ellipse_contains(z: C64, r: u64) -> Result<bool> {
    Ok(PytlikEllipse::new(r)?.contains(z))
}

/// A rank `r` and a point `z0` of the ellipse for `F_r` lying outside the
/// lens for `theta(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub p: f64,
    pub theta: f64,
    pub r: u64,
    pub z0: C64,
    /// `2 - (|z0 - c| + |z0 + c|)`.
    pub ellipse_margin: f64,
    /// `Im z0 - theta`.
    pub lens_margin: f64,
}

/// Required slack on the strict ellipse inequality.
pub const ELLIPSE_STRICT_SLACK: f64 = 1e-12;

/// Smallest `r >= 2` with `theta < (r-1)/r`, and `z0` purely imaginary midway
/// between the lens edge and the ellipse's semi-minor vertex.
///
/// Exponents above 2 are replaced by their conjugate. Fails only when `p` is
/// so close to 1 that the two margins cannot be resolved in double precision.
pub fn pytlik_witness(p: PExponent) -> Result<Witness> {
    let p = p.at_most_two();
    let theta = p.theta();
    let fits = |r: u64| theta < (r as f64 - 1.0) / r as f64;
    // theta < 1 - 1/r  <=>  r > 1/(1 - theta)
    let guess = (1.0 / (1.0 - theta)).floor();
    if !guess.is_finite() || guess > 1e15 {
        return Err(Error::Numeric(format!("theta = {theta} too close to 1 for a witness")));
    }
    let mut r = (guess as u64).max(2);
    while r > 2 && fits(r - 1) {
        r -= 1;
    }
    while !fits(r) {
        r += 1;
    }
    let ellipse = PytlikEllipse::new(r)?;
    let z0 = C64::new(0.0, 0.5 * (theta + ellipse.semi_minor()));
    let w = Witness {
        p: p.value(),
        theta,
        r,
        z0,
        ellipse_margin: ellipse.margin(z0),
        lens_margin: z0.im - theta,
    };
    if w.ellipse_margin < ELLIPSE_STRICT_SLACK || lens_contains(z0, theta, 0.0) {
        return Err(Error::Numeric(format!(
            "witness margins not resolvable at p = {}: ellipse {:e}, lens {:e}",
            w.p, w.ellipse_margin, w.lens_margin
        )));
    }
    Ok(w)
}
