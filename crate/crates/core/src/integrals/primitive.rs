//! Primitive Cartesian Gaussians and the closed-form s-type integrals.

use std::f64::consts::PI;

use crate::error::{QveError, Result};

pub type Vec3 = [f64; 3];

#[inline]
pub(crate) fn dist2(a: &Vec3, b: &Vec3) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Normalization constant of a Cartesian Gaussian
/// `x^i y^j z^k exp(-alpha r^2)`:
/// `(2a/pi)^(3/4) * sqrt((8a)^(i+j+k) i! j! k! / ((2i)! (2j)! (2k)!))`.
pub fn normalize_primitive(exponent: f64, angular: [u32; 3]) -> Result<f64> {
    if !(exponent > 0.0) || !exponent.is_finite() {
        return Err(QveError::invalid(format!(
            "Gaussian exponent must be positive, got {exponent}"
        )));
    }
    let [i, j, k] = angular;
    let radial = (2.0 * exponent / PI).powf(0.75);
    let num = (8.0 * exponent).powi((i + j + k) as i32)
        * factorial(i)
        * factorial(j)
        * factorial(k);
    let den = factorial(2 * i) * factorial(2 * j) * factorial(2 * k);
    Ok(radial * (num / den).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPrimitive {
    exponent: f64,
    angular: [u32; 3],
    center: Vec3,
    norm: f64,
}

impl GaussianPrimitive {
    pub fn new(exponent: f64, angular: [u32; 3], center: Vec3) -> Result<Self> {
        let norm = normalize_primitive(exponent, angular)?;
        Ok(GaussianPrimitive {
            exponent,
            angular,
            center,
            norm,
        })
    }

    pub fn s(exponent: f64, center: Vec3) -> Result<Self> {
        Self::new(exponent, [0, 0, 0], center)
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn angular(&self) -> [u32; 3] {
        self.angular
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_s(&self) -> bool {
        self.angular == [0, 0, 0]
    }

    /// Same primitive moved to another center.
    pub fn with_center(&self, center: Vec3) -> Self {
        GaussianPrimitive {
            center,
            ..self.clone()
        }
    }

    /// Value of the normalized primitive at `r`.
    pub fn value(&self, r: &Vec3) -> f64 {
        let mut poly = 1.0;
        for d in 0..3 {
            poly *= (r[d] - self.center[d]).powi(self.angular[d] as i32);
        }
        self.norm * poly * (-self.exponent * dist2(r, &self.center)).exp()
    }
}

fn require_s(prims: &[&GaussianPrimitive]) -> Result<()> {
    match prims.iter().find(|p| !p.is_s()) {
        None => Ok(()),
        Some(p) => Err(QveError::UnsupportedAngularMomentum {
            element: "primitive".into(),
            shell: format!("{:?}", p.angular),
        }),
    }
}

/// Gaussian product theorem: `exp(-a|r-A|^2) exp(-b|r-B|^2) = K exp(-p|r-P|^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProduct {
    pub exponent: f64,
    pub center: Vec3,
    pub prefactor: f64,
}

pub fn gaussian_product(a: &GaussianPrimitive, b: &GaussianPrimitive) -> GaussianProduct {
    let p = a.exponent + b.exponent;
    let mu = a.exponent * b.exponent / p;
    let mut center = [0.0; 3];
    for (d, c) in center.iter_mut().enumerate() {
        *c = (a.exponent * a.center[d] + b.exponent * b.center[d]) / p;
    }
    GaussianProduct {
        exponent: p,
        center,
        prefactor: (-mu * dist2(&a.center, &b.center)).exp(),
    }
}

pub fn overlap_s(a: &GaussianPrimitive, b: &GaussianPrimitive) -> Result<f64> {
    require_s(&[a, b])?;
    let gp = gaussian_product(a, b);
    Ok(a.norm * b.norm * (PI / gp.exponent).powf(1.5) * gp.prefactor)
}

pub fn kinetic_s(a: &GaussianPrimitive, b: &GaussianPrimitive) -> Result<f64> {
    require_s(&[a, b])?;
    let p = a.exponent + b.exponent;
    let mu = a.exponent * b.exponent / p;
    let r2 = dist2(&a.center, &b.center);
    Ok(a.norm * b.norm * mu * (3.0 - 2.0 * mu * r2) * (PI / p).powf(1.5) * (-mu * r2).exp())
}

/// Taylor/erf switch point for [`boys_f0`].
pub const BOYS_SWITCH: f64 = 1e-6;

/// Zeroth-order Boys function `F0(t) = 1/2 sqrt(pi/t) erf(sqrt t)`.
pub fn boys_f0(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(QveError::invalid(format!(
            "Boys function argument must be >= 0, got {t}"
        )));
    }
    if t < BOYS_SWITCH {
        Ok(1.0 - t / 3.0 + t * t / 10.0 - t * t * t / 42.0)
    } else {
        let s = t.sqrt();
        Ok(0.5 * (PI / t).sqrt() * libm::erf(s))
    }
}

/// Attraction between the product density `a b` and a point nucleus of charge
/// `z` at `nucleus`. Negative for every valid input.
pub fn nuclear_attraction_s(
    a: &GaussianPrimitive,
    b: &GaussianPrimitive,
    nucleus: &Vec3,
    z: u32,
) -> Result<f64> {
    require_s(&[a, b])?;
    let gp = gaussian_product(a, b);
    let f0 = boys_f0(gp.exponent * dist2(&gp.center, nucleus))?;
    Ok(-(z as f64) * a.norm * b.norm * (2.0 * PI / gp.exponent) * gp.prefactor * f0)
}

/// Two-electron repulsion over four s primitives in chemist notation: `a`, `b`
/// belong to electron 1 and `c`, `d` to electron 2. The physicist integral
/// `<pq|rs>` is `(pr|qs)`.
pub fn eri_s(
    a: &GaussianPrimitive,
    b: &GaussianPrimitive,
    c: &GaussianPrimitive,
    d: &GaussianPrimitive,
) -> Result<f64> {
    require_s(&[a, b, c, d])?;
    let ab = gaussian_product(a, b);
    let cd = gaussian_product(c, d);
    let (p, q) = (ab.exponent, cd.exponent);
    let t = p * q / (p + q) * dist2(&ab.center, &cd.center);
    let prefactor = 2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt());
    Ok(a.norm * b.norm * c.norm * d.norm * prefactor * ab.prefactor * cd.prefactor * boys_f0(t)?)
}
