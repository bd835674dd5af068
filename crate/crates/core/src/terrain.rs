//! Terrain aspect and the along-slope vertical wind component.
//!
//! Grid convention used throughout: row index `h` increases northward,
//! column index `w` increases eastward. The aspect angle `theta` is the
//! azimuth of the *upslope* direction, measured clockwise from north, so
//! positive `W_along = u sin(theta) + v cos(theta)` means anabatic
//! (upslope) flow and negative means katabatic.

use ndarray::Array2;

use crate::error::{Error, Result};

/// A slope shallower than this (in m per km) counts as flat.
pub const SLOPE_EPSILON: f64 = 1e-9;

/// Zonal (`u`, positive eastward) and meridional (`v`, positive northward)
/// wind components on the elevation grid, in m/s.
#[derive(Debug, Clone)]
pub struct WindFields {
    pub u: Array2<f64>,
    pub v: Array2<f64>,
}

impl WindFields {
    pub fn new(u: Array2<f64>, v: Array2<f64>) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::shape_mismatch(u.dim(), v.dim()));
        }
        if u.iter().chain(v.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteValue(0));
        }
        Ok(Self { u, v })
    }

    /// Spatially uniform climatological wind.
    pub fn uniform(h: usize, w: usize, u: f64, v: f64) -> Result<Self> {
        Self::new(Array2::from_elem((h, w), u), Array2::from_elem((h, w), v))
    }
}

/// Upslope azimuth per pixel, with a mask marking where it is defined.
#[derive(Debug, Clone)]
pub struct AspectGrid {
    /// Radians in (-pi, pi]; meaningful only where `defined` is true.
    pub theta: Array2<f64>,
    /// False where the slope magnitude is below [`SLOPE_EPSILON`].
    pub defined: Array2<bool>,
}

/// Terrain aspect from an elevation grid (meters) via central differences,
/// one-sided at the borders. Gradients are taken in m per km.
pub fn aspect(elevation: &Array2<f64>, spacing_km: f64) -> Result<AspectGrid> {
    let (h, w) = elevation.dim();
    if h < 3 || w < 3 {
        return Err(Error::GridTooSmall { h, w, min: 3 });
    }
    if !(spacing_km.is_finite() && spacing_km > 0.0) {
        return Err(Error::InvalidInput(format!(
            "grid spacing must be positive, got {spacing_km}"
        )));
    }
    if elevation.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFiniteValue(0));
    }

    let mut theta = Array2::zeros((h, w));
    let mut defined = Array2::from_elem((h, w), false);
    for i in 0..h {
        for j in 0..w {
            // northward gradient: row index increases north
            let gy = if i == 0 {
                (elevation[[1, j]] - elevation[[0, j]]) / spacing_km
            } else if i == h - 1 {
                (elevation[[h - 1, j]] - elevation[[h - 2, j]]) / spacing_km
            } else {
                (elevation[[i + 1, j]] - elevation[[i - 1, j]]) / (2.0 * spacing_km)
            };
            // eastward gradient
            let gx = if j == 0 {
                (elevation[[i, 1]] - elevation[[i, 0]]) / spacing_km
            } else if j == w - 1 {
                (elevation[[i, w - 1]] - elevation[[i, w - 2]]) / spacing_km
            } else {
                (elevation[[i, j + 1]] - elevation[[i, j - 1]]) / (2.0 * spacing_km)
            };
            if (gx * gx + gy * gy).sqrt() >= SLOPE_EPSILON {
                theta[[i, j]] = gx.atan2(gy);
                defined[[i, j]] = true;
            }
        }
    }
    Ok(AspectGrid { theta, defined })
}

/// `W_along = u sin(theta) + v cos(theta)` where the aspect is defined,
/// 0 over flat terrain.
pub fn along_slope_wind(winds: &WindFields, aspect: &AspectGrid) -> Result<Array2<f64>> {
    let dim = aspect.theta.dim();
    if winds.u.dim() != dim {
        return Err(Error::shape_mismatch(winds.u.dim(), dim));
    }
    let (h, w) = dim;
    let mut out = Array2::zeros(dim);
    for i in 0..h {
        for j in 0..w {
            if aspect.defined[[i, j]] {
                let th = aspect.theta[[i, j]];
                out[[i, j]] = winds.u[[i, j]] * th.sin() + winds.v[[i, j]] * th.cos();
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn plane(h: usize, w: usize, f: impl Fn(usize, usize) -> f64) -> Array2<f64> {
        Array2::from_shape_fn((h, w), |(i, j)| f(i, j))
    }

    #[test]
    fn flat_terrain_undefined_everywhere() {
        let asp = aspect(&plane(5, 5, |_, _| 42.0), 1.0).unwrap();
        assert!(asp.defined.iter().all(|d| !d));

        let winds = WindFields::uniform(5, 5, 7.0, -3.0).unwrap();
        let w_along = along_slope_wind(&winds, &asp).unwrap();
        assert!(w_along.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn east_rising_plane_theta_is_half_pi() {
        let asp = aspect(&plane(5, 5, |_, j| 10.0 * j as f64), 1.0).unwrap();
        for v in asp.theta.iter() {
            assert_abs_diff_eq!(*v, FRAC_PI_2, epsilon = 1e-12);
        }
        // u=3 blowing east up the slope: anabatic +3
        let winds = WindFields::uniform(5, 5, 3.0, 0.0).unwrap();
        let w_along = along_slope_wind(&winds, &asp).unwrap();
        for v in w_along.iter() {
            assert_abs_diff_eq!(*v, 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn north_rising_plane_theta_is_zero() {
        let asp = aspect(&plane(5, 5, |i, _| 2.5 * i as f64), 1.0).unwrap();
        for v in asp.theta.iter() {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
        }
        // v=-2 blowing south, down the north-rising slope: katabatic -2
        let winds = WindFields::uniform(5, 5, 0.0, -2.0).unwrap();
        let w_along = along_slope_wind(&winds, &asp).unwrap();
        for v in w_along.iter() {
            assert_abs_diff_eq!(*v, -2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn projection_bound_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let elev = plane(8, 8, |i, j| {
            (i as f64 * 0.7).sin() * 30.0 + (j as f64 * 1.3).cos() * 20.0
        });
        let asp = aspect(&elev, 1.0).unwrap();
        let u = Array2::from_shape_fn((8, 8), |_| rng.gen_range(-10.0..10.0));
        let v = Array2::from_shape_fn((8, 8), |_| rng.gen_range(-10.0..10.0));
        let winds = WindFields::new(u.clone(), v.clone()).unwrap();
        let w_along = along_slope_wind(&winds, &asp).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let speed = (u[[i, j]].powi(2) + v[[i, j]].powi(2)).sqrt();
                assert!(w_along[[i, j]].abs() <= speed + 1e-12);
            }
        }
    }

    #[test]
    fn rotation_invariance_on_uniform_aspect() {
        // rotate both wind and slope azimuth by the same angle: W_along unchanged
        let asp = aspect(&plane(5, 5, |_, j| 10.0 * j as f64), 1.0).unwrap(); // theta = pi/2
        let speed: f64 = 4.0;
        let w0 = {
            let winds = WindFields::uniform(5, 5, speed, 0.0).unwrap();
            along_slope_wind(&winds, &asp).unwrap()[[2, 2]]
        };
        for rot_deg in [30.0_f64, 120.0, 250.0] {
            let rot = rot_deg.to_radians();
            // wind rotated clockwise (azimuth convention) by rot
            let az0 = FRAC_PI_2; // wind initially blowing toward east
            let az = az0 + rot;
            let (u, v) = (speed * az.sin(), speed * az.cos());
            // slope upslope azimuth also rotated by rot
            let th = FRAC_PI_2 + rot;
            let w = u * th.sin() + v * th.cos();
            assert_abs_diff_eq!(w, w0, epsilon = 1e-12);
        }
    }

    #[test]
    fn linear_in_wind() {
        let asp = aspect(&plane(5, 5, |i, j| (i + 2 * j) as f64), 1.0).unwrap();
        let w1 = along_slope_wind(&WindFields::uniform(5, 5, 1.0, 2.0).unwrap(), &asp).unwrap();
        let w2 = along_slope_wind(&WindFields::uniform(5, 5, 3.0, -1.0).unwrap(), &asp).unwrap();
        let w_sum =
            along_slope_wind(&WindFields::uniform(5, 5, 4.0, 1.0).unwrap(), &asp).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_abs_diff_eq!(w1[[i, j]] + w2[[i, j]], w_sum[[i, j]], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn small_grid_rejected() {
        assert!(matches!(
            aspect(&plane(2, 5, |_, _| 0.0), 1.0),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn shape_mismatch_rejected() {
        let asp = aspect(&plane(5, 5, |i, _| i as f64), 1.0).unwrap();
        let winds = WindFields::uniform(4, 5, 1.0, 1.0).unwrap();
        assert!(matches!(
            along_slope_wind(&winds, &asp),
            Err(Error::ShapeMismatch { .. })
        ));
    }
}
