//! Deterministic synthetic radar scenes with closed-form ground truth.
//!
//! Gaussian storm blobs under linear advection and growth give every
//! downstream module — advection, verification, the loss — an exact
//! answer to test against.

use ndarray::Array4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ChannelKind, DomainSpec, FieldSequence};
use crate::terrain::{along_slope_wind, aspect, WindFields};

/// One Gaussian storm blob.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StormSpec {
    /// Initial center `(h, w)` in pixels.
    pub center: (f64, f64),
    /// Peak reflectivity in dBZ, in (0, 70].
    pub amplitude_dbz: f64,
    /// Gaussian width in pixels, > 0.
    pub sigma_px: f64,
    /// Center displacement `(dh, dw)` in pixels per frame.
    #[serde(default)]
    pub velocity: (f64, f64),
    /// Peak change in dBZ per frame; may be negative.
    #[serde(default)]
    pub growth_dbz_per_frame: f64,
}

impl StormSpec {
    fn validate(&self) -> Result<()> {
        if !(self.amplitude_dbz > 0.0 && self.amplitude_dbz <= 70.0) {
            return Err(Error::InvalidInput(format!(
                "storm amplitude must be in (0, 70] dBZ, got {}",
                self.amplitude_dbz
            )));
        }
        if !(self.sigma_px > 0.0 && self.sigma_px.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "storm sigma must be positive, got {}",
                self.sigma_px
            )));
        }
        let finite = [
            self.center.0,
            self.center.1,
            self.velocity.0,
            self.velocity.1,
            self.growth_dbz_per_frame,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("storm spec has non-finite fields".into()));
        }
        Ok(())
    }
}

/// Synthetic elevation: a tilted plane `base + slope_north*h + slope_east*w`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PlaneSpec {
    pub base_m: f64,
    /// Meters gained per pixel northward (increasing row index).
    pub slope_north_m_per_px: f64,
    /// Meters gained per pixel eastward (increasing column index).
    pub slope_east_m_per_px: f64,
}

/// Generate a `T x 1 x H x W` physical radar sequence.
///
/// Frame `t` is `clamp(sum_storms amp_t * exp(-d^2 / (2 sigma^2)) + noise, 0, 70)`
/// with centers advanced by `t * velocity` and `amp_t = clamp(amp + t*growth, 0, 70)`.
/// Values are quantized to `f32` so file round trips are exact.
pub fn generate(
    storms: &[StormSpec],
    frames: usize,
    domain: &DomainSpec,
    seed: u64,
    noise_dbz: f64,
) -> Result<FieldSequence> {
    if frames == 0 {
        return Err(Error::InvalidInput("need at least one frame".into()));
    }
    if !(noise_dbz >= 0.0 && noise_dbz.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "noise amplitude must be a nonnegative real, got {noise_dbz}"
        )));
    }
    for s in storms {
        s.validate()?;
    }

    let (h, w) = (domain.height_px, domain.width_px);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arr = Array4::zeros((frames, 1, h, w));
    for t in 0..frames {
        for i in 0..h {
            for j in 0..w {
                let mut v = 0.0;
                for s in storms {
                    let amp = (s.amplitude_dbz + t as f64 * s.growth_dbz_per_frame)
                        .clamp(0.0, 70.0);
                    let ch = s.center.0 + t as f64 * s.velocity.0;
                    let cw = s.center.1 + t as f64 * s.velocity.1;
                    let d2 = (i as f64 - ch).powi(2) + (j as f64 - cw).powi(2);
                    v += amp * (-d2 / (2.0 * s.sigma_px * s.sigma_px)).exp();
                }
                if noise_dbz > 0.0 {
                    v += noise_dbz * standard_normal(&mut rng);
                }
                arr[[t, 0, i, j]] = (v.clamp(0.0, 70.0) as f32) as f64;
            }
        }
    }
    FieldSequence::new(arr, vec![ChannelKind::RadarDbz], *domain, false)
}

/// Expand a radar sequence to the four-channel input configuration:
/// `[RadarDbz, PrecipRate, Elevation, AlongSlopeWind]`, physical units.
///
/// The precipitation channel is the linear proxy `radar / 70 * 10`; the two
/// static channels are constant over time.
pub fn make_four_channel(
    radar: &FieldSequence,
    plane: &PlaneSpec,
    wind_u: f64,
    wind_v: f64,
) -> Result<FieldSequence> {
    if radar.is_normalized() {
        return Err(Error::AlreadyNormalized);
    }
    if radar.channel_count() != 1 || radar.channels()[0] != ChannelKind::RadarDbz {
        return Err(Error::InvalidInput(
            "four-channel expansion needs a single RadarDbz channel".into(),
        ));
    }
    if ![plane.base_m, plane.slope_north_m_per_px, plane.slope_east_m_per_px, wind_u, wind_v]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(Error::InvalidInput("non-finite plane or wind parameters".into()));
    }

    let (t_len, _, h, w) = radar.frames().dim();
    let elevation = ndarray::Array2::from_shape_fn((h, w), |(i, j)| {
        let z = plane.base_m
            + plane.slope_north_m_per_px * i as f64
            + plane.slope_east_m_per_px * j as f64;
        (z as f32) as f64
    });
    let asp = aspect(&elevation, radar.domain().spacing_km)?;
    let winds = WindFields::uniform(h, w, wind_u, wind_v)?;
    let w_along = along_slope_wind(&winds, &asp)?;

    let mut arr = Array4::zeros((t_len, 4, h, w));
    for t in 0..t_len {
        for i in 0..h {
            for j in 0..w {
                let dbz = radar.frames()[[t, 0, i, j]];
                arr[[t, 0, i, j]] = dbz;
                arr[[t, 1, i, j]] = ((dbz / 70.0 * 10.0) as f32) as f64;
                arr[[t, 2, i, j]] = elevation[[i, j]];
                arr[[t, 3, i, j]] = (w_along[[i, j]] as f32) as f64;
            }
        }
    }
    FieldSequence::new(
        arr,
        vec![
            ChannelKind::RadarDbz,
            ChannelKind::PrecipRate,
            ChannelKind::Elevation,
            ChannelKind::AlongSlopeWind,
        ],
        *radar.domain(),
        false,
    )
}

/// Box-Muller transform over two ChaCha uniforms.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
