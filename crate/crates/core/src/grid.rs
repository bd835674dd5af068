//! Gridded-field data model and per-channel normalization conventions.
//!
//! A [`FieldSequence`] is a `T x C x H x W` stack of co-registered fields.
//! Values are held in `f64` for computation; the on-disk payload is `f32`
//! (see [`crate::format`]). Index order is `(t, c, h, w)` row-major.

use ndarray::{Array3, Array4, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial grid description: pixel counts and km-per-pixel spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub height_px: usize,
    pub width_px: usize,
    pub spacing_km: f64,
}

impl DomainSpec {
    pub fn new(height_px: usize, width_px: usize, spacing_km: f64) -> Result<Self> {
        if height_px < 2 || width_px < 2 {
            return Err(Error::InvalidInput(format!(
                "domain must be at least 2x2, got {height_px}x{width_px}"
            )));
        }
        if !(spacing_km.is_finite() && spacing_km > 0.0) {
            return Err(Error::InvalidInput(format!(
                "grid spacing must be a positive real, got {spacing_km}"
            )));
        }
        Ok(Self {
            height_px,
            width_px,
            spacing_km,
        })
    }

    /// 1 km pixels, the common radar-mosaic convention.
    pub fn with_unit_spacing(height_px: usize, width_px: usize) -> Result<Self> {
        Self::new(height_px, width_px, 1.0)
    }
}

/// Channel semantics. Each kind carries a fixed normalization scale so
/// that heterogeneous channels land on comparable magnitudes and the
/// transform stays invertible without sidecar statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    /// Radar composite reflectivity, physical range 0..70 dBZ.
    RadarDbz,
    /// Surface precipitation rate, physical range 0..10 mm per 6 min.
    PrecipRate,
    /// Topographic elevation in meters.
    Elevation,
    /// Along-slope vertical wind component in m/s.
    AlongSlopeWind,
    /// Output of the spatial mixer; no physical range.
    Mixed,
    /// Anything else (gradients, attention maps, ...).
    Generic,
}

impl ChannelKind {
    /// Fixed normalization scale for this kind.
    pub fn scale(self) -> f64 {
        match self {
            ChannelKind::RadarDbz => 70.0,
            ChannelKind::PrecipRate => 10.0,
            ChannelKind::Elevation => 1000.0,
            ChannelKind::AlongSlopeWind => 10.0,
            ChannelKind::Mixed | ChannelKind::Generic => 1.0,
        }
    }

    /// Physical range enforced by [`FieldSequence::normalize`], if any.
    pub fn physical_range(self) -> Option<(f64, f64)> {
        match self {
            ChannelKind::RadarDbz => Some((0.0, 70.0)),
            ChannelKind::PrecipRate => Some((0.0, 10.0)),
            _ => None,
        }
    }

    /// Wire code used by the NWC1 format.
    pub fn code(self) -> u8 {
        match self {
            ChannelKind::RadarDbz => 0,
            ChannelKind::PrecipRate => 1,
            ChannelKind::Elevation => 2,
            ChannelKind::AlongSlopeWind => 3,
            ChannelKind::Mixed => 4,
            ChannelKind::Generic => 5,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            0 => ChannelKind::RadarDbz,
            1 => ChannelKind::PrecipRate,
            2 => ChannelKind::Elevation,
            3 => ChannelKind::AlongSlopeWind,
            4 => ChannelKind::Mixed,
            5 => ChannelKind::Generic,
            _ => return None,
        })
    }
}

/// A time-ordered stack of gridded fields with channel semantics.
///
/// Immutable after construction; all transforms return new sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSequence {
    frames: Array4<f64>,
    channels: Vec<ChannelKind>,
    domain: DomainSpec,
    normalized: bool,
}

impl FieldSequence {
    /// Build a sequence, rejecting non-finite values and shape errors.
    pub fn new(
        frames: Array4<f64>,
        channels: Vec<ChannelKind>,
        domain: DomainSpec,
        normalized: bool,
    ) -> Result<Self> {
        let (t, c, h, w) = frames.dim();
        if t < 1 || c < 1 {
            return Err(Error::InvalidInput(format!(
                "need at least one frame and one channel, got T={t}, C={c}"
            )));
        }
        if channels.len() != c {
            return Err(Error::WrongChannelCount {
                expected: c,
                got: channels.len(),
            });
        }
        if h != domain.height_px || w != domain.width_px {
            return Err(Error::shape_mismatch((h, w), (domain.height_px, domain.width_px)));
        }
        if let Some(idx) = frames.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(idx));
        }
        Ok(Self {
            frames,
            channels,
            domain,
            normalized,
        })
    }

    pub fn frame_count(&self) -> usize {
        self.frames.dim().0
    }

    pub fn channel_count(&self) -> usize {
        self.frames.dim().1
    }

    pub fn height(&self) -> usize {
        self.frames.dim().2
    }

    pub fn width(&self) -> usize {
        self.frames.dim().3
    }

    pub fn frames(&self) -> &Array4<f64> {
        &self.frames
    }

    pub fn channels(&self) -> &[ChannelKind] {
        &self.channels
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// View of one frame of one channel.
    pub fn frame(&self, t: usize, c: usize) -> ArrayView2<'_, f64> {
        self.frames.index_axis(ndarray::Axis(0), t).index_axis(ndarray::Axis(0), c)
    }

    /// Owned copy of one channel as a `T x H x W` stack.
    pub fn channel(&self, c: usize) -> Array3<f64> {
        self.frames.index_axis(ndarray::Axis(1), c).to_owned()
    }

    /// Divide each channel by its kind's fixed scale.
    ///
    /// Values must sit inside the channel's physical range where one is
    /// defined (RadarDbz 0..70, PrecipRate 0..10).
    pub fn normalize(&self) -> Result<FieldSequence> {
        if self.normalized {
            return Err(Error::AlreadyNormalized);
        }
        for (c, kind) in self.channels.iter().enumerate() {
            if let Some((min, max)) = kind.physical_range() {
                for v in self.frames.index_axis(ndarray::Axis(1), c).iter() {
                    if *v < min || *v > max {
                        return Err(Error::OutOfRange {
                            channel: c,
                            value: *v,
                            min,
                            max,
                        });
                    }
                }
            }
        }
        let mut frames = self.frames.clone();
        for (c, kind) in self.channels.iter().enumerate() {
            let scale = kind.scale();
            frames
                .index_axis_mut(ndarray::Axis(1), c)
                .mapv_inplace(|v| v / scale);
        }
        Ok(FieldSequence {
            frames,
            channels: self.channels.clone(),
            domain: self.domain,
            normalized: true,
        })
    }

    /// Exact inverse of [`FieldSequence::normalize`] up to 64-bit rounding.
    pub fn denormalize(&self) -> Result<FieldSequence> {
        if !self.normalized {
            return Err(Error::NotNormalized);
        }
        let mut frames = self.frames.clone();
        for (c, kind) in self.channels.iter().enumerate() {
            let scale = kind.scale();
            frames
                .index_axis_mut(ndarray::Axis(1), c)
                .mapv_inplace(|v| v * scale);
        }
        Ok(FieldSequence {
            frames,
            channels: self.channels.clone(),
            domain: self.domain,
            normalized: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array4;

    fn radar_seq(values: &[f64]) -> FieldSequence {
        let n = values.len().max(2);
        let mut arr = Array4::zeros((1, 1, 2, n));
        for (i, v) in values.iter().enumerate() {
            arr[[0, 0, 0, i]] = *v;
            arr[[0, 0, 1, i]] = *v;
        }
        FieldSequence::new(
            arr,
            vec![ChannelKind::RadarDbz],
            DomainSpec::with_unit_spacing(2, n).unwrap(),
            false,
        )
        .unwrap()
    }

    #[test]
    fn normalize_scale_endpoints() {
        let seq = radar_seq(&[70.0, 35.0, 0.0]);
        let norm = seq.normalize().unwrap();
        assert_eq!(norm.frames()[[0, 0, 0, 0]], 1.0);
        assert_eq!(norm.frames()[[0, 0, 0, 1]], 0.5);
        assert_eq!(norm.frames()[[0, 0, 0, 2]], 0.0);
    }

    #[test]
    fn precip_endpoint_and_elevation() {
        let mut arr = Array4::zeros((1, 2, 2, 2));
        arr[[0, 0, 0, 0]] = 10.0; // precip max
        arr[[0, 1, 0, 0]] = 100.0; // elevation 100 m
        let seq = FieldSequence::new(
            arr,
            vec![ChannelKind::PrecipRate, ChannelKind::Elevation],
            DomainSpec::with_unit_spacing(2, 2).unwrap(),
            false,
        )
        .unwrap();
        let norm = seq.normalize().unwrap();
        assert_eq!(norm.frames()[[0, 0, 0, 0]], 1.0);
        assert!((norm.frames()[[0, 1, 0, 0]] - 0.1).abs() < 1e-15);
        let back = norm.denormalize().unwrap();
        assert!((back.frames()[[0, 1, 0, 0]] - 100.0).abs() < 1e-10);
    }

    #[test]
    fn round_trip_within_1e12() {
        let seq = radar_seq(&[0.3, 17.25, 69.9, 42.0]);
        let back = seq.normalize().unwrap().denormalize().unwrap();
        for (a, b) in seq.frames().iter().zip(back.frames().iter()) {
            let rel = (a - b).abs() / a.abs().max(1.0);
            assert!(rel < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn double_normalize_rejected() {
        let norm = radar_seq(&[10.0]).normalize().unwrap();
        assert!(matches!(norm.normalize(), Err(Error::AlreadyNormalized)));
        assert!(matches!(
            radar_seq(&[10.0]).denormalize(),
            Err(Error::NotNormalized)
        ));
    }

    #[test]
    fn out_of_range_radar_rejected() {
        let seq = radar_seq(&[71.0]);
        match seq.normalize() {
            Err(Error::OutOfRange { channel: 0, max, .. }) => assert_eq!(max, 70.0),
            other => panic!("expected OutOfRange, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_rejected() {
        let mut arr = Array4::zeros((1, 1, 2, 2));
        arr[[0, 0, 1, 1]] = f64::NAN;
        let res = FieldSequence::new(
            arr,
            vec![ChannelKind::Generic],
            DomainSpec::with_unit_spacing(2, 2).unwrap(),
            false,
        );
        assert!(matches!(res, Err(Error::NonFiniteValue(3))));
    }

    #[test]
    fn channel_list_length_checked() {
        let arr = Array4::zeros((1, 2, 2, 2));
        let res = FieldSequence::new(
            arr,
            vec![ChannelKind::Generic],
            DomainSpec::with_unit_spacing(2, 2).unwrap(),
            false,
        );
        assert!(matches!(res, Err(Error::WrongChannelCount { expected: 2, got: 1 })));
    }
}
