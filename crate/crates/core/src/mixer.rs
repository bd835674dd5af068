//! Parameter-free geometric channel permutation.
//!
//! The grid is partitioned into non-overlapping `s x s` cells
//! (`s = ceil(sqrt(C))`). Mixed channel `k` draws the value at in-cell
//! position `(p, q)` from source channel `sigma_k(p, q) = (s*p + q + k) mod C`.
//! For square `C` this family is a Latin square in both directions, which is
//! what makes [`unmix`] an exact inverse.

use ndarray::Array4;

use crate::error::{Error, Result};
use crate::grid::{ChannelKind, FieldSequence};

/// Cell geometry and permutation rule for one channel count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixerSpec {
    channel_count: usize,
    cell_size: usize,
}

impl MixerSpec {
    /// Build a spec for `channel_count` source channels.
    ///
    /// Only exact squares are accepted; the mosaic rule for ragged cells
    /// is deliberately left out.
    pub fn new(channel_count: usize) -> Result<Self> {
        if channel_count == 0 {
            return Err(Error::InvalidInput("channel count must be positive".into()));
        }
        let cell_size = (channel_count as f64).sqrt().ceil() as usize;
        if cell_size * cell_size != channel_count {
            return Err(Error::WrongChannelCount {
                expected: cell_size * cell_size,
                got: channel_count,
            });
        }
        Ok(Self {
            channel_count,
            cell_size,
        })
    }

    /// The four-channel radar/precip/terrain/wind configuration.
    pub fn four_channel() -> Self {
        Self::new(4).expect("4 is a square")
    }

    pub fn channel_count(&self) -> usize {
        self.channel_count
    }

    pub fn cell_size(&self) -> usize {
        self.cell_size
    }

    /// Source channel feeding in-cell position `(p, q)` of mixed channel `k`.
    pub fn source_channel(&self, k: usize, p: usize, q: usize) -> usize {
        (self.cell_size * p + q + k) % self.channel_count
    }

    /// Mixed channel holding source channel `c` at in-cell position `(p, q)`.
    pub fn mixed_channel(&self, c: usize, p: usize, q: usize) -> usize {
        let cc = self.channel_count;
        (c + cc - (self.cell_size * p + q) % cc) % cc
    }
}

/// Fuse `C` channels into `C + 1`: the untouched channel 0 followed by
/// the `C` mixed channels.
pub fn mix(seq: &FieldSequence, spec: &MixerSpec) -> Result<FieldSequence> {
    let (t_len, c, h, w) = seq.frames().dim();
    if c != spec.channel_count() {
        return Err(Error::WrongChannelCount {
            expected: spec.channel_count(),
            got: c,
        });
    }
    if !seq.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let s = spec.cell_size();
    if h % s != 0 || w % s != 0 {
        return Err(Error::PadRequired { h, w, cell: s });
    }

    let src = seq.frames();
    let mut out = Array4::zeros((t_len, c + 1, h, w));
    for t in 0..t_len {
        for hh in 0..h {
            let p = hh % s;
            for ww in 0..w {
                let q = ww % s;
                out[[t, 0, hh, ww]] = src[[t, 0, hh, ww]];
                for k in 0..c {
                    out[[t, k + 1, hh, ww]] = src[[t, spec.source_channel(k, p, q), hh, ww]];
                }
            }
        }
    }

    let mut channels = Vec::with_capacity(c + 1);
    channels.push(seq.channels()[0]);
    channels.extend(std::iter::repeat(ChannelKind::Mixed).take(c));
    FieldSequence::new(out, channels, *seq.domain(), true)
}

/// Exact inverse of [`mix`].
///
/// The mixed file carries only `[kind0, Mixed, ...]`, so the caller supplies
/// the channel semantics of the reconstructed sequence.
pub fn unmix(
    mixed: &FieldSequence,
    spec: &MixerSpec,
    channels: &[ChannelKind],
) -> Result<FieldSequence> {
    let (t_len, c_plus_1, h, w) = mixed.frames().dim();
    let c = spec.channel_count();
    if c_plus_1 != c + 1 {
        return Err(Error::WrongChannelCount {
            expected: c + 1,
            got: c_plus_1,
        });
    }
    if channels.len() != c {
        return Err(Error::WrongChannelCount {
            expected: c,
            got: channels.len(),
        });
    }
    let s = spec.cell_size();
    if h % s != 0 || w % s != 0 {
        return Err(Error::PadRequired { h, w, cell: s });
    }

    let src = mixed.frames();
    let mut out = Array4::zeros((t_len, c, h, w));
    for t in 0..t_len {
        for hh in 0..h {
            let p = hh % s;
            for ww in 0..w {
                let q = ww % s;
                for ch in 0..c {
                    let k = spec.mixed_channel(ch, p, q);
                    out[[t, ch, hh, ww]] = src[[t, k + 1, hh, ww]];
                }
            }
        }
    }
    FieldSequence::new(out, channels.to_vec(), *mixed.domain(), mixed.is_normalized())
}
