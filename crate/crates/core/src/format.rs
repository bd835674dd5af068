//! The NWC1 sequence file format.
//!
//! Little-endian throughout:
//!
//! | field          | size              | meaning                                |
//! |----------------|-------------------|----------------------------------------|
//! | magic          | 4 bytes           | ASCII `NWC1`                           |
//! | version        | u16               | format version, currently 1            |
//! | T, C, H, W     | 4 x u32           | sequence dimensions                    |
//! | spacing_km     | f64               | km per pixel                           |
//! | normalized     | u8                | 0 physical, 1 normalized               |
//! | channel kinds  | C x u8            | wire codes, see [`ChannelKind::code`]  |
//! | payload        | T*C*H*W x f32     | values, `(t, c, h, w)` row-major       |
//!
//! Writing is bit-exact: identical sequences produce identical bytes. The
//! payload is `f32`; in-memory `f64` values are rounded once on write.

use std::io::{Read, Write};

use ndarray::Array4;

use crate::error::{Error, Result};
use crate::grid::{ChannelKind, DomainSpec, FieldSequence};

const MAGIC: &[u8; 4] = b"NWC1";
const VERSION: u16 = 1;

/// Serialize a sequence. Returns the number of bytes written.
pub fn write_sequence<W: Write>(seq: &FieldSequence, sink: &mut W) -> Result<u64> {
    let (t, c, h, w) = seq.frames().dim();
    let mut count: u64 = 0;
    let mut put = |sink: &mut W, bytes: &[u8]| -> Result<()> {
        sink.write_all(bytes)?;
        count += bytes.len() as u64;
        Ok(())
    };

    put(sink, MAGIC)?;
    put(sink, &VERSION.to_le_bytes())?;
    for dim in [t, c, h, w] {
        put(sink, &(dim as u32).to_le_bytes())?;
    }
    put(sink, &seq.domain().spacing_km.to_le_bytes())?;
    put(sink, &[seq.is_normalized() as u8])?;
    for kind in seq.channels() {
        put(sink, &[kind.code()])?;
    }
    // Standard layout guarantees (t, c, h, w) row-major iteration order.
    for v in seq.frames().iter() {
        put(sink, &(*v as f32).to_le_bytes())?;
    }
    Ok(count)
}

/// Deserialize a sequence, rejecting truncated or corrupt streams.
pub fn read_sequence<R: Read>(source: &mut R) -> Result<FieldSequence> {
    let mut magic = [0u8; 4];
    read_exact(source, &mut magic)?;
    if &magic != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = u16::from_le_bytes(read_array(source)?);
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let t = u32::from_le_bytes(read_array(source)?) as usize;
    let c = u32::from_le_bytes(read_array(source)?) as usize;
    let h = u32::from_le_bytes(read_array(source)?) as usize;
    let w = u32::from_le_bytes(read_array(source)?) as usize;
    let spacing_km = f64::from_le_bytes(read_array(source)?);
    let normalized = match u8::from_le_bytes(read_array(source)?) {
        0 => false,
        1 => true,
        other => {
            return Err(Error::InvalidInput(format!(
                "normalized flag must be 0 or 1, got {other}"
            )))
        }
    };
    let mut channels = Vec::with_capacity(c);
    for _ in 0..c {
        let code = u8::from_le_bytes(read_array(source)?);
        channels.push(
            ChannelKind::from_code(code)
                .ok_or_else(|| Error::InvalidInput(format!("unknown channel code {code}")))?,
        );
    }

    let n_values = t
        .checked_mul(c)
        .and_then(|n| n.checked_mul(h))
        .and_then(|n| n.checked_mul(w))
        .ok_or_else(|| Error::InvalidInput("dimension product overflows".into()))?;
    let n_bytes = n_values
        .checked_mul(4)
        .ok_or_else(|| Error::InvalidInput("payload size overflows".into()))?;

    // Bounded read: a corrupt header cannot trigger a huge up-front allocation.
    let mut payload = Vec::new();
    source
        .take(n_bytes as u64)
        .read_to_end(&mut payload)
        .map_err(Error::Io)?;
    if payload.len() < n_bytes {
        return Err(Error::TruncatedPayload {
            expected: n_bytes,
            got: payload.len(),
        });
    }

    let mut values = Vec::with_capacity(n_values);
    for (i, chunk) in payload.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(Error::NonFiniteValue(i));
        }
        values.push(v as f64);
    }

    let frames = Array4::from_shape_vec((t, c, h, w), values)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let domain = DomainSpec::new(h, w, spacing_km)?;
    FieldSequence::new(frames, channels, domain, normalized)
}

fn read_exact<R: Read>(source: &mut R, buf: &mut [u8]) -> Result<()> {
    let mut filled = 0;
    while filled < buf.len() {
        let n = source.read(&mut buf[filled..])?;
        if n == 0 {
            return Err(Error::TruncatedPayload {
                expected: buf.len(),
                got: filled,
            });
        }
        filled += n;
    }
    Ok(())
}

fn read_array<R: Read, const N: usize>(source: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    read_exact(source, &mut buf)?;
    Ok(buf)
}
