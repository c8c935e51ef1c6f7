//! Binary weight snapshots, little-endian throughout.
//!
//! ```text
//! header (48 bytes)
//!   magic          4   b"CMAC"
//!   version        u32
//!   mode           u8  0 = multi, 1 = one
//!   num_actions    u8
//!   reserved       u16 zero
//!   num_layers     u32
//!   angle_width    f64
//!   distance_width f64
//!   capacity       u64 0 for exact storage
//!   count          u64
//! record (32 bytes each, sorted by key)
//!   action   u8
//!   variable u8  0xFF for joint cells, otherwise the variable index
//!   layer    u16
//!   cells    5 x i32 (single-variable cells use the first slot only)
//!   weight   f64
//! ```

use std::io::{self, Read, Write};

use thiserror::Error;

use super::{Cell, CmacMode, CmacNetwork, ReceptiveFieldKey, TilingSpec};

pub const SNAPSHOT_MAGIC: [u8; 4] = *b"CMAC";
pub const SNAPSHOT_VERSION: u32 = 1;

const HEADER_LEN: usize = 48;
const RECORD_LEN: usize = 32;
const JOINT: u8 = 0xFF;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("corrupt snapshot at byte {offset}: {reason}")]
    CorruptSnapshot { offset: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn corrupt(offset: usize, reason: impl Into<String>) -> SnapshotError {
    SnapshotError::CorruptSnapshot {
        offset,
        reason: reason.into(),
    }
}

pub fn save_weights<W: Write>(net: &CmacNetwork, sink: &mut W) -> io::Result<()> {
    let spec = net.spec();
    let weights = net.weights();
    let mut buf = Vec::with_capacity(HEADER_LEN + RECORD_LEN * weights.len());
    buf.extend_from_slice(&SNAPSHOT_MAGIC);
    buf.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    buf.push(match spec.mode {
        CmacMode::MultiDim => 0,
        CmacMode::OneDim => 1,
    });
    buf.push(net.num_actions() as u8);
    buf.extend_from_slice(&0u16.to_le_bytes());
    buf.extend_from_slice(&spec.num_layers.to_le_bytes());
    buf.extend_from_slice(&spec.angle_width.to_le_bytes());
    buf.extend_from_slice(&spec.distance_width.to_le_bytes());
    buf.extend_from_slice(&(net.hashed_capacity().unwrap_or(0) as u64).to_le_bytes());
    buf.extend_from_slice(&(weights.len() as u64).to_le_bytes());

    for (key, w) in weights {
        buf.push(key.action);
        let cells = match key.cell {
            Cell::Joint(c) => {
                buf.push(JOINT);
                c
            }
            Cell::Single { variable, index } => {
                buf.push(variable);
                [index, 0, 0, 0, 0]
            }
        };
        buf.extend_from_slice(&key.layer.to_le_bytes());
        for c in cells {
            buf.extend_from_slice(&c.to_le_bytes());
        }
        buf.extend_from_slice(&w.to_le_bytes());
    }
    sink.write_all(&buf)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self, what: &str) -> Result<[u8; N], SnapshotError> {
        let end = self.pos + N;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| corrupt(self.pos, format!("truncated while reading {what}")))?;
        self.pos = end;
        Ok(slice.try_into().expect("slice length checked"))
    }

    fn u8(&mut self, what: &str) -> Result<u8, SnapshotError> {
        Ok(self.take::<1>(what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16, SnapshotError> {
        Ok(u16::from_le_bytes(self.take(what)?))
    }

    fn u32(&mut self, what: &str) -> Result<u32, SnapshotError> {
        Ok(u32::from_le_bytes(self.take(what)?))
    }

    fn i32(&mut self, what: &str) -> Result<i32, SnapshotError> {
        Ok(i32::from_le_bytes(self.take(what)?))
    }

    fn u64(&mut self, what: &str) -> Result<u64, SnapshotError> {
        Ok(u64::from_le_bytes(self.take(what)?))
    }

    fn f64(&mut self, what: &str) -> Result<f64, SnapshotError> {
        Ok(f64::from_le_bytes(self.take(what)?))
    }
}

pub fn load_weights<R: Read>(source: &mut R) -> Result<CmacNetwork, SnapshotError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let mut cur = Cursor { bytes: &bytes, pos: 0 };

    if cur.take::<4>("magic")? != SNAPSHOT_MAGIC {
        return Err(corrupt(0, "bad magic"));
    }
    let version = cur.u32("version")?;
    if version != SNAPSHOT_VERSION {
        return Err(SnapshotError::VersionMismatch {
            found: version,
            expected: SNAPSHOT_VERSION,
        });
    }
    let mode_at = cur.pos;
    let mode = match cur.u8("mode")? {
        0 => CmacMode::MultiDim,
        1 => CmacMode::OneDim,
        other => return Err(corrupt(mode_at, format!("unknown mode {other}"))),
    };
    let num_actions = cur.u8("action count")?;
    cur.u16("reserved")?;
    let spec = TilingSpec {
        mode,
        num_layers: cur.u32("layer count")?,
        angle_width: cur.f64("angle width")?,
        distance_width: cur.f64("distance width")?,
    };
    let capacity = cur.u64("capacity")? as usize;
    let count_at = cur.pos;
    let count = cur.u64("record count")?;

    let build = if capacity == 0 {
        CmacNetwork::new(spec, usize::from(num_actions))
    } else {
        CmacNetwork::with_hashed_storage(spec, usize::from(num_actions), capacity)
    };
    let mut net = build.map_err(|e| corrupt(8, e.to_string()))?;

    let expected_len = (count as u128) * RECORD_LEN as u128 + HEADER_LEN as u128;
    if expected_len != bytes.len() as u128 {
        if expected_len > bytes.len() as u128 {
            // report where the first incomplete record starts
            let whole = (bytes.len() - HEADER_LEN.min(bytes.len())) / RECORD_LEN;
            return Err(corrupt(
                HEADER_LEN + whole * RECORD_LEN,
                format!("truncated: header announces {count} records, found {whole}"),
            ));
        }
        return Err(corrupt(count_at, "trailing bytes after the last record"));
    }

    for _ in 0..count {
        let at = cur.pos;
        let action = cur.u8("action")?;
        let variable = cur.u8("variable")?;
        let layer = cur.u16("layer")?;
        let mut cells = [0i32; 5];
        for c in &mut cells {
            *c = cur.i32("cell")?;
        }
        let weight = cur.f64("weight")?;
        if usize::from(action) >= net.num_actions() || u32::from(layer) >= spec.num_layers {
            return Err(corrupt(at, "record outside the network's shape"));
        }
        let cell = match (mode, variable) {
            (CmacMode::MultiDim, JOINT) => Cell::Joint(cells),
            (CmacMode::OneDim, v) if usize::from(v) < crate::features::StateFeatures::COUNT => Cell::Single {
                variable: v,
                index: cells[0],
            },
            _ => return Err(corrupt(at, format!("variable tag {variable} invalid for {mode} mode"))),
        };
        net.set_weight(ReceptiveFieldKey { action, layer, cell }, weight);
    }
    Ok(net)
}
