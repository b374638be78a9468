//! Versioned binary weight checkpoints.
//!
//! Layout: magic `DDNN`, format version (u32 LE), channel width
//! (u32 LE), then every parameter block in canonical order as
//! little-endian doubles.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::network::{init_network, Network};
use crate::error::DenoiseError;

const MAGIC: &[u8; 4] = b"DDNN";
const VERSION: u32 = 1;

/// Writes all network weights to `path`.
///
/// Only default-depth networks are supported; the format stores the
/// channel width but fixes the stage count.
pub fn save_checkpoint(net: &Network, path: &Path) -> Result<(), DenoiseError> {
    if net.depth() != super::network::DEPTH {
        return Err(DenoiseError::Checkpoint(format!(
            "cannot save a {}-stage network; the format covers {} stages",
            net.depth(),
            super::network::DEPTH
        )));
    }
    let file = File::create(path).map_err(|e| DenoiseError::io(path, e))?;
    let mut writer = BufWriter::new(file);
    let io_err = |e| DenoiseError::io(path, e);
    writer.write_all(MAGIC).map_err(io_err)?;
    writer.write_all(&VERSION.to_le_bytes()).map_err(io_err)?;
    writer
        .write_all(&(net.channels() as u32).to_le_bytes())
        .map_err(io_err)?;
    for block in 0..net.num_blocks() {
        for offset in 0..net.block_len(block) {
            writer
                .write_all(&net.param(block, offset).to_le_bytes())
                .map_err(io_err)?;
        }
    }
    writer.flush().map_err(io_err)
}

/// Reads a checkpoint back into a network.
pub fn load_checkpoint(path: &Path) -> Result<Network, DenoiseError> {
    let file = File::open(path).map_err(|e| DenoiseError::io(path, e))?;
    let mut reader = BufReader::new(file);
    let bad = |msg: &str| DenoiseError::Checkpoint(format!("{}: {msg}", path.display()));

    let mut magic = [0u8; 4];
    read_exact(&mut reader, &mut magic, path)?;
    if &magic != MAGIC {
        return Err(bad("bad magic bytes"));
    }
    let mut word = [0u8; 4];
    read_exact(&mut reader, &mut word, path)?;
    let version = u32::from_le_bytes(word);
    if version != VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    read_exact(&mut reader, &mut word, path)?;
    let channels = u32::from_le_bytes(word) as usize;
    if channels == 0 {
        return Err(bad("channel width must be positive"));
    }

    let mut net = init_network(0, channels);
    let mut buffer = [0u8; 8];
    for block in 0..net.num_blocks() {
        for offset in 0..net.block_len(block) {
            read_exact(&mut reader, &mut buffer, path)?;
            let value = f64::from_le_bytes(buffer);
            if !value.is_finite() {
                return Err(bad("non-finite parameter"));
            }
            net.set_param(block, offset, value);
        }
    }
    let mut excess = [0u8; 1];
    match reader.read(&mut excess) {
        Ok(0) => Ok(net),
        Ok(_) => Err(bad("trailing bytes after the last parameter")),
        Err(e) => Err(DenoiseError::io(path, e)),
    }
}

fn read_exact(reader: &mut impl Read, buffer: &mut [u8], path: &Path) -> Result<(), DenoiseError> {
    reader.read_exact(buffer).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            DenoiseError::Checkpoint(format!("{}: truncated checkpoint", path.display()))
        } else {
            DenoiseError::io(path, e)
        }
    })
}
