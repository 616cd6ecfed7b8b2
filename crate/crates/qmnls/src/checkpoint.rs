//! Binary state files.
//!
//! Layout (little-endian): magic `QMNLS1` (6 bytes), `u64 n`, `f64 L`,
//! `f64 eps`, `f64 t`, then `n` records of `(f64 re, f64 im)` in physical
//! space with index 0 at `x = -L/2`.
//!
//! Soliton results reuse the same layout with the `t` field repurposed as
//! the frequency `tau`; a metadata CSV sits next to such files.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, Space};
use crate::grid::Grid;

pub const MAGIC: &[u8; 6] = b"QMNLS1";

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub field: Field,
    pub eps: f64,
    /// Time stamp of the state; holds tau for soliton files.
    pub t: f64,
}

/// Write a physical-space field. A frequency-space input is a usage error.
pub fn write(path: &Path, field: &Field, eps: f64, t: f64) -> Result<()> {
    if field.space() != Space::Physical {
        return Err(Error::Usage(
            "checkpoints store physical-space fields; transform first".into(),
        ));
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(field.grid().n() as u64).to_le_bytes())?;
    w.write_all(&field.grid().length().to_le_bytes())?;
    w.write_all(&eps.to_le_bytes())?;
    w.write_all(&t.to_le_bytes())?;
    for z in field.values() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read(path: &Path) -> Result<Checkpoint> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 6];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Format(format!("{}: file too short for magic", path.display())))?;
    if &magic != MAGIC {
        return Err(Error::Format(format!(
            "{}: bad magic {:?}, expected {:?}",
            path.display(),
            magic,
            MAGIC
        )));
    }
    let n = read_u64(&mut r, path)? as usize;
    let length = read_f64(&mut r, path)?;
    let eps = read_f64(&mut r, path)?;
    let t = read_f64(&mut r, path)?;
    let grid = Grid::shared(n, length)
        .map_err(|e| Error::Format(format!("{}: invalid grid header: {e}", path.display())))?;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let re = read_f64(&mut r, path)?;
        let im = read_f64(&mut r, path)?;
        values.push(Complex64::new(re, im));
    }
    let field = Field::new(grid, values, Space::Physical)?;
    if !field.is_finite() {
        return Err(Error::Format(format!(
            "{}: checkpoint contains non-finite samples",
            path.display()
        )));
    }
    Ok(Checkpoint { field, eps, t })
}

fn read_u64(r: &mut impl Read, path: &Path) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)
        .map_err(|_| Error::Format(format!("{}: truncated header", path.display())))?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64(r: &mut impl Read, path: &Path) -> Result<f64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)
        .map_err(|_| Error::Format(format!("{}: truncated payload", path.display())))?;
    Ok(f64::from_le_bytes(buf))
}
