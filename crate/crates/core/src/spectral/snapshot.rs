//! Binary field snapshots.
//!
//! Layout (little-endian): magic `LQF1`, `N: u32`, `L: f64`, `rank: u8`,
//! then `3^rank · N³` complex128 spectral coefficients, component-major,
//! row-major in the FFT axis-index order within each component.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::{components_for_rank, Field};
use super::grid::{make_grid, Grid};
use super::SpectralError;

const MAGIC: &[u8; 4] = b"LQF1";

pub fn write_snapshot(field: &Field, path: &Path) -> Result<(), SpectralError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    file.write_all(MAGIC)?;
    file.write_all(&(field.grid().points_per_axis() as u32).to_le_bytes())?;
    file.write_all(&field.grid().box_length().to_le_bytes())?;
    file.write_all(&[field.rank()])?;
    for v in field.raw() {
        file.write_all(&v.re.to_le_bytes())?;
        file.write_all(&v.im.to_le_bytes())?;
    }
    file.flush()?;
    Ok(())
}

/// Read a snapshot, rebuilding the grid recorded in the header.
pub fn read_snapshot(path: &Path) -> Result<Field, SpectralError> {
    let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    file.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SpectralError::SnapshotFormat("bad magic".into()));
    }
    let mut b4 = [0u8; 4];
    file.read_exact(&mut b4)?;
    let n = u32::from_le_bytes(b4) as usize;
    let mut b8 = [0u8; 8];
    file.read_exact(&mut b8)?;
    let box_length = f64::from_le_bytes(b8);
    let mut b1 = [0u8; 1];
    file.read_exact(&mut b1)?;
    let rank = b1[0];
    if rank > 2 {
        return Err(SpectralError::SnapshotFormat(format!("rank {rank} out of range")));
    }
    let grid = make_grid(n, box_length)?;
    read_coefficients(&mut file, &grid, rank)
}

/// Read a snapshot onto an existing grid, requiring a matching header.
pub fn read_snapshot_on(path: &Path, grid: &Grid) -> Result<Field, SpectralError> {
    let field = read_snapshot(path)?;
    if field.grid().as_ref() != grid.as_ref() {
        return Err(SpectralError::SnapshotFormat(format!(
            "snapshot grid N={}, L={} does not match N={}, L={}",
            field.grid().points_per_axis(),
            field.grid().box_length(),
            grid.points_per_axis(),
            grid.box_length()
        )));
    }
    Ok(field)
}

fn read_coefficients<R: Read>(src: &mut R, grid: &Grid, rank: u8) -> Result<Field, SpectralError> {
    let count = components_for_rank(rank) * grid.len();
    let mut data = Vec::with_capacity(count);
    let mut b8 = [0u8; 8];
    for _ in 0..count {
        src.read_exact(&mut b8)?;
        let re = f64::from_le_bytes(b8);
        src.read_exact(&mut b8)?;
        let im = f64::from_le_bytes(b8);
        data.push(Complex64::new(re, im));
    }
    Field::from_spectral(grid, rank, data)
}
