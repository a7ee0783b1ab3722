//! Binary field snapshots.
//!
//! Layout, all little-endian:
//!
//! ```text
//! offset  size  content
//! 0       4     magic "SPFD"
//! 4       4     u32 grid size N
//! 8       8     f64 period L
//! 16      4     u32 component count (1 or 2)
//! 20      4     u32 representation (0 = physical, 1 = spectral)
//! 24      ...   component blocks, row-major f64; spectral data stores
//!               (re, im) pairs
//! ```

use std::fs;
use std::path::Path;

use rustfft::num_complex::Complex64;

use super::{Grid, SpectralField};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"SPFD";
const HEADER_LEN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical = 0,
    Spectral = 1,
}

pub fn encode(field: &SpectralField, repr: Representation) -> Vec<u8> {
    let g = field.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * g.len() * field.components());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    out.extend_from_slice(&g.length().to_le_bytes());
    out.extend_from_slice(&(field.components() as u32).to_le_bytes());
    out.extend_from_slice(&(repr as u32).to_le_bytes());
    match repr {
        Representation::Physical => {
            for c in field.physical().iter() {
                for v in c {
                    out.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
        Representation::Spectral => {
            for c in field.spectral().iter() {
                for v in c {
                    out.extend_from_slice(&v.re.to_le_bytes());
                    out.extend_from_slice(&v.im.to_le_bytes());
                }
            }
        }
    }
    out
}

pub fn decode(bytes: &[u8], origin: &Path) -> Result<SpectralField> {
    let bad = |m: &str| Error::format(origin, m);
    if bytes.len() < HEADER_LEN || &bytes[0..4] != MAGIC {
        return Err(bad("missing SPFD header"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let n = u32_at(4) as usize;
    let length = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let ncomp = u32_at(16) as usize;
    let repr = u32_at(20);
    let grid = Grid::new(n, length).map_err(|e| bad(&e.to_string()))?;
    if ncomp != 1 && ncomp != 2 {
        return Err(bad(&format!("component count {ncomp}")));
    }
    let per = match repr {
        0 => 8,
        1 => 16,
        _ => return Err(bad(&format!("unknown representation flag {repr}"))),
    };
    let want = HEADER_LEN + per * grid.len() * ncomp;
    if bytes.len() != want {
        return Err(bad(&format!("expected {want} bytes, found {}", bytes.len())));
    }
    let mut vals = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let field = if repr == 0 {
        let comps = (0..ncomp).map(|_| vals.by_ref().take(grid.len()).collect()).collect();
        SpectralField::from_physical(grid, comps)
    } else {
        let comps = (0..ncomp)
            .map(|_| {
                (0..grid.len())
                    .map(|_| {
                        let re = vals.next().unwrap();
                        Complex64::new(re, vals.next().unwrap())
                    })
                    .collect()
            })
            .collect();
        SpectralField::from_spectral(grid, comps)
    };
    field.map_err(|e| bad(&e.to_string()))
}

pub fn write(path: &Path, field: &SpectralField, repr: Representation) -> Result<()> {
    fs::write(path, encode(field, repr)).map_err(|e| Error::io(path, e))
}

pub fn read(path: &Path) -> Result<SpectralField> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_both_representations() {
        let g = Grid::periodic(8).unwrap();
        let f = SpectralField::scalar_from_fn(g, |x, y| x.sin() + (2.0 * y).cos());
        for repr in [Representation::Physical, Representation::Spectral] {
            let bytes = encode(&f, repr);
            let back = decode(&bytes, Path::new("mem")).unwrap();
            let (a, b) = (f.scalar_physical(), back.scalar_physical());
            for (x, y) in a.iter().zip(b.iter()) {
                assert!((x - y).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_truncated() {
        let g = Grid::periodic(8).unwrap();
        let f = SpectralField::zeros(g, 1);
        let bytes = encode(&f, Representation::Physical);
        let err = decode(&bytes[..bytes.len() - 1], Path::new("x.bin")).unwrap_err();
        assert!(matches!(err, Error::Format { .. }));
        assert!(decode(b"nope", Path::new("x.bin")).is_err());
    }
}
