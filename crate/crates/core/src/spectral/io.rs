//! Flat little-endian binary format for fields.
//!
//! Header: magic `ANTK`, then five `u32`: version, `n_x1`, `n_x2`, `n_theta`
//! (0 for spatial fields) and the representation flag (0 physical,
//! 1 Fourier). The payload is row-major `f64` values or interleaved
//! `(re, im)` pairs in the half-spectrum layout of [`SpectralGrid`].

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::{FieldData, SpatialField2, SpectralField3};
use super::grid::SpectralGrid;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"ANTK";
pub const VERSION: u32 = 1;

fn write_header(w: &mut impl Write, dims: [u32; 3], data: &FieldData) -> Result<()> {
    w.write_all(MAGIC)?;
    let flag = match data {
        FieldData::Physical(_) => 0u32,
        FieldData::Fourier(_) => 1u32,
    };
    for v in [VERSION, dims[0], dims[1], dims[2], flag] {
        w.write_all(&v.to_le_bytes())?;
    }
    match data {
        FieldData::Physical(v) => {
            for x in v {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        FieldData::Fourier(c) => {
            for z in c {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

struct Header {
    dims: [usize; 3],
    fourier: bool,
}

fn bad(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_header(r: &mut impl Read, path: &Path) -> Result<Header> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad(path, "missing ANTK magic"));
    }
    let version = read_u32(r)?;
    if version != VERSION {
        return Err(bad(path, format!("unsupported version {version}")));
    }
    let dims = [
        read_u32(r)? as usize,
        read_u32(r)? as usize,
        read_u32(r)? as usize,
    ];
    let fourier = match read_u32(r)? {
        0 => false,
        1 => true,
        f => return Err(bad(path, format!("unknown representation flag {f}"))),
    };
    Ok(Header { dims, fourier })
}

fn read_payload(r: &mut impl Read, fourier: bool, len: usize, path: &Path) -> Result<FieldData> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let want = if fourier { 16 * len } else { 8 * len };
    if bytes.len() != want {
        return Err(bad(
            path,
            format!("payload has {} bytes, expected {want}", bytes.len()),
        ));
    }
    let mut xs = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")));
    Ok(if fourier {
        let mut out = Vec::with_capacity(len);
        while let (Some(re), Some(im)) = (xs.next(), xs.next()) {
            out.push(Complex64::new(re, im));
        }
        FieldData::Fourier(out)
    } else {
        FieldData::Physical(xs.collect())
    })
}

pub fn write_field3(path: &Path, u: &SpectralField3) -> Result<()> {
    let g = u.grid();
    let mut w = BufWriter::new(File::create(path)?);
    write_header(
        &mut w,
        [g.n_x1 as u32, g.n_x2 as u32, g.n_theta as u32],
        u.data(),
    )?;
    w.flush()?;
    Ok(())
}

pub fn read_field3(path: &Path) -> Result<SpectralField3> {
    let mut r = BufReader::new(File::open(path)?);
    let h = read_header(&mut r, path)?;
    if h.dims[2] == 0 {
        return Err(bad(path, "file holds a spatial field"));
    }
    let g = SpectralGrid::new(h.dims[0], h.dims[1], h.dims[2])?;
    let len = if h.fourier { g.fourier_len() } else { g.len() };
    match read_payload(&mut r, h.fourier, len, path)? {
        FieldData::Physical(v) => SpectralField3::physical(g, v),
        FieldData::Fourier(c) => SpectralField3::fourier(g, c),
    }
}

pub fn write_field2(path: &Path, c: &SpatialField2) -> Result<()> {
    let g = c.grid();
    let mut w = BufWriter::new(File::create(path)?);
    write_header(&mut w, [g.n_x1 as u32, g.n_x2 as u32, 0], c.data())?;
    w.flush()?;
    Ok(())
}

/// Reads a spatial field; `n_theta` of the returned grid is taken from
/// `theta_hint` since the file does not carry it.
pub fn read_field2(path: &Path, theta_hint: usize) -> Result<SpatialField2> {
    let mut r = BufReader::new(File::open(path)?);
    let h = read_header(&mut r, path)?;
    if h.dims[2] != 0 {
        return Err(bad(path, "file holds a phase-space field"));
    }
    let g = SpectralGrid::new(h.dims[0], h.dims[1], theta_hint)?;
    let len = if h.fourier {
        g.spatial_fourier_len()
    } else {
        g.spatial_len()
    };
    match read_payload(&mut r, h.fourier, len, path)? {
        FieldData::Physical(v) => SpatialField2::physical(g, v),
        FieldData::Fourier(c) => SpatialField2::fourier(g, c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralContext;

    #[test]
    fn both_representations_are_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let g = SpectralGrid::new(8, 10, 12).unwrap();
        let ctx = SpectralContext::new(g);
        let u = SpectralField3::from_fn(g, |a, b, t| (a * 7.0).sin() + b * t.cos());
        let p = dir.path().join("u.bin");
        write_field3(&p, &u).unwrap();
        assert_eq!(read_field3(&p).unwrap(), u);
        let uf = u.into_fourier(&ctx);
        write_field3(&p, &uf).unwrap();
        assert_eq!(read_field3(&p).unwrap(), uf);

        let c = SpatialField2::from_fn(g, |a, b| a - b * b).into_fourier(&ctx);
        let q = dir.path().join("c.bin");
        write_field2(&q, &c).unwrap();
        assert_eq!(read_field2(&q, 12).unwrap(), c);
        assert!(read_field3(&q).is_err());
    }

    #[test]
    fn header_layout() {
        let dir = tempfile::tempdir().unwrap();
        let g = SpectralGrid::new(8, 8, 8).unwrap();
        let p = dir.path().join("u.bin");
        write_field3(&p, &SpectralField3::constant(g, 1.5)).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        assert_eq!(&bytes[..4], b"ANTK");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[20..24].try_into().unwrap()), 0);
        assert_eq!(bytes.len(), 24 + 8 * 512);
        assert_eq!(f64::from_le_bytes(bytes[24..32].try_into().unwrap()), 1.5);
    }

    #[test]
    fn rejects_truncated_payload() {
        let dir = tempfile::tempdir().unwrap();
        let g = SpectralGrid::new(8, 8, 8).unwrap();
        let p = dir.path().join("u.bin");
        write_field3(&p, &SpectralField3::constant(g, 1.0)).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        std::fs::write(&p, &bytes[..bytes.len() - 8]).unwrap();
        assert!(matches!(read_field3(&p), Err(Error::Format { .. })));
    }
}
