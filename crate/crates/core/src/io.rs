//! Binary layout for spectral fields and trajectories.
//!
//! All integers are little-endian `u32`, all reals little-endian `f64`.
//!
//! ```text
//! magic      4 bytes   "MFFD" (field) or "MFTR" (trajectory)
//! version    u32       FORMAT_VERSION
//! dims, n, ncomp       u32 each
//! convention u32 length + UTF-8, always CONVENTION_TAG
//! metadata   u32 length + UTF-8 JSON object
//! [trajectory only] count u32, then count times
//! coefficients         per field, per component, per wavevector in grid
//!                      order: re, im
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::spectral::{make_grid, GridSpec, SpectralField};
use crate::trajectory::{TimeGrid, Trajectory};

pub const FORMAT_VERSION: u32 = 1;
pub const CONVENTION_TAG: &str = "e^{ikx}/unitary-2π";
const FIELD_MAGIC: &[u8; 4] = b"MFFD";
const TRAJECTORY_MAGIC: &[u8; 4] = b"MFTR";

/// Upper bound on header strings, to fail fast on corrupt input.
const MAX_HEADER_BYTES: u32 = 1 << 24;

fn put_u32(w: &mut impl Write, x: u32) -> Result<()> {
    Ok(w.write_all(&x.to_le_bytes())?)
}

fn put_f64(w: &mut impl Write, x: f64) -> Result<()> {
    Ok(w.write_all(&x.to_le_bytes())?)
}

fn put_str(w: &mut impl Write, s: &str) -> Result<()> {
    put_u32(w, s.len() as u32)?;
    Ok(w.write_all(s.as_bytes())?)
}

fn get_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn get_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn get_str(r: &mut impl Read) -> Result<String> {
    let len = get_u32(r)?;
    if len > MAX_HEADER_BYTES {
        return Err(Error::Format(format!("header string of {len} bytes")));
    }
    let mut b = vec![0u8; len as usize];
    r.read_exact(&mut b)?;
    String::from_utf8(b).map_err(|e| Error::Format(e.to_string()))
}

fn write_header(w: &mut impl Write, magic: &[u8; 4], grid: &GridSpec, ncomp: usize, metadata: &Value) -> Result<()> {
    if !metadata.is_object() {
        return Err(Error::Format("metadata must be a JSON object".into()));
    }
    w.write_all(magic)?;
    put_u32(w, FORMAT_VERSION)?;
    put_u32(w, grid.dims() as u32)?;
    put_u32(w, grid.n() as u32)?;
    put_u32(w, ncomp as u32)?;
    put_str(w, CONVENTION_TAG)?;
    put_str(w, &serde_json::to_string(metadata)?)
}

fn read_header(r: &mut impl Read, magic: &[u8; 4]) -> Result<(GridSpec, usize, Value)> {
    let mut m = [0u8; 4];
    r.read_exact(&mut m)?;
    if &m != magic {
        return Err(Error::Format(format!("bad magic {m:?}, expected {magic:?}")));
    }
    let version = get_u32(r)?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {version}")));
    }
    let dims = get_u32(r)? as usize;
    let n = get_u32(r)? as usize;
    let ncomp = get_u32(r)? as usize;
    let grid = make_grid(dims, n)?;
    if ncomp == 0 || ncomp > 3 {
        return Err(Error::Format(format!("{ncomp} components")));
    }
    let tag = get_str(r)?;
    if tag != CONVENTION_TAG {
        return Err(Error::Format(format!("unknown Fourier convention '{tag}'")));
    }
    let metadata: Value = serde_json::from_str(&get_str(r)?)?;
    Ok((grid, ncomp, metadata))
}

fn write_coeffs(w: &mut impl Write, f: &SpectralField) -> Result<()> {
    for z in f.coeffs() {
        put_f64(w, z.re)?;
        put_f64(w, z.im)?;
    }
    Ok(())
}

fn read_coeffs(r: &mut impl Read, grid: &GridSpec, ncomp: usize) -> Result<SpectralField> {
    let mut coeffs = Vec::with_capacity(ncomp * grid.len());
    for _ in 0..ncomp * grid.len() {
        let re = get_f64(r)?;
        let im = get_f64(r)?;
        coeffs.push(Complex64::new(re, im));
    }
    let f = SpectralField::from_coeffs(grid, ncomp, coeffs)?;
    f.check_hermitian()?;
    Ok(f)
}

fn expect_eof(r: &mut impl Read) -> Result<()> {
    let mut b = [0u8; 1];
    if r.read(&mut b)? != 0 {
        return Err(Error::Format("trailing bytes after payload".into()));
    }
    Ok(())
}

pub fn write_field(w: &mut impl Write, f: &SpectralField, metadata: &Value) -> Result<()> {
    write_header(w, FIELD_MAGIC, f.grid(), f.ncomp(), metadata)?;
    write_coeffs(w, f)
}

pub fn read_field(r: &mut impl Read) -> Result<(SpectralField, Value)> {
    let (grid, ncomp, metadata) = read_header(r, FIELD_MAGIC)?;
    let f = read_coeffs(r, &grid, ncomp)?;
    expect_eof(r)?;
    Ok((f, metadata))
}

pub fn write_trajectory(w: &mut impl Write, v: &Trajectory, metadata: &Value) -> Result<()> {
    write_header(w, TRAJECTORY_MAGIC, v.grid(), v.ncomp(), metadata)?;
    let t = v.times().times();
    put_u32(w, t.len() as u32)?;
    for &x in t {
        put_f64(w, x)?;
    }
    v.fields().iter().try_for_each(|f| write_coeffs(w, f))
}

pub fn read_trajectory(r: &mut impl Read) -> Result<(Trajectory, Value)> {
    let (grid, ncomp, metadata) = read_header(r, TRAJECTORY_MAGIC)?;
    let count = get_u32(r)?;
    if count > MAX_HEADER_BYTES {
        return Err(Error::Format(format!("{count} samples")));
    }
    let times = (0..count).map(|_| get_f64(r)).collect::<Result<Vec<_>>>()?;
    let times = TimeGrid::new(times)?;
    let fields = (0..count).map(|_| read_coeffs(r, &grid, ncomp)).collect::<Result<Vec<_>>>()?;
    expect_eof(r)?;
    Ok((Trajectory::new(times, fields)?, metadata))
}

pub fn save_field(path: &Path, f: &SpectralField, metadata: &Value) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_field(&mut w, f, metadata)?;
    Ok(w.flush()?)
}

pub fn load_field(path: &Path) -> Result<(SpectralField, Value)> {
    read_field(&mut BufReader::new(File::open(path)?))
}

pub fn save_trajectory(path: &Path, v: &Trajectory, metadata: &Value) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_trajectory(&mut w, v, metadata)?;
    Ok(w.flush()?)
}

pub fn load_trajectory(path: &Path) -> Result<(Trajectory, Value)> {
    read_trajectory(&mut BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mild::heat_flow;
    use crate::random::{random_hermitian, random_solenoidal};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use serde_json::json;

    #[test]
    fn header_layout() {
        let g = make_grid(1, 4).unwrap();
        let mut f = SpectralField::zeros(&g, 1);
        f.set_pair(0, 0, Complex64::new(0.5, -0.25));
        let mut buf = Vec::new();
        write_field(&mut buf, &f, &json!({"oracle": "none"})).unwrap();
        assert_eq!(&buf[..4], b"MFFD");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), FORMAT_VERSION);
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(buf[12..16].try_into().unwrap()), 4);
        let tag_len = u32::from_le_bytes(buf[20..24].try_into().unwrap()) as usize;
        assert_eq!(&buf[24..24 + tag_len], CONVENTION_TAG.as_bytes());
        // three modes k = -1, 0, 1: the first pair is k = -1
        let tail = &buf[buf.len() - 48..];
        assert_eq!(f64::from_le_bytes(tail[..8].try_into().unwrap()), 0.5);
        assert_eq!(f64::from_le_bytes(tail[8..16].try_into().unwrap()), -0.25);
        assert_eq!(f64::from_le_bytes(tail[40..48].try_into().unwrap()), 0.25);
    }

    #[test]
    fn rejects_corrupt_input() {
        let g = make_grid(3, 4).unwrap();
        let f = SpectralField::zeros(&g, 3);
        let mut buf = Vec::new();
        write_field(&mut buf, &f, &json!({})).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_field(&mut bad.as_slice()), Err(Error::Format(_))));
        let mut long = buf.clone();
        long.push(0);
        assert!(matches!(read_field(&mut long.as_slice()), Err(Error::Format(_))));
        let short = &buf[..buf.len() - 1];
        assert!(read_field(&mut &short[..]).is_err());
        assert!(read_trajectory(&mut buf.as_slice()).is_err());
        assert!(write_field(&mut Vec::new(), &f, &json!([1])).is_err());
        // break Hermitian symmetry of one coefficient
        let mut asym = buf.clone();
        let at = asym.len() - 16;
        asym[at..at + 8].copy_from_slice(&1.0f64.to_le_bytes());
        assert!(matches!(read_field(&mut asym.as_slice()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn trajectory_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.bin");
        let g = make_grid(3, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = heat_flow(&random_solenoidal(&g, 2.0, &mut rng), &TimeGrid::geometric(1.0, 5, 0.01).unwrap(), 0.5);
        let meta = json!({"seed": 1, "problem": "ns3d"});
        save_trajectory(&path, &v, &meta).unwrap();
        let (back, m) = load_trajectory(&path).unwrap();
        assert_eq!(back, v);
        assert_eq!(m, meta);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn field_round_trip(seed in any::<u64>(), dims in prop::sample::select(vec![1usize, 3]), half in 2usize..6) {
            let g = make_grid(dims, 2 * half).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_hermitian(&g, dims, 1.0, &mut rng);
            let meta = json!({"seed": seed});
            let mut buf = Vec::new();
            write_field(&mut buf, &f, &meta).unwrap();
            let (back, m) = read_field(&mut buf.as_slice()).unwrap();
            prop_assert_eq!(back, f);
            prop_assert_eq!(m, meta);
        }
    }
}
