//! Binary dataset format and its sidecar manifest.
//!
//! Layout: magic `TMDS`, u16 version, u8 family, u32 n, u32 count,
//! u8 dtype (0 = little-endian 64-bit float pairs), then count·n·n
//! interleaved (re, im) records, then a CRC32 of the record payload.
//! All integers little-endian. The manifest is TOML next to the data
//! file at `<path>.manifest.toml`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::matrix::{ComplexTM, TmFamily};
use crate::util::crc32;

use super::dataset::{item_seed_at, Manifest, TmDataset};
use super::DatagenError;

pub const MAGIC: &[u8; 4] = b"TMDS";
pub const FORMAT_VERSION: u16 = 1;
const DTYPE_F64_PAIRS: u8 = 0;

pub fn manifest_path(data_path: &Path) -> PathBuf {
    let mut name = data_path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.toml");
    data_path.with_file_name(name)
}

/// Write the dataset and its manifest sidecar.
pub fn write_dataset(ds: &TmDataset, path: &Path) -> Result<(), DatagenError> {
    let n = ds.n();
    let count = ds.count();

    let mut payload = Vec::with_capacity(count * n * n * 16);
    for tm in &ds.tms {
        for z in tm.data() {
            payload.extend_from_slice(&z.re.to_le_bytes());
            payload.extend_from_slice(&z.im.to_le_bytes());
        }
    }

    let mut file = io::BufWriter::new(fs::File::create(path)?);
    file.write_all(MAGIC)?;
    file.write_all(&FORMAT_VERSION.to_le_bytes())?;
    file.write_all(&[ds.family().tag()])?;
    file.write_all(&(n as u32).to_le_bytes())?;
    file.write_all(&(count as u32).to_le_bytes())?;
    file.write_all(&[DTYPE_F64_PAIRS])?;
    file.write_all(&payload)?;
    file.write_all(&crc32(&payload).to_le_bytes())?;
    file.flush()?;

    let manifest_text =
        toml::to_string_pretty(&ds.manifest).map_err(|e| DatagenError::Manifest(e.to_string()))?;
    fs::write(manifest_path(path), manifest_text)?;
    Ok(())
}

/// Read a dataset and its manifest back. The split is taken from the
/// manifest as stored; no re-splitting happens here.
pub fn read_dataset(path: &Path) -> Result<TmDataset, DatagenError> {
    let mut file = io::BufReader::new(fs::File::open(path)?);

    let mut magic = [0u8; 4];
    read_exact(&mut file, &mut magic)?;
    if &magic != MAGIC {
        return Err(DatagenError::BadMagic(magic));
    }
    let mut buf2 = [0u8; 2];
    read_exact(&mut file, &mut buf2)?;
    let version = u16::from_le_bytes(buf2);
    if version != FORMAT_VERSION {
        return Err(DatagenError::VersionMismatch { found: version, expected: FORMAT_VERSION });
    }
    let mut b = [0u8; 1];
    read_exact(&mut file, &mut b)?;
    let family = TmFamily::from_tag(b[0])
        .ok_or_else(|| DatagenError::Corrupt(format!("unknown family tag {}", b[0])))?;
    let mut buf4 = [0u8; 4];
    read_exact(&mut file, &mut buf4)?;
    let n = u32::from_le_bytes(buf4) as usize;
    read_exact(&mut file, &mut buf4)?;
    let count = u32::from_le_bytes(buf4) as usize;
    read_exact(&mut file, &mut b)?;
    if b[0] != DTYPE_F64_PAIRS {
        return Err(DatagenError::Corrupt(format!("unknown dtype tag {}", b[0])));
    }

    let mut payload = vec![0u8; count * n * n * 16];
    read_exact(&mut file, &mut payload)?;
    read_exact(&mut file, &mut buf4)?;
    let stored_crc = u32::from_le_bytes(buf4);
    let actual_crc = crc32(&payload);
    if stored_crc != actual_crc {
        return Err(DatagenError::ChecksumMismatch { stored: stored_crc, actual: actual_crc });
    }

    let manifest_file = manifest_path(path);
    let manifest_text = fs::read_to_string(&manifest_file)
        .map_err(|_| DatagenError::Manifest(format!("missing sidecar {}", manifest_file.display())))?;
    let manifest: Manifest =
        toml::from_str(&manifest_text).map_err(|e| DatagenError::Manifest(e.to_string()))?;
    if manifest.n != n || manifest.count != count || manifest.family != family {
        return Err(DatagenError::Manifest(
            "manifest header disagrees with the data file".into(),
        ));
    }

    let mut tms = Vec::with_capacity(count);
    let mut cursor = 0usize;
    for pos in 0..count {
        let mut data = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            let re = f64::from_le_bytes(payload[cursor..cursor + 8].try_into().unwrap());
            let im = f64::from_le_bytes(payload[cursor + 8..cursor + 16].try_into().unwrap());
            data.push(Complex64::new(re, im));
            cursor += 16;
        }
        let seed = item_seed_at(manifest.master_seed, count, pos);
        let tm = ComplexTM::new(n, data, family, seed)
            .map_err(|e| DatagenError::Corrupt(format!("record {pos}: {e}")))?;
        tms.push(tm);
    }

    TmDataset::from_parts(tms, manifest)
}

fn read_exact(r: &mut impl Read, buf: &mut [u8]) -> Result<(), DatagenError> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            DatagenError::Truncated
        } else {
            DatagenError::Io(e)
        }
    })
}
