//! Binary pool checkpoints.
//!
//! Layout (little endian):
//!
//! | bytes | field |
//! |---|---|
//! | 8 | magic `HPINPOOL` |
//! | 4 | format version (u32, currently 1) |
//! | 4 | `s` (u32) |
//! | 8 each | `b`, `beta`, `h` (f64) |
//! | 4 | level (u32) |
//! | 1 | disorder kind: 0 gaussian, 1 binary, 2 table |
//! | 8 | sample count `N` (u64) |
//! | 8N | `log R` samples (f64) |
//! | 16 | lineage: seed, replica (u64) |
//! | (table only) 8 + 16K | point count `K` (u64), then `t` and `log M(t)` pairs |

use std::io::{Read, Write};
use std::path::Path;

use crate::disorder::{DisorderModel, TableMgf};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::pool::Pool;
use crate::rng::Lineage;

pub const MAGIC: &[u8; 8] = b"HPINPOOL";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_pool<W: Write>(pool: &Pool, mut w: W) -> std::io::Result<()> {
    let p = &pool.params;
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&p.s.to_le_bytes())?;
    for x in [p.b, p.beta, p.h] {
        w.write_all(&x.to_le_bytes())?;
    }
    w.write_all(&pool.level.to_le_bytes())?;
    let kind: u8 = match pool.disorder {
        DisorderModel::Gaussian => 0,
        DisorderModel::BinaryPm1 => 1,
        DisorderModel::Table(_) => 2,
    };
    w.write_all(&[kind])?;
    w.write_all(&(pool.log_samples.len() as u64).to_le_bytes())?;
    for x in &pool.log_samples {
        w.write_all(&x.to_le_bytes())?;
    }
    w.write_all(&pool.lineage.seed.to_le_bytes())?;
    w.write_all(&pool.lineage.replica.to_le_bytes())?;
    if let DisorderModel::Table(tab) = &pool.disorder {
        let (t, lm) = tab.points();
        w.write_all(&(t.len() as u64).to_le_bytes())?;
        for (a, b) in t.iter().zip(lm) {
            w.write_all(&a.to_le_bytes())?;
            w.write_all(&b.to_le_bytes())?;
        }
    }
    w.flush()
}

struct Reader<R> {
    inner: R,
    offset: usize,
}

impl<R: Read> Reader<R> {
    fn bytes<const N: usize>(&mut self, field: &str) -> std::result::Result<[u8; N], String> {
        let mut buf = [0u8; N];
        self.inner
            .read_exact(&mut buf)
            .map_err(|e| format!("field {field} at byte {}: {e}", self.offset))?;
        self.offset += N;
        Ok(buf)
    }
    fn u32(&mut self, field: &str) -> std::result::Result<u32, String> {
        Ok(u32::from_le_bytes(self.bytes(field)?))
    }
    fn u64(&mut self, field: &str) -> std::result::Result<u64, String> {
        Ok(u64::from_le_bytes(self.bytes(field)?))
    }
    fn f64(&mut self, field: &str) -> std::result::Result<f64, String> {
        Ok(f64::from_le_bytes(self.bytes(field)?))
    }
}

pub fn read_pool<R: Read>(r: R) -> std::result::Result<Pool, String> {
    let mut r = Reader { inner: r, offset: 0 };
    if &r.bytes::<8>("magic")? != MAGIC {
        return Err("bad magic: not a pool checkpoint".into());
    }
    let version = r.u32("version")?;
    if version != FORMAT_VERSION {
        return Err(format!("unsupported checkpoint version {version}"));
    }
    let s = r.u32("s")?;
    let (b, beta, h) = (r.f64("b")?, r.f64("beta")?, r.f64("h")?);
    let level = r.u32("level")?;
    let kind = r.bytes::<1>("disorder kind")?[0];
    let count = r.u64("sample count")?;
    if count > (1 << 40) {
        return Err(format!("implausible sample count {count}"));
    }
    let log_samples = (0..count)
        .map(|i| r.f64(&format!("sample {i}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let lineage = Lineage::new(r.u64("lineage seed")?, r.u64("lineage replica")?);
    let disorder = match kind {
        0 => DisorderModel::Gaussian,
        1 => DisorderModel::BinaryPm1,
        2 => {
            let k = r.u64("table size")?;
            let mut t = Vec::new();
            let mut lm = Vec::new();
            for i in 0..k {
                t.push(r.f64(&format!("table t[{i}]"))?);
                lm.push(r.f64(&format!("table log_m[{i}]"))?);
            }
            DisorderModel::Table(TableMgf::new(t, lm).map_err(|e| e.to_string())?)
        }
        other => return Err(format!("unknown disorder kind {other}")),
    };
    let params = ModelParams { s, b, beta, h };
    params.validate().map_err(|e| e.to_string())?;
    Ok(Pool { level, log_samples, params, disorder, lineage })
}

pub fn checkpoint_pool(pool: &Pool, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_pool(pool, std::io::BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn restore_pool(path: &Path) -> Result<Pool> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_pool(std::io::BufReader::new(file)).map_err(|m| Error::parse(path, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_in_memory() {
        let p = ModelParams::new(4, 2.0, 0.3, 0.01).unwrap();
        let pool = Pool::new(p, DisorderModel::Gaussian, 257, Lineage::new(9, 3))
            .unwrap()
            .advance_to(3)
            .unwrap();
        let mut buf = Vec::new();
        write_pool(&pool, &mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 4 + 4 + 24 + 4 + 1 + 8 + 257 * 8 + 16);
        let back = read_pool(&buf[..]).unwrap();
        assert_eq!(back, pool);
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back.log_samples), bits(&pool.log_samples));
    }

    #[test]
    fn truncated_file_reports_field() {
        let p = ModelParams::new(4, 2.0, 0.3, 0.01).unwrap();
        let pool = Pool::new(p, DisorderModel::Gaussian, 4, Lineage::new(1, 0)).unwrap();
        let mut buf = Vec::new();
        write_pool(&pool, &mut buf).unwrap();
        let err = read_pool(&buf[..buf.len() - 20]).unwrap_err();
        assert!(err.contains("sample 3"), "{err}");
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(read_pool(&bad[..]).unwrap_err().contains("magic"));
    }
}
