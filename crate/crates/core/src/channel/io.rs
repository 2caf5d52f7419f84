//! Binary tensor files.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! offset  size  field
//!      0     4  magic, b"CTF1" or b"CIR1"
//!      4     4  u32 format version (1)
//!      8     8  reserved, zero
//!     16     4  u32 band_id   (0 = 24 GHz, 1 = 60 GHz)
//!     20     4  u32 link_id   (0 Tx1Rx1, 1 Tx1Rx2, 2 Tx2Rx1, 3 Tx2Rx2)
//!     24     4  u32 N_f or N_tau
//!     28     4  u32 N_phi_R
//!     32     4  u32 N_phi_T
//!     36     8  f64 delay_bin_width, seconds   (CIR1 only)
//!  36/44     .  complex64 entries, f32 real then f32 imaginary,
//!               index order [f|tau][phi_R][phi_T]
//! ```

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use super::{BandId, CirTensor, CtfTensor, Dims, LinkId};
use crate::error::{Error, Result};

pub const CTF_MAGIC: &[u8; 4] = b"CTF1";
pub const CIR_MAGIC: &[u8; 4] = b"CIR1";
pub const FORMAT_VERSION: u32 = 1;

const HEADER_LEN: usize = 16;

fn encode_header(out: &mut Vec<u8>, magic: &[u8; 4], band: BandId, link: LinkId, dims: Dims) {
    out.extend_from_slice(magic);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&[0u8; 8]);
    for v in [
        band.code(),
        link.code(),
        dims.n0 as u32,
        dims.n_rx as u32,
        dims.n_tx as u32,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

fn encode_values(out: &mut Vec<u8>, values: &[Complex64]) {
    out.reserve(values.len() * 8);
    for v in values {
        out.extend_from_slice(&(v.re as f32).to_le_bytes());
        out.extend_from_slice(&(v.im as f32).to_le_bytes());
    }
}

pub fn encode_ctf(ctf: &CtfTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(36 + ctf.values().len() * 8);
    encode_header(&mut out, CTF_MAGIC, ctf.band_id(), ctf.link_id(), ctf.dims());
    encode_values(&mut out, ctf.values());
    out
}

pub fn encode_cir(cir: &CirTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(44 + cir.values().len() * 8);
    encode_header(&mut out, CIR_MAGIC, cir.band_id(), cir.link_id(), cir.dims());
    out.extend_from_slice(&cir.delay_bin_width().to_le_bytes());
    encode_values(&mut out, cir.values());
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> std::result::Result<&'a [u8], String> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        match end {
            Some(end) => {
                let s = &self.bytes[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(format!("truncated at byte {}", self.pos)),
        }
    }

    fn u32(&mut self) -> std::result::Result<u32, String> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f32(&mut self) -> std::result::Result<f32, String> {
        Ok(f32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> std::result::Result<f64, String> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

struct Decoded {
    band: BandId,
    link: LinkId,
    dims: Dims,
    delay_bin_width: Option<f64>,
    values: Vec<Complex64>,
}

fn decode(bytes: &[u8], magic: &[u8; 4]) -> std::result::Result<Decoded, String> {
    let mut r = Reader { bytes, pos: 0 };
    let head = r.take(HEADER_LEN)?;
    if &head[..4] != magic {
        return Err(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&head[..4]),
            String::from_utf8_lossy(magic)
        ));
    }
    let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(format!("unsupported version {version}"));
    }
    let band_code = r.u32()?;
    let band = BandId::from_code(band_code).ok_or(format!("unknown band_id {band_code}"))?;
    let link_code = r.u32()?;
    let link = LinkId::from_code(link_code).ok_or(format!("unknown link_id {link_code}"))?;
    let dims = Dims::new(r.u32()? as usize, r.u32()? as usize, r.u32()? as usize);
    let delay_bin_width = if magic == CIR_MAGIC { Some(r.f64()?) } else { None };
    let expected = dims
        .len()
        .checked_mul(8)
        .ok_or_else(|| "dimension overflow".to_string())?;
    let remaining = bytes.len() - r.pos;
    if remaining != expected {
        return Err(format!(
            "payload is {remaining} bytes, dims {}x{}x{} need {expected}",
            dims.n0, dims.n_rx, dims.n_tx
        ));
    }
    let mut values = Vec::with_capacity(dims.len());
    for _ in 0..dims.len() {
        let re = r.f32()?;
        let im = r.f32()?;
        values.push(Complex64::new(re as f64, im as f64));
    }
    Ok(Decoded {
        band,
        link,
        dims,
        delay_bin_width,
        values,
    })
}

pub fn decode_ctf(bytes: &[u8], origin: &Path) -> Result<CtfTensor> {
    let d = decode(bytes, CTF_MAGIC).map_err(|m| Error::format(origin, m))?;
    CtfTensor::new(d.band, d.link, d.dims, d.values).map_err(|e| Error::format(origin, e.to_string()))
}

pub fn decode_cir(bytes: &[u8], origin: &Path) -> Result<CirTensor> {
    let d = decode(bytes, CIR_MAGIC).map_err(|m| Error::format(origin, m))?;
    let width = d.delay_bin_width.unwrap_or_default();
    CirTensor::new(d.band, d.link, d.dims, width, d.values)
        .map_err(|e| Error::format(origin, e.to_string()))
}

pub fn write_ctf(path: &Path, ctf: &CtfTensor) -> Result<()> {
    fs::write(path, encode_ctf(ctf)).map_err(|e| Error::io(path, e))
}

pub fn write_cir(path: &Path, cir: &CirTensor) -> Result<()> {
    fs::write(path, encode_cir(cir)).map_err(|e| Error::io(path, e))
}

pub fn read_ctf(path: &Path) -> Result<CtfTensor> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_ctf(&bytes, path)
}

pub fn read_cir(path: &Path) -> Result<CirTensor> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_cir(&bytes, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_ctf() -> CtfTensor {
        let dims = Dims::new(3, 2, 2);
        let values = (0..dims.len())
            .map(|i| Complex64::new(i as f64 * 0.5, -(i as f64)))
            .collect();
        CtfTensor::new(BandId::Band60, LinkId::TX2RX1, dims, values).unwrap()
    }

    #[test]
    fn header_layout() {
        let bytes = encode_ctf(&sample_ctf());
        assert_eq!(&bytes[..4], b"CTF1");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(&bytes[8..16], &[0u8; 8]);
        let fields: Vec<u32> = (0..5)
            .map(|i| u32::from_le_bytes(bytes[16 + 4 * i..20 + 4 * i].try_into().unwrap()))
            .collect();
        assert_eq!(fields, vec![1, 2, 3, 2, 2]);
        assert_eq!(bytes.len(), 36 + 12 * 8);
        // entry [0][0][1] = (0.5, -1.0)
        let re = f32::from_le_bytes(bytes[44..48].try_into().unwrap());
        let im = f32::from_le_bytes(bytes[48..52].try_into().unwrap());
        assert_eq!((re, im), (0.5, -1.0));
    }

    #[test]
    fn cir_carries_bin_width() {
        let dims = Dims::new(2, 1, 1);
        let cir = CirTensor::new(
            BandId::Band24,
            LinkId::TX1RX1,
            dims,
            5e-9,
            vec![Complex64::new(1.0, 2.0), Complex64::new(-3.0, 0.25)],
        )
        .unwrap();
        let bytes = encode_cir(&cir);
        assert_eq!(&bytes[..4], b"CIR1");
        assert_eq!(f64::from_le_bytes(bytes[36..44].try_into().unwrap()), 5e-9);
        let back = decode_cir(&bytes, Path::new("mem")).unwrap();
        assert_eq!(back, cir);
    }

    #[test]
    fn corrupt_inputs_name_the_file() {
        let mut bytes = encode_ctf(&sample_ctf());
        bytes.pop();
        let err = decode_ctf(&bytes, Path::new("x/Tx1Rx2_60GHz.ctf")).unwrap_err();
        assert!(err.to_string().contains("Tx1Rx2_60GHz.ctf"));
        assert_eq!(err.exit_code(), 3);

        let mut bad_magic = encode_ctf(&sample_ctf());
        bad_magic[0] = b'X';
        assert!(decode_ctf(&bad_magic, Path::new("m")).is_err());
        assert!(decode_cir(&encode_ctf(&sample_ctf()), Path::new("m")).is_err());
    }

    proptest! {
        #[test]
        fn f32_representable_values_round_trip(
            n0 in 1usize..6, n_rx in 1usize..4, n_tx in 1usize..4,
            seed in proptest::collection::vec(-1.0e3f32..1.0e3, 200)
        ) {
            let dims = Dims::new(n0, n_rx, n_tx);
            let values: Vec<Complex64> = (0..dims.len())
                .map(|i| Complex64::new(seed[2 * i % 200] as f64, seed[(2 * i + 1) % 200] as f64))
                .collect();
            let ctf = CtfTensor::new(BandId::Band24, LinkId::TX2RX2, dims, values).unwrap();
            let back = decode_ctf(&encode_ctf(&ctf), Path::new("mem")).unwrap();
            prop_assert_eq!(back, ctf);
        }
    }
}
