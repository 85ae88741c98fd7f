//! Binary (P6) and plain (P3) PPM images with maxval 255.

use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PpmError {
    #[error("malformed PPM header: {0}")]
    MalformedHeader(String),
    #[error("truncated PPM payload: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("unsupported maxval {0}; only 255 is accepted")]
    UnsupportedMaxval(u32),
}

/// 8-bit RGB raster, rows top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpmImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl PpmImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self { width, height, data: vec![0; 3 * width * height] }
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let o = 3 * (y * self.width + x);
        [self.data[o], self.data[o + 1], self.data[o + 2]]
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let o = 3 * (y * self.width + x);
        self.data[o..o + 3].copy_from_slice(&rgb);
    }

    /// Channel `c` as reals, row-major.
    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.data.iter().skip(c).step_by(3).map(|&v| v as f64).collect()
    }

    pub fn from_channels(width: usize, height: usize, ch: [&[f64]; 3]) -> Self {
        let mut img = Self::new(width, height);
        for i in 0..width * height {
            for c in 0..3 {
                img.data[3 * i + c] = ch[c][i].round().clamp(0.0, 255.0) as u8;
            }
        }
        img
    }

    pub fn gray(width: usize, height: usize, values: &[f64]) -> Self {
        Self::from_channels(width, height, [values, values, values])
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, PpmError> {
        let mut pos = 0;
        let magic = token(bytes, &mut pos)?;
        let plain = match magic.as_str() {
            "P3" => true,
            "P6" => false,
            m => return Err(PpmError::MalformedHeader(format!("magic {m:?}"))),
        };
        let mut num = |name: &str| -> Result<u32, PpmError> {
            let t = token(bytes, &mut pos)?;
            t.parse().map_err(|_| PpmError::MalformedHeader(format!("{name} {t:?}")))
        };
        let width = num("width")? as usize;
        let height = num("height")? as usize;
        let maxval = num("maxval")?;
        if maxval != 255 {
            return Err(PpmError::UnsupportedMaxval(maxval));
        }
        let expected = 3 * width * height;
        let data = if plain {
            let mut data = Vec::with_capacity(expected);
            while data.len() < expected {
                match token(bytes, &mut pos) {
                    Ok(t) => {
                        let v: u32 = t.parse().map_err(|_| PpmError::MalformedHeader(format!("sample {t:?}")))?;
                        if v > 255 {
                            return Err(PpmError::MalformedHeader(format!("sample {v} above maxval")));
                        }
                        data.push(v as u8);
                    }
                    Err(_) => return Err(PpmError::Truncated { expected, found: data.len() }),
                }
            }
            data
        } else {
            // exactly one whitespace byte separates header and raster
            if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
                return Err(PpmError::Truncated { expected, found: 0 });
            }
            let body = &bytes[pos + 1..];
            if body.len() < expected {
                return Err(PpmError::Truncated { expected, found: body.len() });
            }
            body[..expected].to_vec()
        };
        Ok(Self { width, height, data })
    }

    /// Canonical P6 encoding.
    pub fn encode_p6(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    pub fn encode_p3(&self) -> String {
        let mut s = format!("P3\n{} {}\n255\n", self.width, self.height);
        for row in self.data.chunks(3 * self.width.max(1)) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

fn token(bytes: &[u8], pos: &mut usize) -> Result<String, PpmError> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
        *pos += 1;
    }
    if start == *pos {
        return Err(PpmError::MalformedHeader("unexpected end of data".into()));
    }
    Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

pub fn read_ppm(path: impl AsRef<Path>) -> crate::Result<PpmImage> {
    let bytes = fs::read(path)?;
    Ok(PpmImage::decode(&bytes)?)
}

pub fn write_ppm(image: &PpmImage, path: impl AsRef<Path>) -> crate::Result<()> {
    fs::write(path, image.encode_p6())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_pixel() {
        let img = PpmImage::decode(b"P6\n1 1\n255\n\xff\xff\xff").unwrap();
        assert_eq!(img.pixel(0, 0), [255, 255, 255]);
    }

    #[test]
    fn plain_and_binary_agree() {
        let mut img = PpmImage::new(2, 2);
        img.set_pixel(1, 0, [10, 20, 30]);
        img.set_pixel(0, 1, [255, 0, 7]);
        let p3 = PpmImage::decode(img.encode_p3().as_bytes()).unwrap();
        let p6 = PpmImage::decode(&img.encode_p6()).unwrap();
        assert_eq!(p3, p6);
        assert_eq!(p6, img);
    }

    #[test]
    fn comments_are_skipped() {
        let img = PpmImage::decode(b"P3 # c\n1 # w\n1\n255\n1 2 3\n").unwrap();
        assert_eq!(img.pixel(0, 0), [1, 2, 3]);
    }

    #[test]
    fn errors() {
        assert!(matches!(PpmImage::decode(b"P5\n1 1\n255\n\0"), Err(PpmError::MalformedHeader(_))));
        assert_eq!(PpmImage::decode(b"P6\n1 1\n65535\n\0\0"), Err(PpmError::UnsupportedMaxval(65535)));
        assert_eq!(
            PpmImage::decode(b"P6\n2 1\n255\n\x01\x02\x03"),
            Err(PpmError::Truncated { expected: 6, found: 3 })
        );
        assert!(matches!(PpmImage::decode(b"P3\n1 1\n255\n1 2"), Err(PpmError::Truncated { .. })));
    }
}
