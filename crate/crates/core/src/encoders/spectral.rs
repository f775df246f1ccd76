use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::baseline::{amplitude_encode, FeatureVector};
use crate::error::{Error, Result};
use crate::qsim::{check_cap, format_f64, Statevector};
use crate::seqio::{encode_bits, BaseScheme, DnaSequence};

/// Grayscale image, `width × height`, intensities in `[0, 255]`.
/// Pixel `(x, y)` lives at `pixels[y * width + x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Image(format!("empty image {width}x{height}")));
        }
        if pixels.len() != width * height {
            return Err(Error::Image(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some(p) = pixels.iter().find(|p| !(0.0..=255.0).contains(*p)) {
            return Err(Error::Image(format!("pixel value {p} outside [0, 255]")));
        }
        Ok(GrayImage { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }
}

/// Reads a binary (`P5`) or ASCII (`P2`) PGM with `maxval ≤ 255`.
pub fn read_pgm<R: Read>(mut reader: R) -> Result<GrayImage> {
    let mut data = Vec::new();
    reader.read_to_end(&mut data)?;
    let mut pos = 0;

    // header tokens, skipping whitespace and `#` comments
    let next_token = |pos: &mut usize| -> Result<String> {
        loop {
            while *pos < data.len() && data[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < data.len() && data[*pos] == b'#' {
                while *pos < data.len() && data[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < data.len() && !data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::Image("truncated PGM header".into()));
        }
        Ok(String::from_utf8_lossy(&data[start..*pos]).into_owned())
    };
    let number = |tok: String, what: &str| -> Result<usize> {
        tok.parse().map_err(|_| Error::Image(format!("bad {what} '{tok}'")))
    };

    let magic = next_token(&mut pos)?;
    let binary = match magic.as_str() {
        "P5" => true,
        "P2" => false,
        other => return Err(Error::Image(format!("unsupported PGM magic '{other}'"))),
    };
    let width = number(next_token(&mut pos)?, "width")?;
    let height = number(next_token(&mut pos)?, "height")?;
    let maxval = number(next_token(&mut pos)?, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Image(format!("maxval {maxval} not in 1..=255")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::Image("image dimensions overflow".into()))?;

    let pixels: Vec<f64> = if binary {
        // exactly one whitespace byte separates maxval from the raster
        let start = pos + 1;
        let raster = data
            .get(start..start + count)
            .ok_or_else(|| Error::Image(format!("raster shorter than {count} bytes")))?;
        raster.iter().map(|&b| b as f64).collect()
    } else {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(number(next_token(&mut pos)?, "pixel")? as f64);
        }
        out
    };
    if let Some(p) = pixels.iter().find(|&&p| p > maxval as f64) {
        return Err(Error::Image(format!("pixel {p} exceeds maxval {maxval}")));
    }
    GrayImage::new(width, height, pixels)
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    read_pgm(File::open(path)?)
}

/// DCT coefficients `F(α, β)` for `α < width`, `β < height`, stored with
/// `α` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct DctCoeffs {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
    pub f_max: f64,
}

impl DctCoeffs {
    fn new(width: usize, height: usize, values: Vec<f64>) -> Self {
        let f_max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        DctCoeffs { width, height, values, f_max }
    }

    pub fn get(&self, alpha: usize, beta: usize) -> f64 {
        self.values[alpha * self.height + beta]
    }

    /// `|F| / F_max`, same layout as `values`.
    pub fn normalized_magnitudes(&self) -> Result<Vec<f64>> {
        if self.f_max == 0.0 {
            return Err(Error::Degenerate("all DCT coefficients are zero".into()));
        }
        Ok(self.values.iter().map(|v| v.abs() / self.f_max).collect())
    }

    /// `alpha,beta,F,F_hat` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,beta,F,F_hat\n");
        for alpha in 0..self.width {
            for beta in 0..self.height {
                let f = self.get(alpha, beta);
                let hat = if self.f_max > 0.0 { f / self.f_max } else { 0.0 };
                out.push_str(&format!("{alpha},{beta},{},{}\n", format_f64(f), format_f64(hat)));
            }
        }
        out
    }
}

fn scale(k: usize) -> f64 {
    if k == 0 { FRAC_1_SQRT_2 } else { 1.0 }
}

/// `(C_α/2)(C_β/2)` with `C_0² = 1/2` folded exactly.
fn pair_scale(alpha: usize, beta: usize) -> f64 {
    match (alpha == 0, beta == 0) {
        (true, true) => 0.125,
        (true, false) | (false, true) => FRAC_1_SQRT_2 / 4.0,
        (false, false) => 0.25,
    }
}

/// `cos[kπ(2i+1)/2L]` for all `k, i < L`, row `k`.
fn cosine_table(len: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(len * len);
    for k in 0..len {
        for i in 0..len {
            t.push((k as f64 * PI * (2 * i + 1) as f64 / (2 * len) as f64).cos());
        }
    }
    t
}

/// `F(α,β) = (C_α/2)(C_β/2) Σ_x Σ_y f(x,y) cos[απ(2x+1)/2M] cos[βπ(2y+1)/2N]`
/// with `C_0 = 1/√2` and `C_k = 1` otherwise, for every image size.
/// Evaluated separably, `x` first.
pub fn dct2d(image: &GrayImage) -> DctCoeffs {
    let (m, n) = (image.width, image.height);
    let cx = cosine_table(m);
    let cy = cosine_table(n);
    // partial[α][y]
    let mut partial = vec![0.0; m * n];
    for alpha in 0..m {
        for y in 0..n {
            partial[alpha * n + y] = (0..m).map(|x| image.pixel(x, y) * cx[alpha * m + x]).sum();
        }
    }
    let mut values = vec![0.0; m * n];
    for alpha in 0..m {
        for beta in 0..n {
            let s: f64 = (0..n).map(|y| partial[alpha * n + y] * cy[beta * n + y]).sum();
            values[alpha * n + beta] = pair_scale(alpha, beta) * s;
        }
    }
    DctCoeffs::new(m, n, values)
}

/// Direct quadruple-loop evaluation of [`dct2d`].
pub fn dct2d_naive(image: &GrayImage) -> DctCoeffs {
    let (m, n) = (image.width, image.height);
    let mut values = Vec::with_capacity(m * n);
    for alpha in 0..m {
        for beta in 0..n {
            let mut s = 0.0;
            for x in 0..m {
                for y in 0..n {
                    s += image.pixel(x, y)
                        * (alpha as f64 * PI * (2 * x + 1) as f64 / (2 * m) as f64).cos()
                        * (beta as f64 * PI * (2 * y + 1) as f64 / (2 * n) as f64).cos();
                }
            }
            values.push(scale(alpha) * scale(beta) / 4.0 * s);
        }
    }
    DctCoeffs::new(m, n, values)
}

/// Qubits used for an `M×N` image: `max(1, ⌈log₂ MN⌉)`.
pub fn image_qubits(image: &GrayImage) -> usize {
    let cells = image.width * image.height;
    (cells.next_power_of_two().trailing_zeros() as usize).max(1)
}

/// DCT, scale by the largest magnitude, amplitude-load `|F̂|` (α outer,
/// zero padded) and apply the QFT to the whole register.
pub fn cosine_encode_image(image: &GrayImage) -> Result<(DctCoeffs, Statevector)> {
    check_cap(image_qubits(image))?;
    let coeffs = dct2d(image);
    let mags = coeffs.normalized_magnitudes()?;
    let state = amplitude_encode(&FeatureVector::raw(mags)?)?.qft();
    Ok((coeffs, state))
}

/// Basis state from the cosine bit map (`A, G → 0`, `C, T → 1`), then QFT.
pub fn cosine_encode_dna(seq: &DnaSequence) -> Result<Statevector> {
    let n = seq.len();
    check_cap(n)?;
    let index = encode_bits(seq, BaseScheme::Cosine)
        .into_iter()
        .fold(0usize, |acc, b| acc << 1 | b as usize);
    Ok(Statevector::basis(n, index)?.qft())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{dft_matrix_apply, C64};

    fn img(w: usize, h: usize, px: &[f64]) -> GrayImage {
        GrayImage::new(w, h, px.to_vec()).unwrap()
    }

    #[test]
    fn single_pixel_scale() {
        let c = dct2d(&img(1, 1, &[200.0]));
        assert_eq!(c.get(0, 0), 25.0);
    }

    #[test]
    fn zero_image() {
        let z = img(3, 2, &[0.0; 6]);
        assert!(dct2d(&z).values.iter().all(|v| *v == 0.0));
        assert!(matches!(cosine_encode_image(&z), Err(Error::Degenerate(_))));
    }

    #[test]
    fn separable_matches_naive_on_rectangles() {
        let px: Vec<f64> = (0..12).map(|i| ((i * 37) % 256) as f64).collect();
        let im = img(4, 3, &px);
        let a = dct2d(&im);
        let b = dct2d_naive(&im);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn single_pixel_encodes_to_plus() {
        let (_, s) = cosine_encode_image(&img(1, 1, &[9.0])).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!((s.amplitude(0) - C64::new(h, 0.0)).norm() < 1e-12);
        assert!((s.amplitude(1) - C64::new(h, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn constant_2x2_matches_dense_pipeline() {
        let im = img(2, 2, &[7.0; 4]);
        let (coeffs, s) = cosine_encode_image(&im).unwrap();
        let mags = coeffs.normalized_magnitudes().unwrap();
        let norm = mags.iter().map(|v| v * v).sum::<f64>().sqrt();
        let v: Vec<C64> = mags.iter().map(|m| C64::new(m / norm, 0.0)).collect();
        let expect = dft_matrix_apply(&v);
        for (a, b) in s.amplitudes().iter().zip(&expect) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn dna_quick_path() {
        let s = cosine_encode_dna(&DnaSequence::parse("A").unwrap()).unwrap();
        assert!((s.amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-12);
        let s = cosine_encode_dna(&DnaSequence::parse("AAA").unwrap()).unwrap();
        assert!(s.amplitudes().iter().all(|z| (z - C64::new(8f64.sqrt().recip(), 0.0)).norm() < 1e-12));
        let s = cosine_encode_dna(&DnaSequence::parse("ATC").unwrap()).unwrap();
        let mut basis = vec![C64::new(0.0, 0.0); 8];
        basis[0b011] = C64::new(1.0, 0.0);
        let expect = dft_matrix_apply(&basis);
        for (a, b) in s.amplitudes().iter().zip(&expect) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pgm_ascii_and_binary() {
        let text = "P2\n# comment\n3 2\n255\n0 10 20\n30 40 255\n";
        let a = read_pgm(text.as_bytes()).unwrap();
        assert_eq!((a.width(), a.height()), (3, 2));
        assert_eq!(a.pixel(2, 1), 255.0);
        let mut bin = b"P5\n3 2\n255\n".to_vec();
        bin.extend([0u8, 10, 20, 30, 40, 255]);
        assert_eq!(read_pgm(&bin[..]).unwrap(), a);
    }

    #[test]
    fn pgm_errors() {
        assert!(read_pgm("P3\n1 1\n255\n0\n".as_bytes()).is_err());
        assert!(read_pgm("P2\n2 2\n255\n0 1 2\n".as_bytes()).is_err());
        assert!(read_pgm("P2\n1 1\n65535\n0\n".as_bytes()).is_err());
        assert!(read_pgm(&b"P5\n2 2\n255\n\x01"[..]).is_err());
        assert!(GrayImage::new(1, 1, vec![300.0]).is_err());
    }

    #[test]
    fn coefficient_csv_shape() {
        let csv = dct2d(&img(2, 1, &[1.0, 3.0])).to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("alpha,beta,F,F_hat\n0,0,"));
    }
}
