//! Diagram rendering (PGM/PNG) and JSON serialization.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Cursor;
use std::str::FromStr;

use image::{GrayImage, ImageFormat as PngFormat, Luma};
use serde::Serialize;

use crate::analysis::BehaviourClass;
use crate::engine::Diagram;
use crate::error::{NcaError, Result};
use crate::pattern::Name;

/// How names are mapped to grey levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Palette {
    /// k-th name met in row-major order gets level `k·255/(count−1)`.
    #[default]
    FirstOccurrence,
    /// Names ranked by a fixed integer hash, then spread like the ramp.
    /// Shades do not depend on where a name first appears.
    Hash,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImageFormat {
    #[default]
    Pgm,
    Png,
}

impl FromStr for ImageFormat {
    type Err = NcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pgm" => Ok(ImageFormat::Pgm),
            "png" => Ok(ImageFormat::Png),
            other => Err(NcaError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub palette: Palette,
    /// Pixels per cell side.
    pub cell_size: usize,
    pub format: ImageFormat,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            palette: Palette::FirstOccurrence,
            cell_size: 1,
            format: ImageFormat::Pgm,
        }
    }
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Grey level for every distinct name of `diagram`.
pub fn grey_levels(diagram: &Diagram, palette: Palette) -> HashMap<Name, u8> {
    let mut order: Vec<Name> = Vec::new();
    let mut seen: HashMap<Name, ()> = HashMap::new();
    for row in &diagram.rows {
        for &n in row {
            if seen.insert(n, ()).is_none() {
                order.push(n);
            }
        }
    }
    if palette == Palette::Hash {
        order.sort_by_key(|n| (mix(n.0), n.0));
    }
    let count = order.len();
    if count > 256 {
        log::warn!("{count} distinct names exceed 256 grey levels; levels are reused");
    }
    order
        .into_iter()
        .enumerate()
        .map(|(k, n)| {
            let level = if count > 256 {
                (k % 256) as u8
            } else if count <= 1 {
                0
            } else {
                (k * 255 / (count - 1)) as u8
            };
            (n, level)
        })
        .collect()
}

fn pixels(diagram: &Diagram, spec: &RenderSpec) -> Result<(usize, usize, Vec<u8>)> {
    if diagram.rows.is_empty() || diagram.width == 0 {
        return Err(NcaError::InvalidArgument(
            "cannot render an empty diagram".into(),
        ));
    }
    if spec.cell_size == 0 {
        return Err(NcaError::InvalidArgument(
            "cell size must be positive".into(),
        ));
    }
    let levels = grey_levels(diagram, spec.palette);
    let s = spec.cell_size;
    let (w, h) = (diagram.width * s, diagram.rows.len() * s);
    let mut buf = Vec::with_capacity(w * h);
    for row in &diagram.rows {
        let line: Vec<u8> = row
            .iter()
            .flat_map(|n| std::iter::repeat_n(levels[n], s))
            .collect();
        for _ in 0..s {
            buf.extend_from_slice(&line);
        }
    }
    Ok((w, h, buf))
}

/// Renders one pixel block per cell, the initial row on top.
pub fn render(diagram: &Diagram, spec: &RenderSpec) -> Result<Vec<u8>> {
    let (w, h, buf) = pixels(diagram, spec)?;
    match spec.format {
        ImageFormat::Pgm => {
            let mut out = format!("P5 {w} {h} 255\n").into_bytes();
            out.extend_from_slice(&buf);
            Ok(out)
        }
        ImageFormat::Png => {
            let img = GrayImage::from_fn(w as u32, h as u32, |x, y| {
                Luma([buf[y as usize * w + x as usize]])
            });
            let mut out = Cursor::new(Vec::new());
            img.write_to(&mut out, PngFormat::Png)
                .map_err(|e| NcaError::Io(format!("png encoding failed: {e}")))?;
            Ok(out.into_inner())
        }
    }
}

/// The diagram as a matrix of name values, one row per line.
pub fn name_matrix(diagram: &Diagram) -> String {
    let cell_width = diagram
        .rows
        .iter()
        .flatten()
        .map(|n| n.0.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for row in &diagram.rows {
        let line: Vec<String> = row
            .iter()
            .map(|n| format!("{:>cell_width$}", n.0))
            .collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Compact JSON with a trailing newline.
pub fn dump(diagram: &Diagram) -> String {
    let mut s = serde_json::to_string(diagram).expect("diagram serializes");
    s.push('\n');
    s
}

pub fn load(text: &str) -> Result<Diagram> {
    // serde_json errors already carry "at line L column C"
    let diagram: Diagram =
        serde_json::from_str(text).map_err(|e| NcaError::Parse(e.to_string()))?;
    if let Some(t) = diagram.rows.iter().position(|r| r.len() != diagram.width) {
        return Err(NcaError::Parse(format!(
            "row {t} has width {}, expected {}",
            diagram.rows[t].len(),
            diagram.width
        )));
    }
    Ok(diagram)
}

/// Class table as printed by `classify`.
#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub init: String,
    pub steps: usize,
    pub class_count: usize,
    pub classes: Vec<BehaviourClass>,
}

impl ClassReport {
    pub fn new(init: String, steps: usize, classes: Vec<BehaviourClass>) -> Self {
        Self {
            init,
            steps,
            class_count: classes.len(),
            classes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# init {}  steps {}  classes {}",
            self.init, self.steps, self.class_count
        );
        let _ = writeln!(out, "{:>5}  {:>4}  members", "label", "size");
        for c in &self.classes {
            let members: Vec<String> = c.members.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{:>5}  {:>4}  {}", c.label, c.size, members.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(rows: &[&[u64]], seed: Option<u64>) -> Diagram {
        Diagram {
            width: rows[0].len(),
            rule_id: "ENCA 8".into(),
            seed,
            fresh_counter: 99,
            rows: rows
                .iter()
                .map(|r| r.iter().copied().map(Name).collect())
                .collect(),
        }
    }

    #[test]
    fn single_pixel_pgm() {
        let d = diagram(&[&[0]], None);
        let bytes = render(&d, &RenderSpec::default()).unwrap();
        assert_eq!(bytes, b"P5 1 1 255\n\x00");
    }

    #[test]
    fn two_names_two_levels() {
        let d = diagram(&[&[4, 9, 4], &[9, 9, 4]], None);
        for palette in [Palette::FirstOccurrence, Palette::Hash] {
            let spec = RenderSpec {
                palette,
                cell_size: 2,
                format: ImageFormat::Pgm,
            };
            let bytes = render(&d, &spec).unwrap();
            let header = b"P5 6 4 255\n";
            assert_eq!(&bytes[..header.len()], header);
            let mut levels: Vec<u8> = bytes[header.len()..].to_vec();
            assert_eq!(levels.len(), 24);
            levels.sort_unstable();
            levels.dedup();
            assert_eq!(levels, vec![0, 255]);
        }
    }

    #[test]
    fn palette_is_injective_up_to_256_names() {
        let row: Vec<u64> = (0..256).map(|v| v * 7 + 3).collect();
        let d = diagram(&[&row], None);
        for palette in [Palette::FirstOccurrence, Palette::Hash] {
            let levels = grey_levels(&d, palette);
            let mut v: Vec<u8> = levels.values().copied().collect();
            v.sort_unstable();
            v.dedup();
            assert_eq!(v.len(), 256);
        }
    }

    #[test]
    fn png_output_decodes() {
        let d = diagram(&[&[0, 1, 2], &[2, 1, 0]], None);
        let spec = RenderSpec {
            format: ImageFormat::Png,
            ..RenderSpec::default()
        };
        let bytes = render(&d, &spec).unwrap();
        let img = image::load_from_memory(&bytes).unwrap().to_luma8();
        assert_eq!(img.dimensions(), (3, 2));
        assert_eq!(img.get_pixel(0, 0)[0], 0);
        assert_eq!(img.get_pixel(2, 0)[0], 255);
    }

    #[test]
    fn unsupported_format() {
        assert_eq!(
            "gif".parse::<ImageFormat>(),
            Err(NcaError::UnsupportedFormat("gif".into()))
        );
    }

    #[test]
    fn json_round_trip_and_shape() {
        let d = diagram(&[&[1, 2], &[3, 4]], None);
        let text = dump(&d);
        assert!(!text.contains("seed"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["rows"], serde_json::json!([[1, 2], [3, 4]]));
        assert_eq!(load(&text).unwrap(), d);
        let d = diagram(&[&[1, 2]], Some(17));
        assert!(dump(&d).contains("\"seed\":17"));
        assert_eq!(load(&dump(&d)).unwrap(), d);
    }

    #[test]
    fn load_reports_position() {
        let err = load("{\n  \"width\": 2,\n  \"rows\": [[1, 2]\n").unwrap_err();
        let NcaError::Parse(msg) = err else { panic!() };
        assert!(msg.contains("line 4 column 0"), "{msg}");
        let err = load(r#"{"width":3,"rule_id":"x","fresh_counter":1,"rows":[[1,2]]}"#);
        assert!(err.is_err());
    }

    #[test]
    fn matrix_dump() {
        let d = diagram(&[&[1, 10], &[0, 2]], None);
        assert_eq!(name_matrix(&d), " 1 10\n 0  2\n");
    }
}
