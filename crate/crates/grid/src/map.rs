//! MovingAI `.map` files.
//!
//! ```text
//! type octile
//! height 2
//! width 2
//! map
//! .@
//! ..
//! ```
//!
//! `.` and `G` are free; `@`, `O` and `T` are obstacles. Terrain classes other
//! than free/blocked are not modelled. Glyphs are kept verbatim so that
//! [`GridMap::to_map_string`] reproduces the input byte for byte.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct MapError {
    pub line: usize,
    pub column: usize,
    pub kind: MapErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapErrorKind {
    ExpectedHeader(&'static str),
    BadNumber(String),
    ZeroDimension,
    TruncatedRows { expected: usize, found: usize },
    ShortRow { expected: usize, found: usize },
    LongRow { expected: usize, found: usize },
    UnknownGlyph(char),
    TrailingContent,
}

impl fmt::Display for MapErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapErrorKind::ExpectedHeader(h) => write!(f, "expected `{h}` header"),
            MapErrorKind::BadNumber(s) => write!(f, "not a positive integer: {s:?}"),
            MapErrorKind::ZeroDimension => write!(f, "map dimensions must be positive"),
            MapErrorKind::TruncatedRows { expected, found } => {
                write!(f, "expected {expected} map rows, found {found}")
            }
            MapErrorKind::ShortRow { expected, found } => {
                write!(f, "row has {found} cells, expected {expected}")
            }
            MapErrorKind::LongRow { expected, found } => {
                write!(f, "row has {found} cells, expected {expected}")
            }
            MapErrorKind::UnknownGlyph(c) => write!(f, "unknown glyph {c:?}"),
            MapErrorKind::TrailingContent => write!(f, "content after the last map row"),
        }
    }
}

fn glyph_blocked(c: u8) -> Option<bool> {
    match c {
        b'.' | b'G' => Some(false),
        b'@' | b'O' | b'T' => Some(true),
        _ => None,
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct GridMap {
    pub name: String,
    pub width: usize,
    pub height: usize,
    /// Value of the `type` header.
    pub kind: String,
    glyphs: Vec<u8>,
    blocked: Vec<bool>,
    /// Summed-area table of `blocked`, `(width + 1) * (height + 1)` entries.
    sat: Vec<u32>,
    line_ending: &'static str,
    trailing_newline: bool,
}

impl fmt::Debug for GridMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridMap")
            .field("name", &self.name)
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl GridMap {
    pub fn parse(text: &str) -> Result<GridMap, MapError> {
        Self::parse_named("", text)
    }

    pub fn parse_named(name: &str, text: &str) -> Result<GridMap, MapError> {
        let line_ending = if text.contains("\r\n") { "\r\n" } else { "\n" };
        let trailing_newline = text.ends_with('\n');
        let body = text.strip_suffix(line_ending).unwrap_or(text);
        let lines: Vec<&str> = if body.is_empty() && trailing_newline {
            vec![""]
        } else {
            body.split(line_ending).collect()
        };
        let err = |line: usize, column: usize, kind| MapError { line, column, kind };
        let header = |i: usize, key: &'static str| -> Result<&str, MapError> {
            let l = lines
                .get(i)
                .ok_or_else(|| err(lines.len().max(1), 1, MapErrorKind::ExpectedHeader(key)))?;
            let rest = l
                .strip_prefix(key)
                .ok_or_else(|| err(i + 1, 1, MapErrorKind::ExpectedHeader(key)))?;
            if key == "map" {
                return if rest.is_empty() {
                    Ok(rest)
                } else {
                    Err(err(i + 1, 4, MapErrorKind::ExpectedHeader(key)))
                };
            }
            rest.strip_prefix(' ')
                .ok_or_else(|| err(i + 1, key.len() + 1, MapErrorKind::ExpectedHeader(key)))
        };
        let number = |i: usize, key: &'static str| -> Result<usize, MapError> {
            let v = header(i, key)?;
            let n: usize = v
                .parse()
                .map_err(|_| err(i + 1, key.len() + 2, MapErrorKind::BadNumber(v.to_string())))?;
            if n == 0 {
                return Err(err(i + 1, key.len() + 2, MapErrorKind::ZeroDimension));
            }
            Ok(n)
        };
        let kind = header(0, "type")?.to_string();
        let height = number(1, "height")?;
        let width = number(2, "width")?;
        header(3, "map")?;

        let rows = &lines[4..];
        if rows.len() < height {
            return Err(err(
                lines.len(),
                rows.last().map_or(1, |r| r.chars().count() + 1),
                MapErrorKind::TruncatedRows {
                    expected: height,
                    found: rows.len(),
                },
            ));
        }
        if rows.len() > height {
            return Err(err(5 + height, 1, MapErrorKind::TrailingContent));
        }
        let mut glyphs = Vec::with_capacity(width * height);
        for (y, row) in rows.iter().enumerate() {
            let line = y + 5;
            for (x, c) in row.chars().enumerate() {
                if x >= width {
                    return Err(err(
                        line,
                        x + 1,
                        MapErrorKind::LongRow {
                            expected: width,
                            found: row.chars().count(),
                        },
                    ));
                }
                if !c.is_ascii() || glyph_blocked(c as u8).is_none() {
                    return Err(err(line, x + 1, MapErrorKind::UnknownGlyph(c)));
                }
                glyphs.push(c as u8);
            }
            let n = row.chars().count();
            if n < width {
                return Err(err(
                    line,
                    n + 1,
                    MapErrorKind::ShortRow {
                        expected: width,
                        found: n,
                    },
                ));
            }
        }
        Ok(Self::from_glyphs(
            name,
            &kind,
            width,
            height,
            glyphs,
            line_ending,
            trailing_newline,
        ))
    }

    fn from_glyphs(
        name: &str,
        kind: &str,
        width: usize,
        height: usize,
        glyphs: Vec<u8>,
        line_ending: &'static str,
        trailing_newline: bool,
    ) -> GridMap {
        let blocked: Vec<bool> = glyphs
            .iter()
            .map(|&c| glyph_blocked(c) == Some(true))
            .collect();
        let mut sat = vec![0u32; (width + 1) * (height + 1)];
        for y in 0..height {
            let mut row = 0u32;
            for x in 0..width {
                row += blocked[y * width + x] as u32;
                sat[(y + 1) * (width + 1) + x + 1] = sat[y * (width + 1) + x + 1] + row;
            }
        }
        GridMap {
            name: name.to_string(),
            width,
            height,
            kind: kind.to_string(),
            glyphs,
            blocked,
            sat,
            line_ending,
            trailing_newline,
        }
    }

    /// A map whose cell `(x, y)` is blocked iff `blocked(x, y)`.
    pub fn from_fn(
        name: &str,
        width: usize,
        height: usize,
        blocked: impl Fn(usize, usize) -> bool,
    ) -> GridMap {
        assert!(width > 0 && height > 0);
        let glyphs = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| if blocked(x, y) { b'@' } else { b'.' })
            .collect();
        Self::from_glyphs(name, "octile", width, height, glyphs, "\n", true)
    }

    pub fn to_map_string(&self) -> String {
        let nl = self.line_ending;
        let mut out = format!(
            "type {}{nl}height {}{nl}width {}{nl}map",
            self.kind, self.height, self.width
        );
        for row in self.glyphs.chunks(self.width) {
            out.push_str(nl);
            out.push_str(std::str::from_utf8(row).expect("glyphs are ASCII"));
        }
        if self.trailing_newline {
            out.push_str(nl);
        }
        out
    }

    /// Nearest-neighbour upscaling by an integer factor.
    pub fn upscale(&self, factor: usize) -> GridMap {
        assert!(factor >= 1);
        let (w, h) = (self.width * factor, self.height * factor);
        let mut glyphs = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                glyphs.push(self.glyphs[(y / factor) * self.width + x / factor]);
            }
        }
        Self::from_glyphs(
            &self.name,
            &self.kind,
            w,
            h,
            glyphs,
            self.line_ending,
            self.trailing_newline,
        )
    }

    /// Out-of-bounds cells count as blocked.
    pub fn is_blocked(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return true;
        }
        self.blocked[y as usize * self.width + x as usize]
    }

    /// Blocked-cell count inside `[x0, x1) x [y0, y1)`, which must lie in bounds.
    pub fn blocked_in(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> u32 {
        let w = self.width + 1;
        self.sat[y1 * w + x1] + self.sat[y0 * w + x0]
            - self.sat[y0 * w + x1]
            - self.sat[y1 * w + x0]
    }

    pub fn free_cells(&self) -> usize {
        self.blocked.iter().filter(|b| !**b).count()
    }
}
