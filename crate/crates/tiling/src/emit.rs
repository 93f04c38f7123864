//! Deterministic emission of a tiling as JSON or SVG, and the JSON loader.

use crate::build::{classify_vertices, Side};
use crate::{Parity, Square, Tiling, TilingError, VertexClass, VertexRecord};
use cylinder::CylSpec;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Output format of [`Tiling::emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Svg,
    Json,
}

impl std::str::FromStr for EmitFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "svg" => Ok(EmitFormat::Svg),
            "json" => Ok(EmitFormat::Json),
            other => Err(format!("unknown emit format {other:?} (expected svg or json)")),
        }
    }
}

pub(crate) fn emit(t: &Tiling, format: EmitFormat, path: &Path) -> Result<(), TilingError> {
    let contents = match format {
        EmitFormat::Json => t.to_json_string(),
        EmitFormat::Svg => t.to_svg_string()?,
    };
    std::fs::write(path, contents)?;
    Ok(())
}

const FORMAT_NAME: &str = "xdtile-tiling";
const FORMAT_VERSION: u32 = 1;

/// Edge address in the document: cylinder, column, row, side letter.
type EdgeDoc = (usize, u64, u64, char);

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    class: String,
    corner_count: u8,
    position: (usize, u64, u64),
}

#[derive(Serialize, Deserialize)]
struct TilingDoc {
    format: String,
    version: u32,
    d: u64,
    cylinders: Vec<CylSpec>,
    squares: Vec<(usize, u64, u64)>,
    /// Each glued pair once: lesser edge, greater edge, parity letter.
    gluing: Vec<(EdgeDoc, EdgeDoc, char)>,
    vertices: Vec<VertexDoc>,
}

fn edge_doc(t: &Tiling, e: usize) -> EdgeDoc {
    let sq = t.squares[e / 4];
    (sq.cyl, sq.col, sq.row, Side::from_index(e % 4).letter())
}

pub(crate) fn to_json_string(t: &Tiling) -> String {
    let mut gluing = Vec::with_capacity(t.gluing.len() / 2);
    for (e, &(p, parity)) in t.gluing.iter().enumerate() {
        if e < p as usize {
            gluing.push((edge_doc(t, e), edge_doc(t, p as usize), parity.letter()));
        }
    }
    let doc = TilingDoc {
        format: FORMAT_NAME.to_string(),
        version: FORMAT_VERSION,
        d: t.d,
        cylinders: t.cyls.clone(),
        squares: t.squares.iter().map(|s| (s.cyl, s.col, s.row)).collect(),
        gluing,
        vertices: t
            .vertices
            .iter()
            .map(|v| VertexDoc {
                class: v.class.label().to_string(),
                corner_count: v.corner_count,
                position: v.position,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("tiling document serializes")
}

pub(crate) fn from_json_str(s: &str) -> Result<Tiling, TilingError> {
    let doc: TilingDoc =
        serde_json::from_str(s).map_err(|e| TilingError::Format(e.to_string()))?;
    if doc.format != FORMAT_NAME {
        return Err(TilingError::Format(format!(
            "unexpected document format {:?}",
            doc.format
        )));
    }
    if doc.version != FORMAT_VERSION {
        return Err(TilingError::Format(format!(
            "unsupported document version {}",
            doc.version
        )));
    }
    let cyls = doc.cylinders;
    if cyls.is_empty() {
        return Err(TilingError::Format("no cylinders".into()));
    }
    for c in &cyls {
        if c.d() != doc.d {
            return Err(TilingError::Format(format!(
                "cylinder {c:?} has degree {} instead of {}",
                c.d(),
                doc.d
            )));
        }
        if CylSpec::new(c.w1, c.s1, c.t1, c.w2, c.s2, c.t2) != *c {
            return Err(TilingError::Format(format!(
                "cylinder {c:?} is not in canonical component order"
            )));
        }
    }
    if !cyls.windows(2).all(|pair| pair[0] < pair[1]) {
        return Err(TilingError::Format(
            "cylinders are not sorted and distinct".into(),
        ));
    }
    // Squares must be the canonical row-major layout of the cylinders.
    let mut squares = Vec::new();
    let mut sq_start = Vec::with_capacity(cyls.len());
    for (ci, c) in cyls.iter().enumerate() {
        sq_start.push(squares.len());
        for row in 0..c.height() {
            for col in 0..c.circumference() {
                squares.push(Square { cyl: ci, col, row });
            }
        }
    }
    let listed: Vec<Square> = doc
        .squares
        .iter()
        .map(|&(cyl, col, row)| Square { cyl, col, row })
        .collect();
    if listed != squares {
        return Err(TilingError::Format(
            "squares are not in canonical cylinder order".into(),
        ));
    }
    let edge_id = |(cyl, col, row, letter): EdgeDoc| -> Result<usize, TilingError> {
        let side = Side::from_letter(letter)
            .ok_or_else(|| TilingError::Format(format!("bad side letter {letter:?}")))?;
        if cyl >= cyls.len() || col >= cyls[cyl].circumference() || row >= cyls[cyl].height() {
            return Err(TilingError::Format(format!(
                "edge address out of range: {:?}",
                (cyl, col, row, letter)
            )));
        }
        let sq = sq_start[cyl] + (row * cyls[cyl].circumference() + col) as usize;
        Ok(4 * sq + side.index())
    };
    let mut gluing: Vec<Option<(u32, Parity)>> = vec![None; 4 * squares.len()];
    for &(a, b, parity_letter) in &doc.gluing {
        let parity = Parity::from_letter(parity_letter)
            .ok_or_else(|| TilingError::Format(format!("bad parity letter {parity_letter:?}")))?;
        let (ea, eb) = (edge_id(a)?, edge_id(b)?);
        for (from, to) in [(ea, eb), (eb, ea)] {
            if gluing[from].is_some() {
                return Err(TilingError::Format(format!(
                    "edge {:?} glued twice",
                    edge_doc_raw(&squares, from)
                )));
            }
            gluing[from] = Some((to as u32, parity));
        }
    }
    let gluing: Vec<(u32, Parity)> = gluing
        .into_iter()
        .enumerate()
        .map(|(e, g)| {
            g.ok_or_else(|| {
                TilingError::Format(format!("edge {:?} unglued", edge_doc_raw(&squares, e)))
            })
        })
        .collect::<Result<_, _>>()?;
    let n_edges = gluing.len();
    let mut t = Tiling {
        d: doc.d,
        cyls,
        squares,
        vertices: Vec::new(),
        gluing,
        corner_vertex: vec![u32::MAX; n_edges],
        dev_offsets: None,
        sq_start,
    };
    classify_vertices(&mut t).map_err(TilingError::Format)?;
    let parsed: Vec<VertexRecord> = doc
        .vertices
        .iter()
        .map(|v| {
            Ok(VertexRecord {
                class: VertexClass::from_label(&v.class).ok_or_else(|| {
                    TilingError::Format(format!("bad vertex class {:?}", v.class))
                })?,
                corner_count: v.corner_count,
                position: v.position,
            })
        })
        .collect::<Result<_, TilingError>>()?;
    if parsed != t.vertices {
        return Err(TilingError::Format(
            "vertex table disagrees with the gluing".into(),
        ));
    }
    t.dev_offsets = crate::points::develop(&t);
    Ok(t)
}

fn edge_doc_raw(squares: &[Square], e: usize) -> EdgeDoc {
    let sq = squares[e / 4];
    (sq.cyl, sq.col, sq.row, Side::from_index(e % 4).letter())
}

/// Pixels per unit square.
const UNIT: u64 = 24;

pub(crate) fn to_svg_string(t: &Tiling) -> Result<String, TilingError> {
    // One drawing row per story, lighthouse on top, eave at the bottom;
    // X(2) has the single pillowcase cylinder.
    let story_rows: Vec<Vec<usize>> = if t.d == 2 {
        vec![vec![0]]
    } else {
        t.stories()?.into_iter().map(|s| s.cylinders).collect()
    };
    let wmax = (0..t.cyls.len()).map(|ci| t.width(ci)).max().expect("cylinders exist");
    let margin = UNIT;
    // Lay out the cylinders: centered horizontally, stories separated by a gap.
    let mut origin = vec![(0u64, 0u64); t.cyls.len()];
    let mut y = margin;
    for row in &story_rows {
        for &ci in row.iter().rev() {
            let x = margin + (wmax - t.width(ci)) * UNIT / 2;
            origin[ci] = (x, y);
            y += t.height(ci) * UNIT;
        }
        y += UNIT; // gap between stories
    }
    let width = 2 * margin + wmax * UNIT;
    let height = y - UNIT + margin;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(svg, "  <rect width=\"{width}\" height=\"{height}\" fill=\"#fdfdfd\"/>");
    // Unit grid, then a heavier outline per cylinder.
    for (ci, &(x0, y0)) in origin.iter().enumerate() {
        let (w, h) = (t.width(ci), t.height(ci));
        for row in 0..h {
            for col in 0..w {
                let _ = writeln!(
                    svg,
                    "  <rect x=\"{}\" y=\"{}\" width=\"{UNIT}\" height=\"{UNIT}\" \
                     fill=\"white\" stroke=\"#bbbbbb\"/>",
                    x0 + col * UNIT,
                    y0 + row * UNIT
                );
            }
        }
        let _ = writeln!(
            svg,
            "  <rect x=\"{x0}\" y=\"{y0}\" width=\"{}\" height=\"{}\" \
             fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>",
            w * UNIT,
            h * UNIT
        );
    }
    // One mark per vertex at its representative position.
    for v in &t.vertices {
        let (ci, x, y) = v.position;
        let (x0, y0) = origin[ci];
        let (cx, cy) = (x0 + x * UNIT, y0 + y * UNIT);
        let style = match v.class {
            VertexClass::Zero => "fill=\"black\"",
            VertexClass::NonCuspPole => "fill=\"white\" stroke=\"black\" stroke-width=\"2\"",
            VertexClass::CuspPole => "fill=\"red\"",
            VertexClass::Regular => continue,
        };
        let _ = writeln!(svg, "  <circle cx=\"{cx}\" cy=\"{cy}\" r=\"5\" {style}/>");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
