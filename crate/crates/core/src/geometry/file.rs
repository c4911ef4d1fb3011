//! Geometry file format (TOML, one cell per document).
//!
//! ```toml
//! format_version = 1
//! name = "square with hole"
//!
//! [[components]]
//! orientation = "counterclockwise"
//! edges = [
//!   { kind = "line", start = [0.0, 0.0], end = [1.0, 0.0], corners = "both" },
//!   { kind = "line", start = [1.0, 0.0], end = [1.0, 1.0], corners = "both" },
//!   { kind = "line", start = [1.0, 1.0], end = [0.0, 1.0], corners = "both" },
//!   { kind = "line", start = [0.0, 1.0], end = [0.0, 0.0], corners = "both" },
//! ]
//!
//! [[components]]
//! orientation = "clockwise"
//! anchor = [0.5, 0.5]
//! edges = [{ kind = "closed_circle", center = [0.5, 0.5], radius = 0.25 }]
//! ```
//!
//! Exactly one component is counterclockwise (the outer boundary); the
//! others are holes. Open edges are listed in traversal order and `corners`
//! (`none`, `start`, `end`, `both`; default `none`) marks the ends that meet
//! a corner. Closed contours take their direction from the component.
//! Angles are in radians. `anchor` is optional.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{BoundaryComponent, CornerFlags, EdgeShape, Orientation, ParametricEdge, PuncturedCell};

/// Current `format_version`.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    pub format_version: u32,
    pub name: String,
    pub components: Vec<ComponentRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRecord {
    pub orientation: OrientationRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<[f64; 2]>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationRecord {
    Counterclockwise,
    Clockwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CornerRecord {
    #[default]
    None,
    Start,
    End,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    #[serde(flatten)]
    pub shape: ShapeRecord,
    #[serde(default)]
    pub corners: CornerRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeRecord {
    Line {
        start: [f64; 2],
        end: [f64; 2],
    },
    CircularArc {
        center: [f64; 2],
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
    EllipseArc {
        center: [f64; 2],
        semi_axes: [f64; 2],
        #[serde(default)]
        rotation: f64,
        start_angle: f64,
        end_angle: f64,
    },
    SinePerturbedLine {
        start: [f64; 2],
        end: [f64; 2],
        amplitude: f64,
        frequency: f64,
    },
    ClosedCircle {
        center: [f64; 2],
        radius: f64,
    },
    ClosedEllipse {
        center: [f64; 2],
        semi_axes: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
}

impl From<CornerRecord> for CornerFlags {
    fn from(c: CornerRecord) -> Self {
        match c {
            CornerRecord::None => CornerFlags::NONE,
            CornerRecord::Start => CornerFlags { start: true, end: false },
            CornerRecord::End => CornerFlags { start: false, end: true },
            CornerRecord::Both => CornerFlags::BOTH,
        }
    }
}

impl From<CornerFlags> for CornerRecord {
    fn from(c: CornerFlags) -> Self {
        match (c.start, c.end) {
            (false, false) => CornerRecord::None,
            (true, false) => CornerRecord::Start,
            (false, true) => CornerRecord::End,
            (true, true) => CornerRecord::Both,
        }
    }
}

impl ShapeRecord {
    fn to_shape(&self) -> EdgeShape<f64> {
        match *self {
            ShapeRecord::Line { start, end } => EdgeShape::Line { start, end },
            ShapeRecord::CircularArc {
                center,
                radius,
                start_angle,
                end_angle,
            } => EdgeShape::CircularArc {
                center,
                radius,
                start_angle,
                end_angle,
            },
            ShapeRecord::EllipseArc {
                center,
                semi_axes,
                rotation,
                start_angle,
                end_angle,
            } => EdgeShape::EllipseArc {
                center,
                semi_axes,
                rotation,
                start_angle,
                end_angle,
            },
            ShapeRecord::SinePerturbedLine {
                start,
                end,
                amplitude,
                frequency,
            } => EdgeShape::SinePerturbedLine {
                start,
                end,
                amplitude,
                frequency,
            },
            ShapeRecord::ClosedCircle { center, radius } => EdgeShape::ClosedCircle { center, radius },
            ShapeRecord::ClosedEllipse {
                center,
                semi_axes,
                rotation,
            } => EdgeShape::ClosedEllipse {
                center,
                semi_axes,
                rotation,
            },
        }
    }

    fn from_shape(shape: &EdgeShape<f64>) -> Self {
        match *shape {
            EdgeShape::Line { start, end } => ShapeRecord::Line { start, end },
            EdgeShape::CircularArc {
                center,
                radius,
                start_angle,
                end_angle,
            } => ShapeRecord::CircularArc {
                center,
                radius,
                start_angle,
                end_angle,
            },
            EdgeShape::EllipseArc {
                center,
                semi_axes,
                rotation,
                start_angle,
                end_angle,
            } => ShapeRecord::EllipseArc {
                center,
                semi_axes,
                rotation,
                start_angle,
                end_angle,
            },
            EdgeShape::SinePerturbedLine {
                start,
                end,
                amplitude,
                frequency,
            } => ShapeRecord::SinePerturbedLine {
                start,
                end,
                amplitude,
                frequency,
            },
            EdgeShape::ClosedCircle { center, radius } => ShapeRecord::ClosedCircle { center, radius },
            EdgeShape::ClosedEllipse {
                center,
                semi_axes,
                rotation,
            } => ShapeRecord::ClosedEllipse {
                center,
                semi_axes,
                rotation,
            },
        }
    }
}

impl GeometryFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = toml::from_str(text).map_err(|e| Error::Parse(format!("geometry file: {e}")))?;
        if file.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "geometry file: unsupported format_version {} (expected {FORMAT_VERSION})",
                file.format_version
            )));
        }
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("geometry records serialize")
    }

    /// Builds and validates the cell.
    pub fn to_cell(&self) -> Result<PuncturedCell<f64>> {
        let mut outer = None;
        let mut holes = Vec::new();
        for (ci, comp) in self.components.iter().enumerate() {
            let edges = comp
                .edges
                .iter()
                .enumerate()
                .map(|(ei, e)| {
                    ParametricEdge::new(e.shape.to_shape(), e.corners.into()).map_err(|err| {
                        Error::Parse(format!("geometry file: components[{ci}].edges[{ei}]: {err}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let orientation = match comp.orientation {
                OrientationRecord::Counterclockwise => Orientation::CounterClockwise,
                OrientationRecord::Clockwise => Orientation::Clockwise,
            };
            let component = BoundaryComponent::new(edges, orientation)
                .map_err(|err| Error::Parse(format!("geometry file: components[{ci}]: {err}")))?;
            match orientation {
                Orientation::CounterClockwise => {
                    if outer.replace(component).is_some() {
                        return Err(Error::Parse(
                            "geometry file: more than one counterclockwise (outer) component".into(),
                        ));
                    }
                    if comp.anchor.is_some() {
                        return Err(Error::Parse(format!(
                            "geometry file: components[{ci}]: the outer component takes no anchor"
                        )));
                    }
                }
                Orientation::Clockwise => holes.push((component, comp.anchor)),
            }
        }
        let outer = outer.ok_or_else(|| {
            Error::Parse("geometry file: no counterclockwise (outer) component".into())
        })?;
        PuncturedCell::new(self.name.clone(), outer, holes)
    }

    /// Record of an existing cell, anchors included.
    pub fn from_cell(cell: &PuncturedCell<f64>) -> Self {
        let record = |c: &BoundaryComponent<f64>, anchor: Option<[f64; 2]>| ComponentRecord {
            orientation: match c.orientation() {
                Orientation::CounterClockwise => OrientationRecord::Counterclockwise,
                Orientation::Clockwise => OrientationRecord::Clockwise,
            },
            anchor,
            edges: c
                .edges()
                .iter()
                .map(|e| {
                    let mut rec = EdgeRecord {
                        shape: ShapeRecord::from_shape(e.shape()),
                        corners: e.corners().into(),
                    };
                    if e.is_reversed() && !e.is_closed_contour() {
                        rec = reversed_record(rec);
                    }
                    rec
                })
                .collect(),
        };
        let mut components = vec![record(cell.outer(), None)];
        components.extend(cell.holes().iter().map(|h| record(&h.boundary, Some(h.anchor))));
        Self {
            format_version: FORMAT_VERSION,
            name: cell.name().to_string(),
            components,
        }
    }
}

/// Rewrites a reversed open edge as a forward record.
fn reversed_record(rec: EdgeRecord) -> EdgeRecord {
    let shape = match rec.shape {
        ShapeRecord::Line { start, end } => ShapeRecord::Line { start: end, end: start },
        ShapeRecord::CircularArc {
            center,
            radius,
            start_angle,
            end_angle,
        } => ShapeRecord::CircularArc {
            center,
            radius,
            start_angle: end_angle,
            end_angle: start_angle,
        },
        ShapeRecord::EllipseArc {
            center,
            semi_axes,
            rotation,
            start_angle,
            end_angle,
        } => ShapeRecord::EllipseArc {
            center,
            semi_axes,
            rotation,
            start_angle: end_angle,
            end_angle: start_angle,
        },
        ShapeRecord::SinePerturbedLine {
            start,
            end,
            amplitude,
            frequency,
        } => ShapeRecord::SinePerturbedLine {
            start: end,
            end: start,
            // exact for integer frequencies, where sin(f(2π - t)) = -sin(ft)
            amplitude,
            frequency,
        },
        closed => closed,
    };
    EdgeRecord {
        shape,
        corners: rec.corners,
    }
}

/// Reads a geometry file from disk.
pub fn load_cell(path: &std::path::Path) -> Result<PuncturedCell<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    GeometryFile::parse(&text)?.to_cell()
}
