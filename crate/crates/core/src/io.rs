//! File formats: vertex and edge CSV for size pairs, JSON for diagrams,
//! matchings and rectangle fields, and CSV tables for plotting.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::diagram::{Diagram, ExtendedPoint};
use crate::error::{Error, Result};
use crate::matching::{MatchTarget, Matching};
use crate::size_pair::SizePair;

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(input)
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn csv_rows<R: Read>(input: R) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut rows = Vec::new();
    for record in csv_reader(input).records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_error(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(parse_error(
                line,
                format!("expected 2 fields, found {}", record.len()),
            ));
        }
        rows.push((line, record));
    }
    Ok(rows)
}

/// Reads `id,value` lines.
pub fn parse_vertices<R: Read>(input: R) -> Result<Vec<(String, f64)>> {
    csv_rows(input)?
        .into_iter()
        .map(|(line, rec)| {
            let value = rec[1]
                .parse::<f64>()
                .map_err(|e| parse_error(line, format!("bad value {:?}: {e}", &rec[1])))?;
            Ok((rec[0].to_string(), value))
        })
        .collect()
}

/// Reads `u,v` lines.
pub fn parse_edges<R: Read>(input: R) -> Result<Vec<(String, String)>> {
    Ok(csv_rows(input)?
        .into_iter()
        .map(|(_, rec)| (rec[0].to_string(), rec[1].to_string()))
        .collect())
}

pub fn read_size_pair(vertices: &Path, edges: &Path) -> Result<SizePair> {
    let v = parse_vertices(std::fs::File::open(vertices)?)?;
    let e = parse_edges(std::fs::File::open(edges)?)?;
    SizePair::new(v, e)
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    infinity_x: f64,
    points: Vec<(f64, f64, i64)>,
}

fn json_error(e: serde_json::Error) -> Error {
    parse_error(e.line(), e.to_string())
}

pub fn diagram_to_json(d: &Diagram) -> String {
    let doc = DiagramJson {
        infinity_x: d.infinity_x(),
        points: d
            .points()
            .iter()
            .map(|(p, m)| (p.x, p.y, *m as i64))
            .collect(),
    };
    serde_json::to_string(&doc).expect("finite floats serialize")
}

pub fn diagram_from_json(text: &str) -> Result<Diagram> {
    let doc: DiagramJson = serde_json::from_str(text).map_err(json_error)?;
    let mut points = Vec::with_capacity(doc.points.len());
    for (x, y, m) in doc.points {
        if m < 1 {
            return Err(Error::InvalidDiagram(format!(
                "point ({x}, {y}) has multiplicity {m}"
            )));
        }
        points.push((x, y, m as usize));
    }
    Diagram::new(doc.infinity_x, points)
}

pub fn read_diagram(path: &Path) -> Result<Diagram> {
    diagram_from_json(&std::fs::read_to_string(path)?)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SideJson {
    Point([f64; 2]),
    Tag(String),
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    left: SideJson,
    right: SideJson,
}

#[derive(Serialize, Deserialize)]
struct MatchingJson {
    cost: f64,
    pairs: Vec<PairJson>,
}

fn side_to_json(t: MatchTarget) -> SideJson {
    match t {
        MatchTarget::Point(p) => SideJson::Point([p.x, p.y]),
        MatchTarget::Infinity => SideJson::Tag("inf".into()),
        MatchTarget::Diagonal => SideJson::Tag("diag".into()),
    }
}

fn side_from_json(s: SideJson) -> Result<MatchTarget> {
    match s {
        SideJson::Point([x, y]) => Ok(MatchTarget::Point(ExtendedPoint::proper(x, y)?)),
        SideJson::Tag(t) if t == "inf" => Ok(MatchTarget::Infinity),
        SideJson::Tag(t) if t == "diag" => Ok(MatchTarget::Diagonal),
        SideJson::Tag(t) => Err(Error::InvalidDiagram(format!(
            "unknown matching side {t:?}"
        ))),
    }
}

pub fn matching_to_json(m: &Matching) -> String {
    let doc = MatchingJson {
        cost: m.bottleneck_cost,
        pairs: m
            .pairs
            .iter()
            .map(|&(a, b)| PairJson {
                left: side_to_json(a),
                right: side_to_json(b),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("finite floats serialize")
}

pub fn matching_from_json(text: &str) -> Result<Matching> {
    let doc: MatchingJson = serde_json::from_str(text).map_err(json_error)?;
    let pairs = doc
        .pairs
        .into_iter()
        .map(|p| Ok((side_from_json(p.left)?, side_from_json(p.right)?)))
        .collect::<Result<_>>()?;
    Ok(Matching {
        pairs,
        bottleneck_cost: doc.cost,
    })
}

/// Serialized form of a rectangle field; values are rounded to `f64`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectFieldJson {
    pub x_breaks: Vec<f64>,
    pub y_breaks_per_column: Vec<Vec<f64>>,
    pub values_per_column: Vec<Vec<f64>>,
    #[serde(rename = "S")]
    pub s: f64,
    pub min_phi: f64,
}

/// Bound chain with its witnesses; the matching is embedded as Matching JSON.
pub fn bound_report_to_json(r: &BoundReport) -> String {
    let matching: serde_json::Value =
        serde_json::from_str(&matching_to_json(&r.matching)).expect("valid matching JSON");
    let witness = r
        .earlier_witness
        .map(|((x, y), (xi, eta))| serde_json::json!({"first": [x, y], "second": [xi, eta]}));
    serde_json::json!({
        "d_match": r.d_match,
        "earlier_bound_s": r.earlier_bound_s,
        "exact_pseudo_distance": r.exact_pseudo_distance,
        "chain_holds": r.chain_holds(),
        "earlier_witness": witness,
        "matching": matching,
    })
    .to_string()
}

/// `x,y,mult` rows, one per proper cornerpoint, preceded by the point at
/// infinity with an empty ordinate.
pub fn diagram_to_csv(d: &Diagram) -> String {
    let mut out = String::from("x,y,mult\n");
    out.push_str(&format!("{},,1\n", d.infinity_x()));
    for (p, m) in d.points() {
        out.push_str(&format!("{},{},{}\n", p.x, p.y, m));
    }
    out
}

/// `x1,y1,x2,y2` segments of a matching; a diagonal side is drawn at the
/// foot of the other point's perpendicular projection, infinity as an empty
/// ordinate.
pub fn matching_to_csv(m: &Matching, left: &Diagram, right: &Diagram) -> String {
    let mut out = String::from("x1,y1,x2,y2\n");
    for &(a, b) in &m.pairs {
        let row = match (a, b) {
            (MatchTarget::Infinity, MatchTarget::Infinity) => {
                format!("{},,{},", left.infinity_x(), right.infinity_x())
            }
            (MatchTarget::Point(p), MatchTarget::Point(q)) => {
                format!("{},{},{},{}", p.x, p.y, q.x, q.y)
            }
            (MatchTarget::Point(p), _) => {
                let t = (p.x + p.y) / 2.0;
                format!("{},{},{t},{t}", p.x, p.y)
            }
            (_, MatchTarget::Point(q)) => {
                let t = (q.x + q.y) / 2.0;
                format!("{t},{t},{},{}", q.x, q.y)
            }
            _ => continue,
        };
        out.push_str(&row);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::matching_distance;

    #[test]
    fn vertex_and_edge_csv() {
        let v = parse_vertices("a, 1.5\n# comment\nb,2\n\n".as_bytes()).unwrap();
        assert_eq!(v, vec![("a".into(), 1.5), ("b".into(), 2.0)]);
        let e = parse_edges("a,b\n".as_bytes()).unwrap();
        assert_eq!(e, vec![("a".into(), "b".into())]);
    }

    #[test]
    fn malformed_csv_reports_line() {
        let err = parse_vertices("a,1\nb,x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_vertices("a,1\nb\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn diagram_json_round_trip() {
        let d = Diagram::new(0.1, [(1.0 / 3.0, 2.0, 2), (0.0, 3.0, 1)]).unwrap();
        let text = diagram_to_json(&d);
        assert_eq!(diagram_from_json(&text).unwrap(), d);
        assert_eq!(
            diagram_to_json(&Diagram::empty(4.0)),
            r#"{"infinity_x":4.0,"points":[]}"#
        );
    }

    #[test]
    fn diagram_json_rejections() {
        let below = r#"{"infinity_x":0,"points":[[2,1,1]]}"#;
        assert!(matches!(
            diagram_from_json(below),
            Err(Error::OutsideHalfPlane { .. })
        ));
        let zero = r#"{"infinity_x":0,"points":[[1,2,0]]}"#;
        assert!(matches!(
            diagram_from_json(zero),
            Err(Error::InvalidDiagram(_))
        ));
        assert!(matches!(diagram_from_json("{"), Err(Error::Parse { .. })));
    }

    #[test]
    fn matching_json_round_trip() {
        let d1 = Diagram::new(0.0, [(1.0, 3.0, 1), (0.1, 0.2, 1)]).unwrap();
        let d2 = Diagram::new(0.5, [(1.2, 2.9, 1)]).unwrap();
        let (_, m) = matching_distance(&d1, &d2);
        let text = matching_to_json(&m);
        assert!(text.contains(r#""left":"inf""#));
        assert!(text.contains(r#""right":"diag""#));
        assert_eq!(matching_from_json(&text).unwrap(), m);
    }

    #[test]
    fn csv_tables() {
        let d = Diagram::new(0.0, [(1.0, 3.0, 1)]).unwrap();
        assert_eq!(diagram_to_csv(&d), "x,y,mult\n0,,1\n1,3,1\n");
        let (_, m) = matching_distance(&d, &Diagram::empty(0.0));
        assert_eq!(
            matching_to_csv(&m, &d, &Diagram::empty(0.0)),
            "x1,y1,x2,y2\n0,,0,\n1,3,2,2\n"
        );
    }
}
