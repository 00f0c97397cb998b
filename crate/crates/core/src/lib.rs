//! Reduced size functions of finite connected graphs, their cornerpoint
//! diagrams, and the matching distance between diagrams.
//!
//! A [`SizePair`] is a connected graph whose vertices carry a real value (the
//! measuring function). The reduced size function `ℓ*(x, y)` counts the
//! connected components of the sublevel set `{φ ≤ y}` that contain at least
//! one vertex with `φ ≤ x`. It is completely described by a [`Diagram`]: one
//! cornerpoint at infinity plus a finite multiset of proper cornerpoints.
//!
//! The [`matching`] module compares diagrams through the bottleneck matching
//! distance, [`bounds`] relates that distance to the natural pseudo-distance
//! between size pairs, and [`realize`] builds two piecewise-linear fields on a
//! rectangle whose diagrams are prescribed and whose sup-norm gap equals the
//! matching distance.
//!
//! ```
//! use sizematch::{SizePair, extract_diagram, matching_distance};
//!
//! let path = SizePair::path(&[0.0, 2.0, 1.0, 3.0, 0.0]).unwrap();
//! let d = extract_diagram(&path);
//! assert_eq!(d.infinity_x(), 0.0);
//! assert_eq!(d.total_multiplicity(), 2);
//! let (dist, _) = matching_distance(&d, &d);
//! assert_eq!(dist, 0.0);
//! ```

pub mod bounds;
pub mod diagram;
mod error;
pub mod gen;
pub mod io;
pub mod matching;
pub mod realize;
pub mod selftest;
pub mod size_pair;
mod union_find;

pub use bounds::{
    bound_report, earlier_bound, exact_graph_pseudo_distance, BoundReport, EarlierBound,
};
pub use diagram::{
    count_in_square, evaluate_diagram, extract_diagram, multiplicity, multiplicity_at_infinity,
    Diagram, ExtendedPoint,
};
pub use error::{Error, Result};
pub use matching::{
    brute_force_matching_distance, matching_distance, pseudo_distance, stability_probe,
    MatchTarget, Matching, PlanePoint,
};
pub use realize::{discretize, realize, RealizationParams, RectField};
pub use size_pair::{
    reduced_size_function, shifted_inequality_check, sublevel_components, SizePair,
    SublevelPartition,
};
