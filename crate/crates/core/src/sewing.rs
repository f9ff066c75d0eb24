//! Sewings: the Delaunay triangles that straddle the boundary, and the inner
//! and outer polygonal curves formed by their single-label edges.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::delaunay::{Triangulation, NO_NEIGHBOR};
use crate::error::SewingError;
use crate::geom::{Face, Label, Point2};
use crate::metric::Metric;

/// How a face that belongs to two mixed triangles enters the sums.
///
/// `Incidence` sums over (triangle, face) pairs, so such a face counts twice.
/// `Set` counts every face once. The face lists themselves are always sets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceCounting {
    #[default]
    Incidence,
    Set,
}

impl std::str::FromStr for FaceCounting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "incidence" => Ok(Self::Incidence),
            "set" => Ok(Self::Set),
            other => Err(format!("unknown face counting `{other}` (expected incidence or set)")),
        }
    }
}

/// Mixed-label triangles and the derived inner and outer face sets.
///
/// Face lists are sorted and duplicate-free: an edge shared by two mixed
/// triangles appears once, and is also listed in `shared_faces`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sewing {
    pub mixed_simplices: Vec<u32>,
    pub inner_faces: Vec<Face>,
    pub outer_faces: Vec<Face>,
    /// Faces of either side whose two incident triangles are both mixed.
    pub shared_faces: Vec<Face>,
    pub counting: FaceCounting,
}

/// Per-vertex share of sewing face length: half the total length of the
/// incident inner (`xi_minus`) or outer (`xi_plus`) faces.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexAttribution {
    pub xi_minus: Vec<f64>,
    pub xi_plus: Vec<f64>,
}

#[inline]
fn inside_count(v: [u32; 3], labels: &[Label]) -> u8 {
    v.iter().map(|&i| u8::from(labels[i as usize].is_inside())).sum()
}

impl Sewing {
    /// Extract the sewing of a labeled triangulation. A single-label sample
    /// yields an empty sewing.
    pub fn extract(tri: &Triangulation, labels: &[Label]) -> Result<Self, SewingError> {
        if labels.len() != tri.point_count() {
            return Err(SewingError::LengthMismatch {
                labels: labels.len(),
                points: tri.point_count(),
            });
        }
        let triangles = tri.triangles();
        let adjacency = tri.adjacency();
        let is_mixed = |t: usize| matches!(inside_count(triangles[t].vertices, labels), 1 | 2);

        let mut sewing = Sewing::default();
        for t in 0..triangles.len() {
            let v = triangles[t].vertices;
            let s = inside_count(v, labels);
            if s == 0 || s == 3 {
                continue;
            }
            sewing.mixed_simplices.push(t as u32);
            for i in 0..3 {
                let (a, b) = (v[(i + 1) % 3], v[(i + 2) % 3]);
                if labels[a as usize] != labels[b as usize] {
                    continue;
                }
                // Count a shared edge once: from the lower-indexed triangle
                // if both neighbours are mixed.
                let nb = adjacency[t][i];
                let face = Face::new(a, b);
                if nb != NO_NEIGHBOR && (nb as usize) < t && is_mixed(nb as usize) {
                    sewing.shared_faces.push(face);
                    continue;
                }
                if labels[a as usize].is_inside() {
                    sewing.inner_faces.push(face);
                } else {
                    sewing.outer_faces.push(face);
                }
            }
        }
        sewing.inner_faces.sort_unstable();
        sewing.outer_faces.sort_unstable();
        sewing.shared_faces.sort_unstable();
        Ok(sewing)
    }

    pub fn with_counting(mut self, counting: FaceCounting) -> Self {
        self.counting = counting;
        self
    }

    /// Number of mixed triangles containing `face` (1 or 2).
    pub fn multiplicity(&self, face: &Face) -> u8 {
        if self.shared_faces.binary_search(face).is_ok() {
            2
        } else {
            1
        }
    }

    /// Weight of `face` in the sewing sums under the current counting.
    #[inline]
    pub fn weight(&self, face: &Face) -> f64 {
        match self.counting {
            FaceCounting::Set => 1.0,
            FaceCounting::Incidence => f64::from(self.multiplicity(face)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.mixed_simplices.is_empty()
    }

    /// Drop the `k` longest faces from each side (see [`trim_extremities`]).
    pub fn trimmed(&self, k: usize, points: &[Point2], metric: Metric) -> Sewing {
        Sewing {
            mixed_simplices: self.mixed_simplices.clone(),
            inner_faces: trim_extremities(&self.inner_faces, k, points, metric),
            outer_faces: trim_extremities(&self.outer_faces, k, points, metric),
            shared_faces: self.shared_faces.clone(),
            counting: self.counting,
        }
    }

    /// Per-vertex attribution of face length, weighted as in the sums.
    pub fn attribute(&self, points: &[Point2], metric: Metric) -> VertexAttribution {
        let spread = |faces: &[Face]| {
            let mut xi = vec![0.0; points.len()];
            for f in faces {
                let [a, b] = f.vertices();
                let half = 0.5 * self.weight(f) * metric.length(&points[a as usize], &points[b as usize]);
                xi[a as usize] += half;
                xi[b as usize] += half;
            }
            xi
        };
        VertexAttribution {
            xi_minus: spread(&self.inner_faces),
            xi_plus: spread(&self.outer_faces),
        }
    }
}

/// Total length of a face list, each face counted once.
pub fn total_length(faces: &[Face], points: &[Point2], metric: Metric) -> f64 {
    faces
        .iter()
        .map(|f| {
            let [a, b] = f.vertices();
            metric.length(&points[a as usize], &points[b as usize])
        })
        .sum()
}

/// Remove the `k` longest faces. Equal lengths are broken by face key so the
/// result is deterministic. Asking for more faces than exist removes all of
/// them with a warning.
pub fn trim_extremities(faces: &[Face], k: usize, points: &[Point2], metric: Metric) -> Vec<Face> {
    if k == 0 {
        return faces.to_vec();
    }
    if k >= faces.len() {
        if k > faces.len() {
            warn!("trim count {k} exceeds sewing size {}; removing every face", faces.len());
        }
        return Vec::new();
    }
    let mut by_len: Vec<(f64, Face)> = faces
        .iter()
        .map(|f| {
            let [a, b] = f.vertices();
            (metric.length(&points[a as usize], &points[b as usize]), *f)
        })
        .collect();
    by_len.sort_unstable_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut kept: Vec<Face> = by_len[k..].iter().map(|&(_, f)| f).collect();
    kept.sort_unstable();
    kept
}
