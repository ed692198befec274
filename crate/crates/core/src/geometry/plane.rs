//! Support planes with unit normal and explicit offset.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{GeometryError, Point3};

/// The plane `{p : normal · p = d}` with a unit normal.
///
/// The offset is explicit: a normal alone does not determine the plane,
/// and a tabletop's height has to live somewhere. Serialized as
/// `{"normal": [3 numbers], "d": number}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlaneRepr", into = "PlaneRepr")]
pub struct Plane {
    normal: Vector3<f64>,
    d: f64,
}

#[derive(Serialize, Deserialize)]
struct PlaneRepr {
    #[serde(
        serialize_with = "crate::serde_util::serialize_vec3",
        deserialize_with = "crate::serde_util::deserialize_finite_vec3"
    )]
    normal: Vector3<f64>,
    d: f64,
}

impl From<Plane> for PlaneRepr {
    fn from(p: Plane) -> Self {
        Self {
            normal: p.normal,
            d: p.d,
        }
    }
}

impl TryFrom<PlaneRepr> for Plane {
    type Error = GeometryError;

    fn try_from(repr: PlaneRepr) -> Result<Self, Self::Error> {
        Plane::new(repr.normal, repr.d)
    }
}

impl Plane {
    /// Build a plane from any nonzero normal; the normal is rescaled to
    /// unit length and `d` with it, so the point set is unchanged.
    pub fn new(normal: Vector3<f64>, d: f64) -> Result<Self, GeometryError> {
        if normal.iter().any(|v| !v.is_finite()) || !d.is_finite() {
            return Err(GeometryError::NonFinite("Plane"));
        }
        let len = normal.norm();
        if len < 1e-12 {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(Self {
            normal: normal / len,
            d: d / len,
        })
    }

    /// The horizontal plane `z = height` (normal +z).
    pub fn horizontal(height: f64) -> Self {
        Self {
            normal: Vector3::new(0.0, 0.0, 1.0),
            d: height,
        }
    }

    pub fn normal(&self) -> Vector3<f64> {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.d
    }

    /// Signed distance of `p` from the plane.
    pub fn signed_distance(&self, p: Point3) -> f64 {
        self.normal.dot(&p.to_vector()) - self.d
    }

    /// Orthogonal projection of `p` onto the plane.
    pub fn project_point(&self, p: Point3) -> Point3 {
        let p = p.to_vector();
        Point3::from_vector(p - self.normal * (self.normal.dot(&p) - self.d))
    }

    /// An orthonormal in-plane basis `(e1, e2)` with `e1 x e2 = normal`.
    ///
    /// For near-horizontal planes `e1` is chosen along world +x so that
    /// yaw angles measured in this basis match the usual rotation about
    /// +z. The basis depends deterministically on the normal only.
    pub fn basis(&self) -> (Vector3<f64>, Vector3<f64>) {
        let n = self.normal;
        let seed = if n.x.abs() <= 0.9 {
            Vector3::new(1.0, 0.0, 0.0)
        } else {
            Vector3::new(0.0, 1.0, 0.0)
        };
        let e1 = (seed - n * seed.dot(&n)).normalize();
        let e2 = n.cross(&e1);
        (e1, e2)
    }
}
