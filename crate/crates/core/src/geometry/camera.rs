//! Pinhole camera: intrinsics, rigid extrinsics, projection and
//! plane-constrained backprojection.

use nalgebra::{Matrix3, Matrix4, SMatrix, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use super::linsys::solve3;
use super::{GeometryError, Plane, Point2, Point3, MIN_DEPTH, PIVOT_RATIO_EPS, ROTATION_EPS};

/// Pinhole intrinsics: focal lengths and principal point, in pixels.
/// The model is linear (no skew, no distortion).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl Intrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64) -> Result<Self, GeometryError> {
        let k = Self { fx, fy, cx, cy };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if ![self.fx, self.fy, self.cx, self.cy]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(GeometryError::NonFinite("Intrinsics"));
        }
        if self.fx <= 0.0 || self.fy <= 0.0 {
            return Err(GeometryError::InvalidIntrinsics {
                fx: self.fx,
                fy: self.fy,
            });
        }
        Ok(())
    }

    /// 3x4 projection block `[[fx, 0, cx, 0], [0, fy, cy, 0], [0, 0, 1, 0]]`.
    pub fn matrix(&self) -> SMatrix<f64, 3, 4> {
        SMatrix::<f64, 3, 4>::new(
            self.fx, 0.0, self.cx, 0.0, 0.0, self.fy, self.cy, 0.0, 0.0, 0.0, 1.0, 0.0,
        )
    }
}

/// World-to-camera rigid pose: camera-frame coordinates of a world point
/// `p` are `r * p + t`.
///
/// Serialized as `{"r": [9 row-major numbers], "t": [3 numbers]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExtrinsicsRepr", into = "ExtrinsicsRepr")]
pub struct Extrinsics {
    r: Matrix3<f64>,
    t: Vector3<f64>,
}

#[derive(Serialize, Deserialize)]
struct ExtrinsicsRepr {
    #[serde(
        serialize_with = "crate::serde_util::serialize_mat3",
        deserialize_with = "crate::serde_util::deserialize_mat3"
    )]
    r: Matrix3<f64>,
    #[serde(
        serialize_with = "crate::serde_util::serialize_vec3",
        deserialize_with = "crate::serde_util::deserialize_vec3"
    )]
    t: Vector3<f64>,
}

impl From<Extrinsics> for ExtrinsicsRepr {
    fn from(e: Extrinsics) -> Self {
        Self { r: e.r, t: e.t }
    }
}

impl TryFrom<ExtrinsicsRepr> for Extrinsics {
    type Error = GeometryError;

    fn try_from(repr: ExtrinsicsRepr) -> Result<Self, Self::Error> {
        Extrinsics::new(repr.r, repr.t)
    }
}

impl Extrinsics {
    /// Build a pose, validating that `r` is orthonormal with determinant +1.
    pub fn new(r: Matrix3<f64>, t: Vector3<f64>) -> Result<Self, GeometryError> {
        if r.iter().any(|v| !v.is_finite()) || t.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite("Extrinsics"));
        }
        let ortho = (r.transpose() * r - Matrix3::identity()).norm();
        let det = r.determinant();
        if ortho > ROTATION_EPS || (det - 1.0).abs() > ROTATION_EPS {
            return Err(GeometryError::InvalidRotation { ortho, det });
        }
        Ok(Self { r, t })
    }

    pub fn identity() -> Self {
        Self {
            r: Matrix3::identity(),
            t: Vector3::zeros(),
        }
    }

    /// A pose with the camera at `eye`, its optical (+z) axis pointing at
    /// `target`. `up_hint` fixes the roll; it must not be parallel to the
    /// viewing direction.
    pub fn look_at(
        eye: Vector3<f64>,
        target: Vector3<f64>,
        up_hint: Vector3<f64>,
    ) -> Result<Self, GeometryError> {
        let forward = target - eye;
        if forward.norm() < MIN_DEPTH {
            return Err(GeometryError::NonFinite("look_at: eye equals target"));
        }
        let z = forward.normalize();
        let x = up_hint.cross(&z);
        if x.norm() < 1e-9 {
            return Err(GeometryError::InvalidRotation {
                ortho: 0.0,
                det: 0.0,
            });
        }
        let x = x.normalize();
        let y = z.cross(&x);
        let r = Matrix3::from_rows(&[x.transpose(), y.transpose(), z.transpose()]);
        let t = -r * eye;
        Self::new(r, t)
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.r
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.t
    }

    /// Camera center in world coordinates: `-rᵀ t`.
    pub fn camera_center(&self) -> Vector3<f64> {
        -self.r.transpose() * self.t
    }

    /// Camera-frame coordinates of a world point.
    pub fn to_camera_frame(&self, p: Point3) -> Vector3<f64> {
        self.r * p.to_vector() + self.t
    }

    /// 4x4 homogeneous pose matrix `[[r, t], [0, 1]]`.
    pub fn matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.r);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.t);
        m
    }
}

/// A calibrated linear camera: intrinsics composed with a rigid pose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraModel {
    pub intrinsics: Intrinsics,
    pub extrinsics: Extrinsics,
}

impl CameraModel {
    pub fn new(intrinsics: Intrinsics, extrinsics: Extrinsics) -> Result<Self, GeometryError> {
        intrinsics.validate()?;
        Ok(Self {
            intrinsics,
            extrinsics,
        })
    }

    /// The 3x4 projection matrix (intrinsic block times pose). Always rank
    /// 3 for valid intrinsics and a rigid pose.
    pub fn projection_matrix(&self) -> SMatrix<f64, 3, 4> {
        self.intrinsics.matrix() * self.extrinsics.matrix()
    }

    /// Project a world point to pixels with the default depth threshold.
    pub fn project(&self, p: Point3) -> Result<Point2, GeometryError> {
        self.project_with(p, MIN_DEPTH)
    }

    /// Project a world point, rejecting points with camera-frame depth at
    /// or below `min_depth`.
    pub fn project_with(&self, p: Point3, min_depth: f64) -> Result<Point2, GeometryError> {
        p.check_finite()?;
        let c = self.extrinsics.to_camera_frame(p);
        if c.z <= min_depth {
            return Err(GeometryError::BehindCamera { depth: c.z });
        }
        let k = &self.intrinsics;
        Ok(Point2::new(
            k.fx * c.x / c.z + k.cx,
            k.fy * c.y / c.z + k.cy,
        ))
    }

    /// Recover the world point whose image is `v` and which lies on
    /// `plane`, with default thresholds.
    pub fn backproject_to_plane(&self, v: Point2, plane: &Plane) -> Result<Point3, GeometryError> {
        self.backproject_to_plane_with(v, plane, PIVOT_RATIO_EPS, MIN_DEPTH)
    }

    /// Plane-constrained backprojection.
    ///
    /// Solves the 3x3 system formed by the two pixel constraints
    /// `Cᵢ·p̃ - vᵢ·(C₃·p̃) = 0` and the plane constraint `n·p = d`. A
    /// singular system means the viewing ray is parallel to the plane; a
    /// recovered point with depth at or below `min_depth` is behind the
    /// camera.
    pub fn backproject_to_plane_with(
        &self,
        v: Point2,
        plane: &Plane,
        pivot_ratio_eps: f64,
        min_depth: f64,
    ) -> Result<Point3, GeometryError> {
        v.check_finite()?;
        let c = self.projection_matrix();
        let r0: Vector4<f64> = (c.row(0) - c.row(2).map(|e| e * v.x)).transpose();
        let r1: Vector4<f64> = (c.row(1) - c.row(2).map(|e| e * v.y)).transpose();
        let n = plane.normal();

        let a = Matrix3::new(
            r0[0],
            r0[1],
            r0[2],
            r1[0],
            r1[1],
            r1[2],
            n.x,
            n.y,
            n.z,
        );
        let b = Vector3::new(-r0[3], -r1[3], plane.offset());

        let p = solve3(&a, &b, pivot_ratio_eps).map_err(|_| GeometryError::RayParallelToPlane)?;
        let point = Point3::from_vector(p);
        let depth = self.extrinsics.to_camera_frame(point).z;
        if depth <= min_depth {
            return Err(GeometryError::BehindCamera { depth });
        }
        Ok(point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn downward_camera(height: f64) -> CameraModel {
        // Looking straight down at the origin from (0, 0, height).
        let ext = Extrinsics::look_at(
            Vector3::new(0.0, 0.0, height),
            Vector3::zeros(),
            Vector3::new(1.0, 0.0, 0.0),
        )
        .unwrap();
        CameraModel::new(Intrinsics::new(500.0, 500.0, 320.0, 240.0).unwrap(), ext).unwrap()
    }

    #[test]
    fn optical_axis_projects_to_principal_point() {
        let cam = CameraModel::new(
            Intrinsics::new(1.0, 1.0, 0.0, 0.0).unwrap(),
            Extrinsics::identity(),
        )
        .unwrap();
        let v = cam.project(Point3::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(v, Point2::new(0.0, 0.0));
    }

    #[test]
    fn off_axis_projection_hand_computed() {
        let cam = CameraModel::new(
            Intrinsics::new(500.0, 500.0, 320.0, 240.0).unwrap(),
            Extrinsics::identity(),
        )
        .unwrap();
        let v = cam.project(Point3::new(1.0, 0.0, 2.0)).unwrap();
        assert!((v.x - 570.0).abs() < 1e-12);
        assert!((v.y - 240.0).abs() < 1e-12);
    }

    #[test]
    fn behind_camera_rejected() {
        let cam = CameraModel::new(
            Intrinsics::new(500.0, 500.0, 320.0, 240.0).unwrap(),
            Extrinsics::identity(),
        )
        .unwrap();
        let err = cam.project(Point3::new(0.0, 0.0, -1.0)).unwrap_err();
        assert!(matches!(err, GeometryError::BehindCamera { .. }));
    }

    #[test]
    fn principal_ray_hits_plane_under_camera() {
        let cam = downward_camera(1.0);
        let plane = Plane::new(Vector3::new(0.0, 0.0, 1.0), 0.0).unwrap();
        let p = cam
            .backproject_to_plane(Point2::new(320.0, 240.0), &plane)
            .unwrap();
        assert!(p.to_vector().norm() < 1e-9);
    }

    #[test]
    fn backprojection_inverts_projection_on_plane() {
        let cam = downward_camera(1.2);
        let plane = Plane::new(Vector3::new(0.0, 0.0, 1.0), 0.0).unwrap();
        let p = Point3::new(0.21, -0.13, 0.0);
        let v = cam.project(p).unwrap();
        let q = cam.backproject_to_plane(v, &plane).unwrap();
        assert!(p.distance(&q) < 1e-10);
    }

    #[test]
    fn ray_parallel_to_plane_detected() {
        // Camera at height 0.5 looking along +x: the principal ray is
        // horizontal and never meets the z = 0 plane.
        let ext = Extrinsics::look_at(
            Vector3::new(0.0, 0.0, 0.5),
            Vector3::new(1.0, 0.0, 0.5),
            Vector3::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        let cam =
            CameraModel::new(Intrinsics::new(500.0, 500.0, 320.0, 240.0).unwrap(), ext).unwrap();
        let plane = Plane::new(Vector3::new(0.0, 0.0, 1.0), 0.0).unwrap();
        let err = cam
            .backproject_to_plane(Point2::new(320.0, 240.0), &plane)
            .unwrap_err();
        assert!(matches!(err, GeometryError::RayParallelToPlane));
    }

    #[test]
    fn look_at_produces_valid_rotation() {
        let ext = Extrinsics::look_at(
            Vector3::new(0.3, -0.2, 1.1),
            Vector3::new(0.0, 0.1, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
        )
        .unwrap();
        let r = ext.rotation();
        assert!((r.determinant() - 1.0).abs() < 1e-12);
        assert!((r.transpose() * r - Matrix3::identity()).norm() < 1e-12);
        // The target must land on the optical axis in front of the camera.
        let c = ext.to_camera_frame(Point3::new(0.0, 0.1, 0.0));
        assert!(c.x.abs() < 1e-12 && c.y.abs() < 1e-12 && c.z > 0.0);
    }

    #[test]
    fn invalid_rotation_rejected() {
        let m = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0);
        assert!(matches!(
            Extrinsics::new(m, Vector3::zeros()),
            Err(GeometryError::InvalidRotation { .. })
        ));
    }

    #[test]
    fn camera_json_shape() {
        let cam = downward_camera(1.0);
        let s = serde_json::to_string(&cam).unwrap();
        assert!(s.contains("\"intrinsics\""));
        assert!(s.contains("\"extrinsics\""));
        let back: CameraModel = serde_json::from_str(&s).unwrap();
        assert_eq!(cam, back);
    }
}
