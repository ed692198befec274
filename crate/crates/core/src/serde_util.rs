//! Serde helpers mapping nalgebra matrices to row-major JSON arrays.

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize_mat3<S: Serializer>(m: &Matrix3<f64>, s: S) -> Result<S::Ok, S::Error> {
    let row_major: [f64; 9] = [
        m[(0, 0)],
        m[(0, 1)],
        m[(0, 2)],
        m[(1, 0)],
        m[(1, 1)],
        m[(1, 2)],
        m[(2, 0)],
        m[(2, 1)],
        m[(2, 2)],
    ];
    row_major.serialize(s)
}

pub fn deserialize_mat3<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix3<f64>, D::Error> {
    let v = <[f64; 9]>::deserialize(d)?;
    Ok(Matrix3::from_row_slice(&v))
}

pub fn serialize_mat4<S: Serializer>(m: &Matrix4<f64>, s: S) -> Result<S::Ok, S::Error> {
    let mut row_major = [0.0f64; 16];
    for r in 0..4 {
        for c in 0..4 {
            row_major[4 * r + c] = m[(r, c)];
        }
    }
    row_major.serialize(s)
}

pub fn deserialize_mat4<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix4<f64>, D::Error> {
    let v = <[f64; 16]>::deserialize(d)?;
    Ok(Matrix4::from_row_slice(&v))
}

pub fn serialize_vec3<S: Serializer>(v: &Vector3<f64>, s: S) -> Result<S::Ok, S::Error> {
    [v.x, v.y, v.z].serialize(s)
}

pub fn deserialize_vec3<'de, D: Deserializer<'de>>(d: D) -> Result<Vector3<f64>, D::Error> {
    let v = <[f64; 3]>::deserialize(d)?;
    Ok(Vector3::new(v[0], v[1], v[2]))
}

pub fn deserialize_finite_vec3<'de, D: Deserializer<'de>>(d: D) -> Result<Vector3<f64>, D::Error> {
    let v = deserialize_vec3(d)?;
    if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
        return Err(D::Error::custom("vector components must be finite"));
    }
    Ok(v)
}
