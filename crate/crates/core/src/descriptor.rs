//! JSON descriptors: the wire format for spaces, maps, and tensor elements.
//!
//! Conventions, fixed across every interface:
//! * matrices are arrays of rows (row-major), vectors are bare arrays;
//! * the norm exponent is a JSON number, with infinity spelled `"inf"`;
//! * spaces are coordinate ℓp spaces `{"dim": n, "p": p}` — subspace
//!   geometry travels as `{"space": …, "spanning": […]}` and is rebuilt on
//!   the receiving side.

use nalgebra::DMatrix;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bilinear::BilinearMap;
use crate::error::{CoreError, Result};
use crate::space::{LinearMap, NormedSpace, PExp, Subspace, Vector};
use crate::tensor::TensorElement;

/// Norm exponent in descriptors: a number, or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PDescriptor(pub f64);

impl Serialize for PDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for PDescriptor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(x) => Ok(PDescriptor(x)),
            Raw::Text(s) if s == "inf" => Ok(PDescriptor(f64::INFINITY)),
            Raw::Text(s) => Err(D::Error::custom(format!(
                "norm exponent must be a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub dim: usize,
    pub p: PDescriptor,
}

impl SpaceDescriptor {
    pub fn to_space(&self) -> Result<NormedSpace> {
        NormedSpace::lp(self.dim, PExp::new(self.p.0)?)
    }

    pub fn from_space(space: &NormedSpace) -> Result<SpaceDescriptor> {
        if space.embedding().is_some() {
            return Err(CoreError::unsupported(
                "descriptors cover coordinate ℓp spaces; describe the subspace instead",
            ));
        }
        Ok(SpaceDescriptor {
            dim: space.dim(),
            p: PDescriptor(space.p().value()),
        })
    }
}

/// Matrix as an array of rows.
pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Array of rows to a matrix; rows must be non-empty and rectangular.
pub fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(CoreError::invalid("matrix needs at least one row"));
    }
    let ncols = rows[0].len();
    if ncols == 0 {
        return Err(CoreError::invalid("matrix rows must be non-empty"));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(CoreError::invalid("matrix rows have inconsistent lengths"));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceDescriptor {
    pub space: SpaceDescriptor,
    /// Spanning vectors (not necessarily a basis), one array per vector.
    pub spanning: Vec<Vec<f64>>,
}

impl SubspaceDescriptor {
    pub fn to_subspace(&self) -> Result<Subspace> {
        let ambient = self.space.to_space()?;
        let vectors: Vec<Vector> = self
            .spanning
            .iter()
            .map(|v| {
                if v.len() != ambient.dim() {
                    Err(CoreError::dim("spanning vector", ambient.dim(), v.len()))
                } else {
                    Ok(Vector::from_column_slice(v))
                }
            })
            .collect::<Result<_>>()?;
        Subspace::from_spanning(&ambient, &vectors)
    }

    pub fn from_subspace(sub: &Subspace) -> Result<SubspaceDescriptor> {
        Ok(SubspaceDescriptor {
            space: SpaceDescriptor::from_space(sub.ambient())?,
            spanning: matrix_to_rows(&sub.basis().transpose()),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapDescriptor {
    pub domain: SpaceDescriptor,
    pub codomain: SpaceDescriptor,
    /// codomain.dim × domain.dim, array of rows.
    pub matrix: Vec<Vec<f64>>,
}

impl MapDescriptor {
    pub fn to_map(&self) -> Result<LinearMap> {
        LinearMap::new(
            self.domain.to_space()?,
            self.codomain.to_space()?,
            rows_to_matrix(&self.matrix)?,
        )
    }

    pub fn from_map(map: &LinearMap) -> Result<MapDescriptor> {
        Ok(MapDescriptor {
            domain: SpaceDescriptor::from_space(map.domain())?,
            codomain: SpaceDescriptor::from_space(map.codomain())?,
            matrix: matrix_to_rows(map.matrix()),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BilinearDescriptor {
    #[serde(rename = "X")]
    pub x: SpaceDescriptor,
    #[serde(rename = "Y")]
    pub y: SpaceDescriptor,
    #[serde(rename = "Z")]
    pub z: SpaceDescriptor,
    /// One X.dim × Y.dim row-major matrix per output coordinate.
    pub coeffs: Vec<Vec<Vec<f64>>>,
}

impl BilinearDescriptor {
    pub fn to_bilinear(&self) -> Result<BilinearMap> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| rows_to_matrix(c))
            .collect::<Result<Vec<_>>>()?;
        BilinearMap::new(
            self.x.to_space()?,
            self.y.to_space()?,
            self.z.to_space()?,
            coeffs,
        )
    }

    pub fn from_bilinear(phi: &BilinearMap) -> Result<BilinearDescriptor> {
        Ok(BilinearDescriptor {
            x: SpaceDescriptor::from_space(phi.x())?,
            y: SpaceDescriptor::from_space(phi.y())?,
            z: SpaceDescriptor::from_space(phi.z())?,
            coeffs: phi.coeffs().iter().map(matrix_to_rows).collect(),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorTermDescriptor {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorDescriptor {
    #[serde(rename = "X")]
    pub x: SpaceDescriptor,
    #[serde(rename = "Y")]
    pub y: SpaceDescriptor,
    pub terms: Vec<TensorTermDescriptor>,
}

impl TensorDescriptor {
    pub fn to_tensor(&self) -> Result<TensorElement> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                (
                    Vector::from_column_slice(&t.x),
                    Vector::from_column_slice(&t.y),
                )
            })
            .collect();
        TensorElement::new(self.x.to_space()?, self.y.to_space()?, terms)
    }

    pub fn from_tensor(t: &TensorElement) -> Result<TensorDescriptor> {
        Ok(TensorDescriptor {
            x: SpaceDescriptor::from_space(t.x())?,
            y: SpaceDescriptor::from_space(t.y())?,
            terms: t
                .terms()
                .iter()
                .map(|(xv, yv)| TensorTermDescriptor {
                    x: xv.iter().copied().collect(),
                    y: yv.iter().copied().collect(),
                })
                .collect(),
        })
    }
}

/// Input for the extension computation: φ on the coordinate spaces of M and
/// N, the subspaces, and optionally explicit projection matrices (ambient →
/// ambient). Absent projections default to the orthogonal ones, which
/// requires Euclidean ambients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtendInputDescriptor {
    pub phi: BilinearDescriptor,
    #[serde(rename = "M")]
    pub m: SubspaceDescriptor,
    #[serde(rename = "N")]
    pub n: SubspaceDescriptor,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<Vec<f64>>>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<Vec<f64>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_round_trips_as_the_inf_string() {
        let d = SpaceDescriptor {
            dim: 3,
            p: PDescriptor(f64::INFINITY),
        };
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"dim":3,"p":"inf"}"#);
        let back: SpaceDescriptor = serde_json::from_str(&json).unwrap();
        assert!(back.p.0.is_infinite());
    }

    #[test]
    fn finite_exponents_stay_numeric() {
        let json = r#"{"dim":2,"p":1.5}"#;
        let d: SpaceDescriptor = serde_json::from_str(json).unwrap();
        assert_eq!(d.p.0, 1.5);
        assert_eq!(serde_json::to_string(&d).unwrap(), json);
    }

    #[test]
    fn bad_exponent_strings_are_rejected() {
        assert!(serde_json::from_str::<SpaceDescriptor>(r#"{"dim":2,"p":"huge"}"#).is_err());
    }

    #[test]
    fn matrices_are_row_major() {
        let m = rows_to_matrix(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m[(0, 1)], 2.0);
        assert_eq!(m[(1, 0)], 3.0);
        assert_eq!(matrix_to_rows(&m), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
    }

    #[test]
    fn ragged_matrices_are_rejected() {
        assert!(rows_to_matrix(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        assert!(rows_to_matrix(&[]).is_err());
    }

    #[test]
    fn bilinear_descriptor_round_trips() {
        let json = r#"{
            "X": {"dim": 2, "p": 2},
            "Y": {"dim": 2, "p": "inf"},
            "Z": {"dim": 1, "p": 2},
            "coeffs": [[[1.0, 2.0], [3.0, 4.0]]]
        }"#;
        let d: BilinearDescriptor = serde_json::from_str(json).unwrap();
        let phi = d.to_bilinear().unwrap();
        assert_eq!(phi.coeffs()[0][(1, 0)], 3.0);
        assert!(phi.y().p().is_inf());
        let back = BilinearDescriptor::from_bilinear(&phi).unwrap();
        assert_eq!(back.coeffs, d.coeffs);
    }

    #[test]
    fn subspace_descriptor_rebuilds_the_span() {
        let d = SubspaceDescriptor {
            space: SpaceDescriptor {
                dim: 3,
                p: PDescriptor(2.0),
            },
            spanning: vec![vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0]],
        };
        let sub = d.to_subspace().unwrap();
        assert_eq!(sub.dim(), 1);
        let back = SubspaceDescriptor::from_subspace(&sub).unwrap();
        assert_eq!(back.spanning.len(), 1);
    }

    #[test]
    fn tensor_descriptor_round_trips() {
        let json = r#"{
            "X": {"dim": 2, "p": 2},
            "Y": {"dim": 2, "p": 2},
            "terms": [{"x": [3.0, 4.0], "y": [5.0, 12.0]}]
        }"#;
        let d: TensorDescriptor = serde_json::from_str(json).unwrap();
        let t = d.to_tensor().unwrap();
        assert_eq!(t.terms().len(), 1);
        assert_eq!(t.coeff_matrix()[(0, 0)], 15.0);
        let back = TensorDescriptor::from_tensor(&t).unwrap();
        assert_eq!(back.terms[0].y, vec![5.0, 12.0]);
    }
}
