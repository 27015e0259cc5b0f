//! JSON data-transfer types for maps, channels, witnesses and
//! certificates.
//!
//! Maps serialize as `{"n": int, "A": [[row-major reals]], "b": [reals]}`,
//! cone maps as `{"m": int, "M": [[...]]}`, and channels as lists of 2x2
//! complex matrices with `[re, im]` entries. All conversions back into
//! library types re-run the constructors, so a parsed object carries the
//! same invariants as a built one.

use crate::certify::{ChainStep, PrimitivityCertificate, Verdict};
use crate::cone::{AffineBallMap, ConeLinearMap, Subsphere};
use crate::error::Error;
use crate::qubit::{C64, KrausChannel, QubitMatrix};
use crate::synthesis::{latitude_lift, ExtremalWitness};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn rows_matrix(rows: &[Vec<f64>], nrows: usize, ncols: usize) -> Result<DMatrix<f64>, Error> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidInput(format!(
            "expected a {nrows}x{ncols} row-major matrix"
        )));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// `{"n": int, "A": [[...]], "b": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallMapDto {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl BallMapDto {
    pub fn from_map(map: &AffineBallMap) -> Self {
        BallMapDto {
            n: map.dim(),
            a: matrix_rows(map.linear()),
            b: map.translation().iter().copied().collect(),
        }
    }

    pub fn to_map(&self) -> Result<AffineBallMap, Error> {
        let a = rows_matrix(&self.a, self.n, self.n)?;
        if self.b.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "translation length {} does not match n = {}",
                self.b.len(),
                self.n
            )));
        }
        AffineBallMap::new(a, DVector::from_column_slice(&self.b))
    }
}

pub fn ball_map_to_json(map: &AffineBallMap) -> String {
    serde_json::to_string(&BallMapDto::from_map(map)).expect("plain data serializes")
}

pub fn ball_map_from_json(text: &str) -> Result<AffineBallMap, Error> {
    serde_json::from_str::<BallMapDto>(text)?.to_map()
}

/// `{"m": int, "M": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeMapDto {
    pub m: usize,
    #[serde(rename = "M")]
    pub mat: Vec<Vec<f64>>,
}

impl ConeMapDto {
    pub fn from_map(map: &ConeLinearMap) -> Self {
        ConeMapDto {
            m: map.dim(),
            mat: matrix_rows(map.matrix()),
        }
    }

    pub fn to_map(&self) -> Result<ConeLinearMap, Error> {
        ConeLinearMap::new(rows_matrix(&self.mat, self.m, self.m)?)
    }
}

pub fn cone_map_to_json(map: &ConeLinearMap) -> String {
    serde_json::to_string(&ConeMapDto::from_map(map)).expect("plain data serializes")
}

pub fn cone_map_from_json(text: &str) -> Result<ConeLinearMap, Error> {
    serde_json::from_str::<ConeMapDto>(text)?.to_map()
}

/// `{"kraus": [matrix, ...]}` with each matrix `[[ [re,im], [re,im] ], ...]`
/// row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelDto {
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelDto {
    pub fn from_channel(ch: &KrausChannel) -> Self {
        ChannelDto {
            kraus: ch
                .kraus()
                .iter()
                .map(|k| {
                    (0..2)
                        .map(|i| (0..2).map(|j| [k[(i, j)].re, k[(i, j)].im]).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_channel(&self) -> Result<KrausChannel, Error> {
        let mut ops = Vec::with_capacity(self.kraus.len());
        for raw in &self.kraus {
            if raw.len() != 2 || raw.iter().any(|row| row.len() != 2) {
                return Err(Error::InvalidInput(
                    "Kraus operators must be 2x2 matrices".into(),
                ));
            }
            ops.push(QubitMatrix::from_fn(|i, j| {
                C64::new(raw[i][j][0], raw[i][j][1])
            }));
        }
        KrausChannel::new(ops)
    }
}

pub fn channel_to_json(ch: &KrausChannel) -> String {
    serde_json::to_string(&ChannelDto::from_channel(ch)).expect("plain data serializes")
}

pub fn channel_from_json(text: &str) -> Result<KrausChannel, Error> {
    serde_json::from_str::<ChannelDto>(text)?.to_channel()
}

/// Subsphere as `{"aff_dim": d, "center": [...], "radius": r,
/// "basis": [[...]]}`; the empty set keeps only `aff_dim = -1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsphereDto {
    pub aff_dim: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
}

impl SubsphereDto {
    pub fn from_subsphere(s: &Subsphere) -> Self {
        match s {
            Subsphere::Empty => SubsphereDto {
                aff_dim: -1,
                center: None,
                radius: None,
                basis: None,
            },
            Subsphere::NonEmpty {
                center,
                radius,
                basis,
            } => SubsphereDto {
                aff_dim: s.aff_dim(),
                center: Some(center.iter().copied().collect()),
                radius: Some(*radius),
                basis: Some(basis.iter().map(|b| b.iter().copied().collect()).collect()),
            },
        }
    }

    pub fn to_subsphere(&self) -> Result<Subsphere, Error> {
        if self.aff_dim < 0 {
            return Ok(Subsphere::empty());
        }
        let (center, radius, basis) = match (&self.center, self.radius, &self.basis) {
            (Some(c), Some(r), Some(b)) => (c, r, b),
            _ => {
                return Err(Error::InvalidInput(
                    "nonempty subsphere needs center, radius and basis".into(),
                ))
            }
        };
        if basis.len() as i64 != self.aff_dim {
            return Err(Error::InvalidInput(
                "basis size does not match aff_dim".into(),
            ));
        }
        Subsphere::new(
            DVector::from_column_slice(center),
            radius,
            basis
                .iter()
                .map(|b| DVector::from_column_slice(b))
                .collect(),
        )
    }
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Primitive => "primitive",
        Verdict::NotPositive => "not_positive",
        Verdict::NotPrimitive => "not_primitive",
    }
}

fn verdict_from_name(name: &str) -> Result<Verdict, Error> {
    match name {
        "primitive" => Ok(Verdict::Primitive),
        "not_positive" => Ok(Verdict::NotPositive),
        "not_primitive" => Ok(Verdict::NotPrimitive),
        other => Err(Error::InvalidInput(format!("unknown verdict {other:?}"))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainStepDto {
    pub k: usize,
    pub max_norm: f64,
    pub contact: SubsphereDto,
}

/// Mirrors `PrimitivityCertificate`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDto {
    pub index: Option<usize>,
    pub verdict: String,
    pub chain: Vec<ChainStepDto>,
}

impl CertificateDto {
    pub fn from_certificate(cert: &PrimitivityCertificate) -> Self {
        CertificateDto {
            index: cert.index,
            verdict: verdict_name(&cert.verdict).to_string(),
            chain: cert
                .chain
                .iter()
                .map(|s| ChainStepDto {
                    k: s.k,
                    max_norm: s.max_norm,
                    contact: SubsphereDto::from_subsphere(&s.contact),
                })
                .collect(),
        }
    }

    pub fn to_certificate(&self) -> Result<PrimitivityCertificate, Error> {
        let mut chain = Vec::with_capacity(self.chain.len());
        for s in &self.chain {
            chain.push(ChainStep {
                k: s.k,
                max_norm: s.max_norm,
                contact: s.contact.to_subsphere()?,
            });
        }
        Ok(PrimitivityCertificate {
            index: self.index,
            verdict: verdict_from_name(&self.verdict)?,
            chain,
        })
    }
}

pub fn certificate_to_json(cert: &PrimitivityCertificate) -> String {
    serde_json::to_string(&CertificateDto::from_certificate(cert)).expect("plain data serializes")
}

pub fn certificate_from_json(text: &str) -> Result<PrimitivityCertificate, Error> {
    serde_json::from_str::<CertificateDto>(text)?.to_certificate()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftDto {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub mu: f64,
    pub shift: f64,
}

/// Extremal witness: parameters, orbit points, rotation and the composed
/// map, everything needed to re-certify.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessDto {
    pub n: usize,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub index: usize,
    pub map: BallMapDto,
    pub points: Vec<Vec<f64>>,
    pub rotation: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftDto>,
}

impl WitnessDto {
    pub fn from_witness(w: &ExtremalWitness) -> Self {
        WitnessDto {
            n: w.n,
            c: w.c,
            alpha: w.alpha,
            beta: w.beta,
            index: w.index,
            map: BallMapDto::from_map(&w.map),
            points: w
                .points
                .iter()
                .map(|p| p.iter().copied().collect())
                .collect(),
            rotation: matrix_rows(&w.rotation),
            lift: w.lift.as_ref().map(|l| LiftDto {
                alpha: l.alpha(),
                beta: l.beta(),
                lambda: l.lambda(),
                mu: l.mu(),
                shift: l.shift(),
            }),
        }
    }

    pub fn to_witness(&self) -> Result<ExtremalWitness, Error> {
        let map = self.map.to_map()?;
        if map.dim() != self.n {
            return Err(Error::InvalidInput(
                "witness map dimension does not match n".into(),
            ));
        }
        if self.points.len() != self.n + 2 {
            return Err(Error::InvalidInput(format!(
                "witness needs n + 2 = {} orbit points, got {}",
                self.n + 2,
                self.points.len()
            )));
        }
        let points: Vec<DVector<f64>> = self
            .points
            .iter()
            .map(|p| {
                if p.len() == self.n {
                    Ok(DVector::from_column_slice(p))
                } else {
                    Err(Error::InvalidInput(
                        "orbit point dimension mismatch".into(),
                    ))
                }
            })
            .collect::<Result<_, _>>()?;
        let rotation = rows_matrix(&self.rotation, self.n, self.n)?;
        let lift = match &self.lift {
            None => None,
            Some(dto) => {
                let lift = latitude_lift(self.n, dto.alpha, dto.beta)?;
                let drift = (lift.lambda() - dto.lambda)
                    .abs()
                    .max((lift.mu() - dto.mu).abs())
                    .max((lift.shift() - dto.shift).abs());
                if drift > 1e-9 {
                    return Err(Error::InvalidInput(format!(
                        "lift parameters are inconsistent with the angles (drift {drift:.2e})"
                    )));
                }
                Some(lift)
            }
        };
        Ok(ExtremalWitness {
            n: self.n,
            c: self.c,
            alpha: self.alpha,
            beta: self.beta,
            points,
            lift,
            rotation,
            map,
            index: self.index,
        })
    }
}

pub fn witness_to_json(w: &ExtremalWitness) -> String {
    serde_json::to_string(&WitnessDto::from_witness(w)).expect("plain data serializes")
}

pub fn witness_from_json(text: &str) -> Result<ExtremalWitness, Error> {
    serde_json::from_str::<WitnessDto>(text)?.to_witness()
}

/// A map argument that may be either a bare map or a full witness (whose
/// orbit points then serve as registered contact witnesses).
#[derive(Debug, Clone)]
pub enum MapInput {
    Bare(AffineBallMap),
    Witness(ExtremalWitness),
}

pub fn map_input_from_json(text: &str) -> Result<MapInput, Error> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("map").is_some() {
        Ok(MapInput::Witness(
            serde_json::from_value::<WitnessDto>(value)?.to_witness()?,
        ))
    } else {
        Ok(MapInput::Bare(
            serde_json::from_value::<BallMapDto>(value)?.to_map()?,
        ))
    }
}
