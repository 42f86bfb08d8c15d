//! Feed-forward policy and the mirror-averaging wrapper.
//!
//! Weight files come in two layouts:
//!
//! * JSON: `{"layers": [{"weight": [[..], ..], "bias": [..]}, ..]}` with each
//!   `weight` given as `out` rows of `in` columns.
//! * Flat binary: little-endian `f64`, per layer the row-major `out×in`
//!   weight matrix followed by the `out` biases, layers in forward order.
//!   Shapes come from the [`PolicySpec`].

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{mirror_act, mirror_obs, Action, Observation, ACT_DIM, OBS_DIM};

/// Anything mapping a flat observation to an action.
pub trait Policy {
    fn act(&self, obs: &[f64; OBS_DIM]) -> [f64; ACT_DIM];
}

impl<F> Policy for F
where
    F: Fn(&[f64; OBS_DIM]) -> [f64; ACT_DIM],
{
    fn act(&self, obs: &[f64; OBS_DIM]) -> [f64; ACT_DIM] {
        self(obs)
    }
}

/// `a = 0.5 · (π(s) + f_act(π(f_obs(s))))`.
pub fn double_pass<P: Policy + ?Sized>(policy: &P, s: &Observation) -> Action {
    let direct = policy.act(&s.to_vector());
    let mirrored = mirror_act(&Action(policy.act(&mirror_obs(s).to_vector())));
    Action(std::array::from_fn(|i| 0.5 * (direct[i] + mirrored.0[i])))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub input: usize,
    pub hidden: Vec<usize>,
    pub output: usize,
    pub elu_alpha: f64,
}

impl Default for PolicySpec {
    fn default() -> Self {
        Self {
            input: OBS_DIM,
            hidden: vec![512, 256, 128],
            output: ACT_DIM,
            elu_alpha: 1.0,
        }
    }
}

impl PolicySpec {
    /// `(out, in)` for each affine layer.
    pub fn layer_shapes(&self) -> Vec<(usize, usize)> {
        let mut dims = vec![self.input];
        dims.extend(&self.hidden);
        dims.push(self.output);
        dims.windows(2).map(|w| (w[1], w[0])).collect()
    }

    pub fn param_count(&self) -> usize {
        self.layer_shapes().iter().map(|(o, i)| o * i + o).sum()
    }
}

pub fn elu(x: f64, alpha: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        alpha * x.exp_m1()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weight: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum WeightsError {
    #[error("expected {expected} layers, found {found}")]
    LayerCount { expected: usize, found: usize },
    #[error("layer {layer}: expected {expected_out}x{expected_in}, found {found}")]
    Shape {
        layer: usize,
        expected_out: usize,
        expected_in: usize,
        found: String,
    },
    #[error("input has {found} entries, expected {expected}")]
    Input { expected: usize, found: usize },
    #[error("binary weights hold {found} bytes, expected {expected}")]
    ByteCount { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mlp {
    spec: PolicySpec,
    layers: Vec<Layer>,
}

#[derive(Deserialize, Serialize)]
struct WeightsFile {
    layers: Vec<Layer>,
}

impl Mlp {
    pub fn new(spec: PolicySpec, layers: Vec<Layer>) -> Result<Self, WeightsError> {
        let shapes = spec.layer_shapes();
        if shapes.len() != layers.len() {
            return Err(WeightsError::LayerCount {
                expected: shapes.len(),
                found: layers.len(),
            });
        }
        for (i, ((out, inp), layer)) in shapes.iter().zip(&layers).enumerate() {
            let rows_ok =
                layer.weight.len() == *out && layer.weight.iter().all(|r| r.len() == *inp);
            if !rows_ok || layer.bias.len() != *out {
                let cols = layer.weight.first().map_or(0, Vec::len);
                return Err(WeightsError::Shape {
                    layer: i,
                    expected_out: *out,
                    expected_in: *inp,
                    found: format!("{}x{} bias {}", layer.weight.len(), cols, layer.bias.len()),
                });
            }
        }
        Ok(Self { spec, layers })
    }

    pub fn zeros(spec: PolicySpec) -> Self {
        let layers = spec
            .layer_shapes()
            .into_iter()
            .map(|(o, i)| Layer {
                weight: vec![vec![0.0; i]; o],
                bias: vec![0.0; o],
            })
            .collect();
        Self { spec, layers }
    }

    pub fn spec(&self) -> &PolicySpec {
        &self.spec
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn from_json(spec: PolicySpec, text: &str) -> Result<Self, WeightsError> {
        let file: WeightsFile = serde_json::from_str(text)?;
        Self::new(spec, file.layers)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&WeightsFile {
            layers: self.layers.clone(),
        })
        .expect("plain data")
    }

    pub fn from_le_bytes(spec: PolicySpec, bytes: &[u8]) -> Result<Self, WeightsError> {
        let expected = spec.param_count() * 8;
        if bytes.len() != expected {
            return Err(WeightsError::ByteCount {
                expected,
                found: bytes.len(),
            });
        }
        let mut values = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
        let layers = spec
            .layer_shapes()
            .into_iter()
            .map(|(o, i)| Layer {
                weight: (0..o).map(|_| values.by_ref().take(i).collect()).collect(),
                bias: values.by_ref().take(o).collect(),
            })
            .collect();
        Self::new(spec, layers)
    }

    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.layers
            .iter()
            .flat_map(|l| l.weight.iter().flatten().chain(&l.bias))
            .flat_map(|v| v.to_le_bytes())
            .collect()
    }

    /// Loads JSON when the file extension is `.json`, flat binary otherwise.
    pub fn load(spec: PolicySpec, path: &Path) -> Result<Self, WeightsError> {
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(spec, &std::fs::read_to_string(path)?)
        } else {
            Self::from_le_bytes(spec, &std::fs::read(path)?)
        }
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>, WeightsError> {
        if input.len() != self.spec.input {
            return Err(WeightsError::Input {
                expected: self.spec.input,
                found: input.len(),
            });
        }
        let last = self.layers.len() - 1;
        let mut x = input.to_vec();
        for (k, layer) in self.layers.iter().enumerate() {
            x = layer
                .weight
                .iter()
                .zip(&layer.bias)
                .map(|(row, b)| {
                    let z = row.iter().zip(&x).map(|(w, v)| w * v).sum::<f64>() + b;
                    if k < last {
                        elu(z, self.spec.elu_alpha)
                    } else {
                        z
                    }
                })
                .collect();
        }
        Ok(x)
    }
}

impl Policy for Mlp {
    fn act(&self, obs: &[f64; OBS_DIM]) -> [f64; ACT_DIM] {
        let out = self.forward(obs).expect("policy input is OBS_DIM");
        out.try_into().expect("policy output is ACT_DIM")
    }
}

pub fn mlp_forward(
    spec: &PolicySpec,
    layers: &[Layer],
    s: &Observation,
) -> Result<Action, WeightsError> {
    let net = Mlp::new(spec.clone(), layers.to_vec())?;
    if spec.input != OBS_DIM || spec.output != ACT_DIM {
        return Err(WeightsError::Input {
            expected: OBS_DIM,
            found: spec.input,
        });
    }
    Ok(Action(net.act(&s.to_vector())))
}
