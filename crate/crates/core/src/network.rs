//! Three-layer feed-forward network with transfer functions at the
//! hidden and output nodes.
//!
//! Each node computes `phi(sum_i w_i x_i - b)`: weighted net input minus
//! bias, pushed through the node's transfer function.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::transfer::{TransferKind, TransferSpec};

/// Layer sizes of a single-hidden-layer network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetworkTopology {
    pub inputs: usize,
    pub hidden: usize,
    pub outputs: usize,
}

impl NetworkTopology {
    pub fn new(inputs: usize, hidden: usize, outputs: usize) -> Result<Self> {
        if inputs == 0 || hidden == 0 || outputs == 0 {
            return Err(Error::Config(
                "all layer sizes must be at least 1".into(),
            ));
        }
        Ok(NetworkTopology {
            inputs,
            hidden,
            outputs,
        })
    }
}

/// A fully specified network: weights, biases, and one transfer spec per
/// active node. All nodes share one transfer-function family.
///
/// Weight matrices are stored row-major, one row per receiving node.
#[derive(Clone, Debug, PartialEq)]
pub struct Network<F> {
    pub topology: NetworkTopology,
    pub hidden_weights: Vec<F>,
    pub hidden_biases: Vec<F>,
    pub output_weights: Vec<F>,
    pub output_biases: Vec<F>,
    pub hidden_tf: Vec<TransferSpec<F>>,
    pub output_tf: Vec<TransferSpec<F>>,
}

impl<F: Scalar> Network<F> {
    /// A network with zeroed weights and biases and neutral transfer
    /// parameters.
    pub fn zeroed(topology: NetworkTopology, kind: TransferKind) -> Self {
        Network {
            topology,
            hidden_weights: vec![F::zero(); topology.hidden * topology.inputs],
            hidden_biases: vec![F::zero(); topology.hidden],
            output_weights: vec![F::zero(); topology.outputs * topology.hidden],
            output_biases: vec![F::zero(); topology.outputs],
            hidden_tf: vec![TransferSpec::default_for(kind); topology.hidden],
            output_tf: vec![TransferSpec::default_for(kind); topology.outputs],
        }
    }

    /// The shared transfer-function family.
    pub fn kind(&self) -> TransferKind {
        self.hidden_tf[0].kind()
    }

    /// Checks dimensions and the homogeneous-family invariant.
    pub fn validate(&self) -> Result<()> {
        let t = self.topology;
        if self.hidden_weights.len() != t.hidden * t.inputs
            || self.hidden_biases.len() != t.hidden
            || self.output_weights.len() != t.outputs * t.hidden
            || self.output_biases.len() != t.outputs
            || self.hidden_tf.len() != t.hidden
            || self.output_tf.len() != t.outputs
        {
            return Err(Error::Dimension("network buffers do not match topology".into()));
        }
        let kind = self.kind();
        if self
            .hidden_tf
            .iter()
            .chain(self.output_tf.iter())
            .any(|s| s.kind() != kind)
        {
            return Err(Error::Config(
                "all nodes must share one transfer-function family".into(),
            ));
        }
        Ok(())
    }

    /// Forward pass; returns the output-layer activations.
    pub fn forward(&self, input: &[F]) -> Result<Vec<F>> {
        if input.len() != self.topology.inputs {
            return Err(Error::Dimension(format!(
                "expected {} inputs, got {}",
                self.topology.inputs,
                input.len()
            )));
        }
        let mut hidden = Vec::with_capacity(self.topology.hidden);
        for j in 0..self.topology.hidden {
            let row = &self.hidden_weights[j * self.topology.inputs..][..self.topology.inputs];
            let net = dot(row, input) - self.hidden_biases[j];
            hidden.push(self.hidden_tf[j].eval(net));
        }
        let mut output = Vec::with_capacity(self.topology.outputs);
        for k in 0..self.topology.outputs {
            let row = &self.output_weights[k * self.topology.hidden..][..self.topology.hidden];
            let net = dot(row, &hidden) - self.output_biases[k];
            output.push(self.output_tf[k].eval(net));
        }
        Ok(output)
    }

    /// Index of the strongest output; ties go to the lowest index.
    pub fn predict_class(&self, input: &[F]) -> Result<usize> {
        Ok(argmax(&self.forward(input)?))
    }

    /// Serializes to the stable line-oriented text layout (see the crate
    /// README for the format description).
    pub fn to_text(&self) -> String {
        let t = self.topology;
        let mut out = String::new();
        out.push_str("evonet-model 1\n");
        out.push_str(&format!("topology {} {} {}\n", t.inputs, t.hidden, t.outputs));
        out.push_str(&format!("transfer {}\n", self.kind()));
        push_matrix(&mut out, "hidden-weights", &self.hidden_weights, t.inputs);
        push_matrix(&mut out, "output-weights", &self.output_weights, t.hidden);
        push_matrix(&mut out, "hidden-biases", &self.hidden_biases, t.hidden);
        push_matrix(&mut out, "output-biases", &self.output_biases, t.outputs);
        let ppn = self.kind().param_count();
        if ppn > 0 {
            let hidden_params: Vec<F> = self
                .hidden_tf
                .iter()
                .flat_map(|s| s.params().iter().copied())
                .collect();
            let output_params: Vec<F> = self
                .output_tf
                .iter()
                .flat_map(|s| s.params().iter().copied())
                .collect();
            push_matrix(&mut out, "hidden-params", &hidden_params, ppn);
            push_matrix(&mut out, "output-params", &output_params, ppn);
        }
        out
    }

    /// Parses the text layout produced by [`Network::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let parse_err = |line: usize, message: String| Error::Parse {
            path: "<model>".into(),
            line: line + 1,
            message,
        };
        let mut next_line = |expect: &str| -> Result<(usize, String)> {
            for (n, raw) in lines.by_ref() {
                let s = raw.trim();
                if !s.is_empty() {
                    return Ok((n, s.to_string()));
                }
            }
            Err(Error::Parse {
                path: "<model>".into(),
                line: 0,
                message: format!("unexpected end of model, expected {expect}"),
            })
        };

        let (n, header) = next_line("header")?;
        if header != "evonet-model 1" {
            return Err(parse_err(n, format!("unknown model header `{header}`")));
        }
        let (n, topo_line) = next_line("topology")?;
        let fields: Vec<&str> = topo_line.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "topology" {
            return Err(parse_err(n, "expected `topology <in> <hidden> <out>`".into()));
        }
        let dims: Vec<usize> = fields[1..]
            .iter()
            .map(|f| f.parse().map_err(|_| parse_err(n, format!("bad count `{f}`"))))
            .collect::<Result<_>>()?;
        let topology = NetworkTopology::new(dims[0], dims[1], dims[2])?;
        let (n, tf_line) = next_line("transfer")?;
        let kind: TransferKind = tf_line
            .strip_prefix("transfer ")
            .ok_or_else(|| parse_err(n, "expected `transfer <kind>`".into()))?
            .trim()
            .parse()?;

        let mut read_matrix = |name: &str, rows: usize, cols: usize| -> Result<Vec<F>> {
            let (n, head) = next_line(name)?;
            if head != name {
                return Err(parse_err(n, format!("expected section `{name}`, got `{head}`")));
            }
            let mut values = Vec::with_capacity(rows * cols);
            for _ in 0..rows {
                let (n, row) = next_line("matrix row")?;
                let fields: Vec<&str> = row.split_whitespace().collect();
                if fields.len() != cols {
                    return Err(parse_err(
                        n,
                        format!("expected {cols} values in {name} row, got {}", fields.len()),
                    ));
                }
                for f in fields {
                    values.push(
                        f.parse::<f64>()
                            .map(F::from_f64)
                            .map_err(|_| parse_err(n, format!("bad number `{f}`")))?,
                    );
                }
            }
            Ok(values)
        };

        let hidden_weights = read_matrix("hidden-weights", topology.hidden, topology.inputs)?;
        let output_weights = read_matrix("output-weights", topology.outputs, topology.hidden)?;
        let hidden_biases = read_matrix("hidden-biases", 1, topology.hidden)?;
        let output_biases = read_matrix("output-biases", 1, topology.outputs)?;
        let ppn = kind.param_count();
        let (hidden_tf, output_tf) = if ppn == 0 {
            (
                vec![TransferSpec::default_for(kind); topology.hidden],
                vec![TransferSpec::default_for(kind); topology.outputs],
            )
        } else {
            let hp = read_matrix("hidden-params", topology.hidden, ppn)?;
            let op = read_matrix("output-params", topology.outputs, ppn)?;
            let specs = |vals: &[F]| -> Result<Vec<TransferSpec<F>>> {
                vals.chunks(ppn)
                    .map(|c| TransferSpec::new(kind, c.to_vec()))
                    .collect()
            };
            (specs(&hp)?, specs(&op)?)
        };

        let net = Network {
            topology,
            hidden_weights,
            hidden_biases,
            output_weights,
            output_biases,
            hidden_tf,
            output_tf,
        };
        net.validate()?;
        Ok(net)
    }
}

#[inline]
fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        acc += *x * *y;
    }
    acc
}

/// Index of the maximum entry; ties go to the lowest index.
pub fn argmax<F: Scalar>(values: &[F]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}


fn push_matrix<F: Scalar>(out: &mut String, name: &str, values: &[F], cols: usize) {
    out.push_str(name);
    out.push('\n');
    for row in values.chunks(cols) {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            out.push_str(&format!("{v}"));
            first = false;
        }
        out.push('\n');
    }
}
