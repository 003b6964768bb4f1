//! Online gradient-descent baseline with momentum, for networks using
//! the fixed logistic or tangent-hyperbolic nodes.
//!
//! Per-sample error is `E = 1/2 sum_k (y_k - t_k)^2`; one epoch visits
//! every sample once in a freshly shuffled order.

use crate::data::Samples;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::rng::Rng;
use crate::scalar::Scalar;

/// Learning rate, momentum, and epoch budget.
#[derive(Clone, Copy, Debug)]
pub struct BpConfig<F> {
    pub learning_rate: F,
    pub momentum: F,
    pub epochs: usize,
}

impl<F: Scalar> Default for BpConfig<F> {
    fn default() -> Self {
        BpConfig {
            learning_rate: F::from_f64(0.5),
            momentum: F::from_f64(0.1),
            epochs: 1000,
        }
    }
}

impl<F: Scalar> BpConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if self.learning_rate < F::zero() {
            return Err(Error::Config("learning rate must be non-negative".into()));
        }
        if self.momentum < F::zero() || self.momentum >= F::one() {
            return Err(Error::Config("momentum must lie in [0, 1)".into()));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-parameter gradients of the sample error, shaped like the network
/// buffers they belong to.
#[derive(Clone, Debug)]
pub struct Gradients<F> {
    pub hidden_weights: Vec<F>,
    pub hidden_biases: Vec<F>,
    pub output_weights: Vec<F>,
    pub output_biases: Vec<F>,
}

impl<F: Scalar> Gradients<F> {
    fn zeroed(net: &Network<F>) -> Self {
        Gradients {
            hidden_weights: vec![F::zero(); net.hidden_weights.len()],
            hidden_biases: vec![F::zero(); net.hidden_biases.len()],
            output_weights: vec![F::zero(); net.output_weights.len()],
            output_biases: vec![F::zero(); net.output_biases.len()],
        }
    }
}

/// Analytic gradients of `E = 1/2 sum_k (y_k - t_k)^2` for one sample.
///
/// Biases enter the node as `net = sum w x - b`, so their gradient
/// carries the opposite sign of the node delta.
pub fn gradients<F: Scalar>(
    net: &Network<F>,
    input: &[F],
    target: &[F],
) -> Result<Gradients<F>> {
    let t = net.topology;
    if input.len() != t.inputs || target.len() != t.outputs {
        return Err(Error::Dimension("sample does not match topology".into()));
    }

    // Forward pass keeping the net inputs.
    let mut hidden_net = Vec::with_capacity(t.hidden);
    let mut hidden_out = Vec::with_capacity(t.hidden);
    for j in 0..t.hidden {
        let row = &net.hidden_weights[j * t.inputs..][..t.inputs];
        let mut acc = F::zero();
        for (w, x) in row.iter().zip(input) {
            acc += *w * *x;
        }
        let z = acc - net.hidden_biases[j];
        hidden_net.push(z);
        hidden_out.push(net.hidden_tf[j].eval(z));
    }
    let mut output_net = Vec::with_capacity(t.outputs);
    let mut output_out = Vec::with_capacity(t.outputs);
    for k in 0..t.outputs {
        let row = &net.output_weights[k * t.hidden..][..t.hidden];
        let mut acc = F::zero();
        for (w, h) in row.iter().zip(&hidden_out) {
            acc += *w * *h;
        }
        let z = acc - net.output_biases[k];
        output_net.push(z);
        output_out.push(net.output_tf[k].eval(z));
    }

    // Backward pass.
    let mut g = Gradients::zeroed(net);
    let mut output_delta = Vec::with_capacity(t.outputs);
    for k in 0..t.outputs {
        let phi_prime = net.output_tf[k].eval_derivative(output_net[k])?;
        let delta = (output_out[k] - target[k]) * phi_prime;
        output_delta.push(delta);
        for j in 0..t.hidden {
            g.output_weights[k * t.hidden + j] = delta * hidden_out[j];
        }
        g.output_biases[k] = -delta;
    }
    for j in 0..t.hidden {
        let mut upstream = F::zero();
        for k in 0..t.outputs {
            upstream += output_delta[k] * net.output_weights[k * t.hidden + j];
        }
        let phi_prime = net.hidden_tf[j].eval_derivative(hidden_net[j])?;
        let delta = upstream * phi_prime;
        for i in 0..t.inputs {
            g.hidden_weights[j * t.inputs + i] = delta * input[i];
        }
        g.hidden_biases[j] = -delta;
    }
    Ok(g)
}

/// Trains the network with per-sample updates
/// `delta = -eta grad + momentum delta_prev`, shuffling the visit order
/// each epoch with the run RNG, and returns it.
pub fn train<F: Scalar>(
    mut net: Network<F>,
    data: &Samples<F>,
    config: &BpConfig<F>,
    rng: &mut Rng,
) -> Result<Network<F>> {
    config.validate()?;
    if !net.kind().is_fixed() {
        return Err(Error::UnsupportedKind(net.kind(), "gradient training"));
    }
    if data.is_empty() {
        return Err(Error::Config("cannot train on zero samples".into()));
    }

    let eta = config.learning_rate;
    let momentum = config.momentum;
    let mut velocity = Gradients::zeroed(&net);
    let mut order: Vec<usize> = (0..data.len()).collect();

    for _ in 0..config.epochs {
        rng.shuffle(&mut order);
        for &s in &order {
            let g = gradients(&net, &data.inputs[s], &data.targets[s])?;
            step(&mut net.hidden_weights, &mut velocity.hidden_weights, &g.hidden_weights, eta, momentum);
            step(&mut net.hidden_biases, &mut velocity.hidden_biases, &g.hidden_biases, eta, momentum);
            step(&mut net.output_weights, &mut velocity.output_weights, &g.output_weights, eta, momentum);
            step(&mut net.output_biases, &mut velocity.output_biases, &g.output_biases, eta, momentum);
        }
    }
    Ok(net)
}

#[inline]
fn step<F: Scalar>(params: &mut [F], velocity: &mut [F], grad: &[F], eta: F, momentum: F) {
    for ((p, v), g) in params.iter_mut().zip(velocity.iter_mut()).zip(grad) {
        *v = momentum * *v - eta * *g;
        *p += *v;
    }
}

/// Per-sample error `1/2 sum_k (y_k - t_k)^2` summed over the set.
pub fn total_loss<F: Scalar>(net: &Network<F>, data: &Samples<F>) -> Result<F> {
    let half = F::from_f64(0.5);
    let mut loss = F::zero();
    for (input, target) in data.inputs.iter().zip(&data.targets) {
        let y = net.forward(input)?;
        for (yk, tk) in y.iter().zip(target) {
            let d = *yk - *tk;
            loss += half * d * d;
        }
    }
    Ok(loss)
}
