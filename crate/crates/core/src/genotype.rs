//! Flat real-vector encoding of a whole network: connection weights,
//! biases, and transfer-function parameters, with per-gene bounds.
//!
//! Gene order is fixed: hidden weights row-major, output weights
//! row-major, hidden biases, output biases, hidden transfer parameters
//! node-major, output transfer parameters node-major.

use crate::error::{Error, Result};
use crate::network::{Network, NetworkTopology};
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::transfer::{TransferKind, TransferSpec};

/// Decode-time clamp range for scale parameters that must stay positive
/// (Gaussian sigma; Beta sigma, p, q). Centers and steepness are left
/// free.
pub const SCALE_PARAM_MIN: f64 = 0.05;
pub const SCALE_PARAM_MAX: f64 = 10.0;

/// Gene counts and ordering for one (topology, transfer family) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenotypeLayout {
    pub topology: NetworkTopology,
    pub kind: TransferKind,
}

impl GenotypeLayout {
    pub fn new(topology: NetworkTopology, kind: TransferKind) -> Self {
        GenotypeLayout { topology, kind }
    }

    pub fn weight_genes(&self) -> usize {
        let t = self.topology;
        t.hidden * t.inputs + t.outputs * t.hidden
    }

    pub fn bias_genes(&self) -> usize {
        self.topology.hidden + self.topology.outputs
    }

    pub fn transfer_genes(&self) -> usize {
        (self.topology.hidden + self.topology.outputs) * self.kind.param_count()
    }

    pub fn total(&self) -> usize {
        self.weight_genes() + self.bias_genes() + self.transfer_genes()
    }

    /// Decodes a gene slice into a network, clamping scale parameters
    /// into [`SCALE_PARAM_MIN`, `SCALE_PARAM_MAX`] so every gene vector
    /// an optimizer can produce decodes to a valid network.
    pub fn decode<F: Scalar>(&self, genes: &[F]) -> Network<F> {
        assert_eq!(genes.len(), self.total(), "gene count does not match layout");
        let t = self.topology;
        let nw_h = t.hidden * t.inputs;
        let nw_o = t.outputs * t.hidden;
        let mut at = 0;
        let take = |at: &mut usize, n: usize| {
            let s = &genes[*at..*at + n];
            *at += n;
            s.to_vec()
        };
        let hidden_weights = take(&mut at, nw_h);
        let output_weights = take(&mut at, nw_o);
        let hidden_biases = take(&mut at, t.hidden);
        let output_biases = take(&mut at, t.outputs);
        let ppn = self.kind.param_count();
        let mut specs = Vec::with_capacity(t.hidden + t.outputs);
        for _ in 0..t.hidden + t.outputs {
            let raw = take(&mut at, ppn);
            let params = clamp_params(self.kind, raw);
            specs.push(
                TransferSpec::new(self.kind, params)
                    .expect("clamped parameters are always valid"),
            );
        }
        let output_tf = specs.split_off(t.hidden);
        Network {
            topology: t,
            hidden_weights,
            hidden_biases,
            output_weights,
            output_biases,
            hidden_tf: specs,
            output_tf,
        }
    }
}

fn clamp_params<F: Scalar>(kind: TransferKind, mut params: Vec<F>) -> Vec<F> {
    let lo = F::from_f64(SCALE_PARAM_MIN);
    let hi = F::from_f64(SCALE_PARAM_MAX);
    let clamp = |v: F| v.max(lo).min(hi);
    match kind {
        TransferKind::Gaussian => params[0] = clamp(params[0]),
        TransferKind::Beta => {
            for p in &mut params[1..=3] {
                *p = clamp(*p);
            }
        }
        _ => {}
    }
    params
}

/// A candidate solution: one gene per network parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Genotype<F> {
    pub genes: Vec<F>,
    pub layout: GenotypeLayout,
}

impl<F: Scalar> Genotype<F> {
    /// Draws every gene uniformly from its bounds.
    pub fn random(layout: GenotypeLayout, bounds: &GeneBounds<F>, rng: &mut Rng) -> Self {
        assert_eq!(bounds.len(), layout.total(), "bounds do not match layout");
        Genotype {
            genes: bounds.sample(rng),
            layout,
        }
    }

    /// Decodes into a network (clamping scale parameters, see
    /// [`GenotypeLayout::decode`]).
    pub fn decode(&self) -> Network<F> {
        self.layout.decode(&self.genes)
    }

    /// Exact inverse of decoding for in-bounds parameters. Fails if the
    /// network mixes transfer families.
    pub fn encode(net: &Network<F>) -> Result<Genotype<F>> {
        net.validate()?;
        let layout = GenotypeLayout::new(net.topology, net.kind());
        let mut genes = Vec::with_capacity(layout.total());
        genes.extend_from_slice(&net.hidden_weights);
        genes.extend_from_slice(&net.output_weights);
        genes.extend_from_slice(&net.hidden_biases);
        genes.extend_from_slice(&net.output_biases);
        for spec in net.hidden_tf.iter().chain(net.output_tf.iter()) {
            genes.extend_from_slice(spec.params());
        }
        Ok(Genotype { genes, layout })
    }
}

/// Per-gene closed search-space bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneBounds<F> {
    lo: Vec<F>,
    hi: Vec<F>,
}

impl<F: Scalar> GeneBounds<F> {
    /// The same `(lo, hi)` interval for every gene.
    pub fn uniform(len: usize, lo: F, hi: F) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Config(format!("bounds require lo < hi, got [{lo}, {hi}]")));
        }
        Ok(GeneBounds {
            lo: vec![lo; len],
            hi: vec![hi; len],
        })
    }

    pub fn len(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.is_empty()
    }

    pub fn lo(&self, i: usize) -> F {
        self.lo[i]
    }

    pub fn hi(&self, i: usize) -> F {
        self.hi[i]
    }

    /// Uniform draw of a full gene vector.
    pub fn sample(&self, rng: &mut Rng) -> Vec<F> {
        (0..self.len()).map(|i| rng.uniform(self.lo[i], self.hi[i])).collect()
    }

    /// Uniform redraw of a single gene.
    pub fn sample_gene(&self, i: usize, rng: &mut Rng) -> F {
        rng.uniform(self.lo[i], self.hi[i])
    }

    pub fn contains(&self, genes: &[F]) -> bool {
        genes.len() == self.len()
            && genes
                .iter()
                .enumerate()
                .all(|(i, g)| *g >= self.lo[i] && *g <= self.hi[i])
    }
}
