//! The two network families used on both sides of the adversarial pair.

use std::fmt;

use crate::nn::{relu, relu_backward, Linear, LinearCache, Lstm, LstmSeqCache, ParamStore, Rng, Tensor2};

/// Recursive (LSTM) or non-recursive (MLP) architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NetKind {
    Mlp,
    Lstm,
}

impl NetKind {
    /// Short tag used in configuration names: `NR` or `R`.
    pub fn tag(self) -> &'static str {
        match self {
            NetKind::Mlp => "NR",
            NetKind::Lstm => "R",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mlp" | "nr" | "linear" => Some(NetKind::Mlp),
            "lstm" | "r" | "rnn" | "recurrent" => Some(NetKind::Lstm),
            _ => None,
        }
    }
}

impl fmt::Display for NetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NetKind::Mlp => "mlp",
            NetKind::Lstm => "lstm",
        })
    }
}

/// Saved activations from a forward pass.
#[derive(Debug, Clone)]
pub enum NetCache {
    Mlp(MlpCache),
    Encoder(EncoderCache),
    Critic(CriticCache),
}

/// A network with an explicit backward pass. Inputs and outputs are batches
/// with one sample per row.
pub trait Network: Send + Sync + fmt::Debug {
    fn kind(&self) -> NetKind;

    fn forward(&self, store: &ParamStore, x: &Tensor2) -> (Tensor2, NetCache);

    /// Accumulates parameter gradients and returns the input gradient.
    fn backward(&self, store: &mut ParamStore, cache: &NetCache, dy: &Tensor2) -> Tensor2;
}

/// Four linear layers with ReLU between them and optionally on the output.
#[derive(Debug, Clone)]
pub struct Mlp {
    layers: Vec<Linear>,
    output_relu: bool,
}

#[derive(Debug, Clone)]
pub struct MlpCache {
    linear: Vec<LinearCache>,
    pre: Vec<Tensor2>,
}

impl Mlp {
    pub fn new(store: &mut ParamStore, prefix: &str, sizes: &[usize], output_relu: bool, rng: &mut Rng) -> Self {
        let layers = sizes
            .windows(2)
            .enumerate()
            .map(|(k, w)| Linear::new(store, &format!("{prefix}.fc{}", k + 1), w[0], w[1], rng))
            .collect();
        Self { layers, output_relu }
    }

    fn relu_after(&self, k: usize) -> bool {
        k + 1 < self.layers.len() || self.output_relu
    }
}

impl Network for Mlp {
    fn kind(&self) -> NetKind {
        NetKind::Mlp
    }

    fn forward(&self, store: &ParamStore, x: &Tensor2) -> (Tensor2, NetCache) {
        let mut h = x.clone();
        let mut linear = Vec::with_capacity(self.layers.len());
        let mut pre = Vec::with_capacity(self.layers.len());
        for (k, layer) in self.layers.iter().enumerate() {
            let (z, c) = layer.forward(store, &h);
            linear.push(c);
            if self.relu_after(k) {
                h = relu(&z);
                pre.push(z);
            } else {
                h = z;
            }
        }
        (h, NetCache::Mlp(MlpCache { linear, pre }))
    }

    fn backward(&self, store: &mut ParamStore, cache: &NetCache, dy: &Tensor2) -> Tensor2 {
        let NetCache::Mlp(cache) = cache else {
            panic!("cache from a different network");
        };
        let mut g = dy.clone();
        for (k, layer) in self.layers.iter().enumerate().rev() {
            if self.relu_after(k) {
                g = relu_backward(&cache.pre[k], &g);
            }
            g = layer.backward(store, &cache.linear[k], &g);
        }
        g
    }
}

fn steps_of(x: &Tensor2) -> Vec<Tensor2> {
    (0..x.cols()).map(|t| x.column(t)).collect()
}

fn join_steps(steps: &[Tensor2]) -> Tensor2 {
    let batch = steps.first().map_or(0, Tensor2::rows);
    let mut out = Tensor2::zeros(batch, steps.len());
    for (t, s) in steps.iter().enumerate() {
        for r in 0..batch {
            out.set(r, t, s.get(r, 0));
        }
    }
    out
}

/// Two stacked LSTM layers reading one scalar per step; the last hidden
/// state feeds a fully connected layer and an output ReLU.
#[derive(Debug, Clone)]
pub struct RecurrentEncoder {
    lower: Lstm,
    upper: Lstm,
    head: Linear,
}

#[derive(Debug, Clone)]
pub struct EncoderCache {
    lower: LstmSeqCache,
    upper: LstmSeqCache,
    head: LinearCache,
    pre: Tensor2,
    steps: usize,
    batch: usize,
}

impl RecurrentEncoder {
    pub fn new(store: &mut ParamStore, prefix: &str, hidden: usize, outputs: usize, rng: &mut Rng) -> Self {
        Self {
            lower: Lstm::new(store, &format!("{prefix}.lstm1"), 1, hidden, rng),
            upper: Lstm::new(store, &format!("{prefix}.lstm2"), hidden, hidden, rng),
            head: Linear::new(store, &format!("{prefix}.fc"), hidden, outputs, rng),
        }
    }
}

impl Network for RecurrentEncoder {
    fn kind(&self) -> NetKind {
        NetKind::Lstm
    }

    fn forward(&self, store: &ParamStore, x: &Tensor2) -> (Tensor2, NetCache) {
        let xs = steps_of(x);
        let (h1, lower) = self.lower.forward_seq(store, &xs);
        let (h2, upper) = self.upper.forward_seq(store, &h1);
        let last = h2.last().expect("at least one input step");
        let (z, head) = self.head.forward(store, last);
        let y = relu(&z);
        let cache = EncoderCache {
            lower,
            upper,
            head,
            pre: z,
            steps: xs.len(),
            batch: x.rows(),
        };
        (y, NetCache::Encoder(cache))
    }

    fn backward(&self, store: &mut ParamStore, cache: &NetCache, dy: &Tensor2) -> Tensor2 {
        let NetCache::Encoder(c) = cache else {
            panic!("cache from a different network");
        };
        let dz = relu_backward(&c.pre, dy);
        let dlast = self.head.backward(store, &c.head, &dz);
        let hidden = self.upper.hidden();
        let mut dh2 = vec![Tensor2::zeros(c.batch, hidden); c.steps];
        dh2[c.steps - 1] = dlast;
        let dh1 = self.upper.backward_seq(store, &c.upper, &dh2);
        let dxs = self.lower.backward_seq(store, &c.lower, &dh1);
        join_steps(&dxs)
    }
}

/// Two stacked LSTM layers reading one horizon value per step. A shared
/// linear head scores every step's upper hidden state and the window logit
/// is the mean of those per-step logits.
#[derive(Debug, Clone)]
pub struct RecurrentCritic {
    lower: Lstm,
    upper: Lstm,
    head: Linear,
}

#[derive(Debug, Clone)]
pub struct CriticCache {
    lower: LstmSeqCache,
    upper: LstmSeqCache,
    head: Vec<LinearCache>,
    step_logits: Vec<Tensor2>,
}

impl CriticCache {
    /// Per-step logits (`B x 1` each) behind the averaged output.
    pub fn step_logits(&self) -> &[Tensor2] {
        &self.step_logits
    }
}

impl RecurrentCritic {
    pub fn new(store: &mut ParamStore, prefix: &str, hidden: usize, rng: &mut Rng) -> Self {
        Self {
            lower: Lstm::new(store, &format!("{prefix}.lstm1"), 1, hidden, rng),
            upper: Lstm::new(store, &format!("{prefix}.lstm2"), hidden, hidden, rng),
            head: Linear::new(store, &format!("{prefix}.fc"), hidden, 1, rng),
        }
    }
}

impl Network for RecurrentCritic {
    fn kind(&self) -> NetKind {
        NetKind::Lstm
    }

    fn forward(&self, store: &ParamStore, x: &Tensor2) -> (Tensor2, NetCache) {
        let xs = steps_of(x);
        let (h1, lower) = self.lower.forward_seq(store, &xs);
        let (h2, upper) = self.upper.forward_seq(store, &h1);
        let mut head = Vec::with_capacity(h2.len());
        let mut step_logits = Vec::with_capacity(h2.len());
        let mut mean = Tensor2::zeros(x.rows(), 1);
        for h in &h2 {
            let (z, c) = self.head.forward(store, h);
            mean.add_assign(&z);
            head.push(c);
            step_logits.push(z);
        }
        mean.scale(1.0 / h2.len() as f64);
        let cache = CriticCache {
            lower,
            upper,
            head,
            step_logits,
        };
        (mean, NetCache::Critic(cache))
    }

    fn backward(&self, store: &mut ParamStore, cache: &NetCache, dy: &Tensor2) -> Tensor2 {
        let NetCache::Critic(c) = cache else {
            panic!("cache from a different network");
        };
        let steps = c.head.len();
        let mut dstep = dy.clone();
        dstep.scale(1.0 / steps as f64);
        let dh2: Vec<Tensor2> = c.head.iter().map(|hc| self.head.backward(store, hc, &dstep)).collect();
        let dh1 = self.upper.backward_seq(store, &c.upper, &dh2);
        let dxs = self.lower.backward_seq(store, &c.lower, &dh1);
        join_steps(&dxs)
    }
}
