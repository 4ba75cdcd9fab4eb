use super::network::{Mlp, NetCache, NetKind, Network, RecurrentCritic, RecurrentEncoder};
use super::scaling::ScaleStats;
use super::ModelConfig;
use crate::nn::{ParamStore, Rng, Tensor2};

/// Maps a length-`P` history to a non-negative length-`L` forecast.
#[derive(Debug)]
pub struct Forecaster {
    pub(crate) net: Box<dyn Network>,
    pub(crate) store: ParamStore,
    p: usize,
    l: usize,
}

/// Scores a length-`L` window with one logit per sample.
#[derive(Debug)]
pub struct Discriminator {
    pub(crate) net: Box<dyn Network>,
    pub(crate) store: ParamStore,
    l: usize,
}

/// MLP: `P -> h -> h -> h -> L` with ReLU between layers and on the output.
/// LSTM: two stacked recurrent layers over the history, last hidden state
/// through a linear layer to `L` outputs, then ReLU.
pub fn build_forecaster(config: &ModelConfig, rng: &mut Rng) -> Forecaster {
    let mut store = ParamStore::new();
    let (p, h, l) = (config.p, config.hidden, config.l);
    let net: Box<dyn Network> = match config.forecaster {
        NetKind::Mlp => Box::new(Mlp::new(&mut store, "enc", &[p, h, h, h, l], true, rng)),
        NetKind::Lstm => Box::new(RecurrentEncoder::new(&mut store, "enc", h, l, rng)),
    };
    Forecaster { net, store, p, l }
}

/// MLP: `L -> h -> h -> h -> 1`, raw logit out. LSTM: per-step logits from a
/// shared head over the upper hidden states, averaged over the window.
pub fn build_discriminator(config: &ModelConfig, rng: &mut Rng) -> Discriminator {
    let mut store = ParamStore::new();
    let (h, l) = (config.hidden, config.l);
    let net: Box<dyn Network> = match config.discriminator {
        NetKind::Mlp => Box::new(Mlp::new(&mut store, "disc", &[l, h, h, h, 1], false, rng)),
        NetKind::Lstm => Box::new(RecurrentCritic::new(&mut store, "disc", h, rng)),
    };
    Discriminator { net, store, l }
}

impl Forecaster {
    pub fn kind(&self) -> NetKind {
        self.net.kind()
    }

    pub fn params(&self) -> &ParamStore {
        &self.store
    }

    pub fn params_mut(&mut self) -> &mut ParamStore {
        &mut self.store
    }

    /// The network and its parameters, borrowed separately.
    pub fn parts_mut(&mut self) -> (&dyn Network, &mut ParamStore) {
        (self.net.as_ref(), &mut self.store)
    }

    pub fn history_len(&self) -> usize {
        self.p
    }

    pub fn horizon(&self) -> usize {
        self.l
    }

    /// Raw network output on an already-scaled batch (`B x P`).
    pub fn forward_scaled(&self, x: &Tensor2) -> Tensor2 {
        self.net.forward(&self.store, x).0
    }

    /// Scales the history, runs the network, unscales and clamps at zero.
    pub fn forecast(&self, history: &[f64]) -> Vec<f64> {
        self.forecast_batch(&[history]).pop().expect("one row")
    }

    pub fn forecast_batch<H: AsRef<[f64]>>(&self, histories: &[H]) -> Vec<Vec<f64>> {
        if histories.is_empty() {
            return Vec::new();
        }
        let stats: Vec<ScaleStats> = histories
            .iter()
            .map(|h| {
                assert_eq!(h.as_ref().len(), self.p, "history length must equal P");
                ScaleStats::from_history(h.as_ref())
            })
            .collect();
        let rows: Vec<Vec<f64>> = histories.iter().zip(&stats).map(|(h, s)| s.apply(h.as_ref())).collect();
        let y = self.forward_scaled(&Tensor2::from_rows(&rows));
        (0..y.rows())
            .map(|r| y.row(r).iter().map(|v| (v * stats[r].scale).max(0.0)).collect())
            .collect()
    }
}

impl Discriminator {
    pub fn kind(&self) -> NetKind {
        self.net.kind()
    }

    pub fn params(&self) -> &ParamStore {
        &self.store
    }

    pub fn params_mut(&mut self) -> &mut ParamStore {
        &mut self.store
    }

    pub fn parts_mut(&mut self) -> (&dyn Network, &mut ParamStore) {
        (self.net.as_ref(), &mut self.store)
    }

    pub fn horizon(&self) -> usize {
        self.l
    }

    /// One logit per row of `y` (`B x L`).
    pub fn logits(&self, y: &Tensor2) -> Tensor2 {
        self.net.forward(&self.store, y).0
    }

    /// Per-step logits for the recursive kind, `None` for the MLP kind.
    pub fn step_logits(&self, y: &Tensor2) -> Option<Vec<Tensor2>> {
        match self.net.forward(&self.store, y).1 {
            NetCache::Critic(c) => Some(c.step_logits().to_vec()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::sigmoid;

    fn config(f: NetKind, d: NetKind, p: usize, h: usize, l: usize) -> ModelConfig {
        ModelConfig {
            forecaster: f,
            discriminator: d,
            p,
            l,
            hidden: h,
            ..ModelConfig::default()
        }
    }

    #[test]
    fn parameter_counts() {
        let mut rng = Rng::new(0);
        let c = config(NetKind::Mlp, NetKind::Mlp, 6, 64, 6);
        // (6*64+64) + 2*(64*64+64) + (64*6+6)
        assert_eq!(build_forecaster(&c, &mut rng).params().scalar_count(), 448 + 8320 + 390);
        // (6*64+64) + 2*(64*64+64) + (64+1)
        assert_eq!(
            build_discriminator(&c, &mut rng).params().scalar_count(),
            448 + 8320 + 65
        );

        let c = config(NetKind::Lstm, NetKind::Lstm, 6, 64, 6);
        // lstm1: 1*256 + 64*256 + 256; lstm2: 64*256 + 64*256 + 256; fc: 64*6 + 6
        assert_eq!(
            build_forecaster(&c, &mut rng).params().scalar_count(),
            16896 + 33024 + 390
        );
        assert_eq!(
            build_discriminator(&c, &mut rng).params().scalar_count(),
            16896 + 33024 + 65
        );
    }

    #[test]
    fn forecasts_have_horizon_length_and_are_non_negative() {
        let mut rng = Rng::new(1);
        for kind in [NetKind::Mlp, NetKind::Lstm] {
            let f = build_forecaster(&config(kind, NetKind::Mlp, 5, 8, 3), &mut rng);
            for _ in 0..20 {
                let h: Vec<f64> = (0..5).map(|_| rng.uniform_range(0.0, 10.0)).collect();
                let y = f.forecast(&h);
                assert_eq!(y.len(), 3);
                assert!(y.iter().all(|v| *v >= 0.0));
            }
        }
    }

    #[test]
    fn discriminators_emit_one_logit() {
        let mut rng = Rng::new(2);
        let y = Tensor2::new(3, 4, (0..12).map(f64::from).collect());
        for kind in [NetKind::Mlp, NetKind::Lstm] {
            let d = build_discriminator(&config(NetKind::Mlp, kind, 2, 6, 4), &mut rng);
            let z = d.logits(&y);
            assert_eq!(z.shape(), (3, 1));
            assert!(z.data().iter().all(|v| sigmoid(*v) > 0.0));
        }
    }

    #[test]
    fn recursive_logit_is_mean_of_step_logits() {
        let mut rng = Rng::new(3);
        let d = build_discriminator(&config(NetKind::Mlp, NetKind::Lstm, 2, 6, 4), &mut rng);
        let y = Tensor2::new(2, 4, vec![0., 3., 0., 1., 2., 0., 0., 5.]);
        let steps = d.step_logits(&y).unwrap();
        assert_eq!(steps.len(), 4);
        let z = d.logits(&y);
        for r in 0..2 {
            let mean = steps.iter().map(|s| s.get(r, 0)).sum::<f64>() / 4.0;
            assert!((z.get(r, 0) - mean).abs() < 1e-12);
        }

        // a one-step window is just its sole step logit
        let d1 = build_discriminator(&config(NetKind::Mlp, NetKind::Lstm, 2, 6, 1), &mut rng);
        let y1 = Tensor2::new(1, 1, vec![2.5]);
        assert_eq!(d1.logits(&y1).get(0, 0), d1.step_logits(&y1).unwrap()[0].get(0, 0));

        let mlp = build_discriminator(&config(NetKind::Mlp, NetKind::Mlp, 2, 6, 4), &mut rng);
        assert!(mlp.step_logits(&y).is_none());
    }

    #[test]
    fn step_order_matters_for_both_kinds() {
        let mut rng = Rng::new(4);
        let y = Tensor2::new(1, 4, vec![0., 0., 4., 1.]);
        let swapped = Tensor2::new(1, 4, vec![4., 1., 0., 0.]);
        for kind in [NetKind::Mlp, NetKind::Lstm] {
            let d = build_discriminator(&config(NetKind::Mlp, kind, 2, 6, 4), &mut rng);
            assert_ne!(d.logits(&y), d.logits(&swapped));
        }
    }
}
