use super::{ParamStore, Tensor2};

/// Bias-corrected Adam over every parameter in a store.
#[derive(Debug, Clone)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    m: Vec<Tensor2>,
    v: Vec<Tensor2>,
}

impl Adam {
    pub fn new(store: &ParamStore, lr: f64) -> Self {
        let zeros = || {
            store
                .ids()
                .map(|id| {
                    let (r, c) = store.value(id).shape();
                    Tensor2::zeros(r, c)
                })
                .collect::<Vec<_>>()
        };
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: zeros(),
            v: zeros(),
        }
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    /// Applies one update from the accumulated gradients, then zeroes them.
    pub fn step(&mut self, store: &mut ParamStore) {
        assert_eq!(self.m.len(), store.len(), "optimizer built for a different store");
        self.step += 1;
        let t = self.step as i32;
        let bc1 = 1.0 - self.beta1.powi(t);
        let bc2 = 1.0 - self.beta2.powi(t);
        let ids: Vec<_> = store.ids().collect();
        for (k, id) in ids.into_iter().enumerate() {
            let grad = store.grad(id).clone();
            let m = self.m[k].data_mut();
            let v = self.v[k].data_mut();
            let w = store.value_mut(id).data_mut();
            for (((w, m), v), g) in w.iter_mut().zip(m).zip(v).zip(grad.data()) {
                *m = self.beta1 * *m + (1.0 - self.beta1) * g;
                *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
                let m_hat = *m / bc1;
                let v_hat = *v / bc2;
                *w -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
            }
        }
        store.zero_grad();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic_run(steps: usize) -> (f64, Vec<f64>) {
        // f(w) = (w - 3)^2
        let mut store = ParamStore::new();
        let id = store.add("w", Tensor2::new(1, 1, vec![0.0]));
        let mut opt = Adam::new(&store, 1e-2);
        let mut trace = Vec::new();
        for _ in 0..steps {
            let w = store.value(id).get(0, 0);
            store.accumulate(id, &Tensor2::new(1, 1, vec![2.0 * (w - 3.0)]));
            opt.step(&mut store);
            trace.push(store.value(id).get(0, 0));
        }
        (store.value(id).get(0, 0), trace)
    }

    #[test]
    fn converges_on_scalar_quadratic() {
        let (w, _) = quadratic_run(2000);
        assert!((w - 3.0).abs() < 1e-3, "w = {w}");
    }

    #[test]
    fn runs_are_bit_identical() {
        assert_eq!(quadratic_run(300).1, quadratic_run(300).1);
    }

    #[test]
    fn zero_gradient_leaves_weights() {
        let mut store = ParamStore::new();
        let id = store.add("w", Tensor2::new(1, 2, vec![1.5, -0.5]));
        let mut opt = Adam::new(&store, 0.1);
        opt.step(&mut store);
        assert_eq!(store.value(id).data(), &[1.5, -0.5]);
    }

    #[test]
    fn gradients_cleared_after_step() {
        let mut store = ParamStore::new();
        let id = store.add("w", Tensor2::new(1, 1, vec![1.0]));
        store.accumulate(id, &Tensor2::new(1, 1, vec![4.0]));
        Adam::new(&store, 0.1).step(&mut store);
        assert_eq!(store.grad(id).data(), &[0.0]);
    }
}
