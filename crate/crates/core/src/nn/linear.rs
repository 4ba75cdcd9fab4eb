use super::{ParamId, ParamStore, Rng, Tensor2};

/// Saved input of a linear layer.
#[derive(Debug, Clone)]
pub struct LinearCache {
    x: Tensor2,
}

#[derive(Debug, Clone)]
pub struct LinearGrads {
    pub dw: Tensor2,
    pub db: Tensor2,
    pub dx: Tensor2,
}

/// `Y = X·W + b` for a batch `X` of shape `B x in`.
pub fn linear_forward(w: &Tensor2, b: &Tensor2, x: &Tensor2) -> (Tensor2, LinearCache) {
    let mut y = x.matmul(w);
    y.add_row_broadcast(b);
    y.debug_assert_finite("linear output");
    (y, LinearCache { x: x.clone() })
}

pub fn linear_backward(w: &Tensor2, cache: &LinearCache, dy: &Tensor2) -> LinearGrads {
    LinearGrads {
        dw: cache.x.t_matmul(dy),
        db: dy.sum_rows(),
        dx: dy.matmul_t(w),
    }
}

/// Fully connected layer whose weights live in a [`ParamStore`].
#[derive(Debug, Clone, Copy)]
pub struct Linear {
    w: ParamId,
    b: ParamId,
    input: usize,
    output: usize,
}

impl Linear {
    pub fn new(store: &mut ParamStore, name: &str, input: usize, output: usize, rng: &mut Rng) -> Self {
        let w = store.add_glorot(format!("{name}.w"), input, output, rng);
        let b = store.add(format!("{name}.b"), Tensor2::zeros(1, output));
        Self { w, b, input, output }
    }

    pub fn input(&self) -> usize {
        self.input
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn forward(&self, store: &ParamStore, x: &Tensor2) -> (Tensor2, LinearCache) {
        linear_forward(store.value(self.w), store.value(self.b), x)
    }

    /// Accumulates weight gradients into `store` and returns `dX`.
    pub fn backward(&self, store: &mut ParamStore, cache: &LinearCache, dy: &Tensor2) -> Tensor2 {
        let g = linear_backward(store.value(self.w), cache, dy);
        store.accumulate(self.w, &g.dw);
        store.accumulate(self.b, &g.db);
        g.dx
    }
}
