//! Gated recurrent cell with input, forget and output gates and a tanh
//! candidate. Gate pre-activations are packed as `[i | f | g | o]` along the
//! columns of a `B x 4h` matrix.

use super::activation::sigmoid;
use super::{ParamId, ParamStore, Rng, Tensor2};

/// Borrowed cell weights: `wx` is `in x 4h`, `wh` is `h x 4h`, `b` is `1 x 4h`.
#[derive(Debug, Clone, Copy)]
pub struct LstmWeights<'a> {
    pub wx: &'a Tensor2,
    pub wh: &'a Tensor2,
    pub b: &'a Tensor2,
}

impl LstmWeights<'_> {
    fn hidden(&self) -> usize {
        self.wh.rows()
    }
}

#[derive(Debug, Clone)]
pub struct LstmCellCache {
    x: Tensor2,
    h_prev: Tensor2,
    c_prev: Tensor2,
    i: Tensor2,
    f: Tensor2,
    g: Tensor2,
    o: Tensor2,
    tanh_c: Tensor2,
}

#[derive(Debug, Clone)]
pub struct LstmCellGrads {
    pub dx: Tensor2,
    pub dh_prev: Tensor2,
    pub dc_prev: Tensor2,
    pub dwx: Tensor2,
    pub dwh: Tensor2,
    pub db: Tensor2,
}

pub fn lstm_cell_forward(
    w: LstmWeights<'_>,
    x: &Tensor2,
    h_prev: &Tensor2,
    c_prev: &Tensor2,
) -> (Tensor2, Tensor2, LstmCellCache) {
    let hd = w.hidden();
    let batch = x.rows();
    let mut z = x.matmul(w.wx);
    z.add_assign(&h_prev.matmul(w.wh));
    z.add_row_broadcast(w.b);

    let mut i = Tensor2::zeros(batch, hd);
    let mut f = Tensor2::zeros(batch, hd);
    let mut g = Tensor2::zeros(batch, hd);
    let mut o = Tensor2::zeros(batch, hd);
    let mut c = Tensor2::zeros(batch, hd);
    let mut h = Tensor2::zeros(batch, hd);
    let mut tanh_c = Tensor2::zeros(batch, hd);
    for r in 0..batch {
        let zr = z.row(r);
        for k in 0..hd {
            let iv = sigmoid(zr[k]);
            let fv = sigmoid(zr[hd + k]);
            let gv = zr[2 * hd + k].tanh();
            let ov = sigmoid(zr[3 * hd + k]);
            let cv = fv * c_prev.get(r, k) + iv * gv;
            let tc = cv.tanh();
            i.set(r, k, iv);
            f.set(r, k, fv);
            g.set(r, k, gv);
            o.set(r, k, ov);
            c.set(r, k, cv);
            tanh_c.set(r, k, tc);
            h.set(r, k, ov * tc);
        }
    }
    h.debug_assert_finite("lstm hidden state");
    let cache = LstmCellCache {
        x: x.clone(),
        h_prev: h_prev.clone(),
        c_prev: c_prev.clone(),
        i,
        f,
        g,
        o,
        tanh_c,
    };
    (h, c, cache)
}

/// Backward pass through one step given the gradients arriving at `h_t`
/// and `c_t`.
pub fn lstm_cell_backward(w: LstmWeights<'_>, cache: &LstmCellCache, dh: &Tensor2, dc: &Tensor2) -> LstmCellGrads {
    let hd = w.hidden();
    let batch = dh.rows();
    let mut dz = Tensor2::zeros(batch, 4 * hd);
    let mut dc_prev = Tensor2::zeros(batch, hd);
    for r in 0..batch {
        for k in 0..hd {
            let (iv, fv, gv, ov) = (
                cache.i.get(r, k),
                cache.f.get(r, k),
                cache.g.get(r, k),
                cache.o.get(r, k),
            );
            let tc = cache.tanh_c.get(r, k);
            let dhv = dh.get(r, k);
            let dct = dc.get(r, k) + dhv * ov * (1.0 - tc * tc);
            let dzr = dz.row_mut(r);
            dzr[k] = dct * gv * iv * (1.0 - iv);
            dzr[hd + k] = dct * cache.c_prev.get(r, k) * fv * (1.0 - fv);
            dzr[2 * hd + k] = dct * iv * (1.0 - gv * gv);
            dzr[3 * hd + k] = dhv * tc * ov * (1.0 - ov);
            dc_prev.set(r, k, dct * fv);
        }
    }
    LstmCellGrads {
        dx: dz.matmul_t(w.wx),
        dh_prev: dz.matmul_t(w.wh),
        dc_prev,
        dwx: cache.x.t_matmul(&dz),
        dwh: cache.h_prev.t_matmul(&dz),
        db: dz.sum_rows(),
    }
}

/// One recurrent layer unrolled over a sequence, starting from zero state.
#[derive(Debug, Clone, Copy)]
pub struct Lstm {
    wx: ParamId,
    wh: ParamId,
    b: ParamId,
    input: usize,
    hidden: usize,
}

#[derive(Debug, Clone)]
pub struct LstmSeqCache {
    steps: Vec<LstmCellCache>,
}

impl Lstm {
    /// Glorot-uniform weights, zero biases except the forget gate at 1.0.
    pub fn new(store: &mut ParamStore, name: &str, input: usize, hidden: usize, rng: &mut Rng) -> Self {
        let wx = store.add_glorot(format!("{name}.wx"), input, 4 * hidden, rng);
        let wh = store.add_glorot(format!("{name}.wh"), hidden, 4 * hidden, rng);
        let mut bias = Tensor2::zeros(1, 4 * hidden);
        for k in hidden..2 * hidden {
            bias.set(0, k, 1.0);
        }
        let b = store.add(format!("{name}.b"), bias);
        Self {
            wx,
            wh,
            b,
            input,
            hidden,
        }
    }

    pub fn input(&self) -> usize {
        self.input
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    fn weights<'a>(&self, store: &'a ParamStore) -> LstmWeights<'a> {
        LstmWeights {
            wx: store.value(self.wx),
            wh: store.value(self.wh),
            b: store.value(self.b),
        }
    }

    /// Runs the sequence `xs` (each `B x input`) and returns every hidden state.
    pub fn forward_seq(&self, store: &ParamStore, xs: &[Tensor2]) -> (Vec<Tensor2>, LstmSeqCache) {
        let w = self.weights(store);
        let batch = xs.first().map_or(0, Tensor2::rows);
        let mut h = Tensor2::zeros(batch, self.hidden);
        let mut c = Tensor2::zeros(batch, self.hidden);
        let mut hs = Vec::with_capacity(xs.len());
        let mut steps = Vec::with_capacity(xs.len());
        for x in xs {
            let (h_next, c_next, cache) = lstm_cell_forward(w, x, &h, &c);
            hs.push(h_next.clone());
            steps.push(cache);
            h = h_next;
            c = c_next;
        }
        (hs, LstmSeqCache { steps })
    }

    /// Backpropagation through time. `dhs[t]` is the loss gradient arriving
    /// at hidden state `t` from outside the layer. Returns input gradients.
    pub fn backward_seq(&self, store: &mut ParamStore, cache: &LstmSeqCache, dhs: &[Tensor2]) -> Vec<Tensor2> {
        assert_eq!(dhs.len(), cache.steps.len(), "one gradient per step");
        let batch = dhs.first().map_or(0, Tensor2::rows);
        let mut dwx = Tensor2::zeros(self.input, 4 * self.hidden);
        let mut dwh = Tensor2::zeros(self.hidden, 4 * self.hidden);
        let mut db = Tensor2::zeros(1, 4 * self.hidden);
        let mut dh_next = Tensor2::zeros(batch, self.hidden);
        let mut dc_next = Tensor2::zeros(batch, self.hidden);
        let mut dxs = vec![Tensor2::zeros(0, 0); dhs.len()];
        {
            let w = self.weights(store);
            for t in (0..dhs.len()).rev() {
                let mut dh = dhs[t].clone();
                dh.add_assign(&dh_next);
                let g = lstm_cell_backward(w, &cache.steps[t], &dh, &dc_next);
                dwx.add_assign(&g.dwx);
                dwh.add_assign(&g.dwh);
                db.add_assign(&g.db);
                dxs[t] = g.dx;
                dh_next = g.dh_prev;
                dc_next = g.dc_prev;
            }
        }
        store.accumulate(self.wx, &dwx);
        store.accumulate(self.wh, &dwh);
        store.accumulate(self.b, &db);
        dxs
    }
}
