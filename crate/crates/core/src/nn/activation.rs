use super::Tensor2;

pub fn relu(x: &Tensor2) -> Tensor2 {
    x.map(|v| v.max(0.0))
}

/// Gradient through a ReLU given its pre-activation input.
pub fn relu_backward(pre: &Tensor2, dy: &Tensor2) -> Tensor2 {
    pre.zip_map(dy, |x, g| if x > 0.0 { g } else { 0.0 })
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Binary cross-entropy on a raw logit, in the fused overflow-free form
/// `max(z, 0) - z*y + ln(1 + exp(-|z|))`.
pub fn bce_with_logits(logit: f64, label: f64) -> f64 {
    logit.max(0.0) - logit * label + (-logit.abs()).exp().ln_1p()
}

/// `d bce / d logit = sigmoid(z) - y`.
pub fn bce_with_logits_grad(logit: f64, label: f64) -> f64 {
    sigmoid(logit) - label
}

/// Mean BCE over a column of logits against one label, with its gradient.
pub fn mean_bce_with_logits(logits: &Tensor2, label: f64) -> (f64, Tensor2) {
    let n = logits.len() as f64;
    let loss = logits.data().iter().map(|z| bce_with_logits(*z, label)).sum::<f64>() / n;
    let grad = logits.map(|z| bce_with_logits_grad(z, label) / n);
    (loss, grad)
}
