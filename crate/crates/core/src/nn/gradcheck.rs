use super::{ParamStore, Rng};

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    /// Worst `|a - n| / max(|a|, |n|, 1e-8)` over the checked coordinates.
    pub max_rel_error: f64,
    /// Parameter name and flat offset of the worst coordinate.
    pub worst: Option<(String, usize)>,
    pub checked: usize,
}

/// Compares analytic gradients against central finite differences.
///
/// `loss` must evaluate the scalar loss at the store's current weights and
/// accumulate its analytic gradient into the store. When `samples` is at
/// least the number of scalars every coordinate is checked, otherwise
/// `samples` coordinates are drawn uniformly with `rng`.
pub fn gradient_check<F>(
    store: &mut ParamStore,
    mut loss: F,
    samples: usize,
    eps: f64,
    rng: &mut Rng,
) -> GradCheckReport
where
    F: FnMut(&mut ParamStore) -> f64,
{
    store.zero_grad();
    loss(store);
    let analytic: Vec<_> = store.ids().map(|id| store.grad(id).clone()).collect();

    let total = store.scalar_count();
    let coords: Vec<usize> = if samples >= total {
        (0..total).collect()
    } else {
        (0..samples).map(|_| rng.below(total)).collect()
    };

    let mut report = GradCheckReport {
        max_rel_error: 0.0,
        worst: None,
        checked: 0,
    };
    for k in coords {
        let (id, off) = store.locate(k);
        let orig = store.value(id).data()[off];
        store.value_mut(id).data_mut()[off] = orig + eps;
        let plus = loss(store);
        store.value_mut(id).data_mut()[off] = orig - eps;
        let minus = loss(store);
        store.value_mut(id).data_mut()[off] = orig;

        let numeric = (plus - minus) / (2.0 * eps);
        let a = analytic[id.index()].data()[off];
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-8);
        if report.worst.is_none() || rel > report.max_rel_error {
            report.max_rel_error = rel;
            report.worst = Some((store.name(id).to_owned(), off));
        }
        report.checked += 1;
    }
    store.zero_grad();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::Tensor2;

    #[test]
    fn detects_wrong_gradient() {
        let mut store = ParamStore::new();
        let id = store.add("w", Tensor2::new(1, 1, vec![2.0]));
        let mut rng = Rng::new(0);
        // loss w^2 with a gradient that is off by a factor of two
        let r = gradient_check(
            &mut store,
            |s| {
                let w = s.value(id).get(0, 0);
                s.accumulate(id, &Tensor2::new(1, 1, vec![w]));
                w * w
            },
            10,
            1e-5,
            &mut rng,
        );
        assert!(r.max_rel_error > 0.4);
        assert_eq!(r.worst, Some(("w".to_owned(), 0)));
        assert_eq!(store.value(id).data(), &[2.0]);
    }
}
