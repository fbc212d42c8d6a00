//! Summation of slowly or conditionally convergent sequences.

use alloc::vec::Vec;

use crate::sum::Accumulator;

/// How the partial sums of a conditionally convergent series are reduced to
/// one estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Averaging {
    None,
    Cesaro,
    IteratedCesaro,
}

impl Averaging {
    pub fn name(self) -> &'static str {
        match self {
            Averaging::None => "none",
            Averaging::Cesaro => "cesaro",
            Averaging::IteratedCesaro => "iterated_cesaro",
        }
    }
}

/// Number of blocks the averaging window is split into.
pub const BLOCKS: usize = 8;

/// Mean of the last half of `partials` and the spread of its eight block
/// means around it. The spread serves as the envelope half-width.
pub fn block_envelope(partials: &[f64]) -> (f64, f64) {
    let n = partials.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let start = n / 2;
    let window = &partials[start..];
    let centre = mean(window);
    if window.len() < BLOCKS {
        let spread = window
            .iter()
            .map(|v| (v - centre).abs())
            .fold(0.0, f64::max);
        return (centre, spread);
    }
    let len = window.len() / BLOCKS;
    let mut spread: f64 = 0.0;
    for b in 0..BLOCKS {
        let hi = if b + 1 == BLOCKS {
            window.len()
        } else {
            (b + 1) * len
        };
        let m = mean(&window[b * len..hi]);
        spread = spread.max((m - centre).abs());
    }
    (centre, spread)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().copied().collect::<Accumulator>().value() / v.len() as f64
}

/// Cesàro means `(S_1 + ... + S_k)/k` of a sequence of partial sums.
pub fn running_means(partials: &[f64]) -> Vec<f64> {
    let mut acc = Accumulator::new();
    partials
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            acc.add(s);
            acc.value() / (k + 1) as f64
        })
        .collect()
}

/// Reduces partial sums according to `mode`. With `Averaging::None` the last
/// partial sum is returned and the error is the last increment.
pub fn reduce(partials: &[f64], mode: Averaging) -> (f64, f64) {
    match mode {
        Averaging::None => match partials {
            [] => (0.0, 0.0),
            [s] => (*s, 0.0),
            [.., a, b] => (*b, (b - a).abs()),
        },
        Averaging::Cesaro => block_envelope(partials),
        Averaging::IteratedCesaro => block_envelope(&running_means(partials)),
    }
}

/// Repeatedly replaces a sequence by the means of neighbouring entries.
/// Returns the final value and the change made by the last pass.
pub fn repeated_average(seq: &[f64], passes: usize) -> (f64, f64) {
    let mut cur: Vec<f64> = seq.to_vec();
    let mut last_change = f64::INFINITY;
    for _ in 0..passes {
        if cur.len() < 2 {
            break;
        }
        let next: Vec<f64> = cur.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        last_change = (next[next.len() - 1] - cur[cur.len() - 1]).abs();
        cur = next;
    }
    match cur.last() {
        Some(&v) => (
            v,
            if last_change.is_finite() {
                last_change
            } else {
                0.0
            },
        ),
        None => (0.0, 0.0),
    }
}

/// Wynn's epsilon algorithm. Returns the last even-column entry and the
/// difference to the previous one.
pub fn wynn_epsilon(seq: &[f64]) -> (f64, f64) {
    let n = seq.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    if n < 3 {
        let v = seq[n - 1];
        let e = if n == 2 { (seq[1] - seq[0]).abs() } else { 0.0 };
        return (v, e);
    }
    // e[k] holds column k of the tableau, built diagonally.
    let mut prev: Vec<f64> = alloc::vec![0.0; n + 1];
    let mut cur: Vec<f64> = seq.to_vec();
    let mut best = seq[n - 1];
    let mut best_err = (seq[n - 1] - seq[n - 2]).abs();
    let mut last_even = seq[n - 1];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let inv = if d == 0.0 { f64::INFINITY } else { 1.0 / d };
            next.push(prev[i + 1] + inv);
        }
        col += 1;
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            let v = cur[cur.len() - 1];
            if !v.is_finite() {
                break;
            }
            let err = (v - last_even).abs();
            if err < best_err {
                best = v;
                best_err = err;
            }
            last_even = v;
        }
    }
    (best, best_err)
}

/// Neville extrapolation to `h = 0` of samples `(h_i, v_i)`. Returns the
/// extrapolated value and the change from the next-lower order.
pub fn extrapolate_to_zero(h: &[f64], v: &[f64]) -> (f64, f64) {
    assert_eq!(h.len(), v.len());
    match v.len() {
        0 => (0.0, 0.0),
        1 => (v[0], 0.0),
        n => {
            let top = neville(h, v);
            let lower = neville(&h[..n - 1], &v[..n - 1]);
            (top, (top - lower).abs())
        }
    }
}

fn neville(h: &[f64], v: &[f64]) -> f64 {
    let n = v.len();
    let mut p = v.to_vec();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn envelope_of_constant_is_tight() {
        let (v, e) = block_envelope(&[2.0; 64]);
        assert_eq!(v, 2.0);
        assert_eq!(e, 0.0);
    }

    #[test]
    fn cesaro_sums_grandi_series() {
        // 1 - 1 + 1 - ... has Cesàro sum 1/2.
        let partials: Vec<f64> = (0..512)
            .map(|k| if k % 2 == 0 { 1.0 } else { 0.0 })
            .collect();
        let (v, e) = reduce(&partials, Averaging::Cesaro);
        assert!((v - 0.5).abs() < 1e-12);
        assert!(e < 1e-12);
    }

    #[test]
    fn wynn_accelerates_alternating_log2() {
        let mut s = 0.0;
        let partials: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (v, e) = wynn_epsilon(&partials);
        assert!((v - core::f64::consts::LN_2).abs() < 1e-10, "{v}");
        assert!(e < 1e-8);
    }

    #[test]
    fn neville_is_exact_for_polynomials_in_h() {
        let h = [0.4, 0.2, 0.1];
        let v: Vec<f64> = h.iter().map(|x| 3.0 + 2.0 * x - 5.0 * x * x).collect();
        let (r, _) = extrapolate_to_zero(&h, &v);
        assert!((r - 3.0).abs() < 1e-13);
    }

    #[test]
    fn repeated_average_damps_oscillation() {
        let seq: Vec<f64> = (0..30)
            .map(|k| 1.0 + if k % 2 == 0 { 0.5 } else { -0.5 } / (k + 1) as f64)
            .collect();
        let (v, _) = repeated_average(&seq, 10);
        assert!((v - 1.0).abs() < 1e-3);
    }
}
