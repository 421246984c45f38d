use rand::Rng as _;

use super::Mode;
use crate::Rng;

/// One prediction task: guess the token at `target` from the tokens at
/// `context`. Both are positions within a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingInstance {
    pub context: Vec<usize>,
    pub target: usize,
}

/// Training instances for a document of `len` tokens.
///
/// PV-DM makes every position a target, with up to `window` positions on
/// each side as context. PV-DBOW slides a span of `2·window + 1` tokens
/// (the whole document when shorter) and draws one target per span;
/// the span is reported as the context. Windows never cross the document
/// boundary.
pub fn build_windows(len: usize, window: usize, mode: Mode, rng: &mut Rng) -> Vec<TrainingInstance> {
    match mode {
        Mode::Pvdm => (0..len)
            .map(|i| TrainingInstance {
                context: context_positions(len, i, window),
                target: i,
            })
            .collect(),
        Mode::Pvdbow => {
            if len == 0 {
                return Vec::new();
            }
            let span = (2 * window + 1).min(len);
            (0..=len - span)
                .map(|start| TrainingInstance {
                    context: (start..start + span).collect(),
                    target: start + rng.random_range(0..span),
                })
                .collect()
        }
    }
}

/// Positions within `window` of `center`, excluding the center itself.
pub fn context_positions(len: usize, center: usize, window: usize) -> Vec<usize> {
    let lo = center.saturating_sub(window);
    let hi = (center + window + 1).min(len);
    (lo..hi).filter(|&p| p != center).collect()
}

/// Every run of `n` consecutive positions.
pub fn contiguous_spans(len: usize, n: usize) -> Vec<Vec<usize>> {
    skip_gram_spans(len, n, 0)
}

/// `n`-position spans whose first `n − 1` positions are consecutive and
/// whose last position may skip up to `max_skip` tokens ahead, in order
/// of start position then skip.
pub fn skip_gram_spans(len: usize, n: usize, max_skip: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    let mut spans = Vec::new();
    for start in 0..len {
        for skip in 0..=max_skip {
            let last = start + n - 1 + skip;
            if last >= len {
                break;
            }
            let mut span: Vec<usize> = (start..start + n - 1).collect();
            span.push(last);
            spans.push(span);
        }
    }
    spans
}

/// Probability that one occurrence of a word with relative frequency
/// `freq` is dropped: `max(0, 1 − √(threshold / freq))`.
pub fn discard_probability(threshold: f64, freq: f64) -> f64 {
    if threshold <= 0.0 || freq <= 0.0 {
        return 0.0;
    }
    (1.0 - (threshold / freq).sqrt()).max(0.0)
}

/// Drops frequent words at random. `freqs[w]` is the relative frequency
/// of word `w` in the training corpus; a zero threshold keeps everything.
pub fn subsample(tokens: &[usize], threshold: f64, freqs: &[f64], rng: &mut Rng) -> Vec<usize> {
    if threshold <= 0.0 {
        return tokens.to_vec();
    }
    tokens
        .iter()
        .copied()
        .filter(|&w| {
            let p = discard_probability(threshold, freqs[w]);
            p == 0.0 || rng.random::<f64>() >= p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    const SENTENCE: [&str; 5] = ["el", "gato", "negro", "es", "bellissimo"];

    fn render(spans: &[Vec<usize>]) -> Vec<String> {
        spans
            .iter()
            .map(|s| s.iter().map(|&i| SENTENCE[i]).collect::<Vec<_>>().join(" "))
            .collect()
    }

    #[test]
    fn three_token_spans() {
        assert_eq!(
            render(&contiguous_spans(5, 3)),
            ["el gato negro", "gato negro es", "negro es bellissimo"]
        );
    }

    #[test]
    fn one_skip_three_grams() {
        assert_eq!(
            render(&skip_gram_spans(5, 3, 1)),
            [
                "el gato negro",
                "el gato es",
                "gato negro es",
                "gato negro bellissimo",
                "negro es bellissimo"
            ]
        );
    }

    #[test]
    fn pvdm_windows() {
        let mut rng = seeded_rng(0);
        let w = build_windows(5, 2, Mode::Pvdm, &mut rng);
        assert_eq!(w.len(), 5);
        assert_eq!(w[0].context, vec![1, 2]);
        assert_eq!(w[2].context, vec![0, 1, 3, 4]);
        assert_eq!(w[4].context, vec![2, 3]);

        let single = build_windows(1, 5, Mode::Pvdm, &mut rng);
        assert_eq!(single, vec![TrainingInstance { context: vec![], target: 0 }]);
    }

    #[test]
    fn pvdbow_windows() {
        let mut rng = seeded_rng(3);
        let w = build_windows(10, 2, Mode::Pvdbow, &mut rng);
        assert_eq!(w.len(), 6);
        for inst in &w {
            assert_eq!(inst.context.len(), 5);
            assert!(inst.context.contains(&inst.target));
        }
        let short = build_windows(3, 5, Mode::Pvdbow, &mut rng);
        assert_eq!(short.len(), 1);
        assert_eq!(short[0].context, vec![0, 1, 2]);
        assert!(build_windows(0, 2, Mode::Pvdbow, &mut rng).is_empty());
    }

    #[test]
    fn discard_rule() {
        assert_eq!(discard_probability(1e-3, 1e-3), 0.0);
        assert_eq!(discard_probability(1e-3, 1e-4), 0.0);
        assert!((discard_probability(1e-3, 4e-3) - 0.5).abs() < 1e-15);
        assert_eq!(discard_probability(1.0, 0.9), 0.0);
    }

    #[test]
    fn subsample_keeps_rare_words() {
        let mut rng = seeded_rng(1);
        let tokens = vec![0, 1, 0, 1, 0];
        assert_eq!(subsample(&tokens, 1.0, &[0.6, 0.4], &mut rng), tokens);
        assert_eq!(subsample(&tokens, 0.0, &[0.6, 0.4], &mut rng), tokens);
    }

    #[test]
    fn subsample_rate_matches_rule() {
        let mut rng = seeded_rng(2);
        let tokens = vec![0; 100_000];
        let kept = subsample(&tokens, 0.25, &[1.0], &mut rng).len() as f64 / 1e5;
        // keep probability √(0.25 / 1) = 0.5
        assert!((kept - 0.5).abs() < 0.01, "{kept}");
    }
}
