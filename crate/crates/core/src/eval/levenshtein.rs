//! Edit distance and normalized string similarity.

/// Minimum number of insertions, deletions, or substitutions converting
/// `a` into `b`, all at unit cost.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Normalized Levenshtein distance in [0, 1]: the edit distance divided by
/// the longer length; 0 when both strings are empty.
pub fn normalized_levenshtein(a: &str, b: &str) -> f64 {
    let la = a.chars().count();
    let lb = b.chars().count();
    let max = la.max(lb);
    if max == 0 {
        return 0.0;
    }
    levenshtein(a, b) as f64 / max as f64
}

/// One minus the average normalized Levenshtein distance over the corpus:
/// a similarity in [0, 1] that is 1 exactly when every pair matches.
pub fn inverse_avg_nld(pairs: &[(String, String)]) -> Result<f64, EmptyCorpus> {
    if pairs.is_empty() {
        return Err(EmptyCorpus);
    }
    let total: f64 = pairs
        .iter()
        .map(|(a, b)| normalized_levenshtein(a, b))
        .sum();
    Ok(1.0 - total / pairs.len() as f64)
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
#[error("cannot average over an empty corpus")]
pub struct EmptyCorpus;
