use crate::error::{Error, Result};

/// Default log base: entropies are reported in bits.
pub const BITS: f64 = 2.0;

pub(crate) fn check_base(base: f64) -> Result<f64> {
    if base.is_finite() && base > 1.0 {
        Ok(base.ln())
    } else {
        Err(Error::InvalidLogBase(base))
    }
}

/// Shannon entropy of a probability vector, `0 log 0 = 0`.
pub fn shannon_entropy(probabilities: impl IntoIterator<Item = f64>, base: f64) -> Result<f64> {
    let ln_base = check_base(base)?;
    Ok(entropy_nats(probabilities) / ln_base)
}

pub(crate) fn entropy_nats(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    let h: f64 = probabilities
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    h.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_uniform_is_one_bit() {
        assert_eq!(shannon_entropy([0.5, 0.5], BITS).unwrap(), 1.0);
        assert_eq!(shannon_entropy([1.0, 0.0], BITS).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_base() {
        assert!(shannon_entropy([1.0], 1.0).is_err());
        assert!(shannon_entropy([1.0], f64::NAN).is_err());
    }
}
