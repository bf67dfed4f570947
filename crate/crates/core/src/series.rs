//! Truncated real power series, used to extract residues at poles of
//! arbitrary order.

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Series(pub Vec<f64>);

impl Series {
    pub fn mul(&self, other: &Series) -> Series {
        let n = self.0.len().min(other.0.len());
        let mut out = vec![0.0; n];
        for (i, a) in self.0.iter().take(n).enumerate() {
            for (j, b) in other.0.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Series(out)
    }

    /// `exp` of a series with zero constant term, by `E' = Q' E`.
    pub fn exp_of(q: &[f64], order: usize) -> Series {
        let mut e = vec![0.0; order];
        if order == 0 {
            return Series(e);
        }
        e[0] = 1.0;
        for k in 1..order {
            let mut acc = 0.0;
            for j in 1..=k {
                let qj = q.get(j).copied().unwrap_or(0.0);
                acc += j as f64 * qj * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Series(e)
    }

    /// Taylor coefficients of `(d + ε)^{-m}` in `ε`.
    pub fn inverse_power(d: f64, m: usize, order: usize) -> Series {
        let mut out = vec![0.0; order];
        if order == 0 {
            return Series(out);
        }
        out[0] = d.powi(-(m as i32));
        for k in 1..order {
            // C(m+k-1, k) (-1/d)^k recursively.
            out[k] = out[k - 1] * -((m + k - 1) as f64) / (k as f64 * d);
        }
        Series(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_matches_exponential_taylor() {
        let e = Series::exp_of(&[0.0, 1.0], 8);
        let mut fact = 1.0;
        for (k, c) in e.0.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((c - 1.0 / fact).abs() < 1e-15);
        }
    }

    #[test]
    fn inverse_power_times_power_is_one() {
        let inv = Series::inverse_power(0.7, 3, 6);
        let cube = Series(vec![0.343, 3.0 * 0.49, 3.0 * 0.7, 1.0, 0.0, 0.0]);
        let one = inv.mul(&cube);
        assert!((one.0[0] - 1.0).abs() < 1e-14);
        for c in &one.0[1..] {
            assert!(c.abs() < 1e-12);
        }
    }
}
