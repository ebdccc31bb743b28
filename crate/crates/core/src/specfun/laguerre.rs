use alloc::vec::Vec;

use crate::{Error, Result};

pub const MAX_NODES: usize = 64;

/// Gauss-Laguerre rule for the weight e^{−t} on (0, ∞): `n` pairs
/// (node, weight) in increasing node order.
pub fn gauss_laguerre(n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 || n > MAX_NODES {
        return Err(Error::InvalidParameter {
            what: "gauss_laguerre order",
            value: n as f64,
        });
    }
    let nf = n as f64;
    let mut out = Vec::with_capacity(n);
    let mut z = 0.0;
    let mut prev = [0.0f64; 2];
    for i in 0..n {
        // initial guesses as in the classic Stroud-Secrest scheme
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - prev[1])
            }
        };
        let mut converged = false;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let fj = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * fj + 1.0 - z) * p2 - fj * p3) / (fj + 1.0);
            }
            let pp = (nf * p1 - nf * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if libm::fabs(z - z1) <= 3e-14 * libm::fabs(z) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "gauss_laguerre root",
            });
        }
        let mut p1 = 1.0;
        let mut p2 = 0.0;
        for j in 0..n {
            let fj = j as f64;
            let p3 = p2;
            p2 = p1;
            p1 = ((2.0 * fj + 1.0 - z) * p2 - fj * p3) / (fj + 1.0);
        }
        // w = 1/(z L_n'(z)²) = z/(n² L_{n−1}(z)²) at a root of L_n
        let w = z / (nf * nf * p2 * p2);
        prev[1] = prev[0];
        prev[0] = z;
        out.push((z, w));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node() {
        let r = gauss_laguerre(1).unwrap();
        assert!((r[0].0 - 1.0).abs() < 1e-15 && (r[0].1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_nodes_closed_form() {
        let r = gauss_laguerre(2).unwrap();
        let s = 2f64.sqrt();
        assert!((r[0].0 - (2.0 - s)).abs() < 1e-14);
        assert!((r[1].0 - (2.0 + s)).abs() < 1e-14);
        assert!((r[0].1 - (2.0 + s) / 4.0).abs() < 1e-14);
        assert!((r[1].1 - (2.0 - s) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn moments_for_every_order() {
        for n in 1..=MAX_NODES {
            let r = gauss_laguerre(n).unwrap();
            assert_eq!(r.len(), n);
            let m0: f64 = r.iter().map(|p| p.1).sum();
            let m1: f64 = r.iter().map(|p| p.0 * p.1).sum();
            assert!((m0 - 1.0).abs() < 1e-12, "n={n} m0={m0}");
            assert!((m1 - 1.0).abs() < 1e-12, "n={n} m1={m1}");
            assert!(r.iter().all(|p| p.0 > 0.0 && p.1 >= 0.0));
            assert!(
                r.windows(2).all(|w| w[0].0 < w[1].0),
                "n={n} nodes not increasing"
            );
        }
    }

    #[test]
    fn polynomial_exactness() {
        // ∫ t^k e^{−t} = k!, exact for k ≤ 2n − 1
        for n in [3usize, 6, 10] {
            let r = gauss_laguerre(n).unwrap();
            let mut fact = 1.0f64;
            for k in 0..(2 * n) {
                if k > 0 {
                    fact *= k as f64;
                }
                let q: f64 = r.iter().map(|&(t, w)| w * t.powi(k as i32)).sum();
                assert!(((q - fact) / fact).abs() < 1e-11, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn order_limits() {
        assert!(gauss_laguerre(0).is_err());
        assert!(gauss_laguerre(65).is_err());
    }
}
