use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Certificate, IntegralResult};
use crate::error::{Error, Result};
use crate::function::LatticeFunction;
use crate::lattice::{LatticeVector, Space};
use crate::scalar::{dyadic, Scalar};

/// Deepest dyadic level accepted by the adaptive integrator.
pub const MAX_DEPTH: u32 = 24;

fn midpoint_sum<S: Scalar>(f: &LatticeFunction<S>, level: u32) -> Result<LatticeVector<S>> {
    let h: S = dyadic(level);
    let half = h.clone() / S::from_i64(2);
    let mut acc = LatticeVector::zeros(f.dim());
    for i in 0..(1u64 << level) {
        acc.add_assign(&f.evaluate(&(S::from_u64(i) * h.clone() + half.clone()))?)?;
    }
    Ok(acc.scale(&h))
}

/// Each level-`level` cell split at a random interior grid point, tagged at
/// the midpoints of the two halves.
fn randomized_sum<S: Scalar>(f: &LatticeFunction<S>, level: u32, rng: &mut ChaCha8Rng) -> Result<LatticeVector<S>> {
    let h: S = dyadic(level);
    let two = S::from_i64(2);
    let mut acc = LatticeVector::zeros(f.dim());
    for i in 0..(1u64 << level) {
        let a = S::from_u64(i) * h.clone();
        let cut = a.clone() + h.clone() * S::from_ratio(rng.random_range(1..256), 256);
        let b = a.clone() + h.clone();
        let left = cut.clone() - a.clone();
        let right = b.clone() - cut.clone();
        acc.add_scaled(&f.evaluate(&((a + cut.clone()) / two.clone()))?, &left)?;
        acc.add_scaled(&f.evaluate(&((cut + b) / two.clone()))?, &right)?;
    }
    Ok(acc)
}

/// Dyadic midpoint sums refined until two consecutive levels differ by at
/// most `eps` in the norm of `space` and a randomized partition at the finer
/// level agrees within `2 eps`.
pub fn integrate_norm_adaptive<S: Scalar>(
    f: &LatticeFunction<S>,
    space: &Space,
    eps: &S,
    max_depth: u32,
    seed: u64,
) -> Result<IntegralResult<S>> {
    if *eps <= S::zero() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if max_depth > MAX_DEPTH {
        return Err(Error::InvalidArgument(format!("max_depth must be at most {MAX_DEPTH}")));
    }
    Error::check_dim(space.dim, f.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prev = midpoint_sum(f, 0)?;
    let mut used = 1u64;
    for level in 1..=max_depth {
        let cur = midpoint_sum(f, level)?;
        used += 1;
        let gap = cur.sub(&prev)?;
        if space.norm(&gap)?.le_tol(eps) {
            let check = randomized_sum(f, level, &mut rng)?;
            used += 1;
            let two_eps = eps.clone() * S::from_i64(2);
            if space.norm(&check.sub(&cur)?)?.le_tol(&two_eps) {
                return Ok(IntegralResult {
                    value: cur,
                    certificate: Certificate::CauchyGap { gap: gap.modulus(), level },
                    partitions_used: used,
                    backend: S::BACKEND,
                    order_bound: None,
                });
            }
        }
        prev = cur;
    }
    Err(Error::NoConvergence { depth: max_depth })
}
