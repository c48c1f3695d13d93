//! Deterministic local instances: primes 3, 5, 7; K = Q_p(sqrt d) for the
//! three nonsquare classes of d (and a split K); E one of Q_p x Q_p, the
//! unramified quadratic extension or Q_p(sqrt p); characters of level <= 2.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::local::{k_over_base, required_beta, CharacterData, SplittingData};
use crate::characters::{enumerate_norm_one, enumerate_splitting, KCharacter, NormOneCharacter, Rot};
use crate::error::{Error, Result};
use crate::etale::{BaseQuadratic, EtaleAlgebra, EtaleSetting, QuadraticExtension, TraceZeroDelta};
use crate::padic::arith::smallest_nonresidue;
use crate::padic::{make_local_field, qp, LocalField};

pub const DEFAULT_DIGITS: u32 = 8;
pub const MAX_LEVEL: u32 = 2;

#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub label: String,
    pub setting: EtaleSetting,
    pub data: CharacterData,
}

/// The three etale shapes of degree 2 over Q_p.
pub fn etale_shapes(p: i128, digits: u32) -> Result<Vec<(&'static str, Vec<LocalField>)>> {
    let q = qp(p, digits)?;
    Ok(vec![
        ("split", vec![q.clone(), q]),
        ("unramified", vec![make_local_field(p, 2, &[vec![-p], vec![1]], digits)?]),
        ("ramified", vec![make_local_field(p, 1, &[vec![-p], vec![0], vec![1]], 2 * digits)?]),
    ])
}

/// Values of d giving the three quadratic field extensions, then a split K.
pub fn k_choices(p: i128, with_split: bool) -> Vec<i128> {
    let u = smallest_nonresidue(p);
    let mut v = vec![u, p, u * p];
    if with_split {
        v.push(4);
    }
    v
}

/// A splitting character of minimal conductor, first in enumeration order.
pub fn minimal_mu(k: &QuadraticExtension) -> Result<KCharacter> {
    let split_pi = [Rot::from_integer(0)];
    for level in 1..=MAX_LEVEL + 1 {
        let mut all = enumerate_splitting(k, 1, level, &split_pi)?;
        if all.is_empty() {
            continue;
        }
        let cond = |c: &KCharacter| match c {
            KCharacter::Field(x) | KCharacter::Split(x) => x.conductor(),
        };
        let mut keyed = Vec::new();
        for c in all.drain(..) {
            keyed.push((cond(&c)?, c));
        }
        keyed.sort_by_key(|(a, _)| *a);
        return Ok(keyed.swap_remove(0).1);
    }
    Err(Error::InvalidInput("no splitting character of small level".into()))
}

fn split_pi_values() -> Vec<Rot> {
    vec![Rot::from_integer(0), Rot::new(1, 2), Rot::new(1, 3)]
}

/// Instances for one (p, d, shape): alternately a beta forced to be
/// compatible and a random one.
pub fn setting_instances(
    p: i128,
    d: i128,
    shape: &str,
    components: Vec<LocalField>,
    digits: u32,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CorpusInstance>> {
    let k = QuadraticExtension::new(p, d, digits)?;
    let base = qp(p, digits)?;
    let setting = EtaleSetting::new(EtaleAlgebra::local(&base, components)?, BaseQuadratic::Local(k.clone()))?;
    let mu = minimal_mu(&k)?;
    let splitting = SplittingData::from_mu(mu);
    let alpha_pools: Vec<Vec<NormOneCharacter>> = setting
        .quads
        .iter()
        .map(|q| enumerate_norm_one(q, MAX_LEVEL, &split_pi_values()))
        .collect::<Result<_>>()?;
    let beta_pool = enumerate_norm_one(&k_over_base(&k)?, MAX_LEVEL, &split_pi_values())?;
    let mut out = Vec::new();
    for i in 0..count {
        let alphas: Vec<NormOneCharacter> =
            alpha_pools.iter().map(|pool| pool.choose(rng).expect("nonempty pool").clone()).collect();
        let beta = if i % 2 == 0 {
            required_beta(&setting, &alphas, &splitting)?
        } else {
            beta_pool.choose(rng).expect("nonempty pool").clone()
        };
        let t = [1i128, 2, 3][rng.gen_range(0..3)];
        out.push(CorpusInstance {
            label: format!("p={p} d={d} E={shape} #{i}"),
            setting: setting.clone(),
            data: CharacterData::Local { alphas, beta, splitting: splitting.clone(), delta: TraceZeroDelta { t } },
        });
    }
    Ok(out)
}

/// The full corpus: `per_setting` instances for each prime, K and shape.
pub fn generate(primes: &[i128], with_split_k: bool, per_setting: usize, seed: u64) -> Result<Vec<CorpusInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for &p in primes {
        for d in k_choices(p, with_split_k) {
            for (shape, comps) in etale_shapes(p, DEFAULT_DIGITS)? {
                out.extend(setting_instances(p, d, shape, comps, DEFAULT_DIGITS, per_setting, &mut rng)?);
            }
        }
    }
    Ok(out)
}
