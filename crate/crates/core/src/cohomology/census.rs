use crate::error::{Error, Result};
use crate::hat;
use crate::lazard::{exp_group, group_structure_pipeline};
use crate::lie::{enumerate_sublattices, fingerprint, quotient, Sublattice};
use num_bigint::BigUint;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Where census instances come from.
pub enum CensusSource {
    /// All ideals `I` of `L_c(X)` with `p^k L_c(X)` inside `I`, enumerated
    /// exhaustively in the quotient `L_c(X)/p^k`.
    IdealsAboveDepth(u32),
    /// Explicit named generator lists (Hall coordinates of `L_c(X)`).
    Explicit(Vec<(String, Vec<Vec<BigUint>>)>),
}

/// One instance's invariant tuple. Bucketing by this tuple is an upper
/// bound witness for "finitely many possibilities": the tuple is an
/// isomorphism invariant of the data the structure pipeline extracts, not
/// a full isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CensusRecord {
    pub instance: String,
    /// `F_p`-rank of `Omega_1` of the powerful p-central quotient.
    pub e: u64,
    /// `log_p |N|` from the structure pipeline.
    pub n_log: u64,
    /// `log_p` of the embedding index.
    pub index_log: u64,
    /// Graded order profile of the instance group.
    pub profile: Vec<u64>,
}

impl CensusRecord {
    pub fn bucket_key(&self) -> String {
        format!(
            "e={};n={};idx={};profile={:?}",
            self.e, self.n_log, self.index_log, self.profile
        )
    }

    /// Coarsened key (profile dropped): bucket counts are monotone
    /// non-increasing under coarsening.
    pub fn coarse_key(&self) -> String {
        format!("e={};n={};idx={}", self.e, self.n_log, self.index_log)
    }
}

pub struct CensusReport {
    pub p: u64,
    pub d: u32,
    pub c: u32,
    pub instances: usize,
    pub records: Vec<CensusRecord>,
    pub failures: Vec<(String, String)>,
    pub buckets: BTreeMap<String, usize>,
    /// Artifact-derived a-priori ceiling on the number of distinct tuples,
    /// computed from the pipeline's bound quantities (labeled as such in
    /// reports; the source theorems give no explicit closed form).
    pub ceiling: u128,
    pub within_ceiling: bool,
}

impl CensusReport {
    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }
}

/// Run the census: for each instance build `G = exp(L_c(X)/I)`, run the
/// structure pipeline, extract the invariant tuple, and bucket. Failures
/// are quarantined per instance, not fatal.
pub fn census(
    p: u64,
    d: u32,
    c: u32,
    source: &CensusSource,
    workers: usize,
) -> Result<CensusReport> {
    if (c as u64) >= p {
        return Err(Error::ClassTooHigh {
            class: c as usize,
            p,
        });
    }
    let basis = hat::shared_hall_basis(d, c)?;
    let r = basis.len();

    let (instances, depth): (Vec<(String, Vec<Vec<BigUint>>)>, u32) = match source {
        CensusSource::Explicit(list) => (list.clone(), 0),
        CensusSource::IdealsAboveDepth(k) => {
            let k = (*k).max(1);
            let free = hat::free_nilpotent_algebra(&basis, p, k + c)?;
            let pk_full = Sublattice::full(&free).p_scaled(&free, k);
            let (quot, map) = quotient(&free, &pk_full)?;
            let mut out = Vec::new();
            let lattices = enumerate_sublattices(&quot, (k as u64) * r as u64)?;
            for lat in lattices {
                if !lat.is_ideal(&quot) {
                    continue;
                }
                let mut gens: Vec<Vec<BigUint>> =
                    lat.rows().iter().map(|row| map.lift(row)).collect();
                for i in 0..r {
                    let mut unit = vec![BigUint::from(0u32); r];
                    unit[i] = BigUint::from(p).pow(k);
                    gens.push(unit);
                }
                out.push(gens);
            }
            // deterministic instance order and names
            out.sort();
            let named = out
                .into_iter()
                .enumerate()
                .map(|(i, g)| (format!("ideal-{i:03}"), g))
                .collect();
            (named, k)
        }
    };

    let run_instance = |(name, gens): &(String, Vec<Vec<BigUint>>)| -> std::result::Result<CensusRecord, (String, String)> {
        let inner = || -> Result<CensusRecord> {
            let free =
                hat::free_nilpotent_algebra(&basis, p, hat::choose_exponent(d, c, p, gens)?)?;
            let ideal = Sublattice::span(&free, gens);
            let (l_alg, _) = quotient(&free, &ideal)?;
            let group = exp_group(l_alg.clone())?;
            let report = group_structure_pipeline(&group, 32, 0xC0FFEE)?;
            if !report.all_true() {
                return Err(Error::Internal("pipeline verdicts not all true".into()));
            }
            let e = report.lie.hat.algebra.omega_1().log_size(&report.lie.hat.algebra);
            let profile = fingerprint(&l_alg)?.graded_profile;
            Ok(CensusRecord {
                instance: name.clone(),
                e,
                n_log: report.n_log,
                index_log: report.lie.image_index_log,
                profile,
            })
        };
        inner().map_err(|err| (name.clone(), err.to_string()))
    };

    let results: Vec<std::result::Result<CensusRecord, (String, String)>> = if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        pool.install(|| instances.par_iter().map(run_instance).collect())
    } else {
        instances.iter().map(run_instance).collect()
    };

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(f) => failures.push(f),
        }
    }
    records.sort();

    let mut buckets: BTreeMap<String, usize> = BTreeMap::new();
    for rec in &records {
        *buckets.entry(rec.bucket_key()).or_insert(0) += 1;
    }

    // a-priori tuple ceiling from the pipeline's bound quantities
    let r128 = r as u128;
    let max_log: u128 = if depth > 0 {
        depth as u128 * r128
    } else {
        records
            .iter()
            .map(|rec| rec.profile.iter().sum::<u64>() as u128)
            .max()
            .unwrap_or(0)
    };
    let cb = (c as u128 - 1) * r128 + 1;
    let ceiling = (r128 + 1)
        .saturating_mul(cb)
        .saturating_mul(cb)
        .saturating_mul((max_log + 1).saturating_pow(c));
    let within_ceiling = (buckets.len() as u128) <= ceiling;

    Ok(CensusReport {
        p,
        d,
        c,
        instances: instances.len(),
        records,
        failures,
        buckets,
        ceiling,
        within_ceiling,
    })
}
