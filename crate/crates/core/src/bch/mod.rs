//! The truncated Baker-Campbell-Hausdorff series with exact rational Hall
//! coordinates, p-integrality checks, and the group law it induces on
//! nilpotent algebras of class below `p`.
//!
//! The primary construction route is the associative-log oracle: expand
//! `exp(a) exp(b)` in the truncated free associative algebra, take the
//! truncated logarithm, and project the primitive element onto Hall
//! coordinates by an exact linear solve. The Dynkin recomputation in
//! [`dynkin`] reaches the same coefficients through the Hall rewriting
//! engine instead, which is what makes the cross-check meaningful.

pub mod assoc;
pub mod dynkin;
mod group;

pub use group::{group_inverse, group_multiply, group_power};

use crate::error::{Error, Result};
use crate::hall::{generate_hall_basis, HallBasis};
use crate::padic::{rational_valuation, PRational};
use num_traits::One;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Hard cap on the symbolic series class.
pub const MAX_BCH_CLASS: u32 = 12;

/// The BCH series `log(exp(a) exp(b))` truncated at a class, as exact
/// rational coordinates on the two-generator Hall basis.
pub struct BchSeries {
    class: u32,
    basis: Arc<HallBasis>,
    terms: Vec<(usize, PRational)>,
}

impl BchSeries {
    pub fn class(&self) -> u32 {
        self.class
    }

    pub fn basis(&self) -> &Arc<HallBasis> {
        &self.basis
    }

    /// Terms sorted by basis index; weight-1 coefficients are exactly 1.
    pub fn terms(&self) -> &[(usize, PRational)] {
        &self.terms
    }

    /// Render as "coefficient . bracket-string" lines in the letters a, b.
    pub fn render(&self) -> String {
        let names = vec!["a".to_string(), "b".to_string()];
        let mut out = String::new();
        for (idx, coeff) in &self.terms {
            out.push_str(&format!(
                "{} \u{00b7} {}\n",
                coeff,
                self.basis.display_with(*idx, &names)
            ));
        }
        out
    }
}

fn series_cache() -> &'static Mutex<HashMap<u32, Arc<BchSeries>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<BchSeries>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The truncated BCH series for a given class, computed once and cached.
pub fn bch_series(c: u32) -> Result<Arc<BchSeries>> {
    if c == 0 {
        return Err(Error::Schema("BCH class must be at least 1".into()));
    }
    if c > MAX_BCH_CLASS {
        return Err(Error::SizeLimitExceeded {
            what: "bch series class",
            needed: c as u64,
            cap: MAX_BCH_CLASS as u64,
        });
    }
    if let Some(hit) = series_cache().lock().expect("cache poisoned").get(&c) {
        return Ok(hit.clone());
    }
    let series = compute_series(c)?;
    let arc = Arc::new(series);
    series_cache()
        .lock()
        .expect("cache poisoned")
        .insert(c, arc.clone());
    Ok(arc)
}

fn compute_series(c: u32) -> Result<BchSeries> {
    let basis = Arc::new(generate_hall_basis(2, c)?);
    let z = assoc::log_exp_a_exp_b(c as usize);
    let mut terms: Vec<(usize, PRational)> = Vec::new();
    for w in 1..=c {
        terms.extend(assoc::project_graded_to_hall(&z, &basis, w)?);
    }
    terms.sort_by_key(|(i, _)| *i);
    // degree-1 normalization: coefficients of a and b are exactly 1
    for g in 0..2 {
        match terms.iter().find(|(i, _)| *i == g) {
            Some((_, coeff)) if coeff.is_one() => {}
            _ => {
                return Err(Error::Internal(
                    "BCH series degree-1 normalization failed".into(),
                ))
            }
        }
    }
    Ok(BchSeries { class: c, basis, terms })
}

/// True iff every denominator in the series is coprime to `p`. Must hold
/// whenever `class < p`.
pub fn verify_p_integrality(series: &BchSeries, p: u64) -> bool {
    series.terms.iter().all(|(_, coeff)| {
        rational_valuation(coeff, p).map_or(true, |v| v >= 0)
    })
}
