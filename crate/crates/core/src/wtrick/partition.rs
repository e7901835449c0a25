//! Grouping a correlation sum by the `W(T)`-smooth parts of the form values.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linsys::{check_form_ranges, ConvexBody, LinearSystem, Scale};
use crate::multfunc::SieveTable;
use crate::sum::KahanSum;

use super::context::WContext;

pub type SmoothTuple = SmallVec<[u64; 4]>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PartitionGroup {
    pub sum: f64,
    pub count: u64,
    /// Some `w_i` exceeds `(log T)^{B2}`.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionReport {
    pub groups: BTreeMap<SmoothTuple, PartitionGroup>,
    /// Sum of all group sums (in key order).
    pub total: f64,
    pub lattice_count: u64,
    /// Mass of the groups flagged `truncated`.
    pub truncated_mass: f64,
    pub truncated_count: u64,
    pub smooth_bound: f64,
}

/// The part of `n` made of the given primes.
#[inline]
pub fn smooth_part_by(mut n: u64, primes: &[u64]) -> u64 {
    let mut part = 1;
    for &p in primes {
        while n % p == 0 {
            n /= p;
            part *= p;
        }
    }
    part
}

type SlabGroups = HashMap<SmoothTuple, (KahanSum, u64)>;

/// For each lattice point the tuple `(w_1, ..., w_r)` with `w_i || phi_i(n)`
/// (`w_i` the `W(T)`-smooth part), summing `prod f_i(phi_i(n))` per tuple.
pub fn exact_smooth_partition(
    tbls: &[&SieveTable],
    sys: &LinearSystem,
    body: &ConvexBody,
    t: u64,
    wctx: &WContext,
) -> Result<PartitionReport> {
    let r = sys.len();
    if tbls.len() != r {
        return Err(Error::InvalidArgument(format!("{r} forms but {} tables", tbls.len())));
    }
    let scale = Scale::integer(t)?;
    let highs: Vec<u64> = tbls.iter().map(|t| t.len()).collect();
    check_form_ranges(sys, body, scale, &highs)?;
    let primes = wctx.small_primes();
    let smooth_bound = wctx.smooth_bound();
    let Some((x0_lo, x0_hi)) = body.first_coordinate_range(scale) else {
        return Ok(PartitionReport {
            groups: BTreeMap::new(),
            total: 0.0,
            lattice_count: 0,
            truncated_mass: 0.0,
            truncated_count: 0,
            smooth_bound,
        });
    };
    const SLABS: i64 = 256;
    let width = ((x0_hi - x0_lo + 1) + SLABS - 1) / SLABS;
    let slabs: Vec<(i64, i64)> = (0..SLABS)
        .map(|k| (x0_lo + k * width, (x0_lo + (k + 1) * width - 1).min(x0_hi)))
        .filter(|(a, b)| a <= b)
        .collect();
    let s = sys.dim();
    let per_slab: Vec<Result<SlabGroups>> = slabs
        .into_par_iter()
        .map(|(a, b)| {
            let mut groups: SlabGroups = HashMap::new();
            let mut point = vec![0i64; s];
            let mut key = SmoothTuple::from_elem(0, r);
            body.for_each_line(scale, a, b, |prefix, lo, hi| -> Result<()> {
                point[..s - 1].copy_from_slice(prefix);
                for x in lo..=hi {
                    point[s - 1] = x;
                    let mut prod = 1.0;
                    for (i, f) in sys.forms().iter().enumerate() {
                        let v = f.eval(&point)?;
                        // Range was checked over the whole body.
                        let v = v as u64;
                        key[i] = smooth_part_by(v, &primes);
                        prod *= tbls[i].get(v);
                    }
                    let e = groups.entry(key.clone()).or_default();
                    e.0.add(prod);
                    e.1 += 1;
                }
                Ok(())
            })?;
            Ok(groups)
        })
        .collect();
    let mut merged: BTreeMap<SmoothTuple, (KahanSum, u64)> = BTreeMap::new();
    for slab in per_slab {
        // Merge in slab order, keys sorted within a slab, so the result is
        // independent of scheduling.
        let mut entries: Vec<_> = slab?.into_iter().collect();
        entries.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        for (k, (sum, count)) in entries {
            let e = merged.entry(k).or_default();
            e.0.merge(&sum);
            e.1 += count;
        }
    }
    let mut total = KahanSum::new();
    let mut truncated_mass = KahanSum::new();
    let mut truncated_count = 0;
    let mut lattice_count = 0;
    let groups = merged
        .into_iter()
        .map(|(k, (sum, count))| {
            let truncated = k.iter().any(|&w| w as f64 > smooth_bound);
            total.add(sum.value());
            lattice_count += count;
            if truncated {
                truncated_mass.add(sum.value());
                truncated_count += count;
            }
            (
                k,
                PartitionGroup {
                    sum: sum.value(),
                    count,
                    truncated,
                },
            )
        })
        .collect();
    Ok(PartitionReport {
        groups,
        total: total.value(),
        lattice_count,
        truncated_mass: truncated_mass.value(),
        truncated_count,
        smooth_bound,
    })
}
