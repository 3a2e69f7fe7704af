//! Zipf-like content popularity and ideal transparent-cache hit ratio.
//!
//! The cache holds exactly the `K` most popular of `N` items, so its hit
//! ratio is `H(K) / H(N)` with `H(k) = sum_{j=1}^{k} j^-alpha`. Sums are
//! evaluated term by term (compensated), never by integral approximation.

use crate::error::{Error, Result};
use crate::scalar::{Accumulator, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfCatalog<T> {
    n_items: usize,
    alpha: T,
}

impl<T: Scalar> ZipfCatalog<T> {
    pub fn new(n_items: usize, alpha: T) -> Result<Self> {
        if n_items == 0 {
            return Err(Error::invalid("n_items", "catalog must hold at least one item"));
        }
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(Error::invalid("alpha", format!("{alpha} must be > 0")));
        }
        Ok(Self { n_items, alpha })
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Partial harmonic sums `H(1), H(2), ..., H(N)` in rank order.
    fn partial_sums(&self) -> impl Iterator<Item = T> + '_ {
        let mut acc = Accumulator::new();
        (1..=self.n_items).map(move |j| {
            acc.add(T::from_count(j).powf(-self.alpha));
            acc.value()
        })
    }

    /// `H(N) = sum_{j=1}^{N} j^-alpha`.
    pub fn normalization(&self) -> T {
        self.partial_sums().last().expect("n_items >= 1")
    }
}

/// Top-`K` storage policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CachePolicy {
    stored_items: usize,
}

impl CachePolicy {
    pub fn new<T: Scalar>(stored_items: usize, catalog: &ZipfCatalog<T>) -> Result<Self> {
        if stored_items > catalog.n_items {
            return Err(Error::invalid(
                "stored_items",
                format!("{stored_items} exceeds catalog size {}", catalog.n_items),
            ));
        }
        Ok(Self { stored_items })
    }

    /// Stores `round(fraction * N)` items.
    pub fn from_fraction<T: Scalar>(fraction: T, catalog: &ZipfCatalog<T>) -> Result<Self> {
        if !(fraction >= T::zero() && fraction <= T::one()) {
            return Err(Error::invalid(
                "stored_fraction",
                format!("{fraction} is not in [0, 1]"),
            ));
        }
        let k = (fraction * T::from_count(catalog.n_items))
            .round()
            .to_usize()
            .expect("bounded by n_items");
        Self::new(k, catalog)
    }

    pub fn stored_items(&self) -> usize {
        self.stored_items
    }
}

/// Request probability of the item at `rank` (1 = most popular).
pub fn popularity<T: Scalar>(catalog: &ZipfCatalog<T>, rank: usize) -> Result<T> {
    if rank == 0 || rank > catalog.n_items {
        return Err(Error::RankOutOfRange {
            rank,
            n_items: catalog.n_items,
        });
    }
    Ok(T::from_count(rank).powf(-catalog.alpha) / catalog.normalization())
}

/// Probability that a request is served from the cache.
pub fn hit_ratio<T: Scalar>(catalog: &ZipfCatalog<T>, policy: &CachePolicy) -> T {
    let k = policy.stored_items;
    if k == 0 {
        return T::zero();
    }
    let mut stored = T::zero();
    let mut total = T::zero();
    for (j, h) in catalog.partial_sums().enumerate() {
        if j + 1 == k {
            stored = h;
        }
        total = h;
    }
    stored / total
}

/// Prefix sums `H(0..=N)` of one catalog, for repeated hit-ratio queries.
#[derive(Debug, Clone)]
pub struct HarmonicTable<T> {
    catalog: ZipfCatalog<T>,
    prefix: Vec<T>,
}

impl<T: Scalar> HarmonicTable<T> {
    pub fn new(catalog: ZipfCatalog<T>) -> Self {
        let mut prefix = Vec::with_capacity(catalog.n_items + 1);
        prefix.push(T::zero());
        prefix.extend(catalog.partial_sums());
        Self { catalog, prefix }
    }

    pub fn catalog(&self) -> &ZipfCatalog<T> {
        &self.catalog
    }

    /// Request probability of `rank`, using the cached normalization.
    pub fn popularity(&self, rank: usize) -> Result<T> {
        let n = self.catalog.n_items;
        if rank == 0 || rank > n {
            return Err(Error::RankOutOfRange { rank, n_items: n });
        }
        Ok(T::from_count(rank).powf(-self.catalog.alpha) / self.prefix[n])
    }

    /// Same value as [`hit_ratio`] for a cache holding `k` items.
    pub fn hit_ratio(&self, k: usize) -> T {
        let k = k.min(self.catalog.n_items);
        if k == 0 {
            return T::zero();
        }
        self.prefix[k] / self.prefix[self.catalog.n_items]
    }

    /// Smallest `K` with `hit_ratio(K) >= target`.
    pub fn min_items_for(&self, target: T) -> Result<usize> {
        if !(target >= T::zero() && target <= T::one()) {
            return Err(Error::invalid("target_hr", format!("{target} is not in [0, 1]")));
        }
        if target == T::zero() {
            return Ok(0);
        }
        let n = self.catalog.n_items;
        // hit_ratio is non-decreasing in k: find the first k in 1..=n at target.
        let (mut lo, mut hi) = (1, n);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.hit_ratio(mid) < target {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

/// Smallest stored fraction `K / N` whose hit ratio reaches `target_hr`.
pub fn min_fraction_for_hit_ratio<T: Scalar>(catalog: &ZipfCatalog<T>, target_hr: T) -> Result<T> {
    let k = HarmonicTable::new(*catalog).min_items_for(target_hr)?;
    Ok(T::from_count(k) / T::from_count(catalog.n_items))
}
