//! Exact counts `N(t, k) = #{x : x is t-free and f(x) is a nonzero k-th power}`,
//! witness search, the normalized enumeration of quadratics and the
//! exhaustive scan for fields where some quadratic has no witness.

use std::collections::BTreeMap;
use std::sync::mpsc;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::charsum::DlogTable;
use crate::ffield::{FieldElement, FieldError, FieldSpec, QuadraticPoly};

/// Default upper limit on `q` for [`scan_exceptional`].
pub const DEFAULT_SCAN_CAP: u64 = 1 << 20;

/// Default number of witnessless polynomials kept per field.
pub const DEFAULT_SAMPLE_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("k must be at least 2, got {0}")]
    SmallK(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("k must be at least 2, got {0}")]
    SmallK(u64),
    #[error("invalid range [{lo}, {hi}]: need 3 <= from <= to")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("range upper end {hi} exceeds the scan cap q <= {cap} (override with PRIMPOW_QCAP)")]
    RangeTooLarge { hi: u64, cap: u64 },
    #[error("could not start worker pool: {0}")]
    Workers(String),
}

/// A validated `(F_q, t, k, f)` with `t | q - 1`, `k | q - 1` and `k >= 2`.
#[derive(Debug, Clone, Copy)]
pub struct CountQuery<'a> {
    field: &'a FieldSpec,
    t: u64,
    k: u64,
    f: QuadraticPoly,
}

impl<'a> CountQuery<'a> {
    pub fn new(field: &'a FieldSpec, t: u64, k: u64, f: QuadraticPoly) -> Result<Self, CountError> {
        if k < 2 {
            return Err(CountError::SmallK(k));
        }
        field.check_divisor(t)?;
        field.check_divisor(k)?;
        // Re-validate in case f was built over a different field.
        QuadraticPoly::new(field, f.a, f.b, f.c)?;
        Ok(CountQuery { field, t, k, f })
    }

    pub fn field(&self) -> &'a FieldSpec {
        self.field
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn poly(&self) -> &QuadraticPoly {
        &self.f
    }

    /// The same query with a different `t`.
    pub fn with_t(&self, t: u64) -> Result<Self, CountError> {
        Self::new(self.field, t, self.k, self.f)
    }
}

/// `N(t, k)` by enumerating `F_q` with the element predicates.
pub fn count_n(query: &CountQuery<'_>) -> u64 {
    let field = query.field;
    field
        .units()
        .filter(|&x| {
            field.is_t_free(x, query.t).expect("t validated")
                && field
                    .is_kth_power(query.f.eval(field, x), query.k)
                    .expect("k validated")
        })
        .count() as u64
}

/// Membership tables for one `(t, k)` pair, built from discrete logs:
/// `g0^j` is `t`-free iff `gcd(j, t) = 1` and a `k`-th power iff `k | j`.
/// Counting a polynomial is then one evaluation and two lookups per element.
#[derive(Debug, Clone)]
pub struct CountTables<'a> {
    field: &'a FieldSpec,
    t_free: Vec<bool>,
    kth: Vec<bool>,
}

impl<'a> CountTables<'a> {
    pub fn new(field: &'a FieldSpec, dlog: &DlogTable, t: u64, k: u64) -> Result<Self, CountError> {
        if k < 2 {
            return Err(CountError::SmallK(k));
        }
        field.check_divisor(t)?;
        field.check_divisor(k)?;
        let mut t_free = vec![false; field.order() as usize];
        let mut kth = vec![false; field.order() as usize];
        for j in 0..dlog.group_order() {
            let x = dlog.exp(j).index() as usize;
            t_free[x] = gcd(j, t) == 1;
            kth[x] = j % k == 0;
        }
        Ok(CountTables { field, t_free, kth })
    }

    /// `N(t, k)` for `f`.
    pub fn count(&self, f: &QuadraticPoly) -> u64 {
        self.field
            .units()
            .filter(|&x| {
                self.t_free[x.index() as usize]
                    && self.kth[f.eval(self.field, x).index() as usize]
            })
            .count() as u64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primitive elements in canonical order plus a `k`-th power table, shared by
/// every witness search in one field.
#[derive(Debug, Clone)]
pub struct WitnessSearch<'a> {
    field: &'a FieldSpec,
    k: u64,
    primitive: Vec<FieldElement>,
    kth: Vec<bool>,
}

impl<'a> WitnessSearch<'a> {
    pub fn new(field: &'a FieldSpec, k: u64) -> Result<Self, CountError> {
        if k < 2 {
            return Err(CountError::SmallK(k));
        }
        field.check_divisor(k)?;
        let dlog = DlogTable::new(field);
        Ok(Self::with_dlog(field, &dlog, k))
    }

    fn with_dlog(field: &'a FieldSpec, dlog: &DlogTable, k: u64) -> Self {
        let m = dlog.group_order();
        let mut kth = vec![false; field.order() as usize];
        let mut primitive = Vec::with_capacity(field.qm1_factors().euler_phi() as usize);
        for j in 0..m {
            let x = dlog.exp(j);
            kth[x.index() as usize] = j % k == 0;
            if gcd(j, m) == 1 {
                primitive.push(x);
            }
        }
        primitive.sort_unstable();
        WitnessSearch { field, k, primitive, kth }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Primitive elements, ascending.
    pub fn primitive_elements(&self) -> &[FieldElement] {
        &self.primitive
    }

    pub fn is_witness(&self, f: &QuadraticPoly, g: FieldElement) -> bool {
        self.kth[f.eval(self.field, g).index() as usize]
    }

    /// First primitive `g` with `f(g)` a nonzero `k`-th power.
    pub fn find(&self, f: &QuadraticPoly) -> Option<FieldElement> {
        self.primitive.iter().copied().find(|&g| self.is_witness(f, g))
    }

    /// Every witness, ascending.
    pub fn witnesses<'s>(&'s self, f: &'s QuadraticPoly) -> impl Iterator<Item = FieldElement> + 's {
        self.primitive.iter().copied().filter(move |&g| self.is_witness(f, g))
    }
}

/// First primitive `g` (canonical order) with `f(g)` a nonzero `k`-th power.
///
/// Fields above [`crate::charsum::DLOG_CAP`] are searched element by element
/// without tables.
pub fn find_witness(
    field: &FieldSpec,
    k: u64,
    f: &QuadraticPoly,
) -> Result<Option<FieldElement>, CountError> {
    if field.order() <= crate::charsum::DLOG_CAP {
        return Ok(WitnessSearch::new(field, k)?.find(f));
    }
    if k < 2 {
        return Err(CountError::SmallK(k));
    }
    field.check_divisor(k)?;
    Ok(first_witness_direct(field, k, f))
}

fn first_witness_direct(field: &FieldSpec, k: u64, f: &QuadraticPoly) -> Option<FieldElement> {
    field.units().find(|&g| {
        let v = f.eval(field, g);
        !v.is_zero() && field.is_kth_power(v, k).expect("k | q - 1") && field.is_primitive(g)
    })
}

/// `g0^0, ..., g0^(k-1)` for the canonical generator `g0`: one element from
/// each coset of the `k`-th powers.
pub fn coset_representatives(field: &FieldSpec, k: u64) -> Result<Vec<FieldElement>, FieldError> {
    field.check_divisor(k)?;
    let g0 = field.find_generator();
    let mut out = Vec::with_capacity(k as usize);
    let mut x = field.one();
    for _ in 0..k {
        out.push(x);
        x = field.mul(x, g0);
    }
    Ok(out)
}

/// Which leading coefficients an enumeration or scan visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Leading {
    /// One leading coefficient per coset of the `k`-th powers. Multiplying `f`
    /// by a nonzero `k`-th power does not change its witnesses.
    #[default]
    CosetRepresentatives,
    /// Every nonzero leading coefficient.
    AllUnits,
}

/// All `(a, b, c)` with `a` drawn from `leading`, `b, c` over `F_q` and nonzero
/// discriminant, ordered by `a`'s position in `leading`, then `b`, then `c`.
pub fn enumerate_with_leading<'a>(
    field: &'a FieldSpec,
    leading: Vec<FieldElement>,
) -> impl Iterator<Item = QuadraticPoly> + 'a {
    leading.into_iter().flat_map(move |a| {
        field.elements().flat_map(move |b| {
            field
                .elements()
                .filter_map(move |c| QuadraticPoly::new(field, a, b, c).ok())
        })
    })
}

/// Quadratics with leading coefficient among the coset representatives for `k`.
/// There are `k q (q - 1)` of them: for each `(a, b)` exactly one `c` makes the
/// discriminant vanish (in characteristic 2, every `c` when `b = 0`).
pub fn enumerate_quadratics(
    field: &FieldSpec,
    k: u64,
) -> Result<impl Iterator<Item = QuadraticPoly> + '_, FieldError> {
    Ok(enumerate_with_leading(field, coset_representatives(field, k)?))
}

/// Coefficients of a quadratic, each as a coefficient list low degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyCoeffs {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

impl PolyCoeffs {
    pub fn new(field: &FieldSpec, f: &QuadraticPoly) -> Self {
        PolyCoeffs {
            a: field.coeffs(f.a),
            b: field.coeffs(f.b),
            c: field.coeffs(f.c),
        }
    }
}

/// Scan result for one field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub q: u64,
    pub p: u64,
    pub n: u32,
    pub field: String,
    pub exceptional: bool,
    pub polynomials: u64,
    pub witnessless_count: u64,
    pub witnessless_sample: Vec<PolyCoeffs>,
    pub millis: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub k: u64,
    pub q_lo: u64,
    pub q_hi: u64,
    /// One row per prime power `q` in range with `k | q - 1`, ascending.
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn exceptional(&self) -> Vec<u64> {
        self.rows.iter().filter(|r| r.exceptional).map(|r| r.q).collect()
    }

    pub fn fields_scanned(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub k: u64,
    pub q_lo: u64,
    pub q_hi: u64,
    /// Witnessless polynomials kept per field.
    pub sample_cap: usize,
    pub q_cap: u64,
    /// Worker threads; 0 means available parallelism.
    pub workers: usize,
    pub leading: Leading,
}

impl ScanConfig {
    pub fn new(k: u64, q_lo: u64, q_hi: u64) -> Self {
        ScanConfig {
            k,
            q_lo,
            q_hi,
            sample_cap: DEFAULT_SAMPLE_CAP,
            q_cap: DEFAULT_SCAN_CAP,
            workers: 0,
            leading: Leading::CosetRepresentatives,
        }
    }
}

/// Checks every admissible quadratic over `field` for a witness.
pub fn scan_field(field: &FieldSpec, k: u64, sample_cap: usize, leading: Leading) -> Result<ScanRow, CountError> {
    let started = Instant::now();
    let search = WitnessSearch::new(field, k)?;
    let leads = match leading {
        Leading::CosetRepresentatives => coset_representatives(field, k)?,
        Leading::AllUnits => field.units().collect(),
    };
    let mut polynomials = 0u64;
    let mut witnessless_count = 0u64;
    let mut sample = Vec::new();
    for f in enumerate_with_leading(field, leads) {
        polynomials += 1;
        if search.find(&f).is_none() {
            witnessless_count += 1;
            if sample.len() < sample_cap {
                sample.push(PolyCoeffs::new(field, &f));
            }
        }
    }
    Ok(ScanRow {
        q: field.order(),
        p: field.characteristic(),
        n: field.degree(),
        field: field.to_string(),
        exceptional: witnessless_count > 0,
        polynomials,
        witnessless_count,
        witnessless_sample: sample,
        millis: started.elapsed().as_millis() as u64,
    })
}

/// Prime powers `q` in `[lo, hi]` with `k | q - 1`.
pub fn scan_targets(k: u64, lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi)
        .filter(|&q| (q - 1) % k == 0 && arith::prime_power(q).is_some())
        .collect()
}

/// Runs [`scan_field`] over every target in range, calling `on_row` for each
/// result in ascending `q` as soon as it and all smaller targets are done.
pub fn scan_exceptional_streaming(
    config: &ScanConfig,
    mut on_row: impl FnMut(&ScanRow),
) -> Result<ScanReport, ScanError> {
    use rayon::prelude::*;

    if config.k < 2 {
        return Err(ScanError::SmallK(config.k));
    }
    if config.q_lo < 3 || config.q_lo > config.q_hi {
        return Err(ScanError::InvalidRange {
            lo: config.q_lo,
            hi: config.q_hi,
        });
    }
    if config.q_hi > config.q_cap {
        return Err(ScanError::RangeTooLarge {
            hi: config.q_hi,
            cap: config.q_cap,
        });
    }
    let targets = scan_targets(config.k, config.q_lo, config.q_hi);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| ScanError::Workers(e.to_string()))?;

    let (tx, rx) = mpsc::channel::<(usize, ScanRow)>();
    let mut rows = Vec::with_capacity(targets.len());
    std::thread::scope(|scope| {
        let targets = &targets;
        scope.spawn(move || {
            pool.install(|| {
                targets.par_iter().enumerate().for_each_with(tx, |tx, (i, &q)| {
                    let field = FieldSpec::from_order(q).expect("target is a prime power");
                    let row = scan_field(&field, config.k, config.sample_cap, config.leading)
                        .expect("k divides q - 1 for every target");
                    // The receiver outlives the workers.
                    let _ = tx.send((i, row));
                });
            });
        });
        let mut pending = BTreeMap::new();
        for (i, row) in rx {
            pending.insert(i, row);
            while let Some(row) = pending.remove(&rows.len()) {
                on_row(&row);
                rows.push(row);
            }
        }
    });

    Ok(ScanReport {
        k: config.k,
        q_lo: config.q_lo,
        q_hi: config.q_hi,
        rows,
    })
}

/// Finds every `q` in range for which some admissible quadratic has no
/// primitive `g` with `f(g)` a nonzero `k`-th power.
pub fn scan_exceptional(config: &ScanConfig) -> Result<ScanReport, ScanError> {
    scan_exceptional_streaming(config, |_| {})
}
