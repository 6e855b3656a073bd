//! Exact closed forms for the invariants of the level-`n` graphs.
//!
//! Everything is evaluated over arbitrary-precision integers and exact
//! rationals; counts that explode exponentially are kept in factored form
//! ([`PowerProduct`], [`FactoredTutte`]) and only expanded under a bit
//! budget.
//!
//! Several closed forms ship in two variants. `Published` evaluates the
//! expression exactly as originally stated; `Corrected` applies the fixes
//! that make the result agree with brute-force enumeration on explicit
//! graphs (the product over cycle lengths must start at length-2 cycles,
//! i.e. parallel-edge blocks, and the matching generating function carries
//! `k^{n-1}` copies of each matched edge label, not `k^n / 2`).

use std::collections::BTreeMap;
use std::fmt;

use num::traits::{One, Signed, Zero};
use num::{BigInt, BigRational};

use crate::error::FormulaError;
use crate::tree::OrientedTree;

/// Which reading of a closed form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Published,
    Corrected,
}

/// Which chromatic evaluator to use: the printed closed form, or the
/// block-product form driven by the corrected cycle census.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChromaticVariant {
    Published,
    Block,
}

/// Default bit budget when expanding factored counts.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 20;

fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

fn int_pow(base: &BigInt, mut exp: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut base = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result *= &base;
        }
        exp >>= 1;
        if exp > 0 {
            base = &base * &base;
        }
    }
    result
}

fn rat_pow(base: &BigRational, exp: u64) -> BigRational {
    BigRational::new(
        int_pow(base.numer(), exp),
        int_pow(base.denom(), exp),
    )
}

/// `k^e` as a big integer.
pub fn kpow(k: u64, e: u32) -> BigInt {
    int_pow(&BigInt::from(k), e as u64)
}

fn rat(value: BigInt) -> BigRational {
    BigRational::from_integer(value)
}

fn ratio(numer: BigInt, denom: BigInt) -> BigRational {
    BigRational::new(numer, denom)
}

fn require_integer(value: BigRational, what: &str) -> Result<BigInt, FormulaError> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(FormulaError::NonIntegerResult(format!("{what} = {value}")))
    }
}

// ---------------------------------------------------------------------------
// Factored counts
// ---------------------------------------------------------------------------

/// A nonnegative count kept as `prod base^exponent` (or exactly zero), so
/// that quantities like `2^(k^n)`-sized matching counts stay representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerProduct {
    zero: bool,
    factors: Vec<(u64, BigInt)>,
}

impl PowerProduct {
    pub fn zero() -> Self {
        PowerProduct {
            zero: true,
            factors: Vec::new(),
        }
    }

    pub fn one() -> Self {
        PowerProduct {
            zero: false,
            factors: Vec::new(),
        }
    }

    /// `base^exponent` with `exponent >= 0`.
    pub fn power(base: u64, exponent: BigInt) -> Self {
        assert!(base >= 1, "base must be positive");
        assert!(!exponent.is_negative(), "exponent must be nonnegative");
        if base == 1 || exponent.is_zero() {
            return Self::one();
        }
        PowerProduct {
            zero: false,
            factors: vec![(base, exponent)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn factors(&self) -> &[(u64, BigInt)] {
        &self.factors
    }

    /// Expands to an integer if the result stays below `bit_budget` bits.
    pub fn expand(&self, bit_budget: u64) -> Result<BigInt, FormulaError> {
        if self.zero {
            return Ok(BigInt::zero());
        }
        let mut result = BigInt::one();
        for (base, exponent) in &self.factors {
            let exp = u64::try_from(exponent.clone()).map_err(|_| {
                FormulaError::ValueTooLarge(format!("exponent {exponent} exceeds u64"))
            })?;
            let base_bits = 64 - base.leading_zeros() as u64;
            if exp.saturating_mul(base_bits) > bit_budget {
                return Err(FormulaError::ValueTooLarge(format!(
                    "{base}^{exp} needs more than {bit_budget} bits"
                )));
            }
            result *= int_pow(&BigInt::from(*base), exp);
        }
        Ok(result)
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            return write!(f, "0");
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, e)| {
                if e.is_one() {
                    b.to_string()
                } else {
                    format!("{b}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

// ---------------------------------------------------------------------------
// Bivariate polynomials and the factored Tutte form
// ---------------------------------------------------------------------------

/// A sparse polynomial in `x` and `y` with big-integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TuttePoly(BTreeMap<(u32, u32), BigInt>);

impl TuttePoly {
    pub fn zero() -> Self {
        TuttePoly(BTreeMap::new())
    }

    pub fn constant(c: i64) -> Self {
        let mut p = TuttePoly::zero();
        p.add_term(0, 0, int(c));
        p
    }

    /// The Tutte polynomial of a single cycle of length `m`:
    /// `y + x + x^2 + ... + x^(m-1)`.
    pub fn cycle(m: u64) -> Self {
        let mut p = TuttePoly::zero();
        p.add_term(0, 1, BigInt::one());
        for j in 1..m {
            p.add_term(j as u32, 0, BigInt::one());
        }
        p
    }

    pub fn add_term(&mut self, dx: u32, dy: u32, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.0.entry((dx, dy)).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.0.remove(&(dx, dy));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(dx, dy), c) in &other.0 {
            out.add_term(dx, dy, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = TuttePoly::zero();
        for (&(ax, ay), ac) in &self.0 {
            for (&(bx, by), bc) in &other.0 {
                out.add_term(ax + bx, ay + by, ac * bc);
            }
        }
        out
    }

    /// Multiplies by the monomial `x^dx * y^dy`.
    pub fn mul_monomial(&self, dx: u32, dy: u32) -> Self {
        TuttePoly(
            self.0
                .iter()
                .map(|(&(ax, ay), c)| ((ax + dx, ay + dy), c.clone()))
                .collect(),
        )
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut result = TuttePoly::constant(1);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.0.iter()
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut total = BigRational::zero();
        for (&(dx, dy), c) in &self.0 {
            total += rat(c.clone()) * rat_pow(x, dx as u64) * rat_pow(y, dy as u64);
        }
        total
    }
}

impl fmt::Display for TuttePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (&(dx, dy), c) in self.0.iter().rev() {
            let mut term = String::new();
            if !c.is_one() || (dx == 0 && dy == 0) {
                term.push_str(&c.to_string());
            }
            for (var, d) in [("x", dx), ("y", dy)] {
                if d == 1 {
                    term.push_str(var);
                } else if d > 1 {
                    term.push_str(&format!("{var}^{d}"));
                }
            }
            parts.push(term);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The Tutte polynomial of a cactus of cycles, in block-factored form:
/// `y^loop_exp * prod (y + x + ... + x^(m-1))^multiplicity` with the cycle
/// lengths `m` distinct (powers of two for the graphs built here).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredTutte {
    pub loop_exp: BigInt,
    /// `(cycle length, multiplicity)`, sorted by cycle length.
    pub factors: Vec<(u64, BigInt)>,
}

impl FactoredTutte {
    pub fn new(loop_exp: BigInt, mut factors: Vec<(u64, BigInt)>) -> Self {
        factors.retain(|(_, mult)| !mult.is_zero());
        factors.sort_by_key(|&(m, _)| m);
        FactoredTutte { loop_exp, factors }
    }

    /// Exact evaluation at a rational point, guarded by a bit budget.
    pub fn evaluate(
        &self,
        x: &BigRational,
        y: &BigRational,
        bit_budget: u64,
    ) -> Result<BigRational, FormulaError> {
        let fits = |exp: &BigInt, bits: u64| -> Result<u64, FormulaError> {
            let e = u64::try_from(exp.clone()).map_err(|_| {
                FormulaError::ValueTooLarge(format!("exponent {exp} exceeds u64"))
            })?;
            if e.saturating_mul(bits.max(1)) > bit_budget {
                return Err(FormulaError::ValueTooLarge(format!(
                    "power with exponent {e} exceeds the {bit_budget}-bit budget"
                )));
            }
            Ok(e)
        };
        let rat_bits = |v: &BigRational| v.numer().bits() + v.denom().bits();

        let mut total = BigRational::one();
        if !self.loop_exp.is_zero() {
            if y.is_zero() {
                return Ok(BigRational::zero());
            }
            let e = fits(&self.loop_exp, rat_bits(y))?;
            total *= rat_pow(y, e);
        }
        for (m, mult) in &self.factors {
            // y + x + ... + x^(m-1), via the geometric closed form
            if m.saturating_mul(rat_bits(x).max(1)) > bit_budget {
                return Err(FormulaError::ValueTooLarge(format!(
                    "cycle length {m} exceeds the {bit_budget}-bit budget"
                )));
            }
            let tail = if x.is_one() {
                rat(int(*m as i64 - 1))
            } else {
                // x (x^(m-1) - 1) / (x - 1)
                x * (rat_pow(x, m - 1) - BigRational::one())
                    / (x - BigRational::one())
            };
            let value = y + tail;
            if value.is_zero() {
                return Ok(BigRational::zero());
            }
            let e = fits(mult, rat_bits(&value))?;
            total *= rat_pow(&value, e);
        }
        Ok(total)
    }

    /// Expands to an explicit polynomial; refused when the underlying edge
    /// count `loop_exp + sum m * mult` exceeds `max_edges`.
    pub fn expand(&self, max_edges: u64) -> Result<TuttePoly, FormulaError> {
        let mut edges = self.loop_exp.clone();
        for (m, mult) in &self.factors {
            edges += BigInt::from(*m) * mult;
        }
        if edges > BigInt::from(max_edges) {
            return Err(FormulaError::ValueTooLarge(format!(
                "expanding a {edges}-edge Tutte polynomial (limit {max_edges})"
            )));
        }
        let mut poly = TuttePoly::constant(1);
        for (m, mult) in &self.factors {
            let e = u64::try_from(mult.clone()).expect("bounded by max_edges");
            poly = poly.mul(&TuttePoly::cycle(*m).pow(e));
        }
        let loops = u64::try_from(self.loop_exp.clone()).expect("bounded by max_edges");
        Ok(poly.mul_monomial(0, loops as u32))
    }
}

impl fmt::Display for FactoredTutte {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.loop_exp.is_zero() {
            parts.push(format!("y^{}", self.loop_exp));
        }
        for (m, mult) in &self.factors {
            let base = if *m == 2 {
                "(y + x)".to_string()
            } else {
                format!("(y + x + ... + x^{})", m - 1)
            };
            if mult.is_one() {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{mult}"));
            }
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// The generating function of the perfect matchings of a level-`n` graph:
/// `count * prod_{e in M} e^per_label_exponent` over the matched tree edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMGeneratingMonomial {
    pub count: PowerProduct,
    pub per_label_exponent: BigInt,
    /// Indices into the tree's edge list: the unique perfect matching.
    pub labels: Vec<usize>,
}

impl fmt::Display for PMGeneratingMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.count)?;
        for e in &self.labels {
            write!(f, " * e{}^{}", e + 1, self.per_label_exponent)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// Diameter of the level-`n` graph: `2^(n+1) + d_G (2n - 1) - 4n`.
///
/// Valid for seed diameters `d_G >= 2`; for `d_G = 1` (the two-vertex tree)
/// the true diameter of the resulting `2^n`-cycle is `2^(n-1)` as soon as
/// `n >= 2`, and the verification suite reports the mismatch.
pub fn diameter_formula(d_g: u64, n: u32) -> u64 {
    assert!(d_g >= 1 && n >= 1 && n <= 62);
    (1u64 << (n + 1)) + d_g * (2 * n as u64 - 1) - 4 * n as u64
}

/// Number of generator cycles of length `2^i` at level `n`: one full-length
/// cycle (`i = n`), and `(k - 2) k^(n-i-1)` shorter ones, with `i = 0`
/// counting fixed points (loops).
pub fn cycle_count_formula(k: u64, n: u32, i: u32) -> BigInt {
    assert!(k >= 2 && n >= 1 && i <= n);
    if i == n {
        BigInt::one()
    } else {
        int(k as i64 - 2) * kpow(k, n - i - 1)
    }
}

/// Number of perfect matchings at level `n`:
/// `2^(k (k^n - 2 k^(n-1) + 1) / (2 (k - 1)))` when the seed tree has a
/// perfect matching, zero otherwise.
pub fn pm_count_formula(tree: &OrientedTree, n: u32) -> PowerProduct {
    assert!(n >= 1);
    if tree.perfect_matching().is_none() {
        return PowerProduct::zero();
    }
    let k = tree.k() as u64;
    let numer = BigInt::from(k) * (kpow(k, n) - int(2) * kpow(k, n - 1) + BigInt::one());
    let denom = int(2 * (k as i64 - 1));
    let exponent = require_integer(ratio(numer, denom), "matching count exponent")
        .expect("k is even when a perfect matching exists");
    PowerProduct::power(2, exponent)
}

/// Generating function of the perfect matchings. The per-label exponent is
/// `k^n / 2` in the published reading and `k^(n-1)` in the corrected one.
pub fn pm_generating_function(
    tree: &OrientedTree,
    n: u32,
    variant: Variant,
) -> Result<PMGeneratingMonomial, FormulaError> {
    assert!(n >= 1);
    let matching = tree
        .perfect_matching()
        .ok_or(FormulaError::NoPerfectMatching)?;
    let k = tree.k() as u64;
    let per_label_exponent = match variant {
        Variant::Published => {
            require_integer(ratio(kpow(k, n), int(2)), "per-label exponent k^n/2")?
        }
        Variant::Corrected => kpow(k, n - 1),
    };
    Ok(PMGeneratingMonomial {
        count: pm_count_formula(tree, n),
        per_label_exponent,
        labels: matching,
    })
}

/// The block-factored Tutte polynomial at level `n`. The published product
/// over short cycles starts at length 4 (`i = 2`); the corrected one starts
/// at length 2, because size-two generator orbits are parallel-edge blocks.
pub fn tutte_factored(k: u64, n: u32, variant: Variant) -> Result<FactoredTutte, FormulaError> {
    assert!(k >= 2 && n >= 1);
    if n > 62 {
        return Err(FormulaError::ValueTooLarge(format!(
            "cycle length 2^{n} exceeds u64"
        )));
    }
    let loop_exp = int((k - 1) as i64) * int(k as i64 - 2) * kpow(k, n - 1);
    let mut factors = vec![(1u64 << n, int(k as i64 - 1))];
    let lowest = match variant {
        Variant::Published => 2,
        Variant::Corrected => 1,
    };
    for i in lowest..n {
        let mult = int((k - 1) as i64) * cycle_count_formula(k, n, i);
        factors.push((1u64 << i, mult));
    }
    Ok(FactoredTutte::new(loop_exp, factors))
}

/// Exact evaluation of a factored Tutte polynomial at a rational point.
pub fn tutte_evaluate(
    factored: &FactoredTutte,
    x: &BigRational,
    y: &BigRational,
    bit_budget: u64,
) -> Result<BigRational, FormulaError> {
    factored.evaluate(x, y, bit_budget)
}

/// Number of spanning trees at level `n` as a power of two.
///
/// The corrected exponent `n(k-1) + (k-1)(k-2) sum_{i=1}^{n-1} i k^(n-i-1)`
/// is the product of all block cycle lengths. The published exponent
/// `n + (k^(n-2) (2k-1) - 1)(k-2)/(k-1)` is evaluated verbatim and may not
/// even be an integer (it is not, for `k >= 3, n = 1`).
pub fn spanning_trees_formula(
    k: u64,
    n: u32,
    variant: Variant,
) -> Result<PowerProduct, FormulaError> {
    assert!(k >= 2 && n >= 1);
    let exponent = match variant {
        Variant::Corrected => {
            let mut weighted = BigInt::zero();
            for i in 1..n {
                weighted += int(i as i64) * kpow(k, n - i - 1);
            }
            int((n as i64) * (k as i64 - 1))
                + int((k - 1) as i64) * int(k as i64 - 2) * weighted
        }
        Variant::Published => {
            // k^(n-2) as an exact rational so n = 1 is representable
            let k_pow = ratio(kpow(k, n.max(2) - 2), kpow(k, 2u32.saturating_sub(n)));
            let inner = k_pow * rat(int(2 * k as i64 - 1)) - BigRational::one();
            let frac = inner * ratio(int(k as i64 - 2), int(k as i64 - 1));
            require_integer(
                rat(int(n as i64)) + frac,
                "published spanning-tree exponent",
            )?
        }
    };
    Ok(PowerProduct::power(2, exponent))
}

/// Number of spanning forests at level `n`: the factored Tutte polynomial of
/// the chosen variant evaluated at `(2, 1)`, i.e.
/// `prod (2^m - 1)^multiplicity`.
pub fn spanning_forests_formula(
    k: u64,
    n: u32,
    variant: Variant,
    bit_budget: u64,
) -> Result<BigInt, FormulaError> {
    let factored = tutte_factored(k, n, variant)?;
    let mut total = BigInt::one();
    for (m, mult) in &factored.factors {
        let e = u64::try_from(mult.clone())
            .map_err(|_| FormulaError::ValueTooLarge(format!("multiplicity {mult}")))?;
        if e.saturating_mul(*m) > bit_budget {
            return Err(FormulaError::ValueTooLarge(format!(
                "(2^{m} - 1)^{e} needs more than {bit_budget} bits"
            )));
        }
        let base = int_pow(&int(2), *m) - BigInt::one();
        total *= int_pow(&base, e);
    }
    Ok(total)
}

/// Proper colorings of the loopless level-`n` graph with `lambda` colors.
///
/// `Block` multiplies the exact per-cycle factors
/// `((lambda-1)^(2^i) + (lambda-1)) / lambda` over the corrected census and
/// is the true chromatic polynomial. `Published` evaluates the printed
/// closed form verbatim (which drops the length-2 cycles and the leading
/// `lambda`, and can even go negative).
pub fn chromatic_eval(
    k: u64,
    n: u32,
    lambda: u64,
    variant: ChromaticVariant,
) -> Result<BigInt, FormulaError> {
    assert!(k >= 2 && n >= 1);
    if n > 62 {
        return Err(FormulaError::ValueTooLarge(format!("2^{n} exceeds u64")));
    }
    match variant {
        ChromaticVariant::Block => {
            if lambda == 0 {
                return Ok(BigInt::zero());
            }
            let lam = int(lambda as i64);
            let mut total = lam.clone();
            for i in 1..=n {
                let mult = int((k - 1) as i64) * cycle_count_formula(k, n, i);
                let e = u64::try_from(mult)
                    .map_err(|_| FormulaError::ValueTooLarge("multiplicity".into()))?;
                let m = 1u64 << i;
                let lam1 = &lam - BigInt::one();
                let bracket = ratio(int_pow(&lam1, m) + lam1, lam.clone());
                let bracket = require_integer(bracket, "chromatic block factor")?;
                if bracket.is_zero() && e > 0 {
                    return Ok(BigInt::zero());
                }
                if e.saturating_mul(bracket.bits().max(1)) > DEFAULT_BIT_BUDGET {
                    return Err(FormulaError::ValueTooLarge("chromatic product".into()));
                }
                total *= int_pow(&bracket, e);
            }
            Ok(total)
        }
        ChromaticVariant::Published => {
            let one_minus = int(1 - lambda as i64);
            let est = one_minus.bits().max(1).saturating_mul(1u64 << n);
            if est.saturating_mul(k) > DEFAULT_BIT_BUDGET {
                return Err(FormulaError::ValueTooLarge("chromatic product".into()));
            }
            let lead = int_pow(&one_minus, 1u64 << n) - int(lambda as i64) + BigInt::one();
            let mut total = int_pow(&lead, k - 1);
            for i in 2..n {
                let mult = int((k - 1) as i64) * cycle_count_formula(k, n, i);
                let e = u64::try_from(mult)
                    .map_err(|_| FormulaError::ValueTooLarge("multiplicity".into()))?;
                let factor = int_pow(&one_minus, 1u64 << i) - int(lambda as i64) + BigInt::one();
                total *= int_pow(&factor, e);
            }
            if (k + 1) % 2 == 1 {
                total = -total;
            }
            Ok(total)
        }
    }
}

/// Szeged contribution of a non-special edge on a cycle of length `2^i`:
/// `k^(i-1) (k^n - k^(i-1))`.
pub fn nonspecial_contribution(k: u64, n: u32, i: u32) -> BigInt {
    assert!(k >= 2 && n >= 1 && i >= 1 && i <= n);
    kpow(k, i - 1) * (kpow(k, n) - kpow(k, i - 1))
}

/// Szeged contribution of a special edge on the unique full-length cycle of
/// generator `e = (s, t)`: `n(s,t) n(t,s) k^(2(n-1))`.
pub fn special_contribution_full(
    tree: &OrientedTree,
    edge: usize,
    n: u32,
) -> Result<BigInt, FormulaError> {
    assert!(n >= 1);
    let split = tree
        .split_counts(edge)
        .map_err(|_| FormulaError::InvalidEdge(edge))?;
    let k = tree.k() as u64;
    Ok(int(split.n_st as i64) * int(split.n_ts as i64) * kpow(k, 2 * (n - 1)))
}

/// One family of short cycles sharing a special-edge contribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialFamily {
    /// Number of cycles of length `2^i` in this family.
    pub cycle_count: BigInt,
    /// Szeged contribution of each of the two special edges per cycle.
    pub contribution: BigInt,
}

/// Szeged contributions of special edges on short cycles (`1 <= i < n`) of
/// generator `e = (s, t)`. Writing `a = n(s,t)` and `b = n(t,s)`: in
/// `(b - 1) k^(n-1-i)` cycles each special edge contributes
/// `a k^(i-1) (k^n - a k^(i-1))`, and in the remaining `(a - 1) k^(n-1-i)`
/// cycles it contributes the same expression with `a` and `b` exchanged.
pub fn special_contribution_small(
    tree: &OrientedTree,
    edge: usize,
    n: u32,
    i: u32,
) -> Result<(SpecialFamily, SpecialFamily), FormulaError> {
    if !(1..n).contains(&i) {
        return Err(FormulaError::InvalidRange { i, lo: 1, hi: n });
    }
    let split = tree
        .split_counts(edge)
        .map_err(|_| FormulaError::InvalidEdge(edge))?;
    let k = tree.k() as u64;
    let family = |near: u64, far: u64| SpecialFamily {
        cycle_count: int(far as i64 - 1) * kpow(k, n - 1 - i),
        contribution: int(near as i64)
            * kpow(k, i - 1)
            * (kpow(k, n) - int(near as i64) * kpow(k, i - 1)),
    };
    Ok((
        family(split.n_st as u64, split.n_ts as u64),
        family(split.n_ts as u64, split.n_st as u64),
    ))
}

/// The four Szeged class sums at level `n`, split by edge kind:
/// `a` non-special and `b` special edges on full-length cycles,
/// `c` non-special and `d` special edges on shorter cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SzDecomposition {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl SzDecomposition {
    pub fn total(&self) -> BigInt {
        &self.a + &self.b + &self.c + &self.d
    }
}

pub fn sz_decomposition_terms(tree: &OrientedTree, n: u32) -> SzDecomposition {
    assert!(n >= 1);
    let k = tree.k() as u64;
    let sz = rat(BigInt::from(tree.szeged()));
    let ki = |e: u32| rat(kpow(k, e));
    let c_int = |v: i64| rat(int(v));
    let two_n = rat(int_pow(&int(2), n as u64));
    let kn = ki(n);
    let k2n2 = ki(2 * n - 2);
    // k^(n-2) as a rational; exact even at n = 1
    let kn2 = ratio(kpow(k, n.max(2) - 2), kpow(k, 2u32.saturating_sub(n)));

    let a = c_int((k as i64 - 1) * (k as i64 - 1)) * &k2n2 * (&two_n - c_int(2));
    let b = c_int(2) * &k2n2 * &sz;

    // sum_{i=1}^{n-1} (2^i - 2)(k^n - k^(i-1)), in closed form
    let kn1_minus_1 = ki(n - 1) - BigRational::one();
    let geo_2k = (rat(int_pow(&int(2 * k as i64), (n - 1) as u64)) - BigRational::one())
        / c_int(2 * k as i64 - 1);
    let inner_c = &kn * (&two_n - c_int(2)) - c_int(2) * geo_2k
        - c_int(2 * (n as i64 - 1)) * &kn
        + c_int(2) * &kn1_minus_1 / c_int(k as i64 - 1);
    let c = c_int(k as i64 - 2) * c_int(k as i64 - 1) * &kn2 * inner_c;

    let sz_coeff = c_int(2 * (n as i64 - 1)) * &kn
        - c_int(k as i64 + 2) * &kn1_minus_1 / c_int(k as i64 - 1);
    let inner_d = sz_coeff * &sz - c_int(n as i64 - 1) * c_int(k as i64 - 1) * ki(n + 1)
        + ki(2) * &kn1_minus_1;
    let d = c_int(2) * &kn2 * inner_d;

    let take = |v: BigRational, what: &str| {
        require_integer(v, what).expect("class sums are integral by construction")
    };
    SzDecomposition {
        a: take(a, "A"),
        b: take(b, "B"),
        c: take(c, "C"),
        d: take(d, "D"),
    }
}

/// The five-term Szeged closed form at level `n`, linear in the seed tree's
/// Szeged index `sz_g`.
pub fn szeged_formula(k: u64, n: u32, sz_g: u64) -> Result<BigInt, FormulaError> {
    assert!(k >= 2 && n >= 1);
    let w = wiener_like(k, n, BigInt::from(sz_g));
    require_integer(w * rat(int(2)), "Szeged index")
}

/// The five-term Wiener closed form at level `n`, linear in the seed tree's
/// Wiener index `w_g`. Always exactly half of [`szeged_formula`].
pub fn wiener_formula(k: u64, n: u32, w_g: u64) -> Result<BigInt, FormulaError> {
    assert!(k >= 2 && n >= 1);
    require_integer(wiener_like(k, n, BigInt::from(w_g)), "Wiener index")
}

/// The shared five-term expression; the Szeged form is exactly twice this
/// with the seed Szeged index in place of the seed Wiener index (the two
/// agree on trees).
fn wiener_like(k: u64, n: u32, seed: BigInt) -> BigRational {
    let ki = |e: u32| rat(kpow(k, e));
    let c = |v: i64| rat(int(v));
    let kk = k as i64;
    let two_n = rat(int_pow(&int(2), n as u64));
    let k2n = ki(2 * n);
    let kn = ki(n);
    let nn = c(n as i64);

    let t1 = c((kk - 1) * (kk - 1)) * c(2 * kk * kk - 2 * kk - 1) / (ki(3) * c(2 * kk - 1))
        * &two_n
        * &k2n;
    let t2 = c(2 * (kk - 1) * (kk - 1)) / ki(2) * &nn * &k2n;
    let t3 = c(2 * (kk + 1) * (kk - 1)) / ki(3) * &k2n;
    let t4 = c(2 * (kk + 1) * (kk - 1)) / (ki(1) * c(2 * kk - 1)) * &kn;
    let seed_coeff = c(2) / ki(2) * &nn * &k2n - c(kk * kk + 2) / (ki(3) * c(kk - 1)) * &k2n
        + c(kk + 2) / (ki(2) * c(kk - 1)) * &kn;
    t1 - t2 + t3 - t4 + seed_coeff * rat(seed)
}

/// Wiener index at level `n` when the seed tree is a path on `k` vertices.
pub fn wiener_path_formula(k: u64, n: u32) -> Result<BigInt, FormulaError> {
    assert!(k >= 2 && n >= 1);
    let ki = |e: u32| rat(kpow(k, e));
    let c = |v: i64| rat(int(v));
    let kk = k as i64;
    let two_n = rat(int_pow(&int(2), n as u64));
    let k2n = ki(2 * n);
    let kn = ki(n);

    let t1 = c((kk - 1) * (kk - 1)) * c(2 * kk * kk - 2 * kk - 1) / (ki(3) * c(2 * kk - 1))
        * two_n
        * &k2n;
    let t2 = c((kk - 1) * (kk - 2) * (kk - 3)) / (c(3) * ki(2)) * c(n as i64) * &k2n;
    let t3 = c((kk + 1) * (kk - 2)) * c(kk * kk + 2 * kk - 6) / (c(6) * ki(3)) * &k2n;
    let t4 = c((kk + 1) * (kk - 2) * (2 * kk - 5)) / (c(6) * ki(1) * c(2 * kk - 1)) * &kn;
    require_integer(t1 + t2 - t3 + t4, "path Wiener index")
}

/// Wiener index at level `n` when the seed tree is a star on `k` vertices.
pub fn wiener_star_formula(k: u64, n: u32) -> Result<BigInt, FormulaError> {
    assert!(k >= 2 && n >= 1);
    let ki = |e: u32| rat(kpow(k, e));
    let c = |v: i64| rat(int(v));
    let kk = k as i64;
    let two_n = rat(int_pow(&int(2), n as u64));

    let t1 = c((kk - 1) * (kk - 1)) * c(2 * kk * kk - 2 * kk - 1) / (ki(3) * c(2 * kk - 1))
        * two_n
        * ki(2 * n);
    let t2 = c((kk - 1) * (kk - 2)) / ki(2) * ki(2 * n);
    let t3 = c((kk - 1) * (kk - 2)) / (ki(2) * c(2 * kk - 1)) * ki(n);
    require_integer(t1 - t2 + t3, "star Wiener index")
}

/// Limit of `W(level n) / (diam(level n) * k^(2n) / 2)` as `n` grows:
/// `(w_g / 2) * (k-1)^2 (2k^2 - 2k - 1) / (k^3 (2k - 1))`.
pub fn asymptotic_ratio(k: u64, w_g: u64) -> BigRational {
    assert!(k >= 2);
    let kk = k as i64;
    ratio(int(w_g as i64), int(2))
        * ratio(
            int((kk - 1) * (kk - 1) * (2 * kk * kk - 2 * kk - 1)),
            kpow(k, 3) * int(2 * kk - 1),
        )
}
