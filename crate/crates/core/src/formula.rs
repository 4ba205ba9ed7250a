//! Closed-form extremal sizes and copy counts, and the binomial inequality
//! checkers used around the Fano counting argument.
//!
//! Everything asserted is computed in exact integer or rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Triple;

/// `C(a, b)`, zero when `b > a`.
pub fn binom(a: u64, b: u64) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * u128::from(a - i) / u128::from(i + 1);
    }
    acc
}

fn binom_i(a: i64, b: u64) -> i128 {
    if a < 0 {
        0
    } else {
        binom(a as u64, b) as i128
    }
}

/// Edges of the complete bipartite 3-graph with parts `a` and `n - a`.
pub fn bipartite_edges(n: u64, a: u64) -> u128 {
    binom(a, 2) * u128::from(n - a) + binom(n - a, 2) * u128::from(a)
}

/// `p3(n)`: maximum of [`bipartite_edges`] over the split, attained at
/// `a = floor(n/2)`.
pub fn p3_size(n: u64) -> u128 {
    bipartite_edges(n, n / 2)
}

/// `t3(n) = floor(n/3) floor((n+1)/3) floor((n+2)/3)`.
pub fn t3_size(n: u64) -> u128 {
    u128::from(n / 3) * u128::from((n + 1) / 3) * u128::from(n.div_ceil(3))
}

/// Part sizes `n_i = floor((n + i - 1) / r)` for `i = 1..=r`, ascending.
pub fn t3r_part_sizes(n: u64, r: u64) -> Vec<u64> {
    (1..=r).map(|i| (n + i - 1) / r).collect()
}

/// Sum over 3-subsets of parts of the product of part sizes.
pub fn partite_edges(sizes: &[u64]) -> u128 {
    // elementary symmetric polynomial e_3, built up part by part
    let (mut e1, mut e2, mut e3) = (0u128, 0u128, 0u128);
    for &s in sizes {
        let s = u128::from(s);
        e3 += e2 * s;
        e2 += e1 * s;
        e1 += s;
    }
    e3
}

pub fn t3r_size(n: u64, r: u64) -> u128 {
    partite_edges(&t3r_part_sizes(n, r))
}

/// Edges of the (2,1)-partite 3-graph with `a` vertices in the double part.
pub fn two_one_edges(n: u64, a: u64) -> u128 {
    binom(a, 2) * u128::from(n - a)
}

/// Smallest `a` maximizing `C(a,2)(n-a)`.
pub fn b3_part(n: u64) -> u64 {
    let mut best = 0;
    for a in 0..=n {
        if two_one_edges(n, a) > two_one_edges(n, best) {
            best = a;
        }
    }
    best
}

pub fn b3_size(n: u64) -> u128 {
    two_one_edges(n, b3_part(n))
}

/// `c(n, Fano) = 6 (C(floor(n/2), 4) + (ceil(n/2) - 3) C(floor(n/2), 3))`.
pub fn c_fano(n: u64) -> u128 {
    let fl = (n / 2) as i64;
    let ce = n.div_ceil(2) as i64;
    let v = 6 * (binom_i(fl, 4) + (ce as i128 - 3) * binom_i(fl, 3));
    v.max(0) as u128
}

/// Copies of the Fano plane through one edge added inside a part of size
/// `inside` of the complete bipartite 3-graph whose other part has `other`
/// vertices.
pub fn fano_through_in_part_edge(inside: u64, other: u64) -> u128 {
    let v = 6 * (binom_i(other as i64, 4) + (inside as i128 - 3) * binom_i(other as i64, 3));
    v.max(0) as u128
}

/// `q(n, Fano)`, the largest number of edges addable to the bipartite
/// extremal host pairwise sharing zero or two points.
pub fn q_fano(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        match (n / 2) % 4 {
            0 => n,
            1 => n.saturating_sub(2),
            _ => n.saturating_sub(4),
        }
    } else {
        let ce = n.div_ceil(2);
        match ce % 4 {
            0 => ce,
            1 => ce - 1,
            _ => ce.saturating_sub(2),
        }
    }
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn pow(base: &BigRational, exp: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Leading term of `c(n, F)` for `f5`, `b5` and expanded cliques `L<r+1>`.
/// For `L` patterns `r` defaults to the clique size minus one and must agree
/// with it when given.
pub fn c_asymptotic(pattern: &str, n: u64, r: Option<u64>) -> Result<BigRational> {
    let third = ratio(n, 3);
    match pattern {
        "f5" => Ok(ratio(3, 1) * &third * &third),
        "b5" => Ok(ratio(2, 1) * &third * &third),
        _ => {
            let s: u64 = pattern
                .strip_prefix('L')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::UnknownPattern(pattern.to_string()))?;
            if s < 4 {
                return Err(Error::InvalidParameter(format!(
                    "{pattern} has no partite extremal host (needs r >= 3)"
                )));
            }
            let parts = s - 1;
            if let Some(r) = r {
                if r != parts {
                    return Err(Error::InvalidParameter(format!(
                        "{pattern} pairs with r = {parts}, got r = {r}"
                    )));
                }
            }
            // ((1 - 2/r) n)^(C(r+1,2) - 1) * (n/r)^(r-1)
            let big = ratio((parts - 2) * n, parts);
            let small = ratio(n, parts);
            let exp_big = (binom(s, 2) - 1) as usize;
            Ok(pow(&big, exp_big) * pow(&small, (parts - 1) as usize))
        }
    }
}

/// Where a [`CopyBound`] value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    EngineMin,
}

/// A value of `c(n, F)`, either from a closed form or as the engine minimum
/// over all single-edge additions, with the minimizing edge attached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyBound {
    pub pattern: String,
    pub n: usize,
    pub value: u128,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Triple>,
}

/// Outcome of evaluating an implication `hypothesis => conclusion`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaOutcome {
    /// The hypothesis is false; nothing to check.
    HypothesisFalse,
    Holds,
    Violated,
}

impl LemmaOutcome {
    /// True unless the conclusion failed under a true hypothesis.
    pub fn is_consistent(&self) -> bool {
        !matches!(self, LemmaOutcome::Violated)
    }
}

/// Inputs to the two binomial lemmas, validated against their domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaParams {
    pub n: u64,
    pub x: u64,
    pub y: u64,
    pub t: u64,
    pub s: u64,
}

/// Smallest `s >= 0` with `s^2 (n - 2) >= 2t`, i.e. `ceil(sqrt(2t/(n-2)))`.
pub fn split_slack(n: u64, t: u64) -> u64 {
    let d = u128::from(n - 2);
    let target = 2 * u128::from(t);
    let mut s = ((target as f64 / d as f64).sqrt().floor() as u64).saturating_sub(1);
    while u128::from(s) * u128::from(s) * d < target {
        s += 1;
    }
    s
}

impl LemmaParams {
    /// Domain: `x, y, t > 0`, `x + y = n`, `t < n^2`; `s` is derived from `t`.
    pub fn for_balance(n: u64, x: u64, t: u64) -> Result<Self> {
        if n < 3 || x == 0 || x >= n || t == 0 || t >= n * n {
            return Err(Error::InvalidParameter(format!(
                "balance lemma needs 0 < x < n, 0 < t < n^2 (n = {n}, x = {x}, t = {t})"
            )));
        }
        Ok(LemmaParams {
            n,
            x,
            y: n - x,
            t,
            s: split_slack(n, t),
        })
    }

    /// Domain: `x, y, s > 0`, `x + y = n`, `s < n/10`.
    pub fn for_fano_count(n: u64, x: u64, s: u64) -> Result<Self> {
        if x == 0 || x >= n || s == 0 || 10 * s >= n {
            return Err(Error::InvalidParameter(format!(
                "Fano count lemma needs 0 < x < n, 0 < s < n/10 (n = {n}, x = {x}, s = {s})"
            )));
        }
        Ok(LemmaParams {
            n,
            x,
            y: n - x,
            t: 0,
            s,
        })
    }
}

/// If `C(x,2) y + C(y,2) x >= p3(n) - t` then
/// `floor(n/2) - s <= x <= ceil(n/2) + s`, strictly when `t < (n-2)/2`.
pub fn lemma1_check(n: u64, x: u64, t: u64) -> Result<LemmaOutcome> {
    let p = LemmaParams::for_balance(n, x, t)?;
    let lhs = bipartite_edges(n, x) as i128;
    if lhs < p3_size(n) as i128 - i128::from(t) {
        return Ok(LemmaOutcome::HypothesisFalse);
    }
    let (x, s) = (p.x as i64, p.s as i64);
    let fl = (n / 2) as i64;
    let ce = n.div_ceil(2) as i64;
    let mut holds = fl - s <= x && x <= ce + s;
    if 2 * t < n - 2 {
        holds &= fl - s < x && x < ce + s;
    }
    Ok(if holds {
        LemmaOutcome::Holds
    } else {
        LemmaOutcome::Violated
    })
}

/// If `floor(n/2) - s <= x <= ceil(n/2) + s` then
/// `6 C(y,4) + 6 (x-3) C(y,3) >= c(n, Fano) - (s+3) n^3`.
pub fn lemma2_check(n: u64, x: u64, s: u64) -> Result<LemmaOutcome> {
    let p = LemmaParams::for_fano_count(n, x, s)?;
    let (xi, si) = (p.x as i64, p.s as i64);
    let fl = (n / 2) as i64;
    let ce = n.div_ceil(2) as i64;
    if !(fl - si <= xi && xi <= ce + si) {
        return Ok(LemmaOutcome::HypothesisFalse);
    }
    let lhs = 6 * binom_i(p.y as i64, 4) + 6 * (i128::from(xi) - 3) * binom_i(p.y as i64, 3);
    let n3 = i128::from(n).pow(3);
    let rhs = c_fano(n) as i128 - (i128::from(si) + 3) * n3;
    Ok(if lhs >= rhs {
        LemmaOutcome::Holds
    } else {
        LemmaOutcome::Violated
    })
}

/// One row of the formula table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaRow {
    pub n: u64,
    pub p3: u128,
    pub t3: u128,
    pub b3: u128,
    pub r: u64,
    pub t3r: u128,
    pub c_fano: Option<u128>,
    pub q_fano: Option<u64>,
}

/// Table row; `c_fano` is reported from `n = 7` and `q_fano` from `n = 8`.
pub fn formula_row(n: u64, r: u64) -> FormulaRow {
    FormulaRow {
        n,
        p3: p3_size(n),
        t3: t3_size(n),
        b3: b3_size(n),
        r,
        t3r: t3r_size(n, r),
        c_fano: (n >= 7).then(|| c_fano(n)),
        q_fano: (n >= 8).then(|| q_fano(n)),
    }
}

/// Relative gap `|exact - leading| / exact` as a float, for reports only.
pub fn relative_gap(exact: u128, leading: &BigRational) -> f64 {
    if exact == 0 {
        return f64::NAN;
    }
    let e = BigRational::from_integer(BigInt::from(exact));
    ((&e - leading).abs() / e).to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over every vector of part sizes summing to `n` with
    /// `parts` parts.
    fn max_partite(n: u64, parts: usize) -> u128 {
        fn go(rem: u64, k: usize, acc: &mut Vec<u64>, best: &mut u128) {
            if k == 1 {
                acc.push(rem);
                *best = (*best).max(partite_edges(acc));
                acc.pop();
                return;
            }
            for s in 0..=rem {
                acc.push(s);
                go(rem - s, k - 1, acc, best);
                acc.pop();
            }
        }
        let mut best = 0;
        go(n, parts, &mut Vec::new(), &mut best);
        best
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 4), 1);
        assert_eq!(binom(6, 3), 20);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(60, 30), 118264581564861424);
    }

    #[test]
    fn sizes_small() {
        assert_eq!(p3_size(4), 4);
        assert_eq!(p3_size(8), 48);
        assert_eq!(t3_size(6), 8);
        assert_eq!(b3_size(6), 12);
        assert_eq!(b3_part(6), 4);
    }

    #[test]
    fn sizes_match_brute_force() {
        for n in 3..=60u64 {
            let p = (0..=n).map(|a| bipartite_edges(n, a)).max().unwrap();
            assert_eq!(p3_size(n), p, "p3({n})");
            // f(x) = (n-2) x (n-x) / 2 at the balanced split
            assert_eq!(2 * p3_size(n), u128::from(n - 2) * u128::from(n / 2) * u128::from(n - n / 2));
            let b = (0..=n).map(|a| two_one_edges(n, a)).max().unwrap();
            assert_eq!(b3_size(n), b, "b3({n})");
            assert_eq!(t3r_size(n, 3), t3_size(n));
            if n <= 30 {
                for r in 3..=6u64 {
                    assert_eq!(t3r_size(n, r), max_partite(n, r as usize), "t3r({n},{r})");
                }
            }
        }
        for n in [30u64, 60] {
            let a = b3_part(n) as i64;
            assert!((3 * a - 2 * n as i64).abs() <= 3);
        }
    }

    #[test]
    fn fano_counts() {
        assert_eq!(c_fano(8), 30);
        assert_eq!(c_fano(9), 54);
        assert_eq!(c_fano(12), 450);
        assert_eq!(fano_through_in_part_edge(5, 4), 54);
        assert_eq!(fano_through_in_part_edge(4, 5), 90);
        for n in [2000u64, 4000] {
            let approx = 20.0 * (n as f64 / 4.0).powi(4);
            let ratio = c_fano(n) as f64 / approx;
            assert!((ratio - 1.0).abs() < 0.02, "n = {n}: ratio {ratio}");
        }
    }

    #[test]
    fn q_fano_table() {
        assert_eq!(q_fano(8), 8);
        assert_eq!(q_fano(10), 8);
        assert_eq!(q_fano(12), 8);
        assert_eq!(q_fano(14), 10);
        assert_eq!(q_fano(16), 16);
        assert_eq!(q_fano(9), 4);
        assert_eq!(q_fano(11), 4);
        assert_eq!(q_fano(13), 5);
        assert_eq!(q_fano(15), 8);
    }

    #[test]
    fn asymptotic_leading_terms() {
        assert_eq!(c_asymptotic("f5", 9, None).unwrap(), ratio(27, 1));
        assert_eq!(c_asymptotic("b5", 9, None).unwrap(), ratio(18, 1));
        // L4, r = 3, n = 12: (4)^5 * (4)^2
        assert_eq!(c_asymptotic("L4", 12, Some(3)).unwrap(), ratio(4u64.pow(7), 1));
        assert!(c_asymptotic("L4", 12, Some(4)).is_err());
        assert!(c_asymptotic("fano", 12, None).is_err());
        assert!(c_asymptotic("L3", 12, None).is_err());
    }

    #[test]
    fn slack_is_ceiling_sqrt() {
        for n in [20u64, 33, 60] {
            for t in 1..n * n {
                let s = split_slack(n, t);
                let exact = (2.0 * t as f64 / (n - 2) as f64).sqrt().ceil() as u64;
                assert!(s * s * (n - 2) >= 2 * t);
                assert!(s == 0 || (s - 1) * (s - 1) * (n - 2) < 2 * t);
                assert!(s.abs_diff(exact) <= 1);
            }
        }
    }

    #[test]
    fn lemma_edge_cases() {
        // c(n, Fano) is attained when the larger part plays x.
        for n in [20u64, 21, 40, 41] {
            let x = n.div_ceil(2);
            let y = n - x;
            let lhs = 6 * binom(y, 4) as i128 + 6 * (x as i128 - 3) * binom(y, 3) as i128;
            assert_eq!(lhs, c_fano(n) as i128);
            assert_eq!(lemma2_check(n, x, 1).unwrap(), LemmaOutcome::Holds);
            assert_eq!(lemma2_check(n, n / 2, 1).unwrap(), LemmaOutcome::Holds);
        }
        assert_eq!(lemma1_check(20, 1, 1).unwrap(), LemmaOutcome::HypothesisFalse);
        assert_eq!(lemma1_check(20, 10, 1).unwrap(), LemmaOutcome::Holds);
        assert_eq!(lemma2_check(40, 1, 1).unwrap(), LemmaOutcome::HypothesisFalse);
        assert!(lemma1_check(20, 0, 1).is_err());
        assert!(lemma1_check(20, 5, 400).is_err());
        assert!(lemma2_check(20, 5, 2).is_err());
        assert!(lemma2_check(20, 5, 0).is_err());
    }

    #[test]
    fn formula_rows() {
        let row = formula_row(8, 4);
        assert_eq!(row.p3, 48);
        assert_eq!(row.c_fano, Some(30));
        assert_eq!(row.q_fano, Some(8));
        assert_eq!(formula_row(7, 4).q_fano, None);
        assert_eq!(formula_row(6, 4).c_fano, None);
    }
}
